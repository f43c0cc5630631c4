use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use laf::contexts::{acc_neg, Leaf};
use laf::j::{molecule_closure_j, Positioned, J};
use laf::k1::{molecule_closure, FormulaK1, K1};
use laf::kernel::{check_judgment, Context, Instance, TypeDec};
use laf::machine::{opaque_env, run, Config, Outcome};
use laf::realisability::{PositionalModel, SemError, Semantics, TrivialModel};
use laf::search::{consistency_sweep, search_cmd, search_dec, search_pos, SearchBudget};
use laf::sequent::{translate_j, translate_k1, Focus};
use laf::syntax::{
    parse_judgment, parse_molecule, parse_positioned, print_judgment, print_type_dec, Logic, Source, SourceGoal,
    SourceJudgment, Surface,
};

#[derive(Parser)]
#[command(name = "laf", version, about = "Proof-term checker for a focussed sequent calculus")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Type-check a judgment file.
    Check { file: PathBuf },
    /// List the decompositions of a molecule.
    Decomps {
        #[arg(long)]
        logic: Logic,
        formula: String,
    },
    /// Semantic provability in the boolean model of the logic.
    Semprove {
        #[arg(long)]
        logic: Logic,
        formula: String,
    },
    /// Run a command on the abstract machine.
    Eval {
        file: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        fuel: usize,
        #[arg(long)]
        trace: bool,
    },
    /// Search for a term inhabiting the goal of a judgment file.
    Prove {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Print the sequent(s) a judgment stands for.
    Translate { file: PathBuf },
    /// Look for a closed command over a universe of molecules.
    Sweep {
        #[arg(long)]
        logic: Logic,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        universe: PathBuf,
    },
}

/// 1 is a negative answer; 2 a usage or input error.
struct Failure(u8, String);

type Run = Result<(), Failure>;

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure(2, msg.to_string())
}

fn negative(msg: impl std::fmt::Display) -> Failure {
    Failure(1, msg.to_string())
}

/// The logic-specific parts of each subcommand.
trait Front: Surface {
    fn sig() -> Self;
    fn closure(roots: &[Self::Molecule]) -> Vec<Self::Molecule>;
    fn translate(ctx: &Context<Self>, focus: &Focus<Self>) -> Result<String, String>;
    fn sem_provable(m: &Self::Molecule) -> Result<bool, SemError>;
    fn parse_universe_entry(line: &str) -> Result<Self::Molecule, String>;
}

impl Front for K1 {
    fn sig() -> Self {
        K1
    }

    fn closure(roots: &[FormulaK1]) -> Vec<FormulaK1> {
        molecule_closure(roots)
    }

    fn translate(ctx: &Context<K1>, focus: &Focus<K1>) -> Result<String, String> {
        Ok(translate_k1(ctx, focus).0)
    }

    fn sem_provable(m: &FormulaK1) -> Result<bool, SemError> {
        Semantics::new(&K1, &TrivialModel::new()).sem_provable(m)
    }

    fn parse_universe_entry(line: &str) -> Result<FormulaK1, String> {
        parse_molecule::<K1>(line).map_err(|e| e.to_string())
    }
}

impl Front for J {
    fn sig() -> Self {
        J
    }

    fn closure(roots: &[Positioned]) -> Vec<Positioned> {
        molecule_closure_j(roots.iter().map(|m| &m.formula))
    }

    fn translate(ctx: &Context<J>, focus: &Focus<J>) -> Result<String, String> {
        translate_j(ctx, focus).map(|s| s.0).map_err(|e| e.to_string())
    }

    fn sem_provable(m: &Positioned) -> Result<bool, SemError> {
        Semantics::new(&J, &PositionalModel).sem_provable(m)
    }

    fn parse_universe_entry(line: &str) -> Result<Positioned, String> {
        parse_positioned(line).map_err(|e| e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<SourceJudgment, Failure> {
    let text = read(path)?;
    parse_judgment(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn check<I: Front>(src: &Source<I>) -> Run {
    let j = src.judgment().ok_or_else(|| usage("the goal has a `?` hole; use `prove` to fill it"))?;
    match check_judgment(&I::sig(), &j) {
        Ok(trace) => {
            let rules: Vec<String> = trace.iter().map(|r| r.to_string()).collect();
            println!("accepted");
            println!("rules: {}", rules.join(" "));
            Ok(())
        }
        Err(r) => Err(negative(format!("rejected: {} at path {:?}\n  {}", r.error.kind(), r.path, r.error))),
    }
}

fn decomps<I: Front>(formula: &str) -> Run {
    let m = parse_molecule::<I>(formula).map_err(usage)?;
    for (p, delta) in I::sig().decompositions(&m) {
        println!("{p} : {}", print_type_dec(&delta));
    }
    Ok(())
}

fn semprove<I: Front>(formula: &str) -> Run {
    let m = parse_molecule::<I>(formula).map_err(usage)?;
    let b = I::sem_provable(&m).map_err(negative)?;
    println!("{b}");
    Ok(())
}

fn eval<I: Front>(src: &Source<I>, fuel: usize, trace: bool) -> Run {
    let SourceGoal::Cmd(Some(command)) = &src.goal else {
        return Err(usage("eval needs a `cmd` judgment with a complete command"));
    };
    let cfg = Config { env: opaque_env::<I>(&src.context), command: command.clone() };
    let outcome = run(&I::sig(), cfg, fuel);
    if trace {
        for line in outcome.trace() {
            println!("{line}");
        }
    }
    match outcome {
        Outcome::Halted { reason, trace } => {
            println!("halted after {} steps: {reason}", trace.len());
            Ok(())
        }
        Outcome::StuckAt { error, trace } => Err(negative(format!("stuck after {} steps: {error}", trace.len()))),
        Outcome::OutOfFuel { .. } => Err(negative(format!("out of fuel after {fuel} steps"))),
    }
}

fn goal_molecules<I: Instance>(goal: &SourceGoal<I>) -> Vec<I::Molecule> {
    match goal {
        SourceGoal::Pos { molecule, .. } => vec![molecule.clone()],
        SourceGoal::Dec { dec, .. } => dec_molecules::<I>(dec),
        SourceGoal::Cmd(_) => vec![],
    }
}

fn dec_molecules<I: Instance>(dec: &TypeDec<I>) -> Vec<I::Molecule> {
    dec.leaves()
        .into_iter()
        .filter_map(|l| match l {
            Leaf::Neg(m) => Some(m.clone()),
            Leaf::Pos(_) => None,
        })
        .collect()
}

fn prove<I: Front>(src: &Source<I>, depth: usize) -> Result<Source<I>, Failure> {
    let sig = I::sig();
    let ctx = &src.context;
    let mut roots = acc_neg(ctx);
    roots.extend(goal_molecules(&src.goal));
    let candidates = I::closure(&roots);
    let budget = SearchBudget::depth(depth);
    let goal = match &src.goal {
        SourceGoal::Pos { molecule, .. } => search_pos(&sig, ctx, molecule, budget, &candidates)
            .map(|t| SourceGoal::Pos { term: Some(t), molecule: molecule.clone() }),
        SourceGoal::Dec { dec, .. } => {
            search_dec(&sig, ctx, dec, budget, &candidates).map(|t| SourceGoal::Dec { term: Some(t), dec: dec.clone() })
        }
        SourceGoal::Cmd(_) => search_cmd(&sig, ctx, budget, &candidates).map(|c| SourceGoal::Cmd(Some(c))),
    };
    let goal = goal.ok_or_else(|| negative(format!("no term found up to depth {depth}")))?;
    Ok(Source { context: ctx.clone(), goal })
}

fn translate<I: Front>(src: &Source<I>) -> Run {
    let foci = match &src.goal {
        SourceGoal::Cmd(_) => vec![Focus::None],
        SourceGoal::Pos { molecule, .. } => vec![Focus::Positive(molecule.clone())],
        SourceGoal::Dec { dec, .. } => Focus::of_dec(dec),
    };
    for f in &foci {
        println!("{}", I::translate(&src.context, f).map_err(negative)?);
    }
    Ok(())
}

fn sweep<I: Front>(depth: usize, universe: &Path) -> Run {
    let text = read(universe)?;
    let mut roots = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let m = I::parse_universe_entry(line)
            .map_err(|e| usage(format!("{}:{}: {e}", universe.display(), n + 1)))?;
        roots.push(m);
    }
    let sig = I::sig();
    let closure = I::closure(&roots);
    let report = consistency_sweep(&sig, &sig.empty_context(), &closure, depth);
    match report.counterexample {
        None => {
            println!("consistent: no closed command up to depth {depth} over {} molecules", report.candidates);
            Ok(())
        }
        Some(c) => Err(negative(format!("closed command found: {}", laf::syntax::print_command(&c)))),
    }
}

fn with_source(j: &SourceJudgment, k1: impl FnOnce(&Source<K1>) -> Run, jf: impl FnOnce(&Source<J>) -> Run) -> Run {
    match j {
        SourceJudgment::K1(s) => k1(s),
        SourceJudgment::J(s) => jf(s),
    }
}

fn dispatch(cmd: Cmd) -> Run {
    match cmd {
        Cmd::Check { file } => with_source(&load(&file)?, check, check),
        Cmd::Decomps { logic: Logic::K1, formula } => decomps::<K1>(&formula),
        Cmd::Decomps { logic: Logic::J, formula } => decomps::<J>(&formula),
        Cmd::Semprove { logic: Logic::K1, formula } => semprove::<K1>(&formula),
        Cmd::Semprove { logic: Logic::J, formula } => semprove::<J>(&formula),
        Cmd::Eval { file, fuel, trace } => {
            with_source(&load(&file)?, |s| eval(s, fuel, trace), |s| eval(s, fuel, trace))
        }
        Cmd::Prove { file, depth } => {
            let found = match load(&file)? {
                SourceJudgment::K1(s) => SourceJudgment::K1(prove(&s, depth)?),
                SourceJudgment::J(s) => SourceJudgment::J(prove(&s, depth)?),
            };
            print!("{}", print_judgment(&found));
            Ok(())
        }
        Cmd::Translate { file } => with_source(&load(&file)?, translate, translate),
        Cmd::Sweep { logic: Logic::K1, depth, universe } => sweep::<K1>(depth, &universe),
        Cmd::Sweep { logic: Logic::J, depth, universe } => sweep::<J>(depth, &universe),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("{msg}");
            ExitCode::from(code)
        }
    }
}
