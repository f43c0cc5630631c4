use super::{Logic, Source, SourceGoal, Surface};
use crate::contexts::Decomposition;
use crate::kernel::Instance;
use crate::term::{BranchMap, Command, DecTerm, Positive};

pub fn print_positive<I: Instance>(t: &Positive<I>) -> String {
    format!("{} . {}", t.pattern, print_dec_term(&t.dec))
}

pub fn print_dec_term<I: Instance>(d: &DecTerm<I>) -> String {
    match d {
        DecTerm::Label(x) => x.to_string(),
        DecTerm::Branches(f) => print_branches(f),
        DecTerm::Unit => "()".into(),
        DecTerm::Pair(l, r) => format!("({}, {})", print_dec_term(l), print_dec_term(r)),
    }
}

fn print_branches<I: Instance>(f: &BranchMap<I>) -> String {
    if f.is_empty() {
        return "{}".into();
    }
    let arms: Vec<String> = f.iter().map(|(p, c)| format!("{p} => {}", print_command(c))).collect();
    format!("{{ {} }}", arms.join("; "))
}

pub fn print_command<I: Instance>(c: &Command<I>) -> String {
    match c {
        Command::Select(x, t) => format!("< {x} | {} >", print_positive(t)),
        Command::Cut { branches, molecule, arg } => {
            format!("< {} : {molecule} | {} >", print_branches(branches), print_positive(arg))
        }
    }
}

pub fn print_type_dec<A: std::fmt::Display, B: std::fmt::Display>(d: &Decomposition<A, B>) -> String {
    match d {
        Decomposition::PosLeaf(a) => a.to_string(),
        Decomposition::NegLeaf(m) => format!("!{m}"),
        Decomposition::Unit => "()".into(),
        Decomposition::Pair(l, r) => format!("({}, {})", print_type_dec(l), print_type_dec(r)),
    }
}

pub(super) fn print_source<I: Surface>(logic: Logic, s: &Source<I>) -> String {
    let goal = match &s.goal {
        SourceGoal::Pos { term, molecule } => match term {
            Some(t) => format!("pos ( {} ) : {molecule}", print_positive(t)),
            None => format!("pos ? : {molecule}"),
        },
        SourceGoal::Dec { term, dec } => {
            let t = term.as_ref().map_or("?".into(), print_dec_term);
            format!("dec {t} : {}", print_type_dec(dec))
        }
        SourceGoal::Cmd(c) => format!("cmd {}", c.as_ref().map_or("?".into(), print_command)),
    };
    format!("logic {logic};\nctx {};\n{goal}\n", I::print_context(&s.context))
}
