use std::collections::BTreeSet;

use super::lexer::{lex, Tok, Token};
use super::{Logic, ParseError, Source, SourceGoal, SourceJudgment, Surface};
use crate::contexts::{Decomposition, ParametricContext, Place, Store};
use crate::j::{FormulaJ, JContext, JNegLabel, JPosLabel, PatternJ, Positioned, Side, J};
use crate::k1::{Choice, FormulaK1, Name, PatternK1, K1};
use crate::kernel::{Context, Instance, TypeDec};
use crate::term::{BranchMap, Command, DecTerm, Positive};

/// Token cursor that remembers what it was looking for at the current
/// position, for error messages.
pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
    expected: BTreeSet<String>,
}

impl Parser {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        let toks = lex(src).map_err(|e| ParseError {
            line: e.line,
            col: e.col,
            expected: BTreeSet::from(["a token".to_string()]),
            found: format!("`{}`", e.found),
        })?;
        Ok(Parser {
            toks,
            pos: 0,
            expected: BTreeSet::new(),
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        self.expected.clear();
        t
    }

    pub fn error(&self) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.line,
            col: t.col,
            expected: self.expected.clone(),
            found: t.tok.to_string(),
        }
    }

    /// Fails here, adding `what` to the expected set.
    pub fn fail<T>(&mut self, what: &str) -> Result<T, ParseError> {
        self.expected.insert(what.to_string());
        Err(self.error())
    }

    pub fn eat(&mut self, sym: &'static str) -> bool {
        if *self.peek() == Tok::Sym(sym) {
            self.bump();
            true
        } else {
            self.expected.insert(format!("`{sym}`"));
            false
        }
    }

    pub fn expect(&mut self, sym: &'static str) -> Result<(), ParseError> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Tok::Ident(w) if w == kw) {
            self.bump();
            true
        } else {
            self.expected.insert(format!("`{kw}`"));
            false
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    pub fn expect_eof(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.fail("end of input")
        }
    }

    fn pos_label_text(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Tok::PosLabel(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => self.fail("a positive label"),
        }
    }

    fn neg_label_text(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Tok::NegLabel(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => self.fail("a negative label"),
        }
    }
}

pub(super) fn parse_judgment(src: &str) -> Result<SourceJudgment, ParseError> {
    let mut p = Parser::new(src)?;
    p.expect_keyword("logic")?;
    let logic = if p.eat_keyword("k1") {
        Logic::K1
    } else if p.eat_keyword("j") {
        Logic::J
    } else {
        return Err(p.error());
    };
    p.expect(";")?;
    Ok(match logic {
        Logic::K1 => SourceJudgment::K1(source(&mut p)?),
        Logic::J => SourceJudgment::J(source(&mut p)?),
    })
}

fn source<I: Surface>(p: &mut Parser) -> Result<Source<I>, ParseError> {
    p.expect_keyword("ctx")?;
    p.expect("{")?;
    let context = I::parse_context(p)?;
    p.expect("}")?;
    p.expect(";")?;
    let goal = if p.eat_keyword("pos") {
        let term = if p.eat("?") {
            None
        } else {
            p.expect("(")?;
            let t = positive::<I>(p)?;
            p.expect(")")?;
            Some(t)
        };
        p.expect(":")?;
        SourceGoal::Pos {
            term,
            molecule: I::parse_molecule(p)?,
        }
    } else if p.eat_keyword("dec") {
        let term = if p.eat("?") { None } else { Some(dec_term::<I>(p)?) };
        p.expect(":")?;
        SourceGoal::Dec {
            term,
            dec: type_dec::<I>(p)?,
        }
    } else if p.eat_keyword("cmd") {
        SourceGoal::Cmd(if p.eat("?") { None } else { Some(command::<I>(p)?) })
    } else {
        return Err(p.error());
    };
    p.expect_eof()?;
    Ok(Source { context, goal })
}

fn positive<I: Surface>(p: &mut Parser) -> Result<Positive<I>, ParseError> {
    let pattern = I::parse_pattern(p)?;
    p.expect(".")?;
    Ok(Positive::new(pattern, dec_term(p)?))
}

fn dec_term<I: Surface>(p: &mut Parser) -> Result<DecTerm<I>, ParseError> {
    if matches!(p.peek(), Tok::PosLabel(_)) {
        return Ok(DecTerm::Label(I::parse_pos_label(p)?));
    }
    if *p.peek() == Tok::Sym("{") {
        return Ok(DecTerm::Branches(branches(p)?));
    }
    p.expected.insert("a positive label".into());
    p.expected.insert("`{`".into());
    p.expect("(")?;
    if p.eat(")") {
        return Ok(DecTerm::Unit);
    }
    let l = dec_term(p)?;
    p.expect(",")?;
    let r = dec_term(p)?;
    p.expect(")")?;
    Ok(DecTerm::pair(l, r))
}

fn branches<I: Surface>(p: &mut Parser) -> Result<BranchMap<I>, ParseError> {
    p.expect("{")?;
    let mut f = BranchMap::new();
    if p.eat("}") {
        return Ok(f);
    }
    loop {
        let pat = I::parse_pattern(p)?;
        if f.contains_key(&pat) {
            return p.fail("a pattern without a branch yet");
        }
        p.expect("=>")?;
        let c = command(p)?;
        f.insert(pat, c);
        if p.eat("}") {
            return Ok(f);
        }
        p.expect(";")?;
    }
}

fn command<I: Surface>(p: &mut Parser) -> Result<Command<I>, ParseError> {
    p.expect("<")?;
    let c = if matches!(p.peek(), Tok::NegLabel(_)) {
        let x = I::parse_neg_label(p)?;
        p.expect("|")?;
        Command::Select(x, positive(p)?)
    } else if *p.peek() == Tok::Sym("{") {
        let f = branches(p)?;
        p.expect(":")?;
        let molecule = I::parse_molecule(p)?;
        p.expect("|")?;
        Command::Cut {
            branches: f,
            molecule,
            arg: positive(p)?,
        }
    } else {
        p.expected.insert("`{`".into());
        return p.fail("a negative label");
    };
    p.expect(">")?;
    Ok(c)
}

fn type_dec<I: Surface>(p: &mut Parser) -> Result<TypeDec<I>, ParseError> {
    if p.eat("(") {
        if p.eat(")") {
            return Ok(Decomposition::Unit);
        }
        let l = type_dec::<I>(p)?;
        p.expect(",")?;
        let r = type_dec::<I>(p)?;
        p.expect(")")?;
        return Ok(Decomposition::pair(l, r));
    }
    if p.eat("!") {
        return Ok(Decomposition::NegLeaf(I::parse_molecule(p)?));
    }
    Ok(Decomposition::PosLeaf(I::parse_atom(p)?))
}

fn comma_list<T>(p: &mut Parser, mut item: impl FnMut(&mut Parser) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
    let mut out = vec![item(p)?];
    while p.eat(",") {
        out.push(item(p)?);
    }
    Ok(out)
}

/// `name: items` sections separated by `;`, each at most once.
fn sections(
    p: &mut Parser,
    names: &[&'static str],
    mut section: impl FnMut(&mut Parser, &'static str) -> Result<(), ParseError>,
) -> Result<(), ParseError> {
    let mut seen = BTreeSet::new();
    if *p.peek() == Tok::Sym("}") {
        return Ok(());
    }
    loop {
        let Some(&name) = names.iter().find(|n| !seen.contains(*n) && matches!(p.peek(), Tok::Ident(w) if w == *n))
        else {
            for n in names.iter().filter(|n| !seen.contains(*n)) {
                p.expected.insert(format!("`{n}`"));
            }
            return Err(p.error());
        };
        p.bump();
        seen.insert(name);
        p.expect(":")?;
        section(p, name)?;
        if *p.peek() == Tok::Sym("}") {
            return Ok(());
        }
        p.expected.insert("`}`".into());
        p.expect(";")?;
    }
}

fn index_label(p: &mut Parser, text: String) -> Result<usize, ParseError> {
    text.parse().or_else(|_| p.fail("a numeric label"))
}

// K1

fn formula_k1(p: &mut Parser) -> Result<FormulaK1, ParseError> {
    let l = atomic_k1(p)?;
    let op = match p.peek() {
        Tok::Sym(s @ ("&+" | "|+" | "&-" | "|-")) => *s,
        _ => return Ok(l),
    };
    p.bump();
    let r = atomic_k1(p)?;
    Ok(match op {
        "&+" => FormulaK1::and_p(l, r),
        "|+" => FormulaK1::or_p(l, r),
        "&-" => FormulaK1::and_n(l, r),
        _ => FormulaK1::or_n(l, r),
    })
}

fn atomic_k1(p: &mut Parser) -> Result<FormulaK1, ParseError> {
    let f = match p.peek().clone() {
        Tok::Ident(w) if !matches!(w.as_str(), "true" | "false" | "not") => FormulaK1::atom(&w),
        Tok::NegIdent(w) => FormulaK1::neg_atom(&w),
        Tok::Sym("true+") => FormulaK1::TrueP,
        Tok::Sym("false+") => FormulaK1::FalseP,
        Tok::Sym("true-") => FormulaK1::TrueN,
        Tok::Sym("false-") => FormulaK1::FalseN,
        Tok::Sym("(") => {
            p.bump();
            let f = formula_k1(p)?;
            p.expect(")")?;
            return Ok(f);
        }
        _ => return p.fail("a formula"),
    };
    p.bump();
    Ok(f)
}

fn pattern_k1(p: &mut Parser) -> Result<PatternK1, ParseError> {
    for (kw, pat) in [("pos", PatternK1::Pos), ("neg", PatternK1::Neg), ("unit", PatternK1::True)] {
        if p.eat_keyword(kw) {
            return Ok(pat);
        }
    }
    if p.eat_keyword("inl") {
        return Ok(PatternK1::inj(Choice::First, pattern_k1(p)?));
    }
    if p.eat_keyword("inr") {
        return Ok(PatternK1::inj(Choice::Second, pattern_k1(p)?));
    }
    p.expect("(")?;
    let l = pattern_k1(p)?;
    p.expect(",")?;
    let r = pattern_k1(p)?;
    p.expect(")")?;
    Ok(PatternK1::pair(l, r))
}

fn name_k1(p: &mut Parser) -> Result<Name, ParseError> {
    match p.peek().clone() {
        Tok::Ident(w) if !matches!(w.as_str(), "true" | "false" | "not") => {
            p.bump();
            Ok(Name::new(&w))
        }
        _ => p.fail("an atom name"),
    }
}

impl Surface for K1 {
    fn parse_atom(p: &mut Parser) -> Result<Name, ParseError> {
        name_k1(p)
    }

    fn parse_molecule(p: &mut Parser) -> Result<FormulaK1, ParseError> {
        formula_k1(p)
    }

    fn parse_pattern(p: &mut Parser) -> Result<PatternK1, ParseError> {
        pattern_k1(p)
    }

    fn parse_pos_label(p: &mut Parser) -> Result<crate::contexts::PosLabel, ParseError> {
        let t = p.pos_label_text()?;
        Ok(crate::contexts::PosLabel(index_label(p, t)?))
    }

    fn parse_neg_label(p: &mut Parser) -> Result<crate::contexts::NegLabel, ParseError> {
        let t = p.neg_label_text()?;
        Ok(crate::contexts::NegLabel(index_label(p, t)?))
    }

    fn parse_context(p: &mut Parser) -> Result<Context<K1>, ParseError> {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        sections(p, &["pos", "neg"], |p, name| {
            if name == "pos" {
                pos = comma_list(p, name_k1)?;
            } else {
                neg = comma_list(p, formula_k1)?;
            }
            Ok(())
        })?;
        Ok(ParametricContext::new(pos, neg))
    }

    fn print_context(ctx: &Context<K1>) -> String {
        let mut parts = Vec::new();
        if !ctx.pos_store().is_empty() {
            parts.push(format!("pos: {}", join(ctx.pos_store())));
        }
        if !ctx.neg_store().is_empty() {
            parts.push(format!("neg: {}", join(ctx.neg_store())));
        }
        braces(parts)
    }
}

pub(super) fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn braces(parts: Vec<String>) -> String {
    if parts.is_empty() {
        "{}".into()
    } else {
        format!("{{ {} }}", parts.join("; "))
    }
}

// J

fn formula_j(p: &mut Parser) -> Result<FormulaJ, ParseError> {
    let l = unary_j(p)?;
    let op = match p.peek() {
        Tok::Sym(s @ ("&+" | "|+" | "&-" | "=>")) => *s,
        _ => return Ok(l),
    };
    p.bump();
    let r = unary_j(p)?;
    Ok(match op {
        "&+" => FormulaJ::and_p(l, r),
        "|+" => FormulaJ::or(l, r),
        "&-" => FormulaJ::and_n(l, r),
        _ => FormulaJ::imp(l, r),
    })
}

fn unary_j(p: &mut Parser) -> Result<FormulaJ, ParseError> {
    if p.eat_keyword("not") {
        return Ok(FormulaJ::not(unary_j(p)?));
    }
    let f = match p.peek().clone() {
        Tok::Ident(w) if !matches!(w.as_str(), "true" | "false" | "not") => FormulaJ::pos_lit(&w),
        Tok::NegIdent(w) => FormulaJ::neg_lit(&w),
        Tok::Sym("true+") => FormulaJ::TrueP,
        Tok::Sym("false+") => FormulaJ::FalseP,
        Tok::Sym("true-") => FormulaJ::TrueN,
        Tok::Sym("false-") => FormulaJ::FalseN,
        Tok::Sym("(") => {
            p.bump();
            let f = formula_j(p)?;
            p.expect(")")?;
            return Ok(f);
        }
        _ => return p.fail("a formula"),
    };
    p.bump();
    Ok(f)
}

fn positioned(p: &mut Parser) -> Result<Positioned, ParseError> {
    let side = if matches!(p.peek(), Tok::Ident(w) if w == "R") && *p.peek2() == Tok::Sym("(") {
        Side::Right
    } else if matches!(p.peek(), Tok::Ident(w) if w == "L") && *p.peek2() == Tok::Sym("(") {
        Side::Left
    } else {
        return p.fail("`R(` or `L(`");
    };
    p.bump();
    p.bump();
    let f = formula_j(p)?;
    p.expect(")")?;
    Ok(Positioned::new(f, side))
}

fn pattern_j(p: &mut Parser) -> Result<PatternJ, ParseError> {
    let head = prefix_pattern_j(p)?;
    if p.eat("::") {
        return Ok(PatternJ::cons(head, pattern_j(p)?));
    }
    Ok(head)
}

fn prefix_pattern_j(p: &mut Parser) -> Result<PatternJ, ParseError> {
    for (kw, pat) in [
        ("pos", PatternJ::PosR),
        ("neg", PatternJ::NegR),
        ("unit", PatternJ::TrueR),
        ("pos_l", PatternJ::PosL),
        ("neg_l", PatternJ::NegL),
        ("unit_l", PatternJ::TrueL),
    ] {
        if p.eat_keyword(kw) {
            return Ok(pat);
        }
    }
    if p.eat_keyword("inl") {
        return Ok(PatternJ::inj(Choice::First, prefix_pattern_j(p)?));
    }
    if p.eat_keyword("inr") {
        return Ok(PatternJ::inj(Choice::Second, prefix_pattern_j(p)?));
    }
    if p.eat_keyword("fst") {
        return Ok(PatternJ::proj(Choice::First, prefix_pattern_j(p)?));
    }
    if p.eat_keyword("snd") {
        return Ok(PatternJ::proj(Choice::Second, prefix_pattern_j(p)?));
    }
    if p.eat_keyword("switch") {
        return Ok(PatternJ::switch(prefix_pattern_j(p)?));
    }
    p.expect("(")?;
    let l = pattern_j(p)?;
    if p.eat(")") {
        return Ok(l);
    }
    p.expect(",")?;
    let r = pattern_j(p)?;
    p.expect(")")?;
    Ok(PatternJ::pair(l, r))
}

impl Surface for J {
    fn parse_atom(p: &mut Parser) -> Result<Positioned, ParseError> {
        positioned(p)
    }

    fn parse_molecule(p: &mut Parser) -> Result<Positioned, ParseError> {
        positioned(p)
    }

    fn parse_pattern(p: &mut Parser) -> Result<PatternJ, ParseError> {
        pattern_j(p)
    }

    fn parse_pos_label(p: &mut Parser) -> Result<JPosLabel, ParseError> {
        let t = p.pos_label_text()?;
        match t.as_str() {
            "rs" => Ok(JPosLabel::RSlot),
            "absurd" => Ok(JPosLabel::Absurd),
            _ => Ok(JPosLabel::Stable(index_label(p, t)?)),
        }
    }

    fn parse_neg_label(p: &mut Parser) -> Result<JNegLabel, ParseError> {
        let t = p.neg_label_text()?;
        match t.as_str() {
            "rs" => Ok(JNegLabel::RSlot),
            _ => Ok(JNegLabel::Stable(index_label(p, t)?)),
        }
    }

    fn parse_context(p: &mut Parser) -> Result<JContext, ParseError> {
        let mut ctx = J.empty_context();
        sections(p, &["pos", "neg", "rs"], |p, name| {
            match name {
                "pos" => {
                    for a in comma_list(p, |p| {
                        let a = positioned(p)?;
                        if a.side == Side::Right && a.is_atom() {
                            Ok(a)
                        } else {
                            p.fail("a right-side atom R(l)")
                        }
                    })? {
                        ctx.push_pos(a, Place::Stable);
                    }
                }
                "neg" => {
                    for m in comma_list(p, |p| {
                        let m = positioned(p)?;
                        if m.side == Side::Left && m.is_molecule() {
                            Ok(m)
                        } else {
                            p.fail("a left-side molecule L(N)")
                        }
                    })? {
                        ctx.push_neg(m, Place::Stable);
                    }
                }
                _ => {
                    let x = positioned(p)?;
                    if x.side == Side::Left && x.is_atom() {
                        ctx.push_pos(x, Place::Right);
                    } else if x.side == Side::Right && x.is_molecule() {
                        ctx.push_neg(x, Place::Right);
                    } else {
                        return p.fail("a left-side atom or a right-side molecule");
                    }
                }
            }
            Ok(())
        })?;
        Ok(ctx)
    }

    fn print_context(ctx: &JContext) -> String {
        let mut parts = Vec::new();
        if !ctx.pos_stable().is_empty() {
            parts.push(format!("pos: {}", join(ctx.pos_stable())));
        }
        if !ctx.neg_stable().is_empty() {
            parts.push(format!("neg: {}", join(ctx.neg_stable())));
        }
        match ctx.right_slot() {
            crate::j::RightSlot::Empty => {}
            crate::j::RightSlot::Atom(a) => parts.push(format!("rs: {a}")),
            crate::j::RightSlot::Molecule(m) => parts.push(format!("rs: {m}")),
        }
        braces(parts)
    }
}

fn standalone<T>(src: &str, f: impl FnOnce(&mut Parser) -> Result<T, ParseError>) -> Result<T, ParseError> {
    let mut p = Parser::new(src)?;
    let x = f(&mut p)?;
    p.expect_eof()?;
    Ok(x)
}

pub fn parse_molecule<I: Surface>(src: &str) -> Result<I::Molecule, ParseError> {
    standalone(src, I::parse_molecule)
}

pub fn parse_atom<I: Surface>(src: &str) -> Result<I::Atom, ParseError> {
    standalone(src, I::parse_atom)
}

/// `R(A)` / `L(A)`, or a bare formula placed where it is a molecule.
pub fn parse_positioned(src: &str) -> Result<Positioned, ParseError> {
    standalone(src, |p| {
        if matches!(p.peek(), Tok::Ident(w) if w == "R" || w == "L") && *p.peek2() == Tok::Sym("(") {
            positioned(p)
        } else {
            Ok(formula_j(p)?.as_molecule())
        }
    })
}
