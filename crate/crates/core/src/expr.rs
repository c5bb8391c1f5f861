//! Expressions over named automata, wires and constants.
//!
//! `Display` renders the concrete syntax accepted by the model language, so
//! an expression printed here parses back to the same tree.

use std::collections::BTreeMap;
use std::fmt;

use crate::alphabet::{Alphabet, OrderedSet};
use crate::automaton::WeightedAutomaton;
use crate::error::{Error, Result};
use crate::name::{Label, Name, Point, StateName};
use crate::ops::{self, ParRelation, ParWireKind, SeqRelation, SeqWireKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    /// `oplus`
    Sum,
    /// `;;`
    SeqCompose,
    /// `+`
    LocalSum,
    /// `.`
    LocalSeq,
    /// `x`
    Product,
    /// `||`
    Comm,
}

impl BinOp {
    pub const ALL: [BinOp; 6] =
        [BinOp::Sum, BinOp::SeqCompose, BinOp::LocalSum, BinOp::LocalSeq, BinOp::Product, BinOp::Comm];

    pub fn token(self) -> &'static str {
        match self {
            BinOp::Sum => "oplus",
            BinOp::SeqCompose => ";;",
            BinOp::LocalSum => "+",
            BinOp::LocalSeq => ".",
            BinOp::Product => "x",
            BinOp::Comm => "||",
        }
    }

    pub fn apply(self, p: &WeightedAutomaton, q: &WeightedAutomaton) -> Result<WeightedAutomaton> {
        match self {
            BinOp::Sum => Ok(ops::boxplus_sum(p, q)),
            BinOp::SeqCompose => ops::seq_compose(p, q),
            BinOp::LocalSum => ops::local_sum(p, q),
            BinOp::LocalSeq => ops::local_seq(p, q),
            BinOp::Product => Ok(ops::parallel_product(p, q)),
            BinOp::Comm => ops::communicating_parallel(p, q),
        }
    }
}

/// An alphabet term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaExpr {
    Named(String),
    Unit,
    /// A literal label set; the label `eps`, when present, is the epsilon.
    Set(Vec<Label>),
    Product(Box<AlphaExpr>, Box<AlphaExpr>),
    Sum(Box<AlphaExpr>, Box<AlphaExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Named(String),
    /// A left-associated chain of one operator.
    Chain(BinOp, Vec<Expr>),
    Normalize(Box<Expr>),
    Power(usize, Box<Expr>),
    Sfb(Vec<Point>, Box<Expr>),
    Pfb(AlphaExpr, Box<Expr>),
    SeqWire(SeqWireKind, Vec<Vec<Point>>),
    ParWire(ParWireKind, Vec<AlphaExpr>),
    /// `Seq(ρ)`; pair members are carrier elements `L:x` / `R:y`.
    SeqConst { top: Vec<Point>, bottom: Vec<Point>, pairs: Vec<(Point, Point)> },
    ParConst { left: AlphaExpr, right: AlphaExpr, pairs: Vec<(Label, Label)> },
    /// Renames listed states; the rest keep their names.
    Rename(Vec<(StateName, StateName)>, Box<Expr>),
}

impl Expr {
    pub fn named(n: &str) -> Expr {
        Expr::Named(n.to_string())
    }

    /// A chain; a single operand stands for itself.
    pub fn chain(op: BinOp, mut items: Vec<Expr>) -> Expr {
        if items.len() == 1 {
            return items.pop().expect("one item");
        }
        Expr::Chain(op, items)
    }

    /// Names of automata this expression refers to, in first-use order.
    pub fn references(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs(&self, out: &mut Vec<String>) {
        match self {
            Expr::Named(n) => {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
            Expr::Chain(_, items) => items.iter().for_each(|e| e.collect_refs(out)),
            Expr::Normalize(e) | Expr::Power(_, e) | Expr::Sfb(_, e) | Expr::Pfb(_, e) | Expr::Rename(_, e) => {
                e.collect_refs(out)
            }
            Expr::SeqWire(..) | Expr::ParWire(..) | Expr::SeqConst { .. } | Expr::ParConst { .. } => {}
        }
    }
}

/// Where names in an expression are looked up.
pub trait Scope {
    fn automaton(&self, name: &str) -> Option<&WeightedAutomaton>;
    fn alphabet(&self, name: &str) -> Option<&Alphabet>;
}

/// A plain map-backed scope.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    pub automata: BTreeMap<String, WeightedAutomaton>,
    pub alphabets: BTreeMap<String, Alphabet>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_automaton(mut self, name: &str, aut: WeightedAutomaton) -> Self {
        self.automata.insert(name.to_string(), aut);
        self
    }
}

impl Scope for Bindings {
    fn automaton(&self, name: &str) -> Option<&WeightedAutomaton> {
        self.automata.get(name)
    }

    fn alphabet(&self, name: &str) -> Option<&Alphabet> {
        self.alphabets.get(name)
    }
}

pub(crate) fn point_set(items: &[Name]) -> Result<OrderedSet> {
    OrderedSet::from_vec(items.to_vec()).map_err(Error::DuplicateLabel)
}

pub fn eval_alpha(a: &AlphaExpr, scope: &dyn Scope) -> Result<Alphabet> {
    Ok(match a {
        AlphaExpr::Named(n) => scope.alphabet(n).cloned().ok_or_else(|| Error::UnknownReference(n.clone()))?,
        AlphaExpr::Unit => Alphabet::unit(),
        AlphaExpr::Set(labels) => Alphabet::with_implicit_epsilon(point_set(labels)?),
        AlphaExpr::Product(x, y) => eval_alpha(x, scope)?.product(&eval_alpha(y, scope)?),
        AlphaExpr::Sum(x, y) => eval_alpha(x, scope)?.sum(&eval_alpha(y, scope)?),
    })
}

/// An operation failure together with the path of expression nodes leading to it.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{error} (in {})", path.join(" > "))]
pub struct EvalError {
    pub path: Vec<String>,
    pub error: Error,
}

impl EvalError {
    fn at(mut self, segment: String) -> Self {
        self.path.insert(0, segment);
        self
    }
}

fn leaf<T>(segment: impl Into<String>, r: Result<T>) -> Result<T, EvalError> {
    r.map_err(|error| EvalError { path: vec![segment.into()], error })
}

pub fn eval(e: &Expr, scope: &dyn Scope) -> Result<WeightedAutomaton> {
    eval_traced(e, scope).map_err(|t| t.error)
}

/// Like [`eval`], keeping the path to the failing node.
pub fn eval_traced(e: &Expr, scope: &dyn Scope) -> Result<WeightedAutomaton, EvalError> {
    let sub = |inner: &Expr, seg: &str| eval_traced(inner, scope).map_err(|t| t.at(seg.to_string()));
    match e {
        Expr::Named(n) => leaf(n.clone(), scope.automaton(n).cloned().ok_or_else(|| Error::UnknownReference(n.clone()))),
        Expr::Chain(op, items) => {
            let (first, rest) = items.split_first().expect("chains are non-empty");
            let tok = op.token();
            let mut acc = sub(first, &format!("{tok} operand 1"))?;
            for (i, item) in rest.iter().enumerate() {
                let next = sub(item, &format!("{tok} operand {}", i + 2))?;
                acc = leaf(format!("{tok} at operand {}", i + 2), op.apply(&acc, &next))?;
            }
            Ok(acc)
        }
        Expr::Normalize(inner) => leaf("norm", sub(inner, "norm")?.normalize()),
        Expr::Power(k, inner) => leaf(format!("pow[{k}]"), sub(inner, "pow")?.k_step(*k)),
        Expr::Sfb(z, inner) => {
            let a = sub(inner, "sfb")?;
            leaf("sfb", point_set(z).and_then(|z| ops::sfb(&a, &z)))
        }
        Expr::Pfb(c, inner) => {
            let a = sub(inner, "pfb")?;
            leaf("pfb", eval_alpha(c, scope).and_then(|c| ops::pfb(&a, &c)))
        }
        Expr::SeqWire(kind, params) => leaf(
            "seqwire",
            params.iter().map(|p| point_set(p)).collect::<Result<Vec<_>>>().and_then(|sets| ops::seq_wire(*kind, &sets)),
        ),
        Expr::ParWire(kind, params) => leaf(
            "parwire",
            params
                .iter()
                .map(|p| eval_alpha(p, scope))
                .collect::<Result<Vec<_>>>()
                .and_then(|alphas| ops::par_wire(*kind, &alphas)),
        ),
        Expr::SeqConst { top, bottom, pairs } => leaf(
            "seqconst",
            (|| ops::seq_constant(&SeqRelation { top: point_set(top)?, bottom: point_set(bottom)?, pairs: pairs.clone() }))(),
        ),
        Expr::ParConst { left, right, pairs } => leaf(
            "parconst",
            (|| {
                ops::par_constant(&ParRelation {
                    left: eval_alpha(left, scope)?,
                    right: eval_alpha(right, scope)?,
                    pairs: pairs.clone(),
                })
            })(),
        ),
        Expr::Rename(map, inner) => {
            let aut = sub(inner, "rename")?;
            leaf("rename", rename(&aut, map))
        }
    }
}

fn rename(aut: &WeightedAutomaton, map: &[(StateName, StateName)]) -> Result<WeightedAutomaton> {
    for (old, _) in map {
        if aut.state_index(old).is_none() {
            return Err(Error::UnknownState(old.clone()));
        }
    }
    let lookup: BTreeMap<&Name, &Name> = map.iter().map(|(a, b)| (a, b)).collect();
    aut.rename_states(|s| lookup.get(s).map_or_else(|| s.clone(), |&n| n.clone()))
}

fn write_list<T>(f: &mut fmt::Formatter<'_>, items: &[T], mut each: impl FnMut(&mut fmt::Formatter<'_>, &T) -> fmt::Result) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        each(f, x)?;
    }
    Ok(())
}

pub(crate) struct SetLit<'a>(pub &'a [Name]);

impl fmt::Display for SetLit<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        write_list(f, self.0, |f, n| write!(f, "{n}"))?;
        f.write_str("}")
    }
}

fn write_pairs(f: &mut fmt::Formatter<'_>, pairs: &[(Name, Name)]) -> fmt::Result {
    f.write_str("{")?;
    write_list(f, pairs, |f, (a, b)| write!(f, "({a}, {b})"))?;
    f.write_str("}")
}

impl AlphaExpr {
    fn is_compound(&self) -> bool {
        matches!(self, AlphaExpr::Product(..) | AlphaExpr::Sum(..))
    }
}

impl fmt::Display for AlphaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaExpr::Named(n) => f.write_str(n),
            AlphaExpr::Unit => f.write_str("unit"),
            AlphaExpr::Set(labels) => write!(f, "{}", SetLit(labels)),
            AlphaExpr::Product(a, b) | AlphaExpr::Sum(a, b) => {
                let op = if matches!(self, AlphaExpr::Product(..)) { "*" } else { "+" };
                // Left-associative; a compound right operand needs parentheses.
                let left_same = match (self, a.as_ref()) {
                    (AlphaExpr::Product(..), AlphaExpr::Product(..)) | (AlphaExpr::Sum(..), AlphaExpr::Sum(..)) => true,
                    _ => !a.is_compound(),
                };
                if left_same {
                    write!(f, "{a}")?;
                } else {
                    write!(f, "({a})")?;
                }
                if b.is_compound() {
                    write!(f, " {op} ({b})")
                } else {
                    write!(f, " {op} {b}")
                }
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Named(n) => f.write_str(n),
            Expr::Chain(op, items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " {} ", op.token())?;
                    }
                    if matches!(item, Expr::Chain(..)) {
                        write!(f, "({item})")?;
                    } else {
                        write!(f, "{item}")?;
                    }
                }
                Ok(())
            }
            Expr::Normalize(e) => write!(f, "norm({e})"),
            Expr::Power(k, e) => write!(f, "pow[{k}]({e})"),
            Expr::Sfb(z, e) => write!(f, "sfb[{}]({e})", SetLit(z)),
            Expr::Pfb(c, e) => write!(f, "pfb[{c}]({e})"),
            Expr::SeqWire(kind, params) => {
                write!(f, "seqwire[{}", kind.keyword())?;
                for p in params {
                    write!(f, "; {}", SetLit(p))?;
                }
                f.write_str("]")
            }
            Expr::ParWire(kind, params) => {
                write!(f, "parwire[{}", kind.keyword())?;
                for p in params {
                    write!(f, "; {p}")?;
                }
                f.write_str("]")
            }
            Expr::SeqConst { top, bottom, pairs } => {
                write!(f, "seqconst[{}; {}; ", SetLit(top), SetLit(bottom))?;
                write_pairs(f, pairs)?;
                f.write_str("]")
            }
            Expr::ParConst { left, right, pairs } => {
                write!(f, "parconst[{left}; {right}; ")?;
                write_pairs(f, pairs)?;
                f.write_str("]")
            }
            Expr::Rename(map, e) => {
                f.write_str("rename[{")?;
                write_list(f, map, |f, (a, b)| write!(f, "{a}: {b}"))?;
                write!(f, "}}]({e})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn scope() -> Bindings {
        let mut b = Bindings::new().with_automaton("Phil", fixtures::phil()).with_automaton("Fork", fixtures::fork());
        b.alphabets.insert("A".into(), fixtures::fork_alphabet());
        b
    }

    #[test]
    fn dining_pair_closes() {
        let e = Expr::Normalize(Box::new(Expr::Pfb(
            AlphaExpr::Named("A".into()),
            Box::new(Expr::chain(BinOp::Comm, vec![Expr::named("Phil"), Expr::named("Fork")])),
        )));
        let aut = eval(&e, &scope()).unwrap();
        assert!(aut.is_markov());
        assert_eq!(aut.num_states(), 12);
        assert_eq!(e.to_string(), "norm(pfb[A](Phil || Fork))");
        assert_eq!(e.references(), vec!["Phil".to_string(), "Fork".to_string()]);
    }

    #[test]
    fn unknown_names() {
        assert_eq!(eval(&Expr::named("Nope"), &scope()), Err(Error::UnknownReference("Nope".into())));
        let e = Expr::Pfb(AlphaExpr::Named("Z".into()), Box::new(Expr::named("Phil")));
        assert_eq!(eval(&e, &scope()), Err(Error::UnknownReference("Z".into())));
    }

    #[test]
    fn nested_chains_print_with_parentheses() {
        let inner = Expr::chain(BinOp::Product, vec![Expr::named("a"), Expr::named("b")]);
        let e = Expr::chain(BinOp::Comm, vec![inner, Expr::named("c")]);
        assert_eq!(e.to_string(), "(a x b) || c");
        let alpha = AlphaExpr::Product(
            Box::new(AlphaExpr::Named("A".into())),
            Box::new(AlphaExpr::Sum(Box::new(AlphaExpr::Unit), Box::new(AlphaExpr::Set(vec![Name::eps()])))),
        );
        assert_eq!(alpha.to_string(), "A * (unit + {eps})");
    }

    #[test]
    fn failures_carry_their_path() {
        let e = Expr::Normalize(Box::new(Expr::chain(BinOp::Comm, vec![Expr::named("Phil"), Expr::named("Missing")])));
        let err = eval_traced(&e, &scope()).unwrap_err();
        assert_eq!(err.path, vec!["norm", "|| operand 2", "Missing"]);
        assert_eq!(err.error, Error::UnknownReference("Missing".into()));
    }

    #[test]
    fn rename_checks_names() {
        let e = Expr::Rename(vec![(Name::Num(1), Name::sym("start"))], Box::new(Expr::named("Phil")));
        let aut = eval(&e, &scope()).unwrap();
        assert!(aut.state_index(&Name::sym("start")).is_some());
        let bad = Expr::Rename(vec![(Name::Num(9), Name::Num(10))], Box::new(Expr::named("Phil")));
        assert_eq!(eval(&bad, &scope()), Err(Error::UnknownState(Name::Num(9))));
        let clash = Expr::Rename(vec![(Name::Num(1), Name::Num(2))], Box::new(Expr::named("Phil")));
        assert!(matches!(eval(&clash, &scope()), Err(Error::RenameCollision(_))));
    }
}
