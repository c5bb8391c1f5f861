//! A small textual language for alphabets, automata and expressions.
//!
//! ```text
//! alphabet A = {t, r, eps}
//!
//! automaton Phil {
//!   left A; right A;
//!   top {} -> {}; bottom {} -> {};
//!   states 1 2 3 4;
//!   1 -[eps/eps]-> 1 : 1/2;
//!   1 -[t/eps]-> 2 : 1/2;
//! }
//!
//! let Two = norm(pfb[A](Phil || Fork))
//! ```
//!
//! Binary operators are `oplus`, `;;`, `+`, `.`, `x` and `||`. A chain may
//! use only one of them; mixing needs parentheses. `L:` and `R:` written
//! without a space tag a name as belonging to the left or right summand.

mod builtins;
mod lexer;
mod parser;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::alphabet::Alphabet;
use crate::automaton::WeightedAutomaton;
use crate::expr::{self, AlphaExpr, Bindings, Expr, SetLit};
use crate::name::{Label, Point, StateName};
use crate::weight::Weight;

pub use builtins::{
    builtin_initial, builtin_library, builtin_names, builtin_source, dining_initial, dining_source, resolve_source, sofia_initial,
    sofia_source,
};
pub use parser::parse;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    DuplicateName,
    UnknownReference,
    InvalidWeight,
    AmbiguousExpression,
    /// An operation failed while evaluating.
    Eval,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorKind::Syntax => "syntax error",
            ErrorKind::DuplicateName => "duplicate name",
            ErrorKind::UnknownReference => "unknown reference",
            ErrorKind::InvalidWeight => "invalid weight",
            ErrorKind::AmbiguousExpression => "ambiguous expression",
            ErrorKind::Eval => "evaluation failed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DslError {
    pub kind: ErrorKind,
    pub pos: Pos,
    pub message: String,
}

impl DslError {
    pub fn new(kind: ErrorKind, pos: Pos, message: impl Into<String>) -> Self {
        DslError { kind, pos, message: message.into() }
    }

    fn unpositioned(kind: ErrorKind, message: impl Into<String>) -> Self {
        DslError { kind, pos: Pos { line: 0, col: 0 }, message: message.into() }
    }
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pos.line == 0 {
            write!(f, "{}: {}", self.kind, self.message)
        } else {
            write!(f, "{}:{}: {}: {}", self.pos.line, self.pos.col, self.kind, self.message)
        }
    }
}

impl std::error::Error for DslError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionDecl {
    pub from: StateName,
    pub left: Label,
    pub right: Label,
    pub to: StateName,
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomatonDecl {
    pub name: String,
    pub left: AlphaExpr,
    pub right: AlphaExpr,
    pub top: Vec<Point>,
    pub top_map: Vec<(Point, StateName)>,
    pub bottom: Vec<Point>,
    pub bottom_map: Vec<(Point, StateName)>,
    pub states: Vec<StateName>,
    pub transitions: Vec<TransitionDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Alphabet { name: String, labels: Vec<Label> },
    Automaton(AutomatonDecl),
    Let { name: String, expr: Expr },
}

impl Decl {
    pub fn name(&self) -> &str {
        match self {
            Decl::Alphabet { name, .. } | Decl::Let { name, .. } => name,
            Decl::Automaton(a) => &a.name,
        }
    }
}

/// Declarations in source order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelFile {
    pub decls: Vec<Decl>,
}

impl ModelFile {
    /// Names of automata and lets, in declaration order.
    pub fn automaton_names(&self) -> Vec<&str> {
        self.decls.iter().filter(|d| !matches!(d, Decl::Alphabet { .. })).map(Decl::name).collect()
    }

    pub fn alphabet_names(&self) -> Vec<&str> {
        self.decls.iter().filter(|d| matches!(d, Decl::Alphabet { .. })).map(Decl::name).collect()
    }

    pub fn find(&self, name: &str) -> Option<&Decl> {
        self.decls.iter().find(|d| !matches!(d, Decl::Alphabet { .. }) && d.name() == name)
    }

    /// Appends another file's declarations.
    pub fn extend(&mut self, other: ModelFile) {
        self.decls.extend(other.decls);
    }
}

/// Canonical rendering; parsing it gives back an equal file.
pub fn pretty_print(file: &ModelFile) -> String {
    let mut out = String::new();
    for (i, d) in file.decls.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match d {
            Decl::Alphabet { name, labels } => out.push_str(&format!("alphabet {name} = {}\n", SetLit(labels))),
            Decl::Let { name, expr } => out.push_str(&format!("let {name} = {expr}\n")),
            Decl::Automaton(a) => print_automaton(&mut out, a),
        }
    }
    out
}

fn print_map(map: &[(Point, StateName)]) -> String {
    let items: Vec<String> = map.iter().map(|(p, s)| format!("{p}: {s}")).collect();
    format!("{{{}}}", items.join(", "))
}

fn print_automaton(out: &mut String, a: &AutomatonDecl) {
    out.push_str(&format!("automaton {} {{\n", a.name));
    out.push_str(&format!("  left {};\n  right {};\n", a.left, a.right));
    out.push_str(&format!("  top {} -> {};\n", SetLit(&a.top), print_map(&a.top_map)));
    out.push_str(&format!("  bottom {} -> {};\n", SetLit(&a.bottom), print_map(&a.bottom_map)));
    let states: Vec<String> = a.states.iter().map(|s| s.to_string()).collect();
    out.push_str(&format!("  states {};\n", states.join(" ")));
    for t in &a.transitions {
        out.push_str(&format!("  {} -[{}/{}]-> {} : {};\n", t.from, t.left, t.right, t.to, t.weight));
    }
    out.push_str("}\n");
}

/// A declaration that rebuilds `aut` exactly, with literal alphabets.
///
/// Only alphabets whose epsilon, if any, is the `eps` label can be written
/// this way.
pub fn declare(name: &str, aut: &WeightedAutomaton) -> AutomatonDecl {
    let alpha = |a: &Alphabet| AlphaExpr::Set(a.labels().items().to_vec());
    let iface = |m: &crate::InterfaceMap| -> (Vec<Point>, Vec<(Point, StateName)>) {
        let pairs: Vec<_> = m.iter().map(|(p, s)| (p.clone(), aut.state(s).clone())).collect();
        (m.domain().items().to_vec(), pairs)
    };
    let (top, top_map) = iface(aut.top());
    let (bottom, bottom_map) = iface(aut.bottom());
    AutomatonDecl {
        name: name.to_string(),
        left: alpha(aut.left()),
        right: alpha(aut.right()),
        top,
        top_map,
        bottom,
        bottom_map,
        states: aut.states().items().to_vec(),
        transitions: aut
            .table()
            .iter()
            .map(|(&(s, a, b, t), w)| TransitionDecl {
                from: aut.state(s).clone(),
                left: aut.left().label(a).clone(),
                right: aut.right().label(b).clone(),
                to: aut.state(t).clone(),
                weight: w.clone(),
            })
            .collect(),
    }
}

fn alphabet_scope(file: &ModelFile) -> Result<Bindings, DslError> {
    let mut scope = Bindings::new();
    for d in &file.decls {
        if let Decl::Alphabet { name, labels } = d {
            let set = crate::OrderedSet::from_vec(labels.clone())
                .map_err(|l| DslError::unpositioned(ErrorKind::DuplicateName, format!("label {l} in alphabet {name}")))?;
            scope.alphabets.insert(name.clone(), Alphabet::with_implicit_epsilon(set));
        }
    }
    Ok(scope)
}

fn build_automaton(a: &AutomatonDecl, scope: &Bindings) -> Result<WeightedAutomaton, DslError> {
    let wrap = |e: crate::Error| DslError::unpositioned(ErrorKind::Eval, format!("in automaton {}: {e}", a.name));
    let left = expr::eval_alpha(&a.left, scope).map_err(wrap)?;
    let right = expr::eval_alpha(&a.right, scope).map_err(wrap)?;
    // The maps follow the declared set order.
    let ordered = |set: &[Point], map: &[(Point, StateName)]| -> Vec<(Point, StateName)> {
        set.iter()
            .map(|p| map.iter().find(|(q, _)| q == p).cloned().expect("parser checked totality"))
            .collect()
    };
    WeightedAutomaton::from_named(
        a.states.clone(),
        left,
        right,
        ordered(&a.top, &a.top_map),
        ordered(&a.bottom, &a.bottom_map),
        a.transitions
            .iter()
            .map(|t| (t.from.clone(), t.left.clone(), t.right.clone(), t.to.clone(), t.weight.clone()))
            .collect(),
    )
    .map_err(wrap)
}

/// Evaluates one automaton or let, computing only what it depends on.
pub fn eval(file: &ModelFile, name: &str) -> Result<WeightedAutomaton, DslError> {
    let mut scope = eval_names(file, &[name])?;
    Ok(scope.automata.remove(name).expect("evaluated"))
}

/// Evaluates every automaton and let in the file.
pub fn eval_all(file: &ModelFile) -> Result<Bindings, DslError> {
    let names = file.automaton_names();
    eval_names(file, &names)
}

fn eval_names(file: &ModelFile, names: &[&str]) -> Result<Bindings, DslError> {
    let index: HashMap<&str, &Decl> = file
        .decls
        .iter()
        .filter(|d| !matches!(d, Decl::Alphabet { .. }))
        .map(|d| (d.name(), d))
        .collect();
    // close over dependencies
    let mut needed = BTreeSet::new();
    let mut stack: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    while let Some(n) = stack.pop() {
        let decl = index
            .get(n.as_str())
            .ok_or_else(|| DslError::unpositioned(ErrorKind::UnknownReference, format!("no automaton or let named {n}")))?;
        if needed.insert(n.clone()) {
            if let Decl::Let { expr, .. } = decl {
                stack.extend(expr.references());
            }
        }
    }
    let mut scope = alphabet_scope(file)?;
    for d in &file.decls {
        if !needed.contains(d.name()) || scope.automata.contains_key(d.name()) {
            continue;
        }
        let aut = match d {
            Decl::Alphabet { .. } => continue,
            Decl::Automaton(a) => build_automaton(a, &scope)?,
            Decl::Let { name, expr } => expr::eval_traced(expr, &scope)
                .map_err(|e| DslError::unpositioned(ErrorKind::Eval, format!("in let {name}: {e}")))?,
        };
        scope.automata.insert(d.name().to_string(), aut);
    }
    Ok(scope)
}
