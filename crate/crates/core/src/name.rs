//! Structured names shared by states, labels and sequential interface points.

use std::fmt;

/// Which summand of a disjoint union a tagged name came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn prefix(self) -> &'static str {
        match self {
            Side::Left => "L",
            Side::Right => "R",
        }
    }
}

/// A finite, acyclic structured identifier.
///
/// Numeric atoms order numerically and before symbolic atoms, so states
/// declared as `1 2 ... 10` keep their natural order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Name {
    Num(u64),
    Sym(String),
    Tuple(Vec<Name>),
    Tagged(Side, Box<Name>),
}

/// Labels of parallel alphabets.
pub type Label = Name;
/// Names of automaton states.
pub type StateName = Name;
/// Elements of sequential interface sets.
pub type Point = Name;

/// The reserved epsilon label.
pub const EPSILON: &str = "eps";
/// Name of the single state of a parallel constant.
pub const UNIT_STATE: &str = "*";

impl Name {
    /// Parses an atom: all-digit strings become `Num`, anything else `Sym`.
    pub fn atom(s: &str) -> Name {
        if !s.is_empty() && s.len() <= 18 && s.bytes().all(|b| b.is_ascii_digit()) {
            Name::Num(s.parse().expect("digits"))
        } else {
            Name::Sym(s.to_string())
        }
    }

    pub fn sym(s: &str) -> Name {
        Name::atom(s)
    }

    pub fn eps() -> Name {
        Name::Sym(EPSILON.to_string())
    }

    pub fn unit_state() -> Name {
        Name::Sym(UNIT_STATE.to_string())
    }

    pub fn pair(a: Name, b: Name) -> Name {
        Name::Tuple(vec![a, b])
    }

    pub fn left(n: Name) -> Name {
        Name::Tagged(Side::Left, Box::new(n))
    }

    pub fn right(n: Name) -> Name {
        Name::Tagged(Side::Right, Box::new(n))
    }

    pub fn tagged(side: Side, n: Name) -> Name {
        Name::Tagged(side, Box::new(n))
    }

    pub fn is_unit_state(&self) -> bool {
        matches!(self, Name::Sym(s) if s == UNIT_STATE)
    }

    /// Removes one level of tagging, if any.
    pub fn untag(&self) -> &Name {
        match self {
            Name::Tagged(_, inner) => inner,
            other => other,
        }
    }

    /// Flattens nested tuples into a single tuple of non-tuple leaves.
    ///
    /// Composite state names such as `(((1,1),1),1)` display as `(1,1,1,1)`.
    pub fn flatten(&self) -> Name {
        match self {
            Name::Tuple(_) => {
                let mut leaves = Vec::new();
                self.collect_leaves(&mut leaves);
                Name::Tuple(leaves)
            }
            other => other.clone(),
        }
    }

    fn collect_leaves(&self, out: &mut Vec<Name>) {
        match self {
            Name::Tuple(items) => items.iter().for_each(|i| i.collect_leaves(out)),
            other => out.push(other.clone()),
        }
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Name::Num(n) => write!(f, "{n}"),
            Name::Sym(s) => f.write_str(s),
            Name::Tuple(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
            Name::Tagged(side, inner) => write!(f, "{}:{inner}", side.prefix()),
        }
    }
}
