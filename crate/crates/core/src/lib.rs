//! Compositional construction of weighted and Markov automata.
//!
//! Automata carry two parallel interfaces (alphabets of signals) and two
//! sequential interfaces (maps from hook sets into the state space). The
//! [`ops`] module provides the sequential and parallel operations and the
//! wire constants; [`analysis`] computes reachability, deadlocks and exact
//! transient probabilities for closed Markov automata; [`dsl`] is a small
//! textual language for declaring automata and expressions over them.

pub mod alphabet;
pub mod analysis;
pub mod automaton;
pub mod dot;
pub mod dsl;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod iso;
pub mod name;
pub mod ops;
pub mod random;
pub mod reproduce;
pub mod serial;
pub mod weight;

pub use alphabet::{Alphabet, InterfaceMap, OrderedSet};
pub use automaton::{structurally_equal, Behaviour, Matrix, WeightedAutomaton};
pub use error::{Error, Result};
pub use iso::{find_isomorphism, is_isomorphic};
pub use name::{Label, Name, Point, Side, StateName};
pub use weight::Weight;
