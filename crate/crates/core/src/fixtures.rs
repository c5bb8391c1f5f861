//! Reference automata built directly in Rust, independent of the model language.

use crate::alphabet::{Alphabet, OrderedSet};
use crate::automaton::WeightedAutomaton;
use crate::name::Name;
use crate::weight::Weight;

fn n(i: u64) -> Name {
    Name::Num(i)
}

fn s(x: &str) -> Name {
    Name::sym(x)
}

/// The philosopher/fork alphabet `{t, r, eps}`.
pub fn fork_alphabet() -> Alphabet {
    Alphabet::from_syms(&["t", "r", "eps"])
}

pub fn phil() -> WeightedAutomaton {
    let h = Weight::ratio(1, 2);
    let e = Name::eps();
    let mut tr = Vec::new();
    for i in 1..=4 {
        tr.push((n(i), e.clone(), e.clone(), n(i), h.clone()));
    }
    tr.push((n(1), s("t"), e.clone(), n(2), h.clone()));
    tr.push((n(2), e.clone(), s("t"), n(3), h.clone()));
    tr.push((n(3), s("r"), e.clone(), n(4), h.clone()));
    tr.push((n(4), e.clone(), s("r"), n(1), h));
    WeightedAutomaton::from_named(
        (1..=4).map(n).collect(),
        fork_alphabet(),
        fork_alphabet(),
        vec![],
        vec![],
        tr,
    )
    .expect("phil")
}

pub fn fork() -> WeightedAutomaton {
    let h = Weight::ratio(1, 2);
    let t = Weight::ratio(1, 3);
    let e = Name::eps();
    let tr = vec![
        (n(1), e.clone(), e.clone(), n(1), t.clone()),
        (n(2), e.clone(), e.clone(), n(2), h.clone()),
        (n(3), e.clone(), e.clone(), n(3), h.clone()),
        (n(1), s("t"), e.clone(), n(2), t.clone()),
        (n(1), e.clone(), s("t"), n(3), t),
        (n(2), s("r"), e.clone(), n(1), h.clone()),
        (n(3), e.clone(), s("r"), n(1), h),
    ];
    WeightedAutomaton::from_named(
        (1..=3).map(n).collect(),
        fork_alphabet(),
        fork_alphabet(),
        vec![],
        vec![],
        tr,
    )
    .expect("fork")
}

/// The three-state example with weights 2, 3 and 1.
pub fn example() -> WeightedAutomaton {
    let left = Alphabet::from_syms(&["a"]);
    let right = Alphabet::with_implicit_epsilon(
        OrderedSet::from_syms(&["b1", "b2"]).product(&OrderedSet::from_syms(&["c"])),
    );
    let b1c = Name::pair(s("b1"), s("c"));
    let b2c = Name::pair(s("b2"), s("c"));
    WeightedAutomaton::from_named(
        (1..=3).map(n).collect(),
        left,
        right,
        vec![(s("x"), n(1))],
        vec![(s("y"), n(3)), (s("z"), n(3))],
        vec![
            (n(1), s("a"), b1c.clone(), n(2), Weight::from_int(2)),
            (n(2), s("a"), b1c, n(2), Weight::from_int(3)),
            (n(2), s("a"), b2c, n(3), Weight::from_int(1)),
        ],
    )
    .expect("example")
}

/// A Markov matrix as a closed automaton over the unit alphabet.
pub fn closed_chain(rows: &[&[(usize, Weight)]]) -> WeightedAutomaton {
    let e = Name::eps();
    let mut tr = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        for (j, w) in row.iter() {
            tr.push((n(i as u64 + 1), e.clone(), e.clone(), n(*j as u64 + 1), w.clone()));
        }
    }
    WeightedAutomaton::from_named(
        (1..=rows.len() as u64).map(n).collect(),
        Alphabet::unit(),
        Alphabet::unit(),
        vec![],
        vec![],
        tr,
    )
    .expect("chain")
}
