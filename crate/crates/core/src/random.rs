//! Seeded random automata for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Alphabet, OrderedSet};
use crate::automaton::{Parts, WeightedAutomaton};
use crate::name::Name;
use crate::weight::Weight;

/// The generator behind every seeded suite; portable across platforms.
pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape bounds for [`random_automaton`].
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_states: usize,
    /// Labels per side, epsilon included.
    pub max_labels: usize,
    /// Chance that any given non-forced transition is present.
    pub density: f64,
    /// Give every state an `(eps, eps)` transition.
    pub positive: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { max_states: 4, max_labels: 3, density: 0.3, positive: true }
    }
}

/// `{eps, prefix1, prefix2, ...}` of the given size.
pub fn alphabet(prefix: &str, size: usize) -> Alphabet {
    let mut labels = vec![Name::eps()];
    labels.extend((1..size).map(|i| Name::sym(&format!("{prefix}{i}"))));
    Alphabet::with_implicit_epsilon(OrderedSet::from_distinct(labels))
}

pub fn random_weight(rng: &mut impl Rng) -> Weight {
    Weight::ratio(rng.gen_range(1..=6), rng.gen_range(1..=4))
}

/// A random automaton over the given alphabets with empty sequential interfaces.
pub fn random_over(rng: &mut impl Rng, left: &Alphabet, right: &Alphabet, shape: Shape) -> WeightedAutomaton {
    let n = rng.gen_range(1..=shape.max_states);
    let mut entries = Vec::new();
    for s in 0..n {
        for a in 0..left.len() {
            for b in 0..right.len() {
                for t in 0..n {
                    if rng.gen_bool(shape.density) {
                        entries.push(((s, a, b, t), random_weight(rng)));
                    }
                }
            }
        }
        if shape.positive {
            let (ea, eb) = (left.epsilon().expect("eps"), right.epsilon().expect("eps"));
            let t = rng.gen_range(0..n);
            entries.push(((s, ea, eb, t), random_weight(rng)));
        }
    }
    WeightedAutomaton::assemble(Parts {
        states: (1..=n as u64).map(Name::Num).collect(),
        left: left.clone(),
        right: right.clone(),
        top: (OrderedSet::new(), vec![]),
        bottom: (OrderedSet::new(), vec![]),
        entries,
    })
    .expect("distinct states")
}

/// A random automaton with freshly drawn alphabets `{eps, a1, ..}` and `{eps, b1, ..}`.
pub fn random_automaton(rng: &mut impl Rng, shape: Shape) -> WeightedAutomaton {
    let left = alphabet("a", rng.gen_range(1..=shape.max_labels));
    let right = alphabet("b", rng.gen_range(1..=shape.max_labels));
    random_over(rng, &left, &right, shape)
}

/// Adds random top and bottom interfaces with up to `max_points` points each.
pub fn with_random_interfaces(rng: &mut impl Rng, aut: &WeightedAutomaton, max_points: usize) -> WeightedAutomaton {
    let n = aut.num_states();
    let mut parts = aut.to_parts();
    let mut side = |prefix: &str| {
        let k = rng.gen_range(0..=max_points);
        let dom = OrderedSet::from_distinct((1..=k).map(|i| Name::sym(&format!("{prefix}{i}"))).collect());
        let map = (0..k).map(|_| rng.gen_range(0..n)).collect();
        (dom, map)
    };
    parts.top = side("x");
    parts.bottom = side("y");
    WeightedAutomaton::assemble(parts).expect("same states")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_positive() {
        let a = random_automaton(&mut seeded(7), Shape::default());
        let b = random_automaton(&mut seeded(7), Shape::default());
        assert_eq!(a, b);
        let mut rng = seeded(1);
        for _ in 0..50 {
            let q = random_automaton(&mut rng, Shape::default());
            assert!(q.is_positive());
            assert!(q.num_states() <= 4 && q.left().len() <= 3);
        }
    }
}
