//! Algebraic properties on seeded random automata.

use markov_compose::alphabet::OrderedSet;
use markov_compose::automaton::Parts;
use markov_compose::dsl::{self, declare, pretty_print, Decl, ModelFile};
use markov_compose::expr::{BinOp, Expr};
use markov_compose::ops::{boxplus_sum, communicating_parallel, local_seq, local_sum, parallel_product, seq_compose};
use markov_compose::random::{self, random_automaton, random_over, Shape};
use markov_compose::{is_isomorphic, Alphabet, Name, Weight, WeightedAutomaton};
use proptest::prelude::*;

fn small() -> Shape {
    Shape { max_states: 3, max_labels: 2, density: 0.25, positive: true }
}

/// Same states and weights with every label's summand tags removed; labels
/// that collapse together have their weights added.
fn forget_summands(aut: &WeightedAutomaton) -> WeightedAutomaton {
    fn strip(n: &Name) -> Name {
        match n {
            Name::Tagged(_, inner) => strip(inner),
            other => other.clone(),
        }
    }
    let collapse = |a: &Alphabet| {
        let mut labels: Vec<Name> = a.labels().iter().map(strip).collect();
        labels.sort();
        labels.dedup();
        let alpha = Alphabet::with_implicit_epsilon(OrderedSet::from_distinct(labels));
        let index: Vec<usize> = a.labels().iter().map(|l| alpha.index_of(&strip(l)).unwrap()).collect();
        (alpha, index)
    };
    let (left, li) = collapse(aut.left());
    let (right, ri) = collapse(aut.right());
    let mut parts = aut.to_parts();
    parts.entries = parts.entries.into_iter().map(|((s, a, b, t), w)| ((s, li[a], ri[b], t), w)).collect();
    parts.left = left;
    parts.right = right;
    WeightedAutomaton::assemble(parts).unwrap()
}

/// Replaces both sequential interfaces with `top` and `bottom` point sets
/// mapped to random states.
fn with_interfaces(rng: &mut random::SeededRng, aut: &WeightedAutomaton, top: &OrderedSet, bottom: &OrderedSet) -> WeightedAutomaton {
    use rand::Rng;
    let n = aut.num_states();
    let Parts { states, left, right, entries, .. } = aut.to_parts();
    let map = |rng: &mut random::SeededRng, d: &OrderedSet| (d.clone(), (0..d.len()).map(|_| rng.gen_range(0..n)).collect());
    let top = map(rng, top);
    let bottom = map(rng, bottom);
    WeightedAutomaton::assemble(Parts { states, left, right, top, bottom, entries }).unwrap()
}

fn fresh(rng: &mut random::SeededRng, top: &OrderedSet, bottom: &OrderedSet) -> WeightedAutomaton {
    let base = random_automaton(rng, small());
    with_interfaces(rng, &base, top, bottom)
}

fn set(prefix: &str, n: usize) -> OrderedSet {
    OrderedSet::from_distinct((0..n).map(|i| Name::sym(&format!("{prefix}{i}"))).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normalize_gives_stochastic_rows(seed in any::<u64>()) {
        let q = random_automaton(&mut random::seeded(seed), Shape::default());
        let n = q.normalize().unwrap();
        prop_assert!(n.is_markov());
        prop_assert_eq!(n.normalize().unwrap(), n.clone());
    }

    #[test]
    fn boxplus_is_associative(seed in any::<u64>()) {
        let mut rng = random::seeded(seed);
        let (p, q, r) = (random_automaton(&mut rng, small()), random_automaton(&mut rng, small()), random_automaton(&mut rng, small()));
        let a = boxplus_sum(&boxplus_sum(&p, &q), &r);
        let b = boxplus_sum(&p, &boxplus_sum(&q, &r));
        prop_assert!(is_isomorphic(&forget_summands(&a), &forget_summands(&b)).unwrap());
        prop_assert_eq!(a.num_transitions(), b.num_transitions());
    }

    #[test]
    fn communicating_parallel_is_associative(seed in any::<u64>()) {
        let mut rng = random::seeded(seed);
        let p = random_automaton(&mut rng, small());
        let q = random_over(&mut rng, p.right(), &random::alphabet("c", 2), small());
        let r = random_over(&mut rng, q.right(), &random::alphabet("d", 2), small());
        let a = communicating_parallel(&communicating_parallel(&p, &q).unwrap(), &r).unwrap();
        let b = communicating_parallel(&p, &communicating_parallel(&q, &r).unwrap()).unwrap();
        prop_assert!(is_isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn product_multiplies_sizes(seed in any::<u64>()) {
        let mut rng = random::seeded(seed);
        let (p, q) = (random_automaton(&mut rng, small()), random_automaton(&mut rng, small()));
        let x = parallel_product(&p, &q);
        prop_assert_eq!(x.num_states(), p.num_states() * q.num_states());
        prop_assert_eq!(x.num_transitions(), p.num_transitions() * q.num_transitions());
    }

    #[test]
    fn sequential_composition_is_associative(seed in any::<u64>(), i in 0usize..3, j in 0usize..3) {
        let mut rng = random::seeded(seed);
        let (x, y) = (set("y", i), set("z", j));
        let p = fresh(&mut rng, &set("x", 1), &x);
        let q = fresh(&mut rng, &x, &y);
        let r = fresh(&mut rng, &y, &set("w", 1));
        let a = seq_compose(&seq_compose(&p, &q).unwrap(), &r).unwrap();
        let b = seq_compose(&p, &seq_compose(&q, &r).unwrap()).unwrap();
        prop_assert!(is_isomorphic(&forget_summands(&a), &forget_summands(&b)).unwrap());
    }

    #[test]
    fn local_operations_are_associative(seed in any::<u64>()) {
        let mut rng = random::seeded(seed);
        let (a, b) = (random::alphabet("a", 2), random::alphabet("b", 2));
        let x = set("x", 1);
        let gen = |rng: &mut random::SeededRng| {
            let base = random_over(rng, &a, &b, small());
            with_interfaces(rng, &base, &x, &x)
        };
        let (p, q, r) = (gen(&mut rng), gen(&mut rng), gen(&mut rng));
        // interface points are tagged differently but listed in the same order
        let flat = |m: WeightedAutomaton| {
            let (t, b) = (set("t", m.top().len()), set("b", m.bottom().len()));
            m.with_interface_domains(t, b)
        };
        let s1 = flat(local_sum(&local_sum(&p, &q).unwrap(), &r).unwrap());
        let s2 = flat(local_sum(&p, &local_sum(&q, &r).unwrap()).unwrap());
        prop_assert!(is_isomorphic(&s1, &s2).unwrap());
        let c1 = local_seq(&local_seq(&p, &q).unwrap(), &r).unwrap();
        let c2 = local_seq(&p, &local_seq(&q, &r).unwrap()).unwrap();
        prop_assert!(is_isomorphic(&c1, &c2).unwrap());
    }

    #[test]
    fn model_files_round_trip(seed in any::<u64>(), count in 1usize..4) {
        let mut rng = random::seeded(seed);
        let mut file = ModelFile::default();
        let mut originals = Vec::new();
        for i in 0..count {
            let base = random_automaton(&mut rng, Shape::default());
            let q = random::with_random_interfaces(&mut rng, &base, 2);
            let name = format!("Q{i}");
            file.decls.push(Decl::Automaton(declare(&name, &q)));
            originals.push((name, q));
        }
        let names: Vec<Expr> = originals.iter().map(|(n, _)| Expr::named(n)).collect();
        file.decls.push(Decl::Let { name: "All".into(), expr: Expr::chain(BinOp::Sum, names) });
        let text = pretty_print(&file);
        let back = dsl::parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(pretty_print(&back), text);
        for (name, q) in &originals {
            prop_assert_eq!(&dsl::eval(&back, name).unwrap(), q);
        }
        prop_assert!(dsl::eval(&back, "All").is_ok());
    }
}

#[test]
fn behaviour_follows_label_matrices() {
    let q = markov_compose::fixtures::example();
    let x0 = vec![Weight::one(), Weight::zero(), Weight::zero()];
    let b1 = Name::pair(Name::sym("b1"), Name::sym("c"));
    let b2 = Name::pair(Name::sym("b2"), Name::sym("c"));
    let a = Name::sym("a");
    let run = q.behaviour(&x0, &[a.clone(), a.clone(), a], &[b1.clone(), b1, b2]).unwrap();
    let last = run.vectors.last().unwrap();
    assert_eq!(last[2], Weight::from_int(6));
}
