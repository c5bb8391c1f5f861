//! Elementary decomposition: any automaton as sequential wires gluing a
//! local sum of single-transition automata.

use crate::alphabet::OrderedSet;
use crate::automaton::{Parts, WeightedAutomaton};
use crate::error::Result;
use crate::expr::{self, BinOp, Bindings, Expr};
use crate::name::{Name, Point, StateName};

/// The parts, bound by name, and the expression gluing them.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub parts: Vec<(String, WeightedAutomaton)>,
    pub expr: Expr,
}

impl Decomposition {
    pub fn bindings(&self) -> Bindings {
        let mut b = Bindings::new();
        for (n, a) in &self.parts {
            b.automata.insert(n.clone(), a.clone());
        }
        b
    }

    pub fn evaluate(&self) -> Result<WeightedAutomaton> {
        expr::eval(&self.expr, &self.bindings())
    }
}

fn strip_tags(n: &Name) -> &Name {
    match n {
        Name::Tagged(_, inner) => strip_tags(inner),
        other => other,
    }
}

/// A part with the given states, one optional transition, and top and bottom
/// interfaces both equal to `points`.
fn part(aut: &WeightedAutomaton, states: Vec<StateName>, points: Vec<(Point, usize)>, entry: Option<Parts>) -> Result<WeightedAutomaton> {
    let domain = OrderedSet::from_distinct(points.iter().map(|(p, _)| p.clone()).collect());
    let map: Vec<usize> = points.iter().map(|&(_, s)| s).collect();
    WeightedAutomaton::assemble(Parts {
        states,
        left: aut.left().clone(),
        right: aut.right().clone(),
        top: (domain.clone(), map.clone()),
        bottom: (domain, map),
        entries: entry.map(|p| p.entries).unwrap_or_default(),
    })
}

/// For each point of `m`, the original state it stands for.
fn point_states(m: &crate::InterfaceMap, mid: &WeightedAutomaton) -> Vec<(Point, StateName)> {
    m.iter().map(|(p, s)| (p.clone(), strip_tags(mid.state(s)).clone())).collect()
}

pub fn elementary_decomposition(aut: &WeightedAutomaton) -> Result<Decomposition> {
    let mut parts = Vec::new();
    let mut covered = vec![false; aut.num_states()];
    for (i, (&(s, a, b, t), w)) in aut.table().iter().enumerate() {
        let i = i + 1;
        covered[s] = true;
        covered[t] = true;
        let (states, points, key) = if s == t {
            let pts = vec![(Name::sym(&format!("s{i}")), 0), (Name::sym(&format!("t{i}")), 0)];
            (vec![aut.state(s).clone()], pts, (0, a, b, 0))
        } else {
            let (src, tgt) = (aut.state(s).clone(), aut.state(t).clone());
            // assemble sorts states; feed them pre-sorted so indices are stable.
            let (si, ti) = if src < tgt { (0, 1) } else { (1, 0) };
            let mut states = vec![src, tgt];
            states.sort();
            let pts = vec![(Name::sym(&format!("s{i}")), si), (Name::sym(&format!("t{i}")), ti)];
            (states, pts, (si, a, b, ti))
        };
        let entry = Parts { entries: vec![(key, w.clone())], ..aut.to_parts() };
        parts.push((format!("T{i}"), part(aut, states, points, Some(entry))?));
    }
    let mut unit_no = 0;
    for (q, done) in covered.iter().enumerate() {
        if !done {
            unit_no += 1;
            let pts = vec![(Name::sym(&format!("u{unit_no}")), 0)];
            parts.push((format!("U{unit_no}"), part(aut, vec![aut.state(q).clone()], pts, None)?));
        }
    }
    if parts.is_empty() {
        parts.push(("E".to_string(), part(aut, vec![], vec![], None)?));
    }

    let middle = if parts.len() == 1 {
        Expr::named(&parts[0].0)
    } else {
        Expr::chain(BinOp::LocalSum, parts.iter().map(|(n, _)| Expr::named(n)).collect())
    };
    let scope = {
        let mut b = Bindings::new();
        for (n, a) in &parts {
            b.automata.insert(n.clone(), a.clone());
        }
        b
    };
    let mid = expr::eval(&middle, &scope)?;

    // top: each x meets a copy of γ0(x); all copies of a state are chained
    let tops = point_states(mid.top(), &mid);
    let rep = |list: &[(Point, StateName)], q: &StateName| {
        list.iter().find(|(_, s)| s == q).map(|(p, _)| p.clone()).expect("every state has a copy")
    };
    let mut top_pairs = Vec::new();
    for (x, s) in aut.top().iter() {
        top_pairs.push((Name::left(x.clone()), Name::right(rep(&tops, aut.state(s)))));
    }
    for (p, q) in &tops {
        let r = rep(&tops, q);
        if &r != p {
            top_pairs.push((Name::right(r), Name::right(p.clone())));
        }
    }
    let bottoms = point_states(mid.bottom(), &mid);
    let mut bottom_pairs = Vec::new();
    for (y, s) in aut.bottom().iter() {
        bottom_pairs.push((Name::left(rep(&bottoms, aut.state(s))), Name::right(y.clone())));
    }
    let rho_top = Expr::SeqConst {
        top: aut.top().domain().items().to_vec(),
        bottom: mid.top().domain().items().to_vec(),
        pairs: top_pairs,
    };
    let rho_bottom = Expr::SeqConst {
        top: mid.bottom().domain().items().to_vec(),
        bottom: aut.bottom().domain().items().to_vec(),
        pairs: bottom_pairs,
    };
    Ok(Decomposition { parts, expr: Expr::chain(BinOp::SeqCompose, vec![rho_top, middle, rho_bottom]) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::iso::is_isomorphic;
    use crate::weight::Weight;

    #[test]
    fn example_has_three_parts() {
        let ex = fixtures::example();
        let d = elementary_decomposition(&ex).unwrap();
        let weights: Vec<Weight> =
            d.parts.iter().map(|(_, p)| p.table().values().next().unwrap().clone()).collect();
        assert_eq!(weights, vec![Weight::from_int(2), Weight::from_int(3), Weight::from_int(1)]);
        let back = d.evaluate().unwrap();
        assert!(is_isomorphic(&back, &ex).unwrap());
    }

    #[test]
    fn self_loop_has_one_state_part() {
        let a = fixtures::closed_chain(&[&[(0, Weight::one())]]);
        let d = elementary_decomposition(&a).unwrap();
        assert_eq!(d.parts.len(), 1);
        assert_eq!(d.parts[0].1.num_states(), 1);
        assert!(is_isomorphic(&d.evaluate().unwrap(), &a).unwrap());
    }

    #[test]
    fn isolated_state_gets_a_unit() {
        let a = fixtures::closed_chain(&[&[(1, Weight::one())], &[], &[]]);
        let d = elementary_decomposition(&a).unwrap();
        assert_eq!(d.parts.len(), 2);
        assert_eq!(d.parts[1].1.num_transitions(), 0);
        assert!(is_isomorphic(&d.evaluate().unwrap(), &a).unwrap());
    }

    #[test]
    fn phil_round_trips() {
        let phil = fixtures::phil();
        let d = elementary_decomposition(&phil).unwrap();
        assert_eq!(d.parts.len(), 8);
        assert!(is_isomorphic(&d.evaluate().unwrap(), &phil).unwrap());
    }
}
