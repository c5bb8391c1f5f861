//! Parallel operations: product, communicating parallel and parallel constants.

use std::collections::HashMap;

use crate::alphabet::{Alphabet, OrderedSet};
use crate::automaton::{Parts, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::name::{Label, Name, StateName};
use crate::ops::ParWireKind;
use crate::weight::Weight;

fn is_unit_point_set(s: &OrderedSet) -> bool {
    s.len() == 1 && s.get(0).is_unit_state()
}

/// Product of interface sets, identifying `X × {*}` and `{*} × X` with `X`.
fn product_domain(x: &OrderedSet, z: &OrderedSet) -> OrderedSet {
    if is_unit_point_set(z) {
        x.clone()
    } else if is_unit_point_set(x) {
        z.clone()
    } else {
        x.product(z)
    }
}

/// Names of the product state space; a single `*` state factor is dropped.
fn product_states(p: &WeightedAutomaton, q: &WeightedAutomaton) -> Vec<StateName> {
    let unit = |a: &WeightedAutomaton| a.num_states() == 1 && a.state(0).is_unit_state();
    let mut out = Vec::with_capacity(p.num_states() * q.num_states());
    for s in p.states().iter() {
        for r in q.states().iter() {
            out.push(if unit(q) {
                s.clone()
            } else if unit(p) {
                r.clone()
            } else {
                Name::pair(s.clone(), r.clone())
            });
        }
    }
    out
}

fn product_interfaces(p: &WeightedAutomaton, q: &WeightedAutomaton) -> ((OrderedSet, Vec<usize>), (OrderedSet, Vec<usize>)) {
    let nq = q.num_states();
    let iface = |a: &crate::InterfaceMap, b: &crate::InterfaceMap| {
        let dom = product_domain(a.domain(), b.domain());
        let mut map = Vec::with_capacity(a.len() * b.len());
        for &i in a.map() {
            for &j in b.map() {
                map.push(i * nq + j);
            }
        }
        (dom, map)
    };
    (iface(p.top(), q.top()), iface(p.bottom(), q.bottom()))
}

/// Parallel product `P × Q`: each label matrix is the Kronecker product of
/// the factors' matrices.
pub fn parallel_product(p: &WeightedAutomaton, q: &WeightedAutomaton) -> WeightedAutomaton {
    let nq = q.num_states();
    let (nc, nd) = (q.left().len(), q.right().len());
    let mut entries = Vec::with_capacity(p.num_transitions() * q.num_transitions());
    for (&(s1, a, b, t1), w1) in p.table() {
        for (&(s2, c, d, t2), w2) in q.table() {
            entries.push(((s1 * nq + s2, a * nc + c, b * nd + d, t1 * nq + t2), w1 * w2));
        }
    }
    let (top, bottom) = product_interfaces(p, q);
    WeightedAutomaton::assemble(Parts {
        states: product_states(p, q),
        left: p.left().product(q.left()),
        right: p.right().product(q.right()),
        top,
        bottom,
        entries,
    })
    .expect("product states are distinct")
}

/// Communicating parallel `P || Q`: `(P||Q)_{a,c} = Σ_b P_{a,b} ⊗ Q_{b,c}`.
pub fn communicating_parallel(p: &WeightedAutomaton, q: &WeightedAutomaton) -> Result<WeightedAutomaton> {
    if p.right() != q.left() {
        return Err(Error::InterfaceMismatch(format!(
            "right interface {} does not match left interface {}",
            p.right(),
            q.left()
        )));
    }
    let nq = q.num_states();
    let mut by_left: HashMap<usize, Vec<(usize, usize, usize, &Weight)>> = HashMap::new();
    for (&(s, b, c, t), w) in q.table() {
        by_left.entry(b).or_default().push((s, c, t, w));
    }
    let mut entries = Vec::new();
    for (&(s1, a, b, t1), w1) in p.table() {
        if let Some(matches) = by_left.get(&b) {
            for &(s2, c, t2, w2) in matches {
                entries.push(((s1 * nq + s2, a, c, t1 * nq + t2), w1 * w2));
            }
        }
    }
    let (top, bottom) = product_interfaces(p, q);
    WeightedAutomaton::assemble(Parts {
        states: product_states(p, q),
        left: p.left().clone(),
        right: q.right().clone(),
        top,
        bottom,
        entries,
    })
}

/// A relation between two alphabets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParRelation {
    pub left: Alphabet,
    pub right: Alphabet,
    pub pairs: Vec<(Label, Label)>,
}

/// `Par(ρ)`: one state `*`, weight 1 on every related label pair, and
/// one-point sequential interfaces.
pub fn par_constant(rel: &ParRelation) -> Result<WeightedAutomaton> {
    let mut entries = Vec::with_capacity(rel.pairs.len());
    for (a, b) in &rel.pairs {
        let ai = rel.left.index_of(a).ok_or_else(|| Error::UnknownLabel(a.clone()))?;
        let bi = rel.right.index_of(b).ok_or_else(|| Error::UnknownLabel(b.clone()))?;
        entries.push(((0, ai, bi, 0), Weight::one()));
    }
    // A relation is a set; repeated pairs still weigh 1.
    entries.sort_by_key(|x| x.0);
    entries.dedup_by(|x, y| x.0 == y.0);
    let point = OrderedSet::from_distinct(vec![Name::unit_state()]);
    WeightedAutomaton::assemble(Parts {
        states: vec![Name::unit_state()],
        left: rel.left.clone(),
        right: rel.right.clone(),
        top: (point.clone(), vec![0]),
        bottom: (point, vec![0]),
        entries,
    })
}

/// The defining relation of a parallel wire.
pub fn par_wire_relation(kind: ParWireKind, params: &[Alphabet]) -> Result<ParRelation> {
    use ParWireKind::*;
    let want = if kind == Twist { 2 } else { 1 };
    if params.len() != want {
        return Err(Error::ArityMismatch(format!(
            "parallel wire {} takes {want} alphabet(s), got {}",
            kind.keyword(),
            params.len()
        )));
    }
    let a = &params[0];
    let rel = match kind {
        Identity => ParRelation {
            left: a.clone(),
            right: a.clone(),
            pairs: a.labels().iter().map(|l| (l.clone(), l.clone())).collect(),
        },
        Diag => ParRelation {
            left: a.clone(),
            right: a.product(a),
            pairs: a.labels().iter().map(|l| (l.clone(), Name::pair(l.clone(), l.clone()))).collect(),
        },
        Proj => ParRelation {
            left: a.clone(),
            right: Alphabet::unit(),
            pairs: a.labels().iter().map(|l| (l.clone(), Name::eps())).collect(),
        },
        Twist => {
            let b = &params[1];
            let mut pairs = Vec::with_capacity(a.len() * b.len());
            for x in a.labels().iter() {
                for y in b.labels().iter() {
                    pairs.push((Name::pair(x.clone(), y.clone()), Name::pair(y.clone(), x.clone())));
                }
            }
            ParRelation { left: a.product(b), right: b.product(a), pairs }
        }
        Codiag => {
            let left = a.sum(a);
            let pairs = a
                .labels()
                .iter()
                .flat_map(|l| [(Name::left(l.clone()), l.clone()), (Name::right(l.clone()), l.clone())])
                .collect();
            ParRelation { left, right: a.clone(), pairs }
        }
        DiagOp | ProjOp | CodiagOp => {
            let base = match kind {
                DiagOp => Diag,
                ProjOp => Proj,
                _ => Codiag,
            };
            let r = par_wire_relation(base, params)?;
            ParRelation {
                left: r.right,
                right: r.left,
                pairs: r.pairs.into_iter().map(|(x, y)| (y, x)).collect(),
            }
        }
    };
    Ok(rel)
}

/// A parallel connector: the constant of its defining relation.
pub fn par_wire(kind: ParWireKind, params: &[Alphabet]) -> Result<WeightedAutomaton> {
    par_constant(&par_wire_relation(kind, params)?)
}
