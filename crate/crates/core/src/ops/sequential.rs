//! Sequential operations: sum, sequential composition and sequential constants.

use crate::alphabet::{Alphabet, OrderedSet};
use crate::automaton::{Parts, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::name::{Name, Point, Side, StateName};
use crate::ops::union_find::UnionFind;
use crate::ops::SeqWireKind;

/// Sum of two alphabets with the canonical identification `A + {} = A`.
///
/// Returns the alphabet and the index maps of both summands into it.
pub(crate) fn sum_alphabet(a: &Alphabet, c: &Alphabet) -> (Alphabet, Vec<usize>, Vec<usize>) {
    if c.is_empty() {
        return (a.clone(), (0..a.len()).collect(), Vec::new());
    }
    if a.is_empty() {
        return (c.clone(), Vec::new(), (0..c.len()).collect());
    }
    (a.sum(c), (0..a.len()).collect(), (a.len()..a.len() + c.len()).collect())
}

/// Tagged disjoint union of the two state lists.
fn tagged_states(p: &WeightedAutomaton, q: &WeightedAutomaton) -> Vec<StateName> {
    p.states()
        .iter()
        .map(|s| Name::tagged(Side::Left, s.clone()))
        .chain(q.states().iter().map(|s| Name::tagged(Side::Right, s.clone())))
        .collect()
}

/// Entries of `p` and `q` re-indexed into a combined automaton.
pub(crate) fn combined_entries(
    p: &WeightedAutomaton,
    q: &WeightedAutomaton,
    state_of: &dyn Fn(Side, usize) -> usize,
    maps: [&[usize]; 4],
) -> Vec<((usize, usize, usize, usize), crate::Weight)> {
    let [lp, rp, lq, rq] = maps;
    let mut entries = Vec::with_capacity(p.num_transitions() + q.num_transitions());
    for (&(s, a, b, t), w) in p.table() {
        entries.push(((state_of(Side::Left, s), lp[a], rp[b], state_of(Side::Left, t)), w.clone()));
    }
    for (&(s, a, b, t), w) in q.table() {
        entries.push(((state_of(Side::Right, s), lq[a], rq[b], state_of(Side::Right, t)), w.clone()));
    }
    entries
}

/// The sum `P ⊞ Q`: disjoint union of states, alphabets and interfaces.
pub fn boxplus_sum(p: &WeightedAutomaton, q: &WeightedAutomaton) -> WeightedAutomaton {
    let (left, lp, lq) = sum_alphabet(p.left(), q.left());
    let (right, rp, rq) = sum_alphabet(p.right(), q.right());
    let np = p.num_states();
    let offset = |side: Side, i: usize| if side == Side::Left { i } else { np + i };
    let top_map = p.top().map().iter().copied().chain(q.top().map().iter().map(|&i| np + i)).collect();
    let bottom_map =
        p.bottom().map().iter().copied().chain(q.bottom().map().iter().map(|&i| np + i)).collect();
    let entries = combined_entries(p, q, &offset, [&lp, &rp, &lq, &rq]);
    WeightedAutomaton::assemble(Parts {
        states: tagged_states(p, q),
        left,
        right,
        top: (p.top().domain().sum(q.top().domain()), top_map),
        bottom: (p.bottom().domain().sum(q.bottom().domain()), bottom_map),
        entries,
    })
    .expect("tagged states are distinct")
}

/// Quotient of a state list by a union-find; classes are named by their
/// least member.
pub(crate) fn quotient_names(states: &[StateName], uf: &mut UnionFind) -> (Vec<StateName>, Vec<usize>) {
    let (class_of, count) = uf.classes();
    let mut names: Vec<Option<StateName>> = vec![None; count];
    for (i, s) in states.iter().enumerate() {
        let slot = &mut names[class_of[i]];
        if slot.as_ref().is_none_or(|cur| s < cur) {
            *slot = Some(s.clone());
        }
    }
    (names.into_iter().map(|n| n.expect("non-empty class")).collect(), class_of)
}

/// Glues `p` and `q` along `p`'s bottom and `q`'s top interface, with
/// caller-chosen alphabets and label maps.
pub(crate) fn glue(
    p: &WeightedAutomaton,
    q: &WeightedAutomaton,
    left: Alphabet,
    right: Alphabet,
    maps: [&[usize]; 4],
) -> Result<WeightedAutomaton> {
    if p.bottom().domain() != q.top().domain() {
        return Err(Error::InterfaceMismatch(format!(
            "bottom interface {} does not match top interface {}",
            p.bottom().domain(),
            q.top().domain()
        )));
    }
    let np = p.num_states();
    let states = tagged_states(p, q);
    let mut uf = UnionFind::new(states.len());
    for (&a, &b) in p.bottom().map().iter().zip(q.top().map()) {
        uf.union(a, np + b);
    }
    let (names, class_of) = quotient_names(&states, &mut uf);
    let cls = |side: Side, i: usize| if side == Side::Left { class_of[i] } else { class_of[np + i] };
    let entries = combined_entries(p, q, &cls, maps);
    WeightedAutomaton::assemble(Parts {
        states: names,
        left,
        right,
        top: (p.top().domain().clone(), p.top().map().iter().map(|&i| class_of[i]).collect()),
        bottom: (q.bottom().domain().clone(), q.bottom().map().iter().map(|&i| class_of[np + i]).collect()),
        entries,
    })
}

/// Sequential composite `P ∘ Q`: states are the classes of `P + Q` under the
/// gluing of `P`'s bottom points with `Q`'s top points; weights between
/// classes are summed.
pub fn seq_compose(p: &WeightedAutomaton, q: &WeightedAutomaton) -> Result<WeightedAutomaton> {
    let (left, lp, lq) = sum_alphabet(p.left(), q.left());
    let (right, rp, rq) = sum_alphabet(p.right(), q.right());
    glue(p, q, left, right, [&lp, &rp, &lq, &rq])
}

/// A relation on the disjoint union `X + Y` of a top and a bottom set.
///
/// Carrier elements are written `L:x` for `x` in `X` and `R:y` for `y` in `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqRelation {
    pub top: OrderedSet,
    pub bottom: OrderedSet,
    pub pairs: Vec<(Point, Point)>,
}

impl SeqRelation {
    pub fn new(top: OrderedSet, bottom: OrderedSet) -> Self {
        SeqRelation { top, bottom, pairs: Vec::new() }
    }

    /// Relates top element `x` with bottom element `y`.
    pub fn link(mut self, x: &Point, y: &Point) -> Self {
        self.pairs.push((Name::left(x.clone()), Name::right(y.clone())));
        self
    }

    /// The graph of a function from top to bottom, given as pairs.
    pub fn graph(top: OrderedSet, bottom: OrderedSet, f: impl IntoIterator<Item = (Point, Point)>) -> Self {
        let mut rel = SeqRelation::new(top, bottom);
        for (x, y) in f {
            rel = rel.link(&x, &y);
        }
        rel
    }

    /// Swaps top and bottom (the opposite relation).
    pub fn opposite(&self) -> Self {
        let flip = |n: &Point| match n {
            Name::Tagged(Side::Left, x) => Name::right((**x).clone()),
            Name::Tagged(Side::Right, y) => Name::left((**y).clone()),
            other => other.clone(),
        };
        SeqRelation {
            top: self.bottom.clone(),
            bottom: self.top.clone(),
            pairs: self.pairs.iter().map(|(a, b)| (flip(a), flip(b))).collect(),
        }
    }

    fn carrier_index(&self, n: &Point) -> Option<usize> {
        match n {
            Name::Tagged(Side::Left, x) => self.top.index_of(x),
            Name::Tagged(Side::Right, y) => self.bottom.index_of(y).map(|i| self.top.len() + i),
            _ => None,
        }
    }
}

/// `Seq(ρ)`: states are the classes of `X + Y` under the equivalence
/// generated by `ρ`; no parallel interfaces and no transitions.
pub fn seq_constant(rel: &SeqRelation) -> Result<WeightedAutomaton> {
    let carrier: Vec<Name> = rel
        .top
        .iter()
        .map(|x| Name::left(x.clone()))
        .chain(rel.bottom.iter().map(|y| Name::right(y.clone())))
        .collect();
    let mut uf = UnionFind::new(carrier.len());
    for (a, b) in &rel.pairs {
        let ia = rel
            .carrier_index(a)
            .ok_or_else(|| Error::InterfaceMismatch(format!("{a} is not in the relation's carrier")))?;
        let ib = rel
            .carrier_index(b)
            .ok_or_else(|| Error::InterfaceMismatch(format!("{b} is not in the relation's carrier")))?;
        uf.union(ia, ib);
    }
    let (names, class_of) = quotient_names(&carrier, &mut uf);
    let nx = rel.top.len();
    WeightedAutomaton::assemble(Parts {
        states: names,
        left: Alphabet::empty(),
        right: Alphabet::empty(),
        top: (rel.top.clone(), class_of[..nx].to_vec()),
        bottom: (rel.bottom.clone(), class_of[nx..].to_vec()),
        entries: Vec::new(),
    })
}

fn arity(kind: SeqWireKind, params: &[OrderedSet], want: usize) -> Result<()> {
    if params.len() != want {
        return Err(Error::ArityMismatch(format!(
            "sequential wire {} takes {want} set(s), got {}",
            kind.keyword(),
            params.len()
        )));
    }
    Ok(())
}

/// The defining relation of a sequential wire.
pub fn seq_wire_relation(kind: SeqWireKind, params: &[OrderedSet]) -> Result<SeqRelation> {
    use SeqWireKind::*;
    let want = match kind {
        Identity | Codiag | CodiagOp | Initial | InitialOp => 1,
        Twist => 2,
        Delta | DeltaInv => 3,
    };
    arity(kind, params, want)?;
    let rel = match kind {
        Identity => {
            let x = &params[0];
            SeqRelation::graph(x.clone(), x.clone(), x.iter().map(|e| (e.clone(), e.clone())))
        }
        Codiag => {
            let a = &params[0];
            let top = a.sum(a);
            let pairs: Vec<_> = a
                .iter()
                .flat_map(|e| [(Name::left(e.clone()), e.clone()), (Name::right(e.clone()), e.clone())])
                .collect();
            SeqRelation::graph(top, a.clone(), pairs)
        }
        CodiagOp => seq_wire_relation(Codiag, params)?.opposite(),
        Initial => SeqRelation::new(OrderedSet::new(), params[0].clone()),
        InitialOp => SeqRelation::new(params[0].clone(), OrderedSet::new()),
        Twist => {
            let (x, y) = (&params[0], &params[1]);
            let pairs: Vec<_> = x
                .iter()
                .flat_map(|a| y.iter().map(move |b| (Name::pair(a.clone(), b.clone()), Name::pair(b.clone(), a.clone()))))
                .collect();
            SeqRelation::graph(x.product(y), y.product(x), pairs)
        }
        Delta => {
            let (x, y, z) = (&params[0], &params[1], &params[2]);
            let top = x.product(y).sum(&x.product(z));
            let bottom = x.product(&y.sum(z));
            let mut pairs = Vec::new();
            for a in x.iter() {
                for b in y.iter() {
                    pairs.push((Name::left(Name::pair(a.clone(), b.clone())), Name::pair(a.clone(), Name::left(b.clone()))));
                }
                for c in z.iter() {
                    pairs.push((Name::right(Name::pair(a.clone(), c.clone())), Name::pair(a.clone(), Name::right(c.clone()))));
                }
            }
            SeqRelation::graph(top, bottom, pairs)
        }
        DeltaInv => seq_wire_relation(Delta, params)?.opposite(),
    };
    Ok(rel)
}

/// A sequential connector: the constant of its defining relation.
pub fn seq_wire(kind: SeqWireKind, params: &[OrderedSet]) -> Result<WeightedAutomaton> {
    seq_constant(&seq_wire_relation(kind, params)?)
}
