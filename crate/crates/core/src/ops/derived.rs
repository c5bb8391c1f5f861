//! Derived operations: local sum, local sequential composition and the two
//! feedback operations, computed directly.
//!
//! The wire expressions these operations abbreviate live in
//! [`super::wire_forms`]; tests check both routes agree.

use crate::alphabet::{Alphabet, OrderedSet};
use crate::automaton::{Parts, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::name::{Name, Side};
use crate::ops::sequential::{combined_entries, glue, quotient_names};
use crate::ops::union_find::UnionFind;

fn same_alphabets(p: &WeightedAutomaton, q: &WeightedAutomaton, op: &str) -> Result<()> {
    if p.left() != q.left() || p.right() != q.right() {
        return Err(Error::InterfaceMismatch(format!(
            "{op} needs identical parallel interfaces, got {} / {} and {} / {}",
            p.left(),
            p.right(),
            q.left(),
            q.right()
        )));
    }
    Ok(())
}

/// Local sum `P + Q`: the sum with both copies of each alphabet merged
/// back into one.
pub fn local_sum(p: &WeightedAutomaton, q: &WeightedAutomaton) -> Result<WeightedAutomaton> {
    same_alphabets(p, q, "local sum")?;
    let np = p.num_states();
    let ids_l: Vec<usize> = (0..p.left().len()).collect();
    let ids_r: Vec<usize> = (0..p.right().len()).collect();
    let offset = |side: Side, i: usize| if side == Side::Left { i } else { np + i };
    let entries = combined_entries(p, q, &offset, [&ids_l, &ids_r, &ids_l, &ids_r]);
    let states = p
        .states()
        .iter()
        .map(|s| Name::left(s.clone()))
        .chain(q.states().iter().map(|s| Name::right(s.clone())))
        .collect();
    let top_map = p.top().map().iter().copied().chain(q.top().map().iter().map(|&i| np + i)).collect();
    let bottom_map =
        p.bottom().map().iter().copied().chain(q.bottom().map().iter().map(|&i| np + i)).collect();
    WeightedAutomaton::assemble(Parts {
        states,
        left: p.left().clone(),
        right: p.right().clone(),
        top: (p.top().domain().sum(q.top().domain()), top_map),
        bottom: (p.bottom().domain().sum(q.bottom().domain()), bottom_map),
        entries,
    })
}

/// Local sequential composite `P • Q`.
pub fn local_seq(p: &WeightedAutomaton, q: &WeightedAutomaton) -> Result<WeightedAutomaton> {
    same_alphabets(p, q, "local sequential composition")?;
    let ids_l: Vec<usize> = (0..p.left().len()).collect();
    let ids_r: Vec<usize> = (0..p.right().len()).collect();
    glue(p, q, p.left().clone(), p.right().clone(), [&ids_l, &ids_r, &ids_l, &ids_r])
}

/// Sequential feedback over `z`: for each `z`, the bottom point's state is
/// identified with the top point's state, and `z` leaves both interfaces.
pub fn sfb(aut: &WeightedAutomaton, z: &OrderedSet) -> Result<WeightedAutomaton> {
    for p in z.iter() {
        if !aut.top().domain().contains(p) || !aut.bottom().domain().contains(p) {
            return Err(Error::InterfaceMismatch(format!(
                "feedback point {p} must belong to both the top and the bottom interface"
            )));
        }
    }
    let mut uf = UnionFind::new(aut.num_states());
    for p in z.iter() {
        let a = aut.top().image_of(p).expect("checked");
        let b = aut.bottom().image_of(p).expect("checked");
        uf.union(a, b);
    }
    let (names, class_of) = quotient_names(aut.states().items(), &mut uf);
    let keep = |m: &crate::InterfaceMap| {
        let mut dom = Vec::new();
        let mut map = Vec::new();
        for (p, s) in m.iter() {
            if !z.contains(p) {
                dom.push(p.clone());
                map.push(class_of[s]);
            }
        }
        (OrderedSet::from_distinct(dom), map)
    };
    let entries = aut
        .table()
        .iter()
        .map(|(&(s, a, b, t), w)| ((class_of[s], a, b, class_of[t]), w.clone()))
        .collect();
    WeightedAutomaton::assemble(Parts {
        states: names,
        left: aut.left().clone(),
        right: aut.right().clone(),
        top: keep(aut.top()),
        bottom: keep(aut.bottom()),
        entries,
    })
}

/// Splits every label of `alpha` as `(outer, c)` with `c` ranging over `c`.
///
/// An alphabet equal to `c` itself factors with the unit alphabet outside.
pub(crate) fn factor_alphabet(alpha: &Alphabet, c: &Alphabet) -> Option<(Alphabet, Vec<(usize, usize)>)> {
    if alpha.labels() == c.labels() {
        return Some((Alphabet::unit(), (0..alpha.len()).map(|i| (0, i)).collect()));
    }
    let mut outer: Vec<Name> = Vec::new();
    for l in alpha.labels().iter() {
        match l {
            Name::Tuple(items) if items.len() == 2 && c.index_of(&items[1]).is_some() => {
                if !outer.contains(&items[0]) {
                    outer.push(items[0].clone());
                }
            }
            _ => return None,
        }
    }
    let outer = OrderedSet::from_vec(outer).ok()?;
    if alpha.labels() != &outer.product(c.labels()) {
        return None;
    }
    let epsilon = alpha.epsilon_label().map(|e| match e {
        Name::Tuple(items) => items[0].clone(),
        _ => unreachable!("product labels are pairs"),
    });
    let outer = Alphabet::new(outer, epsilon).ok()?;
    let split = (0..alpha.len()).map(|i| (i / c.len(), i % c.len())).collect();
    Some((outer, split))
}

/// Parallel feedback over `c`: `(Pfb Q)_{a,b} = Σ_c Q_{(a,c),(b,c)}`.
///
/// States keep their names; the result's alphabets are the outer factors
/// (the unit alphabet when an interface is exactly `c`).
pub fn pfb(aut: &WeightedAutomaton, c: &Alphabet) -> Result<WeightedAutomaton> {
    let mismatch = |side: &str, alpha: &Alphabet| {
        Error::InterfaceMismatch(format!("{side} interface {alpha} does not factor as A x {c}"))
    };
    let (left, lsplit) = factor_alphabet(aut.left(), c).ok_or_else(|| mismatch("left", aut.left()))?;
    let (right, rsplit) = factor_alphabet(aut.right(), c).ok_or_else(|| mismatch("right", aut.right()))?;
    let entries = aut
        .table()
        .iter()
        .filter_map(|(&(s, a, b, t), w)| {
            let (oa, ca) = lsplit[a];
            let (ob, cb) = rsplit[b];
            (ca == cb).then(|| ((s, oa, ob, t), w.clone()))
        })
        .collect();
    let mut parts = aut.to_parts();
    parts.left = left;
    parts.right = right;
    parts.entries = entries;
    WeightedAutomaton::assemble(parts)
}
