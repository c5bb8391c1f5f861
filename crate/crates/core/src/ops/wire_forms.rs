//! The derived operations evaluated literally as wire expressions.
//!
//! These build every intermediate automaton (codiagonals, diagonals,
//! projections, associators) and are used as an independent route against
//! the direct implementations in [`super::derived`].

use crate::alphabet::{Alphabet, OrderedSet};
use crate::automaton::WeightedAutomaton;
use crate::error::{Error, Result};
use crate::name::Name;
use crate::ops::derived::factor_alphabet;
use crate::ops::parallel::{communicating_parallel, par_constant, par_wire, parallel_product, ParRelation};
use crate::ops::sequential::{boxplus_sum, seq_compose, seq_constant, seq_wire, SeqRelation};
use crate::ops::{ParWireKind, SeqWireKind};

/// `∇°_A || (P ⊞ Q) || ∇_B`.
pub fn local_sum(p: &WeightedAutomaton, q: &WeightedAutomaton) -> Result<WeightedAutomaton> {
    let co = par_wire(ParWireKind::CodiagOp, &[p.left().clone()])?;
    let fold = par_wire(ParWireKind::Codiag, &[p.right().clone()])?;
    communicating_parallel(&communicating_parallel(&co, &boxplus_sum(p, q))?, &fold)
}

/// `∇°_A || (P ∘ Q) || ∇_B`.
pub fn local_seq(p: &WeightedAutomaton, q: &WeightedAutomaton) -> Result<WeightedAutomaton> {
    let co = par_wire(ParWireKind::CodiagOp, &[p.left().clone()])?;
    let fold = par_wire(ParWireKind::Codiag, &[p.right().clone()])?;
    communicating_parallel(&communicating_parallel(&co, &seq_compose(p, q)?)?, &fold)
}

fn without(set: &OrderedSet, z: &OrderedSet) -> OrderedSet {
    OrderedSet::from_distinct(set.iter().filter(|p| !z.contains(p)).cloned().collect())
}

/// Re-expresses an interface as the literal sum `rest + z`.
fn as_sum(m: &crate::InterfaceMap, rest: &OrderedSet, z: &OrderedSet) -> (OrderedSet, Vec<usize>) {
    let map = rest.iter().chain(z.iter()).map(|p| m.image_of(p).expect("member")).collect();
    (rest.sum(z), map)
}

/// `(1_X ⊞ i_Z) ∘ (1_X ⊞ ∇°_Z) ∘ (Q ⊞ 1_Z) ∘ (1_Y ⊞ ∇_Z) ∘ (1_Y ⊞ i°_Z)`,
/// with associators inserted where the sums nest differently. The result's
/// interfaces are renamed back from `X + {}` to `X`.
pub fn sfb(aut: &WeightedAutomaton, z: &OrderedSet) -> Result<WeightedAutomaton> {
    for p in z.iter() {
        if !aut.top().domain().contains(p) || !aut.bottom().domain().contains(p) {
            return Err(Error::InterfaceMismatch(format!("{p} is not a common interface point")));
        }
    }
    let x = without(aut.top().domain(), z);
    let y = without(aut.bottom().domain(), z);
    let mut parts = aut.to_parts();
    parts.top = as_sum(aut.top(), &x, z);
    parts.bottom = as_sum(aut.bottom(), &y, z);
    let q = WeightedAutomaton::assemble(parts)?;

    let id = |s: &OrderedSet| seq_wire(SeqWireKind::Identity, std::slice::from_ref(s));
    let w1 = boxplus_sum(&id(&x)?, &seq_wire(SeqWireKind::Initial, std::slice::from_ref(z))?);
    let w2 = boxplus_sum(&id(&x)?, &seq_wire(SeqWireKind::CodiagOp, std::slice::from_ref(z))?);
    // X + (Z + Z)  ->  (X + Z) + Z
    let zz = z.sum(z);
    let mut assoc_top = SeqRelation::new(x.sum(&zz), x.sum(z).sum(z));
    for e in x.iter() {
        assoc_top = assoc_top.link(&Name::left(e.clone()), &Name::left(Name::left(e.clone())));
    }
    for e in z.iter() {
        assoc_top = assoc_top
            .link(&Name::right(Name::left(e.clone())), &Name::left(Name::right(e.clone())))
            .link(&Name::right(Name::right(e.clone())), &Name::right(e.clone()));
    }
    let middle = boxplus_sum(&q, &id(z)?);
    // (Y + Z) + Z  ->  Y + (Z + Z)
    let mut assoc_bottom = SeqRelation::new(y.sum(z).sum(z), y.sum(&zz));
    for e in y.iter() {
        assoc_bottom = assoc_bottom.link(&Name::left(Name::left(e.clone())), &Name::left(e.clone()));
    }
    for e in z.iter() {
        assoc_bottom = assoc_bottom
            .link(&Name::left(Name::right(e.clone())), &Name::right(Name::left(e.clone())))
            .link(&Name::right(e.clone()), &Name::right(Name::right(e.clone())));
    }
    let w3 = boxplus_sum(&id(&y)?, &seq_wire(SeqWireKind::Codiag, std::slice::from_ref(z))?);
    let w4 = boxplus_sum(&id(&y)?, &seq_wire(SeqWireKind::InitialOp, std::slice::from_ref(z))?);

    let chain = [w2, seq_constant(&assoc_top)?, middle, seq_constant(&assoc_bottom)?, w3, w4];
    let mut acc = w1;
    for next in &chain {
        acc = seq_compose(&acc, next)?;
    }
    Ok(acc.with_interface_domains(x, y))
}

/// `(1_A × p°_C) || (1_A × Δ_C) || (Q × 1_C) || (1_B × Δ°_C) || (1_B × p_C)`,
/// with associators between `A × (C × C)` and `(A × C) × C`. The result's
/// alphabets `A × {eps}` are relabelled to `A`.
pub fn pfb(aut: &WeightedAutomaton, c: &Alphabet) -> Result<WeightedAutomaton> {
    let mismatch = || Error::InterfaceMismatch(format!("interfaces do not factor over {c}"));
    let (a, _) = factor_alphabet(aut.left(), c).ok_or_else(mismatch)?;
    let (b, _) = factor_alphabet(aut.right(), c).ok_or_else(mismatch)?;
    let unit_case = aut.left().labels() == c.labels();
    if unit_case != (aut.right().labels() == c.labels()) {
        // Mixed shapes would need a different associator; not used by any model.
        return Err(mismatch());
    }
    let id_c = par_wire(ParWireKind::Identity, std::slice::from_ref(c))?;
    let q_c = parallel_product(aut, &id_c);
    let closed = if unit_case {
        let chain = [
            par_wire(ParWireKind::ProjOp, std::slice::from_ref(c))?,
            par_wire(ParWireKind::Diag, std::slice::from_ref(c))?,
            q_c,
            par_wire(ParWireKind::DiagOp, std::slice::from_ref(c))?,
            par_wire(ParWireKind::Proj, std::slice::from_ref(c))?,
        ];
        fold_parallel(&chain)?
    } else {
        let side = |outer: &Alphabet| -> Result<[WeightedAutomaton; 2]> {
            let id = par_wire(ParWireKind::Identity, std::slice::from_ref(outer))?;
            Ok([
                parallel_product(&id, &par_wire(ParWireKind::ProjOp, std::slice::from_ref(c))?),
                parallel_product(&id, &par_wire(ParWireKind::Diag, std::slice::from_ref(c))?),
            ])
        };
        let [a_proj, a_diag] = side(&a)?;
        let id_b = par_wire(ParWireKind::Identity, std::slice::from_ref(&b))?;
        let b_diag = parallel_product(&id_b, &par_wire(ParWireKind::DiagOp, std::slice::from_ref(c))?);
        let b_proj = parallel_product(&id_b, &par_wire(ParWireKind::Proj, std::slice::from_ref(c))?);
        let chain = [
            a_proj,
            a_diag,
            associator(&a, c, true)?,
            q_c,
            associator(&b, c, false)?,
            b_diag,
            b_proj,
        ];
        fold_parallel(&chain)?
    };
    Ok(closed.with_alphabets(a, b))
}

fn fold_parallel(chain: &[WeightedAutomaton]) -> Result<WeightedAutomaton> {
    let mut acc = chain[0].clone();
    for next in &chain[1..] {
        acc = communicating_parallel(&acc, next)?;
    }
    Ok(acc)
}

/// `A × (C × C) -> (A × C) × C` when `forward`, else the inverse.
fn associator(outer: &Alphabet, c: &Alphabet, forward: bool) -> Result<WeightedAutomaton> {
    let nested_right = outer.product(&c.product(c));
    let nested_left = outer.product(c).product(c);
    let mut pairs = Vec::new();
    for x in outer.labels().iter() {
        for c1 in c.labels().iter() {
            for c2 in c.labels().iter() {
                let r = Name::pair(x.clone(), Name::pair(c1.clone(), c2.clone()));
                let l = Name::pair(Name::pair(x.clone(), c1.clone()), c2.clone());
                pairs.push(if forward { (r, l) } else { (l, r) });
            }
        }
    }
    let (left, right) = if forward { (nested_right, nested_left) } else { (nested_left, nested_right) };
    par_constant(&ParRelation { left, right, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::iso::is_isomorphic;
    use crate::ops::derived;

    #[test]
    fn local_sum_routes_agree() {
        let (p, f) = (fixtures::phil(), fixtures::phil());
        assert_eq!(local_sum(&p, &f).unwrap(), derived::local_sum(&p, &f).unwrap());
    }

    #[test]
    fn pfb_routes_agree_on_dining_pair() {
        let pf = communicating_parallel(&fixtures::phil(), &fixtures::fork()).unwrap();
        let c = fixtures::fork_alphabet();
        assert_eq!(pfb(&pf, &c).unwrap(), derived::pfb(&pf, &c).unwrap());
    }

    #[test]
    fn pfb_routes_agree_with_outer_factor() {
        // Q with interfaces {u, eps} x C on both sides.
        let outer = Alphabet::from_syms(&["u", "eps"]);
        let c = Alphabet::from_syms(&["k", "eps"]);
        let alpha = outer.product(&c);
        let base = WeightedAutomaton::from_named(
            vec![Name::Num(1), Name::Num(2)],
            alpha.clone(),
            alpha.clone(),
            vec![],
            vec![],
            vec![
                (Name::Num(1), Name::pair(Name::sym("u"), Name::sym("k")), Name::pair(Name::eps(), Name::sym("k")), Name::Num(2), crate::Weight::from_int(3)),
                (Name::Num(1), Name::pair(Name::sym("u"), Name::sym("k")), Name::pair(Name::eps(), Name::eps()), Name::Num(2), crate::Weight::from_int(5)),
                (Name::Num(2), Name::pair(Name::eps(), Name::eps()), Name::pair(Name::eps(), Name::eps()), Name::Num(1), crate::Weight::ratio(1, 2)),
            ],
        )
        .unwrap();
        let direct = derived::pfb(&base, &c).unwrap();
        let wired = pfb(&base, &c).unwrap();
        assert_eq!(direct, wired);
        assert_eq!(direct.num_transitions(), 2);
    }

    #[test]
    fn sfb_routes_agree() {
        let ex = fixtures::example();
        let mut parts = ex.to_parts();
        parts.top = (OrderedSet::from_syms(&["x", "z"]), vec![0, 1]);
        let a = WeightedAutomaton::assemble(parts).unwrap();
        let z = OrderedSet::from_syms(&["z"]);
        let direct = derived::sfb(&a, &z).unwrap();
        let wired = sfb(&a, &z).unwrap();
        assert_eq!(direct.num_states(), 2);
        assert!(is_isomorphic(&direct, &wired).unwrap());
    }
}
