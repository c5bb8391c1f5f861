//! Isomorphism of weighted automata: state bijections that commute with the
//! sequential interfaces and preserve every labelled weight.

use std::collections::{BTreeMap, HashMap};

use crate::automaton::WeightedAutomaton;
use crate::error::{Error, Result};
use crate::weight::Weight;

/// Default bound on the number of states searched by backtracking.
pub const DEFAULT_BOUND: usize = 16;

type EdgeLists = HashMap<(usize, usize), Vec<(usize, usize, Weight)>>;

fn edge_lists(aut: &WeightedAutomaton) -> EdgeLists {
    let mut m: EdgeLists = HashMap::new();
    for (&(s, a, b, t), w) in aut.table() {
        m.entry((s, t)).or_default().push((a, b, w.clone()));
    }
    m
}

/// Shorthand for [`find_isomorphism`] with the default bound.
pub fn is_isomorphic(p: &WeightedAutomaton, q: &WeightedAutomaton) -> Result<bool> {
    Ok(find_isomorphism(p, q, DEFAULT_BOUND)?.is_some())
}

/// Searches for a witnessing bijection `f` (state index of `p` to state
/// index of `q`).
///
/// Colour refinement runs first; when it separates every state the match is
/// forced and no bound applies. Otherwise backtracking is used, which fails
/// with `TooLarge` above `bound` states.
pub fn find_isomorphism(
    p: &WeightedAutomaton,
    q: &WeightedAutomaton,
    bound: usize,
) -> Result<Option<Vec<usize>>> {
    if p.left() != q.left()
        || p.right() != q.right()
        || p.top().domain() != q.top().domain()
        || p.bottom().domain() != q.bottom().domain()
        || p.num_states() != q.num_states()
        || p.num_transitions() != q.num_transitions()
    {
        return Ok(None);
    }
    let n = p.num_states();
    let (cp, cq) = refine(p, q);
    let histogram = |c: &[usize]| {
        let mut h = BTreeMap::new();
        for &x in c {
            *h.entry(x).or_insert(0usize) += 1;
        }
        h
    };
    if histogram(&cp) != histogram(&cq) {
        return Ok(None);
    }
    let mut by_colour: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (j, &c) in cq.iter().enumerate() {
        by_colour.entry(c).or_default().push(j);
    }
    let ep = edge_lists(p);
    let eq = edge_lists(q);
    let discrete = by_colour.values().all(|v| v.len() == 1);
    if discrete {
        let f: Vec<usize> = cp.iter().map(|c| by_colour[c][0]).collect();
        return Ok(check_full(p, q, &f).then_some(f));
    }
    if n > bound {
        return Err(Error::TooLarge { states: n, bound });
    }
    // Most constrained states first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (by_colour[&cp[i]].len(), i));
    let mut f = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let search = Search { cp: &cp, by_colour: &by_colour, ep: &ep, eq: &eq, order: &order };
    if search.extend(0, &mut f, &mut used) && check_full(p, q, &f) {
        Ok(Some(f))
    } else {
        Ok(None)
    }
}

struct Search<'a> {
    cp: &'a [usize],
    by_colour: &'a BTreeMap<usize, Vec<usize>>,
    ep: &'a EdgeLists,
    eq: &'a EdgeLists,
    order: &'a [usize],
}

impl Search<'_> {
    fn consistent(&self, f: &[usize], s: usize, image: usize) -> bool {
        let same = |a: Option<&Vec<(usize, usize, Weight)>>, b: Option<&Vec<(usize, usize, Weight)>>| {
            let mut a = a.cloned().unwrap_or_default();
            let mut b = b.cloned().unwrap_or_default();
            a.sort();
            b.sort();
            a == b
        };
        if !same(self.ep.get(&(s, s)), self.eq.get(&(image, image))) {
            return false;
        }
        for &other in self.order {
            let fo = f[other];
            if fo == usize::MAX || other == s {
                continue;
            }
            if !same(self.ep.get(&(s, other)), self.eq.get(&(image, fo)))
                || !same(self.ep.get(&(other, s)), self.eq.get(&(fo, image)))
            {
                return false;
            }
        }
        true
    }

    fn extend(&self, depth: usize, f: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let s = self.order[depth];
        for &cand in &self.by_colour[&self.cp[s]] {
            if used[cand] || !self.consistent(f, s, cand) {
                continue;
            }
            f[s] = cand;
            used[cand] = true;
            if self.extend(depth + 1, f, used) {
                return true;
            }
            f[s] = usize::MAX;
            used[cand] = false;
        }
        false
    }
}

fn check_full(p: &WeightedAutomaton, q: &WeightedAutomaton, f: &[usize]) -> bool {
    let mut seen = vec![false; q.num_states()];
    for &j in f {
        if j >= seen.len() || seen[j] {
            return false;
        }
        seen[j] = true;
    }
    if p.top().map().iter().zip(q.top().map()).any(|(&a, &b)| f[a] != b)
        || p.bottom().map().iter().zip(q.bottom().map()).any(|(&a, &b)| f[a] != b)
    {
        return false;
    }
    p.table().iter().all(|(&(s, a, b, t), w)| q.table().get(&(f[s], a, b, f[t])) == Some(w))
}

type ColourKey = (usize, Vec<(usize, usize, Weight, usize)>, Vec<(usize, usize, Weight, usize)>);

/// Joint colour refinement of both automata, so colours are comparable.
fn refine(p: &WeightedAutomaton, q: &WeightedAutomaton) -> (Vec<usize>, Vec<usize>) {
    let initial = |aut: &WeightedAutomaton| -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut v = vec![(Vec::new(), Vec::new()); aut.num_states()];
        for (i, &s) in aut.top().map().iter().enumerate() {
            v[s].0.push(i);
        }
        for (i, &s) in aut.bottom().map().iter().enumerate() {
            v[s].1.push(i);
        }
        v
    };
    let ip = initial(p);
    let iq = initial(q);
    let mut ids = BTreeMap::new();
    for k in ip.iter().chain(iq.iter()) {
        let len = ids.len();
        ids.entry(k.clone()).or_insert(len);
    }
    let mut cp: Vec<usize> = ip.iter().map(|k| ids[k]).collect();
    let mut cq: Vec<usize> = iq.iter().map(|k| ids[k]).collect();
    let mut classes = ids.len();
    loop {
        let keys = |aut: &WeightedAutomaton, c: &[usize]| -> Vec<ColourKey> {
            let mut out: Vec<ColourKey> = c.iter().map(|&x| (x, Vec::new(), Vec::new())).collect();
            for (&(s, a, b, t), w) in aut.table() {
                let self_loop = if s == t { 1 } else { 0 };
                out[s].1.push((a, b, w.clone(), c[t] * 2 + self_loop));
                out[t].2.push((a, b, w.clone(), c[s] * 2 + self_loop));
            }
            for k in &mut out {
                k.1.sort();
                k.2.sort();
            }
            out
        };
        let kp = keys(p, &cp);
        let kq = keys(q, &cq);
        let mut ids: BTreeMap<&ColourKey, usize> = BTreeMap::new();
        for k in kp.iter().chain(kq.iter()) {
            ids.entry(k).or_insert(0);
        }
        for (i, v) in ids.values_mut().enumerate() {
            *v = i;
        }
        let np: Vec<usize> = kp.iter().map(|k| ids[k]).collect();
        let nq: Vec<usize> = kq.iter().map(|k| ids[k]).collect();
        let n_classes = ids.len();
        cp = np;
        cq = nq;
        if n_classes == classes {
            break;
        }
        classes = n_classes;
    }
    (cp, cq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::name::Name;

    #[test]
    fn reflexive() {
        for a in [fixtures::phil(), fixtures::fork(), fixtures::example()] {
            assert!(is_isomorphic(&a, &a).unwrap());
        }
    }

    #[test]
    fn renamed_copy_is_isomorphic() {
        let phil = fixtures::phil();
        let renamed = phil
            .rename_states(|s| match s {
                Name::Num(k) => Name::sym(&format!("s{}", 5 - k)),
                other => other.clone(),
            })
            .unwrap();
        let f = find_isomorphism(&phil, &renamed, DEFAULT_BOUND).unwrap().unwrap();
        assert_eq!(f.len(), 4);
        assert!(is_isomorphic(&renamed, &phil).unwrap());
    }

    #[test]
    fn different_sizes_are_not_isomorphic() {
        assert!(!is_isomorphic(&fixtures::phil(), &fixtures::fork()).unwrap());
    }

    #[test]
    fn symmetric_chain_needs_backtracking() {
        // A 4-cycle with uniform weights: refinement cannot split states.
        let h = Weight::ratio(1, 2);
        let rows: Vec<Vec<(usize, Weight)>> =
            (0..4).map(|i| vec![(i, h.clone()), ((i + 1) % 4, h.clone())]).collect();
        let refs: Vec<&[(usize, Weight)]> = rows.iter().map(|r| r.as_slice()).collect();
        let c = fixtures::closed_chain(&refs);
        let shifted = c
            .rename_states(|s| match s {
                Name::Num(k) => Name::Num((k % 4) + 1),
                o => o.clone(),
            })
            .unwrap();
        assert!(is_isomorphic(&c, &shifted).unwrap());
        assert!(matches!(find_isomorphism(&c, &shifted, 2), Err(Error::TooLarge { .. })));
    }
}
