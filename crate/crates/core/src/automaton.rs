//! Weighted automata with parallel and sequential interfaces.

use std::collections::{BTreeMap, HashMap};

use crate::alphabet::{Alphabet, InterfaceMap, OrderedSet};
use crate::error::{Error, Result};
use crate::name::{Label, Name, Point, StateName};
use crate::weight::Weight;

/// Key of a stored transition: (source, left label, right label, target), all indices.
pub type TransitionKey = (usize, usize, usize, usize);

/// Sparse label-indexed transition weights; absent entries are zero.
pub type TransitionTable = BTreeMap<TransitionKey, Weight>;

/// Dense square matrix of weights indexed by state position.
pub type Matrix = Vec<Vec<Weight>>;

/// A weighted automaton with left/right parallel interfaces and top/bottom
/// sequential interfaces.
///
/// States are kept sorted by the structural order on names, so two automata
/// with the same content compare equal field by field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedAutomaton {
    states: OrderedSet,
    left: Alphabet,
    right: Alphabet,
    top: InterfaceMap,
    bottom: InterfaceMap,
    table: TransitionTable,
}

/// Raw material for [`WeightedAutomaton::assemble`], with indices into an
/// arbitrary-order state list.
#[derive(Clone, Debug, Default)]
pub struct Parts {
    pub states: Vec<StateName>,
    pub left: Alphabet,
    pub right: Alphabet,
    pub top: (OrderedSet, Vec<usize>),
    pub bottom: (OrderedSet, Vec<usize>),
    pub entries: Vec<(TransitionKey, Weight)>,
}

impl WeightedAutomaton {
    /// Canonicalises parts: sorts states, sums duplicate entries, drops zeros.
    pub fn assemble(parts: Parts) -> Result<WeightedAutomaton> {
        let Parts { states, left, right, top, bottom, entries } = parts;
        let mut order: Vec<usize> = (0..states.len()).collect();
        order.sort_by(|&a, &b| states[a].cmp(&states[b]));
        let mut remap = vec![0usize; states.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let sorted: Vec<StateName> = order.iter().map(|&i| states[i].clone()).collect();
        let states = OrderedSet::from_vec(sorted).map_err(Error::DuplicateState)?;
        let top = InterfaceMap::new(top.0, top.1.into_iter().map(|i| remap[i]).collect());
        let bottom = InterfaceMap::new(bottom.0, bottom.1.into_iter().map(|i| remap[i]).collect());
        let mut table = TransitionTable::new();
        for ((s, a, b, t), w) in entries {
            debug_assert!(a < left.len() && b < right.len());
            if w.is_zero() {
                continue;
            }
            *table.entry((remap[s], a, b, remap[t])).or_insert_with(Weight::zero) += w;
        }
        Ok(WeightedAutomaton { states, left, right, top, bottom, table })
    }

    /// Builds an automaton from names; used by the model language and tests.
    pub fn from_named(
        states: Vec<StateName>,
        left: Alphabet,
        right: Alphabet,
        top: Vec<(Point, StateName)>,
        bottom: Vec<(Point, StateName)>,
        transitions: Vec<(StateName, Label, Label, StateName, Weight)>,
    ) -> Result<WeightedAutomaton> {
        let index: HashMap<&StateName, usize> =
            states.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let find = |s: &StateName| index.get(s).copied().ok_or_else(|| Error::UnknownState(s.clone()));
        let iface = |pairs: Vec<(Point, StateName)>| -> Result<(OrderedSet, Vec<usize>)> {
            let mut map = Vec::with_capacity(pairs.len());
            let mut dom = Vec::with_capacity(pairs.len());
            for (p, s) in pairs {
                map.push(find(&s)?);
                dom.push(p);
            }
            let dom = OrderedSet::from_vec(dom)
                .map_err(|d| Error::InterfaceMismatch(format!("duplicate interface point {d}")))?;
            Ok((dom, map))
        };
        let top = iface(top)?;
        let bottom = iface(bottom)?;
        let mut entries = Vec::with_capacity(transitions.len());
        for (s, a, b, t, w) in transitions {
            let ai = left.index_of(&a).ok_or(Error::UnknownLabel(a))?;
            let bi = right.index_of(&b).ok_or(Error::UnknownLabel(b))?;
            entries.push(((find(&s)?, ai, bi, find(&t)?), w));
        }
        WeightedAutomaton::assemble(Parts { states, left, right, top, bottom, entries })
    }

    pub fn states(&self) -> &OrderedSet {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, i: usize) -> &StateName {
        self.states.get(i)
    }

    pub fn state_index(&self, s: &StateName) -> Option<usize> {
        self.states.index_of(s)
    }

    pub fn left(&self) -> &Alphabet {
        &self.left
    }

    pub fn right(&self) -> &Alphabet {
        &self.right
    }

    pub fn top(&self) -> &InterfaceMap {
        &self.top
    }

    pub fn bottom(&self) -> &InterfaceMap {
        &self.bottom
    }

    pub fn table(&self) -> &TransitionTable {
        &self.table
    }

    pub fn num_transitions(&self) -> usize {
        self.table.len()
    }

    /// Weight of a transition given by names; zero when absent or unknown.
    pub fn weight(&self, from: &StateName, a: &Label, b: &Label, to: &StateName) -> Weight {
        let key = (|| {
            Some((
                self.state_index(from)?,
                self.left.index_of(a)?,
                self.right.index_of(b)?,
                self.state_index(to)?,
            ))
        })();
        key.and_then(|k| self.table.get(&k).cloned()).unwrap_or_else(Weight::zero)
    }

    /// Decomposes into parts with indices into the (sorted) state list.
    pub fn to_parts(&self) -> Parts {
        Parts {
            states: self.states.items().to_vec(),
            left: self.left.clone(),
            right: self.right.clone(),
            top: (self.top.domain().clone(), self.top.map().to_vec()),
            bottom: (self.bottom.domain().clone(), self.bottom.map().to_vec()),
            entries: self.table.iter().map(|(k, w)| (*k, w.clone())).collect(),
        }
    }

    /// The matrix `Q_{a,b}` for label indices `a`, `b`.
    pub fn label_matrix(&self, a: usize, b: usize) -> Matrix {
        let n = self.num_states();
        let mut m = vec![vec![Weight::zero(); n]; n];
        for (&(s, la, lb, t), w) in &self.table {
            if la == a && lb == b {
                m[s][t] = w.clone();
            }
        }
        m
    }

    /// Sum of all label matrices.
    pub fn total_matrix(&self) -> Matrix {
        let n = self.num_states();
        let mut m = vec![vec![Weight::zero(); n]; n];
        for (&(s, _, _, t), w) in &self.table {
            m[s][t] += w;
        }
        m
    }

    /// Sparse rows of the total matrix.
    pub fn total_rows(&self) -> Vec<BTreeMap<usize, Weight>> {
        let mut rows = vec![BTreeMap::new(); self.num_states()];
        for (&(s, _, _, t), w) in &self.table {
            *rows[s].entry(t).or_insert_with(Weight::zero) += w;
        }
        rows
    }

    /// Total out-weight of each state.
    pub fn row_sums(&self) -> Vec<Weight> {
        let mut sums = vec![Weight::zero(); self.num_states()];
        for (&(s, _, _, _), w) in &self.table {
            sums[s] += w;
        }
        sums
    }

    /// Both alphabets have an epsilon and every `(eps, eps)` row sum is positive.
    pub fn is_positive(&self) -> bool {
        let (Some(ea), Some(eb)) = (self.left.epsilon(), self.right.epsilon()) else {
            return false;
        };
        let mut positive = vec![false; self.num_states()];
        for (&(s, a, b, _), w) in &self.table {
            if a == ea && b == eb && !w.is_zero() {
                positive[s] = true;
            }
        }
        positive.into_iter().all(|p| p)
    }

    /// Positive and every total-matrix row sums to exactly one.
    pub fn is_markov(&self) -> bool {
        self.is_positive() && self.row_sums().iter().all(Weight::is_one)
    }

    /// Divides each entry by its source row total.
    ///
    /// Only requires every row total to be positive, which is weaker than
    /// positivity of the `(eps, eps)` matrix.
    pub fn normalize(&self) -> Result<WeightedAutomaton> {
        let sums = self.row_sums();
        if let Some(i) = sums.iter().position(Weight::is_zero) {
            return Err(Error::NotNormalizable(self.state(i).clone()));
        }
        let mut out = self.clone();
        for (&(s, _, _, _), w) in out.table.iter_mut() {
            *w = &*w / &sums[s];
        }
        Ok(out)
    }

    /// The automaton of k-step paths: labels are k-tuples and each matrix is
    /// the product of the step matrices along the word.
    pub fn k_step(&self, k: usize) -> Result<WeightedAutomaton> {
        if k < 1 {
            return Err(Error::InvalidK(k));
        }
        let left = self.left.power(k);
        let right = self.right.power(k);
        let (na, nb) = (self.left.len(), self.right.len());
        // Partial paths: (source, target, left word index, right word index) -> weight.
        let mut paths: BTreeMap<TransitionKey, Weight> = self.table.clone();
        for _ in 1..k {
            let mut by_source: HashMap<usize, Vec<(usize, usize, usize, &Weight)>> = HashMap::new();
            for (&(s, a, b, t), w) in &self.table {
                by_source.entry(s).or_default().push((a, b, t, w));
            }
            let mut next: BTreeMap<TransitionKey, Weight> = BTreeMap::new();
            for (&(s, u, v, mid), w) in &paths {
                if let Some(steps) = by_source.get(&mid) {
                    for &(a, b, t, w2) in steps {
                        let key = (s, u * na + a, v * nb + b, t);
                        *next.entry(key).or_insert_with(Weight::zero) += w * w2;
                    }
                }
            }
            paths = next;
        }
        let mut parts = self.to_parts();
        parts.left = left;
        parts.right = right;
        parts.entries = paths.into_iter().collect();
        WeightedAutomaton::assemble(parts)
    }

    /// Row-vector evolution `x_i = x_{i-1} Q_{a_i, b_i}` along two words.
    pub fn behaviour(&self, x0: &[Weight], u: &[Label], v: &[Label]) -> Result<Behaviour> {
        if u.len() != v.len() {
            return Err(Error::LengthMismatch { left: u.len(), right: v.len() });
        }
        if x0.len() != self.num_states() {
            return Err(Error::DimensionMismatch { expected: self.num_states(), got: x0.len() });
        }
        let mut vectors = vec![x0.to_vec()];
        for (a, b) in u.iter().zip(v) {
            let ai = self.left.index_of(a).ok_or_else(|| Error::UnknownLabel(a.clone()))?;
            let bi = self.right.index_of(b).ok_or_else(|| Error::UnknownLabel(b.clone()))?;
            let x = vectors.last().expect("non-empty");
            let mut y = vec![Weight::zero(); self.num_states()];
            for (&(s, la, lb, t), w) in &self.table {
                if la == ai && lb == bi && !x[s].is_zero() {
                    y[t] += &x[s] * w;
                }
            }
            vectors.push(y);
        }
        Ok(Behaviour { left_word: u.to_vec(), right_word: v.to_vec(), vectors })
    }

    /// Restricts to the given state indices; interface points mapping
    /// elsewhere are dropped.
    pub fn restrict(&self, keep: &[bool]) -> WeightedAutomaton {
        let mut new_index = vec![usize::MAX; self.num_states()];
        let mut states = Vec::new();
        for (i, &k) in keep.iter().enumerate() {
            if k {
                new_index[i] = states.len();
                states.push(self.state(i).clone());
            }
        }
        let iface = |m: &InterfaceMap| {
            let mut dom = Vec::new();
            let mut map = Vec::new();
            for (p, s) in m.iter() {
                if keep[s] {
                    dom.push(p.clone());
                    map.push(new_index[s]);
                }
            }
            (OrderedSet::from_distinct(dom), map)
        };
        let entries = self
            .table
            .iter()
            .filter(|(&(s, _, _, t), _)| keep[s] && keep[t])
            .map(|(&(s, a, b, t), w)| ((new_index[s], a, b, new_index[t]), w.clone()))
            .collect();
        WeightedAutomaton::assemble(Parts {
            states,
            left: self.left.clone(),
            right: self.right.clone(),
            top: iface(&self.top),
            bottom: iface(&self.bottom),
            entries,
        })
        .expect("restriction of distinct states")
    }

    /// Renames states through `f`; fails if two states collide.
    pub fn rename_states(&self, f: impl Fn(&StateName) -> StateName) -> Result<WeightedAutomaton> {
        let mut parts = self.to_parts();
        parts.states = parts.states.iter().map(f).collect();
        WeightedAutomaton::assemble(parts).map_err(|e| match e {
            Error::DuplicateState(n) => Error::RenameCollision(n),
            other => other,
        })
    }

    /// Replaces both alphabets with same-sized ones, mapping labels by position.
    pub fn with_alphabets(&self, left: Alphabet, right: Alphabet) -> WeightedAutomaton {
        assert_eq!(left.len(), self.left.len());
        assert_eq!(right.len(), self.right.len());
        let mut out = self.clone();
        out.left = left;
        out.right = right;
        out
    }

    /// Replaces the sequential interfaces' domains, keeping the maps.
    pub fn with_interface_domains(&self, top: OrderedSet, bottom: OrderedSet) -> WeightedAutomaton {
        let mut out = self.clone();
        out.top = InterfaceMap::new(top, self.top.map().to_vec());
        out.bottom = InterfaceMap::new(bottom, self.bottom.map().to_vec());
        out
    }

    /// Positive-weight successors of each state, any labels.
    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.num_states()];
        for &(s, _, _, t) in self.table.keys() {
            if succ[s].last() != Some(&t) && !succ[s].contains(&t) {
                succ[s].push(t);
            }
        }
        succ
    }
}

/// Exact field-by-field equality after canonical ordering, no renaming.
pub fn structurally_equal(p: &WeightedAutomaton, q: &WeightedAutomaton) -> bool {
    p == q
}

/// A behaviour: two words of equal length and the evolved row vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Behaviour {
    pub left_word: Vec<Label>,
    pub right_word: Vec<Label>,
    pub vectors: Vec<Vec<Weight>>,
}

/// The unit vector at `i` of length `n`.
pub fn unit_vector(n: usize, i: usize) -> Vec<Weight> {
    let mut v = vec![Weight::zero(); n];
    v[i] = Weight::one();
    v
}

/// Looks up a state by name, also accepting its flattened rendering.
pub fn find_state(aut: &WeightedAutomaton, name: &Name) -> Option<usize> {
    aut.state_index(name).or_else(|| {
        let target = name.flatten();
        let mut hits = aut.states().iter().enumerate().filter(|(_, s)| s.flatten() == target);
        match (hits.next(), hits.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn phil_total_matrix() {
        let phil = fixtures::phil();
        let h = Weight::ratio(1, 2);
        let z = Weight::zero();
        let expected = vec![
            vec![h.clone(), h.clone(), z.clone(), z.clone()],
            vec![z.clone(), h.clone(), h.clone(), z.clone()],
            vec![z.clone(), z.clone(), h.clone(), h.clone()],
            vec![h.clone(), z.clone(), z.clone(), h.clone()],
        ];
        assert_eq!(phil.total_matrix(), expected);
        assert!(phil.is_markov());
    }

    #[test]
    fn fork_total_matrix() {
        let fork = fixtures::fork();
        let t = Weight::ratio(1, 3);
        let h = Weight::ratio(1, 2);
        let z = Weight::zero();
        assert_eq!(
            fork.total_matrix(),
            vec![
                vec![t.clone(), t.clone(), t.clone()],
                vec![h.clone(), h.clone(), z.clone()],
                vec![h.clone(), z.clone(), h.clone()],
            ]
        );
        assert!(fork.is_markov());
    }

    #[test]
    fn empty_table_gives_zero_matrix() {
        let a = WeightedAutomaton::from_named(
            vec![Name::Num(1), Name::Num(2)],
            Alphabet::from_syms(&["eps"]),
            Alphabet::from_syms(&["eps"]),
            vec![],
            vec![],
            vec![],
        )
        .unwrap();
        assert!(a.total_matrix().iter().flatten().all(Weight::is_zero));
        assert!(!a.is_positive());
        assert!(matches!(a.normalize(), Err(Error::NotNormalizable(_))));
    }

    #[test]
    fn example_is_not_markov() {
        let ex = fixtures::example();
        assert!(!ex.is_markov());
        assert!(!ex.is_positive());
    }

    #[test]
    fn missing_eps_loop_not_positive() {
        let eps = Name::eps();
        let a = WeightedAutomaton::from_named(
            vec![Name::Num(1), Name::Num(2)],
            Alphabet::from_syms(&["eps", "a"]),
            Alphabet::from_syms(&["eps"]),
            vec![],
            vec![],
            vec![
                (Name::Num(1), eps.clone(), eps.clone(), Name::Num(2), Weight::one()),
                (Name::Num(2), Name::sym("a"), eps.clone(), Name::Num(1), Weight::one()),
            ],
        )
        .unwrap();
        assert!(!a.is_positive());
        // row totals are still positive, so normalization succeeds
        assert!(a.normalize().is_ok());
    }

    #[test]
    fn normalize_divides_by_row_totals() {
        let one = Name::sym("o");
        let a = WeightedAutomaton::from_named(
            vec![Name::Num(1), Name::Num(2)],
            Alphabet::from_syms(&["o"]),
            Alphabet::from_syms(&["o"]),
            vec![],
            vec![],
            vec![
                (Name::Num(1), one.clone(), one.clone(), Name::Num(1), Weight::from_int(2)),
                (Name::Num(1), one.clone(), one.clone(), Name::Num(2), Weight::from_int(3)),
                (Name::Num(2), one.clone(), one.clone(), Name::Num(2), Weight::from_int(5)),
            ],
        )
        .unwrap();
        let n = a.normalize().unwrap();
        assert_eq!(n.weight(&Name::Num(1), &one, &one, &Name::Num(1)), Weight::ratio(2, 5));
        assert_eq!(n.weight(&Name::Num(1), &one, &one, &Name::Num(2)), Weight::ratio(3, 5));
        assert_eq!(n.weight(&Name::Num(2), &one, &one, &Name::Num(2)), Weight::one());
    }

    #[test]
    fn phil_is_its_own_normalization() {
        let phil = fixtures::phil();
        assert!(structurally_equal(&phil.normalize().unwrap(), &phil));
        assert!(!structurally_equal(&phil, &fixtures::fork()));
    }

    #[test]
    fn behaviour_of_phil() {
        let phil = fixtures::phil();
        let x0 = unit_vector(4, 0);
        let b = phil.behaviour(&x0, &[Name::sym("t")], &[Name::eps()]).unwrap();
        assert_eq!(b.vectors[1], vec![Weight::zero(), Weight::ratio(1, 2), Weight::zero(), Weight::zero()]);
        let b = phil.behaviour(&x0, &[Name::sym("r")], &[Name::eps()]).unwrap();
        assert!(b.vectors[1].iter().all(Weight::is_zero));
        assert!(matches!(
            phil.behaviour(&x0, &[Name::sym("t")], &[]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            phil.behaviour(&x0, &[Name::sym("zz")], &[Name::eps()]),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn k_step_rejects_zero() {
        assert_eq!(fixtures::phil().k_step(0), Err(Error::InvalidK(0)));
    }

    #[test]
    fn k_step_one_wraps_labels() {
        let phil = fixtures::phil();
        let p1 = phil.k_step(1).unwrap();
        assert_eq!(p1.num_transitions(), phil.num_transitions());
        assert_eq!(p1.left().label(0).to_string(), "(t)");
        assert_eq!(p1.left().epsilon_label().unwrap().to_string(), "(eps)");
        for (&(s, a, b, t), w) in phil.table() {
            assert_eq!(p1.table().get(&(s, a, b, t)), Some(w));
        }
    }
}
