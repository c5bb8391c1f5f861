//! Ordered finite sets of names, parallel alphabets and sequential interfaces.

use std::collections::HashMap;
use std::fmt;

use crate::name::{Label, Name, Point, Side};

/// A finite set of names with a fixed, deterministic order.
#[derive(Clone, Default)]
pub struct OrderedSet {
    items: Vec<Name>,
    lookup: HashMap<Name, usize>,
}

impl OrderedSet {
    pub fn new() -> OrderedSet {
        OrderedSet::default()
    }

    /// Builds a set in the given order; returns the first duplicate on failure.
    pub fn from_vec(items: Vec<Name>) -> Result<OrderedSet, Name> {
        let mut lookup = HashMap::with_capacity(items.len());
        for (i, item) in items.iter().enumerate() {
            if lookup.insert(item.clone(), i).is_some() {
                return Err(item.clone());
            }
        }
        Ok(OrderedSet { items, lookup })
    }

    /// Builds a set from distinct items; panics on duplicates.
    pub fn from_distinct(items: Vec<Name>) -> OrderedSet {
        OrderedSet::from_vec(items).unwrap_or_else(|d| panic!("duplicate element {d}"))
    }

    pub fn from_syms(items: &[&str]) -> OrderedSet {
        OrderedSet::from_distinct(items.iter().map(|s| Name::atom(s)).collect())
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Name] {
        &self.items
    }

    pub fn get(&self, i: usize) -> &Name {
        &self.items[i]
    }

    pub fn index_of(&self, n: &Name) -> Option<usize> {
        self.lookup.get(n).copied()
    }

    pub fn contains(&self, n: &Name) -> bool {
        self.lookup.contains_key(n)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Name> {
        self.items.iter()
    }

    /// Cartesian product, ordered lexicographically by (left index, right index).
    pub fn product(&self, other: &OrderedSet) -> OrderedSet {
        let mut items = Vec::with_capacity(self.len() * other.len());
        for a in &self.items {
            for b in &other.items {
                items.push(Name::pair(a.clone(), b.clone()));
            }
        }
        OrderedSet::from_distinct(items)
    }

    /// Disjoint union: tagged left elements, then tagged right elements.
    pub fn sum(&self, other: &OrderedSet) -> OrderedSet {
        let items = self
            .items
            .iter()
            .map(|a| Name::tagged(Side::Left, a.clone()))
            .chain(other.items.iter().map(|b| Name::tagged(Side::Right, b.clone())))
            .collect();
        OrderedSet::from_distinct(items)
    }

    /// k-tuples in lexicographic order.
    pub fn power(&self, k: usize) -> OrderedSet {
        let mut words: Vec<Vec<Name>> = vec![Vec::new()];
        for _ in 0..k {
            let mut next = Vec::with_capacity(words.len() * self.len());
            for w in &words {
                for a in &self.items {
                    let mut w2 = w.clone();
                    w2.push(a.clone());
                    next.push(w2);
                }
            }
            words = next;
        }
        OrderedSet::from_distinct(words.into_iter().map(Name::Tuple).collect())
    }
}

impl PartialEq for OrderedSet {
    fn eq(&self, other: &Self) -> bool {
        self.items == other.items
    }
}

impl Eq for OrderedSet {}

impl fmt::Debug for OrderedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.items.iter().map(|i| i.to_string())).finish()
    }
}

impl fmt::Display for OrderedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, item) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{item}")?;
        }
        f.write_str("}")
    }
}

/// A parallel interface: an ordered label set with an optional epsilon.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Alphabet {
    labels: OrderedSet,
    epsilon: Option<usize>,
}

impl Alphabet {
    pub fn new(labels: OrderedSet, epsilon: Option<Label>) -> Result<Alphabet, Label> {
        let epsilon = match epsilon {
            Some(e) => Some(labels.index_of(&e).ok_or(e)?),
            None => None,
        };
        Ok(Alphabet { labels, epsilon })
    }

    /// An alphabet whose epsilon is `eps` when that label is present.
    pub fn with_implicit_epsilon(labels: OrderedSet) -> Alphabet {
        let epsilon = labels.index_of(&Name::eps());
        Alphabet { labels, epsilon }
    }

    pub fn from_syms(items: &[&str]) -> Alphabet {
        Alphabet::with_implicit_epsilon(OrderedSet::from_syms(items))
    }

    pub fn empty() -> Alphabet {
        Alphabet::default()
    }

    /// The one-element alphabet of closed systems; its sole label is epsilon.
    pub fn unit() -> Alphabet {
        Alphabet { labels: OrderedSet::from_distinct(vec![Name::eps()]), epsilon: Some(0) }
    }

    pub fn labels(&self) -> &OrderedSet {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &Label {
        self.labels.get(i)
    }

    pub fn index_of(&self, l: &Label) -> Option<usize> {
        self.labels.index_of(l)
    }

    pub fn epsilon(&self) -> Option<usize> {
        self.epsilon
    }

    pub fn epsilon_label(&self) -> Option<&Label> {
        self.epsilon.map(|i| self.labels.get(i))
    }

    pub fn is_unit(&self) -> bool {
        self.len() == 1 && self.epsilon == Some(0)
    }

    /// Product alphabet; epsilon is the pair of epsilons when both exist.
    pub fn product(&self, other: &Alphabet) -> Alphabet {
        let labels = self.labels.product(&other.labels);
        let epsilon = match (self.epsilon, other.epsilon) {
            (Some(a), Some(b)) => Some(a * other.len() + b),
            _ => None,
        };
        Alphabet { labels, epsilon }
    }

    /// Sum alphabet; carries no epsilon.
    pub fn sum(&self, other: &Alphabet) -> Alphabet {
        Alphabet { labels: self.labels.sum(&other.labels), epsilon: None }
    }

    /// Words of length `k`; epsilon is the k-tuple of epsilons.
    pub fn power(&self, k: usize) -> Alphabet {
        let labels = self.labels.power(k);
        let epsilon = self.epsilon.map(|e| {
            // index of (e, e, ..., e) in lexicographic order
            let n = self.len();
            (0..k).fold(0, |acc, _| acc * n + e)
        });
        Alphabet { labels, epsilon }
    }

    pub fn set_epsilon(&mut self, eps: Option<usize>) {
        assert!(eps.is_none_or(|e| e < self.len()));
        self.epsilon = eps;
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.labels)?;
        if let Some(e) = self.epsilon_label() {
            write!(f, " eps={e}")?;
        }
        Ok(())
    }
}

/// A sequential interface: a total map from an ordered point set into states.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct InterfaceMap {
    domain: OrderedSet,
    map: Vec<usize>,
}

impl InterfaceMap {
    /// `map[i]` is the state index of `domain[i]`.
    pub fn new(domain: OrderedSet, map: Vec<usize>) -> InterfaceMap {
        assert_eq!(domain.len(), map.len(), "interface map must be total");
        InterfaceMap { domain, map }
    }

    pub fn empty() -> InterfaceMap {
        InterfaceMap::default()
    }

    pub fn domain(&self) -> &OrderedSet {
        &self.domain
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn image_of(&self, p: &Point) -> Option<usize> {
        self.domain.index_of(p).map(|i| self.map[i])
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, usize)> + '_ {
        self.domain.iter().zip(self.map.iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_pairs_epsilons() {
        let a = Alphabet::from_syms(&["t", "r", "eps"]);
        let c = Alphabet::from_syms(&["x", "eps"]);
        let p = a.product(&c);
        assert_eq!(p.len(), 6);
        assert_eq!(p.epsilon_label().unwrap().to_string(), "(eps,eps)");
        assert_eq!(p.label(1).to_string(), "(t,eps)");
    }

    #[test]
    fn sum_has_no_epsilon() {
        let a = Alphabet::from_syms(&["a", "eps"]);
        let s = a.sum(&a);
        assert_eq!(s.len(), 4);
        assert!(s.epsilon().is_none());
        assert_eq!(s.label(2).to_string(), "R:a");
    }

    #[test]
    fn power_epsilon_index() {
        let a = Alphabet::from_syms(&["t", "eps", "r"]);
        let p = a.power(3);
        assert_eq!(p.len(), 27);
        assert_eq!(p.epsilon_label().unwrap().to_string(), "(eps,eps,eps)");
        assert_eq!(p.label(0).to_string(), "(t,t,t)");
    }

    #[test]
    fn epsilon_must_be_member() {
        assert!(Alphabet::new(OrderedSet::from_syms(&["a"]), Some(Name::eps())).is_err());
        assert!(Alphabet::unit().is_unit());
    }

    #[test]
    fn duplicates_rejected() {
        assert!(OrderedSet::from_vec(vec![Name::atom("a"), Name::atom("a")]).is_err());
    }
}
