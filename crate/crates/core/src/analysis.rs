//! Reachability, deadlocks and transient probabilities of closed Markov
//! automata.

use std::collections::VecDeque;
use std::fmt;

use crate::automaton::{find_state, unit_vector, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::name::{Name, StateName};
use crate::weight::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

/// A probability computed in either mode.
#[derive(Clone, Debug, PartialEq)]
pub enum Prob {
    Exact(Weight),
    Float(f64),
}

impl Prob {
    pub fn to_f64(&self) -> f64 {
        match self {
            Prob::Exact(w) => w.to_f64(),
            Prob::Float(x) => *x,
        }
    }

    /// Ten significant digits.
    pub fn decimal(&self) -> String {
        match self {
            Prob::Exact(w) => w.to_significant(10),
            Prob::Float(x) => format_float(*x),
        }
    }
}

fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let s = format!("{:.*e}", 9, x);
    let v: f64 = s.parse().expect("formatted float");
    let mut out = format!("{v}");
    if out.contains('.') {
        out = out.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    out
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prob::Exact(w) => write!(f, "{w}"),
            Prob::Float(_) => f.write_str(&self.decimal()),
        }
    }
}

/// Verdicts on the three hypotheses of the deadlock-convergence proposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PfVerdict {
    pub unique_reachable_deadlock: bool,
    pub all_return_to_initial: bool,
    pub all_have_self_loop: bool,
}

impl PfVerdict {
    /// When all hold, deadlock probability tends to one.
    pub fn holds(&self) -> bool {
        self.unique_reachable_deadlock && self.all_return_to_initial && self.all_have_self_loop
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisReport {
    pub initial: StateName,
    pub reachable: Vec<StateName>,
    pub transition_count: usize,
    pub deadlocks: Vec<StateName>,
    pub pf: Option<PfVerdict>,
    pub series: Vec<(usize, Prob)>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let names = |v: &[StateName]| v.iter().map(|n| n.flatten().to_string()).collect::<Vec<_>>();
        json!({
            "initial": self.initial.flatten().to_string(),
            "reachable": names(&self.reachable),
            "transitions": self.transition_count,
            "deadlocks": names(&self.deadlocks),
            "pf": self.pf.map(|v| json!({
                "unique_reachable_deadlock": v.unique_reachable_deadlock,
                "all_return_to_initial": v.all_return_to_initial,
                "all_have_self_loop": v.all_have_self_loop,
                "holds": v.holds(),
            })),
            "series": self.series.iter().map(|(k, p)| json!({
                "k": k,
                "value": p.to_string(),
                "decimal": p.decimal(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn locate(aut: &WeightedAutomaton, q0: &Name) -> Result<usize> {
    find_state(aut, q0).ok_or_else(|| Error::UnknownState(q0.clone()))
}

fn reachable_mask(aut: &WeightedAutomaton, start: usize) -> Vec<bool> {
    let succ = aut.successors();
    let mut seen = vec![false; aut.num_states()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for &t in &succ[s] {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    seen
}

/// Restriction to the states reachable from `q0` along positive-weight
/// transitions with any labels.
pub fn reachable_part(aut: &WeightedAutomaton, q0: &Name) -> Result<(WeightedAutomaton, AnalysisReport)> {
    let start = locate(aut, q0)?;
    let part = aut.restrict(&reachable_mask(aut, start));
    let report = AnalysisReport {
        initial: aut.state(start).clone(),
        reachable: part.states().items().to_vec(),
        transition_count: part.num_transitions(),
        deadlocks: Vec::new(),
        pf: None,
        series: Vec::new(),
    };
    Ok((part, report))
}

fn check_closed_markov(aut: &WeightedAutomaton) -> Result<()> {
    if aut.left().len() != 1 || aut.right().len() != 1 {
        return Err(Error::NotClosed);
    }
    if !aut.is_markov() {
        return Err(Error::NotMarkov);
    }
    Ok(())
}

fn deadlock_mask(aut: &WeightedAutomaton) -> Vec<bool> {
    aut.successors().iter().enumerate().map(|(s, succ)| succ.as_slice() == [s]).collect()
}

/// States whose only positive-weight move is their own self-loop.
pub fn deadlock_states(aut: &WeightedAutomaton) -> Result<Vec<StateName>> {
    check_closed_markov(aut)?;
    Ok(deadlock_mask(aut)
        .iter()
        .enumerate()
        .filter(|(_, &d)| d)
        .map(|(i, _)| aut.state(i).clone())
        .collect())
}

/// Checks the proposition's hypotheses on the part reachable from `q0`.
pub fn check_pf_hypotheses(aut: &WeightedAutomaton, q0: &Name) -> Result<AnalysisReport> {
    check_closed_markov(aut)?;
    let (part, mut report) = reachable_part(aut, q0)?;
    let start = part.state_index(&report.initial).expect("initial is reachable");
    let dead = deadlock_mask(&part);
    let n = part.num_states();

    // states that can reach q0: search backwards
    let mut preds = vec![Vec::new(); n];
    for (s, succ) in part.successors().iter().enumerate() {
        for &t in succ {
            preds[t].push(s);
        }
    }
    let mut back = vec![false; n];
    back[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        for &s in &preds[t] {
            if !back[s] {
                back[s] = true;
                queue.push_back(s);
            }
        }
    }
    let mut self_loop = vec![false; n];
    for &(s, _, _, t) in part.table().keys() {
        if s == t {
            self_loop[s] = true;
        }
    }
    report.pf = Some(PfVerdict {
        unique_reachable_deadlock: dead.iter().filter(|&&d| d).count() == 1,
        all_return_to_initial: (0..n).all(|s| dead[s] || back[s]),
        all_have_self_loop: self_loop.iter().all(|&b| b),
    });
    report.deadlocks = (0..n).filter(|&s| dead[s]).map(|s| part.state(s).clone()).collect();
    Ok(report)
}

/// `x0 · Qᵏ` over the total matrix, exactly.
pub fn evolve_exact(aut: &WeightedAutomaton, x0: &[Weight], k: usize) -> Result<Vec<Weight>> {
    let n = aut.num_states();
    if x0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x0.len() });
    }
    let rows = aut.total_rows();
    let mut x = x0.to_vec();
    for _ in 0..k {
        x = step_exact(&rows, &x);
    }
    Ok(x)
}

fn step_exact(rows: &[std::collections::BTreeMap<usize, Weight>], x: &[Weight]) -> Vec<Weight> {
    let mut next = vec![Weight::zero(); x.len()];
    for (s, row) in rows.iter().enumerate() {
        if x[s].is_zero() {
            continue;
        }
        for (&t, w) in row {
            next[t] += &(&x[s] * w);
        }
    }
    next
}

/// `x0 · Qᵏ` in double precision.
pub fn evolve_float(aut: &WeightedAutomaton, x0: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = aut.num_states();
    if x0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x0.len() });
    }
    let rows = float_rows(aut);
    let mut x = x0.to_vec();
    for _ in 0..k {
        x = step_float(&rows, &x);
    }
    Ok(x)
}

fn float_rows(aut: &WeightedAutomaton) -> Vec<Vec<(usize, f64)>> {
    aut.total_rows().iter().map(|r| r.iter().map(|(&t, w)| (t, w.to_f64())).collect()).collect()
}

fn step_float(rows: &[Vec<(usize, f64)>], x: &[f64]) -> Vec<f64> {
    let mut next = vec![0.0; x.len()];
    for (s, row) in rows.iter().enumerate() {
        for &(t, w) in row {
            next[t] += x[s] * w;
        }
    }
    next
}

/// Mass on the marked states after each of `1..=k_max` steps from `q0`.
pub fn probability_series(
    aut: &WeightedAutomaton,
    q0: &Name,
    marked: &[bool],
    k_max: usize,
    mode: Mode,
) -> Result<Vec<(usize, Prob)>> {
    let start = locate(aut, q0)?;
    let n = aut.num_states();
    if marked.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: marked.len() });
    }
    let mut out = Vec::with_capacity(k_max);
    match mode {
        Mode::Exact => {
            let rows = aut.total_rows();
            let mut x = unit_vector(n, start);
            for k in 1..=k_max {
                x = step_exact(&rows, &x);
                let p: Weight = x.iter().zip(marked).filter(|(_, &m)| m).map(|(w, _)| w).sum();
                out.push((k, Prob::Exact(p)));
            }
        }
        Mode::Float => {
            let rows = float_rows(aut);
            let mut x = vec![0.0; n];
            x[start] = 1.0;
            for k in 1..=k_max {
                x = step_float(&rows, &x);
                let p: f64 = x.iter().zip(marked).filter(|(_, &m)| m).map(|(w, _)| w).sum();
                out.push((k, Prob::Float(p)));
            }
        }
    }
    Ok(out)
}

/// Exact mass after `k` steps from `q0` on states satisfying `pred`.
pub fn subset_probability(
    aut: &WeightedAutomaton,
    q0: &Name,
    pred: &StatePredicate,
    k: usize,
) -> Result<Weight> {
    let start = locate(aut, q0)?;
    let x = evolve_exact(aut, &unit_vector(aut.num_states(), start), k)?;
    let marked = pred.mask(aut);
    Ok(x.iter().zip(&marked).filter(|(_, &m)| m).map(|(w, _)| w).sum())
}

/// Deadlock mass after each of `1..=k_max` steps; deadlocks are absorbing, so
/// this is also the probability of having deadlocked within `k` steps.
pub fn deadlock_probability_series(aut: &WeightedAutomaton, q0: &Name, k_max: usize) -> Result<Vec<(usize, Weight)>> {
    check_closed_markov(aut)?;
    let marked = deadlock_mask(aut);
    Ok(probability_series(aut, q0, &marked, k_max, Mode::Exact)?
        .into_iter()
        .map(|(k, p)| match p {
            Prob::Exact(w) => (k, w),
            Prob::Float(_) => unreachable!("exact mode"),
        })
        .collect())
}

/// Seat components of a birthday-party state: even positions of the flat tuple.
fn seats(name: &Name) -> Vec<Name> {
    match name.flatten() {
        Name::Tuple(items) => items.into_iter().step_by(2).collect(),
        other => vec![other],
    }
}

/// Number of states with a child eating, and whether no state has two.
pub fn eating_state_count(aut: &WeightedAutomaton) -> (usize, bool) {
    let eating = Name::Num(3);
    let mut count = 0;
    let mut exclusive = true;
    for s in aut.states().iter() {
        let n = seats(s).iter().filter(|c| **c == eating).count();
        if n > 0 {
            count += 1;
        }
        if n > 1 {
            exclusive = false;
        }
    }
    (count, exclusive)
}

/// Target sets for probability queries.
///
/// Text forms: `deadlock`, `eating`, `state=(1,2)`, `comp[i]=v`, and
/// alternatives joined by `|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StatePredicate {
    Deadlock,
    /// Some seat component (even position of the flat tuple) is `3`.
    Eating,
    State(Name),
    /// Position `i` of the flat tuple equals the value.
    Component(usize, Name),
    Any(Vec<StatePredicate>),
}

impl StatePredicate {
    pub fn parse(text: &str) -> std::result::Result<StatePredicate, String> {
        let alts: Vec<&str> = text.split('|').map(str::trim).collect();
        if alts.len() > 1 {
            return alts.into_iter().map(Self::parse).collect::<std::result::Result<_, _>>().map(StatePredicate::Any);
        }
        let t = alts[0];
        if t == "deadlock" {
            return Ok(StatePredicate::Deadlock);
        }
        if t == "eating" {
            return Ok(StatePredicate::Eating);
        }
        if let Some(rest) = t.strip_prefix("state=") {
            return parse_state_name(rest).map(StatePredicate::State);
        }
        if let Some(rest) = t.strip_prefix("comp[") {
            let (idx, val) = rest.split_once("]=").ok_or_else(|| format!("expected comp[i]=v, got `{t}`"))?;
            let i = idx.trim().parse().map_err(|_| format!("bad component index `{idx}`"))?;
            return parse_state_name(val).map(|v| StatePredicate::Component(i, v));
        }
        Err(format!("unknown predicate `{t}`"))
    }

    pub fn holds(&self, aut: &WeightedAutomaton, i: usize) -> bool {
        self.mask(aut)[i]
    }

    /// Marks the states satisfying the predicate.
    pub fn mask(&self, aut: &WeightedAutomaton) -> Vec<bool> {
        match self {
            StatePredicate::Deadlock => deadlock_mask(aut),
            StatePredicate::Eating => {
                aut.states().iter().map(|s| seats(s).contains(&Name::Num(3))).collect()
            }
            StatePredicate::State(n) => {
                let hit = find_state(aut, n);
                (0..aut.num_states()).map(|i| Some(i) == hit).collect()
            }
            StatePredicate::Component(i, v) => aut
                .states()
                .iter()
                .map(|s| match s.flatten() {
                    Name::Tuple(items) => items.get(*i) == Some(v),
                    other => *i == 0 && &other == v,
                })
                .collect(),
            StatePredicate::Any(ps) => {
                let masks: Vec<Vec<bool>> = ps.iter().map(|p| p.mask(aut)).collect();
                (0..aut.num_states()).map(|i| masks.iter().any(|m| m[i])).collect()
            }
        }
    }
}

/// Parses a state name such as `3`, `e` or `(5,1,1)` with nesting allowed.
pub fn parse_state_name(text: &str) -> std::result::Result<Name, String> {
    fn inner(s: &str, pos: &mut usize) -> std::result::Result<Name, String> {
        let bytes = s.as_bytes();
        while *pos < bytes.len() && bytes[*pos] == b' ' {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'(' {
            *pos += 1;
            let mut items = vec![inner(s, pos)?];
            loop {
                while *pos < bytes.len() && bytes[*pos] == b' ' {
                    *pos += 1;
                }
                match bytes.get(*pos) {
                    Some(b',') => {
                        *pos += 1;
                        items.push(inner(s, pos)?);
                    }
                    Some(b')') => {
                        *pos += 1;
                        return Ok(Name::Tuple(items));
                    }
                    _ => return Err(format!("unterminated tuple in `{s}`")),
                }
            }
        }
        for (prefix, side) in [("L:", crate::name::Side::Left), ("R:", crate::name::Side::Right)] {
            if s[*pos..].starts_with(prefix) {
                *pos += 2;
                return Ok(Name::tagged(side, inner(s, pos)?));
            }
        }
        let start = *pos;
        while *pos < bytes.len() && !matches!(bytes[*pos], b',' | b')' | b'(' | b' ') {
            *pos += 1;
        }
        if start == *pos {
            return Err(format!("expected a name in `{s}`"));
        }
        Ok(Name::atom(&s[start..*pos]))
    }
    let mut pos = 0;
    let n = inner(text.trim(), &mut pos)?;
    if pos != text.trim().len() {
        return Err(format!("trailing input in `{text}`"));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn w(n: u64, d: u64) -> Weight {
        Weight::ratio(n, d)
    }

    fn identity(n: usize) -> WeightedAutomaton {
        let rows: Vec<Vec<(usize, Weight)>> = (0..n).map(|i| vec![(i, Weight::one())]).collect();
        let refs: Vec<&[(usize, Weight)]> = rows.iter().map(|r| r.as_slice()).collect();
        fixtures::closed_chain(&refs)
    }

    #[test]
    fn identity_matrix_deadlocks_everywhere() {
        let id = identity(3);
        assert_eq!(deadlock_states(&id).unwrap().len(), 3);
        let r = check_pf_hypotheses(&identity(2), &Name::Num(1)).unwrap();
        // only state 1 is reachable from itself
        assert_eq!(r.reachable, vec![Name::Num(1)]);
        assert!(r.pf.unwrap().holds());
        let series = deadlock_probability_series(&id, &Name::Num(2), 3).unwrap();
        assert!(series.iter().all(|(_, p)| p.is_one()));
    }

    #[test]
    fn two_deadlocks_reachable() {
        let a = fixtures::closed_chain(&[
            &[(0, w(1, 2)), (1, w(1, 4)), (2, w(1, 4))],
            &[(1, Weight::one())],
            &[(2, Weight::one())],
        ]);
        let v = check_pf_hypotheses(&a, &Name::Num(1)).unwrap().pf.unwrap();
        assert!(!v.unique_reachable_deadlock);
        assert!(v.all_have_self_loop);
    }

    #[test]
    fn chain_without_self_loops() {
        let a = fixtures::closed_chain(&[&[(1, Weight::one())], &[(0, Weight::one())]]);
        let v = check_pf_hypotheses(&a, &Name::Num(1)).unwrap().pf.unwrap();
        assert!(!v.all_have_self_loop);
        assert!(!v.unique_reachable_deadlock);
        assert!(v.all_return_to_initial);
    }

    #[test]
    fn preconditions() {
        assert_eq!(deadlock_states(&fixtures::phil()), Err(Error::NotClosed));
        let not_markov = fixtures::closed_chain(&[&[(0, w(1, 2))]]);
        assert_eq!(deadlock_states(&not_markov), Err(Error::NotMarkov));
        assert!(matches!(reachable_part(&identity(2), &Name::Num(7)), Err(Error::UnknownState(_))));
        assert!(matches!(evolve_exact(&identity(2), &[Weight::one()], 1), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn self_loop_only_is_one_state() {
        let a = fixtures::closed_chain(&[&[(0, Weight::one())], &[(0, Weight::one())]]);
        let (part, rep) = reachable_part(&a, &Name::Num(1)).unwrap();
        assert_eq!(part.num_states(), 1);
        assert_eq!(rep.transition_count, 1);
        let (again, _) = reachable_part(&part, &Name::Num(1)).unwrap();
        assert_eq!(again, part);
    }

    #[test]
    fn evolution_preserves_mass_and_modes_agree() {
        let a = fixtures::closed_chain(&[
            &[(0, w(1, 3)), (1, w(2, 3))],
            &[(0, w(1, 5)), (2, w(4, 5))],
            &[(2, w(1, 2)), (0, w(1, 2))],
        ]);
        let x0 = unit_vector(3, 0);
        assert_eq!(evolve_exact(&a, &x0, 0).unwrap(), x0);
        for k in 1..20 {
            let x = evolve_exact(&a, &x0, k).unwrap();
            assert!(x.iter().sum::<Weight>().is_one());
            let f = evolve_float(&a, &[1.0, 0.0, 0.0], k).unwrap();
            for (e, g) in x.iter().zip(&f) {
                assert!((e.to_f64() - g).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn predicates() {
        assert_eq!(StatePredicate::parse("eating").unwrap(), StatePredicate::Eating);
        assert_eq!(
            StatePredicate::parse("state=(1,(2,3)) | comp[2]=e").unwrap(),
            StatePredicate::Any(vec![
                StatePredicate::State(Name::Tuple(vec![Name::Num(1), Name::pair(Name::Num(2), Name::Num(3))])),
                StatePredicate::Component(2, Name::sym("e")),
            ])
        );
        assert!(StatePredicate::parse("hungry").is_err());
        assert!(parse_state_name("(1,2").is_err());
        assert_eq!(parse_state_name("L:x").unwrap(), Name::left(Name::sym("x")));
    }

    #[test]
    fn eating_count_on_tuples() {
        let t = |xs: &[u64]| Name::Tuple(xs.iter().map(|&x| Name::Num(x)).collect());
        let a = WeightedAutomaton::from_named(
            vec![t(&[3, 1, 1, 3]), t(&[3, 3, 1, 1]), t(&[1, 1, 1, 1])],
            crate::Alphabet::unit(),
            crate::Alphabet::unit(),
            vec![],
            vec![],
            vec![],
        )
        .unwrap();
        // (3,1,1,3): seat positions 0 and 2 -> one eater; (3,3,1,1): one eater
        assert_eq!(eating_state_count(&a), (2, true));
        let empty = fixtures::closed_chain(&[]);
        assert_eq!(eating_state_count(&empty), (0, true));
    }

    #[test]
    fn float_decimal_rendering() {
        assert_eq!(Prob::Float(0.37680582214).decimal(), "0.3768058221");
        assert_eq!(Prob::Exact(w(19, 60)).decimal(), "0.3166666667");
        assert_eq!(Prob::Exact(w(19, 60)).to_string(), "19/60");
    }
}
