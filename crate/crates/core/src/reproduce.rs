//! Checks of the reference numbers for the dining philosophers, the
//! birthday party, and the normalization lemmas on random instances.
//!
//! Every check yields one line `PASS <id> expected=<v> got=<v>`.

use std::collections::BTreeSet;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    check_pf_hypotheses, deadlock_probability_series, eating_state_count, parse_state_name, probability_series,
    reachable_part, Mode, Prob, StatePredicate,
};
use crate::automaton::{find_state, WeightedAutomaton};
use crate::dsl::{self, dining_initial, dining_source, sofia_initial, sofia_source};
use crate::error::{Error, Result};
use crate::name::{Label, Name};
use crate::ops::{communicating_parallel, parallel_product};
use crate::random::{random_automaton, random_over, Shape};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub id: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

impl Check {
    pub fn new(id: &str, expected: impl ToString, got: impl ToString) -> Check {
        let (expected, got) = (expected.to_string(), got.to_string());
        Check { id: id.to_string(), pass: expected == got, expected, got }
    }

    /// A check whose verdict is decided by the caller.
    pub fn judged(id: &str, expected: impl ToString, got: impl ToString, pass: bool) -> Check {
        Check { id: id.to_string(), expected: expected.to_string(), got: got.to_string(), pass }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} expected={} got={}", self.id, self.expected, self.got)
    }
}

/// Reachable states of the two-philosopher ring, in reference order.
pub const DF2_STATES: [&str; 8] = [
    "(1,1,1,1)",
    "(1,3,3,2)",
    "(3,2,1,3)",
    "(1,1,4,2)",
    "(4,2,1,1)",
    "(1,3,2,1)",
    "(2,1,1,3)",
    "(2,3,2,3)",
];

/// Total transition matrix over [`DF2_STATES`].
pub const DF2_MATRIX: [[&str; 8]; 8] = [
    ["1/4", "0", "0", "0", "0", "1/4", "1/4", "1/4"],
    ["0", "1/2", "0", "1/2", "0", "0", "0", "0"],
    ["0", "0", "1/2", "0", "1/2", "0", "0", "0"],
    ["1/2", "0", "0", "1/2", "0", "0", "0", "0"],
    ["1/2", "0", "0", "0", "1/2", "0", "0", "0"],
    ["0", "1/3", "0", "0", "0", "1/3", "0", "1/3"],
    ["0", "0", "1/3", "0", "0", "0", "1/3", "1/3"],
    ["0", "0", "0", "0", "0", "0", "0", "1"],
];

/// Deadlock probability after k steps, k = 2, 3, 4.
pub const DF2_DEADLOCK: [(usize, &str); 3] = [(2, "23/48"), (3, "341/576"), (4, "4415/6912")];

/// Reachable states of the party with three seats and two children.
pub const SOFIA_STATES: [&str; 36] = [
    "(5,1,1,1,1,1)", "(5,1,1,3,2,1)", "(5,3,2,1,1,1)", "(5,3,2,3,2,1)",
    "(1,1,1,1,5,1)", "(1,3,2,1,5,1)", "(5,1,1,3,3,2)", "(5,3,2,3,3,2)",
    "(5,3,3,2,1,1)", "(1,3,3,2,5,1)", "(1,1,5,1,1,1)", "(2,1,1,1,5,3)",
    "(2,1,5,1,1,3)", "(2,3,2,1,5,3)", "(2,3,3,2,5,3)", "(5,1,1,1,4,2)",
    "(5,3,2,1,4,2)", "(5,1,4,2,1,1)", "(1,1,4,2,5,1)", "(2,1,4,2,5,3)",
    "(1,1,5,3,2,1)", "(2,1,5,3,2,3)", "(3,2,1,1,5,3)", "(3,2,5,1,1,3)",
    "(3,2,5,3,2,3)", "(5,3,3,2,4,2)", "(3,2,4,2,5,3)", "(1,1,5,3,3,2)",
    "(4,2,1,1,5,1)", "(4,2,5,1,1,1)", "(4,2,5,3,2,1)", "(5,1,4,2,4,2)",
    "(4,2,4,2,5,1)", "(1,1,5,1,4,2)", "(4,2,5,3,3,2)", "(4,2,5,1,4,2)",
];

/// Probability that some child is eating after k steps, k = 1..5.
pub const SOFIA_EATING: [&str; 5] = ["0", "19/60", "98/225", "49133/108000", "1473023/3240000"];

/// The same after 100 steps, to ten significant digits.
pub const SOFIA_EATING_100: &str = "0.3768058221";

fn name(text: &str) -> Name {
    parse_state_name(text).expect("well-formed state literal")
}

fn dsl_err(e: dsl::DslError) -> Error {
    Error::Eval(e.to_string())
}

/// The closed ring of `n` philosophers, before restricting to reachable states.
pub fn dining_ring(n: usize) -> Result<WeightedAutomaton> {
    let file = dsl::parse(&dining_source(&[n])).map_err(dsl_err)?;
    dsl::eval(&file, &format!("DF{n}")).map_err(dsl_err)
}

/// The party with the given seats and children.
pub fn party(seats: usize, children: usize) -> Result<WeightedAutomaton> {
    let file = dsl::parse(&sofia_source(seats, children)).map_err(dsl_err)?;
    dsl::eval(&file, &format!("Sofia{seats}_{children}")).map_err(dsl_err)
}

fn flat_set(aut: &WeightedAutomaton) -> BTreeSet<String> {
    aut.states().iter().map(|s| s.flatten().to_string()).collect()
}

fn pf_summary(aut: &WeightedAutomaton, q0: &Name) -> Result<(String, String)> {
    let r = check_pf_hypotheses(aut, q0)?;
    let v = r.pf.expect("pf verdict");
    let dead: Vec<String> = r.deadlocks.iter().map(|d| d.flatten().to_string()).collect();
    Ok((
        format!(
            "unique={},return={},loops={}",
            v.unique_reachable_deadlock, v.all_return_to_initial, v.all_have_self_loop
        ),
        dead.join(";"),
    ))
}

/// The two-philosopher ring: states, matrix, deadlock series and convergence.
pub fn df2() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let ring = dining_ring(2)?;
    let q0 = dining_initial(2);
    let (part, _) = reachable_part(&ring, &q0)?;
    out.push(Check::new("df2.reachable_states", 8, part.num_states()));
    let expected: BTreeSet<String> = DF2_STATES.iter().map(|s| s.to_string()).collect();
    let got = flat_set(&part);
    out.push(Check::judged(
        "df2.state_names",
        "reference",
        if got == expected { "reference".to_string() } else { format!("{got:?}") },
        got == expected,
    ));

    // matrix in reference order
    let order: Vec<Option<usize>> = DF2_STATES.iter().map(|s| find_state(&part, &name(s))).collect();
    let total = part.total_matrix();
    let mut mismatches = Vec::new();
    for (i, row) in DF2_MATRIX.iter().enumerate() {
        for (j, want) in row.iter().enumerate() {
            let have = match (order[i], order[j]) {
                (Some(a), Some(b)) => total[a][b].to_string(),
                _ => "missing".to_string(),
            };
            if have != *want {
                mismatches.push(format!("q{}q{}={have}", i + 1, j + 1));
            }
        }
    }
    out.push(Check::new(
        "df2.matrix",
        "0 mismatches",
        if mismatches.is_empty() { "0 mismatches".to_string() } else { mismatches.join(",") },
    ));

    let (verdict, dead) = pf_summary(&ring, &q0)?;
    out.push(Check::new("df2.deadlock_state", "(2,3,2,3)", dead));
    out.push(Check::new("df2.pf_hypotheses", "unique=true,return=true,loops=true", verdict));

    let series = deadlock_probability_series(&part, &q0, 4)?;
    for (k, want) in DF2_DEADLOCK {
        out.push(Check::new(&format!("df2.deadlock_k{k}"), want, &series[k - 1].1));
    }

    // monotone and converging
    let marked = StatePredicate::Deadlock.mask(&part);
    let exact = probability_series(&part, &q0, &marked, 60, Mode::Exact)?;
    let monotone = exact.windows(2).all(|w| match (&w[0].1, &w[1].1) {
        (Prob::Exact(a), Prob::Exact(b)) => a <= b,
        _ => false,
    });
    out.push(Check::new("df2.monotone_k60", true, monotone));
    let float = probability_series(&part, &q0, &marked, 10_000, Mode::Float)?;
    let hit = float.iter().find(|(_, p)| p.to_f64() >= 0.99).map(|(k, _)| *k);
    out.push(Check::judged(
        "df2.reaches_0.99",
        "some k<=10000",
        hit.map_or("never".to_string(), |k| format!("k={k}")),
        hit.is_some(),
    ));

    let ring3 = dining_ring(3)?;
    let (verdict, dead) = pf_summary(&ring3, &dining_initial(3))?;
    out.push(Check::new("df3.deadlock_state", "(2,3,2,3,2,3)", dead));
    out.push(Check::new("df3.pf_hypotheses", "unique=true,return=true,loops=true", verdict));
    Ok(out)
}

/// The party with three seats and two children.
pub fn sofia() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let aut = party(3, 2)?;
    let q0 = sofia_initial(3, 2);
    let (part, _) = reachable_part(&aut, &q0)?;
    out.push(Check::new("sofia.reachable_states", 36, part.num_states()));
    let expected: BTreeSet<String> = SOFIA_STATES.iter().map(|s| s.to_string()).collect();
    let got = flat_set(&part);
    let missing: Vec<&String> = expected.difference(&got).collect();
    let extra: Vec<&String> = got.difference(&expected).collect();
    out.push(Check::judged(
        "sofia.state_names",
        "reference",
        if missing.is_empty() && extra.is_empty() {
            "reference".to_string()
        } else {
            format!("missing={missing:?},extra={extra:?}")
        },
        missing.is_empty() && extra.is_empty(),
    ));
    out.push(Check::new("sofia.transitions", 141, part.num_transitions()));
    let (eating, exclusive) = eating_state_count(&part);
    out.push(Check::new("sofia.eating_states", 12, eating));
    out.push(Check::new("sofia.one_child_eats", true, exclusive));

    let marked = StatePredicate::Eating.mask(&part);
    let exact = probability_series(&part, &q0, &marked, 100, Mode::Exact)?;
    for (k, want) in SOFIA_EATING.iter().enumerate() {
        out.push(Check::new(&format!("sofia.eating_k{}", k + 1), want, &exact[k].1));
    }
    out.push(Check::new("sofia.eating_k100", SOFIA_EATING_100, exact[99].1.decimal()));

    let float = probability_series(&part, &q0, &marked, 100, Mode::Float)?;
    let drift = exact.iter().zip(&float).map(|((_, a), (_, b))| (a.to_f64() - b.to_f64()).abs()).fold(0.0, f64::max);
    out.push(Check::judged("sofia.float_agrees", "<=1e-12", format!("{drift:.3e}"), drift <= 1e-12));
    Ok(out)
}

/// Weight-wise equality after relabelling `p`'s labels into `q`'s alphabets.
pub fn equal_up_to_labels(
    p: &WeightedAutomaton,
    q: &WeightedAutomaton,
    left: impl Fn(&Label) -> Label,
    right: impl Fn(&Label) -> Label,
) -> bool {
    if p.states() != q.states()
        || p.top() != q.top()
        || p.bottom() != q.bottom()
        || p.left().len() != q.left().len()
        || p.right().len() != q.right().len()
        || p.num_transitions() != q.num_transitions()
    {
        return false;
    }
    let lmap: Vec<Option<usize>> = p.left().labels().iter().map(|l| q.left().index_of(&left(l))).collect();
    let rmap: Vec<Option<usize>> = p.right().labels().iter().map(|l| q.right().index_of(&right(l))).collect();
    if lmap.iter().chain(&rmap).any(Option::is_none) {
        return false;
    }
    p.table().iter().all(|(&(s, a, b, t), w)| {
        q.table().get(&(s, lmap[a].expect("mapped"), rmap[b].expect("mapped"), t)) == Some(w)
    })
}

/// `((a1,c1),..,(ak,ck))` to `((a1,..,ak),(c1,..,ck))`.
pub fn unzip_word(label: &Label) -> Label {
    match label {
        Name::Tuple(items) => {
            let (mut u, mut v) = (Vec::new(), Vec::new());
            for item in items {
                match item {
                    Name::Tuple(pair) if pair.len() == 2 => {
                        u.push(pair[0].clone());
                        v.push(pair[1].clone());
                    }
                    other => return other.clone(),
                }
            }
            Name::pair(Name::Tuple(u), Name::Tuple(v))
        }
        other => other.clone(),
    }
}

/// Bounds for lemma instances. Sparse enough that cubing a product stays small.
pub const LEMMA_SHAPE: Shape = Shape { max_states: 4, max_labels: 3, density: 0.12, positive: true };

/// Which of the three lemmas held on one random instance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LemmaOutcome {
    pub normalize_product: bool,
    pub power_product: bool,
    pub normalize_parallel: bool,
}

/// Runs the three lemmas on instance `index` of the stream seeded by `seed`.
pub fn lemma_instance(seed: u64, index: u64) -> Result<LemmaOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let shape = LEMMA_SHAPE;
    let q = random_automaton(&mut rng, shape);
    let r = random_automaton(&mut rng, shape);

    // N(Q × R) = N(Q) × N(R)
    let normalize_product = parallel_product(&q, &r).normalize()? == parallel_product(&q.normalize()?, &r.normalize()?);

    // (Q × R)^k = Q^k × R^k up to regrouping the labels
    let k = 1 + (index as usize % 3);
    let lhs = parallel_product(&q, &r).k_step(k)?;
    let rhs = parallel_product(&q.k_step(k)?, &r.k_step(k)?);
    let power_product = equal_up_to_labels(&lhs, &rhs, unzip_word, unzip_word);

    // N(N(Q) || N(R')) = N(Q || R') where R' reads Q's right interface
    let right = crate::random::alphabet("c", 1 + (index as usize % 3));
    let r2 = random_over(&mut rng, q.right(), &right, shape);
    let composite = communicating_parallel(&q, &r2)?;
    let normalize_parallel = communicating_parallel(&q.normalize()?, &r2.normalize()?)?.normalize()?
        == composite.normalize()?;

    Ok(LemmaOutcome { normalize_product, power_product, normalize_parallel })
}

/// The three lemmas on `count` seeded random instances.
pub fn lemmas(seed: u64, count: u64) -> Result<Vec<Check>> {
    let mut passed = [0u64; 3];
    let mut first_fail: [Option<u64>; 3] = [None; 3];
    for i in 0..count {
        let o = lemma_instance(seed, i)?;
        for (j, ok) in [o.normalize_product, o.power_product, o.normalize_parallel].into_iter().enumerate() {
            if ok {
                passed[j] += 1;
            } else if first_fail[j].is_none() {
                first_fail[j] = Some(i);
            }
        }
    }
    let ids = ["lemma.normalize_product", "lemma.power_product", "lemma.normalize_parallel"];
    Ok(ids
        .iter()
        .enumerate()
        .map(|(j, id)| {
            let got = match first_fail[j] {
                None => format!("{}/{count}", passed[j]),
                Some(i) => format!("{}/{count} first_failure=instance{i}", passed[j]),
            };
            Check::judged(id, format!("{count}/{count}"), got, passed[j] == count)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unzip_regroups() {
        let l = name("((a,c),(b,d))");
        assert_eq!(unzip_word(&l), name("((a,b),(c,d))"));
    }

    #[test]
    fn lemma_stream_is_deterministic() {
        assert_eq!(lemma_instance(3, 5).unwrap(), lemma_instance(3, 5).unwrap());
    }

    #[test]
    fn reference_numbers() {
        for c in df2().unwrap().into_iter().chain(sofia().unwrap()).chain(lemmas(1, 20).unwrap()) {
            println!("{c}");
            assert!(c.pass, "{c}");
        }
    }
}
