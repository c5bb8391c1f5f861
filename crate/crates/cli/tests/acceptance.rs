//! The ten acceptance criteria. Each prints one PASS/FAIL line; the test
//! fails if any criterion does.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use markov_compose::alphabet::OrderedSet;
use markov_compose::dsl::{self, builtin_names, builtin_source, pretty_print};
use markov_compose::ops::{
    communicating_parallel, elementary_decomposition, par_wire, seq_compose, seq_wire, ParWireKind, SeqWireKind,
};
use markov_compose::random::{self, random_automaton, with_random_interfaces, Shape};
use markov_compose::reproduce::{self, Check};
use markov_compose::{fixtures, is_isomorphic, Alphabet, Name, Weight, WeightedAutomaton};

const SEED: u64 = 20_160_518;

type Verdict = Result<String, String>;

fn ensure(ok: bool, detail: impl Into<String>) -> Verdict {
    let detail = detail.into();
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit_secs: f64) -> Verdict {
    ensure(elapsed.as_secs_f64() < limit_secs, format!("{:.2}s (limit {limit_secs}s)", elapsed.as_secs_f64()))
}

fn checks_pass(checks: &[Check], ids: &[&str]) -> Verdict {
    for id in ids {
        let c = checks.iter().find(|c| c.id == *id).ok_or(format!("no check {id}"))?;
        if !c.pass {
            return Err(c.to_string());
        }
    }
    Ok(format!("{} checks", ids.len()))
}

fn all_pass(checks: &[Check]) -> Verdict {
    match checks.iter().find(|c| !c.pass) {
        Some(c) => Err(c.to_string()),
        None => Ok(format!("{} checks", checks.len())),
    }
}

fn timed(limit_secs: f64, f: impl FnOnce() -> Verdict) -> Verdict {
    let start = Instant::now();
    let detail = f()?;
    let time = within(start.elapsed(), limit_secs)?;
    Ok(format!("{detail}, {time}"))
}

fn df2_reproduction() -> Verdict {
    timed(1.0, || {
        let checks = reproduce::df2().map_err(|e| e.to_string())?;
        checks_pass(&checks, &["df2.reachable_states", "df2.state_names", "df2.matrix"])
    })
}

fn df2_deadlock_series() -> Verdict {
    let checks = reproduce::df2().map_err(|e| e.to_string())?;
    checks_pass(
        &checks,
        &[
            "df2.deadlock_k2",
            "df2.deadlock_k3",
            "df2.deadlock_k4",
            "df2.pf_hypotheses",
            "df3.pf_hypotheses",
            "df2.monotone_k60",
            "df2.reaches_0.99",
        ],
    )
}

fn sofia() -> Verdict {
    timed(10.0, || all_pass(&reproduce::sofia().map_err(|e| e.to_string())?))
}

fn lemmas() -> Verdict {
    timed(30.0, || all_pass(&reproduce::lemmas(SEED, 200).map_err(|e| e.to_string())?))
}

fn decomposes_back(q: &WeightedAutomaton) -> Result<bool, String> {
    let d = elementary_decomposition(q).map_err(|e| e.to_string())?;
    let back = d.evaluate().map_err(|e| e.to_string())?;
    is_isomorphic(&back, q).map_err(|e| e.to_string())
}

fn decomposition() -> Verdict {
    timed(10.0, || {
        ensure(decomposes_back(&fixtures::example())?, "example")?;
        let mut rng = random::seeded(SEED);
        for i in 0..100 {
            let q = random_automaton(&mut rng, Shape { density: 0.15, ..Shape::default() });
            let q = with_random_interfaces(&mut rng, &q, 3);
            ensure(decomposes_back(&q)?, format!("random instance {i}"))?;
        }
        Ok("example and 100 random".into())
    })
}

fn points(n: usize, prefix: &str) -> OrderedSet {
    OrderedSet::from_distinct((0..n).map(|i| Name::sym(&format!("{prefix}{i}"))).collect())
}

fn iso(p: &WeightedAutomaton, q: &WeightedAutomaton) -> Result<bool, String> {
    is_isomorphic(p, q).map_err(|e| e.to_string())
}

fn wire_laws() -> Verdict {
    let s = |r: markov_compose::Result<WeightedAutomaton>| r.map_err(|e| e.to_string());
    let mut laws = 0;
    for n in 0..=4 {
        let x = points(n, "x");
        let id = s(seq_wire(SeqWireKind::Identity, std::slice::from_ref(&x)))?;
        let split = s(seq_wire(SeqWireKind::CodiagOp, std::slice::from_ref(&x)))?;
        let join = s(seq_wire(SeqWireKind::Codiag, std::slice::from_ref(&x)))?;
        ensure(iso(&s(seq_compose(&split, &join))?, &id)?, format!("seq separable |X|={n}"))?;
        for m in 0..=4 {
            let y = points(m, "y");
            let tw = s(seq_wire(SeqWireKind::Twist, &[x.clone(), y.clone()]))?;
            let back = s(seq_wire(SeqWireKind::Twist, &[y.clone(), x.clone()]))?;
            let id_xy = s(seq_wire(SeqWireKind::Identity, &[x.product(&y)]))?;
            ensure(iso(&s(seq_compose(&tw, &back))?, &id_xy)?, format!("seq twist |X|={n} |Y|={m}"))?;
            laws += 1;
        }
        laws += 1;
    }
    for n in 1..=4 {
        let a = random::alphabet("a", n);
        let id = s(par_wire(ParWireKind::Identity, std::slice::from_ref(&a)))?;
        let diag = s(par_wire(ParWireKind::Diag, std::slice::from_ref(&a)))?;
        let diag_op = s(par_wire(ParWireKind::DiagOp, std::slice::from_ref(&a)))?;
        ensure(iso(&s(communicating_parallel(&diag, &diag_op))?, &id)?, format!("par separable |A|={n}"))?;
        for m in 1..=4 {
            let b = random::alphabet("b", m);
            let tw = s(par_wire(ParWireKind::Twist, &[a.clone(), b.clone()]))?;
            let back = s(par_wire(ParWireKind::Twist, &[b.clone(), a.clone()]))?;
            let id_ab = s(par_wire(ParWireKind::Identity, &[a.product(&b)]))?;
            ensure(iso(&s(communicating_parallel(&tw, &back))?, &id_ab)?, format!("par twist |A|={n} |B|={m}"))?;
            laws += 1;
        }
        laws += 1;
    }
    // identity wires are units on random automata with interfaces
    let mut rng = random::seeded(SEED);
    for i in 0..20 {
        let base = random_automaton(&mut rng, Shape::default());
        let q = with_random_interfaces(&mut rng, &base, 4);
        let top = s(seq_wire(SeqWireKind::Identity, &[q.top().domain().clone()]))?;
        let bottom = s(seq_wire(SeqWireKind::Identity, &[q.bottom().domain().clone()]))?;
        ensure(iso(&s(seq_compose(&top, &q))?, &q)?, format!("seq left unit {i}"))?;
        ensure(iso(&s(seq_compose(&q, &bottom))?, &q)?, format!("seq right unit {i}"))?;
        let left = s(par_wire(ParWireKind::Identity, &[q.left().clone()]))?;
        let right = s(par_wire(ParWireKind::Identity, &[q.right().clone()]))?;
        ensure(s(communicating_parallel(&left, &q))? == q, format!("par left unit {i}"))?;
        ensure(s(communicating_parallel(&q, &right))? == q, format!("par right unit {i}"))?;
        laws += 4;
    }
    Ok(format!("{laws} law instances"))
}

/// Sum over all state paths of the products of single-step weights.
fn brute_force(q: &WeightedAutomaton, s: usize, u: &[usize], v: &[usize], t: usize) -> Weight {
    fn walk(q: &WeightedAutomaton, at: usize, u: &[usize], v: &[usize], t: usize) -> Weight {
        if u.is_empty() {
            return if at == t { Weight::one() } else { Weight::zero() };
        }
        let mut total = Weight::zero();
        for next in 0..q.num_states() {
            if let Some(w) = q.table().get(&(at, u[0], v[0], next)) {
                total += w * &walk(q, next, &u[1..], &v[1..], t);
            }
        }
        total
    }
    walk(q, s, u, v, t)
}

fn words(size: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|w| (0..size).map(move |a| [w.clone(), vec![a]].concat())).collect();
    }
    out
}

fn k_step_oracle() -> Verdict {
    let mut rng = random::seeded(SEED + 7);
    let mut compared = 0usize;
    for i in 0..100 {
        let q = random_automaton(&mut rng, Shape::default());
        let k = 1 + i % 3;
        let qk = q.k_step(k).map_err(|e| e.to_string())?;
        let mut nonzero = 0;
        for u in words(q.left().len(), k) {
            let lu = Name::Tuple(u.iter().map(|&a| q.left().label(a).clone()).collect());
            let a = qk.left().index_of(&lu).ok_or(format!("missing word {lu}"))?;
            for v in words(q.right().len(), k) {
                let lv = Name::Tuple(v.iter().map(|&b| q.right().label(b).clone()).collect());
                let b = qk.right().index_of(&lv).ok_or(format!("missing word {lv}"))?;
                for s in 0..q.num_states() {
                    for t in 0..q.num_states() {
                        let want = brute_force(&q, s, &u, &v, t);
                        let got = qk.table().get(&(s, a, b, t)).cloned().unwrap_or_else(Weight::zero);
                        ensure(want == got, format!("instance {i}: {s}-[{lu}/{lv}]->{t} want {want} got {got}"))?;
                        nonzero += usize::from(!want.is_zero());
                        compared += 1;
                    }
                }
            }
        }
        ensure(nonzero == qk.num_transitions(), format!("instance {i}: extra entries"))?;
    }
    Ok(format!("{compared} entries on 100 automata"))
}

fn matrix(rows: &[&[(u64, u64)]]) -> Vec<Vec<Weight>> {
    rows.iter().map(|r| r.iter().map(|&(p, q)| Weight::ratio(p, q)).collect()).collect()
}

fn model_fidelity() -> Verdict {
    let lib = dsl::parse(&builtin_source("fork").unwrap()).map_err(|e| e.to_string())?;
    let phil = dsl::eval(&lib, "Phil").map_err(|e| e.to_string())?;
    let fork = dsl::eval(&lib, "Fork").map_err(|e| e.to_string())?;
    ensure(phil.is_markov() && fork.is_markov(), "Phil and Fork are Markov")?;
    let h = (1, 2);
    let z = (0, 1);
    let t = (1, 3);
    let phil_total = matrix(&[&[h, h, z, z], &[z, h, h, z], &[z, z, h, h], &[h, z, z, h]]);
    let fork_total = matrix(&[&[t, t, t], &[h, h, z], &[h, z, h]]);
    ensure(phil.total_matrix() == phil_total, "Phil total matrix")?;
    ensure(fork.total_matrix() == fork_total, "Fork total matrix")?;

    // the example's two label matrices survive print and re-parse
    let src = builtin_source("example").unwrap();
    let once = dsl::parse(&src).map_err(|e| e.to_string())?;
    let twice = dsl::parse(&pretty_print(&once)).map_err(|e| e.to_string())?;
    let ex = dsl::eval(&twice, "Example").map_err(|e| e.to_string())?;
    let b = |x: &str| ex.right().index_of(&Name::pair(Name::sym(x), Name::sym("c"))).unwrap();
    let m1 = matrix(&[&[z, (2, 1), z], &[z, (3, 1), z], &[z, z, z]]);
    let m2 = matrix(&[&[z, z, z], &[z, z, (1, 1)], &[z, z, z]]);
    ensure(ex.label_matrix(0, b("b1")) == m1, "example matrix for (b1,c)")?;
    ensure(ex.label_matrix(0, b("b2")) == m2, "example matrix for (b2,c)")?;
    ensure(ex == fixtures::example(), "example equals its reference")?;
    Ok("Phil, Fork, example".into())
}

fn non_compositionality() -> Verdict {
    // One state each, glued by ∘. P's loop weighs 1, Q's weighs 3.
    let one = |w: u64, top: &[&str], bottom: &[&str]| {
        let st = Name::Num(1);
        WeightedAutomaton::from_named(
            vec![st.clone()],
            Alphabet::unit(),
            Alphabet::unit(),
            top.iter().map(|p| (Name::sym(p), st.clone())).collect(),
            bottom.iter().map(|p| (Name::sym(p), st.clone())).collect(),
            vec![(st.clone(), Name::eps(), Name::eps(), st, Weight::from_int(w))],
        )
        .unwrap()
    };
    let p = one(1, &[], &["z"]);
    let q = one(3, &["z"], &[]);
    let direct = seq_compose(&p, &q).and_then(|c| c.normalize()).map_err(|e| e.to_string())?;
    let piecewise = seq_compose(&p.normalize().unwrap(), &q.normalize().unwrap())
        .and_then(|c| c.normalize())
        .map_err(|e| e.to_string())?;
    ensure(direct != piecewise, "normalize(P∘Q) differs from normalize(normalize(P)∘normalize(Q))")?;
    let weights: Vec<String> = direct.table().values().map(|w| w.to_string()).collect();
    Ok(format!("weights {} vs 1/2,1/2", weights.join(",")))
}

fn determinism() -> Verdict {
    for name in builtin_names() {
        let f = dsl::parse(&builtin_source(name).unwrap()).map_err(|e| format!("{name}: {e}"))?;
        let printed = pretty_print(&f);
        let g = dsl::parse(&printed).map_err(|e| format!("{name} reprinted: {e}"))?;
        ensure(g == f && pretty_print(&g) == printed, format!("{name} is not a fixed point"))?;
    }
    for which in ["df2", "sofia", "lemmas"] {
        let out = Command::new(env!("CARGO_BIN_EXE_markov-compose")).args(["reproduce", which]).output().unwrap();
        ensure(out.status.success(), format!("reproduce {which} exited {:?}", out.status.code()))?;
    }
    Ok(format!("{} builtins, 3 suites", builtin_names().len()))
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 df2_reproduction", df2_reproduction),
        ("2 df2_deadlock_series", df2_deadlock_series),
        ("3 sofia_birthday_party", sofia),
        ("4 compositionality_lemmas", lemmas),
        ("5 elementary_decomposition", decomposition),
        ("6 wire_algebra", wire_laws),
        ("7 k_step_oracle", k_step_oracle),
        ("8 model_fidelity", model_fidelity),
        ("9 non_compositionality_witness", non_compositionality),
        ("10 cli_dsl_determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (id, f) in criteria {
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match verdict {
            Ok(detail) => println!("PASS {id} ({detail})"),
            Err(detail) => {
                println!("FAIL {id} ({detail})");
                failed.push(id);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed: {failed:?}");
        std::process::exit(1);
    }
}
