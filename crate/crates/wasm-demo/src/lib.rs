//! Three operations exposed to the browser page in `www/`.
//!
//! Each returns a JSON string so the page needs no bindings beyond the
//! generated glue.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use markov_compose::analysis::{probability_series, reachable_part, Mode, StatePredicate};
use markov_compose::dsl::{self, builtin_initial};
use markov_compose::{dot, reproduce, WeightedAutomaton};

fn series_json(aut: &WeightedAutomaton, name: &str, pred: StatePredicate, steps: usize) -> Result<Value, String> {
    let q0 = builtin_initial(name).ok_or_else(|| format!("no start state for {name}"))?;
    let (part, _) = reachable_part(aut, &q0).map_err(|e| e.to_string())?;
    let marked = pred.mask(&part);
    let exact = probability_series(&part, &q0, &marked, steps.min(200), Mode::Exact).map_err(|e| e.to_string())?;
    let points: Vec<Value> = exact
        .iter()
        .map(|(k, p)| json!({ "k": k, "exact": p.to_string(), "value": p.to_f64() }))
        .collect();
    Ok(json!({
        "model": name,
        "initial": q0.to_string(),
        "reachable": part.num_states(),
        "transitions": part.num_transitions(),
        "series": points,
    }))
}

fn render(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Deadlock probability of the `n`-philosopher ring after `1..=steps` steps.
pub fn dining_series(n: usize, steps: usize) -> String {
    render((|| {
        if !(2..=4).contains(&n) {
            return Err("ring size must be 2, 3 or 4".to_string());
        }
        let aut = reproduce::dining_ring(n).map_err(|e| e.to_string())?;
        series_json(&aut, &format!("DF{n}"), StatePredicate::Deadlock, steps)
    })())
}

/// Probability that some child is eating, for `seats` seats and `children` children.
pub fn party_series(seats: usize, children: usize, steps: usize) -> String {
    render((|| {
        if !(2..=4).contains(&seats) || children > seats {
            return Err("use 2 to 4 seats and at most as many children".to_string());
        }
        let aut = reproduce::party(seats, children).map_err(|e| e.to_string())?;
        series_json(&aut, &format!("Sofia{seats}_{children}"), StatePredicate::Eating, steps)
    })())
}

/// Evaluates `name` in a model file and summarises it with its DOT text.
pub fn evaluate(source: &str, name: &str) -> String {
    render((|| {
        let file = dsl::parse(source).map_err(|e| e.to_string())?;
        let name = if name.trim().is_empty() {
            file.automaton_names().last().map(|s| s.to_string()).ok_or("no declarations")?
        } else {
            name.trim().to_string()
        };
        let aut = dsl::eval(&file, &name).map_err(|e| e.to_string())?;
        Ok(json!({
            "name": name,
            "states": aut.num_states(),
            "transitions": aut.num_transitions(),
            "left": aut.left().to_string(),
            "right": aut.right().to_string(),
            "markov": aut.is_markov(),
            "dot": dot::to_dot(&aut, &name),
        }))
    })())
}

#[wasm_bindgen(js_name = diningSeries)]
pub fn dining_series_js(n: usize, steps: usize) -> String {
    dining_series(n, steps)
}

#[wasm_bindgen(js_name = partySeries)]
pub fn party_series_js(seats: usize, children: usize, steps: usize) -> String {
    party_series(seats, children, steps)
}

#[wasm_bindgen(js_name = evaluate)]
pub fn evaluate_js(source: &str, name: &str) -> String {
    evaluate(source, name)
}

/// Source of a builtin model, for the page's editor.
#[wasm_bindgen(js_name = builtinSource)]
pub fn builtin_source_js(name: &str) -> String {
    dsl::builtin_source(name).unwrap_or_default()
}
