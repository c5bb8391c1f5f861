//! `markov-compose`: evaluate model files, analyse closed Markov automata,
//! export DOT, and re-run the reference checks.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use markov_compose::analysis::{self, parse_state_name, Mode, StatePredicate};
use markov_compose::dsl;
use markov_compose::{dot, reproduce, serial, Name, WeightedAutomaton};

const DEFAULT_SEED: u64 = 20_160_518;
const LEMMA_INSTANCES: u64 = 200;

#[derive(Parser)]
#[command(name = "markov-compose", version, about = "Compositional weighted and Markov automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a declaration and print its canonical JSON.
    Eval {
        /// Model file, `builtin:<name>`, or a serialized `.json` automaton.
        file: String,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reachability, deadlocks and a probability series.
    Analyze {
        file: String,
        #[arg(long)]
        name: Option<String>,
        /// Start state such as `(1,1,1,1)`; defaults to the builtin convention.
        #[arg(long)]
        initial: Option<String>,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// `deadlock` or `pred:EXPR` with EXPR like `eating`, `state=(..)`, `comp[i]=v`.
        #[arg(long, default_value = "deadlock")]
        target: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
    },
    /// Re-run a suite of reference checks.
    Reproduce {
        #[arg(value_enum)]
        which: Suite,
        /// Seed for the randomized suite.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Render a declaration as a Graphviz digraph.
    ExportDot {
        file: String,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Df2,
    Sofia,
    Lemmas,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Loads `name` from a model file, or the automaton in a `.json` file.
fn load(file: &str, name: Option<&str>) -> Result<(String, WeightedAutomaton), String> {
    if file.ends_with(".json") {
        let text = std::fs::read_to_string(file).map_err(|e| format!("cannot read {file}: {e}"))?;
        let aut = serial::from_json(&text).map_err(|e| e.to_string())?;
        return Ok((name.unwrap_or("automaton").to_string(), aut));
    }
    let source = dsl::resolve_source(file).map_err(|e| e.to_string())?;
    let model = dsl::parse(&source).map_err(|e| format!("{file}:{e}"))?;
    let name = match name {
        Some(n) => n.to_string(),
        None => model
            .automaton_names()
            .last()
            .map(|s| s.to_string())
            .ok_or_else(|| format!("{file} declares no automaton"))?,
    };
    let aut = dsl::eval(&model, &name).map_err(|e| e.to_string())?;
    Ok((name, aut))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Eval { file, name, out } => {
            let (_, aut) = load(&file, name.as_deref())?;
            emit(&format!("{}\n", serial::to_json(&aut)), out.as_ref())?;
        }
        Command::ExportDot { file, name, out } => {
            let (name, aut) = load(&file, name.as_deref())?;
            emit(&dot::to_dot(&aut, &name), out.as_ref())?;
        }
        Command::Analyze { file, name, initial, steps, target, mode } => {
            let (name, aut) = load(&file, name.as_deref())?;
            let q0 = match initial {
                Some(text) => parse_state_name(&text)?,
                None => dsl::builtin_initial(&name)
                    .ok_or_else(|| format!("no conventional start state for {name}; pass --initial"))?,
            };
            let mode = match mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Float => Mode::Float,
            };
            print!("{}", analyze(&aut, &q0, steps, &target, mode)?);
        }
        Command::Reproduce { which, seed } => {
            let checks = match which {
                Suite::Df2 => reproduce::df2(),
                Suite::Sofia => reproduce::sofia(),
                Suite::Lemmas => reproduce::lemmas(seed, LEMMA_INSTANCES),
            }
            .map_err(|e| e.to_string())?;
            for c in &checks {
                println!("{c}");
            }
            if checks.iter().any(|c| !c.pass) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn analyze(aut: &WeightedAutomaton, q0: &Name, steps: usize, target: &str, mode: Mode) -> Result<String, String> {
    let pred = match target {
        "deadlock" => StatePredicate::Deadlock,
        t => match t.strip_prefix("pred:") {
            Some(expr) => StatePredicate::parse(expr)?,
            None => return Err(format!("target must be `deadlock` or `pred:EXPR`, got `{t}`")),
        },
    };
    let err = |e: markov_compose::Error| e.to_string();
    if !aut.is_markov() {
        return Err(markov_compose::Error::NotMarkov.to_string());
    }
    let (part, report) = analysis::reachable_part(aut, q0).map_err(err)?;
    let mut out = String::new();
    out.push_str(&format!("initial {}\n", report.initial.flatten()));
    out.push_str(&format!("reachable_states {}\n", part.num_states()));
    out.push_str(&format!("transitions {}\n", part.num_transitions()));
    let closed = aut.left().len() == 1 && aut.right().len() == 1;
    if closed || pred == StatePredicate::Deadlock {
        let pf = analysis::check_pf_hypotheses(aut, q0).map_err(err)?;
        let dead: Vec<String> = pf.deadlocks.iter().map(|d| d.flatten().to_string()).collect();
        out.push_str(&format!("deadlocks {}\n", if dead.is_empty() { "none".into() } else { dead.join(" ") }));
        let v = pf.pf.expect("verdict");
        out.push_str(&format!(
            "pf unique_reachable_deadlock={} all_return_to_initial={} all_have_self_loop={} holds={}\n",
            v.unique_reachable_deadlock,
            v.all_return_to_initial,
            v.all_have_self_loop,
            v.holds()
        ));
    }
    out.push_str(&format!("target {target}\n"));
    let marked = pred.mask(&part);
    for (k, p) in analysis::probability_series(&part, q0, &marked, steps, mode).map_err(err)? {
        match mode {
            Mode::Exact => out.push_str(&format!("k={k} p={p} decimal={}\n", p.decimal())),
            Mode::Float => out.push_str(&format!("k={k} p={}\n", p.decimal())),
        }
    }
    Ok(out)
}
