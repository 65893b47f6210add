//! Subcommand logic behind the `pcakit` binary.
//!
//! Each command returns a [`RunReport`]; the binary only parses flags,
//! prints and exits. Exit codes: 0 positive, 1 negative, 2 input error,
//! 3 a bound cut the search.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::arrayprog::{classify, is_restricted_nd2, reachable, BooleanState, Program, SolverPath};
use crate::classauto::{bounded_nonempty, da_to_pca, eda_to_pca, AnyAutomaton, Pca};
use crate::compile::{pca_to_pma, GeneratedMachine};
use crate::counters::{explore, validate_priority, CounterMachine, Instruction};
use crate::dataword::{enumerate_data_words, DataWord};
use crate::fsm::ClassDfa;
use crate::priority::PriorityReport;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<String>,
    pub verdict: String,
    pub exit_code: i32,
    pub payload: Value,
    #[serde(skip)]
    pub text: String,
}

impl RunReport {
    fn new(command: &str, inputs: &[&str]) -> Self {
        RunReport {
            command: command.into(),
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            verdict: String::new(),
            exit_code: EXIT_OK,
            payload: Value::Null,
            text: String::new(),
        }
    }

    fn failed(mut self, code: i32, verdict: &str, message: String) -> Self {
        self.exit_code = code;
        self.verdict = verdict.into();
        let _ = writeln!(self.text, "error: {message}");
        self.payload = json!({ "error": message });
        self
    }

    fn input_error(self, err: impl std::fmt::Display) -> Self {
        self.failed(EXIT_INPUT, "input error", err.to_string())
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Structured => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }
}

fn read(path: &str) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

fn to_pca(a: AnyAutomaton) -> crate::Result<Pca> {
    match a {
        AnyAutomaton::Pca(p) => Ok(p),
        AnyAutomaton::Data(d) => Ok(da_to_pca(&d)),
        AnyAutomaton::Extended(e) => Ok(eda_to_pca(&e)),
        AnyAutomaton::Class(c) => Pca::single(c.transducer().clone(), c.condition().clone(), None),
    }
}

/// `check-priority FILE`: a bare class condition file.
pub fn cmd_check_priority(path: &str) -> RunReport {
    let mut r = RunReport::new("check-priority", &[path]);
    let dfa = match read(path).and_then(|t| ClassDfa::parse(&t).map_err(|e| e.to_string())) {
        Ok(d) => d,
        Err(e) => return r.input_error(e),
    };
    let report = PriorityReport::build(&dfa);
    r.text = report.to_text();
    r.verdict = if report.zero_priority { "0-priority" } else { "not 0-priority" }.into();
    r.exit_code = if report.zero_priority { EXIT_OK } else { EXIT_NEGATIVE };
    r.payload = serde_json::to_value(&report).expect("report serializes");
    r
}

/// `member AUTOMATON WORDS`: one accept/reject line per word.
pub fn cmd_member(automaton: &str, words: &str) -> RunReport {
    let mut r = RunReport::new("member", &[automaton, words]);
    let m = match read(automaton).and_then(|t| AnyAutomaton::parse(&t).map_err(|e| format!("{automaton}: {e}"))) {
        Ok(m) => m,
        Err(e) => return r.input_error(e),
    };
    let ws = match read(words).and_then(|t| DataWord::parse_many(&t).map_err(|e| format!("{words}: {e}"))) {
        Ok(w) => w,
        Err(e) => return r.input_error(e),
    };
    let lang = m.as_language();
    let mut results = Vec::new();
    for w in &ws {
        match lang.accepts(w) {
            Ok(ok) => {
                let _ = writeln!(r.text, "{} {w}", if ok { "accept" } else { "reject" });
                results.push(json!({ "word": w.to_string(), "accepted": ok }));
            }
            Err(e) => return r.input_error(format!("{w}: {e}")),
        }
    }
    let all = results.iter().all(|v| v["accepted"] == true);
    r.verdict = if all { "all accepted" } else { "some rejected" }.into();
    r.exit_code = if all { EXIT_OK } else { EXIT_NEGATIVE };
    r.payload = json!({ "kind": m.kind(), "results": results });
    r
}

/// `compile PCA -o OUT`: writes the machine to `OUT` and the counter layout
/// to `layout` (default `OUT.layout`).
pub fn cmd_compile(path: &str, out: &str, layout: Option<&str>) -> RunReport {
    let mut r = RunReport::new("compile", &[path, out]);
    let parsed = match read(path) {
        Ok(t) => AnyAutomaton::parse(&t).and_then(to_pca),
        Err(e) => return r.input_error(e),
    };
    let pca = match parsed {
        Ok(p) => p,
        Err(Error::Construction(why)) => return r.failed(EXIT_NEGATIVE, "not 0-priority", why),
        Err(e) => return r.input_error(format!("{path}: {e}")),
    };
    let lay = match GeneratedMachine::for_pca(&pca) {
        Ok(g) => g.layout().clone(),
        Err(e) => return r.failed(EXIT_NEGATIVE, "construction failed", e.to_string()),
    };
    let pma = match pca_to_pma(&pca) {
        Ok(p) => p,
        Err(e) => return r.failed(EXIT_NEGATIVE, "construction failed", e.to_string()),
    };
    let m = pma.machine();
    let acc = m.state_index("acc");
    let drain_tests = (0..m.num_states())
        .flat_map(|q| m.transitions_from(q))
        .filter(|t| matches!(t.instruction, Instruction::IfzPrefix(_)) && Some(t.target) != acc)
        .count();
    let layout_path = layout.map(str::to_string).unwrap_or_else(|| format!("{out}.layout"));
    let machine_text = m.to_text();
    for (p, body) in [(out, &machine_text), (layout_path.as_str(), &lay.to_text())] {
        if let Err(e) = std::fs::write(Path::new(p), body) {
            return r.input_error(format!("{p}: {e}"));
        }
    }
    let valid = validate_priority(m);
    let _ = writeln!(r.text, "machine: {out}");
    let _ = writeln!(r.text, "layout: {layout_path}");
    let _ = writeln!(r.text, "counters: {}", m.num_counters());
    let _ = writeln!(r.text, "states: {}", m.num_states());
    let _ = writeln!(r.text, "transitions: {}", m.num_transitions());
    let _ = writeln!(r.text, "prefix tests in drains: {drain_tests}");
    let _ = writeln!(r.text, "priority restriction: {}", if valid { "valid" } else { "VIOLATED" });
    r.verdict = "compiled".into();
    r.exit_code = if valid { EXIT_OK } else { EXIT_NEGATIVE };
    r.payload = json!({
        "counters": m.num_counters(),
        "states": m.num_states(),
        "transitions": m.num_transitions(),
        "drain_prefix_tests": drain_tests,
        "validate_priority": valid,
        "machine": machine_text,
        "layout": lay.to_text(),
    });
    r
}

#[derive(Debug, Clone, Copy)]
pub struct ExploreBounds {
    pub max_len: usize,
    pub sum_bound: u64,
    pub steps: usize,
}

impl Default for ExploreBounds {
    fn default() -> Self {
        ExploreBounds { max_len: 4, sum_bound: 16, steps: 100_000 }
    }
}

fn is_automaton_file(text: &str) -> bool {
    text.lines().map(str::trim).any(|l| l.starts_with('['))
}

/// `explore FILE`: a counter machine or any automaton file.
pub fn cmd_explore(path: &str, bounds: ExploreBounds) -> RunReport {
    let mut r = RunReport::new("explore", &[path]);
    if bounds.sum_bound == 0 || bounds.steps == 0 {
        return r.input_error("bounds must be positive");
    }
    let text = match read(path) {
        Ok(t) => t,
        Err(e) => return r.input_error(e),
    };
    let (words, exact): (Vec<String>, bool) = if is_automaton_file(&text) {
        let m = match AnyAutomaton::parse(&text) {
            Ok(m) => m,
            Err(e) => return r.input_error(format!("{path}: {e}")),
        };
        match bounded_nonempty(m.as_language(), bounds.max_len) {
            Ok(w) => (w.map(|w| w.to_string()).into_iter().collect(), true),
            Err(e) => return r.input_error(e),
        }
    } else {
        let m = match CounterMachine::parse(&text) {
            Ok(m) => m,
            Err(e) => return r.input_error(format!("{path}: {e}")),
        };
        match explore(&m, bounds.max_len, bounds.sum_bound, bounds.steps) {
            Ok(lang) => {
                let ws = lang.words.iter().map(|(w, _)| w.join(" ")).collect();
                (ws, lang.is_exact())
            }
            Err(e) => return r.input_error(e),
        }
    };
    for w in &words {
        let _ = writeln!(r.text, "witness: {}", if w.is_empty() { "(empty word)" } else { w });
    }
    if words.is_empty() {
        if exact {
            let _ = writeln!(r.text, "empty up to bound (length {})", bounds.max_len);
            r.verdict = "empty up to bound".into();
            r.exit_code = EXIT_NEGATIVE;
        } else {
            let _ = writeln!(r.text, "unknown: a counter or step bound cut the search");
            r.verdict = "unknown".into();
            r.exit_code = EXIT_UNKNOWN;
        }
    } else {
        if !exact {
            let _ = writeln!(r.text, "note: a bound cut the search; more words may exist");
        }
        r.verdict = "nonempty".into();
    }
    r.payload = json!({
        "witnesses": words,
        "exact": exact,
        "max_len": bounds.max_len,
        "sum_bound": bounds.sum_bound,
        "steps": bounds.steps,
    });
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathChoice {
    #[default]
    Auto,
    Automaton,
    Interpreter,
}

fn target_text(t: &BooleanState) -> String {
    t.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

/// `program FILE --target T`: bounded Boolean-state reachability. A partial
/// target stands for the disjunction of its completions.
pub fn cmd_program(path: &str, target: &str, max_len: usize, path_choice: PathChoice) -> RunReport {
    let mut r = RunReport::new("program", &[path]);
    let prog = match read(path).and_then(|t| Program::parse(&t).map_err(|e| format!("{path}: {e}"))) {
        Ok(p) => p,
        Err(e) => return r.input_error(e),
    };
    let partial = match prog.parse_target(target) {
        Ok(t) => t,
        Err(e) => return r.input_error(e),
    };
    let class = classify(&prog);
    let diag = is_restricted_nd2(&prog);
    if path_choice == PathChoice::Automaton && !diag.ok {
        return r.input_error(format!("automaton path needs a restricted ND2 program: {}", diag.problems.join("; ")));
    }
    let use_automaton = path_choice != PathChoice::Interpreter && diag.ok;
    let arrays: Vec<DataWord> = enumerate_data_words(&prog.sigma, max_len).collect();
    let rank = |w: &DataWord| arrays.iter().position(|a| a == w).unwrap_or(usize::MAX);
    let mut best: Option<(DataWord, BooleanState)> = None;
    let mut truncated = false;
    let mut paths = Vec::new();
    let mut notes = Vec::new();
    for full in prog.completions(&partial) {
        let found = if use_automaton {
            match reachable(&prog, &full, max_len) {
                Ok(rep) => {
                    truncated |= rep.truncated;
                    paths.push(rep.path);
                    if !rep.note.is_empty() {
                        notes.push(format!("{}: {}", target_text(&full), rep.note));
                    }
                    rep.witness
                }
                Err(e @ Error::Construction(_)) => return r.failed(EXIT_UNKNOWN, "construction failed", e.to_string()),
                Err(e) => return r.input_error(e),
            }
        } else {
            paths.push(SolverPath::Interpreter);
            let mut hit = None;
            for a in &arrays {
                match prog.interpret(a) {
                    Ok(st) if st.bools == full => {
                        hit = Some(a.clone());
                        break;
                    }
                    Ok(_) => {}
                    Err(e) => return r.input_error(e),
                }
            }
            hit
        };
        if let Some(w) = found {
            if best.as_ref().is_none_or(|(b, _)| rank(&w) < rank(b)) {
                best = Some((w, full));
            }
        }
    }
    let path_used = if paths.contains(&SolverPath::Automaton) { "automaton" } else { "interpreter" };
    let _ = writeln!(r.text, "classification: {class}");
    let _ = writeln!(r.text, "target: {}", target_text(&partial));
    match &best {
        Some((w, full)) => {
            r.verdict = "reachable".into();
            let _ = writeln!(r.text, "verdict: reachable");
            let _ = writeln!(r.text, "witness: {w}");
            let _ = writeln!(r.text, "final state: {}", target_text(full));
        }
        None if truncated => {
            r.verdict = "unknown".into();
            r.exit_code = EXIT_UNKNOWN;
            let _ = writeln!(r.text, "verdict: unknown (a bound cut the search)");
        }
        None => {
            r.verdict = "unreachable up to bound".into();
            r.exit_code = EXIT_NEGATIVE;
            let _ = writeln!(r.text, "verdict: unreachable up to length {max_len}");
        }
    }
    let _ = writeln!(r.text, "solver path: {path_used}");
    for n in &notes {
        let _ = writeln!(r.text, "note: {n}");
    }
    r.payload = json!({
        "classification": class,
        "target": partial,
        "witness": best.as_ref().map(|(w, _)| w.to_string()),
        "final_state": best.as_ref().map(|(_, f)| f.clone()),
        "solver_path": path_used,
        "truncated": truncated,
        "max_len": max_len,
        "diagnosis": diag.problems,
    });
    r
}

#[cfg(test)]
mod tests;
