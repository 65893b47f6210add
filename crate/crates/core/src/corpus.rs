//! Seeded random automata for differential testing.
//!
//! Every generator takes the caller's RNG so a corpus is reproducible from
//! one `u64` seed.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::classauto::{ClassAutomaton, DataAutomaton, ExtendedDataAutomaton, Pca, EXTENDED_ZERO};
use crate::fsm::{ClassDfa, Nfa, Transducer};
use crate::priority::decide_zero_priority;

pub use rand::SeedableRng;
pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn letters(k: usize) -> Vec<String> {
    (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

/// Uniformly random complete condition over `gamma × {0,1}`.
pub fn class_dfa(rng: &mut CorpusRng, n: usize, gamma: &[String]) -> ClassDfa {
    biased_class_dfa(rng, n, gamma, 0.0)
}

/// Like [`class_dfa`], but each zero-transition is a self-loop with
/// probability `loop_bias`.
pub fn biased_class_dfa(rng: &mut CorpusRng, n: usize, gamma: &[String], loop_bias: f64) -> ClassDfa {
    let k = gamma.len();
    let zero = (0..n)
        .map(|q| {
            (0..k)
                .map(|_| if rng.random_bool(loop_bias) { q } else { rng.random_range(0..n) })
                .collect()
        })
        .collect();
    let one = (0..n).map(|_| (0..k).map(|_| rng.random_range(0..n)).collect()).collect();
    let accepting = (0..n).map(|_| rng.random_bool(0.5)).collect();
    ClassDfa::new(names("q", n), gamma.to_vec(), zero, one, 0, accepting).expect("complete by construction")
}

/// A random condition that passes the 0-priority check, by rejection.
pub fn zero_priority_condition(rng: &mut CorpusRng, n: usize, gamma: &[String]) -> ClassDfa {
    for _ in 0..1000 {
        let bias = rng.random_range(0.0..0.6);
        let c = biased_class_dfa(rng, n, gamma, bias);
        if decide_zero_priority(&c).is_zero_priority {
            return c;
        }
    }
    biased_class_dfa(rng, n, gamma, 1.0)
}

pub fn nfa(rng: &mut CorpusRng, n: usize, alphabet: &[String], density: f64) -> Nfa {
    let mut edges = Vec::new();
    for p in 0..n {
        for a in 0..alphabet.len() {
            for q in 0..n {
                if rng.random_bool(density) {
                    edges.push((p, a, q));
                }
            }
        }
    }
    let accepting = (0..n).map(|_| rng.random_bool(0.5)).collect();
    Nfa::new(names("q", n), alphabet.to_vec(), edges, vec![0], accepting).expect("valid nfa")
}

/// Random letter-to-letter transducer where every state reads every letter
/// with one or two outputs.
pub fn transducer(rng: &mut CorpusRng, n: usize, sigma: &[String], gamma: &[String]) -> Transducer {
    let mut edges = Vec::new();
    for p in 0..n {
        for s in 0..sigma.len() {
            for _ in 0..rng.random_range(1..=2) {
                edges.push((p, s, rng.random_range(0..gamma.len()), rng.random_range(0..n)));
            }
        }
    }
    let mut accepting: Vec<bool> = (0..n).map(|_| rng.random_bool(0.6)).collect();
    if !accepting.iter().any(|&a| a) {
        accepting[rng.random_range(0..n)] = true;
    }
    Transducer::new(names("p", n), sigma.to_vec(), gamma.to_vec(), edges, 0, accepting).expect("valid transducer")
}

pub fn data_automaton(rng: &mut CorpusRng, sigma: &[String]) -> DataAutomaton {
    let gamma = names("x", rng.random_range(1..=2));
    let (tn, cn) = (rng.random_range(1..=2), rng.random_range(1..=3));
    let t = transducer(rng, tn, sigma, &gamma);
    let c = nfa(rng, cn, &gamma, 0.4);
    DataAutomaton::new(t, c).expect("matching alphabets")
}

pub fn extended_data_automaton(rng: &mut CorpusRng, sigma: &[String]) -> ExtendedDataAutomaton {
    let gamma = names("x", rng.random_range(1..=2));
    let (tn, cn) = (rng.random_range(1..=2), rng.random_range(1..=3));
    let t = transducer(rng, tn, sigma, &gamma);
    let mut alphabet = gamma.clone();
    alphabet.push(EXTENDED_ZERO.to_string());
    let c = nfa(rng, cn, &alphabet, 0.35);
    ExtendedDataAutomaton::new(t, c).expect("matching alphabets")
}

pub fn class_automaton(rng: &mut CorpusRng, sigma: &[String]) -> ClassAutomaton {
    let gamma = names("x", rng.random_range(1..=2));
    let (tn, cn) = (rng.random_range(1..=2), rng.random_range(1..=3));
    let t = transducer(rng, tn, sigma, &gamma);
    let c = class_dfa(rng, cn, &gamma);
    ClassAutomaton::new(t, c).expect("matching alphabets")
}

/// Random PCA with up to `max_blocks` blocks of at most `max_letters`
/// letters and conditions of at most `max_states` states.
pub fn pca(
    rng: &mut CorpusRng,
    sigma: &[String],
    max_blocks: usize,
    max_letters: usize,
    max_states: usize,
) -> Pca {
    let k = rng.random_range(1..=max_blocks);
    let mut gamma = Vec::new();
    let mut specs = Vec::new();
    for b in 0..k {
        let block: Vec<String> = (0..rng.random_range(1..=max_letters))
            .map(|i| format!("{}{}", ["x", "y", "z", "w"][i], b + 1))
            .collect();
        let n = rng.random_range(1..=max_states);
        let cond = zero_priority_condition(rng, n, &block);
        gamma.extend(block.iter().cloned());
        specs.push((format!("G{}", b + 1), block, cond, None));
    }
    let tn = rng.random_range(1..=2);
    let t = transducer(rng, tn, sigma, &gamma);
    Pca::new(t, specs).expect("generated blocks are 0-priority")
}

/// Random two-loop program text over `sigma: a b` with Boolean variables
/// `b1..bk`. `cascade` forces P3 into the tag-cascade form.
pub fn nd2_program(rng: &mut CorpusRng, cascade: bool) -> String {
    let k = rng.random_range(1..=2);
    let vars = names("b", k + 1)[1..].to_vec();
    let p1 = loop_free(rng, &vars, false, 2);
    let p2 = loop_free(rng, &vars, true, 2);
    let p3 = if cascade {
        tag_cascade(rng, &vars)
    } else {
        let inner = rng.random_bool(0.5);
        loop_free(rng, &vars, inner, 2)
    };
    let p4 = if rng.random_bool(0.5) { loop_free(rng, &vars, false, 1) } else { "skip".to_string() };
    format!(
        "sigma: a b\nfor i:=1 to length(A) do\n{{\n  {p1};\n  for j:=1 to length(A) do\n  {{ if A[i].d = A[j].d then\n      {{ {p2} }}\n    else\n      {{ {p3} }}\n  }};\n  {p4}\n}}\n"
    )
}

fn literal(rng: &mut CorpusRng, vars: &[String]) -> (String, bool) {
    let v = vars[rng.random_range(0..vars.len())].clone();
    (v, rng.random_bool(0.5))
}

fn condition(rng: &mut CorpusRng, vars: &[String], inner: bool) -> String {
    let atom = |rng: &mut CorpusRng| -> String {
        match rng.random_range(0..if inner { 7 } else { 4 }) {
            0 => "true".into(),
            1 | 2 => {
                let (v, pos) = literal(rng, vars);
                if pos { v } else { format!("not {v}") }
            }
            3 => format!("A[i].s = {}", ["a", "b"][rng.random_range(0..2)]),
            4 => format!("A[j].s = {}", ["a", "b"][rng.random_range(0..2)]),
            5 => "A[i].s = A[j].s".into(),
            _ => "i = j".into(),
        }
    };
    let first = atom(rng);
    if rng.random_bool(0.4) {
        format!("{first} and {}", atom(rng))
    } else {
        first
    }
}

fn loop_free(rng: &mut CorpusRng, vars: &[String], inner: bool, depth: usize) -> String {
    match rng.random_range(0..if depth == 0 { 2 } else { 4 }) {
        0 => "skip".into(),
        1 => {
            let v = &vars[rng.random_range(0..vars.len())];
            let rhs = if rng.random_bool(0.6) {
                ["true", "false"][rng.random_range(0..2)].to_string()
            } else {
                condition(rng, vars, inner)
            };
            format!("{v} := {rhs}")
        }
        2 => format!(
            "if {} then {} else {{ {} }}",
            condition(rng, vars, inner),
            loop_free(rng, vars, inner, depth - 1),
            loop_free(rng, vars, inner, depth - 1)
        ),
        _ => format!("{}; {}", loop_free(rng, vars, inner, depth - 1), loop_free(rng, vars, inner, depth - 1)),
    }
}

fn tag_cascade(rng: &mut CorpusRng, vars: &[String]) -> String {
    let lits: Vec<(String, bool)> = (0..rng.random_range(1..=2)).map(|_| literal(rng, vars)).collect();
    let bb = lits
        .iter()
        .map(|(v, pos)| if *pos { v.clone() } else { format!("not {v}") })
        .collect::<Vec<_>>()
        .join(" and ");
    let mut arms = String::new();
    let tags: Vec<&str> = if rng.random_bool(0.5) { vec!["a", "b"] } else { vec![["a", "b"][rng.random_range(0..2)]] };
    for t in &tags {
        // flip one literal, maybe set another variable too
        let (v, pos) = &lits[rng.random_range(0..lits.len())];
        let mut pa = format!("{v} := {}", !pos);
        if rng.random_bool(0.5) {
            let w = &vars[rng.random_range(0..vars.len())];
            pa = format!("{pa}; {w} := {}", rng.random_bool(0.5));
        }
        arms.push_str(&format!("if A[j].s = {t} then {pa} else "));
    }
    format!("if {bb} then {arms}skip else skip")
}
