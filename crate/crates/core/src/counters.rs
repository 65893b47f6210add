//! Multicounter automata with plain and prefix zero tests.
//!
//! Counters are 0-based in the API and 1-based in the text format:
//!
//! ```text
//! alphabet: a b
//! counters: 2
//! initial: q0
//! accepting: q2
//! trans: q0 a inc 1 q0
//! trans: q0 eps ifzp 2 q2
//! ```

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::Serialize;

use crate::dataword::tokens_with_columns;
use crate::error::{Error, Result};
use crate::fsm::index_of;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Instruction {
    Inc(usize),
    Dec(usize),
    /// Counter `i` is zero.
    Ifz(usize),
    /// Counters `0..=i` are all zero.
    IfzPrefix(usize),
}

impl Instruction {
    pub fn counter(self) -> usize {
        match self {
            Instruction::Inc(i) | Instruction::Dec(i) | Instruction::Ifz(i) | Instruction::IfzPrefix(i) => i,
        }
    }

    /// Counters after executing the instruction, if it is enabled.
    pub fn apply(self, counters: &[u64]) -> Option<Vec<u64>> {
        match self {
            Instruction::Inc(i) => {
                let mut c = counters.to_vec();
                c[i] += 1;
                Some(c)
            }
            Instruction::Dec(i) => {
                if counters[i] == 0 {
                    return None;
                }
                let mut c = counters.to_vec();
                c[i] -= 1;
                Some(c)
            }
            Instruction::Ifz(i) => (counters[i] == 0).then(|| counters.to_vec()),
            Instruction::IfzPrefix(i) => counters[..=i].iter().all(|&x| x == 0).then(|| counters.to_vec()),
        }
    }

    fn parse(op: &str, arg: &str, line: usize, col: usize, k: usize) -> Result<Self> {
        let i: usize = arg
            .parse()
            .map_err(|_| Error::parse(line, col, format!("bad counter index `{arg}`")))?;
        if i == 0 || i > k {
            return Err(Error::parse(line, col, format!("counter {i} outside 1..={k}")));
        }
        let i = i - 1;
        Ok(match op {
            "inc" => Instruction::Inc(i),
            "dec" => Instruction::Dec(i),
            "ifz" => Instruction::Ifz(i),
            "ifzp" => Instruction::IfzPrefix(i),
            _ => return Err(Error::parse(line, col, format!("unknown instruction `{op}`"))),
        })
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Instruction::Inc(i) => write!(f, "inc {}", i + 1),
            Instruction::Dec(i) => write!(f, "dec {}", i + 1),
            Instruction::Ifz(i) => write!(f, "ifz {}", i + 1),
            Instruction::IfzPrefix(i) => write!(f, "ifzp {}", i + 1),
        }
    }
}

/// A counter machine whose transitions may be generated on demand.
pub trait CounterSystem {
    type State: Clone + Eq + Hash;

    fn alphabet(&self) -> &[String];
    fn counters(&self) -> usize;
    fn initial(&self) -> Self::State;
    fn is_accepting(&self, s: &Self::State) -> bool;
    /// Outgoing transitions: letter (`None` for ε), instruction, target.
    fn transitions(&self, s: &Self::State) -> Result<Vec<(Option<usize>, Instruction, Self::State)>>;
    fn state_name(&self, s: &Self::State) -> String;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transition {
    pub letter: Option<usize>,
    pub instruction: Instruction,
    pub target: usize,
}

/// Explicit counter machine `(Q, Σ, k, δ, q0, F)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounterMachine {
    states: Vec<String>,
    alphabet: Vec<String>,
    counters: usize,
    transitions: Vec<Vec<Transition>>,
    initial: usize,
    accepting: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Configuration {
    pub state: usize,
    pub counters: Vec<u64>,
}

impl CounterMachine {
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        counters: usize,
        edges: impl IntoIterator<Item = (usize, Option<usize>, Instruction, usize)>,
        initial: usize,
        accepting: Vec<bool>,
    ) -> Result<Self> {
        let n = states.len();
        if n == 0 || initial >= n || accepting.len() != n {
            return Err(Error::input("inconsistent counter machine dimensions"));
        }
        let mut transitions = vec![Vec::new(); n];
        for (p, letter, instruction, target) in edges {
            if p >= n || target >= n || letter.is_some_and(|a| a >= alphabet.len()) {
                return Err(Error::input("transition out of range"));
            }
            if instruction.counter() >= counters {
                return Err(Error::input(format!("counter {} out of range", instruction.counter() + 1)));
            }
            let t = Transition { letter, instruction, target };
            if !transitions[p].contains(&t) {
                transitions[p].push(t);
            }
        }
        Ok(CounterMachine { states, alphabet, counters, transitions, initial, accepting })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_counters(&self) -> usize {
        self.counters
    }

    pub fn initial_state(&self) -> usize {
        self.initial
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    pub fn transitions_from(&self, q: usize) -> &[Transition] {
        &self.transitions[q]
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    pub fn instructions(&self) -> impl Iterator<Item = Instruction> + '_ {
        self.transitions.iter().flatten().map(|t| t.instruction)
    }

    pub fn initial_configuration(&self) -> Configuration {
        Configuration { state: self.initial, counters: vec![0; self.counters] }
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        index_of(&self.states, name)
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        index_of(&self.alphabet, name)
    }
}

impl CounterSystem for CounterMachine {
    type State = usize;

    fn alphabet(&self) -> &[String] {
        &self.alphabet
    }
    fn counters(&self) -> usize {
        self.counters
    }
    fn initial(&self) -> usize {
        self.initial
    }
    fn is_accepting(&self, s: &usize) -> bool {
        self.accepting[*s]
    }
    fn transitions(&self, s: &usize) -> Result<Vec<(Option<usize>, Instruction, usize)>> {
        Ok(self.transitions[*s].iter().map(|t| (t.letter, t.instruction, t.target)).collect())
    }
    fn state_name(&self, s: &usize) -> String {
        self.states[*s].clone()
    }
}

/// Successors of `cfg` via transitions reading `letter` (`None` for ε).
pub fn step(m: &CounterMachine, cfg: &Configuration, letter: Option<usize>) -> Vec<Configuration> {
    m.transitions[cfg.state]
        .iter()
        .filter(|t| t.letter == letter)
        .filter_map(|t| {
            t.instruction
                .apply(&cfg.counters)
                .map(|counters| Configuration { state: t.target, counters })
        })
        .collect()
}

/// True iff the machine uses no plain zero test.
pub fn validate_priority(m: &CounterMachine) -> bool {
    m.instructions().all(|i| !matches!(i, Instruction::Ifz(_)))
}

/// Machine whose zero tests are all prefix tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pma(CounterMachine);

impl TryFrom<CounterMachine> for Pma {
    type Error = Error;
    fn try_from(m: CounterMachine) -> Result<Self> {
        if validate_priority(&m) {
            Ok(Pma(m))
        } else {
            Err(Error::input("machine uses plain zero tests"))
        }
    }
}

impl Pma {
    pub fn machine(&self) -> &CounterMachine {
        &self.0
    }

    pub fn into_machine(self) -> CounterMachine {
        self.0
    }
}

/// One replayable step: letter name (`None` for ε), instruction, target name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub letter: Option<String>,
    pub instruction: Instruction,
    pub target: String,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.letter.as_deref().unwrap_or("eps"), self.instruction, self.target)
    }
}

/// Replays `trace` from the initial configuration.
pub fn run_check<S: AsRef<str>>(m: &CounterMachine, word: &[S], trace: &[TraceStep]) -> Result<bool> {
    let mut cfg = m.initial_configuration();
    let mut read = 0;
    for st in trace {
        let target = m
            .state_index(&st.target)
            .ok_or_else(|| Error::input(format!("trace names unknown state `{}`", st.target)))?;
        if st.instruction.counter() >= m.counters {
            return Err(Error::input(format!("trace uses counter {}", st.instruction.counter() + 1)));
        }
        let letter = match &st.letter {
            None => None,
            Some(a) => Some(m.letter_index(a).ok_or_else(|| Error::input(format!("trace letter `{a}` unknown")))?),
        };
        if letter.is_some() {
            if read >= word.len() || st.letter.as_deref() != Some(word[read].as_ref()) {
                return Ok(false);
            }
            read += 1;
        }
        let exists = m.transitions[cfg.state]
            .iter()
            .any(|t| t.letter == letter && t.instruction == st.instruction && t.target == target);
        if !exists {
            return Ok(false);
        }
        match st.instruction.apply(&cfg.counters) {
            Some(c) => cfg = Configuration { state: target, counters: c },
            None => return Ok(false),
        }
    }
    Ok(read == word.len() && m.accepting[cfg.state])
}

/// Result of a bounded exploration.
#[derive(Debug, Clone, Serialize)]
pub struct BoundedLanguage {
    /// Accepted words in length-lexicographic order, each with a shortest trace.
    pub words: Vec<(Vec<String>, Vec<TraceStep>)>,
    pub word_bound: usize,
    pub sum_bound: u64,
    pub step_bound: usize,
    /// Some run was cut because it would read past `word_bound`.
    pub hit_word_bound: bool,
    /// Some run was cut because the counter sum would exceed `sum_bound`.
    pub hit_sum_bound: bool,
    /// Some run was cut at `step_bound` steps.
    pub hit_step_bound: bool,
    pub configurations: usize,
}

impl BoundedLanguage {
    /// True when neither the sum nor the step bound cut the search, so the
    /// word set is the exact language up to `word_bound`.
    pub fn is_exact(&self) -> bool {
        !self.hit_sum_bound && !self.hit_step_bound
    }

    pub fn word_set(&self) -> std::collections::BTreeSet<Vec<String>> {
        self.words.iter().map(|(w, _)| w.clone()).collect()
    }
}

struct Node<S> {
    state: S,
    counters: Vec<u64>,
    word: usize,
    depth: usize,
    parent: Option<(usize, Option<usize>, Instruction)>,
}

/// Breadth-first search over configurations paired with the consumed word.
pub fn explore<M: CounterSystem>(
    m: &M,
    word_bound: usize,
    sum_bound: u64,
    step_bound: usize,
) -> Result<BoundedLanguage> {
    // words as a trie: id -> (parent id, letter)
    let mut words: Vec<(usize, usize)> = vec![(0, usize::MAX)];
    let mut word_len = vec![0usize];
    let mut word_child: HashMap<(usize, usize), usize> = HashMap::new();

    let mut nodes: Vec<Node<M::State>> = Vec::new();
    let mut seen: HashMap<(M::State, Vec<u64>, usize), usize> = HashMap::new();
    let start = Node { state: m.initial(), counters: vec![0; m.counters()], word: 0, depth: 0, parent: None };
    seen.insert((start.state.clone(), start.counters.clone(), 0), 0);
    nodes.push(start);

    let mut out = BoundedLanguage {
        words: Vec::new(),
        word_bound,
        sum_bound,
        step_bound,
        hit_word_bound: false,
        hit_sum_bound: false,
        hit_step_bound: false,
        configurations: 0,
    };
    let mut accepted: HashMap<usize, usize> = HashMap::new();
    let mut head = 0;
    while head < nodes.len() {
        let idx = head;
        head += 1;
        let (state, counters, word, depth) = {
            let n = &nodes[idx];
            (n.state.clone(), n.counters.clone(), n.word, n.depth)
        };
        if m.is_accepting(&state) {
            accepted.entry(word).or_insert(idx);
        }
        let moves = m.transitions(&state)?;
        for (letter, instr, target) in moves {
            let Some(next_counters) = instr.apply(&counters) else { continue };
            if depth >= step_bound {
                out.hit_step_bound = true;
                continue;
            }
            if letter.is_some() && word_len[word] >= word_bound {
                out.hit_word_bound = true;
                continue;
            }
            if next_counters.iter().sum::<u64>() > sum_bound {
                out.hit_sum_bound = true;
                continue;
            }
            let next_word = match letter {
                None => word,
                Some(a) => {
                    *word_child.entry((word, a)).or_insert_with(|| {
                        words.push((word, a));
                        word_len.push(word_len[word] + 1);
                        words.len() - 1
                    })
                }
            };
            let key = (target.clone(), next_counters.clone(), next_word);
            if seen.contains_key(&key) {
                continue;
            }
            seen.insert(key, nodes.len());
            nodes.push(Node {
                state: target,
                counters: next_counters,
                word: next_word,
                depth: depth + 1,
                parent: Some((idx, letter, instr)),
            });
        }
    }
    out.configurations = nodes.len();

    let alphabet = m.alphabet();
    let spell = |mut id: usize| {
        let mut w = Vec::new();
        while id != 0 {
            w.push(words[id].1);
            id = words[id].0;
        }
        w.reverse();
        w
    };
    let mut found: Vec<(Vec<usize>, usize)> = accepted.into_iter().map(|(w, n)| (spell(w), n)).collect();
    found.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    for (w, mut n) in found {
        let mut trace = Vec::new();
        while let Some((p, letter, instr)) = nodes[n].parent {
            trace.push(TraceStep {
                letter: letter.map(|a| alphabet[a].clone()),
                instruction: instr,
                target: m.state_name(&nodes[n].state),
            });
            n = p;
        }
        trace.reverse();
        out.words.push((w.iter().map(|&a| alphabet[a].clone()).collect(), trace));
    }
    Ok(out)
}

/// Explicit machine for the control states reachable from the initial one.
pub fn materialize<M: CounterSystem>(m: &M) -> Result<CounterMachine> {
    let mut index: HashMap<M::State, usize> = HashMap::new();
    let mut states = vec![m.initial()];
    index.insert(m.initial(), 0);
    let mut edges = Vec::new();
    let mut head = 0;
    while head < states.len() {
        let s = states[head].clone();
        for (letter, instr, t) in m.transitions(&s)? {
            let ti = match index.get(&t) {
                Some(&i) => i,
                None => {
                    states.push(t.clone());
                    index.insert(t, states.len() - 1);
                    states.len() - 1
                }
            };
            edges.push((head, letter, instr, ti));
        }
        head += 1;
    }
    let names: Vec<String> = states.iter().map(|s| m.state_name(s)).collect();
    let accepting = states.iter().map(|s| m.is_accepting(s)).collect();
    CounterMachine::new(names, m.alphabet().to_vec(), m.counters(), edges, 0, accepting)
}

impl CounterMachine {
    pub fn parse(text: &str) -> Result<Self> {
        let mut alphabet: Vec<String> = Vec::new();
        let mut counters: Option<usize> = None;
        let mut states: Vec<String> = Vec::new();
        let mut initial: Option<(usize, String)> = None;
        let mut accepting: Vec<(usize, String)> = Vec::new();
        let mut trans: Vec<(usize, Vec<(usize, String)>)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let Some((key, rest)) = line.split_once(':') else {
                return Err(Error::parse(line_no, 1, "expected `key: values`"));
            };
            let offset = key.len() + 1;
            let toks: Vec<(usize, String)> =
                tokens_with_columns(rest).map(|(c, t)| (c + offset, t.to_string())).collect();
            match key.trim() {
                "alphabet" => alphabet = toks.into_iter().map(|t| t.1).collect(),
                "counters" => {
                    let Some((col, v)) = toks.first() else {
                        return Err(Error::parse(line_no, offset + 1, "missing counter count"));
                    };
                    counters = Some(v.parse().map_err(|_| Error::parse(line_no, *col, "bad counter count"))?);
                }
                "states" => states.extend(toks.into_iter().map(|t| t.1)),
                "initial" => initial = toks.into_iter().next().map(|t| (line_no, t.1)),
                "accepting" => accepting.extend(toks.into_iter().map(|t| (line_no, t.1))),
                "trans" => trans.push((line_no, toks)),
                other => return Err(Error::parse(line_no, 1, format!("unknown key `{other}`"))),
            }
        }
        let k = counters.ok_or_else(|| Error::parse(1, 1, "missing `counters:` line"))?;
        let Some((_, init)) = initial else {
            return Err(Error::parse(1, 1, "missing `initial:` line"));
        };
        let mut add = |s: &str| {
            if !states.iter().any(|x| x == s) {
                states.push(s.to_string());
            }
        };
        add(&init);
        for (_, toks) in &trans {
            if toks.len() == 5 {
                add(&toks[0].1);
                add(&toks[4].1);
            }
        }
        let mut edges = Vec::new();
        for (line, toks) in &trans {
            if toks.len() != 5 {
                let col = toks.first().map_or(1, |t| t.0);
                return Err(Error::parse(*line, col, "expected `trans: p letter op counter q`"));
            }
            let p = index_of(&states, &toks[0].1).expect("added above");
            let letter = match toks[1].1.as_str() {
                "eps" => None,
                a => Some(index_of(&alphabet, a).ok_or_else(|| {
                    Error::parse(*line, toks[1].0, format!("letter `{a}` is not in the alphabet"))
                })?),
            };
            let instr = Instruction::parse(&toks[2].1, &toks[3].1, *line, toks[2].0, k)?;
            let q = index_of(&states, &toks[4].1).expect("added above");
            edges.push((p, letter, instr, q));
        }
        let mut flags = vec![false; states.len()];
        for (line, a) in &accepting {
            let q = index_of(&states, a)
                .ok_or_else(|| Error::parse(*line, 1, format!("unknown accepting state `{a}`")))?;
            flags[q] = true;
        }
        let q0 = index_of(&states, &init).expect("added above");
        CounterMachine::new(states, alphabet, k, edges, q0, flags)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("alphabet: {}\n", self.alphabet.join(" ")));
        out.push_str(&format!("counters: {}\n", self.counters));
        out.push_str(&format!("states: {}\n", self.states.join(" ")));
        out.push_str(&format!("initial: {}\n", self.states[self.initial]));
        let acc: Vec<&str> = self
            .states
            .iter()
            .zip(&self.accepting)
            .filter(|(_, &a)| a)
            .map(|(s, _)| s.as_str())
            .collect();
        out.push_str(&format!("accepting: {}\n", acc.join(" ")));
        for (p, ts) in self.transitions.iter().enumerate() {
            for t in ts {
                let letter = t.letter.map_or("eps", |a| self.alphabet[a].as_str());
                out.push_str(&format!(
                    "trans: {} {} {} {}\n",
                    self.states[p], letter, t.instruction, self.states[t.target]
                ));
            }
        }
        out
    }
}

/// Parses a trace, one `letter op counter target` step per line.
pub fn parse_trace(text: &str) -> Result<Vec<TraceStep>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let toks: Vec<(usize, &str)> = tokens_with_columns(line).collect();
        if toks.len() != 4 {
            return Err(Error::parse(i + 1, toks.first().map_or(1, |t| t.0), "expected `letter op counter target`"));
        }
        let instruction = Instruction::parse(toks[1].1, toks[2].1, i + 1, toks[1].0, usize::MAX)?;
        out.push(TraceStep {
            letter: (toks[0].1 != "eps").then(|| toks[0].1.to_string()),
            instruction,
            target: toks[3].1.to_string(),
        });
    }
    Ok(out)
}

pub fn trace_to_text(trace: &[TraceStep]) -> String {
    trace.iter().map(|s| format!("{s}\n")).collect()
}

#[cfg(test)]
mod tests;
