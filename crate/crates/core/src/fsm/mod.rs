//! Finite automata: complete DFAs, NFAs, class conditions over `Γ × {0,1}`
//! and letter-to-letter transducers.
//!
//! States and letters carry string names for I/O; everything else works on
//! dense indices. Letter `(γ, m)` of a class condition is encoded as
//! `2·γ + m`.

mod text;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::dataword::MarkedWord;
use crate::error::{Error, Result};

pub use text::RawAutomaton;

pub(crate) fn index_of(names: &[String], name: &str) -> Option<usize> {
    names.iter().position(|n| n == name)
}

/// Deterministic complete automaton over a plain alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dfa {
    states: Vec<String>,
    alphabet: Vec<String>,
    // delta[q * |alphabet| + a]
    delta: Vec<usize>,
    initial: usize,
    accepting: Vec<bool>,
}

impl Dfa {
    /// `delta[q][a]` must be defined for every state and letter.
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        delta: Vec<Vec<usize>>,
        initial: usize,
        accepting: Vec<bool>,
    ) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::input("automaton has no states"));
        }
        if initial >= n || accepting.len() != n || delta.len() != n {
            return Err(Error::input("inconsistent automaton dimensions"));
        }
        let mut flat = Vec::with_capacity(n * alphabet.len());
        for (q, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::input(format!(
                    "state {} has {} transitions, expected one per letter ({})",
                    states[q],
                    row.len(),
                    alphabet.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&t| t >= n) {
                return Err(Error::input(format!("transition target {bad} out of range")));
            }
            flat.extend_from_slice(row);
        }
        Ok(Dfa {
            states,
            alphabet,
            delta: flat,
            initial,
            accepting,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    #[inline]
    pub fn next(&self, q: usize, a: usize) -> usize {
        self.delta[q * self.alphabet.len() + a]
    }

    pub fn run(&self, word: &[usize]) -> usize {
        word.iter().fold(self.initial, |q, &a| self.next(q, a))
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.accepting[self.run(word)]
    }

    pub fn letter(&self, name: &str) -> Option<usize> {
        index_of(&self.alphabet, name)
    }

    fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            i += 1;
            for a in 0..self.alphabet.len() {
                let t = self.next(q, a);
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
        order
    }

    /// Minimal complete automaton for the same language, by Moore partition
    /// refinement over the reachable part. Each block is named after its
    /// earliest member in breadth-first order.
    pub fn minimize(&self) -> Dfa {
        let order = self.reachable();
        let k = self.alphabet.len();
        let mut block: HashMap<usize, usize> = order
            .iter()
            .map(|&q| (q, usize::from(self.accepting[q])))
            .collect();
        let mut count = block.values().collect::<BTreeSet<_>>().len();
        loop {
            let mut sigs: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next_block = HashMap::new();
            for &q in &order {
                let sig: Vec<usize> = (0..k).map(|a| block[&self.next(q, a)]).collect();
                let fresh = sigs.len();
                let id = *sigs.entry((block[&q], sig)).or_insert(fresh);
                next_block.insert(q, id);
            }
            let new_count = sigs.len();
            block = next_block;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // renumber blocks by first appearance in BFS order
        let mut renumber: BTreeMap<usize, usize> = BTreeMap::new();
        let mut reps = Vec::new();
        for &q in &order {
            let b = block[&q];
            if !renumber.contains_key(&b) {
                renumber.insert(b, reps.len());
                reps.push(q);
            }
        }
        let delta = reps
            .iter()
            .map(|&q| (0..k).map(|a| renumber[&block[&self.next(q, a)]]).collect())
            .collect();
        Dfa::new(
            reps.iter().map(|&q| self.states[q].clone()).collect(),
            self.alphabet.clone(),
            delta,
            0,
            reps.iter().map(|&q| self.accepting[q]).collect(),
        )
        .expect("minimized automaton is well formed")
    }
}

/// Nondeterministic automaton without ε-transitions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nfa {
    states: Vec<String>,
    alphabet: Vec<String>,
    // transitions[q][a] = successors
    transitions: Vec<Vec<Vec<usize>>>,
    initial: Vec<usize>,
    accepting: Vec<bool>,
}

impl Nfa {
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize, usize)>,
        initial: Vec<usize>,
        accepting: Vec<bool>,
    ) -> Result<Self> {
        let n = states.len();
        if accepting.len() != n || initial.iter().any(|&q| q >= n) {
            return Err(Error::input("inconsistent automaton dimensions"));
        }
        let mut transitions = vec![vec![Vec::new(); alphabet.len()]; n];
        for (p, a, q) in edges {
            if p >= n || q >= n || a >= alphabet.len() {
                return Err(Error::input("transition out of range"));
            }
            if !transitions[p][a].contains(&q) {
                transitions[p][a].push(q);
            }
        }
        for row in &mut transitions {
            for succ in row.iter_mut() {
                succ.sort_unstable();
            }
        }
        Ok(Nfa {
            states,
            alphabet,
            transitions,
            initial,
            accepting,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    pub fn successors(&self, q: usize, a: usize) -> &[usize] {
        &self.transitions[q][a]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.transitions.iter().enumerate().flat_map(|(p, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(a, succ)| succ.iter().map(move |&q| (p, a, q)))
        })
    }

    pub fn letter(&self, name: &str) -> Option<usize> {
        index_of(&self.alphabet, name)
    }

    /// Direct subset simulation.
    pub fn accepts(&self, word: &[usize]) -> bool {
        let mut current: BTreeSet<usize> = self.initial.iter().copied().collect();
        for &a in word {
            current = current
                .iter()
                .flat_map(|&q| self.transitions[q][a].iter().copied())
                .collect();
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|&q| self.accepting[q])
    }

    /// Subset construction over reachable subsets, including the empty
    /// subset as explicit sink when needed. Subset states are named
    /// `{p,q}` from the sorted member names.
    pub fn determinize_complete(&self) -> Dfa {
        let k = self.alphabet.len();
        let start: Vec<usize> = self.initial.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut subsets = vec![start.clone()];
        ids.insert(start, 0);
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            let current = subsets[i].clone();
            let mut row = Vec::with_capacity(k);
            for a in 0..k {
                let next: Vec<usize> = current
                    .iter()
                    .flat_map(|&q| self.transitions[q][a].iter().copied())
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len();
                        ids.insert(next.clone(), id);
                        subsets.push(next);
                        id
                    }
                };
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        let names = subsets
            .iter()
            .map(|s| {
                let mut members: Vec<&str> = s.iter().map(|&q| self.states[q].as_str()).collect();
                members.sort_unstable();
                format!("{{{}}}", members.join(","))
            })
            .collect();
        let accepting = subsets
            .iter()
            .map(|s| s.iter().any(|&q| self.accepting[q]))
            .collect();
        Dfa::new(names, self.alphabet.clone(), delta, 0, accepting)
            .expect("subset construction is complete")
    }
}

impl From<&Dfa> for Nfa {
    fn from(d: &Dfa) -> Self {
        let k = d.alphabet.len();
        let edges = (0..d.num_states()).flat_map(|q| (0..k).map(move |a| (q, a, d.next(q, a))));
        Nfa::new(
            d.states.clone(),
            d.alphabet.clone(),
            edges.collect::<Vec<_>>(),
            vec![d.initial],
            d.accepting.clone(),
        )
        .expect("dfa converts to nfa")
    }
}

/// Name of the marked letter `(γ, m)` in a flattened alphabet.
pub fn marked_letter_name(gamma: &str, mark: bool) -> String {
    format!("{gamma}/{}", u8::from(mark))
}

pub fn marked_alphabet(gamma: &[String]) -> Vec<String> {
    gamma
        .iter()
        .flat_map(|g| [marked_letter_name(g, false), marked_letter_name(g, true)])
        .collect()
}

/// Deterministic complete automaton over `Γ × {0,1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDfa {
    gamma: Vec<String>,
    dfa: Dfa,
}

impl ClassDfa {
    /// `zero[q][γ]` and `one[q][γ]` give the targets of `(γ,0)` and `(γ,1)`.
    pub fn new(
        states: Vec<String>,
        gamma: Vec<String>,
        zero: Vec<Vec<usize>>,
        one: Vec<Vec<usize>>,
        initial: usize,
        accepting: Vec<bool>,
    ) -> Result<Self> {
        if zero.len() != states.len() || one.len() != states.len() {
            return Err(Error::input("transition tables do not match the state count"));
        }
        let delta = zero
            .iter()
            .zip(&one)
            .map(|(z, o)| {
                if z.len() != gamma.len() || o.len() != gamma.len() {
                    return Err(Error::input("class condition must be complete"));
                }
                Ok(z.iter().zip(o).flat_map(|(&a, &b)| [a, b]).collect())
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        let dfa = Dfa::new(states, marked_alphabet(&gamma), delta, initial, accepting)?;
        Ok(ClassDfa { gamma, dfa })
    }

    /// Wraps a DFA whose alphabet is `marked_alphabet(gamma)`.
    pub fn from_dfa(gamma: Vec<String>, dfa: Dfa) -> Result<Self> {
        if dfa.alphabet != marked_alphabet(&gamma) {
            return Err(Error::input("automaton alphabet is not Γ × {0,1}"));
        }
        Ok(ClassDfa { gamma, dfa })
    }

    pub fn gamma(&self) -> &[String] {
        &self.gamma
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn states(&self) -> &[String] {
        self.dfa.states()
    }

    pub fn num_states(&self) -> usize {
        self.dfa.num_states()
    }

    pub fn num_letters(&self) -> usize {
        self.gamma.len()
    }

    pub fn initial(&self) -> usize {
        self.dfa.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.dfa.accepting[q]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        index_of(self.dfa.states(), name)
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        index_of(&self.gamma, name)
    }

    #[inline]
    pub fn next(&self, q: usize, gamma: usize, mark: bool) -> usize {
        self.dfa.next(q, 2 * gamma + usize::from(mark))
    }

    #[inline]
    pub fn zero(&self, q: usize, gamma: usize) -> usize {
        self.next(q, gamma, false)
    }

    #[inline]
    pub fn one(&self, q: usize, gamma: usize) -> usize {
        self.next(q, gamma, true)
    }

    pub fn run_indices(&self, word: &[(usize, bool)]) -> usize {
        word.iter()
            .fold(self.initial(), |q, &(g, m)| self.next(q, g, m))
    }

    /// Final state and acceptance on a marked word.
    pub fn run(&self, word: &MarkedWord) -> Result<(usize, bool)> {
        let mut q = self.initial();
        for (g, m) in &word.letters {
            let gi = self
                .letter_index(g)
                .ok_or_else(|| Error::input(format!("letter `{g}` is not in the condition alphabet")))?;
            q = self.next(q, gi, *m);
        }
        Ok((q, self.is_accepting(q)))
    }

    pub fn minimize(&self) -> ClassDfa {
        ClassDfa {
            gamma: self.gamma.clone(),
            dfa: self.dfa.minimize(),
        }
    }

    /// Renames the letters of `Γ` without changing the structure.
    pub fn relabel_letters(&self, rename: impl Fn(&str) -> String) -> ClassDfa {
        let gamma: Vec<String> = self.gamma.iter().map(|g| rename(g)).collect();
        let mut dfa = self.dfa.clone();
        dfa.alphabet = marked_alphabet(&gamma);
        ClassDfa { gamma, dfa }
    }
}

/// Nondeterministic letter-to-letter transducer `Σ* → Γ*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transducer {
    states: Vec<String>,
    input: Vec<String>,
    output: Vec<String>,
    // moves[q][σ] = [(γ, q')]
    moves: Vec<Vec<Vec<(usize, usize)>>>,
    initial: usize,
    accepting: Vec<bool>,
}

impl Transducer {
    pub fn new(
        states: Vec<String>,
        input: Vec<String>,
        output: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize, usize, usize)>,
        initial: usize,
        accepting: Vec<bool>,
    ) -> Result<Self> {
        let n = states.len();
        if n == 0 || initial >= n || accepting.len() != n {
            return Err(Error::input("inconsistent transducer dimensions"));
        }
        let mut moves = vec![vec![Vec::new(); input.len()]; n];
        for (p, s, g, q) in edges {
            if p >= n || q >= n || s >= input.len() || g >= output.len() {
                return Err(Error::input("transducer transition out of range"));
            }
            if !moves[p][s].contains(&(g, q)) {
                moves[p][s].push((g, q));
            }
        }
        for row in &mut moves {
            for m in row.iter_mut() {
                m.sort_unstable();
            }
        }
        Ok(Transducer {
            states,
            input,
            output,
            moves,
            initial,
            accepting,
        })
    }

    /// Copies the input: `Γ = Σ`, one state.
    pub fn identity(sigma: Vec<String>) -> Self {
        let edges: Vec<_> = (0..sigma.len()).map(|s| (0, s, s, 0)).collect();
        Transducer::new(vec!["t".into()], sigma.clone(), sigma, edges, 0, vec![true])
            .expect("identity transducer")
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn input(&self) -> &[String] {
        &self.input
    }

    pub fn output(&self) -> &[String] {
        &self.output
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn input_index(&self, name: &str) -> Option<usize> {
        index_of(&self.input, name)
    }

    pub fn output_index(&self, name: &str) -> Option<usize> {
        index_of(&self.output, name)
    }

    /// All `(γ, q')` with `(q, σ, γ, q')` a transition.
    pub fn step(&self, q: usize, sigma: usize) -> &[(usize, usize)] {
        &self.moves[q][sigma]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        self.moves.iter().enumerate().flat_map(|(p, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(s, ms)| ms.iter().map(move |&(g, q)| (p, s, g, q)))
        })
    }

    /// Tags of a word as input indices.
    pub fn encode_input<S: AsRef<str>>(&self, tags: &[S]) -> Result<Vec<usize>> {
        tags.iter()
            .map(|t| {
                self.input_index(t.as_ref())
                    .ok_or_else(|| Error::input(format!("tag `{}` is not in Σ", t.as_ref())))
            })
            .collect()
    }

    /// Every output of an accepting run, by exhaustive path enumeration.
    pub fn outputs(&self, word: &[usize]) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        let mut stack = vec![(self.initial, Vec::new())];
        while let Some((q, produced)) = stack.pop() {
            if produced.len() == word.len() {
                if self.accepting[q] {
                    out.insert(produced);
                }
                continue;
            }
            for &(g, q2) in self.step(q, word[produced.len()]) {
                let mut next = produced.clone();
                next.push(g);
                stack.push((q2, next));
            }
        }
        out
    }

    /// Same transducer with input letters renamed; merged names share transitions.
    pub(crate) fn with_input_renamed(&self, input: Vec<String>, map: &[usize]) -> Transducer {
        let edges: Vec<_> = self.edges().map(|(p, s, g, q)| (p, map[s], g, q)).collect();
        Transducer::new(
            self.states.clone(),
            input,
            self.output.clone(),
            edges,
            self.initial,
            self.accepting.clone(),
        )
        .expect("renamed transducer")
    }
}

/// Breadth-first helper used by a few analyses: all states reachable from
/// `sources` along `succ`, sources included.
pub(crate) fn reach_from(
    n: usize,
    sources: impl IntoIterator<Item = usize>,
    succ: impl Fn(usize) -> Vec<usize>,
) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for s in sources {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(q) = queue.pop_front() {
        for t in succ(q) {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests;
