//! Line-based automaton text format.
//!
//! ```text
//! alphabet: a b
//! states: q0 q1
//! initial: q0
//! accepting: q0
//! trans: q0 a 1 q1        # class condition: letter, mark, target
//! trans: q0 a q1          # plain automaton
//! trans: q0 a -> x q1     # transducer (with an `output:` line)
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{index_of, marked_alphabet, ClassDfa, Dfa, Nfa, Transducer};
use crate::dataword::tokens_with_columns;
use crate::error::{Error, Result};

/// A parsed but not yet interpreted automaton description.
#[derive(Debug, Clone, Default)]
pub struct RawAutomaton {
    pub alphabet: Option<(usize, Vec<String>)>,
    pub output: Option<(usize, Vec<String>)>,
    pub states: Option<(usize, Vec<String>)>,
    pub initial: Option<(usize, Vec<String>)>,
    pub accepting: Vec<String>,
    pub ordering: Option<(usize, Vec<String>)>,
    /// `(line, [(column, token)])` per `trans:` line.
    pub trans: Vec<(usize, Vec<(usize, String)>)>,
}

pub(crate) fn numbered_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect()
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

impl RawAutomaton {
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_lines(&numbered_lines(text))
    }

    pub fn parse_lines(lines: &[(usize, &str)]) -> Result<Self> {
        let mut raw = RawAutomaton::default();
        for &(line_no, line) in lines {
            let line = strip_comment(line);
            if line.trim().is_empty() {
                continue;
            }
            let Some((key, rest)) = line.split_once(':') else {
                let col = line.len() - line.trim_start().len() + 1;
                return Err(Error::parse(line_no, col, "expected `key: values`"));
            };
            let offset = key.len() + 1;
            let values: Vec<(usize, String)> = tokens_with_columns(rest)
                .map(|(c, t)| (c + offset, t.to_string()))
                .collect();
            let names = || values.iter().map(|(_, t)| t.clone()).collect::<Vec<_>>();
            match key.trim() {
                "alphabet" => raw.alphabet = Some((line_no, names())),
                "output" => raw.output = Some((line_no, names())),
                "states" => raw.states = Some((line_no, names())),
                "initial" => raw.initial = Some((line_no, names())),
                "accepting" => raw.accepting.extend(names()),
                "ordering" => raw.ordering = Some((line_no, names())),
                "trans" => raw.trans.push((line_no, values)),
                other => {
                    let col = line.find(other).unwrap_or(0) + 1;
                    return Err(Error::parse(line_no, col, format!("unknown key `{other}`")));
                }
            }
        }
        Ok(raw)
    }

    fn alphabet(&self) -> Result<Vec<String>> {
        self.alphabet
            .as_ref()
            .map(|(_, a)| a.clone())
            .ok_or_else(|| Error::parse(1, 1, "missing `alphabet:` line"))
    }

    /// States in declaration order; undeclared states are added in order of
    /// first mention.
    fn state_names(&self, target_pos: impl Fn(&[(usize, String)]) -> Option<usize>) -> Vec<String> {
        let mut names: Vec<String> = self.states.as_ref().map(|(_, s)| s.clone()).unwrap_or_default();
        let mut add = |n: &str| {
            if !names.iter().any(|x| x == n) {
                names.push(n.to_string());
            }
        };
        if let Some((_, init)) = &self.initial {
            init.iter().for_each(|n| add(n));
        }
        for (_, toks) in &self.trans {
            if let Some((_, src)) = toks.first() {
                add(src);
            }
            if let Some(i) = target_pos(toks) {
                add(&toks[i].1);
            }
        }
        names
    }

    fn state(&self, states: &[String], line: usize, col: usize, name: &str) -> Result<usize> {
        index_of(states, name).ok_or_else(|| Error::parse(line, col, format!("unknown state `{name}`")))
    }

    fn initial_states(&self, states: &[String]) -> Result<Vec<usize>> {
        let Some((line, init)) = &self.initial else {
            return Err(Error::parse(1, 1, "missing `initial:` line"));
        };
        init.iter()
            .map(|n| self.state(states, *line, 1, n))
            .collect()
    }

    fn accepting_flags(&self, states: &[String]) -> Result<Vec<bool>> {
        let mut flags = vec![false; states.len()];
        for n in &self.accepting {
            let q = index_of(states, n)
                .ok_or_else(|| Error::input(format!("unknown accepting state `{n}`")))?;
            flags[q] = true;
        }
        Ok(flags)
    }

    fn letter(&self, alphabet: &[String], line: usize, col: usize, name: &str) -> Result<usize> {
        index_of(alphabet, name)
            .ok_or_else(|| Error::parse(line, col, format!("letter `{name}` is not in the alphabet")))
    }

    /// Interprets `trans: p a q` lines.
    pub fn to_nfa(&self) -> Result<Nfa> {
        let alphabet = self.alphabet()?;
        let states = self.state_names(|t| (t.len() == 3).then_some(2));
        let mut edges = Vec::new();
        for (line, toks) in &self.trans {
            if toks.len() != 3 {
                let col = toks.first().map_or(1, |t| t.0);
                return Err(Error::parse(*line, col, "expected `trans: source letter target`"));
            }
            let p = self.state(&states, *line, toks[0].0, &toks[0].1)?;
            let a = self.letter(&alphabet, *line, toks[1].0, &toks[1].1)?;
            let q = self.state(&states, *line, toks[2].0, &toks[2].1)?;
            edges.push((p, a, q));
        }
        let initial = self.initial_states(&states)?;
        let accepting = self.accepting_flags(&states)?;
        Nfa::new(states, alphabet, edges, initial, accepting)
    }

    /// Interprets `trans: p γ m q` lines over `Γ × {0,1}`. Nondeterministic or
    /// incomplete descriptions are determinized and completed.
    pub fn to_class_dfa(&self) -> Result<ClassDfa> {
        let gamma = self.alphabet()?;
        let states = self.state_names(|t| (t.len() == 4).then_some(3));
        let mut edges = Vec::new();
        for (line, toks) in &self.trans {
            if toks.len() != 4 {
                let col = toks.first().map_or(1, |t| t.0);
                return Err(Error::parse(*line, col, "expected `trans: source letter mark target`"));
            }
            let p = self.state(&states, *line, toks[0].0, &toks[0].1)?;
            let g = self.letter(&gamma, *line, toks[1].0, &toks[1].1)?;
            let mark = match toks[2].1.as_str() {
                "0" => 0,
                "1" => 1,
                other => {
                    return Err(Error::parse(*line, toks[2].0, format!("mark must be 0 or 1, found `{other}`")))
                }
            };
            let q = self.state(&states, *line, toks[3].0, &toks[3].1)?;
            edges.push((p, 2 * g + mark, q));
        }
        let initial = self.initial_states(&states)?;
        let accepting = self.accepting_flags(&states)?;
        let k = 2 * gamma.len();
        let mut table = vec![vec![None; k]; states.len()];
        let mut deterministic = initial.len() == 1;
        for &(p, a, q) in &edges {
            match table[p][a] {
                None => table[p][a] = Some(q),
                Some(prev) if prev == q => {}
                Some(_) => deterministic = false,
            }
        }
        let complete = table.iter().all(|row| row.iter().all(Option::is_some));
        if deterministic && complete {
            let zero = table
                .iter()
                .map(|row| (0..gamma.len()).map(|g| row[2 * g].unwrap()).collect())
                .collect();
            let one = table
                .iter()
                .map(|row| (0..gamma.len()).map(|g| row[2 * g + 1].unwrap()).collect())
                .collect();
            return ClassDfa::new(states, gamma, zero, one, initial[0], accepting);
        }
        let nfa = Nfa::new(states, marked_alphabet(&gamma), edges, initial, accepting)?;
        ClassDfa::from_dfa(gamma, nfa.determinize_complete())
    }

    /// Interprets `trans: p σ -> γ q` lines; `output:` lists `Γ`.
    pub fn to_transducer(&self) -> Result<Transducer> {
        let input = self.alphabet()?;
        let output = self
            .output
            .as_ref()
            .map(|(_, o)| o.clone())
            .ok_or_else(|| Error::parse(1, 1, "missing `output:` line"))?;
        let states = self.state_names(|t| (t.len() == 5).then_some(4));
        let mut edges = Vec::new();
        for (line, toks) in &self.trans {
            if toks.len() != 5 || toks[2].1 != "->" {
                let col = toks.first().map_or(1, |t| t.0);
                return Err(Error::parse(*line, col, "expected `trans: source input -> output target`"));
            }
            let p = self.state(&states, *line, toks[0].0, &toks[0].1)?;
            let s = self.letter(&input, *line, toks[1].0, &toks[1].1)?;
            let g = self.letter(&output, *line, toks[3].0, &toks[3].1)?;
            let q = self.state(&states, *line, toks[4].0, &toks[4].1)?;
            edges.push((p, s, g, q));
        }
        let initial = self.initial_states(&states)?;
        if initial.len() != 1 {
            return Err(Error::input("a transducer has exactly one initial state"));
        }
        let accepting = self.accepting_flags(&states)?;
        Transducer::new(states, input, output, edges, initial[0], accepting)
    }
}

fn header(out: &mut String, key: &str, names: impl IntoIterator<Item = impl AsRef<str>>) {
    out.push_str(key);
    out.push(':');
    for n in names {
        out.push(' ');
        out.push_str(n.as_ref());
    }
    out.push('\n');
}

fn accepting_names<'a>(states: &'a [String], flags: &'a [bool]) -> impl Iterator<Item = &'a String> {
    states.iter().zip(flags).filter(|(_, &f)| f).map(|(s, _)| s)
}

impl Dfa {
    pub fn to_text(&self) -> String {
        Nfa::from(self).to_text()
    }
}

impl Nfa {
    pub fn parse(text: &str) -> Result<Self> {
        RawAutomaton::parse(text)?.to_nfa()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        header(&mut out, "alphabet", &self.alphabet);
        header(&mut out, "states", &self.states);
        let init: BTreeSet<usize> = self.initial.iter().copied().collect();
        header(&mut out, "initial", init.iter().map(|&q| &self.states[q]));
        header(&mut out, "accepting", accepting_names(&self.states, &self.accepting));
        for (p, a, q) in self.edges() {
            let _ = writeln!(out, "trans: {} {} {}", self.states[p], self.alphabet[a], self.states[q]);
        }
        out
    }
}

impl ClassDfa {
    pub fn parse(text: &str) -> Result<Self> {
        RawAutomaton::parse(text)?.to_class_dfa()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        header(&mut out, "alphabet", self.gamma());
        header(&mut out, "states", self.states());
        header(&mut out, "initial", [&self.states()[self.initial()]]);
        header(&mut out, "accepting", accepting_names(self.states(), self.dfa().accepting()));
        for q in 0..self.num_states() {
            for (g, name) in self.gamma().iter().enumerate() {
                for mark in [false, true] {
                    let _ = writeln!(
                        out,
                        "trans: {} {} {} {}",
                        self.states()[q],
                        name,
                        u8::from(mark),
                        self.states()[self.next(q, g, mark)]
                    );
                }
            }
        }
        out
    }
}

impl Transducer {
    pub fn parse(text: &str) -> Result<Self> {
        RawAutomaton::parse(text)?.to_transducer()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        header(&mut out, "alphabet", self.input());
        header(&mut out, "output", self.output());
        header(&mut out, "states", self.states());
        header(&mut out, "initial", [&self.states()[self.initial()]]);
        header(&mut out, "accepting", accepting_names(self.states(), &self.accepting));
        for (p, s, g, q) in self.edges() {
            let _ = writeln!(
                out,
                "trans: {} {} -> {} {}",
                self.states()[p],
                self.input()[s],
                self.output()[g],
                self.states()[q]
            );
        }
        out
    }
}
