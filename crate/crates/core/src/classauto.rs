//! Data automata, extended data automata, class automata and priority class
//! automata (PCA): acceptance, embeddings into PCA, union and letter
//! projection, and bounded nonemptiness.
//!
//! Acceptance is decided by a configuration search over the transducer state
//! and one condition state per class of the input word.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::dataword::{enumerate_data_words, DataWord};
use crate::error::{Error, Result};
use crate::fsm::{index_of, ClassDfa, Dfa, Nfa, RawAutomaton, Transducer};
use crate::priority::{analyze, decide_with};

/// The letter extended data automata read at positions outside the class.
pub const EXTENDED_ZERO: &str = "0";

/// A data language over a finite tag alphabet.
pub trait DataLanguage {
    fn input_alphabet(&self) -> &[String];
    fn accepts(&self, dw: &DataWord) -> Result<bool>;
}

// Deterministic per-class condition with a uniform step function.
trait ClassStep {
    fn initial(&self) -> usize;
    fn next(&self, q: usize, gamma: usize, in_class: bool) -> usize;
    fn accepting(&self, q: usize) -> bool;
}

struct MarkedStep<'a>(&'a ClassDfa);

impl ClassStep for MarkedStep<'_> {
    fn initial(&self) -> usize {
        self.0.initial()
    }
    fn next(&self, q: usize, gamma: usize, in_class: bool) -> usize {
        self.0.next(q, gamma, in_class)
    }
    fn accepting(&self, q: usize) -> bool {
        self.0.is_accepting(q)
    }
}

// `zero = None` keeps the state on foreign letters (data automata);
// `Some(z)` reads the letter `z` instead (extended data automata).
struct PlainStep<'a> {
    dfa: &'a Dfa,
    zero: Option<usize>,
}

impl ClassStep for PlainStep<'_> {
    fn initial(&self) -> usize {
        self.dfa.initial()
    }
    fn next(&self, q: usize, gamma: usize, in_class: bool) -> usize {
        match (in_class, self.zero) {
            (true, _) => self.dfa.next(q, gamma),
            (false, None) => q,
            (false, Some(z)) => self.dfa.next(q, z),
        }
    }
    fn accepting(&self, q: usize) -> bool {
        self.dfa.is_accepting(q)
    }
}

// letter_map[γ] = condition letter of transducer output γ, or None when
// that output is not usable in this search.
fn class_search(
    transducer: &Transducer,
    letter_map: &[Option<usize>],
    cond: &dyn ClassStep,
    dw: &DataWord,
) -> Result<bool> {
    let input = transducer.encode_input(dw.tags())?;
    let ids = dw.class_ids();
    let n_classes = ids.iter().max().map_or(0, |m| m + 1);
    let mut frontier: HashSet<(usize, Vec<usize>)> = HashSet::new();
    frontier.insert((transducer.initial(), vec![cond.initial(); n_classes]));
    for (&sigma, &class) in input.iter().zip(&ids) {
        let mut next = HashSet::new();
        for (qg, states) in &frontier {
            for &(gamma, qg2) in transducer.step(*qg, sigma) {
                let Some(letter) = letter_map[gamma] else { continue };
                let moved: Vec<usize> = states
                    .iter()
                    .enumerate()
                    .map(|(c, &q)| cond.next(q, letter, c == class))
                    .collect();
                next.insert((qg2, moved));
            }
        }
        frontier = next;
        if frontier.is_empty() {
            return Ok(false);
        }
    }
    Ok(frontier
        .iter()
        .any(|(qg, states)| transducer.is_accepting(*qg) && states.iter().all(|&q| cond.accepting(q))))
}

fn letter_map(output: &[String], condition: &[String], what: &str) -> Result<Vec<Option<usize>>> {
    let map: Vec<Option<usize>> = output.iter().map(|g| index_of(condition, g)).collect();
    if let Some(g) = output.iter().zip(&map).find(|(_, m)| m.is_none()) {
        return Err(Error::input(format!("output letter `{}` missing from the {what}", g.0)));
    }
    Ok(map)
}

/// Transducer plus a class condition read on `w′|X`.
#[derive(Debug, Clone)]
pub struct DataAutomaton {
    transducer: Transducer,
    condition: Nfa,
    det: Dfa,
    map: Vec<Option<usize>>,
}

impl DataAutomaton {
    pub fn new(transducer: Transducer, condition: Nfa) -> Result<Self> {
        let map = letter_map(transducer.output(), condition.alphabet(), "class condition")?;
        let det = condition.determinize_complete();
        Ok(DataAutomaton { transducer, condition, det, map })
    }

    pub fn transducer(&self) -> &Transducer {
        &self.transducer
    }

    pub fn condition(&self) -> &Nfa {
        &self.condition
    }
}

impl DataLanguage for DataAutomaton {
    fn input_alphabet(&self) -> &[String] {
        self.transducer.input()
    }
    fn accepts(&self, dw: &DataWord) -> Result<bool> {
        class_search(&self.transducer, &self.map, &PlainStep { dfa: &self.det, zero: None }, dw)
    }
}

/// Transducer plus a condition over `Γ ∪ {0}` read on `w′ ⊕ X`.
#[derive(Debug, Clone)]
pub struct ExtendedDataAutomaton {
    transducer: Transducer,
    condition: Nfa,
    det: Dfa,
    map: Vec<Option<usize>>,
    zero: usize,
}

impl ExtendedDataAutomaton {
    pub fn new(transducer: Transducer, condition: Nfa) -> Result<Self> {
        if transducer.output_index(EXTENDED_ZERO).is_some() {
            return Err(Error::input("the letter `0` may not be an output letter"));
        }
        let zero = index_of(condition.alphabet(), EXTENDED_ZERO)
            .ok_or_else(|| Error::input("extended condition must contain the letter `0`"))?;
        let map = letter_map(transducer.output(), condition.alphabet(), "extended condition")?;
        let det = condition.determinize_complete();
        Ok(ExtendedDataAutomaton { transducer, condition, det, map, zero })
    }

    pub fn transducer(&self) -> &Transducer {
        &self.transducer
    }

    pub fn condition(&self) -> &Nfa {
        &self.condition
    }
}

impl DataLanguage for ExtendedDataAutomaton {
    fn input_alphabet(&self) -> &[String] {
        self.transducer.input()
    }
    fn accepts(&self, dw: &DataWord) -> Result<bool> {
        let step = PlainStep { dfa: &self.det, zero: Some(self.zero) };
        class_search(&self.transducer, &self.map, &step, dw)
    }
}

/// Transducer plus a deterministic complete condition over `Γ × {0,1}`.
#[derive(Debug, Clone)]
pub struct ClassAutomaton {
    transducer: Transducer,
    condition: ClassDfa,
    map: Vec<Option<usize>>,
}

impl ClassAutomaton {
    pub fn new(transducer: Transducer, condition: ClassDfa) -> Result<Self> {
        let map = letter_map(transducer.output(), condition.gamma(), "class condition")?;
        Ok(ClassAutomaton { transducer, condition, map })
    }

    pub fn transducer(&self) -> &Transducer {
        &self.transducer
    }

    pub fn condition(&self) -> &ClassDfa {
        &self.condition
    }

    /// Condition letter of each transducer output letter.
    pub fn letter_map(&self) -> Vec<usize> {
        self.map.iter().map(|m| m.expect("total map")).collect()
    }
}

impl DataLanguage for ClassAutomaton {
    fn input_alphabet(&self) -> &[String] {
        self.transducer.input()
    }
    fn accepts(&self, dw: &DataWord) -> Result<bool> {
        class_search(&self.transducer, &self.map, &MarkedStep(&self.condition), dw)
    }
}

/// One block `Γᵢ` of a PCA with its 0-priority condition.
#[derive(Debug, Clone)]
pub struct PcaBlock {
    pub name: String,
    /// Transducer output letters of this block.
    pub letters: Vec<usize>,
    pub condition: ClassDfa,
    /// Condition letters, highest priority first.
    pub ordering: Vec<usize>,
    map: Vec<Option<usize>>,
}

impl PcaBlock {
    /// Condition letter of a transducer output letter, if it belongs here.
    pub fn condition_letter(&self, output: usize) -> Option<usize> {
        self.map[output]
    }
}

/// Priority class automaton: a transducer whose output alphabet is split into
/// blocks, each carrying its own 0-priority class condition.
#[derive(Debug, Clone)]
pub struct Pca {
    transducer: Transducer,
    blocks: Vec<PcaBlock>,
}

/// Block description handed to [`Pca::new`]: name, letters, condition and an
/// optional ordering (letter names).
pub type BlockSpec = (String, Vec<String>, ClassDfa, Option<Vec<String>>);

impl Pca {
    pub fn new(transducer: Transducer, specs: Vec<BlockSpec>) -> Result<Self> {
        let mut owner: Vec<Option<usize>> = vec![None; transducer.output().len()];
        let mut blocks = Vec::new();
        for (b, (name, letters, condition, ordering)) in specs.into_iter().enumerate() {
            let mut outs = Vec::new();
            for l in &letters {
                let g = transducer.output_index(l).ok_or_else(|| {
                    Error::input(format!("block {name}: `{l}` is not an output letter"))
                })?;
                if owner[g].replace(b).is_some() {
                    return Err(Error::input(format!("block {name}: letter `{l}` is in two blocks")));
                }
                outs.push(g);
            }
            let mut cond_letters: Vec<&String> = condition.gamma().iter().collect();
            let mut block_letters: Vec<&String> = letters.iter().collect();
            cond_letters.sort();
            block_letters.sort();
            if cond_letters != block_letters {
                return Err(Error::input(format!(
                    "block {name}: condition alphabet differs from the block letters"
                )));
            }
            let analysis = analyze(&condition);
            let ordering = match ordering {
                Some(names) => {
                    let idx = names
                        .iter()
                        .map(|n| {
                            condition.letter_index(n).ok_or_else(|| {
                                Error::input(format!("block {name}: ordering letter `{n}` unknown"))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if !analysis.ordering_is_valid(&idx) {
                        return Err(Error::Construction(format!(
                            "condition {name} is not 0-priority under the given ordering"
                        )));
                    }
                    idx
                }
                None => decide_with(&analysis).ordering.ok_or_else(|| {
                    Error::Construction(format!("condition {name} is not 0-priority"))
                })?,
            };
            let map = transducer
                .output()
                .iter()
                .enumerate()
                .map(|(g, l)| if owner[g] == Some(b) { condition.letter_index(l) } else { None })
                .collect();
            blocks.push(PcaBlock { name, letters: outs, condition, ordering, map });
        }
        if let Some(g) = owner.iter().position(Option::is_none) {
            return Err(Error::input(format!(
                "output letter `{}` belongs to no block",
                transducer.output()[g]
            )));
        }
        Ok(Pca { transducer, blocks })
    }

    /// Single block holding the whole output alphabet.
    pub fn single(transducer: Transducer, condition: ClassDfa, ordering: Option<Vec<String>>) -> Result<Self> {
        let letters = transducer.output().to_vec();
        Pca::new(transducer, vec![("G1".into(), letters, condition, ordering)])
    }

    pub fn transducer(&self) -> &Transducer {
        &self.transducer
    }

    pub fn blocks(&self) -> &[PcaBlock] {
        &self.blocks
    }

    /// Re-runs the 0-priority check on every block with its stored ordering.
    pub fn check_invariants(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| analyze(&b.condition).ordering_is_valid(&b.ordering))
    }

    pub fn accepts_in_block(&self, block: usize, dw: &DataWord) -> Result<bool> {
        let b = &self.blocks[block];
        class_search(&self.transducer, &b.map, &MarkedStep(&b.condition), dw)
    }
}

impl DataLanguage for Pca {
    fn input_alphabet(&self) -> &[String] {
        self.transducer.input()
    }
    fn accepts(&self, dw: &DataWord) -> Result<bool> {
        self.transducer.encode_input(dw.tags())?;
        for i in 0..self.blocks.len() {
            if self.accepts_in_block(i, dw)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn plain_to_pca(transducer: &Transducer, det: &Dfa, zero: Option<usize>) -> Pca {
    let gamma: Vec<String> = transducer.output().to_vec();
    let letters: Vec<usize> = gamma
        .iter()
        .map(|g| det.letter(g).expect("condition covers the output alphabet"))
        .collect();
    let n = det.num_states();
    let zero_t = (0..n)
        .map(|q| letters.iter().map(|_| zero.map_or(q, |z| det.next(q, z))).collect())
        .collect();
    let one_t = (0..n)
        .map(|q| letters.iter().map(|&l| det.next(q, l)).collect())
        .collect();
    let cond = ClassDfa::new(
        det.states().to_vec(),
        gamma,
        zero_t,
        one_t,
        det.initial(),
        det.accepting().to_vec(),
    )
    .expect("embedded condition is complete");
    Pca::single(transducer.clone(), cond, None).expect("embedded condition is 0-priority")
}

/// Data automaton as a PCA: the condition ignores other classes via
/// `(γ,0)` self-loops.
pub fn da_to_pca(da: &DataAutomaton) -> Pca {
    plain_to_pca(&da.transducer, &da.det, None)
}

/// Extended data automaton as a PCA: every `(γ,0)` behaves as the letter `0`.
pub fn eda_to_pca(eda: &ExtendedDataAutomaton) -> Pca {
    plain_to_pca(&eda.transducer, &eda.det, Some(eda.zero))
}

/// PCA accepting `L(p1) ∪ L(p2)`; output letters, states and blocks of the
/// two sides are prefixed with `1.` and `2.`.
pub fn pca_union(p1: &Pca, p2: &Pca) -> Result<Pca> {
    let mut sigma1: Vec<&String> = p1.input_alphabet().iter().collect();
    let mut sigma2: Vec<&String> = p2.input_alphabet().iter().collect();
    sigma1.sort();
    sigma2.sort();
    if sigma1 != sigma2 {
        return Err(Error::input("union needs equal input alphabets"));
    }
    let sigma = p1.input_alphabet().to_vec();
    let t1 = &p1.transducer;
    let t2 = &p2.transducer;
    let mut states = vec!["init".to_string()];
    while t1.states().iter().chain(t2.states()).any(|s| states[0] == format!("1.{s}") || states[0] == format!("2.{s}")) {
        states[0].push('\'');
    }
    states.extend(t1.states().iter().map(|s| format!("1.{s}")));
    states.extend(t2.states().iter().map(|s| format!("2.{s}")));
    let output: Vec<String> = t1
        .output()
        .iter()
        .map(|g| format!("1.{g}"))
        .chain(t2.output().iter().map(|g| format!("2.{g}")))
        .collect();
    let off_s = 1 + t1.num_states();
    let off_g = t1.output().len();
    let sig2: Vec<usize> = t2.input().iter().map(|s| index_of(&sigma, s).unwrap()).collect();
    let mut edges = Vec::new();
    for (p, s, g, q) in t1.edges() {
        edges.push((1 + p, s, g, 1 + q));
        if p == t1.initial() {
            edges.push((0, s, g, 1 + q));
        }
    }
    for (p, s, g, q) in t2.edges() {
        edges.push((off_s + p, sig2[s], off_g + g, off_s + q));
        if p == t2.initial() {
            edges.push((0, sig2[s], off_g + g, off_s + q));
        }
    }
    let accepting: Vec<bool> = std::iter::once(false)
        .chain((0..t1.num_states()).map(|q| t1.is_accepting(q)))
        .chain((0..t2.num_states()).map(|q| t2.is_accepting(q)))
        .collect();
    let transducer = Transducer::new(states, sigma, output, edges, 0, accepting)?;
    let mut specs = Vec::new();
    for (tag, p) in [("1", p1), ("2", p2)] {
        for b in &p.blocks {
            let cond = b.condition.relabel_letters(|g| format!("{tag}.{g}"));
            let letters = b.letters.iter().map(|&g| format!("{tag}.{}", p.transducer.output()[g])).collect();
            let ordering = b.ordering.iter().map(|&g| cond.gamma()[g].clone()).collect();
            specs.push((format!("{tag}.{}", b.name), letters, cond, Some(ordering)));
        }
    }
    Pca::new(transducer, specs)
}

/// Relabels the transducer input through a non-erasing letter map.
pub fn pca_letter_project(pca: &Pca, prj: &BTreeMap<String, Option<String>>) -> Result<Pca> {
    let mut image: Vec<String> = Vec::new();
    let mut map = Vec::new();
    for s in pca.input_alphabet() {
        let target = match prj.get(s) {
            Some(Some(t)) => t.clone(),
            Some(None) => {
                return Err(Error::Unsupported(format!(
                    "projection erases `{s}`; only non-erasing projections are supported"
                )))
            }
            None => return Err(Error::input(format!("projection undefined on `{s}`"))),
        };
        let idx = match index_of(&image, &target) {
            Some(i) => i,
            None => {
                image.push(target);
                image.len() - 1
            }
        };
        map.push(idx);
    }
    Ok(Pca {
        transducer: pca.transducer.with_input_renamed(image, &map),
        blocks: pca.blocks.clone(),
    })
}

/// First accepted canonical data word of length at most `max_len`.
pub fn bounded_nonempty<M: DataLanguage + ?Sized>(m: &M, max_len: usize) -> Result<Option<DataWord>> {
    for dw in enumerate_data_words(m.input_alphabet(), max_len) {
        if m.accepts(&dw)? {
            return Ok(Some(dw));
        }
    }
    Ok(None)
}

/// Tag words of length at most `max_len` that carry some accepted data word.
pub fn bounded_string_language<M: DataLanguage + ?Sized>(
    m: &M,
    max_len: usize,
) -> Result<BTreeSet<Vec<String>>> {
    let mut out = BTreeSet::new();
    for dw in enumerate_data_words(m.input_alphabet(), max_len) {
        if !out.contains(dw.tags()) && m.accepts(&dw)? {
            out.insert(dw.tags().to_vec());
        }
    }
    Ok(out)
}

/// Any of the automaton kinds, as read from a composite file.
#[derive(Debug, Clone)]
pub enum AnyAutomaton {
    Data(DataAutomaton),
    Extended(ExtendedDataAutomaton),
    Class(ClassAutomaton),
    Pca(Pca),
}

impl AnyAutomaton {
    pub fn as_language(&self) -> &dyn DataLanguage {
        match self {
            AnyAutomaton::Data(m) => m,
            AnyAutomaton::Extended(m) => m,
            AnyAutomaton::Class(m) => m,
            AnyAutomaton::Pca(m) => m,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            AnyAutomaton::Data(_) => "data automaton",
            AnyAutomaton::Extended(_) => "extended data automaton",
            AnyAutomaton::Class(_) => "class automaton",
            AnyAutomaton::Pca(_) => "priority class automaton",
        }
    }

    /// Reads the composite format:
    ///
    /// ```text
    /// [transducer]            fsm transducer lines
    /// [partition]             G1: a b
    /// [condition G1]          optional `ordering:` plus class-condition lines
    /// ```
    ///
    /// Without `[partition]` exactly one of `[data-condition]`,
    /// `[extended-condition]` or `[class-condition]` is expected.
    pub fn parse(text: &str) -> Result<Self> {
        let sections = split_sections(text)?;
        let find = |name: &str| sections.iter().find(|(n, _, _)| n == name);
        let Some((_, _, tlines)) = find("transducer") else {
            return Err(Error::parse(1, 1, "missing [transducer] section"));
        };
        let transducer = RawAutomaton::parse_lines(tlines)?.to_transducer()?;
        if let Some((_, _, plines)) = find("partition") {
            let mut specs = Vec::new();
            for &(line, content) in plines {
                let content = content.split('#').next().unwrap_or("");
                if content.trim().is_empty() {
                    continue;
                }
                let Some((name, letters)) = content.split_once(':') else {
                    return Err(Error::parse(line, 1, "expected `name: letters`"));
                };
                let name = name.trim().to_string();
                let Some((_, _, clines)) = find(&format!("condition {name}")) else {
                    return Err(Error::parse(line, 1, format!("no [condition {name}] section")));
                };
                let raw = RawAutomaton::parse_lines(clines)?;
                let cond = raw.to_class_dfa()?;
                let letters = letters.split_whitespace().map(str::to_string).collect();
                specs.push((name, letters, cond, raw.ordering.map(|(_, o)| o)));
            }
            return Ok(AnyAutomaton::Pca(Pca::new(transducer, specs)?));
        }
        if let Some((_, _, lines)) = find("data-condition") {
            let nfa = RawAutomaton::parse_lines(lines)?.to_nfa()?;
            return Ok(AnyAutomaton::Data(DataAutomaton::new(transducer, nfa)?));
        }
        if let Some((_, _, lines)) = find("extended-condition") {
            let nfa = RawAutomaton::parse_lines(lines)?.to_nfa()?;
            return Ok(AnyAutomaton::Extended(ExtendedDataAutomaton::new(transducer, nfa)?));
        }
        if let Some((_, _, lines)) = find("class-condition") {
            let cond = RawAutomaton::parse_lines(lines)?.to_class_dfa()?;
            return Ok(AnyAutomaton::Class(ClassAutomaton::new(transducer, cond)?));
        }
        Err(Error::parse(1, 1, "no condition section"))
    }
}

type Section<'a> = (String, usize, Vec<(usize, &'a str)>);

fn split_sections(text: &str) -> Result<Vec<Section<'_>>> {
    let mut out: Vec<Section> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let t = line.trim();
        if let Some(inner) = t.strip_prefix('[') {
            let Some(name) = inner.strip_suffix(']') else {
                return Err(Error::parse(line_no, 1, "unterminated section header"));
            };
            let name = name.split_whitespace().collect::<Vec<_>>().join(" ");
            if out.iter().any(|(n, _, _)| *n == name) {
                return Err(Error::parse(line_no, 1, format!("duplicate section [{name}]")));
            }
            out.push((name, line_no, Vec::new()));
        } else if let Some(last) = out.last_mut() {
            last.2.push((line_no, line));
        } else if !t.is_empty() && !t.starts_with('#') {
            return Err(Error::parse(line_no, 1, "text before the first section"));
        }
    }
    Ok(out)
}

impl Pca {
    pub fn parse(text: &str) -> Result<Self> {
        match AnyAutomaton::parse(text)? {
            AnyAutomaton::Pca(p) => Ok(p),
            other => Err(Error::input(format!("expected a PCA file, found a {}", other.kind()))),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("[transducer]\n");
        out.push_str(&self.transducer.to_text());
        out.push_str("\n[partition]\n");
        for b in &self.blocks {
            let letters: Vec<&str> = b.letters.iter().map(|&g| self.transducer.output()[g].as_str()).collect();
            out.push_str(&format!("{}: {}\n", b.name, letters.join(" ")));
        }
        for b in &self.blocks {
            let ordering: Vec<&str> = b.ordering.iter().map(|&g| b.condition.gamma()[g].as_str()).collect();
            out.push_str(&format!("\n[condition {}]\nordering: {}\n", b.name, ordering.join(" ")));
            out.push_str(&b.condition.to_text());
        }
        out
    }
}
