//! Two-loop programs to class automata, and bounded Boolean-state
//! reachability.
//!
//! Boolean states are bit masks over the program's Boolean variables in
//! name order. At position `i` the transducer reads the tag `t`, computes
//! the state `s` after P1 and guesses the state `e` after the inner loop;
//! it outputs the letter `t.s.e` and moves to P4 applied to `e`.
//!
//! The class condition checks the guesses of the positions in its class.
//! One inner-loop step is a tuple of maps on Boolean states, one per tag of
//! the outer position: P2 on marked letters, P3 on unmarked ones. The
//! condition keeps the composition `g` of the steps read so far, and the set
//! of step compositions that, read from here to the end, would make every
//! guess seen so far come out right.

use std::collections::{BTreeSet, HashMap};

use super::{
    classify, is_restricted_nd2, is_zero_priority_nd2, nd2_parts, translation_problems, BoolExpr, BooleanState,
    DataExpr, IndexExpr, Nd2Parts, Program, Stmt, StmtKind, TagExpr,
};
use crate::classauto::{ClassAutomaton, DataLanguage, Pca};
use crate::compile::{max_scc_depth, step_budget, GeneratedMachine};
use crate::counters::{explore, CounterSystem};
use crate::dataword::{enumerate_data_words, DataWord};
use crate::error::{Error, Result};
use crate::fsm::{ClassDfa, Transducer};
use crate::priority::decide_zero_priority;

const MAX_BOOL_VARS: usize = 6;

struct Ctx<'a> {
    parts: &'a Nd2Parts,
    vars: &'a [String],
    sigma: &'a [String],
    ti: usize,
    tj: Option<usize>,
    same_data: bool,
    same_pos: bool,
}

impl Ctx<'_> {
    fn bit(&self, v: &str) -> u32 {
        1 << self.vars.iter().position(|x| x == v).expect("Boolean variable")
    }

    fn index_is_outer(&self, e: &IndexExpr) -> bool {
        matches!(e, IndexExpr::Loop(v) if *v == self.parts.outer)
    }

    fn tag(&self, e: &TagExpr) -> usize {
        match e {
            TagExpr::Const(s) => self.sigma.iter().position(|x| x == s).expect("tag constant"),
            TagExpr::At(i) if self.index_is_outer(i) => self.ti,
            TagExpr::At(_) => self.tj.expect("inner loop variable outside the inner loop"),
        }
    }

    fn same_index(&self, a: &IndexExpr, b: &IndexExpr) -> bool {
        self.index_is_outer(a) == self.index_is_outer(b) || self.same_pos
    }

    fn eval(&self, e: &BoolExpr, m: u32) -> bool {
        match e {
            BoolExpr::Const(b) => *b,
            BoolExpr::Var(v) => m & self.bit(v) != 0,
            BoolExpr::And(a, b) => self.eval(a, m) && self.eval(b, m),
            BoolExpr::Not(a) => !self.eval(a, m),
            BoolExpr::IndexEq(a, b) => self.same_index(a, b),
            BoolExpr::DataEq(DataExpr::At(a), DataExpr::At(b)) => {
                self.index_is_outer(a) == self.index_is_outer(b) || self.same_data
            }
            BoolExpr::TagEq(a, b) => self.tag(a) == self.tag(b),
            _ => unreachable!("excluded by the shape checks"),
        }
    }

    fn exec(&self, s: &Stmt, m: u32) -> u32 {
        match &s.kind {
            StmtKind::Skip => m,
            StmtKind::Block(xs) | StmtKind::Seq(xs) => xs.iter().fold(m, |m, x| self.exec(x, m)),
            StmtKind::BoolAssign(v, e) => {
                if self.eval(e, m) {
                    m | self.bit(v)
                } else {
                    m & !self.bit(v)
                }
            }
            StmtKind::If(c, a, b) => {
                if self.eval(c, m) {
                    self.exec(a, m)
                } else {
                    self.exec(b, m)
                }
            }
            _ => unreachable!("excluded by the shape checks"),
        }
    }

    fn exec_all(&self, xs: &[Stmt], m: u32) -> u32 {
        xs.iter().fold(m, |m, x| self.exec(x, m))
    }
}

/// Bit string of a Boolean state, first variable first.
pub fn mask_name(m: u32, n: usize) -> String {
    (0..n).map(|k| if m >> k & 1 == 1 { '1' } else { '0' }).collect()
}

fn mask_of(vars: &[String], state: &BooleanState) -> Result<u32> {
    let mut m = 0;
    for (k, v) in vars.iter().enumerate() {
        match state.get(v) {
            Some(true) => m |= 1 << k,
            Some(false) => {}
            None => return Err(Error::input(format!("target does not assign `{v}`"))),
        }
    }
    if let Some(extra) = state.keys().find(|k| !vars.contains(k)) {
        return Err(Error::input(format!("`{extra}` is not a Boolean variable of the program")));
    }
    Ok(m)
}

// inner-loop step: one map per outer tag, flattened as [t * size + m]
type Step = Vec<u16>;

fn compose(after: &Step, before: &Step, size: usize) -> Step {
    before
        .iter()
        .enumerate()
        .map(|(k, &x)| after[(k / size) * size + x as usize])
        .collect()
}

/// Class automaton accepting exactly the arrays on which the program ends
/// in `target`.
pub fn nd2_to_class_automaton(prog: &Program, target: &BooleanState) -> Result<ClassAutomaton> {
    let diag = is_restricted_nd2(prog);
    if !diag.ok {
        return Err(Error::Construction(format!("not a restricted ND2 program: {}", diag.problems.join("; "))));
    }
    let extra = translation_problems(prog);
    if !extra.is_empty() {
        return Err(Error::Unsupported(extra.join("; ")));
    }
    let parts = nd2_parts(prog).expect("checked");
    let vars = prog.bool_vars();
    if vars.len() > MAX_BOOL_VARS {
        return Err(Error::Unsupported(format!("more than {MAX_BOOL_VARS} Boolean variables")));
    }
    let sigma = &prog.sigma;
    let nv = vars.len();
    let size = 1usize << nv;
    let goal = mask_of(&vars, target)?;
    let ctx = |ti: usize, tj: Option<usize>, same_data: bool, same_pos: bool| Ctx {
        parts: &parts,
        vars: &vars,
        sigma,
        ti,
        tj,
        same_data,
        same_pos,
    };

    // transducer over Boolean states
    let mut index: HashMap<u32, usize> = HashMap::from([(0, 0)]);
    let mut states = vec![0u32];
    let mut letters: Vec<(usize, u32, u32)> = Vec::new();
    let mut letter_index: HashMap<(usize, u32, u32), usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut head = 0;
    while head < states.len() {
        let m = states[head];
        for t in 0..sigma.len() {
            let c = ctx(t, None, true, true);
            let s = c.exec_all(&parts.p1, m);
            for e in 0..size as u32 {
                let next = c.exec_all(&parts.p4, e);
                let q = *index.entry(next).or_insert_with(|| {
                    states.push(next);
                    states.len() - 1
                });
                let g = *letter_index.entry((t, s, e)).or_insert_with(|| {
                    letters.push((t, s, e));
                    letters.len() - 1
                });
                edges.push((head, t, g, q));
            }
        }
        head += 1;
    }
    let gamma: Vec<String> = letters
        .iter()
        .map(|&(t, s, e)| format!("{}.{}.{}", sigma[t], mask_name(s, nv), mask_name(e, nv)))
        .collect();
    let transducer = Transducer::new(
        states.iter().map(|&m| mask_name(m, nv)).collect(),
        sigma.clone(),
        gamma.clone(),
        edges,
        0,
        states.iter().map(|&m| m == goal).collect(),
    )?;

    // step maps
    let step = |tj: usize, same_data: bool| -> Step {
        let mut out = Vec::with_capacity(sigma.len() * size);
        for ti in 0..sigma.len() {
            let c = ctx(ti, Some(tj), same_data, false);
            let body = if same_data { &parts.p2 } else { &parts.p3 };
            out.extend((0..size as u32).map(|m| c.exec(body, m) as u16));
        }
        out
    };
    let own: Vec<Vec<u16>> = (0..sigma.len())
        .map(|t| (0..size as u32).map(|m| ctx(t, Some(t), true, true).exec(&parts.p2, m) as u16).collect())
        .collect();
    // generator per (tag at j, mark)
    let gens: Vec<Step> = (0..sigma.len()).flat_map(|t| [step(t, false), step(t, true)]).collect();
    let gen_of = |t: usize, mark: bool| t * 2 + usize::from(mark);

    // the monoid generated by the steps
    let identity: Step = (0..sigma.len()).flat_map(|_| 0..size as u16).collect();
    let mut mon = vec![identity.clone()];
    let mut mon_index: HashMap<Step, usize> = HashMap::from([(identity, 0)]);
    let mut head = 0;
    while head < mon.len() {
        for g in &gens {
            let x = compose(g, &mon[head], size);
            if !mon_index.contains_key(&x) {
                mon_index.insert(x.clone(), mon.len());
                mon.push(x);
            }
        }
        head += 1;
        if mon.len() > 4096 {
            return Err(Error::Unsupported("inner-loop step monoid too large".into()));
        }
    }
    // after[x][G] = index of (G after generator x)
    let after: Vec<Vec<usize>> = gens
        .iter()
        .map(|x| mon.iter().map(|g| mon_index[&compose(g, x, size)]).collect())
        .collect();
    let then: Vec<Vec<usize>> = gens
        .iter()
        .map(|x| mon.iter().map(|g| mon_index[&compose(x, g, size)]).collect())
        .collect();

    // condition states: (prefix g, compatible suffixes S) or dead
    type CState = Option<(usize, Vec<bool>)>;
    let start: CState = Some((0, vec![true; mon.len()]));
    let mut cindex: HashMap<CState, usize> = HashMap::from([(start.clone(), 0)]);
    let mut cstates = vec![start];
    let k = gamma.len();
    let mut zero = Vec::new();
    let mut one = Vec::new();
    let mut head = 0;
    while head < cstates.len() {
        let cur = cstates[head].clone();
        let mut row = [Vec::with_capacity(k), Vec::with_capacity(k)];
        for (mark, row) in row.iter_mut().enumerate() {
            for &(tj, s, e) in &letters {
                let next: CState = cur.as_ref().and_then(|(g, compat)| {
                    let x = gen_of(tj, mark == 1);
                    let mut s2: Vec<bool> = (0..mon.len()).map(|h| compat[after[x][h]]).collect();
                    if mark == 1 {
                        let before = mon[*g][tj * size + s as usize];
                        let c = own[tj][before as usize] as usize;
                        for (h, ok) in s2.iter_mut().enumerate() {
                            *ok &= mon[h][tj * size + c] as u32 == e;
                        }
                    }
                    s2.iter().any(|&b| b).then(|| (then[x][*g], s2))
                });
                let id = *cindex.entry(next.clone()).or_insert_with(|| {
                    cstates.push(next);
                    cstates.len() - 1
                });
                row.push(id);
            }
        }
        let [z, o] = row;
        zero.push(z);
        one.push(o);
        head += 1;
        if cstates.len() > 200_000 {
            return Err(Error::Unsupported("class condition too large".into()));
        }
    }
    let accepting = cstates.iter().map(|c| c.as_ref().is_some_and(|(_, s)| s[0])).collect();
    let names = (0..cstates.len()).map(|i| format!("c{i}")).collect();
    let cond = ClassDfa::new(names, gamma, zero, one, 0, accepting)?.minimize();
    ClassAutomaton::new(transducer, cond)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SolverPath {
    /// Class automaton, PMA, bounded exploration.
    Automaton,
    /// Direct execution on every canonical array.
    Interpreter,
}

/// Bounded answer to "can the program end in `target`?".
#[derive(Debug, Clone, serde::Serialize)]
pub struct Reachability {
    pub classification: String,
    pub target: BooleanState,
    /// Enumeration-least array of length at most `max_len` reaching the
    /// target.
    pub witness: Option<DataWord>,
    pub path: SolverPath,
    /// A counter or step bound cut the exploration.
    pub truncated: bool,
    pub note: String,
}

fn reaches(prog: &Program, arr: &DataWord, goal: &BooleanState) -> Result<bool> {
    Ok(&prog.interpret(arr)?.bools == goal)
}

/// Bounded Boolean-state reachability for a restricted two-loop program.
pub fn reachable(prog: &Program, target: &BooleanState, max_len: usize) -> Result<Reachability> {
    let diag = is_restricted_nd2(prog);
    if !diag.ok {
        return Err(Error::Input(format!("not a restricted ND2 program: {}", diag.problems.join("; "))));
    }
    let mut report = Reachability {
        classification: classify(prog).to_string(),
        target: target.clone(),
        witness: None,
        path: SolverPath::Interpreter,
        truncated: false,
        note: String::new(),
    };
    let syntactic = is_zero_priority_nd2(prog).ok;
    let ca = match nd2_to_class_automaton(prog, target) {
        Ok(ca) => Some(ca),
        Err(Error::Unsupported(why)) => {
            report.note = format!("translation not available: {why}");
            None
        }
        Err(e) => return Err(e),
    };
    if let Some(ca) = ca {
        let verdict = decide_zero_priority(ca.condition());
        match verdict.ordering.filter(|_| verdict.is_zero_priority) {
            Some(ordering) => {
                let names = ordering.iter().map(|&g| ca.condition().gamma()[g].clone()).collect();
                let pca = Pca::single(ca.transducer().clone(), ca.condition().clone(), Some(names))?;
                let machine = GeneratedMachine::for_pca(&pca)?;
                let sum = (max_len + max_scc_depth(&pca) + 1) as u64;
                let lang = explore(&machine, max_len, sum, step_budget(max_len, machine.counters()))?;
                report.path = SolverPath::Automaton;
                report.truncated = !lang.is_exact();
                let words: BTreeSet<Vec<String>> = lang.word_set();
                for arr in enumerate_data_words(&prog.sigma, max_len) {
                    if words.contains(arr.tags()) && reaches(prog, &arr, target)? {
                        if !ca.accepts(&arr)? {
                            return Err(Error::Construction(format!("automaton rejects interpreter witness {arr}")));
                        }
                        report.witness = Some(arr);
                        break;
                    }
                }
                if report.witness.is_none() && !words.is_empty() {
                    return Err(Error::Construction("machine words have no interpreter witness".into()));
                }
                report.note = format!("{} counters, {} configurations", machine.counters(), lang.configurations);
                return Ok(report);
            }
            None if syntactic => {
                return Err(Error::Construction("0-priority program produced a condition that is not 0-priority".into()));
            }
            None => report.note = "class condition is not 0-priority".into(),
        }
    }
    for arr in enumerate_data_words(&prog.sigma, max_len) {
        if reaches(prog, &arr, target)? {
            report.witness = Some(arr);
            break;
        }
    }
    Ok(report)
}
