//! Class automata to multicounter automata, and PCA to priority multicounter
//! automata.
//!
//! A run of the generated machine simulates the abstract run of the
//! automaton: one counter per condition state, holding the number of data
//! values whose class word currently leads to that state. Reading a letter
//! `(σ, γ)` applies the functional graph of `(γ,0)` to all counters:
//! states on `(γ,0)`-cycles are renamed in the finite control, and the
//! remaining states are drained into their successors by transfer loops.
//!
//! Counter 1 is a scratch counter: every letter is read by `inc 1` and
//! immediately undone by `dec 1`, so the remaining work of the letter is
//! made of ε-steps.
//!
//! For PCAs the 0-acyclic states of each condition are kept in the finite
//! control as virtual counts, and the real counters are laid out stratum by
//! stratum so that every drain can end with a prefix zero test.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::classauto::{ClassAutomaton, Pca};
use crate::counters::{materialize, CounterMachine, CounterSystem, Instruction, Pma};
use crate::dataword::DataWord;
use crate::error::{Error, Result};
use crate::fsm::{ClassDfa, Transducer};
use crate::priority::{acyc_sets, analyze, strata};

/// One real counter of the layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayoutEntry {
    pub condition: String,
    /// 1-based stratum: `i` for `Acyc_i ∖ Acyc_{i-1}`, `l+1` for the rest.
    pub stratum: usize,
    pub state: String,
}

/// Real counters in machine order; counter `j` of the machine (0-based) is
/// entry `j - 1`, counter 0 being the scratch counter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounterLayout {
    pub entries: Vec<LayoutEntry>,
}

impl CounterLayout {
    pub fn position(&self, condition: &str, state: &str) -> Option<usize> {
        self.entries
            .iter()
            .position(|e| e.condition == condition && e.state == state)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("counter 1: scratch\n");
        for (i, e) in self.entries.iter().enumerate() {
            let _ = writeln!(out, "counter {}: {} stratum {} {}", i + 2, e.condition, e.stratum, e.state);
        }
        out
    }
}

/// Counter layout of a PCA: per condition the strata `Acyc_1`,
/// `Acyc_2 ∖ Acyc_1`, …, `Acyc_{l+1}`, names sorted inside a stratum,
/// conditions concatenated.
pub fn layout(pca: &Pca) -> CounterLayout {
    let mut entries = Vec::new();
    for b in pca.blocks() {
        let analysis = analyze(&b.condition);
        let acyc = acyc_sets(&analysis, &b.ordering).expect("pca blocks carry valid orderings");
        let st = strata(&acyc);
        let mut states: Vec<(usize, &String)> = b
            .condition
            .states()
            .iter()
            .enumerate()
            .filter_map(|(q, name)| st[q].map(|s| (s, name)))
            .collect();
        states.sort();
        entries.extend(states.into_iter().map(|(s, name)| LayoutEntry {
            condition: b.name.clone(),
            stratum: s + 1,
            state: name.clone(),
        }));
    }
    CounterLayout { entries }
}

/// Abstract configuration: transducer state, condition state of unseen
/// values and, per condition state, the number of data values in it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AbstractConfig {
    pub qg: usize,
    pub qc: usize,
    pub counts: Vec<u64>,
}

impl AbstractConfig {
    pub fn initial(transducer: &Transducer, cond: &ClassDfa) -> Self {
        AbstractConfig { qg: transducer.initial(), qc: cond.initial(), counts: vec![0; cond.num_states()] }
    }

    /// Sum of the counts over the states flagged in `which`.
    pub fn sum_over(&self, which: &[bool]) -> u64 {
        self.counts.iter().zip(which).filter(|(_, &w)| w).map(|(c, _)| c).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum AbstractChoice {
    /// The letter carries a data value not seen before.
    Fresh,
    /// The letter carries a value whose class word leads to this state.
    Old(usize),
}

/// One abstract step on input letter `sigma`, for every transducer move
/// whose output the condition reads (`letter_map`).
pub fn abstract_step(
    transducer: &Transducer,
    letter_map: &[Option<usize>],
    cond: &ClassDfa,
    cfg: &AbstractConfig,
    sigma: usize,
    choice: AbstractChoice,
) -> Vec<AbstractConfig> {
    let mut out = Vec::new();
    let mut base = cfg.counts.clone();
    let src = match choice {
        AbstractChoice::Fresh => cfg.qc,
        AbstractChoice::Old(q) => {
            if base[q] == 0 {
                return out;
            }
            base[q] -= 1;
            q
        }
    };
    for &(gamma, qg2) in transducer.step(cfg.qg, sigma) {
        let Some(c) = letter_map[gamma] else { continue };
        let mut counts = vec![0; cond.num_states()];
        for (q, &n) in base.iter().enumerate() {
            counts[cond.zero(q, c)] += n;
        }
        counts[cond.one(src, c)] += 1;
        let next = AbstractConfig { qg: qg2, qc: cond.zero(cfg.qc, c), counts };
        if !out.contains(&next) {
            out.push(next);
        }
    }
    out
}

/// Outcome of simulating every run of a PCA on one data word.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SimulationReport {
    pub steps: usize,
    /// Largest number of values in 0-acyclic states seen in any block.
    pub max_virtual: u64,
    /// Cases where the count exceeded the SCC depth of its condition.
    pub bound_violations: usize,
    /// Cases where the counting abstraction disagreed with the exact run.
    pub abstraction_mismatches: usize,
    pub accepted: bool,
}

/// Runs the exact per-value semantics of every block on `dw`, checking at
/// each step that the counting abstraction of the exact run is produced by
/// [`abstract_step`] and that the 0-acyclic population stays within the
/// SCC depth.
pub fn simulate(pca: &Pca, dw: &DataWord) -> Result<SimulationReport> {
    let t = pca.transducer();
    let input = t.encode_input(dw.tags())?;
    let ids = dw.class_ids();
    let n_values = ids.iter().max().map_or(0, |m| m + 1);
    let mut report = SimulationReport::default();
    for (bi, b) in pca.blocks().iter().enumerate() {
        let cond = &b.condition;
        let analysis = analyze(cond);
        let acyclic: Vec<bool> = (0..cond.num_states()).map(|q| !analysis.is_zero_cyclic(q)).collect();
        let cap = analysis.scc_depth() as u64;
        let map: Vec<Option<usize>> = (0..t.output().len()).map(|g| pca.blocks()[bi].condition_letter(g)).collect();
        // exact state: transducer state, per-value condition state (None = unseen)
        let mut frontier: HashSet<(usize, Vec<Option<usize>>, usize)> = HashSet::new();
        frontier.insert((t.initial(), vec![None; n_values], cond.initial()));
        for (&sigma, &value) in input.iter().zip(&ids) {
            let mut next = HashSet::new();
            for (qg, states, qc) in &frontier {
                let abs = abstraction(cond, *qg, states, *qc);
                let choice = match states[value] {
                    None => AbstractChoice::Fresh,
                    Some(q) => AbstractChoice::Old(q),
                };
                let abstract_next = abstract_step(t, &map, cond, &abs, sigma, choice);
                for &(gamma, qg2) in t.step(*qg, sigma) {
                    let Some(c) = map[gamma] else { continue };
                    let moved: Vec<Option<usize>> = states
                        .iter()
                        .enumerate()
                        .map(|(v, s)| match (v == value, *s) {
                            (true, None) => Some(cond.one(*qc, c)),
                            (true, Some(q)) => Some(cond.one(q, c)),
                            (false, s) => s.map(|q| cond.zero(q, c)),
                        })
                        .collect();
                    let qc2 = cond.zero(*qc, c);
                    let exact = abstraction(cond, qg2, &moved, qc2);
                    if !abstract_next.contains(&exact) {
                        report.abstraction_mismatches += 1;
                    }
                    let virt = exact.sum_over(&acyclic);
                    report.max_virtual = report.max_virtual.max(virt);
                    if virt > cap {
                        report.bound_violations += 1;
                    }
                    report.steps += 1;
                    next.insert((qg2, moved, qc2));
                }
            }
            frontier = next;
        }
        report.accepted |= frontier.iter().any(|(qg, states, _)| {
            t.is_accepting(*qg) && states.iter().flatten().all(|&q| cond.is_accepting(q))
        });
    }
    Ok(report)
}

fn abstraction(cond: &ClassDfa, qg: usize, states: &[Option<usize>], qc: usize) -> AbstractConfig {
    let mut counts = vec![0; cond.num_states()];
    for &q in states.iter().flatten() {
        counts[q] += 1;
    }
    AbstractConfig { qg, qc, counts }
}

// ---------------------------------------------------------------------------
// generated machines

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DrainTest {
    Single,
    Prefix,
}

#[derive(Debug, Clone)]
struct ModePlan {
    name: String,
    cond: ClassDfa,
    map: Vec<Option<usize>>,
    real: Vec<bool>,
    initial_perm: Vec<u16>,
    // per condition letter: states drained by transfer loops, in a fixed
    // order (multicounter case) or to be sorted by physical counter (PMA)
    drains: Vec<Vec<usize>>,
    cyclic: Vec<Vec<bool>>,
    cap: usize,
    test: DrainTest,
    sorted_by_counter: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Choice {
    Fresh,
    OldReal(u16),
    OldVirtual(u16),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MainState {
    mode: u16,
    qg: u32,
    qc: u32,
    virt: Vec<u8>,
    perm: Vec<u16>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AuxState {
    from: Box<MainState>,
    trans: u32,
    choice: Choice,
    pc: u16,
    mid: bool,
}

/// Control state of a generated machine.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Control {
    Start,
    Main(MainState),
    Aux(AuxState),
    Final { mode: u16, perm: Vec<u16> },
    Accept,
}

#[derive(Debug, Clone)]
enum Op {
    Do(Instruction),
    Drain { from: usize, to: usize, test: Instruction },
}

struct Block {
    ops: Vec<Op>,
    target: MainState,
}

/// Lazily generated counter machine for a class automaton or a PCA.
#[derive(Debug, Clone)]
pub struct GeneratedMachine {
    transducer: Transducer,
    // transducer moves as (σ, γ, target) per source state
    moves: Vec<Vec<(usize, usize, usize)>>,
    modes: Vec<ModePlan>,
    counters: usize,
    layout: CounterLayout,
}

impl GeneratedMachine {
    /// Multicounter automaton with plain zero tests for a class automaton.
    pub fn for_class_automaton(ca: &ClassAutomaton) -> Result<Self> {
        let cond = ca.condition().clone();
        let n = cond.num_states();
        let k = cond.num_letters();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| cond.states()[a].cmp(&cond.states()[b]));
        let mut initial_perm = vec![0u16; n];
        for (pos, &q) in order.iter().enumerate() {
            initial_perm[q] = (pos + 1) as u16;
        }
        let mut drains = Vec::new();
        let mut cyclic = Vec::new();
        for c in 0..k {
            let f: Vec<usize> = (0..n).map(|q| cond.zero(q, c)).collect();
            let on_cycle = cycle_members(&f);
            // distance to the cycle of the component
            let depth: Vec<usize> = (0..n)
                .map(|q| {
                    let mut d = 0;
                    let mut p = q;
                    while !on_cycle[p] {
                        p = f[p];
                        d += 1;
                    }
                    d
                })
                .collect();
            let mut tree: Vec<usize> = (0..n).filter(|&q| !on_cycle[q]).collect();
            tree.sort_by(|&a, &b| depth[a].cmp(&depth[b]).then(cond.states()[a].cmp(&cond.states()[b])));
            drains.push(tree);
            cyclic.push(on_cycle);
        }
        let entries = order
            .iter()
            .map(|&q| LayoutEntry { condition: "C".into(), stratum: 1, state: cond.states()[q].clone() })
            .collect();
        let mode = ModePlan {
            name: "C".into(),
            map: ca.letter_map().into_iter().map(Some).collect(),
            real: vec![true; n],
            initial_perm,
            drains,
            cyclic,
            cap: 0,
            test: DrainTest::Single,
            sorted_by_counter: false,
            cond,
        };
        Ok(Self::assemble(ca.transducer().clone(), vec![mode], 1 + n, CounterLayout { entries }))
    }

    /// Priority multicounter automaton for a PCA.
    pub fn for_pca(pca: &Pca) -> Result<Self> {
        Self::pca_with_tests(pca, DrainTest::Prefix)
    }

    /// The PCA machine with every drain test replaced by a test of the
    /// drained counter alone.
    pub fn shadow_for_pca(pca: &Pca) -> Result<Self> {
        Self::pca_with_tests(pca, DrainTest::Single)
    }

    fn pca_with_tests(pca: &Pca, test: DrainTest) -> Result<Self> {
        let lay = layout(pca);
        let t = pca.transducer();
        let mut modes = Vec::new();
        for b in pca.blocks() {
            let cond = b.condition.clone();
            let n = cond.num_states();
            let analysis = analyze(&cond);
            if !analysis.ordering_is_valid(&b.ordering) {
                return Err(Error::Construction(format!("condition {} is not 0-priority", b.name)));
            }
            let real: Vec<bool> = (0..n).map(|q| analysis.is_zero_cyclic(q)).collect();
            let mut initial_perm = vec![u16::MAX; n];
            for q in (0..n).filter(|&q| real[q]) {
                let pos = lay
                    .position(&b.name, &cond.states()[q])
                    .ok_or_else(|| Error::Construction(format!("state {} missing from layout", cond.states()[q])))?;
                initial_perm[q] = (pos + 1) as u16;
            }
            let mut drains = Vec::new();
            let mut cyclic = Vec::new();
            for c in 0..cond.num_letters() {
                let cyc: Vec<bool> = (0..n).map(|q| analysis.is_gamma_cyclic(c, q)).collect();
                let acyc: Vec<usize> = (0..n).filter(|&q| real[q] && !cyc[q]).collect();
                for &x in &acyc {
                    let y = cond.zero(x, c);
                    if !real[y] || acyc.contains(&y) {
                        return Err(Error::Construction(format!(
                            "condition {}: ({} ,0)-successor of {} breaks the stratum order",
                            b.name,
                            cond.gamma()[c],
                            cond.states()[x]
                        )));
                    }
                }
                drains.push(acyc);
                cyclic.push(cyc);
            }
            let map = (0..t.output().len()).map(|g| b.condition_letter(g)).collect();
            modes.push(ModePlan {
                name: b.name.clone(),
                map,
                real,
                initial_perm,
                drains,
                cyclic,
                cap: analysis.scc_depth(),
                test,
                sorted_by_counter: true,
                cond,
            });
        }
        let counters = 1 + lay.entries.len();
        Ok(Self::assemble(t.clone(), modes, counters, lay))
    }

    fn assemble(transducer: Transducer, modes: Vec<ModePlan>, counters: usize, layout: CounterLayout) -> Self {
        let mut moves = vec![Vec::new(); transducer.num_states()];
        for (p, s, g, q) in transducer.edges() {
            moves[p].push((s, g, q));
        }
        GeneratedMachine { transducer, moves, modes, counters, layout }
    }

    pub fn layout(&self) -> &CounterLayout {
        &self.layout
    }

    fn initial_main(&self, mode: usize) -> MainState {
        let m = &self.modes[mode];
        MainState {
            mode: mode as u16,
            qg: self.transducer.initial() as u32,
            qc: m.cond.initial() as u32,
            virt: vec![0; m.cond.num_states()],
            perm: m.initial_perm.clone(),
        }
    }

    fn choices(&self, main: &MainState, fresh_only: bool) -> Vec<Choice> {
        let m = &self.modes[main.mode as usize];
        let mut out = vec![Choice::Fresh];
        if fresh_only {
            return out;
        }
        for q in 0..m.cond.num_states() {
            if m.real[q] {
                out.push(Choice::OldReal(q as u16));
            } else if main.virt[q] > 0 {
                out.push(Choice::OldVirtual(q as u16));
            }
        }
        out
    }

    fn block(&self, main: &MainState, trans: usize, choice: Choice) -> Result<Block> {
        let m = &self.modes[main.mode as usize];
        let (_, gamma, qg2) = self.moves[main.qg as usize][trans];
        let c = m.map[gamma].expect("move belongs to this mode");
        let cond = &m.cond;
        let n = cond.num_states();
        let mut ops = vec![Op::Do(Instruction::Inc(0)), Op::Do(Instruction::Dec(0))];
        let mut virt = main.virt.clone();
        let src = match choice {
            Choice::Fresh => main.qc as usize,
            Choice::OldReal(q) => {
                ops.push(Op::Do(Instruction::Dec(main.perm[q as usize] as usize)));
                q as usize
            }
            Choice::OldVirtual(q) => {
                virt[q as usize] -= 1;
                q as usize
            }
        };
        let f = |q: usize| cond.zero(q, c);
        let mut perm = main.perm.clone();
        for q in 0..n {
            if m.real[q] && m.cyclic[c][q] {
                perm[f(q)] = main.perm[q];
            }
        }
        let mut drained = m.drains[c].clone();
        if m.sorted_by_counter {
            drained.sort_by_key(|&x| main.perm[x]);
        }
        for &x in &drained {
            let from = main.perm[x] as usize;
            let test = match m.test {
                DrainTest::Single => Instruction::Ifz(from),
                DrainTest::Prefix => Instruction::IfzPrefix(from),
            };
            ops.push(Op::Drain { from, to: perm[f(x)] as usize, test });
        }
        let mut next_virt = vec![0u8; n];
        for p in 0..n {
            if virt[p] == 0 {
                continue;
            }
            if m.real[f(p)] {
                for _ in 0..virt[p] {
                    ops.push(Op::Do(Instruction::Inc(perm[f(p)] as usize)));
                }
            } else {
                next_virt[f(p)] += virt[p];
            }
        }
        let p1 = cond.one(src, c);
        if m.real[p1] {
            ops.push(Op::Do(Instruction::Inc(perm[p1] as usize)));
        } else {
            next_virt[p1] += 1;
        }
        let total: usize = next_virt.iter().map(|&v| v as usize).sum();
        if total > m.cap {
            return Err(Error::Construction(format!(
                "condition {}: {} values in 0-acyclic states exceed the SCC depth {}",
                m.name, total, m.cap
            )));
        }
        Ok(Block {
            ops,
            target: MainState { mode: main.mode, qg: qg2 as u32, qc: f(main.qc as usize) as u32, virt: next_virt, perm },
        })
    }

    fn letter_moves(&self, main: &MainState, fresh_only: bool) -> Vec<(Option<usize>, Instruction, Control)> {
        let m = &self.modes[main.mode as usize];
        let mut out = Vec::new();
        for (ti, &(sigma, gamma, _)) in self.moves[main.qg as usize].iter().enumerate() {
            if m.map[gamma].is_none() {
                continue;
            }
            for choice in self.choices(main, fresh_only) {
                let aux = AuxState { from: Box::new(main.clone()), trans: ti as u32, choice, pc: 1, mid: false };
                out.push((Some(sigma), Instruction::Inc(0), Control::Aux(aux)));
            }
        }
        out
    }

    fn accept_moves(&self, mode: u16, perm: &[u16]) -> Vec<(Option<usize>, Instruction, Control)> {
        let m = &self.modes[mode as usize];
        let mut out = Vec::new();
        for q in 0..m.cond.num_states() {
            if m.real[q] && m.cond.is_accepting(q) {
                out.push((None, Instruction::Dec(perm[q] as usize), Control::Final { mode, perm: perm.to_vec() }));
            }
        }
        out.push((None, Instruction::IfzPrefix(self.counters - 1), Control::Accept));
        out
    }
}

fn cycle_members(f: &[usize]) -> Vec<bool> {
    let n = f.len();
    let mut on = vec![false; n];
    for s in 0..n {
        let mut q = s;
        for _ in 0..n {
            q = f[q];
        }
        let entry = q;
        loop {
            on[q] = true;
            q = f[q];
            if q == entry {
                break;
            }
        }
    }
    on
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".")
}

fn main_name(m: &MainState) -> String {
    format!("m{}_g{}_c{}_v{}_p{}", m.mode + 1, m.qg, m.qc, join(&m.virt), join(&m.perm))
}

impl CounterSystem for GeneratedMachine {
    type State = Control;

    fn alphabet(&self) -> &[String] {
        self.transducer.input()
    }

    fn counters(&self) -> usize {
        self.counters
    }

    fn initial(&self) -> Control {
        Control::Start
    }

    fn is_accepting(&self, s: &Control) -> bool {
        matches!(s, Control::Accept)
    }

    fn transitions(&self, s: &Control) -> Result<Vec<(Option<usize>, Instruction, Control)>> {
        Ok(match s {
            Control::Start => (0..self.modes.len())
                .flat_map(|mode| self.letter_moves(&self.initial_main(mode), true))
                .collect(),
            Control::Main(main) => {
                let mut out = self.letter_moves(main, false);
                let m = &self.modes[main.mode as usize];
                let virtual_ok = (0..m.cond.num_states()).all(|q| main.virt[q] == 0 || m.cond.is_accepting(q));
                if self.transducer.is_accepting(main.qg as usize) && virtual_ok {
                    out.extend(self.accept_moves(main.mode, &main.perm));
                }
                out
            }
            Control::Final { mode, perm } => self.accept_moves(*mode, perm),
            Control::Accept => Vec::new(),
            Control::Aux(aux) => {
                let block = self.block(&aux.from, aux.trans as usize, aux.choice)?;
                let pc = aux.pc as usize;
                let next = |pc: usize| {
                    if pc >= block.ops.len() {
                        Control::Main(block.target.clone())
                    } else {
                        Control::Aux(AuxState { pc: pc as u16, mid: false, ..aux.clone() })
                    }
                };
                match &block.ops[pc] {
                    Op::Do(instr) => vec![(None, *instr, next(pc + 1))],
                    Op::Drain { from, to, test } => {
                        if aux.mid {
                            vec![(None, Instruction::Inc(*to), Control::Aux(AuxState { mid: false, ..aux.clone() }))]
                        } else {
                            vec![
                                (None, Instruction::Dec(*from), Control::Aux(AuxState { mid: true, ..aux.clone() })),
                                (None, *test, next(pc + 1)),
                            ]
                        }
                    }
                }
            }
        })
    }

    fn state_name(&self, s: &Control) -> String {
        match s {
            Control::Start => "start".into(),
            Control::Accept => "acc".into(),
            Control::Main(m) => main_name(m),
            Control::Final { mode, perm } => format!("f{}_p{}", mode + 1, join(perm)),
            Control::Aux(a) => {
                let choice = match a.choice {
                    Choice::Fresh => "new".to_string(),
                    Choice::OldReal(q) => format!("r{q}"),
                    Choice::OldVirtual(q) => format!("v{q}"),
                };
                format!(
                    "x{}{}_t{}_{}_{}",
                    a.pc,
                    if a.mid { "b" } else { "a" },
                    a.trans,
                    choice,
                    main_name(&a.from)
                )
            }
        }
    }
}

/// Explicit multicounter automaton with `L = str(L(ca))`.
pub fn ca_to_mca(ca: &ClassAutomaton) -> Result<CounterMachine> {
    materialize(&GeneratedMachine::for_class_automaton(ca)?)
}

/// Explicit priority multicounter automaton with `L = str(L(pca))`.
pub fn pca_to_pma(pca: &Pca) -> Result<Pma> {
    let m = materialize(&GeneratedMachine::for_pca(pca)?)?;
    Pma::try_from(m).map_err(|_| Error::Construction("generated machine uses plain zero tests".into()))
}

/// Outcome of running the shadow machine, whose drains test single counters.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ShadowReport {
    pub drain_tests: usize,
    /// Drain tests where some counter before the tested one was nonzero.
    pub mismatches: usize,
    pub configurations: usize,
}

/// Explores the shadow machine up to the given bounds and checks, at every
/// executed drain test, that all counters before the tested one are zero,
/// i.e. that the prefix test of the real machine would behave the same.
pub fn shadow_check(pca: &Pca, word_bound: usize, sum_bound: u64, step_bound: usize) -> Result<ShadowReport> {
    let m = GeneratedMachine::shadow_for_pca(pca)?;
    let mut report = ShadowReport::default();
    let mut seen: HashMap<(Control, Vec<u64>, usize), usize> = HashMap::new();
    let mut queue = vec![(Control::Start, vec![0u64; m.counters], 0usize, 0usize)];
    seen.insert((Control::Start, vec![0; m.counters], 0), 0);
    let mut head = 0;
    while head < queue.len() {
        let (state, counters, read, depth) = queue[head].clone();
        head += 1;
        if depth >= step_bound {
            continue;
        }
        for (letter, instr, target) in m.transitions(&state)? {
            let Some(next) = instr.apply(&counters) else { continue };
            if let Instruction::Ifz(x) = instr {
                report.drain_tests += 1;
                if counters[..x].iter().any(|&v| v != 0) {
                    report.mismatches += 1;
                }
            }
            let read2 = read + usize::from(letter.is_some());
            if read2 > word_bound || next.iter().sum::<u64>() > sum_bound {
                continue;
            }
            let key = (target.clone(), next.clone(), read2);
            if seen.contains_key(&key) {
                continue;
            }
            seen.insert(key, queue.len());
            queue.push((target, next, read2, depth + 1));
        }
    }
    report.configurations = queue.len();
    Ok(report)
}

/// Step budget used by the differential tests: `50·(n+1)·(k+1)`.
pub fn step_budget(word_bound: usize, counters: usize) -> usize {
    50 * (word_bound + 1) * (counters + 1)
}

/// Largest SCC depth among the conditions of a PCA.
pub fn max_scc_depth(pca: &Pca) -> usize {
    pca.blocks()
        .iter()
        .map(|b| analyze(&b.condition).scc_depth())
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests;
