//! Zero-transition analysis of class conditions.
//!
//! For a complete deterministic condition over `Γ × {0,1}` this module builds
//! the graph `G0` of all zero-transitions and the functional graphs of the
//! individual `(γ,0)` letters, classifies states as 0-cyclic and
//! `(γ,0)`-cyclic, detects `((γ1,0),(γ2,0))`-patterns and decides whether a
//! letter ordering exists under which no pattern `(γi,γj)` with `i ≥ j`
//! occurs.
//!
//! Letters whose zero-columns coincide behave identically in every pattern
//! question, so pattern existence is computed once per distinct column.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fsm::{reach_from, ClassDfa};

#[derive(Debug, Clone)]
pub struct PriorityAnalysis {
    states: Vec<String>,
    letters: Vec<String>,
    // zero[γ][q] = δ(q, (γ,0))
    zero: Vec<Vec<usize>>,
    g0: Vec<Vec<usize>>,
    scc_of: Vec<usize>,
    zero_cyclic: Vec<bool>,
    // gamma_cyclic[γ][q]
    gamma_cyclic: Vec<Vec<bool>>,
    scc_depth: usize,
    // letter -> id of its zero column
    column_of: Vec<usize>,
    column_rep: Vec<usize>,
    // column_patterns[c1][c2]
    column_patterns: Vec<Vec<bool>>,
}

/// A `((γ1,0),(γ2,0))`-pattern `q1 →(γ1,0) q2 →*₀ q3 →(γ2,0) q4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PatternWitness {
    pub q1: usize,
    pub q2: usize,
    pub q3: usize,
    pub q4: usize,
    pub gamma1: usize,
    pub gamma2: usize,
}

fn functional_cycle_members(f: &[usize]) -> Vec<bool> {
    // q is cyclic iff f^k(q) = q for some k ≥ 1; after n steps every walk is on its cycle
    let n = f.len();
    let mut on_cycle = vec![false; n];
    for start in 0..n {
        let mut q = start;
        for _ in 0..n {
            q = f[q];
        }
        let entry = q;
        loop {
            on_cycle[q] = true;
            q = f[q];
            if q == entry {
                break;
            }
        }
    }
    on_cycle
}

pub fn analyze(dfa: &ClassDfa) -> PriorityAnalysis {
    let n = dfa.num_states();
    let k = dfa.num_letters();
    let zero: Vec<Vec<usize>> = (0..k)
        .map(|g| (0..n).map(|q| dfa.zero(q, g)).collect())
        .collect();

    let mut g0: Vec<Vec<usize>> = (0..n)
        .map(|q| zero.iter().map(|col| col[q]).collect())
        .collect();
    for succ in &mut g0 {
        succ.sort_unstable();
        succ.dedup();
    }

    let mut graph = DiGraph::<(), ()>::with_capacity(n, n * k);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for (q, succ) in g0.iter().enumerate() {
        for &t in succ {
            graph.add_edge(nodes[q], nodes[t], ());
        }
    }
    // tarjan_scc yields components in reverse topological order
    let sccs = tarjan_scc(&graph);
    let mut scc_of = vec![0; n];
    for (c, comp) in sccs.iter().enumerate() {
        for node in comp {
            scc_of[node.index()] = c;
        }
    }
    let zero_cyclic: Vec<bool> = (0..n)
        .map(|q| sccs[scc_of[q]].len() > 1 || g0[q].contains(&q))
        .collect();
    let mut depth = vec![0usize; sccs.len()];
    for (c, comp) in sccs.iter().enumerate() {
        for node in comp {
            for &t in &g0[node.index()] {
                let d = scc_of[t];
                if d != c {
                    depth[c] = depth[c].max(depth[d] + 1);
                }
            }
        }
    }
    let scc_depth = depth.iter().copied().max().unwrap_or(0);

    let gamma_cyclic = zero.iter().map(|f| functional_cycle_members(f)).collect();

    let mut column_ids: HashMap<&Vec<usize>, usize> = HashMap::new();
    let mut column_rep = Vec::new();
    let column_of: Vec<usize> = zero
        .iter()
        .enumerate()
        .map(|(g, col)| {
            *column_ids.entry(col).or_insert_with(|| {
                column_rep.push(g);
                column_rep.len() - 1
            })
        })
        .collect();

    let mut analysis = PriorityAnalysis {
        states: dfa.states().to_vec(),
        letters: dfa.gamma().to_vec(),
        zero,
        g0,
        scc_of,
        zero_cyclic,
        gamma_cyclic,
        scc_depth,
        column_of,
        column_rep,
        column_patterns: Vec::new(),
    };
    analysis.column_patterns = analysis
        .column_rep
        .iter()
        .map(|&g1| {
            let reach = analysis.zero_reach(
                (0..n)
                    .filter(|&q| analysis.zero_cyclic[q])
                    .map(|q| analysis.zero[g1][q]),
            );
            analysis
                .column_rep
                .iter()
                .map(|&g2| (0..n).any(|q| reach[q] && !analysis.gamma_cyclic[g2][q]))
                .collect()
        })
        .collect();
    analysis
}

impl PriorityAnalysis {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_letters(&self) -> usize {
        self.letters.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn letter_names(&self) -> &[String] {
        &self.letters
    }

    pub fn zero_successor(&self, q: usize, gamma: usize) -> usize {
        self.zero[gamma][q]
    }

    pub fn g0_successors(&self, q: usize) -> &[usize] {
        &self.g0[q]
    }

    pub fn scc_of(&self, q: usize) -> usize {
        self.scc_of[q]
    }

    pub fn is_zero_cyclic(&self, q: usize) -> bool {
        self.zero_cyclic[q]
    }

    pub fn zero_cyclic(&self) -> &[bool] {
        &self.zero_cyclic
    }

    pub fn is_gamma_cyclic(&self, gamma: usize, q: usize) -> bool {
        self.gamma_cyclic[gamma][q]
    }

    /// Longest path, in arcs, of the condensation of `G0`.
    pub fn scc_depth(&self) -> usize {
        self.scc_depth
    }

    /// States reachable in `G0` from `sources` (zero steps included).
    pub fn zero_reach(&self, sources: impl IntoIterator<Item = usize>) -> Vec<bool> {
        reach_from(self.num_states(), sources, |q| self.g0[q].clone())
    }

    pub fn has_pattern(&self, gamma1: usize, gamma2: usize) -> bool {
        self.column_patterns[self.column_of[gamma1]][self.column_of[gamma2]]
    }

    /// The lexicographically smallest `((γ1,0),(γ2,0))`-pattern by state names.
    pub fn find_pattern(&self, gamma1: usize, gamma2: usize) -> Option<PatternWitness> {
        if !self.has_pattern(gamma1, gamma2) {
            return None;
        }
        let mut q1s: Vec<usize> = (0..self.num_states()).filter(|&q| self.zero_cyclic[q]).collect();
        q1s.sort_by(|&a, &b| self.states[a].cmp(&self.states[b]));
        for q1 in q1s {
            let q2 = self.zero[gamma1][q1];
            let reach = self.zero_reach([q2]);
            let q3 = (0..self.num_states())
                .filter(|&q| reach[q] && !self.gamma_cyclic[gamma2][q])
                .min_by(|&a, &b| self.states[a].cmp(&self.states[b]));
            if let Some(q3) = q3 {
                return Some(PatternWitness {
                    q1,
                    q2,
                    q3,
                    q4: self.zero[gamma2][q3],
                    gamma1,
                    gamma2,
                });
            }
        }
        None
    }

    /// All letter pairs with a pattern, each with its smallest witness.
    pub fn pattern_relation(&self) -> Vec<PatternWitness> {
        let mut by_columns: HashMap<(usize, usize), PatternWitness> = HashMap::new();
        let mut out = Vec::new();
        for g1 in 0..self.num_letters() {
            for g2 in 0..self.num_letters() {
                if !self.has_pattern(g1, g2) {
                    continue;
                }
                let key = (self.column_of[g1], self.column_of[g2]);
                let w = *by_columns.entry(key).or_insert_with(|| {
                    self.find_pattern(g1, g2).expect("pattern exists for this column pair")
                });
                out.push(PatternWitness {
                    gamma1: g1,
                    gamma2: g2,
                    ..w
                });
            }
        }
        out
    }

    /// True iff no pattern `(γi, γj)` with `i ≥ j` exists under `ordering`.
    pub fn ordering_is_valid(&self, ordering: &[usize]) -> bool {
        let mut seen = vec![false; self.num_letters()];
        if ordering.len() != self.num_letters() || ordering.iter().any(|&g| std::mem::replace(&mut seen[g], true)) {
            return false;
        }
        ordering.iter().enumerate().all(|(i, &gi)| {
            ordering[..=i].iter().all(|&gj| !self.has_pattern(gi, gj))
        })
    }

    pub fn format_witness(&self, w: &PatternWitness) -> String {
        format!(
            "({},{},{},{}) for (({},0),({},0))",
            self.states[w.q1],
            self.states[w.q2],
            self.states[w.q3],
            self.states[w.q4],
            self.letters[w.gamma1],
            self.letters[w.gamma2]
        )
    }
}

/// Result of the 0-priority decision.
#[derive(Debug, Clone, Serialize)]
pub struct PriorityVerdict {
    pub is_zero_priority: bool,
    /// Letter indices, first to last priority.
    pub ordering: Option<Vec<usize>>,
    pub pattern_relation: Vec<PatternWitness>,
    /// No `((γ,0),(γ,0))`-pattern for any `γ`.
    pub no_self_patterns: bool,
    /// No pair of distinct letters with patterns in both directions.
    pub no_symmetric_patterns: bool,
}

impl PriorityVerdict {
    /// Verdict of the pairwise characterization.
    pub fn pairwise_verdict(&self) -> bool {
        self.no_self_patterns && self.no_symmetric_patterns
    }

    /// True when the pairwise characterization disagrees with the ordering search.
    pub fn pairwise_discrepancy(&self) -> bool {
        self.pairwise_verdict() != self.is_zero_priority
    }
}

/// Decides the 0-priority property: the pattern relation must be irreflexive
/// and acyclic; the ordering is its topological sort with ties broken by
/// letter name.
pub fn decide_zero_priority(dfa: &ClassDfa) -> PriorityVerdict {
    decide_with(&analyze(dfa))
}

pub fn decide_with(analysis: &PriorityAnalysis) -> PriorityVerdict {
    let k = analysis.num_letters();
    let relation = analysis.pattern_relation();
    let no_self_patterns = (0..k).all(|g| !analysis.has_pattern(g, g));
    let no_symmetric_patterns = (0..k).all(|a| {
        (0..k).all(|b| a == b || !(analysis.has_pattern(a, b) && analysis.has_pattern(b, a)))
    });

    let ordering = if no_self_patterns {
        // pattern (x, y) forces x before y
        let mut indegree = vec![0usize; k];
        for w in &relation {
            indegree[w.gamma2] += 1;
        }
        let mut ready: BinaryHeap<Reverse<(&str, usize)>> = (0..k)
            .filter(|&g| indegree[g] == 0)
            .map(|g| Reverse((analysis.letters[g].as_str(), g)))
            .collect();
        let mut order = Vec::with_capacity(k);
        while let Some(Reverse((_, g))) = ready.pop() {
            order.push(g);
            for w in relation.iter().filter(|w| w.gamma1 == g) {
                indegree[w.gamma2] -= 1;
                if indegree[w.gamma2] == 0 {
                    ready.push(Reverse((analysis.letters[w.gamma2].as_str(), w.gamma2)));
                }
            }
        }
        (order.len() == k).then_some(order)
    } else {
        None
    };
    PriorityVerdict {
        is_zero_priority: ordering.is_some(),
        ordering,
        pattern_relation: relation,
        no_self_patterns,
        no_symmetric_patterns,
    }
}

/// `Acyc_1 … Acyc_{l+1}` for an ordering `γ1 … γl`: `Acyc_i` holds the
/// 0-cyclic states that are `(γi,0)`-acyclic and `Acyc_{l+1}` the remaining
/// 0-cyclic states.
pub fn acyc_sets(analysis: &PriorityAnalysis, ordering: &[usize]) -> Result<Vec<Vec<bool>>> {
    if !analysis.ordering_is_valid(ordering) {
        return Err(Error::Contract(
            "acyc sets requested for an ordering that does not witness the 0-priority property".into(),
        ));
    }
    let n = analysis.num_states();
    let mut sets: Vec<Vec<bool>> = ordering
        .iter()
        .map(|&g| {
            (0..n)
                .map(|q| analysis.zero_cyclic[q] && !analysis.gamma_cyclic[g][q])
                .collect()
        })
        .collect();
    let last = (0..n)
        .map(|q| analysis.zero_cyclic[q] && !sets.iter().any(|s| s[q]))
        .collect();
    sets.push(last);
    Ok(sets)
}

/// Stratum of each 0-cyclic state: the least `i` (0-based) with the state in
/// `Acyc_{i+1}`, or `l` for `Acyc_{l+1}`. `None` for 0-acyclic states.
pub fn strata(acyc: &[Vec<bool>]) -> Vec<Option<usize>> {
    let n = acyc.first().map_or(0, Vec::len);
    (0..n)
        .map(|q| acyc.iter().position(|s| s[q]))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructuralReport {
    pub checks: Vec<PropertyCheck>,
}

impl StructuralReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Re-verifies, by enumeration, the structural consequences of the
/// 0-priority property. Failures are reported, never raised.
pub fn check_structural_props(analysis: &PriorityAnalysis, verdict: &PriorityVerdict) -> StructuralReport {
    let n = analysis.num_states();
    let k = analysis.num_letters();
    let name = |q: usize| analysis.states[q].clone();
    let mut checks = Vec::new();

    // zero successors of 0-cyclic states are cyclic for that letter
    let mut cex = None;
    'outer: for q1 in (0..n).filter(|&q| analysis.zero_cyclic[q]) {
        for g in 0..k {
            let q2 = analysis.zero[g][q1];
            if !analysis.gamma_cyclic[g][q2] {
                cex = Some(format!("{} -({},0)-> {}", name(q1), analysis.letters[g], name(q2)));
                break 'outer;
            }
        }
    }
    checks.push(PropertyCheck { name: "zero-successor-cyclic", passed: cex.is_none(), counterexample: cex });

    // every state of a nontrivial SCC is cyclic for each letter labelling an arc inside it
    let mut cex = None;
    'outer2: for q in (0..n).filter(|&q| analysis.zero_cyclic[q]) {
        for g in 0..k {
            let t = analysis.zero[g][q];
            if analysis.scc_of[t] != analysis.scc_of[q] {
                continue;
            }
            if let Some(bad) = (0..n).find(|&p| analysis.scc_of[p] == analysis.scc_of[q] && !analysis.gamma_cyclic[g][p]) {
                cex = Some(format!("{} in SCC of {} is ({},0)-acyclic", name(bad), name(q), analysis.letters[g]));
                break 'outer2;
            }
        }
    }
    checks.push(PropertyCheck { name: "scc-letters-cyclic", passed: cex.is_none(), counterexample: cex });

    // no 0-acyclic state is G0-reachable from a 0-cyclic state
    let reach = analysis.zero_reach((0..n).filter(|&q| analysis.zero_cyclic[q]));
    let cex = (0..n).find(|&q| reach[q] && !analysis.zero_cyclic[q]).map(name);
    checks.push(PropertyCheck { name: "cyclic-closure", passed: cex.is_none(), counterexample: cex });

    let (monotone, successor) = match verdict.ordering.as_deref().map(|o| (o, acyc_sets(analysis, o))) {
        Some((ordering, Ok(acyc))) => {
            let l = ordering.len();
            let mut mono = None;
            for i in 0..l.saturating_sub(1) {
                if let Some(q) = (0..n).find(|&q| acyc[i][q] && !acyc[i + 1][q]) {
                    mono = Some(format!("{} in Acyc_{} but not Acyc_{}", name(q), i + 1, i + 2));
                    break;
                }
            }
            let mut succ = None;
            'outer3: for (i, &g) in ordering.iter().enumerate() {
                for q in (0..n).filter(|&q| acyc[i][q]) {
                    let t = analysis.zero[g][q];
                    let later = (i + 1..=l).any(|j| acyc[j][t]);
                    if acyc[i][t] || !later {
                        succ = Some(format!("{} -({},0)-> {}", name(q), analysis.letters[g], name(t)));
                        break 'outer3;
                    }
                }
            }
            (mono, succ)
        }
        _ => (
            Some("no valid ordering".to_string()),
            Some("no valid ordering".to_string()),
        ),
    };
    checks.push(PropertyCheck { name: "acyc-monotone", passed: monotone.is_none(), counterexample: monotone });
    checks.push(PropertyCheck { name: "acyc-successor", passed: successor.is_none(), counterexample: successor });
    StructuralReport { checks }
}

/// Serializable summary of the whole analysis.
#[derive(Debug, Clone, Serialize)]
pub struct PriorityReport {
    pub zero_priority: bool,
    pub ordering: Option<Vec<String>>,
    pub zero_cyclic: Vec<String>,
    pub gamma_cyclic: BTreeMap<String, Vec<String>>,
    pub patterns: Vec<ReportedPattern>,
    pub acyc: Option<Vec<Vec<String>>>,
    pub scc_depth: usize,
    pub pairwise_agrees: bool,
    pub structural: Option<StructuralReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportedPattern {
    pub gamma1: String,
    pub gamma2: String,
    pub witness: [String; 4],
}

impl PriorityReport {
    pub fn build(dfa: &ClassDfa) -> Self {
        let analysis = analyze(dfa);
        let verdict = decide_with(&analysis);
        let names = |flags: &[bool]| -> Vec<String> {
            flags
                .iter()
                .enumerate()
                .filter(|(_, &f)| f)
                .map(|(q, _)| analysis.states[q].clone())
                .collect()
        };
        let acyc = verdict
            .ordering
            .as_ref()
            .map(|o| acyc_sets(&analysis, o).expect("decided ordering is valid"));
        PriorityReport {
            zero_priority: verdict.is_zero_priority,
            ordering: verdict
                .ordering
                .as_ref()
                .map(|o| o.iter().map(|&g| analysis.letters[g].clone()).collect()),
            zero_cyclic: names(&analysis.zero_cyclic),
            gamma_cyclic: analysis
                .letters
                .iter()
                .zip(&analysis.gamma_cyclic)
                .map(|(g, flags)| (g.clone(), names(flags)))
                .collect(),
            patterns: verdict
                .pattern_relation
                .iter()
                .map(|w| ReportedPattern {
                    gamma1: analysis.letters[w.gamma1].clone(),
                    gamma2: analysis.letters[w.gamma2].clone(),
                    witness: [w.q1, w.q2, w.q3, w.q4].map(|q| analysis.states[q].clone()),
                })
                .collect(),
            acyc: acyc.map(|sets| sets.iter().map(|s| names(s)).collect()),
            scc_depth: analysis.scc_depth,
            pairwise_agrees: !verdict.pairwise_discrepancy(),
            structural: verdict
                .is_zero_priority
                .then(|| check_structural_props(&analysis, &verdict)),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let list = |v: &[String]| if v.is_empty() { "-".to_string() } else { v.join(" ") };
        if self.zero_priority {
            if self.patterns.is_empty() {
                out.push_str("verdict: 0-priority under any ordering\n");
            } else {
                out.push_str("verdict: 0-priority\n");
            }
        } else {
            out.push_str("verdict: not 0-priority\n");
        }
        if let Some(o) = &self.ordering {
            let _ = writeln!(out, "ordering: {}", o.join(" "));
        }
        let _ = writeln!(out, "0-cyclic: {}", list(&self.zero_cyclic));
        for (g, states) in &self.gamma_cyclic {
            let _ = writeln!(out, "({g},0)-cyclic: {}", list(states));
        }
        for p in &self.patterns {
            let _ = writeln!(
                out,
                "pattern (({},0),({},0)): ({})",
                p.gamma1,
                p.gamma2,
                p.witness.join(",")
            );
        }
        if let Some(acyc) = &self.acyc {
            for (i, s) in acyc.iter().enumerate() {
                let _ = writeln!(out, "Acyc_{}: {}", i + 1, list(s));
            }
        }
        let _ = writeln!(out, "scc depth: {}", self.scc_depth);
        if !self.pairwise_agrees {
            out.push_str("flag: pairwise characterization disagrees with the ordering search\n");
        }
        if let Some(s) = &self.structural {
            for c in &s.checks {
                let _ = writeln!(
                    out,
                    "check {}: {}{}",
                    c.name,
                    if c.passed { "pass" } else { "FAIL" },
                    c.counterexample.as_ref().map(|x| format!(" ({x})")).unwrap_or_default()
                );
            }
        }
        out
    }
}

#[cfg(test)]
mod tests;
