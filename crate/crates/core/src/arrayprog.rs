//! Array-accessing programs: parsing, execution, the restricted two-loop
//! shape and its translation to class automata.
//!
//! Concrete syntax:
//!
//! ```text
//! sigma: a b
//! for i:=1 to length(A) do
//! { if not b3 then b1 := true; b2 := false else skip
//!   for j:=1 to length(A) do
//!   { if A[i].d = A[j].d then ... else ... }
//! }
//! ```
//!
//! `else` is mandatory. The `then` branch runs up to its `else`, the `else`
//! branch is one statement. `;` between statements is optional. Operator
//! binding, tightest first: `not`, comparisons, `and`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::dataword::DataWord;
use crate::error::{Error, Result};

mod parse;
mod translate;

pub use parse::parse_program;
pub use translate::{nd2_to_class_automaton, reachable, Reachability, SolverPath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VarKind {
    Loop,
    Index,
    Data,
    Bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IndexExpr {
    Loop(String),
    Var(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TagExpr {
    Const(String),
    At(IndexExpr),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DataExpr {
    Var(String),
    Const(u64),
    At(IndexExpr),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum BoolExpr {
    Const(bool),
    Var(String),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Not(Box<BoolExpr>),
    IndexEq(IndexExpr, IndexExpr),
    IndexLt(IndexExpr, IndexExpr),
    DataEq(DataExpr, DataExpr),
    DataLt(DataExpr, DataExpr),
    TagEq(TagExpr, TagExpr),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum StmtKind {
    Skip,
    Block(Vec<Stmt>),
    Seq(Vec<Stmt>),
    BoolAssign(String, BoolExpr),
    IndexAssign(String, IndexExpr),
    DataAssign(String, DataExpr),
    If(BoolExpr, Box<Stmt>, Box<Stmt>),
    For(String, Box<Stmt>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: Pos,
}

/// A parsed program with its tag alphabet and inferred variable kinds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Program {
    pub sigma: Vec<String>,
    pub vars: BTreeMap<String, VarKind>,
    pub body: Stmt,
}

/// Assignment to the Boolean variables of a program.
pub type BooleanState = BTreeMap<String, bool>;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ProgramState {
    pub bools: BTreeMap<String, bool>,
    pub loops: BTreeMap<String, usize>,
    pub indices: BTreeMap<String, usize>,
    pub data: BTreeMap<String, u64>,
}

impl ProgramState {
    pub fn boolean_state(&self) -> BooleanState {
        self.bools.clone()
    }
}

impl Program {
    pub fn parse(text: &str) -> Result<Self> {
        parse_program(text)
    }

    pub fn bool_vars(&self) -> Vec<String> {
        self.vars_of(VarKind::Bool)
    }

    pub fn vars_of(&self, kind: VarKind) -> Vec<String> {
        self.vars.iter().filter(|(_, &k)| k == kind).map(|(n, _)| n.clone()).collect()
    }

    /// Initial state on `arr`: Booleans false, loop and index variables 1,
    /// data variables the first datum.
    pub fn initial_state(&self, arr: &DataWord) -> Result<ProgramState> {
        let first = *arr.data().first().ok_or_else(|| Error::input("arrays must be nonempty"))?;
        let mut st = ProgramState::default();
        for (name, kind) in &self.vars {
            match kind {
                VarKind::Bool => {
                    st.bools.insert(name.clone(), false);
                }
                VarKind::Loop => {
                    st.loops.insert(name.clone(), 1);
                }
                VarKind::Index => {
                    st.indices.insert(name.clone(), 1);
                }
                VarKind::Data => {
                    st.data.insert(name.clone(), first);
                }
            }
        }
        Ok(st)
    }

    /// Runs the program on `arr`. After `for i := 1 to length(A)` the loop
    /// variable keeps its last value, `length(A)`.
    pub fn interpret(&self, arr: &DataWord) -> Result<ProgramState> {
        let mut st = self.initial_state(arr)?;
        for t in arr.tags() {
            if !self.sigma.contains(t) {
                return Err(Error::input(format!("tag `{t}` is not in the program alphabet")));
            }
        }
        exec(&self.body, arr, &mut st);
        Ok(st)
    }

    /// Reads a target such as `b1=true b2=false`; missing variables are
    /// left out of the returned map.
    pub fn parse_target(&self, text: &str) -> Result<BooleanState> {
        let mut out = BooleanState::new();
        for item in text.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Error::input(format!("expected `name=true|false`, got `{item}`")))?;
            if self.vars.get(name) != Some(&VarKind::Bool) {
                return Err(Error::input(format!("`{name}` is not a Boolean variable of the program")));
            }
            let v = match value {
                "true" | "1" => true,
                "false" | "0" => false,
                _ => return Err(Error::input(format!("bad Boolean value `{value}`"))),
            };
            out.insert(name.to_string(), v);
        }
        Ok(out)
    }

    /// All full Boolean states extending a partial one.
    pub fn completions(&self, partial: &BooleanState) -> Vec<BooleanState> {
        let vars = self.bool_vars();
        let free: Vec<&String> = vars.iter().filter(|v| !partial.contains_key(*v)).collect();
        (0..1usize << free.len())
            .map(|bits| {
                let mut m = partial.clone();
                for (k, v) in free.iter().enumerate() {
                    m.insert((*v).clone(), bits >> k & 1 == 1);
                }
                m
            })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("sigma: {}\n", self.sigma.join(" "));
        write_stmt(&mut out, &self.body, 0);
        out
    }
}

fn index_value(e: &IndexExpr, st: &ProgramState) -> usize {
    match e {
        IndexExpr::Loop(v) => st.loops[v],
        IndexExpr::Var(v) => st.indices[v],
    }
}

fn data_value(e: &DataExpr, arr: &DataWord, st: &ProgramState) -> u64 {
    match e {
        DataExpr::Var(v) => st.data[v],
        DataExpr::Const(c) => *c,
        DataExpr::At(i) => arr.data()[index_value(i, st) - 1],
    }
}

fn tag_value<'a>(e: &'a TagExpr, arr: &'a DataWord, st: &ProgramState) -> &'a str {
    match e {
        TagExpr::Const(s) => s,
        TagExpr::At(i) => &arr.tags()[index_value(i, st) - 1],
    }
}

fn eval(e: &BoolExpr, arr: &DataWord, st: &ProgramState) -> bool {
    match e {
        BoolExpr::Const(b) => *b,
        BoolExpr::Var(v) => st.bools[v],
        BoolExpr::And(a, b) => eval(a, arr, st) && eval(b, arr, st),
        BoolExpr::Not(a) => !eval(a, arr, st),
        BoolExpr::IndexEq(a, b) => index_value(a, st) == index_value(b, st),
        BoolExpr::IndexLt(a, b) => index_value(a, st) < index_value(b, st),
        BoolExpr::DataEq(a, b) => data_value(a, arr, st) == data_value(b, arr, st),
        BoolExpr::DataLt(a, b) => data_value(a, arr, st) < data_value(b, arr, st),
        BoolExpr::TagEq(a, b) => tag_value(a, arr, st) == tag_value(b, arr, st),
    }
}

fn exec(s: &Stmt, arr: &DataWord, st: &mut ProgramState) {
    match &s.kind {
        StmtKind::Skip => {}
        StmtKind::Block(xs) | StmtKind::Seq(xs) => xs.iter().for_each(|x| exec(x, arr, st)),
        StmtKind::BoolAssign(v, e) => {
            let b = eval(e, arr, st);
            st.bools.insert(v.clone(), b);
        }
        StmtKind::IndexAssign(v, e) => {
            let i = index_value(e, st);
            debug_assert!((1..=arr.len()).contains(&i));
            st.indices.insert(v.clone(), i);
        }
        StmtKind::DataAssign(v, e) => {
            let d = data_value(e, arr, st);
            st.data.insert(v.clone(), d);
        }
        StmtKind::If(c, a, b) => {
            if eval(c, arr, st) {
                exec(a, arr, st)
            } else {
                exec(b, arr, st)
            }
        }
        StmtKind::For(v, body) => {
            for i in 1..=arr.len() {
                st.loops.insert(v.clone(), i);
                exec(body, arr, st);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// printing

fn index_text(e: &IndexExpr) -> &str {
    match e {
        IndexExpr::Loop(v) | IndexExpr::Var(v) => v,
    }
}

fn data_text(e: &DataExpr) -> String {
    match e {
        DataExpr::Var(v) => v.clone(),
        DataExpr::Const(c) => c.to_string(),
        DataExpr::At(i) => format!("A[{}].d", index_text(i)),
    }
}

fn tag_text(e: &TagExpr) -> String {
    match e {
        TagExpr::Const(s) => s.clone(),
        TagExpr::At(i) => format!("A[{}].s", index_text(i)),
    }
}

pub fn bool_text(e: &BoolExpr) -> String {
    match e {
        BoolExpr::Const(b) => b.to_string(),
        BoolExpr::Var(v) => v.clone(),
        BoolExpr::And(a, b) => format!("{} and {}", bool_text(a), bool_text(b)),
        BoolExpr::Not(a) => match **a {
            BoolExpr::Const(_) | BoolExpr::Var(_) | BoolExpr::Not(_) => format!("not {}", bool_text(a)),
            _ => format!("not ({})", bool_text(a)),
        },
        BoolExpr::IndexEq(a, b) => format!("{} = {}", index_text(a), index_text(b)),
        BoolExpr::IndexLt(a, b) => format!("{} < {}", index_text(a), index_text(b)),
        BoolExpr::DataEq(a, b) => format!("{} = {}", data_text(a), data_text(b)),
        BoolExpr::DataLt(a, b) => format!("{} < {}", data_text(a), data_text(b)),
        BoolExpr::TagEq(a, b) => format!("{} = {}", tag_text(a), tag_text(b)),
    }
}

fn write_stmt(out: &mut String, s: &Stmt, depth: usize) {
    let pad = "  ".repeat(depth);
    match &s.kind {
        StmtKind::Skip => {
            let _ = writeln!(out, "{pad}skip");
        }
        StmtKind::Block(xs) => {
            let _ = writeln!(out, "{pad}{{");
            for x in xs {
                write_stmt(out, x, depth + 1);
            }
            let _ = writeln!(out, "{pad}}}");
        }
        StmtKind::Seq(xs) => {
            // braces keep the grouping when a sequence sits in an else branch
            let _ = writeln!(out, "{pad}{{");
            for x in xs {
                write_stmt(out, x, depth + 1);
            }
            let _ = writeln!(out, "{pad}}}");
        }
        StmtKind::BoolAssign(v, e) => {
            let _ = writeln!(out, "{pad}{v} := {}", bool_text(e));
        }
        StmtKind::IndexAssign(v, e) => {
            let _ = writeln!(out, "{pad}{v} := {}", index_text(e));
        }
        StmtKind::DataAssign(v, e) => {
            let _ = writeln!(out, "{pad}{v} := {}", data_text(e));
        }
        StmtKind::If(c, a, b) => {
            let _ = writeln!(out, "{pad}if {} then", bool_text(c));
            write_stmt(out, a, depth + 1);
            let _ = writeln!(out, "{pad}else");
            write_stmt(out, b, depth + 1);
        }
        StmtKind::For(v, body) => {
            let _ = writeln!(out, "{pad}for {v} := 1 to length(A) do");
            write_stmt(out, body, depth + 1);
        }
    }
}

// ---------------------------------------------------------------------------
// shape checks

/// The pieces of a restricted two-loop program.
#[derive(Debug, Clone)]
pub struct Nd2Parts {
    pub outer: String,
    pub inner: String,
    pub p1: Vec<Stmt>,
    pub p2: Stmt,
    pub p3: Stmt,
    pub p4: Vec<Stmt>,
}

/// Verdict plus one line per violated requirement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnosis {
    pub ok: bool,
    pub problems: Vec<String>,
}

impl Diagnosis {
    fn from(problems: Vec<String>) -> Self {
        Diagnosis { ok: problems.is_empty(), problems }
    }
}

fn flatten(s: &Stmt, out: &mut Vec<Stmt>) {
    match &s.kind {
        StmtKind::Block(xs) | StmtKind::Seq(xs) => xs.iter().for_each(|x| flatten(x, out)),
        _ => out.push(s.clone()),
    }
}

fn single(s: &Stmt) -> Option<Stmt> {
    let mut xs = Vec::new();
    flatten(s, &mut xs);
    (xs.len() == 1).then(|| xs.pop().unwrap())
}

fn is_at(e: &DataExpr, var: &str) -> bool {
    matches!(e, DataExpr::At(IndexExpr::Loop(v)) if v == var)
}

/// Splits a program into the two-loop template, or says why it does not fit.
pub fn nd2_parts(prog: &Program) -> std::result::Result<Nd2Parts, String> {
    let top = single(&prog.body).ok_or("the program is not a single outer loop")?;
    let StmtKind::For(outer, body) = &top.kind else {
        return Err(format!("{}: the program is not a single outer loop", top.pos));
    };
    let mut items = Vec::new();
    flatten(body, &mut items);
    let loops: Vec<usize> = (0..items.len()).filter(|&k| matches!(items[k].kind, StmtKind::For(..))).collect();
    if loops.len() != 1 {
        return Err(format!("{}: the outer loop body must contain exactly one inner loop", top.pos));
    }
    let k = loops[0];
    let StmtKind::For(inner, ibody) = &items[k].kind else { unreachable!() };
    let cond = single(ibody).ok_or_else(|| format!("{}: the inner loop body must be a single if", items[k].pos))?;
    let StmtKind::If(c, p2, p3) = &cond.kind else {
        return Err(format!("{}: the inner loop body must be `if A[{outer}].d = A[{inner}].d then P2 else P3`", cond.pos));
    };
    let shape_ok = matches!(c, BoolExpr::DataEq(x, y)
        if (is_at(x, outer) && is_at(y, inner)) || (is_at(x, inner) && is_at(y, outer)));
    if !shape_ok || outer == inner {
        return Err(format!("{}: the inner test must be `A[{outer}].d = A[{inner}].d`", cond.pos));
    }
    Ok(Nd2Parts {
        outer: outer.clone(),
        inner: inner.clone(),
        p1: items[..k].to_vec(),
        p2: (**p2).clone(),
        p3: (**p3).clone(),
        p4: items[k + 1..].to_vec(),
    })
}

#[derive(Default)]
struct Usage {
    loops: Vec<Pos>,
    index_vars: Vec<Pos>,
    data_vars: Vec<Pos>,
    order: Vec<Pos>,
    data_consts: Vec<Pos>,
    index_cmp: Vec<Pos>,
    mentions: Vec<(String, Pos)>,
}

fn scan_index(e: &IndexExpr, pos: Pos, u: &mut Usage) {
    match e {
        IndexExpr::Var(_) => u.index_vars.push(pos),
        IndexExpr::Loop(v) => u.mentions.push((v.clone(), pos)),
    }
}

fn scan_data(e: &DataExpr, pos: Pos, u: &mut Usage) {
    match e {
        DataExpr::Var(_) => u.data_vars.push(pos),
        DataExpr::Const(_) => u.data_consts.push(pos),
        DataExpr::At(i) => scan_index(i, pos, u),
    }
}

fn scan_bool(e: &BoolExpr, pos: Pos, u: &mut Usage) {
    match e {
        BoolExpr::Const(_) | BoolExpr::Var(_) => {}
        BoolExpr::And(a, b) => {
            scan_bool(a, pos, u);
            scan_bool(b, pos, u);
        }
        BoolExpr::Not(a) => scan_bool(a, pos, u),
        BoolExpr::IndexEq(a, b) => {
            u.index_cmp.push(pos);
            scan_index(a, pos, u);
            scan_index(b, pos, u);
        }
        BoolExpr::IndexLt(a, b) => {
            u.order.push(pos);
            scan_index(a, pos, u);
            scan_index(b, pos, u);
        }
        BoolExpr::DataEq(a, b) => {
            scan_data(a, pos, u);
            scan_data(b, pos, u);
        }
        BoolExpr::DataLt(a, b) => {
            u.order.push(pos);
            scan_data(a, pos, u);
            scan_data(b, pos, u);
        }
        BoolExpr::TagEq(a, b) => {
            for t in [a, b] {
                if let TagExpr::At(i) = t {
                    scan_index(i, pos, u);
                }
            }
        }
    }
}

fn scan(s: &Stmt, u: &mut Usage) {
    match &s.kind {
        StmtKind::Skip => {}
        StmtKind::Block(xs) | StmtKind::Seq(xs) => xs.iter().for_each(|x| scan(x, u)),
        StmtKind::BoolAssign(_, e) => scan_bool(e, s.pos, u),
        StmtKind::IndexAssign(_, e) => {
            u.index_vars.push(s.pos);
            scan_index(e, s.pos, u);
        }
        StmtKind::DataAssign(_, e) => {
            u.data_vars.push(s.pos);
            scan_data(e, s.pos, u);
        }
        StmtKind::If(c, a, b) => {
            scan_bool(c, s.pos, u);
            scan(a, u);
            scan(b, u);
        }
        StmtKind::For(_, body) => {
            u.loops.push(s.pos);
            scan(body, u);
        }
    }
}

fn usage(stmts: &[Stmt]) -> Usage {
    let mut u = Usage::default();
    stmts.iter().for_each(|s| scan(s, &mut u));
    u
}

fn labelled(parts: &Nd2Parts) -> [(&'static str, Vec<Stmt>); 4] {
    [
        ("P1", parts.p1.clone()),
        ("P2", vec![parts.p2.clone()]),
        ("P3", vec![parts.p3.clone()]),
        ("P4", parts.p4.clone()),
    ]
}

/// Does the program fit the restricted two-loop template?
pub fn is_restricted_nd2(prog: &Program) -> Diagnosis {
    let parts = match nd2_parts(prog) {
        Ok(p) => p,
        Err(e) => return Diagnosis::from(vec![e]),
    };
    let mut problems = Vec::new();
    for (name, stmts) in labelled(&parts) {
        let u = usage(&stmts);
        if let Some(p) = u.loops.first() {
            problems.push(format!("{p}: {name} contains a loop"));
        }
        if let Some(p) = u.index_vars.first() {
            problems.push(format!("{p}: {name} uses index variables"));
        }
        if let Some(p) = u.data_vars.first() {
            problems.push(format!("{p}: {name} uses data variables"));
        }
        if let Some(p) = u.order.first() {
            problems.push(format!("{p}: {name} refers to the order on indices or data"));
        }
    }
    Diagnosis::from(problems)
}

/// Requirements the automaton translation adds on top of the template:
/// no data constants, and the inner loop variable only inside P2 and P3.
pub fn translation_problems(prog: &Program) -> Vec<String> {
    let Ok(parts) = nd2_parts(prog) else { return vec!["not a two-loop program".into()] };
    let mut problems = Vec::new();
    for (name, stmts) in labelled(&parts) {
        let u = usage(&stmts);
        if let Some(p) = u.data_consts.first() {
            problems.push(format!("{p}: {name} compares with a data constant"));
        }
        if name == "P1" || name == "P4" {
            if let Some((_, p)) = u.mentions.iter().find(|(v, _)| *v == parts.inner) {
                problems.push(format!("{p}: {name} uses the inner loop variable `{}`", parts.inner));
            }
        }
    }
    problems
}

fn refers_to(s: &Stmt, var: &str) -> bool {
    let mut u = Usage::default();
    scan(s, &mut u);
    u.mentions.iter().any(|(v, _)| v == var)
}

fn literals(e: &BoolExpr, out: &mut Vec<(String, bool)>) -> bool {
    match e {
        BoolExpr::Var(v) => {
            out.push((v.clone(), true));
            true
        }
        BoolExpr::Not(a) => match &**a {
            BoolExpr::Var(v) => {
                out.push((v.clone(), false));
                true
            }
            _ => false,
        },
        BoolExpr::And(a, b) => literals(a, out) && literals(b, out),
        _ => false,
    }
}

fn constant_assignments(s: &Stmt, out: &mut Vec<(String, bool)>) -> bool {
    match &s.kind {
        StmtKind::BoolAssign(v, BoolExpr::Const(b)) => {
            out.push((v.clone(), *b));
            true
        }
        StmtKind::Block(xs) | StmtKind::Seq(xs) => xs.iter().all(|x| constant_assignments(x, out)),
        _ => false,
    }
}

/// Does the program satisfy the extra condition on P3 that makes its class
/// condition 0-priority?
pub fn is_zero_priority_nd2(prog: &Program) -> Diagnosis {
    let base = is_restricted_nd2(prog);
    if !base.ok {
        return base;
    }
    let parts = nd2_parts(prog).expect("checked above");
    let j = &parts.inner;
    if !refers_to(&parts.p3, j) {
        return Diagnosis::from(vec![]);
    }
    let p3 = single(&parts.p3).unwrap_or_else(|| parts.p3.clone());
    let StmtKind::If(bb, cascade, tail) = &p3.kind else {
        return Diagnosis::from(vec![format!("{}: P3 refers to A[{j}] but is not `if BB then ... else skip`", p3.pos)]);
    };
    if single(tail).map(|t| t.kind) != Some(StmtKind::Skip) {
        return Diagnosis::from(vec![format!("{}: the outer else of P3 must be skip", p3.pos)]);
    }
    let mut lits = Vec::new();
    if !literals(bb, &mut lits) {
        return Diagnosis::from(vec![format!("{}: BB is not a conjunction of literals", p3.pos)]);
    }
    let mut branch = single(cascade).unwrap_or_else(|| (**cascade).clone());
    let mut arms = 0;
    loop {
        match &branch.kind {
            StmtKind::Skip if arms > 0 => return Diagnosis::from(vec![]),
            StmtKind::If(BoolExpr::TagEq(x, y), pa, rest) => {
                let ok_test = matches!((x, y),
                    (TagExpr::At(IndexExpr::Loop(v)), TagExpr::Const(_)) | (TagExpr::Const(_), TagExpr::At(IndexExpr::Loop(v)))
                    if v == j);
                if !ok_test {
                    return Diagnosis::from(vec![format!("{}: cascade tests must be `A[{j}].s = s`", branch.pos)]);
                }
                let mut assigns = Vec::new();
                if !constant_assignments(pa, &mut assigns) {
                    return Diagnosis::from(vec![format!(
                        "{}: PA{} is not a composition of Boolean constant assignments",
                        pa.pos,
                        arms + 1
                    )]);
                }
                let flips = assigns.iter().any(|(v, b)| lits.iter().any(|(w, pol)| w == v && pol != b));
                if !flips {
                    return Diagnosis::from(vec![format!("{}: PA{} is trivial", pa.pos, arms + 1)]);
                }
                arms += 1;
                branch = single(rest).unwrap_or_else(|| (**rest).clone());
            }
            _ => {
                return Diagnosis::from(vec![format!("{}: P3 does not follow the tag cascade", branch.pos)]);
            }
        }
    }
}

/// Loop-free, two-loop, or two-loop with the 0-priority condition on P3.
pub fn classify(prog: &Program) -> &'static str {
    let mut u = Usage::default();
    scan(&prog.body, &mut u);
    if u.loops.is_empty() {
        "loop-free"
    } else if is_zero_priority_nd2(prog).ok {
        "0-priority restricted ND2"
    } else if is_restricted_nd2(prog).ok {
        "restricted ND2"
    } else {
        "general"
    }
}
