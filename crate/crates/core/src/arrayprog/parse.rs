//! Lexer, parser and variable-kind inference for array programs.

use std::collections::{BTreeMap, BTreeSet};

use super::{BoolExpr, DataExpr, IndexExpr, Pos, Program, Stmt, StmtKind, TagExpr};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: Pos,
}

const SYMBOLS: [&str; 12] = [":=", ":", "=", "<", ";", "{", "}", "[", "]", "(", ")", "."];

fn lex(text: &str, first_line: usize) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line_no = first_line + li;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos { line: line_no, column: i + 1 };
            if c.is_whitespace() {
                i += 1;
            } else if c == '#' {
                break;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), pos });
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s.parse().map_err(|_| Error::parse(pos.line, pos.column, "integer out of range"))?;
                out.push(Token { tok: Tok::Int(n), pos });
            } else {
                let rest: String = chars[i..].iter().collect();
                let sym = SYMBOLS
                    .iter()
                    .find(|s| rest.starts_with(**s))
                    .ok_or_else(|| Error::parse(pos.line, pos.column, format!("unexpected character `{c}`")))?;
                i += sym.len();
                out.push(Token { tok: Tok::Sym(sym), pos });
            }
        }
    }
    let end = match text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).last() {
        Some((i, l)) => Pos { line: first_line + i, column: l.trim_end().chars().count() + 1 },
        None => Pos { line: first_line, column: 1 },
    };
    out.push(Token { tok: Tok::Eof, pos: end });
    Ok(out)
}

/// Untyped expression as read; kinds are assigned afterwards.
#[derive(Debug, Clone)]
enum Raw {
    Bool(bool),
    Name(String),
    Int(u64),
    At(String, Pos, char),
    Not(Box<Raw>),
    And(Box<Raw>, Box<Raw>),
    Eq(Box<Raw>, Box<Raw>, Pos),
    Lt(Box<Raw>, Box<Raw>, Pos),
}

#[derive(Debug, Clone)]
enum RawStmt {
    Skip,
    Block(Vec<(RawStmt, Pos)>),
    Seq(Vec<(RawStmt, Pos)>),
    Assign(String, Raw),
    If(Raw, Box<(RawStmt, Pos)>, Box<(RawStmt, Pos)>),
    For(String, Box<(RawStmt, Pos)>),
}

const KEYWORDS: [&str; 13] =
    ["for", "to", "do", "if", "then", "else", "skip", "and", "not", "true", "false", "length", "A"];

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let p = self.peek().pos;
        Err(Error::parse(p.line, p.column, msg))
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn is_sym(&self, sym: &str) -> bool {
        matches!(self.peek().tok, Tok::Sym(s) if s == sym)
    }

    fn expect_kw(&mut self, kw: &str) -> Result<()> {
        if self.is_kw(kw) {
            self.next();
            Ok(())
        } else {
            self.err(format!("expected `{kw}`"))
        }
    }

    fn expect_sym(&mut self, sym: &str) -> Result<()> {
        if self.is_sym(sym) {
            self.next();
            Ok(())
        } else {
            self.err(format!("expected `{sym}`"))
        }
    }

    // `:=`, also written `: =`
    fn expect_assign(&mut self) -> Result<()> {
        if self.is_sym(":=") {
            self.next();
            return Ok(());
        }
        if self.is_sym(":") {
            self.next();
            return self.expect_sym("=").or_else(|_| self.err("expected `:=`"));
        }
        self.err("expected `:=`")
    }

    fn name(&mut self) -> Result<(String, Pos)> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                Ok((s, t.pos))
            }
            _ => self.err("expected a variable name"),
        }
    }

    fn at_stop(&self, stops: &[&str]) -> bool {
        self.peek().tok == Tok::Eof || self.is_sym("}") || stops.iter().any(|s| self.is_kw(s))
    }

    fn seq(&mut self, stops: &[&str]) -> Result<(RawStmt, Pos)> {
        let pos = self.peek().pos;
        let mut items = Vec::new();
        loop {
            if self.at_stop(stops) {
                break;
            }
            items.push(self.stmt()?);
            if self.is_sym(";") {
                self.next();
            }
        }
        match items.len() {
            0 => self.err("expected a statement"),
            1 => Ok(items.pop().unwrap()),
            _ => Ok((RawStmt::Seq(items), pos)),
        }
    }

    fn stmt(&mut self) -> Result<(RawStmt, Pos)> {
        let pos = self.peek().pos;
        if self.is_kw("skip") {
            self.next();
            return Ok((RawStmt::Skip, pos));
        }
        if self.is_sym("{") {
            self.next();
            let mut items = Vec::new();
            while !self.is_sym("}") {
                if self.peek().tok == Tok::Eof {
                    return self.err("unclosed `{`");
                }
                items.push(self.stmt()?);
                if self.is_sym(";") {
                    self.next();
                }
            }
            self.next();
            return Ok((RawStmt::Block(items), pos));
        }
        if self.is_kw("if") {
            self.next();
            let cond = self.bexpr()?;
            self.expect_kw("then")?;
            let then = self.seq(&["else"])?;
            self.expect_kw("else")?;
            let els = self.stmt()?;
            return Ok((RawStmt::If(cond, Box::new(then), Box::new(els)), pos));
        }
        if self.is_kw("for") {
            self.next();
            let (var, _) = self.name()?;
            self.expect_assign()?;
            if self.peek().tok != Tok::Int(1) {
                return self.err("loops start at 1");
            }
            self.next();
            self.expect_kw("to")?;
            self.expect_kw("length")?;
            self.expect_sym("(")?;
            self.expect_kw("A")?;
            self.expect_sym(")")?;
            self.expect_kw("do")?;
            let body = self.stmt()?;
            return Ok((RawStmt::For(var, Box::new(body)), pos));
        }
        let (var, _) = self.name()?;
        self.expect_assign()?;
        let e = self.bexpr()?;
        Ok((RawStmt::Assign(var, e), pos))
    }

    fn bexpr(&mut self) -> Result<Raw> {
        let mut left = self.cmp()?;
        while self.is_kw("and") {
            self.next();
            let right = self.cmp()?;
            left = Raw::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn cmp(&mut self) -> Result<Raw> {
        let left = self.unary()?;
        let pos = self.peek().pos;
        if self.is_sym("=") {
            self.next();
            let right = self.unary()?;
            return Ok(Raw::Eq(Box::new(left), Box::new(right), pos));
        }
        if self.is_sym("<") {
            self.next();
            let right = self.unary()?;
            return Ok(Raw::Lt(Box::new(left), Box::new(right), pos));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Raw> {
        if self.is_kw("not") {
            self.next();
            return Ok(Raw::Not(Box::new(self.unary()?)));
        }
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(s) if s == "true" || s == "false" => {
                self.next();
                Ok(Raw::Bool(s == "true"))
            }
            Tok::Ident(s) if s == "A" => {
                self.next();
                self.expect_sym("[")?;
                let (idx, ipos) = self.name()?;
                self.expect_sym("]")?;
                self.expect_sym(".")?;
                match self.next().tok {
                    Tok::Ident(f) if f == "s" || f == "d" => Ok(Raw::At(idx, ipos, f.chars().next().unwrap())),
                    _ => Err(Error::parse(t.pos.line, t.pos.column, "expected `.s` or `.d`")),
                }
            }
            Tok::Int(n) => {
                let n = *n;
                self.next();
                Ok(Raw::Int(n))
            }
            Tok::Sym("(") => {
                self.next();
                let e = self.bexpr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            _ => {
                let (n, _) = self.name()?;
                Ok(Raw::Name(n))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// kind inference

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Bool,
    Index,
    Data,
    Tag,
}

struct Kinds {
    parent: Vec<usize>,
    fixed: Vec<Option<Kind>>,
    vars: BTreeMap<String, usize>,
    loops: BTreeSet<String>,
    sigma: Vec<String>,
}

impl Kinds {
    fn fresh(&mut self, k: Option<Kind>) -> usize {
        self.parent.push(self.parent.len());
        self.fixed.push(k);
        self.parent.len() - 1
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        self.parent[x] = r;
        r
    }

    fn unify(&mut self, a: usize, b: usize, pos: Pos, what: &str) -> Result<()> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return Ok(());
        }
        match (self.fixed[ra], self.fixed[rb]) {
            (Some(x), Some(y)) if x != y => Err(Error::Type(format!(
                "line {}, column {}: {what} mixes {} and {}",
                pos.line,
                pos.column,
                kind_name(x),
                kind_name(y)
            ))),
            (fa, fb) => {
                self.parent[ra] = rb;
                self.fixed[rb] = fb.or(fa);
                Ok(())
            }
        }
    }

    fn var(&mut self, name: &str) -> usize {
        if let Some(&n) = self.vars.get(name) {
            return n;
        }
        let n = self.fresh(None);
        self.vars.insert(name.to_string(), n);
        n
    }

    fn kind_of(&mut self, node: usize) -> Option<Kind> {
        let r = self.find(node);
        self.fixed[r]
    }

    fn constrain(&mut self, e: &Raw) -> Result<usize> {
        let pos0 = Pos { line: 0, column: 0 };
        Ok(match e {
            Raw::Bool(_) => self.fresh(Some(Kind::Bool)),
            Raw::Int(_) => self.fresh(Some(Kind::Data)),
            Raw::Name(n) => {
                if self.sigma.contains(n) {
                    self.fresh(Some(Kind::Tag))
                } else if self.loops.contains(n) {
                    self.fresh(Some(Kind::Index))
                } else {
                    self.var(n)
                }
            }
            Raw::At(idx, pos, field) => {
                let k = self.fresh(Some(Kind::Index));
                let i = self.index_node(idx);
                self.unify(i, k, *pos, "array index")?;
                self.fresh(Some(if *field == 's' { Kind::Tag } else { Kind::Data }))
            }
            Raw::Not(a) => {
                let n = self.constrain(a)?;
                let b = self.fresh(Some(Kind::Bool));
                self.unify(n, b, pos0, "`not`")?;
                b
            }
            Raw::And(a, b) => {
                let (x, y) = (self.constrain(a)?, self.constrain(b)?);
                let k = self.fresh(Some(Kind::Bool));
                self.unify(x, k, pos0, "`and`")?;
                self.unify(y, k, pos0, "`and`")?;
                k
            }
            Raw::Eq(a, b, pos) | Raw::Lt(a, b, pos) => {
                let (x, y) = (self.constrain(a)?, self.constrain(b)?);
                self.unify(x, y, *pos, "comparison")?;
                self.fresh(Some(Kind::Bool))
            }
        })
    }

    fn index_node(&mut self, name: &str) -> usize {
        if self.loops.contains(name) {
            self.fresh(Some(Kind::Index))
        } else {
            self.var(name)
        }
    }

    fn walk(&mut self, s: &(RawStmt, Pos)) -> Result<()> {
        let (stmt, pos) = s;
        match stmt {
            RawStmt::Skip => {}
            RawStmt::Block(xs) | RawStmt::Seq(xs) => {
                for x in xs {
                    self.walk(x)?;
                }
            }
            RawStmt::Assign(v, e) => {
                if self.loops.contains(v) {
                    return Err(type_err(*pos, format!("loop variable `{v}` cannot be assigned")));
                }
                if self.sigma.contains(v) {
                    return Err(type_err(*pos, format!("`{v}` is a tag constant")));
                }
                let n = self.constrain(e)?;
                let x = self.var(v);
                self.unify(x, n, *pos, "assignment")?;
            }
            RawStmt::If(c, a, b) => {
                let n = self.constrain(c)?;
                let k = self.fresh(Some(Kind::Bool));
                self.unify(n, k, *pos, "condition")?;
                self.walk(a)?;
                self.walk(b)?;
            }
            RawStmt::For(v, body) => {
                if self.vars.contains_key(v) || self.sigma.contains(v) {
                    return Err(type_err(*pos, format!("`{v}` is used both as a loop variable and otherwise")));
                }
                self.walk(body)?;
            }
        }
        Ok(())
    }
}

fn type_err(pos: Pos, msg: String) -> Error {
    Error::Type(format!("line {}, column {}: {msg}", pos.line, pos.column))
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Bool => "Boolean",
        Kind::Index => "index",
        Kind::Data => "data",
        Kind::Tag => "tag",
    }
}

fn collect_loops(s: &(RawStmt, Pos), out: &mut BTreeSet<String>) {
    match &s.0 {
        RawStmt::Block(xs) | RawStmt::Seq(xs) => xs.iter().for_each(|x| collect_loops(x, out)),
        RawStmt::If(_, a, b) => {
            collect_loops(a, out);
            collect_loops(b, out);
        }
        RawStmt::For(v, body) => {
            out.insert(v.clone());
            collect_loops(body, out);
        }
        _ => {}
    }
}

struct Typer<'a> {
    kinds: &'a mut Kinds,
}

impl Typer<'_> {
    fn kind(&mut self, name: &str) -> Kind {
        if self.kinds.loops.contains(name) {
            return Kind::Index;
        }
        let n = self.kinds.var(name);
        self.kinds.kind_of(n).unwrap_or(Kind::Bool)
    }

    fn index(&mut self, name: &str) -> IndexExpr {
        if self.kinds.loops.contains(name) {
            IndexExpr::Loop(name.to_string())
        } else {
            IndexExpr::Var(name.to_string())
        }
    }

    fn kind_of_raw(&mut self, e: &Raw) -> Kind {
        match e {
            Raw::Bool(_) | Raw::Not(_) | Raw::And(..) | Raw::Eq(..) | Raw::Lt(..) => Kind::Bool,
            Raw::Int(_) => Kind::Data,
            Raw::At(_, _, 's') => Kind::Tag,
            Raw::At(..) => Kind::Data,
            Raw::Name(n) if self.kinds.sigma.contains(n) => Kind::Tag,
            Raw::Name(n) => self.kind(n),
        }
    }

    fn bool_expr(&mut self, e: &Raw) -> Result<BoolExpr> {
        Ok(match e {
            Raw::Bool(b) => BoolExpr::Const(*b),
            Raw::Name(n) => BoolExpr::Var(n.clone()),
            Raw::Not(a) => BoolExpr::Not(Box::new(self.bool_expr(a)?)),
            Raw::And(a, b) => BoolExpr::And(Box::new(self.bool_expr(a)?), Box::new(self.bool_expr(b)?)),
            Raw::Eq(a, b, pos) | Raw::Lt(a, b, pos) => {
                let lt = matches!(e, Raw::Lt(..));
                match (self.kind_of_raw(a), lt) {
                    (Kind::Index, false) => BoolExpr::IndexEq(self.index_expr(a), self.index_expr(b)),
                    (Kind::Index, true) => BoolExpr::IndexLt(self.index_expr(a), self.index_expr(b)),
                    (Kind::Data, false) => BoolExpr::DataEq(self.data_expr(a), self.data_expr(b)),
                    (Kind::Data, true) => BoolExpr::DataLt(self.data_expr(a), self.data_expr(b)),
                    (Kind::Tag, false) => BoolExpr::TagEq(self.tag_expr(a), self.tag_expr(b)),
                    (k, _) => return Err(type_err(*pos, format!("cannot compare {} values", kind_name(k)))),
                }
            }
            Raw::Int(_) | Raw::At(..) => unreachable!("kinds checked"),
        })
    }

    fn index_expr(&mut self, e: &Raw) -> IndexExpr {
        match e {
            Raw::Name(n) => self.index(n),
            _ => unreachable!("kinds checked"),
        }
    }

    fn data_expr(&mut self, e: &Raw) -> DataExpr {
        match e {
            Raw::Name(n) => DataExpr::Var(n.clone()),
            Raw::Int(c) => DataExpr::Const(*c),
            Raw::At(i, _, _) => DataExpr::At(self.index(i)),
            _ => unreachable!("kinds checked"),
        }
    }

    fn tag_expr(&mut self, e: &Raw) -> TagExpr {
        match e {
            Raw::Name(n) => TagExpr::Const(n.clone()),
            Raw::At(i, _, _) => TagExpr::At(self.index(i)),
            _ => unreachable!("kinds checked"),
        }
    }

    fn stmt(&mut self, s: &(RawStmt, Pos)) -> Result<Stmt> {
        let (raw, pos) = s;
        let kind = match raw {
            RawStmt::Skip => StmtKind::Skip,
            RawStmt::Block(xs) => StmtKind::Block(xs.iter().map(|x| self.stmt(x)).collect::<Result<_>>()?),
            RawStmt::Seq(xs) => StmtKind::Seq(xs.iter().map(|x| self.stmt(x)).collect::<Result<_>>()?),
            RawStmt::Assign(v, e) => match self.kind(v) {
                Kind::Bool => StmtKind::BoolAssign(v.clone(), self.bool_expr(e)?),
                Kind::Index => StmtKind::IndexAssign(v.clone(), self.index_expr(e)),
                Kind::Data => StmtKind::DataAssign(v.clone(), self.data_expr(e)),
                Kind::Tag => return Err(type_err(*pos, format!("variable `{v}` would hold a tag"))),
            },
            RawStmt::If(c, a, b) => StmtKind::If(self.bool_expr(c)?, Box::new(self.stmt(a)?), Box::new(self.stmt(b)?)),
            RawStmt::For(v, body) => StmtKind::For(v.clone(), Box::new(self.stmt(body)?)),
        };
        Ok(Stmt { kind, pos: *pos })
    }
}

/// Parses a program file: an optional `sigma:` line, then the program.
pub fn parse_program(text: &str) -> Result<Program> {
    let mut sigma = Vec::new();
    let mut body_start = 0;
    let mut first_line = 1;
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(rest) = t.strip_prefix("sigma:") {
            sigma = rest.split_whitespace().map(str::to_string).collect();
            body_start = text.lines().take(i + 1).map(|l| l.len() + 1).sum();
            first_line = i + 2;
        }
        break;
    }
    let body = text.get(body_start..).unwrap_or("");
    parse_with_sigma(body, sigma, first_line)
}

pub(crate) fn parse_with_sigma(body: &str, sigma: Vec<String>, first_line: usize) -> Result<Program> {
    for s in &sigma {
        if KEYWORDS.contains(&s.as_str()) {
            return Err(Error::input(format!("tag `{s}` collides with a keyword")));
        }
    }
    let toks = lex(body, first_line)?;
    let mut p = Parser { toks, at: 0 };
    let raw = p.seq(&[])?;
    if p.peek().tok != Tok::Eof {
        return p.err("unexpected input after the program");
    }
    let mut loops = BTreeSet::new();
    collect_loops(&raw, &mut loops);
    let mut kinds = Kinds { parent: vec![], fixed: vec![], vars: BTreeMap::new(), loops, sigma: sigma.clone() };
    kinds.walk(&raw)?;
    for (name, node) in kinds.vars.clone() {
        if kinds.kind_of(node) == Some(Kind::Tag) {
            return Err(Error::Type(format!("variable `{name}` is used as a tag")));
        }
    }
    let body = Typer { kinds: &mut kinds }.stmt(&raw)?;
    let mut vars = BTreeMap::new();
    for (name, node) in kinds.vars.clone() {
        let k = match kinds.kind_of(node).unwrap_or(Kind::Bool) {
            Kind::Bool => super::VarKind::Bool,
            Kind::Index => super::VarKind::Index,
            Kind::Data => super::VarKind::Data,
            Kind::Tag => unreachable!(),
        };
        vars.insert(name, k);
    }
    for l in &kinds.loops {
        vars.insert(l.clone(), super::VarKind::Loop);
    }
    Ok(Program { sigma, vars, body })
}
