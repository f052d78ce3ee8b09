//! OpenQASM 2.0 emission and parsing for the lowered gate set.
//!
//! Emitted programs use a single quantum register `q` and a single classical
//! register `c` with one bit per system qubit:
//!
//! ```text
//! OPENQASM 2.0;
//! include "qelib1.inc";
//! qreg q[N];
//! creg c[M];
//! <gates>
//! measure q[s0] -> c[0];
//! ...
//! ```
//!
//! Accepted grammar (anything else is rejected):
//!
//! ```text
//! program   := "OPENQASM" real ";" [ "include" string ";" ] stmt*
//! stmt      := "qreg" id "[" int "]" ";"
//!            | "creg" id "[" int "]" ";"
//!            | gate [ "(" expr { "," expr } ")" ] operand { "," operand } ";"
//!            | "measure" operand "->" operand ";"
//! gate      := "u1" | "u2" | "u3" | "x" | "h" | "cx" | "ccx" | "ch"
//! operand   := id "[" int "]"
//! expr      := term { ("+" | "-") term }
//! term      := unary { ("*" | "/") unary }
//! unary     := "-" unary | real | "pi" | "(" expr ")"
//! ```
//!
//! `//` comments run to the end of the line. `u2(φ, λ)` is read as
//! `U3(π/2, φ, λ)`. Angles are written with Rust's shortest round-trip float
//! formatting, so emission followed by parsing reproduces every angle bit for
//! bit.

use std::fmt::{self, Write as _};

use thiserror::Error;

use super::{Circuit, CircuitError, Gate, U3Angles};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QasmOptions {
    /// Emit `ch` through its CNOT decomposition instead of the `ch` builtin.
    pub decompose_ch: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QasmErrorKind {
    Syntax(String),
    Unsupported(String),
    Register(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct QasmError {
    pub line: usize,
    pub column: usize,
    pub kind: QasmErrorKind,
}

impl fmt::Display for QasmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (label, msg) = match &self.kind {
            QasmErrorKind::Syntax(m) => ("syntax error", m),
            QasmErrorKind::Unsupported(m) => ("unsupported statement", m),
            QasmErrorKind::Register(m) => ("register mismatch", m),
        };
        write!(f, "line {}, column {}: {label}: {msg}", self.line, self.column)
    }
}

/// Emits `c` after lowering it with `opts`. Output is deterministic.
pub fn emit_qasm(c: &Circuit, opts: &QasmOptions) -> String {
    let low = c.lowered(opts);
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", low.num_qubits());
    let _ = writeln!(out, "creg c[{}];", low.system_qubits().len());
    for g in low.gates() {
        let line = match *g {
            Gate::X { target } => format!("x q[{target}];"),
            Gate::H { target } => format!("h q[{target}];"),
            Gate::U1 { lambda, target } => format!("u1({}) q[{target}];", num(lambda)),
            Gate::U3 { angles, target } => format!(
                "u3({},{},{}) q[{target}];",
                num(angles.theta),
                num(angles.phi),
                num(angles.lambda)
            ),
            Gate::Cnot { control, target } => format!("cx q[{control}],q[{target}];"),
            Gate::Ccnot { controls: [a, b], target } => {
                format!("ccx q[{a}],q[{b}],q[{target}];")
            }
            Gate::Ch { control, target } => format!("ch q[{control}],q[{target}];"),
            Gate::Acnot { .. } | Gate::AcU3 { .. } => unreachable!("lowered away"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    for (bit, q) in low.system_qubits().iter().enumerate() {
        let _ = writeln!(out, "measure q[{q}] -> c[{bit}];");
    }
    out
}

fn num(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Int(usize),
    Str(String),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(v) => write!(f, "`{v}`"),
            Tok::Int(v) => write!(f, "`{v}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, kind: QasmErrorKind) -> QasmError {
    QasmError { line, column, kind }
}

fn lex(text: &str) -> Result<Vec<Spanned>, QasmError> {
    let mut toks = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = match raw.find("//") {
            Some(i) => &raw[..i],
            None => raw,
        };
        let chars: Vec<char> = content.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            let column = i + 1;
            if ch.is_whitespace() {
                i += 1;
                continue;
            }
            let push = |toks: &mut Vec<Spanned>, tok| toks.push(Spanned { tok, line, column });
            if ch.is_ascii_alphabetic() || ch == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                push(&mut toks, Tok::Ident(chars[start..i].iter().collect()));
            } else if ch.is_ascii_digit() || ch == '.' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    i += 1;
                    if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                        i += 1;
                    }
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let s: String = chars[start..i].iter().collect();
                let tok = if s.chars().all(|c| c.is_ascii_digit()) {
                    s.parse::<usize>().map(Tok::Int).ok()
                } else {
                    s.parse::<f64>().map(Tok::Number).ok()
                };
                match tok {
                    Some(t) => push(&mut toks, t),
                    None => {
                        return Err(err(
                            line,
                            column,
                            QasmErrorKind::Syntax(format!("malformed number `{s}`")),
                        ))
                    }
                }
            } else if ch == '"' {
                let start = i + 1;
                i += 1;
                while i < chars.len() && chars[i] != '"' {
                    i += 1;
                }
                if i >= chars.len() {
                    return Err(err(line, column, QasmErrorKind::Syntax("unterminated string".into())));
                }
                push(&mut toks, Tok::Str(chars[start..i].iter().collect()));
                i += 1;
            } else if ch == '-' && chars.get(i + 1) == Some(&'>') {
                push(&mut toks, Tok::Sym("->"));
                i += 2;
            } else {
                let sym = match ch {
                    ';' => ";",
                    ',' => ",",
                    '(' => "(",
                    ')' => ")",
                    '[' => "[",
                    ']' => "]",
                    '+' => "+",
                    '-' => "-",
                    '*' => "*",
                    '/' => "/",
                    _ => {
                        return Err(err(
                            line,
                            column,
                            QasmErrorKind::Syntax(format!("unexpected character `{ch}`")),
                        ))
                    }
                };
                push(&mut toks, Tok::Sym(sym));
                i += 1;
            }
        }
    }
    Ok(toks)
}

struct Register {
    name: String,
    size: usize,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end_line: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        match self.peek() {
            Some(s) => (s.line, s.column),
            None => (self.end_line, 1),
        }
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, QasmError> {
        let (l, c) = self.here();
        Err(err(l, c, QasmErrorKind::Syntax(msg.into())))
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat_sym(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Spanned { tok: Tok::Sym(s), .. }) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, sym: &str, context: &str) -> Result<(), QasmError> {
        if self.eat_sym(sym) {
            return Ok(());
        }
        match self.peek() {
            Some(s) => {
                let found = s.tok.to_string();
                self.syntax(format!("expected `{sym}` {context}, found {found}"))
            }
            None => self.syntax(format!("expected `{sym}` {context}, found end of input")),
        }
    }

    fn expect_ident(&mut self, context: &str) -> Result<String, QasmError> {
        match self.peek().map(|s| s.tok.clone()) {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(name)
            }
            Some(other) => self.syntax(format!("expected identifier {context}, found {other}")),
            None => self.syntax(format!("expected identifier {context}, found end of input")),
        }
    }

    fn expect_int(&mut self, context: &str) -> Result<usize, QasmError> {
        match self.peek().map(|s| s.tok.clone()) {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(v)
            }
            Some(other) => self.syntax(format!("expected integer {context}, found {other}")),
            None => self.syntax(format!("expected integer {context}, found end of input")),
        }
    }

    fn expr(&mut self) -> Result<f64, QasmError> {
        let mut v = self.term()?;
        loop {
            if self.eat_sym("+") {
                v += self.term()?;
            } else if self.eat_sym("-") {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<f64, QasmError> {
        let mut v = self.unary()?;
        loop {
            if self.eat_sym("*") {
                v *= self.unary()?;
            } else if self.eat_sym("/") {
                v /= self.unary()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<f64, QasmError> {
        if self.eat_sym("-") {
            return Ok(-self.unary()?);
        }
        if self.eat_sym("(") {
            let v = self.expr()?;
            self.expect_sym(")", "to close the expression")?;
            return Ok(v);
        }
        match self.peek().map(|s| s.tok.clone()) {
            Some(Tok::Number(v)) => {
                self.pos += 1;
                Ok(v)
            }
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(v as f64)
            }
            Some(Tok::Ident(ref s)) if s == "pi" => {
                self.pos += 1;
                Ok(std::f64::consts::PI)
            }
            Some(other) => self.syntax(format!("expected a number, found {other}")),
            None => self.syntax("expected a number, found end of input"),
        }
    }

    fn operand(&mut self, reg: Option<&Register>, what: &str) -> Result<usize, QasmError> {
        let (line, column) = self.here();
        let name = self.expect_ident(&format!("as {what} operand"))?;
        self.expect_sym("[", "after register name")?;
        let idx = self.expect_int("as register index")?;
        self.expect_sym("]", "after register index")?;
        let reg = reg.ok_or_else(|| {
            err(line, column, QasmErrorKind::Register(format!("{what} register not declared")))
        })?;
        if name != reg.name {
            return Err(err(
                line,
                column,
                QasmErrorKind::Register(format!(
                    "unknown {what} register `{name}` (declared `{}`)",
                    reg.name
                )),
            ));
        }
        if idx >= reg.size {
            return Err(err(
                line,
                column,
                QasmErrorKind::Register(format!("index {idx} out of range for `{name}[{}]`", reg.size)),
            ));
        }
        Ok(idx)
    }
}

/// Parses a program in the subset produced by [`emit_qasm`].
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end_line: text.lines().count().max(1),
    };

    match p.next() {
        Some(Spanned { tok: Tok::Ident(ref s), .. }) if s == "OPENQASM" => {}
        _ => {
            p.pos = 0;
            return p.syntax("program must start with `OPENQASM 2.0;`");
        }
    }
    let (vl, vc) = p.here();
    let version = p.expr()?;
    if version != 2.0 {
        return Err(err(vl, vc, QasmErrorKind::Unsupported(format!("OpenQASM version {version}"))));
    }
    p.expect_sym(";", "after version")?;

    let mut qreg: Option<Register> = None;
    let mut creg: Option<Register> = None;
    let mut gates: Vec<Gate> = Vec::new();
    let mut measures: Vec<(usize, usize, usize, usize)> = Vec::new();

    while let Some(head) = p.next() {
        let (line, column) = (head.line, head.column);
        let word = match head.tok {
            Tok::Ident(w) => w,
            other => {
                return Err(err(
                    line,
                    column,
                    QasmErrorKind::Syntax(format!("expected a statement, found {other}")),
                ))
            }
        };
        match word.as_str() {
            "include" => {
                match p.next().map(|s| s.tok) {
                    Some(Tok::Str(ref f)) if f == "qelib1.inc" => {}
                    Some(Tok::Str(f)) => {
                        return Err(err(line, column, QasmErrorKind::Unsupported(format!("include \"{f}\""))))
                    }
                    _ => return Err(err(line, column, QasmErrorKind::Syntax("include expects a file name".into()))),
                }
                p.expect_sym(";", "after include")?;
            }
            "qreg" | "creg" => {
                let name = p.expect_ident("as register name")?;
                p.expect_sym("[", "after register name")?;
                let size = p.expect_int("as register size")?;
                p.expect_sym("]", "after register size")?;
                p.expect_sym(";", "after register declaration")?;
                let slot = if word == "qreg" { &mut qreg } else { &mut creg };
                if slot.is_some() {
                    return Err(err(
                        line,
                        column,
                        QasmErrorKind::Unsupported(format!("more than one {word} declaration")),
                    ));
                }
                *slot = Some(Register { name, size });
            }
            "measure" => {
                let (ql, qc) = p.here();
                let q = p.operand(qreg.as_ref(), "quantum")?;
                p.expect_sym("->", "in measure")?;
                let (cl, cc) = p.here();
                let c = p.operand(creg.as_ref(), "classical")?;
                p.expect_sym(";", "after measure")?;
                measures.push((q, c, ql.min(cl), qc.min(cc)));
            }
            name => {
                let arity = match name {
                    "u1" | "u2" | "u3" | "x" | "h" => 1,
                    "cx" | "ch" => 2,
                    "ccx" => 3,
                    _ => {
                        return Err(err(line, column, QasmErrorKind::Unsupported(format!("gate `{name}`"))))
                    }
                };
                let nparams = match name {
                    "u1" => 1,
                    "u2" => 2,
                    "u3" => 3,
                    _ => 0,
                };
                let mut params = Vec::new();
                if p.eat_sym("(") {
                    params.push(p.expr()?);
                    while p.eat_sym(",") {
                        params.push(p.expr()?);
                    }
                    p.expect_sym(")", "after gate parameters")?;
                }
                if params.len() != nparams {
                    return Err(err(
                        line,
                        column,
                        QasmErrorKind::Syntax(format!(
                            "line {line}: `{name}` takes {nparams} parameter(s), got {}",
                            params.len()
                        )),
                    ));
                }
                let mut qubits = vec![p.operand(qreg.as_ref(), "quantum")?];
                while p.eat_sym(",") {
                    qubits.push(p.operand(qreg.as_ref(), "quantum")?);
                }
                if qubits.len() != arity {
                    return Err(err(
                        line,
                        column,
                        QasmErrorKind::Syntax(format!(
                            "line {line}: `{name}` takes {arity} qubit operand(s), got {}",
                            qubits.len()
                        )),
                    ));
                }
                p.expect_sym(";", "after gate operands")?;
                if !measures.is_empty() {
                    return Err(err(
                        line,
                        column,
                        QasmErrorKind::Unsupported("gate after measurement".into()),
                    ));
                }
                let gate = match name {
                    "u1" => Gate::U1 { lambda: params[0], target: qubits[0] },
                    "u2" => Gate::U3 {
                        angles: U3Angles::new(std::f64::consts::FRAC_PI_2, params[0], params[1]),
                        target: qubits[0],
                    },
                    "u3" => Gate::U3 {
                        angles: U3Angles::new(params[0], params[1], params[2]),
                        target: qubits[0],
                    },
                    "x" => Gate::X { target: qubits[0] },
                    "h" => Gate::H { target: qubits[0] },
                    "cx" => Gate::Cnot { control: qubits[0], target: qubits[1] },
                    "ch" => Gate::Ch { control: qubits[0], target: qubits[1] },
                    _ => Gate::Ccnot { controls: [qubits[0], qubits[1]], target: qubits[2] },
                };
                if let Err(e) = gate.check_distinct() {
                    return Err(err(line, column, QasmErrorKind::Syntax(e.to_string())));
                }
                gates.push(gate);
            }
        }
    }

    let (end_line, _) = p.here();
    let qreg = qreg.ok_or_else(|| err(end_line, 1, QasmErrorKind::Register("no qreg declared".into())))?;
    let creg = creg.ok_or_else(|| err(end_line, 1, QasmErrorKind::Register("no creg declared".into())))?;
    if measures.is_empty() {
        return Err(err(end_line, 1, QasmErrorKind::Register("no measurements".into())));
    }
    let mut system: Vec<Option<usize>> = vec![None; creg.size];
    for &(q, c, line, column) in &measures {
        if system[c].is_some() {
            return Err(err(line, column, QasmErrorKind::Register(format!("c[{c}] measured twice"))));
        }
        if system.contains(&Some(q)) {
            return Err(err(line, column, QasmErrorKind::Register(format!("q[{q}] measured twice"))));
        }
        system[c] = Some(q);
    }
    let system_qubits = system
        .iter()
        .enumerate()
        .map(|(bit, q)| {
            q.ok_or_else(|| {
                err(end_line, 1, QasmErrorKind::Register(format!("c[{bit}] is never measured")))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    Circuit::with_gates(qreg.size, system_qubits, gates).map_err(|e: CircuitError| {
        err(end_line, 1, QasmErrorKind::Register(e.to_string()))
    })
}
