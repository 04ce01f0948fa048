//! OpenQASM 2.0 subset: one quantum register, the built-in gate kinds,
//! `barrier`, and comments.

use std::fmt;

use crate::circuit::Circuit;
use crate::gate::{Gate, GateKind};
use crate::{Error, Result};

/// A located parse error. Line and column are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseDiagnostic {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Str(String),
    Punct(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> std::result::Result<Vec<Token>, ParseDiagnostic> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, column, message: String| ParseDiagnostic { line, column, message };
    while i < chars.len() {
        let ch = chars[i];
        let (l0, c0) = (line, col);
        if ch == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if ch.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if ch == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: l0, column: c0 });
            continue;
        }
        if ch.is_ascii_digit() || (ch == '.' && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let value = text.parse::<f64>().map_err(|_| err(l0, c0, format!("malformed number `{text}`")))?;
            out.push(Token { tok: Tok::Number(value), line: l0, column: c0 });
            continue;
        }
        if ch == '"' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(err(l0, c0, "unterminated string".into()));
            }
            let s: String = chars[start..i].iter().collect();
            i += 1;
            col += s.chars().count() + 2;
            out.push(Token { tok: Tok::Str(s), line: l0, column: c0 });
            continue;
        }
        if "[](),;+-*/^>".contains(ch) {
            i += 1;
            col += 1;
            out.push(Token { tok: Tok::Punct(ch), line: l0, column: c0 });
            continue;
        }
        return Err(err(l0, c0, format!("unexpected character `{ch}`")));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    eof: (usize, usize),
}

type PResult<T> = std::result::Result<T, ParseDiagnostic>;

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|t| (t.line, t.column)).unwrap_or(self.eof)
    }

    fn error<T>(&self, at: (usize, usize), message: impl Into<String>) -> PResult<T> {
        Err(ParseDiagnostic { line: at.0, column: at.1, message: message.into() })
    }

    fn next(&mut self) -> PResult<Token> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => self.error(self.eof, "unexpected end of input"),
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Token { tok: Tok::Punct(p), .. }) if *p == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, c: char) -> PResult<()> {
        let at = self.here();
        if self.eat_punct(c) {
            Ok(())
        } else {
            self.error(at, format!("expected `{c}`"))
        }
    }

    fn expect_ident(&mut self) -> PResult<(String, (usize, usize))> {
        let t = self.next()?;
        match t.tok {
            Tok::Ident(s) => Ok((s, (t.line, t.column))),
            _ => self.error((t.line, t.column), "expected identifier"),
        }
    }

    fn expect_int(&mut self) -> PResult<usize> {
        let t = self.next()?;
        match t.tok {
            Tok::Number(v) if v.fract() == 0.0 && v >= 0.0 && v < 1e9 => Ok(v as usize),
            _ => self.error((t.line, t.column), "expected non-negative integer"),
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> PResult<f64> {
        let mut v = self.term()?;
        loop {
            if self.eat_punct('+') {
                v += self.term()?;
            } else if self.eat_punct('-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> PResult<f64> {
        let mut v = self.unary()?;
        loop {
            if self.eat_punct('*') {
                v *= self.unary()?;
            } else if self.eat_punct('/') {
                let at = self.here();
                let d = self.unary()?;
                if d == 0.0 {
                    return self.error(at, "division by zero");
                }
                v /= d;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> PResult<f64> {
        if self.eat_punct('-') {
            return Ok(-self.unary()?);
        }
        if self.eat_punct('+') {
            return self.unary();
        }
        let t = self.next()?;
        match t.tok {
            Tok::Number(v) => Ok(v),
            Tok::Ident(ref s) if s == "pi" => Ok(std::f64::consts::PI),
            Tok::Punct('(') => {
                let v = self.expr()?;
                self.expect_punct(')')?;
                Ok(v)
            }
            _ => self.error((t.line, t.column), "expected a constant expression"),
        }
    }
}

fn kind_for(name: &str) -> Option<GateKind> {
    GateKind::from_qasm_name(name).or(match name {
        "CX" => Some(GateKind::Cx),
        "p" => Some(GateKind::U1),
        "u" | "U" => Some(GateKind::U3),
        "cu1" | "cphase" => Some(GateKind::Cp),
        _ => None,
    })
}

/// Parses OpenQASM 2.0 source into a circuit. Gate order follows statement
/// order; barriers are kept only as markers.
pub fn parse_qasm(source: &str) -> Result<Circuit> {
    parse(source).map_err(Error::from)
}

fn parse(source: &str) -> PResult<Circuit> {
    let toks = lex(source)?;
    let last_line = source.lines().count().max(1);
    let last_col = source.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
    let mut p = Parser { toks, pos: 0, eof: (last_line, last_col) };
    let mut reg: Option<(String, usize)> = None;
    let mut circuit = Circuit::new(0);

    while p.peek().is_some() {
        let (word, at) = p.expect_ident()?;
        match word.as_str() {
            "OPENQASM" => {
                let vat = p.here();
                let v = p.next()?;
                if !matches!(v.tok, Tok::Number(x) if x == 2.0) {
                    return p.error(vat, "only OPENQASM 2.0 is supported");
                }
                p.expect_punct(';')?;
            }
            "include" => {
                let t = p.next()?;
                match t.tok {
                    Tok::Str(ref s) if s == "qelib1.inc" => {}
                    _ => return p.error(at, "include files are not supported (only qelib1.inc)"),
                }
                p.expect_punct(';')?;
            }
            "qreg" => {
                if reg.is_some() {
                    return p.error(at, "only a single quantum register is supported");
                }
                let (name, _) = p.expect_ident()?;
                p.expect_punct('[')?;
                let size = p.expect_int()?;
                p.expect_punct(']')?;
                p.expect_punct(';')?;
                if size == 0 || size > 48 {
                    return p.error(at, format!("register size {size} outside 1..=48"));
                }
                circuit = Circuit::new(size);
                reg = Some((name, size));
            }
            "barrier" => {
                let Some(r) = reg.clone() else { return p.error(at, "barrier before qreg") };
                // `barrier q;` or `barrier q[i], q[j];`
                loop {
                    let (name, nat) = p.expect_ident()?;
                    if name != r.0 {
                        return p.error(nat, format!("unknown register `{name}`"));
                    }
                    if p.eat_punct('[') {
                        let iat = p.here();
                        let i = p.expect_int()?;
                        if i >= r.1 {
                            return p.error(iat, format!("qubit index {i} out of range for {}[{}]", r.0, r.1));
                        }
                        p.expect_punct(']')?;
                    }
                    if !p.eat_punct(',') {
                        break;
                    }
                }
                p.expect_punct(';')?;
                circuit.push_barrier();
            }
            "measure" | "creg" | "if" | "gate" | "opaque" | "reset" => {
                return p.error(at, format!("unsupported statement `{word}`"));
            }
            name => {
                let Some(kind) = kind_for(name) else {
                    return p.error(at, format!("unknown gate `{name}`"));
                };
                let Some(r) = reg.clone() else { return p.error(at, "gate application before qreg") };
                let mut params = Vec::new();
                if p.eat_punct('(') {
                    if !p.eat_punct(')') {
                        loop {
                            params.push(p.expr()?);
                            if p.eat_punct(')') {
                                break;
                            }
                            p.expect_punct(',')?;
                        }
                    }
                }
                let mut qubits = Vec::new();
                loop {
                    let (rname, nat) = p.expect_ident()?;
                    if rname != r.0 {
                        return p.error(nat, format!("unknown register `{rname}`"));
                    }
                    p.expect_punct('[')?;
                    let iat = p.here();
                    let i = p.expect_int()?;
                    if i >= r.1 {
                        return p.error(iat, format!("qubit index {i} out of range for {}[{}]", r.0, r.1));
                    }
                    p.expect_punct(']')?;
                    qubits.push(i);
                    if !p.eat_punct(',') {
                        break;
                    }
                }
                p.expect_punct(';')?;
                let (nc, _, _) = kind.arity().expect("standard kind");
                if qubits.len() < nc {
                    return p.error(at, format!("{name} expects more qubit arguments"));
                }
                let targets = qubits.split_off(nc);
                let gate = Gate::standard(kind, qubits, targets, params).or_else(|e| p.error(at, e.to_string()))?;
                circuit.push(gate).or_else(|e| p.error(at, e.to_string()))?;
            }
        }
    }
    if reg.is_none() {
        return p.error(p.eof, "missing qreg declaration");
    }
    Ok(circuit)
}

/// Serialises a circuit. Generic unitary and diagonal gates have no
/// OpenQASM spelling and are rejected.
pub fn emit_qasm(circuit: &Circuit) -> Result<String> {
    use std::fmt::Write;
    let mut out = String::from("OPENQASM 2.0;\n");
    writeln!(out, "qreg q[{}];", circuit.n()).unwrap();
    let mut barriers = circuit.barriers().iter().peekable();
    for (i, g) in circuit.gates().iter().enumerate() {
        while barriers.next_if(|&&b| b == i).is_some() {
            out.push_str("barrier q;\n");
        }
        if g.kind().is_generic() {
            return Err(Error::UnsupportedExport(g.kind().name()));
        }
        out.push_str(g.kind().name());
        if !g.params().is_empty() {
            let ps: Vec<String> = g.params().iter().map(|p| p.to_string()).collect();
            write!(out, "({})", ps.join(",")).unwrap();
        }
        let qs: Vec<String> = g.support().iter().map(|q| format!("q[{q}]")).collect();
        writeln!(out, " {};", qs.join(",")).unwrap();
    }
    for _ in barriers {
        out.push_str("barrier q;\n");
    }
    Ok(out)
}
