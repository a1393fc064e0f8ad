//! Expression syntax: abstract syntax tree, parser and canonical printer.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := prefix (('*' | '/') prefix)*
//! prefix := '-' prefix | 'D' prefix | 'd/d' ref prefix | power
//! power  := atom ('^' '-'? int)?
//! atom   := rational | 'i' | '(' expr ')' | '[' expr ',' expr ']'
//!         | 'delta' '(' index ',' index ')' | ref
//! ref    := ident ('[' index ']')*
//! index  := int | ident
//! ```
//!
//! Printing is canonical: explicit `*`, bracket commutators, minimal
//! parentheses, so `print(parse(print(e))) == print(e)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Index {
    Lit(u32),
    Var(String),
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Lit(n) => write!(f, "{n}"),
            Index::Var(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(BigRational),
    Imag,
    /// Generator, parameter or macro reference; resolved at evaluation.
    Ref { name: String, indices: Vec<Index> },
    Delta(Index, Index),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Comm(Box<Expr>, Box<Expr>),
    /// `d/dX[i] e`
    Partial { name: String, indices: Vec<Index>, arg: Box<Expr> },
    /// `D e`
    TimeDeriv(Box<Expr>),
}

impl Expr {
    pub fn reference(name: &str, indices: &[u32]) -> Expr {
        Expr::Ref { name: name.to_string(), indices: indices.iter().map(|&i| Index::Lit(i)).collect() }
    }

    pub fn int(n: i64) -> Expr {
        Expr::Num(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn comm(a: Expr, b: Expr) -> Expr {
        Expr::Comm(Box::new(a), Box::new(b))
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) | Expr::Partial { .. } | Expr::TimeDeriv(_) => 3,
            Expr::Num(q) if q.is_negative() => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write_min(&self, min: u8, out: &mut String) {
        if self.prec() < min {
            out.push('(');
            self.write(out);
            out.push(')');
        } else {
            self.write(out);
        }
    }

    fn write(&self, out: &mut String) {
        match self {
            Expr::Num(q) => {
                if q.is_negative() {
                    out.push('-');
                }
                let a = q.abs();
                if a.denom() == &BigInt::from(1) {
                    out.push_str(&a.numer().to_string());
                } else {
                    out.push_str(&format!("{}/{}", a.numer(), a.denom()));
                }
            }
            Expr::Imag => out.push('i'),
            Expr::Ref { name, indices } => {
                out.push_str(name);
                for i in indices {
                    out.push_str(&format!("[{i}]"));
                }
            }
            Expr::Delta(a, b) => out.push_str(&format!("delta({a},{b})")),
            Expr::Neg(a) => {
                out.push('-');
                a.write_min(3, out);
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_min(1, out);
                out.push_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " });
                b.write_min(2, out);
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.write_min(2, out);
                out.push(if matches!(self, Expr::Mul(..)) { '*' } else { '/' });
                b.write_min(3, out);
            }
            Expr::Pow(a, n) => {
                a.write_min(5, out);
                out.push_str(&format!("^{n}"));
            }
            Expr::Comm(a, b) => {
                out.push('[');
                a.write(out);
                out.push(',');
                b.write(out);
                out.push(']');
            }
            Expr::Partial { name, indices, arg } => {
                out.push_str("d/d");
                out.push_str(name);
                for i in indices {
                    out.push_str(&format!("[{i}]"));
                }
                out.push(' ');
                // a bare `[` here would extend the index list
                arg.write_min(if matches!(**arg, Expr::Comm(..)) { 6 } else { 3 }, out);
            }
            Expr::TimeDeriv(a) => {
                out.push_str("D ");
                // `D -x` would read as a subtraction
                let signed = matches!(**a, Expr::Neg(_)) || matches!(&**a, Expr::Num(q) if q.is_negative());
                a.write_min(if signed { 4 } else { 3 }, out);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s);
        f.write_str(&s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at line {line}, column {column}: expected {}, found {found}", expected.join(" or "))]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Int(u32),
    Ident(String),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(q) => write!(f, "`{q}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Lexer;

impl Lexer {
    /// Tokens with 1-based (line, column) positions.
    fn tokenize(text: &str, line0: usize, col0: usize) -> Result<Vec<(Tok, usize, usize)>, SyntaxError> {
        let chars: Vec<char> = text.chars().collect();
        let mut out = Vec::new();
        let (mut line, mut col) = (line0, col0);
        let mut k = 0;
        while k < chars.len() {
            let c = chars[k];
            let (tl, tc) = (line, col);
            if c == '\n' {
                line += 1;
                col = 1;
                k += 1;
                continue;
            }
            if c.is_whitespace() {
                col += 1;
                k += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let numer: String = chars[start..k].iter().collect();
                let mut denom: Option<String> = None;
                // an exponent is an integer: `x^2/3` is `(x^2)/3`
                let after_caret = matches!(
                    out.as_slice(),
                    [.., (Tok::Sym('^'), _, _)] | [.., (Tok::Sym('^'), _, _), (Tok::Sym('-'), _, _)]
                );
                if !after_caret && k + 1 < chars.len() && chars[k] == '/' && chars[k + 1].is_ascii_digit() {
                    let ds = k + 1;
                    k = ds;
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                    denom = Some(chars[ds..k].iter().collect());
                }
                col += k - start;
                let n: BigInt = numer.parse().expect("digits");
                let tok = match denom {
                    None => match numer.parse::<u32>() {
                        Ok(small) => Tok::Int(small),
                        Err(_) => Tok::Num(BigRational::from_integer(n)),
                    },
                    Some(d) => {
                        let d: BigInt = d.parse().expect("digits");
                        if d.is_zero() {
                            return Err(SyntaxError {
                                line: tl,
                                column: tc,
                                expected: vec!["nonzero denominator".into()],
                                found: "`0`".into(),
                            });
                        }
                        Tok::Num(BigRational::new(n, d))
                    }
                };
                out.push((tok, tl, tc));
                continue;
            }
            if c.is_alphabetic() || c == '_' {
                let start = k;
                while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                    k += 1;
                }
                col += k - start;
                out.push((Tok::Ident(chars[start..k].iter().collect()), tl, tc));
                continue;
            }
            if "+-*/^[](),.<>=".contains(c) {
                out.push((Tok::Sym(c), tl, tc));
                col += 1;
                k += 1;
                continue;
            }
            return Err(SyntaxError {
                line: tl,
                column: tc,
                expected: vec!["expression".into()],
                found: format!("`{c}`"),
            });
        }
        out.push((Tok::Eof, line, col));
        Ok(out)
    }
}

pub struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    pub fn new(text: &str) -> Result<Parser, SyntaxError> {
        Parser::at(text, 1, 1)
    }

    /// A parser whose error positions start at (`line`, `column`).
    pub fn at(text: &str, line: usize, column: usize) -> Result<Parser, SyntaxError> {
        Ok(Parser { toks: Lexer::tokenize(text, line, column)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, expected: &[&str]) -> SyntaxError {
        let (t, line, column) = &self.toks[self.pos];
        SyntaxError {
            line: *line,
            column: *column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.to_string(),
        }
    }

    /// Position of the next token.
    pub fn position(&self) -> (usize, usize) {
        let (_, l, c) = &self.toks[self.pos];
        (*l, *c)
    }

    fn expect_sym(&mut self, c: char) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[&format!("`{c}`")]))
        }
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn at_end(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub fn expect_end(&self) -> Result<(), SyntaxError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(&["operator", "end of input"]))
        }
    }

    pub fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    pub fn int(&mut self) -> Result<u32, SyntaxError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.error(&["integer"])),
        }
    }

    pub fn index(&mut self) -> Result<Index, SyntaxError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Index::Lit(n))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Index::Var(s))
            }
            _ => Err(self.error(&["index"])),
        }
    }

    /// `[idx][idx]...` after a name.
    pub fn indices(&mut self) -> Result<Vec<Index>, SyntaxError> {
        let mut v = Vec::new();
        while *self.peek() == Tok::Sym('[') {
            self.bump();
            v.push(self.index()?);
            self.expect_sym(']')?;
        }
        Ok(v)
    }

    pub fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat_sym('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_sym('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.prefix()?;
        loop {
            if self.eat_sym('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.prefix()?));
            } else if self.eat_sym('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.prefix()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn prefix(&mut self) -> Result<Expr, SyntaxError> {
        if self.eat_sym('-') {
            return Ok(Expr::Neg(Box::new(self.prefix()?)));
        }
        if let Tok::Ident(s) = self.peek() {
            if s == "D" && self.starts_operand(1) {
                self.bump();
                return Ok(Expr::TimeDeriv(Box::new(self.prefix()?)));
            }
            if s == "d" && *self.peek_at(1) == Tok::Sym('/') {
                if let Tok::Ident(v) = self.peek_at(2) {
                    if v.len() > 1 && v.starts_with('d') {
                        let name = v[1..].to_string();
                        self.bump();
                        self.bump();
                        self.bump();
                        let indices = self.indices()?;
                        let arg = self.prefix()?;
                        return Ok(Expr::Partial { name, indices, arg: Box::new(arg) });
                    }
                }
            }
        }
        self.power()
    }

    fn starts_operand(&self, k: usize) -> bool {
        matches!(self.peek_at(k), Tok::Ident(_) | Tok::Int(_) | Tok::Num(_) | Tok::Sym('(') | Tok::Sym('['))
    }

    fn power(&mut self) -> Result<Expr, SyntaxError> {
        let base = self.atom()?;
        if self.eat_sym('^') {
            let neg = self.eat_sym('-');
            let n = self.int()? as i32;
            return Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Num(BigRational::from_integer(BigInt::from(n))))
            }
            Tok::Num(q) => {
                self.bump();
                Ok(Expr::Num(q))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Sym('[') => {
                self.bump();
                let a = self.expr()?;
                self.expect_sym(',')?;
                let b = self.expr()?;
                self.expect_sym(']')?;
                Ok(Expr::Comm(Box::new(a), Box::new(b)))
            }
            Tok::Ident(s) if s == "i" => {
                self.bump();
                Ok(Expr::Imag)
            }
            Tok::Ident(s) if s == "delta" && *self.peek_at(1) == Tok::Sym('(') => {
                self.bump();
                self.bump();
                let a = self.index()?;
                self.expect_sym(',')?;
                let b = self.index()?;
                self.expect_sym(')')?;
                Ok(Expr::Delta(a, b))
            }
            Tok::Ident(name) => {
                self.bump();
                let indices = self.indices()?;
                Ok(Expr::Ref { name, indices })
            }
            _ => Err(self.error(&["number", "generator", "`(`", "`[`"])),
        }
    }
}

/// Parse a complete expression.
pub fn parse_expr(text: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}
