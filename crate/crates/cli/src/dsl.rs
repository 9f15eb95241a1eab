//! Module descriptions such as `sp(2) x gl(3) x gl(2) x gl(1) : std(1) + chain`.
//!
//! ```text
//! spec    := group ":" module
//! group   := factor ("x" factor)*
//! factor  := ("gl"|"sl"|"so"|"sp") "(" INT ")"
//! module  := term ("+" term)*
//! term    := atom ("*" atom)*
//! atom    := "std" "(" INT ")" | "dual" "(" INT ")" | "chain"
//! ```

use std::fmt;

use etale::castling::{Side, TensorShape};
use etale::liealg::{FactorKind, LieAlgebra};
use etale::rep::Representation;
use etale::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorSpec {
    pub kind: FactorKind,
    pub n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Atom {
    /// 1-based factor index.
    Std(usize),
    Dual(usize),
    Chain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSpec {
    pub factors: Vec<FactorSpec>,
    pub terms: Vec<Vec<Atom>>,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Std(i) => write!(f, "std({i})"),
            Atom::Dual(i) => write!(f, "dual({i})"),
            Atom::Chain => f.write_str("chain"),
        }
    }
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self.factors.iter().map(|x| format!("{}({})", x.kind, x.n)).collect();
        let terms: Vec<String> = self.terms.iter().map(|t| join(t, " * ")).collect();
        write!(f, "{} : {}", factors.join(" x "), terms.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(usize),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
        } else if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
                s.push(bump(&mut chars).unwrap());
            }
            out.push(Lexed { tok: Tok::Ident(s), line: l, column: col });
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while chars.peek().is_some_and(char::is_ascii_digit) {
                s.push(bump(&mut chars).unwrap());
            }
            let n = s.parse().map_err(|_| parse_error(l, col, format!("integer `{s}` is too large")))?;
            out.push(Lexed { tok: Tok::Int(n), line: l, column: col });
        } else if "():+*".contains(c) {
            bump(&mut chars);
            out.push(Lexed { tok: Tok::Sym(c), line: l, column: col });
        } else {
            return Err(parse_error(l, col, format!("unexpected character `{c}`")));
        }
    }
    out.push(Lexed { tok: Tok::End, line, column });
    Ok(out)
}

fn parse_error(line: usize, column: usize, message: String) -> Error {
    Error::Parse { line, column, message }
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Lexed {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> &Lexed {
        let t = &self.toks[self.pos];
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, expected: &str) -> Error {
        let t = self.peek();
        parse_error(t.line, t.column, format!("expected {expected}, found {}", t.tok))
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.peek().tok == Tok::Sym(c) {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(&format!("`{c}`")))
        }
    }

    fn paren_int(&mut self) -> Result<(usize, usize, usize)> {
        self.expect_sym('(')?;
        let t = self.peek();
        let (line, column) = (t.line, t.column);
        let Tok::Int(n) = t.tok else {
            return Err(self.error_here("an integer"));
        };
        self.next();
        self.expect_sym(')')?;
        Ok((n, line, column))
    }

    fn factor(&mut self) -> Result<FactorSpec> {
        let kind = match &self.peek().tok {
            Tok::Ident(s) if s == "gl" => FactorKind::Gl,
            Tok::Ident(s) if s == "sl" => FactorKind::Sl,
            Tok::Ident(s) if s == "so" => FactorKind::So,
            Tok::Ident(s) if s == "sp" => FactorKind::Sp,
            _ => return Err(self.error_here("a factor gl(n), sl(n), so(n) or sp(n)")),
        };
        self.next();
        let (n, line, column) = self.paren_int()?;
        if n == 0 {
            return Err(parse_error(line, column, "factor size must be at least 1".into()));
        }
        Ok(FactorSpec { kind, n })
    }

    fn atom(&mut self, factor_count: usize) -> Result<Atom> {
        let wrap: fn(usize) -> Atom = match &self.peek().tok {
            Tok::Ident(s) if s == "chain" => {
                self.next();
                return Ok(Atom::Chain);
            }
            Tok::Ident(s) if s == "std" => Atom::Std,
            Tok::Ident(s) if s == "dual" => Atom::Dual,
            _ => return Err(self.error_here("std(i), dual(i) or chain")),
        };
        self.next();
        let (i, line, column) = self.paren_int()?;
        if i == 0 || i > factor_count {
            return Err(parse_error(
                line,
                column,
                format!("unknown factor index {i} (there are {factor_count} factors)"),
            ));
        }
        Ok(wrap(i))
    }

    fn spec(&mut self) -> Result<ModuleSpec> {
        let mut factors = vec![self.factor()?];
        while matches!(&self.peek().tok, Tok::Ident(s) if s == "x") {
            self.next();
            factors.push(self.factor()?);
        }
        self.expect_sym(':')?;
        let mut terms = Vec::new();
        loop {
            let mut term = vec![self.atom(factors.len())?];
            while self.peek().tok == Tok::Sym('*') {
                self.next();
                term.push(self.atom(factors.len())?);
            }
            terms.push(term);
            if self.peek().tok != Tok::Sym('+') {
                break;
            }
            self.next();
        }
        if self.peek().tok != Tok::End {
            return Err(self.error_here("`+`, `*` or end of input"));
        }
        Ok(ModuleSpec { factors, terms })
    }
}

pub fn parse_spec(text: &str) -> Result<ModuleSpec> {
    Parser { toks: lex(text)?, pos: 0 }.spec()
}

impl ModuleSpec {
    pub fn algebra(&self) -> Result<LieAlgebra> {
        let parts = self
            .factors
            .iter()
            .map(|f| LieAlgebra::classical(f.kind, f.n))
            .collect::<Result<Vec<_>>>()?;
        LieAlgebra::product(&parts)
    }

    pub fn build(&self) -> Result<(LieAlgebra, Representation)> {
        let alg = self.algebra()?;
        let atom_rep = |a: &Atom| match a {
            Atom::Std(i) => Representation::factor_standard(&alg, i - 1),
            Atom::Dual(i) => Ok(Representation::factor_standard(&alg, i - 1)?.dual()),
            Atom::Chain => Representation::chain(&alg),
        };
        let terms = self
            .terms
            .iter()
            .map(|term| {
                let mut rep = atom_rep(&term[0])?;
                for a in &term[1..] {
                    rep = rep.tensor(&atom_rep(a)?)?;
                }
                Ok(if term.len() > 1 { rep.with_label(&join(term, "*")) } else { rep })
            })
            .collect::<Result<Vec<_>>>()?;
        let rep = Representation::direct_sum(&terms)?;
        Ok((alg, rep))
    }
}

/// `"<spec> @ gl(N)"`, optionally followed by `dual`. The core is the whole
/// module of `<spec>`.
pub fn parse_tensor_shape(text: &str) -> Result<TensorShape> {
    let Some(at) = text.rfind('@') else {
        return Err(parse_error(1, text.chars().count() + 1, "expected `@ gl(N)` after the core module".into()));
    };
    let (_, core) = parse_spec(&text[..at])?.build()?;
    // Positions in the tail are reported relative to the whole text.
    let tail = &text[at + 1..];
    let offset = text[..=at].chars().count();
    let shift = |e: Error| match e {
        Error::Parse { line: 1, column, message } => parse_error(1, column + offset, message),
        other => other,
    };
    let toks = lex(tail).map_err(shift)?;
    let mut p = Parser { toks, pos: 0 };
    let gl = p.factor().map_err(shift)?;
    if gl.kind != FactorKind::Gl {
        return Err(shift(parse_error(1, 1, "castling needs a gl(N) factor".into())));
    }
    let side = match &p.peek().tok {
        Tok::Ident(s) if s == "dual" => {
            p.next();
            Side::DualCore
        }
        _ => Side::Plain,
    };
    if p.peek().tok != Tok::End {
        return Err(shift(p.error_here("`dual` or end of input")));
    }
    Ok(TensorShape::new(core, gl.n, side))
}

/// Inverse of [`parse_tensor_shape`] for shapes whose core came from `core_text`.
pub fn print_tensor_shape(core_text: &str, shape: &TensorShape) -> String {
    let dual = if shape.side == Side::DualCore { " dual" } else { "" };
    format!("{core_text} @ gl({}){dual}", shape.gl_size)
}
