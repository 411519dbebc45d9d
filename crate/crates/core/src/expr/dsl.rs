//! Text form of birdtrack expressions.
//!
//! ```text
//! expr    := item*              (an empty product is the identity, `1`)
//! item    := rational | 'k' int | factor | macro   ('*' or '·' may separate items)
//! factor  := 'S' group+ | 'A' group+ | 'p' cycle*
//! group   := '{' int (sep int)* '}'
//! macro   := '<Y_' tableau '>' | '<Ybar_' tableau '>' | '<KS_' tableau '>'
//! ```
//!
//! Canonical output is `rational * k1 * factor factor …`, omitting a unit
//! scalar; the identity prints as `1` and zero as `0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ast::{BirdtrackExpr, Factor, Scalar, SetKind};
use super::builders;
use crate::error::{Error, Result};
use crate::symgroup::{fmt_rational, Permutation};
use crate::tableau::parse_tableau;

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.bump();
        }
    }

    fn skip_separators(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace() || c == '*' || c == '·') {
            self.bump();
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected an integer"));
        }
        Ok(self.src[start..self.pos].parse().unwrap())
    }

    fn small_uint(&mut self) -> Result<u32> {
        let start = self.pos;
        let v = self.uint()?;
        u32::try_from(v).map_err(|_| Error::parse(start, "index too large"))
    }

    fn rational(&mut self) -> Result<BigRational> {
        let start = self.pos;
        let neg = if self.peek() == Some('-') {
            self.bump();
            true
        } else {
            false
        };
        let n = self.uint()?;
        let d = if self.peek() == Some('/') {
            self.bump();
            self.uint()?
        } else {
            BigInt::one()
        };
        if d.is_zero() {
            return Err(Error::parse(start, "zero denominator"));
        }
        let q = BigRational::new(n, d);
        Ok(if neg { -q } else { q })
    }

    fn groups(&mut self) -> Result<Vec<Vec<u32>>> {
        let mut groups = Vec::new();
        loop {
            self.skip_ws();
            if self.peek() != Some('{') {
                break;
            }
            let open = self.pos;
            self.bump();
            let mut g = Vec::new();
            loop {
                self.skip_ws();
                match self.peek() {
                    Some('}') => {
                        self.bump();
                        break;
                    }
                    Some(',') if !g.is_empty() => {
                        self.bump();
                    }
                    Some(c) if c.is_ascii_digit() => {
                        let p = self.pos;
                        let v = self.small_uint()?;
                        if v == 0 {
                            return Err(Error::parse(p, "indices are 1-based"));
                        }
                        if g.contains(&v) {
                            return Err(Error::parse(p, format!("index {v} repeated within a set")));
                        }
                        g.push(v);
                    }
                    Some(c) => return Err(Error::parse(self.pos, format!("unexpected '{c}' in index set"))),
                    None => return Err(Error::parse(open, "unclosed '{'")),
                }
            }
            if g.is_empty() {
                return Err(Error::parse(open, "empty index set"));
            }
            groups.push(g);
        }
        Ok(groups)
    }

    fn cycles(&mut self) -> Result<Permutation> {
        let start = self.pos;
        let mut end = self.pos;
        let mut lookahead = Lexer { src: self.src, pos: self.pos };
        loop {
            lookahead.skip_ws();
            if lookahead.peek() != Some('(') {
                break;
            }
            match self.src[lookahead.pos..].find(')') {
                Some(j) => {
                    lookahead.pos += j + 1;
                    end = lookahead.pos;
                }
                None => return Err(Error::parse(lookahead.pos, "unclosed '('")),
            }
        }
        self.pos = end;
        Permutation::parse_cycles(&self.src[start..end], 0).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::parse(start + pos, msg),
            Error::Invalid(msg) => Error::parse(start, msg),
            other => other,
        })
    }
}

/// Parses the expression DSL.
pub fn parse_expr(text: &str) -> Result<BirdtrackExpr> {
    let mut lx = Lexer { src: text, pos: 0 };
    let mut scalar = Scalar::one();
    let mut factors: Vec<Factor> = Vec::new();
    loop {
        lx.skip_separators();
        let Some(c) = lx.peek() else { break };
        let start = lx.pos;
        match c {
            '0'..='9' | '-' => {
                let q = lx.rational()?;
                scalar = scalar.mul_rational(&q);
            }
            'k' => {
                lx.bump();
                let k = lx.small_uint()?;
                if k == 0 {
                    return Err(Error::parse(start, "constant tokens start at k1"));
                }
                scalar = scalar.with_token(k);
            }
            'S' | 'A' => {
                lx.bump();
                let kind = if c == 'S' { SetKind::Sym } else { SetKind::Anti };
                let groups = lx.groups()?;
                if groups.is_empty() {
                    return Err(Error::parse(lx.pos, format!("'{c}' needs at least one index set")));
                }
                let mut seen = std::collections::BTreeSet::new();
                if let Some(v) = groups.iter().flatten().find(|v| !seen.insert(**v)) {
                    return Err(Error::parse(start, format!("index {v} appears in two sets of one factor")));
                }
                factors.push(Factor::set(kind, &groups));
            }
            'p' => {
                lx.bump();
                let p = lx.cycles()?;
                factors.push(Factor::perm(p));
            }
            '<' => {
                lx.bump();
                let close = text[lx.pos..].find('>').map(|j| lx.pos + j).ok_or_else(|| Error::parse(start, "unclosed '<'"))?;
                let body = &text[lx.pos..close];
                let (name, tab) = body.split_once('_').ok_or_else(|| Error::parse(start, "macro needs the form <NAME_tableau>"))?;
                let t = parse_tableau(tab).map_err(|e| match e {
                    Error::Parse { pos, msg } => Error::parse(start + 1 + name.len() + 1 + pos, msg),
                    other => other,
                })?;
                let built = match name {
                    "Y" => builders::young(&t),
                    "Ybar" => Ok(builders::young_bar(&t)),
                    "KS" => builders::ks_hermitian(&t),
                    _ => return Err(Error::parse(start, format!("unknown macro '{name}'"))),
                }
                .map_err(|e| match e {
                    Error::Invalid(msg) => Error::parse(start, msg),
                    other => other,
                })?;
                scalar = scalar.mul(&built.scalar);
                factors.extend(built.factors);
                lx.pos = close + 1;
            }
            other => return Err(Error::parse(start, format!("unexpected character '{other}'"))),
        }
    }
    Ok(BirdtrackExpr::new(scalar, factors))
}

pub fn print_factor(f: &Factor) -> String {
    match f {
        Factor::Set { kind, sets, .. } => {
            let mut s = String::new();
            s.push(kind.letter());
            if sets.is_empty() {
                s.push_str("{}");
            }
            for g in sets {
                s.push('{');
                s.push_str(&g.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
                s.push('}');
            }
            s
        }
        Factor::Perm { perm } => format!("p{perm}"),
    }
}

pub fn print_scalar(s: &Scalar) -> String {
    let mut parts = Vec::new();
    if !s.value.is_one() || s.tokens.is_empty() {
        parts.push(fmt_rational(&s.value));
    }
    parts.extend(s.tokens.iter().map(|k| format!("k{k}")));
    parts.join(" * ")
}

/// Canonical text of an expression.
pub fn print_expr(e: &BirdtrackExpr) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let body = e.factors.iter().map(print_factor).collect::<Vec<_>>().join(" ");
    if e.scalar.is_one() {
        if body.is_empty() {
            "1".into()
        } else {
            body
        }
    } else if body.is_empty() {
        print_scalar(&e.scalar)
    } else {
        format!("{} * {}", print_scalar(&e.scalar), body)
    }
}

impl std::fmt::Display for BirdtrackExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&print_expr(self))
    }
}

impl std::str::FromStr for BirdtrackExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_expr(s)
    }
}
