//! JSON and text forms of [`SparsePoly`].

use serde::{Deserialize, Serialize};

use super::{Monomial, SparsePoly};
use crate::error::{Error, Result};
use crate::field::{Field, TextScalar};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub exps: Vec<u32>,
}

/// Terms in canonical (descending graded-lex) order.
pub fn to_json_terms<T: Field>(p: &SparsePoly<T>) -> Vec<TermJson> {
    p.terms()
        .iter()
        .map(|(m, c)| TermJson {
            coeff: c.to_string(),
            exps: m.exponents().iter().map(|&e| e as u32).collect(),
        })
        .collect()
}

pub fn to_json_string<T: Field>(p: &SparsePoly<T>) -> String {
    serde_json::to_string(&to_json_terms(p)).expect("plain data serializes")
}

pub fn from_json_terms<T: TextScalar>(nvars: usize, ctx: &T::Ctx, terms: &[TermJson]) -> Result<SparsePoly<T>> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        if t.exps.len() != nvars {
            return Err(Error::VariableCountMismatch {
                left: nvars,
                right: t.exps.len(),
            });
        }
        let exps = t
            .exps
            .iter()
            .map(|&e| u8::try_from(e).map_err(|_| Error::Parse(format!("exponent {e} too large"))))
            .collect::<Result<Vec<u8>>>()?;
        out.push((Monomial::from_exponents(&exps), T::parse_in(ctx, &t.coeff)?));
    }
    Ok(SparsePoly::from_terms(nvars, ctx, out))
}

pub fn from_json_str<T: TextScalar>(nvars: usize, ctx: &T::Ctx, s: &str) -> Result<SparsePoly<T>> {
    let terms: Vec<TermJson> = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    from_json_terms(nvars, ctx, &terms)
}

/// Names `b_{rc}` for a `rows x cols` block of indeterminates, row-major.
pub fn grid_names(prefix: &str, rows: usize, cols: usize) -> Vec<String> {
    let mut v = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            v.push(format!("{prefix}_{{{r}{c}}}"));
        }
    }
    v
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Lexer<'_> {
    /// Skips whitespace, explicit products and alignment marks.
    fn skip(&mut self) {
        loop {
            let rest = &self.s[self.pos..];
            if let Some(&b) = rest.first() {
                if b.is_ascii_whitespace() || b == b'*' || b == b'&' || b == b'\\' {
                    self.pos += 1;
                    continue;
                }
            }
            if rest.starts_with("·".as_bytes()) {
                self.pos += "·".len();
                continue;
            }
            if rest.starts_with(b"cdot") {
                self.pos += 4;
                continue;
            }
            break;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn take_while(&mut self, f: impl Fn(u8) -> bool) -> &str {
        let start = self.pos;
        while self.peek().is_some_and(&f) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).expect("ascii run")
    }

    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {}", self.pos))
    }

    fn exponent(&mut self) -> Result<u8> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let braced = self.peek() == Some(b'{');
        if braced {
            self.pos += 1;
        }
        let digits = self.take_while(|b| b.is_ascii_digit()).to_string();
        if braced {
            if self.peek() != Some(b'}') {
                return Err(self.error("unclosed exponent"));
            }
            self.pos += 1;
        }
        digits.parse().map_err(|_| self.error("bad exponent"))
    }

    /// Identifier such as `x3`, `b_{21}` or `a_12`.
    fn name(&mut self) -> Result<String> {
        let start = self.pos;
        self.take_while(|b| b.is_ascii_alphabetic());
        self.take_while(|b| b.is_ascii_digit());
        if self.peek() == Some(b'_') {
            self.pos += 1;
            if self.peek() == Some(b'{') {
                self.pos += 1;
                self.take_while(|b| b != b'}');
                if self.peek() != Some(b'}') {
                    return Err(self.error("unclosed subscript"));
                }
                self.pos += 1;
            } else {
                self.take_while(|b| b.is_ascii_alphanumeric());
            }
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).expect("ascii run").to_string())
    }
}

/// Parses a sum of signed monomials, e.g. `-2·b_{32}^2·b_{10} + 3/4 b_{00}`.
///
/// Factors may be juxtaposed or separated by `·`, `*` or `\cdot`; LaTeX
/// alignment marks are ignored. `resolve` maps a variable name to its index.
pub fn parse_text<T: TextScalar>(
    s: &str,
    nvars: usize,
    ctx: &T::Ctx,
    resolve: impl Fn(&str) -> Option<usize>,
) -> Result<SparsePoly<T>> {
    let mut lx = Lexer { s: s.as_bytes(), pos: 0 };
    let mut terms = Vec::new();
    lx.skip();
    if lx.peek().is_none() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut first = true;
    while {
        lx.skip();
        lx.peek().is_some()
    } {
        let mut negative = false;
        match lx.peek() {
            Some(b'+') => lx.pos += 1,
            Some(b'-') => {
                negative = true;
                lx.pos += 1;
            }
            _ if first => {}
            _ => return Err(lx.error("expected + or -")),
        }
        first = false;
        let mut coeff = T::from_i64(ctx, if negative { -1 } else { 1 });
        let mut exps = vec![0u8; nvars];
        let mut factors = 0;
        loop {
            lx.skip();
            match lx.peek() {
                Some(b) if b.is_ascii_digit() => {
                    let mut lit = lx.take_while(|b| b.is_ascii_digit()).to_string();
                    if lx.peek() == Some(b'/') {
                        lx.pos += 1;
                        lit.push('/');
                        lit.push_str(lx.take_while(|b| b.is_ascii_digit()));
                    }
                    coeff *= &T::parse_in(ctx, &lit)?;
                }
                Some(b) if b.is_ascii_alphabetic() => {
                    let name = lx.name()?;
                    let v = resolve(&name).ok_or_else(|| Error::Parse(format!("unknown variable {name}")))?;
                    if v >= nvars {
                        return Err(Error::IndexOutOfRange { index: v, bound: nvars });
                    }
                    let e = lx.exponent()?;
                    exps[v] = exps[v]
                        .checked_add(e)
                        .ok_or_else(|| Error::Parse("exponent overflow".into()))?;
                }
                _ => break,
            }
            factors += 1;
        }
        if factors == 0 {
            return Err(lx.error("expected a term"));
        }
        terms.push((Monomial::from_exponents(&exps), coeff));
    }
    Ok(SparsePoly::from_terms(nvars, ctx, terms))
}

/// Parses text written with the given variable names.
pub fn parse_with_names<T: TextScalar>(s: &str, names: &[String], ctx: &T::Ctx) -> Result<SparsePoly<T>> {
    parse_text(s, names.len(), ctx, |n| names.iter().position(|m| m == n))
}
