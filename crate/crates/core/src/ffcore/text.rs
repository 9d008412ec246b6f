//! Polynomial text grammar: `c`, `t`, `c*t^e`, `ct^e`, `t^e` joined by `+`/`-`.
//! Coefficients are integers reduced mod p or bracketed `u`-polynomials.

use std::fmt;

use crate::error::{Error, Result};
use crate::ffcore::field::{Fq, FqElem};
use crate::ffcore::poly::Poly;

fn perr(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
    base: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }
    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }
    fn at(&self) -> usize {
        self.base + self.pos
    }
    fn number(&mut self) -> Result<Option<u64>> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        txt.parse::<u64>()
            .map(Some)
            .map_err(|_| perr(self.base + start, "integer too large"))
    }
}

/// Parses a sum of terms in `var`; coefficient parsing is delegated to `coef`.
fn parse_terms<F>(cur: &mut Cursor, var: u8, mut coef: F) -> Result<Vec<(i64, Option<Vec<i64>>, usize)>>
where
    F: FnMut(&mut Cursor) -> Result<Option<Vec<i64>>>,
{
    let mut out = Vec::new();
    let mut first = true;
    loop {
        let mut sign = 1i64;
        match cur.peek() {
            Some(b'+') if !first => {
                cur.pos += 1;
            }
            Some(b'-') => {
                cur.pos += 1;
                sign = -1;
            }
            None if first => return Err(perr(cur.at(), "empty expression")),
            None => return Err(perr(cur.at(), "dangling operator")),
            _ if !first => return Err(perr(cur.at(), "expected '+' or '-'")),
            _ => {}
        }
        let term_start = cur.at();
        let mut int_coef: Option<u64> = None;
        let mut ext_coef: Option<Vec<i64>> = None;
        if cur.peek() == Some(b'[') {
            ext_coef = coef(cur)?;
        } else {
            int_coef = cur.number()?;
        }
        let has_coef = int_coef.is_some() || ext_coef.is_some();
        let mut exp = 0usize;
        let mut star = false;
        if has_coef && cur.peek() == Some(b'*') {
            cur.pos += 1;
            star = true;
        }
        if cur.peek() == Some(var) {
            cur.pos += 1;
            exp = 1;
            if cur.peek() == Some(b'^') {
                cur.pos += 1;
                let e = cur
                    .number()?
                    .ok_or_else(|| perr(cur.at(), "expected exponent after '^'"))?;
                exp = usize::try_from(e)
                    .ok()
                    .filter(|&e| e <= 4096)
                    .ok_or_else(|| perr(cur.at(), "exponent too large"))?;
            }
        } else if star || !has_coef {
            return Err(perr(cur.at(), format!("expected '{}'", var as char)));
        }
        let c = int_coef.map(|c| (c % (i64::MAX as u64)) as i64).unwrap_or(1);
        if exp == 0 && !has_coef {
            return Err(perr(term_start, "empty term"));
        }
        out.push((sign * c, ext_coef, exp));
        first = false;
        if cur.peek().is_none() || cur.peek() == Some(b']') {
            return Ok(out);
        }
    }
}

fn parse_u_bracket(fq: &Fq, cur: &mut Cursor) -> Result<Option<Vec<i64>>> {
    let open = cur.at();
    cur.pos += 1; // '['
    if fq.k() == 1 {
        return Err(perr(open, "bracketed coefficients need an extension field"));
    }
    let terms = parse_terms(cur, b'u', |c| Err(perr(c.at(), "nested brackets")))?;
    if cur.peek() != Some(b']') {
        return Err(perr(cur.at(), "expected ']'"));
    }
    cur.pos += 1;
    let deg = terms.iter().map(|t| t.2).max().unwrap_or(0);
    let mut v = vec![0i64; deg + 1];
    let p = fq.p() as i64;
    for (c, _, e) in terms {
        v[e] = (v[e] + c.rem_euclid(p)) % p;
    }
    Ok(Some(v))
}

/// Parses a polynomial in t; `offset` shifts reported positions.
pub fn parse_poly_at(fq: &Fq, s: &str, offset: usize) -> Result<Poly> {
    let mut cur = Cursor { s: s.as_bytes(), pos: 0, base: offset };
    let terms = parse_terms(&mut cur, b't', |c| parse_u_bracket(fq, c))?;
    if cur.peek().is_some() {
        return Err(perr(cur.at(), "unexpected character"));
    }
    let mut acc = Poly::zero(fq);
    for (sign, ext, e) in terms {
        let c = match ext {
            Some(u) => {
                let base = fq.from_u_coeffs(&u)?;
                if sign < 0 {
                    fq.neg(base)
                } else {
                    base
                }
            }
            None => fq.from_int(sign),
        };
        acc = acc.add(&Poly::monomial(fq, c, e));
    }
    Ok(acc)
}

pub fn parse_poly(fq: &Fq, s: &str) -> Result<Poly> {
    parse_poly_at(fq, s, 0)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let fq = self.field();
        let mut first = true;
        for e in (0..self.coeffs().len()).rev() {
            let c: FqElem = self.coeff(e);
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let cs = fq.fmt_elem(c);
            let mono = match e {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{e}"),
            };
            match (e, c == FqElem::ONE) {
                (0, _) => write!(f, "{cs}")?,
                (_, true) => write!(f, "{mono}")?,
                _ => write!(f, "{cs}*{mono}")?,
            }
        }
        Ok(())
    }
}
