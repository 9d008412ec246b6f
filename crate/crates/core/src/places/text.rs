//! Text forms for field elements, places, divisors and place sets.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ffcore::{parse_poly_at, Fq, Poly};
use crate::places::{Divisor, KElem, Place};

fn perr(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

/// Strips one pair of enclosing parentheses if they match each other.
fn strip_parens(s: &str, offset: usize) -> (&str, usize) {
    let t = s.trim_start();
    let lead = s.len() - t.len();
    let t = t.trim_end();
    if t.starts_with('(') && t.ends_with(')') {
        let mut depth = 0;
        for (i, ch) in t.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 && i != t.len() - 1 {
                        return (s, offset);
                    }
                }
                _ => {}
            }
        }
        return (&t[1..t.len() - 1], offset + lead + 1);
    }
    (s, offset)
}

/// `P` or `(P)/(Q)`; the split is at the top-level `/`.
pub fn parse_kelem(fq: &Fq, s: &str) -> Result<KElem> {
    parse_kelem_at(fq, s, 0)
}

/// A polynomial, or a `*`-product of factors `P` and `(P)^n`.
fn parse_product(fq: &Fq, s: &str, offset: usize) -> Result<Poly> {
    let (inner, off) = strip_parens(s, offset);
    let first = match parse_poly_at(fq, inner, off) {
        Ok(p) => return Ok(p),
        Err(e) => e,
    };
    let parts = split_top(inner, "*");
    if parts.len() == 1 && !inner.contains(")^") {
        return Err(first);
    }
    let mut acc = Poly::one(fq);
    let mut pos = off;
    for raw in parts {
        let lead = raw.len() - raw.trim_start().len();
        let part = raw.trim();
        let (base, exp) = match part.rfind('^') {
            Some(i) if part[..i].trim_end().ends_with(')') => {
                let e: u64 = part[i + 1..]
                    .trim()
                    .parse()
                    .map_err(|_| perr(pos + lead + i + 1, "bad exponent"))?;
                (&part[..i], e)
            }
            _ => (part, 1),
        };
        let (inner, ioff) = strip_parens(base, pos + lead);
        acc = acc.mul(&parse_poly_at(fq, inner, ioff)?.pow(exp));
        pos += raw.len() + 1;
    }
    Ok(acc)
}

pub fn parse_kelem_at(fq: &Fq, s: &str, offset: usize) -> Result<KElem> {
    let mut depth = 0i32;
    let mut slash = None;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(perr(offset + i, "unbalanced ')'"));
                }
            }
            '/' if depth == 0 => {
                if slash.is_some() {
                    return Err(perr(offset + i, "more than one '/'"));
                }
                slash = Some(i);
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(perr(offset + s.len(), "unbalanced '('"));
    }
    match slash {
        None => Ok(KElem::from(parse_product(fq, s, offset)?)),
        Some(i) => {
            let num = parse_product(fq, &s[..i], offset)?;
            let den = parse_product(fq, &s[i + 1..], offset + i + 1)?;
            if den.is_zero() {
                return Err(perr(offset + i + 1, "zero denominator"));
            }
            KElem::new(num, den)
        }
    }
}

pub fn parse_place(fq: &Fq, s: &str) -> Result<Place> {
    parse_place_at(fq, s, 0)
}

pub fn parse_place_at(fq: &Fq, s: &str, offset: usize) -> Result<Place> {
    let (inner, off) = strip_parens(s, offset);
    if inner.trim() == "inf" {
        return Ok(Place::Infinity);
    }
    let p = parse_poly_at(fq, inner, off)?;
    Place::finite(p)
}

/// Comma-separated places; duplicates are rejected.
pub fn parse_places(fq: &Fq, s: &str) -> Result<BTreeSet<Place>> {
    let mut out = BTreeSet::new();
    let mut off = 0;
    for part in s.split(',') {
        let p = parse_place_at(fq, part, off)?;
        if !out.insert(p.clone()) {
            return Err(Error::DuplicatePlace(p.to_string()));
        }
        off += part.len() + 1;
    }
    Ok(out)
}

/// `place^e * place^e`. A bare polynomial is factored instead.
pub fn parse_divisor(fq: &Fq, s: &str) -> Result<Divisor> {
    if let Ok(p) = parse_poly_at(fq, s, 0) {
        if p.is_zero() {
            return Err(perr(0, "zero has no divisor"));
        }
        let mut d = Divisor::new();
        for (f, m) in p.factor()?.factors {
            d.insert(Place::Finite(f), m as i64);
        }
        return Ok(d);
    }
    let mut d = Divisor::new();
    let mut off = 0;
    for raw in split_top(s, "*") {
        let lead = raw.len() - raw.trim_start().len();
        let part = raw.trim();
        off += lead;
        let (place_txt, exp) = match part.rfind('^') {
            Some(i) if part[..i].trim_end().ends_with(')') || part[..i].trim() == "inf" => {
                let e: i64 = part[i + 1..]
                    .trim()
                    .parse()
                    .map_err(|_| perr(off + i + 1, "bad exponent"))?;
                (&part[..i], e)
            }
            _ => (part, 1),
        };
        let p = parse_place_at(fq, place_txt, off)?;
        if d.get(&p) != 0 {
            return Err(Error::DuplicatePlace(p.to_string()));
        }
        d.insert(p, exp);
        off += raw.len() - lead + 1;
    }
    Ok(d)
}

fn split_top<'a>(s: &'a str, sep: &str) -> Vec<&'a str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < s.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && s[i..].starts_with(sep) {
            out.push(&s[start..i]);
            i += sep.len();
            start = i;
            continue;
        }
        i += 1;
    }
    out.push(&s[start..]);
    out
}
