//! Search for an element with prescribed local square classes at finitely many places.
//!
//! Candidates have the form x = Π π_P^{parity_P} · u with u = u0 + M·h, where u0 solves
//! the residue conditions by CRT and M = Π π_P over the constrained finite places.
//! h runs over polynomials of degree ≤ D in canonical order. Odd-multiplicity factors
//! of u land at unconstrained places and must pass `free_ok`.

use crate::error::{Error, Result};
use crate::ffcore::{Fq, Poly};
use crate::places::{crt, KElem, Place};

/// Default cap on the number of candidates examined by one search.
pub const DEFAULT_CANDIDATES: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassTarget {
    pub place: Place,
    pub parity: u8,
    /// Required quadratic character of the unit part; `None` leaves it free.
    pub sign: Option<i8>,
}

impl ClassTarget {
    pub fn new(place: Place, parity: u8, sign: Option<i8>) -> ClassTarget {
        ClassTarget { place, parity, sign }
    }
}

fn least_with_char(fq: &Fq, f: &Poly, sign: i8) -> Poly {
    if sign > 0 {
        return Poly::one(fq);
    }
    if f.deg() == 1 {
        return Poly::constant(fq, fq.nonsquare());
    }
    let rf = Place::Finite(f.clone()).residue_field(fq);
    let found = rf
        .elements()
        .find(|e| !e.is_zero() && rf.chi(e) < 0)
        .expect("residue field has nonsquares");
    found
}

/// Polynomials of degree ≤ d in canonical order, starting with zero.
fn polys_up_to(fq: &Fq, d: usize) -> impl Iterator<Item = Poly> + '_ {
    std::iter::once(Poly::zero(fq)).chain((0..=d).flat_map(move |n| Poly::all_of_degree(fq, n)))
}

pub fn search_classes<F>(
    fq: &Fq,
    targets: &[ClassTarget],
    mut free_ok: F,
    max_degree: usize,
    max_candidates: usize,
) -> Result<KElem>
where
    F: FnMut(&Place) -> Result<bool>,
{
    let finite: Vec<(&Poly, u8, Option<i8>)> = targets
        .iter()
        .filter_map(|c| c.place.poly().map(|f| (f, c.parity % 2, c.sign)))
        .collect();
    let inf = targets.iter().find(|c| c.place.is_infinite());

    let mut prefix = Poly::one(fq);
    let mut m = Poly::one(fq);
    for (f, par, _) in &finite {
        if *par == 1 {
            prefix = prefix.mul(f);
        }
        m = m.mul(f);
    }
    let mut system = Vec::new();
    for (f, par, sign) in &finite {
        let others = if *par == 1 {
            prefix.div_exact(f)?.expect("factor of prefix")
        } else {
            prefix.clone()
        };
        let want = least_with_char(fq, f, sign.unwrap_or(1));
        let r = want.mulmod(&others.inv_mod(f)?, f)?;
        system.push(((*f).clone(), r));
    }
    let u0 = crt(fq, &system)?;
    let prefix_deg = prefix.deg() as i64;

    let mut seen = 0usize;
    for h in polys_up_to(fq, max_degree) {
        if seen >= max_candidates {
            break;
        }
        let u = u0.add(&h.mul(&m));
        if u.is_zero() {
            continue;
        }
        seen += 1;
        let vinf = -(prefix_deg + u.deg() as i64);
        if let Some(c) = inf {
            if vinf.rem_euclid(2) as u8 != c.parity % 2 {
                continue;
            }
            if let Some(s) = c.sign {
                if fq.chi(u.lead()) != s {
                    continue;
                }
            }
        }
        let fac = u.factor()?;
        let mut ok = true;
        for (g, mult) in &fac.factors {
            if mult % 2 == 1 && !free_ok(&Place::Finite(g.clone()))? {
                ok = false;
                break;
            }
        }
        if ok && inf.is_none() && vinf.rem_euclid(2) == 1 && !free_ok(&Place::Infinity)? {
            ok = false;
        }
        if ok {
            let x = KElem::from(prefix.mul(&u));
            return Ok(x);
        }
    }
    Err(Error::SearchBoundExceeded(format!(
        "no element with the prescribed local classes at {} places (degree bound {max_degree}, {seen} candidates)",
        targets.len()
    )))
}
