//! Semantic versions of the definable sets: the partition of odd places by Artin sign,
//! the parameter sets Φ_σ and Ψ_K, the semilocal rings attached to them, and the
//! membership tests for O_S, non-squares and non-norms.

mod witness;

pub use witness::{
    nonnorm_witness, nonsquare_witness, phi_witness, psi_witness, verify_os, verify_witness, Claim, OSVerdict,
    OsBudget, ParamsRecord, SampleLog, Witness, WitnessRecord,
};

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::places::{local_square_class, valuation, KElem, LocalSquareClass, Place};
use crate::symbols::{
    artin_sign, artin_sign_of, delta_set, hilbert_symbol, odd_valuation_places, scan_set, GaloisSign, ParamSet,
};

/// R = ∩ O_p, J(R) = ∩ pO_p and R̃ = ∪ O_p over a finite set of places.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SemiLocalSet {
    pub delta: BTreeSet<Place>,
}

impl SemiLocalSet {
    pub fn new(delta: BTreeSet<Place>) -> SemiLocalSet {
        SemiLocalSet { delta }
    }

    pub fn contains(&self, x: &KElem) -> Result<bool> {
        if x.is_zero() {
            return Ok(true);
        }
        for p in &self.delta {
            if valuation(x, p)? < 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn in_radical(&self, x: &KElem) -> Result<bool> {
        if x.is_zero() {
            return Ok(true);
        }
        for p in &self.delta {
            if valuation(x, p)? < 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_unit(&self, x: &KElem) -> Result<bool> {
        if x.is_zero() {
            return Ok(false);
        }
        for p in &self.delta {
            if valuation(x, p)? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// x = 0 or x^{−1} ∉ J(R).
    pub fn in_tilde(&self, x: &KElem) -> Result<bool> {
        if x.is_zero() {
            return Ok(true);
        }
        Ok(!self.in_radical(&x.inv()?)?)
    }
}

pub fn odd_places(x: &KElem) -> Result<BTreeSet<Place>> {
    if x.is_zero() {
        return Err(Error::ZeroInput("odd_places of zero"));
    }
    odd_valuation_places(x)
}

/// Odd places of x off m whose Artin sign is `sign`.
pub fn partition_class(params: &ParamSet, x: &KElem, sign: GaloisSign) -> Result<BTreeSet<Place>> {
    let mut out = BTreeSet::new();
    for p in odd_places(x)? {
        if !params.m.divides(&p) && artin_sign(params, &p)? == sign {
            out.insert(p);
        }
    }
    Ok(out)
}

pub fn phi_membership(params: &ParamSet, p: &KElem, sigma: GaloisSign) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::ZeroInput("phi membership of zero"));
    }
    if p.divisor()?.support().any(|q| params.m.divides(q)) {
        return Ok(false);
    }
    if artin_sign_of(params, p)? != sigma {
        return Ok(false);
    }
    for q in odd_places(p)? {
        let s = artin_sign(params, &q)?;
        if s != GaloisSign::ONE && s != sigma {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership in K^{×2}·Φ_σ. Multiplying by a square shifts every valuation by an even
/// amount, so the odd places and their signs are invariants of the square class, and a
/// square can always clear the even valuations at m by weak approximation.
pub fn phi_tilde_membership(params: &ParamSet, x: &KElem, sigma: GaloisSign) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::ZeroInput("phi membership of zero"));
    }
    let mut prod = GaloisSign::ONE;
    for q in odd_places(x)? {
        if params.m.divides(&q) {
            return Ok(false);
        }
        let s = artin_sign(params, &q)?;
        if s != GaloisSign::ONE && s != sigma {
            return Ok(false);
        }
        prod = prod.mul(s);
    }
    Ok(prod == sigma)
}

fn meet(sets: &[BTreeSet<Place>]) -> BTreeSet<Place> {
    let mut it = sets.iter();
    let first = it.next().cloned().unwrap_or_default();
    it.fold(first, |acc, s| acc.intersection(s).cloned().collect())
}

/// The Δ-set description of P^σ(p) for p coprime to m.
pub fn delta_form(params: &ParamSet, p: &KElem, sigma: GaloisSign) -> Result<BTreeSet<Place>> {
    let ParamSet { a, b, c, d, .. } = params;
    let ab = a.mul(b);
    let sets = match (sigma.a, sigma.b) {
        (-1, -1) => vec![delta_set(a, p)?, delta_set(b, p)?],
        (-1, 1) => vec![delta_set(a, p)?, delta_set(&ab, p)?, delta_set(a, &c.mul(p))?],
        (1, -1) => vec![delta_set(b, p)?, delta_set(&ab, p)?, delta_set(b, &d.mul(p))?],
        _ => return Err(Error::PreconditionFailed("sigma must differ from (+1,+1)".into())),
    };
    Ok(meet(&sets))
}

/// R_p^σ for p ∈ Φ_σ, σ ≠ (1,1); the partition form is cross-checked against the Δ-set form.
pub fn r_sigma(params: &ParamSet, p: &KElem, sigma: GaloisSign) -> Result<SemiLocalSet> {
    if sigma.is_one() {
        return Err(Error::PreconditionFailed("sigma must differ from (+1,+1)".into()));
    }
    if !phi_membership(params, p, sigma)? {
        return Err(Error::NotInPhi(sigma.to_string()));
    }
    let delta = partition_class(params, p, sigma)?;
    let form = delta_form(params, p, sigma)?;
    if delta != form {
        return Err(Error::InternalMismatch(format!(
            "partition {delta:?} and symbol form {form:?} differ for p = {p}, sigma = {sigma}"
        )));
    }
    if delta.is_empty() {
        return Err(Error::InternalMismatch(format!("empty partition class for p = {p} in Φ_{sigma}")));
    }
    Ok(SemiLocalSet::new(delta))
}

/// Δ_{ap,q} ∩ Δ_{bp,q}, the defining set of R_{p,q}^{(1,1)}.
pub fn psi_delta(params: &ParamSet, p: &KElem, q: &KElem) -> Result<SemiLocalSet> {
    let ap = params.a.mul(p);
    let bp = params.b.mul(p);
    Ok(SemiLocalSet::new(meet(&[delta_set(&ap, q)?, delta_set(&bp, q)?])))
}

pub fn psi_membership(params: &ParamSet, p: &KElem, q: &KElem) -> Result<bool> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroInput("psi membership of zero"));
    }
    if !phi_tilde_membership(params, p, GaloisSign::ONE)?
        || !phi_tilde_membership(params, q, GaloisSign::new(-1, -1))?
    {
        return Ok(false);
    }
    let ap = params.a.mul(p);
    let mut prod = 1;
    for place in params.m.places() {
        prod *= hilbert_symbol(&ap, q, place)?;
    }
    if prod != -1 {
        return Ok(false);
    }
    let rq = SemiLocalSet::new(meet(&[delta_set(&params.a, q)?, delta_set(&params.b, q)?]));
    in_coset(p, &params.a, &rq)
}

/// x ∈ s·K^{×2}·(1 + J(R)), tested place by place.
pub fn in_coset(x: &KElem, s: &KElem, r: &SemiLocalSet) -> Result<bool> {
    if x.is_zero() || s.is_zero() {
        return Err(Error::ZeroInput("coset membership of zero"));
    }
    let ratio = x.div(s)?;
    for p in &r.delta {
        if valuation(s, p)? != 0 {
            return Err(Error::NonzeroValuation(p.to_string()));
        }
        if local_square_class(&ratio, p)? != LocalSquareClass::SQUARE {
            return Ok(false);
        }
    }
    Ok(true)
}

/// x ∈ p·K^{×2}·R^×, i.e. v(x/p) even on every place of R.
pub fn in_odd_coset(x: &KElem, p: &KElem, r: &SemiLocalSet) -> Result<bool> {
    let ratio = x.div(p)?;
    for place in &r.delta {
        if valuation(&ratio, place)? % 2 != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The disjunction that characterizes (x,y) = −1 on R, given p odd and s a nonsquare unit
/// at each of its places.
pub fn hsodd_disjunction(x: &KElem, y: &KElem, p: &KElem, s: &KElem, r: &SemiLocalSet) -> Result<bool> {
    let mxy = x.mul(y).neg();
    let left = in_odd_coset(x, p, r)? && (in_coset(y, s, r)? || in_coset(&mxy, s, r)?);
    let right = in_odd_coset(y, p, r)? && (in_coset(x, s, r)? || in_coset(&mxy, s, r)?);
    Ok(left || right)
}

pub fn in_os_direct(t: &KElem, s: &BTreeSet<Place>) -> Result<bool> {
    if t.is_zero() {
        return Ok(true);
    }
    Ok(t.divisor()?.iter().all(|(p, n)| n >= 0 || s.contains(p)))
}

pub fn is_square_global(x: &KElem) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::ZeroInput("square test of zero"));
    }
    Ok(x.divisor()?.iter().all(|(_, n)| n % 2 == 0) && x.field().chi(x.lead()) > 0)
}

/// Whether x is a norm from K(√y): every local symbol (x,y)_p is +1.
pub fn is_norm(x: &KElem, y: &KElem) -> Result<bool> {
    if x.is_zero() || y.is_zero() {
        return Err(Error::ZeroInput("norm test of zero"));
    }
    for p in scan_set(x, y)? {
        if hilbert_symbol(x, y, &p)? < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// s_σ: a for σ = (−1,±1), b for σ = (1,−1).
pub fn s_sigma(params: &ParamSet, sigma: GaloisSign) -> Result<&KElem> {
    match (sigma.a, sigma.b) {
        (-1, _) => Ok(&params.a),
        (1, -1) => Ok(&params.b),
        _ => Err(Error::PreconditionFailed("sigma must differ from (+1,+1)".into())),
    }
}

#[cfg(test)]
mod tests;
