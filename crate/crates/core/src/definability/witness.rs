//! Witness constructors for Φ_σ and Ψ_K, the O_S verifier, and certificates for
//! non-squares and non-norms with their independent re-verification.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    hsodd_disjunction, in_coset, in_os_direct, is_norm, is_square_global, partition_class, phi_membership,
    psi_delta, psi_membership, r_sigma, s_sigma, SemiLocalSet,
};
use crate::error::{Error, Result};
use crate::ffcore::{Fq, FqElem, Poly};
use crate::places::{
    local_square_class, parse_divisor, parse_kelem, parse_place, valuation, KElem, LocalSquareClass, Place,
};
use crate::rayclass::{find_prime, lemma_aprime, places_up_to};
use crate::symbols::{
    artin_sign, delta_set, hilbert_symbol, residue_symbol, search_classes, ClassTarget, GaloisSign, Modulus,
    ParamSet, DEFAULT_CANDIDATES,
};

fn first_place<F>(params: &ParamSet, max_degree: usize, mut pred: F) -> Result<Place>
where
    F: FnMut(&Place) -> Result<bool>,
{
    for p in places_up_to(params.a.field(), max_degree) {
        if !params.m.divides(&p) && pred(&p)? {
            return Ok(p);
        }
    }
    Err(Error::SearchBoundExceeded(format!("no suitable place of degree <= {max_degree}")))
}

/// The element with divisor Σ n·P, the degree being absorbed at ∞.
fn generator(fq: &Fq, parts: &[(&Place, i64)]) -> Result<KElem> {
    let mut x = KElem::one(fq);
    for (p, n) in parts {
        if let Some(f) = p.poly() {
            x = x.mul(&KElem::from(f.clone()).pow(*n)?);
        }
    }
    Ok(x)
}

/// p ∈ Φ_σ with P^σ(p) = {p0}: divisor p0 + 𝔮 − k·q' for a sign-(1,1) place q' and a
/// sign-(1,1) prime 𝔮 in the inverse class of p0 in Cl(O_{q'}).
pub fn phi_witness(params: &ParamSet, sigma: GaloisSign, p0: &Place, max_degree: usize) -> Result<KElem> {
    if sigma.is_one() {
        return Err(Error::PreconditionFailed("sigma must differ from (+1,+1)".into()));
    }
    if params.m.divides(p0) {
        return Err(Error::PlaceDividesModulus(p0.to_string()));
    }
    if artin_sign(params, p0)? != sigma {
        return Err(Error::PreconditionFailed(format!("{p0} does not have Artin sign {sigma}")));
    }
    let fq = params.a.field();
    let qprime = first_place(params, max_degree, |p| Ok(p != p0 && artin_sign(params, p)?.is_one()))?;
    let d = qprime.degree() as u64;
    let class = (d - p0.degree() as u64 % d) % d;
    let s_prime: BTreeSet<Place> = [qprime.clone()].into();
    let avoid: BTreeSet<Place> = [p0.clone()].into();
    let qq = find_prime(params, GaloisSign::ONE, &s_prime, class, &avoid, max_degree)?;
    let k = ((p0.degree() + qq.degree()) as u64 / d) as i64;
    let p = generator(fq, &[(p0, 1), (&qq, 1), (&qprime, -k)])?;
    let expected: BTreeSet<Place> = [p0.clone()].into();
    if !phi_membership(params, &p, sigma)? || partition_class(params, &p, sigma)? != expected {
        return Err(Error::InternalMismatch(format!("constructed {p} is not a Φ_{sigma} witness for {p0}")));
    }
    Ok(p)
}

/// (p, q) ∈ Ψ_K with Δ_{ap,q} ∩ Δ_{bp,q} = {p0}.
pub fn psi_witness(params: &ParamSet, p0: &Place, max_degree: usize) -> Result<(KElem, KElem)> {
    if params.m.divides(p0) {
        return Err(Error::PlaceDividesModulus(p0.to_string()));
    }
    if !artin_sign(params, p0)?.is_one() {
        return Err(Error::PreconditionFailed(format!("{p0} does not have Artin sign (+1,+1)")));
    }
    let fq = params.a.field();
    let q0 = first_place(params, max_degree, |p| Ok(p != p0 && artin_sign(params, p)?.is_one()))?;
    let q = lemma_aprime(params, p0, &q0, max_degree)?;
    let qq = q
        .divisor()?
        .iter()
        .find(|(p, n)| *n == 1 && *p != &q0)
        .map(|(p, _)| p.clone())
        .ok_or_else(|| Error::InternalMismatch(format!("{q} has no simple prime factor")))?;

    // p: odd at p0; a local unit square on m and at q0; in the class of a at 𝔮; every other
    // odd place has sign (1,1) and sees q as a square.
    let mut targets = vec![ClassTarget::new(p0.clone(), 1, None)];
    for place in params.m.places() {
        targets.push(ClassTarget::new(place.clone(), 0, Some(1)));
    }
    targets.push(ClassTarget::new(qq.clone(), 0, Some(-1)));
    targets.push(ClassTarget::new(q0.clone(), 0, Some(1)));
    let free_ok = |p: &Place| -> Result<bool> {
        Ok(!params.m.divides(p) && artin_sign(params, p)?.is_one() && residue_symbol(&q, p)? > 0)
    };
    let p = search_classes(fq, &targets, free_ok, max_degree, DEFAULT_CANDIDATES)?;
    let expected: BTreeSet<Place> = [p0.clone()].into();
    if !psi_membership(params, &p, &q)? || psi_delta(params, &p, &q)?.delta != expected {
        return Err(Error::InternalMismatch(format!("constructed ({p}, {q}) is not a Ψ witness for {p0}")));
    }
    Ok((p, q))
}

/// Certificate that a statement fails, re-checkable from the parameters alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// t has a pole at a place of m outside S.
    PoleAtModulus { place: Place },
    /// Odd valuation (non-squares) or symbol −1 (non-norms) at a place of m.
    ModulusPlace { place: Place },
    PhiWitness { sigma: GaloisSign, p: KElem, s: Option<KElem>, delta: BTreeSet<Place> },
    PsiWitness { p: KElem, q: KElem, delta: BTreeSet<Place> },
    CosetWitness { sigma: GaloisSign, p: KElem, s: KElem, delta: BTreeSet<Place> },
}

/// What a witness refutes or establishes.
#[derive(Clone, Debug)]
pub enum Claim {
    NotInOs { t: KElem },
    Nonsquare { x: KElem },
    Nonnorm { x: KElem, y: KElem },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessRecord {
    PoleAtModulus { place: String },
    ModulusPlace { place: String },
    PhiWitness { sigma: String, p: String, s: Option<String>, delta: Vec<String> },
    PsiWitness { p: String, q: String, delta: Vec<String> },
    CosetWitness { sigma: String, p: String, s: String, delta: Vec<String> },
}

fn places_text(d: &BTreeSet<Place>) -> Vec<String> {
    d.iter().map(|p| p.to_string()).collect()
}

fn parse_place_list(fq: &Fq, v: &[String]) -> Result<BTreeSet<Place>> {
    v.iter().map(|s| parse_place(fq, s)).collect()
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::PoleAtModulus { .. } => "pole_at_modulus",
            Witness::ModulusPlace { .. } => "modulus_place",
            Witness::PhiWitness { .. } => "phi_witness",
            Witness::PsiWitness { .. } => "psi_witness",
            Witness::CosetWitness { .. } => "coset_witness",
        }
    }

    pub fn to_record(&self) -> WitnessRecord {
        match self {
            Witness::PoleAtModulus { place } => WitnessRecord::PoleAtModulus { place: place.to_string() },
            Witness::ModulusPlace { place } => WitnessRecord::ModulusPlace { place: place.to_string() },
            Witness::PhiWitness { sigma, p, s, delta } => WitnessRecord::PhiWitness {
                sigma: sigma.to_string(),
                p: p.to_string(),
                s: s.as_ref().map(|s| s.to_string()),
                delta: places_text(delta),
            },
            Witness::PsiWitness { p, q, delta } => WitnessRecord::PsiWitness {
                p: p.to_string(),
                q: q.to_string(),
                delta: places_text(delta),
            },
            Witness::CosetWitness { sigma, p, s, delta } => WitnessRecord::CosetWitness {
                sigma: sigma.to_string(),
                p: p.to_string(),
                s: s.to_string(),
                delta: places_text(delta),
            },
        }
    }

    pub fn from_record(fq: &Fq, r: &WitnessRecord) -> Result<Witness> {
        let sign = |s: &str| s.parse::<GaloisSign>();
        Ok(match r {
            WitnessRecord::PoleAtModulus { place } => Witness::PoleAtModulus { place: parse_place(fq, place)? },
            WitnessRecord::ModulusPlace { place } => Witness::ModulusPlace { place: parse_place(fq, place)? },
            WitnessRecord::PhiWitness { sigma, p, s, delta } => Witness::PhiWitness {
                sigma: sign(sigma)?,
                p: parse_kelem(fq, p)?,
                s: s.as_ref().map(|s| parse_kelem(fq, s)).transpose()?,
                delta: parse_place_list(fq, delta)?,
            },
            WitnessRecord::PsiWitness { p, q, delta } => Witness::PsiWitness {
                p: parse_kelem(fq, p)?,
                q: parse_kelem(fq, q)?,
                delta: parse_place_list(fq, delta)?,
            },
            WitnessRecord::CosetWitness { sigma, p, s, delta } => Witness::CosetWitness {
                sigma: sign(sigma)?,
                p: parse_kelem(fq, p)?,
                s: parse_kelem(fq, s)?,
                delta: parse_place_list(fq, delta)?,
            },
        })
    }
}

/// Text form of a parameter set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    pub m: String,
    pub s: Vec<String>,
}

impl ParamsRecord {
    pub fn from_params(p: &ParamSet) -> ParamsRecord {
        ParamsRecord {
            a: p.a.to_string(),
            b: p.b.to_string(),
            c: p.c.to_string(),
            d: p.d.to_string(),
            m: p.m.to_string(),
            s: places_text(&p.s),
        }
    }

    pub fn to_params(&self, fq: &Fq) -> Result<ParamSet> {
        Ok(ParamSet {
            a: parse_kelem(fq, &self.a)?,
            b: parse_kelem(fq, &self.b)?,
            c: parse_kelem(fq, &self.c)?,
            d: parse_kelem(fq, &self.d)?,
            m: Modulus::from_divisor(&parse_divisor(fq, &self.m)?)?,
            s: parse_place_list(fq, &self.s)?,
        })
    }
}

fn reject<T>(msg: String) -> Result<T> {
    Err(Error::WitnessRejected(msg))
}

fn check_symbols_minus_one(x: &KElem, y: &KElem, r: &SemiLocalSet) -> Result<()> {
    for p in &r.delta {
        if hilbert_symbol(x, y, p)? != -1 {
            return reject(format!("({x}, {y}) is +1 at {p}"));
        }
    }
    Ok(())
}

/// Re-checks a witness from scratch against the parameters.
pub fn verify_witness(params: &ParamSet, claim: &Claim, w: &Witness) -> Result<()> {
    match (claim, w) {
        (Claim::NotInOs { t }, Witness::PoleAtModulus { place }) => {
            if params.s.contains(place) || !params.m.divides(place) {
                return reject(format!("{place} is not a place of m outside S"));
            }
            if t.is_zero() || valuation(t, place)? >= 0 {
                return reject(format!("{t} has no pole at {place}"));
            }
            Ok(())
        }
        (Claim::NotInOs { t }, Witness::PhiWitness { sigma, p, delta, .. }) => {
            if sigma.is_one() || !phi_membership(params, p, *sigma)? {
                return reject(format!("{p} is not in Φ_{sigma}"));
            }
            let r = r_sigma(params, p, *sigma)?;
            if &r.delta != delta {
                return reject("recorded delta differs from the recomputed one".into());
            }
            if r.in_tilde(t)? {
                return reject(format!("{t} lies in the tilde ring"));
            }
            Ok(())
        }
        (Claim::NotInOs { t }, Witness::PsiWitness { p, q, delta }) => {
            if !psi_membership(params, p, q)? {
                return reject(format!("({p}, {q}) is not in Ψ"));
            }
            let r = psi_delta(params, p, q)?;
            if &r.delta != delta || delta.is_empty() {
                return reject("recorded delta differs from the recomputed one".into());
            }
            if r.in_tilde(t)? {
                return reject(format!("{t} lies in the tilde ring"));
            }
            Ok(())
        }
        (Claim::Nonsquare { x }, Witness::ModulusPlace { place }) => {
            if !params.m.divides(place) || valuation(x, place)? % 2 == 0 {
                return reject(format!("{x} has even valuation at {place} or {place} does not divide m"));
            }
            Ok(())
        }
        (Claim::Nonsquare { x }, Witness::CosetWitness { sigma, p, s, delta }) => {
            if *sigma != GaloisSign::new(-1, 1) || s != &params.a {
                return reject("coset witness must use sigma (-1,+1) and s = a".into());
            }
            if !phi_membership(params, p, *sigma)? {
                return reject(format!("{p} is not in Φ_{sigma}"));
            }
            let r = r_sigma(params, p, *sigma)?;
            if &r.delta != delta {
                return reject("recorded delta differs from the recomputed one".into());
            }
            if !in_coset(x, s, &r)? {
                return reject(format!("{x} is not in a·K^2·(1+J)"));
            }
            if is_square_global(x)? {
                return Err(Error::InternalMismatch(format!("{x} is a square yet has a coset witness")));
            }
            Ok(())
        }
        (Claim::Nonnorm { x, y }, Witness::ModulusPlace { place }) => {
            if !params.m.divides(place) || hilbert_symbol(x, y, place)? != -1 {
                return reject(format!("symbol at {place} is not -1 or {place} does not divide m"));
            }
            Ok(())
        }
        (Claim::Nonnorm { x, y }, Witness::PhiWitness { sigma, p, s, delta }) => {
            if sigma.is_one() || !phi_membership(params, p, *sigma)? {
                return reject(format!("{p} is not in Φ_{sigma}"));
            }
            let expected = s_sigma(params, *sigma)?;
            if s.as_ref() != Some(expected) {
                return reject("s must be s_sigma".into());
            }
            let r = r_sigma(params, p, *sigma)?;
            if &r.delta != delta {
                return reject("recorded delta differs from the recomputed one".into());
            }
            if !hsodd_disjunction(x, y, p, expected, &r)? {
                return reject("coset conditions fail".into());
            }
            check_symbols_minus_one(x, y, &r)
        }
        (Claim::Nonnorm { x, y }, Witness::PsiWitness { p, q, delta }) => {
            if !psi_membership(params, p, q)? {
                return reject(format!("({p}, {q}) is not in Ψ"));
            }
            let r = psi_delta(params, p, q)?;
            if &r.delta != delta || delta.is_empty() {
                return reject("recorded delta differs from the recomputed one".into());
            }
            if !r.is_unit(q)? {
                return reject(format!("{q} is not a unit of the semilocal ring"));
            }
            if !hsodd_disjunction(x, y, p, q, &r)? {
                return reject("coset conditions fail".into());
            }
            check_symbols_minus_one(x, y, &r)
        }
        _ => reject(format!("witness kind {} does not fit the claim", w.kind())),
    }
}

fn internal(e: Error) -> Error {
    match e {
        Error::WitnessRejected(m) => Error::InternalMismatch(format!("constructed witness rejected: {m}")),
        other => other,
    }
}

pub fn nonsquare_witness(params: &ParamSet, x: &KElem, max_degree: usize) -> Result<Witness> {
    if is_square_global(x)? {
        return Err(Error::NotANonsquare);
    }
    let claim = Claim::Nonsquare { x: x.clone() };
    for place in params.m.places() {
        if valuation(x, place)? % 2 != 0 {
            let w = Witness::ModulusPlace { place: place.clone() };
            verify_witness(params, &claim, &w).map_err(internal)?;
            return Ok(w);
        }
    }
    let sigma = GaloisSign::new(-1, 1);
    let target = LocalSquareClass { parity: 0, sign: -1 };
    let qq = first_place(params, max_degree, |p| {
        Ok(artin_sign(params, p)? == sigma && local_square_class(x, p)? == target)
    })?;
    let p = phi_witness(params, sigma, &qq, max_degree)?;
    let delta = r_sigma(params, &p, sigma)?.delta;
    let w = Witness::CosetWitness { sigma, p, s: params.a.clone(), delta };
    verify_witness(params, &claim, &w).map_err(internal)?;
    Ok(w)
}

pub fn nonnorm_witness(params: &ParamSet, x: &KElem, y: &KElem, max_degree: usize) -> Result<Witness> {
    if is_norm(x, y)? {
        return Err(Error::IsActuallyANorm);
    }
    let claim = Claim::Nonnorm { x: x.clone(), y: y.clone() };
    for place in params.m.places() {
        if hilbert_symbol(x, y, place)? == -1 {
            let w = Witness::ModulusPlace { place: place.clone() };
            verify_witness(params, &claim, &w).map_err(internal)?;
            return Ok(w);
        }
    }
    let p0 = delta_set(x, y)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::InternalMismatch("non-norm without a ramified place".into()))?;
    let sigma = artin_sign(params, &p0)?;
    let w = if sigma.is_one() {
        let (p, q) = psi_witness(params, &p0, max_degree)?;
        let delta = psi_delta(params, &p, &q)?.delta;
        Witness::PsiWitness { p, q, delta }
    } else {
        let p = phi_witness(params, sigma, &p0, max_degree)?;
        let delta = r_sigma(params, &p, sigma)?.delta;
        let s = s_sigma(params, sigma)?.clone();
        Witness::PhiWitness { sigma, p, s: Some(s), delta }
    };
    verify_witness(params, &claim, &w).map_err(internal)?;
    Ok(w)
}

/// Sampling effort for the membership direction of `verify_os`.
#[derive(Clone, Copy, Debug)]
pub struct OsBudget {
    /// Samples per parameter class (three Φ_σ and Ψ).
    pub per_class: usize,
    /// Constructed witnesses per class that the samples are derived from.
    pub bases: usize,
    /// Random elements tried for Φ_σ membership by rejection.
    pub random_tries: usize,
    /// Degree bound for the random target places.
    pub place_degree: usize,
}

impl Default for OsBudget {
    fn default() -> Self {
        OsBudget { per_class: 20, bases: 3, random_tries: 30, place_degree: 4 }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SampleLog {
    pub samples: BTreeMap<String, usize>,
    pub modulus_places: Vec<String>,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct OSVerdict {
    pub member: bool,
    pub witness: Option<Witness>,
    pub log: Option<SampleLog>,
}

fn random_poly(rng: &mut ChaCha8Rng, fq: &Fq, deg: usize, monic: bool) -> Poly {
    let q = fq.q();
    let mut c: Vec<FqElem> = (0..=deg).map(|_| FqElem(rng.gen_range(0..q))).collect();
    if monic {
        c[deg] = FqElem::ONE;
    }
    Poly::from_coeffs(fq, c)
}

/// Random f/g of equal degree with support off m, so multiplying by its square keeps
/// divisors coprime to m.
fn random_multiplier(rng: &mut ChaCha8Rng, params: &ParamSet) -> Result<KElem> {
    let fq = params.a.field();
    for _ in 0..16 {
        let deg = rng.gen_range(1..=2);
        let f = random_poly(rng, fq, deg, false);
        let g = random_poly(rng, fq, deg, true);
        if f.is_zero() || f.deg() != deg {
            continue;
        }
        let s = KElem::new(f, g)?;
        if s.is_zero() {
            continue;
        }
        if s.divisor()?.support().all(|p| !params.m.divides(p)) {
            return Ok(s);
        }
    }
    Ok(KElem::one(fq))
}

fn random_kelem(rng: &mut ChaCha8Rng, fq: &Fq) -> Option<KElem> {
    let (dn, dd) = (rng.gen_range(0..=3), rng.gen_range(0..=2));
    let n = random_poly(rng, fq, dn, false);
    let d = random_poly(rng, fq, dd, true);
    if n.is_zero() {
        return None;
    }
    KElem::new(n, d).ok()
}

fn sign_pools(params: &ParamSet, budget: &OsBudget, max_degree: usize) -> Result<BTreeMap<GaloisSign, Vec<Place>>> {
    let fq = params.a.field();
    let mut deg = budget.place_degree.min(max_degree).max(1);
    loop {
        let mut pools: BTreeMap<GaloisSign, Vec<Place>> = BTreeMap::new();
        for p in places_up_to(fq, deg) {
            if !params.m.divides(&p) {
                pools.entry(artin_sign(params, &p)?).or_default().push(p);
            }
        }
        if pools.len() == 4 {
            return Ok(pools);
        }
        if deg >= max_degree {
            return Err(Error::SearchBoundExceeded(format!("some Artin sign has no place of degree <= {deg}")));
        }
        deg += 1;
    }
}

/// Membership of t in O_S through the union-of-tilde-rings identity: a constructed
/// refutation when t ∉ O_S, seeded sampling of the parameter sets otherwise.
pub fn verify_os(
    params: &ParamSet,
    t: &KElem,
    s: &BTreeSet<Place>,
    budget: &OsBudget,
    seed: u64,
    max_degree: usize,
) -> Result<OSVerdict> {
    if &params.s != s {
        return Err(Error::PreconditionFailed("parameters were built for a different S".into()));
    }
    let claim = Claim::NotInOs { t: t.clone() };
    if !in_os_direct(t, s)? {
        let p0 = t
            .divisor()?
            .iter()
            .find(|(p, n)| *n < 0 && !s.contains(p))
            .map(|(p, _)| p.clone())
            .expect("a pole outside S");
        let w = if params.m.divides(&p0) {
            Witness::PoleAtModulus { place: p0 }
        } else {
            let sigma = artin_sign(params, &p0)?;
            if sigma.is_one() {
                let (p, q) = psi_witness(params, &p0, max_degree)?;
                let delta = psi_delta(params, &p, &q)?.delta;
                Witness::PsiWitness { p, q, delta }
            } else {
                let p = phi_witness(params, sigma, &p0, max_degree)?;
                let delta = r_sigma(params, &p, sigma)?.delta;
                Witness::PhiWitness { sigma, p, s: None, delta }
            }
        };
        verify_witness(params, &claim, &w).map_err(internal)?;
        return Ok(OSVerdict { member: false, witness: Some(w), log: None });
    }

    let fq = params.a.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log = SampleLog::default();
    for p in params.m.places().filter(|p| !s.contains(p)) {
        log.modulus_places.push(p.to_string());
        if !t.is_zero() && valuation(t, p)? < 0 {
            log.failures.push(format!("{t} has a pole at {p}"));
        }
    }
    let pools = sign_pools(params, budget, max_degree)?;
    let pick = |rng: &mut ChaCha8Rng, sigma: GaloisSign| -> Place {
        let v = &pools[&sigma];
        v[rng.gen_range(0..v.len())].clone()
    };

    for sigma in [GaloisSign::new(-1, -1), GaloisSign::new(-1, 1), GaloisSign::new(1, -1)] {
        let mut bases = Vec::new();
        for _ in 0..budget.bases.max(1) {
            let p0 = pick(&mut rng, sigma);
            bases.push(phi_witness(params, sigma, &p0, max_degree)?);
        }
        for _ in 0..budget.random_tries {
            if let Some(x) = random_kelem(&mut rng, fq) {
                if phi_membership(params, &x, sigma)? {
                    bases.push(x);
                }
            }
        }
        let mut count = 0;
        for i in 0..budget.per_class {
            let u = random_multiplier(&mut rng, params)?;
            let p = bases[i % bases.len()].mul(&u.square());
            count += 1;
            if !phi_membership(params, &p, sigma)? {
                log.failures.push(format!("sample {p} left Φ_{sigma}"));
                continue;
            }
            let r = r_sigma(params, &p, sigma)?;
            if !r.in_tilde(t)? {
                log.failures.push(format!("{t} not in the tilde ring of {p} for {sigma}"));
            }
        }
        log.samples.insert(sigma.to_string(), count);
    }

    let mut bases = Vec::new();
    for _ in 0..budget.bases.max(1) {
        let p0 = pick(&mut rng, GaloisSign::ONE);
        bases.push(psi_witness(params, &p0, max_degree)?);
    }
    let mut count = 0;
    for i in 0..budget.per_class {
        let (p, q) = &bases[i % bases.len()];
        let p = p.mul(&random_multiplier(&mut rng, params)?.square());
        let q = q.mul(&random_multiplier(&mut rng, params)?.square());
        count += 1;
        if !psi_membership(params, &p, &q)? {
            log.failures.push(format!("sample ({p}, {q}) left Ψ"));
            continue;
        }
        let r = psi_delta(params, &p, &q)?;
        if r.delta.is_empty() || r.delta.iter().any(|x| params.m.divides(x)) {
            log.failures.push(format!("Δ-set of ({p}, {q}) is empty or meets m"));
            continue;
        }
        if !r.in_tilde(t)? {
            log.failures.push(format!("{t} not in the tilde ring of ({p}, {q})"));
        }
    }
    log.samples.insert("psi".into(), count);
    Ok(OSVerdict { member: log.failures.is_empty(), witness: None, log: Some(log) })
}
