//! Quadratic residue and Hilbert symbols, ramification sets, Artin signs and
//! elements with prescribed symbols.

pub mod search;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffcore::Fq;
use crate::places::{
    local_square_class, support, unit_chi, valuation, weak_approx, Divisor, KElem,
    LocalSquareClass, Place,
};
pub use search::{search_classes, ClassTarget, DEFAULT_CANDIDATES};

/// Element (ε_a, ε_b) of Gal(K(√a,√b)/K) ≅ {±1}².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaloisSign {
    pub a: i8,
    pub b: i8,
}

impl GaloisSign {
    pub const ONE: GaloisSign = GaloisSign { a: 1, b: 1 };

    pub fn new(a: i8, b: i8) -> GaloisSign {
        GaloisSign { a, b }
    }

    pub fn all() -> [GaloisSign; 4] {
        [
            GaloisSign::new(1, 1),
            GaloisSign::new(1, -1),
            GaloisSign::new(-1, 1),
            GaloisSign::new(-1, -1),
        ]
    }

    pub fn mul(self, o: GaloisSign) -> GaloisSign {
        GaloisSign { a: self.a * o.a, b: self.b * o.b }
    }

    pub fn is_one(self) -> bool {
        self == GaloisSign::ONE
    }
}

fn pm(s: i8) -> &'static str {
    if s > 0 {
        "+1"
    } else {
        "-1"
    }
}

impl fmt::Display for GaloisSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", pm(self.a), pm(self.b))
    }
}

impl Serialize for GaloisSign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for GaloisSign {
    type Err = Error;
    fn from_str(s: &str) -> Result<GaloisSign> {
        let bad = || Error::Parse { pos: 0, msg: format!("expected a sign pair like (+1,-1), got {s:?}") };
        let t = s.trim();
        let inner = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).ok_or_else(bad)?;
        let parts: Vec<&str> = inner.split(',').map(|x| x.trim()).collect();
        if parts.len() != 2 {
            return Err(bad());
        }
        let one = |x: &str| match x {
            "+1" | "1" | "+" => Ok(1),
            "-1" | "-" => Ok(-1),
            _ => Err(bad()),
        };
        Ok(GaloisSign::new(one(parts[0])?, one(parts[1])?))
    }
}

/// Modulus: places with exponents ≥ 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Modulus(BTreeMap<Place, u32>);

impl Modulus {
    pub fn new() -> Modulus {
        Modulus(BTreeMap::new())
    }

    /// Exponent-one modulus on a set of places.
    pub fn squarefree<'a, I: IntoIterator<Item = &'a Place>>(places: I) -> Modulus {
        Modulus(places.into_iter().map(|p| (p.clone(), 1)).collect())
    }

    pub fn from_divisor(d: &Divisor) -> Result<Modulus> {
        let mut out = BTreeMap::new();
        for (p, n) in d.iter() {
            if n < 1 {
                return Err(Error::InvalidModulus(format!("exponent {n} at {p}")));
            }
            out.insert(p.clone(), n as u32);
        }
        Ok(Modulus(out))
    }

    pub fn insert(&mut self, p: Place, e: u32) {
        if e > 0 {
            self.0.insert(p, e);
        }
    }

    pub fn exponent(&self, p: &Place) -> u32 {
        self.0.get(p).copied().unwrap_or(0)
    }

    pub fn divides(&self, p: &Place) -> bool {
        self.0.contains_key(p)
    }

    pub fn places(&self) -> impl Iterator<Item = &Place> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, u32)> {
        self.0.iter().map(|(p, &e)| (p, e))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|(p, &e)| p.degree() * e as usize).sum()
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(p, e)| match p {
                Place::Finite(g) => format!("({g})^{e}"),
                Place::Infinity => format!("inf^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Parameters a, b, c, d with admissible modulus m, built for the place set S.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSet {
    pub a: KElem,
    pub b: KElem,
    pub c: KElem,
    pub d: KElem,
    pub m: Modulus,
    pub s: BTreeSet<Place>,
}

/// χ(−1) in the residue field at p.
pub fn neg_one_chi(fq: &Fq, p: &Place) -> i8 {
    let q = fq.q() as u64;
    // |F_p| ≡ 3 mod 4 iff q ≡ 3 mod 4 and deg p is odd
    if q % 4 == 3 && p.degree() % 2 == 1 {
        -1
    } else {
        1
    }
}

/// Hilbert symbol from the two local square classes; `neg1` is χ(−1).
pub fn symbol_from_classes(ca: LocalSquareClass, cb: LocalSquareClass, neg1: i8) -> i8 {
    let mut s = 1i8;
    if ca.parity == 1 && cb.parity == 1 {
        s *= neg1;
    }
    if cb.parity == 1 {
        s *= ca.sign;
    }
    if ca.parity == 1 {
        s *= cb.sign;
    }
    s
}

pub fn residue_symbol(a: &KElem, p: &Place) -> Result<i8> {
    if a.is_zero() {
        return Err(Error::ZeroInput("residue symbol of zero"));
    }
    if valuation(a, p)? != 0 {
        return Err(Error::NonzeroValuation(p.to_string()));
    }
    unit_chi(a, p)
}

/// (a,b)_p = χ((−1)^{v(a)v(b)} a^{v(b)} / b^{v(a)}), evaluated through square classes.
pub fn hilbert_symbol(a: &KElem, b: &KElem, p: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroInput("Hilbert symbol with a zero argument"));
    }
    let va = valuation(a, p)?;
    let vb = valuation(b, p)?;
    if va % 2 == 0 && vb % 2 == 0 {
        return Ok(1);
    }
    let ca = local_square_class(a, p)?;
    let cb = local_square_class(b, p)?;
    Ok(symbol_from_classes(ca, cb, neg_one_chi(a.field(), p)))
}

/// Places where (a,b)_p could be −1: the symbol is +1 wherever both are units.
pub fn scan_set(a: &KElem, b: &KElem) -> Result<BTreeSet<Place>> {
    let mut s = support(a)?;
    s.extend(support(b)?);
    s.insert(Place::Infinity);
    Ok(s)
}

pub fn delta_set(a: &KElem, b: &KElem) -> Result<BTreeSet<Place>> {
    let mut out = BTreeSet::new();
    for p in scan_set(a, b)? {
        if hilbert_symbol(a, b, &p)? < 0 {
            out.insert(p);
        }
    }
    Ok(out)
}

/// Always true; a symbol product of −1 is reported as an error.
pub fn verify_reciprocity(a: &KElem, b: &KElem) -> Result<bool> {
    let mut prod = 1i8;
    for p in scan_set(a, b)? {
        prod *= hilbert_symbol(a, b, &p)?;
    }
    if prod != 1 {
        return Err(Error::ReciprocityViolation(format!("{a}, {b}")));
    }
    Ok(true)
}

pub fn artin_sign(params: &ParamSet, p: &Place) -> Result<GaloisSign> {
    if params.m.divides(p) {
        return Err(Error::PlaceDividesModulus(p.to_string()));
    }
    Ok(GaloisSign::new(unit_chi(&params.a, p)?, unit_chi(&params.b, p)?))
}

/// Artin sign of the principal divisor of x, which must be coprime to m.
pub fn artin_sign_of(params: &ParamSet, x: &KElem) -> Result<GaloisSign> {
    let mut s = GaloisSign::ONE;
    for (p, n) in x.divisor()?.iter() {
        if n % 2 != 0 {
            s = s.mul(artin_sign(params, p)?);
        }
    }
    Ok(s)
}

/// Targets for `construct_with_symbols`: (index, place) ↦ ±1, all unlisted entries +1.
pub type SymbolTargets = BTreeMap<(usize, Place), i8>;

/// x with (a_i, x)_p equal to the listed targets and +1 everywhere else.
pub fn construct_with_symbols(
    fq: &Fq,
    pairs: &[KElem],
    targets: &SymbolTargets,
    max_degree: usize,
) -> Result<KElem> {
    if pairs.iter().any(|a| a.is_zero()) {
        return Err(Error::ZeroInput("symbol parameter is zero"));
    }
    for ((i, p), &e) in targets {
        if *i >= pairs.len() {
            return Err(Error::InfeasibleTargets {
                index: Some(*i),
                place: Some(p.to_string()),
                reason: "index out of range".into(),
            });
        }
        if e != 1 && e != -1 {
            return Err(Error::InfeasibleTargets {
                index: Some(*i),
                place: Some(p.to_string()),
                reason: format!("target {e} is not ±1"),
            });
        }
    }
    for i in 0..pairs.len() {
        let negs = targets.iter().filter(|((j, _), &e)| *j == i && e < 0).count();
        if negs % 2 == 1 {
            return Err(Error::InfeasibleTargets {
                index: Some(i),
                place: None,
                reason: "odd number of -1 targets violates reciprocity".into(),
            });
        }
    }
    let target = |i: usize, p: &Place| targets.get(&(i, p.clone())).copied().unwrap_or(1);

    let mut places: BTreeSet<Place> = targets.keys().map(|(_, p)| p.clone()).collect();
    for a in pairs {
        places.extend(support(a)?);
    }
    places.insert(Place::Infinity);

    let mut wanted = Vec::new();
    for p in &places {
        let neg1 = neg_one_chi(fq, p);
        let classes: Vec<LocalSquareClass> =
            pairs.iter().map(|a| local_square_class(a, p)).collect::<Result<_>>()?;
        let pick = LocalSquareClass::all().into_iter().find(|cx| {
            classes
                .iter()
                .enumerate()
                .all(|(i, ca)| symbol_from_classes(*ca, *cx, neg1) == target(i, p))
        });
        match pick {
            Some(c) => wanted.push(ClassTarget::new(p.clone(), c.parity, Some(c.sign))),
            None => {
                let culprit = classes
                    .iter()
                    .enumerate()
                    .find(|(i, c)| **c == LocalSquareClass::SQUARE && target(*i, p) < 0)
                    .map(|(i, _)| i);
                let reason = match culprit {
                    Some(_) => "parameter is a local square, so its symbols are all +1".to_string(),
                    None => "no local class meets all targets at this place simultaneously".to_string(),
                };
                return Err(Error::InfeasibleTargets {
                    index: culprit,
                    place: Some(p.to_string()),
                    reason,
                });
            }
        }
    }

    let x = search_classes(
        fq,
        &wanted,
        |p| {
            for a in pairs {
                if unit_chi(a, p)? < 0 {
                    return Ok(false);
                }
            }
            Ok(true)
        },
        max_degree,
        DEFAULT_CANDIDATES,
    )?;

    for (i, a) in pairs.iter().enumerate() {
        let mut scan = scan_set(a, &x)?;
        scan.extend(targets.keys().filter(|(j, _)| *j == i).map(|(_, p)| p.clone()));
        for p in scan {
            if hilbert_symbol(a, &x, &p)? != target(i, &p) {
                return Err(Error::InternalMismatch(format!(
                    "constructed element {x} misses the symbol target at ({i}, {p})"
                )));
            }
        }
    }
    Ok(x)
}

/// Places of odd valuation.
pub fn odd_valuation_places(x: &KElem) -> Result<BTreeSet<Place>> {
    Ok(x
        .divisor()?
        .iter()
        .filter(|(_, n)| n % 2 != 0)
        .map(|(p, _)| p.clone())
        .collect())
}

fn first_place_where<F>(fq: &Fq, mut pred: F) -> Result<Place>
where
    F: FnMut(&Place) -> Result<bool>,
{
    for g in fq.irreducibles_up_to(64) {
        let p = Place::Finite(g);
        if pred(&p)? {
            return Ok(p);
        }
    }
    Err(Error::SearchBoundExceeded("no suitable auxiliary place".into()))
}

/// a, b, c, d and the admissible modulus for the place set S.
pub fn choose_params(fq: &Fq, s: &BTreeSet<Place>, max_degree: usize) -> Result<ParamSet> {
    if s.is_empty() {
        return Err(Error::EmptyPlaceSet("S must contain at least one place"));
    }
    let p1 = first_place_where(fq, |p| Ok(!s.contains(p)))?;
    let mut ta: Vec<(Place, i64, Option<_>)> = s.iter().map(|p| (p.clone(), 1, None)).collect();
    ta.push((p1.clone(), 0, None));
    let a = weak_approx(fq, &ta)?;
    let supp_a = support(&a)?;
    let mut tb: Vec<(Place, i64, Option<_>)> = vec![(p1.clone(), 1, None)];
    tb.extend(supp_a.iter().filter(|p| **p != p1).map(|p| (p.clone(), 0, None)));
    let b = weak_approx(fq, &tb)?;
    let supp_b = support(&b)?;

    let mut used: BTreeSet<Place> = supp_a.union(&supp_b).cloned().collect();
    let c = companion(fq, &a, &mut used, max_degree)?;
    let d = companion(fq, &b, &mut used, max_degree)?;

    let mut mplaces: BTreeSet<Place> = BTreeSet::new();
    for x in [&a, &b, &c, &d] {
        mplaces.extend(support(x)?);
    }
    mplaces.extend(delta_set(&a, &c)?);
    mplaces.extend(delta_set(&b, &d)?);
    let params = ParamSet {
        a,
        b,
        c,
        d,
        m: Modulus::squarefree(&mplaces),
        s: s.clone(),
    };
    check_params(&params)?;
    Ok(params)
}

// c with Δ_{a,c} = P(a), plus one auxiliary place where a is a nonsquare unit when |P(a)| is odd.
fn companion(fq: &Fq, a: &KElem, used: &mut BTreeSet<Place>, max_degree: usize) -> Result<KElem> {
    let odd = odd_valuation_places(a)?;
    let mut targets = SymbolTargets::new();
    for p in &odd {
        targets.insert((0, p.clone()), -1);
    }
    if odd.len() % 2 == 1 {
        let aux = first_place_where(fq, |p| Ok(!used.contains(p) && unit_chi(a, p)? < 0))?;
        used.insert(aux.clone());
        targets.insert((0, aux), -1);
    }
    construct_with_symbols(fq, std::slice::from_ref(a), &targets, max_degree)
}

fn is_global_square(x: &KElem) -> Result<bool> {
    Ok(x.divisor()?.iter().all(|(_, n)| n % 2 == 0) && x.field().chi(x.lead()) > 0)
}

/// Checks every invariant a parameter set must satisfy.
pub fn check_params(params: &ParamSet) -> Result<()> {
    let fail = |m: String| Err(Error::InternalMismatch(m));
    let ParamSet { a, b, c, d, m, s } = params;
    if is_global_square(&a.div(b)?)? || is_global_square(a)? || is_global_square(b)? {
        return fail("a, b must be nonsquares with distinct square classes".into());
    }
    let sa = support(a)?;
    let sb = support(b)?;
    if !sa.is_disjoint(&sb) {
        return fail("supports of a and b overlap".into());
    }
    for p in s {
        if !m.divides(p) {
            return fail(format!("{p} in S does not divide m"));
        }
    }
    let mut need = BTreeSet::new();
    for x in [a, b, c, d] {
        need.extend(support(x)?);
    }
    let dac = delta_set(a, c)?;
    let dbd = delta_set(b, d)?;
    need.extend(dac.iter().cloned());
    need.extend(dbd.iter().cloned());
    for p in &need {
        if !m.divides(p) {
            return fail(format!("{p} must divide m"));
        }
    }
    for (x, dx) in [(a, &dac), (b, &dbd)] {
        let odd = odd_valuation_places(x)?;
        if !odd.is_subset(dx) || dx.len() > odd.len() + 1 {
            return fail(format!("companion of {x} has the wrong ramification"));
        }
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod tests;
