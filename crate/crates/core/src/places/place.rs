use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ffcore::{Fq, FqElem, Poly};
use crate::places::KElem;

/// A place of F_q(t). Finite places come first in canonical order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Place({self})")
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Place {
    /// Finite place from a polynomial, which must be monic irreducible.
    pub fn finite(f: Poly) -> Result<Place> {
        if f.is_constant() || !f.is_monic() || !f.is_irreducible()? {
            return Err(Error::NotIrreducible(f.to_string()));
        }
        Ok(Place::Finite(f))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinity)
    }

    pub fn poly(&self) -> Option<&Poly> {
        match self {
            Place::Finite(p) => Some(p),
            Place::Infinity => None,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.deg(),
            Place::Infinity => 1,
        }
    }

    /// Canonical uniformizer: the polynomial itself, or 1/t at infinity.
    pub fn uniformizer(&self, fq: &Fq) -> KElem {
        match self {
            Place::Finite(p) => KElem::from(p.clone()),
            Place::Infinity => KElem::t(fq).inv().unwrap(),
        }
    }

    pub fn residue_field(&self, fq: &Fq) -> ResidueField {
        ResidueField {
            fq: fq.clone(),
            modulus: match self {
                Place::Finite(p) => p.clone(),
                Place::Infinity => Poly::t(fq),
            },
        }
    }
}

/// Residue field F_q[t]/(f); at infinity this is F_q itself, modelled as F_q[t]/(t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    fq: Fq,
    modulus: Poly,
}

impl ResidueField {
    pub fn base(&self) -> &Fq {
        &self.fq
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    pub fn size(&self) -> u128 {
        (self.fq.q() as u128).pow(self.degree() as u32)
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        p.rem(&self.modulus).unwrap()
    }

    pub fn from_base(&self, c: FqElem) -> Poly {
        Poly::constant(&self.fq, c)
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b)
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        a.sub(b)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mulmod(b, &self.modulus).unwrap()
    }

    pub fn pow(&self, a: &Poly, e: u128) -> Poly {
        a.powmod(e, &self.modulus).unwrap()
    }

    pub fn inv(&self, a: &Poly) -> Result<Poly> {
        a.inv_mod(&self.modulus)
    }

    /// Quadratic character: 0, +1 or -1.
    pub fn chi(&self, a: &Poly) -> i8 {
        if self.degree() == 1 {
            // evaluation at the root is the remainder constant
            return self.fq.chi(self.reduce(a).coeff(0));
        }
        a.chi_mod(&self.modulus).unwrap()
    }

    /// All elements in canonical order (polynomials of degree < deg).
    pub fn elements(&self) -> impl Iterator<Item = Poly> + '_ {
        let n = self.degree();
        let q = self.fq.q() as u64;
        (0..q.pow(n as u32)).map(move |mut idx| {
            let mut c = vec![FqElem::ZERO; n];
            for slot in c.iter_mut() {
                *slot = FqElem((idx % q) as u32);
                idx /= q;
            }
            Poly::from_coeffs(&self.fq, c)
        })
    }
}

/// Finitely supported map from places to nonzero integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Divisor(BTreeMap<Place, i64>);

impl Divisor {
    pub fn new() -> Divisor {
        Divisor(BTreeMap::new())
    }

    /// Adds `n` to the entry at `p`, dropping it when it becomes zero.
    pub fn insert(&mut self, p: Place, n: i64) {
        if n == 0 {
            return;
        }
        let e = self.0.entry(p.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.0.remove(&p);
        }
    }

    pub fn get(&self, p: &Place) -> i64 {
        self.0.get(p).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.0.iter().map(|(p, &n)| (p, n))
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.0.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(p, &n)| n * p.degree() as i64).sum()
    }

    pub fn add(&self, o: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, n) in o.iter() {
            out.insert(p.clone(), n);
        }
        out
    }

    pub fn neg(&self) -> Divisor {
        Divisor(self.0.iter().map(|(p, &n)| (p.clone(), -n)).collect())
    }

    pub fn scale(&self, k: i64) -> Divisor {
        if k == 0 {
            return Divisor::new();
        }
        Divisor(self.0.iter().map(|(p, &n)| (p.clone(), n * k)).collect())
    }
}

impl FromIterator<(Place, i64)> for Divisor {
    fn from_iter<I: IntoIterator<Item = (Place, i64)>>(iter: I) -> Divisor {
        let mut d = Divisor::new();
        for (p, n) in iter {
            d.insert(p, n);
        }
        d
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(p, n)| match p {
                Place::Finite(g) => format!("({g})^{n}"),
                Place::Infinity => format!("inf^{n}"),
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Square class of a nonzero element in K_p^×/K_p^{×2}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LocalSquareClass {
    pub parity: u8,
    pub sign: i8,
}

impl LocalSquareClass {
    pub const SQUARE: LocalSquareClass = LocalSquareClass { parity: 0, sign: 1 };

    pub fn all() -> [LocalSquareClass; 4] {
        [
            LocalSquareClass { parity: 0, sign: 1 },
            LocalSquareClass { parity: 0, sign: -1 },
            LocalSquareClass { parity: 1, sign: 1 },
            LocalSquareClass { parity: 1, sign: -1 },
        ]
    }

    pub fn mul(self, o: LocalSquareClass) -> LocalSquareClass {
        LocalSquareClass { parity: (self.parity + o.parity) % 2, sign: self.sign * o.sign }
    }
}

impl fmt::Display for LocalSquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.parity, if self.sign > 0 { "+1" } else { "-1" })
    }
}

fn multiplicity(p: &Poly, f: &Poly) -> (usize, Poly) {
    let mut m = 0;
    let mut cur = p.clone();
    while let Some(q) = cur.div_exact(f).unwrap() {
        cur = q;
        m += 1;
    }
    (m, cur)
}

pub fn valuation(x: &KElem, p: &Place) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroInput("valuation of zero"));
    }
    match p {
        Place::Infinity => Ok(x.den().deg() as i64 - x.num().deg() as i64),
        Place::Finite(f) => {
            if let Some(d) = x.divisor_cached() {
                return Ok(d.get(p));
            }
            let (a, _) = multiplicity(x.num(), f);
            let (b, _) = multiplicity(x.den(), f);
            Ok(a as i64 - b as i64)
        }
    }
}

pub fn divisor_of(x: &KElem) -> Result<Divisor> {
    x.divisor().cloned()
}

/// Reduction map; errors on a pole.
pub fn reduce(x: &KElem, p: &Place) -> Result<Poly> {
    let fq = x.field();
    if x.is_zero() {
        return Ok(Poly::zero(fq));
    }
    let v = valuation(x, p)?;
    if v < 0 {
        return Err(Error::NegativeValuation(p.to_string()));
    }
    match p {
        Place::Infinity => {
            if v > 0 {
                Ok(Poly::zero(fq))
            } else {
                Ok(Poly::constant(fq, x.lead()))
            }
        }
        Place::Finite(f) => {
            let d = x.den().inv_mod(f)?;
            x.num().mulmod(&d, f)
        }
    }
}

/// Residue of the unit part x·π^{-v} for the canonical uniformizer π.
pub fn unit_residue(x: &KElem, p: &Place) -> Result<Poly> {
    let fq = x.field();
    if x.is_zero() {
        return Err(Error::ZeroInput("unit part of zero"));
    }
    match p {
        Place::Infinity => Ok(Poly::constant(fq, x.lead())),
        Place::Finite(f) => {
            let (_, n) = multiplicity(x.num(), f);
            let (_, d) = multiplicity(x.den(), f);
            n.mulmod(&d.inv_mod(f)?, f)
        }
    }
}

/// Quadratic character of the unit part at p.
pub fn unit_chi(x: &KElem, p: &Place) -> Result<i8> {
    let fq = x.field();
    let r = unit_residue(x, p)?;
    Ok(match p {
        Place::Infinity => fq.chi(r.coeff(0)),
        Place::Finite(f) => {
            if f.deg() == 1 {
                fq.chi(r.coeff(0))
            } else {
                r.chi_mod(f)?
            }
        }
    })
}

pub fn local_square_class(x: &KElem, p: &Place) -> Result<LocalSquareClass> {
    let v = valuation(x, p)?;
    Ok(LocalSquareClass { parity: v.rem_euclid(2) as u8, sign: unit_chi(x, p)? })
}

/// Element with valuation n_i and, when given, unit residue r_i at each target place.
///
/// Built as Π π_i^{n_i} times a CRT solution; an infinity target is met by choosing
/// the degree and leading coefficient of the CRT lift and dividing by a power of an
/// auxiliary degree-one place outside the targets.
pub fn weak_approx(fq: &Fq, targets: &[(Place, i64, Option<Poly>)]) -> Result<KElem> {
    let mut seen = std::collections::BTreeSet::new();
    for (p, _, r) in targets {
        if !seen.insert(p.clone()) {
            return Err(Error::DuplicatePlace(p.to_string()));
        }
        if let Some(r) = r {
            let rf = p.residue_field(fq);
            if r.is_zero() || rf.reduce(r) != *r || (p.is_infinite() && !r.is_constant()) {
                return Err(Error::InvalidResidue(format!("{r} at {p}")));
            }
        }
    }
    let finite: Vec<(&Poly, i64, Option<&Poly>)> = targets
        .iter()
        .filter_map(|(p, n, r)| p.poly().map(|f| (f, *n, r.as_ref())))
        .collect();
    let inf = targets.iter().find(|t| t.0.is_infinite());

    let mut prefix = KElem::one(fq);
    let mut m = Poly::one(fq);
    for (f, n, _) in &finite {
        prefix = prefix.mul(&KElem::from((*f).clone()).pow(*n)?);
        m = m.mul(f);
    }
    // the infinity target fixes deg u and a power of the auxiliary place up front
    let mut tail: Option<(Poly, KElem, FqElem)> = None;
    if let Some((_, n_inf, r_inf)) = inf {
        let lead = r_inf.as_ref().map(|r| r.coeff(0)).unwrap_or(FqElem::ONE);
        let prefix_deg = prefix.num().deg() as i64 - prefix.den().deg() as i64;
        // want deg u - k·e = -prefix_deg - n_inf
        let need = -prefix_deg - n_inf;
        let aux = fq
            .irreducibles_up_to(usize::MAX)
            .find(|g| !seen.contains(&Place::Finite(g.clone())))
            .expect("infinitely many places");
        let e = aux.deg() as i64;
        let dm = m.deg() as i64;
        let mut tdeg = dm.max(need);
        while (tdeg - need).rem_euclid(e) != 0 {
            tdeg += 1;
        }
        let k = (tdeg - need) / e;
        let h = Poly::monomial(fq, lead, (tdeg - dm) as usize);
        tail = Some((h, KElem::from(aux).pow(-k)?, lead));
    }
    let scale = tail.as_ref().map(|t| t.1.clone()).unwrap_or_else(|| KElem::one(fq));
    let mut system = Vec::new();
    for (i, (f, _, r)) in finite.iter().enumerate() {
        let mut others = scale.clone();
        for (j, (g, n, _)) in finite.iter().enumerate() {
            if i != j {
                others = others.mul(&KElem::from((*g).clone()).pow(*n)?);
            }
        }
        let other_res = reduce(&others, &Place::Finite((*f).clone()))?;
        let want = r.cloned().unwrap_or_else(|| Poly::one(fq));
        let ri = want.mulmod(&other_res.inv_mod(f)?, f)?;
        system.push(((*f).clone(), ri));
    }
    let u0 = crt(fq, &system)?;
    let x = match tail {
        None => {
            let u = if u0.is_zero() { Poly::one(fq) } else { u0 };
            prefix.mul(&KElem::from(u))
        }
        Some((h, aux_pow, _)) => {
            let u = u0.add(&h.mul(&m));
            prefix.mul(&KElem::from(u)).mul(&aux_pow)
        }
    };
    for (p, n, r) in targets {
        let ok = valuation(&x, p)? == *n
            && r.as_ref().map(|r| unit_residue(&x, p).map(|u| u == *r)).transpose()?.unwrap_or(true);
        if !ok {
            return Err(Error::InternalMismatch(format!("weak approximation missed {p}")));
        }
    }
    Ok(x)
}

/// Chinese remainder: the unique u with deg u < deg Π m_i and u ≡ r_i mod m_i.
pub fn crt(fq: &Fq, system: &[(Poly, Poly)]) -> Result<Poly> {
    let mut m = Poly::one(fq);
    let mut u = Poly::zero(fq);
    for (mi, ri) in system {
        // u' = u + m·((ri - u)·m^{-1} mod mi)
        let minv = m.inv_mod(mi)?;
        let delta = ri.sub(&u).mulmod(&minv, mi)?;
        u = u.add(&m.mul(&delta));
        m = m.mul(mi);
    }
    Ok(u)
}
