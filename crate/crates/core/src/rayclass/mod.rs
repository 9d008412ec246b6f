//! Class groups of S'-integer rings A = O_{S'} of F_q(t) and their ray class groups.
//!
//! Cl_m(A) is realized through the exact sequence
//! A^× → (A/m)^× → Cl_m(A) → Cl(A) → 0 with Cl(A) = Z/d, d = gcd of degrees in S'.
//! A class is a pair (r, u): r = degree mod d, u = residue of an element whose divisor is
//! D − k_r·R plus an S'-part, R being a fixed reference place of degree prime to d.

mod abelian;

pub use abelian::Presentation;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::ffcore::{Fq, Poly};
use crate::places::{Divisor, KElem, Place};
use crate::symbols::{artin_sign, artin_sign_of, residue_symbol, GaloisSign, Modulus, ParamSet};

/// Cap on d·|(A/m)^×| for explicit enumeration.
pub const MAX_ENUMERATION: u64 = 2_000_000;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// (g, x, y) with a·x + b·y = g.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

fn check_nonempty(s: &BTreeSet<Place>) -> Result<()> {
    if s.is_empty() {
        Err(Error::EmptyPlaceSet("S' must contain at least one place"))
    } else {
        Ok(())
    }
}

/// Cl(O_{S'}) ≅ Z/d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGroup {
    pub s_prime: BTreeSet<Place>,
    pub d: u64,
}

pub fn class_group(s_prime: &BTreeSet<Place>) -> Result<ClassGroup> {
    check_nonempty(s_prime)?;
    let d = s_prime.iter().fold(0, |g, p| gcd(g, p.degree() as u64));
    Ok(ClassGroup { s_prime: s_prime.clone(), d })
}

impl ClassGroup {
    pub fn order(&self) -> u64 {
        self.d
    }

    /// Degree of the prime-to-S' part, mod d.
    pub fn class_of(&self, div: &Divisor) -> u64 {
        let deg: i64 = div
            .iter()
            .filter(|(p, _)| !self.s_prime.contains(p))
            .map(|(p, n)| n * p.degree() as i64)
            .sum();
        deg.rem_euclid(self.d as i64) as u64
    }

    pub fn class_of_place(&self, p: &Place) -> u64 {
        if self.s_prime.contains(p) {
            0
        } else {
            p.degree() as u64 % self.d
        }
    }
}

/// Units of O_{S'}: F_q^× times the listed generators.
#[derive(Clone, Debug)]
pub struct SUnitGroup {
    pub generators: Vec<KElem>,
    pub torsion: u32,
}

/// Integer basis of {n ∈ Z^k : Σ n_i·w_i = 0}.
fn degree_kernel(w: &[i64]) -> Vec<Vec<i64>> {
    let k = w.len();
    let mut row = w.to_vec();
    let mut basis: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| (i == j) as i64).collect()).collect();
    // column reduction of the single row, tracking the transform in `basis`
    loop {
        let nz: Vec<usize> = (0..k).filter(|&i| row[i] != 0).collect();
        if nz.len() <= 1 {
            break;
        }
        let piv = *nz.iter().min_by_key(|&&i| row[i].abs()).unwrap();
        for &i in &nz {
            if i != piv {
                let f = row[i] / row[piv];
                row[i] -= f * row[piv];
                for j in 0..k {
                    basis[i][j] -= f * basis[piv][j];
                }
            }
        }
    }
    (0..k).filter(|&i| row[i] == 0).map(|i| basis[i].clone()).collect()
}

pub fn s_unit_group(fq: &Fq, s_prime: &BTreeSet<Place>) -> Result<SUnitGroup> {
    check_nonempty(s_prime)?;
    let places: Vec<&Place> = s_prime.iter().collect();
    let w: Vec<i64> = places.iter().map(|p| p.degree() as i64).collect();
    let mut generators = Vec::new();
    for v in degree_kernel(&w) {
        let mut x = KElem::one(fq);
        for (p, &n) in places.iter().zip(&v) {
            if let Some(f) = p.poly() {
                x = x.mul(&KElem::from(f.clone()).pow(n)?);
            }
        }
        let div = x.divisor()?;
        if div.support().any(|p| !s_prime.contains(p)) || x.is_constant() {
            return Err(Error::InternalMismatch(format!("S'-unit {x} has divisor {div}")));
        }
        generators.push(x);
    }
    Ok(SUnitGroup { generators, torsion: fq.q() - 1 })
}

type Residues = Vec<Poly>;

/// One factor O_P/P^e of A/m; at ∞ the ring is F_q[s]/(s^e) with s = 1/t.
#[derive(Clone, Debug)]
struct Component {
    place: Place,
    modulus: Poly,
}

impl Component {
    /// Image of a nonzero polynomial coprime to this place. At ∞ this is the reversal,
    /// which is multiplicative and agrees with the true residue on degree-zero quotients.
    fn image(&self, f: &Poly) -> Result<Poly> {
        match self.place {
            Place::Infinity => f.reversed().rem(&self.modulus),
            Place::Finite(_) => f.rem(&self.modulus),
        }
    }

    fn units(&self, fq: &Fq) -> Vec<Poly> {
        let n = self.modulus.deg();
        let all = (0..n).flat_map(|k| Poly::all_of_degree(fq, k));
        match &self.place {
            Place::Infinity => all.filter(|p| !p.coeff(0).is_zero()).collect(),
            Place::Finite(g) => all.filter(|p| !p.rem(g).map(|r| r.is_zero()).unwrap_or(true)).collect(),
        }
    }

    fn unit_count(&self, fq: &Fq) -> u64 {
        let big_q = (fq.q() as u64).pow(self.place.degree() as u32);
        let e = (self.modulus.deg() / self.place.degree()) as u32;
        big_q.pow(e - 1) * (big_q - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Elem {
    r: u64,
    u: Residues,
}

pub struct RayClassGroup {
    fq: Fq,
    s_prime: BTreeSet<Place>,
    m: Modulus,
    cl: ClassGroup,
    reference: Place,
    ref_inv: u64,
    bezout: Vec<(Place, i64)>,
    comps: Vec<Component>,
    cocycle: Residues,
    units: SUnitGroup,
    unit_count: u64,
    pres: Presentation<Elem>,
}

impl fmt::Debug for RayClassGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RayClassGroup({}, m = {})", self.structure(), self.m)
    }
}

fn mod_inverse(a: u64, d: u64) -> u64 {
    let (_, x, _) = ext_gcd(a as i64, d as i64);
    x.rem_euclid(d as i64) as u64
}

pub fn ray_class_group(fq: &Fq, s_prime: &BTreeSet<Place>, m: &Modulus) -> Result<RayClassGroup> {
    let cl = class_group(s_prime)?;
    if let Some(p) = m.places().find(|p| s_prime.contains(p)) {
        return Err(Error::OverlappingSupports(format!("{p} lies in both S' and the modulus")));
    }
    let d = cl.d;
    let excluded = |p: &Place| s_prime.contains(p) || m.divides(p);
    let reference = (1..)
        .flat_map(|n| fq.irreducibles_of_degree(n))
        .map(Place::Finite)
        .find(|p| !excluded(p) && gcd(p.degree() as u64, d) == 1)
        .expect("places of every degree exist");
    let ref_inv = mod_inverse(reference.degree() as u64 % d, d);

    let places: Vec<&Place> = s_prime.iter().collect();
    let mut bezout: Vec<(Place, i64)> = Vec::new();
    let mut g = 0i64;
    for p in &places {
        let w = p.degree() as i64;
        let (ng, x, y) = ext_gcd(g, w);
        for (_, c) in bezout.iter_mut() {
            *c *= x;
        }
        bezout.push(((*p).clone(), y));
        g = ng;
    }
    debug_assert_eq!(g as u64, d);

    let comps: Vec<Component> = m
        .iter()
        .map(|(p, e)| {
            let modulus = match p {
                Place::Infinity => Poly::monomial(fq, crate::ffcore::FqElem::ONE, e as usize),
                Place::Finite(f) => f.pow(e as u64),
            };
            Component { place: p.clone(), modulus }
        })
        .collect();
    let unit_count: u64 = comps.iter().map(|c| c.unit_count(fq)).product();
    if unit_count.saturating_mul(d) > MAX_ENUMERATION {
        return Err(Error::SearchBoundExceeded(format!(
            "ray class group enumeration needs {} elements (cap {MAX_ENUMERATION})",
            unit_count.saturating_mul(d)
        )));
    }
    let units = s_unit_group(fq, s_prime)?;

    let mut g = RayClassGroup {
        fq: fq.clone(),
        s_prime: s_prime.clone(),
        m: m.clone(),
        cl,
        reference,
        ref_inv,
        bezout,
        comps,
        cocycle: Vec::new(),
        units,
        unit_count,
        pres: Presentation::build(Vec::new(), Elem { r: 0, u: Vec::new() }, &[], |a, _| a.clone()),
    };
    let mut d_ref = Divisor::new();
    d_ref.insert(g.reference.clone(), d as i64);
    g.cocycle = g.residue_of_degree_zero(&d_ref)?;

    let mut base: Vec<Elem> = fq
        .nonzero_elements()
        .map(|c| Elem { r: 0, u: g.comps.iter().map(|_| Poly::constant(fq, c)).collect() })
        .collect();
    for x in &g.units.generators {
        let u = g.residue_of_unit(x)?;
        base.push(Elem { r: 0, u });
    }
    let per_comp: Vec<Vec<Poly>> = g.comps.iter().map(|c| c.units(fq)).collect();
    let mut all = Vec::with_capacity((unit_count * d) as usize);
    for r in 0..d {
        let mut idx = vec![0usize; per_comp.len()];
        loop {
            all.push(Elem { r, u: idx.iter().zip(&per_comp).map(|(&i, v)| v[i].clone()).collect() });
            let mut j = 0;
            while j < idx.len() {
                idx[j] += 1;
                if idx[j] < per_comp[j].len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == idx.len() {
                break;
            }
        }
    }
    let identity = g.identity_elem();
    let pres = Presentation::build(all, identity, &base, |a, b| g.mul_elem(a, b));
    g.pres = pres;
    Ok(g)
}

impl RayClassGroup {
    pub fn field(&self) -> &Fq {
        &self.fq
    }

    pub fn s_prime(&self) -> &BTreeSet<Place> {
        &self.s_prime
    }

    pub fn modulus(&self) -> &Modulus {
        &self.m
    }

    pub fn class_group(&self) -> &ClassGroup {
        &self.cl
    }

    pub fn s_units(&self) -> &SUnitGroup {
        &self.units
    }

    /// |(A/m)^×|.
    pub fn residue_unit_count(&self) -> u64 {
        self.unit_count
    }

    pub fn order(&self) -> u64 {
        self.pres.order()
    }

    pub fn invariants(&self) -> Vec<u64> {
        self.pres.invariants()
    }

    /// "Z/2 x Z/4", or "1" for the trivial group.
    pub fn structure(&self) -> String {
        let inv = self.invariants();
        if inv.is_empty() {
            "1".into()
        } else {
            inv.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" x ")
        }
    }

    pub fn identity(&self) -> Vec<u64> {
        vec![0; self.invariants().len()]
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        self.invariants().iter().zip(x.iter().zip(y)).map(|(d, (a, b))| (a + b) % d).collect()
    }

    /// All classes in lexicographic order of their coordinates.
    pub fn classes(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for d in self.invariants() {
            out = out.into_iter().flat_map(|v| (0..d).map(move |i| [v.clone(), vec![i]].concat())).collect();
        }
        out
    }

    pub fn excludes(&self, p: &Place) -> bool {
        self.s_prime.contains(p) || self.m.divides(p)
    }

    fn identity_elem(&self) -> Elem {
        Elem { r: 0, u: self.comps.iter().map(|_| Poly::one(&self.fq)).collect() }
    }

    fn k_of(&self, r: u64) -> u64 {
        r * self.ref_inv % self.cl.d
    }

    fn mul_residues(&self, a: &Residues, b: &Residues) -> Residues {
        self.comps
            .iter()
            .zip(a.iter().zip(b))
            .map(|(c, (x, y))| x.mulmod(y, &c.modulus).expect("nonzero modulus"))
            .collect()
    }

    fn mul_elem(&self, a: &Elem, b: &Elem) -> Elem {
        let d = self.cl.d;
        let mut u = self.mul_residues(&a.u, &b.u);
        if self.k_of(a.r) + self.k_of(b.r) >= d {
            u = self.mul_residues(&u, &self.cocycle);
        }
        Elem { r: (a.r + b.r) % d, u }
    }

    fn pow_image(&self, c: &Component, f: &Poly, n: i64) -> Result<Poly> {
        let mut base = c.image(f)?;
        if n < 0 {
            base = base.inv_mod(&c.modulus)?;
        }
        base.powmod(n.unsigned_abs() as u128, &c.modulus)
    }

    /// Residue of the element with divisor D + Σ n_s·s (S'-part chosen to make the degree
    /// vanish); D must have degree ≡ 0 mod d and avoid S' ∪ supp(m).
    fn residue_of_degree_zero(&self, div: &Divisor) -> Result<Residues> {
        let deg = div.degree();
        let d = self.cl.d as i64;
        if deg.rem_euclid(d) != 0 {
            return Err(Error::InternalMismatch(format!("divisor degree {deg} not divisible by {d}")));
        }
        let factor = -deg / d;
        let mut terms: Vec<(&Poly, i64)> = div.iter().filter_map(|(p, n)| p.poly().map(|f| (f, n))).collect();
        for (s, b) in &self.bezout {
            if let Some(f) = s.poly() {
                terms.push((f, b * factor));
            }
        }
        let mut out = Vec::with_capacity(self.comps.len());
        for c in &self.comps {
            let mut acc = Poly::one(&self.fq);
            for (f, n) in &terms {
                if *n != 0 {
                    acc = acc.mulmod(&self.pow_image(c, f, *n)?, &c.modulus)?;
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Residue of an element that is a unit at every place of m.
    fn residue_of_unit(&self, x: &KElem) -> Result<Residues> {
        let mut out = Vec::with_capacity(self.comps.len());
        for c in &self.comps {
            if c.place.is_infinite() && x.num().deg() != x.den().deg() {
                return Err(Error::NonzeroValuation(c.place.to_string()));
            }
            let n = c.image(x.num())?;
            let dn = c.image(x.den())?;
            let v = n.mulmod(&dn.inv_mod(&c.modulus)?, &c.modulus)?;
            out.push(v);
        }
        Ok(out)
    }

    fn elem_of(&self, div: &Divisor) -> Result<Elem> {
        for p in div.support() {
            if self.s_prime.contains(p) {
                return Err(Error::PreconditionFailed(format!("{p} lies in S'")));
            }
            if self.m.divides(p) {
                return Err(Error::PlaceDividesModulus(p.to_string()));
            }
        }
        let d = self.cl.d;
        let r = div.degree().rem_euclid(d as i64) as u64;
        let k = self.k_of(r);
        let mut shifted = div.clone();
        shifted.insert(self.reference.clone(), -(k as i64));
        Ok(Elem { r, u: self.residue_of_degree_zero(&shifted)? })
    }

    /// Class of a divisor supported away from S' ∪ supp(m).
    pub fn class_of(&self, div: &Divisor) -> Result<Vec<u64>> {
        let e = self.elem_of(div)?;
        self.pres
            .coordinates(&e)
            .ok_or_else(|| Error::InternalMismatch(format!("class of {div} not found")))
    }

    pub fn class_of_place(&self, p: &Place) -> Result<Vec<u64>> {
        let mut div = Divisor::new();
        div.insert(p.clone(), 1);
        self.class_of(&div)
    }

    /// Class of x·A, i.e. of div(x) with the S'-part removed.
    pub fn class_of_element(&self, x: &KElem) -> Result<Vec<u64>> {
        let div: Divisor = x.divisor()?.iter().filter(|(p, _)| !self.s_prime.contains(p)).map(|(p, n)| (p.clone(), n)).collect();
        self.class_of(&div)
    }
}

/// Places p ∉ S' ∪ supp(m) of degree ≤ D in class `target`, canonical order.
pub fn primes_in_class(g: &RayClassGroup, target: &[u64], max_degree: usize) -> Result<Vec<Place>> {
    let mut out = Vec::new();
    for p in places_up_to(g.field(), max_degree) {
        if !g.excludes(&p) && g.class_of_place(&p)? == target {
            out.push(p);
        }
    }
    Ok(out)
}

/// Finite places of degree ≤ D in canonical order, then ∞.
pub fn places_up_to(fq: &Fq, max_degree: usize) -> impl Iterator<Item = Place> + '_ {
    let inf = (max_degree >= 1).then_some(Place::Infinity);
    fq.irreducibles_up_to(max_degree).map(Place::Finite).chain(inf)
}

/// The first place q ∉ supp(m) ∪ S' ∪ avoid with the given Artin sign and class in Cl(O_{S'}).
pub fn find_prime(
    params: &ParamSet,
    sign: GaloisSign,
    s_prime: &BTreeSet<Place>,
    ideal_class: u64,
    avoid: &BTreeSet<Place>,
    max_degree: usize,
) -> Result<Place> {
    let cl = class_group(s_prime)?;
    if let Some(p) = params.m.places().find(|p| s_prime.contains(p)) {
        return Err(Error::OverlappingSupports(format!("{p} lies in both S' and the modulus")));
    }
    let target = ideal_class % cl.d;
    let fq = params.a.field();
    for p in places_up_to(fq, max_degree) {
        if params.m.divides(&p) || avoid.contains(&p) || s_prime.contains(&p) {
            continue;
        }
        if cl.class_of_place(&p) == target && artin_sign(params, &p)? == sign {
            return Ok(p);
        }
    }
    Err(Error::SearchBoundExceeded(format!(
        "no place of degree <= {max_degree} with sign {sign} in class {target} of Z/{}",
        cl.d
    )))
}

/// q with Artin sign (−1,−1), nonsquare at p0, and div(q) = 𝔮 − k·q0 for a place 𝔮.
pub fn lemma_aprime(params: &ParamSet, p0: &Place, q0: &Place, max_degree: usize) -> Result<KElem> {
    let fq = params.a.field();
    if p0 == q0 {
        return Err(Error::PreconditionFailed("p0 and q0 must differ".into()));
    }
    for p in [p0, q0] {
        if params.m.divides(p) {
            return Err(Error::PlaceDividesModulus(p.to_string()));
        }
    }
    if artin_sign(params, q0)? != GaloisSign::ONE {
        return Err(Error::PreconditionFailed(format!("{q0} does not have Artin sign (+1,+1)")));
    }
    let e = q0.degree();
    let minus = GaloisSign::new(-1, -1);
    let flip = KElem::constant(fq, fq.nonsquare());
    let flip_works = residue_symbol(&flip, p0)? < 0;
    for g in fq.irreducibles_up_to(max_degree) {
        if q0.poly().is_some() && g.deg() % e != 0 {
            continue;
        }
        let qq = Place::Finite(g.clone());
        if &qq == p0 || &qq == q0 || params.m.divides(&qq) || artin_sign(params, &qq)? != minus {
            continue;
        }
        let mut q = KElem::from(g.clone());
        if let Some(h) = q0.poly() {
            q = q.div(&KElem::from(h.clone()).pow((g.deg() / e) as i64)?)?;
        }
        if residue_symbol(&q, p0)? > 0 {
            if !flip_works {
                continue;
            }
            q = q.mul(&flip);
        }
        verify_aprime(params, p0, q0, &qq, &q)?;
        return Ok(q);
    }
    Err(Error::SearchBoundExceeded(format!(
        "no prime with sign (-1,-1) of degree <= {max_degree} for p0 = {p0}, q0 = {q0}"
    )))
}

fn verify_aprime(params: &ParamSet, p0: &Place, q0: &Place, qq: &Place, q: &KElem) -> Result<()> {
    let div = q.divisor()?;
    let ok = artin_sign_of(params, q)? == GaloisSign::new(-1, -1)
        && residue_symbol(q, p0)? == -1
        && div.get(qq) == 1
        && div.support().all(|p| p == qq || p == q0);
    if ok {
        Ok(())
    } else {
        Err(Error::InternalMismatch(format!("candidate {q} fails its own conditions")))
    }
}

#[cfg(test)]
mod tests;
