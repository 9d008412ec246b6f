//! Dense univariate polynomials over F_q.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ffcore::field::{Fq, FqElem};

/// Polynomial in t with coefficients low to high; trailing zeros are never stored.
#[derive(Clone)]
pub struct Poly {
    fq: Fq,
    c: Vec<FqElem>,
}

/// Leading coefficient times a canonically sorted list of monic irreducible factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub lead: FqElem,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self, fq: &Fq) -> Poly {
        let mut acc = Poly::constant(fq, self.lead);
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m as u64);
        }
        acc
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}
impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: degree first, then coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl Poly {
    pub fn from_coeffs(fq: &Fq, mut c: Vec<FqElem>) -> Poly {
        while c.last().map(|x| x.is_zero()).unwrap_or(false) {
            c.pop();
        }
        Poly { fq: fq.clone(), c }
    }

    /// Coefficients as integers, low to high, reduced into the prime field.
    pub fn from_ints(fq: &Fq, c: &[i64]) -> Poly {
        Poly::from_coeffs(fq, c.iter().map(|&x| fq.from_int(x)).collect())
    }

    pub fn zero(fq: &Fq) -> Poly {
        Poly { fq: fq.clone(), c: Vec::new() }
    }

    pub fn one(fq: &Fq) -> Poly {
        Poly::constant(fq, fq.one())
    }

    pub fn constant(fq: &Fq, a: FqElem) -> Poly {
        Poly::from_coeffs(fq, vec![a])
    }

    /// The indeterminate t.
    pub fn t(fq: &Fq) -> Poly {
        Poly::monomial(fq, fq.one(), 1)
    }

    pub fn monomial(fq: &Fq, a: FqElem, e: usize) -> Poly {
        let mut c = vec![FqElem::ZERO; e + 1];
        c[e] = a;
        Poly::from_coeffs(fq, c)
    }

    pub fn field(&self) -> &Fq {
        &self.fq
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.c.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == FqElem::ONE
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.c.last() == Some(&FqElem::ONE)
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> FqElem {
        self.c.last().copied().unwrap_or(FqElem::ZERO)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.fq.inv(self.lead()).expect("nonzero lead");
        self.scale(inv)
    }

    pub fn scale(&self, a: FqElem) -> Poly {
        let f = &self.fq;
        Poly::from_coeffs(f, self.c.iter().map(|&x| f.mul(x, a)).collect())
    }

    pub fn neg(&self) -> Poly {
        let f = &self.fq;
        Poly { fq: f.clone(), c: self.c.iter().map(|&x| f.neg(x)).collect() }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let f = &self.fq;
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect();
        Poly::from_coeffs(f, c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let f = &self.fq;
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect();
        Poly::from_coeffs(f, c)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.fq);
        }
        let f = &self.fq;
        let n = self.c.len() + o.c.len() - 1;
        if f.k() == 1 {
            let p = f.p() as u64;
            let mut acc = vec![0u64; n];
            for (i, a) in self.c.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let av = a.0 as u64;
                for (j, b) in o.c.iter().enumerate() {
                    acc[i + j] += av * b.0 as u64;
                }
                if i % 1024 == 1023 {
                    for x in acc.iter_mut() {
                        *x %= p;
                    }
                }
            }
            let c = acc.into_iter().map(|x| FqElem((x % p) as u32)).collect();
            return Poly::from_coeffs(f, c);
        }
        let mut c = vec![FqElem::ZERO; n];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(f, c)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.fq);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiply by t^e.
    pub fn shift(&self, e: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![FqElem::ZERO; e];
        c.extend_from_slice(&self.c);
        Poly { fq: self.fq.clone(), c }
    }

    pub fn divmod(&self, g: &Poly) -> Result<(Poly, Poly)> {
        if g.is_zero() {
            return Err(Error::DivisionByZero("polynomial division by zero"));
        }
        let f = &self.fq;
        if self.c.len() < g.c.len() {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut r = self.c.clone();
        let dg = g.c.len() - 1;
        let inv = f.inv(g.lead())?;
        let mut q = vec![FqElem::ZERO; r.len() - dg];
        for i in (dg..r.len()).rev() {
            let coef = r[i];
            if coef.is_zero() {
                continue;
            }
            let factor = f.mul(coef, inv);
            q[i - dg] = factor;
            for (j, &gc) in g.c.iter().enumerate() {
                let idx = i - dg + j;
                r[idx] = f.sub(r[idx], f.mul(factor, gc));
            }
        }
        r.truncate(dg);
        Ok((Poly::from_coeffs(f, q), Poly::from_coeffs(f, r)))
    }

    pub fn rem(&self, g: &Poly) -> Result<Poly> {
        Ok(self.divmod(g)?.1)
    }

    /// Quotient when g divides self; `None` otherwise.
    pub fn div_exact(&self, g: &Poly) -> Result<Option<Poly>> {
        let (q, r) = self.divmod(g)?;
        Ok(if r.is_zero() { Some(q) } else { None })
    }

    pub fn gcd(&self, g: &Poly) -> Result<Poly> {
        if self.is_zero() && g.is_zero() {
            return Err(Error::ZeroInput("gcd of two zero polynomials"));
        }
        let (mut a, mut b) = (self.clone(), g.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Returns (g, s, u) with s·self + u·other = g, g monic.
    pub fn ext_gcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroInput("gcd of two zero polynomials"));
        }
        let fq = &self.fq;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(fq), Poly::zero(fq));
        let (mut u0, mut u1) = (Poly::zero(fq), Poly::one(fq));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            r0 = std::mem::replace(&mut r1, r);
            let s2 = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s2);
            let u2 = u0.sub(&q.mul(&u1));
            u0 = std::mem::replace(&mut u1, u2);
        }
        let inv = fq.inv(r0.lead())?;
        Ok((r0.scale(inv), s0.scale(inv), u0.scale(inv)))
    }

    /// Inverse modulo m, when gcd(self, m) = 1.
    pub fn inv_mod(&self, m: &Poly) -> Result<Poly> {
        let (g, s, _) = self.rem(m)?.ext_gcd(m)?;
        if !g.is_one() {
            return Err(Error::DivisionByZero("element not invertible modulo polynomial"));
        }
        s.rem(m)
    }

    pub fn mulmod(&self, o: &Poly, m: &Poly) -> Result<Poly> {
        self.mul(o).rem(m)
    }

    pub fn powmod(&self, mut e: u128, m: &Poly) -> Result<Poly> {
        let mut base = self.rem(m)?;
        let mut acc = Poly::one(&self.fq).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, m)?;
            }
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.fq;
        if self.c.len() <= 1 {
            return Poly::zero(f);
        }
        let c = (1..self.c.len())
            .map(|i| f.mul(self.c[i], f.from_int(i as i64)))
            .collect();
        Poly::from_coeffs(f, c)
    }

    pub fn eval(&self, x: FqElem) -> FqElem {
        let f = &self.fq;
        self.c
            .iter()
            .rev()
            .fold(FqElem::ZERO, |acc, &a| f.add(f.mul(acc, x), a))
    }

    /// Reversal t^deg · f(1/t).
    pub fn reversed(&self) -> Poly {
        let mut c = self.c.clone();
        c.reverse();
        Poly::from_coeffs(&self.fq, c)
    }

    /// Resultant Res(self, g) computed by the Euclidean recursion.
    pub fn resultant(&self, g: &Poly) -> Result<FqElem> {
        let f = &self.fq;
        if self.is_zero() || g.is_zero() {
            return Ok(FqElem::ZERO);
        }
        let (mut a, mut b) = (self.clone(), g.clone());
        let mut acc = f.one();
        loop {
            let (da, db) = (a.deg() as u64, b.deg() as u64);
            if db == 0 {
                return Ok(f.mul(acc, f.pow(b.lead(), da)));
            }
            if da == 0 {
                return Ok(f.mul(acc, f.pow(a.lead(), db)));
            }
            let r = a.rem(&b)?;
            if r.is_zero() {
                return Ok(FqElem::ZERO);
            }
            if (da * db) % 2 == 1 {
                acc = f.neg(acc);
            }
            acc = f.mul(acc, f.pow(b.lead(), da - r.deg() as u64));
            a = b;
            b = r;
        }
    }

    /// Quadratic character of self modulo a monic irreducible `m`
    /// (0 when m divides self), via the norm Res(m, self).
    pub fn chi_mod(&self, m: &Poly) -> Result<i8> {
        let r = self.rem(m)?;
        if r.is_zero() {
            return Ok(0);
        }
        let n = m.monic().resultant(&r)?;
        Ok(self.fq.chi(n))
    }

    pub fn is_irreducible(&self) -> Result<bool> {
        if self.is_constant() {
            return Err(Error::ConstantPolynomial("irreducibility of a constant"));
        }
        let f = self.monic();
        let n = f.deg();
        if n == 1 {
            return Ok(true);
        }
        let q = self.fq.q() as u128;
        let t = Poly::t(&self.fq);
        let mut h = t.rem(&f)?;
        for _ in 1..=n / 2 {
            h = h.powmod(q, &f)?;
            if !f.gcd(&h.sub(&t))?.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn factor(&self) -> Result<Factorization> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        self.factor_with_rng(&mut rng)
    }

    /// Square-free decomposition, distinct-degree and Cantor–Zassenhaus
    /// equal-degree splitting. Output order is canonical regardless of `rng`.
    pub fn factor_with_rng<R: Rng>(&self, rng: &mut R) -> Result<Factorization> {
        if self.is_zero() {
            return Err(Error::ZeroInput("factorization of zero"));
        }
        let lead = self.lead();
        let f = self.monic();
        let mut factors = Vec::new();
        if f.deg() > 0 {
            for (g, m) in square_free(&f)? {
                for (h, d) in distinct_degree(&g)? {
                    let mut parts = Vec::new();
                    equal_degree(&h, d, rng, &mut parts)?;
                    factors.extend(parts.into_iter().map(|p| (p, m)));
                }
            }
        }
        factors.sort();
        Ok(Factorization { lead, factors })
    }

    /// All monic polynomials of degree n in canonical order.
    pub fn monic_of_degree(fq: &Fq, n: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = fq.q() as u64;
        let count = q.pow(n as u32);
        (0..count).map(move |mut idx| {
            let mut c = vec![FqElem::ZERO; n + 1];
            c[n] = FqElem::ONE;
            for slot in c.iter_mut().take(n) {
                *slot = FqElem((idx % q) as u32);
                idx /= q;
            }
            Poly::from_coeffs(fq, c)
        })
    }

    /// All polynomials of exact degree n (any nonzero lead) in canonical order.
    pub fn all_of_degree(fq: &Fq, n: usize) -> impl Iterator<Item = Poly> + '_ {
        fq.nonzero_elements()
            .flat_map(move |lead| Poly::monic_of_degree(fq, n).map(move |m| m.scale(lead)))
    }
}

fn square_free(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let fq = f.field();
    let mut out = Vec::new();
    let d = f.derivative();
    let mut c = f.gcd(&d).unwrap_or_else(|_| f.clone());
    if d.is_zero() {
        c = f.clone();
    }
    let mut w = f.div_exact(&c)?.expect("gcd divides");
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c)?;
        let fac = w.div_exact(&y)?.expect("gcd divides");
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y.clone();
        c = c.div_exact(&y)?.expect("gcd divides");
        i += 1;
    }
    if !c.is_one() {
        let p = fq.p() as usize;
        let root: Vec<FqElem> = c
            .coeffs()
            .iter()
            .step_by(p)
            .map(|&a| fq.pth_root(a))
            .collect();
        let root = Poly::from_coeffs(fq, root);
        for (g, j) in square_free(&root)? {
            out.push((g, j * p as u32));
        }
    }
    Ok(out)
}

fn distinct_degree(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let fq = f.field();
    let q = fq.q() as u128;
    let t = Poly::t(fq);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = t.rem(&rest)?;
    let mut d = 1;
    while rest.deg() >= 2 * d {
        h = h.powmod(q, &rest)?;
        let g = rest.gcd(&h.sub(&t))?;
        if !g.is_one() {
            rest = rest.div_exact(&g)?.expect("gcd divides");
            h = h.rem(&rest)?;
            out.push((g, d));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        let n = rest.deg();
        out.push((rest, n));
    }
    Ok(out)
}

fn equal_degree<R: Rng>(f: &Poly, d: usize, rng: &mut R, out: &mut Vec<Poly>) -> Result<()> {
    if f.deg() == d {
        out.push(f.clone());
        return Ok(());
    }
    let fq = f.field();
    let q = fq.q();
    let n = f.deg();
    loop {
        let c: Vec<FqElem> = (0..n).map(|_| FqElem(rng.gen_range(0..q))).collect();
        let a = Poly::from_coeffs(fq, c);
        if a.is_constant() {
            continue;
        }
        // a^{(q^d-1)/2} = (a^{1+q+…+q^{d-1}})^{(q-1)/2}
        let mut s = a.clone();
        let mut norm = a.clone();
        for _ in 1..d {
            s = s.powmod(q as u128, f)?;
            norm = norm.mulmod(&s, f)?;
        }
        let b = norm.powmod(((q - 1) / 2) as u128, f)?;
        let g = f.gcd(&b.sub(&Poly::one(fq)))?;
        if g.deg() > 0 && g.deg() < n {
            let other = f.div_exact(&g)?.expect("gcd divides");
            equal_degree(&g, d, rng, out)?;
            equal_degree(&other, d, rng, out)?;
            return Ok(());
        }
    }
}

impl<'a> std::ops::Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        Poly::add(self, o)
    }
}
impl<'a> std::ops::Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        Poly::sub(self, o)
    }
}
impl<'a> std::ops::Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        Poly::mul(self, o)
    }
}
impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Fq {
        Fq::prime(3).unwrap()
    }

    #[test]
    fn divmod_examples() {
        let f = f3();
        // (t^2+1) / t = t rem 1
        let (q, r) = Poly::from_ints(&f, &[1, 0, 1]).divmod(&Poly::t(&f)).unwrap();
        assert_eq!(q, Poly::t(&f));
        assert_eq!(r, Poly::one(&f));
        let g = Poly::from_ints(&f, &[1, 2, 0, 1]);
        let (q, r) = g.divmod(&Poly::one(&f)).unwrap();
        assert_eq!((q, r.is_zero()), (g.clone(), true));
        // (t^3+2t+1) / (t^2+1) = t rem t+1
        let d = Poly::from_ints(&f, &[1, 0, 1]);
        let (q, r) = g.divmod(&d).unwrap();
        assert_eq!(q, Poly::t(&f));
        assert_eq!(r, Poly::from_ints(&f, &[1, 1]));
        assert_eq!(&(&q * &d) + &r, g);
        assert!(g.divmod(&Poly::zero(&f)).is_err());
    }

    #[test]
    fn gcd_examples() {
        let f = f3();
        let a = Poly::from_ints(&f, &[2, 0, 1]);
        let b = Poly::from_ints(&f, &[2, 1]);
        assert_eq!(a.gcd(&b).unwrap(), b);
        let c = Poly::from_ints(&f, &[2, 0, 2]);
        assert_eq!(c.gcd(&Poly::zero(&f)).unwrap(), c.monic());
        let common = Poly::from_ints(&f, &[1, 0, 1]);
        let x = &common * &Poly::from_ints(&f, &[1, 1]);
        let y = &common * &Poly::from_ints(&f, &[2, 1]);
        assert_eq!(x.gcd(&y).unwrap(), common);
        assert!(Poly::zero(&f).gcd(&Poly::zero(&f)).is_err());
    }

    #[test]
    fn irreducibility_small_examples() {
        let f = f3();
        assert!(Poly::from_ints(&f, &[1, 0, 1]).is_irreducible().unwrap());
        assert!(!Poly::from_ints(&f, &[2, 0, 1]).is_irreducible().unwrap());
        assert!(Poly::one(&f).is_irreducible().is_err());
    }

    fn brute_irreducible(f: &Poly) -> bool {
        // no monic factor of degree 1..=deg/2
        let fq = f.field();
        (1..=f.deg() / 2).all(|d| {
            Poly::monic_of_degree(fq, d).all(|g| !f.rem(&g).unwrap().is_zero())
        })
    }

    #[test]
    fn cubic_irreducibles_over_f3() {
        let f = f3();
        let (mut irr, mut red) = (0, 0);
        for g in Poly::monic_of_degree(&f, 3) {
            let brute = brute_irreducible(&g);
            assert_eq!(g.is_irreducible().unwrap(), brute, "{g}");
            if brute {
                irr += 1
            } else {
                red += 1
            }
        }
        assert_eq!((irr, red), (8, 19));
    }

    #[test]
    fn factor_example() {
        let f = f3();
        let t = Poly::t(&f);
        let t1 = Poly::from_ints(&f, &[1, 1]);
        let g = (&(&t * &t1) * &t1).scale(f.from_int(2));
        let fac = g.factor().unwrap();
        assert_eq!(fac.lead, f.from_int(2));
        assert_eq!(fac.factors, vec![(t.clone(), 1), (t1.clone(), 2)]);
        let irr = Poly::from_ints(&f, &[2, 0, 2]);
        let fac = irr.factor().unwrap();
        assert_eq!(fac.factors, vec![(irr.monic(), 1)]);
        assert_eq!(fac.lead, f.from_int(2));
        assert!(Poly::zero(&f).factor().is_err());
    }

    #[test]
    fn factor_handles_pth_powers() {
        let f = f3();
        let g = Poly::from_ints(&f, &[1, 1, 0, 1]).pow(3); // (t^3+t+1)^3, reducible cube
        let fac = g.factor().unwrap();
        assert_eq!(fac.expand(&f), g);
        for (h, _) in &fac.factors {
            assert!(h.is_irreducible().unwrap());
        }
        let h = Poly::from_ints(&f, &[0, 0, 0, 0, 0, 0, 0, 0, 0, 1]); // t^9
        assert_eq!(h.factor().unwrap().factors, vec![(Poly::t(&f), 9)]);
    }

    #[test]
    fn exhaustive_irreducible_matches_factor_deg4_f3() {
        let f = f3();
        for n in 1..=4 {
            for g in Poly::monic_of_degree(&f, n) {
                let fac = g.factor().unwrap();
                let single = fac.factors.len() == 1 && fac.factors[0] == (g.clone(), 1);
                assert_eq!(g.is_irreducible().unwrap(), single, "{g}");
                assert_eq!(fac.expand(&f), g);
            }
        }
    }

    #[test]
    fn resultant_character_matches_power() {
        for q in [3u32, 5, 9] {
            let f = Fq::with_size(q, None).unwrap();
            let places: Vec<Poly> = (1..=3)
                .flat_map(|n| Poly::monic_of_degree(&f, n).filter(|g| g.is_irreducible().unwrap()).collect::<Vec<_>>())
                .take(20)
                .collect();
            for m in &places {
                let size = (q as u128).pow(m.deg() as u32);
                for g in Poly::monic_of_degree(&f, 2).take(30) {
                    let r = g.rem(m).unwrap();
                    let pw = r.powmod((size - 1) / 2, m).unwrap();
                    let expect = if r.is_zero() {
                        0
                    } else if pw.is_one() {
                        1
                    } else {
                        -1
                    };
                    assert_eq!(g.chi_mod(m).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn ordering_is_canonical() {
        let f = f3();
        let v: Vec<Poly> = Poly::monic_of_degree(&f, 2).collect();
        let mut sorted = v.clone();
        sorted.sort();
        assert_eq!(v, sorted);
        assert!(Poly::from_ints(&f, &[2]) < Poly::t(&f));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn field(i: usize) -> Fq {
            Fq::with_size([3, 5, 7, 9][i], None).unwrap()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(600))]

            #[test]
            fn factor_round_trip(fi in 0usize..4, raw in proptest::collection::vec(0u32..81, 1..12), seed in any::<u64>()) {
                let f = field(fi);
                let q = f.q();
                let g = Poly::from_coeffs(&f, raw.iter().map(|&c| FqElem(c % q)).collect());
                prop_assume!(!g.is_zero());
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let fac = g.factor_with_rng(&mut rng).unwrap();
                prop_assert_eq!(fac.expand(&f), g.clone());
                prop_assert_eq!(&fac, &g.factor().unwrap());
                for w in fac.factors.windows(2) {
                    prop_assert!(w[0].0 < w[1].0);
                }
                for (h, _) in &fac.factors {
                    prop_assert!(h.is_monic() && h.is_irreducible().unwrap());
                }
            }

            #[test]
            fn ring_laws(fi in 0usize..4, a in proptest::collection::vec(0u32..81, 0..8),
                         b in proptest::collection::vec(0u32..81, 0..8),
                         c in proptest::collection::vec(1u32..81, 1..6)) {
                let f = field(fi);
                let q = f.q();
                let mk = |v: &Vec<u32>| Poly::from_coeffs(&f, v.iter().map(|&x| FqElem(x % q)).collect());
                let (a, b, c) = (mk(&a), mk(&b), mk(&c));
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                if !a.is_zero() && !b.is_zero() {
                    prop_assert_eq!((&a * &b).deg(), a.deg() + b.deg());
                }
                if !c.is_zero() {
                    let (qq, r) = a.divmod(&c).unwrap();
                    prop_assert_eq!(&(&qq * &c) + &r, a.clone());
                    prop_assert!(r.is_zero() || r.deg() < c.deg());
                    let g = a.gcd(&c).unwrap();
                    prop_assert!(g.is_monic());
                    prop_assert!(a.rem(&g).unwrap().is_zero() && c.rem(&g).unwrap().is_zero());
                }
            }

            #[test]
            fn text_round_trip(fi in 0usize..4, raw in proptest::collection::vec(0u32..81, 0..10)) {
                let f = field(fi);
                let g = Poly::from_coeffs(&f, raw.iter().map(|&x| FqElem(x % f.q())).collect());
                prop_assert_eq!(crate::ffcore::parse_poly(&f, &g.to_string()).unwrap(), g);
            }
        }
    }
}
