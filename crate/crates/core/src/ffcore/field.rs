//! The coefficient field F_q, q = p^k with p odd.
//!
//! Elements are encoded as integers `Σ c_i p^i` where `c_0 + c_1 u + … + c_{k-1} u^{k-1}`
//! is the representative modulo the defining polynomial of F_{p^k} over F_p. The
//! encoding order is the canonical order used for tie-breaking everywhere.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffcore::poly::Poly;

/// Largest field size with lookup tables; every supported field is tabulated.
pub const MAX_FIELD_SIZE: u32 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct FqElem(pub(crate) u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Integer encoding in base p.
    pub fn index(self) -> u32 {
        self.0
    }
}

/// Parameters describing F_{p^k}. `ext_modulus` is the monic defining polynomial
/// over F_p (coefficients low to high), absent when k = 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    pub ext_modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn size(&self) -> u64 {
        (self.p as u64).pow(self.k)
    }
}

#[derive(Debug)]
struct FqInner {
    spec: FieldSpec,
    p: u32,
    k: u32,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u16>>,
    nonsquare: FqElem,
    irreducibles: Mutex<HashMap<usize, Arc<Vec<Vec<FqElem>>>>>,
}

/// Handle to a finite field of odd characteristic. Cheap to clone.
#[derive(Clone)]
pub struct Fq(Arc<FqInner>);

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}
impl Eq for Fq {}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Arithmetic in F_p[u]/(modulus) on digit vectors; only used while building tables.
fn slow_mul(a: u32, b: u32, p: u32, modulus: &[u32]) -> u32 {
    let k = modulus.len() - 1;
    let da = digits(a, p, k);
    let db = digits(b, p, k);
    let mut prod = vec![0u64; 2 * k];
    for i in 0..k {
        for j in 0..k {
            prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p as u64;
        }
    }
    for i in (k..2 * k).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..k {
            let sub = c * modulus[j] as u64 % p as u64;
            prod[i - k + j] = (prod[i - k + j] + p as u64 - sub) % p as u64;
        }
    }
    let mut v = 0u32;
    for i in (0..k).rev() {
        v = v * p + prod[i] as u32;
    }
    v
}

fn digits(mut a: u32, p: u32, k: usize) -> Vec<u32> {
    let mut d = vec![0; k];
    for slot in d.iter_mut() {
        *slot = a % p;
        a /= p;
    }
    d
}

impl Fq {
    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Fq> {
        Fq::new(p, 1, None)
    }

    /// F_q for q = p^k, using the canonically least irreducible modulus when none is given.
    pub fn with_size(q: u32, ext_modulus: Option<Vec<u32>>) -> Result<Fq> {
        if q < 3 {
            return Err(Error::InvalidFieldSize(q));
        }
        let mut p = 2;
        while q % p != 0 {
            p += 1;
        }
        let mut k = 0;
        let mut r = q;
        while r % p == 0 {
            r /= p;
            k += 1;
        }
        if r != 1 {
            return Err(Error::InvalidFieldSize(q));
        }
        Fq::new(p, k, ext_modulus)
    }

    pub fn new(p: u32, k: u32, ext_modulus: Option<Vec<u32>>) -> Result<Fq> {
        if p == 2 {
            return Err(Error::EvenCharacteristic(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidModulus("extension degree must be at least 1".into()));
        }
        let q64 = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if q64 > MAX_FIELD_SIZE as u64 {
            return Err(Error::FieldTooLarge(q64));
        }
        let q = q64 as u32;
        let modulus = if k == 1 {
            if ext_modulus.as_ref().map(|m| m.len() > 2).unwrap_or(false) {
                return Err(Error::InvalidModulus("degree-1 field takes no modulus".into()));
            }
            vec![0, 1]
        } else {
            let base = Fq::prime(p)?;
            match ext_modulus {
                Some(m) => {
                    if m.len() != k as usize + 1 || *m.last().unwrap() != 1 {
                        return Err(Error::InvalidModulus(format!(
                            "modulus must be monic of degree {k}"
                        )));
                    }
                    if m.iter().any(|&c| c >= p) {
                        return Err(Error::InvalidModulus("coefficients must lie in 0..p".into()));
                    }
                    let poly = Poly::from_coeffs(&base, m.iter().map(|&c| FqElem(c)).collect());
                    if !poly.is_irreducible()? {
                        return Err(Error::InvalidModulus(format!(
                            "{} is reducible over F_{p}",
                            poly
                        )));
                    }
                    m
                }
                None => base
                    .first_irreducible(k as usize)
                    .coeffs()
                    .iter()
                    .map(|c| c.0)
                    .collect(),
            }
        };
        let spec = FieldSpec {
            p,
            k,
            ext_modulus: if k == 1 { None } else { Some(modulus.clone()) },
        };
        // primitive element by search in encoding order
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let pow_slow = |mut b: u32, mut e: u64| -> u32 {
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, b, p, &modulus);
                }
                b = slow_mul(b, b, p, &modulus);
                e >>= 1;
            }
            acc
        };
        let gen = (1..q)
            .find(|&g| factors.iter().all(|&r| pow_slow(g, order / r) != 1))
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = cur;
            log[cur as usize] = i as u32;
            cur = slow_mul(cur, gen, p, &modulus);
        }
        let add = if k > 1 && q <= 512 {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                let da = digits(a, p, k as usize);
                for b in 0..q {
                    let db = digits(b, p, k as usize);
                    let mut v = 0u32;
                    for i in (0..k as usize).rev() {
                        v = v * p + (da[i] + db[i]) % p;
                    }
                    t[(a * q + b) as usize] = v as u16;
                }
            }
            Some(t)
        } else {
            None
        };
        // least nonsquare: odd discrete log
        let nonsquare = FqElem((1..q).find(|&a| log[a as usize] % 2 == 1).unwrap());
        Ok(Fq(Arc::new(FqInner {
            spec,
            p,
            k,
            q,
            exp,
            log,
            add,
            nonsquare,
            irreducibles: Mutex::new(HashMap::new()),
        })))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }
    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn k(&self) -> u32 {
        self.0.k
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn same(&self, other: &Fq) -> bool {
        self == other
    }

    pub fn zero(&self) -> FqElem {
        FqElem(0)
    }
    pub fn one(&self) -> FqElem {
        FqElem(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Element from its u-coefficients (low to high), reduced mod p.
    pub fn from_u_coeffs(&self, coeffs: &[i64]) -> Result<FqElem> {
        let k = self.0.k as usize;
        if coeffs.len() > k {
            // reduce modulo the defining polynomial
            let mut acc = self.zero();
            let u = self.generator_u();
            let mut upow = self.one();
            for &c in coeffs {
                acc = self.add(acc, self.mul(self.from_int(c), upow));
                upow = self.mul(upow, u);
            }
            return Ok(acc);
        }
        let p = self.0.p as i64;
        let mut v = 0u32;
        for &c in coeffs.iter().rev() {
            v = v * self.0.p + c.rem_euclid(p) as u32;
        }
        Ok(FqElem(v))
    }

    /// Class of u in F_p[u]/(modulus); equals 0·u + … only when k = 1, where it is 0.
    pub fn generator_u(&self) -> FqElem {
        if self.0.k == 1 {
            // u is not defined over the prime field; reduce u mod (u) = 0
            FqElem(0)
        } else {
            FqElem(self.0.p)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.0.q).map(FqElem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FqElem> {
        (1..self.0.q).map(FqElem)
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let inner = &*self.0;
        if inner.k == 1 {
            let s = a.0 + b.0;
            FqElem(if s >= inner.p { s - inner.p } else { s })
        } else if let Some(t) = &inner.add {
            FqElem(t[(a.0 * inner.q + b.0) as usize] as u32)
        } else {
            let (mut x, mut y) = (a.0, b.0);
            let mut v = 0u32;
            let mut place = 1u32;
            for _ in 0..inner.k {
                v += ((x % inner.p + y % inner.p) % inner.p) * place;
                x /= inner.p;
                y /= inner.p;
                place *= inner.p;
            }
            FqElem(v)
        }
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        let inner = &*self.0;
        if a.0 == 0 {
            return a;
        }
        if inner.k == 1 {
            FqElem(inner.p - a.0)
        } else {
            // -1 = g^{(q-1)/2}
            let l = inner.log[a.0 as usize] as u64 + (inner.q as u64 - 1) / 2;
            FqElem(inner.exp[(l % (inner.q as u64 - 1)) as usize])
        }
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        let inner = &*self.0;
        if a.0 == 0 || b.0 == 0 {
            return FqElem(0);
        }
        if inner.k == 1 {
            FqElem(((a.0 as u64 * b.0 as u64) % inner.p as u64) as u32)
        } else {
            let l = inner.log[a.0 as usize] + inner.log[b.0 as usize];
            let n = inner.q - 1;
            FqElem(inner.exp[(if l >= n { l - n } else { l }) as usize])
        }
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero("inverse of zero in F_q"));
        }
        let inner = &*self.0;
        let n = inner.q - 1;
        let l = inner.log[a.0 as usize];
        Ok(FqElem(inner.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FqElem, e: u64) -> FqElem {
        if e == 0 {
            return FqElem(1);
        }
        if a.0 == 0 {
            return FqElem(0);
        }
        let inner = &*self.0;
        let n = (inner.q - 1) as u64;
        let l = (inner.log[a.0 as usize] as u64 * (e % n)) % n;
        FqElem(inner.exp[l as usize])
    }

    /// Quadratic character: 0, +1 or -1.
    pub fn chi(&self, a: FqElem) -> i8 {
        if a.0 == 0 {
            0
        } else if self.0.log[a.0 as usize] % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_square(&self, a: FqElem) -> bool {
        self.chi(a) >= 0
    }

    /// Canonically least nonsquare.
    pub fn nonsquare(&self) -> FqElem {
        self.0.nonsquare
    }

    /// The inverse of Frobenius, x ↦ x^{1/p}.
    pub fn pth_root(&self, a: FqElem) -> FqElem {
        self.pow(a, (self.0.q / self.0.p) as u64)
    }

    pub fn fmt_elem(&self, a: FqElem) -> String {
        let inner = &*self.0;
        if inner.k == 1 || a.0 < inner.p {
            return a.0.to_string();
        }
        let d = digits(a.0, inner.p, inner.k as usize);
        let mut terms = Vec::new();
        for i in (0..d.len()).rev() {
            let c = d[i];
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "u".to_string(),
                _ => format!("u^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        format!("[{}]", terms.join("+"))
    }

    pub(crate) fn irreducible_cache(&self) -> &Mutex<HashMap<usize, Arc<Vec<Vec<FqElem>>>>> {
        &self.0.irreducibles
    }
}
