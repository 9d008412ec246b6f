use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::ffcore::{Fq, FqElem, Poly};
use crate::places::{Divisor, Place};

/// Element of F_q(t) as a reduced fraction with monic denominator.
#[derive(Clone)]
pub struct KElem {
    num: Poly,
    den: Poly,
    div: OnceLock<Divisor>,
}

impl PartialEq for KElem {
    fn eq(&self, o: &Self) -> bool {
        self.num == o.num && self.den == o.den
    }
}
impl Eq for KElem {}

impl Hash for KElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KElem({})", self)
    }
}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl From<Poly> for KElem {
    fn from(p: Poly) -> KElem {
        let one = Poly::one(p.field());
        KElem { num: p, den: one, div: OnceLock::new() }
    }
}

impl KElem {
    pub fn new(num: Poly, den: Poly) -> Result<KElem> {
        if den.is_zero() {
            return Err(Error::DivisionByZero("zero denominator"));
        }
        if num.field() != den.field() {
            return Err(Error::FieldMismatch);
        }
        if num.is_zero() {
            return Ok(KElem::zero(num.field()));
        }
        let g = num.gcd(&den)?;
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g)?.unwrap(), den.div_exact(&g)?.unwrap())
        };
        if !d.is_monic() {
            let inv = n.field().inv(d.lead())?;
            n = n.scale(inv);
            d = d.scale(inv);
        }
        Ok(KElem { num: n, den: d, div: OnceLock::new() })
    }

    fn raw(num: Poly, den: Poly) -> KElem {
        KElem { num, den, div: OnceLock::new() }
    }

    pub fn zero(fq: &Fq) -> KElem {
        KElem::raw(Poly::zero(fq), Poly::one(fq))
    }

    pub fn one(fq: &Fq) -> KElem {
        KElem::raw(Poly::one(fq), Poly::one(fq))
    }

    pub fn constant(fq: &Fq, c: FqElem) -> KElem {
        KElem::raw(Poly::constant(fq, c), Poly::one(fq))
    }

    pub fn from_int(fq: &Fq, n: i64) -> KElem {
        KElem::constant(fq, fq.from_int(n))
    }

    pub fn t(fq: &Fq) -> KElem {
        KElem::from(Poly::t(fq))
    }

    pub fn field(&self) -> &Fq {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Height: max of the numerator and denominator degrees.
    pub fn height(&self) -> usize {
        self.num.deg().max(self.den.deg())
    }

    /// Leading-coefficient ratio lead(num)/lead(den) (den is monic).
    pub fn lead(&self) -> FqElem {
        self.num.lead()
    }

    pub fn mul(&self, o: &KElem) -> KElem {
        if self.is_zero() || o.is_zero() {
            return KElem::zero(self.field());
        }
        let g1 = self.num.gcd(&o.den).unwrap();
        let g2 = o.num.gcd(&self.den).unwrap();
        let n1 = self.num.div_exact(&g1).unwrap().unwrap();
        let d2 = o.den.div_exact(&g1).unwrap().unwrap();
        let n2 = o.num.div_exact(&g2).unwrap().unwrap();
        let d1 = self.den.div_exact(&g2).unwrap().unwrap();
        let out = KElem::raw(n1.mul(&n2), d1.mul(&d2));
        if let (Some(a), Some(b)) = (self.div.get(), o.div.get()) {
            let _ = out.div.set(a.add(b));
        }
        out
    }

    pub fn inv(&self) -> Result<KElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("inverse of zero in K"));
        }
        let c = self.field().inv(self.num.lead())?;
        let out = KElem::raw(self.den.scale(c), self.num.scale(c));
        if let Some(d) = self.div.get() {
            let _ = out.div.set(d.neg());
        }
        Ok(out)
    }

    pub fn div(&self, o: &KElem) -> Result<KElem> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn add(&self, o: &KElem) -> KElem {
        if self.den == o.den {
            return KElem::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        KElem::new(num, self.den.mul(&o.den)).unwrap()
    }

    pub fn neg(&self) -> KElem {
        let out = KElem::raw(self.num.neg(), self.den.clone());
        if let Some(d) = self.div.get() {
            let _ = out.div.set(d.clone());
        }
        out
    }

    pub fn sub(&self, o: &KElem) -> KElem {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: FqElem) -> KElem {
        self.mul(&KElem::constant(self.field(), c))
    }

    pub fn square(&self) -> KElem {
        self.mul(self)
    }

    pub fn pow(&self, e: i64) -> Result<KElem> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let n = e.unsigned_abs();
        let out = KElem::raw(base.num.pow(n), base.den.pow(n));
        if let Some(d) = base.div.get() {
            let _ = out.div.set(d.scale(n as i64));
        }
        Ok(out)
    }

    /// Principal divisor, including the infinite place; cached.
    pub fn divisor(&self) -> Result<&Divisor> {
        if self.is_zero() {
            return Err(Error::ZeroInput("divisor of zero"));
        }
        if let Some(d) = self.div.get() {
            return Ok(d);
        }
        let mut d = Divisor::new();
        for (f, m) in self.num.factor()?.factors {
            d.insert(Place::Finite(f), m as i64);
        }
        for (f, m) in self.den.factor()?.factors {
            d.insert(Place::Finite(f), -(m as i64));
        }
        let vinf = self.den.deg() as i64 - self.num.deg() as i64;
        d.insert(Place::Infinity, vinf);
        let _ = self.div.set(d);
        Ok(self.div.get().unwrap())
    }

    pub(crate) fn divisor_cached(&self) -> Option<&Divisor> {
        self.div.get()
    }
}

impl<'a> std::ops::Mul<&'a KElem> for &'a KElem {
    type Output = KElem;
    fn mul(self, o: &KElem) -> KElem {
        KElem::mul(self, o)
    }
}
impl<'a> std::ops::Add<&'a KElem> for &'a KElem {
    type Output = KElem;
    fn add(self, o: &KElem) -> KElem {
        KElem::add(self, o)
    }
}
impl<'a> std::ops::Sub<&'a KElem> for &'a KElem {
    type Output = KElem;
    fn sub(self, o: &KElem) -> KElem {
        KElem::sub(self, o)
    }
}
impl std::ops::Neg for &KElem {
    type Output = KElem;
    fn neg(self) -> KElem {
        KElem::neg(self)
    }
}
