//! The quaternion algebra H_{a,b} = K⟨α, β⟩ with α² = a, β² = b, αβ = −βα.

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffcore::{Fq, FqElem, Poly};
use crate::places::{valuation, KElem, Place};
use crate::symbols::delta_set;

/// x1 + x2·α + x3·β + x4·αβ in H_{a,b}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuatElem {
    pub a: KElem,
    pub b: KElem,
    pub x: [KElem; 4],
}

impl QuatElem {
    pub fn new(a: &KElem, b: &KElem, x: [KElem; 4]) -> QuatElem {
        QuatElem { a: a.clone(), b: b.clone(), x }
    }

    pub fn scalar(a: &KElem, b: &KElem, s: KElem) -> QuatElem {
        let z = KElem::zero(a.field());
        QuatElem::new(a, b, [s, z.clone(), z.clone(), z])
    }

    /// Basis element e_i (0 = 1, 1 = α, 2 = β, 3 = αβ).
    pub fn basis(a: &KElem, b: &KElem, i: usize) -> QuatElem {
        let f = a.field();
        let mut x = [KElem::zero(f), KElem::zero(f), KElem::zero(f), KElem::zero(f)];
        x[i] = KElem::one(f);
        QuatElem::new(a, b, x)
    }

    pub fn mul(&self, o: &QuatElem) -> Result<QuatElem> {
        if self.a != o.a || self.b != o.b {
            return Err(Error::ParameterMismatch);
        }
        let (a, b) = (&self.a, &self.b);
        let ab = a.mul(b);
        let [x1, x2, x3, x4] = &self.x;
        let [y1, y2, y3, y4] = &o.x;
        let z1 = x1.mul(y1)
            .add(&a.mul(&x2.mul(y2)))
            .add(&b.mul(&x3.mul(y3)))
            .sub(&ab.mul(&x4.mul(y4)));
        let z2 = x1.mul(y2).add(&x2.mul(y1)).sub(&b.mul(&x3.mul(y4))).add(&b.mul(&x4.mul(y3)));
        let z3 = x1.mul(y3).add(&x3.mul(y1)).add(&a.mul(&x2.mul(y4))).sub(&a.mul(&x4.mul(y2)));
        let z4 = x1.mul(y4).add(&x4.mul(y1)).add(&x2.mul(y3)).sub(&x3.mul(y2));
        Ok(QuatElem::new(a, b, [z1, z2, z3, z4]))
    }

    pub fn conj(&self) -> QuatElem {
        let [x1, x2, x3, x4] = &self.x;
        QuatElem::new(&self.a, &self.b, [x1.clone(), x2.neg(), x3.neg(), x4.neg()])
    }

    pub fn trace(&self) -> KElem {
        self.x[0].add(&self.x[0])
    }

    pub fn norm(&self) -> KElem {
        let [x1, x2, x3, x4] = &self.x;
        let ab = self.a.mul(&self.b);
        x1.square()
            .sub(&self.a.mul(&x2.square()))
            .sub(&self.b.mul(&x3.square()))
            .add(&ab.mul(&x4.square()))
    }

    pub fn scale(&self, s: &KElem) -> QuatElem {
        let x = self.x.clone().map(|c| c.mul(s));
        QuatElem::new(&self.a, &self.b, x)
    }
}

pub fn quat_mul(x: &QuatElem, y: &QuatElem) -> Result<QuatElem> {
    x.mul(y)
}

pub fn conj_trace_norm(x: &QuatElem) -> (QuatElem, KElem, KElem) {
    (x.conj(), x.trace(), x.norm())
}

/// { s ∈ F_p : x² − s·x + 1 is irreducible } = { s : χ(s² − 4) = −1 }.
pub fn u_set(fq: &Fq, p: &Place) -> Vec<Poly> {
    let rf = p.residue_field(fq);
    let four = Poly::from_ints(fq, &[4]);
    rf.elements()
        .filter(|s| rf.chi(&rf.reduce(&rf.mul(s, s).sub(&four))) < 0)
        .collect()
}

/// Whether every element of F_p is a sum of two elements of U_p.
pub fn check_u_sum(fq: &Fq, p: &Place) -> bool {
    let u = u_set(fq, p);
    let mut sums = HashSet::new();
    for x in &u {
        for y in &u {
            sums.insert(x.add(y));
        }
    }
    let rf = p.residue_field(fq);
    sums.len() as u128 == rf.size()
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TraceReport {
    pub delta: Vec<String>,
    pub height: usize,
    pub candidates: usize,
    pub norm_one: usize,
    pub distinct_traces: usize,
    pub sums_tested: usize,
    pub violations: Vec<String>,
    pub reverse_targets: usize,
    pub reverse_found: usize,
    pub reverse_unverified: usize,
}

impl TraceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Bounds for the trace experiment.
#[derive(Clone, Copy, Debug)]
pub struct TraceBudget {
    /// Quaternions y examined; full enumeration when the box is smaller.
    pub samples: usize,
    /// Distinct traces whose pairwise sums are tested.
    pub max_traces: usize,
    pub seed: u64,
}

impl Default for TraceBudget {
    fn default() -> Self {
        TraceBudget { samples: 2000, max_traces: 120, seed: 0 }
    }
}

fn poly_at_index(fq: &Fq, mut idx: u64, h: usize) -> Poly {
    let q = fq.q() as u64;
    let mut c = vec![FqElem::ZERO; h + 1];
    for slot in c.iter_mut() {
        *slot = FqElem((idx % q) as u32);
        idx /= q;
    }
    Poly::from_coeffs(fq, c)
}

/// Norm-one elements y²/n(y) for y with polynomial coordinates of degree ≤ H, and ±1.
/// Every pairwise sum of their traces must be integral at each place of Δ_{a,b}.
pub fn trace_set_experiment(a: &KElem, b: &KElem, height: usize, budget: TraceBudget) -> Result<TraceReport> {
    let fq = a.field();
    let delta: BTreeSet<Place> = delta_set(a, b)?;
    let mut report = TraceReport {
        delta: delta.iter().map(|p| p.to_string()).collect(),
        height,
        ..Default::default()
    };
    let per_coord = (fq.q() as u64).saturating_pow(height as u32 + 1);
    let total = per_coord.saturating_pow(4);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let ys: Vec<[u64; 4]> = if total <= budget.samples as u64 {
        (0..total)
            .map(|i| [i % per_coord, (i / per_coord) % per_coord, (i / per_coord.pow(2)) % per_coord, i / per_coord.pow(3)])
            .collect()
    } else {
        (0..budget.samples)
            .map(|_| [0; 4].map(|_: u64| rng.gen_range(0..per_coord)))
            .collect()
    };

    let mut traces: Vec<KElem> = vec![KElem::from_int(fq, 2), KElem::from_int(fq, -2)];
    let mut seen: HashSet<KElem> = traces.iter().cloned().collect();
    report.norm_one = 2;
    for idx in ys {
        report.candidates += 1;
        let y = QuatElem::new(a, b, idx.map(|i| KElem::from(poly_at_index(fq, i, height))));
        let n = y.norm();
        if n.is_zero() {
            continue;
        }
        let x = y.mul(&y)?.scale(&n.inv()?);
        debug_assert!(x.norm().is_one());
        report.norm_one += 1;
        let tr = x.trace();
        if seen.insert(tr.clone()) {
            traces.push(tr);
        }
    }
    report.distinct_traces = traces.len();
    traces.truncate(budget.max_traces);
    let mut sums: HashSet<KElem> = HashSet::new();
    for i in 0..traces.len() {
        for j in i..traces.len() {
            let s = traces[i].add(&traces[j]);
            report.sums_tested += 1;
            if !s.is_zero() {
                for p in &delta {
                    if valuation(&s, p)? < 0 {
                        report.violations.push(format!("{} + {} has a pole at {p}", traces[i], traces[j]));
                    }
                }
            }
            sums.insert(s);
        }
    }
    // reverse direction: small constants and polynomials integral on Δ, looked up among the sums
    let mut targets: Vec<KElem> = fq.elements().map(|c| KElem::constant(fq, c)).collect();
    targets.extend(Poly::monic_of_degree(fq, 1).map(KElem::from));
    for z in targets {
        let integral = z.is_zero() || delta.iter().all(|p| valuation(&z, p).map(|v| v >= 0).unwrap_or(true));
        if !integral {
            continue;
        }
        report.reverse_targets += 1;
        if sums.contains(&z) {
            report.reverse_found += 1;
        } else {
            report.reverse_unverified += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::places::{parse_kelem, parse_place};
    use proptest::prelude::*;

    fn f3() -> Fq {
        Fq::prime(3).unwrap()
    }

    #[test]
    fn basis_relations() {
        let f = f3();
        let a = parse_kelem(&f, "t").unwrap();
        let b = parse_kelem(&f, "t+1").unwrap();
        let al = QuatElem::basis(&a, &b, 1);
        let be = QuatElem::basis(&a, &b, 2);
        let ab = QuatElem::basis(&a, &b, 3);
        assert_eq!(al.mul(&be).unwrap(), ab);
        assert_eq!(be.mul(&al).unwrap(), ab.scale(&KElem::from_int(&f, -1)));
        assert_eq!(al.mul(&al).unwrap(), QuatElem::scalar(&a, &b, a.clone()));
        assert_eq!(be.mul(&be).unwrap(), QuatElem::scalar(&a, &b, b.clone()));
        let one = QuatElem::basis(&a, &b, 0);
        let (c, t, n) = conj_trace_norm(&one);
        assert_eq!((c, t, n), (one.clone(), KElem::from_int(&f, 2), KElem::one(&f)));
        let (c, t, n) = conj_trace_norm(&al);
        assert_eq!((c, t, n), (al.scale(&KElem::from_int(&f, -1)), KElem::zero(&f), a.neg()));
        let other = QuatElem::basis(&b, &a, 1);
        assert_eq!(al.mul(&other), Err(Error::ParameterMismatch));
    }

    #[test]
    fn u_set_examples() {
        let f = f3();
        let t = parse_place(&f, "t").unwrap();
        let u: Vec<String> = u_set(&f, &t).iter().map(|p| p.to_string()).collect();
        assert_eq!(u, ["0"]);
        assert!(!check_u_sum(&f, &t));
        assert_eq!(u_set(&f, &parse_place(&f, "t^2+1").unwrap()).len(), 4);
        let cubic = f.irreducibles_of_degree(3).next().unwrap();
        assert!(check_u_sum(&f, &Place::Finite(cubic)));
        let f13 = Fq::prime(13).unwrap();
        assert!(check_u_sum(&f13, &Place::Infinity));
    }

    #[test]
    fn u_set_matches_irreducibility() {
        let f = f3();
        for g in f.irreducibles_up_to(3) {
            let p = Place::Finite(g.clone());
            let rf = p.residue_field(&f);
            let u: HashSet<Poly> = u_set(&f, &p).into_iter().collect();
            for s in rf.elements() {
                // x² − s x + 1 has a root in F_p?
                let has_root = rf.elements().any(|x| {
                    rf.reduce(&rf.mul(&x, &x).sub(&rf.mul(&s, &x)).add(&Poly::one(&f))).is_zero()
                });
                assert_eq!(u.contains(&s), !has_root);
            }
        }
    }

    #[test]
    fn trace_experiment_examples() {
        let f = f3();
        let one = KElem::one(&f);
        let r = trace_set_experiment(&one, &one, 1, TraceBudget::default()).unwrap();
        assert!(r.delta.is_empty() && r.passed());
        let t = parse_kelem(&f, "t").unwrap();
        let r = trace_set_experiment(&t, &t, 2, TraceBudget::default()).unwrap();
        assert_eq!(r.delta, ["t", "inf"]);
        assert!(r.passed(), "{:?}", r.violations);
        assert!(r.norm_one > 100);
    }

    fn elem(f: &Fq, v: &[u32]) -> KElem {
        let p = Poly::from_coeffs(f, v.iter().map(|&c| FqElem(c % f.q())).collect());
        KElem::from(p)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn norm_multiplicative_and_conj_anti(fi in 0usize..3, v in proptest::collection::vec(proptest::collection::vec(0u32..49, 1..4), 10)) {
            let f = Fq::with_size([3, 5, 7][fi], None).unwrap();
            let a = elem(&f, &v[0]);
            let b = elem(&f, &v[1]);
            prop_assume!(!a.is_zero() && !b.is_zero());
            let x = QuatElem::new(&a, &b, [elem(&f, &v[2]), elem(&f, &v[3]), elem(&f, &v[4]), elem(&f, &v[5])]);
            let y = QuatElem::new(&a, &b, [elem(&f, &v[6]), elem(&f, &v[7]), elem(&f, &v[8]), elem(&f, &v[9])]);
            let xy = x.mul(&y).unwrap();
            prop_assert_eq!(xy.norm(), x.norm().mul(&y.norm()));
            prop_assert_eq!(xy.conj(), y.conj().mul(&x.conj()).unwrap());
            prop_assert_eq!(x.mul(&x.conj()).unwrap(), QuatElem::scalar(&a, &b, x.norm()));
            let four = KElem::from_int(&f, 4);
            let disc = x.trace().square().sub(&four.mul(&x.norm()));
            let [_, x2, x3, x4] = &x.x;
            let direct = four.mul(&a.mul(&x2.square()).add(&b.mul(&x3.square())).sub(&a.mul(&b).mul(&x4.square())));
            prop_assert_eq!(disc, direct);
        }
    }
}
