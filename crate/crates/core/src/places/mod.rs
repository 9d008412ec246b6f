//! Places of F_q(t), valuations, residues, square classes and weak approximation.

mod kelem;
mod place;
pub mod text;

pub use kelem::KElem;
pub use place::{
    crt, divisor_of, local_square_class, reduce, unit_chi, unit_residue, valuation, weak_approx,
    Divisor, LocalSquareClass, Place, ResidueField,
};
pub use text::{parse_divisor, parse_kelem, parse_place, parse_places};

use std::collections::BTreeSet;

/// Places where x has nonzero valuation.
pub fn support(x: &KElem) -> crate::Result<BTreeSet<Place>> {
    Ok(x.divisor()?.support().cloned().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffcore::{Fq, Poly};

    fn f3() -> Fq {
        Fq::prime(3).unwrap()
    }

    fn k(f: &Fq, s: &str) -> KElem {
        parse_kelem(f, s).unwrap()
    }

    fn pl(f: &Fq, s: &str) -> Place {
        parse_place(f, s).unwrap()
    }

    #[test]
    fn valuation_examples() {
        let f = f3();
        assert_eq!(valuation(&k(&f, "(t^2+1)/(t^3)"), &Place::Infinity).unwrap(), 1);
        assert_eq!(valuation(&k(&f, "t"), &pl(&f, "t")).unwrap(), 1);
        assert!(valuation(&KElem::zero(&f), &Place::Infinity).is_err());
    }

    #[test]
    fn divisor_examples() {
        let f = f3();
        assert_eq!(divisor_of(&k(&f, "t/(t+1)")).unwrap().to_string(), "(t)^1 * (t+1)^-1");
        assert!(divisor_of(&k(&f, "2")).unwrap().is_empty());
        let d = divisor_of(&k(&f, "(t^2+1)^2/t".replace("(t^2+1)^2", "t^4+2*t^2+1").as_str()))
            .unwrap();
        assert_eq!(d.to_string(), "(t)^-1 * (t^2+1)^2 * inf^-3");
        assert_eq!(d.degree(), 0);
    }

    #[test]
    fn residue_examples() {
        let f = f3();
        assert_eq!(pl(&f, "t^2+1").residue_field(&f).size(), 9);
        assert_eq!(Place::Infinity.residue_field(&f).size(), 3);
        let p3 = pl(&f, "t^3+2*t+1");
        let rf = p3.residue_field(&f);
        assert_eq!(rf.size(), 27);
        let tt = rf.reduce(&Poly::t(&f));
        assert!(rf.pow(&tt, 26).is_one());
        assert_eq!(reduce(&k(&f, "t+1"), &pl(&f, "t")).unwrap().to_string(), "1");
        assert_eq!(reduce(&k(&f, "(t^2+2)/(2*t^2+1)"), &Place::Infinity).unwrap().to_string(), "2");
        let u = reduce(&k(&f, "t"), &pl(&f, "t^2+1")).unwrap();
        let rf2 = pl(&f, "t^2+1").residue_field(&f);
        assert_eq!(rf2.mul(&u, &u).to_string(), "2");
        assert!(matches!(
            reduce(&k(&f, "1/t"), &pl(&f, "t")),
            Err(crate::Error::NegativeValuation(_))
        ));
    }

    #[test]
    fn square_class_examples() {
        let f = f3();
        let t = pl(&f, "t");
        let c = |s: &str| local_square_class(&k(&f, s), &t).unwrap();
        assert_eq!(c("2"), LocalSquareClass { parity: 0, sign: -1 });
        assert_eq!(c("t^2"), LocalSquareClass::SQUARE);
        assert_eq!(c("2*t"), LocalSquareClass { parity: 1, sign: -1 });
    }

    #[test]
    fn weak_approx_examples() {
        let f = f3();
        let t = pl(&f, "t");
        let t1 = pl(&f, "t+1");
        let two = Poly::from_ints(&f, &[2]);
        let x = weak_approx(&f, &[(t.clone(), 1, None), (t1.clone(), 0, Some(two.clone()))]).unwrap();
        assert_eq!(valuation(&x, &t).unwrap(), 1);
        assert_eq!(unit_residue(&x, &t1).unwrap(), two);
        let one = weak_approx(&f, &[(t.clone(), 0, Some(Poly::one(&f)))]).unwrap();
        assert!(one.is_one());
        let y = weak_approx(&f, &[(Place::Infinity, 2, None)]).unwrap();
        assert_eq!(valuation(&y, &Place::Infinity).unwrap(), 2);
        assert!(matches!(
            weak_approx(&f, &[(t.clone(), 1, None), (t.clone(), 2, None)]),
            Err(crate::Error::DuplicatePlace(_))
        ));
        // every degree-one place constrained together with infinity
        let targets: Vec<_> = f
            .irreducibles_up_to(1)
            .map(|g| (Place::Finite(g), 1, None))
            .chain([(Place::Infinity, -1, Some(two.clone()))])
            .collect();
        let z = weak_approx(&f, &targets).unwrap();
        assert_eq!(valuation(&z, &Place::Infinity).unwrap(), -1);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn field(i: usize) -> Fq {
            Fq::with_size([3, 5, 7, 9][i], None).unwrap()
        }

        fn elem(f: &Fq, n: &[u32], d: &[u32]) -> Option<KElem> {
            let q = f.q();
            let mk = |v: &[u32]| {
                Poly::from_coeffs(f, v.iter().map(|&x| crate::ffcore::FqElem(x % q)).collect())
            };
            let (n, d) = (mk(n), mk(d));
            if n.is_zero() || d.is_zero() {
                return None;
            }
            KElem::new(n, d).ok()
        }

        fn vec6() -> impl Strategy<Value = Vec<u32>> {
            proptest::collection::vec(0u32..81, 1..6)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn valuation_laws(fi in 0usize..4, a in vec6(), b in vec6(), c in vec6(), d in vec6()) {
                let f = field(fi);
                let (Some(x), Some(y)) = (elem(&f, &a, &b), elem(&f, &c, &d)) else { return Ok(()) };
                let xy = x.mul(&y);
                let s = x.add(&y);
                prop_assert_eq!(divisor_of(&x).unwrap().degree(), 0);
                let mut places = support(&x).unwrap();
                places.extend(support(&y).unwrap());
                for p in &places {
                    let (vx, vy) = (valuation(&x, p).unwrap(), valuation(&y, p).unwrap());
                    prop_assert_eq!(valuation(&xy, p).unwrap(), vx + vy);
                    if !s.is_zero() {
                        prop_assert!(valuation(&s, p).unwrap() >= vx.min(vy));
                    }
                    let cx = local_square_class(&x, p).unwrap();
                    let cy = local_square_class(&y, p).unwrap();
                    prop_assert_eq!(local_square_class(&xy, p).unwrap(), cx.mul(cy));
                    prop_assert_eq!(local_square_class(&x.square(), p).unwrap(), LocalSquareClass::SQUARE);
                    if vx >= 0 && vy >= 0 {
                        let rf = p.residue_field(&f);
                        let (rx, ry) = (reduce(&x, p).unwrap(), reduce(&y, p).unwrap());
                        prop_assert_eq!(reduce(&xy, p).unwrap(), rf.mul(&rx, &ry));
                        prop_assert_eq!(reduce(&x.add(&y), p).unwrap(), rf.reduce(&rf.add(&rx, &ry)));
                    }
                }
            }

            #[test]
            fn weak_approx_self_check(fi in 0usize..4, picks in proptest::collection::vec((0usize..12, -3i64..4, 0u32..81), 1..5), with_inf in any::<bool>(), vinf in -3i64..4) {
                let f = field(fi);
                let pool: Vec<Place> = f.irreducibles_up_to(2).take(12).map(Place::Finite).collect();
                let mut targets: Vec<(Place, i64, Option<Poly>)> = Vec::new();
                for (i, n, r) in picks {
                    let p = pool[i % pool.len()].clone();
                    if targets.iter().any(|t| t.0 == p) { continue; }
                    let rf = p.residue_field(&f);
                    let res = rf.elements().nth(r as usize % rf.size() as usize).unwrap();
                    targets.push((p, n, if res.is_zero() { None } else { Some(res) }));
                }
                if with_inf {
                    targets.push((Place::Infinity, vinf, None));
                }
                let x = weak_approx(&f, &targets).unwrap();
                for (p, n, r) in &targets {
                    prop_assert_eq!(valuation(&x, p).unwrap(), *n);
                    if let Some(r) = r {
                        prop_assert_eq!(&unit_residue(&x, p).unwrap(), r);
                    }
                }
            }
        }
    }
}
