use super::*;
use crate::ffcore::FqElem;
use crate::places::{parse_places, valuation};
use crate::symbols::tests::toy_params;
use proptest::prelude::*;

fn f3() -> Fq {
    Fq::prime(3).unwrap()
}

fn places(f: &Fq, s: &str) -> BTreeSet<Place> {
    parse_places(f, s).unwrap()
}

fn modulus(f: &Fq, s: &str) -> Modulus {
    Modulus::from_divisor(&crate::places::parse_divisor(f, s).unwrap()).unwrap()
}

#[test]
fn class_group_examples() {
    let f = f3();
    assert_eq!(class_group(&places(&f, "inf")).unwrap().d, 1);
    assert_eq!(class_group(&places(&f, "t^2+1")).unwrap().d, 2);
    assert_eq!(class_group(&places(&f, "t,t^2+1")).unwrap().d, 1);
    assert!(class_group(&BTreeSet::new()).is_err());
}

#[test]
fn s_units() {
    let f = f3();
    let u = s_unit_group(&f, &places(&f, "t,t+1,inf")).unwrap();
    assert_eq!(u.generators.len(), 2);
    let u = s_unit_group(&f, &places(&f, "t^2+1,t")).unwrap();
    assert_eq!(u.generators.len(), 1);
    assert_eq!(u.generators[0].divisor().unwrap().degree(), 0);
    assert!(s_unit_group(&f, &places(&f, "t^2+1")).unwrap().generators.is_empty());
}

#[test]
fn ray_class_examples() {
    let f = f3();
    let inf = places(&f, "inf");
    let g = ray_class_group(&f, &inf, &modulus(&f, "t")).unwrap();
    assert_eq!(g.structure(), "1");
    let g = ray_class_group(&f, &inf, &modulus(&f, "t^2")).unwrap();
    assert_eq!(g.structure(), "Z/3");
    // m supported at ∞ with S' = {(t)}: A^× = F_q^×, (O_∞/s²)^× has order 6
    let g = ray_class_group(&f, &places(&f, "t"), &modulus(&f, "inf^2")).unwrap();
    assert_eq!(g.order(), 3);
    assert!(matches!(
        ray_class_group(&f, &inf, &modulus(&f, "inf")),
        Err(Error::OverlappingSupports(_))
    ));
}

#[test]
fn order_formula_for_polynomial_ring() {
    for q in [3u32, 5] {
        let f = Fq::prime(q).unwrap();
        let inf = places(&f, "inf");
        let max = if q == 3 { 4 } else { 3 };
        for n in 1..=max {
            for m in Poly::monic_of_degree(&f, n) {
                let mut md = Modulus::new();
                for (g, e) in m.factor().unwrap().factors {
                    md.insert(Place::Finite(g), e);
                }
                let g = ray_class_group(&f, &inf, &md).unwrap();
                assert_eq!(g.order() * (q as u64 - 1), g.residue_unit_count(), "m = {m}");
            }
        }
    }
}

#[test]
fn primes_partition_the_places() {
    let f = f3();
    let g = ray_class_group(&f, &places(&f, "inf"), &modulus(&f, "t^2")).unwrap();
    let mut seen = BTreeSet::new();
    for c in g.classes() {
        let ps = primes_in_class(&g, &c, 4).unwrap();
        assert!(!ps.is_empty());
        for p in ps {
            assert_eq!(g.class_of_place(&p).unwrap(), c);
            assert!(seen.insert(p));
        }
    }
    let expected = places_up_to(&f, 4).filter(|p| !g.excludes(p)).count();
    assert_eq!(seen.len(), expected);
}

#[test]
fn cocycle_groups() {
    let f = f3();
    // d = 2: one extra bit from the degree, units mod t give nothing beyond constants
    let g = ray_class_group(&f, &places(&f, "t^2+1"), &modulus(&f, "t")).unwrap();
    assert_eq!(g.order(), 2);
    let a = g.class_of_place(&Place::Finite(Poly::from_ints(&f, &[1, 1]))).unwrap();
    assert_ne!(a, g.identity());
    let g = ray_class_group(&f, &places(&f, "t^2+1"), &modulus(&f, "(t)^2*(t+1)")).unwrap();
    assert_eq!(g.order(), 2 * 6 * 2 / 2);
}

#[test]
fn find_prime_and_aprime() {
    let f = f3();
    let params = toy_params(&f, "t", "t+1");
    let s1 = places(&f, "t+2");
    for sign in GaloisSign::all() {
        let p = find_prime(&params, sign, &s1, 0, &BTreeSet::new(), 6).unwrap();
        assert!(!params.m.divides(&p));
        assert_eq!(artin_sign(&params, &p).unwrap(), sign);
    }
    let s2 = places(&f, "t^2+1");
    let p = find_prime(&params, GaloisSign::ONE, &s2, 1, &BTreeSet::new(), 6).unwrap();
    assert_eq!(p.degree() % 2, 1);

    // units at ∞ so that ∞ can serve as q0
    let params = toy_params(&f, "t/(t+1)", "(t+2)/(t+1)");
    let p0 = Place::Finite(Poly::from_ints(&f, &[1, 0, 1]));
    let q = lemma_aprime(&params, &p0, &Place::Infinity, 6).unwrap();
    assert_eq!(residue_symbol(&q, &p0).unwrap(), -1);
    assert_eq!(artin_sign_of(&params, &q).unwrap(), GaloisSign::new(-1, -1));
    // a finite q0 with sign (1,1)
    let q0 = places_up_to(&f, 6)
        .find(|p| !p.is_infinite() && p != &p0 && !params.m.divides(p) && artin_sign(&params, p).unwrap() == GaloisSign::ONE)
        .unwrap();
    let q = lemma_aprime(&params, &p0, &q0, 8).unwrap();
    assert_eq!(valuation(&q, &Place::Infinity).unwrap(), 0);
    assert_eq!(q.divisor().unwrap().len(), 2);
}

fn x_in_k_m1(f: &Fq, m: &Poly, h1: &[u32], h2: &[u32]) -> Option<KElem> {
    let mk = |v: &[u32]| Poly::from_coeffs(f, v.iter().map(|&x| FqElem(x % f.q())).collect());
    let n = Poly::one(f).add(&m.mul(&mk(h1)));
    let d = Poly::one(f).add(&m.mul(&mk(h2)));
    if n.is_zero() || d.is_zero() {
        return None;
    }
    KElem::new(n, d).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn class_of_kills_principal_ray(
        sidx in 0usize..3,
        h1 in proptest::collection::vec(0u32..9, 0..4),
        h2 in proptest::collection::vec(0u32..9, 0..4),
    ) {
        let f = f3();
        let (s, m) = [("inf", "(t)^2*(t+1)"), ("t^2+1", "(t)^2"), ("t,inf", "(t+1)^3")][sidx];
        let g = ray_class_group(&f, &places(&f, s), &modulus(&f, m)).unwrap();
        let mpoly = g.modulus().iter().filter_map(|(p, e)| p.poly().map(|f| f.pow(e as u64))).fold(Poly::one(&f), |a, b| a.mul(&b));
        let Some(x) = x_in_k_m1(&f, &mpoly, &h1, &h2) else { return Ok(()) };
        prop_assert_eq!(g.class_of_element(&x).unwrap(), g.identity());
    }

    #[test]
    fn class_of_is_additive(i in 0usize..40, j in 0usize..40, sidx in 0usize..3) {
        let f = f3();
        let (s, m) = [("inf", "(t)^2*(t+1)"), ("t^2+1", "(t)^2"), ("t", "inf^2")][sidx];
        let g = ray_class_group(&f, &places(&f, s), &modulus(&f, m)).unwrap();
        let ps: Vec<Place> = places_up_to(&f, 4).filter(|p| !g.excludes(p)).collect();
        let (p, q) = (&ps[i % ps.len()], &ps[j % ps.len()]);
        let mut div = Divisor::new();
        div.insert(p.clone(), 1);
        div.insert(q.clone(), 1);
        let sum = g.add(&g.class_of_place(p).unwrap(), &g.class_of_place(q).unwrap());
        prop_assert_eq!(g.class_of(&div).unwrap(), sum);
    }
}
