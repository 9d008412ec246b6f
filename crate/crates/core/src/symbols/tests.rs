use super::*;
use crate::places::{parse_kelem, parse_place, reduce};
use proptest::prelude::*;

fn f3() -> Fq {
    Fq::prime(3).unwrap()
}

fn k(f: &Fq, s: &str) -> KElem {
    parse_kelem(f, s).unwrap()
}

fn pl(f: &Fq, s: &str) -> Place {
    parse_place(f, s).unwrap()
}

/// The symbol formula taken literally: reduce (−1)^{v(a)v(b)} a^{v(b)}/b^{v(a)} and raise
/// it to (|F_p|−1)/2.
fn literal_symbol(a: &KElem, b: &KElem, p: &Place) -> i8 {
    let f = a.field();
    let va = valuation(a, p).unwrap();
    let vb = valuation(b, p).unwrap();
    let mut w = a.pow(vb).unwrap().div(&b.pow(va).unwrap()).unwrap();
    if (va * vb) % 2 != 0 {
        w = w.neg();
    }
    let r = reduce(&w, p).unwrap();
    let rf = p.residue_field(f);
    let e = rf.pow(&r, (rf.size() - 1) / 2);
    if e.is_one() {
        1
    } else {
        -1
    }
}

pub(crate) fn toy_params(f: &Fq, a: &str, b: &str) -> ParamSet {
    let a = k(f, a);
    let b = k(f, b);
    let mut places = support(&a).unwrap();
    places.extend(support(&b).unwrap());
    ParamSet {
        c: KElem::one(f),
        d: KElem::one(f),
        m: Modulus::squarefree(&places),
        s: BTreeSet::new(),
        a,
        b,
    }
}

#[test]
fn residue_symbol_examples() {
    let f = f3();
    assert_eq!(residue_symbol(&k(&f, "2"), &pl(&f, "t")).unwrap(), -1);
    assert_eq!(residue_symbol(&k(&f, "t"), &pl(&f, "t^2+1")).unwrap(), 1);
    assert_eq!(residue_symbol(&k(&f, "t+1"), &pl(&f, "t^2+1")).unwrap(), -1);
    assert!(matches!(
        residue_symbol(&k(&f, "t"), &pl(&f, "t")),
        Err(Error::NonzeroValuation(_))
    ));
}

#[test]
fn hilbert_symbol_examples() {
    let f = f3();
    let t = pl(&f, "t");
    assert_eq!(hilbert_symbol(&k(&f, "t+1"), &k(&f, "2"), &t).unwrap(), 1);
    assert_eq!(hilbert_symbol(&k(&f, "t"), &k(&f, "t"), &t).unwrap(), -1);
    assert_eq!(hilbert_symbol(&k(&f, "t"), &k(&f, "1-t"), &t).unwrap(), 1);
    assert!(hilbert_symbol(&KElem::zero(&f), &k(&f, "t"), &t).is_err());
}

#[test]
fn delta_set_examples() {
    let f = f3();
    let d: Vec<String> = delta_set(&k(&f, "t"), &k(&f, "t")).unwrap().iter().map(|p| p.to_string()).collect();
    assert_eq!(d, ["t", "inf"]);
    assert!(delta_set(&KElem::one(&f), &k(&f, "t^2+t+2")).unwrap().is_empty());
    assert!(verify_reciprocity(&k(&f, "t"), &k(&f, "t")).unwrap());
}

#[test]
fn symbol_is_trivial_off_the_scan_set() {
    // both arguments units ⇒ +1, which justifies scanning supp(a) ∪ supp(b) ∪ {∞} only
    let f = f3();
    let a = k(&f, "t^2+t+2");
    let b = k(&f, "(t+1)/(t^2+1)");
    let scan = scan_set(&a, &b).unwrap();
    for g in f.irreducibles_up_to(4) {
        let p = Place::Finite(g);
        if !scan.contains(&p) {
            assert_eq!(literal_symbol(&a, &b, &p), 1);
        }
    }
}

#[test]
fn artin_sign_examples() {
    let f = f3();
    let params = toy_params(&f, "t", "t+1");
    assert_eq!(artin_sign(&params, &pl(&f, "t^2+1")).unwrap(), GaloisSign::new(1, -1));
    assert!(matches!(artin_sign(&params, &pl(&f, "t")), Err(Error::PlaceDividesModulus(_))));
    let x = k(&f, "t^2+t+2").square();
    assert_eq!(artin_sign_of(&params, &x).unwrap(), GaloisSign::ONE);
    assert_eq!(GaloisSign::new(1, -1).to_string(), "(+1,-1)");
    assert_eq!("(+1,-1)".parse::<GaloisSign>().unwrap(), GaloisSign::new(1, -1));
}

#[test]
fn construct_examples() {
    let f = f3();
    let t = k(&f, "t");
    let x = construct_with_symbols(&f, &[t.clone()], &SymbolTargets::new(), 8).unwrap();
    assert!(x.is_one());
    let mut tg = SymbolTargets::new();
    tg.insert((0, pl(&f, "t")), -1);
    tg.insert((0, Place::Infinity), -1);
    let x = construct_with_symbols(&f, &[t.clone()], &tg, 8).unwrap();
    assert_eq!(delta_set(&t, &x).unwrap(), [pl(&f, "t"), Place::Infinity].into_iter().collect());
    let mut bad = SymbolTargets::new();
    bad.insert((0, pl(&f, "t")), -1);
    assert!(matches!(
        construct_with_symbols(&f, &[t.clone()], &bad, 8),
        Err(Error::InfeasibleTargets { index: Some(0), .. })
    ));
    // t ≡ 1 is a square at (t+2), so no symbol there can be −1
    let mut sq = SymbolTargets::new();
    sq.insert((0, pl(&f, "t+2")), -1);
    sq.insert((0, pl(&f, "t")), -1);
    match construct_with_symbols(&f, &[t], &sq, 8) {
        Err(Error::InfeasibleTargets { index: Some(0), place: Some(p), .. }) => assert_eq!(p, "t+2"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn choose_params_examples() {
    let f = f3();
    for s in ["inf", "t", "t,inf", "t^2+1"] {
        let set = crate::places::parse_places(&f, s).unwrap();
        let params = choose_params(&f, &set, 8).unwrap();
        check_params(&params).unwrap();
        for p in &set {
            assert_eq!(valuation(&params.a, p).unwrap(), 1);
        }
    }
    assert!(choose_params(&f, &BTreeSet::new(), 8).is_err());
}

fn field(i: usize) -> Fq {
    Fq::with_size([3, 5, 7, 9][i], None).unwrap()
}

fn elem(f: &Fq, n: &[u32], d: &[u32]) -> Option<KElem> {
    let q = f.q();
    let mk = |v: &[u32]| {
        crate::ffcore::Poly::from_coeffs(f, v.iter().map(|&x| crate::ffcore::FqElem(x % q)).collect())
    };
    let (n, d) = (mk(n), mk(d));
    if n.is_zero() || d.is_zero() {
        return None;
    }
    KElem::new(n, d).ok()
}

fn coeffs() -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::vec(0u32..81, 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn symbol_matches_literal_formula(fi in 0usize..4, a in coeffs(), b in coeffs(), c in coeffs(), d in coeffs()) {
        let f = field(fi);
        let (Some(x), Some(y)) = (elem(&f, &a, &b), elem(&f, &c, &d)) else { return Ok(()) };
        for p in scan_set(&x, &y).unwrap() {
            prop_assert_eq!(hilbert_symbol(&x, &y, &p).unwrap(), literal_symbol(&x, &y, &p));
        }
    }

    #[test]
    fn symbol_identities(fi in 0usize..4, a in coeffs(), b in coeffs(), c in coeffs(), d in coeffs(), e in coeffs()) {
        let f = field(fi);
        let (Some(x), Some(y), Some(z)) = (elem(&f, &a, &b), elem(&f, &c, &d), elem(&f, &e, &[1])) else { return Ok(()) };
        let mut places = scan_set(&x, &y).unwrap();
        places.extend(support(&z).unwrap());
        let one = KElem::one(&f);
        let omx = one.sub(&x);
        if !omx.is_zero() {
            places.extend(support(&omx).unwrap());
        }
        for p in &places {
            let h = |u: &KElem, v: &KElem| hilbert_symbol(u, v, p).unwrap();
            prop_assert_eq!(h(&x, &y.mul(&z)), h(&x, &y) * h(&x, &z));
            prop_assert_eq!(h(&x, &y), h(&y, &x));
            prop_assert_eq!(h(&x, &x.neg()), 1);
            if !omx.is_zero() {
                prop_assert_eq!(h(&x, &omx), 1);
            }
            prop_assert_eq!(h(&x.mul(&z.square()), &y), h(&x, &y));
        }
        prop_assert!(delta_set(&x, &y).unwrap().len() % 2 == 0);
        prop_assert!(verify_reciprocity(&x, &y).unwrap());
        prop_assert_eq!(delta_set(&x, &x).unwrap(), delta_set(&x, &KElem::from_int(&f, -1)).unwrap());
    }
}
