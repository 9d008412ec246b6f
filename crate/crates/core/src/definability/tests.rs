use super::*;
use crate::ffcore::Fq;
use crate::places::{parse_kelem, parse_places};
use crate::rayclass::places_up_to;
use crate::symbols::{choose_params, search_classes, ClassTarget, DEFAULT_CANDIDATES};
use proptest::prelude::*;
use std::sync::OnceLock;

fn f3() -> Fq {
    Fq::prime(3).unwrap()
}

fn k(f: &Fq, s: &str) -> KElem {
    parse_kelem(f, s).unwrap()
}

fn params_for(f: &Fq, s: &str) -> ParamSet {
    choose_params(f, &parse_places(f, s).unwrap(), 8).unwrap()
}

fn p_inf() -> &'static ParamSet {
    static P: OnceLock<ParamSet> = OnceLock::new();
    P.get_or_init(|| params_for(&f3(), "inf"))
}

fn sigmas() -> [GaloisSign; 3] {
    [GaloisSign::new(-1, -1), GaloisSign::new(-1, 1), GaloisSign::new(1, -1)]
}

fn off_m(params: &ParamSet, d: usize) -> Vec<Place> {
    places_up_to(params.a.field(), d).filter(|p| !params.m.divides(p)).collect()
}

#[test]
fn semilocal_basics() {
    let f = f3();
    let r = SemiLocalSet::new(parse_places(&f, "t,t+1").unwrap());
    assert!(r.contains(&k(&f, "1/(t+2)")).unwrap());
    assert!(!r.contains(&k(&f, "1/t")).unwrap());
    assert!(r.in_radical(&k(&f, "t*(t+1)")).unwrap());
    assert!(!r.in_radical(&k(&f, "t")).unwrap());
    assert!(r.is_unit(&k(&f, "t+2")).unwrap());
    // 1/t lies in O_{t+1}, so in the union
    assert!(r.in_tilde(&k(&f, "1/t")).unwrap());
    assert!(!r.in_tilde(&k(&f, "1/(t*(t+1))")).unwrap());
    assert!(SemiLocalSet::default().in_tilde(&KElem::zero(&f)).unwrap());
    assert!(!SemiLocalSet::default().in_tilde(&k(&f, "t")).unwrap());
}

#[test]
fn partition_covers_odd_places() {
    let params = p_inf();
    let f = params.a.field();
    for x in ["t^5+t+1", "t*(t+2)^3/(t^2+1)", "(t^4+t+2)/(t+1)^2"] {
        let x = k(f, x);
        let odd: BTreeSet<Place> = odd_places(&x).unwrap().into_iter().filter(|p| !params.m.divides(p)).collect();
        let mut union = BTreeSet::new();
        for s in GaloisSign::all() {
            let c = partition_class(params, &x, s).unwrap();
            assert!(c.is_disjoint(&union));
            union.extend(c);
        }
        assert_eq!(union, odd);
    }
    assert!(matches!(odd_places(&KElem::zero(f)), Err(Error::ZeroInput(_))));
}

#[test]
fn phi_witnesses_isolate_each_place() {
    for (q, s) in [(3, "inf"), (3, "t"), (5, "inf"), (3, "t^2+1,inf")] {
        let f = Fq::prime(q).unwrap();
        let params = params_for(&f, s);
        let mut seen = 0;
        for p0 in off_m(&params, 3) {
            let sigma = artin_sign(&params, &p0).unwrap();
            if sigma.is_one() {
                continue;
            }
            let p = phi_witness(&params, sigma, &p0, 8).unwrap();
            let r = r_sigma(&params, &p, sigma).unwrap();
            assert_eq!(r.delta, [p0.clone()].into());
            seen += 1;
        }
        assert!(seen >= 3, "q={q} S={s}");
    }
}

#[test]
fn delta_form_matches_partition_on_products() {
    let params = p_inf();
    for sigma in sigmas() {
        let ps: Vec<Place> = off_m(params, 4)
            .into_iter()
            .filter(|p| artin_sign(params, p).unwrap() == sigma)
            .take(3)
            .collect();
        let ws: Vec<KElem> = ps.iter().map(|p| phi_witness(params, sigma, p, 8).unwrap()).collect();
        // an odd number of σ-places keeps the product in Φ_σ
        let prod = ws[0].mul(&ws[1]).mul(&ws[2]);
        assert!(phi_membership(params, &prod, sigma).unwrap());
        let r = r_sigma(params, &prod, sigma).unwrap();
        assert_eq!(r.delta, ps.iter().cloned().collect());
        let two = ws[0].mul(&ws[1]);
        assert!(!phi_membership(params, &two, sigma).unwrap());
        assert!(matches!(r_sigma(params, &two, sigma), Err(Error::NotInPhi(_))));
    }
}

#[test]
fn psi_witnesses_isolate_each_place() {
    for (q, s) in [(3, "inf"), (3, "t"), (5, "t+1")] {
        let f = Fq::prime(q).unwrap();
        let params = params_for(&f, s);
        let mut seen = 0;
        for p0 in off_m(&params, 4) {
            if !artin_sign(&params, &p0).unwrap().is_one() {
                continue;
            }
            let (p, q) = psi_witness(&params, &p0, 8).unwrap();
            assert!(psi_membership(&params, &p, &q).unwrap());
            assert_eq!(psi_delta(&params, &p, &q).unwrap().delta, [p0.clone()].into());
            seen += 1;
            if seen == 4 {
                break;
            }
        }
        assert!(seen >= 2, "q={q} S={s}");
    }
}

/// Representatives of the four local square classes at `p`.
fn class_reps(fq: &Fq, p: &Place) -> Vec<KElem> {
    let mut out = Vec::new();
    for parity in 0..2u8 {
        for sign in [1i8, -1] {
            let t = [ClassTarget::new(p.clone(), parity, Some(sign))];
            out.push(search_classes(fq, &t, |_| Ok(true), 8, DEFAULT_CANDIDATES).unwrap());
        }
    }
    out
}

#[test]
fn disjunction_detects_symbol_at_every_class_pair() {
    let params = p_inf();
    let f = params.a.field();
    let mut places = 0;
    for p0 in off_m(params, 4) {
        let sigma = artin_sign(params, &p0).unwrap();
        let (p, s) = if sigma.is_one() {
            psi_witness(params, &p0, 8).unwrap()
        } else {
            (phi_witness(params, sigma, &p0, 8).unwrap(), s_sigma(params, sigma).unwrap().clone())
        };
        let r = SemiLocalSet::new([p0.clone()].into());
        let reps = class_reps(f, &p0);
        for x in &reps {
            for y in &reps {
                let want = hilbert_symbol(x, y, &p0).unwrap() == -1;
                assert_eq!(hsodd_disjunction(x, y, &p, &s, &r).unwrap(), want, "{x}, {y} at {p0}");
            }
        }
        places += 1;
        if places == 24 {
            break;
        }
    }
    assert_eq!(places, 24);
}

#[test]
fn os_examples() {
    let f = f3();
    let params = p_inf();
    let s = parse_places(&f, "inf").unwrap();
    let budget = OsBudget::default();
    let v = verify_os(params, &k(&f, "1/(t+1)"), &s, &budget, 0, 8).unwrap();
    assert!(!v.member);
    let w = v.witness.unwrap();
    verify_witness(params, &Claim::NotInOs { t: k(&f, "1/(t+1)") }, &w).unwrap();
    let v = verify_os(params, &k(&f, "t^2"), &s, &budget, 0, 8).unwrap();
    assert!(v.member, "{:?}", v.log);
    let log = v.log.unwrap();
    for c in ["(-1,-1)", "(-1,+1)", "(+1,-1)", "psi"] {
        assert!(log.samples[c] >= 20, "{c}");
    }

    let params_t = params_for(&f, "t");
    let st = parse_places(&f, "t").unwrap();
    assert!(verify_os(&params_t, &k(&f, "1/t"), &st, &budget, 0, 8).unwrap().member);
    assert!(!verify_os(&params_t, &k(&f, "t"), &st, &budget, 0, 8).unwrap().member);
    assert!(matches!(
        verify_os(&params_t, &k(&f, "t"), &s, &budget, 0, 8),
        Err(Error::PreconditionFailed(_))
    ));
}

#[test]
fn os_verdicts_are_deterministic() {
    let f = f3();
    let s = parse_places(&f, "inf").unwrap();
    let run = || {
        let v = verify_os(p_inf(), &k(&f, "t^3+2"), &s, &OsBudget::default(), 7, 8).unwrap();
        serde_json::to_string(&v.log).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn nonsquare_examples() {
    let f = f3();
    let params = p_inf();
    assert!(matches!(nonsquare_witness(params, &k(&f, "t^2"), 8), Err(Error::NotANonsquare)));
    assert!(matches!(nonsquare_witness(params, &KElem::zero(&f), 8), Err(Error::ZeroInput(_))));
    let x = k(&f, "2*t^2");
    let w = nonsquare_witness(params, &x, 8).unwrap();
    assert_eq!(w.kind(), "coset_witness");
    verify_witness(params, &Claim::Nonsquare { x: x.clone() }, &w).unwrap();
    // a witness for 2t² says nothing about t²+1
    assert!(verify_witness(params, &Claim::Nonsquare { x: k(&f, "t^2+1") }, &w).is_err());
    let a = params.a.clone();
    let w = nonsquare_witness(params, &a, 8).unwrap();
    assert_eq!(w.kind(), "modulus_place");
}

#[test]
fn nonnorm_examples() {
    let f = f3();
    let params = p_inf();
    let (x, y) = (k(&f, "t"), k(&f, "t"));
    assert!(!is_norm(&x, &y).unwrap());
    let w = nonnorm_witness(params, &x, &y, 8).unwrap();
    verify_witness(params, &Claim::Nonnorm { x: x.clone(), y: y.clone() }, &w).unwrap();
    assert!(matches!(nonnorm_witness(params, &k(&f, "t^2+1"), &k(&f, "t"), 8), Err(Error::IsActuallyANorm)));
    // the ramified place t^2+1 has sign (1,1) or not, either way a witness comes back
    let (x, y) = (k(&f, "t^2+1"), k(&f, "2"));
    if !is_norm(&x, &y).unwrap() {
        let w = nonnorm_witness(params, &x, &y, 8).unwrap();
        verify_witness(params, &Claim::Nonnorm { x, y }, &w).unwrap();
    }
}

#[test]
fn records_round_trip() {
    let f = f3();
    let params = p_inf();
    let rec = ParamsRecord::from_params(params);
    assert_eq!(&rec.to_params(&f).unwrap(), params);
    let x = k(&f, "2*t^2");
    let w = nonsquare_witness(params, &x, 8).unwrap();
    let json = serde_json::to_string(&w.to_record()).unwrap();
    assert!(json.contains("\"kind\":\"coset_witness\""));
    let back: WitnessRecord = serde_json::from_str(&json).unwrap();
    assert_eq!(Witness::from_record(&f, &back).unwrap(), w);
}

#[test]
fn mismatched_witnesses_are_rejected() {
    let f = f3();
    let params = p_inf();
    let w = nonsquare_witness(params, &k(&f, "2*t^2"), 8).unwrap();
    assert!(matches!(
        verify_witness(params, &Claim::NotInOs { t: k(&f, "1/t") }, &w),
        Err(Error::WitnessRejected(_))
    ));
    let Witness::CosetWitness { sigma, p, s, mut delta } = w else { unreachable!() };
    delta.insert(Place::Infinity);
    let bad = Witness::CosetWitness { sigma, p, s, delta };
    assert!(verify_witness(params, &Claim::Nonsquare { x: k(&f, "2*t^2") }, &bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn phi_tilde_agrees_on_witness_square_classes(i in 0usize..30, n in 1u32..4, c in 1u32..3) {
        let params = p_inf();
        let f = params.a.field();
        let ps = off_m(params, 3);
        let p0 = &ps[i % ps.len()];
        let sigma = artin_sign(params, p0).unwrap();
        prop_assume!(!sigma.is_one());
        let p = phi_witness(params, sigma, p0, 8).unwrap();
        let sq = KElem::from(crate::ffcore::Poly::from_ints(f, &[c as i64, 1])).pow(2 * n as i64).unwrap();
        prop_assert!(phi_tilde_membership(params, &p.mul(&sq), sigma).unwrap());
        for other in GaloisSign::all() {
            if other != sigma {
                prop_assert!(!phi_tilde_membership(params, &p.mul(&sq), other).unwrap());
            }
        }
    }

    #[test]
    fn nonsquare_witness_iff_nonsquare(
        num in proptest::collection::vec(0i64..3, 1..5),
        den in proptest::collection::vec(0i64..3, 0..3),
    ) {
        let params = p_inf();
        let f = params.a.field();
        let n = crate::ffcore::Poly::from_ints(f, &num);
        let mut dc = den.clone();
        dc.push(1);
        let d = crate::ffcore::Poly::from_ints(f, &dc);
        prop_assume!(!n.is_zero());
        let x = KElem::new(n, d).unwrap();
        match nonsquare_witness(params, &x, 8) {
            Ok(w) => {
                prop_assert!(!is_square_global(&x).unwrap());
                let ok = verify_witness(params, &Claim::Nonsquare { x: x.clone() }, &w).is_ok();
                prop_assert!(ok);
            }
            Err(Error::NotANonsquare) => prop_assert!(is_square_global(&x).unwrap()),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn nonnorm_witness_iff_nonnorm(
        xs in proptest::collection::vec(0i64..3, 1..4),
        ys in proptest::collection::vec(0i64..3, 1..4),
    ) {
        let params = p_inf();
        let f = params.a.field();
        let x = crate::ffcore::Poly::from_ints(f, &xs);
        let y = crate::ffcore::Poly::from_ints(f, &ys);
        prop_assume!(!x.is_zero() && !y.is_zero());
        let (x, y) = (KElem::from(x), KElem::from(y));
        match nonnorm_witness(params, &x, &y, 8) {
            Ok(w) => {
                let ok = verify_witness(params, &Claim::Nonnorm { x: x.clone(), y: y.clone() }, &w).is_ok();
                prop_assert!(ok);
            }
            Err(Error::IsActuallyANorm) => prop_assert!(is_norm(&x, &y).unwrap()),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
