//! The acceptance suite: one seeded, timed check per criterion.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::definability::{
    hsodd_disjunction, in_os_direct, is_norm, is_square_global, nonnorm_witness, nonsquare_witness,
    phi_membership, phi_witness, psi_witness, r_sigma, s_sigma, verify_os, verify_witness, Claim, OsBudget,
    SemiLocalSet,
};
use crate::error::Error;
use crate::ffcore::{Fq, FqElem, Poly};
use crate::places::{local_square_class, parse_places, KElem, LocalSquareClass, Place};
use crate::quaternion::{check_u_sum, trace_set_experiment, u_set, TraceBudget};
use crate::rayclass::{places_up_to, ray_class_group};
use crate::symbols::{
    artin_sign, choose_params, construct_with_symbols, delta_set, hilbert_symbol, search_classes,
    verify_reciprocity, ClassTarget, GaloisSign, Modulus, ParamSet, SymbolTargets, DEFAULT_CANDIDATES,
};

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub limit: Duration,
    check: fn(u64) -> Check,
}

pub const CRITERIA: [Criterion; 11] = [
    Criterion { id: 1, title: "Hilbert reciprocity", limit: Duration::from_secs(30), check: c1_reciprocity },
    Criterion { id: 2, title: "symbol identities", limit: Duration::from_secs(30), check: c2_identities },
    Criterion { id: 3, title: "odd-place symbol disjunction", limit: Duration::from_secs(10), check: c3_disjunction },
    Criterion { id: 4, title: "prescribed symbols", limit: Duration::from_secs(120), check: c4_constructor },
    Criterion { id: 5, title: "partition classes as Δ-sets", limit: Duration::from_secs(60), check: c5_delta_forms },
    Criterion { id: 6, title: "O_S via tilde rings", limit: Duration::from_secs(300), check: c6_os },
    Criterion { id: 7, title: "non-squares", limit: Duration::from_secs(180), check: c7_nonsquares },
    Criterion { id: 8, title: "non-norms", limit: Duration::from_secs(180), check: c8_nonnorms },
    Criterion { id: 9, title: "ray class groups", limit: Duration::from_secs(120), check: c9_rayclass },
    Criterion { id: 10, title: "U + U covers the residue field", limit: Duration::from_secs(30), check: c10_u_sums },
    Criterion { id: 11, title: "trace sums are integral", limit: Duration::from_secs(120), check: c11_traces },
];

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.2} s, limit {} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        )
    }
}

pub fn run(c: &Criterion, seed: u64) -> Outcome {
    let start = Instant::now();
    let res = (c.check)(seed);
    let elapsed = start.elapsed();
    let (ok, mut detail) = match res {
        Ok(d) => (true, d),
        Err(Fail(d)) => (false, d),
    };
    let in_time = elapsed <= c.limit;
    if !in_time {
        detail.push_str("; over the time limit");
    }
    Outcome { id: c.id, title: c.title, passed: ok && in_time, detail, elapsed, limit: c.limit }
}

pub fn run_all(seed: u64) -> Vec<Outcome> {
    CRITERIA.iter().map(|c| run(c, seed)).collect()
}

struct Fail(String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(e.to_string())
    }
}

type Check = std::result::Result<String, Fail>;

fn fail<T>(msg: String) -> std::result::Result<T, Fail> {
    Err(Fail(msg))
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt)
}

fn rand_poly(rng: &mut ChaCha8Rng, fq: &Fq, deg: usize, monic: bool) -> Poly {
    let mut c: Vec<FqElem> = (0..=deg).map(|_| FqElem(rng.gen_range(0..fq.q()))).collect();
    if monic {
        c[deg] = FqElem::ONE;
    }
    Poly::from_coeffs(fq, c)
}

/// Nonzero n/d with deg n, deg d ≤ h and d monic.
fn rand_kelem(rng: &mut ChaCha8Rng, fq: &Fq, h: usize) -> KElem {
    loop {
        let (dn, dd) = (rng.gen_range(0..=h), rng.gen_range(0..=h));
        let n = rand_poly(rng, fq, dn, false);
        let d = rand_poly(rng, fq, dd, true);
        if !n.is_zero() {
            return KElem::new(n, d).expect("monic denominator");
        }
    }
}

fn params(fq: &Fq, s: &str) -> std::result::Result<ParamSet, Fail> {
    Ok(choose_params(fq, &parse_places(fq, s)?, 8)?)
}

fn c1_reciprocity(seed: u64) -> Check {
    let mut n = 0;
    for q in [3u32, 5, 7, 9] {
        let fq = Fq::with_size(q, None)?;
        let mut rng = rng_for(seed, q as u64);
        for _ in 0..500 {
            let a = rand_kelem(&mut rng, &fq, 3);
            let b = rand_kelem(&mut rng, &fq, 3);
            if !verify_reciprocity(&a, &b)? {
                return fail(format!("q = {q}: product of symbols of ({a}, {b}) is -1"));
            }
            if delta_set(&a, &b)?.len() % 2 != 0 {
                return fail(format!("q = {q}: odd Δ-set for ({a}, {b})"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} pairs over q in {{3,5,7,9}}, all products 1, all Δ-sets even"))
}

fn c2_identities(seed: u64) -> Check {
    let mut n = 0;
    for q in [3u32, 5, 7] {
        let fq = Fq::with_size(q, None)?;
        let mut rng = rng_for(seed, 100 + q as u64);
        let low: Vec<Place> = places_up_to(&fq, 2).collect();
        for _ in 0..350 {
            let a = rand_kelem(&mut rng, &fq, 2);
            let b = rand_kelem(&mut rng, &fq, 2);
            let c = rand_kelem(&mut rng, &fq, 2);
            let mut cands: Vec<Place> = a.divisor()?.support().cloned().collect();
            cands.extend(b.divisor()?.support().cloned());
            cands.push(low[rng.gen_range(0..low.len())].clone());
            let p = &cands[rng.gen_range(0..cands.len())];
            let s = |x: &KElem, y: &KElem| hilbert_symbol(x, y, p);
            if s(&a, &b.mul(&c))? != s(&a, &b)? * s(&a, &c)? {
                return fail(format!("bimultiplicativity fails for {a}, {b}, {c} at {p}"));
            }
            if s(&a, &b)? != s(&b, &a)? {
                return fail(format!("symmetry fails for {a}, {b} at {p}"));
            }
            if s(&a, &a.neg())? != 1 {
                return fail(format!("({a}, -{a}) = -1 at {p}"));
            }
            let one_minus = KElem::one(&fq).sub(&a);
            if !one_minus.is_zero() && s(&a, &one_minus)? != 1 {
                return fail(format!("({a}, 1 - {a}) = -1 at {p}"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} instances over q in {{3,5,7}}, four identities each"))
}

fn class_reps(fq: &Fq, p: &Place) -> std::result::Result<Vec<KElem>, Fail> {
    let mut out = Vec::new();
    for c in LocalSquareClass::all() {
        let t = [ClassTarget::new(p.clone(), c.parity, Some(c.sign))];
        let x = search_classes(fq, &t, |_| Ok(true), 8, DEFAULT_CANDIDATES)?;
        if local_square_class(&x, p)? != c {
            return fail(format!("class representative {x} misses {c:?} at {p}"));
        }
        out.push(x);
    }
    Ok(out)
}

fn c3_disjunction(_seed: u64) -> Check {
    let mut places = 0;
    let mut pairs = 0;
    for q in [3u32, 5] {
        let fq = Fq::prime(q)?;
        let params = params(&fq, "inf")?;
        let mut per_degree: BTreeMap<usize, usize> = BTreeMap::new();
        for p0 in places_up_to(&fq, 4).filter(|p| !params.m.divides(p)) {
            let used = per_degree.entry(p0.degree()).or_default();
            if *used == 4 {
                continue;
            }
            *used += 1;
            let sigma = artin_sign(&params, &p0)?;
            let (p, s) = if sigma.is_one() {
                psi_witness(&params, &p0, 8)?
            } else {
                (phi_witness(&params, sigma, &p0, 8)?, s_sigma(&params, sigma)?.clone())
            };
            let r = SemiLocalSet::new([p0.clone()].into());
            let reps = class_reps(&fq, &p0)?;
            for x in &reps {
                for y in &reps {
                    let want = hilbert_symbol(x, y, &p0)? == -1;
                    if hsodd_disjunction(x, y, &p, &s, &r)? != want {
                        return fail(format!("q = {q}: disjunction disagrees for ({x}, {y}) at {p0}"));
                    }
                    pairs += 1;
                }
            }
            places += 1;
        }
    }
    if places < 20 {
        return fail(format!("only {places} places tested"));
    }
    Ok(format!("{places} places of degree 1..4 over q in {{3,5}}, {pairs} class pairs agree"))
}

fn c4_constructor(seed: u64) -> Check {
    let (mut feasible, mut parity, mut local) = (0, 0, 0);
    for q in [3u32, 5] {
        let fq = Fq::prime(q)?;
        let mut rng = rng_for(seed, 400 + q as u64);
        let low: Vec<Place> = places_up_to(&fq, 2).collect();
        while feasible < 50 * (q as usize / 2) {
            let k = rng.gen_range(1..=2);
            let pairs: Vec<KElem> = (0..k).map(|_| rand_kelem(&mut rng, &fq, 2)).collect();
            let x0 = rand_kelem(&mut rng, &fq, 2);
            let mut targets = SymbolTargets::new();
            for (i, a) in pairs.iter().enumerate() {
                for p in delta_set(a, &x0)? {
                    targets.insert((i, p), -1);
                }
            }
            let x = construct_with_symbols(&fq, &pairs, &targets, 8)?;
            for (i, a) in pairs.iter().enumerate() {
                let want: BTreeSet<Place> = targets.keys().filter(|(j, _)| *j == i).map(|(_, p)| p.clone()).collect();
                if delta_set(a, &x)? != want {
                    return fail(format!("constructed {x} misses the targets of {a}"));
                }
            }
            feasible += 1;

            // flipping one target breaks the parity condition
            let p = low[rng.gen_range(0..low.len())].clone();
            let mut odd = targets.clone();
            if odd.remove(&(0, p.clone())).is_none() {
                odd.insert((0, p), -1);
            }
            match construct_with_symbols(&fq, &pairs, &odd, 8) {
                Err(Error::InfeasibleTargets { index: Some(0), reason, .. }) if reason.contains("reciprocity") => {
                    parity += 1
                }
                other => return fail(format!("odd target family accepted or misdiagnosed: {other:?}")),
            }

            // −1 where the parameter is a local square
            let a = &pairs[0];
            let sq = low.iter().find(|p| local_square_class(a, p).ok() == Some(LocalSquareClass::SQUARE));
            let other = low.iter().find(|p| local_square_class(a, p).map(|c| c.parity == 1).unwrap_or(false));
            if let (Some(sq), Some(other)) = (sq, other) {
                let mut bad = SymbolTargets::new();
                bad.insert((0, sq.clone()), -1);
                bad.insert((0, other.clone()), -1);
                match construct_with_symbols(&fq, &pairs[..1], &bad, 8) {
                    Err(Error::InfeasibleTargets { index: Some(0), place: Some(pl), .. }) if pl == sq.to_string() => {
                        local += 1
                    }
                    other => return fail(format!("local-square target accepted or misdiagnosed: {other:?}")),
                }
            }
        }
    }
    if feasible < 100 || parity + local < 20 || local == 0 {
        return fail(format!("too few families: {feasible} feasible, {parity} + {local} infeasible"));
    }
    Ok(format!(
        "{feasible} feasible families re-verified; {parity} parity and {local} local-square violations rejected"
    ))
}

fn sigmas() -> [GaloisSign; 3] {
    [GaloisSign::new(-1, -1), GaloisSign::new(-1, 1), GaloisSign::new(1, -1)]
}

fn c5_delta_forms(seed: u64) -> Check {
    let mut n = 0;
    for q in [3u32, 5] {
        let fq = Fq::prime(q)?;
        let params = params(&fq, "inf")?;
        let mut rng = rng_for(seed, 500 + q as u64);
        for sigma in sigmas() {
            let pool: Vec<Place> = places_up_to(&fq, 4)
                .filter(|p| !params.m.divides(p))
                .filter(|p| artin_sign(&params, p).map(|s| s == sigma).unwrap_or(false))
                .collect();
            if pool.len() < 3 {
                return fail(format!("q = {q}: too few places of sign {sigma}"));
            }
            let mut cache: BTreeMap<Place, KElem> = BTreeMap::new();
            let mut count = 0;
            while count < 50 {
                let k = [1, 3][rng.gen_range(0..2)];
                let mut chosen = BTreeSet::new();
                while chosen.len() < k {
                    chosen.insert(pool[rng.gen_range(0..pool.len())].clone());
                }
                let mut p = rand_square_unit(&mut rng, &params);
                for pl in &chosen {
                    if !cache.contains_key(pl) {
                        cache.insert(pl.clone(), phi_witness(&params, sigma, pl, 8)?);
                    }
                    p = p.mul(&cache[pl]);
                }
                let r = r_sigma(&params, &p, sigma)?;
                if r.delta != chosen {
                    return fail(format!("q = {q}: P^{sigma}({p}) = {:?}, expected {chosen:?}", r.delta));
                }
                count += 1;
            }
            let mut tries = 0;
            while count < 60 && tries < 20_000 {
                tries += 1;
                let x = rand_kelem(&mut rng, &fq, 3);
                if phi_membership(&params, &x, sigma)? {
                    r_sigma(&params, &x, sigma)?;
                    count += 1;
                }
            }
            if count < 50 {
                return fail(format!("q = {q}, sigma {sigma}: only {count} elements of Φ found"));
            }
            n += count;
        }
    }
    Ok(format!("{n} elements of Φ_σ over q in {{3,5}}, every partition class equals its Δ-set form"))
}

/// A random square coprime to m.
fn rand_square_unit(rng: &mut ChaCha8Rng, params: &ParamSet) -> KElem {
    let fq = params.a.field();
    for _ in 0..32 {
        let deg = rng.gen_range(1..=2);
        let f = rand_poly(rng, fq, deg, false);
        let g = rand_poly(rng, fq, deg, true);
        if f.deg() != deg || f.is_zero() {
            continue;
        }
        let Ok(s) = KElem::new(f, g) else { continue };
        if s.is_zero() {
            continue;
        }
        if s.divisor().map(|d| d.support().all(|p| !params.m.divides(p))).unwrap_or(false) {
            return s.square();
        }
    }
    KElem::one(fq)
}

fn c6_os(seed: u64) -> Check {
    let (mut members, mut refuted) = (0, 0);
    let budget = OsBudget::default();
    for q in [3u32, 5] {
        let fq = Fq::prime(q)?;
        let mut rng = rng_for(seed, 600 + q as u64);
        let mut cands: Vec<Place> = places_up_to(&fq, 1).collect();
        cands.extend(fq.irreducibles_of_degree(2).take(2).map(Place::Finite));
        let mut cache: BTreeMap<Vec<Place>, ParamSet> = BTreeMap::new();
        for _ in 0..50 {
            let size = rng.gen_range(1..=2);
            let mut s = BTreeSet::new();
            while s.len() < size {
                s.insert(cands[rng.gen_range(0..cands.len())].clone());
            }
            let key: Vec<Place> = s.iter().cloned().collect();
            if !cache.contains_key(&key) {
                cache.insert(key.clone(), choose_params(&fq, &s, 8)?);
            }
            let params = &cache[&key];
            let mut den = Poly::one(&fq);
            for p in s.iter().filter_map(|p| p.poly()) {
                den = den.mul(&p.pow(rng.gen_range(0..=2)));
            }
            if rng.gen_bool(0.5) {
                if let Some(f) = cands[rng.gen_range(0..cands.len())].poly() {
                    den = den.mul(f);
                }
            }
            let dn = rng.gen_range(0..=den.deg() + 2);
            let num = rand_poly(&mut rng, &fq, dn, false);
            let t = KElem::new(num, den)?;
            let v = verify_os(params, &t, &s, &budget, seed, 8)?;
            let direct = in_os_direct(&t, &s)?;
            if v.member != direct {
                return fail(format!("q = {q}: verdict {} for {t} with S = {key:?}, direct test {direct}", v.member));
            }
            if let Some(w) = &v.witness {
                if let Err(e) = verify_witness(params, &Claim::NotInOs { t: t.clone() }, w) {
                    return fail(format!("refutation of {t} does not re-verify: {e}"));
                }
                refuted += 1;
            } else {
                let log = v.log.as_ref().expect("member log");
                if !log.failures.is_empty() {
                    return fail(format!("tilde membership failures for {t}: {:?}", log.failures));
                }
                if ["(-1,-1)", "(-1,+1)", "(+1,-1)", "psi"].iter().any(|c| log.samples.get(*c).copied().unwrap_or(0) < 20) {
                    return fail(format!("sampling budget under 20 for {t}"));
                }
                members += 1;
            }
        }
    }
    Ok(format!("100 pairs (t, S): {members} members with 20 samples per class, {refuted} refutations re-verified"))
}

fn c7_nonsquares(seed: u64) -> Check {
    let mut n = 0;
    for q in [3u32, 5] {
        let fq = Fq::prime(q)?;
        let params = params(&fq, "inf")?;
        let mut rng = rng_for(seed, 700 + q as u64);
        while n < 100 * (q as usize / 2) {
            let x = rand_kelem(&mut rng, &fq, 3);
            if is_square_global(&x)? {
                continue;
            }
            let w = nonsquare_witness(&params, &x, 8)?;
            if let Err(e) = verify_witness(&params, &Claim::Nonsquare { x: x.clone() }, &w) {
                return fail(format!("witness for {x} does not re-verify: {e}"));
            }
            n += 1;
        }
    }
    let fq = Fq::prime(3)?;
    let mut polys: Vec<Poly> = vec![Poly::zero(&fq)];
    for d in 0..=3 {
        polys.extend(Poly::all_of_degree(&fq, d));
    }
    let dens: Vec<Poly> = (0..=3).flat_map(|d| Poly::monic_of_degree(&fq, d).collect::<Vec<_>>()).collect();
    let mut checked = 0;
    for num in polys.iter().filter(|p| !p.is_zero()) {
        for den in &dens {
            let x = KElem::new(num.clone(), den.clone())?;
            let nd = x.num().mul(x.den());
            let brute = polys.iter().any(|y| y.mul(y) == nd);
            if brute != is_square_global(&x)? {
                return fail(format!("square test disagrees with brute force on {x}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{n} non-squares witnessed and re-verified; {checked} elements of height <= 3 over F_3 match brute force"))
}

fn c8_nonnorms(seed: u64) -> Check {
    let (mut witnessed, mut norms) = (0, 0);
    for q in [3u32, 5] {
        let fq = Fq::prime(q)?;
        let params = params(&fq, "inf")?;
        let mut rng = rng_for(seed, 800 + q as u64);
        for _ in 0..100 {
            let x = rand_kelem(&mut rng, &fq, 2);
            let y = rand_kelem(&mut rng, &fq, 2);
            match nonnorm_witness(&params, &x, &y, 8) {
                Ok(w) => {
                    if is_norm(&x, &y)? {
                        return fail(format!("witness produced for the norm pair ({x}, {y})"));
                    }
                    if let Err(e) = verify_witness(&params, &Claim::Nonnorm { x: x.clone(), y: y.clone() }, &w) {
                        return fail(format!("witness for ({x}, {y}) does not re-verify: {e}"));
                    }
                    witnessed += 1;
                }
                Err(Error::IsActuallyANorm) => norms += 1,
                Err(e) => return Err(e.into()),
            }
        }
    }
    let fq = Fq::prime(3)?;
    let mut rng = rng_for(seed, 899);
    let small: Vec<Poly> = std::iter::once(Poly::zero(&fq)).chain((0..=1).flat_map(|d| Poly::all_of_degree(&fq, d))).collect();
    let ws: Vec<KElem> = (0..=1).flat_map(|d| Poly::monic_of_degree(&fq, d).collect::<Vec<_>>()).map(KElem::from).collect();
    let (mut trials, mut represented) = (0, 0);
    while trials < 500 {
        let y = KElem::from(rand_poly(&mut rng, &fq, 1, false));
        if y.is_zero() {
            continue;
        }
        let x = if trials % 2 == 0 {
            let u = KElem::from(small[rng.gen_range(0..small.len())].clone());
            let v = KElem::from(small[rng.gen_range(0..small.len())].clone());
            let w = &ws[rng.gen_range(0..ws.len())];
            u.square().sub(&y.mul(&v.square())).div(&w.square())?
        } else {
            KElem::from(rand_poly(&mut rng, &fq, 1, false))
        };
        if x.is_zero() {
            continue;
        }
        trials += 1;
        let found = ws.iter().any(|w| {
            let lhs = x.mul(&w.square());
            small.iter().any(|u| {
                let u = KElem::from(u.clone()).square();
                small.iter().any(|v| u.sub(&y.mul(&KElem::from(v.clone()).square())) == lhs)
            })
        });
        if found {
            represented += 1;
            if !is_norm(&x, &y)? {
                return fail(format!("{x} = u^2 - ({y}) v^2 but the norm test says no"));
            }
        }
    }
    Ok(format!(
        "200 pairs: {witnessed} non-norm witnesses re-verified, {norms} norms; {represented}/{trials} brute-force representations confirmed"
    ))
}

fn c9_rayclass(_seed: u64) -> Check {
    let mut groups = 0;
    let mut small = Vec::new();
    for (q, max) in [(3u32, 4usize), (5, 4)] {
        let fq = Fq::prime(q)?;
        let inf: BTreeSet<Place> = [Place::Infinity].into();
        for n in 1..=max {
            for m in Poly::monic_of_degree(&fq, n) {
                let mut md = Modulus::new();
                for (g, e) in m.factor()?.factors {
                    md.insert(Place::Finite(g), e);
                }
                let g = ray_class_group(&fq, &inf, &md)?;
                if g.order() * (q as u64 - 1) != g.residue_unit_count() {
                    return fail(format!("q = {q}, m = {m}: order {} vs {} units", g.order(), g.residue_unit_count()));
                }
                groups += 1;
                if g.order() <= 12 && (n <= 2 || q == 3) {
                    small.push(g);
                }
            }
        }
    }
    let f3 = Fq::prime(3)?;
    for (s, m) in [("t^2+1", "(t)^2"), ("t", "inf^2"), ("t^2+1", "(t)^2*(t+1)")] {
        let md = Modulus::from_divisor(&crate::places::parse_divisor(&f3, m)?)?;
        small.push(ray_class_group(&f3, &parse_places(&f3, s)?, &md)?);
    }
    let mut hit_groups = 0;
    for g in &small {
        let want: HashSet<Vec<u64>> = g.classes().into_iter().collect();
        let mut seen = HashSet::new();
        for p in places_up_to(g.field(), 6) {
            if g.excludes(&p) {
                continue;
            }
            seen.insert(g.class_of_place(&p)?);
            if seen.len() == want.len() {
                break;
            }
        }
        if seen != want {
            return fail(format!("{g:?}: some class has no prime of degree <= 6"));
        }
        hit_groups += 1;
    }
    Ok(format!(
        "order formula on {groups} moduli of degree <= 4 over q in {{3,5}}; every class hit by a prime of degree <= 6 in {hit_groups} groups of order <= 12"
    ))
}

fn c10_u_sums(_seed: u64) -> Check {
    let mut fields = 0;
    let mut places = 0;
    for size in (13u32..=81).step_by(2) {
        let Ok(big) = Fq::with_size(size, None) else { continue };
        let mut realizations: Vec<(Fq, usize)> = vec![(big, 1)];
        for (q, k) in [(3u32, 3usize), (3, 4), (5, 2), (7, 2), (9, 2)] {
            if q.pow(k as u32) == size {
                realizations.push((Fq::with_size(q, None)?, k));
            }
        }
        for (fq, k) in realizations {
            for f in fq.irreducibles_of_degree(k) {
                let p = Place::Finite(f);
                if !check_u_sum(&fq, &p) {
                    return fail(format!("U + U misses an element at {p} over F_{}", fq.q()));
                }
                places += 1;
                if k == 1 {
                    break;
                }
            }
        }
        fields += 1;
    }
    let f3 = Fq::prime(3)?;
    let t = Place::Finite(Poly::t(&f3));
    let u = u_set(&f3, &t);
    let sums: HashSet<Poly> = u.iter().flat_map(|x| u.iter().map(move |y| x.add(y))).collect();
    if u.len() != 1 || !u[0].is_zero() || sums.len() != 1 {
        return fail(format!("residue field of size 3: U = {u:?}"));
    }
    Ok(format!("{fields} residue field sizes in (11, 81] over {places} places; size 3 gives U + U = {{0}}"))
}

fn c11_traces(seed: u64) -> Check {
    let fq = Fq::prime(3)?;
    let mut rng = rng_for(seed, 1100);
    let mut pairs = 0;
    let mut tested = 0;
    while pairs < 10 {
        let a = rand_kelem(&mut rng, &fq, 1);
        let b = rand_kelem(&mut rng, &fq, 1);
        if delta_set(&a, &b)?.is_empty() {
            continue;
        }
        let r = trace_set_experiment(&a, &b, 2, TraceBudget { seed, ..TraceBudget::default() })?;
        if !r.passed() {
            return fail(format!("({a}, {b}): {:?}", r.violations));
        }
        tested += r.sums_tested;
        pairs += 1;
    }
    Ok(format!("{pairs} pairs with nonempty Δ at height 2, {tested} trace sums integral"))
}
