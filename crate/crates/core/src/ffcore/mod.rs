//! Finite fields of odd characteristic and polynomials over them.

pub mod field;
pub mod poly;
pub mod text;

use std::sync::Arc;

pub use field::{FieldSpec, Fq, FqElem, MAX_FIELD_SIZE};
pub use poly::{Factorization, Poly};
pub use text::{parse_poly, parse_poly_at};

// Degrees whose full monic enumeration is at most this size are cached.
const CACHE_LIMIT: u64 = 1 << 17;

impl Fq {
    /// Canonically least monic irreducible polynomial of degree n.
    pub fn first_irreducible(&self, n: usize) -> Poly {
        self.irreducibles_of_degree(n)
            .next()
            .expect("irreducibles exist in every degree")
    }

    /// Monic irreducibles of exact degree n, in canonical order.
    pub fn irreducibles_of_degree(&self, n: usize) -> Box<dyn Iterator<Item = Poly> + '_> {
        assert!(n >= 1, "degree must be positive");
        let total = (self.q() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
        if total > CACHE_LIMIT {
            return Box::new(
                Poly::monic_of_degree(self, n).filter(|f| f.is_irreducible().unwrap_or(false)),
            );
        }
        let cached = {
            let guard = self.irreducible_cache().lock().unwrap();
            guard.get(&n).cloned()
        };
        let list = match cached {
            Some(l) => l,
            None => {
                let l: Vec<Vec<FqElem>> = Poly::monic_of_degree(self, n)
                    .filter(|f| f.is_irreducible().unwrap_or(false))
                    .map(|f| f.coeffs().to_vec())
                    .collect();
                let l = Arc::new(l);
                self.irreducible_cache().lock().unwrap().insert(n, l.clone());
                l
            }
        };
        Box::new((0..list.len()).map(move |i| Poly::from_coeffs(self, list[i].clone())))
    }

    /// Monic irreducibles of degree 1..=d, in canonical order; lazily generated.
    pub fn irreducibles_up_to(&self, d: usize) -> impl Iterator<Item = Poly> + '_ {
        (1..=d).flat_map(move |n| self.irreducibles_of_degree(n))
    }
}

/// Number of monic irreducibles of degree n over F_q (necklace formula).
pub fn necklace_count(q: u64, n: u32) -> u64 {
    let mut total: i128 = 0;
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let mu = mobius(d);
        if mu != 0 {
            total += mu as i128 * (q as i128).pow(n / d);
        }
    }
    (total / n as i128) as u64
}

fn mobius(mut n: u32) -> i32 {
    let mut res = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            res = -res;
        }
        p += 1;
    }
    if n > 1 {
        res = -res;
    }
    res
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_irreducible_lists() {
        let f = Fq::prime(3).unwrap();
        let lin: Vec<String> = f.irreducibles_up_to(1).map(|p| p.to_string()).collect();
        assert_eq!(lin, ["t", "t+1", "t+2"]);
        let quad: Vec<String> = f.irreducibles_of_degree(2).map(|p| p.to_string()).collect();
        assert_eq!(quad, ["t^2+1", "t^2+t+2", "t^2+2*t+2"]);
        let f5 = Fq::prime(5).unwrap();
        assert_eq!(f5.irreducibles_of_degree(2).count(), 10);
    }

    #[test]
    fn counts_match_necklace_formula() {
        for q in [3u32, 5, 9] {
            let f = Fq::with_size(q, None).unwrap();
            let top = if q == 3 { 6 } else { 4 };
            for n in 1..=top {
                assert_eq!(
                    f.irreducibles_of_degree(n).count() as u64,
                    necklace_count(q as u64, n as u32),
                    "q={q} n={n}"
                );
            }
        }
        assert_eq!(necklace_count(3, 3), 8);
    }
}
