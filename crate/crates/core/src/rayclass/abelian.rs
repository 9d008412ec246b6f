//! Finite abelian groups given by explicit elements: greedy basis, relation matrix and
//! Smith normal form.

use std::collections::HashMap;
use std::hash::Hash;

/// Structure of G / ⟨base⟩ with a coordinate map for every element of G.
pub struct Presentation<K> {
    coords: HashMap<K, Vec<i64>>,
    rank: usize,
    /// Column transform taking greedy coordinates to invariant-factor coordinates.
    q: Vec<Vec<i128>>,
    diag: Vec<i128>,
}

impl<K: Hash + Eq + Clone> Presentation<K> {
    /// `elements` must enumerate all of G; `base` generates the subgroup quotiented out.
    pub fn build<I, F>(elements: I, identity: K, base: &[K], mul: F) -> Presentation<K>
    where
        I: IntoIterator<Item = K>,
        F: Fn(&K, &K) -> K,
    {
        let mut coords: HashMap<K, Vec<i64>> = HashMap::new();
        coords.insert(identity.clone(), Vec::new());
        let mut frontier = vec![identity];
        while let Some(x) = frontier.pop() {
            for g in base {
                let y = mul(&x, g);
                if !coords.contains_key(&y) {
                    coords.insert(y.clone(), Vec::new());
                    frontier.push(y);
                }
            }
        }
        let mut relations: Vec<Vec<i64>> = Vec::new();
        for x in elements {
            if coords.contains_key(&x) {
                continue;
            }
            let n = relations.len();
            let mut k = 1i64;
            let mut y = x.clone();
            while !coords.contains_key(&y) {
                y = mul(&y, &x);
                k += 1;
            }
            let mut row = coords[&y].clone();
            row.resize(n, 0);
            for v in row.iter_mut() {
                *v = -*v;
            }
            row.push(k);
            relations.push(row);
            let old: Vec<(K, Vec<i64>)> = coords.iter().map(|(a, c)| (a.clone(), c.clone())).collect();
            let mut xj = x.clone();
            for j in 1..k {
                for (h, c) in &old {
                    let mut c = c.clone();
                    c.resize(n, 0);
                    c.push(j);
                    coords.insert(mul(&xj, h), c);
                }
                xj = mul(&xj, &x);
            }
        }
        let rank = relations.len();
        let mut a: Vec<Vec<i128>> = relations
            .iter()
            .map(|r| {
                let mut r: Vec<i128> = r.iter().map(|&v| v as i128).collect();
                r.resize(rank, 0);
                r
            })
            .collect();
        let (diag, q) = smith(&mut a);
        Presentation { coords, rank, q, diag }
    }

    /// Invariant factors d_1 | d_2 | … with trivial factors removed.
    pub fn invariants(&self) -> Vec<u64> {
        self.diag.iter().filter(|&&d| d != 1).map(|&d| d as u64).collect()
    }

    pub fn order(&self) -> u64 {
        self.diag.iter().map(|&d| d as u64).product()
    }

    /// Coordinates of x on the invariant-factor generators; `None` for unknown elements.
    pub fn coordinates(&self, x: &K) -> Option<Vec<u64>> {
        let mut c = self.coords.get(x)?.clone();
        c.resize(self.rank, 0);
        let mut out = Vec::new();
        for (j, &d) in self.diag.iter().enumerate() {
            if d == 1 {
                continue;
            }
            let v: i128 = (0..self.rank).map(|i| c[i] as i128 * self.q[i][j]).sum();
            out.push(v.rem_euclid(d) as u64);
        }
        Some(out)
    }
}

/// Smith normal form of a square nonsingular matrix; returns the diagonal and the
/// accumulated column transform Q.
fn smith(a: &mut [Vec<i128>]) -> (Vec<i128>, Vec<Vec<i128>>) {
    let n = a.len();
    let mut q: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    let swap_cols = |a: &mut [Vec<i128>], q: &mut [Vec<i128>], i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in q.iter_mut() {
            row.swap(i, j);
        }
    };
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j] != 0 && best.map(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()).unwrap_or(true) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            swap_cols(a, &mut q, t, bj);
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..n {
                let f = a[i][t] / p;
                if f != 0 {
                    for j in t..n {
                        a[i][j] -= f * a[t][j];
                    }
                }
                dirty |= a[i][t] != 0;
            }
            for j in t + 1..n {
                let f = a[t][j] / p;
                if f != 0 {
                    for row in a.iter_mut() {
                        row[j] -= f * row[t];
                    }
                    for row in q.iter_mut() {
                        row[j] -= f * row[t];
                    }
                }
                dirty |= a[t][j] != 0;
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..n {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for j in t..n {
                a[t][j] = -a[t][j];
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), q)
}
