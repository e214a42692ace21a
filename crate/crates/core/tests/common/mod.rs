//! Shared fixtures and independent oracles for the integration tests.
//!
//! Oracles here recompute quantities from first principles, without going
//! through the library routine they are compared against.

#![allow(dead_code)]

use qdomain::order::FiniteQOrder;
use qdomain::{Archetype, TNorm};
use rand::Rng;

pub fn specs() -> Vec<(&'static str, TNorm)> {
    vec![
        ("godel", TNorm::godel()),
        ("lukasiewicz", TNorm::lukasiewicz()),
        ("product", TNorm::product()),
        ("luk[0,0.5]", TNorm::ordinal_sum(&[(0.0, 0.5, Archetype::Lukasiewicz)]).unwrap()),
        ("luk[0.25,0.5]", TNorm::ordinal_sum(&[(0.25, 0.5, Archetype::Lukasiewicz)]).unwrap()),
    ]
}

pub fn spec(name: &str) -> TNorm {
    specs().into_iter().find(|(n, _)| *n == name).unwrap().1
}

/// Direct ordinal-sum evaluation of `x & y` from the piece list.
pub fn conj_oracle(t: &TNorm, x: f64, y: f64) -> f64 {
    for p in t.pieces() {
        let (lo, hi) = (p.lo, p.hi);
        if lo <= x && x <= hi && lo <= y && y <= hi && hi > lo {
            let w = hi - lo;
            let (a, b) = ((x - lo) / w, (y - lo) / w);
            let c = match p.kind {
                Archetype::Lukasiewicz => (a + b - 1.0).max(0.0),
                Archetype::Product => a * b,
            };
            return lo + w * c;
        }
    }
    x.min(y)
}

/// `x → y` as the largest `z` on a fine grid with `x & z ≤ y`, refined by
/// bisection.
pub fn residuum_oracle(t: &TNorm, x: f64, y: f64) -> f64 {
    if x <= y {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if conj_oracle(t, x, mid) <= y + 1e-15 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Max-`&` transitive closure of a reflexive matrix.
pub fn transitive_closure(t: &TNorm, mut m: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = m.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = t.conj(m[i][k], m[k][j]);
                if via > m[i][j] {
                    m[i][j] = via;
                }
            }
        }
    }
    m
}

pub fn is_transitive(t: &TNorm, m: &[Vec<f64>], eps: f64) -> bool {
    let n = m.len();
    (0..n).all(|i| m[i][i] >= 1.0 - eps)
        && (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| t.conj(m[i][k], m[k][j]) <= m[i][j] + eps)))
}

/// A random valid order on `n` points with values in `{k/8}`.
pub fn random_order<R: Rng>(rng: &mut R, t: &TNorm, n: usize) -> FiniteQOrder {
    let m: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { rng.gen_range(0..=8) as f64 / 8.0 }).collect())
        .collect();
    let m = transitive_closure(t, m);
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    FiniteQOrder::new(t.clone(), labels, m).unwrap()
}

/// Brute-force way-below on a finite order: the meet over all directed
/// subsets `I` with a supremum of `X(y, sup I) → ⋁_{i∈I} X(x, i)`.
pub fn way_below_oracle(x: &FiniteQOrder) -> Option<Vec<Vec<f64>>> {
    let n = x.len();
    let t = x.tnorm();
    let eps = x.eps();
    let crisp = |a: usize, b: usize| x.hom(a, b) >= 1.0 - eps;
    let mut fc: Vec<(Vec<f64>, usize)> = Vec::new();
    for mask in 1u32..1 << n {
        let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let directed = set
            .iter()
            .all(|&a| set.iter().all(|&b| set.iter().any(|&c| crisp(a, c) && crisp(b, c))));
        if !directed {
            continue;
        }
        let phi: Vec<f64> = (0..n).map(|z| set.iter().map(|&i| x.hom(z, i)).fold(0.0, f64::max)).collect();
        let sub = |psi: &[f64]| (0..n).map(|z| t.residuum(phi[z], psi[z])).fold(1.0, f64::min);
        let sup = (0..n).find(|&a| (0..n).all(|y| {
            let yon: Vec<f64> = (0..n).map(|z| x.hom(z, y)).collect();
            (x.hom(a, y) - sub(&yon)).abs() <= eps
        }))?;
        fc.push((phi, sup));
    }
    Some(
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| fc.iter().map(|(phi, s)| t.residuum(x.hom(b, *s), phi[a])).fold(1.0, f64::min))
                    .collect()
            })
            .collect(),
    )
}

/// Whether `φ` is a join of representables over a directed subset.
pub fn ideal_path_oracle(x: &FiniteQOrder, phi: &[f64]) -> bool {
    let n = x.len();
    let eps = x.eps();
    let crisp = |a: usize, b: usize| x.hom(a, b) >= 1.0 - eps;
    (1u32..1 << n).any(|mask| {
        let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let directed = set
            .iter()
            .all(|&a| set.iter().all(|&b| set.iter().any(|&c| crisp(a, c) && crisp(b, c))));
        directed
            && (0..n).all(|z| {
                let v = set.iter().map(|&i| x.hom(z, i)).fold(0.0, f64::max);
                (v - phi[z]).abs() <= eps
            })
    })
}

/// Every table on `n` points with off-diagonal values in `{k/m}` that is a
/// valid order.
pub fn all_orders(t: &TNorm, n: usize, m: usize) -> Vec<FiniteQOrder> {
    let off: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let total = (m + 1).pow(off.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut table = vec![vec![1.0; n]; n];
        for &(i, j) in &off {
            table[i][j] = (c % (m + 1)) as f64 / m as f64;
            c /= m + 1;
        }
        if is_transitive(t, &table, 1e-9) {
            let labels = (0..n).map(|i| format!("p{i}")).collect();
            out.push(FiniteQOrder::new(t.clone(), labels, table).unwrap());
        }
    }
    out
}

/// One-sided limit by direct evaluation close to the point.
pub fn limit_oracle(f: impl Fn(f64) -> f64, x: f64, from_above: bool) -> f64 {
    let h = 1e-10;
    if from_above {
        f((x + h).min(1.0))
    } else {
        f((x - h).max(0.0))
    }
}
