//! Finite [0,1]-approach spaces, the space 𝕂, closure operators of strong
//! cotopologies and the functors between them.
//!
//! Subsets are bitmasks over the carrier, so carriers are bounded by
//! `APPROACH_MAX_CARRIER`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::{grid_vectors, labels, sub_values, FiniteQOrder};
use crate::tnorm::{TNorm, UnitValue, EPS};

pub const APPROACH_MAX_CARRIER: usize = 12;

/// Carriers up to this size get the full (A3)/(A4) enumeration even when
/// the reduced checks would suffice.
const FULL_CHECK_CARRIER: usize = 8;

pub type Mask = u32;

pub fn mask_of(indices: &[usize]) -> Mask {
    indices.iter().fold(0, |m, &i| m | 1 << i)
}

pub fn members(mask: Mask, n: usize) -> impl Iterator<Item = usize> {
    (0..n).filter(move |&i| mask >> i & 1 == 1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproachTable {
    tnorm: TNorm,
    elements: Vec<String>,
    /// `delta[mask * n + x]`.
    delta: Vec<f64>,
    defaulted: Vec<Mask>,
    eps: f64,
}

/// On-disk form: masks are decimal strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproachFile {
    pub tnorm: TNorm,
    pub elements: Vec<String>,
    pub delta: BTreeMap<String, Vec<f64>>,
}

fn check_size(n: usize) -> Result<()> {
    if n > APPROACH_MAX_CARRIER {
        return Err(Error::TooLarge { size: n, limit: APPROACH_MAX_CARRIER });
    }
    Ok(())
}

impl ApproachTable {
    /// Table with `δ(x, A) = f(x, A)`, values validated but axioms unchecked.
    pub fn from_fn(tnorm: TNorm, elements: Vec<String>, f: impl Fn(usize, Mask) -> f64) -> Result<Self> {
        let n = elements.len();
        check_size(n)?;
        let mut delta = Vec::with_capacity(n << n);
        for mask in 0..(1 as Mask) << n {
            for x in 0..n {
                let v = f(x, mask);
                UnitValue::at(v, &format!("delta({}, mask {mask})", elements[x]))?;
                delta.push(v);
            }
        }
        Ok(Self { tnorm, elements, delta, defaulted: Vec::new(), eps: EPS })
    }

    /// `Γ(X)(x, A) = ⋁_{a∈A} X(x,a)`.
    pub fn gamma(x: &FiniteQOrder) -> Result<Self> {
        let n = x.len();
        Self::from_fn(x.tnorm().clone(), x.elements().to_vec(), |p, mask| {
            members(mask, n).map(|a| x.hom(p, a)).fold(0.0, f64::max)
        })
        .map(|t| t.with_eps(x.eps()))
    }

    pub fn from_file(file: ApproachFile) -> Result<Self> {
        let n = file.elements.len();
        check_size(n)?;
        let full = (1 as Mask) << n;
        let mut given: BTreeMap<Mask, Vec<f64>> = BTreeMap::new();
        for (key, row) in file.delta {
            let mask: Mask = key.trim().parse().map_err(|_| Error::Parse(format!("bad subset mask `{key}`")))?;
            if mask >= full {
                return Err(Error::Parse(format!("mask {mask} names points beyond the {n} elements")));
            }
            if row.len() != n {
                return Err(Error::CarrierMismatch { expected: n, found: row.len() });
            }
            for (x, &v) in row.iter().enumerate() {
                UnitValue::at(v, &format!("delta[{key}][{x}]"))?;
            }
            given.insert(mask, row);
        }
        for i in 0..n {
            if !given.contains_key(&(1 << i)) {
                return Err(Error::Parse(format!("singleton mask {} for `{}` is missing", 1u32 << i, file.elements[i])));
            }
        }
        let mut defaulted = Vec::new();
        let mut delta = Vec::with_capacity(n << n);
        for mask in 0..full {
            match given.get(&mask) {
                Some(row) => delta.extend_from_slice(row),
                None => {
                    defaulted.push(mask);
                    for x in 0..n {
                        delta.push(members(mask, n).map(|a| given[&(1 << a)][x]).fold(0.0, f64::max));
                    }
                }
            }
        }
        Ok(Self { tnorm: file.tnorm, elements: file.elements, delta, defaulted, eps: EPS })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }

    pub fn to_file(&self) -> ApproachFile {
        let n = self.len();
        let delta = (0..(1 as Mask) << n)
            .map(|m| (m.to_string(), (0..n).map(|x| self.delta(x, m)).collect()))
            .collect();
        ApproachFile { tnorm: self.tnorm.clone(), elements: self.elements.clone(), delta }
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn tnorm(&self) -> &TNorm {
        &self.tnorm
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Masks filled in from singleton data when loading a file.
    pub fn defaulted_masks(&self) -> &[Mask] {
        &self.defaulted
    }

    pub fn full_mask(&self) -> Mask {
        ((1 as Mask) << self.len()) - 1
    }

    pub fn delta(&self, x: usize, mask: Mask) -> f64 {
        self.delta[mask as usize * self.len() + x]
    }

    /// `δ(−, A)`.
    pub fn column(&self, mask: Mask) -> Vec<f64> {
        (0..self.len()).map(|x| self.delta(x, mask)).collect()
    }

    /// Specialization order `Ω(δ)(x, y) = δ(x, {y})`.
    pub fn omega(&self) -> Result<FiniteQOrder> {
        let n = self.len();
        let table = (0..n).map(|x| (0..n).map(|y| self.delta(x, 1 << y)).collect()).collect();
        Ok(FiniteQOrder::new(self.tnorm.clone(), self.elements.clone(), table)?.with_eps(self.eps))
    }

    /// Restriction to the listed points: `δ_Y(y, B) = δ(y, B)`.
    pub fn subspace(&self, indices: &[usize]) -> Result<Self> {
        let n = self.len();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::UnknownElement(bad.to_string()));
        }
        let elements = indices.iter().map(|&i| self.elements[i].clone()).collect();
        let k = indices.len();
        Self::from_fn(self.tnorm.clone(), elements, |y, sub| {
            let mask = members(sub, k).fold(0, |m, j| m | 1 << indices[j]);
            self.delta(indices[y], mask)
        })
        .map(|t| t.with_eps(self.eps))
    }

    fn level_mask(lambda: &[f64], p: f64) -> Mask {
        lambda.iter().enumerate().filter(|(_, &v)| v >= p).fold(0, |m, (i, _)| m | 1 << i)
    }

    /// Closure in `κ(δ)`: `⋁_p p & δ(−, {λ >= p})` over the values `p` of `λ`.
    pub fn closure(&self, lambda: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        if lambda.len() != n {
            return Err(Error::CarrierMismatch { expected: n, found: lambda.len() });
        }
        let mut levels: Vec<f64> = lambda.iter().copied().filter(|&v| v > 0.0).collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        Ok((0..n)
            .map(|x| {
                levels
                    .iter()
                    .map(|&p| self.tnorm.conj(p, self.delta(x, Self::level_mask(lambda, p))))
                    .fold(0.0, f64::max)
            })
            .collect())
    }

    /// First `(x, A)` with `δ(x,A) > inf λ(A) → λ(x)`.
    pub fn kappa_violation(&self, lambda: &[f64]) -> Option<(usize, Mask)> {
        let n = self.len();
        if lambda.len() != n {
            return Some((0, 0));
        }
        (1..=self.full_mask()).find_map(|mask| {
            let inf = members(mask, n).map(|a| lambda[a]).fold(1.0, f64::min);
            (0..n)
                .find(|&x| self.delta(x, mask) > self.tnorm.residuum(inf, lambda[x]) + self.eps)
                .map(|x| (x, mask))
        })
    }

    /// `λ` is a continuous map into 𝕂, i.e. a closed set of `κ(δ)`.
    pub fn kappa_membership(&self, lambda: &[f64]) -> bool {
        self.kappa_violation(lambda).is_none()
    }
}

/// `δ_𝕂(x, A) = inf A → x`, and `0` on the empty set.
pub fn delta_k(t: &TNorm, x: f64, set: &[f64]) -> f64 {
    if set.is_empty() {
        0.0
    } else {
        t.residuum(set.iter().copied().fold(1.0, f64::min), x)
    }
}

/// The space 𝕂 restricted to the grid `{0, 1/n, ..., 1}`.
pub fn space_k(t: &TNorm, grid_n: usize) -> Result<ApproachTable> {
    if grid_n == 0 {
        return Err(Error::Precondition("grid needs n >= 1".into()));
    }
    let pts: Vec<f64> = (0..=grid_n).map(|i| i as f64 / grid_n as f64).collect();
    let elements = pts.iter().map(f64::to_string).collect();
    ApproachTable::from_fn(t.clone(), elements, |x, mask| {
        let set: Vec<f64> = members(mask, pts.len()).map(|a| pts[a]).collect();
        delta_k(t, pts[x], &set)
    })
}

// ---------------------------------------------------------------------------
// Axioms

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubsetWitness {
    pub x: usize,
    pub a: Mask,
    pub b: Mask,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproachReport {
    pub size: usize,
    pub valid: bool,
    /// Points with `δ(x,{x}) < 1`.
    pub a1: Vec<usize>,
    /// Points with `δ(x,∅) > 0`.
    pub a2: Vec<usize>,
    pub a3: Option<SubsetWitness>,
    pub a4: Option<SubsetWitness>,
    /// Whether (A3)/(A4) were checked through their singleton reductions.
    pub reduced: bool,
    pub separated: bool,
    pub defaulted_masks: usize,
}

pub fn check_approach_axioms(t: &ApproachTable) -> ApproachReport {
    let n = t.len();
    let eps = t.eps;
    let a1: Vec<usize> = (0..n).filter(|&x| t.delta(x, 1 << x) < 1.0 - eps).collect();
    let a2: Vec<usize> = (0..n).filter(|&x| t.delta(x, 0) > eps).collect();
    let full = t.full_mask();

    let reduced_a3 = || (1..=full).filter(|m| m.count_ones() >= 2).find_map(|a| {
        let low = a & a.wrapping_neg();
        let rest = a ^ low;
        (0..n).find_map(|x| {
            let rhs = t.delta(x, low).max(t.delta(x, rest));
            ((t.delta(x, a) - rhs).abs() > eps).then(|| SubsetWitness { x, a: rest, b: low, lhs: t.delta(x, a), rhs })
        })
    });
    let a3 = if n > FULL_CHECK_CARRIER {
        reduced_a3()
    } else {
        (0..=full).into_par_iter().find_map_first(|a| {
            (0..=full).find_map(|b| {
                (0..n).find_map(|x| {
                    let rhs = t.delta(x, a).max(t.delta(x, b));
                    let lhs = t.delta(x, a | b);
                    ((lhs - rhs).abs() > eps).then_some(SubsetWitness { x, a, b, lhs, rhs })
                })
            })
        })
    };
    let reduced = n > FULL_CHECK_CARRIER && a3.is_none();

    let a4_at = |a: Mask, b: Mask| {
        let inf = members(b, n).map(|y| t.delta(y, a)).fold(1.0, f64::min);
        (0..n).find_map(|x| {
            let rhs = t.tnorm.conj(inf, t.delta(x, b));
            let lhs = t.delta(x, a);
            (lhs < rhs - eps).then_some(SubsetWitness { x, a, b, lhs, rhs })
        })
    };
    let a4 = if reduced {
        (0..=full).into_par_iter().find_map_first(|a| (0..n).find_map(|y| a4_at(a, 1 << y)))
    } else {
        (0..=full).into_par_iter().find_map_first(|a| (0..=full).find_map(|b| a4_at(a, b)))
    };

    let separated = (0..n).all(|x| {
        (0..n).all(|y| x == y || t.delta(x, 1 << y) < 1.0 - eps || t.delta(y, 1 << x) < 1.0 - eps)
    });
    ApproachReport {
        size: n,
        valid: a1.is_empty() && a2.is_empty() && a3.is_none() && a4.is_none(),
        a1,
        a2,
        a3,
        a4,
        reduced,
        separated,
        defaulted_masks: t.defaulted.len(),
    }
}

// ---------------------------------------------------------------------------
// Closure axioms

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosureReport {
    pub holds: bool,
    pub samples: usize,
    /// Names of the failing laws, each with the offending input.
    pub failures: Vec<(String, Vec<f64>)>,
    /// Largest deviation seen in (cl6), which should be exactly zero.
    pub cl6_max_error: f64,
}

/// Checks (cl1)–(cl6) for the closure of `T` on the sampled vectors, with
/// constants `p` from `scalars`.
pub fn check_closure_axioms(t: &ApproachTable, samples: &[Vec<f64>], scalars: &[f64], cl6_tol: f64) -> Result<ClosureReport> {
    let n = t.len();
    let eps = t.eps;
    let tn = &t.tnorm;
    let mut failures = Vec::new();
    let zero = vec![0.0; n];
    if t.closure(&zero)?.iter().any(|&v| v > eps) {
        failures.push(("cl1".into(), zero));
    }
    let closed: Vec<Vec<f64>> = samples.iter().map(|s| t.closure(s)).collect::<Result<_>>()?;
    let mut cl6_max_error = 0.0_f64;
    for (s, c) in samples.iter().zip(&closed) {
        if s.iter().zip(c).any(|(a, b)| a > &(b + eps)) {
            failures.push(("cl2".into(), s.clone()));
        }
        let cc = t.closure(c)?;
        if cc.iter().zip(c).any(|(a, b)| (a - b).abs() > eps) {
            failures.push(("cl4".into(), s.clone()));
        }
        for &p in scalars {
            let scaled: Vec<f64> = s.iter().map(|&v| tn.conj(p, v)).collect();
            let lhs = t.closure(&scaled)?;
            for (l, &cv) in lhs.iter().zip(c) {
                let err = (l - tn.conj(p, cv)).abs();
                cl6_max_error = cl6_max_error.max(err);
            }
        }
    }
    if cl6_max_error > cl6_tol {
        failures.push(("cl6".into(), Vec::new()));
    }
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            let (a, b) = (&samples[i], &samples[j]);
            let join: Vec<f64> = a.iter().zip(b).map(|(x, y)| x.max(*y)).collect();
            let lhs = t.closure(&join)?;
            if lhs.iter().zip(closed[i].iter().zip(&closed[j])).any(|(l, (x, y))| (l - x.max(*y)).abs() > eps) {
                failures.push(("cl3".into(), join));
            }
            if sub_values(tn, a, b) > sub_values(tn, &closed[i], &closed[j]) + eps {
                failures.push(("cl5".into(), a.clone()));
            }
        }
    }
    Ok(ClosureReport { holds: failures.is_empty(), samples: samples.len(), failures, cl6_max_error })
}

// ---------------------------------------------------------------------------
// Cotopologies

type Membership<'a> = Box<dyn Fn(&[f64]) -> bool + Sync + 'a>;

/// A family of closed sets given by membership.
pub struct CotopologyPredicate<'a> {
    tnorm: TNorm,
    n: usize,
    closed: Membership<'a>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CotopologyReport {
    pub holds: bool,
    pub strong: bool,
    pub closed_in_family: usize,
    /// First failing condition among C1–C5 with the offending vector.
    pub witness: Option<(String, Vec<f64>)>,
}

impl<'a> CotopologyPredicate<'a> {
    pub fn new(tnorm: TNorm, n: usize, closed: impl Fn(&[f64]) -> bool + Sync + 'a) -> Self {
        Self { tnorm, n, closed: Box::new(closed) }
    }

    /// `κ(δ)`.
    pub fn kappa(t: &'a ApproachTable) -> Self {
        Self::new(t.tnorm.clone(), t.len(), move |v| t.kappa_membership(v))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_closed(&self, v: &[f64]) -> bool {
        v.len() == self.n && (self.closed)(v)
    }

    /// `ζ(τ)(x, A)`: the closure of `1_A`, as the meet of the closed members
    /// of `family` above it.
    pub fn zeta(&self, family: &[Vec<f64>], elements: Vec<String>) -> Result<ApproachTable> {
        let n = self.n;
        if elements.len() != n {
            return Err(Error::CarrierMismatch { expected: n, found: elements.len() });
        }
        check_size(n)?;
        let closed: Vec<&Vec<f64>> = family.iter().filter(|v| self.is_closed(v)).collect();
        ApproachTable::from_fn(self.tnorm.clone(), elements, |x, mask| {
            closed
                .iter()
                .filter(|v| members(mask, n).all(|a| v[a] >= 1.0 - EPS))
                .map(|v| v[x])
                .fold(1.0, f64::min)
        })
    }

    /// Checks (C1)–(C5) on the closed members of `family`, with constants
    /// from `scalars`.
    pub fn check(&self, family: &[Vec<f64>], scalars: &[f64]) -> CotopologyReport {
        let closed: Vec<&Vec<f64>> = family.iter().filter(|v| self.is_closed(v)).collect();
        let t = &self.tnorm;
        let mut witness = None;
        let mut strong = true;
        let zero = vec![0.0; self.n];
        if !self.is_closed(&zero) {
            witness = Some(("C1".to_string(), zero));
        }
        'pairs: for (i, a) in closed.iter().enumerate() {
            for b in &closed[i + 1..] {
                let join: Vec<f64> = a.iter().zip(b.iter()).map(|(x, y)| x.max(*y)).collect();
                if !self.is_closed(&join) {
                    witness.get_or_insert(("C2".into(), join));
                    break 'pairs;
                }
                let meet: Vec<f64> = a.iter().zip(b.iter()).map(|(x, y)| x.min(*y)).collect();
                if !self.is_closed(&meet) {
                    witness.get_or_insert(("C3".into(), meet));
                    break 'pairs;
                }
            }
        }
        for a in &closed {
            for &p in scalars {
                let imp: Vec<f64> = a.iter().map(|&v| t.residuum(p, v)).collect();
                if !self.is_closed(&imp) {
                    witness.get_or_insert(("C4".into(), imp));
                }
                let con: Vec<f64> = a.iter().map(|&v| t.conj(p, v)).collect();
                if !self.is_closed(&con) {
                    strong = false;
                    witness.get_or_insert(("C5".into(), con));
                }
            }
        }
        let holds = witness.as_ref().is_none_or(|(c, _)| c == "C5");
        CotopologyReport { holds, strong, closed_in_family: closed.len(), witness }
    }
}

// ---------------------------------------------------------------------------
// Round trips

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundTripReport {
    /// `ζ(κ(T)) = T`.
    pub zeta_kappa: bool,
    pub zeta_kappa_max_error: f64,
    pub zeta_kappa_witness: Option<(usize, Mask)>,
    /// `κ(ζ(τ)) = τ` on the candidate family.
    pub kappa_zeta: bool,
    pub kappa_zeta_mismatch: Option<Vec<f64>>,
    /// `Ω(Γ(Ω(T))) = Ω(T)`.
    pub omega_gamma: bool,
    pub family_size: usize,
}

impl RoundTripReport {
    pub fn holds(&self) -> bool {
        self.zeta_kappa && self.kappa_zeta && self.omega_gamma
    }
}

/// Candidate closed sets: the grid vectors of pitch `1/m` together with
/// every column `δ(−, A)`.
pub fn candidate_family(t: &ApproachTable, m: usize) -> Vec<Vec<f64>> {
    let mut out = grid_vectors(t.len(), m);
    out.extend((0..=t.full_mask()).map(|a| t.column(a)));
    out
}

pub fn functor_round_trips(t: &ApproachTable, tau: &CotopologyPredicate<'_>, m: usize, tol: f64) -> Result<RoundTripReport> {
    let family = candidate_family(t, m);
    let kappa = CotopologyPredicate::kappa(t);
    let zk = kappa.zeta(&family, t.elements.clone())?;
    let n = t.len();
    let mut max_err = 0.0_f64;
    let mut zk_witness = None;
    for mask in 0..=t.full_mask() {
        for x in 0..n {
            let err = (zk.delta(x, mask) - t.delta(x, mask)).abs();
            if err > max_err {
                max_err = err;
            }
            if err > tol && zk_witness.is_none() {
                zk_witness = Some((x, mask));
            }
        }
    }

    let zt = tau.zeta(&family, t.elements.clone())?;
    let mismatch = family
        .par_iter()
        .find_first(|v| tau.is_closed(v) != zt.kappa_membership(v))
        .cloned();

    let omega = t.omega()?;
    let back = ApproachTable::gamma(&omega)?.omega()?;
    let omega_gamma = omega
        .table()
        .iter()
        .flatten()
        .zip(back.table().iter().flatten())
        .all(|(a, b)| (a - b).abs() <= t.eps);

    Ok(RoundTripReport {
        zeta_kappa: zk_witness.is_none(),
        zeta_kappa_max_error: max_err,
        zeta_kappa_witness: zk_witness,
        kappa_zeta: mismatch.is_none(),
        kappa_zeta_mismatch: mismatch,
        omega_gamma,
        family_size: family.len(),
    })
}

/// A discrete approach space on `n` points: `δ(x, A) = 1` iff `x ∈ A`.
pub fn discrete(t: TNorm, n: usize) -> Result<ApproachTable> {
    ApproachTable::from_fn(t, labels("x", n), |x, mask| if mask >> x & 1 == 1 { 1.0 } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point(t: TNorm, ab: f64) -> FiniteQOrder {
        FiniteQOrder::new(t, vec!["a".into(), "b".into()], vec![vec![1.0, ab], vec![0.0, 1.0]]).unwrap()
    }

    #[test]
    fn gamma_tables_pass() {
        let x = two_point(TNorm::godel(), 0.6);
        let g = ApproachTable::gamma(&x).unwrap();
        let r = check_approach_axioms(&g);
        assert!(r.valid, "{r:?}");
        assert_eq!(g.delta(0, 0b11), 1.0);
        assert_eq!(g.omega().unwrap(), x);
        let one = ApproachTable::gamma(&FiniteQOrder::chain(TNorm::godel(), 1)).unwrap();
        assert!(check_approach_axioms(&one).valid);
    }

    #[test]
    fn broken_tables_fail() {
        let x = two_point(TNorm::godel(), 0.6);
        let g = ApproachTable::gamma(&x).unwrap();
        let bad = ApproachTable::from_fn(TNorm::godel(), g.elements().to_vec(), |p, m| {
            if m == 0 { 0.2 } else { g.delta(p, m) }
        })
        .unwrap();
        let r = check_approach_axioms(&bad);
        assert!(!r.valid);
        assert_eq!(r.a2, vec![0, 1]);
    }

    #[test]
    fn space_k_values() {
        let k = space_k(&TNorm::godel(), 2).unwrap();
        assert_eq!(k.delta(2, 0b011), 1.0);
        assert!(check_approach_axioms(&k).valid);
        let l = TNorm::lukasiewicz();
        assert!((delta_k(&l, 0.3, &[0.5]) - 0.8).abs() < 1e-12);
        let omega = k.omega().unwrap();
        let snap = crate::interval::ParamStructure::new(TNorm::godel(), crate::interval::Shape::AlphaR)
            .grid_snapshot(2)
            .unwrap();
        assert_eq!(omega.table(), snap.table());
    }

    #[test]
    fn closure_examples() {
        let g = ApproachTable::gamma(&two_point(TNorm::godel(), 0.6)).unwrap();
        assert_eq!(g.closure(&[0.0, 0.8]).unwrap(), vec![0.6, 0.8]);
        assert_eq!(g.closure(&[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(g.closure(&[0.0, 1.0]).unwrap(), g.column(0b10));
    }

    #[test]
    fn kappa_examples() {
        let k = space_k(&TNorm::godel(), 2).unwrap();
        assert!(k.kappa_membership(&[0.0, 0.5, 1.0]));
        assert!(k.kappa_membership(&[0.3, 0.3, 0.3]));
        assert!(k.kappa_violation(&[1.0, 0.5, 0.0]).is_some());
        for a in 0..=k.full_mask() {
            assert!(k.kappa_membership(&k.column(a)));
        }
    }

    #[test]
    fn file_round_trip_and_defaults() {
        let text = r#"{"tnorm": {"pieces": []}, "elements": ["a","b"],
            "delta": {"1": [1, 0], "2": [0.6, 1]}}"#;
        let t = ApproachTable::from_json(text).unwrap();
        assert_eq!(t.defaulted_masks(), &[0, 3]);
        assert_eq!(t.delta(0, 3), 1.0);
        assert!(check_approach_axioms(&t).valid);
        let again = ApproachTable::from_file(t.to_file()).unwrap();
        assert_eq!(again.delta, t.delta);
        assert!(ApproachTable::from_json(r#"{"tnorm": {}, "elements": ["a"], "delta": {}}"#).is_err());
    }

    #[test]
    fn round_trips_on_gamma() {
        let x = FiniteQOrder::chain(TNorm::lukasiewicz(), 3);
        let g = ApproachTable::gamma(&x).unwrap();
        let tau = CotopologyPredicate::kappa(&g);
        let r = functor_round_trips(&g, &tau, 2, 0.0).unwrap();
        assert!(r.holds(), "{r:?}");
        let sub = g.subspace(&[0, 2]).unwrap();
        assert!(check_approach_axioms(&sub).valid);
    }
}
