//! The Scott [0,1]-cotopology and approach structure of a continuous
//! snapshot, sobriety witnesses, products, and the classification of
//! t-norms for which every continuous [0,1]-lattice is injective.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approach::{members, ApproachTable, Mask, APPROACH_MAX_CARRIER};
use crate::domain::{
    check_continuity, check_continuity_param, dl_failure_witness, forward_cauchy_weights, ideal_weight,
    is_forward_cauchy, way_below, way_below_param, Line, WayBelowTable,
};
use crate::error::{Error, Result};
use crate::interval::{ParamStructure, PROBE_TOL};
use crate::order::{sub_values, FiniteQOrder};
use crate::tnorm::{Exact, RegionKind, TNorm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SnapshotMode {
    /// A finite [0,1]-lattice, where `w` is computed by its defining meet.
    Finite,
    /// A grid of `([0,1], α_L)` or `([0,1], α_R)` carrying the closed-form `w`.
    Parametric,
}

type Probe<'a> = Box<dyn Fn(f64) -> f64 + 'a>;

/// A [0,1]-domain on a finite carrier together with its way-below table.
#[derive(Clone, Debug)]
pub struct ContinuousSnapshot {
    order: FiniteQOrder,
    w: WayBelowTable,
    param: Option<(ParamStructure, usize)>,
}

/// A forward Cauchy weight on the carrier with its supremum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FcMember {
    pub name: String,
    pub weight: Vec<f64>,
    pub supremum: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScottClosedReport {
    pub closed: bool,
    pub family_size: usize,
    /// Allowed excess of `sub(λ, φ)` over `φ(sup λ)`: `ε` on finite
    /// snapshots and the grid slack on parametric ones, where meets over the
    /// grid overestimate meets over the interval.
    pub tolerance: f64,
    /// Forward Cauchy weight `λ` with `sub(λ, φ) != φ(sup λ)`.
    pub witness: Option<String>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SobrietyWitness {
    pub lambda: Vec<f64>,
    /// `⇓λ = ⋁_a λ(a) & w(−,a)` on the carrier.
    pub down_lambda: Vec<f64>,
    pub forward_cauchy: bool,
    pub sup_point: Option<String>,
    /// `λ = X(−, sup ⇓λ)`.
    pub validates: bool,
    /// Number of closed sets the irreducibility precondition was tested on.
    pub irreducibility_family: usize,
}

impl ContinuousSnapshot {
    /// Accepts a finite snapshot that is a continuous [0,1]-lattice.
    pub fn finite(order: FiniteQOrder) -> Result<Self> {
        let report = check_continuity(&order)?;
        if !report.is_continuous_lattice {
            return Err(Error::Precondition("snapshot is not a continuous [0,1]-lattice".into()));
        }
        let w = way_below(&order)?;
        Ok(Self { order, w, param: None })
    }

    /// Grid of a parametric line whose continuity check passes at `grid_n`.
    pub fn parametric(s: ParamStructure, grid_n: usize) -> Result<Self> {
        let report = check_continuity_param(&s, grid_n, crate::EPS)?;
        if !report.is_continuous_lattice {
            return Err(Error::Precondition(format!("{} is not a continuous [0,1]-lattice", s.shape())));
        }
        let (order, w) = way_below_param(&s, grid_n)?;
        Ok(Self { order, w, param: Some((s, grid_n)) })
    }

    pub fn mode(&self) -> SnapshotMode {
        if self.param.is_some() {
            SnapshotMode::Parametric
        } else {
            SnapshotMode::Finite
        }
    }

    pub fn order(&self) -> &FiniteQOrder {
        &self.order
    }

    pub fn way_below(&self) -> &WayBelowTable {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    fn line(&self) -> Option<(Line<'_>, usize)> {
        self.param.as_ref().map(|(s, n)| (Line::of(s).expect("checked at construction"), *n))
    }

    fn value(&self, i: usize) -> f64 {
        let (_, n) = self.param.as_ref().expect("parametric");
        i as f64 / *n as f64
    }

    fn samples(&self) -> Vec<f64> {
        let (s, n) = self.param.as_ref().expect("parametric");
        s.continuum_samples(*n)
    }

    /// Forward Cauchy weights of the carrier: all of them in finite mode,
    /// and `{X(−,a), d(a)}` for grid `a` in parametric mode.
    pub fn fc_family(&self) -> Result<Vec<FcMember>> {
        let x = &self.order;
        if self.param.is_some() {
            let mut out = Vec::new();
            for a in 0..x.len() {
                out.push(FcMember { name: format!("X(-,{})", x.label(a)), weight: x.yoneda(a).into_values(), supremum: a });
                out.push(FcMember { name: format!("d({})", x.label(a)), weight: self.w.column(a), supremum: a });
            }
            return Ok(out);
        }
        forward_cauchy_weights(x)
            .into_iter()
            .map(|fc| {
                let supremum = fc.supremum.ok_or_else(|| Error::Precondition("forward Cauchy weight without supremum".into()))?;
                let names: Vec<&str> = fc.ideal.iter().map(|&i| x.label(i)).collect();
                Ok(FcMember { name: format!("ideal {{{}}}", names.join(",")), weight: fc.weight, supremum })
            })
            .collect()
    }

    fn check_weight(&self, phi: &[f64]) -> Result<()> {
        if phi.len() != self.len() {
            return Err(Error::CarrierMismatch { expected: self.len(), found: phi.len() });
        }
        if !self.order.is_weight(phi) {
            return Err(Error::InvalidWeight("not a weight over this snapshot".into()));
        }
        Ok(())
    }

    /// `sub(λ, φ) = φ(sup λ)` for every forward Cauchy `λ` of the family.
    ///
    /// On parametric snapshots `φ` is read as the weight it generates on the
    /// whole interval, `z ↦ ⋁_c φ(c) & X(z,c)`, and meets run over the
    /// interval samples.
    pub fn is_scott_closed(&self, phi: &[f64]) -> Result<ScottClosedReport> {
        self.check_weight(phi)?;
        match self.line() {
            Some((line, _)) => {
                let ext = self.extension(line, phi);
                Ok(self.closed_against_family(&ext, &|a| phi[a], PROBE_TOL))
            }
            None => {
                let family = self.fc_family()?;
                let t = self.order.tnorm();
                let eps = self.order.eps();
                for m in &family {
                    let lhs = sub_values(t, &m.weight, phi);
                    let rhs = phi[m.supremum];
                    if (lhs - rhs).abs() > eps {
                        return Ok(ScottClosedReport {
                            closed: false,
                            family_size: family.len(),
                            tolerance: eps,
                            witness: Some(m.name.clone()),
                            lhs,
                            rhs,
                        });
                    }
                }
                Ok(ScottClosedReport { closed: true, family_size: family.len(), tolerance: eps, witness: None, lhs: 0.0, rhs: 0.0 })
            }
        }
    }

    /// Scott closedness of a weight given on the whole interval, for
    /// parametric snapshots.
    pub fn is_scott_closed_fn(&self, phi: &(dyn Fn(f64) -> f64 + Sync)) -> Result<ScottClosedReport> {
        if self.param.is_none() {
            return Err(Error::Unsupported("function weights on finite snapshots".into()));
        }
        Ok(self.closed_against_family(phi, &|a| phi(self.value(a)), PROBE_TOL))
    }

    fn extension<'b>(&'b self, line: Line<'b>, phi: &'b [f64]) -> impl Fn(f64) -> f64 + Sync + 'b {
        move |z| (0..phi.len()).map(|c| line.t.conj(phi[c], line.hom(z, self.value(c)))).fold(0.0, f64::max)
    }

    fn sub_samples(&self, lambda: &dyn Fn(f64) -> f64, phi: &dyn Fn(f64) -> f64) -> f64 {
        let t = self.order.tnorm();
        self.samples().iter().map(|&z| t.residuum(lambda(z), phi(z))).fold(1.0, f64::min)
    }

    fn closed_against_family(
        &self,
        phi: &(dyn Fn(f64) -> f64 + Sync),
        at: &dyn Fn(usize) -> f64,
        tol: f64,
    ) -> ScottClosedReport {
        let (line, _) = self.line().expect("parametric");
        let n = self.len();
        for a in 0..n {
            let av = self.value(a);
            let members: [(String, Probe); 2] = [
                (format!("X(-,{})", self.order.label(a)), Box::new(move |z| line.hom(z, av))),
                (format!("d({})", self.order.label(a)), Box::new(move |z| line.d(av, z))),
            ];
            for (name, lambda) in &members {
                let lhs = self.sub_samples(lambda.as_ref(), phi);
                let rhs = at(a);
                if (lhs - rhs).abs() > tol {
                    return ScottClosedReport { closed: false, family_size: 2 * n, tolerance: tol, witness: Some(name.clone()), lhs, rhs };
                }
            }
        }
        ScottClosedReport { closed: true, family_size: 2 * n, tolerance: tol, witness: None, lhs: 0.0, rhs: 0.0 }
    }

    /// Least Scott closed weight above `φ`: `a ↦ sub(w(−,a), φ)`.
    pub fn scott_closure(&self, phi: &[f64]) -> Result<Vec<f64>> {
        self.check_weight(phi)?;
        let t = self.order.tnorm();
        match self.line() {
            Some((line, _)) => {
                let ext = self.extension(line, phi);
                Ok((0..self.len()).map(|a| {
                    let av = self.value(a);
                    self.sub_samples(&|z| line.d(av, z), &ext)
                }).collect())
            }
            None => Ok((0..self.len()).map(|a| sub_values(t, &self.w.column(a), phi)).collect()),
        }
    }

    /// Scott distance from `x` to a set: the Scott closure of the weight
    /// generated by the set, at `x`.
    pub fn sigma_delta(&self, x: usize, set: &[usize]) -> Result<f64> {
        let n = self.len();
        if let Some(&bad) = set.iter().chain([&x]).find(|&&i| i >= n) {
            return Err(Error::UnknownElement(bad.to_string()));
        }
        if set.is_empty() {
            return Ok(0.0);
        }
        let phi = ideal_weight(&self.order, set);
        match self.line() {
            Some((line, _)) => {
                let xv = self.value(x);
                Ok(self.sub_samples(&|z| line.d(xv, z), &self.extension(line, &phi)))
            }
            None => Ok(sub_values(self.order.tnorm(), &self.w.column(x), &phi)),
        }
    }

    /// The Scott approach structure as a table.
    pub fn sigma_table(&self) -> Result<ApproachTable> {
        let n = self.len();
        if n > APPROACH_MAX_CARRIER {
            return Err(Error::TooLarge { size: n, limit: APPROACH_MAX_CARRIER });
        }
        let mut cache = Vec::with_capacity(n << n);
        for mask in 0..(1 as Mask) << n {
            let set: Vec<usize> = members(mask, n).collect();
            for x in 0..n {
                cache.push(self.sigma_delta(x, &set)?);
            }
        }
        ApproachTable::from_fn(self.order.tnorm().clone(), self.order.elements().to_vec(), |x, mask| {
            cache[mask as usize * n + x]
        })
        .map(|t| t.with_eps(self.order.eps()))
    }

    /// Closed sets used to test irreducibility: `p → X(−,a)` and `p & X(−,a)`
    /// for `p` in the quarter grid.
    pub fn irreducibility_family(&self) -> Vec<Vec<f64>> {
        let x = &self.order;
        let t = x.tnorm();
        let mut out = vec![vec![0.0; x.len()]];
        for a in 0..x.len() {
            let y = x.yoneda(a).into_values();
            for p in [0.25, 0.5, 0.75, 1.0] {
                out.push(y.iter().map(|&v| t.residuum(p, v)).collect());
                out.push(y.iter().map(|&v| t.conj(p, v)).collect());
            }
        }
        out.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
        out.dedup();
        out
    }

    /// Builds `⇓λ`, checks it is forward Cauchy, and compares `λ` with the
    /// representable at its supremum.
    pub fn sobriety_witness(&self, lambda: &[f64]) -> Result<SobrietyWitness> {
        self.check_weight(lambda)?;
        let x = &self.order;
        let t = x.tnorm();
        let eps = x.eps();
        if lambda.iter().all(|&v| v < 1.0 - eps) {
            return Err(Error::Precondition("λ is not inhabited".into()));
        }
        if !self.is_scott_closed(lambda)?.closed {
            return Err(Error::Precondition("λ is not Scott closed".into()));
        }
        let family = self.irreducibility_family();
        let subs: Vec<f64> = family.iter().map(|f| sub_values(t, lambda, f)).collect();
        for i in 0..family.len() {
            for j in i + 1..family.len() {
                let join: Vec<f64> = family[i].iter().zip(&family[j]).map(|(a, b)| a.max(*b)).collect();
                if sub_values(t, lambda, &join) > subs[i].max(subs[j]) + eps {
                    return Err(Error::Precondition("λ is reducible among the sampled closed sets".into()));
                }
            }
        }
        let n = x.len();
        let down: Vec<f64> =
            (0..n).map(|z| (0..n).map(|a| t.conj(lambda[a], self.w.get(z, a))).fold(0.0, f64::max)).collect();

        let (forward_cauchy, sup) = match self.line() {
            None => {
                let fc = is_forward_cauchy(x, &down, 0)?.forward_cauchy;
                (fc, x.supremum(&down).found)
            }
            Some((line, _)) => {
                let samples = self.samples();
                let down_at = |z: f64| (0..n).map(|a| t.conj(lambda[a], line.d(self.value(a), z))).fold(0.0, f64::max);
                let dv: Vec<f64> = samples.iter().map(|&z| down_at(z)).collect();
                let member = (0..n).find(|&a| {
                    let av = self.value(a);
                    let close = |f: &dyn Fn(f64) -> f64| samples.iter().zip(&dv).all(|(&z, &v)| (f(z) - v).abs() <= PROBE_TOL);
                    close(&|z| line.d(av, z)) || close(&|z| line.hom(z, av))
                });
                let sup = (0..n).find(|&s| {
                    (0..n).all(|y| {
                        let yv = self.value(y);
                        let sub = samples.iter().zip(&dv).map(|(&z, &v)| t.residuum(v, line.hom(z, yv))).fold(1.0, f64::min);
                        (x.hom(s, y) - sub).abs() <= PROBE_TOL
                    })
                });
                (member.is_some() && member == sup, sup)
            }
        };
        let validates = forward_cauchy
            && sup.is_some_and(|s| (0..n).all(|z| (lambda[z] - x.hom(z, s)).abs() <= eps));
        Ok(SobrietyWitness {
            lambda: lambda.to_vec(),
            down_lambda: down,
            forward_cauchy,
            sup_point: sup.map(|s| x.label(s).to_string()),
            validates,
            irreducibility_family: family.len(),
        })
    }
}

// ---------------------------------------------------------------------------
// Products

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SigmaProductReport {
    pub k: usize,
    pub size: usize,
    pub equal: bool,
    pub max_error: f64,
    /// Point and subset of the power where the two tables differ.
    pub witness: Option<(String, Mask)>,
    /// Number of Scott closed weights used as cylinder bases.
    pub basis_size: usize,
}

/// Compares the Scott structure of `X^k` with the `k`-fold product of the
/// Scott structure of `X`.
///
/// The product side takes, for each subset `A`, the meet of all joins
/// `⋁_i ψ_i ∘ π_i` above `1_A`, with `ψ_i` ranging over the Scott closed
/// weights `⋁_{s∈S} X(−,s)`. Any basic closed set above `1_A` can be shrunk
/// to one of these, so the meet is the product closure of `1_A`.
pub fn sigma_product_check(cs: &ContinuousSnapshot, k: usize) -> Result<SigmaProductReport> {
    if cs.mode() != SnapshotMode::Finite {
        return Err(Error::Unsupported("product check on parametric snapshots".into()));
    }
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let x = cs.order();
    let n = x.len();
    let size = (0..k).try_fold(1usize, |acc, _| acc.checked_mul(n)).unwrap_or(usize::MAX);
    if size > APPROACH_MAX_CARRIER {
        return Err(Error::TooLarge { size, limit: APPROACH_MAX_CARRIER });
    }
    let t = x.tnorm();
    let power = FiniteQOrder::product(t, &vec![x.clone(); k])?;
    let left = ContinuousSnapshot::finite(power.clone())?.sigma_table()?;

    let mut basis: Vec<Vec<f64>> = (0..1u32 << n)
        .map(|m| ideal_weight(x, &members(m, n).collect::<Vec<_>>()))
        .collect();
    basis.sort_by(|a, b| a.iter().zip(b).map(|(p, q)| p.total_cmp(q)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    basis.dedup();
    for b in &basis {
        if !cs.is_scott_closed(b)?.closed {
            return Err(Error::Precondition("cylinder basis weight is not Scott closed".into()));
        }
    }
    let sizes = vec![n; k];
    let coords: Vec<Vec<usize>> = (0..size).map(|i| FiniteQOrder::product_coords(&sizes, i)).collect();
    let mut cylinders = Vec::new();
    let mut choice = vec![0usize; k];
    loop {
        cylinders.push(
            coords.iter().map(|c| (0..k).map(|i| basis[choice[i]][c[i]]).fold(0.0, f64::max)).collect::<Vec<f64>>(),
        );
        let mut i = 0;
        while i < k && choice[i] + 1 == basis.len() {
            choice[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
        choice[i] += 1;
    }
    let right = ApproachTable::from_fn(t.clone(), power.elements().to_vec(), |p, mask| {
        cylinders
            .iter()
            .filter(|v| members(mask, size).all(|a| v[a] >= 1.0 - crate::EPS))
            .map(|v| v[p])
            .fold(1.0, f64::min)
    })?;

    let mut max_error = 0.0_f64;
    let mut witness = None;
    for mask in 0..=left.full_mask() {
        for p in 0..size {
            let err = (left.delta(p, mask) - right.delta(p, mask)).abs();
            max_error = max_error.max(err);
            if err > x.eps() && witness.is_none() {
                witness = Some((power.label(p).to_string(), mask));
            }
        }
    }
    Ok(SigmaProductReport { k, size, equal: witness.is_none(), max_error, witness, basis_size: basis.len() })
}

// ---------------------------------------------------------------------------
// Injectivity

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    InjectiveAllContinuousLattices,
    Counterexample,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainStep {
    pub x: f64,
    /// `(q → x) → p`, an upper bound for any extension at `x`.
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// `α_L(x,y) = α_R(1−x, 1−y)` and `x → 0 = 1 − x` on the grid, in exact
    /// arithmetic.
    Isomorphism { grid_n: usize, pairs_checked: usize, max_error: f64 },
    /// The map `p ↦ q, q ↦ p` on the subspace `{p, q}` of 𝕂 has no
    /// continuous extension: every extension satisfies `f(x) <= (q → x) → p`
    /// on `(p, q)`, so its values right of `p` stay at most `p < q`.
    NonExtendable { p: f64, q: f64, grid_n: usize, chain: Vec<ChainStep>, sup_bound: f64 },
    /// `([0,1], α_L)` is not a continuous [0,1]-lattice.
    NonContinuous { t: f64, p: f64, q: f64, grid_n: usize, infimum: f64, residuum: f64 },
    Unclassified { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InjectivityVerdict {
    pub tnorm: TNorm,
    pub verdict: Verdict,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateCheck {
    pub valid: bool,
    pub verdict: Verdict,
    pub detail: String,
}

fn isomorphism_error(t: &TNorm, grid_n: usize) -> Result<(usize, f64)> {
    let e = t.to_exact()?;
    let grid: Vec<Exact> = e.grid(grid_n);
    let one = Exact::one();
    let mut worst = Exact::zero();
    for x in &grid {
        let f = e.residuum(*x, Exact::zero());
        worst = worst.max((f - (one - x)).abs());
        for y in &grid {
            let left = e.residuum(*x, *y);
            let right = e.residuum(one - y, one - x);
            worst = worst.max((left - right).abs());
        }
    }
    let err = *worst.numer() as f64 / *worst.denom() as f64;
    Ok((grid.len() * grid.len(), err))
}

fn extension_chain(t: &TNorm, p: f64, q: f64, grid_n: usize) -> Vec<ChainStep> {
    (0..=grid_n)
        .map(|i| i as f64 / grid_n as f64)
        .filter(|&x| x > p && x < q)
        .map(|x| ChainStep { x, bound: t.residuum(t.residuum(q, x), p) })
        .collect()
}

/// First region that is not Łukasiewicz, as adjacent idempotents `(p, q)`.
pub fn first_non_lukasiewicz_region(t: &TNorm) -> Option<(f64, f64)> {
    t.regions().into_iter().find(|r| r.kind != RegionKind::Lukasiewicz).map(|r| (r.lo, r.hi))
}

/// Decides whether every continuous [0,1]-lattice is injective under `t`,
/// returning a replayable certificate.
pub fn classify_injectivity(t: &TNorm, grid_n: usize, eps: f64) -> Result<InjectivityVerdict> {
    if grid_n == 0 {
        return Err(Error::Precondition("grid needs n >= 1".into()));
    }
    let (verdict, certificate) = if t.is_lukasiewicz(eps) {
        let exact = TNorm::lukasiewicz();
        let (pairs_checked, max_error) = isomorphism_error(&exact, grid_n)?;
        let verdict = if max_error == 0.0 { Verdict::InjectiveAllContinuousLattices } else { Verdict::Inconclusive };
        (verdict, Certificate::Isomorphism { grid_n, pairs_checked, max_error })
    } else if !t.satisfies_condition_s() {
        let w = dl_failure_witness(t, grid_n).expect("non-(S) t-norms have an interior Łukasiewicz piece");
        let verdict = if w.infimum < w.residuum - eps { Verdict::Counterexample } else { Verdict::Inconclusive };
        (verdict, Certificate::NonContinuous { t: w.t, p: w.p, q: w.q, grid_n, infimum: w.infimum, residuum: w.residuum })
    } else {
        match first_non_lukasiewicz_region(t) {
            Some((p, q)) if q - p > eps => {
                let chain = extension_chain(t, p, q, grid_n);
                let sup_bound = chain.iter().map(|s| s.bound).fold(f64::NEG_INFINITY, f64::max);
                let verdict =
                    if !chain.is_empty() && sup_bound <= p + eps { Verdict::Counterexample } else { Verdict::Inconclusive };
                (verdict, Certificate::NonExtendable { p, q, grid_n, chain, sup_bound })
            }
            Some((p, q)) => (
                Verdict::Inconclusive,
                Certificate::Unclassified { reason: format!("non-Łukasiewicz region [{p}, {q}] is narrower than ε") },
            ),
            None => (Verdict::Inconclusive, Certificate::Unclassified { reason: "no non-Łukasiewicz region".into() }),
        }
    };
    Ok(InjectivityVerdict { tnorm: t.clone(), verdict, certificate })
}

/// Recomputes every recorded quantity of a certificate and the verdict it
/// supports.
pub fn verify_certificate(v: &InjectivityVerdict, eps: f64) -> Result<CertificateCheck> {
    let t = &v.tnorm;
    let close = |a: f64, b: f64| (a - b).abs() <= eps;
    let (ok, verdict, detail) = match &v.certificate {
        Certificate::Isomorphism { grid_n, pairs_checked, max_error } => {
            let (pairs, err) = isomorphism_error(t, *grid_n)?;
            let ok = t.is_lukasiewicz(eps) && pairs == *pairs_checked && err == *max_error && err == 0.0;
            (ok, Verdict::InjectiveAllContinuousLattices, format!("{pairs} grid pairs, max error {err}"))
        }
        Certificate::NonContinuous { t: probe, p, q, grid_n, infimum, residuum } => {
            let w = dl_failure_witness(t, *grid_n)
                .ok_or_else(|| Error::Precondition("t-norm has no interior Łukasiewicz piece".into()))?;
            let ok = close(w.t, *probe)
                && close(w.p, *p)
                && close(w.q, *q)
                && close(w.infimum, *infimum)
                && close(w.residuum, *residuum)
                && w.infimum <= w.p + 1.0 / *grid_n as f64
                && w.infimum < w.residuum - eps;
            (ok, Verdict::Counterexample, format!("inf {} <= {} < {}", w.infimum, w.p, w.residuum))
        }
        Certificate::NonExtendable { p, q, grid_n, chain, sup_bound } => {
            let fresh = extension_chain(t, *p, *q, *grid_n);
            let same = fresh.len() == chain.len()
                && fresh.iter().zip(chain).all(|(a, b)| close(a.x, b.x) && close(a.bound, b.bound));
            let sup = fresh.iter().map(|s| s.bound).fold(f64::NEG_INFINITY, f64::max);
            let ok = same
                && t.is_idempotent(*p)
                && t.is_idempotent(*q)
                && p < q
                && close(sup, *sup_bound)
                && sup <= p + eps;
            (ok, Verdict::Counterexample, format!("sup of bounds on ({p}, {q}) is {sup}, target {q}"))
        }
        Certificate::Unclassified { reason } => (true, Verdict::Inconclusive, reason.clone()),
    };
    let valid = ok && verdict == v.verdict;
    Ok(CertificateCheck { valid, verdict: if ok { verdict } else { Verdict::Inconclusive }, detail })
}

/// The isomorphism check on a grid, computed in parallel over rows in
/// floating point; used to cross-check the exact certificate.
pub fn isomorphism_float_error(t: &TNorm, grid_n: usize) -> f64 {
    (0..=grid_n)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 / grid_n as f64;
            (0..=grid_n)
                .map(|j| {
                    let y = j as f64 / grid_n as f64;
                    (t.residuum(x, y) - t.residuum(1.0 - y, 1.0 - x)).abs()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Shape;
    use crate::tnorm::Archetype;

    fn grid_r(t: TNorm, n: usize) -> ContinuousSnapshot {
        ContinuousSnapshot::parametric(ParamStructure::new(t, Shape::AlphaR), n).unwrap()
    }

    #[test]
    fn representables_are_scott_closed() {
        let cs = grid_r(TNorm::godel(), 4);
        for a in 0..cs.len() {
            assert!(cs.is_scott_closed(cs.order().yoneda(a).values()).unwrap().closed);
        }
        let line = |z: f64| crate::interval::d_alpha_r(&TNorm::godel(), 0.5, z);
        let r = cs.is_scott_closed_fn(&line).unwrap();
        assert!(!r.closed && r.witness.is_some());
    }

    #[test]
    fn finite_collapse() {
        let x = ParamStructure::new(TNorm::lukasiewicz(), Shape::AlphaR).grid_snapshot(3).unwrap();
        let cs = ContinuousSnapshot::finite(x.clone()).unwrap();
        let sigma = cs.sigma_table().unwrap();
        let gamma = ApproachTable::gamma(&x).unwrap();
        for m in 0..=sigma.full_mask() {
            for p in 0..x.len() {
                assert!((sigma.delta(p, m) - gamma.delta(p, m)).abs() < 1e-12);
            }
        }
        let phi = x.yoneda(1).join(&x.yoneda(2));
        assert_eq!(cs.scott_closure(phi.values()).unwrap(), phi.values());
    }

    #[test]
    fn sigma_delta_examples() {
        let cs = grid_r(TNorm::godel(), 10);
        assert_eq!(cs.sigma_delta(8, &[5]).unwrap(), 1.0);
        assert_eq!(cs.sigma_delta(3, &[]).unwrap(), 0.0);
        for x in 0..cs.len() {
            for a in 0..cs.len() {
                assert!((cs.sigma_delta(x, &[a]).unwrap() - cs.order().hom(x, a)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn sobriety_on_representables() {
        let cs = grid_r(TNorm::godel(), 8);
        for b in 0..cs.len() {
            let w = cs.sobriety_witness(cs.order().yoneda(b).values()).unwrap();
            assert!(w.validates, "{b}: {w:?}");
            assert_eq!(w.sup_point.as_deref(), Some(cs.order().label(b)));
        }
        assert!(cs.sobriety_witness(&vec![0.0; cs.len()]).is_err());
    }

    #[test]
    fn products() {
        let chain = ContinuousSnapshot::finite(FiniteQOrder::chain(TNorm::godel(), 2)).unwrap();
        for k in 1..=2 {
            let r = sigma_product_check(&chain, k).unwrap();
            assert!(r.equal, "{r:?}");
        }
        assert!(matches!(sigma_product_check(&chain, 4), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn classification() {
        let l = classify_injectivity(&TNorm::lukasiewicz(), 100, 1e-9).unwrap();
        assert_eq!(l.verdict, Verdict::InjectiveAllContinuousLattices);
        assert!(verify_certificate(&l, 1e-9).unwrap().valid);
        let g = classify_injectivity(&TNorm::godel(), 100, 1e-9).unwrap();
        assert_eq!(g.verdict, Verdict::Counterexample);
        match &g.certificate {
            Certificate::NonExtendable { p, q, sup_bound, .. } => assert_eq!((*p, *q, *sup_bound), (0.0, 1.0, 0.0)),
            other => panic!("{other:?}"),
        }
        let s = TNorm::ordinal_sum(&[(0.25, 0.5, Archetype::Lukasiewicz)]).unwrap();
        let v = classify_injectivity(&s, 100, 1e-9).unwrap();
        assert!(matches!(v.certificate, Certificate::NonContinuous { t, .. } if t == 0.4));
        assert!(verify_certificate(&v, 1e-9).unwrap().valid);
        let mut forged = g.clone();
        if let Certificate::NonExtendable { sup_bound, .. } = &mut forged.certificate {
            *sup_bound = 0.5;
        }
        assert!(!verify_certificate(&forged, 1e-9).unwrap().valid);
    }
}
