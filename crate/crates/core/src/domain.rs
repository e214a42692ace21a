//! Forward Cauchy weights, the way-below relation, and continuity checks over
//! finite snapshots and parametric interval structures.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{d_alpha_l, d_alpha_r, one_sided_limit, ParamStructure, Point, Shape, Side, PROBE_TOL};
use crate::order::{sub_values, FiniteQOrder, QMap, Weight};
use crate::tnorm::{Archetype, TNorm};

/// Largest carrier for which ideals are enumerated as subsets.
pub const IDEAL_ENUM_LIMIT: usize = 12;
/// Default bounds of the irreducibility oracle.
pub const ORACLE_MAX_CARRIER: usize = 4;
pub const ORACLE_MAX_GRID: usize = 4;

/// One-sided tolerance for grid comparisons: `max(1/n, ε)`.
pub fn slack(grid_n: usize, eps: f64) -> f64 {
    (1.0 / grid_n.max(1) as f64).max(eps)
}

// ---------------------------------------------------------------------------
// Underlying order

/// Least upper bound of `a` and `b` in the underlying preorder, if any.
pub fn underlying_join(x: &FiniteQOrder, a: usize, b: usize) -> Option<usize> {
    let ups: Vec<usize> = (0..x.len()).filter(|&u| x.leq(a, u) && x.leq(b, u)).collect();
    ups.iter().copied().find(|&u| ups.iter().all(|&v| x.leq(u, v)))
}

pub fn underlying_bottom(x: &FiniteQOrder) -> Option<usize> {
    (0..x.len()).find(|&b| (0..x.len()).all(|y| x.leq(b, y)))
}

/// Join of a nonempty subset in the underlying preorder, if any.
pub fn underlying_join_of(x: &FiniteQOrder, set: &[usize]) -> Option<usize> {
    let ups: Vec<usize> = (0..x.len()).filter(|&u| set.iter().all(|&s| x.leq(s, u))).collect();
    ups.iter().copied().find(|&u| ups.iter().all(|&v| x.leq(u, v)))
}

/// Completeness of a finite snapshot, checked at the resolution it offers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Completeness {
    pub separated: bool,
    /// The underlying order has a bottom and all binary joins.
    pub underlying_lattice: bool,
    /// Every join of two representables has a supremum.
    pub conical_joins: bool,
}

impl Completeness {
    pub fn is_complete(&self) -> bool {
        self.separated && self.underlying_lattice && self.conical_joins
    }
}

pub fn completeness(x: &FiniteQOrder) -> Completeness {
    let n = x.len();
    let pairs = || (0..n).flat_map(move |a| (a..n).map(move |b| (a, b)));
    let underlying_lattice =
        n > 0 && underlying_bottom(x).is_some() && pairs().all(|(a, b)| underlying_join(x, a, b).is_some());
    let conical_joins = pairs().all(|(a, b)| {
        let phi = x.yoneda(a).join(&x.yoneda(b));
        x.supremum(phi.values()).found.is_some()
    });
    Completeness { separated: x.is_separated(), underlying_lattice, conical_joins }
}

pub fn is_snapshot_complete(x: &FiniteQOrder) -> bool {
    completeness(x).is_complete()
}

fn is_lower(x: &FiniteQOrder, members: &[bool]) -> bool {
    (0..x.len()).all(|y| !members[y] || (0..x.len()).all(|z| !x.leq(z, y) || members[z]))
}

/// Nonempty subset in which any two members have an upper bound inside it.
pub fn is_directed(x: &FiniteQOrder, set: &[usize]) -> bool {
    !set.is_empty()
        && set.iter().all(|&a| set.iter().all(|&b| set.iter().any(|&c| x.leq(a, c) && x.leq(b, c))))
}

/// All ideals (directed lower sets) of the underlying order. Enumerates
/// subsets up to `IDEAL_ENUM_LIMIT` points and falls back to principal
/// downsets beyond, which is exact on finite carriers.
pub fn ideals(x: &FiniteQOrder) -> Vec<Vec<usize>> {
    let n = x.len();
    let mut out: Vec<Vec<usize>> = Vec::new();
    if n <= IDEAL_ENUM_LIMIT {
        for mask in 1u32..(1u32 << n) {
            let members: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let set: Vec<usize> = (0..n).filter(|&i| members[i]).collect();
            if is_lower(x, &members) && is_directed(x, &set) {
                out.push(set);
            }
        }
    } else {
        for d in 0..n {
            let set: Vec<usize> = (0..n).filter(|&z| x.leq(z, d)).collect();
            if !out.contains(&set) {
                out.push(set);
            }
        }
    }
    out
}

/// `⋁_{d∈D} X(−,d)`.
pub fn ideal_weight(x: &FiniteQOrder, ideal: &[usize]) -> Vec<f64> {
    (0..x.len())
        .map(|z| ideal.iter().map(|&d| x.hom(z, d)).fold(0.0, f64::max))
        .collect()
}

/// A forward Cauchy weight with the ideal it comes from and its supremum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ForwardCauchy {
    pub ideal: Vec<usize>,
    pub weight: Vec<f64>,
    pub supremum: Option<usize>,
}

pub fn forward_cauchy_weights(x: &FiniteQOrder) -> Vec<ForwardCauchy> {
    ideals(x)
        .into_iter()
        .map(|ideal| {
            let weight = ideal_weight(x, &ideal);
            let supremum = x.supremum(&weight).found;
            ForwardCauchy { ideal, weight, supremum }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Forward Cauchy recognition

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FcMode {
    IdealDerived,
    IrreducibilityCertified,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleVerdict {
    pub grid_n: usize,
    pub inhabited: bool,
    pub irreducible: bool,
    /// A grid pair `(φ₁, φ₂)` on which irreducibility fails.
    pub witness: Option<(Vec<f64>, Vec<f64>)>,
}

impl OracleVerdict {
    pub fn forward_cauchy(&self) -> bool {
        self.inhabited && self.irreducible
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ForwardCauchyReport {
    pub forward_cauchy: bool,
    pub mode: FcMode,
    /// `Λ(φ) = {x : φ(x) = 1}`.
    pub ideal: Vec<usize>,
    pub directed: bool,
    pub join_identity: bool,
    pub oracle: Option<OracleVerdict>,
    /// Ideal path and oracle agree (true when the oracle did not run).
    pub agree: bool,
}

/// Inhabited-and-irreducible test against all grid-quantized weight pairs.
pub struct FcOracle<'a> {
    x: &'a FiniteQOrder,
    grid_n: usize,
    family: Vec<Weight>,
}

impl<'a> FcOracle<'a> {
    pub fn new(x: &'a FiniteQOrder, grid_n: usize) -> Self {
        Self { x, grid_n, family: x.grid_weights(grid_n) }
    }

    pub fn family_size(&self) -> usize {
        self.family.len()
    }

    pub fn verdict(&self, phi: &[f64]) -> OracleVerdict {
        let x = self.x;
        let t = x.tnorm();
        let inhabited = phi.iter().any(|&v| v >= 1.0 - x.eps());
        let subs: Vec<f64> = self.family.iter().map(|w| sub_values(t, phi, w.values())).collect();
        let mut witness = None;
        'outer: for i in 0..self.family.len() {
            for j in i + 1..self.family.len() {
                let joined = self.family[i].join(&self.family[j]);
                let lhs = sub_values(t, phi, joined.values());
                if lhs > subs[i].max(subs[j]) + x.eps() {
                    witness = Some((self.family[i].values().to_vec(), self.family[j].values().to_vec()));
                    break 'outer;
                }
            }
        }
        OracleVerdict { grid_n: self.grid_n, inhabited, irreducible: witness.is_none(), witness }
    }
}

/// Decides whether `φ` is forward Cauchy via its ideal `Λ(φ)`, and
/// cross-checks with the irreducibility oracle when the carrier and grid
/// are within the oracle bounds.
pub fn is_forward_cauchy(x: &FiniteQOrder, phi: &[f64], grid_n: usize) -> Result<ForwardCauchyReport> {
    if !x.is_weight(phi) {
        return Err(Error::InvalidWeight("not a weight over this structure".into()));
    }
    let ideal: Vec<usize> = (0..x.len()).filter(|&i| phi[i] >= 1.0 - x.eps()).collect();
    let directed = is_directed(x, &ideal);
    let join_identity = ideal_weight(x, &ideal).iter().zip(phi).all(|(&a, &b)| x.approx_eq(a, b));
    let fc = directed && join_identity;
    let oracle = (x.len() <= ORACLE_MAX_CARRIER && grid_n <= ORACLE_MAX_GRID && grid_n > 0)
        .then(|| FcOracle::new(x, grid_n).verdict(phi));
    let agree = oracle.as_ref().is_none_or(|o| o.forward_cauchy() == fc);
    Ok(ForwardCauchyReport { forward_cauchy: fc, mode: FcMode::IdealDerived, ideal, directed, join_identity, oracle, agree })
}

// ---------------------------------------------------------------------------
// Way-below

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WayBelowMode {
    /// Defining meet over all forward Cauchy weights.
    Finite,
    /// Closed-form `d` maps restricted to a grid.
    Parametric,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WayBelowTable {
    mode: WayBelowMode,
    n: usize,
    w: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WayBelowLaws {
    pub holds: bool,
    pub max_violation: f64,
    /// `(x, y)` with `w(x,y) > X(x,y)`.
    pub property_i: Option<(usize, usize)>,
    /// `(x, y, z)` with `w(y,z) & X(x,y) > w(x,z)`.
    pub property_ii: Option<(usize, usize, usize)>,
    /// `(y, z, u)` with `X(z,u) & w(y,z) > w(y,u)`.
    pub property_iii: Option<(usize, usize, usize)>,
}

impl WayBelowTable {
    pub fn from_fn(mode: WayBelowMode, n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let w = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| f(x, y)).collect();
        Self { mode, n, w }
    }

    pub fn mode(&self) -> WayBelowMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.w[x * self.n + y]
    }

    pub fn table(&self) -> Vec<Vec<f64>> {
        self.w.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()
    }

    /// `w(−, y)`.
    pub fn column(&self, y: usize) -> Vec<f64> {
        (0..self.n).map(|x| self.get(x, y)).collect()
    }

    /// Checks properties (i)–(iii) entrywise against `X`.
    pub fn check_laws(&self, x: &FiniteQOrder) -> Result<WayBelowLaws> {
        if x.len() != self.n {
            return Err(Error::CarrierMismatch { expected: self.n, found: x.len() });
        }
        let n = self.n;
        let eps = x.eps();
        let mut worst = 0.0_f64;
        let mut property_i = None;
        for a in 0..n {
            for b in 0..n {
                let gap = self.get(a, b) - x.hom(a, b);
                worst = worst.max(gap);
                if gap > eps && property_i.is_none() {
                    property_i = Some((a, b));
                }
            }
        }
        let triples = |f: &(dyn Fn(usize, usize, usize) -> f64 + Sync)| {
            (0..n)
                .into_par_iter()
                .map(|a| {
                    let mut local = (0.0_f64, None);
                    for b in 0..n {
                        for c in 0..n {
                            let gap = f(a, b, c);
                            if gap > local.0 {
                                local.0 = gap;
                            }
                            if gap > eps && local.1.is_none() {
                                local.1 = Some((a, b, c));
                            }
                        }
                    }
                    local
                })
                .reduce(|| (0.0, None), |l, r| (l.0.max(r.0), l.1.or(r.1)))
        };
        let (w2, property_ii) = triples(&|a, b, c| x.conj(self.get(b, c), x.hom(a, b)) - self.get(a, c));
        let (w3, property_iii) = triples(&|b, c, u| x.conj(x.hom(c, u), self.get(b, c)) - self.get(b, u));
        worst = worst.max(w2).max(w3);
        let holds = property_i.is_none() && property_ii.is_none() && property_iii.is_none();
        Ok(WayBelowLaws { holds, max_violation: worst, property_i, property_ii, property_iii })
    }
}

/// `w(x,y) = ⋀_{φ∈𝒟X} X(y, sup φ) → φ(x)`, with forward Cauchy weights
/// enumerated from ideals.
pub fn way_below(x: &FiniteQOrder) -> Result<WayBelowTable> {
    let fcs = forward_cauchy_weights(x);
    let mut sups = Vec::with_capacity(fcs.len());
    for fc in &fcs {
        let s = fc.supremum.ok_or_else(|| {
            Error::Precondition(format!(
                "forward Cauchy weight of ideal {:?} has no supremum",
                fc.ideal.iter().map(|&i| x.label(i)).collect::<Vec<_>>()
            ))
        })?;
        sups.push(s);
    }
    Ok(WayBelowTable::from_fn(WayBelowMode::Finite, x.len(), |a, b| {
        fcs.iter()
            .zip(&sups)
            .map(|(fc, &s)| x.residuum(x.hom(b, s), fc.weight[a]))
            .fold(1.0, f64::min)
    }))
}

/// Grid snapshot of a parametric structure with `w(x,y) = d(y)(x)`.
pub fn way_below_param(s: &ParamStructure, grid_n: usize) -> Result<(FiniteQOrder, WayBelowTable)> {
    if matches!(s.shape(), Shape::Power(..)) {
        return Err(Error::Unsupported("way-below on powers; use way_below_power".into()));
    }
    let x = s.grid_snapshot(grid_n)?;
    let pts = s.grid_points(grid_n);
    let mut w = vec![0.0; pts.len() * pts.len()];
    for (i, a) in pts.iter().enumerate() {
        for (j, b) in pts.iter().enumerate() {
            w[i * pts.len() + j] = s.d_map(b, a)?;
        }
    }
    let n = pts.len();
    Ok((x, WayBelowTable { mode: WayBelowMode::Parametric, n, w }))
}

/// `w(−,a) = X(−,a)` within `ε`.
pub fn is_compact(x: &FiniteQOrder, w: &WayBelowTable, a: usize) -> bool {
    (0..x.len()).all(|z| (w.get(z, a) - x.hom(z, a)).abs() <= x.eps())
}

// ---------------------------------------------------------------------------
// Continuity

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuityWitness {
    pub point: String,
    pub other: String,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub holds: bool,
    pub worst_gap: f64,
    pub witness: Option<ContinuityWitness>,
}

impl ConditionCheck {
    fn new() -> Self {
        Self { holds: true, worst_gap: 0.0, witness: None }
    }

    fn record(&mut self, gap: f64, tol: f64, witness: impl FnOnce() -> ContinuityWitness) {
        if gap > self.worst_gap {
            self.worst_gap = gap;
            if gap > tol {
                self.holds = false;
                self.witness = Some(witness());
            }
        }
    }
}

/// Failure of `d` to preserve order on `([0,1], α_L)` at an interior
/// Łukasiewicz piece `[p, q]`: `⋀_x d(t)(x) → d(p)(x) <= p < t → p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DlWitness {
    pub t: f64,
    pub p: f64,
    pub q: f64,
    pub infimum: f64,
    pub residuum: f64,
    pub grid_n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub is_continuous_lattice: bool,
    /// The three equivalent conditions came out the same.
    pub chacl_agreement: bool,
    pub separated: bool,
    pub complete: bool,
    pub underlying_continuous_lattice: bool,
    /// `d ⊣ sup`, read as `𝒟X(d(x), φ) = X(x, sup φ)`.
    pub left_adjoint: ConditionCheck,
    /// `X(x, sup φ) = ⋀_{y≪x} φ(y)`.
    pub way_below_formula: ConditionCheck,
    /// `d` preserves the [0,1]-order.
    pub d_preserves_order: ConditionCheck,
    pub grid_n: Option<usize>,
    pub dl_witness: Option<DlWitness>,
}

/// Classical way-below in the underlying order, from ideals:
/// `y ≪ x` iff every ideal whose join is above `x` contains `y`.
pub fn classical_way_below(x: &FiniteQOrder) -> Vec<Vec<bool>> {
    let n = x.len();
    let joins: Vec<(Vec<usize>, Option<usize>)> =
        ideals(x).into_iter().map(|d| { let j = underlying_join_of(x, &d); (d, j) }).collect();
    (0..n)
        .map(|y| {
            (0..n)
                .map(|a| {
                    joins.iter().all(|(d, j)| match j {
                        Some(j) if x.leq(a, *j) => d.contains(&y),
                        _ => true,
                    })
                })
                .collect()
        })
        .collect()
}

pub fn check_continuity(x: &FiniteQOrder) -> Result<ContinuityReport> {
    let comp = completeness(x);
    let w = way_below(x)?;
    let fcs = forward_cauchy_weights(x);
    let n = x.len();
    let eps = x.eps();
    let lbl = |i: usize| x.label(i).to_string();

    let mut c1 = ConditionCheck::new();
    for a in 0..n {
        let col = w.column(a);
        let fc = is_forward_cauchy(x, &col, 0).map(|r| r.forward_cauchy).unwrap_or(false);
        let sup_ok = x
            .supremum(&col)
            .found
            .is_some_and(|s| (0..n).all(|y| x.approx_eq(x.hom(s, y), x.hom(a, y))));
        if !(fc && sup_ok) {
            c1.record(1.0, eps, || ContinuityWitness { point: lbl(a), other: lbl(a), lhs: 0.0, rhs: 1.0 });
        }
    }

    let wb = classical_way_below(x);
    let mut c2 = ConditionCheck::new();
    for fc in &fcs {
        let Some(s) = fc.supremum else { continue };
        for a in 0..n {
            let rhs = (0..n).filter(|&y| wb[y][a]).map(|y| fc.weight[y]).fold(1.0, f64::min);
            let lhs = x.hom(a, s);
            c2.record((lhs - rhs).abs(), eps, || ContinuityWitness { point: lbl(a), other: lbl(s), lhs, rhs });
        }
    }

    let d: Vec<Vec<f64>> = (0..n)
        .map(|a| (0..n).map(|z| (0..n).filter(|&y| wb[y][a]).map(|y| x.hom(z, y)).fold(0.0, f64::max)).collect())
        .collect();
    let mut c3 = ConditionCheck::new();
    for a in 0..n {
        for b in 0..n {
            let lhs = x.hom(a, b);
            let rhs = sub_values(x.tnorm(), &d[a], &d[b]);
            c3.record(lhs - rhs, eps, || ContinuityWitness { point: lbl(a), other: lbl(b), lhs, rhs });
        }
    }

    let complete = comp.is_complete();
    let agreement = c1.holds == c2.holds && c2.holds == c3.holds;
    Ok(ContinuityReport {
        is_continuous_lattice: complete && c1.holds,
        chacl_agreement: agreement,
        separated: comp.separated,
        complete,
        underlying_continuous_lattice: comp.underlying_lattice,
        left_adjoint: c1,
        way_below_formula: c2,
        d_preserves_order: c3,
        grid_n: None,
        dl_witness: None,
    })
}

/// Numeric view of `([0,1], α_L)` or `([0,1], α_R)`.
#[derive(Clone, Copy)]
pub(crate) struct Line<'a> {
    pub(crate) t: &'a TNorm,
    pub(crate) right: bool,
}

impl<'a> Line<'a> {
    pub(crate) fn of(s: &'a ParamStructure) -> Result<Self> {
        match s.shape() {
            Shape::AlphaL => Ok(Self { t: s.tnorm(), right: false }),
            Shape::AlphaR => Ok(Self { t: s.tnorm(), right: true }),
            other => Err(Error::Unsupported(format!("continuity check for shape {other}"))),
        }
    }

    pub(crate) fn hom(&self, x: f64, y: f64) -> f64 {
        if self.right {
            self.t.residuum(y, x)
        } else {
            self.t.residuum(x, y)
        }
    }

    pub(crate) fn d(&self, a: f64, x: f64) -> f64 {
        if self.right {
            d_alpha_r(self.t, a, x)
        } else {
            d_alpha_l(self.t, a, x)
        }
    }

    /// `⋀_{y≪x} φ(y)`: the one-sided limit towards the bottom, capped by
    /// the value at the bottom.
    fn inf_way_below(&self, phi: &dyn Fn(f64) -> f64, x: f64) -> f64 {
        let (bottom, side) = if self.right { (1.0, Side::Above) } else { (0.0, Side::Below) };
        if x == bottom {
            phi(bottom)
        } else {
            phi(bottom).min(one_sided_limit(phi, x, side))
        }
    }
}

#[derive(Clone, Copy)]
enum Member {
    Yoneda(f64),
    D(f64),
}

impl Member {
    fn sup(self) -> f64 {
        match self {
            Member::Yoneda(a) | Member::D(a) => a,
        }
    }

    fn eval(self, line: &Line<'_>, z: f64) -> f64 {
        match self {
            Member::Yoneda(a) => line.hom(z, a),
            Member::D(a) => line.d(a, z),
        }
    }

    fn name(self) -> String {
        match self {
            Member::Yoneda(a) => format!("X(-,{a})"),
            Member::D(a) => format!("d({a})"),
        }
    }
}

/// Continuity of `([0,1], α_L)` or `([0,1], α_R)` evaluated on a grid.
///
/// Condition (3) is checked on grid pairs with the meet taken over grid
/// points, so a reported failure is genuine. Conditions (1) and (2) range
/// over the forward Cauchy family `{X(−,a), d(a)}` for grid `a`, with open
/// infima resolved by one-sided limit probes.
pub fn check_continuity_param(s: &ParamStructure, grid_n: usize, eps: f64) -> Result<ContinuityReport> {
    let line = Line::of(s)?;
    if grid_n == 0 {
        return Err(Error::Precondition("grid needs n >= 1".into()));
    }
    let grid: Vec<f64> = (0..=grid_n).map(|i| i as f64 / grid_n as f64).collect();
    let samples = s.continuum_samples(grid_n);
    let family: Vec<Member> = grid.iter().flat_map(|&a| [Member::Yoneda(a), Member::D(a)]).collect();
    let t = s.tnorm();

    let per_point = |x: f64| {
        let mut c1 = ConditionCheck::new();
        let mut c2 = ConditionCheck::new();
        let mut c3 = ConditionCheck::new();
        for &m in &family {
            let a = m.sup();
            let hom = line.hom(x, a);
            let sub = samples
                .iter()
                .map(|&z| t.residuum(line.d(x, z), m.eval(&line, z)))
                .fold(1.0, f64::min);
            c1.record(hom - sub, PROBE_TOL, || ContinuityWitness { point: x.to_string(), other: m.name(), lhs: hom, rhs: sub });
            let inf = line.inf_way_below(&|z| m.eval(&line, z), x);
            c2.record((hom - inf).abs(), PROBE_TOL, || ContinuityWitness { point: x.to_string(), other: m.name(), lhs: hom, rhs: inf });
        }
        for &y in &grid {
            let lhs = line.hom(x, y);
            let rhs = grid
                .iter()
                .map(|&z| t.residuum(line.d(x, z), line.d(y, z)))
                .fold(1.0, f64::min);
            c3.record(lhs - rhs, eps, || ContinuityWitness { point: x.to_string(), other: y.to_string(), lhs, rhs });
        }
        [c1, c2, c3]
    };
    let checks: Vec<[ConditionCheck; 3]> = grid.par_iter().map(|&x| per_point(x)).collect();
    let merge = |k: usize| {
        let mut out = ConditionCheck::new();
        for c in &checks {
            let c = &c[k];
            if c.worst_gap > out.worst_gap {
                out.worst_gap = c.worst_gap;
            }
            if !c.holds && out.holds {
                out.holds = false;
                out.witness = c.witness.clone();
            }
        }
        out
    };
    let (c1, c2, c3) = (merge(0), merge(1), merge(2));
    let agreement = c1.holds == c2.holds && c2.holds == c3.holds;
    let dl_witness = if line.right { None } else { dl_failure_witness(t, grid_n) };
    Ok(ContinuityReport {
        is_continuous_lattice: c3.holds,
        chacl_agreement: agreement,
        separated: true,
        complete: true,
        underlying_continuous_lattice: true,
        left_adjoint: c1,
        way_below_formula: c2,
        d_preserves_order: c3,
        grid_n: Some(grid_n),
        dl_witness,
    })
}

/// First Łukasiewicz piece `[p, q]` with `p > 0`.
pub fn interior_lukasiewicz_piece(t: &TNorm) -> Option<(f64, f64)> {
    t.pieces().iter().find(|p| p.kind == Archetype::Lukasiewicz && p.lo > 0.0).map(|p| (p.lo, p.hi))
}

/// A point of `(p, q)`: the tenth nearest the midpoint, or the midpoint
/// when no tenth lies strictly inside.
pub fn interior_probe(p: f64, q: f64) -> f64 {
    let mid = (p + q) / 2.0;
    let k = (mid * 10.0).round();
    [k - 1.0, k, k + 1.0]
        .into_iter()
        .map(|k| k / 10.0)
        .filter(|&v| v > p && v < q)
        .min_by(|a, b| (a - mid).abs().total_cmp(&(b - mid).abs()))
        .unwrap_or(mid)
}

/// Witness that `d` fails to preserve order on `([0,1], α_L)`, present
/// exactly when the t-norm has an interior Łukasiewicz piece.
pub fn dl_failure_witness(t: &TNorm, grid_n: usize) -> Option<DlWitness> {
    let (p, q) = interior_lukasiewicz_piece(t)?;
    let probe = interior_probe(p, q);
    let mut xs: Vec<f64> = (0..=grid_n).map(|i| i as f64 / grid_n.max(1) as f64).collect();
    xs.extend([probe, p, q]);
    let infimum = xs
        .iter()
        .map(|&x| t.residuum(d_alpha_l(t, probe, x), d_alpha_l(t, p, x)))
        .fold(1.0, f64::min);
    Some(DlWitness { t: probe, p, q, infimum, residuum: t.residuum(probe, p), grid_n })
}

// ---------------------------------------------------------------------------
// Interpolation

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterpolationReport {
    pub holds: bool,
    /// Largest `⋁_z w(z,y) & w(x,z) − w(x,y)`; must not exceed `ε`.
    pub max_excess: f64,
    /// Largest `w(x,y) − ⋁_z w(z,y) & w(x,z)`; must not exceed the slack.
    pub max_deficit: f64,
    pub slack: f64,
    pub witness: Option<(String, String)>,
}

fn interpolation_report(
    pairs: Vec<(String, String, f64, f64)>,
    slack: f64,
    eps: f64,
) -> InterpolationReport {
    let mut rep = InterpolationReport { holds: true, max_excess: 0.0, max_deficit: 0.0, slack, witness: None };
    for (x, y, direct, via) in pairs {
        let excess = via - direct;
        let deficit = direct - via;
        rep.max_excess = rep.max_excess.max(excess);
        rep.max_deficit = rep.max_deficit.max(deficit);
        if (excess > eps || deficit > slack) && rep.holds {
            rep.holds = false;
            rep.witness = Some((x, y));
        }
    }
    rep
}

/// `⋁_z w(z,y) & w(x,z) = w(x,y)` on a finite snapshot, exactly.
pub fn check_interpolation(x: &FiniteQOrder, w: &WayBelowTable) -> InterpolationReport {
    let n = x.len();
    let pairs = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| {
            let via = (0..n).map(|z| x.conj(w.get(z, b), w.get(a, z))).fold(0.0, f64::max);
            (x.label(a).to_string(), x.label(b).to_string(), w.get(a, b), via)
        })
        .collect();
    interpolation_report(pairs, x.eps(), x.eps())
}

/// Interpolation on a parametric grid: `x, y` on the grid of pitch `1/n`,
/// `z` on the refined grid of pitch `1/2n` together with `x` and `y`.
pub fn check_interpolation_param(s: &ParamStructure, grid_n: usize, eps: f64) -> Result<InterpolationReport> {
    if grid_n == 0 || matches!(s.shape(), Shape::Power(..)) {
        return Err(Error::Precondition("interpolation needs n >= 1 and a non-power shape".into()));
    }
    let pts = s.grid_points(grid_n);
    let zs = s.grid_points(2 * grid_n);
    let t = s.tnorm();
    let pairs: Result<Vec<_>> = pts
        .par_iter()
        .flat_map(|a| pts.par_iter().map(move |b| (a, b)))
        .map(|(a, b)| {
            let direct = s.d_map(b, a)?;
            let mut via = 0.0_f64;
            for z in zs.iter().chain([a, b]) {
                via = via.max(t.conj(s.d_map(b, z)?, s.d_map(z, a)?));
            }
            Ok((a.to_string(), b.to_string(), direct, via))
        })
        .collect();
    Ok(interpolation_report(pairs?, slack(grid_n, eps), eps))
}

// ---------------------------------------------------------------------------
// Powers

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerBound {
    /// `⋀_i w(x_i, y_i)`.
    pub upper_bound: f64,
    pub components: Vec<f64>,
    /// Coordinates of `x⃗` that are not the bottom element.
    pub support: Vec<usize>,
    /// Finite support, so the bound is the value.
    pub equality: bool,
}

/// Way-below in a finite power `X^k` through its coordinates.
pub fn way_below_power(s: &ParamStructure, x: &Point, y: &Point) -> Result<PowerBound> {
    let Shape::Power(base, k) = s.shape() else {
        return Err(Error::Precondition("way_below_power needs a power shape".into()));
    };
    if matches!(**base, Shape::Power(..)) {
        return Err(Error::Unsupported("nested powers".into()));
    }
    let b = ParamStructure::new(s.tnorm().clone(), (**base).clone());
    let bottom = b.bottom()?;
    let (Point::Tuple(xs), Point::Tuple(ys)) = (x, y) else {
        return Err(Error::Precondition(format!("power points must be {k}-tuples")));
    };
    if xs.len() != *k || ys.len() != *k {
        return Err(Error::Precondition(format!("power points must be {k}-tuples")));
    }
    let components = xs.iter().zip(ys).map(|(a, c)| b.d_map(c, a)).collect::<Result<Vec<f64>>>()?;
    let support = (0..*k).filter(|&i| xs[i] != bottom).collect();
    Ok(PowerBound {
        upper_bound: components.iter().copied().fold(1.0, f64::min),
        components,
        support,
        equality: true,
    })
}

// ---------------------------------------------------------------------------
// Maps

/// `f` sends the supremum of every forward Cauchy weight to a supremum of
/// its image weight.
pub fn preserves_fc_suprema(x: &FiniteQOrder, y: &FiniteQOrder, f: &QMap) -> Result<bool> {
    for fc in forward_cauchy_weights(x) {
        let s = fc.supremum.ok_or_else(|| Error::Precondition("forward Cauchy weight without supremum".into()))?;
        let image = f.push_forward(y, &fc.weight);
        let fs = f.apply(s);
        match y.supremum(image.values()).found {
            Some(t) if (0..y.len()).all(|z| y.approx_eq(y.hom(t, z), y.hom(fs, z))) => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// The underlying map sends joins of directed subsets to joins.
pub fn preserves_directed_joins(x: &FiniteQOrder, y: &FiniteQOrder, f: &QMap) -> Result<bool> {
    let n = x.len();
    if n > IDEAL_ENUM_LIMIT {
        return Err(Error::TooLarge { size: n, limit: IDEAL_ENUM_LIMIT });
    }
    for mask in 1u32..(1u32 << n) {
        let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if !is_directed(x, &set) {
            continue;
        }
        let Some(j) = underlying_join_of(x, &set) else { continue };
        let image: Vec<usize> = set.iter().map(|&i| f.apply(i)).collect();
        match underlying_join_of(y, &image) {
            Some(k) if y.leq(k, f.apply(j)) && y.leq(f.apply(j), k) => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain2_godel() -> FiniteQOrder {
        FiniteQOrder::chain(TNorm::godel(), 2)
    }

    #[test]
    fn forward_cauchy_examples() {
        let x = chain2_godel();
        let r = is_forward_cauchy(&x, x.yoneda(1).values(), 3).unwrap();
        assert!(r.forward_cauchy && r.agree);
        assert_eq!(r.ideal, vec![0, 1]);
        let r = is_forward_cauchy(&x, &[1.0, 0.5], 3).unwrap();
        assert!(!r.forward_cauchy && r.directed && !r.join_identity && r.agree);
        let d = FiniteQOrder::discrete(TNorm::godel(), 2);
        let r = is_forward_cauchy(&d, &[1.0, 1.0], 3).unwrap();
        assert!(!r.forward_cauchy && !r.directed && r.agree);
        assert!(is_forward_cauchy(&x, &[0.0, 1.0], 3).is_err());
    }

    #[test]
    fn finite_way_below_is_alpha() {
        let x = ParamStructure::new(TNorm::lukasiewicz(), Shape::AlphaR).grid_snapshot(4).unwrap();
        assert!(is_snapshot_complete(&x));
        let w = way_below(&x).unwrap();
        assert_eq!(w.table(), x.table());
        assert!(w.check_laws(&x).unwrap().holds);
        assert!((0..x.len()).all(|a| is_compact(&x, &w, a)));
        let c = check_continuity(&x).unwrap();
        assert!(c.is_continuous_lattice && c.chacl_agreement, "{c:?}");
        assert!(check_interpolation(&x, &w).holds);
    }

    #[test]
    fn incomplete_snapshots() {
        let d = FiniteQOrder::discrete(TNorm::godel(), 2);
        assert!(!is_snapshot_complete(&d));
        let c = check_continuity(&d).unwrap();
        assert!(!c.is_continuous_lattice);
    }

    #[test]
    fn parametric_way_below() {
        let g = ParamStructure::new(TNorm::godel(), Shape::AlphaR);
        let (x, w) = way_below_param(&g, 2).unwrap();
        assert_eq!(w.get(1, 1), 0.5);
        assert_eq!(x.hom(1, 1), 1.0);
        assert!(!is_compact(&x, &w, 1));
        assert!(w.check_laws(&x).unwrap().holds);
        let l = ParamStructure::new(TNorm::lukasiewicz(), Shape::AlphaR);
        let (x, w) = way_below_param(&l, 10).unwrap();
        for a in 0..x.len() {
            assert!(is_compact(&x, &w, a));
        }
    }

    #[test]
    fn parametric_continuity() {
        let r = check_continuity_param(&ParamStructure::new(TNorm::godel(), Shape::AlphaR), 16, 1e-9).unwrap();
        assert!(r.is_continuous_lattice && r.chacl_agreement, "{r:?}");
        let t = TNorm::ordinal_sum(&[(0.25, 0.5, Archetype::Lukasiewicz)]).unwrap();
        let r = check_continuity_param(&ParamStructure::new(t, Shape::AlphaL), 16, 1e-9).unwrap();
        assert!(!r.is_continuous_lattice && r.chacl_agreement, "{r:?}");
        let w = r.dl_witness.unwrap();
        assert_eq!(w.t, 0.4);
        assert!(w.infimum <= 0.25 + 1e-12 && w.residuum >= 0.35 - 1e-9);
    }

    #[test]
    fn probe_points() {
        assert_eq!(interior_probe(0.25, 0.5), 0.4);
        assert_eq!(interior_probe(0.0, 1.0), 0.5);
        let v = interior_probe(0.31, 0.33);
        assert!(v > 0.31 && v < 0.33);
    }

    #[test]
    fn powers() {
        let s = ParamStructure::new(TNorm::godel(), "power:alphaR:2".parse().unwrap());
        let v = |a: f64, b: f64| Point::Tuple(vec![Point::Value(a), Point::Value(b)]);
        let r = way_below_power(&s, &v(1.0, 1.0), &v(0.5, 0.3)).unwrap();
        assert_eq!(r.upper_bound, 1.0);
        assert!(r.support.is_empty() && r.equality);
        let r = way_below_power(&s, &v(0.5, 0.2), &v(0.5, 0.3)).unwrap();
        assert_eq!(r.components, vec![0.5, 0.2]);
        assert_eq!(r.upper_bound, 0.2);
        let x = ParamStructure::new(TNorm::godel(), "power:xinf:2".parse().unwrap());
        assert!(way_below_power(&x, &v(0.5, 0.2), &v(0.5, 0.3)).is_err());
    }
}
