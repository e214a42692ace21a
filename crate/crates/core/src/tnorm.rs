//! Continuous t-norms as ordinal sums of Łukasiewicz and product pieces.
//!
//! A [`TNorm`] is stored in canonical form: a sorted list of pieces with
//! disjoint interiors. Points outside every piece interior are idempotent,
//! so the empty list is the Gödel (minimum) t-norm.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default comparison tolerance for floating-point evaluation.
pub const EPS: f64 = 1e-9;

/// Exact rational values, used on grids `{0, 1/n, ..., 1}`.
pub type Exact = Ratio<i128>;

/// Largest denominator accepted when snapping a piece bound to a rational.
const MAX_SNAP_DENOMINATOR: i128 = 1_000_000;

/// Number types the t-norm formulas can be evaluated in.
pub trait Scalar:
    Copy
    + PartialOrd
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    const EXACT: bool;
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(self) -> f64;

    fn gap(self, other: Self) -> f64 {
        if self >= other {
            (self - other).to_f64()
        } else {
            (other - self).to_f64()
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn to_f64(self) -> f64 {
        self
    }
}

impl Scalar for Exact {
    const EXACT: bool = true;
    fn zero() -> Self {
        Ratio::from_integer(0)
    }
    fn one() -> Self {
        Ratio::from_integer(1)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num as i128, den as i128)
    }
    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

/// A real number checked to lie in `[0,1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct UnitValue(f64);

impl UnitValue {
    pub fn new(value: f64) -> Result<Self> {
        Self::at(value, "value")
    }

    pub fn at(value: f64, location: &str) -> Result<Self> {
        if value.is_finite() && (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::OutOfRange { location: location.to_string(), value })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Archetype {
    Lukasiewicz,
    Product,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Piece<S = f64> {
    pub lo: S,
    pub hi: S,
    pub kind: Archetype,
}

impl<S: Scalar> Piece<S> {
    fn rescale(&self, v: S) -> S {
        (v - self.lo) / (self.hi - self.lo)
    }

    fn restore(&self, r: S) -> S {
        self.lo + (self.hi - self.lo) * r
    }

    fn conj(&self, x: S, y: S) -> S {
        let (u, v) = (self.rescale(x), self.rescale(y));
        let r = match self.kind {
            Archetype::Lukasiewicz => {
                let s = u + v - S::one();
                if s > S::zero() {
                    s
                } else {
                    S::zero()
                }
            }
            Archetype::Product => u * v,
        };
        self.restore(r)
    }

    /// In-piece residuum for `y < x`.
    fn residuum(&self, x: S, y: S) -> S {
        let (u, v) = (self.rescale(x), self.rescale(y));
        let r = match self.kind {
            Archetype::Lukasiewicz => S::one() - u + v,
            Archetype::Product => v / u,
        };
        self.restore(r)
    }
}

/// Kind of a maximal interval in the ordinal-sum decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    Lukasiewicz,
    Product,
    Idempotent,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Region {
    pub lo: f64,
    pub hi: f64,
    pub kind: RegionKind,
}

/// A continuous t-norm in ordinal-sum form.
#[derive(Clone, Debug, PartialEq)]
pub struct TNorm<S = f64> {
    pieces: Vec<Piece<S>>,
}

impl TNorm<f64> {
    pub fn godel() -> Self {
        Self { pieces: Vec::new() }
    }

    pub fn lukasiewicz() -> Self {
        Self::single(Archetype::Lukasiewicz)
    }

    pub fn product() -> Self {
        Self::single(Archetype::Product)
    }

    fn single(kind: Archetype) -> Self {
        Self { pieces: vec![Piece { lo: 0.0, hi: 1.0, kind }] }
    }

    /// Builds an ordinal sum, sorting the pieces and rejecting overlaps.
    pub fn new(mut pieces: Vec<Piece<f64>>) -> Result<Self> {
        for (i, p) in pieces.iter().enumerate() {
            UnitValue::at(p.lo, &format!("pieces[{i}].lo"))?;
            UnitValue::at(p.hi, &format!("pieces[{i}].hi"))?;
            if p.lo >= p.hi {
                return Err(Error::InvalidTNorm(format!(
                    "piece {i} has lo {} not below hi {}",
                    p.lo, p.hi
                )));
            }
        }
        pieces.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        for w in pieces.windows(2) {
            if w[1].lo < w[0].hi {
                return Err(Error::InvalidTNorm(format!(
                    "pieces [{}, {}] and [{}, {}] overlap",
                    w[0].lo, w[0].hi, w[1].lo, w[1].hi
                )));
            }
        }
        Ok(Self { pieces })
    }

    pub fn ordinal_sum(pieces: &[(f64, f64, Archetype)]) -> Result<Self> {
        Self::new(pieces.iter().map(|&(lo, hi, kind)| Piece { lo, hi, kind }).collect())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn has_product_piece(&self) -> bool {
        self.pieces.iter().any(|p| p.kind == Archetype::Product)
    }

    /// Converts to exact rational arithmetic. Piece bounds are snapped to the
    /// nearest rational with a small denominator.
    pub fn to_exact(&self) -> Result<TNorm<Exact>> {
        if self.has_product_piece() {
            return Err(Error::ExactUnsupported);
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| Ok(Piece { lo: snap(p.lo)?, hi: snap(p.hi)?, kind: p.kind }))
            .collect::<Result<Vec<_>>>()?;
        Ok(TNorm { pieces })
    }

    /// Structural classification: idempotent samples, condition (S) and
    /// the Archimedean property.
    pub fn classify(&self) -> Classification {
        let mut samples = vec![0.0, 1.0];
        for r in self.regions() {
            samples.push(r.lo);
            samples.push(r.hi);
            if r.kind == RegionKind::Idempotent {
                samples.push((r.lo + r.hi) / 2.0);
            }
        }
        samples.sort_by(f64::total_cmp);
        samples.dedup();
        Classification {
            idempotent_samples: samples,
            condition_s: self.satisfies_condition_s(),
            archimedean: self.is_archimedean(),
        }
    }

    /// Every piece that does not start at 0 is a product piece.
    pub fn satisfies_condition_s(&self) -> bool {
        self.pieces.iter().all(|p| p.lo <= 0.0 || p.kind == Archetype::Product)
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self.pieces.as_slice(), [p] if p.lo <= 0.0 && p.hi >= 1.0)
    }

    pub fn is_lukasiewicz(&self, eps: f64) -> bool {
        matches!(self.pieces.as_slice(),
            [p] if p.kind == Archetype::Lukasiewicz && p.lo <= eps && p.hi >= 1.0 - eps)
    }

    /// Partition of `[0,1]` into pieces and idempotent gaps, in increasing order.
    pub fn regions(&self) -> Vec<Region> {
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for p in &self.pieces {
            if p.lo > cursor {
                out.push(Region { lo: cursor, hi: p.lo, kind: RegionKind::Idempotent });
            }
            let kind = match p.kind {
                Archetype::Lukasiewicz => RegionKind::Lukasiewicz,
                Archetype::Product => RegionKind::Product,
            };
            out.push(Region { lo: p.lo, hi: p.hi, kind });
            cursor = p.hi;
        }
        if cursor < 1.0 {
            out.push(Region { lo: cursor, hi: 1.0, kind: RegionKind::Idempotent });
        }
        out
    }

    /// `lim_{b↓t} (b → x)`, the supremum of `b → x` over `b > t`, for `t < 1`.
    pub fn residuum_limit_first_from_above(&self, t: f64, x: f64) -> f64 {
        if x > t {
            return 1.0;
        }
        match self.piece_from(t) {
            Some(p) if x >= p.lo => {
                if x < t {
                    self.residuum(t, x)
                } else if p.kind == Archetype::Product && t == p.lo {
                    p.lo
                } else {
                    p.hi
                }
            }
            _ => x,
        }
    }

    /// `lim_{b↑t} (x → b)`, the supremum of `x → b` over `b < t`, for `t > 0`.
    pub fn residuum_limit_second_from_below(&self, x: f64, t: f64) -> f64 {
        if x < t {
            return 1.0;
        }
        match self.piece_upto(t) {
            Some(p) if x <= p.hi => {
                if x > t {
                    self.residuum(x, t)
                } else {
                    p.hi
                }
            }
            _ => t,
        }
    }
}

fn snap(v: f64) -> Result<Exact> {
    for den in 1..=MAX_SNAP_DENOMINATOR {
        let num = (v * den as f64).round();
        if (v * den as f64 - num).abs() < 1e-12 * den as f64 {
            return Ok(Ratio::new(num as i128, den));
        }
    }
    Err(Error::InvalidTNorm(format!("piece bound {v} has no small rational form")))
}

impl<S: Scalar> TNorm<S> {
    pub fn pieces(&self) -> &[Piece<S>] {
        &self.pieces
    }

    /// Piece with `lo <= v < hi`.
    fn piece_from(&self, v: S) -> Option<&Piece<S>> {
        self.pieces.iter().find(|p| p.lo <= v && v < p.hi)
    }

    /// Piece with `lo < v <= hi`.
    fn piece_upto(&self, v: S) -> Option<&Piece<S>> {
        self.pieces.iter().find(|p| p.lo < v && v <= p.hi)
    }

    pub fn conj(&self, x: S, y: S) -> S {
        let (a, b) = if x <= y { (x, y) } else { (y, x) };
        match self.piece_from(a) {
            Some(p) if b < p.hi => p.conj(a, b),
            _ => a,
        }
    }

    /// The largest `z` with `x & z <= y`.
    pub fn residuum(&self, x: S, y: S) -> S {
        if x <= y {
            return S::one();
        }
        match self.piece_from(y) {
            Some(p) if x <= p.hi => p.residuum(x, y),
            _ => y,
        }
    }

    pub fn is_idempotent(&self, v: S) -> bool {
        !self.pieces.iter().any(|p| p.lo < v && v < p.hi)
    }

    pub fn grid(&self, n: usize) -> Vec<S> {
        (0..=n).map(|i| S::from_ratio(i as i64, n as i64)).collect()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    #[serde(default)]
    pieces: Vec<PieceFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceFile {
    lo: f64,
    hi: f64,
    kind: Archetype,
}

impl Serialize for TNorm<f64> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        SpecFile {
            pieces: self
                .pieces
                .iter()
                .map(|p| PieceFile { lo: p.lo, hi: p.hi, kind: p.kind })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TNorm<f64> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SpecFile::deserialize(d)?;
        TNorm::new(
            raw.pieces
                .into_iter()
                .map(|p| Piece { lo: p.lo, hi: p.hi, kind: p.kind })
                .collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub idempotent_samples: Vec<f64>,
    pub condition_s: bool,
    pub archimedean: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawCheck {
    pub law: String,
    pub max_violation: f64,
    pub witness: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub grid_n: usize,
    pub exact: bool,
    pub checks: Vec<LawCheck>,
    pub max_violation: f64,
}

impl LawReport {
    pub fn passes(&self, eps: f64) -> bool {
        if self.exact {
            self.max_violation == 0.0
        } else {
            self.max_violation <= eps
        }
    }
}

#[derive(Clone, Debug, Default)]
struct Worst {
    value: f64,
    witness: Option<Vec<f64>>,
}

impl Worst {
    fn note(&mut self, value: f64, witness: impl FnOnce() -> Vec<f64>) {
        if value > self.value {
            self.value = value;
            self.witness = Some(witness());
        }
    }

    fn merge(self, other: Worst) -> Worst {
        if other.value > self.value {
            other
        } else {
            self
        }
    }

    fn into_check(self, law: &str) -> LawCheck {
        LawCheck { law: law.to_string(), max_violation: self.value, witness: self.witness }
    }
}

fn excess<S: Scalar>(lhs: S, rhs: S) -> f64 {
    if lhs > rhs {
        lhs.gap(rhs)
    } else {
        0.0
    }
}

/// Checks associativity, commutativity, unit, monotonicity and the adjoint
/// property on the grid `{0, 1/n, ..., 1}`.
pub fn verify_quantale_laws<S: Scalar>(t: &TNorm<S>, grid_n: usize) -> Result<LawReport> {
    if grid_n < 2 {
        return Err(Error::Precondition("law grid needs n >= 2".into()));
    }
    let g = t.grid(grid_n);
    let f = |v: S| v.to_f64();

    let assoc = g
        .par_iter()
        .map(|&x| {
            let mut w = Worst::default();
            for &y in &g {
                let xy = t.conj(x, y);
                for &z in &g {
                    let lhs = t.conj(xy, z);
                    let rhs = t.conj(x, t.conj(y, z));
                    w.note(lhs.gap(rhs), || vec![f(x), f(y), f(z)]);
                }
            }
            w
        })
        .reduce(Worst::default, Worst::merge);

    let adjoint = g
        .par_iter()
        .map(|&x| {
            let mut w = Worst::default();
            for &y in &g {
                let r = t.residuum(x, y);
                w.note(excess(t.conj(x, r), y), || vec![f(x), f(y), f(r)]);
                for &z in &g {
                    let c = t.conj(x, z);
                    let v = if c <= y { excess(z, r) } else { 0.0 }
                        .max(if z <= r { excess(c, y) } else { 0.0 });
                    w.note(v, || vec![f(x), f(y), f(z)]);
                }
            }
            w
        })
        .reduce(Worst::default, Worst::merge);

    let mut comm = Worst::default();
    let mut unit = Worst::default();
    let mut mono = Worst::default();
    for (i, &x) in g.iter().enumerate() {
        unit.note(t.conj(S::one(), x).gap(x), || vec![1.0, f(x)]);
        unit.note(t.conj(x, S::one()).gap(x), || vec![f(x), 1.0]);
        for (j, &y) in g.iter().enumerate() {
            comm.note(t.conj(x, y).gap(t.conj(y, x)), || vec![f(x), f(y)]);
            if i + 1 < g.len() {
                let x2 = g[i + 1];
                mono.note(excess(t.conj(x, y), t.conj(x2, y)), || vec![f(x), f(x2), f(y)]);
                mono.note(excess(t.residuum(x2, y), t.residuum(x, y)), || {
                    vec![f(x), f(x2), f(y)]
                });
            }
            if j + 1 < g.len() {
                let y2 = g[j + 1];
                mono.note(excess(t.residuum(x, y), t.residuum(x, y2)), || {
                    vec![f(x), f(y), f(y2)]
                });
            }
        }
    }

    let checks = vec![
        assoc.into_check("associativity"),
        comm.into_check("commutativity"),
        unit.into_check("unit"),
        mono.into_check("monotonicity"),
        adjoint.into_check("adjointness"),
    ];
    let max_violation = checks.iter().map(|c| c.max_violation).fold(0.0, f64::max);
    Ok(LawReport { grid_n, exact: S::EXACT, checks, max_violation })
}

/// Runs the law suite, in exact arithmetic when requested.
pub fn verify_laws(t: &TNorm, grid_n: usize, exact: bool) -> Result<LawReport> {
    if exact {
        verify_quantale_laws(&t.to_exact()?, grid_n)
    } else {
        verify_quantale_laws(t, grid_n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= EPS
    }

    #[test]
    fn basic_conjunctions() {
        assert!(close(TNorm::lukasiewicz().conj(0.7, 0.5), 0.2));
        assert!(close(TNorm::product().conj(0.5, 0.4), 0.2));
        assert_eq!(TNorm::godel().conj(0.7, 0.5), 0.5);
        let t = TNorm::ordinal_sum(&[(0.0, 0.5, Archetype::Lukasiewicz)]).unwrap();
        // h(v) = 2v: Ł(0.4, 0.8) = 0.2, mapped back by v/2.
        assert!(close(t.conj(0.2, 0.4), 0.1));
    }

    #[test]
    fn basic_residua() {
        assert_eq!(TNorm::godel().residuum(0.7, 0.3), 0.3);
        assert!(close(TNorm::product().residuum(0.5, 0.25), 0.5));
        assert!(close(TNorm::lukasiewicz().residuum(0.7, 0.5), 0.8));
        let t = TNorm::ordinal_sum(&[(0.25, 0.5, Archetype::Lukasiewicz)]).unwrap();
        // h(v) = 4(v - 0.25): Ł residuum(0.6, 0) = 0.4, mapped back to 0.25 + 0.4/4.
        assert!(close(t.residuum(0.4, 0.25), 0.35));
        assert_eq!(t.residuum(0.8, 0.4), 0.4);
        assert_eq!(t.residuum(0.3, 0.8), 1.0);
    }

    #[test]
    fn overlapping_pieces_rejected() {
        let err = TNorm::ordinal_sum(&[
            (0.0, 0.5, Archetype::Lukasiewicz),
            (0.4, 0.8, Archetype::Product),
        ]);
        assert!(matches!(err, Err(Error::InvalidTNorm(_))));
        assert!(TNorm::ordinal_sum(&[(0.5, 0.5, Archetype::Product)]).is_err());
        assert!(TNorm::ordinal_sum(&[(0.5, 1.5, Archetype::Product)]).is_err());
    }

    #[test]
    fn spec_file_round_trip() {
        let t = TNorm::from_json(r#"{"pieces":[{"lo":0.25,"hi":0.5,"kind":"lukasiewicz"}]}"#)
            .unwrap();
        assert_eq!(t, TNorm::ordinal_sum(&[(0.25, 0.5, Archetype::Lukasiewicz)]).unwrap());
        let back = serde_json::to_string(&t).unwrap();
        assert_eq!(TNorm::from_json(&back).unwrap(), t);
        assert_eq!(TNorm::from_json(r#"{"pieces":[]}"#).unwrap(), TNorm::godel());
        assert!(TNorm::from_json(r#"{"pieces":[{"lo":0,"hi":1,"kind":"weird"}]}"#).is_err());
    }

    #[test]
    fn classification() {
        let g = TNorm::godel().classify();
        assert!(g.condition_s && !g.archimedean);
        assert!(g.idempotent_samples.contains(&0.5));
        let l = TNorm::lukasiewicz().classify();
        assert!(l.condition_s && l.archimedean);
        assert_eq!(l.idempotent_samples, vec![0.0, 1.0]);
        let p = TNorm::product().classify();
        assert!(p.condition_s && p.archimedean);
        let s = TNorm::ordinal_sum(&[(0.25, 0.5, Archetype::Lukasiewicz)]).unwrap().classify();
        assert!(!s.condition_s && !s.archimedean);
        let s = TNorm::ordinal_sum(&[(0.25, 0.5, Archetype::Product)]).unwrap().classify();
        assert!(s.condition_s && !s.archimedean);
    }

    #[test]
    fn exact_mode() {
        assert!(matches!(TNorm::product().to_exact(), Err(Error::ExactUnsupported)));
        let t = TNorm::ordinal_sum(&[(0.3, 0.7, Archetype::Lukasiewicz)]).unwrap();
        let e = t.to_exact().unwrap();
        assert_eq!(e.pieces()[0].lo, Ratio::new(3, 10));
        let r = e.residuum(Ratio::new(1, 2), Ratio::new(2, 5));
        assert_eq!(r, Ratio::new(3, 5));
    }

    #[test]
    fn small_law_suites() {
        let r = verify_laws(&TNorm::godel(), 2, true).unwrap();
        assert_eq!(r.max_violation, 0.0);
        let r = verify_laws(&TNorm::lukasiewicz(), 20, true).unwrap();
        assert_eq!(r.max_violation, 0.0);
        let r = verify_laws(&TNorm::product(), 20, false).unwrap();
        assert!(r.passes(EPS));
        assert!(verify_laws(&TNorm::godel(), 1, false).is_err());
    }

    #[test]
    fn one_sided_limits() {
        let g = TNorm::godel();
        assert_eq!(g.residuum_limit_first_from_above(0.5, 0.8), 1.0);
        assert_eq!(g.residuum_limit_first_from_above(0.5, 0.5), 0.5);
        assert_eq!(g.residuum_limit_first_from_above(0.5, 0.2), 0.2);
        let p = TNorm::product();
        assert_eq!(p.residuum_limit_first_from_above(0.0, 0.0), 0.0);
        assert_eq!(p.residuum_limit_first_from_above(0.5, 0.5), 1.0);
        let l = TNorm::lukasiewicz();
        assert_eq!(l.residuum_limit_first_from_above(0.0, 0.0), 1.0);
        let s = TNorm::ordinal_sum(&[(0.25, 0.5, Archetype::Lukasiewicz)]).unwrap();
        assert_eq!(s.residuum_limit_second_from_below(0.4, 0.4), 0.5);
        assert_eq!(s.residuum_limit_second_from_below(0.4, 0.25), 0.25);
        assert_eq!(s.residuum_limit_second_from_below(0.8, 0.4), 0.4);
        assert!(close(s.residuum_limit_second_from_below(0.45, 0.4), s.residuum(0.45, 0.4)));
    }
}
