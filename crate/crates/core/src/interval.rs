//! Symbolic structures on the unit interval: `([0,1], α_L)`, `([0,1], α_R)`,
//! the extended carrier `[0,1] ∪ {∞}` and finite powers, with closed-form
//! hom and `d` maps and finite grid snapshots.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::order::FiniteQOrder;
use crate::tnorm::TNorm;

/// Step used when probing one-sided limits numerically.
pub const PROBE_STEP: f64 = 1e-7;

/// Agreement tolerance for values obtained through limit probes.
pub const PROBE_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    AlphaL,
    AlphaR,
    XInfinity,
    Power(Box<Shape>, usize),
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::AlphaL => write!(f, "alphaL"),
            Shape::AlphaR => write!(f, "alphaR"),
            Shape::XInfinity => write!(f, "xinf"),
            Shape::Power(base, k) => write!(f, "power:{base}:{k}"),
        }
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alphaL" => Ok(Shape::AlphaL),
            "alphaR" => Ok(Shape::AlphaR),
            "xinf" => Ok(Shape::XInfinity),
            _ => {
                let rest = s
                    .strip_prefix("power:")
                    .ok_or_else(|| Error::Parse(format!("unknown shape `{s}`")))?;
                let (base, k) = rest
                    .rsplit_once(':')
                    .ok_or_else(|| Error::Parse(format!("shape `{s}` lacks an index count")))?;
                let k: usize =
                    k.parse().map_err(|_| Error::Parse(format!("bad index count in `{s}`")))?;
                if k == 0 {
                    return Err(Error::Parse("power index count must be positive".into()));
                }
                Ok(Shape::Power(Box::new(base.parse()?), k))
            }
        }
    }
}

impl Serialize for Shape {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Value(f64),
    Infinity,
    Tuple(Vec<Point>),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Value(v) => write!(f, "{v}"),
            Point::Infinity => write!(f, "inf"),
            Point::Tuple(ps) => {
                write!(f, "(")?;
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Point {
    fn value(&self) -> Result<f64> {
        match self {
            Point::Value(v) if (0.0..=1.0).contains(v) => Ok(*v),
            Point::Value(v) => Err(Error::OutOfRange { location: "point".into(), value: *v }),
            other => Err(Error::Unsupported(format!("point {other} is not in [0,1]"))),
        }
    }
}

/// Which side a one-sided limit approaches from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Below,
    Above,
}

/// Numerical one-sided limit of `f` at `x`, by linear extrapolation from two
/// probes at distance `PROBE_STEP` and `2 PROBE_STEP`. The caller must make
/// sure `f` has no jump strictly between `x` and the probes.
pub fn one_sided_limit(f: impl Fn(f64) -> f64, x: f64, side: Side) -> f64 {
    let s = match side {
        Side::Below => -PROBE_STEP,
        Side::Above => PROBE_STEP,
    };
    (2.0 * f(x + s) - f(x + 2.0 * s)).clamp(0.0, 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamStructure {
    tnorm: TNorm,
    shape: Shape,
}

impl ParamStructure {
    pub fn new(tnorm: TNorm, shape: Shape) -> Self {
        Self { tnorm, shape }
    }

    pub fn tnorm(&self) -> &TNorm {
        &self.tnorm
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn hom(&self, x: &Point, y: &Point) -> Result<f64> {
        hom_in(&self.tnorm, &self.shape, x, y)
    }

    /// The left-adjoint candidate `d(t)` of the shape, evaluated at `x`.
    pub fn d_map(&self, t: &Point, x: &Point) -> Result<f64> {
        let tn = &self.tnorm;
        match self.shape {
            Shape::AlphaR => Ok(d_alpha_r(tn, t.value()?, x.value()?)),
            Shape::AlphaL => Ok(d_alpha_l(tn, t.value()?, x.value()?)),
            Shape::XInfinity => match (t, x) {
                (Point::Infinity, Point::Infinity) => Ok(1.0),
                (Point::Infinity, _) => x.value().map(|_| 0.0),
                (Point::Value(v), _) if *v == 0.0 => self.hom(x, t),
                (_, Point::Infinity) => t.value(),
                _ => Ok(d_alpha_l(tn, t.value()?, x.value()?)),
            },
            Shape::Power(..) => Err(Error::Unsupported(
                "d_map on powers; use domain::way_below_power".into(),
            )),
        }
    }

    /// Underlying-order bottom element.
    pub fn bottom(&self) -> Result<Point> {
        match &self.shape {
            Shape::AlphaL => Ok(Point::Value(0.0)),
            Shape::AlphaR => Ok(Point::Value(1.0)),
            Shape::XInfinity => Err(Error::Precondition("[0,1] ∪ {∞} has no bottom element".into())),
            Shape::Power(base, k) => {
                let b = ParamStructure::new(self.tnorm.clone(), (**base).clone()).bottom()?;
                Ok(Point::Tuple(vec![b; *k]))
            }
        }
    }

    pub fn grid_points(&self, n: usize) -> Vec<Point> {
        points_of(&self.shape, n)
    }

    /// Restriction of the hom to the grid `{0, 1/n, ..., 1}` (plus `∞`).
    pub fn grid_snapshot(&self, n: usize) -> Result<FiniteQOrder> {
        if n == 0 {
            return Err(Error::Precondition("grid needs n >= 1".into()));
        }
        if let Shape::Power(base, k) = &self.shape {
            let factor = ParamStructure::new(self.tnorm.clone(), (**base).clone()).grid_snapshot(n)?;
            return FiniteQOrder::product(&self.tnorm, &vec![factor; *k]);
        }
        let pts = self.grid_points(n);
        let labels = pts.iter().map(Point::to_string).collect();
        let mut table = vec![vec![0.0; pts.len()]; pts.len()];
        for (i, x) in pts.iter().enumerate() {
            for (j, y) in pts.iter().enumerate() {
                table[i][j] = self.hom(x, y)?;
            }
        }
        FiniteQOrder::new(self.tnorm.clone(), labels, table)
    }

    /// Piece endpoints together with 0 and 1.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = vec![0.0, 1.0];
        for p in self.tnorm.pieces() {
            b.push(p.lo);
            b.push(p.hi);
        }
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// Grid points, breakpoints and probe points on both sides of each, for
    /// estimating infima over the whole interval.
    pub fn continuum_samples(&self, n: usize) -> Vec<f64> {
        let mut s: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        s.extend(self.breakpoints());
        let anchors = s.clone();
        for a in anchors {
            for off in [-PROBE_STEP, PROBE_STEP] {
                let v = a + off;
                if (0.0..=1.0).contains(&v) {
                    s.push(v);
                }
            }
        }
        s.sort_by(f64::total_cmp);
        s.dedup();
        s
    }
}

fn hom_in(t: &TNorm, shape: &Shape, x: &Point, y: &Point) -> Result<f64> {
    match shape {
        Shape::AlphaL => Ok(t.residuum(x.value()?, y.value()?)),
        Shape::AlphaR => Ok(t.residuum(y.value()?, x.value()?)),
        Shape::XInfinity => match (x, y) {
            (Point::Infinity, Point::Infinity) => Ok(1.0),
            (_, Point::Infinity) => x.value().map(|_| 0.0),
            (Point::Infinity, _) => y.value(),
            _ => Ok(t.residuum(x.value()?, y.value()?)),
        },
        Shape::Power(base, k) => match (x, y) {
            (Point::Tuple(xs), Point::Tuple(ys)) if xs.len() == *k && ys.len() == *k => xs
                .iter()
                .zip(ys)
                .try_fold(1.0_f64, |acc, (a, b)| Ok(acc.min(hom_in(t, base, a, b)?))),
            _ => Err(Error::Precondition(format!("power points must be {k}-tuples"))),
        },
    }
}

fn points_of(shape: &Shape, n: usize) -> Vec<Point> {
    let grid = (0..=n).map(|i| Point::Value(i as f64 / n.max(1) as f64));
    match shape {
        Shape::AlphaL | Shape::AlphaR => grid.collect(),
        Shape::XInfinity => grid.chain(std::iter::once(Point::Infinity)).collect(),
        Shape::Power(base, k) => {
            let factor = points_of(base, n);
            let mut out = vec![Vec::new()];
            for _ in 0..*k {
                out = out
                    .into_iter()
                    .flat_map(|v: Vec<Point>| {
                        factor.iter().map(move |p| {
                            let mut w = v.clone();
                            w.push(p.clone());
                            w
                        })
                    })
                    .collect();
            }
            out.into_iter().map(Point::Tuple).collect()
        }
    }
}

/// `d(t)(x)` on `([0,1], α_R)`: `t → x` at `t = 1`, else `⋁_{b>t} (b → x)`.
pub fn d_alpha_r(t: &TNorm, top: f64, x: f64) -> f64 {
    if top >= 1.0 {
        t.residuum(top, x)
    } else {
        t.residuum_limit_first_from_above(top, x)
    }
}

/// `d(t)(x)` on `([0,1], α_L)`: `x → 0` at `t = 0`, else `⋁_{b<t} (x → b)`.
pub fn d_alpha_l(t: &TNorm, bound: f64, x: f64) -> f64 {
    if bound <= 0.0 {
        t.residuum(x, 0.0)
    } else {
        t.residuum_limit_second_from_below(x, bound)
    }
}
