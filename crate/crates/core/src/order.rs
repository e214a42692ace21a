//! Finite [0,1]-ordered sets stored as value tables.
//!
//! `X(x, y)` is read with row = source `x` and column = target `y`. Weights
//! (enriched lower sets) are plain value vectors checked against the table.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tnorm::{TNorm, UnitValue, EPS};

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteQOrder {
    tnorm: TNorm,
    elements: Vec<String>,
    alpha: Vec<f64>,
    eps: f64,
}

/// On-disk form of a finite structure.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub tnorm: TNorm,
    pub elements: Vec<String>,
    pub alpha: Vec<Vec<f64>>,
}

/// Outcome of an exhaustive search for a defining element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Search {
    pub found: Option<usize>,
    /// More than one candidate satisfied the defining equations.
    pub ambiguous: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransitivityWitness {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    /// `X(y,z) & X(x,y)`
    pub composite: f64,
    /// `X(x,z)`
    pub direct: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderReport {
    pub size: usize,
    pub valid: bool,
    pub reflexivity_violations: Vec<usize>,
    pub transitivity_violations: usize,
    pub worst_transitivity: Option<TransitivityWitness>,
    pub separated: bool,
    /// Pairs `(x, y)`, `x != y`, with `x <= y` in the underlying preorder.
    pub underlying: Vec<(usize, usize)>,
}

fn check_table_shape(n: usize, table: &[Vec<f64>]) -> Result<()> {
    if table.len() != n {
        return Err(Error::NotSquare { row: table.len(), len: 0, expected: n });
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotSquare { row: i, len: row.len(), expected: n });
        }
        for (j, &v) in row.iter().enumerate() {
            UnitValue::at(v, &format!("alpha[{i}][{j}]"))?;
        }
    }
    Ok(())
}

/// Checks reflexivity and transitivity of a square table and reports the
/// underlying preorder.
pub fn check_q_order(tnorm: &TNorm, table: &[Vec<f64>], eps: f64) -> Result<OrderReport> {
    let n = table.len();
    check_table_shape(n, table)?;
    let reflexivity_violations: Vec<usize> =
        (0..n).filter(|&i| table[i][i] < 1.0 - eps).collect();
    let mut count = 0;
    let mut worst: Option<TransitivityWitness> = None;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let composite = tnorm.conj(table[y][z], table[x][y]);
                let direct = table[x][z];
                if composite > direct + eps {
                    count += 1;
                    let gap = composite - direct;
                    if worst.as_ref().is_none_or(|w| gap > w.composite - w.direct) {
                        worst = Some(TransitivityWitness { x, y, z, composite, direct });
                    }
                }
            }
        }
    }
    let leq = |i: usize, j: usize| table[i][j] >= 1.0 - eps;
    let mut underlying = Vec::new();
    let mut separated = true;
    for i in 0..n {
        for j in 0..n {
            if i != j && leq(i, j) {
                underlying.push((i, j));
                if leq(j, i) {
                    separated = false;
                }
            }
        }
    }
    Ok(OrderReport {
        size: n,
        valid: reflexivity_violations.is_empty() && count == 0,
        reflexivity_violations,
        transitivity_violations: count,
        worst_transitivity: worst,
        separated,
        underlying,
    })
}

impl FiniteQOrder {
    /// Builds a validated structure from a row-major table.
    pub fn new(tnorm: TNorm, elements: Vec<String>, alpha: Vec<Vec<f64>>) -> Result<Self> {
        let n = elements.len();
        let mut seen = HashSet::new();
        for e in &elements {
            if !seen.insert(e.as_str()) {
                return Err(Error::InvalidOrder(format!("duplicate element `{e}`")));
            }
        }
        check_table_shape(n, &alpha)?;
        let report = check_q_order(&tnorm, &alpha, EPS)?;
        if let Some(&x) = report.reflexivity_violations.first() {
            return Err(Error::InvalidOrder(format!(
                "X({0}, {0}) = {1} is below 1",
                elements[x], alpha[x][x]
            )));
        }
        if let Some(w) = report.worst_transitivity {
            return Err(Error::InvalidOrder(format!(
                "X({y},{z}) & X({x},{y}) = {c} exceeds X({x},{z}) = {d}",
                x = elements[w.x],
                y = elements[w.y],
                z = elements[w.z],
                c = w.composite,
                d = w.direct
            )));
        }
        Ok(Self { tnorm, elements, alpha: alpha.into_iter().flatten().collect(), eps: EPS })
    }

    pub fn from_fn(
        tnorm: TNorm,
        elements: Vec<String>,
        hom: impl Fn(usize, usize) -> f64,
    ) -> Result<Self> {
        let n = elements.len();
        let table = (0..n).map(|i| (0..n).map(|j| hom(i, j)).collect()).collect();
        Self::new(tnorm, elements, table)
    }

    /// The ω embedding of a crisp preorder: `X(x,y)` is 1 when `x <= y`, else 0.
    pub fn from_crisp(
        tnorm: TNorm,
        elements: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<Self> {
        Self::from_fn(tnorm, elements, |i, j| if leq(i, j) { 1.0 } else { 0.0 })
    }

    pub fn discrete(tnorm: TNorm, n: usize) -> Self {
        Self::from_crisp(tnorm, labels("x", n), |i, j| i == j).expect("discrete order is valid")
    }

    /// The crisp chain `c0 < c1 < ... < c(n-1)`.
    pub fn chain(tnorm: TNorm, n: usize) -> Self {
        Self::from_crisp(tnorm, labels("c", n), |i, j| i <= j).expect("chain is valid")
    }

    pub fn from_file(file: StructureFile) -> Result<Self> {
        Self::new(file.tnorm, file.elements, file.alpha)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }

    pub fn to_file(&self) -> StructureFile {
        StructureFile {
            tnorm: self.tnorm.clone(),
            elements: self.elements.clone(),
            alpha: self.table(),
        }
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

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn label(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.elements
            .iter()
            .position(|e| e == label)
            .ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    #[inline]
    pub fn hom(&self, x: usize, y: usize) -> f64 {
        self.alpha[x * self.len() + y]
    }

    pub fn table(&self) -> Vec<Vec<f64>> {
        self.alpha.chunks(self.len().max(1)).map(<[f64]>::to_vec).collect()
    }

    pub fn conj(&self, a: f64, b: f64) -> f64 {
        self.tnorm.conj(a, b)
    }

    pub fn residuum(&self, a: f64, b: f64) -> f64 {
        self.tnorm.residuum(a, b)
    }

    pub fn approx_eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.eps
    }

    /// `x <= y` in the underlying preorder.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.hom(x, y) >= 1.0 - self.eps
    }

    pub fn is_separated(&self) -> bool {
        (0..self.len()).all(|i| (0..i).all(|j| !(self.leq(i, j) && self.leq(j, i))))
    }

    pub fn opposite(&self) -> Self {
        let n = self.len();
        let mut alpha = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                alpha[j * n + i] = self.hom(i, j);
            }
        }
        Self { alpha, ..self.clone() }
    }

    /// Restriction to a subset of the carrier, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        for &i in indices {
            if i >= self.len() {
                return Err(Error::UnknownElement(format!("#{i}")));
            }
        }
        let elements = indices.iter().map(|&i| self.elements[i].clone()).collect();
        let alpha = indices
            .iter()
            .flat_map(|&i| indices.iter().map(move |&j| self.hom(i, j)))
            .collect();
        Ok(Self { alpha, elements, ..self.clone() })
    }

    /// Finite product; the hom is the meet of the component homs. The empty
    /// product is the one-point structure.
    pub fn product(tnorm: &TNorm, factors: &[FiniteQOrder]) -> Result<Self> {
        if factors.iter().any(|f| f.tnorm != *tnorm) {
            return Err(Error::TNormMismatch);
        }
        let mut out = Self {
            tnorm: tnorm.clone(),
            elements: vec!["()".to_string()],
            alpha: vec![1.0],
            eps: factors.first().map_or(EPS, |f| f.eps),
        };
        let mut parts: Vec<Vec<String>> = vec![Vec::new()];
        for f in factors {
            let (m, k) = (out.len(), f.len());
            let mut alpha = vec![0.0; m * k * m * k];
            for a in 0..m {
                for b in 0..k {
                    for c in 0..m {
                        for d in 0..k {
                            alpha[(a * k + b) * m * k + c * k + d] = out.hom(a, c).min(f.hom(b, d));
                        }
                    }
                }
            }
            parts = parts
                .iter()
                .flat_map(|p| {
                    f.elements.iter().map(move |e| {
                        let mut q = p.clone();
                        q.push(e.clone());
                        q
                    })
                })
                .collect();
            out.alpha = alpha;
            out.elements = parts.iter().map(|p| format!("({})", p.join(","))).collect();
        }
        Ok(out)
    }

    /// Index in a product carrier from component indices.
    pub fn product_index(sizes: &[usize], coords: &[usize]) -> usize {
        coords.iter().zip(sizes).fold(0, |acc, (&c, &s)| acc * s + c)
    }

    /// Component indices of a product carrier index.
    pub fn product_coords(sizes: &[usize], mut index: usize) -> Vec<usize> {
        let mut coords = vec![0; sizes.len()];
        for (c, &s) in coords.iter_mut().zip(sizes).rev() {
            *c = index % s;
            index /= s;
        }
        coords
    }

    /// First pair `(x, y)` violating `φ(y) & X(x,y) <= φ(x)`.
    pub fn weight_violation(&self, values: &[f64]) -> Option<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .find(|&(x, y)| self.conj(values[y], self.hom(x, y)) > values[x] + self.eps)
    }

    pub fn is_weight(&self, values: &[f64]) -> bool {
        values.len() == self.len() && self.weight_violation(values).is_none()
    }

    pub fn yoneda(&self, x: usize) -> Weight {
        Weight { values: (0..self.len()).map(|z| self.hom(z, x)).collect() }
    }

    pub fn yoneda_of(&self, label: &str) -> Result<Weight> {
        Ok(self.yoneda(self.index_of(label)?))
    }

    /// `⋀_x φ(x) → ψ(x)`.
    pub fn sub(&self, phi: &[f64], psi: &[f64]) -> Result<f64> {
        if phi.len() != psi.len() {
            return Err(Error::CarrierMismatch { expected: phi.len(), found: psi.len() });
        }
        Ok(sub_values(&self.tnorm, phi, psi))
    }

    /// Searches for `a` with `X(a, y) = sub(φ, X(−,y))` for every `y`.
    pub fn supremum(&self, phi: &[f64]) -> Search {
        let n = self.len();
        let target: Vec<f64> = (0..n)
            .map(|y| {
                let col: Vec<f64> = (0..n).map(|z| self.hom(z, y)).collect();
                sub_values(&self.tnorm, phi, &col)
            })
            .collect();
        self.search(|a| (0..n).all(|y| self.approx_eq(self.hom(a, y), target[y])))
    }

    /// Searches for the cotensor `p ↣ y`: `X(x, p ↣ y) = p → X(x, y)` for all `x`.
    pub fn cotensor(&self, p: f64, y: usize) -> Search {
        let n = self.len();
        let target: Vec<f64> = (0..n).map(|x| self.residuum(p, self.hom(x, y))).collect();
        self.search(|a| (0..n).all(|x| self.approx_eq(self.hom(x, a), target[x])))
    }

    fn search(&self, ok: impl Fn(usize) -> bool) -> Search {
        let mut hits = (0..self.len()).filter(|&a| ok(a));
        let found = hits.next();
        Search { found, ambiguous: found.is_some() && hits.next().is_some() }
    }

    /// All weights with values in `{0, 1/m, ..., 1}`.
    pub fn grid_weights(&self, m: usize) -> Vec<Weight> {
        grid_vectors(self.len(), m)
            .into_iter()
            .filter(|v| self.weight_violation(v).is_none())
            .map(|values| Weight { values })
            .collect()
    }
}

pub(crate) fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// `⋀_x φ(x) → ψ(x)` for vectors of equal length.
pub fn sub_values(t: &TNorm, phi: &[f64], psi: &[f64]) -> f64 {
    phi.iter().zip(psi).map(|(&a, &b)| t.residuum(a, b)).fold(1.0, f64::min)
}

/// Every vector of length `n` with entries in `{0, 1/m, ..., 1}`.
pub fn grid_vectors(n: usize, m: usize) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=m).map(move |k| {
                    let mut w = v.clone();
                    w.push(k as f64 / m as f64);
                    w
                })
            })
            .collect();
    }
    out
}

/// An enriched lower set `φ` with `φ(y) & X(x,y) <= φ(x)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Weight {
    values: Vec<f64>,
}

impl Weight {
    pub fn new(over: &FiniteQOrder, values: Vec<f64>) -> Result<Self> {
        if values.len() != over.len() {
            return Err(Error::CarrierMismatch { expected: over.len(), found: values.len() });
        }
        for (i, &v) in values.iter().enumerate() {
            UnitValue::at(v, &format!("weight[{i}]"))?;
        }
        if let Some((x, y)) = over.weight_violation(&values) {
            return Err(Error::InvalidWeight(format!(
                "φ({y}) & X({x},{y}) = {} exceeds φ({x}) = {}",
                over.conj(values[y], over.hom(x, y)),
                values[x]
            )));
        }
        Ok(Self { values })
    }

    pub(crate) fn trusted(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn join(&self, other: &Weight) -> Weight {
        Weight { values: self.values.iter().zip(&other.values).map(|(a, b)| a.max(*b)).collect() }
    }

    pub fn meet(&self, other: &Weight) -> Weight {
        Weight { values: self.values.iter().zip(&other.values).map(|(a, b)| a.min(*b)).collect() }
    }

    /// `⋁ φ = 1`.
    pub fn is_inhabited(&self, eps: f64) -> bool {
        self.values.iter().any(|&v| v >= 1.0 - eps)
    }
}

/// A map between finite carriers given by its assignment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QMap {
    assignment: Vec<usize>,
}

impl QMap {
    pub fn new(source: &FiniteQOrder, target: &FiniteQOrder, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::CarrierMismatch { expected: source.len(), found: assignment.len() });
        }
        if let Some(&bad) = assignment.iter().find(|&&a| a >= target.len()) {
            return Err(Error::UnknownElement(format!("#{bad}")));
        }
        Ok(Self { assignment })
    }

    pub fn identity(x: &FiniteQOrder) -> Self {
        Self { assignment: (0..x.len()).collect() }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.assignment[x]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// First pair with `X(x,y) > Y(f x, f y)`, if any.
    pub fn order_violation(&self, source: &FiniteQOrder, target: &FiniteQOrder) -> Option<(usize, usize)> {
        let n = source.len();
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).find(|&(x, y)| {
            source.hom(x, y) > target.hom(self.apply(x), self.apply(y)) + source.eps
        })
    }

    pub fn preserves_order(&self, source: &FiniteQOrder, target: &FiniteQOrder) -> bool {
        self.order_violation(source, target).is_none()
    }

    /// `f→(φ)(y) = ⋁_x φ(x) & Y(y, f(x))`.
    pub fn push_forward(&self, target: &FiniteQOrder, phi: &[f64]) -> Weight {
        let t = target.tnorm();
        Weight::trusted(
            (0..target.len())
                .map(|y| {
                    phi.iter()
                        .enumerate()
                        .map(|(x, &v)| t.conj(v, target.hom(y, self.apply(x))))
                        .fold(0.0, f64::max)
                })
                .collect(),
        )
    }

    /// `f←(ψ) = ψ ∘ f`.
    pub fn pull_back(&self, psi: &[f64]) -> Vec<f64> {
        self.assignment.iter().map(|&y| psi[y]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdjunctionReport {
    /// `Y(f x, y) = X(x, g y)` for all `x`, `y`.
    pub adjoint: bool,
    pub witness: Option<(usize, usize)>,
    /// Both maps preserve order and `f x <= y ⟺ x <= g y` in the underlying orders.
    pub characterization: bool,
    pub agree: bool,
}

/// Tests `f ⊣ g` for `f: X → Y`, `g: Y → X` directly and through the
/// order-preservation characterization.
pub fn check_adjunction(
    x: &FiniteQOrder,
    y: &FiniteQOrder,
    f: &QMap,
    g: &QMap,
) -> Result<AdjunctionReport> {
    if f.assignment.len() != x.len() || g.assignment.len() != y.len() {
        return Err(Error::CarrierMismatch {
            expected: x.len() + y.len(),
            found: f.assignment.len() + g.assignment.len(),
        });
    }
    if f.assignment.iter().any(|&v| v >= y.len()) || g.assignment.iter().any(|&v| v >= x.len()) {
        return Err(Error::Precondition("map assignment leaves its target carrier".into()));
    }
    let witness = (0..x.len())
        .flat_map(|a| (0..y.len()).map(move |b| (a, b)))
        .find(|&(a, b)| !x.approx_eq(y.hom(f.apply(a), b), x.hom(a, g.apply(b))));
    let galois = (0..x.len())
        .all(|a| (0..y.len()).all(|b| y.leq(f.apply(a), b) == x.leq(a, g.apply(b))));
    let characterization = f.preserves_order(x, y) && g.preserves_order(y, x) && galois;
    let adjoint = witness.is_none();
    Ok(AdjunctionReport { adjoint, witness, characterization, agree: adjoint == characterization })
}
