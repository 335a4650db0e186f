//! Column generators for the extended operator `M`.
//!
//! Column `j` of `M` is the basis function with natural index `order[j]`
//! evaluated at every sample point, where `order` is the permutation chosen by
//! [`ColumnOrdering`]. Every family is truncated to a finite column budget, so
//! norms of the unmodeled block are truncations of their infinite
//! counterparts.

use std::f64::consts::PI;
use std::ops::Range;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::linalg::{Field, Matrix};
use crate::points::Points;

#[derive(Debug, Clone, PartialEq)]
pub enum BasisFamily {
    /// `t^k` on `[a, b]`.
    Monomial { interval: (f64, f64) },
    /// Chebyshev polynomials of the first kind on `[-1, 1]`.
    Chebyshev,
    /// Legendre polynomials on `[-1, 1]`, normalized so `P_k(1) = 1`.
    Legendre,
    /// `exp(2 pi i k t / period)` on `[0, period)`. Natural indices below
    /// `base` are frequencies `0..base`; beyond that frequencies alternate
    /// `base, -1, base + 1, -2, ...`.
    FourierDiscrete { period: f64, base: usize },
    /// `exp(i pi <t, v_k>)` with standard normal `v_k`.
    RandomFourierFeatures { feature_seed: u64 },
    /// `max(0, <t, v_k>)` with standard normal `v_k`.
    RandomReluFeatures { feature_seed: u64 },
    /// Products of `+-1` spins over clusters of sites on a periodic chain.
    ClusterIsing {
        chain_length: usize,
        max_order: usize,
    },
}

impl BasisFamily {
    pub fn field(&self) -> Field {
        match self {
            BasisFamily::FourierDiscrete { .. } | BasisFamily::RandomFourierFeatures { .. } => {
                Field::Complex
            }
            _ => Field::Real,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BasisFamily::Monomial { .. } => "monomial",
            BasisFamily::Chebyshev => "chebyshev",
            BasisFamily::Legendre => "legendre",
            BasisFamily::FourierDiscrete { .. } => "fourier_discrete",
            BasisFamily::RandomFourierFeatures { .. } => "random_fourier_features",
            BasisFamily::RandomReluFeatures { .. } => "random_relu_features",
            BasisFamily::ClusterIsing { .. } => "cluster_ising",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnOrdering {
    Natural,
    SeededPermutation(u64),
    /// Clusters sorted by (order, diameter, sites). Cluster family only.
    PhysicalClusterOrder,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisSpec {
    pub family: BasisFamily,
    pub input_dim: usize,
    /// Total number of columns of `M`, modeled and unmodeled.
    pub column_budget: usize,
    pub ordering: ColumnOrdering,
}

impl BasisSpec {
    pub fn new(family: BasisFamily, input_dim: usize, column_budget: usize) -> Self {
        Self {
            family,
            input_dim,
            column_budget,
            ordering: ColumnOrdering::Natural,
        }
    }

    pub fn with_ordering(mut self, ordering: ColumnOrdering) -> Self {
        self.ordering = ordering;
        self
    }
}

/// The i.i.d. standard normal directions `v_k` of a random feature map.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureWeights {
    dim: usize,
    values: Vec<f64>,
}

impl FeatureWeights {
    /// Draws `count` vectors; vector `k` depends only on `(seed, dim, k)`.
    pub fn generate(seed: u64, count: usize, dim: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..count * dim)
            .map(|_| rng.sample(StandardNormal))
            .collect();
        Self { dim, values }
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.dim.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.values[k * self.dim..(k + 1) * self.dim]
    }
}

/// A cluster of sites on a periodic chain; the empty cluster is the constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterBasisIndex {
    pub sites: Vec<usize>,
    pub order: usize,
    pub diameter: usize,
}

impl ClusterBasisIndex {
    pub fn new(sites: Vec<usize>, chain_length: usize) -> Self {
        let diameter = periodic_diameter(&sites, chain_length);
        Self {
            order: sites.len(),
            sites,
            diameter,
        }
    }

    fn physical_key(&self) -> (usize, usize, &[usize]) {
        (self.order, self.diameter, &self.sites)
    }
}

/// Largest periodic separation between any two sites.
pub fn periodic_diameter(sites: &[usize], chain_length: usize) -> usize {
    let mut best = 0;
    for (a, &i) in sites.iter().enumerate() {
        for &j in &sites[a + 1..] {
            let d = i.abs_diff(j);
            best = best.max(d.min(chain_length - d));
        }
    }
    best
}

/// All clusters with at most `max_order` sites, ordered by size and then
/// lexicographically by sites. This is the natural column order.
pub fn enumerate_clusters(chain_length: usize, max_order: usize) -> Vec<ClusterBasisIndex> {
    fn extend(
        start: usize,
        left: usize,
        chain_length: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<ClusterBasisIndex>,
    ) {
        if left == 0 {
            out.push(ClusterBasisIndex::new(current.clone(), chain_length));
            return;
        }
        for site in start..chain_length {
            if chain_length - site < left {
                break;
            }
            current.push(site);
            extend(site + 1, left - 1, chain_length, current, out);
            current.pop();
        }
    }

    let mut out = Vec::new();
    for order in 0..=max_order.min(chain_length) {
        extend(0, order, chain_length, &mut Vec::new(), &mut out);
    }
    out
}

/// Frequency carried by natural Fourier index `j`.
pub fn fourier_frequency(j: usize, base: usize) -> i64 {
    if j < base {
        return j as i64;
    }
    let q = (j - base) as i64;
    if q % 2 == 0 {
        base as i64 + q / 2
    } else {
        -(q / 2 + 1)
    }
}

/// Column permutation for `spec`: column `j` of `M` is natural basis
/// function `order[j]`.
pub fn column_order(spec: &BasisSpec) -> Result<Vec<usize>> {
    let budget = spec.column_budget;
    let mut order: Vec<usize> = (0..budget).collect();
    match spec.ordering {
        ColumnOrdering::Natural => {}
        ColumnOrdering::SeededPermutation(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            order.shuffle(&mut rng);
        }
        ColumnOrdering::PhysicalClusterOrder => {
            let BasisFamily::ClusterIsing {
                chain_length,
                max_order,
            } = spec.family
            else {
                return Err(invalid(format!(
                    "physical cluster ordering requires the cluster family, not {}",
                    spec.family.name()
                )));
            };
            let clusters = enumerate_clusters(chain_length, max_order);
            if clusters.len() < budget {
                return Err(invalid(format!(
                    "column budget {budget} exceeds the {} enumerated clusters",
                    clusters.len()
                )));
            }
            order.sort_by(|&a, &b| clusters[a].physical_key().cmp(&clusters[b].physical_key()));
        }
    }
    Ok(order)
}

/// An evaluated block of `M` over the family's scalar field.
#[derive(Debug, Clone, PartialEq)]
pub enum DesignMatrix {
    Real(Matrix<f64>),
    Complex(Matrix<Complex64>),
}

impl DesignMatrix {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            DesignMatrix::Real(m) => m.shape(),
            DesignMatrix::Complex(m) => m.shape(),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            DesignMatrix::Real(_) => Field::Real,
            DesignMatrix::Complex(_) => Field::Complex,
        }
    }

    pub fn into_real(self) -> Option<Matrix<f64>> {
        match self {
            DesignMatrix::Real(m) => Some(m),
            DesignMatrix::Complex(_) => None,
        }
    }

    pub fn into_complex(self) -> Matrix<Complex64> {
        match self {
            DesignMatrix::Real(m) => m.map(|v| Complex64::new(v, 0.0)),
            DesignMatrix::Complex(m) => m,
        }
    }
}

/// A validated basis with its column order, feature weights and clusters
/// materialized once.
#[derive(Debug, Clone)]
pub struct Basis {
    spec: BasisSpec,
    order: Vec<usize>,
    weights: Option<FeatureWeights>,
    clusters: Vec<ClusterBasisIndex>,
}

impl Basis {
    pub fn new(spec: BasisSpec) -> Result<Self> {
        if spec.column_budget == 0 {
            return Err(invalid("column_budget must be >= 1"));
        }
        if spec.input_dim == 0 {
            return Err(invalid("input_dim must be >= 1"));
        }
        let mut weights = None;
        let mut clusters = Vec::new();
        match spec.family {
            BasisFamily::Monomial { interval: (a, b) } => {
                if !(a.is_finite() && b.is_finite() && a < b) {
                    return Err(invalid(format!(
                        "monomial interval [{a}, {b}] is empty or non-finite"
                    )));
                }
                require_scalar_input(&spec)?;
            }
            BasisFamily::Chebyshev | BasisFamily::Legendre => require_scalar_input(&spec)?,
            BasisFamily::FourierDiscrete { period, base } => {
                if !(period.is_finite() && period > 0.0) {
                    return Err(invalid(format!(
                        "fourier period must be positive, got {period}"
                    )));
                }
                if base == 0 {
                    return Err(invalid("fourier base must be >= 1"));
                }
                require_scalar_input(&spec)?;
            }
            BasisFamily::RandomFourierFeatures { feature_seed }
            | BasisFamily::RandomReluFeatures { feature_seed } => {
                weights = Some(FeatureWeights::generate(
                    feature_seed,
                    spec.column_budget,
                    spec.input_dim,
                ));
            }
            BasisFamily::ClusterIsing {
                chain_length,
                max_order,
            } => {
                if !(2..=24).contains(&chain_length) {
                    return Err(invalid(format!(
                        "chain_length must lie in 2..=24, got {chain_length}"
                    )));
                }
                if spec.input_dim != chain_length {
                    return Err(invalid(format!(
                        "cluster basis on a chain of {chain_length} sites needs input_dim {chain_length}, got {}",
                        spec.input_dim
                    )));
                }
                clusters = enumerate_clusters(chain_length, max_order);
                if clusters.len() < spec.column_budget {
                    return Err(invalid(format!(
                        "column budget {} exceeds the {} clusters of order <= {max_order}",
                        spec.column_budget,
                        clusters.len()
                    )));
                }
            }
        }
        let order = column_order(&spec)?;
        Ok(Self {
            spec,
            order,
            weights,
            clusters,
        })
    }

    pub fn spec(&self) -> &BasisSpec {
        &self.spec
    }

    pub fn field(&self) -> Field {
        self.spec.family.field()
    }

    pub fn budget(&self) -> usize {
        self.spec.column_budget
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Clusters in natural order (cluster family only; empty otherwise).
    pub fn clusters(&self) -> &[ClusterBasisIndex] {
        &self.clusters
    }

    pub fn feature_weights(&self) -> Option<&FeatureWeights> {
        self.weights.as_ref()
    }

    fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.spec.input_dim {
            return Err(invalid(format!(
                "point has dimension {}, basis expects {}",
                p.len(),
                self.spec.input_dim
            )));
        }
        let in_range =
            |x: f64, lo: f64, hi: f64, closed: bool| x >= lo && (x < hi || (closed && x == hi));
        let ok = match self.spec.family {
            BasisFamily::Monomial { interval: (a, b) } => in_range(p[0], a, b, true),
            BasisFamily::Chebyshev | BasisFamily::Legendre => in_range(p[0], -1.0, 1.0, true),
            BasisFamily::FourierDiscrete { period, .. } => in_range(p[0], 0.0, period, false),
            BasisFamily::RandomFourierFeatures { .. } | BasisFamily::RandomReluFeatures { .. } => {
                p.iter().all(|v| v.is_finite())
            }
            BasisFamily::ClusterIsing { .. } => p.iter().all(|&s| s == 1.0 || s == -1.0),
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!(
                "point {p:?} lies outside the domain of the {} basis",
                self.spec.family.name()
            )))
        }
    }

    /// Evaluates columns `cols` (in ordered position) at every point.
    pub fn evaluate(&self, points: &Points, cols: Range<usize>) -> Result<DesignMatrix> {
        if cols.start > cols.end || cols.end > self.budget() {
            return Err(Error::BudgetExceeded {
                lo: cols.start,
                hi: cols.end,
                budget: self.budget(),
            });
        }
        for p in points.iter() {
            self.check_point(p)?;
        }
        let natural = &self.order[cols];
        let rows = points.len();
        let width = natural.len();
        let out = match self.spec.family {
            BasisFamily::Monomial { .. } => {
                DesignMatrix::Real(Matrix::from_fn(rows, width, |i, j| {
                    points.row(i)[0].powi(natural[j] as i32)
                }))
            }
            BasisFamily::Chebyshev | BasisFamily::Legendre => {
                let max_degree = natural.iter().copied().max().unwrap_or(0);
                let legendre = self.spec.family == BasisFamily::Legendre;
                let mut m = Matrix::zeros(rows, width);
                for i in 0..rows {
                    let x = points.row(i)[0];
                    let values = if legendre {
                        legendre_values(x, max_degree)
                    } else {
                        chebyshev_values(x, max_degree)
                    };
                    for (j, &k) in natural.iter().enumerate() {
                        m[(i, j)] = values[k];
                    }
                }
                DesignMatrix::Real(m)
            }
            BasisFamily::FourierDiscrete { period, base } => {
                DesignMatrix::Complex(Matrix::from_fn(rows, width, |i, j| {
                    let k = fourier_frequency(natural[j], base) as f64;
                    let turns = (k * points.row(i)[0] / period).rem_euclid(1.0);
                    Complex64::from_polar(1.0, 2.0 * PI * turns)
                }))
            }
            BasisFamily::RandomFourierFeatures { .. } => {
                let w = self.weights.as_ref().expect("feature weights");
                DesignMatrix::Complex(Matrix::from_fn(rows, width, |i, j| {
                    Complex64::from_polar(1.0, PI * dot(points.row(i), w.vector(natural[j])))
                }))
            }
            BasisFamily::RandomReluFeatures { .. } => {
                let w = self.weights.as_ref().expect("feature weights");
                DesignMatrix::Real(Matrix::from_fn(rows, width, |i, j| {
                    dot(points.row(i), w.vector(natural[j])).max(0.0)
                }))
            }
            BasisFamily::ClusterIsing { .. } => {
                DesignMatrix::Real(Matrix::from_fn(rows, width, |i, j| {
                    let spins = points.row(i);
                    self.clusters[natural[j]]
                        .sites
                        .iter()
                        .map(|&s| spins[s])
                        .product()
                }))
            }
        };
        Ok(out)
    }
}

fn require_scalar_input(spec: &BasisSpec) -> Result<()> {
    if spec.input_dim == 1 {
        Ok(())
    } else {
        Err(invalid(format!(
            "{} basis takes 1-dimensional input, got input_dim {}",
            spec.family.name(),
            spec.input_dim
        )))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Convenience wrapper: validate `spec` and evaluate ordered columns `cols`.
pub fn evaluate_columns(
    spec: &BasisSpec,
    points: &Points,
    cols: Range<usize>,
) -> Result<DesignMatrix> {
    Basis::new(spec.clone())?.evaluate(points, cols)
}

/// `P_0(x), ..., P_max_degree(x)` by the three-term recurrence.
pub fn legendre_values(x: f64, max_degree: usize) -> Vec<f64> {
    let mut values = Vec::with_capacity(max_degree + 1);
    values.push(1.0);
    if max_degree >= 1 {
        values.push(x);
    }
    for k in 1..max_degree {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * values[k] - kf * values[k - 1]) / (kf + 1.0);
        values.push(next);
    }
    values
}

/// `T_0(x), ..., T_max_degree(x)` by the three-term recurrence.
pub fn chebyshev_values(x: f64, max_degree: usize) -> Vec<f64> {
    let mut values = Vec::with_capacity(max_degree + 1);
    values.push(1.0);
    if max_degree >= 1 {
        values.push(x);
    }
    for k in 1..max_degree {
        values.push(2.0 * x * values[k] - values[k - 1]);
    }
    values
}

/// `(P_n(x), P_n'(x))`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
    }
    let nf = n as f64;
    (p, nf * (x * p - p_prev) / (x * x - 1.0))
}

/// The `n` roots of `P_n`, ascending, found by Newton iteration from
/// Chebyshev-angle starting points. Nodes are exactly symmetric about 0.
pub fn legendre_gauss_nodes(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(invalid("legendre_gauss_nodes needs n >= 1"));
    }
    if n == 1 {
        return Ok(vec![0.0]);
    }
    let nf = n as f64;
    let mut upper = Vec::with_capacity(n / 2);
    for i in 0..n / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let step = p / dp;
            x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        upper.push(x);
    }
    let mut nodes: Vec<f64> = upper.iter().map(|x| -x).collect();
    if n % 2 == 1 {
        nodes.push(0.0);
    }
    nodes.extend(upper.iter().rev());
    Ok(nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(values: &[f64]) -> Points {
        Points::scalars(values.to_vec()).unwrap()
    }

    #[test]
    fn monomial_vandermonde() {
        let spec = BasisSpec::new(
            BasisFamily::Monomial {
                interval: (0.0, 2.0),
            },
            1,
            5,
        );
        let m = evaluate_columns(&spec, &line(&[0.0, 1.0, 2.0]), 0..3)
            .unwrap()
            .into_real()
            .unwrap();
        let expected = Matrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 2.0, 4.0]);
        assert_eq!(m, expected);
    }

    #[test]
    fn fourier_column_aliases_exactly() {
        let spec = BasisSpec::new(
            BasisFamily::FourierDiscrete {
                period: 1.0,
                base: 4,
            },
            1,
            12,
        );
        let pts = line(&[0.0, 0.25, 0.5, 0.75]);
        let m = evaluate_columns(&spec, &pts, 0..12).unwrap().into_complex();
        // natural index 4 carries frequency 4 = n
        assert_eq!(fourier_frequency(4, 4), 4);
        for i in 0..4 {
            assert_eq!(m[(i, 4)], m[(i, 0)]);
            assert_eq!(m[(i, 4)], Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn fourier_frequency_interleaves() {
        let got: Vec<i64> = (0..9).map(|j| fourier_frequency(j, 3)).collect();
        assert_eq!(got, vec![0, 1, 2, 3, -1, 4, -2, 5, -3]);
    }

    #[test]
    fn fourier_periodicity_for_inexact_grid() {
        let n = 3;
        let spec = BasisSpec::new(
            BasisFamily::FourierDiscrete {
                period: 1.0,
                base: n,
            },
            1,
            2 * n + 20,
        );
        let pts = line(&(0..n).map(|l| l as f64 / n as f64).collect::<Vec<_>>());
        let basis = Basis::new(spec).unwrap();
        let m = basis
            .evaluate(&pts, 0..basis.budget())
            .unwrap()
            .into_complex();
        let freq: Vec<i64> = (0..basis.budget())
            .map(|j| fourier_frequency(j, n))
            .collect();
        for (a, fa) in freq.iter().enumerate() {
            for (b, fb) in freq.iter().enumerate() {
                if fb - fa == n as i64 {
                    for i in 0..n {
                        assert!((m[(i, a)] - m[(i, b)]).norm() <= 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn cluster_columns_on_all_up_spins() {
        let spec = BasisSpec::new(
            BasisFamily::ClusterIsing {
                chain_length: 3,
                max_order: 3,
            },
            3,
            8,
        );
        let pts = Points::new(3, vec![1.0, 1.0, 1.0]).unwrap();
        let m = evaluate_columns(&spec, &pts, 0..8)
            .unwrap()
            .into_real()
            .unwrap();
        assert!(m.iter().all(|v| *v == 1.0));
    }

    #[test]
    fn physical_order_on_four_site_chain() {
        let spec = BasisSpec::new(
            BasisFamily::ClusterIsing {
                chain_length: 4,
                max_order: 4,
            },
            4,
            16,
        )
        .with_ordering(ColumnOrdering::PhysicalClusterOrder);
        let basis = Basis::new(spec).unwrap();
        let ordered: Vec<&ClusterBasisIndex> = basis
            .order()
            .iter()
            .map(|&k| &basis.clusters()[k])
            .collect();
        assert!(ordered[0].sites.is_empty());
        assert!(ordered[1..5].iter().all(|c| c.order == 1));
        let pairs: Vec<(Vec<usize>, usize)> = ordered[5..11]
            .iter()
            .map(|c| (c.sites.clone(), c.diameter))
            .collect();
        assert_eq!(
            pairs,
            vec![
                (vec![0, 1], 1),
                (vec![0, 3], 1),
                (vec![1, 2], 1),
                (vec![2, 3], 1),
                (vec![0, 2], 2),
                (vec![1, 3], 2),
            ]
        );
        assert!(ordered[11..15].iter().all(|c| c.order == 3));
        assert_eq!(ordered[15].order, 4);
    }

    #[test]
    fn natural_and_seeded_orders() {
        let spec = BasisSpec::new(BasisFamily::Legendre, 1, 4);
        assert_eq!(column_order(&spec).unwrap(), vec![0, 1, 2, 3]);
        let seeded = spec
            .clone()
            .with_ordering(ColumnOrdering::SeededPermutation(7));
        let a = column_order(&seeded).unwrap();
        let b = column_order(&seeded).unwrap();
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2, 3]);
    }

    #[test]
    fn physical_order_requires_cluster_family() {
        let spec = BasisSpec::new(BasisFamily::Legendre, 1, 4)
            .with_ordering(ColumnOrdering::PhysicalClusterOrder);
        assert!(matches!(column_order(&spec), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn legendre_gauss_small_cases() {
        assert_eq!(legendre_gauss_nodes(1).unwrap(), vec![0.0]);
        let two = legendre_gauss_nodes(2).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!((two[0] + r).abs() < 1e-15 && (two[1] - r).abs() < 1e-15);
        let five = legendre_gauss_nodes(5).unwrap();
        assert_eq!(five[2], 0.0);
        for i in 0..5 {
            assert_eq!(five[i], -five[4 - i]);
            assert!(legendre_with_derivative(5, five[i]).0.abs() < 1e-13);
        }
        assert!(legendre_gauss_nodes(0).is_err());
    }

    #[test]
    fn legendre_gauss_residuals_and_order() {
        for n in 1..=60 {
            let nodes = legendre_gauss_nodes(n).unwrap();
            assert_eq!(nodes.len(), n);
            assert!(nodes.windows(2).all(|w| w[0] < w[1]), "n = {n}");
            assert!(nodes.iter().all(|x| x.abs() < 1.0));
            for &x in &nodes {
                let p = *legendre_values(x, n).last().unwrap();
                assert!(p.abs() < 1e-13, "n = {n}, x = {x}, P_n = {p:e}");
            }
        }
    }

    #[test]
    fn domain_and_budget_errors() {
        let spec = BasisSpec::new(BasisFamily::Legendre, 1, 4);
        assert!(matches!(
            evaluate_columns(&spec, &line(&[1.5]), 0..2),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            evaluate_columns(&spec, &line(&[0.5]), 2..5),
            Err(Error::BudgetExceeded { .. })
        ));
        let spins = BasisSpec::new(
            BasisFamily::ClusterIsing {
                chain_length: 2,
                max_order: 2,
            },
            2,
            4,
        );
        let bad = Points::new(2, vec![1.0, 0.5]).unwrap();
        assert!(evaluate_columns(&spins, &bad, 0..4).is_err());
    }

    #[test]
    fn relu_features_are_nonnegative_and_reproducible() {
        let spec = BasisSpec::new(BasisFamily::RandomReluFeatures { feature_seed: 9 }, 3, 20);
        let pts = Points::new(3, vec![0.1, -2.0, 0.3, 1.0, 1.0, -1.0]).unwrap();
        let a = evaluate_columns(&spec, &pts, 0..20)
            .unwrap()
            .into_real()
            .unwrap();
        let b = evaluate_columns(&spec, &pts, 0..20)
            .unwrap()
            .into_real()
            .unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|v| *v >= 0.0));
        assert_eq!(
            FeatureWeights::generate(9, 20, 3),
            FeatureWeights::generate(9, 20, 3)
        );
    }
}
