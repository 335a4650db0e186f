//! Training sets, prediction grids and ground-truth parameter vectors.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bases::legendre_gauss_nodes;
use crate::error::{invalid, Result};
use crate::points::Points;

/// Attempts made to draw a duplicate-free training set before giving up.
const MAX_RETRIES: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOrder {
    /// By minimal period of the configuration, then lexicographically.
    Physical,
    Seeded,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DesignStrategy {
    /// i.i.d. uniform training points on `[a, b]`; midpoint grid for prediction.
    UniformInterval { a: f64, b: f64 },
    /// `t_k = k T / n` on `[0, T)`; prediction grid `l T / grid_size`.
    Equispaced { period: f64 },
    /// Roots of `P_n` on `[-1, 1]`; midpoint grid for prediction.
    LegendreGauss,
    /// Uniform on the sphere of radius `sqrt(dim)`; fresh samples for prediction.
    SphereUniform { dim: usize },
    /// All `2^L` spin configurations of a periodic chain, first `n` rows train.
    ChainConfigurations {
        chain_length: usize,
        row_order: RowOrder,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    UniformInterval,
    Equispaced,
    LegendreGauss,
    SphereUniform,
    FromDataset,
    ChainConfigurations,
}

impl DesignStrategy {
    pub fn kind(&self) -> StrategyKind {
        match self {
            DesignStrategy::UniformInterval { .. } => StrategyKind::UniformInterval,
            DesignStrategy::Equispaced { .. } => StrategyKind::Equispaced,
            DesignStrategy::LegendreGauss => StrategyKind::LegendreGauss,
            DesignStrategy::SphereUniform { .. } => StrategyKind::SphereUniform,
            DesignStrategy::ChainConfigurations { .. } => StrategyKind::ChainConfigurations,
        }
    }
}

/// Training points `T` and a finite prediction grid standing in for `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleDesign {
    pub train_points: Points,
    pub prediction_points: Points,
    pub strategy: StrategyKind,
    /// Requested seed.
    pub seed: u64,
    /// Seed actually used; differs from `seed` when duplicate draws forced a retry.
    pub seed_used: u64,
}

impl SampleDesign {
    pub fn n_train(&self) -> usize {
        self.train_points.len()
    }

    /// Training rows first, then prediction rows.
    pub fn all_points(&self) -> Points {
        self.train_points
            .concat(&self.prediction_points)
            .expect("train and prediction points share a dimension")
    }
}

fn point_key(p: &[f64]) -> Vec<u64> {
    // `+ 0.0` folds -0.0 onto 0.0
    p.iter().map(|v| (v + 0.0).to_bits()).collect()
}

fn has_duplicates(points: &Points) -> bool {
    let mut seen = HashSet::with_capacity(points.len());
    points.iter().any(|p| !seen.insert(point_key(p)))
}

fn without_training_points(candidates: Points, train: &Points) -> Points {
    let taken: HashSet<Vec<u64>> = train.iter().map(point_key).collect();
    let mut out = Points::empty(candidates.dim());
    for p in candidates.iter() {
        if !taken.contains(&point_key(p)) {
            out.push(p);
        }
    }
    out
}

fn midpoint_grid(a: f64, b: f64, size: usize) -> Points {
    let h = (b - a) / size as f64;
    Points::scalars((0..size).map(|l| a + (l as f64 + 0.5) * h).collect()).expect("finite grid")
}

pub(crate) fn sphere_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            let radius = (dim as f64).sqrt();
            return v.iter().map(|x| x / norm * radius).collect();
        }
    }
}

/// Smallest period `p` (dividing `spins.len()`) under cyclic shifts.
pub fn minimal_period(spins: &[f64]) -> usize {
    let len = spins.len();
    (1..=len)
        .filter(|p| len.is_multiple_of(*p))
        .find(|&p| (0..len).all(|i| spins[i] == spins[(i + p) % len]))
        .unwrap_or(len)
}

/// Spin configuration for index `bits`: site `s` is `-1` when bit
/// `len - 1 - s` is set, so ascending `bits` is lexicographic in the sites.
pub fn chain_configuration(bits: u64, chain_length: usize) -> Vec<f64> {
    (0..chain_length)
        .map(|s| {
            if bits >> (chain_length - 1 - s) & 1 == 1 {
                -1.0
            } else {
                1.0
            }
        })
        .collect()
}

/// All `2^L` configurations in the requested row order.
pub fn chain_configurations(chain_length: usize, row_order: RowOrder, seed: u64) -> Vec<Vec<f64>> {
    let mut configs: Vec<Vec<f64>> = (0..1u64 << chain_length)
        .map(|bits| chain_configuration(bits, chain_length))
        .collect();
    match row_order {
        // stable sort keeps the lexicographic order within a period class
        RowOrder::Physical => configs.sort_by_key(|c| minimal_period(c)),
        RowOrder::Seeded => configs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed)),
    }
    configs
}

fn validate_counts(n: usize, grid_size: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("n must be >= 1"));
    }
    if grid_size == 0 {
        return Err(invalid("grid_size must be >= 1"));
    }
    Ok(())
}

fn finish(design: SampleDesign) -> Result<SampleDesign> {
    if design.prediction_points.is_empty() {
        return Err(invalid(
            "prediction grid is empty after removing training points",
        ));
    }
    Ok(design)
}

/// Builds the training set and prediction grid for `strategy`.
///
/// Random strategies that draw a duplicate training point retry with the
/// next seed; the seed that succeeded is recorded in `seed_used`.
pub fn make_design(
    strategy: &DesignStrategy,
    n: usize,
    grid_size: usize,
    seed: u64,
) -> Result<SampleDesign> {
    validate_counts(n, grid_size)?;
    let kind = strategy.kind();
    let build = |train: Points, prediction: Points, seed_used: u64| {
        let prediction = without_training_points(prediction, &train);
        finish(SampleDesign {
            train_points: train,
            prediction_points: prediction,
            strategy: kind,
            seed,
            seed_used,
        })
    };
    match *strategy {
        DesignStrategy::UniformInterval { a, b } => {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(invalid(format!(
                    "interval [{a}, {b}] is empty or non-finite"
                )));
            }
            for attempt in 0..MAX_RETRIES {
                let seed_used = seed.wrapping_add(attempt);
                let mut rng = ChaCha8Rng::seed_from_u64(seed_used);
                let train = Points::scalars((0..n).map(|_| rng.random_range(a..=b)).collect())?;
                if !has_duplicates(&train) {
                    return build(train, midpoint_grid(a, b, grid_size), seed_used);
                }
            }
            Err(invalid("could not draw distinct training points"))
        }
        DesignStrategy::Equispaced { period } => {
            if !(period.is_finite() && period > 0.0) {
                return Err(invalid(format!("period must be positive, got {period}")));
            }
            let train = Points::scalars((0..n).map(|k| k as f64 * period / n as f64).collect())?;
            let grid = Points::scalars(
                (0..grid_size)
                    .map(|l| l as f64 * period / grid_size as f64)
                    .collect(),
            )?;
            build(train, grid, seed)
        }
        DesignStrategy::LegendreGauss => {
            let train = Points::scalars(legendre_gauss_nodes(n)?)?;
            build(train, midpoint_grid(-1.0, 1.0, grid_size), seed)
        }
        DesignStrategy::SphereUniform { dim } => {
            if dim == 0 {
                return Err(invalid("sphere dimension must be >= 1"));
            }
            for attempt in 0..MAX_RETRIES {
                let seed_used = seed.wrapping_add(attempt);
                let mut rng = ChaCha8Rng::seed_from_u64(seed_used);
                let train = Points::new(
                    dim,
                    (0..n).flat_map(|_| sphere_point(&mut rng, dim)).collect(),
                )?;
                if has_duplicates(&train) {
                    continue;
                }
                let grid = Points::new(
                    dim,
                    (0..grid_size)
                        .flat_map(|_| sphere_point(&mut rng, dim))
                        .collect(),
                )?;
                return build(train, grid, seed_used);
            }
            Err(invalid("could not draw distinct sphere points"))
        }
        DesignStrategy::ChainConfigurations {
            chain_length,
            row_order,
        } => {
            if !(2..=24).contains(&chain_length) {
                return Err(invalid(format!(
                    "chain_length must lie in 2..=24, got {chain_length}"
                )));
            }
            let configs = chain_configurations(chain_length, row_order, seed);
            if n >= configs.len() {
                return Err(invalid(format!(
                    "n = {n} leaves no prediction rows among {} configurations",
                    configs.len()
                )));
            }
            let train = Points::from_rows(chain_length, &configs[..n])?;
            let end = n.saturating_add(grid_size).min(configs.len());
            let grid = Points::from_rows(chain_length, &configs[n..end])?;
            build(train, grid, seed)
        }
    }
}

/// Draws `n` training points uniformly without replacement from `cloud`
/// and up to `grid_size` further points for prediction.
pub fn design_from_points(
    cloud: &Points,
    n: usize,
    grid_size: usize,
    seed: u64,
) -> Result<SampleDesign> {
    validate_counts(n, grid_size)?;
    if n >= cloud.len() {
        return Err(invalid(format!(
            "dataset holds {} points, need more than n = {n}",
            cloud.len()
        )));
    }
    for attempt in 0..MAX_RETRIES {
        let seed_used = seed.wrapping_add(attempt);
        let mut indices: Vec<usize> = (0..cloud.len()).collect();
        indices.shuffle(&mut ChaCha8Rng::seed_from_u64(seed_used));
        let pick = |ids: &[usize]| {
            let mut out = Points::empty(cloud.dim());
            for &i in ids {
                out.push(cloud.row(i));
            }
            out
        };
        let train = pick(&indices[..n]);
        if has_duplicates(&train) {
            continue;
        }
        let end = n.saturating_add(grid_size).min(cloud.len());
        let grid = without_training_points(pick(&indices[n..end]), &train);
        return finish(SampleDesign {
            train_points: train,
            prediction_points: grid,
            strategy: StrategyKind::FromDataset,
            seed,
            seed_used,
        });
    }
    Err(invalid(
        "could not draw distinct training points from the dataset",
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ThetaScheme {
    /// i.i.d. `N(0, variance)`.
    UnstructuredIid {
        variance: f64,
    },
    /// `scale * (j + 1)^(-exponent)`, with seeded random signs if requested.
    PowerDecay {
        scale: f64,
        exponent: f64,
        random_signs: bool,
    },
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSpec {
    pub scheme: ThetaScheme,
    /// Must equal the column budget of the basis it pairs with.
    pub length: usize,
    pub seed: u64,
}

pub fn make_theta(spec: &ParameterSpec) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match &spec.scheme {
        ThetaScheme::UnstructuredIid { variance } => {
            if !(variance.is_finite() && *variance >= 0.0) {
                return Err(invalid(format!("variance must be >= 0, got {variance}")));
            }
            let sd = variance.sqrt();
            Ok((0..spec.length)
                .map(|_| sd * rng.sample::<f64, _>(StandardNormal))
                .collect())
        }
        ThetaScheme::PowerDecay {
            scale,
            exponent,
            random_signs,
        } => {
            if !(scale.is_finite() && exponent.is_finite()) {
                return Err(invalid("power decay scale and exponent must be finite"));
            }
            Ok((0..spec.length)
                .map(|j| {
                    let magnitude = scale * ((j + 1) as f64).powf(-exponent);
                    if *random_signs && rng.random::<bool>() {
                        -magnitude
                    } else {
                        magnitude
                    }
                })
                .collect())
        }
        ThetaScheme::Explicit(values) => {
            if values.len() != spec.length {
                return Err(invalid(format!(
                    "explicit theta has {} values, expected {}",
                    values.len(),
                    spec.length
                )));
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(invalid("explicit theta contains a non-finite value"));
            }
            Ok(values.clone())
        }
    }
}
