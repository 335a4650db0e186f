//! The computations behind each experiment. Nothing here writes files.

use std::path::Path;

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use gadkit_core::bases::{
    fourier_frequency, Basis, BasisFamily, BasisSpec, ColumnOrdering, DesignMatrix,
};
use gadkit_core::datasets::{load_cifar_bin, load_idx, PointCloud};
use gadkit_core::decomposition::{
    aliasing_operator, build_panels, invertibility_operator, ridge_invertibility_operator,
    ridge_panels, sweep_matrix, RidgeConfig, SweepRecord,
};
use gadkit_core::designs::{
    design_from_points, make_design, make_theta, DesignStrategy, ParameterSpec, RowOrder,
    SampleDesign, ThetaScheme,
};
use gadkit_core::error::{Error, Result};
use gadkit_core::linalg::{spectral_norm, Matrix, Scalar, Vector};

use crate::config::{DesignConfig, RunConfig};

/// Per-purpose seeds derived from one run seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RunSeeds {
    pub run: u64,
    pub design: u64,
    pub features: u64,
    pub theta: u64,
    pub ordering: u64,
}

impl RunSeeds {
    pub fn derive(run: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(run);
        RunSeeds {
            run,
            design: rng.next_u64(),
            features: rng.next_u64(),
            theta: rng.next_u64(),
            ordering: rng.next_u64(),
        }
    }
}

pub fn load_cloud(design: &DesignConfig) -> Result<Option<PointCloud>> {
    let with_path = |path: &Path, err: Error| match err {
        Error::Io(msg) => Error::Io(format!("{}: {msg}", path.display())),
        other => other,
    };
    Ok(match design {
        DesignConfig::Idx {
            path,
            max_items,
            scale,
            ..
        } => Some(
            load_idx(path, max_items.unwrap_or(usize::MAX), (*scale).into())
                .map_err(|e| with_path(path, e))?,
        ),
        DesignConfig::CifarBin {
            path,
            max_items,
            scale,
            ..
        } => Some(
            load_cifar_bin(path, max_items.unwrap_or(usize::MAX), (*scale).into())
                .map_err(|e| with_path(path, e))?,
        ),
        _ => None,
    })
}

pub fn build_design(design: &DesignConfig, seed: u64) -> Result<SampleDesign> {
    let n = design.n();
    let grid = design.grid_size();
    let strategy = match *design {
        DesignConfig::UniformInterval { interval, .. } => DesignStrategy::UniformInterval {
            a: interval[0],
            b: interval[1],
        },
        DesignConfig::Equispaced { period, .. } => DesignStrategy::Equispaced { period },
        DesignConfig::LegendreGauss { .. } => DesignStrategy::LegendreGauss,
        DesignConfig::SphereUniform { dim, .. } => DesignStrategy::SphereUniform { dim },
        DesignConfig::ChainConfigurations {
            chain_length,
            row_order,
            ..
        } => DesignStrategy::ChainConfigurations {
            chain_length,
            row_order: row_order.into(),
        },
        DesignConfig::Idx { .. } | DesignConfig::CifarBin { .. } => {
            let cloud = load_cloud(design)?.expect("dataset strategies load a cloud");
            return design_from_points(&cloud.points, n, grid, seed);
        }
    };
    make_design(&strategy, n, grid, seed)
}

/// Training/prediction sizes and seeds of a built design, for metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignInfo {
    pub strategy: String,
    pub n_train: usize,
    pub n_prediction: usize,
    pub seed: u64,
    pub seed_used: u64,
}

impl DesignInfo {
    pub fn of(design: &SampleDesign) -> Self {
        DesignInfo {
            strategy: format!("{:?}", design.strategy),
            n_train: design.n_train(),
            n_prediction: design.prediction_points.len(),
            seed: design.seed,
            seed_used: design.seed_used,
        }
    }
}

/// Basis, design and parameter spec of a run seed.
pub fn prepare(
    config: &RunConfig,
    seeds: &RunSeeds,
) -> Result<(Basis, SampleDesign, ParameterSpec)> {
    let design = build_design(config.design().expect("validated"), seeds.design)?;
    let basis = Basis::new(config.basis.to_spec(seeds.features, seeds.ordering))?;
    let theta = config.theta.to_spec(basis.budget(), seeds.theta);
    Ok((basis, design, theta))
}

/// Full sweep over every configured lambda, records in (lambda, m) order.
pub fn run_sweep(config: &RunConfig, seeds: &RunSeeds) -> Result<(Vec<SweepRecord>, DesignInfo)> {
    let (basis, design, theta) = prepare(config, seeds)?;
    let m_values = config.m_values();
    let mut records = Vec::new();
    for lambda in config.sweep.lambda.values() {
        let ridge = RidgeConfig::new(lambda, design.n_train())?;
        records.extend(gadkit_core::decomposition::sweep(
            &basis,
            &design,
            &theta,
            &m_values,
            &ridge,
            config.rel_tol,
        )?);
    }
    Ok((records, DesignInfo::of(&design)))
}

/// Worst-case ratios of the ridge bounds at one lambda; both are <= 1
/// when the bounds hold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RidgeBoundCheck {
    pub lambda: f64,
    /// max over m of `||M~^+|| sqrt(n lambda)`.
    pub pinv_ratio: f64,
    /// max over m of `||E_B|| / (1 + ||M_TM|| / sqrt(n lambda))`.
    pub e_b_ratio: f64,
    /// max over m and i of `|sigma~_i - sqrt(sigma_i^2 + n lambda)| / sigma~_i`.
    pub spectrum_error: f64,
}

pub fn ridge_bounds<T: Scalar>(
    m_full: &Matrix<T>,
    n_train: usize,
    m_values: &[usize],
    lambda: f64,
    rel_tol: f64,
) -> Result<RidgeBoundCheck> {
    let ridge = RidgeConfig::new(lambda, n_train)?;
    let shift = ridge.shift();
    let mut check = RidgeBoundCheck {
        lambda,
        pinv_ratio: 0.0,
        e_b_ratio: 0.0,
        spectrum_error: 0.0,
    };
    for &m in m_values {
        let panel = build_panels(m_full, n_train, m, rel_tol)?;
        let rp = ridge_panels(&panel, &ridge)?;
        check.pinv_ratio = check.pinv_ratio.max(rp.pinv_norm * shift);
        let e_b = spectral_norm(&ridge_invertibility_operator(&panel, &rp))?;
        let bound = 1.0 + spectral_norm(&panel.m_tm)? / shift;
        check.e_b_ratio = check.e_b_ratio.max(e_b / bound);
        let sigma = &panel.svd_tm().singular_values;
        let mut expected: Vec<f64> = (0..m)
            .map(|i| (sigma.get(i).map_or(0.0, |s| s * s) + shift * shift).sqrt())
            .collect();
        expected.sort_by(|a, b| b.total_cmp(a));
        for (e, s) in expected.iter().zip(&rp.singular_values) {
            check.spectrum_error = check.spectrum_error.max((e - s).abs() / s);
        }
    }
    Ok(check)
}

pub fn evaluate_all(basis: &Basis, design: &SampleDesign) -> Result<DesignMatrix> {
    basis.evaluate(&design.all_points(), 0..basis.budget())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierSummary {
    pub n: usize,
    pub column_budget: usize,
    /// max |A_ij - [column j aliases onto modeled column i]|.
    pub max_deviation: f64,
    /// `(frequency, modeled column it aliases to)` per unmodeled column.
    pub alias_map: Vec<(i64, usize)>,
}

/// Aliasing operator of the discrete Fourier basis at `m = n` on `n`
/// equispaced points, compared against its closed form: unmodeled
/// frequency `k` lands on modeled frequency `k mod n`.
pub fn fourier_check(
    n: usize,
    column_budget: usize,
    period: f64,
    rel_tol: f64,
) -> Result<FourierSummary> {
    let spec = BasisSpec::new(
        BasisFamily::FourierDiscrete { period, base: n },
        1,
        column_budget,
    );
    let basis = Basis::new(spec)?;
    let design = make_design(&DesignStrategy::Equispaced { period }, n, 2 * n, 0)?;
    let m_t = basis
        .evaluate(&design.train_points, 0..column_budget)?
        .into_complex();
    let panel = build_panels(&m_t, n, n, rel_tol)?;
    let a = aliasing_operator(&panel);
    let mut expected = Matrix::<Complex64>::zeros(n, column_budget - n);
    let mut alias_map = Vec::with_capacity(column_budget - n);
    for j in 0..column_budget - n {
        let k = fourier_frequency(n + j, n);
        let target = k.rem_euclid(n as i64) as usize;
        expected[(target, j)] = Complex64::new(1.0, 0.0);
        alias_map.push((k, target));
    }
    let max_deviation = (a - expected).iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(FourierSummary {
        n,
        column_budget,
        max_deviation,
        alias_map,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussRow {
    pub n: usize,
    pub norm_ea_uniform: f64,
    pub norm_ea_gauss: f64,
    pub ratio: f64,
}

fn legendre_norm_ea(basis: &Basis, design: &SampleDesign, m: usize, rel_tol: f64) -> Result<f64> {
    let x = basis
        .evaluate(&design.train_points, 0..basis.budget())?
        .into_real()
        .expect("Legendre is real");
    let panel = build_panels(&x, design.n_train(), m, rel_tol)?;
    // ||E_A|| = ||A|| by the block structure
    spectral_norm(&aliasing_operator(&panel))
}

/// `||E_A||` for the first `m` Legendre polynomials with uniform-random
/// versus Legendre-Gauss training points, over training sizes `n_values`.
pub fn gauss_compare(
    m: usize,
    column_budget: usize,
    n_values: &[usize],
    seed: u64,
    rel_tol: f64,
) -> Result<Vec<GaussRow>> {
    let basis = Basis::new(BasisSpec::new(BasisFamily::Legendre, 1, column_budget))?;
    n_values
        .iter()
        .map(|&n| {
            // only the training rows enter ||E_A||; the grid is a placeholder
            let uniform = make_design(
                &DesignStrategy::UniformInterval { a: -1.0, b: 1.0 },
                n,
                64,
                seed,
            )?;
            let gauss = make_design(&DesignStrategy::LegendreGauss, n, 64, seed)?;
            let norm_ea_uniform = legendre_norm_ea(&basis, &uniform, m, rel_tol)?;
            let norm_ea_gauss = legendre_norm_ea(&basis, &gauss, m, rel_tol)?;
            Ok(GaussRow {
                n,
                norm_ea_uniform,
                norm_ea_gauss,
                ratio: norm_ea_uniform / norm_ea_gauss,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub m: usize,
    pub norm_pinv_tm: f64,
    pub new_col_independent: bool,
}

/// Interior local maxima of `norm_pinv_TM`: a relative rise of more than
/// `1e-9` from the previous record and no rise into the next one. A flat
/// top is reported at its first `m`.
pub fn local_maxima(records: &[SweepRecord]) -> Vec<Peak> {
    let v: Vec<f64> = records.iter().map(|r| r.norm_pinv_tm).collect();
    let mut peaks = Vec::new();
    for i in 1..v.len().saturating_sub(1) {
        if v[i].partial_cmp(&(v[i - 1] * (1.0 + 1e-9))) != Some(std::cmp::Ordering::Greater) {
            continue;
        }
        // walk across a plateau
        let mut j = i;
        while j + 1 < v.len() && (v[j + 1] - v[i]).abs() <= 1e-9 * v[i] {
            j += 1;
        }
        if j + 1 < v.len() && v[j + 1] < v[i] {
            peaks.push(Peak {
                m: records[i].m,
                norm_pinv_tm: v[i],
                new_col_independent: records[i].new_col_independent,
            });
        }
    }
    peaks
}

pub fn argmax_pinv(records: &[SweepRecord]) -> Option<usize> {
    records
        .iter()
        .filter(|r| r.is_ok())
        .max_by(|a, b| a.norm_pinv_tm.total_cmp(&b.norm_pinv_tm))
        .map(|r| r.m)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsingRun {
    pub ordering: &'static str,
    #[serde(skip)]
    pub records: Vec<SweepRecord>,
    pub argmax_m: Option<usize>,
    pub local_maxima: Vec<Peak>,
    pub all_maxima_independent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsingSummary {
    pub chain_length: usize,
    pub n: usize,
    pub column_budget: usize,
    pub row_convention: &'static str,
    pub physical: IsingRun,
    pub randomized: IsingRun,
}

#[allow(clippy::too_many_arguments)]
fn ising_run(
    label: &'static str,
    chain_length: usize,
    max_order: usize,
    column_budget: usize,
    ordering: ColumnOrdering,
    row_order: RowOrder,
    n: usize,
    m_values: &[usize],
    theta: &[f64],
    seeds: &RunSeeds,
    rel_tol: f64,
) -> Result<IsingRun> {
    let spec = BasisSpec::new(
        BasisFamily::ClusterIsing {
            chain_length,
            max_order,
        },
        chain_length,
        column_budget,
    )
    .with_ordering(ordering);
    let basis = Basis::new(spec)?;
    let strategy = DesignStrategy::ChainConfigurations {
        chain_length,
        row_order,
    };
    let design = make_design(&strategy, n, usize::MAX, seeds.design)?;
    let x = evaluate_all(&basis, &design)?
        .into_real()
        .expect("spins are real");
    let records = sweep_matrix(&x, n, theta, m_values, &RidgeConfig::off(n), rel_tol)?;
    let local_maxima = local_maxima(&records);
    Ok(IsingRun {
        ordering: label,
        argmax_m: argmax_pinv(&records),
        all_maxima_independent: local_maxima.iter().all(|p| p.new_col_independent),
        local_maxima,
        records,
    })
}

/// Sweeps the periodic-chain cluster basis twice: rows and columns in
/// physical order, then both randomly permuted.
#[allow(clippy::too_many_arguments)]
pub fn ising_sweep(
    chain_length: usize,
    max_order: usize,
    column_budget: usize,
    n: usize,
    m_values: &[usize],
    theta: &ParameterSpec,
    seeds: &RunSeeds,
    rel_tol: f64,
) -> Result<IsingSummary> {
    let theta = make_theta(theta)?;
    let physical = ising_run(
        "physical",
        chain_length,
        max_order,
        column_budget,
        ColumnOrdering::PhysicalClusterOrder,
        RowOrder::Physical,
        n,
        m_values,
        &theta,
        seeds,
        rel_tol,
    )?;
    let randomized = ising_run(
        "randomized",
        chain_length,
        max_order,
        column_budget,
        ColumnOrdering::SeededPermutation(seeds.ordering),
        RowOrder::Seeded,
        n,
        m_values,
        &theta,
        seeds,
        rel_tol,
    )?;
    Ok(IsingSummary {
        chain_length,
        n,
        column_budget,
        row_convention:
            "rows by minimal period of the configuration, then lexicographic; first n rows train",
        physical,
        randomized,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnstructuredRow {
    pub m: usize,
    pub dim_k: usize,
    pub dim_u: usize,
    pub expected: f64,
    pub monte_carlo_mean: f64,
    pub relative_error: f64,
}

/// Monte Carlo mean of `||E_B theta||^2` over i.i.d. `N(0, variance)`
/// parameter draws, against `variance (dim K + dim U)`.
pub fn unstructured_eb<T: Scalar>(
    m_full: &Matrix<T>,
    n_train: usize,
    m_values: &[usize],
    variance: f64,
    draws: usize,
    seed: u64,
    rel_tol: f64,
) -> Result<Vec<UnstructuredRow>> {
    let budget = m_full.ncols();
    m_values
        .iter()
        .map(|&m| {
            let panel = build_panels(m_full, n_train, m, rel_tol)?;
            let e_b = invertibility_operator(&panel);
            let mut total = 0.0;
            for d in 0..draws {
                let spec = ParameterSpec {
                    scheme: ThetaScheme::UnstructuredIid { variance },
                    length: budget,
                    seed: seed.wrapping_add(d as u64),
                };
                let theta = make_theta(&spec)?;
                let theta = Vector::from_iterator(budget, theta.iter().map(|&v| T::from_real(v)));
                total += (&e_b * theta).norm_squared();
            }
            let expected = gadkit_core::decomposition::expected_unstructured_error(
                variance,
                panel.kernel_dim(),
                panel.nescience_dim(),
            );
            let mean = total / draws as f64;
            Ok(UnstructuredRow {
                m,
                dim_k: panel.kernel_dim(),
                dim_u: panel.nescience_dim(),
                expected,
                monte_carlo_mean: mean,
                relative_error: if expected > 0.0 {
                    (mean - expected).abs() / expected
                } else {
                    mean
                },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(m: usize, v: f64, independent: bool) -> SweepRecord {
        SweepRecord {
            m,
            norm_a: 0.0,
            norm_pinv_tm: v,
            norm_m_tu: 0.0,
            alias_error: 0.0,
            bias_error: 0.0,
            nescience_error: 0.0,
            risk_all: 0.0,
            risk_prediction_only: 0.0,
            rank_tm: m,
            new_col_independent: independent,
            lambda: 0.0,
            identity_residual: 0.0,
            error: None,
        }
    }

    #[test]
    fn local_maxima_with_plateau() {
        let values = [1.0, 3.0, 2.0, 4.0, 4.0, 1.0, 5.0];
        let records: Vec<_> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| record(i + 1, v, true))
            .collect();
        let peaks: Vec<usize> = local_maxima(&records).iter().map(|p| p.m).collect();
        assert_eq!(peaks, vec![2, 4]);
        assert_eq!(argmax_pinv(&records), Some(7));
    }

    #[test]
    fn seeds_are_derived_deterministically() {
        assert_eq!(RunSeeds::derive(5), RunSeeds::derive(5));
        assert_ne!(RunSeeds::derive(5).design, RunSeeds::derive(6).design);
    }

    #[test]
    fn fourier_closed_form_small() {
        let s = fourier_check(4, 12, 1.0, 1e-12).unwrap();
        assert!(s.max_deviation < 1e-10, "{}", s.max_deviation);
        assert_eq!(s.alias_map[0], (4, 0));
        assert_eq!(s.alias_map[1], (-1, 3));
    }
}
