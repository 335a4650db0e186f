//! Executes a validated [`RunConfig`] and writes its artifacts.
//!
//! A single seed writes into the output directory; several seeds write one
//! `seed-<s>/` subdirectory each plus a top-level `summary.json` index.
//! All files are written on the calling thread after the parallel work
//! has been collected.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use gadkit_core::bases::DesignMatrix;
use gadkit_core::decomposition::SweepRecord;

use crate::config::{
    BasisConfig, ConfigError, DesignConfig, ExperimentKind, RunConfig, ThetaConfig,
};
use crate::output::{write_json, write_rows_csv, write_sweep_csv, GRID_CONVENTION};
use crate::recipes::{
    argmax_pinv, evaluate_all, fourier_check, gauss_compare, ising_sweep, prepare, ridge_bounds,
    run_sweep, unstructured_eb, DesignInfo, RunSeeds,
};

/// Environment variable consulted when neither `--seed` nor the config
/// names a seed.
pub const SEED_ENV: &str = "GADKIT_SEED";

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] gadkit_core::error::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Setup(String),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub full_scale: bool,
}

/// `--seed`, then the config's `seeds`, then `GADKIT_SEED`, then 0.
pub fn resolve_seeds(
    cli: Option<u64>,
    config: &[u64],
    env: Option<&str>,
) -> Result<Vec<u64>, RunError> {
    if let Some(s) = cli {
        return Ok(vec![s]);
    }
    if !config.is_empty() {
        return Ok(config.to_vec());
    }
    match env {
        Some(text) => text.trim().parse().map(|s| vec![s]).map_err(|_| {
            RunError::Setup(format!("{SEED_ENV}={text:?} is not an unsigned integer"))
        }),
        None => Ok(vec![0]),
    }
}

#[derive(Debug, Serialize)]
struct Meta<'a> {
    tool: &'static str,
    version: &'static str,
    experiment: ExperimentKind,
    seeds: RunSeeds,
    full_scale: bool,
    rel_tol: f64,
    grid_convention: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    design: Option<DesignInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scale_policy: Option<&'static str>,
    config: &'a RunConfig,
}

#[derive(Debug, Serialize)]
struct LambdaSummary {
    lambda: f64,
    argmax_norm_pinv_tm: Option<usize>,
    max_norm_pinv_tm: f64,
    failed_m: Vec<usize>,
    norm_m_tu_nonincreasing: bool,
    nescience_error_nonincreasing: bool,
    bias_error_nondecreasing: bool,
    max_identity_residual: f64,
}

fn monotone(values: impl Iterator<Item = f64>, increasing: bool) -> bool {
    let v: Vec<f64> = values.collect();
    let scale = v.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
    v.windows(2).all(|w| {
        let slack = 1e-9 * scale;
        if increasing {
            w[1] >= w[0] - slack
        } else {
            w[1] <= w[0] + slack
        }
    })
}

fn summarize(records: &[SweepRecord], lambdas: &[f64]) -> Vec<LambdaSummary> {
    lambdas
        .iter()
        .map(|&lambda| {
            let group: Vec<SweepRecord> = records
                .iter()
                .filter(|r| r.lambda == lambda)
                .cloned()
                .collect();
            let ok: Vec<&SweepRecord> = group.iter().filter(|r| r.is_ok()).collect();
            LambdaSummary {
                lambda,
                argmax_norm_pinv_tm: argmax_pinv(&group),
                max_norm_pinv_tm: ok.iter().map(|r| r.norm_pinv_tm).fold(0.0, f64::max),
                failed_m: group.iter().filter(|r| !r.is_ok()).map(|r| r.m).collect(),
                norm_m_tu_nonincreasing: monotone(ok.iter().map(|r| r.norm_m_tu), false),
                nescience_error_nonincreasing: monotone(
                    ok.iter().map(|r| r.nescience_error),
                    false,
                ),
                bias_error_nondecreasing: monotone(ok.iter().map(|r| r.bias_error), true),
                max_identity_residual: ok.iter().map(|r| r.identity_residual).fold(0.0, f64::max),
            }
        })
        .collect()
}

fn scale_policy(config: &RunConfig) -> Option<&'static str> {
    match config.design.as_ref()? {
        DesignConfig::Idx { scale, .. } | DesignConfig::CifarBin { scale, .. } => {
            Some(match scale {
                crate::config::ScaleConfig::RawBytes => "raw_bytes",
                crate::config::ScaleConfig::UnitInterval => "unit_interval",
            })
        }
        _ => None,
    }
}

fn run_seed(
    config: &RunConfig,
    seeds: RunSeeds,
    dir: &Path,
    full_scale: bool,
) -> Result<serde_json::Value, RunError> {
    fs::create_dir_all(dir)?;
    let mut design_info = None;
    let summary = match config.experiment {
        ExperimentKind::Sweep => {
            let (records, info) = run_sweep(config, &seeds)?;
            write_sweep_csv(&dir.join("sweep.csv"), &records)?;
            design_info = Some(info);
            serde_json::json!({ "lambdas": summarize(&records, &config.sweep.lambda.values()) })
        }
        ExperimentKind::RidgeSweep => {
            let (records, info) = run_sweep(config, &seeds)?;
            write_sweep_csv(&dir.join("sweep.csv"), &records)?;
            design_info = Some(info);
            let (basis, design, _) = prepare(config, &seeds)?;
            let m_values = config.m_values();
            let n = design.n_train();
            let mut bounds = Vec::new();
            for lambda in config
                .sweep
                .lambda
                .values()
                .into_iter()
                .filter(|l| *l > 0.0)
            {
                bounds.push(match evaluate_all(&basis, &design)? {
                    DesignMatrix::Real(x) => {
                        ridge_bounds(&x, n, &m_values, lambda, config.rel_tol)?
                    }
                    DesignMatrix::Complex(x) => {
                        ridge_bounds(&x, n, &m_values, lambda, config.rel_tol)?
                    }
                });
            }
            serde_json::json!({
                "lambdas": summarize(&records, &config.sweep.lambda.values()),
                "ridge_bounds": bounds,
            })
        }
        ExperimentKind::FourierCheck => {
            let BasisConfig::FourierDiscrete {
                column_budget,
                period,
                ..
            } = config.basis
            else {
                unreachable!("validated")
            };
            let n = config.design()?.n();
            let check = fourier_check(n, column_budget, period, config.rel_tol)?;
            let (records, info) = run_sweep(config, &seeds)?;
            write_sweep_csv(&dir.join("sweep.csv"), &records)?;
            design_info = Some(info);
            serde_json::to_value(check)?
        }
        ExperimentKind::GaussCompare => {
            let gc = config.gauss_compare.as_ref().expect("validated");
            let rows = gauss_compare(
                gc.m,
                config.basis.column_budget(),
                &gc.n_values,
                seeds.design,
                config.rel_tol,
            )?;
            write_rows_csv(&dir.join("gauss_compare.csv"), &rows)?;
            let max_ratio_below_m = rows
                .iter()
                .filter(|r| r.n < gc.m)
                .map(|r| r.ratio)
                .fold(0.0, f64::max);
            let gauss_max = rows.iter().map(|r| r.norm_ea_gauss).fold(0.0, f64::max);
            serde_json::json!({
                "m": gc.m,
                "column_budget": config.basis.column_budget(),
                "max_ratio_below_m": max_ratio_below_m,
                "gauss_max_norm_ea": gauss_max,
                "rows": rows,
            })
        }
        ExperimentKind::IsingSweep => {
            let BasisConfig::ClusterIsing {
                column_budget,
                chain_length,
                max_order,
                ..
            } = config.basis
            else {
                unreachable!("validated")
            };
            let n = config.design()?.n();
            let theta = config.theta.to_spec(column_budget, seeds.theta);
            let summary = ising_sweep(
                chain_length,
                max_order,
                column_budget,
                n,
                &config.m_values(),
                &theta,
                &seeds,
                config.rel_tol,
            )?;
            for run in [&summary.physical, &summary.randomized] {
                let sub = dir.join(run.ordering);
                fs::create_dir_all(&sub)?;
                write_sweep_csv(&sub.join("sweep.csv"), &run.records)?;
            }
            serde_json::to_value(summary)?
        }
        ExperimentKind::UnstructuredEb => {
            let ue = config.unstructured_eb.as_ref().expect("validated");
            let ThetaConfig::UnstructuredIid { variance } = config.theta else {
                unreachable!("validated")
            };
            let (basis, design, _) = prepare(config, &seeds)?;
            let n = design.n_train();
            let rows = match evaluate_all(&basis, &design)? {
                DesignMatrix::Real(x) => unstructured_eb(
                    &x,
                    n,
                    &ue.m_values,
                    variance,
                    ue.draws,
                    seeds.theta,
                    config.rel_tol,
                )?,
                DesignMatrix::Complex(x) => unstructured_eb(
                    &x,
                    n,
                    &ue.m_values,
                    variance,
                    ue.draws,
                    seeds.theta,
                    config.rel_tol,
                )?,
            };
            design_info = Some(DesignInfo::of(&design));
            write_rows_csv(&dir.join("unstructured_eb.csv"), &rows)?;
            serde_json::json!({ "draws": ue.draws, "variance": variance, "rows": rows })
        }
    };
    let meta = Meta {
        tool: "gadkit",
        version: env!("CARGO_PKG_VERSION"),
        experiment: config.experiment,
        seeds,
        full_scale,
        rel_tol: config.rel_tol,
        grid_convention: GRID_CONVENTION,
        design: design_info,
        scale_policy: scale_policy(config),
        config,
    };
    write_json(&dir.join("meta.json"), &meta)?;
    write_json(&dir.join("summary.json"), &summary)?;
    Ok(summary)
}

/// Runs every seed of `config`; returns the output directory.
pub fn run(
    mut config: RunConfig,
    options: &RunOptions,
    env_seed: Option<&str>,
) -> Result<PathBuf, RunError> {
    if options.full_scale {
        config.scale_up();
    }
    config.validate()?;
    let seeds = resolve_seeds(options.seed, &config.seeds, env_seed)?;
    let out = options
        .out_dir
        .clone()
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let work = || -> Result<(), RunError> {
        if seeds.len() == 1 {
            run_seed(
                &config,
                RunSeeds::derive(seeds[0]),
                &out,
                options.full_scale,
            )?;
            return Ok(());
        }
        let mut index = Vec::new();
        for &s in &seeds {
            let dir = out.join(format!("seed-{s}"));
            let summary = run_seed(&config, RunSeeds::derive(s), &dir, options.full_scale)?;
            index.push(
                serde_json::json!({ "seed": s, "dir": format!("seed-{s}"), "summary": summary }),
            );
        }
        fs::create_dir_all(&out)?;
        write_json(&out.join("summary.json"), &index)
    };
    match options.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| RunError::Setup(e.to_string()))?
            .install(work)?,
        None => work()?,
    }
    Ok(out)
}
