//! Acceptance suite: one PASS/FAIL line per criterion, runtime included.
//! Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use gadkit::recipes::{
    argmax_pinv, fourier_check, gauss_compare, ising_sweep, local_maxima, RunSeeds,
};
use gadkit_core::bases::{Basis, BasisFamily, BasisSpec};
use gadkit_core::decomposition::{
    build_panels, expected_unstructured_error, infer_theta, invertibility_operator,
    ridge_invertibility_operator, ridge_panels, risk_and_errors, sweep_matrix, RidgeConfig,
    SweepRecord,
};
use gadkit_core::designs::{make_design, make_theta, DesignStrategy, ParameterSpec, ThetaScheme};
use gadkit_core::linalg::{
    append_column, interleaving_check, singular_values, spectral_norm, Matrix, Scalar, Vector,
    DEFAULT_REL_TOL,
};
use gadkit_core::oracle::{oracle_run, DEFAULT_ORACLE_TOL};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

trait Draw: Scalar {
    fn draw(rng: &mut ChaCha8Rng) -> Self;
}

impl Draw for f64 {
    fn draw(rng: &mut ChaCha8Rng) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Draw for Complex64 {
    fn draw(rng: &mut ChaCha8Rng) -> Self {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }
}

fn gaussian<T: Draw>(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix<T> {
    Matrix::from_fn(rows, cols, |_, _| T::draw(rng))
}

fn gaussian_vec<T: Draw>(rng: &mut ChaCha8Rng, len: usize) -> Vector<T> {
    gaussian::<T>(rng, len, 1).column(0).into_owned()
}

fn nonincreasing(v: &[f64], rel: f64) -> bool {
    let scale = v.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
    v.windows(2).all(|w| w[1] <= w[0] + rel * scale)
}

fn pinv_norm<T: Scalar>(x: &Matrix<T>) -> f64 {
    if x.ncols() == 0 {
        return 0.0;
    }
    let p = build_panels(x, x.nrows(), x.ncols(), DEFAULT_REL_TOL).unwrap();
    p.norm_pinv_tm()
}

fn criterion_1() -> Outcome {
    let s = fourier_check(8, 24, 1.0, DEFAULT_REL_TOL).unwrap();
    outcome(
        s.max_deviation < 1e-10,
        format!("max deviation {:.2e}", s.max_deviation),
    )
}

fn column_move_case<T: Draw>(rng: &mut ChaCha8Rng, case: usize) -> Result<(), String> {
    let n = rng.random_range(2..=12);
    let k = rng.random_range(1..=12);
    let extra = rng.random_range(1..=6);
    let x: Matrix<T> = gaussian(rng, n, k);
    // every third case appends a combination of existing columns
    let phi: Vector<T> = if case.is_multiple_of(3) {
        &x * gaussian_vec::<T>(rng, k)
    } else {
        gaussian_vec(rng, n)
    };
    let (widened, report) = append_column(&x, &phi, DEFAULT_REL_TOL).map_err(|e| e.to_string())?;
    let (before, after) = (pinv_norm(&x), pinv_norm(&widened));
    let tol = 1e-9 * before.max(after);
    if report.was_independent && after < before - tol {
        return Err(format!(
            "case {case}: independent append lowered ||X+|| {before} -> {after}"
        ));
    }
    if !report.was_independent && after > before + tol {
        return Err(format!(
            "case {case}: dependent append raised ||X+|| {before} -> {after}"
        ));
    }
    // move columns one at a time from U to M
    let rest: Matrix<T> = gaussian(rng, n, extra);
    let mut full = Matrix::<T>::zeros(n, k + 1 + extra);
    full.view_mut((0, 0), (n, k + 1)).copy_from(&widened);
    full.view_mut((0, k + 1), (n, extra)).copy_from(&rest);
    let norms: Vec<f64> = (1..=full.ncols())
        .map(|m| spectral_norm(&build_panels(&full, n, m, DEFAULT_REL_TOL).unwrap().m_tu).unwrap())
        .collect();
    if !nonincreasing(&norms, 1e-9) {
        return Err(format!("case {case}: ||M_TU|| increased: {norms:?}"));
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut dependent = 0;
    for case in 0..1000 {
        let r = if case % 2 == 0 {
            column_move_case::<f64>(&mut rng, case)
        } else {
            column_move_case::<Complex64>(&mut rng, case)
        };
        if let Err(e) = r {
            return outcome(false, e);
        }
        if case.is_multiple_of(3) {
            dependent += 1;
        }
    }
    outcome(
        true,
        format!("1000 cases ({dependent} constructed dependent), real and complex"),
    )
}

fn interlacing_case<T: Draw>(rng: &mut ChaCha8Rng) -> bool {
    let size = rng.random_range(2..=20);
    let g: Matrix<T> = gaussian(rng, size, size);
    let h = (&g + g.adjoint()).unscale(2.0);
    let c: Vector<T> = gaussian_vec(rng, size);
    let check = interleaving_check(&h, &c).unwrap();
    // independent verification at 1e-9 ||H||
    let tol = 1e-9 * spectral_norm(&h).unwrap();
    let (a, b) = (&check.eigs_before, &check.eigs_after);
    let ok = (0..size).all(|i| b[i] >= a[i] - tol && (i + 1 == size || a[i] >= b[i + 1] - tol));
    ok && check.holds
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let failures = (0..1000)
        .filter(|i| {
            if i % 2 == 0 {
                !interlacing_case::<f64>(&mut rng)
            } else {
                !interlacing_case::<Complex64>(&mut rng)
            }
        })
        .count();
    outcome(
        failures == 0,
        format!("{failures} of 1000 updates violate interlacing"),
    )
}

fn sphere_sweep(family: BasisFamily, seed: u64) -> Vec<SweepRecord> {
    let seeds = RunSeeds::derive(seed);
    let design = make_design(
        &DesignStrategy::SphereUniform { dim: 32 },
        100,
        200,
        seeds.design,
    )
    .unwrap();
    let basis = Basis::new(BasisSpec::new(family, 32, 400)).unwrap();
    let theta = ParameterSpec {
        scheme: ThetaScheme::UnstructuredIid { variance: 1.0 },
        length: 400,
        seed: seeds.theta,
    };
    let m: Vec<usize> = (1..=400).collect();
    gadkit_core::decomposition::sweep(
        &basis,
        &design,
        &theta,
        &m,
        &RidgeConfig::off(100),
        DEFAULT_REL_TOL,
    )
    .unwrap()
}

fn criterion_4() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for name in ["rff", "rrf"] {
        let (mut at_n, mut descends, mut monotone, mut failed) = (0, 0, 0, 0);
        for seed in 0..20u64 {
            let features = RunSeeds::derive(seed).features;
            let family = if name == "rff" {
                BasisFamily::RandomFourierFeatures {
                    feature_seed: features,
                }
            } else {
                BasisFamily::RandomReluFeatures {
                    feature_seed: features,
                }
            };
            let recs = sphere_sweep(family, seed);
            failed += recs.iter().filter(|r| !r.is_ok()).count();
            at_n += usize::from(argmax_pinv(&recs) == Some(100));
            descends += usize::from(recs[399].norm_pinv_tm < recs[100].norm_pinv_tm);
            let tu: Vec<f64> = recs.iter().map(|r| r.norm_m_tu).collect();
            monotone += usize::from(nonincreasing(&tu, 1e-9));
        }
        pass &= at_n >= 19 && descends >= 19 && monotone == 20 && failed == 0;
        lines.push(format!(
            "{name}: argmax=n {at_n}/20, descent 400<101 {descends}/20, ||M_TU|| monotone {monotone}/20, failed m {failed}"
        ));
    }
    outcome(pass, lines.join("; "))
}

fn e_b_instance<T: Draw>(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = rng.random_range(1..=15);
    let v = rng.random_range(1..=10);
    let j = rng.random_range(2..=25);
    let m = rng.random_range(1..j);
    let x: Matrix<T> = gaussian(rng, n + v, j);
    let theta: Vector<T> = gaussian_vec(rng, j);
    let p = build_panels(&x, n, m, DEFAULT_REL_TOL).map_err(|e| e.to_string())?;
    let e_b = invertibility_operator(&p);
    let norm = spectral_norm(&e_b).unwrap();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(format!("||E_B|| = {norm} with dim U = {}", j - m));
    }
    let eb_theta = (&e_b * &theta).norm();
    if eb_theta > theta.norm() * (1.0 + 1e-12) {
        return Err(format!(
            "||E_B theta|| = {eb_theta} > ||theta|| = {}",
            theta.norm()
        ));
    }
    let r = risk_and_errors(&p, &theta).map_err(|e| e.to_string())?;
    let parts = r.bias_error.powi(2) + r.nescience_error.powi(2);
    if (eb_theta.powi(2) - parts).abs() > 1e-12 * parts.max(1e-300) {
        return Err(format!(
            "||E_B theta||^2 = {} vs bias^2 + nescience^2 = {parts}",
            eb_theta.powi(2)
        ));
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..500 {
        let r = if i % 2 == 0 {
            e_b_instance::<f64>(&mut rng)
        } else {
            e_b_instance::<Complex64>(&mut rng)
        };
        if let Err(e) = r {
            return outcome(false, format!("instance {i}: {e}"));
        }
    }
    // monotone error terms over sweeps of several shapes and bases
    let mut sweeps = 0;
    for seed in 0..20u64 {
        let n = rng.random_range(5..=30);
        let j = rng.random_range(n..=3 * n);
        let x: Matrix<f64> = gaussian(&mut rng, n + 10, j);
        let theta: Vec<f64> = (0..j).map(|_| rng.sample(StandardNormal)).collect();
        let m: Vec<usize> = (1..=j).collect();
        let recs = sweep_matrix(&x, n, &theta, &m, &RidgeConfig::off(n), DEFAULT_REL_TOL).unwrap();
        let norm = theta.iter().map(|t| t * t).sum::<f64>().sqrt();
        if let Some(m) = monotone_break(&recs, norm) {
            return outcome(
                false,
                format!("sweep {seed}: error terms not monotone at m = {m}"),
            );
        }
        if recs.iter().any(|r| !r.is_ok()) {
            return outcome(false, format!("sweep {seed}: failed records"));
        }
        sweeps += 1;
    }
    for (family, strategy, dim) in [
        (BasisFamily::Legendre, DesignStrategy::LegendreGauss, 1),
        (BasisFamily::Chebyshev, DesignStrategy::LegendreGauss, 1),
        (
            BasisFamily::RandomFourierFeatures { feature_seed: 5 },
            DesignStrategy::SphereUniform { dim: 8 },
            8,
        ),
    ] {
        if let Some(m) = first_violation(family.clone(), &strategy, dim) {
            return outcome(
                false,
                format!("{family:?} sweep: error terms not monotone at m = {m}"),
            );
        }
        sweeps += 1;
    }
    // Near-singular square blocks can lose a numerical rank at m = n, and the
    // truncated kernel there is not nested in the next one. Reported, not scored.
    let uniform = DesignStrategy::UniformInterval { a: -1.0, b: 1.0 };
    let notes: Vec<String> = [BasisFamily::Legendre, BasisFamily::Chebyshev]
        .into_iter()
        .map(|f| match first_violation(f.clone(), &uniform, 1) {
            Some(m) => format!("{f:?} on uniform points breaks at m = {m}"),
            None => format!("{f:?} on uniform points monotone"),
        })
        .collect();
    outcome(
        true,
        format!(
            "500 instances, {sweeps} sweeps; not scored: {}",
            notes.join(", ")
        ),
    )
}

/// First `m` where bias decreases or nescience increases in a 20-point sweep
/// over 60 columns.
fn first_violation(family: BasisFamily, strategy: &DesignStrategy, dim: usize) -> Option<usize> {
    let design = make_design(strategy, 20, 64, 5).unwrap();
    let basis = Basis::new(BasisSpec::new(family, dim, 60)).unwrap();
    let theta = ParameterSpec {
        scheme: ThetaScheme::PowerDecay {
            scale: 1.0,
            exponent: 1.0,
            random_signs: true,
        },
        length: 60,
        seed: 5,
    };
    let m: Vec<usize> = (1..=60).collect();
    let recs = gadkit_core::decomposition::sweep(
        &basis,
        &design,
        &theta,
        &m,
        &RidgeConfig::off(20),
        DEFAULT_REL_TOL,
    )
    .unwrap();
    let norm = make_theta(&theta)
        .unwrap()
        .iter()
        .map(|t| t * t)
        .sum::<f64>()
        .sqrt();
    monotone_break(&recs, norm)
}

/// First `m` where bias decreases or nescience increases, at `1e-9 ||theta||`
/// (both terms are bounded by `||theta||`).
fn monotone_break(recs: &[SweepRecord], theta_norm: f64) -> Option<usize> {
    let tol = 1e-9 * theta_norm;
    recs.windows(2)
        .find(|w| {
            w[1].bias_error < w[0].bias_error - tol
                || w[1].nescience_error > w[0].nescience_error + tol
        })
        .map(|w| w[1].m)
}

fn criterion_6() -> Outcome {
    let seeds = RunSeeds::derive(6);
    let design = make_design(
        &DesignStrategy::SphereUniform { dim: 16 },
        40,
        40,
        seeds.design,
    )
    .unwrap();
    let basis = Basis::new(BasisSpec::new(
        BasisFamily::RandomReluFeatures {
            feature_seed: seeds.features,
        },
        16,
        120,
    ))
    .unwrap();
    let x = basis
        .evaluate(&design.all_points(), 0..120)
        .unwrap()
        .into_real()
        .unwrap();
    let sigma2: f64 = 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seeds.theta);
    let mut lines = Vec::new();
    let mut pass = true;
    for m in [20, 70, 110] {
        let p = build_panels(&x, 40, m, DEFAULT_REL_TOL).unwrap();
        let e_b = invertibility_operator(&p);
        let mean = (0..2000)
            .map(|_| {
                let theta = Vector::<f64>::from_fn(120, |_, _| {
                    sigma2.sqrt() * rng.sample::<f64, _>(StandardNormal)
                });
                (&e_b * theta).norm_squared()
            })
            .sum::<f64>()
            / 2000.0;
        let expected = expected_unstructured_error(sigma2, p.kernel_dim(), p.nescience_dim());
        let rel = (mean - expected).abs() / expected;
        pass &= rel < 0.05;
        lines.push(format!(
            "dimK={} dimU={}: {mean:.2} vs {expected:.0} ({:.1}%)",
            p.kernel_dim(),
            p.nescience_dim(),
            100.0 * rel
        ));
    }
    outcome(pass, lines.join("; "))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut spectrum, mut pinv, mut eb) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..50 {
        let n = rng.random_range(5..=40);
        let j = rng.random_range(2..=60);
        let m = rng.random_range(1..j);
        let x: Matrix<f64> = gaussian(&mut rng, n + 5, j);
        let p = build_panels(&x, n, m, DEFAULT_REL_TOL).unwrap();
        let sigma = singular_values(&p.m_tm).unwrap();
        for lambda in [1e-4, 1e-2, 1.0] {
            let ridge = RidgeConfig::new(lambda, n).unwrap();
            let rp = ridge_panels(&p, &ridge).unwrap();
            let nl = n as f64 * lambda;
            let mut expected: Vec<f64> = (0..m)
                .map(|i| (sigma.get(i).map_or(0.0, |s| s * s) + nl).sqrt())
                .collect();
            expected.sort_by(|a, b| b.total_cmp(a));
            for (e, s) in expected.iter().zip(&rp.singular_values) {
                spectrum = spectrum.max((e - s).abs() / e);
            }
            pinv = pinv.max(rp.pinv_norm * nl.sqrt());
            let norm_eb = spectral_norm(&ridge_invertibility_operator(&p, &rp)).unwrap();
            eb = eb.max(norm_eb / (1.0 + spectral_norm(&p.m_tm).unwrap() / nl.sqrt()));
        }
    }
    // lambda = 0 must reproduce the unregularized records bit for bit
    let x: Matrix<f64> = gaussian(&mut rng, 30, 40);
    let theta: Vec<f64> = (0..40).map(|_| rng.sample(StandardNormal)).collect();
    let m: Vec<usize> = (1..=40).collect();
    let plain = sweep_matrix(&x, 20, &theta, &m, &RidgeConfig::off(20), DEFAULT_REL_TOL).unwrap();
    let zero = sweep_matrix(
        &x,
        20,
        &theta,
        &m,
        &RidgeConfig::new(0.0, 20).unwrap(),
        DEFAULT_REL_TOL,
    )
    .unwrap();
    let identical = format!("{plain:?}") == format!("{zero:?}");
    let pass = spectrum <= 1e-9 && pinv <= 1.0 + 1e-12 && eb <= 1.0 + 1e-12 && identical;
    outcome(
        pass,
        format!(
            "spectrum rel err {spectrum:.1e}, max ||M~+||sqrt(nl) {pinv:.4}, max ||E_B||/bound {eb:.4}, lambda=0 identical {identical}"
        ),
    )
}

fn criterion_8() -> Outcome {
    let n: Vec<usize> = (10..=60).collect();
    let rows = gauss_compare(50, 150, &n, RunSeeds::derive(8).design, DEFAULT_REL_TOL).unwrap();
    let best = rows
        .iter()
        .filter(|r| r.n < 50)
        .max_by(|a, b| a.ratio.total_cmp(&b.ratio))
        .unwrap();
    let gauss_max = rows.iter().map(|r| r.norm_ea_gauss).fold(0.0, f64::max);
    outcome(
        best.ratio >= 1e3 && gauss_max <= 10.0,
        format!(
            "max ratio {:.2e} at n={} (uniform {:.2e}, Gauss {:.2e}); Gauss max {gauss_max:.3}",
            best.ratio, best.n, best.norm_ea_uniform, best.norm_ea_gauss
        ),
    )
}

fn oracle_instance<T: Draw>(rng: &mut ChaCha8Rng, kind: usize) -> Result<f64, String> {
    let n = rng.random_range(4..=25);
    let v = rng.random_range(1..=15);
    let (m, j, rank) = match kind {
        0 => {
            let m = rng.random_range(1..n);
            (m, m + rng.random_range(1..=10), None)
        }
        1 => (n, n + rng.random_range(1..=10), None),
        2 => {
            let m = rng.random_range(n + 1..=2 * n);
            (m, m + rng.random_range(1..=10), None)
        }
        _ => {
            let m = rng.random_range(2..=2 * n);
            let j = m + rng.random_range(1..=10);
            (m, j, Some(rng.random_range(1..m.min(n).max(2))))
        }
    };
    let x: Matrix<T> = match rank {
        None => gaussian(rng, n + v, j),
        // low-rank modeled block next to generic unmodeled columns, so the
        // risk stays away from zero
        Some(r) => {
            let mut x: Matrix<T> = gaussian(rng, n + v, j);
            let low = gaussian::<T>(rng, n + v, r) * gaussian::<T>(rng, r, m);
            x.view_mut((0, 0), (n + v, m)).copy_from(&low);
            x
        }
    };
    let theta: Vector<T> = gaussian_vec(rng, j);
    let p = build_panels(&x, n, m, DEFAULT_REL_TOL).map_err(|e| e.to_string())?;
    let y_t = x.rows(0, n).into_owned() * &theta;
    let engine_theta = infer_theta(&p, &y_t).map_err(|e| e.to_string())?;
    let engine_risk = risk_and_errors(&p, &theta)
        .map_err(|e| e.to_string())?
        .risk_all;
    let o = oracle_run(&x, n, m, &theta, DEFAULT_ORACLE_TOL).map_err(|e| e.to_string())?;
    let theta_err = (&engine_theta - &o.theta_hat).norm() / o.theta_hat.norm();
    let risk_err = (engine_risk - o.risk).abs() / o.risk;
    Ok(theta_err.max(risk_err))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = [0.0_f64; 4];
    for i in 0..200 {
        let kind = i % 4;
        let r = if i % 8 < 4 {
            oracle_instance::<f64>(&mut rng, kind)
        } else {
            oracle_instance::<Complex64>(&mut rng, kind)
        };
        match r {
            Ok(e) => worst[kind] = worst[kind].max(e),
            Err(e) => return outcome(false, format!("instance {i}: {e}")),
        }
    }
    outcome(
        worst.iter().all(|&w| w <= 1e-8),
        format!(
            "worst relative disagreement over 200 instances: m<n {:.1e}, m=n {:.1e}, m>n {:.1e}, rank-deficient {:.1e}",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
}

fn criterion_10() -> Outcome {
    let seeds = RunSeeds::derive(10);
    let theta = ParameterSpec {
        scheme: ThetaScheme::UnstructuredIid { variance: 1.0 },
        length: 1024,
        seed: seeds.theta,
    };
    let m: Vec<usize> = (1..=400).collect();
    let s = ising_sweep(10, 10, 1024, 200, &m, &theta, &seeds, DEFAULT_REL_TOL).unwrap();
    let phys = &s.physical;
    let rand = &s.randomized;
    let peak = rand
        .records
        .iter()
        .map(|r| r.norm_pinv_tm)
        .fold(0.0, f64::max);
    let runner_up = local_maxima(&rand.records)
        .iter()
        .filter(|p| p.m != 200)
        .map(|p| p.norm_pinv_tm)
        .fold(0.0, f64::max);
    let dominant = rand.argmax_m == Some(200) && runner_up < 0.5 * peak;
    let pass = phys.local_maxima.len() >= 2 && phys.all_maxima_independent && dominant;
    let shown: Vec<String> = phys
        .local_maxima
        .iter()
        .take(8)
        .map(|p| p.m.to_string())
        .collect();
    outcome(
        pass,
        format!(
            "physical: {} local maxima (first at m = {}), all independent {}; randomized: argmax {:?}, runner-up/peak {:.3}",
            phys.local_maxima.len(),
            shown.join(","),
            phys.all_maxima_independent,
            rand.argmax_m,
            runner_up / peak
        ),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 10] = [
        ("Fourier closed form", criterion_1, Duration::from_secs(1)),
        (
            "column-move norm monotonicity",
            criterion_2,
            Duration::from_secs(30),
        ),
        (
            "eigenvalue interlacing",
            criterion_3,
            Duration::from_secs(30),
        ),
        (
            "double-descent shape (RFF, RRF)",
            criterion_4,
            Duration::from_secs(300),
        ),
        (
            "invertibility error E_B",
            criterion_5,
            Duration::from_secs(60),
        ),
        (
            "unstructured expected error",
            criterion_6,
            Duration::from_secs(60),
        ),
        ("ridge bounds", criterion_7, Duration::from_secs(60)),
        (
            "Legendre-Gauss design effect",
            criterion_8,
            Duration::from_secs(120),
        ),
        ("oracle equivalence", criterion_9, Duration::from_secs(120)),
        (
            "structured multiple descent (periodic chain)",
            criterion_10,
            Duration::from_secs(300),
        ),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let pass = o.pass && in_time;
        failed += usize::from(!pass);
        println!(
            "criterion {:>2} {}: {} | {} | {:.2}s (limit {}s){}",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { " over time" }
        );
    }
    println!("acceptance: {} failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
