//! Acceptance checks: one PASS/FAIL line per criterion, non-zero exit if any
//! fail.

use std::env;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fracreg_core::fracmodel::{
    alpha_grid, predict_frac, refit_per_alpha, select_best, sweep_alpha_refit, FracModel,
};
use fracreg_core::fracops::{
    caputo_derivative_quad, default_fd_step, frac_power_coeff, rl_derivative_quad,
    rl_integral_quad, SampledFunction, DEFAULT_QUAD_POINTS,
};
use fracreg_core::opalgebra::{
    build_group_mn, build_group_zn, build_group_zp, is_prime, verify_group_axioms,
};
use fracreg_core::pipeline::{
    group_monthly, ingest_csv, run_workflow, Aggregate, AvocadoType, WorkflowConfig,
};
use fracreg_core::regress::{fit_poly, predict_poly, r_squared, split_ordered, PolyModel, Series};

type Check = Result<String, String>;

fn repo_root() -> PathBuf {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    root.canonicalize().unwrap_or(root)
}

fn fixture() -> PathBuf {
    repo_root().join("data/avocado_fixture.csv")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

// ---------------------------------------------------------------------------

fn planted(degree: usize) -> PolyModel {
    let coeffs = (0..=degree)
        .map(|i| (1.5 - 0.4 * i as f64) / 10f64.powi(i as i32))
        .collect();
    PolyModel::new(coeffs).unwrap()
}

fn power_rule_identity() -> Check {
    let mut models: Vec<PolyModel> = Vec::new();
    for degree in 1..=5 {
        let truth = planted(degree);
        let x: Vec<f64> = (1..=30).map(|i| i as f64).collect();
        let y = x.iter().map(|&v| predict_poly(&truth, v)).collect();
        models.push(
            fit_poly(&Series::new(x, y).unwrap(), degree)
                .map_err(|e| e.to_string())?
                .0,
        );
    }
    for region in ["Chicago", "HartfordSpringfield", "Boise"] {
        let recs =
            ingest_csv(fixture(), region, AvocadoType::Conventional).map_err(|e| e.to_string())?;
        let (series, _) = group_monthly(&recs, Aggregate::Median).map_err(|e| e.to_string())?;
        let split = split_ordered(&series, 0.2).map_err(|e| e.to_string())?;
        for degree in 1..=6 {
            models.push(fit_poly(&split.train, degree).map_err(|e| e.to_string())?.0);
            let refit = refit_per_alpha(&split.train, degree, 0.0).map_err(|e| e.to_string())?;
            models.push(refit.base().clone());
        }
    }
    let mut checked = 0;
    for base in &models {
        let frac = FracModel::new(base.clone(), 0.0).map_err(|e| e.to_string())?;
        for k in 0..=160 {
            let x = k as f64 * 0.25;
            let a = predict_frac(&frac, x).map_err(|e| e.to_string())?;
            let b = predict_poly(base, x);
            ensure(a.to_bits() == b.to_bits(), || {
                format!("degree {} at x = {x}: {a:e} vs {b:e}", base.degree())
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "{} models × 161 abscissae ({checked} evaluations) bit-identical",
        models.len()
    ))
}

fn oracle_agreement() -> Check {
    let mut worst: f64 = 0.0;
    for mu in 1..=4 {
        let mu = mu as f64;
        let f = SampledFunction::new(move |t: f64| t.powf(mu), 0.0);
        for alpha in [-0.5, -0.25, -0.1, 0.1, 0.25, 0.5] {
            for x in [0.5f64, 1.0, 2.0] {
                let expected =
                    frac_power_coeff(mu, alpha).map_err(|e| e.to_string())? * x.powf(mu - alpha);
                let mut oracles = Vec::new();
                if alpha < 0.0 {
                    oracles.push(rl_integral_quad(&f, -alpha, x, DEFAULT_QUAD_POINTS));
                } else {
                    oracles.push(rl_derivative_quad(&f, alpha, x, default_fd_step(x)));
                    oracles.push(caputo_derivative_quad(
                        &f,
                        move |t: f64| mu * t.powf(mu - 1.0),
                        alpha,
                        x,
                    ));
                }
                for o in oracles {
                    let o = o.map_err(|e| e.to_string())?;
                    let err = rel_err(o, expected);
                    worst = worst.max(err);
                    ensure(err < 1e-4, || {
                        format!("mu {mu} alpha {alpha} x {x}: rel err {err:e}")
                    })?;
                }
            }
        }
    }
    Ok(format!("72 grid points, worst relative error {worst:.2e}"))
}

fn rl_equals_caputo() -> Check {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for mu in [1.0, 2.0, 3.0] {
        let f = SampledFunction::new(move |t: f64| t.powf(mu), 0.0);
        for alpha in [0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95] {
            for x in [0.25, 0.5, 1.0, 2.0, 3.0] {
                let rl = rl_derivative_quad(&f, alpha, x, default_fd_step(x))
                    .map_err(|e| e.to_string())?;
                let cap = caputo_derivative_quad(&f, move |t: f64| mu * t.powf(mu - 1.0), alpha, x)
                    .map_err(|e| e.to_string())?;
                let err = rel_err(rl, cap);
                worst = worst.max(err);
                n += 1;
                ensure(err < 1e-4, || {
                    format!("mu {mu} alpha {alpha} x {x}: {rl} vs {cap}")
                })?;
            }
        }
    }
    Ok(format!(
        "{n} samples, worst relative difference {worst:.2e}"
    ))
}

fn group_suite() -> Check {
    let err = |e: fracreg_core::Error| e.to_string();
    for n in 1..=30 {
        let r = verify_group_axioms(&build_group_zn(n, 0.5).map_err(err)?);
        ensure(r.all(), || format!("Z_{n}: {r}"))?;
    }
    for n in 2..=30 {
        let r = verify_group_axioms(&build_group_mn(n, 0.5).map_err(err)?);
        ensure(r.all(), || format!("M_{n}: {r}"))?;
    }
    let mut primes = 0;
    for p in (2..50).filter(|&p| is_prime(p)) {
        let zp = build_group_zp(p, 0.5).map_err(err)?;
        let r = verify_group_axioms(&zp);
        ensure(r.all(), || format!("Z_{p}^+: {r}"))?;
        let mp = build_group_mn(p, 0.5).map_err(err)?;
        ensure(mp.carrier() == zp.carrier(), || format!("M_{p} != Z_{p}^+"))?;
        primes += 1;
    }
    let m14 = build_group_mn(14, 0.5).map_err(err)?;
    ensure(m14.carrier() == [1, 3, 5, 9, 11, 13], || {
        format!("M_14 = {:?}", m14.carrier())
    })?;
    let z14 = build_group_zn(14, 0.5).map_err(err)?;
    ensure(z14.len() == 14, || {
        format!("Z_14 has {} elements", z14.len())
    })?;
    Ok(format!(
        "Z_1..30, M_2..30, {primes} primes; M_14 = {{1,3,5,9,11,13}}, |Z_14| = 14"
    ))
}

fn regression_recovery() -> Check {
    let x: Vec<f64> = (0..30).map(|i| 0.5 + i as f64 * 1.25).collect();
    let mut worst: f64 = 0.0;
    for degree in 0..=5 {
        let truth = planted(degree);
        let y: Vec<f64> = x.iter().map(|&v| predict_poly(&truth, v)).collect();
        let s = Series::new(x.clone(), y.clone()).unwrap();
        let (fit, _) = fit_poly(&s, degree).map_err(|e| e.to_string())?;
        for (got, want) in fit.coeffs().iter().zip(truth.coeffs()) {
            let e = (got - want).abs() / want.abs().max(1e-300);
            worst = worst.max(e);
            ensure(e < 1e-8, || format!("degree {degree}: {got:e} vs {want:e}"))?;
        }
        if degree >= 1 {
            let pred: Vec<f64> = x.iter().map(|&v| predict_poly(&fit, v)).collect();
            let r2 = r_squared(&y, &pred).map_err(|e| e.to_string())?;
            ensure(r2 == 1.0 || (1.0 - r2) < 1e-12, || {
                format!("exact fit R² = {r2}")
            })?;
            let mean = y.iter().sum::<f64>() / y.len() as f64;
            let r2_mean = r_squared(&y, &vec![mean; y.len()]).map_err(|e| e.to_string())?;
            ensure(r2_mean.abs() < 1e-12, || {
                format!("mean predictor R² = {r2_mean}")
            })?;
        }
    }
    Ok(format!(
        "degrees 0..5 on 30 abscissae, worst coefficient error {worst:.2e}"
    ))
}

fn fractional_recovery() -> Check {
    let grid = alpha_grid(-0.5, 0.5, 0.05).map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for alpha_star in [-0.3, 0.25] {
        let truth = FracModel::new(
            PolyModel::new(vec![1.2, 0.08, -0.004, 0.00006]).unwrap(),
            alpha_star,
        )
        .map_err(|e| e.to_string())?;
        let x: Vec<f64> = (1..=40).map(|i| i as f64).collect();
        let y = x
            .iter()
            .map(|&v| predict_frac(&truth, v))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let split = split_ordered(&Series::new(x, y).unwrap(), 0.2).map_err(|e| e.to_string())?;
        let rows = sweep_alpha_refit(&split, 3, &grid).map_err(|e| e.to_string())?;
        let best = select_best(&rows).map_err(|e| e.to_string())?;
        ensure((best.row.alpha - alpha_star).abs() <= 0.05 + 1e-9, || {
            format!("alpha* {alpha_star}: selected {}", best.row.alpha)
        })?;
        notes.push(format!("α* {alpha_star} → {:.2}", best.row.alpha));
    }
    Ok(notes.join(", "))
}

fn table_reproduction() -> Check {
    let path = env::var_os("FRACREG_AVOCADO_CSV")
        .map(PathBuf::from)
        .unwrap_or_else(|| repo_root().join("data/avocado.csv"));
    if !path.exists() {
        return Err(format!(
            "real avocado dataset not found at {} (set FRACREG_AVOCADO_CSV or run scripts/fetch_avocado.sh); \
             the bundled fixture is synthetic and cannot reproduce the published table",
            path.display()
        ));
    }
    let out = run_workflow(&WorkflowConfig::new(
        &path,
        "Chicago",
        AvocadoType::Conventional,
    ))
    .map_err(|e| e.to_string())?;
    let rows = &out.report().rows;
    let zero = rows.iter().find(|r| r.alpha == 0.0).ok_or("no α = 0 row")?;
    let best_extrap = rows
        .iter()
        .max_by(|a, b| a.r2_extrap.total_cmp(&b.r2_extrap))
        .ok_or("empty sweep")?;
    let msg = format!(
        "α=0 r2_interp {:.6} (published 0.446501), extrapolation maximum at degree {:.2} (published 3.20)",
        zero.r2_interp, best_extrap.effective_degree
    );
    ensure((zero.r2_interp - 0.446501).abs() <= 0.05, || msg.clone())?;
    ensure(
        (best_extrap.effective_degree - 3.20).abs() <= 0.05 + 1e-9,
        || msg.clone(),
    )?;
    Ok(msg)
}

fn determinism() -> Check {
    let csv = fixture();
    let run_once = || -> Result<(Vec<u8>, Vec<u8>), String> {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = fracreg_cli::run(
            [
                "fracreg",
                "report",
                "--csv",
                csv.to_str().unwrap(),
                "--region",
                "Chicago",
                "--degree",
                "3",
                "--out-dir",
                dir.path().to_str().unwrap(),
            ],
            &mut out,
            &mut err,
        );
        ensure(code == 0, || String::from_utf8_lossy(&err).into_owned())?;
        let sweep =
            std::fs::read(dir.path().join("Chicago/sweep.csv")).map_err(|e| e.to_string())?;
        let plot = std::fs::read(dir.path().join("Chicago/fit_selected.svg"))
            .map_err(|e| e.to_string())?;
        Ok((sweep, plot))
    };
    let (a, pa) = run_once()?;
    let (b, pb) = run_once()?;
    ensure(a == b, || "sweep CSV differs between runs".into())?;
    ensure(pa == pb, || "SVG output differs between runs".into())?;
    Ok(format!("two report runs, {} CSV bytes identical", a.len()))
}

// ---------------------------------------------------------------------------

struct Criterion {
    name: &'static str,
    budget: Duration,
    check: fn() -> Check,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            name: "power-rule identity at α = 0",
            budget: Duration::from_secs(1),
            check: power_rule_identity,
        },
        Criterion {
            name: "power rule vs quadrature oracles",
            budget: Duration::from_secs(10),
            check: oracle_agreement,
        },
        Criterion {
            name: "Riemann–Liouville ≡ Caputo on monomials",
            budget: Duration::from_secs(10),
            check: rl_equals_caputo,
        },
        Criterion {
            name: "operator group suite",
            budget: Duration::from_secs(5),
            check: group_suite,
        },
        Criterion {
            name: "polynomial regression recovery",
            budget: Duration::from_secs(1),
            check: regression_recovery,
        },
        Criterion {
            name: "fractional plant-and-recover",
            budget: Duration::from_secs(5),
            check: fractional_recovery,
        },
        Criterion {
            name: "Chicago table reproduction (real dataset)",
            budget: Duration::from_secs(30),
            check: table_reproduction,
        },
        Criterion {
            name: "report determinism",
            budget: Duration::from_secs(30),
            check: determinism,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.check)();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > c.budget => Err(format!(
                "{detail}; took {elapsed:.2?}, budget {:?}",
                c.budget
            )),
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS  {} [{elapsed:.2?}] {detail}", c.name),
            Err(reason) => {
                failed += 1;
                println!("FAIL  {} [{elapsed:.2?}] {reason}", c.name);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
