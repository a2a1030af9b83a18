use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;
use serde_json::{json, Value};

use super::sampling::{boundary_uniform, separated_nodes};
use super::{dump_violation, run_trials, trial_rng, BoundCheck, SweepConfig, SweepRecord, SweepReport};
use crate::bounds::{
    clump_bounds, dft_freq_bounds, half_threshold_general, half_threshold_rank_one, vandermonde_node_bounds,
    weyl_half_threshold, wellsep_bounds, ClumpConstants,
};
use crate::core_matrix::{build_figure1, build_perturbed_dft_freq, build_vandermonde, rect_lattice, PerturbationMap};
use crate::error::{Error, Result};
use crate::exp_systems::{clump_decompose, separation};
use crate::spectral::{extreme_singular_values, svd_values, Method};

/// Sizes of `F′_N` up to this one also get a second, independent spectral
/// method for cross-checking.
pub const FIGURE1_CROSS_CHECK_MAX: usize = 501;

fn params<const K: usize>(pairs: [(&str, f64); K]) -> BTreeMap<String, f64> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn config_json(cfg: &SweepConfig, extra: Value) -> Value {
    let mut v = serde_json::to_value(cfg).expect("config serializes");
    if let (Some(obj), Value::Object(more)) = (v.as_object_mut(), extra) {
        obj.extend(more);
    }
    v
}

fn check_ell_grid(ell_grid: &[f64]) -> Result<()> {
    if ell_grid.is_empty() {
        return Err(Error::InvalidInput("ell grid is empty".into()));
    }
    if let Some(bad) = ell_grid.iter().find(|&&l| !(0.0..0.25).contains(&l)) {
        return Err(Error::InvalidInput(format!("every ℓ must lie in [0, 1/4), got {bad}")));
    }
    Ok(())
}

/// Condition numbers of the quarter-shifted DFT matrices `F′_N`.
pub fn figure1_sweep(n_list: &[usize], cfg: &SweepConfig) -> Result<SweepReport> {
    let started = Instant::now();
    cfg.validate()?;
    if n_list.is_empty() {
        return Err(Error::InvalidInput("n_list is empty".into()));
    }
    if let Some(&bad) = n_list.iter().find(|&&n| n < 3 || n % 2 == 0) {
        return Err(Error::InvalidInput(format!("every N must be odd and >= 3, got {bad}")));
    }
    let opts = cfg.spectral_options();
    let records = run_trials(n_list.len(), 1, |g, trial| {
        let n = n_list[g];
        let at_n = |e: Error| e.context(format!("figure1 N={n}"));
        let a = build_figure1::<f64>(n).map_err(at_n)?;
        let s = cfg.measure(&a).map_err(at_n)?;
        let (cross, diff) = if n <= FIGURE1_CROSS_CHECK_MAX {
            let other = match s.method {
                Method::FullDecomposition => {
                    let ex = extreme_singular_values(&a, opts.tol, opts.max_iter).map_err(at_n)?;
                    ex.sigma_max / ex.sigma_min
                }
                Method::IterativeExtremes => svd_values(&a).map_err(at_n)?.condition,
            };
            (other, (other - s.condition).abs() / s.condition)
        } else {
            (f64::NAN, f64::NAN)
        };
        let p = params([
            ("n", n as f64),
            ("kappa_cross", cross),
            ("cross_rel_diff", diff),
            ("iterative", (s.method == Method::IterativeExtremes) as u8 as f64),
        ]);
        Ok(SweepRecord::new(trial, p, Some((s.sigma_min, s.sigma_max)), Vec::new()))
    })?;

    let kappas: Vec<f64> = records.iter().filter_map(SweepRecord::kappa).collect();
    let monotone = kappas.windows(2).all(|w| w[1] >= w[0]);
    let max_diff = records
        .iter()
        .filter_map(|r| r.param("cross_rel_diff"))
        .filter(|d| !d.is_nan())
        .fold(0.0_f64, f64::max);
    let mut report = SweepReport::new("figure1", config_json(cfg, json!({"n_list": n_list})), records, started);
    report.summary.insert("kappa_nondecreasing".into(), monotone as u8 as f64);
    report.summary.insert("max_cross_rel_diff".into(), max_diff);
    Ok(report)
}

/// Random `ε` on `R(M̄) ∩ Z^d` with `‖ε‖_∞ = ell` exactly, tabulated per
/// multi-index or rank one.
pub fn random_frequency_perturbation<R: Rng>(rng: &mut R, m: &[usize], ell: f64, rank_one: bool) -> Result<PerturbationMap<f64>> {
    if rank_one {
        let total: usize = m.iter().sum();
        let flat = boundary_uniform(rng, total, ell);
        let mut axes = Vec::with_capacity(m.len());
        let mut at = 0;
        for &mk in m {
            axes.push(flat[at..at + mk].to_vec());
            at += mk;
        }
        PerturbationMap::rank_one_from_axes(&axes)
    } else {
        let lattice = rect_lattice(m)?;
        let d = m.len();
        let flat = boundary_uniform(rng, lattice.len() * d, ell);
        let table = lattice
            .into_iter()
            .zip(flat.chunks(d))
            .map(|(j, e)| (j, e.to_vec()))
            .collect();
        PerturbationMap::general(d, table)
    }
}

/// Perturbed-frequency DFT matrices against the Kadec-type bounds.
pub fn freq_stability_sweep(m: &[usize], ell_grid: &[f64], rank_one: bool, cfg: &SweepConfig) -> Result<SweepReport> {
    let started = Instant::now();
    cfg.validate()?;
    check_ell_grid(ell_grid)?;
    rect_lattice(m)?;
    let records = run_trials(ell_grid.len(), cfg.trials, |g, trial| {
        let ell = ell_grid[g];
        let mut rng = trial_rng(cfg.seed, g, trial);
        let eps = random_frequency_perturbation(&mut rng, m, ell, rank_one)?;
        let a = build_perturbed_dft_freq(m, &eps, None)?;
        let s = cfg.measure(&a).map_err(|e| e.context(format!("freq_stability ℓ={ell} trial={trial}")))?;
        let report = dft_freq_bounds(m, ell, rank_one)?;
        let check = BoundCheck::from_report("dft_frequency", &report, s.sigma_min, s.sigma_max);
        let p = params([("ell", ell), ("sup_norm", eps.sup_norm())]);
        let mut r = SweepRecord::new(trial, p, Some((s.sigma_min, s.sigma_max)), vec![check]);
        dump_violation(cfg, "freq_stability", g, &mut r, &a);
        Ok(r)
    })?;
    let extra = json!({"m": m, "ell_grid": ell_grid, "rank_one": rank_one});
    Ok(SweepReport::new("freq_stability", config_json(cfg, extra), records, started))
}

/// Perturbed Vandermonde nodes `u_k + δ_k / L` around well-separated
/// base nodes, against the node-stability bound.
pub fn node_stability_sweep(rows: usize, n: usize, ell_grid: &[f64], cfg: &SweepConfig) -> Result<SweepReport> {
    let started = Instant::now();
    cfg.validate()?;
    check_ell_grid(ell_grid)?;
    if n == 0 || 2 * n >= rows {
        return Err(Error::InvalidInput(format!("need 1 <= N < L/2 for base separation 2/L, got L={rows}, N={n}")));
    }
    let gap = 2.0 / rows as f64;
    let records = run_trials(ell_grid.len(), cfg.trials, |g, trial| {
        let ell = ell_grid[g];
        let ctx = |e: Error| e.context(format!("node_stability ℓ={ell} trial={trial}"));
        let mut rng = trial_rng(cfg.seed, g, trial);
        let base = separated_nodes(&mut rng, n, gap);
        let delta = boundary_uniform(&mut rng, n, ell);
        let v = build_vandermonde(rows, &base)?.matrix;
        let s0 = cfg.measure(&v).map_err(ctx)?;
        let report = vandermonde_node_bounds(s0.sigma_min, s0.sigma_max, ell)?;
        let p = params([
            ("ell", ell),
            ("base_sigma_r", s0.sigma_min),
            ("base_sigma_1", s0.sigma_max),
            ("gate", report.applicable as u8 as f64),
            ("sep", separation(&base)?),
        ]);
        if !report.applicable {
            let check = BoundCheck::from_report("vandermonde_node", &report, 0.0, 0.0);
            return Ok(SweepRecord::new(trial, p, None, vec![check]));
        }
        let moved: Vec<f64> = base.iter().zip(&delta).map(|(u, d)| u + d / rows as f64).collect();
        let v1 = build_vandermonde(rows, &moved)?.matrix;
        let s1 = cfg.measure(&v1).map_err(ctx)?;
        let check = BoundCheck::from_report("vandermonde_node", &report, s1.sigma_min, s1.sigma_max);
        let mut r = SweepRecord::new(trial, p, Some((s1.sigma_min, s1.sigma_max)), vec![check]);
        dump_violation(cfg, "node_stability", g, &mut r, &v1);
        Ok(r)
    })?;
    let gate_failures = records.iter().filter(|r| r.param("gate") == Some(0.0)).count();
    let extra = json!({"L": rows, "N": n, "ell_grid": ell_grid});
    let mut report = SweepReport::new("node_stability", config_json(cfg, extra), records, started);
    report.summary.insert("gate_failures".into(), gate_failures as f64);
    Ok(report)
}

/// Random node sets with `sep(U) > 1/L` against the well-separated
/// sandwich.
pub fn wellsep_sweep(l_grid: &[usize], cfg: &SweepConfig) -> Result<SweepReport> {
    let started = Instant::now();
    cfg.validate()?;
    if l_grid.is_empty() {
        return Err(Error::InvalidInput("L grid is empty".into()));
    }
    if let Some(bad) = l_grid.iter().find(|&&l| l < 4) {
        return Err(Error::InvalidInput(format!("every L must be >= 4, got {bad}")));
    }
    let records = run_trials(l_grid.len(), cfg.trials, |g, trial| {
        let rows = l_grid[g];
        let mut rng = trial_rng(cfg.seed, g, trial);
        let n = rng.gen_range(2..=rows / 2);
        let (lo, hi) = (1.0 / rows as f64, 1.0 / n as f64);
        let gap = lo + (hi - lo) * rng.gen_range(0.001..1.0);
        let u = separated_nodes(&mut rng, n, gap);
        let sep = separation(&u)?.min(0.5);
        let v = build_vandermonde(rows, &u)?.matrix;
        let s = cfg.measure(&v).map_err(|e| e.context(format!("wellsep L={rows} trial={trial}")))?;
        let report = wellsep_bounds(rows, sep)?;
        let check = BoundCheck::from_report("well_separated", &report, s.sigma_min, s.sigma_max);
        let p = params([("L", rows as f64), ("N", n as f64), ("sep", sep)]);
        let mut r = SweepRecord::new(trial, p, Some((s.sigma_min, s.sigma_max)), vec![check]);
        dump_violation(cfg, "wellsep", g, &mut r, &v);
        Ok(r)
    })?;
    let extra = json!({"L_grid": l_grid});
    Ok(SweepReport::new("wellsep", config_json(cfg, extra), records, started))
}

/// Allowed perturbation size keeping `σ_min ≥ ½√Π`: the Weyl bound next
/// to the two Kadec-type thresholds.
pub fn benchmark_comparison(m: &[usize], cfg: &SweepConfig) -> Result<SweepReport> {
    let started = Instant::now();
    cfg.validate()?;
    let weyl = weyl_half_threshold(m)?;
    let d = m.len();
    let general = half_threshold_general(d).unwrap_or(f64::NAN);
    let rank_one = half_threshold_rank_one(d).unwrap_or(f64::NAN);
    let size: f64 = m.iter().map(|&x| x as f64).product();
    let p = params([
        ("d", d as f64),
        ("size", size),
        ("weyl_eps", weyl),
        ("ell_general", general),
        ("ell_rank_one", rank_one),
        ("ratio_rank_one_to_weyl", rank_one / weyl),
    ]);
    let records = vec![SweepRecord::new(0, p, None, Vec::new())];
    Ok(SweepReport::new("benchmark", config_json(cfg, json!({"m": m})), records, started))
}

/// `λ`-point clusters with internal spacing `α`, cluster centers spread
/// evenly with a random jitter; fits the log-log slope of `σ_N` in `α`
/// for every trial.
pub fn clump_experiment(
    rows: usize,
    n: usize,
    alpha_grid: &[f64],
    lambda: usize,
    constants: ClumpConstants,
    cfg: &SweepConfig,
) -> Result<SweepReport> {
    let started = Instant::now();
    cfg.validate()?;
    if lambda == 0 || n < lambda {
        return Err(Error::InvalidInput(format!("need 1 <= λ <= N, got λ={lambda}, N={n}")));
    }
    if rows < 6 * n {
        return Err(Error::InvalidInput(format!("needs L >= 6N, got L={rows}, N={n}")));
    }
    if alpha_grid.len() < 2 {
        return Err(Error::InvalidInput("alpha grid needs at least two values".into()));
    }
    if let Some(bad) = alpha_grid.iter().find(|&&a| !(a > 0.0 && a * rows as f64 <= 1.0)) {
        return Err(Error::InvalidInput(format!("every α must lie in (0, 1/L), got {bad}")));
    }
    let clusters = n.div_ceil(lambda);
    let mut records = run_trials(alpha_grid.len(), cfg.trials, |g, trial| {
        let alpha = alpha_grid[g];
        // same layout for every α of a trial, so the slope is fitted on one configuration
        let mut rng = trial_rng(cfg.seed, 0, trial);
        let rot: f64 = rng.gen();
        let mut u = Vec::with_capacity(n);
        for c in 0..clusters {
            let jitter: f64 = rng.gen_range(-0.1..0.1);
            let center = (c as f64 + rot + jitter) / clusters as f64;
            let size = lambda.min(n - c * lambda);
            u.extend((0..size).map(|t| center + t as f64 * alpha));
        }
        let dec = clump_decompose(&u, rows, lambda)?;
        if !dec.hypotheses_ok {
            return Err(Error::Unsatisfiable(format!("α={alpha}: {}", dec.reasons.join("; "))));
        }
        let v = build_vandermonde(rows, &u)?.matrix;
        let s = cfg.measure(&v).map_err(|e| e.context(format!("clump α={alpha} trial={trial}")))?;
        let report = clump_bounds(rows, n, alpha, lambda, constants)?;
        let check = BoundCheck::from_report("clumped", &report, s.sigma_min, s.sigma_max).informational_lower();
        let p = params([("alpha", alpha), ("L_alpha", alpha * rows as f64), ("lambda", lambda as f64)]);
        let mut r = SweepRecord::new(trial, p, Some((s.sigma_min, s.sigma_max)), vec![check]);
        dump_violation(cfg, "clump", g, &mut r, &v);
        Ok(r)
    })?;

    let mut slopes = Vec::with_capacity(cfg.trials);
    for trial in 0..cfg.trials {
        let pts: Vec<(f64, f64)> = records
            .iter()
            .filter(|r| r.trial == trial)
            .map(|r| (r.param("alpha").unwrap_or(f64::NAN).ln(), r.sigma_min.unwrap_or(f64::NAN).ln()))
            .collect();
        let slope = least_squares_slope(&pts);
        slopes.push(slope);
        for r in records.iter_mut().filter(|r| r.trial == trial) {
            r.params.insert("slope".into(), slope);
        }
    }
    let extra = json!({"L": rows, "N": n, "alpha_grid": alpha_grid, "lambda": lambda, "constants": constants});
    let mut report = SweepReport::new("clump", config_json(cfg, extra), records, started);
    let mean = slopes.iter().sum::<f64>() / slopes.len() as f64;
    report.summary.insert("expected_slope".into(), lambda as f64 - 1.0);
    report.summary.insert("slope_mean".into(), mean);
    report.summary.insert("slope_min".into(), slopes.iter().copied().fold(f64::INFINITY, f64::min));
    report.summary.insert("slope_max".into(), slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    Ok(report)
}

/// Slope of the least-squares line through `(x, y)`.
pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Square Vandermonde matrices with nodes `(k + ε_k) / N`. The bound
/// `σ_N ≥ √N (cos πℓ − sin πℓ)` is asserted; the reading with `N` in
/// place of `√N` is recorded without being asserted.
pub fn dft_node_probe(n: usize, ell_grid: &[f64], cfg: &SweepConfig) -> Result<SweepReport> {
    let started = Instant::now();
    cfg.validate()?;
    check_ell_grid(ell_grid)?;
    if n == 0 {
        return Err(Error::InvalidInput("N must be >= 1".into()));
    }
    let records = run_trials(ell_grid.len(), cfg.trials, |g, trial| {
        let ell = ell_grid[g];
        let mut rng = trial_rng(cfg.seed, g, trial);
        let eps = boundary_uniform(&mut rng, n, ell);
        let nodes: Vec<f64> = eps.iter().enumerate().map(|(k, e)| (k as f64 + e) / n as f64).collect();
        let v = build_vandermonde(n, &nodes)?.matrix;
        let s = cfg.measure(&v).map_err(|e| e.context(format!("dft_node_probe ℓ={ell} trial={trial}")))?;
        let report = dft_freq_bounds(&[n], ell, false)?;
        let root_scale = BoundCheck::from_report("sqrt_scale", &report, s.sigma_min, s.sigma_max);
        let (c, sn) = ((std::f64::consts::PI * ell).cos(), (std::f64::consts::PI * ell).sin());
        let nn = n as f64;
        let mut n_scale = BoundCheck::new("n_scale", Some(nn * (c - sn)), Some(nn * (2.0 - c + sn)), s.sigma_min, s.sigma_max);
        n_scale.assert_lower = false;
        n_scale.assert_upper = false;
        let p = params([("ell", ell), ("N", nn)]);
        let mut r = SweepRecord::new(trial, p, Some((s.sigma_min, s.sigma_max)), vec![root_scale, n_scale]);
        dump_violation(cfg, "dft_node_probe", g, &mut r, &v);
        Ok(r)
    })?;
    let count = |f: &dyn Fn(&BoundCheck) -> bool| {
        records.iter().filter(|r| r.check("n_scale").is_some_and(|c| f(c))).count() as f64
    };
    let lower_holds = count(&|c| c.lower_holds == Some(true));
    let upper_holds = count(&|c| c.upper_holds == Some(true));
    let extra = json!({"N": n, "ell_grid": ell_grid});
    let mut report = SweepReport::new("dft_node_probe", config_json(cfg, extra), records, started);
    report.summary.insert("n_scale_lower_holds".into(), lower_holds);
    report.summary.insert("n_scale_upper_holds".into(), upper_holds);
    Ok(report)
}
