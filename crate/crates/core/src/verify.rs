//! Desk-scale invariant suites. Each check reports pass/fail with a short
//! detail string; a suite passes when every check does.

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::instability_spectrum;
use crate::core_matrix::{
    build_dft, build_fourier, build_instability_submatrix, build_perturbed_dft_freq, build_vandermonde,
    FrequencySet, NodeSet, PerturbationMap,
};
use crate::error::{Error, Result};
use crate::exp_systems::{
    gram_matrix, special_delta_condition, special_delta_nodes, tensor_kadec_condition, ExponentialSystemSpec,
};
use crate::experiments::{
    freq_stability_sweep, node_stability_sweep, trial_rng, wellsep_sweep, SweepConfig, SweepReport,
};
use crate::oracle::{extremal_witness, frame_ratio, riesz_ratio, CubeWitness, Extreme, RieszCoefficients};
use crate::scalar::dist_to_integer;
use crate::spectral::{extreme_singular_values, hermitian_eigenvalues, svd_values};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Matrices,
    Oracle,
    Bounds,
    Conditions,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matrices" => Ok(Self::Matrices),
            "oracle" => Ok(Self::Oracle),
            "bounds" => Ok(Self::Bounds),
            "conditions" => Ok(Self::Conditions),
            "all" => Ok(Self::All),
            other => Err(Error::Parse(format!(
                "unknown suite {other:?} (expected matrices, oracle, bounds, conditions or all)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<CheckOutcome>,
    pub violations: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn outcome(name: &str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        passed,
        detail,
    }
}

/// Runs `suite` with `trials` random instances per randomized check.
pub fn run_verify(suite: Suite, seed: u64, trials: usize) -> Result<VerifyReport> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be >= 1".into()));
    }
    let mut checks = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Matrices {
        checks.extend(matrix_checks(seed, trials)?);
    }
    if all || suite == Suite::Oracle {
        checks.extend(oracle_checks(seed, trials)?);
    }
    if all || suite == Suite::Bounds {
        checks.extend(bound_checks(seed, trials)?);
    }
    if all || suite == Suite::Conditions {
        checks.extend(condition_checks(seed, trials)?);
    }
    let violations = checks.iter().filter(|c| !c.passed).count();
    Ok(VerifyReport {
        suite,
        seed,
        trials,
        checks,
        violations,
    })
}

/// Random spec with `1 <= L <= max_l` shifts and `1 <= N <= max_n`
/// distinct integer offsets in `[-4, 4]^d`.
pub fn random_spec<R: Rng>(rng: &mut R, d: usize, max_l: usize, max_n: usize) -> ExponentialSystemSpec<f64> {
    assert!(max_n <= 9usize.pow(d as u32), "too many offsets for the box");
    loop {
        let l = rng.gen_range(1..=max_l);
        let n = rng.gen_range(1..=max_n);
        let deltas: Vec<Vec<f64>> = (0..l).map(|_| (0..d).map(|_| rng.gen::<f64>()).collect()).collect();
        let mut pts: Vec<Vec<i64>> = Vec::new();
        while pts.len() < n {
            let q: Vec<i64> = (0..d).map(|_| rng.gen_range(-4..=4)).collect();
            if !pts.contains(&q) {
                pts.push(q);
            }
        }
        let (Ok(deltas), Ok(p)) = (NodeSet::new(deltas), FrequencySet::from_integers(pts)) else {
            continue;
        };
        if let Ok(spec) = ExponentialSystemSpec::new(deltas, p) {
            return spec;
        }
    }
}

/// Random coefficients on `(j, n)` with `|n_a| <= 3`. `count` is capped
/// at the number of such keys.
pub fn random_coefficients<R: Rng>(rng: &mut R, spec: &ExponentialSystemSpec<f64>, count: usize) -> RieszCoefficients<f64> {
    let keys = spec.shift_count() * 7usize.pow(spec.dim() as u32);
    let count = count.min(keys);
    let mut coeffs = RieszCoefficients::new();
    while coeffs.len() < count {
        let j = rng.gen_range(0..spec.shift_count());
        let n: Vec<i64> = (0..spec.dim()).map(|_| rng.gen_range(-3..=3)).collect();
        coeffs.insert((j, n), Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    }
    coeffs
}

fn matrix_checks(seed: u64, trials: usize) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for m in [vec![8], vec![16], vec![3, 4], vec![2, 3, 4]] {
        let root = (m.iter().product::<usize>() as f64).sqrt();
        let s = svd_values(&build_dft::<f64>(&m)?)?;
        let err = s.singular_values.iter().fold(0.0_f64, |e, x| e.max((x - root).abs()));
        out.push(outcome(&format!("dft_degeneracy {m:?}"), err <= 1e-10 * root, format!("max |σ - √Π| = {err:.3e}")));
    }
    let mut worst = 0.0_f64;
    for n in (3..=51).step_by(2) {
        let s = svd_values(&build_instability_submatrix::<f64>(n)?)?;
        let exact = instability_spectrum(n)?;
        for (x, e) in s.singular_values.iter().zip(&exact) {
            worst = worst.max((x - e).abs() / e);
        }
    }
    out.push(outcome("instability_spectrum", worst <= 1e-9, format!("max relative error {worst:.3e}")));

    let (mut gram_err, mut eig_err) = (0.0_f64, 0.0_f64);
    for t in 0..trials {
        let mut rng = trial_rng(seed, 1, t);
        let d = rng.gen_range(1..=2);
        let spec = random_spec(&mut rng, d, 8, 8);
        let gamma = spec.associated_matrix()?;
        let b = gram_matrix(&spec)?;
        gram_err = gram_err.max(b.max_abs_diff(&gamma.gram()).unwrap_or(f64::INFINITY));
        let eig = hermitian_eigenvalues(&b)?;
        let sv = svd_values(&gamma)?.singular_values;
        for (k, lam) in eig.iter().enumerate() {
            let s2 = sv.get(k).map_or(0.0, |s| s * s);
            eig_err = eig_err.max((lam - s2).abs());
        }
    }
    out.push(outcome("gram_identity", gram_err <= 1e-10, format!("max entry error {gram_err:.3e}")));
    out.push(outcome("gram_eigenvalues", eig_err <= 1e-9, format!("max |λ - σ²| = {eig_err:.3e}")));

    let mut cross = 0.0_f64;
    for t in 0..trials {
        let mut rng = trial_rng(seed, 2, t);
        let n = rng.gen_range(2..=24);
        let l = n + rng.gen_range(0..=8);
        let freqs = FrequencySet::from_integers((0..l as i64).map(|j| vec![j]).collect())?;
        let nodes = NodeSet::new((0..n).map(|k| vec![(k as f64 + rng.gen_range(-0.3..0.3)) / n as f64]).collect())?;
        let a = build_fourier(&freqs, &nodes)?;
        let full = svd_values(&a)?;
        let it = extreme_singular_values(&a, 1e-14, 300)?;
        cross = cross
            .max((full.sigma_max - it.sigma_max).abs() / full.sigma_max)
            .max((full.sigma_min - it.sigma_min).abs() / full.sigma_min);
    }
    out.push(outcome("full_vs_iterative", cross <= 1e-8, format!("max relative difference {cross:.3e}")));
    Ok(out)
}

fn oracle_checks(seed: u64, trials: usize) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let (mut upper_breach, mut lower_breach, mut checked_lower) = (0usize, 0usize, 0usize);
    let mut frame_breach = 0usize;
    for t in 0..trials {
        let mut rng = trial_rng(seed, 3, t);
        let spec = random_spec(&mut rng, 1, 6, 6);
        let sv = svd_values(&spec.associated_matrix()?)?;
        let (hi, lo) = (sv.sigma_max.powi(2), sv.sigma_min.powi(2));
        let count = rng.gen_range(1..=8);
        let r = riesz_ratio(&spec, &random_coefficients(&mut rng, &spec, count))?;
        if r > hi + 1e-9 {
            upper_breach += 1;
        }
        if spec.shift_count() <= spec.cube_count() {
            checked_lower += 1;
            if r < lo - 1e-9 {
                lower_breach += 1;
            }
        }
        let values = (0..spec.cube_count())
            .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let w = CubeWitness::new(spec, values)?;
        if frame_ratio(&w, 50)? > hi + 1e-9 {
            frame_breach += 1;
        }
    }
    out.push(outcome("riesz_upper", upper_breach == 0, format!("{upper_breach} breaches in {trials} specs")));
    out.push(outcome(
        "riesz_lower",
        lower_breach == 0,
        format!("{lower_breach} breaches in {checked_lower} specs with L <= N"),
    ));
    out.push(outcome("frame_upper", frame_breach == 0, format!("{frame_breach} breaches in {trials} witnesses")));

    let spec = ExponentialSystemSpec::from_scalars(&[0.0, 0.5, 0.25], &[0, 1])?;
    let r = frame_ratio(&extremal_witness(&spec, Extreme::Max)?, 10_000)?;
    out.push(outcome("extremal_attainment", (4.0 - r) / 4.0 <= 0.01 && r <= 4.0 + 1e-9, format!("ratio {r:.6} vs 4")));
    Ok(out)
}

fn sweep_outcome(name: &str, rep: &SweepReport) -> CheckOutcome {
    outcome(name, rep.violations == 0, format!("{} violations in {} records", rep.violations, rep.records.len()))
}

fn bound_checks(seed: u64, trials: usize) -> Result<Vec<CheckOutcome>> {
    let cfg = SweepConfig::with_seed(seed, trials);
    Ok(vec![
        sweep_outcome("freq_stability [16]", &freq_stability_sweep(&[16], &[0.05, 0.1, 0.2, 0.24], false, &cfg)?),
        sweep_outcome("freq_stability [4, 4] rank one", &freq_stability_sweep(&[4, 4], &[0.1, 0.2], true, &cfg)?),
        sweep_outcome("node_stability", &node_stability_sweep(64, 16, &[0.05, 0.1], &cfg)?),
        sweep_outcome("wellsep", &wellsep_sweep(&[16, 64], &cfg)?),
    ])
}

/// Shift vector `δ` with `⟨p_a - p_b, δ⟩ ∈ Z` for one random pair when
/// `degenerate`, otherwise at least `margin` away from every such set.
pub fn sample_delta<R: Rng>(rng: &mut R, p: &[Vec<i64>], degenerate: bool, margin: f64) -> Vec<f64> {
    let d = p[0].len();
    loop {
        let mut delta: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
        if degenerate {
            let a = rng.gen_range(0..p.len());
            let b = (a + rng.gen_range(1..p.len())) % p.len();
            let q: Vec<i64> = p[a].iter().zip(&p[b]).map(|(x, y)| x - y).collect();
            let axis = q.iter().position(|&x| x != 0).expect("distinct points");
            let dot: f64 = delta.iter().zip(&q).map(|(x, &y)| x * y as f64).sum();
            delta[axis] += (dot.round() - dot) / q[axis] as f64;
            return delta;
        }
        let clear = (0..p.len()).all(|a| {
            (a + 1..p.len()).all(|b| {
                let dot: f64 = delta.iter().zip(p[a].iter().zip(&p[b])).map(|(x, (u, v))| x * (u - v) as f64).sum();
                dist_to_integer(dot) >= margin
            })
        });
        if clear {
            return delta;
        }
    }
}

/// Rank-one `ε` on `0..M_k` per axis, degenerate on one random axis pair
/// or with every pair at least `margin` from the degeneracy set.
pub fn sample_rank_one<R: Rng>(rng: &mut R, m: &[usize], degenerate: bool, margin: f64) -> Vec<Vec<f64>> {
    loop {
        let mut axes: Vec<Vec<f64>> = m.iter().map(|&mk| (0..mk).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        if degenerate {
            let candidates: Vec<usize> = (0..m.len()).filter(|&k| m[k] >= 2).collect();
            let axis = candidates[rng.gen_range(0..candidates.len())];
            let i = rng.gen_range(0..m[axis] - 1);
            let j = rng.gen_range(i + 1..m[axis]);
            let wrap = rng.gen_range(-1..=1) as f64 * m[axis] as f64;
            axes[axis][j] = axes[axis][i] - (j - i) as f64 + wrap;
            return axes;
        }
        let clear = m.iter().enumerate().all(|(k, &mk)| {
            (0..mk).all(|i| {
                (i + 1..mk).all(|j| dist_to_integer(((j - i) as f64 + axes[k][j] - axes[k][i]) / mk as f64) >= margin)
            })
        });
        if clear {
            return axes;
        }
    }
}

fn numerically_invertible(s: &crate::spectral::SpectralSummary<f64>) -> bool {
    s.sigma_min > 1e-8 * s.sigma_max
}

/// Agreement counts `(agree, total)` of the shift-progression condition
/// with numeric invertibility.
pub fn delta_condition_agreement(seed: u64, trials: usize) -> Result<(usize, usize)> {
    let mut agree = 0;
    for t in 0..trials {
        let mut rng = trial_rng(seed, 4, t);
        let d = rng.gen_range(1..=2);
        let n = rng.gen_range(2..=6);
        let mut pts: Vec<Vec<i64>> = Vec::new();
        while pts.len() < n {
            let q: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
            if !pts.contains(&q) {
                pts.push(q);
            }
        }
        let degenerate = rng.gen::<bool>();
        let delta = sample_delta(&mut rng, &pts, degenerate, 1e-3);
        let p = FrequencySet::from_integers(pts)?;
        let check = special_delta_condition(&delta, &p)?;
        // Γ for the shifts jδ is the Vandermonde matrix on the nodes δ·p_k;
        // this form also admits shifts that coincide on the torus
        let gamma = build_vandermonde(n, &special_delta_nodes(&delta, &p)?)?.matrix;
        let s = svd_values(&gamma)?;
        if check.holds == numerically_invertible(&s) {
            agree += 1;
        }
    }
    Ok((agree, trials))
}

/// Agreement counts of the per-axis rank-one condition with numeric
/// invertibility of the perturbed DFT.
pub fn tensor_condition_agreement(seed: u64, trials: usize) -> Result<(usize, usize)> {
    let mut agree = 0;
    for t in 0..trials {
        let mut rng = trial_rng(seed, 5, t);
        let d = rng.gen_range(1..=2);
        let m: Vec<usize> = loop {
            let m: Vec<usize> = (0..d).map(|_| rng.gen_range(1..=6)).collect();
            if m.iter().any(|&x| x >= 2) {
                break m;
            }
        };
        let degenerate = rng.gen::<bool>();
        let axes = sample_rank_one(&mut rng, &m, degenerate, 1e-3);
        let eps = PerturbationMap::rank_one_from_axes(&axes)?;
        let check = tensor_kadec_condition(&m, &eps)?;
        let s = svd_values(&build_perturbed_dft_freq(&m, &eps, None)?)?;
        if check.holds == numerically_invertible(&s) {
            agree += 1;
        }
    }
    Ok((agree, trials))
}

fn condition_checks(seed: u64, trials: usize) -> Result<Vec<CheckOutcome>> {
    let (a, n) = delta_condition_agreement(seed, trials)?;
    let (b, m) = tensor_condition_agreement(seed, trials)?;
    Ok(vec![
        outcome("special_delta_agreement", a == n, format!("{a}/{n} agree")),
        outcome("tensor_kadec_agreement", b == m, format!("{b}/{m} agree")),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_small() {
        let rep = run_verify(Suite::All, 3, 10).unwrap();
        for c in &rep.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert!(rep.passed());
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!("oracle".parse::<Suite>().unwrap(), Suite::Oracle);
        assert!("nope".parse::<Suite>().is_err());
    }
}
