//! Closed-form stability bounds, each wrapped in an applicability-checked
//! [`BoundReport`].

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::core_matrix::FrequencySet;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Which bound a report carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// Kadec-type frame constants for a perturbed exponential system.
    PerturbedFrame,
    /// Perturbed DFT frequencies.
    DftFrequency,
    /// Weyl perturbation bound for perturbed frequencies.
    WeylFrequency,
    /// Weyl perturbation bound for perturbed nodes.
    WeylNode,
    /// Kadec bound for perturbed Vandermonde nodes.
    VandermondeNode,
    /// Sandwich for nodes separated by more than `1/L`.
    WellSeparated,
    /// Clumped nodes with a bounded cluster size.
    Clumped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundScale {
    /// Bounds on singular values.
    Sigma,
    /// Bounds on squared singular values (frame constants).
    SigmaSquared,
}

/// A lower/upper pair on one scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledPair {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

/// Applicability verdict and bounds for one theorem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: Theorem,
    pub applicable: bool,
    pub reason: Option<String>,
    pub sigma_min_lower: Option<f64>,
    pub sigma_max_upper: Option<f64>,
    /// Scale of `sigma_min_lower` / `sigma_max_upper`.
    pub scale: BoundScale,
    pub inputs: Value,
    pub notes: Vec<String>,
    /// The same bounds as singular values.
    pub in_sigma: ScaledPair,
    /// The same bounds as squared singular values.
    pub in_sigma_squared: ScaledPair,
}

pub const VACUOUS_NOTE: &str = "vacuous lower bound (clipped at 0)";

impl BoundReport {
    fn not_applicable(theorem: Theorem, scale: BoundScale, reason: impl Into<String>, inputs: Value) -> Self {
        let none = ScaledPair { lower: None, upper: None };
        Self {
            theorem,
            applicable: false,
            reason: Some(reason.into()),
            sigma_min_lower: None,
            sigma_max_upper: None,
            scale,
            inputs,
            notes: Vec::new(),
            in_sigma: none,
            in_sigma_squared: none,
        }
    }

    /// Negative lower bounds are clipped to 0 and flagged.
    fn applicable(theorem: Theorem, scale: BoundScale, lower: Option<f64>, upper: Option<f64>, inputs: Value) -> Self {
        let mut notes = Vec::new();
        let lower = lower.map(|x| {
            if x < 0.0 {
                notes.push(VACUOUS_NOTE.to_string());
                0.0
            } else {
                x
            }
        });
        let (in_sigma, in_sigma_squared) = match scale {
            BoundScale::Sigma => (
                ScaledPair { lower, upper },
                ScaledPair {
                    lower: lower.map(|x| x * x),
                    upper: upper.map(|x| x * x),
                },
            ),
            BoundScale::SigmaSquared => (
                ScaledPair {
                    lower: lower.map(f64::sqrt),
                    upper: upper.map(f64::sqrt),
                },
                ScaledPair { lower, upper },
            ),
        };
        Self {
            theorem,
            applicable: true,
            reason: None,
            sigma_min_lower: lower,
            sigma_max_upper: upper,
            scale,
            inputs,
            notes,
            in_sigma,
            in_sigma_squared,
        }
    }

    pub fn is_vacuous(&self) -> bool {
        self.notes.iter().any(|n| n.starts_with("vacuous"))
    }

    /// Lower bound on the smallest singular value (`σ` scale).
    pub fn lower_sigma(&self) -> Option<f64> {
        self.in_sigma.lower
    }

    /// Upper bound on the largest singular value (`σ` scale).
    pub fn upper_sigma(&self) -> Option<f64> {
        self.in_sigma.upper
    }
}

fn check_ell<T: Scalar>(t: T) -> Result<()> {
    if !(t >= T::zero() && t <= T::lit(0.25)) {
        return Err(Error::InvalidInput(format!("t must lie in [0, 1/4], got {t}")));
    }
    Ok(())
}

fn sinc_pi<T: Scalar>(t: T) -> T {
    if t == T::zero() {
        T::one()
    } else {
        let x = T::PI() * t;
        x.sin() / x
    }
}

/// `1 - cos(πt) + sin(πt)` on `[0, 1/4]`.
pub fn kadec_c<T: Scalar>(t: T) -> Result<T> {
    check_ell(t)?;
    let x = T::PI() * t;
    Ok(T::one() - x.cos() + x.sin())
}

/// `(C(t) + sinc)^d - sinc^d` with `sinc = sin(πt)/(πt)`.
pub fn kadec_d<T: Scalar>(t: T, d: usize) -> Result<T> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension d must be >= 1".into()));
    }
    let c = kadec_c(t)?;
    let s = sinc_pi(t);
    let d = d as i32;
    Ok((c + s).powi(d) - s.powi(d))
}

fn ell_out_of_range(ell: f64) -> Option<String> {
    if ell >= 0.25 {
        Some("ℓ ≥ 1/4".to_string())
    } else {
        None
    }
}

fn check_nonneg_ell(ell: f64) -> Result<()> {
    if !(ell >= 0.0) || !ell.is_finite() {
        return Err(Error::InvalidInput(format!("ℓ must be a finite nonnegative number, got {ell}")));
    }
    Ok(())
}

/// Frame constants `A'`, `B'` of a perturbed exponential system with
/// constants `a ≤ b`; reported on the squared scale.
pub fn perturbed_frame_bounds(a: f64, b: f64, ell: f64, d: usize, rank_one: bool) -> Result<BoundReport> {
    if !(a > 0.0 && a <= b && b.is_finite()) {
        return Err(Error::InvalidInput(format!("need 0 < a <= b, got a={a}, b={b}")));
    }
    check_nonneg_ell(ell)?;
    let inputs = json!({"a": a, "b": b, "ell": ell, "d": d, "rank_one": rank_one});
    let scale = BoundScale::SigmaSquared;
    if let Some(reason) = ell_out_of_range(ell) {
        return Ok(BoundReport::not_applicable(Theorem::PerturbedFrame, scale, reason, inputs));
    }
    let ratio = (a / b).sqrt();
    let (k, exponent, label) = if rank_one {
        (kadec_c(ell)?, 2 * d as i32, "C(ℓ)")
    } else {
        (kadec_d(ell, d)?, 2, "D(ℓ)")
    };
    if k >= ratio {
        let reason = format!("{label} = {k} is not below √(a/b) = {ratio}");
        return Ok(BoundReport::not_applicable(Theorem::PerturbedFrame, scale, reason, inputs));
    }
    let lower = a * (1.0 - k / ratio).powi(exponent);
    let upper = b * (1.0 + k).powi(exponent);
    Ok(BoundReport::applicable(Theorem::PerturbedFrame, scale, Some(lower), Some(upper), inputs))
}

fn lattice_size(m: &[usize]) -> Result<f64> {
    if m.is_empty() || m.contains(&0) {
        return Err(Error::InvalidInput("every M_k must be >= 1".into()));
    }
    Ok(m.iter().map(|&x| x as f64).product())
}

/// Singular-value bounds for the DFT with perturbed frequencies,
/// `‖ε‖_∞ = ell`.
pub fn dft_freq_bounds(m: &[usize], ell: f64, rank_one: bool) -> Result<BoundReport> {
    let size = lattice_size(m)?;
    check_nonneg_ell(ell)?;
    let d = m.len();
    let inputs = json!({"m": m, "ell": ell, "rank_one": rank_one});
    let scale = BoundScale::Sigma;
    if let Some(reason) = ell_out_of_range(ell) {
        return Ok(BoundReport::not_applicable(Theorem::DftFrequency, scale, reason, inputs));
    }
    let root = size.sqrt();
    let (lo, hi) = if rank_one {
        let c = kadec_c(ell)?;
        ((1.0 - c).powi(d as i32), (1.0 + c).powi(d as i32))
    } else {
        let dd = kadec_d(ell, d)?;
        (1.0 - dd, 1.0 + dd)
    };
    Ok(BoundReport::applicable(Theorem::DftFrequency, scale, Some(lo * root), Some(hi * root), inputs))
}

/// `1/p'` for the Hölder conjugate of `p` (`p = ∞` allowed).
fn dual_inverse(p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidInput(format!("p must be >= 1 (or infinite), got {p}")));
    }
    Ok(if p.is_infinite() { 1.0 } else { 1.0 - 1.0 / p })
}

/// `‖x‖_q` with `q = ∞` handled exactly.
fn lp_norm(x: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        x.iter().fold(0.0, |m, v| m.max(v.abs()))
    } else if q == 1.0 {
        x.iter().map(|v| v.abs()).sum()
    } else {
        x.iter().map(|v| v.abs().powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

fn weyl_report(theorem: Theorem, sigma_n: f64, sigma_1: f64, shift: f64, inputs: Value) -> BoundReport {
    BoundReport::applicable(theorem, BoundScale::Sigma, Some(sigma_n - shift), Some(sigma_1 + shift), inputs)
}

/// Weyl bound for an `L × N` Fourier matrix whose frequencies move by at
/// most `eps` in `ℓ^p`.
pub fn weyl_freq_bounds(
    sigma_n: f64,
    sigma_1: f64,
    rows: usize,
    cols: usize,
    d: usize,
    p: f64,
    eps: f64,
) -> Result<BoundReport> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidInput(format!("eps must be >= 0, got {eps}")));
    }
    if !(sigma_n >= 0.0 && sigma_n <= sigma_1) {
        return Err(Error::InvalidInput(format!("need 0 <= sigma_n <= sigma_1, got {sigma_n}, {sigma_1}")));
    }
    let inv = dual_inverse(p)?;
    let shift = std::f64::consts::PI * (d as f64).powf(inv) * ((rows * cols) as f64).sqrt() * eps;
    let inputs = json!({"sigma_n": sigma_n, "sigma_1": sigma_1, "L": rows, "N": cols, "d": d, "p": p_json(p), "eps": eps});
    Ok(weyl_report(Theorem::WeylFrequency, sigma_n, sigma_1, shift, inputs))
}

fn p_json(p: f64) -> Value {
    if p.is_infinite() {
        json!("inf")
    } else {
        json!(p)
    }
}

/// `2π (Σ_j ‖ω_j‖_{p'}²)^{1/2}`.
pub fn weyl_node_constant<T: Scalar>(omega: &FrequencySet<T>, p: f64) -> Result<f64> {
    let inv = dual_inverse(p)?;
    let q = if inv == 0.0 { f64::INFINITY } else { 1.0 / inv };
    let sum: f64 = omega
        .points()
        .iter()
        .map(|w| {
            let v: Vec<f64> = w.iter().map(|x| x.to_f64_lossy()).collect();
            lp_norm(&v, q).powi(2)
        })
        .sum();
    Ok(2.0 * std::f64::consts::PI * sum.sqrt())
}

/// Weyl bound for a Fourier matrix whose `n_nodes` nodes move by at most
/// `eps` in `ℓ^p`.
pub fn weyl_node_bounds<T: Scalar>(
    sigma_n: f64,
    sigma_1: f64,
    omega: &FrequencySet<T>,
    n_nodes: usize,
    p: f64,
    eps: f64,
) -> Result<BoundReport> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidInput(format!("eps must be >= 0, got {eps}")));
    }
    let c = weyl_node_constant(omega, p)?;
    let shift = c * (n_nodes as f64).sqrt() * eps;
    let inputs = json!({"sigma_n": sigma_n, "sigma_1": sigma_1, "N": n_nodes, "p": p_json(p), "eps": eps, "c_omega": c});
    Ok(weyl_report(Theorem::WeylNode, sigma_n, sigma_1, shift, inputs))
}

/// Bounds for a Vandermonde matrix whose nodes move by `δ_k / L` with
/// `‖δ‖_∞ = ell`, given the unperturbed `σ_r` and `σ_1`.
pub fn vandermonde_node_bounds(sigma_r: f64, sigma_1: f64, ell: f64) -> Result<BoundReport> {
    if !(sigma_r > 0.0 && sigma_r <= sigma_1) {
        return Err(Error::InvalidInput(format!("need 0 < sigma_r <= sigma_1, got {sigma_r}, {sigma_1}")));
    }
    check_nonneg_ell(ell)?;
    let inputs = json!({"sigma_r": sigma_r, "sigma_1": sigma_1, "ell": ell});
    let scale = BoundScale::Sigma;
    if let Some(reason) = ell_out_of_range(ell) {
        return Ok(BoundReport::not_applicable(Theorem::VandermondeNode, scale, reason, inputs));
    }
    let c = kadec_c(ell)?;
    let inv_kappa = sigma_r / sigma_1;
    if c >= inv_kappa {
        let reason = format!("C(ℓ) = {c} is not below σ_r/σ_1 = {inv_kappa}");
        return Ok(BoundReport::not_applicable(Theorem::VandermondeNode, scale, reason, inputs));
    }
    let lower = sigma_r * (1.0 - c / inv_kappa);
    let upper = sigma_1 * (1.0 + c);
    let mut report = BoundReport::applicable(Theorem::VandermondeNode, scale, Some(lower), Some(upper), inputs);
    report.notes.push("perturbed nodes are u_k + δ_k / L".into());
    Ok(report)
}

/// Lower bounds below this fraction of `L` are flagged as nearly vacuous.
const NEAR_VACUOUS_FRACTION: f64 = 0.01;

/// `L - 1/sep ≤ σ² ≤ L + 1/sep` for nodes with `sep > 1/L`.
pub fn wellsep_bounds(rows: usize, sep: f64) -> Result<BoundReport> {
    if rows == 0 {
        return Err(Error::InvalidInput("L must be >= 1".into()));
    }
    if !(sep > 0.0 && sep <= 0.5) {
        return Err(Error::InvalidInput(format!("separation must lie in (0, 1/2], got {sep}")));
    }
    let l = rows as f64;
    let inputs = json!({"L": rows, "sep": sep});
    let scale = BoundScale::SigmaSquared;
    if sep * l <= 1.0 {
        let reason = format!("hypothesis sep(U) > 1/L fails: sep = {sep}, 1/L = {}", 1.0 / l);
        return Ok(BoundReport::not_applicable(Theorem::WellSeparated, scale, reason, inputs));
    }
    let lower = l - 1.0 / sep;
    let mut report = BoundReport::applicable(Theorem::WellSeparated, scale, Some(lower), Some(l + 1.0 / sep), inputs);
    if lower < NEAR_VACUOUS_FRACTION * l {
        report.notes.push("vacuous: lower bound is below 1% of L (sep is close to 1/L)".into());
    }
    Ok(report)
}

/// Universal constants of the clumped-node bound. Their values are not
/// known here; both default to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClumpConstants {
    pub c_universal: f64,
    pub c_small: f64,
}

impl Default for ClumpConstants {
    fn default() -> Self {
        Self {
            c_universal: 1.0,
            c_small: 1.0,
        }
    }
}

pub const CLUMP_CONSTANTS_NOTE: &str =
    "lower bound uses configured universal constants C and c; their true values are not part of this library";

/// `σ_N ≥ C √(L/N) (c L α)^{λ-1}` and `σ_1 ≤ √(L(λ + 1/3))`.
pub fn clump_bounds(rows: usize, n_nodes: usize, alpha: f64, lambda: usize, k: ClumpConstants) -> Result<BoundReport> {
    if !(k.c_universal > 0.0 && k.c_small > 0.0) {
        return Err(Error::InvalidInput("constants C and c must be positive".into()));
    }
    let inputs = json!({
        "L": rows, "N": n_nodes, "alpha": alpha, "lambda": lambda,
        "c_universal": k.c_universal, "c_small": k.c_small,
    });
    let scale = BoundScale::Sigma;
    let l = rows as f64;
    let fail = |reason: String| Ok(BoundReport::not_applicable(Theorem::Clumped, scale, reason, inputs.clone()));
    if n_nodes == 0 || rows < 6 * n_nodes {
        return fail(format!("needs L >= 6N, got L={rows}, N={n_nodes}"));
    }
    if !(alpha > 0.0 && alpha < 1.0 / l) {
        return fail(format!("needs 0 < α < 1/L, got α={alpha}, 1/L={}", 1.0 / l));
    }
    if lambda == 0 {
        return fail("needs λ >= 1".into());
    }
    let lower = k.c_universal * (l / n_nodes as f64).sqrt() * (k.c_small * l * alpha).powi(lambda as i32 - 1);
    let upper = (l * (lambda as f64 + 1.0 / 3.0)).sqrt();
    let mut report = BoundReport::applicable(Theorem::Clumped, scale, Some(lower), Some(upper), inputs);
    report.notes.push(CLUMP_CONSTANTS_NOTE.into());
    Ok(report)
}

fn require_odd(n: usize) -> Result<()> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidInput(format!("n must be odd and >= 3, got {n}")));
    }
    Ok(())
}

/// Exact singular values (descending) of the leading `n × n` block of the
/// `(n+1)`-point DFT: `√(n+1)` with multiplicity `n-1`, then `1`.
pub fn instability_spectrum(n: usize) -> Result<Vec<f64>> {
    require_odd(n)?;
    let mut s = vec![((n + 1) as f64).sqrt(); n - 1];
    s.push(1.0);
    Ok(s)
}

/// Condition number `√(n+1)` of the same block.
pub fn instability_condition(n: usize) -> Result<f64> {
    require_odd(n)?;
    Ok(((n + 1) as f64).sqrt())
}

/// Largest frequency perturbation for which the Weyl bound still keeps
/// `σ_min ≥ ½√Π` for the DFT of shape `m` (with `p = ∞`).
pub fn weyl_half_threshold(m: &[usize]) -> Result<f64> {
    let size = lattice_size(m)?;
    Ok(1.0 / (2.0 * std::f64::consts::PI * m.len() as f64 * size.sqrt()))
}

/// Bisection for the root of an increasing function on `[0, 1/4]`.
fn bisect_increasing(f: impl Fn(f64) -> f64, target: f64) -> Option<f64> {
    let (mut lo, mut hi) = (0.0_f64, 0.25_f64);
    if f(lo) > target || f(hi) < target {
        return None;
    }
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// `ℓ` with `1 - D(ℓ, d) = ½`; `None` if no root in `[0, 1/4]`.
pub fn half_threshold_general(d: usize) -> Option<f64> {
    bisect_increasing(|t| kadec_d(t, d).unwrap_or(f64::NAN), 0.5)
}

/// `ℓ` with `(1 - C(ℓ))^d = ½`; `None` if no root in `[0, 1/4]`.
pub fn half_threshold_rank_one(d: usize) -> Option<f64> {
    let target = 1.0 - 0.5_f64.powf(1.0 / d as f64);
    bisect_increasing(|t| kadec_c(t).unwrap_or(f64::NAN), target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kadec_c_values() {
        assert_eq!(kadec_c(0.0_f64).unwrap(), 0.0);
        assert_relative_eq!(kadec_c(0.25_f64).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(kadec_c(1.0_f64 / 6.0).unwrap(), 1.5 - 3f64.sqrt() / 2.0, epsilon = 1e-15);
        assert!(kadec_c(0.3_f64).is_err());
        assert!(kadec_c(-0.01_f64).is_err());
    }

    #[test]
    fn kadec_d_values() {
        assert_eq!(kadec_d(0.0_f64, 3).unwrap(), 0.0);
        assert_relative_eq!(kadec_d(0.13_f64, 1).unwrap(), kadec_c(0.13_f64).unwrap(), epsilon = 1e-15);
        // (C + s)^2 - s^2 at t = 0.1 evaluated independently
        let t = 0.1_f64;
        let s = (std::f64::consts::PI * t).sin() / (std::f64::consts::PI * t);
        let c = 1.0 - (std::f64::consts::PI * t).cos() + (std::f64::consts::PI * t).sin();
        assert_relative_eq!(kadec_d(t, 2).unwrap(), c * c + 2.0 * c * s, epsilon = 1e-15);
        assert!((kadec_d(t, 2).unwrap() - 0.832338).abs() < 1e-6);
    }

    #[test]
    fn frame_examples() {
        let r = perturbed_frame_bounds(1.0, 1.0, 0.0, 2, false).unwrap();
        assert_eq!((r.sigma_min_lower, r.sigma_max_upper), (Some(1.0), Some(1.0)));
        let r = perturbed_frame_bounds(1.0, 1.0, 1.0 / 6.0, 1, false).unwrap();
        assert_relative_eq!(r.sigma_min_lower.unwrap(), 0.1339745962155614, epsilon = 1e-12);
        assert_relative_eq!(r.sigma_max_upper.unwrap(), 2.669872981077807, epsilon = 1e-12);
        assert_eq!(r.scale, BoundScale::SigmaSquared);
        // C(ℓ) = 0.5 exceeds √(1/9)
        let ell = (std::f64::consts::FRAC_PI_4 - (0.5 / 2f64.sqrt()).asin()) / std::f64::consts::PI;
        let r = perturbed_frame_bounds(1.0, 9.0, ell, 1, true).unwrap();
        assert!(!r.applicable && r.reason.is_some() && r.sigma_min_lower.is_none());
        let r = perturbed_frame_bounds(1.0, 1.0, 0.25, 1, true).unwrap();
        assert_eq!(r.reason.as_deref(), Some("ℓ ≥ 1/4"));
    }

    #[test]
    fn dft_examples() {
        let r = dft_freq_bounds(&[16], 0.0, false).unwrap();
        assert_eq!((r.sigma_min_lower, r.sigma_max_upper), (Some(4.0), Some(4.0)));
        let r = dft_freq_bounds(&[16], 1.0 / 6.0, false).unwrap();
        assert_relative_eq!(r.sigma_min_lower.unwrap(), 1.4641016151377544, epsilon = 1e-12);
        assert_relative_eq!(r.sigma_max_upper.unwrap(), 6.535898384862246, epsilon = 1e-12);
        let r = dft_freq_bounds(&[2, 2], 0.1, true).unwrap();
        assert_relative_eq!(r.sigma_min_lower.unwrap(), 0.8244294954150538, epsilon = 1e-12);
        assert!(!dft_freq_bounds(&[4], 0.3, true).unwrap().applicable);
    }

    #[test]
    fn frame_and_dft_translate() {
        for &ell in &[0.0, 0.05, 0.1, 0.2] {
            let f = perturbed_frame_bounds(16.0, 16.0, ell, 1, false).unwrap();
            let g = dft_freq_bounds(&[16], ell, false).unwrap();
            assert_relative_eq!(f.lower_sigma().unwrap(), g.sigma_min_lower.unwrap(), epsilon = 1e-12);
        }
    }

    #[test]
    fn weyl_examples() {
        let r = weyl_freq_bounds(2.0, 2.0, 4, 4, 1, f64::INFINITY, 0.0).unwrap();
        assert_eq!((r.sigma_min_lower, r.sigma_max_upper), (Some(2.0), Some(2.0)));
        let r = weyl_freq_bounds(2.0, 2.0, 4, 4, 1, f64::INFINITY, 0.01).unwrap();
        assert_relative_eq!(r.sigma_min_lower.unwrap(), 2.0 - 0.04 * std::f64::consts::PI, epsilon = 1e-14);
        let m = [8usize, 8];
        let eps = weyl_half_threshold(&m).unwrap();
        let r = weyl_freq_bounds(8.0, 8.0, 64, 64, 2, f64::INFINITY, eps).unwrap();
        assert_relative_eq!(r.sigma_min_lower.unwrap(), 4.0, epsilon = 1e-12);
        let r = weyl_freq_bounds(1.0, 1.0, 4, 4, 1, f64::INFINITY, 1.0).unwrap();
        assert_eq!(r.sigma_min_lower, Some(0.0));
        assert!(r.is_vacuous());
    }

    #[test]
    fn weyl_node_examples() {
        let omega = FrequencySet::from_scalars(&[0.0_f64, 1.0, 2.0, 3.0]).unwrap();
        let c = weyl_node_constant(&omega, f64::INFINITY).unwrap();
        assert_relative_eq!(c, 2.0 * std::f64::consts::PI * 14f64.sqrt(), epsilon = 1e-14);
        let zero = FrequencySet::from_scalars(&[0.0_f64]).unwrap();
        let r = weyl_node_bounds(1.0, 3.0, &zero, 5, 2.0, 0.3).unwrap();
        assert_eq!((r.sigma_min_lower, r.sigma_max_upper), (Some(1.0), Some(3.0)));
        // p = 1 pairs with the max norm
        let two = FrequencySet::new(vec![vec![1.0_f64, -3.0]]).unwrap();
        assert_relative_eq!(weyl_node_constant(&two, 1.0).unwrap(), 2.0 * std::f64::consts::PI * 3.0);
    }

    #[test]
    fn vandermonde_examples() {
        let r = vandermonde_node_bounds(2.0, 3.0, 0.0).unwrap();
        assert_eq!((r.sigma_min_lower, r.sigma_max_upper), (Some(2.0), Some(3.0)));
        let r = vandermonde_node_bounds(2.0, 2.0, 1.0 / 6.0).unwrap();
        assert_relative_eq!(r.sigma_min_lower.unwrap(), 0.7320508075688772, epsilon = 1e-12);
        assert_relative_eq!(r.sigma_max_upper.unwrap(), 3.267949192431123, epsilon = 1e-12);
        // C(ℓ) = 0.6 against σ_r/σ_1 = 0.5
        let ell = (std::f64::consts::FRAC_PI_4 - (0.4 / 2f64.sqrt()).asin()) / std::f64::consts::PI;
        assert!(!vandermonde_node_bounds(1.0, 2.0, ell).unwrap().applicable);
    }

    #[test]
    fn wellsep_examples() {
        let r = wellsep_bounds(4, 0.5).unwrap();
        assert_eq!((r.sigma_min_lower, r.sigma_max_upper), (Some(2.0), Some(6.0)));
        let r = wellsep_bounds(10, 0.2).unwrap();
        assert_relative_eq!(r.sigma_min_lower.unwrap(), 5.0, epsilon = 1e-12);
        assert_relative_eq!(r.sigma_max_upper.unwrap(), 15.0, epsilon = 1e-12);
        let r = wellsep_bounds(4, 0.25).unwrap();
        assert!(!r.applicable && r.reason.as_deref().unwrap().contains("sep(U) > 1/L"));
        assert!(wellsep_bounds(100, 0.01001).unwrap().is_vacuous());
    }

    #[test]
    fn clump_examples() {
        let k = ClumpConstants::default();
        let r = clump_bounds(60, 10, 0.01, 1, k).unwrap();
        assert_relative_eq!(r.sigma_min_lower.unwrap(), 6f64.sqrt(), epsilon = 1e-14);
        assert!(r.notes.iter().any(|n| n == CLUMP_CONSTANTS_NOTE));
        let r = clump_bounds(60, 10, 0.01, 2, k).unwrap();
        assert_relative_eq!(r.sigma_max_upper.unwrap(), 140f64.sqrt(), epsilon = 1e-14);
        assert!(!clump_bounds(60, 10, 1.0 / 30.0, 2, k).unwrap().applicable);
        assert!(!clump_bounds(50, 10, 0.001, 2, k).unwrap().applicable);
    }

    #[test]
    fn instability_examples() {
        assert_eq!(instability_spectrum(3).unwrap(), vec![2.0, 2.0, 1.0]);
        let s5 = instability_spectrum(5).unwrap();
        assert_eq!(s5.len(), 5);
        assert!(s5[..4].iter().all(|&x| x == 6f64.sqrt()));
        assert!(instability_spectrum(4).is_err());
        assert_eq!(instability_condition(15).unwrap(), 4.0);
    }

    #[test]
    fn half_thresholds() {
        let closed = (std::f64::consts::FRAC_PI_4 - (1.0 / (2.0 * 2f64.sqrt())).asin()) / std::f64::consts::PI;
        assert_relative_eq!(half_threshold_general(1).unwrap(), closed, epsilon = 1e-12);
        assert_relative_eq!(half_threshold_rank_one(1).unwrap(), closed, epsilon = 1e-12);
        let lb = half_threshold_rank_one(2).unwrap();
        assert!(((1.0 - kadec_c(lb).unwrap()).powi(2) - 0.5).abs() < 1e-12);
        let la = half_threshold_general(2).unwrap();
        assert!((kadec_d(la, 2).unwrap() - 0.5).abs() < 1e-12);
        assert!(weyl_half_threshold(&[10000]).unwrap() < 1.6e-3);
    }

    #[test]
    fn report_json_fields() {
        let r = dft_freq_bounds(&[16], 0.1, false).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in ["theorem", "applicable", "reason", "sigma_min_lower", "sigma_max_upper", "scale", "inputs"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["scale"], "sigma");
        assert_eq!(v["theorem"], "dft_frequency");
    }
}
