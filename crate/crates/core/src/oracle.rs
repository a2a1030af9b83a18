//! Decomposition-free estimates of frame and Riesz constants, evaluated
//! from the function side with closed-form cube integrals, and the
//! discrete Hilbert-shift group `H_t` on `ℓ²(Z)`.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exp_systems::{gram_matrix, ExponentialSystemSpec};
use crate::scalar::{pairwise_sum, unit_phase, Scalar};
use crate::spectral::hermitian_eigen;

/// Piecewise-constant function on the union of cubes: `values[k]` on the
/// cube `Q + p_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CubeWitness<T> {
    spec: ExponentialSystemSpec<T>,
    values: Vec<Complex<T>>,
}

impl<T: Scalar> CubeWitness<T> {
    pub fn new(spec: ExponentialSystemSpec<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != spec.cube_count() {
            return Err(Error::DimensionMismatch(format!(
                "witness has {} values for {} cubes",
                values.len(),
                spec.cube_count()
            )));
        }
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidInput("witness values must be finite".into()));
        }
        Ok(Self { spec, values })
    }

    pub fn spec(&self) -> &ExponentialSystemSpec<T> {
        &self.spec
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    /// `‖f‖²` over the union of unit cubes.
    pub fn norm_sq(&self) -> T {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Σ_k φ_k e^{-2πi δ_j·p_k}` for every shift `j`.
    fn shift_sums(&self) -> Vec<Complex<T>> {
        let p = self.spec.p().points();
        self.spec
            .deltas()
            .points()
            .iter()
            .map(|d| {
                p.iter().zip(&self.values).fold(Complex::new(T::zero(), T::zero()), |acc, (pk, &phi)| {
                    acc + phi * unit_phase(-dot(d, pk))
                })
            })
            .collect()
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

fn sinc_pi<T: Scalar>(x: T) -> T {
    if x == T::zero() {
        T::one()
    } else {
        let y = T::PI() * x;
        y.sin() / y
    }
}

/// `Σ_{|n| ≤ trunc} sinc²(π(n + δ))`, which tends to 1.
fn truncated_sinc_mass<T: Scalar>(delta: T, trunc: usize) -> T {
    let t = trunc as i64;
    let terms: Vec<T> = (-t..=t)
        .map(|n| {
            let s = sinc_pi(T::from_i64_lossy(n) + delta);
            s * s
        })
        .collect();
    pairwise_sum(&terms)
}

/// Analysis ratio `Σ_j Σ_{‖n‖_∞ ≤ trunc} |⟨f, e^{2πi(n+δ_j)·x}⟩|² / ‖f‖²`.
///
/// Each inner product factors into a shift sum and a product of
/// one-dimensional sinc terms, so the only approximation is the frequency
/// truncation.
pub fn frame_ratio<T: Scalar>(witness: &CubeWitness<T>, trunc: usize) -> Result<T> {
    if trunc == 0 {
        return Err(Error::InvalidInput("trunc must be >= 1".into()));
    }
    let norm = witness.norm_sq();
    if norm == T::zero() {
        return Err(Error::InvalidInput("witness is identically zero".into()));
    }
    let sums = witness.shift_sums();
    let terms: Vec<T> = witness
        .spec()
        .deltas()
        .points()
        .iter()
        .zip(&sums)
        .map(|(d, c)| {
            d.iter()
                .fold(c.norm_sqr(), |acc, &da| acc * truncated_sinc_mass(da, trunc))
        })
        .collect();
    Ok(pairwise_sum(&terms) / norm)
}

/// The `trunc → ∞` limit of [`frame_ratio`], `‖Γ conj(φ)‖² / ‖φ‖²`.
pub fn frame_ratio_limit<T: Scalar>(witness: &CubeWitness<T>) -> Result<T> {
    let norm = witness.norm_sq();
    if norm == T::zero() {
        return Err(Error::InvalidInput("witness is identically zero".into()));
    }
    let terms: Vec<T> = witness.shift_sums().iter().map(|c| c.norm_sqr()).collect();
    Ok(pairwise_sum(&terms) / norm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Extreme {
    Min,
    Max,
}

/// Piecewise-constant function attaining the optimal lower (`Min`) or
/// upper (`Max`) frame constant.
///
/// The analysis sum equals `ψ^H B ψ` with `ψ = conj(φ)`, so the cube
/// values are the conjugate of the extreme unit eigenvector of the Gram
/// matrix `B`.
pub fn extremal_witness<T: Scalar>(spec: &ExponentialSystemSpec<T>, which: Extreme) -> Result<CubeWitness<T>> {
    if spec.shift_count() < spec.cube_count() {
        return Err(Error::InvalidInput(format!(
            "extremal witnesses need L >= N, got L={}, N={}",
            spec.shift_count(),
            spec.cube_count()
        )));
    }
    let (_, vectors) = hermitian_eigen(&gram_matrix(spec)?)?;
    let col = match which {
        Extreme::Max => 0,
        Extreme::Min => spec.cube_count() - 1,
    };
    let values = vectors.column(col).into_iter().map(|z| z.conj()).collect();
    CubeWitness::new(spec.clone(), values)
}

/// Finitely supported coefficients `a_{j, n}` keyed by shift index and
/// integer frequency vector.
pub type RieszCoefficients<T> = BTreeMap<(usize, Vec<i64>), Complex<T>>;

/// `∫_Q e^{2πi θ·x} dx` over the unit cube, `Π_a e^{πiθ_a} sinc(πθ_a)`.
fn cube_integral<T: Scalar>(theta: &[T]) -> Complex<T> {
    let half: T = theta.iter().copied().sum::<T>() / T::lit(2.0);
    let mag = theta.iter().fold(T::one(), |acc, &t| acc * sinc_pi(t));
    unit_phase(half) * mag
}

fn check_coefficients<T: Scalar>(spec: &ExponentialSystemSpec<T>, coeffs: &RieszCoefficients<T>) -> Result<T> {
    if coeffs.is_empty() {
        return Err(Error::InvalidInput("coefficient set is empty".into()));
    }
    for (j, n) in coeffs.keys() {
        if *j >= spec.shift_count() || n.len() != spec.dim() {
            return Err(Error::InvalidInput(format!("coefficient key ({j}, {n:?}) does not fit the system")));
        }
    }
    let mass: T = coeffs.values().map(|z| z.norm_sqr()).sum();
    if mass == T::zero() {
        return Err(Error::InvalidInput("coefficients are all zero".into()));
    }
    Ok(mass)
}

fn frequency<T: Scalar>(spec: &ExponentialSystemSpec<T>, j: usize, n: &[i64]) -> Vec<T> {
    spec.deltas().points()[j]
        .iter()
        .zip(n)
        .map(|(&d, &k)| T::from_i64_lossy(k) + d)
        .collect()
}

/// Synthesis ratio `‖Σ a_{j,n} e^{2πi(n+δ_j)·x}‖²_{L²(T)} / Σ |a_{j,n}|²`
/// from closed-form cross terms.
pub fn riesz_ratio<T: Scalar>(spec: &ExponentialSystemSpec<T>, coeffs: &RieszCoefficients<T>) -> Result<T> {
    let mass = check_coefficients(spec, coeffs)?;
    let terms: Vec<(Vec<T>, Complex<T>)> = coeffs
        .iter()
        .map(|((j, n), &a)| (frequency(spec, *j, n), a))
        .collect();
    let offsets = spec.p().points();
    let mut total = Complex::new(T::zero(), T::zero());
    for (wa, a) in &terms {
        for (wb, b) in &terms {
            let theta: Vec<T> = wa.iter().zip(wb).map(|(&x, &y)| x - y).collect();
            let over_cubes = offsets
                .iter()
                .fold(Complex::new(T::zero(), T::zero()), |acc, pk| acc + unit_phase(dot(&theta, pk)));
            total = total + *a * b.conj() * over_cubes * cube_integral(&theta);
        }
    }
    Ok(total.re / mass)
}

/// [`riesz_ratio`] with a Gauss–Legendre cross-check on `grid` nodes per
/// axis and cube; the two must agree to `1e-6` relative.
pub fn riesz_ratio_checked<T: Scalar>(
    spec: &ExponentialSystemSpec<T>,
    coeffs: &RieszCoefficients<T>,
    grid: usize,
) -> Result<T> {
    if grid < 64 {
        return Err(Error::InvalidInput(format!("grid must be >= 64, got {grid}")));
    }
    let closed = riesz_ratio(spec, coeffs)?;
    let mass = check_coefficients(spec, coeffs)?;
    let (nodes, weights) = gauss_legendre_unit(grid);
    let d = spec.dim();
    let terms: Vec<(Vec<T>, Complex<T>)> = coeffs
        .iter()
        .map(|((j, n), &a)| (frequency(spec, *j, n), a))
        .collect();
    let mut total = T::zero();
    let mut idx = vec![0usize; d];
    let mut x = vec![T::zero(); d];
    for pk in spec.p().points() {
        idx.iter_mut().for_each(|i| *i = 0);
        loop {
            let mut w = T::one();
            for a in 0..d {
                x[a] = pk[a] + nodes[idx[a]];
                w = w * weights[idx[a]];
            }
            let s = terms
                .iter()
                .fold(Complex::new(T::zero(), T::zero()), |acc, (om, c)| acc + *c * unit_phase(dot(om, &x)));
            total = total + w * s.norm_sqr();
            // odometer over the tensor grid
            let mut axis = d;
            while axis > 0 {
                axis -= 1;
                idx[axis] += 1;
                if idx[axis] < grid {
                    break;
                }
                idx[axis] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    let quad = total / mass;
    let scale = closed.abs().max(T::min_positive_value());
    if ((quad - closed) / scale).abs() > T::lit(1e-6) {
        return Err(Error::QuadratureMismatch {
            closed_form: closed.to_f64_lossy(),
            quadrature: quad.to_f64_lossy(),
        });
    }
    Ok(closed)
}

/// Gauss–Legendre nodes and weights on `[0, 1]`.
fn gauss_legendre_unit<T: Scalar>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    for i in 0..n.div_ceil(2) {
        // Newton on P_n from the Chebyshev-like initial guess
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0_f64, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = T::lit(0.5 * (1.0 - z));
        nodes[n - 1 - i] = T::lit(0.5 * (1.0 + z));
        weights[i] = T::lit(0.5 * w);
        weights[n - 1 - i] = T::lit(0.5 * w);
    }
    (nodes, weights)
}

/// Complex sequence on the contiguous window `start ..= start + len - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct FiniteSequence<T> {
    start: i64,
    values: Vec<Complex<T>>,
}

impl<T: Scalar> FiniteSequence<T> {
    pub fn new(start: i64, values: Vec<Complex<T>>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("sequence window is empty".into()));
        }
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidInput("sequence values must be finite".into()));
        }
        Ok(Self { start, values })
    }

    /// Unit impulse at `n`.
    pub fn impulse(n: i64) -> Self {
        Self {
            start: n,
            values: vec![Complex::new(T::one(), T::zero())],
        }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    /// Value at `n`, zero outside the window.
    pub fn at(&self, n: i64) -> Complex<T> {
        if n < self.start || n > self.end() {
            Complex::new(T::zero(), T::zero())
        } else {
            self.values[(n - self.start) as usize]
        }
    }

    pub fn norm_sq(&self) -> T {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `[-10K, 10K]` where `K` is the support radius (at least 1).
    pub fn default_window(&self) -> (i64, i64) {
        let k = self.start.abs().max(self.end().abs()).max(1);
        (-10 * k, 10 * k)
    }
}

/// `H_t a` on the window `lo ..= hi`:
/// `(-1)^t a_{m+t}` for integer `t`, otherwise
/// `(sin πt / π) Σ_n a_n / (m - n + t)`.
pub fn hilbert_shift<T: Scalar>(a: &FiniteSequence<T>, t: T, window: (i64, i64)) -> Result<FiniteSequence<T>> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::InvalidInput(format!("empty output window [{lo}, {hi}]")));
    }
    if !t.is_finite() {
        return Err(Error::InvalidInput("shift t must be finite".into()));
    }
    let values: Vec<Complex<T>> = if t == t.round() {
        let shift = t.to_i64().ok_or_else(|| Error::InvalidInput("shift out of range".into()))?;
        let sign = if shift.rem_euclid(2) == 0 { T::one() } else { -T::one() };
        (lo..=hi).map(|m| a.at(m + shift) * sign).collect()
    } else {
        let scale = (T::PI() * t).sin() / T::PI();
        (lo..=hi)
            .map(|m| {
                let mut acc = Complex::new(T::zero(), T::zero());
                for (i, &an) in a.values().iter().enumerate() {
                    let n = a.start() + i as i64;
                    acc = acc + an / (T::from_i64_lossy(m - n) + t);
                }
                acc * scale
            })
            .collect()
    };
    FiniteSequence::new(lo, values)
}
