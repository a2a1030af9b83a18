//! Singular values, Hermitian eigenvalues, numeric rank and condition
//! numbers.
//!
//! Two independent paths are available. The full path reduces the matrix
//! to bidiagonal form with Householder reflectors and resolves every
//! singular value by bisection. The iterative path runs Lanczos on `A^H A`
//! for the largest value and on its inverse (through an LU or QR factor)
//! for the smallest.

mod householder;
mod jacobi;
mod lanczos;
mod tgk;
mod tridiag;
mod vec_ops;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::core_matrix::ComplexDense;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use householder::{qr_r_factor, upper_adjoint_solve, upper_solve, Bidiagonal, Lu, Work};
use tgk::GolubKahan;
use vec_ops::norm;

/// Matrices with `max(rows, cols)` above this use the iterative path in
/// [`summarize`].
pub const DEFAULT_CROSSOVER: usize = 1024;

/// Condition estimate beyond which the iterative smallest value is no
/// longer trusted and the full path takes over.
pub const ITERATIVE_CONDITION_LIMIT: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    FullDecomposition,
    IterativeExtremes,
}

/// Singular spectrum of a matrix.
///
/// On the iterative path `singular_values` holds only the two extremes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SpectralSummary<T> {
    pub singular_values: Vec<T>,
    pub sigma_max: T,
    pub sigma_min: T,
    #[serde(serialize_with = "ser_inf", deserialize_with = "de_inf")]
    pub condition: T,
    pub method: Method,
    pub residual: T,
}

fn ser_inf<T: Scalar, S: Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_infinite() && *x > T::zero() {
        s.serialize_str("inf")
    } else {
        x.serialize(s)
    }
}

fn de_inf<'de, T: Scalar, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<T, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum NumOrText<T> {
        Num(T),
        Text(String),
    }
    match NumOrText::<T>::deserialize(d)? {
        NumOrText::Num(x) => Ok(x),
        NumOrText::Text(t) if t == "inf" => Ok(T::infinity()),
        NumOrText::Text(t) => Err(serde::de::Error::custom(format!("expected number or \"inf\", got {t:?}"))),
    }
}

/// Knobs for [`summarize`] and the iterative path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions<T> {
    pub crossover: usize,
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Scalar> Default for SpectralOptions<T> {
    fn default() -> Self {
        Self {
            crossover: DEFAULT_CROSSOVER,
            tol: T::rank_eps(),
            max_iter: 300,
        }
    }
}

/// Extreme singular values from the iterative path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremes<T> {
    pub sigma_max: T,
    pub sigma_min: T,
    /// Total Lanczos steps over both runs.
    pub iterations: usize,
    pub residual: T,
    /// `FullDecomposition` when the ill-conditioning fallback fired.
    pub method: Method,
}

/// `max(rows, cols) * rank_eps`, the default relative rank tolerance.
pub fn default_rank_tol<T: Scalar>(rows: usize, cols: usize) -> T {
    T::from_usize_lossy(rows.max(cols)) * T::rank_eps()
}

fn check_finite<T: Scalar>(a: &ComplexDense<T>) -> Result<()> {
    for (i, z) in a.data().iter().enumerate() {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: i / a.cols(),
                col: i % a.cols(),
            });
        }
    }
    Ok(())
}

/// The matrix itself when tall, its adjoint when wide; both share singular
/// values.
fn tall_form<T: Scalar>(a: &ComplexDense<T>) -> ComplexDense<T> {
    if a.rows() >= a.cols() {
        a.clone()
    } else {
        a.conj_transpose()
    }
}

fn work_of<T: Scalar>(a: &ComplexDense<T>) -> Work<T> {
    Work {
        rows: a.rows(),
        cols: a.cols(),
        a: a.data().to_vec(),
    }
}

fn condition_of<T: Scalar>(smax: T, smin: T, rows: usize, cols: usize) -> T {
    if smin > default_rank_tol::<T>(rows, cols) * smax && smin > T::zero() {
        smax / smin
    } else {
        T::infinity()
    }
}

/// Indices of the singular pairs checked for the residual estimate.
fn probe_indices(n: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..8).map(|k| k * (n - 1) / 7).collect();
    idx.dedup();
    idx
}

/// All singular values by the full decomposition path.
pub fn svd_values<T: Scalar>(a: &ComplexDense<T>) -> Result<SpectralSummary<T>> {
    check_finite(a)?;
    let tall = tall_form(a);
    let bidiag = Bidiagonal::reduce(work_of(&tall));
    let (d, e) = bidiag.real_parts();
    let gk = GolubKahan::new(&d, &e);
    let ascending = gk.singular_values();
    let mut residual = T::zero();
    for i in probe_indices(ascending.len()) {
        let sigma = ascending[i];
        if let Some(y) = gk.right_vector(sigma) {
            let v = bidiag.lift_right_vector(&y);
            let av = norm(&tall.apply(&v));
            residual = residual.max((av - sigma).abs());
        }
    }
    let values: Vec<T> = ascending.into_iter().rev().collect();
    let (smax, smin) = (values[0], values[values.len() - 1]);
    Ok(SpectralSummary {
        condition: condition_of(smax, smin, a.rows(), a.cols()),
        singular_values: values,
        sigma_max: smax,
        sigma_min: smin,
        method: Method::FullDecomposition,
        residual,
    })
}

/// Extreme singular values by Lanczos iteration, with a fallback to the
/// full path when a factor pivot vanishes or the estimated condition
/// exceeds [`ITERATIVE_CONDITION_LIMIT`].
pub fn extreme_singular_values<T: Scalar>(
    a: &ComplexDense<T>,
    tol: T,
    max_iter: usize,
) -> Result<Extremes<T>> {
    check_finite(a)?;
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput(format!("tol must be positive, got {tol}")));
    }
    let fallback = |a: &ComplexDense<T>| -> Result<Extremes<T>> {
        let s = svd_values(a)?;
        Ok(Extremes {
            sigma_max: s.sigma_max,
            sigma_min: s.sigma_min,
            iterations: 0,
            residual: s.residual,
            method: Method::FullDecomposition,
        })
    };
    let tall = tall_form(a);
    let n = tall.cols();
    let top = lanczos::top_eigen(n, |x| tall.apply_adjoint(&tall.apply(x)), tol, max_iter);
    let sigma_max = top.value.max(T::zero()).sqrt();
    if sigma_max == T::zero() {
        return fallback(a);
    }

    let bottom = if tall.rows() == n {
        match Lu::factor(work_of(&tall)) {
            Some(lu) => lanczos::top_eigen(n, |x| lu.solve(&lu.solve_adjoint(x)), tol, max_iter),
            None => return fallback(a),
        }
    } else {
        let r = qr_r_factor(work_of(&tall));
        if r.iter().enumerate().any(|(i, row)| row[i].norm() == T::zero()) {
            return fallback(a);
        }
        lanczos::top_eigen(n, |x| upper_solve(&r, &upper_adjoint_solve(&r, x)), tol, max_iter)
    };
    let sigma_min = if bottom.value > T::zero() && bottom.value.is_finite() {
        T::one() / bottom.value.sqrt()
    } else {
        return fallback(a);
    };
    if sigma_max / sigma_min > T::lit(ITERATIVE_CONDITION_LIMIT) {
        return fallback(a);
    }
    let iterations = top.iterations + bottom.iterations;
    if !(top.converged && bottom.converged) {
        return Err(Error::Unconverged {
            best_max: sigma_max.to_f64_lossy(),
            best_min: sigma_min.to_f64_lossy(),
            iterations,
        });
    }
    let res_max = (norm(&tall.apply(&top.vector)) - sigma_max).abs();
    let res_min = (norm(&tall.apply(&bottom.vector)) - sigma_min).abs();
    Ok(Extremes {
        sigma_max,
        sigma_min,
        iterations,
        residual: res_max.max(res_min),
        method: Method::IterativeExtremes,
    })
}

/// Full path up to `opts.crossover`, iterative extremes beyond it.
pub fn summarize<T: Scalar>(a: &ComplexDense<T>, opts: &SpectralOptions<T>) -> Result<SpectralSummary<T>> {
    if a.rows().max(a.cols()) <= opts.crossover {
        return svd_values(a);
    }
    let ex = extreme_singular_values(a, opts.tol, opts.max_iter)?;
    let singular_values = if a.rows().min(a.cols()) == 1 {
        vec![ex.sigma_max]
    } else {
        vec![ex.sigma_max, ex.sigma_min]
    };
    Ok(SpectralSummary {
        singular_values,
        sigma_max: ex.sigma_max,
        sigma_min: ex.sigma_min,
        condition: condition_of(ex.sigma_max, ex.sigma_min, a.rows(), a.cols()),
        method: ex.method,
        residual: ex.residual,
    })
}

fn checked_hermitian<T: Scalar>(b: &ComplexDense<T>) -> Result<Vec<num_complex::Complex<T>>> {
    if b.rows() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "Hermitian eigenproblem needs a square matrix, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    check_finite(b)?;
    let scale = b.data().iter().fold(T::one(), |m, z| m.max(z.norm()));
    let defect = b.hermitian_defect().unwrap_or(T::zero());
    if defect > T::rank_eps() * scale {
        return Err(Error::NotHermitian {
            max_asymmetry: defect.to_f64_lossy(),
        });
    }
    let n = b.rows();
    let mut a = b.data().to_vec();
    for r in 0..n {
        a[r * n + r].im = T::zero();
        for c in r + 1..n {
            let avg = (a[r * n + c] + a[c * n + r].conj()) / T::lit(2.0);
            a[r * n + c] = avg;
            a[c * n + r] = avg.conj();
        }
    }
    Ok(a)
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues<T: Scalar>(b: &ComplexDense<T>) -> Result<Vec<T>> {
    let a = checked_hermitian(b)?;
    Ok(jacobi::hermitian_jacobi(b.rows(), a, false).0)
}

/// Eigenvalues (descending) and unit eigenvectors as the matching columns.
pub fn hermitian_eigen<T: Scalar>(b: &ComplexDense<T>) -> Result<(Vec<T>, ComplexDense<T>)> {
    let a = checked_hermitian(b)?;
    let n = b.rows();
    let (values, vectors) = jacobi::hermitian_jacobi(n, a, true);
    let vectors = ComplexDense::from_vec(n, n, vectors.expect("vectors requested"))?;
    Ok((values, vectors))
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numeric_rank<T: Scalar>(a: &ComplexDense<T>, rel_tol: T) -> Result<usize> {
    if !(rel_tol > T::zero() && rel_tol < T::one()) {
        return Err(Error::InvalidInput(format!("rel_tol must lie in (0, 1), got {rel_tol}")));
    }
    let s = svd_values(a)?;
    if s.sigma_max == T::zero() {
        return Ok(0);
    }
    let cut = rel_tol * s.sigma_max;
    Ok(s.singular_values.iter().filter(|&&x| x > cut).count())
}

/// `sigma_max / sigma_min`, infinite when numerically singular.
pub fn condition_number<T: Scalar>(a: &ComplexDense<T>) -> Result<T> {
    Ok(svd_values(a)?.condition)
}
