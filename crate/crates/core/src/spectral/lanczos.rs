//! Lanczos with full reorthogonalization for the largest eigenvalue of a
//! Hermitian positive semidefinite operator given only by its action.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::tridiag::tridiagonal_eigen;
use super::vec_ops::{axpy_neg, czero, dotc, norm, scale_in_place};
use crate::scalar::Scalar;

/// Seed for every start vector; keeps unconverged diagnostics reproducible.
pub(crate) const START_SEED: u64 = 0x5eed_f00d;

pub(crate) struct TopEigen<T> {
    pub value: T,
    pub vector: Vec<Complex<T>>,
    pub iterations: usize,
    pub converged: bool,
}

pub(crate) fn start_vector<T: Scalar>(n: usize) -> Vec<Complex<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut v: Vec<Complex<T>> = (0..n)
        .map(|_| {
            Complex::new(
                T::lit(rng.gen_range(-1.0..1.0)),
                T::lit(rng.gen_range(-1.0..1.0)),
            )
        })
        .collect();
    let nv = norm(&v);
    scale_in_place(T::one() / nv, &mut v);
    v
}

pub(crate) fn top_eigen<T, F>(n: usize, mut op: F, tol: T, max_iter: usize) -> TopEigen<T>
where
    T: Scalar,
    F: FnMut(&[Complex<T>]) -> Vec<Complex<T>>,
{
    let steps = max_iter.max(1).min(n);
    let mut basis: Vec<Vec<Complex<T>>> = vec![start_vector(n)];
    let mut alpha: Vec<T> = Vec::new();
    let mut beta: Vec<T> = Vec::new();
    let mut best = T::zero();
    for k in 0..steps {
        let mut w = op(&basis[k]);
        let a = dotc(&basis[k], &w).re;
        alpha.push(a);
        // two passes of classical Gram–Schmidt against the whole basis
        for _ in 0..2 {
            for q in &basis {
                let c = dotc(q, &w);
                axpy_neg(c, q, &mut w);
            }
        }
        let b = norm(&w);
        let pairs = tridiagonal_eigen(&alpha, &beta);
        let (theta, last) = pairs[pairs.len() - 1];
        best = theta;
        let exhausted = b <= T::epsilon() * theta.abs().max(T::min_positive_value()) * T::lit(16.0);
        let converged = (b * last).abs() <= tol * theta.abs() || exhausted || k + 1 == n;
        if converged {
            return TopEigen {
                value: theta,
                vector: combine(&basis, &ritz_coefficients(&alpha, &beta, theta)),
                iterations: k + 1,
                converged: true,
            };
        }
        beta.push(b);
        scale_in_place(T::one() / b, &mut w);
        basis.push(w);
    }
    basis.truncate(alpha.len());
    beta.truncate(alpha.len() - 1);
    TopEigen {
        value: best,
        vector: combine(&basis, &ritz_coefficients(&alpha, &beta, best)),
        iterations: steps,
        converged: false,
    }
}

/// Eigenvector of the Lanczos tridiagonal for eigenvalue `theta`.
fn ritz_coefficients<T: Scalar>(alpha: &[T], beta: &[T], theta: T) -> Vec<T> {
    let k = alpha.len();
    let mut s = vec![T::zero(); k];
    s[0] = T::one();
    if k > 1 {
        // inverse iteration; the forward three-term recurrence can blow up
        let shift = theta * (T::one() + T::lit(64.0) * T::epsilon()) + T::min_positive_value();
        for _ in 0..3 {
            s = small_tridiag_solve(alpha, beta, shift, &s);
            let ns = s.iter().map(|&x| x * x).sum::<T>().sqrt();
            for x in &mut s {
                *x = *x / ns;
            }
        }
    }
    s
}

fn small_tridiag_solve<T: Scalar>(alpha: &[T], beta: &[T], shift: T, b: &[T]) -> Vec<T> {
    // dense Gaussian elimination with partial pivoting; k is small
    let k = alpha.len();
    let mut m = vec![vec![T::zero(); k + 1]; k];
    for i in 0..k {
        m[i][i] = alpha[i] - shift;
        if i + 1 < k {
            m[i][i + 1] = beta[i];
            m[i + 1][i] = beta[i];
        }
        m[i][k] = b[i];
    }
    for c in 0..k {
        let p = (c..k)
            .max_by(|&x, &y| m[x][c].abs().partial_cmp(&m[y][c].abs()).unwrap())
            .unwrap();
        m.swap(c, p);
        if m[c][c] == T::zero() {
            m[c][c] = T::epsilon() * T::epsilon();
        }
        for r in c + 1..(c + 3).min(k) {
            let f = m[r][c] / m[c][c];
            if f != T::zero() {
                for j in c..=k {
                    let v = m[c][j];
                    m[r][j] = m[r][j] - f * v;
                }
            }
        }
    }
    let mut x = vec![T::zero(); k];
    for i in (0..k).rev() {
        let mut s = m[i][k];
        for j in i + 1..k {
            s = s - m[i][j] * x[j];
        }
        x[i] = s / m[i][i];
    }
    x
}

fn combine<T: Scalar>(basis: &[Vec<Complex<T>>], coeffs: &[T]) -> Vec<Complex<T>> {
    let n = basis[0].len();
    let mut v = vec![czero::<T>(); n];
    for (q, &c) in basis.iter().zip(coeffs) {
        for (vi, qi) in v.iter_mut().zip(q) {
            *vi = *vi + *qi * c;
        }
    }
    let nv = norm(&v);
    if nv > T::zero() {
        scale_in_place(T::one() / nv, &mut v);
    }
    v
}
