//! Singular values of a real upper bidiagonal matrix through its
//! Golub–Kahan form: the `2n x 2n` symmetric tridiagonal with zero diagonal
//! and off-diagonal `(d_1, e_1, d_2, …, d_n)`, whose eigenvalues are `±σ_i`.
//! Sturm-count bisection on that matrix resolves every `σ_i` to high
//! relative accuracy.

use crate::scalar::Scalar;

pub(crate) struct GolubKahan<T> {
    off: Vec<T>,
    off_sq: Vec<T>,
    pivmin: T,
    bound: T,
}

impl<T: Scalar> GolubKahan<T> {
    pub fn new(diag: &[T], superdiag: &[T]) -> Self {
        let n = diag.len();
        let mut off = Vec::with_capacity(2 * n - 1);
        for i in 0..n {
            off.push(diag[i]);
            if i + 1 < n {
                off.push(superdiag[i]);
            }
        }
        let off_sq: Vec<T> = off.iter().map(|&b| b * b).collect();
        let max_sq = off_sq.iter().fold(T::zero(), |m, &x| m.max(x));
        let pivmin = T::min_positive_value() * T::one().max(max_sq);
        let mut bound = T::zero();
        for i in 0..=off.len() {
            let left = if i > 0 { off[i - 1] } else { T::zero() };
            let right = if i < off.len() { off[i] } else { T::zero() };
            bound = bound.max(left + right);
        }
        Self {
            off,
            off_sq,
            pivmin,
            bound,
        }
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: T) -> usize {
        let mut q = -x;
        if q.abs() < self.pivmin {
            q = -self.pivmin;
        }
        let mut count = usize::from(q < T::zero());
        for &b2 in &self.off_sq {
            q = -x - b2 / q;
            if q.abs() < self.pivmin {
                q = -self.pivmin;
            }
            if q < T::zero() {
                count += 1;
            }
        }
        count
    }

    /// All singular values, ascending.
    pub fn singular_values(&self) -> Vec<T> {
        let n = (self.off.len() + 1) / 2;
        let eps = T::epsilon();
        let hi0 = self.bound * (T::one() + T::lit(4.0) * eps) + self.pivmin;
        let abs_tol = self.bound * eps * eps;
        let mut out = Vec::with_capacity(n);
        let mut lo_floor = T::zero();
        for i in 0..n {
            let (mut lo, mut hi) = (lo_floor, hi0);
            // #{σ < x} = count_below(x) - n for x > 0
            for _ in 0..400 {
                let width = hi - lo;
                if width <= T::lit(2.0) * eps * hi.abs().max(lo.abs()) || width <= abs_tol {
                    break;
                }
                let mid = lo + width / T::lit(2.0);
                if mid <= lo || mid >= hi {
                    break;
                }
                if self.count_below(mid).saturating_sub(n) > i {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let sigma = (lo + hi) / T::lit(2.0);
            lo_floor = lo;
            out.push(sigma);
        }
        out
    }

    /// Right singular vector for `sigma` by inverse iteration on the
    /// Golub–Kahan matrix; `None` when the `v` half degenerates.
    pub fn right_vector(&self, sigma: T) -> Option<Vec<T>> {
        let m = self.off.len() + 1;
        let n = m / 2;
        let eps = T::epsilon();
        let shift = sigma + eps * self.bound.max(T::min_positive_value());
        let mut z: Vec<T> = (0..m)
            .map(|i| T::one() + T::lit(((i * 7919) % 97) as f64 / 97.0))
            .collect();
        for _ in 0..4 {
            z = shifted_solve(&self.off, shift, &z, eps * self.bound + self.pivmin);
            let nz = z.iter().map(|&x| x * x).sum::<T>().sqrt();
            if !(nz.is_finite() && nz > T::zero()) {
                return None;
            }
            for x in &mut z {
                *x = *x / nz;
            }
        }
        let v: Vec<T> = (0..n).map(|i| z[2 * i]).collect();
        let nv = v.iter().map(|&x| x * x).sum::<T>().sqrt();
        if nv < T::lit(1e-3) {
            return None;
        }
        Some(v.into_iter().map(|x| x / nv).collect())
    }
}

/// Solves `(T - shift I) x = b` for the zero-diagonal symmetric tridiagonal
/// `T` with off-diagonal `off`, Gaussian elimination with partial pivoting.
fn shifted_solve<T: Scalar>(off: &[T], shift: T, b: &[T], tiny: T) -> Vec<T> {
    let n = b.len();
    let mut d = vec![-shift; n];
    let mut dl = off.to_vec();
    let mut du = off.to_vec();
    let mut du2 = vec![T::zero(); n.saturating_sub(2)];
    let mut swapped = vec![false; n.saturating_sub(1)];
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == T::zero() {
                d[i] = tiny;
            }
            let fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] = d[i + 1] - fact * du[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            let temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            swapped[i] = true;
        }
    }
    if d[n - 1] == T::zero() {
        d[n - 1] = tiny;
    }
    let mut x = b.to_vec();
    for i in 0..n - 1 {
        if swapped[i] {
            let temp = x[i];
            x[i] = x[i + 1];
            x[i + 1] = temp - dl[i] * x[i];
        } else {
            x[i + 1] = x[i + 1] - dl[i] * x[i];
        }
    }
    x[n - 1] = x[n - 1] / d[n - 1];
    if n >= 2 {
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_bidiagonal() {
        let gk = GolubKahan::new(&[3.0_f64, 1.0, 2.0], &[0.0, 0.0]);
        let s = gk.singular_values();
        assert!((s[0] - 1.0).abs() < 1e-15);
        assert!((s[1] - 2.0).abs() < 1e-15);
        assert!((s[2] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn two_by_two_bidiagonal() {
        // [[1, 1], [0, 1]] has singular values golden ratio and its inverse
        let gk = GolubKahan::new(&[1.0_f64, 1.0], &[1.0]);
        let s = gk.singular_values();
        let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
        assert!((s[1] - phi).abs() < 1e-15);
        assert!((s[0] - 1.0 / phi).abs() < 1e-15);
        let v = gk.right_vector(s[1]).unwrap();
        // B v = σ u with ||u|| = 1
        let bv = [v[0] + v[1], v[1]];
        let nrm = (bv[0] * bv[0] + bv[1] * bv[1]).sqrt();
        assert!((nrm - phi).abs() < 1e-13);
    }

    #[test]
    fn zero_singular_value() {
        let gk = GolubKahan::new(&[1.0_f64, 0.0], &[0.0]);
        let s = gk.singular_values();
        assert!(s[0].abs() < 1e-30);
        assert!((s[1] - 1.0).abs() < 1e-15);
    }
}
