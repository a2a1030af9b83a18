//! Implicit QL for real symmetric tridiagonal matrices (Ritz values of the
//! Lanczos recurrence).

use crate::scalar::Scalar;

/// Eigenvalues (ascending) and the last component of each normalized
/// eigenvector.
pub(crate) fn tridiagonal_eigen<T: Scalar>(diag: &[T], offdiag: &[T]) -> Vec<(T, T)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![T::zero(); n];
    e[..n - 1].copy_from_slice(&offdiag[..n - 1]);
    // rotations act row by row, so the last row of the eigenvector matrix
    // can be tracked on its own
    let mut z = vec![T::zero(); n];
    z[n - 1] = T::one();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (T::lit(2.0) * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut i = m;
            let mut early = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + T::lit(2.0) * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let fz = z[i + 1];
                z[i + 1] = s * z[i] + c * fz;
                z[i] = c * z[i] - s * fz;
            }
            if early {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    let mut pairs: Vec<(T, T)> = (0..n).map(|k| (d[k], z[k])).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        // [[2, 1], [1, 2]] -> {1, 3}, eigenvectors (1,-1)/√2, (1,1)/√2
        let pairs = tridiagonal_eigen(&[2.0_f64, 2.0], &[1.0]);
        assert!((pairs[0].0 - 1.0).abs() < 1e-14);
        assert!((pairs[1].0 - 3.0).abs() < 1e-14);
        assert!((pairs[1].1.abs() - 0.5_f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn laplacian_spectrum() {
        let n = 12;
        let pairs = tridiagonal_eigen(&vec![2.0_f64; n], &vec![-1.0; n - 1]);
        for (k, (lam, _)) in pairs.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((lam - exact).abs() < 1e-13);
        }
        let mass: f64 = pairs.iter().map(|p| p.1 * p.1).sum();
        assert!((mass - 1.0).abs() < 1e-13);
    }
}
