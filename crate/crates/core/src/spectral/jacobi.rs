//! Cyclic Jacobi for Hermitian matrices.

use num_complex::Complex;

use super::vec_ops::czero;
use crate::scalar::Scalar;

/// Eigen-decomposition `B = V diag(λ) V^H` of a Hermitian matrix stored
/// row-major; eigenvalues descending, eigenvectors as columns of `V`.
pub(crate) fn hermitian_jacobi<T: Scalar>(
    n: usize,
    mut a: Vec<Complex<T>>,
    want_vectors: bool,
) -> (Vec<T>, Option<Vec<Complex<T>>>) {
    let idx = |r: usize, c: usize| r * n + c;
    let mut v = want_vectors.then(|| {
        let mut v = vec![czero::<T>(); n * n];
        for i in 0..n {
            v[idx(i, i)] = Complex::new(T::one(), T::zero());
        }
        v
    });
    let frob: T = a.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    let thresh = T::epsilon() * frob;
    for _sweep in 0..100 {
        let mut off = T::zero();
        for r in 0..n {
            for c in r + 1..n {
                off = off + a[idx(r, c)].norm_sqr();
            }
        }
        if off.sqrt() <= thresh || frob == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = a[idx(p, q)];
                let bmod = b.norm();
                if bmod <= T::min_positive_value() {
                    continue;
                }
                let app = a[idx(p, p)].re;
                let aqq = a[idx(q, q)].re;
                // phase: D = diag(1, e^{-iφ}) makes the (p,q) entry real
                let ph = b / bmod;
                let zeta = (aqq - app) / (T::lit(2.0) * bmod);
                let t = if zeta >= T::zero() {
                    T::one() / (zeta + (T::one() + zeta * zeta).sqrt())
                } else {
                    -T::one() / (-zeta + (T::one() + zeta * zeta).sqrt())
                };
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = t * cs;
                // G = D R;  column ops  p' = cs p - sn e^{-iφ} q,  q' = sn p + cs e^{-iφ} q
                let phc = ph.conj();
                for r in 0..n {
                    let xp = a[idx(r, p)];
                    let xq = a[idx(r, q)] * phc;
                    a[idx(r, p)] = xp * cs - xq * sn;
                    a[idx(r, q)] = xp * sn + xq * cs;
                }
                // row ops with G^H
                for c in 0..n {
                    let xp = a[idx(p, c)];
                    let xq = a[idx(q, c)] * ph;
                    a[idx(p, c)] = xp * cs - xq * sn;
                    a[idx(q, c)] = xp * sn + xq * cs;
                }
                a[idx(p, q)] = czero();
                a[idx(q, p)] = czero();
                a[idx(p, p)] = Complex::new(a[idx(p, p)].re, T::zero());
                a[idx(q, q)] = Complex::new(a[idx(q, q)].re, T::zero());
                if let Some(v) = v.as_mut() {
                    for r in 0..n {
                        let xp = v[idx(r, p)];
                        let xq = v[idx(r, q)] * phc;
                        v[idx(r, p)] = xp * cs - xq * sn;
                        v[idx(r, q)] = xp * sn + xq * cs;
                    }
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[idx(j, j)]
            .re
            .partial_cmp(&a[idx(i, i)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| a[idx(i, i)].re).collect();
    let vectors = v.map(|v| {
        let mut out = vec![czero::<T>(); n * n];
        for (newc, &oldc) in order.iter().enumerate() {
            for r in 0..n {
                out[idx(r, newc)] = v[idx(r, oldc)];
            }
        }
        out
    });
    (values, vectors)
}
