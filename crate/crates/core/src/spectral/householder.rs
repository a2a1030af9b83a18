//! Unitary reductions of a dense complex matrix: Householder
//! bidiagonalization (full SVD path) and QR / LU factors (inverse iteration).

use num_complex::Complex;

use super::vec_ops::{czero, norm, phase};
use crate::scalar::Scalar;

/// Hermitian reflector `I - tau w w^H` with `tau = 2 / ||w||^2`.
#[derive(Debug, Clone)]
pub(crate) struct Reflector<T> {
    pub offset: usize,
    pub w: Vec<Complex<T>>,
    pub tau: T,
}

impl<T: Scalar> Reflector<T> {
    /// Reflector mapping `x` onto a multiple of `e_1`; `None` when `x = 0`.
    pub fn annihilating(offset: usize, x: &[Complex<T>]) -> Option<Self> {
        let alpha = norm(x);
        if alpha == T::zero() {
            return None;
        }
        let mut w = x.to_vec();
        w[0] = w[0] + phase(x[0]) * alpha;
        let wn = norm(&w);
        if wn == T::zero() {
            return None;
        }
        Some(Self {
            offset,
            w,
            tau: T::lit(2.0) / (wn * wn),
        })
    }

    /// `v <- (I - tau w w^H) v` on the active index range.
    pub fn apply_vec(&self, v: &mut [Complex<T>]) {
        let seg = &mut v[self.offset..self.offset + self.w.len()];
        let s = self
            .w
            .iter()
            .zip(seg.iter())
            .fold(czero::<T>(), |acc, (w, x)| acc + w.conj() * x)
            * self.tau;
        for (x, w) in seg.iter_mut().zip(&self.w) {
            *x = *x - *w * s;
        }
    }
}

/// Row-major working matrix.
pub(crate) struct Work<T> {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Complex<T>>,
}

impl<T: Scalar> Work<T> {
    #[inline]
    fn at(&self, r: usize, c: usize) -> Complex<T> {
        self.a[r * self.cols + c]
    }

    fn column_segment(&self, c: usize, r0: usize) -> Vec<Complex<T>> {
        (r0..self.rows).map(|r| self.at(r, c)).collect()
    }

    /// Left update `A[r0.., c0..] <- H A[r0.., c0..]`.
    fn reflect_left(&mut self, h: &Reflector<T>, c0: usize) {
        let r0 = h.offset;
        let cols = self.cols;
        let mut s = vec![czero::<T>(); cols - c0];
        for (i, w) in h.w.iter().enumerate() {
            let row = &self.a[(r0 + i) * cols + c0..(r0 + i + 1) * cols];
            let wc = w.conj();
            for (acc, x) in s.iter_mut().zip(row) {
                *acc = *acc + wc * x;
            }
        }
        for z in &mut s {
            *z = *z * h.tau;
        }
        for (i, w) in h.w.iter().enumerate() {
            let row = &mut self.a[(r0 + i) * cols + c0..(r0 + i + 1) * cols];
            for (x, sc) in row.iter_mut().zip(&s) {
                *x = *x - *w * sc;
            }
        }
    }

    /// Right update `A[r0.., c..] <- A[r0.., c..] H` where `H` acts on the
    /// column range starting at `h.offset`.
    fn reflect_right(&mut self, h: &Reflector<T>, r0: usize) {
        let c0 = h.offset;
        let cols = self.cols;
        for r in r0..self.rows {
            let row = &mut self.a[r * cols + c0..r * cols + c0 + h.w.len()];
            let t = row
                .iter()
                .zip(&h.w)
                .fold(czero::<T>(), |acc, (x, w)| acc + x * w)
                * h.tau;
            for (x, w) in row.iter_mut().zip(&h.w) {
                *x = *x - t * w.conj();
            }
        }
    }
}

/// Result of `A = P B Q^H` with `B` upper bidiagonal (complex entries).
pub(crate) struct Bidiagonal<T> {
    pub diag: Vec<Complex<T>>,
    pub superdiag: Vec<Complex<T>>,
    pub right: Vec<Reflector<T>>,
}

impl<T: Scalar> Bidiagonal<T> {
    /// Reduces a tall (`rows >= cols`) matrix.
    pub fn reduce(mut work: Work<T>) -> Self {
        let (m, n) = (work.rows, work.cols);
        debug_assert!(m >= n);
        let mut diag = Vec::with_capacity(n);
        let mut superdiag = Vec::with_capacity(n.saturating_sub(1));
        let mut right = Vec::new();
        for k in 0..n {
            let col = work.column_segment(k, k);
            if let Some(h) = Reflector::annihilating(k, &col) {
                work.reflect_left(&h, k);
            }
            diag.push(work.at(k, k));
            if k + 1 < n {
                let row: Vec<Complex<T>> =
                    (k + 1..n).map(|c| work.at(k, c).conj()).collect();
                if k + 2 < n {
                    if let Some(h) = Reflector::annihilating(k + 1, &row) {
                        work.reflect_right(&h, k);
                        right.push(h);
                    }
                }
                superdiag.push(work.at(k, k + 1));
            }
        }
        Self {
            diag,
            superdiag,
            right,
        }
    }

    /// Moduli of the bidiagonal, whose singular values equal those of `B`.
    pub fn real_parts(&self) -> (Vec<T>, Vec<T>) {
        (
            self.diag.iter().map(|z| z.norm()).collect(),
            self.superdiag.iter().map(|z| z.norm()).collect(),
        )
    }

    /// Maps a right singular vector `y` of the real bidiagonal `|B|` to a
    /// right singular vector of the original matrix.
    pub fn lift_right_vector(&self, y: &[T]) -> Vec<Complex<T>> {
        // B = D1 |B| D2 with unit diagonal D1 = diag(a), D2 = diag(c)
        let n = self.diag.len();
        let mut c = vec![Complex::new(T::one(), T::zero()); n];
        for i in 0..n {
            let a = phase(self.diag[i]) * c[i].conj();
            if i + 1 < n {
                c[i + 1] = phase(self.superdiag[i]) * a.conj();
            }
        }
        let mut v: Vec<Complex<T>> = y
            .iter()
            .zip(&c)
            .map(|(&yi, ci)| ci.conj() * yi)
            .collect();
        for h in self.right.iter().rev() {
            h.apply_vec(&mut v);
        }
        v
    }
}

/// Upper-triangular factor of a Householder QR of a tall matrix.
pub(crate) fn qr_r_factor<T: Scalar>(mut work: Work<T>) -> Vec<Vec<Complex<T>>> {
    let n = work.cols;
    for k in 0..n {
        let col = work.column_segment(k, k);
        if let Some(h) = Reflector::annihilating(k, &col) {
            work.reflect_left(&h, k);
        }
    }
    (0..n)
        .map(|r| (0..n).map(|c| if c >= r { work.at(r, c) } else { czero() }).collect())
        .collect()
}

/// LU factorization with partial pivoting of a square matrix, stored in
/// place (unit lower triangle implicit).
pub(crate) struct Lu<T> {
    pub n: usize,
    pub lu: Vec<Complex<T>>,
    pub perm: Vec<usize>,
}

impl<T: Scalar> Lu<T> {
    /// `None` when a pivot vanishes exactly.
    pub fn factor(mut work: Work<T>) -> Option<Self> {
        let n = work.rows;
        debug_assert_eq!(n, work.cols);
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|r| (r, work.at(r, k).norm()))
                .fold((k, T::zero()), |(pb, vb), (r, v)| if v > vb { (r, v) } else { (pb, vb) });
            if best == T::zero() {
                return None;
            }
            if p != k {
                for c in 0..n {
                    work.a.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
            }
            let pivot = work.at(k, k);
            let (head, tail) = work.a.split_at_mut((k + 1) * n);
            let pivot_row = &head[k * n + k + 1..(k + 1) * n];
            for r in 0..n - k - 1 {
                let row = &mut tail[r * n..(r + 1) * n];
                let l = row[k] / pivot;
                row[k] = l;
                for (x, u) in row[k + 1..].iter_mut().zip(pivot_row) {
                    *x = *x - l * u;
                }
            }
        }
        Some(Self {
            n,
            lu: work.a,
            perm,
        })
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> Complex<T> {
        self.lu[r * self.n + c]
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.n;
        let mut x: Vec<Complex<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            let row = &self.lu[r * n..r * n + r];
            let s = row.iter().zip(&x[..r]).fold(czero::<T>(), |a, (l, y)| a + l * y);
            x[r] = x[r] - s;
        }
        for r in (0..n).rev() {
            let row = &self.lu[r * n + r + 1..(r + 1) * n];
            let s = row.iter().zip(&x[r + 1..]).fold(czero::<T>(), |a, (u, y)| a + u * y);
            x[r] = (x[r] - s) / self.at(r, r);
        }
        x
    }

    /// Solves `A^H x = b`.
    pub fn solve_adjoint(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        // A = P^T L U  =>  A^H = U^H L^H P
        let n = self.n;
        let mut y = b.to_vec();
        for r in 0..n {
            y[r] = y[r] / self.at(r, r).conj();
            let yr = y[r];
            let row = &self.lu[r * n + r + 1..(r + 1) * n];
            for (yc, u) in y[r + 1..].iter_mut().zip(row) {
                *yc = *yc - u.conj() * yr;
            }
        }
        for r in (0..n).rev() {
            let yr = y[r];
            let row = &self.lu[r * n..r * n + r];
            for (yc, l) in y[..r].iter_mut().zip(row) {
                *yc = *yc - l.conj() * yr;
            }
        }
        let mut x = vec![czero(); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i];
        }
        x
    }
}

/// Solves `R x = b` for upper-triangular `R` given as rows.
pub(crate) fn upper_solve<T: Scalar>(r: &[Vec<Complex<T>>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = r.len();
    let mut x = b.to_vec();
    for i in (0..n).rev() {
        let s = r[i][i + 1..]
            .iter()
            .zip(&x[i + 1..])
            .fold(czero::<T>(), |a, (u, y)| a + u * y);
        x[i] = (x[i] - s) / r[i][i];
    }
    x
}

/// Solves `R^H x = b` for upper-triangular `R` given as rows.
pub(crate) fn upper_adjoint_solve<T: Scalar>(
    r: &[Vec<Complex<T>>],
    b: &[Complex<T>],
) -> Vec<Complex<T>> {
    let n = r.len();
    let mut x = b.to_vec();
    for i in 0..n {
        x[i] = x[i] / r[i][i].conj();
        let xi = x[i];
        for (xc, u) in x[i + 1..].iter_mut().zip(&r[i][i + 1..]) {
            *xc = *xc - u.conj() * xi;
        }
    }
    x
}
