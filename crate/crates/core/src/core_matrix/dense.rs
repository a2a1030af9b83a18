use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense complex matrix stored row-major.
///
/// Every entry is finite and both dimensions are at least one.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexDense<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexDense<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn<F>(rows: usize, cols: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Complex<T>,
    {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self::from_vec(rows, cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::from_vec(rows, cols, vec![Complex::new(T::zero(), T::zero()); rows * cols])
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                Complex::new(T::one(), T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex<T>> {
        self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Complex<T>] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn conj_transpose(&self) -> Self {
        let mut t = self.transpose();
        for z in &mut t.data {
            *z = z.conj();
        }
        t
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let zero = Complex::new(T::zero(), T::zero());
        let mut out = vec![zero; self.rows * rhs.cols];
        for r in 0..self.rows {
            let out_row = &mut out[r * rhs.cols..(r + 1) * rhs.cols];
            for (k, &a) in self.row(r).iter().enumerate() {
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o = *o + a * b;
                }
            }
        }
        Self::from_vec(self.rows, rhs.cols, out)
    }

    /// `A* A`, the `cols x cols` Gram matrix of the columns.
    pub fn gram(&self) -> Self {
        self.conj_transpose()
            .matmul(self)
            .expect("conformable by construction")
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    /// `y = A* x`.
    pub fn apply_adjoint(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(x.len(), self.rows);
        let mut y = vec![Complex::new(T::zero(), T::zero()); self.cols];
        for (r, &xr) in x.iter().enumerate() {
            for (yc, &a) in y.iter_mut().zip(self.row(r)) {
                *yc = *yc + a.conj() * xr;
            }
        }
        y
    }

    pub fn frobenius_norm_sq(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> Option<T> {
        if self.shape() != other.shape() {
            return None;
        }
        Some(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| (*a - *b).norm())
                .fold(T::zero(), T::max),
        )
    }

    /// Largest `|a_ij - conj(a_ji)|`; `None` for non-square input.
    pub fn hermitian_defect(&self) -> Option<T> {
        if self.rows != self.cols {
            return None;
        }
        let mut worst = T::zero();
        for r in 0..self.rows {
            for c in r..self.cols {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        Some(worst)
    }

    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.rows)?;
        let mut data = Vec::with_capacity(self.data.len());
        for &r in perm {
            data.extend_from_slice(self.row(r));
        }
        Self::from_vec(self.rows, self.cols, data)
    }

    pub fn permute_cols(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.cols)?;
        Self::from_fn(self.rows, self.cols, |r, c| self.get(r, perm[c]))
    }

    /// Converts entry-wise to another scalar precision.
    pub fn cast<U: Scalar>(&self) -> ComplexDense<U> {
        ComplexDense {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy())))
                .collect(),
        }
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidInput(format!(
            "permutation has length {}, expected {n}",
            perm.len()
        )));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidInput(format!("invalid permutation entry {p}")));
        }
        seen[p] = true;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn rejects_non_finite_and_empty() {
        let err = ComplexDense::from_vec(1, 2, vec![c(1.0, 0.0), c(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 0, col: 1 });
        assert!(ComplexDense::<f64>::from_vec(0, 1, vec![]).is_err());
        assert!(ComplexDense::<f64>::from_vec(2, 2, vec![c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn gram_of_hadamard() {
        let h = ComplexDense::from_vec(2, 2, vec![c(1., 0.), c(1., 0.), c(1., 0.), c(-1., 0.)])
            .unwrap();
        let g = h.gram();
        let two = ComplexDense::from_vec(2, 2, vec![c(2., 0.), c(0., 0.), c(0., 0.), c(2., 0.)])
            .unwrap();
        assert!(g.max_abs_diff(&two).unwrap() < 1e-15);
        assert_eq!(g.hermitian_defect(), Some(0.0));
    }

    #[test]
    fn adjoint_application_matches_explicit() {
        let a = ComplexDense::from_fn(3, 2, |r, k| c(r as f64, k as f64 + 1.0)).unwrap();
        let x = vec![c(1.0, -1.0), c(0.5, 2.0), c(-3.0, 0.0)];
        let y1 = a.apply_adjoint(&x);
        let y2 = a.conj_transpose().apply(&x);
        for (u, v) in y1.iter().zip(&y2) {
            assert!((u - v).norm() < 1e-14);
        }
    }
}
