use num_complex::Complex;

use crate::scalar::Scalar;

#[inline]
pub(crate) fn czero<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// `x^H y`
#[inline]
pub(crate) fn dotc<T: Scalar>(x: &[Complex<T>], y: &[Complex<T>]) -> Complex<T> {
    x.iter()
        .zip(y)
        .fold(czero(), |acc, (a, b)| acc + a.conj() * b)
}

#[inline]
pub(crate) fn norm<T: Scalar>(x: &[Complex<T>]) -> T {
    // scaled to avoid overflow on large entries
    let scale = x.iter().fold(T::zero(), |m, z| m.max(z.re.abs()).max(z.im.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    let s: T = x.iter().map(|z| (*z / scale).norm_sqr()).sum();
    scale * s.sqrt()
}

/// `y -= a x`
#[inline]
pub(crate) fn axpy_neg<T: Scalar>(a: Complex<T>, x: &[Complex<T>], y: &mut [Complex<T>]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = *yi - a * xi;
    }
}

#[inline]
pub(crate) fn scale_in_place<T: Scalar>(s: T, x: &mut [Complex<T>]) {
    for z in x {
        *z = *z * s;
    }
}

/// Unit-modulus phase of `z`, `1` for `z = 0`.
#[inline]
pub(crate) fn phase<T: Scalar>(z: Complex<T>) -> Complex<T> {
    let r = z.norm();
    if r == T::zero() {
        Complex::new(T::one(), T::zero())
    } else {
        z / r
    }
}
