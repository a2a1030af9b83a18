use super::dense::ComplexDense;
use super::sets::{rect_lattice, FrequencySet, NodeSet, PerturbationMap};
use crate::error::{Error, Result};
use crate::scalar::{dist_to_integer, frac, unit_phase, Scalar};

/// Reduced phase of `ω·u` with the integer part of every `ω_k` split off
/// before multiplying, so large integer frequencies lose no accuracy
/// beyond the representation of `u`.
fn reduced_dot<T: Scalar>(omega: &[T], u: &[T]) -> T {
    let mut phase = T::zero();
    for (&w, &x) in omega.iter().zip(u) {
        let whole = w.round();
        phase = phase + frac(whole * x) + (w - whole) * x;
    }
    phase
}

/// Generalized Fourier matrix `F(Ω, U)`: entry `(j, k) = e^{2πi ω_j·u_k}`.
///
/// Rows follow the order of `freqs`, columns the order of `nodes`.
/// Frequencies need not be integers.
pub fn build_fourier<T: Scalar>(
    freqs: &FrequencySet<T>,
    nodes: &NodeSet<T>,
) -> Result<ComplexDense<T>> {
    if freqs.dim() != nodes.dim() {
        return Err(Error::DimensionMismatch(format!(
            "frequencies live in R^{} but nodes in T^{}",
            freqs.dim(),
            nodes.dim()
        )));
    }
    let (w, u) = (freqs.points(), nodes.points());
    ComplexDense::from_fn(w.len(), u.len(), |j, k| unit_phase(reduced_dot(&w[j], &u[k])))
}

/// Associated matrix `Γ(Δ, P)`: entry `(j, k) = e^{2πi δ_j·p_k}`, rows
/// indexed by `Δ` and columns by `P`.
///
/// This is the transpose of `build_fourier(P, Δ)`.
pub fn build_gamma<T: Scalar>(deltas: &NodeSet<T>, p: &FrequencySet<T>) -> Result<ComplexDense<T>> {
    if !p.is_integer() {
        return Err(Error::InvalidInput(
            "P must consist of integer vectors".into(),
        ));
    }
    if deltas.dim() != p.dim() {
        return Err(Error::DimensionMismatch(format!(
            "Δ lives in T^{} but P in Z^{}",
            deltas.dim(),
            p.dim()
        )));
    }
    let (dl, pk) = (deltas.points(), p.points());
    ComplexDense::from_fn(dl.len(), pk.len(), |j, k| unit_phase(reduced_dot(&pk[k], &dl[j])))
}

/// Vandermonde matrix together with construction warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct Vandermonde<T> {
    pub matrix: ComplexDense<T>,
    pub warnings: Vec<String>,
}

/// `V(L, X)`: entry `(j, k) = e^{2πi j x_k}` for `j = 0..L-1`.
///
/// Nodes that coincide modulo one are kept (the matrix is then rank
/// deficient) and reported in `warnings`.
pub fn build_vandermonde<T: Scalar>(rows: usize, nodes: &[T]) -> Result<Vandermonde<T>> {
    if rows == 0 {
        return Err(Error::InvalidInput("L must be >= 1".into()));
    }
    if nodes.is_empty() {
        return Err(Error::InvalidInput("at least one node is required".into()));
    }
    if let Some(i) = nodes.iter().position(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!("node {i} is not finite")));
    }
    let reduced: Vec<T> = nodes.iter().map(|&x| frac(x)).collect();
    let mut warnings = Vec::new();
    for a in 0..reduced.len() {
        for b in a + 1..reduced.len() {
            // reduction mod 1 may leave a few ulps of noise
            if dist_to_integer(reduced[a] - reduced[b]) <= T::lit(16.0) * T::epsilon() {
                warnings.push(format!(
                    "nodes {a} and {b} coincide modulo 1; the matrix is rank deficient"
                ));
            }
        }
    }
    let matrix = ComplexDense::from_fn(rows, reduced.len(), |j, k| {
        unit_phase(frac(T::from_usize_lossy(j) * reduced[k]))
    })?;
    Ok(Vandermonde { matrix, warnings })
}

/// Phase `(j_k · k_k mod M_k) / M_k` summed over axes, computed exactly in
/// integer arithmetic before the single rounding to `T`.
fn lattice_phase<T: Scalar>(m: &[usize], row: &[i64], col: &[i64]) -> T {
    let mut phase = T::zero();
    for ((&mk, &j), &k) in m.iter().zip(row).zip(col) {
        let mk_i = mk as i64;
        let num = (j * k).rem_euclid(mk_i);
        phase = phase + T::from_i64_lossy(num) / T::from_usize_lossy(mk);
    }
    phase
}

/// Unnormalized multivariate DFT matrix of size `ΠM × ΠM`.
///
/// Rows are the frequencies `R(M̄) ∩ Z^d`, columns the nodes `k̄ / M̄`, both
/// enumerated lexicographically.
pub fn build_dft<T: Scalar>(m: &[usize]) -> Result<ComplexDense<T>> {
    let lattice = rect_lattice(m)?;
    let n = lattice.len();
    ComplexDense::from_fn(n, n, |j, k| unit_phase(lattice_phase::<T>(m, &lattice[j], &lattice[k])))
}

/// Maps each node of `subset` to its lattice multi-index in `M̄^{-1} Ω`.
fn lattice_indices<T: Scalar>(m: &[usize], subset: &NodeSet<T>) -> Result<Vec<Vec<i64>>> {
    if subset.dim() != m.len() {
        return Err(Error::DimensionMismatch(format!(
            "node subset lives in T^{} but M has {} axes",
            subset.dim(),
            m.len()
        )));
    }
    let tol = T::lit(1e-9);
    subset
        .points()
        .iter()
        .enumerate()
        .map(|(i, u)| {
            u.iter()
                .zip(m)
                .map(|(&x, &mk)| {
                    let scaled = x * T::from_usize_lossy(mk);
                    let k = scaled.round();
                    if (scaled - k).abs() > tol {
                        Err(Error::InvalidInput(format!(
                            "node {i} is not on the lattice M^-1 Ω"
                        )))
                    } else {
                        Ok(k.to_i64().unwrap_or(0).rem_euclid(mk as i64))
                    }
                })
                .collect()
        })
        .collect()
}

/// `F(Ω′, U)` with `Ω′ = { j̄ + ε(j̄) : j̄ ∈ R(M̄) ∩ Z^d }` and `U` a subset of
/// the lattice `M̄^{-1} Ω` (all of it when `node_subset` is `None`).
pub fn build_perturbed_dft_freq<T: Scalar>(
    m: &[usize],
    eps: &PerturbationMap<T>,
    node_subset: Option<&NodeSet<T>>,
) -> Result<ComplexDense<T>> {
    let omega = rect_lattice(m)?;
    if eps.dim() != m.len() {
        return Err(Error::DimensionMismatch(format!(
            "perturbation has {} components but M has {} axes",
            eps.dim(),
            m.len()
        )));
    }
    let shifts: Vec<Vec<T>> = omega
        .iter()
        .map(|j| {
            eps.eval(j).ok_or_else(|| {
                Error::InvalidInput(format!("perturbation undefined at multi-index {j:?}"))
            })
        })
        .collect::<Result<_>>()?;
    let cols = match node_subset {
        Some(u) => lattice_indices(m, u)?,
        None => omega.clone(),
    };
    ComplexDense::from_fn(omega.len(), cols.len(), |r, c| {
        let mut phase = lattice_phase::<T>(m, &omega[r], &cols[c]);
        for ((&e, &k), &mk) in shifts[r].iter().zip(&cols[c]).zip(m) {
            phase = phase + e * T::from_i64_lossy(k) / T::from_usize_lossy(mk);
        }
        unit_phase(phase)
    })
}

fn require_odd(n: usize) -> Result<()> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "N must be an odd integer >= 3, got {n}"
        )));
    }
    Ok(())
}

/// Leading `n x n` block of the `(n+1) x (n+1)` DFT matrix (`n` odd).
pub fn build_instability_submatrix<T: Scalar>(n: usize) -> Result<ComplexDense<T>> {
    require_odd(n)?;
    let big = (n + 1) as i64;
    ComplexDense::from_fn(n, n, |j, k| {
        let num = (j as i64 * k as i64).rem_euclid(big);
        unit_phase(T::from_i64_lossy(num) / T::from_i64_lossy(big))
    })
}

/// `N`-periodic truncation of `ε(k) = -¼ sign(k)` on `{-m..m}`, listed
/// for `k = 0..N-1`.
pub fn figure1_perturbation<T: Scalar>(n: usize) -> Result<Vec<T>> {
    require_odd(n)?;
    let m = (n - 1) / 2;
    let quarter = T::lit(0.25);
    Ok((0..n)
        .map(|k| match k {
            0 => T::zero(),
            k if k <= m => -quarter,
            _ => quarter,
        })
        .collect())
}

/// `F′_N`: entry `(j, k) = e^{2πi j (k + ε_N(k)) / N}`, `0 ≤ j, k < N`.
pub fn build_figure1<T: Scalar>(n: usize) -> Result<ComplexDense<T>> {
    let eps = figure1_perturbation::<T>(n)?;
    let nn = n as i64;
    let n_t = T::from_usize_lossy(n);
    ComplexDense::from_fn(n, n, |j, k| {
        let exact = T::from_i64_lossy((j as i64 * k as i64).rem_euclid(nn)) / n_t;
        unit_phase(exact + T::from_usize_lossy(j) * eps[k] / n_t)
    })
}

/// Column submatrix preserving the order of `idx`.
pub fn select_columns<T: Scalar>(a: &ComplexDense<T>, idx: &[usize]) -> Result<ComplexDense<T>> {
    if idx.is_empty() {
        return Err(Error::InvalidInput("column selection is empty".into()));
    }
    let mut seen = vec![false; a.cols()];
    for &c in idx {
        if c >= a.cols() {
            return Err(Error::InvalidInput(format!(
                "column index {c} out of range for {} columns",
                a.cols()
            )));
        }
        if seen[c] {
            return Err(Error::InvalidInput(format!("column index {c} repeated")));
        }
        seen[c] = true;
    }
    ComplexDense::from_fn(a.rows(), idx.len(), |r, c| a.get(r, idx[c]))
}


#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn close(a: Complex<f64>, re: f64, im: f64) -> bool {
        (a.re - re).abs() < 1e-14 && (a.im - im).abs() < 1e-14
    }

    #[test]
    fn zero_frequency_gives_ones() {
        let f = build_fourier(
            &FrequencySet::from_scalars(&[0.0]).unwrap(),
            &NodeSet::from_scalars(&[0.5]).unwrap(),
        )
        .unwrap();
        assert!(close(f.get(0, 0), 1.0, 0.0));
    }

    #[test]
    fn four_point_dft_entries_are_powers_of_i() {
        let f = build_fourier(
            &FrequencySet::from_scalars(&[0.0, 1.0, 2.0, 3.0]).unwrap(),
            &NodeSet::from_scalars(&[0.0, 0.25, 0.5, 0.75]).unwrap(),
        )
        .unwrap();
        let powers = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for j in 0..4 {
            for k in 0..4 {
                let (re, im) = powers[(j * k) % 4];
                assert!(close(f.get(j, k), re, im), "entry ({j},{k})");
            }
        }
        let dft = build_dft::<f64>(&[4]).unwrap();
        assert!(dft.max_abs_diff(&f).unwrap() < 1e-14);
    }

    #[test]
    fn fourier_third_node_column() {
        let f = build_fourier(
            &FrequencySet::from_scalars(&[0.0, 1.0]).unwrap(),
            &NodeSet::from_scalars(&[1.0 / 3.0]).unwrap(),
        )
        .unwrap();
        let t = 2.0 * std::f64::consts::PI / 3.0;
        assert!(close(f.get(1, 0), t.cos(), t.sin()));
    }

    #[test]
    fn fourier_dimension_mismatch() {
        let err = build_fourier(
            &FrequencySet::<f64>::new(vec![vec![0.0, 1.0]]).unwrap(),
            &NodeSet::from_scalars(&[0.5]).unwrap(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }

    #[test]
    fn gamma_examples() {
        let p = FrequencySet::from_scalars(&[0.0, 1.0]).unwrap();
        let g = build_gamma(&NodeSet::from_scalars(&[0.0, 0.5, 0.25]).unwrap(), &p).unwrap();
        assert_eq!(g.shape(), (3, 2));
        assert!(close(g.get(1, 1), -1.0, 0.0));
        assert!(close(g.get(2, 1), 0.0, 1.0));
        assert!(close(g.get(2, 0), 1.0, 0.0));
        let non_int = FrequencySet::from_scalars(&[0.0, 0.5]).unwrap();
        assert!(build_gamma(&NodeSet::from_scalars(&[0.0]).unwrap(), &non_int).is_err());
    }

    #[test]
    fn gamma_of_scaled_lattice_is_dft() {
        let m = 4;
        let deltas: Vec<f64> = (0..m).map(|j| j as f64 / m as f64).collect();
        let p: Vec<f64> = (0..m).map(|k| k as f64).collect();
        let g = build_gamma(
            &NodeSet::from_scalars(&deltas).unwrap(),
            &FrequencySet::from_scalars(&p).unwrap(),
        )
        .unwrap();
        assert!(g.max_abs_diff(&build_dft(&[4]).unwrap()).unwrap() < 1e-14);
    }

    #[test]
    fn vandermonde_examples() {
        let v = build_vandermonde(2, &[0.0_f64, 0.5]).unwrap();
        assert!(v.warnings.is_empty());
        assert!(close(v.matrix.get(1, 1), -1.0, 0.0));
        let v1 = build_vandermonde(1, &[0.1_f64, 0.7, 0.3]).unwrap();
        assert!(v1.matrix.data().iter().all(|z| close(*z, 1.0, 0.0)));
        let dup = build_vandermonde(3, &[0.2_f64, 1.2]).unwrap();
        assert_eq!(dup.warnings.len(), 1);
    }

    #[test]
    fn perturbed_freq_matches_direct_evaluation() {
        let eps = PerturbationMap::rank_one_from_axes(&[vec![0.1_f64, -0.1]]).unwrap();
        let f = build_perturbed_dft_freq(&[2], &eps, None).unwrap();
        // Ω′ = {0.1, 0.9}, U = {0, 1/2}
        for (r, w) in [0.1_f64, 0.9].iter().enumerate() {
            for (c, u) in [0.0_f64, 0.5].iter().enumerate() {
                let t = 2.0 * std::f64::consts::PI * w * u;
                assert!(close(f.get(r, c), t.cos(), t.sin()));
            }
        }
    }

    #[test]
    fn perturbed_freq_subset_and_lattice_check() {
        let zero = PerturbationMap::<f64>::zero(&[3]).unwrap();
        let sub = NodeSet::from_scalars(&[0.0, 1.0 / 3.0]).unwrap();
        let f = build_perturbed_dft_freq(&[3], &zero, Some(&sub)).unwrap();
        let dft = build_dft::<f64>(&[3]).unwrap();
        assert!(f.max_abs_diff(&select_columns(&dft, &[0, 1]).unwrap()).unwrap() < 1e-14);
        let off = NodeSet::from_scalars(&[0.1]).unwrap();
        assert!(build_perturbed_dft_freq(&[3], &zero, Some(&off)).is_err());
    }

    #[test]
    fn instability_three() {
        let a = build_instability_submatrix::<f64>(3).unwrap();
        let expect = [
            [(1., 0.), (1., 0.), (1., 0.)],
            [(1., 0.), (0., 1.), (-1., 0.)],
            [(1., 0.), (-1., 0.), (1., 0.)],
        ];
        for j in 0..3 {
            for k in 0..3 {
                assert!(close(a.get(j, k), expect[j][k].0, expect[j][k].1));
            }
        }
        assert!(build_instability_submatrix::<f64>(4).is_err());
    }

    #[test]
    fn figure1_construction() {
        assert_eq!(figure1_perturbation::<f64>(3).unwrap(), vec![0.0, -0.25, 0.25]);
        let f = build_figure1::<f64>(5).unwrap();
        let t = 2.0 * std::f64::consts::PI * 0.75 / 5.0;
        assert!(close(f.get(1, 1), t.cos(), t.sin()));
        assert!((0..5).all(|k| close(f.get(0, k), 1.0, 0.0)));
        assert!(build_figure1::<f64>(6).is_err());
    }

    #[test]
    fn select_columns_shapes_and_errors() {
        let id = ComplexDense::<f64>::identity(3).unwrap();
        let s = select_columns(&id, &[0, 2]).unwrap();
        assert_eq!(s.shape(), (3, 2));
        assert!(close(s.get(2, 1), 1.0, 0.0));
        assert!(select_columns(&id, &[3]).is_err());
        let dft = build_dft::<f64>(&[4]).unwrap();
        assert_eq!(select_columns(&dft, &[0, 1, 2]).unwrap().shape(), (4, 3));
    }
}
