//! Exponential systems `B(Δ)` on unions of integer-translated unit cubes:
//! classification through the associated matrix, the closed-form Gram
//! matrix, explicit invertibility predicates and clump decompositions.

use serde::{Deserialize, Serialize};

use crate::core_matrix::{build_gamma, rect_lattice, ComplexDense, FrequencySet, NodeSet, PerturbationMap};
use crate::error::{Error, Result};
use crate::scalar::{dist_to_integer, frac, unit_phase, Scalar};
use crate::spectral::{numeric_rank, svd_values};

/// Integer-distance margin below which a number counts as an integer in
/// the "∉ Z" predicates.
pub const INTEGER_TOL: f64 = 1e-12;

/// Shifts `Δ` (torus points) and cube offsets `P` (distinct integer
/// vectors) of one exponential system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ExponentialSystemSpec<T> {
    deltas: NodeSet<T>,
    p: FrequencySet<T>,
}

impl<T: Scalar> ExponentialSystemSpec<T> {
    pub fn new(deltas: NodeSet<T>, p: FrequencySet<T>) -> Result<Self> {
        if deltas.dim() != p.dim() {
            return Err(Error::DimensionMismatch(format!(
                "Δ has dimension {}, P has dimension {}",
                deltas.dim(),
                p.dim()
            )));
        }
        if !p.is_integer() {
            return Err(Error::InvalidInput("cube offsets P must be integer vectors".into()));
        }
        Ok(Self { deltas, p })
    }

    /// One-dimensional convenience constructor.
    pub fn from_scalars(deltas: &[T], p: &[i64]) -> Result<Self> {
        Self::new(
            NodeSet::from_scalars(deltas)?,
            FrequencySet::from_integers(p.iter().map(|&x| vec![x]).collect())?,
        )
    }

    pub fn deltas(&self) -> &NodeSet<T> {
        &self.deltas
    }

    pub fn p(&self) -> &FrequencySet<T> {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    /// Number of shifts `L`.
    pub fn shift_count(&self) -> usize {
        self.deltas.len()
    }

    /// Number of cubes `N`.
    pub fn cube_count(&self) -> usize {
        self.p.len()
    }

    /// The `L × N` matrix `e^{2πi δ_j · p_k}`.
    pub fn associated_matrix(&self) -> Result<ComplexDense<T>> {
        build_gamma(&self.deltas, &self.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SystemKind {
    RieszBasis,
    Frame,
    RieszSequence,
    Degenerate,
}

/// Optimal constants `A = σ_r²`, `B = σ_1²` with `r = min(L, N)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SystemClassification<T> {
    pub kind: SystemKind,
    pub lower_constant: T,
    pub upper_constant: T,
    pub rank: usize,
    pub tol: T,
}

/// `min_n |t - s - n|`.
pub fn wrap_distance<T: Scalar>(t: T, s: T) -> T {
    dist_to_integer(t - s)
}

/// Smallest pairwise wrap distance.
pub fn separation<T: Scalar>(u: &[T]) -> Result<T> {
    if u.len() < 2 {
        return Err(Error::InvalidInput("separation needs at least two points".into()));
    }
    let mut sorted: Vec<T> = u.iter().map(|&x| frac(x)).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite nodes"));
    // on the circle the closest pair is adjacent after sorting
    let mut best = wrap_distance(sorted[0], sorted[sorted.len() - 1]);
    for w in sorted.windows(2) {
        best = best.min(wrap_distance(w[1], w[0]));
    }
    Ok(best)
}

/// `R(M̄) ∩ Z^d` in lexicographic order.
pub fn make_rect_lattice<T: Scalar>(m: &[usize]) -> Result<FrequencySet<T>> {
    FrequencySet::from_integers(rect_lattice(m)?)
}

/// Classifies the system through the rank and extreme singular values of
/// its associated matrix. `tol` is the relative rank tolerance.
pub fn classify_system<T: Scalar>(spec: &ExponentialSystemSpec<T>, tol: T) -> Result<SystemClassification<T>> {
    let gamma = spec.associated_matrix()?;
    let s = svd_values(&gamma)?;
    let rank = numeric_rank(&gamma, tol)?;
    let (l, n) = (spec.shift_count(), spec.cube_count());
    let kind = if l == n && rank == n {
        SystemKind::RieszBasis
    } else if l > n && rank == n {
        SystemKind::Frame
    } else if l < n && rank == l {
        SystemKind::RieszSequence
    } else {
        SystemKind::Degenerate
    };
    Ok(SystemClassification {
        kind,
        lower_constant: s.sigma_min * s.sigma_min,
        upper_constant: s.sigma_max * s.sigma_max,
        rank,
        tol,
    })
}

fn integer_dot<T: Scalar>(x: &[T], q: &[i64]) -> T {
    x.iter().zip(q).fold(T::zero(), |acc, (&a, &b)| acc + a * T::from_i64_lossy(b))
}

/// Outcome of [`special_delta_condition`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaCheck {
    pub holds: bool,
    /// Indices `(k, k')` into `P` of the first pair with `⟨p_k - p_k', δ⟩ ∈ Z`.
    pub witness: Option<(usize, usize)>,
}

/// Whether `⟨p_k - p_k', δ⟩ ∉ Z` for every pair of distinct offsets,
/// i.e. whether the shifts `{0, δ, …, (N-1)δ}` give a Riesz basis.
pub fn special_delta_condition<T: Scalar>(delta: &[T], p: &FrequencySet<T>) -> Result<DeltaCheck> {
    if delta.len() != p.dim() {
        return Err(Error::DimensionMismatch(format!(
            "δ has {} components, P has dimension {}",
            delta.len(),
            p.dim()
        )));
    }
    let pts = p
        .integer_points()
        .ok_or_else(|| Error::InvalidInput("P must consist of integer vectors".into()))?;
    let tol = T::lit(INTEGER_TOL);
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            let diff: Vec<i64> = pts[a].iter().zip(&pts[b]).map(|(x, y)| x - y).collect();
            if dist_to_integer(integer_dot(delta, &diff)) <= tol {
                return Ok(DeltaCheck {
                    holds: false,
                    witness: Some((a, b)),
                });
            }
        }
    }
    Ok(DeltaCheck {
        holds: true,
        witness: None,
    })
}

/// Nodes `{δ · p_k mod 1}` of the Vandermonde matrix that coincides with
/// the associated matrix of shifts `{0, δ, …, (L-1)δ}`.
pub fn special_delta_nodes<T: Scalar>(delta: &[T], p: &FrequencySet<T>) -> Result<Vec<T>> {
    let pts = p
        .integer_points()
        .ok_or_else(|| Error::InvalidInput("P must consist of integer vectors".into()))?;
    if delta.len() != p.dim() {
        return Err(Error::DimensionMismatch("δ and P differ in dimension".into()));
    }
    Ok(pts.iter().map(|q| frac(integer_dot(delta, q))).collect())
}

/// A failing pair of the per-axis predicate. `axis` is 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisWitness {
    pub axis: usize,
    pub i: i64,
    pub j: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorCheck {
    pub holds: bool,
    pub witness: Option<AxisWitness>,
}

/// Whether `(j - i + ε_k(j) - ε_k(i)) / M_k ∉ Z` for every axis `k` and
/// every `i ≠ j` in `0..M_k`. For a rank-one `ε` this decides whether the
/// perturbed DFT is invertible.
pub fn tensor_kadec_condition<T: Scalar>(m: &[usize], eps: &PerturbationMap<T>) -> Result<TensorCheck> {
    if !eps.is_rank_one() {
        return Err(Error::InvalidInput("the predicate requires a rank-one perturbation".into()));
    }
    if eps.dim() != m.len() {
        return Err(Error::DimensionMismatch(format!(
            "ε has dimension {}, M has {} axes",
            eps.dim(),
            m.len()
        )));
    }
    let tol = T::lit(INTEGER_TOL);
    for (axis, &mk) in m.iter().enumerate() {
        let value = |n: i64| {
            eps.axis_value(axis, n)
                .ok_or_else(|| Error::InvalidInput(format!("ε is undefined at index {n} on axis {axis}")))
        };
        for i in 0..mk as i64 {
            for j in i + 1..mk as i64 {
                let x = (T::from_i64_lossy(j - i) + value(j)? - value(i)?) / T::from_usize_lossy(mk);
                if dist_to_integer(x) <= tol {
                    return Ok(TensorCheck {
                        holds: false,
                        witness: Some(AxisWitness { axis, i, j }),
                    });
                }
            }
        }
    }
    Ok(TensorCheck {
        holds: true,
        witness: None,
    })
}

/// `N × N` Hermitian Gram matrix with entries `Σ_j e^{2πi δ_j·(p_k' - p_k)}`,
/// summed directly rather than formed as `Γ^H Γ`.
pub fn gram_matrix<T: Scalar>(spec: &ExponentialSystemSpec<T>) -> Result<ComplexDense<T>> {
    let pts = spec
        .p()
        .integer_points()
        .ok_or_else(|| Error::InvalidInput("P must consist of integer vectors".into()))?;
    let deltas = spec.deltas().points();
    let n = pts.len();
    ComplexDense::from_fn(n, n, |k, kp| {
        if k == kp {
            return num_complex::Complex::new(T::from_usize_lossy(deltas.len()), T::zero());
        }
        let diff: Vec<i64> = pts[kp].iter().zip(&pts[k]).map(|(a, b)| a - b).collect();
        deltas
            .iter()
            .map(|d| unit_phase(integer_dot(d, &diff)))
            .fold(num_complex::Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
    })
}

/// Partition of a one-dimensional node set into clumps, with the
/// quantities the clumped-node bound depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ClumpDecomposition<T> {
    /// Indices into the input node list, one list per part, in circular
    /// order.
    pub parts: Vec<Vec<usize>>,
    pub r: usize,
    pub lambda_max: usize,
    /// Smallest wrap distance between different parts; `None` for one part.
    pub beta: Option<T>,
    /// Separation of the whole node set; `None` for a single node.
    pub alpha: Option<T>,
    pub max_diameter: T,
    pub hypotheses_ok: bool,
    /// Failed hypotheses, empty when `hypotheses_ok`.
    pub reasons: Vec<String>,
}

fn set_distance<T: Scalar>(u: &[T], a: &[usize], b: &[usize]) -> T {
    let mut best = T::infinity();
    for &i in a {
        for &j in b {
            best = best.min(wrap_distance(u[i], u[j]));
        }
    }
    best
}

fn diameter<T: Scalar>(u: &[T], part: &[usize]) -> T {
    let mut best = T::zero();
    for (x, &i) in part.iter().enumerate() {
        for &j in &part[x + 1..] {
            best = best.max(wrap_distance(u[i], u[j]));
        }
    }
    best
}

fn part_beta<T: Scalar>(u: &[T], parts: &[Vec<usize>]) -> Option<T> {
    let mut beta: Option<T> = None;
    for a in 0..parts.len() {
        for b in a + 1..parts.len() {
            let d = set_distance(u, &parts[a], &parts[b]);
            beta = Some(beta.map_or(d, |x| x.min(d)));
        }
    }
    beta
}

impl<T: Scalar> ClumpDecomposition<T> {
    /// Recomputes `beta` and `alpha` from the parts and compares them with
    /// the stored values.
    pub fn is_consistent(&self, u: &[T]) -> bool {
        let close = |a: Option<T>, b: Option<T>| match (a, b) {
            (Some(x), Some(y)) => (x - y).abs() <= T::lit(1e-14),
            (None, None) => true,
            _ => false,
        };
        let mut seen = vec![false; u.len()];
        for &i in self.parts.iter().flatten() {
            if i >= u.len() || seen[i] {
                return false;
            }
            seen[i] = true;
        }
        seen.iter().all(|&s| s)
            && close(part_beta(u, &self.parts), self.beta)
            && close(separation(u).ok(), self.alpha)
    }
}

/// Circular gap splitting: sort the nodes on the circle and cut at every
/// gap of at least `3 λ / L`, starting from the largest gap. The
/// hypotheses of the clumped-node bound are then checked and reported.
pub fn clump_decompose<T: Scalar>(u: &[T], rows: usize, lambda_cap: usize) -> Result<ClumpDecomposition<T>> {
    if u.is_empty() {
        return Err(Error::InvalidInput("node list is empty".into()));
    }
    if rows == 0 || lambda_cap == 0 {
        return Err(Error::InvalidInput("L and λ must be >= 1".into()));
    }
    let canon: Vec<T> = u.iter().map(|&x| frac(x)).collect();
    let n = canon.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| canon[a].partial_cmp(&canon[b]).expect("finite nodes"));
    // gap[i] runs from order[i] to order[i+1] (wrapping)
    let gaps: Vec<T> = (0..n)
        .map(|i| {
            let next = canon[order[(i + 1) % n]];
            let here = canon[order[i]];
            if i + 1 == n {
                next + T::one() - here
            } else {
                next - here
            }
        })
        .collect();
    let threshold = T::from_usize_lossy(3 * lambda_cap) / T::from_usize_lossy(rows);
    let largest = (0..n)
        .max_by(|&a, &b| gaps[a].partial_cmp(&gaps[b]).expect("finite gaps"))
        .expect("nonempty");
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut current = Vec::new();
    for step in 1..=n {
        let pos = (largest + step) % n;
        current.push(order[pos]);
        if n > 1 && gaps[pos] >= threshold {
            parts.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        parts.push(current);
    }
    if n == 1 {
        parts = vec![vec![0]];
    }

    let r = parts.len();
    let lambda_max = parts.iter().map(Vec::len).max().unwrap_or(0);
    let beta = part_beta(&canon, &parts);
    let alpha = separation(&canon).ok();
    let max_diameter = parts
        .iter()
        .map(|p| diameter(&canon, p))
        .fold(T::zero(), |m, d| m.max(d));
    let mut reasons = Vec::new();
    if lambda_max > lambda_cap {
        reasons.push(format!("largest part has {lambda_max} nodes, more than λ = {lambda_cap}"));
    }
    if let Some(b) = beta {
        if b < threshold {
            reasons.push(format!("β = {b} is below 3λ/L = {threshold}"));
        }
        if max_diameter >= b {
            reasons.push(format!("largest part diameter {max_diameter} is not below β = {b}"));
        }
    }
    Ok(ClumpDecomposition {
        parts,
        r,
        lambda_max,
        beta,
        alpha,
        max_diameter,
        hypotheses_ok: reasons.is_empty(),
        reasons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{default_rank_tol, hermitian_eigenvalues};
    use approx::assert_relative_eq;
    use num_complex::Complex;

    fn spec(d: &[f64], p: &[i64]) -> ExponentialSystemSpec<f64> {
        ExponentialSystemSpec::from_scalars(d, p).unwrap()
    }

    #[test]
    fn wrap_and_separation() {
        assert_relative_eq!(wrap_distance(0.1, 0.9), 0.2, epsilon = 1e-15);
        assert_eq!(wrap_distance(0.25, 0.25), 0.0);
        assert_eq!(wrap_distance(0.0, 0.5), 0.5);
        assert_eq!(separation(&[0.0, 0.5]).unwrap(), 0.5);
        assert_relative_eq!(separation(&[0.1, 0.9, 0.5]).unwrap(), 0.2, epsilon = 1e-15);
        assert_relative_eq!(separation(&[0.0, 1.0 / 3.0, 2.0 / 3.0]).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        assert!(separation(&[0.3]).is_err());
    }

    #[test]
    fn lattices() {
        let a: FrequencySet<f64> = make_rect_lattice(&[2, 2]).unwrap();
        assert_eq!(a.points(), &[vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]);
        let b: FrequencySet<f64> = make_rect_lattice(&[3, 1]).unwrap();
        assert_eq!(b.points(), &[vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]]);
    }

    #[test]
    fn classification_examples() {
        let tol = default_rank_tol::<f64>(3, 3);
        let c = classify_system(&spec(&[0.0, 0.5], &[0, 1]), tol).unwrap();
        assert_eq!(c.kind, SystemKind::RieszBasis);
        assert_relative_eq!(c.lower_constant, 2.0, epsilon = 1e-12);
        assert_relative_eq!(c.upper_constant, 2.0, epsilon = 1e-12);
        let c = classify_system(&spec(&[0.0, 0.5, 0.25], &[0, 1]), tol).unwrap();
        assert_eq!(c.kind, SystemKind::Frame);
        assert_relative_eq!(c.lower_constant, 2.0, epsilon = 1e-12);
        assert_relative_eq!(c.upper_constant, 4.0, epsilon = 1e-12);
        let c = classify_system(&spec(&[0.0, 0.5], &[0, 2]), tol).unwrap();
        assert_eq!((c.kind, c.rank), (SystemKind::Degenerate, 1));
        let c = classify_system(&spec(&[0.1], &[0, 1, 2]), tol).unwrap();
        assert_eq!(c.kind, SystemKind::RieszSequence);
    }

    #[test]
    fn special_delta_examples() {
        let p = FrequencySet::from_scalars(&[0.0, 1.0, 2.0]).unwrap();
        assert!(special_delta_condition(&[1.0 / 3.0], &p).unwrap().holds);
        let p = FrequencySet::from_scalars(&[0.0, 2.0]).unwrap();
        let c = special_delta_condition(&[0.5], &p).unwrap();
        assert_eq!((c.holds, c.witness), (false, Some((0, 1))));
        let p = FrequencySet::from_integers(vec![vec![0, 0], vec![1, 1]]).unwrap();
        assert!(special_delta_condition(&[0.5, 1.0 / 3.0], &p).unwrap().holds);
    }

    #[test]
    fn tensor_examples() {
        let zero = PerturbationMap::rank_one_from_axes(&[vec![0.0; 5], vec![0.0; 3]]).unwrap();
        assert!(tensor_kadec_condition(&[5, 3], &zero).unwrap().holds);
        let e = PerturbationMap::rank_one_from_axes(&[vec![0.0, 0.49]]).unwrap();
        assert!(tensor_kadec_condition(&[2], &e).unwrap().holds);
        let e = PerturbationMap::rank_one_from_axes(&[vec![0.6, -0.4]]).unwrap();
        let c = tensor_kadec_condition(&[2], &e).unwrap();
        assert!(!c.holds);
        assert_eq!(c.witness, Some(AxisWitness { axis: 0, i: 0, j: 1 }));
        let table = [(vec![0_i64], vec![0.0_f64]), (vec![1], vec![0.1])].into_iter().collect();
        let general = PerturbationMap::general(1, table).unwrap();
        assert!(tensor_kadec_condition(&[2], &general).is_err());
    }

    #[test]
    fn gram_examples() {
        let g = gram_matrix(&spec(&[0.0, 0.5], &[0, 1])).unwrap();
        let want = ComplexDense::from_vec(2, 2, vec![Complex::new(2.0, 0.0), Complex::new(0.0, 0.0), Complex::new(0.0, 0.0), Complex::new(2.0, 0.0)]).unwrap();
        assert!(g.max_abs_diff(&want).unwrap() < 1e-15);
        let s = spec(&[0.0, 0.5, 0.25], &[0, 1]);
        let g = gram_matrix(&s).unwrap();
        assert!((g.get(0, 1) - Complex::new(0.0, 1.0)).norm() < 1e-15);
        assert!((g.get(1, 0) - Complex::new(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(g.get(0, 0), Complex::new(3.0, 0.0));
        let gg = s.associated_matrix().unwrap().gram();
        assert!(g.max_abs_diff(&gg).unwrap() < 1e-14);
        let ev = hermitian_eigenvalues(&g).unwrap();
        assert_relative_eq!(ev[0], 4.0, epsilon = 1e-13);
        assert_relative_eq!(ev[1], 2.0, epsilon = 1e-13);
    }

    #[test]
    fn special_delta_nodes_reproduce_gamma() {
        let p = FrequencySet::from_scalars(&[0.0, 3.0, 7.0]).unwrap();
        let delta = 0.1234;
        let x = special_delta_nodes(&[delta], &p).unwrap();
        let v = crate::core_matrix::build_vandermonde(4, &x).unwrap().matrix;
        let shifts: Vec<f64> = (0..4).map(|j| j as f64 * delta).collect();
        let g = ExponentialSystemSpec::new(NodeSet::from_scalars(&shifts).unwrap(), p)
            .unwrap()
            .associated_matrix()
            .unwrap();
        assert!(v.max_abs_diff(&g).unwrap() < 1e-13);
    }

    #[test]
    fn clump_examples() {
        let c = clump_decompose(&[0.0, 0.5], 60, 1).unwrap();
        assert_eq!(c.r, 2);
        assert_eq!(c.beta, Some(0.5));
        assert!(c.hypotheses_ok);
        let u: Vec<f64> = (0..8).map(|k| k as f64 / 8.0).collect();
        let c = clump_decompose(&u, 64, 1).unwrap();
        assert_eq!((c.r, c.lambda_max), (8, 1));
        assert!(c.hypotheses_ok && c.is_consistent(&u));
        let u = [0.0, 0.001, 0.5];
        let c = clump_decompose(&u, 100, 2).unwrap();
        let mut parts = c.parts.clone();
        for p in &mut parts {
            p.sort();
        }
        parts.sort();
        assert_eq!(parts, vec![vec![0, 1], vec![2]]);
        assert!(c.hypotheses_ok && c.is_consistent(&u));
        let c = clump_decompose(&u, 100, 1).unwrap();
        assert!(!c.hypotheses_ok);
    }

    #[test]
    fn clump_cluster_straddling_zero() {
        let u = [0.999, 0.001, 0.5];
        let c = clump_decompose(&u, 100, 2).unwrap();
        assert_eq!(c.r, 2);
        assert!(c.parts.iter().any(|p| p.len() == 2 && p.contains(&0) && p.contains(&1)));
        assert!(c.hypotheses_ok);
    }
}
