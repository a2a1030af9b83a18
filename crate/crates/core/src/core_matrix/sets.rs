use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{frac, Scalar};

/// Finite frequency set `Ω ⊂ R^d`, integer when unperturbed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencySet<T> {
    dim: usize,
    points: Vec<Vec<T>>,
    integer_flag: bool,
}

impl<T: Scalar> FrequencySet<T> {
    pub fn new(points: Vec<Vec<T>>) -> Result<Self> {
        let dim = check_points(&points, "frequency")?;
        if let Some((i, j)) = first_duplicate(&points) {
            return Err(Error::InvalidInput(format!(
                "frequency points {i} and {j} coincide"
            )));
        }
        let integer_flag = points
            .iter()
            .all(|p| p.iter().all(|&x| x == x.round()));
        Ok(Self {
            dim,
            points,
            integer_flag,
        })
    }

    pub fn from_integers(points: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(
            points
                .into_iter()
                .map(|p| p.into_iter().map(T::from_i64_lossy).collect())
                .collect(),
        )
    }

    /// One-dimensional convenience constructor.
    pub fn from_scalars(values: &[T]) -> Result<Self> {
        Self::new(values.iter().map(|&x| vec![x]).collect())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn is_integer(&self) -> bool {
        self.integer_flag
    }

    #[inline]
    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    /// Integer coordinates, if every component is integral.
    pub fn integer_points(&self) -> Option<Vec<Vec<i64>>> {
        if !self.integer_flag {
            return None;
        }
        self.points
            .iter()
            .map(|p| p.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>())
            .collect()
    }
}

/// Finite node set `U ⊂ T^d`, every component reduced into `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSet<T> {
    dim: usize,
    points: Vec<Vec<T>>,
}

impl<T: Scalar> NodeSet<T> {
    pub fn new(points: Vec<Vec<T>>) -> Result<Self> {
        let dim = check_points(&points, "node")?;
        let points: Vec<Vec<T>> = points
            .into_iter()
            .map(|p| p.into_iter().map(frac).collect())
            .collect();
        if let Some((i, j)) = first_duplicate(&points) {
            return Err(Error::InvalidInput(format!(
                "nodes {i} and {j} coincide on the torus"
            )));
        }
        Ok(Self { dim, points })
    }

    pub fn from_scalars(values: &[T]) -> Result<Self> {
        Self::new(values.iter().map(|&x| vec![x]).collect())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }
}

fn check_points<T: Scalar>(points: &[Vec<T>], what: &str) -> Result<usize> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidInput(format!("{what} set is empty")))?;
    let dim = first.len();
    if dim == 0 {
        return Err(Error::InvalidInput(format!("{what} points must have dimension >= 1")));
    }
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{what} point {i} has {} components, expected {dim}",
                p.len()
            )));
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!("{what} point {i} is not finite")));
        }
    }
    Ok(dim)
}

fn lex_cmp<T: Scalar>(a: &[T], b: &[T]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).unwrap_or(Ordering::Equal) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

fn first_duplicate<T: Scalar>(points: &[Vec<T>]) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| lex_cmp(&points[i], &points[j]));
    order.windows(2).find_map(|w| {
        (points[w[0]] == points[w[1]]).then(|| (w[0].min(w[1]), w[0].max(w[1])))
    })
}

/// `R(M̄) ∩ Z^d` in lexicographic order, last axis fastest.
pub fn rect_lattice(m: &[usize]) -> Result<Vec<Vec<i64>>> {
    if m.is_empty() {
        return Err(Error::InvalidInput("lattice needs at least one axis".into()));
    }
    if let Some(k) = m.iter().position(|&mk| mk == 0) {
        return Err(Error::InvalidInput(format!("M[{k}] must be >= 1")));
    }
    let total: usize = m.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0i64; m.len()];
    for _ in 0..total {
        out.push(idx.clone());
        for axis in (0..m.len()).rev() {
            idx[axis] += 1;
            if (idx[axis] as usize) < m[axis] {
                break;
            }
            idx[axis] = 0;
        }
    }
    Ok(out)
}

/// Storage mode of a [`PerturbationMap`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PerturbationTable<T> {
    General(BTreeMap<Vec<i64>, Vec<T>>),
    RankOne(Vec<BTreeMap<i64, T>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PerturbationMode {
    General,
    RankOne,
}

/// A perturbation `ε: Z^d → R^d`, either tabulated per multi-index or
/// rank one, `ε(n̄) = (a_1(n_1), …, a_d(n_d))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationMap<T> {
    dim: usize,
    table: PerturbationTable<T>,
    sup_norm: T,
}

impl<T: Scalar> PerturbationMap<T> {
    pub fn general(dim: usize, table: BTreeMap<Vec<i64>, Vec<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("perturbation dimension must be >= 1".into()));
        }
        for (k, v) in &table {
            if k.len() != dim || v.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "perturbation entry {k:?} does not have {dim} components"
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!("perturbation at {k:?} is not finite")));
            }
        }
        let table = PerturbationTable::General(table);
        let sup_norm = sup_of(&table);
        Ok(Self {
            dim,
            table,
            sup_norm,
        })
    }

    pub fn rank_one(axis_tables: Vec<BTreeMap<i64, T>>) -> Result<Self> {
        if axis_tables.is_empty() {
            return Err(Error::InvalidInput("rank-one perturbation needs >= 1 axis".into()));
        }
        if axis_tables
            .iter()
            .any(|t| t.values().any(|x| !x.is_finite()))
        {
            return Err(Error::InvalidInput("rank-one perturbation is not finite".into()));
        }
        let dim = axis_tables.len();
        let table = PerturbationTable::RankOne(axis_tables);
        let sup_norm = sup_of(&table);
        Ok(Self {
            dim,
            table,
            sup_norm,
        })
    }

    /// Rank-one map with the given per-axis value lists on `0..M_k`.
    pub fn rank_one_from_axes(axes: &[Vec<T>]) -> Result<Self> {
        Self::rank_one(
            axes.iter()
                .map(|vals| {
                    vals.iter()
                        .enumerate()
                        .map(|(i, &v)| (i as i64, v))
                        .collect()
                })
                .collect(),
        )
    }

    /// Identically zero rank-one map over `R(M̄) ∩ Z^d`.
    pub fn zero(m: &[usize]) -> Result<Self> {
        Self::rank_one_from_axes(
            &m.iter().map(|&mk| vec![T::zero(); mk]).collect::<Vec<_>>(),
        )
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn sup_norm(&self) -> T {
        self.sup_norm
    }

    pub fn mode(&self) -> PerturbationMode {
        match self.table {
            PerturbationTable::General(_) => PerturbationMode::General,
            PerturbationTable::RankOne(_) => PerturbationMode::RankOne,
        }
    }

    #[inline]
    pub fn is_rank_one(&self) -> bool {
        self.mode() == PerturbationMode::RankOne
    }

    pub fn table(&self) -> &PerturbationTable<T> {
        &self.table
    }

    /// Recomputes the sup norm from the stored components.
    pub fn recompute_sup_norm(&self) -> T {
        sup_of(&self.table)
    }

    /// Value at a multi-index; `None` outside the tabulated domain.
    pub fn eval(&self, index: &[i64]) -> Option<Vec<T>> {
        if index.len() != self.dim {
            return None;
        }
        match &self.table {
            PerturbationTable::General(t) => t.get(index).cloned(),
            PerturbationTable::RankOne(axes) => axes
                .iter()
                .zip(index)
                .map(|(tab, n)| tab.get(n).copied())
                .collect(),
        }
    }

    /// Per-axis value at index `n` (rank-one maps only).
    pub fn axis_value(&self, axis: usize, n: i64) -> Option<T> {
        match &self.table {
            PerturbationTable::RankOne(axes) => axes.get(axis)?.get(&n).copied(),
            PerturbationTable::General(_) => None,
        }
    }
}

fn sup_of<T: Scalar>(table: &PerturbationTable<T>) -> T {
    match table {
        PerturbationTable::General(t) => t
            .values()
            .flat_map(|v| v.iter())
            .fold(T::zero(), |m, x| m.max(x.abs())),
        PerturbationTable::RankOne(axes) => axes
            .iter()
            .flat_map(|t| t.values())
            .fold(T::zero(), |m, x| m.max(x.abs())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_components_canonicalized() {
        let u = NodeSet::new(vec![vec![-0.25_f64, 1.5]]).unwrap();
        assert_eq!(u.points()[0], vec![0.75, 0.5]);
    }

    #[test]
    fn torus_duplicates_rejected() {
        assert!(NodeSet::from_scalars(&[0.25_f64, 1.25]).is_err());
        assert!(FrequencySet::from_scalars(&[1.0_f64, 1.0]).is_err());
    }

    #[test]
    fn integer_flag_detection() {
        assert!(FrequencySet::from_scalars(&[0.0_f64, 3.0]).unwrap().is_integer());
        assert!(!FrequencySet::from_scalars(&[0.0_f64, 3.1]).unwrap().is_integer());
        assert!(FrequencySet::<f64>::new(vec![vec![0.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn lattice_order() {
        assert_eq!(rect_lattice(&[2, 2]).unwrap(), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(rect_lattice(&[3, 1]).unwrap(), vec![vec![0, 0], vec![1, 0], vec![2, 0]]);
    }

    #[test]
    fn rank_one_assembles_axes() {
        let eps = PerturbationMap::rank_one_from_axes(&[vec![0.1_f64, -0.2], vec![0.05, 0.0, -0.15]])
            .unwrap();
        assert_eq!(eps.eval(&[1, 2]), Some(vec![-0.2, -0.15]));
        assert_eq!(eps.eval(&[2, 0]), None);
        assert_eq!(eps.sup_norm(), 0.2);
        assert_eq!(eps.sup_norm(), eps.recompute_sup_norm());
    }

    #[test]
    fn general_sup_norm() {
        let mut t = BTreeMap::new();
        t.insert(vec![0], vec![0.1_f64]);
        t.insert(vec![1], vec![-0.3_f64]);
        let eps = PerturbationMap::general(1, t).unwrap();
        assert_eq!(eps.sup_norm(), 0.3);
        assert_eq!(eps.mode(), PerturbationMode::General);
    }
}
