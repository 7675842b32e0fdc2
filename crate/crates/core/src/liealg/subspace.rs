use num_traits::Zero;

use super::algebra::{AlgVector, Algebra};
use super::linalg::{column_kernel, rref};
use super::poly::Q;

/// A linear subspace of the truncated algebra in canonical reduced row
/// echelon form, so equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
    ambient: usize,
}

impl Subspace {
    pub fn from_coords(ambient: usize, mut rows: Vec<Vec<Q>>) -> Self {
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        let pivots = rref(&mut rows);
        Self { rows, pivots, ambient }
    }

    pub fn span(alg: &Algebra, vecs: &[AlgVector]) -> Self {
        Self::from_coords(alg.dim(), vecs.iter().map(|v| alg.coords(v)).collect())
    }

    pub fn zero(alg: &Algebra) -> Self {
        Self::from_coords(alg.dim(), Vec::new())
    }

    pub fn full(alg: &Algebra) -> Self {
        Self::span(alg, &alg.basis())
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self, alg: &Algebra) -> Vec<AlgVector> {
        self.rows.iter().map(|r| alg.from_coords(r)).collect()
    }

    /// Rows spanning the annihilator: `x ∈ self ⇔ n·x = 0` for every row `n`.
    fn annihilator(&self) -> Vec<Vec<Q>> {
        let cols: Vec<Vec<Q>> = (0..self.ambient).map(|j| self.rows.iter().map(|r| r[j].clone()).collect()).collect();
        if self.rows.is_empty() {
            return (0..self.ambient)
                .map(|i| (0..self.ambient).map(|j| if i == j { Q::from_integer(1.into()) } else { Q::zero() }).collect())
                .collect();
        }
        column_kernel(&cols)
    }

    pub fn contains_coords(&self, x: &[Q]) -> bool {
        let mut rows = self.rows.clone();
        rows.push(x.to_vec());
        Subspace::from_coords(self.ambient, rows).dim() == self.dim()
    }

    pub fn contains(&self, alg: &Algebra, v: &AlgVector) -> bool {
        self.contains_coords(&alg.coords(v))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains_coords(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        Subspace::from_coords(self.ambient, rows)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let ann = other.annihilator();
        let cols: Vec<Vec<Q>> = self.rows.iter().map(|r| apply(&ann, r)).collect();
        self.combine(&column_kernel(&cols))
    }

    /// Elements of `self` with no component of polynomial degree above
    /// `max_degree`.
    pub fn restrict_degree(&self, alg: &Algebra, max_degree: usize) -> Subspace {
        let high: Vec<usize> =
            (0..self.ambient).filter(|&i| alg.coordinate_degree(i).is_some_and(|d| d > max_degree)).collect();
        let cols: Vec<Vec<Q>> = self.rows.iter().map(|r| high.iter().map(|&i| r[i].clone()).collect()).collect();
        if high.is_empty() {
            return self.clone();
        }
        self.combine(&column_kernel(&cols))
    }

    fn combine(&self, coefficient_sets: &[Vec<Q>]) -> Subspace {
        let rows = coefficient_sets
            .iter()
            .map(|c| {
                let mut v = vec![Q::zero(); self.ambient];
                for (ci, r) in c.iter().zip(&self.rows) {
                    if !ci.is_zero() {
                        for (x, y) in v.iter_mut().zip(r) {
                            *x += ci * y;
                        }
                    }
                }
                v
            })
            .collect();
        Subspace::from_coords(self.ambient, rows)
    }

    /// Human-readable generators.
    pub fn describe(&self, alg: &Algebra) -> Vec<String> {
        self.basis(alg).iter().map(|v| v.to_string()).collect()
    }
}

fn apply(rows: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
    rows.iter()
        .map(|r| r.iter().zip(x).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum())
        .collect()
}

/// Span of all brackets of pairs of basis elements.
pub fn derived(alg: &Algebra, sub: &Subspace) -> Subspace {
    let b = sub.basis(alg);
    let mut rows = Vec::new();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            rows.push(alg.coords(&alg.bracket(&b[i], &b[j])));
        }
    }
    Subspace::from_coords(alg.dim(), rows)
}

/// `{x ∈ i0 : [x, b] ∈ i2 for all b ∈ i1}`.
pub fn prop1(alg: &Algebra, i0: &Subspace, i1: &Subspace, i2: &Subspace) -> Subspace {
    let ann = i2.annihilator();
    let a = i0.basis(alg);
    let b = i1.basis(alg);
    let cols: Vec<Vec<Q>> = a
        .iter()
        .map(|ai| b.iter().flat_map(|bj| apply(&ann, &alg.coords(&alg.bracket(ai, bj)))).collect())
        .collect();
    if b.is_empty() || ann.is_empty() {
        return i0.clone();
    }
    i0.combine(&column_kernel(&cols))
}

/// `{x ∈ ambient : [x, b] = 0 for all b ∈ sub}`.
pub fn centralizer(alg: &Algebra, ambient: &Subspace, sub: &Subspace) -> Subspace {
    prop1(alg, ambient, sub, &Subspace::zero(alg))
}

pub fn center(alg: &Algebra, sub: &Subspace) -> Subspace {
    centralizer(alg, sub, sub)
}

/// Whether `[i, g] ⊆ i`.
pub fn is_ideal(alg: &Algebra, i: &Subspace, g: &Subspace) -> bool {
    prop1(alg, i, g, i) == *i
}
