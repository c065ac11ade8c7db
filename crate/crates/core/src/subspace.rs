//! Linear subspaces of `Q^d`, held as a reduced basis.
//!
//! Equality and containment go through rank comparisons, never through the
//! particular basis vectors.

use crate::matrix::RatMatrix;
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::coordinate(ambient, 0..ambient)
    }

    /// Span of the standard vectors `e_k` for `k` in `indices` (0-based).
    pub fn coordinate(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let basis = indices
            .into_iter()
            .map(|k| {
                let mut v = vec![Rational::zero(); ambient];
                v[k] = Rational::one();
                v
            })
            .collect();
        Subspace { ambient, basis }
    }

    /// Span of arbitrary vectors; the stored basis is the nonzero rows of the
    /// reduced row echelon form.
    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let m = RatMatrix::from_rows(vectors.to_vec());
        assert_eq!(m.cols(), ambient, "vector length");
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|k| r.row(k).to_vec()).collect();
        Subspace { ambient, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient);
        if v.iter().all(Rational::is_zero) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        RatMatrix::from_rows(rows).rank() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        assert_eq!(other.ambient, self.ambient);
        if other.dim() == 0 {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        RatMatrix::from_rows(rows).rank() == self.dim()
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &rows)
    }
}
