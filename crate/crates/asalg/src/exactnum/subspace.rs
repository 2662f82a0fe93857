//! Linear subspaces kept in reduced row-echelon form.
//!
//! RREF bases are unique, so `==` on `Subspace` decides subspace equality
//! outright; that single fact is what lets fingerprints and annihilator
//! comparisons be plain structural comparisons.

use super::{Matrix, Scalar};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Scalar>>, // rows of a matrix in RREF, zero rows dropped
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| {
                let mut v = vec![Scalar::zero(); ambient_dim];
                v[i] = Scalar::one();
                v
            })
            .collect();
        Subspace {
            ambient_dim,
            basis,
        }
    }

    /// Span of arbitrary vectors, normalized to the unique RREF basis.
    pub fn from_vectors(ambient_dim: usize, vectors: Vec<Vec<Scalar>>) -> Self {
        assert!(
            vectors.iter().all(|v| v.len() == ambient_dim),
            "vector length must match ambient dimension"
        );
        if vectors.is_empty() {
            return Subspace::zero(ambient_dim);
        }
        let (red, rank) = Matrix::from_rows(vectors).rref();
        let basis = (0..rank).map(|i| red.row(i).to_vec()).collect();
        Subspace {
            ambient_dim,
            basis,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    /// Membership: v lies in the span iff adjoining it does not grow the rank.
    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        if v.iter().all(Scalar::is_zero) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows(rows).rank() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Sum of subspaces (span of the union).
    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::from_vectors(self.ambient_dim, vs)
    }

    /// Intersection, computed from the defining equations of both spans.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut constraints = self.constraint_rows();
        constraints.extend(other.constraint_rows());
        if constraints.is_empty() {
            return Subspace::full(self.ambient_dim);
        }
        Matrix::from_rows(constraints).kernel()
    }

    /// Rows f with f·x = 0 for exactly the x in this subspace.
    fn constraint_rows(&self) -> Vec<Vec<Scalar>> {
        if self.basis.is_empty() {
            // the zero subspace is cut out by all coordinate functionals
            return Subspace::full(self.ambient_dim).basis;
        }
        Matrix::from_rows(self.basis.clone())
            .kernel()
            .basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    fn v(coords: &[i64]) -> Vec<Scalar> {
        coords.iter().map(|&c| Scalar::from_int(c)).collect()
    }

    #[test]
    fn equal_spans_have_identical_representations() {
        let a = Subspace::from_vectors(3, vec![v(&[1, 1, 0]), v(&[0, 0, 1])]);
        let b = Subspace::from_vectors(3, vec![v(&[2, 2, 2]), v(&[1, 1, 3])]);
        assert_eq!(a, b);
    }

    #[test]
    fn membership_and_growth() {
        let u = Subspace::from_vectors(3, vec![v(&[1, 0, 1])]);
        assert!(u.contains(&v(&[2, 0, 2])));
        assert!(!u.contains(&v(&[1, 0, 0])));
        let grown = u.sum(&Subspace::from_vectors(3, vec![v(&[1, 0, 0])]));
        assert_eq!(grown.dim(), 2);
    }

    #[test]
    fn intersection() {
        let xy = Subspace::from_vectors(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let yz = Subspace::from_vectors(3, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]);
        let meet = xy.intersect(&yz);
        assert_eq!(meet.dim(), 1);
        assert!(meet.contains(&v(&[0, 1, 0])));
        assert_eq!(xy.intersect(&Subspace::full(3)), xy);
        assert_eq!(xy.intersect(&Subspace::zero(3)).dim(), 0);
    }

    #[test]
    fn rational_coefficients_normalize() {
        let u = Subspace::from_vectors(2, vec![vec![s("2"), s("3")]]);
        assert_eq!(u.basis()[0], vec![s("1"), s("3/2")]);
    }
}
