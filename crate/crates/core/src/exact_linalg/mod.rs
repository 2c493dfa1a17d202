//! Exact sparse linear algebra over Q and over cyclotomic fields.

mod cyclotomic;
mod field;
mod matrix;
mod rational;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, CyclotomicScalar};
pub use field::Field;
pub use matrix::{rank_of_vectors, span_contains, QuotientMap, SparseMatrix, SparseVec, Subspace};
pub use rational::Rational;

pub type RationalMatrix = SparseMatrix<Rational>;
pub type RationalVec = SparseVec<Rational>;
pub type CyclotomicMatrix = SparseMatrix<CyclotomicScalar>;

use crate::error::Result;

pub fn rank<F: Field>(m: &SparseMatrix<F>) -> usize {
    m.rank()
}

pub fn kernel_basis<F: Field>(m: &SparseMatrix<F>) -> Vec<SparseVec<F>> {
    m.kernel_basis()
}

pub fn cokernel_dimension<F: Field>(m: &SparseMatrix<F>) -> usize {
    m.cokernel_dimension()
}

/// Whether the dense vector `v` (length = rows) lies in the column span of `m`.
pub fn solve_membership<F: Field>(m: &SparseMatrix<F>, v: &[F]) -> Result<bool> {
    m.solve_membership_dense(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&RationalMatrix::identity(2)), 2);
        assert_eq!(rank(&RationalMatrix::zeros(3, 5)), 0);
        // a_ij = i + j, 1-indexed: rows are arithmetic progressions
        let a = RationalMatrix::from_triplets(4, 4, (0..4).flat_map(|i| (0..4).map(move |j| (i, j, q((i + j + 2) as i64)))));
        assert_eq!(rank(&a), 2);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&RationalMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&RationalMatrix::zeros(2, 2)).len(), 2);
        let row = RationalMatrix::from_dense(&[vec![q(1), q(1)]]);
        let k = kernel_basis(&row);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].get(0), -k[0].get(1));
        assert!(!k[0].get(0).is_zero());
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel_dimension(&RationalMatrix::identity(4)), 0);
        assert_eq!(cokernel_dimension(&RationalMatrix::zeros(3, 2)), 3);
        let a = RationalMatrix::from_dense(&[vec![q(1), q(0)], vec![q(0), q(0)]]);
        assert_eq!(cokernel_dimension(&a), 1);
    }

    #[test]
    fn membership_examples() {
        assert!(solve_membership(&RationalMatrix::identity(3), &[q(4), q(-1), q(2)]).unwrap());
        assert!(!solve_membership(&RationalMatrix::zeros(2, 2), &[q(1), q(0)]).unwrap());
        let col = RationalMatrix::from_dense(&[vec![q(1)], vec![q(1)]]);
        assert!(!solve_membership(&col, &[q(1), q(2)]).unwrap());
        assert!(solve_membership(&col, &[q(-3), q(-3)]).unwrap());
        assert!(matches!(solve_membership(&col, &[q(1)]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn cyclotomic_matrix_rank() {
        // [[1, ζ_3], [ζ_3^2, 1]] has determinant 1 − ζ_3^3 = 0
        let z = |j| CyclotomicScalar::zeta(3, j);
        let a = CyclotomicMatrix::from_dense(&[vec![z(0), z(1)], vec![z(2), z(0)]]);
        assert_eq!(a.rank(), 1);
        let b = CyclotomicMatrix::from_dense(&[vec![z(0), z(1)], vec![z(1), z(0)]]);
        assert_eq!(b.rank(), 2);
    }
}
