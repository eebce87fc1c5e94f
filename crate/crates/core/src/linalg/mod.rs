//! Dense and sparse matrices, exact and floating elimination, Smith normal
//! form and conjugate gradients.

mod cg;
mod dense;
mod elim;
mod padic;
mod smith;
mod sparse;

pub use cg::conjugate_gradient;
pub use dense::DenseMatrix;
pub use elim::{nullspace, rank, rref, solve, Lu};
pub use padic::{rational_reconstruction, PadicSolver};
pub use smith::{smith_normal_form, solve_integral, SmithDecomposition};
pub use sparse::SparseMatrix;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Clears denominators row by row, giving an integer matrix with the same
/// rational row space.
pub fn clear_denominators(m: &DenseMatrix<BigRational>) -> DenseMatrix<BigInt> {
    let mut out = DenseMatrix::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        let l = m.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        for j in 0..m.cols() {
            let x = &m[(i, j)];
            if !x.is_zero() {
                out[(i, j)] = x.numer() * (&l / x.denom());
            }
        }
    }
    out
}

/// Integer lattice basis of the rational kernel of `m`, computed through the
/// Smith form.
pub fn integer_kernel(m: &DenseMatrix<BigRational>) -> Vec<Vec<BigInt>> {
    smith_normal_form(&clear_denominators(m)).kernel_basis()
}

pub fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}
