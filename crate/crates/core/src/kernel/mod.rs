//! Exact arithmetic: rationals, prime fields, fixed-precision p-adics, dense
//! matrices and polynomials over any of them, and integer Smith normal form.

mod lattice;
mod matrix;
mod padic;
mod poly;
mod scalar;
mod snf;

pub use lattice::{Lattice, QuotientStructure};
pub use matrix::Matrix;
pub use padic::{centered_residue, PAdic, PAdicCtx};
pub use poly::Polynomial;
pub use scalar::{int, is_prime, padic_valuation, rational, Fp, Rational, Scalar};
pub use snf::{smith_decomposition, smith_normal_form, SmithDecomposition};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not invertible")]
    NotInvertible(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("p-adic precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("working precision must be at least 1")]
    InvalidPrecision,
    #[error("lattice is not contained in the ambient lattice")]
    NotSublattice,
}
