//! Symbolic matrices over the Laurent ring and the rotation constructions.

pub mod builders;
pub mod identities;
pub mod matrix;

pub use builders::{build_matrix, BuildError, FactorParams, MatrixKind};
pub use identities::{check_identity, su_check, IdentityError, IdentityTag};
pub use matrix::{mat_op, MatOp, MatOpOutput, MatrixError, SymMatrix};
