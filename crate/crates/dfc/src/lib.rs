//! Two families of linear trace codes over F_{p^m}, their exact weight
//! distributions (exhaustive enumeration cross-checked against closed-form
//! tables), exponential-sum value distributions in Z[zeta_p], affine
//! invariance via defining sets, and the 2-designs held by fixed-weight
//! codeword supports.

pub mod error;
pub mod codes;
pub mod cyclo;
pub mod gf;
pub mod sums;
pub(crate) mod kernel;

pub use error::{Error, Result};
