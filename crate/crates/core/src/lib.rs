pub mod algebra;
pub mod catalogue;
pub mod corpus;
pub mod error;
pub mod exec;
pub mod invariants;
pub mod kronecker;
pub mod pencil;
pub mod slocc;

pub use error::{Error, Result};
pub use invariants::{kronecker_invariants, KroneckerInvariants};
pub use pencil::Pencil;
