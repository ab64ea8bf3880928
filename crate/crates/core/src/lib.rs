mod arith;
pub mod cli;
pub mod error;
pub mod factor;
pub mod intersection;
pub mod k3;
pub mod lattice;
pub mod lucas;
pub mod mat2;
pub mod oracle;
pub mod pell;
mod serde_big;

pub use error::{Error, Result};
pub use lucas::{LucasParams, SeqTerm};
pub use mat2::Mat2;
pub use pell::{MembershipVerdict, PellProblem, PellSign, PellSolution};
