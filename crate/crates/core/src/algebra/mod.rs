//! Weyl algebra, symbol algebra, Clifford ghosts and their tensor product.

pub mod basis;
pub mod ghost;
pub mod poly;
pub mod tensor;
pub mod text;
pub mod weyl;

use thiserror::Error;

pub use basis::enumerate_basis;
pub use ghost::{GhostElement, GhostMonomial};
pub use poly::PolyElement;
pub use tensor::{BrstElement, BrstMonomial};
pub use weyl::{Degree, TorusWeight, WeylElement, WeylMonomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },
    #[error("ghost dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("element is not parity homogeneous")]
    NotHomogeneous,
    #[error("cannot parse element: {0}")]
    Parse(String),
}
