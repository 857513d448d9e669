//! Exact BRST cohomology for quantum Hamiltonian reductions of Weyl algebras.
//!
//! Modules, bottom up: [`exact`] (rationals, sparse rank), [`algebra`]
//! (Weyl, symbol, ghost and tensor algebras), [`liealg`] (structure
//! constants), [`models`] (quiver and hypertoric setups), [`brst`]
//! (differentials, truncated cohomology, oracles) and [`derham`]
//! (closed-form Poincaré polynomials).

pub mod algebra;
pub mod brst;
pub mod derham;
pub mod exact;
pub mod liealg;
pub mod models;
