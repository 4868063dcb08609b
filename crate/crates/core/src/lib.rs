//! Semi-implicit advection schemes whose implicit systems are solved exactly
//! by one forward and one backward substitution sweep.
//!
//! The crate covers the non-conservative first and second order schemes,
//! the conservative finite-volume variants, Strang splitting in 2D, error
//! analysis, a discrete adjoint for the per-node `alpha` parameters and a
//! set of benchmark problems with reference values.

pub mod analysis;
pub mod bench;
pub mod conservative;
pub mod error;
pub mod mesh;
pub mod nonconservative;
pub mod optimizer;
pub mod strang;
pub mod velocity;

pub use error::{Error, Result};
pub use mesh::{Centering, Field1D, Field2D, Grid1D, Grid2D, TimeGrid, Trajectory};
