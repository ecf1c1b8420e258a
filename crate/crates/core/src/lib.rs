//! Pointwise exterior algebra of deformed Donaldson–Thomas (dDT) and
//! deformed Hermitian Yang–Mills (dHYM) connections.
//!
//! The crate is organised bottom-up:
//!
//! * [`exterior`]: dense alternating forms, Hodge star, pullbacks.
//! * [`g2`]: the standard G2-structure on `R^7` and its irreducible projections.
//! * [`ddt`]: the pointwise dDT equation, the induced G2-structure and its
//!   closed-form Hodge dual, norm bounds.
//! * [`dhym`]: Kähler linear algebra, eigenvalue normal form, radius/angle.
//! * [`product`]: the `S^1 x Y^6` bridge between the two equations.
//! * [`torus`]: Fourier-mode realisation of the deformation complex on the
//!   flat 7-torus.
//! * [`campaign`]: seeded verification suites and their JSON reports.

pub mod campaign;
pub mod ddt;
pub mod dhym;
mod error;
pub mod exterior;
pub mod g2;
pub mod linalg;
pub mod product;
pub mod sampling;
mod tolerance;
pub mod torus;

pub use error::{Error, Result};
pub use exterior::{CForm, KForm, LinearMap, Metric};
pub use tolerance::Tolerance;
