//! Staggered finite-volume solver for the Ripa system.

pub mod bench;
pub mod cases;
pub mod diagnostics;
pub mod error;
pub mod fields;
pub mod fluxes;
pub mod grid;
pub mod operators;
pub mod rusanov;
pub mod scheme;
pub mod stabilization;

pub use error::{Result, RipaError};
pub use fields::{Bathymetry, CellField, FaceField, Quadrature, RipaState};
pub use fluxes::{FluxSet, InterfaceValues, Variant};
pub use grid::MacGrid;
pub use scheme::{SchemeConfig, StepReport};
pub use bench::{run_case, table1, RunConfig, SchemeKind};
pub use cases::{find_case, registry, CaseSpec};
