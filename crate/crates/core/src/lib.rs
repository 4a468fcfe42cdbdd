//! Two-dimensional finite element engine for phase-field topology optimization
//! of Stokes-Brinkman flow.
//!
//! The velocity field is discretized with nonconforming linear Crouzeix-Raviart
//! elements (one vector degree of freedom per edge), the pressure with
//! piecewise constants and the phase field with conforming linear elements.
//! The optimization driver runs a nested augmented-Lagrangian gradient flow:
//! an outer loop alternating Stokes-Brinkman state solves with multiplier
//! updates, an inner loop of stabilized semi-implicit phase-field steps, and
//! uniform mesh refinement between levels.
//!
//! Module map:
//! - [`mesh`]: triangulations, boundary tags, benchmark domains, red refinement
//! - [`spaces`]: discrete fields, interpolation, enrichment, norms
//! - [`assembly`]: sparse matrices and element integration
//! - [`stokes`]: the saddle-point state solver
//! - [`phasefield`]: phase-field energies and the semi-implicit update
//! - [`optimizer`]: the multi-level optimization loop
//! - [`cli_io`]: presets, config files, VTK/CSV export, command line
//! - [`verify`]: runtime self-checks behind `crflow verify`

pub mod assembly;
pub mod cli_io;
pub mod mesh;
pub mod optimizer;
pub mod phasefield;
pub mod quadrature;
pub mod solver;
pub mod spaces;
pub mod stokes;
pub mod verify;

pub use mesh::{BenchmarkCase, BoundaryTag, DofReport, InletProfile, Mesh, MeshError};
pub use phasefield::{DualState, PhaseParams};
pub use spaces::{CrField, NormKind, P0Field, P1Field};
pub use stokes::{PhysParams, StokesSolution};

/// Any error surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Mesh(#[from] mesh::MeshError),
    #[error(transparent)]
    Space(#[from] spaces::SpaceError),
    #[error(transparent)]
    Solve(#[from] solver::SolveError),
    #[error(transparent)]
    Config(#[from] cli_io::ConfigError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
