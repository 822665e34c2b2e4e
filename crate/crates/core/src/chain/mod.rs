//! Robot descriptions and the serial kinematic chains extracted from them.
//!
//! A [`RobotModel`] is parsed from URDF text and kept as a tree of links and
//! joints. [`extract_chain`] selects the path between two links and fuses
//! every rigidly attached body into the nearest movable joint, producing the
//! [`KinematicChain`] consumed by the dynamics routines.

mod extract;
mod inertia;
mod model;
pub mod urdf;
mod validate;

use thiserror::Error;

pub use extract::{
    extract_chain, extract_chain_with_diagnostics, ChainJoint, KinematicChain, MovableKind,
};
pub use inertia::{SpatialInertia, EIGENVALUE_TOLERANCE};
pub use model::{JointKind, JointLimits, JointSpec, LinkSpec, Origin, RobotModel};
pub use urdf::{parse_urdf, parse_urdf_with_diagnostics, write_urdf};
pub use validate::{validate_chain, Diagnostic, Severity};

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("URDF parse error at line {line}, column {column}: {message}")]
    Parse {
        line: u32,
        column: u32,
        message: String,
    },
    #[error("joint '{joint}' has unsupported type '{kind}'")]
    UnsupportedJoint { joint: String, kind: String },
    #[error("invalid robot model: {0}")]
    Model(String),
    #[error("chain from '{root}' to '{tip}' has no movable joints")]
    EmptyChain { root: String, tip: String },
    #[error("failed to read robot description {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
