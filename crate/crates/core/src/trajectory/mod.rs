//! Trajectory files, dynamics along a trajectory and comparison reports.

mod compute;
mod generate;
mod io;
mod report;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::solver::SolverError;

pub use compute::{
    check_limits, compare_torques, compute_along_trajectory, ComparisonReport, ComputedRecord,
    LimitViolation,
};
pub use generate::{sinusoid_trajectory, Sinusoid};
pub use io::{load_trajectory, parse_trajectory, write_trajectory};
pub use report::{emit_report, render_csv, render_summary, Report, TOOL_VERSION};

#[derive(Debug, Error)]
pub enum TrajectoryError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid header: {0}")]
    Header(String),
    #[error("row {row}: {message}")]
    Format { row: usize, message: String },
    #[error("trajectory has {found} joints, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("row {row}: time does not increase")]
    NonMonotonicTime { row: usize },
    #[error("trajectory has no acceleration columns; pass --differentiate to estimate them")]
    MissingAccelerations,
    #[error("trajectory carries no measured torques")]
    MissingMeasurement,
    #[error("measured values are currents but no drive gains are configured")]
    MissingDriveGains,
    #[error("invalid trajectory parameter: {0}")]
    InvalidArgument(String),
    #[error("trajectory is empty")]
    Empty,
    #[error("sample {sample}: {source}")]
    Solver { sample: usize, source: SolverError },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Units of the measured columns of a trajectory file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasuredUnits {
    #[default]
    Torque,
    Current,
}

impl MeasuredUnits {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Torque => "torque",
            Self::Current => "current",
        }
    }
}

impl std::str::FromStr for MeasuredUnits {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "torque" => Ok(Self::Torque),
            "current" => Ok(Self::Current),
            other => Err(format!("unknown units '{other}'")),
        }
    }
}

/// One joint state of a trajectory, with optional measured torques or currents.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub q: DVector<f64>,
    pub qd: DVector<f64>,
    pub qdd: DVector<f64>,
    pub measured: Option<DVector<f64>>,
}

/// A time-ordered list of samples for a chain with `dof` joints.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dof: usize,
    pub units: MeasuredUnits,
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn has_measurements(&self) -> bool {
        !self.samples.is_empty() && self.samples.iter().all(|s| s.measured.is_some())
    }
}
