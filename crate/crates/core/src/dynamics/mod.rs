//! Rigid-body terms of the manipulator equations of motion
//!
//! `H(q)·q̈ + C(q, q̇)·q̇ + g(q) = τ`
//!
//! computed with the recursive Newton–Euler algorithm, together with the
//! inertial-parameter regressor and forward dynamics.

mod forward;
mod regressor;
mod rnea;

use nalgebra::{DMatrix, DVector, Vector3};
use thiserror::Error;

pub use forward::forward_dynamics;
pub use regressor::{regressor_matrix, PARAMETERS_PER_BODY};
pub use rnea::{coriolis_vector, dynamic_components, gravity_vector, inertia_matrix, rnea};

/// Relative asymmetry of `H` tolerated before symmetrization.
pub const ASYMMETRY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("{what} has length {found}, expected {expected}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{what} contains non-finite values")]
    NonFinite { what: &'static str },
    #[error("inertia matrix asymmetry {relative:e} exceeds tolerance")]
    Asymmetry { relative: f64 },
    #[error("inertia matrix is not positive definite")]
    SingularInertia,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Joint positions, velocities and accelerations.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub q: DVector<f64>,
    pub qd: DVector<f64>,
    pub qdd: DVector<f64>,
}

impl JointState {
    pub fn new(q: DVector<f64>, qd: DVector<f64>, qdd: DVector<f64>) -> Self {
        Self { q, qd, qdd }
    }

    pub fn zeros(dof: usize) -> Self {
        Self::at_rest(DVector::zeros(dof))
    }

    /// Configuration `q` with zero velocity and acceleration.
    pub fn at_rest(q: DVector<f64>) -> Self {
        let dof = q.len();
        Self {
            q,
            qd: DVector::zeros(dof),
            qdd: DVector::zeros(dof),
        }
    }

    pub fn from_slices(q: &[f64], qd: &[f64], qdd: &[f64]) -> Self {
        Self {
            q: DVector::from_column_slice(q),
            qd: DVector::from_column_slice(qd),
            qdd: DVector::from_column_slice(qdd),
        }
    }

    /// Checks lengths against `dof` and finiteness of every entry.
    pub fn check(&self, dof: usize) -> Result<(), DynamicsError> {
        check_vector("q", &self.q, dof)?;
        check_vector("qd", &self.qd, dof)?;
        check_vector("qdd", &self.qdd, dof)
    }
}

/// The rigid-body terms `(H, C·q̇, g)` at one state.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicComponents {
    pub inertia: DMatrix<f64>,
    pub coriolis: DVector<f64>,
    pub gravity: DVector<f64>,
}

pub(crate) fn check_vector(
    what: &'static str,
    v: &DVector<f64>,
    dof: usize,
) -> Result<(), DynamicsError> {
    if v.len() != dof {
        return Err(DynamicsError::Dimension {
            what,
            expected: dof,
            found: v.len(),
        });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(DynamicsError::NonFinite { what });
    }
    Ok(())
}

pub(crate) fn check_gravity(g: &Vector3<f64>) -> Result<(), DynamicsError> {
    if g.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(DynamicsError::NonFinite { what: "gravity" })
    }
}
