//! The inverse dynamics solver interface and its built-in implementations.
//!
//! A solver is bound to one kinematic chain, a gravity vector and optional
//! friction and drive-gain data. Concrete solvers are looked up by plugin
//! name in a [`SolverRegistry`] and configured from a [`SolverConfig`]
//! document, so calling code never names the implementation it runs.

mod config;
mod plugins;
mod registry;

use nalgebra::{DMatrix, DVector, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{ChainError, KinematicChain};
use crate::dynamics::{self, DynamicComponents, DynamicsError, JointState};
use crate::friction::{DriveGains, FrictionParams};

pub use config::{RobotDescription, SolverConfig};
pub use plugins::{CurrentLevelSolver, FrictionSolver, GenericSolver};
pub use registry::{
    SolverFactory, SolverRegistry, CURRENT_LEVEL_PLUGIN, FRICTION_PLUGIN, GENERIC_PLUGIN,
};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("unknown solver plugin '{name}' (registered: {})", registered.join(", "))]
    UnknownPlugin {
        name: String,
        registered: Vec<String>,
    },
    #[error("plugin '{plugin}' requires parameter '{param}'")]
    MissingParam { plugin: String, param: &'static str },
    #[error("plugin '{plugin}' does not support {operation}")]
    UnsupportedOperation {
        plugin: String,
        operation: &'static str,
    },
    #[error("invalid solver configuration: {0}")]
    Config(String),
}

/// Units in which a friction dataset was identified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrictionUnits {
    Current,
    #[default]
    Torque,
}

/// Everything a plugin factory receives: the parsed and extracted chain plus
/// the optional parameter data from the configuration.
#[derive(Debug, Clone)]
pub struct SolverSetup {
    pub plugin_name: String,
    pub chain: KinematicChain,
    pub gravity: Vector3<f64>,
    pub friction: Option<FrictionParams>,
    pub drive_gains: Option<DriveGains>,
    pub friction_units: FrictionUnits,
}

impl SolverSetup {
    pub(crate) fn require_friction(&self) -> Result<FrictionParams, SolverError> {
        self.friction
            .clone()
            .ok_or_else(|| SolverError::MissingParam {
                plugin: self.plugin_name.clone(),
                param: "friction",
            })
    }

    pub(crate) fn require_drive_gains(&self) -> Result<DriveGains, SolverError> {
        self.drive_gains
            .clone()
            .ok_or_else(|| SolverError::MissingParam {
                plugin: self.plugin_name.clone(),
                param: "drive_gains",
            })
    }
}

/// Inverse dynamics of one robot: `H(q)·q̈ + C(q, q̇)·q̇ + f(q̇) + g(q) = τ`.
///
/// The rigid-body getters default to Newton–Euler evaluation of the bound
/// chain. The default [`torques`](Self::torques) omits friction; solvers
/// carrying a friction model override it.
pub trait InverseDynamicsSolver: Send + Sync {
    fn plugin_name(&self) -> &str;

    fn chain(&self) -> &KinematicChain;

    fn gravity(&self) -> &Vector3<f64>;

    fn dof(&self) -> usize {
        self.chain().dof()
    }

    /// `H(q)`
    fn inertia_matrix(&self, q: &DVector<f64>) -> Result<DMatrix<f64>, SolverError> {
        Ok(dynamics::inertia_matrix(self.chain(), q)?)
    }

    /// `C(q, q̇)·q̇`
    fn coriolis_vector(
        &self,
        q: &DVector<f64>,
        qd: &DVector<f64>,
    ) -> Result<DVector<f64>, SolverError> {
        Ok(dynamics::coriolis_vector(self.chain(), q, qd)?)
    }

    /// `g(q)`
    fn gravity_vector(&self, q: &DVector<f64>) -> Result<DVector<f64>, SolverError> {
        Ok(dynamics::gravity_vector(self.chain(), self.gravity(), q)?)
    }

    /// `f(q̇)`, in torque units. Zero unless the solver models friction.
    fn friction_vector(&self, qd: &DVector<f64>) -> Result<DVector<f64>, SolverError> {
        dynamics::check_vector("qd", qd, self.dof())?;
        Ok(DVector::zeros(self.dof()))
    }

    /// `(H, C·q̇, g)`, built from the three individual getters.
    fn dynamic_components(
        &self,
        q: &DVector<f64>,
        qd: &DVector<f64>,
    ) -> Result<DynamicComponents, SolverError> {
        Ok(DynamicComponents {
            inertia: self.inertia_matrix(q)?,
            coriolis: self.coriolis_vector(q, qd)?,
            gravity: self.gravity_vector(q)?,
        })
    }

    /// `τ = H·q̈ + C·q̇ + g`.
    fn torques(
        &self,
        q: &DVector<f64>,
        qd: &DVector<f64>,
        qdd: &DVector<f64>,
    ) -> Result<DVector<f64>, SolverError> {
        let state = JointState::new(q.clone(), qd.clone(), qdd.clone());
        Ok(dynamics::rnea(self.chain(), self.gravity(), &state)?)
    }

    /// Motor currents producing [`torques`](Self::torques). Only available on
    /// solvers identified at current level.
    fn joint_currents(
        &self,
        _q: &DVector<f64>,
        _qd: &DVector<f64>,
        _qdd: &DVector<f64>,
    ) -> Result<DVector<f64>, SolverError> {
        Err(SolverError::UnsupportedOperation {
            plugin: self.plugin_name().to_string(),
            operation: "joint currents",
        })
    }

    /// Diagonal current-to-torque map. Only available on solvers identified at
    /// current level.
    fn drive_gains_matrix(&self) -> Result<DMatrix<f64>, SolverError> {
        Err(SolverError::UnsupportedOperation {
            plugin: self.plugin_name().to_string(),
            operation: "drive gains",
        })
    }
}

impl std::fmt::Debug for dyn InverseDynamicsSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InverseDynamicsSolver")
            .field("plugin", &self.plugin_name())
            .field("dof", &self.dof())
            .finish()
    }
}
