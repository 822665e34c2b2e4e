use nalgebra::{DMatrix, DVector, Vector3};

use super::{FrictionUnits, InverseDynamicsSolver, SolverError, SolverSetup};
use crate::chain::KinematicChain;
use crate::dynamics::{self, JointState};
use crate::friction::{eval_friction, DriveGains, FrictionParams};

/// Model-based solver for fully described robots. Friction is ignored.
#[derive(Debug, Clone)]
pub struct GenericSolver {
    name: String,
    chain: KinematicChain,
    gravity: Vector3<f64>,
}

impl GenericSolver {
    pub fn new(setup: SolverSetup) -> Self {
        Self {
            name: setup.plugin_name,
            chain: setup.chain,
            gravity: setup.gravity,
        }
    }
}

impl InverseDynamicsSolver for GenericSolver {
    fn plugin_name(&self) -> &str {
        &self.name
    }

    fn chain(&self) -> &KinematicChain {
        &self.chain
    }

    fn gravity(&self) -> &Vector3<f64> {
        &self.gravity
    }
}

/// Friction data bound to a chain, converted to torque units on evaluation.
#[derive(Debug, Clone)]
struct BoundFriction {
    params: FrictionParams,
    units: FrictionUnits,
    gains: Option<DriveGains>,
}

impl BoundFriction {
    fn new(
        setup: &SolverSetup,
        params: FrictionParams,
        gains: Option<DriveGains>,
    ) -> Result<Self, SolverError> {
        let dof = setup.chain.dof();
        if params.len() != dof {
            return Err(SolverError::Config(format!(
                "friction has {} entries for a chain with {dof} joints",
                params.len()
            )));
        }
        if setup.friction_units == FrictionUnits::Current && gains.is_none() {
            return Err(SolverError::MissingParam {
                plugin: setup.plugin_name.clone(),
                param: "drive_gains",
            });
        }
        Ok(Self {
            params,
            units: setup.friction_units,
            gains,
        })
    }

    fn torque(&self, qd: &DVector<f64>) -> Result<DVector<f64>, SolverError> {
        let f = eval_friction(&self.params, qd)?;
        match (self.units, &self.gains) {
            (FrictionUnits::Current, Some(gains)) => Ok(gains.torques_from_currents(&f)?),
            _ => Ok(f),
        }
    }
}

fn rigid_body_torques(
    chain: &KinematicChain,
    gravity: &Vector3<f64>,
    q: &DVector<f64>,
    qd: &DVector<f64>,
    qdd: &DVector<f64>,
) -> Result<DVector<f64>, SolverError> {
    let state = JointState::new(q.clone(), qd.clone(), qdd.clone());
    Ok(dynamics::rnea(chain, gravity, &state)?)
}

/// Solver for robots with an identified nonlinear friction model; torques
/// include `f(q̇)`.
#[derive(Debug, Clone)]
pub struct FrictionSolver {
    name: String,
    chain: KinematicChain,
    gravity: Vector3<f64>,
    friction: BoundFriction,
}

impl FrictionSolver {
    pub fn new(setup: SolverSetup) -> Result<Self, SolverError> {
        let params = setup.require_friction()?;
        let friction = BoundFriction::new(&setup, params, setup.drive_gains.clone())?;
        Ok(Self {
            name: setup.plugin_name,
            chain: setup.chain,
            gravity: setup.gravity,
            friction,
        })
    }
}

impl InverseDynamicsSolver for FrictionSolver {
    fn plugin_name(&self) -> &str {
        &self.name
    }

    fn chain(&self) -> &KinematicChain {
        &self.chain
    }

    fn gravity(&self) -> &Vector3<f64> {
        &self.gravity
    }

    fn friction_vector(&self, qd: &DVector<f64>) -> Result<DVector<f64>, SolverError> {
        self.friction.torque(qd)
    }

    fn torques(
        &self,
        q: &DVector<f64>,
        qd: &DVector<f64>,
        qdd: &DVector<f64>,
    ) -> Result<DVector<f64>, SolverError> {
        let tau = rigid_body_torques(&self.chain, &self.gravity, q, qd, qdd)?;
        Ok(tau + self.friction_vector(qd)?)
    }
}

/// Solver for robots identified at motor-current level. Torques include
/// friction; currents follow from the drive gains.
#[derive(Debug, Clone)]
pub struct CurrentLevelSolver {
    name: String,
    chain: KinematicChain,
    gravity: Vector3<f64>,
    friction: BoundFriction,
    gains: DriveGains,
}

impl CurrentLevelSolver {
    pub fn new(setup: SolverSetup) -> Result<Self, SolverError> {
        let gains = setup.require_drive_gains()?;
        if gains.len() != setup.chain.dof() {
            return Err(SolverError::Config(format!(
                "drive_gains has {} entries for a chain with {} joints",
                gains.len(),
                setup.chain.dof()
            )));
        }
        let params = setup.require_friction()?;
        let friction = BoundFriction::new(&setup, params, Some(gains.clone()))?;
        Ok(Self {
            name: setup.plugin_name,
            chain: setup.chain,
            gravity: setup.gravity,
            friction,
            gains,
        })
    }

    pub fn drive_gains(&self) -> &DriveGains {
        &self.gains
    }
}

impl InverseDynamicsSolver for CurrentLevelSolver {
    fn plugin_name(&self) -> &str {
        &self.name
    }

    fn chain(&self) -> &KinematicChain {
        &self.chain
    }

    fn gravity(&self) -> &Vector3<f64> {
        &self.gravity
    }

    fn friction_vector(&self, qd: &DVector<f64>) -> Result<DVector<f64>, SolverError> {
        self.friction.torque(qd)
    }

    fn torques(
        &self,
        q: &DVector<f64>,
        qd: &DVector<f64>,
        qdd: &DVector<f64>,
    ) -> Result<DVector<f64>, SolverError> {
        let tau = rigid_body_torques(&self.chain, &self.gravity, q, qd, qdd)?;
        Ok(tau + self.friction_vector(qd)?)
    }

    fn joint_currents(
        &self,
        q: &DVector<f64>,
        qd: &DVector<f64>,
        qdd: &DVector<f64>,
    ) -> Result<DVector<f64>, SolverError> {
        Ok(self
            .gains
            .currents_from_torques(&self.torques(q, qd, qdd)?)?)
    }

    fn drive_gains_matrix(&self) -> Result<DMatrix<f64>, SolverError> {
        Ok(self.gains.matrix())
    }
}
