use nalgebra::DVector;

use super::{MeasuredUnits, Trajectory, TrajectoryError, TrajectorySample};
use crate::chain::KinematicChain;
use crate::friction::DriveGains;
use crate::solver::InverseDynamicsSolver;

/// Dynamics evaluated at one trajectory sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ComputedRecord {
    pub t: f64,
    pub torques: DVector<f64>,
    pub inertia_diagonal: DVector<f64>,
    pub coriolis: DVector<f64>,
    pub gravity: DVector<f64>,
    pub friction: DVector<f64>,
}

/// Evaluates the solver at every sample.
pub fn compute_along_trajectory(
    solver: &dyn InverseDynamicsSolver,
    samples: &[TrajectorySample],
) -> Result<Vec<ComputedRecord>, TrajectoryError> {
    samples
        .iter()
        .enumerate()
        .map(|(index, sample)| {
            let at = |source| TrajectoryError::Solver {
                sample: index,
                source,
            };
            let components = solver
                .dynamic_components(&sample.q, &sample.qd)
                .map_err(at)?;
            Ok(ComputedRecord {
                t: sample.t,
                torques: solver
                    .torques(&sample.q, &sample.qd, &sample.qdd)
                    .map_err(at)?,
                inertia_diagonal: components.inertia.diagonal(),
                coriolis: components.coriolis,
                gravity: components.gravity,
                friction: solver.friction_vector(&sample.qd).map_err(at)?,
            })
        })
        .collect()
}

/// Error statistics of computed against measured torques, per joint.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub per_joint_rms: DVector<f64>,
    pub per_joint_max_abs: DVector<f64>,
    pub per_joint_mean: DVector<f64>,
    pub sample_count: usize,
    /// Measured torques in N·m, after any current conversion.
    pub measured: Vec<DVector<f64>>,
}

/// Compares computed torques with the measured columns of `trajectory`.
/// Measured currents are converted with `gains` first.
pub fn compare_torques(
    records: &[ComputedRecord],
    trajectory: &Trajectory,
    gains: Option<&DriveGains>,
) -> Result<ComparisonReport, TrajectoryError> {
    if records.is_empty() {
        return Err(TrajectoryError::Empty);
    }
    if records.len() != trajectory.len() {
        return Err(TrajectoryError::Dimension {
            expected: trajectory.len(),
            found: records.len(),
        });
    }
    let measured = trajectory
        .samples
        .iter()
        .map(|s| {
            let m = s
                .measured
                .as_ref()
                .ok_or(TrajectoryError::MissingMeasurement)?;
            match trajectory.units {
                MeasuredUnits::Torque => Ok(m.clone()),
                MeasuredUnits::Current => Ok(gains
                    .ok_or(TrajectoryError::MissingDriveGains)?
                    .torques_from_currents(m)?),
            }
        })
        .collect::<Result<Vec<_>, TrajectoryError>>()?;

    let dof = trajectory.dof;
    let n = records.len() as f64;
    let mut sum_sq = DVector::zeros(dof);
    let mut sum = DVector::zeros(dof);
    let mut max_abs = DVector::zeros(dof);
    for (record, m) in records.iter().zip(&measured) {
        let err = &record.torques - m;
        for j in 0..dof {
            sum_sq[j] += err[j] * err[j];
            sum[j] += err[j];
            max_abs[j] = f64::max(max_abs[j], err[j].abs());
        }
    }
    Ok(ComparisonReport {
        per_joint_rms: sum_sq.map(|s: f64| (s / n).sqrt()),
        per_joint_max_abs: max_abs,
        per_joint_mean: sum / n,
        sample_count: records.len(),
        measured,
    })
}

/// A sample outside a joint's position or velocity limits.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitViolation {
    /// Data row, counted from 1.
    pub row: usize,
    pub joint: String,
    pub quantity: &'static str,
    pub value: f64,
}

impl std::fmt::Display for LimitViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "row {}: joint {} {} {} out of limits",
            self.row, self.joint, self.quantity, self.value
        )
    }
}

/// Samples whose positions or speeds leave the chain's joint limits.
pub fn check_limits(chain: &KinematicChain, samples: &[TrajectorySample]) -> Vec<LimitViolation> {
    let mut violations = Vec::new();
    for (index, sample) in samples.iter().enumerate() {
        for (j, joint) in chain.joints().iter().enumerate() {
            if !joint.limits.contains(sample.q[j]) {
                violations.push(LimitViolation {
                    row: index + 1,
                    joint: joint.name.clone(),
                    quantity: "position",
                    value: sample.q[j],
                });
            }
            if sample.qd[j].abs() > joint.limits.velocity {
                violations.push(LimitViolation {
                    row: index + 1,
                    joint: joint.name.clone(),
                    quantity: "velocity",
                    value: sample.qd[j],
                });
            }
        }
    }
    violations
}
