use std::f64::consts::TAU;

use nalgebra::DVector;

use super::{MeasuredUnits, Trajectory, TrajectoryError, TrajectorySample};

/// Per-joint sinusoidal excitation `q_j(t) = a_j·sin(2π·f_j·t + φ_j)`.
///
/// Each list holds one value per joint, or a single value shared by all.
#[derive(Debug, Clone, PartialEq)]
pub struct Sinusoid {
    pub amplitude: Vec<f64>,
    pub frequency: Vec<f64>,
    pub phase: Vec<f64>,
}

impl Sinusoid {
    fn expand(&self, dof: usize) -> Result<[Vec<f64>; 3], TrajectoryError> {
        let widen = |name: &str, values: &[f64]| -> Result<Vec<f64>, TrajectoryError> {
            if values.iter().any(|v| !v.is_finite()) {
                return Err(TrajectoryError::InvalidArgument(format!(
                    "{name} must be finite"
                )));
            }
            match values.len() {
                1 => Ok(vec![values[0]; dof]),
                n if n == dof => Ok(values.to_vec()),
                n => Err(TrajectoryError::InvalidArgument(format!(
                    "{name} has {n} values; give 1 or {dof}"
                ))),
            }
        };
        Ok([
            widen("amplitude", &self.amplitude)?,
            widen("frequency", &self.frequency)?,
            widen("phase", &self.phase)?,
        ])
    }
}

/// Samples the excitation at `rate` Hz over `[0, duration]` with exact
/// velocities and accelerations.
pub fn sinusoid_trajectory(
    dof: usize,
    duration: f64,
    rate: f64,
    excitation: &Sinusoid,
) -> Result<Trajectory, TrajectoryError> {
    if dof == 0 {
        return Err(TrajectoryError::InvalidArgument(
            "dof must be positive".into(),
        ));
    }
    if !(duration.is_finite() && duration > 0.0) {
        return Err(TrajectoryError::InvalidArgument(
            "duration must be positive".into(),
        ));
    }
    if !(rate.is_finite() && rate > 0.0) {
        return Err(TrajectoryError::InvalidArgument(
            "rate must be positive".into(),
        ));
    }
    let [amplitude, frequency, phase] = excitation.expand(dof)?;
    let count = (duration * rate + 1e-9).floor() as usize + 1;
    let samples = (0..count)
        .map(|i| {
            let t = i as f64 / rate;
            let mut q = DVector::zeros(dof);
            let mut qd = DVector::zeros(dof);
            let mut qdd = DVector::zeros(dof);
            for j in 0..dof {
                let w = TAU * frequency[j];
                let arg = w * t + phase[j];
                q[j] = amplitude[j] * arg.sin();
                qd[j] = amplitude[j] * w * arg.cos();
                qdd[j] = -amplitude[j] * w * w * arg.sin();
            }
            TrajectorySample {
                t,
                q,
                qd,
                qdd,
                measured: None,
            }
        })
        .collect();
    Ok(Trajectory {
        dof,
        units: MeasuredUnits::Torque,
        samples,
    })
}
