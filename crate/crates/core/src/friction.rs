//! Joint friction models and the current-to-torque drive map.
//!
//! Friction enters the equations of motion as an additive joint-space term
//! `f(q̇)` with the same sign as the velocity. Every model evaluates to zero
//! at rest.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dynamics::{check_vector, DynamicsError};

/// Default Coulomb smoothing width, rad/s.
pub const DEFAULT_VELOCITY_EPS: f64 = 1e-3;

fn default_velocity_eps() -> f64 {
    DEFAULT_VELOCITY_EPS
}

/// Friction law of a single joint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", content = "params", rename_all = "kebab-case")]
pub enum FrictionModel {
    None,
    /// `Fv·q̇ + Fc·tanh(q̇ / vEps)`
    ViscousCoulomb {
        #[serde(rename = "fv")]
        viscous: f64,
        #[serde(rename = "fc")]
        coulomb: f64,
        #[serde(rename = "v_eps", default = "default_velocity_eps")]
        velocity_eps: f64,
    },
    /// `φ1 / (1 + e^(−φ2·(q̇ + φ3))) − φ1 / (1 + e^(−φ2·φ3))`
    AsymmetricSigmoid {
        phi1: f64,
        phi2: f64,
        phi3: f64,
    },
}

impl FrictionModel {
    pub fn viscous_coulomb(viscous: f64, coulomb: f64, velocity_eps: f64) -> Self {
        Self::ViscousCoulomb {
            viscous,
            coulomb,
            velocity_eps,
        }
    }

    pub fn sigmoid(phi1: f64, phi2: f64, phi3: f64) -> Self {
        Self::AsymmetricSigmoid { phi1, phi2, phi3 }
    }

    pub fn eval(&self, qd: f64) -> f64 {
        match *self {
            Self::None => 0.0,
            Self::ViscousCoulomb {
                viscous,
                coulomb,
                velocity_eps,
            } => viscous * qd + coulomb * (qd / velocity_eps).tanh(),
            Self::AsymmetricSigmoid { phi1, phi2, phi3 } => {
                phi1 * logistic(phi2 * (qd + phi3)) - phi1 * logistic(phi2 * phi3)
            }
        }
    }

    pub fn check(&self) -> Result<(), DynamicsError> {
        let invalid = |msg: String| Err(DynamicsError::InvalidParameter(msg));
        match *self {
            Self::None => Ok(()),
            Self::ViscousCoulomb {
                viscous,
                coulomb,
                velocity_eps,
            } => {
                if !(viscous >= 0.0 && viscous.is_finite()) {
                    return invalid(format!(
                        "viscous coefficient must be finite and >= 0, got {viscous}"
                    ));
                }
                if !(coulomb >= 0.0 && coulomb.is_finite()) {
                    return invalid(format!(
                        "Coulomb coefficient must be finite and >= 0, got {coulomb}"
                    ));
                }
                if !(velocity_eps > 0.0 && velocity_eps.is_finite()) {
                    return invalid(format!(
                        "smoothing velocity must be finite and > 0, got {velocity_eps}"
                    ));
                }
                Ok(())
            }
            Self::AsymmetricSigmoid { phi1, phi2, phi3 } => {
                if [phi1, phi2, phi3].iter().all(|v| v.is_finite()) {
                    Ok(())
                } else {
                    invalid("sigmoid parameters must be finite".into())
                }
            }
        }
    }
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// One friction model per chain joint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<FrictionModel>", into = "Vec<FrictionModel>")]
pub struct FrictionParams {
    models: Vec<FrictionModel>,
}

impl FrictionParams {
    pub fn new(models: Vec<FrictionModel>) -> Result<Self, DynamicsError> {
        for m in &models {
            m.check()?;
        }
        Ok(Self { models })
    }

    pub fn none(dof: usize) -> Self {
        Self {
            models: vec![FrictionModel::None; dof],
        }
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn models(&self) -> &[FrictionModel] {
        &self.models
    }
}

impl TryFrom<Vec<FrictionModel>> for FrictionParams {
    type Error = DynamicsError;

    fn try_from(models: Vec<FrictionModel>) -> Result<Self, Self::Error> {
        Self::new(models)
    }
}

impl From<FrictionParams> for Vec<FrictionModel> {
    fn from(params: FrictionParams) -> Self {
        params.models
    }
}

/// Friction vector `f(q̇)`, each joint evaluated independently.
pub fn eval_friction(
    params: &FrictionParams,
    qd: &DVector<f64>,
) -> Result<DVector<f64>, DynamicsError> {
    check_vector("qd", qd, params.len())?;
    Ok(DVector::from_iterator(
        qd.len(),
        params.models.iter().zip(qd.iter()).map(|(m, v)| m.eval(*v)),
    ))
}

/// Strictly positive per-joint torque constants, N·m/A.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DriveGains {
    gains: DVector<f64>,
}

impl DriveGains {
    pub fn new(gains: DVector<f64>) -> Result<Self, DynamicsError> {
        if let Some(bad) = gains.iter().find(|k| !(k.is_finite() && **k > 0.0)) {
            return Err(DynamicsError::InvalidParameter(format!(
                "drive gains must be finite and > 0, got {bad}"
            )));
        }
        Ok(Self { gains })
    }

    pub fn from_slice(gains: &[f64]) -> Result<Self, DynamicsError> {
        Self::new(DVector::from_column_slice(gains))
    }

    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains.is_empty()
    }

    pub fn gains(&self) -> &DVector<f64> {
        &self.gains
    }

    /// `diag(k)`.
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.gains)
    }

    /// `τ_i = k_i · i_i`.
    pub fn torques_from_currents(
        &self,
        currents: &DVector<f64>,
    ) -> Result<DVector<f64>, DynamicsError> {
        check_vector("currents", currents, self.len())?;
        Ok(self.gains.component_mul(currents))
    }

    /// `i_i = τ_i / k_i`.
    pub fn currents_from_torques(
        &self,
        torques: &DVector<f64>,
    ) -> Result<DVector<f64>, DynamicsError> {
        check_vector("torques", torques, self.len())?;
        Ok(torques.component_div(&self.gains))
    }
}

impl TryFrom<Vec<f64>> for DriveGains {
    type Error = DynamicsError;

    fn try_from(gains: Vec<f64>) -> Result<Self, Self::Error> {
        Self::from_slice(&gains)
    }
}

impl From<DriveGains> for Vec<f64> {
    fn from(gains: DriveGains) -> Self {
        gains.gains.as_slice().to_vec()
    }
}
