use nalgebra::{DMatrix, Matrix3, Vector3};

use super::rnea::{project, propagate};
use super::{check_gravity, DynamicsError, JointState};
use crate::chain::KinematicChain;

/// Inertial parameters per body: `[m, m·cx, m·cy, m·cz, Ixx, Ixy, Ixz, Iyy, Iyz, Izz]`,
/// with the tensor taken about the joint frame origin.
pub const PARAMETERS_PER_BODY: usize = 10;

/// Regressor `Y(q, q̇, q̈)` with `Y·π = τ`, where `π` is
/// [`KinematicChain::inertial_parameters`].
///
/// Each column is the torque produced when the corresponding parameter is one
/// and every other parameter of the chain is zero.
pub fn regressor_matrix(
    chain: &KinematicChain,
    gravity: &Vector3<f64>,
    state: &JointState,
) -> Result<DMatrix<f64>, DynamicsError> {
    let dof = chain.dof();
    state.check(dof)?;
    check_gravity(gravity)?;
    let frames = propagate(chain, gravity, &state.q, &state.qd, &state.qdd);
    let mut y = DMatrix::zeros(dof, PARAMETERS_PER_BODY * dof);
    for (k, frame) in frames.iter().enumerate() {
        for p in 0..PARAMETERS_PER_BODY {
            let mut params = [0.0; PARAMETERS_PER_BODY];
            params[p] = 1.0;
            let (mut force, mut moment) =
                body_wrench(&params, &frame.omega, &frame.alpha, &frame.accel);
            for j in (0..=k).rev() {
                y[(j, PARAMETERS_PER_BODY * k + p)] = project(&chain.joints()[j], &force, &moment);
                let link = &frames[j];
                force = link.rotation * force;
                moment = link.rotation * moment + link.offset.cross(&force);
            }
        }
    }
    Ok(y)
}

/// Newton–Euler wrench of a body about its frame origin, linear in the
/// inertial parameters.
fn body_wrench(
    params: &[f64; PARAMETERS_PER_BODY],
    omega: &Vector3<f64>,
    alpha: &Vector3<f64>,
    accel: &Vector3<f64>,
) -> (Vector3<f64>, Vector3<f64>) {
    let &[m, hx, hy, hz, ixx, ixy, ixz, iyy, iyz, izz] = params;
    let h = Vector3::new(hx, hy, hz);
    let inertia = Matrix3::new(ixx, ixy, ixz, ixy, iyy, iyz, ixz, iyz, izz);
    let force = accel * m + alpha.cross(&h) + omega.cross(&omega.cross(&h));
    let moment = inertia * alpha + omega.cross(&(inertia * omega)) + h.cross(accel);
    (force, moment)
}

#[cfg(test)]
mod tests {
    use nalgebra::{Isometry3, Vector3};

    use super::*;
    use crate::chain::{ChainJoint, JointLimits, MovableKind, SpatialInertia};
    use crate::dynamics::rnea;

    fn pendulum() -> KinematicChain {
        KinematicChain::new(
            "base",
            "link",
            vec![ChainJoint {
                name: "j".into(),
                kind: MovableKind::Revolute,
                parent_to_joint: Isometry3::identity(),
                axis: Vector3::z(),
                inertia: SpatialInertia::point_mass(1.0, Vector3::x()),
                limits: JointLimits::unbounded(),
            }],
        )
    }

    #[test]
    fn first_moment_column_of_pendulum() {
        let y = regressor_matrix(
            &pendulum(),
            &Vector3::new(0.0, -9.81, 0.0),
            &JointState::zeros(1),
        )
        .unwrap();
        assert!((y[(0, 1)] - 9.81).abs() < 1e-12);
        let tau = rnea(
            &pendulum(),
            &Vector3::new(0.0, -9.81, 0.0),
            &JointState::zeros(1),
        )
        .unwrap();
        assert!(((&y * pendulum().inertial_parameters())[0] - tau[0]).abs() < 1e-12);
    }

    #[test]
    fn zero_state_zero_gravity_gives_zero_regressor() {
        let y = regressor_matrix(&pendulum(), &Vector3::zeros(), &JointState::zeros(1)).unwrap();
        assert_eq!(y.shape(), (1, 10));
        assert!(y.iter().all(|v| *v == 0.0));
    }
}
