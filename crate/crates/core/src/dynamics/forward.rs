use nalgebra::{Cholesky, DVector, Vector3};

use super::{check_vector, dynamic_components, DynamicsError};
use crate::chain::KinematicChain;

/// Accelerations produced by joint torques `tau`: solves
/// `H(q)·q̈ = τ − C(q, q̇)·q̇ − g(q)` with a Cholesky factorization.
pub fn forward_dynamics(
    chain: &KinematicChain,
    gravity: &Vector3<f64>,
    q: &DVector<f64>,
    qd: &DVector<f64>,
    tau: &DVector<f64>,
) -> Result<DVector<f64>, DynamicsError> {
    check_vector("tau", tau, chain.dof())?;
    let dc = dynamic_components(chain, gravity, q, qd)?;
    let rhs = tau - dc.coriolis - dc.gravity;
    let factor = Cholesky::new(dc.inertia).ok_or(DynamicsError::SingularInertia)?;
    Ok(factor.solve(&rhs))
}

#[cfg(test)]
mod tests {
    use nalgebra::{dvector, Isometry3};

    use super::*;
    use crate::chain::{ChainJoint, JointLimits, MovableKind, SpatialInertia};

    fn pendulum(mass: f64) -> KinematicChain {
        KinematicChain::new(
            "base",
            "link",
            vec![ChainJoint {
                name: "j".into(),
                kind: MovableKind::Revolute,
                parent_to_joint: Isometry3::identity(),
                axis: Vector3::z(),
                inertia: SpatialInertia::point_mass(mass, Vector3::x()),
                limits: JointLimits::unbounded(),
            }],
        )
    }

    #[test]
    fn balanced_pendulum_stays_put() {
        let qdd = forward_dynamics(
            &pendulum(1.0),
            &Vector3::new(0.0, -9.81, 0.0),
            &dvector![0.0],
            &dvector![0.0],
            &dvector![9.81],
        )
        .unwrap();
        assert!(qdd[0].abs() < 1e-12);
    }

    #[test]
    fn zero_mass_is_singular() {
        let err = forward_dynamics(
            &pendulum(0.0),
            &Vector3::zeros(),
            &dvector![0.0],
            &dvector![0.0],
            &dvector![1.0],
        )
        .unwrap_err();
        assert_eq!(err, DynamicsError::SingularInertia);
    }
}
