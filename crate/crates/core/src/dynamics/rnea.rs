use nalgebra::{DMatrix, DVector, Matrix3, Vector3};

use super::{
    check_gravity, check_vector, DynamicComponents, DynamicsError, JointState, ASYMMETRY_TOLERANCE,
};
use crate::chain::{ChainJoint, KinematicChain, MovableKind};

/// Motion of one joint frame, expressed in that frame.
#[derive(Debug, Clone)]
pub(super) struct FrameMotion {
    /// Rotation taking this frame's coordinates to the predecessor's.
    pub rotation: Matrix3<f64>,
    /// Origin of this frame in predecessor coordinates.
    pub offset: Vector3<f64>,
    pub omega: Vector3<f64>,
    pub alpha: Vector3<f64>,
    /// Linear acceleration of the frame origin.
    pub accel: Vector3<f64>,
}

/// Outward recursion. Gravity enters as the base acceleration `-g`.
pub(super) fn propagate(
    chain: &KinematicChain,
    gravity: &Vector3<f64>,
    q: &DVector<f64>,
    qd: &DVector<f64>,
    qdd: &DVector<f64>,
) -> Vec<FrameMotion> {
    let mut omega = Vector3::zeros();
    let mut alpha = Vector3::zeros();
    let mut accel = -gravity;
    let mut frames = Vec::with_capacity(chain.dof());
    for (i, joint) in chain.joints().iter().enumerate() {
        let pose = joint.transform(q[i]);
        let rotation = pose.rotation.to_rotation_matrix().into_inner();
        let offset = pose.translation.vector;
        let rt = rotation.transpose();

        let origin_accel = accel + alpha.cross(&offset) + omega.cross(&omega.cross(&offset));
        let omega_in = rt * omega;
        let alpha_in = rt * alpha;
        let accel_in = rt * origin_accel;
        let z = joint.axis;
        (omega, alpha, accel) = match joint.kind {
            MovableKind::Revolute => (
                omega_in + z * qd[i],
                alpha_in + z * qdd[i] + omega_in.cross(&(z * qd[i])),
                accel_in,
            ),
            MovableKind::Prismatic => (
                omega_in,
                alpha_in,
                accel_in + omega_in.cross(&(z * qd[i])) * 2.0 + z * qdd[i],
            ),
        };
        frames.push(FrameMotion {
            rotation,
            offset,
            omega,
            alpha,
            accel,
        });
    }
    frames
}

/// Joint-space projection of the wrench transmitted through a joint.
pub(super) fn project(joint: &ChainJoint, force: &Vector3<f64>, moment: &Vector3<f64>) -> f64 {
    match joint.kind {
        MovableKind::Revolute => joint.axis.dot(moment),
        MovableKind::Prismatic => joint.axis.dot(force),
    }
}

fn newton_euler(
    chain: &KinematicChain,
    gravity: &Vector3<f64>,
    q: &DVector<f64>,
    qd: &DVector<f64>,
    qdd: &DVector<f64>,
) -> DVector<f64> {
    let frames = propagate(chain, gravity, q, qd, qdd);
    let dof = chain.dof();
    let mut tau = DVector::zeros(dof);
    // Wrench exerted on body i+1 by body i, in frame i+1, moment about its origin.
    let mut force = Vector3::zeros();
    let mut moment = Vector3::zeros();
    for i in (0..dof).rev() {
        let joint = &chain.joints()[i];
        let frame = &frames[i];
        let body = &joint.inertia;
        let c = body.com();
        let inertia = body.inertia();

        let com_accel =
            frame.accel + frame.alpha.cross(c) + frame.omega.cross(&frame.omega.cross(c));
        let body_force = com_accel * body.mass();
        let body_moment = inertia * frame.alpha + frame.omega.cross(&(inertia * frame.omega));

        let (child_force, child_moment) = match frames.get(i + 1) {
            Some(next) => {
                let f = next.rotation * force;
                (f, next.rotation * moment + next.offset.cross(&f))
            }
            None => (Vector3::zeros(), Vector3::zeros()),
        };
        force = body_force + child_force;
        moment = body_moment + c.cross(&body_force) + child_moment;
        tau[i] = project(joint, &force, &moment);
    }
    tau
}

/// Joint torques `τ = H·q̈ + C·q̇ + g` for the given state, friction excluded.
pub fn rnea(
    chain: &KinematicChain,
    gravity: &Vector3<f64>,
    state: &JointState,
) -> Result<DVector<f64>, DynamicsError> {
    state.check(chain.dof())?;
    check_gravity(gravity)?;
    Ok(newton_euler(
        chain, gravity, &state.q, &state.qd, &state.qdd,
    ))
}

/// Gravity torques `g(q)`.
pub fn gravity_vector(
    chain: &KinematicChain,
    gravity: &Vector3<f64>,
    q: &DVector<f64>,
) -> Result<DVector<f64>, DynamicsError> {
    check_vector("q", q, chain.dof())?;
    check_gravity(gravity)?;
    let zero = DVector::zeros(chain.dof());
    Ok(newton_euler(chain, gravity, q, &zero, &zero))
}

/// Coriolis and centrifugal torques `C(q, q̇)·q̇`.
pub fn coriolis_vector(
    chain: &KinematicChain,
    q: &DVector<f64>,
    qd: &DVector<f64>,
) -> Result<DVector<f64>, DynamicsError> {
    check_vector("q", q, chain.dof())?;
    check_vector("qd", qd, chain.dof())?;
    let zero = DVector::zeros(chain.dof());
    Ok(newton_euler(chain, &Vector3::zeros(), q, qd, &zero))
}

/// Joint-space inertia matrix `H(q)`, one Newton–Euler pass per column.
pub fn inertia_matrix(
    chain: &KinematicChain,
    q: &DVector<f64>,
) -> Result<DMatrix<f64>, DynamicsError> {
    let dof = chain.dof();
    check_vector("q", q, dof)?;
    let zero = DVector::zeros(dof);
    let mut h = DMatrix::zeros(dof, dof);
    for j in 0..dof {
        let mut unit = DVector::zeros(dof);
        unit[j] = 1.0;
        h.set_column(j, &newton_euler(chain, &Vector3::zeros(), q, &zero, &unit));
    }
    let asymmetry = (&h - h.transpose()).norm();
    let scale = h.norm();
    if asymmetry > ASYMMETRY_TOLERANCE * scale {
        return Err(DynamicsError::Asymmetry {
            relative: asymmetry / scale,
        });
    }
    Ok((&h + h.transpose()) * 0.5)
}

/// `(H, C·q̇, g)` at `(q, q̇)`.
pub fn dynamic_components(
    chain: &KinematicChain,
    gravity: &Vector3<f64>,
    q: &DVector<f64>,
    qd: &DVector<f64>,
) -> Result<DynamicComponents, DynamicsError> {
    Ok(DynamicComponents {
        inertia: inertia_matrix(chain, q)?,
        coriolis: coriolis_vector(chain, q, qd)?,
        gravity: gravity_vector(chain, gravity, q)?,
    })
}
