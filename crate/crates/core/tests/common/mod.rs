//! Shared fixtures and independent closed-form oracles for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use dynsolve::chain::{
    extract_chain, parse_urdf, ChainJoint, JointKind, JointLimits, JointSpec, KinematicChain,
    LinkSpec, MovableKind, Origin, RobotModel, SpatialInertia,
};
use nalgebra::{
    DMatrix, DVector, Isometry3, Matrix3, Rotation3, Translation3, Unit, UnitQuaternion, Vector3,
};
use rand::{Rng, RngExt};

pub const G0: f64 = 9.81;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data_path(name)).unwrap()
}

pub fn earth_y() -> Vector3<f64> {
    Vector3::new(0.0, -G0, 0.0)
}

pub fn pendulum_chain() -> KinematicChain {
    extract_chain(
        &parse_urdf(&read_data("pendulum.urdf")).unwrap(),
        "base_link",
        "link1",
    )
    .unwrap()
}

pub fn two_link_chain() -> KinematicChain {
    extract_chain(
        &parse_urdf(&read_data("two_link.urdf")).unwrap(),
        "base_link",
        "link2",
    )
    .unwrap()
}

pub fn arm6_chain() -> KinematicChain {
    extract_chain(
        &parse_urdf(&read_data("arm6_tool.urdf")).unwrap(),
        "base_link",
        "tool0",
    )
    .unwrap()
}

/// Lagrangian model of a point-mass pendulum about z under gravity `(0, -g0, 0)`:
/// `τ = m·g0·l·cos q + m·l²·q̈`.
pub fn pendulum_oracle(mass: f64, length: f64, g0: f64, q: f64, qdd: f64) -> f64 {
    mass * g0 * length * q.cos() + mass * length * length * qdd
}

/// Closed-form planar two-link arm with point masses at the distal ends,
/// gravity `(0, -g0, 0)`. Returns `(H, c, g)`.
pub struct TwoLinkOracle {
    pub m1: f64,
    pub m2: f64,
    pub l1: f64,
    pub l2: f64,
    pub g0: f64,
}

impl TwoLinkOracle {
    pub fn unit() -> Self {
        Self {
            m1: 1.0,
            m2: 1.0,
            l1: 1.0,
            l2: 1.0,
            g0: G0,
        }
    }

    pub fn inertia(&self, q: [f64; 2]) -> [[f64; 2]; 2] {
        let Self { m1, m2, l1, l2, .. } = *self;
        let c2 = q[1].cos();
        let h11 = m1 * l1 * l1 + m2 * (l1 * l1 + l2 * l2 + 2.0 * l1 * l2 * c2);
        let h12 = m2 * (l2 * l2 + l1 * l2 * c2);
        let h22 = m2 * l2 * l2;
        [[h11, h12], [h12, h22]]
    }

    pub fn coriolis(&self, q: [f64; 2], qd: [f64; 2]) -> [f64; 2] {
        let k = self.m2 * self.l1 * self.l2 * q[1].sin();
        [
            -k * (2.0 * qd[0] * qd[1] + qd[1] * qd[1]),
            k * qd[0] * qd[0],
        ]
    }

    pub fn gravity(&self, q: [f64; 2]) -> [f64; 2] {
        let Self { m1, m2, l1, l2, g0 } = *self;
        let c1 = q[0].cos();
        let c12 = (q[0] + q[1]).cos();
        [
            (m1 + m2) * g0 * l1 * c1 + m2 * g0 * l2 * c12,
            m2 * g0 * l2 * c12,
        ]
    }

    pub fn torque(&self, q: [f64; 2], qd: [f64; 2], qdd: [f64; 2]) -> [f64; 2] {
        let h = self.inertia(q);
        let c = self.coriolis(q, qd);
        let g = self.gravity(q);
        [
            h[0][0] * qdd[0] + h[0][1] * qdd[1] + c[0] + g[0],
            h[1][0] * qdd[0] + h[1][1] * qdd[1] + c[1] + g[1],
        ]
    }
}

pub fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

pub fn random_vector(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> DVector<f64> {
    DVector::from_fn(n, |_, _| uniform(rng, lo, hi))
}

pub fn random_unit(rng: &mut impl Rng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            uniform(rng, -1.0, 1.0),
            uniform(rng, -1.0, 1.0),
            uniform(rng, -1.0, 1.0),
        );
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

pub fn random_rotation(rng: &mut impl Rng) -> UnitQuaternion<f64> {
    UnitQuaternion::from_euler_angles(
        uniform(rng, -3.1, 3.1),
        uniform(rng, -1.5, 1.5),
        uniform(rng, -3.1, 3.1),
    )
}

/// Body with mass in [0.2, 3] kg and a positive-definite rotational inertia.
pub fn random_body(rng: &mut impl Rng) -> SpatialInertia {
    let principal = Vector3::new(
        uniform(rng, 0.01, 0.2),
        uniform(rng, 0.01, 0.2),
        uniform(rng, 0.01, 0.2),
    );
    let r = Rotation3::from(random_rotation(rng)).into_inner();
    SpatialInertia::new(
        uniform(rng, 0.2, 3.0),
        Vector3::new(
            uniform(rng, -0.3, 0.3),
            uniform(rng, -0.3, 0.3),
            uniform(rng, -0.3, 0.3),
        ),
        r * Matrix3::from_diagonal(&principal) * r.transpose(),
    )
}

/// Random serial chain; a third of the joints are prismatic when allowed.
pub fn random_chain(rng: &mut impl Rng, dof: usize, allow_prismatic: bool) -> KinematicChain {
    let joints = (0..dof)
        .map(|i| ChainJoint {
            name: format!("j{i}"),
            kind: if allow_prismatic && rng.random_range(0..3) == 0 {
                MovableKind::Prismatic
            } else {
                MovableKind::Revolute
            },
            parent_to_joint: Isometry3::from_parts(
                Translation3::new(
                    uniform(rng, -0.5, 0.5),
                    uniform(rng, -0.5, 0.5),
                    uniform(rng, -0.5, 0.5),
                ),
                random_rotation(rng),
            ),
            axis: random_unit(rng),
            inertia: random_body(rng),
            limits: JointLimits::unbounded(),
        })
        .collect();
    KinematicChain::new("base", format!("l{dof}"), joints)
}

/// Random tree of `links` links; each non-root link hangs off a random
/// earlier link through a fixed joint with probability 0.4.
pub fn random_tree(rng: &mut impl Rng, links: usize) -> RobotModel {
    let link_specs = (0..links)
        .map(|i| LinkSpec::new(format!("l{i}"), random_body(rng)))
        .collect();
    let joints = (1..links)
        .map(|i| {
            let parent = rng.random_range(0..i);
            let kind = match rng.random_range(0..10) {
                0..=3 => JointKind::Fixed,
                4..=7 => JointKind::Revolute,
                _ => JointKind::Prismatic,
            };
            let xyz = Vector3::new(
                uniform(rng, -0.5, 0.5),
                uniform(rng, -0.5, 0.5),
                uniform(rng, -0.5, 0.5),
            );
            let rpy = Vector3::new(
                uniform(rng, -3.0, 3.0),
                uniform(rng, -1.5, 1.5),
                uniform(rng, -3.0, 3.0),
            );
            JointSpec {
                name: format!("j{i}"),
                parent: format!("l{parent}"),
                child: format!("l{i}"),
                kind,
                origin: Origin::new(xyz, rpy),
                axis: random_unit(rng),
                limits: JointLimits {
                    lower: uniform(rng, -3.0, 0.0),
                    upper: uniform(rng, 0.0, 3.0),
                    velocity: uniform(rng, 0.5, 4.0),
                    effort: uniform(rng, 1.0, 100.0),
                },
            }
        })
        .collect();
    RobotModel::new("random", link_specs, joints).unwrap()
}

/// World poses of every link of `model`, with movable joint `j` displaced by
/// `q[j]` (missing entries are zero). Independent of chain extraction.
pub fn link_poses(
    model: &RobotModel,
    q: &BTreeMap<String, f64>,
) -> BTreeMap<String, Isometry3<f64>> {
    let mut poses = BTreeMap::new();
    let mut stack = vec![(model.root_link().to_string(), Isometry3::identity())];
    while let Some((link, pose)) = stack.pop() {
        for joint in model.child_joints(&link) {
            let qi = q.get(&joint.name).copied().unwrap_or(0.0);
            let motion = match joint.kind {
                JointKind::Fixed => Isometry3::identity(),
                JointKind::Revolute => Isometry3::from_parts(
                    Translation3::identity(),
                    UnitQuaternion::from_axis_angle(&Unit::new_normalize(joint.axis), qi),
                ),
                JointKind::Prismatic => {
                    Isometry3::translation(joint.axis.x * qi, joint.axis.y * qi, joint.axis.z * qi)
                }
            };
            stack.push((joint.child.clone(), pose * joint.origin.isometry() * motion));
        }
        poses.insert(link, pose);
    }
    poses
}

pub fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn matrix_from(rows: [[f64; 2]; 2]) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[rows[0][0], rows[0][1], rows[1][0], rows[1][1]])
}

/// One classical RK4 step of `ẋ = f(x)` on the stacked state `(q, q̇)`.
pub fn rk4_step<F>(
    q: &DVector<f64>,
    qd: &DVector<f64>,
    dt: f64,
    mut accel: F,
) -> (DVector<f64>, DVector<f64>)
where
    F: FnMut(&DVector<f64>, &DVector<f64>) -> DVector<f64>,
{
    let k1q = qd.clone();
    let k1v = accel(q, qd);
    let q2 = q + &k1q * (dt / 2.0);
    let v2 = qd + &k1v * (dt / 2.0);
    let k2q = v2.clone();
    let k2v = accel(&q2, &v2);
    let q3 = q + &k2q * (dt / 2.0);
    let v3 = qd + &k2v * (dt / 2.0);
    let k3q = v3.clone();
    let k3v = accel(&q3, &v3);
    let q4 = q + &k3q * dt;
    let v4 = qd + &k3v * dt;
    let k4q = v4.clone();
    let k4v = accel(&q4, &v4);
    (
        q + (k1q + k2q * 2.0 + k3q * 2.0 + k4q) * (dt / 6.0),
        qd + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (dt / 6.0),
    )
}

pub fn data_config(name: &str) -> dynsolve::solver::SolverConfig {
    dynsolve::solver::SolverConfig::from_file(&data_path(name)).unwrap()
}

/// Inline-URDF configuration for the pendulum fixture with gravity `(0, -g0, 0)`.
pub fn pendulum_config(plugin: &str) -> dynsolve::solver::SolverConfig {
    dynsolve::solver::SolverConfig::new(
        plugin,
        dynsolve::solver::RobotDescription::Urdf(read_data("pendulum.urdf")),
        "base_link",
        "link1",
        earth_y(),
    )
}
