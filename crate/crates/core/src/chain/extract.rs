use nalgebra::{DVector, Isometry3, Translation3, Unit, UnitQuaternion, Vector3};

use super::{ChainError, Diagnostic, JointKind, JointLimits, RobotModel, Severity, SpatialInertia};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MovableKind {
    Revolute,
    Prismatic,
}

/// One movable joint of a chain together with the composite body it moves.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainJoint {
    pub name: String,
    pub kind: MovableKind,
    /// Pose of the joint frame at zero displacement, in the frame moved by
    /// the previous joint (the root link frame for the first joint).
    pub parent_to_joint: Isometry3<f64>,
    /// Unit axis in the joint frame.
    pub axis: Vector3<f64>,
    /// Composite inertia of every body rigidly moved by this joint, in the
    /// joint frame.
    pub inertia: SpatialInertia,
    pub limits: JointLimits,
}

impl ChainJoint {
    /// Pose of the moved frame in the predecessor frame at displacement `q`.
    pub fn transform(&self, q: f64) -> Isometry3<f64> {
        let motion = match self.kind {
            MovableKind::Revolute => Isometry3::from_parts(
                Translation3::identity(),
                UnitQuaternion::from_axis_angle(&Unit::new_unchecked(self.axis), q),
            ),
            MovableKind::Prismatic => Isometry3::from_parts(
                Translation3::from(self.axis * q),
                UnitQuaternion::identity(),
            ),
        };
        self.parent_to_joint * motion
    }
}

/// A rooted serial chain of movable joints, ordered from root to tip.
#[derive(Debug, Clone, PartialEq)]
pub struct KinematicChain {
    root_link: String,
    tip_link: String,
    joints: Vec<ChainJoint>,
}

impl KinematicChain {
    pub fn new(
        root_link: impl Into<String>,
        tip_link: impl Into<String>,
        joints: Vec<ChainJoint>,
    ) -> Self {
        Self {
            root_link: root_link.into(),
            tip_link: tip_link.into(),
            joints,
        }
    }

    pub fn dof(&self) -> usize {
        self.joints.len()
    }

    pub fn joints(&self) -> &[ChainJoint] {
        &self.joints
    }

    pub fn root_link(&self) -> &str {
        &self.root_link
    }

    pub fn tip_link(&self) -> &str {
        &self.tip_link
    }

    pub fn total_mass(&self) -> f64 {
        self.joints.iter().map(|j| j.inertia.mass()).sum()
    }

    /// Poses of each joint's moved frame in the root frame.
    pub fn forward_kinematics(&self, q: &[f64]) -> Vec<Isometry3<f64>> {
        let mut pose = Isometry3::identity();
        self.joints
            .iter()
            .zip(q)
            .map(|(joint, &qi)| {
                pose *= joint.transform(qi);
                pose
            })
            .collect()
    }

    /// Stacked inertial parameters of all moved bodies, ten per joint, about
    /// each joint frame origin.
    pub fn inertial_parameters(&self) -> DVector<f64> {
        DVector::from_iterator(
            10 * self.dof(),
            self.joints.iter().flat_map(|j| j.inertia.parameters()),
        )
    }

    /// Copy of the chain whose root frame is mounted at `base` in a new
    /// reference frame.
    pub fn mounted(&self, base: &Isometry3<f64>) -> Self {
        let mut chain = self.clone();
        if let Some(first) = chain.joints.first_mut() {
            first.parent_to_joint = base * first.parent_to_joint;
        }
        chain
    }
}

/// Extracts the chain between `root` and `tip`, logging any warnings.
pub fn extract_chain(
    model: &RobotModel,
    root: &str,
    tip: &str,
) -> Result<KinematicChain, ChainError> {
    let (chain, diagnostics) = extract_chain_with_diagnostics(model, root, tip)?;
    for d in &diagnostics {
        log::warn!("{d}");
    }
    Ok(chain)
}

/// Extracts the chain between `root` and `tip`.
///
/// Fixed joints on the path, and bodies hanging off it through fixed joints,
/// are fused into the composite inertia of the nearest preceding movable
/// joint. Branches attached through movable joints are dropped and reported
/// as warnings.
pub fn extract_chain_with_diagnostics(
    model: &RobotModel,
    root: &str,
    tip: &str,
) -> Result<(KinematicChain, Vec<Diagnostic>), ChainError> {
    for link in [root, tip] {
        if model.link(link).is_none() {
            return Err(ChainError::Model(format!("unknown link '{link}'")));
        }
    }
    if root == tip {
        return Err(ChainError::EmptyChain {
            root: root.into(),
            tip: tip.into(),
        });
    }

    let mut path = Vec::new();
    let mut cur = tip;
    while cur != root {
        let Some(joint) = model.parent_joint(cur) else {
            return Err(ChainError::Model(format!(
                "link '{tip}' is not a descendant of '{root}'"
            )));
        };
        path.push(joint);
        cur = &joint.parent;
    }
    path.reverse();

    let mut diagnostics = Vec::new();
    let mut joints: Vec<ChainJoint> = Vec::new();
    // Pose of the current link in the frame of the body being accumulated.
    let mut pending = Isometry3::identity();

    for (idx, joint) in path.iter().enumerate() {
        let link = &joint.parent;
        let next_on_path = Some(joint.name.as_str());
        let owner = joints.last_mut().map(|j| &mut j.inertia);
        attach_branches(model, link, next_on_path, &pending, owner, &mut diagnostics);

        pending *= joint.origin.isometry();
        match joint.kind {
            JointKind::Fixed => {}
            JointKind::Revolute | JointKind::Prismatic => {
                joints.push(ChainJoint {
                    name: joint.name.clone(),
                    kind: if joint.kind == JointKind::Revolute {
                        MovableKind::Revolute
                    } else {
                        MovableKind::Prismatic
                    },
                    parent_to_joint: pending,
                    axis: joint.axis,
                    inertia: SpatialInertia::zero(),
                    limits: joint.limits,
                });
                pending = Isometry3::identity();
            }
        }
        if idx + 1 == path.len() {
            let owner = joints.last_mut().map(|j| &mut j.inertia);
            attach_branches(model, &joint.child, None, &pending, owner, &mut diagnostics);
        }
    }

    if joints.is_empty() {
        return Err(ChainError::EmptyChain {
            root: root.into(),
            tip: tip.into(),
        });
    }
    Ok((KinematicChain::new(root, tip, joints), diagnostics))
}

/// Adds `link`'s own inertia to `owner`, then recursively every body attached
/// to it through fixed joints other than `skip`. Links upstream of the first
/// movable joint have no owner; their inertia belongs to the fixed base.
fn attach_branches(
    model: &RobotModel,
    link: &str,
    skip: Option<&str>,
    pose: &Isometry3<f64>,
    mut owner: Option<&mut SpatialInertia>,
    diagnostics: &mut Vec<Diagnostic>,
) {
    if let Some(body) = owner.as_deref_mut() {
        let spec = model.link(link).expect("model links are validated");
        *body = body.combined(&spec.inertial.transformed(pose));
    }
    for joint in model.child_joints(link) {
        if Some(joint.name.as_str()) == skip {
            continue;
        }
        if joint.kind.is_movable() {
            diagnostics.push(Diagnostic::new(
                Severity::Warning,
                &joint.name,
                format!(
                    "branch through movable joint to '{}' is not part of the chain",
                    joint.child
                ),
            ));
            continue;
        }
        let child_pose = pose * joint.origin.isometry();
        attach_branches(
            model,
            &joint.child,
            None,
            &child_pose,
            owner.as_deref_mut(),
            diagnostics,
        );
    }
}
