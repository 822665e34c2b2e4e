use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{Isometry3, Translation3, UnitQuaternion, Vector3};

use super::{ChainError, SpatialInertia};

/// Tolerance applied when deciding whether an axis is already unit length.
const UNIT_AXIS_SLACK: f64 = 4.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JointKind {
    Revolute,
    Prismatic,
    Fixed,
}

impl JointKind {
    pub fn is_movable(self) -> bool {
        !matches!(self, JointKind::Fixed)
    }
}

/// Rigid transform given as a translation and fixed-axis roll-pitch-yaw angles.
///
/// The rotation is `Rz(yaw)·Ry(pitch)·Rx(roll)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Origin {
    pub xyz: Vector3<f64>,
    pub rpy: Vector3<f64>,
}

impl Origin {
    pub fn new(xyz: Vector3<f64>, rpy: Vector3<f64>) -> Self {
        Self { xyz, rpy }
    }

    pub fn translation(xyz: Vector3<f64>) -> Self {
        Self {
            xyz,
            rpy: Vector3::zeros(),
        }
    }

    pub fn rotation(&self) -> UnitQuaternion<f64> {
        UnitQuaternion::from_euler_angles(self.rpy.x, self.rpy.y, self.rpy.z)
    }

    pub fn isometry(&self) -> Isometry3<f64> {
        Isometry3::from_parts(Translation3::from(self.xyz), self.rotation())
    }
}

/// Position, velocity and effort limits. Stored for reference only; dynamics
/// evaluation never enforces them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointLimits {
    pub lower: f64,
    pub upper: f64,
    pub velocity: f64,
    pub effort: f64,
}

impl JointLimits {
    pub fn unbounded() -> Self {
        Self {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
            velocity: f64::INFINITY,
            effort: f64::INFINITY,
        }
    }

    pub fn contains(&self, position: f64) -> bool {
        position >= self.lower && position <= self.upper
    }
}

impl Default for JointLimits {
    fn default() -> Self {
        Self::unbounded()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkSpec {
    pub name: String,
    pub inertial: SpatialInertia,
}

impl LinkSpec {
    pub fn new(name: impl Into<String>, inertial: SpatialInertia) -> Self {
        Self {
            name: name.into(),
            inertial,
        }
    }

    pub fn massless(name: impl Into<String>) -> Self {
        Self::new(name, SpatialInertia::zero())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointSpec {
    pub name: String,
    pub parent: String,
    pub child: String,
    pub kind: JointKind,
    /// Pose of the joint frame in the parent link frame.
    pub origin: Origin,
    /// Joint axis in the joint frame.
    pub axis: Vector3<f64>,
    pub limits: JointLimits,
}

/// A parsed robot description: links and joints forming a single rooted tree.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotModel {
    name: String,
    links: BTreeMap<String, LinkSpec>,
    joints: BTreeMap<String, JointSpec>,
    root: String,
}

impl RobotModel {
    /// Assembles a model, checking name uniqueness, link references, axis
    /// normalizability and the tree structure. Axes are normalized.
    pub fn new(
        name: impl Into<String>,
        links: Vec<LinkSpec>,
        joints: Vec<JointSpec>,
    ) -> Result<Self, ChainError> {
        let mut link_map = BTreeMap::new();
        for link in links {
            if link.inertial.mass() < 0.0 || !link.inertial.is_finite() {
                return Err(ChainError::Model(format!(
                    "link '{}' has invalid inertial data",
                    link.name
                )));
            }
            if let Some(prev) = link_map.insert(link.name.clone(), link) {
                return Err(ChainError::Model(format!("duplicate link '{}'", prev.name)));
            }
        }
        if link_map.is_empty() {
            return Err(ChainError::Model("model has no links".into()));
        }

        let mut joint_map = BTreeMap::new();
        let mut parent_of: BTreeMap<&str, &str> = BTreeMap::new();
        for mut joint in joints {
            for link in [&joint.parent, &joint.child] {
                if !link_map.contains_key(link) {
                    return Err(ChainError::Model(format!(
                        "joint '{}' references unknown link '{}'",
                        joint.name, link
                    )));
                }
            }
            joint.axis = normalized_axis(&joint)?;
            if joint_map.contains_key(&joint.name) {
                return Err(ChainError::Model(format!(
                    "duplicate joint '{}'",
                    joint.name
                )));
            }
            joint_map.insert(joint.name.clone(), joint);
        }
        for joint in joint_map.values() {
            if let Some(other) = parent_of.insert(&joint.child, &joint.name) {
                return Err(ChainError::Model(format!(
                    "link '{}' is the child of both '{}' and '{}'",
                    joint.child, other, joint.name
                )));
            }
        }

        let roots: Vec<&String> = link_map
            .keys()
            .filter(|l| !parent_of.contains_key(l.as_str()))
            .collect();
        let root = match roots.as_slice() {
            [single] => (*single).clone(),
            [] => return Err(ChainError::Model("link graph contains a cycle".into())),
            many => {
                return Err(ChainError::Model(format!(
                    "link graph has {} roots ({}); expected a single tree",
                    many.len(),
                    many.iter()
                        .map(|s| s.as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                )))
            }
        };

        // Every link must reach the root by following parents; otherwise it
        // sits on a cycle detached from the tree.
        for link in link_map.keys() {
            let mut seen = BTreeSet::new();
            let mut cur = link.as_str();
            while let Some(joint) = parent_of.get(cur) {
                if !seen.insert(cur) {
                    return Err(ChainError::Model(format!(
                        "link graph contains a cycle through '{link}'"
                    )));
                }
                cur = &joint_map[*joint].parent;
            }
            if cur != root {
                return Err(ChainError::Model(format!(
                    "link graph contains a cycle through '{link}'"
                )));
            }
        }

        Ok(Self {
            name: name.into(),
            links: link_map,
            joints: joint_map,
            root,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn links(&self) -> impl Iterator<Item = &LinkSpec> {
        self.links.values()
    }

    pub fn joints(&self) -> impl Iterator<Item = &JointSpec> {
        self.joints.values()
    }

    pub fn link(&self, name: &str) -> Option<&LinkSpec> {
        self.links.get(name)
    }

    pub fn joint(&self, name: &str) -> Option<&JointSpec> {
        self.joints.get(name)
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn joint_count(&self) -> usize {
        self.joints.len()
    }

    /// The unique link without a parent joint.
    pub fn root_link(&self) -> &str {
        &self.root
    }

    pub fn parent_joint(&self, link: &str) -> Option<&JointSpec> {
        self.joints.values().find(|j| j.child == link)
    }

    /// Joints whose parent is `link`, in name order.
    pub fn child_joints<'a>(&'a self, link: &'a str) -> impl Iterator<Item = &'a JointSpec> + 'a {
        self.joints.values().filter(move |j| j.parent == link)
    }
}

fn normalized_axis(joint: &JointSpec) -> Result<Vector3<f64>, ChainError> {
    let norm = joint.axis.norm();
    if joint.kind == JointKind::Fixed && (norm == 0.0 || !norm.is_finite()) {
        return Ok(joint.axis);
    }
    if !norm.is_finite() || norm == 0.0 {
        return Err(ChainError::Model(format!(
            "joint '{}' has a degenerate axis",
            joint.name
        )));
    }
    if (norm - 1.0).abs() <= UNIT_AXIS_SLACK {
        Ok(joint.axis)
    } else {
        Ok(joint.axis / norm)
    }
}
