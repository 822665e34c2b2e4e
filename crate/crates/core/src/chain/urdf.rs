//! Reader and writer for the URDF subset used by the solvers.
//!
//! Supported: `<link>` with `<inertial>` (origin, mass, inertia) and `<joint>`
//! of type revolute, continuous, prismatic or fixed with origin, axis and
//! limit. Every other element is skipped.

use std::fmt::Write as _;

use nalgebra::{Matrix3, Vector3};
use roxmltree::{Document, Node};

use super::{
    ChainError, Diagnostic, JointKind, JointLimits, JointSpec, LinkSpec, Origin, RobotModel,
    Severity, SpatialInertia,
};

/// Pre-normalization axis norms further than this from 1 are reported.
pub const AXIS_NORM_WARNING: f64 = 1e-6;

/// Parses URDF text into a [`RobotModel`]. Warnings are logged.
pub fn parse_urdf(xml: &str) -> Result<RobotModel, ChainError> {
    let (model, diagnostics) = parse_urdf_with_diagnostics(xml)?;
    for d in &diagnostics {
        log::warn!("{d}");
    }
    Ok(model)
}

/// Parses URDF text, returning the model and any non-fatal diagnostics.
pub fn parse_urdf_with_diagnostics(xml: &str) -> Result<(RobotModel, Vec<Diagnostic>), ChainError> {
    let doc = Document::parse(xml).map_err(|e| {
        let pos = e.pos();
        ChainError::Parse {
            line: pos.row,
            column: pos.col,
            message: e.to_string(),
        }
    })?;
    let parser = Parser { doc: &doc };
    let robot = doc.root_element();
    if robot.tag_name().name() != "robot" {
        return Err(parser.error(
            robot,
            format!(
                "expected <robot> root element, found <{}>",
                robot.tag_name().name()
            ),
        ));
    }
    let name = robot.attribute("name").unwrap_or_default().to_string();

    let mut links = Vec::new();
    let mut joints = Vec::new();
    let mut diagnostics = Vec::new();
    for node in robot.children().filter(Node::is_element) {
        match node.tag_name().name() {
            "link" => links.push(parser.link(node)?),
            "joint" => {
                let (joint, raw_norm) = parser.joint(node)?;
                if joint.kind.is_movable() && (raw_norm - 1.0).abs() > AXIS_NORM_WARNING {
                    diagnostics.push(Diagnostic::new(
                        Severity::Warning,
                        &joint.name,
                        format!("axis norm {raw_norm} normalized to 1"),
                    ));
                }
                joints.push(joint);
            }
            _ => {}
        }
    }
    Ok((RobotModel::new(name, links, joints)?, diagnostics))
}

struct Parser<'a, 'input> {
    doc: &'a Document<'input>,
}

impl Parser<'_, '_> {
    fn error(&self, node: Node, message: impl Into<String>) -> ChainError {
        let pos = self.doc.text_pos_at(node.range().start);
        ChainError::Parse {
            line: pos.row,
            column: pos.col,
            message: message.into(),
        }
    }

    fn required<'n>(&self, node: Node<'n, '_>, attr: &str) -> Result<&'n str, ChainError> {
        node.attribute(attr).ok_or_else(|| {
            self.error(
                node,
                format!("<{}> is missing attribute '{attr}'", node.tag_name().name()),
            )
        })
    }

    fn number(&self, node: Node, attr: &str, default: Option<f64>) -> Result<f64, ChainError> {
        match (node.attribute(attr), default) {
            (Some(text), _) => text.trim().parse().map_err(|_| {
                self.error(
                    node,
                    format!("attribute '{attr}' is not a number: '{text}'"),
                )
            }),
            (None, Some(v)) => Ok(v),
            (None, None) => Err(self.error(
                node,
                format!("<{}> is missing attribute '{attr}'", node.tag_name().name()),
            )),
        }
    }

    fn vector(
        &self,
        node: Node,
        attr: &str,
        default: Vector3<f64>,
    ) -> Result<Vector3<f64>, ChainError> {
        let Some(text) = node.attribute(attr) else {
            return Ok(default);
        };
        let values = text
            .split_whitespace()
            .map(str::parse::<f64>)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| {
                self.error(
                    node,
                    format!("attribute '{attr}' is not a number list: '{text}'"),
                )
            })?;
        match values.as_slice() {
            [x, y, z] => Ok(Vector3::new(*x, *y, *z)),
            _ => Err(self.error(
                node,
                format!("attribute '{attr}' needs 3 values, got {}", values.len()),
            )),
        }
    }

    fn origin(&self, parent: Node) -> Result<Origin, ChainError> {
        match child(parent, "origin") {
            Some(node) => Ok(Origin::new(
                self.vector(node, "xyz", Vector3::zeros())?,
                self.vector(node, "rpy", Vector3::zeros())?,
            )),
            None => Ok(Origin::default()),
        }
    }

    fn link(&self, node: Node) -> Result<LinkSpec, ChainError> {
        let name = self.required(node, "name")?;
        let Some(inertial) = child(node, "inertial") else {
            return Ok(LinkSpec::massless(name));
        };
        let origin = self.origin(inertial)?;
        let mass = match child(inertial, "mass") {
            Some(m) => self.number(m, "value", None)?,
            None => 0.0,
        };
        let tensor = match child(inertial, "inertia") {
            Some(i) => {
                let get = |attr| self.number(i, attr, Some(0.0));
                let (ixx, ixy, ixz) = (get("ixx")?, get("ixy")?, get("ixz")?);
                let (iyy, iyz, izz) = (get("iyy")?, get("iyz")?, get("izz")?);
                Matrix3::new(ixx, ixy, ixz, ixy, iyy, iyz, ixz, iyz, izz)
            }
            None => Matrix3::zeros(),
        };
        // The inertial frame sits at the COM; only its orientation needs undoing.
        let tensor = if origin.rpy == Vector3::zeros() {
            tensor
        } else {
            let r = origin.rotation().to_rotation_matrix().into_inner();
            r * tensor * r.transpose()
        };
        let inertia = SpatialInertia::new(mass, origin.xyz, tensor);
        inertia
            .check()
            .map_err(|msg| self.error(inertial, format!("link '{name}': {msg}")))?;
        Ok(LinkSpec::new(name, inertia))
    }

    fn joint(&self, node: Node) -> Result<(JointSpec, f64), ChainError> {
        let name = self.required(node, "name")?.to_string();
        let type_name = self.required(node, "type")?;
        let kind = match type_name {
            "revolute" | "continuous" => JointKind::Revolute,
            "prismatic" => JointKind::Prismatic,
            "fixed" => JointKind::Fixed,
            other => {
                return Err(ChainError::UnsupportedJoint {
                    joint: name,
                    kind: other.to_string(),
                })
            }
        };
        let link_ref = |tag: &str| -> Result<String, ChainError> {
            let n = child(node, tag)
                .ok_or_else(|| self.error(node, format!("joint '{name}' has no <{tag}>")))?;
            Ok(self.required(n, "link")?.to_string())
        };
        let parent = link_ref("parent")?;
        let child_link = link_ref("child")?;
        let origin = self.origin(node)?;
        let axis = match child(node, "axis") {
            Some(a) => self.vector(a, "xyz", Vector3::x())?,
            None => Vector3::x(),
        };
        let mut limits = JointLimits::unbounded();
        if let Some(l) = child(node, "limit") {
            limits.lower = self.number(l, "lower", Some(0.0))?;
            limits.upper = self.number(l, "upper", Some(0.0))?;
            limits.velocity = self.number(l, "velocity", Some(f64::INFINITY))?;
            limits.effort = self.number(l, "effort", Some(f64::INFINITY))?;
        }
        if type_name == "continuous" {
            limits.lower = f64::NEG_INFINITY;
            limits.upper = f64::INFINITY;
        }
        let raw_norm = axis.norm();
        Ok((
            JointSpec {
                name,
                parent,
                child: child_link,
                kind,
                origin,
                axis,
                limits,
            },
            raw_norm,
        ))
    }
}

fn child<'a, 'input>(node: Node<'a, 'input>, tag: &str) -> Option<Node<'a, 'input>> {
    node.children()
        .find(|c| c.is_element() && c.tag_name().name() == tag)
}

/// Serializes a model to URDF. [`parse_urdf`] on the output reproduces the
/// model exactly.
pub fn write_urdf(model: &RobotModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0"?>"#);
    let _ = writeln!(out, r#"<robot name="{}">"#, escape(model.name()));
    for link in model.links() {
        let i = link.inertial.inertia();
        let c = link.inertial.com();
        let _ = writeln!(out, r#"  <link name="{}">"#, escape(&link.name));
        let _ = writeln!(out, "    <inertial>");
        let _ = writeln!(
            out,
            r#"      <origin xyz="{} {} {}" rpy="0 0 0"/>"#,
            c.x, c.y, c.z
        );
        let _ = writeln!(out, r#"      <mass value="{}"/>"#, link.inertial.mass());
        let _ = writeln!(
            out,
            r#"      <inertia ixx="{}" ixy="{}" ixz="{}" iyy="{}" iyz="{}" izz="{}"/>"#,
            i[(0, 0)],
            i[(0, 1)],
            i[(0, 2)],
            i[(1, 1)],
            i[(1, 2)],
            i[(2, 2)]
        );
        let _ = writeln!(out, "    </inertial>");
        let _ = writeln!(out, "  </link>");
    }
    for joint in model.joints() {
        let kind = match joint.kind {
            JointKind::Revolute
                if joint.limits.lower == f64::NEG_INFINITY
                    && joint.limits.upper == f64::INFINITY =>
            {
                "continuous"
            }
            JointKind::Revolute => "revolute",
            JointKind::Prismatic => "prismatic",
            JointKind::Fixed => "fixed",
        };
        let (o, r, a, l) = (
            &joint.origin.xyz,
            &joint.origin.rpy,
            &joint.axis,
            &joint.limits,
        );
        let _ = writeln!(
            out,
            r#"  <joint name="{}" type="{kind}">"#,
            escape(&joint.name)
        );
        let _ = writeln!(out, r#"    <parent link="{}"/>"#, escape(&joint.parent));
        let _ = writeln!(out, r#"    <child link="{}"/>"#, escape(&joint.child));
        let _ = writeln!(
            out,
            r#"    <origin xyz="{} {} {}" rpy="{} {} {}"/>"#,
            o.x, o.y, o.z, r.x, r.y, r.z
        );
        let _ = writeln!(out, r#"    <axis xyz="{} {} {}"/>"#, a.x, a.y, a.z);
        let _ = writeln!(
            out,
            r#"    <limit lower="{}" upper="{}" velocity="{}" effort="{}"/>"#,
            l.lower, l.upper, l.velocity, l.effort
        );
        let _ = writeln!(out, "  </joint>");
    }
    out.push_str("</robot>\n");
    out
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}
