use std::fmt;

use super::{KinematicChain, EIGENVALUE_TOLERANCE};

/// Allowed deviation of a chain axis from unit length.
pub const AXIS_UNIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    /// Name of the joint or link the finding concerns.
    pub subject: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(severity: Severity, subject: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            severity,
            subject: subject.into(),
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{level}: {}: {}", self.subject, self.message)
    }
}

/// Checks a chain for physically inconsistent or degenerate data.
///
/// Zero-mass bodies are legal but make the inertia matrix singular, so they
/// are flagged as warnings.
pub fn validate_chain(chain: &KinematicChain) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if chain.dof() == 0 {
        out.push(Diagnostic::new(
            Severity::Error,
            chain.tip_link(),
            "chain has no movable joints",
        ));
    }
    for joint in chain.joints() {
        let norm = joint.axis.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > AXIS_UNIT_TOLERANCE {
            out.push(Diagnostic::new(
                Severity::Error,
                &joint.name,
                format!("axis is not unit length (norm {norm})"),
            ));
        }
        let body = &joint.inertia;
        if !body.is_finite() {
            out.push(Diagnostic::new(
                Severity::Error,
                &joint.name,
                "non-finite inertial data",
            ));
            continue;
        }
        if body.mass() < 0.0 {
            out.push(Diagnostic::new(
                Severity::Error,
                &joint.name,
                format!("negative mass {}", body.mass()),
            ));
        } else if body.mass() == 0.0 {
            out.push(Diagnostic::new(
                Severity::Warning,
                &joint.name,
                "zero-mass body",
            ));
        }
        let min_eig = body.min_eigenvalue();
        if min_eig < EIGENVALUE_TOLERANCE {
            out.push(Diagnostic::new(
                Severity::Error,
                &joint.name,
                format!("inertia tensor has negative eigenvalue {min_eig}"),
            ));
        }
    }
    out
}
