use nalgebra::{Isometry3, Matrix3, Point3, SymmetricEigen, Vector3};

/// Lower bound on the eigenvalues of a physically consistent rotational inertia.
pub const EIGENVALUE_TOLERANCE: f64 = -1e-9;

/// Rigid-body inertia: mass, center of mass and rotational inertia about the COM,
/// all expressed in the owning body's frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialInertia {
    mass: f64,
    com: Vector3<f64>,
    inertia: Matrix3<f64>,
}

impl SpatialInertia {
    /// Builds an inertia, symmetrizing the rotational part.
    pub fn new(mass: f64, com: Vector3<f64>, inertia: Matrix3<f64>) -> Self {
        Self {
            mass,
            com,
            inertia: (inertia + inertia.transpose()) * 0.5,
        }
    }

    pub fn zero() -> Self {
        Self {
            mass: 0.0,
            com: Vector3::zeros(),
            inertia: Matrix3::zeros(),
        }
    }

    pub fn point_mass(mass: f64, com: Vector3<f64>) -> Self {
        Self::new(mass, com, Matrix3::zeros())
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn com(&self) -> &Vector3<f64> {
        &self.com
    }

    /// Rotational inertia about the center of mass.
    pub fn inertia(&self) -> &Matrix3<f64> {
        &self.inertia
    }

    /// `m·c`, the first moment of mass about the frame origin.
    pub fn first_moment(&self) -> Vector3<f64> {
        self.com * self.mass
    }

    /// Rotational inertia about the frame origin (parallel-axis theorem).
    pub fn inertia_about_origin(&self) -> Matrix3<f64> {
        self.inertia + parallel_axis(self.mass, &self.com)
    }

    /// The ten standard inertial parameters about the frame origin:
    /// `[m, m·cx, m·cy, m·cz, Ixx, Ixy, Ixz, Iyy, Iyz, Izz]`.
    pub fn parameters(&self) -> [f64; 10] {
        let h = self.first_moment();
        let i = self.inertia_about_origin();
        [
            self.mass,
            h.x,
            h.y,
            h.z,
            i[(0, 0)],
            i[(0, 1)],
            i[(0, 2)],
            i[(1, 1)],
            i[(1, 2)],
            i[(2, 2)],
        ]
    }

    /// Re-expresses this inertia in a parent frame, where `pose` maps body
    /// coordinates to parent coordinates.
    pub fn transformed(&self, pose: &Isometry3<f64>) -> Self {
        let rot = pose.rotation.to_rotation_matrix();
        let r = rot.matrix();
        Self {
            mass: self.mass,
            com: (pose * Point3::from(self.com)).coords,
            inertia: r * self.inertia * r.transpose(),
        }
    }

    /// Sum of two bodies expressed in the same frame.
    pub fn combined(&self, other: &Self) -> Self {
        let mass = self.mass + other.mass;
        if mass == 0.0 {
            return Self::new(0.0, Vector3::zeros(), self.inertia + other.inertia);
        }
        let com = (self.first_moment() + other.first_moment()) / mass;
        let shifted = |b: &Self| b.inertia + parallel_axis(b.mass, &(b.com - com));
        Self::new(mass, com, shifted(self) + shifted(other))
    }

    /// Smallest eigenvalue of the rotational inertia.
    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.inertia).eigenvalues.min()
    }

    pub fn is_finite(&self) -> bool {
        self.mass.is_finite()
            && self.com.iter().all(|v| v.is_finite())
            && self.inertia.iter().all(|v| v.is_finite())
    }

    /// Checks the physical-consistency invariants, returning a description of
    /// the first violation.
    pub fn check(&self) -> Result<(), String> {
        if !self.is_finite() {
            return Err("non-finite inertial value".into());
        }
        if self.mass < 0.0 {
            return Err(format!("negative mass {}", self.mass));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < EIGENVALUE_TOLERANCE {
            return Err(format!("inertia tensor has negative eigenvalue {min_eig}"));
        }
        Ok(())
    }
}

impl Default for SpatialInertia {
    fn default() -> Self {
        Self::zero()
    }
}

fn parallel_axis(mass: f64, d: &Vector3<f64>) -> Matrix3<f64> {
    (Matrix3::identity() * d.norm_squared() - d * d.transpose()) * mass
}
