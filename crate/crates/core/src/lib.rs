//! Inverse dynamics for fixed-base serial manipulators.
//!
//! Robot descriptions are read from URDF, reduced to a serial
//! [`KinematicChain`](chain::KinematicChain), and evaluated with the recursive
//! Newton–Euler algorithm. Solvers implementing
//! [`InverseDynamicsSolver`](solver::InverseDynamicsSolver) are created by
//! name from a [`SolverRegistry`](solver::SolverRegistry), so callers stay
//! independent of the concrete robot model in use.

pub mod chain;
pub mod dynamics;
pub mod friction;
pub mod solver;
pub mod trajectory;
