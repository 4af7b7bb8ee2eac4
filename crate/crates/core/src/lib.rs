//! Deltoid-tangent polynomial family `P_d(x, y, μ)`: construction, the
//! operator `L₂`, Milnor-algebra invariants of the related curves, critical
//! points, Hamiltonian and gradient flows, bifurcations and SVG rendering.

pub mod angle;
pub mod bifurcation;
pub mod critical;
pub mod error;
pub mod family;
pub mod flow;
pub mod milnor;
pub mod operator;
pub mod render;

pub use angle::Angle;
pub use error::{CoreError, Result};
