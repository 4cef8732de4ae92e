//! Gravity-induced wave-function reduction of a Gaussian packet in Bohmian
//! mechanics.
//!
//! The crate covers the self-gravity of a spherical Gaussian packet, the
//! averaged quantum and gravitational accelerations, the critical width and
//! mass that balance them, Bohmian fall trajectories, two routes to the
//! reduction time, reduction temperatures, and a radial Schrödinger–Newton
//! solver.

pub mod criteria;
pub mod ensemble;
pub mod error;
pub mod frames;
pub mod ode;
pub mod potentials;
pub mod quadrature;
pub mod reduction;
pub mod sn;
pub mod solve;
pub mod thermo;
pub mod trajectories;
pub mod units;
pub mod vec3;
pub mod wavepacket;

pub use error::{Error, Result};
pub use units::{PrefactorMode, UnitKind, UnitSystem};
pub use vec3::Vec3;
pub use wavepacket::ParticleSpec;
