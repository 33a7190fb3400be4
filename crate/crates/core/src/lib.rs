//! Periodic particle arrangements from superposed standing acoustic plane waves.
//!
//! A small particle in a standing wave field drifts towards the minima of the
//! acoustic radiation potential `ψ = a|p|² − b|∇p|²`. For a superposition of
//! `d` counter-propagating plane-wave pairs the potential is a quadratic form
//! `u* Q(x) u` in the complex amplitudes `u`, and a spatial shift is a unitary
//! similarity of `Q`. The spectrum of the real symmetric `Q(0)` therefore
//! bounds `ψ` everywhere, and its eigenspaces determine where the level sets
//! at eigenvalue levels lie: isolated point lattices, line families, plane
//! families or lattice subspaces.
//!
//! Modules:
//!
//! - [`wavefield`]: physical coefficients, `K`/`A` geometry, pressure field
//! - [`potential`]: `M(x)`, `Q(x)`, `ψ`, shift phases and retargeting
//! - [`spectral`]: Jacobi solver and the structured decomposition of `Q(0)`
//! - [`levelsets`]: sign-flip sets and classification of level sets
//! - [`bravais`]: catalog of achievable Bravais classes and lattice design
//! - [`sampler`]: grid sampling, numeric minima and verification reports
//! - [`dynamics`]: overdamped relaxation of particles under `−∇ψ`
//! - [`cli`]: configuration files and the command pipeline

pub mod bravais;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod levelsets;
pub mod potential;
pub mod sampler;
pub mod spectral;
pub mod wavefield;

pub use error::{Error, Result};
pub use wavefield::{Coefficients, TransducerVector, WaveConfig};
