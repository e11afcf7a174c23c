//! Free-propagation probability bounds for slit and momentum-filter wave packets.
//!
//! A particle prepared behind a slit of width `L`, or behind a momentum filter of
//! width `B`, or in an equal superposition of both, spreads ballistically. Classical
//! transport confines a particle that starts inside the slit with momentum inside the
//! filter to a known interval at any later time; quantum marginals make that interval
//! probability obey
//!
//! ```text
//! P(M) >= P(L) + P(B) - 1
//! ```
//!
//! while the actual evolved state can undercut the right-hand side by a finite defect.
//! This crate provides the closed-form state algebra ([`analytic`]), an exactly unitary
//! spectral propagator with grid planning and convergence control ([`spectral`]), the
//! inequality audit itself ([`audit`]), parameter sweeps and optimizers ([`sweep`]),
//! and a small CLI ([`cli`]).
//!
//! Everything runs in reduced units `hbar = m = L = 1` unless a [`model::PhysicalScale`]
//! says otherwise.

pub mod analytic;
pub mod audit;
pub mod cli;
pub mod error;
pub mod model;
pub mod specfun;
pub mod spectral;
pub mod sweep;

pub use error::{Error, Result};
