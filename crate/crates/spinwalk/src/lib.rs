//! Exact state-vector simulation of a discrete-time quantum walk coupled to
//! spin-1/2 degrees of freedom on the edges of a 1D lattice.
//!
//! The walker's two-valued color both selects the hop direction and exchanges
//! with the local edge spin, so the one-step unitary U(J, θ) = V(J)·M·R(θ)
//! entangles distant spins through the particle motion. The crate covers:
//!
//! - exact in-place evolution with periodic or reflective boundaries and
//!   piecewise coin angles for interface runs ([`evolution`]);
//! - entanglement and magnetization diagnostics: partition and spin-set
//!   entropies on the smaller Schmidt side, concurrence, spin correlations,
//!   the Kolmogorov–Smirnov localization classifier, and the Page reference
//!   entropy ([`observables`]);
//! - closed-form oracles that pin the engine to rounding error: the
//!   Fourier-diagonalized free walk, the two-node spectrum, and the
//!   edge-basis three-term recurrence ([`analytic`],
//!   [`evolution::step_edge_basis`]);
//! - the semiclassical limit: quasienergy bands, group velocity, and
//!   Landau–Lifshitz integrators with damping and gradient torques
//!   ([`semiclassical`]);
//! - parallel (θ, J) phase-diagram sweeps plus the fitting and
//!   peak-detection utilities that classify the regimes ([`sweep`]).
//!
//! The `spinwalk` binary exposes `evolve`, `sweep`, `dispersion` and
//! `llcompare` subcommands over JSON configs; `examples/` holds one runnable
//! program per capability.

pub mod analytic;
pub mod config;
pub mod error;
pub mod evolution;
pub mod hilbert;
pub mod io;
pub mod observables;
pub mod runner;
pub mod semiclassical;
pub mod sweep;

pub use error::{Error, Result};
