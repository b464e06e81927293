//! Coined quantum walk on a line, solved four ways.
//!
//! A two-state particle hops left or right conditioned on its coin state,
//! with a one-parameter unitary coin flip applied each step. This crate
//! computes its probability distributions by four mutually verifying
//! routes:
//!
//! * [`walk`] — direct iteration of the coupled amplitude recurrences;
//! * [`recurrence`] — the decoupled three-term recurrence each coin
//!   channel obeys on its own after a single bootstrap step;
//! * [`spectral`] — the exact Green-function solution built on the
//!   lattice dispersion relation;
//! * [`longwave`] — the long-wavelength approximation, whose fields are
//!   Airy packets governed by a third-order-dispersion envelope equation.
//!
//! [`special`] supplies the Airy function and the oscillatory-integral
//! oracle backing it; [`nv`] maps everything onto the reflected
//! amplitude convention used elsewhere in the quantum-walk literature.

pub mod coin;
pub mod error;
pub mod longwave;
pub mod nv;
pub mod recurrence;
pub mod special;
pub mod spectral;
pub mod walk;

pub use coin::CoinParameter;
pub use error::{Error, Result};
pub use longwave::{
    airy_packet_integral, omega_hat, uniform_grid, AiryPacket, ContinuumDistribution,
    ContinuumFields, CutoffSpec, Parity,
};
pub use recurrence::{Channel, DecoupledHistory};
pub use special::{airy_ai, airy_ai_scaled, oscillatory_cubic_gaussian, AiryResult};
pub use spectral::{
    omega0, omega1, Branch, DispersionBranch, ExactFields, FieldSign, FieldSpectrum,
    GreenFunctionSampler, LatticeScales, SiteRow,
};
pub use walk::{ProbabilityDistribution, WalkState};
