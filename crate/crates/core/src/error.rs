use thiserror::Error;

/// Errors surfaced by the walk solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Initial spinor does not satisfy |r0|^2 + |l0|^2 = 1.
    #[error("initial spinor not normalized: |r0|^2 + |l0|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    /// Coin parameter outside [0, 1].
    #[error("coin parameter rho = {rho} outside [0, 1]")]
    InvalidCoin { rho: f64 },

    /// Lattice spacing or step duration not positive.
    #[error("lattice scales must be positive, got X = {x}, T = {t}")]
    InvalidScales { x: f64, t: f64 },

    /// Probability distribution with zero total mass.
    #[error("distribution carries no probability mass")]
    EmptyDistribution,

    /// The spectral inversion divides by sqrt(1 - rho sin^2 kX), which
    /// vanishes at kX = ±pi/2 when rho = 1.
    #[error("spectral path degenerate at rho = 1")]
    DegenerateDenominator,

    /// Gaussian cutoff width must be positive.
    #[error("cutoff width w = {w} must be positive")]
    InvalidCutoff { w: f64 },

    /// Long-wavelength packets are degenerate at rho = 0 and rho = 1.
    #[error("long-wavelength approximation undefined for rho = {rho}")]
    UnsupportedCoin { rho: f64 },

    /// Airy argument beyond the supported positive range (value below the
    /// accuracy floor of the implementation).
    #[error("Airy argument {x} above supported range")]
    AiryUnderflow { x: f64 },

    /// Airy argument beyond the supported negative range.
    #[error("Airy argument {x} below supported range")]
    AiryOverflow { x: f64 },

    /// Quadrature failed to reach its error target.
    #[error("quadrature did not converge (error estimate {estimate})")]
    NonConvergent { estimate: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
