use crate::error::{Error, Result};

/// The single real parameter of the coin transformation
///
/// ```text
///   |R> -> sqrt(rho) |R> + sqrt(1-rho) |L>
///   |L> -> sqrt(1-rho) |R> - sqrt(rho) |L>
/// ```
///
/// which is the most general unitary coin the walk on a line requires;
/// `rho = 1/2` is the Hadamard coin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinParameter {
    rho: f64,
    sqrt_rho: f64,
    sqrt_comp: f64,
}

impl CoinParameter {
    pub fn new(rho: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::InvalidCoin { rho });
        }
        Ok(Self {
            rho,
            sqrt_rho: rho.sqrt(),
            sqrt_comp: (1.0 - rho).sqrt(),
        })
    }

    /// The Hadamard coin, rho = 1/2.
    pub fn hadamard() -> Self {
        Self::new(0.5).expect("1/2 is a valid coin parameter")
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// sqrt(rho), the diagonal coin matrix element.
    pub fn sqrt_rho(&self) -> f64 {
        self.sqrt_rho
    }

    /// sqrt(1 - rho), the off-diagonal coin matrix element.
    pub fn sqrt_comp(&self) -> f64 {
        self.sqrt_comp
    }

    /// The 2x2 coin matrix, row-major: [[sqrt(rho), sqrt(1-rho)],
    /// [sqrt(1-rho), -sqrt(rho)]]. It is real, symmetric, and its own
    /// inverse.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [
            [self.sqrt_rho, self.sqrt_comp],
            [self.sqrt_comp, -self.sqrt_rho],
        ]
    }
}
