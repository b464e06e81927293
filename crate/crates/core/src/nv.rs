//! Dictionary between this crate's amplitude labels and the
//! Nayak-Vishwanath convention for the Hadamard walk.
//!
//! The alternative convention applies the coin before the shift and
//! reflects the lattice, which amounts to the exact relabeling
//!
//! ```text
//!   Rhat_{m,n} = L_{-m+1,n},   Lhat_{m,n} = R_{-m-1,n}.
//! ```
//!
//! In the relabeled variables the Hadamard walk reads
//!
//! ```text
//!   Lhat_{m,n} = (Lhat_{m+1,n-1} + Rhat_{m+1,n-1}) / sqrt(2)
//!   Rhat_{m,n} = (Lhat_{m-1,n-1} - Rhat_{m-1,n-1}) / sqrt(2)
//! ```
//!
//! The minus sign in the second line is required: without it the pair is
//! not norm-preserving, and conjugacy with the walk under the relabeling
//! (checked to 1e-14 by the tests) fails. For the seed
//! `Lhat_{m,0} = delta_{m0}` the amplitudes also have closed-form
//! Brillouin-zone integrals, implemented here by the same trapezoid rule
//! the spectral solver uses.

use num_complex::Complex64;

use crate::coin::CoinParameter;
use crate::error::{Error, Result};
use crate::spectral::{omega0, trapezoid_bz, LatticeScales};
use crate::walk::WalkState;

/// Amplitudes in the reflected-and-shifted convention. Rows at step `n`
/// span sites `[-(n+1), n+1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NVState {
    step: usize,
    first_site: i64,
    r_hat: Vec<Complex64>,
    l_hat: Vec<Complex64>,
}

impl NVState {
    /// The canonical seed `Lhat_{m,0} = delta_{m0}`, `Rhat_{m,0} = 0`.
    pub fn seed() -> Self {
        NVState {
            step: 0,
            first_site: -1,
            r_hat: vec![Complex64::ZERO; 3],
            l_hat: vec![Complex64::ZERO, Complex64::new(1.0, 0.0), Complex64::ZERO],
        }
    }

    pub fn step_index(&self) -> usize {
        self.step
    }

    pub fn site_range(&self) -> std::ops::RangeInclusive<i64> {
        let reach = self.step as i64 + 1;
        -reach..=reach
    }

    fn index_of(&self, m: i64) -> Option<usize> {
        let i = m - self.first_site;
        if i >= 0 && (i as usize) < self.r_hat.len() {
            Some(i as usize)
        } else {
            None
        }
    }

    pub fn r_hat(&self, m: i64) -> Complex64 {
        self.index_of(m).map_or(Complex64::ZERO, |i| self.r_hat[i])
    }

    pub fn l_hat(&self, m: i64) -> Complex64 {
        self.index_of(m).map_or(Complex64::ZERO, |i| self.l_hat[i])
    }

    pub fn norm_sq(&self) -> f64 {
        self.r_hat
            .iter()
            .zip(&self.l_hat)
            .map(|(r, l)| r.norm_sqr() + l.norm_sqr())
            .sum()
    }
}

/// Relabels a walk state: `Rhat_{m,n} = L_{-m+1,n}`, `Lhat_{m,n} = R_{-m-1,n}`.
pub fn to_nv(state: &WalkState) -> NVState {
    let reach = state.step_index() as i64 + 1;
    let r_hat = (-reach..=reach).map(|m| state.l_amp(-m + 1)).collect();
    let l_hat = (-reach..=reach).map(|m| state.r_amp(-m - 1)).collect();
    NVState {
        step: state.step_index(),
        first_site: -reach,
        r_hat,
        l_hat,
    }
}

/// Inverse relabeling: `L_{m,n} = Rhat_{-m+1,n}`, `R_{m,n} = Lhat_{-m-1,n}`.
pub fn from_nv(state: &NVState) -> WalkState {
    let n = state.step;
    let reach = n as i64;
    let r = (-reach..=reach).map(|m| state.l_hat(-m - 1)).collect();
    let l = (-reach..=reach).map(|m| state.r_hat(-m + 1)).collect();
    WalkState::from_rows(n, r, l)
}

/// One step of the Hadamard walk in the relabeled convention.
pub fn nv_step(state: &NVState) -> NVState {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let reach = state.step as i64 + 2;
    let l_hat: Vec<Complex64> = (-reach..=reach)
        .map(|m| inv_sqrt2 * (state.l_hat(m + 1) + state.r_hat(m + 1)))
        .collect();
    let r_hat: Vec<Complex64> = (-reach..=reach)
        .map(|m| inv_sqrt2 * (state.l_hat(m - 1) - state.r_hat(m - 1)))
        .collect();
    NVState {
        step: state.step + 1,
        first_site: -reach,
        r_hat,
        l_hat,
    }
}

/// Closed-form amplitudes at `(m, n)` for the seed `Lhat_{m,0} = delta_{m0}`,
/// `Rhat_{m,0} = 0` of the Hadamard walk:
///
/// ```text
///   Rhat_{m,n} = [1 + (-1)^{n+m}] (X/4pi) int_BZ dk
///                e^{ikX} e^{-ikmX} e^{-i omega0(k) nT} / sqrt(1 + cos^2 kX)
///   Lhat_{m,n} = [1 + (-1)^{n+m}] (X/4pi) int_BZ dk
///                (1 + cos kX / sqrt(1 + cos^2 kX)) e^{-ikmX} e^{-i omega0(k) nT}
/// ```
///
/// The parity prefactor annihilates `n + m` odd exactly; the integrals are
/// evaluated with `nodes` trapezoid points and cross-checked at half the
/// node count.
pub fn nv_closed_form(m: i64, n: usize, nodes: usize) -> Result<(Complex64, Complex64)> {
    if (n as i64 + m).rem_euclid(2) == 1 {
        return Ok((Complex64::ZERO, Complex64::ZERO));
    }
    let fine = nv_quadrature(m, n, nodes);
    let coarse = nv_quadrature(m, n, nodes / 2);
    let estimate = (fine.0 - coarse.0).norm().max((fine.1 - coarse.1).norm());
    if estimate > 1e-9 {
        return Err(Error::NonConvergent { estimate });
    }
    Ok(fine)
}

fn nv_quadrature(m: i64, n: usize, nodes: usize) -> (Complex64, Complex64) {
    let scales = LatticeScales::unit();
    let coin = CoinParameter::hadamard();
    let x = scales.x();
    let pref = 2.0 * x / (4.0 * std::f64::consts::PI);
    let r = trapezoid_bz(&scales, nodes, |k| {
        let denom = (1.0 + (k * x).cos() * (k * x).cos()).sqrt();
        let phase = k * x - k * m as f64 * x - omega0(k, &coin, &scales) * n as f64;
        Complex64::from_polar(1.0 / denom, phase)
    }) * pref;
    let l = trapezoid_bz(&scales, nodes, |k| {
        let ck = (k * x).cos();
        let weight = 1.0 + ck / (1.0 + ck * ck).sqrt();
        let phase = -k * m as f64 * x - omega0(k, &coin, &scales) * n as f64;
        Complex64::from_polar(weight, phase)
    }) * pref;
    (r, l)
}
