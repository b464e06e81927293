//! Long-wavelength (third-order-dispersion) approximation of the walk.
//!
//! Truncating the dispersion relation at cubic order in `k` turns each
//! walk field into the envelope of a pulse propagating with third-order
//! dispersion only. With a Gaussian low-pass cutoff `exp(-w^2 q^2)` the
//! fields become finite combinations of the packet integral
//!
//! ```text
//!   Z = int dk exp(i A k + i (B/3) k^3 - C k^2),
//!   A = xi - sqrt(rho) tau,  B = sqrt(rho) (1 - rho) tau / 2,  C = w^2,
//! ```
//!
//! which has the closed form
//! `(2 pi / B^(1/3)) exp((3ABC + 2C^3) / 3B^2) Ai((AB + C^2) / B^(4/3))`
//! (verified against the quadrature oracle in `special`). Positions and
//! times are the normalized `xi = x/X`, `tau = t/T`; field magnitudes are
//! in arbitrary units since the overall normalization is a pure scale
//! factor.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coin::CoinParameter;
use crate::error::{Error, Result};
use crate::spectral::{FieldSign, LatticeScales};
use crate::special;
use crate::walk::WalkState;

/// Below this cubic coefficient the closed form is replaced by its exact
/// B = 0 Gaussian limit: B^(-1/3) and B^(-2) blow up while the limit
/// stays finite.
const CUBIC_FLOOR: f64 = 1e-9;

/// Gaussian low-pass cutoff `exp(-w^2 q^2)` in normalized wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    w: f64,
}

impl CutoffSpec {
    pub fn new(w: f64) -> Result<Self> {
        if !w.is_finite() || w <= 0.0 {
            return Err(Error::InvalidCutoff { w });
        }
        Ok(Self { w })
    }

    /// The width used throughout the reference figures.
    pub fn standard() -> Self {
        Self { w: 0.4 }
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    /// The filter value at normalized wavenumber `q`.
    pub fn gain(&self, q: f64) -> f64 {
        (-self.w * self.w * q * q).exp()
    }
}

/// Cubic truncation of the dispersion relation:
/// `omega_hat(k) = sqrt(rho) (X/T) k - (1/6) sqrt(rho) (1-rho) (X^3/T) k^3`.
pub fn omega_hat(k: f64, coin: &CoinParameter, scales: &LatticeScales) -> f64 {
    let x = scales.x();
    let t = scales.t();
    let sr = coin.sqrt_rho();
    sr * (x / t) * k - sr * (1.0 - coin.rho()) * (x * x * x / t) * k * k * k / 6.0
}

/// Coefficients of one packet integral `Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryPacket {
    /// Linear phase coefficient: displacement from the ballistic front.
    pub offset: f64,
    /// Cubic phase coefficient: accumulated third-order dispersion.
    pub cubic: f64,
    /// Gaussian damping coefficient, `w^2 > 0`.
    pub width_sq: f64,
}

impl AiryPacket {
    /// Packet parameters at normalized position `xi` and time `tau >= 0`.
    pub fn from_walk(xi: f64, tau: f64, coin: &CoinParameter, cutoff: &CutoffSpec) -> Self {
        assert!(tau >= 0.0, "packet time must be nonnegative");
        Self {
            offset: xi - coin.sqrt_rho() * tau,
            cubic: 0.5 * coin.sqrt_rho() * (1.0 - coin.rho()) * tau,
            width_sq: cutoff.w() * cutoff.w(),
        }
    }

    /// The real value of the packet integral.
    ///
    /// Uses the Airy closed form for `cubic > 1e-9` and the exact
    /// Gaussian limit below it. Arguments that push the Airy function
    /// past its positive range are evaluated in scaled (log) space, where
    /// the closed form stays finite all the way down to underflow.
    pub fn evaluate(&self) -> Result<f64> {
        let (a, b, c) = (self.offset, self.cubic, self.width_sq);
        if c.is_nan() || c <= 0.0 {
            return Err(Error::InvalidCutoff { w: c });
        }
        assert!(b >= 0.0, "cubic coefficient must be nonnegative");
        if b <= CUBIC_FLOOR {
            return Ok((PI / c).sqrt() * (-a * a / (4.0 * c)).exp());
        }
        let b13 = b.cbrt();
        let arg = (a * b + c * c) / (b13 * b13 * b13 * b13);
        if arg <= special::AIRY_MAX_ARG {
            let ai = special::airy_ai(arg)?;
            let pref = (3.0 * a * b * c + 2.0 * c * c * c) / (3.0 * b * b);
            Ok(2.0 * PI / b13 * pref.exp() * ai.value)
        } else {
            // pref - zeta evaluated without the catastrophic cancellation
            // the direct difference would suffer: both grow like C^3/B^2
            let scaled = special::airy_ai_scaled(arg)?;
            let u = a * b / (c * c);
            let shape = if u.abs() < 1e-5 {
                let u2 = u * u;
                u2 * (-0.25 + u * (1.0 / 24.0) - u2 * (1.0 / 64.0))
            } else {
                u - 2.0 / 3.0 * (1.5 * u.ln_1p()).exp_m1()
            };
            let log_damp = c * c * c / (b * b) * shape;
            if log_damp < -745.0 {
                return Ok(0.0);
            }
            Ok(2.0 * PI / b13 * log_damp.exp() * scaled.value)
        }
    }
}

/// Convenience wrapper: the packet integral at `(xi, tau)`.
pub fn airy_packet_integral(
    xi: f64,
    tau: f64,
    coin: &CoinParameter,
    cutoff: &CutoffSpec,
) -> Result<f64> {
    AiryPacket::from_walk(xi, tau, coin, cutoff).evaluate()
}

/// Sign carried by the folded-branch field at integer times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Parity of the nearest integer time. The alternation `(-1)^n` has
    /// no meaning at non-integer `tau`, so callers evaluating there must
    /// choose; rounding matches the discrete walk at integer times.
    pub fn from_tau(tau: f64) -> Self {
        if (tau.round() as i64).rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn sign(&self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// The four continuum evaluators `R±(xi, tau)`, `L±(xi, tau)` for a walk
/// started at site 0. Each is a combination of three packets centered on
/// the initial support {-1, 0, 1}.
#[derive(Debug, Clone, Copy)]
pub struct ContinuumFields {
    r0: Complex64,
    l0: Complex64,
    coin: CoinParameter,
    cutoff: CutoffSpec,
}

impl ContinuumFields {
    /// Requires an `n = 0` site-0 state and `rho` strictly inside (0, 1):
    /// at the endpoints the dispersive packet degenerates.
    pub fn new(initial: &WalkState, coin: CoinParameter, cutoff: CutoffSpec) -> Result<Self> {
        assert_eq!(
            initial.step_index(),
            0,
            "continuum fields require an n = 0 state"
        );
        if coin.rho() <= 0.0 || coin.rho() >= 1.0 {
            return Err(Error::UnsupportedCoin { rho: coin.rho() });
        }
        Ok(Self {
            r0: initial.r_amp(0),
            l0: initial.l_amp(0),
            coin,
            cutoff,
        })
    }

    pub fn coin(&self) -> &CoinParameter {
        &self.coin
    }

    pub fn cutoff(&self) -> &CutoffSpec {
        &self.cutoff
    }

    fn packet(&self, xi: f64, tau: f64) -> Result<f64> {
        airy_packet_integral(xi, tau, &self.coin, &self.cutoff)
    }

    /// `R±(xi, tau) = R00 [Z(±xi) ± sqrt(rho) Z(±(xi-1))]
    ///                ± sqrt(1-rho) L00 Z(±(xi+1))`.
    pub fn r_field(&self, sign: FieldSign, xi: f64, tau: f64) -> Result<Complex64> {
        let s = sign.factor();
        let z0 = self.packet(s * xi, tau)?;
        let z_right = self.packet(s * (xi - 1.0), tau)?;
        let z_left = self.packet(s * (xi + 1.0), tau)?;
        Ok(self.r0 * (z0 + s * self.coin.sqrt_rho() * z_right)
            + s * self.coin.sqrt_comp() * self.l0 * z_left)
    }

    /// `L±(xi, tau) = L00 [Z(±xi) ∓ sqrt(rho) Z(±(xi+1))]
    ///                ± sqrt(1-rho) R00 Z(±(xi-1))`.
    pub fn l_field(&self, sign: FieldSign, xi: f64, tau: f64) -> Result<Complex64> {
        let s = sign.factor();
        let z0 = self.packet(s * xi, tau)?;
        let z_right = self.packet(s * (xi - 1.0), tau)?;
        let z_left = self.packet(s * (xi + 1.0), tau)?;
        Ok(self.l0 * (z0 - s * self.coin.sqrt_rho() * z_left)
            + s * self.coin.sqrt_comp() * self.r0 * z_right)
    }

    /// `R+ + (-1)^n R-` and its L counterpart.
    pub fn combined(&self, xi: f64, tau: f64, parity: Parity) -> Result<(Complex64, Complex64)> {
        let alt = parity.sign();
        let r = self.r_field(FieldSign::Plus, xi, tau)?
            + alt * self.r_field(FieldSign::Minus, xi, tau)?;
        let l = self.l_field(FieldSign::Plus, xi, tau)?
            + alt * self.l_field(FieldSign::Minus, xi, tau)?;
        Ok((r, l))
    }

    /// Unnormalized probability profile over a grid (parallel map).
    pub fn probability_on_grid(
        &self,
        grid: &[f64],
        tau: f64,
        parity: Parity,
    ) -> Result<ContinuumDistribution> {
        let rows: Vec<(f64, f64)> = grid
            .par_iter()
            .map(|&xi| {
                let (r, l) = self.combined(xi, tau, parity)?;
                Ok((r.norm_sqr(), l.norm_sqr()))
            })
            .collect::<Result<_>>()?;
        let p_right: Vec<f64> = rows.iter().map(|&(r, _)| r).collect();
        let p_left: Vec<f64> = rows.iter().map(|&(_, l)| l).collect();
        let p_total = p_right.iter().zip(&p_left).map(|(r, l)| r + l).collect();
        Ok(ContinuumDistribution {
            xi: grid.to_vec(),
            p_total,
            p_right,
            p_left,
        })
    }
}

/// Continuum probability profile in arbitrary units.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumDistribution {
    pub xi: Vec<f64>,
    pub p_total: Vec<f64>,
    pub p_right: Vec<f64>,
    pub p_left: Vec<f64>,
}

impl ContinuumDistribution {
    /// Rescales so the grid carries unit mass (`sum p * dx = 1`); the
    /// channel split is preserved.
    pub fn normalize_mass(&mut self, dx: f64) {
        let mass: f64 = self.p_total.iter().sum::<f64>() * dx;
        if mass > 0.0 {
            let scale = 1.0 / mass;
            for p in self
                .p_total
                .iter_mut()
                .chain(self.p_right.iter_mut())
                .chain(self.p_left.iter_mut())
            {
                *p *= scale;
            }
        }
    }

    pub fn peak(&self) -> (f64, f64) {
        self.xi
            .iter()
            .zip(&self.p_total)
            .fold((0.0, f64::MIN), |best, (&xi, &p)| {
                if p > best.1 {
                    (xi, p)
                } else {
                    best
                }
            })
    }
}

/// A uniform grid `start, start + step, ..." up to `stop` inclusive
/// (within half a step).
pub fn uniform_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0, "grid step must be positive");
    assert!(stop >= start, "grid must be ordered");
    let count = ((stop - start) / step * (1.0 + 1e-12) + 1e-9).floor() as usize + 1;
    (0..count).map(|i| start + i as f64 * step).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::omega0;
    use num_complex::Complex64 as C64;

    const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn fig2_state() -> WalkState {
        WalkState::new(
            C64::new(FRAC_1_SQRT_2, 0.0),
            C64::new(0.0, FRAC_1_SQRT_2),
        )
        .unwrap()
    }

    fn fig2_fields() -> ContinuumFields {
        ContinuumFields::new(
            &fig2_state(),
            CoinParameter::hadamard(),
            CutoffSpec::standard(),
        )
        .unwrap()
    }

    #[test]
    fn cutoff_validation_and_shape() {
        assert!(matches!(
            CutoffSpec::new(0.0),
            Err(Error::InvalidCutoff { .. })
        ));
        assert!(CutoffSpec::new(-1.0).is_err());
        let g = CutoffSpec::standard();
        assert_eq!(g.gain(0.0), 1.0);
        for q in [0.5, 1.0, 2.0, 4.0] {
            assert_eq!(g.gain(q), g.gain(-q));
            assert!(g.gain(q) < g.gain(q - 0.25));
        }
    }

    #[test]
    fn omega_hat_reference_points() {
        let unit = LatticeScales::unit();
        let half = CoinParameter::hadamard();
        assert_eq!(omega_hat(0.0, &half, &unit), 0.0);
        let one = CoinParameter::new(1.0).unwrap();
        for &k in &[-1.0, 0.3, 2.0] {
            assert_eq!(omega_hat(k, &one, &unit), k);
        }
    }

    #[test]
    fn omega_hat_is_fifth_order_accurate() {
        let unit = LatticeScales::unit();
        let half = CoinParameter::hadamard();
        let mut k: f64 = -0.3;
        while k <= 0.3 {
            if k.abs() > 1e-3 {
                let diff = (omega_hat(k, &half, &unit) - omega0(k, &half, &unit)).abs();
                // exact k^5 coefficient at rho = 1/2 is ~0.0103
                let ratio = diff / k.abs().powi(5);
                assert!(ratio <= 0.02, "k={k}: ratio {ratio}");
            }
            k += 0.017;
        }
    }

    #[test]
    fn packet_gaussian_limit() {
        let coin = CoinParameter::hadamard();
        let cutoff = CutoffSpec::standard();
        // tau = 0 means B = 0 exactly
        let z = airy_packet_integral(1.3, 0.0, &coin, &cutoff).unwrap();
        let c = 0.16;
        let expected = (PI / c).sqrt() * (-1.3f64 * 1.3 / (4.0 * c)).exp();
        assert!((z - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn packet_matches_quadrature_oracle_at_fig2_point() {
        let coin = CoinParameter::hadamard();
        let cutoff = CutoffSpec::standard();
        let packet = AiryPacket::from_walk(141.0, 200.0, &coin, &cutoff);
        let closed = packet.evaluate().unwrap();
        let oracle =
            special::oscillatory_cubic_gaussian(packet.offset, packet.cubic, packet.width_sq)
                .unwrap();
        assert!(
            (closed - oracle).abs() <= 1e-6 * oracle.abs(),
            "closed {closed} vs oracle {oracle}"
        );
    }

    #[test]
    fn packet_matches_oracle_across_parameters() {
        // pseudo-random but reproducible sweep of (xi, tau) pairs
        let cutoff = CutoffSpec::new(0.4).unwrap();
        let coin = CoinParameter::new(0.5).unwrap();
        let mut checked = 0;
        for i in 0..100 {
            let tau = 10.0 + 190.0 * ((i as f64 * 0.617).fract());
            let front = coin.sqrt_rho() * tau;
            let b = 0.5 * coin.sqrt_rho() * (1.0 - coin.rho()) * tau;
            let s_target = -18.0 + 20.0 * ((i as f64 * 0.381).fract());
            let xi = front + s_target * b.cbrt();
            let packet = AiryPacket::from_walk(xi, tau, &coin, &cutoff);
            let closed = packet.evaluate().unwrap();
            let oracle =
                special::oscillatory_cubic_gaussian(packet.offset, packet.cubic, packet.width_sq)
                    .unwrap();
            let envelope = 2.0 * PI / packet.cubic.cbrt() * 0.3;
            let denom = oracle.abs().max(1e-3 * envelope);
            assert!(
                (closed - oracle).abs() <= 1e-6 * denom,
                "i={i} xi={xi} tau={tau}: closed {closed} vs oracle {oracle}"
            );
            checked += 1;
        }
        assert_eq!(checked, 100);
    }

    #[test]
    fn fields_read_off_the_packet_combination() {
        // R00 = 0 keeps only the sqrt(1-rho) term in L±
        let state = WalkState::new(C64::new(1.0, 0.0), C64::ZERO).unwrap();
        let coin = CoinParameter::new(0.3).unwrap();
        let cutoff = CutoffSpec::standard();
        let fields = ContinuumFields::new(&state, coin, cutoff).unwrap();
        for &(xi, tau) in &[(0.0, 5.0), (3.7, 12.0), (-2.0, 40.0)] {
            for &sign in &[FieldSign::Plus, FieldSign::Minus] {
                let s = sign.factor();
                let got = fields.l_field(sign, xi, tau).unwrap();
                let expected = s
                    * coin.sqrt_comp()
                    * airy_packet_integral(s * (xi - 1.0), tau, &coin, &cutoff).unwrap();
                assert!((got.re - expected).abs() <= 1e-13 && got.im == 0.0);
            }
        }
    }

    #[test]
    fn initial_profile_is_three_gaussians() {
        let state = fig2_state();
        let coin = CoinParameter::hadamard();
        let cutoff = CutoffSpec::new(0.15).unwrap();
        let fields = ContinuumFields::new(&state, coin, cutoff).unwrap();
        let after = state.step(&coin);
        let c = cutoff.w() * cutoff.w();
        let gauss = |xi: f64| (PI / c).sqrt() * (-xi * xi / (4.0 * c)).exp();
        let mut xi = -2.5;
        while xi <= 2.5 {
            let got = fields.r_field(FieldSign::Plus, xi, 0.0).unwrap();
            let expected = state.r_amp(0) * gauss(xi)
                + after.r_amp(-1) * gauss(xi + 1.0)
                + after.r_amp(1) * gauss(xi - 1.0);
            assert!(
                (got - expected).norm() <= 1e-12 * (1.0 + expected.norm()),
                "xi = {xi}: {got} vs {expected}"
            );
            let got_l = fields.l_field(FieldSign::Plus, xi, 0.0).unwrap();
            let expected_l = state.l_amp(0) * gauss(xi)
                + after.l_amp(-1) * gauss(xi + 1.0)
                + after.l_amp(1) * gauss(xi - 1.0);
            assert!((got_l - expected_l).norm() <= 1e-12 * (1.0 + expected_l.norm()));
            xi += 0.37;
        }
    }

    #[test]
    fn rejects_degenerate_coins() {
        let state = fig2_state();
        for rho in [0.0, 1.0] {
            let coin = CoinParameter::new(rho).unwrap();
            assert!(matches!(
                ContinuumFields::new(&state, coin, CutoffSpec::standard()),
                Err(Error::UnsupportedCoin { .. })
            ));
        }
    }

    #[test]
    fn fig2_profile_shape() {
        let fields = fig2_fields();
        let grid = uniform_grid(-250.0, 250.0, 0.5);
        let dist = fields
            .probability_on_grid(&grid, 200.0, Parity::from_tau(200.0))
            .unwrap();
        // symmetric initial data gives a symmetric profile
        let n = grid.len();
        for ((&xi, &p), &q) in grid
            .iter()
            .zip(&dist.p_total)
            .zip(dist.p_total.iter().rev())
        {
            let scale = p.abs().max(q.abs()).max(1e-300);
            assert!((p - q).abs() <= 1e-9 * scale, "asymmetry at xi = {xi}");
        }
        // two dominant outer peaks inside [130, 146]
        let (peak_xi, peak_p) = dist.peak();
        assert!(
            (130.0..=146.0).contains(&peak_xi.abs()),
            "peak at {peak_xi}"
        );
        // nonzero central plateau well below the peaks
        let center = dist.p_total[n / 2];
        assert!(center > 0.0);
        assert!(center < 0.2 * peak_p, "center {center} vs peak {peak_p}");
    }

    #[test]
    fn narrow_cutoff_leaks_past_the_light_cone() {
        // w = 0.25 keeps visible probability beyond tau/sqrt(2) + 10,
        // where the exact walk front has already died off
        let coin = CoinParameter::hadamard();
        let fields = ContinuumFields::new(
            &fig2_state(),
            coin,
            CutoffSpec::new(0.25).unwrap(),
        )
        .unwrap();
        let tau = 200.0;
        let grid = uniform_grid(-250.0, 250.0, 0.5);
        let dist = fields
            .probability_on_grid(&grid, tau, Parity::from_tau(tau))
            .unwrap();
        let (_, peak) = dist.peak();
        let boundary = tau / std::f64::consts::SQRT_2 + 10.0;
        let tail_max = grid
            .iter()
            .zip(&dist.p_total)
            .filter(|(&xi, _)| xi.abs() > boundary)
            .map(|(_, &p)| p)
            .fold(0.0f64, f64::max);
        assert!(
            tail_max > 1e-3 * peak,
            "tail beyond {boundary}: {tail_max} vs peak {peak}"
        );
    }

    #[test]
    fn group_velocity_tracks_sqrt_rho() {
        let fields = fig2_fields();
        let coin = CoinParameter::hadamard();
        let peak_at = |tau: f64| -> f64 {
            let lo = coin.sqrt_rho() * tau - 20.0;
            let hi = coin.sqrt_rho() * tau + 10.0;
            let grid = uniform_grid(lo, hi, 0.02);
            let mut best = (0.0, f64::MIN);
            for &xi in &grid {
                let v = fields
                    .r_field(FieldSign::Plus, xi, tau)
                    .unwrap()
                    .norm_sqr();
                if v > best.1 {
                    best = (xi, v);
                }
            }
            best.0
        };
        let v = (peak_at(200.0) - peak_at(100.0)) / 100.0;
        let expected = coin.sqrt_rho();
        assert!(
            (v / expected - 1.0).abs() <= 0.02,
            "velocity {v} vs {expected}"
        );
    }

    #[test]
    fn oscillation_spacing_shrinks_toward_rho_one() {
        // effective spreading ~ (1 - rho): the Airy lobes pack tighter as
        // rho grows
        let spacing = |rho: f64| -> f64 {
            let coin = CoinParameter::new(rho).unwrap();
            let fields = ContinuumFields::new(
                &fig2_state(),
                coin,
                CutoffSpec::standard(),
            )
            .unwrap();
            let tau = 200.0;
            let front = coin.sqrt_rho() * tau;
            let grid = uniform_grid(front - 30.0, front + 10.0, 0.01);
            let vals: Vec<f64> = grid
                .iter()
                .map(|&xi| {
                    fields
                        .r_field(FieldSign::Plus, xi, tau)
                        .unwrap()
                        .norm_sqr()
                })
                .collect();
            // positions of the two outermost local maxima
            let mut maxima = Vec::new();
            for i in (1..vals.len() - 1).rev() {
                if vals[i] > vals[i - 1] && vals[i] > vals[i + 1] {
                    maxima.push(grid[i]);
                    if maxima.len() == 2 {
                        break;
                    }
                }
            }
            maxima[0] - maxima[1]
        };
        let wide = spacing(0.5);
        let tight = spacing(0.8);
        assert!(
            tight < wide,
            "spacing should shrink: rho=0.5 gives {wide}, rho=0.8 gives {tight}"
        );
    }

    #[test]
    fn satisfies_envelope_equation() {
        // d/dtau A± = ∓ sqrt(rho) [d/dxi + (1-rho)/6 d^3/dxi^3] A±
        //
        // Each sign is sampled around its own moving packet (the + field
        // travels right, the - field left); far from it the h^2
        // truncation error of the stencil overtakes the signal.
        let fields = fig2_fields();
        let coin = CoinParameter::hadamard();
        let h = 1e-2;
        let mut worst: f64 = 0.0;
        let mut samples = 0;
        for &tau in &[60.0, 120.0, 200.0] {
            let front = coin.sqrt_rho() * tau;
            let lobe = (0.5 * coin.sqrt_rho() * (1.0 - coin.rho()) * tau).cbrt();
            for i in 0..17 {
                let depth = -24.0 + 1.5 * i as f64;
                for &sign in &[FieldSign::Plus, FieldSign::Minus] {
                    let s = sign.factor();
                    let xi = s * (front + depth * lobe);
                    let f = |xi: f64, tau: f64| -> C64 {
                        fields.r_field(sign, xi, tau).unwrap()
                    };
                    let d_tau = (f(xi, tau + h) - f(xi, tau - h)) / (2.0 * h);
                    let d_xi = (f(xi + h, tau) - f(xi - h, tau)) / (2.0 * h);
                    let d_xi3 = (f(xi + 2.0 * h, tau) - 2.0 * f(xi + h, tau)
                        + 2.0 * f(xi - h, tau)
                        - f(xi - 2.0 * h, tau))
                        / (2.0 * h * h * h);
                    let rhs = -s
                        * coin.sqrt_rho()
                        * (d_xi + (1.0 - coin.rho()) / 6.0 * d_xi3);
                    let scale = d_tau.norm().max(rhs.norm());
                    if scale > 1e-8 {
                        worst = worst.max((d_tau - rhs).norm() / scale);
                        samples += 1;
                    }
                }
            }
        }
        assert!(samples >= 50, "only {samples} usable sample points");
        assert!(worst <= 1e-4, "worst relative residual {worst}");
    }
}
