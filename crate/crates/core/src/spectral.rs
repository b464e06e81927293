//! Exact solution of the walk through its dispersion relation.
//!
//! Plane-wave solutions of the decoupled recurrence obey
//! `sin(omega T) = sqrt(rho) sin(k X)`, which has two branches in the
//! fundamental frequency range. Splitting each channel into a `+` and a
//! `-` field (one per branch) turns the walk into free propagation of
//! four fields; all of them are assembled from a single Green function
//!
//! ```text
//!   g(x; t) = (X / 4 pi) int_BZ dk e^{ikx} e^{-i omega0(k) t}
//!                               / sqrt(1 - rho sin^2 kX)
//! ```
//!
//! evaluated here by uniform trapezoid quadrature over the Brillouin
//! zone, which converges spectrally for these smooth periodic integrands
//! as long as `rho < 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coin::CoinParameter;
use crate::error::{Error, Result};
use crate::walk::WalkState;

/// Lattice spacing `X` and step duration `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeScales {
    x: f64,
    t: f64,
}

impl LatticeScales {
    pub fn new(x: f64, t: f64) -> Result<Self> {
        if !x.is_finite() || x <= 0.0 || !t.is_finite() || t <= 0.0 {
            return Err(Error::InvalidScales { x, t });
        }
        Ok(Self { x, t })
    }

    /// Canonical lattice units `X = T = 1`.
    pub fn unit() -> Self {
        Self { x: 1.0, t: 1.0 }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Edge of the Brillouin zone, `pi / X`.
    pub fn k_edge(&self) -> f64 {
        PI / self.x
    }
}

impl Default for LatticeScales {
    fn default() -> Self {
        Self::unit()
    }
}

/// Principal dispersion branch: `omega0(k) = arcsin(sqrt(rho) sin kX) / T`,
/// the solution with `omega0 -> 0` as `k -> 0`.
pub fn omega0(k: f64, coin: &CoinParameter, scales: &LatticeScales) -> f64 {
    (coin.sqrt_rho() * (k * scales.x).sin()).asin() / scales.t
}

/// Second branch, `omega1(k) = -omega0(k) + pi/T` for `k > 0` and
/// `-omega0(k) - pi/T` for `k < 0`, which keeps the value inside
/// `(-pi/T, pi/T]`. The boundary point `k = 0` is fixed to `+pi/T`.
pub fn omega1(k: f64, coin: &CoinParameter, scales: &LatticeScales) -> f64 {
    let shift = if k >= 0.0 { PI } else { -PI };
    -omega0(k, coin, scales) + shift / scales.t
}

/// Which dispersion branch a field rides on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `omega0`, vanishing at `k = 0`.
    Principal,
    /// `omega1`, the folded branch carrying the `(-1)^n` alternation.
    Folded,
}

/// A dispersion-relation sampler for one branch.
#[derive(Debug, Clone, Copy)]
pub struct DispersionBranch {
    coin: CoinParameter,
    branch: Branch,
    scales: LatticeScales,
}

impl DispersionBranch {
    pub fn new(coin: CoinParameter, branch: Branch, scales: LatticeScales) -> Self {
        Self {
            coin,
            branch,
            scales,
        }
    }

    pub fn omega(&self, k: f64) -> f64 {
        match self.branch {
            Branch::Principal => omega0(k, &self.coin, &self.scales),
            Branch::Folded => omega1(k, &self.coin, &self.scales),
        }
    }

    /// `|sin(omega T) - sqrt(rho) sin(k X)|` at this `k`.
    pub fn residual(&self, k: f64) -> f64 {
        let lhs = (self.omega(k) * self.scales.t).sin();
        let rhs = self.coin.sqrt_rho() * (k * self.scales.x).sin();
        (lhs - rhs).abs()
    }
}

/// Sign label of the two fields each channel splits into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSign {
    Plus,
    Minus,
}

impl FieldSign {
    pub fn factor(&self) -> f64 {
        match self {
            FieldSign::Plus => 1.0,
            FieldSign::Minus => -1.0,
        }
    }
}

/// A finite-support amplitude row: `amps[i]` sits at site `first_site + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteRow {
    pub first_site: i64,
    pub amps: Vec<Complex64>,
}

impl SiteRow {
    pub fn new(first_site: i64, amps: Vec<Complex64>) -> Self {
        Self { first_site, amps }
    }

    /// Single nonzero amplitude at one site.
    pub fn delta(site: i64, amp: Complex64) -> Self {
        Self {
            first_site: site,
            amps: vec![amp],
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.amps
            .iter()
            .enumerate()
            .map(move |(i, &a)| (self.first_site + i as i64, a))
    }
}

/// Trapezoid rule over the Brillouin zone `(-pi/X, pi/X]` with `m` uniform
/// nodes. Exact node placement: `k_j = -pi/X + j (2 pi / X m)`, `j = 1..=m`.
pub(crate) fn trapezoid_bz<F>(scales: &LatticeScales, m: usize, mut f: F) -> Complex64
where
    F: FnMut(f64) -> Complex64,
{
    let dk = 2.0 * PI / (scales.x * m as f64);
    let lo = -PI / scales.x;
    let mut sum = Complex64::ZERO;
    for j in 1..=m {
        sum += f(lo + j as f64 * dk);
    }
    sum * dk
}

/// The spectrum `a±(k)` of one walk field, reconstructed from the first
/// two amplitude rows of its channel:
///
/// ```text
///   a±(k) = (X / 4 pi) sum_m [e^{±i omega0(k) T} a_{m,0} ± a_{m,1}]
///                      e^{-i k m X} / sqrt(1 - rho sin^2 kX)
/// ```
#[derive(Debug, Clone)]
pub struct FieldSpectrum {
    sign: FieldSign,
    coin: CoinParameter,
    scales: LatticeScales,
    row0: SiteRow,
    row1: SiteRow,
}

impl FieldSpectrum {
    pub fn from_rows(
        row0: SiteRow,
        row1: SiteRow,
        sign: FieldSign,
        coin: CoinParameter,
        scales: LatticeScales,
    ) -> Result<Self> {
        if coin.rho() >= 1.0 {
            return Err(Error::DegenerateDenominator);
        }
        Ok(Self {
            sign,
            coin,
            scales,
            row0,
            row1,
        })
    }

    pub fn sign(&self) -> FieldSign {
        self.sign
    }

    /// `a±(k)`; periodic with period `2 pi / X`.
    pub fn eval(&self, k: f64) -> Complex64 {
        let s = self.sign.factor();
        let x = self.scales.x;
        let w0 = omega0(k, &self.coin, &self.scales);
        let phase0 = Complex64::from_polar(1.0, s * w0 * self.scales.t);
        let mut sum = Complex64::ZERO;
        for (m, a) in self.row0.iter() {
            sum += phase0 * a * Complex64::from_polar(1.0, -k * m as f64 * x);
        }
        for (m, a) in self.row1.iter() {
            sum += s * a * Complex64::from_polar(1.0, -k * m as f64 * x);
        }
        let sk = (k * x).sin();
        let denom = (1.0 - self.coin.rho() * sk * sk).sqrt();
        sum * (x / (4.0 * PI)) / denom
    }

    /// The field `a±(x, t) = int_BZ dk a±(k) e^{ikx} e^{∓i omega0(k) t}`
    /// by trapezoid quadrature with `nodes` points.
    pub fn field_at(&self, x: f64, t: f64, nodes: usize) -> Complex64 {
        let s = self.sign.factor();
        trapezoid_bz(&self.scales, nodes, |k| {
            let w0 = omega0(k, &self.coin, &self.scales);
            self.eval(k) * Complex64::from_polar(1.0, k * x - s * w0 * t)
        })
    }
}

/// Precomputed Brillouin-zone quadrature for the Green function.
#[derive(Debug, Clone)]
pub struct GreenFunctionSampler {
    coin: CoinParameter,
    scales: LatticeScales,
    node_count: usize,
    /// (k, omega0(k), integration weight including X/4pi and denominator)
    nodes: Vec<(f64, f64, f64)>,
}

impl GreenFunctionSampler {
    /// Requires `rho < 1` (the inversion divides by `sqrt(1 - rho sin^2
    /// kX)`) and at least 512 nodes.
    pub fn new(coin: CoinParameter, scales: LatticeScales, node_count: usize) -> Result<Self> {
        if coin.rho() >= 1.0 {
            return Err(Error::DegenerateDenominator);
        }
        assert!(node_count >= 512, "Green sampler needs at least 512 nodes");
        let dk = 2.0 * PI / (scales.x * node_count as f64);
        let lo = -PI / scales.x;
        let base = scales.x / (4.0 * PI) * dk;
        let nodes = (1..=node_count)
            .map(|j| {
                let k = lo + j as f64 * dk;
                let sk = (k * scales.x).sin();
                let denom = (1.0 - coin.rho() * sk * sk).sqrt();
                (k, omega0(k, &coin, &scales), base / denom)
            })
            .collect();
        Ok(Self {
            coin,
            scales,
            node_count,
            nodes,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn coin(&self) -> &CoinParameter {
        &self.coin
    }

    pub fn scales(&self) -> &LatticeScales {
        &self.scales
    }

    /// `g(x; t)`: deterministic for a fixed node count.
    ///
    /// At lattice offsets `x = m X` the integrand is periodic over the
    /// Brillouin zone and the trapezoid sum converges spectrally; between
    /// lattice points the `e^{ikx}` factor breaks periodicity and the
    /// endpoint mismatch limits accuracy to O(1/nodes).
    pub fn green(&self, x: f64, t: f64) -> Complex64 {
        let mut re = 0.0;
        let mut im = 0.0;
        for &(k, w0, weight) in &self.nodes {
            let (s, c) = (k * x - w0 * t).sin_cos();
            re += weight * c;
            im += weight * s;
        }
        Complex64::new(re, im)
    }
}

/// The four field evaluators `R±(x, t)`, `L±(x, t)` determined by an
/// `n = 0` state, plus the `(-1)^n` reassembly of lattice amplitudes.
#[derive(Debug, Clone)]
pub struct ExactFields {
    green: GreenFunctionSampler,
    r_row: SiteRow,
    l_row: SiteRow,
}

impl ExactFields {
    /// Panics if `initial` is not an `n = 0` state; fails for `rho = 1`.
    pub fn new(
        initial: &WalkState,
        coin: CoinParameter,
        scales: LatticeScales,
        node_count: usize,
    ) -> Result<Self> {
        assert_eq!(
            initial.step_index(),
            0,
            "exact fields require an n = 0 state"
        );
        let green = GreenFunctionSampler::new(coin, scales, node_count)?;
        let sites: Vec<i64> = initial.site_range().collect();
        let first = *sites.first().expect("state has at least one site");
        let r_row = SiteRow::new(first, sites.iter().map(|&m| initial.r_amp(m)).collect());
        let l_row = SiteRow::new(first, sites.iter().map(|&m| initial.l_amp(m)).collect());
        Ok(Self {
            green,
            r_row,
            l_row,
        })
    }

    pub fn green_sampler(&self) -> &GreenFunctionSampler {
        &self.green
    }

    /// `R±(x, t)`.
    pub fn r_field(&self, sign: FieldSign, x: f64, t: f64) -> Complex64 {
        let s = sign.factor();
        let sx = self.green.scales.x;
        let st = self.green.scales.t;
        let sr = self.green.coin.sqrt_rho();
        let sc = self.green.coin.sqrt_comp();
        let mut acc = Complex64::ZERO;
        for (m, r0) in self.r_row.iter() {
            acc += self.green.green(s * (x - m as f64 * sx), t - st) * r0;
            acc += s * sr * self.green.green(s * (x - (m + 1) as f64 * sx), t) * r0;
        }
        for (m, l0) in self.l_row.iter() {
            acc += s * sc * self.green.green(s * (x - (m - 1) as f64 * sx), t) * l0;
        }
        acc
    }

    /// `L±(x, t)`.
    pub fn l_field(&self, sign: FieldSign, x: f64, t: f64) -> Complex64 {
        let s = sign.factor();
        let sx = self.green.scales.x;
        let st = self.green.scales.t;
        let sr = self.green.coin.sqrt_rho();
        let sc = self.green.coin.sqrt_comp();
        let mut acc = Complex64::ZERO;
        for (m, l0) in self.l_row.iter() {
            acc += self.green.green(s * (x - m as f64 * sx), t - st) * l0;
            acc -= s * sr * self.green.green(s * (x - (m - 1) as f64 * sx), t) * l0;
        }
        for (m, r0) in self.r_row.iter() {
            acc += s * sc * self.green.green(s * (x - (m + 1) as f64 * sx), t) * r0;
        }
        acc
    }

    /// Lattice amplitudes `(R_{m,n}, L_{m,n})` reassembled as
    /// `a_{m,n} = a+(mX, nT) + (-1)^n a-(mX, nT)`.
    pub fn amplitudes_at(&self, m: i64, n: usize) -> (Complex64, Complex64) {
        let x = m as f64 * self.green.scales.x;
        let t = n as f64 * self.green.scales.t;
        let alt = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        let r = self.r_field(FieldSign::Plus, x, t) + alt * self.r_field(FieldSign::Minus, x, t);
        let l = self.l_field(FieldSign::Plus, x, t) + alt * self.l_field(FieldSign::Minus, x, t);
        (r, l)
    }

    /// Both amplitude rows at step `n` over `m in [-n, n]`, evaluated in
    /// parallel.
    pub fn step_amplitudes(&self, n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        let reach = n as i64;
        (-reach..=reach)
            .into_par_iter()
            .map(|m| self.amplitudes_at(m, n))
            .unzip()
    }
}
