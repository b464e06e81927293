//! The exact discrete walk: coupled amplitude recurrences and probability
//! extraction.
//!
//! A state after `n` steps holds the two complex amplitude rows `R_{m,n}`
//! and `L_{m,n}` over lattice sites `m` in `[-n, n]`. One step of the walk
//! updates them as
//!
//! ```text
//!   R_{m,n+1} = sqrt(rho)   R_{m-1,n} + sqrt(1-rho) L_{m+1,n}
//!   L_{m,n+1} = sqrt(1-rho) R_{m-1,n} - sqrt(rho)   L_{m+1,n}
//! ```
//!
//! and the site-occupation probability is `P_m = |R_{m,n}|^2 + |L_{m,n}|^2`.

use num_complex::Complex64;

use crate::coin::CoinParameter;
use crate::error::{Error, Result};

/// Tolerance on the initial-spinor norm check.
const NORM_TOL: f64 = 1e-12;

/// Walk state at a fixed time step: two amplitude rows over `[-n, n]`,
/// stored with the offset mapping `m -> m + n`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    step: usize,
    r: Vec<Complex64>,
    l: Vec<Complex64>,
}

impl WalkState {
    /// State at `n = 0` with the particle at site 0 in the coin spinor
    /// `(r0, l0)`. Requires `|r0|^2 + |l0|^2 = 1` within 1e-12.
    pub fn new(r0: Complex64, l0: Complex64) -> Result<Self> {
        let norm_sq = r0.norm_sqr() + l0.norm_sqr();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self {
            step: 0,
            r: vec![r0],
            l: vec![l0],
        })
    }

    /// Builds a state directly from amplitude rows over `[-step, step]`.
    /// Both rows must have length `2*step + 1`; no normalization is imposed.
    pub fn from_rows(step: usize, r: Vec<Complex64>, l: Vec<Complex64>) -> Self {
        assert_eq!(r.len(), 2 * step + 1, "R row length mismatch");
        assert_eq!(l.len(), 2 * step + 1, "L row length mismatch");
        Self { step, r, l }
    }

    /// Number of steps taken so far.
    pub fn step_index(&self) -> usize {
        self.step
    }

    /// Sites carrying stored amplitudes: `-n ..= n`.
    pub fn site_range(&self) -> std::ops::RangeInclusive<i64> {
        let n = self.step as i64;
        -n..=n
    }

    fn index_of(&self, m: i64) -> Option<usize> {
        let n = self.step as i64;
        if (-n..=n).contains(&m) {
            Some((m + n) as usize)
        } else {
            None
        }
    }

    /// `R_{m,n}`; zero outside the stored range.
    pub fn r_amp(&self, m: i64) -> Complex64 {
        self.index_of(m).map_or(Complex64::ZERO, |i| self.r[i])
    }

    /// `L_{m,n}`; zero outside the stored range.
    pub fn l_amp(&self, m: i64) -> Complex64 {
        self.index_of(m).map_or(Complex64::ZERO, |i| self.l[i])
    }

    /// Total norm `sum_m |R_{m,n}|^2 + |L_{m,n}|^2`.
    pub fn norm_sq(&self) -> f64 {
        self.r
            .iter()
            .zip(&self.l)
            .map(|(r, l)| r.norm_sqr() + l.norm_sqr())
            .sum()
    }

    /// One application of the walk operator.
    pub fn step(&self, coin: &CoinParameter) -> WalkState {
        let n = self.step as i64;
        let sr = coin.sqrt_rho();
        let sc = coin.sqrt_comp();
        let len = 2 * (self.step + 1) + 1;
        let mut r = vec![Complex64::ZERO; len];
        let mut l = vec![Complex64::ZERO; len];
        for m in -(n + 1)..=(n + 1) {
            let i = (m + n + 1) as usize;
            let r_prev = self.r_amp(m - 1);
            let l_next = self.l_amp(m + 1);
            r[i] = sr * r_prev + sc * l_next;
            l[i] = sc * r_prev - sr * l_next;
        }
        WalkState {
            step: self.step + 1,
            r,
            l,
        }
    }

    /// `steps` applications of the walk operator. The target window
    /// `[-N, N]` is allocated once; intermediate rows never reallocate.
    pub fn evolve(&self, coin: &CoinParameter, steps: usize) -> WalkState {
        if steps == 0 {
            return self.clone();
        }
        let total = self.step + steps;
        let width = 2 * total + 1;
        let off = total as i64;
        let sr = coin.sqrt_rho();
        let sc = coin.sqrt_comp();

        let mut cur_r = vec![Complex64::ZERO; width];
        let mut cur_l = vec![Complex64::ZERO; width];
        let mut new_r = vec![Complex64::ZERO; width];
        let mut new_l = vec![Complex64::ZERO; width];
        for m in self.site_range() {
            cur_r[(m + off) as usize] = self.r_amp(m);
            cur_l[(m + off) as usize] = self.l_amp(m);
        }

        for n in self.step..total {
            let reach = (n + 1) as i64;
            for m in -reach..=reach {
                let i = (m + off) as usize;
                let r_prev = if i >= 1 { cur_r[i - 1] } else { Complex64::ZERO };
                let l_next = if i + 1 < width {
                    cur_l[i + 1]
                } else {
                    Complex64::ZERO
                };
                new_r[i] = sr * r_prev + sc * l_next;
                new_l[i] = sc * r_prev - sr * l_next;
            }
            std::mem::swap(&mut cur_r, &mut new_r);
            std::mem::swap(&mut cur_l, &mut new_l);
        }

        WalkState {
            step: total,
            r: cur_r,
            l: cur_l,
        }
    }

    /// Site-resolved probabilities at the current step.
    pub fn probability(&self) -> ProbabilityDistribution {
        let sites = self.site_range().collect();
        let p_right: Vec<f64> = self.r.iter().map(|a| a.norm_sqr()).collect();
        let p_left: Vec<f64> = self.l.iter().map(|a| a.norm_sqr()).collect();
        let p_total = p_right
            .iter()
            .zip(&p_left)
            .map(|(r, l)| r + l)
            .collect();
        ProbabilityDistribution {
            sites,
            p_total,
            p_right,
            p_left,
        }
    }
}

/// Probabilities over a finite set of lattice sites, split by coin channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    pub sites: Vec<i64>,
    pub p_total: Vec<f64>,
    pub p_right: Vec<f64>,
    pub p_left: Vec<f64>,
}

impl ProbabilityDistribution {
    pub fn total_mass(&self) -> f64 {
        self.p_total.iter().sum()
    }

    /// First moment `sum_m m P_m / sum_m P_m`.
    pub fn mean_displacement(&self) -> Result<f64> {
        let mass = self.total_mass();
        if mass.is_nan() || mass <= 0.0 {
            return Err(Error::EmptyDistribution);
        }
        let first: f64 = self
            .sites
            .iter()
            .zip(&self.p_total)
            .map(|(&m, &p)| m as f64 * p)
            .sum();
        Ok(first / mass)
    }

    /// `P_m`; zero for sites outside the stored range.
    pub fn p_at(&self, m: i64) -> f64 {
        match self.sites.binary_search(&m) {
            Ok(i) => self.p_total[i],
            Err(_) => 0.0,
        }
    }
}
