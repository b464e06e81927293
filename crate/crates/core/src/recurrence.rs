//! Decoupled evolution of the two coin channels.
//!
//! Each channel `a` in {R, L} obeys the same three-term recurrence
//!
//! ```text
//!   a_{m,n+1} = a_{m,n-1} + sqrt(rho) [a_{m-1,n} - a_{m+1,n}]
//! ```
//!
//! once the `n = 1` row has been produced by a single coupled step. After
//! that bootstrap the two channels never exchange data, so they can be
//! advanced independently (and on separate threads).

use num_complex::Complex64;

use crate::coin::CoinParameter;
use crate::walk::WalkState;

/// Which coin channel a decoupled history tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Right,
    Left,
}

/// Rolling two-row window of one channel: rows `n-1` (over `[-(n-1), n-1]`)
/// and `n` (over `[-n, n]`).
#[derive(Debug, Clone, PartialEq)]
pub struct DecoupledHistory {
    channel: Channel,
    step: usize,
    prev: Vec<Complex64>,
    curr: Vec<Complex64>,
}

impl DecoupledHistory {
    /// Seeds both channel histories from an `n = 0` state: row 0 is read
    /// off directly and row 1 comes from one coupled step.
    ///
    /// Panics if `initial` is not an `n = 0` state.
    pub fn bootstrap(
        initial: &WalkState,
        coin: &CoinParameter,
    ) -> (DecoupledHistory, DecoupledHistory) {
        assert_eq!(
            initial.step_index(),
            0,
            "bootstrap requires an n = 0 state"
        );
        let first = initial.step(coin);
        let row1_r: Vec<Complex64> = (-1..=1).map(|m| first.r_amp(m)).collect();
        let row1_l: Vec<Complex64> = (-1..=1).map(|m| first.l_amp(m)).collect();
        (
            DecoupledHistory {
                channel: Channel::Right,
                step: 1,
                prev: vec![initial.r_amp(0)],
                curr: row1_r,
            },
            DecoupledHistory {
                channel: Channel::Left,
                step: 1,
                prev: vec![initial.l_amp(0)],
                curr: row1_l,
            },
        )
    }

    pub fn channel(&self) -> Channel {
        self.channel
    }

    /// Step index of the current (latest) row.
    pub fn step_index(&self) -> usize {
        self.step
    }

    /// Amplitude `a_{m,n}` of the current row; zero outside `[-n, n]`.
    pub fn amplitude(&self, m: i64) -> Complex64 {
        let n = self.step as i64;
        if (-n..=n).contains(&m) {
            self.curr[(m + n) as usize]
        } else {
            Complex64::ZERO
        }
    }

    /// The current row over `[-n, n]`.
    pub fn current_row(&self) -> &[Complex64] {
        &self.curr
    }

    /// Advances the window one step with the three-term recurrence.
    pub fn step(&self, coin: &CoinParameter) -> DecoupledHistory {
        let n = self.step as i64;
        let sr = coin.sqrt_rho();
        let prev_at = |m: i64| -> Complex64 {
            if (-(n - 1)..=(n - 1)).contains(&m) {
                self.prev[(m + n - 1) as usize]
            } else {
                Complex64::ZERO
            }
        };
        let next: Vec<Complex64> = (-(n + 1)..=(n + 1))
            .map(|m| prev_at(m) + sr * (self.amplitude(m - 1) - self.amplitude(m + 1)))
            .collect();
        DecoupledHistory {
            channel: self.channel,
            step: self.step + 1,
            prev: self.curr.clone(),
            curr: next,
        }
    }

    /// Advances until the current row sits at step `n`.
    pub fn step_to(&self, coin: &CoinParameter, n: usize) -> DecoupledHistory {
        assert!(n >= self.step, "cannot step backwards");
        let mut h = self.clone();
        while h.step < n {
            h = h.step(coin);
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn bootstrap_right_mover() {
        let s = WalkState::new(C64::new(1.0, 0.0), C64::ZERO).unwrap();
        let coin = CoinParameter::hadamard();
        let (hr, hl) = DecoupledHistory::bootstrap(&s, &coin);
        assert_eq!(hr.channel(), Channel::Right);
        assert_eq!(hr.step_index(), 1);
        assert_eq!(hr.prev, vec![C64::new(1.0, 0.0)]);
        assert!((hr.amplitude(1).re - FRAC_1_SQRT_2).abs() <= 1e-15);
        assert_eq!(hr.amplitude(-1), C64::ZERO);
        assert_eq!(hl.prev, vec![C64::ZERO]);
        assert!((hl.amplitude(1).re - FRAC_1_SQRT_2).abs() <= 1e-15);
    }

    #[test]
    fn bootstrap_rho_one_keeps_left_channel_empty() {
        let s = WalkState::new(C64::new(1.0, 0.0), C64::ZERO).unwrap();
        let coin = CoinParameter::new(1.0).unwrap();
        let (_, hl) = DecoupledHistory::bootstrap(&s, &coin);
        assert!(hl.prev.iter().all(|a| *a == C64::ZERO));
        assert!(hl.current_row().iter().all(|a| *a == C64::ZERO));
    }

    #[test]
    fn bootstrap_matches_one_coupled_step() {
        let s = WalkState::new(
            C64::new(FRAC_1_SQRT_2, 0.0),
            C64::new(0.0, FRAC_1_SQRT_2),
        )
        .unwrap();
        let coin = CoinParameter::hadamard();
        let (hr, hl) = DecoupledHistory::bootstrap(&s, &coin);
        let s1 = s.evolve(&coin, 1);
        for m in -1..=1 {
            assert_eq!(hr.amplitude(m), s1.r_amp(m));
            assert_eq!(hl.amplitude(m), s1.l_amp(m));
        }
    }

    #[test]
    fn decoupled_step_reaches_hand_values() {
        let s = WalkState::new(C64::new(1.0, 0.0), C64::ZERO).unwrap();
        let coin = CoinParameter::hadamard();
        let (hr, _) = DecoupledHistory::bootstrap(&s, &coin);
        let hr2 = hr.step(&coin);
        assert!((hr2.amplitude(2).re - 0.5).abs() <= 1e-15);
        assert!((hr2.amplitude(0).re - 0.5).abs() <= 1e-15);
        assert_eq!(hr2.amplitude(-2), C64::ZERO);
    }

    #[test]
    fn rho_zero_rows_alternate_with_period_two() {
        let s = WalkState::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8)).unwrap();
        let coin = CoinParameter::new(0.0).unwrap();
        let (hr, _) = DecoupledHistory::bootstrap(&s, &coin);
        // sqrt(rho) = 0 makes a_{m,n+1} = a_{m,n-1}
        let h3 = hr.step(&coin).step(&coin);
        assert_eq!(h3.step_index(), 3);
        for m in -3..=3 {
            assert_eq!(h3.amplitude(m), hr.amplitude(m));
        }
    }

    #[test]
    fn matches_coupled_walk_over_200_steps() {
        let s = WalkState::new(
            C64::new(FRAC_1_SQRT_2, 0.0),
            C64::new(0.0, FRAC_1_SQRT_2),
        )
        .unwrap();
        let coin = CoinParameter::hadamard();
        let (mut hr, mut hl) = DecoupledHistory::bootstrap(&s, &coin);
        let mut coupled = s.evolve(&coin, 1);
        let mut worst: f64 = 0.0;
        for _ in 1..200 {
            hr = hr.step(&coin);
            hl = hl.step(&coin);
            coupled = coupled.step(&coin);
            for m in coupled.site_range() {
                worst = worst
                    .max((hr.amplitude(m) - coupled.r_amp(m)).norm())
                    .max((hl.amplitude(m) - coupled.l_amp(m)).norm());
            }
        }
        assert!(worst <= 1e-12, "max deviation {worst}");
    }

    #[test]
    fn channels_advance_independently_on_separate_threads() {
        let s = WalkState::new(
            C64::new(FRAC_1_SQRT_2, 0.0),
            C64::new(0.0, FRAC_1_SQRT_2),
        )
        .unwrap();
        let coin = CoinParameter::new(0.37).unwrap();
        let (hr, hl) = DecoupledHistory::bootstrap(&s, &coin);
        let r_seq = hr.step_to(&coin, 50);
        let l_seq = hl.step_to(&coin, 50);
        let (r_par, l_par) = std::thread::scope(|scope| {
            let r = scope.spawn(|| hr.step_to(&coin, 50));
            let l = scope.spawn(|| hl.step_to(&coin, 50));
            (r.join().unwrap(), l.join().unwrap())
        });
        assert_eq!(r_seq, r_par);
        assert_eq!(l_seq, l_par);
        // a corrupted L window leaves R evolution bitwise untouched
        let mut hl_bad = hl.clone();
        for a in hl_bad.curr.iter_mut() {
            *a += C64::new(10.0, -3.0);
        }
        let _ = hl_bad.step_to(&coin, 50);
        assert_eq!(hr.step_to(&coin, 50), r_seq);
    }
}
