//! Run configuration, mode dispatch, and CSV emission for the `qwalk`
//! binary.
//!
//! Every mode produces a [`ResultTable`]: a metadata block (emitted as
//! leading `#` comment lines), a header row, and rectangular numeric
//! data. Identical configurations produce byte-identical files; floats
//! are written in scientific notation with 17 significant digits, which
//! round-trips `f64` exactly.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use qwalk::{
    uniform_grid, Branch, CoinParameter, ContinuumFields, CutoffSpec, DecoupledHistory,
    DispersionBranch, ExactFields, LatticeScales, Parity, WalkState,
};

pub const SOLVER_VERSION: &str = concat!("qwalk ", env!("CARGO_PKG_VERSION"));

/// Errors with the exit-status contract: config 2, numeric 3, I/O 4.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(qwalk::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<qwalk::Error> for CliError {
    fn from(err: qwalk::Error) -> Self {
        use qwalk::Error::*;
        match err {
            NonConvergent { .. } | AiryUnderflow { .. } | AiryOverflow { .. } => {
                CliError::Numeric(err)
            }
            _ => CliError::Config(err.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Walk,
    Decoupled,
    Spectral,
    Longwave,
    Dispersion,
    Compare,
    Nv,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Walk => "walk",
            Mode::Decoupled => "decoupled",
            Mode::Spectral => "spectral",
            Mode::Longwave => "longwave",
            Mode::Dispersion => "dispersion",
            Mode::Compare => "compare",
            Mode::Nv => "nv",
        }
    }
}

/// Fully resolved run parameters.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub rho: f64,
    pub steps: Option<usize>,
    pub tau: Option<f64>,
    pub r0: Complex64,
    pub l0: Complex64,
    pub w: f64,
    pub grid: Option<(f64, f64, f64)>,
    pub nodes: usize,
    pub normalize: bool,
}

impl RunConfig {
    /// Baseline configuration: the symmetric reference spinor
    /// `(1/sqrt(2), i/sqrt(2))`, Hadamard coin, `w = 0.4`, 4096 nodes.
    pub fn new(mode: Mode) -> Self {
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            mode,
            rho: 0.5,
            steps: None,
            tau: None,
            r0: Complex64::new(inv_sqrt2, 0.0),
            l0: Complex64::new(0.0, inv_sqrt2),
            w: 0.4,
            grid: None,
            nodes: 4096,
            normalize: false,
        }
    }
}

/// One named column of table data.
#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Int(String, Vec<i64>),
    Real(String, Vec<f64>),
}

impl Column {
    fn name(&self) -> &str {
        match self {
            Column::Int(n, _) => n,
            Column::Real(n, _) => n,
        }
    }

    fn len(&self) -> usize {
        match self {
            Column::Int(_, v) => v.len(),
            Column::Real(_, v) => v.len(),
        }
    }

    fn cell(&self, row: usize) -> String {
        match self {
            Column::Int(_, v) => v[row].to_string(),
            Column::Real(name, v) => {
                assert!(v[row].is_finite(), "non-finite entry in column {name}");
                format_real(v[row])
            }
        }
    }
}

/// Scientific notation with 17 significant digits: exact f64 round-trip.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Rectangular results plus a metadata block.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<Column>,
}

impl ResultTable {
    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Column::len)
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.metadata.push((key.to_string(), value.into()));
    }

    /// Renders the CSV: `#` metadata lines, header, rows, LF endings.
    pub fn to_csv(&self) -> String {
        let rows = self.rows();
        for c in &self.columns {
            assert_eq!(c.len(), rows, "table is not rectangular");
        }
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let header: Vec<&str> = self.columns.iter().map(Column::name).collect();
        let _ = writeln!(out, "{}", header.join(","));
        for r in 0..rows {
            let cells: Vec<String> = self.columns.iter().map(|c| c.cell(r)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn emit_csv(&self, path: &Path) -> Result<(), CliError> {
        let mut file = std::fs::File::create(path)?;
        file.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }
}

/// Renders a complex number in the CLI's `a+bi` input syntax.
pub fn format_complex(z: Complex64) -> String {
    if z.im >= 0.0 {
        format!("{}+{}i", format_real(z.re), format_real(z.im))
    } else {
        format!("{}{}i", format_real(z.re), format_real(z.im))
    }
}

/// Parses the `a+bi` syntax: `1`, `-0.3`, `i`, `-i`, `0.8i`, `0.6+0.8i`,
/// `1e-2-3.5e-4i`.
pub fn parse_complex(input: &str) -> Result<Complex64, CliError> {
    let s = input.trim();
    if s.is_empty() {
        return Err(CliError::Config("empty complex literal".into()));
    }
    let bad = || CliError::Config(format!("cannot parse complex number from {input:?}"));
    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // find the sign separating real and imaginary parts: the last
        // +/- that is neither leading nor part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == b'+' || bytes[i] == b'-')
                && bytes[i - 1] != b'e'
                && bytes[i - 1] != b'E'
            {
                split = Some(i);
                break;
            }
        }
        let (re_str, im_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let re: f64 = re_str.trim().parse().map_err(|_| bad())?;
        let im: f64 = match im_str.trim() {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other.parse().map_err(|_| bad())?,
        };
        Ok(Complex64::new(re, im))
    } else {
        let re: f64 = s.parse().map_err(|_| bad())?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Parses a `start:stop:step` grid specification.
pub fn parse_grid(input: &str) -> Result<(f64, f64, f64), CliError> {
    let parts: Vec<&str> = input.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!(
            "grid must be start:stop:step, got {input:?}"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| CliError::Config(format!("bad grid number {p:?}")))
        })
        .collect::<Result<_, _>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if step.is_nan() || step <= 0.0 || stop < start || !start.is_finite() || !stop.is_finite() {
        return Err(CliError::Config(format!(
            "grid {input:?} must satisfy stop >= start and step > 0"
        )));
    }
    Ok((start, stop, step))
}

fn require_steps(config: &RunConfig) -> Result<usize, CliError> {
    config.steps.ok_or_else(|| {
        CliError::Config(format!("mode {} requires --steps", config.mode.name()))
    })
}

fn validated_coin(config: &RunConfig) -> Result<CoinParameter, CliError> {
    CoinParameter::new(config.rho)
        .map_err(|e| CliError::Config(e.to_string()))
}

fn initial_state(config: &RunConfig) -> Result<WalkState, CliError> {
    WalkState::new(config.r0, config.l0).map_err(|e| CliError::Config(e.to_string()))
}

fn base_metadata(table: &mut ResultTable, config: &RunConfig) {
    table.meta("solver", SOLVER_VERSION);
    table.meta("mode", config.mode.name());
    table.meta("rho", format_real(config.rho));
}

fn spinor_metadata(table: &mut ResultTable, config: &RunConfig) {
    table.meta("r0", format_complex(config.r0));
    table.meta("l0", format_complex(config.l0));
}

/// Executes a configuration and returns its result table.
pub fn run(config: &RunConfig) -> Result<ResultTable, CliError> {
    if config.w.is_nan() || config.w <= 0.0 {
        return Err(CliError::Config(format!(
            "cutoff width w = {} must be positive",
            config.w
        )));
    }
    if config.nodes < 512 {
        return Err(CliError::Config(format!(
            "--nodes {} too small; need at least 512",
            config.nodes
        )));
    }
    match config.mode {
        Mode::Walk => run_walk(config),
        Mode::Decoupled => run_decoupled(config),
        Mode::Spectral => run_spectral(config),
        Mode::Longwave => run_longwave(config),
        Mode::Dispersion => run_dispersion(config),
        Mode::Compare => run_compare(config),
        Mode::Nv => run_nv(config),
    }
}

/// Executes and writes the CSV in one call.
pub fn execute(config: &RunConfig, out: &Path) -> Result<(), CliError> {
    run(config)?.emit_csv(out)
}

fn distribution_columns(
    sites: Vec<i64>,
    p: Vec<f64>,
    p_r: Vec<f64>,
    p_l: Vec<f64>,
) -> Vec<Column> {
    vec![
        Column::Int("m".into(), sites),
        Column::Real("P".into(), p),
        Column::Real("P_R".into(), p_r),
        Column::Real("P_L".into(), p_l),
    ]
}

fn run_walk(config: &RunConfig) -> Result<ResultTable, CliError> {
    let steps = require_steps(config)?;
    let coin = validated_coin(config)?;
    let state = initial_state(config)?.evolve(&coin, steps);
    let dist = state.probability();
    let mut table = ResultTable::default();
    base_metadata(&mut table, config);
    table.meta("steps", steps.to_string());
    spinor_metadata(&mut table, config);
    table.columns = distribution_columns(dist.sites, dist.p_total, dist.p_right, dist.p_left);
    Ok(table)
}

fn run_decoupled(config: &RunConfig) -> Result<ResultTable, CliError> {
    let steps = require_steps(config)?;
    let coin = validated_coin(config)?;
    let state = initial_state(config)?;
    let (sites, p, p_r, p_l) = decoupled_distribution(&state, &coin, steps);
    let mut table = ResultTable::default();
    base_metadata(&mut table, config);
    table.meta("steps", steps.to_string());
    spinor_metadata(&mut table, config);
    table.columns = distribution_columns(sites, p, p_r, p_l);
    Ok(table)
}

fn decoupled_distribution(
    state: &WalkState,
    coin: &CoinParameter,
    steps: usize,
) -> DistributionParts {
    let sites: Vec<i64> = (-(steps as i64)..=steps as i64).collect();
    if steps == 0 {
        let p_r = vec![state.r_amp(0).norm_sqr()];
        let p_l = vec![state.l_amp(0).norm_sqr()];
        let p = vec![p_r[0] + p_l[0]];
        return (sites, p, p_r, p_l);
    }
    let (hr, hl) = DecoupledHistory::bootstrap(state, coin);
    let hr = hr.step_to(coin, steps);
    let hl = hl.step_to(coin, steps);
    let p_r: Vec<f64> = sites.iter().map(|&m| hr.amplitude(m).norm_sqr()).collect();
    let p_l: Vec<f64> = sites.iter().map(|&m| hl.amplitude(m).norm_sqr()).collect();
    let p = p_r.iter().zip(&p_l).map(|(r, l)| r + l).collect();
    (sites, p, p_r, p_l)
}

/// Sites plus total / right-channel / left-channel probabilities.
type DistributionParts = (Vec<i64>, Vec<f64>, Vec<f64>, Vec<f64>);

fn spectral_distribution(
    state: &WalkState,
    coin: CoinParameter,
    steps: usize,
    nodes: usize,
) -> Result<DistributionParts, CliError> {
    let fields = ExactFields::new(state, coin, LatticeScales::unit(), nodes)?;
    let (r_row, l_row) = fields.step_amplitudes(steps);
    let sites: Vec<i64> = (-(steps as i64)..=steps as i64).collect();
    let p_r: Vec<f64> = r_row.iter().map(|a| a.norm_sqr()).collect();
    let p_l: Vec<f64> = l_row.iter().map(|a| a.norm_sqr()).collect();
    let p = p_r.iter().zip(&p_l).map(|(r, l)| r + l).collect();
    Ok((sites, p, p_r, p_l))
}

fn run_spectral(config: &RunConfig) -> Result<ResultTable, CliError> {
    let steps = require_steps(config)?;
    let coin = validated_coin(config)?;
    let state = initial_state(config)?;
    let mut table = ResultTable::default();
    base_metadata(&mut table, config);
    table.meta("steps", steps.to_string());
    spinor_metadata(&mut table, config);
    if coin.rho() >= 1.0 {
        // the spectral inversion divides by sqrt(1 - rho sin^2 kX)
        eprintln!("warning: rho = 1 is degenerate for the spectral path; using direct iteration");
        table.meta(
            "warning",
            "rho = 1 degenerate for spectral path; direct iteration used",
        );
        let dist = state.evolve(&coin, steps).probability();
        table.columns =
            distribution_columns(dist.sites, dist.p_total, dist.p_right, dist.p_left);
        return Ok(table);
    }
    table.meta("nodes", config.nodes.to_string());
    let (sites, p, p_r, p_l) = spectral_distribution(&state, coin, steps, config.nodes)?;
    table.columns = distribution_columns(sites, p, p_r, p_l);
    Ok(table)
}

fn run_longwave(config: &RunConfig) -> Result<ResultTable, CliError> {
    let tau = config.tau.ok_or_else(|| {
        CliError::Config("mode longwave requires --tau".into())
    })?;
    if tau.is_nan() || tau < 0.0 {
        return Err(CliError::Config(format!("--tau {tau} must be nonnegative")));
    }
    let coin = validated_coin(config)?;
    let state = initial_state(config)?;
    let cutoff = CutoffSpec::new(config.w).map_err(CliError::from)?;
    let fields = ContinuumFields::new(&state, coin, cutoff).map_err(CliError::from)?;
    let (start, stop, step) = config.grid.unwrap_or((-250.0, 250.0, 0.5));
    let grid = uniform_grid(start, stop, step);
    let parity = Parity::from_tau(tau);
    let mut dist = fields
        .probability_on_grid(&grid, tau, parity)
        .map_err(CliError::from)?;
    if config.normalize {
        dist.normalize_mass(step);
    }
    let mut table = ResultTable::default();
    base_metadata(&mut table, config);
    table.meta("tau", format_real(tau));
    spinor_metadata(&mut table, config);
    table.meta("w", format_real(config.w));
    table.meta("grid", format!("{start}:{stop}:{step}"));
    table.meta(
        "parity",
        if parity == Parity::Even { "even" } else { "odd" },
    );
    table.meta(
        "units",
        if config.normalize {
            "normalized to unit mass on the grid"
        } else {
            "arbitrary (overall scale factor omitted)"
        },
    );
    table.columns = vec![
        Column::Real("xi".into(), dist.xi),
        Column::Real("P".into(), dist.p_total),
        Column::Real("P_R".into(), dist.p_right),
        Column::Real("P_L".into(), dist.p_left),
    ];
    Ok(table)
}

fn run_dispersion(config: &RunConfig) -> Result<ResultTable, CliError> {
    let coin = validated_coin(config)?;
    let scales = LatticeScales::unit();
    let pi = std::f64::consts::PI;
    let grid = match config.grid {
        Some((start, stop, step)) => uniform_grid(start, stop, step),
        None => {
            let n = 10_000usize;
            let dk = 2.0 * pi / n as f64;
            (1..=n).map(|j| -pi + j as f64 * dk).collect()
        }
    };
    let principal = DispersionBranch::new(coin, Branch::Principal, scales);
    let folded = DispersionBranch::new(coin, Branch::Folded, scales);
    let omega0: Vec<f64> = grid.iter().map(|&k| principal.omega(k)).collect();
    let omega1: Vec<f64> = grid.iter().map(|&k| folded.omega(k)).collect();
    let residual: Vec<f64> = grid
        .iter()
        .map(|&k| principal.residual(k).max(folded.residual(k)))
        .collect();
    let mut table = ResultTable::default();
    base_metadata(&mut table, config);
    table.meta("points", grid.len().to_string());
    table.columns = vec![
        Column::Real("k".into(), grid),
        Column::Real("omega0".into(), omega0),
        Column::Real("omega1".into(), omega1),
        Column::Real("residual".into(), residual),
    ];
    Ok(table)
}

/// Hard cross-route tolerances enforced by compare mode. The
/// long-wavelength route is excluded: its agreement with the exact walk
/// is qualitative, so it is reported as descriptive statistics only.
const COMPARE_DECOUPLED_TOL: f64 = 1e-12;
const COMPARE_SPECTRAL_TOL: f64 = 1e-8;

fn run_compare(config: &RunConfig) -> Result<ResultTable, CliError> {
    let steps = require_steps(config)?;
    let coin = validated_coin(config)?;
    let state = initial_state(config)?;

    let dist = state.evolve(&coin, steps).probability();
    let (_, p_dec, _, _) = decoupled_distribution(&state, &coin, steps);
    let spectral_degenerate = coin.rho() >= 1.0;
    let p_spec = if spectral_degenerate {
        eprintln!("warning: rho = 1 is degenerate for the spectral path; using direct iteration");
        dist.p_total.clone()
    } else {
        spectral_distribution(&state, coin, steps, config.nodes)?.1
    };

    let max_diff_dec = max_abs_diff(&dist.p_total, &p_dec);
    let max_diff_spec = max_abs_diff(&dist.p_total, &p_spec);

    let mut table = ResultTable::default();
    base_metadata(&mut table, config);
    table.meta("steps", steps.to_string());
    spinor_metadata(&mut table, config);
    table.meta("nodes", config.nodes.to_string());
    if spectral_degenerate {
        table.meta(
            "warning",
            "rho = 1 degenerate for spectral path; direct iteration used",
        );
    }
    table.meta("max_diff_decoupled", format_real(max_diff_dec));
    table.meta("max_diff_spectral", format_real(max_diff_spec));

    // long-wavelength route: descriptive statistics only
    if coin.rho() > 0.0 && coin.rho() < 1.0 {
        let cutoff = CutoffSpec::new(config.w).map_err(CliError::from)?;
        let fields = ContinuumFields::new(&state, coin, cutoff).map_err(CliError::from)?;
        let reach = steps as f64 + 50.0;
        let grid = uniform_grid(-reach, reach, 0.5);
        let tau = steps as f64;
        let lw = fields
            .probability_on_grid(&grid, tau, Parity::from_tau(tau))
            .map_err(CliError::from)?;
        let (lw_peak_xi, lw_peak) = lw.peak();
        let center = lw.p_total[lw.p_total.len() / 2];
        let (exact_peak_m, _) = dist
            .sites
            .iter()
            .zip(&dist.p_total)
            .fold((0i64, f64::MIN), |best, (&m, &p)| {
                if p > best.1 {
                    (m, p)
                } else {
                    best
                }
            });
        table.meta("longwave_w", format_real(config.w));
        table.meta("longwave_peak_xi", format_real(lw_peak_xi));
        table.meta("longwave_center_to_peak", format_real(center / lw_peak));
        table.meta("exact_peak_m", exact_peak_m.to_string());
    } else {
        table.meta(
            "longwave",
            "skipped: dispersive packet degenerate at rho = 0 and rho = 1",
        );
    }

    if max_diff_dec > COMPARE_DECOUPLED_TOL {
        return Err(CliError::Numeric(qwalk::Error::NonConvergent {
            estimate: max_diff_dec,
        }));
    }
    if max_diff_spec > COMPARE_SPECTRAL_TOL {
        return Err(CliError::Numeric(qwalk::Error::NonConvergent {
            estimate: max_diff_spec,
        }));
    }

    table.columns = vec![
        Column::Int("m".into(), dist.sites),
        Column::Real("P_iter".into(), dist.p_total),
        Column::Real("P_decoupled".into(), p_dec),
        Column::Real("P_spectral".into(), p_spec),
    ];
    Ok(table)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn run_nv(config: &RunConfig) -> Result<ResultTable, CliError> {
    let steps = require_steps(config)?;
    if (config.rho - 0.5).abs() > 1e-12 {
        return Err(CliError::Config(
            "nv mode is defined for the Hadamard coin only (--rho 0.5)".into(),
        ));
    }
    let mut nv = qwalk::nv::NVState::seed();
    for _ in 0..steps {
        nv = qwalk::nv::nv_step(&nv);
    }
    let sites: Vec<i64> = nv.site_range().collect();
    let mut p_iter = Vec::with_capacity(sites.len());
    let mut p_closed = Vec::with_capacity(sites.len());
    let mut max_amp_diff: f64 = 0.0;
    for &m in &sites {
        let (r, l) = qwalk::nv::nv_closed_form(m, steps, config.nodes)?;
        p_iter.push(nv.r_hat(m).norm_sqr() + nv.l_hat(m).norm_sqr());
        p_closed.push(r.norm_sqr() + l.norm_sqr());
        max_amp_diff = max_amp_diff
            .max((r - nv.r_hat(m)).norm())
            .max((l - nv.l_hat(m)).norm());
    }
    let mut table = ResultTable::default();
    base_metadata(&mut table, config);
    table.meta("steps", steps.to_string());
    table.meta("nodes", config.nodes.to_string());
    table.meta("max_amp_diff", format_real(max_amp_diff));
    table.columns = vec![
        Column::Int("m".into(), sites),
        Column::Real("P_iter".into(), p_iter),
        Column::Real("P_closed".into(), p_closed),
    ];
    Ok(table)
}
