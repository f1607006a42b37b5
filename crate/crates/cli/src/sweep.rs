//! Sweeps over the pulse area `gT` at `g = 1`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt::Write as _;

use ico_cqed_core::analytic::{general_postselect, state_after_both, CavityOrder};
use ico_cqed_core::observables::{
    condition_on_atom, ket_probability, linear_entropy, reduced_cavity0, sigma_z_expectation,
};
use ico_cqed_core::{AtomFieldKet, AtomLevel, Control, Error, PureState, SystemParams};
use serde::{Deserialize, Serialize};

use crate::{SweepError, UsageError};

/// Sweeps longer than this are refused.
pub const MAX_POINTS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepScenario {
    #[serde(rename = "series_C0C1")]
    SeriesC0C1,
    #[serde(rename = "series_C1C0")]
    SeriesC1C0,
    #[serde(rename = "ico_j0")]
    IcoJ0,
    #[serde(rename = "ico_j1")]
    IcoJ1,
}

impl SweepScenario {
    pub fn name(self) -> &'static str {
        match self {
            SweepScenario::SeriesC0C1 => "series_C0C1",
            SweepScenario::SeriesC1C0 => "series_C1C0",
            SweepScenario::IcoJ0 => "ico_j0",
            SweepScenario::IcoJ1 => "ico_j1",
        }
    }

    pub fn is_series(self) -> bool {
        matches!(self, SweepScenario::SeriesC0C1 | SweepScenario::SeriesC1C0)
    }
}

mod level {
    use ico_cqed_core::AtomLevel;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(l: &AtomLevel, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(l.label())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<AtomLevel, D::Error> {
        match String::deserialize(d)?.as_str() {
            "e" => Ok(AtomLevel::Excited),
            "g" => Ok(AtomLevel::Ground),
            other => Err(de::Error::invalid_value(
                de::Unexpected::Str(other),
                &"\"e\" or \"g\"",
            )),
        }
    }
}

/// A column of the sweep table.
///
/// JSON forms: `{"ket_prob":{"atom":"e","n":0,"m":0}}`, `{"entropy":"g"}`,
/// `"sigma_z"`, `"control_prob"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Probability of one atom-field ket. Negative occupations name kets that
    /// cannot exist and give a column of zeros.
    KetProb {
        #[serde(with = "level")]
        atom: AtomLevel,
        n: i64,
        m: i64,
    },
    /// Linear entropy of cavity 0 after finding the atom in the given level.
    Entropy(#[serde(with = "level")] AtomLevel),
    SigmaZ,
    /// Probability of the control outcome; switch scenarios only.
    ControlProb,
}

impl Quantity {
    pub fn ket_prob(atom: AtomLevel, n: i64, m: i64) -> Self {
        Quantity::KetProb { atom, n, m }
    }

    /// Column header.
    pub fn id(&self) -> String {
        match self {
            Quantity::KetProb { atom, n, m } => format!("ket_prob_{}_{n}_{m}", atom.label()),
            Quantity::Entropy(l) => format!("entropy_{}", l.label()),
            Quantity::SigmaZ => "sigma_z".to_string(),
            Quantity::ControlProb => "control_prob".to_string(),
        }
    }
}

fn default_theta() -> f64 {
    FRAC_PI_4
}

fn default_stop() -> f64 {
    10.0
}

fn default_step() -> f64 {
    0.01
}

/// One sweep. Field names match the JSON config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub scenario: SweepScenario,
    pub quantities: Vec<Quantity>,
    #[serde(default)]
    pub n: u32,
    #[serde(default)]
    pub m: u32,
    #[serde(default)]
    pub xi: f64,
    #[serde(default)]
    pub chi: f64,
    #[serde(default = "default_theta")]
    pub theta: f64,
    #[serde(default)]
    pub varphi: f64,
    #[serde(rename = "gT_start", default)]
    pub gt_start: f64,
    #[serde(rename = "gT_stop", default = "default_stop")]
    pub gt_stop: f64,
    #[serde(rename = "gT_step", default = "default_step")]
    pub gt_step: f64,
    #[serde(default)]
    pub omega_t: f64,
}

impl SweepConfig {
    /// Default grid `[0, 10]` in steps of `0.01`, atom excited, maximally
    /// indefinite control.
    pub fn new(scenario: SweepScenario, quantities: Vec<Quantity>) -> Self {
        Self {
            scenario,
            quantities,
            n: 0,
            m: 0,
            xi: 0.0,
            chi: 0.0,
            theta: default_theta(),
            varphi: 0.0,
            gt_start: 0.0,
            gt_stop: default_stop(),
            gt_step: default_step(),
            omega_t: 0.0,
        }
    }

    pub fn with_photons(mut self, n: u32, m: u32) -> Self {
        self.n = n;
        self.m = m;
        self
    }

    pub fn with_grid(mut self, start: f64, stop: f64, step: f64) -> Self {
        self.gt_start = start;
        self.gt_stop = stop;
        self.gt_step = step;
        self
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        let finite = [
            ("xi", self.xi),
            ("chi", self.chi),
            ("theta", self.theta),
            ("varphi", self.varphi),
            ("gT_start", self.gt_start),
            ("gT_stop", self.gt_stop),
            ("gT_step", self.gt_step),
            ("omega_t", self.omega_t),
        ];
        for (field, v) in finite {
            if !v.is_finite() {
                return Err(UsageError::new(field, format!("{v} is not finite")));
            }
        }
        if self.quantities.is_empty() {
            return Err(UsageError::new(
                "quantities",
                "at least one quantity is required",
            ));
        }
        if self.scenario.is_series() && self.quantities.contains(&Quantity::ControlProb) {
            return Err(UsageError::new(
                "quantities",
                format!(
                    "control_prob is undefined for scenario {}",
                    self.scenario.name()
                ),
            ));
        }
        if !(0.0..=FRAC_PI_2).contains(&self.xi) {
            return Err(UsageError::new(
                "xi",
                format!("{} is outside [0, pi/2]", self.xi),
            ));
        }
        if !(0.0..=FRAC_PI_2).contains(&self.theta) {
            return Err(UsageError::new(
                "theta",
                format!("{} is outside [0, pi/2]", self.theta),
            ));
        }
        if self.gt_step <= 0.0 {
            return Err(UsageError::new(
                "gT_step",
                format!("{} must be positive", self.gt_step),
            ));
        }
        if self.gt_start < 0.0 {
            return Err(UsageError::new(
                "gT_start",
                format!("{} must be non-negative", self.gt_start),
            ));
        }
        if self.gt_start > self.gt_stop {
            return Err(UsageError::new(
                "gT_stop",
                format!("{} is below gT_start = {}", self.gt_stop, self.gt_start),
            ));
        }
        if (self.gt_stop - self.gt_start) / self.gt_step >= MAX_POINTS as f64 {
            return Err(UsageError::new(
                "gT_step",
                format!("grid exceeds {MAX_POINTS} points"),
            ));
        }
        Ok(())
    }

    /// Grid points `gT_start + i·gT_step` up to `gT_stop` (with a 1e-9 step
    /// slack so that a stop on the grid is included). Points within round-off
    /// of a multiple of 1e-9 are snapped to it, so `0.35` is not evaluated
    /// and printed as `0.35000000000000003`.
    pub fn grid(&self) -> Vec<f64> {
        let count = ((self.gt_stop - self.gt_start) / self.gt_step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| {
                let x = self.gt_start + i as f64 * self.gt_step;
                let snapped = (x * 1e9).round() / 1e9;
                if (snapped - x).abs() <= 1e-12 * x.abs().max(1.0) {
                    snapped
                } else {
                    x
                }
            })
            .collect()
    }

    pub fn params(&self, gt: f64) -> SystemParams {
        SystemParams::new(1.0, gt)
            .with_photons(self.n, self.m)
            .with_atom(self.xi, self.chi)
            .with_control(self.theta, self.varphi)
    }

    /// Evaluates every quantity at one grid point. `None` marks a conditional
    /// quantity whose conditioning event has vanishing probability.
    pub fn evaluate(&self, gt: f64) -> Result<Vec<Option<f64>>, Error> {
        let p = self.params(gt);
        let (state, control_prob) = match self.scenario {
            SweepScenario::SeriesC0C1 => {
                (Some(state_after_both(CavityOrder::C0ThenC1, &p, gt)?), 1.0)
            }
            SweepScenario::SeriesC1C0 => {
                (Some(state_after_both(CavityOrder::C1ThenC0, &p, gt)?), 1.0)
            }
            SweepScenario::IcoJ0 => switch_state(Control::Zero, &p, self.omega_t)?,
            SweepScenario::IcoJ1 => switch_state(Control::One, &p, self.omega_t)?,
        };
        Ok(self
            .quantities
            .iter()
            .map(|q| match q {
                Quantity::ControlProb => Some(control_prob),
                _ => state.as_ref().and_then(|s| state_quantity(q, s)),
            })
            .collect())
    }
}

fn switch_state(
    j: Control,
    p: &SystemParams,
    omega_t: f64,
) -> Result<(Option<PureState<AtomFieldKet>>, f64), Error> {
    match general_postselect(j, p, omega_t) {
        Ok((s, prob)) => Ok((Some(s), prob)),
        Err(Error::ImpossiblePostselection { probability }) => Ok((None, probability)),
        Err(e) => Err(e),
    }
}

fn state_quantity(q: &Quantity, s: &PureState<AtomFieldKet>) -> Option<f64> {
    match *q {
        Quantity::KetProb { atom, n, m } => match (u32::try_from(n), u32::try_from(m)) {
            (Ok(n), Ok(m)) => Some(ket_probability(s, &AtomFieldKet::new(atom, n, m))),
            _ => Some(0.0),
        },
        Quantity::Entropy(level) => condition_on_atom(s, level)
            .ok()
            .map(|(f, _)| linear_entropy(&reduced_cavity0(&f))),
        Quantity::SigmaZ => Some(sigma_z_expectation(s)),
        Quantity::ControlProb => unreachable!("handled by the caller"),
    }
}

/// Sweep output: one row per grid point, one column per quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub grid: Vec<f64>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl SweepTable {
    pub fn column(&self, id: &str) -> Option<Vec<Option<f64>>> {
        let i = self.columns.iter().position(|c| c == id)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Index of the grid point nearest `gt`.
    pub fn nearest_row(&self, gt: f64) -> Option<usize> {
        (0..self.grid.len()).min_by(|&a, &b| {
            (self.grid[a] - gt)
                .abs()
                .total_cmp(&(self.grid[b] - gt).abs())
        })
    }

    /// CSV text; numbers use the shortest digits that parse back to the same
    /// double (exponent form below 1e-5), undefined cells are empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("gT");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (gt, row) in self.grid.iter().zip(&self.rows) {
            write!(out, "{gt:?}").unwrap();
            for v in row {
                out.push(',');
                if let Some(v) = v {
                    write!(out, "{v:?}").unwrap();
                }
            }
            out.push('\n');
        }
        out
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepTable, SweepError> {
    cfg.validate()?;
    let grid = cfg.grid();
    let rows = grid
        .iter()
        .map(|&gt| {
            cfg.evaluate(gt)
                .map_err(|source| SweepError::Model { gt, source })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepTable {
        columns: cfg.quantities.iter().map(Quantity::id).collect(),
        grid,
        rows,
    })
}

/// Runs several sweeps on a shared grid and joins their columns. With more
/// than one config, column ids are prefixed with `<scenario>:`.
pub fn run_joined(cfgs: &[SweepConfig]) -> Result<SweepTable, SweepError> {
    let Some(first) = cfgs.first() else {
        return Err(UsageError::new("configs", "no sweep to run").into());
    };
    let prefix = cfgs.len() > 1;
    let mut joined: Option<SweepTable> = None;
    for cfg in cfgs {
        if (cfg.gt_start, cfg.gt_stop, cfg.gt_step)
            != (first.gt_start, first.gt_stop, first.gt_step)
        {
            return Err(UsageError::new("gT_step", "joined sweeps must share one grid").into());
        }
        let mut t = run_sweep(cfg)?;
        if prefix {
            for c in &mut t.columns {
                *c = format!("{}:{c}", cfg.scenario.name());
            }
        }
        joined = Some(match joined {
            None => t,
            Some(mut acc) => {
                acc.columns.extend(t.columns);
                for (row, extra) in acc.rows.iter_mut().zip(t.rows) {
                    row.extend(extra);
                }
                acc
            }
        });
    }
    Ok(joined.expect("at least one config"))
}
