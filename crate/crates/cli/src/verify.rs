//! Random-draw comparison of the closed-form switch states against the
//! truncated-propagator pipeline.

use std::f64::consts::{FRAC_PI_2, TAU};

use ico_cqed_core::analytic::general_postselect;
use ico_cqed_core::oracle::{
    evolve, hadamard_control, measure_control, schrodinger_phase, TruncationWindow,
};
use ico_cqed_core::{Control, Error, SystemParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::UsageError;

/// Amplitudes and probabilities must agree to this.
pub const STATE_TOLERANCE: f64 = 1e-9;

/// `N_0² + N_1²` must equal one to this.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// One random configuration: physical parameters plus the observation time
/// and free frequency used for the Schrödinger-picture phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Draw {
    pub params: SystemParams,
    pub omega: f64,
    pub time: f64,
}

impl Draw {
    /// `gT ∈ [0, 10]`, θ and ξ in `[0, π/2]`, φ and χ in `[0, 2π)`,
    /// `n, m ∈ 0..=4`, `g ∈ [0.2, 2]`, `ω ∈ [0.1, 3]`, entry times and gaps in
    /// `[0, 3]`, observation up to 2 after the exit.
    pub fn sample(rng: &mut impl Rng) -> Self {
        let g = rng.random_range(0.2..2.0);
        let gt = rng.random_range(0.0..=10.0);
        let t = gt / g;
        let first = rng.random_range(0.0..3.0);
        let second = first + t + rng.random_range(0.0..3.0);
        let params = SystemParams::new(g, t)
            .with_control(
                rng.random_range(0.0..=FRAC_PI_2),
                rng.random_range(0.0..TAU),
            )
            .with_atom(
                rng.random_range(0.0..=FRAC_PI_2),
                rng.random_range(0.0..TAU),
            )
            .with_photons(rng.random_range(0..=4), rng.random_range(0..=4))
            .with_frequency(rng.random_range(0.1..3.0))
            .with_entries(first, second);
        let time = params.schedule().exit() + rng.random_range(0.0..2.0);
        Draw {
            params,
            omega: params.frequency,
            time,
        }
    }
}

/// Deviations seen on one draw.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DrawOutcome {
    pub state_deviation: f64,
    pub probability_deviation: f64,
    pub normalization_deviation: f64,
    /// One path declared an outcome impossible and the other did not, or the
    /// oracle could not run.
    pub disagreement: bool,
}

fn outcome_probability(r: &Result<(impl Sized, f64), Error>) -> Option<f64> {
    match r {
        Ok((_, p)) => Some(*p),
        Err(Error::ImpossiblePostselection { probability }) => Some(*probability),
        Err(_) => None,
    }
}

pub fn check_draw(d: &Draw) -> DrawOutcome {
    let mut out = DrawOutcome::default();
    let p = &d.params;
    let recombined = match evolve(p, d.time, TruncationWindow::for_params(p)) {
        Ok(s) => hadamard_control(&s),
        Err(_) => {
            out.disagreement = true;
            return out;
        }
    };
    let mut total = 0.0;
    for j in Control::BOTH {
        let analytic = general_postselect(j, p, d.omega * d.time);
        let oracle = measure_control(&recombined, j);
        match outcome_probability(&analytic) {
            Some(prob) => total += prob,
            None => out.disagreement = true,
        }
        match (analytic, oracle) {
            (Ok((a, pa)), Ok((o, po))) => {
                let o = schrodinger_phase(&o, d.omega, d.time);
                out.state_deviation = out.state_deviation.max(a.max_abs_diff(&o));
                out.probability_deviation = out.probability_deviation.max((pa - po).abs());
            }
            (
                Err(Error::ImpossiblePostselection { probability: pa }),
                Err(Error::ImpossiblePostselection { probability: po }),
            ) => {
                out.probability_deviation = out.probability_deviation.max((pa - po).abs());
            }
            _ => out.disagreement = true,
        }
    }
    out.normalization_deviation = (total - 1.0).abs();
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub draws: u32,
    pub max_state_deviation: f64,
    pub max_probability_deviation: f64,
    pub max_normalization_deviation: f64,
    pub disagreements: u32,
    pub tolerance: f64,
    pub normalization_tolerance: f64,
    pub passed: bool,
}

/// Runs `draws` seeded comparisons. A failed comparison is reported, not
/// returned as an error.
pub fn verify(seed: u64, draws: u32) -> Result<VerifyReport, UsageError> {
    if draws == 0 {
        return Err(UsageError::new("draws", "must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerifyReport {
        seed,
        draws,
        max_state_deviation: 0.0,
        max_probability_deviation: 0.0,
        max_normalization_deviation: 0.0,
        disagreements: 0,
        tolerance: STATE_TOLERANCE,
        normalization_tolerance: NORMALIZATION_TOLERANCE,
        passed: false,
    };
    for _ in 0..draws {
        let o = check_draw(&Draw::sample(&mut rng));
        report.max_state_deviation = report.max_state_deviation.max(o.state_deviation);
        report.max_probability_deviation = report
            .max_probability_deviation
            .max(o.probability_deviation);
        report.max_normalization_deviation = report
            .max_normalization_deviation
            .max(o.normalization_deviation);
        report.disagreements += o.disagreement as u32;
    }
    report.passed = report.disagreements == 0
        && report.max_state_deviation < STATE_TOLERANCE
        && report.max_probability_deviation < STATE_TOLERANCE
        && report.max_normalization_deviation < NORMALIZATION_TOLERANCE;
    Ok(report)
}
