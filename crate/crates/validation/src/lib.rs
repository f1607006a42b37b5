//! Acceptance checks. Each criterion returns a pass flag and a one-line
//! detail; `tests/acceptance.rs` prints them and exits nonzero on any failure.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use ico_cqed::verify::{verify, Draw};
use ico_cqed_core::analytic::{
    coeffs_c, fidelity_amplitude, general_postselect, ico_postselected_state, state_after_both,
    CavityOrder,
};
use ico_cqed_core::observables::{
    condition_on_atom, excitation_distribution, ket_probability, linear_entropy, reduced_cavity0,
    sigma_z_expectation, sigma_z_ico, sigma_z_series,
};
use ico_cqed_core::oracle::{evolve, TruncationWindow};
use ico_cqed_core::state::{inner_product, norm};
use ico_cqed_core::{
    AtomFieldKet, AtomLevel, Complex64, Control, FieldKet, PureState, SystemParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = (bool, String);
pub type Criterion = (&'static str, fn() -> Check);

fn grid(start: f64, stop: f64, step: f64) -> impl Iterator<Item = f64> {
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..count).map(move |i| start + i as f64 * step)
}

fn series(gt: f64, n: u32, m: u32) -> PureState<AtomFieldKet> {
    let p = SystemParams::new(1.0, gt).with_photons(n, m);
    state_after_both(CavityOrder::C0ThenC1, &p, gt).unwrap()
}

fn ico(gt: f64, n: u32, m: u32) -> Option<PureState<AtomFieldKet>> {
    ico_postselected_state(
        Control::Zero,
        &SystemParams::new(1.0, gt).with_photons(n, m),
        0.0,
    )
    .ok()
}

fn entropy(s: &PureState<AtomFieldKet>, level: AtomLevel) -> Option<(f64, f64)> {
    condition_on_atom(s, level)
        .ok()
        .map(|(f, p)| (linear_entropy(&reduced_cavity0(&f)), p))
}

fn max_over(points: impl Iterator<Item = f64>, f: impl Fn(f64) -> f64) -> (f64, f64) {
    points.map(|x| (f(x), x)).fold(
        (f64::NEG_INFINITY, 0.0),
        |a, b| if b.0 > a.0 { b } else { a },
    )
}

fn c1_series_revival() -> Check {
    let p = ket_probability(&series(PI, 0, 0), &AtomFieldKet::excited(0, 0));
    (
        (p - 1.0).abs() <= 1e-12,
        format!("P(e,0,0) at gT=pi: 1 - {:.3e}", 1.0 - p),
    )
}

fn c2_deterministic_emission() -> Check {
    let p = ket_probability(&series(FRAC_PI_2, 0, 0), &AtomFieldKet::ground(1, 0));
    (
        (p - 1.0).abs() <= 1e-12,
        format!("P(g,1,0) at gT=pi/2: 1 - {:.3e}", 1.0 - p),
    )
}

fn c3_second_cavity_cap() -> Check {
    let mut ok = true;
    let mut detail = Vec::new();
    for n in [0, 5] {
        let (max, at) = max_over(grid(0.0, 10.0, 0.001), |gt| {
            ket_probability(&series(gt, n, n), &AtomFieldKet::ground(n, n + 1))
        });
        ok &= (0.24..=0.26).contains(&max);
        detail.push(format!("n=m={n}: max {max:.5} at gT={at:.3}"));
    }
    (ok, detail.join("; "))
}

fn c4_photon_interchange() -> Check {
    let (max, at) = max_over(grid(0.0, 30.0, 0.001), |gt| {
        ket_probability(&series(gt, 5, 5), &AtomFieldKet::excited(6, 4))
    });
    // with m = 0 the interchange amplitude c6 multiplies a γ_{-1} = 0 rotation
    let worst_vacuum = grid(0.0, 30.0, 0.001)
        .map(|gt| {
            let p = SystemParams::new(1.0, gt);
            coeffs_c(&p, gt).unwrap().term(6).norm_sqr()
        })
        .fold(0.0, f64::max);
    (
        max >= 0.95 && worst_vacuum == 0.0,
        format!("n=m=5: max P(e,6,4) {max:.5} at gT={at:.3}; n=m=0: max |c6|^2 = {worst_vacuum:e}"),
    )
}

fn c5_unequal_fill() -> Check {
    let (max, at) = max_over(grid(0.0, 30.0, 0.001), |gt| {
        ket_probability(&series(gt, 4, 5), &AtomFieldKet::ground(4, 6))
    });
    (
        max >= 0.95,
        format!("n=4, m=5: max P(g,4,6) {max:.5} at gT={at:.3}"),
    )
}

fn c6_bell_generation() -> Check {
    let s = ico(FRAC_PI_2, 0, 0).unwrap();
    let (field, p_ground) = condition_on_atom(&s, AtomLevel::Ground).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = PureState::from_amplitudes([
        (FieldKet::new(0, 1), Complex64::new(h, 0.0)),
        (FieldKet::new(1, 0), Complex64::new(h, 0.0)),
    ])
    .unwrap();
    let ov = inner_product(&bell, &field);
    let aligned = field.scaled(ov.conj() / ov.norm());
    let diff = aligned.max_abs_diff(&bell);
    let sl = linear_entropy(&reduced_cavity0(&field));
    let fid = fidelity_amplitude(&field, &bell);
    (
        (p_ground - 1.0).abs() <= 1e-12
            && diff <= 1e-12
            && (fid - 1.0).abs() <= 1e-12
            && (sl - 0.5).abs() <= 1e-12,
        format!(
            "P(g)=1-{:.2e}, phase-aligned diff {diff:.2e}, S_L={sl}",
            1.0 - p_ground
        ),
    )
}

fn c7_constant_ground_entropy() -> Check {
    let mut worst: f64 = 0.0;
    let mut counted = 0;
    let mut skipped = 0;
    for n in [0, 1, 2, 5] {
        for gt in grid(0.01, 10.0, 0.01) {
            match ico(gt, n, n)
                .as_ref()
                .and_then(|s| entropy(s, AtomLevel::Ground))
            {
                Some((sl, p)) if p > 1e-6 => {
                    worst = worst.max((sl - 0.5).abs());
                    counted += 1;
                }
                _ => skipped += 1,
            }
        }
    }
    (
        worst <= 1e-9,
        format!(
            "max |S_L - 1/2| = {worst:.2e} over {counted} points ({skipped} below P(g) = 1e-6)"
        ),
    )
}

fn c8_excited_entropy_advantage() -> Check {
    let (ico_max, at) = max_over(grid(0.0, 20.0, 0.001), |gt| {
        ico(gt, 1, 1)
            .as_ref()
            .and_then(|s| entropy(s, AtomLevel::Excited))
            .map_or(f64::NEG_INFINITY, |e| e.0)
    });
    let (series_max, series_at) = max_over(grid(0.0, 20.0, 0.001), |gt| {
        entropy(&series(gt, 1, 1), AtomLevel::Excited).map_or(f64::NEG_INFINITY, |e| e.0)
    });
    (
        ico_max >= 0.65 && series_max <= 0.5 + 1e-12,
        format!("switch max {ico_max:.5} at gT={at:.3}; series max {series_max:.12} at gT={series_at:.3}"),
    )
}

fn c9_series_zero_entanglement() -> Check {
    let series_worst = grid(0.0, 10.0, 0.001)
        .filter_map(|gt| entropy(&series(gt, 3, 0), AtomLevel::Excited))
        .map(|e| e.0.abs())
        .fold(0.0, f64::max);
    let (ico_max, at) = max_over(grid(0.0, 10.0, 0.001), |gt| {
        ico(gt, 3, 0)
            .as_ref()
            .and_then(|s| entropy(s, AtomLevel::Excited))
            .map_or(f64::NEG_INFINITY, |e| e.0)
    });
    (
        series_worst <= 1e-12 && ico_max > 0.4,
        format!("series max |S_L| {series_worst:.2e}; switch max {ico_max:.5} at gT={at:.3}"),
    )
}

fn c10_rabi_formulas() -> Check {
    let mut worst: f64 = 0.0;
    for (n, m) in [(0, 0), (1, 1), (0, 1), (2, 3)] {
        for i in 1..=1000 {
            let gt = 10.0 * i as f64 / 1000.0;
            let p = SystemParams::new(1.0, gt).with_photons(n, m);
            worst = worst
                .max((sigma_z_series(&p).unwrap() - sigma_z_expectation(&series(gt, n, m))).abs());
            if let (Ok(f), Some(s)) = (sigma_z_ico(&p), ico(gt, n, m)) {
                worst = worst.max((f - sigma_z_expectation(&s)).abs());
            }
        }
    }
    let spot = SystemParams::new(1.0, FRAC_PI_2);
    let (a, b) = (sigma_z_series(&spot).unwrap(), sigma_z_ico(&spot).unwrap());
    (
        worst <= 1e-12 && (a + 1.0).abs() <= 1e-12 && (b + 1.0).abs() <= 1e-12,
        format!("max formula deviation {worst:.2e}; at gT=pi/2 series {a}, switch {b}"),
    )
}

fn c11_oracle_equivalence() -> Check {
    let r = verify(2, 200).unwrap();
    (
        r.passed,
        format!(
            "200 draws: state {:.2e}, probability {:.2e}, N0^2+N1^2-1 {:.2e}, disagreements {}",
            r.max_state_deviation,
            r.max_probability_deviation,
            r.max_normalization_deviation,
            r.disagreements
        ),
    )
}

fn c12_conservation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut worst_norm, mut worst_dist): (f64, f64) = (0.0, 0.0);
    let draws = 50;
    for _ in 0..draws {
        let p = Draw::sample(&mut rng).params;
        let w = TruncationWindow::for_params(&p);
        let dist0 = excitation_distribution(&evolve(&p, 0.0, w).unwrap());
        let end = p.schedule().exit() + 1.0;
        for k in 0..20 {
            let t = end * k as f64 / 19.0;
            let s = evolve(&p, t, w).unwrap();
            worst_norm = worst_norm.max((norm(&s) - 1.0).abs());
            let dist = excitation_distribution(&s);
            for key in dist0.keys().chain(dist.keys()) {
                let a = dist0.get(key).copied().unwrap_or(0.0);
                let b = dist.get(key).copied().unwrap_or(0.0);
                worst_dist = worst_dist.max((a - b).abs());
            }
        }
    }
    (
        worst_norm <= 1e-10 && worst_dist <= 1e-10,
        format!("{draws} draws x 20 times: norm {worst_norm:.2e}, excitation distribution {worst_dist:.2e}"),
    )
}

fn c13_entropy_time_independence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    for _ in 0..20 {
        let p = SystemParams::new(1.0, rng.random_range(0.0..=10.0))
            .with_photons(rng.random_range(0..=4), rng.random_range(0..=4))
            .with_atom(
                rng.random_range(0.0..=FRAC_PI_2),
                rng.random_range(0.0..TAU),
            )
            .with_control(
                rng.random_range(0.0..=FRAC_PI_2),
                rng.random_range(0.0..TAU),
            );
        let fast = |wt: f64| ico_postselected_state(Control::Zero, &p, wt).ok();
        let general = |wt: f64| general_postselect(Control::Zero, &p, wt).ok().map(|r| r.0);
        for path in [
            &fast as &dyn Fn(f64) -> Option<PureState<AtomFieldKet>>,
            &general,
        ] {
            for level in AtomLevel::BOTH {
                let at = |wt| {
                    path(wt)
                        .as_ref()
                        .and_then(|s| entropy(s, level))
                        .map(|e| e.0)
                };
                let base = at(0.0);
                for wt in [1.3, 7.9] {
                    match (base, at(wt)) {
                        (Some(a), Some(b)) => {
                            worst = worst.max((a - b).abs());
                            compared += 1;
                        }
                        (None, None) => {}
                        _ => worst = f64::INFINITY,
                    }
                }
            }
        }
    }
    (
        worst <= 1e-12,
        format!("{compared} comparisons, max difference {worst:.2e}"),
    )
}

/// Widest stretch of consecutive grid points whose total variation stays
/// below `limit`, and the smallest total variation of any window at least
/// `width` wide.
fn plateau_stats(xs: &[f64], ys: &[Option<f64>], width: f64, limit: f64) -> (f64, f64) {
    let mut widest: f64 = 0.0;
    let mut min_tv = f64::INFINITY;
    for i in 0..xs.len() {
        let mut tv = 0.0;
        for j in i + 1..xs.len() {
            match (ys[j - 1], ys[j]) {
                (Some(a), Some(b)) => tv += (b - a).abs(),
                _ => break,
            }
            let span = xs[j] - xs[i];
            if tv < limit {
                widest = widest.max(span);
            }
            if span >= width - 1e-9 {
                min_tv = min_tv.min(tv);
                if tv >= limit {
                    break;
                }
            }
        }
    }
    (widest, min_tv)
}

fn c14_plateau() -> Check {
    let xs: Vec<f64> = grid(0.0, 10.0, 0.01).collect();
    let p = |gt| SystemParams::new(1.0, gt);
    let ico_curve: Vec<_> = xs.iter().map(|&gt| sigma_z_ico(&p(gt)).ok()).collect();
    let series_curve: Vec<_> = xs.iter().map(|&gt| sigma_z_series(&p(gt)).ok()).collect();
    let (ico_widest, ico_min) = plateau_stats(&xs, &ico_curve, 0.3, 0.02);
    let (series_widest, series_min) = plateau_stats(&xs, &series_curve, 0.3, 0.02);
    let ico_has = ico_widest >= 0.3 - 1e-9;
    let series_has = series_widest >= 0.3 - 1e-9;
    (
        ico_has && !series_has,
        format!(
            "switch: widest TV<0.02 stretch {ico_widest:.2} (min TV over 0.3 {ico_min:.1e}); \
             series: widest {series_widest:.2} (min TV over 0.3 {series_min:.1e})"
        ),
    )
}

pub const CRITERIA: [Criterion; 14] = [
    ("series revival", c1_series_revival),
    ("series deterministic emission", c2_deterministic_emission),
    ("series second-cavity-emission cap", c3_second_cavity_cap),
    ("series photon interchange", c4_photon_interchange),
    ("unequal fill", c5_unequal_fill),
    ("switch Bell generation", c6_bell_generation),
    (
        "constant switch ground-branch entropy",
        c7_constant_ground_entropy,
    ),
    (
        "switch excited-branch entropy advantage",
        c8_excited_entropy_advantage,
    ),
    (
        "series zero entanglement vs switch",
        c9_series_zero_entanglement,
    ),
    ("inversion closed forms", c10_rabi_formulas),
    ("oracle equivalence", c11_oracle_equivalence),
    ("conservation", c12_conservation),
    ("entropy time independence", c13_entropy_time_independence),
    ("switch inversion plateau", c14_plateau),
];

#[derive(Debug, Clone)]
pub struct Outcome {
    pub number: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {:>2} {}: {}",
            self.number, self.name, self.detail
        )
    }
}

/// Runs criterion `number` (1-based).
pub fn run(number: usize) -> Outcome {
    let (name, check) = CRITERIA[number - 1];
    let (passed, detail) = check();
    Outcome {
        number,
        name,
        passed,
        detail,
    }
}
