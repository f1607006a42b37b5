//! Closed-form amplitudes for both traversal orders and the states obtained
//! by recombining the two orders and measuring the control qubit.
//!
//! With `γ_k = g√(k+1)`, a resonant Jaynes-Cummings interaction of duration
//! `t` rotates each doublet `{|e,k⟩, |g,k+1⟩}` by angle `γ_k t`. Composing the
//! two cavities gives eight amplitudes per order ([`coeffs_c`] for cavity 0
//! first, [`coeffs_s`] for cavity 1 first). Kets that would need a negative
//! photon number always carry a factor `sin(γ_{-1}·) = 0` and are dropped.

use core::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::state::{
    inner_product, scale_and_add, AtomFieldKet, AtomLevel, Control, FieldKet, PureState,
    PRUNE_EPSILON,
};
use crate::{Error, Result, SystemParams};

/// Post-selection below this normalization constant is refused.
pub const MIN_NORMALIZATION: f64 = 1e-10;

/// Outcome probabilities below this are refused by [`general_postselect`].
pub const MIN_PROBABILITY: f64 = 1e-12;

/// Which cavity the atom crosses first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CavityOrder {
    /// Cavity 0 then cavity 1 (control `|0⟩`); yields `|C1C0⟩`.
    C0ThenC1,
    /// Cavity 1 then cavity 0 (control `|1⟩`); yields `|C0C1⟩`.
    C1ThenC0,
}

impl CavityOrder {
    pub fn for_control(c: Control) -> Self {
        match c {
            Control::Zero => CavityOrder::C0ThenC1,
            Control::One => CavityOrder::C1ThenC0,
        }
    }
}

/// Measured control outcome `j`.
pub type ControlOutcome = Control;

/// `γ_k = g √(k+1)`, defined for `k ≥ -1`.
pub fn gamma(k: i64, g: f64) -> Result<f64> {
    if k < -1 {
        return Err(Error::Domain {
            what: "gamma index",
            value: k as f64,
        });
    }
    Ok(g * ((k + 1) as f64).sqrt())
}

fn gamma_of(k: u32, shift: i64, g: f64) -> f64 {
    gamma(k as i64 + shift, g).expect("shift is at least -1")
}

/// The eight amplitudes of one traversal order, numbered 1 through 8.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffSet {
    terms: [Complex64; 8],
}

impl CoeffSet {
    /// Amplitude `j` (1-based, matching the usual `c_1 … c_8` labelling).
    pub fn term(&self, j: usize) -> Complex64 {
        assert!((1..=8).contains(&j), "coefficient index {j} not in 1..=8");
        self.terms[j - 1]
    }

    pub fn terms(&self) -> &[Complex64; 8] {
        &self.terms
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Photon shifts `(atom, Δn, Δm)` of the kets multiplying `c_1 … c_8`.
const C_KETS: [(AtomLevel, i32, i32); 8] = [
    (AtomLevel::Excited, 0, 0),
    (AtomLevel::Excited, -1, 0),
    (AtomLevel::Ground, 0, 1),
    (AtomLevel::Ground, -1, 1),
    (AtomLevel::Excited, 0, -1),
    (AtomLevel::Excited, 1, -1),
    (AtomLevel::Ground, 0, 0),
    (AtomLevel::Ground, 1, 0),
];

/// Same for `s_1 … s_8`: `C_KETS` with the two cavities exchanged.
const S_KETS: [(AtomLevel, i32, i32); 8] = [
    (AtomLevel::Excited, 0, 0),
    (AtomLevel::Excited, 0, -1),
    (AtomLevel::Ground, 1, 0),
    (AtomLevel::Ground, 1, -1),
    (AtomLevel::Excited, -1, 0),
    (AtomLevel::Excited, -1, 1),
    (AtomLevel::Ground, 0, 0),
    (AtomLevel::Ground, 0, 1),
];

/// Amplitudes after a full pass through a cavity holding `first` photons
/// followed by `tau` inside one holding `second` photons.
fn two_cavity_coeffs(p: &SystemParams, first: u32, second: u32, tau: f64) -> CoeffSet {
    let g = p.coupling;
    let t = p.transit_time;
    let (cx, sx) = (p.atom_angle.cos(), p.atom_angle.sin());
    let excited = Complex64::new(cx, 0.0);
    let ground = Complex64::from_polar(sx, p.atom_phase);
    let i = Complex64::i();

    let (c_f, s_f) = cos_sin(gamma_of(first, 0, g) * t);
    let (c_fm, s_fm) = cos_sin(gamma_of(first, -1, g) * t);
    let (c_s, s_s) = cos_sin(gamma_of(second, 0, g) * tau);
    let (c_sm, s_sm) = cos_sin(gamma_of(second, -1, g) * tau);

    CoeffSet {
        terms: [
            excited * c_f * c_s,
            -i * ground * s_fm * c_s,
            -i * excited * c_f * s_s,
            -ground * s_fm * s_s,
            -i * ground * c_fm * s_sm,
            -excited * s_f * s_sm,
            ground * c_fm * c_sm,
            -i * excited * s_f * c_sm,
        ],
    }
}

fn cos_sin(x: f64) -> (f64, f64) {
    (x.cos(), x.sin())
}

fn check_tau(p: &SystemParams, tau: f64) -> Result<()> {
    p.validate()?;
    if !(tau >= 0.0 && tau <= p.transit_time) {
        return Err(Error::Domain {
            what: "tau",
            value: tau,
        });
    }
    Ok(())
}

/// Amplitudes `c_1(τ) … c_8(τ)` of `|C1C0(τ)⟩` (cavity 0 crossed first, `τ`
/// elapsed inside cavity 1).
pub fn coeffs_c(p: &SystemParams, tau: f64) -> Result<CoeffSet> {
    check_tau(p, tau)?;
    Ok(two_cavity_coeffs(p, p.photons0, p.photons1, tau))
}

/// Amplitudes `s_1(τ) … s_8(τ)` of `|C0C1(τ)⟩` (cavity 1 crossed first).
pub fn coeffs_s(p: &SystemParams, tau: f64) -> Result<CoeffSet> {
    check_tau(p, tau)?;
    Ok(two_cavity_coeffs(p, p.photons1, p.photons0, tau))
}

/// Pushes `amp |atom, n+dn, m+dm⟩`; a ket with negative occupation must carry
/// an exactly vanishing amplitude and is skipped.
fn push_shifted(
    s: &mut PureState<AtomFieldKet>,
    (atom, dn, dm): (AtomLevel, i32, i32),
    n: u32,
    m: u32,
    amp: Complex64,
) {
    match AtomFieldKet::shifted(atom, n, m, dn, dm) {
        Some(k) => s.accumulate(k, amp),
        None => assert!(
            amp.norm() < PRUNE_EPSILON,
            "nonzero amplitude {amp} on negative-occupation ket"
        ),
    }
}

/// Atom-field state after the second cavity has acted for `tau`.
pub fn state_after_both(
    order: CavityOrder,
    p: &SystemParams,
    tau: f64,
) -> Result<PureState<AtomFieldKet>> {
    let (coeffs, kets) = match order {
        CavityOrder::C0ThenC1 => (coeffs_c(p, tau)?, &C_KETS),
        CavityOrder::C1ThenC0 => (coeffs_s(p, tau)?, &S_KETS),
    };
    let mut s = PureState::new();
    for (amp, shift) in coeffs.terms.iter().zip(kets) {
        push_shifted(&mut s, *shift, p.photons0, p.photons1, *amp);
    }
    s.prune();
    Ok(s)
}

/// `⟨C1C0(T)|C0C1(T)⟩` from the six pairs of amplitudes on shared kets.
pub fn overlap_orders(p: &SystemParams) -> Result<Complex64> {
    let c = coeffs_c(p, p.transit_time)?;
    let s = coeffs_s(p, p.transit_time)?;
    let pairs = [(1, 1), (2, 5), (3, 8), (5, 2), (7, 7), (8, 3)];
    Ok(pairs
        .iter()
        .map(|&(a, b)| c.term(a).conj() * s.term(b))
        .sum())
}

/// Probability `N_j² = (1 + (-1)^j Re⟨C1C0|C0C1⟩) / 2` of finding the control in
/// `|j⟩` after the Hadamard, for the maximally indefinite control state
/// (θ = π/4, φ = 0). The control fields of `p` are not consulted.
pub fn control_probability(j: ControlOutcome, p: &SystemParams) -> Result<f64> {
    let re = overlap_orders(p)?.re;
    Ok((1.0 + j.parity() * re) / 2.0)
}

/// Atom-field state after recombination and finding the control in `|j⟩`,
/// for θ = π/4, φ = 0 (control fields of `p` are not consulted).
///
/// Returned as `{|e⟩|Φ_e(t)⟩ + |g⟩|Φ_g(t)⟩} / 2N_j` with the global phase
/// `e^{-iωt(n+m+1/2)}` dropped. Kets in the lower excitation sector (present
/// only when ξ ≠ 0) carry the relative phase `e^{iωt}`, `omega_t = ω·t`.
pub fn ico_postselected_state(
    j: ControlOutcome,
    p: &SystemParams,
    omega_t: f64,
) -> Result<PureState<AtomFieldKet>> {
    let c = coeffs_c(p, p.transit_time)?;
    let s = coeffs_s(p, p.transit_time)?;
    let norm = control_probability(j, p)?.max(0.0).sqrt();
    if norm <= MIN_NORMALIZATION {
        return Err(Error::ImpossiblePostselection {
            probability: norm * norm,
        });
    }
    let sign = j.parity();
    let ph = Complex64::from_polar(1.0, omega_t);
    let (e, g) = (AtomLevel::Excited, AtomLevel::Ground);
    let terms = [
        // Φ_e
        ((e, 0, 0), c.term(1) + sign * s.term(1)),
        ((e, 1, -1), c.term(6)),
        ((e, -1, 1), sign * s.term(6)),
        ((e, -1, 0), ph * (c.term(2) + sign * s.term(5))),
        ((e, 0, -1), ph * (c.term(5) + sign * s.term(2))),
        // Φ_g
        ((g, 0, 0), ph * (c.term(7) + sign * s.term(7))),
        ((g, -1, 1), ph * c.term(4)),
        ((g, 1, -1), ph * sign * s.term(4)),
        ((g, 0, 1), c.term(3) + sign * s.term(8)),
        ((g, 1, 0), c.term(8) + sign * s.term(3)),
    ];
    let scale = 1.0 / (2.0 * norm);
    let mut out = PureState::new();
    for (shift, amp) in terms {
        push_shifted(&mut out, shift, p.photons0, p.photons1, amp * scale);
    }
    out.prune();
    Ok(out)
}

/// Recombines the two orders for an arbitrary control state, measures the
/// control in `|j⟩` and returns the normalized conditional state in the
/// Schrödinger picture at `omega_t = ω·t` together with its probability.
///
/// Unlike [`ico_postselected_state`], the full phase `e^{-iωt(N_e - 1/2)}` is
/// kept, so at θ = π/4, φ = 0 the two differ by `e^{-iωt(n+m+1/2)}`.
pub fn general_postselect(
    j: ControlOutcome,
    p: &SystemParams,
    omega_t: f64,
) -> Result<(PureState<AtomFieldKet>, f64)> {
    let first0 = state_after_both(CavityOrder::C0ThenC1, p, p.transit_time)?;
    let first1 = state_after_both(CavityOrder::C1ThenC0, p, p.transit_time)?;
    let (st, ct) = p.control_angle.sin_cos();
    let alpha = Complex64::new(FRAC_1_SQRT_2 * ct, 0.0);
    let beta = Complex64::from_polar(FRAC_1_SQRT_2 * st * j.parity(), p.control_phase);
    let projected = scale_and_add(alpha, &first0, beta, &first1);
    let probability = projected.norm_sqr();
    if probability < MIN_PROBABILITY {
        return Err(Error::ImpossiblePostselection { probability });
    }
    let inv = Complex64::new(1.0 / probability.sqrt(), 0.0);
    let state = projected.map_amplitudes(|k| {
        let exc = crate::state::Ket::excitations(k) as f64;
        inv * Complex64::from_polar(1.0, -omega_t * (exc - 0.5))
    });
    Ok((state, probability))
}

/// Pulse area `gT = (2N-1)π / (2√(n+1))` at which equal fillings `n = m`
/// produce Bell-like field states.
pub fn bell_pulse_area(n: u32, big_n: u32) -> f64 {
    (2.0 * big_n as f64 - 1.0) * PI / (2.0 * ((n + 1) as f64).sqrt())
}

/// Normalized two-cavity field state left behind when, with `n = m` photons
/// in each cavity and pulse area [`bell_pulse_area`]`(n, N)`, the switch
/// outcome is `|0⟩` and the atom is then found in `atom_branch`.
///
/// Excited: `∝ |n+1, n-1⟩ + |n-1, n+1⟩` (amplitude `c_6`).
/// Ground: `∝ |n, n+1⟩ + |n+1, n⟩` (amplitude `c_8`).
pub fn bell_state(atom_branch: AtomLevel, n: u32, big_n: u32) -> Result<PureState<FieldKet>> {
    if big_n == 0 {
        return Err(Error::Domain {
            what: "N",
            value: 0.0,
        });
    }
    let angle = PI / 2.0 * (2.0 * big_n as f64 - 1.0) * (n as f64 / (n + 1) as f64).sqrt();
    let sign = if big_n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let (amp, kets) = match atom_branch {
        AtomLevel::Excited => {
            if n == 0 {
                return Err(Error::DegenerateBranch);
            }
            (
                Complex64::new(sign * angle.sin(), 0.0),
                [FieldKet::new(n + 1, n - 1), FieldKet::new(n - 1, n + 1)],
            )
        }
        AtomLevel::Ground => (
            Complex64::new(0.0, sign * angle.cos()),
            [FieldKet::new(n, n + 1), FieldKet::new(n + 1, n)],
        ),
    };
    if amp.norm() < MIN_PROBABILITY {
        return Err(Error::DegenerateBranch);
    }
    let unit = amp / amp.norm() * FRAC_1_SQRT_2;
    Ok(kets.into_iter().map(|k| (k, unit)).collect())
}

/// Relative overlap used by tests and the CLI: `|⟨a|b⟩|` for two normalized
/// states, i.e. equality up to a global phase when it equals 1.
pub fn fidelity_amplitude<K: crate::Ket>(a: &PureState<K>, b: &PureState<K>) -> f64 {
    inner_product(a, b).norm()
}
