//! Brute-force propagation in a truncated Fock space.
//!
//! Nothing here evaluates the closed-form amplitudes of [`crate::analytic`].
//! The interaction generator is assembled from ladder-operator matrix
//! elements, propagators come from its dressed-state eigendecomposition, and
//! the piecewise schedule is applied branch by branch on dense vectors.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

pub use crate::params::Schedule;
use crate::state::{AtomFieldKet, AtomLevel, Control, FullKet, Ket, PureState, PRUNE_EPSILON};
use crate::{Error, Result, SystemParams};

/// Guard-row population at or above this is reported as truncation overflow.
pub const GUARD_TOLERANCE: f64 = 1e-12;

/// Measurement outcomes below this probability are refused.
pub const MIN_PROBABILITY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cavity {
    Zero,
    One,
}

impl Cavity {
    pub fn other(self) -> Self {
        match self {
            Cavity::Zero => Cavity::One,
            Cavity::One => Cavity::Zero,
        }
    }
}

/// Fock states `0..=n_max` are kept in each cavity. The top row `n_max` is a
/// guard that must stay empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationWindow {
    n_max: u32,
}

impl TruncationWindow {
    pub fn new(n_max: u32) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::WindowTooSmall { needed: 1, got: 0 });
        }
        Ok(TruncationWindow { n_max })
    }

    /// Smallest admissible window for the initial photon numbers of `p`.
    pub fn for_params(p: &SystemParams) -> Self {
        TruncationWindow {
            n_max: p.photons0.max(p.photons1) + 2,
        }
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    fn levels(&self) -> usize {
        self.n_max as usize + 1
    }

    /// Dimension of the atom ⊗ field ⊗ field space.
    pub fn dim(&self) -> usize {
        2 * self.levels() * self.levels()
    }

    fn check_covers(&self, p: &SystemParams) -> Result<()> {
        let needed = p.photons0.max(p.photons1) + 2;
        if self.n_max < needed {
            return Err(Error::WindowTooSmall {
                needed,
                got: self.n_max,
            });
        }
        Ok(())
    }

    /// Position of a ket in the dense basis ordering `(atom, n, m)`.
    pub fn index(&self, k: &AtomFieldKet) -> Option<usize> {
        if k.n > self.n_max || k.m > self.n_max {
            return None;
        }
        let d = self.levels();
        let a = match k.atom {
            AtomLevel::Excited => 0,
            AtomLevel::Ground => 1,
        };
        Some(a * d * d + k.n as usize * d + k.m as usize)
    }

    pub fn ket(&self, index: usize) -> AtomFieldKet {
        let d = self.levels();
        let atom = if index < d * d {
            AtomLevel::Excited
        } else {
            AtomLevel::Ground
        };
        let r = index % (d * d);
        AtomFieldKet::new(atom, (r / d) as u32, (r % d) as u32)
    }

    fn photons(&self, k: &AtomFieldKet, cavity: Cavity) -> u32 {
        match cavity {
            Cavity::Zero => k.n,
            Cavity::One => k.m,
        }
    }

    fn with_photons(
        &self,
        k: &AtomFieldKet,
        cavity: Cavity,
        atom: AtomLevel,
        photons: u32,
    ) -> AtomFieldKet {
        match cavity {
            Cavity::Zero => AtomFieldKet::new(atom, photons, k.m),
            Cavity::One => AtomFieldKet::new(atom, k.n, photons),
        }
    }
}

/// Dense row-major complex square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    fn add_at(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.dim + col] += v;
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.data[c * self.dim + r] = self.get(r, c).conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len());
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }
}

/// A propagator; `U†U = I` holds to round-off.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(DenseMatrix);

impl UnitaryMatrix {
    pub fn matrix(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.0.apply(v)
    }

    /// `max |(U†U - I)_ij|`.
    pub fn unitarity_error(&self) -> f64 {
        self.0
            .adjoint()
            .matmul(&self.0)
            .max_abs_diff(&DenseMatrix::identity(self.0.dim))
    }
}

/// `g (a_c† σ₋ + σ₊ a_c)` on the atom ⊗ field ⊗ field basis of `w` (ħ = 1).
/// Creation out of the top Fock row is truncated.
pub fn jc_generator(cavity: Cavity, g: f64, w: TruncationWindow) -> DenseMatrix {
    let mut h = DenseMatrix::zeros(w.dim());
    for idx in 0..w.dim() {
        let k = w.ket(idx);
        if k.atom != AtomLevel::Excited {
            continue;
        }
        let photons = w.photons(&k, cavity);
        // a† σ₋ |e, k⟩ = √(k+1) |g, k+1⟩
        let up = w.with_photons(&k, cavity, AtomLevel::Ground, photons + 1);
        if let Some(j) = w.index(&up) {
            let elem = Complex64::new(g * ((photons + 1) as f64).sqrt(), 0.0);
            h.add_at(j, idx, elem);
            h.add_at(idx, j, elem.conj());
        }
    }
    h
}

/// `exp(-i g t (a_c† σ₋ + σ₊ a_c))` assembled from the generator's dressed
/// doublets `|±, k⟩ = (|e, k⟩ ± |g, k+1⟩)/√2` with eigenvalues `±g√(k+1)`.
/// `|g, 0⟩` and the truncated `|e, n_max⟩` are null vectors.
pub fn jc_propagator(cavity: Cavity, t: f64, g: f64, w: TruncationWindow) -> Result<UnitaryMatrix> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain {
            what: "t",
            value: t,
        });
    }
    let mut u = DenseMatrix::zeros(w.dim());
    for idx in 0..w.dim() {
        let k = w.ket(idx);
        let photons = w.photons(&k, cavity);
        let paired = match k.atom {
            AtomLevel::Excited => {
                w.index(&w.with_photons(&k, cavity, AtomLevel::Ground, photons + 1))
            }
            AtomLevel::Ground => None,
        };
        let lower = match k.atom {
            AtomLevel::Ground if photons > 0 => {
                w.index(&w.with_photons(&k, cavity, AtomLevel::Excited, photons - 1))
            }
            _ => None,
        };
        match (paired, lower) {
            (Some(j), _) => {
                let lambda = g * ((photons + 1) as f64).sqrt();
                let plus = Complex64::from_polar(1.0, -lambda * t);
                let minus = Complex64::from_polar(1.0, lambda * t);
                let dressed = [
                    (plus, [FRAC_1_SQRT_2, FRAC_1_SQRT_2]),
                    (minus, [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]),
                ];
                let basis = [idx, j];
                for (phase, vec) in dressed {
                    for (r, vr) in basis.iter().zip(vec) {
                        for (c, vc) in basis.iter().zip(vec) {
                            u.add_at(*r, *c, phase * vr * vc);
                        }
                    }
                }
            }
            // the upper member of a doublet; filled when its partner is visited
            (None, Some(_)) => {}
            (None, None) => u.add_at(idx, idx, Complex64::new(1.0, 0.0)),
        }
    }
    Ok(UnitaryMatrix(u))
}

/// Initial state `(cos θ|0⟩ + e^{iφ} sin θ|1⟩) ⊗ (cos ξ|e⟩ + e^{iχ} sin ξ|g⟩) ⊗ |n, m⟩`.
pub fn initial_state(p: &SystemParams) -> PureState<FullKet> {
    let (st, ct) = p.control_angle.sin_cos();
    let (sx, cx) = p.atom_angle.sin_cos();
    let control = [
        (Control::Zero, Complex64::new(ct, 0.0)),
        (Control::One, Complex64::from_polar(st, p.control_phase)),
    ];
    let atom = [
        (AtomLevel::Excited, Complex64::new(cx, 0.0)),
        (AtomLevel::Ground, Complex64::from_polar(sx, p.atom_phase)),
    ];
    let mut s = PureState::new();
    for (c, ca) in control {
        for (a, aa) in atom {
            s.accumulate(
                FullKet::new(c, AtomFieldKet::new(a, p.photons0, p.photons1)),
                ca * aa,
            );
        }
    }
    s.prune();
    s
}

/// Interaction-picture state at time `t`, starting from [`initial_state`].
///
/// Control `|0⟩` sends the atom through cavity 0 first, `|1⟩` through
/// cavity 1 first. Nothing happens before the first entry or between the two
/// cavities.
pub fn evolve(p: &SystemParams, t: f64, w: TruncationWindow) -> Result<PureState<FullKet>> {
    p.validate()?;
    w.check_covers(p)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain {
            what: "t",
            value: t,
        });
    }
    let sched = p.schedule();
    let tt = sched.transit_time;
    let g = p.coupling;
    let init = initial_state(p);

    let mut out = PureState::new();
    for control in Control::BOTH {
        let mut v = vec![Complex64::new(0.0, 0.0); w.dim()];
        for (k, a) in init.iter().filter(|(k, _)| k.control == control) {
            v[w.index(&k.rest).expect("window covers initial state")] = *a;
        }
        let first = match control {
            Control::Zero => Cavity::Zero,
            Control::One => Cavity::One,
        };
        let second = first.other();
        // (duration in first cavity, duration in second cavity)
        let (d1, d2) = if t < sched.first_entry {
            (0.0, 0.0)
        } else if t <= sched.first_entry + tt {
            (t - sched.first_entry, 0.0)
        } else if t < sched.second_entry {
            (tt, 0.0)
        } else if t <= sched.exit() {
            (tt, t - sched.second_entry)
        } else {
            (tt, tt)
        };
        if d1 > 0.0 {
            v = jc_propagator(first, d1, g, w)?.apply(&v);
        }
        if d2 > 0.0 {
            v = jc_propagator(second, d2, g, w)?.apply(&v);
        }

        let top = w.n_max();
        let mut guard = 0.0;
        for (idx, a) in v.iter().enumerate() {
            let k = w.ket(idx);
            if k.n == top || k.m == top {
                guard += a.norm_sqr();
            }
            if a.norm() >= PRUNE_EPSILON {
                out.accumulate(FullKet::new(control, k), *a);
            }
        }
        if guard >= GUARD_TOLERANCE {
            return Err(Error::TruncationOverflow { population: guard });
        }
    }
    out.prune();
    Ok(out)
}

/// Balanced beamsplitter on the control: `|j⟩ → (|0⟩ + (-1)^j |1⟩)/√2`.
pub fn hadamard_control(s: &PureState<FullKet>) -> PureState<FullKet> {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let mut out = PureState::new();
    for (k, a) in s.iter() {
        out.accumulate(FullKet::new(Control::Zero, k.rest), h * a);
        out.accumulate(
            FullKet::new(Control::One, k.rest),
            h * k.control.parity() * a,
        );
    }
    out.prune();
    out
}

/// Projects the control onto `|j⟩`; returns the normalized atom-field
/// remainder and the Born probability.
pub fn measure_control(
    s: &PureState<FullKet>,
    j: Control,
) -> Result<(PureState<AtomFieldKet>, f64)> {
    let slice = s.filter_map_kets(|k| (k.control == j).then_some(k.rest));
    let probability = slice.norm_sqr();
    if probability < MIN_PROBABILITY {
        return Err(Error::ImpossiblePostselection { probability });
    }
    Ok((
        slice.scaled(Complex64::new(1.0 / probability.sqrt(), 0.0)),
        probability,
    ))
}

/// Interaction → Schrödinger picture: multiplies each ket by
/// `e^{-iωt(N_e - 1/2)}`.
pub fn schrodinger_phase<K: Ket>(s: &PureState<K>, omega: f64, t: f64) -> PureState<K> {
    s.map_amplitudes(|k| Complex64::from_polar(1.0, -omega * t * (k.excitations() as f64 - 0.5)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::norm;
    use core::f64::consts::{FRAC_PI_2, PI};

    fn win(n: u32) -> TruncationWindow {
        TruncationWindow::new(n).unwrap()
    }

    #[test]
    fn generator_elements() {
        let w = win(3);
        let h = jc_generator(Cavity::Zero, 0.7, w);
        let e00 = w.index(&AtomFieldKet::excited(0, 0)).unwrap();
        let g10 = w.index(&AtomFieldKet::ground(1, 0)).unwrap();
        assert_eq!(h.get(g10, e00), Complex64::new(0.7, 0.0));
        assert!(h.is_hermitian(1e-14));
        let g00 = w.index(&AtomFieldKet::ground(0, 0)).unwrap();
        for i in 0..w.dim() {
            assert_eq!(h.get(g00, i), Complex64::new(0.0, 0.0));
            assert_eq!(h.get(i, g00), Complex64::new(0.0, 0.0));
        }
        // cavity 1 couples m, not n
        let h1 = jc_generator(Cavity::One, 0.7, w);
        let g01 = w.index(&AtomFieldKet::ground(0, 1)).unwrap();
        assert_eq!(h1.get(g01, e00), Complex64::new(0.7, 0.0));
        assert_eq!(h1.get(g10, e00), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn generator_conserves_excitations() {
        let w = win(4);
        for cavity in [Cavity::Zero, Cavity::One] {
            let h = jc_generator(cavity, 1.3, w);
            for r in 0..w.dim() {
                for c in 0..w.dim() {
                    if h.get(r, c).norm() > 0.0 {
                        assert_eq!(w.ket(r).excitations(), w.ket(c).excitations());
                    }
                }
            }
        }
    }

    #[test]
    fn propagator_examples() {
        let w = win(3);
        let u = jc_propagator(Cavity::Zero, 0.0, 2.0, w).unwrap();
        assert!(u.matrix().max_abs_diff(&DenseMatrix::identity(w.dim())) < 1e-15);

        let u = jc_propagator(Cavity::Zero, FRAC_PI_2, 1.0, w).unwrap();
        let e00 = w.index(&AtomFieldKet::excited(0, 0)).unwrap();
        let g10 = w.index(&AtomFieldKet::ground(1, 0)).unwrap();
        assert!((u.matrix().get(g10, e00) - Complex64::new(0.0, -1.0)).norm() < 1e-15);

        let g00 = w.index(&AtomFieldKet::ground(0, 0)).unwrap();
        for t in [0.3, 1.0, 17.0] {
            let u = jc_propagator(Cavity::One, t, 1.1, w).unwrap();
            assert_eq!(u.matrix().get(g00, g00), Complex64::new(1.0, 0.0));
            assert!(u.unitarity_error() < 1e-12);
        }
        assert!(jc_propagator(Cavity::One, -1.0, 1.0, w).is_err());
    }

    #[test]
    fn evolve_before_entry_is_identity() {
        let p = SystemParams::new(1.0, 1.0)
            .with_photons(1, 2)
            .with_entries(2.0, 4.0)
            .with_atom(0.5, 1.0);
        let w = TruncationWindow::for_params(&p);
        let s = evolve(&p, 1.5, w).unwrap();
        assert!(s.max_abs_diff(&initial_state(&p)) < 1e-15);
    }

    #[test]
    fn window_too_small() {
        let p = SystemParams::new(1.0, 1.0).with_photons(3, 0);
        assert_eq!(
            evolve(&p, 1.0, win(4)),
            Err(Error::WindowTooSmall { needed: 5, got: 4 })
        );
    }

    #[test]
    fn hadamard_examples() {
        let psi = PureState::from_ket(FullKet::new(Control::Zero, AtomFieldKet::excited(1, 2)));
        let h = hadamard_control(&psi);
        for c in Control::BOTH {
            let a = h.amplitude(&FullKet::new(c, AtomFieldKet::excited(1, 2)));
            assert!((a - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        }
        let p = SystemParams::new(1.0, 0.8)
            .with_photons(1, 1)
            .with_atom(0.3, 0.2);
        let s = evolve(&p, 1.6, TruncationWindow::for_params(&p)).unwrap();
        assert!(hadamard_control(&hadamard_control(&s)).max_abs_diff(&s) < 1e-15);
    }

    #[test]
    fn measure_examples() {
        let rest = AtomFieldKet::ground(2, 0);
        let psi = PureState::from_ket(FullKet::new(Control::Zero, rest));
        let (s, prob) = measure_control(&psi, Control::Zero).unwrap();
        assert_eq!(prob, 1.0);
        assert_eq!(s, PureState::from_ket(rest));
        assert!(matches!(
            measure_control(&psi, Control::One),
            Err(Error::ImpossiblePostselection { .. })
        ));

        let p = SystemParams::new(1.0, FRAC_PI_2);
        let s = hadamard_control(&evolve(&p, PI, TruncationWindow::for_params(&p)).unwrap());
        let (_, prob) = measure_control(&s, Control::Zero).unwrap();
        assert!((prob - 0.5).abs() < 1e-12);
    }

    #[test]
    fn phase_examples() {
        let psi: PureState<AtomFieldKet> = [
            (AtomFieldKet::excited(1, 0), Complex64::new(0.6, 0.0)),
            (AtomFieldKet::ground(1, 1), Complex64::new(0.0, 0.8)),
            (AtomFieldKet::ground(0, 0), Complex64::new(0.0, 0.0)),
        ]
        .into_iter()
        .collect();
        assert_eq!(schrodinger_phase(&psi, 2.0, 0.0), psi);

        let g00 = PureState::from_ket(AtomFieldKet::ground(0, 0));
        let out = schrodinger_phase(&g00, 1.0, PI);
        assert!(
            (out.amplitude(&AtomFieldKet::ground(0, 0)) - Complex64::new(0.0, 1.0)).norm() < 1e-15
        );

        let out = schrodinger_phase(&psi, 1.3, 2.9);
        let a = out.amplitude(&AtomFieldKet::excited(1, 0)) / Complex64::new(0.6, 0.0);
        let b = out.amplitude(&AtomFieldKet::ground(1, 1)) / Complex64::new(0.0, 0.8);
        assert!((a - b).norm() < 1e-15);
        assert!((norm(&out) - 1.0).abs() < 1e-15);
    }
}
