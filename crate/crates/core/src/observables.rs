//! Probabilities, atom conditioning, reduced cavity states, linear entropy and
//! atomic inversion.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::analytic::{coeffs_c, coeffs_s, control_probability, MIN_NORMALIZATION};
use crate::state::{AtomFieldKet, AtomLevel, Control, FieldKet, Ket, PureState};
use crate::{Error, Result, SystemParams};

/// Conditioning on an atom level with probability below this is refused.
pub const MIN_PROBABILITY: f64 = 1e-12;

pub fn ket_probability<K: Ket>(s: &PureState<K>, ket: &K) -> f64 {
    s.amplitude(ket).norm_sqr()
}

/// Projects the atom onto `level`; returns the normalized two-cavity field
/// state and the probability of that outcome.
pub fn condition_on_atom(
    s: &PureState<AtomFieldKet>,
    level: AtomLevel,
) -> Result<(PureState<FieldKet>, f64)> {
    let slice = s.filter_map_kets(|k| (k.atom == level).then(|| k.fields()));
    let probability = slice.norm_sqr();
    if probability < MIN_PROBABILITY {
        return Err(Error::ImpossiblePostselection { probability });
    }
    Ok((
        slice.scaled(Complex64::new(1.0 / probability.sqrt(), 0.0)),
        probability,
    ))
}

/// Density matrix of one cavity on the Fock window
/// `offset..offset + dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldDensityMatrix {
    offset: u32,
    dim: usize,
    elements: Vec<Complex64>,
}

impl FieldDensityMatrix {
    /// Row-major `elements` of a `dim × dim` matrix whose first row is Fock
    /// state `offset`.
    pub fn from_elements(offset: u32, dim: usize, elements: Vec<Complex64>) -> Result<Self> {
        if elements.len() != dim * dim {
            return Err(Error::InvalidParams(
                "density matrix elements do not form a square",
            ));
        }
        if elements
            .iter()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::NonFinite);
        }
        Ok(FieldDensityMatrix {
            offset,
            dim,
            elements,
        })
    }

    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `⟨row|ρ|col⟩` in absolute Fock labels; zero outside the window.
    pub fn element(&self, row: u32, col: u32) -> Complex64 {
        let (Some(r), Some(c)) = (row.checked_sub(self.offset), col.checked_sub(self.offset))
        else {
            return Complex64::new(0.0, 0.0);
        };
        let (r, c) = (r as usize, c as usize);
        if r >= self.dim || c >= self.dim {
            return Complex64::new(0.0, 0.0);
        }
        self.elements[r * self.dim + c]
    }

    fn at(&self, r: usize, c: usize) -> Complex64 {
        self.elements[r * self.dim + c]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.at(i, i)).sum()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.dim)
            .all(|r| (0..self.dim).all(|c| (self.at(r, c) - self.at(c, r).conj()).norm() <= tol))
    }

    /// True when every eigenvalue is at least `-tol`, tested by a Cholesky
    /// factorization of `ρ + tol·I`.
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        let n = self.dim;
        let mut l = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            let mut d = self.at(j, j).re + tol;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if d < 0.0 {
                return false;
            }
            let d = d.sqrt();
            l[j * n + j] = Complex64::new(d, 0.0);
            for i in j + 1..n {
                let mut v = self.at(i, j);
                for k in 0..j {
                    v -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = if d > 0.0 {
                    v / d
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
        }
        true
    }

    /// Hermitian to 1e-12, unit trace to 1e-12, eigenvalues ≥ -1e-10.
    pub fn is_valid(&self) -> bool {
        self.is_hermitian(1e-12)
            && (self.trace() - Complex64::new(1.0, 0.0)).norm() <= 1e-12
            && self.is_positive_semidefinite(1e-10)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ ρ_ij ρ_ji = Σ |ρ_ij|² for Hermitian ρ
        self.elements.iter().map(|z| z.norm_sqr()).sum()
    }
}

fn reduce(
    fields: &PureState<FieldKet>,
    keep: impl Fn(&FieldKet) -> (u32, u32),
) -> FieldDensityMatrix {
    let labels: BTreeSet<u32> = fields.kets().map(|k| keep(k).0).collect();
    let (Some(&lo), Some(&hi)) = (labels.first(), labels.last()) else {
        return FieldDensityMatrix {
            offset: 0,
            dim: 0,
            elements: Vec::new(),
        };
    };
    let dim = (hi - lo + 1) as usize;
    // group amplitudes by the traced-out label
    let mut columns: BTreeMap<u32, Vec<(usize, Complex64)>> = BTreeMap::new();
    for (k, a) in fields.iter() {
        let (kept, traced) = keep(k);
        columns
            .entry(traced)
            .or_default()
            .push(((kept - lo) as usize, *a));
    }
    let mut elements = vec![Complex64::new(0.0, 0.0); dim * dim];
    for col in columns.values() {
        for (r, a) in col {
            for (c, b) in col {
                elements[r * dim + c] += a * b.conj();
            }
        }
    }
    FieldDensityMatrix {
        offset: lo,
        dim,
        elements,
    }
}

/// State of cavity 0 after tracing out cavity 1.
pub fn reduced_cavity0(fields: &PureState<FieldKet>) -> FieldDensityMatrix {
    reduce(fields, |k| (k.n, k.m))
}

/// State of cavity 1 after tracing out cavity 0.
pub fn reduced_cavity1(fields: &PureState<FieldKet>) -> FieldDensityMatrix {
    reduce(fields, |k| (k.m, k.n))
}

/// `S_L = 1 - Tr ρ²`.
pub fn linear_entropy(rho: &FieldDensityMatrix) -> f64 {
    1.0 - rho.purity()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Series,
    Ico,
}

/// Linear entropy of cavity 0 for a field state obtained by conditioning on
/// the atom, together with the dimension bound `1 - 1/min(d_0, d_1)` where
/// `d_c` counts the Fock labels occupied in cavity `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub value: f64,
    pub bound: f64,
    pub conditioned_on: AtomLevel,
    pub scenario: Scenario,
}

impl EntropyReport {
    pub fn new(
        fields: &PureState<FieldKet>,
        conditioned_on: AtomLevel,
        scenario: Scenario,
    ) -> Self {
        let d0 = fields.kets().map(|k| k.n).collect::<BTreeSet<_>>().len();
        let d1 = fields.kets().map(|k| k.m).collect::<BTreeSet<_>>().len();
        let d = d0.min(d1).max(1) as f64;
        EntropyReport {
            value: linear_entropy(&reduced_cavity0(fields)),
            bound: 1.0 - 1.0 / d,
            conditioned_on,
            scenario,
        }
    }
}

/// `⟨σ_z⟩` of an atom-field state.
pub fn sigma_z_expectation(s: &PureState<AtomFieldKet>) -> f64 {
    s.iter().map(|(k, a)| k.atom.sigma_z() * a.norm_sqr()).sum()
}

fn require_excited_atom(p: &SystemParams) -> Result<()> {
    p.validate()?;
    if p.atom_angle != 0.0 {
        return Err(Error::Precondition(
            "atom must start excited (atom_angle = 0)",
        ));
    }
    Ok(())
}

/// Closed-form atomic inversion after crossing cavity 0 then cavity 1 with the
/// atom initially excited:
/// `cos(2gT√(m+1)) cos²(gT√(n+1)) - cos(2gT√m) sin²(gT√(n+1))`.
pub fn sigma_z_series(p: &SystemParams) -> Result<f64> {
    require_excited_atom(p)?;
    let gt = p.pulse_area();
    let n = p.photons0 as f64;
    let m = p.photons1 as f64;
    let first = gt * (n + 1.0).sqrt();
    let (s1, c1) = first.sin_cos();
    Ok((2.0 * gt * (m + 1.0).sqrt()).cos() * c1 * c1 - (2.0 * gt * m.sqrt()).cos() * s1 * s1)
}

/// Closed-form atomic inversion after the switch with control outcome `|0⟩`
/// (maximal indefiniteness, atom initially excited):
/// `(|c₁+s₁|² + |c₆|² + |s₆|² - |c₃+s₈|² - |c₈+s₃|²) / 4N₀²`.
pub fn sigma_z_ico(p: &SystemParams) -> Result<f64> {
    require_excited_atom(p)?;
    let c = coeffs_c(p, p.transit_time)?;
    let s = coeffs_s(p, p.transit_time)?;
    let n0_sq = control_probability(Control::Zero, p)?;
    if n0_sq.max(0.0).sqrt() <= MIN_NORMALIZATION {
        return Err(Error::ImpossiblePostselection { probability: n0_sq });
    }
    let up = (c.term(1) + s.term(1)).norm_sqr() + c.term(6).norm_sqr() + s.term(6).norm_sqr();
    let down = (c.term(3) + s.term(8)).norm_sqr() + (c.term(8) + s.term(3)).norm_sqr();
    Ok((up - down) / (4.0 * n0_sq))
}

/// `⟨N_e⟩ = Σ P(ket) · (atom excitation + photons)`.
pub fn excitation_expectation<K: Ket>(s: &PureState<K>) -> f64 {
    s.iter()
        .map(|(k, a)| a.norm_sqr() * k.excitations() as f64)
        .sum()
}

/// Probability of each excitation number.
pub fn excitation_distribution<K: Ket>(s: &PureState<K>) -> BTreeMap<u32, f64> {
    let mut out = BTreeMap::new();
    for (k, a) in s.iter() {
        *out.entry(k.excitations()).or_insert(0.0) += a.norm_sqr();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{ico_postselected_state, state_after_both, CavityOrder};
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    const TOL: f64 = 1e-12;

    fn bell() -> PureState<FieldKet> {
        [
            (FieldKet::new(0, 1), Complex64::new(FRAC_1_SQRT_2, 0.0)),
            (FieldKet::new(1, 0), Complex64::new(FRAC_1_SQRT_2, 0.0)),
        ]
        .into_iter()
        .collect()
    }

    #[test]
    fn series_probabilities() {
        let p = SystemParams::new(1.0, PI);
        let s = state_after_both(CavityOrder::C0ThenC1, &p, PI).unwrap();
        assert!((ket_probability(&s, &AtomFieldKet::excited(0, 0)) - 1.0).abs() < TOL);
        let p = SystemParams::new(1.0, FRAC_PI_2);
        let s = state_after_both(CavityOrder::C0ThenC1, &p, FRAC_PI_2).unwrap();
        assert!((ket_probability(&s, &AtomFieldKet::ground(1, 0)) - 1.0).abs() < TOL);
        let total: f64 = s.kets().map(|k| ket_probability(&s, k)).sum();
        assert!((total - 1.0).abs() < TOL);
    }

    #[test]
    fn conditioning_examples() {
        let p = SystemParams::new(1.0, FRAC_PI_2);
        let s = ico_postselected_state(Control::Zero, &p, 0.0).unwrap();
        let (f, prob) = condition_on_atom(&s, AtomLevel::Ground).unwrap();
        assert!((prob - 1.0).abs() < TOL);
        assert!((crate::analytic::fidelity_amplitude(&f, &bell()) - 1.0).abs() < TOL);

        let psi = PureState::from_ket(AtomFieldKet::excited(2, 1));
        let (f, prob) = condition_on_atom(&psi, AtomLevel::Excited).unwrap();
        assert_eq!((f, prob), (PureState::from_ket(FieldKet::new(2, 1)), 1.0));
        assert!(matches!(
            condition_on_atom(&psi, AtomLevel::Ground),
            Err(Error::ImpossiblePostselection { .. })
        ));
    }

    #[test]
    fn series_slices_match_phi_e_and_phi_g() {
        let (n, m) = (2u32, 3u32);
        let gt = 1.234;
        let p = SystemParams::new(1.0, gt).with_photons(n, m);
        let s = state_after_both(CavityOrder::C0ThenC1, &p, gt).unwrap();
        let gn = gt * ((n + 1) as f64).sqrt();
        let gm = gt * ((m + 1) as f64).sqrt();
        let gm1 = gt * (m as f64).sqrt();
        let c = |x: f64| Complex64::new(x, 0.0);
        // |C1C0⟩_S = |e⟩|φ_e⟩ - i|g⟩|φ_g⟩
        let phi_e = [
            (AtomFieldKet::excited(n, m), c(gn.cos() * gm.cos())),
            (
                AtomFieldKet::excited(n + 1, m - 1),
                c(-gn.sin() * gm1.sin()),
            ),
        ];
        let phi_g = [
            (AtomFieldKet::ground(n, m + 1), c(gn.cos() * gm.sin())),
            (AtomFieldKet::ground(n + 1, m), c(gn.sin() * gm1.cos())),
        ];
        for (k, a) in phi_e {
            assert!((s.amplitude(&k) - a).norm() < TOL);
        }
        for (k, a) in phi_g {
            assert!((s.amplitude(&k) - (-Complex64::i() * a)).norm() < TOL);
        }
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn reduced_examples() {
        let rho = reduced_cavity0(&PureState::from_ket(FieldKet::new(3, 2)));
        assert_eq!((rho.offset(), rho.dim()), (3, 1));
        assert_eq!(rho.element(3, 3), Complex64::new(1.0, 0.0));
        assert_eq!(linear_entropy(&rho), 0.0);
        assert!(rho.is_valid());

        let rho = reduced_cavity0(&bell());
        assert!((rho.element(0, 0).re - 0.5).abs() < TOL);
        assert!((rho.element(1, 1).re - 0.5).abs() < TOL);
        assert!(rho.element(0, 1).norm() < TOL);
        assert!((linear_entropy(&rho) - 0.5).abs() < TOL);
        assert!(rho.is_valid());
    }

    #[test]
    fn series_excited_branch_matches_diagonal_formula() {
        let (n, m) = (1u32, 1u32);
        for gt in [0.37, 1.9, 4.41, 7.7] {
            let p = SystemParams::new(1.0, gt).with_photons(n, m);
            let s = state_after_both(CavityOrder::C0ThenC1, &p, gt).unwrap();
            let (f, _) = condition_on_atom(&s, AtomLevel::Excited).unwrap();
            let rho = reduced_cavity0(&f);
            let gn = gt * 2f64.sqrt();
            let gm = gt * 2f64.sqrt();
            let gm1 = gt;
            let w0 = (gn.cos() * gm.cos()).powi(2);
            let w1 = (gn.sin() * gm1.sin()).powi(2);
            let nes = w0 + w1;
            assert!((rho.element(n, n).re - w0 / nes).abs() < TOL);
            assert!((rho.element(n + 1, n + 1).re - w1 / nes).abs() < TOL);
            assert!(rho.element(n, n + 1).norm() < TOL);
            assert!(rho.is_valid());
        }
    }

    #[test]
    fn entropy_examples() {
        let mk = |d: &[f64]| {
            let n = d.len();
            let mut e = vec![Complex64::new(0.0, 0.0); n * n];
            for (i, x) in d.iter().enumerate() {
                e[i * n + i] = Complex64::new(*x, 0.0);
            }
            FieldDensityMatrix::from_elements(0, n, e).unwrap()
        };
        assert_eq!(linear_entropy(&mk(&[1.0])), 0.0);
        assert!((linear_entropy(&mk(&[0.5, 0.5])) - 0.5).abs() < TOL);
        let third = 1.0 / 3.0;
        assert!((linear_entropy(&mk(&[third, third, third])) - 2.0 / 3.0).abs() < TOL);
    }

    #[test]
    fn psd_check_rejects_negative_eigenvalue() {
        let e = vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.7, 0.0),
            Complex64::new(0.7, 0.0),
            Complex64::new(0.5, 0.0),
        ];
        let rho = FieldDensityMatrix::from_elements(0, 2, e).unwrap();
        assert!(rho.is_hermitian(TOL));
        assert!(!rho.is_positive_semidefinite(1e-10));
        assert!(!rho.is_valid());
    }

    #[test]
    fn sigma_z_examples() {
        let at = |gt: f64, n, m| SystemParams::new(1.0, gt).with_photons(n, m);
        assert_eq!(sigma_z_series(&at(0.0, 2, 1)).unwrap(), 1.0);
        assert!((sigma_z_series(&at(FRAC_PI_2, 0, 0)).unwrap() + 1.0).abs() < TOL);
        assert!((sigma_z_series(&at(PI, 0, 0)).unwrap() - 1.0).abs() < TOL);
        assert!((sigma_z_ico(&at(0.0, 0, 0)).unwrap() - 1.0).abs() < TOL);
        assert!((sigma_z_ico(&at(FRAC_PI_2, 0, 0)).unwrap() + 1.0).abs() < TOL);
        let ground = at(1.0, 0, 0).with_atom(0.3, 0.0);
        assert!(matches!(
            sigma_z_series(&ground),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn excitation_examples() {
        assert_eq!(
            excitation_expectation(&PureState::from_ket(AtomFieldKet::excited(0, 0))),
            1.0
        );
        assert_eq!(
            excitation_expectation(&PureState::from_ket(AtomFieldKet::ground(2, 3))),
            5.0
        );
    }
}
