//! Basis labels and sparse pure states.
//!
//! Three ket flavors share one sparse container: [`FullKet`] (control ⊗ atom ⊗
//! both fields), [`AtomFieldKet`] (atom ⊗ both fields) and [`FieldKet`] (both
//! fields only). Mixing flavors is rejected by the type system; the
//! serialization layer reports [`Error::FlavorMismatch`](crate::Error) when
//! parsing text whose kets disagree with the requested flavor.

use alloc::collections::BTreeMap;
use core::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

/// Amplitudes with magnitude below this are never stored.
pub const PRUNE_EPSILON: f64 = 1e-15;

/// Atomic level. `Excited` sorts before `Ground`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomLevel {
    Excited,
    Ground,
}

impl AtomLevel {
    pub const BOTH: [AtomLevel; 2] = [AtomLevel::Excited, AtomLevel::Ground];

    pub fn excitation(self) -> u32 {
        match self {
            AtomLevel::Excited => 1,
            AtomLevel::Ground => 0,
        }
    }

    /// `+1` for excited, `-1` for ground.
    pub fn sigma_z(self) -> f64 {
        match self {
            AtomLevel::Excited => 1.0,
            AtomLevel::Ground => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            AtomLevel::Excited => "e",
            AtomLevel::Ground => "g",
        }
    }
}

impl fmt::Display for AtomLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Control-qubit basis state. `Zero` routes the atom through cavity 0 first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Control {
    Zero,
    One,
}

impl Control {
    pub const BOTH: [Control; 2] = [Control::Zero, Control::One];

    pub fn bit(self) -> u8 {
        match self {
            Control::Zero => 0,
            Control::One => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Option<Self> {
        match bit {
            0 => Some(Control::Zero),
            1 => Some(Control::One),
            _ => None,
        }
    }

    /// `(-1)^j`.
    pub fn parity(self) -> f64 {
        match self {
            Control::Zero => 1.0,
            Control::One => -1.0,
        }
    }
}

/// Photon numbers `|n⟩_0 ⊗ |m⟩_1` of the two cavities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldKet {
    pub n: u32,
    pub m: u32,
}

impl FieldKet {
    pub fn new(n: u32, m: u32) -> Self {
        FieldKet { n, m }
    }
}

/// `|atom⟩ ⊗ |n⟩_0 ⊗ |m⟩_1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomFieldKet {
    pub atom: AtomLevel,
    pub n: u32,
    pub m: u32,
}

impl AtomFieldKet {
    pub fn new(atom: AtomLevel, n: u32, m: u32) -> Self {
        AtomFieldKet { atom, n, m }
    }

    pub fn excited(n: u32, m: u32) -> Self {
        Self::new(AtomLevel::Excited, n, m)
    }

    pub fn ground(n: u32, m: u32) -> Self {
        Self::new(AtomLevel::Ground, n, m)
    }

    /// Ket with photon numbers shifted by `(dn, dm)`, or `None` if either
    /// occupation would become negative.
    pub fn shifted(atom: AtomLevel, n: u32, m: u32, dn: i32, dm: i32) -> Option<Self> {
        Some(Self::new(
            atom,
            n.checked_add_signed(dn)?,
            m.checked_add_signed(dm)?,
        ))
    }

    pub fn fields(&self) -> FieldKet {
        FieldKet::new(self.n, self.m)
    }
}

/// `|control⟩ ⊗ |atom, n, m⟩`. Field order gives the lexicographic
/// `(control, atom, n, m)` ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FullKet {
    pub control: Control,
    pub rest: AtomFieldKet,
}

impl FullKet {
    pub fn new(control: Control, rest: AtomFieldKet) -> Self {
        FullKet { control, rest }
    }
}

/// Common behaviour of basis labels.
pub trait Ket: Copy + Ord + fmt::Debug {
    /// Eigenvalue of the excitation-number operator: atom excitation plus all
    /// photons.
    fn excitations(&self) -> u32;
}

impl Ket for FieldKet {
    fn excitations(&self) -> u32 {
        self.n + self.m
    }
}

impl Ket for AtomFieldKet {
    fn excitations(&self) -> u32 {
        self.atom.excitation() + self.n + self.m
    }
}

impl Ket for FullKet {
    fn excitations(&self) -> u32 {
        self.rest.excitations()
    }
}

/// Sparse pure state: a map from basis kets to amplitudes.
///
/// Iteration is in ket order. No amplitude with magnitude below
/// [`PRUNE_EPSILON`] is stored, and no stored amplitude is NaN or infinite.
#[derive(Clone, PartialEq)]
pub struct PureState<K: Ket> {
    amps: BTreeMap<K, Complex64>,
}

impl<K: Ket> Default for PureState<K> {
    fn default() -> Self {
        PureState {
            amps: BTreeMap::new(),
        }
    }
}

impl<K: Ket> fmt::Debug for PureState<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.amps.iter()).finish()
    }
}

impl<K: Ket> PureState<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_ket(ket: K) -> Self {
        let mut s = Self::new();
        s.amps.insert(ket, Complex64::new(1.0, 0.0));
        s
    }

    /// Builds a state from `(ket, amplitude)` pairs; repeated kets are summed.
    pub fn from_amplitudes<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, Complex64)>,
    {
        let mut s = Self::new();
        for (k, a) in pairs {
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::NonFinite);
            }
            s.accumulate(k, a);
        }
        s.prune();
        Ok(s)
    }

    /// Adds `amp` to the amplitude of `ket` without pruning. Callers that
    /// accumulate must call [`prune`](Self::prune) afterwards.
    pub(crate) fn accumulate(&mut self, ket: K, amp: Complex64) {
        *self.amps.entry(ket).or_insert(Complex64::new(0.0, 0.0)) += amp;
    }

    pub(crate) fn prune(&mut self) {
        self.amps.retain(|_, a| a.norm() >= PRUNE_EPSILON);
    }

    pub fn amplitude(&self, ket: &K) -> Complex64 {
        self.amps.get(ket).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Complex64)> {
        self.amps.iter()
    }

    pub fn kets(&self) -> impl Iterator<Item = &K> {
        self.amps.keys()
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut s = PureState {
            amps: self.amps.iter().map(|(k, a)| (*k, a * factor)).collect(),
        };
        s.prune();
        s
    }

    /// Rescales to unit norm. Fails on the empty state.
    pub fn normalized(&self) -> Result<Self> {
        let nrm = norm(self);
        if nrm < PRUNE_EPSILON {
            return Err(Error::ImpossiblePostselection {
                probability: nrm * nrm,
            });
        }
        Ok(self.scaled(Complex64::new(1.0 / nrm, 0.0)))
    }

    /// Applies `f` to every ket, keeping only those for which it returns
    /// `Some`. Amplitudes landing on the same target ket are summed.
    pub fn filter_map_kets<J: Ket>(&self, mut f: impl FnMut(&K) -> Option<J>) -> PureState<J> {
        let mut out = PureState::new();
        for (k, a) in &self.amps {
            if let Some(j) = f(k) {
                out.accumulate(j, *a);
            }
        }
        out.prune();
        out
    }

    /// Multiplies each amplitude by `f(ket)`.
    pub fn map_amplitudes(&self, mut f: impl FnMut(&K) -> Complex64) -> Self {
        let mut s = PureState {
            amps: self.amps.iter().map(|(k, a)| (*k, a * f(k))).collect(),
        };
        s.prune();
        s
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    /// Largest amplitude-wise difference `max_k |a_k - b_k|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let one_sided = |a: &Self, b: &Self| {
            a.amps
                .iter()
                .map(|(k, x)| (x - b.amplitude(k)).norm())
                .fold(0.0, f64::max)
        };
        one_sided(self, other).max(one_sided(other, self))
    }
}

impl<K: Ket> FromIterator<(K, Complex64)> for PureState<K> {
    /// Panics on non-finite amplitudes; use
    /// [`PureState::from_amplitudes`] for untrusted input.
    fn from_iter<I: IntoIterator<Item = (K, Complex64)>>(iter: I) -> Self {
        Self::from_amplitudes(iter).expect("non-finite amplitude")
    }
}

/// `⟨a|b⟩ = Σ conj(a_k) b_k`.
pub fn inner_product<K: Ket>(a: &PureState<K>, b: &PureState<K>) -> Complex64 {
    // iterate the smaller map, look up in the larger
    let (small, large, conj_small) = if a.len() <= b.len() {
        (a, b, true)
    } else {
        (b, a, false)
    };
    small
        .amps
        .iter()
        .filter_map(|(k, x)| large.amps.get(k).map(|y| (x, y)))
        .map(|(x, y)| {
            if conj_small {
                x.conj() * y
            } else {
                y.conj() * x
            }
        })
        .sum()
}

pub fn norm<K: Ket>(a: &PureState<K>) -> f64 {
    num_traits::Float::sqrt(a.norm_sqr())
}

/// `α·a + β·b`, pruned.
pub fn scale_and_add<K: Ket>(
    alpha: Complex64,
    a: &PureState<K>,
    beta: Complex64,
    b: &PureState<K>,
) -> PureState<K> {
    let mut out = PureState::new();
    for (k, x) in &a.amps {
        out.accumulate(*k, alpha * x);
    }
    for (k, y) in &b.amps {
        out.accumulate(*k, beta * y);
    }
    out.prune();
    out
}
