use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use crate::{Error, Result};

/// Physical inputs shared by the analytic engine and the oracle.
///
/// Units: `coupling` and `frequency` in rad per unit time, times in the same
/// unit. `ħ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Atom-field coupling `g > 0`, identical for both cavities.
    pub coupling: f64,
    /// Time spent inside each cavity.
    pub transit_time: f64,
    /// Field and atomic transition angular frequency (resonant).
    pub frequency: f64,
    /// Control state `cos θ |0⟩ + e^{iφ} sin θ |1⟩`: θ ∈ [0, π/2].
    pub control_angle: f64,
    /// φ ∈ [0, 2π).
    pub control_phase: f64,
    /// Atom state `cos ξ |e⟩ + e^{iχ} sin ξ |g⟩`: ξ ∈ [0, π/2].
    pub atom_angle: f64,
    /// χ ∈ [0, 2π).
    pub atom_phase: f64,
    /// Initial Fock number of cavity 0.
    pub photons0: u32,
    /// Initial Fock number of cavity 1.
    pub photons1: u32,
    /// Time the atom enters its first cavity.
    pub first_entry: f64,
    /// Time the atom enters its second cavity; `None` means immediately after
    /// leaving the first.
    pub second_entry: Option<f64>,
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams {
            coupling: 1.0,
            transit_time: 0.0,
            frequency: 1.0,
            control_angle: FRAC_PI_4,
            control_phase: 0.0,
            atom_angle: 0.0,
            atom_phase: 0.0,
            photons0: 0,
            photons1: 0,
            first_entry: 0.0,
            second_entry: None,
        }
    }
}

/// Entry times into the two cavities and the per-cavity transit time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub first_entry: f64,
    pub second_entry: f64,
    pub transit_time: f64,
}

impl Schedule {
    pub fn validate(&self) -> Result<()> {
        if !(self.transit_time.is_finite() && self.transit_time >= 0.0) {
            return Err(Error::Domain {
                what: "transit_time",
                value: self.transit_time,
            });
        }
        if !(self.first_entry.is_finite() && self.first_entry >= 0.0) {
            return Err(Error::Domain {
                what: "first_entry",
                value: self.first_entry,
            });
        }
        if !(self.second_entry.is_finite()
            && self.first_entry + self.transit_time <= self.second_entry)
        {
            return Err(Error::InvalidParams(
                "second cavity entered before leaving the first",
            ));
        }
        Ok(())
    }

    /// Time the atom leaves the second cavity.
    pub fn exit(&self) -> f64 {
        self.second_entry + self.transit_time
    }
}

impl SystemParams {
    /// Resonant defaults with the given coupling and transit time: atom
    /// excited, both cavities empty, maximally indefinite control.
    pub fn new(coupling: f64, transit_time: f64) -> Self {
        SystemParams {
            coupling,
            transit_time,
            ..Default::default()
        }
    }

    pub fn with_photons(mut self, n: u32, m: u32) -> Self {
        self.photons0 = n;
        self.photons1 = m;
        self
    }

    pub fn with_atom(mut self, angle: f64, phase: f64) -> Self {
        self.atom_angle = angle;
        self.atom_phase = phase;
        self
    }

    pub fn with_control(mut self, angle: f64, phase: f64) -> Self {
        self.control_angle = angle;
        self.control_phase = phase;
        self
    }

    pub fn with_frequency(mut self, frequency: f64) -> Self {
        self.frequency = frequency;
        self
    }

    pub fn with_entries(mut self, first: f64, second: f64) -> Self {
        self.first_entry = first;
        self.second_entry = Some(second);
        self
    }

    /// Dimensionless pulse area `gT`.
    pub fn pulse_area(&self) -> f64 {
        self.coupling * self.transit_time
    }

    pub fn schedule(&self) -> Schedule {
        Schedule {
            first_entry: self.first_entry,
            second_entry: self
                .second_entry
                .unwrap_or(self.first_entry + self.transit_time),
            transit_time: self.transit_time,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |what, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Domain { what, value: v })
            }
        };
        let within = |what, v: f64, hi: f64, closed: bool| {
            let ok = v.is_finite() && v >= 0.0 && if closed { v <= hi } else { v < hi };
            if ok {
                Ok(())
            } else {
                Err(Error::Domain { what, value: v })
            }
        };
        positive("coupling", self.coupling)?;
        positive("frequency", self.frequency)?;
        within("control_angle", self.control_angle, FRAC_PI_2, true)?;
        within("control_phase", self.control_phase, TAU, false)?;
        within("atom_angle", self.atom_angle, FRAC_PI_2, true)?;
        within("atom_phase", self.atom_phase, TAU, false)?;
        self.schedule().validate()
    }
}
