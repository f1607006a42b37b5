//! Named sweep presets `fig2a` ... `fig5c`, all on `gT ∈ [0, 10]` in steps
//! of `0.01`.

use std::fmt;
use std::str::FromStr;

use ico_cqed_core::AtomLevel::{Excited as E, Ground as G};
use serde::Serialize;

use crate::sweep::{Quantity, SweepConfig, SweepScenario};
use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FigurePreset {
    Fig2a,
    Fig2b,
    Fig2c,
    Fig2d,
    Fig2e,
    Fig2f,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig5a,
    Fig5b,
    Fig5c,
}

impl FigurePreset {
    pub const ALL: [FigurePreset; 13] = [
        FigurePreset::Fig2a,
        FigurePreset::Fig2b,
        FigurePreset::Fig2c,
        FigurePreset::Fig2d,
        FigurePreset::Fig2e,
        FigurePreset::Fig2f,
        FigurePreset::Fig3a,
        FigurePreset::Fig3b,
        FigurePreset::Fig4a,
        FigurePreset::Fig4b,
        FigurePreset::Fig5a,
        FigurePreset::Fig5b,
        FigurePreset::Fig5c,
    ];

    pub fn id(self) -> &'static str {
        match self {
            FigurePreset::Fig2a => "fig2a",
            FigurePreset::Fig2b => "fig2b",
            FigurePreset::Fig2c => "fig2c",
            FigurePreset::Fig2d => "fig2d",
            FigurePreset::Fig2e => "fig2e",
            FigurePreset::Fig2f => "fig2f",
            FigurePreset::Fig3a => "fig3a",
            FigurePreset::Fig3b => "fig3b",
            FigurePreset::Fig4a => "fig4a",
            FigurePreset::Fig4b => "fig4b",
            FigurePreset::Fig5a => "fig5a",
            FigurePreset::Fig5b => "fig5b",
            FigurePreset::Fig5c => "fig5c",
        }
    }

    /// Sweeps making up the panel; multi-sweep panels compare series and
    /// switch curves.
    pub fn configs(self) -> Vec<SweepConfig> {
        use FigurePreset::*;
        let series = |n: u32, m: u32, q: Vec<Quantity>| {
            SweepConfig::new(SweepScenario::SeriesC0C1, q).with_photons(n, m)
        };
        let ico = |n: u32, m: u32, q: Vec<Quantity>| {
            SweepConfig::new(SweepScenario::IcoJ0, q).with_photons(n, m)
        };
        let both = |n: u32, m: u32, q: Quantity| vec![series(n, m, vec![q]), ico(n, m, vec![q])];
        // P(e,n,m) and P(g,n,m+1)
        let stay_or_emit_second = |n: u32, m: u32| {
            let (n, m) = (n as i64, m as i64);
            vec![Quantity::ket_prob(E, n, m), Quantity::ket_prob(G, n, m + 1)]
        };
        // P(g,n+1,m) and P(e,n+1,m-1)
        let emit_first_or_swap = |n: u32, m: u32| {
            let (n, m) = (n as i64, m as i64);
            vec![
                Quantity::ket_prob(G, n + 1, m),
                Quantity::ket_prob(E, n + 1, m - 1),
            ]
        };
        match self {
            Fig2a => vec![series(0, 0, stay_or_emit_second(0, 0))],
            Fig2b => vec![series(0, 0, emit_first_or_swap(0, 0))],
            Fig2c => vec![series(5, 5, stay_or_emit_second(5, 5))],
            Fig2d => vec![series(5, 5, emit_first_or_swap(5, 5))],
            Fig2e => vec![series(4, 5, stay_or_emit_second(4, 5))],
            Fig2f => vec![series(4, 5, emit_first_or_swap(4, 5))],
            Fig3a => vec![ico(0, 0, vec![Quantity::ket_prob(E, 0, 0)])],
            Fig3b => vec![ico(
                0,
                0,
                vec![Quantity::ket_prob(G, 0, 1), Quantity::ket_prob(G, 1, 0)],
            )],
            Fig4a => both(1, 1, Quantity::Entropy(E)),
            Fig4b => both(0, 0, Quantity::Entropy(G)),
            Fig5a => both(0, 0, Quantity::SigmaZ),
            Fig5b => both(1, 1, Quantity::SigmaZ),
            Fig5c => both(0, 1, Quantity::SigmaZ),
        }
    }
}

impl fmt::Display for FigurePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for FigurePreset {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|p| p.id() == s).ok_or_else(|| {
            let known: Vec<_> = Self::ALL.iter().map(|p| p.id()).collect();
            UsageError::new(
                "id",
                format!(
                    "unknown figure `{s}` (expected one of {})",
                    known.join(", ")
                ),
            )
        })
    }
}
