//! Ordered spectra with per-level metadata.

use std::fmt;

use crate::{Error, ModelParams, Result};

/// Eigenvalue of the parity operator `Π = exp(iπΛ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_excitations(n: u64) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "+1",
            Parity::Odd => "-1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    /// Rank in the sorted spectrum, starting at 1.
    pub index: usize,
    pub energy: f64,
    /// Excitation number of the Tavis-Cummings block the level came from.
    pub lambda: Option<u32>,
    pub parity: Option<Parity>,
    /// Truncation-edge weight of a Dicke eigenstate.
    pub delta_p: Option<f64>,
}

impl Level {
    pub fn plain(energy: f64) -> Self {
        Self { index: 0, energy, lambda: None, parity: None, delta_p: None }
    }
}

/// Sorted spectrum that is complete for every scaled energy up to
/// `epsilon_ref`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRecord {
    pub params: ModelParams,
    pub levels: Vec<Level>,
    pub epsilon_ref: f64,
}

impl SpectrumRecord {
    /// Sorts `levels` by energy (ties keep their relative order) and
    /// renumbers them from 1.
    pub fn new(params: ModelParams, mut levels: Vec<Level>, epsilon_ref: f64) -> Self {
        levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        for (i, l) in levels.iter_mut().enumerate() {
            l.index = i + 1;
        }
        Self { params, levels, epsilon_ref }
    }

    /// Record of bare eigenvalues without metadata.
    pub fn from_energies(params: ModelParams, energies: &[f64], epsilon_ref: f64) -> Self {
        Self::new(params, energies.iter().map(|&e| Level::plain(e)).collect(), epsilon_ref)
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn epsilon(&self, level: &Level) -> f64 {
        self.params.epsilon(level.energy)
    }

    pub fn ground_epsilon(&self) -> Option<f64> {
        self.levels.first().map(|l| self.epsilon(l))
    }
}

/// Number of levels with scaled energy at or below `epsilon`.
pub fn count_states_below(record: &SpectrumRecord, epsilon: f64) -> Result<usize> {
    if epsilon > record.epsilon_ref {
        return Err(Error::BeyondCertificate { epsilon, certificate: record.epsilon_ref });
    }
    let cap = record.params.unscale(crate::ScaledEnergy(epsilon));
    Ok(record.levels.partition_point(|l| l.energy <= cap))
}
