//! Model parameters shared by every computation.
//!
//! Both Hamiltonians are written in one form,
//! `H = ω a†a + ω0 Jz + γ/√𝒩 [(a J+ + a† J−) + δ (a† J+ + a J−)]`,
//! with δ = 0 for Tavis-Cummings and δ = 1 for Dicke. The pseudo-spin length
//! is kept as the integer `2j` so basis sizes stay exact for half-integer j.

use std::fmt;

use crate::{Error, Result};

/// Which of the two atom-field models is being studied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Rotating-wave approximation, conserves the excitation number.
    TavisCummings,
    /// Full model including counter-rotating terms; conserves only parity.
    Dicke,
}

impl Model {
    pub fn from_delta(delta: u8) -> Result<Self> {
        match delta {
            0 => Ok(Model::TavisCummings),
            1 => Ok(Model::Dicke),
            other => Err(Error::InvalidParams(format!(
                "delta must be 0 (Tavis-Cummings) or 1 (Dicke), got {other}"
            ))),
        }
    }

    /// The model selector δ as a float.
    pub fn delta(self) -> f64 {
        match self {
            Model::TavisCummings => 0.0,
            Model::Dicke => 1.0,
        }
    }

    pub fn delta_u8(self) -> u8 {
        match self {
            Model::TavisCummings => 0,
            Model::Dicke => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::TavisCummings => "tc",
            Model::Dicke => "dicke",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Energy in units of `ω0 j`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ScaledEnergy(pub f64);

impl ScaledEnergy {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Frequencies, coupling and pseudo-spin length of one model instance.
///
/// Validated on construction: `ω > 0`, `ω0 > 0`, `γ ≥ 0`, `2j ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    omega: f64,
    omega0: f64,
    gamma: f64,
    j2: u32,
    model: Model,
}

impl ModelParams {
    pub fn new(omega: f64, omega0: f64, gamma: f64, j2: u32, model: Model) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParams(format!("omega must be > 0, got {omega}")));
        }
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::InvalidParams(format!("omega0 must be > 0, got {omega0}")));
        }
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidParams(format!("gamma must be >= 0, got {gamma}")));
        }
        if j2 == 0 {
            return Err(Error::InvalidParams("2j must be a positive integer".into()));
        }
        Ok(Self { omega, omega0, gamma, j2, model })
    }

    /// Resonant parameters `ω = ω0 = 1` with the coupling given relative to
    /// the critical one.
    pub fn resonant(j2: u32, gamma_over_gc: f64, model: Model) -> Result<Self> {
        Self::new(1.0, 1.0, 0.0, j2, model)?.with_gamma_ratio(gamma_over_gc)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn delta(&self) -> f64 {
        self.model.delta()
    }

    /// Twice the pseudo-spin length; equal to the atom number 𝒩.
    pub fn j2(&self) -> u32 {
        self.j2
    }

    pub fn j(&self) -> f64 {
        f64::from(self.j2) / 2.0
    }

    /// Atom number 𝒩 = 2j.
    pub fn atom_number(&self) -> u32 {
        self.j2
    }

    /// Number of pseudo-spin projections, `2j + 1`.
    pub fn spin_dim(&self) -> usize {
        self.j2 as usize + 1
    }

    pub fn critical_coupling(&self) -> f64 {
        critical_coupling(self)
    }

    /// `γ / γc`.
    pub fn gamma_ratio(&self) -> f64 {
        self.gamma / self.critical_coupling()
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.omega, self.omega0, gamma, self.j2, self.model)
    }

    pub fn with_gamma_ratio(&self, gamma_over_gc: f64) -> Result<Self> {
        self.with_gamma(gamma_over_gc * self.critical_coupling())
    }

    pub fn with_model(&self, model: Model) -> Self {
        Self { model, ..*self }
    }

    pub fn with_j2(&self, j2: u32) -> Result<Self> {
        Self::new(self.omega, self.omega0, self.gamma, j2, self.model)
    }

    /// Energy scale `ω0 j` used by [`Self::scale`].
    pub fn energy_unit(&self) -> f64 {
        self.omega0 * self.j()
    }

    pub fn scale(&self, energy: f64) -> ScaledEnergy {
        ScaledEnergy(energy / self.energy_unit())
    }

    pub fn unscale(&self, epsilon: ScaledEnergy) -> f64 {
        epsilon.0 * self.energy_unit()
    }

    /// Shorthand for `self.scale(energy).value()`.
    pub fn epsilon(&self, energy: f64) -> f64 {
        self.scale(energy).0
    }
}

/// Critical coupling `γc = √(ω0 ω) / (1 + δ)` of the superradiant transition.
pub fn critical_coupling(params: &ModelParams) -> f64 {
    (params.omega0 * params.omega).sqrt() / (1.0 + params.delta())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(omega: f64, omega0: f64, model: Model) -> ModelParams {
        ModelParams::new(omega, omega0, 0.3, 10, model).unwrap()
    }

    #[test]
    fn critical_coupling_values() {
        assert_eq!(params(1.0, 1.0, Model::Dicke).critical_coupling(), 0.5);
        assert_eq!(params(1.0, 1.0, Model::TavisCummings).critical_coupling(), 1.0);
        assert_eq!(params(4.0, 1.0, Model::TavisCummings).critical_coupling(), 2.0);
    }

    #[test]
    fn dicke_critical_coupling_is_half_of_tc() {
        for (w, w0) in [(1.0, 1.0), (2.5, 0.7), (0.1, 9.0)] {
            let d = params(w, w0, Model::Dicke).critical_coupling();
            let t = params(w, w0, Model::TavisCummings).critical_coupling();
            assert!((d - t / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn scaling_examples() {
        let p = ModelParams::new(1.0, 1.3, 0.2, 7, Model::Dicke).unwrap();
        let e = -p.omega0() * p.j();
        assert_eq!(p.scale(e).value(), -1.0);
        assert_eq!(p.scale(0.0).value(), 0.0);
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(ModelParams::new(0.0, 1.0, 0.1, 2, Model::Dicke).is_err());
        assert!(ModelParams::new(1.0, -1.0, 0.1, 2, Model::Dicke).is_err());
        assert!(ModelParams::new(1.0, 1.0, -0.1, 2, Model::Dicke).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.1, 0, Model::Dicke).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0, 0.1, 2, Model::Dicke).is_err());
        assert!(Model::from_delta(2).is_err());
    }

    #[test]
    fn half_integer_spin_is_exact() {
        let p = ModelParams::new(1.0, 1.0, 0.1, 1, Model::Dicke).unwrap();
        assert_eq!(p.j(), 0.5);
        assert_eq!(p.spin_dim(), 2);
        assert_eq!(p.atom_number(), 1);
    }

    #[test]
    fn gamma_ratio_roundtrip() {
        let p = ModelParams::resonant(80, 2.0, Model::Dicke).unwrap();
        assert_eq!(p.gamma(), 1.0);
        assert!((p.gamma_ratio() - 2.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn scale_unscale_roundtrip(e in -1e6f64..1e6, j2 in 1u32..500, w0 in 0.01f64..10.0) {
            let p = ModelParams::new(1.0, w0, 0.5, j2, Model::TavisCummings).unwrap();
            let back = p.unscale(p.scale(e));
            prop_assert!((back - e).abs() <= 1e-12 * e.abs().max(1.0));
        }
    }
}
