//! Semiclassical density of states.
//!
//! All densities are returned in the scaled form `ων/(2j)`, which runs from
//! 0 at the classical minimum to 1 once the whole pseudo-spin sphere is
//! energetically accessible (`ε > 1`). With `r = γ/γc` the energy shell is
//! bounded by the roots
//!
//! `y± = −r⁻² ± r⁻¹ √(2(ε − ε0))`, `ε0 = −½(r⁻² + r²)`,
//!
//! of `y − (r²/2)(1 − y²) = ε`, where `y = jz/j`.

mod monte_carlo;

use std::f64::consts::PI;

pub use monte_carlo::{disc_radius, nu_bin_average, nu_monte_carlo, McBin, MC_MIN_SAMPLES};

use crate::analysis::{fit_log_divergence, LogFit};
use crate::landscape::{ground_energy, SQRT_SLACK};
use crate::quadrature::integrate_sqrt_endpoints;
use crate::{Error, Exec, Model, ModelParams, Result, ScaledEnergy};

/// Absolute tolerance of the Dicke phase-space quadrature.
pub const QUADRATURE_TOL: f64 = 1e-12;

/// Default finite-difference step for the Dicke derivative.
pub const DEFAULT_DERIVATIVE_STEP: f64 = 1e-4;

/// The three energy windows of the semiclassical density, plus the
/// classically forbidden region below the ground energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeTag {
    Forbidden,
    /// `ε0 ≤ ε < −1`, only present above the critical coupling.
    BelowSaddle,
    /// `−1 ≤ ε ≤ 1`.
    Middle,
    /// `ε > 1`, the whole sphere is accessible.
    Saturated,
}

impl RegimeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeTag::Forbidden => "forbidden",
            RegimeTag::BelowSaddle => "below_saddle",
            RegimeTag::Middle => "middle",
            RegimeTag::Saturated => "saturated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRegime {
    pub tag: RegimeTag,
    /// Classical minimum of the scaled energy, `−1` in the normal phase.
    pub epsilon0: ScaledEnergy,
}

impl EnergyRegime {
    pub fn classify(epsilon: f64, params: &ModelParams) -> Self {
        let e0 = ground_energy(params);
        let tag = if epsilon > 1.0 {
            RegimeTag::Saturated
        } else if epsilon >= -1.0 {
            RegimeTag::Middle
        } else if epsilon >= e0 {
            RegimeTag::BelowSaddle
        } else {
            RegimeTag::Forbidden
        };
        Self { tag, epsilon0: ScaledEnergy(e0) }
    }
}

/// `−½(r⁻² + r²)`, the minimum of the superradiant energy surface. Below the
/// critical coupling this lies under the true ground energy `−1`.
pub fn superradiant_epsilon0(params: &ModelParams) -> f64 {
    let r2 = params.gamma_ratio().powi(2);
    -0.5 * (1.0 / r2 + r2)
}

// √(1 + 2εr² + r⁴) = r² · r⁻¹√(2(ε − ε0)); kept in this form so that r → 0
// stays finite.
fn shell_root(epsilon: f64, r2: f64) -> Result<f64> {
    let arg = 1.0 + 2.0 * epsilon * r2 + r2 * r2;
    if arg < -SQRT_SLACK * (1.0 + r2 * r2) {
        return Err(Error::ForbiddenEnergy {
            epsilon,
            epsilon0: -0.5 * (1.0 / r2 + r2),
        });
    }
    Ok(arg.max(0.0).sqrt())
}

/// Roots `(y−, y+)` bounding the energy shell in `y = jz/j`.
pub fn y_pm(epsilon: f64, params: &ModelParams) -> Result<(f64, f64)> {
    let r2 = params.gamma_ratio().powi(2);
    let s = shell_root(epsilon, r2)?;
    // y+ = (s − 1)/r², rewritten to avoid cancellation at weak coupling.
    let y_plus = (2.0 * epsilon + r2) / (1.0 + s);
    let y_minus = if r2 == 0.0 { f64::NEG_INFINITY } else { -(1.0 + s) / r2 };
    Ok((y_minus, y_plus))
}

/// Tavis-Cummings density of states in closed form. Returns 0 in the
/// forbidden region.
pub fn nu_tc(epsilon: f64, params: &ModelParams) -> f64 {
    match EnergyRegime::classify(epsilon, params).tag {
        RegimeTag::Forbidden => 0.0,
        RegimeTag::Saturated => 1.0,
        RegimeTag::BelowSaddle => {
            let (lo, hi) = y_pm(epsilon, params).unwrap_or((0.0, 0.0));
            (0.5 * (hi - lo)).clamp(0.0, 1.0)
        }
        RegimeTag::Middle => {
            let (_, hi) = y_pm(epsilon, params).expect("middle regime lies above epsilon0");
            (0.5 * (1.0 + hi)).clamp(0.0, 1.0)
        }
    }
}

/// Fraction of azimuths `φ ∈ [0, 2π)` at which the Dicke energy surface at
/// `y = jz/j` lies at or below `epsilon`. For Tavis-Cummings the surface
/// does not depend on `φ` and the fraction is 0 or 1.
pub fn phi_admissible_fraction(y: f64, epsilon: f64, params: &ModelParams) -> Result<f64> {
    if !(-1.0..=1.0).contains(&y) {
        return Err(Error::InvalidInput(format!("y = {y} outside [-1, 1]")));
    }
    if y <= epsilon {
        return Ok(1.0);
    }
    let r2 = params.gamma_ratio().powi(2);
    let den = r2 * (1.0 - y * y);
    let num = 2.0 * (y - epsilon);
    if params.model() == Model::TavisCummings {
        return Ok(if num <= den { 1.0 } else { 0.0 });
    }
    if num >= den * (1.0 + SQRT_SLACK) {
        return Ok(0.0);
    }
    let g = (num / den).clamp(0.0, 1.0);
    Ok(2.0 / PI * g.sqrt().acos())
}

/// Range `[y_lo, y_hi]` of `y = jz/j` at azimuth `phi` where the energy
/// surface lies at or below `epsilon`, or `None` when it is empty.
pub fn admissible_y_interval(epsilon: f64, phi: f64, params: &ModelParams) -> Option<(f64, f64)> {
    let r2 = params.gamma_ratio().powi(2);
    let d = params.delta();
    let k = 0.5 * r2 * (1.0 - 4.0 * d / (1.0 + d).powi(2) * phi.sin().powi(2));
    // ε(y) = y − k(1 − y²) ≤ ε  ⇔  k y² + y − (k + ε) ≤ 0.
    let (lo, hi) = if k <= 0.0 {
        (-1.0, epsilon)
    } else {
        let disc = 1.0 + 4.0 * k * (k + epsilon);
        if disc < 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        // 2c/(−b ∓ √disc) keeps the root near y = −1 free of cancellation.
        let hi = 2.0 * (k + epsilon) / (1.0 + sq);
        (-(1.0 + sq) / (2.0 * k), hi)
    };
    let (lo, hi) = (lo.max(-1.0), hi.min(1.0));
    (lo <= hi).then_some((lo, hi))
}

// arccos √g with g = 2(y−ε)/(r²(1−y²)), written as an atan2 of the two
// non-negative pieces g·den and (1−g)·den so neither endpoint loses digits.
fn dicke_angle(y: f64, epsilon: f64, r2: f64, y_hi: f64, s: f64) -> Result<f64> {
    let num_g = 2.0 * (y - epsilon);
    // r²(y+ − y)(y − y−) with y− = −(1 + s)/r².
    let num_c = (y_hi - y) * (r2 * y + 1.0 + s);
    let scale = r2 * (1.0 - y * y) + num_g.abs() + 1.0;
    let tol = SQRT_SLACK * scale;
    if num_g < -tol || num_c < -tol {
        return Err(Error::SqrtDomain { value: num_g.min(num_c) / scale });
    }
    Ok(num_c.max(0.0).sqrt().atan2(num_g.max(0.0).sqrt()))
}

/// Dicke density of states by quadrature over the admissible `(jz, φ)`
/// region.
pub fn nu_dicke(epsilon: f64, params: &ModelParams) -> Result<f64> {
    let regime = EnergyRegime::classify(epsilon, params);
    let r2 = params.gamma_ratio().powi(2);
    match regime.tag {
        RegimeTag::Forbidden => Err(Error::ForbiddenEnergy {
            epsilon,
            epsilon0: regime.epsilon0.value(),
        }),
        RegimeTag::Saturated => Ok(1.0),
        RegimeTag::Middle if r2 == 0.0 => Ok(0.5 * (epsilon + 1.0)),
        tag => {
            let (y_lo, y_hi) = y_pm(epsilon, params)?;
            let s = shell_root(epsilon, r2)?;
            let (a, base) = if tag == RegimeTag::Middle {
                (epsilon, 0.5 * (epsilon + 1.0))
            } else {
                (y_lo, 0.0)
            };
            let err = std::cell::Cell::new(None);
            let integral = integrate_sqrt_endpoints(
                |y| match dicke_angle(y, epsilon, r2, y_hi, s) {
                    Ok(v) => v,
                    Err(e) => {
                        err.set(Some(e));
                        0.0
                    }
                },
                a,
                y_hi,
                QUADRATURE_TOL,
            )?;
            if let Some(e) = err.into_inner() {
                return Err(e);
            }
            Ok((base + integral.value / PI).clamp(0.0, 1.0))
        }
    }
}

/// Density of states of whichever model `params` describes.
pub fn nu(epsilon: f64, params: &ModelParams) -> Result<f64> {
    match params.model() {
        Model::TavisCummings => Ok(nu_tc(epsilon, params)),
        Model::Dicke => nu_dicke(epsilon, params),
    }
}

// ν continued by 0 into the forbidden region, for finite differences.
fn nu_or_zero(epsilon: f64, params: &ModelParams) -> Result<f64> {
    if epsilon < ground_energy(params) {
        Ok(0.0)
    } else {
        nu(epsilon, params)
    }
}

/// Derivative of the Tavis-Cummings density on the branch `tag`, evaluated
/// at `epsilon` (which may sit on the branch edge, giving a one-sided limit).
pub fn nu_tc_branch_derivative(epsilon: f64, tag: RegimeTag, params: &ModelParams) -> f64 {
    let r2 = params.gamma_ratio().powi(2);
    let factor = match tag {
        RegimeTag::BelowSaddle => 1.0,
        RegimeTag::Middle => 0.5,
        RegimeTag::Saturated | RegimeTag::Forbidden => return 0.0,
    };
    match shell_root(epsilon, r2) {
        Ok(s) => factor / s,
        Err(_) => 0.0,
    }
}

/// `dν/dε` and whether `epsilon` is within `h` of one of the singular
/// energies `ε = ±1`. Tavis-Cummings is differentiated analytically, Dicke
/// by a central difference with step `h`.
pub fn nu_derivative(epsilon: f64, params: &ModelParams, h: f64) -> Result<(f64, bool)> {
    let singular = (epsilon + 1.0).abs() < h || (epsilon - 1.0).abs() < h;
    let value = match params.model() {
        Model::TavisCummings => {
            nu_tc_branch_derivative(epsilon, EnergyRegime::classify(epsilon, params).tag, params)
        }
        Model::Dicke => {
            if h <= 0.0 {
                return Err(Error::InvalidInput(format!("derivative step must be positive, got {h}")));
            }
            (nu_or_zero(epsilon + h, params)? - nu_or_zero(epsilon - h, params)?) / (2.0 * h)
        }
    };
    Ok((value, singular))
}

/// Side from which a one-sided derivative limit is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// One-sided limit of `dν/dε` at `epsilon`. Exact for Tavis-Cummings; for
/// Dicke a second-order one-sided difference with step `h`.
pub fn nu_derivative_limit(epsilon: f64, side: Side, params: &ModelParams, h: f64) -> Result<f64> {
    match params.model() {
        Model::TavisCummings => {
            let probe = match side {
                Side::Left => epsilon - 1e-9 * epsilon.abs().max(1.0),
                Side::Right => epsilon + 1e-9 * epsilon.abs().max(1.0),
            };
            let tag = EnergyRegime::classify(probe, params).tag;
            Ok(nu_tc_branch_derivative(epsilon, tag, params))
        }
        Model::Dicke => {
            let sign = match side {
                Side::Left => -1.0,
                Side::Right => 1.0,
            };
            let f0 = nu_or_zero(epsilon, params)?;
            let f1 = nu_or_zero(epsilon + sign * h, params)?;
            let f2 = nu_or_zero(epsilon + 2.0 * sign * h, params)?;
            Ok(sign * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h))
        }
    }
}

/// Samples `(ε, dν/dε)` at `ε = −1 ∓ 10⁻ᵏ`, `k = 2..=5`, on one side of the
/// saddle energy. The difference step shrinks with the distance so that no
/// stencil straddles `ε = −1`.
pub fn saddle_derivative_samples(params: &ModelParams, side: Side) -> Result<Vec<(f64, f64)>> {
    let sign = match side {
        Side::Left => -1.0,
        Side::Right => 1.0,
    };
    (2..=5)
        .map(|k| {
            let dist = 10f64.powi(-k);
            let eps = -1.0 + sign * dist;
            let (v, _) = nu_derivative(eps, params, dist / 10.0)?;
            Ok((eps, v))
        })
        .collect()
}

/// What kind of non-analyticity the density shows at a marked energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SingularityKind {
    /// Finite jump of `dν/dε`.
    DerivativeJump,
    /// `dν/dε ~ −b ln|ε − ε_c|`.
    DerivativeLogDivergence,
    /// `ν` reaches 1 and stays there: `dν/dε` drops to 0.
    SaturationKink,
}

impl SingularityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SingularityKind::DerivativeJump => "derivative_jump",
            SingularityKind::DerivativeLogDivergence => "derivative_log_divergence",
            SingularityKind::SaturationKink => "saturation_kink",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularityMarker {
    pub epsilon: f64,
    pub kind: SingularityKind,
    /// Left and right limits of `dν/dε` (for a log divergence, the values
    /// at the closest sampled distance).
    pub left: f64,
    pub right: f64,
    /// Fit of `dν/dε` below the saddle energy, when one was attempted.
    pub log_fit: Option<LogFit>,
}

/// Singularities of `ν` for these parameters: the saturation kink at
/// `ε = 1` always, and above the critical coupling the saddle at `ε = −1`.
pub fn singularity_markers(params: &ModelParams) -> Result<Vec<SingularityMarker>> {
    let mut out = Vec::new();
    if params.gamma_ratio() > 1.0 {
        let left_samples = saddle_derivative_samples(params, Side::Left)?;
        let right_samples = saddle_derivative_samples(params, Side::Right)?;
        let fit = fit_log_divergence(&left_samples, -1.0)?;
        let (left, right) = match params.model() {
            Model::TavisCummings => (
                nu_derivative_limit(-1.0, Side::Left, params, DEFAULT_DERIVATIVE_STEP)?,
                nu_derivative_limit(-1.0, Side::Right, params, DEFAULT_DERIVATIVE_STEP)?,
            ),
            Model::Dicke => (left_samples[3].1, right_samples[3].1),
        };
        let kind = if fit.indicates_divergence() {
            SingularityKind::DerivativeLogDivergence
        } else {
            SingularityKind::DerivativeJump
        };
        out.push(SingularityMarker { epsilon: -1.0, kind, left, right, log_fit: Some(fit) });
    }
    out.push(SingularityMarker {
        epsilon: 1.0,
        kind: SingularityKind::SaturationKink,
        left: nu_derivative_limit(1.0, Side::Left, params, DEFAULT_DERIVATIVE_STEP)?,
        right: nu_derivative_limit(1.0, Side::Right, params, DEFAULT_DERIVATIVE_STEP)?,
        log_fit: None,
    });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DosSample {
    pub epsilon: f64,
    pub nu_scaled: f64,
    pub nu_prime_scaled: f64,
    pub regime: RegimeTag,
    /// Within one derivative step of `ε = ±1`.
    pub singular: bool,
}

/// The semiclassical density of states sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DosCurve {
    pub params: ModelParams,
    pub samples: Vec<DosSample>,
    pub markers: Vec<SingularityMarker>,
}

/// Evaluates `ν` and `dν/dε` on a sorted grid. Forbidden energies give
/// `ν = 0` instead of an error.
pub fn dos_curve(params: &ModelParams, grid: &[f64], h: f64, exec: Exec) -> Result<DosCurve> {
    if grid.windows(2).any(|w| w[1] < w[0]) || grid.iter().any(|e| !e.is_finite()) {
        return Err(Error::InvalidInput("energy grid must be finite and sorted".into()));
    }
    let samples = exec
        .map(grid, |&epsilon| -> Result<DosSample> {
            let regime = EnergyRegime::classify(epsilon, params).tag;
            let nu_scaled = nu_or_zero(epsilon, params)?;
            let (nu_prime_scaled, singular) = if regime == RegimeTag::Forbidden {
                (0.0, false)
            } else {
                nu_derivative(epsilon, params, h)?
            };
            Ok(DosSample { epsilon, nu_scaled, nu_prime_scaled, regime, singular })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(DosCurve {
        params: *params,
        samples,
        markers: singularity_markers(params)?,
    })
}

/// Evenly spaced grid of `n` points on `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}
