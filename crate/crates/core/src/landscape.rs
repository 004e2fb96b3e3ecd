//! Classical limit of both models: Hamiltonian, flow, fixed points, the
//! pseudo-spin energy surface and the ground-energy curve.
//!
//! Phase space is `(q, p)` for the field and `(φ, jz)` for the pseudo-spin,
//! with `{jz, φ} = 1`. All energies returned as `epsilon` are in units of
//! `ω0 j`.

use std::f64::consts::{PI, TAU};

use crate::{Error, Exec, ModelParams, Result, ScaledEnergy};

/// Rounding slack for square-root arguments at the sphere poles.
pub const SQRT_SLACK: f64 = 1e-12;

/// Hessian eigenvalues smaller than this are treated as flat directions.
pub const FLAT_CURVATURE: f64 = 1e-8;

pub(crate) fn sqrt_clamped(x: f64) -> Result<f64> {
    if x >= 0.0 {
        Ok(x.sqrt())
    } else if x >= -SQRT_SLACK {
        Ok(0.0)
    } else {
        Err(Error::SqrtDomain { value: x })
    }
}

/// A point `(q, p, φ, jz)` of the classical phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpacePoint {
    pub q: f64,
    pub p: f64,
    /// Azimuth, wrapped to `[0, 2π)`.
    pub phi: f64,
    pub jz: f64,
}

impl PhaseSpacePoint {
    pub fn new(q: f64, p: f64, phi: f64, jz: f64) -> Self {
        Self { q, p, phi: wrap_angle(phi), jz }
    }

    /// Zenith angle measured from the south pole, `θ = arccos(−jz/j)`.
    pub fn theta(&self, j: f64) -> f64 {
        (-self.jz / j).clamp(-1.0, 1.0).acos()
    }

    /// The azimuth carries no information on the poles.
    pub fn phi_defined(&self, j: f64) -> bool {
        self.jz.abs() < j
    }

    fn check(&self, params: &ModelParams) -> Result<()> {
        let j = params.j();
        if self.jz.abs() > j * (1.0 + SQRT_SLACK) || !self.jz.is_finite() {
            return Err(Error::InvalidInput(format!("|jz| = {} exceeds j = {j}", self.jz.abs())));
        }
        Ok(())
    }
}

pub(crate) fn wrap_angle(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Classical Hamiltonian in canonical variables.
pub fn classical_hamiltonian(pt: &PhaseSpacePoint, params: &ModelParams) -> Result<f64> {
    pt.check(params)?;
    let j = params.j();
    let d = params.delta();
    let sine = sqrt_clamped(1.0 - (pt.jz / j).powi(2))?;
    let coupling = (1.0 + d) * pt.q * pt.phi.cos() - (1.0 - d) * pt.p * pt.phi.sin();
    Ok(params.omega0() * pt.jz
        + 0.5 * params.omega() * (pt.q * pt.q + pt.p * pt.p)
        + params.gamma() * j.sqrt() * sine * coupling)
}

/// Time derivatives `(dq/dt, dp/dt, dφ/dt, djz/dt)` of the classical flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flow {
    pub dq: f64,
    pub dp: f64,
    pub dphi: f64,
    pub djz: f64,
}

impl Flow {
    pub fn max_abs(&self) -> f64 {
        self.dq.abs().max(self.dp.abs()).max(self.dphi.abs()).max(self.djz.abs())
    }
}

/// Hamilton's equations. Undefined on the poles, where the `(φ, jz)` chart
/// is singular; use [`pole_gradient_residual`] there.
pub fn flow_rhs(pt: &PhaseSpacePoint, params: &ModelParams) -> Result<Flow> {
    pt.check(params)?;
    let j = params.j();
    let s2 = 1.0 - (pt.jz / j).powi(2);
    if s2 <= 0.0 {
        return Err(Error::PoleSingularity { jz: pt.jz });
    }
    let sine = s2.sqrt();
    let d = params.delta();
    let g = params.gamma();
    let (sphi, cphi) = pt.phi.sin_cos();
    let amp = g * j.sqrt() * sine;
    let bracket = (1.0 + d) * pt.q * cphi - (1.0 - d) * pt.p * sphi;
    Ok(Flow {
        dq: params.omega() * pt.p - (1.0 - d) * amp * sphi,
        dp: -params.omega() * pt.q - (1.0 + d) * amp * cphi,
        dphi: params.omega0() - g * pt.jz / (j.powf(1.5) * sine) * bracket,
        djz: amp * ((1.0 + d) * pt.q * sphi + (1.0 - d) * pt.p * cphi),
    })
}

/// Norm of the phase-space gradient of the Hamiltonian tangent to the
/// pseudo-spin sphere, computed in Cartesian `(jx, jy, jz)` coordinates.
/// Zero exactly at stationary points, poles included.
pub fn pole_gradient_residual(pt: &PhaseSpacePoint, params: &ModelParams) -> Result<f64> {
    pt.check(params)?;
    let j = params.j();
    let d = params.delta();
    let c = params.gamma() / j.sqrt();
    let rho = sqrt_clamped(j * j - pt.jz * pt.jz)?;
    let spin = [rho * pt.phi.cos(), rho * pt.phi.sin(), pt.jz];
    let dh_dq = params.omega() * pt.q + c * (1.0 + d) * spin[0];
    let dh_dp = params.omega() * pt.p - c * (1.0 - d) * spin[1];
    let grad = [c * (1.0 + d) * pt.q, -c * (1.0 - d) * pt.p, params.omega0()];
    // |grad × ĵ| is the component tangent to the sphere.
    let cross = [
        grad[1] * spin[2] - grad[2] * spin[1],
        grad[2] * spin[0] - grad[0] * spin[2],
        grad[0] * spin[1] - grad[1] * spin[0],
    ];
    let tangent = cross.iter().map(|x| x * x).sum::<f64>() / (j * j);
    Ok((dh_dq * dh_dq + dh_dp * dh_dp + tangent).sqrt())
}

/// Field quadratures `(q, p)` minimizing the Hamiltonian at fixed `(φ, jz)`.
pub fn boson_minimum(jz: f64, phi: f64, params: &ModelParams) -> Result<(f64, f64)> {
    let j = params.j();
    let d = params.delta();
    let rho = sqrt_clamped(j * j - jz * jz)?;
    let scale = params.gamma() * rho / (j.sqrt() * params.omega());
    Ok((-(1.0 + d) * scale * phi.cos(), (1.0 - d) * scale * phi.sin()))
}

// Shared expression for the energy surface given `y = jz/j`, `1 − y²`
// (passed separately to avoid cancellation near the poles) and `sin²φ`.
fn surface_expr(y: f64, one_minus_y2: f64, sin2_phi: f64, params: &ModelParams) -> f64 {
    let d = params.delta();
    let r2 = params.gamma_ratio().powi(2);
    let anisotropy = 4.0 * d / (1.0 + d).powi(2);
    y - 0.5 * r2 * one_minus_y2 * (1.0 - anisotropy * sin2_phi)
}

/// Energy surface `ε(jz, φ)`: the classical energy minimized over the field
/// variables.
pub fn energy_surface(jz: f64, phi: f64, params: &ModelParams) -> Result<f64> {
    let j = params.j();
    if jz.abs() > j * (1.0 + SQRT_SLACK) {
        return Err(Error::InvalidInput(format!("|jz| = {} exceeds j = {j}", jz.abs())));
    }
    let y = (jz / j).clamp(-1.0, 1.0);
    Ok(surface_expr(y, 1.0 - y * y, phi.sin().powi(2), params))
}

/// Energy surface at zenith angle `θ` (from the south pole) and azimuth `φ`.
pub fn energy_surface_angles(theta: f64, phi: f64, params: &ModelParams) -> f64 {
    surface_expr(-theta.cos(), theta.sin().powi(2), phi.sin().powi(2), params)
}

/// Classical ground-state energy.
pub fn ground_energy(params: &ModelParams) -> f64 {
    let r = params.gamma_ratio();
    if r <= 1.0 {
        -1.0
    } else {
        -0.5 * (1.0 / (r * r) + r * r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stability {
    Stable,
    Unstable,
    Saddle,
}

impl Stability {
    pub fn as_str(self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::Saddle => "saddle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub point: PhaseSpacePoint,
    pub epsilon: ScaledEnergy,
    pub stability: Stability,
    /// Representative of the continuous circle of Tavis-Cummings minima.
    pub continuous_ring: bool,
}

/// Local chart `(x, y) = θ (cos φ, sin φ)` around one of the poles.
#[derive(Debug, Clone, Copy)]
enum Chart {
    South,
    North,
}

fn chart_surface(chart: Chart, x: f64, y: f64, params: &ModelParams) -> f64 {
    let t = x.hypot(y);
    let (st, ct) = t.sin_cos();
    let y_spin = match chart {
        Chart::South => -ct,
        Chart::North => ct,
    };
    let sin2_phi = if t == 0.0 { 0.0 } else { (y / t).powi(2) };
    surface_expr(y_spin, st * st, sin2_phi, params)
}

/// Eigenvalues of the energy-surface Hessian in the local polar chart
/// around `(jz, φ)`, ascending.
pub fn surface_hessian_eigenvalues(jz: f64, phi: f64, params: &ModelParams) -> [f64; 2] {
    let j = params.j();
    let (chart, t) = if jz <= 0.0 {
        (Chart::South, (-jz / j).clamp(-1.0, 1.0).acos())
    } else {
        (Chart::North, (jz / j).clamp(-1.0, 1.0).acos())
    };
    let (x0, y0) = (t * phi.cos(), t * phi.sin());
    let h = 1e-3;
    let f = |i: i32, k: i32| chart_surface(chart, x0 + f64::from(i) * h, y0 + f64::from(k) * h, params);
    let f00 = f(0, 0);
    let fxx = (-f(2, 0) + 16.0 * f(1, 0) - 30.0 * f00 + 16.0 * f(-1, 0) - f(-2, 0)) / (12.0 * h * h);
    let fyy = (-f(0, 2) + 16.0 * f(0, 1) - 30.0 * f00 + 16.0 * f(0, -1) - f(0, -2)) / (12.0 * h * h);
    let fxy = (8.0 * (f(1, -2) + f(2, -1) + f(-2, 1) + f(-1, 2))
        - 8.0 * (f(-1, -2) + f(-2, -1) + f(1, 2) + f(2, 1))
        - (f(2, -2) + f(-2, 2) - f(-2, -2) - f(2, 2))
        + 64.0 * (f(-1, -1) + f(1, 1) - f(1, -1) - f(-1, 1)))
        / (144.0 * h * h);
    let mean = 0.5 * (fxx + fyy);
    let rad = (0.25 * (fxx - fyy).powi(2) + fxy * fxy).sqrt();
    [mean - rad, mean + rad]
}

/// Classifies a stationary point of the energy surface from the signs of
/// the Hessian eigenvalues. Fully flat points are resolved by probing the
/// surface on a small ring.
pub fn classify_stationary(jz: f64, phi: f64, params: &ModelParams) -> Stability {
    let [lo, hi] = surface_hessian_eigenvalues(jz, phi, params);
    let pos = hi > FLAT_CURVATURE;
    let neg = lo < -FLAT_CURVATURE;
    match (pos, neg) {
        (true, true) => Stability::Saddle,
        (true, false) => Stability::Stable,
        (false, true) => Stability::Unstable,
        (false, false) => ring_probe(jz, phi, params),
    }
}

fn ring_probe(jz: f64, phi: f64, params: &ModelParams) -> Stability {
    let j = params.j();
    let (chart, t) = if jz <= 0.0 {
        (Chart::South, (-jz / j).clamp(-1.0, 1.0).acos())
    } else {
        (Chart::North, (jz / j).clamp(-1.0, 1.0).acos())
    };
    let (x0, y0) = (t * phi.cos(), t * phi.sin());
    let centre = chart_surface(chart, x0, y0, params);
    let radius = 0.05;
    let diffs: Vec<f64> = (0..16)
        .map(|k| {
            let a = TAU * f64::from(k) / 16.0;
            chart_surface(chart, x0 + radius * a.cos(), y0 + radius * a.sin(), params) - centre
        })
        .collect();
    let above = diffs.iter().all(|&d| d >= -1e-12);
    let below = diffs.iter().all(|&d| d <= 1e-12);
    match (above, below) {
        (true, _) => Stability::Stable,
        (false, true) => Stability::Unstable,
        (false, false) => Stability::Saddle,
    }
}

fn fixed_point_at(jz: f64, phi: f64, ring: bool, params: &ModelParams) -> Result<FixedPoint> {
    let (q, p) = boson_minimum(jz, phi, params)?;
    let point = PhaseSpacePoint::new(q, p, phi, jz);
    let energy = classical_hamiltonian(&point, params)?;
    Ok(FixedPoint {
        point,
        epsilon: params.scale(energy),
        stability: classify_stationary(jz, phi, params),
        continuous_ring: ring,
    })
}

/// `jz` of the superradiant minima, `−j (γc/γ)²`.
fn superradiant_jz(params: &ModelParams) -> f64 {
    -params.j() / params.gamma_ratio().powi(2)
}

/// A point of the circle of Tavis-Cummings minima at azimuth `phi`, or
/// `None` in the normal phase.
pub fn tc_ring_point(params: &ModelParams, phi: f64) -> Result<Option<PhaseSpacePoint>> {
    if params.gamma_ratio() <= 1.0 {
        return Ok(None);
    }
    let tc = params.with_model(crate::Model::TavisCummings);
    let jz = superradiant_jz(&tc);
    let (q, p) = boson_minimum(jz, phi, &tc)?;
    Ok(Some(PhaseSpacePoint::new(q, p, phi, jz)))
}

/// All fixed points of the classical flow. The two poles are always
/// present; above the critical coupling the Dicke model adds two degenerate
/// minima at `φ = 0, π` and Tavis-Cummings a circle of minima, represented
/// by its `φ = 0` point.
pub fn fixed_points(params: &ModelParams) -> Result<Vec<FixedPoint>> {
    let j = params.j();
    let mut out = vec![
        fixed_point_at(j, 0.0, false, params)?,
        fixed_point_at(-j, 0.0, false, params)?,
    ];
    if params.gamma_ratio() > 1.0 {
        let jz = superradiant_jz(params);
        match params.model() {
            crate::Model::Dicke => {
                out.push(fixed_point_at(jz, 0.0, false, params)?);
                out.push(fixed_point_at(jz, PI, false, params)?);
            }
            crate::Model::TavisCummings => out.push(fixed_point_at(jz, 0.0, true, params)?),
        }
    }
    Ok(out)
}

/// One sample of the energy surface in the polar projection used for
/// contour plots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSample {
    pub theta_cos_phi: f64,
    pub theta_sin_phi: f64,
    pub epsilon: f64,
}

/// Samples the energy surface on `θ ∈ [0, π]` (inclusive, `n_theta` rows)
/// and `φ ∈ [0, 2π)` (`n_phi` columns).
pub fn surface_grid(
    params: &ModelParams,
    n_theta: usize,
    n_phi: usize,
    exec: Exec,
) -> Result<Vec<SurfaceSample>> {
    if n_theta < 2 || n_phi < 2 {
        return Err(Error::InvalidInput("surface grid needs at least 2x2 points".into()));
    }
    let rows = exec.map_range(0..n_theta, |i| {
        let theta = PI * i as f64 / (n_theta - 1) as f64;
        (0..n_phi)
            .map(|k| {
                let phi = TAU * k as f64 / n_phi as f64;
                SurfaceSample {
                    theta_cos_phi: theta * phi.cos(),
                    theta_sin_phi: theta * phi.sin(),
                    epsilon: energy_surface_angles(theta, phi, params),
                }
            })
            .collect::<Vec<_>>()
    });
    Ok(rows.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Model;
    use proptest::prelude::*;

    fn dicke(ratio: f64) -> ModelParams {
        ModelParams::resonant(80, ratio, Model::Dicke).unwrap()
    }

    fn tc(ratio: f64) -> ModelParams {
        ModelParams::resonant(80, ratio, Model::TavisCummings).unwrap()
    }

    #[test]
    fn poles_have_unit_energies() {
        for p in [dicke(0.7), tc(2.0)] {
            let j = p.j();
            let south = classical_hamiltonian(&PhaseSpacePoint::new(0.0, 0.0, 1.0, -j), &p).unwrap();
            let north = classical_hamiltonian(&PhaseSpacePoint::new(0.0, 0.0, 1.0, j), &p).unwrap();
            assert_eq!(p.epsilon(south), -1.0);
            assert_eq!(p.epsilon(north), 1.0);
        }
    }

    #[test]
    fn dicke_minimum_energy_at_twice_critical() {
        let p = dicke(2.0);
        let fp = fixed_points(&p).unwrap();
        assert_eq!(fp.len(), 4);
        for m in &fp[2..] {
            assert!((m.epsilon.value() + 17.0 / 8.0).abs() < 1e-13);
            assert_eq!(m.stability, Stability::Stable);
            assert!((m.point.jz + 10.0).abs() < 1e-12);
            assert!((m.point.q.abs() - 12.247_448_713_915_89).abs() < 1e-9);
            assert_eq!(m.point.p, 0.0);
        }
        assert!(fp[2].point.q < 0.0 && fp[3].point.q > 0.0);
    }

    #[test]
    fn tc_ring_radius() {
        let p = tc(2.0);
        let fp = fixed_points(&p).unwrap();
        assert_eq!(fp.len(), 3);
        let ring = fp[2];
        assert!(ring.continuous_ring);
        assert_eq!(ring.stability, Stability::Stable);
        assert!((ring.point.q.hypot(ring.point.p) - 12.247_448_713_915_89).abs() < 1e-9);
        assert!((ring.point.jz + 10.0).abs() < 1e-12);
    }

    #[test]
    fn normal_phase_has_only_poles() {
        for p in [dicke(0.5), tc(0.5)] {
            let fp = fixed_points(&p).unwrap();
            assert_eq!(fp.len(), 2);
            assert_eq!(fp[0].stability, Stability::Unstable);
            assert_eq!(fp[1].stability, Stability::Stable);
        }
    }

    #[test]
    fn south_pole_destabilizes_above_critical() {
        assert_eq!(fixed_points(&dicke(1.0)).unwrap()[1].stability, Stability::Stable);
        assert_eq!(fixed_points(&tc(1.0)).unwrap()[1].stability, Stability::Stable);
        assert_eq!(fixed_points(&dicke(1.5)).unwrap()[1].stability, Stability::Saddle);
        assert_eq!(fixed_points(&tc(1.5)).unwrap()[1].stability, Stability::Unstable);
    }

    #[test]
    fn uncoupled_precession() {
        let p = tc(0.0);
        let f = flow_rhs(&PhaseSpacePoint::new(0.0, 0.0, 0.0, 0.0), &p).unwrap();
        assert_eq!((f.dq, f.dp, f.dphi, f.djz), (0.0, 0.0, 1.0, 0.0));
    }

    #[test]
    fn flow_vanishes_at_fixed_points() {
        for p in [dicke(2.0), tc(2.0), dicke(1.3)] {
            for fp in fixed_points(&p).unwrap() {
                if fp.point.jz.abs() < p.j() {
                    let r = flow_rhs(&fp.point, &p).unwrap().max_abs();
                    assert!(r <= 1e-10 * p.energy_unit(), "residual {r}");
                } else {
                    assert_eq!(pole_gradient_residual(&fp.point, &p).unwrap(), 0.0);
                }
            }
        }
        let p = tc(2.0);
        let ring = tc_ring_point(&p, PI / 3.0).unwrap().unwrap();
        assert!(flow_rhs(&ring, &p).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn flow_is_singular_on_poles() {
        let p = dicke(0.5);
        let err = flow_rhs(&PhaseSpacePoint::new(0.0, 0.0, 0.0, p.j()), &p).unwrap_err();
        assert!(matches!(err, Error::PoleSingularity { .. }));
    }

    #[test]
    fn flow_matches_hamiltonian_gradient() {
        // Finite differences of H give Hamilton's equations independently.
        for p in [dicke(1.7), tc(0.6)] {
            let pt = PhaseSpacePoint::new(1.3, -0.7, 0.9, 12.0);
            let f = flow_rhs(&pt, &p).unwrap();
            let h = |q: f64, pp: f64, phi: f64, jz: f64| {
                classical_hamiltonian(&PhaseSpacePoint { q, p: pp, phi, jz }, &p).unwrap()
            };
            let e = 1e-5;
            let d_dp = (h(pt.q, pt.p + e, pt.phi, pt.jz) - h(pt.q, pt.p - e, pt.phi, pt.jz)) / (2.0 * e);
            let d_dq = (h(pt.q + e, pt.p, pt.phi, pt.jz) - h(pt.q - e, pt.p, pt.phi, pt.jz)) / (2.0 * e);
            let d_djz = (h(pt.q, pt.p, pt.phi, pt.jz + e) - h(pt.q, pt.p, pt.phi, pt.jz - e)) / (2.0 * e);
            let d_dphi = (h(pt.q, pt.p, pt.phi + e, pt.jz) - h(pt.q, pt.p, pt.phi - e, pt.jz)) / (2.0 * e);
            assert!((f.dq - d_dp).abs() < 1e-6);
            assert!((f.dp + d_dq).abs() < 1e-6);
            assert!((f.dphi - d_djz).abs() < 1e-6);
            assert!((f.djz + d_dphi).abs() < 1e-6);
        }
    }

    #[test]
    fn surface_examples() {
        let p = dicke(2.0);
        let j = p.j();
        assert_eq!(energy_surface(-j, 0.4, &p).unwrap(), -1.0);
        assert_eq!(energy_surface(j, 2.4, &p).unwrap(), 1.0);
        assert!((energy_surface(-j / 4.0, 0.0, &p).unwrap() + 17.0 / 8.0).abs() < 1e-14);
        let t = tc(2.0);
        let a = energy_surface(-5.0, 0.0, &t).unwrap();
        for phi in [0.3, 1.1, 2.9, 5.0] {
            assert!((energy_surface(-5.0, phi, &t).unwrap() - a).abs() < 1e-15);
        }
    }

    #[test]
    fn ground_energy_branches() {
        assert_eq!(ground_energy(&dicke(1.0)), -1.0);
        assert_eq!(ground_energy(&dicke(0.2)), -1.0);
        assert!((ground_energy(&dicke(2.0)) + 2.125).abs() < 1e-15);
        assert_eq!(ground_energy(&tc(2.0)), ground_energy(&dicke(2.0)));
    }

    #[test]
    fn ground_energy_is_c1_at_critical() {
        let h = 1e-5;
        let gc = dicke(1.0).critical_coupling();
        let e = |r: f64| ground_energy(&dicke(r));
        let left = (e(1.0) - e(1.0 - h)) / h;
        let right = (e(1.0 + h) - e(1.0)) / h;
        assert!((e(1.0 + h) - e(1.0)).abs() < 1e-8);
        assert!((left - right).abs() < 10.0 * h / gc);
    }

    #[test]
    fn stable_minimum_equals_ground_energy() {
        for r in [0.3, 1.0, 1.2, 2.0, 3.5] {
            for p in [dicke(r), tc(r)] {
                let min = fixed_points(&p)
                    .unwrap()
                    .iter()
                    .filter(|f| f.stability == Stability::Stable)
                    .map(|f| f.epsilon.value())
                    .fold(f64::INFINITY, f64::min);
                assert!((min - ground_energy(&p)).abs() < 1e-13, "r = {r}");
            }
        }
    }

    #[test]
    fn grid_properties() {
        let p = dicke(2.0);
        let g = surface_grid(&p, 61, 64, Exec::default()).unwrap();
        assert_eq!(g.len(), 61 * 64);
        assert!(g[..64].iter().all(|s| s.epsilon == -1.0));
        let min = g.iter().map(|s| s.epsilon).fold(f64::INFINITY, f64::min);
        assert!(min >= ground_energy(&p) && min - ground_energy(&p) < 1e-2);
        let t = surface_grid(&tc(2.0), 31, 16, Exec::Sequential).unwrap();
        for ring in t.chunks(16) {
            assert!(ring.iter().all(|s| (s.epsilon - ring[0].epsilon).abs() < 1e-14));
        }
        assert_eq!(surface_grid(&p, 31, 16, Exec::Parallel).unwrap(), surface_grid(&p, 31, 16, Exec::Sequential).unwrap());
        assert!(surface_grid(&p, 1, 16, Exec::Sequential).is_err());
    }

    proptest! {
        #[test]
        fn surface_symmetries(y in -1.0f64..1.0, phi in 0.0f64..TAU, r in 0.0f64..3.0) {
            let p = dicke(r);
            let jz = y * p.j();
            let e = energy_surface(jz, phi, &p).unwrap();
            prop_assert!((energy_surface(jz, -phi, &p).unwrap() - e).abs() < 1e-13);
            prop_assert!((energy_surface(jz, PI - phi, &p).unwrap() - e).abs() < 1e-13);
        }

        #[test]
        fn eliminated_hamiltonian_is_surface(y in -0.999f64..0.999, phi in 0.0f64..TAU, r in 0.0f64..3.0, d in 0u8..2) {
            let p = ModelParams::resonant(40, r, Model::from_delta(d).unwrap()).unwrap();
            let jz = y * p.j();
            let (q, pp) = boson_minimum(jz, phi, &p).unwrap();
            let h = classical_hamiltonian(&PhaseSpacePoint::new(q, pp, phi, jz), &p).unwrap();
            let s = energy_surface(jz, phi, &p).unwrap() * p.energy_unit();
            prop_assert!((h - s).abs() <= 1e-12 * s.abs().max(p.energy_unit()));
        }
    }
}
