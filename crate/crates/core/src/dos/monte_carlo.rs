//! Monte-Carlo estimate of the density of states, used as an oracle for the
//! closed forms and quadratures.
//!
//! Phase-space points are drawn uniformly from the product of a disc in
//! `(q, p)`, the interval `jz ∈ [−j, j]` and `φ ∈ [0, 2π)`. If `R` is the disc
//! radius and `P` the fraction of points landing in an energy bin of width
//! `Δε`, the bin-averaged scaled density is `ωR²P / (2ω0 j Δε)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use crate::landscape::{classical_hamiltonian, PhaseSpacePoint};
use crate::quadrature::integrate;
use crate::{Error, Exec, ModelParams, Result};

/// Smallest sample count accepted by [`nu_monte_carlo`].
pub const MC_MIN_SAMPLES: usize = 10_000;

const BATCH: usize = 1 << 15;

/// Radius of a `(q, p)` disc that contains every point with energy at most
/// `epsilon_max`.
///
/// With `ρ² = q² + p²`, `|(1+δ) q cos φ − (1−δ) p sin φ| ≤ (1+δ) ρ` and
/// `ω0 jz ≥ −ω0 j`, so `H ≥ ωρ²/2 − cρ − ω0 j` with `c = γ√j (1+δ)`. Hence
/// `H ≤ E` forces `ρ ≤ [c + √(c² + 2ω(E + ω0 j))]/ω`.
pub fn disc_radius(epsilon_max: f64, params: &ModelParams) -> Result<f64> {
    let c = params.gamma() * params.j().sqrt() * (1.0 + params.delta());
    let e_max = params.unscale(crate::ScaledEnergy(epsilon_max));
    let disc = c * c + 2.0 * params.omega() * (e_max + params.energy_unit());
    if !(disc.is_finite() && disc > 0.0) {
        return Err(Error::InvalidInput(format!(
            "no phase space below epsilon = {epsilon_max}: disc radius bound has no solution"
        )));
    }
    Ok((c + disc.sqrt()) / params.omega())
}

/// Monte-Carlo estimate for one energy bin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McBin {
    pub epsilon_lo: f64,
    pub epsilon_hi: f64,
    /// Bin average of the scaled density.
    pub nu: f64,
    pub std_err: f64,
    pub hits: u64,
}

fn bin_of(edges: &[f64], eps: f64) -> Option<usize> {
    if eps < edges[0] || eps >= edges[edges.len() - 1] {
        return None;
    }
    Some(edges.partition_point(|&e| e <= eps) - 1)
}

/// Bin-averaged density on the bins delimited by `edges`.
///
/// Samples are split into fixed batches; batch `b` draws from ChaCha8 with
/// `seed` and stream `b`, so the result does not depend on the execution
/// strategy or thread count.
pub fn nu_monte_carlo(
    edges: &[f64],
    params: &ModelParams,
    n_samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<Vec<McBin>> {
    if edges.len() < 2 || edges.windows(2).any(|w| w[1] <= w[0]) || edges.iter().any(|e| !e.is_finite()) {
        return Err(Error::InvalidInput("bin edges must be finite and strictly increasing".into()));
    }
    if n_samples < MC_MIN_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "need at least {MC_MIN_SAMPLES} samples, got {n_samples}"
        )));
    }
    let radius = disc_radius(edges[edges.len() - 1], params)?;
    let j = params.j();
    let n_bins = edges.len() - 1;
    let n_batches = n_samples.div_ceil(BATCH);

    let counts = exec.map_range(0..n_batches, |b| -> Result<Vec<u64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b as u64);
        let len = BATCH.min(n_samples - b * BATCH);
        let mut hist = vec![0u64; n_bins];
        for _ in 0..len {
            let rho = radius * rng.random::<f64>().sqrt();
            let angle = TAU * rng.random::<f64>();
            let jz = j * (2.0 * rng.random::<f64>() - 1.0);
            let phi = TAU * rng.random::<f64>();
            let pt = PhaseSpacePoint::new(rho * angle.cos(), rho * angle.sin(), phi, jz);
            let eps = params.epsilon(classical_hamiltonian(&pt, params)?);
            if let Some(k) = bin_of(edges, eps) {
                hist[k] += 1;
            }
        }
        Ok(hist)
    });

    let mut total = vec![0u64; n_bins];
    for hist in counts {
        for (t, h) in total.iter_mut().zip(hist?) {
            *t += h;
        }
    }

    let n = n_samples as f64;
    let volume = params.omega() * radius * radius / (2.0 * params.omega0() * j);
    Ok(total
        .iter()
        .enumerate()
        .map(|(k, &hits)| {
            let width = edges[k + 1] - edges[k];
            let p = hits as f64 / n;
            McBin {
                epsilon_lo: edges[k],
                epsilon_hi: edges[k + 1],
                nu: volume * p / width,
                std_err: volume * (p * (1.0 - p) / n).sqrt() / width,
                hits,
            }
        })
        .collect())
}

/// Average of the semiclassical density over `[lo, hi]`, the quantity a
/// Monte-Carlo bin estimates.
pub fn nu_bin_average(lo: f64, hi: f64, params: &ModelParams) -> Result<f64> {
    let err = std::cell::Cell::new(None);
    let f = |e: f64| match super::nu_or_zero(e, params) {
        Ok(v) => v,
        Err(x) => {
            err.set(Some(x));
            0.0
        }
    };
    // Split at the branch edges so each panel sees a smooth integrand.
    let mut cuts = vec![lo];
    for c in [crate::landscape::ground_energy(params), -1.0, 1.0] {
        if c > lo && c < hi {
            cuts.push(c);
        }
    }
    cuts.push(hi);
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        acc += integrate(f, w[0], w[1], 1e-10, 2000)?.value;
    }
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok(acc / (hi - lo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dos::linear_grid;
    use crate::Model;

    #[test]
    fn radius_bounds_shell() {
        let p = ModelParams::resonant(40, 2.0, Model::Dicke).unwrap();
        let r = disc_radius(1.5, &p).unwrap();
        // Just outside the disc on the most favourable ray the energy exceeds the cap.
        let pt = PhaseSpacePoint::new(-r * 1.0001, 0.0, 0.0, 0.0);
        assert!(p.epsilon(classical_hamiltonian(&pt, &p).unwrap()) > 1.5);
        assert!(disc_radius(-1e6, &p).is_err());
    }

    #[test]
    fn saturated_bin_is_one() {
        let p = ModelParams::resonant(10, 1.0, Model::TavisCummings).unwrap();
        let bins = nu_monte_carlo(&[1.3, 1.7], &p, 200_000, 7, Exec::Sequential).unwrap();
        let b = bins[0];
        assert!((b.nu - 1.0).abs() < 3.0 * b.std_err, "{b:?}");
    }

    #[test]
    fn deterministic_across_strategies() {
        let p = ModelParams::resonant(10, 2.0, Model::Dicke).unwrap();
        let edges = linear_grid(-2.0, 1.5, 8);
        let a = nu_monte_carlo(&edges, &p, 100_000, 42, Exec::Sequential).unwrap();
        let b = nu_monte_carlo(&edges, &p, 100_000, 42, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        let c = nu_monte_carlo(&edges, &p, 100_000, 43, Exec::Parallel).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_bad_input() {
        let p = ModelParams::resonant(10, 2.0, Model::Dicke).unwrap();
        assert!(nu_monte_carlo(&[0.0, 1.0], &p, 100, 1, Exec::Sequential).is_err());
        assert!(nu_monte_carlo(&[1.0, 0.0], &p, 20_000, 1, Exec::Sequential).is_err());
        assert!(nu_monte_carlo(&[0.0], &p, 20_000, 1, Exec::Sequential).is_err());
    }

    #[test]
    fn bin_average_of_linear_density() {
        let p = ModelParams::resonant(10, 0.0, Model::TavisCummings).unwrap();
        let v = nu_bin_average(-0.5, 0.5, &p).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
    }
}
