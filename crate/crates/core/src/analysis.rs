//! Window-averaged level densities and their comparison with the
//! semiclassical curve.
//!
//! A spectrum sorted by energy is cut into consecutive windows of `w`
//! levels starting at the ground state. Each window gives a mean rank `n̄`
//! and mean energy `Ē`; the density between two neighbouring windows is
//! `Δn̄/ΔĒ`, reported in the scaled form `(ω/2j) Δn̄/ΔĒ`.

use crate::dos::nu;
use crate::landscape::ground_energy;
use crate::{Error, ModelParams, Result, SpectrumRecord};

/// Half-width of the exclusion zones around `ε = ±1` used by default.
pub const DEFAULT_EXCLUSION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DosBin {
    pub n_bar: f64,
    pub e_bar: f64,
    pub epsilon_bar: f64,
    pub dos_scaled: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinnedDos {
    pub params: ModelParams,
    pub window: usize,
    pub samples: Vec<DosBin>,
    /// Levels left over after the last full window.
    pub dropped: usize,
}

/// How windows are laid over the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowMode {
    /// Consecutive, non-overlapping windows.
    Disjoint,
    /// A window starting at every level; smoother, but the samples are
    /// correlated.
    Sliding,
}

fn window_means(energies: &[f64], start: usize, w: usize) -> (f64, f64) {
    let e: f64 = energies[start..start + w].iter().sum::<f64>() / w as f64;
    // Ranks start at 1.
    let n = start as f64 + (w as f64 + 1.0) / 2.0;
    (n, e)
}

/// Window-averaged density of a complete spectrum.
pub fn averaged_dos(record: &SpectrumRecord, window: usize, mode: WindowMode) -> Result<BinnedDos> {
    if window < 2 {
        return Err(Error::InvalidInput(format!("window must be at least 2, got {window}")));
    }
    let energies = record.energies();
    let len = energies.len();
    let full = len / window;
    if full < 2 {
        return Err(Error::InvalidInput(format!(
            "{len} levels give fewer than two windows of {window}"
        )));
    }
    let params = record.params;
    let scale = params.omega() / f64::from(params.j2());
    let starts: Vec<usize> = match mode {
        WindowMode::Disjoint => (0..full - 1).map(|i| i * window).collect(),
        WindowMode::Sliding => (0..=len - 2 * window).collect(),
    };
    let samples = starts
        .into_iter()
        .map(|s| {
            let (n0, e0) = window_means(&energies, s, window);
            let (n1, e1) = window_means(&energies, s + window, window);
            let e_bar = 0.5 * (e0 + e1);
            DosBin {
                n_bar: 0.5 * (n0 + n1),
                e_bar,
                epsilon_bar: params.epsilon(e_bar),
                dos_scaled: scale * (n1 - n0) / (e1 - e0),
            }
        })
        .collect();
    Ok(BinnedDos { params, window, samples, dropped: len - full * window })
}

/// Fails if any level of the record carries a truncation weight at or above
/// `tolerance`.
pub fn require_certified(record: &SpectrumRecord, tolerance: f64) -> Result<()> {
    match record.levels.iter().find(|l| l.delta_p.is_some_and(|d| !(d < tolerance))) {
        Some(l) => Err(Error::ConvergenceBudget {
            n_max: 0,
            tolerance,
            unconverged: record.levels.iter().filter(|x| x.delta_p.is_some_and(|d| !(d < tolerance))).count(),
            first_index: l.index,
        }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub epsilon_bar: f64,
    pub dos_scaled: f64,
    pub nu_scaled: f64,
    pub rel_dev: f64,
    pub included: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub mean_dev: f64,
    pub max_dev: f64,
    /// Indices into `rows` of the bins inside an exclusion zone.
    pub excluded_bins: Vec<usize>,
}

/// Relative deviation `|dos − ν|/ν` per bin, with bins closer than
/// `exclusion_half_width` to `ε = ±1` left out of the statistics.
pub fn compare_to_semiclassical(binned: &BinnedDos, exclusion_half_width: f64) -> Result<Comparison> {
    let params = &binned.params;
    let e0 = ground_energy(params);
    let mut rows = Vec::with_capacity(binned.samples.len());
    let mut excluded = Vec::new();
    for (i, s) in binned.samples.iter().enumerate() {
        if s.epsilon_bar < e0 {
            return Err(Error::ForbiddenEnergy { epsilon: s.epsilon_bar, epsilon0: e0 });
        }
        let nu_scaled = nu(s.epsilon_bar, params)?;
        let rel_dev = (s.dos_scaled - nu_scaled).abs() / nu_scaled;
        let near = (s.epsilon_bar + 1.0).abs() < exclusion_half_width
            || (s.epsilon_bar - 1.0).abs() < exclusion_half_width;
        if near {
            excluded.push(i);
        }
        rows.push(ComparisonRow {
            epsilon_bar: s.epsilon_bar,
            dos_scaled: s.dos_scaled,
            nu_scaled,
            rel_dev,
            included: !near,
        });
    }
    let devs: Vec<f64> = rows.iter().filter(|r| r.included).map(|r| r.rel_dev).collect();
    if devs.is_empty() {
        return Err(Error::InvalidInput("every bin lies inside an exclusion zone".into()));
    }
    Ok(Comparison {
        mean_dev: devs.iter().sum::<f64>() / devs.len() as f64,
        max_dev: devs.iter().copied().fold(0.0, f64::max),
        rows,
        excluded_bins: excluded,
    })
}

/// Cumulative level count `(ε_n, n/(2j))`.
pub fn staircase(record: &SpectrumRecord) -> Vec<(f64, f64)> {
    let j2 = f64::from(record.params.j2());
    record
        .levels
        .iter()
        .map(|l| (record.epsilon(l), l.index as f64 / j2))
        .collect()
}

/// Least-squares fit `f(ε) ≈ a − b ln|ε − ε_c|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogFit {
    pub a: f64,
    pub b: f64,
    pub r_squared: f64,
    pub samples: usize,
}

impl LogFit {
    /// Growth toward the singular point with a good fit.
    pub fn indicates_divergence(&self) -> bool {
        self.b > 0.0 && self.r_squared > 0.99
    }
}

/// Fits the samples `(ε, f)` with `|ε − center| ∈ [1e−5, 1e−2]`; at least four
/// such samples are required.
pub fn fit_log_divergence(samples: &[(f64, f64)], center: f64) -> Result<LogFit> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(e, _)| {
            let d = (e - center).abs();
            (1e-5 * (1.0 - 1e-6)..=1e-2 * (1.0 + 1e-6)).contains(&d)
        })
        .map(|&(e, f)| ((e - center).abs().ln(), f))
        .collect();
    if pts.len() < 4 {
        return Err(Error::InvalidInput(format!(
            "log fit needs at least 4 samples within [1e-5, 1e-2] of the singularity, got {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let a = my - slope * mx;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - a - slope * p.0).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 0.0 };
    Ok(LogFit { a, b: -slope, r_squared, samples: pts.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Level, Model};

    fn params() -> ModelParams {
        ModelParams::resonant(20, 0.5, Model::TavisCummings).unwrap()
    }

    #[test]
    fn uniform_spectrum_has_constant_density() {
        let p = params();
        let d = 0.25;
        let energies: Vec<f64> = (0..1003).map(|i| -10.0 + d * i as f64).collect();
        let rec = SpectrumRecord::from_energies(p, &energies, 100.0);
        let b = averaged_dos(&rec, 10, WindowMode::Disjoint).unwrap();
        assert_eq!(b.samples.len(), 99);
        assert_eq!(b.dropped, 3);
        let expected = p.omega() / (20.0 * d);
        assert!(b.samples.iter().all(|s| (s.dos_scaled - expected).abs() < 1e-9));
        assert!(b.samples.windows(2).all(|w| w[1].epsilon_bar > w[0].epsilon_bar));
        let s = averaged_dos(&rec, 10, WindowMode::Sliding).unwrap();
        assert_eq!(s.samples.len(), 1003 - 20 + 1);
    }

    #[test]
    fn too_few_levels() {
        let rec = SpectrumRecord::from_energies(params(), &[0.0, 1.0, 2.0], 10.0);
        assert!(averaged_dos(&rec, 2, WindowMode::Disjoint).is_err());
        assert!(averaged_dos(&rec, 1, WindowMode::Disjoint).is_err());
    }

    #[test]
    fn self_comparison_is_exact() {
        let p = params();
        let samples = [-0.8, -0.3, 0.2, 0.99, 1.5]
            .iter()
            .map(|&e| DosBin { n_bar: 0.0, e_bar: 0.0, epsilon_bar: e, dos_scaled: nu(e, &p).unwrap() })
            .collect();
        let b = BinnedDos { params: p, window: 2, samples, dropped: 0 };
        let c = compare_to_semiclassical(&b, DEFAULT_EXCLUSION).unwrap();
        assert_eq!(c.mean_dev, 0.0);
        assert_eq!(c.max_dev, 0.0);
        assert_eq!(c.excluded_bins, vec![3]);
    }

    #[test]
    fn all_excluded_is_an_error() {
        let p = params();
        let samples = vec![DosBin { n_bar: 0.0, e_bar: 0.0, epsilon_bar: 1.0, dos_scaled: 1.0 }];
        let b = BinnedDos { params: p, window: 2, samples, dropped: 0 };
        assert!(compare_to_semiclassical(&b, 0.05).is_err());
    }

    #[test]
    fn staircase_is_monotone() {
        let rec = SpectrumRecord::from_energies(params(), &[3.0, 1.0, 2.0, 2.0], 10.0);
        let st = staircase(&rec);
        assert!(st.windows(2).all(|w| w[1].0 >= w[0].0 && w[1].1 > w[0].1));
        assert_eq!(st[3].1, 4.0 / 20.0);
    }

    #[test]
    fn log_fit_recovers_model() {
        let samples: Vec<(f64, f64)> = (2..=5)
            .flat_map(|k| {
                let d = 10f64.powi(-k);
                [(-1.0 - d, 0.3 - 0.7 * d.ln()), (-1.0 + d, 0.3 - 0.7 * d.ln())]
            })
            .collect();
        let fit = fit_log_divergence(&samples, -1.0).unwrap();
        assert!((fit.b - 0.7).abs() < 1e-6 && (fit.a - 0.3).abs() < 1e-6);
        assert!(fit.indicates_divergence());
        assert_eq!(fit.samples, 8);
    }

    #[test]
    fn log_fit_needs_samples() {
        assert!(fit_log_divergence(&[(-1.001, 1.0), (-1.01, 1.0)], -1.0).is_err());
        let flat: Vec<(f64, f64)> = (2..=5).map(|k| (-1.0 - 10f64.powi(-k), 2.0)).collect();
        assert!(!fit_log_divergence(&flat, -1.0).unwrap().indicates_divergence());
    }

    #[test]
    fn certification_check() {
        let p = params();
        let mut lv = Level::plain(1.0);
        lv.delta_p = Some(1e-3);
        let rec = SpectrumRecord::new(p, vec![Level::plain(0.0), lv], 10.0);
        assert!(require_certified(&rec, 1e-6).is_err());
        assert!(require_certified(&rec, 1e-2).is_ok());
    }
}
