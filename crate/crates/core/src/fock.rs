//! Brute-force diagonalization in the truncated product basis
//! `|n⟩ ⊗ |j, m⟩`, `n ≤ n_max`. Dense and unoptimized; it exists to check the
//! block and coherent-basis routes.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::{Error, Level, Model, ModelParams, Parity, Result, SpectrumRecord};

/// Default refusal threshold for the basis dimension.
pub const DEFAULT_DIMENSION_LIMIT: usize = 5_000;

/// Basis index `(n, k = m + j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockBasisIndex {
    pub n: usize,
    pub k: usize,
}

impl FockBasisIndex {
    /// Total excitation number `Λ = n + m + j`.
    pub fn excitations(&self) -> usize {
        self.n + self.k
    }
}

fn index(j2: u32, at: FockBasisIndex) -> usize {
    at.n * (j2 as usize + 1) + at.k
}

fn state(j2: u32, idx: usize) -> FockBasisIndex {
    FockBasisIndex { n: idx / (j2 as usize + 1), k: idx % (j2 as usize + 1) }
}

pub fn fock_dim(params: &ModelParams, n_max: usize) -> usize {
    (n_max + 1) * params.spin_dim()
}

/// Hamiltonian in the product basis, ordered by `n` then `m`.
pub fn build_fock_matrix(params: &ModelParams, n_max: usize) -> DMatrix<f64> {
    let j2 = params.j2();
    let j = params.j();
    let d = fock_dim(params, n_max);
    let g = params.gamma() / f64::from(j2).sqrt();
    let counter = params.model() == Model::Dicke;
    let mut h = DMatrix::zeros(d, d);
    for i in 0..d {
        let s = state(j2, i);
        let m = s.k as f64 - j;
        h[(i, i)] = params.omega() * s.n as f64 + params.omega0() * m;
        if s.k == j2 as usize {
            continue;
        }
        // J+ |m⟩ = √(j(j+1) − m(m+1)) |m+1⟩
        let jp = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
        if s.n > 0 {
            // a J+ : (n, m) → (n−1, m+1)
            let t = index(j2, FockBasisIndex { n: s.n - 1, k: s.k + 1 });
            let v = g * (s.n as f64).sqrt() * jp;
            h[(t, i)] = v;
            h[(i, t)] = v;
        }
        if counter && s.n < n_max {
            // a† J+ : (n, m) → (n+1, m+1)
            let t = index(j2, FockBasisIndex { n: s.n + 1, k: s.k + 1 });
            let v = g * ((s.n + 1) as f64).sqrt() * jp;
            h[(t, i)] = v;
            h[(i, t)] = v;
        }
    }
    h
}

/// Spectrum from the product basis together with symmetry diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct FockSpectrum {
    /// Levels carry `Λ` (Tavis-Cummings) or parity (Dicke). Not certified:
    /// `epsilon_ref` is just the highest level.
    pub record: SpectrumRecord,
    /// Largest eigenvector weight outside its own symmetry sector.
    pub max_sector_leak: f64,
    /// Largest `|‖v‖² − 1|` over eigenvectors.
    pub max_norm_error: f64,
}

fn label_of(s: FockBasisIndex, model: Model) -> usize {
    match model {
        Model::TavisCummings => s.excitations(),
        Model::Dicke => s.excitations() % 2,
    }
}

/// Diagonalizes the product-basis Hamiltonian. Eigenvectors of degenerate
/// levels are rotated within each degenerate cluster so that each carries a
/// single `Λ` (or parity) label.
pub fn diagonalize_fock(params: &ModelParams, n_max: usize, dimension_limit: usize) -> Result<FockSpectrum> {
    let d = fock_dim(params, n_max);
    if d > dimension_limit {
        return Err(Error::DimensionGuard { dim: d, limit: dimension_limit });
    }
    let j2 = params.j2();
    let model = params.model();
    let labels: Vec<f64> = (0..d).map(|i| label_of(state(j2, i), model) as f64).collect();

    let eig = SymmetricEigen::new(build_fock_matrix(params, n_max));
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors: Vec<DVector<f64>> = order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();

    let scale = energies.iter().fold(1.0f64, |m, e| m.max(e.abs()));
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && energies[end] - energies[end - 1] <= 1e-9 * scale {
            end += 1;
        }
        if end - start > 1 {
            resolve_cluster(&mut vectors[start..end], &labels);
        }
        start = end;
    }

    let mut levels = Vec::with_capacity(d);
    let mut max_leak = 0.0f64;
    let mut max_norm = 0.0f64;
    for (idx, (v, &energy)) in vectors.iter().zip(&energies).enumerate() {
        let norm = v.norm_squared();
        max_norm = max_norm.max((norm - 1.0).abs());
        let mut weights = std::collections::BTreeMap::<usize, f64>::new();
        for (i, c) in v.iter().enumerate() {
            *weights.entry(labels[i] as usize).or_default() += c * c;
        }
        let (&label, &w) = weights.iter().max_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty vector");
        let leak = (norm - w).max(0.0);
        if leak > 1e-10 {
            return Err(Error::MixedSector { index: idx + 1, weight: leak });
        }
        max_leak = max_leak.max(leak);
        let (lambda, parity) = match model {
            Model::TavisCummings => (Some(label as u32), Some(Parity::from_excitations(label as u64))),
            Model::Dicke => (None, Some(Parity::from_excitations(label as u64))),
        };
        levels.push(Level { index: 0, energy, lambda, parity, delta_p: None });
    }
    let top = params.epsilon(*energies.last().expect("non-empty basis"));
    Ok(FockSpectrum {
        record: SpectrumRecord::new(*params, levels, top),
        max_sector_leak: max_leak,
        max_norm_error: max_norm,
    })
}

// Diagonalizes the label operator inside a degenerate eigenspace.
fn resolve_cluster(vectors: &mut [DVector<f64>], labels: &[f64]) {
    let c = vectors.len();
    let proj = DMatrix::from_fn(c, c, |a, b| {
        vectors[a].iter().zip(vectors[b].iter()).zip(labels).map(|((x, y), l)| x * y * l).sum()
    });
    let rot = SymmetricEigen::new(proj).eigenvectors;
    let old: Vec<DVector<f64>> = vectors.to_vec();
    for (b, v) in vectors.iter_mut().enumerate() {
        let mut acc = DVector::zeros(old[0].len());
        for (a, o) in old.iter().enumerate() {
            acc.axpy(rot[(a, b)], o, 1.0);
        }
        *v = acc;
    }
}

/// Largest `|E_a − E_b|` over the lowest `k_count` levels.
pub fn compare_spectra(a: &SpectrumRecord, b: &SpectrumRecord, k_count: usize) -> Result<f64> {
    let have = a.len().min(b.len());
    if have < k_count {
        return Err(Error::LengthMismatch { needed: k_count, available: have });
    }
    Ok(a.levels
        .iter()
        .zip(&b.levels)
        .take(k_count)
        .map(|(x, y)| (x.energy - y.energy).abs())
        .fold(0.0, f64::max))
}
