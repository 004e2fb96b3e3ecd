//! Tavis-Cummings spectra from the blocks of conserved excitation number
//! `λ = n + m + j`.
//!
//! Within a block the states `|n, m⟩` with `n = λ − (m + j) ≥ 0` form a chain
//! in which the coupling only connects neighbours, so every block is a
//! symmetric tridiagonal matrix of size `min(λ + 1, 2j + 1)`.

use crate::tridiag::SymTridiagonal;
use crate::{Error, Exec, Level, Model, ModelParams, Result, ScaledEnergy, SpectrumRecord};

/// Upper limit for the automatic doubling of `λ_max`.
pub const LAMBDA_MAX_LIMIT: u32 = 1 << 22;

/// Basis state of a block: `n` photons and `k = m + j` atomic excitations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TcBasisState {
    pub n: u32,
    pub k: u32,
}

impl TcBasisState {
    /// Pseudo-spin projection `m = k − j`.
    pub fn m(&self, params: &ModelParams) -> f64 {
        f64::from(self.k) - params.j()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TcBlock {
    pub lambda: u32,
    /// Ordered by increasing `m`.
    pub basis: Vec<TcBasisState>,
    pub matrix: SymTridiagonal,
}

impl TcBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn require_tc(params: &ModelParams) -> Result<()> {
    if params.model() != Model::TavisCummings {
        return Err(Error::InvalidParams("block diagonalization needs the Tavis-Cummings model".into()));
    }
    Ok(())
}

/// Block Hamiltonian for excitation number `lambda`.
pub fn build_tc_block(lambda: u32, params: &ModelParams) -> Result<TcBlock> {
    require_tc(params)?;
    let j2 = params.j2();
    let k_max = lambda.min(j2);
    let basis: Vec<TcBasisState> = (0..=k_max).map(|k| TcBasisState { n: lambda - k, k }).collect();
    let diag = basis
        .iter()
        .map(|s| params.omega() * f64::from(s.n) + params.omega0() * s.m(params))
        .collect();
    let g = params.gamma() / f64::from(j2).sqrt();
    // ⟨n−1, m+1| a† J− ... |n, m⟩ = √n √((j − m)(j + m + 1)) = √n √((2j − k)(k + 1)).
    let off = basis
        .windows(2)
        .map(|w| {
            let s = w[0];
            g * f64::from(s.n).sqrt() * (f64::from(j2 - s.k) * f64::from(s.k + 1)).sqrt()
        })
        .collect();
    Ok(TcBlock { lambda, basis, matrix: SymTridiagonal::new(diag, off)? })
}

/// Eigenvalues of one block, ascending.
pub fn diagonalize_block(block: &TcBlock) -> Result<Vec<f64>> {
    block.matrix.eigenvalues().map_err(|e| match e {
        Error::NoConvergence { context } => Error::NoConvergence {
            context: format!("{context}, block lambda = {}", block.lambda),
        },
        other => other,
    })
}

fn block_eigenvalues(lambda: u32, params: &ModelParams) -> Result<Vec<f64>> {
    diagonalize_block(&build_tc_block(lambda, params)?)
}

/// All levels with scaled energy up to `epsilon_ref`, from the blocks
/// `λ = 0..=lambda_max`.
///
/// The result is certified complete when the lowest level of block
/// `lambda_max` lies above the reference energy and the block minima are
/// still rising there; otherwise [`Error::IncompleteSpectrum`] is returned.
/// Equal energies are ordered by `λ`.
pub fn assemble_spectrum(
    params: &ModelParams,
    lambda_max: u32,
    epsilon_ref: f64,
    exec: Exec,
) -> Result<SpectrumRecord> {
    require_tc(params)?;
    let e_ref = params.unscale(ScaledEnergy(epsilon_ref));
    let blocks = exec.map_range(0..lambda_max as usize + 1, |l| block_eigenvalues(l as u32, params));
    let blocks = blocks.into_iter().collect::<Result<Vec<_>>>()?;

    let top_min = blocks[lambda_max as usize][0];
    let rising = lambda_max == 0 || top_min > blocks[lambda_max as usize - 1][0];
    if top_min <= e_ref || !rising {
        return Err(Error::IncompleteSpectrum {
            lambda_max,
            min_energy: top_min,
            reference_energy: e_ref,
        });
    }

    let levels = blocks
        .iter()
        .enumerate()
        .flat_map(|(lambda, ev)| {
            ev.iter().take_while(|&&e| e <= e_ref).map(move |&energy| Level {
                index: 0,
                energy,
                lambda: Some(lambda as u32),
                parity: None,
                delta_p: None,
            })
        })
        .collect();
    Ok(SpectrumRecord::new(*params, levels, epsilon_ref))
}

/// [`assemble_spectrum`] with `λ_max` doubled from `max(2j, 1)` until the
/// completeness certificate holds.
pub fn assemble_spectrum_auto(params: &ModelParams, epsilon_ref: f64, exec: Exec) -> Result<SpectrumRecord> {
    let mut lambda_max = params.j2().max(1);
    loop {
        match assemble_spectrum(params, lambda_max, epsilon_ref, exec) {
            Err(Error::IncompleteSpectrum { .. }) if lambda_max < LAMBDA_MAX_LIMIT => lambda_max *= 2,
            other => return other,
        }
    }
}

/// Lowest eigenvalue of block `lambda`.
pub fn block_minimum(lambda: u32, params: &ModelParams) -> Result<f64> {
    Ok(block_eigenvalues(lambda, params)?[0])
}
