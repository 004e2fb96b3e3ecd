//! Dicke spectra in the extended bosonic coherent basis.
//!
//! With `Jx|m′⟩ = m′|m′⟩` the field part of the Dicke Hamiltonian at fixed
//! `m′` is a displaced oscillator, `ω A†A − 2γ²m′²/(jω)` with
//! `A = a − α(m′)` and `α(m′) = −2γm′/(ω√(2j))`. The basis states are
//! `|N; m′⟩ = D(α(m′))|N⟩ ⊗ |m′⟩`, truncated at `N ≤ N_max`. The atomic term
//! `ω0 Jz` couples `m′` to `m′ ± 1` through the overlaps `⟨N|D(β)|N′⟩` with the
//! constant `β = α(m′) − α(m′ + 1) = 2γ/(ω√(2j))`.
//!
//! The operator `S|N; m′⟩ = (−1)^N |N; −m′⟩` commutes with the Hamiltonian
//! (it is the parity `exp(iπΛ)` up to the sign `(−1)^(2j)`), so each
//! truncation is solved as two independent sectors.

mod overlap;

use std::sync::Arc;

use faer::{Mat, Side};

pub use overlap::{displaced_fock_overlap, OverlapTable};

use crate::{Error, Exec, Level, Model, ModelParams, Parity, Result, SpectrumRecord};

/// Default refusal threshold for the full basis dimension.
pub const DEFAULT_DIMENSION_LIMIT: usize = 30_000;

/// Default convergence tolerance on the truncation-edge weight.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub exec: Exec,
    pub dimension_limit: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { exec: Exec::default(), dimension_limit: DEFAULT_DIMENSION_LIMIT }
    }
}

/// Coherent-state displacement `α(m′)` of the field for pseudo-spin
/// projection `m_prime` along x.
pub fn displacement(m_prime: f64, params: &ModelParams) -> f64 {
    -2.0 * params.gamma() * m_prime / (params.omega() * f64::from(params.j2()).sqrt())
}

/// Displacement difference between neighbouring `m′`.
pub fn neighbour_beta(params: &ModelParams) -> f64 {
    displacement(0.0, params) - displacement(1.0, params)
}

/// Horizon used when checking completeness of the overlap rows up to
/// `n_max`; wide enough for the displaced-number tails to drop below 1e−16.
pub fn overlap_horizon(n_max: usize, beta: f64) -> usize {
    let spread = beta.abs() * ((n_max + 1) as f64).sqrt();
    n_max + (10.0 + 4.0 * beta * beta + 12.0 * spread).ceil() as usize
}

/// Index `(N, m′)` of the full coherent basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoherentBasisIndex {
    pub n: usize,
    /// Twice `m′`, so half-integer spins stay exact.
    pub m2: i32,
}

impl CoherentBasisIndex {
    pub fn m_prime(&self) -> f64 {
        f64::from(self.m2) / 2.0
    }
}

/// Full basis `N = 0..=n_max`, `m′ = −j..=j`, ordered by `m′` then `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoherentBasis {
    pub j2: u32,
    pub n_max: usize,
}

impl CoherentBasis {
    pub fn dim(&self) -> usize {
        (self.n_max + 1) * (self.j2 as usize + 1)
    }

    pub fn index(&self, at: CoherentBasisIndex) -> usize {
        let mi = ((at.m2 + self.j2 as i32) / 2) as usize;
        mi * (self.n_max + 1) + at.n
    }

    pub fn state(&self, idx: usize) -> CoherentBasisIndex {
        let mi = idx / (self.n_max + 1);
        CoherentBasisIndex { n: idx % (self.n_max + 1), m2: 2 * mi as i32 - self.j2 as i32 }
    }
}

/// Eigenvalue `σ = ±1` of `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sector {
    Plus,
    Minus,
}

impl Sector {
    pub fn sign(self) -> f64 {
        match self {
            Sector::Plus => 1.0,
            Sector::Minus => -1.0,
        }
    }

    /// Parity `exp(iπΛ)` of the states in this sector.
    pub fn parity(self, j2: u32) -> Parity {
        let even = (self == Sector::Plus) == j2.is_multiple_of(2);
        if even {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn from_parity(parity: Parity, j2: u32) -> Self {
        if Sector::Plus.parity(j2) == parity {
            Sector::Plus
        } else {
            Sector::Minus
        }
    }
}

/// Symmetry-adapted state: `(|N; a⟩ + σ(−1)^N |N; −a⟩)/√2` for `a > 0`, or
/// `|N; 0⟩` itself when `(−1)^N = σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectorState {
    pub n: usize,
    /// Twice `a = |m′|`.
    pub a2: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    pub sector: Sector,
    pub j2: u32,
    pub n_max: usize,
    pub states: Vec<SectorState>,
}

fn n_sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

impl SectorBasis {
    pub fn new(sector: Sector, j2: u32, n_max: usize) -> Self {
        let mut states = Vec::new();
        let mut a2 = j2 % 2;
        while a2 <= j2 {
            for n in 0..=n_max {
                if a2 == 0 && n_sign(n) != sector.sign() {
                    continue;
                }
                states.push(SectorState { n, a2 });
            }
            a2 += 2;
        }
        Self { sector, j2, n_max, states }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// Position of `(n, a2)` in this basis, if present.
    pub fn position(&self, n: usize, a2: u32) -> Option<usize> {
        if n > self.n_max || a2 > self.j2 || a2 % 2 != self.j2 % 2 {
            return None;
        }
        let per_a = self.n_max + 1;
        let zero_count = if self.j2.is_multiple_of(2) {
            (0..=self.n_max).filter(|&k| n_sign(k) == self.sector.sign()).count()
        } else {
            0
        };
        if a2 == 0 {
            if n_sign(n) != self.sector.sign() {
                return None;
            }
            return Some((0..n).filter(|&k| n_sign(k) == self.sector.sign()).count());
        }
        let block = ((a2 - self.j2 % 2) / 2) as usize;
        let offset = if self.j2.is_multiple_of(2) { zero_count + (block - 1) * per_a } else { block * per_a };
        Some(offset + n)
    }

    /// Full-basis coefficients of a sector vector.
    pub fn expand(&self, coeffs: &[f64]) -> Vec<f64> {
        let full = CoherentBasis { j2: self.j2, n_max: self.n_max };
        let mut out = vec![0.0; full.dim()];
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (s, &c) in self.states.iter().zip(coeffs) {
            let a = s.a2 as i32;
            if a == 0 {
                out[full.index(CoherentBasisIndex { n: s.n, m2: 0 })] += c;
            } else {
                out[full.index(CoherentBasisIndex { n: s.n, m2: a })] += h * c;
                out[full.index(CoherentBasisIndex { n: s.n, m2: -a })] += self.sector.sign() * n_sign(s.n) * h * c;
            }
        }
        out
    }
}

struct Terms {
    omega: f64,
    shift: f64,
    half_omega0: f64,
    jj1: f64,
    overlaps: OverlapTable,
    // +1 for the positive-real convention of the Jz elements; −1 is the other gauge.
    coupling_sign: f64,
}

impl Terms {
    fn new(params: &ModelParams, n_max: usize, coupling_sign: f64) -> Result<Self> {
        let j = params.j();
        Ok(Self {
            omega: params.omega(),
            shift: 2.0 * params.gamma().powi(2) / (j * params.omega()),
            half_omega0: 0.5 * params.omega0(),
            jj1: j * (j + 1.0),
            overlaps: OverlapTable::new(n_max + 1, n_max + 1, neighbour_beta(params))?,
            coupling_sign,
        })
    }

    fn diagonal(&self, n: usize, m_prime: f64) -> f64 {
        self.omega * n as f64 - self.shift * m_prime * m_prime
    }

    /// `(ω0/2)√(j(j+1) − m′(m′+1))`, the `Jz` element between `m′` and `m′ + 1`.
    fn ladder(&self, m_prime: f64) -> f64 {
        self.coupling_sign * self.half_omega0 * (self.jj1 - m_prime * (m_prime + 1.0)).max(0.0).sqrt()
    }

    /// `⟨N; m′+1|H|N′; m′⟩`.
    fn raise(&self, n_row: usize, n_col: usize, m_prime: f64) -> f64 {
        self.ladder(m_prime) * self.overlaps.get(n_row, n_col)
    }

    fn full_entry(&self, u: CoherentBasisIndex, v: CoherentBasisIndex) -> f64 {
        if u.m2 == v.m2 {
            if u.n == v.n {
                self.diagonal(u.n, u.m_prime())
            } else {
                0.0
            }
        } else if u.m2 == v.m2 + 2 {
            self.raise(u.n, v.n, v.m_prime())
        } else if v.m2 == u.m2 + 2 {
            self.raise(v.n, u.n, u.m_prime())
        } else {
            0.0
        }
    }

    fn sector_entry(&self, sigma: f64, u: SectorState, v: SectorState) -> f64 {
        let r2 = std::f64::consts::SQRT_2;
        if u.a2 == v.a2 {
            let mut val = if u.n == v.n { self.diagonal(u.n, f64::from(u.a2) / 2.0) } else { 0.0 };
            if u.a2 == 1 {
                // Half-integer spin: the pair at a = 1/2 couples to its own mirror.
                val += sigma * n_sign(v.n) * self.raise(u.n, v.n, -0.5);
            }
            val
        } else if u.a2 == v.a2 + 2 {
            let norm = if v.a2 == 0 { r2 } else { 1.0 };
            norm * self.raise(u.n, v.n, f64::from(v.a2) / 2.0)
        } else if v.a2 == u.a2 + 2 {
            let norm = if u.a2 == 0 { r2 } else { 1.0 };
            norm * self.raise(v.n, u.n, f64::from(u.a2) / 2.0)
        } else {
            0.0
        }
    }
}

fn require_dicke(params: &ModelParams) -> Result<()> {
    if params.model() != Model::Dicke {
        return Err(Error::InvalidParams("the coherent basis is built for the Dicke model".into()));
    }
    Ok(())
}

fn guard(dim: usize, limit: usize) -> Result<()> {
    if dim > limit {
        return Err(Error::DimensionGuard { dim, limit });
    }
    Ok(())
}

/// Hamiltonian over the full coherent basis, ordered as [`CoherentBasis`].
pub fn build_dicke_matrix(params: &ModelParams, n_max: usize) -> Result<Mat<f64>> {
    build_full(params, n_max, 1.0)
}

fn build_full(params: &ModelParams, n_max: usize, coupling_sign: f64) -> Result<Mat<f64>> {
    require_dicke(params)?;
    let basis = CoherentBasis { j2: params.j2(), n_max };
    let terms = Terms::new(params, n_max, coupling_sign)?;
    let d = basis.dim();
    Ok(Mat::from_fn(d, d, |i, k| terms.full_entry(basis.state(i), basis.state(k))))
}

/// Hamiltonian restricted to one symmetry sector.
pub fn build_sector_matrix(params: &ModelParams, n_max: usize, sector: Sector) -> Result<(Mat<f64>, SectorBasis)> {
    require_dicke(params)?;
    let basis = SectorBasis::new(sector, params.j2(), n_max);
    let terms = Terms::new(params, n_max, 1.0)?;
    let sigma = sector.sign();
    let d = basis.dim();
    let m = Mat::from_fn(d, d, |i, k| terms.sector_entry(sigma, basis.states[i], basis.states[k]));
    Ok((m, basis))
}

fn eig_error(e: impl std::fmt::Debug, n_max: usize) -> Error {
    Error::NoConvergence { context: format!("dense eigensolver at N_max = {n_max}: {e:?}") }
}

/// Eigenstate of the truncated Dicke Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeEigenstate {
    /// Rank in the combined spectrum of this truncation, from 1.
    pub k: usize,
    pub energy: f64,
    pub parity: Parity,
    pub n_max: usize,
    /// Truncation-edge weight, once computed by [`precision_delta_p`].
    pub delta_p: Option<f64>,
    basis: Arc<SectorBasis>,
    sector_coefficients: Vec<f64>,
}

impl DickeEigenstate {
    /// Coefficients `C_{N,m′}` over the full basis, ordered as [`CoherentBasis`].
    pub fn coefficients(&self) -> Vec<f64> {
        self.basis.expand(&self.sector_coefficients)
    }

    pub fn sector(&self) -> Sector {
        self.basis.sector
    }

    pub fn norm_sq(&self) -> f64 {
        self.sector_coefficients.iter().map(|c| c * c).sum()
    }
}

/// `P_N = Σ_{m′} |C_{N,m′}|²`.
pub fn occupation_prob(state: &DickeEigenstate, n: usize) -> f64 {
    state
        .basis
        .states
        .iter()
        .zip(&state.sector_coefficients)
        .filter(|(s, _)| s.n == n)
        .map(|(_, c)| c * c)
        .sum()
}

struct SectorSolution {
    basis: Arc<SectorBasis>,
    energies: Vec<f64>,
    vectors: Mat<f64>,
}

fn solve_sector(params: &ModelParams, n_max: usize, sector: Sector) -> Result<SectorSolution> {
    let (m, basis) = build_sector_matrix(params, n_max, sector)?;
    let evd = m.self_adjoint_eigen(Side::Lower).map_err(|e| eig_error(e, n_max))?;
    let energies = evd.S().column_vector().iter().copied().collect();
    Ok(SectorSolution { basis: Arc::new(basis), energies, vectors: evd.U().to_owned() })
}

fn solve_both(params: &ModelParams, n_max: usize, opts: &SolveOptions) -> Result<[SectorSolution; 2]> {
    require_dicke(params)?;
    guard(CoherentBasis { j2: params.j2(), n_max }.dim(), opts.dimension_limit)?;
    let (plus, minus) = opts.exec.join(
        || solve_sector(params, n_max, Sector::Plus),
        || solve_sector(params, n_max, Sector::Minus),
    );
    Ok([plus?, minus?])
}

/// Full eigendecomposition at truncation `n_max`, sorted by energy.
pub fn diagonalize_dicke(params: &ModelParams, n_max: usize, opts: &SolveOptions) -> Result<Vec<DickeEigenstate>> {
    let sols = solve_both(params, n_max, opts)?;
    let mut out = Vec::new();
    for sol in &sols {
        let parity = sol.basis.sector.parity(params.j2());
        for (c, &energy) in sol.energies.iter().enumerate() {
            out.push(DickeEigenstate {
                k: 0,
                energy,
                parity,
                n_max,
                delta_p: None,
                basis: Arc::clone(&sol.basis),
                sector_coefficients: sol.vectors.col(c).iter().copied().collect(),
            });
        }
    }
    out.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    for (i, s) in out.iter_mut().enumerate() {
        s.k = i + 1;
    }
    Ok(out)
}

/// Eigenvalues of both sectors at truncation `n_max`, merged and sorted.
pub fn dicke_eigenvalues(params: &ModelParams, n_max: usize, opts: &SolveOptions) -> Result<Vec<(f64, Parity)>> {
    require_dicke(params)?;
    guard(CoherentBasis { j2: params.j2(), n_max }.dim(), opts.dimension_limit)?;
    let eig = |sector| -> Result<Vec<(f64, Parity)>> {
        let (m, basis) = build_sector_matrix(params, n_max, sector)?;
        let parity = basis.sector.parity(params.j2());
        let ev = m.self_adjoint_eigenvalues(Side::Lower).map_err(|e| eig_error(e, n_max))?;
        Ok(ev.into_iter().map(|e| (e, parity)).collect())
    };
    let (a, b) = opts.exec.join(|| eig(Sector::Plus), || eig(Sector::Minus));
    let mut all = a?;
    all.extend(b?);
    all.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(all)
}

/// Number of nearest same-sector levels considered when matching a state
/// across truncations.
const MATCH_CANDIDATES: usize = 8;

/// `ΔP^k` of each state: the weight of its continuation in the
/// `N_max + 1` truncation on the new row `N = N_max + 1`. The continuation
/// is the same-parity eigenvector, among the levels closest in energy, with
/// the largest overlap.
pub fn precision_delta_p(
    params: &ModelParams,
    n_max: usize,
    states: &[DickeEigenstate],
    opts: &SolveOptions,
) -> Result<Vec<f64>> {
    if let Some(s) = states.iter().find(|s| s.n_max != n_max) {
        return Err(Error::InvalidInput(format!(
            "state {} comes from N_max = {}, not {n_max}",
            s.k, s.n_max
        )));
    }
    let sols = solve_both(params, n_max + 1, opts)?;
    let edge = n_max + 1;
    states
        .iter()
        .map(|s| {
            let sol = sols.iter().find(|x| x.basis.sector == s.sector()).expect("both sectors solved");
            let mut order: Vec<usize> = (0..sol.energies.len()).collect();
            order.sort_by(|&a, &b| {
                (sol.energies[a] - s.energy).abs().total_cmp(&(sol.energies[b] - s.energy).abs())
            });
            let positions: Vec<usize> = s
                .basis
                .states
                .iter()
                .map(|st| sol.basis.position(st.n, st.a2).expect("nested truncations"))
                .collect();
            let best = order
                .iter()
                .take(MATCH_CANDIDATES)
                .map(|&c| {
                    let col = sol.vectors.col(c);
                    let ov: f64 = positions.iter().zip(&s.sector_coefficients).map(|(&p, &x)| col[p] * x).sum();
                    (c, ov.abs())
                })
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(c, _)| c)
                .expect("non-empty sector");
            let col = sol.vectors.col(best);
            Ok(sol
                .basis
                .states
                .iter()
                .enumerate()
                .filter(|(_, st)| st.n == edge)
                .map(|(i, _)| col[i] * col[i])
                .sum())
        })
        .collect()
}

/// Outcome of [`converge_spectrum`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport {
    /// Truncation at which every state below the reference energy converged.
    pub n_max: usize,
    pub tolerance: f64,
    pub converged: usize,
    pub max_delta_p: f64,
    pub iterations: usize,
}

struct EdgeLevel {
    energy: f64,
    parity: Parity,
    delta_p: f64,
}

// Eigenvalues of the N_max + 1 truncation with the weight of each state on
// its last row; eigenvectors are dropped sector by sector.
fn edge_levels(params: &ModelParams, n_max: usize, exec: Exec) -> Result<Vec<EdgeLevel>> {
    let top = n_max + 1;
    let one = |sector| -> Result<Vec<EdgeLevel>> {
        let sol = solve_sector(params, top, sector)?;
        let parity = sector.parity(params.j2());
        let rows: Vec<usize> = (0..sol.basis.dim()).filter(|&i| sol.basis.states[i].n == top).collect();
        Ok(sol
            .energies
            .iter()
            .enumerate()
            .map(|(c, &energy)| {
                let col = sol.vectors.col(c);
                let delta_p = rows.iter().map(|&i| col[i] * col[i]).sum::<f64>().clamp(0.0, 1.0);
                EdgeLevel { energy, parity, delta_p }
            })
            .collect())
    };
    let (a, b) = exec.join(|| one(Sector::Plus), || one(Sector::Minus));
    let mut all = a?;
    all.extend(b?);
    all.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    Ok(all)
}

/// Raises the truncation `N_max ← ⌈1.5 N_max⌉` until every state with
/// scaled energy at or below `epsilon_ref` has `ΔP < tolerance`, and returns
/// those states. `ΔP` is read from the solve at `N_max + 1`, whose
/// eigenvalues are the ones reported.
pub fn converge_spectrum(
    params: &ModelParams,
    tolerance: f64,
    epsilon_ref: f64,
    n_max_start: usize,
    opts: &SolveOptions,
) -> Result<(SpectrumRecord, ConvergenceReport)> {
    require_dicke(params)?;
    if !(tolerance > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tolerance}")));
    }
    let e_ref = params.unscale(crate::ScaledEnergy(epsilon_ref));
    let mut n_max = n_max_start.max(1);
    let mut last: Option<(usize, usize, usize)> = None;
    for iterations in 1.. {
        let dim = CoherentBasis { j2: params.j2(), n_max: n_max + 1 }.dim();
        if dim > opts.dimension_limit {
            return Err(match last {
                Some((n, unconverged, first_index)) => Error::ConvergenceBudget {
                    n_max: n,
                    tolerance,
                    unconverged,
                    first_index,
                },
                None => Error::DimensionGuard { dim, limit: opts.dimension_limit },
            });
        }
        let levels = edge_levels(params, n_max, opts.exec)?;
        let below: Vec<&EdgeLevel> = levels.iter().take_while(|l| l.energy <= e_ref).collect();
        let bad: Vec<usize> = below
            .iter()
            .enumerate()
            .filter(|(_, l)| l.delta_p >= tolerance)
            .map(|(i, _)| i + 1)
            .collect();
        if bad.is_empty() {
            let max_delta_p = below.iter().map(|l| l.delta_p).fold(0.0, f64::max);
            let record = SpectrumRecord::new(
                *params,
                below
                    .iter()
                    .map(|l| Level {
                        index: 0,
                        energy: l.energy,
                        lambda: None,
                        parity: Some(l.parity),
                        delta_p: Some(l.delta_p),
                    })
                    .collect(),
                epsilon_ref,
            );
            let report = ConvergenceReport {
                n_max,
                tolerance,
                converged: record.len(),
                max_delta_p,
                iterations,
            };
            return Ok((record, report));
        }
        last = Some((n_max, bad.len(), bad[0]));
        n_max = (1.5 * n_max as f64).ceil() as usize;
    }
    unreachable!("the truncation loop only exits by returning")
}
