//! The oracle suite behind `esqpt-lab validate`.

use esqpt_core::dicke::{
    build_dicke_matrix, converge_spectrum, diagonalize_dicke, dicke_eigenvalues, neighbour_beta, overlap_horizon,
    OverlapTable, SolveOptions,
};
use esqpt_core::dos::{
    linear_grid, nu, nu_bin_average, nu_derivative_limit, nu_monte_carlo, singularity_markers, Side,
    SingularityKind, DEFAULT_DERIVATIVE_STEP,
};
use esqpt_core::fock::{compare_spectra, diagonalize_fock, DEFAULT_DIMENSION_LIMIT};
use esqpt_core::landscape::{fixed_points, flow_rhs, ground_energy, pole_gradient_residual, tc_ring_point};
use esqpt_core::tc::{build_tc_block, diagonalize_block};
use esqpt_core::{Exec, Model, ModelParams};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::output::OutputDir;
use crate::{row, Failure, ValidateArgs};

struct Check {
    name: &'static str,
    value: f64,
    threshold: f64,
    passed: bool,
}

impl Check {
    /// Passes when `value <= threshold`.
    fn below(name: &'static str, value: f64, threshold: f64) -> Self {
        Self { name, value, threshold, passed: value <= threshold }
    }
}

fn params(j2: u32, ratio: f64, model: Model) -> Result<ModelParams, Failure> {
    Ok(ModelParams::resonant(j2, ratio, model)?)
}

const MODELS: [Model; 2] = [Model::TavisCummings, Model::Dicke];

fn landscape_checks(out: &mut Vec<Check>) -> Result<(), Failure> {
    let tc = params(80, 1.0, Model::TavisCummings)?;
    let dk = params(80, 1.0, Model::Dicke)?;
    let gc_err = (tc.critical_coupling() - 1.0).abs().max((dk.critical_coupling() - 0.5).abs());
    out.push(Check::below("critical couplings 1 and 1/2", gc_err, 1e-15));

    let e = ground_energy(&params(80, 2.0, Model::Dicke)?);
    out.push(Check::below("dicke ground energy -17/8 at 2gc", (e + 17.0 / 8.0).abs(), 1e-12));

    let mut worst = 0.0f64;
    for model in MODELS {
        for ratio in [0.2, 1.0, 2.0] {
            let p = params(80, ratio, model)?;
            let scale = p.omega0() * p.j();
            for fp in fixed_points(&p)? {
                let r = if fp.point.phi_defined(p.j()) {
                    flow_rhs(&fp.point, &p)?.max_abs()
                } else {
                    pole_gradient_residual(&fp.point, &p)?
                };
                worst = worst.max(r / scale);
            }
            if model == Model::TavisCummings {
                if let Some(ring) = tc_ring_point(&p, std::f64::consts::FRAC_PI_3)? {
                    worst = worst.max(flow_rhs(&ring, &p)?.max_abs() / scale);
                }
            }
        }
    }
    out.push(Check::below("flow residual at fixed points", worst, 1e-10));
    Ok(())
}

fn dos_checks(out: &mut Vec<Check>, seed: u64, exec: Exec) -> Result<(), Failure> {
    let tc = params(200, 2.0, Model::TavisCummings)?;
    let left = nu_derivative_limit(-1.0, Side::Left, &tc, DEFAULT_DERIVATIVE_STEP)?;
    let right = nu_derivative_limit(-1.0, Side::Right, &tc, DEFAULT_DERIVATIVE_STEP)?;
    out.push(Check::below("tc derivative jump 1/6 at eps=-1", (left - right - 1.0 / 6.0).abs(), 1e-6));

    let dk = params(80, 2.0, Model::Dicke)?;
    let markers = singularity_markers(&dk)?;
    let fit = markers
        .iter()
        .find(|m| m.epsilon == -1.0 && m.kind == SingularityKind::DerivativeLogDivergence)
        .and_then(|m| m.log_fit);
    out.push(match fit {
        Some(f) => Check { name: "dicke log divergence R^2 at eps=-1", value: f.r_squared, threshold: 0.99, passed: f.indicates_divergence() },
        None => Check { name: "dicke log divergence R^2 at eps=-1", value: f64::NAN, threshold: 0.99, passed: false },
    });

    let mut kink = 0.0f64;
    let mut kink_ok = true;
    for p in [tc, dk] {
        let l = nu_derivative_limit(1.0, Side::Left, &p, DEFAULT_DERIVATIVE_STEP)?;
        let r = nu_derivative_limit(1.0, Side::Right, &p, DEFAULT_DERIVATIVE_STEP)?;
        kink_ok &= l > 0.0 && r == 0.0;
        kink = kink.max(r.abs());
    }
    out.push(Check { name: "derivative drops to 0 above eps=+1", value: kink, threshold: 0.0, passed: kink_ok });

    let mut worst = 0.0f64;
    for model in MODELS {
        for ratio in [0.2, 1.0, 2.0] {
            let p = params(80, ratio, model)?;
            let e0 = ground_energy(&p);
            let grid = linear_grid(e0, 2.0, 400);
            let v = grid.iter().map(|&e| nu(e, &p)).collect::<Result<Vec<_>, _>>()?;
            for w in v.windows(2) {
                worst = worst.max(w[0] - w[1]);
            }
            for c in [-1.0, 1.0] {
                if c - 1e-12 > e0 {
                    worst = worst.max((nu(c + 1e-12, &p)? - nu(c - 1e-12, &p)?).abs());
                }
            }
        }
    }
    out.push(Check::below("nu monotone and continuous at +-1", worst, 1e-8));

    let edges = linear_grid(ground_energy(&dk), 1.5, 41);
    let bins = nu_monte_carlo(&edges, &dk, 1_000_000, seed, exec)?;
    let mut z = 0.0f64;
    for b in &bins {
        let diff = (b.nu - nu_bin_average(b.epsilon_lo, b.epsilon_hi, &dk)?).abs();
        z = z.max(if b.std_err > 0.0 { diff / b.std_err } else if diff < 1e-12 { 0.0 } else { f64::INFINITY });
    }
    out.push(Check::below("quadrature vs monte carlo, 40 bins |z|", z, 3.0));
    Ok(())
}

fn quantum_checks(out: &mut Vec<Check>, exec: Exec) -> Result<(), Failure> {
    let opts = SolveOptions { exec, dimension_limit: esqpt_core::dicke::DEFAULT_DIMENSION_LIMIT };

    let mut worst = 0.0f64;
    for (j2, n_max) in [(80u32, 200usize), (10, 80), (1, 60)] {
        let beta = neighbour_beta(&params(j2, 2.0, Model::Dicke)?);
        let t = OverlapTable::new(n_max + 1, overlap_horizon(n_max, beta) + 1, beta)?;
        worst = (0..=n_max).map(|m| t.row_residual(m).abs()).fold(worst, f64::max);
    }
    out.push(Check::below("displaced fock overlap unitarity", worst, 1e-10));

    // λ blocks against the product basis; blocks λ <= n_max see no cutoff.
    let n_max = 60usize;
    let tc = params(10, 2.0, Model::TavisCummings)?;
    let fock = diagonalize_fock(&tc, n_max, DEFAULT_DIMENSION_LIMIT)?;
    let mut fock_e: Vec<f64> = fock
        .record
        .levels
        .iter()
        .filter(|l| l.lambda.is_some_and(|x| x as usize <= n_max))
        .map(|l| l.energy)
        .collect();
    let mut block_e = Vec::new();
    for l in 0..=n_max as u32 {
        block_e.extend(diagonalize_block(&build_tc_block(l, &tc)?)?);
    }
    fock_e.sort_by(f64::total_cmp);
    block_e.sort_by(f64::total_cmp);
    let dev = if fock_e.len() == block_e.len() {
        fock_e.iter().zip(&block_e).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    out.push(Check::below("tc blocks vs fock, j=5", dev, 1e-9));

    let dk = params(10, 2.0, Model::Dicke)?;
    let f80 = diagonalize_fock(&dk, 80, DEFAULT_DIMENSION_LIMIT)?.record;
    let f160 = diagonalize_fock(&dk, 160, DEFAULT_DIMENSION_LIMIT)?.record;
    out.push(Check::below("fock self-convergence 80->160, 50 levels", compare_spectra(&f80, &f160, 50)?, 1e-10));
    let eps_ref = f160.epsilon(&f160.levels[59]);
    let (coh, _) = converge_spectrum(&dk, 1e-10, eps_ref, 10, &opts)?;
    out.push(Check::below("dicke coherent vs fock, j=5, 50 levels", compare_spectra(&coh, &f160, 50)?, 1e-8));

    let mut leak = 0.0f64;
    let mut norm = 0.0f64;
    for model in MODELS {
        let f = diagonalize_fock(&params(8, 1.5, model)?, 30, DEFAULT_DIMENSION_LIMIT)?;
        leak = leak.max(f.max_sector_leak);
        norm = norm.max(f.max_norm_error);
    }
    out.push(Check::below("fock eigenvector sector leak", leak, 1e-12));

    let states = diagonalize_dicke(&dk, 30, &opts)?;
    let h = build_dicke_matrix(&dk, 30)?;
    let mut residual = 0.0f64;
    for s in &states {
        let c = s.coefficients();
        norm = norm.max((c.iter().map(|x| x * x).sum::<f64>() - 1.0).abs());
        for (r, &cr) in c.iter().enumerate() {
            let hc: f64 = (0..c.len()).map(|col| h[(r, col)] * c[col]).sum();
            residual = residual.max((hc - s.energy * cr).abs() / s.energy.abs().max(1.0));
        }
    }
    out.push(Check::below("eigenvector normalization", norm, 1e-12));
    out.push(Check::below("parity-sector states solve the full matrix", residual, 1e-10));

    let mut rise = f64::NEG_INFINITY;
    let mut prev: Option<Vec<f64>> = None;
    for n in [8usize, 12, 18, 27] {
        let e: Vec<f64> = dicke_eigenvalues(&dk, n, &opts)?.into_iter().map(|x| x.0).collect();
        if let Some(p) = &prev {
            for (a, b) in p.iter().zip(&e) {
                rise = rise.max((b - a) / a.abs().max(1.0));
            }
        }
        prev = Some(e);
    }
    out.push(Check::below("rayleigh-ritz: no eigenvalue rises with N_max", rise, 1e-10));

    // λ = 1 block is 2x2 with off-diagonal γ.
    let p = ModelParams::new(1.3, 0.7, 0.9, 10, Model::TavisCummings)?;
    let ev = diagonalize_block(&build_tc_block(1, &p)?)?;
    let (w, w0, g, j) = (p.omega(), p.omega0(), p.gamma(), p.j());
    let mid = -w0 * j + 0.5 * (w + w0);
    let half = (0.25 * (w - w0).powi(2) + g * g).sqrt();
    let err = (ev[0] - (mid - half)).abs().max((ev[1] - (mid + half)).abs());
    out.push(Check::below("tc lambda=1 block vs closed form", err, 1e-12));
    Ok(())
}

pub fn run(a: &ValidateArgs, exec: Exec, out: &mut OutputDir) -> Result<(RunConfig, Value), Failure> {
    let cfg = RunConfig { command: "validate".into(), params: None, options: json!({ "seed": a.seed }) };
    let mut checks = Vec::new();
    landscape_checks(&mut checks)?;
    dos_checks(&mut checks, a.seed, exec)?;
    quantum_checks(&mut checks, exec)?;

    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    println!("{:<width$}  {:>11}  {:>9}  result", "check", "value", "threshold");
    for c in &checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        println!("{:<width$}  {:>11.3e}  {:>9.1e}  {verdict}", c.name, c.value, c.threshold);
    }
    let rows: Vec<String> = checks.iter().map(|c| row!(c.name, c.passed, c.value, c.threshold)).collect();
    out.csv("validate.csv", &cfg, "check,passed,value,threshold", &rows)?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} of {} checks passed", checks.len() - failed, checks.len());
    Ok((cfg, json!({ "checks": checks.len(), "failed": failed })))
}
