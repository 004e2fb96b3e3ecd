//! Subcommand bodies. Each returns the run configuration that was hashed
//! into its files and a JSON summary for the manifest.

use esqpt_core::analysis::{
    averaged_dos, compare_to_semiclassical, require_certified, staircase, BinnedDos, Comparison, WindowMode,
};
use esqpt_core::dicke::{converge_spectrum, diagonalize_dicke, ConvergenceReport, SolveOptions};
use esqpt_core::dos::{
    admissible_y_interval, dos_curve, linear_grid, nu_bin_average, nu_monte_carlo, phi_admissible_fraction,
};
use esqpt_core::landscape::{fixed_points as classical_fixed_points, ground_energy as classical_ground, surface_grid};
use esqpt_core::tc::{assemble_spectrum, assemble_spectrum_auto};
use esqpt_core::{Exec, Model, ModelParams, ScaledEnergy, SpectrumRecord};
use serde_json::{json, Value};

use crate::config::{parse_grid, RunConfig};
use crate::output::OutputDir;
use crate::{row, CompareArgs, DosArgs, Failure, GroundArgs, QuantumArgs, ReproduceArgs, SpectrumArgs, SurfaceArgs, WindowArgs};

type Outcome = Result<(RunConfig, Value), Failure>;

fn cfg(command: &str, params: Option<&ModelParams>, options: Value) -> RunConfig {
    RunConfig { command: command.into(), params: params.copied(), options }
}

fn grid_arg(s: &str) -> Result<(f64, f64, usize), Failure> {
    parse_grid(s).map_err(Failure::Config)
}

pub fn fixed_points(p: &ModelParams, out: &mut OutputDir) -> Outcome {
    let c = cfg("fixed-points", Some(p), json!({}));
    let fps = classical_fixed_points(p)?;
    let j = p.j();
    let rows: Vec<String> = fps
        .iter()
        .map(|f| {
            let pt = f.point;
            let phi = pt.phi_defined(j).then_some(pt.phi);
            row!(pt.q, pt.p, pt.jz, phi, f.epsilon.value(), f.stability.as_str(), f.continuous_ring)
        })
        .collect();
    out.csv("fixed_points.csv", &c, "q,p,jz,phi,epsilon,stability,continuous_ring", &rows)?;
    Ok((c, json!({ "fixed_points": fps.len() })))
}

fn surface_rows(p: &ModelParams, n_theta: usize, n_phi: usize, exec: Exec) -> Result<Vec<String>, Failure> {
    if n_theta < 2 || n_phi < 2 {
        return Err(Failure::Config("surface grid needs n_theta, n_phi >= 2".into()));
    }
    Ok(surface_grid(p, n_theta, n_phi, exec)?
        .iter()
        .map(|s| row!(s.theta_cos_phi, s.theta_sin_phi, s.epsilon))
        .collect())
}

const SURFACE_COLUMNS: &str = "theta_cos_phi,theta_sin_phi,epsilon";

pub fn energy_surface(p: &ModelParams, a: &SurfaceArgs, exec: Exec, out: &mut OutputDir) -> Outcome {
    let c = cfg("energy-surface", Some(p), json!({ "n_theta": a.n_theta, "n_phi": a.n_phi }));
    let rows = surface_rows(p, a.n_theta, a.n_phi, exec)?;
    out.csv("energy_surface.csv", &c, SURFACE_COLUMNS, &rows)?;
    Ok((c, json!({ "samples": rows.len() })))
}

fn ground_rows(p: &ModelParams, ratios: &str) -> Result<Vec<String>, Failure> {
    let (lo, hi, n) = grid_arg(ratios)?;
    if lo < 0.0 {
        return Err(Failure::Config("coupling ratios must be non-negative".into()));
    }
    linear_grid(lo, hi, n)
        .into_iter()
        .map(|r| Ok(row!(r, classical_ground(&p.with_gamma_ratio(r)?))))
        .collect()
}

pub fn ground_energy(p: &ModelParams, a: &GroundArgs, out: &mut OutputDir) -> Outcome {
    let c = cfg("ground-energy", Some(p), json!({ "ratios": a.ratios }));
    let rows = ground_rows(p, &a.ratios)?;
    out.csv("ground_energy.csv", &c, "gamma_over_gc,epsilon_min", &rows)?;
    Ok((c, json!({ "samples": rows.len() })))
}

/// Energies at which the admissible region of the sphere is tabulated.
const ADMISSIBLE_ENERGIES: [f64; 7] = [-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0];

fn semiclassical_files(
    p: &ModelParams,
    c: &RunConfig,
    grid: &[f64],
    h: f64,
    exec: Exec,
    out: &mut OutputDir,
    prefix: &str,
) -> Result<Value, Failure> {
    let curve = dos_curve(p, grid, h, exec)?;
    let rows: Vec<String> = curve
        .samples
        .iter()
        .map(|s| row!(s.epsilon, s.nu_scaled, s.nu_prime_scaled, s.regime.as_str()))
        .collect();
    out.csv(&format!("{prefix}dos_semiclassical.csv"), c, "epsilon,nu_scaled,nu_prime_scaled,regime", &rows)?;

    let markers: Vec<String> = curve
        .markers
        .iter()
        .map(|m| {
            row!(
                m.epsilon,
                m.kind.as_str(),
                m.left,
                m.right,
                m.log_fit.map(|f| f.a),
                m.log_fit.map(|f| f.b),
                m.log_fit.map(|f| f.r_squared)
            )
        })
        .collect();
    out.csv(&format!("{prefix}dos_markers.csv"), c, "epsilon,kind,left,right,fit_a,fit_b,fit_r_squared", &markers)?;

    let e0 = classical_ground(p);
    let energies: Vec<f64> = ADMISSIBLE_ENERGIES.iter().copied().filter(|&e| e >= e0).collect();
    let mut fraction_rows = Vec::new();
    let mut boundary_rows = Vec::new();
    for &eps in &energies {
        for y in linear_grid(-1.0, 1.0, 201) {
            fraction_rows.push(row!(eps, y, 1.0 + y, phi_admissible_fraction(y, eps, p)?));
        }
        for phi in linear_grid(0.0, std::f64::consts::TAU, 181) {
            let iv = admissible_y_interval(eps, phi, p);
            boundary_rows.push(row!(eps, phi, iv.map(|v| 1.0 + v.0), iv.map(|v| 1.0 + v.1)));
        }
    }
    out.csv(&format!("{prefix}dos_admissible.csv"), c, "epsilon,y,one_plus_y,phi_fraction", &fraction_rows)?;
    out.csv(
        &format!("{prefix}dos_admissible_boundary.csv"),
        c,
        "epsilon,phi,one_plus_y_lo,one_plus_y_hi",
        &boundary_rows,
    )?;
    Ok(json!({
        "samples": rows.len(),
        "markers": curve.markers.iter().map(|m| json!({
            "epsilon": m.epsilon,
            "kind": m.kind.as_str(),
            "left": m.left,
            "right": m.right,
        })).collect::<Vec<_>>(),
    }))
}

fn default_eps_ref(p: &ModelParams) -> f64 {
    match p.model() {
        Model::TavisCummings => 3.0,
        Model::Dicke => 1.2,
    }
}

fn quantum_options(p: &ModelParams, q: &QuantumArgs) -> Value {
    match p.model() {
        Model::TavisCummings => json!({
            "eps_ref": q.eps_ref.unwrap_or(default_eps_ref(p)),
            "lambda_max": q.lambda_max,
        }),
        Model::Dicke => json!({
            "eps_ref": q.eps_ref.unwrap_or(default_eps_ref(p)),
            "nmax_start": q.nmax_start,
            "tolerance": q.tolerance,
            "dimension_limit": q.dimension_limit,
        }),
    }
}

/// Complete quantum spectrum up to the reference energy.
pub fn quantum_record(
    p: &ModelParams,
    q: &QuantumArgs,
    exec: Exec,
) -> Result<(SpectrumRecord, Option<ConvergenceReport>), Failure> {
    let eps_ref = q.eps_ref.unwrap_or(default_eps_ref(p));
    match p.model() {
        Model::TavisCummings => {
            let rec = match q.lambda_max {
                Some(l) => assemble_spectrum(p, l, eps_ref, exec)?,
                None => assemble_spectrum_auto(p, eps_ref, exec)?,
            };
            log::info!("tavis-cummings: {} levels up to eps = {eps_ref}", rec.len());
            Ok((rec, None))
        }
        Model::Dicke => {
            if !(q.tolerance > 0.0 && q.tolerance < 1.0) {
                return Err(Failure::Config(format!("tolerance must lie in (0, 1), got {}", q.tolerance)));
            }
            let opts = SolveOptions { exec, dimension_limit: q.dimension_limit };
            let (rec, rep) = converge_spectrum(p, q.tolerance, eps_ref, q.nmax_start, &opts)?;
            log::info!(
                "dicke: {} certified levels up to eps = {eps_ref} at N_max = {} (max dP {:e})",
                rec.len(),
                rep.n_max,
                rep.max_delta_p
            );
            Ok((rec, Some(rep)))
        }
    }
}

fn report_json(rep: &Option<ConvergenceReport>) -> Value {
    match rep {
        Some(r) => json!({
            "n_max": r.n_max,
            "tolerance": r.tolerance,
            "converged": r.converged,
            "max_delta_p": r.max_delta_p,
            "iterations": r.iterations,
        }),
        None => Value::Null,
    }
}

fn binned(p: &ModelParams, rec: &SpectrumRecord, w: &WindowArgs, tolerance: f64) -> Result<BinnedDos, Failure> {
    if p.model() == Model::Dicke {
        require_certified(rec, tolerance)?;
    }
    let window = w.window.unwrap_or(match p.model() {
        Model::TavisCummings => 600,
        Model::Dicke => 20,
    });
    let mode = if w.sliding { WindowMode::Sliding } else { WindowMode::Disjoint };
    Ok(averaged_dos(rec, window, mode)?)
}

fn window_options(p: &ModelParams, w: &WindowArgs) -> Value {
    json!({ "window": w.window.unwrap_or(if p.model() == Model::Dicke { 20 } else { 600 }), "sliding": w.sliding })
}

fn staircase_rows(rec: &SpectrumRecord) -> Vec<String> {
    staircase(rec).iter().map(|&(e, n)| row!(e, n)).collect()
}

fn binned_rows(b: &BinnedDos) -> Vec<String> {
    b.samples.iter().map(|s| row!(s.epsilon_bar, s.dos_scaled)).collect()
}

pub fn dos(p: &ModelParams, a: &DosArgs, exec: Exec, out: &mut OutputDir) -> Outcome {
    let e0 = classical_ground(p);
    if a.semiclassical {
        let (lo, hi, n) = match &a.grid {
            Some(g) => grid_arg(g)?,
            None => (e0 - 0.25, 2.0, 401),
        };
        if !(a.h > 0.0) {
            return Err(Failure::Config("--h must be positive".into()));
        }
        let c = cfg("dos --semiclassical", Some(p), json!({ "grid": [lo, hi, n], "h": a.h }));
        let summary = semiclassical_files(p, &c, &linear_grid(lo, hi, n), a.h, exec, out, "")?;
        Ok((c, summary))
    } else if a.mc {
        let (lo, hi, n) = match &a.grid {
            Some(g) => grid_arg(g)?,
            None => (e0, 1.5, 40),
        };
        if a.samples < esqpt_core::dos::MC_MIN_SAMPLES {
            return Err(Failure::Config(format!(
                "--samples must be at least {}",
                esqpt_core::dos::MC_MIN_SAMPLES
            )));
        }
        let c = cfg(
            "dos --mc",
            Some(p),
            json!({ "grid": [lo, hi, n], "seed": a.seed, "samples": a.samples }),
        );
        let edges = linear_grid(lo, hi, n + 1);
        let bins = nu_monte_carlo(&edges, p, a.samples, a.seed, exec)?;
        let rows: Vec<String> = bins.iter().map(|b| row!(b.epsilon_lo, b.epsilon_hi, b.nu, b.std_err)).collect();
        out.csv("dos_mc.csv", &c, "epsilon_lo,epsilon_hi,nu_mc,std_err", &rows)?;
        let mut worst = 0.0f64;
        for b in &bins {
            if b.std_err > 0.0 {
                worst = worst.max((b.nu - nu_bin_average(b.epsilon_lo, b.epsilon_hi, p)?).abs() / b.std_err);
            }
        }
        Ok((c, json!({ "bins": bins.len(), "max_abs_z_vs_quadrature": worst })))
    } else {
        let mut options = quantum_options(p, &a.quantum_args);
        options["window"] = window_options(p, &a.window);
        let c = cfg("dos --quantum", Some(p), options);
        let (rec, rep) = quantum_record(p, &a.quantum_args, exec)?;
        let b = binned(p, &rec, &a.window, a.quantum_args.tolerance)?;
        out.csv("dos_quantum.csv", &c, "epsilon_bar,dos_scaled", &binned_rows(&b))?;
        Ok((c, json!({ "levels": rec.len(), "bins": b.samples.len(), "dropped": b.dropped, "convergence": report_json(&rep) })))
    }
}

pub fn spectrum(p: &ModelParams, a: &SpectrumArgs, exec: Exec, out: &mut OutputDir) -> Outcome {
    if a.dump_states && p.model() != Model::Dicke {
        return Err(Failure::Config("--dump-states is only available for the dicke model".into()));
    }
    let mut options = quantum_options(p, &a.quantum);
    options["dump_states"] = json!(a.dump_states);
    let c = cfg("spectrum", Some(p), options);
    let (rec, rep) = quantum_record(p, &a.quantum, exec)?;
    match p.model() {
        Model::TavisCummings => {
            let rows: Vec<String> = rec
                .levels
                .iter()
                .map(|l| row!(l.index, l.lambda.unwrap_or(0), l.energy, rec.epsilon(l)))
                .collect();
            out.csv("spectrum.csv", &c, "index,lambda,energy,epsilon", &rows)?;
        }
        Model::Dicke => {
            let rows: Vec<String> = rec
                .levels
                .iter()
                .map(|l| row!(l.index, l.energy, rec.epsilon(l), l.delta_p))
                .collect();
            out.csv("spectrum.csv", &c, "index,energy,epsilon,delta_p", &rows)?;
        }
    }
    out.csv("staircase.csv", &c, "epsilon,n_over_2j", &staircase_rows(&rec))?;
    if a.dump_states {
        let rep = rep.expect("dicke runs carry a convergence report");
        let opts = SolveOptions { exec, dimension_limit: a.quantum.dimension_limit };
        let e_ref = p.unscale(ScaledEnergy(rec.epsilon_ref));
        let states = diagonalize_dicke(p, rep.n_max + 1, &opts)?;
        let mut rows = Vec::new();
        for s in states.iter().take_while(|s| s.energy <= e_ref) {
            let basis = esqpt_core::dicke::CoherentBasis { j2: p.j2(), n_max: rep.n_max + 1 };
            for (i, &coef) in s.coefficients().iter().enumerate() {
                if coef != 0.0 {
                    let at = basis.state(i);
                    rows.push(row!(s.k, at.n, at.m_prime(), coef));
                }
            }
        }
        out.csv("states.csv", &c, "k,n,m_prime,coefficient", &rows)?;
    }
    Ok((c, json!({ "levels": rec.len(), "convergence": report_json(&rep) })))
}

fn comparison_json(cmp: &Comparison) -> Value {
    json!({
        "mean_dev": cmp.mean_dev,
        "max_dev": cmp.max_dev,
        "excluded_bins": cmp.excluded_bins.iter().map(|&i| json!({
            "index": i,
            "epsilon_bar": cmp.rows[i].epsilon_bar,
        })).collect::<Vec<_>>(),
    })
}

// Staircase, binned density, semiclassical curve and the comparison for one
// quantum record.
fn comparison_files(
    p: &ModelParams,
    c: &RunConfig,
    rec: &SpectrumRecord,
    b: &BinnedDos,
    exclusion: f64,
    exec: Exec,
    out: &mut OutputDir,
    prefix: &str,
) -> Result<Value, Failure> {
    if !(exclusion >= 0.0) {
        return Err(Failure::Config("--exclusion must be non-negative".into()));
    }
    let cmp = compare_to_semiclassical(b, exclusion)?;
    out.csv(&format!("{prefix}staircase.csv"), c, "epsilon,n_over_2j", &staircase_rows(rec))?;
    out.csv(&format!("{prefix}dos_quantum.csv"), c, "epsilon_bar,dos_scaled", &binned_rows(b))?;
    let e0 = classical_ground(p);
    let grid = linear_grid(e0 - 0.1, rec.epsilon_ref.max(e0 + 0.5), 401);
    let curve = dos_curve(p, &grid, esqpt_core::dos::DEFAULT_DERIVATIVE_STEP, exec)?;
    let rows: Vec<String> = curve
        .samples
        .iter()
        .map(|s| row!(s.epsilon, s.nu_scaled, s.nu_prime_scaled, s.regime.as_str()))
        .collect();
    out.csv(&format!("{prefix}dos_semiclassical.csv"), c, "epsilon,nu_scaled,nu_prime_scaled,regime", &rows)?;
    let rows: Vec<String> = cmp
        .rows
        .iter()
        .map(|r| row!(r.epsilon_bar, r.dos_scaled, r.nu_scaled, r.rel_dev, r.included))
        .collect();
    out.csv(&format!("{prefix}compare.csv"), c, "epsilon_bar,dos_scaled,nu_scaled,rel_dev,included", &rows)?;
    let summary = comparison_json(&cmp);
    out.json(&format!("{prefix}compare_summary.json"), &summary)?;
    log::info!("mean deviation {:.4}, max {:.4}", cmp.mean_dev, cmp.max_dev);
    Ok(summary)
}

pub fn compare(p: &ModelParams, a: &CompareArgs, exec: Exec, out: &mut OutputDir) -> Outcome {
    let mut options = quantum_options(p, &a.quantum);
    options["window"] = window_options(p, &a.window);
    options["exclusion"] = json!(a.exclusion);
    let c = cfg("compare", Some(p), options);
    let (rec, rep) = quantum_record(p, &a.quantum, exec)?;
    let b = binned(p, &rec, &a.window, a.quantum.tolerance)?;
    let mut summary = comparison_files(p, &c, &rec, &b, a.exclusion, exec, out, "")?;
    summary["levels"] = json!(rec.len());
    summary["convergence"] = report_json(&rep);
    Ok((c, summary))
}

/// Couplings `γ/γc` of the three-panel figures.
const PANEL_RATIOS: [f64; 3] = [0.2, 1.0, 2.0];

fn tag(model: Model, ratio: f64) -> String {
    let m = match model {
        Model::TavisCummings => "tc",
        Model::Dicke => "dicke",
    };
    format!("{m}_g{ratio}")
}

pub fn reproduce_all(a: &ReproduceArgs, exec: Exec, out: &mut OutputDir) -> Outcome {
    let top = cfg(
        "reproduce-all",
        None,
        json!({
            "tc_j2": a.tc_j2,
            "dicke_j2": a.dicke_j2,
            "skip_dicke": a.skip_dicke,
            "nmax_start": a.nmax_start,
            "seed": a.seed,
        }),
    );
    let models = [Model::TavisCummings, Model::Dicke];
    let base = |model: Model, ratio: f64| -> Result<ModelParams, Failure> {
        let j2 = if model == Model::Dicke { a.dicke_j2 } else { a.tc_j2 };
        ModelParams::resonant(j2, ratio, model).map_err(|e| Failure::Config(e.to_string()))
    };
    let mut summary = json!({});

    // fig1: energy surfaces and fixed points.
    for model in models {
        for ratio in PANEL_RATIOS {
            let p = base(model, ratio)?;
            let c = cfg("reproduce-all/fig1", Some(&p), json!({ "n_theta": 101, "n_phi": 128 }));
            out.csv(&format!("fig1/surface_{}.csv", tag(model, ratio)), &c, SURFACE_COLUMNS, &surface_rows(&p, 101, 128, exec)?)?;
            let fps = classical_fixed_points(&p)?;
            let j = p.j();
            let rows: Vec<String> = fps
                .iter()
                .map(|f| {
                    let pt = f.point;
                    row!(pt.q, pt.p, pt.jz, pt.phi_defined(j).then_some(pt.phi), f.epsilon.value(), f.stability.as_str(), f.continuous_ring)
                })
                .collect();
            out.csv(
                &format!("fig1/fixed_points_{}.csv", tag(model, ratio)),
                &c,
                "q,p,jz,phi,epsilon,stability,continuous_ring",
                &rows,
            )?;
        }
    }

    // fig2: ground-energy curve.
    let p = base(Model::Dicke, 1.0)?;
    let c = cfg("reproduce-all/fig2", Some(&p), json!({ "ratios": "0:3:301" }));
    out.csv("fig2/ground_energy.csv", &c, "gamma_over_gc,epsilon_min", &ground_rows(&p, "0:3:301")?)?;

    // fig3: semiclassical densities.
    let mut fig3_summary = json!({});
    for model in models {
        for ratio in PANEL_RATIOS {
            let p = base(model, ratio)?;
            let e0 = classical_ground(&p);
            let (lo, hi, n) = (e0 - 0.25, 2.0, 401);
            let h = esqpt_core::dos::DEFAULT_DERIVATIVE_STEP;
            let c = cfg("reproduce-all/fig3", Some(&p), json!({ "grid": [lo, hi, n], "h": h }));
            let prefix = format!("fig3/{}/", tag(model, ratio));
            fig3_summary[tag(model, ratio)] = semiclassical_files(&p, &c, &linear_grid(lo, hi, n), h, exec, out, &prefix)?;
        }
    }
    let p = base(Model::Dicke, 2.0)?;
    let e0 = classical_ground(&p);
    let c = cfg("reproduce-all/fig3", Some(&p), json!({ "grid": [e0, 1.5, 40], "seed": a.seed, "samples": 1_000_000 }));
    let bins = nu_monte_carlo(&linear_grid(e0, 1.5, 41), &p, 1_000_000, a.seed, exec)?;
    let rows: Vec<String> = bins.iter().map(|b| row!(b.epsilon_lo, b.epsilon_hi, b.nu, b.std_err)).collect();
    out.csv(&format!("fig3/{}/dos_mc.csv", tag(Model::Dicke, 2.0)), &c, "epsilon_lo,epsilon_hi,nu_mc,std_err", &rows)?;
    summary["fig3"] = fig3_summary;

    // fig4: Tavis-Cummings spectra with λ_max = 2000; reference energies
    // are in units of ω0·𝒩 (twice the scaled energy).
    let mut fig4_summary = json!({});
    for (ratio, e_ref_per_atom) in [(1.0, 6.4), (2.0, 3.3)] {
        let p = base(Model::TavisCummings, ratio)?;
        let q = QuantumArgs {
            eps_ref: Some(2.0 * e_ref_per_atom),
            lambda_max: Some(2000),
            nmax_start: 0,
            tolerance: 1e-6,
            dimension_limit: 0,
        };
        let w = WindowArgs { window: Some(600), sliding: false };
        let mut options = quantum_options(&p, &q);
        options["window"] = window_options(&p, &w);
        let c = cfg("reproduce-all/fig4", Some(&p), options);
        let (rec, _) = quantum_record(&p, &q, exec)?;
        let b = binned(&p, &rec, &w, q.tolerance)?;
        let prefix = format!("fig4/{}/", tag(Model::TavisCummings, ratio));
        let mut s = comparison_files(&p, &c, &rec, &b, esqpt_core::analysis::DEFAULT_EXCLUSION, exec, out, &prefix)?;
        s["levels"] = json!(rec.len());
        s["eps_ref"] = json!(2.0 * e_ref_per_atom);
        fig4_summary[tag(Model::TavisCummings, ratio)] = s;
    }
    summary["fig4"] = fig4_summary;

    // fig5: Dicke spectra in the coherent basis.
    if a.skip_dicke {
        summary["fig5"] = json!("skipped");
    } else {
        let mut fig5_summary = json!({});
        for ratio in [1.0, 2.0] {
            let p = base(Model::Dicke, ratio)?;
            let q = QuantumArgs {
                eps_ref: Some(1.2),
                lambda_max: None,
                nmax_start: a.nmax_start,
                tolerance: 1e-6,
                dimension_limit: esqpt_core::dicke::DEFAULT_DIMENSION_LIMIT,
            };
            let w = WindowArgs { window: Some(20), sliding: false };
            let mut options = quantum_options(&p, &q);
            options["window"] = window_options(&p, &w);
            let c = cfg("reproduce-all/fig5", Some(&p), options);
            let (rec, rep) = quantum_record(&p, &q, exec)?;
            let b = binned(&p, &rec, &w, q.tolerance)?;
            let prefix = format!("fig5/{}/", tag(Model::Dicke, ratio));
            let mut s = comparison_files(&p, &c, &rec, &b, esqpt_core::analysis::DEFAULT_EXCLUSION, exec, out, &prefix)?;
            s["levels"] = json!(rec.len());
            s["convergence"] = report_json(&rep);
            fig5_summary[tag(Model::Dicke, ratio)] = s;
        }
        summary["fig5"] = fig5_summary;
    }
    out.json("summary.json", &summary)?;
    Ok((top, summary))
}
