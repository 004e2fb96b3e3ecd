//! One line per acceptance criterion, written straight to stderr so it shows
//! up even when the harness captures output.
//!
//! The Dicke overlay at j = 40 takes several minutes per coupling and is
//! ignored by default:
//! `cargo test --release -p esqpt-core --test acceptance -- --ignored`.

use std::io::Write;

use esqpt_core::analysis::{averaged_dos, compare_to_semiclassical, require_certified, WindowMode, DEFAULT_EXCLUSION};
use esqpt_core::dicke::{
    build_dicke_matrix, converge_spectrum, diagonalize_dicke, dicke_eigenvalues, neighbour_beta, overlap_horizon,
    OverlapTable, SolveOptions,
};
use esqpt_core::dos::{
    linear_grid, nu, nu_bin_average, nu_derivative_limit, nu_monte_carlo, singularity_markers, Side,
    SingularityKind, DEFAULT_DERIVATIVE_STEP,
};
use esqpt_core::fock::{compare_spectra, diagonalize_fock, DEFAULT_DIMENSION_LIMIT};
use esqpt_core::landscape::ground_energy;
use esqpt_core::spectrum::count_states_below;
use esqpt_core::tc::{assemble_spectrum, assemble_spectrum_auto, build_tc_block, diagonalize_block};
use esqpt_core::{Exec, Model, ModelParams, SpectrumRecord};

fn report(name: &str, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "[{tag}] {name}: {detail}");
}

fn params(j2: u32, ratio: f64, model: Model) -> ModelParams {
    ModelParams::resonant(j2, ratio, model).unwrap()
}

const RATIOS: [f64; 5] = [0.2, 0.6, 1.0, 1.4, 2.0];

#[test]
fn ground_energy_curve() {
    let mut worst_tc = 0.0f64;
    let mut worst_dicke = 0.0f64;
    for ratio in RATIOS {
        let tc = params(200, ratio, Model::TavisCummings);
        let rec = assemble_spectrum_auto(&tc, ground_energy(&tc) + 0.05, Exec::Parallel).unwrap();
        worst_tc = worst_tc.max((rec.ground_epsilon().unwrap() - ground_energy(&tc)).abs());

        let dk = params(80, ratio, Model::Dicke);
        let (rec, _) = converge_spectrum(&dk, 1e-6, ground_energy(&dk) + 0.05, 20, &SolveOptions::default()).unwrap();
        worst_dicke = worst_dicke.max((rec.ground_epsilon().unwrap() - ground_energy(&dk)).abs());
    }
    let pass = worst_tc <= 2.0 / 100.0 && worst_dicke <= 2.0 / 40.0;
    report(
        "ground-energy curve",
        pass,
        format!("max |eps_GS - eps_min|: TC j=100 {worst_tc:.2e} (<= 2e-2), Dicke j=40 {worst_dicke:.2e} (<= 5e-2)"),
    );
    assert!(pass);
}

// Reference energies are quoted in units of ω0·𝒩; ε = E/(ω0 j) is twice that.
fn tc_count_record(ratio: f64, e_ref_per_atom: f64) -> SpectrumRecord {
    let p = params(200, ratio, Model::TavisCummings);
    assemble_spectrum(&p, 2000, 2.0 * e_ref_per_atom, Exec::Parallel).unwrap()
}

#[test]
fn tc_state_counts() {
    let mut pass = true;
    let mut parts = Vec::new();
    for (ratio, e_ref, expected) in [(1.0, 6.4, 264_000.0), (2.0, 3.3, 160_000.0)] {
        let rec = tc_count_record(ratio, e_ref);
        let count = rec.len() as f64;
        let ok = ((count - expected) / expected).abs() <= 0.005;
        pass &= ok;
        let literal = count_states_below(&rec, e_ref).unwrap();
        parts.push(format!(
            "gamma={ratio}gc E_ref={e_ref} w0*N: {count} vs {expected} ({:+.3}%), at eps<={e_ref} literally {literal}",
            100.0 * (count - expected) / expected
        ));
    }
    report("TC state counts", pass, parts.join("; "));
    assert!(pass);
}

#[test]
fn tc_dos_overlay() {
    let mut pass = true;
    let mut parts = Vec::new();
    for (ratio, e_ref) in [(1.0, 6.4), (2.0, 3.3)] {
        let rec = tc_count_record(ratio, e_ref);
        let binned = averaged_dos(&rec, 600, WindowMode::Disjoint).unwrap();
        let c = compare_to_semiclassical(&binned, DEFAULT_EXCLUSION).unwrap();
        let ok = c.mean_dev < 0.02 && c.max_dev < 0.10;
        pass &= ok;
        parts.push(format!(
            "gamma={ratio}gc mean {:.4} (<0.02) max {:.4} (<0.10), {} bins, {} excluded",
            c.mean_dev,
            c.max_dev,
            c.rows.len(),
            c.excluded_bins.len()
        ));
    }
    report("TC DOS overlay", pass, parts.join("; "));
    assert!(pass);
}

#[test]
#[ignore = "long-running: minutes per coupling"]
fn dicke_dos_overlay() {
    let mut pass = true;
    let mut parts = Vec::new();
    for ratio in [1.0, 2.0] {
        let p = params(80, ratio, Model::Dicke);
        let (rec, rep) = converge_spectrum(&p, 1e-6, 1.2, 40, &SolveOptions::default()).unwrap();
        require_certified(&rec, 1e-6).unwrap();
        let binned = averaged_dos(&rec, 20, WindowMode::Disjoint).unwrap();
        let c = compare_to_semiclassical(&binned, DEFAULT_EXCLUSION).unwrap();
        let ok = c.mean_dev < 0.05 && c.max_dev < 0.15;
        pass &= ok;
        let worst = c
            .rows
            .iter()
            .filter(|r| r.included)
            .max_by(|a, b| a.rel_dev.total_cmp(&b.rel_dev))
            .unwrap();
        parts.push(format!(
            "gamma={ratio}gc N_max={} states={} max dP={:.1e}: mean {:.4} (<0.05) max {:.4} (<0.15) at eps={:.3}",
            rep.n_max, rep.converged, rep.max_delta_p, c.mean_dev, c.max_dev, worst.epsilon_bar
        ));
    }
    report("Dicke DOS overlay", pass, parts.join("; "));
    assert!(pass);
}

#[test]
fn esqpt_signatures() {
    let tc = params(200, 2.0, Model::TavisCummings);
    let left = nu_derivative_limit(-1.0, Side::Left, &tc, DEFAULT_DERIVATIVE_STEP).unwrap();
    let right = nu_derivative_limit(-1.0, Side::Right, &tc, DEFAULT_DERIVATIVE_STEP).unwrap();
    let jump = left - right;
    let a = (jump - 1.0 / 6.0).abs() <= 1e-6;
    report("ESQPT (a) TC jump at eps=-1", a, format!("{left:.9} - {right:.9} = {jump:.9} (1/6 within 1e-6)"));

    let dk = params(80, 2.0, Model::Dicke);
    let markers = singularity_markers(&dk).unwrap();
    let saddle = markers.iter().find(|m| m.epsilon == -1.0).unwrap();
    let fit = saddle.log_fit.unwrap();
    let b = fit.b > 0.0 && fit.r_squared > 0.99 && saddle.kind == SingularityKind::DerivativeLogDivergence;
    report("ESQPT (b) Dicke log divergence", b, format!("b = {:.5}, R^2 = {:.8}", fit.b, fit.r_squared));

    let mut c = true;
    let mut parts = Vec::new();
    for p in [tc, dk] {
        let l = nu_derivative_limit(1.0, Side::Left, &p, DEFAULT_DERIVATIVE_STEP).unwrap();
        let r = nu_derivative_limit(1.0, Side::Right, &p, DEFAULT_DERIVATIVE_STEP).unwrap();
        c &= l > 0.0 && r == 0.0;
        parts.push(format!("{}: left {l:.5}, right {r}", p.model().name()));
    }
    report("ESQPT (c) kink at eps=+1", c, parts.join("; "));
    assert!(a && b && c);
}

#[test]
fn oracle_equivalences() {
    // (a) coherent basis vs product basis.
    let p = params(10, 2.0, Model::Dicke);
    let f80 = diagonalize_fock(&p, 80, DEFAULT_DIMENSION_LIMIT).unwrap().record;
    let f160 = diagonalize_fock(&p, 160, DEFAULT_DIMENSION_LIMIT).unwrap().record;
    let self_conv = compare_spectra(&f80, &f160, 50).unwrap();
    let eps_ref = f160.epsilon(&f160.levels[59]);
    let (coh, rep) = converge_spectrum(&p, 1e-10, eps_ref, 10, &SolveOptions::default()).unwrap();
    let dev = compare_spectra(&coh, &f160, 50).unwrap();
    let a = dev < 1e-8 && self_conv < 1e-10;
    report(
        "oracle (a) Dicke coherent vs Fock",
        a,
        format!("j=5 lowest 50: {dev:.2e} (<1e-8) at N_max={}; Fock 80->160 drift {self_conv:.2e}", rep.n_max),
    );

    // (b) λ blocks vs product basis; blocks λ <= n_max are untouched by the
    // photon cutoff.
    let n_max = 60usize;
    let tc = params(10, 2.0, Model::TavisCummings);
    let fock = diagonalize_fock(&tc, n_max, DEFAULT_DIMENSION_LIMIT).unwrap().record;
    let mut fock_e: Vec<f64> = fock
        .levels
        .iter()
        .filter(|l| l.lambda.unwrap() as usize <= n_max)
        .map(|l| l.energy)
        .collect();
    let mut block_e: Vec<f64> = (0..=n_max as u32)
        .flat_map(|l| diagonalize_block(&build_tc_block(l, &tc).unwrap()).unwrap())
        .collect();
    fock_e.sort_by(f64::total_cmp);
    block_e.sort_by(f64::total_cmp);
    let dev = fock_e.iter().zip(&block_e).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let b = fock_e.len() == block_e.len() && dev < 1e-9;
    report("oracle (b) TC blocks vs Fock", b, format!("j=5, {} levels with lambda <= {n_max}: {dev:.2e} (<1e-9)", block_e.len()));

    // (c) quadrature vs Monte Carlo.
    let dk = params(80, 2.0, Model::Dicke);
    let edges = linear_grid(ground_energy(&dk), 1.5, 41);
    let bins = nu_monte_carlo(&edges, &dk, 1_000_000, 20_240_917, Exec::Parallel).unwrap();
    let mut worst_z = 0.0f64;
    let mut c = true;
    for bin in &bins {
        let q = nu_bin_average(bin.epsilon_lo, bin.epsilon_hi, &dk).unwrap();
        let diff = (bin.nu - q).abs();
        c &= diff <= 3.0 * bin.std_err || (bin.std_err == 0.0 && diff < 1e-12);
        if bin.std_err > 0.0 {
            worst_z = worst_z.max(diff / bin.std_err);
        }
    }
    report("oracle (c) Dicke quadrature vs MC", c, format!("40 bins, 1e6 samples: worst |z| = {worst_z:.2} (<= 3)"));
    assert!(a && b && c);
}

#[test]
fn property_suites() {
    // ν on a grid: monotone, in range, continuous at ±1.
    let mut nu_ok = true;
    for model in [Model::TavisCummings, Model::Dicke] {
        for ratio in [0.2, 1.0, 2.0] {
            let p = params(80, ratio, model);
            let grid = linear_grid(ground_energy(&p), 2.0, 400);
            let v: Vec<f64> = grid.iter().map(|&e| nu(e, &p).unwrap()).collect();
            nu_ok &= v.windows(2).all(|w| w[1] >= w[0] - 1e-12);
            nu_ok &= v.iter().all(|&x| (0.0..=1.0 + 1e-9).contains(&x));
            nu_ok &= grid.iter().zip(&v).filter(|(e, _)| **e > 1.0).all(|(_, &x)| x == 1.0);
            for c in [-1.0, 1.0] {
                if c - 1e-12 > ground_energy(&p) {
                    let lo = nu(c - 1e-12, &p).unwrap();
                    let hi = nu(c + 1e-12, &p).unwrap();
                    nu_ok &= (hi - lo).abs() <= 1e-8;
                }
            }
        }
    }
    report("property: nu grid", nu_ok, "monotone, 0 <= nu <= 1, =1 above eps=1, continuous at +-1".into());

    // Overlap unitarity.
    let mut worst_res = 0.0f64;
    for (j2, n_max) in [(80u32, 200usize), (10, 80), (1, 60)] {
        let beta = neighbour_beta(&params(j2, 2.0, Model::Dicke));
        let t = OverlapTable::new(n_max + 1, overlap_horizon(n_max, beta) + 1, beta).unwrap();
        worst_res = (0..=n_max).map(|m| t.row_residual(m).abs()).fold(worst_res, f64::max);
    }
    let unit_ok = worst_res < 1e-10;
    report("property: overlap unitarity", unit_ok, format!("max row residual {worst_res:.2e} (<1e-10)"));

    // Normalization and sector purity.
    let p = params(10, 2.0, Model::Dicke);
    let states = diagonalize_dicke(&p, 30, &SolveOptions::default()).unwrap();
    let h = build_dicke_matrix(&p, 30).unwrap();
    let mut norm_err = 0.0f64;
    let mut residual = 0.0f64;
    for s in &states {
        let c = s.coefficients();
        norm_err = norm_err.max((c.iter().map(|x| x * x).sum::<f64>() - 1.0).abs());
        let scale = s.energy.abs().max(1.0);
        for (r, &cr) in c.iter().enumerate() {
            let hc: f64 = (0..c.len()).map(|col| h[(r, col)] * c[col]).sum();
            residual = residual.max((hc - s.energy * cr).abs() / scale);
        }
    }
    let mut leak = 0.0f64;
    for model in [Model::TavisCummings, Model::Dicke] {
        let f = diagonalize_fock(&params(8, 1.5, model), 30, DEFAULT_DIMENSION_LIMIT).unwrap();
        leak = leak.max(f.max_sector_leak);
        norm_err = norm_err.max(f.max_norm_error);
    }
    let purity_ok = norm_err < 1e-12 && leak < 1e-12 && residual < 1e-10;
    report(
        "property: normalization and sector purity",
        purity_ok,
        format!("|norm-1| {norm_err:.1e}, Fock sector leak {leak:.1e} (<1e-12); parity-sector states solve the full matrix to {residual:.1e}"),
    );

    // Rayleigh-Ritz under truncation growth.
    let mut rr_ok = true;
    let mut worst_rise = 0.0f64;
    let levels: Vec<Vec<f64>> = [8usize, 12, 18, 27]
        .iter()
        .map(|&n| dicke_eigenvalues(&p, n, &SolveOptions::default()).unwrap().into_iter().map(|x| x.0).collect())
        .collect();
    for w in levels.windows(2) {
        for (a, b) in w[0].iter().zip(&w[1]) {
            worst_rise = worst_rise.max(b - a);
            rr_ok &= *b <= *a + 1e-10 * a.abs().max(1.0);
        }
    }
    report("property: Rayleigh-Ritz", rr_ok, format!("largest rise of a fixed-index eigenvalue {worst_rise:.2e}"));
    assert!(nu_ok && unit_ok && purity_ok && rr_ok);
}
