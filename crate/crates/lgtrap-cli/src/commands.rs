//! The seven CLI commands. Each one computes its rows, writes data files with
//! full metadata headers into the output directory, and returns the number of
//! rows that carried error flags (the process exits non-zero when any did).

use std::time::Instant;

use anyhow::{Context, Result};
use lgtrap::constants::KB;
use lgtrap::gpe::{flatness_metric, iso_density_levels, solve_ground_state, CylGrid};
use lgtrap::heating::{average_intensity_3dlg, heating_rate, scattering_rate, ThermalCloud};
use lgtrap::kinetics::{simulate_growth_with_tol, GrowthParams, CONDENSATION_THRESHOLD};
use lgtrap::levels::level_populations_1d;
use lgtrap::thermo::{tc_interacting, TcCorrectionCoefficients};
use lgtrap::trap::{build_configuration, required_waist, BeamRole, TrapKind};
use lgtrap::Error as LgError;

use crate::config::{parse_trap_order, Resolved};
use crate::report::{common_design, run_indexed, Report};

fn sorted<T: Ord + Copy>(mut v: Vec<T>) -> Vec<T> {
    v.sort_unstable();
    v.dedup();
    v
}

fn kind_sorted(kinds: &[TrapKind]) -> Vec<TrapKind> {
    let mut v: Vec<TrapKind> = TrapKind::ALL
        .iter()
        .filter(|k| kinds.contains(k))
        .copied()
        .collect();
    v.dedup();
    v
}

fn load_coefficients(cfg: &Resolved) -> Result<(&'static str, TcCorrectionCoefficients, String)> {
    match cfg.map.get(&cfg.command, "tc_coefficients") {
        None => Ok((
            "shipped",
            TcCorrectionCoefficients::shipped().clone(),
            "crates/lgtrap/data/tc_shift_coefficients.dat (embedded)".into(),
        )),
        Some(path) => {
            let table = TcCorrectionCoefficients::from_file(path)
                .with_context(|| format!("loading coefficient table {path}"))?;
            Ok(("file", table, path.to_string()))
        }
    }
}

/// Condensation temperatures against the beam index, for every configuration.
pub fn tc_sweep(cfg: &Resolved) -> Result<usize> {
    let started = Instant::now();
    let (source_kind, coeffs, source) = load_coefficients(cfg)?;

    let mut flagged = 0usize;
    let mut rows = Vec::new();
    for kind in kind_sorted(&cfg.kinds) {
        for &ell in &sorted(cfg.ells.clone()) {
            let built = build_configuration(kind, ell, &cfg.species, cfg.n_atoms, cfg.target_vc)?;
            let eta = built.trap.shape_eta();
            match tc_interacting(&built.trap, cfg.n_atoms, &cfg.species, &coeffs) {
                Ok(est) => rows.push(format!(
                    "{kind},{ell},{eta:.9},{:.6},{:.6},{:.6},ok",
                    est.tc0 * 1e9,
                    est.tc * 1e9,
                    est.q
                )),
                Err(LgError::OutOfRegime { q, .. }) => {
                    flagged += 1;
                    rows.push(format!(
                        "{kind},{ell},{eta:.9},,,{q:.6},out_of_regime"
                    ));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }

    let mut design = common_design();
    design.push(("tc_coefficient_table", source.clone()));
    design.push(("q_limit", format!("{}", lgtrap::thermo::Q_LIMIT)));
    design.push(("d2_term", "included (load a 3-column table to drop it)".into()));

    let mut report = Report::new("tc-sweep", &cfg.echo_lines(), &design, &[], started);
    report.push_line("configuration,ell,eta,Tc0_nK,Tc_nK,q,flag");
    for row in rows {
        report.push_line(&row);
    }
    report.write(&cfg.out_dir.join("tc_sweep.csv"))?;

    let provenance = serde_json::json!({
        "coefficient_table": {
            "source_kind": source_kind,
            "source": source,
            "rows": coeffs.len(),
            "model": "Tc/Tc0 = 1 + D1 q + D1' q^(2 eta) + D2 q^2, q = a_s/lambda_T(Tc0)",
        },
        "tool_version": env!("CARGO_PKG_VERSION"),
    });
    std::fs::write(
        cfg.out_dir.join("tc_sweep.provenance.json"),
        serde_json::to_string_pretty(&provenance)?,
    )?;
    Ok(flagged)
}

/// Bose-Einstein level populations of the 1D trap ladder.
pub fn levels(cfg: &Resolved) -> Result<usize> {
    let started = Instant::now();
    let orders = match cfg.map.get("levels", "orders") {
        None => vec!["1", "3", "6", "inf"]
            .into_iter()
            .map(parse_trap_order)
            .collect::<Result<Vec<_>>>()?,
        Some(v) => v
            .split(',')
            .map(|s| parse_trap_order(s.trim()))
            .collect::<Result<Vec<_>>>()?,
    };
    let kt = cfg.map.get_f64("levels", "kt_over_hbar_omega", 2.0)?;
    let n_levels = cfg.map.get_usize("levels", "n_levels", 8)?;
    let total = cfg.map.get_f64("levels", "total_number", 100.0)?;

    let mut report = Report::new(
        "levels",
        &cfg.echo_lines(),
        &[
            ("ground_state_turning_points", "fixed at 1 a_ho for every order".into()),
            ("energies", "units of hbar omega of the harmonic reference".into()),
            ("populations", "fractions reported alongside counts (figure normalization is a free parameter)".into()),
        ],
        &[],
        started,
    );
    report.push_line("order,level,energy_hbar_omega,population,fraction");
    for order in orders {
        let pops = level_populations_1d(order, kt, n_levels, total)?;
        let sum: f64 = pops.populations.iter().sum();
        for (n, (e, p)) in pops
            .spectrum
            .energies
            .iter()
            .zip(&pops.populations)
            .enumerate()
        {
            report.push_line(&format!(
                "{order},{n},{e:.9},{p:.9e},{:.9e}",
                p / sum
            ));
        }
    }
    report.write(&cfg.out_dir.join("levels.csv"))?;
    Ok(0)
}

/// Photon-scattering sweep over the beam index and the preset detunings
/// (steep-walled 3D configuration).
pub fn scattering(cfg: &Resolved) -> Result<usize> {
    let started = Instant::now();
    let detunings_ghz = cfg.map.get_list(
        "scattering",
        "detunings_over_2pi_GHz",
        &[10.0, 100.0, 1000.0, 10000.0],
        |s| s.parse::<f64>(),
    )?;
    let t_cloud = cfg.map.get_f64("scattering", "cloud_temperature_uK", 1.0)? * 1e-6;

    let mut warnings = Vec::new();
    let mut rows = Vec::new();
    for &ell in &sorted(cfg.ells.clone()) {
        let built =
            build_configuration(TrapKind::ThreeDLg, ell, &cfg.species, cfg.n_atoms, cfg.target_vc)?;
        let cloud = ThermalCloud::new(built.trap, cfg.n_atoms, t_cloud, cfg.species.mass)?;
        let mut ds = detunings_ghz.clone();
        ds.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for dghz in ds {
            let detuning = 2.0 * std::f64::consts::PI * dghz * 1e9;
            let beam = required_waist(&built, cfg.power, detuning, &cfg.species)?[0].beam;
            let avg = average_intensity_3dlg(&cloud, &beam, &cfg.species)?;
            let eta_sc = scattering_rate(avg, &cfg.species, detuning);
            let heat = heating_rate(eta_sc, &cfg.species);
            let barrier = beam.barrier_height(&cfg.species);
            let flag = if KB * t_cloud > 0.2 * barrier {
                "warn_shallow"
            } else {
                "ok"
            };
            if flag != "ok" {
                warnings.push(format!(
                    "ell = {ell}, delta/2pi = {dghz} GHz: kT = {:.2} of the ring barrier \
                     (power-law average assumes kT << barrier)",
                    KB * t_cloud / barrier
                ));
            }
            rows.push(format!(
                "3D_LG,{ell},{dghz},{:.4},{:.6e},{:.6e},{:.6},{flag}",
                beam.waist * 1e6,
                avg,
                eta_sc,
                heat * 1e9
            ));
        }
    }

    let mut design = common_design();
    design.push(("cloud_model", "local-density thermal cloud above Tc0".into()));
    design.push((
        "avg_intensity_prefactor",
        "2^(l+1)/(pi l l!) (validated against the defining quadrature)".into(),
    ));
    design.push((
        "heating_conversion",
        "(2/3) T_recoil per scattering event across three degrees of freedom".into(),
    ));
    let mut report = Report::new("scattering", &cfg.echo_lines(), &design, &warnings, started);
    report.push_line(
        "configuration,ell,detuning_over_2pi_GHz,w0_um,avg_intensity_W_per_m2,eta_sc_per_s,heating_nK_per_s,flag",
    );
    for row in rows {
        report.push_line(&row);
    }
    report.write(&cfg.out_dir.join("scattering.csv"))?;
    Ok(0)
}

/// Beam waists and ring radii required to hold the fixed condensate volume.
pub fn waists(cfg: &Resolved) -> Result<usize> {
    let started = Instant::now();
    let g = cfg.species.interaction_strength();
    let mut warnings = Vec::new();
    let mut rows = Vec::new();
    for kind in kind_sorted(&cfg.kinds) {
        for &ell in &sorted(cfg.ells.clone()) {
            let built = build_configuration(kind, ell, &cfg.species, cfg.n_atoms, cfg.target_vc)?;
            let reqs = required_waist(&built, cfg.power, cfg.detuning, &cfg.species)?;
            let circ = reqs.iter().find(|r| r.role == BeamRole::Circular).unwrap();
            let sheet = reqs
                .iter()
                .find(|r| r.role == BeamRole::LightSheet)
                .unwrap();

            // waist-constancy validity: condensate length along the circular
            // beam's propagation axis vs its Rayleigh range
            let mu = built.trap.mu_thomas_fermi(cfg.n_atoms, g)?;
            let (_, z_half) = built.trap.half_widths(mu);
            let z_r = circ.beam.rayleigh_range();
            let flag = if 2.0 * z_half > 0.5 * z_r {
                warnings.push(format!(
                    "{kind} ell = {ell}: condensate length {:.0} um exceeds half the \
                     Rayleigh range {:.0} um; constant-waist model stretched",
                    2.0 * z_half * 1e6,
                    0.5 * z_r * 1e6
                ));
                "warn_rayleigh"
            } else {
                "ok"
            };
            rows.push(format!(
                "{kind},{ell},{:.9},{:.4},{:.4},{:.4},{:.4},{:.4},{flag}",
                built.trap.shape_eta(),
                circ.beam.waist * 1e6,
                circ.ring_radius * 1e6,
                sheet.beam.waist * 1e6,
                sheet.ring_radius * 1e6,
                z_r * 1e3
            ));
        }
    }

    let mut report = Report::new(
        "waists",
        &cfg.echo_lines(),
        &common_design(),
        &warnings,
        started,
    );
    report.push_line(
        "configuration,ell,eta,circular_w0_um,circular_rho0_um,sheet_w0_um,sheet_rho0_um,rayleigh_range_mm,flag",
    );
    for row in rows {
        report.push_line(&row);
    }
    report.write(&cfg.out_dir.join("waists.csv"))?;
    Ok(0)
}

/// Condensate growth curves and condensation times.
pub fn growth(cfg: &Resolved) -> Result<usize> {
    let started = Instant::now();
    let ells = sorted(cfg.map.get_list("growth", "ell", &[1u32, 6], |s| s.parse())?);
    let f_eq = cfg.map.get_f64("growth", "f_eq", 0.1)?;
    let threshold = cfg
        .map
        .get_f64("growth", "threshold", CONDENSATION_THRESHOLD)?;
    let rtol = cfg.map.get_f64("growth", "rtol", 1e-8)?;
    let t_end = cfg.map.get_f64("growth", "t_end_s", 10.0)?;
    let (_, coeffs, _) = load_coefficients(cfg)?;

    let kinds = kind_sorted(&cfg.kinds);
    let mut cases = Vec::new();
    for &kind in &kinds {
        for &ell in &ells {
            cases.push((kind, ell));
        }
    }

    type GrowthJob = (GrowthParams, lgtrap::GrowthSeries);
    let jobs: Vec<Box<dyn FnOnce() -> Result<GrowthJob> + Send>> = cases
        .iter()
        .map(|&(kind, ell)| {
            let species = cfg.species;
            let coeffs = coeffs.clone();
            let (n_atoms, target_vc) = (cfg.n_atoms, cfg.target_vc);
            Box::new(move || {
                let built = build_configuration(kind, ell, &species, n_atoms, target_vc)?;
                let params = GrowthParams::for_condensed_fraction(
                    built.trap, &species, n_atoms, f_eq, &coeffs,
                )?;
                let series = simulate_growth_with_tol(&params, t_end, rtol)?;
                Ok((params, series))
            }) as Box<dyn FnOnce() -> Result<GrowthJob> + Send>
        })
        .collect();
    let results = run_indexed(cfg.threads, jobs);

    let design = |params: &GrowthParams| {
        let mut d = common_design();
        d.push(("bath_mu", "mu_TF(n_eq), J".into()));
        d.push((
            "temperature_closure",
            "T = Tc_interacting (1 - f_eq)^(1/(eta+1))".into(),
        ));
        d.push(("bath_temperature_nK", format!("{:.4}", params.temperature * 1e9)));
        d.push(("bath_mu_nK", format!("{:.4}", params.mu_bath / KB * 1e9)));
        d.push(("n_eq", format!("{}", params.n_eq)));
        d.push(("condensation_threshold", format!("{threshold}")));
        d.push(("integrator_rtol", format!("{rtol:e}")));
        d.push(("mu_tf_at_zero", "0 (continuous extension)".into()));
        d
    };

    let mut flagged = 0usize;
    let mut summary_rows = Vec::new();
    for (&(kind, ell), result) in cases.iter().zip(results) {
        let (params, series) = result?;
        let mut warnings = Vec::new();
        if let Some(w) = params.validity_warning(cfg.n_atoms) {
            warnings.push(w);
        }
        let t_cond = series.condensation_time_at(threshold);
        let (t_cond_str, flag) = match &t_cond {
            Ok(t) => (format!("{t:.6e}"), "ok"),
            Err(_) => {
                flagged += 1;
                (String::new(), "saturation_not_reached")
            }
        };
        summary_rows.push(format!(
            "{kind},{ell},{:.4},{:.4},{},{},{flag}",
            params.temperature * 1e9,
            params.mu_bath / KB * 1e9,
            t_cond_str,
            series.reached_saturation,
        ));

        let mut report = Report::new("growth", &cfg.echo_lines(), &design(&params), &warnings, started);
        report.push_line("# t_seconds  Nc_over_N");
        for (t, n) in series.times.iter().zip(&series.n_c) {
            report.push_line(&format!("{t:.9e} {:.9e}", n / cfg.n_atoms));
        }
        let name = format!("growth_{}_ell{}.dat", kind.to_string().to_lowercase(), ell);
        report.write(&cfg.out_dir.join(name))?;
    }

    let mut summary = Report::new(
        "growth (summary)",
        &cfg.echo_lines(),
        &common_design(),
        &[],
        started,
    );
    summary.push_line("configuration,ell,T_nK,mu_nK,t_cond_s,reached_saturation,flag");
    for row in summary_rows {
        summary.push_line(&row);
    }
    summary.write(&cfg.out_dir.join("growth_summary.csv"))?;
    Ok(flagged)
}

/// Ground-state densities and iso-density contours from the
/// Gross-Pitaevskii solver.
pub fn shapes(cfg: &Resolved) -> Result<usize> {
    let started = Instant::now();
    let ells = sorted(cfg.map.get_list("shapes", "ell", &[1u32, 6], |s| s.parse())?);
    let grid_spec = cfg.map.get("shapes", "grid").unwrap_or("256x512");
    let (n_rho, n_z) = grid_spec
        .split_once('x')
        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
        .with_context(|| format!("bad grid `{grid_spec}` (expected e.g. 256x512)"))?;
    let tol = cfg.map.get_f64("shapes", "tolerance", 1e-6)?;
    let margin = cfg.map.get_f64("shapes", "margin", 1.6)?;
    let fractions = cfg
        .map
        .get_list("shapes", "fractions", &[0.1, 0.5], |s| s.parse::<f64>())?;

    let g = cfg.species.interaction_strength();
    let kinds = kind_sorted(&cfg.kinds);
    let mut cases = Vec::new();
    for &kind in &kinds {
        for &ell in &ells {
            cases.push((kind, ell));
        }
    }

    let jobs: Vec<Box<dyn FnOnce() -> Result<_> + Send>> = cases
        .iter()
        .map(|&(kind, ell)| {
            let species = cfg.species;
            let (n_atoms, target_vc) = (cfg.n_atoms, cfg.target_vc);
            Box::new(move || {
                let built = build_configuration(kind, ell, &species, n_atoms, target_vc)?;
                let mu_tf = built.trap.mu_thomas_fermi(n_atoms, g)?;
                let grid = CylGrid::sized_for(&built.trap, mu_tf, margin, n_rho, n_z)?;
                let result = solve_ground_state(&built.trap, n_atoms, &species, grid, tol)?;
                Ok(result)
            }) as Box<dyn FnOnce() -> Result<_> + Send>
        })
        .collect();
    let results = run_indexed(cfg.threads, jobs);

    for (&(kind, ell), result) in cases.iter().zip(results) {
        let result = result?;
        let stem = format!("shapes_{}_ell{}", kind.to_string().to_lowercase(), ell);

        let mut design = common_design();
        design.push(("initialization", "Thomas-Fermi profile with 1e-6 Gaussian floor".into()));
        design.push(("axis_condition", "half-offset radial grid (regular on the axis)".into()));
        design.push(("tau_schedule", "0.1 hbar/mu_ref, halved on energy increase".into()));
        design.push(("tolerance", format!("{tol:e}")));
        design.push(("grid", format!("{n_rho}x{n_z}, margin {margin} x TF half-widths")));
        design.push(("iso_density_fractions", format!("{fractions:?} of peak density")));
        design.push(("flatness_core", format!("{:.4}", flatness_metric(&result))));

        let mut density = Report::new("shapes (density)", &cfg.echo_lines(), &design, &[], started);
        density.push_str(&result.density_text());
        density.write(&cfg.out_dir.join(format!("{stem}_density.dat")))?;

        let mut meta = result.metadata_json();
        meta["tool_version"] = serde_json::json!(env!("CARGO_PKG_VERSION"));
        meta["configuration"] = serde_json::json!(kind.to_string());
        meta["ell"] = serde_json::json!(ell);
        meta["flatness_core"] = serde_json::json!(flatness_metric(&result));
        std::fs::write(
            cfg.out_dir.join(format!("{stem}_meta.json")),
            serde_json::to_string_pretty(&meta)?,
        )?;

        let sets = iso_density_levels(&result, &fractions)?;
        let mut contours = Report::new("shapes (contours)", &cfg.echo_lines(), &design, &[], started);
        contours.push_line("fraction,polyline,vertex,rho_m,z_m");
        for set in sets {
            for (pid, line) in set.polylines.iter().enumerate() {
                for (vid, (rho, z)) in line.iter().enumerate() {
                    contours.push_line(&format!(
                        "{},{pid},{vid},{rho:.9e},{z:.9e}",
                        set.fraction
                    ));
                }
            }
        }
        contours.write(&cfg.out_dir.join(format!("{stem}_contours.csv")))?;
    }
    Ok(0)
}

/// Validate a species document and print the derived single-atom quantities.
pub fn species_check(cfg: &Resolved) -> Result<usize> {
    let sp = &cfg.species;
    println!("species source: {}", cfg.species_source);
    println!("  mass            = {:.8e} kg", sp.mass);
    println!(
        "  gamma_s         = 2 pi x {:.6e} Hz",
        sp.gamma_s / (2.0 * std::f64::consts::PI)
    );
    println!("  i_sat           = {:.4} W/m^2", sp.i_sat);
    println!("  a_s             = {:.4} nm", sp.a_s * 1e9);
    println!("  lambda0         = {:.4} nm", sp.lambda0 * 1e9);
    println!("derived:");
    println!(
        "  g               = {:.6e} J m^3 (4 pi hbar^2 a_s / m)",
        sp.interaction_strength()
    );
    println!(
        "  recoil temp     = {:.2} nK",
        lgtrap::heating::recoil_temperature(sp) * 1e9
    );
    println!(
        "  laser lambda    = {:.4} nm at detuning 2 pi x {:.3} THz",
        sp.laser_wavelength(cfg.detuning) * 1e9,
        cfg.detuning / (2.0 * std::f64::consts::PI * 1e12)
    );
    Ok(0)
}
