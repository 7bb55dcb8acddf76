//! Acceptance suite: every shipped guarantee runs here at its stated
//! tolerance and prints one PASS/FAIL line with the measured numbers.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the report.

mod common;

use std::time::Instant;

use common::{mc_trap_volume, quad_average_intensity, rng};
use lgtrap::constants::{HBAR, KB};
use lgtrap::gpe::{flatness_metric, solve_ground_state, CylGrid};
use lgtrap::heating::{average_intensity_3dlg, heating_rate, scattering_rate, ThermalCloud};
use lgtrap::kinetics::{growth_coefficient, growth_rate, simulate_growth, GrowthParams};
use lgtrap::levels::{level_populations_1d, numeric_spectrum_1d, spectrum_1d, TrapOrder};
use lgtrap::special::bose_g;
use lgtrap::thermo::{eos_total_number, tc_ideal, tc_interacting, TcCorrectionCoefficients};
use lgtrap::trap::{build_configuration, required_waist, BeamRole, TrapKind};
use lgtrap::{AtomSpecies, PowerLawTrap};
use rand::Rng;

const N_ATOMS: f64 = 1e6;
const VC: f64 = 5.3e-15; // m^3
const POWER: f64 = 5.0; // W
const DETUNING: f64 = 2.0 * std::f64::consts::PI * 10e12; // rad/s

fn rb() -> &'static AtomSpecies {
    AtomSpecies::rb87()
}

struct Criterion {
    id: u32,
    name: &'static str,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn new(id: u32, name: &'static str) -> Self {
        Criterion {
            id,
            name,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: String) {
        if ok {
            self.notes.push(detail);
        } else {
            self.failures.push(detail);
        }
    }

    fn finish(self) {
        let status = if self.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        let mut parts = self.failures.clone();
        parts.extend(self.notes.iter().cloned());
        println!(
            "ACCEPTANCE {:>2} [{}] {}: {}",
            self.id,
            status,
            self.name,
            parts.join("; ")
        );
        assert!(
            self.failures.is_empty(),
            "criterion {} failed: {}",
            self.id,
            self.failures.join("; ")
        );
    }
}

fn within(value: f64, target: f64, rel: f64) -> bool {
    (value - target).abs() <= rel * target.abs()
}

#[test]
fn criterion_1_transition_temperature() {
    let start = Instant::now();
    let mut c = Criterion::new(1, "transition temperature");
    let coeffs = TcCorrectionCoefficients::shipped();

    let est1 = {
        let cfg = build_configuration(TrapKind::ThreeDLg, 1, rb(), N_ATOMS, VC).unwrap();
        tc_interacting(&cfg.trap, N_ATOMS, rb(), coeffs).unwrap()
    };
    let est6 = {
        let cfg = build_configuration(TrapKind::ThreeDLg, 6, rb(), N_ATOMS, VC).unwrap();
        tc_interacting(&cfg.trap, N_ATOMS, rb(), coeffs).unwrap()
    };

    c.check(
        within(est1.tc, 360e-9, 0.05),
        format!("Tc(l=1) = {:.1} nK (target 360 +- 5%)", est1.tc * 1e9),
    );
    c.check(
        within(est6.tc, 530e-9, 0.05),
        format!("Tc(l=6) = {:.1} nK (target 530 +- 5%)", est6.tc * 1e9),
    );
    c.check(
        within(est1.tc0, 360e-9, 0.10) && within(est6.tc0, 530e-9, 0.10),
        format!(
            "ideal Tc0 = {:.1} / {:.1} nK (within 10% of targets)",
            est1.tc0 * 1e9,
            est6.tc0 * 1e9
        ),
    );
    let dt = start.elapsed().as_secs_f64();
    c.check(dt < 1.0, format!("runtime {dt:.3} s (< 1 s)"));
    c.finish();
}

#[test]
fn criterion_2_tc_exponent_law() {
    let start = Instant::now();
    let mut c = Criterion::new(2, "Tc0 exponent law");
    for (alpha, beta) in [(2u32, 2u32), (12, 12)] {
        let trap = PowerLawTrap::new(alpha, beta, 2e-20, 2e-20).unwrap();
        let eta = trap.shape_eta();
        // least-squares slope of ln Tc0 vs ln N over N in [1e4, 1e8]
        let pts: Vec<(f64, f64)> = (0..=16)
            .map(|i| {
                let n = 10f64.powf(4.0 + 0.25 * i as f64);
                (n.ln(), tc_ideal(&trap, n, rb().mass).ln())
            })
            .collect();
        let n = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let (sxx, sxy) = pts
            .iter()
            .fold((0.0, 0.0), |a, p| (a.0 + p.0 * p.0, a.1 + p.0 * p.1));
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let expected = 1.0 / (eta + 1.0);
        c.check(
            (slope - expected).abs() < 1e-4,
            format!("slope({alpha},{beta}) = {slope:.6} (expected {expected:.6})"),
        );
    }
    let dt = start.elapsed().as_secs_f64();
    c.check(dt < 1.0, format!("runtime {dt:.3} s (< 1 s)"));
    c.finish();
}

#[test]
fn criterion_3_growth_kinetics() {
    let start = Instant::now();
    let mut c = Criterion::new(3, "growth kinetics");
    let coeffs = TcCorrectionCoefficients::shipped();

    let time_for = |kind: TrapKind, ell: u32| -> f64 {
        let cfg = build_configuration(kind, ell, rb(), N_ATOMS, VC).unwrap();
        let params =
            GrowthParams::for_condensed_fraction(cfg.trap, rb(), N_ATOMS, 0.1, coeffs).unwrap();
        simulate_growth(&params, 5.0)
            .unwrap()
            .condensation_time()
            .unwrap()
    };

    let t1: Vec<f64> = TrapKind::ALL.iter().map(|&k| time_for(k, 1)).collect();
    let spread = t1
        .iter()
        .map(|t| (t - t1[0]).abs() / t1[0])
        .fold(0.0f64, f64::max);
    c.check(
        spread < 1e-6,
        format!("l=1 times agree across configurations to {spread:.1e} (< 1e-6)"),
    );
    c.check(
        within(t1[0], 0.3, 0.3),
        format!("t_cond(l=1) = {:.3} s (target 0.3 +- 30%)", t1[0]),
    );

    let t6 = time_for(TrapKind::ThreeDLg, 6);
    c.check(
        within(t6, 0.035, 0.3),
        format!("t_cond(l=6, 3D) = {:.1} ms (target 35 +- 30%)", t6 * 1e3),
    );
    c.check(
        t1[0] / t6 >= 5.0,
        format!("speed-up l=1 -> l=6 = {:.2} (>= 5)", t1[0] / t6),
    );
    let dt = start.elapsed().as_secs_f64();
    c.check(dt < 10.0, format!("runtime {dt:.2} s (< 10 s)"));
    c.finish();
}

#[test]
fn criterion_4_scattering_and_heating() {
    let start = Instant::now();
    let mut c = Criterion::new(4, "photon scattering and heating");
    let t_cloud = 1e-6;
    let mut rates = Vec::new();
    for ell in 1..=6u32 {
        let cfg = build_configuration(TrapKind::ThreeDLg, ell, rb(), N_ATOMS, VC).unwrap();
        let beam = required_waist(&cfg, POWER, DETUNING, rb()).unwrap()[0].beam;
        let cloud = ThermalCloud::new(cfg.trap, N_ATOMS, t_cloud, rb().mass).unwrap();
        let avg = average_intensity_3dlg(&cloud, &beam, rb()).unwrap();
        rates.push(scattering_rate(avg, rb(), DETUNING));
    }
    let in_band = rates.iter().all(|&r| (2e-3..=1e-1).contains(&r));
    c.check(
        in_band,
        format!(
            "eta_sc(l=1..6) = [{}] 1/s within [2e-3, 1e-1]",
            rates
                .iter()
                .map(|r| format!("{r:.3e}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );
    c.check(
        rates.windows(2).all(|w| w[1] < w[0]),
        "eta_sc strictly decreasing in l".to_string(),
    );
    let heats: Vec<f64> = rates.iter().map(|&r| heating_rate(r, rb())).collect();
    c.check(
        heats.iter().all(|&h| (0.5e-9..=60e-9).contains(&h)),
        format!(
            "heating rates {:.2} .. {:.2} nK/s within [0.5, 60]",
            heats.last().unwrap() * 1e9,
            heats[0] * 1e9
        ),
    );
    let dt = start.elapsed().as_secs_f64();
    c.check(dt < 1.0, format!("runtime {dt:.3} s (< 1 s)"));
    c.finish();
}

#[test]
fn criterion_5_required_waists() {
    let start = Instant::now();
    let mut c = Criterion::new(5, "required waists and ring sizes");
    let mut min_ring = f64::INFINITY;
    let mut min_waist = f64::INFINITY;
    let mut monotone = true;
    for kind in TrapKind::ALL {
        let pl_role = match kind {
            TrapKind::OneDLg => BeamRole::LightSheet,
            _ => BeamRole::Circular,
        };
        let mut prev_ring = f64::INFINITY;
        for ell in 1..=6u32 {
            let cfg = build_configuration(kind, ell, rb(), N_ATOMS, VC).unwrap();
            let reqs = required_waist(&cfg, POWER, DETUNING, rb()).unwrap();
            for r in &reqs {
                min_ring = min_ring.min(r.ring_radius);
                min_waist = min_waist.min(r.beam.waist);
            }
            let pl = reqs.iter().find(|r| r.role == pl_role).unwrap();
            monotone &= pl.ring_radius < prev_ring;
            prev_ring = pl.ring_radius;
        }
    }
    c.check(
        min_ring >= 35e-6,
        format!("min ring radius = {:.1} um (>= 35)", min_ring * 1e6),
    );
    c.check(
        min_waist >= 20e-6,
        format!("min waist = {:.1} um (>= 20)", min_waist * 1e6),
    );
    c.check(monotone, "ring radius decreasing in l".to_string());
    let dt = start.elapsed().as_secs_f64();
    c.check(dt < 1.0, format!("runtime {dt:.3} s (< 1 s)"));
    c.finish();
}

#[test]
fn criterion_6_gpe_solver() {
    let mut c = Criterion::new(6, "Gross-Pitaevskii ground states");
    let sp = rb();
    let g = sp.interaction_strength();

    // (a) non-interacting isotropic harmonic trap on a 128 x 256 grid
    let cfg1 = build_configuration(TrapKind::ThreeDLg, 1, sp, N_ATOMS, VC).unwrap();
    let omega = (2.0 * cfg1.trap.u_perp / sp.mass).sqrt();
    let a_ho = (HBAR / (sp.mass * omega)).sqrt();
    let grid_a = CylGrid::new(3.6 * a_ho, 3.6 * a_ho, 128, 256).unwrap();
    let res_a = solve_ground_state(&cfg1.trap, 0.0, sp, grid_a, 1e-6).unwrap();
    let mu_exact = 1.5 * HBAR * omega;
    c.check(
        within(res_a.mu_c, mu_exact, 1e-4),
        format!(
            "(a) g=0 harmonic mu = {:.6e} J vs 1.5 hbar omega (rel {:.1e}, tol 1e-4)",
            res_a.mu_c,
            (res_a.mu_c - mu_exact).abs() / mu_exact
        ),
    );

    // (b) Thomas-Fermi regime at the two 3D working points, 256 x 512
    let mut results = Vec::new();
    for ell in [1u32, 6] {
        let cfg = build_configuration(TrapKind::ThreeDLg, ell, sp, N_ATOMS, VC).unwrap();
        let mu_tf = cfg.trap.mu_thomas_fermi(N_ATOMS, g).unwrap();
        let grid = CylGrid::sized_for(&cfg.trap, mu_tf, 1.6, 256, 512).unwrap();
        let t_solve = Instant::now();
        let res = solve_ground_state(&cfg.trap, N_ATOMS, sp, grid, 1e-6).unwrap();
        let dt_solve = t_solve.elapsed().as_secs_f64();
        c.check(
            within(res.mu_c, mu_tf, 0.02),
            format!(
                "(b) l={ell} mu_c = {:.4e} J vs TF {:.4e} J (rel {:.2e}, tol 2%)",
                res.mu_c,
                mu_tf,
                (res.mu_c - mu_tf).abs() / mu_tf
            ),
        );
        c.check(
            dt_solve < 300.0,
            format!("(b) l={ell} 256x512 solve took {dt_solve:.1} s (< 300 s)"),
        );
        results.push((ell, cfg, res));
    }

    // (c) energy non-increasing across accepted steps
    let monotone = results.iter().all(|(_, _, r)| {
        r.energy_trace
            .windows(2)
            .all(|w| w[1] <= w[0] * (1.0 + 1e-12))
    });
    c.check(monotone, "(c) energy monotone per step".to_string());

    // (d) grid-doubling moves mu_c by < 0.2%
    for (ell, cfg, res) in &results {
        let mu_tf = cfg.trap.mu_thomas_fermi(N_ATOMS, g).unwrap();
        let grid = CylGrid::sized_for(&cfg.trap, mu_tf, 1.6, 512, 1024).unwrap();
        let fine = solve_ground_state(&cfg.trap, N_ATOMS, sp, grid, 1e-6).unwrap();
        let shift = (fine.mu_c - res.mu_c).abs() / res.mu_c;
        c.check(
            shift < 0.002,
            format!("(d) l={ell} grid doubling moves mu_c by {shift:.2e} (< 2e-3)"),
        );
    }

    // (e) flatness of the core region
    let flat1 = flatness_metric(&results[0].2);
    let flat6 = flatness_metric(&results[1].2);
    c.check(
        flat6 < 0.15,
        format!("(e) flatness(l=6) = {flat6:.3} (< 0.15)"),
    );
    c.check(
        flat1 > 0.3,
        format!("(e) flatness(l=1) = {flat1:.3} (> 0.3)"),
    );
    c.finish();
}

#[test]
fn criterion_7_oracle_equivalences() {
    let start = Instant::now();
    let mut c = Criterion::new(7, "oracle equivalences");
    let sp = rb();

    // trap volume vs seeded Monte Carlo, 12 random traps, 0.5%
    let mut seed_rng = rng(11_000);
    let exps = [2u32, 4, 8, 12];
    let mut worst = 0.0f64;
    for case in 0..12 {
        let alpha = exps[seed_rng.gen_range(0..exps.len())];
        let beta = exps[seed_rng.gen_range(0..exps.len())];
        let eps = 1e-30;
        let r = 10f64.powf(seed_rng.gen_range(-5.7..-4.5));
        let z = 10f64.powf(seed_rng.gen_range(-5.7..-4.5));
        let trap = PowerLawTrap::new(
            alpha,
            beta,
            eps / r.powi(alpha as i32),
            eps / z.powi(beta as i32),
        )
        .unwrap();
        let analytic = trap.trap_volume(eps).unwrap();
        let (mc, _) = mc_trap_volume(&trap, eps, 10_000_000, 31_000 + case);
        worst = worst.max((mc - analytic).abs() / analytic);
    }
    c.check(
        worst < 5e-3,
        format!("trap volume vs MC: worst of 12 traps {worst:.2e} (< 5e-3)"),
    );

    // tc_ideal vs equation-of-state bisection, 20 random traps, 1e-8
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let alpha = exps[seed_rng.gen_range(0..exps.len())];
        let beta = exps[seed_rng.gen_range(0..exps.len())];
        let eps = 1e-30;
        let r = 10f64.powf(seed_rng.gen_range(-5.7..-4.5));
        let z = 10f64.powf(seed_rng.gen_range(-5.7..-4.5));
        let trap = PowerLawTrap::new(
            alpha,
            beta,
            eps / r.powi(alpha as i32),
            eps / z.powi(beta as i32),
        )
        .unwrap();
        let n_target = 10f64.powf(seed_rng.gen_range(5.0..7.0));
        let tc = tc_ideal(&trap, n_target, sp.mass);
        let (mut lo, mut hi) = (0.05 * tc, 20.0 * tc);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if eos_total_number(&trap, mid, 0.0, sp.mass).unwrap() < n_target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        worst = worst.max((0.5 * (lo + hi) - tc).abs() / tc);
    }
    c.check(
        worst < 1e-8,
        format!("tc_ideal vs EOS bisection: worst of 20 traps {worst:.1e} (< 1e-8)"),
    );

    // averaged intensity closed form vs quadrature on a 3x3 (T, N) grid, 0.5%
    let cfg = build_configuration(TrapKind::ThreeDLg, 2, sp, N_ATOMS, VC).unwrap();
    let beam = required_waist(&cfg, POWER, DETUNING, sp).unwrap()[0].beam;
    let mut worst = 0.0f64;
    for t in [0.8e-6, 1.0e-6, 1.3e-6] {
        for n in [3e5, 1e6, 3e6] {
            let cloud = ThermalCloud::new(cfg.trap, n, t, sp.mass).unwrap();
            let closed = average_intensity_3dlg(&cloud, &beam, sp).unwrap();
            let quad = quad_average_intensity(&cfg.trap, &beam, sp, t, cloud.mu);
            worst = worst.max((closed - quad).abs() / quad);
        }
    }
    c.check(
        worst < 5e-3,
        format!("averaged intensity vs quadrature: worst of 9 points {worst:.2e} (< 5e-3)"),
    );

    // adaptive growth-rate truncation vs 1e4-term brute force, 1e-10
    let coeffs = TcCorrectionCoefficients::shipped();
    let params =
        GrowthParams::for_condensed_fraction(cfg.trap, sp, N_ATOMS, 0.1, coeffs).unwrap();
    let kt = KB * params.temperature;
    let mut worst = 0.0f64;
    for frac in [0.0, 0.25, 0.6, 0.95] {
        let n_c = frac * params.n_eq;
        let adaptive = growth_rate(&params, n_c);
        let phi = params.phi();
        let big_l = (1.0 - phi).ln();
        let x = ((params.mu_tf(n_c) - params.mu_bath) / kt).min(0.0);
        let mut acc = big_l * big_l;
        let mut inner = big_l;
        let mut phi_pow = 1.0;
        for p in 1..=10_000u64 {
            phi_pow *= phi;
            inner += phi_pow / p as f64;
            acc += inner * inner * (x * p as f64).exp();
        }
        let brute = growth_coefficient(params.temperature, &params.species) * acc;
        worst = worst.max((adaptive - brute).abs() / brute);
    }
    c.check(
        worst < 1e-10,
        format!("growth rate truncation vs brute force: worst {worst:.1e} (< 1e-10)"),
    );

    c.notes
        .push(format!("runtime {:.1} s", start.elapsed().as_secs_f64()));
    c.finish();
}

#[test]
fn criterion_8_special_functions() {
    let mut c = Criterion::new(8, "Bose functions");

    // independently summed zeta references (reverse Kahan sum plus
    // Euler-Maclaurin tail)
    fn zeta_brute(s: f64, terms: u64) -> f64 {
        let mut acc = 0.0f64;
        let mut comp = 0.0f64;
        for k in (1..=terms).rev() {
            let term = (k as f64).powf(-s) - comp;
            let t = acc + term;
            comp = (t - acc) - term;
            acc = t;
        }
        let kf = terms as f64;
        acc + kf.powf(1.0 - s) / (s - 1.0) - 0.5 * kf.powf(-s)
            + s / 12.0 * kf.powf(-s - 1.0)
    }

    for (s, terms) in [(1.5, 100_000_000u64), (2.0, 10_000_000), (2.5, 1_000_000), (3.0, 1_000_000)]
    {
        let reference = if s == 2.0 {
            std::f64::consts::PI * std::f64::consts::PI / 6.0
        } else {
            zeta_brute(s, terms)
        };
        let value = bose_g(s, 1.0).unwrap();
        c.check(
            (value - reference).abs() < 1e-10 * reference,
            format!("g_{s}(1) = {value:.12} vs reference {reference:.12}"),
        );
    }

    let mut worst = 0.0f64;
    for i in 0..=99 {
        let z = i as f64 / 100.0;
        let expected = -(-z).ln_1p();
        worst = worst.max((bose_g(1.0, z).unwrap() - expected).abs());
    }
    c.check(
        worst < 1e-12,
        format!("g_1(z) vs -ln(1-z) on [0, 0.99]: worst abs dev {worst:.1e} (< 1e-12)"),
    );
    c.finish();
}

#[test]
fn criterion_9_level_populations() {
    let mut c = Criterion::new(9, "1D level populations");

    // numeric harmonic spectrum against the analytic ladder
    let numeric = numeric_spectrum_1d(1, 10).unwrap();
    let worst = numeric
        .iter()
        .enumerate()
        .map(|(n, e)| (e - (n as f64 + 0.5)).abs())
        .fold(0.0f64, f64::max);
    c.check(
        worst < 1e-6,
        format!("harmonic eigenvalues numeric vs analytic: worst {worst:.1e} hbar omega"),
    );

    // box spectrum follows the (n+1)^2 ladder exactly
    let spec = spectrum_1d(TrapOrder::Box, 8).unwrap();
    let c_box = std::f64::consts::PI * std::f64::consts::PI / 8.0;
    let worst = spec
        .energies
        .iter()
        .enumerate()
        .map(|(n, e)| (e - c_box * ((n + 1) as f64).powi(2)).abs())
        .fold(0.0f64, f64::max);
    c.check(
        worst < 1e-6,
        format!("box eigenvalues vs (n+1)^2 ladder: worst {worst:.1e} hbar omega"),
    );

    // ground-level fraction strictly increases along l = 1, 3, 6, box
    let orders = [
        TrapOrder::Power(1),
        TrapOrder::Power(3),
        TrapOrder::Power(6),
        TrapOrder::Box,
    ];
    let fracs: Vec<f64> = orders
        .iter()
        .map(|&o| {
            level_populations_1d(o, 2.0, 16, 100.0)
                .unwrap()
                .ground_fraction()
        })
        .collect();
    c.check(
        fracs.windows(2).all(|w| w[1] > w[0]),
        format!(
            "ground fraction along l = 1, 3, 6, box: {}",
            fracs
                .iter()
                .map(|f| format!("{f:.3}"))
                .collect::<Vec<_>>()
                .join(" -> ")
        ),
    );
    c.finish();
}
