//! Shared oracle machinery for the integration suites: seeded Monte Carlo
//! estimators, quadratures and brute-force series, all independent of the
//! library code paths they check.

use lgtrap::constants::{H_PLANCK, KB};
use lgtrap::special::bose_g;
use lgtrap::thermo::thermal_wavelength;
use lgtrap::{AtomSpecies, LgBeam, PowerLawTrap};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Monte Carlo estimate of the volume where V(rho, z) <= eps, with its
/// one-sigma error, by uniform sampling of the bounding box.
pub fn mc_trap_volume(trap: &PowerLawTrap, eps: f64, samples: u64, seed: u64) -> (f64, f64) {
    let (r, z) = trap.half_widths(eps);
    let vbox = (2.0 * r) * (2.0 * r) * (2.0 * z);
    let mut rng = rng(seed);
    let mut hits = 0u64;
    for _ in 0..samples {
        let x = rng.gen_range(-r..r);
        let y = rng.gen_range(-r..r);
        let zz = rng.gen_range(-z..z);
        let rho = (x * x + y * y).sqrt();
        if trap.potential(rho, zz) <= eps {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let sigma = vbox * (p * (1.0 - p) / samples as f64).sqrt();
    (vbox * p, sigma)
}

/// Semiclassical state count N(eps) (states below energy eps) by 6-D
/// phase-space Monte Carlo; returns counts at eps - d and eps + d estimated
/// with common samples so the difference is low-variance.
pub fn mc_state_counts(
    trap: &PowerLawTrap,
    mass: f64,
    eps: f64,
    d: f64,
    samples: u64,
    seed: u64,
) -> (f64, f64) {
    let hi = eps + d;
    let (r, z) = trap.half_widths(hi);
    let pmax = (2.0 * mass * hi).sqrt();
    let vbox = (2.0 * r) * (2.0 * r) * (2.0 * z) * (2.0 * pmax).powi(3);
    let mut rng = rng(seed);
    let (mut hits_lo, mut hits_hi) = (0u64, 0u64);
    for _ in 0..samples {
        let x = rng.gen_range(-r..r);
        let y = rng.gen_range(-r..r);
        let zz = rng.gen_range(-z..z);
        let px = rng.gen_range(-pmax..pmax);
        let py = rng.gen_range(-pmax..pmax);
        let pz = rng.gen_range(-pmax..pmax);
        let rho = (x * x + y * y).sqrt();
        let e = (px * px + py * py + pz * pz) / (2.0 * mass) + trap.potential(rho, zz);
        if e <= eps + d {
            hits_hi += 1;
            if e <= eps - d {
                hits_lo += 1;
            }
        }
    }
    let scale = vbox / H_PLANCK.powi(3) / samples as f64;
    (hits_lo as f64 * scale, hits_hi as f64 * scale)
}

/// Composite Simpson rule on [a, b] with n panels (n even).
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n >= 2 && n % 2 == 0);
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Local-density thermal density n(rho, z) at fugacity f = exp(mu / kB T).
pub fn lda_density(trap: &PowerLawTrap, mass: f64, t: f64, mu: f64, rho: f64, z: f64) -> f64 {
    let lam = thermal_wavelength(t, mass).unwrap();
    let kt = KB * t;
    let zeff = ((mu - trap.potential(rho, z)) / kt).exp();
    bose_g(1.5, zeff.min(1.0)).unwrap() / lam.powi(3)
}

/// Quadrature evaluation of the averaged intensity
/// <I> = Int n(r) I(r) d^3 r / Int n(r) d^3 r with the power-law intensity
/// I = U rho^(2 ell) * 8 delta I_sat / (hbar Gamma^2) of the trapping beam.
pub fn quad_average_intensity(
    trap: &PowerLawTrap,
    beam: &LgBeam,
    sp: &AtomSpecies,
    t: f64,
    mu: f64,
) -> f64 {
    use lgtrap::constants::HBAR;
    let kt = KB * t;
    let x_cut = 45.0 * kt;
    let (rmax, zmax) = trap.half_widths(x_cut);
    let intensity_coef =
        trap.u_perp * 8.0 * beam.detuning * sp.i_sat / (HBAR * sp.gamma_s * sp.gamma_s);
    let n = 400;

    let number_z = |rho: f64| {
        simpson(
            |z| lda_density(trap, sp.mass, t, mu, rho, z),
            0.0,
            zmax,
            n,
        )
    };
    let weighted_z = |rho: f64| {
        simpson(
            |z| {
                lda_density(trap, sp.mass, t, mu, rho, z)
                    * intensity_coef
                    * rho.powi(2 * beam.ell as i32)
            },
            0.0,
            zmax,
            n,
        )
    };
    let denom = simpson(|rho| rho * number_z(rho), 0.0, rmax, n);
    let numer = simpson(|rho| rho * weighted_z(rho), 0.0, rmax, n);
    numer / denom
}

/// 2-D cylindrical quadrature of f(rho, z) * 2 pi rho over [0, rmax] x
/// [-zmax, zmax] (Simpson in both directions).
pub fn cyl_integral(f: impl Fn(f64, f64) -> f64 + Copy, rmax: f64, zmax: f64, n: usize) -> f64 {
    let inner = |rho: f64| simpson(|z| f(rho, z), -zmax, zmax, n);
    2.0 * std::f64::consts::PI * simpson(|rho| rho * inner(rho), 0.0, rmax, n)
}
