//! Composite power-law traps: geometry, Thomas-Fermi quantities, the three
//! named beam configurations, and inverse problems (solving for trap strengths
//! at fixed condensate volume, and for the beam waists that realize them).
//!
//! The trap potential is `V(rho, z) = U_perp rho^alpha + U_z z^beta` with even
//! exponents. Its shape is captured by `eta = 2/alpha + 1/beta + 1/2`, which
//! runs from 2 (harmonic) down to 1/2 (box limit) and controls the density of
//! states, the condensation temperature and the growth kinetics downstream.

use crate::beam::LgBeam;
use crate::error::{Error, Result};
use crate::special::{gamma, ln_gamma};
use crate::species::AtomSpecies;

/// Shape parameter eta = 2/alpha + 1/beta + 1/2.
pub fn shape_eta(alpha: u32, beta: u32) -> f64 {
    2.0 / alpha as f64 + 1.0 / beta as f64 + 0.5
}

/// The composite power-law potential, SI units.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PowerLawTrap {
    /// Radial exponent (even, >= 2).
    pub alpha: u32,
    /// Axial exponent (even, >= 2).
    pub beta: u32,
    /// Radial strength, J/m^alpha.
    pub u_perp: f64,
    /// Axial strength, J/m^beta.
    pub u_z: f64,
}

impl PowerLawTrap {
    pub fn new(alpha: u32, beta: u32, u_perp: f64, u_z: f64) -> Result<Self> {
        for (name, value) in [("alpha", alpha), ("beta", beta)] {
            if value < 2 || value % 2 != 0 {
                return Err(Error::InvalidValue {
                    name,
                    value: value as f64,
                    reason: "trap exponents must be even integers >= 2",
                });
            }
        }
        for (name, value) in [("u_perp", u_perp), ("u_z", u_z)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositive { name, value });
            }
        }
        Ok(PowerLawTrap {
            alpha,
            beta,
            u_perp,
            u_z,
        })
    }

    /// V(rho, z), J. Even exponents make the sign of z irrelevant.
    pub fn potential(&self, rho: f64, z: f64) -> f64 {
        self.u_perp * rho.powi(self.alpha as i32) + self.u_z * z.powi(self.beta as i32)
    }

    /// Shape parameter eta for this trap.
    pub fn shape_eta(&self) -> f64 {
        shape_eta(self.alpha, self.beta)
    }

    /// Geometric constant C_ab = U_perp^(-2/alpha) U_z^(-1/beta)
    /// Gamma(2/alpha + 1) Gamma(1/beta + 1), in m^3 J^(1/2 - eta).
    ///
    /// Evaluated through log-gamma so large exponents stay stable.
    pub fn c_alpha_beta(&self) -> f64 {
        let (a, b) = (self.alpha as f64, self.beta as f64);
        ((-2.0 / a) * self.u_perp.ln() - (1.0 / b) * self.u_z.ln()
            + ln_gamma(2.0 / a + 1.0)
            + ln_gamma(1.0 / b + 1.0))
        .exp()
    }

    /// Volume of the region V(rho, z) <= epsilon, m^3.
    pub fn trap_volume(&self, epsilon: f64) -> Result<f64> {
        if !(epsilon > 0.0) {
            return Err(Error::NonPositive {
                name: "epsilon",
                value: epsilon,
            });
        }
        let eta = self.shape_eta();
        Ok(2.0 * std::f64::consts::PI * self.c_alpha_beta() / gamma(eta + 0.5)
            * epsilon.powf(eta - 0.5))
    }

    /// Classical turning points (rho, z) of the equipotential at `epsilon`, m.
    pub fn half_widths(&self, epsilon: f64) -> (f64, f64) {
        (
            (epsilon / self.u_perp).powf(1.0 / self.alpha as f64),
            (epsilon / self.u_z).powf(1.0 / self.beta as f64),
        )
    }

    /// Thomas-Fermi chemical potential for `n_c` condensed atoms of
    /// interaction strength `g`, J.
    pub fn mu_thomas_fermi(&self, n_c: f64, g: f64) -> Result<f64> {
        if !(g > 0.0) {
            return Err(Error::InvalidValue {
                name: "g",
                value: g,
                reason: "Thomas-Fermi limit needs repulsive interactions (g > 0)",
            });
        }
        if !(n_c > 0.0) {
            return Err(Error::NonPositive {
                name: "n_c",
                value: n_c,
            });
        }
        let eta = self.shape_eta();
        let base = g * gamma(eta + 1.5) / (2.0 * std::f64::consts::PI * self.c_alpha_beta());
        Ok((base * n_c).powf(2.0 / (2.0 * eta + 1.0)))
    }

    /// Volume of the Thomas-Fermi condensate, m^3: the trap volume enclosed by
    /// the equipotential at mu_TF(n_c).
    pub fn condensate_volume(&self, n_c: f64, g: f64) -> Result<f64> {
        self.trap_volume(self.mu_thomas_fermi(n_c, g)?)
    }
}

/// The three named crossed-beam configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum TrapKind {
    /// Power-law axis from the light sheet, harmonic radial confinement:
    /// (alpha, beta) = (2, 2 ell).
    OneDLg,
    /// Power-law radial confinement from the circular beam, harmonic axis:
    /// (alpha, beta) = (2 ell, 2).
    TwoDLg,
    /// Power law in every direction: alpha = beta = 2 ell, U_perp = U_z.
    ThreeDLg,
}

impl TrapKind {
    pub const ALL: [TrapKind; 3] = [TrapKind::OneDLg, TrapKind::TwoDLg, TrapKind::ThreeDLg];

    /// Trap exponents realized by this configuration at beam index `ell`.
    pub fn exponents(&self, ell: u32) -> (u32, u32) {
        match self {
            TrapKind::OneDLg => (2, 2 * ell),
            TrapKind::TwoDLg => (2 * ell, 2),
            TrapKind::ThreeDLg => (2 * ell, 2 * ell),
        }
    }
}

impl std::fmt::Display for TrapKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TrapKind::OneDLg => "1D_LG",
            TrapKind::TwoDLg => "2D_LG",
            TrapKind::ThreeDLg => "3D_LG",
        })
    }
}

impl std::str::FromStr for TrapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "1d_lg" | "1d" => Ok(TrapKind::OneDLg),
            "2d_lg" | "2d" => Ok(TrapKind::TwoDLg),
            "3d_lg" | "3d" => Ok(TrapKind::ThreeDLg),
            other => Err(Error::Unsupported(format!(
                "unknown trap configuration `{other}` (expected 1d_lg, 2d_lg or 3d_lg)"
            ))),
        }
    }
}

/// A trap configuration tied to the beams that realize it.
///
/// `beams` is empty until [`TrapConfiguration::realize_beams`] is called with
/// concrete laser parameters.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TrapConfiguration {
    pub kind: TrapKind,
    pub ell: u32,
    pub trap: PowerLawTrap,
    pub beams: Vec<LgBeam>,
}

/// How the ratio of harmonic to power-law half-widths is fixed in the 1D and
/// 2D configurations: the harmonic direction is `TIGHTNESS` times tighter at
/// the Thomas-Fermi surface, which reproduces the familiar cigar and disk
/// aspect ratios.
pub const TIGHTNESS: f64 = 5.0;

/// Solve for the trap strengths of configuration `kind` at beam index `ell`
/// such that `n_atoms` condensed atoms occupy exactly `target_vc` (m^3).
///
/// The solve is closed-form: at the Thomas-Fermi surface
/// mu = (eta + 1/2) g N / V_c, and the surface half-widths follow from the
/// target volume and the tightness rule, so u_perp = mu / R^alpha and
/// u_z = mu / Z^beta. Identical inputs give bitwise-identical traps.
pub fn build_configuration(
    kind: TrapKind,
    ell: u32,
    sp: &AtomSpecies,
    n_atoms: f64,
    target_vc: f64,
) -> Result<TrapConfiguration> {
    if ell < 1 {
        return Err(Error::InvalidValue {
            name: "ell",
            value: ell as f64,
            reason: "beam index must be >= 1",
        });
    }
    if !(target_vc > 0.0) {
        return Err(Error::NonPositive {
            name: "target_vc",
            value: target_vc,
        });
    }
    if !(n_atoms >= 1.0) {
        return Err(Error::InvalidValue {
            name: "n_atoms",
            value: n_atoms,
            reason: "need at least one atom",
        });
    }

    let (alpha, beta) = kind.exponents(ell);
    let eta = shape_eta(alpha, beta);
    let g = sp.interaction_strength();
    let mu = (eta + 0.5) * g * n_atoms / target_vc;

    // R^2 Z at the Thomas-Fermi surface from V_T(mu) = target_vc
    let shape_gammas = gamma(2.0 / alpha as f64 + 1.0) * gamma(1.0 / beta as f64 + 1.0);
    let r2z = target_vc * gamma(eta + 0.5) / (2.0 * std::f64::consts::PI * shape_gammas);
    let (r, z) = match kind {
        TrapKind::OneDLg => {
            let z = (TIGHTNESS * TIGHTNESS * r2z).cbrt();
            (z / TIGHTNESS, z)
        }
        TrapKind::TwoDLg => {
            let r = (TIGHTNESS * r2z).cbrt();
            (r, r / TIGHTNESS)
        }
        TrapKind::ThreeDLg => {
            let r = r2z.cbrt();
            (r, r)
        }
    };

    let u_perp = mu / r.powi(alpha as i32);
    let u_z = mu / z.powi(beta as i32);
    let trap = PowerLawTrap::new(alpha, beta, u_perp, u_z)?;

    debug_assert!({
        let vc = trap.condensate_volume(n_atoms, g)?;
        (vc - target_vc).abs() / target_vc < 1e-9
    });

    Ok(TrapConfiguration {
        kind,
        ell,
        trap,
        beams: Vec::new(),
    })
}

/// Which physical beam a requirement refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum BeamRole {
    /// Circularly symmetric beam along z; sets the radial confinement.
    Circular,
    /// Elliptically shaped light sheet along x; sets the axial confinement.
    /// Its waist is obtained with the circular-beam formula and is therefore
    /// an approximation.
    LightSheet,
}

/// The waist and ring radius a beam needs to realize its share of a trap.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BeamRequirement {
    pub role: BeamRole,
    pub beam: LgBeam,
    /// Ring radius rho_0 = w_0 sqrt(ell / 2), m.
    pub ring_radius: f64,
}

/// Invert the power-law coefficient for both beams of a configuration: the
/// circular beam must supply u_perp at mode index alpha/2, the light sheet
/// u_z at mode index beta/2, each at the given power and detuning.
pub fn required_waist(
    config: &TrapConfiguration,
    power: f64,
    detuning: f64,
    sp: &AtomSpecies,
) -> Result<Vec<BeamRequirement>> {
    for (name, value) in [("power", power), ("detuning", detuning)] {
        if !(value > 0.0) {
            return Err(Error::NonPositive { name, value });
        }
    }
    let wavelength = sp.laser_wavelength(detuning);
    let specs = [
        (BeamRole::Circular, config.trap.alpha / 2, config.trap.u_perp),
        (BeamRole::LightSheet, config.trap.beta / 2, config.trap.u_z),
    ];
    specs
        .into_iter()
        .map(|(role, ell, u)| {
            let w0 = LgBeam::waist_for_coefficient(ell, power, detuning, u, sp);
            let beam = LgBeam::new(ell, power, w0, detuning, wavelength)?;
            Ok(BeamRequirement {
                role,
                ring_radius: beam.ring_radius(),
                beam,
            })
        })
        .collect()
}

impl TrapConfiguration {
    /// Attach the beams that realize this trap at the given laser parameters.
    pub fn realize_beams(&mut self, power: f64, detuning: f64, sp: &AtomSpecies) -> Result<()> {
        self.beams = required_waist(self, power, detuning, sp)?
            .into_iter()
            .map(|r| r.beam)
            .collect();
        Ok(())
    }
}
