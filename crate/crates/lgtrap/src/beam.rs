//! Laguerre-Gaussian beam profiles and the dipole potentials they create.
//!
//! Only LG modes with radial index p = 0 are modeled; the intensity of such a
//! mode is a single bright ring around a dark axis. Blue detuning makes the
//! ring a repulsive barrier, so atoms are trapped in the dark core where the
//! potential grows like rho^(2 ell).

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::special::ln_factorial;
use crate::species::AtomSpecies;

/// One Laguerre-Gaussian beam (p = 0 mode), SI units.
///
/// The waist is treated as constant along the propagation axis; this holds
/// well inside the Rayleigh range, which [`LgBeam::rayleigh_range`] exposes so
/// callers can emit validity warnings.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LgBeam {
    /// Azimuthal mode index (>= 1).
    pub ell: u32,
    /// Beam power, W.
    pub power: f64,
    /// Beam waist radius, m.
    pub waist: f64,
    /// Blue detuning from the atomic transition, rad/s (> 0).
    pub detuning: f64,
    /// Radiation wavelength, m.
    pub wavelength: f64,
}

impl LgBeam {
    pub fn new(ell: u32, power: f64, waist: f64, detuning: f64, wavelength: f64) -> Result<Self> {
        if ell < 1 {
            return Err(Error::InvalidValue {
                name: "ell",
                value: ell as f64,
                reason: "azimuthal index must be >= 1 (hollow modes only)",
            });
        }
        for (name, value) in [
            ("power", power),
            ("waist", waist),
            ("detuning", detuning),
            ("wavelength", wavelength),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositive { name, value });
            }
        }
        Ok(LgBeam {
            ell,
            power,
            waist,
            detuning,
            wavelength,
        })
    }

    /// Intensity profile I(rho), W/m^2, evaluated in log-space so that large
    /// mode indices (up to ell = 64) neither overflow nor lose the factorial.
    pub fn intensity(&self, rho: f64) -> Result<f64> {
        if rho < 0.0 {
            return Err(Error::InvalidValue {
                name: "rho",
                value: rho,
                reason: "radial coordinate must be >= 0",
            });
        }
        if rho == 0.0 {
            return Ok(0.0);
        }
        let ell = self.ell as f64;
        let u = 2.0 * rho * rho / (self.waist * self.waist);
        let ln_i = (2.0 / std::f64::consts::PI).ln() - ln_factorial(self.ell)
            + (self.power / (self.waist * self.waist)).ln()
            + ell * u.ln()
            - u;
        Ok(ln_i.exp())
    }

    /// Maximum intensity of the ring, W/m^2.
    pub fn peak_intensity(&self) -> f64 {
        let ell = self.ell as f64;
        let ln_i = (2.0 / std::f64::consts::PI).ln() + ell * ell.ln() - ln_factorial(self.ell)
            - ell
            + (self.power / (self.waist * self.waist)).ln();
        ln_i.exp()
    }

    /// Radius of maximal intensity rho_0 = w_0 sqrt(ell / 2), m.
    pub fn ring_radius(&self) -> f64 {
        self.waist * (self.ell as f64 / 2.0).sqrt()
    }

    /// Rayleigh range z_R = pi w_0^2 / lambda, m.
    pub fn rayleigh_range(&self) -> f64 {
        std::f64::consts::PI * self.waist * self.waist / self.wavelength
    }

    /// Blue-detuned dipole potential V(rho) = hbar Gamma^2 I(rho) / (8 delta I_sat), J.
    pub fn dipole_potential(&self, sp: &AtomSpecies, rho: f64) -> Result<f64> {
        Ok(self.dipole_prefactor(sp) * self.intensity(rho)?)
    }

    /// Height of the ring barrier, J.
    pub fn barrier_height(&self, sp: &AtomSpecies) -> f64 {
        self.dipole_prefactor(sp) * self.peak_intensity()
    }

    /// hbar Gamma^2 / (8 delta I_sat): converts intensity to potential.
    fn dipole_prefactor(&self, sp: &AtomSpecies) -> f64 {
        HBAR * sp.gamma_s * sp.gamma_s / (8.0 * self.detuning * sp.i_sat)
    }

    /// Leading power-law coefficient U such that V(rho) ~= U rho^(2 ell) near
    /// the axis, J/m^(2 ell).
    pub fn powerlaw_coefficient(&self, sp: &AtomSpecies) -> f64 {
        let ell = self.ell as f64;
        let ln_u = ell * 2f64.ln() - (4.0 * std::f64::consts::PI).ln() - ln_factorial(self.ell)
            + (HBAR * sp.gamma_s * sp.gamma_s).ln()
            - self.detuning.ln()
            - sp.i_sat.ln()
            + self.power.ln()
            - (2.0 * ell + 2.0) * self.waist.ln();
        ln_u.exp()
    }

    /// Invert [`Self::powerlaw_coefficient`]: the waist a beam of this mode
    /// index, power and detuning needs to produce the coefficient `u`, m.
    pub fn waist_for_coefficient(
        ell: u32,
        power: f64,
        detuning: f64,
        u: f64,
        sp: &AtomSpecies,
    ) -> f64 {
        let ellf = ell as f64;
        let ln_num = ellf * 2f64.ln() - (4.0 * std::f64::consts::PI).ln() - ln_factorial(ell)
            + (HBAR * sp.gamma_s * sp.gamma_s).ln()
            - detuning.ln()
            - sp.i_sat.ln()
            + power.ln();
        ((ln_num - u.ln()) / (2.0 * ellf + 2.0)).exp()
    }
}
