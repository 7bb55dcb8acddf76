//! Bose-gas thermodynamics in a power-law trap: thermal wavelength, density
//! of states, equation of state, and the ideal and interaction-corrected
//! condensation temperatures.

use std::path::Path;
use std::sync::OnceLock;

use crate::constants::{H_PLANCK, HBAR, KB};
use crate::error::{Error, Result};
use crate::special::{bose_g, gamma, interp_linear, zeta};
use crate::species::AtomSpecies;
use crate::trap::PowerLawTrap;

/// Shipped shift-coefficient table (see `data/tc_shift_coefficients.dat`).
const SHIPPED_COEFFICIENTS: &str = include_str!("../data/tc_shift_coefficients.dat");

/// Thermal de Broglie wavelength lambda_T = h / sqrt(2 pi m kB T), m.
pub fn thermal_wavelength(t: f64, mass: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonPositive {
            name: "temperature",
            value: t,
        });
    }
    Ok(H_PLANCK / (2.0 * std::f64::consts::PI * mass * KB * t).sqrt())
}

/// Peak density at the onset of condensation, zeta(3/2) / lambda_T^3, m^-3.
pub fn peak_density_onset(t: f64, mass: f64) -> Result<f64> {
    let lam = thermal_wavelength(t, mass)?;
    Ok(zeta(1.5) / (lam * lam * lam))
}

/// Semiclassical density of states
/// g(eps) = m^(3/2) C_ab eps^eta / (hbar^3 sqrt(2 pi) Gamma(eta + 1)), 1/J.
pub fn density_of_states(trap: &PowerLawTrap, epsilon: f64, mass: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::NonPositive {
            name: "epsilon",
            value: epsilon,
        });
    }
    let eta = trap.shape_eta();
    Ok(
        mass.powf(1.5) / (HBAR.powi(3) * (2.0 * std::f64::consts::PI).sqrt())
            * trap.c_alpha_beta()
            / gamma(eta + 1.0)
            * epsilon.powf(eta),
    )
}

/// Total atom number from the equation of state at temperature `t` (K) and
/// chemical potential `mu` (J, <= 0):
///
///   N = f/(1-f) + V_T(kB T) / lambda_T^3 * Gamma(eta + 1/2) * g_(eta+1)(f)
///
/// with fugacity f = exp(mu / kB T). At f = 1 the (divergent) first term is
/// omitted; the condensate is counted separately by callers.
pub fn eos_total_number(trap: &PowerLawTrap, t: f64, mu: f64, mass: f64) -> Result<f64> {
    let f = (mu / (KB * t)).exp();
    if f > 1.0 {
        return Err(Error::InvalidValue {
            name: "mu",
            value: mu,
            reason: "fugacity must stay in (0, 1]",
        });
    }
    let eta = trap.shape_eta();
    let lam = thermal_wavelength(t, mass)?;
    let thermal =
        trap.trap_volume(KB * t)? / lam.powi(3) * gamma(eta + 0.5) * bose_g(eta + 1.0, f)?;
    let condensate = if f < 1.0 { f / (1.0 - f) } else { 0.0 };
    Ok(condensate + thermal)
}

/// Ideal-gas condensation temperature, K:
///
///   kB Tc0 = [ sqrt(2 pi) hbar^3 N / (m^(3/2) C_ab zeta(eta + 1)) ]^(1/(eta+1))
pub fn tc_ideal(trap: &PowerLawTrap, n_atoms: f64, mass: f64) -> f64 {
    let eta = trap.shape_eta();
    let base = (2.0 * std::f64::consts::PI).sqrt() * HBAR.powi(3)
        / (mass.powf(1.5) * trap.c_alpha_beta() * zeta(eta + 1.0));
    (base * n_atoms).powf(1.0 / (eta + 1.0)) / KB
}

/// Tabulated shift coefficients D1(eta), D1'(eta), D2(eta) for the
/// interaction correction to the condensation temperature, interpolated
/// linearly (monotone) in eta.
#[derive(Debug, Clone)]
pub struct TcCorrectionCoefficients {
    etas: Vec<f64>,
    d1: Vec<f64>,
    d1_prime: Vec<f64>,
    d2: Vec<f64>,
}

impl TcCorrectionCoefficients {
    /// The table shipped with the crate (mean-field, local-density
    /// approximation; regenerate with `tools/gen_tc_coefficients.py`).
    pub fn shipped() -> &'static TcCorrectionCoefficients {
        static TABLE: OnceLock<TcCorrectionCoefficients> = OnceLock::new();
        TABLE.get_or_init(|| {
            TcCorrectionCoefficients::from_str_table(SHIPPED_COEFFICIENTS)
                .expect("shipped coefficient table must parse")
        })
    }

    /// Parse a plain-text table: `#` comments, rows of `eta D1 D1' [D2]`.
    /// The missing fourth column defaults to zero.
    pub fn from_str_table(text: &str) -> Result<TcCorrectionCoefficients> {
        let mut etas = Vec::new();
        let mut d1 = Vec::new();
        let mut d1_prime = Vec::new();
        let mut d2 = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<f64> = line
                .split_whitespace()
                .map(|v| {
                    v.parse().map_err(|e| Error::Parse {
                        line: lineno + 1,
                        msg: format!("bad number `{v}`: {e}"),
                    })
                })
                .collect::<Result<_>>()?;
            if cols.len() < 3 || cols.len() > 4 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected 3 or 4 columns, got {}", cols.len()),
                });
            }
            etas.push(cols[0]);
            d1.push(cols[1]);
            d1_prime.push(cols[2]);
            d2.push(cols.get(3).copied().unwrap_or(0.0));
        }
        let table = TcCorrectionCoefficients {
            etas,
            d1,
            d1_prime,
            d2,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<TcCorrectionCoefficients> {
        TcCorrectionCoefficients::from_str_table(&std::fs::read_to_string(path)?)
    }

    fn validate(&self) -> Result<()> {
        if self.etas.len() < 2 {
            return Err(Error::Unsupported(
                "coefficient table needs at least two rows".into(),
            ));
        }
        if !self.etas.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Unsupported(
                "coefficient table must be strictly increasing in eta".into(),
            ));
        }
        if self.etas[0] > 0.5 + 1e-9 || self.etas[self.etas.len() - 1] < 2.0 - 1e-9 {
            return Err(Error::Unsupported(format!(
                "coefficient table must cover eta in [0.5, 2], got [{}, {}]",
                self.etas[0],
                self.etas[self.etas.len() - 1]
            )));
        }
        for v in self.d1.iter().chain(&self.d1_prime).chain(&self.d2) {
            if !v.is_finite() {
                return Err(Error::Unsupported(
                    "coefficient table contains non-finite values".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn d1(&self, eta: f64) -> f64 {
        interp_linear(&self.etas, &self.d1, eta)
    }

    pub fn d1_prime(&self, eta: f64) -> f64 {
        interp_linear(&self.etas, &self.d1_prime, eta)
    }

    pub fn d2(&self, eta: f64) -> f64 {
        interp_linear(&self.etas, &self.d2, eta)
    }

    pub fn len(&self) -> usize {
        self.etas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.etas.is_empty()
    }
}

/// Interaction-corrected condensation temperature and its ingredients.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct TcEstimate {
    /// Corrected condensation temperature, K.
    pub tc: f64,
    /// Ideal-gas condensation temperature, K.
    pub tc0: f64,
    /// Expansion parameter q = a_s / lambda_T(Tc0).
    pub q: f64,
    /// Relative shift (tc - tc0) / tc0.
    pub shift: f64,
}

/// Maximum expansion parameter accepted by [`tc_interacting`].
pub const Q_LIMIT: f64 = 0.1;

/// Condensation temperature with the second-order interaction correction
///
///   Tc = [1 + D1(eta) q + D1'(eta) q^(2 eta) + D2(eta) q^2] Tc0.
///
/// Errors when q = a_s / lambda_T(Tc0) >= 0.1 (outside the perturbative
/// regime the expansion was fitted for).
pub fn tc_interacting(
    trap: &PowerLawTrap,
    n_atoms: f64,
    sp: &AtomSpecies,
    coeffs: &TcCorrectionCoefficients,
) -> Result<TcEstimate> {
    let tc0 = tc_ideal(trap, n_atoms, sp.mass);
    let q = sp.a_s / thermal_wavelength(tc0, sp.mass)?;
    if q >= Q_LIMIT {
        return Err(Error::OutOfRegime { q, limit: Q_LIMIT });
    }
    let eta = trap.shape_eta();
    let shift =
        coeffs.d1(eta) * q + coeffs.d1_prime(eta) * q.powf(2.0 * eta) + coeffs.d2(eta) * q * q;
    Ok(TcEstimate {
        tc: (1.0 + shift) * tc0,
        tc0,
        q,
        shift,
    })
}
