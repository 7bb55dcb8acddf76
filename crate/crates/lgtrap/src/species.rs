//! Atomic species data and the interaction strength derived from it.
//!
//! Species constants enter every other module only through [`AtomSpecies`];
//! they are loaded from a flat key-value document with explicit unit suffixes
//! so that no hidden constants live elsewhere in the crate.

use std::path::Path;
use std::sync::OnceLock;

use crate::constants::{C_LIGHT, HBAR};
use crate::error::{Error, Result};

/// Shipped Rubidium-87 defaults (D2 line, two-level saturation convention).
const RB87_CONFIG: &str = include_str!("../data/rb87.species");

/// Constants of one atomic species, SI units.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AtomSpecies {
    /// Atomic mass, kg.
    pub mass: f64,
    /// Spontaneous emission rate (natural linewidth as angular frequency), rad/s.
    pub gamma_s: f64,
    /// Saturation intensity, W/m^2.
    pub i_sat: f64,
    /// s-wave scattering length, m.
    pub a_s: f64,
    /// Wavelength of the trapping transition, m.
    pub lambda0: f64,
}

impl AtomSpecies {
    /// The shipped Rubidium-87 defaults.
    pub fn rb87() -> &'static AtomSpecies {
        static RB87: OnceLock<AtomSpecies> = OnceLock::new();
        RB87.get_or_init(|| {
            AtomSpecies::from_config_str(RB87_CONFIG).expect("shipped Rb-87 data must parse")
        })
    }

    /// Parse a species document.
    ///
    /// Expected keys (all five required): `mass_kg`, `gamma_s_over_2pi_Hz`,
    /// `i_sat_W_per_m2`, `a_s_nm`, `lambda0_nm`. Lines starting with `#` and
    /// blank lines are ignored; values use `key = value`.
    pub fn from_config_str(text: &str) -> Result<AtomSpecies> {
        let mut mass = None;
        let mut gamma_s = None;
        let mut i_sat = None;
        let mut a_s = None;
        let mut lambda0 = None;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(Error::Parse {
                line: lineno + 1,
                msg: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            let value: f64 = value.trim().parse().map_err(|e| Error::Parse {
                line: lineno + 1,
                msg: format!("bad number for `{key}`: {e}"),
            })?;
            match key {
                "mass_kg" => mass = Some(value),
                "gamma_s_over_2pi_Hz" => gamma_s = Some(2.0 * std::f64::consts::PI * value),
                "i_sat_W_per_m2" => i_sat = Some(value),
                "a_s_nm" => a_s = Some(value * 1e-9),
                "lambda0_nm" => lambda0 = Some(value * 1e-9),
                other => return Err(Error::UnknownKey(other.to_string())),
            }
        }

        let species = AtomSpecies {
            mass: mass.ok_or_else(|| Error::MissingField("mass_kg".into()))?,
            gamma_s: gamma_s.ok_or_else(|| Error::MissingField("gamma_s_over_2pi_Hz".into()))?,
            i_sat: i_sat.ok_or_else(|| Error::MissingField("i_sat_W_per_m2".into()))?,
            a_s: a_s.ok_or_else(|| Error::MissingField("a_s_nm".into()))?,
            lambda0: lambda0.ok_or_else(|| Error::MissingField("lambda0_nm".into()))?,
        };
        species.validate()?;
        Ok(species)
    }

    /// Load and validate a species document from disk.
    pub fn from_file(path: impl AsRef<Path>) -> Result<AtomSpecies> {
        AtomSpecies::from_config_str(&std::fs::read_to_string(path)?)
    }

    fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("mass", self.mass),
            ("gamma_s", self.gamma_s),
            ("i_sat", self.i_sat),
            ("a_s", self.a_s),
            ("lambda0", self.lambda0),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositive { name, value });
            }
        }
        // dilute-gas sanity bound
        if self.a_s >= 100e-9 {
            return Err(Error::InvalidValue {
                name: "a_s",
                value: self.a_s,
                reason: "scattering length must stay below 100 nm (dilute regime)",
            });
        }
        Ok(())
    }

    /// Mean-field interaction strength g = 4 pi hbar^2 a_s / m, J m^3.
    pub fn interaction_strength(&self) -> f64 {
        4.0 * std::f64::consts::PI * HBAR * HBAR * self.a_s / self.mass
    }

    /// Angular frequency of the trapping transition, rad/s.
    pub fn transition_angular_frequency(&self) -> f64 {
        2.0 * std::f64::consts::PI * C_LIGHT / self.lambda0
    }

    /// Laser wavelength corresponding to a blue detuning `delta` (rad/s)
    /// from the transition.
    pub fn laser_wavelength(&self, detuning: f64) -> f64 {
        2.0 * std::f64::consts::PI * C_LIGHT / (self.transition_angular_frequency() + detuning)
    }
}
