//! Bose-Einstein condensation in dark power-law laser traps.
//!
//! This crate models atoms confined in the dark core of blue-detuned
//! Laguerre-Gaussian (LG) laser beams. Two crossed beams produce a composite
//! power-law potential `U_perp rho^alpha + U_z z^beta` whose exponents are set
//! by the azimuthal beam index `ell`, interpolating between a harmonic trap
//! (`ell = 1`) and a quasi-homogeneous box (`ell >> 1`). The library computes,
//! for such traps:
//!
//! * beam intensity profiles, dipole potentials and power-law coefficients
//!   ([`beam`]),
//! * trap geometry, Thomas-Fermi quantities and the 1D/2D/3D trap
//!   configurations at fixed condensate volume ([`trap`]),
//! * Bose functions, the equation of state, ideal and interaction-corrected
//!   condensation temperatures, and single-level Bose-Einstein populations
//!   ([`thermo`], [`levels`]),
//! * Gross-Pitaevskii ground states on a cylindrical grid by imaginary-time
//!   relaxation ([`gpe`]),
//! * condensate growth kinetics from a rate equation with bosonic
//!   stimulation ([`kinetics`]),
//! * photon-scattering and heating-rate estimates ([`heating`]).
//!
//! All quantities are SI internally; unit conversions belong to callers.

pub mod beam;
pub mod constants;
pub mod error;
pub mod gpe;
pub mod heating;
pub mod kinetics;
pub mod levels;
pub mod special;
pub mod species;
pub mod thermo;
pub mod trap;

pub use beam::LgBeam;
pub use error::{Error, Result};
pub use gpe::{CylField, CylGrid, GroundStateResult};
pub use kinetics::{GrowthParams, GrowthSeries};
pub use species::AtomSpecies;
pub use thermo::TcCorrectionCoefficients;
pub use trap::{PowerLawTrap, TrapConfiguration, TrapKind};
