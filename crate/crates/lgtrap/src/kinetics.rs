//! Condensate growth kinetics: the rate equation for the condensate number
//! fed from a non-depletable thermal bath, with bosonic stimulation.
//!
//! The model integrates
//!
//!   dN_c/dt = 2 W+(N_c) [ (1 - e^((mu_c - mu)/kB T)) N_c + 1 ]
//!
//! from an empty condensate, where `mu_c = mu_TF(N_c)` follows the
//! Thomas-Fermi law of the trap and the growth rate `W+` carries the bath
//! temperature and the trap shape. Growth starts spontaneously (the `+1`),
//! accelerates through stimulation, and saturates when `mu_c` reaches the
//! bath chemical potential.

use crate::constants::{HBAR, KB};
use crate::error::{Error, Result};
use crate::species::AtomSpecies;
use crate::thermo::{tc_interacting, TcCorrectionCoefficients};
use crate::trap::PowerLawTrap;

/// Growth-rate prefactor C(T) = 4 m (a_s kB T)^2 / (pi hbar^3), 1/s.
pub fn growth_coefficient(t: f64, sp: &AtomSpecies) -> f64 {
    let akbt = sp.a_s * KB * t;
    4.0 * sp.mass * akbt * akbt / (std::f64::consts::PI * HBAR.powi(3))
}

/// Bath and trap parameters of one growth simulation.
///
/// The bath chemical potential is tied to the equilibrium condensate number,
/// `mu_bath = mu_TF(n_eq)`, so saturation lands exactly at `n_eq`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GrowthParams {
    /// Bath temperature, K.
    pub temperature: f64,
    /// Bath chemical potential, J.
    pub mu_bath: f64,
    /// Equilibrium condensate number.
    pub n_eq: f64,
    pub trap: PowerLawTrap,
    pub species: AtomSpecies,
}

impl GrowthParams {
    pub fn new(trap: PowerLawTrap, sp: &AtomSpecies, temperature: f64, n_eq: f64) -> Result<Self> {
        if !(temperature > 0.0) {
            return Err(Error::NonPositive {
                name: "temperature",
                value: temperature,
            });
        }
        if !(n_eq >= 1.0) {
            return Err(Error::InvalidValue {
                name: "n_eq",
                value: n_eq,
                reason: "equilibrium condensate needs at least one atom",
            });
        }
        let mu_bath = trap.mu_thomas_fermi(n_eq, sp.interaction_strength())?;
        Ok(GrowthParams {
            temperature,
            mu_bath,
            n_eq,
            trap,
            species: *sp,
        })
    }

    /// Parameters for a growth run at total atom number `n_total` and
    /// equilibrium condensed fraction `f_eq`: the bath temperature follows
    /// from the interacting condensation temperature through the ideal-gas
    /// condensate-fraction relation T = Tc (1 - f_eq)^(1/(eta+1)).
    pub fn for_condensed_fraction(
        trap: PowerLawTrap,
        sp: &AtomSpecies,
        n_total: f64,
        f_eq: f64,
        coeffs: &TcCorrectionCoefficients,
    ) -> Result<Self> {
        if !(f_eq > 0.0 && f_eq < 1.0) {
            return Err(Error::InvalidValue {
                name: "f_eq",
                value: f_eq,
                reason: "condensed fraction must lie in (0, 1)",
            });
        }
        let est = tc_interacting(&trap, n_total, sp, coeffs)?;
        let eta = trap.shape_eta();
        let t = est.tc * (1.0 - f_eq).powf(1.0 / (eta + 1.0));
        GrowthParams::new(trap, sp, t, f_eq * n_total)
    }

    /// The model is calibrated for small equilibrium condensed fractions;
    /// past about 10% the non-depletable-bath picture degrades.
    pub fn validity_warning(&self, n_total: f64) -> Option<String> {
        let f_eq = self.n_eq / n_total;
        (f_eq > 0.1).then(|| {
            format!(
                "equilibrium condensed fraction {f_eq:.2} exceeds 0.1; \
                 the non-depletable-bath model is stretched beyond its validity"
            )
        })
    }

    /// Thomas-Fermi chemical potential extended continuously by mu(0) = 0.
    pub fn mu_tf(&self, n_c: f64) -> f64 {
        if n_c <= 0.0 {
            0.0
        } else {
            self.trap
                .mu_thomas_fermi(n_c, self.species.interaction_strength())
                .expect("positive arguments")
        }
    }

    /// phi = exp[(mu - 2 mu_TF(n_eq)) / kB T].
    pub fn phi(&self) -> f64 {
        ((self.mu_bath - 2.0 * self.mu_tf(self.n_eq)) / (KB * self.temperature)).exp()
    }
}

/// Growth rate W+ at condensate number `n_c`, 1/s:
///
///   W+ = C(T) { L^2 + sum_p [ L + sum_{q<=p} phi^q/q ]^2 e^(p (mu_c - mu)/kB T) },
///
/// L = ln(1 - phi). The series is truncated once a term falls below 1e-12 of
/// the accumulated sum; at and beyond saturation (mu_c >= mu) the exponent is
/// clamped to zero, which keeps the series convergent (the bracket is the
/// tail of the -ln(1-phi) series and decays like phi^p).
pub fn growth_rate(params: &GrowthParams, n_c: f64) -> f64 {
    let kt = KB * params.temperature;
    let phi = params.phi();
    let big_l = (1.0 - phi).ln();
    let x = ((params.mu_tf(n_c) - params.mu_bath) / kt).min(0.0);
    let ex = x.exp();

    let mut acc = big_l * big_l;
    let mut inner = big_l;
    let mut phi_pow = 1.0;
    let mut epx = 1.0;
    for p in 1..=1_000_000u64 {
        phi_pow *= phi;
        inner += phi_pow / p as f64;
        epx *= ex;
        let term = inner * inner * epx;
        acc += term;
        if term < 1e-12 * acc {
            break;
        }
    }
    growth_coefficient(params.temperature, &params.species) * acc
}

/// Time series of the condensate number.
#[derive(Debug, Clone)]
pub struct GrowthSeries {
    /// Accepted integrator times, s (strictly increasing, starting at 0).
    pub times: Vec<f64>,
    /// Condensate numbers (non-decreasing, starting at 0).
    pub n_c: Vec<f64>,
    /// Time derivatives at the accepted points, 1/s.
    pub rates: Vec<f64>,
    pub params: GrowthParams,
    /// True once the series reached the saturation stop level
    /// (n_c >= (1 - 1e-5) n_eq).
    pub reached_saturation: bool,
    /// Relative tolerance the integrator ran at.
    pub rtol: f64,
}

const DEFAULT_RTOL: f64 = 1e-8;
const SATURATION_STOP: f64 = 1.0 - 1e-5;

/// Integrate the growth equation from an empty condensate to `t_end` (or to
/// saturation, whichever comes first) at the default 1e-8 relative tolerance.
pub fn simulate_growth(params: &GrowthParams, t_end: f64) -> Result<GrowthSeries> {
    simulate_growth_with_tol(params, t_end, DEFAULT_RTOL)
}

/// [`simulate_growth`] with an explicit relative tolerance (adaptive
/// Dormand-Prince 4(5) step control).
pub fn simulate_growth_with_tol(
    params: &GrowthParams,
    t_end: f64,
    rtol: f64,
) -> Result<GrowthSeries> {
    if !(t_end > 0.0) {
        return Err(Error::NonPositive {
            name: "t_end",
            value: t_end,
        });
    }

    // Dormand-Prince 4(5) tableau
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const B5: [f64; 7] = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
        0.0,
    ];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];

    let f = |n: f64| -> f64 {
        let x = (params.mu_tf(n) - params.mu_bath) / (KB * params.temperature);
        2.0 * growth_rate(params, n) * ((1.0 - x.exp()) * n + 1.0)
    };

    let atol = 1e-9 * params.n_eq;
    let n_stop = SATURATION_STOP * params.n_eq;

    let mut t = 0.0;
    let mut n = 0.0f64;
    let mut dn = f(0.0);
    // first step resolves a small fraction of the spontaneous-filling scale
    let mut h = (1e-3 / dn.max(1e-300)).min(t_end);

    let mut times = vec![0.0];
    let mut ns = vec![0.0];
    let mut rates = vec![dn];
    let mut reached_saturation = false;

    let mut k = [0.0f64; 7];
    let mut steps = 0usize;
    while t < t_end {
        steps += 1;
        if steps > 10_000_000 {
            return Err(Error::NonConvergence {
                what: "growth integration (step budget exhausted)",
                iterations: steps,
                residual: n / params.n_eq,
            });
        }
        if h < 1e-16 * t.max(1e-12) {
            return Err(Error::Unsupported(format!(
                "growth integration step-size underflow at t = {t:.6e} s, n_c = {n:.6e}"
            )));
        }
        let h_trial = h.min(t_end - t);
        k[0] = dn;
        for s in 0..6 {
            let mut y = 0.0;
            for (j, &kj) in k.iter().enumerate().take(s + 1) {
                y += A[s][j] * kj;
            }
            k[s + 1] = f(n + h_trial * y);
        }
        let mut y5 = 0.0;
        let mut y4 = 0.0;
        for j in 0..7 {
            y5 += B5[j] * k[j];
            y4 += B4[j] * k[j];
        }
        let n5 = n + h_trial * y5;
        let err = (h_trial * (y5 - y4)).abs() / (atol + rtol * n5.abs());

        if err <= 1.0 {
            t += h_trial;
            n = n5;
            dn = k[6]; // FSAL: the last stage is f at the new point
            times.push(t);
            ns.push(n);
            rates.push(dn);
            if n >= n_stop {
                reached_saturation = true;
                break;
            }
        }
        let scale = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h = h_trial * scale;
    }

    Ok(GrowthSeries {
        times,
        n_c: ns,
        rates,
        params: params.clone(),
        reached_saturation,
        rtol,
    })
}

/// Default threshold of [`GrowthSeries::condensation_time`].
pub const CONDENSATION_THRESHOLD: f64 = 0.9;

impl GrowthSeries {
    /// First time the condensate reaches `frac * n_eq`, by monotone cubic
    /// Hermite interpolation between accepted steps.
    pub fn condensation_time_at(&self, frac: f64) -> Result<f64> {
        let target = frac * self.params.n_eq;
        if !self.reached_saturation && self.n_c.last().copied().unwrap_or(0.0) < target {
            return Err(Error::SaturationNotReached(format!(
                "series ends at n_c/n_eq = {:.4} before reaching {frac:.3}",
                self.n_c.last().unwrap_or(&0.0) / self.params.n_eq
            )));
        }
        let idx = match self.n_c.iter().position(|&v| v >= target) {
            Some(0) => return Ok(0.0),
            Some(i) => i,
            None => {
                return Err(Error::SaturationNotReached(format!(
                    "threshold {frac:.3} never reached"
                )))
            }
        };
        let (t0, t1) = (self.times[idx - 1], self.times[idx]);
        let (n0, n1) = (self.n_c[idx - 1], self.n_c[idx]);
        let (d0, d1) = (self.rates[idx - 1], self.rates[idx]);
        let h = t1 - t0;
        // bisect the cubic Hermite interpolant for the crossing
        let eval = |s: f64| -> f64 {
            let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
            let h10 = s * (1.0 - s) * (1.0 - s);
            let h01 = s * s * (3.0 - 2.0 * s);
            let h11 = s * s * (s - 1.0);
            h00 * n0 + h10 * h * d0 + h01 * n1 + h11 * h * d1 - target
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if eval(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(t0 + 0.5 * (lo + hi) * h)
    }

    /// Condensation time at the default 90% threshold.
    pub fn condensation_time(&self) -> Result<f64> {
        self.condensation_time_at(CONDENSATION_THRESHOLD)
    }

    /// Condensed fraction n_c / n_eq at the end of the series.
    pub fn final_fraction(&self) -> f64 {
        self.n_c.last().copied().unwrap_or(0.0) / self.params.n_eq
    }
}
