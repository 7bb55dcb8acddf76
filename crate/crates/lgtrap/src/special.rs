//! Special functions: log-gamma, Riemann zeta, Bose functions (polylogarithms
//! on the real interval), log-factorials and a small interpolation helper.
//!
//! Accuracy targets are set by the thermodynamic routines: `bose_g` is good to
//! better than 1e-10 relative over its whole domain, `zeta` and `ln_gamma` to
//! near machine precision.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LN_2PI_HALF: f64 = 0.918_938_533_204_672_7; // ln(2 pi)/2

// Lanczos approximation, g = 7, 9 terms.
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires x > 0, got {x}");
    if x < 0.5 {
        // reflection keeps the Lanczos series in its accurate range
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let y = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (y + i as f64);
    }
    let t = y + 7.5;
    LN_2PI_HALF + (y + 0.5) * t.ln() - t + a.ln()
}

/// Gamma function for real x (poles at non-positive integers return NaN/inf).
pub fn gamma(x: f64) -> f64 {
    if x >= 0.5 {
        ln_gamma(x).exp()
    } else {
        PI / ((PI * x).sin() * ln_gamma(1.0 - x).exp())
    }
}

/// ln(n!) computed in log-space; exact enough for n up to hundreds.
pub fn ln_factorial(n: u32) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// Riemann zeta function for real s != 1.
///
/// Uses Borwein's alternating-series acceleration for s > 0.5 and the
/// functional equation below that; |zeta(s)| for s -> 1 diverges and the
/// pole itself returns infinity.
pub fn zeta(s: f64) -> f64 {
    if (s - 1.0).abs() < 1e-12 {
        return f64::INFINITY;
    }
    if s == 0.0 {
        return -0.5;
    }
    if s < 0.5 {
        // zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s) zeta(1 - s)
        return 2f64.powf(s) * PI.powf(s - 1.0) * (PI * s / 2.0).sin() * gamma(1.0 - s)
            * zeta(1.0 - s);
    }
    borwein_eta(s) / (1.0 - 2f64.powf(1.0 - s))
}

/// Dirichlet eta(s) by Borwein's Chebyshev-weighted alternating sum (s > 0).
fn borwein_eta(s: f64) -> f64 {
    const N: usize = 44;
    let mut t = 1.0 / N as f64; // t_0 = (n-1)!/n!
    let mut d = [0.0f64; N + 1];
    d[0] = N as f64 * t;
    let mut acc = t;
    for j in 1..=N {
        let jf = j as f64;
        t *= (N as f64 + jf - 1.0) * 4.0 * (N as f64 - jf + 1.0) / ((2.0 * jf) * (2.0 * jf - 1.0));
        acc += t;
        d[j] = N as f64 * acc;
    }
    let dn = d[N];
    let mut sum = 0.0;
    let mut sign = 1.0;
    for (k, dk) in d.iter().enumerate().take(N) {
        sum += sign * (dk - dn) / ((k + 1) as f64).powf(s);
        sign = -sign;
    }
    -sum / dn
}

/// Bose function g_s(z) = sum_{i>=1} z^i / i^s for 0 <= z <= 1.
///
/// For z away from 1 the series is summed directly with a geometric tail
/// bound. Near z = 1 direct summation is impractically slow, so the tail is
/// resummed with the Hurwitz-series acceleration in the variable
/// alpha = -ln z (valid for alpha < 2 pi):
///
///   g_s(e^-alpha) = Gamma(1-s) alpha^(s-1)
///                   + sum_k zeta(s-k) (-alpha)^k / k!          (s not integer)
///
/// with the k = s-1 term replaced by its finite limit when s is an integer.
///
/// Errors: z outside [0, 1]; the divergent case z = 1 with s <= 1.
pub fn bose_g(s: f64, z: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) || z.is_nan() {
        return Err(Error::InvalidValue {
            name: "z",
            value: z,
            reason: "fugacity must lie in [0, 1]",
        });
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z == 1.0 {
        if s > 1.0 {
            return Ok(zeta(s));
        }
        return Err(Error::Divergent(format!(
            "bose_g(s, 1) diverges for s <= 1 (s = {s})"
        )));
    }
    let alpha = -z.ln();
    if alpha > 0.5 {
        Ok(bose_direct(s, z))
    } else {
        Ok(bose_hurwitz(s, alpha))
    }
}

fn bose_direct(s: f64, z: f64) -> f64 {
    let mut acc = z;
    let mut zp = z;
    let mut k = 1u64;
    loop {
        k += 1;
        zp *= z;
        let term = zp / (k as f64).powf(s);
        acc += term;
        // geometric tail bound: sum_{i>k} z^i/i^s <= z^(k+1) / ((k+1)^s (1-z))
        let bound = zp * z / ((k as f64 + 1.0).powf(s) * (1.0 - z));
        if bound < 1e-15 * acc {
            return acc;
        }
    }
}

fn bose_hurwitz(s: f64, alpha: f64) -> f64 {
    let m = s.round();
    if (s - m).abs() < 1e-9 && m >= 1.0 {
        return bose_hurwitz_integer(m as i64, alpha);
    }
    let mut acc = gamma(1.0 - s) * alpha.powf(s - 1.0);
    let mut pow = 1.0; // (-alpha)^k / k!
    let mut small_streak = 0;
    for k in 0..64 {
        let term = zeta(s - k as f64) * pow;
        acc += term;
        if term.abs() < 1e-16 * acc.abs() {
            small_streak += 1;
            if small_streak >= 2 {
                break;
            }
        } else {
            small_streak = 0;
        }
        pow *= -alpha / (k as f64 + 1.0);
    }
    acc
}

fn bose_hurwitz_integer(m: i64, alpha: f64) -> f64 {
    let mut acc = 0.0;
    let mut pow = 1.0; // (-alpha)^k / k!
    let mut small_streak = 0;
    for k in 0..64 {
        let term = if k == m - 1 {
            // lim of Gamma(1-s) alpha^(s-1) + zeta(s-k) alpha^k/k! as s -> m
            let harmonic: f64 = (1..m).map(|i| 1.0 / i as f64).sum();
            pow * (harmonic - alpha.ln())
        } else {
            zeta((m - k) as f64) * pow
        };
        acc += term;
        if k >= m && term.abs() < 1e-16 * acc.abs() {
            small_streak += 1;
            if small_streak >= 2 {
                break;
            }
        } else {
            small_streak = 0;
        }
        pow *= -alpha / (k as f64 + 1.0);
    }
    acc
}

/// Piecewise-linear interpolation on a sorted abscissa grid, clamped at the ends.
pub fn interp_linear(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[xs.len() - 1] {
        return ys[ys.len() - 1];
    }
    let i = xs.partition_point(|&v| v < x).max(1);
    let (x0, x1) = (xs[i - 1], xs[i]);
    let w = (x - x0) / (x1 - x0);
    ys[i - 1] * (1.0 - w) + ys[i] * w
}
