//! Gross-Pitaevskii ground states on a cylindrically symmetric grid by
//! imaginary-time relaxation.
//!
//! All trap configurations handled here are of the form
//! `V = U_perp rho^alpha + U_z z^beta`, so the ground state carries no
//! vorticity and a 2-D (rho, z) solve replaces the 3-D problem. The field is
//! real and normalized to one: `2 pi Int |psi|^2 rho drho dz = 1`; the
//! interaction term is `g N_c |psi|^2`.
//!
//! The relaxation is a semi-implicit imaginary-time descent: each step moves
//! against the preconditioned Gross-Pitaevskii residual,
//!
//!   psi  <-  normalize( psi - w P (H[psi] psi - mu psi) ),
//!
//! where the preconditioner `P = s (A_rho A_z)^-1` inverts the two shifted
//! one-dimensional operators `A_rho = s - (hbar^2/2m) L_rho + U_perp rho^alpha`
//! and `A_z = s - (hbar^2/2m) L_z + U_z z^beta` by tridiagonal solves (the
//! potential is separable by construction, so the preconditioning is exact up
//! to the interaction term). A converged state is an eigenpair of the discrete
//! operator itself — the step size sets only the convergence rate, not the
//! answer. The effective step starts at `0.1 hbar / mu_ref` and is halved
//! whenever the energy fails to decrease.

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::species::AtomSpecies;
use crate::trap::PowerLawTrap;

/// Uniform cylindrical grid. Radial nodes sit at half offsets
/// `rho_i = (i + 1/2) drho` (so the axis needs no special casing), axial
/// nodes run from `-z_max` to `z_max` inclusive; the field vanishes on the
/// outer boundaries.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CylGrid {
    /// Radial extent, m.
    pub rho_max: f64,
    /// Axial half-extent, m.
    pub z_max: f64,
    /// Number of radial nodes (>= 32).
    pub n_rho: usize,
    /// Number of axial nodes (>= 32).
    pub n_z: usize,
}

impl CylGrid {
    pub fn new(rho_max: f64, z_max: f64, n_rho: usize, n_z: usize) -> Result<Self> {
        if n_rho < 32 || n_z < 32 {
            return Err(Error::GridTooSmall(format!(
                "need at least 32 nodes per direction, got {n_rho} x {n_z}"
            )));
        }
        for (name, value) in [("rho_max", rho_max), ("z_max", z_max)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositive { name, value });
            }
        }
        Ok(CylGrid {
            rho_max,
            z_max,
            n_rho,
            n_z,
        })
    }

    /// Grid sized to `factor` times the classical half-widths of `trap` at
    /// energy `epsilon` (1.5 is the minimum the solver accepts).
    pub fn sized_for(
        trap: &PowerLawTrap,
        epsilon: f64,
        factor: f64,
        n_rho: usize,
        n_z: usize,
    ) -> Result<Self> {
        let (r, z) = trap.half_widths(epsilon);
        CylGrid::new(factor * r, factor * z, n_rho, n_z)
    }

    pub fn drho(&self) -> f64 {
        self.rho_max / self.n_rho as f64
    }

    pub fn dz(&self) -> f64 {
        2.0 * self.z_max / (self.n_z as f64 - 1.0)
    }

    pub fn rho(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.drho()
    }

    pub fn z(&self, j: usize) -> f64 {
        -self.z_max + j as f64 * self.dz()
    }
}

/// A real scalar field on a [`CylGrid`], row-major over (rho, z).
#[derive(Debug, Clone)]
pub struct CylField {
    values: Vec<f64>,
    grid: CylGrid,
}

impl CylField {
    pub fn zeros(grid: CylGrid) -> Self {
        CylField {
            values: vec![0.0; grid.n_rho * grid.n_z],
            grid,
        }
    }

    pub fn grid(&self) -> &CylGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.n_z + j]
    }

    /// 2 pi Int f rho drho dz with the midpoint rule of the grid.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let w = 2.0 * std::f64::consts::PI * self.grid.drho() * self.grid.dz();
        let mut acc = 0.0;
        for i in 0..self.grid.n_rho {
            let rho = self.grid.rho(i);
            let row = &self.values[i * self.grid.n_z..(i + 1) * self.grid.n_z];
            let mut row_acc = 0.0;
            for &v in row {
                row_acc += f(v);
            }
            acc += rho * row_acc;
        }
        acc * w
    }

    /// L2 norm under the cylindrical measure.
    pub fn norm(&self) -> f64 {
        self.integrate(|v| v * v).sqrt()
    }

    /// Scale so the norm is exactly one; returns the previous norm.
    pub fn renormalize(&mut self) -> f64 {
        let n = self.norm();
        let inv = 1.0 / n;
        for v in &mut self.values {
            *v *= inv;
        }
        n
    }

    pub fn max_density(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, &v| m.max(v * v))
    }
}

/// Converged ground state and solver metadata.
#[derive(Debug, Clone)]
pub struct GroundStateResult {
    pub psi: CylField,
    /// Chemical potential from the Gross-Pitaevskii functional, J.
    pub mu_c: f64,
    /// Total energy per particle, J.
    pub energy: f64,
    pub iterations: usize,
    /// Final eigenpair residual |H psi - mu psi| / |mu psi|.
    pub residual: f64,
    /// Trap the state was solved in.
    pub trap: PowerLawTrap,
    /// Condensate atom number.
    pub n_c: f64,
    /// Initial and final imaginary-time steps, s, and the number of halvings.
    pub tau_initial: f64,
    pub tau_final: f64,
    pub tau_halvings: usize,
    /// Energy after each accepted step (non-increasing).
    pub energy_trace: Vec<f64>,
}

struct Workspace {
    grid: CylGrid,
    potential: Vec<f64>,
    gn: f64,
    inv_2m: f64, // hbar^2 / 2m, so H = -inv_2m * L + V + gn psi^2
    // radial operator coefficients (lower, diag, upper per node)
    rho_lower: Vec<f64>,
    rho_diag: Vec<f64>,
    rho_upper: Vec<f64>,
    z_coeff: f64, // 1/dz^2
}

impl Workspace {
    fn new(trap: &PowerLawTrap, grid: CylGrid, gn: f64, mass: f64) -> Self {
        let (n_rho, n_z) = (grid.n_rho, grid.n_z);
        let mut potential = vec![0.0; n_rho * n_z];
        for i in 0..n_rho {
            for j in 0..n_z {
                potential[i * n_z + j] = trap.potential(grid.rho(i), grid.z(j));
            }
        }
        let drho = grid.drho();
        let mut rho_lower = vec![0.0; n_rho];
        let mut rho_diag = vec![0.0; n_rho];
        let mut rho_upper = vec![0.0; n_rho];
        for i in 0..n_rho {
            let rho = grid.rho(i);
            let rho_minus = i as f64 * drho; // rho_{i-1/2}; zero on the axis
            let rho_plus = (i as f64 + 1.0) * drho;
            let lower = rho_minus / (rho * drho * drho);
            let upper = rho_plus / (rho * drho * drho);
            rho_lower[i] = lower;
            rho_upper[i] = upper;
            rho_diag[i] = -(lower + upper);
        }
        Workspace {
            grid,
            potential,
            gn,
            inv_2m: HBAR * HBAR / (2.0 * mass),
            rho_lower,
            rho_diag,
            rho_upper,
            z_coeff: 1.0 / (grid.dz() * grid.dz()),
        }
    }

    /// Discrete cylindrical Laplacian (Dirichlet outer boundaries).
    fn apply_laplacian(&self, f: &[f64], out: &mut [f64]) {
        let (n_rho, n_z) = (self.grid.n_rho, self.grid.n_z);
        let c = self.z_coeff;
        for i in 0..n_rho {
            let base = i * n_z;
            for j in 0..n_z {
                let v = f[base + j];
                let mut acc = self.rho_diag[i] * v - 2.0 * c * v;
                if i > 0 {
                    acc += self.rho_lower[i] * f[base - n_z + j];
                }
                if i + 1 < n_rho {
                    acc += self.rho_upper[i] * f[base + n_z + j];
                }
                if j > 0 {
                    acc += c * f[base + j - 1];
                }
                if j + 1 < n_z {
                    acc += c * f[base + j + 1];
                }
                out[base + j] = acc;
            }
        }
    }

    /// Squared L2 norm of a field under the cylindrical measure.
    fn norm2(&self, f: &[f64]) -> f64 {
        let w = 2.0 * std::f64::consts::PI * self.grid.drho() * self.grid.dz();
        let n_z = self.grid.n_z;
        let mut acc = 0.0;
        for i in 0..self.grid.n_rho {
            let rho = self.grid.rho(i);
            let mut row = 0.0;
            for &v in &f[i * n_z..(i + 1) * n_z] {
                row += v * v;
            }
            acc += rho * row;
        }
        acc * w
    }

    /// Energy per particle of a normalized field, J.
    fn energy(&self, psi: &[f64], lap: &mut Vec<f64>) -> f64 {
        lap.resize(psi.len(), 0.0);
        self.apply_laplacian(psi, lap);
        let w = 2.0 * std::f64::consts::PI * self.grid.drho() * self.grid.dz();
        let mut acc = 0.0;
        let n_z = self.grid.n_z;
        for i in 0..self.grid.n_rho {
            let rho = self.grid.rho(i);
            let mut row = 0.0;
            for j in 0..n_z {
                let k = i * n_z + j;
                let p = psi[k];
                row += -self.inv_2m * p * lap[k]
                    + self.potential[k] * p * p
                    + 0.5 * self.gn * p * p * p * p;
            }
            acc += rho * row;
        }
        acc * w
    }

    /// Chemical potential and relative residual of the eigenpair; fills
    /// `resid` with H psi - mu psi.
    fn mu_and_residual(&self, psi: &[f64], lap: &mut Vec<f64>, resid: &mut Vec<f64>) -> (f64, f64) {
        lap.resize(psi.len(), 0.0);
        resid.resize(psi.len(), 0.0);
        self.apply_laplacian(psi, lap);
        let w = 2.0 * std::f64::consts::PI * self.grid.drho() * self.grid.dz();
        let n_z = self.grid.n_z;
        let mut mu = 0.0;
        for i in 0..self.grid.n_rho {
            let rho = self.grid.rho(i);
            let mut row = 0.0;
            for j in 0..n_z {
                let k = i * n_z + j;
                let p = psi[k];
                let h_psi = -self.inv_2m * lap[k] + (self.potential[k] + self.gn * p * p) * p;
                resid[k] = h_psi;
                row += p * h_psi;
            }
            mu += rho * row;
        }
        mu *= w;

        let mut res2 = 0.0;
        let mut norm2 = 0.0;
        for i in 0..self.grid.n_rho {
            let rho = self.grid.rho(i);
            let mut row_r = 0.0;
            let mut row_n = 0.0;
            for j in 0..n_z {
                let k = i * n_z + j;
                let p = psi[k];
                let r = resid[k] - mu * p;
                resid[k] = r;
                row_r += r * r;
                row_n += p * p;
            }
            res2 += rho * row_r;
            norm2 += rho * row_n;
        }
        (mu, (res2 / norm2).sqrt() / mu.abs())
    }
}

/// Thomas factorization of a tridiagonal matrix given by per-row
/// (lower, diag, upper).
struct TridiagSolver {
    /// Modified upper coefficients from the forward sweep.
    cp: Vec<f64>,
    /// Reciprocal pivots.
    inv_piv: Vec<f64>,
    lower: Vec<f64>,
}

impl TridiagSolver {
    fn new(lower: &[f64], diag: &[f64], upper: &[f64]) -> Self {
        let n = diag.len();
        let mut cp = vec![0.0; n];
        let mut inv_piv = vec![0.0; n];
        inv_piv[0] = 1.0 / diag[0];
        for i in 1..n {
            cp[i - 1] = upper[i - 1] * inv_piv[i - 1];
            inv_piv[i] = 1.0 / (diag[i] - lower[i] * cp[i - 1]);
        }
        TridiagSolver {
            cp,
            inv_piv,
            lower: lower.to_vec(),
        }
    }

    /// Solve A x = rhs in place with stride access.
    fn solve_strided(&self, data: &mut [f64], start: usize, stride: usize, scratch: &mut [f64]) {
        let n = self.inv_piv.len();
        scratch[0] = data[start] * self.inv_piv[0];
        for i in 1..n {
            scratch[i] =
                (data[start + i * stride] - self.lower[i] * scratch[i - 1]) * self.inv_piv[i];
        }
        for i in (0..n - 1).rev() {
            scratch[i] -= self.cp[i] * scratch[i + 1];
        }
        for i in 0..n {
            data[start + i * stride] = scratch[i];
        }
    }
}

/// The separable preconditioner P = s (A_rho A_z)^-1.
struct Preconditioner {
    rho: TridiagSolver,
    z: TridiagSolver,
    shift: f64,
}

impl Preconditioner {
    fn new(ws: &Workspace, trap: &PowerLawTrap, shift: f64) -> Self {
        let grid = ws.grid;
        let rho_lo: Vec<f64> = ws.rho_lower.iter().map(|&x| -ws.inv_2m * x).collect();
        let rho_up: Vec<f64> = ws.rho_upper.iter().map(|&x| -ws.inv_2m * x).collect();
        let rho_di: Vec<f64> = (0..grid.n_rho)
            .map(|i| {
                shift - ws.inv_2m * ws.rho_diag[i]
                    + trap.u_perp * grid.rho(i).powi(trap.alpha as i32)
            })
            .collect();
        let z_lo = vec![-ws.inv_2m * ws.z_coeff; grid.n_z];
        let z_up = z_lo.clone();
        let z_di: Vec<f64> = (0..grid.n_z)
            .map(|j| {
                shift + 2.0 * ws.inv_2m * ws.z_coeff
                    + trap.u_z * grid.z(j).powi(trap.beta as i32)
            })
            .collect();
        Preconditioner {
            rho: TridiagSolver::new(&rho_lo, &rho_di, &rho_up),
            z: TridiagSolver::new(&z_lo, &z_di, &z_up),
            shift,
        }
    }

    /// d = s (A_rho A_z)^-1 r, in place.
    fn apply(&self, ws: &Workspace, d: &mut [f64], scratch: &mut Vec<f64>) {
        let (n_rho, n_z) = (ws.grid.n_rho, ws.grid.n_z);
        scratch.resize(n_rho.max(n_z), 0.0);
        for j in 0..n_z {
            self.rho.solve_strided(d, j, n_z, scratch);
        }
        for i in 0..n_rho {
            self.z.solve_strided(d, i * n_z, 1, scratch);
        }
        for v in d.iter_mut() {
            *v *= self.shift;
        }
    }
}

const MAX_ITERATIONS: usize = 100_000;

/// Relax to the Gross-Pitaevskii ground state of `n_c` atoms in `trap`.
///
/// `tol` is the target eigenpair residual, accepted in [1e-12, 1e-4].
/// `n_c = 0` solves the non-interacting (single-particle) ground state.
///
/// Errors: grid smaller than 1.5x the Thomas-Fermi half-widths (checked
/// before iterating when interactions are on); failure to reach `tol` within
/// the iteration cap.
pub fn solve_ground_state(
    trap: &PowerLawTrap,
    n_c: f64,
    sp: &AtomSpecies,
    grid: CylGrid,
    tol: f64,
) -> Result<GroundStateResult> {
    if !(1e-12..=1e-4).contains(&tol) {
        return Err(Error::InvalidValue {
            name: "tol",
            value: tol,
            reason: "residual tolerance must lie in [1e-12, 1e-4]",
        });
    }
    if n_c < 0.0 {
        return Err(Error::NonPositive {
            name: "n_c",
            value: n_c,
        });
    }
    let g = sp.interaction_strength();
    let gn = g * n_c;

    // reference energy scale for the initial step and the TF grid check
    let mu_ref = if gn > 0.0 {
        let mu_tf = trap.mu_thomas_fermi(n_c, g)?;
        let (r_tf, z_tf) = trap.half_widths(mu_tf);
        if grid.rho_max < 1.5 * r_tf || grid.z_max < 1.5 * z_tf {
            return Err(Error::GridTooSmall(format!(
                "grid ({:.3e}, {:.3e}) m must exceed 1.5x the Thomas-Fermi \
                 half-widths ({:.3e}, {:.3e}) m",
                grid.rho_max, grid.z_max, r_tf, z_tf
            )));
        }
        mu_tf
    } else {
        0.0
    };

    let ws = Workspace::new(trap, grid, gn, sp.mass);

    // initial state: truncated Thomas-Fermi profile plus a small Gaussian
    // floor (deterministic), or a bare Gaussian for the non-interacting case
    let mut psi = CylField::zeros(grid);
    if gn > 0.0 {
        let (r_tf, z_tf) = trap.half_widths(mu_ref);
        let peak = (mu_ref / gn).sqrt();
        for i in 0..grid.n_rho {
            for j in 0..grid.n_z {
                let k = i * grid.n_z + j;
                let tf = ((mu_ref - ws.potential[k]).max(0.0) / gn).sqrt();
                let floor = 1e-6
                    * peak
                    * (-(grid.rho(i) / r_tf).powi(2) / 2.0 - (grid.z(j) / z_tf).powi(2) / 2.0)
                        .exp();
                psi.values[k] = tf + floor;
            }
        }
    } else {
        let (s_r, s_z) = (grid.rho_max / 4.0, grid.z_max / 4.0);
        for i in 0..grid.n_rho {
            for j in 0..grid.n_z {
                psi.values[i * grid.n_z + j] =
                    (-(grid.rho(i) / s_r).powi(2) / 2.0 - (grid.z(j) / s_z).powi(2) / 2.0).exp();
            }
        }
    }
    psi.renormalize();

    let mut lap = Vec::new();
    let mut energy = ws.energy(&psi.values, &mut lap);
    let mu_scale = if gn > 0.0 { mu_ref } else { energy };

    // preconditioner shift: half the chemical-potential scale balances the
    // low-k and high-k response
    let shift = 0.5 * mu_scale;
    let precond = Preconditioner::new(&ws, trap, shift);

    // dimensionless relaxation factor; omega/shift is the effective
    // imaginary-time step over hbar, started at 0.1 hbar / mu_scale
    let mut omega = 0.1 * shift / mu_scale;
    let omega_max = 1.5;
    let tau_initial = omega * HBAR / shift;
    let mut halvings = 0usize;

    let mut energy_trace = vec![energy];
    let mut iterations = 0usize;
    let mut resid = Vec::new();
    let mut trial = vec![0.0; psi.values.len()];
    let mut scratch = Vec::new();

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let (mu, residual) = ws.mu_and_residual(&psi.values, &mut lap, &mut resid);
        if residual <= tol {
            return Ok(GroundStateResult {
                psi,
                mu_c: mu,
                energy,
                iterations,
                residual,
                trap: *trap,
                n_c,
                tau_initial,
                tau_final: omega * HBAR / shift,
                tau_halvings: halvings,
                energy_trace,
            });
        }

        precond.apply(&ws, &mut resid, &mut scratch);

        // descend against the preconditioned residual; halve the step on any
        // energy increase
        loop {
            for (k, t) in trial.iter_mut().enumerate() {
                *t = psi.values[k] - omega * resid[k];
            }
            let inv_norm = 1.0 / ws.norm2(&trial).sqrt();
            for t in &mut trial {
                *t *= inv_norm;
            }
            let e_new = ws.energy(&trial, &mut lap);
            if e_new.is_finite() && e_new <= energy * (1.0 + 1e-12) + f64::MIN_POSITIVE {
                std::mem::swap(&mut psi.values, &mut trial);
                energy = e_new;
                energy_trace.push(energy);
                omega = (omega * 1.25).min(omega_max);
                break;
            }
            omega *= 0.5;
            halvings += 1;
            if omega < 1e-12 {
                return Err(Error::NonConvergence {
                    what: "imaginary-time relaxation (step size underflow)",
                    iterations,
                    residual,
                });
            }
        }
    }

    let (_, residual) = ws.mu_and_residual(&psi.values, &mut lap, &mut resid);
    Err(Error::NonConvergence {
        what: "imaginary-time relaxation",
        iterations: MAX_ITERATIONS,
        residual,
    })
}

/// A set of iso-density polylines at one requested fraction of the peak.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ContourSet {
    /// Requested fraction of the maximum density, in (0, 1].
    pub fraction: f64,
    /// Absolute density level, 1/m^3.
    pub level: f64,
    /// Polylines in the (rho, z) plane, m. Revolution around z is the
    /// consumer's job.
    pub polylines: Vec<Vec<(f64, f64)>>,
}

/// Iso-density contours of |psi|^2 at the given fractions of its maximum.
///
/// A fraction of exactly 1 yields the degenerate single-point contour at the
/// density maximum; fractions that fall above every grid cell (numerically
/// possible just below 1) yield an empty set rather than an error.
pub fn iso_density_levels(result: &GroundStateResult, fractions: &[f64]) -> Result<Vec<ContourSet>> {
    let psi = &result.psi;
    let grid = psi.grid;
    let max = psi.max_density();
    let mut out = Vec::with_capacity(fractions.len());
    for &f in fractions {
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::InvalidValue {
                name: "fraction",
                value: f,
                reason: "iso-density fractions must lie in (0, 1]",
            });
        }
        if f == 1.0 {
            let k_max = (0..psi.values.len())
                .max_by(|&a, &b| {
                    (psi.values[a] * psi.values[a])
                        .partial_cmp(&(psi.values[b] * psi.values[b]))
                        .unwrap()
                })
                .unwrap();
            let (i, j) = (k_max / grid.n_z, k_max % grid.n_z);
            out.push(ContourSet {
                fraction: f,
                level: max,
                polylines: vec![vec![(grid.rho(i), grid.z(j))]],
            });
            continue;
        }
        let level = f * max;
        let segments = marching_squares(psi, level);
        out.push(ContourSet {
            fraction: f,
            level,
            polylines: chain_segments(segments),
        });
    }
    Ok(out)
}

type Segment = ((f64, f64), (f64, f64));

/// Standard marching squares with linear interpolation on the (rho, z) grid.
fn marching_squares(psi: &CylField, level: f64) -> Vec<Segment> {
    let grid = psi.grid;
    let mut segments = Vec::new();
    let d = |i: usize, j: usize| {
        let v = psi.at(i, j);
        v * v
    };
    for i in 0..grid.n_rho - 1 {
        for j in 0..grid.n_z - 1 {
            let corners = [d(i, j), d(i + 1, j), d(i + 1, j + 1), d(i, j + 1)];
            let mut case = 0usize;
            for (b, &c) in corners.iter().enumerate() {
                if c > level {
                    case |= 1 << b;
                }
            }
            if case == 0 || case == 15 {
                continue;
            }
            // edge endpoints in (rho, z)
            let p = [
                (grid.rho(i), grid.z(j)),
                (grid.rho(i + 1), grid.z(j)),
                (grid.rho(i + 1), grid.z(j + 1)),
                (grid.rho(i), grid.z(j + 1)),
            ];
            let interp = |a: usize, b: usize| -> (f64, f64) {
                let t = (level - corners[a]) / (corners[b] - corners[a]);
                (
                    p[a].0 + t * (p[b].0 - p[a].0),
                    p[a].1 + t * (p[b].1 - p[a].1),
                )
            };
            // edges: 0 bottom (0-1), 1 right (1-2), 2 top (2-3), 3 left (3-0)
            let e = |idx: usize| -> (f64, f64) {
                match idx {
                    0 => interp(0, 1),
                    1 => interp(1, 2),
                    2 => interp(2, 3),
                    _ => interp(3, 0),
                }
            };
            let mut push = |a: usize, b: usize| segments.push((e(a), e(b)));
            match case {
                1 | 14 => push(3, 0),
                2 | 13 => push(0, 1),
                3 | 12 => push(3, 1),
                4 | 11 => push(1, 2),
                6 | 9 => push(0, 2),
                7 | 8 => push(2, 3),
                5 => {
                    push(3, 0);
                    push(1, 2);
                }
                10 => {
                    push(0, 1);
                    push(2, 3);
                }
                _ => unreachable!(),
            }
        }
    }
    segments
}

/// Greedily chain segments that share endpoints into polylines.
fn chain_segments(mut segments: Vec<Segment>) -> Vec<Vec<(f64, f64)>> {
    let close = |a: (f64, f64), b: (f64, f64)| -> bool {
        let scale = (a.0.abs() + a.1.abs() + b.0.abs() + b.1.abs()).max(1e-300);
        ((a.0 - b.0).abs() + (a.1 - b.1).abs()) < 1e-9 * scale
    };
    let mut polylines = Vec::new();
    while let Some((start, end)) = segments.pop() {
        let mut line = vec![start, end];
        loop {
            let tail = *line.last().unwrap();
            let mut extended = false;
            for k in 0..segments.len() {
                let (a, b) = segments[k];
                if close(a, tail) {
                    line.push(b);
                    segments.swap_remove(k);
                    extended = true;
                    break;
                }
                if close(b, tail) {
                    line.push(a);
                    segments.swap_remove(k);
                    extended = true;
                    break;
                }
            }
            if !extended {
                break;
            }
        }
        polylines.push(line);
    }
    polylines
}

/// Relative density spread (standard deviation over mean of |psi|^2) across
/// the grid points of the core region where V <= `fraction * mu_c`.
pub fn flatness_metric_at(result: &GroundStateResult, fraction: f64) -> f64 {
    let psi = &result.psi;
    let grid = psi.grid;
    let cut = fraction * result.mu_c;
    let mut count = 0usize;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 0..grid.n_rho {
        for j in 0..grid.n_z {
            if result.trap.potential(grid.rho(i), grid.z(j)) <= cut {
                let v = psi.at(i, j);
                let d = v * v;
                count += 1;
                let delta = d - mean;
                mean += delta / count as f64;
                m2 += delta * (d - mean);
            }
        }
    }
    if count == 0 || mean == 0.0 {
        return 0.0;
    }
    (m2 / count as f64).sqrt() / mean
}

/// [`flatness_metric_at`] over the half-potential core region V <= mu_c / 2.
pub fn flatness_metric(result: &GroundStateResult) -> f64 {
    flatness_metric_at(result, 0.5)
}

impl GroundStateResult {
    /// Plain-text export of the density grid: `#` header lines with the grid
    /// dimensions, spacings and units, then row-major |psi|^2 values.
    pub fn density_text(&self) -> String {
        let grid = self.psi.grid;
        let mut s = String::new();
        s.push_str("# density grid |psi|^2, units 1/m^3\n");
        s.push_str(&format!("# n_rho {} n_z {}\n", grid.n_rho, grid.n_z));
        s.push_str(&format!(
            "# rho half-offset: rho_i = (i + 1/2) * {:.12e} m\n",
            grid.drho()
        ));
        s.push_str(&format!(
            "# z uniform: z_j = {:.12e} + j * {:.12e} m\n",
            -grid.z_max,
            grid.dz()
        ));
        s.push_str("# rows scan rho, columns scan z\n");
        for i in 0..grid.n_rho {
            let row: Vec<String> = (0..grid.n_z)
                .map(|j| format!("{:.9e}", self.psi.at(i, j).powi(2)))
                .collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Solver metadata as JSON.
    pub fn metadata_json(&self) -> serde_json::Value {
        serde_json::json!({
            "mu_c_J": self.mu_c,
            "energy_J": self.energy,
            "iterations": self.iterations,
            "residual": self.residual,
            "n_c": self.n_c,
            "trap": self.trap,
            "grid": self.psi.grid,
            "tau_initial_s": self.tau_initial,
            "tau_final_s": self.tau_final,
            "tau_halvings": self.tau_halvings,
        })
    }
}
