//! Finite-difference solver for the regularized Dirichlet problem
//!
//! ```text
//! u_t = (u^m)_xx / rho + u^p   in I_delta = (-R+delta, R-delta),
//! u = 0                        on the boundary of I_delta,
//! u = u0                       at t = 0,
//! ```
//!
//! discretized by method of lines: second-order central differences of
//! `(u^m)_xx` on a (possibly boundary-graded) mesh, divided pointwise by
//! `rho`, with the reaction handled pointwise. Default time stepping is
//! backward-difference order 1 with a Newton solve of the tridiagonal
//! nonlinear system and adaptive step control; blow-up is declared only when
//! the sup norm exceeds the cap *and* the step size has collapsed to its
//! floor, so reaction-driven runaway is distinguished from stiffness failure.
//!
//! The diffusion is advanced through `v = u^m` without regularizing the
//! degeneracy at `u = 0`; fronts stay sharp and the support comparisons
//! downstream see the genuine free boundary. An optional `eps_reg` shifts the
//! power for diagnostics only.

use crate::barrier::{BarrierError, BarrierSpec, Orientation, PositivitySet};
use crate::density::{DensityError, DensitySpec};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid datum: {0}")]
    InvalidDatum(String),
    #[error("invalid scheme config: {0}")]
    BadConfig(String),
    #[error("Newton iteration diverged at t = {t} with dt collapsed and sup norm {sup} below the blow-up cap")]
    NewtonDivergence { t: f64, sup: f64 },
    #[error("norm cap {cap} exceeded at t = {t} without step collapse; increase the cap or shrink dt_min")]
    NormCapNoCollapse { t: f64, cap: f64 },
    #[error("step limit exhausted at t = {t}")]
    StepLimit { t: f64 },
    #[error("delta-continuation monotonicity violated at x = {x} between levels {level} and {next}: gap {gap}")]
    MonotonicityViolation { x: f64, level: usize, next: usize, gap: f64 },
    #[error("no solution snapshot falls inside the barrier's time window")]
    WindowMismatch,
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Barrier(#[from] BarrierError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MeshKind {
    Uniform,
    /// Cells shrink geometrically toward both boundaries (given ratio), so a
    /// weight growing like `(R-|x|)^-q` is resolved without wasting core nodes.
    Graded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stepper {
    Implicit,
    Explicit,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SchemeConfig {
    pub nx: usize,
    pub stepper: Stepper,
    pub dt0: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub newton_tol: f64,
    pub newton_max_iters: usize,
    /// Blow-up threshold for the sup norm.
    pub m_cap: f64,
    pub mesh: MeshKind,
    pub stretch: f64,
    /// Diagnostic regularization of the degenerate power; 0 disables it.
    pub eps_reg: f64,
    /// Use variable-step BDF2 instead of backward Euler.
    pub order2: bool,
    pub reaction_enabled: bool,
    pub max_snapshots: usize,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            nx: 801,
            stepper: Stepper::Implicit,
            dt0: 1e-3,
            dt_min: 1e-12,
            dt_max: 1e-2,
            newton_tol: 1e-10,
            newton_max_iters: 25,
            m_cap: 1e8,
            mesh: MeshKind::Graded,
            stretch: 1.05,
            eps_reg: 0.0,
            order2: false,
            reaction_enabled: true,
            max_snapshots: 160,
        }
    }
}

impl SchemeConfig {
    fn validate(&self) -> Result<(), SolverError> {
        if self.nx < 16 {
            return Err(SolverError::BadConfig(format!("nx = {} must be >= 16", self.nx)));
        }
        if !(self.dt_min < self.dt0 && self.dt0 <= self.dt_max) {
            return Err(SolverError::BadConfig(format!(
                "need dt_min < dt0 <= dt_max, got {} / {} / {}",
                self.dt_min, self.dt0, self.dt_max
            )));
        }
        if self.stretch <= 1.0 {
            return Err(SolverError::BadConfig("mesh stretch ratio must exceed 1".into()));
        }
        Ok(())
    }
}

/// Interior nodes of `I_delta`; the Dirichlet boundary sits at `xl`, `xr` and
/// carries the implicit value 0.
#[derive(Debug, Clone, Serialize)]
pub struct Mesh {
    pub xs: Vec<f64>,
    pub xl: f64,
    pub xr: f64,
}

impl Mesh {
    pub fn build(kind: MeshKind, nx: usize, xl: f64, xr: f64, stretch: f64) -> Mesh {
        // odd interior count keeps a node at the center and mirror symmetry
        let nx = if nx % 2 == 0 { nx + 1 } else { nx };
        let n_cells_half = (nx + 1) / 2;
        let half = 0.5 * (xr - xl);
        let mid = 0.5 * (xl + xr);
        let sizes = match kind {
            MeshKind::Uniform => vec![half / n_cells_half as f64; n_cells_half],
            MeshKind::Graded => {
                // geometric block from the boundary, then uniform continuation
                // of the last geometric size up to the center
                let n_b = (n_cells_half / 2).max(1);
                let n_c = n_cells_half - n_b;
                let r = stretch;
                let g_sum = (r.powi(n_b as i32) - 1.0) / (r - 1.0);
                let g_last = r.powi(n_b as i32 - 1);
                let h0 = half / (g_sum + n_c as f64 * g_last);
                let mut sizes: Vec<f64> = (0..n_b).map(|j| h0 * r.powi(j as i32)).collect();
                sizes.extend(std::iter::repeat(h0 * g_last).take(n_c));
                sizes
            }
        };
        // accumulate from the left boundary to the center, then mirror
        let mut xs = Vec::with_capacity(nx);
        let mut pos = xl;
        for (j, h) in sizes.iter().enumerate() {
            pos += h;
            if j + 1 < n_cells_half {
                xs.push(pos);
            }
        }
        xs.push(mid);
        for j in (0..n_cells_half - 1).rev() {
            let x = xs[j];
            xs.push(mid + (mid - x));
        }
        Mesh { xs, xl, xr }
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Spacing to the left neighbor (boundary for i = 0).
    fn h_left(&self, i: usize) -> f64 {
        if i == 0 {
            self.xs[0] - self.xl
        } else {
            self.xs[i] - self.xs[i - 1]
        }
    }

    fn h_right(&self, i: usize) -> f64 {
        if i + 1 == self.xs.len() {
            self.xr - self.xs[i]
        } else {
            self.xs[i + 1] - self.xs[i]
        }
    }

    /// Trapezoid weight of node i (boundary values are 0).
    fn quad_weight(&self, i: usize) -> f64 {
        0.5 * (self.h_left(i) + self.h_right(i))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Field {
    pub mesh: Mesh,
    pub values: Vec<f64>,
    pub time: f64,
}

impl Field {
    pub fn sample(mesh: Mesh, f: impl Fn(f64) -> f64) -> Result<Field, SolverError> {
        let values: Vec<f64> = mesh.xs.iter().map(|&x| f(x)).collect();
        for (&x, &v) in mesh.xs.iter().zip(&values) {
            if !v.is_finite() {
                return Err(SolverError::InvalidDatum(format!("datum not finite at x = {x}")));
            }
            if v < 0.0 {
                return Err(SolverError::InvalidDatum(format!("datum negative at x = {x}: {v}")));
            }
        }
        Ok(Field { mesh, values, time: 0.0 })
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()))
    }

    /// Trapezoid quadrature of `rho * u` (diagnostic mass).
    pub fn weighted_mass(&self, density: &DensitySpec) -> Result<f64, SolverError> {
        let mut total = 0.0;
        for (i, &x) in self.mesh.xs.iter().enumerate() {
            total += density.eval(x)? * self.values[i] * self.mesh.quad_weight(i);
        }
        Ok(total)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HistoryPoint {
    pub t: f64,
    pub sup_norm: f64,
    pub mass: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Snapshot {
    pub t: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Status {
    Global { t_end: f64 },
    BlowUp { t_lo: f64, t_hi: f64 },
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Diagnostics {
    pub newton_iters: u64,
    pub accepted_steps: u64,
    pub rejected_steps: u64,
    pub clip_events: u64,
    pub delta: f64,
    pub nx: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    pub status: Status,
    pub history: Vec<HistoryPoint>,
    pub snapshots: Vec<Snapshot>,
    pub mesh: Mesh,
    pub diagnostics: Diagnostics,
}

impl SolveResult {
    pub fn final_field(&self) -> Field {
        let snap = self.snapshots.last().expect("at least the initial snapshot");
        Field { mesh: self.mesh.clone(), values: snap.values.clone(), time: snap.t }
    }
}

/// Lower bound `1 / ((p-1) ||u0||^(p-1))` on the existence time; `+inf` for a
/// zero datum.
pub fn local_existence_time(p: f64, u0: &Field) -> f64 {
    let sup = u0.sup_norm();
    if sup == 0.0 {
        f64::INFINITY
    } else {
        1.0 / ((p - 1.0) * sup.powf(p - 1.0))
    }
}

/// Sample a datum on the mesh of `I_delta`, forcing the Dirichlet boundary.
pub fn make_datum(
    density: &DensitySpec,
    delta: f64,
    cfg: &SchemeConfig,
    f: impl Fn(f64) -> f64,
) -> Result<Field, SolverError> {
    cfg.validate()?;
    let r = density.r();
    if !(delta > 0.0 && delta < r) {
        return Err(SolverError::BadConfig(format!("delta = {delta} out of (0, R)")));
    }
    let mesh = Mesh::build(cfg.mesh, cfg.nx, -r + delta, r - delta, cfg.stretch);
    Field::sample(mesh, f)
}

struct System<'a> {
    rho: Vec<f64>,
    mesh: &'a Mesh,
    m: f64,
    p: f64,
    eps_reg: f64,
    reaction: bool,
}

impl<'a> System<'a> {
    fn new(
        density: &DensitySpec,
        mesh: &'a Mesh,
        m: f64,
        p: f64,
        cfg: &SchemeConfig,
    ) -> Result<Self, SolverError> {
        let rho = mesh.xs.iter().map(|&x| density.eval(x)).collect::<Result<Vec<_>, _>>()?;
        Ok(System { rho, mesh, m, p, eps_reg: cfg.eps_reg, reaction: cfg.reaction_enabled })
    }

    fn power(&self, u: f64) -> f64 {
        if self.eps_reg > 0.0 {
            (u + self.eps_reg).powf(self.m) - self.eps_reg.powf(self.m)
        } else {
            u.powf(self.m)
        }
    }

    fn power_prime(&self, u: f64) -> f64 {
        let base = if self.eps_reg > 0.0 { u + self.eps_reg } else { u };
        self.m * base.powf(self.m - 1.0)
    }

    /// Right-hand side `(u^m)_xx / rho + u^p`.
    fn rhs(&self, u: &[f64], out: &mut [f64]) {
        let n = u.len();
        for i in 0..n {
            let hl = self.mesh.h_left(i);
            let hr = self.mesh.h_right(i);
            let vl = if i == 0 { 0.0 } else { self.power(u[i - 1]) };
            let vr = if i + 1 == n { 0.0 } else { self.power(u[i + 1]) };
            let vc = self.power(u[i]);
            let lap = 2.0 * ((vr - vc) / hr - (vc - vl) / hl) / (hl + hr);
            let mut f = lap / self.rho[i];
            if self.reaction {
                f += u[i].powf(self.p);
            }
            out[i] = f;
        }
    }
}

/// One implicit step: solve `V - gamma_dt * F(V) = rhs_vec` by Newton with a
/// tridiagonal Jacobian. Returns the iteration count or `None` on divergence.
fn newton_step(
    sys: &System,
    v: &mut [f64],
    rhs_vec: &[f64],
    gamma_dt: f64,
    scale_coeff: f64,
    tol: f64,
    max_iters: usize,
) -> Option<usize> {
    let n = v.len();
    let mut f = vec![0.0; n];
    let mut g = vec![0.0; n];
    let mut lower = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let scale = 1.0 + rhs_vec.iter().fold(0.0f64, |a, &b| a.max(b.abs()));

    for it in 0..max_iters {
        sys.rhs(v, &mut f);
        let mut gmax = 0.0f64;
        for i in 0..n {
            g[i] = scale_coeff * v[i] - gamma_dt * f[i] - rhs_vec[i];
            gmax = gmax.max(g[i].abs());
        }
        if !gmax.is_finite() {
            return None;
        }
        if gmax <= tol * scale {
            return Some(it);
        }
        for i in 0..n {
            let hl = sys.mesh.h_left(i);
            let hr = sys.mesh.h_right(i);
            let c = 2.0 / (hl + hr) / sys.rho[i];
            let dl = if i == 0 { 0.0 } else { c / hl * sys.power_prime(v[i - 1]) };
            let du = if i + 1 == n { 0.0 } else { c / hr * sys.power_prime(v[i + 1]) };
            let dc = -c * (1.0 / hl + 1.0 / hr) * sys.power_prime(v[i]);
            let mut jc = scale_coeff - gamma_dt * dc;
            if sys.reaction {
                jc -= gamma_dt * sys.p * v[i].max(0.0).powf(sys.p - 1.0);
            }
            lower[i] = -gamma_dt * dl;
            diag[i] = jc;
            upper[i] = -gamma_dt * du;
        }
        if !thomas_solve(&lower, &mut diag, &upper, &mut g) {
            return None;
        }
        for i in 0..n {
            v[i] -= g[i];
        }
    }
    None
}

/// In-place tridiagonal solve; `rhs` becomes the solution. Returns false on a
/// vanishing pivot.
fn thomas_solve(lower: &[f64], diag: &mut [f64], upper: &[f64], rhs: &mut [f64]) -> bool {
    let n = diag.len();
    for i in 1..n {
        if diag[i - 1] == 0.0 || !diag[i - 1].is_finite() {
            return false;
        }
        let w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if diag[n - 1] == 0.0 || !diag[n - 1].is_finite() {
        return false;
    }
    rhs[n - 1] /= diag[n - 1];
    for i in (0..n - 1).rev() {
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
    }
    true
}

const MAX_STEPS: u64 = 20_000_000;

/// Advance the regularized problem to `t_end` or to blow-up.
pub fn solve_regularized(
    density: &DensitySpec,
    m: f64,
    p: f64,
    u0: &Field,
    delta: f64,
    cfg: &SchemeConfig,
    t_end: f64,
) -> Result<SolveResult, SolverError> {
    cfg.validate()?;
    if !(m > 1.0 && p > 1.0) {
        return Err(SolverError::BadConfig(format!("need m, p > 1, got m = {m}, p = {p}")));
    }
    let r = density.r();
    let expected = (-r + delta, r - delta);
    if (u0.mesh.xl - expected.0).abs() > 1e-12 * r || (u0.mesh.xr - expected.1).abs() > 1e-12 * r {
        return Err(SolverError::InvalidDatum(format!(
            "datum mesh spans [{}, {}] but I_delta is [{}, {}]",
            u0.mesh.xl, u0.mesh.xr, expected.0, expected.1
        )));
    }
    for (&x, &v) in u0.mesh.xs.iter().zip(&u0.values) {
        if !v.is_finite() || v < 0.0 {
            return Err(SolverError::InvalidDatum(format!("datum invalid at x = {x}: {v}")));
        }
    }

    let mesh = u0.mesh.clone();
    let sys = System::new(density, &mesh, m, p, cfg)?;
    let n = mesh.len();
    let mut u = u0.values.clone();
    let mut u_prev: Option<(Vec<f64>, f64)> = None; // (state, dt) for BDF2
    let mut t = 0.0f64;
    let mut dt = cfg.dt0.min(cfg.dt_max);
    let mut diag = Diagnostics { delta, nx: n, ..Diagnostics::default() };

    let mut history: Vec<HistoryPoint> = Vec::new();
    let mut snapshots: Vec<Snapshot> = Vec::new();
    let mut snap_stride: u64 = 1;
    let mut hist_stride: u64 = 1;
    let field_sup = |vals: &[f64]| vals.iter().fold(0.0f64, |a, &b| a.max(b));
    let mass_of = |vals: &[f64]| -> f64 {
        vals.iter()
            .enumerate()
            .map(|(i, &v)| sys.rho[i] * v * mesh.quad_weight(i))
            .sum()
    };
    snapshots.push(Snapshot { t: 0.0, values: u.clone() });
    history.push(HistoryPoint { t: 0.0, sup_norm: field_sup(&u), mass: mass_of(&u), dt });

    let push_final = |snapshots: &mut Vec<Snapshot>, t: f64, u: &[f64]| {
        if snapshots.last().map(|s| s.t < t).unwrap_or(true) {
            snapshots.push(Snapshot { t, values: u.to_vec() });
        }
    };

    let mut steps: u64 = 0;
    while t < t_end * (1.0 - 1e-14) {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(SolverError::StepLimit { t });
        }
        let dt_try = dt.min(t_end - t);
        let sup_now = field_sup(&u);

        let accepted = match cfg.stepper {
            Stepper::Explicit => {
                // parabolic restriction; the reaction limits growth per step
                let mut dt_stable = dt_try;
                for i in 0..n {
                    let h = mesh.h_left(i).min(mesh.h_right(i));
                    let diff = sys.power_prime(u[i]).max(1e-300);
                    dt_stable = dt_stable.min(0.45 * sys.rho[i] * h * h / diff);
                }
                if cfg.reaction_enabled && sup_now > 0.0 {
                    dt_stable = dt_stable.min(0.05 / (p * sup_now.powf(p - 1.0)));
                }
                let dt_used = dt_try.min(dt_stable).max(cfg.dt_min);
                let mut f = vec![0.0; n];
                sys.rhs(&u, &mut f);
                let mut v = u.clone();
                for i in 0..n {
                    v[i] = (v[i] + dt_used * f[i]).max(0.0);
                }
                if v.iter().all(|x| x.is_finite()) {
                    Some((v, dt_used, 0usize))
                } else {
                    None
                }
            }
            Stepper::Implicit => {
                let mut v = u.clone();
                let result = if cfg.order2 && u_prev.is_some() {
                    // variable-step BDF2: ((1+2r)/(1+r)) V - dt F(V)
                    //   = (1+r) u_n - (r^2/(1+r)) u_{n-1},  r = dt_n / dt_{n-1}
                    let (ref up, dt_prev) = *u_prev.as_ref().unwrap();
                    let rr = dt_try / dt_prev;
                    let a0 = (1.0 + 2.0 * rr) / (1.0 + rr);
                    let mut rhs_vec = vec![0.0; n];
                    for i in 0..n {
                        rhs_vec[i] =
                            (1.0 + rr) * u[i] - rr * rr / (1.0 + rr) * up[i];
                    }
                    newton_step(&sys, &mut v, &rhs_vec, dt_try, a0, cfg.newton_tol, cfg.newton_max_iters)
                } else {
                    newton_step(&sys, &mut v, &u, dt_try, 1.0, cfg.newton_tol, cfg.newton_max_iters)
                };
                match result {
                    Some(iters) => {
                        diag.newton_iters += iters as u64;
                        Some((v, dt_try, iters))
                    }
                    None => None,
                }
            }
        };

        let (mut v, dt_used, iters) = match accepted {
            Some(ok) => ok,
            None => {
                diag.rejected_steps += 1;
                dt *= 0.5;
                if dt < cfg.dt_min {
                    // step collapse: classify
                    push_final(&mut snapshots, t, &u);
                    let sup = field_sup(&u);
                    if sup >= cfg.m_cap {
                        return Ok(SolveResult {
                            status: Status::BlowUp { t_lo: t, t_hi: t + cfg.dt_min },
                            history,
                            snapshots,
                            mesh,
                            diagnostics: diag,
                        });
                    }
                    return Err(SolverError::NewtonDivergence { t, sup });
                }
                continue;
            }
        };

        // nonnegativity: clamp round-off dips, reject genuine undershoots
        let sup_v = field_sup(&v);
        let floor = -1e-11 * (1.0 + sup_v);
        let min_v = v.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_v < floor && dt > cfg.dt_min {
            diag.rejected_steps += 1;
            dt *= 0.5;
            continue;
        }
        if min_v < 0.0 {
            diag.clip_events += 1;
            for x in v.iter_mut() {
                if *x < 0.0 {
                    *x = 0.0;
                }
            }
        }

        // relative-change control
        let denom = sup_now.max(1e-8);
        let change = u.iter().zip(&v).fold(0.0f64, |a, (&x, &y)| a.max((y - x).abs())) / denom;
        if change > 0.10 && dt > cfg.dt_min {
            diag.rejected_steps += 1;
            dt *= 0.5;
            continue;
        }

        // accept
        let t_new = t + dt_used;
        if t_new == t {
            // dt fell below the time ulp; the step cannot advance
            push_final(&mut snapshots, t, &u);
            let sup = field_sup(&u);
            if sup >= cfg.m_cap {
                return Ok(SolveResult {
                    status: Status::BlowUp { t_lo: t, t_hi: t + cfg.dt_min },
                    history,
                    snapshots,
                    mesh,
                    diagnostics: diag,
                });
            }
            return Err(SolverError::NewtonDivergence { t, sup });
        }
        u_prev = Some((std::mem::take(&mut u), dt_used));
        u = v;
        t = t_new;
        diag.accepted_steps += 1;

        if diag.accepted_steps % hist_stride == 0 {
            history.push(HistoryPoint { t, sup_norm: field_sup(&u), mass: mass_of(&u), dt: dt_used });
            if history.len() > 400_000 {
                let kept: Vec<_> = history.iter().copied().step_by(2).collect();
                history = kept;
                hist_stride *= 2;
            }
        }
        if diag.accepted_steps % snap_stride == 0 {
            snapshots.push(Snapshot { t, values: u.clone() });
            if snapshots.len() > cfg.max_snapshots {
                let first = snapshots[0].clone();
                let mut kept: Vec<_> = snapshots.into_iter().skip(1).step_by(2).collect();
                kept.insert(0, first);
                snapshots = kept;
                snap_stride *= 2;
            }
        }

        let sup = field_sup(&u);
        if sup >= cfg.m_cap && dt_used <= cfg.dt_min * 1.0001 {
            push_final(&mut snapshots, t, &u);
            return Ok(SolveResult {
                status: Status::BlowUp { t_lo: t, t_hi: t + cfg.dt_min },
                history,
                snapshots,
                mesh,
                diagnostics: diag,
            });
        }

        // step growth on easy steps
        if iters <= 4 && change < 0.05 {
            dt = (dt * 1.2).min(cfg.dt_max);
        }
    }

    let sup = field_sup(&u);
    if sup >= cfg.m_cap {
        return Err(SolverError::NormCapNoCollapse { t, cap: cfg.m_cap });
    }
    push_final(&mut snapshots, t, &u);
    if history.last().map(|h| h.t < t).unwrap_or(true) {
        history.push(HistoryPoint { t, sup_norm: sup, mass: mass_of(&u), dt });
    }
    Ok(SolveResult { status: Status::Global { t_end: t }, history, snapshots, mesh, diagnostics: diag })
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuationLevel {
    pub delta: f64,
    pub sup_norm: f64,
    /// Minimum of (this level - previous level) on the common grid.
    pub min_gap_to_previous: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuationReport {
    pub levels: Vec<ContinuationLevel>,
    /// Sup difference between the last two levels on the common grid.
    pub cauchy_sup: f64,
    pub monotone_within_tol: bool,
    pub tol: f64,
}

fn interp_field(mesh: &Mesh, values: &[f64], x: f64) -> f64 {
    if x <= mesh.xl || x >= mesh.xr {
        return 0.0;
    }
    // piecewise-linear through the boundary zeros
    match mesh.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
        Ok(k) => values[k],
        Err(k) => {
            let (x0, v0) = if k == 0 { (mesh.xl, 0.0) } else { (mesh.xs[k - 1], values[k - 1]) };
            let (x1, v1) =
                if k == mesh.len() { (mesh.xr, 0.0) } else { (mesh.xs[k], values[k]) };
            let w = (x - x0) / (x1 - x0);
            v0 * (1.0 - w) + v1 * w
        }
    }
}

/// Solve on a decreasing sequence of `delta` levels and verify the monotone
/// approach to the minimal solution on the coarsest common grid.
pub fn minimal_solution(
    density: &DensitySpec,
    m: f64,
    p: f64,
    datum: &dyn Fn(f64) -> f64,
    deltas: &[f64],
    cfg: &SchemeConfig,
    t_end: f64,
    tol: f64,
) -> Result<(SolveResult, ContinuationReport), SolverError> {
    if deltas.is_empty() || deltas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(SolverError::BadConfig("delta sequence must be strictly decreasing".into()));
    }
    let mut results: Vec<SolveResult> = Vec::new();
    for &delta in deltas {
        let u0 = make_datum(density, delta, cfg, |x| datum(x).max(0.0))?;
        results.push(solve_regularized(density, m, p, &u0, delta, cfg, t_end)?);
    }
    // common comparison grid: the coarsest level's nodes
    let base = &results[0].mesh;
    let finals: Vec<Field> = results.iter().map(|r| r.final_field()).collect();
    let mut levels = Vec::new();
    let monotone = true;
    for (k, f) in finals.iter().enumerate() {
        let mut min_gap = None;
        if k > 0 {
            let prev = &finals[k - 1];
            let mut worst = f64::INFINITY;
            let mut worst_x = 0.0;
            for &x in &base.xs {
                let gap = interp_field(&f.mesh, &f.values, x) - interp_field(&prev.mesh, &prev.values, x);
                if gap < worst {
                    worst = gap;
                    worst_x = x;
                }
            }
            min_gap = Some(worst);
            if worst < -tol {
                return Err(SolverError::MonotonicityViolation {
                    x: worst_x,
                    level: k - 1,
                    next: k,
                    gap: worst,
                });
            }
        }
        levels.push(ContinuationLevel {
            delta: deltas[k],
            sup_norm: f.sup_norm(),
            min_gap_to_previous: min_gap,
        });
    }
    let cauchy_sup = if finals.len() >= 2 {
        let last = &finals[finals.len() - 1];
        let prev = &finals[finals.len() - 2];
        base.xs
            .iter()
            .map(|&x| {
                (interp_field(&last.mesh, &last.values, x) - interp_field(&prev.mesh, &prev.values, x)).abs()
            })
            .fold(0.0f64, f64::max)
    } else {
        0.0
    };
    let report = ContinuationReport { levels, cauchy_sup, monotone_within_tol: monotone, tol };
    Ok((results.pop().unwrap(), report))
}

#[derive(Debug, Clone, Serialize)]
pub struct SnapshotMargin {
    pub t: f64,
    pub min_margin: f64,
    pub argmin_x: f64,
    pub min_margin_over_tol: f64,
    pub support_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderingReport {
    pub orientation: Orientation,
    pub snapshots: Vec<SnapshotMargin>,
    pub overall_min_margin: f64,
    pub pass: bool,
    pub notes: Vec<String>,
}

/// Pointwise ordering between stored snapshots and a barrier. The margin is
/// `barrier - u` for a supersolution and `u - barrier` for a subsolution;
/// infinite barrier values impose no constraint. Tolerances are the local
/// linear-interpolation scale of the barrier on the mesh plus a small floor.
pub fn compare_with_barrier(
    result: &SolveResult,
    spec: &BarrierSpec,
    density: &DensitySpec,
    orientation: Orientation,
) -> Result<OrderingReport, SolverError> {
    let tf = spec.time_factors();
    let mesh = &result.mesh;
    let mut snaps = Vec::new();
    let mut overall = f64::INFINITY;
    let mut pass = true;
    let mut any = false;
    for snap in &result.snapshots {
        if tf.check(snap.t).is_err() {
            continue;
        }
        any = true;
        let sup_u = snap.values.iter().fold(0.0f64, |a, &b| a.max(b));
        let w: Vec<f64> =
            mesh.xs.iter().map(|&x| spec.eval(density, x, snap.t)).collect::<Result<_, _>>()?;
        let abs_floor = 1e-7 * (1.0 + sup_u);
        let mut min_margin = f64::INFINITY;
        let mut min_scaled = f64::INFINITY;
        let mut argmin = f64::NAN;
        for i in 0..mesh.len() {
            if !w[i].is_finite() {
                continue;
            }
            let margin = match orientation {
                Orientation::Super => w[i] - snap.values[i],
                Orientation::Sub => snap.values[i] - w[i],
            };
            let wl = if i == 0 { w[i] } else { w[i - 1] };
            let wr = if i + 1 == mesh.len() { w[i] } else { w[i + 1] };
            let local = if wl.is_finite() && wr.is_finite() {
                (w[i] - wl).abs().max((wr - w[i]).abs())
            } else {
                f64::INFINITY
            };
            let tol = 2.0 * local + abs_floor;
            if margin < min_margin {
                min_margin = margin;
                argmin = mesh.xs[i];
            }
            min_scaled = min_scaled.min(margin + tol);
        }
        // support inclusion: a supersolution confines the solution support
        let support_ok = match (orientation, spec.positivity_set(density, snap.t)?) {
            (Orientation::Super, PositivitySet::Ball { radius }) => {
                let buffer = 3.0 * (mesh.xr - mesh.xl) / mesh.len() as f64;
                let tol_supp = 1e-6 * (1.0 + sup_u);
                mesh.xs
                    .iter()
                    .zip(&snap.values)
                    .all(|(&x, &v)| x.abs() <= radius + buffer || v <= tol_supp)
            }
            _ => true,
        };
        pass &= min_scaled >= 0.0 && support_ok;
        overall = overall.min(min_margin);
        snaps.push(SnapshotMargin {
            t: snap.t,
            min_margin,
            argmin_x: argmin,
            min_margin_over_tol: min_scaled,
            support_ok,
        });
    }
    if !any {
        return Err(SolverError::WindowMismatch);
    }
    Ok(OrderingReport {
        orientation,
        snapshots: snaps,
        overall_min_margin: overall,
        pass,
        notes: vec!["infinite barrier values impose no constraint".into()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::DensitySpec;

    fn flat_density(r: f64) -> DensitySpec {
        DensitySpec::power(r, 0.0).unwrap()
    }

    #[test]
    fn mesh_symmetry_and_span() {
        for kind in [MeshKind::Uniform, MeshKind::Graded] {
            let mesh = Mesh::build(kind, 101, -0.9, 0.9, 1.05);
            assert_eq!(mesh.len(), 101);
            let n = mesh.len();
            for i in 0..n {
                assert!((mesh.xs[i] + mesh.xs[n - 1 - i]).abs() < 1e-13);
            }
            assert!(mesh.xs[0] > mesh.xl && mesh.xs[n - 1] < mesh.xr);
            assert!(mesh.xs.windows(2).all(|w| w[0] < w[1]));
        }
        // grading refines toward the boundary
        let g = Mesh::build(MeshKind::Graded, 201, -1.0, 1.0, 1.05);
        assert!(g.h_left(0) < g.h_left(g.len() / 2) / 3.0);
    }

    #[test]
    fn local_existence_examples() {
        let mesh = Mesh::build(MeshKind::Uniform, 17, -1.0, 1.0, 1.05);
        let one = Field::sample(mesh.clone(), |_| 1.0).unwrap();
        assert_eq!(local_existence_time(2.0, &one), 1.0);
        let two = Field::sample(mesh.clone(), |_| 2.0).unwrap();
        assert!((local_existence_time(3.0, &two) - 0.125).abs() < 1e-15);
        let zero = Field::sample(mesh, |_| 0.0).unwrap();
        assert_eq!(local_existence_time(3.0, &zero), f64::INFINITY);
    }

    #[test]
    fn zero_datum_stays_zero() {
        let den = flat_density(1.0);
        let cfg = SchemeConfig { nx: 33, ..Default::default() };
        let u0 = make_datum(&den, 1e-3, &cfg, |_| 0.0).unwrap();
        let res = solve_regularized(&den, 2.0, 3.0, &u0, 1e-3, &cfg, 0.5).unwrap();
        assert!(matches!(res.status, Status::Global { .. }));
        assert_eq!(res.final_field().sup_norm(), 0.0);
        for h in &res.history {
            assert_eq!(h.sup_norm, 0.0);
            assert_eq!(h.mass, 0.0);
        }
    }

    // Independent closed form of the source-free porous-medium spreading
    // solution used as the solver oracle.
    fn barenblatt(m: f64, c: f64, x: f64, t: f64) -> f64 {
        let alpha = 1.0 / (m + 1.0);
        let kappa = (m - 1.0) / (2.0 * m * (m + 1.0));
        let xi = x * t.powf(-alpha);
        let core: f64 = c - kappa * xi * xi;
        if core <= 0.0 {
            0.0
        } else {
            t.powf(-alpha) * core.powf(1.0 / (m - 1.0))
        }
    }

    #[test]
    fn pure_diffusion_matches_barenblatt() {
        let m = 2.0;
        let cb = 0.25;
        let den = flat_density(3.2);
        let cfg = SchemeConfig {
            nx: 321,
            mesh: MeshKind::Uniform,
            dt_max: 4e-4,
            dt0: 1e-5,
            reaction_enabled: false,
            ..Default::default()
        };
        let u0 = make_datum(&den, 1e-3, &cfg, |x| barenblatt(m, cb, x, 1.0)).unwrap();
        let mass0 = u0.weighted_mass(&den).unwrap();
        let res = solve_regularized(&den, m, 3.0, &u0, 1e-3, &cfg, 0.25).unwrap();
        let fin = res.final_field();
        let mass1 = fin.weighted_mass(&den).unwrap();
        assert!((mass1 - mass0).abs() <= 1e-4 * mass0, "mass drift {}", (mass1 - mass0) / mass0);
        // interior comparison away from the front
        let t_cmp = 1.25f64;
        let front = (cb / ((m - 1.0) / (2.0 * m * (m + 1.0)))).sqrt() * t_cmp.powf(1.0 / (m + 1.0));
        let sup_exact = barenblatt(m, cb, 0.0, t_cmp);
        let mut err: f64 = 0.0;
        for (i, &x) in fin.mesh.xs.iter().enumerate() {
            if x.abs() < 0.8 * front {
                err = err.max((fin.values[i] - barenblatt(m, cb, x, t_cmp)).abs());
            }
        }
        assert!(err / sup_exact < 0.02, "relative error {}", err / sup_exact);
    }

    #[test]
    fn symmetry_preserved() {
        let den = DensitySpec::power(1.0, 1.0).unwrap();
        let cfg = SchemeConfig { nx: 65, dt_max: 1e-3, ..Default::default() };
        let u0 = make_datum(&den, 1e-3, &cfg, |x| 0.05 * (1.0 - x * x)).unwrap();
        let res = solve_regularized(&den, 2.0, 3.0, &u0, 1e-3, &cfg, 0.5).unwrap();
        let fin = res.final_field();
        let n = fin.values.len();
        let sup = fin.sup_norm();
        for i in 0..n {
            let gap = (fin.values[i] - fin.values[n - 1 - i]).abs();
            assert!(gap <= 1e-9 * sup.max(1e-30), "asymmetry {gap} at node {i}");
        }
    }

    #[test]
    fn blowup_is_detected_and_gated() {
        let den = flat_density(1.0);
        // large datum, strong reaction: the sup norm runs away quickly
        let cfg = SchemeConfig { nx: 65, m_cap: 1e5, dt0: 1e-4, ..Default::default() };
        let u0 = make_datum(&den, 1e-3, &cfg, |x| 30.0 * (1.0 - x * x)).unwrap();
        let tau = local_existence_time(3.0, &u0);
        let res = solve_regularized(&den, 2.0, 3.0, &u0, 1e-3, &cfg, 10.0).unwrap();
        match res.status {
            Status::BlowUp { t_lo, t_hi } => {
                assert!(t_lo < t_hi);
                assert!(t_lo >= tau - cfg.dt_max, "blow-up before the existence bound");
                // histories strictly increasing
                assert!(res.history.windows(2).all(|w| w[0].t < w[1].t));
                let last_sup = res.history.last().unwrap().sup_norm;
                assert!(last_sup >= cfg.m_cap / 10.0);
            }
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn stiffness_failure_is_not_blowup() {
        let den = flat_density(1.0);
        // unreachable cap: the step collapses while the norm is still modest
        let cfg = SchemeConfig { nx: 65, m_cap: 1e30, dt0: 1e-4, ..Default::default() };
        let u0 = make_datum(&den, 1e-3, &cfg, |x| 30.0 * (1.0 - x * x)).unwrap();
        let err = solve_regularized(&den, 2.0, 3.0, &u0, 1e-3, &cfg, 10.0);
        assert!(matches!(err, Err(SolverError::NewtonDivergence { .. })));
    }

    #[test]
    fn dirichlet_and_nonnegativity_invariants() {
        let den = DensitySpec::power(1.0, 3.0).unwrap();
        let cfg = SchemeConfig { nx: 129, ..Default::default() };
        let u0 = make_datum(&den, 1e-2, &cfg, |x| 0.1 * (1.0 - x * x)).unwrap();
        let res = solve_regularized(&den, 2.0, 3.0, &u0, 1e-2, &cfg, 1.0).unwrap();
        for snap in &res.snapshots {
            assert!(snap.values.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn minimal_solution_zero_datum() {
        let den = DensitySpec::power(1.0, 1.0).unwrap();
        let cfg = SchemeConfig { nx: 33, ..Default::default() };
        let deltas = [0.1, 0.05, 0.025];
        let (res, rep) =
            minimal_solution(&den, 2.0, 3.0, &|_| 0.0, &deltas, &cfg, 0.2, 1e-6).unwrap();
        assert_eq!(res.final_field().sup_norm(), 0.0);
        assert_eq!(rep.cauchy_sup, 0.0);
        assert!(rep.monotone_within_tol);
    }

    #[test]
    fn minimal_solution_monotone_increase() {
        let den = DensitySpec::power(1.0, 1.0).unwrap();
        let cfg = SchemeConfig { nx: 101, ..Default::default() };
        let deltas = [0.1, 0.05, 0.025, 0.0125];
        let datum = |x: f64| 0.05 * (1.0 - x * x);
        // tolerance covers the linear-interpolation error between the two
        // grids (~h^2 |u''| with nx = 101)
        let (_, rep) = minimal_solution(&den, 2.0, 3.0, &datum, &deltas, &cfg, 0.5, 2e-5).unwrap();
        assert!(rep.monotone_within_tol);
        assert!(rep.cauchy_sup < 5e-3, "cauchy {}", rep.cauchy_sup);
        for lvl in &rep.levels[1..] {
            assert!(lvl.min_gap_to_previous.unwrap() >= -2e-5);
        }
    }

    #[test]
    fn explicit_stepper_agrees_on_smooth_data() {
        let den = flat_density(1.0);
        let base = SchemeConfig { nx: 65, dt0: 1e-5, dt_max: 1e-4, ..Default::default() };
        let expl = SchemeConfig { stepper: Stepper::Explicit, ..base };
        let u0 = make_datum(&den, 1e-3, &base, |x| 0.1 * (1.0 - x * x)).unwrap();
        let a = solve_regularized(&den, 2.0, 3.0, &u0, 1e-3, &base, 0.05).unwrap();
        let b = solve_regularized(&den, 2.0, 3.0, &u0, 1e-3, &expl, 0.05).unwrap();
        let fa = a.final_field();
        let fb = b.final_field();
        let gap = fa
            .values
            .iter()
            .zip(&fb.values)
            .fold(0.0f64, |acc, (&x, &y)| acc.max((x - y).abs()));
        assert!(gap < 2e-4, "stepper mismatch {gap}");
    }
}
