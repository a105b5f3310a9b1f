//! Explicit barrier families for the weighted reaction-diffusion problem
//! `rho u_t = (u^m)_xx + rho u^p` on `(-R, R)`.
//!
//! Every bracket family has the shape
//!
//! ```text
//! w(x, t) = C zeta(t) [ 1 - prof(x) eta(t) / a ]_+^(s/(m-1))
//! ```
//!
//! with a regime-specific spatial profile `prof` and power-law time factors
//! `zeta`, `eta`. The slow regime instead uses the bracket-free
//! `w = C zeta(t) (R-|x|)^(d/m)`. Spatial profiles are glued from an outer
//! collar branch and an inner quadratic branch so that `prof` is C^1 at
//! `|x| = R - eps`.
//!
//! Closed-form derivatives come from one chain-rule routine parameterized by
//! (profile branch, bracket sign); nothing is transcribed per family.

use crate::density::{DensitySpec, Regime};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BarrierError {
    #[error("time t = {t} outside the factor domain [0, {t_ref})")]
    TimeOutOfDomain { t: f64, t_ref: f64 },
    #[error("x = {x} sits on a branch interface; evaluate one-sided")]
    OnBranchInterface { x: f64 },
    #[error("bracket is nonpositive at x = {x}, t = {t}: {bracket}")]
    BracketNonpositive { x: f64, t: f64, bracket: f64 },
    #[error("x = {x} is outside the closed domain [-R, R]")]
    DomainBoundary { x: f64 },
    #[error("invalid barrier spec: {0}")]
    BadSpec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    Super,
    Sub,
}

impl Orientation {
    pub fn name(&self) -> &'static str {
        match self {
            Orientation::Super => "super",
            Orientation::Sub => "sub",
        }
    }
}

/// Sign convention for the quadratic core branch of the critical-regime
/// logarithmic profile. `Matched` is the C^1-matching convention
/// `((R-eps)^2 - |x|^2) / (2 eps (R-eps)) + log(eps)`; `Flipped` negates the
/// quadratic part and does not match the outer slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CoreQuadSign {
    Matched,
    Flipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Outer,
    Inner,
}

/// Which side of an interface to take when evaluating one-sided derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    TowardCenter,
    TowardBoundary,
}

const INTERFACE_TOL: f64 = 1e-13;

/// Glued profile for the fast regime: `(R-|x|)^-b` on the collar, a matching
/// parabola in the core.
#[derive(Debug, Clone, Copy)]
pub struct ProfileFast {
    pub r: f64,
    pub eps: f64,
    pub b: f64,
}

impl ProfileFast {
    pub fn value(&self, x: f64) -> f64 {
        let ax = x.abs();
        if ax > self.r - self.eps {
            (self.r - ax).powf(-self.b) // +inf at |x| = R
        } else {
            self.inner_value(x)
        }
    }

    /// Branch-explicit value (both formulas are defined at the interface).
    pub fn value_on(&self, x: f64, branch: Branch) -> f64 {
        match branch {
            Branch::Outer => (self.r - x.abs()).powf(-self.b),
            Branch::Inner => self.inner_value(x),
        }
    }

    /// Branch-explicit slope, for gluing checks.
    pub fn deriv1_on(&self, x: f64, branch: Branch) -> f64 {
        self.d1(x, branch)
    }

    fn inner_value(&self, x: f64) -> f64 {
        let re = self.r - self.eps;
        (2.0 * self.eps - self.b * re + self.b * x * x / re) / (2.0 * self.eps.powf(self.b + 1.0))
    }

    fn d1(&self, x: f64, branch: Branch) -> f64 {
        match branch {
            Branch::Outer => self.b * x.signum() * (self.r - x.abs()).powf(-self.b - 1.0),
            Branch::Inner => self.b * x / (self.eps.powf(self.b + 1.0) * (self.r - self.eps)),
        }
    }

    fn d2(&self, x: f64, branch: Branch) -> f64 {
        match branch {
            Branch::Outer => self.b * (self.b + 1.0) * (self.r - x.abs()).powf(-self.b - 2.0),
            Branch::Inner => self.b / (self.eps.powf(self.b + 1.0) * (self.r - self.eps)),
        }
    }
}

/// Glued critical-regime profile: `log(R-|x|)` on the collar, quadratic core.
#[derive(Debug, Clone, Copy)]
pub struct ProfileCriticalLog {
    pub r: f64,
    pub eps: f64,
    pub core_sign: CoreQuadSign,
}

impl ProfileCriticalLog {
    pub fn value(&self, x: f64) -> Result<f64, BarrierError> {
        let ax = x.abs();
        if ax >= self.r {
            return Err(BarrierError::DomainBoundary { x });
        }
        Ok(if ax > self.r - self.eps { (self.r - ax).ln() } else { self.inner_value(x) })
    }

    /// Branch-explicit value (both formulas are defined at the interface).
    pub fn value_on(&self, x: f64, branch: Branch) -> f64 {
        match branch {
            Branch::Outer => (self.r - x.abs()).ln(),
            Branch::Inner => self.inner_value(x),
        }
    }

    /// Branch-explicit slope, for gluing checks.
    pub fn deriv1_on(&self, x: f64, branch: Branch) -> f64 {
        self.d1(x, branch)
    }

    fn inner_value(&self, x: f64) -> f64 {
        let re = self.r - self.eps;
        let quad = (re * re - x * x) / (2.0 * self.eps * re);
        match self.core_sign {
            CoreQuadSign::Matched => quad + self.eps.ln(),
            CoreQuadSign::Flipped => -quad + self.eps.ln(),
        }
    }

    fn d1(&self, x: f64, branch: Branch) -> f64 {
        let re = self.r - self.eps;
        match branch {
            Branch::Outer => -x.signum() / (self.r - x.abs()),
            Branch::Inner => match self.core_sign {
                CoreQuadSign::Matched => -x / (self.eps * re),
                CoreQuadSign::Flipped => x / (self.eps * re),
            },
        }
    }

    fn d2(&self, x: f64, branch: Branch) -> f64 {
        let re = self.r - self.eps;
        match branch {
            Branch::Outer => {
                let d = self.r - x.abs();
                -1.0 / (d * d)
            }
            Branch::Inner => match self.core_sign {
                CoreQuadSign::Matched => -1.0 / (self.eps * re),
                CoreQuadSign::Flipped => 1.0 / (self.eps * re),
            },
        }
    }
}

/// Power-law time factors.
///
/// Forward: `zeta = (T+t)^-alpha`, `eta = (T+t)^-beta`, defined for `t >= 0`.
/// Backward: `zeta = (T-t)^-alpha`, `eta = (T-t)^beta`, defined for `0 <= t < T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FactorKind {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TimeFactors {
    pub kind: FactorKind,
    pub alpha: f64,
    pub beta: f64,
    pub t_ref: f64,
}

impl TimeFactors {
    pub fn check(&self, t: f64) -> Result<(), BarrierError> {
        let ok = match self.kind {
            FactorKind::Forward => t >= 0.0,
            FactorKind::Backward => t >= 0.0 && t < self.t_ref,
        };
        if ok && t.is_finite() {
            Ok(())
        } else {
            Err(BarrierError::TimeOutOfDomain { t, t_ref: self.t_ref })
        }
    }

    pub fn zeta(&self, t: f64) -> f64 {
        match self.kind {
            FactorKind::Forward => (self.t_ref + t).powf(-self.alpha),
            FactorKind::Backward => (self.t_ref - t).powf(-self.alpha),
        }
    }

    pub fn zeta_prime(&self, t: f64) -> f64 {
        match self.kind {
            FactorKind::Forward => -self.alpha * (self.t_ref + t).powf(-self.alpha - 1.0),
            FactorKind::Backward => self.alpha * (self.t_ref - t).powf(-self.alpha - 1.0),
        }
    }

    pub fn eta(&self, t: f64) -> f64 {
        match self.kind {
            FactorKind::Forward => (self.t_ref + t).powf(-self.beta),
            FactorKind::Backward => (self.t_ref - t).powf(self.beta),
        }
    }

    /// Logarithmic derivative `eta'/eta`.
    pub fn eta_log_prime(&self, t: f64) -> f64 {
        match self.kind {
            FactorKind::Forward => -self.beta / (self.t_ref + t),
            FactorKind::Backward => -self.beta / (self.t_ref - t),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    FastSuper,
    FastSub,
    CriticalSuper,
    CriticalSub,
    SlowSuper,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::FastSuper => "fast-super",
            Family::FastSub => "fast-sub",
            Family::CriticalSuper => "critical-super",
            Family::CriticalSub => "critical-sub",
            Family::SlowSuper => "slow-super",
        }
    }
}

/// One explicit barrier. Immutable; all fields validated at construction.
#[derive(Debug, Clone)]
pub struct BarrierSpec {
    pub regime: Regime,
    pub orientation: Orientation,
    /// Amplitude `C`.
    pub c_amp: f64,
    /// Profile scale `a`.
    pub a: f64,
    /// Reference time `T`.
    pub t_ref: f64,
    pub m: f64,
    pub p: f64,
    /// Collar width of the glued profile (fast and critical-sub families).
    pub eps: f64,
    /// Spatial exponent of the critical supersolution profile `(R-|x|)^-delta`.
    pub delta_exp: Option<f64>,
    /// Slow-regime profile exponent `d` (barrier `C zeta (R-|x|)^(d/m)`).
    pub d_exp: Option<f64>,
    /// Slow-regime time exponent: `zeta = (T+t)^slow_alpha`.
    pub slow_alpha: f64,
    /// Sign `s` in the bracket power `[.]_+^(s/(m-1))`.
    pub bracket_sign: i8,
    pub core_quad: CoreQuadSign,
}

pub struct BarrierDerivs {
    pub w_t: f64,
    pub wm_x: f64,
    pub wm_xx: f64,
}

impl BarrierSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        density: &DensitySpec,
        orientation: Orientation,
        c_amp: f64,
        a: f64,
        t_ref: f64,
        m: f64,
        p: f64,
        eps: f64,
        delta_exp: Option<f64>,
        d_exp: Option<f64>,
        slow_alpha: f64,
        bracket_sign: i8,
        core_quad: CoreQuadSign,
    ) -> Result<Self, BarrierError> {
        if !(m > 1.0 && p > 1.0) {
            return Err(BarrierError::BadSpec(format!("need m > 1 and p > 1, got m = {m}, p = {p}")));
        }
        if !(c_amp > 0.0 && a > 0.0 && t_ref > 0.0) {
            return Err(BarrierError::BadSpec(format!(
                "need C, a, T > 0, got C = {c_amp}, a = {a}, T = {t_ref}"
            )));
        }
        if bracket_sign != 1 && bracket_sign != -1 {
            return Err(BarrierError::BadSpec(format!("bracket sign must be +-1, got {bracket_sign}")));
        }
        let regime = density.regime();
        let r = density.r();
        match regime {
            Regime::Fast { b } => {
                if !(eps > 0.0 && eps < r) {
                    return Err(BarrierError::BadSpec(format!("collar width must be in (0, R), got {eps}")));
                }
                if orientation == Orientation::Sub && eps >= b / (b + 2.0) * r {
                    return Err(BarrierError::BadSpec(format!(
                        "fast blow-up barriers need eps < b R / (b+2) = {}",
                        b / (b + 2.0) * r
                    )));
                }
            }
            Regime::Critical => match orientation {
                Orientation::Super => {
                    if !delta_exp.map(|d| d > 0.0).unwrap_or(false) {
                        return Err(BarrierError::BadSpec("critical supersolution needs delta_exp > 0".into()));
                    }
                }
                Orientation::Sub => {
                    if !(eps > 0.0 && eps < r) {
                        return Err(BarrierError::BadSpec(format!("collar width must be in (0, R), got {eps}")));
                    }
                }
            },
            Regime::Slow => {
                if orientation == Orientation::Sub {
                    return Err(BarrierError::BadSpec("no slow-regime subsolution family".into()));
                }
                let dmax = (2.0 - density.q()).min(1.0);
                match d_exp {
                    Some(d) if d > 0.0 && d < dmax => {}
                    _ => {
                        return Err(BarrierError::BadSpec(format!(
                            "slow profile exponent d must lie in (0, {dmax})"
                        )))
                    }
                }
            }
        }
        Ok(BarrierSpec {
            regime,
            orientation,
            c_amp,
            a,
            t_ref,
            m,
            p,
            eps,
            delta_exp,
            d_exp,
            slow_alpha,
            bracket_sign,
            core_quad,
        })
    }

    pub fn family(&self) -> Family {
        match (self.regime, self.orientation) {
            (Regime::Fast { .. }, Orientation::Super) => Family::FastSuper,
            (Regime::Fast { .. }, Orientation::Sub) => Family::FastSub,
            (Regime::Critical, Orientation::Super) => Family::CriticalSuper,
            (Regime::Critical, Orientation::Sub) => Family::CriticalSub,
            (Regime::Slow, _) => Family::SlowSuper,
        }
    }

    pub fn time_factors(&self) -> TimeFactors {
        let (m, p, t_ref) = (self.m, self.p, self.t_ref);
        let alpha = 1.0 / (p - 1.0);
        match self.family() {
            Family::FastSuper | Family::CriticalSuper => TimeFactors {
                kind: FactorKind::Forward,
                alpha,
                beta: (p - m) / (p - 1.0),
                t_ref,
            },
            // Blow-up factors: eta = (T-t)^((m-p)/(p-1)); for p > m this grows,
            // matching the proof-side coefficient computations.
            Family::FastSub | Family::CriticalSub => TimeFactors {
                kind: FactorKind::Backward,
                alpha,
                beta: (m - p) / (p - 1.0),
                t_ref,
            },
            Family::SlowSuper => TimeFactors {
                kind: FactorKind::Forward,
                alpha: -self.slow_alpha,
                beta: 0.0,
                t_ref,
            },
        }
    }

    fn profile_fast(&self, r: f64) -> ProfileFast {
        let b = match self.regime {
            Regime::Fast { b } => b,
            _ => unreachable!(),
        };
        ProfileFast { r, eps: self.eps, b }
    }

    fn profile_log(&self, r: f64) -> ProfileCriticalLog {
        ProfileCriticalLog { r, eps: self.eps, core_sign: self.core_quad }
    }

    /// Spatial profile value entering the bracket. `None` for the slow family.
    pub fn profile_value(&self, density: &DensitySpec, x: f64) -> Result<Option<f64>, BarrierError> {
        let r = density.r();
        if x.abs() > r {
            return Err(BarrierError::DomainBoundary { x });
        }
        Ok(match self.family() {
            Family::FastSuper | Family::FastSub => Some(self.profile_fast(r).value(x)),
            Family::CriticalSuper => {
                let delta = self.delta_exp.unwrap();
                Some((r - x.abs()).powf(-delta))
            }
            Family::CriticalSub => Some(if x.abs() >= r {
                f64::NEG_INFINITY
            } else {
                self.profile_log(r).value(x)?
            }),
            Family::SlowSuper => None,
        })
    }

    /// Bracket `1 - prof(x) eta(t) / a`; `None` for the slow family.
    pub fn bracket(&self, density: &DensitySpec, x: f64, t: f64) -> Result<Option<f64>, BarrierError> {
        let tf = self.time_factors();
        tf.check(t)?;
        Ok(self.profile_value(density, x)?.map(|s| 1.0 - s * tf.eta(t) / self.a))
    }

    /// Barrier value; `+inf` is the "no constraint" sentinel of supersolutions
    /// with negative bracket exponent.
    pub fn eval(&self, density: &DensitySpec, x: f64, t: f64) -> Result<f64, BarrierError> {
        let tf = self.time_factors();
        tf.check(t)?;
        let r = density.r();
        if x.abs() > r {
            return Err(BarrierError::DomainBoundary { x });
        }
        if let Family::SlowSuper = self.family() {
            let d = self.d_exp.unwrap();
            return Ok(self.c_amp * tf.zeta(t) * (r - x.abs()).powf(d / self.m));
        }
        let bracket = self.bracket(density, x, t)?.unwrap();
        let e = f64::from(self.bracket_sign) / (self.m - 1.0);
        if bracket <= 0.0 {
            return Ok(if self.bracket_sign > 0 { 0.0 } else { f64::INFINITY });
        }
        Ok(self.c_amp * tf.zeta(t) * bracket.powf(e))
    }

    fn branch_of(&self, density: &DensitySpec, x: f64) -> Result<Branch, BarrierError> {
        let r = density.r();
        let ax = x.abs();
        if ax > r {
            return Err(BarrierError::DomainBoundary { x });
        }
        match self.family() {
            Family::FastSuper | Family::FastSub | Family::CriticalSub => {
                let gap = ax - (r - self.eps);
                if gap.abs() <= INTERFACE_TOL * r {
                    Err(BarrierError::OnBranchInterface { x })
                } else if gap > 0.0 {
                    Ok(Branch::Outer)
                } else {
                    Ok(Branch::Inner) // quadratic in x, smooth through 0
                }
            }
            Family::CriticalSuper | Family::SlowSuper => {
                // single global branch with an |x| kink at the origin
                if ax <= INTERFACE_TOL * r {
                    Err(BarrierError::OnBranchInterface { x })
                } else {
                    Ok(Branch::Outer)
                }
            }
        }
    }

    /// Which smooth branch `x` belongs to, or an interface error.
    pub fn branch_probe(&self, density: &DensitySpec, x: f64) -> Result<Branch, BarrierError> {
        self.branch_of(density, x)
    }

    /// Value computed from an explicit branch formula of the glued profiles;
    /// falls back to the plain evaluation for single-branch families.
    pub fn eval_on_branch(
        &self,
        density: &DensitySpec,
        x: f64,
        t: f64,
        branch: Branch,
    ) -> Result<f64, BarrierError> {
        let tf = self.time_factors();
        tf.check(t)?;
        let r = density.r();
        let s = match self.family() {
            Family::FastSuper | Family::FastSub => self.profile_fast(r).value_on(x, branch),
            Family::CriticalSub => self.profile_log(r).value_on(x, branch),
            _ => return self.eval(density, x, t),
        };
        let bracket = 1.0 - s * tf.eta(t) / self.a;
        if bracket <= 0.0 {
            return Ok(if self.bracket_sign > 0 { 0.0 } else { f64::INFINITY });
        }
        let e = f64::from(self.bracket_sign) / (self.m - 1.0);
        Ok(self.c_amp * tf.zeta(t) * bracket.powf(e))
    }

    /// Closed-form `(w_t, (w^m)_x, (w^m)_xx)` at a smooth-branch point.
    pub fn derivatives(
        &self,
        density: &DensitySpec,
        x: f64,
        t: f64,
    ) -> Result<BarrierDerivs, BarrierError> {
        let branch = self.branch_of(density, x)?;
        self.derivatives_on(density, x, t, branch)
    }

    /// One-sided variant for points on an interface.
    pub fn derivatives_sided(
        &self,
        density: &DensitySpec,
        x: f64,
        t: f64,
        side: Side,
    ) -> Result<BarrierDerivs, BarrierError> {
        let branch = match self.branch_of(density, x) {
            Ok(b) => b,
            Err(BarrierError::OnBranchInterface { .. }) => match side {
                Side::TowardBoundary => Branch::Outer,
                Side::TowardCenter => Branch::Inner,
            },
            Err(e) => return Err(e),
        };
        self.derivatives_on(density, x, t, branch)
    }

    fn derivatives_on(
        &self,
        density: &DensitySpec,
        x: f64,
        t: f64,
        branch: Branch,
    ) -> Result<BarrierDerivs, BarrierError> {
        let tf = self.time_factors();
        tf.check(t)?;
        let r = density.r();
        let (m, c) = (self.m, self.c_amp);
        let zeta = tf.zeta(t);
        let zeta_p = tf.zeta_prime(t);

        if let Family::SlowSuper = self.family() {
            let d = self.d_exp.unwrap();
            let rad = r - x.abs();
            let cm = c.powf(m) * zeta.powf(m);
            return Ok(BarrierDerivs {
                w_t: c * zeta_p * rad.powf(d / m),
                wm_x: -x.signum() * d * cm * rad.powf(d - 1.0),
                wm_xx: d * (d - 1.0) * cm * rad.powf(d - 2.0),
            });
        }

        // bracket families: w = C zeta B^e with B = 1 - prof(x) eta / a
        let eta = tf.eta(t);
        let eta_lp = tf.eta_log_prime(t);
        let (s, s1, s2) = match self.family() {
            Family::FastSuper | Family::FastSub => {
                let pr = self.profile_fast(r);
                (pr.value(x), pr.d1(x, branch), pr.d2(x, branch))
            }
            Family::CriticalSuper => {
                let delta = self.delta_exp.unwrap();
                let rad = r - x.abs();
                (
                    rad.powf(-delta),
                    delta * x.signum() * rad.powf(-delta - 1.0),
                    delta * (delta + 1.0) * rad.powf(-delta - 2.0),
                )
            }
            Family::CriticalSub => {
                let pr = self.profile_log(r);
                (pr.value(x)?, pr.d1(x, branch), pr.d2(x, branch))
            }
            Family::SlowSuper => unreachable!(),
        };
        let b_val = 1.0 - s * eta / self.a;
        if !(b_val > 0.0) {
            return Err(BarrierError::BracketNonpositive { x, t, bracket: b_val });
        }
        let b_x = -eta / self.a * s1;
        let b_xx = -eta / self.a * s2;
        let e = f64::from(self.bracket_sign) / (m - 1.0);
        let em = e * m;
        let cm = c.powf(m) * zeta.powf(m);
        Ok(BarrierDerivs {
            w_t: c * zeta_p * b_val.powf(e)
                - c * e * zeta * eta_lp * (1.0 - b_val) * b_val.powf(e - 1.0),
            wm_x: cm * em * b_val.powf(em - 1.0) * b_x,
            wm_xx: cm * em * ((em - 1.0) * b_val.powf(em - 2.0) * b_x * b_x + b_val.powf(em - 1.0) * b_xx),
        })
    }

    /// Describes `{x : bracket > 0}` at time `t` (full support of the barrier
    /// for bracket sign +1).
    pub fn positivity_set(&self, density: &DensitySpec, t: f64) -> Result<PositivitySet, BarrierError> {
        let tf = self.time_factors();
        tf.check(t)?;
        let r = density.r();
        let level = self.a / tf.eta(t); // bracket > 0 <=> prof < level
        Ok(match self.family() {
            Family::SlowSuper => PositivitySet::All,
            Family::FastSuper | Family::FastSub => {
                let pr = self.profile_fast(r);
                let s_interface = self.eps.powf(-pr.b);
                if level >= s_interface {
                    PositivitySet::Ball { radius: r - level.powf(-1.0 / pr.b) }
                } else {
                    // edge inside the core: g0 + b x^2 / (2 eps^(b+1) (R-eps)) = level
                    let re = r - self.eps;
                    let g0 = (2.0 * self.eps - pr.b * re) / (2.0 * self.eps.powf(pr.b + 1.0));
                    let x2 = (level - g0) * 2.0 * self.eps.powf(pr.b + 1.0) * re / pr.b;
                    if x2 <= 0.0 {
                        PositivitySet::Empty
                    } else {
                        PositivitySet::Ball { radius: x2.sqrt().min(r) }
                    }
                }
            }
            Family::CriticalSuper => {
                let delta = self.delta_exp.unwrap();
                let edge = level.powf(-1.0 / delta);
                if edge >= r {
                    PositivitySet::Empty
                } else {
                    PositivitySet::Ball { radius: r - edge }
                }
            }
            Family::CriticalSub => {
                // profile decreases in |x| and diverges to -inf at the boundary,
                // so {prof < level} is an outer shell (or everything).
                let pr = self.profile_log(r);
                let center = pr.value(0.0)?;
                if center < level {
                    PositivitySet::All
                } else {
                    let mut lo = 0.0;
                    let mut hi = r * (1.0 - 1e-15);
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        if pr.value(mid)? >= level {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    PositivitySet::Shell { inner_radius: 0.5 * (lo + hi) }
                }
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PositivitySet {
    Empty,
    All,
    /// `{ |x| < radius }`
    Ball { radius: f64 },
    /// `{ |x| > inner_radius }`
    Shell { inner_radius: f64 },
}
