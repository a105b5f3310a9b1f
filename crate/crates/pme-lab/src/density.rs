//! Admissible weights `rho(x)` on `(-R, R)`.
//!
//! A weight is positive and continuous in the open interval and is sandwiched
//! between `c1 (R-|x|)^-q` and `c2 (R-|x|)^-q` on a boundary collar of width
//! `eps0`. The decay exponent `q >= 0` splits the problem into three regimes
//! (fast `q > 2`, critical `q = 2`, slow `q < 2`) that select which barrier
//! families exist.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DensityError {
    #[error("x = {x} is on or outside the domain boundary |x| >= R = {r}")]
    DomainBoundary { x: f64, r: f64 },
    #[error("singularity exponent q = {q} must be nonnegative")]
    NegativeExponent { q: f64 },
    #[error("invalid density spec: {0}")]
    InvalidSpec(String),
    #[error("collar sandwich violated at x = {x}: rho = {rho}, envelope [{lo}, {hi}]")]
    SandwichViolation { x: f64, rho: f64, lo: f64, hi: f64 },
}

/// Decay regime of `1/rho` at the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Regime {
    /// `q > 2`; carries the auxiliary exponent `b = q - 2`.
    Fast { b: f64 },
    /// `q = 2`.
    Critical,
    /// `0 <= q < 2`.
    Slow,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Fast { .. } => "fast",
            Regime::Critical => "critical",
            Regime::Slow => "slow",
        }
    }
}

/// Classify the decay regime of the exponent `q`.
pub fn classify_regime(q: f64) -> Result<Regime, DensityError> {
    if q < 0.0 || !q.is_finite() {
        return Err(DensityError::NegativeExponent { q });
    }
    Ok(if q > 2.0 {
        Regime::Fast { b: q - 2.0 }
    } else if q == 2.0 {
        Regime::Critical
    } else {
        Regime::Slow
    })
}

/// Interior profile of the weight.
#[derive(Debug, Clone)]
pub enum Profile {
    /// Canonical weight `(R-|x|)^-q` on the whole interval.
    Power,
    /// Tabulated samples `(x, rho)`, linearly interpolated. Outside the
    /// tabulated span the weight continues as `sqrt(c1 c2) (R-|x|)^-q`, which
    /// stays inside the collar envelope.
    Table { xs: Vec<f64>, rhos: Vec<f64> },
}

/// A weight specification. Immutable after construction; admission checks run
/// in the constructor, so a value of this type always satisfies the collar
/// sandwich on its declared collar.
#[derive(Debug, Clone)]
pub struct DensitySpec {
    r: f64,
    q: f64,
    c1: f64,
    c2: f64,
    eps0: f64,
    profile: Profile,
    even: bool,
}

/// Grid size used by the constructor's collar admission check.
const ADMISSION_GRID: usize = 2001;

impl DensitySpec {
    /// Canonical power-law weight `(R-|x|)^-q` with `c1 = c2 = 1`.
    pub fn power(r: f64, q: f64) -> Result<Self, DensityError> {
        Self::new(r, q, 1.0, 1.0, 0.5 * r, Profile::Power)
    }

    pub fn new(
        r: f64,
        q: f64,
        c1: f64,
        c2: f64,
        eps0: f64,
        profile: Profile,
    ) -> Result<Self, DensityError> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(DensityError::InvalidSpec(format!("R = {r} must be positive")));
        }
        if q < 0.0 || !q.is_finite() {
            return Err(DensityError::NegativeExponent { q });
        }
        if !(0.0 < c1 && c1 <= c2) || !c2.is_finite() {
            return Err(DensityError::InvalidSpec(format!(
                "sandwich constants must satisfy 0 < c1 <= c2, got c1 = {c1}, c2 = {c2}"
            )));
        }
        if !(eps0 > 0.0 && eps0 < r) {
            return Err(DensityError::InvalidSpec(format!(
                "collar width must satisfy 0 < eps0 < R, got eps0 = {eps0}"
            )));
        }
        let even = match &profile {
            Profile::Power => true,
            Profile::Table { xs, rhos } => {
                if xs.len() != rhos.len() || xs.len() < 2 {
                    return Err(DensityError::InvalidSpec(
                        "table profile needs matching x/rho columns with >= 2 rows".into(),
                    ));
                }
                if xs.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(DensityError::InvalidSpec(
                        "table abscissae must be strictly increasing".into(),
                    ));
                }
                if xs[0] <= -r || *xs.last().unwrap() >= r {
                    return Err(DensityError::InvalidSpec(
                        "table abscissae must lie strictly inside (-R, R)".into(),
                    ));
                }
                if rhos.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
                    return Err(DensityError::InvalidSpec("table weights must be positive".into()));
                }
                table_is_even(xs, rhos)
            }
        };
        let spec = DensitySpec { r, q, c1, c2, eps0, profile, even };
        spec.check_collar_sandwich()?;
        Ok(spec)
    }

    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn c1(&self) -> f64 {
        self.c1
    }
    pub fn c2(&self) -> f64 {
        self.c2
    }
    pub fn eps0(&self) -> f64 {
        self.eps0
    }
    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn regime(&self) -> Regime {
        classify_regime(self.q).expect("q validated at construction")
    }

    /// Evaluate the weight at `|x| < R`.
    pub fn eval(&self, x: f64) -> Result<f64, DensityError> {
        if x.abs() >= self.r || !x.is_finite() {
            return Err(DensityError::DomainBoundary { x, r: self.r });
        }
        Ok(match &self.profile {
            Profile::Power => (self.r - x.abs()).powf(-self.q),
            Profile::Table { xs, rhos } => {
                if x < xs[0] || x > *xs.last().unwrap() {
                    // collar continuation between the envelopes
                    (self.c1 * self.c2).sqrt() * (self.r - x.abs()).powf(-self.q)
                } else {
                    interp_linear(xs, rhos, x)
                }
            }
        })
    }

    /// Uniform bounds `rho1 <= rho <= rho2` on `[-R+eps0, R-eps0]`, by grid
    /// min/max refined until both bounds are stable to relative 1e-6.
    pub fn uniform_bounds(&self, eps0: f64) -> Result<(f64, f64), DensityError> {
        if !(eps0 > 0.0 && eps0 < self.r) {
            return Err(DensityError::InvalidSpec(format!(
                "uniform_bounds needs 0 < eps0 < R, got {eps0}"
            )));
        }
        let lo = -self.r + eps0;
        let hi = self.r - eps0;
        let mut n = 1025usize;
        let mut prev: Option<(f64, f64)> = None;
        loop {
            let mut mn = f64::INFINITY;
            let mut mx = f64::NEG_INFINITY;
            for i in 0..n {
                let x = lo + (hi - lo) * (i as f64) / ((n - 1) as f64);
                let v = self.eval(x)?;
                mn = mn.min(v);
                mx = mx.max(v);
            }
            if let Some((pmn, pmx)) = prev {
                let stable = (mn - pmn).abs() <= 1e-6 * pmn.abs().max(1e-300)
                    && (mx - pmx).abs() <= 1e-6 * pmx.abs().max(1e-300);
                if stable || n > 4_000_000 {
                    return Ok((mn.min(pmn), mx.max(pmx)));
                }
            }
            prev = Some((mn, mx));
            n = 2 * n - 1;
        }
    }

    fn check_collar_sandwich(&self) -> Result<(), DensityError> {
        // Sample the collar on both sides, staying clear of the boundary where
        // the canonical profile overflows. Allow a small relative slack for
        // interpolated tables.
        let slack = match self.profile {
            Profile::Power => 1e-12,
            Profile::Table { .. } => 1e-9,
        };
        for side in [-1.0, 1.0] {
            for i in 0..ADMISSION_GRID {
                let frac = (i as f64 + 0.5) / ADMISSION_GRID as f64;
                // |x| in (R - eps0, R - eps0/1024)
                let dist = self.eps0 * (1.0 / 1024.0 + (1.0 - 1.0 / 1024.0) * frac);
                let x = side * (self.r - dist);
                let rho = self.eval(x)?;
                let envelope = dist.powf(-self.q);
                let lo = self.c1 * envelope;
                let hi = self.c2 * envelope;
                if rho < lo * (1.0 - slack) || rho > hi * (1.0 + slack) {
                    return Err(DensityError::SandwichViolation { x, rho, lo, hi });
                }
            }
        }
        Ok(())
    }
}

fn table_is_even(xs: &[f64], rhos: &[f64]) -> bool {
    let n = xs.len();
    (0..n).all(|i| {
        let j = n - 1 - i;
        (xs[i] + xs[j]).abs() <= 1e-12 * xs[j].abs().max(1.0)
            && (rhos[i] - rhos[j]).abs() <= 1e-12 * rhos[j].abs().max(1.0)
    })
}

fn interp_linear(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let k = match xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
        Ok(k) => return ys[k],
        Err(k) => k,
    };
    // x is strictly inside [xs[0], xs[n-1]] here
    let (x0, x1) = (xs[k - 1], xs[k]);
    let w = (x - x0) / (x1 - x0);
    ys[k - 1] * (1.0 - w) + ys[k] * w
}
