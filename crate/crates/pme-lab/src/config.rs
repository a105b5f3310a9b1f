//! Experiment configuration: one TOML file with `density`, `exponents`,
//! `barrier` (optional), `datum`, `solver` and `outputs` sections. Unknown
//! keys are rejected; missing required keys are reported with their field
//! path.

use crate::barrier::{CoreQuadSign, Orientation};
use crate::density::{DensitySpec, Profile};
use crate::solver::{MeshKind, SchemeConfig, Stepper};
use serde::Deserialize;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config invalid at {0}")]
    Invalid(String),
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("io error reading {path}: {err}")]
    Io { path: String, err: String },
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    #[serde(default)]
    pub density: DensitySection,
    #[serde(default)]
    pub exponents: ExponentsSection,
    #[serde(default)]
    pub barrier: Option<BarrierSection>,
    #[serde(default)]
    pub datum: DatumSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub outputs: Option<OutputsSection>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DensitySection {
    #[serde(rename = "R")]
    pub r: Option<f64>,
    pub q: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub eps0: Option<f64>,
    /// "power" or "table:<path>"
    pub profile: Option<String>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ExponentsSection {
    pub m: Option<f64>,
    pub p: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct BarrierSection {
    pub regime: Option<String>,
    pub orientation: Option<String>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    pub a: Option<f64>,
    #[serde(rename = "T")]
    pub t: Option<f64>,
    pub eps: Option<f64>,
    pub delta_exp: Option<f64>,
    pub d_exp: Option<f64>,
    /// Slow-regime time exponent.
    pub alpha: Option<f64>,
    pub bracket_sign: Option<i8>,
    /// "matched" (default) or "flipped" core quadratic for the log profile.
    pub core_quad: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumSection {
    /// "scaled-barrier" | "bump" | "power-profile" | "zero"
    pub family: Option<String>,
    pub factor: Option<f64>,
    pub center: Option<f64>,
    pub width: Option<f64>,
    pub height: Option<f64>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    pub d: Option<f64>,
}

impl Default for DatumSection {
    fn default() -> Self {
        DatumSection {
            family: Some("zero".into()),
            factor: None,
            center: None,
            width: None,
            height: None,
            c: None,
            d: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub nx: Option<usize>,
    pub delta: Option<f64>,
    pub t_end: Option<f64>,
    pub dt0: Option<f64>,
    pub dt_min: Option<f64>,
    pub dt_max: Option<f64>,
    pub newton_tol: Option<f64>,
    pub newton_max_iters: Option<usize>,
    pub m_cap: Option<f64>,
    /// "graded" | "uniform"
    pub mesh: Option<String>,
    pub stretch: Option<f64>,
    /// "implicit" | "explicit"
    pub stepper: Option<String>,
    pub order2: Option<bool>,
    pub reaction: Option<bool>,
    pub max_snapshots: Option<usize>,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection {
            nx: None,
            delta: None,
            t_end: None,
            dt0: None,
            dt_min: None,
            dt_max: None,
            newton_tol: None,
            newton_max_iters: None,
            m_cap: None,
            mesh: None,
            stretch: None,
            stepper: None,
            order2: None,
            reaction: None,
            max_snapshots: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsSection {
    pub dir: String,
}

impl CaseConfig {
    pub fn from_path(path: &Path) -> Result<CaseConfig, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), err: e.to_string() })?;
        Self::from_str(&text)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> Result<CaseConfig, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn build_density(&self) -> Result<DensitySpec, ConfigError> {
        let r = self.density.r.ok_or_else(|| ConfigError::Invalid(".density.R".into()))?;
        let q = self.density.q.ok_or_else(|| ConfigError::Invalid(".density.q".into()))?;
        let c1 = self.density.c1.unwrap_or(1.0);
        let c2 = self.density.c2.unwrap_or(1.0);
        let eps0 = self.density.eps0.unwrap_or(0.5 * r);
        let profile = match self.density.profile.as_deref().unwrap_or("power") {
            "power" => Profile::Power,
            s if s.starts_with("table:") => {
                let path = &s["table:".len()..];
                let (xs, rhos) = read_table(Path::new(path))?;
                Profile::Table { xs, rhos }
            }
            other => {
                return Err(ConfigError::Invalid(format!(
                    ".density.profile: unknown profile `{other}`"
                )))
            }
        };
        DensitySpec::new(r, q, c1, c2, eps0, profile)
            .map_err(|e| ConfigError::Invalid(format!(".density: {e}")))
    }

    pub fn exponents(&self) -> Result<(f64, f64), ConfigError> {
        let m = self.exponents.m.ok_or_else(|| ConfigError::Invalid(".exponents.m".into()))?;
        let p = self.exponents.p.ok_or_else(|| ConfigError::Invalid(".exponents.p".into()))?;
        if !(m > 1.0 && p > 1.0) {
            return Err(ConfigError::Invalid(".exponents: need m > 1 and p > 1".into()));
        }
        Ok((m, p))
    }

    pub fn scheme_config(&self) -> Result<SchemeConfig, ConfigError> {
        let s = &self.solver;
        let mut cfg = SchemeConfig::default();
        if let Some(nx) = s.nx {
            cfg.nx = nx;
        }
        if let Some(v) = s.dt0 {
            cfg.dt0 = v;
        }
        if let Some(v) = s.dt_min {
            cfg.dt_min = v;
        }
        if let Some(v) = s.dt_max {
            cfg.dt_max = v;
        }
        if let Some(v) = s.newton_tol {
            cfg.newton_tol = v;
        }
        if let Some(v) = s.newton_max_iters {
            cfg.newton_max_iters = v;
        }
        if let Some(v) = s.m_cap {
            cfg.m_cap = v;
        }
        if let Some(v) = s.stretch {
            cfg.stretch = v;
        }
        if let Some(v) = s.order2 {
            cfg.order2 = v;
        }
        if let Some(v) = s.reaction {
            cfg.reaction_enabled = v;
        }
        if let Some(v) = s.max_snapshots {
            cfg.max_snapshots = v;
        }
        cfg.mesh = match s.mesh.as_deref() {
            None | Some("graded") => MeshKind::Graded,
            Some("uniform") => MeshKind::Uniform,
            Some(other) => {
                return Err(ConfigError::Invalid(format!(".solver.mesh: unknown kind `{other}`")))
            }
        };
        cfg.stepper = match s.stepper.as_deref() {
            None | Some("implicit") => Stepper::Implicit,
            Some("explicit") => Stepper::Explicit,
            Some(other) => {
                return Err(ConfigError::Invalid(format!(".solver.stepper: unknown `{other}`")))
            }
        };
        Ok(cfg)
    }

    pub fn t_end(&self) -> f64 {
        self.solver.t_end.unwrap_or(5.0)
    }

    pub fn delta(&self) -> f64 {
        self.solver.delta.unwrap_or(1e-3)
    }
}

impl BarrierSection {
    pub fn orientation(&self) -> Result<Orientation, ConfigError> {
        match self.orientation.as_deref() {
            Some("super") => Ok(Orientation::Super),
            Some("sub") => Ok(Orientation::Sub),
            Some(other) => {
                Err(ConfigError::Invalid(format!(".barrier.orientation: unknown `{other}`")))
            }
            None => Err(ConfigError::Invalid(".barrier.orientation".into())),
        }
    }

    pub fn core_quad(&self) -> Result<CoreQuadSign, ConfigError> {
        match self.core_quad.as_deref() {
            None | Some("matched") => Ok(CoreQuadSign::Matched),
            Some("flipped") => Ok(CoreQuadSign::Flipped),
            Some(other) => {
                Err(ConfigError::Invalid(format!(".barrier.core_quad: unknown `{other}`")))
            }
        }
    }
}

fn read_table(path: &Path) -> Result<(Vec<f64>, Vec<f64>), ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io { path: path.display().to_string(), err: e.to_string() })?;
    let mut xs = Vec::new();
    let mut rhos = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split(',');
        let sx = parts.next().unwrap_or("").trim();
        let sr = parts.next().unwrap_or("").trim();
        match (sx.parse::<f64>(), sr.parse::<f64>()) {
            (Ok(x), Ok(rho)) => {
                xs.push(x);
                rhos.push(rho);
            }
            _ if lineno == 0 => continue, // header row
            _ => {
                return Err(ConfigError::Parse(format!(
                    "{}:{}: expected `x,rho`",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    Ok((xs, rhos))
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"
[density]
R = 1.0
q = 3.0

[exponents]
m = 2.0
p = 3.0

[datum]
family = "bump"
height = 0.01
width = 0.5

[solver]
nx = 101
t_end = 1.0
"#;

    #[test]
    fn parses_and_builds() {
        let cfg = CaseConfig::from_str(GOOD).unwrap();
        let den = cfg.build_density().unwrap();
        assert_eq!(den.q(), 3.0);
        assert_eq!(cfg.exponents().unwrap(), (2.0, 3.0));
        let sc = cfg.scheme_config().unwrap();
        assert_eq!(sc.nx, 101);
        assert_eq!(cfg.t_end(), 1.0);
    }

    #[test]
    fn missing_exponent_reports_path() {
        let text = GOOD.replace("m = 2.0\n", "");
        let cfg = CaseConfig::from_str(&text).unwrap();
        match cfg.exponents() {
            Err(ConfigError::Invalid(path)) => assert_eq!(path, ".exponents.m"),
            other => panic!("expected Invalid, got {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_errors() {
        let text = format!("{GOOD}\n[solver2]\nfoo = 1\n");
        assert!(matches!(CaseConfig::from_str(&text), Err(ConfigError::Parse(_))));
        let text2 = GOOD.replace("nx = 101", "nx = 101\nunknown_knob = 3");
        assert!(matches!(CaseConfig::from_str(&text2), Err(ConfigError::Parse(_))));
    }
}
