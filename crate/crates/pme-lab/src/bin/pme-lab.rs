//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 graded fail (a theorem claim or ordering check did
//! not reproduce), 2 config error, 3 numerical failure.

use clap::{Parser, Subcommand};
use pme_lab::barrier::Orientation;
use pme_lab::config::CaseConfig;
use pme_lab::density::DensitySpec;
use pme_lab::experiments::{
    self, report_hash, ExperimentError, SweepSettings, TheoremId,
};
use pme_lab::feasibility::{self, FeasibilityError, ProblemExponents, SignMode};
use pme_lab::residual::{self, RegionSpec, Zone};
use pme_lab::solver::SchemeConfig;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pme-lab", version, about = "barriers, feasibility and blow-up for a boundary-singular porous-medium reaction equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a configured case and write history/snapshot/report artifacts.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        nx: Option<usize>,
        #[arg(long)]
        delta: Option<f64>,
        /// Approximate spacing between stored snapshots (time units).
        #[arg(long)]
        snapshot_every: Option<f64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Verify the super/subsolution sign of a configured barrier and its
    /// interface gluing; optionally dump residual samples.
    BarrierCheck {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 400)]
        nx: usize,
        #[arg(long, default_value_t = 100)]
        nt: usize,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long)]
        t1: Option<f64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Region zone: A | S1 | S2 | S1S2 | slow.
        #[arg(long)]
        zone: Option<String>,
        #[arg(long)]
        dump_samples: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Solve a parameter feasibility system and print the report as JSON.
    Feasible {
        #[arg(long)]
        m: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 1.0)]
        c1: f64,
        #[arg(long, default_value_t = 1.0)]
        c2: f64,
        #[arg(long, default_value_t = 1.0, name = "R")]
        r: f64,
        #[arg(long)]
        eps: Option<f64>,
        /// Orientation of the barrier the parameters feed: super | sub.
        #[arg(long, default_value = "super")]
        orientation: String,
        /// Blow-up case override: p-gt-m | p-lt-m | p-eq-m.
        #[arg(long)]
        case: Option<String>,
        /// Slow-regime curvature handling: corrected | literal.
        #[arg(long, default_value = "corrected")]
        sign_mode: String,
        #[arg(long)]
        delta_exp: Option<f64>,
        #[arg(long)]
        d_exp: Option<f64>,
    },
    /// Reproduce a named global-existence/blow-up statement at desk scale.
    Reproduce {
        #[arg(long)]
        theorem: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Fill an (m, p, q) phase table with solver outcomes.
    Sweep {
        /// Comma-separated axis values.
        #[arg(long, default_value = "2.0")]
        ms: String,
        #[arg(long, default_value = "1.5,2.5,3.5")]
        ps: String,
        #[arg(long, default_value = "1.0,2.0,3.0")]
        qs: String,
        #[arg(long, default_value_t = 0.02)]
        datum_height: f64,
        #[arg(long, default_value_t = 5.0)]
        t_end: f64,
        #[arg(long, default_value_t = 401)]
        nx: usize,
        #[arg(long, default_value = "out/sweep")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn parse_axis(s: &str) -> Result<Vec<f64>, ExperimentError> {
    s.split(',')
        .map(|tok| {
            tok.trim().parse::<f64>().map_err(|_| {
                ExperimentError::Config(pme_lab::config::ConfigError::Invalid(format!(
                    "axis value `{tok}`"
                )))
            })
        })
        .collect()
}

fn dispatch(cli: Cli) -> Result<ExitCode, ExperimentError> {
    match cli.command {
        Command::Simulate { config, t_end, nx, delta, snapshot_every, out } => {
            let mut cfg = CaseConfig::from_path(&config)?;
            if let Some(t) = t_end {
                cfg.solver.t_end = Some(t);
            }
            if let Some(n) = nx {
                cfg.solver.nx = Some(n);
            }
            if let Some(d) = delta {
                cfg.solver.delta = Some(d);
            }
            if let Some(s) = snapshot_every {
                let total = cfg.solver.t_end.unwrap_or(5.0);
                cfg.solver.max_snapshots = Some(((total / s).ceil() as usize).max(4));
            }
            let summary = experiments::run_case(&cfg, Some(&out))?;
            println!("{}", serde_json::to_string_pretty(&summary).unwrap());
            Ok(match summary.graded_pass {
                Some(false) => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            })
        }
        Command::BarrierCheck { config, nx, nt, t0, t1, tol, zone, dump_samples, out } => {
            let cfg = CaseConfig::from_path(&config)?;
            let density = cfg.build_density()?;
            let (m, p) = cfg.exponents()?;
            let exps = ProblemExponents::new(m, p)?;
            let section = cfg.barrier.clone().ok_or_else(|| {
                pme_lab::config::ConfigError::Invalid(".barrier section required".into())
            })?;
            let orientation = section.orientation()?;
            let _ = exps;
            // reuse the case machinery for resolution and reporting
            let mut case = cfg.clone();
            case.solver.t_end = t1.or(case.solver.t_end);
            std::fs::create_dir_all(&out)
                .map_err(|e| ExperimentError::Io { path: out.display().to_string(), err: e.to_string() })?;
            let summary = experiments::run_case_barrier_only(&case, Some(&out), (nx, nt), t0, tol)?;
            if let Some(path) = dump_samples {
                let spec = experiments::resolve_barrier_spec(&case)?;
                let t1v = t1.unwrap_or(case.t_end());
                let zone = match zone.as_deref() {
                    None => None,
                    Some("A") => Some(Zone::A),
                    Some("S1") => Some(Zone::S1),
                    Some("S2") => Some(Zone::S2),
                    Some("S1S2") | Some("s1s2") => Some(Zone::S1UnionS2),
                    Some("slow") => Some(Zone::SlowInterior),
                    Some(other) => {
                        return Err(pme_lab::config::ConfigError::Invalid(format!(
                            "--zone `{other}`"
                        ))
                        .into())
                    }
                };
                let zone = zone.unwrap_or_else(|| experiments::default_zone(&spec));
                let samples = residual::sample_residuals(
                    &spec,
                    &density,
                    RegionSpec { zone, t0, t1: t1v },
                    (nx, nt),
                )?;
                experiments::write_residual_csv(&path, &samples)?;
            }
            println!("{}", serde_json::to_string_pretty(&summary).unwrap());
            let _ = orientation;
            Ok(if summary.sign_pass == Some(true) { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Feasible {
            m,
            p,
            q,
            c1,
            c2,
            r,
            eps,
            orientation,
            case,
            sign_mode,
            delta_exp,
            d_exp,
        } => {
            let density = DensitySpec::new(r, q, c1, c2, 0.25 * r, pme_lab::density::Profile::Power)
                .map_err(FeasibilityError::Density)?;
            let exps = ProblemExponents::new(m, p)?;
            let orientation = match orientation.as_str() {
                "super" => Orientation::Super,
                "sub" => Orientation::Sub,
                other => {
                    return Err(pme_lab::config::ConfigError::Invalid(format!(
                        "--orientation `{other}`"
                    ))
                    .into())
                }
            };
            let case = match case.as_deref() {
                None => None,
                Some("p-gt-m") => Some(feasibility::BlowupCase::PGreaterM),
                Some("p-lt-m") => Some(feasibility::BlowupCase::PLessM),
                Some("p-eq-m") => Some(feasibility::BlowupCase::PEqualM),
                Some(other) => {
                    return Err(
                        pme_lab::config::ConfigError::Invalid(format!("--case `{other}`")).into()
                    )
                }
            };
            let mode = match sign_mode.as_str() {
                "corrected" => SignMode::Corrected,
                "literal" => SignMode::Literal,
                other => {
                    return Err(pme_lab::config::ConfigError::Invalid(format!(
                        "--sign-mode `{other}`"
                    ))
                    .into())
                }
            };
            let result = match (density.regime(), orientation) {
                (pme_lab::density::Regime::Fast { b }, Orientation::Super) => {
                    feasibility::feasible_fast_global(
                        exps,
                        &density,
                        eps.unwrap_or_else(|| feasibility::default_eps_fast_global(b, r)),
                    )
                }
                (pme_lab::density::Regime::Fast { .. }, Orientation::Sub) => {
                    feasibility::feasible_fast_blowup(exps, &density, eps, case)
                }
                (pme_lab::density::Regime::Critical, Orientation::Super) => {
                    feasibility::feasible_critical_global(exps, &density, delta_exp.unwrap_or(1.0))
                }
                (pme_lab::density::Regime::Critical, Orientation::Sub) => {
                    feasibility::feasible_critical_blowup(exps, &density, eps)
                }
                (pme_lab::density::Regime::Slow, _) => {
                    feasibility::feasible_slow(exps, &density, mode, d_exp)
                }
            };
            match result {
                Ok(report) => {
                    println!("{}", serde_json::to_string_pretty(&report).unwrap());
                    eprintln!("feasible: true (hash {})", report_hash(&report));
                    Ok(ExitCode::SUCCESS)
                }
                Err(FeasibilityError::NoFeasiblePoint { report }) => {
                    println!("{}", serde_json::to_string_pretty(&report).unwrap());
                    eprintln!("feasible: false (tightest margins in report)");
                    Ok(ExitCode::from(1))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Reproduce { theorem, out } => {
            let id = TheoremId::parse(&theorem).ok_or_else(|| {
                pme_lab::config::ConfigError::Invalid(format!("--theorem `{theorem}`"))
            })?;
            let report = experiments::reproduce_theorem(id, Some(&out))?;
            for c in &report.components {
                println!(
                    "[{}] {} — {}: {}",
                    report.id,
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            println!("[{}] overall: {}", report.id, if report.pass { "PASS" } else { "FAIL" });
            Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Sweep { ms, ps, qs, datum_height, t_end, nx, out } => {
            let settings = SweepSettings {
                datum_height,
                t_end,
                scheme: SchemeConfig { nx, m_cap: 1e5, ..SchemeConfig::default() },
                ..SweepSettings::default()
            };
            let table = experiments::sweep(
                &parse_axis(&ms)?,
                &parse_axis(&ps)?,
                &parse_axis(&qs)?,
                &settings,
                Some(&out),
            )?;
            println!("{}", serde_json::to_string_pretty(&table).unwrap());
            Ok(ExitCode::SUCCESS)
        }
    }
}
