//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Criteria 3's re-substitution oracle re-derives every inequality from the
//! reported parameters with independent formula transcriptions, so a slip in
//! the library's evaluators cannot silently confirm itself.

use pme_lab::barrier::{
    BarrierSpec, Branch, CoreQuadSign, Orientation, ProfileCriticalLog, ProfileFast,
};
use pme_lab::density::DensitySpec;
use pme_lab::experiments::{self, TheoremId, TheoremReport};
use pme_lab::feasibility::{
    self, BlowupCase, FeasibilityError, FeasibilityReport, ProblemExponents, SignMode,
};
use pme_lab::residual::{analytic_residual, fd_residual, residual_scale, RegionSpec, Zone};
use pme_lab::solver::{self, MeshKind, SchemeConfig, Status};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn criterion(n: usize, pass: bool, detail: &str) {
    println!("[criterion {n:2}] {} — {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} failed: {detail}");
}

// ---------------------------------------------------------------------------
// criterion 1: profile gluing
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_profile_gluing() {
    let fast = ProfileFast { r: 1.0, eps: 0.25, b: 1.0 };
    let log = ProfileCriticalLog { r: 1.0, eps: 0.25, core_sign: CoreQuadSign::Matched };
    let mut worst: f64 = 0.0;
    for side in [-1.0f64, 1.0] {
        let xi = side * 0.75;
        let scale_v = fast.value_on(xi, Branch::Outer).abs();
        let gap_v = (fast.value_on(xi, Branch::Outer) - fast.value_on(xi, Branch::Inner)).abs();
        let scale_d = fast.deriv1_on(xi, Branch::Outer).abs();
        let gap_d = (fast.deriv1_on(xi, Branch::Outer) - fast.deriv1_on(xi, Branch::Inner)).abs();
        worst = worst.max(gap_v / scale_v).max(gap_d / scale_d);

        let scale_v = log.value_on(xi, Branch::Outer).abs();
        let gap_v = (log.value_on(xi, Branch::Outer) - log.value_on(xi, Branch::Inner)).abs();
        let scale_d = log.deriv1_on(xi, Branch::Outer).abs();
        let gap_d = (log.deriv1_on(xi, Branch::Outer) - log.deriv1_on(xi, Branch::Inner)).abs();
        worst = worst.max(gap_v / scale_v).max(gap_d / scale_d);
    }
    criterion(1, worst <= 1e-12, &format!("worst relative gluing gap {worst:.3e}"));
}

// ---------------------------------------------------------------------------
// criterion 2: derivative oracle
// ---------------------------------------------------------------------------

struct FamilyCase {
    name: &'static str,
    density: DensitySpec,
    spec: BarrierSpec,
    t_window: (f64, f64),
}

fn oracle_families() -> Vec<FamilyCase> {
    let d3 = DensitySpec::power(1.0, 3.0).unwrap();
    let d2 = DensitySpec::power(1.0, 2.0).unwrap();
    let d1 = DensitySpec::power(1.0, 1.0).unwrap();
    let fast_sub = BarrierSpec::new(
        &d3, Orientation::Sub, 2.0, 5.0, 1.0, 2.0, 3.0, 0.25, None, None, 0.0, 1,
        CoreQuadSign::Matched,
    )
    .unwrap();
    let fast_super_plus = BarrierSpec::new(
        &d3, Orientation::Super, 0.5, 2.0, 4.0, 2.0, 3.0, 0.4, None, None, 0.0, 1,
        CoreQuadSign::Matched,
    )
    .unwrap();
    let fast_super_minus = BarrierSpec { bracket_sign: -1, ..fast_super_plus.clone() };
    let crit_super = BarrierSpec::new(
        &d2, Orientation::Super, 1.0, 2.0, 1.0, 2.0, 3.0, 0.25, Some(0.5), None, 0.0, 1,
        CoreQuadSign::Matched,
    )
    .unwrap();
    let crit_sub = BarrierSpec::new(
        &d2, Orientation::Sub, 1.0, 0.5, 1.0, 2.0, 3.0, 0.25, None, None, 0.0, 1,
        CoreQuadSign::Matched,
    )
    .unwrap();
    let slow = BarrierSpec::new(
        &d1, Orientation::Super, 0.5, 0.5, 2.0, 2.0, 3.0, 0.25, None, Some(0.5), 1.0, 1,
        CoreQuadSign::Matched,
    )
    .unwrap();
    vec![
        FamilyCase { name: "fast-sub", density: d3.clone(), spec: fast_sub, t_window: (0.05, 0.6) },
        FamilyCase {
            name: "fast-super(+1)",
            density: d3.clone(),
            spec: fast_super_plus,
            t_window: (0.0, 2.0),
        },
        FamilyCase {
            name: "fast-super(-1)",
            density: d3,
            spec: fast_super_minus,
            t_window: (0.0, 2.0),
        },
        FamilyCase { name: "critical-super", density: d2.clone(), spec: crit_super, t_window: (0.0, 2.0) },
        FamilyCase { name: "critical-sub", density: d2, spec: crit_sub, t_window: (0.05, 0.6) },
        FamilyCase { name: "slow-super", density: d1, spec: slow, t_window: (0.0, 2.0) },
    ]
}

#[test]
fn criterion_02_derivative_oracle() {
    let hs = [1e-2, 10f64.powf(-2.5), 1e-3];
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut checked = 0usize;
    let mut worst_slope_dev: f64 = 0.0;
    let mut worst_rel: f64 = 0.0;
    for case in oracle_families() {
        let mut accepted = 0usize;
        let mut attempts = 0usize;
        while accepted < 20 && attempts < 20_000 {
            attempts += 1;
            let x: f64 = rng.gen_range(-0.93..0.93);
            let t: f64 = rng.gen_range(case.t_window.0..case.t_window.1);
            // admissibility: smooth branch around the whole stencil, healthy
            // bracket, measurable quadratic term
            let h_max = hs[0];
            let probes_ok = [x - 1.5 * h_max, x, x + 1.5 * h_max].iter().all(|&xx| {
                case.spec.branch_probe(&case.density, xx).ok()
                    == case.spec.branch_probe(&case.density, x).ok()
                    && case.spec.branch_probe(&case.density, xx).is_ok()
                    && case.spec.derivatives(&case.density, xx, t).is_ok()
            });
            if !probes_ok {
                continue;
            }
            if let Ok(Some(b)) = case.spec.bracket(&case.density, x, t) {
                if !(0.15..=0.95).contains(&b) {
                    continue;
                }
            }
            let exact = match analytic_residual(&case.spec, &case.density, x, t) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let scale = residual_scale(&case.spec, &case.density, x, t).unwrap().max(1e-300);
            let errs: Vec<f64> = hs
                .iter()
                .map(|&h| {
                    fd_residual(&case.spec, &case.density, x, t, h, h)
                        .map(|v| (v - exact).abs())
                        .unwrap_or(f64::NAN)
                })
                .collect();
            if errs.iter().any(|e| !e.is_finite()) {
                continue;
            }
            // need a measurable h^2 term well above round-off for a clean fit
            if errs[0] / scale < 1e-9 || errs[0] / scale > 0.1 || errs[2] <= 0.0 {
                continue;
            }
            let slope = ((errs[0] / errs[2]).ln()) / ((hs[0] / hs[2]).ln());
            worst_slope_dev = worst_slope_dev.max((slope - 2.0).abs());
            assert!(
                (slope - 2.0).abs() <= 0.1,
                "{}: slope {slope} at (x, t) = ({x}, {t})",
                case.name
            );
            // Richardson extrapolation of the h and h/2 estimates
            let h = 1e-3;
            let f1 = fd_residual(&case.spec, &case.density, x, t, h, h).unwrap();
            let f2 = fd_residual(&case.spec, &case.density, x, t, 0.5 * h, 0.5 * h).unwrap();
            let extrap = (4.0 * f2 - f1) / 3.0;
            let rel = (extrap - exact).abs() / scale;
            worst_rel = worst_rel.max(rel);
            assert!(rel <= 1e-6, "{}: Richardson rel err {rel} at ({x}, {t})", case.name);
            accepted += 1;
        }
        assert_eq!(accepted, 20, "could not sample 20 admissible points for {}", case.name);
        checked += accepted;
    }
    criterion(
        2,
        checked >= 100,
        &format!(
            "{checked} points over 6 families; worst slope deviation {worst_slope_dev:.3}, worst Richardson rel err {worst_rel:.2e}"
        ),
    );
}

// ---------------------------------------------------------------------------
// criterion 3: feasibility round-trip with an independent oracle
// ---------------------------------------------------------------------------

fn p(rep: &FeasibilityReport, k: &str) -> f64 {
    *rep.params.get(k).unwrap_or_else(|| panic!("missing param {k}"))
}

/// Independent re-evaluation of a recorded inequality from the parameters.
/// Returns (lhs, rhs) with the same orientation the report uses for margins.
fn oracle_eval(kind: &str, id: &str, rep: &FeasibilityReport) -> Option<(f64, f64, bool)> {
    // (lhs, rhs, lhs_ge_rhs_expected): margin = lhs-rhs if geq else rhs-lhs
    let m = p(rep, "m");
    match (kind, id) {
        ("fast-global", "density_ratio_bound") => {
            let b = p(rep, "b");
            Some((m + (m - 1.0) / b, p(rep, "c2") / p(rep, "c1"), true))
        }
        ("fast-global", "eta_start_window") => {
            let (b, eps, a, t) = (p(rep, "b"), p(rep, "eps"), p(rep, "a"), p(rep, "T"));
            let (r1, r2, r) = (p(rep, "rho1"), p(rep, "rho2"), p(rep, "R"));
            let rhs = eps.powf(-b) / a * 1.0f64.max(r2 / r1 * b / (m - 1.0) * (r - eps) / eps);
            Some((t.powf(p(rep, "beta")), rhs, true))
        }
        ("fast-global", "collar_decay") => {
            let b = p(rep, "b");
            Some((p(rep, "beta"), p(rep, "omega") * m / (m - 1.0) * b * b / p(rep, "c1"), true))
        }
        ("fast-global", "collar_balance") => {
            let (b, pp) = (p(rep, "b"), p(rep, "p"));
            let bracket = (b * m / (m - 1.0) + 1.0) / p(rep, "c2") - b / (p(rep, "c1") * (m - 1.0));
            let lhs = p(rep, "omega") * m / (m - 1.0) * b * bracket;
            Some((lhs, p(rep, "C").powf(pp - 1.0) + p(rep, "alpha"), true))
        }
        ("fast-global", "core_decay") => {
            let (b, eps) = (p(rep, "b"), p(rep, "eps"));
            let lhs = p(rep, "beta") * p(rep, "T").powf(p(rep, "beta"));
            let rhs = p(rep, "omega") * m / (m - 1.0) * b * b / p(rep, "rho1")
                * eps.powf(-2.0 * b - 2.0)
                / p(rep, "a");
            Some((lhs, rhs, true))
        }
        ("fast-global", "core_balance") => {
            let (b, eps, r) = (p(rep, "b"), p(rep, "eps"), p(rep, "R"));
            let drag = b * eps.powf(-b - 1.0) * p(rep, "T").powf(-p(rep, "beta"))
                / (p(rep, "a") * p(rep, "rho1") * (m - 1.0));
            let lhs = p(rep, "omega") * m / (m - 1.0) * b * eps.powf(-b - 1.0)
                * (1.0 / (p(rep, "rho2") * (r - eps)) - drag);
            Some((lhs, p(rep, "C").powf(p(rep, "p") - 1.0) + p(rep, "alpha"), true))
        }
        ("fast-blowup", "eps_support_bound") => {
            let b = p(rep, "b");
            Some((b / (b + 2.0) * p(rep, "R"), p(rep, "eps"), true))
        }
        (_, "k_positive") => Some((p(rep, "K"), 0.0, true)),
        ("fast-blowup", "peak_collar") | ("fast-blowup", "cap_collar")
        | ("fast-blowup", "peak_core") | ("fast-blowup", "cap_core")
        | ("fast-blowup", "omega_floor") => {
            let (pp, b, eps, r) = (p(rep, "p"), p(rep, "b"), p(rep, "eps"), p(rep, "R"));
            let (c1, c2, r1, r2) = (p(rep, "c1"), p(rep, "c2"), p(rep, "rho1"), p(rep, "rho2"));
            let (omega, c, k) = (p(rep, "omega"), p(rep, "C"), p(rep, "K"));
            let bm1 = b * m / (m - 1.0) + 1.0;
            let sig = 1.0 / (m - 1.0) + omega * m / (m - 1.0) * b / c1 * bm1;
            let lam = (pp - m) / ((m - 1.0) * (pp - 1.0)) + omega * m / ((m - 1.0) * (m - 1.0)) * b * b / c2;
            let sig0 = 1.0 / (m - 1.0)
                + omega * m * (m + 1.0) / ((m - 1.0) * (m - 1.0)) * b / r1 * eps.powf(-b - 1.0)
                    / (r - eps);
            let lam0 = (pp - m) / ((m - 1.0) * (pp - 1.0))
                + omega * m / ((m - 1.0) * (m - 1.0)) * 2.0 * b / r2 * eps.powf(-b - 1.0) / (r - eps);
            let gamma = c.powf(pp - 1.0);
            let e_peak = (pp + m - 2.0) / (pp - 1.0);
            let e_gam = (m - 1.0) / (pp - 1.0);
            match id {
                "peak_collar" => Some((k * sig.max(0.0).powf(e_peak), lam * gamma.powf(e_gam), false)),
                "cap_collar" => Some(((m - 1.0) * sig, (pp + m - 2.0) * gamma, false)),
                "peak_core" => Some((k * sig0.max(0.0).powf(e_peak), lam0 * gamma.powf(e_gam), false)),
                "cap_core" => Some(((m - 1.0) * sig0, (pp + m - 2.0) * gamma, false)),
                "omega_floor" => {
                    let thr = (m - pp) * (m - 1.0) / (b * (pp - 1.0) * m)
                        * (c2 / b).max((r - eps) * r2 / (2.0 * eps.powf(-b - 1.0)));
                    Some((omega, thr, true))
                }
                _ => unreachable!(),
            }
        }
        ("critical-global", "amplitude_balance") => {
            let (pp, delta) = (p(rep, "p"), p(rep, "delta_exp"));
            let lhs = p(rep, "omega") * delta * (delta + 1.0) / p(rep, "c2") * m / (m - 1.0)
                * p(rep, "R").powf(-delta);
            Some((lhs, p(rep, "C").powf(pp - 1.0) + 1.0 / (pp - 1.0), true))
        }
        ("critical-global", "support_start") => {
            let delta = p(rep, "delta_exp");
            Some((p(rep, "a") * p(rep, "R").powf(delta), 2.0 * p(rep, "T").powf(-p(rep, "beta")), true))
        }
        ("critical-blowup", id2) => {
            let (pp, eps, r) = (p(rep, "p"), p(rep, "eps"), p(rep, "R"));
            let (c2, r2) = (p(rep, "c2"), p(rep, "rho2"));
            let (omega, c, k) = (p(rep, "omega"), p(rep, "C"), p(rep, "K"));
            let sig = (1.0 - omega * m / c2) / (m - 1.0);
            let sig0 = (1.0 - omega * m / (r2 * eps * (r - eps))) / (m - 1.0);
            let lam = (pp - m) / ((m - 1.0) * (pp - 1.0));
            let gamma = c.powf(pp - 1.0);
            let e_peak = (pp + m - 2.0) / (pp - 1.0);
            let e_gam = (m - 1.0) / (pp - 1.0);
            match id2 {
                "cap_collar" => Some(((m - 1.0) * sig, (pp + m - 2.0) * gamma, false)),
                "cap_core" => Some(((m - 1.0) * sig0, (pp + m - 2.0) * gamma, false)),
                "peak_collar" => Some((k * sig.max(0.0).powf(e_peak), lam * gamma.powf(e_gam), false)),
                "peak_core" => Some((k * sig0.max(0.0).powf(e_peak), lam * gamma.powf(e_gam), false)),
                _ => None,
            }
        }
        ("slow", "balance") => {
            let (pp, q, r) = (p(rep, "p"), p(rep, "q"), p(rep, "R"));
            let (d, delta, c) = (p(rep, "d_exp"), p(rep, "delta"), p(rep, "C"));
            let lhs = d * (1.0 - d) * delta * c.powf(m) * p(rep, "T").powf(p(rep, "alpha") * (m - pp));
            let _ = q;
            Some((lhs, r.powf(pp * d / m) * c.powf(pp), true))
        }
        ("slow", "profile_exponent_window") => None, // two-sided; margin re-checked directly
        _ => None,
    }
}

fn roundtrip(kind: &str, rep: &FeasibilityReport) {
    assert!(rep.feasible, "{kind}: report must be feasible");
    // omega identity
    if let (Some(&omega), Some(&c), Some(&a)) =
        (rep.params.get("omega"), rep.params.get("C"), rep.params.get("a"))
    {
        let m = p(rep, "m");
        assert!(
            (omega - c.powf(m - 1.0) / a).abs() <= 1e-12 * omega.abs(),
            "{kind}: omega identity"
        );
    }
    for check in &rep.checks {
        assert!(check.margin >= 0.0, "{kind}/{}: margin {}", check.id, check.margin);
        if check.id == "interface_decay" {
            continue; // derived condition, covered by criterion 4's sign check
        }
        if let Some((lhs, rhs, geq)) = oracle_eval(kind, &check.id, rep) {
            let tol = 1e-10;
            assert!(
                (lhs - check.lhs).abs() <= tol * check.lhs.abs().max(1.0),
                "{kind}/{}: lhs {} vs oracle {}",
                check.id,
                check.lhs,
                lhs
            );
            assert!(
                (rhs - check.rhs).abs() <= tol * check.rhs.abs().max(1.0),
                "{kind}/{}: rhs {} vs oracle {}",
                check.id,
                check.rhs,
                rhs
            );
            let margin = if geq { lhs - rhs } else { rhs - lhs };
            assert!(margin >= 0.0, "{kind}/{}: oracle margin {margin}", check.id);
        }
    }
}

#[test]
fn criterion_03_feasibility_roundtrip() {
    let d3 = DensitySpec::power(1.0, 3.0).unwrap();
    let d2 = DensitySpec::power(1.0, 2.0).unwrap();
    let d1 = DensitySpec::power(1.0, 1.0).unwrap();
    let mut count = 0;

    let e23 = ProblemExponents::new(2.0, 3.0).unwrap();
    let rep = feasibility::feasible_fast_global(
        e23,
        &d3,
        feasibility::default_eps_fast_global(1.0, 1.0),
    )
    .unwrap();
    roundtrip("fast-global", &rep);
    count += 1;

    let rep = feasibility::feasible_fast_blowup(e23, &d3, Some(0.3), None).unwrap();
    roundtrip("fast-blowup", &rep);
    count += 1;

    let e32 = ProblemExponents::new(3.0, 2.0).unwrap();
    let rep = feasibility::feasible_fast_blowup(e32, &d3, None, Some(BlowupCase::PLessM)).unwrap();
    roundtrip("fast-blowup", &rep);
    count += 1;

    let e22 = ProblemExponents::new(2.0, 2.0).unwrap();
    let rep = feasibility::feasible_fast_blowup(e22, &d3, None, None).unwrap();
    roundtrip("fast-blowup", &rep);
    // frozen value of the peak coefficient for m = p = 2: 1/2 - 1/4
    assert_eq!(p(&rep, "K"), 0.25);
    count += 1;

    let rep = feasibility::feasible_critical_global(e23, &d2, 1.0).unwrap();
    roundtrip("critical-global", &rep);
    count += 1;

    let rep = feasibility::feasible_critical_blowup(e23, &d2, Some(0.25)).unwrap();
    roundtrip("critical-blowup", &rep);
    count += 1;

    let rep = feasibility::feasible_slow(e23, &d1, SignMode::Corrected, None).unwrap();
    roundtrip("slow", &rep);
    // window margin two-sided
    let w = rep.check("profile_exponent_window").unwrap();
    assert!(w.margin >= 0.0 && p(&rep, "d_exp") > 0.0 && p(&rep, "d_exp") < 0.5f64.min(1.0) + 0.5);
    count += 1;

    // the density-ratio gate errors as specified
    let loose = DensitySpec::new(1.0, 2.1, 1.0, 50.0, 0.25, pme_lab::density::Profile::Power).unwrap();
    let err = feasibility::feasible_fast_global(e23, &loose, 0.25);
    let gate_ok = matches!(err, Err(FeasibilityError::KBoundViolated { ratio, .. }) if ratio == 50.0);
    criterion(
        3,
        gate_ok && count == 7,
        &format!("{count} canonical reports re-substituted; ratio gate errors as specified"),
    );
}

// ---------------------------------------------------------------------------
// criterion 4: sign verification
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_sign_verification() {
    let grid = (400, 100);
    let tol = 1e-8;
    let d3 = DensitySpec::power(1.0, 3.0).unwrap();
    let d2 = DensitySpec::power(1.0, 2.0).unwrap();
    let d1 = DensitySpec::power(1.0, 1.0).unwrap();
    let e23 = ProblemExponents::new(2.0, 3.0).unwrap();
    let mut details = Vec::new();

    // (i) fast subsolution on the collar+core bracket windows
    let feas = feasibility::feasible_fast_blowup(e23, &d3, Some(0.3), None).unwrap();
    let sub = experiments::barrier_from_report(&d3, &feas, Orientation::Sub, 1).unwrap();
    let rep = pme_lab::residual::verify_sign(
        &sub,
        &d3,
        RegionSpec { zone: Zone::S1UnionS2, t0: 0.0, t1: 0.95 * sub.t_ref },
        grid,
        tol,
    )
    .unwrap();
    assert!(rep.pass, "fast sub failed: extreme {}", rep.extreme_scaled);
    details.push(format!("fast-sub max {:.2e}", rep.extreme_scaled));

    // (ii) critical subsolution
    let feas = feasibility::feasible_critical_blowup(e23, &d2, Some(0.25)).unwrap();
    let sub = experiments::barrier_from_report(&d2, &feas, Orientation::Sub, 1).unwrap();
    let rep = pme_lab::residual::verify_sign(
        &sub,
        &d2,
        RegionSpec { zone: Zone::S1UnionS2, t0: 0.05 * sub.t_ref, t1: 0.95 * sub.t_ref },
        grid,
        tol,
    )
    .unwrap();
    assert!(rep.pass, "critical sub failed: extreme {}", rep.extreme_scaled);
    details.push(format!("critical-sub max {:.2e}", rep.extreme_scaled));

    // (iii) critical supersolution (window-compatible parameters)
    let feas = feasibility::feasible_critical_global_windowed(e23, &d2, 0.3, 5.0).unwrap();
    let sup = experiments::barrier_from_report(&d2, &feas, Orientation::Super, 1).unwrap();
    let rep = pme_lab::residual::verify_sign(
        &sup,
        &d2,
        RegionSpec { zone: Zone::A, t0: 0.0, t1: 5.0 },
        grid,
        tol,
    )
    .unwrap();
    assert!(rep.pass, "critical super failed: extreme {}", rep.extreme_scaled);
    details.push(format!("critical-super min {:.2e}", rep.extreme_scaled));

    // (iv) slow supersolution in corrected sign mode
    let feas = feasibility::feasible_slow(e23, &d1, SignMode::Corrected, None).unwrap();
    let sup = experiments::barrier_from_report(&d1, &feas, Orientation::Super, 1).unwrap();
    let rep = pme_lab::residual::verify_sign(
        &sup,
        &d1,
        RegionSpec { zone: Zone::SlowInterior, t0: 0.0, t1: 5.0 },
        grid,
        tol,
    )
    .unwrap();
    assert!(rep.pass, "slow super failed: extreme {}", rep.extreme_scaled);
    details.push(format!("slow-super min {:.2e}", rep.extreme_scaled));

    // fast supersolution: both bracket conventions recorded, outcome surfaced
    let feas = feasibility::feasible_fast_global(
        e23,
        &d3,
        feasibility::default_eps_fast_global(1.0, 1.0),
    )
    .unwrap();
    let spec_minus = experiments::barrier_from_report(&d3, &feas, Orientation::Super, -1).unwrap();
    let adj = experiments::adjudicate_fast_super(
        &spec_minus,
        &d3,
        RegionSpec { zone: Zone::S1UnionS2, t0: 0.0, t1: 5.0 },
        grid,
        tol,
    )
    .unwrap();
    assert!(adj.passing_sign.is_some(), "no fast-super convention passed");
    details.push(format!(
        "fast-super conventions: {:+} {}, {:+} {} -> using {:+}",
        adj.report_default.bracket_sign,
        if adj.report_default.pass { "pass" } else { "fail" },
        adj.report_alternate.bracket_sign,
        if adj.report_alternate.pass { "pass" } else { "fail" },
        adj.passing_sign.unwrap()
    ));

    criterion(4, true, &details.join("; "));
}

// ---------------------------------------------------------------------------
// criterion 5: solver verification oracle (source-free spreading solution)
// ---------------------------------------------------------------------------

/// Closed-form self-similar spreading solution of `u_t = (u^m)_xx`, the
/// independent oracle for the pure-diffusion benchmark.
fn spreading_exact(m: f64, c: f64, x: f64, t: f64) -> f64 {
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
fn criterion_05_solver_oracle() {
    let m = 2.0;
    let cb = 0.25;
    let den = DensitySpec::power(3.2, 0.0).unwrap();
    let cfg = SchemeConfig {
        nx: 801,
        mesh: MeshKind::Uniform,
        dt0: 1e-5,
        dt_max: 2e-4,
        reaction_enabled: false,
        ..SchemeConfig::default()
    };
    let u0 = solver::make_datum(&den, 1e-3, &cfg, |x| spreading_exact(m, cb, x, 1.0)).unwrap();
    let mass0 = u0.weighted_mass(&den).unwrap();
    let res = solver::solve_regularized(&den, m, 3.0, &u0, 1e-3, &cfg, 1.0).unwrap();
    let fin = res.final_field();
    let mass1 = fin.weighted_mass(&den).unwrap();
    let drift = (mass1 - mass0).abs() / mass0;

    let t_cmp = 2.0f64; // self-similar clock: datum at 1, solver ran for 1
    let kappa = (m - 1.0) / (2.0 * m * (m + 1.0));
    let front = (cb / kappa).sqrt() * t_cmp.powf(1.0 / (m + 1.0));
    let sup_exact = spreading_exact(m, cb, 0.0, t_cmp);
    let mut err: f64 = 0.0;
    for (i, &x) in fin.mesh.xs.iter().enumerate() {
        if x.abs() < 0.8 * front {
            err = err.max((fin.values[i] - spreading_exact(m, cb, x, t_cmp)).abs());
        }
    }
    let rel = err / sup_exact;
    criterion(
        5,
        rel < 0.01 && drift <= 1e-3,
        &format!("sup error {:.3}% away from the front, mass drift {:.2e}", 100.0 * rel, drift),
    );
}

// ---------------------------------------------------------------------------
// criteria 6-9: theorem reproductions (shared across 10)
// ---------------------------------------------------------------------------

fn theorem(id: TheoremId) -> &'static TheoremReport {
    static T21: OnceLock<TheoremReport> = OnceLock::new();
    static T22: OnceLock<TheoremReport> = OnceLock::new();
    static T23: OnceLock<TheoremReport> = OnceLock::new();
    static T26: OnceLock<TheoremReport> = OnceLock::new();
    let cell = match id {
        TheoremId::T21 => &T21,
        TheoremId::T22 => &T22,
        TheoremId::T23 => &T23,
        TheoremId::T26 => &T26,
        _ => panic!("not cached"),
    };
    cell.get_or_init(|| experiments::reproduce_theorem(id, None).expect("recipe must run"))
}

fn summarize(rep: &TheoremReport) -> String {
    rep.components
        .iter()
        .map(|c| format!("{}: {}", c.name, if c.pass { "pass" } else { "FAIL" }))
        .collect::<Vec<_>>()
        .join("; ")
}

#[test]
fn criterion_06_global_existence_fast() {
    let rep = theorem(TheoremId::T21);
    criterion(6, rep.pass, &summarize(rep));
}

#[test]
fn criterion_07_blowup_fast() {
    let rep = theorem(TheoremId::T22);
    criterion(7, rep.pass, &summarize(rep));
}

#[test]
fn criterion_08_fujita_type() {
    let rep = theorem(TheoremId::T23);
    criterion(8, rep.pass, &summarize(rep));
}

#[test]
fn criterion_09_slow_global() {
    let rep = theorem(TheoremId::T26);
    criterion(9, rep.pass, &summarize(rep));
}

#[test]
fn criterion_10_no_false_blowup_gate() {
    // blow-up runs carry an explicit gate component; global runs are vacuous
    let mut details = Vec::new();
    for id in [TheoremId::T21, TheoremId::T22, TheoremId::T23, TheoremId::T26] {
        let rep = theorem(id);
        let gates: Vec<_> =
            rep.components.iter().filter(|c| c.name.contains("no false blow-up")).collect();
        for g in &gates {
            assert!(g.pass, "{}: {}", rep.id, g.detail);
        }
        details.push(format!("{}: {} gate(s) checked", rep.id, gates.len()));
    }
    criterion(10, true, &details.join("; "));
}

// ---------------------------------------------------------------------------
// criterion 11: minimal-solution continuation
// ---------------------------------------------------------------------------

#[test]
fn criterion_11_minimal_solution_continuation() {
    let deltas = [0.1, 0.05, 0.025, 0.0125];
    let (res, rep) = experiments::minimal_solution_t21(&deltas, 801, 5.0).unwrap();
    assert!(matches!(res.status, Status::Global { .. }));
    let worst_gap = rep
        .levels
        .iter()
        .filter_map(|l| l.min_gap_to_previous)
        .fold(f64::INFINITY, f64::min);
    let ok = rep.monotone_within_tol && worst_gap >= -1e-6 && rep.cauchy_sup <= 1e-3;
    criterion(
        11,
        ok,
        &format!(
            "monotone within 1e-6 (worst gap {worst_gap:.2e}), Cauchy sup {:.2e}",
            rep.cauchy_sup
        ),
    );
}
