//! Scratch timing probe (not part of the API).

use pme_lab::density::DensitySpec;
use pme_lab::experiments::bump;
use pme_lab::feasibility::{self, BlowupCase, ProblemExponents};
use pme_lab::solver::*;
use std::time::Instant;

fn main() {
    let density = DensitySpec::power(1.0, 3.0).unwrap();
    let exps = ProblemExponents::new(3.0, 2.0).unwrap();
    let t0 = Instant::now();
    let feas =
        feasibility::feasible_fast_blowup(exps, &density, None, Some(BlowupCase::PLessM)).unwrap();
    println!(
        "feasibility {:?}: C={:.3e} a={:.3e} omega={:.3e}",
        t0.elapsed(),
        feas.param("C"),
        feas.param("a"),
        feas.param("omega")
    );
    let scheme = SchemeConfig { nx: 801, m_cap: 1e5, dt_max: 0.05, ..SchemeConfig::default() };
    let u0 = make_datum(&density, 1e-3, &scheme, |x| bump(x, 0.0, 0.6, 1e-2)).unwrap();
    for t_end in [100.0, 200.0, 400.0] {
        let start = Instant::now();
        let res = solve_regularized(&density, 3.0, 2.0, &u0, 1e-3, &scheme, t_end).unwrap();
        println!(
            "t_end={t_end}: {:?} accepted={} rejected={} elapsed={:?} sup={:.4e}",
            res.status,
            res.diagnostics.accepted_steps,
            res.diagnostics.rejected_steps,
            start.elapsed(),
            res.history.last().unwrap().sup_norm
        );
    }
}
