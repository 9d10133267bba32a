//! The eps -> 0 vanishing-dispersion limit: error norms against the eps = 0
//! Navier-Stokes reference at a fixed time, with log-log rate fits. The
//! theory predicts order eps^2.
//!
//! Run with a larger N (e.g. 2048) for cleaner slopes; the default here is
//! sized to finish quickly.

use qns1d::experiments::{limit_study, LimitStudyConfig};
use qns1d::{Formulation, InitialData, PhysicalParams, SimConfig};

fn main() -> qns1d::Result<()> {
    let base = SimConfig {
        params: PhysicalParams::new(1.0, 0.2, 2.0)?,
        half_width: 20.0,
        n_cells: 1024,
        formulation: Formulation::Primitive,
        initial: InitialData::GaussBump { a: 0.3, b: 0.2, sigma: 2.0 },
        t_final: 0.25,
        cfl: 0.9,
        snapshot_interval: 0.0,
        positivity_floor: 1e-8,
        boundary_tol: 1e-6,
        dt_eps: None,
    };
    let cfg = LimitStudyConfig {
        base,
        eps_list: vec![0.2, 0.1, 0.05, 0.025],
        compare_time: 0.25,
        derivative_orders: vec![0, 1, 2, 3],
        degenerate_zero_eps: false,
    };
    let study = limit_study(&cfg)?;

    println!("{:>8} {:>4} {:>14}", "eps", "k", "error");
    for p in &study.points {
        println!("{:>8.4} {:>4} {:>14.6e}", p.eps, p.k, p.error);
    }
    println!();
    for (k, fit) in &study.fits {
        match fit {
            Some(f) => println!(
                "k = {k}: slope {:.3} (intercept {:.3}, max log-residual {:.3})",
                f.slope, f.intercept, f.residual
            ),
            None => println!("k = {k}: degenerate (zero errors)"),
        }
    }
    println!(
        "\nN-doubling discretization gap: {:.3e} (resolution ok: {})",
        study.discretization_gap, study.resolution_ok
    );
    Ok(())
}
