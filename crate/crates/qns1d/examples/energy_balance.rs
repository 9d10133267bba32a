//! Run a gauss-bump problem and print the energy-balance table:
//! E(t) + cumulative dissipation should stay at E(0) up to scheme error.

use qns1d::diagnostics::{diagnose_trajectory, energy_balance_residual};
use qns1d::{advance, Formulation, InitialData, PhysicalParams, SimConfig};

fn main() -> qns1d::Result<()> {
    let cfg = SimConfig {
        params: PhysicalParams::new(1.0, 0.25, 2.0)?,
        half_width: 20.0,
        n_cells: 512,
        formulation: Formulation::Primitive,
        initial: InitialData::GaussBump { a: 0.3, b: 0.2, sigma: 2.0 },
        t_final: 1.0,
        cfl: 0.9,
        snapshot_interval: 0.1,
        positivity_floor: 1e-8,
        boundary_tol: 1e-6,
        dt_eps: None,
    };
    let grid = cfg.grid();
    let trajectory = advance(&cfg)?;
    let records = diagnose_trajectory(&trajectory, &cfg.params, &grid)?;

    println!("{:>6} {:>14} {:>14} {:>14} {:>14}", "t", "energy", "D_cum", "E+D", "bd_entropy");
    for r in &records {
        println!(
            "{:>6.2} {:>14.8e} {:>14.8e} {:>14.8e} {:>14.8e}",
            r.t,
            r.energy,
            r.dissipation_cum,
            r.energy + r.dissipation_cum,
            r.bd_entropy
        );
    }
    let residual = energy_balance_residual(&trajectory, &cfg.params, &grid)?;
    println!("\nmax relative balance residual: {residual:.3e}");
    println!("steps: {}, dt in [{:.3e}, {:.3e}]", trajectory.step_count, trajectory.dt_min, trajectory.dt_max);
    Ok(())
}
