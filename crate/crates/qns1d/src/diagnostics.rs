//! Scalar functionals of states and trajectories: the energy and its
//! balance residual, the BD entropy, the Germain-LeFloch coercivity pair,
//! the effective-pressure sup, and the large-time decay norms.
//!
//! All integrals are composite trapezoid on the uniform grid; sup norms
//! are node maxima.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd::{fd_derivative, ScalarField};
use crate::integrator::{dissipation_rate, Trajectory};
use crate::state::{f_effective, phi, to_omega, Grid, PhysicalParams, State};

/// All scalar functionals evaluated at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub energy: f64,
    pub dissipation_rate: f64,
    pub dissipation_cum: f64,
    pub bd_entropy: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub sup_eff_pressure: f64,
    pub decay_sup: f64,
    pub decay_grad: f64,
    /// rhs/lhs of the coercivity inequality for a = 2, 3, 4 (0 when the
    /// state is flat or v_min is too small to evaluate safely).
    pub gl_ratio_a2: f64,
    pub gl_ratio_a3: f64,
    pub gl_ratio_a4: f64,
}

/// Energy functional: int (Phi(v) + u^2/2) dx + (eps^2/2) int v_x^2/v^4 dx.
pub fn energy(state: &State, params: &PhysicalParams, grid: &Grid) -> Result<f64> {
    let gamma = params.gamma();
    let eps = params.eps();
    let vx = fd_derivative(&state.v_field(), 1, grid)?;
    let mut integrand = Vec::with_capacity(state.v.len());
    for j in 0..state.v.len() {
        let vj = state.v[j];
        let p = phi(vj, gamma)?;
        let kin = 0.5 * state.u[j] * state.u[j];
        let grad = 0.5 * eps * eps * vx.values[j] * vx.values[j] / vj.powi(4);
        integrand.push(p + kin + grad);
    }
    Ok(grid.trapezoid(&integrand))
}

/// Max over snapshot times of |E(t) + D_cum(t) - E(0)| / max(E(0), floor).
pub fn energy_balance_residual(
    trajectory: &Trajectory,
    params: &PhysicalParams,
    grid: &Grid,
) -> Result<f64> {
    let floor = 1e-14;
    let e0 = energy(&trajectory.snapshots[0].state, params, grid)?;
    let denom = e0.max(floor);
    let mut worst = 0.0f64;
    for snap in &trajectory.snapshots {
        let e = energy(&snap.state, params, grid)?;
        worst = worst.max((e + snap.dissipation_cum - e0).abs() / denom);
    }
    Ok(worst)
}

/// BD entropy: int (Phi(v) + (u - 2 nu v_x/v^2)^2 / 2 + (eps^2/2) v_x^2/v^4) dx.
pub fn bd_entropy(state: &State, params: &PhysicalParams, grid: &Grid) -> Result<f64> {
    let os = to_omega(state, params, grid)?;
    let gamma = params.gamma();
    let eps = params.eps();
    let vx = fd_derivative(&state.v_field(), 1, grid)?;
    let mut integrand = Vec::with_capacity(state.v.len());
    for j in 0..state.v.len() {
        let vj = state.v[j];
        let p = phi(vj, gamma)?;
        let kin = 0.5 * os.omega[j] * os.omega[j];
        let grad = 0.5 * eps * eps * vx.values[j] * vx.values[j] / vj.powi(4);
        integrand.push(p + kin + grad);
    }
    Ok(grid.trapezoid(&integrand))
}

/// Both sides of the coercivity inequality
/// int f^a f_xx^2 dx >= ((a-1)/3)^2 int f^(a-2) f_x^4 dx, a > 1.
pub fn germain_lefloch(f: &ScalarField, a: f64, grid: &Grid) -> Result<(f64, f64)> {
    if !(a > 1.0) {
        return Err(Error::Argument(format!(
            "coercivity inequality needs a > 1, got {a}"
        )));
    }
    for (j, &fj) in f.values.iter().enumerate() {
        if !(fj > 0.0) {
            return Err(Error::Domain(format!("f must be positive; f[{j}] = {fj}")));
        }
    }
    let fx = fd_derivative(f, 1, grid)?;
    let fxx = fd_derivative(f, 2, grid)?;
    let lhs_integrand: Vec<f64> = f
        .values
        .iter()
        .zip(fxx.values.iter())
        .map(|(&fj, &d2)| fj.powf(a) * d2 * d2)
        .collect();
    let prefactor = ((a - 1.0) / 3.0) * ((a - 1.0) / 3.0);
    let rhs_integrand: Vec<f64> = f
        .values
        .iter()
        .zip(fx.values.iter())
        .map(|(&fj, &d1)| fj.powf(a - 2.0) * d1.powi(4))
        .collect();
    Ok((
        grid.trapezoid(&lhs_integrand),
        prefactor * grid.trapezoid(&rhs_integrand),
    ))
}

/// Max over nodes of omega_x + F(v): the effective pressure sup.
pub fn eff_pressure_sup(state: &State, params: &PhysicalParams, grid: &Grid) -> Result<f64> {
    let os = to_omega(state, params, grid)?;
    let omega_x = fd_derivative(&ScalarField::new(os.omega, 0.0), 1, grid)?;
    let mut sup = f64::NEG_INFINITY;
    for j in 0..state.v.len() {
        let p = omega_x.values[j] + f_effective(state.v[j], params.nu(), params.gamma())?;
        sup = sup.max(p);
    }
    Ok(sup)
}

/// (sup norm of (v-1, u), discrete H1-type gradient norm
/// L2(v_x) + L2(v_xx) + L2(u_x)).
pub fn decay_norms(state: &State, grid: &Grid) -> (f64, f64) {
    let sup = state
        .v
        .iter()
        .map(|&v| (v - 1.0).abs())
        .chain(state.u.iter().map(|&u| u.abs()))
        .fold(0.0f64, f64::max);
    let l2 = |field: &ScalarField| {
        let sq: Vec<f64> = field.values.iter().map(|&x| x * x).collect();
        grid.trapezoid(&sq).max(0.0).sqrt()
    };
    let vx = fd_derivative(&state.v_field(), 1, grid).expect("order 1");
    let vxx = fd_derivative(&state.v_field(), 2, grid).expect("order 2");
    let ux = fd_derivative(&state.u_field(), 1, grid).expect("order 1");
    (sup, l2(&vx) + l2(&vxx) + l2(&ux))
}

/// gl ratio rhs/lhs guarded against flat states and tiny v.
fn gl_ratio(f: &ScalarField, a: f64, grid: &Grid) -> Result<f64> {
    let f_min = f.values.iter().copied().fold(f64::INFINITY, f64::min);
    if f_min < 1e-4 {
        return Ok(0.0);
    }
    let (lhs, rhs) = germain_lefloch(f, a, grid)?;
    if lhs <= 1e-300 {
        return Ok(0.0);
    }
    Ok(rhs / lhs)
}

/// Evaluate every functional at one instant of a run.
pub fn diagnose(
    state: &State,
    t: f64,
    dissipation_cum: f64,
    params: &PhysicalParams,
    grid: &Grid,
) -> Result<DiagnosticsRecord> {
    let (decay_sup, decay_grad) = decay_norms(state, grid);
    let vf = state.v_field();
    Ok(DiagnosticsRecord {
        t,
        energy: energy(state, params, grid)?,
        dissipation_rate: dissipation_rate(state, params, grid),
        dissipation_cum,
        bd_entropy: bd_entropy(state, params, grid)?,
        v_min: state.v_min(),
        v_max: state.v_max(),
        sup_eff_pressure: eff_pressure_sup(state, params, grid)?,
        decay_sup,
        decay_grad,
        gl_ratio_a2: gl_ratio(&vf, 2.0, grid)?,
        gl_ratio_a3: gl_ratio(&vf, 3.0, grid)?,
        gl_ratio_a4: gl_ratio(&vf, 4.0, grid)?,
    })
}

/// Records for every snapshot of a trajectory.
pub fn diagnose_trajectory(
    trajectory: &Trajectory,
    params: &PhysicalParams,
    grid: &Grid,
) -> Result<Vec<DiagnosticsRecord>> {
    trajectory
        .snapshots
        .iter()
        .map(|s| diagnose(&s.state, s.t, s.dissipation_cum, params, grid))
        .collect()
}
