//! Explicit RK4 time stepping with a stability controller, trajectory
//! recording, and formulation dispatch. Internal stepping stays in the
//! configured variables (primitive, xi, or omega); snapshots are always
//! converted back to (v, u) so every formulation shares one schema.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd::{fd_derivative, rhs_omega, rhs_primitive, rhs_xi, Tendency};
use crate::state::{from_omega, from_xi, Grid, OmegaState, PhysicalParams, State, XiState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    Primitive,
    Xi,
    Omega,
}

impl std::fmt::Display for Formulation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Formulation::Primitive => write!(f, "primitive"),
            Formulation::Xi => write!(f, "xi"),
            Formulation::Omega => write!(f, "omega"),
        }
    }
}

impl std::str::FromStr for Formulation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "primitive" => Ok(Formulation::Primitive),
            "xi" => Ok(Formulation::Xi),
            "omega" => Ok(Formulation::Omega),
            other => Err(Error::Argument(format!("unknown formulation '{other}'"))),
        }
    }
}

/// Initial-data families. All satisfy the far-field limits (v, u) -> (1, 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "family")]
pub enum InitialData {
    GaussBump { a: f64, b: f64, sigma: f64 },
    DoubleBump { a: f64, b: f64, sigma: f64, center: f64 },
}

/// Build nodal initial data for the requested family.
pub fn initial_data(family: &InitialData, grid: &Grid) -> Result<State> {
    let a = match family {
        InitialData::GaussBump { a, .. } | InitialData::DoubleBump { a, .. } => *a,
    };
    if a <= -1.0 {
        return Err(Error::Argument(format!(
            "bump amplitude must satisfy A > -1 to keep v0 positive, got {a}"
        )));
    }
    let nodes = grid.nodes();
    let (v, u): (Vec<f64>, Vec<f64>) = match *family {
        InitialData::GaussBump { a, b, sigma } => nodes
            .iter()
            .map(|&x| {
                let g = (-x * x / (sigma * sigma)).exp();
                (1.0 + a * g, b * g)
            })
            .unzip(),
        InitialData::DoubleBump { a, b, sigma, center } => nodes
            .iter()
            .map(|&x| {
                let g = (-(x - center) * (x - center) / (sigma * sigma)).exp()
                    + (-(x + center) * (x + center) / (sigma * sigma)).exp();
                (1.0 + a * g, b * g)
            })
            .unzip(),
    };
    State::new(v, u)
}

/// Full configuration of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: PhysicalParams,
    pub half_width: f64,
    pub n_cells: usize,
    pub formulation: Formulation,
    pub initial: InitialData,
    pub t_final: f64,
    pub cfl: f64,
    pub snapshot_interval: f64,
    pub positivity_floor: f64,
    pub boundary_tol: f64,
    /// When set, the stability controller uses this eps in place of the
    /// physical one, so every member of a sweep shares one dt policy.
    pub dt_eps: Option<f64>,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_final >= 0.0) {
            return Err(Error::Config {
                line: None,
                message: format!("t_final must be >= 0, got {}", self.t_final),
            });
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::Config {
                line: None,
                message: format!("cfl must lie in (0, 1], got {}", self.cfl),
            });
        }
        if self.formulation == Formulation::Xi && self.params.eps() > self.params.nu() {
            return Err(Error::Regime(format!(
                "xi formulation needs eps <= nu; got eps = {}, nu = {}",
                self.params.eps(),
                self.params.nu()
            )));
        }
        Grid::new(self.half_width, self.n_cells)?;
        Ok(())
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.half_width, self.n_cells).expect("validated grid")
    }

    pub fn with_n_cells(&self, n_cells: usize) -> Self {
        Self { n_cells, ..self.clone() }
    }
}

/// One recorded instant of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub state: State,
    /// 2 nu int_0^t int u_x^2 / v^2 dx dtau, accumulated by time-trapezoid.
    pub dissipation_cum: f64,
}

/// Completed run: ordered snapshots plus step statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub snapshots: Vec<Snapshot>,
    pub step_count: usize,
    pub dt_min: f64,
    pub dt_max: f64,
    /// Smallest v over every accepted step of the run.
    pub v_min_overall: f64,
    pub warnings: Vec<String>,
}

impl Trajectory {
    pub fn final_state(&self) -> &State {
        &self.snapshots.last().expect("at least the t=0 snapshot").state
    }

    pub fn final_time(&self) -> f64 {
        self.snapshots.last().expect("nonempty").t
    }
}

/// Largest stable explicit step for the current state:
/// cfl * min(dx^2 v_min^2 / (8 nu), dx^2 v_min^4 / (4 eps) [eps > 0],
/// dx / c_s) with c_s = sqrt(gamma v_min^-(gamma+1)).
pub fn stable_dt(state: &State, params: &PhysicalParams, grid: &Grid, cfl: f64) -> f64 {
    stable_dt_from_vmin(state.v_min(), params, grid, cfl)
}

fn stable_dt_from_vmin(v_min: f64, params: &PhysicalParams, grid: &Grid, cfl: f64) -> f64 {
    let dx = grid.dx();
    let nu = params.nu();
    let eps = params.eps();
    let gamma = params.gamma();
    let mut dt = dx * dx * v_min * v_min / (8.0 * nu);
    if eps > 0.0 {
        dt = dt.min(dx * dx * v_min.powi(4) / (4.0 * eps));
    }
    let c_s = (gamma * v_min.powf(-gamma - 1.0)).sqrt();
    dt = dt.min(dx / c_s);
    cfl * dt
}

/// One classical 4-stage explicit step on a (v, w) pair. Intermediate
/// stages whose v falls below `floor` abort the step with the offending
/// node and time.
pub fn rk4_step<F>(
    rhs: &F,
    v: &[f64],
    w: &[f64],
    dt: f64,
    floor: f64,
    t: f64,
) -> Result<(Vec<f64>, Vec<f64>)>
where
    F: Fn(&[f64], &[f64]) -> Result<Tendency>,
{
    if !(dt > 0.0) {
        return Err(Error::Argument(format!("rk4_step needs dt > 0, got {dt}")));
    }
    let n = v.len();
    let check_floor = |v: &[f64], stage_t: f64| -> Result<()> {
        for (j, &vj) in v.iter().enumerate() {
            if !(vj > floor) {
                return Err(Error::State {
                    t: stage_t,
                    node: j,
                    message: format!("v = {vj} fell below positivity floor {floor}"),
                });
            }
        }
        Ok(())
    };

    let stage = |v0: &[f64], w0: &[f64], k: &Tendency, h: f64| -> (Vec<f64>, Vec<f64>) {
        let sv = (0..n).map(|j| v0[j] + h * k.dv[j]).collect();
        let sw = (0..n).map(|j| w0[j] + h * k.dw[j]).collect();
        (sv, sw)
    };

    let k1 = rhs(v, w)?;
    let (v2, w2) = stage(v, w, &k1, 0.5 * dt);
    check_floor(&v2, t + 0.5 * dt)?;
    let k2 = rhs(&v2, &w2)?;
    let (v3, w3) = stage(v, w, &k2, 0.5 * dt);
    check_floor(&v3, t + 0.5 * dt)?;
    let k3 = rhs(&v3, &w3)?;
    let (v4, w4) = stage(v, w, &k3, dt);
    check_floor(&v4, t + dt)?;
    let k4 = rhs(&v4, &w4)?;

    let sixth = dt / 6.0;
    let vn: Vec<f64> = (0..n)
        .map(|j| v[j] + sixth * (k1.dv[j] + 2.0 * k2.dv[j] + 2.0 * k3.dv[j] + k4.dv[j]))
        .collect();
    let wn: Vec<f64> = (0..n)
        .map(|j| w[j] + sixth * (k1.dw[j] + 2.0 * k2.dw[j] + 2.0 * k3.dw[j] + k4.dw[j]))
        .collect();
    check_floor(&vn, t + dt)?;
    Ok((vn, wn))
}

/// Spatial dissipation rate 2 nu int u_x^2 / v^2 dx of a primitive state.
pub fn dissipation_rate(state: &State, params: &PhysicalParams, grid: &Grid) -> f64 {
    let ux = fd_derivative(&state.u_field(), 1, grid).expect("order 1 valid");
    let integrand: Vec<f64> = ux
        .values
        .iter()
        .zip(state.v.iter())
        .map(|(&uxj, &vj)| uxj * uxj / (vj * vj))
        .collect();
    2.0 * params.nu() * grid.trapezoid(&integrand)
}

fn to_primitive(
    v: &[f64],
    w: &[f64],
    formulation: Formulation,
    params: &PhysicalParams,
    grid: &Grid,
) -> Result<State> {
    match formulation {
        Formulation::Primitive => State::new(v.to_vec(), w.to_vec()),
        Formulation::Xi => from_xi(
            &XiState { v: v.to_vec(), xi: w.to_vec() },
            params,
            grid,
        ),
        Formulation::Omega => from_omega(
            &OmegaState { v: v.to_vec(), omega: w.to_vec() },
            params,
            grid,
        ),
    }
}

/// Snapshot times: 0, every positive multiple of `interval` below
/// t_final, and t_final itself.
fn snapshot_times(interval: f64, t_final: f64) -> Vec<f64> {
    let mut ts = vec![0.0];
    if interval > 0.0 {
        let mut k = 1usize;
        loop {
            let t = k as f64 * interval;
            if t >= t_final - 1e-12 * t_final.max(1.0) {
                break;
            }
            ts.push(t);
            k += 1;
        }
    }
    if t_final > 0.0 {
        ts.push(t_final);
    }
    ts
}

/// Integrate the configured problem to t_final, recording snapshots and
/// cumulative dissipation. dt is recomputed every step and clipped so the
/// run lands exactly on each snapshot time.
pub fn advance(config: &SimConfig) -> Result<Trajectory> {
    let times = snapshot_times(config.snapshot_interval, config.t_final);
    advance_with_times(config, &times)
}

/// As `advance`, but with an explicit sorted list of snapshot times
/// (must start at 0 and end at t_final).
pub fn advance_with_times(config: &SimConfig, times: &[f64]) -> Result<Trajectory> {
    config.validate()?;
    let grid = config.grid();
    let params = config.params;
    let dt_params = match config.dt_eps {
        Some(eps) => params.with_eps(eps)?,
        None => params,
    };
    let s0 = initial_data(&config.initial, &grid)?;

    let (mut v, mut w): (Vec<f64>, Vec<f64>) = match config.formulation {
        Formulation::Primitive => (s0.v.clone(), s0.u.clone()),
        Formulation::Xi => {
            let xs = crate::state::to_xi(&s0, &params, &grid)?;
            (xs.v, xs.xi)
        }
        Formulation::Omega => {
            let os = crate::state::to_omega(&s0, &params, &grid)?;
            (os.v, os.omega)
        }
    };

    let rhs = |v: &[f64], w: &[f64]| -> Result<Tendency> {
        match config.formulation {
            Formulation::Primitive => rhs_primitive(
                &State { v: v.to_vec(), u: w.to_vec() },
                &params,
                &grid,
            ),
            Formulation::Xi => rhs_xi(
                &XiState { v: v.to_vec(), xi: w.to_vec() },
                None,
                &params,
                &grid,
            ),
            Formulation::Omega => rhs_omega(
                &OmegaState { v: v.to_vec(), omega: w.to_vec() },
                &params,
                &grid,
            ),
        }
    };

    let mut warnings = Vec::new();
    let check_boundary = |state: &State, t: f64, warnings: &mut Vec<String>| {
        let dev = state
            .v_field()
            .boundary_deviation()
            .max(state.u_field().boundary_deviation());
        if dev > config.boundary_tol {
            warnings.push(format!(
                "boundary contamination {dev:.3e} exceeds tolerance {:.3e} at t = {t}",
                config.boundary_tol
            ));
        }
    };

    let mut snapshots = Vec::with_capacity(times.len());
    let mut diss_cum = 0.0f64;
    let mut step_count = 0usize;
    let mut dt_min = f64::INFINITY;
    let mut dt_max = 0.0f64;
    let mut v_min_overall = v.iter().copied().fold(f64::INFINITY, f64::min);

    let state0 = to_primitive(&v, &w, config.formulation, &params, &grid)?;
    check_boundary(&state0, 0.0, &mut warnings);
    let mut rate_prev = dissipation_rate(&state0, &params, &grid);
    snapshots.push(Snapshot { t: 0.0, state: state0, dissipation_cum: 0.0 });

    let mut t = 0.0f64;
    for &target in times.iter().skip(1) {
        while t < target {
            let v_min = v.iter().copied().fold(f64::INFINITY, f64::min);
            if !(v_min > 0.0) {
                return Err(Error::State {
                    t,
                    node: v.iter().position(|&x| !(x > 0.0)).unwrap_or(0),
                    message: "specific volume lost positivity".into(),
                });
            }
            let mut dt = stable_dt_from_vmin(v_min, &dt_params, &grid, config.cfl);
            if t + dt >= target {
                dt = target - t;
            }
            let (vn, wn) = rk4_step(&rhs, &v, &w, dt, config.positivity_floor, t)?;
            v = vn;
            w = wn;
            t += dt;
            if (t - target).abs() <= 1e-12 * target.max(1.0) {
                t = target;
            }
            step_count += 1;
            dt_min = dt_min.min(dt);
            dt_max = dt_max.max(dt);
            v_min_overall = v_min_overall.min(v.iter().copied().fold(f64::INFINITY, f64::min));

            let state = to_primitive(&v, &w, config.formulation, &params, &grid)?;
            let rate = dissipation_rate(&state, &params, &grid);
            diss_cum += 0.5 * dt * (rate_prev + rate);
            rate_prev = rate;

            if t == target {
                check_boundary(&state, t, &mut warnings);
                snapshots.push(Snapshot { t, state, dissipation_cum: diss_cum });
            }
        }
    }

    if step_count == 0 {
        dt_min = 0.0;
    }
    Ok(Trajectory {
        snapshots,
        step_count,
        dt_min,
        dt_max,
        v_min_overall,
        warnings,
    })
}
