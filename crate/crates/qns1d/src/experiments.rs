//! The vanishing-dispersion-limit study, log-log rate fitting,
//! cross-formulation consistency checks, and decay sampling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::decay_norms;
use crate::error::{Error, Result};
use crate::fd::{fd_derivative, ScalarField};
use crate::integrator::{advance, advance_with_times, Formulation, SimConfig};
use crate::state::{Grid, State};

/// Configuration of an eps -> 0 sweep at fixed grid and initial data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitStudyConfig {
    /// Base run; its formulation must be primitive and its eps is replaced
    /// per sweep member.
    pub base: SimConfig,
    /// Strictly decreasing positive eps values, each <= base nu.
    pub eps_list: Vec<f64>,
    /// Time at which differences to the eps = 0 reference are measured.
    pub compare_time: f64,
    /// Derivative orders k for the error norms, subset of {0, 1, 2, 3}.
    pub derivative_orders: Vec<u8>,
    /// Testing hook: run every sweep member at eps = 0 so all errors
    /// vanish and the zero-error flag trips.
    #[serde(default)]
    pub degenerate_zero_eps: bool,
}

impl LimitStudyConfig {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.eps_list.len() < 2 {
            return Err(Error::Config {
                line: None,
                message: "eps_list needs at least 2 entries".into(),
            });
        }
        for w in self.eps_list.windows(2) {
            if !(w[1] < w[0]) {
                return Err(Error::Config {
                    line: None,
                    message: format!("eps_list must be strictly decreasing: {} -> {}", w[0], w[1]),
                });
            }
        }
        for &eps in &self.eps_list {
            if !(eps > 0.0) || eps > self.base.params.nu() {
                return Err(Error::Config {
                    line: None,
                    message: format!(
                        "each sweep eps must satisfy 0 < eps <= nu = {}; got {eps}",
                        self.base.params.nu()
                    ),
                });
            }
        }
        if !(self.compare_time > 0.0) || self.compare_time > self.base.t_final {
            return Err(Error::Config {
                line: None,
                message: format!(
                    "compare_time must lie in (0, t_final = {}]; got {}",
                    self.base.t_final, self.compare_time
                ),
            });
        }
        for &k in &self.derivative_orders {
            if k > 3 {
                return Err(Error::Config {
                    line: None,
                    message: format!("derivative orders must be <= 3, got {k}"),
                });
            }
        }
        Ok(())
    }
}

/// Least-squares line through (ln eps, ln error).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// Max absolute log-deviation from the fitted line.
    pub residual: f64,
}

/// Fit ln(error) = slope * ln(eps) + intercept by least squares.
pub fn rate_fit(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::DegenerateData(format!(
            "need >= 3 points, got {}",
            points.len()
        )));
    }
    for &(eps, err) in points {
        if !(err > 0.0) || !(eps > 0.0) {
            return Err(Error::DegenerateData(format!(
                "all eps and errors must be positive, got ({eps}, {err})"
            )));
        }
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(e, r)| (e.ln(), r.ln())).collect();
    let n = logs.len() as f64;
    let sx: f64 = logs.iter().map(|p| p.0).sum();
    let sy: f64 = logs.iter().map(|p| p.1).sum();
    let sxx: f64 = logs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = logs.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return Err(Error::DegenerateData("all eps values coincide".into()));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let residual = logs
        .iter()
        .map(|&(x, y)| (y - (slope * x + intercept)).abs())
        .fold(0.0f64, f64::max);
    Ok(RateFit {
        slope,
        intercept,
        residual,
    })
}

/// One (eps, k, error) entry of the sweep table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitPoint {
    pub eps: f64,
    pub k: u8,
    pub error: f64,
}

/// Full result of a limit study.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitStudy {
    pub points: Vec<LimitPoint>,
    /// Fit per derivative order; None when every error vanished
    /// (degenerate sweep), flagged below.
    pub fits: Vec<(u8, Option<RateFit>)>,
    pub zero_error: bool,
    /// L2 gap between the eps = 0 reference at N and at 2N (restricted to
    /// the coarse nodes): the discretization-error yardstick.
    pub discretization_gap: f64,
    /// True when the smallest-eps k=0 error exceeds 10x the gap.
    pub resolution_ok: bool,
}

fn l2_norm(values: &[f64], grid: &Grid) -> f64 {
    let sq: Vec<f64> = values.iter().map(|&x| x * x).collect();
    grid.trapezoid(&sq).max(0.0).sqrt()
}

/// Discrete L2 norm of the k-th x-derivative of a nodal difference field.
fn deriv_l2(diff: &[f64], k: u8, grid: &Grid) -> Result<f64> {
    if k == 0 {
        return Ok(l2_norm(diff, grid));
    }
    let field = ScalarField::new(diff.to_vec(), 0.0);
    let d = fd_derivative(&field, k, grid)?;
    Ok(l2_norm(&d.values, grid))
}

fn sweep_member(base: &SimConfig, eps: f64, dt_eps: f64, t_star: f64) -> Result<State> {
    let mut cfg = base.clone();
    cfg.params = base.params.with_eps(eps)?;
    cfg.formulation = Formulation::Primitive;
    cfg.t_final = t_star;
    cfg.snapshot_interval = 0.0;
    cfg.dt_eps = Some(dt_eps);
    let tr = advance(&cfg).map_err(|e| Error::Study {
        eps,
        source: Box::new(e),
    })?;
    Ok(tr.final_state().clone())
}

/// Run the eps = 0 reference once and every sweep member, and fit the
/// convergence rate of the k-th derivative error norms at the compare time.
///
/// Every run shares one grid, one initial datum, and one dt policy (the
/// tightest dispersive clause over the sweep), so temporal and spatial
/// errors are eps-uniform and cannot masquerade as an eps rate.
pub fn limit_study(config: &LimitStudyConfig) -> Result<LimitStudy> {
    config.validate()?;
    let grid = config.base.grid();
    let t_star = config.compare_time;
    // the dispersive dt clause tightens as eps grows, so the largest eps
    // in the sweep pins the shared policy
    let dt_eps = config.eps_list.iter().copied().fold(0.0f64, f64::max);

    let reference = sweep_member(&config.base, 0.0, dt_eps, t_star)?;

    let members: Vec<(f64, State)> = config
        .eps_list
        .par_iter()
        .map(|&eps| {
            let run_eps = if config.degenerate_zero_eps { 0.0 } else { eps };
            sweep_member(&config.base, run_eps, dt_eps, t_star).map(|s| (eps, s))
        })
        .collect::<Result<_>>()?;

    let mut points = Vec::new();
    for (eps, state) in &members {
        let dv: Vec<f64> = state
            .v
            .iter()
            .zip(reference.v.iter())
            .map(|(a, b)| a - b)
            .collect();
        let du: Vec<f64> = state
            .u
            .iter()
            .zip(reference.u.iter())
            .map(|(a, b)| a - b)
            .collect();
        for &k in &config.derivative_orders {
            let error = deriv_l2(&dv, k, &grid)? + deriv_l2(&du, k, &grid)?;
            points.push(LimitPoint { eps: *eps, k, error });
        }
    }

    let zero_error = points.iter().all(|p| p.error == 0.0);
    let mut fits = Vec::new();
    for &k in &config.derivative_orders {
        let pts: Vec<(f64, f64)> = points
            .iter()
            .filter(|p| p.k == k)
            .map(|p| (p.eps, p.error))
            .collect();
        let fit = if pts.iter().any(|&(_, e)| e <= 0.0) {
            None
        } else {
            rate_fit(&pts).ok()
        };
        fits.push((k, fit));
    }

    // N-doubling discretization yardstick on the reference run
    let fine_base = config.base.with_n_cells(2 * config.base.n_cells);
    let fine_ref = sweep_member(&fine_base, 0.0, dt_eps, t_star)?;
    let gap_field: Vec<f64> = (0..grid.n_nodes())
        .map(|j| {
            let dvv = reference.v[j] - fine_ref.v[2 * j];
            let duu = reference.u[j] - fine_ref.u[2 * j];
            (dvv * dvv + duu * duu).sqrt()
        })
        .collect();
    let discretization_gap = l2_norm(&gap_field, &grid);

    let smallest_eps = *config.eps_list.last().expect("validated nonempty");
    let smallest_err0 = points
        .iter()
        .filter(|p| p.k == 0 && p.eps == smallest_eps)
        .map(|p| p.error)
        .next()
        .unwrap_or(0.0);
    let resolution_ok = smallest_err0 > 10.0 * discretization_gap;

    Ok(LimitStudy {
        points,
        fits,
        zero_error,
        discretization_gap,
        resolution_ok,
    })
}

/// Max nodal discrepancy between two formulations' final states, at the
/// configured resolution and at the doubled one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormulationPair {
    pub left: Formulation,
    pub right: Formulation,
    pub discrepancy: f64,
    pub discrepancy_refined: f64,
    /// coarse/fine; second-order equivalence shows >= 3.
    pub refinement_ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossCheck {
    pub pairs: Vec<FormulationPair>,
}

fn final_state_for(cfg: &SimConfig, f: Formulation) -> Result<State> {
    let mut c = cfg.clone();
    c.formulation = f;
    c.snapshot_interval = 0.0;
    Ok(advance(&c)?.final_state().clone())
}

fn max_nodal_diff(a: &State, b: &State) -> f64 {
    a.v.iter()
        .zip(b.v.iter())
        .chain(a.u.iter().zip(b.u.iter()))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max)
}

/// Advance the same initial data under each requested formulation and
/// report max pairwise final-state discrepancies, plus whether each
/// discrepancy shrinks under dx halving.
pub fn cross_check(config: &SimConfig, formulations: &[Formulation]) -> Result<CrossCheck> {
    config.validate()?;
    if formulations.len() < 2 {
        return Err(Error::Argument(
            "cross_check needs at least two formulations".into(),
        ));
    }
    if formulations.contains(&Formulation::Xi) && config.params.eps() > config.params.nu() {
        return Err(Error::Regime(format!(
            "xi formulation needs eps <= nu; got eps = {}, nu = {}",
            config.params.eps(),
            config.params.nu()
        )));
    }

    let run_all = |cfg: &SimConfig| -> Result<Vec<(Formulation, State)>> {
        formulations
            .iter()
            .map(|&f| final_state_for(cfg, f).map(|s| (f, s)))
            .collect()
    };
    let coarse = run_all(config)?;
    let fine_cfg = config.with_n_cells(2 * config.n_cells);
    let fine = run_all(&fine_cfg)?;

    let mut pairs = Vec::new();
    for i in 0..formulations.len() {
        for j in i + 1..formulations.len() {
            let d = max_nodal_diff(&coarse[i].1, &coarse[j].1);
            let df = max_nodal_diff(&fine[i].1, &fine[j].1);
            pairs.push(FormulationPair {
                left: formulations[i],
                right: formulations[j],
                discrepancy: d,
                discrepancy_refined: df,
                refinement_ratio: if df > 0.0 { d / df } else { f64::INFINITY },
            });
        }
    }
    Ok(CrossCheck { pairs })
}

/// Decay norms sampled along one run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecaySeries {
    pub samples: Vec<(f64, f64, f64)>, // (t, sup_norm, grad_norm)
    /// Times where the sup norm grew relative to the previous sample.
    pub non_monotone_at: Vec<f64>,
}

/// Sample decay norms at the given increasing times (all <= t_final).
pub fn decay_study(config: &SimConfig, sample_times: &[f64]) -> Result<DecaySeries> {
    config.validate()?;
    if sample_times.is_empty() {
        return Err(Error::Argument("sample_times must be nonempty".into()));
    }
    for w in sample_times.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Argument("sample_times must be increasing".into()));
        }
    }
    let t_last = *sample_times.last().unwrap();
    if t_last > config.t_final {
        return Err(Error::Argument(format!(
            "last sample time {t_last} exceeds t_final {}",
            config.t_final
        )));
    }
    let mut times = vec![0.0];
    times.extend_from_slice(sample_times);
    if t_last < config.t_final {
        times.push(config.t_final);
    }
    let tr = advance_with_times(config, &times)?;
    let grid = config.grid();

    let mut samples = Vec::new();
    for snap in &tr.snapshots {
        if sample_times.iter().any(|&t| (t - snap.t).abs() <= 1e-12 * t.max(1.0)) {
            let (sup, grad) = decay_norms(&snap.state, &grid);
            samples.push((snap.t, sup, grad));
        }
    }
    let mut non_monotone_at = Vec::new();
    for w in samples.windows(2) {
        if w[1].1 > w[0].1 {
            non_monotone_at.push(w[1].0);
        }
    }
    Ok(DecaySeries {
        samples,
        non_monotone_at,
    })
}
