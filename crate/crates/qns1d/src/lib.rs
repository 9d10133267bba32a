//! One-dimensional compressible quantum Navier-Stokes solver in Lagrangian
//! coordinates.
//!
//! The system evolves specific volume v and velocity u on the whole line
//! (truncated to [-L, L]) with viscosity nu, scaled Planck constant eps,
//! and pressure p(v) = v^(-gamma):
//!
//! ```text
//! v_t = u_x
//! u_t = -(v^-gamma)_x + 2 nu (u_x/v^2)_x + eps^2 (-v_xx/v^4 + 2 v_x^2/v^5)_x
//! ```
//!
//! Two gradient-shifted velocities turn this viscous-dispersive system into
//! parabolic/relaxational form: xi = u - c_plus v_x/v^2 (real for eps <= nu)
//! and omega = u - 2 nu v_x/v^2 (all eps). All three formulations are
//! integrated by the same explicit RK4 driver and can be cross-checked
//! against each other.
//!
//! On top of the solver sit diagnostics (energy balance, BD entropy,
//! effective pressure, decay norms, the Germain-LeFloch coercivity pair)
//! and experiments (the eps -> 0 vanishing-dispersion limit with log-log
//! rate fitting, cross-formulation consistency, decay sampling).
//!
//! See the crate examples for runnable entry points per capability; the
//! `qns1d` binary exposes the same via subcommands.

pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod fd;
pub mod integrator;
pub mod output;
pub mod state;

pub use error::{Error, Result};
pub use integrator::{advance, Formulation, InitialData, SimConfig, Trajectory};
pub use state::{Grid, PhysicalParams, State};
