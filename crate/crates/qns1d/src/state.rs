//! Domain types and closed-form scalar functions: physical parameters,
//! the uniform grid, nodal states in the primitive and effective-velocity
//! variables, pressure / energy-density functions, and the level-set root
//! solver for x - ln x - 1 = C.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd::{fd_derivative, ScalarField};

/// Which term dominates the dynamics for a given (nu, eps) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// eps = 0: classical Navier-Stokes limit.
    Limit,
    /// 0 < eps <= nu: viscosity dominates or is comparable.
    IntermediaryParabolic,
    /// eps > nu: dispersion dominates.
    Dispersive,
}

/// Viscosity nu > 0, scaled Planck constant eps >= 0, adiabatic exponent
/// gamma >= 1 for the pressure law p(v) = v^(-gamma).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    nu: f64,
    eps: f64,
    gamma: f64,
}

impl PhysicalParams {
    pub fn new(nu: f64, eps: f64, gamma: f64) -> Result<Self> {
        if !(nu > 0.0) || !nu.is_finite() {
            return Err(Error::Argument(format!("nu must be positive, got {nu}")));
        }
        if !(eps >= 0.0) || !eps.is_finite() {
            return Err(Error::Argument(format!("eps must be >= 0, got {eps}")));
        }
        if !(gamma >= 1.0) || !gamma.is_finite() {
            return Err(Error::Argument(format!("gamma must be >= 1, got {gamma}")));
        }
        Ok(Self { nu, eps, gamma })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn regime(&self) -> Regime {
        if self.eps == 0.0 {
            Regime::Limit
        } else if self.eps <= self.nu {
            Regime::IntermediaryParabolic
        } else {
            Regime::Dispersive
        }
    }

    /// Same parameters with the dispersion switched off (the eps = 0 reference).
    pub fn without_dispersion(&self) -> Self {
        Self { eps: 0.0, ..*self }
    }

    /// Same parameters with a different eps.
    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Self::new(self.nu, eps, self.gamma)
    }
}

/// Uniform symmetric grid on [-L, L] with N cells and N+1 nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    half_width: f64,
    n_cells: usize,
}

impl Grid {
    pub fn new(half_width: f64, n_cells: usize) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::Argument(format!(
                "half_width must be positive, got {half_width}"
            )));
        }
        if n_cells < 16 || n_cells % 2 != 0 {
            return Err(Error::Argument(format!(
                "n_cells must be even and >= 16, got {n_cells}"
            )));
        }
        Ok(Self {
            half_width,
            n_cells,
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    /// Number of nodes, N + 1.
    pub fn n_nodes(&self) -> usize {
        self.n_cells + 1
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.n_cells as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_nodes()).map(|j| self.node(j)).collect()
    }

    /// Same domain with twice the cells (nodes of self are every other node).
    pub fn refined(&self) -> Self {
        Self {
            half_width: self.half_width,
            n_cells: 2 * self.n_cells,
        }
    }

    /// Composite trapezoid quadrature of nodal values over [-L, L].
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.n_nodes());
        let n = values.len();
        let interior: f64 = values[1..n - 1].iter().sum();
        self.dx() * (0.5 * values[0] + interior + 0.5 * values[n - 1])
    }
}

fn check_positive(v: &[f64]) -> Result<()> {
    for (j, &vj) in v.iter().enumerate() {
        if !(vj > 0.0) {
            return Err(Error::Domain(format!(
                "specific volume must stay positive; v[{j}] = {vj}"
            )));
        }
    }
    Ok(())
}

/// Primitive unknowns: specific volume v > 0 and velocity u, nodal arrays.
/// Far field is (v, u) -> (1, 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub v: Vec<f64>,
    pub u: Vec<f64>,
}

impl State {
    pub fn new(v: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        if v.len() != u.len() {
            return Err(Error::Argument(format!(
                "v and u lengths differ: {} vs {}",
                v.len(),
                u.len()
            )));
        }
        check_positive(&v)?;
        Ok(Self { v, u })
    }

    pub fn equilibrium(grid: &Grid) -> Self {
        Self {
            v: vec![1.0; grid.n_nodes()],
            u: vec![0.0; grid.n_nodes()],
        }
    }

    pub fn v_min(&self) -> f64 {
        self.v.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn v_max(&self) -> f64 {
        self.v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn v_field(&self) -> ScalarField {
        ScalarField::new(self.v.clone(), 1.0)
    }

    pub fn u_field(&self) -> ScalarField {
        ScalarField::new(self.u.clone(), 0.0)
    }
}

/// (v, xi) with xi = u - c_plus * v_x / v^2. Only real for eps <= nu.
#[derive(Debug, Clone, PartialEq)]
pub struct XiState {
    pub v: Vec<f64>,
    pub xi: Vec<f64>,
}

/// (v, omega) with omega = u - 2 nu * v_x / v^2. Defined for all eps >= 0.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaState {
    pub v: Vec<f64>,
    pub omega: Vec<f64>,
}

/// Lagrangian pressure p(v) = v^(-gamma).
pub fn pressure(v: f64, gamma: f64) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::Domain(format!("pressure needs v > 0, got {v}")));
    }
    Ok(v.powf(-gamma))
}

/// Potential energy density Phi(v) >= 0 with equality iff v = 1:
/// v - 1 + (v^(1-gamma) - 1)/(gamma - 1) for gamma > 1, v - 1 - ln v for gamma = 1.
pub fn phi(v: f64, gamma: f64) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::Domain(format!("phi needs v > 0, got {v}")));
    }
    if gamma == 1.0 {
        Ok(v - 1.0 - v.ln())
    } else {
        Ok(v - 1.0 + (v.powf(1.0 - gamma) - 1.0) / (gamma - 1.0))
    }
}

/// c_plus = nu + sqrt(nu^2 - eps^2), c_minus = nu - sqrt(nu^2 - eps^2).
/// Satisfy c_plus * c_minus = eps^2 and c_plus + c_minus = 2 nu.
pub fn c_pair(nu: f64, eps: f64) -> Result<(f64, f64)> {
    if eps > nu {
        return Err(Error::Regime(format!(
            "c_pair needs eps <= nu (xi formulation is complex otherwise); nu = {nu}, eps = {eps}"
        )));
    }
    if !(eps >= 0.0) || !(nu > 0.0) {
        return Err(Error::Argument(format!("need nu > 0, eps >= 0; got nu = {nu}, eps = {eps}")));
    }
    let root = (nu * nu - eps * eps).sqrt();
    Ok((nu + root, nu - root))
}

/// Auxiliary function F(v) from the effective-pressure construction:
/// gamma/(2 nu (gamma-2)) * v^(2-gamma) for gamma != 2, -(gamma/(2 nu)) ln v for gamma = 2.
pub fn f_effective(v: f64, nu: f64, gamma: f64) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::Domain(format!("f_effective needs v > 0, got {v}")));
    }
    if gamma == 2.0 {
        Ok(-(gamma / (2.0 * nu)) * v.ln())
    } else {
        Ok(gamma / (2.0 * nu * (gamma - 2.0)) * v.powf(2.0 - gamma))
    }
}

/// Nodal array c * v_x / v^2 with the module's centered stencil.
fn gradient_shift(v: &[f64], c: f64, grid: &Grid) -> Vec<f64> {
    let vx = fd_derivative(&ScalarField::new(v.to_vec(), 1.0), 1, grid)
        .expect("order 1 is valid");
    v.iter()
        .zip(vx.values.iter())
        .map(|(&vj, &vxj)| c * vxj / (vj * vj))
        .collect()
}

/// xi = u - c_plus v_x / v^2. Needs eps <= nu.
pub fn to_xi(state: &State, params: &PhysicalParams, grid: &Grid) -> Result<XiState> {
    check_positive(&state.v)?;
    let (c_plus, _) = c_pair(params.nu(), params.eps())?;
    let shift = gradient_shift(&state.v, c_plus, grid);
    let xi = state
        .u
        .iter()
        .zip(shift.iter())
        .map(|(&u, &s)| u - s)
        .collect();
    Ok(XiState {
        v: state.v.clone(),
        xi,
    })
}

/// Exact inverse of `to_xi` (same stencil).
pub fn from_xi(xi_state: &XiState, params: &PhysicalParams, grid: &Grid) -> Result<State> {
    check_positive(&xi_state.v)?;
    let (c_plus, _) = c_pair(params.nu(), params.eps())?;
    let shift = gradient_shift(&xi_state.v, c_plus, grid);
    let u = xi_state
        .xi
        .iter()
        .zip(shift.iter())
        .map(|(&xi, &s)| xi + s)
        .collect();
    Ok(State {
        v: xi_state.v.clone(),
        u,
    })
}

/// omega = u - 2 nu v_x / v^2.
pub fn to_omega(state: &State, params: &PhysicalParams, grid: &Grid) -> Result<OmegaState> {
    check_positive(&state.v)?;
    let shift = gradient_shift(&state.v, 2.0 * params.nu(), grid);
    let omega = state
        .u
        .iter()
        .zip(shift.iter())
        .map(|(&u, &s)| u - s)
        .collect();
    Ok(OmegaState {
        v: state.v.clone(),
        omega,
    })
}

/// Exact inverse of `to_omega`.
pub fn from_omega(
    omega_state: &OmegaState,
    params: &PhysicalParams,
    grid: &Grid,
) -> Result<State> {
    check_positive(&omega_state.v)?;
    let shift = gradient_shift(&omega_state.v, 2.0 * params.nu(), grid);
    let u = omega_state
        .omega
        .iter()
        .zip(shift.iter())
        .map(|(&w, &s)| w + s)
        .collect();
    Ok(State {
        v: omega_state.v.clone(),
        u,
    })
}

/// The two positive roots of x - ln x - 1 = C, bracketing 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiLevelRoots {
    /// Smaller root, 0 < alpha <= 1.
    pub alpha: f64,
    /// Larger root, beta >= 1.
    pub beta: f64,
}

fn phi1(x: f64) -> f64 {
    x - 1.0 - x.ln()
}

fn bisect(mut lo: f64, mut hi: f64, target: f64) -> f64 {
    // phi1 is monotone on each side of 1; plain bisection to machine width.
    let increasing = phi1(hi) > phi1(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let val = phi1(mid) - target;
        if (val > 0.0) == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= f64::EPSILON * hi.abs() {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Solve x - ln x - 1 = C for the two roots alpha <= 1 <= beta.
pub fn solve_phi_level(c: f64) -> Result<PhiLevelRoots> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::Argument(format!(
            "level value must be a finite C >= 0, got {c}"
        )));
    }
    if c == 0.0 {
        return Ok(PhiLevelRoots {
            alpha: 1.0,
            beta: 1.0,
        });
    }
    // phi1(x) ~ -ln x as x -> 0+ and ~ x for x large, so these brackets
    // always contain a sign change.
    let alpha = bisect(1e-300_f64.max((-c - 1.0).exp() * 1e-3), 1.0, c);
    let beta = bisect(1.0, 1.0 + c + c.exp().min(1e300) + 10.0, c);
    Ok(PhiLevelRoots { alpha, beta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid() -> Grid {
        Grid::new(10.0, 128).unwrap()
    }

    fn params(nu: f64, eps: f64, gamma: f64) -> PhysicalParams {
        PhysicalParams::new(nu, eps, gamma).unwrap()
    }

    fn gauss_state(grid: &Grid) -> State {
        let v = grid
            .nodes()
            .iter()
            .map(|&x| 1.0 + 0.3 * (-x * x / 4.0).exp())
            .collect();
        let u = grid
            .nodes()
            .iter()
            .map(|&x| 0.2 * (-x * x / 4.0).exp())
            .collect();
        State::new(v, u).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(PhysicalParams::new(0.0, 0.0, 2.0).is_err());
        assert!(PhysicalParams::new(1.0, -0.1, 2.0).is_err());
        assert!(PhysicalParams::new(1.0, 0.1, 0.5).is_err());
        assert_eq!(params(1.0, 0.0, 2.0).regime(), Regime::Limit);
        assert_eq!(
            params(1.0, 0.5, 2.0).regime(),
            Regime::IntermediaryParabolic
        );
        assert_eq!(params(1.0, 1.0, 2.0).regime(), Regime::IntermediaryParabolic);
        assert_eq!(params(1.0, 1.5, 2.0).regime(), Regime::Dispersive);
    }

    #[test]
    fn grid_nodes_symmetric() {
        let g = grid();
        let nodes = g.nodes();
        assert_eq!(nodes.len(), g.n_nodes());
        assert!((g.dx() * g.n_cells() as f64 - 2.0 * g.half_width()).abs() < 1e-14);
        for (j, &x) in nodes.iter().enumerate() {
            assert!((x + nodes[nodes.len() - 1 - j]).abs() < 1e-12);
            if j > 0 {
                assert!(x > nodes[j - 1]);
            }
        }
        assert!(Grid::new(10.0, 15).is_err());
        assert!(Grid::new(10.0, 8).is_err());
        assert!(Grid::new(-1.0, 64).is_err());
    }

    #[test]
    fn pressure_examples() {
        assert_eq!(pressure(1.0, 2.0).unwrap(), 1.0);
        assert_eq!(pressure(1.0, 7.3).unwrap(), 1.0);
        assert!((pressure(2.0, 2.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((pressure(0.5, 1.5).unwrap() - 2.0f64.powf(1.5)).abs() < 1e-12);
        assert!(pressure(0.0, 2.0).is_err());
        assert!(pressure(-1.0, 2.0).is_err());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(1.0, 2.0).unwrap(), 0.0);
        assert!((phi(2.0, 2.0).unwrap() - 0.5).abs() < 1e-15);
        let e = std::f64::consts::E;
        assert!((phi(e, 1.0).unwrap() - (e - 2.0)).abs() < 1e-14);
        assert!(phi(0.0, 1.0).is_err());
    }

    #[test]
    fn c_pair_examples() {
        assert_eq!(c_pair(1.0, 1.0).unwrap(), (1.0, 1.0));
        assert_eq!(c_pair(1.0, 0.0).unwrap(), (2.0, 0.0));
        let (cp, cm) = c_pair(1.0, 0.6).unwrap();
        assert!((cp - 1.8).abs() < 1e-14);
        assert!((cm - 0.2).abs() < 1e-14);
        assert!(matches!(c_pair(1.0, 1.1), Err(Error::Regime(_))));
    }

    #[test]
    fn f_effective_examples() {
        assert_eq!(f_effective(1.0, 0.7, 2.0).unwrap(), 0.0);
        assert!((f_effective(1.0, 0.5, 3.0).unwrap() - 3.0).abs() < 1e-14);
        assert!((f_effective(2.0, 1.0, 1.0).unwrap() - (-1.0)).abs() < 1e-14);
        assert!(f_effective(0.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn transforms_constant_state() {
        let g = grid();
        let s = State::equilibrium(&g);
        let p = params(1.0, 0.5, 2.0);
        let xs = to_xi(&s, &p, &g).unwrap();
        assert!(xs.xi.iter().all(|&x| x == 0.0));
        let os = to_omega(&s, &p, &g).unwrap();
        assert!(os.omega.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn transform_round_trips() {
        let g = grid();
        let s = gauss_state(&g);
        let p = params(1.0, 0.5, 2.0);
        let back = from_xi(&to_xi(&s, &p, &g).unwrap(), &p, &g).unwrap();
        for (a, b) in s.u.iter().zip(back.u.iter()) {
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
        let back = from_omega(&to_omega(&s, &p, &g).unwrap(), &p, &g).unwrap();
        for (a, b) in s.u.iter().zip(back.u.iter()) {
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn xi_matches_independent_stencil_on_gauss_bump() {
        // Oracle: central difference coded independently of ScalarField.
        let g = grid();
        let s = gauss_state(&g);
        let p = params(1.0, 0.6, 2.0);
        let (c_plus, _) = c_pair(1.0, 0.6).unwrap();
        let xs = to_xi(&s, &p, &g).unwrap();
        let dx = g.dx();
        for j in 1..g.n_cells() {
            let vx = (s.v[j + 1] - s.v[j - 1]) / (2.0 * dx);
            let expected = s.u[j] - c_plus * vx / (s.v[j] * s.v[j]);
            assert!((xs.xi[j] - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn omega_matches_independent_stencil_and_eps0_equals_xi() {
        let g = grid();
        let s = gauss_state(&g);
        let p = params(1.0, 0.0, 2.0);
        let os = to_omega(&s, &p, &g).unwrap();
        let xs = to_xi(&s, &p, &g).unwrap();
        // c_plus = 2 nu at eps = 0, so xi and omega coincide pointwise.
        for (a, b) in os.omega.iter().zip(xs.xi.iter()) {
            assert_eq!(a, b);
        }
        let dx = g.dx();
        for j in 1..g.n_cells() {
            let vx = (s.v[j + 1] - s.v[j - 1]) / (2.0 * dx);
            let expected = s.u[j] - 2.0 * vx / (s.v[j] * s.v[j]);
            assert!((os.omega[j] - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn phi_level_trivial_roots() {
        let r = solve_phi_level(0.0).unwrap();
        assert_eq!((r.alpha, r.beta), (1.0, 1.0));
        let e = std::f64::consts::E;
        let r = solve_phi_level(e - 2.0).unwrap();
        assert!((r.beta - e).abs() < 1e-10);
    }

    #[test]
    fn phi_level_alpha_matches_bisection_oracle() {
        // Independent brute-force bisection on (1e-12, 1] frozen to 1e-12.
        let c = std::f64::consts::E - 2.0;
        let (mut lo, mut hi) = (1e-12_f64, 1.0_f64);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid - 1.0 - mid.ln() > c {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let r = solve_phi_level(c).unwrap();
        assert!((r.alpha - oracle).abs() < 1e-10, "alpha {} vs {}", r.alpha, oracle);
    }

    proptest! {
        #[test]
        fn phi_nonnegative_and_convex(v in 1e-3f64..50.0, w in 1e-3f64..50.0,
                                      gamma in prop_oneof![Just(1.0), 1.0f64..5.0]) {
            let pv = phi(v, gamma).unwrap();
            let pw = phi(w, gamma).unwrap();
            prop_assert!(pv >= 0.0);
            let mid = phi(0.5 * (v + w), gamma).unwrap();
            prop_assert!(mid <= 0.5 * (pv + pw) + 1e-12 * (1.0 + pv + pw));
        }

        #[test]
        fn c_pair_algebra(nu in 1e-3f64..10.0, frac in 0.0f64..1.0) {
            let eps = nu * frac;
            let (cp, cm) = c_pair(nu, eps).unwrap();
            prop_assert!((cp * cm - eps * eps).abs() <= 1e-12 * (1.0 + eps * eps));
            prop_assert!((cp + cm - 2.0 * nu).abs() <= 1e-12 * (1.0 + 2.0 * nu));
        }

        #[test]
        fn phi_level_roots_satisfy_equation(c in 1e-6f64..50.0) {
            let r = solve_phi_level(c).unwrap();
            prop_assert!(r.alpha <= 1.0 && r.beta >= 1.0);
            prop_assert!((r.alpha - 1.0 - r.alpha.ln() - c).abs() <= 1e-10);
            prop_assert!((r.beta - 1.0 - r.beta.ln() - c).abs() <= 1e-10 * (1.0 + c));
        }
    }
}
