//! Structural identities behind the scheme, checked numerically:
//!
//! 1. Bohm-potential identity 2 rho ((sqrt(rho))_yy/sqrt(rho))_y =
//!    (rho_yy - rho_y^2/rho)_y — discrete residual vs grid refinement.
//! 2. Germain-LeFloch coercivity int f^a f_xx^2 >= ((a-1)/3)^2 int f^(a-2) f_x^4.
//! 3. Jensen-level roots: both solutions of v - ln v - 1 = C bracket 1.

use qns1d::diagnostics::germain_lefloch;
use qns1d::fd::{bohm_residual, ScalarField};
use qns1d::state::solve_phi_level;
use qns1d::Grid;

fn main() -> qns1d::Result<()> {
    println!("Bohm identity residual, rho = 1 + 0.3 exp(-y^2):");
    println!("{:>8} {:>14} {:>8}", "N", "residual", "order");
    let mut prev: Option<f64> = None;
    for n in [256usize, 512, 1024, 2048] {
        let grid = Grid::new(10.0, n)?;
        let rho = ScalarField::new(
            grid.nodes().iter().map(|&y| 1.0 + 0.3 * (-y * y).exp()).collect(),
            1.0,
        );
        let res = bohm_residual(&rho, &grid)?;
        match prev {
            Some(p) => println!("{n:>8} {res:>14.6e} {:>8.2}", (p / res).log2()),
            None => println!("{n:>8} {res:>14.6e} {:>8}", "-"),
        }
        prev = Some(res);
    }

    println!("\nCoercivity inequality on f = 1 + 0.5 exp(-x^2):");
    let grid = Grid::new(15.0, 1024)?;
    let f = ScalarField::new(
        grid.nodes().iter().map(|&x| 1.0 + 0.5 * (-x * x).exp()).collect(),
        1.0,
    );
    for a in [2.0, 3.0, 4.0] {
        let (lhs, rhs) = germain_lefloch(&f, a, &grid)?;
        println!("  a = {a}: lhs {lhs:.6e} >= rhs {rhs:.6e} (margin {:.3e})", lhs - rhs);
    }

    println!("\nJensen-level roots of v - ln v - 1 = C:");
    for c in [0.01, 0.1, 1.0, 10.0] {
        let roots = solve_phi_level(c)?;
        println!("  C = {c:>5}: alpha = {:.12}, beta = {:.12}", roots.alpha, roots.beta);
    }
    Ok(())
}
