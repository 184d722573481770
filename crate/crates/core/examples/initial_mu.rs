//! The initial chemical potential is not prescribed: it solves a stationary
//! elliptic problem at t = 0. This example computes mu(0) for the default
//! initial data and shows ||(phi0 - (delta/gamma) mu(0)) - phi0||_H1 -> 0
//! as the relaxation vanishes.
//!
//!     cargo run --release --example initial_mu

use relaxed_ch::elliptic::solve_initial_mu;
use relaxed_ch::grid::{norm, Field, Grid, NormKind};
use relaxed_ch::model::{ModelParams, ParamSet};
use std::f64::consts::PI;

fn main() {
    let grid = Grid::new_2d(32, 32, 1.0, 1.0);
    let phi0 = Field::from_fn(grid, |x, y| {
        (0.45 + 0.1 * (2.0 * PI * x).cos() * (2.0 * PI * y).cos()).clamp(0.0, 0.95)
    });
    let sigma0 = Field::constant(grid, 0.5);

    println!("{:>10} {:>12} {:>14} {:>10}", "delta", "||mu(0)||", "||y0-phi0||_H1", "iters");
    for delta in [1.6e-2, 8e-3, 4e-3, 2e-3, 1e-3] {
        let params = ModelParams::new(ParamSet {
            delta,
            ..ParamSet::default()
        });
        let sol = solve_initial_mu(&phi0, &sigma0, &params).expect("initial mu");
        let dg = delta / params.gamma;
        let mut y = phi0.clone();
        y.axpy(-dg, &sol.mu);
        let mut d = y;
        d.axpy(-1.0, &phi0);
        println!(
            "{delta:10.1e} {:12.6} {:14.6e} {:10}",
            norm(&sol.mu, NormKind::L2),
            norm(&d, NormKind::H1),
            sol.iterations
        );
    }
}
