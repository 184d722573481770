//! Singular-perturbation sweep: solutions of -delta Lap u + u = f converge
//! to f in H1 at first order in delta, with the a-priori V-norm bound
//! holding for every solve.
//!
//!     cargo run --release --example lemma_a1_sweep

use relaxed_ch::grid::{Field, Grid};
use relaxed_ch::studies::lemma_a1_study;
use std::f64::consts::PI;

fn main() {
    let grid = Grid::new_1d(256, 1.0);
    let f = Field::from_fn(grid, |x, _| (PI * x).cos());
    let g = Field::zeros(grid);
    let deltas = [1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4];
    let report = lemma_a1_study(&f, &g, &|_| 0.0, 0.0, 0.0, 0.0, &deltas).expect("study");
    print!("{}", report.csv());
    println!();
    print!("{}", report.verdicts_csv());

    // A nonlinear instance: h(s) = tanh(s) with k1 = k3 = 1.
    let report = lemma_a1_study(&f, &g, &|s: f64| s.tanh(), 1.0, 0.0, 1.0, &deltas).expect("study");
    println!("\nnonlinear h = tanh:");
    print!("{}", report.csv());
}
