//! Relaxation study: identical runs at a decreasing sequence of delta.
//! The trajectories of y = phi - (delta/gamma) mu form a Cauchy sequence in
//! L2(0,T;L2), the flux norms stay uniformly bounded, and the initial-datum
//! distance ||y(0) - phi0||_H1 vanishes with delta.
//!
//!     cargo run --release --example delta_continuation

use relaxed_ch::grid::Grid;
use relaxed_ch::model::{ModelParams, ParamSet};
use relaxed_ch::stepper::RunConfig;
use relaxed_ch::studies::delta_continuation;

fn main() {
    let params = ModelParams::new(ParamSet {
        gamma: 0.1,
        delta: 8e-3,
        ..ParamSet::default()
    });
    let mut cfg = RunConfig::new(params, Grid::new_2d(32, 32, 1.0, 1.0));
    cfg.t_end = 4e-3;
    cfg.dt = 1e-5;
    cfg.cadence = 20;

    let deltas = [8e-3, 4e-3, 2e-3, 1e-3];
    let (report, _) = delta_continuation(&cfg, &deltas).expect("study failed");
    print!("{}", report.csv());
    println!();
    print!("{}", report.verdicts_csv());
}
