//! Regularisation study: the overshoot of phi above 1 is controlled by
//! 2 b(1-eps) S_eps, which vanishes as eps -> 0 through the degeneracy of
//! the mobility.
//!
//!     cargo run --release --example eps_continuation

use relaxed_ch::grid::Grid;
use relaxed_ch::model::{ModelParams, ParamSet};
use relaxed_ch::stepper::{InitialData, RunConfig};
use relaxed_ch::studies::eps_continuation;

fn main() {
    let params = ModelParams::new(ParamSet {
        p0: 2.0,
        ..ParamSet::default()
    });
    let mut cfg = RunConfig::new(params, Grid::new_2d(32, 32, 1.0, 1.0));
    cfg.t_end = 0.02;
    cfg.dt = 1e-4;
    cfg.cadence = 10;
    cfg.initial = InitialData::Bump {
        phi_mean: 0.55,
        phi_amp: 0.35,
        mode_x: 4,
        mode_y: 4,
        clamp_min: 0.0,
        clamp_max: 0.93,
        sigma_const: 1.0,
        perturb_amp: 0.0,
        seed: 0,
    };

    let eps = [0.1, 0.05, 0.025, 0.0125];
    let (report, _) = eps_continuation(&cfg, &eps).expect("study failed");
    print!("{}", report.csv());
    println!();
    print!("{}", report.verdicts_csv());
}
