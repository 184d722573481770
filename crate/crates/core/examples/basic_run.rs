//! Run the default tumour-growth configuration on a 64x64 box and print the
//! diagnostics trace: energy, entropy, masses, and the phi range.
//!
//!     cargo run --release --example basic_run

use relaxed_ch::grid::Grid;
use relaxed_ch::model::ModelParams;
use relaxed_ch::stepper::{run, RunConfig};

fn main() {
    let params = ModelParams::default();
    let rep = params.validate();
    assert!(rep.all_pass(), "defaults must validate:\n{}", rep.render());

    let mut cfg = RunConfig::new(params, Grid::new_2d(64, 64, 1.0, 1.0));
    cfg.t_end = 0.02;
    cfg.cadence = 20;

    let out = run(&cfg).expect("run failed");
    println!("{:>9} {:>12} {:>12} {:>12} {:>9} {:>9}", "t", "energy", "entropy", "mass_total", "phi_min", "phi_max");
    for r in &out.records {
        println!(
            "{:9.5} {:12.8} {:12.8} {:12.9} {:9.5} {:9.5}",
            r.t, r.energy, r.entropy, r.mass_total, r.phi_min, r.phi_max
        );
    }
    let drift = out
        .records
        .iter()
        .map(|r| (r.mass_total - out.records[0].mass_total).abs())
        .fold(0.0, f64::max);
    println!("\nmax mass drift over the run: {drift:.3e}");
}
