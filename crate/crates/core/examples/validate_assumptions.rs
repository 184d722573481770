//! Evaluate the structural assumptions for a few parameter sets and show
//! how violations are reported: convexity of the potential split, the
//! relaxation bound delta < delta0, the chemotaxis-coercivity condition,
//! and the proliferation-mobility compatibility.
//!
//!     cargo run --release --example validate_assumptions

use relaxed_ch::model::{ModelParams, ParamSet};

fn main() {
    let cases: Vec<(&str, ParamSet)> = vec![
        ("defaults", ParamSet::default()),
        (
            "s_star = 0.8 (loses convexity)",
            ParamSet {
                s_star: 0.8,
                ..ParamSet::default()
            },
        ),
        (
            "delta = 0.03 (above delta0)",
            ParamSet {
                delta: 0.03,
                ..ParamSet::default()
            },
        ),
        (
            "chi = 0.5 (chi^2 >= c1)",
            ParamSet {
                chi: 0.5,
                ..ParamSet::default()
            },
        ),
        (
            "P proportional to b (endpoint bound fails)",
            ParamSet {
                p_exponent: 1,
                ..ParamSet::default()
            },
        ),
    ];
    for (label, set) in cases {
        let params = ModelParams::new(set);
        let rep = params.validate();
        println!("== {label}");
        print!("{}", rep.render());
        println!(
            "   delta0 = {:.6e}, mu-contraction factor = {:.4}\n",
            params.delta0(),
            params.mu_contraction_factor()
        );
    }
}
