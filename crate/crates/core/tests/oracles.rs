#![allow(clippy::needless_range_loop)]

//! Independent-oracle checks: quadrature for the entropy closed forms,
//! grid minimization for the extension constants, reference-trajectory
//! order tests for the stepper, the Galerkin initial-energy Cauchy test,
//! the cumulative entropy-estimate ledger, and determinism of study output.

mod common;

use relaxed_ch::grid::{dot, Field, Grid};
use relaxed_ch::model::{ConcaveExtension, ModelParams, ParamSet};
use relaxed_ch::stepper::{run, RunConfig, State, Stepper};
use relaxed_ch::studies;

#[test]
fn entropy_derivative_matches_quadrature_oracle() {
    // eta'(s) = int_{1/2}^{s} dr / b(r); closed form ln(s/(1-s)) + 1/(1-s) - 2.
    let params = ModelParams::default();
    for s in [0.9, 0.7, 0.3, 0.1] {
        let quad = common::simpson(&|r: f64| 1.0 / (r * (1.0 - r) * (1.0 - r)), 0.5, s, 1e-12);
        let closed = params.entropy_density(s, 1, false).unwrap();
        assert!(
            (quad - closed).abs() < 1e-8,
            "eta'({s}): quadrature {quad} vs closed {closed}"
        );
    }
    // frozen value at 0.9: ln 9 + 8
    let v = params.entropy_density(0.9, 1, false).unwrap();
    assert!((v - 10.197224577336219).abs() < 1e-12);
    // eta itself is the integral of eta' from 1/2
    for s in [0.85, 0.4] {
        let params = params.clone();
        let quad = common::simpson(
            &move |r: f64| params.entropy_density(r, 1, false).unwrap(),
            0.5,
            s,
            1e-12,
        );
        let closed = ModelParams::default().entropy_density(s, 0, false).unwrap();
        assert!((quad - closed).abs() < 1e-8);
    }
}

#[test]
fn extension_constants_against_grid_minimization_oracle() {
    // The documented oracle instance: m = 1, w = 1, q = 2, s* = 0.6.
    let params = ModelParams::new(ParamSet {
        extension: ConcaveExtension {
            margin: 1.0,
            ramp_width: 1.0,
            far_curvature: 2.0,
        },
        ..ParamSet::default()
    });
    let k = params.constants();
    assert!((k.c1 - 0.99).abs() < 1e-12, "c1 = {}", k.c1);
    // grid minimization of Psi_minus(s) - c1 s^2 over [-50, 50]
    let n = 200_000;
    let mut worst_gap = f64::INFINITY;
    for i in 0..=n {
        let s = -50.0 + 100.0 * i as f64 / n as f64;
        let gap = params.psi_minus(s, 0) - k.c1 * s * s;
        worst_gap = worst_gap.min(gap);
        assert!(gap + k.c2 >= -1e-9, "coercivity violated at {s}");
        assert!(params.psi_minus(s, 1).abs() <= k.c0 * (s.abs() + 1.0) + 1e-9);
    }
    // c2 must cover at least the sampled deficit
    assert!(k.c2 >= -worst_gap - 1e-9);
    assert_eq!(k.lip, 2.0);
}

#[test]
fn b_psi_plus_curvature_product_is_bounded_near_one() {
    // b(s) Psi_plus''(s) = s(1-s*) - 2 s^2 (1-s)^2 -> 1-s* as s -> 1.
    let params = ModelParams::new(ParamSet {
        eps_reg: 0.0,
        ..ParamSet::default()
    });
    let a = 1.0 - params.s_star;
    for i in 0..1000 {
        let s = 0.99 + 0.00999 * i as f64 / 1000.0;
        let direct = params.mobility(s, false) * params.psi_plus(s, 2).unwrap();
        let symbolic = s * a - 2.0 * s * s * (1.0 - s) * (1.0 - s);
        assert!((direct - symbolic).abs() < 1e-10);
    }
    let near_one = params.mobility(0.999999, false) * params.psi_plus(0.999999, 2).unwrap();
    assert!((near_one - a).abs() < 1e-4);
}

#[test]
fn stepper_first_order_against_reference_trajectory() {
    let params = ModelParams::default();
    let grid = Grid::new_2d(16, 16, 1.0, 1.0);
    let mut cfg = RunConfig::new(params.clone(), grid);
    cfg.t_end = 2e-3;
    cfg.cadence = usize::MAX; // only initial + final states matter

    let final_phi = |dt: f64| -> Field {
        let mut c = cfg.clone();
        c.dt = dt;
        c.cadence = (c.t_end / dt).round() as usize;
        let out = run(&c).unwrap();
        out.states.last().unwrap().phi.clone()
    };
    let reference = final_phi(6.25e-6);
    let err = |dt: f64| -> f64 {
        let mut d = final_phi(dt);
        d.axpy(-1.0, &reference);
        dot(&d, &d).sqrt()
    };
    let e1 = err(1e-4);
    let e2 = err(5e-5);
    let e3 = err(2.5e-5);
    let r12 = e1 / e2;
    let r23 = e2 / e3;
    assert!(
        (1.5..=2.8).contains(&r12) && (1.5..=2.8).contains(&r23),
        "first-order decay ratios {r12}, {r23} (errors {e1:.3e}, {e2:.3e}, {e3:.3e})"
    );
}

#[test]
fn default_run_energy_regression_golden() {
    // Smooth bump initial data, default parameters, 16^2, t_end = 5e-3.
    // Values frozen from the first verified run of this configuration.
    let mut cfg = RunConfig::new(ModelParams::default(), Grid::new_2d(16, 16, 1.0, 1.0));
    cfg.t_end = 5e-3;
    cfg.dt = 1e-4;
    cfg.cadence = 5;
    let out = run(&cfg).unwrap();
    let e_final = out.records.last().unwrap().energy;
    assert!(e_final < out.e0, "final energy must fall below initial");
    let golden = 9.166572303899123e-2;
    assert!(
        (e_final - golden).abs() < 1e-10,
        "energy regression: {e_final:.15e} vs golden {golden:.15e}"
    );
}

#[test]
fn entropy_ledger_cumulative_bound() {
    let mut cfg = RunConfig::new(ModelParams::default(), Grid::new_2d(16, 16, 1.0, 1.0));
    cfg.t_end = 5e-3;
    cfg.dt = 1e-4;
    cfg.cadence = 5;
    let out = run(&cfg).unwrap();
    let st = out.states.last().unwrap();
    let chk = out
        .ledger
        .check(st, &cfg.params, out.s_eps_phi0, out.e0)
        .unwrap()
        .expect("constants available for defaults");
    assert!(
        chk.lhs <= chk.rhs_literal + 1e-9 * (1.0 + chk.rhs_literal.abs()),
        "literal entropy chain: lhs {} > rhs {}",
        chk.lhs,
        chk.rhs_literal
    );
    assert!(
        chk.lhs <= chk.rhs_const,
        "S(phi0) + C1 E(0) + C2 bound: lhs {} > rhs {}",
        chk.lhs,
        chk.rhs_const
    );
    assert!(chk.c1 > 0.0 && chk.c2 > 0.0);
}

#[test]
fn galerkin_initial_energy_cauchy_in_n() {
    // A spectrally rich smooth initial datum: projected initial energies
    // E(0; n) must form a Cauchy sequence as n grows.
    let params = ModelParams::default();
    let grid = Grid::new_2d(32, 32, 1.0, 1.0);
    let phi0 = Field::from_fn(grid, |x, y| {
        let r2 = (x - 0.4) * (x - 0.4) + (y - 0.55) * (y - 0.55);
        (0.35 + 0.4 * (-r2 / 0.03).exp()).clamp(0.0, 0.95)
    });
    let sigma0 = Field::from_fn(grid, |x, _| 0.5 + 0.1 * (-(x - 0.5) * (x - 0.5) / 0.05).exp());
    let mut e0s = Vec::new();
    for n in [4, 8, 16, 32, 64] {
        let sys = relaxed_ch::galerkin::GalerkinSystem::new(params.clone(), grid, n).unwrap();
        let (a0, _c0, d0) = sys.initial_coeffs(&phi0, &sigma0).unwrap();
        let mut v = vec![0.0; 2 * n + 1];
        v[..n].copy_from_slice(&a0);
        v[n..2 * n].copy_from_slice(&d0);
        e0s.push(sys.energy(&v).unwrap().total);
    }
    let diffs: Vec<f64> = e0s.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    // Cauchy: past the coarse resolutions the increments shrink to zero.
    let imax = diffs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0;
    for w in diffs[imax..].windows(2) {
        assert!(
            w[1] <= w[0] + 1e-12,
            "increments not shrinking: {e0s:?} diffs {diffs:?}"
        );
    }
    let dmax = diffs[imax];
    assert!(
        *diffs.last().unwrap() < 0.2 * dmax,
        "no decay: {diffs:?}"
    );
}

#[test]
fn delta_study_cauchy_regression_golden() {
    // Frozen from the first verified run of this configuration; the column
    // must stay strictly decreasing with first-order decay.
    let params = ModelParams::new(ParamSet {
        gamma: 0.1,
        delta: 8e-3,
        ..ParamSet::default()
    });
    let mut cfg = RunConfig::new(params, Grid::new_2d(16, 16, 1.0, 1.0));
    cfg.t_end = 2e-3;
    cfg.dt = 1e-5;
    cfg.cadence = 20;
    let (report, _) = studies::delta_continuation(&cfg, &[8e-3, 4e-3, 2e-3, 1e-3]).unwrap();
    let c = report.column("cauchy_y_l2l2").unwrap();
    let golden = [
        1.30891103254203748e-3,
        6.52997535678590240e-4,
        3.29094374927595688e-4,
    ];
    for (got, want) in c[1..].iter().zip(&golden) {
        assert!(
            (got - want).abs() <= 1e-12 * want,
            "cauchy column regressed: {got:.17e} vs {want:.17e}"
        );
    }
}

#[test]
fn studies_are_bitwise_deterministic() {
    let base = {
        let params = ModelParams::default();
        let mut cfg = RunConfig::new(params, Grid::new_2d(16, 16, 1.0, 1.0));
        cfg.t_end = 1e-3;
        cfg.cadence = 2;
        cfg
    };
    let (rep1, _) = studies::eps_continuation(&base, &[0.1, 0.05]).unwrap();
    let (rep2, _) = studies::eps_continuation(&base, &[0.1, 0.05]).unwrap();
    assert_eq!(rep1.csv(), rep2.csv());
    assert_eq!(rep1.verdicts_csv(), rep2.verdicts_csv());
}

#[test]
fn step_preserves_mu_equation_residual() {
    // After a step, the stored mu satisfies its elliptic equation to solver
    // tolerance (re-solve check).
    let params = ModelParams::default();
    let grid = Grid::new_2d(16, 16, 1.0, 1.0);
    let cfg = RunConfig::new(params.clone(), grid);
    let (phi0, sigma0) = cfg.initial.build(grid);
    let mu0 = relaxed_ch::elliptic::solve_initial_mu(&phi0, &sigma0, &params)
        .unwrap()
        .mu;
    let st = State {
        phi: phi0,
        mu: mu0,
        sigma: sigma0,
        t: 0.0,
    };
    let stepper = Stepper::new(params.clone(), grid);
    let next = stepper.step(&st, 1e-4).unwrap();
    let re = relaxed_ch::elliptic::solve_mu(&next.phi, &next.sigma, &params).unwrap();
    let mut d = re.mu.clone();
    d.axpy(-1.0, &next.mu);
    assert!(dot(&d, &d).sqrt() < 1e-9);
}
