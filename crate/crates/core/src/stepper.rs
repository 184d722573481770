//! Semi-implicit convex-splitting time integration of the relaxed system:
//! the convex-part diffusion div(b_eps Psi_plus_eps'' grad phi) is implicit
//! (one SPD solve per step), the mu-flux and reactions explicit, and mu is
//! re-solved from the elliptic equation after every update. The cross
//! cancellation of the reaction terms and the flux form of the operators
//! conserve the total mass of phi + sigma to roundoff.

use crate::diagnostics::{self, DiagnosticsRecord, EntropyLedger};
use crate::elliptic::{cg_solve, solve_initial_mu_with, solve_mu_with};
use crate::error::{Error, Result};
use crate::grid::{div_mobility_grad, laplacian, CosineBasis, Field, Grid};
use crate::model::ModelParams;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;

#[derive(Debug, Clone)]
pub struct State {
    pub phi: Field,
    pub mu: Field,
    pub sigma: Field,
    pub t: f64,
}

#[derive(Debug, Clone)]
pub enum InitialData {
    /// phi0 = mean + amp cos(kx pi x / Lx) cos(ky pi y / Ly), clamped.
    Bump {
        phi_mean: f64,
        phi_amp: f64,
        mode_x: usize,
        mode_y: usize,
        clamp_min: f64,
        clamp_max: f64,
        sigma_const: f64,
        /// Optional uniform random perturbation of phi0 (seeded).
        perturb_amp: f64,
        seed: u64,
    },
    Constant { phi: f64, sigma: f64 },
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData::Bump {
            phi_mean: 0.45,
            phi_amp: 0.1,
            mode_x: 2,
            mode_y: 2,
            clamp_min: 0.0,
            clamp_max: 0.95,
            sigma_const: 0.5,
            perturb_amp: 0.0,
            seed: 0,
        }
    }
}

impl InitialData {
    pub fn build(&self, grid: Grid) -> (Field, Field) {
        match *self {
            InitialData::Bump {
                phi_mean,
                phi_amp,
                mode_x,
                mode_y,
                clamp_min,
                clamp_max,
                sigma_const,
                perturb_amp,
                seed,
            } => {
                let kx = mode_x as f64 * std::f64::consts::PI / grid.len[0];
                let ky = mode_y as f64 * std::f64::consts::PI / grid.len[1];
                let mut phi = Field::from_fn(grid, |x, y| {
                    let v = phi_mean
                        + phi_amp
                            * (kx * x).cos()
                            * if grid.dim == 2 { (ky * y).cos() } else { 1.0 };
                    v.clamp(clamp_min, clamp_max)
                });
                if perturb_amp != 0.0 {
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                    for v in &mut phi.data {
                        *v = (*v + perturb_amp * (rng.random::<f64>() - 0.5))
                            .clamp(clamp_min, clamp_max);
                    }
                }
                (phi, Field::constant(grid, sigma_const))
            }
            InitialData::Constant { phi, sigma } => {
                (Field::constant(grid, phi), Field::constant(grid, sigma))
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveCfg {
    pub enabled: bool,
    pub max_halvings: u32,
    /// Absolute threshold on the per-step energy-balance residual.
    pub energy_residual_tol: f64,
}

impl Default for AdaptiveCfg {
    fn default() -> Self {
        AdaptiveCfg {
            enabled: false,
            max_halvings: 8,
            energy_residual_tol: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ModelParams,
    pub grid: Grid,
    pub dt: f64,
    pub t_end: f64,
    pub initial: InitialData,
    /// Emit a diagnostics record every `cadence` steps (and at t_end).
    pub cadence: usize,
    pub adaptive: AdaptiveCfg,
    /// Run even if the assumption validator fails.
    pub force: bool,
}

impl RunConfig {
    pub fn new(params: ModelParams, grid: Grid) -> Self {
        RunConfig {
            params,
            grid,
            dt: 1e-4,
            t_end: 0.05,
            initial: InitialData::default(),
            cadence: 10,
            adaptive: AdaptiveCfg::default(),
            force: false,
        }
    }
}

/// R1 = P_eps(phi) (sigma + chi (1 - (phi - (delta/gamma) mu)) - (mu + Psi_plus_eps'(phi))).
/// The sigma equation uses the same field with the opposite sign, so the
/// reactions cancel pointwise in the total mass.
pub fn reaction_source(
    phi: &Field,
    mu: &Field,
    sigma: &Field,
    params: &ModelParams,
) -> Result<Field> {
    let dg = if params.delta == 0.0 {
        0.0
    } else {
        params.delta / params.gamma
    };
    let mut out = Field::zeros(phi.grid);
    for i in 0..out.data.len() {
        let y = phi.data[i] - dg * mu.data[i];
        let w = mu.data[i] + params.psi_plus(phi.data[i], 1)?;
        out.data[i] = params.proliferation(phi.data[i], true)
            * (sigma.data[i] + params.chi * (1.0 - y) - w);
    }
    Ok(out)
}

/// Owns the spectral workspace shared by all solves of a run.
pub struct Stepper {
    pub params: ModelParams,
    pub basis: CosineBasis,
}

impl Stepper {
    pub fn new(params: ModelParams, grid: Grid) -> Self {
        Stepper {
            params,
            basis: CosineBasis::new(grid),
        }
    }

    /// One first-order step: implicit convex-part diffusion for phi,
    /// implicit diffusion for sigma with the explicit cross term, then the
    /// elliptic mu re-solve.
    pub fn step(&self, state: &State, dt: f64) -> Result<State> {
        let p = &self.params;
        let dg = p.delta / p.gamma;

        let mut beps = Field::zeros(state.phi.grid);
        let mut mcoef = Field::zeros(state.phi.grid);
        for i in 0..beps.data.len() {
            let b = p.mobility(state.phi.data[i], true);
            beps.data[i] = b;
            mcoef.data[i] = b * p.psi_plus(state.phi.data[i], 2)?;
        }

        let f_exp = div_mobility_grad(&beps, &state.mu)?;
        let r1 = reaction_source(&state.phi, &state.mu, &state.sigma, p)?;

        // (I - dt div(m grad)) phi_new = phi + dt (f_exp + r1)
        let mut rhs_phi = state.phi.clone();
        rhs_phi.axpy(dt, &f_exp);
        rhs_phi.axpy(dt, &r1);
        let phi_new = cg_solve(
            |u| {
                let au = div_mobility_grad(&mcoef, u).expect("finite cg iterate");
                u.zip(&au, |a, b| a - dt * b)
            },
            &rhs_phi,
            1e-13,
            10_000,
        )?;

        // (I - dt Lap) sigma_new = sigma + dt (-chi Lap(phi_new - dg mu) - r1)
        let y_star = phi_new.zip(&state.mu, |a, b| a - dg * b);
        let cross = laplacian(&y_star)?;
        let mut rhs_sigma = state.sigma.clone();
        rhs_sigma.axpy(-dt * p.chi, &cross);
        rhs_sigma.axpy(-dt, &r1);
        let sigma_new = cg_solve(
            |u| {
                let lu = laplacian(u).expect("finite cg iterate");
                u.zip(&lu, |a, b| a - dt * b)
            },
            &rhs_sigma,
            1e-13,
            10_000,
        )?;

        if !phi_new.is_finite() || !sigma_new.is_finite() {
            return Err(Error::Blowup(format!("non-finite fields at t = {}", state.t)));
        }
        let mu_new = solve_mu_with(&self.basis, &phi_new, &sigma_new, p)?.mu;

        Ok(State {
            phi: phi_new,
            mu: mu_new,
            sigma: sigma_new,
            t: state.t + dt,
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub states: Vec<State>,
    pub records: Vec<DiagnosticsRecord>,
    pub ledger: EntropyLedger,
    /// Entropy of the initial datum (regularised) and initial energy, the
    /// anchors of the cumulative entropy check.
    pub s_eps_phi0: f64,
    pub e0: f64,
}

/// March the relaxed system to t_end. Initial mu comes from the stationary
/// initial-datum solve; diagnostics are emitted every `cadence` steps and at
/// the final time. Deterministic for a fixed config.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    let p = &config.params;
    if !config.force {
        let rep = p.validate();
        if !rep.all_pass() {
            let ids: Vec<&str> = rep.failed().iter().map(|c| c.id).collect();
            return Err(Error::Param(format!(
                "assumption validation failed: {}; use force to run anyway",
                ids.join(", ")
            )));
        }
    }
    if config.dt <= 0.0 {
        return Err(Error::Param("dt must be positive".into()));
    }

    let (phi0, sigma0) = config.initial.build(config.grid);
    // Initial-data admissibility: phi0 in [0,1) with integrable potential
    // and entropy.
    if phi0.min() < 0.0 || phi0.max() >= 1.0 {
        return Err(Error::Param(format!(
            "initial phi must lie in [0,1): range [{}, {}]",
            phi0.min(),
            phi0.max()
        )));
    }
    for &v in &phi0.data {
        let psi = p.psi_total(v, 0)?;
        if !psi.is_finite() {
            return Err(Error::Param(format!("Psi(phi0) not integrable at {v}")));
        }
    }

    let stepper = Stepper::new(p.clone(), config.grid);
    let mu0 = solve_initial_mu_with(&stepper.basis, &phi0, &sigma0, p)?.mu;
    let mut state = State {
        phi: phi0,
        mu: mu0,
        sigma: sigma0,
        t: 0.0,
    };

    let mut records = Vec::new();
    let mut states = Vec::new();
    let mut ledger = EntropyLedger::default();
    let s_eps_phi0 = diagnostics::entropy_functional(&state.phi, p)?;
    let e0 = diagnostics::free_energy(&state, p)?.total;

    let rec0 = diagnostics::record(&state, p, None)?;
    records.push(rec0);
    states.push(state.clone());

    if config.t_end <= 0.0 {
        return Ok(RunOutput {
            states,
            records,
            ledger,
            s_eps_phi0,
            e0,
        });
    }

    let mut steps_since_record = 0usize;
    let mut last_record_t = 0.0f64;
    while state.t < config.t_end - 1e-12 * config.t_end.max(1.0) {
        let dt = config.dt.min(config.t_end - state.t);
        ledger.add_step(&state, p, dt)?;
        let next = if config.adaptive.enabled {
            self::adaptive_step(&stepper, &state, dt, &config.adaptive)?
        } else {
            stepper.step(&state, dt)?
        };
        state = next;
        steps_since_record += 1;
        let at_end = state.t >= config.t_end - 1e-12 * config.t_end.max(1.0);
        if steps_since_record == config.cadence.max(1) || at_end {
            let gap = state.t - last_record_t;
            let rec = diagnostics::record(&state, p, Some((records.last().unwrap(), gap)))?;
            records.push(rec);
            states.push(state.clone());
            last_record_t = state.t;
            steps_since_record = 0;
        }
    }

    Ok(RunOutput {
        states,
        records,
        ledger,
        s_eps_phi0,
        e0,
    })
}

fn adaptive_step(stepper: &Stepper, state: &State, dt: f64, cfg: &AdaptiveCfg) -> Result<State> {
    let p = &stepper.params;
    let rec_before = diagnostics::record(state, p, None)?;
    let mut sub_dt = dt;
    for halving in 0..=cfg.max_halvings {
        // advance by dt using sub-steps of sub_dt
        let n_sub = (dt / sub_dt).round() as usize;
        let mut s = state.clone();
        let mut ok = true;
        for _ in 0..n_sub {
            match stepper.step(&s, sub_dt) {
                Ok(next) => s = next,
                Err(Error::Blowup(_)) => {
                    ok = false;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if ok {
            let rec_after = diagnostics::record(&s, p, None)?;
            let resid = diagnostics::energy_balance_residual(&rec_before, &rec_after, dt);
            if resid.abs() <= cfg.energy_residual_tol {
                return Ok(s);
            }
        }
        if halving == cfg.max_halvings {
            return Err(Error::StepRejected(format!(
                "energy-balance residual above {} after {} halvings at t = {}",
                cfg.energy_residual_tol, cfg.max_halvings, state.t
            )));
        }
        sub_dt *= 0.5;
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{dot, integrate};
    use crate::model::{ModelParams, ParamSet};
    use std::f64::consts::PI;

    fn small_params() -> ModelParams {
        ModelParams::default()
    }

    #[test]
    fn reaction_zero_when_p0_zero() {
        let params = ModelParams::new(ParamSet {
            p0: 0.0,
            ..ParamSet::default()
        });
        let g = Grid::new_2d(8, 8, 1.0, 1.0);
        let phi = Field::from_fn(g, |x, y| 0.4 + 0.1 * x * y);
        let mu = Field::constant(g, -0.3);
        let sigma = Field::constant(g, 0.5);
        let r = reaction_source(&phi, &mu, &sigma, &params).unwrap();
        assert!(r.data.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn reaction_degenerate_at_pure_phases() {
        // With the unregularised proliferation, P(0) = P(1) = 0.
        let params = ModelParams::new(ParamSet {
            eps_reg: 0.0,
            ..ParamSet::default()
        });
        for c in [0.0, 1.0] {
            assert_eq!(params.proliferation(c, true), 0.0);
        }
    }

    #[test]
    fn reaction_matches_pointwise_reevaluation() {
        let params = small_params();
        let g = Grid::new_1d(8, 1.0);
        let phi = Field {
            grid: g,
            data: vec![0.1, 0.3, 0.5, 0.7, 0.9, 0.2, 0.6, 0.4],
        };
        let mu = Field {
            grid: g,
            data: vec![-0.2, 0.1, 0.0, 0.3, -0.1, 0.2, -0.3, 0.05],
        };
        let sigma = Field {
            grid: g,
            data: vec![0.5, 0.4, 0.6, 0.3, 0.7, 0.5, 0.45, 0.55],
        };
        let r = reaction_source(&phi, &mu, &sigma, &params).unwrap();
        let dg = params.delta / params.gamma;
        for i in 0..8 {
            let y = phi.data[i] - dg * mu.data[i];
            let w = mu.data[i] + params.psi_plus(phi.data[i], 1).unwrap();
            let want = params.proliferation(phi.data[i], true)
                * (sigma.data[i] + params.chi * (1.0 - y) - w);
            assert!((r.data[i] - want).abs() < 1e-15);
        }
    }

    #[test]
    fn equilibrium_state_is_fixed() {
        let params = ModelParams::new(ParamSet {
            chi: 0.0,
            p0: 0.0,
            ..ParamSet::default()
        });
        let g = Grid::new_2d(8, 8, 1.0, 1.0);
        let phi = Field::constant(g, 0.45);
        let sigma = Field::constant(g, 0.0);
        let mu = crate::elliptic::solve_mu(&phi, &sigma, &params).unwrap().mu;
        let st = State {
            phi: phi.clone(),
            mu,
            sigma,
            t: 0.0,
        };
        let stepper = Stepper::new(params, g);
        let next = stepper.step(&st, 1e-3).unwrap();
        for (a, b) in next.phi.data.iter().zip(&phi.data) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(next.sigma.data.iter().all(|&v| v.abs() < 1e-10));
    }

    #[test]
    fn mass_conserved_one_step() {
        let params = small_params();
        let g = Grid::new_2d(16, 16, 1.0, 1.0);
        let phi = Field::from_fn(g, |x, y| {
            (0.45 + 0.2 * (2.0 * PI * x).cos() * (PI * y).cos()).clamp(0.05, 0.9)
        });
        let sigma = Field::from_fn(g, |x, _| 0.5 + 0.2 * (PI * x).cos());
        let mu = crate::elliptic::solve_mu(&phi, &sigma, &params).unwrap().mu;
        let st = State {
            phi,
            mu,
            sigma,
            t: 0.0,
        };
        let total0 = integrate(&st.phi) + integrate(&st.sigma);
        let stepper = Stepper::new(params, g);
        let next = stepper.step(&st, 1e-4).unwrap();
        let total1 = integrate(&next.phi) + integrate(&next.sigma);
        assert!(
            (total1 - total0).abs() <= 1e-12 * g.volume(),
            "mass drift {}",
            total1 - total0
        );
    }

    #[test]
    fn run_t_end_zero_yields_single_record() {
        let params = small_params();
        let g = Grid::new_2d(8, 8, 1.0, 1.0);
        let mut cfg = RunConfig::new(params, g);
        cfg.t_end = 0.0;
        let out = run(&cfg).unwrap();
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.states.len(), 1);
        assert_eq!(out.records[0].t, 0.0);
    }

    #[test]
    fn mean_phi_constant_without_reactions() {
        let params = ModelParams::new(ParamSet {
            p0: 0.0,
            ..ParamSet::default()
        });
        let g = Grid::new_2d(16, 16, 1.0, 1.0);
        let mut cfg = RunConfig::new(params, g);
        cfg.t_end = 2e-3;
        cfg.dt = 1e-4;
        cfg.cadence = 5;
        let out = run(&cfg).unwrap();
        let m0 = out.records[0].mass_phi;
        for r in &out.records {
            assert!(
                (r.mass_phi - m0).abs() <= 1e-12,
                "mean drift {} at t = {}",
                (r.mass_phi - m0).abs(),
                r.t
            );
        }
    }

    #[test]
    fn two_half_steps_agree_with_one_step_to_first_order() {
        let params = small_params();
        let g = Grid::new_2d(16, 16, 1.0, 1.0);
        let (phi, sigma) = InitialData::default().build(g);
        let mu = crate::elliptic::solve_mu(&phi, &sigma, &params).unwrap().mu;
        let st = State {
            phi,
            mu,
            sigma,
            t: 0.0,
        };
        let stepper = Stepper::new(params, g);
        let diff_at = |dt: f64| -> f64 {
            let one = stepper.step(&st, dt).unwrap();
            let half = stepper.step(&st, dt / 2.0).unwrap();
            let two = stepper.step(&half, dt / 2.0).unwrap();
            let mut d = one.phi.clone();
            d.axpy(-1.0, &two.phi);
            dot(&d, &d).sqrt()
        };
        let d1 = diff_at(4e-5);
        let d2 = diff_at(2e-5);
        let ratio = d1 / d2;
        // local splitting error is O(dt^2): halving dt divides the gap by ~4
        assert!(
            ratio > 2.5 && ratio < 6.0,
            "second-order local error ratio {ratio}"
        );
    }

    #[test]
    fn one_dimensional_run_conserves_mass_and_dissipates() {
        let params = ModelParams::new(ParamSet {
            chi: 0.0,
            p0: 0.0,
            ..ParamSet::default()
        });
        let g = Grid::new_1d(64, 1.0);
        let mut cfg = RunConfig::new(params, g);
        cfg.t_end = 5e-3;
        cfg.dt = 1e-4;
        cfg.cadence = 5;
        let out = run(&cfg).unwrap();
        let m0 = out.records[0].mass_total;
        for w in out.records.windows(2) {
            assert!((w[1].mass_total - m0).abs() < 1e-12);
            assert!(w[1].energy <= w[0].energy + 1e-10);
        }
    }

    #[test]
    fn adaptive_control_rejects_or_subdivides() {
        let params = small_params();
        let g = Grid::new_2d(8, 8, 1.0, 1.0);
        let mut cfg = RunConfig::new(params, g);
        cfg.t_end = 2e-4;
        cfg.dt = 1e-4;
        // unreachable tolerance: every halving fails, step is rejected
        cfg.adaptive = AdaptiveCfg {
            enabled: true,
            max_halvings: 2,
            energy_residual_tol: 1e-30,
        };
        assert!(matches!(run(&cfg), Err(Error::StepRejected(_))));
        // reachable tolerance: run completes
        cfg.adaptive.energy_residual_tol = 1.0;
        assert!(run(&cfg).is_ok());
    }

    #[test]
    fn run_rejects_invalid_params_unless_forced() {
        let params = ModelParams::new(ParamSet {
            s_star: 0.8,
            ..ParamSet::default()
        });
        let g = Grid::new_2d(8, 8, 1.0, 1.0);
        let cfg = RunConfig::new(params, g);
        assert!(matches!(run(&cfg), Err(Error::Param(_))));
    }

    #[test]
    fn run_rejects_inadmissible_initial_data() {
        let params = small_params();
        let g = Grid::new_2d(8, 8, 1.0, 1.0);
        let mut cfg = RunConfig::new(params, g);
        cfg.initial = InitialData::Constant {
            phi: 1.0,
            sigma: 0.0,
        };
        assert!(matches!(run(&cfg), Err(Error::Param(_))));
    }
}
