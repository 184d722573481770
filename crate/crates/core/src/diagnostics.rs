//! Run-time evaluation of the functionals behind the a-priori estimates:
//! free energy, entropy, dissipation integrals, flux norm, bound violations,
//! and the cumulative entropy-estimate ledger.

use crate::error::Result;
use crate::grid::{dot, grad_form, grad_norm_sq, integrate, laplacian, Field};
use crate::model::ModelParams;
use crate::stepper::State;

#[derive(Debug, Clone)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub energy: f64,
    pub entropy: f64,
    pub mass_phi: f64,
    pub mass_sigma: f64,
    pub mass_total: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub phi_min: f64,
    pub phi_max: f64,
    pub overshoot_pos: f64,
    pub overshoot_neg: f64,
    pub flux_norm: f64,
    pub mu_residual: f64,
    pub energy_residual: f64,
}

impl DiagnosticsRecord {
    pub const CSV_HEADER: &'static str = "t,energy,entropy,mass_phi,mass_sigma,mass_total,D1,D2,D3,phi_min,phi_max,overshoot_pos,overshoot_neg,flux_norm,mu_residual,energy_residual";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.t,
            self.energy,
            self.entropy,
            self.mass_phi,
            self.mass_sigma,
            self.mass_total,
            self.d1,
            self.d2,
            self.d3,
            self.phi_min,
            self.phi_max,
            self.overshoot_pos,
            self.overshoot_neg,
            self.flux_norm,
            self.mu_residual,
            self.energy_residual
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EnergyBreakdown {
    pub psi_plus: f64,
    pub psi_minus: f64,
    pub grad: f64,
    pub mu_sq: f64,
    pub sigma_sq: f64,
    pub chemo: f64,
    pub total: f64,
}

fn use_eps(params: &ModelParams) -> bool {
    params.eps_reg > 0.0
}

/// y = phi - (delta/gamma) mu.
pub fn y_field(state: &State, params: &ModelParams) -> Field {
    let dg = if params.delta == 0.0 {
        0.0
    } else {
        params.delta / params.gamma
    };
    state.phi.zip(&state.mu, |p, m| p - dg * m)
}

/// Free energy
///   E = int [ Psi_plus(phi) + (gamma/2)|grad y|^2 + (delta/2gamma) mu^2
///           + Psi_minus(y) + sigma^2/2 + chi sigma (1 - y) ],
/// with the eps-regularised Psi_plus during regularised runs.
pub fn free_energy(state: &State, params: &ModelParams) -> Result<EnergyBreakdown> {
    let y = y_field(state, params);
    let vol = state.phi.grid.cell_volume();
    let mut psi_plus = 0.0;
    let mut psi_minus = 0.0;
    let mut chemo = 0.0;
    for i in 0..state.phi.data.len() {
        psi_plus += params.psi_plus(state.phi.data[i], 0)?;
        psi_minus += params.psi_minus(y.data[i], 0);
        chemo += params.chi * state.sigma.data[i] * (1.0 - y.data[i]);
    }
    psi_plus *= vol;
    psi_minus *= vol;
    chemo *= vol;
    let grad = 0.5 * params.gamma * grad_norm_sq(&y);
    let mu_sq = if params.delta == 0.0 {
        0.0
    } else {
        0.5 * params.delta / params.gamma * dot(&state.mu, &state.mu)
    };
    let sigma_sq = 0.5 * dot(&state.sigma, &state.sigma);
    let total = psi_plus + psi_minus + grad + mu_sq + sigma_sq + chemo;
    Ok(EnergyBreakdown {
        psi_plus,
        psi_minus,
        grad,
        mu_sq,
        sigma_sq,
        chemo,
        total,
    })
}

/// Entropy functional S = int eta(phi) (eps-regularised in-run).
pub fn entropy_functional(phi: &Field, params: &ModelParams) -> Result<f64> {
    let ueps = use_eps(params);
    let vol = phi.grid.cell_volume();
    let mut s = 0.0;
    for &v in &phi.data {
        s += params.entropy_density(v, 0, ueps)?;
    }
    Ok(s * vol)
}

/// The three nonnegative dissipation integrals of the energy identity:
/// D1 = int b_eps |grad(mu + Psi_plus_eps'(phi))|^2,
/// D2 = int |grad(sigma + chi(1 - y))|^2,
/// D3 = int P_eps R^2.
pub fn dissipations(state: &State, params: &ModelParams) -> Result<(f64, f64, f64)> {
    let y = y_field(state, params);
    let mut w = state.mu.clone();
    let mut beps = Field::zeros(state.phi.grid);
    let mut peps = Field::zeros(state.phi.grid);
    for i in 0..w.data.len() {
        w.data[i] += params.psi_plus(state.phi.data[i], 1)?;
        beps.data[i] = params.mobility(state.phi.data[i], true);
        peps.data[i] = params.proliferation(state.phi.data[i], true);
    }
    let d1 = grad_form(&beps, &w, &w);
    let smy = state.sigma.zip(&y, |s, yv| s - params.chi * yv);
    let d2 = grad_norm_sq(&smy);
    let vol = state.phi.grid.cell_volume();
    let mut d3 = 0.0;
    for i in 0..w.data.len() {
        let r = state.sigma.data[i] + params.chi * (1.0 - y.data[i]) - w.data[i];
        d3 += peps.data[i] * r * r;
    }
    d3 *= vol;
    Ok((d1, d2, d3))
}

/// Face-sampled flux J = b grad mu + b Psi_plus'' grad phi (regularised
/// in-run) and its L2 norm.
#[derive(Debug, Clone)]
pub struct FaceFlux {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub l2: f64,
}

pub fn flux_j(state: &State, params: &ModelParams) -> Result<FaceFlux> {
    let g = state.phi.grid;
    let (nx, ny) = (g.n[0], g.n[1]);
    let vol = g.cell_volume();
    let mut bc = Vec::with_capacity(g.cells());
    let mut bpsi = Vec::with_capacity(g.cells());
    for &p in &state.phi.data {
        let b = params.mobility(p, true);
        bc.push(b);
        bpsi.push(b * params.psi_plus(p, 2)?);
    }
    let mut jx = vec![0.0; g.cells()];
    let mut jy = vec![0.0; g.cells()];
    let mut l2 = 0.0;
    let inv_hx = 1.0 / g.h(0);
    for j in 0..ny {
        for i in 0..nx - 1 {
            let a = j * nx + i;
            let b = j * nx + i + 1;
            let bm = 0.5 * (bc[a] + bc[b]);
            let bpm = 0.5 * (bpsi[a] + bpsi[b]);
            let v = bm * (state.mu.data[b] - state.mu.data[a]) * inv_hx
                + bpm * (state.phi.data[b] - state.phi.data[a]) * inv_hx;
            jx[a] = v;
            l2 += v * v * vol;
        }
    }
    if g.dim == 2 {
        let inv_hy = 1.0 / g.h(1);
        for j in 0..ny - 1 {
            for i in 0..nx {
                let a = j * nx + i;
                let b = (j + 1) * nx + i;
                let bm = 0.5 * (bc[a] + bc[b]);
                let bpm = 0.5 * (bpsi[a] + bpsi[b]);
                let v = bm * (state.mu.data[b] - state.mu.data[a]) * inv_hy
                    + bpm * (state.phi.data[b] - state.phi.data[a]) * inv_hy;
                jy[a] = v;
                l2 += v * v * vol;
            }
        }
    }
    Ok(FaceFlux {
        x: jx,
        y: jy,
        l2: l2.sqrt(),
    })
}

/// || mu - (-gamma Lap y + Psi_minus'(y) - chi sigma) ||_L2; by construction
/// of the mu solve this equals the elliptic residual.
pub fn mu_limit_residual(state: &State, params: &ModelParams) -> Result<f64> {
    let y = y_field(state, params);
    mu_residual_against(&y, state, params)
}

/// Same expression with the delta = 0 limit candidate (y replaced by phi).
pub fn mu_limit_residual_delta0(state: &State, params: &ModelParams) -> Result<f64> {
    mu_residual_against(&state.phi, state, params)
}

fn mu_residual_against(y: &Field, state: &State, params: &ModelParams) -> Result<f64> {
    let ly = laplacian(y)?;
    let mut r = Field::zeros(y.grid);
    for i in 0..r.data.len() {
        r.data[i] = state.mu.data[i]
            - (-params.gamma * ly.data[i] + params.psi_minus(y.data[i], 1)
                - params.chi * state.sigma.data[i]);
    }
    Ok(dot(&r, &r).sqrt())
}

/// (E_curr - E_prev)/dt + mean of the dissipation sums of the two records.
/// Near zero up to O(dt) for the first-order stepper; vanishes to integrator
/// tolerance in Galerkin mode.
pub fn energy_balance_residual(
    prev: &DiagnosticsRecord,
    curr: &DiagnosticsRecord,
    dt: f64,
) -> f64 {
    let dp = prev.d1 + prev.d2 + prev.d3;
    let dc = curr.d1 + curr.d2 + curr.d3;
    (curr.energy - prev.energy) / dt + 0.5 * (dp + dc)
}

/// Coercivity lower bound of the free energy:
/// E >= beta ||y||^2 + (delta/2gamma)||mu||^2 + (gamma/2)||grad y||^2
///      + alpha ||sigma||^2 - (c2 + chi^2/(1-2 alpha)) |Omega|.
/// None when chi^2 >= c1 (no admissible alpha).
pub fn coercivity_lower_bound(state: &State, params: &ModelParams) -> Option<f64> {
    let (alpha, beta) = params.alpha_beta()?;
    let offset = params.coercivity_offset()?;
    let y = y_field(state, params);
    let mu_term = if params.delta == 0.0 {
        0.0
    } else {
        0.5 * params.delta / params.gamma * dot(&state.mu, &state.mu)
    };
    Some(
        beta * dot(&y, &y)
            + mu_term
            + 0.5 * params.gamma * grad_norm_sq(&y)
            + alpha * dot(&state.sigma, &state.sigma)
            - offset * state.phi.grid.volume(),
    )
}

/// Build a full record; `prev` carries the previous record and the time gap
/// for the balance-residual column.
pub fn record(
    state: &State,
    params: &ModelParams,
    prev: Option<(&DiagnosticsRecord, f64)>,
) -> Result<DiagnosticsRecord> {
    let vol = state.phi.grid.cell_volume();
    let e = free_energy(state, params)?;
    let s = entropy_functional(&state.phi, params)?;
    let mass_phi = integrate(&state.phi);
    let mass_sigma = integrate(&state.sigma);
    let (d1, d2, d3) = dissipations(state, params)?;
    let mut overshoot_pos = 0.0;
    let mut overshoot_neg = 0.0;
    for &p in &state.phi.data {
        if p > 1.0 {
            overshoot_pos += (p - 1.0) * (p - 1.0);
        }
        if p < 0.0 {
            overshoot_neg += p * p;
        }
    }
    overshoot_pos *= vol;
    overshoot_neg *= vol;
    let flux = flux_j(state, params)?;
    let mu_res = mu_limit_residual(state, params)?;
    let mut rec = DiagnosticsRecord {
        t: state.t,
        energy: e.total,
        entropy: s,
        mass_phi,
        mass_sigma,
        mass_total: mass_phi + mass_sigma,
        d1,
        d2,
        d3,
        phi_min: state.phi.min(),
        phi_max: state.phi.max(),
        overshoot_pos,
        overshoot_neg,
        flux_norm: flux.l2,
        mu_residual: mu_res,
        energy_residual: 0.0,
    };
    if let Some((p, dt)) = prev {
        rec.energy_residual = energy_balance_residual(p, &rec, dt);
    }
    Ok(rec)
}

/// Cumulative entropy-estimate ledger. The left side accumulates
/// S_eps(phi(t)) + int_0^t [ (gamma/2) ||Lap y||^2
///                         + int Psi_plus_eps''(phi)|grad phi|^2
///                         + (delta/gamma) ||grad mu||^2 ],
/// and the right side is the literal term-by-term bound of the entropy
/// estimate; the final constants C1, C2 come from bounding each time
/// integral through the energy inequality.
#[derive(Debug, Clone, Default)]
pub struct EntropyLedger {
    pub acc_lhs: f64,
    pub acc_grad_y: f64,
    pub acc_sigma: f64,
    pub acc_d3: f64,
    pub acc_y: f64,
    pub acc_mu: f64,
    pub t: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct EntropyCheck {
    pub lhs: f64,
    pub rhs_literal: f64,
    pub rhs_const: f64,
    pub c1: f64,
    pub c2: f64,
}

impl EntropyLedger {
    pub fn add_step(&mut self, state: &State, params: &ModelParams, dt: f64) -> Result<()> {
        let y = y_field(state, params);
        let ly = laplacian(&y)?;
        let mut curv = Field::zeros(state.phi.grid);
        for i in 0..curv.data.len() {
            curv.data[i] = params.psi_plus(state.phi.data[i], 2)?;
        }
        let psi_term = grad_form(&curv, &state.phi, &state.phi);
        let (_, _, d3) = dissipations(state, params)?;
        let dg = params.delta / params.gamma;
        self.acc_lhs += dt
            * (0.5 * params.gamma * dot(&ly, &ly)
                + psi_term
                + dg * grad_norm_sq(&state.mu));
        self.acc_grad_y += dt * grad_norm_sq(&y);
        self.acc_sigma += dt * dot(&state.sigma, &state.sigma);
        self.acc_d3 += dt * d3;
        self.acc_y += dt * dot(&y, &y);
        self.acc_mu += dt * dot(&state.mu, &state.mu);
        self.t += dt;
        Ok(())
    }

    /// Evaluate both sides at the current time.
    pub fn check(
        &self,
        state: &State,
        params: &ModelParams,
        s_eps_phi0: f64,
        e0: f64,
    ) -> Result<Option<EntropyCheck>> {
        let (c4, c5) = match params.peta_constants() {
            Some(v) => v,
            None => return Ok(None),
        };
        let (alpha, beta) = match params.alpha_beta() {
            Some(v) => v,
            None => return Ok(None),
        };
        let offset = params.coercivity_offset().unwrap();
        let vol = state.phi.grid.volume();
        let lhs = entropy_functional(&state.phi, params)? + self.acc_lhs;
        let lip = params.constants().lip;
        let dg = params.delta / params.gamma;
        let d0 = params.delta0();
        let rhs_literal = s_eps_phi0
            + lip * self.acc_grad_y
            + params.chi * params.chi / (2.0 * params.gamma) * self.acc_sigma
            + self.acc_d3
            + 4.0 * c4 * c4 * self.acc_y
            + 4.0 * c4 * c4 * d0 / params.gamma * dg * self.acc_mu
            + 2.0 * c5 * c5 * vol * self.t;
        // Each time integral above is bounded through the energy inequality
        // by M = E(0) + offset |Omega|.
        let t = self.t;
        let m = e0 + offset * vol;
        let k = lip * 2.0 * t / params.gamma
            + params.chi * params.chi * t / (2.0 * params.gamma * alpha)
            + 1.0
            + 4.0 * c4 * c4 * t / beta
            + 8.0 * c4 * c4 * d0 * t / params.gamma;
        let c1 = k;
        let c2 = k * offset * vol + 2.0 * c5 * c5 * vol * t;
        let rhs_const = s_eps_phi0 + c1 * (m - offset * vol) + c2;
        Ok(Some(EntropyCheck {
            lhs,
            rhs_literal,
            rhs_const,
            c1,
            c2,
        }))
    }
}
