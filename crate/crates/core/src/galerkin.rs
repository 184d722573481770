//! Spectral Galerkin mode: the system projected onto the span of the n
//! lowest cosine eigenmodes of the discrete Neumann-Laplace operator, with
//! nonlinear terms evaluated pseudo-spectrally on a quadrature grid at least
//! 3/2 finer per axis than the retained modes, then projected back. All
//! inner products are the midpoint-discrete ones, so the energy identity
//! d/dt E + D1 + D2 + D3 = 0 holds exactly at the semi-discrete level and
//! any residual is integrator error.
//!
//! The chemical potential is eliminated mode by mode through its algebraic
//! equation: (1 + delta lam_k) c_k = gamma lam_k a_k + (Psi_minus'(y))_k -
//! chi d_k, solved by the contraction fixed point.

use crate::diagnostics::EnergyBreakdown;
use crate::error::{Error, Result};
use crate::grid::{div_mobility_grad, dot, grad_form, grad_norm_sq, CosineBasis, Field, Grid};
use crate::model::ModelParams;
use crate::ode::{self, OdeOpts};
use std::cell::RefCell;

pub struct GalerkinSystem {
    pub params: ModelParams,
    pub basis: CosineBasis,
    pub grid: Grid,
    pub modes: Vec<usize>,
    mu_warm: RefCell<Vec<f64>>,
}

/// Trajectory sample emitted at every accepted integrator step.
#[derive(Debug, Clone, Copy)]
pub struct GalerkinSample {
    pub t: f64,
    pub energy: f64,
    pub dissipation_integral: f64,
    pub mean_phi: f64,
}

pub struct GalerkinRun {
    pub samples: Vec<GalerkinSample>,
    pub e0: f64,
    /// max over accepted steps of |E(t) + int_0^t D - E(0)|
    pub max_energy_residual: f64,
    pub max_mean_drift: f64,
}

impl GalerkinSystem {
    pub fn new(params: ModelParams, grid: Grid, n_modes: usize) -> Result<Self> {
        let basis = CosineBasis::new(grid);
        if n_modes > grid.cells() {
            return Err(Error::Param(format!(
                "n = {n_modes} exceeds the {} grid modes",
                grid.cells()
            )));
        }
        let modes: Vec<usize> = basis.lowest_modes(n_modes).to_vec();
        // 3/2 dealiasing margin: the grid must resolve the retained modes.
        for &id in &modes {
            let k1 = id % grid.n[0];
            let k2 = id / grid.n[0];
            if 3 * k1 > 2 * grid.n[0] || 3 * k2 > 2 * grid.n[1] {
                return Err(Error::Param(format!(
                    "mode ({k1},{k2}) violates the 3/2 dealiasing margin on a {}x{} grid",
                    grid.n[0], grid.n[1]
                )));
            }
        }
        Ok(GalerkinSystem {
            params,
            basis,
            grid,
            modes,
            mu_warm: RefCell::new(Vec::new()),
        })
    }

    pub fn n(&self) -> usize {
        self.modes.len()
    }

    fn coeffs_to_field(&self, packed: &[f64]) -> Field {
        let mut full = vec![0.0; self.grid.cells()];
        for (slot, &id) in self.modes.iter().enumerate() {
            full[id] = packed[slot];
        }
        self.basis.inverse(&full)
    }

    fn project_packed(&self, f: &Field) -> Vec<f64> {
        let c = self.basis.forward(f);
        self.modes.iter().map(|&id| c[id]).collect()
    }

    /// Solve the discrete mu equation for given (a, d) coefficient slices.
    fn solve_mu_coeffs(&self, a: &[f64], d: &[f64]) -> Result<Vec<f64>> {
        let p = &self.params;
        let dg = p.delta / p.gamma;
        let n = self.n();
        let mut c = {
            let warm = self.mu_warm.borrow();
            if warm.len() == n {
                warm.clone()
            } else {
                vec![0.0; n]
            }
        };
        let phi = self.coeffs_to_field(a);
        let q = p.mu_contraction_factor();
        let cap = if q < 1.0 { 400 } else { 4000 };
        let damping = if q < 1.0 { 1.0 } else { 0.5 };
        for _ in 0..cap {
            let mu = self.coeffs_to_field(&c);
            let psim = phi.zip(&mu, |pv, mv| p.psi_minus(pv - dg * mv, 1));
            let psim_hat = self.project_packed(&psim);
            let mut diff: f64 = 0.0;
            let mut scale: f64 = 1.0;
            for slot in 0..n {
                let lam = self.basis.lambda_disc(self.modes[slot]);
                let next =
                    (p.gamma * lam * a[slot] + psim_hat[slot] - p.chi * d[slot]) / (1.0 + p.delta * lam);
                let mixed = (1.0 - damping) * c[slot] + damping * next;
                diff += (mixed - c[slot]) * (mixed - c[slot]);
                scale = scale.max(mixed.abs());
                c[slot] = mixed;
            }
            if diff.sqrt() <= 1e-13 * scale {
                *self.mu_warm.borrow_mut() = c.clone();
                return Ok(c);
            }
        }
        Err(Error::Convergence(
            "galerkin mu fixed point stalled".into(),
        ))
    }

    /// Discrete initial mu: y = Pi^n phi0 - dg mu(0) in W_n solves the
    /// projected stationary problem; fixed point in coefficient space.
    pub fn initial_coeffs(&self, phi0: &Field, sigma0: &Field) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let p = &self.params;
        let dg = p.delta / p.gamma;
        let a = self.project_packed(phi0);
        let d = self.project_packed(sigma0);
        let n = self.n();
        let mut y = a.clone();
        for _ in 0..4000 {
            let yf = self.coeffs_to_field(&y);
            let psim = yf.map(|v| p.psi_minus(v, 1));
            let psim_hat = self.project_packed(&psim);
            let mut diff: f64 = 0.0;
            let mut scale: f64 = 1.0;
            for slot in 0..n {
                let lam = self.basis.lambda_disc(self.modes[slot]);
                let next = (a[slot] - dg * psim_hat[slot] + dg * p.chi * d[slot])
                    / (1.0 + p.delta * lam);
                diff += (next - y[slot]) * (next - y[slot]);
                scale = scale.max(next.abs());
                y[slot] = next;
            }
            if diff.sqrt() <= 1e-13 * scale {
                let c: Vec<f64> = a
                    .iter()
                    .zip(&y)
                    .map(|(&av, &yv)| (av - yv) / dg)
                    .collect();
                return Ok((a, c, d));
            }
        }
        Err(Error::Convergence(
            "galerkin initial mu fixed point stalled".into(),
        ))
    }

    /// Assemble grid fields and the energy/dissipation functionals for the
    /// packed state [a | d].
    fn eval(&self, v: &[f64]) -> Result<GalerkinEval> {
        let n = self.n();
        let (a, rest) = v.split_at(n);
        let d = &rest[..n];
        let c = self.solve_mu_coeffs(a, d)?;
        let p = &self.params;
        let dg = p.delta / p.gamma;

        let phi = self.coeffs_to_field(a);
        let mu = self.coeffs_to_field(&c);
        let sigma = self.coeffs_to_field(d);
        let y = phi.zip(&mu, |pv, mv| pv - dg * mv);

        // w = mu + Pi^n Psi_plus_eps'(phi)
        let mut psip = Field::zeros(self.grid);
        for i in 0..psip.data.len() {
            psip.data[i] = p.psi_plus(phi.data[i], 1)?;
        }
        let psip_hat = self.project_packed(&psip);
        let w = {
            let pn = self.coeffs_to_field(&psip_hat);
            mu.zip(&pn, |m, q| m + q)
        };

        let mut beps = Field::zeros(self.grid);
        let mut peps = Field::zeros(self.grid);
        for i in 0..beps.data.len() {
            beps.data[i] = p.mobility(phi.data[i], true);
            peps.data[i] = p.proliferation(phi.data[i], true);
        }
        let r = sigma.zip(&y, |s, yv| s + p.chi * (1.0 - yv));
        let r = r.zip(&w, |x, wv| x - wv);

        Ok(GalerkinEval {
            phi,
            mu,
            sigma,
            y,
            w,
            beps,
            peps,
            r,
            c,
        })
    }

    /// Packed RHS: d/dt [a | d | diss_acc].
    fn rhs(&self, v: &[f64], dv: &mut [f64]) -> Result<()> {
        let n = self.n();
        let ev = self.eval(v)?;
        let p = &self.params;
        let dg = p.delta / p.gamma;

        let preact = ev.peps.zip(&ev.r, |pe, rv| pe * rv);
        let flux = div_mobility_grad(&ev.beps, &ev.w)?;
        let f1 = flux.zip(&preact, |a, b| a + b);
        let a_dot = self.project_packed(&f1);

        let preact_hat = self.project_packed(&preact);
        for slot in 0..n {
            let lam = self.basis.lambda_disc(self.modes[slot]);
            let y_k = v[slot] - dg * ev.c[slot];
            dv[slot] = a_dot[slot];
            dv[n + slot] = -lam * (v[n + slot] - p.chi * y_k) - preact_hat[slot];
        }

        let d1 = grad_form(&ev.beps, &ev.w, &ev.w);
        let smy = ev.sigma.zip(&ev.y, |s, yv| s - p.chi * yv);
        let d2 = grad_norm_sq(&smy);
        let mut d3 = 0.0;
        for i in 0..ev.r.data.len() {
            d3 += ev.peps.data[i] * ev.r.data[i] * ev.r.data[i];
        }
        d3 *= self.grid.cell_volume();
        dv[2 * n] = d1 + d2 + d3;
        Ok(())
    }

    /// Free energy of the packed state (with the regularised Psi_plus).
    pub fn energy(&self, v: &[f64]) -> Result<EnergyBreakdown> {
        let ev = self.eval(v)?;
        let p = &self.params;
        let vol = self.grid.cell_volume();
        let mut psi_plus = 0.0;
        let mut psi_minus = 0.0;
        let mut chemo = 0.0;
        for i in 0..ev.phi.data.len() {
            psi_plus += p.psi_plus(ev.phi.data[i], 0)?;
            psi_minus += p.psi_minus(ev.y.data[i], 0);
            chemo += p.chi * ev.sigma.data[i] * (1.0 - ev.y.data[i]);
        }
        psi_plus *= vol;
        psi_minus *= vol;
        chemo *= vol;
        let grad = 0.5 * p.gamma * grad_norm_sq(&ev.y);
        let mu_sq = 0.5 * p.delta / p.gamma * dot(&ev.mu, &ev.mu);
        let sigma_sq = 0.5 * dot(&ev.sigma, &ev.sigma);
        Ok(EnergyBreakdown {
            psi_plus,
            psi_minus,
            grad,
            mu_sq,
            sigma_sq,
            chemo,
            total: psi_plus + psi_minus + grad + mu_sq + sigma_sq + chemo,
        })
    }

    /// Integrate to t_end monitoring the energy identity.
    pub fn integrate(
        &self,
        phi0: &Field,
        sigma0: &Field,
        t_end: f64,
        tol: f64,
    ) -> Result<GalerkinRun> {
        let n = self.n();
        let (a0, _c0, d0) = self.initial_coeffs(phi0, sigma0)?;
        let mut y0 = vec![0.0; 2 * n + 1];
        y0[..n].copy_from_slice(&a0);
        y0[n..2 * n].copy_from_slice(&d0);
        let e0 = self.energy(&y0)?.total;

        let opts = OdeOpts {
            rtol: tol,
            atol: tol * 1e-2,
            h0: 1e-8,
            ..OdeOpts::default()
        };
        let mut samples = Vec::new();
        let mut max_resid: f64 = 0.0;
        let mut max_drift: f64 = 0.0;
        let mean0 = a0[0];
        let obs_err: RefCell<Option<Error>> = RefCell::new(None);
        let sys = self;
        let result = ode::integrate(
            |_t, v, dv| {
                if let Err(e) = sys.rhs(v, dv) {
                    let mut slot = obs_err.borrow_mut();
                    if slot.is_none() {
                        *slot = Some(e);
                    }
                    dv.iter_mut().for_each(|x| *x = f64::NAN);
                }
            },
            0.0,
            t_end,
            &y0,
            &opts,
            |t, v| {
                if obs_err.borrow().is_some() {
                    return;
                }
                match sys.energy(v) {
                    Ok(e) => {
                        let resid = e.total + v[2 * n] - e0;
                        max_resid = max_resid.max(resid.abs());
                        let drift = (v[0] - mean0).abs();
                        max_drift = max_drift.max(drift);
                        samples.push(GalerkinSample {
                            t,
                            energy: e.total,
                            dissipation_integral: v[2 * n],
                            mean_phi: v[0],
                        });
                    }
                    Err(e) => *obs_err.borrow_mut() = Some(e),
                }
            },
        );
        if let Some(e) = obs_err.into_inner() {
            return Err(e);
        }
        result?;
        Ok(GalerkinRun {
            samples,
            e0,
            max_energy_residual: max_resid,
            max_mean_drift: max_drift,
        })
    }
}

struct GalerkinEval {
    phi: Field,
    mu: Field,
    sigma: Field,
    y: Field,
    w: Field,
    beps: Field,
    peps: Field,
    r: Field,
    c: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ModelParams, ParamSet};
    use std::f64::consts::PI;

    #[test]
    fn constants_only_mode_is_stationary_without_reactions() {
        let params = ModelParams::new(ParamSet {
            p0: 0.0,
            ..ParamSet::default()
        });
        let grid = Grid::new_2d(16, 16, 1.0, 1.0);
        let sys = GalerkinSystem::new(params, grid, 1).unwrap();
        let phi0 = Field::constant(grid, 0.45);
        let sigma0 = Field::constant(grid, 0.5);
        let run = sys.integrate(&phi0, &sigma0, 1e-3, 1e-10).unwrap();
        assert!(run.max_mean_drift < 1e-13);
        for s in &run.samples {
            assert!((s.energy - run.e0).abs() < 1e-12);
        }
    }

    #[test]
    fn energy_identity_small_system() {
        let params = ModelParams::default();
        let grid = Grid::new_2d(16, 16, 1.0, 1.0);
        let sys = GalerkinSystem::new(params, grid, 8).unwrap();
        let phi0 = Field::from_fn(grid, |x, y| {
            (0.45 + 0.1 * (2.0 * PI * x).cos() * (2.0 * PI * y).cos()).clamp(0.0, 0.95)
        });
        let sigma0 = Field::constant(grid, 0.5);
        let run = sys.integrate(&phi0, &sigma0, 2e-3, 1e-10).unwrap();
        assert!(
            run.max_energy_residual <= 1e-6 * (1.0 + run.e0.abs()),
            "residual {}",
            run.max_energy_residual
        );
        assert!(run.samples.len() > 2);
    }

    #[test]
    fn mean_conserved_without_reactions() {
        let params = ModelParams::new(ParamSet {
            p0: 0.0,
            ..ParamSet::default()
        });
        let grid = Grid::new_2d(16, 16, 1.0, 1.0);
        let sys = GalerkinSystem::new(params, grid, 6).unwrap();
        let phi0 = Field::from_fn(grid, |x, y| {
            (0.5 + 0.1 * (2.0 * PI * x).cos() + 0.05 * (2.0 * PI * y).cos()).clamp(0.0, 0.95)
        });
        let sigma0 = Field::constant(grid, 0.3);
        let run = sys.integrate(&phi0, &sigma0, 1e-3, 1e-10).unwrap();
        assert!(run.max_mean_drift < 1e-12, "drift {}", run.max_mean_drift);
    }

    #[test]
    fn dealiasing_margin_enforced() {
        let params = ModelParams::default();
        let grid = Grid::new_2d(8, 8, 1.0, 1.0);
        // 64 modes on an 8x8 grid would retain k up to 7 > (2/3) * 8
        assert!(GalerkinSystem::new(params, grid, 64).is_err());
    }
}
