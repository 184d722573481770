//! Stationary solves: the Helmholtz operator (-delta Lap + I)^-1, the
//! relaxed chemical-potential equation, the initial-datum problem for mu(0),
//! and the singular-perturbation problem -delta Lap u + u = f + delta g +
//! delta h(u).

use crate::error::{Error, Result};
use crate::grid::{
    dot, grad_norm_sq, laplacian, mean, CosineBasis, Field, NormKind,
};
use crate::model::ModelParams;

/// Conjugate gradients on a matrix-free SPD operator that maps constants to
/// constants. The constant mode is handled exactly: the solution mean is
/// mean(b) and CG runs on the zero-mean complement, which keeps conservative
/// schemes conservative to roundoff.
pub fn cg_solve(
    apply: impl Fn(&Field) -> Field,
    b: &Field,
    rtol: f64,
    max_iter: usize,
) -> Result<Field> {
    let mb = mean(b);
    let mut r = b.map(|v| v - mb);
    let mut x = Field::zeros(b.grid);
    let bnorm = dot(&r, &r).sqrt();
    if bnorm == 0.0 {
        return Ok(b.map(|_| mb));
    }
    let tol = rtol * bnorm;
    let mut p = r.clone();
    let mut rs = dot(&r, &r);
    for _ in 0..max_iter {
        let ap = apply(&p);
        let alpha = rs / dot(&p, &ap);
        x.axpy(alpha, &p);
        r.axpy(-alpha, &ap);
        let rs_new = dot(&r, &r);
        if rs_new.sqrt() <= tol {
            let mx = mean(&x);
            return Ok(x.map(|v| v - mx + mb));
        }
        let beta = rs_new / rs;
        rs = rs_new;
        let mut pnew = r.clone();
        pnew.axpy(beta, &p);
        p = pnew;
    }
    Err(Error::Convergence(format!(
        "cg did not reach rtol {rtol} in {max_iter} iterations"
    )))
}

/// Solve -delta Lap u + u = rhs with Neumann conditions, exactly in the
/// cosine basis (diagonal symbol 1 + delta lambda_k).
pub fn helmholtz_solve_with(basis: &CosineBasis, delta: f64, rhs: &Field) -> Result<Field> {
    if !rhs.is_finite() {
        return Err(Error::Numerical("non-finite helmholtz rhs".into()));
    }
    if delta == 0.0 {
        return Ok(rhs.clone());
    }
    let mut c = basis.forward(rhs);
    for (id, v) in c.iter_mut().enumerate() {
        *v /= 1.0 + delta * basis.lambda_disc(id);
    }
    Ok(basis.inverse(&c))
}

pub fn helmholtz_solve(delta: f64, rhs: &Field) -> Result<Field> {
    let basis = CosineBasis::new(rhs.grid);
    helmholtz_solve_with(&basis, delta, rhs)
}

/// Conjugate-direction path on the SPD stencil; must agree with the spectral
/// path to 1e-10.
pub fn helmholtz_solve_cg(delta: f64, rhs: &Field) -> Result<Field> {
    if delta == 0.0 {
        return Ok(rhs.clone());
    }
    cg_solve(
        |u| {
            let lu = laplacian(u).expect("finite");
            u.zip(&lu, |uv, lv| uv - delta * lv)
        },
        rhs,
        1e-14,
        20_000,
    )
}

#[derive(Debug, Clone)]
pub struct MuSolution {
    pub mu: Field,
    /// L2 residual of the chemical-potential equation.
    pub residual: f64,
    pub iterations: usize,
}

fn fixed_point(
    basis: &CosineBasis,
    delta: f64,
    rhs_of: impl Fn(&Field) -> Field,
    start: Field,
    contraction: f64,
    what: &str,
) -> Result<(Field, usize)> {
    let mut u = start;
    // iterations to reach 1e-12 at rate q, with headroom
    let (damping, cap) = if contraction < 1.0 {
        let need = if contraction > 1e-3 {
            (2.0 * 27.7 / -contraction.ln()).ceil() as usize
        } else {
            0
        };
        (1.0, need.clamp(400, 40_000))
    } else {
        (0.5, 4000)
    };
    for it in 0..cap {
        let next = helmholtz_solve_with(basis, delta, &rhs_of(&u))?;
        let mixed = if damping == 1.0 {
            next
        } else {
            u.zip(&next, |a, b| (1.0 - damping) * a + damping * b)
        };
        let diff = {
            let mut d = mixed.clone();
            d.axpy(-1.0, &u);
            dot(&d, &d).sqrt()
        };
        let scale = dot(&mixed, &mixed).sqrt().max(1.0);
        u = mixed;
        if !u.is_finite() {
            if contraction >= 1.0 {
                return Err(Error::Contraction(format!(
                    "{what}: contraction factor {contraction:.3} >= 1 and the damped iteration diverged"
                )));
            }
            return Err(Error::Blowup(format!("{what} iterate became non-finite")));
        }
        if diff.is_finite() && scale.is_finite() && diff <= 1e-11 * scale {
            return Ok((u, it + 1));
        }
    }
    if contraction >= 1.0 {
        Err(Error::Contraction(format!(
            "{what}: contraction factor {contraction:.3} >= 1 and damped iteration stalled"
        )))
    } else {
        Err(Error::Convergence(format!("{what}: fixed point stalled")))
    }
}

fn mu_equation_residual(
    params: &ModelParams,
    phi: &Field,
    sigma: &Field,
    mu: &Field,
) -> Result<f64> {
    let dg = params.delta / params.gamma;
    let lmu = laplacian(mu)?;
    let lphi = laplacian(phi)?;
    let mut r = Field::zeros(phi.grid);
    for i in 0..r.data.len() {
        let y = phi.data[i] - dg * mu.data[i];
        r.data[i] = -params.delta * lmu.data[i] + mu.data[i]
            - (-params.gamma * lphi.data[i] + params.psi_minus(y, 1)
                - params.chi * sigma.data[i]);
    }
    Ok(dot(&r, &r).sqrt())
}

/// Solve the relaxed chemical-potential equation
/// -delta Lap mu + mu = -gamma Lap phi + Psi_minus'(phi - (delta/gamma) mu) - chi sigma
/// by fixed point through the Helmholtz inverse. For delta = 0 the equation
/// is explicit.
pub fn solve_mu_with(
    basis: &CosineBasis,
    phi: &Field,
    sigma: &Field,
    params: &ModelParams,
) -> Result<MuSolution> {
    let dg = params.delta / params.gamma;
    let lphi = laplacian(phi)?;
    if params.delta == 0.0 {
        let mut mu = Field::zeros(phi.grid);
        for i in 0..mu.data.len() {
            mu.data[i] = -params.gamma * lphi.data[i] + params.psi_minus(phi.data[i], 1)
                - params.chi * sigma.data[i];
        }
        return Ok(MuSolution {
            mu,
            residual: 0.0,
            iterations: 0,
        });
    }
    let contraction = params.mu_contraction_factor();
    let rhs_of = |mu: &Field| {
        let mut r = Field::zeros(phi.grid);
        for i in 0..r.data.len() {
            let y = phi.data[i] - dg * mu.data[i];
            r.data[i] = -params.gamma * lphi.data[i] + params.psi_minus(y, 1)
                - params.chi * sigma.data[i];
        }
        r
    };
    let (mu, iterations) = fixed_point(
        basis,
        params.delta,
        rhs_of,
        Field::zeros(phi.grid),
        contraction,
        "solve_mu",
    )?;
    let residual = mu_equation_residual(params, phi, sigma, &mu)?;
    let scale = dot(phi, phi).sqrt() + dot(sigma, sigma).sqrt() + 1.0;
    if residual > 1e-9 * scale {
        return Err(Error::Convergence(format!(
            "solve_mu residual {residual:.3e} exceeds 1e-9 * scale {scale:.3e}"
        )));
    }
    Ok(MuSolution {
        mu,
        residual,
        iterations,
    })
}

pub fn solve_mu(phi: &Field, sigma: &Field, params: &ModelParams) -> Result<MuSolution> {
    let basis = CosineBasis::new(phi.grid);
    solve_mu_with(&basis, phi, sigma, params)
}

/// Initial chemical potential: y = phi0 - (delta/gamma) mu(0) solves
/// -delta Lap y + y = phi0 - (delta/gamma) Psi_minus'(y) + (delta/gamma) chi sigma0
/// and mu(0) = (gamma/delta)(phi0 - y).
pub fn solve_initial_mu_with(
    basis: &CosineBasis,
    phi0: &Field,
    sigma0: &Field,
    params: &ModelParams,
) -> Result<MuSolution> {
    if params.delta <= 0.0 {
        return Err(Error::Precondition(
            "solve_initial_mu requires delta > 0".into(),
        ));
    }
    let dg = params.delta / params.gamma;
    let contraction = params.mu_contraction_factor();
    let rhs_of = |y: &Field| {
        let mut r = Field::zeros(phi0.grid);
        for i in 0..r.data.len() {
            r.data[i] = phi0.data[i] - dg * params.psi_minus(y.data[i], 1)
                + dg * params.chi * sigma0.data[i];
        }
        r
    };
    let (y, iterations) = fixed_point(
        basis,
        params.delta,
        rhs_of,
        phi0.clone(),
        contraction,
        "solve_initial_mu",
    )?;
    let mut mu = phi0.clone();
    mu.axpy(-1.0, &y);
    mu.scale(1.0 / dg);
    let residual = mu_equation_residual(params, phi0, sigma0, &mu)?;
    let scale = dot(phi0, phi0).sqrt() + dot(sigma0, sigma0).sqrt() + 1.0;
    if residual > 1e-9 * scale {
        return Err(Error::Convergence(format!(
            "solve_initial_mu residual {residual:.3e} exceeds tolerance"
        )));
    }
    Ok(MuSolution {
        mu,
        residual,
        iterations,
    })
}

pub fn solve_initial_mu(phi0: &Field, sigma0: &Field, params: &ModelParams) -> Result<MuSolution> {
    let basis = CosineBasis::new(phi0.grid);
    solve_initial_mu_with(&basis, phi0, sigma0, params)
}

#[derive(Debug, Clone)]
pub struct LemmaA1Solution {
    pub u: Field,
    pub residual: f64,
    pub c_delta: f64,
    /// ||u||_V^2 and the a-priori bound of the V-estimate.
    pub v_norm_sq: f64,
    pub est3_rhs: f64,
    pub est3_holds: bool,
    pub est1_holds: bool,
}

/// Singular-perturbation solve -delta Lap u + u = f + delta g + delta h(u),
/// with |h(s)| <= k1|s| + k2 and |h'| <= k3. Requires
/// c_delta = min{1 - delta(1+2k1+k2), 1 - 2 k3 delta} > 0, which also makes
/// the fixed point a contraction. Reports and asserts the a-priori V-bound.
#[allow(clippy::too_many_arguments)]
pub fn lemma_a1_solve(
    f: &Field,
    g: &Field,
    h: &dyn Fn(f64) -> f64,
    k1: f64,
    k2: f64,
    k3: f64,
    delta: f64,
    basis: &CosineBasis,
) -> Result<LemmaA1Solution> {
    let c_delta = (1.0 - delta * (1.0 + 2.0 * k1 + k2)).min(1.0 - 2.0 * k3 * delta);
    if c_delta <= 0.0 {
        return Err(Error::Precondition(format!(
            "lemma A.1 requires c_delta > 0, got {c_delta}"
        )));
    }
    let rhs_of = |u: &Field| {
        let mut r = f.clone();
        for i in 0..r.data.len() {
            r.data[i] += delta * g.data[i] + delta * h(u.data[i]);
        }
        r
    };
    let contraction = delta * k3;
    let (u, _iters) = fixed_point(basis, delta, rhs_of, f.clone(), contraction, "lemma_a1")?;

    let lu = laplacian(&u)?;
    let mut resid = Field::zeros(f.grid);
    for i in 0..resid.data.len() {
        resid.data[i] =
            -delta * lu.data[i] + u.data[i] - f.data[i] - delta * g.data[i] - delta * h(u.data[i]);
    }
    let residual = dot(&resid, &resid).sqrt();
    let scale = crate::grid::norm(f, NormKind::L2) + 1.0;
    if residual > 1e-10 * scale {
        return Err(Error::Convergence(format!(
            "lemma_a1 residual {residual:.3e} above tolerance"
        )));
    }

    let vol = f.grid.volume();
    let u_h_sq = dot(&u, &u);
    let u_grad_sq = grad_norm_sq(&u);
    let v_norm_sq = u_h_sq + u_grad_sq;
    let f_v_sq = dot(f, f) + grad_norm_sq(f);
    let g_h_sq = dot(g, g);
    let est3_rhs = f_v_sq / c_delta + delta / c_delta * g_h_sq + delta / c_delta * k2 * vol / 2.0;
    let est3_holds = v_norm_sq <= est3_rhs + 1e-9 * (1.0 + est3_rhs);
    let est1_lhs = delta * u_grad_sq + (1.0 - delta * (1.0 + 2.0 * k1 + k2)) * u_h_sq;
    let est1_rhs = dot(f, f) + delta * g_h_sq + delta * k2 * vol;
    let est1_holds = est1_lhs <= est1_rhs + 1e-9 * (1.0 + est1_rhs);

    Ok(LemmaA1Solution {
        u,
        residual,
        c_delta,
        v_norm_sq,
        est3_rhs,
        est3_holds,
        est1_holds,
    })
}
