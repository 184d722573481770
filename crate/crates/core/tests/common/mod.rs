#![allow(dead_code)]

//! Shared independent oracles for the integration tests: dense stencil
//! assembly, dense LU, dense Newton for the chemical-potential equation,
//! and adaptive Simpson quadrature. These deliberately re-derive the
//! discretisation from the face picture rather than calling the library
//! operators.

use relaxed_ch::grid::{Field, Grid};
use relaxed_ch::model::ModelParams;

/// Dense matrix of div(m grad .) assembled face by face with reflected
/// boundaries (zero boundary flux).
pub fn assemble_div_m_grad(grid: Grid, mob: &[f64]) -> Vec<Vec<f64>> {
    let n = grid.cells();
    let (nx, ny) = (grid.n[0], grid.n[1]);
    let mut a = vec![vec![0.0f64; n]; n];
    let hx2 = grid.h(0) * grid.h(0);
    for j in 0..ny {
        for i in 0..nx - 1 {
            let p = j * nx + i;
            let q = j * nx + i + 1;
            let m = 0.5 * (mob[p] + mob[q]) / hx2;
            a[p][p] -= m;
            a[p][q] += m;
            a[q][q] -= m;
            a[q][p] += m;
        }
    }
    if grid.dim == 2 {
        let hy2 = grid.h(1) * grid.h(1);
        for j in 0..ny - 1 {
            for i in 0..nx {
                let p = j * nx + i;
                let q = (j + 1) * nx + i;
                let m = 0.5 * (mob[p] + mob[q]) / hy2;
                a[p][p] -= m;
                a[p][q] += m;
                a[q][q] -= m;
                a[q][p] += m;
            }
        }
    }
    a
}

pub fn matvec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(r, v)| r * v).sum())
        .collect()
}

/// LU solve with partial pivoting.
pub fn lu_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if m[r][col].abs() > m[piv][col].abs() {
                piv = r;
            }
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        let d = m[col][col];
        assert!(d.abs() > 1e-300, "singular oracle matrix");
        for r in col + 1..n {
            let f = m[r][col] / d;
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut s = rhs[r];
        for c in r + 1..n {
            s -= m[r][c] * x[c];
        }
        x[r] = s / m[r][r];
    }
    x
}

/// Dense Newton solve of the chemical-potential equation
/// (I - delta L) mu = -gamma L phi + Psi_minus'(phi - dg mu) - chi sigma.
pub fn dense_solve_mu(params: &ModelParams, phi: &Field, sigma: &Field) -> Vec<f64> {
    let grid = phi.grid;
    let n = grid.cells();
    let ones = vec![1.0; n];
    let lap = assemble_div_m_grad(grid, &ones);
    let dg = params.delta / params.gamma;
    let lphi = matvec(&lap, &phi.data);
    let mut mu = vec![0.0f64; n];
    for _ in 0..100 {
        let lmu = matvec(&lap, &mu);
        let mut res = vec![0.0; n];
        for i in 0..n {
            let y = phi.data[i] - dg * mu[i];
            res[i] = mu[i] - params.delta * lmu[i]
                - (-params.gamma * lphi[i] + params.psi_minus(y, 1)
                    - params.chi * sigma.data[i]);
        }
        let mut jac = vec![vec![0.0; n]; n];
        for i in 0..n {
            for k in 0..n {
                jac[i][k] = -params.delta * lap[i][k];
            }
            let y = phi.data[i] - dg * mu[i];
            jac[i][i] += 1.0 + dg * params.psi_minus(y, 2);
        }
        let dx = lu_solve(&jac, &res);
        let mut maxd: f64 = 0.0;
        for i in 0..n {
            mu[i] -= dx[i];
            maxd = maxd.max(dx[i].abs());
        }
        if maxd < 1e-13 {
            break;
        }
    }
    mu
}

/// Adaptive Simpson quadrature.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson_rule(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let left = simpson_rule(f, a, m);
        let right = simpson_rule(f, m, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            rec(f, a, m, left, tol / 2.0, depth - 1) + rec(f, m, b, right, tol / 2.0, depth - 1)
        }
    }
    let whole = simpson_rule(f, a, b);
    rec(f, a, b, whole, tol, 40)
}
