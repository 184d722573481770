//! Structured cell-centered tensor grid on a box with homogeneous Neumann
//! boundary conditions, conservative finite-difference operators, and the
//! cosine eigenbasis of the discrete Neumann-Laplace operator.
//!
//! Layout: row-major with x fastest, `id = j * nx + i`. Ghost cells are
//! reflections, which makes all stencils exactly conservative and keeps the
//! sampled cosines exact eigenvectors of the discrete Laplacian.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub dim: usize,
    pub n: [usize; 2],
    pub len: [f64; 2],
}

impl Grid {
    pub fn new_1d(nx: usize, lx: f64) -> Grid {
        assert!(nx >= 4 && lx > 0.0);
        Grid {
            dim: 1,
            n: [nx, 1],
            len: [lx, 1.0],
        }
    }

    pub fn new_2d(nx: usize, ny: usize, lx: f64, ly: f64) -> Grid {
        assert!(nx >= 4 && ny >= 4 && lx > 0.0 && ly > 0.0);
        Grid {
            dim: 2,
            n: [nx, ny],
            len: [lx, ly],
        }
    }

    pub fn cells(&self) -> usize {
        self.n[0] * self.n[1]
    }

    pub fn h(&self, axis: usize) -> f64 {
        self.len[axis] / self.n[axis] as f64
    }

    /// Cell volume h_x (* h_y in 2-D).
    pub fn cell_volume(&self) -> f64 {
        if self.dim == 1 {
            self.h(0)
        } else {
            self.h(0) * self.h(1)
        }
    }

    pub fn volume(&self) -> f64 {
        if self.dim == 1 {
            self.len[0]
        } else {
            self.len[0] * self.len[1]
        }
    }

    /// Center coordinate of cell index `i` along `axis`.
    pub fn center(&self, i: usize, axis: usize) -> f64 {
        (i as f64 + 0.5) * self.h(axis)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Grid,
    pub data: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: Grid) -> Field {
        Field {
            grid,
            data: vec![0.0; grid.cells()],
        }
    }

    pub fn constant(grid: Grid, c: f64) -> Field {
        Field {
            grid,
            data: vec![c; grid.cells()],
        }
    }

    /// Sample `f(x, y)` at cell centers (y = 0.5 * h_y in 1-D).
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Field {
        let mut data = Vec::with_capacity(grid.cells());
        for j in 0..grid.n[1] {
            for i in 0..grid.n[0] {
                data.push(f(grid.center(i, 0), grid.center(j, 1)));
            }
        }
        Field { grid, data }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Field {
        assert_eq!(self.grid, other.grid);
        Field {
            grid: self.grid,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn axpy(&mut self, a: f64, x: &Field) {
        for (v, &u) in self.data.iter_mut().zip(&x.data) {
            *v += a * u;
        }
    }

    pub fn scale(&mut self, a: f64) {
        for v in &mut self.data {
            *v *= a;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn min(&self) -> f64 {
        self.data.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

fn require_finite(f: &Field, what: &str) -> Result<()> {
    if !f.is_finite() {
        return Err(Error::Numerical(format!("non-finite values in {what}")));
    }
    Ok(())
}

/// Five-point (three-point in 1-D) Laplacian with reflected ghost cells.
/// The cell sum of the output vanishes exactly (discrete divergence theorem).
pub fn laplacian(f: &Field) -> Result<Field> {
    require_finite(f, "laplacian input")?;
    let ones = Field::constant(f.grid, 1.0);
    div_mobility_grad(&ones, f)
}

/// Flux-form div(m grad v): face mobility is the arithmetic mean of the
/// adjacent cell values, the face flux is the centered difference of v, and
/// the output is the discrete divergence of the face fluxes. Boundary faces
/// carry zero flux.
pub fn div_mobility_grad(mob_cell: &Field, v: &Field) -> Result<Field> {
    assert_eq!(mob_cell.grid, v.grid);
    require_finite(v, "div_mobility_grad field")?;
    require_finite(mob_cell, "div_mobility_grad mobility")?;
    if mob_cell.data.iter().any(|&m| m < 0.0) {
        return Err(Error::Domain("negative mobility".into()));
    }
    let g = v.grid;
    let (nx, ny) = (g.n[0], g.n[1]);
    let mut out = vec![0.0; g.cells()];

    let hx = g.h(0);
    let inv_hx2 = 1.0 / (hx * hx);
    for j in 0..ny {
        let row = j * nx;
        for i in 0..nx.saturating_sub(1) {
            let a = row + i;
            let b = row + i + 1;
            let m = 0.5 * (mob_cell.data[a] + mob_cell.data[b]);
            let flux = m * (v.data[b] - v.data[a]) * inv_hx2;
            out[a] += flux;
            out[b] -= flux;
        }
    }
    if g.dim == 2 {
        let hy = g.h(1);
        let inv_hy2 = 1.0 / (hy * hy);
        for j in 0..ny - 1 {
            for i in 0..nx {
                let a = j * nx + i;
                let b = (j + 1) * nx + i;
                let m = 0.5 * (mob_cell.data[a] + mob_cell.data[b]);
                let flux = m * (v.data[b] - v.data[a]) * inv_hy2;
                out[a] += flux;
                out[b] -= flux;
            }
        }
    }
    Ok(Field { grid: g, data: out })
}

/// Midpoint quadrature of f over the box.
pub fn integrate(f: &Field) -> f64 {
    let mut s = 0.0;
    for &v in &f.data {
        s += v;
    }
    s * f.grid.cell_volume()
}

pub fn mean(f: &Field) -> f64 {
    integrate(f) / f.grid.volume()
}

/// L2 inner product (u, v) = h^d sum u v.
pub fn dot(u: &Field, v: &Field) -> f64 {
    assert_eq!(u.grid, v.grid);
    let mut s = 0.0;
    for (&a, &b) in u.data.iter().zip(&v.data) {
        s += a * b;
    }
    s * u.grid.cell_volume()
}

/// Squared face-gradient form <grad u, grad v> weighted by face mobilities
/// (arithmetic means of `mob`); with `mob = 1` this is the H1 seminorm
/// bilinear form, and it satisfies (div_mobility_grad(m, u), v) = -form(m,u,v).
pub fn grad_form(mob_cell: &Field, u: &Field, v: &Field) -> f64 {
    assert_eq!(u.grid, v.grid);
    let g = u.grid;
    let (nx, ny) = (g.n[0], g.n[1]);
    let vol = g.cell_volume();
    let mut s = 0.0;
    let inv_hx = 1.0 / g.h(0);
    for j in 0..ny {
        let row = j * nx;
        for i in 0..nx.saturating_sub(1) {
            let a = row + i;
            let b = row + i + 1;
            let m = 0.5 * (mob_cell.data[a] + mob_cell.data[b]);
            s += m * (u.data[b] - u.data[a]) * (v.data[b] - v.data[a]) * inv_hx * inv_hx * vol;
        }
    }
    if g.dim == 2 {
        let inv_hy = 1.0 / g.h(1);
        for j in 0..ny - 1 {
            for i in 0..nx {
                let a = j * nx + i;
                let b = (j + 1) * nx + i;
                let m = 0.5 * (mob_cell.data[a] + mob_cell.data[b]);
                s += m * (u.data[b] - u.data[a]) * (v.data[b] - v.data[a]) * inv_hy * inv_hy * vol;
            }
        }
    }
    s
}

/// ||grad f||^2 by face quadrature.
pub fn grad_norm_sq(f: &Field) -> f64 {
    let ones = Field::constant(f.grid, 1.0);
    grad_form(&ones, f, f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    L2,
    H1,
    Mean,
}

pub fn norm(f: &Field, kind: NormKind) -> f64 {
    match kind {
        NormKind::L2 => dot(f, f).sqrt(),
        NormKind::H1 => (dot(f, f) + grad_norm_sq(f)).sqrt(),
        NormKind::Mean => mean(f),
    }
}

// ---------------------------------------------------------------------------
// Cosine eigenbasis of the discrete Neumann-Laplace operator.
// ---------------------------------------------------------------------------

/// DCT machinery for a grid. Coefficients are stored in the same row-major
/// layout as fields, with the convention f = sum_k c_k w_k where
/// w_k(x, y) = cos(k1 pi x / Lx) cos(k2 pi y / Ly); in particular the
/// coefficient of the constant mode equals the field mean.
#[derive(Debug, Clone)]
pub struct CosineBasis {
    pub grid: Grid,
    cos_x: Vec<f64>, // [k * nx + i] = cos(k pi (i + 1/2) / nx)
    cos_y: Vec<f64>,
    order: Vec<usize>, // flat mode ids sorted by continuous lambda, lex ties
}

impl CosineBasis {
    pub fn new(grid: Grid) -> CosineBasis {
        let table = |n: usize| -> Vec<f64> {
            let mut t = vec![0.0; n * n];
            for k in 0..n {
                for i in 0..n {
                    t[k * n + i] = (k as f64 * std::f64::consts::PI * (i as f64 + 0.5) / n as f64).cos();
                }
            }
            t
        };
        let cos_x = table(grid.n[0]);
        let cos_y = table(grid.n[1]);

        // Continuous symbol lambda_k = 1 + sum (k_a pi / L_a)^2, lexicographic ties.
        let mut ids: Vec<usize> = (0..grid.cells()).collect();
        let lam = |id: usize| -> (f64, usize, usize) {
            let k1 = id % grid.n[0];
            let k2 = id / grid.n[0];
            let l1 = k1 as f64 * std::f64::consts::PI / grid.len[0];
            let l2 = k2 as f64 * std::f64::consts::PI / grid.len[1];
            (1.0 + l1 * l1 + l2 * l2, k1, k2)
        };
        ids.sort_by(|&a, &b| {
            let (la, ka1, ka2) = lam(a);
            let (lb, kb1, kb2) = lam(b);
            la.partial_cmp(&lb)
                .unwrap()
                .then(ka1.cmp(&kb1))
                .then(ka2.cmp(&kb2))
        });
        CosineBasis {
            grid,
            cos_x,
            cos_y,
            order: ids,
        }
    }

    /// Eigenvalue of -Laplacian_h for flat mode id (discrete symbol).
    pub fn lambda_disc(&self, id: usize) -> f64 {
        let k1 = id % self.grid.n[0];
        let k2 = id / self.grid.n[0];
        let mut l = 0.0;
        let hx = self.grid.h(0);
        let s1 = (k1 as f64 * std::f64::consts::PI / (2.0 * self.grid.n[0] as f64)).sin();
        l += 4.0 / (hx * hx) * s1 * s1;
        if self.grid.dim == 2 {
            let hy = self.grid.h(1);
            let s2 = (k2 as f64 * std::f64::consts::PI / (2.0 * self.grid.n[1] as f64)).sin();
            l += 4.0 / (hy * hy) * s2 * s2;
        }
        l
    }

    /// Flat mode ids of the n lowest continuous eigenvalues.
    pub fn lowest_modes(&self, n: usize) -> &[usize] {
        &self.order[..n.min(self.order.len())]
    }

    fn dct_axis_x(&self, src: &[f64], dst: &mut [f64], inverse: bool) {
        let nx = self.grid.n[0];
        let ny = self.grid.n[1];
        for j in 0..ny {
            let row = j * nx;
            if inverse {
                // f_i = sum_k c_k cos(k pi (i+1/2)/n)
                for i in 0..nx {
                    let mut s = 0.0;
                    for k in 0..nx {
                        s += src[row + k] * self.cos_x[k * nx + i];
                    }
                    dst[row + i] = s;
                }
            } else {
                // c_k = (2 - delta_k0)/n sum_i f_i cos(...)
                for k in 0..nx {
                    let mut s = 0.0;
                    for i in 0..nx {
                        s += src[row + i] * self.cos_x[k * nx + i];
                    }
                    let w = if k == 0 { 1.0 } else { 2.0 };
                    dst[row + k] = s * w / nx as f64;
                }
            }
        }
    }

    fn dct_axis_y(&self, src: &[f64], dst: &mut [f64], inverse: bool) {
        let nx = self.grid.n[0];
        let ny = self.grid.n[1];
        for i in 0..nx {
            if inverse {
                for j in 0..ny {
                    let mut s = 0.0;
                    for k in 0..ny {
                        s += src[k * nx + i] * self.cos_y[k * ny + j];
                    }
                    dst[j * nx + i] = s;
                }
            } else {
                for k in 0..ny {
                    let mut s = 0.0;
                    for j in 0..ny {
                        s += src[j * nx + i] * self.cos_y[k * ny + j];
                    }
                    let w = if k == 0 { 1.0 } else { 2.0 };
                    dst[k * nx + i] = s * w / ny as f64;
                }
            }
        }
    }

    pub fn forward(&self, f: &Field) -> Vec<f64> {
        assert_eq!(f.grid, self.grid);
        let mut a = vec![0.0; f.data.len()];
        self.dct_axis_x(&f.data, &mut a, false);
        if self.grid.dim == 2 && self.grid.n[1] > 1 {
            let mut b = vec![0.0; f.data.len()];
            self.dct_axis_y(&a, &mut b, false);
            return b;
        }
        a
    }

    pub fn inverse(&self, coeffs: &[f64]) -> Field {
        let mut a = vec![0.0; coeffs.len()];
        if self.grid.dim == 2 && self.grid.n[1] > 1 {
            self.dct_axis_y(coeffs, &mut a, true);
            let mut b = vec![0.0; coeffs.len()];
            self.dct_axis_x(&a, &mut b, true);
            return Field {
                grid: self.grid,
                data: b,
            };
        }
        self.dct_axis_x(coeffs, &mut a, true);
        Field {
            grid: self.grid,
            data: a,
        }
    }

    /// L2 projection onto the span of the n lowest modes (Pi^n).
    pub fn project(&self, f: &Field, n: usize) -> Field {
        let c = self.forward(f);
        let mut kept = vec![0.0; c.len()];
        for &id in self.lowest_modes(n) {
            kept[id] = c[id];
        }
        self.inverse(&kept)
    }
}

/// One-shot projection without a reusable basis.
pub fn cosine_project(f: &Field, n: usize) -> Field {
    CosineBasis::new(f.grid).project(f, n)
}
