//! Embedded Dormand-Prince 5(4) integrator with PI-free step control,
//! used by the spectral Galerkin mode.

use crate::error::{Error, Result};

pub struct OdeOpts {
    pub rtol: f64,
    pub atol: f64,
    pub h0: f64,
    pub hmax: f64,
    pub max_steps: usize,
}

impl Default for OdeOpts {
    fn default() -> Self {
        OdeOpts {
            rtol: 1e-10,
            atol: 1e-12,
            h0: 1e-6,
            hmax: f64::INFINITY,
            max_steps: 2_000_000,
        }
    }
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate y' = f(t, y) from t0 to t_end; `observe` is called at t0 and at
/// every accepted step. Returns the final state.
pub fn integrate(
    mut f: impl FnMut(f64, &[f64], &mut [f64]),
    t0: f64,
    t_end: f64,
    y0: &[f64],
    opts: &OdeOpts,
    mut observe: impl FnMut(f64, &[f64]),
) -> Result<Vec<f64>> {
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;
    let mut h = opts.h0.min(t_end - t0).min(opts.hmax);
    let mut k = vec![vec![0.0; n]; 7];
    let mut ytmp = vec![0.0; n];
    let mut y5 = vec![0.0; n];
    observe(t, &y);
    f(t, &y, &mut k[0]);
    let mut steps = 0usize;
    while t < t_end - 1e-14 * t_end.max(1.0) {
        if steps > opts.max_steps {
            return Err(Error::Convergence(format!(
                "ode integrator exceeded {} steps at t = {t}",
                opts.max_steps
            )));
        }
        steps += 1;
        h = h.min(t_end - t);
        for s in 1..7 {
            for i in 0..n {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = if s < 6 { A[s - 1][j] } else { A[5][j] };
                    acc += a * kj[i];
                }
                ytmp[i] = y[i] + h * acc;
            }
            let ts = t + h
                * match s {
                    1 => 0.2,
                    2 => 0.3,
                    3 => 0.8,
                    4 => 8.0 / 9.0,
                    _ => 1.0,
                };
            let (head, tail) = k.split_at_mut(s);
            let _ = head;
            f(ts, &ytmp, &mut tail[0]);
        }
        let mut err: f64 = 0.0;
        for i in 0..n {
            let mut v5 = 0.0;
            let mut v4 = 0.0;
            for j in 0..7 {
                v5 += B5[j] * k[j][i];
                v4 += B4[j] * k[j][i];
            }
            y5[i] = y[i] + h * v5;
            let sc = opts.atol + opts.rtol * y[i].abs().max(y5[i].abs());
            let e = h * (v5 - v4) / sc;
            err += e * e;
        }
        err = (err / n as f64).sqrt();
        if err <= 1.0 {
            t += h;
            std::mem::swap(&mut y, &mut y5);
            // FSAL
            let last = k[6].clone();
            k[0].copy_from_slice(&last);
            observe(t, &y);
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h = (h * factor).min(opts.hmax);
        if h < 1e-15 * t_end.max(1.0) {
            return Err(Error::Convergence(format!(
                "ode step size underflow at t = {t}"
            )));
        }
        // on rejection k[0] still holds f(t, y); stages only wrote k[1..7]
    }
    Ok(y)
}
