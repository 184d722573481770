//! Orchestrated multi-run experiments: the Galerkin energy identity over a
//! mode sequence, the eps -> 0 bound study, the delta -> 0 consistency
//! study, and the singular-perturbation sweep.
//!
//! Convergence is verified as Cauchy behaviour between consecutive
//! parameters. Identities and bounds the analysis guarantees verbatim fail
//! the study when violated; empirical monotonicity only downgrades the
//! verdict to Inconclusive.

use crate::diagnostics::{self};
use crate::elliptic::lemma_a1_solve;
use crate::error::{Error, Result};
use crate::galerkin::GalerkinSystem;
use crate::grid::{dot, grad_norm_sq, CosineBasis, Field, NormKind};
use crate::stepper::{run, RunConfig, RunOutput};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
            Verdict::Fail => write!(f, "fail"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct StudyRow {
    pub param: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct StudyReport {
    pub param_name: String,
    pub columns: Vec<String>,
    pub rows: Vec<StudyRow>,
    pub verdicts: Vec<(String, Verdict)>,
}

impl StudyReport {
    pub fn csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.param_name);
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{}", r.param));
            for v in &r.values {
                out.push_str(&format!(",{}", v));
            }
            out.push('\n');
        }
        out
    }

    pub fn verdicts_csv(&self) -> String {
        let mut out = String::from("check,verdict\n");
        for (name, v) in &self.verdicts {
            out.push_str(&format!("{name},{v}\n"));
        }
        out
    }

    pub fn worst(&self) -> Verdict {
        let mut w = Verdict::Pass;
        for (_, v) in &self.verdicts {
            if *v == Verdict::Fail {
                return Verdict::Fail;
            }
            if *v == Verdict::Inconclusive {
                w = Verdict::Inconclusive;
            }
        }
        w
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.values[idx]).collect())
    }

    pub fn verdict(&self, name: &str) -> Option<Verdict> {
        self.verdicts
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }
}

fn require_strictly_decreasing(seq: &[f64], what: &str) -> Result<()> {
    if seq.is_empty() {
        return Err(Error::Param(format!("{what}: empty parameter sequence")));
    }
    for w in seq.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::Param(format!(
                "{what}: sequence must be strictly decreasing, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

fn monotone_nonincreasing(vals: &[f64], slack: f64) -> bool {
    vals.windows(2).all(|w| w[1] <= w[0] + slack)
}

fn strictly_decreasing(vals: &[f64]) -> bool {
    vals.windows(2).all(|w| w[1] < w[0])
}

fn median(vals: &[f64]) -> f64 {
    let mut s = vals.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

// ---------------------------------------------------------------------------
// eps -> 0: bound preservation via the entropy.
// ---------------------------------------------------------------------------

pub fn eps_continuation(
    base: &RunConfig,
    eps_seq: &[f64],
) -> Result<(StudyReport, Vec<RunOutput>)> {
    require_strictly_decreasing(eps_seq, "eps_continuation")?;
    for &e in eps_seq {
        if e <= 0.0 || e >= base.params.eps0 {
            return Err(Error::Precondition(format!(
                "eps = {e} outside (0, eps0 = {})",
                base.params.eps0
            )));
        }
    }
    let mut rows = Vec::new();
    let mut outputs = Vec::new();
    let mut bound_ok = true;
    for &eps in eps_seq {
        let mut set = base.params.set();
        set.eps_reg = eps;
        let mut cfg = base.clone();
        cfg.params = crate::model::ModelParams::new(set);
        let out = run(&cfg)?;
        let b1e = cfg.params.mobility(1.0 - eps, false);
        let mut max_over_pos: f64 = 0.0;
        let mut max_over_neg: f64 = 0.0;
        let mut max_entropy: f64 = f64::NEG_INFINITY;
        for r in &out.records {
            max_over_pos = max_over_pos.max(r.overshoot_pos);
            max_over_neg = max_over_neg.max(r.overshoot_neg);
            max_entropy = max_entropy.max(r.entropy);
            if r.overshoot_pos > 2.0 * b1e * r.entropy + 1e-10 {
                bound_ok = false;
            }
        }
        rows.push(StudyRow {
            param: eps,
            values: vec![
                max_over_pos,
                max_over_neg,
                2.0 * b1e * max_entropy,
                max_entropy,
            ],
        });
        outputs.push(out);
    }
    let overshoots: Vec<f64> = rows.iter().map(|r| r.values[0]).collect();
    let verdicts = vec![
        (
            "overshoot_entropy_bound".to_string(),
            if bound_ok { Verdict::Pass } else { Verdict::Fail },
        ),
        (
            "overshoot_monotone".to_string(),
            if monotone_nonincreasing(&overshoots, 1e-10) {
                Verdict::Pass
            } else {
                Verdict::Inconclusive
            },
        ),
    ];
    Ok((
        StudyReport {
            param_name: "eps".to_string(),
            columns: vec![
                "max_overshoot_pos".into(),
                "max_overshoot_neg".into(),
                "bound_2b_smax".into(),
                "max_entropy".into(),
            ],
            rows,
            verdicts,
        },
        outputs,
    ))
}

// ---------------------------------------------------------------------------
// delta -> 0: consistency of the relaxation.
// ---------------------------------------------------------------------------

pub fn delta_continuation(
    base: &RunConfig,
    delta_seq: &[f64],
) -> Result<(StudyReport, Vec<RunOutput>)> {
    require_strictly_decreasing(delta_seq, "delta_continuation")?;
    let d0 = base.params.delta0();
    for &d in delta_seq {
        if d <= 0.0 || d >= d0 {
            return Err(Error::Precondition(format!(
                "delta = {d} outside (0, delta0 = {d0:.6e})"
            )));
        }
    }

    struct Traj {
        out: RunOutput,
        y: Vec<Field>,
        phi: Vec<Field>,
        sup_flux: f64,
        sup_delta_mu_sq: f64,
        init_h1: f64,
        limit_residual: f64,
        sup_y_v: f64,
        sup_sigma_h: f64,
        sum_d2_dt: f64,
    }

    let mut trajs: Vec<Traj> = Vec::new();
    for &delta in delta_seq {
        let mut set = base.params.set();
        set.delta = delta;
        let mut cfg = base.clone();
        cfg.params = crate::model::ModelParams::new(set);
        let out = run(&cfg)?;
        let dg = delta / cfg.params.gamma;
        let y: Vec<Field> = out
            .states
            .iter()
            .map(|s| s.phi.zip(&s.mu, |p, m| p - dg * m))
            .collect();
        let phi: Vec<Field> = out.states.iter().map(|s| s.phi.clone()).collect();
        let sup_flux = out
            .records
            .iter()
            .map(|r| r.flux_norm)
            .fold(f64::NEG_INFINITY, f64::max);
        let sup_delta_mu_sq = out
            .states
            .iter()
            .map(|s| delta * dot(&s.mu, &s.mu))
            .fold(f64::NEG_INFINITY, f64::max);
        let init_h1 = {
            let mut d = y[0].clone();
            d.axpy(-1.0, &phi[0]);
            crate::grid::norm(&d, NormKind::H1)
        };
        let limit_residual =
            diagnostics::mu_limit_residual_delta0(out.states.last().unwrap(), &cfg.params)?;
        let sup_y_v = y
            .iter()
            .map(|f| (dot(f, f) + grad_norm_sq(f)).sqrt())
            .fold(f64::NEG_INFINITY, f64::max);
        let sup_sigma_h = out
            .states
            .iter()
            .map(|s| dot(&s.sigma, &s.sigma).sqrt())
            .fold(f64::NEG_INFINITY, f64::max);
        let sum_d2_dt = out
            .records
            .windows(2)
            .map(|w| 0.5 * (w[1].t - w[0].t) * (w[0].d2 + w[1].d2))
            .sum::<f64>();
        trajs.push(Traj {
            out,
            y,
            phi,
            sup_flux,
            sup_delta_mu_sq,
            init_h1,
            limit_residual,
            sup_y_v,
            sup_sigma_h,
            sum_d2_dt,
        });
    }

    // L2(0,T;L2) distance between trajectories sampled at the shared cadence
    // times (trapezoid in time).
    let l2l2 = |a: &[Field], b: &[Field], times: &[f64]| -> f64 {
        let m = a.len().min(b.len());
        let mut acc = 0.0;
        for k in 1..m {
            let dt = times[k] - times[k - 1];
            let mut da = a[k - 1].clone();
            da.axpy(-1.0, &b[k - 1]);
            let mut db = a[k].clone();
            db.axpy(-1.0, &b[k]);
            acc += 0.5 * dt * (dot(&da, &da) + dot(&db, &db));
        }
        acc.sqrt()
    };

    let times: Vec<f64> = trajs[0].out.records.iter().map(|r| r.t).collect();
    let mut rows = Vec::new();
    for (i, tr) in trajs.iter().enumerate() {
        let (cauchy_y, cauchy_phi) = if i == 0 {
            (f64::NAN, f64::NAN)
        } else {
            (
                l2l2(&trajs[i - 1].y, &tr.y, &times),
                l2l2(&trajs[i - 1].phi, &tr.phi, &times),
            )
        };
        rows.push(StudyRow {
            param: delta_seq[i],
            values: vec![
                cauchy_y,
                cauchy_phi,
                tr.sup_flux,
                tr.sup_delta_mu_sq,
                tr.init_h1,
                tr.limit_residual,
                tr.sup_y_v,
                tr.sup_sigma_h,
                tr.sum_d2_dt,
            ],
        });
    }

    let cauchy: Vec<f64> = rows.iter().skip(1).map(|r| r.values[0]).collect();
    let fluxes: Vec<f64> = rows.iter().map(|r| r.values[2]).collect();
    let inits: Vec<f64> = rows.iter().map(|r| r.values[4]).collect();
    let y_sups: Vec<f64> = rows.iter().map(|r| r.values[6]).collect();
    let d2_sums: Vec<f64> = rows.iter().map(|r| r.values[8]).collect();
    let verdicts = vec![
        (
            "cauchy_decreasing".to_string(),
            if strictly_decreasing(&cauchy) {
                Verdict::Pass
            } else {
                Verdict::Inconclusive
            },
        ),
        (
            "flux_uniformly_bounded".to_string(),
            if fluxes.iter().cloned().fold(f64::NEG_INFINITY, f64::max) <= 2.0 * median(&fluxes) {
                Verdict::Pass
            } else {
                Verdict::Inconclusive
            },
        ),
        (
            "initial_datum_h1_decreasing".to_string(),
            if strictly_decreasing(&inits) {
                Verdict::Pass
            } else {
                Verdict::Inconclusive
            },
        ),
        (
            "uniform_y_bound".to_string(),
            if y_sups.iter().cloned().fold(f64::NEG_INFINITY, f64::max) <= 2.0 * median(&y_sups) {
                Verdict::Pass
            } else {
                Verdict::Inconclusive
            },
        ),
        (
            "uniform_d2_bound".to_string(),
            if d2_sums.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                <= 2.0 * median(&d2_sums) + 1e-12
            {
                Verdict::Pass
            } else {
                Verdict::Inconclusive
            },
        ),
    ];

    Ok((
        StudyReport {
            param_name: "delta".to_string(),
            columns: vec![
                "cauchy_y_l2l2".into(),
                "cauchy_phi_l2l2".into(),
                "sup_flux_l2".into(),
                "sup_delta_mu_sq".into(),
                "init_h1".into(),
                "limit_residual_delta0".into(),
                "sup_y_v".into(),
                "sup_sigma_h".into(),
                "sum_d2_dt".into(),
            ],
            rows,
            verdicts,
        },
        trajs.into_iter().map(|t| t.out).collect(),
    ))
}

// ---------------------------------------------------------------------------
// Galerkin energy identity over a mode sequence.
// ---------------------------------------------------------------------------

pub fn galerkin_energy_check(
    base: &RunConfig,
    ode_tol: f64,
    n_list: &[usize],
) -> Result<StudyReport> {
    if n_list.is_empty() {
        return Err(Error::Param("galerkin: empty mode list".into()));
    }
    let (phi0, sigma0) = base.initial.build(base.grid);
    let mut rows = Vec::new();
    let mut identity_ok = true;
    for &n in n_list {
        let sys = GalerkinSystem::new(base.params.clone(), base.grid, n)?;
        let g = sys.integrate(&phi0, &sigma0, base.t_end, ode_tol)?;
        let tol_scaled = 1e-6 * (1.0 + g.e0.abs());
        if g.max_energy_residual > tol_scaled {
            identity_ok = false;
        }
        rows.push(StudyRow {
            param: n as f64,
            values: vec![g.e0, g.max_energy_residual, tol_scaled, g.max_mean_drift],
        });
    }
    let e0s: Vec<f64> = rows.iter().map(|r| r.values[0]).collect();
    // Cauchy test: past the coarse resolutions (where spectrally sparse
    // data may put whole increments on a single refinement) the increments
    // must shrink.
    let diffs: Vec<f64> = e0s.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let cauchy = if diffs.len() < 2 {
        true
    } else {
        let imax = diffs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        monotone_nonincreasing(&diffs[imax..], 1e-12)
            && *diffs.last().unwrap() <= 0.5 * diffs[imax] + 1e-12
    };
    let verdicts = vec![
        (
            "energy_identity".to_string(),
            if identity_ok { Verdict::Pass } else { Verdict::Fail },
        ),
        (
            "initial_energy_cauchy".to_string(),
            if cauchy {
                Verdict::Pass
            } else {
                Verdict::Inconclusive
            },
        ),
    ];
    Ok(StudyReport {
        param_name: "n_modes".to_string(),
        columns: vec![
            "e0".into(),
            "max_energy_residual".into(),
            "tolerance".into(),
            "max_mean_drift".into(),
        ],
        rows,
        verdicts,
    })
}

// ---------------------------------------------------------------------------
// Lemma A.1 sweep.
// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
pub fn lemma_a1_study(
    f: &Field,
    g: &Field,
    h: &dyn Fn(f64) -> f64,
    k1: f64,
    k2: f64,
    k3: f64,
    delta_seq: &[f64],
) -> Result<StudyReport> {
    require_strictly_decreasing(delta_seq, "lemma_a1_study")?;
    let basis = CosineBasis::new(f.grid);
    let mut rows = Vec::new();
    let mut bounds_ok = true;
    let mut prev_err = f64::NAN;
    for &delta in delta_seq {
        let sol = lemma_a1_solve(f, g, h, k1, k2, k3, delta, &basis)?;
        if !sol.est3_holds || !sol.est1_holds {
            bounds_ok = false;
        }
        let mut d = sol.u.clone();
        d.axpy(-1.0, f);
        let err = crate::grid::norm(&d, NormKind::H1);
        let ratio = if prev_err.is_nan() { f64::NAN } else { err / prev_err };
        prev_err = err;
        rows.push(StudyRow {
            param: delta,
            values: vec![err, ratio, sol.v_norm_sq, sol.est3_rhs, sol.residual],
        });
    }
    let ratios: Vec<f64> = rows.iter().skip(1).map(|r| r.values[1]).collect();
    let first_order = ratios.iter().all(|&r| (0.45..=0.55).contains(&r));
    let errs: Vec<f64> = rows.iter().map(|r| r.values[0]).collect();
    let verdicts = vec![
        (
            "apriori_bounds".to_string(),
            if bounds_ok { Verdict::Pass } else { Verdict::Fail },
        ),
        (
            "h1_error_decreasing".to_string(),
            if strictly_decreasing(&errs) {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
        ),
        (
            "first_order_halving".to_string(),
            if first_order {
                Verdict::Pass
            } else {
                Verdict::Inconclusive
            },
        ),
    ];
    Ok(StudyReport {
        param_name: "delta".to_string(),
        columns: vec![
            "h1_error".into(),
            "halving_ratio".into(),
            "v_norm_sq".into(),
            "est3_rhs".into(),
            "residual".into(),
        ],
        rows,
        verdicts,
    })
}
