//! Closed-form model functions: single-well potential split, degenerate
//! mobility, proliferation, entropy density, their eps-regularisations and
//! the assumption validator.
//!
//! Conventions: the potential is Psi(s) = Psi_plus(s) + Psi_minus(s) with
//!   Psi_plus(s)  = -(1-s*) ln(1-s) - s^3/3 + kappa        (convex, singular at 1)
//!   Psi_minus(s) = -(1-s*) s^2/2 - (1-s*) s               (concave on [0,1])
//! and the mobility is b(s) = s (1-s)^2.  Psi_minus is extended to the whole
//! real line as a C^2 piecewise polynomial: the exact quadratic on
//! [-m, 1+m], a linear ramp of the second derivative up to +q over width w
//! on both sides, and a far quadratic of curvature q beyond.

use crate::error::{Error, Result};

/// Recipe for the concave-part extension beyond [0,1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcaveExtension {
    /// Width beyond [0,1] on which the exact quadratic is kept.
    pub margin: f64,
    /// Width of the second-derivative ramp.
    pub ramp_width: f64,
    /// Curvature of the far quadratic (> 0 for coercivity).
    pub far_curvature: f64,
}

impl Default for ConcaveExtension {
    fn default() -> Self {
        ConcaveExtension {
            margin: 1.0,
            ramp_width: 1.0,
            // Keeps ||Psi_minus''||_inf = 1 - s_star for the default well.
            far_curvature: 0.4,
        }
    }
}

/// One polynomial piece of the extended Psi_minus, expanded around `x0`.
/// Coefficients are in ascending powers of t = s - x0.
#[derive(Debug, Clone)]
struct Piece {
    lo: f64,
    hi: f64,
    x0: f64,
    d0: [f64; 4],
    d1: [f64; 3],
    d2: [f64; 2],
}

impl Piece {
    fn eval(&self, s: f64, order: u8) -> f64 {
        let t = s - self.x0;
        match order {
            0 => ((self.d0[3] * t + self.d0[2]) * t + self.d0[1]) * t + self.d0[0],
            1 => (self.d1[2] * t + self.d1[1]) * t + self.d1[0],
            _ => self.d2[1] * t + self.d2[0],
        }
    }
}

/// C^2 extension of Psi_minus to the real line.
#[derive(Debug, Clone)]
pub struct PsiMinusExt {
    pieces: Vec<Piece>,
}

impl PsiMinusExt {
    fn build(s_star: f64, ext: &ConcaveExtension) -> Self {
        let a = 1.0 - s_star;
        let (m, w, q) = (ext.margin, ext.ramp_width, ext.far_curvature);
        let bl2 = -m - w;
        let bl1 = -m;
        let br1 = 1.0 + m;
        let br2 = 1.0 + m + w;

        // Core quadratic, expanded around bl1.
        let core = Piece {
            lo: bl1,
            hi: br1,
            x0: bl1,
            d0: [-a * (bl1 * bl1 / 2.0 + bl1), -a * (bl1 + 1.0), -a / 2.0, 0.0],
            d1: [-a * (bl1 + 1.0), -a, 0.0],
            d2: [-a, 0.0],
        };

        // Right ramp: psi'' goes linearly from -a at br1 to q at br2.
        let pr1 = -a * (br1 + 1.0);
        let vr1 = -a * (br1 * br1 / 2.0 + br1);
        let ramp_r = Piece {
            lo: br1,
            hi: br2,
            x0: br1,
            d0: [vr1, pr1, -a / 2.0, (q + a) / (6.0 * w)],
            d1: [pr1, -a, (q + a) / (2.0 * w)],
            d2: [-a, (q + a) / w],
        };
        let pr2 = ramp_r.eval(br2, 1);
        let vr2 = ramp_r.eval(br2, 0);
        let far_r = Piece {
            lo: br2,
            hi: f64::INFINITY,
            x0: br2,
            d0: [vr2, pr2, q / 2.0, 0.0],
            d1: [pr2, q, 0.0],
            d2: [q, 0.0],
        };

        // Left ramp: psi''(t) = q - (q+a) t / w on t = s - bl2 in [0, w],
        // constants fixed by C^2 matching with the core at bl1.
        let pl1 = -a * (bl1 + 1.0);
        let vl1 = -a * (bl1 * bl1 / 2.0 + bl1);
        let c1 = pl1 - q * w + (q + a) * w / 2.0;
        let c0 = vl1 - c1 * w - q * w * w / 2.0 + (q + a) * w * w / 6.0;
        let ramp_l = Piece {
            lo: bl2,
            hi: bl1,
            x0: bl2,
            d0: [c0, c1, q / 2.0, -(q + a) / (6.0 * w)],
            d1: [c1, q, -(q + a) / (2.0 * w)],
            d2: [q, -(q + a) / w],
        };
        let far_l = Piece {
            lo: f64::NEG_INFINITY,
            hi: bl2,
            x0: bl2,
            d0: [c0, c1, q / 2.0, 0.0],
            d1: [c1, q, 0.0],
            d2: [q, 0.0],
        };

        PsiMinusExt {
            pieces: vec![far_l, ramp_l, core, ramp_r, far_r],
        }
    }

    pub fn eval(&self, s: f64, order: u8) -> f64 {
        for p in &self.pieces {
            if s <= p.hi {
                return p.eval(s, order);
            }
        }
        self.pieces.last().unwrap().eval(s, order)
    }

    /// sup over R of (c1 s^2 - Psi_minus(s)), exact per piece.
    fn sup_coercivity_gap(&self, c1: f64) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for p in &self.pieces {
            // g(t) = c1 (t + x0)^2 - poly(t); g' is a quadratic in t.
            let x0 = p.x0;
            let ga = -p.d0[3] * 3.0; // coefficient of t^2 in g'
            let gb = 2.0 * c1 - 2.0 * p.d0[2];
            let gc = 2.0 * c1 * x0 - p.d0[1];
            let g = |t: f64| c1 * (t + x0) * (t + x0) - ((p.d0[3] * t + p.d0[2]) * t + p.d0[1]) * t - p.d0[0];
            let mut cands: Vec<f64> = Vec::new();
            if p.lo.is_finite() {
                cands.push(p.lo - x0);
            }
            if p.hi.is_finite() {
                cands.push(p.hi - x0);
            }
            // critical points of g
            if ga.abs() > 1e-300 {
                let disc = gb * gb - 4.0 * ga * gc;
                if disc >= 0.0 {
                    let r = disc.sqrt();
                    cands.push((-gb + r) / (2.0 * ga));
                    cands.push((-gb - r) / (2.0 * ga));
                }
            } else if gb.abs() > 1e-300 {
                cands.push(-gc / gb);
            }
            for t in cands {
                let s = t + x0;
                if s >= p.lo && s <= p.hi {
                    best = best.max(g(t));
                }
            }
        }
        best
    }
}

/// Plain parameter set; `ModelParams::new` derives the rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSet {
    pub gamma: f64,
    pub delta: f64,
    pub chi: f64,
    pub s_star: f64,
    pub p0: f64,
    pub p_exponent: u32,
    pub eps_reg: f64,
    pub eps0: f64,
    /// Additive constant of Psi_plus; `None` means "normalise min Psi_plus
    /// on [0,1) to zero".
    pub kappa: Option<f64>,
    pub extension: ConcaveExtension,
}

impl Default for ParamSet {
    fn default() -> Self {
        ParamSet {
            gamma: 0.06,
            delta: 0.018,
            chi: 0.2,
            s_star: 0.6,
            p0: 0.5,
            p_exponent: 2,
            eps_reg: 0.05,
            eps0: 0.25,
            kappa: None,
            extension: ConcaveExtension::default(),
        }
    }
}

/// Derived linear-growth / coercivity constants of the Psi_minus extension.
#[derive(Debug, Clone, Copy)]
pub struct ExtensionConstants {
    /// |Psi_minus'(s)| <= c0 |s| + c0
    pub c0: f64,
    /// Psi_minus(s) >= c1 s^2 - c2
    pub c1: f64,
    pub c2: f64,
    /// ||Psi_minus''||_inf over R
    pub lip: f64,
}

#[derive(Debug, Clone)]
pub struct ModelParams {
    pub gamma: f64,
    pub delta: f64,
    pub chi: f64,
    pub s_star: f64,
    pub p0: f64,
    pub p_exponent: u32,
    pub eps_reg: f64,
    pub eps0: f64,
    pub kappa: f64,
    pub extension: ConcaveExtension,
    psi_minus_ext: PsiMinusExt,
    consts: ExtensionConstants,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams::new(ParamSet::default())
    }
}

impl ModelParams {
    pub fn new(set: ParamSet) -> Self {
        let ext = set.extension;
        let psi_minus_ext = PsiMinusExt::build(set.s_star, &ext);
        let a = 1.0 - set.s_star;
        let lip = a.max(ext.far_curvature);

        // c1 slightly below the asymptotic curvature, c2 the exact sup of
        // c1 s^2 - Psi_minus over R (plus a whisper of slack), c0 by a
        // grid search with safety factor.
        let c1 = 0.99 * ext.far_curvature / 2.0;
        let gap = psi_minus_ext.sup_coercivity_gap(c1);
        let c2 = if gap > 0.0 { gap * (1.0 + 1e-9) + 1e-12 } else { 1e-12 };
        let mut c0: f64 = ext.far_curvature; // asymptotic slope ratio
        let lo = -1.0 - ext.margin - ext.ramp_width - 5.0;
        let hi = 2.0 + ext.margin + ext.ramp_width + 5.0;
        let nn = 20_000;
        for i in 0..=nn {
            let s = lo + (hi - lo) * i as f64 / nn as f64;
            let r = psi_minus_ext.eval(s, 1).abs() / (s.abs() + 1.0);
            c0 = c0.max(r);
        }
        c0 *= 1.01;

        // kappa: normalise min of Psi_plus on [0,1) to zero unless given.
        let kappa = set.kappa.unwrap_or_else(|| {
            let f = |s: f64| -a * (1.0 - s).ln() - s * s * s / 3.0;
            let mut min = f64::INFINITY;
            let n = 20_000;
            for i in 0..=n {
                let s = (i as f64 / n as f64) * (1.0 - 1e-9);
                min = min.min(f(s));
            }
            -min
        });

        ModelParams {
            gamma: set.gamma,
            delta: set.delta,
            chi: set.chi,
            s_star: set.s_star,
            p0: set.p0,
            p_exponent: set.p_exponent,
            eps_reg: set.eps_reg,
            eps0: set.eps0,
            kappa,
            extension: ext,
            psi_minus_ext,
            consts: ExtensionConstants { c0, c1, c2, lip },
        }
    }

    pub fn set(&self) -> ParamSet {
        ParamSet {
            gamma: self.gamma,
            delta: self.delta,
            chi: self.chi,
            s_star: self.s_star,
            p0: self.p0,
            p_exponent: self.p_exponent,
            eps_reg: self.eps_reg,
            eps0: self.eps0,
            kappa: Some(self.kappa),
            extension: self.extension,
        }
    }

    pub fn constants(&self) -> ExtensionConstants {
        self.consts
    }

    /// delta_0 = min{ gamma^2 / ||Psi_minus''||_inf^2, 1/2 }.
    pub fn delta0(&self) -> f64 {
        let l = self.consts.lip;
        (self.gamma * self.gamma / (l * l)).min(0.5)
    }

    /// Contraction factor of the mu fixed point, (delta/gamma) ||Psi_minus''||_inf.
    pub fn mu_contraction_factor(&self) -> f64 {
        self.delta / self.gamma * self.consts.lip
    }

    /// Constants (c4, c5) of the bound |sqrt(P) eta'| <= c4 |s| + c5,
    /// available whenever the A5 endpoint bound holds (P = P0 b^2, c4 = sqrt(P0)).
    pub fn peta_constants(&self) -> Option<(f64, f64)> {
        if self.p_exponent != 2 {
            return None;
        }
        let c4 = self.p0.sqrt();
        let mut c5: f64 = 0.0;
        let nn = 20_000;
        for i in 1..nn {
            let s = i as f64 / nn as f64;
            let v = self.proliferation(s, false).max(0.0).sqrt() * self.eta_raw(s, 1);
            c5 = c5.max(v.abs() - c4 * s);
        }
        Some((c4, c5 * 1.01 + 1e-12))
    }

    // ----- potential -------------------------------------------------------

    fn psi_plus_raw(&self, s: f64, order: u8) -> f64 {
        let a = 1.0 - self.s_star;
        match order {
            0 => -a * (1.0 - s).ln() - s * s * s / 3.0 + self.kappa,
            1 => a / (1.0 - s) - s * s,
            _ => a / ((1.0 - s) * (1.0 - s)) - 2.0 * s,
        }
    }

    /// Convex part Psi_plus (eps-regularised when eps_reg > 0).
    pub fn psi_plus(&self, s: f64, order: u8) -> Result<f64> {
        if !(self.s_star > 0.0 && self.s_star <= 0.7) {
            return Err(Error::Param(format!(
                "s_star = {} outside (0, 0.7]: Psi_plus not convex",
                self.s_star
            )));
        }
        let eps = self.eps_reg;
        if eps == 0.0 {
            if s >= 1.0 {
                return Err(Error::Domain(format!(
                    "Psi_plus is singular at 1 and undefined for s = {s} with eps = 0"
                )));
            }
            return Ok(self.psi_plus_raw(s, order));
        }
        Ok(self.taylor_patch(s, order, eps, |x, k| self.psi_plus_raw(x, k)))
    }

    /// Quadratic Taylor continuation outside [eps, 1-eps].
    fn taylor_patch(&self, s: f64, order: u8, eps: f64, f: impl Fn(f64, u8) -> f64) -> f64 {
        let anchor = if s < eps {
            eps
        } else if s > 1.0 - eps {
            1.0 - eps
        } else {
            return f(s, order);
        };
        let t = s - anchor;
        match order {
            0 => f(anchor, 0) + f(anchor, 1) * t + 0.5 * f(anchor, 2) * t * t,
            1 => f(anchor, 1) + f(anchor, 2) * t,
            _ => f(anchor, 2),
        }
    }

    /// Concave part Psi_minus, defined on all of R via the extension.
    pub fn psi_minus(&self, s: f64, order: u8) -> f64 {
        self.psi_minus_ext.eval(s, order)
    }

    /// Full potential Psi = Psi_plus + Psi_minus (raw, s < 1).
    pub fn psi_total(&self, s: f64, order: u8) -> Result<f64> {
        if s >= 1.0 {
            return Err(Error::Domain(format!("Psi undefined at s = {s} >= 1")));
        }
        Ok(self.psi_plus_raw(s, order) + self.psi_minus(s, order))
    }

    /// Strict lower bound of Psi_plus_eps'' over R: inf of Psi_plus'' on
    /// [eps, 1-eps] (the patches are flat continuations of the endpoint
    /// curvatures, and the interior critical point may undercut both).
    pub fn cbar_eps(&self) -> f64 {
        let eps = self.eps_reg;
        let a = 1.0 - self.s_star;
        let f2 = |s: f64| a / ((1.0 - s) * (1.0 - s)) - 2.0 * s;
        let mut cands = vec![eps, 1.0 - eps];
        let sc = 1.0 - a.cbrt();
        if sc > eps && sc < 1.0 - eps {
            cands.push(sc);
        }
        cands.into_iter().map(f2).fold(f64::INFINITY, f64::min)
    }

    /// inf over R of the regularised Psi_plus_eps (the left patch vertex may
    /// dip below the kappa-normalised zero).
    pub fn psi_plus_eps_inf(&self) -> f64 {
        let eps = self.eps_reg;
        if eps == 0.0 {
            return 0.0;
        }
        let v = |anchor: f64, lo_side: bool| -> f64 {
            let f0 = self.psi_plus_raw(anchor, 0);
            let f1 = self.psi_plus_raw(anchor, 1);
            let f2 = self.psi_plus_raw(anchor, 2);
            let t_v = -f1 / f2;
            let in_domain = if lo_side { t_v <= 0.0 } else { t_v >= 0.0 };
            if in_domain {
                f0 - f1 * f1 / (2.0 * f2)
            } else {
                f0
            }
        };
        v(eps, true).min(v(1.0 - eps, false)).min(0.0)
    }

    // ----- mobility / proliferation ----------------------------------------

    fn b_raw(&self, s: f64) -> f64 {
        s * (1.0 - s) * (1.0 - s)
    }

    /// Degenerate mobility b(s) = s(1-s)^2, clamped per the regularisation
    /// when `use_eps` (constant b(eps) below eps, b(1-eps) above 1-eps).
    pub fn mobility(&self, s: f64, use_eps: bool) -> f64 {
        if !use_eps {
            return self.b_raw(s);
        }
        let eps = self.eps_reg;
        if eps == 0.0 {
            return self.b_raw(s.clamp(0.0, 1.0));
        }
        self.b_raw(s.clamp(eps, 1.0 - eps))
    }

    /// Proliferation P(s) = P0 b(s)^p (default p = 2, which satisfies the
    /// sqrt(P) <= c3 b endpoint bound with c3 = sqrt(P0)).
    pub fn proliferation(&self, s: f64, use_eps: bool) -> f64 {
        let b = self.mobility(s, use_eps);
        self.p0 * b.powi(self.p_exponent as i32)
    }

    // ----- entropy ----------------------------------------------------------

    fn eta_raw(&self, s: f64, order: u8) -> f64 {
        match order {
            0 => s * (s / (1.0 - s)).ln() - 2.0 * s + 1.0,
            1 => (s / (1.0 - s)).ln() + 1.0 / (1.0 - s) - 2.0,
            _ => 1.0 / (s * (1.0 - s) * (1.0 - s)),
        }
    }

    /// Entropy density: solution of b eta'' = 1 with eta(1/2) = eta'(1/2) = 0,
    /// in closed form eta(s) = s ln(s/(1-s)) - 2s + 1; Taylor patch outside
    /// [eps, 1-eps] when `use_eps`.
    pub fn entropy_density(&self, s: f64, order: u8, use_eps: bool) -> Result<f64> {
        let eps = self.eps_reg;
        if !use_eps || eps == 0.0 {
            if s <= 0.0 || s >= 1.0 {
                return Err(Error::Domain(format!(
                    "entropy density undefined at s = {s} outside (0,1)"
                )));
            }
            return Ok(self.eta_raw(s, order));
        }
        Ok(self.taylor_patch(s, order, eps, |x, k| self.eta_raw(x, k)))
    }

    // ----- coercivity of the free energy ------------------------------------

    /// (alpha, beta) with beta = c1 - chi^2/(1-2 alpha) > 0 when chi^2 < c1.
    pub fn alpha_beta(&self) -> Option<(f64, f64)> {
        let c1 = self.consts.c1;
        let chi2 = self.chi * self.chi;
        if chi2 >= c1 {
            return None;
        }
        let alpha = 0.25 * (1.0 - chi2 / c1);
        let beta = c1 - chi2 / (1.0 - 2.0 * alpha);
        Some((alpha, beta))
    }

    /// Constant of the energy lower bound, c2 + chi^2/(1 - 2 alpha).
    pub fn coercivity_offset(&self) -> Option<f64> {
        let (alpha, _) = self.alpha_beta()?;
        Some(self.consts.c2 + self.chi * self.chi / (1.0 - 2.0 * alpha))
    }

    // ----- validation --------------------------------------------------------

    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();
        let a = 1.0 - self.s_star;
        let k = self.consts;

        checks.push(Check::new(
            "A1",
            self.gamma > 0.0,
            format!("gamma = {} must be > 0", self.gamma),
        ));

        let conv = self.s_star > 0.0 && self.s_star <= 0.7;
        checks.push(Check::new(
            "A2",
            conv && k.c1 > 0.0 && k.c0 > 0.0,
            format!(
                "s_star = {} in (0, 0.7] (convexity of Psi_plus); extension constants c0 = {:.6}, c1 = {:.6}, c2 = {:.6}",
                self.s_star, k.c0, k.c1, k.c2
            ),
        ));

        let d0 = self.delta0();
        checks.push(Check::new(
            "A3",
            self.delta == 0.0 || (self.delta > 0.0 && self.delta < d0),
            format!(
                "delta = {} must be < delta0 = min(gamma^2/lip^2, 1/2) = {:.6e} (lip = {})",
                self.delta, d0, k.lip
            ),
        ));

        // A4: degeneracy, eps0 monotonicity window, continuity of b Psi_plus''.
        let mut mono_ok = self.eps0 > 0.0 && self.eps0 < 0.5;
        let n = 2000;
        for i in 0..n {
            let s1 = self.eps0 * i as f64 / n as f64;
            let s2 = self.eps0 * (i + 1) as f64 / n as f64;
            if self.b_raw(s2) < self.b_raw(s1) - 1e-14 {
                mono_ok = false;
            }
            let t1 = 1.0 - self.eps0 + self.eps0 * i as f64 / n as f64;
            let t2 = 1.0 - self.eps0 + self.eps0 * (i + 1) as f64 / n as f64;
            if self.b_raw(t2) > self.b_raw(t1) + 1e-14 {
                mono_ok = false;
            }
        }
        // b(s) Psi_plus''(s) = s(1-s*) - 2 s^2 (1-s)^2 -> (1-s*) as s -> 1.
        let mut bpsi_sup: f64 = 0.0;
        for i in 0..=n {
            let s = 0.999 + 0.001 * i as f64 / n as f64;
            bpsi_sup = bpsi_sup.max((s * a - 2.0 * s * s * (1.0 - s) * (1.0 - s)).abs());
        }
        checks.push(Check::new(
            "A4",
            mono_ok && bpsi_sup.is_finite(),
            format!(
                "b(0) = b(1) = 0; b monotone on [0, {0}] and [1-{0}, 1]; sampled sup |b Psi_plus''| near 1 = {1:.6} (limit {2})",
                self.eps0, bpsi_sup, a
            ),
        ));

        // A5: sqrt(P) <= c3 b on the endpoint bands.
        let (a5_ok, c3, a5_detail) = match self.p_exponent {
            2 => (
                true,
                self.p0.sqrt(),
                format!("P = P0 b^2: sqrt(P)/b = sqrt(P0) = {:.6}", self.p0.sqrt()),
            ),
            1 => (
                false,
                f64::INFINITY,
                "P = P0 b: sqrt(P)/b = sqrt(P0/b) unbounded at the degenerate endpoints".to_string(),
            ),
            p => (false, f64::INFINITY, format!("unsupported P exponent {p}")),
        };
        checks.push(Check::new("A5", a5_ok, a5_detail));

        checks.push(Check::new(
            "A6",
            self.chi >= 0.0 && self.chi * self.chi < k.c1,
            format!(
                "chi = {} >= 0 and chi^2 = {:.6} < c1 = {:.6}",
                self.chi,
                self.chi * self.chi,
                k.c1
            ),
        ));

        checks.push(Check::new(
            "EPS",
            self.eps_reg >= 0.0 && self.eps_reg < self.eps0 && self.eps0 < 0.5,
            format!(
                "eps_reg = {} must be in [0, eps0) with eps0 = {} < 1/2",
                self.eps_reg, self.eps0
            ),
        ));

        // |sqrt(P) eta'| <= c4 |s| + c5 with c4 = c3; c5 from a fine sample.
        let (peta_ok, c4, c5) = if a5_ok {
            let c4 = c3;
            let mut c5: f64 = 0.0;
            let nn = 20_000;
            for i in 1..nn {
                let s = i as f64 / nn as f64;
                let v = (self.proliferation(s, false).max(0.0)).sqrt() * self.eta_raw(s, 1);
                c5 = c5.max(v.abs() - c4 * s);
            }
            (c5.is_finite(), c4, c5 * 1.01 + 1e-12)
        } else {
            (false, f64::INFINITY, f64::INFINITY)
        };
        checks.push(Check::new(
            "PETA",
            peta_ok,
            format!("|sqrt(P) eta'| <= c4 |s| + c5 with c4 = {c4:.6}, c5 = {c5:.6}"),
        ));

        ValidationReport { checks }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub id: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(id: &'static str, pass: bool, detail: String) -> Self {
        Check { id, pass, detail }
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{:4} {}  {}\n",
                c.id,
                if c.pass { "PASS" } else { "FAIL" },
                c.detail
            ));
        }
        out
    }
}
