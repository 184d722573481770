//! Flat `key = value` configuration with `[section]` headers. Sections:
//! model, grid, time, initial, study, output. Unknown keys or sections are
//! errors carrying the offending line number; absent keys take the
//! documented defaults. `serialize` emits a canonical text whose reparse is
//! equal to the original config.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::model::{ConcaveExtension, ModelParams, ParamSet};
use crate::stepper::{AdaptiveCfg, InitialData, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub dim: usize,
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            dim: 2,
            nx: 64,
            ny: 64,
            lx: 1.0,
            ly: 1.0,
        }
    }
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        if self.dim != 1 && self.dim != 2 {
            return Err(Error::Param(format!("grid dim must be 1 or 2, got {}", self.dim)));
        }
        if self.nx < 4 || (self.dim == 2 && self.ny < 4) {
            return Err(Error::Param(format!(
                "grid needs at least 4 cells per axis, got {}x{}",
                self.nx, self.ny
            )));
        }
        if self.lx <= 0.0 || (self.dim == 2 && self.ly <= 0.0) {
            return Err(Error::Param(format!(
                "domain lengths must be positive, got {} x {}",
                self.lx, self.ly
            )));
        }
        Ok(if self.dim == 1 {
            Grid::new_1d(self.nx, self.lx)
        } else {
            Grid::new_2d(self.nx, self.ny, self.lx, self.ly)
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSpec {
    pub dt: f64,
    pub t_end: f64,
    pub cadence: usize,
    pub adaptive: bool,
    pub max_halvings: u32,
    pub energy_residual_tol: f64,
}

impl Default for TimeSpec {
    fn default() -> Self {
        TimeSpec {
            dt: 1e-4,
            t_end: 0.05,
            cadence: 10,
            adaptive: false,
            max_halvings: 8,
            energy_residual_tol: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialSpec {
    pub kind: String,
    pub phi_mean: f64,
    pub phi_amp: f64,
    pub phi_mode_x: usize,
    pub phi_mode_y: usize,
    pub phi_clamp_min: f64,
    pub phi_clamp_max: f64,
    pub sigma_const: f64,
    pub perturb_amp: f64,
    pub phi_const: f64,
}

impl Default for InitialSpec {
    fn default() -> Self {
        InitialSpec {
            kind: "bump".to_string(),
            phi_mean: 0.45,
            phi_amp: 0.1,
            phi_mode_x: 2,
            phi_mode_y: 2,
            phi_clamp_min: 0.0,
            phi_clamp_max: 0.95,
            sigma_const: 0.5,
            perturb_amp: 0.0,
            phi_const: 0.45,
        }
    }
}

impl InitialSpec {
    pub fn build(&self, seed: u64) -> Result<InitialData> {
        match self.kind.as_str() {
            "bump" => Ok(InitialData::Bump {
                phi_mean: self.phi_mean,
                phi_amp: self.phi_amp,
                mode_x: self.phi_mode_x,
                mode_y: self.phi_mode_y,
                clamp_min: self.phi_clamp_min,
                clamp_max: self.phi_clamp_max,
                sigma_const: self.sigma_const,
                perturb_amp: self.perturb_amp,
                seed,
            }),
            "constant" => Ok(InitialData::Constant {
                phi: self.phi_const,
                sigma: self.sigma_const,
            }),
            other => Err(Error::Param(format!("unknown initial kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudySpec {
    pub deltas: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub modes: Vec<usize>,
    pub ode_tol: f64,
    pub lemma_deltas: Vec<f64>,
    pub lemma_cells: usize,
    pub lemma_mode: usize,
    pub lemma_k1: f64,
    pub lemma_k2: f64,
    pub lemma_k3: f64,
}

impl Default for StudySpec {
    fn default() -> Self {
        StudySpec {
            deltas: vec![8e-3, 4e-3, 2e-3, 1e-3],
            epsilons: vec![0.1, 0.05, 0.025, 0.0125],
            modes: vec![4, 8, 16, 32, 64],
            ode_tol: 1e-10,
            lemma_deltas: vec![1e-2, 5e-3, 2.5e-3, 1.25e-3],
            lemma_cells: 256,
            lemma_mode: 1,
            lemma_k1: 0.0,
            lemma_k2: 0.0,
            lemma_k3: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub out_dir: String,
    pub plots: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            out_dir: "out".to_string(),
            plots: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FullConfig {
    pub params: ParamSet,
    pub grid: GridSpec,
    pub time: TimeSpec,
    pub initial: InitialSpec,
    pub study: StudySpec,
    pub output: OutputSpec,
}

impl FullConfig {
    pub fn to_run_config(&self, seed: u64) -> Result<RunConfig> {
        Ok(RunConfig {
            params: ModelParams::new(self.params),
            grid: self.grid.build()?,
            dt: self.time.dt,
            t_end: self.time.t_end,
            initial: self.initial.build(seed)?,
            cadence: self.time.cadence,
            adaptive: AdaptiveCfg {
                enabled: self.time.adaptive,
                max_halvings: self.time.max_halvings,
                energy_residual_tol: self.time.energy_residual_tol,
            },
            force: false,
        })
    }
}

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| Error::config(line, format!("{key}: expected a number, got '{v}'")))
}

fn parse_usize(line: usize, key: &str, v: &str) -> Result<usize> {
    v.parse::<usize>()
        .map_err(|_| Error::config(line, format!("{key}: expected an integer, got '{v}'")))
}

fn parse_bool(line: usize, key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::config(line, format!("{key}: expected a bool, got '{v}'"))),
    }
}

fn parse_f64_list(line: usize, key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',')
        .map(|s| parse_f64(line, key, s.trim()))
        .collect()
}

fn parse_usize_list(line: usize, key: &str, v: &str) -> Result<Vec<usize>> {
    v.split(',')
        .map(|s| parse_usize(line, key, s.trim()))
        .collect()
}

pub fn parse_config(text: &str) -> Result<FullConfig> {
    let mut cfg = FullConfig::default();
    let mut section = String::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if !line.ends_with(']') {
                return Err(Error::config(lineno, "unterminated section header"));
            }
            section = line[1..line.len() - 1].trim().to_string();
            match section.as_str() {
                "model" | "grid" | "time" | "initial" | "study" | "output" => {}
                other => {
                    return Err(Error::config(lineno, format!("unknown section '{other}'")))
                }
            }
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => return Err(Error::config(lineno, format!("expected key = value, got '{line}'"))),
        };
        if section.is_empty() {
            return Err(Error::config(lineno, format!("key '{key}' outside any section")));
        }
        match (section.as_str(), key) {
            ("model", "gamma") => cfg.params.gamma = parse_f64(lineno, key, value)?,
            ("model", "delta") => cfg.params.delta = parse_f64(lineno, key, value)?,
            ("model", "chi") => cfg.params.chi = parse_f64(lineno, key, value)?,
            ("model", "s_star") => cfg.params.s_star = parse_f64(lineno, key, value)?,
            ("model", "p0") => cfg.params.p0 = parse_f64(lineno, key, value)?,
            ("model", "p_exponent") => {
                cfg.params.p_exponent = parse_usize(lineno, key, value)? as u32
            }
            ("model", "eps_reg") => cfg.params.eps_reg = parse_f64(lineno, key, value)?,
            ("model", "eps0") => cfg.params.eps0 = parse_f64(lineno, key, value)?,
            ("model", "kappa") => {
                cfg.params.kappa = if value == "auto" {
                    None
                } else {
                    Some(parse_f64(lineno, key, value)?)
                }
            }
            ("model", "ext_margin") => {
                cfg.params.extension.margin = parse_f64(lineno, key, value)?
            }
            ("model", "ext_ramp_width") => {
                cfg.params.extension.ramp_width = parse_f64(lineno, key, value)?
            }
            ("model", "ext_far_curvature") => {
                cfg.params.extension.far_curvature = parse_f64(lineno, key, value)?
            }
            ("grid", "dim") => cfg.grid.dim = parse_usize(lineno, key, value)?,
            ("grid", "nx") => cfg.grid.nx = parse_usize(lineno, key, value)?,
            ("grid", "ny") => cfg.grid.ny = parse_usize(lineno, key, value)?,
            ("grid", "lx") => cfg.grid.lx = parse_f64(lineno, key, value)?,
            ("grid", "ly") => cfg.grid.ly = parse_f64(lineno, key, value)?,
            ("time", "dt") => cfg.time.dt = parse_f64(lineno, key, value)?,
            ("time", "t_end") => cfg.time.t_end = parse_f64(lineno, key, value)?,
            ("time", "cadence") => cfg.time.cadence = parse_usize(lineno, key, value)?,
            ("time", "adaptive") => cfg.time.adaptive = parse_bool(lineno, key, value)?,
            ("time", "max_halvings") => {
                cfg.time.max_halvings = parse_usize(lineno, key, value)? as u32
            }
            ("time", "energy_residual_tol") => {
                cfg.time.energy_residual_tol = parse_f64(lineno, key, value)?
            }
            ("initial", "kind") => cfg.initial.kind = value.to_string(),
            ("initial", "phi_mean") => cfg.initial.phi_mean = parse_f64(lineno, key, value)?,
            ("initial", "phi_amp") => cfg.initial.phi_amp = parse_f64(lineno, key, value)?,
            ("initial", "phi_mode_x") => {
                cfg.initial.phi_mode_x = parse_usize(lineno, key, value)?
            }
            ("initial", "phi_mode_y") => {
                cfg.initial.phi_mode_y = parse_usize(lineno, key, value)?
            }
            ("initial", "phi_clamp_min") => {
                cfg.initial.phi_clamp_min = parse_f64(lineno, key, value)?
            }
            ("initial", "phi_clamp_max") => {
                cfg.initial.phi_clamp_max = parse_f64(lineno, key, value)?
            }
            ("initial", "sigma_const") => {
                cfg.initial.sigma_const = parse_f64(lineno, key, value)?
            }
            ("initial", "perturb_amp") => {
                cfg.initial.perturb_amp = parse_f64(lineno, key, value)?
            }
            ("initial", "phi_const") => cfg.initial.phi_const = parse_f64(lineno, key, value)?,
            ("study", "deltas") => cfg.study.deltas = parse_f64_list(lineno, key, value)?,
            ("study", "epsilons") => cfg.study.epsilons = parse_f64_list(lineno, key, value)?,
            ("study", "modes") => cfg.study.modes = parse_usize_list(lineno, key, value)?,
            ("study", "ode_tol") => cfg.study.ode_tol = parse_f64(lineno, key, value)?,
            ("study", "lemma_deltas") => {
                cfg.study.lemma_deltas = parse_f64_list(lineno, key, value)?
            }
            ("study", "lemma_cells") => cfg.study.lemma_cells = parse_usize(lineno, key, value)?,
            ("study", "lemma_mode") => cfg.study.lemma_mode = parse_usize(lineno, key, value)?,
            ("study", "lemma_k1") => cfg.study.lemma_k1 = parse_f64(lineno, key, value)?,
            ("study", "lemma_k2") => cfg.study.lemma_k2 = parse_f64(lineno, key, value)?,
            ("study", "lemma_k3") => cfg.study.lemma_k3 = parse_f64(lineno, key, value)?,
            ("output", "out_dir") => cfg.output.out_dir = value.to_string(),
            ("output", "plots") => cfg.output.plots = parse_bool(lineno, key, value)?,
            (sec, k) => {
                return Err(Error::config(
                    lineno,
                    format!("unknown key '{k}' in section [{sec}]"),
                ))
            }
        }
    }
    Ok(cfg)
}

fn fmt_list(vals: &[f64]) -> String {
    vals.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn fmt_ulist(vals: &[usize]) -> String {
    vals.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn serialize_config(cfg: &FullConfig) -> String {
    let p = &cfg.params;
    let e: &ConcaveExtension = &p.extension;
    let kappa = match p.kappa {
        None => "auto".to_string(),
        Some(k) => k.to_string(),
    };
    format!(
        "[model]\n\
         gamma = {}\ndelta = {}\nchi = {}\ns_star = {}\np0 = {}\np_exponent = {}\n\
         eps_reg = {}\neps0 = {}\nkappa = {}\n\
         ext_margin = {}\next_ramp_width = {}\next_far_curvature = {}\n\
         [grid]\ndim = {}\nnx = {}\nny = {}\nlx = {}\nly = {}\n\
         [time]\ndt = {}\nt_end = {}\ncadence = {}\nadaptive = {}\nmax_halvings = {}\nenergy_residual_tol = {}\n\
         [initial]\nkind = {}\nphi_mean = {}\nphi_amp = {}\nphi_mode_x = {}\nphi_mode_y = {}\n\
         phi_clamp_min = {}\nphi_clamp_max = {}\nsigma_const = {}\nperturb_amp = {}\nphi_const = {}\n\
         [study]\ndeltas = {}\nepsilons = {}\nmodes = {}\node_tol = {}\n\
         lemma_deltas = {}\nlemma_cells = {}\nlemma_mode = {}\nlemma_k1 = {}\nlemma_k2 = {}\nlemma_k3 = {}\n\
         [output]\nout_dir = {}\nplots = {}\n",
        p.gamma,
        p.delta,
        p.chi,
        p.s_star,
        p.p0,
        p.p_exponent,
        p.eps_reg,
        p.eps0,
        kappa,
        e.margin,
        e.ramp_width,
        e.far_curvature,
        cfg.grid.dim,
        cfg.grid.nx,
        cfg.grid.ny,
        cfg.grid.lx,
        cfg.grid.ly,
        cfg.time.dt,
        cfg.time.t_end,
        cfg.time.cadence,
        cfg.time.adaptive,
        cfg.time.max_halvings,
        cfg.time.energy_residual_tol,
        cfg.initial.kind,
        cfg.initial.phi_mean,
        cfg.initial.phi_amp,
        cfg.initial.phi_mode_x,
        cfg.initial.phi_mode_y,
        cfg.initial.phi_clamp_min,
        cfg.initial.phi_clamp_max,
        cfg.initial.sigma_const,
        cfg.initial.perturb_amp,
        cfg.initial.phi_const,
        fmt_list(&cfg.study.deltas),
        fmt_list(&cfg.study.epsilons),
        fmt_ulist(&cfg.study.modes),
        cfg.study.ode_tol,
        fmt_list(&cfg.study.lemma_deltas),
        cfg.study.lemma_cells,
        cfg.study.lemma_mode,
        cfg.study.lemma_k1,
        cfg.study.lemma_k2,
        cfg.study.lemma_k3,
        cfg.output.out_dir,
        cfg.output.plots,
    )
}
