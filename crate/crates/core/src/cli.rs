//! Subcommand dispatch: parse a config, run the requested task, write the
//! output tree. Exit codes: 0 success, 1 config/validation error,
//! 2 numerical failure, 3 study verdict inconclusive.

use crate::config::{parse_config, FullConfig};
use crate::error::Error;
use crate::grid::Field;
use crate::model::ModelParams;
use crate::output;
use crate::stepper::{run, RunOutput};
use crate::studies::{self, StudyReport, Verdict};
use std::path::{Path, PathBuf};

pub const USAGE: &str = "usage: rch <run|delta-study|eps-study|galerkin-check|lemma-a1|validate> <config> [--out DIR] [--seed N] [--plots]";

struct Invocation {
    command: String,
    config_path: PathBuf,
    out_dir: Option<PathBuf>,
    seed: u64,
    plots: bool,
}

fn parse_args(args: &[String]) -> Result<Invocation, String> {
    let mut pos = Vec::new();
    let mut out_dir = None;
    let mut seed = 0u64;
    let mut plots = false;
    let mut i = 0;
    while i < args.len() {
        match args[i].as_str() {
            "--out" => {
                i += 1;
                out_dir = Some(PathBuf::from(args.get(i).ok_or("--out needs a value")?));
            }
            "--seed" => {
                i += 1;
                seed = args
                    .get(i)
                    .ok_or("--seed needs a value")?
                    .parse()
                    .map_err(|_| "--seed must be an integer".to_string())?;
            }
            "--plots" => plots = true,
            other => pos.push(other.to_string()),
        }
        i += 1;
    }
    if pos.len() != 2 {
        return Err(USAGE.to_string());
    }
    Ok(Invocation {
        command: pos[0].clone(),
        config_path: PathBuf::from(&pos[1]),
        out_dir,
        seed,
        plots,
    })
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Config { .. } | Error::Param(_) => 1,
        _ => 2,
    }
}

fn write_run_outputs(dir: &Path, out: &RunOutput, plots: bool) -> crate::error::Result<()> {
    std::fs::create_dir_all(dir)?;
    output::write_diagnostics_csv(&dir.join("diagnostics.csv"), &out.records)?;
    let fields = dir.join("fields");
    std::fs::create_dir_all(&fields)?;
    for (k, st) in out.states.iter().enumerate() {
        output::write_field_snapshot(&fields.join(format!("phi_{k:06}.dat")), &st.phi, st.t)?;
        output::write_field_snapshot(&fields.join(format!("sigma_{k:06}.dat")), &st.sigma, st.t)?;
        output::write_field_snapshot(&fields.join(format!("mu_{k:06}.dat")), &st.mu, st.t)?;
    }
    if plots {
        let pdir = dir.join("plots");
        std::fs::create_dir_all(&pdir)?;
        let t: Vec<f64> = out.records.iter().map(|r| r.t).collect();
        let mk = |ys: Vec<f64>| -> Vec<(f64, f64)> {
            t.iter().cloned().zip(ys).collect()
        };
        let energy = mk(out.records.iter().map(|r| r.energy).collect());
        let entropy = mk(out.records.iter().map(|r| r.entropy).collect());
        let mass = mk(out.records.iter().map(|r| r.mass_total).collect());
        let over = mk(out.records.iter().map(|r| r.overshoot_pos).collect());
        output::plot_png(&pdir.join("energy.png"), &[("energy", &energy)])?;
        output::plot_png(&pdir.join("entropy.png"), &[("entropy", &entropy)])?;
        output::plot_png(&pdir.join("mass.png"), &[("mass_total", &mass)])?;
        output::plot_png(&pdir.join("overshoot.png"), &[("overshoot_pos", &over)])?;
    }
    Ok(())
}

fn study_exit(report: &StudyReport) -> i32 {
    match report.worst() {
        Verdict::Pass => 0,
        Verdict::Inconclusive => 3,
        Verdict::Fail => 2,
    }
}

pub fn main_with_args(args: &[String]) -> i32 {
    let inv = match parse_args(args) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("{msg}");
            return 1;
        }
    };
    let text = match std::fs::read_to_string(&inv.config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read config {}: {e}", inv.config_path.display());
            return 1;
        }
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return 1;
        }
    };
    let out_dir = inv
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from(&cfg.output.out_dir));
    let plots = inv.plots || cfg.output.plots;

    match inv.command.as_str() {
        "validate" => cmd_validate(&cfg),
        "run" => cmd_run(&cfg, &out_dir, inv.seed, plots),
        "delta-study" => cmd_delta_study(&cfg, &out_dir, inv.seed, plots),
        "eps-study" => cmd_eps_study(&cfg, &out_dir, inv.seed, plots),
        "galerkin-check" => cmd_galerkin(&cfg, &out_dir, inv.seed),
        "lemma-a1" => cmd_lemma(&cfg, &out_dir),
        other => {
            eprintln!("unknown subcommand '{other}'\n{USAGE}");
            1
        }
    }
}

fn cmd_validate(cfg: &FullConfig) -> i32 {
    let params = ModelParams::new(cfg.params);
    let rep = params.validate();
    print!("{}", rep.render());
    if rep.all_pass() {
        println!("all assumptions satisfied");
        0
    } else {
        for c in rep.failed() {
            eprintln!("assumption {} violated: {}", c.id, c.detail);
        }
        1
    }
}

fn cmd_run(cfg: &FullConfig, out_dir: &Path, seed: u64, plots: bool) -> i32 {
    let rc = match cfg.to_run_config(seed) {
        Ok(rc) => rc,
        Err(e) => {
            eprintln!("{e}");
            return 1;
        }
    };
    match run(&rc) {
        Ok(out) => {
            if let Err(e) = write_run_outputs(out_dir, &out, plots) {
                eprintln!("{e}");
                return 2;
            }
            let last = out.records.last().unwrap();
            println!(
                "run finished at t = {}: energy = {}, mass_total = {}, phi in [{}, {}]",
                last.t, last.energy, last.mass_total, last.phi_min, last.phi_max
            );
            0
        }
        Err(e) => {
            eprintln!("{e}");
            exit_code_for(&e)
        }
    }
}

fn write_study_outputs(
    out_dir: &Path,
    report: &StudyReport,
    outputs: &[RunOutput],
    labels: &[String],
    plots: bool,
) -> crate::error::Result<()> {
    output::write_study_report(out_dir, report)?;
    for (out, label) in outputs.iter().zip(labels) {
        write_run_outputs(&out_dir.join(label), out, plots)?;
    }
    Ok(())
}

fn cmd_delta_study(cfg: &FullConfig, out_dir: &Path, seed: u64, plots: bool) -> i32 {
    let rc = match cfg.to_run_config(seed) {
        Ok(rc) => rc,
        Err(e) => {
            eprintln!("{e}");
            return 1;
        }
    };
    match studies::delta_continuation(&rc, &cfg.study.deltas) {
        Ok((report, outputs)) => {
            let labels: Vec<String> = cfg
                .study
                .deltas
                .iter()
                .map(|d| format!("delta_{d:e}"))
                .collect();
            if let Err(e) = write_study_outputs(out_dir, &report, &outputs, &labels, plots) {
                eprintln!("{e}");
                return 2;
            }
            print!("{}", report.verdicts_csv());
            study_exit(&report)
        }
        Err(e) => {
            eprintln!("{e}");
            exit_code_for(&e)
        }
    }
}

fn cmd_eps_study(cfg: &FullConfig, out_dir: &Path, seed: u64, plots: bool) -> i32 {
    let rc = match cfg.to_run_config(seed) {
        Ok(rc) => rc,
        Err(e) => {
            eprintln!("{e}");
            return 1;
        }
    };
    match studies::eps_continuation(&rc, &cfg.study.epsilons) {
        Ok((report, outputs)) => {
            let labels: Vec<String> = cfg
                .study
                .epsilons
                .iter()
                .map(|e| format!("eps_{e:e}"))
                .collect();
            if let Err(e) = write_study_outputs(out_dir, &report, &outputs, &labels, plots) {
                eprintln!("{e}");
                return 2;
            }
            print!("{}", report.verdicts_csv());
            study_exit(&report)
        }
        Err(e) => {
            eprintln!("{e}");
            exit_code_for(&e)
        }
    }
}

fn cmd_galerkin(cfg: &FullConfig, out_dir: &Path, seed: u64) -> i32 {
    let rc = match cfg.to_run_config(seed) {
        Ok(rc) => rc,
        Err(e) => {
            eprintln!("{e}");
            return 1;
        }
    };
    match studies::galerkin_energy_check(&rc, cfg.study.ode_tol, &cfg.study.modes) {
        Ok(report) => {
            if let Err(e) = output::write_study_report(out_dir, &report) {
                eprintln!("{e}");
                return 2;
            }
            print!("{}", report.verdicts_csv());
            study_exit(&report)
        }
        Err(e) => {
            eprintln!("{e}");
            exit_code_for(&e)
        }
    }
}

fn cmd_lemma(cfg: &FullConfig, out_dir: &Path) -> i32 {
    if cfg.study.lemma_cells < 4 || cfg.grid.lx <= 0.0 {
        eprintln!("lemma-a1 needs lemma_cells >= 4 and a positive lx");
        return 1;
    }
    let grid = crate::grid::Grid::new_1d(cfg.study.lemma_cells, cfg.grid.lx);
    let k = cfg.study.lemma_mode as f64;
    let f = Field::from_fn(grid, |x, _| {
        (k * std::f64::consts::PI * x / grid.len[0]).cos()
    });
    let g = Field::zeros(grid);
    let (k1, k2, k3) = (cfg.study.lemma_k1, cfg.study.lemma_k2, cfg.study.lemma_k3);
    let h = move |s: f64| if k3 == 0.0 { 0.0 } else { k3 * s.tanh() };
    match studies::lemma_a1_study(&f, &g, &h, k1, k2, k3, &cfg.study.lemma_deltas) {
        Ok(report) => {
            if let Err(e) = output::write_study_report(out_dir, &report) {
                eprintln!("{e}");
                return 2;
            }
            print!("{}", report.verdicts_csv());
            study_exit(&report)
        }
        Err(e) => {
            eprintln!("{e}");
            exit_code_for(&e)
        }
    }
}
