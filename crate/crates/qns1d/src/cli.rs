//! Command-line surface. Exit codes: 0 success, 1 usage/config error,
//! 2 numerical failure (positivity loss, failed sweep member).

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::config::parse_config;
use crate::diagnostics::diagnose_trajectory;
use crate::error::{Error, Result};
use crate::experiments::{cross_check, decay_study, limit_study};
use crate::fd::{bohm_residual, ScalarField};
use crate::integrator::{advance, initial_data, Formulation};
use crate::output::{write_diagnostics_csv, write_snapshot_json, RunManifest};
use crate::state::Grid;

const USAGE: &str = "\
usage: qns1d <command> <config> [options]

commands:
  simulate <config>                        run and write diagnostics CSV + final-state JSON
  study-limit <config>                     eps -> 0 sweep, rate fits to CSV + JSON summary
  cross-check <config> --formulations=a,b  compare formulations on one problem
  check-identities <config>                Bohm-identity refinement table + coercivity sweep
  decay <config> --times=t1,t2,...         decay norms at sample times

config files are key=value lines; see README for the key list.";

fn classify(err: &Error) -> i32 {
    match err {
        Error::State { .. } | Error::Domain(_) => 2,
        Error::Study { source, .. } => classify(source),
        _ => 1,
    }
}

/// Output path `<config stem>.<suffix>` next to the config file.
fn sibling(config: &Path, suffix: &str) -> PathBuf {
    let stem = config
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into());
    config.with_file_name(format!("{stem}.{suffix}"))
}

fn run_simulate(config_path: &Path) -> Result<()> {
    let started = Instant::now();
    let text = std::fs::read_to_string(config_path).unwrap_or_default();
    let cfg = parse_config(config_path)?.as_sim()?.clone();
    let grid = cfg.grid();

    let trajectory = advance(&cfg)?;
    let records = diagnose_trajectory(&trajectory, &cfg.params, &grid)?;

    let csv_path = sibling(config_path, "diagnostics.csv");
    write_diagnostics_csv(&records, &csv_path)?;
    let final_path = sibling(config_path, "final.json");
    write_snapshot_json(
        trajectory.final_time(),
        trajectory.final_state(),
        cfg.half_width,
        cfg.n_cells,
        &final_path,
    )?;

    let mut manifest = RunManifest::new("simulate", config_path, text);
    manifest.wall_seconds = started.elapsed().as_secs_f64();
    manifest.warnings = trajectory.warnings.clone();
    manifest.outputs = vec![csv_path.clone(), final_path.clone()];
    manifest.write(&sibling(config_path, "manifest.json"))?;

    println!(
        "simulate: {} steps to t = {}, v_min = {:.6}, wrote {} and {}",
        trajectory.step_count,
        trajectory.final_time(),
        trajectory.v_min_overall,
        csv_path.display(),
        final_path.display()
    );
    for w in &trajectory.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn run_study_limit(config_path: &Path) -> Result<()> {
    let started = Instant::now();
    let text = std::fs::read_to_string(config_path).unwrap_or_default();
    let cfg = parse_config(config_path)?.as_limit_study()?.clone();
    let study = limit_study(&cfg)?;

    let csv_path = sibling(config_path, "limit.csv");
    let mut csv = String::from("eps,k,error\n");
    for p in &study.points {
        csv.push_str(&format!("{},{},{}\n", p.eps, p.k, p.error));
    }
    std::fs::write(&csv_path, csv)?;

    let json_path = sibling(config_path, "limit.json");
    std::fs::write(
        &json_path,
        serde_json::to_string_pretty(&study).expect("serializable"),
    )?;

    let mut manifest = RunManifest::new("study-limit", config_path, text);
    manifest.wall_seconds = started.elapsed().as_secs_f64();
    if !study.resolution_ok {
        manifest.warnings.push(format!(
            "smallest-eps error does not dominate the discretization gap {:.3e}; \
             increase N before trusting the fitted rate",
            study.discretization_gap
        ));
    }
    manifest.outputs = vec![csv_path.clone(), json_path.clone()];
    manifest.write(&sibling(config_path, "manifest.json"))?;

    for (k, fit) in &study.fits {
        match fit {
            Some(f) => println!(
                "k = {k}: slope = {:.4}, residual = {:.3e}",
                f.slope, f.residual
            ),
            None => println!("k = {k}: fit rejected (zero errors)"),
        }
    }
    println!(
        "discretization gap = {:.3e}, resolution_ok = {}",
        study.discretization_gap, study.resolution_ok
    );
    for w in &manifest.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn parse_formulations(spec: &str) -> Result<Vec<Formulation>> {
    spec.split(',').map(|p| p.trim().parse()).collect()
}

fn run_cross_check(config_path: &Path, formulations: &str) -> Result<()> {
    let started = Instant::now();
    let text = std::fs::read_to_string(config_path).unwrap_or_default();
    let cfg = parse_config(config_path)?.as_sim()?.clone();
    let fs = parse_formulations(formulations)?;
    let report = cross_check(&cfg, &fs)?;

    let json_path = sibling(config_path, "crosscheck.json");
    std::fs::write(
        &json_path,
        serde_json::to_string_pretty(&report).expect("serializable"),
    )?;

    let mut manifest = RunManifest::new("cross-check", config_path, text);
    manifest.wall_seconds = started.elapsed().as_secs_f64();
    manifest.outputs = vec![json_path.clone()];
    manifest.write(&sibling(config_path, "manifest.json"))?;

    for p in &report.pairs {
        println!(
            "{} vs {}: discrepancy {:.6e} at N, {:.6e} at 2N (ratio {:.2})",
            p.left, p.right, p.discrepancy, p.discrepancy_refined, p.refinement_ratio
        );
    }
    Ok(())
}

fn run_check_identities(config_path: &Path) -> Result<()> {
    let cfg = parse_config(config_path)?.as_sim()?.clone();

    println!("Bohm identity residual on the initial-data density rho = 1/v0:");
    println!("{:>8}  {:>14}  {:>8}", "N", "residual", "ratio");
    let mut prev: Option<f64> = None;
    for n in [256usize, 512, 1024, 2048] {
        let grid = Grid::new(cfg.half_width, n)?;
        let s0 = initial_data(&cfg.initial, &grid)?;
        let rho = ScalarField::new(s0.v.iter().map(|&v| 1.0 / v).collect(), 1.0);
        let r = bohm_residual(&rho, &grid)?;
        match prev {
            Some(p) if r > 0.0 => println!("{n:>8}  {r:>14.6e}  {:>8.2}", p / r),
            _ => println!("{n:>8}  {r:>14.6e}  {:>8}", "-"),
        }
        prev = Some(r);
    }

    println!("\ncoercivity inequality on v0 (lhs >= rhs expected):");
    let grid = cfg.grid();
    let s0 = initial_data(&cfg.initial, &grid)?;
    let f = s0.v_field();
    for a in [2.0, 3.0, 4.0] {
        let (lhs, rhs) = crate::diagnostics::germain_lefloch(&f, a, &grid)?;
        let ok = lhs >= rhs - 1e-10 * (1.0 + lhs);
        println!("a = {a}: lhs = {lhs:.6e}, rhs = {rhs:.6e}, holds = {ok}");
    }
    Ok(())
}

fn run_decay(config_path: &Path, times: &str) -> Result<()> {
    let cfg = parse_config(config_path)?.as_sim()?.clone();
    let sample_times: Vec<f64> = times
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Argument(format!("bad time '{p}'")))
        })
        .collect::<Result<_>>()?;
    let series = decay_study(&cfg, &sample_times)?;
    println!("{:>10}  {:>14}  {:>14}", "t", "sup_norm", "grad_norm");
    for &(t, sup, grad) in &series.samples {
        println!("{t:>10}  {sup:>14.6e}  {grad:>14.6e}");
    }
    if !series.non_monotone_at.is_empty() {
        eprintln!(
            "warning: sup norm grew at t = {:?}",
            series.non_monotone_at
        );
    }
    Ok(())
}

fn flag_value<'a>(args: &'a [String], name: &str) -> Option<&'a str> {
    let prefix = format!("--{name}=");
    args.iter().find_map(|a| a.strip_prefix(&prefix))
}

/// Dispatch argv (without the binary name) and return the process exit code.
pub fn cli_dispatch(args: &[String]) -> i32 {
    let Some(command) = args.first() else {
        eprintln!("{USAGE}");
        return 1;
    };
    let Some(config) = args.get(1).map(Path::new) else {
        eprintln!("missing <config> argument\n\n{USAGE}");
        return 1;
    };
    let result = match command.as_str() {
        "simulate" => run_simulate(config),
        "study-limit" => run_study_limit(config),
        "cross-check" => {
            let Some(fs) = flag_value(args, "formulations") else {
                eprintln!("cross-check needs --formulations=a,b\n\n{USAGE}");
                return 1;
            };
            run_cross_check(config, fs)
        }
        "check-identities" => run_check_identities(config),
        "decay" => {
            let Some(times) = flag_value(args, "times") else {
                eprintln!("decay needs --times=t1,t2,...\n\n{USAGE}");
                return 1;
            };
            run_decay(config, times)
        }
        other => {
            eprintln!("unknown command '{other}'\n\n{USAGE}");
            return 1;
        }
    };
    match result {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            classify(&err)
        }
    }
}
