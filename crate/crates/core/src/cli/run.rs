use rayon::prelude::*;

use super::csv::{format_number, CsvTable};
use super::{parse_args, CliError, Command, RunConfig};
use crate::analysis::{bloch_siegert_proxy_scan, infidelity_scan, state_fidelity, ScanResult};
use crate::error::Result as CoreResult;
use crate::linalg::Complex2Vector;
use crate::propagator::{propagate_full, uniform_grid};
use crate::strong_coupling::{
    approx_solution, default_bessel_terms, phase_integral_bessel, phase_integral_quadrature,
    picard_iterate, PhaseSign,
};

const STATE_COLUMNS: [&str; 6] = [
    "t",
    "re_psi0",
    "im_psi0",
    "re_psi1",
    "im_psi1",
    "pop_excited",
];

fn state_row(t: f64, psi: &Complex2Vector) -> Vec<f64> {
    vec![
        t,
        psi.c0.re,
        psi.c0.im,
        psi.c1.re,
        psi.c1.im,
        psi.c1.norm_sqr(),
    ]
}

/// Runs one command, writes its CSV to `cfg.out` and returns the summary line.
pub fn run(cfg: &RunConfig) -> Result<String, CliError> {
    let (csv, summary) = match cfg.command {
        Command::Simulate => simulate(cfg)?,
        Command::Approx => approx(cfg)?,
        Command::Compare => compare(cfg)?,
        Command::ScanDelta => {
            let amps = cfg.initial.frame_amplitudes();
            let scan = infidelity_scan(
                &cfg.params,
                &cfg.deltas,
                cfg.horizon,
                cfg.samples,
                cfg.quad_tol,
                &amps,
            )?;
            return finish_scan(cfg, &scan);
        }
        Command::ScanRwa => {
            let scan = bloch_siegert_proxy_scan(&cfg.params, &cfg.omegas, cfg.horizon)?;
            return finish_scan(cfg, &scan);
        }
        Command::PhaseIntegral => phase_table(cfg)?,
    };
    write_output(cfg, &csv)?;
    Ok(summary)
}

fn write_output(cfg: &RunConfig, csv: &str) -> Result<(), CliError> {
    std::fs::write(&cfg.out, csv).map_err(|source| CliError::Io {
        path: cfg.out.clone(),
        source,
    })
}

fn simulate(cfg: &RunConfig) -> Result<(String, String), CliError> {
    let grid = uniform_grid(cfg.horizon, cfg.samples);
    let traj = propagate_full(
        &cfg.params,
        &cfg.initial.lab_state(),
        &grid,
        &cfg.integrator(),
    )?;
    let mut header = STATE_COLUMNS.to_vec();
    header.push("norm");
    let mut table = CsvTable::new(&header);
    for (&t, psi) in traj.times.iter().zip(&traj.states) {
        let mut row = state_row(t, psi);
        row.push(psi.norm());
        table.row(&row);
    }
    let drift = (traj.final_state().norm() - 1.0).abs();
    let summary = format!(
        "simulate: {} samples to t = {}, final norm drift {}",
        grid.len(),
        cfg.horizon,
        format_number(drift)
    );
    Ok((table.into_string(), summary))
}

/// Approximate lab-frame states on the output grid.
fn approximate_states(cfg: &RunConfig, grid: &[f64]) -> CoreResult<Vec<Complex2Vector>> {
    let amps = cfg.initial.frame_amplitudes();
    if cfg.order == 1 {
        grid.par_iter()
            .map(|&t| approx_solution(t, &amps, &cfg.params, cfg.quad_tol))
            .collect()
    } else {
        let sol = picard_iterate(&cfg.params, &amps, cfg.order, cfg.quad_tol)?;
        grid.par_iter().map(|&t| sol.lab_state(t)).collect()
    }
}

fn approx(cfg: &RunConfig) -> Result<(String, String), CliError> {
    let grid = uniform_grid(cfg.horizon, cfg.samples);
    let states = approximate_states(cfg, &grid)?;
    let mut header = STATE_COLUMNS.to_vec();
    header.push("norm");
    let mut table = CsvTable::new(&header);
    let mut worst: f64 = 0.0;
    for (&t, psi) in grid.iter().zip(&states) {
        let mut row = state_row(t, psi);
        row.push(psi.norm());
        worst = worst.max((psi.norm() - 1.0).abs());
        table.row(&row);
    }
    let summary = format!(
        "approx: order {}, {} samples to t = {}, max norm deviation {}",
        cfg.order,
        grid.len(),
        cfg.horizon,
        format_number(worst)
    );
    Ok((table.into_string(), summary))
}

fn compare(cfg: &RunConfig) -> Result<(String, String), CliError> {
    let grid = uniform_grid(cfg.horizon, cfg.samples);
    let exact = propagate_full(
        &cfg.params,
        &cfg.initial.lab_state(),
        &grid,
        &cfg.integrator(),
    )?;
    let states = approximate_states(cfg, &grid)?;
    let mut header = STATE_COLUMNS.to_vec();
    header.extend(["fidelity_vs_exact", "norm"]);
    let mut table = CsvTable::new(&header);
    let mut worst: f64 = 0.0;
    for ((&t, psi), reference) in grid.iter().zip(&states).zip(&exact.states) {
        let f = state_fidelity(reference, psi)?;
        worst = worst.max(1.0 - f);
        let mut row = state_row(t, psi);
        row.extend([f, psi.norm()]);
        table.row(&row);
    }
    let summary = format!(
        "compare: order {}, max infidelity {}, exact final norm drift {}",
        cfg.order,
        format_number(worst.max(0.0)),
        format_number((exact.final_state().norm() - 1.0).abs())
    );
    Ok((table.into_string(), summary))
}

fn phase_table(cfg: &RunConfig) -> Result<(String, String), CliError> {
    let p = &cfg.params;
    let grid = uniform_grid(cfg.horizon, cfg.samples);
    let n_terms = default_bessel_terms(p);
    let rows = grid
        .par_iter()
        .map(|&t| {
            [PhaseSign::Plus, PhaseSign::Minus]
                .into_iter()
                .map(|sign| {
                    let q = phase_integral_quadrature(t, sign, p, cfg.quad_tol)?;
                    let b = phase_integral_bessel(t, sign, p, n_terms)?;
                    Ok(vec![
                        t,
                        sign.value(),
                        q.value.re,
                        q.value.im,
                        q.err_estimate,
                        b.value.re,
                        b.value.im,
                        b.err_estimate,
                        (q.value - b.value).norm(),
                    ])
                })
                .collect::<CoreResult<Vec<_>>>()
        })
        .collect::<CoreResult<Vec<_>>>()?;
    let mut table = CsvTable::new(&[
        "t",
        "sign",
        "re_quadrature",
        "im_quadrature",
        "err_quadrature",
        "re_bessel",
        "im_bessel",
        "err_bessel",
        "discrepancy",
    ]);
    let mut worst: f64 = 0.0;
    for row in rows.iter().flatten() {
        worst = worst.max(row[8]);
        table.row(row);
    }
    let summary = format!(
        "phase-integral: {} times, {} Bessel orders, max discrepancy {}",
        grid.len(),
        n_terms,
        format_number(worst)
    );
    Ok((table.into_string(), summary))
}

fn finish_scan(cfg: &RunConfig, scan: &ScanResult) -> Result<String, CliError> {
    let mut table = CsvTable::new(&["axis", "metric", "delta", "g", "omega", "horizon"]);
    for ((&x, m), p) in scan.axis.iter().zip(&scan.metric).zip(&scan.point_params) {
        table.row(&[
            x,
            m.unwrap_or(f64::NAN),
            p.delta(),
            p.g(),
            p.omega(),
            scan.horizon,
        ]);
    }
    write_output(cfg, &table.into_string())?;
    let worst = scan
        .max_metric()
        .map_or_else(|| "NaN".to_string(), format_number);
    let summary = format!(
        "{}: {} points over {}, largest {} {}",
        cfg.command.name(),
        scan.axis.len(),
        scan.axis_name,
        scan.metric_name,
        worst
    );
    if scan.failures.is_empty() {
        Ok(summary)
    } else {
        let details: Vec<String> = scan
            .failures
            .iter()
            .map(|f| format!("{} = {}: {}", scan.axis_name, f.axis, f.message))
            .collect();
        Err(CliError::PartialFailure(format!(
            "{summary}; {} point(s) failed: {}",
            scan.failures.len(),
            details.join("; ")
        )))
    }
}

/// Parses `argv`, runs the command and reports to stdout/stderr.
/// Returns the process exit code.
pub fn execute<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let outcome = parse_args(argv).and_then(|cfg| run(&cfg));
    match outcome {
        Ok(summary) => {
            println!("{summary}");
            super::EXIT_OK
        }
        Err(CliError::Info(text)) => {
            print!("{text}");
            super::EXIT_OK
        }
        Err(e) => {
            eprintln!("strongdrive: {e}");
            e.exit_code()
        }
    }
}
