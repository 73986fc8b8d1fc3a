use serde::Serialize;

use crossgreen_core::diagnostics::diagnose;
use crossgreen_core::energy::energy;
use crossgreen_core::io::{
    configuration_from_json, configuration_to_json, fmt_f64, kernel_table_csv, radial_table_csv,
    to_json, trace_csv,
};
use crossgreen_core::kernel::{verify_kernel, KernelTableRow};
use crossgreen_core::optimize::multi_start;
use crossgreen_core::radial::RadialTableRow;
use crossgreen_core::{
    Configuration, DiagnoseOptions, KernelEvaluator, KernelKind, Manifold, OptimizeOptions,
    QuadratureSpec, RadialGeometry, StopReason,
};

use crate::output::{emit, read_file, write_atomic};
use crate::{
    CliError, CliResult, Command, DiagnoseArgs, EnergyArgs, Format, RadialArgs, SolveArgs,
    TableArgs, VerifyArgs,
};

pub fn dispatch(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Solve(a) => solve(&a),
        Command::Energy(a) => energy_cmd(&a),
        Command::Diagnose(a) => diagnose_cmd(&a),
        Command::KernelTable(a) => kernel_table(&a),
        Command::KernelVerify(a) => kernel_verify(&a),
        Command::RadialTable(a) => radial_table(&a),
        Command::RunConfig(a) => {
            let text = read_file(&a.config)?;
            let rc = crate::RunConfig::from_json(&text)
                .map_err(|e| CliError::Validation(format!("{}: {e}", a.config.display())))?;
            dispatch(rc.into_command()?)
        }
    }
}

fn kernel(kind: KernelKind, m: Manifold) -> CliResult<KernelEvaluator> {
    Ok(KernelEvaluator::new(kind, m, &QuadratureSpec::default())?)
}

fn load_config(path: &std::path::Path) -> CliResult<Configuration> {
    let text = read_file(path)?;
    configuration_from_json(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct SolveReport {
    manifold: Manifold,
    kernel: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<f64>,
    #[serde(rename = "N")]
    n: usize,
    energy: f64,
    scaled_energy: f64,
    min_pair_distance: f64,
    grad_norm: f64,
    iterations: usize,
    converged: bool,
    stop: StopReason,
    degenerate_pair_events: usize,
    seed: u64,
    starts: usize,
}

fn solve(a: &SolveArgs) -> CliResult<()> {
    let m = a.manifold.manifold()?;
    let kind = a.kernel.kind()?;
    let eval = kernel(kind, m)?;
    let opts = OptimizeOptions {
        max_iters: a.max_iters,
        grad_tol: a.grad_tol,
        initial_step: a.initial_step,
        min_step: a.min_step,
        starts: a.starts,
        seed: a.seed,
        record_trace: a.trace.is_some(),
        perturb: a.perturb,
        ..OptimizeOptions::default()
    };
    let best = multi_start(m, a.points, &eval, &opts)?;
    let final_energy = energy(&best.config, &eval)?;
    let report = SolveReport {
        manifold: m,
        kernel: kind.name(),
        s: match kind {
            KernelKind::Riesz(s) => Some(s),
            _ => None,
        },
        n: a.points,
        energy: best.energy,
        scaled_energy: final_energy.scaled,
        min_pair_distance: final_energy.min_pair_distance,
        grad_norm: best.grad_norm,
        iterations: best.iterations,
        converged: best.converged,
        stop: best.stop,
        degenerate_pair_events: best.degenerate_pair_events,
        seed: a.seed,
        starts: a.starts,
    };
    write_atomic(&a.out, &configuration_to_json(&best.config)?)?;
    if let Some(path) = &a.trace {
        write_atomic(path, &trace_csv(best.trace.as_deref().unwrap_or_default()))?;
    }
    let text = to_json(&report)?;
    if let Some(path) = &a.report {
        write_atomic(path, &text)?;
    }
    print!("{text}");
    Ok(())
}

fn energy_cmd(a: &EnergyArgs) -> CliResult<()> {
    let config = load_config(&a.config)?;
    let eval = kernel(a.kernel.kind()?, config.manifold())?;
    let text = to_json(&energy(&config, &eval)?)?;
    if let Some(path) = &a.out {
        write_atomic(path, &text)?;
    }
    print!("{text}");
    Ok(())
}

fn diagnose_cmd(a: &DiagnoseArgs) -> CliResult<()> {
    let config = load_config(&a.config)?;
    let eval = kernel(a.kernel.kind()?, config.manifold())?;
    let opts = DiagnoseOptions {
        potential_points: a.potential_points,
        potential_samples: a.samples,
        trials: a.trials,
        seed: a.seed,
    };
    let text = to_json(&diagnose(&config, &eval, &opts)?)?;
    if let Some(path) = &a.out {
        write_atomic(path, &text)?;
    }
    print!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct KernelTable<'a> {
    manifold: Manifold,
    kernel: &'static str,
    rows: &'a [KernelTableRow],
}

#[derive(Serialize)]
struct RadialTable<'a> {
    manifold: Manifold,
    rows: &'a [RadialTableRow],
}

fn kernel_table(a: &TableArgs) -> CliResult<()> {
    let m = a.manifold.manifold()?;
    let kind = a.kernel.kind()?;
    let rows = kernel(kind, m)?.table(a.points)?;
    let text = match a.format {
        Format::Csv => kernel_table_csv(&rows),
        Format::Json => to_json(&KernelTable {
            manifold: m,
            kernel: kind.name(),
            rows: &rows,
        })?,
    };
    emit(a.out.as_deref(), &text)
}

fn radial_table(a: &RadialArgs) -> CliResult<()> {
    let m = a.manifold.manifold()?;
    let rows = RadialGeometry::new(m).table(a.points)?;
    let text = match a.format {
        Format::Csv => radial_table_csv(&rows),
        Format::Json => to_json(&RadialTable { manifold: m, rows: &rows })?,
    };
    emit(a.out.as_deref(), &text)
}

fn kernel_verify(a: &VerifyArgs) -> CliResult<()> {
    let m = a.manifold.manifold()?;
    let checks = verify_kernel(m, &QuadratureSpec::default())?;
    let mut failed = 0;
    for c in &checks {
        let status = if c.passed() { "ok" } else { "FAIL" };
        println!(
            "{m} {}: max deviation {} tolerance {} {status}",
            c.name,
            fmt_f64(c.max_deviation),
            fmt_f64(c.tolerance)
        );
        failed += usize::from(!c.passed());
    }
    if failed > 0 {
        return Err(CliError::Numerical(format!(
            "{failed} of {} kernel checks failed",
            checks.len()
        )));
    }
    Ok(())
}
