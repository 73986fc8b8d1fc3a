use std::path::PathBuf;

use serde::Deserialize;

use crossgreen_core::Manifold;

use crate::{
    Command, DiagnoseArgs, EnergyArgs, Format, KernelArgs, ManifoldArgs, RadialArgs, SolveArgs,
    TableArgs, VerifyArgs,
};
use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Solve,
    Energy,
    Diagnose,
    KernelTable,
    KernelVerify,
    RadialTable,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub kind: String,
    #[serde(default)]
    pub s: Option<f64>,
}

impl Default for KernelSpec {
    fn default() -> Self {
        KernelSpec {
            kind: "green".into(),
            s: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub max_iters: Option<usize>,
    pub grad_tol: Option<f64>,
    pub initial_step: Option<f64>,
    pub min_step: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    pub out: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

/// A single command described as JSON, e.g.
///
/// ```json
/// {"command": "solve", "manifold": {"family": "S", "n": 2},
///  "kernel": {"kind": "green"}, "N": 100, "seed": 42, "starts": 8,
///  "outputs": {"out": "points.json", "trace": "trace.csv"}}
/// ```
///
/// Paths are taken relative to the working directory.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandName,
    #[serde(default)]
    pub manifold: Option<Manifold>,
    #[serde(default)]
    pub kernel: KernelSpec,
    #[serde(rename = "N", default)]
    pub n_points: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub starts: Option<usize>,
    #[serde(default)]
    pub perturb: bool,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub outputs: Outputs,
    /// Input configuration for `energy` and `diagnose`.
    #[serde(default)]
    pub config: Option<PathBuf>,
    #[serde(default)]
    pub points: Option<usize>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub potential_points: Option<usize>,
    #[serde(default)]
    pub format: Option<Format>,
}

fn missing(field: &str, cmd: CommandName) -> CliError {
    CliError::Validation(format!("run config field `{field}` is required for {cmd:?}"))
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn into_command(self) -> CliResult<Command> {
        let cmd = self.command;
        let manifold = || {
            self.manifold
                .map(|m| ManifoldArgs {
                    family: m.family(),
                    n: m.param(),
                })
                .ok_or_else(|| missing("manifold", cmd))
        };
        let kernel = KernelArgs {
            kernel: self.kernel.kind.clone(),
            s: self.kernel.s,
        };
        let seed = || self.seed.ok_or_else(|| missing("seed", cmd));
        let config = || self.config.clone().ok_or_else(|| missing("config", cmd));
        let format = self.format.unwrap_or(Format::Csv);
        let t = &self.tolerances;
        Ok(match cmd {
            CommandName::Solve => Command::Solve(SolveArgs {
                manifold: manifold()?,
                points: self.n_points.ok_or_else(|| missing("N", cmd))?,
                kernel,
                seed: seed()?,
                starts: self.starts.unwrap_or(8),
                max_iters: t.max_iters.unwrap_or(5000),
                grad_tol: t.grad_tol.unwrap_or(1e-8),
                initial_step: t.initial_step.unwrap_or(0.1),
                min_step: t.min_step.unwrap_or(1e-14),
                perturb: self.perturb,
                out: self.outputs.out.clone().unwrap_or_else(|| "points.json".into()),
                trace: self.outputs.trace.clone(),
                report: self.outputs.report.clone(),
            }),
            CommandName::Energy => Command::Energy(EnergyArgs {
                config: config()?,
                kernel,
                out: self.outputs.out.clone(),
            }),
            CommandName::Diagnose => Command::Diagnose(DiagnoseArgs {
                config: config()?,
                kernel,
                trials: self.trials.unwrap_or(10_000),
                samples: self.samples.unwrap_or(100_000),
                potential_points: self.potential_points.unwrap_or(3),
                seed: seed()?,
                out: self.outputs.out.clone(),
            }),
            CommandName::KernelTable => Command::KernelTable(TableArgs {
                manifold: manifold()?,
                kernel,
                points: self.points.unwrap_or(512),
                format,
                out: self.outputs.out.clone(),
            }),
            CommandName::KernelVerify => Command::KernelVerify(VerifyArgs {
                manifold: manifold()?,
            }),
            CommandName::RadialTable => Command::RadialTable(RadialArgs {
                manifold: manifold()?,
                points: self.points.unwrap_or(512),
                format,
                out: self.outputs.out.clone(),
            }),
        })
    }
}
