use susyjc_core::jc::{ground_state_critical, reduced_density, Branch, DressedLabel, JcModel, Subsystem};
use susyjc_core::wigner::{wigner_grid, WignerSource};
use susyjc_core::{HilbertConfig, ModelParams};

use crate::config::{BranchArg, Evaluator, ModelArg, RunConfig};
use crate::error::CliError;
use crate::output::Table;

pub const HEADER: [&str; 3] = ["re_alpha", "im_alpha", "w"];

fn fixed(value: Option<crate::config::Sweep>, name: &str, default: f64) -> Result<f64, CliError> {
    match value {
        Some(s) if s.is_sweep() => Err(CliError::Usage(format!("--{name} must be a single value here"))),
        Some(s) => Ok(s.value()),
        None => Ok(default),
    }
}

pub fn run(cfg: &RunConfig) -> Result<Table, CliError> {
    let model = match cfg.model.unwrap_or(ModelArg::Jc) {
        ModelArg::Jc => JcModel::Jc,
        ModelArg::Ajc => JcModel::AntiJc,
        other => return Err(CliError::Usage(format!("wigner supports jc and ajc, not {other:?}"))),
    };
    let branch = match cfg.branch.unwrap_or(BranchArg::Minus) {
        BranchArg::Minus => Branch::Minus,
        BranchArg::Plus => Branch::Plus,
    };
    let n = cfg.n.unwrap_or(0);
    let label = DressedLabel::new(branch, n, model).map_err(|e| CliError::Usage(e.to_string()))?;
    let base = ModelParams::new(cfg.omega(), cfg.omega0(), 0.0, 0.0, cfg.theta())?;
    let coupling = if cfg.critical.unwrap_or(false) {
        if cfg.lambda.is_some() || cfg.mu.is_some() {
            return Err(CliError::Usage("--critical sets the coupling; drop --lambda/--mu".into()));
        }
        ground_state_critical(n.max(1), &base)?
    } else {
        match model {
            JcModel::Jc => fixed(cfg.lambda, "lambda", 1.0)?,
            JcModel::AntiJc => fixed(cfg.mu, "mu", 1.0)?,
        }
    };
    let params = match model {
        JcModel::Jc => base.with_lambda(coupling),
        JcModel::AntiJc => base.with_mu(coupling),
    };
    let window = cfg.window.unwrap_or(4.0);
    let points = cfg.points.unwrap_or(81);
    let evaluator = cfg.evaluator.unwrap_or(Evaluator::Closed);
    let grid = match evaluator {
        Evaluator::Closed => wigner_grid(&WignerSource::ClosedJc { label, params }, window, points)?,
        Evaluator::Numeric => {
            let n_max = cfg.truncation(Some(n + 1))?.ok_or_else(|| CliError::Usage("wigner needs a fixed --n-max".into()))?;
            let rho = reduced_density(&label, &params, Subsystem::Boson, HilbertConfig::new(n_max))?;
            wigner_grid(&WignerSource::Numeric(&rho), window, points)?
        }
    };

    let mut table = Table::new("wigner", &HEADER);
    table.meta("model", if model == JcModel::Jc { "jc" } else { "ajc" });
    table.meta("branch", branch.name());
    table.meta("N", n);
    table.meta("coupling", coupling);
    table.meta("evaluator", if evaluator == Evaluator::Closed { "closed" } else { "numeric" });
    table.meta("normalization_integral", grid.normalization_integral);
    for (i, re) in grid.re_alpha.iter().enumerate() {
        for (j, im) in grid.im_alpha.iter().enumerate() {
            table.push(vec![(*re).into(), (*im).into(), grid.values[(i, j)].into()]);
        }
    }
    Ok(table)
}
