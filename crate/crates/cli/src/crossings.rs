use rayon::prelude::*;
use susyjc_core::hilbert::build_hamiltonian;
use susyjc_core::jc::{crossing_pair, dressed_state, Branch, DressedLabel, JcModel};
use susyjc_core::oracle::{find_crossings, CrossingMode, CrossingSearch};
use susyjc_core::{HilbertConfig, Model, ModelParams};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::Table;

pub const HEADER: [&str; 6] = ["branch", "M", "N", "lambda_closed", "lambda_numeric", "residual"];

const DEFAULT_MAX_N: usize = 5;

/// `(branch, M, N)` in output order: by `N`, then `M`, minus before plus.
fn pairs(max_n: usize) -> Vec<(Branch, usize, usize)> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for m in 0..n {
            out.push((Branch::Minus, m, n));
            if m > 0 {
                out.push((Branch::Plus, m, n));
            }
        }
    }
    out
}

/// Follows `(branch, M)` and `(-, N)` through a bracket around `closed` on
/// the oracle spectrum and returns the located exact crossing.
fn numeric_crossing(
    params: &ModelParams,
    cfg: HilbertConfig,
    branch: Branch,
    m: usize,
    n: usize,
    closed: f64,
) -> Result<Option<f64>, CliError> {
    let lo = 0.8 * closed;
    let hi = 1.2 * closed;
    let at_lo = params.with_lambda(lo);
    let left = dressed_state(&DressedLabel::new(branch, m, JcModel::Jc)?, &at_lo, cfg)?;
    let right = dressed_state(&DressedLabel::new(Branch::Minus, n, JcModel::Jc)?, &at_lo, cfg)?;
    let search = CrossingSearch {
        grid_points: 64,
        tracked_levels: cfg.dim(),
        ..CrossingSearch::default()
    };
    let found = find_crossings(
        |l| build_hamiltonian(cfg, &params.with_lambda(l), Model::Jc),
        &CrossingMode::Tracked(left.amplitudes, right.amplitudes),
        (lo, hi),
        &search,
    )?;
    Ok(found
        .iter()
        .filter(|c| c.exact)
        .map(|c| c.coupling)
        .min_by(|a, b| (a - closed).abs().total_cmp(&(b - closed).abs())))
}

/// `(branch, M, N, closed coupling, located coupling)`.
type Row = (Branch, usize, usize, f64, Option<f64>);

pub fn run(cfg: &RunConfig) -> Result<Table, CliError> {
    let max_n = cfg.max_n.unwrap_or(DEFAULT_MAX_N);
    if max_n == 0 {
        return Err(CliError::Usage("--max-n must be positive".into()));
    }
    let n_max = cfg
        .truncation(Some(4 * max_n + 20))?
        .ok_or_else(|| CliError::Usage("crossings needs a fixed --n-max".into()))?;
    if n_max < max_n + 1 {
        return Err(CliError::Usage(format!("--n-max must be at least {}", max_n + 1)));
    }
    let params = ModelParams::new(cfg.omega(), cfg.omega0(), 0.0, 0.0, cfg.theta())?;
    if params.omega <= 0.0 {
        return Err(CliError::Usage("crossings need omega > 0".into()));
    }
    let hilbert = HilbertConfig::new(n_max);
    let rows: Vec<Option<Row>> = pairs(max_n)
        .par_iter()
        .map(|&(branch, m, n)| match crossing_pair(m, n, branch, &params) {
            None => Ok(None),
            Some(rec) => {
                let numeric = numeric_crossing(&params, hilbert, branch, m, n, rec.coupling)?;
                Ok(Some((branch, m, n, rec.coupling, numeric)))
            }
        })
        .collect::<Result<_, CliError>>()?;

    let mut table = Table::new("crossings", &HEADER);
    table.meta("omega", params.omega);
    table.meta("omega0", params.omega0);
    table.meta("n_max", n_max);
    for (branch, m, n, closed, numeric) in rows.into_iter().flatten() {
        table.push(vec![
            branch.name().into(),
            m.into(),
            n.into(),
            closed.into(),
            numeric.into(),
            numeric.map(|x| (x - closed).abs()).into(),
        ]);
    }
    Ok(table)
}
