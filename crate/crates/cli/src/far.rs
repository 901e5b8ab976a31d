use rayon::prelude::*;
use susyjc_core::far::{constraint_check, factorization_residual, far_hamiltonian, far_spectrum_shape, SHAPE_TOL};
use susyjc_core::oracle::{certify_truncation, Schedule};
use susyjc_core::HilbertConfig;

use crate::config::{RunConfig, Sweep};
use crate::error::CliError;
use crate::output::Table;
use crate::spectrum::{far_point, self_consistent};

pub const HEADER: [&str; 17] = [
    "sweep_value",
    "omega",
    "omega0",
    "lambda",
    "mu",
    "omega_c",
    "detuning_residual",
    "exceptional_residual",
    "factorization_residual",
    "ground_energy",
    "spacing",
    "degeneracies",
    "has_unique_ground",
    "is_doubly_degenerate",
    "is_equidistant",
    "spacing_variation",
    "max_cluster_spread",
];

pub fn run(cfg: &RunConfig) -> Result<Table, CliError> {
    if cfg.truncation(None)?.is_some() {
        return Err(CliError::Usage("far certifies its own truncation; drop --n-max".into()));
    }
    let levels = cfg.levels.unwrap_or(11);
    if levels < 3 {
        return Err(CliError::Usage("--levels must be at least 3 to measure a spacing".into()));
    }
    let consistent = self_consistent(cfg)?;
    let mut axes = vec![("alpha0", cfg.alpha0.unwrap_or(Sweep::fixed(0.01))), ("alphaR", cfg.alpha_r.unwrap_or(Sweep::fixed(1.0)))];
    if !consistent {
        axes.push(("alphaQ", cfg.alpha_q.unwrap_or(Sweep::fixed(1.0))));
    }
    let swept: Vec<&(&str, Sweep)> = axes.iter().filter(|(_, s)| s.is_sweep()).collect();
    if swept.len() > 1 {
        return Err(CliError::Usage("at most one parameter can be swept".into()));
    }
    let (axis, sweep) = swept.first().map_or(("alphaR", axes[1].1), |(n, s)| (*n, *s));
    let value = |name: &str, x: f64| -> f64 {
        if name == axis {
            x
        } else {
            axes.iter().find(|(n, _)| *n == name).map_or(0.0, |(_, s)| s.value())
        }
    };

    let rows: Vec<Vec<crate::output::Cell>> = sweep
        .values()
        .par_iter()
        .map(|&x| {
            let alpha_q = if consistent { None } else { Some(value("alphaQ", x)) };
            let fp = far_point(value("alpha0", x), alpha_q, value("alphaR", x))?;
            let sol = certify_truncation(|c| far_hamiltonian(c, &fp), levels, cfg.tol(), Schedule::default())?;
            let shape = far_spectrum_shape(&sol, SHAPE_TOL)?;
            let scale = cfg.energy_scale(fp.omega0)?;
            let constraints = constraint_check(&fp);
            let degeneracies: Vec<String> = shape.degeneracies.iter().map(|d| d.to_string()).collect();
            Ok(vec![
                x.into(),
                fp.omega.into(),
                fp.omega0.into(),
                fp.lambda.into(),
                fp.mu.into(),
                fp.omega_c.into(),
                constraints.detuning_residual.into(),
                constraints.exceptional_residual.into(),
                factorization_residual(HilbertConfig::new(sol.n_max_used), &fp).into(),
                (shape.ground_energy / scale).into(),
                (shape.spacing / scale).into(),
                degeneracies.join(";").into(),
                shape.has_unique_ground.into(),
                shape.is_doubly_degenerate.into(),
                shape.is_equidistant.into(),
                shape.spacing_variation.into(),
                shape.max_cluster_spread.into(),
            ])
        })
        .collect::<Result<_, CliError>>()?;

    let mut table = Table::new("far", &HEADER);
    table.meta("sweep_axis", axis);
    table.meta("self_consistent", consistent);
    table.meta("units", format!("{:?}", cfg.units()).to_lowercase());
    for row in rows {
        table.push(row);
    }
    Ok(table)
}
