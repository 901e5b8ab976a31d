use rayon::prelude::*;
use susyjc_core::far::{far_from_alphas, far_hamiltonian, self_consistent_family, FarParams};
use susyjc_core::hilbert::build_hamiltonian;
use susyjc_core::jc::{closed_form_levels, DressedLabel, JcModel};
use susyjc_core::oracle::{certify_truncation, diagonalize, EigenSolution, Schedule};
use susyjc_core::{HilbertConfig, Model, ModelParams, OperatorMatrix, C64};

use crate::config::{ModelArg, RunConfig, Sweep};
use crate::error::CliError;
use crate::output::Table;

pub const HEADER: [&str; 7] = [
    "sweep_value",
    "level_index",
    "energy",
    "label_branch",
    "label_N",
    "closed_form_energy",
    "residual",
];

const DEFAULT_LEVELS: usize = 11;

/// Which parameter the sweep runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Axis {
    Lambda,
    Mu,
    Alpha0,
    AlphaQ,
    AlphaR,
}

impl Axis {
    fn name(self) -> &'static str {
        match self {
            Axis::Lambda => "lambda",
            Axis::Mu => "mu",
            Axis::Alpha0 => "alpha0",
            Axis::AlphaQ => "alphaQ",
            Axis::AlphaR => "alphaR",
        }
    }
}

/// Physical point of the sweep.
enum Point {
    Params(ModelParams, Model),
    Far(FarParams),
}

impl Point {
    fn omega0(&self) -> f64 {
        match self {
            Point::Params(p, _) => p.omega0,
            Point::Far(fp) => fp.omega0,
        }
    }

    fn hamiltonian(&self, cfg: HilbertConfig) -> susyjc_core::Result<OperatorMatrix> {
        match self {
            Point::Params(p, model) => build_hamiltonian(cfg, p, *model),
            Point::Far(fp) => far_hamiltonian(cfg, fp),
        }
    }
}

fn reject(model: ModelArg, names: &[(&str, bool)]) -> Result<(), CliError> {
    match names.iter().find(|(_, given)| *given) {
        Some((name, _)) => Err(CliError::Usage(format!("--{name} is not used by the {} model", model_name(model)))),
        None => Ok(()),
    }
}

pub fn model_name(model: ModelArg) -> &'static str {
    match model {
        ModelArg::Jc => "jc",
        ModelArg::Ajc => "ajc",
        ModelArg::Ar => "ar",
        ModelArg::Far => "far",
    }
}

/// Every axis of a model with its value, plus the swept one if any.
type Axes = (Vec<(Axis, Sweep)>, Option<Axis>);

/// Sweep axes of the chosen model with their defaults, and the active axis.
fn axes(cfg: &RunConfig, model: ModelArg) -> Result<Axes, CliError> {
    let lambda = cfg.lambda.is_some();
    let mu = cfg.mu.is_some();
    let alphas = [("alpha0", cfg.alpha0.is_some()), ("alphaQ", cfg.alpha_q.is_some()), ("alphaR", cfg.alpha_r.is_some())];
    let list = match model {
        ModelArg::Jc => {
            reject(model, &[("mu", mu)])?;
            reject(model, &alphas)?;
            vec![(Axis::Lambda, cfg.lambda.unwrap_or(Sweep::fixed(1.0)))]
        }
        ModelArg::Ajc => {
            reject(model, &[("lambda", lambda)])?;
            reject(model, &alphas)?;
            vec![(Axis::Mu, cfg.mu.unwrap_or(Sweep::fixed(1.0)))]
        }
        ModelArg::Ar => {
            reject(model, &alphas)?;
            vec![
                (Axis::Lambda, cfg.lambda.unwrap_or(Sweep::fixed(1.0))),
                (Axis::Mu, cfg.mu.unwrap_or(Sweep::fixed(0.0))),
            ]
        }
        ModelArg::Far => {
            reject(model, &[("lambda", lambda), ("mu", mu), ("omega", cfg.omega.is_some()), ("omega0", cfg.omega0.is_some())])?;
            let mut list = vec![
                (Axis::Alpha0, cfg.alpha0.unwrap_or(Sweep::fixed(0.01))),
                (Axis::AlphaR, cfg.alpha_r.unwrap_or(Sweep::fixed(1.0))),
            ];
            if !self_consistent(cfg)? {
                list.push((Axis::AlphaQ, cfg.alpha_q.unwrap_or(Sweep::fixed(1.0))));
            }
            list
        }
    };
    let active: Vec<Axis> = list.iter().filter(|(_, s)| s.is_sweep()).map(|(a, _)| *a).collect();
    if active.len() > 1 {
        return Err(CliError::Usage("at most one parameter can be swept".into()));
    }
    Ok((list, active.first().copied()))
}

/// FAR runs use the self-consistent alphaQ unless alphaQ is given.
pub fn self_consistent(cfg: &RunConfig) -> Result<bool, CliError> {
    match (cfg.self_consistent, cfg.alpha_q.is_some()) {
        (Some(true), true) => Err(CliError::Usage("--self-consistent fixes alphaQ; drop --alphaQ".into())),
        (Some(flag), _) => Ok(flag),
        (None, given) => Ok(!given),
    }
}

pub fn far_point(alpha0: f64, alpha_q: Option<f64>, alpha_r: f64) -> susyjc_core::Result<FarParams> {
    match alpha_q {
        Some(q) => far_from_alphas(C64::new(alpha0, 0.0), C64::new(q, 0.0), C64::new(alpha_r, 0.0)),
        None => self_consistent_family(alpha0, alpha_r),
    }
}

fn point_at(cfg: &RunConfig, model: ModelArg, list: &[(Axis, Sweep)], axis: Option<Axis>, x: f64) -> Result<Point, CliError> {
    let get = |a: Axis| -> Option<f64> {
        list.iter().find(|(b, _)| *b == a).map(|(b, s)| if Some(*b) == axis { x } else { s.value() })
    };
    let (w, w0, th) = (cfg.omega(), cfg.omega0(), cfg.theta());
    Ok(match model {
        ModelArg::Jc => Point::Params(ModelParams::new(w, w0, get(Axis::Lambda).unwrap_or(0.0), 0.0, th)?, Model::Jc),
        ModelArg::Ajc => Point::Params(ModelParams::new(w, w0, 0.0, get(Axis::Mu).unwrap_or(0.0), th)?, Model::AntiJc),
        ModelArg::Ar => {
            let p = ModelParams::new(w, w0, get(Axis::Lambda).unwrap_or(0.0), get(Axis::Mu).unwrap_or(0.0), th)?;
            Point::Params(p, Model::Ar)
        }
        ModelArg::Far => Point::Far(far_point(
            get(Axis::Alpha0).unwrap_or(0.0),
            get(Axis::AlphaQ),
            get(Axis::AlphaR).unwrap_or(0.0),
        )?),
    })
}

fn solve(point: &Point, truncation: Option<usize>, levels: usize, tol: f64) -> Result<EigenSolution, CliError> {
    let sol = match truncation {
        Some(n_max) => {
            let cfg = HilbertConfig::new(n_max);
            if cfg.dim() < levels {
                return Err(CliError::Usage(format!("n_max = {n_max} holds fewer than {levels} levels")));
            }
            diagonalize(&point.hamiltonian(cfg)?)?
        }
        None => certify_truncation(|c| point.hamiltonian(c), levels, tol, Schedule::default())?,
    };
    Ok(sol)
}

pub fn run(cfg: &RunConfig) -> Result<Table, CliError> {
    let model = cfg.model.unwrap_or(ModelArg::Jc);
    let levels = cfg.levels.unwrap_or(DEFAULT_LEVELS);
    if levels == 0 {
        return Err(CliError::Usage("--levels must be positive".into()));
    }
    let truncation = cfg.truncation(None)?;
    let (list, axis) = axes(cfg, model)?;
    let xs = match axis {
        Some(a) => list.iter().find(|(b, _)| *b == a).expect("active axis listed").1.values(),
        None => vec![list[0].1.value()],
    };
    let points: Vec<Point> = xs.iter().map(|&x| point_at(cfg, model, &list, axis, x)).collect::<Result<_, _>>()?;
    let solved: Vec<(EigenSolution, f64)> = points
        .par_iter()
        .map(|p| Ok((solve(p, truncation, levels, cfg.tol())?, cfg.energy_scale(p.omega0())?)))
        .collect::<Result<_, CliError>>()?;

    let mut table = Table::new("spectrum", &HEADER);
    table.meta("model", model_name(model));
    table.meta("sweep_axis", axis.unwrap_or(list[0].0).name());
    table.meta("units", format!("{:?}", cfg.units()).to_lowercase());
    table.meta(
        "n_max_used",
        solved.iter().map(|(s, _)| s.n_max_used).collect::<Vec<_>>(),
    );
    for ((x, point), (sol, scale)) in xs.iter().zip(&points).zip(&solved) {
        let closed: Option<Vec<(DressedLabel, f64)>> = match point {
            Point::Params(p, Model::Jc) => Some(closed_form_levels(p, JcModel::Jc, levels)),
            Point::Params(p, Model::AntiJc) => Some(closed_form_levels(p, JcModel::AntiJc, levels)),
            _ => None,
        };
        for k in 0..levels.min(sol.len()) {
            let energy = sol.eigenvalues[k];
            let entry = closed.as_ref().and_then(|c| c.get(k));
            table.push(vec![
                (*x).into(),
                k.into(),
                (energy / scale).into(),
                entry.map(|(l, _)| l.branch.name()).into(),
                entry.map(|(l, _)| l.n_total).into(),
                entry.map(|(_, e)| e / scale).into(),
                entry.map(|(_, e)| (energy - e) / scale).into(),
            ]);
        }
    }
    Ok(table)
}
