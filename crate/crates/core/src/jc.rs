//! Closed-form Jaynes-Cummings and anti-Jaynes-Cummings results.
//!
//! Both models split into invariant subspaces of fixed total excitation `N`:
//! `{|g,0>}` and `{|g,N>, |e,N-1>}` for JC, `{|e,0>}` and
//! `{|e,N>, |g,N-1>}` for aJC. In each two-level subspace the Hamiltonian is
//! a spin in a field of magnitude `Omega(N) = sqrt(Delta^2 + 4 g^2 N)`,
//! with `g = lambda` for JC and `g = mu` for aJC, so
//!
//! `E(-,0) = -omega0/2`, `E(+/-,N) = omega (N - 1/2) +/- Omega(N)/2`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::hilbert::{boson_reduced, fermion_reduced, spin_flip, HilbertConfig, Model, ModelParams, Spin, C64};

/// Relative tolerance used to confirm a crossing through [`dressed_energy`].
pub const CROSSING_CHECK_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Minus,
    Plus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

/// Which of the two exactly solvable models a label refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JcModel {
    Jc,
    AntiJc,
}

impl JcModel {
    pub fn model(self) -> Model {
        match self {
            JcModel::Jc => Model::Jc,
            JcModel::AntiJc => Model::AntiJc,
        }
    }

    fn coupling(self, params: &ModelParams) -> f64 {
        params.coupling(self.model())
    }
}

/// Dressed eigenstate label `|branch; N>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DressedLabel {
    pub branch: Branch,
    pub n_total: usize,
    pub model: JcModel,
}

impl DressedLabel {
    pub fn new(branch: Branch, n_total: usize, model: JcModel) -> Result<Self> {
        let label = DressedLabel {
            branch,
            n_total,
            model,
        };
        label.validate()?;
        Ok(label)
    }

    pub fn ground(model: JcModel) -> Self {
        DressedLabel {
            branch: Branch::Minus,
            n_total: 0,
            model,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_total == 0 && self.branch == Branch::Plus {
            return Err(Error::InvalidLabel("(+, 0) does not exist; the N = 0 subspace is one-dimensional".into()));
        }
        Ok(())
    }
}

/// Normalized dressed eigenvector in the composite basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DressedState {
    pub label: DressedLabel,
    pub amplitudes: DVector<C64>,
}

/// Coupling at which two dressed energies coincide.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossingRecord {
    pub left: DressedLabel,
    pub right: DressedLabel,
    pub coupling: f64,
}

fn omega_n(n: usize, delta: f64, coupling: f64) -> f64 {
    (delta * delta + 4.0 * coupling * coupling * n as f64).sqrt()
}

/// Effective Rabi frequency `Omega(N) = sqrt(Delta^2 + 4 lambda^2 N)`.
pub fn rabi_frequency(n: usize, params: &ModelParams) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidN(n));
    }
    Ok(omega_n(n, params.delta(), params.lambda))
}

/// Principal-branch rotation angle `atan(2 lambda sqrt(N) / Delta)` in
/// `[-pi/2, pi/2]`; `pi/2` on resonance.
pub fn mixing_angle(n: usize, params: &ModelParams) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidN(n));
    }
    let delta = params.delta();
    let lambda_n = 2.0 * params.lambda * (n as f64).sqrt();
    if delta == 0.0 {
        if lambda_n == 0.0 {
            return Err(Error::DegenerateAngle);
        }
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    Ok((lambda_n / delta).atan())
}

/// Closed-form dressed energy.
pub fn dressed_energy(label: &DressedLabel, params: &ModelParams) -> Result<f64> {
    label.validate()?;
    if label.n_total == 0 {
        return Ok(-0.5 * params.omega0);
    }
    let n = label.n_total;
    let big_omega = omega_n(n, params.delta(), label.model.coupling(params));
    Ok(params.omega * (n as f64 - 0.5) + 0.5 * label.branch.sign() * big_omega)
}

/// Diagonal-frame magnitude `Omega(N)/2`, whose squares are spaced by `lambda^2`.
pub fn diagonal_frame_energy(n: usize, params: &ModelParams) -> Result<f64> {
    Ok(0.5 * rabi_frequency(n, params)?)
}

/// `(a, b)` with `a^2 + b^2 = 1`: the weights `sqrt((Omega -/+ Delta) / 2 Omega)`.
/// Falls back to `(0, 1)` when `Omega = 0`.
fn subspace_weights(n: usize, delta: f64, coupling: f64) -> (f64, f64) {
    let big = omega_n(n, delta, coupling);
    if big == 0.0 {
        return (0.0, 1.0);
    }
    let low = ((big - delta) / (2.0 * big)).max(0.0).sqrt();
    let high = ((big + delta) / (2.0 * big)).max(0.0).sqrt();
    (low, high)
}

fn fix_global_phase(v: &mut DVector<C64>) {
    if let Some(first) = v.iter().copied().find(|z| *z != C64::new(0.0, 0.0)) {
        let phase = first.conj() / first.norm();
        *v *= phase;
        let k = v.iter().position(|z| *z != C64::new(0.0, 0.0)).unwrap_or(0);
        v[k] = C64::new(v[k].norm(), 0.0);
    }
}

/// Closed-form dressed eigenvector, normalized, with the first nonzero
/// amplitude real positive.
pub fn dressed_state(label: &DressedLabel, params: &ModelParams, cfg: HilbertConfig) -> Result<DressedState> {
    label.validate()?;
    let n = label.n_total;
    if n > cfg.n_max() {
        return Err(Error::TruncationTooSmall {
            n_max: cfg.n_max(),
            needed: n,
        });
    }
    // JC amplitudes first; aJC follows from the spin rotation.
    let mut v = DVector::zeros(cfg.dim());
    if n == 0 {
        v[cfg.index(Spin::Ground, 0)] = C64::new(1.0, 0.0);
    } else {
        let coupling = label.model.coupling(params);
        let (low, high) = subspace_weights(n, params.delta(), coupling);
        let phase = C64::from_polar(1.0, params.theta);
        let (g, e) = match label.branch {
            Branch::Plus => (phase.conj() * low, C64::new(high, 0.0)),
            Branch::Minus => (C64::new(high, 0.0), -phase * low),
        };
        v[cfg.index(Spin::Ground, n)] = g;
        v[cfg.index(Spin::Excited, n - 1)] = e;
    }
    if label.model == JcModel::AntiJc {
        v = spin_flip(cfg).adjoint().apply(&v);
    }
    fix_global_phase(&mut v);
    Ok(DressedState {
        label: *label,
        amplitudes: v,
    })
}

/// Coupling `lambda_{+/-M,-N}` at which `E(branch, M) = E(-, N)` for the JC model.
///
/// Candidates `lambda^2 = omega [(M + N) omega -/+ sqrt(Delta^2 + 4 M N omega^2)]`
/// are accepted only if they are real, positive and reproduce the energy
/// equality through [`dressed_energy`].
pub fn crossing_pair(m: usize, n: usize, branch: Branch, params: &ModelParams) -> Option<CrossingRecord> {
    if n <= m || params.omega <= 0.0 {
        return None;
    }
    let left = DressedLabel::new(branch, m, JcModel::Jc).ok()?;
    let right = DressedLabel::ground(JcModel::Jc);
    let right = DressedLabel { n_total: n, ..right };
    let w = params.omega;
    let delta = params.delta();
    let radical = (delta * delta + 4.0 * (m * n) as f64 * w * w).sqrt();
    let base = (m + n) as f64 * w;
    let ordered = match branch {
        Branch::Minus => [base + radical, base - radical],
        Branch::Plus => [base - radical, base + radical],
    };
    for bracket in ordered {
        let sq = w * bracket;
        if sq.is_nan() || sq <= 0.0 {
            continue;
        }
        let coupling = sq.sqrt();
        let p = params.with_lambda(coupling);
        let (el, er) = match (dressed_energy(&left, &p), dressed_energy(&right, &p)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => continue,
        };
        if (el - er).abs() <= CROSSING_CHECK_TOL * el.abs().max(er.abs()).max(1.0) {
            return Some(CrossingRecord { left, right, coupling });
        }
    }
    None
}

/// Coupling `lambda_N` at which `|-;N>` takes over the ground state from
/// `|-;N-1>`, i.e. `E(-,N) = E(-,N-1)`.
///
/// `lambda_1 = sqrt(omega omega0)` for every detuning; for `N >= 2` this is
/// `lambda_{-(N-1),-N}`. On resonance `lambda_N = omega (sqrt N + sqrt(N-1))`.
pub fn ground_state_critical(n: usize, params: &ModelParams) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidN(n));
    }
    if params.omega <= 0.0 || params.omega0 <= 0.0 {
        return Err(Error::InvalidParameter("ground-state crossings need omega > 0 and omega0 > 0".into()));
    }
    if n == 1 {
        return Ok((params.omega * params.omega0).sqrt());
    }
    crossing_pair(n - 1, n, Branch::Minus, params)
        .map(|c| c.coupling)
        .ok_or_else(|| Error::InvalidParameter(format!("no real crossing for N = {n}")))
}

/// The radical expression
/// `sqrt(omega [(2N-1) omega + sqrt(omega0^2 - 2 omega0 omega + (2N-1)^2 omega^2)])`.
///
/// Equals [`ground_state_critical`] except for `N = 1` with `omega0 < omega`,
/// where it gives `sqrt(omega (2 omega - omega0))` instead of `sqrt(omega omega0)`.
pub fn ground_state_critical_radical(n: usize, params: &ModelParams) -> f64 {
    let w = params.omega;
    let w0 = params.omega0;
    let k = (2 * n) as f64 - 1.0;
    (w * (k * w + (w0 * w0 - 2.0 * w0 * w + k * k * w * w).sqrt())).sqrt()
}

/// Subsystem traced down to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    Fermion,
    Boson,
}

/// Reduced density matrix of a dressed state: 2x2 (index 0 = `|g>`) for the
/// fermion, `(n_max+1)` square for the boson.
pub fn reduced_density(
    label: &DressedLabel,
    params: &ModelParams,
    subsystem: Subsystem,
    cfg: HilbertConfig,
) -> Result<DMatrix<C64>> {
    let state = dressed_state(label, params, cfg)?;
    Ok(match subsystem {
        Subsystem::Fermion => fermion_reduced(cfg, &state.amplitudes),
        Subsystem::Boson => boson_reduced(cfg, &state.amplitudes),
    })
}

/// `-tr(rho ln rho)` of a Hermitian density matrix.
pub fn von_neumann_entropy(rho: &DMatrix<C64>) -> f64 {
    let eig = SymmetricEigen::new(rho.clone());
    eig.eigenvalues
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum()
}

/// The lowest `count` closed-form levels of the given model, ascending,
/// ties ordered by `(N, branch)`.
pub fn closed_form_levels(params: &ModelParams, model: JcModel, count: usize) -> Vec<(DressedLabel, f64)> {
    let mut levels = Vec::new();
    if count == 0 {
        return levels;
    }
    let ground = DressedLabel::ground(model);
    levels.push((ground, -0.5 * params.omega0));
    let mut previous_minus = f64::NEG_INFINITY;
    for n in 1usize.. {
        let minus = DressedLabel {
            branch: Branch::Minus,
            n_total: n,
            model,
        };
        let plus = DressedLabel {
            branch: Branch::Plus,
            ..minus
        };
        let em = dressed_energy(&minus, params).unwrap_or(f64::INFINITY);
        let ep = dressed_energy(&plus, params).unwrap_or(f64::INFINITY);
        levels.push((minus, em));
        levels.push((plus, ep));
        // E(-,N) is convex in N, so once it rises past the count-th level
        // no later subspace can contribute.
        if levels.len() >= count && em > previous_minus {
            let mut energies: Vec<f64> = levels.iter().map(|l| l.1).collect();
            energies.sort_by(f64::total_cmp);
            if em > energies[count - 1] {
                break;
            }
        }
        previous_minus = em;
        if params.omega <= 0.0 && n > 4 * count {
            break;
        }
    }
    levels.sort_by(|a, b| {
        a.1.total_cmp(&b.1)
            .then(a.0.n_total.cmp(&b.0.n_total))
            .then(a.0.branch.cmp(&b.0.branch))
    });
    levels.truncate(count);
    levels
}
