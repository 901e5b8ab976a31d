//! Factorizable anisotropic Rabi (FAR) model `H = {A, A^dagger} / 2` with
//! `A = alpha0 + alphaQ Q- + alphaR R-`.
//!
//! Expanding the anticommutator (the mixed terms vanish because
//! `{Q-, R+} = {Q+, R-} = 0`) gives an AR Hamiltonian with
//!
//! * `omega = (|alphaQ|^2 + |alphaR|^2) / 2`, `omega0 = (|alphaQ|^2 - |alphaR|^2) / 2`
//! * `lambda = |alpha0 alphaQ|`, `mu = |alpha0 alphaR|`
//! * phases `phi0 - phiQ` on `Q+` and `phi0 - phiR` on `R+`
//! * constant `omega_c = |alpha0|^2 + omega / 2`.
//!
//! The detuning of the map is `omega0 - omega = -|alphaR|^2`.

use crate::error::{Error, Result};
use crate::hilbert::{exchange_op, Component, ExchangeFamily, HilbertConfig, OperatorMatrix, RabiTerms, C64};
use crate::oracle::EigenSolution;

/// Entrywise agreement required between the two forms of the Hamiltonian.
pub const FACTORIZATION_TOL: f64 = 1e-12;

/// Default degeneracy and equidistance tolerance, relative to the spacing.
pub const SHAPE_TOL: f64 = 1e-8;

/// Factorization coefficients and the effective AR parameters they induce.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FarParams {
    pub alpha0: C64,
    pub alpha_q: C64,
    pub alpha_r: C64,
    pub omega: f64,
    /// May be negative when `|alphaR| > |alphaQ|`.
    pub omega0: f64,
    pub lambda: f64,
    pub mu: f64,
    pub phase_lambda: f64,
    pub phase_mu: f64,
    pub omega_c: f64,
}

impl FarParams {
    /// `omega0 - omega`.
    pub fn delta(&self) -> f64 {
        self.omega0 - self.omega
    }

    /// Explicit AR coefficients including the constant `omega_c`.
    pub fn rabi_terms(&self) -> RabiTerms {
        RabiTerms {
            omega: self.omega,
            omega0: self.omega0,
            lambda: self.lambda,
            phase_lambda: self.phase_lambda,
            mu: self.mu,
            phase_mu: self.phase_mu,
            constant: self.omega_c,
        }
    }
}

pub fn far_from_alphas(alpha0: C64, alpha_q: C64, alpha_r: C64) -> Result<FarParams> {
    for (name, z) in [("alpha0", alpha0), ("alphaQ", alpha_q), ("alphaR", alpha_r)] {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} must be finite, got {z}")));
        }
    }
    let q = alpha_q.norm_sqr();
    let r = alpha_r.norm_sqr();
    if alpha_q.norm() == alpha_r.norm() {
        return Err(Error::DegenerateCouplings);
    }
    let omega = 0.5 * (q + r);
    Ok(FarParams {
        alpha0,
        alpha_q,
        alpha_r,
        omega,
        omega0: 0.5 * (q - r),
        lambda: (alpha0 * alpha_q).norm(),
        mu: (alpha0 * alpha_r).norm(),
        phase_lambda: alpha0.arg() - alpha_q.arg(),
        phase_mu: alpha0.arg() - alpha_r.arg(),
        omega_c: alpha0.norm_sqr() + 0.5 * omega,
    })
}

/// `A = alpha0 + alphaQ Q- + alphaR R-`.
pub fn ladder_operator(cfg: HilbertConfig, fp: &FarParams) -> OperatorMatrix {
    let id = OperatorMatrix::identity(cfg.dim()).scale(fp.alpha0);
    let qm = exchange_op(cfg, ExchangeFamily::Q, Component::Minus).scale(fp.alpha_q);
    let rm = exchange_op(cfg, ExchangeFamily::R, Component::Minus).scale(fp.alpha_r);
    &(&id + &qm) + &rm
}

/// Form (i): `{A, A^dagger} / 2` by matrix arithmetic, Hermitian part kept.
pub fn factorized_form(cfg: HilbertConfig, fp: &FarParams) -> OperatorMatrix {
    let a = ladder_operator(cfg, fp);
    let ad = a.adjoint();
    let anti = &(&a * &ad) + &(&ad * &a);
    let m = anti.entries();
    let herm = (m + m.adjoint()) * C64::new(0.25, 0.0);
    OperatorMatrix::from_entries(herm, true)
}

/// Form (ii): the AR Hamiltonian with the mapped parameters plus `omega_c`.
pub fn explicit_form(cfg: HilbertConfig, fp: &FarParams) -> OperatorMatrix {
    fp.rabi_terms().matrix(cfg)
}

/// Largest entrywise difference of the two forms on `n < n_max`.
pub fn factorization_residual(cfg: HilbertConfig, fp: &FarParams) -> f64 {
    let diff = &factorized_form(cfg, fp) - &explicit_form(cfg, fp);
    diff.max_norm_on(|i| cfg.fock_level(i) < cfg.n_max())
}

/// Builds both forms, checks that they agree on `n < n_max` within
/// `1e-12 * max(1, max |H|)`, and returns the explicit form.
pub fn far_hamiltonian(cfg: HilbertConfig, fp: &FarParams) -> Result<OperatorMatrix> {
    if fp.alpha_q.norm() == fp.alpha_r.norm() {
        return Err(Error::DegenerateCouplings);
    }
    let explicit = explicit_form(cfg, fp);
    let diff = &factorized_form(cfg, fp) - &explicit;
    let residual = diff.max_norm_on(|i| cfg.fock_level(i) < cfg.n_max());
    if residual > FACTORIZATION_TOL * explicit.max_norm().max(1.0) {
        return Err(Error::FactorizationMismatch { residual });
    }
    Ok(explicit)
}

/// Residuals of the two constraints the map is supposed to satisfy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstraintResiduals {
    /// `| |Delta| - |alphaR|^2 |`.
    pub detuning_residual: f64,
    /// `| 2 omega omega0 - (|alphaQ|^4 - |alphaR|^4) / 2 |`.
    pub exceptional_residual: f64,
}

pub fn constraint_check(fp: &FarParams) -> ConstraintResiduals {
    let q = fp.alpha_q.norm_sqr();
    let r = fp.alpha_r.norm_sqr();
    ConstraintResiduals {
        detuning_residual: (fp.delta().abs() - r).abs(),
        exceptional_residual: (2.0 * fp.omega * fp.omega0 - 0.5 * (q * q - r * r)).abs(),
    }
}

/// One-parameter family with `alpha0` small, `|alphaQ|` equal to the induced
/// `omega0`. Solving `omega0 = (|alphaQ|^2 - r^2) / 2 = |alphaQ|` gives
/// `|alphaQ| = 1 + sqrt(1 + r^2)`.
pub fn self_consistent_family(alpha0: f64, alpha_r: f64) -> Result<FarParams> {
    let q = 1.0 + (1.0 + alpha_r * alpha_r).sqrt();
    far_from_alphas(C64::new(alpha0, 0.0), C64::new(q, 0.0), C64::new(alpha_r, 0.0))
}

/// Degeneracy pattern and level spacing of a certified spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumShape {
    pub ground_energy: f64,
    /// Mean distance between consecutive level clusters.
    pub spacing: f64,
    /// Cluster sizes, lowest first.
    pub degeneracies: Vec<usize>,
    pub is_equidistant: bool,
    pub has_unique_ground: bool,
    /// Every cluster above the ground has exactly two levels.
    pub is_doubly_degenerate: bool,
    /// Largest spread inside a cluster, relative to `spacing`.
    pub max_cluster_spread: f64,
    /// Standard deviation over mean of the cluster-to-cluster distances.
    pub spacing_variation: f64,
}

/// Clusters the certified levels (gap below `tol` times the largest
/// neighbouring gap) and measures the spacing of cluster midpoints.
pub fn far_spectrum_shape(eigs: &EigenSolution, tol: f64) -> Result<SpectrumShape> {
    if !eigs.is_certified() {
        return Err(Error::NotConverged);
    }
    let levels = &eigs.eigenvalues[..eigs.converged_levels.min(eigs.len())];
    if levels.is_empty() {
        return Err(Error::NotConverged);
    }
    let scale = levels
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut clusters: Vec<Vec<f64>> = vec![vec![levels[0]]];
    for w in levels.windows(2) {
        if w[1] - w[0] < tol * scale {
            clusters.last_mut().expect("non-empty").push(w[1]);
        } else {
            clusters.push(vec![w[1]]);
        }
    }
    // the first uncertified level may still belong to the last cluster
    if let Some(&next) = eigs.eigenvalues.get(levels.len()) {
        let last = *levels.last().expect("non-empty");
        if next - last < tol * scale && clusters.len() > 1 {
            clusters.pop();
        }
    }
    let centers: Vec<f64> = clusters.iter().map(|c| c.iter().sum::<f64>() / c.len() as f64).collect();
    let diffs: Vec<f64> = centers.windows(2).map(|w| w[1] - w[0]).collect();
    let (spacing, variation) = if diffs.is_empty() {
        (0.0, f64::INFINITY)
    } else {
        let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
        let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / diffs.len() as f64;
        (mean, var.sqrt() / mean.abs())
    };
    let spread = clusters
        .iter()
        .map(|c| c.last().copied().unwrap_or(0.0) - c[0])
        .fold(0.0, f64::max);
    let degeneracies: Vec<usize> = clusters.iter().map(Vec::len).collect();
    Ok(SpectrumShape {
        ground_energy: levels[0],
        spacing,
        has_unique_ground: degeneracies[0] == 1,
        is_doubly_degenerate: degeneracies.len() > 1 && degeneracies[1..].iter().all(|&d| d == 2),
        is_equidistant: diffs.len() >= 2 && variation < tol,
        max_cluster_spread: if spacing > 0.0 { spread / spacing } else { f64::INFINITY },
        spacing_variation: variation,
        degeneracies,
    })
}
