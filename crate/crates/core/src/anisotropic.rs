//! Squeezed-frame treatment of the anisotropic Rabi (AR) model.
//!
//! With `xi = ln((lambda + mu) / |lambda - mu|)` and
//!
//! `V = exp(-i theta N_B) exp(-i Theta(mu - lambda) (pi/2) sigma_y) exp(-i xi K_y)`
//!
//! the AR Hamiltonian becomes a JC model with a parametric drive:
//!
//! `H_S = V^dagger H_aR V + omega/2`
//!
//! `H_S = omega / |lambda^2 - mu^2| [2 (lambda^2 + mu^2) K_z - 4 lambda mu K_x]
//!        + sgn(lambda - mu) [omega0 S_z + sqrt|lambda^2 - mu^2| Q_x]`.
//!
//! The squeeze exponent is `xi K_y` (a squeeze of magnitude `xi / 2`), which
//! is what makes `cosh xi = (lambda^2 + mu^2) / |lambda^2 - mu^2|`. The
//! constant `+omega/2` is the energy offset of the squeezed frame over the
//! lab frame.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hilbert::{
    boson_rotation, build_hamiltonian, exchange_op, spin_flip, spin_op, su11_generator, Component,
    ExchangeFamily, HilbertConfig, Model, ModelParams, OperatorMatrix, Spin, SpinKind, Su11Axis, C64,
};
use crate::jc::{Branch, DressedLabel, JcModel};
use crate::oracle::EigenSolution;

/// Default relative tolerance of the JC approximation against the oracle.
pub const APPROX_TOL: f64 = 0.02;

/// `ln((lambda + mu) / |lambda - mu|)`.
pub fn squeeze_parameter(lambda: f64, mu: f64) -> Result<f64> {
    if lambda == mu {
        return Err(Error::IsotropicSingularLimit);
    }
    if !(lambda >= 0.0 && mu >= 0.0) || !lambda.is_finite() || !mu.is_finite() {
        return Err(Error::InvalidParameter(format!("couplings must be finite and >= 0, got {lambda}, {mu}")));
    }
    Ok(((lambda + mu) / (lambda - mu).abs()).ln())
}

/// `sgn(lambda - mu)`; the caller guarantees `lambda != mu`.
fn dominance(params: &ModelParams) -> f64 {
    if params.lambda > params.mu {
        1.0
    } else {
        -1.0
    }
}

/// Time-independent part of the squeezed-frame transformation.
#[derive(Clone, Debug)]
pub struct SqueezedFrame {
    pub xi: f64,
    /// `mu > lambda`: the spin flip `exp(-i (pi/2) sigma_y)` is included.
    pub theta_rotation_applied: bool,
    /// `sgn(lambda - mu)`.
    pub sign: f64,
    pub unitary: OperatorMatrix,
}

/// `exp(-i xi K_y)` on the truncated space. The exponent
/// `-(xi/4)(a^dagger^2 - a^2)` is real and antisymmetric, so the result is a
/// real orthogonal matrix, block-diagonal in the spin.
pub fn squeeze_operator(cfg: HilbertConfig, xi: f64) -> OperatorMatrix {
    let levels = cfg.levels();
    let mut gen = DMatrix::<f64>::zeros(levels, levels);
    for n in 2..levels {
        let amp = 0.25 * xi * ((n * (n - 1)) as f64).sqrt();
        // -(xi/4) a^dagger^2 + (xi/4) a^2
        gen[(n, n - 2)] = -amp;
        gen[(n - 2, n)] = amp;
    }
    let block = antisymmetric_exp(gen);
    let mut m = DMatrix::zeros(cfg.dim(), cfg.dim());
    for s in Spin::BOTH {
        let off = cfg.index(s, 0);
        for c in 0..levels {
            for r in 0..levels {
                m[(off + r, off + c)] = C64::new(block[(r, c)], 0.0);
            }
        }
    }
    OperatorMatrix::from_entries(m, false)
}

/// `exp(G)` for real antisymmetric `G`, via the spectral decomposition of
/// the Hermitian matrix `iG`; the result is orthogonal to rounding.
fn antisymmetric_exp(gen: DMatrix<f64>) -> DMatrix<f64> {
    let herm = gen.map(|x| C64::new(0.0, x));
    let eig = nalgebra::SymmetricEigen::new(herm);
    // exp(G) = exp(-i (iG)) = U diag(exp(-i e_k)) U^dagger
    let phases = eig.eigenvalues.map(|e| C64::from_polar(1.0, -e));
    let mut scaled = eig.eigenvectors.clone();
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[k];
    }
    (scaled * eig.eigenvectors.adjoint()).map(|z| z.re)
}

pub fn frame_unitary(cfg: HilbertConfig, params: &ModelParams) -> Result<SqueezedFrame> {
    let xi = squeeze_parameter(params.lambda, params.mu)?;
    let flip = params.mu > params.lambda;
    let mut v = boson_rotation(cfg, params.theta);
    if flip {
        v = &v * &spin_flip(cfg);
    }
    v = &v * &squeeze_operator(cfg, xi);
    Ok(SqueezedFrame {
        xi,
        theta_rotation_applied: flip,
        sign: dominance(params),
        unitary: v,
    })
}

/// Energy offset `E_S - E_lab` between the squeezed and lab frames.
pub fn frame_shift(params: &ModelParams) -> f64 {
    0.5 * params.omega
}

/// `V^dagger H_aR V` for the given frame.
pub fn transformed_hamiltonian(cfg: HilbertConfig, params: &ModelParams, frame: &SqueezedFrame) -> Result<OperatorMatrix> {
    let h = build_hamiltonian(cfg, params, Model::Ar)?;
    let v = &frame.unitary;
    let out = &(&v.adjoint() * &h) * v;
    // symmetrize away rounding so the oracle accepts it as Hermitian
    let sym = (out.entries() + out.entries().adjoint()) * C64::new(0.5, 0.0);
    Ok(OperatorMatrix::from_entries(sym, true))
}

/// Squeezed-frame Hamiltonian `H_S`, built from the operator factories.
pub fn effective_hamiltonian(cfg: HilbertConfig, params: &ModelParams) -> Result<OperatorMatrix> {
    params.validate()?;
    squeeze_parameter(params.lambda, params.mu)?;
    let (l, m) = (params.lambda, params.mu);
    let diff = (l * l - m * m).abs();
    let pre = params.omega / diff;
    let kz = su11_generator(cfg, Su11Axis::Z).scale_real(pre * 2.0 * (l * l + m * m));
    let kx = su11_generator(cfg, Su11Axis::X).scale_real(pre * 4.0 * l * m);
    let sz = spin_op(cfg, SpinKind::Sz).scale_real(params.omega0);
    let qx = exchange_op(cfg, ExchangeFamily::Q, Component::X).scale_real(diff.sqrt());
    let spin_part = (&sz + &qx).scale_real(dominance(params));
    Ok(&(&kz - &kx) + &spin_part)
}

/// Effective JC parameters obtained by dropping the `K_x` drive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JcApproximation {
    /// `sgn(lambda - mu) omega0 - omega_scaled`.
    pub delta_ar: f64,
    /// `sgn(lambda - mu) sqrt|lambda^2 - mu^2|`.
    pub lambda_ar: f64,
    /// `omega (lambda^2 + mu^2) / |lambda^2 - mu^2|`.
    pub omega_scaled: f64,
    /// `2 lambda mu / (lambda^2 + mu^2)`; the approximation needs this small.
    pub validity: f64,
    pub sign: f64,
}

pub fn jc_approximation(params: &ModelParams) -> Result<JcApproximation> {
    squeeze_parameter(params.lambda, params.mu)?;
    let (l, m) = (params.lambda, params.mu);
    let sum = l * l + m * m;
    let diff = (l * l - m * m).abs();
    let sign = dominance(params);
    let omega_scaled = params.omega * sum / diff;
    Ok(JcApproximation {
        delta_ar: sign * params.omega0 - omega_scaled,
        lambda_ar: sign * diff.sqrt(),
        omega_scaled,
        validity: 2.0 * l * m / sum,
        sign,
    })
}

/// Approximate AR level with its frame bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxLevel {
    /// Eigenvalue of `omega_scaled N+ + delta_ar S_z + lambda_ar Q_x`.
    pub squeezed: f64,
    /// Added to `squeezed` to reach the lab frame (`-omega/2`).
    pub frame_offset: f64,
    pub lab: f64,
}

/// JC-approximation energy of a dressed label:
///
/// * ground: `omega_scaled/2 - sgn omega0/2`
/// * `(+/-, N)`: `omega_scaled N +/- sgn sqrt(delta_ar^2 + 4 lambda_ar^2 N) / 2`
pub fn approx_spectrum(label: &DressedLabel, params: &ModelParams) -> Result<ApproxLevel> {
    label.validate()?;
    let jc = jc_approximation(params)?;
    let n = label.n_total as f64;
    let squeezed = if label.n_total == 0 {
        -0.5 * jc.delta_ar
    } else {
        let root = (jc.delta_ar * jc.delta_ar + 4.0 * jc.lambda_ar * jc.lambda_ar * n).sqrt();
        jc.omega_scaled * n + 0.5 * label.branch.sign() * jc.sign * root
    };
    let frame_offset = -frame_shift(params);
    Ok(ApproxLevel {
        squeezed,
        frame_offset,
        lab: squeezed + frame_offset,
    })
}

/// Lowest `count` approximate lab-frame levels, ascending.
pub fn approx_levels(params: &ModelParams, count: usize) -> Result<Vec<(DressedLabel, f64)>> {
    let jc = jc_approximation(params)?;
    let ground = DressedLabel::ground(JcModel::Jc);
    let mut out = vec![(ground, approx_spectrum(&ground, params)?.lab)];
    // each subspace adds two levels above omega_scaled (N - 1/2) - ...; the
    // lower branch is convex in N, so stop once it rises above the count-th level
    let mut prev = f64::NEG_INFINITY;
    for n in 1usize.. {
        let mut lower = f64::INFINITY;
        for branch in [Branch::Minus, Branch::Plus] {
            let label = DressedLabel::new(branch, n, JcModel::Jc)?;
            let e = approx_spectrum(&label, params)?.lab;
            lower = lower.min(e);
            out.push((label, e));
        }
        if out.len() >= count && lower > prev {
            let mut es: Vec<f64> = out.iter().map(|x| x.1).collect();
            es.sort_by(f64::total_cmp);
            if lower > es[count - 1] {
                break;
            }
        }
        prev = lower;
        if jc.omega_scaled <= 0.0 && n > 4 * count {
            break;
        }
    }
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    out.truncate(count);
    Ok(out)
}

/// Coefficients of `p^2` and `q^2` in the canonical-pair form of `H_S`:
/// `(lambda + mu)/|lambda - mu|` and `|lambda - mu|/(lambda + mu)`.
pub fn quadrature_coefficients(lambda: f64, mu: f64) -> Result<(f64, f64)> {
    let xi = squeeze_parameter(lambda, mu)?;
    Ok((xi.exp(), (-xi).exp()))
}

/// Population of `v` on Fock levels above `n_max / 2`.
pub fn upper_half_weight(cfg: HilbertConfig, v: &nalgebra::DVector<C64>) -> f64 {
    (0..cfg.dim())
        .filter(|&i| 2 * cfg.fock_level(i) > cfg.n_max())
        .map(|i| v[i].norm_sqr())
        .sum()
}

/// Number of leading eigenvectors whose weight above `n_max / 2` stays
/// below `threshold`.
pub fn interior_levels(cfg: HilbertConfig, sol: &EigenSolution, threshold: f64) -> usize {
    (0..sol.len())
        .take_while(|&k| upper_half_weight(cfg, &sol.vector(k)) < threshold)
        .count()
}
