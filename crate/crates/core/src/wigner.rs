//! Wigner functions of boson-mode reduced states, normalized to
//! `integral W d^2 alpha = 1`.
//!
//! Two independent evaluators: the Laguerre closed forms for dressed JC/aJC
//! states and a displaced-parity evaluator
//! `W(alpha) = (2/pi) tr[rho D(alpha) Pi D(alpha)^dagger]` for any density
//! matrix.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{ModelParams, C64};
use crate::jc::{Branch, DressedLabel};

/// Largest tolerated population in the top quarter of the working space.
pub const LEAKAGE_TOL: f64 = 1e-8;

/// Minimum working Fock dimension of the numeric evaluator.
pub const MIN_WORKING_LEVELS: usize = 120;

/// `L_n(x)` by the three-term recurrence.
pub fn laguerre(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Wigner function of the Fock state `|n>`.
pub fn wigner_fock(n: usize, alpha: C64) -> f64 {
    let r2 = alpha.norm_sqr();
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    2.0 / PI * sign * (-2.0 * r2).exp() * laguerre(n, 4.0 * r2)
}

/// Closed form for the boson reduced state of a dressed JC or aJC state.
///
/// `W(+/-,N) = (-1)^N e^{-2|a|^2} / (pi Omega) {[Omega -/+ Delta] L_N(4|a|^2) - [Omega +/- Delta] L_{N-1}(4|a|^2)}`
/// and `W(-,0) = (2/pi) e^{-2|a|^2}`.
pub fn wigner_closed_jc(label: &DressedLabel, params: &ModelParams, alpha: C64) -> Result<f64> {
    label.validate()?;
    let n = label.n_total;
    if n == 0 {
        return Ok(wigner_fock(0, alpha));
    }
    let coupling = params.coupling(label.model.model());
    let delta = params.delta();
    let big = (delta * delta + 4.0 * coupling * coupling * n as f64).sqrt();
    let x = 4.0 * alpha.norm_sqr();
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let gauss = (-2.0 * alpha.norm_sqr()).exp();
    if big == 0.0 {
        // no mixing: |+;N> = |e,N-1>, |-;N> = |g,N>
        let fock = match label.branch {
            Branch::Plus => n - 1,
            Branch::Minus => n,
        };
        return Ok(wigner_fock(fock, alpha));
    }
    let s = label.branch.sign();
    let bracket = (big - s * delta) * laguerre(n, x) - (big + s * delta) * laguerre(n - 1, x);
    Ok(sign * gauss / (PI * big) * bracket)
}

/// Displaced-parity evaluator for a fixed density matrix.
///
/// Uses `D(alpha) Pi D(alpha)^dagger = D(2 alpha) Pi`, so a point costs one
/// `support x support` block of `D(2 alpha)`. With `S = diag(i^n)`,
/// `a^dagger - a = -i S (a + a^dagger) S^dagger`, hence
/// `D(s e^{i phi}) = R(phi) S exp(-i s X) S^dagger R(phi)^dagger` where
/// `X = a + a^dagger` is real symmetric and diagonalized once per evaluator.
pub struct NumericWigner {
    rho: DMatrix<C64>,
    support: usize,
    levels: usize,
    x: Arc<QuadratureBasis>,
}

/// Eigendecomposition of the truncated `a + a^dagger`.
struct QuadratureBasis {
    vectors: DMatrix<f64>,
    values: DVector<f64>,
}

/// Shared per working dimension; the decomposition is deterministic.
fn quadrature_basis(levels: usize) -> Arc<QuadratureBasis> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("cache lock").get(&levels) {
        return Arc::clone(hit);
    }
    let mut x = DMatrix::<f64>::zeros(levels, levels);
    for n in 1..levels {
        let amp = (n as f64).sqrt();
        x[(n, n - 1)] = amp;
        x[(n - 1, n)] = amp;
    }
    let eig = SymmetricEigen::new(x);
    let basis = Arc::new(QuadratureBasis {
        vectors: eig.eigenvectors,
        values: eig.eigenvalues,
    });
    Arc::clone(cache.lock().expect("cache lock").entry(levels).or_insert(basis))
}

/// Highest occupied Fock level plus one.
fn support_of(rho: &DMatrix<C64>) -> usize {
    (0..rho.nrows())
        .rev()
        .find(|&n| rho.row(n).iter().chain(rho.column(n).iter()).any(|z| z.norm() > 0.0))
        .map_or(1, |n| n + 1)
}

/// `i^k` for integer `k`.
fn i_pow(k: i64) -> C64 {
    match k.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// Working dimension that keeps `D(2 alpha)|m>`, `m < support`, clear of the
/// top quarter for `|alpha| <= radius`.
pub fn working_levels_for(support: usize, radius: f64) -> usize {
    let s = 2.0 * radius;
    let need = s * s + support as f64 + 8.0 * s * (2.0 * support as f64 + 1.0).sqrt() + 20.0;
    ((need * 4.0 / 3.0).ceil() as usize).max(MIN_WORKING_LEVELS)
}

impl NumericWigner {
    /// `working_levels` is raised to at least [`MIN_WORKING_LEVELS`] and the
    /// size of `rho`.
    pub fn new(rho: &DMatrix<C64>, working_levels: usize) -> Result<Self> {
        if !rho.is_square() || rho.nrows() == 0 {
            return Err(Error::InvalidParameter("density matrix must be square and non-empty".into()));
        }
        let herm = (rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > 1e-10 {
            return Err(Error::NotHermitian { residual: herm });
        }
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!("density matrix trace is {trace}, expected 1")));
        }
        let min_eig = SymmetricEigen::new(rho.clone()).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min_eig < -1e-10 {
            return Err(Error::InvalidParameter(format!("density matrix has eigenvalue {min_eig:e} < 0")));
        }
        let support = support_of(rho);
        let levels = working_levels.max(MIN_WORKING_LEVELS).max(support);
        Ok(NumericWigner {
            rho: rho.view((0, 0), (support, support)).into_owned(),
            support,
            levels,
            x: quadrature_basis(levels),
        })
    }

    /// Sized by [`working_levels_for`] from the support of `rho`.
    pub fn for_radius(rho: &DMatrix<C64>, radius: f64) -> Result<Self> {
        NumericWigner::new(rho, working_levels_for(support_of(rho), radius))
    }

    pub fn working_levels(&self) -> usize {
        self.levels
    }

    /// Phases `e^{-i s x_j}`.
    fn phases(&self, s: f64) -> Vec<C64> {
        self.x.values.iter().map(|&x| C64::from_polar(1.0, -s * x)).collect()
    }

    /// `<k| D(s e^{i phi}) |m>` from precomputed phases.
    fn element(&self, k: usize, m: usize, phi: f64, phases: &[C64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (j, ph) in phases.iter().enumerate() {
            acc += ph * (self.x.vectors[(k, j)] * self.x.vectors[(m, j)]);
        }
        let dk = k as i64 - m as i64;
        acc * i_pow(dk) * C64::from_polar(1.0, phi * dk as f64)
    }

    /// Largest population of `D(2 alpha)|m>`, `m < support`, in the top
    /// quarter of the working space. Depends on `|alpha|` only.
    pub fn leakage(&self, radius: f64) -> f64 {
        let phases = self.phases(2.0 * radius);
        let band = self.levels - self.levels / 4;
        (0..self.support)
            .map(|m| (band..self.levels).map(|k| self.element(k, m, 0.0, &phases).norm_sqr()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Scans radii up to `radius`: a packet pushed past the edge of the
    /// truncated space reflects, so the endpoint alone can look clean.
    fn check_leakage(&self, radius: f64) -> Result<()> {
        let s2 = 4.0 * radius * radius;
        let samples = (8.0 * s2 / self.levels as f64).ceil() as usize + 1;
        let leakage = (1..=samples)
            .map(|k| self.leakage(radius * k as f64 / samples as f64))
            .fold(0.0, f64::max);
        if leakage > LEAKAGE_TOL {
            return Err(Error::SupportExceeded { leakage });
        }
        Ok(())
    }

    /// `(2/pi) sum_{m,m'} rho_{m m'} (-1)^m <m'| D(2 alpha) |m>` without the
    /// support check.
    fn eval_unchecked(&self, alpha: C64) -> Result<f64> {
        let r = alpha.norm();
        let phi = if r > 0.0 { alpha.arg() } else { 0.0 };
        let phases = self.phases(2.0 * r);
        let mut total = C64::new(0.0, 0.0);
        for m in 0..self.support {
            let parity = if m % 2 == 0 { 1.0 } else { -1.0 };
            for mp in 0..self.support {
                let rho = self.rho[(m, mp)];
                if rho == C64::new(0.0, 0.0) {
                    continue;
                }
                total += rho * self.element(mp, m, phi, &phases) * parity;
            }
        }
        let value = total * (2.0 / PI);
        if value.im.abs() > 1e-12 * value.re.abs().max(1.0) {
            return Err(Error::NotHermitian { residual: value.im.abs() });
        }
        Ok(value.re)
    }

    pub fn eval(&self, alpha: C64) -> Result<f64> {
        self.check_leakage(alpha.norm())?;
        self.eval_unchecked(alpha)
    }

    /// Evaluates many points after one support check at their largest
    /// radius (tail populations grow with `|alpha|`).
    pub fn eval_many(&self, points: &[C64]) -> Result<Vec<f64>> {
        let radius = points.iter().map(|a| a.norm()).fold(0.0, f64::max);
        self.check_leakage(radius)?;
        points.par_iter().map(|&a| self.eval_unchecked(a)).collect()
    }
}

/// One-off numeric evaluation; builds a [`NumericWigner`] sized for `alpha`.
pub fn wigner_numeric(rho: &DMatrix<C64>, alpha: C64) -> Result<f64> {
    NumericWigner::for_radius(rho, alpha.norm())?.eval(alpha)
}

/// What a [`WignerGrid`] is evaluated from.
pub enum WignerSource<'a> {
    ClosedJc { label: DressedLabel, params: ModelParams },
    Numeric(&'a DMatrix<C64>),
}

/// Wigner function sampled on `[-window, window]^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerGrid {
    pub re_alpha: Vec<f64>,
    pub im_alpha: Vec<f64>,
    /// `values[(i, j)] = W(re_alpha[i] + i im_alpha[j])`.
    pub values: DMatrix<f64>,
    /// Trapezoidal `integral W d^2 alpha`.
    pub normalization_integral: f64,
}

fn axis(window: f64, points: usize) -> Vec<f64> {
    let step = 2.0 * window / (points - 1) as f64;
    (0..points).map(|k| -window + step * k as f64).collect()
}

fn trapezoid_weight(k: usize, points: usize) -> f64 {
    if k == 0 || k + 1 == points {
        0.5
    } else {
        1.0
    }
}

pub fn wigner_grid(source: &WignerSource<'_>, window: f64, points: usize) -> Result<WignerGrid> {
    if points < 16 {
        return Err(Error::InvalidParameter(format!("grid needs at least 16 points per axis, got {points}")));
    }
    if !(window > 0.0 && window.is_finite()) {
        return Err(Error::InvalidParameter(format!("window must be positive, got {window}")));
    }
    let xs = axis(window, points);
    let alphas: Vec<C64> = xs.iter().flat_map(|&re| xs.iter().map(move |&im| C64::new(re, im))).collect();
    let flat = match source {
        WignerSource::ClosedJc { label, params } => {
            alphas.par_iter().map(|&a| wigner_closed_jc(label, params, a)).collect::<Result<Vec<f64>>>()?
        }
        WignerSource::Numeric(rho) => {
            NumericWigner::for_radius(rho, window * std::f64::consts::SQRT_2)?.eval_many(&alphas)?
        }
    };
    // flat is re-major: index i * points + j
    let values = DMatrix::from_fn(points, points, |i, j| flat[i * points + j]);
    let step = xs[1] - xs[0];
    let mut integral = 0.0;
    for i in 0..points {
        for j in 0..points {
            integral += trapezoid_weight(i, points) * trapezoid_weight(j, points) * values[(i, j)];
        }
    }
    Ok(WignerGrid {
        im_alpha: xs.clone(),
        re_alpha: xs,
        values,
        normalization_integral: integral * step * step,
    })
}
