//! Brute-force ground truth: dense Hermitian diagonalization, truncation
//! certification and numerical level-crossing search.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{HilbertConfig, OperatorMatrix, C64};

/// Largest tolerated `max |H - H^dagger|`, relative to `max(1, max |H|)`.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Eigenvalues closer than this (relative to `max(1, |E|)`) are ordered by
/// the position of their dominant amplitude instead of by value.
const TIE_TOL: f64 = 1e-10;

/// Spectral decomposition with eigenvalues sorted ascending.
#[derive(Clone, Debug)]
pub struct EigenSolution {
    pub eigenvalues: Vec<f64>,
    /// Column `k` belongs to `eigenvalues[k]`.
    pub eigenvectors: DMatrix<C64>,
    /// Lowest levels certified stable under truncation growth; 0 when the
    /// solution did not come from [`certify_truncation`].
    pub converged_levels: usize,
    pub n_max_used: usize,
}

impl EigenSolution {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn is_certified(&self) -> bool {
        self.converged_levels > 0
    }

    pub fn vector(&self, k: usize) -> DVector<C64> {
        self.eigenvectors.column(k).into_owned()
    }

    /// `max_k ||H v_k - E_k v_k||_2` over the first `levels` eigenpairs.
    pub fn max_residual(&self, h: &OperatorMatrix, levels: usize) -> f64 {
        (0..levels.min(self.len()))
            .map(|k| {
                let v = self.vector(k);
                (h.apply(&v) - &v * C64::new(self.eigenvalues[k], 0.0)).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `max |V^dagger V - I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = self.eigenvectors.adjoint() * &self.eigenvectors;
        let n = gram.nrows();
        (gram - DMatrix::<C64>::identity(n, n)).camax()
    }

    /// `sum_k E_k v_k v_k^dagger`.
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let scaled = DMatrix::from_fn(self.len(), self.len(), |r, c| {
            if r == c {
                C64::new(self.eigenvalues[r], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        &self.eigenvectors * scaled * self.eigenvectors.adjoint()
    }

    /// Weight of `v` inside the eigenspace spanned by every level within
    /// `window` of `energy`.
    pub fn subspace_fidelity(&self, v: &DVector<C64>, energy: f64, window: f64) -> f64 {
        let norm = v.norm_squared();
        let mut weight = 0.0;
        for (k, e) in self.eigenvalues.iter().enumerate() {
            if (e - energy).abs() <= window {
                weight += self.eigenvectors.column(k).dotc(v).norm_sqr();
            }
        }
        weight / norm
    }

    /// Index of the eigenvalue nearest to `energy`.
    pub fn nearest_level(&self, energy: f64) -> Option<usize> {
        self.eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - energy).abs().total_cmp(&(b.1 - energy).abs()))
            .map(|(k, _)| k)
    }

    /// Keeps only the lowest `levels` eigenpairs.
    pub fn truncated(mut self, levels: usize) -> Self {
        let keep = levels.min(self.len());
        self.eigenvalues.truncate(keep);
        self.eigenvectors = self.eigenvectors.columns(0, keep).into_owned();
        self
    }
}

fn argmax_index(v: nalgebra::DVectorView<'_, C64>) -> usize {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm_sqr();
        // strictly greater keeps the first index on exact ties
        if m > best_mag * (1.0 + 1e-12) {
            best = i;
            best_mag = m;
        }
    }
    best
}

/// Full spectral decomposition of a Hermitian operator.
///
/// Ordering is ascending in energy; near-ties (within `1e-10` relative) are
/// ordered by the basis index of the largest-magnitude amplitude. Each
/// eigenvector is rotated so that this amplitude is real positive.
pub fn diagonalize(h: &OperatorMatrix) -> Result<EigenSolution> {
    let scale = h.max_norm().max(1.0);
    let defect = h.hermiticity_defect();
    if defect > HERMITICITY_TOL * scale {
        return Err(Error::NotHermitian { residual: defect });
    }
    let dim = h.dim();
    let (values, vectors): (Vec<f64>, DMatrix<C64>) = if h.is_real() {
        let real = h.entries().map(|z| z.re);
        let eig = SymmetricEigen::new(real);
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors.map(|x| C64::new(x, 0.0)))
    } else {
        let eig = SymmetricEigen::new(h.entries().clone());
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let dominant: Vec<usize> = (0..dim).map(|k| argmax_index(vectors.column(k))).collect();
    // re-sort inside clusters of near-equal eigenvalues
    let mut start = 0;
    while start < dim {
        let mut end = start + 1;
        while end < dim {
            let prev = values[order[end - 1]];
            let cur = values[order[end]];
            if cur - prev > TIE_TOL * prev.abs().max(1.0) {
                break;
            }
            end += 1;
        }
        order[start..end].sort_by_key(|&k| dominant[k]);
        start = end;
    }

    let mut eigenvectors = DMatrix::zeros(dim, dim);
    let mut eigenvalues = Vec::with_capacity(dim);
    for (col, &k) in order.iter().enumerate() {
        let v = vectors.column(k);
        let pivot = v[dominant[k]];
        let phase = if pivot.norm() > 0.0 {
            pivot.conj() / pivot.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        eigenvectors.set_column(col, &(v * phase));
        eigenvalues.push(values[k]);
    }
    let n_max_used = HilbertConfig::from_dim(dim).map(|c| c.n_max()).unwrap_or(0);
    Ok(EigenSolution {
        eigenvalues,
        eigenvectors,
        converged_levels: 0,
        n_max_used,
    })
}

/// Truncation growth schedule for [`certify_truncation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Schedule {
    pub start: usize,
    pub cap: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule { start: 32, cap: 2048 }
    }
}

/// Doubles `n_max` from `schedule.start` until the lowest `k_levels`
/// eigenvalues move by less than `tol * max(1, |E|)` between consecutive
/// sizes.
pub fn certify_truncation<F>(builder: F, k_levels: usize, tol: f64, schedule: Schedule) -> Result<EigenSolution>
where
    F: Fn(HilbertConfig) -> Result<OperatorMatrix>,
{
    let mut n_max = schedule.start.max(1);
    let mut previous: Option<EigenSolution> = None;
    loop {
        let sol = diagonalize(&builder(HilbertConfig::new(n_max))?)?;
        if sol.len() >= k_levels {
            if let Some(prev) = &previous {
                if prev.len() >= k_levels {
                    let stable = (0..k_levels).all(|k| {
                        let (a, b) = (prev.eigenvalues[k], sol.eigenvalues[k]);
                        (a - b).abs() < tol * b.abs().max(1.0)
                    });
                    if stable {
                        return Ok(EigenSolution {
                            converged_levels: k_levels.max(1),
                            ..sol
                        });
                    }
                }
            }
        }
        if n_max >= schedule.cap {
            return Err(Error::NoConvergence { n_max });
        }
        previous = Some(sol);
        n_max = (2 * n_max).min(schedule.cap);
    }
}

/// What [`find_crossings`] looks for.
#[derive(Clone, Debug, PartialEq)]
pub enum CrossingMode {
    /// Changes of the ground state, detected by an overlap drop below 1/2
    /// between neighbouring grid points.
    GroundChange,
    /// Order swaps of the states that occupy sorted levels `i` and `j` at
    /// the start of the range, followed by eigenvector continuity.
    LevelPair(usize, usize),
    /// Order swaps of two explicitly given states, followed from the start
    /// of the range by eigenvector continuity.
    Tracked(DVector<C64>, DVector<C64>),
}

/// Grid-then-bisect search settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossingSearch {
    pub grid_points: usize,
    /// Bisection stops once the bracket is narrower than `coupling_tol * max(1, lambda)`.
    pub coupling_tol: f64,
    /// Gaps below this at the located coupling count as exact crossings.
    pub exact_gap: f64,
    /// How many of the lowest levels are searched when following a state.
    pub tracked_levels: usize,
}

impl Default for CrossingSearch {
    fn default() -> Self {
        CrossingSearch {
            grid_points: 400,
            coupling_tol: 1e-11,
            exact_gap: 1e-8,
            tracked_levels: 24,
        }
    }
}

/// A located (exact or avoided) crossing.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelCrossing {
    pub coupling: f64,
    /// Energy gap between the two participating states at `coupling`.
    pub gap: f64,
    pub exact: bool,
    /// Sorted level indices of the two states just below `coupling`.
    pub indices: (usize, usize),
}

fn overlap(a: &DVector<C64>, b: nalgebra::DVectorView<'_, C64>) -> f64 {
    b.dotc(a).norm()
}

/// Index of the column of `sol` with the largest overlap with `v`, skipping `exclude`.
fn best_match(sol: &EigenSolution, v: &DVector<C64>, exclude: Option<usize>) -> usize {
    (0..sol.len())
        .filter(|&k| Some(k) != exclude)
        .max_by(|&a, &b| {
            overlap(v, sol.eigenvectors.column(a)).total_cmp(&overlap(v, sol.eigenvectors.column(b)))
        })
        .unwrap_or(0)
}

/// Scans `range` on a uniform grid and bisects every bracketed crossing.
pub fn find_crossings<F>(
    builder: F,
    mode: &CrossingMode,
    range: (f64, f64),
    search: &CrossingSearch,
) -> Result<Vec<LevelCrossing>>
where
    F: Fn(f64) -> Result<OperatorMatrix> + Sync,
{
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite()) || hi <= lo || search.grid_points < 2 {
        return Err(Error::InvalidParameter(format!("invalid crossing range {lo}..{hi}")));
    }
    let keep = match mode {
        CrossingMode::GroundChange => 2,
        CrossingMode::LevelPair(i, j) => search.tracked_levels.max(i.max(j) + 2),
        CrossingMode::Tracked(..) => search.tracked_levels,
    };
    let solve = |x: f64| -> Result<EigenSolution> { Ok(diagonalize(&builder(x)?)?.truncated(keep)) };
    let step = (hi - lo) / (search.grid_points - 1) as f64;
    let grid: Vec<f64> = (0..search.grid_points).map(|k| lo + step * k as f64).collect();
    let sols: Vec<EigenSolution> = grid.par_iter().map(|&x| solve(x)).collect::<Result<_>>()?;

    let mut found = Vec::new();
    match mode {
        CrossingMode::GroundChange => {
            for w in 0..grid.len() - 1 {
                let a = sols[w].vector(0);
                if overlap(&a, sols[w + 1].eigenvectors.column(0)) >= 0.5 {
                    continue;
                }
                let b = sols[w + 1].vector(0);
                found.push(bisect_pair(&solve, (grid[w], grid[w + 1]), a, b, search)?);
            }
        }
        CrossingMode::LevelPair(..) | CrossingMode::Tracked(..) => {
            let (mut a, mut b) = match mode {
                CrossingMode::LevelPair(i, j) => (sols[0].vector(*i), sols[0].vector(*j)),
                CrossingMode::Tracked(u, v) => (u.clone(), v.clone()),
                CrossingMode::GroundChange => unreachable!(),
            };
            let mut ia = best_match(&sols[0], &a, None);
            let mut ib = best_match(&sols[0], &b, Some(ia));
            a = sols[0].vector(ia);
            b = sols[0].vector(ib);
            for w in 1..grid.len() {
                let na = best_match(&sols[w], &a, None);
                let nb = best_match(&sols[w], &b, Some(na));
                let before = sols[w - 1].eigenvalues[ia] - sols[w - 1].eigenvalues[ib];
                let after = sols[w].eigenvalues[na] - sols[w].eigenvalues[nb];
                if before.signum() != after.signum() {
                    found.push(bisect_pair(&solve, (grid[w - 1], grid[w]), a.clone(), b.clone(), search)?);
                }
                ia = na;
                ib = nb;
                a = sols[w].vector(ia);
                b = sols[w].vector(ib);
            }
        }
    }
    Ok(found)
}

/// Bisects on the sign of `E_a - E_b`, re-identifying both states at every
/// midpoint by overlap with their images at the left end of the bracket.
fn bisect_pair<S>(
    solve: &S,
    bracket: (f64, f64),
    a_left: DVector<C64>,
    b_left: DVector<C64>,
    search: &CrossingSearch,
) -> Result<LevelCrossing>
where
    S: Fn(f64) -> Result<EigenSolution>,
{
    let (mut lo, mut hi) = bracket;
    let left = solve(lo)?;
    let ia = best_match(&left, &a_left, None);
    let ib = best_match(&left, &b_left, Some(ia));
    let indices = (ia.min(ib), ia.max(ib));
    let sign_left = (left.eigenvalues[ia] - left.eigenvalues[ib]).signum();
    let mut a = left.vector(ia);
    let mut b = left.vector(ib);
    let mut gap = (left.eigenvalues[ia] - left.eigenvalues[ib]).abs();
    for _ in 0..200 {
        if hi - lo <= search.coupling_tol * lo.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let sol = solve(mid)?;
        let ma = best_match(&sol, &a, None);
        let mb = best_match(&sol, &b, Some(ma));
        let diff = sol.eigenvalues[ma] - sol.eigenvalues[mb];
        gap = diff.abs();
        if diff.signum() == sign_left {
            lo = mid;
            a = sol.vector(ma);
            b = sol.vector(mb);
        } else {
            hi = mid;
        }
    }
    let coupling = 0.5 * (lo + hi);
    let sol = solve(coupling)?;
    let ma = best_match(&sol, &a, None);
    let mb = best_match(&sol, &b, Some(ma));
    gap = gap.min((sol.eigenvalues[ma] - sol.eigenvalues[mb]).abs());
    Ok(LevelCrossing {
        coupling,
        gap,
        exact: gap < search.exact_gap,
        indices,
    })
}
