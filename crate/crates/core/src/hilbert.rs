//! Truncated composite space `C^2 (x) C^(n_max+1)` and the operator factories
//! that live on it.
//!
//! Every matrix in the crate uses the same spin-major ordering: the basis
//! state `|s, n>` sits at index `s * (n_max + 1) + n`, with `s = 0` the
//! fermion ground state `|g>` (`sigma_z = -1`) and `s = 1` the excited state
//! `|e>` (`sigma_z = +1`). [`HilbertConfig::index`] is the only place that
//! encodes this.
//!
//! Truncation is a hard cutoff: ladder operators simply lose the matrix
//! elements that would leave `|n_max>`. Identities that rely on
//! `[a, a^dagger] = 1` therefore only hold away from the top level.

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Fermion (spin-half) basis state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Ground,
    Excited,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Ground, Spin::Excited];

    /// Eigenvalue of `sigma_z`.
    pub fn sigma_z(self) -> f64 {
        match self {
            Spin::Ground => -1.0,
            Spin::Excited => 1.0,
        }
    }

    pub fn flipped(self) -> Spin {
        match self {
            Spin::Ground => Spin::Excited,
            Spin::Excited => Spin::Ground,
        }
    }

    fn offset(self) -> usize {
        match self {
            Spin::Ground => 0,
            Spin::Excited => 1,
        }
    }
}

/// Fock truncation of the boson mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HilbertConfig {
    n_max: usize,
}

impl HilbertConfig {
    pub fn new(n_max: usize) -> Self {
        HilbertConfig { n_max }
    }

    /// Highest retained Fock level.
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Number of boson levels, `n_max + 1`.
    pub fn levels(&self) -> usize {
        self.n_max + 1
    }

    pub fn dim(&self) -> usize {
        2 * self.levels()
    }

    /// Composite index of `|spin, n>`.
    pub fn index(&self, spin: Spin, n: usize) -> usize {
        debug_assert!(n <= self.n_max, "Fock level {n} above n_max {}", self.n_max);
        spin.offset() * self.levels() + n
    }

    /// Inverse of [`HilbertConfig::index`].
    pub fn decompose(&self, index: usize) -> (Spin, usize) {
        let levels = self.levels();
        if index < levels {
            (Spin::Ground, index)
        } else {
            (Spin::Excited, index - levels)
        }
    }

    pub fn fock_level(&self, index: usize) -> usize {
        self.decompose(index).1
    }

    pub fn basis_vector(&self, spin: Spin, n: usize) -> DVector<C64> {
        let mut v = DVector::zeros(self.dim());
        v[self.index(spin, n)] = ONE;
        v
    }

    /// Recovers the configuration from a composite dimension.
    pub fn from_dim(dim: usize) -> Result<Self> {
        if dim < 2 || !dim.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "dimension {dim} is not 2 * (n_max + 1)"
            )));
        }
        Ok(HilbertConfig::new(dim / 2 - 1))
    }
}

/// The three Hamiltonians of the family built by [`build_hamiltonian`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    /// Rotating terms only, coupling `lambda`.
    Jc,
    /// Counter-rotating terms only, coupling `mu`.
    AntiJc,
    /// Both couplings (`lambda != mu`).
    Ar,
}

/// Physical parameters in units with `hbar = 1`.
///
/// `Model::Jc` reads `lambda` and ignores `mu`; `Model::AntiJc` reads `mu`
/// and ignores `lambda`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Boson frequency.
    pub omega: f64,
    /// Fermion frequency.
    pub omega0: f64,
    /// Rotating-wave (JC) coupling.
    pub lambda: f64,
    /// Counter-rotating (aJC) coupling.
    pub mu: f64,
    /// Coupling phase in `[0, 2 pi)`.
    pub theta: f64,
}

impl ModelParams {
    pub fn new(omega: f64, omega0: f64, lambda: f64, mu: f64, theta: f64) -> Result<Self> {
        let p = ModelParams {
            omega,
            omega0,
            lambda,
            mu,
            theta,
        };
        p.validate()?;
        Ok(p)
    }

    /// JC-only parameters (`mu = 0`, `theta = 0`).
    pub fn jc(omega: f64, omega0: f64, lambda: f64) -> Result<Self> {
        Self::new(omega, omega0, lambda, 0.0, 0.0)
    }

    /// aJC-only parameters (`lambda = 0`, `theta = 0`).
    pub fn anti_jc(omega: f64, omega0: f64, mu: f64) -> Result<Self> {
        Self::new(omega, omega0, 0.0, mu, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("omega", self.omega),
            ("omega0", self.omega0),
            ("lambda", self.lambda),
            ("mu", self.mu),
        ];
        for (name, value) in named {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and >= 0, got {value}"
                )));
            }
        }
        if !self.theta.is_finite()
            || self.theta < 0.0
            || self.theta >= 2.0 * std::f64::consts::PI
        {
            return Err(Error::InvalidParameter(format!(
                "theta must lie in [0, 2pi), got {}",
                self.theta
            )));
        }
        Ok(())
    }

    /// Detuning `omega0 - omega`.
    pub fn delta(&self) -> f64 {
        self.omega0 - self.omega
    }

    /// Coupling strength the given model actually uses.
    pub fn coupling(&self, model: Model) -> f64 {
        match model {
            Model::Jc | Model::Ar => self.lambda,
            Model::AntiJc => self.mu,
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    /// Swaps the two couplings; maps JC parameters onto the matching aJC ones.
    pub fn mirrored(self) -> Self {
        ModelParams {
            lambda: self.mu,
            mu: self.lambda,
            ..self
        }
    }
}

/// Dense complex operator on the truncated composite space.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<C64>,
    hermitian: bool,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        OperatorMatrix {
            entries: DMatrix::zeros(dim, dim),
            hermitian: true,
        }
    }

    pub fn identity(dim: usize) -> Self {
        OperatorMatrix {
            entries: DMatrix::identity(dim, dim),
            hermitian: true,
        }
    }

    /// Wraps a square matrix. `hermitian_hint` records what the caller knows;
    /// it is not checked here.
    pub fn from_entries(entries: DMatrix<C64>, hermitian_hint: bool) -> Self {
        assert!(entries.is_square(), "operator matrices must be square");
        OperatorMatrix {
            entries,
            hermitian: hermitian_hint,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn hermitian_hint(&self) -> bool {
        self.hermitian
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        OperatorMatrix {
            entries: self.entries.adjoint(),
            hermitian: self.hermitian,
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        OperatorMatrix {
            entries: &self.entries * factor,
            hermitian: self.hermitian && factor.im == 0.0,
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        OperatorMatrix {
            entries: &self.entries * C64::new(factor, 0.0),
            hermitian: self.hermitian,
        }
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.entries * v
    }

    /// Largest absolute entry.
    pub fn max_norm(&self) -> f64 {
        self.max_norm_where(|_, _| true)
    }

    /// Largest absolute entry among rows and columns accepted by `keep`.
    pub fn max_norm_on(&self, keep: impl Fn(usize) -> bool) -> f64 {
        self.max_norm_where(|r, c| keep(r) && keep(c))
    }

    /// Largest absolute entry with both indices accepted by `keep(row, col)`.
    pub fn max_norm_where(&self, keep: impl Fn(usize, usize) -> bool) -> f64 {
        let mut max = 0.0_f64;
        for c in 0..self.dim() {
            for r in 0..self.dim() {
                if keep(r, c) {
                    max = max.max(self.entries[(r, c)].norm());
                }
            }
        }
        max
    }

    /// `max |M - M^dagger|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut max = 0.0_f64;
        for c in 0..n {
            for r in c..n {
                let d = self.entries[(r, c)] - self.entries[(c, r)].conj();
                max = max.max(d.norm());
            }
        }
        max
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    /// `<u| M |v>`.
    pub fn matrix_element(&self, u: &DVector<C64>, v: &DVector<C64>) -> C64 {
        u.dotc(&self.apply(v))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self * other)
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix {
            entries: &self.entries + &rhs.entries,
            hermitian: self.hermitian && rhs.hermitian,
        }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix {
            entries: &self.entries - &rhs.entries,
            hermitian: self.hermitian && rhs.hermitian,
        }
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix {
            entries: &self.entries * &rhs.entries,
            hermitian: false,
        }
    }
}

impl Neg for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        OperatorMatrix {
            entries: -&self.entries,
            hermitian: self.hermitian,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for OperatorMatrix {
            type Output = OperatorMatrix;
            fn $f(self, rhs: OperatorMatrix) -> OperatorMatrix {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&OperatorMatrix> for OperatorMatrix {
            type Output = OperatorMatrix;
            fn $f(self, rhs: &OperatorMatrix) -> OperatorMatrix {
                (&self).$f(rhs)
            }
        }
        impl $tr<OperatorMatrix> for &OperatorMatrix {
            type Output = OperatorMatrix;
            fn $f(self, rhs: OperatorMatrix) -> OperatorMatrix {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Accumulates entries so that Hermitian operators come out exactly
/// Hermitian: each off-diagonal value is written together with its conjugate.
struct Builder {
    cfg: HilbertConfig,
    m: DMatrix<C64>,
}

impl Builder {
    fn new(cfg: HilbertConfig) -> Self {
        Builder {
            cfg,
            m: DMatrix::zeros(cfg.dim(), cfg.dim()),
        }
    }

    fn set(&mut self, row: (Spin, usize), col: (Spin, usize), value: C64) {
        let r = self.cfg.index(row.0, row.1);
        let c = self.cfg.index(col.0, col.1);
        self.m[(r, c)] += value;
    }

    /// Writes `value` at (row, col) and `conj(value)` at (col, row).
    fn set_pair(&mut self, row: (Spin, usize), col: (Spin, usize), value: C64) {
        self.set(row, col, value);
        self.set(col, row, value.conj());
    }

    fn diag(&mut self, f: impl Fn(Spin, usize) -> f64) {
        for s in Spin::BOTH {
            for n in 0..=self.cfg.n_max() {
                let i = self.cfg.index(s, n);
                self.m[(i, i)] += C64::new(f(s, n), 0.0);
            }
        }
    }

    fn finish(self, hermitian: bool) -> OperatorMatrix {
        OperatorMatrix::from_entries(self.m, hermitian)
    }
}

fn sqrt_n(n: usize) -> C64 {
    C64::new((n as f64).sqrt(), 0.0)
}

/// Boson operators, tensored with the spin identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BosonKind {
    Annihilate,
    Create,
    Number,
    PositionQ,
    MomentumP,
}

pub fn boson_op(cfg: HilbertConfig, kind: BosonKind) -> OperatorMatrix {
    let mut b = Builder::new(cfg);
    match kind {
        BosonKind::Annihilate | BosonKind::Create => {
            for s in Spin::BOTH {
                for n in 1..=cfg.n_max() {
                    match kind {
                        BosonKind::Annihilate => b.set((s, n - 1), (s, n), sqrt_n(n)),
                        _ => b.set((s, n), (s, n - 1), sqrt_n(n)),
                    }
                }
            }
            return b.finish(false);
        }
        BosonKind::Number => b.diag(|_, n| n as f64),
        BosonKind::PositionQ => {
            for s in Spin::BOTH {
                for n in 1..=cfg.n_max() {
                    b.set_pair((s, n - 1), (s, n), sqrt_n(n) * FRAC_1_SQRT_2);
                }
            }
        }
        BosonKind::MomentumP => {
            // p = i (a^dagger - a) / sqrt 2
            for s in Spin::BOTH {
                for n in 1..=cfg.n_max() {
                    b.set_pair((s, n), (s, n - 1), I * sqrt_n(n) * FRAC_1_SQRT_2);
                }
            }
        }
    }
    b.finish(true)
}

/// Spin operators, tensored with the boson identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinKind {
    SigmaZ,
    SigmaPlus,
    SigmaMinus,
    SigmaX,
    SigmaY,
    /// `S_z = sigma_z / 2`.
    Sz,
}

pub fn spin_op(cfg: HilbertConfig, kind: SpinKind) -> OperatorMatrix {
    use Spin::{Excited as E, Ground as G};
    let mut b = Builder::new(cfg);
    let hermitian = !matches!(kind, SpinKind::SigmaPlus | SpinKind::SigmaMinus);
    for n in 0..=cfg.n_max() {
        match kind {
            SpinKind::SigmaZ => {}
            SpinKind::Sz => {}
            SpinKind::SigmaPlus => b.set((E, n), (G, n), ONE),
            SpinKind::SigmaMinus => b.set((G, n), (E, n), ONE),
            SpinKind::SigmaX => b.set_pair((E, n), (G, n), ONE),
            // sigma_y |g> = -i |e>
            SpinKind::SigmaY => b.set_pair((E, n), (G, n), -I),
        }
    }
    match kind {
        SpinKind::SigmaZ => b.diag(|s, _| s.sigma_z()),
        SpinKind::Sz => b.diag(|s, _| 0.5 * s.sigma_z()),
        _ => {}
    }
    b.finish(hermitian)
}

/// `exp(-i (pi/2) sigma_y)`, written out exactly: `|g> -> -|e>`, `|e> -> |g>`.
pub fn spin_flip(cfg: HilbertConfig) -> OperatorMatrix {
    use Spin::{Excited as E, Ground as G};
    let mut b = Builder::new(cfg);
    for n in 0..=cfg.n_max() {
        b.set((E, n), (G, n), -ONE);
        b.set((G, n), (E, n), ONE);
    }
    b.finish(false)
}

/// Which pair of supersymmetric exchange operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExchangeFamily {
    /// `Q+ = a sigma+`, `Q- = a^dagger sigma-` (rotating terms).
    Q,
    /// `R+ = a sigma-`, `R- = a^dagger sigma+` (counter-rotating terms).
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    Plus,
    Minus,
    /// `X+ + X-`
    X,
    /// `-i (X+ - X-)`
    Y,
}

pub fn exchange_op(cfg: HilbertConfig, family: ExchangeFamily, component: Component) -> OperatorMatrix {
    use Spin::{Excited as E, Ground as G};
    let mut b = Builder::new(cfg);
    // Matrix element of the "plus" operator: |from> -> sqrt(n) |to>.
    for n in 1..=cfg.n_max() {
        let (to, from) = match family {
            ExchangeFamily::Q => ((E, n - 1), (G, n)),
            ExchangeFamily::R => ((G, n - 1), (E, n)),
        };
        let amp = sqrt_n(n);
        match component {
            Component::Plus => b.set(to, from, amp),
            Component::Minus => b.set(from, to, amp),
            Component::X => b.set_pair(to, from, amp),
            Component::Y => b.set_pair(to, from, -I * amp),
        }
    }
    b.finish(matches!(component, Component::X | Component::Y))
}

/// Total excitation number of the rotating (`Plus`) or counter-rotating
/// (`Minus`) sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    /// `N+ = a^dagger a + (1 + sigma_z) / 2`
    Plus,
    /// `N- = a^dagger a + (1 - sigma_z) / 2`
    Minus,
}

pub fn excitation_number(cfg: HilbertConfig, sector: Sector) -> OperatorMatrix {
    let mut b = Builder::new(cfg);
    b.diag(|s, n| {
        let fermion = match (sector, s) {
            (Sector::Plus, Spin::Excited) | (Sector::Minus, Spin::Ground) => 1.0,
            _ => 0.0,
        };
        n as f64 + fermion
    });
    b.finish(true)
}

/// Generators of the single-mode su(1,1) sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Su11Axis {
    X,
    Y,
    Z,
    Plus,
    Minus,
    /// `K_z^2 - {K+, K-} / 2`, evaluated by matrix arithmetic.
    Casimir,
}

pub fn su11_generator(cfg: HilbertConfig, axis: Su11Axis) -> OperatorMatrix {
    let mut b = Builder::new(cfg);
    // a^2 |n> = sqrt(n (n - 1)) |n - 2>
    let pair = |n: usize| C64::new(((n * (n - 1)) as f64).sqrt(), 0.0);
    match axis {
        Su11Axis::Z => b.diag(|_, n| 0.25 * (2 * n + 1) as f64),
        Su11Axis::Casimir => {
            let kz = su11_generator(cfg, Su11Axis::Z);
            let kp = su11_generator(cfg, Su11Axis::Plus);
            let km = su11_generator(cfg, Su11Axis::Minus);
            let anti = &(&kp * &km) + &(&km * &kp);
            let cas = &(&kz * &kz) - &anti.scale_real(0.5);
            return OperatorMatrix::from_entries(cas.into_entries(), true);
        }
        _ => {
            for s in Spin::BOTH {
                for n in 2..=cfg.n_max() {
                    let lo = (s, n - 2);
                    let hi = (s, n);
                    let amp = pair(n);
                    match axis {
                        Su11Axis::Minus => b.set(lo, hi, amp * 0.5),
                        Su11Axis::Plus => b.set(hi, lo, amp * 0.5),
                        Su11Axis::X => b.set_pair(lo, hi, amp * 0.25),
                        // K_y = -(i/4)(a^dagger^2 - a^2): <n|K_y|n-2> = -(i/4) sqrt(n(n-1))
                        Su11Axis::Y => b.set_pair(hi, lo, -I * amp * 0.25),
                        Su11Axis::Z | Su11Axis::Casimir => unreachable!(),
                    }
                }
            }
        }
    }
    let hermitian = !matches!(axis, Su11Axis::Plus | Su11Axis::Minus);
    b.finish(hermitian)
}

/// Parity `sigma_z (x) (-1)^{N_B}`.
pub fn parity(cfg: HilbertConfig) -> OperatorMatrix {
    let mut b = Builder::new(cfg);
    b.diag(|s, n| if n % 2 == 0 { s.sigma_z() } else { -s.sigma_z() });
    b.finish(true)
}

/// Diagonal rotation `exp(-i phi N_B)`.
pub fn boson_rotation(cfg: HilbertConfig, phi: f64) -> OperatorMatrix {
    let mut m = DMatrix::zeros(cfg.dim(), cfg.dim());
    for s in Spin::BOTH {
        for n in 0..=cfg.n_max() {
            let i = cfg.index(s, n);
            m[(i, i)] = C64::from_polar(1.0, -phi * n as f64);
        }
    }
    OperatorMatrix::from_entries(m, false)
}

/// Coefficients of the general parity-preserving Rabi-type Hamiltonian
///
/// `omega a^dag a + (omega0/2) sigma_z + lambda (e^{i phi_l} Q+ + h.c.)
///  + mu (e^{i phi_m} R+ + h.c.) + constant`.
///
/// Unlike [`ModelParams`] no sign restrictions apply, so effective and
/// factorized models can be written with it directly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiTerms {
    pub omega: f64,
    pub omega0: f64,
    pub lambda: f64,
    pub phase_lambda: f64,
    pub mu: f64,
    pub phase_mu: f64,
    pub constant: f64,
}

impl RabiTerms {
    pub fn matrix(&self, cfg: HilbertConfig) -> OperatorMatrix {
        use Spin::{Excited as E, Ground as G};
        let mut b = Builder::new(cfg);
        b.diag(|s, n| self.omega * n as f64 + 0.5 * self.omega0 * s.sigma_z() + self.constant);
        let jc = C64::from_polar(self.lambda, self.phase_lambda);
        let ajc = C64::from_polar(self.mu, self.phase_mu);
        for n in 1..=cfg.n_max() {
            let amp = sqrt_n(n);
            if self.lambda != 0.0 {
                // <e, n-1| Q+ |g, n>
                b.set_pair((E, n - 1), (G, n), jc * amp);
            }
            if self.mu != 0.0 {
                // <g, n-1| R+ |e, n>
                b.set_pair((G, n - 1), (E, n), ajc * amp);
            }
        }
        b.finish(true)
    }
}

/// Builds the JC, aJC or AR Hamiltonian.
///
/// * JC: `omega N_B + (omega0/2) sigma_z + lambda (e^{i theta} Q+ + h.c.)`
/// * aJC: `omega N_B - (omega0/2) sigma_z - mu (e^{-i theta} R- + e^{i theta} R+)`
/// * AR: JC terms plus `mu (e^{i theta} R+ + e^{-i theta} R-)`
pub fn build_hamiltonian(cfg: HilbertConfig, params: &ModelParams, model: Model) -> Result<OperatorMatrix> {
    params.validate()?;
    let terms = match model {
        Model::Jc => RabiTerms {
            omega: params.omega,
            omega0: params.omega0,
            lambda: params.lambda,
            phase_lambda: params.theta,
            mu: 0.0,
            phase_mu: 0.0,
            constant: 0.0,
        },
        Model::AntiJc => RabiTerms {
            omega: params.omega,
            omega0: -params.omega0,
            lambda: 0.0,
            phase_lambda: 0.0,
            // -mu e^{i theta} R+ = mu e^{i (theta + pi)} R+
            mu: params.mu,
            phase_mu: params.theta + std::f64::consts::PI,
            constant: 0.0,
        },
        Model::Ar => {
            if params.lambda == params.mu {
                return Err(Error::EqualCouplings);
            }
            RabiTerms {
                omega: params.omega,
                omega0: params.omega0,
                lambda: params.lambda,
                phase_lambda: params.theta,
                mu: params.mu,
                phase_mu: params.theta,
                constant: 0.0,
            }
        }
    };
    Ok(terms.matrix(cfg))
}

/// Reduced density matrix of the fermion (2x2, index 0 = `|g>`) for a pure state.
pub fn fermion_reduced(cfg: HilbertConfig, psi: &DVector<C64>) -> DMatrix<C64> {
    let mut rho = DMatrix::zeros(2, 2);
    for (a, sa) in Spin::BOTH.iter().enumerate() {
        for (b, sb) in Spin::BOTH.iter().enumerate() {
            let mut acc = ZERO;
            for n in 0..=cfg.n_max() {
                acc += psi[cfg.index(*sa, n)] * psi[cfg.index(*sb, n)].conj();
            }
            rho[(a, b)] = acc;
        }
    }
    rho
}

/// Reduced density matrix of the boson mode, `(n_max + 1)` square.
pub fn boson_reduced(cfg: HilbertConfig, psi: &DVector<C64>) -> DMatrix<C64> {
    let levels = cfg.levels();
    let mut rho = DMatrix::zeros(levels, levels);
    for s in Spin::BOTH {
        for n in 0..levels {
            let an = psi[cfg.index(s, n)];
            if an == ZERO {
                continue;
            }
            for m in 0..levels {
                rho[(n, m)] += an * psi[cfg.index(s, m)].conj();
            }
        }
    }
    rho
}
