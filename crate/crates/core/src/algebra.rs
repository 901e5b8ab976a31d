//! Residual checks for the (anti)commutation relations of the exchange
//! operators, the su(1,1) boson-pair sector and the deformed su(2) sector.
//!
//! A defect `D` is measured as the largest absolute entry of `P D P`, where
//! `P` is the projector reported with each identity.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::Result;
use crate::hilbert::{
    exchange_op, excitation_number, spin_op, su11_generator, Component, ExchangeFamily,
    HilbertConfig, OperatorMatrix, Sector, SpinKind, Su11Axis, C64,
};

/// Pass threshold for identities that are not exact in floating point.
pub const IDENTITY_TOL: f64 = 1e-12;

/// `AB - BA`.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    Ok(a.try_mul(b)? - b * a)
}

/// `AB + BA`.
pub fn anticommutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    Ok(a.try_mul(b)? + b * a)
}

/// Subspace on which a defect is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projector {
    Full,
    /// Fock levels `n < cutoff`, both spin states.
    BelowLevel(usize),
    /// Fock levels `n < cutoff`, with the `N+` kernel `|g,0>` removed.
    ExcitedBelow(usize),
}

impl Projector {
    pub fn contains(&self, cfg: HilbertConfig, index: usize) -> bool {
        let (spin, n) = cfg.decompose(index);
        match *self {
            Projector::Full => true,
            Projector::BelowLevel(cut) => n < cut,
            Projector::ExcitedBelow(cut) => n < cut && !(spin == crate::hilbert::Spin::Ground && n == 0),
        }
    }
}

impl fmt::Display for Projector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Projector::Full => write!(f, "full"),
            Projector::BelowLevel(c) => write!(f, "n<{c}"),
            Projector::ExcitedBelow(c) => write!(f, "excited,n<{c}"),
        }
    }
}

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub identity_name: String,
    pub residual: f64,
    pub truncation_sensitive: bool,
    /// The identity survives truncation and floating point with zero defect.
    pub exact: bool,
    pub projector: Projector,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        if self.exact {
            self.residual == 0.0
        } else {
            self.residual < IDENTITY_TOL
        }
    }
}

struct Checker {
    cfg: HilbertConfig,
    reports: Vec<IdentityReport>,
}

enum Kind {
    Exact,
    Rounding,
    Truncated(Projector),
}

impl Checker {
    fn new(cfg: HilbertConfig) -> Self {
        Checker {
            cfg,
            reports: Vec::new(),
        }
    }

    /// Records `max |P (lhs - rhs) P|`.
    fn check(&mut self, name: &str, lhs: OperatorMatrix, rhs: &OperatorMatrix, kind: Kind) {
        let defect = &lhs - rhs;
        let (projector, exact, sensitive) = match kind {
            Kind::Exact => (Projector::Full, true, false),
            Kind::Rounding => (Projector::Full, false, false),
            Kind::Truncated(p) => (p, false, true),
        };
        let cfg = self.cfg;
        let residual = defect.max_norm_on(|i| projector.contains(cfg, i));
        self.reports.push(IdentityReport {
            identity_name: name.to_string(),
            residual,
            truncation_sensitive: sensitive,
            exact,
            projector,
        });
    }
}

fn comm(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    &(a * b) - &(b * a)
}

fn anti(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    &(a * b) + &(b * a)
}

/// Nilpotency, SUSY Hamiltonian, Hermitian charges, Casimir property and
/// intertwining for both exchange families, plus the mixed anticommutators.
pub fn check_susy_u11(cfg: HilbertConfig) -> Vec<IdentityReport> {
    let mut c = Checker::new(cfg);
    let zero = OperatorMatrix::zeros(cfg.dim());
    let edge = Kind::Truncated(Projector::BelowLevel(cfg.n_max()));
    let families = [
        (ExchangeFamily::Q, Sector::Plus, "Q", "N+"),
        (ExchangeFamily::R, Sector::Minus, "R", "N-"),
    ];
    for (family, sector, x, n) in families {
        let plus = exchange_op(cfg, family, Component::Plus);
        let minus = exchange_op(cfg, family, Component::Minus);
        let cx = exchange_op(cfg, family, Component::X);
        let cy = exchange_op(cfg, family, Component::Y);
        let h = excitation_number(cfg, sector);
        let edge = || Kind::Truncated(Projector::BelowLevel(cfg.n_max()));

        c.check(&format!("{x}+^2 = 0"), &plus * &plus, &zero, Kind::Exact);
        c.check(&format!("{x}-^2 = 0"), &minus * &minus, &zero, Kind::Exact);
        c.check(&format!("{{{x}+, {x}-}} = {n}"), anti(&plus, &minus), &h, edge());
        c.check(&format!("{x}x^2 = {n}"), &cx * &cx, &h, edge());
        c.check(&format!("{x}y^2 = {n}"), &cy * &cy, &h, edge());
        c.check(&format!("{{{x}x, {x}y}} = 0"), anti(&cx, &cy), &zero, Kind::Rounding);
        c.check(&format!("[{n}, {x}+] = 0"), comm(&h, &plus), &zero, Kind::Exact);
        c.check(&format!("[{n}, {x}-] = 0"), comm(&h, &minus), &zero, Kind::Exact);

        let h_b = &minus * &plus;
        let h_f = &plus * &minus;
        c.check(
            &format!("{x}- H_F = H_B {x}-"),
            &minus * &h_f,
            &(&h_b * &minus),
            Kind::Rounding,
        );
        c.check(
            &format!("H_F {x}+ = {x}+ H_B"),
            &h_f * &plus,
            &(&plus * &h_b),
            Kind::Rounding,
        );
    }

    let qp = exchange_op(cfg, ExchangeFamily::Q, Component::Plus);
    let qm = exchange_op(cfg, ExchangeFamily::Q, Component::Minus);
    let rp = exchange_op(cfg, ExchangeFamily::R, Component::Plus);
    let rm = exchange_op(cfg, ExchangeFamily::R, Component::Minus);
    let k_minus2 = su11_generator(cfg, Su11Axis::Minus).scale_real(2.0);
    let k_plus2 = su11_generator(cfg, Su11Axis::Plus).scale_real(2.0);
    c.check("{Q+, R+} = 2K-", anti(&qp, &rp), &k_minus2, edge);
    c.check(
        "{Q-, R-} = 2K+",
        anti(&qm, &rm),
        &k_plus2,
        Kind::Truncated(Projector::BelowLevel(cfg.n_max())),
    );
    c.check("{Q-, R+} = 0", anti(&qm, &rp), &zero, Kind::Exact);
    c.check("{Q+, R-} = 0", anti(&qp, &rm), &zero, Kind::Exact);
    c.reports
}

/// su(1,1) commutators and the Casimir value `-3/16` of the boson-pair sector.
pub fn check_su11(cfg: HilbertConfig) -> Vec<IdentityReport> {
    let mut c = Checker::new(cfg);
    let interior = || Kind::Truncated(Projector::BelowLevel(cfg.n_max().saturating_sub(1)));
    let kx = su11_generator(cfg, Su11Axis::X);
    let ky = su11_generator(cfg, Su11Axis::Y);
    let kz = su11_generator(cfg, Su11Axis::Z);
    let kp = su11_generator(cfg, Su11Axis::Plus);
    let km = su11_generator(cfg, Su11Axis::Minus);
    let i = C64::new(0.0, 1.0);

    c.check("[Kz, K+] = K+", comm(&kz, &kp), &kp, interior());
    c.check("[Kz, K-] = -K-", comm(&kz, &km), &(-&km), interior());
    c.check("[K+, K-] = -2Kz", comm(&kp, &km), &kz.scale_real(-2.0), interior());
    c.check("[Kx, Ky] = -iKz", comm(&kx, &ky), &kz.scale(-i), interior());
    c.check("[Ky, Kz] = iKx", comm(&ky, &kz), &kx.scale(i), interior());
    c.check("[Kz, Kx] = iKy", comm(&kz, &kx), &ky.scale(i), interior());
    let casimir = su11_generator(cfg, Su11Axis::Casimir);
    let value = OperatorMatrix::identity(cfg.dim()).scale_real(-3.0 / 16.0);
    c.check("K^2 = -3/16", casimir, &value, interior());
    c.reports
}

/// `N+^{-1/2}` with the kernel vector `|g,0>` mapped to zero.
pub fn inverse_sqrt_excitation(cfg: HilbertConfig) -> OperatorMatrix {
    let n = excitation_number(cfg, Sector::Plus);
    let mut m = DMatrix::zeros(cfg.dim(), cfg.dim());
    for k in 0..cfg.dim() {
        let v = n.get(k, k).re;
        if v > 0.0 {
            m[(k, k)] = C64::new(1.0 / v.sqrt(), 0.0);
        }
    }
    OperatorMatrix::from_entries(m, true)
}

/// `S^(Q)_x` and `S^(Q)_y`, the su(2) generators of the excited subspaces.
pub fn excited_su2_generators(cfg: HilbertConfig) -> (OperatorMatrix, OperatorMatrix) {
    let inv = inverse_sqrt_excitation(cfg).scale_real(0.5);
    let qx = exchange_op(cfg, ExchangeFamily::Q, Component::X);
    let qy = exchange_op(cfg, ExchangeFamily::Q, Component::Y);
    (&inv * &qx, &inv * &qy)
}

/// Deformed su(2) relations of both families and the standard su(2)
/// relations of the normalized generators on the excited subspaces.
pub fn check_deformed_su2(cfg: HilbertConfig) -> Vec<IdentityReport> {
    let mut c = Checker::new(cfg);
    let sz = spin_op(cfg, SpinKind::Sz);
    let edge = || Kind::Truncated(Projector::BelowLevel(cfg.n_max()));

    let qp = exchange_op(cfg, ExchangeFamily::Q, Component::Plus);
    let qm = exchange_op(cfg, ExchangeFamily::Q, Component::Minus);
    let rp = exchange_op(cfg, ExchangeFamily::R, Component::Plus);
    let rm = exchange_op(cfg, ExchangeFamily::R, Component::Minus);
    let np = excitation_number(cfg, Sector::Plus);
    let nm = excitation_number(cfg, Sector::Minus);

    c.check("[Sz, Q+] = Q+", comm(&sz, &qp), &qp, Kind::Exact);
    c.check("[Sz, Q-] = -Q-", comm(&sz, &qm), &(-&qm), Kind::Exact);
    c.check("[Q+, Q-] = 2 H_Q Sz", comm(&qp, &qm), &(&np * &sz).scale_real(2.0), edge());
    c.check("[Sz, R+] = -R+", comm(&sz, &rp), &(-&rp), Kind::Exact);
    c.check("[Sz, R-] = R-", comm(&sz, &rm), &rm, Kind::Exact);
    c.check("[R+, R-] = -2 H_R Sz", comm(&rp, &rm), &(&nm * &sz).scale_real(-2.0), edge());

    let (sx, sy) = excited_su2_generators(cfg);
    let excited = || Kind::Truncated(Projector::ExcitedBelow(cfg.n_max()));
    let i = C64::new(0.0, 1.0);
    c.check("[Sx(Q), Sy(Q)] = i Sz", comm(&sx, &sy), &sz.scale(i), excited());
    c.check("[Sy(Q), Sz] = i Sx(Q)", comm(&sy, &sz), &sx.scale(i), excited());
    c.check("[Sz, Sx(Q)] = i Sy(Q)", comm(&sz, &sx), &sy.scale(i), excited());
    let half = OperatorMatrix::identity(cfg.dim()).scale_real(0.5);
    c.check("Sx(Q)^2 + Sy(Q)^2 = 1/2", &(&sx * &sx) + &(&sy * &sy), &half, excited());
    c.reports
}

/// All three suites in a fixed order.
pub fn check_all(cfg: HilbertConfig) -> Vec<IdentityReport> {
    let mut all = check_susy_u11(cfg);
    all.extend(check_su11(cfg));
    all.extend(check_deformed_su2(cfg));
    all
}
