use approx::assert_relative_eq;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use susyjc_core::algebra::commutator;
use susyjc_core::far::{constraint_check, far_from_alphas, far_hamiltonian, factorization_residual};
use susyjc_core::hilbert::{build_hamiltonian, parity, spin_flip};
use susyjc_core::jc::{
    closed_form_levels, crossing_pair, diagonal_frame_energy, dressed_energy, dressed_state, ground_state_critical,
    Branch, DressedLabel, JcModel,
};
use susyjc_core::oracle::diagonalize;
use susyjc_core::wigner::{wigner_closed_jc, NumericWigner};
use susyjc_core::{HilbertConfig, Model, ModelParams, C64};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

fn params() -> impl Strategy<Value = ModelParams> {
    (0.5..2.0f64, 0.0..3.0f64, 0.0..2.0f64, 0.0..2.0f64, 0.0..TWO_PI)
        .prop_map(|(w, w0, l, m, t)| ModelParams::new(w, w0, l, m, t).unwrap())
}

fn model() -> impl Strategy<Value = Model> {
    prop_oneof![Just(Model::Jc), Just(Model::AntiJc), Just(Model::Ar)]
}

fn jc_model() -> impl Strategy<Value = JcModel> {
    prop_oneof![Just(JcModel::Jc), Just(JcModel::AntiJc)]
}

fn complex(range: f64) -> impl Strategy<Value = C64> {
    (-range..range, -range..range).prop_map(|(re, im)| C64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hamiltonians_are_exactly_hermitian(p in params(), m in model(), n_max in 2usize..24) {
        let h = build_hamiltonian(HilbertConfig::new(n_max), &p, m).unwrap();
        prop_assert_eq!(h.hermiticity_defect(), 0.0);
    }

    #[test]
    fn spin_flip_maps_jc_onto_ajc(p in params(), n_max in 2usize..20) {
        let cfg = HilbertConfig::new(n_max);
        let jc = build_hamiltonian(cfg, &p, Model::Jc).unwrap();
        let ajc = build_hamiltonian(cfg, &p.mirrored(), Model::AntiJc).unwrap();
        let u = spin_flip(cfg);
        let rotated = &(&u.adjoint() * &jc) * &u;
        prop_assert!((&rotated - &ajc).max_norm() < 1e-12 * jc.max_norm().max(1.0));
    }

    #[test]
    fn parity_is_conserved(p in params(), m in model()) {
        let cfg = HilbertConfig::new(12);
        let h = build_hamiltonian(cfg, &p, m).unwrap();
        let c = commutator(&h, &parity(cfg)).unwrap();
        prop_assert!(c.max_norm() < 1e-12 * h.max_norm().max(1.0));
    }

    #[test]
    fn closed_forms_match_the_oracle(p in params(), jm in jc_model()) {
        // E(-,N) bottoms out below N = lambda^2 / (4 omega^2) <= 4 here
        let cfg = HilbertConfig::new(48);
        let p = if jm == JcModel::AntiJc { p.mirrored() } else { p };
        let sol = diagonalize(&build_hamiltonian(cfg, &p, jm.model()).unwrap()).unwrap();
        for (k, (label, e)) in closed_form_levels(&p, jm, 10).iter().enumerate() {
            prop_assert!(label.n_total + 4 < cfg.n_max());
            prop_assert!((sol.eigenvalues[k] - e).abs() < 1e-9 * e.abs().max(1.0), "level {} ({:?})", k, label);
            let state = dressed_state(label, &p, cfg).unwrap();
            let fid = sol.subspace_fidelity(&state.amplitudes, *e, 1e-8 * e.abs().max(1.0));
            prop_assert!(1.0 - fid < 1e-10);
        }
    }

    #[test]
    fn dressed_states_are_orthonormal(p in params(), jm in jc_model(), n in 1usize..8) {
        let cfg = HilbertConfig::new(10);
        let state = |b, k| dressed_state(&DressedLabel::new(b, k, jm).unwrap(), &p, cfg).unwrap().amplitudes;
        let minus = state(Branch::Minus, n);
        let plus = state(Branch::Plus, n);
        let next = state(Branch::Minus, n + 1);
        assert_relative_eq!(minus.norm(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(plus.norm(), 1.0, epsilon = 1e-14);
        prop_assert!(minus.dotc(&plus).norm() < 1e-14);
        prop_assert!(minus.dotc(&next).norm() < 1e-14);
    }

    #[test]
    fn squared_diagonal_spectrum_has_constant_gap(p in params(), n in 1usize..40) {
        let a = diagonal_frame_energy(n, &p).unwrap();
        let b = diagonal_frame_energy(n + 1, &p).unwrap();
        prop_assert!((b * b - a * a - p.lambda * p.lambda).abs() < 1e-12 * b.abs().max(1.0).powi(2));
    }

    #[test]
    fn spectrum_scales_with_all_frequencies(p in params(), c in 0.1..10.0f64, jm in jc_model()) {
        let scaled = ModelParams::new(c * p.omega, c * p.omega0, c * p.lambda, c * p.mu, p.theta).unwrap();
        let base = closed_form_levels(&p, jm, 8);
        let big = closed_form_levels(&scaled, jm, 8);
        for ((_, e), (_, f)) in base.iter().zip(&big) {
            prop_assert!((c * e - f).abs() < 1e-12 * f.abs().max(1.0));
        }
    }

    #[test]
    fn coupling_phase_leaves_the_spectrum_alone(p in params(), m in model(), t in 0.0..TWO_PI) {
        let cfg = HilbertConfig::new(16);
        let a = diagonalize(&build_hamiltonian(cfg, &p, m).unwrap()).unwrap();
        let b = diagonalize(&build_hamiltonian(cfg, &p.with_theta(t), m).unwrap()).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(b.eigenvalues.iter()) {
            prop_assert!((x - y).abs() < 1e-10 * x.abs().max(1.0));
        }
    }

    #[test]
    fn far_factorization_holds(a0 in complex(1.5), aq in complex(2.0), ar in complex(2.0)) {
        prop_assume!((aq.norm() - ar.norm()).abs() > 1e-3);
        let fp = far_from_alphas(a0, aq, ar).unwrap();
        let cfg = HilbertConfig::new(14);
        let scale = 1.0 + fp.omega * 14.0 + fp.omega_c;
        prop_assert!(factorization_residual(cfg, &fp) < 1e-12 * scale);
        let c = constraint_check(&fp);
        prop_assert!(c.detuning_residual < 1e-12 * (1.0 + ar.norm_sqr()));
        prop_assert!(c.exceptional_residual < 1e-12 * (1.0 + aq.norm_sqr().max(ar.norm_sqr())).powi(2));
    }

    #[test]
    fn far_spectrum_is_nonnegative(a0 in complex(1.0), aq in complex(2.0), ar in complex(1.0)) {
        // {A, A^dag}/2 is positive semidefinite; only the top Fock level is
        // distorted by truncation, which cannot reach the bottom of the spectrum
        prop_assume!(aq.norm() > ar.norm() + 0.2);
        let fp = far_from_alphas(a0, aq, ar).unwrap();
        let sol = diagonalize(&far_hamiltonian(HilbertConfig::new(40), &fp).unwrap()).unwrap();
        prop_assert!(sol.eigenvalues[0] > -1e-9, "{}", sol.eigenvalues[0]);
    }

    #[test]
    fn closed_wigner_is_rotation_invariant(p in params(), jm in jc_model(), n in 0usize..5, r in 0.0..3.0f64, phi in 0.0..TWO_PI) {
        let p = if jm == JcModel::AntiJc { p.mirrored() } else { p };
        let label = DressedLabel::new(Branch::Minus, n, jm).unwrap();
        let on_axis = wigner_closed_jc(&label, &p, C64::new(r, 0.0)).unwrap();
        let rotated = wigner_closed_jc(&label, &p, C64::from_polar(r, phi)).unwrap();
        prop_assert!((on_axis - rotated).abs() < 1e-12);
    }

    #[test]
    fn crossing_couplings_equate_energies(m in 0usize..5, gap in 1usize..5, w0 in 0.2..3.0f64, plus in any::<bool>()) {
        let n = m + gap;
        let branch = if plus && m > 0 { Branch::Plus } else { Branch::Minus };
        let p = ModelParams::jc(1.0, w0, 0.0).unwrap();
        if let Some(rec) = crossing_pair(m, n, branch, &p) {
            let at = p.with_lambda(rec.coupling);
            let left = dressed_energy(&rec.left, &at).unwrap();
            let right = dressed_energy(&rec.right, &at).unwrap();
            prop_assert!((left - right).abs() < 1e-9 * left.abs().max(1.0));
            prop_assert_eq!(rec.right.n_total, n);
        }
    }
}

#[test]
fn resonant_ground_crossings_follow_square_root_ladder() {
    let p = ModelParams::jc(1.3, 1.3, 0.0).unwrap();
    for n in 1..12 {
        let expected = 1.3 * ((n as f64).sqrt() + ((n - 1) as f64).sqrt());
        assert_relative_eq!(ground_state_critical(n, &p).unwrap(), expected, max_relative = 1e-12);
    }
}

fn random_density(rng: &mut ChaCha8Rng, levels: usize) -> DMatrix<C64> {
    let m = DMatrix::from_fn(levels, levels, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let rho = &m * m.adjoint();
    let trace = rho.trace();
    rho / trace
}

#[test]
fn numeric_wigner_is_linear_in_the_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a = random_density(&mut rng, 6);
    let b = random_density(&mut rng, 6);
    let w = 0.3;
    let mix = &a * C64::new(w, 0.0) + &b * C64::new(1.0 - w, 0.0);
    let eval = |rho: &DMatrix<C64>| NumericWigner::for_radius(rho, 2.0).unwrap();
    let (wa, wb, wm) = (eval(&a), eval(&b), eval(&mix));
    for _ in 0..20 {
        let alpha = C64::from_polar(rng.random_range(0.0..2.0), rng.random_range(0.0..TWO_PI));
        let expected = w * wa.eval(alpha).unwrap() + (1.0 - w) * wb.eval(alpha).unwrap();
        assert_relative_eq!(wm.eval(alpha).unwrap(), expected, epsilon = 1e-12);
    }
}

#[test]
fn numeric_wigner_rotates_with_the_state() {
    // exp(-i phi N) maps |alpha> to |alpha e^{-i phi}>, so W turns by -phi
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let rho = random_density(&mut rng, 5);
    let phi: f64 = 0.9;
    let u = DMatrix::from_fn(5, 5, |i, j| if i == j { C64::from_polar(1.0, -phi * i as f64) } else { C64::new(0.0, 0.0) });
    let turned = &u * &rho * u.adjoint();
    let w = NumericWigner::for_radius(&rho, 2.0).unwrap();
    let wt = NumericWigner::for_radius(&turned, 2.0).unwrap();
    for _ in 0..20 {
        let alpha = C64::from_polar(rng.random_range(0.0..2.0), rng.random_range(0.0..TWO_PI));
        let shifted = alpha * C64::from_polar(1.0, phi);
        assert_relative_eq!(wt.eval(alpha).unwrap(), w.eval(shifted).unwrap(), epsilon = 1e-12);
    }
}
