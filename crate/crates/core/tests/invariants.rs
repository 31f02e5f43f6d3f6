use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use noisy_amp::channels::{
    apply_operation, bs_subtraction, build_operator, pila_channel, pila_coherent, Detector, PhotonicOp,
};
use noisy_amp::fock::{Mode, Tensor};
use noisy_amp::metrics::{evaluate, holevo_variance};
use noisy_amp::schemes::PilaThenOp;
use noisy_amp::scissor::{scissor_amplify, ScissorConfig};
use noisy_amp::{Complex64 as C64, DensityOperator, FockOperator, HilbertSpec, Ket, TruncationPolicy};

const DIM: usize = 48;
const SUPPORT: usize = 6;

fn spec(dim: usize) -> HilbertSpec {
    HilbertSpec::new(dim).unwrap()
}

/// Mixture of two random kets supported on the lowest `SUPPORT` levels.
fn low_photon_state() -> impl Strategy<Value = DensityOperator> {
    let ket = prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), SUPPORT);
    (ket.clone(), ket, 0.0f64..1.0).prop_filter_map("degenerate ket", |(a, b, p)| {
        let to_vec = |v: Vec<(f64, f64)>| {
            let mut amps = DVector::zeros(DIM);
            for (i, (re, im)) in v.into_iter().enumerate() {
                amps[i] = C64::new(re, im);
            }
            let n = amps.norm();
            (n > 1e-3).then(|| amps.unscale(n))
        };
        let (a, b) = (to_vec(a)?, to_vec(b)?);
        let m = a.clone() * a.adjoint() * C64::from(p) + b.clone() * b.adjoint() * C64::from(1.0 - p);
        DensityOperator::new(m, spec(DIM)).ok()
    })
}

fn op_strategy() -> impl Strategy<Value = PhotonicOp> {
    prop_oneof![
        (1u32..=2).prop_map(PhotonicOp::Subtract),
        (1u32..=2).prop_map(PhotonicOp::Add),
        (0.0f64..=1.0).prop_map(|r| PhotonicOp::coherent(r).unwrap()),
    ]
}

fn max_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pila_channel_preserves_trace_and_adds_minimal_noise(rho in low_photon_state(), gain in 1.0f64..1.6) {
        let out = pila_channel(&rho, gain).unwrap();
        prop_assert!((out.trace() - 1.0).abs() < 1e-9);
        let n_in = rho.mean_photon_number().unwrap();
        let n_out = out.mean_photon_number().unwrap();
        prop_assert!((n_out - (gain * n_in + gain - 1.0)).abs() < 1e-7);
        prop_assert!(out.min_eigenvalue() > -1e-9);
    }

    #[test]
    fn pila_gains_compose(re in -0.5f64..0.5, im in -0.5f64..0.5, g1 in 1.0f64..1.5, g2 in 1.0f64..1.5) {
        let s = spec(90);
        let alpha = C64::new(re, im);
        let once = pila_coherent(alpha, g1 * g2, s).unwrap();
        let twice = pila_channel(&pila_coherent(alpha, g1, s).unwrap(), g2).unwrap();
        prop_assert!(max_diff(once.matrix(), twice.matrix()) < 1e-7);
    }

    #[test]
    fn heralding_weight_is_expectation_of_o_dagger_o(rho in low_photon_state(), op in op_strategy()) {
        let o = build_operator(op, rho.spec()).unwrap();
        let out = apply_operation(&rho, &o).unwrap();
        let oo = FockOperator::new(o.matrix().adjoint() * o.matrix(), rho.spec()).unwrap();
        let expected = rho.expectation(&oo).unwrap();
        prop_assert!((out.weight() - expected.re).abs() < 1e-9);
        prop_assert!(expected.im.abs() < 1e-9);
    }

    #[test]
    fn number_changing_ops_are_phase_covariant(
        phi in 0.0f64..std::f64::consts::TAU,
        gain in 1.0f64..2.0,
        m in 1u32..=2,
        add in any::<bool>(),
    ) {
        let op = if add { PhotonicOp::Add(m) } else { PhotonicOp::Subtract(m) };
        let scheme = PilaThenOp::new(gain, op).unwrap();
        let policy = TruncationPolicy::default();
        let base = evaluate(&scheme, C64::new(0.3, 0.0), &policy).unwrap().report;
        let rotated = evaluate(&scheme, C64::from_polar(0.3, phi), &policy).unwrap().report;
        prop_assert!((base.effective_gain - rotated.effective_gain).abs() < 1e-8);
        prop_assert!((base.fidelity - rotated.fidelity).abs() < 1e-8);
        prop_assert!((base.holevo_variance - rotated.holevo_variance).abs() < 1e-8);
    }

    #[test]
    fn partial_trace_undoes_tensor(
        a in (-1.0f64..1.0, -1.0f64..1.0),
        b in (-1.0f64..1.0, -1.0f64..1.0),
    ) {
        let s = spec(24);
        let rho = Ket::coherent(C64::new(a.0, a.1), s).unwrap().projector();
        let sigma = Ket::coherent(C64::new(b.0, b.1), s).unwrap().projector();
        let joint = rho.tensor(&sigma);
        prop_assert!((joint.trace() - rho.trace() * sigma.trace()).abs() < 1e-12);
        let first = joint.partial_trace(Mode::First);
        let second = joint.partial_trace(Mode::Second);
        prop_assert!(max_diff(first.matrix(), &rho.matrix().scale(sigma.trace())) < 1e-12);
        prop_assert!(max_diff(second.matrix(), &sigma.matrix().scale(rho.trace())) < 1e-12);
    }

    #[test]
    fn displacements_compose_up_to_a_phase(
        b in (-0.8f64..0.8, -0.8f64..0.8),
        c in (-0.8f64..0.8, -0.8f64..0.8),
    ) {
        // truncated products are exact on the low block when the cutoff is large
        let s = spec(80);
        let (beta, gamma) = (C64::new(b.0, b.1), C64::new(c.0, c.1));
        let product = FockOperator::displacement(beta, s).matrix() * FockOperator::displacement(gamma, s).matrix();
        let phase = C64::from_polar(1.0, (beta * gamma.conj()).im);
        let joint = FockOperator::displacement(beta + gamma, s).matrix() * phase;
        let k = 12;
        let err = max_diff(&product.view((0, 0), (k, k)).into_owned(), &joint.view((0, 0), (k, k)).into_owned());
        prop_assert!(err < 1e-10, "error {err}");
    }

    #[test]
    fn beam_splitter_heralds_are_probabilities(rho in low_photon_state(), t in 0.05f64..0.999, k in 0u32..3) {
        let detector = if k == 0 { Detector::OnOff } else { Detector::FockProjection(k) };
        match bs_subtraction(&rho, t, detector) {
            Ok(h) => {
                prop_assert!(h.success_probability > 0.0 && h.success_probability <= 1.0 + 1e-12);
                prop_assert!((h.state.trace() - 1.0).abs() < 1e-9);
                prop_assert!(h.state.min_eigenvalue() > -1e-9);
            }
            // the state may have no weight above k photons
            Err(e) => prop_assert!(matches!(e, noisy_amp::Error::ZeroTrace { .. }), "{e}"),
        }
    }

    #[test]
    fn scissor_output_is_truncated_and_probabilistic(
        re in -1.5f64..1.5,
        im in -1.5f64..1.5,
        arms in 1usize..=4,
        g in 0.3f64..3.0,
    ) {
        let s = spec(40);
        let psi = Ket::coherent(C64::new(re, im), s).unwrap();
        let cfg = ScissorConfig::new(arms, g, s).unwrap();
        let h = scissor_amplify(&psi, &cfg).unwrap();
        prop_assert!(h.success_probability > 0.0 && h.success_probability <= 1.0);
        let m = h.state.matrix();
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                if i > arms || j > arms {
                    prop_assert!(m[(i, j)].norm() == 0.0);
                }
            }
        }
        prop_assert!(holevo_variance(&h.state) >= -1e-12);
    }
}
