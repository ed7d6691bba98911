mod common;

use hpcqc::circuit::{build_ansatz, AnsatzKind};
use hpcqc::random::{clifford_circuit, mixed_circuit, random_params};
use hpcqc::transpile::{t_count, transpile, SynthesisCost, SynthesisMode};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sequence_mode_is_equivalent(seed in any::<u64>(), n in 1usize..=3, m in 1usize..8, eps in prop::sample::select(vec![1e-1, 3e-2, 1e-2])) {
        let c = mixed_circuit(n, m, &mut rng(seed));
        let out = transpile(&c, eps, SynthesisMode::Sequence, &SynthesisCost::default()).unwrap();
        prop_assert!(out.circuit.gates().all(|g| g.kind().is_restricted()));
        prop_assert!(out.approx_error <= out.approximated as f64 * eps + 1e-12);
        let f = common::trace_fidelity(&common::unitary_columns(&c), &common::unitary_columns(&out.circuit));
        prop_assert!(f >= 1.0 - out.approximated as f64 * eps - 1e-9, "fidelity {}", f);
    }

    #[test]
    fn clifford_circuits_need_no_t(seed in any::<u64>(), n in 1usize..=6, m in 0usize..60) {
        let c = clifford_circuit(n, m, &mut rng(seed));
        let r = t_count(&c, 1e-3).unwrap();
        prop_assert_eq!((r.t_full, r.t_sym), (0, 0));
    }

    #[test]
    fn t_full_never_grows_with_epsilon(seed in any::<u64>(), n in 1usize..=4, m in 0usize..30, a in 1e-6f64..0.5, b in 1e-6f64..0.5) {
        let c = mixed_circuit(n, m, &mut rng(seed));
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(t_count(&c, lo).unwrap().t_full >= t_count(&c, hi).unwrap().t_full);
    }

    #[test]
    fn t_sym_bounded_by_depth(seed in any::<u64>(), n in 1usize..=5, m in 0usize..40) {
        let c = mixed_circuit(n, m, &mut rng(seed));
        let r = t_count(&c, 1e-3).unwrap();
        prop_assert!(r.t_sym <= c.depth() as u64);
        if r.t_full >= c.depth() as u64 {
            prop_assert!(r.t_sym <= r.t_full);
        }
    }

    #[test]
    fn generic_ansatz_t_sym_is_depth(seed in any::<u64>(), k in 0usize..4, n in 2usize..=6, depth in 1usize..=6) {
        let kind = AnsatzKind::ALL[k];
        let params = random_params(kind.param_count(n, depth), &mut rng(seed));
        let c = build_ansatz(kind, n, depth, &params).unwrap();
        prop_assert_eq!(t_count(&c, 1e-3).unwrap().t_sym, depth as u64);
    }
}

#[test]
fn strongly_entangling_counts_every_euler_angle() {
    let kind = AnsatzKind::StronglyEntangling;
    let params = random_params(kind.param_count(4, 3), &mut rng(1));
    let c = build_ansatz(kind, 4, 3, &params).unwrap();
    let r = t_count(&c, 1e-3).unwrap();
    // 12 U3 gates, 3 Euler rotations each, ceil(3 log2 1000) + 4 = 34 apiece
    assert_eq!(r.t_full, 36 * 34);
    assert_eq!(r.t_sym, 3);
}
