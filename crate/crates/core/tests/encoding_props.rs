use hpcqc::encoding::{encoding_cost, EOTensorSpec, EncodingScheme, Modality};
use proptest::prelude::*;

fn modality() -> impl Strategy<Value = Modality> {
    prop::sample::select(vec![Modality::Hyperspectral, Modality::Multispectral, Modality::Polarimetric])
}

fn spec() -> impl Strategy<Value = EOTensorSpec> {
    (1u64..2000, 1u64..2000, 1u64..300, modality(), any::<bool>()).prop_map(|(i, j, k, m, sym)| {
        if m == Modality::Polarimetric {
            EOTensorSpec::with_symmetry(i, j, 3 + k % 2, m, sym).unwrap()
        } else {
            EOTensorSpec::new(i, j, k, m).unwrap()
        }
    })
}

fn schemes() -> Vec<EncodingScheme> {
    vec![EncodingScheme::AnglePerFeature, EncodingScheme::Amplitude, EncodingScheme::HybridCompressed(16)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn per_pixel_angle_ignores_image_size(s in spec(), i in 1u64..5000, j in 1u64..5000) {
        let other = EOTensorSpec { i, j, ..s };
        prop_assert_eq!(
            encoding_cost(&s, EncodingScheme::AnglePerFeature, true),
            encoding_cost(&other, EncodingScheme::AnglePerFeature, true)
        );
    }

    #[test]
    fn hybrid_cost_is_its_target(s in spec(), f in 1u64..10_000, per_pixel in any::<bool>()) {
        let c = encoding_cost(&s, EncodingScheme::hybrid(f).unwrap(), per_pixel);
        prop_assert_eq!((c.qubits, c.gates), (f, f));
    }

    #[test]
    fn amplitude_qubits_are_ceil_log2(s in spec()) {
        let features = if s.modality == Modality::Polarimetric && s.symmetric_scattering { 3 } else { s.k };
        let n = s.i * s.j * features;
        let mut q = 0;
        while (1u128 << q) < n as u128 {
            q += 1;
        }
        prop_assert_eq!(encoding_cost(&s, EncodingScheme::Amplitude, false).qubits, q);
    }

    #[test]
    fn whole_image_cost_grows_with_each_dimension(s in spec(), di in 0u64..100, dj in 0u64..100, dk in 0u64..50) {
        let k = if s.modality == Modality::Polarimetric { s.k } else { s.k + dk };
        let bigger = EOTensorSpec { i: s.i + di, j: s.j + dj, k, ..s };
        for scheme in schemes() {
            prop_assert!(encoding_cost(&bigger, scheme, false).gates >= encoding_cost(&s, scheme, false).gates);
        }
    }
}

#[test]
fn polarimetric_without_symmetry_grows_with_k() {
    let k3 = EOTensorSpec::new(10, 10, 3, Modality::Polarimetric).unwrap();
    let k4 = EOTensorSpec::new(10, 10, 4, Modality::Polarimetric).unwrap();
    for scheme in schemes() {
        assert!(encoding_cost(&k4, scheme, false).gates >= encoding_cost(&k3, scheme, false).gates);
    }
}
