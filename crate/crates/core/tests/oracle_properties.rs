use mns::iqp::{random_iqp_circuit, IqpCircuit, NoiseModel, NoiseSpec};
use mns::oracle::{exact_bs_probability, exact_lossy_bs_distribution, exact_noisy_iqp_distribution, noisy_iqp_density};
use mns::photonic::{brickwall_gatelist, InputKind, LossyInputSpec, Parity};
use proptest::prelude::*;

fn input_kind(which: u8, gamma: f64) -> InputKind {
    match which % 4 {
        0 => InputKind::SinglePhoton,
        1 => InputKind::Fock { n: 2 },
        2 => InputKind::Cat { parity: Parity::Odd, gamma, cutoff: Some(6) },
        _ => InputKind::Cat { parity: Parity::Even, gamma, cutoff: Some(6) },
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lossy_distribution_is_normalized(m in 2usize..4, which in any::<u8>(), eta in 0.0..=1.0f64,
                                        gamma in 0.3..0.8f64, seed in any::<u64>()) {
        let kind = input_kind(which, gamma);
        let mut spec = LossyInputSpec::new(kind, m, 1, eta);
        if matches!(kind, InputKind::Cat { .. }) {
            spec.local_dim = Some(7);
        }
        let circuit = brickwall_gatelist(m, 2 * m, seed).unwrap();
        let table = exact_lossy_bs_distribution(&spec, &circuit).unwrap();
        prop_assert!((table.total() - 1.0).abs() <= 1e-10);
        prop_assert!(table.iter().all(|(_, p)| p >= -1e-12));
    }

    #[test]
    fn lossless_distribution_matches_permanents(m in 2usize..6, n in 1usize..3, seed in any::<u64>()) {
        prop_assume!(n <= m);
        let spec = LossyInputSpec::new(InputKind::SinglePhoton, m, n, 1.0);
        let circuit = brickwall_gatelist(m, 2 * m, seed).unwrap();
        let table = exact_lossy_bs_distribution(&spec, &circuit).unwrap();
        let u = circuit.transfer_matrix();
        for (outcome, p) in table.iter() {
            if outcome.iter().sum::<usize>() != n {
                prop_assert!(p.abs() <= 1e-10);
                continue;
            }
            let q = exact_bs_probability(&u, outcome, n).unwrap();
            prop_assert!((p - q).abs() <= 1e-10, "{outcome:?}: {p} vs {q}");
        }
    }

    #[test]
    fn noisy_iqp_keeps_unit_trace_per_layer(n in 1usize..6, depth in 1usize..4, p in 0.0..=0.5f64,
                                            depolarizing in any::<bool>(), extra in any::<bool>(), seed in any::<u64>()) {
        let circuit = random_iqp_circuit(n, depth, 0.5, seed).unwrap();
        let model = if depolarizing { NoiseModel::Depolarizing } else { NoiseModel::Dephasing };
        let noise = NoiseSpec { model, rate: p, extra_noise_layer: extra };
        for t in 1..=depth {
            let prefix = IqpCircuit::new(n, circuit.layers()[..t].to_vec()).unwrap();
            for hadamards in [false, true] {
                let rho = noisy_iqp_density(&prefix, &noise, hadamards).unwrap();
                prop_assert!((rho.trace().re - 1.0).abs() <= 1e-10);
                prop_assert!(rho.trace().im.abs() <= 1e-10);
                prop_assert!(rho.hermiticity_deviation() <= 1e-10);
            }
        }
        let table = exact_noisy_iqp_distribution(&circuit, &noise).unwrap();
        prop_assert!((table.total() - 1.0).abs() <= 1e-10);
    }
}
