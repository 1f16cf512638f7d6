use mns::linalg::{haar_unitary, haar_unitary_with};
use mns::mps::renyi_entropy;
use mns::oracle::DenseState;
use mns::{ComplexMatrix, Gate, MpsState, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn zero_states(n: usize) -> Vec<Vec<C64>> {
    vec![vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]; n]
}

/// Random two-qubit gates on random (possibly distant) pairs.
fn random_gates(n: usize, count: usize, seed: u64) -> Vec<Gate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a = rng.random_range(0..n);
            let b = (a + rng.random_range(1..n)) % n;
            Gate::Two { sites: (a, b), matrix: haar_unitary_with(4, &mut rng).unwrap() }
        })
        .collect()
}

fn adjoint(g: &Gate) -> Gate {
    match g {
        Gate::Two { sites, matrix } => Gate::Two { sites: *sites, matrix: matrix.adjoint() },
        Gate::Single { site, matrix } => Gate::Single { site: *site, matrix: matrix.adjoint() },
        Gate::Diagonal { sites, phases } => Gate::Diagonal { sites: sites.clone(), phases: phases.iter().map(|p| p.conj()).collect() },
    }
}

fn run(n: usize, chi: Option<usize>, gates: &[Gate]) -> MpsState {
    let mut s = MpsState::product(&zero_states(n), chi).unwrap();
    gates.iter().for_each(|g| s.apply_gate(g).unwrap());
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn norm_accounts_for_discarded_weight(n in 3usize..7, chi in 1usize..4, count in 1usize..15, seed in any::<u64>()) {
        let s = run(n, Some(chi), &random_gates(n, count, seed));
        let norm: f64 = s.to_statevector().unwrap().iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((1.0 - norm - s.discarded_weight()).abs() <= 1e-8);
    }

    #[test]
    fn gate_then_adjoint_restores_spectra(n in 2usize..7, count in 1usize..10, seed in any::<u64>()) {
        let prefix = random_gates(n, 4, seed ^ 0xa5);
        let mut s = run(n, None, &prefix);
        let before = s.lambdas().to_vec();
        let gates = random_gates(n, count, seed);
        gates.iter().for_each(|g| s.apply_gate(g).unwrap());
        gates.iter().rev().for_each(|g| s.apply_gate(&adjoint(g)).unwrap());
        for (a, b) in before.iter().zip(s.lambdas()) {
            let k = a.len().max(b.len());
            for i in 0..k {
                let x = a.get(i).copied().unwrap_or(0.0);
                let y = b.get(i).copied().unwrap_or(0.0);
                prop_assert!((x - y).abs() <= 1e-10, "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn bond_entropy_matches_both_reduced_spectra(n in 2usize..7, count in 1usize..10, alpha in 0.5..3.0f64, seed in any::<u64>()) {
        // Round-off singular values matter for small alpha; drop them on the dense side.
        let gates = random_gates(n, count, seed);
        let s = run(n, None, &gates);
        let mut dense = DenseState::product(&zero_states(n)).unwrap();
        gates.iter().for_each(|g| dense.apply_gate(g).unwrap());
        let amps = dense.amplitudes();
        for bond in 0..n - 1 {
            let (l, r) = (1usize << (bond + 1), 1usize << (n - bond - 1));
            let m = ComplexMatrix::from_fn(l, r, |i, j| amps[i * r + j]);
            let left: Vec<f64> = mns::linalg::svd(&m).unwrap().singular_values.iter().map(|x| x * x).filter(|&p| p > 1e-24).collect();
            let right: Vec<f64> = mns::linalg::svd(&m.transpose()).unwrap().singular_values.iter().map(|x| x * x).filter(|&p| p > 1e-24).collect();
            let e = s.bond_entropy(bond, alpha).unwrap();
            prop_assert!((renyi_entropy(&left, alpha).unwrap() - e).abs() <= 1e-9);
            prop_assert!((renyi_entropy(&right, alpha).unwrap() - e).abs() <= 1e-9);
        }
    }

    #[test]
    fn larger_chi_never_discards_more(n in 4usize..7, count in 4usize..14, seed in any::<u64>()) {
        let gates = random_gates(n, count, seed);
        let weights: Vec<f64> = (1..=4).map(|chi| run(n, Some(chi), &gates).discarded_weight()).collect();
        for w in weights.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12, "{weights:?}");
        }
    }
}

#[test]
fn single_gate_adjoint_roundtrip() {
    let u = haar_unitary(2, 5).unwrap();
    let mut s = MpsState::product(&zero_states(1), None).unwrap();
    s.apply_gate(&Gate::Single { site: 0, matrix: u.clone() }).unwrap();
    s.apply_gate(&Gate::Single { site: 0, matrix: u.adjoint() }).unwrap();
    assert!((s.to_statevector().unwrap()[0].norm() - 1.0).abs() < 1e-12);
}
