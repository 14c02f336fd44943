mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{naive_cmi, naive_mi, random_table, spearman};
use semantic_chemotaxis::agent::Weight;
use semantic_chemotaxis::engine::{Trace, TraceSet};
use semantic_chemotaxis::lattice::{Lattice, Position};
use semantic_chemotaxis::metrics::{
    build_histogram, conditional_mutual_information, direction_index, mutual_information, EnvWeighting,
    JointHistogram, PairHistogram, ReducedEnvState,
};
use semantic_chemotaxis::world::NutrientSnapshot;

#[test]
fn cmi_matches_naive_summation_on_fixed_seed_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let dims = [rng.random_range(1..=8), rng.random_range(1..=8), rng.random_range(1..=8)];
        let t = random_table(&mut rng, dims.iter().product(), 0.3);
        if t.iter().all(|&w| w == 0.0) {
            continue;
        }
        let got = conditional_mutual_information(&JointHistogram::from_weights(dims, t.clone())).unwrap();
        assert!((got - naive_cmi(&t, dims)).abs() < 1e-12, "dims {dims:?}");
    }
}

#[test]
fn random_five_cubed_table() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let t = random_table(&mut rng, 125, 0.0);
    let got = conditional_mutual_information(&JointHistogram::from_weights([5, 5, 5], t.clone())).unwrap();
    assert!((got - naive_cmi(&t, [5, 5, 5])).abs() < 1e-12);
}

proptest! {
    #[test]
    fn cmi_agrees_with_oracle(
        dims in (1usize..=8, 1usize..=8, 1usize..=8),
        seed in any::<u64>(),
        zero_frac in 0.0f64..0.8,
    ) {
        let dims = [dims.0, dims.1, dims.2];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_table(&mut rng, dims.iter().product(), zero_frac);
        prop_assume!(t.iter().any(|&w| w > 0.0));
        let h = JointHistogram::from_weights(dims, t.clone());
        let got = conditional_mutual_information(&h).unwrap();
        prop_assert!(got >= 0.0);
        prop_assert!((got - naive_cmi(&t, dims)).abs() < 1e-12);
        // Conditioning on the current state can't exceed log2 of the smaller alphabet.
        prop_assert!(got <= (dims[0].min(dims[2]) as f64).log2() + 1e-12);
    }

    #[test]
    fn mi_agrees_with_oracle(
        dims in (1usize..=8, 1usize..=8),
        seed in any::<u64>(),
        zero_frac in 0.0f64..0.8,
    ) {
        let dims = [dims.0, dims.1];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_table(&mut rng, dims[0] * dims[1], zero_frac);
        prop_assume!(t.iter().any(|&w| w > 0.0));
        let got = mutual_information(&PairHistogram::from_weights(dims, t.clone())).unwrap();
        prop_assert!(got >= 0.0);
        prop_assert!((got - naive_mi(&t, dims)).abs() < 1e-12);
    }

    #[test]
    fn cmi_is_scale_invariant(seed in any::<u64>(), scale in 0.001f64..1000.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_table(&mut rng, 4 * 3 * 5, 0.2);
        prop_assume!(t.iter().any(|&w| w > 0.0));
        let a = conditional_mutual_information(&JointHistogram::from_weights([4, 3, 5], t.clone())).unwrap();
        let scaled = t.iter().map(|w| w * scale).collect();
        let b = conditional_mutual_information(&JointHistogram::from_weights([4, 3, 5], scaled)).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }
}

/// Three-state chain on a 2x2 lattice: the bacterium hops between
/// (1,1), (1,2) and (2,1); the environment is empty, one nutrient, or two
/// nutrients on distinct cells, with a law that depends on the current cell.
#[test]
fn histogram_recovers_known_markov_joint() {
    let lattice = Lattice::new(2);
    let states = [Position::new(1, 1), Position::new(1, 2), Position::new(2, 1)];
    let p0 = [0.5, 0.3, 0.2];
    let transition = [[0.6, 0.3, 0.1], [0.2, 0.5, 0.3], [0.1, 0.1, 0.8]];
    // Per current state: (probability, nutrient cells).
    let env: [Vec<(f64, Vec<Position>)>; 3] = [
        vec![(0.4, vec![]), (0.6, vec![Position::new(2, 2)])],
        vec![(0.5, vec![Position::new(1, 1)]), (0.5, vec![Position::new(1, 1), Position::new(2, 2)])],
        vec![(0.2, vec![]), (0.3, vec![Position::new(2, 1)]), (0.5, vec![Position::new(1, 2), Position::new(1, 2), Position::new(2, 2)])],
    ];

    let pick = |rng: &mut ChaCha8Rng, probs: &[f64]| {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        probs.len() - 1
    };

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let traces: Vec<Trace> = (0..100_000u64)
        .map(|id| {
            let s0 = pick(&mut rng, &p0);
            let s1 = pick(&mut rng, &transition[s0]);
            let probs: Vec<f64> = env[s0].iter().map(|e| e.0).collect();
            let cells = &env[s0][pick(&mut rng, &probs)].1;
            Trace {
                replica_id: id,
                positions: vec![states[s0], states[s1]],
                nutrients: vec![
                    NutrientSnapshot::from_positions(&lattice, cells.iter().copied()),
                    NutrientSnapshot::default(),
                ],
                alive: vec![true; 2],
                weights: vec![Weight::FULL; 2],
            }
        })
        .collect();
    let set = TraceSet { lattice, traces };
    let h = build_histogram(&set, 0, EnvWeighting::Multiplicity).unwrap().normalized();

    let [nn, nc, ne] = h.dims();
    let mut truth = vec![0.0; nn * nc * ne];
    for (s0, &x0) in states.iter().enumerate() {
        for (s1, &x1) in states.iter().enumerate() {
            let dir = direction_index(x0, x1).unwrap();
            for (pe, cells) in &env[s0] {
                let snap = NutrientSnapshot::from_positions(&lattice, cells.iter().copied());
                for (y, w) in semantic_chemotaxis::metrics::reduce_env(&snap) {
                    let idx = (dir * nc + lattice.index(x0)) * ne + y.index(&lattice);
                    truth[idx] += p0[s0] * transition[s0][s1] * pe * w;
                }
            }
        }
    }
    assert_eq!(ne, ReducedEnvState::alphabet_size(&lattice));
    let tv: f64 = h.weights().iter().zip(&truth).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0;
    assert!(tv < 0.01, "total variation {tv}");
}

#[test]
fn spearman_helper_sanity() {
    assert!((spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]) - 1.0).abs() < 1e-12);
    assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-12);
    assert!((spearman(&[1.0, 1.0, 2.0], &[1.0, 1.0, 2.0]) - 1.0).abs() < 1e-12);
}
