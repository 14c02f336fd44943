use proptest::prelude::*;

use semantic_chemotaxis::agent::{Intervention, InterventionKind};
use semantic_chemotaxis::engine::SimConfig;
use semantic_chemotaxis::lattice::Lattice;
use semantic_chemotaxis::world::WorldParams;

pub fn intervention_kind() -> impl Strategy<Value = InterventionKind> {
    prop_oneof![
        (0u8..=9).prop_map(InterventionKind::SenseCap),
        Just(InterventionKind::Dead),
        Just(InterventionKind::Fixed),
    ]
}

/// Valid configurations small enough to simulate hundreds of times.
pub fn small_config(max_runs: u64) -> impl Strategy<Value = SimConfig> {
    (2u16..=12)
        .prop_flat_map(move |n| {
            (
                (Just(n), 0u32..=4, 1u32..=30, 1u16..n, 0u32..=15, 0.0f64..=1.0),
                (intervention_kind(), 0u32..=30, 1u32..=40, 1u64..=max_runs, any::<u64>()),
            )
        })
        .prop_map(|((n, rate, period, hop, min_life, p), (kind, onset, horizon, runs, seed))| SimConfig {
            world: WorldParams {
                lattice: Lattice::new(n),
                source_rate: rate,
                source_period: period,
                source_hop: hop,
                nutrient_min_life: min_life,
                nutrient_decay_prob: p,
            },
            intervention: Intervention::new(kind, onset),
            horizon,
            runs,
            master_seed: seed,
            ..SimConfig::default()
        })
}
