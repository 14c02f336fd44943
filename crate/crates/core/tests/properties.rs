mod common;

use proptest::prelude::*;

use common::configs::small_config;
use semantic_chemotaxis::agent::InterventionKind;
use semantic_chemotaxis::engine::{run_ensemble, run_trace};
use semantic_chemotaxis::lattice::chebyshev_distance;
use semantic_chemotaxis::metrics::{estimate_ensemble, reduce_env_with, transfer_entropy, EnvWeighting};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn traces_respect_the_model(cfg in small_config(12)) {
        let lattice = cfg.lattice();
        let onset = cfg.intervention.onset as usize;
        let set = run_ensemble(&cfg).unwrap();
        prop_assert_eq!(set.traces.len() as u64, cfg.runs);
        for t in &set.traces {
            prop_assert_eq!(t.len(), cfg.horizon as usize + 1);
            for k in 0..t.len() {
                prop_assert!(lattice.contains(t.positions[k]));
                let w = t.weights[k].as_f64();
                prop_assert!((0.0..=1.0).contains(&w));
                prop_assert!(!t.alive[k] || w > 0.0);
                let total = t.nutrients[k].total() as u64;
                prop_assert!(total <= u64::from(cfg.world.source_rate) * k as u64);
                if k > 0 {
                    prop_assert!(chebyshev_distance(t.positions[k - 1], t.positions[k]) <= 1);
                    prop_assert!(t.alive[k - 1] || !t.alive[k], "resurrection at {}", k);
                    if !t.alive[k - 1] {
                        prop_assert_eq!(t.positions[k - 1], t.positions[k]);
                    }
                    if cfg.intervention.kind == InterventionKind::Fixed && k > onset {
                        prop_assert_eq!(t.positions[k - 1], t.positions[k]);
                    }
                }
                if cfg.intervention.kind == InterventionKind::Dead && k >= onset {
                    prop_assert!(!t.alive[k]);
                }
                let weight_sum = |w| reduce_env_with(&t.nutrients[k], w).iter().map(|e| e.1).sum::<f64>();
                prop_assert!((weight_sum(EnvWeighting::Multiplicity) - 1.0).abs() < 1e-12);
                prop_assert!(weight_sum(EnvWeighting::Indicator) <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn replicas_are_reproducible(cfg in small_config(4), id in 0u64..1000) {
        prop_assert_eq!(run_trace(&cfg, id), run_trace(&cfg, id));
    }

    #[test]
    fn measures_are_well_formed(cfg in small_config(60)) {
        let s = estimate_ensemble(&cfg).unwrap();
        prop_assert!(s.cmi_bits.iter().chain(&s.mi_bits).all(|&b| b >= -1e-12 && b.is_finite()));
        let te = transfer_entropy(&s.cmi_bits);
        prop_assert_eq!(te[0], 0.0);
        prop_assert!(te.windows(2).all(|w| w[1] >= w[0]));
        let v = s.viability();
        prop_assert!(v.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(v.iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn interventions_agree_before_onset(cfg in small_config(30)) {
        let onset = cfg.intervention.onset.min(cfg.horizon) as usize;
        let base = estimate_ensemble(&cfg.with_intervention(InterventionKind::DEFAULT)).unwrap();
        let other = estimate_ensemble(&cfg).unwrap();
        prop_assert_eq!(&base.cmi_bits[..onset], &other.cmi_bits[..onset]);
        prop_assert_eq!(&base.alive_counts[..onset], &other.alive_counts[..onset]);
    }
}
