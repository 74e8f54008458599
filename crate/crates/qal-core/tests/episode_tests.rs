//! Engine-level integration: sweep determinism, fidelity bookkeeping, and
//! the Born-statistics bound on the first strong-measured label.

mod common;

use qal_core::engine::{
    experiment_strategy_sweep, experiment_threshold_sweep, run_episode, EpisodeConfig,
    SweepSettings,
};
use qal_core::lattice::{generate_lattice, DEFAULT_EPSILON, DEFAULT_RAMP_WIDTH};
use qal_core::measurement::{measure_ensemble, MeasurementConfig, MeasurementKind};
use qal_core::rng;
use qal_core::strategies::Strategy;
use std::f64::consts::PI;

fn settings(replications: usize) -> SweepSettings {
    SweepSettings {
        sigma: 10.0,
        budget: 6,
        replications,
        master_seed: 99,
        ramp_width: DEFAULT_RAMP_WIDTH,
        epsilon: DEFAULT_EPSILON,
    }
}

#[test]
fn strategy_sweep_is_reproducible_and_ordered() {
    let strategies = [Strategy::Random, Strategy::UsampLc, Strategy::QbcVe];
    let a = experiment_strategy_sweep(&settings(4), &strategies, &[5, 50]).unwrap();
    let b = experiment_strategy_sweep(&settings(4), &strategies, &[5, 50]).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 6);
    // Cells arrive in deterministic (n, strategy) order.
    let order: Vec<(usize, &str)> = a.iter().map(|c| (c.n_copies, c.strategy.name())).collect();
    assert_eq!(
        order,
        vec![
            (5, "random"),
            (5, "usamp_lc"),
            (5, "qbc_ve"),
            (50, "random"),
            (50, "usamp_lc"),
            (50, "qbc_ve"),
        ]
    );
    for cell in &a {
        assert_eq!(cell.curve.labels, (0..=6).collect::<Vec<_>>());
        assert_eq!(cell.curve.replications, 4);
        assert!(cell.curve.ci_half_width.is_some());
    }
}

#[test]
fn threshold_sweep_reports_both_kinds() {
    let cells = experiment_threshold_sweep(
        &settings(4),
        &[0.9],
        &[MeasurementKind::Weak, MeasurementKind::Strong],
        200,
    )
    .unwrap();
    assert_eq!(cells.len(), 2);
    for cell in &cells {
        assert!(cell.mean_labels >= 1.0);
        assert!(cell.mean_accuracy > 0.0 && cell.mean_accuracy <= 1.0);
    }
    // Weak measurement affords more labels before the fidelity floor.
    assert!(cells[0].mean_labels > cells[1].mean_labels);

    assert!(
        experiment_threshold_sweep(&settings(4), &[1.5], &[MeasurementKind::Weak], 10).is_err()
    );
    assert!(
        experiment_threshold_sweep(&settings(1), &[0.9], &[MeasurementKind::Weak], 10).is_err()
    );
}

#[test]
fn strong_band_ensembles_halve_fidelity_with_overwhelming_probability() {
    // For alpha in (0.2 pi, 0.8 pi) and n = 500, both outcomes appear
    // except with probability <= 2 * max-Born-weight^500, so the min copy
    // fidelity is at most 1/2.
    let config = MeasurementConfig {
        sigma: 10.0,
        n_copies: 500,
        kind: MeasurementKind::Strong,
    };
    for (i, alpha) in [0.25 * PI, 0.5 * PI, 0.7 * PI].into_iter().enumerate() {
        let site = qal_core::lattice::QubitSite {
            row: 0,
            col: 0,
            alpha,
            true_class: u8::from(alpha.cos() <= 0.0),
        };
        for rep in 0..500u64 {
            let mut r = rng::stream(8000 + i as u64, &[rep]);
            let record = measure_ensemble(&site, &config, &mut r).unwrap();
            assert!(
                record.min_fidelity <= 0.5,
                "alpha {alpha} rep {rep}: min fidelity {}",
                record.min_fidelity
            );
        }
    }
}

#[test]
fn threshold_stop_keeps_the_triggering_label() {
    let lattice = generate_lattice(31, DEFAULT_RAMP_WIDTH, DEFAULT_EPSILON).unwrap();
    let config = EpisodeConfig {
        strategy: Strategy::UsampLc,
        measurement: MeasurementConfig {
            sigma: 10.0,
            n_copies: 500,
            kind: MeasurementKind::Strong,
        },
        seed_oracles: 3,
        label_budget: 30,
        fidelity_threshold: Some(0.9),
        seed: 77,
    };
    let result = run_episode(&lattice, &config).unwrap();
    let last = result.trajectory.last().unwrap();
    // The measurement that crossed the threshold stays in the records.
    assert!(last.system_fidelity < 0.9);
    assert_eq!(last.labels_used, result.queries.len());
    assert!(!result.queries.is_empty());
    // Fidelity was above threshold before the triggering label.
    let before = &result.trajectory[result.trajectory.len() - 2];
    assert!(before.system_fidelity >= 0.9);
}

#[test]
fn budget_zero_makes_strategies_indistinguishable() {
    // With no queries, only the oracle draw matters; at equal seed-oracle
    // counts every strategy starts from the identical seed set and
    // reports the identical seed-only accuracy.
    let lattice = generate_lattice(8, DEFAULT_RAMP_WIDTH, DEFAULT_EPSILON).unwrap();
    let results: Vec<_> = [Strategy::Random, Strategy::UsampLc, Strategy::QbcVe]
        .into_iter()
        .map(|strategy| {
            let config = EpisodeConfig {
                strategy,
                measurement: MeasurementConfig {
                    sigma: 10.0,
                    n_copies: 5,
                    kind: MeasurementKind::Weak,
                },
                seed_oracles: 3,
                label_budget: 0,
                fidelity_threshold: None,
                seed: 21,
            };
            run_episode(&lattice, &config).unwrap()
        })
        .collect();
    for r in &results {
        assert_eq!(r.trajectory.len(), 1);
        assert_eq!(r.trajectory[0].system_fidelity, 1.0);
        assert_eq!(r.trajectory[0].accuracy, results[0].trajectory[0].accuracy);
    }
}

#[test]
fn vacuous_threshold_never_stops_before_the_budget() {
    let lattice = generate_lattice(9, DEFAULT_RAMP_WIDTH, DEFAULT_EPSILON).unwrap();
    let config = EpisodeConfig {
        strategy: Strategy::UsampLc,
        measurement: MeasurementConfig {
            sigma: 10.0,
            n_copies: 50,
            kind: MeasurementKind::Weak,
        },
        seed_oracles: 3,
        label_budget: 12,
        fidelity_threshold: Some(1e-6),
        seed: 4,
    };
    let result = run_episode(&lattice, &config).unwrap();
    assert_eq!(result.queries.len(), 12);
}

#[test]
fn mislabeled_queries_enter_the_training_set_verbatim() {
    // With n = 1 the weak decoder is nearly a coin flip in the band, so
    // mislabels occur; the episode must keep them and keep going.
    let lattice = generate_lattice(3, DEFAULT_RAMP_WIDTH, DEFAULT_EPSILON).unwrap();
    let config = EpisodeConfig {
        strategy: Strategy::UsampLc,
        measurement: MeasurementConfig {
            sigma: 10.0,
            n_copies: 1,
            kind: MeasurementKind::Weak,
        },
        seed_oracles: 3,
        label_budget: 40,
        fidelity_threshold: None,
        seed: 13,
    };
    let result = run_episode(&lattice, &config).unwrap();
    assert_eq!(result.queries.len(), 40);
    let observed_mislabels = result
        .queries
        .iter()
        .filter(|q| q.estimated_label != q.true_label)
        .count();
    assert_eq!(observed_mislabels, result.mislabel_count);
    assert!(observed_mislabels > 0, "n=1 in-band labeling should err");
}
