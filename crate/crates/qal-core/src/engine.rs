//! Seeded active-learning episodes and replication sweeps.
//!
//! One episode: draw a few perfectly labeled oracle sites, then loop
//! retrain -> select -> measure -> extend the training set with whatever
//! label the measurement produced (wrong labels included), tracking
//! accuracy against ground truth and the multiplicative fidelity cost.
//! Replications re-randomize the lattice and are aggregated into mean
//! curves with Student-t confidence intervals.

use crate::classifiers::{self, ModelKind, TrainedModel};
use crate::error::{Error, Result};
use crate::lattice::{generate_lattice, LatticeState, SITE_COUNT};
use crate::measurement::{measure_ensemble, MeasurementConfig, MeasurementKind};
use crate::rng;
use crate::strategies::{select_candidate, Committee, Strategy, StrategyModels};
use rand::seq::index::sample as sample_indices;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};

/// Stream label separating lattice seeds from episode seeds in sweeps.
const SWEEP_LATTICE: u64 = 1;
const SWEEP_EPISODE: u64 = 2;

/// Settings for one active-learning episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeConfig {
    pub strategy: Strategy,
    pub measurement: MeasurementConfig,
    /// Alice-labeled starting samples (zero fidelity cost, true labels).
    pub seed_oracles: usize,
    /// Maximum queried labels.
    pub label_budget: usize,
    /// Stop once the system fidelity falls below this value.
    pub fidelity_threshold: Option<f64>,
    pub seed: u64,
}

impl EpisodeConfig {
    pub fn validate(&self) -> Result<()> {
        self.measurement.validate()?;
        if self.seed_oracles < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 seed oracles, got {}",
                self.seed_oracles
            )));
        }
        if self.seed_oracles > SITE_COUNT {
            return Err(Error::InvalidParameter(
                "more seed oracles than lattice sites".to_string(),
            ));
        }
        if let Some(t) = self.fidelity_threshold {
            if t.is_nan() || t <= 0.0 || t > 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "fidelity threshold must lie in (0, 1], got {t}"
                )));
            }
        }
        Ok(())
    }
}

/// One (labels used, accuracy, system fidelity) point after a retrain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub labels_used: usize,
    pub accuracy: f64,
    pub system_fidelity: f64,
}

/// One measurement-labeled query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryRecord {
    pub site_id: usize,
    pub estimated_label: u8,
    pub true_label: u8,
    pub min_fidelity: f64,
}

/// Snapshot of the final trained model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinalModelSummary {
    pub training_size: usize,
    /// Support-vector count of the evaluated linear SVM.
    pub support_vectors: Option<usize>,
    pub accuracy: f64,
}

/// Result of a single seeded episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeResult {
    pub trajectory: Vec<TrajectoryPoint>,
    pub final_model: FinalModelSummary,
    /// Queried sites whose measured label disagreed with ground truth.
    pub mislabel_count: usize,
    pub queries: Vec<QueryRecord>,
}

fn train_strategy_models(
    strategy: Strategy,
    lattice: &LatticeState,
    labeled: &[(usize, u8)],
) -> Result<StrategyModels> {
    let points: Vec<_> = labeled
        .iter()
        .map(|&(site, _)| lattice.site(site).features())
        .collect();
    let labels: Vec<u8> = labeled.iter().map(|&(_, l)| l).collect();
    if strategy.is_qbc() {
        let members = ModelKind::COMMITTEE
            .iter()
            .map(|&kind| classifiers::train(kind, &points, &labels))
            .collect::<Result<Vec<TrainedModel>>>()?;
        Ok(StrategyModels::Committee(Committee { members }))
    } else {
        Ok(StrategyModels::Single(classifiers::train(
            ModelKind::LinearSvm,
            &points,
            &labels,
        )?))
    }
}

/// Fraction of all 441 sites the model classifies correctly.
pub fn evaluate_accuracy(model: &TrainedModel, lattice: &LatticeState) -> Result<f64> {
    let mut correct = 0usize;
    for site in &lattice.sites {
        if model.predict(&site.features())? == site.true_class {
            correct += 1;
        }
    }
    Ok(correct as f64 / lattice.sites.len() as f64)
}

/// Runs one seeded episode on the given lattice.
pub fn run_episode(lattice: &LatticeState, config: &EpisodeConfig) -> Result<EpisodeResult> {
    config.validate()?;
    let mut episode_rng = rng::stream(config.seed, &[rng::STREAM_EPISODE]);

    // Oracle sites are Alice's choice and belong to the prepared world,
    // so they come from a lattice-keyed stream: every strategy run on
    // this lattice is offered the same oracles, and a 5-oracle committee
    // start extends the 3-oracle start on most lattices. Each attempt
    // draws a fixed-size block (uniform distinct sites); the first
    // seed_oracles entries are redrawn until both classes are covered.
    let mut oracle_rng = rng::stream(lattice.seed, &[rng::STREAM_ORACLE]);
    let block = config.seed_oracles.clamp(8, SITE_COUNT);
    let seeds: Vec<usize> = loop {
        let draw: Vec<usize> = sample_indices(&mut oracle_rng, SITE_COUNT, block)
            .into_iter()
            .take(config.seed_oracles)
            .collect();
        let classes: Vec<u8> = draw.iter().map(|&s| lattice.site(s).true_class).collect();
        if classes.contains(&0) && classes.contains(&1) {
            break draw;
        }
    };

    let mut labeled: Vec<(usize, u8)> = seeds
        .iter()
        .map(|&s| (s, lattice.site(s).true_class))
        .collect();
    let mut unlabeled: Vec<usize> = (0..SITE_COUNT).filter(|s| !seeds.contains(s)).collect();

    let mut system_fidelity = 1.0;
    let mut trajectory = Vec::new();
    let mut queries = Vec::new();
    let mut mislabel_count = 0usize;
    let final_support;

    loop {
        let models = train_strategy_models(config.strategy, lattice, &labeled)?;
        let accuracy = evaluate_accuracy(models.svm(), lattice)?;
        trajectory.push(TrajectoryPoint {
            labels_used: queries.len(),
            accuracy,
            system_fidelity,
        });

        if queries.len() >= config.label_budget {
            final_support = models.svm().support_count();
            break;
        }
        if let Some(threshold) = config.fidelity_threshold {
            if system_fidelity < threshold {
                final_support = models.svm().support_count();
                break;
            }
        }
        if unlabeled.is_empty() {
            final_support = models.svm().support_count();
            break; // pool exhausted: clean stop
        }

        let decision = select_candidate(
            config.strategy,
            &models,
            &unlabeled,
            lattice,
            &mut episode_rng,
        )?;
        let site_id = decision.site_id;
        unlabeled.retain(|&s| s != site_id);

        // Each site owns a measurement stream derived from the lattice
        // seed: the outcome tape is part of the prepared world, so it
        // neither depends on query order nor on which strategy asks.
        let mut site_rng = rng::stream(lattice.seed, &[rng::STREAM_MEASURE, site_id as u64]);
        let record = measure_ensemble(lattice.site(site_id), &config.measurement, &mut site_rng)?;
        system_fidelity *= record.min_fidelity;
        let true_label = lattice.site(site_id).true_class;
        if record.estimated_label != true_label {
            mislabel_count += 1;
        }
        queries.push(QueryRecord {
            site_id,
            estimated_label: record.estimated_label,
            true_label,
            min_fidelity: record.min_fidelity,
        });
        labeled.push((site_id, record.estimated_label));
    }

    let last = trajectory.last().expect("trajectory has the seed point");
    Ok(EpisodeResult {
        final_model: FinalModelSummary {
            training_size: labeled.len(),
            support_vectors: final_support,
            accuracy: last.accuracy,
        },
        mislabel_count,
        queries,
        trajectory,
    })
}

/// Mean accuracy per labels-used with 0.95 Student-t confidence intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateCurve {
    /// Shared x grid: labels used after each retrain.
    pub labels: Vec<usize>,
    pub mean_accuracy: Vec<f64>,
    /// Two-sided 0.95 CI half-widths; absent with a single replication.
    pub ci_half_width: Option<Vec<f64>>,
    pub replications: usize,
    /// True when trajectories stopped at different lengths and were
    /// aligned on their common prefix.
    pub truncated: bool,
}

/// Two-sided 0.95 Student-t half-width for a sample of `values`.
fn t_half_width(values: &[f64], mean: f64) -> f64 {
    let n = values.len();
    debug_assert!(n >= 2);
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    if var == 0.0 {
        return 0.0;
    }
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .expect("valid dof")
        .inverse_cdf(0.975);
    t * (var / n as f64).sqrt()
}

/// Aggregates replicated episodes into a mean curve.
///
/// Trajectories that stopped early truncate the grid to the common
/// prefix; the curve is flagged when that happens.
pub fn aggregate(replications: &[EpisodeResult]) -> Result<AggregateCurve> {
    if replications.is_empty() {
        return Err(Error::InvalidParameter(
            "aggregate needs at least one replication".to_string(),
        ));
    }
    let min_len = replications
        .iter()
        .map(|r| r.trajectory.len())
        .min()
        .unwrap();
    let truncated = replications.iter().any(|r| r.trajectory.len() != min_len);

    let labels: Vec<usize> = (0..min_len).collect();
    let mut mean_accuracy = Vec::with_capacity(min_len);
    let mut half_widths = Vec::with_capacity(min_len);
    for x in 0..min_len {
        let values: Vec<f64> = replications
            .iter()
            .map(|r| r.trajectory[x].accuracy)
            .collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        mean_accuracy.push(mean);
        if replications.len() >= 2 {
            half_widths.push(t_half_width(&values, mean));
        }
    }
    Ok(AggregateCurve {
        labels,
        mean_accuracy,
        ci_half_width: (replications.len() >= 2).then_some(half_widths),
        replications: replications.len(),
        truncated,
    })
}

/// Shared sweep parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub sigma: f64,
    pub budget: usize,
    pub replications: usize,
    pub master_seed: u64,
    pub ramp_width: f64,
    pub epsilon: f64,
}

impl SweepSettings {
    pub fn validate(&self) -> Result<()> {
        if self.replications < 2 {
            return Err(Error::InvalidParameter(
                "sweeps need at least 2 replications".to_string(),
            ));
        }
        Ok(())
    }

    /// Lattice seed for a replication; shared across strategies and
    /// ensemble sizes so comparisons use common lattices.
    pub fn lattice_seed(&self, replication: usize) -> u64 {
        rng::derive_seed(self.master_seed, &[SWEEP_LATTICE, replication as u64])
    }

    /// Episode seed for a replication; also shared across sweep cells, so
    /// a site queried under two strategies sees identical measurement
    /// noise (common random numbers: cell comparisons are paired).
    pub fn episode_seed(&self, replication: usize) -> u64 {
        rng::derive_seed(self.master_seed, &[SWEEP_EPISODE, replication as u64])
    }
}

/// One (strategy, ensemble size) cell of the strategy-comparison sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyCell {
    pub strategy: Strategy,
    pub n_copies: usize,
    pub sigma: f64,
    pub curve: AggregateCurve,
    pub mean_mislabels: f64,
    pub mean_final_accuracy: f64,
}

/// Strategy-comparison experiment: weak measurement at fixed sigma,
/// one aggregate curve per (strategy, ensemble size).
pub fn experiment_strategy_sweep(
    settings: &SweepSettings,
    strategies: &[Strategy],
    n_values: &[usize],
) -> Result<Vec<StrategyCell>> {
    settings.validate()?;
    let mut cells = Vec::new();
    for &n_copies in n_values {
        for &strategy in strategies {
            let episodes: Vec<EpisodeResult> = (0..settings.replications)
                .into_par_iter()
                .map(|rep| {
                    let lattice = generate_lattice(
                        settings.lattice_seed(rep),
                        settings.ramp_width,
                        settings.epsilon,
                    )?;
                    let config = EpisodeConfig {
                        strategy,
                        measurement: MeasurementConfig {
                            sigma: settings.sigma,
                            n_copies,
                            kind: MeasurementKind::Weak,
                        },
                        seed_oracles: strategy.default_seed_oracles(),
                        label_budget: settings.budget,
                        fidelity_threshold: None,
                        seed: settings.episode_seed(rep),
                    };
                    run_episode(&lattice, &config)
                })
                .collect::<Result<_>>()?;
            let curve = aggregate(&episodes)?;
            let reps = episodes.len() as f64;
            let mean_mislabels = episodes
                .iter()
                .map(|e| e.mislabel_count as f64)
                .sum::<f64>()
                / reps;
            let mean_final_accuracy =
                episodes.iter().map(|e| e.final_model.accuracy).sum::<f64>() / reps;
            cells.push(StrategyCell {
                strategy,
                n_copies,
                sigma: settings.sigma,
                curve,
                mean_mislabels,
                mean_final_accuracy,
            });
        }
    }
    Ok(cells)
}

/// One (threshold, kind) cell of the fidelity-threshold sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdCell {
    pub threshold: f64,
    pub kind: MeasurementKind,
    pub mean_labels: f64,
    pub mean_accuracy: f64,
    /// 0.95 CI half-width of the final accuracy.
    pub ci_half_width: f64,
    pub replications: usize,
}

/// Fidelity-threshold experiment: USAMP labeling until the system
/// fidelity crosses each threshold, for weak and strong measurement.
pub fn experiment_threshold_sweep(
    settings: &SweepSettings,
    thresholds: &[f64],
    kinds: &[MeasurementKind],
    n_copies: usize,
) -> Result<Vec<ThresholdCell>> {
    settings.validate()?;
    for &t in thresholds {
        if t.is_nan() || t <= 0.0 || t >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "thresholds must lie in (0, 1), got {t}"
            )));
        }
    }
    let mut cells = Vec::new();
    for &threshold in thresholds {
        for &kind in kinds {
            let episodes: Vec<EpisodeResult> = (0..settings.replications)
                .into_par_iter()
                .map(|rep| {
                    let lattice = generate_lattice(
                        settings.lattice_seed(rep),
                        settings.ramp_width,
                        settings.epsilon,
                    )?;
                    let config = EpisodeConfig {
                        strategy: Strategy::UsampLc,
                        measurement: MeasurementConfig {
                            sigma: settings.sigma,
                            n_copies,
                            kind,
                        },
                        seed_oracles: Strategy::UsampLc.default_seed_oracles(),
                        label_budget: settings.budget,
                        fidelity_threshold: Some(threshold),
                        seed: settings.episode_seed(rep),
                    };
                    run_episode(&lattice, &config)
                })
                .collect::<Result<_>>()?;
            let reps = episodes.len() as f64;
            let mean_labels = episodes.iter().map(|e| e.queries.len() as f64).sum::<f64>() / reps;
            let finals: Vec<f64> = episodes.iter().map(|e| e.final_model.accuracy).collect();
            let mean_accuracy = finals.iter().sum::<f64>() / reps;
            cells.push(ThresholdCell {
                threshold,
                kind,
                mean_labels,
                mean_accuracy,
                ci_half_width: t_half_width(&finals, mean_accuracy),
                replications: episodes.len(),
            });
        }
    }
    Ok(cells)
}
