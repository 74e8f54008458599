//! Experiment dispatch: runs the configured experiment, writes CSVs (and
//! optional SVGs) atomically, and prints a one-line summary per curve.

use crate::engine::{experiment_strategy_sweep, experiment_threshold_sweep, SweepSettings};
use crate::error::Result;
use crate::harness::config::{Experiment, RunConfig};
use crate::harness::csvio::{
    emit_csv, write_atomic, LatticeRow, StrategySweepRow, ThresholdSweepRow, WeakValueRow,
};
use crate::harness::plot::{emit_plot, PlotKind};
use crate::lattice::generate_lattice;
use crate::measurement::sample_weak;
use crate::rng;
use std::path::Path;

/// Runs the configured experiment. Returns the list of files written.
pub fn run_cli(config: &RunConfig) -> Result<Vec<String>> {
    match config.experiment {
        Experiment::Figure1 => run_figure1(config),
        Experiment::Figure2 => run_figure2(config),
        Experiment::Figure3 => run_figure3(config),
    }
}

fn write_output(
    config: &RunConfig,
    name: &str,
    csv: &str,
    plot_kind: PlotKind,
    written: &mut Vec<String>,
) -> Result<()> {
    let csv_path = config.out_dir.join(name);
    write_atomic(&csv_path, csv)?;
    written.push(csv_path.display().to_string());
    if config.plot {
        let svg = emit_plot(csv, plot_kind)?;
        let svg_path = csv_path.with_extension("svg");
        write_atomic(&svg_path, &svg)?;
        written.push(svg_path.display().to_string());
    }
    Ok(())
}

fn run_figure1(config: &RunConfig) -> Result<Vec<String>> {
    let lattice = generate_lattice(config.seed, config.ramp_width, config.epsilon)?;
    let lattice_rows: Vec<LatticeRow> = lattice
        .sites
        .iter()
        .map(|s| LatticeRow {
            row: s.row,
            col: s.col,
            cos_alpha: s.cos_alpha(),
            true_class: s.true_class,
        })
        .collect();

    // Single-shot weak values: one reading per qubit, each from the
    // site's own derived stream.
    let weak_rows: Vec<WeakValueRow> = lattice
        .sites
        .iter()
        .map(|s| {
            let mut site_rng = rng::stream(config.seed, &[rng::STREAM_MEASURE, s.id() as u64]);
            let (q0, _) = sample_weak(s.alpha, config.sigma, &mut site_rng)?;
            Ok(WeakValueRow {
                row: s.row,
                col: s.col,
                q0,
            })
        })
        .collect::<Result<_>>()?;

    let mut written = Vec::new();
    write_output(
        config,
        "lattice.csv",
        &emit_csv(&lattice_rows),
        PlotKind::Heatmap,
        &mut written,
    )?;
    write_output(
        config,
        "weak_values.csv",
        &emit_csv(&weak_rows),
        PlotKind::Heatmap,
        &mut written,
    )?;
    let (zeros, ones) = lattice.class_counts();
    println!(
        "figure1 seed={} sites=441 class0={zeros} class1={ones} sigma={}",
        config.seed, config.sigma
    );
    Ok(written)
}

fn sweep_settings(config: &RunConfig) -> SweepSettings {
    SweepSettings {
        sigma: config.sigma,
        budget: config.budget,
        replications: config.replications,
        master_seed: config.seed,
        ramp_width: config.ramp_width,
        epsilon: config.epsilon,
    }
}

fn run_figure2(config: &RunConfig) -> Result<Vec<String>> {
    let cells = experiment_strategy_sweep(
        &sweep_settings(config),
        &config.strategies,
        &config.n_values,
    )?;
    let mut rows = Vec::new();
    for cell in &cells {
        let half_widths = cell
            .curve
            .ci_half_width
            .as_ref()
            .expect("sweeps run with at least 2 replications");
        for (i, &labels) in cell.curve.labels.iter().enumerate() {
            let mean = cell.curve.mean_accuracy[i];
            rows.push(StrategySweepRow {
                strategy: cell.strategy.name().to_string(),
                n: cell.n_copies,
                sigma: cell.sigma,
                labels,
                mean_accuracy: mean,
                ci_low: mean - half_widths[i],
                ci_high: mean + half_widths[i],
                replications: cell.curve.replications,
            });
        }
        println!(
            "figure2 strategy={} n={} labels={} mean_accuracy={:.4} mislabels/episode={:.2} reps={}",
            cell.strategy.name(),
            cell.n_copies,
            cell.curve.labels.last().copied().unwrap_or(0),
            cell.mean_final_accuracy,
            cell.mean_mislabels,
            cell.curve.replications
        );
    }
    let mut written = Vec::new();
    write_output(
        config,
        "strategy_sweep.csv",
        &emit_csv(&rows),
        PlotKind::Curves,
        &mut written,
    )?;
    Ok(written)
}

fn run_figure3(config: &RunConfig) -> Result<Vec<String>> {
    let cells = experiment_threshold_sweep(
        &sweep_settings(config),
        &config.thresholds,
        &config.kinds,
        config.n_copies,
    )?;
    let mut rows = Vec::new();
    for cell in &cells {
        rows.push(ThresholdSweepRow {
            threshold: cell.threshold,
            kind: cell.kind,
            mean_labels: cell.mean_labels,
            mean_accuracy: cell.mean_accuracy,
            ci_low: cell.mean_accuracy - cell.ci_half_width,
            ci_high: cell.mean_accuracy + cell.ci_half_width,
            replications: cell.replications,
        });
        println!(
            "figure3 threshold={} kind={} mean_labels={:.2} mean_accuracy={:.4} reps={}",
            cell.threshold,
            cell.kind.name(),
            cell.mean_labels,
            cell.mean_accuracy,
            cell.replications
        );
    }
    let mut written = Vec::new();
    write_output(
        config,
        "threshold_sweep.csv",
        &emit_csv(&rows),
        PlotKind::Curves,
        &mut written,
    )?;
    Ok(written)
}

/// Reads back a written file, for determinism checks.
pub fn read_output(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}
