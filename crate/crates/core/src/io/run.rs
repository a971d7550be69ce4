use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiments::heatmap::linspace;
use crate::experiments::scaling::ScalingSummary;
use crate::experiments::sweep::sweep_window;
use crate::experiments::{
    anisotropy_heatmap, disorder_ensemble, effective_model_check, frequency_table, run_trajectory,
    scaling_run, sweep_field, Channels, POINTS_PER_UNIT_TIME,
};
use crate::io::config::{Experiment, ExperimentConfig};
use crate::io::output;
use crate::propagator::TimeGrid;

/// Runs the configured experiment and writes its files into `out_dir`
/// (created if missing). Returns the paths written.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let params = config.params();
    params.validate()?;
    match config.experiment {
        Experiment::Reference => {
            let channels = Channels {
                all_pairs: true,
                mutual_info: config.mutual_info,
            };
            let traj = run_trajectory(&params, None, config.state, &config.grid()?, channels)?;
            output::write_trajectory(&traj, config, out_dir, "reference")
        }
        Experiment::FieldSweep => {
            let sweep = sweep_field(&config.h_values, &params)?;
            output::write_field_sweep(&sweep, config, out_dir)
        }
        Experiment::Heatmap => {
            let g = linspace(config.g_min, config.g_max, config.g_points);
            let d = linspace(config.d_min, config.d_max, config.d_points);
            let hm = anisotropy_heatmap(&g, &d, &params, &config.grid()?)?;
            output::write_heatmap(&hm, config, out_dir)
        }
        Experiment::Disorder => {
            let grid = config.grid()?;
            let mut files = Vec::new();
            for &delta in &config.deltas {
                let stats = disorder_ensemble(delta, config.n_samples, config.seed, &params, &grid)?;
                let stem = format!("disorder_delta_{}", output::fmt_f64(delta));
                files.extend(output::write_ensemble(&stats, config, out_dir, &stem)?);
            }
            Ok(files)
        }
        Experiment::Scaling => {
            let grid = config.grid()?;
            let mut files = Vec::new();
            let mut rows = Vec::new();
            for &n in &config.rungs {
                let traj = scaling_run(n, &params, &grid)?;
                rows.push(ScalingSummary::of_with(&traj, config.peak_prominence)?);
                files.extend(output::write_trajectory(&traj, config, out_dir, &format!("scaling_N{n}"))?);
            }
            files.extend(output::write_scaling_table(&rows, config, out_dir)?);
            Ok(files)
        }
        Experiment::FreqTable => {
            let rows = frequency_table(&config.d_values, &params)?;
            output::write_freq_table(&rows, config, out_dir)
        }
        Experiment::EffectiveCheck => {
            let reports = config
                .h_values
                .iter()
                .map(|&h| {
                    let p = params.clone().with_h(h);
                    let grid = TimeGrid::with_density(sweep_window(&p), POINTS_PER_UNIT_TIME)?;
                    effective_model_check(&p, &grid)
                })
                .collect::<Result<Vec<_>>>()?;
            output::write_effective(&reports, config, out_dir)
        }
    }
}
