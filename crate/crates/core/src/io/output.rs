//! CSV tables and JSON sidecars. Floats are written in Rust's shortest
//! round-trip form, so parsing a file back gives bitwise-equal values.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::experiments::scaling::ScalingSummary;
use crate::experiments::{
    EffectiveReport, EnsembleStats, FieldSweep, FrequencyRow, HeatmapGrid, Trajectory,
    TrajectorySummary,
};
use crate::io::config::ExperimentConfig;
use crate::signal::CARRIER_PROMINENCE;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Table being assembled in memory before a single write.
#[derive(Clone, Debug, Default)]
pub struct Csv {
    lines: Vec<String>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv {
            lines: vec![header.join(",")],
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.lines.push(cells.join(","));
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = self.lines.join("\n");
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// Header and raw cells of a CSV file written by this module.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::invalid(format!("{} is empty", path.display())))?
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    Ok((header, rows))
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::io(path, std::io::Error::new(std::io::ErrorKind::InvalidData, e)))
}

/// Fields shared by every sidecar.
pub fn sidecar(config: &ExperimentConfig, results: Value) -> Value {
    json!({
        "artifact": "spinladder",
        "version": crate::VERSION,
        "experiment": config.experiment.name(),
        "seed": config.seed,
        "thresholds": {
            "mediating_cutoff": config.mediating_cutoff,
            "peak_prominence": config.peak_prominence,
            "carrier_prominence": CARRIER_PROMINENCE,
        },
        "config": config,
        "config_text": config.to_text(),
        "results": results,
    })
}

/// `t,C12,...,F[,I...]` plus `<stem>.json`.
pub fn write_trajectory(
    traj: &Trajectory,
    config: &ExperimentConfig,
    dir: &Path,
    stem: &str,
) -> Result<Vec<PathBuf>> {
    let mut header = vec!["t".to_string()];
    header.extend(traj.pair_concurrence.iter().map(|s| format!("C{}", s.label)));
    header.push("F".into());
    header.extend(traj.mutual_info.iter().map(|s| format!("I{}", s.label)));
    let refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut csv = Csv::new(&refs);
    for (k, &t) in traj.fidelity_terminal.times().iter().enumerate() {
        let mut row = vec![fmt_f64(t)];
        row.extend(traj.pair_concurrence.iter().map(|s| fmt_f64(s.series.values()[k])));
        row.push(fmt_f64(traj.fidelity_terminal.values()[k]));
        row.extend(traj.mutual_info.iter().map(|s| fmt_f64(s.series.values()[k])));
        csv.row(&row);
    }
    let csv_path = dir.join(format!("{stem}.csv"));
    csv.write(&csv_path)?;

    let summary = TrajectorySummary::of_with(traj, config.peak_prominence)?;
    let mediating_ok = traj
        .mediating_labels()
        .iter()
        .all(|l| traj.max_concurrence(l).is_some_and(|m| m <= config.mediating_cutoff));
    let json_path = dir.join(format!("{stem}.json"));
    write_json(
        &json_path,
        &sidecar(
            config,
            json!({
                "params": traj.params,
                "state": traj.state,
                "grid": traj.grid,
                "F_max": summary.f_max,
                "t_at_F_max": summary.t_at_f_max,
                "F_min": summary.f_min,
                "pair_max_concurrence": summary.pair_max_concurrence,
                "mutual_info_max": summary.mutual_info_max,
                "terminal_first_peak": summary.terminal_first_peak,
                "omega_fast": summary.omega_fast,
                "T_slow": summary.t_slow,
                "mediating_below_cutoff": mediating_ok,
            }),
        ),
    )?;
    Ok(vec![csv_path, json_path])
}

pub fn write_field_sweep(sweep: &FieldSweep, config: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut csv = Csv::new(&["h", "t_end", "T_slow", "F_max", "t_at_F_max", "C_terminal_max", "flag"]);
    for r in &sweep.rows {
        csv.row(&[
            fmt_f64(r.h),
            fmt_f64(r.t_end),
            fmt_opt(r.t_slow),
            fmt_f64(r.f_max),
            fmt_f64(r.t_at_f_max),
            fmt_f64(r.max_terminal_concurrence),
            r.flag.clone().unwrap_or_default().replace(',', ";"),
        ]);
    }
    let csv_path = dir.join("field_sweep.csv");
    csv.write(&csv_path)?;
    let json_path = dir.join("field_sweep.json");
    write_json(
        &json_path,
        &sidecar(
            config,
            json!({
                "rows": sweep.rows,
                "fit": sweep.fit,
                "prefactor_at_max_h": sweep.prefactor_at_max_h,
            }),
        ),
    )?;
    Ok(vec![csv_path, json_path])
}

/// First row `g\d,d_1,...`; then one row per g.
pub fn write_heatmap(grid: &HeatmapGrid, config: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut header = vec!["g\\d".to_string()];
    header.extend(grid.d_values.iter().map(|&d| fmt_f64(d)));
    let refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut csv = Csv::new(&refs);
    for (g, row) in grid.g_values.iter().zip(&grid.f_max) {
        let mut cells = vec![fmt_f64(*g)];
        cells.extend(row.iter().map(|&f| fmt_f64(f)));
        csv.row(&cells);
    }
    let csv_path = dir.join("heatmap.csv");
    csv.write(&csv_path)?;
    let json_path = dir.join("heatmap.json");
    write_json(
        &json_path,
        &sidecar(
            config,
            json!({
                "g_values": grid.g_values,
                "d_values": grid.d_values,
                "grid": config.grid()?,
                "f_max_overall": grid.f_max.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max),
            }),
        ),
    )?;
    Ok(vec![csv_path, json_path])
}

/// `<stem>.csv` (t, mean, std), `<stem>_peaks.csv` (k, seed, F_max) and `<stem>.json`.
pub fn write_ensemble(
    stats: &EnsembleStats,
    config: &ExperimentConfig,
    dir: &Path,
    stem: &str,
) -> Result<Vec<PathBuf>> {
    let mut curves = Csv::new(&["t", "F_mean", "F_std"]);
    for (k, &t) in stats.mean_fidelity.times().iter().enumerate() {
        curves.row(&[
            fmt_f64(t),
            fmt_f64(stats.mean_fidelity.values()[k]),
            fmt_f64(stats.std_fidelity.values()[k]),
        ]);
    }
    let curves_path = dir.join(format!("{stem}.csv"));
    curves.write(&curves_path)?;
    let mut peaks = Csv::new(&["k", "seed", "F_max"]);
    for (k, (seed, f)) in stats.seeds.iter().zip(&stats.peak_fidelities).enumerate() {
        peaks.row(&[k.to_string(), seed.to_string(), fmt_f64(*f)]);
    }
    let peaks_path = dir.join(format!("{stem}_peaks.csv"));
    peaks.write(&peaks_path)?;
    let json_path = dir.join(format!("{stem}.json"));
    write_json(
        &json_path,
        &sidecar(
            config,
            json!({
                "delta": stats.delta,
                "n_samples": stats.n_samples,
                "base_seed": stats.base_seed,
                "mean_peak_fidelity": stats.mean_peak_fidelity,
                "std_peak_fidelity": stats.std_peak_fidelity,
                "min_mean_fidelity": stats.mean_fidelity.min(),
            }),
        ),
    )?;
    Ok(vec![curves_path, peaks_path, json_path])
}

pub fn write_scaling_table(
    rows: &[ScalingSummary],
    config: &ExperimentConfig,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    let mut csv = Csv::new(&[
        "N",
        "t_first_peak",
        "C_first_peak",
        "C_terminal_max",
        "C_mediating_max",
        "F_max",
    ]);
    for r in rows {
        let med = r
            .mediating_max_concurrence
            .iter()
            .map(|m| m.1)
            .fold(f64::NEG_INFINITY, f64::max);
        csv.row(&[
            r.n_rungs.to_string(),
            fmt_opt(r.terminal_first_peak_time),
            fmt_opt(r.terminal_first_peak_value),
            fmt_f64(r.terminal_max_concurrence),
            fmt_f64(med),
            fmt_f64(r.f_max),
        ]);
    }
    let csv_path = dir.join("scaling.csv");
    csv.write(&csv_path)?;
    let json_path = dir.join("scaling.json");
    write_json(&json_path, &sidecar(config, json!({ "rows": rows })))?;
    Ok(vec![csv_path, json_path])
}

pub fn write_freq_table(rows: &[FrequencyRow], config: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut csv = Csv::new(&["d", "predicted", "measured", "raw", "order", "ratio"]);
    for r in rows {
        csv.row(&[
            fmt_f64(r.d),
            fmt_f64(r.predicted),
            fmt_f64(r.measured),
            fmt_f64(r.raw),
            r.order.to_string(),
            fmt_f64(r.ratio),
        ]);
    }
    let csv_path = dir.join("freq_table.csv");
    csv.write(&csv_path)?;
    let json_path = dir.join("freq_table.json");
    write_json(&json_path, &sidecar(config, json!({ "rows": rows })))?;
    Ok(vec![csv_path, json_path])
}

pub fn write_effective(
    reports: &[EffectiveReport],
    config: &ExperimentConfig,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    let mut csv = Csv::new(&[
        "h",
        "T_slow_full",
        "T_slow_effective",
        "relative_error",
        "J_eff_projected",
        "J_eff_measured",
        "alpha_measured",
    ]);
    for r in reports {
        csv.row(&[
            fmt_f64(r.params.h),
            fmt_opt(r.t_slow_full),
            fmt_opt(r.t_slow_effective),
            fmt_opt(r.relative_error),
            fmt_f64(r.j_eff_projected),
            fmt_opt(r.j_eff_measured),
            fmt_opt(r.alpha_measured),
        ]);
    }
    let csv_path = dir.join("effective_check.csv");
    csv.write(&csv_path)?;
    let json_path = dir.join("effective_check.json");
    write_json(&json_path, &sidecar(config, json!({ "rows": reports })))?;
    Ok(vec![csv_path, json_path])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::run_reference;
    use crate::io::config::{Experiment, ExperimentConfig};
    use crate::ladder::{InitialState, LadderParams};
    use crate::propagator::TimeGrid;
    use crate::signal::TimeSeries;

    #[test]
    fn floats_round_trip() {
        for x in [0.1 + 0.2, 1e-300, -2.5e17, 1.0 / 3.0, 0.0, f64::MIN_POSITIVE] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn two_point_trajectory_is_three_lines() {
        let dir = tempfile::tempdir().unwrap();
        let p = LadderParams::reference(3);
        let grid = TimeGrid::new(0.0, 0.5, 2).unwrap();
        let traj = run_reference(&p, InitialState::PhiPlus, &grid).unwrap();
        let cfg = ExperimentConfig::defaults(Experiment::Reference);
        let files = write_trajectory(&traj, &cfg, dir.path(), "reference").unwrap();
        let text = std::fs::read_to_string(&files[0]).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert_eq!(text.lines().next().unwrap(), "t,C12,C34,C56,F");
        let (_, rows) = read_csv(&files[0]).unwrap();
        let back: f64 = rows[1][4].parse().unwrap();
        assert_eq!(back.to_bits(), traj.fidelity_terminal.values()[1].to_bits());

        let v = read_json(&files[1]).unwrap();
        let cfg_back: ExperimentConfig = serde_json::from_value(v["config"].clone()).unwrap();
        assert_eq!(cfg_back, cfg);
        assert_eq!(v["results"]["F_max"].as_f64().unwrap(), traj.fidelity_max().1);
    }

    #[test]
    fn heatmap_one_cell() {
        let dir = tempfile::tempdir().unwrap();
        let grid = HeatmapGrid {
            g_values: vec![1.0],
            d_values: vec![0.5],
            f_max: vec![vec![0.75]],
        };
        let files = write_heatmap(&grid, &ExperimentConfig::defaults(Experiment::Heatmap), dir.path()).unwrap();
        let text = std::fs::read_to_string(&files[0]).unwrap();
        assert_eq!(text, "g\\d,0.5\n1.0,0.75\n");
    }

    #[test]
    fn ensemble_sidecar_has_zero_spread_without_disorder() {
        let dir = tempfile::tempdir().unwrap();
        let ts = |v: f64| TimeSeries::new(vec![0.0, 1.0], vec![v, v]).unwrap();
        let stats = EnsembleStats {
            delta: 0.0,
            n_samples: 2,
            base_seed: 1,
            mean_fidelity: ts(0.5),
            std_fidelity: ts(0.0),
            mean_peak_fidelity: 0.9,
            std_peak_fidelity: 0.0,
            peak_fidelities: vec![0.9, 0.9],
            seeds: vec![3, 4],
        };
        let files =
            write_ensemble(&stats, &ExperimentConfig::defaults(Experiment::Disorder), dir.path(), "d0").unwrap();
        assert_eq!(files.len(), 3);
        let v = read_json(&files[2]).unwrap();
        assert_eq!(v["results"]["std_peak_fidelity"].as_f64(), Some(0.0));
    }

    #[test]
    fn unwritable_destination_is_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("no/such/dir");
        let err = Csv::new(&["a"]).write(&missing.join("x.csv")).unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }
}
