//! Named studies built on the simulator. Each returns plain data; writing
//! results to disk is handled by [`crate::io`].

pub mod disorder;
pub mod effective;
pub mod frequency;
pub mod heatmap;
pub mod scaling;
pub mod sweep;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ladder::{
    build_hamiltonian_with, build_initial_state, BondCouplings, InitialState, LadderParams, Site,
};
use crate::metrics::{bell_fidelity, concurrence, partial_trace, von_neumann_entropy, BellState};
use crate::propagator::{diagonalize, Evolution, TimeGrid};
use crate::signal::{find_peaks, TimeSeries, CARRIER_PROMINENCE};

pub use disorder::{child_seed, disorder_ensemble, DisorderRealization, EnsembleStats};
pub use effective::{effective_model_check, EffectiveReport};
pub use frequency::{frequency_table, FrequencyRow};
pub use heatmap::{anisotropy_heatmap, HeatmapGrid};
pub use scaling::{scaling_run, ScalingSummary};
pub use sweep::{sweep_field, FieldSweep, FieldSweepRow};

/// Largest concurrence a mediating pair may reach and still count as "near zero".
pub const MEDIATING_CUTOFF: f64 = 0.1;

/// Grid density used when a study picks its own grid: about 200 samples per
/// carrier period `π / ω_fast` at the reference anisotropy.
pub const POINTS_PER_UNIT_TIME: f64 = 180.0;

/// Label of rung `n`: "12", "34", ..., "9_10".
pub fn pair_label(rung: usize) -> String {
    let (a, b) = (2 * rung - 1, 2 * rung);
    if b >= 10 {
        format!("{a}_{b}")
    } else {
        format!("{a}{b}")
    }
}

/// Which per-time quantities to record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Channels {
    /// Concurrence of every rung; otherwise only the first and terminal rungs.
    pub all_pairs: bool,
    /// Mutual information of the first and terminal rungs, between them, and of
    /// each mediating rung.
    pub mutual_info: bool,
}

impl Channels {
    pub const FULL: Channels = Channels {
        all_pairs: true,
        mutual_info: false,
    };
    pub const WITH_MUTUAL_INFO: Channels = Channels {
        all_pairs: true,
        mutual_info: true,
    };
    pub const ENDS: Channels = Channels {
        all_pairs: false,
        mutual_info: false,
    };
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledSeries {
    pub label: String,
    pub series: TimeSeries,
}

/// Sampled curves of one evolution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub params: LadderParams,
    pub state: InitialState,
    pub grid: TimeGrid,
    /// Rung-pair concurrences in rung order.
    pub pair_concurrence: Vec<LabeledSeries>,
    /// `⟨Φ+|ρ_terminal|Φ+⟩`.
    pub fidelity_terminal: TimeSeries,
    pub mutual_info: Vec<LabeledSeries>,
}

impl Trajectory {
    pub fn terminal_label(&self) -> String {
        pair_label(self.params.n_rungs)
    }

    pub fn concurrence(&self, label: &str) -> Option<&TimeSeries> {
        self.pair_concurrence
            .iter()
            .find(|s| s.label == label)
            .map(|s| &s.series)
    }

    pub fn mutual(&self, label: &str) -> Option<&TimeSeries> {
        self.mutual_info.iter().find(|s| s.label == label).map(|s| &s.series)
    }

    pub fn terminal_concurrence(&self) -> &TimeSeries {
        self.concurrence(&self.terminal_label())
            .expect("terminal pair is always recorded")
    }

    /// `(t, F)` at the largest sampled fidelity.
    pub fn fidelity_max(&self) -> (f64, f64) {
        self.fidelity_terminal.max().expect("grid has at least 2 points")
    }

    pub fn max_concurrence(&self, label: &str) -> Option<f64> {
        self.concurrence(label).and_then(|s| s.max()).map(|(_, v)| v)
    }

    /// Labels of rungs `2..N-1` that were recorded.
    pub fn mediating_labels(&self) -> Vec<String> {
        (2..self.params.n_rungs)
            .map(pair_label)
            .filter(|l| self.concurrence(l).is_some())
            .collect()
    }

    /// First carrier peak of the terminal concurrence, refined; `None` if the
    /// record is too short or has no peak.
    pub fn terminal_first_peak(&self) -> Result<Option<(f64, f64)>> {
        self.terminal_first_peak_with(CARRIER_PROMINENCE)
    }

    pub fn terminal_first_peak_with(&self, prominence: f64) -> Result<Option<(f64, f64)>> {
        match find_peaks(self.terminal_concurrence(), prominence) {
            Ok(p) => Ok(p.first().map(|p| (p.time, p.value))),
            Err(Error::InsufficientData(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// Evolves `state` under the ladder Hamiltonian and records `channels`.
pub fn run_trajectory(
    params: &LadderParams,
    couplings: Option<&BondCouplings>,
    state: InitialState,
    grid: &TimeGrid,
    channels: Channels,
) -> Result<Trajectory> {
    grid.validate()?;
    let uniform;
    let couplings = match couplings {
        Some(c) => c,
        None => {
            uniform = BondCouplings::uniform(params);
            &uniform
        }
    };
    let h = build_hamiltonian_with(params, couplings)?;
    let decomp = diagonalize(&h)?;
    let psi0 = build_initial_state(state, params)?;
    let evolution = Evolution::new(&decomp, &psi0)?;

    let n = params.n_rungs;
    let rungs: Vec<usize> = if channels.all_pairs {
        (1..=n).collect()
    } else {
        vec![1, n]
    };
    let pair_sites: Vec<[Site; 2]> = rungs
        .iter()
        .map(|&r| {
            let (a, b) = Site::rung_pair(r);
            [a, b]
        })
        .collect();
    let (first, last) = (Site::rung_pair(1), Site::rung_pair(n));
    let ends = [first.0, first.1, last.0, last.1];
    let mediating: Vec<usize> = (2..n).collect();

    let rows: Vec<Result<Vec<f64>>> = evolution.map_grid(grid, |_, psi| {
        let mut row = Vec::with_capacity(rungs.len() + 8);
        let mut terminal_rho = None;
        for (r, sites) in rungs.iter().zip(&pair_sites) {
            let rho = partial_trace(psi, sites)?;
            row.push(concurrence(&rho)?);
            if *r == n {
                terminal_rho = Some(rho);
            }
        }
        let terminal_rho = terminal_rho.expect("terminal rung is always recorded");
        row.push(bell_fidelity(&terminal_rho, BellState::PhiPlus)?);
        if channels.mutual_info {
            let s = |sites: &[Site]| -> Result<f64> { von_neumann_entropy(&partial_trace(psi, sites)?) };
            let (s1, s2, s12) = (s(&ends[..1])?, s(&ends[1..2])?, s(&ends[..2])?);
            let (s5, s6, s56) = (s(&ends[2..3])?, s(&ends[3..4])?, s(&ends[2..])?);
            let s_all = s(&ends)?;
            row.push(s1 + s2 - s12);
            row.push(s5 + s6 - s56);
            row.push(s12 + s56 - s_all);
            for &m in &mediating {
                let (a, b) = Site::rung_pair(m);
                row.push(s(&[a])? + s(&[b])? - s(&[a, b])?);
            }
        }
        Ok(row)
    });
    let rows: Vec<Vec<f64>> = rows.into_iter().collect::<Result<_>>()?;

    let times = grid.points();
    let column = |k: usize| -> Result<TimeSeries> {
        TimeSeries::new(times.clone(), rows.iter().map(|r| r[k]).collect())
    };
    let mut pair_concurrence = Vec::new();
    for (k, &r) in rungs.iter().enumerate() {
        pair_concurrence.push(LabeledSeries {
            label: pair_label(r),
            series: column(k)?,
        });
    }
    let fidelity_terminal = column(rungs.len())?;
    let mut mutual_info = Vec::new();
    if channels.mutual_info {
        let t = pair_label(n);
        let mut labels = vec!["12".to_string(), t.clone(), format!("12_{t}")];
        labels.extend(mediating.iter().map(|&m| pair_label(m)));
        for (k, label) in labels.into_iter().enumerate() {
            mutual_info.push(LabeledSeries {
                label,
                series: column(rungs.len() + 1 + k)?,
            });
        }
    }
    Ok(Trajectory {
        params: params.clone(),
        state,
        grid: *grid,
        pair_concurrence,
        fidelity_terminal,
        mutual_info,
    })
}

/// Every rung's concurrence and the terminal fidelity; see [`run_trajectory`]
/// for mutual-information channels.
pub fn run_reference(params: &LadderParams, state: InitialState, grid: &TimeGrid) -> Result<Trajectory> {
    run_trajectory(params, None, state, grid, Channels::FULL)
}

/// Scalar digest of a trajectory, written next to it on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySummary {
    pub f_max: f64,
    pub t_at_f_max: f64,
    pub f_min: f64,
    pub pair_max_concurrence: Vec<(String, f64)>,
    pub mutual_info_max: Vec<(String, f64)>,
    pub terminal_first_peak: Option<(f64, f64)>,
    pub omega_fast: Option<f64>,
    pub t_slow: Option<f64>,
}

impl TrajectorySummary {
    pub fn of(traj: &Trajectory) -> Result<Self> {
        Self::of_with(traj, CARRIER_PROMINENCE)
    }

    /// As [`TrajectorySummary::of`], picking carrier peaks at `prominence`.
    pub fn of_with(traj: &Trajectory, prominence: f64) -> Result<Self> {
        let (t_at_f_max, f_max) = traj.fidelity_max();
        let j = traj.params.j_perp.abs().max(traj.params.j_parallel.abs());
        Ok(TrajectorySummary {
            f_max,
            t_at_f_max,
            f_min: traj.fidelity_terminal.min().unwrap_or(f64::NAN),
            pair_max_concurrence: traj
                .pair_concurrence
                .iter()
                .map(|s| (s.label.clone(), s.series.max().map_or(f64::NAN, |m| m.1)))
                .collect(),
            mutual_info_max: traj
                .mutual_info
                .iter()
                .map(|s| (s.label.clone(), s.series.max().map_or(f64::NAN, |m| m.1)))
                .collect(),
            terminal_first_peak: traj.terminal_first_peak_with(prominence)?,
            omega_fast: crate::signal::carrier_frequency(traj.terminal_concurrence(), j)
                .ok()
                .map(|c| c.fundamental),
            t_slow: crate::signal::envelope_period_with(traj.terminal_concurrence(), prominence).ok(),
        })
    }
}

/// `a = x0 + Σ(x - x0)/n` and the sample standard deviation about it; exact 0
/// spread for identical inputs.
pub(crate) fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let x0 = xs[0];
    let mean = x0 + xs.iter().map(|x| x - x0).sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}
