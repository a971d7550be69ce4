use serde::{Deserialize, Serialize};

use super::{run_trajectory, Channels, Trajectory};
use crate::error::{Error, Result};
use crate::ladder::{InitialState, LadderParams, MAX_DENSE_RUNGS};
use crate::propagator::TimeGrid;
use crate::signal::CARRIER_PROMINENCE;

/// Same physics as the reference run on `n_rungs` rungs, field on rungs
/// `2..N-1`, every pair recorded.
pub fn scaling_run(n_rungs: usize, base: &LadderParams, grid: &TimeGrid) -> Result<Trajectory> {
    if n_rungs > MAX_DENSE_RUNGS {
        return Err(Error::UnsupportedSize {
            n_rungs,
            max: MAX_DENSE_RUNGS,
        });
    }
    if n_rungs < 3 {
        return Err(Error::invalid("scaling runs need at least one mediating rung (N ≥ 3)"));
    }
    let params = base.clone().with_rungs(n_rungs);
    run_trajectory(&params, None, InitialState::PhiPlus, grid, Channels::FULL)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingSummary {
    pub n_rungs: usize,
    pub terminal_first_peak_time: Option<f64>,
    pub terminal_first_peak_value: Option<f64>,
    pub terminal_max_concurrence: f64,
    pub mediating_max_concurrence: Vec<(String, f64)>,
    pub f_max: f64,
}

impl ScalingSummary {
    pub fn of(traj: &Trajectory) -> Result<Self> {
        Self::of_with(traj, CARRIER_PROMINENCE)
    }

    pub fn of_with(traj: &Trajectory, prominence: f64) -> Result<Self> {
        let first = traj.terminal_first_peak_with(prominence)?;
        Ok(ScalingSummary {
            n_rungs: traj.params.n_rungs,
            terminal_first_peak_time: first.map(|p| p.0),
            terminal_first_peak_value: first.map(|p| p.1),
            terminal_max_concurrence: traj.terminal_concurrence().max().map_or(f64::NAN, |m| m.1),
            mediating_max_concurrence: traj
                .mediating_labels()
                .into_iter()
                .map(|l| {
                    let m = traj.max_concurrence(&l).unwrap_or(f64::NAN);
                    (l, m)
                })
                .collect(),
            f_max: traj.fidelity_max().1,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_limits() {
        let grid = TimeGrid::new(0.0, 1.0, 3).unwrap();
        let p = LadderParams::reference(3);
        assert!(matches!(
            scaling_run(6, &p, &grid),
            Err(Error::UnsupportedSize { n_rungs: 6, max: 5 })
        ));
        assert!(scaling_run(2, &p, &grid).is_err());
    }

    #[test]
    fn four_rungs_have_two_mediating_pairs() {
        let grid = TimeGrid::new(0.0, 2.0, 401).unwrap();
        let traj = scaling_run(4, &LadderParams::reference(3), &grid).unwrap();
        assert_eq!(traj.params.field_mask.iter().copied().collect::<Vec<_>>(), vec![2, 3]);
        let s = ScalingSummary::of(&traj).unwrap();
        assert_eq!(s.mediating_max_concurrence.len(), 2);
        assert!(s.terminal_first_peak_time.is_some());
    }
}
