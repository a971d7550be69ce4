use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_trajectory, Channels, POINTS_PER_UNIT_TIME};
use crate::error::{Error, Result};
use crate::ladder::{InitialState, LadderParams};
use crate::propagator::TimeGrid;
use crate::signal::{envelope_period, loglog_fit, FitResult};

/// Predicted slow-period prefactor: `T_slow ≈ 2.37 h / J²`.
pub const PREDICTED_PREFACTOR: f64 = 2.37;

/// Window length, in predicted slow periods, simulated for each field value.
pub const WINDOW_PERIODS: f64 = 1.2;

/// Window used at field `h`: `1.2 · 2.37 h / J²`, and never shorter than 10.
pub fn sweep_window(params: &LadderParams) -> f64 {
    let j2 = params.j_parallel.powi(2).max(f64::MIN_POSITIVE);
    (WINDOW_PERIODS * PREDICTED_PREFACTOR * params.h.abs() / j2).max(10.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSweepRow {
    pub h: f64,
    pub t_end: f64,
    pub t_slow: Option<f64>,
    pub f_max: f64,
    pub t_at_f_max: f64,
    pub max_terminal_concurrence: f64,
    /// Why `t_slow` is missing, if it is.
    pub flag: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSweep {
    pub base: LadderParams,
    pub rows: Vec<FieldSweepRow>,
    /// `ln T_slow` against `ln h` over rows with `h > 0` and a slow period.
    pub fit: Option<FitResult>,
    /// `T_slow J² / h` at the largest field with a slow period.
    pub prefactor_at_max_h: Option<f64>,
}

/// One trajectory per field value on `[0, sweep_window]`; each row records the
/// envelope period of the terminal concurrence and the peak fidelity.
pub fn sweep_field(h_values: &[f64], base: &LadderParams) -> Result<FieldSweep> {
    if h_values.is_empty() {
        return Err(Error::invalid("field sweep needs at least one h"));
    }
    let rows = h_values
        .par_iter()
        .map(|&h| sweep_row(&base.clone().with_h(h)))
        .collect::<Result<Vec<_>>>()?;

    let usable: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.h > 0.0)
        .filter_map(|r| r.t_slow.map(|t| (r.h, t)))
        .collect();
    let fit = if usable.len() >= 3 {
        let (hs, ts): (Vec<f64>, Vec<f64>) = usable.iter().copied().unzip();
        Some(loglog_fit(&hs, &ts)?)
    } else {
        None
    };
    let j2 = base.j_parallel.powi(2);
    let prefactor_at_max_h = usable
        .iter()
        .copied()
        .reduce(|a, b| if b.0 > a.0 { b } else { a })
        .map(|(h, t)| t * j2 / h);
    Ok(FieldSweep {
        base: base.clone(),
        rows,
        fit,
        prefactor_at_max_h,
    })
}

fn sweep_row(params: &LadderParams) -> Result<FieldSweepRow> {
    let t_end = sweep_window(params);
    let grid = TimeGrid::with_density(t_end, POINTS_PER_UNIT_TIME)?;
    let traj = run_trajectory(params, None, InitialState::PhiPlus, &grid, Channels::ENDS)?;
    let (t_at_f_max, f_max) = traj.fidelity_max();
    let (t_slow, flag) = match envelope_period(traj.terminal_concurrence()) {
        Ok(t) => (Some(t), None),
        Err(Error::InsufficientData(msg)) => (None, Some(msg)),
        Err(e) => return Err(e),
    };
    Ok(FieldSweepRow {
        h: params.h,
        t_end,
        t_slow,
        f_max,
        t_at_f_max,
        max_terminal_concurrence: traj.terminal_concurrence().max().map_or(f64::NAN, |m| m.1),
        flag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_scales_with_field() {
        let p = LadderParams::reference(3);
        assert!((sweep_window(&p) - 1.2 * 237.0).abs() < 1e-9);
        assert_eq!(sweep_window(&p.clone().with_h(0.0)), 10.0);
    }

    #[test]
    fn weak_field_row_is_flagged_or_short() {
        let s = sweep_field(&[0.0], &LadderParams::reference(3)).unwrap();
        assert_eq!(s.rows.len(), 1);
        assert!(s.fit.is_none());
        assert!(s.rows[0].f_max <= 1.0);
    }
}
