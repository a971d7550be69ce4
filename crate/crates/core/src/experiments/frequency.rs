use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_trajectory, Channels};
use crate::error::Result;
use crate::ladder::{InitialState, LadderParams};
use crate::propagator::TimeGrid;
use crate::signal::carrier_frequency;

/// Record used for carrier measurements: long enough for sub-percent
/// resolution after windowing, fine enough to resolve lines up to ω ≈ 50.
pub const FREQUENCY_WINDOW: f64 = 400.0;
pub const FREQUENCY_POINTS: usize = 20_001;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyRow {
    pub d: f64,
    /// Dressed rung frequency `2 √(1 + 4d²) J⊥`.
    pub predicted: f64,
    /// Carrier fundamental of the terminal concurrence.
    pub measured: f64,
    /// Strongest spectral line above the band floor.
    pub raw: f64,
    /// `raw / measured`, rounded.
    pub order: usize,
    pub ratio: f64,
}

pub fn predicted_frequency(d: f64, j: f64) -> f64 {
    2.0 * (1.0 + 4.0 * d * d).sqrt() * j.abs()
}

pub fn frequency_table(d_values: &[f64], base: &LadderParams) -> Result<Vec<FrequencyRow>> {
    let grid = TimeGrid::new(0.0, FREQUENCY_WINDOW, FREQUENCY_POINTS)?;
    frequency_table_on(d_values, base, &grid)
}

pub fn frequency_table_on(d_values: &[f64], base: &LadderParams, grid: &TimeGrid) -> Result<Vec<FrequencyRow>> {
    d_values
        .par_iter()
        .map(|&d| {
            let p = base.clone().with_anisotropy(base.g, d);
            let traj = run_trajectory(&p, None, InitialState::PhiPlus, grid, Channels::ENDS)?;
            let c = carrier_frequency(traj.terminal_concurrence(), p.j_perp)?;
            let predicted = predicted_frequency(d, p.j_perp);
            Ok(FrequencyRow {
                d,
                predicted,
                measured: c.fundamental,
                raw: c.raw,
                order: c.order,
                ratio: c.fundamental / predicted,
            })
        })
        .collect()
}
