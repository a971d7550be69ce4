use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_trajectory, Channels};
use crate::error::{Error, Result};
use crate::ladder::{InitialState, LadderParams};
use crate::propagator::TimeGrid;

/// Peak terminal fidelity over a `(g, d)` grid; `f_max[i][j]` is at
/// `(g_values[i], d_values[j])`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatmapGrid {
    pub g_values: Vec<f64>,
    pub d_values: Vec<f64>,
    pub f_max: Vec<Vec<f64>>,
}

impl HeatmapGrid {
    pub fn cell(&self, g: f64, d: f64) -> Option<f64> {
        let i = self.g_values.iter().position(|&x| x == g)?;
        let j = self.d_values.iter().position(|&x| x == d)?;
        Some(self.f_max[i][j])
    }
}

/// `n` evenly spaced values on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| if k + 1 == n { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 })
            .collect(),
    }
}

/// Cells run concurrently and are placed by index.
pub fn anisotropy_heatmap(
    g_values: &[f64],
    d_values: &[f64],
    base: &LadderParams,
    grid: &TimeGrid,
) -> Result<HeatmapGrid> {
    if g_values.is_empty() || d_values.is_empty() {
        return Err(Error::invalid("heatmap axes must be non-empty"));
    }
    let cells: Vec<(f64, f64)> = g_values
        .iter()
        .flat_map(|&g| d_values.iter().map(move |&d| (g, d)))
        .collect();
    let values = cells
        .par_iter()
        .map(|&(g, d)| {
            let p = base.clone().with_anisotropy(g, d);
            let traj = run_trajectory(&p, None, InitialState::PhiPlus, grid, Channels::ENDS)?;
            Ok(traj.fidelity_max().1)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(HeatmapGrid {
        g_values: g_values.to_vec(),
        d_values: d_values.to_vec(),
        f_max: values.chunks(d_values.len()).map(<[f64]>::to_vec).collect(),
    })
}
