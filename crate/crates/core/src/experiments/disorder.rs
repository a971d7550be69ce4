use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{mean_std, run_trajectory, Channels};
use crate::error::{Error, Result};
use crate::ladder::{BondCouplings, InitialState, LadderParams};
use crate::propagator::TimeGrid;
use crate::signal::TimeSeries;

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of realization `k`: `splitmix64(splitmix64(base) + k)`. Each child seeds
/// its own ChaCha8 stream, so realizations are independent of scheduling.
pub fn child_seed(base_seed: u64, k: u64) -> u64 {
    splitmix64(splitmix64(base_seed).wrapping_add(k))
}

/// Relative coupling perturbations `J → J(1 + δ_k)` of one sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisorderRealization {
    pub seed: u64,
    pub rung_deltas: Vec<f64>,
    /// Top-leg bonds in rung order, then bottom-leg bonds.
    pub leg_deltas: Vec<f64>,
}

impl DisorderRealization {
    /// Draws, in order, `N` rung deltas, `N-1` top-leg and `N-1` bottom-leg
    /// deltas uniformly on `[-delta, delta]`.
    pub fn draw(seed: u64, delta: f64, n_rungs: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |count: usize| -> Vec<f64> {
            (0..count).map(|_| rng.random_range(-delta..=delta)).collect()
        };
        let rung_deltas = draw(n_rungs);
        let leg_deltas = draw(2 * (n_rungs - 1));
        DisorderRealization {
            seed,
            rung_deltas,
            leg_deltas,
        }
    }

    pub fn couplings(&self, params: &LadderParams) -> BondCouplings {
        let legs = params.n_rungs - 1;
        let scale = |j: f64, d: &[f64]| d.iter().map(|x| j * (1.0 + x)).collect::<Vec<_>>();
        BondCouplings {
            rung: scale(params.j_perp, &self.rung_deltas),
            top_leg: scale(params.j_parallel, &self.leg_deltas[..legs]),
            bottom_leg: scale(params.j_parallel, &self.leg_deltas[legs..]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub delta: f64,
    pub n_samples: usize,
    pub base_seed: u64,
    pub mean_fidelity: TimeSeries,
    pub std_fidelity: TimeSeries,
    pub mean_peak_fidelity: f64,
    pub std_peak_fidelity: f64,
    /// Per-realization peak fidelity, by realization index.
    pub peak_fidelities: Vec<f64>,
    pub seeds: Vec<u64>,
}

/// Terminal fidelity over `n_samples` coupling-disordered ladders. The field is
/// left unperturbed.
pub fn disorder_ensemble(
    delta: f64,
    n_samples: usize,
    base_seed: u64,
    base: &LadderParams,
    grid: &TimeGrid,
) -> Result<EnsembleStats> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::invalid("disorder strength must be finite and ≥ 0"));
    }
    if n_samples == 0 {
        return Err(Error::invalid("ensemble needs at least one sample"));
    }
    base.validate()?;
    let curves = (0..n_samples as u64)
        .into_par_iter()
        .map(|k| {
            let real = DisorderRealization::draw(child_seed(base_seed, k), delta, base.n_rungs);
            let traj = run_trajectory(
                base,
                Some(&real.couplings(base)),
                InitialState::PhiPlus,
                grid,
                Channels::ENDS,
            )?;
            Ok((real.seed, traj.fidelity_terminal.values().to_vec()))
        })
        .collect::<Result<Vec<_>>>()?;

    let times = grid.points();
    let mut mean = Vec::with_capacity(times.len());
    let mut std = Vec::with_capacity(times.len());
    let mut column = vec![0.0; n_samples];
    for t in 0..times.len() {
        for (c, (_, f)) in column.iter_mut().zip(&curves) {
            *c = f[t];
        }
        let (m, s) = mean_std(&column);
        mean.push(m);
        std.push(s);
    }
    let peak_fidelities: Vec<f64> = curves
        .iter()
        .map(|(_, f)| f.iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let (mean_peak_fidelity, std_peak_fidelity) = mean_std(&peak_fidelities);
    Ok(EnsembleStats {
        delta,
        n_samples,
        base_seed,
        mean_fidelity: TimeSeries::new(times.clone(), mean)?,
        std_fidelity: TimeSeries::new(times, std)?,
        mean_peak_fidelity,
        std_peak_fidelity,
        peak_fidelities,
        seeds: curves.iter().map(|(s, _)| *s).collect(),
    })
}
