//! Second-order effective model of the terminal rungs with the mediating rungs
//! frozen in their field ground state.
//!
//! With `H0` the field term and `V` all couplings, the model on the subspace `P`
//! where every mediating spin is down is
//! `H_eff = PVP - PVQ (H0_Q - E0)^{-1} QVP`, assembled numerically from the full
//! Hamiltonian. For the reference ladder it contains the two-rail coupling
//! `-J_eff (X1 X5 + X2 X6)` plus rung terms and single-site shifts.

use faer::Mat;
use serde::{Deserialize, Serialize};

use super::{run_trajectory, Channels};
use crate::error::{Error, Result};
use crate::ladder::{
    build_hamiltonian, build_hamiltonian_with, build_initial_state, BondCouplings,
    HermitianOperator, InitialState, LadderParams, Pauli, PauliSum, Site, StateVector,
};
use crate::metrics::{concurrence, partial_trace};
use crate::propagator::{diagonalize, Evolution, TimeGrid};
use crate::signal::{effective_coupling, envelope_period, extract_alpha, find_peaks, TimeSeries};
use crate::C64;

#[derive(Clone, Debug)]
pub struct ProjectedModel {
    /// Ladder sites kept free, in order; local site `k+1` is `free_sites[k]`.
    pub free_sites: Vec<Site>,
    /// Full-space basis indices spanning `P`, ascending.
    pub basis: Vec<usize>,
    pub hamiltonian: HermitianOperator,
}

impl ProjectedModel {
    pub fn local_site(&self, site: Site) -> Option<Site> {
        self.free_sites
            .iter()
            .position(|&s| s == site)
            .map(|k| Site::new(k + 1).expect("positions are 1-based"))
    }

    /// Restricts a full-space state that lies inside `P`.
    pub fn project(&self, psi: &StateVector) -> Result<StateVector> {
        let amps: Vec<C64> = self.basis.iter().map(|&i| psi.amplitudes()[i]).collect();
        StateVector::new(amps)
            .map_err(|_| Error::invalid("state has weight outside the frozen subspace"))
    }
}

/// `Tr(M P) / dim` for the Pauli string `P`.
pub fn pauli_coefficient(op: &HermitianOperator, axes: &[Pauli], sites: &[Site]) -> Result<f64> {
    let n = op.dim().trailing_zeros() as usize;
    let p = crate::ladder::pauli_string(axes, sites, n)?;
    let mut tr = C64::new(0.0, 0.0);
    for i in 0..op.dim() {
        for k in 0..op.dim() {
            tr += op.get(i, k) * p.get(k, i);
        }
    }
    Ok(tr.re / op.dim() as f64)
}

pub fn second_order_projection(params: &LadderParams) -> Result<ProjectedModel> {
    params.validate()?;
    let n_sites = params.n_sites();
    let frozen: Vec<Site> = params
        .field_mask
        .iter()
        .flat_map(|&r| {
            let (a, b) = Site::rung_pair(r);
            [a, b]
        })
        .collect();
    if frozen.is_empty() {
        return Err(Error::invalid("effective model needs at least one field rung"));
    }
    let free_sites: Vec<Site> = (1..=n_sites)
        .map(|s| Site::new(s).expect("1-based"))
        .filter(|s| !frozen.contains(s))
        .collect();
    let frozen_mask: usize = frozen.iter().map(|s| 1usize << s.bit(n_sites)).sum();

    let full = build_hamiltonian(params)?;
    let zero = BondCouplings {
        rung: vec![0.0; params.n_rungs],
        top_leg: vec![0.0; params.n_rungs - 1],
        bottom_leg: vec![0.0; params.n_rungs - 1],
    };
    let h0 = build_hamiltonian_with(params, &zero)?;
    let dim = full.dim();
    let e0: Vec<f64> = (0..dim).map(|i| h0.get(i, i).re).collect();
    let v = |i: usize, j: usize| full.get(i, j) - h0.get(i, j);

    let basis: Vec<usize> = (0..dim).filter(|i| i & frozen_mask == 0).collect();
    let outside: Vec<usize> = (0..dim).filter(|i| i & frozen_mask != 0).collect();
    let e_ref = e0[basis[0]];
    if basis.iter().any(|&i| e0[i] != e_ref) {
        return Err(Error::invalid("field must act only on the frozen rungs"));
    }
    let gaps: Vec<f64> = outside.iter().map(|&q| e0[q] - e_ref).collect();
    if gaps.iter().any(|g| g.abs() < 1e-9) {
        return Err(Error::NumericFailure("degenerate intermediate state".into()));
    }
    let m = basis.len();
    let vqp = Mat::<C64>::from_fn(outside.len(), m, |q, p| v(outside[q], basis[p]));
    let heff = Mat::<C64>::from_fn(m, m, |a, b| {
        let mut x = v(basis[a], basis[b]);
        for (q, gap) in gaps.iter().enumerate() {
            x -= vqp[(q, a)].conj() * vqp[(q, b)] / *gap;
        }
        x
    });
    // Symmetrize away round-off before the Hermiticity check.
    let heff = Mat::<C64>::from_fn(m, m, |a, b| 0.5 * (heff[(a, b)] + heff[(b, a)].conj()));
    Ok(ProjectedModel {
        free_sites,
        basis,
        hamiltonian: HermitianOperator::from_matrix(heff)?,
    })
}

/// Terminal-pair concurrence under the projected model, starting from `state`
/// on rung 1.
pub fn effective_terminal_concurrence(
    model: &ProjectedModel,
    params: &LadderParams,
    state: InitialState,
    grid: &TimeGrid,
) -> Result<TimeSeries> {
    let psi0 = model.project(&build_initial_state(state, params)?)?;
    let (a, b) = Site::rung_pair(params.n_rungs);
    let keep = [
        model.local_site(a).expect("terminal sites are free"),
        model.local_site(b).expect("terminal sites are free"),
    ];
    let decomp = diagonalize(&model.hamiltonian)?;
    let values = Evolution::new(&decomp, &psi0)?
        .map_grid(grid, |_, psi| concurrence(&partial_trace(psi, &keep)?))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    TimeSeries::new(grid.points(), values)
}

/// `-J_eff (X1 X3 + X2 X4)` on four sites: rung 1 is sites (1, 2), the
/// terminal rung is sites (3, 4).
pub fn two_rail_hamiltonian(j_eff: f64) -> Result<HermitianOperator> {
    let s = |k: usize| Site::new(k).expect("1-based");
    let mut sum = PauliSum::new(4);
    sum.push(-j_eff, vec![(s(1), Pauli::X), (s(3), Pauli::X)])?;
    sum.push(-j_eff, vec![(s(2), Pauli::X), (s(4), Pauli::X)])?;
    Ok(sum.to_operator())
}

/// Evolves `Φ+ ⊗ |00⟩` under [`two_rail_hamiltonian`] and reads `J_eff` back
/// from the first revival of the return probability, which equals
/// `cos⁴(J_eff t)`.
pub fn recover_two_rail_coupling(j_eff: f64, grid: &TimeGrid) -> Result<f64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![C64::new(0.0, 0.0); 16];
    amps[0b0000] = C64::new(s, 0.0);
    amps[0b1100] = C64::new(s, 0.0);
    let psi0 = StateVector::new(amps)?;
    let decomp = diagonalize(&two_rail_hamiltonian(j_eff)?)?;
    let echo = Evolution::new(&decomp, &psi0)?.map_grid(grid, |_, psi| psi0.inner(psi).norm_sqr());
    let series = TimeSeries::new(grid.points(), echo)?;
    let revival = find_peaks(&series, 0.5)?
        .first()
        .map(|p| p.time)
        .ok_or_else(|| Error::InsufficientData("no revival inside the grid".into()))?;
    effective_coupling(revival)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveReport {
    pub params: LadderParams,
    pub grid: TimeGrid,
    /// Envelope period of the terminal concurrence, full ladder.
    pub t_slow_full: Option<f64>,
    /// Same, projected model.
    pub t_slow_effective: Option<f64>,
    /// `|T_eff - T_full| / T_full`.
    pub relative_error: Option<f64>,
    /// `-coefficient` of `X1 X_{2N-1}` in the projected model.
    pub j_eff_projected: f64,
    /// `J_eff` implied by the full-ladder period, `π / T_slow`.
    pub j_eff_measured: Option<f64>,
    /// `J_eff h / J∥²` from the full-ladder period.
    pub alpha_measured: Option<f64>,
}

pub fn effective_model_check(base: &LadderParams, grid: &TimeGrid) -> Result<EffectiveReport> {
    let model = second_order_projection(base)?;
    let full = run_trajectory(base, None, InitialState::PhiPlus, grid, Channels::ENDS)?;
    let t_slow_full = envelope_period(full.terminal_concurrence()).ok();
    let eff = effective_terminal_concurrence(&model, base, InitialState::PhiPlus, grid)?;
    let t_slow_effective = envelope_period(&eff).ok();
    let relative_error = t_slow_full
        .zip(t_slow_effective)
        .map(|(f, e)| (e - f).abs() / f);

    let (first, _) = Site::rung_pair(1);
    let (last, _) = Site::rung_pair(base.n_rungs);
    let local = [
        model.local_site(first).expect("free"),
        model.local_site(last).expect("free"),
    ];
    let j_eff_projected = -pauli_coefficient(&model.hamiltonian, &[Pauli::X, Pauli::X], &local)?;
    Ok(EffectiveReport {
        params: base.clone(),
        grid: *grid,
        t_slow_full,
        t_slow_effective,
        relative_error,
        j_eff_projected,
        j_eff_measured: t_slow_full.map(effective_coupling).transpose()?,
        alpha_measured: t_slow_full.map(|t| extract_alpha(t, base)).transpose()?,
    })
}
