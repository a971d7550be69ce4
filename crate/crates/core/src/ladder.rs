//! Two-leg spin-½ ladder: sites, Pauli strings, the XXZ-type Hamiltonian with a
//! rung-selective field, and the initial states used by the experiments.
//!
//! Conventions used everywhere in the crate:
//!
//! - Rung `n` (1-based) holds sites `2n-1` (top leg) and `2n` (bottom leg).
//! - Computational basis bit `0` is spin-down with `σz|0⟩ = -|0⟩`, bit `1` is
//!   spin-up. In this ordering `σy = [[0, i], [-i, 0]]`.
//! - Site 1 is the most significant factor of the tensor product, so site `s` of
//!   an `n`-site system lives in bit `n - s` of the basis index.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Largest ladder the dense propagator is meant to handle (Hilbert dimension 1024).
pub const MAX_DENSE_RUNGS: usize = 5;

/// 1-based lattice site label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Site(usize);

impl Site {
    pub fn new(value: usize) -> Result<Self> {
        if value == 0 {
            return Err(Error::invalid("site indices are 1-based"));
        }
        Ok(Site(value))
    }

    /// The two sites `(2n-1, 2n)` of rung `n`.
    pub fn rung_pair(rung: usize) -> (Site, Site) {
        assert!(rung >= 1, "rungs are 1-based");
        (Site(2 * rung - 1), Site(2 * rung))
    }

    pub fn value(self) -> usize {
        self.0
    }

    pub fn rung(self) -> usize {
        self.0.div_ceil(2)
    }

    /// Odd sites form the top leg.
    pub fn is_top_leg(self) -> bool {
        self.0 % 2 == 1
    }

    /// Bit position of this site in a basis index of an `n_sites` system.
    pub(crate) fn bit(self, n_sites: usize) -> usize {
        n_sites - self.0
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Convenience for building site lists from plain integers.
pub fn sites(values: &[usize]) -> Result<Vec<Site>> {
    values.iter().map(|&v| Site::new(v)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    /// Action on a single basis bit: `(flips the bit, phase)`.
    fn act(self, bit: bool) -> (bool, C64) {
        match (self, bit) {
            (Pauli::X, _) => (true, C64::new(1.0, 0.0)),
            (Pauli::Y, false) => (true, C64::new(0.0, -1.0)),
            (Pauli::Y, true) => (true, C64::new(0.0, 1.0)),
            (Pauli::Z, false) => (false, C64::new(-1.0, 0.0)),
            (Pauli::Z, true) => (false, C64::new(1.0, 0.0)),
        }
    }
}

/// A real-weighted tensor product of single-site Pauli operators.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm {
    pub coeff: f64,
    pub factors: Vec<(Site, Pauli)>,
}

impl PauliTerm {
    fn new(coeff: f64, factors: Vec<(Site, Pauli)>, n_sites: usize) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(site, _) in &factors {
            if site.value() > n_sites {
                return Err(Error::invalid(format!(
                    "site {site} out of range for {n_sites} sites"
                )));
            }
            if !seen.insert(site) {
                return Err(Error::invalid(format!("duplicate site {site} in Pauli string")));
            }
        }
        Ok(PauliTerm { coeff, factors })
    }

    pub fn weight(&self) -> usize {
        self.factors.len()
    }

    /// Adds `coeff * P` into a dense matrix of an `n_sites` system.
    fn accumulate(&self, n_sites: usize, out: &mut Mat<C64>) {
        let dim = 1usize << n_sites;
        for col in 0..dim {
            let mut row = col;
            let mut phase = C64::new(self.coeff, 0.0);
            for &(site, pauli) in &self.factors {
                let bit = site.bit(n_sites);
                let (flip, p) = pauli.act((col >> bit) & 1 == 1);
                if flip {
                    row ^= 1 << bit;
                }
                phase *= p;
            }
            out[(row, col)] += phase;
        }
    }
}

/// Sum of Pauli strings on a fixed number of sites.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n_sites: usize,
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    pub fn new(n_sites: usize) -> Self {
        PauliSum {
            n_sites,
            terms: Vec::new(),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    /// Appends `coeff * ⊗ σ`; exact zeros are dropped.
    pub fn push(&mut self, coeff: f64, factors: Vec<(Site, Pauli)>) -> Result<()> {
        let term = PauliTerm::new(coeff, factors, self.n_sites)?;
        if coeff != 0.0 {
            self.terms.push(term);
        }
        Ok(())
    }

    fn push_bond(&mut self, a: Site, b: Site, coupling: f64, g: f64, d: f64) -> Result<()> {
        self.push(coupling * (1.0 + g) / 2.0, vec![(a, Pauli::X), (b, Pauli::X)])?;
        self.push(coupling * (1.0 - g) / 2.0, vec![(a, Pauli::Y), (b, Pauli::Y)])?;
        self.push(coupling * d, vec![(a, Pauli::Z), (b, Pauli::Z)])
    }

    pub fn to_operator(&self) -> HermitianOperator {
        let dim = 1usize << self.n_sites;
        let mut m = Mat::<C64>::zeros(dim, dim);
        for term in &self.terms {
            term.accumulate(self.n_sites, &mut m);
        }
        HermitianOperator { matrix: m }
    }
}

/// Dense Hermitian matrix on a `2^n` dimensional space.
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    matrix: Mat<C64>,
}

impl HermitianOperator {
    /// Wraps a dense matrix after checking `max|M - M†| ≤ 1e-12 · max|M|`.
    pub fn from_matrix(matrix: Mat<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::invalid("operator must be square"));
        }
        let op = HermitianOperator { matrix };
        let scale = op.max_abs();
        if op.hermiticity_residual() > 1e-12 * scale {
            return Err(Error::invalid(format!(
                "matrix is not Hermitian (residual {:e})",
                op.hermiticity_residual()
            )));
        }
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Mat<C64> {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                m = m.max(self.matrix[(i, j)].norm());
            }
        }
        m
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let mut r = 0.0f64;
        for j in 0..self.dim() {
            for i in 0..=j {
                r = r.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        r
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)]).sum()
    }

    pub fn apply(&self, psi: &StateVector) -> Result<Vec<C64>> {
        if psi.dim() != self.dim() {
            return Err(Error::invalid(format!(
                "dimension mismatch: operator {} vs state {}",
                self.dim(),
                psi.dim()
            )));
        }
        let n = self.dim();
        let amps = psi.amplitudes();
        Ok((0..n)
            .map(|i| (0..n).map(|j| self.matrix[(i, j)] * amps[j]).sum())
            .collect())
    }

    /// `⟨ψ|M|ψ⟩`, real for Hermitian `M`.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        let hpsi = self.apply(psi)?;
        Ok(psi
            .amplitudes()
            .iter()
            .zip(&hpsi)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            .re)
    }
}

/// Pure state in the computational basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_sites: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Requires a power-of-two length and unit norm within 1e-12.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let psi = Self::from_amplitudes_unchecked(amplitudes)?;
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("state is not normalized (norm {norm})")));
        }
        Ok(psi)
    }

    /// Requires a power-of-two length and a non-zero norm; rescales to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let mut psi = Self::from_amplitudes_unchecked(amplitudes)?;
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::invalid("cannot normalize a zero or non-finite vector"));
        }
        psi.amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(psi)
    }

    pub(crate) fn from_amplitudes_unchecked(amplitudes: Vec<C64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::invalid(format!("state dimension {dim} is not a power of two ≥ 2")));
        }
        Ok(StateVector {
            n_sites: dim.trailing_zeros() as usize,
            amplitudes,
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_sites: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_sites;
        if index >= dim {
            return Err(Error::invalid(format!("basis index {index} out of range")));
        }
        let mut a = vec![C64::new(0.0, 0.0); dim];
        a[index] = C64::new(1.0, 0.0);
        Self::new(a)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Which legs carry the `j_parallel` coupling.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LegTopology {
    /// Bonds `(2n-1, 2n+1)` and `(2n, 2n+2)`.
    #[default]
    Both,
    /// Only the even-site bonds `(2n, 2n+2)`; kept as a control variant.
    BottomOnly,
}

impl FromStr for LegTopology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "both" => Ok(LegTopology::Both),
            "bottom-only" | "even" => Ok(LegTopology::BottomOnly),
            other => Err(Error::invalid(format!("unknown leg topology `{other}`"))),
        }
    }
}

/// Physical parameters of one ladder instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderParams {
    pub n_rungs: usize,
    pub j_perp: f64,
    pub j_parallel: f64,
    /// XY anisotropy.
    pub g: f64,
    /// Ising (ZZ) anisotropy.
    pub d: f64,
    /// Field strength.
    pub h: f64,
    /// 1-based rungs that feel the field.
    pub field_mask: BTreeSet<usize>,
    #[serde(default)]
    pub legs: LegTopology,
}

impl LadderParams {
    /// `J⊥ = J∥ = 1`, `g = 1`, `d = 0.5`, `h = 100` on `n_rungs` rungs, field on
    /// the mediating rungs only.
    pub fn reference(n_rungs: usize) -> Self {
        LadderParams {
            n_rungs,
            j_perp: 1.0,
            j_parallel: 1.0,
            g: 1.0,
            d: 0.5,
            h: 100.0,
            field_mask: Self::mediating_rungs(n_rungs),
            legs: LegTopology::Both,
        }
    }

    /// Rungs `2..=N-1`.
    pub fn mediating_rungs(n_rungs: usize) -> BTreeSet<usize> {
        (2..n_rungs).collect()
    }

    pub fn with_h(mut self, h: f64) -> Self {
        self.h = h;
        self
    }

    pub fn with_anisotropy(mut self, g: f64, d: f64) -> Self {
        self.g = g;
        self.d = d;
        self
    }

    /// Field on every rung.
    pub fn with_uniform_field(mut self) -> Self {
        self.field_mask = (1..=self.n_rungs).collect();
        self
    }

    /// Changes the rung count and resets the field to the mediating rungs.
    pub fn with_rungs(mut self, n_rungs: usize) -> Self {
        self.n_rungs = n_rungs;
        self.field_mask = Self::mediating_rungs(n_rungs);
        self
    }

    pub fn with_legs(mut self, legs: LegTopology) -> Self {
        self.legs = legs;
        self
    }

    pub fn n_sites(&self) -> usize {
        2 * self.n_rungs
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_rungs < 2 {
            return Err(Error::invalid("a ladder needs at least 2 rungs"));
        }
        for (name, v) in [
            ("j_perp", self.j_perp),
            ("j_parallel", self.j_parallel),
            ("g", self.g),
            ("d", self.d),
            ("h", self.h),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite")));
            }
        }
        if let Some(&bad) = self
            .field_mask
            .iter()
            .find(|&&r| r == 0 || r > self.n_rungs)
        {
            return Err(Error::invalid(format!("field mask rung {bad} out of range")));
        }
        Ok(())
    }
}

/// Per-bond couplings; index `k` of a leg vector is the bond between rungs `k+1`
/// and `k+2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BondCouplings {
    pub rung: Vec<f64>,
    pub top_leg: Vec<f64>,
    pub bottom_leg: Vec<f64>,
}

impl BondCouplings {
    pub fn uniform(params: &LadderParams) -> Self {
        let legs = params.n_rungs.saturating_sub(1);
        BondCouplings {
            rung: vec![params.j_perp; params.n_rungs],
            top_leg: vec![params.j_parallel; legs],
            bottom_leg: vec![params.j_parallel; legs],
        }
    }
}

/// `⊗ σ` acting on the given sites of an `n_sites` system, identity elsewhere.
pub fn pauli_string(axes: &[Pauli], on: &[Site], n_sites: usize) -> Result<HermitianOperator> {
    if axes.len() != on.len() {
        return Err(Error::invalid("axes and sites must have equal length"));
    }
    let mut sum = PauliSum::new(n_sites);
    sum.push(1.0, on.iter().copied().zip(axes.iter().copied()).collect())?;
    Ok(sum.to_operator())
}

/// Rung, leg and field terms of the ladder Hamiltonian as Pauli strings.
pub fn hamiltonian_terms(params: &LadderParams) -> Result<PauliSum> {
    hamiltonian_terms_with(params, &BondCouplings::uniform(params))
}

pub fn hamiltonian_terms_with(params: &LadderParams, couplings: &BondCouplings) -> Result<PauliSum> {
    params.validate()?;
    let n = params.n_rungs;
    if couplings.rung.len() != n || couplings.top_leg.len() != n - 1 || couplings.bottom_leg.len() != n - 1 {
        return Err(Error::invalid("bond coupling vectors do not match the ladder size"));
    }
    let mut sum = PauliSum::new(params.n_sites());
    for rung in 1..=n {
        let (top, bottom) = Site::rung_pair(rung);
        sum.push_bond(top, bottom, couplings.rung[rung - 1], params.g, params.d)?;
    }
    for k in 0..n - 1 {
        let (t0, b0) = Site::rung_pair(k + 1);
        let (t1, b1) = Site::rung_pair(k + 2);
        if params.legs == LegTopology::Both {
            sum.push_bond(t0, t1, couplings.top_leg[k], params.g, params.d)?;
        }
        sum.push_bond(b0, b1, couplings.bottom_leg[k], params.g, params.d)?;
    }
    for &rung in &params.field_mask {
        let (top, bottom) = Site::rung_pair(rung);
        sum.push(params.h, vec![(top, Pauli::Z)])?;
        sum.push(params.h, vec![(bottom, Pauli::Z)])?;
    }
    Ok(sum)
}

pub fn build_hamiltonian(params: &LadderParams) -> Result<HermitianOperator> {
    Ok(hamiltonian_terms(params)?.to_operator())
}

pub fn build_hamiltonian_with(params: &LadderParams, couplings: &BondCouplings) -> Result<HermitianOperator> {
    Ok(hamiltonian_terms_with(params, couplings)?.to_operator())
}

/// Two-site Hamiltonian of a single isolated rung.
pub fn rung_hamiltonian(j: f64, g: f64, d: f64) -> HermitianOperator {
    let mut sum = PauliSum::new(2);
    let (a, b) = Site::rung_pair(1);
    sum.push_bond(a, b, j, g, d)
        .expect("rung sites are valid for a two-site system");
    sum.to_operator()
}

/// Two-qubit state placed on rung 1; every other site starts in `|0⟩`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    /// `(|00⟩ + |11⟩)/√2`
    #[default]
    PhiPlus,
    /// `(|01⟩ + |10⟩)/√2`
    PsiPlus,
    /// `(|Ψ−⟩ + |Φ+⟩)/√2`
    PsiMinusPlusPhiPlus,
    /// `|00⟩`
    SeparableZeroZero,
}

impl InitialState {
    /// Amplitudes on `|b1 b2⟩` in the order `00, 01, 10, 11`.
    pub fn rung_amplitudes(self) -> [f64; 4] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            InitialState::PhiPlus => [s, 0.0, 0.0, s],
            InitialState::PsiPlus => [0.0, s, s, 0.0],
            InitialState::PsiMinusPlusPhiPlus => [0.5, 0.5, -0.5, 0.5],
            InitialState::SeparableZeroZero => [1.0, 0.0, 0.0, 0.0],
        }
    }
}

impl FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phi-plus" => Ok(InitialState::PhiPlus),
            "psi-plus" => Ok(InitialState::PsiPlus),
            "psi-minus-plus-phi-plus" => Ok(InitialState::PsiMinusPlusPhiPlus),
            "separable" | "separable-zero-zero" => Ok(InitialState::SeparableZeroZero),
            other => Err(Error::invalid(format!("unknown initial state `{other}`"))),
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitialState::PhiPlus => "phi-plus",
            InitialState::PsiPlus => "psi-plus",
            InitialState::PsiMinusPlusPhiPlus => "psi-minus-plus-phi-plus",
            InitialState::SeparableZeroZero => "separable",
        })
    }
}

pub fn build_initial_state(kind: InitialState, params: &LadderParams) -> Result<StateVector> {
    params.validate()?;
    let n = params.n_sites();
    let mut amps = vec![C64::new(0.0, 0.0); params.dim()];
    for (pattern, &a) in kind.rung_amplitudes().iter().enumerate() {
        let (b1, b2) = (pattern >> 1, pattern & 1);
        amps[(b1 << (n - 1)) | (b2 << (n - 2))] = C64::new(a, 0.0);
    }
    StateVector::new(amps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(op: &HermitianOperator) -> Vec<Vec<C64>> {
        (0..op.dim())
            .map(|i| (0..op.dim()).map(|j| op.get(i, j)).collect())
            .collect()
    }

    #[test]
    fn z_on_site_one_is_minus_on_down_states() {
        let z = pauli_string(&[Pauli::Z], &sites(&[1]).unwrap(), 2).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| z.get(i, i).re).collect();
        assert_eq!(diag, vec![-1.0, -1.0, 1.0, 1.0]);
    }

    #[test]
    fn xx_is_antidiagonal() {
        let xx = pauli_string(&[Pauli::X, Pauli::X], &sites(&[1, 2]).unwrap(), 2).unwrap();
        let m = dense(&xx);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i + j == 3 { 1.0 } else { 0.0 };
                assert_eq!(m[i][j], C64::new(expect, 0.0));
            }
        }
    }

    #[test]
    fn pauli_algebra_is_right_handed() {
        let s = sites(&[1]).unwrap();
        let x = pauli_string(&[Pauli::X], &s, 1).unwrap();
        let y = pauli_string(&[Pauli::Y], &s, 1).unwrap();
        let z = pauli_string(&[Pauli::Z], &s, 1).unwrap();
        let xy = x.matrix() * y.matrix();
        for i in 0..2 {
            for j in 0..2 {
                let iz = z.get(i, j) * C64::new(0.0, 1.0);
                assert!((xy[(i, j)] - iz).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn pauli_string_rejects_bad_sites() {
        let dup = pauli_string(&[Pauli::X, Pauli::Z], &sites(&[2, 2]).unwrap(), 3);
        assert!(matches!(dup, Err(Error::InvalidArgument(_))));
        let out = pauli_string(&[Pauli::X], &sites(&[4]).unwrap(), 3);
        assert!(matches!(out, Err(Error::InvalidArgument(_))));
        assert!(Site::new(0).is_err());
    }

    #[test]
    fn pauli_strings_square_to_identity() {
        let axes = [Pauli::Y, Pauli::X, Pauli::Z];
        let p = pauli_string(&axes, &sites(&[3, 1, 4]).unwrap(), 4).unwrap();
        let sq = p.matrix() * p.matrix();
        for i in 0..16 {
            for j in 0..16 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((sq[(i, j)] - C64::new(e, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn site_layout() {
        assert_eq!(Site::rung_pair(3), (Site(5), Site(6)));
        assert_eq!(Site(5).rung(), 3);
        assert_eq!(Site(6).rung(), 3);
        assert!(Site(5).is_top_leg());
        assert!(!Site(6).is_top_leg());
    }

    #[test]
    fn reference_hamiltonian_is_hermitian_and_traceless() {
        for params in [
            LadderParams::reference(3),
            LadderParams::reference(4).with_anisotropy(0.3, -0.7),
            LadderParams::reference(2).with_uniform_field(),
        ] {
            let h = build_hamiltonian(&params).unwrap();
            assert_eq!(h.dim(), params.dim());
            assert!(h.hermiticity_residual() <= 1e-12 * h.max_abs());
            assert!(h.trace().norm() < 1e-12);
        }
    }

    #[test]
    fn all_down_energy_matches_scalar_sum() {
        let p = LadderParams::reference(3);
        let h = build_hamiltonian(&p).unwrap();
        // Independent count: every ZZ bond sees (+1), each field site sees -1.
        let rung_bonds = p.n_rungs as f64;
        let leg_bonds = 2.0 * (p.n_rungs - 1) as f64;
        let field_sites = 2.0 * p.field_mask.len() as f64;
        let expected = rung_bonds * p.d * p.j_perp + leg_bonds * p.d * p.j_parallel - field_sites * p.h;
        assert_eq!(expected, -196.5);
        assert!((h.get(0, 0).re - expected).abs() < 1e-12);
    }

    #[test]
    fn field_mask_controls_number_of_field_terms() {
        let count_field = |p: &LadderParams| {
            hamiltonian_terms(p)
                .unwrap()
                .terms()
                .iter()
                .filter(|t| t.weight() == 1)
                .count()
        };
        let p = LadderParams::reference(3);
        assert_eq!(p.field_mask, BTreeSet::from([2]));
        assert_eq!(count_field(&p), 2);
        assert_eq!(count_field(&p.clone().with_uniform_field()), 6);
        assert!(LadderParams::reference(2).field_mask.is_empty());
    }

    #[test]
    fn bottom_only_legs_drop_top_bonds() {
        let both = hamiltonian_terms(&LadderParams::reference(3)).unwrap();
        let bottom =
            hamiltonian_terms(&LadderParams::reference(3).with_legs(LegTopology::BottomOnly)).unwrap();
        // g = 1 removes YY, so each bond contributes XX and ZZ.
        assert_eq!(both.terms().len() - bottom.terms().len(), 4);
    }

    #[test]
    fn invalid_params_are_rejected() {
        let mut p = LadderParams::reference(3);
        p.n_rungs = 1;
        assert!(build_hamiltonian(&p).is_err());
        let mut p = LadderParams::reference(3);
        p.g = f64::NAN;
        assert!(build_hamiltonian(&p).is_err());
        let mut p = LadderParams::reference(3);
        p.field_mask.insert(4);
        assert!(build_hamiltonian(&p).is_err());
    }

    #[test]
    fn initial_states() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p3 = LadderParams::reference(3);
        let phi = build_initial_state(InitialState::PhiPlus, &p3).unwrap();
        assert_eq!(phi.dim(), 64);
        assert_eq!(phi.amplitudes()[0b000000], C64::new(s, 0.0));
        assert_eq!(phi.amplitudes()[0b110000], C64::new(s, 0.0));
        assert_eq!(phi.amplitudes().iter().filter(|a| a.norm() > 0.0).count(), 2);

        let sep = build_initial_state(InitialState::SeparableZeroZero, &p3).unwrap();
        assert_eq!(sep.amplitudes()[0], C64::new(1.0, 0.0));
        assert!((sep.norm() - 1.0).abs() < 1e-15);

        let psi = build_initial_state(InitialState::PsiPlus, &LadderParams::reference(2)).unwrap();
        assert_eq!(psi.amplitudes()[0b0100], C64::new(s, 0.0));
        assert_eq!(psi.amplitudes()[0b1000], C64::new(s, 0.0));

        let sup = build_initial_state(InitialState::PsiMinusPlusPhiPlus, &p3).unwrap();
        assert!((sup.norm() - 1.0).abs() < 1e-15);

        assert!("bogus".parse::<InitialState>().is_err());
        for k in [
            InitialState::PhiPlus,
            InitialState::PsiPlus,
            InitialState::PsiMinusPlusPhiPlus,
            InitialState::SeparableZeroZero,
        ] {
            assert_eq!(k.to_string().parse::<InitialState>().unwrap(), k);
        }
    }

    #[test]
    fn single_rung_block_structure() {
        // g = 1 couples |00>,|11> and |01>,|10> only.
        let h = rung_hamiltonian(1.0, 1.0, 0.5);
        assert_eq!(h.get(0, 3), C64::new(1.0, 0.0));
        assert_eq!(h.get(1, 2), C64::new(1.0, 0.0));
        assert_eq!(h.get(0, 1), C64::new(0.0, 0.0));
        assert_eq!(h.get(0, 0).re, 0.5);
        assert_eq!(h.get(1, 1).re, -0.5);
    }
}
