//! Reduced density matrices and the scalar measures computed from them:
//! Wootters concurrence, Bell-state fidelity, von Neumann entropy (bits) and
//! mutual information.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ladder::{Site, StateVector};
use crate::propagator::eigh;
use crate::C64;

/// Eigenvalues below this magnitude are treated as round-off and clamped to 0.
pub const EIGEN_CLAMP: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: Mat<C64>,
}

impl DensityMatrix {
    /// Checks Hermiticity and unit trace to 1e-10 and positivity to -1e-9.
    pub fn new(matrix: Mat<C64>) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() || n < 2 || !n.is_power_of_two() {
            return Err(Error::invalid("density matrix must be square with power-of-two size"));
        }
        let rho = DensityMatrix { matrix };
        for j in 0..n {
            for i in 0..=j {
                if (rho.matrix[(i, j)] - rho.matrix[(j, i)].conj()).norm() > 1e-10 {
                    return Err(Error::invalid("density matrix is not Hermitian"));
                }
            }
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::invalid(format!("density matrix trace is {tr}")));
        }
        if rho.eigenvalues()?.first().is_some_and(|&l| l < -EIGEN_CLAMP) {
            return Err(Error::invalid("density matrix has a negative eigenvalue"));
        }
        Ok(rho)
    }

    pub fn pure(psi: &StateVector) -> Self {
        let a = psi.amplitudes();
        DensityMatrix {
            matrix: Mat::from_fn(a.len(), a.len(), |i, j| a[i] * a[j].conj()),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            matrix: Mat::from_fn(dim, dim, |i, j| {
                C64::new(if i == j { 1.0 / dim as f64 } else { 0.0 }, 0.0)
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Mat<C64> {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.matrix[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).sum()
    }

    pub fn purity(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| self.matrix[(i, j)].norm_sqr())
            .sum()
    }

    /// Ascending, unclamped.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eigh(self.matrix.as_ref())?.0)
    }

    /// `Σ p_i |v_i⟩⟨v_i|` with the given mixing weights over pure states.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<Self> {
        let Some(first) = states.first() else {
            return Err(Error::invalid("mixture needs at least one state"));
        };
        let n = first.dim();
        let mut m = Mat::<C64>::zeros(n, n);
        for (w, s) in weights.iter().zip(states) {
            if s.dim() != n {
                return Err(Error::invalid("mixture dimension mismatch"));
            }
            for j in 0..n {
                for i in 0..n {
                    m[(i, j)] += s.matrix[(i, j)] * *w;
                }
            }
        }
        DensityMatrix::new(m)
    }
}

/// Reduced state of `keep`; the first listed site is the most significant
/// factor of the result.
pub fn partial_trace(psi: &StateVector, keep: &[Site]) -> Result<DensityMatrix> {
    let n = psi.n_sites();
    validate_subsystem(keep, n)?;
    let k = keep.len();
    let kept_bits: Vec<usize> = keep.iter().map(|s| s.bit(n)).collect();
    let kept_mask: usize = kept_bits.iter().map(|b| 1usize << b).sum();
    let rest_bits: Vec<usize> = (0..n).filter(|b| kept_mask & (1 << b) == 0).collect();

    let rows = 1usize << k;
    let cols = 1usize << (n - k);
    // Amplitudes reshaped as (kept index, traced index).
    let mut a = vec![C64::new(0.0, 0.0); rows * cols];
    for (idx, amp) in psi.amplitudes().iter().enumerate() {
        let mut r = 0;
        for &b in &kept_bits {
            r = (r << 1) | ((idx >> b) & 1);
        }
        let mut c = 0;
        for (pos, &b) in rest_bits.iter().enumerate() {
            c |= ((idx >> b) & 1) << pos;
        }
        a[r * cols + c] = *amp;
    }
    let matrix = Mat::from_fn(rows, rows, |i, j| {
        let (ri, rj) = (&a[i * cols..(i + 1) * cols], &a[j * cols..(j + 1) * cols]);
        ri.iter().zip(rj).map(|(x, y)| x * y.conj()).sum()
    });
    Ok(DensityMatrix { matrix })
}

fn validate_subsystem(sites: &[Site], n_sites: usize) -> Result<()> {
    if sites.is_empty() {
        return Err(Error::invalid("subsystem must be non-empty"));
    }
    let mut seen = BTreeSet::new();
    for &s in sites {
        if s.value() > n_sites {
            return Err(Error::invalid(format!("site {s} out of range for {n_sites} sites")));
        }
        if !seen.insert(s) {
            return Err(Error::invalid(format!("duplicate site {s}")));
        }
    }
    Ok(())
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::invalid(format!(
            "expected a two-qubit density matrix, got dimension {}",
            rho.dim()
        )));
    }
    Ok(())
}

/// `σy ⊗ σy`; its sign does not depend on the σy phase convention.
fn spin_flip() -> Mat<C64> {
    let mut m = Mat::<C64>::zeros(4, 4);
    m[(0, 3)] = C64::new(-1.0, 0.0);
    m[(3, 0)] = C64::new(-1.0, 0.0);
    m[(1, 2)] = C64::new(1.0, 0.0);
    m[(2, 1)] = C64::new(1.0, 0.0);
    m
}

/// Wootters concurrence `max(0, √λ1 - √λ2 - √λ3 - √λ4)`.
///
/// The `√λ_i` of `R = ρ ỹ ρ* ỹ` are obtained as the singular values of
/// `√ρ ỹ √ρ*`, which keeps the computation on Hermitian/SVD routines.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubit(rho)?;
    let (vals, vecs) = eigh(rho.matrix.as_ref())?;
    let sqrt_rho = Mat::<C64>::from_fn(4, 4, |i, j| {
        (0..4)
            .map(|k| vecs[(i, k)] * vecs[(j, k)].conj() * clamp(vals[k]).sqrt())
            .sum()
    });
    let conj = Mat::<C64>::from_fn(4, 4, |i, j| sqrt_rho[(i, j)].conj());
    let m = &sqrt_rho * spin_flip() * &conj;
    let s = m
        .singular_values()
        .map_err(|e| Error::NumericFailure(format!("svd failed: {e:?}")))?;
    Ok((s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0))
}

fn clamp(x: f64) -> f64 {
    if x < EIGEN_CLAMP { 0.0 } else { x }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    /// Amplitudes on `00, 01, 10, 11`.
    pub fn amplitudes(self) -> [f64; 4] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            BellState::PhiPlus => [s, 0.0, 0.0, s],
            BellState::PhiMinus => [s, 0.0, 0.0, -s],
            BellState::PsiPlus => [0.0, s, s, 0.0],
            BellState::PsiMinus => [0.0, s, -s, 0.0],
        }
    }
}

impl FromStr for BellState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phi-plus" => Ok(BellState::PhiPlus),
            "phi-minus" => Ok(BellState::PhiMinus),
            "psi-plus" => Ok(BellState::PsiPlus),
            "psi-minus" => Ok(BellState::PsiMinus),
            other => Err(Error::invalid(format!("unknown Bell state `{other}`"))),
        }
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellState::PhiPlus => "phi-plus",
            BellState::PhiMinus => "phi-minus",
            BellState::PsiPlus => "psi-plus",
            BellState::PsiMinus => "psi-minus",
        })
    }
}

/// `⟨b|ρ|b⟩`.
pub fn bell_fidelity(rho: &DensityMatrix, bell: BellState) -> Result<f64> {
    require_two_qubit(rho)?;
    let b = bell.amplitudes();
    let mut f = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            f += b[i] * b[j] * rho.matrix[(i, j)].re;
        }
    }
    Ok(f.clamp(0.0, 1.0))
}

/// `-Σ p log2 p` over the clamped spectrum.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let s: f64 = rho
        .eigenvalues()?
        .into_iter()
        .map(clamp)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum();
    Ok(s.clamp(0.0, (rho.dim() as f64).log2()))
}

/// `I(A:B) = S(A) + S(B) - S(AB)` in bits.
pub fn mutual_information(psi: &StateVector, part_a: &[Site], part_b: &[Site]) -> Result<f64> {
    if part_a.iter().any(|s| part_b.contains(s)) {
        return Err(Error::invalid("subsystems overlap"));
    }
    let joint: Vec<Site> = part_a.iter().chain(part_b).copied().collect();
    let sa = von_neumann_entropy(&partial_trace(psi, part_a)?)?;
    let sb = von_neumann_entropy(&partial_trace(psi, part_b)?)?;
    let sab = von_neumann_entropy(&partial_trace(psi, &joint)?)?;
    Ok(sa + sb - sab)
}

/// Scalar summary of one reduced pair state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairMetrics {
    pub concurrence: f64,
    pub bell_fidelity: Option<f64>,
    pub entropy_bits: f64,
}

pub fn pair_metrics(rho: &DensityMatrix, target: Option<BellState>) -> Result<PairMetrics> {
    Ok(PairMetrics {
        concurrence: concurrence(rho)?,
        bell_fidelity: target.map(|b| bell_fidelity(rho, b)).transpose()?,
        entropy_bits: von_neumann_entropy(rho)?,
    })
}
