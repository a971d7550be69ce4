//! One-shot Hermitian eigendecomposition and exact evolution
//! `ψ(t) = V e^{-iΛt} V† ψ0` on arbitrary time points.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self, ComputeEigenvectors};
use faer::linalg::matmul::matmul;
use faer::diag::Diag;
use faer::{Accum, Mat, MatRef, Par};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ladder::{HermitianOperator, StateVector};
use crate::C64;

/// Time points per block when evolving a grid; each block is one GEMM.
const BLOCK: usize = 64;

#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: Mat<C64>,
}

impl SpectralDecomposition {
    /// Ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Columns are the eigenvectors, in eigenvalue order.
    pub fn eigenvectors(&self) -> &Mat<C64> {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `max |V Λ V† - H|`.
    pub fn reconstruction_residual(&self, h: &HermitianOperator) -> f64 {
        let v = &self.eigenvectors;
        let n = self.dim();
        let vl = Mat::<C64>::from_fn(n, n, |i, j| v[(i, j)] * self.eigenvalues[j]);
        let r = &vl * v.adjoint();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                m = m.max((r[(i, j)] - h.get(i, j)).norm());
            }
        }
        m
    }

    /// `max |V† V - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        let v = &self.eigenvectors;
        let g = v.adjoint() * v;
        let mut m = 0.0f64;
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                let id = if i == j { 1.0 } else { 0.0 };
                m = m.max((g[(i, j)] - C64::new(id, 0.0)).norm());
            }
        }
        m
    }
}

/// Full eigendecomposition of a Hermitian operator.
///
/// Runs single-threaded so results are bitwise identical regardless of the
/// caller's thread pool.
pub fn diagonalize(h: &HermitianOperator) -> Result<SpectralDecomposition> {
    let (eigenvalues, eigenvectors) = eigh(h.matrix().as_ref())?;
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Ascending eigenvalues and eigenvectors of a Hermitian matrix (lower triangle read).
pub(crate) fn eigh(a: MatRef<'_, C64>) -> Result<(Vec<f64>, Mat<C64>)> {
    let n = a.nrows();
    if (0..n).any(|j| (0..n).any(|i| !a[(i, j)].re.is_finite() || !a[(i, j)].im.is_finite())) {
        return Err(Error::NumericFailure("operator has non-finite entries".into()));
    }
    let par = Par::Seq;
    let mut s = Diag::<C64>::zeros(n);
    let mut u = Mat::<C64>::zeros(n, n);
    let mut buf = MemBuffer::new(evd::self_adjoint_evd_scratch::<C64>(
        n,
        ComputeEigenvectors::Yes,
        par,
        Default::default(),
    ));
    evd::self_adjoint_evd(
        a,
        s.as_mut(),
        Some(u.as_mut()),
        par,
        MemStack::new(&mut buf),
        Default::default(),
    )
    .map_err(|e| Error::NumericFailure(format!("eigensolver did not converge: {e:?}")))?;

    let eigenvalues: Vec<f64> = s.column_vector().iter().map(|x| x.re).collect();
    if eigenvalues.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::NumericFailure("eigenvalues returned out of order".into()));
    }
    Ok((eigenvalues, u))
}

/// Uniform grid `t_start, ..., t_end` with `n_points` samples (both ends included).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub n_points: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_points: usize) -> Result<Self> {
        let g = TimeGrid {
            t_start,
            t_end,
            n_points,
        };
        g.validate()?;
        Ok(g)
    }

    /// Grid on `[0, t_end]` with at least `per_unit` points per unit time.
    pub fn with_density(t_end: f64, per_unit: f64) -> Result<Self> {
        let n = (t_end * per_unit).ceil() as usize + 1;
        Self::new(0.0, t_end, n.max(2))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_start.is_finite() && self.t_end.is_finite()) || self.t_start < 0.0 {
            return Err(Error::invalid("grid bounds must be finite with t_start ≥ 0"));
        }
        if self.t_end <= self.t_start {
            return Err(Error::invalid("grid needs t_end > t_start"));
        }
        if self.n_points < 2 {
            return Err(Error::invalid("grid needs at least 2 points"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    pub fn step(&self) -> f64 {
        (self.t_end - self.t_start) / (self.n_points - 1) as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        if k + 1 == self.n_points {
            self.t_end
        } else {
            self.t_start + k as f64 * self.step()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.point(k)).collect()
    }
}

/// Initial state expressed in the eigenbasis, ready to be evolved to any time.
#[derive(Clone, Debug)]
pub struct Evolution<'a> {
    decomp: &'a SpectralDecomposition,
    coeffs: Vec<C64>,
}

impl<'a> Evolution<'a> {
    pub fn new(decomp: &'a SpectralDecomposition, psi0: &StateVector) -> Result<Self> {
        let n = decomp.dim();
        if psi0.dim() != n {
            return Err(Error::invalid(format!(
                "dimension mismatch: decomposition {n} vs state {}",
                psi0.dim()
            )));
        }
        let v = &decomp.eigenvectors;
        let amps = psi0.amplitudes();
        let coeffs = (0..n)
            .map(|k| (0..n).map(|i| v[(i, k)].conj() * amps[i]).sum())
            .collect();
        Ok(Evolution { decomp, coeffs })
    }

    pub fn state_at(&self, t: f64) -> StateVector {
        self.block(&[t]).pop().expect("one time in, one state out")
    }

    /// States at each of `times`, computed as one matrix product.
    fn block(&self, times: &[f64]) -> Vec<StateVector> {
        let n = self.decomp.dim();
        let lambda = &self.decomp.eigenvalues;
        let phased = Mat::<C64>::from_fn(n, times.len(), |k, j| {
            self.coeffs[k] * C64::from_polar(1.0, -lambda[k] * times[j])
        });
        let mut out = Mat::<C64>::zeros(n, times.len());
        matmul(
            out.as_mut(),
            Accum::Replace,
            self.decomp.eigenvectors.as_ref(),
            phased.as_ref(),
            C64::new(1.0, 0.0),
            Par::Seq,
        );
        (0..times.len())
            .map(|j| {
                let amps = (0..n).map(|i| out[(i, j)]).collect();
                StateVector::from_amplitudes_unchecked(amps).expect("dimension is a power of two")
            })
            .collect()
    }

    /// Applies `f` to the state at every grid point, in parallel over blocks of
    /// time points; output order follows the grid.
    pub fn map_grid<T, F>(&self, grid: &TimeGrid, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(f64, &StateVector) -> T + Sync,
    {
        let times = grid.points();
        times
            .par_chunks(BLOCK)
            .map(|chunk| {
                self.block(chunk)
                    .iter()
                    .zip(chunk)
                    .map(|(psi, &t)| f(t, psi))
                    .collect::<Vec<T>>()
            })
            .collect::<Vec<Vec<T>>>()
            .into_iter()
            .flatten()
            .collect()
    }
}

pub fn evolve_state(decomp: &SpectralDecomposition, psi0: &StateVector, t: f64) -> Result<StateVector> {
    Ok(Evolution::new(decomp, psi0)?.state_at(t))
}

/// Every state on the grid. Memory grows as `len × dim`; use
/// [`Evolution::map_grid`] for long grids.
pub fn evolve_series(
    decomp: &SpectralDecomposition,
    psi0: &StateVector,
    grid: &TimeGrid,
) -> Result<Vec<StateVector>> {
    grid.validate()?;
    let ev = Evolution::new(decomp, psi0)?;
    Ok(ev.map_grid(grid, |_, psi| psi.clone()))
}
