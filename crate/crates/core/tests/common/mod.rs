//! Helpers shared by the integration suites: random states and an independent
//! concurrence route through the non-Hermitian eigenvalues of `ρ ρ̃`.

#![allow(dead_code)]

use faer::Mat;
use rand::Rng;
use spinladder::{DensityMatrix, StateVector, C64};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn kron(a: &Mat<C64>, b: &Mat<C64>) -> Mat<C64> {
    let (ra, ca) = (a.nrows(), a.ncols());
    let (rb, cb) = (b.nrows(), b.ncols());
    Mat::from_fn(ra * rb, ca * cb, |i, j| a[(i / rb, j / cb)] * b[(i % rb, j % cb)])
}

pub fn adjoint(a: &Mat<C64>) -> Mat<C64> {
    Mat::from_fn(a.ncols(), a.nrows(), |i, j| a[(j, i)].conj())
}

/// `G G† / tr` from 32 reals (real and imaginary parts of a 4×4 `G`).
pub fn density_from_reals(x: &[f64]) -> DensityMatrix {
    let g = Mat::<C64>::from_fn(4, 4, |i, j| c(x[2 * (4 * i + j)], x[2 * (4 * i + j) + 1]));
    let mut m = &g * adjoint(&g);
    let tr: f64 = (0..4).map(|i| m[(i, i)].re).sum();
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] /= tr;
        }
    }
    DensityMatrix::new(hermitize(m)).expect("G G† is a density matrix")
}

pub fn random_density<R: Rng>(rng: &mut R) -> DensityMatrix {
    let x: Vec<f64> = (0..32).map(|_| rng.random_range(-1.0..1.0)).collect();
    density_from_reals(&x)
}

/// `e^{iφ} [[e^{iα} cos θ, e^{iβ} sin θ], [-e^{-iβ} sin θ, e^{-iα} cos θ]]`.
pub fn unitary_2x2(phi: f64, alpha: f64, beta: f64, theta: f64) -> Mat<C64> {
    let g = C64::from_polar(1.0, phi);
    let (s, co) = theta.sin_cos();
    let entries = [
        g * C64::from_polar(co, alpha),
        g * C64::from_polar(s, beta),
        -g * C64::from_polar(s, -beta),
        g * C64::from_polar(co, -alpha),
    ];
    Mat::from_fn(2, 2, |i, j| entries[2 * i + j])
}

pub fn random_unitary_2x2<R: Rng>(rng: &mut R) -> Mat<C64> {
    let tau = std::f64::consts::TAU;
    unitary_2x2(
        rng.random_range(0.0..tau),
        rng.random_range(0.0..tau),
        rng.random_range(0.0..tau),
        rng.random_range(0.0..tau),
    )
}

/// `(U⊗V) ρ (U⊗V)†`.
pub fn locally_rotated(rho: &DensityMatrix, u: &Mat<C64>, v: &Mat<C64>) -> DensityMatrix {
    let w = kron(u, v);
    let m = &w * rho.matrix() * adjoint(&w);
    DensityMatrix::new(hermitize(m)).expect("unitary conjugation keeps a density matrix")
}

fn hermitize(m: Mat<C64>) -> Mat<C64> {
    let n = m.nrows();
    Mat::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

/// Concurrence from the square roots of the eigenvalues of `ρ (σy⊗σy) ρ* (σy⊗σy)`,
/// computed with a general (non-Hermitian) eigensolver.
pub fn wootters_by_eigenvalues(rho: &DensityMatrix) -> f64 {
    let yy = Mat::<C64>::from_fn(4, 4, |i, j| {
        // σy⊗σy = antidiagonal (-1, 1, 1, -1) in the 00,01,10,11 basis.
        if i + j == 3 {
            c(if i == 0 || i == 3 { -1.0 } else { 1.0 }, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    let conj = Mat::<C64>::from_fn(4, 4, |i, j| rho.matrix()[(i, j)].conj());
    let r = rho.matrix() * &yy * &conj * &yy;
    let mut roots: Vec<f64> = r
        .eigenvalues()
        .expect("4x4 eigenvalues")
        .iter()
        .map(|z| z.re.max(0.0).sqrt())
        .collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    (roots[0] - roots[1] - roots[2] - roots[3]).max(0.0)
}

/// `p |Ψ-⟩⟨Ψ-| + (1-p) I/4`, written out entrywise.
pub fn werner(p: f64) -> DensityMatrix {
    let q = (1.0 - p) / 4.0;
    let mut m = Mat::<C64>::zeros(4, 4);
    for i in 0..4 {
        m[(i, i)] = c(q, 0.0);
    }
    m[(1, 1)] += c(p / 2.0, 0.0);
    m[(2, 2)] += c(p / 2.0, 0.0);
    m[(1, 2)] = c(-p / 2.0, 0.0);
    m[(2, 1)] = c(-p / 2.0, 0.0);
    DensityMatrix::new(m).expect("Werner state")
}

pub fn random_pure_state<R: Rng>(rng: &mut R, n_sites: usize) -> StateVector {
    let amps = (0..1usize << n_sites)
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    StateVector::normalized(amps).expect("nonzero random vector")
}
