use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_traits::{Float, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hamiltonian::QuantumSystem;
use super::sparse::CsrMatrix;
use crate::{Error, Result};

/// Parity block the eigensolver works in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sector {
    Full,
    Even,
    Odd,
}

impl Sector {
    pub fn as_str(self) -> &'static str {
        match self {
            Sector::Full => "full",
            Sector::Even => "even",
            Sector::Odd => "odd",
        }
    }

    fn sign(self) -> Option<i8> {
        match self {
            Sector::Full => None,
            Sector::Even => Some(1),
            Sector::Odd => Some(-1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Residual target `‖Hv − E₀v‖ < tol · ‖H‖`.
    pub tol: f64,
    /// Sector dimensions up to this size use a dense Hermitian eigensolver.
    pub dense_limit: usize,
    /// Krylov subspace size per Lanczos cycle.
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Largest sector dimension accepted at all.
    pub max_dimension: usize,
    pub seed: u64,
    pub sector: Sector,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            dense_limit: 128,
            krylov_dim: 80,
            max_restarts: 500,
            max_dimension: 4_000_000,
            seed: 0x5eed_d1c6e,
            sector: Sector::Full,
        }
    }
}

impl SolverOptions {
    pub fn in_sector(self, sector: Sector) -> Self {
        Self { sector, ..self }
    }
}

/// Lowest eigenpair of a truncated Hamiltonian and the gap to the next level.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub n_max: usize,
    pub ground_energy: f64,
    /// Amplitudes over the full basis (zero outside the solved sector);
    /// the largest-magnitude amplitude is real and positive.
    pub ground_vector: Vec<Complex64>,
    /// Second-lowest eigenvalue within the sector.
    pub first_excited: f64,
    /// `E₁ − E₀ ≥ 0` within the sector.
    pub gap: f64,
    /// Sign of `⟨Π⟩` in the ground state.
    pub parity_of_ground: i8,
    pub converged: bool,
    /// `‖Hv − E₀v‖` achieved.
    pub residual: f64,
    /// Upper bound on `‖H‖` used to scale the residual target.
    pub norm_estimate: f64,
    pub sector: Sector,
}

/// Ground state and gap of `sys` restricted to `opts.sector`.
pub fn ground_state(sys: &QuantumSystem, opts: &SolverOptions) -> Result<SpectrumResult> {
    let indices: Vec<usize> = match opts.sector.sign() {
        None => (0..sys.dimension()).collect(),
        Some(s) => sys.sector_indices(s),
    };
    let block = match opts.sector {
        Sector::Full => sys.hamiltonian.clone(),
        _ => sys.hamiltonian.submatrix(&indices),
    };
    let pair = lowest_pair(&block, opts)?;

    let mut ground_vector = vec![Complex64::zero(); sys.dimension()];
    for (&i, &v) in indices.iter().zip(&pair.vector) {
        ground_vector[i] = v;
    }
    let parity_mean: f64 = ground_vector
        .iter()
        .zip(&sys.parity)
        .map(|(v, &s)| f64::from(s) * v.norm_sqr())
        .sum();
    Ok(SpectrumResult {
        n_max: sys.basis.n_max,
        ground_energy: pair.e0,
        ground_vector,
        first_excited: pair.e1,
        gap: (pair.e1 - pair.e0).max(0.0),
        parity_of_ground: if parity_mean >= 0.0 { 1 } else { -1 },
        converged: true,
        residual: pair.residual,
        norm_estimate: pair.norm,
        sector: opts.sector,
    })
}

/// Lowest two eigenvalues and the ground vector of a Hermitian block.
#[derive(Debug, Clone)]
pub(crate) struct LowestPair {
    pub e0: f64,
    pub e1: f64,
    pub vector: Vec<Complex64>,
    pub residual: f64,
    pub norm: f64,
}

pub(crate) fn lowest_pair(h: &CsrMatrix, opts: &SolverOptions) -> Result<LowestPair> {
    let dim = h.dim();
    if dim == 0 {
        return Err(Error::InvalidArgument("empty parity sector"));
    }
    if dim > opts.max_dimension {
        return Err(Error::DimensionBudgetExceeded {
            dimension: dim,
            budget: opts.max_dimension,
        });
    }
    let norm = h.norm_inf().max(f64::MIN_POSITIVE);
    let mut pair = if dim <= opts.dense_limit.max(2) {
        dense_pair(h)
    } else {
        let (e0, v0, _) = lanczos_lowest(h, &[], norm, opts)?;
        let (e1, _, _) = lanczos_lowest(h, core::slice::from_ref(&v0), norm, opts)?;
        LowestPair {
            e0,
            e1,
            vector: v0,
            residual: 0.0,
            norm,
        }
    };
    fix_phase(&mut pair.vector);
    pair.residual = residual(h, &pair.vector, pair.e0);
    pair.norm = norm;
    if !(pair.residual <= opts.tol * norm) {
        return Err(Error::SolverNoConvergence {
            residual: pair.residual,
            iterations: 0,
        });
    }
    Ok(pair)
}

fn dense_pair(h: &CsrMatrix) -> LowestPair {
    let dim = h.dim();
    let eig = SymmetricEigen::new(h.to_dense());
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let e0 = eig.eigenvalues[order[0]];
    let e1 = if dim > 1 {
        eig.eigenvalues[order[1]]
    } else {
        f64::INFINITY
    };
    let vector = eig.eigenvectors.column(order[0]).iter().copied().collect();
    LowestPair {
        e0,
        e1,
        vector,
        residual: 0.0,
        norm: 0.0,
    }
}

/// Rotates the global phase so the largest-magnitude amplitude is real positive.
pub(crate) fn fix_phase(v: &mut [Complex64]) {
    let Some(big) = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
    else {
        return;
    };
    let r = big.norm();
    if r > 0.0 {
        let phase = big.conj() / r;
        v.iter_mut().for_each(|x| *x *= phase);
    }
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn residual(h: &CsrMatrix, v: &[Complex64], e: f64) -> f64 {
    let hv = h.mul_vec(v);
    hv.iter()
        .zip(v)
        .map(|(a, b)| (a - b * e).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn orthogonalize(w: &mut [Complex64], against: &[Vec<Complex64>]) {
    // two passes of classical Gram–Schmidt
    for _ in 0..2 {
        for u in against {
            let c = dot(u, w);
            w.iter_mut().zip(u).for_each(|(x, y)| *x -= y * c);
        }
    }
}

fn normalize(w: &mut [Complex64]) -> f64 {
    let n = norm(w);
    if n > 0.0 {
        w.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Explicitly restarted Lanczos with full reorthogonalisation for the
/// lowest eigenpair of `h` on the complement of `deflate`.
fn lanczos_lowest(
    h: &CsrMatrix,
    deflate: &[Vec<Complex64>],
    norm_h: f64,
    opts: &SolverOptions,
) -> Result<(f64, Vec<Complex64>, usize)> {
    let dim = h.dim();
    let m = opts
        .krylov_dim
        .clamp(4, dim.saturating_sub(deflate.len()).max(1));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ deflate.len() as u64);
    let mut start: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let mut iterations = 0;
    let mut last_residual = f64::INFINITY;

    for _ in 0..=opts.max_restarts {
        orthogonalize(&mut start, deflate);
        if normalize(&mut start) == 0.0 {
            return Err(Error::InvalidArgument("Lanczos start vector vanished"));
        }
        let mut basis: Vec<Vec<Complex64>> = vec![start.clone()];
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        let mut w = vec![Complex64::zero(); dim];
        loop {
            let k = basis.len() - 1;
            h.mul_vec_into(&basis[k], &mut w);
            iterations += 1;
            orthogonalize(&mut w, deflate);
            let a = dot(&basis[k], &w).re;
            alpha.push(a);
            orthogonalize(&mut w, &basis);
            let b = norm(&w);
            if basis.len() == m || b <= 1e-13 * norm_h {
                break;
            }
            beta.push(b);
            w.iter_mut().for_each(|x| *x /= b);
            basis.push(w.clone());
        }

        let size = alpha.len();
        let mut t = DMatrix::<f64>::zeros(size, size);
        for i in 0..size {
            t[(i, i)] = alpha[i];
            if i + 1 < size {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let lowest = (0..size)
            .min_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]))
            .expect("non-empty tridiagonal");
        let s = eig.eigenvectors.column(lowest);
        let mut x = vec![Complex64::zero(); dim];
        for (coef, v) in s.iter().zip(&basis) {
            x.iter_mut().zip(v).for_each(|(xi, vi)| *xi += vi * *coef);
        }
        orthogonalize(&mut x, deflate);
        normalize(&mut x);

        let mut hx = h.mul_vec(&x);
        orthogonalize(&mut hx, deflate);
        let rayleigh = dot(&x, &hx).re;
        let r = hx
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b * rayleigh).norm_sqr())
            .sum::<f64>()
            .sqrt();
        last_residual = r;
        // the deflated solve only needs the eigenvalue, which is accurate to O(r²)
        let target = if deflate.is_empty() {
            0.5 * opts.tol
        } else {
            opts.tol.sqrt() * 1e-2
        };
        if r <= target * norm_h || size == dim - deflate.len() {
            return Ok((rayleigh, x, iterations));
        }
        start = x;
    }
    Err(Error::SolverNoConvergence {
        residual: last_residual,
        iterations,
    })
}
