use alloc::vec::Vec;

use num_traits::Float;

use crate::{Error, Result};

/// Truncated product basis `|n⟩ ⊗ |j, m⟩` with `0 ≤ n ≤ n_max`.
///
/// States are ordered lexicographically in `(n, m)`: the flat index of
/// `|n, m⟩` is `n (2j + 1) + (m + j)`. The spin label is stored as
/// `k = m + j ∈ [0, 2j]` to keep it integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisSpec {
    pub two_j: u32,
    pub n_max: usize,
}

impl BasisSpec {
    pub fn new(j: f64, n_max: usize) -> Result<Self> {
        let two_j = 2.0 * j;
        if !(j >= 0.5) || (two_j - two_j.round()).abs() > 1e-12 || two_j > u32::MAX as f64 {
            return Err(Error::InvalidSpin(j));
        }
        Ok(Self {
            two_j: two_j.round() as u32,
            n_max,
        })
    }

    pub fn j(&self) -> f64 {
        f64::from(self.two_j) / 2.0
    }

    /// Number of spin states `2j + 1`.
    pub fn spin_dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// `(n_max + 1)(2j + 1)`.
    pub fn dimension(&self) -> usize {
        (self.n_max + 1) * self.spin_dim()
    }

    /// Flat index of `|n, m = k − j⟩`.
    pub fn index(&self, n: usize, k: usize) -> usize {
        debug_assert!(n <= self.n_max && k < self.spin_dim());
        n * self.spin_dim() + k
    }

    /// Inverse of [`BasisSpec::index`]: `(n, k)`.
    pub fn decode(&self, idx: usize) -> (usize, usize) {
        (idx / self.spin_dim(), idx % self.spin_dim())
    }

    /// `m = k − j` for a flat index.
    pub fn m_of(&self, idx: usize) -> f64 {
        (idx % self.spin_dim()) as f64 - self.j()
    }

    pub fn photon_number(&self, idx: usize) -> usize {
        idx / self.spin_dim()
    }

    /// Eigenvalue `(−1)^(n + m + j)` of the parity operator on a basis state.
    pub fn parity_of(&self, idx: usize) -> i8 {
        let (n, k) = self.decode(idx);
        if (n + k) % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Diagonal of the parity operator `exp(iπ(a†a + J_z + j))` in basis order.
pub fn parity_operator(b: &BasisSpec) -> Vec<i8> {
    (0..b.dimension()).map(|i| b.parity_of(i)).collect()
}
