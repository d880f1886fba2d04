use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use super::basis::{parity_operator, BasisSpec};
use super::sparse::CsrMatrix;
use crate::{Error, ModelParams, Result};

/// Truncated Hamiltonian together with its basis and parity diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumSystem {
    pub params: ModelParams,
    pub basis: BasisSpec,
    pub hamiltonian: CsrMatrix,
    /// `(−1)^(n + m + j)` in basis order.
    pub parity: Vec<i8>,
}

/// `√(j(j+1) − m(m+1))`, the `J₊` matrix element out of `|j, m⟩`.
fn raise(j: f64, m: f64) -> f64 {
    (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

fn lower(j: f64, m: f64) -> f64 {
    (j * (j + 1.0) - m * (m - 1.0)).max(0.0).sqrt()
}

/// Builds the model Hamiltonian on the truncated basis.
///
/// Parameters outside the pump validity region are refused: the field
/// sector has no ground state there and any result would be a cutoff
/// artifact. The quadratic pump needs `n_max ≥ 2` to act at all.
pub fn build_hamiltonian(p: &ModelParams, b: &BasisSpec) -> Result<QuantumSystem> {
    p.validate()?;
    if (p.j - b.j()).abs() > 0.0 {
        return Err(Error::InvalidArgument("basis spin differs from model j"));
    }
    let pumped = p.k1 != 0.0 || p.k2 != 0.0;
    if pumped && b.n_max < 2 {
        return Err(Error::CutoffTooSmall {
            n_max: b.n_max,
            required: 2,
        });
    }

    let j = b.j();
    let g = p.gamma / p.atom_count().sqrt();
    let creation_sq = Complex64::new(0.5 * p.k1, 0.5 * p.k2);
    let spin_dim = b.spin_dim();
    let mut triplets = Vec::with_capacity(b.dimension() * 7);
    for n in 0..=b.n_max {
        let nf = n as f64;
        for k in 0..spin_dim {
            let col = b.index(n, k);
            let m = k as f64 - j;
            triplets.push((
                col,
                col,
                Complex64::new(p.omega_f * nf + p.omega_0 * m, 0.0),
            ));
            if g != 0.0 {
                // (a + a†)(J₊ + J₋) |n, m⟩
                let field: [(Option<usize>, f64); 2] = [
                    (n.checked_sub(1), nf.sqrt()),
                    ((n < b.n_max).then_some(n + 1), (nf + 1.0).sqrt()),
                ];
                let spin: [(Option<usize>, f64); 2] = [
                    (k.checked_sub(1), lower(j, m)),
                    ((k + 1 < spin_dim).then_some(k + 1), raise(j, m)),
                ];
                for (n2, fa) in field {
                    for (k2, sa) in spin {
                        if let (Some(n2), Some(k2)) = (n2, k2) {
                            triplets.push((b.index(n2, k2), col, Complex64::new(g * fa * sa, 0.0)));
                        }
                    }
                }
            }
            if pumped && n + 2 <= b.n_max {
                // (K₁ + iK₂)/2 a†² and its adjoint
                let amp = ((nf + 1.0) * (nf + 2.0)).sqrt();
                let up = b.index(n + 2, k);
                triplets.push((up, col, creation_sq * amp));
                triplets.push((col, up, creation_sq.conj() * amp));
            }
        }
    }
    let hamiltonian = CsrMatrix::from_triplets(b.dimension(), triplets);
    Ok(QuantumSystem {
        params: *p,
        basis: *b,
        hamiltonian,
        parity: parity_operator(b),
    })
}

impl QuantumSystem {
    pub fn new(p: &ModelParams, n_max: usize) -> Result<Self> {
        build_hamiltonian(p, &BasisSpec::new(p.j, n_max)?)
    }

    pub fn dimension(&self) -> usize {
        self.basis.dimension()
    }

    /// `H(β) = e^{−iβ a†a} H e^{iβ a†a}`: entry `(r, c)` picks up
    /// `e^{−iβ(n_r − n_c)}`.
    pub fn rotated(&self, beta: f64) -> Self {
        let b = self.basis;
        let hamiltonian = self.hamiltonian.map_entries(|r, c, v| {
            let dn = b.photon_number(r) as f64 - b.photon_number(c) as f64;
            v * Complex64::from_polar(1.0, -beta * dn)
        });
        Self {
            hamiltonian,
            ..self.clone()
        }
    }

    /// Whether every stored element joins states of equal parity.
    pub fn conserves_parity(&self) -> bool {
        self.hamiltonian
            .iter()
            .all(|(r, c, _)| self.parity[r] == self.parity[c])
    }

    /// Flat indices of the states with parity `sign`.
    pub fn sector_indices(&self, sign: i8) -> Vec<usize> {
        (0..self.dimension())
            .filter(|&i| self.parity[i] == sign)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn uncoupled_is_diagonal() {
        let p = ModelParams::new(1.3, 0.7, 0.0, 0.0, 0.0, 0.5);
        let sys = QuantumSystem::new(&p, 1).unwrap();
        assert_eq!(sys.hamiltonian.nnz(), 4);
        let b = sys.basis;
        for n in 0..=1 {
            for k in 0..2 {
                let i = b.index(n, k);
                let expected = 1.3 * n as f64 + 0.7 * (k as f64 - 0.5);
                assert_eq!(sys.hamiltonian.get(i, i), Complex64::new(expected, 0.0));
            }
        }
    }

    #[test]
    fn unpumped_is_real_and_pump_elements_match() {
        let p = ModelParams::new(1.0, 1.0, 0.4, 0.3, 0.0, 1.0);
        assert!(QuantumSystem::new(&p, 6).unwrap().hamiltonian.is_real());
        let sys = QuantumSystem::new(&p.with_pump(0.3, -0.2), 6).unwrap();
        let b = sys.basis;
        let v = sys.hamiltonian.get(b.index(3, 1), b.index(1, 1));
        assert_relative_eq!(v.re, 0.15 * 6f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(v.im, -0.1 * 6f64.sqrt(), epsilon = 1e-15);
        assert!(sys.hamiltonian.hermitian_defect() < 1e-13);
        assert!(sys.conserves_parity());
    }

    #[test]
    fn pump_needs_two_photons() {
        let p = ModelParams::dicke(0.2, 1.0).with_pump(0.1, 0.0);
        assert_eq!(
            QuantumSystem::new(&p, 1).unwrap_err(),
            Error::CutoffTooSmall {
                n_max: 1,
                required: 2
            }
        );
        assert!(QuantumSystem::new(&p.with_pump(0.0, 0.0), 1).is_ok());
    }

    #[test]
    fn refuses_outside_region() {
        let p = ModelParams::dicke(0.2, 1.0).with_pump(0.9, 0.9);
        assert!(matches!(
            QuantumSystem::new(&p, 8),
            Err(Error::OutsideValidityRegion { .. })
        ));
    }

    #[test]
    fn rotation_is_identity_at_full_turn() {
        let p = ModelParams::dicke(0.6, 1.5).with_pump(0.2, 0.3);
        let sys = QuantumSystem::new(&p, 8).unwrap();
        let back = sys.rotated(core::f64::consts::TAU);
        for (r, c, v) in sys.hamiltonian.iter() {
            assert!((back.hamiltonian.get(r, c) - v).norm() < 1e-14);
        }
        assert!(sys.rotated(0.7).hamiltonian.hermitian_defect() < 1e-13);
    }
}
