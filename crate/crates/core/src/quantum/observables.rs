use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{Float, Zero};

use super::basis::BasisSpec;
use super::eigen::{dot, SpectrumResult};
use crate::{Fluctuations, OrderParameters};

/// Which ladder operator to apply.
#[derive(Clone, Copy)]
enum Ladder {
    Annihilate,
    Create,
    Raise,
    Lower,
}

fn apply(b: &BasisSpec, op: Ladder, psi: &[Complex64]) -> Vec<Complex64> {
    let j = b.j();
    let mut out = vec![Complex64::zero(); psi.len()];
    for (idx, &amp) in psi.iter().enumerate() {
        if amp.is_zero() {
            continue;
        }
        let (n, k) = b.decode(idx);
        let m = k as f64 - j;
        let target = match op {
            Ladder::Annihilate => n
                .checked_sub(1)
                .map(|n2| (b.index(n2, k), (n as f64).sqrt())),
            // amplitude pushed above the cutoff is dropped
            Ladder::Create => (n < b.n_max).then(|| (b.index(n + 1, k), (n as f64 + 1.0).sqrt())),
            Ladder::Raise => (k < b.two_j as usize)
                .then(|| (b.index(n, k + 1), (j * (j + 1.0) - m * (m + 1.0)).sqrt())),
            Ladder::Lower => k
                .checked_sub(1)
                .map(|k2| (b.index(n, k2), (j * (j + 1.0) - m * (m - 1.0)).sqrt())),
        };
        if let Some((t, c)) = target {
            out[t] += amp * c;
        }
    }
    out
}

fn combine(a: &[Complex64], ca: Complex64, b: &[Complex64], cb: Complex64) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x * ca + y * cb).collect()
}

/// `(⟨ψ|A|ψ⟩, ⟨ψ|A²|ψ⟩ − ⟨ψ|A|ψ⟩²)` for Hermitian `A` given `A|ψ⟩`.
fn moments(psi: &[Complex64], a_psi: &[Complex64]) -> (f64, f64) {
    let mean = dot(psi, a_psi).re;
    let second = dot(a_psi, a_psi).re;
    (mean, (second - mean * mean).max(0.0))
}

/// Field and spin expectation values (with variances) in the ground state.
///
/// `q = (a + a†)/√2`, `p = i(a† − a)/√2`, `J_x = (J₊ + J₋)/2`,
/// `J_y = (J₊ − J₋)/(2i)`.
pub fn quantum_observables(res: &SpectrumResult, b: &BasisSpec) -> OrderParameters {
    let psi = &res.ground_vector;
    assert_eq!(
        psi.len(),
        b.dimension(),
        "ground vector does not match basis"
    );
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let a = apply(b, Ladder::Annihilate, psi);
    let ad = apply(b, Ladder::Create, psi);
    let jp = apply(b, Ladder::Raise, psi);
    let jm = apply(b, Ladder::Lower, psi);

    let q_psi = combine(&a, Complex64::new(s, 0.0), &ad, Complex64::new(s, 0.0));
    let p_psi = combine(&ad, Complex64::new(0.0, s), &a, Complex64::new(0.0, -s));
    let jx_psi = combine(&jp, Complex64::new(0.5, 0.0), &jm, Complex64::new(0.5, 0.0));
    let jy_psi = combine(
        &jp,
        Complex64::new(0.0, -0.5),
        &jm,
        Complex64::new(0.0, 0.5),
    );
    let n_psi: Vec<Complex64> = psi
        .iter()
        .enumerate()
        .map(|(i, v)| v * b.photon_number(i) as f64)
        .collect();
    let jz_psi: Vec<Complex64> = psi.iter().enumerate().map(|(i, v)| v * b.m_of(i)).collect();

    let (q_mean, var_q) = moments(psi, &q_psi);
    let (p_mean, var_p) = moments(psi, &p_psi);
    let (n_mean, var_n) = moments(psi, &n_psi);
    let (jx_mean, var_jx) = moments(psi, &jx_psi);
    let (jy_mean, var_jy) = moments(psi, &jy_psi);
    let (jz_mean, var_jz) = moments(psi, &jz_psi);
    OrderParameters {
        q_mean,
        p_mean,
        n_mean,
        jx_mean,
        jy_mean,
        jz_mean,
        fluctuations: Fluctuations {
            var_q,
            var_p,
            var_n,
            var_jx,
            var_jy,
            var_jz,
        },
    }
}

/// `⟨a†a⟩` for an amplitude vector over `b` (or over a subset of its
/// states, given their flat indices).
pub(crate) fn photon_mean(b: &BasisSpec, psi: &[Complex64], indices: &[usize]) -> f64 {
    psi.iter()
        .zip(indices)
        .map(|(v, &i)| v.norm_sqr() * b.photon_number(i) as f64)
        .sum()
}
