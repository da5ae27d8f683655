//! Weight enumerators of explicit codes.
//!
//! For the amplitude-damping channel at damping γ:
//!
//! ```text
//! A_i = Σ_{x : wt(x) = i} |tr(A_x P)|² / (tr P)²
//! B_i = Σ_{x : wt(x) = i} tr(A_x P A_x† P) / tr P
//! ```
//!
//! The Shor–Laflamme versions sum the same expressions over Pauli strings of
//! weight `i` with `1/M²` and `1/M` normalization. The auxiliary vector
//! `φ_σ = tr(σP)` carries the full Pauli decomposition of the projector.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{inner, ValidatedCode};
use crate::error::Result;
use crate::kraus::{apply_kraus, GammaValue, KrausLabel};
use crate::pauli::{self, check_qubits, PauliMasks};

/// Qubit limit for the amplitude-damping enumerators.
pub const MAX_AD_QUBITS: usize = 10;
/// Qubit limit for sums over all `4ⁿ` Pauli strings.
pub const MAX_PAULI_SUM_QUBITS: usize = 8;
/// Qubit limit for materializing unordered-pair spaces.
pub const MAX_PAIR_QUBITS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnumeratorKind {
    A,
    B,
    #[serde(rename = "A_SL")]
    ASl,
    #[serde(rename = "B_SL")]
    BSl,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumeratorVector {
    pub kind: EnumeratorKind,
    /// Absent for the Shor–Laflamme kinds.
    pub gamma: Option<f64>,
    pub values: Vec<f64>,
}

impl EnumeratorVector {
    pub fn num_qubits(&self) -> usize {
        self.values.len() - 1
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// `(A, B)` for the amplitude-damping channel.
pub fn ad_enumerators(code: &ValidatedCode, gamma: &GammaValue) -> Result<(EnumeratorVector, EnumeratorVector)> {
    let n = code.num_qubits();
    check_qubits("amplitude-damping enumerators", n, MAX_AD_QUBITS)?;
    let m = code.dimension() as f64;
    let words = code.codewords();
    let dim = 1usize << n;

    // (weight, |tr(A_x P)|², tr(A_x P A_x† P)) per label, reduced in label order
    let terms: Vec<(usize, f64, f64)> = KrausLabel::all(n)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|x| {
            let mut image = vec![Complex64::new(0.0, 0.0); dim];
            let mut trace = Complex64::new(0.0, 0.0);
            let mut overlap_sq = 0.0;
            for psi_k in words {
                apply_kraus(x, gamma, psi_k, &mut image);
                trace += inner(psi_k, &image);
                overlap_sq += words.iter().map(|psi_l| inner(psi_l, &image).norm_sqr()).sum::<f64>();
            }
            (x.weight(), trace.norm_sqr(), overlap_sq)
        })
        .collect();

    let mut a = vec![0.0; n + 1];
    let mut b = vec![0.0; n + 1];
    for (w, tr_sq, overlap_sq) in terms {
        a[w] += tr_sq;
        b[w] += overlap_sq;
    }
    a.iter_mut().for_each(|v| *v /= m * m);
    b.iter_mut().for_each(|v| *v /= m);
    let g = Some(gamma.value());
    Ok((
        EnumeratorVector { kind: EnumeratorKind::A, gamma: g, values: a },
        EnumeratorVector { kind: EnumeratorKind::B, gamma: g, values: b },
    ))
}

/// Shor–Laflamme `(A^SL, B^SL)`.
pub fn sl_enumerators(code: &ValidatedCode) -> Result<(EnumeratorVector, EnumeratorVector)> {
    let n = code.num_qubits();
    check_qubits("Shor-Laflamme enumerators", n, MAX_PAULI_SUM_QUBITS)?;
    let m = code.dimension() as f64;
    let words = code.codewords();
    let dim = 1usize << n;

    let terms: Vec<(usize, f64, f64)> = (0..pauli::count(n))
        .into_par_iter()
        .map(|index| {
            let masks = PauliMasks::from_index(index, n);
            let mut image = vec![Complex64::new(0.0, 0.0); dim];
            let mut trace = Complex64::new(0.0, 0.0);
            let mut overlap_sq = 0.0;
            for psi_k in words {
                masks.apply(psi_k, &mut image);
                trace += inner(psi_k, &image);
                overlap_sq += words.iter().map(|psi_l| inner(psi_l, &image).norm_sqr()).sum::<f64>();
            }
            (pauli::weight_of_index(index), trace.norm_sqr(), overlap_sq)
        })
        .collect();

    let mut a = vec![0.0; n + 1];
    let mut b = vec![0.0; n + 1];
    for (w, tr_sq, overlap_sq) in terms {
        a[w] += tr_sq;
        b[w] += overlap_sq;
    }
    a.iter_mut().for_each(|v| *v /= m * m);
    b.iter_mut().for_each(|v| *v /= m);
    Ok((
        EnumeratorVector { kind: EnumeratorKind::ASl, gamma: None, values: a },
        EnumeratorVector { kind: EnumeratorKind::BSl, gamma: None, values: b },
    ))
}

/// `B_i − A_i ≤ c·γ^{t+1}` for `i = 0..=t`.
pub fn is_tc_ad_code(a: &EnumeratorVector, b: &EnumeratorVector, t: usize, c: f64, gamma: f64) -> bool {
    let bound = c * gamma.powi(t as i32 + 1);
    (0..=t.min(a.num_qubits())).all(|i| b.values[i] - a.values[i] <= bound)
}

/// Number of unordered pairs `{σ, τ}` over `4ⁿ` Pauli strings.
pub fn pair_count(n: usize) -> usize {
    let p = pauli::count(n);
    p * (p + 1) / 2
}

/// Position of the unordered pair `{σ, τ}`, row-major over `σ ≤ τ`.
#[inline]
pub fn pair_index(n: usize, sigma: usize, tau: usize) -> usize {
    let (s, t) = if sigma <= tau { (sigma, tau) } else { (tau, sigma) };
    pair_row_offset(n, s) + (t - s)
}

/// Index of the first pair `{σ, σ}` of row `σ`.
#[inline]
pub fn pair_row_offset(n: usize, sigma: usize) -> usize {
    let p = pauli::count(n);
    sigma * p - sigma * sigma.saturating_sub(1) / 2
}

/// Inverse of [`pair_index`]: returns `(σ, τ)` with `σ ≤ τ`.
pub fn pair_from_index(n: usize, index: usize) -> (usize, usize) {
    let p = pauli::count(n);
    // largest σ with offset(σ) ≤ index; rows shrink by one each step
    let (mut lo, mut hi) = (0usize, p - 1);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if pair_row_offset(n, mid) <= index {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    (lo, lo + index - pair_row_offset(n, lo))
}

/// `φ_σ = tr(σP)` in canonical Pauli order. The auxiliary enumerator is
/// `φ ⊗ φ`, stored implicitly; pair values are `φ_σ φ_τ` over unordered pairs,
/// which makes swap invariance hold by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuxVector {
    pub n: usize,
    pub phi: Vec<f64>,
}

impl AuxVector {
    pub fn identity_value(&self) -> f64 {
        self.phi[0]
    }

    pub fn pair(&self, sigma: usize, tau: usize) -> f64 {
        self.phi[sigma] * self.phi[tau]
    }

    /// `Σ_σ φ_σ²`, equal to `2ⁿ·M` for a rank-M projector.
    pub fn purity(&self) -> f64 {
        self.phi.iter().map(|v| v * v).sum()
    }

    /// Pair values `y_{σ,τ}` for `σ ≤ τ` in [`pair_index`] order.
    pub fn reduced(&self) -> Result<Vec<f64>> {
        check_qubits("reduced auxiliary vector", self.n, MAX_PAIR_QUBITS)?;
        let p = self.phi.len();
        let mut out = Vec::with_capacity(pair_count(self.n));
        for s in 0..p {
            for t in s..p {
                out.push(self.phi[s] * self.phi[t]);
            }
        }
        Ok(out)
    }
}

pub fn aux_vector(code: &ValidatedCode) -> Result<AuxVector> {
    let n = code.num_qubits();
    check_qubits("auxiliary vector", n, MAX_PAULI_SUM_QUBITS)?;
    let words = code.codewords();
    let phi = (0..pauli::count(n))
        .into_par_iter()
        .map(|index| {
            let masks = PauliMasks::from_index(index, n);
            words.iter().map(|w| masks.matrix_element(w, w)).sum::<Complex64>().re
        })
        .collect();
    Ok(AuxVector { n, phi })
}
