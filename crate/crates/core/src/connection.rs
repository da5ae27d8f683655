//! Connection matrices between the auxiliary enumerator and the A/B
//! enumerators.
//!
//! Row `i` of `M_A` has raw entries
//! `m_{στ} = 4⁻ⁿ Σ_{wt(x)=i} tr(A_x σ) tr(A_x† τ)` and row `i` of `M_B` has
//! `4⁻ⁿ Σ_{wt(x)=i} tr(A_x σ A_x† τ)`. Both factorize over qubits into the
//! kernels of [`crate::kraus`]. The matrices act on `φ ⊗ φ`, which is
//! symmetric under swapping the factors, so they are stored directly on
//! unordered pairs `{σ, τ}`: the reduced entry is `m_{στ} + m_{τσ}` for
//! `σ < τ` and `m_{σσ}` on the diagonal. For the A kind the imaginary parts
//! cancel because `m_{τσ} = conj(m_{στ})`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::ValidatedCode;
use crate::enumerator::{ad_enumerators, aux_vector, AuxVector, MAX_PAIR_QUBITS};
use crate::error::Result;
use crate::kraus::{kernel_a, kernel_b, GammaValue};
use crate::pauli::{self, check_qubits, letter_at};

/// Largest qubit count for connection matrices.
pub const MAX_CONNECTION_QUBITS: usize = MAX_PAIR_QUBITS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixKind {
    A,
    B,
}

/// One stored entry of a reduced row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairEntry {
    pub sigma: u32,
    pub tau: u32,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionMatrix {
    pub kind: MatrixKind,
    pub n: usize,
    pub gamma: f64,
    /// Rows `0..=n`, each sorted by `(σ, τ)` with `σ ≤ τ`; exact zeros dropped.
    pub rows: Vec<Vec<PairEntry>>,
}

/// Per-qubit kernel values for one ordered pair, indexed `[qubit][bit]`.
fn kernel_factors(kind: MatrixKind, n: usize, sigma: usize, tau: usize, gamma: &GammaValue) -> Vec<[Complex64; 2]> {
    (0..n)
        .map(|q| {
            let (s, t) = (letter_at(sigma, n, q), letter_at(tau, n, q));
            let mut f = [Complex64::new(0.0, 0.0); 2];
            for (a, slot) in f.iter_mut().enumerate() {
                *slot = match kind {
                    MatrixKind::A => kernel_a(a as u8, s, gamma) * kernel_a(a as u8, t, gamma).conj(),
                    MatrixKind::B => Complex64::new(kernel_b(a as u8, s, t, gamma), 0.0),
                };
            }
            f
        })
        .collect()
}

/// Sums the kernel products over all Kraus labels, bucketed by label weight.
/// Labels with a vanishing factor are pruned as soon as it appears.
fn accumulate_labels(factors: &[[Complex64; 2]], out: &mut [Complex64]) {
    fn visit(factors: &[[Complex64; 2]], q: usize, weight: usize, acc: Complex64, out: &mut [Complex64]) {
        if q == factors.len() {
            out[weight] += acc;
            return;
        }
        for a in 0..2 {
            let f = factors[q][a];
            if f.re != 0.0 || f.im != 0.0 {
                visit(factors, q + 1, weight + a, acc * f, out);
            }
        }
    }
    visit(factors, 0, 0, Complex64::new(1.0, 0.0), out);
}

/// Raw complex entries `m_{στ}` of the ordered pair `(σ, τ)`, one per row.
pub fn raw_entries(kind: MatrixKind, n: usize, sigma: usize, tau: usize, gamma: &GammaValue) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    accumulate_labels(&kernel_factors(kind, n, sigma, tau, gamma), &mut out);
    let scale = 1.0 / pauli::count(n) as f64;
    out.iter_mut().for_each(|v| *v *= scale);
    out
}

impl ConnectionMatrix {
    pub fn build(kind: MatrixKind, n: usize, gamma: &GammaValue) -> Result<Self> {
        check_qubits("connection matrix", n, MAX_CONNECTION_QUBITS)?;
        let p = pauli::count(n);

        let per_sigma: Vec<Vec<Vec<PairEntry>>> = (0..p)
            .into_par_iter()
            .map(|sigma| {
                let mut rows = vec![Vec::new(); n + 1];
                for tau in sigma..p {
                    let forward = raw_entries(kind, n, sigma, tau, gamma);
                    let reduced: Vec<f64> = if sigma == tau {
                        forward.iter().map(|v| v.re).collect()
                    } else {
                        let backward = raw_entries(kind, n, tau, sigma, gamma);
                        forward
                            .iter()
                            .zip(&backward)
                            .map(|(f, b)| {
                                let sum = f + b;
                                debug_assert!(
                                    sum.im.abs() <= 1e-14 * (f.norm() + b.norm()).max(1e-300),
                                    "non-real reduced entry for ({sigma}, {tau})"
                                );
                                sum.re
                            })
                            .collect()
                    };
                    for (i, value) in reduced.into_iter().enumerate() {
                        if value != 0.0 {
                            rows[i].push(PairEntry { sigma: sigma as u32, tau: tau as u32, value });
                        }
                    }
                }
                rows
            })
            .collect();

        let mut rows = vec![Vec::new(); n + 1];
        for chunk in per_sigma {
            for (i, entries) in chunk.into_iter().enumerate() {
                rows[i].extend(entries);
            }
        }
        Ok(Self { kind, n, gamma: gamma.value(), rows })
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// `M · (φ ⊗ φ)`.
    pub fn apply(&self, aux: &AuxVector) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|e| e.value * aux.pair(e.sigma as usize, e.tau as usize)).sum())
            .collect()
    }

    /// Applies the matrix to explicit pair values in pair-index order.
    pub fn apply_reduced(&self, y: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.value * y[crate::enumerator::pair_index(self.n, e.sigma as usize, e.tau as usize)])
                    .sum()
            })
            .collect()
    }

    pub fn to_json_rows(&self) -> serde_json::Value {
        let rows: Vec<_> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let entries: Vec<_> = row.iter().map(|e| serde_json::json!([e.sigma, e.tau, e.value])).collect();
                serde_json::json!({ "i": i, "entries": entries })
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LemmaReport {
    pub n: usize,
    pub m: usize,
    pub gamma: f64,
    /// `max_i |(M_A·AUX)_i − (tr P)² A_i|`
    pub residual_a: f64,
    /// `max_i |(M_B·AUX)_i − tr P · B_i|`
    pub residual_b: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Checks both connection identities for `code` at `gamma`.
pub fn verify_lemma(code: &ValidatedCode, gamma: &GammaValue, tol: f64) -> Result<LemmaReport> {
    let n = code.num_qubits();
    let ma = ConnectionMatrix::build(MatrixKind::A, n, gamma)?;
    let mb = ConnectionMatrix::build(MatrixKind::B, n, gamma)?;
    verify_lemma_with(&ma, &mb, code, gamma, tol)
}

/// As [`verify_lemma`] with prebuilt matrices for the code's `n` and `gamma`.
pub fn verify_lemma_with(
    ma: &ConnectionMatrix,
    mb: &ConnectionMatrix,
    code: &ValidatedCode,
    gamma: &GammaValue,
    tol: f64,
) -> Result<LemmaReport> {
    let m = code.dimension() as f64;
    let aux = aux_vector(code)?;
    let (a, b) = ad_enumerators(code, gamma)?;
    let max_residual = |lhs: Vec<f64>, rhs: &[f64], scale: f64| {
        lhs.iter().zip(rhs).map(|(l, r)| (l - scale * r).abs()).fold(0.0, f64::max)
    };
    let residual_a = max_residual(ma.apply(&aux), &a.values, m * m);
    let residual_b = max_residual(mb.apply(&aux), &b.values, m);
    Ok(LemmaReport {
        n: code.num_qubits(),
        m: code.dimension(),
        gamma: gamma.value(),
        residual_a,
        residual_b,
        tolerance: tol,
        passed: residual_a < tol && residual_b < tol,
    })
}
