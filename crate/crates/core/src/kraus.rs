//! Kraus operators of the amplitude-damping channel and their single-qubit
//! trace kernels.
//!
//! `A_0 = diag(1, √(1−γ))` and `A_1 = √γ |0⟩⟨1|`. For a label `x ∈ {0,1}ⁿ`
//! the n-qubit operator is `A_x = A_{x_1} ⊗ … ⊗ A_{x_n}` and its weight is the
//! number of ones in `x`. Every connection-matrix entry factorizes over qubits
//! into the closed-form kernels below, so dense matrices only appear as test
//! oracles.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{check_qubits, Pauli, MAX_DENSE_QUBITS, MAX_QUBITS};

/// Damping probability with its square roots computed once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaValue {
    gamma: f64,
    sqrt_gamma: f64,
    /// √(1−γ)
    sqrt_keep: f64,
    /// 1 − √(1−γ), evaluated as γ / (1 + √(1−γ)) to avoid cancellation
    keep_deficit: f64,
}

impl GammaValue {
    /// Accepts γ ∈ [0, 1].
    pub fn new(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::GammaOutOfRange(gamma));
        }
        let sqrt_keep = (1.0 - gamma).sqrt();
        Ok(Self {
            gamma,
            sqrt_gamma: gamma.sqrt(),
            sqrt_keep,
            keep_deficit: gamma / (1.0 + sqrt_keep),
        })
    }

    /// Accepts γ ∈ (0, 1), the range the feasibility program needs.
    pub fn open(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::GammaOutOfRange(gamma));
        }
        Self::new(gamma)
    }

    pub fn value(&self) -> f64 {
        self.gamma
    }

    pub fn sqrt(&self) -> f64 {
        self.sqrt_gamma
    }

    pub fn sqrt_keep(&self) -> f64 {
        self.sqrt_keep
    }

    pub fn keep_deficit(&self) -> f64 {
        self.keep_deficit
    }
}

/// Bitstring `x` labelling the Kraus operator `A_x`; bit 0 belongs to qubit 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KrausLabel {
    n: usize,
    bits: u32,
}

impl KrausLabel {
    /// `bits` is read with qubit 0 as the most significant bit.
    pub fn new(n: usize, bits: u32) -> Result<Self> {
        check_qubits("Kraus label", n, MAX_QUBITS)?;
        if bits >> n != 0 {
            return Err(Error::InvalidQuery(format!("Kraus label {bits:#b} has more than {n} bits")));
        }
        Ok(Self { n, bits })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = 0u32;
        for ch in s.chars() {
            bits = match ch {
                '0' => bits << 1,
                '1' => (bits << 1) | 1,
                other => return Err(Error::InvalidQuery(format!("bad Kraus label character {other:?}"))),
            };
        }
        Self::new(s.len(), bits)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn bit(&self, qubit: usize) -> u8 {
        ((self.bits >> (self.n - 1 - qubit)) & 1) as u8
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// All `2ⁿ` labels in increasing integer order.
    pub fn all(n: usize) -> impl Iterator<Item = KrausLabel> {
        (0..1u32 << n).map(move |bits| KrausLabel { n, bits })
    }
}

/// `tr(A_a σ)`.
pub fn kernel_a(a: u8, sigma: Pauli, gamma: &GammaValue) -> Complex64 {
    match (a, sigma) {
        (0, Pauli::I) => Complex64::new(1.0 + gamma.sqrt_keep, 0.0),
        (0, Pauli::Z) => Complex64::new(gamma.keep_deficit, 0.0),
        (1, Pauli::X) => Complex64::new(gamma.sqrt_gamma, 0.0),
        (1, Pauli::Y) => Complex64::new(0.0, gamma.sqrt_gamma),
        _ => Complex64::new(0.0, 0.0),
    }
}

/// `tr(A_a† τ)`, the conjugate of [`kernel_a`] since Paulis are Hermitian.
pub fn kernel_a_dagger(a: u8, tau: Pauli, gamma: &GammaValue) -> Complex64 {
    kernel_a(a, tau, gamma).conj()
}

/// `tr(A_a σ A_a† τ)`, which is always real.
pub fn kernel_b(a: u8, sigma: Pauli, tau: Pauli, gamma: &GammaValue) -> f64 {
    use Pauli::*;
    let g = gamma.gamma;
    match a {
        0 => match (sigma, tau) {
            (I, I) | (Z, Z) => 2.0 - g,
            (I, Z) | (Z, I) => g,
            (X, X) | (Y, Y) => 2.0 * gamma.sqrt_keep,
            _ => 0.0,
        },
        _ => match (sigma, tau) {
            (I, I) | (I, Z) => g,
            (Z, I) | (Z, Z) => -g,
            _ => 0.0,
        },
    }
}

/// Dense single-qubit Kraus operator.
pub fn single_qubit_kraus(a: u8, gamma: &GammaValue) -> [[f64; 2]; 2] {
    if a == 0 {
        [[1.0, 0.0], [0.0, gamma.sqrt_keep]]
    } else {
        [[0.0, gamma.sqrt_gamma], [0.0, 0.0]]
    }
}

/// Dense `A_x`; only used as a reference implementation.
pub fn kraus_dense(x: &KrausLabel, gamma: &GammaValue) -> Result<DMatrix<Complex64>> {
    check_qubits("dense Kraus operator", x.n, MAX_DENSE_QUBITS)?;
    let mut acc = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
    for q in 0..x.n {
        let m = single_qubit_kraus(x.bit(q), gamma);
        let single = DMatrix::from_fn(2, 2, |r, c| Complex64::new(m[r][c], 0.0));
        acc = acc.kronecker(&single);
    }
    Ok(acc)
}

/// Writes `A_x |ψ⟩` into `out` without forming the matrix.
pub fn apply_kraus(x: &KrausLabel, gamma: &GammaValue, psi: &[Complex64], out: &mut [Complex64]) {
    out.copy_from_slice(psi);
    for q in 0..x.n {
        let mask = 1usize << (x.n - 1 - q);
        if x.bit(q) == 0 {
            for (b, amp) in out.iter_mut().enumerate() {
                if b & mask != 0 {
                    *amp *= gamma.sqrt_keep;
                }
            }
        } else {
            for b in 0..out.len() {
                if b & mask == 0 {
                    out[b] = out[b | mask] * gamma.sqrt_gamma;
                    out[b | mask] = Complex64::new(0.0, 0.0);
                }
            }
        }
    }
}
