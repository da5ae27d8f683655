//! n-qubit Pauli strings in the canonical base-4 ordering.
//!
//! Letters are encoded `I = 0, X = 1, Y = 2, Z = 3` and qubit 0 is the most
//! significant base-4 digit, so `X⊗Z` has index `1·4 + 3 = 7`. Every table,
//! file format and auxiliary-space index in this crate uses this order.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest qubit count for index arithmetic.
pub const MAX_QUBITS: usize = 12;
/// Largest qubit count for dense `2ⁿ × 2ⁿ` matrices.
pub const MAX_DENSE_QUBITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Pauli {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_digit(d: u8) -> Pauli {
        Self::ALL[(d & 3) as usize]
    }

    pub fn digit(self) -> u8 {
        self as u8
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Result<Pauli> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::InvalidPauliLetter(other)),
        }
    }

    /// Diagonal in the computational basis (`I` or `Z`).
    pub fn is_diagonal(self) -> bool {
        matches!(self, Pauli::I | Pauli::Z)
    }

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }
}

/// Number of n-qubit Pauli strings, `4ⁿ`.
pub fn count(n: usize) -> usize {
    1usize << (2 * n)
}

/// Letter of qubit `j` inside the canonical index of an n-qubit string.
#[inline]
pub fn letter_at(index: usize, n: usize, j: usize) -> Pauli {
    Pauli::from_digit(((index >> (2 * (n - 1 - j))) & 3) as u8)
}

/// Weight of the string with canonical index `index`.
#[inline]
pub fn weight_of_index(index: usize) -> usize {
    // a base-4 digit is non-zero iff either of its two bits is set
    let mut nonzero = 0usize;
    let mut rest = index;
    while rest != 0 {
        if rest & 3 != 0 {
            nonzero += 1;
        }
        rest >>= 2;
    }
    nonzero
}

/// Bit masks describing the action `σ|b⟩ = i^{#Y} (−1)^{|b ∧ z|} |b ⊕ x⟩`
/// on computational basis states (qubit 0 is the most significant bit).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PauliMasks {
    pub x: usize,
    pub z: usize,
    pub y_count: u32,
}

impl PauliMasks {
    pub fn from_index(index: usize, n: usize) -> Self {
        let mut masks = PauliMasks { x: 0, z: 0, y_count: 0 };
        for j in 0..n {
            let bit = 1usize << (n - 1 - j);
            match letter_at(index, n, j) {
                Pauli::I => {}
                Pauli::X => masks.x |= bit,
                Pauli::Y => {
                    masks.x |= bit;
                    masks.z |= bit;
                    masks.y_count += 1;
                }
                Pauli::Z => masks.z |= bit,
            }
        }
        masks
    }

    /// Global phase `i^{#Y}`.
    pub fn phase(&self) -> Complex64 {
        match self.y_count % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// Writes `σ|ψ⟩` into `out`.
    pub fn apply(&self, psi: &[Complex64], out: &mut [Complex64]) {
        let phase = self.phase();
        for (b, amp) in psi.iter().enumerate() {
            let sign = if (b & self.z).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[b ^ self.x] = *amp * phase * sign;
        }
    }

    /// `⟨φ|σ|ψ⟩`.
    pub fn matrix_element(&self, phi: &[Complex64], psi: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, amp) in psi.iter().enumerate() {
            let term = phi[b ^ self.x].conj() * amp;
            if (b & self.z).count_ones() % 2 == 1 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        acc * self.phase()
    }
}

/// A tensor product of single-qubit Paulis, without a phase.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Result<Self> {
        check_qubits("Pauli string", letters.len(), MAX_QUBITS)?;
        Ok(Self { letters })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(vec![Pauli::I; n])
    }

    pub fn decode(index: u64, n: usize) -> Result<Self> {
        check_qubits("Pauli string", n, MAX_QUBITS)?;
        if index >= count(n) as u64 {
            return Err(Error::PauliIndexOutOfRange { index, n });
        }
        let letters = (0..n).map(|j| letter_at(index as usize, n, j)).collect();
        Ok(Self { letters })
    }

    pub fn encode(&self) -> u64 {
        self.letters.iter().fold(0u64, |acc, p| acc * 4 + p.digit() as u64)
    }

    pub fn num_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|p| **p != Pauli::I).count()
    }

    pub fn masks(&self) -> PauliMasks {
        PauliMasks::from_index(self.encode() as usize, self.num_qubits())
    }

    /// Kronecker product of the single-qubit matrices, qubit 0 outermost.
    pub fn dense_matrix(&self) -> Result<DMatrix<Complex64>> {
        check_qubits("dense Pauli matrix", self.num_qubits(), MAX_DENSE_QUBITS)?;
        let mut acc = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        for p in &self.letters {
            let m = p.matrix();
            let single = DMatrix::from_fn(2, 2, |r, c| m[r][c]);
            acc = acc.kronecker(&single);
        }
        Ok(acc)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s.chars().map(Pauli::from_letter).collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::NoQubits);
        }
        Self::new(letters)
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) fn check_qubits(what: &'static str, n: usize, max: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::NoQubits);
    }
    if n > max {
        return Err(Error::TooManyQubits { what, n, max });
    }
    Ok(())
}
