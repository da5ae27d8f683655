//! Explicit quantum codes given by orthonormal codewords.
//!
//! The JSON file format is
//! `{ "n": 4, "codewords": [ [[re, im], …2ⁿ entries], … ] }` with amplitudes
//! in computational-basis order, qubit 0 most significant.

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{check_qubits, MAX_DENSE_QUBITS};

/// Orthonormality tolerance.
pub const CODE_TOLERANCE: f64 = 1e-10;

/// Unchecked code description as read from input.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeSpec {
    pub n: usize,
    pub codewords: Vec<Vec<Complex64>>,
}

#[derive(Serialize, Deserialize)]
struct CodeFile {
    n: usize,
    codewords: Vec<Vec<[f64; 2]>>,
}

impl CodeSpec {
    pub fn new(n: usize, codewords: Vec<Vec<Complex64>>) -> Self {
        Self { n, codewords }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CodeFile = serde_json::from_str(text)?;
        let codewords = file
            .codewords
            .into_iter()
            .map(|w| w.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .collect();
        Ok(Self { n: file.n, codewords })
    }

    pub fn to_json(&self) -> Result<String> {
        let file = CodeFile {
            n: self.n,
            codewords: self.codewords.iter().map(|w| w.iter().map(|a| [a.re, a.im]).collect()).collect(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Checks normalization and pairwise orthogonality. Never re-orthogonalizes.
    pub fn validate(self) -> Result<ValidatedCode> {
        check_qubits("explicit code", self.n, MAX_DENSE_QUBITS)?;
        if self.codewords.is_empty() {
            return Err(Error::EmptyCode);
        }
        let dim = 1usize << self.n;
        for (index, w) in self.codewords.iter().enumerate() {
            if w.len() != dim {
                return Err(Error::DimensionMismatch { index, expected: dim, found: w.len() });
            }
            let norm = inner(w, w).re.sqrt();
            if (norm - 1.0).abs() > CODE_TOLERANCE {
                return Err(Error::NotNormalized { index, norm });
            }
        }
        for i in 0..self.codewords.len() {
            for j in i + 1..self.codewords.len() {
                let overlap = inner(&self.codewords[i], &self.codewords[j]).norm();
                if overlap > CODE_TOLERANCE {
                    return Err(Error::NotOrthogonal { first: i, second: j, overlap });
                }
            }
        }
        let projector = DMatrix::from_fn(dim, dim, |r, c| {
            self.codewords.iter().map(|w| w[r] * w[c].conj()).sum::<Complex64>()
        });
        Ok(ValidatedCode { n: self.n, codewords: self.codewords, projector })
    }
}

/// `⟨a|b⟩`
pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// A code whose codewords passed validation, with its projector cached.
#[derive(Debug, Clone)]
pub struct ValidatedCode {
    n: usize,
    codewords: Vec<Vec<Complex64>>,
    projector: DMatrix<Complex64>,
}

impl ValidatedCode {
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Code dimension `M = tr P`.
    pub fn dimension(&self) -> usize {
        self.codewords.len()
    }

    pub fn codewords(&self) -> &[Vec<Complex64>] {
        &self.codewords
    }

    pub fn projector(&self) -> &DMatrix<Complex64> {
        &self.projector
    }

    pub fn spec(&self) -> CodeSpec {
        CodeSpec::new(self.n, self.codewords.clone())
    }
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &["leung4", "shor9", "trivial-zero(n)", "trivial-one(n)"];

/// Built-in codes: `leung4`, `shor9`, `trivial-zero(n)`, `trivial-one(n)`.
pub fn builtin(name: &str) -> Result<CodeSpec> {
    let unknown = || Error::UnknownCode(name.to_owned());
    match name {
        "leung4" => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            Ok(CodeSpec::new(
                4,
                vec![basis_superposition(4, &[(0b0000, h), (0b1111, h)]), basis_superposition(4, &[(0b0011, h), (0b1100, h)])],
            ))
        }
        "shor9" => Ok(CodeSpec::new(9, vec![shor_codeword(1.0), shor_codeword(-1.0)])),
        _ => {
            let (kind, arg) = name
                .strip_suffix(')')
                .and_then(|s| s.split_once('('))
                .ok_or_else(unknown)?;
            let n: usize = arg.trim().parse().map_err(|_| unknown())?;
            check_qubits("trivial code", n, MAX_DENSE_QUBITS)?;
            let basis = match kind {
                "trivial-zero" => 0,
                "trivial-one" => (1usize << n) - 1,
                _ => return Err(unknown()),
            };
            Ok(CodeSpec::new(n, vec![basis_superposition(n, &[(basis, 1.0)])]))
        }
    }
}

fn basis_superposition(n: usize, terms: &[(usize, f64)]) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
    for &(b, amp) in terms {
        v[b] += amp;
    }
    v
}

/// `(|000⟩ ± |111⟩)^{⊗3} / 2√2`
fn shor_codeword(sign: f64) -> Vec<Complex64> {
    let block = [(0b000usize, 1.0), (0b111usize, sign)];
    let norm = 1.0 / (2.0 * std::f64::consts::SQRT_2);
    let mut v = vec![Complex64::new(0.0, 0.0); 1 << 9];
    for (b1, s1) in block {
        for (b2, s2) in block {
            for (b3, s3) in block {
                v[(b1 << 6) | (b2 << 3) | b3] = Complex64::new(s1 * s2 * s3 * norm, 0.0);
            }
        }
    }
    v
}

/// Haar-like random `((n, M))` code from a complex Gaussian frame.
pub fn random_code<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<ValidatedCode> {
    check_qubits("random code", n, MAX_DENSE_QUBITS)?;
    let dim = 1usize << n;
    if m == 0 || m > dim {
        return Err(Error::InvalidQuery(format!("code dimension {m} outside [1, {dim}]")));
    }
    let frame = DMatrix::from_fn(dim, m, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let q = frame.qr().q();
    let codewords = (0..m).map(|k| q.column(k).iter().copied().collect()).collect();
    CodeSpec::new(n, codewords).validate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn max_abs(m: &DMatrix<Complex64>) -> f64 {
        m.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn trivial_zero_is_valid() {
        let code = builtin("trivial-zero(1)").unwrap();
        assert_eq!(code.codewords, vec![vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]]);
        assert_eq!(code.validate().unwrap().dimension(), 1);
    }

    #[test]
    fn duplicate_codewords_rejected() {
        let zero = builtin("trivial-zero(1)").unwrap().codewords[0].clone();
        let err = CodeSpec::new(1, vec![zero.clone(), zero]).validate().unwrap_err();
        match err {
            Error::NotOrthogonal { first, second, overlap } => {
                assert_eq!((first, second), (0, 1));
                assert!((overlap - 1.0).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unnormalized_rejected() {
        let v = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(matches!(CodeSpec::new(1, vec![v]).validate(), Err(Error::NotNormalized { index: 0, .. })));
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(CodeSpec::new(2, vec![]).validate(), Err(Error::EmptyCode)));
        let short = vec![Complex64::new(1.0, 0.0)];
        assert!(matches!(CodeSpec::new(1, vec![short]).validate(), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn builtins() {
        let leung = builtin("leung4").unwrap().validate().unwrap();
        assert_eq!((leung.num_qubits(), leung.dimension()), (4, 2));
        let shor = builtin("shor9").unwrap().validate().unwrap();
        assert_eq!((shor.num_qubits(), shor.dimension()), (9, 2));
        let one = builtin("trivial-one(3)").unwrap();
        assert_eq!(one.codewords[0][7], Complex64::new(1.0, 0.0));
        assert!(matches!(builtin("steane7"), Err(Error::UnknownCode(_))));
        assert!(matches!(builtin("trivial-two(2)"), Err(Error::UnknownCode(_))));
        assert!(builtin("trivial-zero(x)").is_err());
    }

    #[test]
    fn projector_is_idempotent_with_trace_m() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut codes: Vec<ValidatedCode> =
            ["leung4", "trivial-one(2)"].iter().map(|n| builtin(n).unwrap().validate().unwrap()).collect();
        for (n, m) in [(1, 1), (2, 2), (3, 3), (4, 5)] {
            codes.push(random_code(n, m, &mut rng).unwrap());
        }
        for code in codes {
            let p = code.projector();
            assert!(max_abs(&(p * p - p)) < 1e-10);
            assert!((p.trace().re - code.dimension() as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn json_roundtrip() {
        let code = builtin("leung4").unwrap();
        let text = code.to_json().unwrap();
        assert_eq!(CodeSpec::from_json(&text).unwrap(), code);
        let parsed = CodeSpec::from_json(r#"{"n":1,"codewords":[[[0,0],[1,0]]]}"#).unwrap();
        assert_eq!(parsed, builtin("trivial-one(1)").unwrap());
    }
}
