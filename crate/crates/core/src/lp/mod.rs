//! Multi-γ feasibility program over a shared auxiliary enumerator.
//!
//! For each damping parameter γ_k the program ties the normalized
//! enumerators `A_i/γ_kⁱ`, `B_i/γ_kⁱ` to one set of pair variables
//! `y_{σ≤τ}` through the connection matrices and imposes the `(t, c)`
//! criterion. Infeasibility rules out every `((n, M))` code meeting it.

mod assemble;
mod mps;
mod problem;
mod search;
pub mod simplex;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kraus::GammaValue;
use crate::pauli::check_qubits;

pub use assemble::{assemble, witness_from_code, MAX_LP_QUBITS};
pub use mps::{export_lp, read_mps, write_mps};
pub use problem::{Catalog, LpProblem, Residuals, Row, RowSense, Variable};
pub use search::{max_ruled_out_c, SearchReport};
pub use simplex::{check_farkas, FarkasCheck, SimplexOutcome, SimplexStatus, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstraintSet {
    /// The displayed program plus the anchor `y_{I,I} = M²`.
    #[serde(rename = "paper-literal")]
    PaperLiteral,
    /// Adds `A_0 ≥ (1−γ)ⁿ`, `B_i ≥ A_i`, `0 ≤ y_{σ,σ} ≤ M²` and `Σ y_{σ,σ} = 2ⁿM`.
    #[serde(rename = "strengthened")]
    Strengthened,
}

impl ConstraintSet {
    pub const ALL: [ConstraintSet; 2] = [ConstraintSet::PaperLiteral, ConstraintSet::Strengthened];

    pub fn as_str(&self) -> &'static str {
        match self {
            ConstraintSet::PaperLiteral => "paper-literal",
            ConstraintSet::Strengthened => "strengthened",
        }
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConstraintSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" | "paper-literal" => Ok(ConstraintSet::PaperLiteral),
            "strengthened" => Ok(ConstraintSet::Strengthened),
            other => Err(Error::InvalidQuery(format!("unknown constraint set {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityQuery {
    pub n: usize,
    /// Code dimension `M = tr P`.
    pub m: usize,
    pub t: usize,
    pub c: f64,
    pub gammas: Vec<GammaValue>,
    pub constraint_set: ConstraintSet,
}

impl FeasibilityQuery {
    pub fn new(n: usize, m: usize, t: usize, c: f64, gammas: &[f64], constraint_set: ConstraintSet) -> Result<Self> {
        let gammas = gammas.iter().map(|&g| GammaValue::open(g)).collect::<Result<Vec<_>>>()?;
        let q = Self { n, m, t, c, gammas, constraint_set };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::NoQubits);
        }
        check_qubits("feasibility program", self.n, MAX_LP_QUBITS)?;
        if self.m == 0 || self.m > 1 << self.n {
            return Err(Error::InvalidQuery(format!("M = {} outside [1, {}]", self.m, 1usize << self.n)));
        }
        if self.t > self.n {
            return Err(Error::InvalidQuery(format!("t = {} exceeds n = {}", self.t, self.n)));
        }
        if !(self.c >= 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidQuery(format!("c = {} must be finite and non-negative", self.c)));
        }
        if self.gammas.is_empty() {
            return Err(Error::InvalidQuery("no damping parameters given".into()));
        }
        for (k, g) in self.gammas.iter().enumerate() {
            if !(g.value() > 0.0 && g.value() < 1.0) {
                return Err(Error::GammaOutOfRange(g.value()));
            }
            if self.gammas[..k].iter().any(|h| h.value() == g.value()) {
                return Err(Error::InvalidQuery(format!("duplicate damping parameter {}", g.value())));
            }
        }
        Ok(())
    }

    pub fn with_c(&self, c: f64) -> Self {
        Self { c, ..self.clone() }
    }

    pub fn gamma_values(&self) -> Vec<f64> {
        self.gammas.iter().map(GammaValue::value).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictStatus {
    Feasible,
    Infeasible,
    NumericalFailure,
}

impl VerdictStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictStatus::Feasible => "Feasible",
            VerdictStatus::Infeasible => "Infeasible",
            VerdictStatus::NumericalFailure => "NumericalFailure",
        }
    }
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Attestation attached to a non-feasible verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub solver_status: SimplexStatus,
    /// Sum of artificial variables at the phase-1 optimum.
    pub phase_one_objective: f64,
    /// Row multipliers scaled to unit max-norm, when the solver produced them.
    pub multipliers: Option<Vec<f64>>,
    pub farkas: Option<FarkasCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LpVerdict {
    pub status: VerdictStatus,
    pub witness: Option<Vec<f64>>,
    pub certificate: Option<Certificate>,
    /// Independent re-evaluation of the returned point against every row and bound.
    pub residuals: Residuals,
    pub iterations: usize,
    pub message: Option<String>,
}

impl LpVerdict {
    /// Report object `{status, c, gammas, constraintSet, witness, residuals}`.
    /// The witness is keyed by variable name.
    pub fn to_json(&self, problem: &LpProblem, query: &FeasibilityQuery) -> serde_json::Value {
        let witness = self.witness.as_ref().map(|x| {
            let map: serde_json::Map<String, serde_json::Value> =
                problem.variables.iter().zip(x).map(|(v, value)| (v.name.clone(), (*value).into())).collect();
            serde_json::Value::Object(map)
        });
        serde_json::json!({
            "status": self.status.as_str(),
            "c": query.c,
            "gammas": query.gamma_values(),
            "constraintSet": query.constraint_set.as_str(),
            "witness": witness,
            "residuals": self.residuals,
            "iterations": self.iterations,
            "certificate": self.certificate,
            "message": self.message,
        })
    }
}

/// Farkas coefficients on unbounded directions below this count as zero.
const FARKAS_ZERO_TOL: f64 = 1e-9;

/// Decides feasibility of `p`.
///
/// A point is only reported feasible after every row and bound is
/// re-evaluated from the problem data within `feasibility_tol`. Infeasibility
/// needs a phase-1 optimum above `feasibility_tol` and a Farkas certificate
/// that verifies against the original rows; anything else is a numerical
/// failure.
pub fn solve(p: &LpProblem, opts: &SolverOptions) -> LpVerdict {
    if !p.is_well_formed() {
        return LpVerdict {
            status: VerdictStatus::NumericalFailure,
            witness: None,
            certificate: None,
            residuals: Residuals::default(),
            iterations: 0,
            message: Some("problem contains non-finite data or dangling references".into()),
        };
    }
    let out = simplex::minimize(p, opts);
    let residuals = p.residuals(&out.x);
    let certificate = |multipliers: Option<Vec<f64>>, farkas| Certificate {
        solver_status: out.status,
        phase_one_objective: out.phase_one_objective,
        multipliers,
        farkas,
    };
    let verdict = |status, witness, certificate, message: Option<String>| LpVerdict {
        status,
        witness,
        certificate,
        residuals,
        iterations: out.iterations,
        message,
    };

    match out.status {
        SimplexStatus::Optimal | SimplexStatus::Unbounded => {
            if residuals.max() <= opts.feasibility_tol {
                verdict(VerdictStatus::Feasible, Some(out.x.clone()), None, None)
            } else {
                verdict(
                    VerdictStatus::NumericalFailure,
                    None,
                    Some(certificate(None, None)),
                    Some(format!("terminal point fails re-validation (max residual {:.3e})", residuals.max())),
                )
            }
        }
        SimplexStatus::Infeasible => {
            let Some(raw) = out.farkas.as_ref() else {
                return verdict(
                    VerdictStatus::NumericalFailure,
                    None,
                    Some(certificate(None, None)),
                    Some("singular basis while extracting the infeasibility certificate".into()),
                );
            };
            let peak = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let y: Vec<f64> = raw.iter().map(|v| if peak > 0.0 { v / peak } else { 0.0 }).collect();
            let check = check_farkas(p, &y, FARKAS_ZERO_TOL);
            if check.margin > 0.0 {
                verdict(VerdictStatus::Infeasible, None, Some(certificate(Some(y), Some(check))), None)
            } else {
                verdict(
                    VerdictStatus::NumericalFailure,
                    None,
                    Some(certificate(Some(y), Some(check))),
                    Some(format!("phase-1 optimum {:.3e} but the certificate does not verify", out.phase_one_objective)),
                )
            }
        }
        SimplexStatus::IterationLimit | SimplexStatus::SingularBasis => verdict(
            VerdictStatus::NumericalFailure,
            None,
            Some(certificate(None, None)),
            Some(format!("solver stopped: {:?}", out.status)),
        ),
    }
}

/// Assembles and solves `q`.
pub fn check(q: &FeasibilityQuery, opts: &SolverOptions) -> Result<(LpProblem, LpVerdict)> {
    let p = assemble(q)?;
    let verdict = solve(&p, opts);
    Ok((p, verdict))
}
