use serde::{Deserialize, Serialize};

use crate::enumerator::{pair_count, pair_from_index};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowSense {
    Eq,
    Le,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub sense: RowSense,
    /// `(variable, coefficient)`, sorted by variable, no duplicates.
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl Row {
    pub fn new(name: impl Into<String>, sense: RowSense, mut coeffs: Vec<(usize, f64)>, rhs: f64) -> Self {
        coeffs.sort_by_key(|(j, _)| *j);
        coeffs.dedup_by(|later, earlier| {
            if later.0 == earlier.0 {
                earlier.1 += later.1;
                true
            } else {
                false
            }
        });
        coeffs.retain(|(_, v)| *v != 0.0);
        Self { name: name.into(), sense, coeffs, rhs }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|(j, v)| v * x[*j]).sum()
    }

    /// Amount by which `x` violates the row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.activity(x);
        match self.sense {
            RowSense::Eq => (lhs - self.rhs).abs(),
            RowSense::Le => (lhs - self.rhs).max(0.0),
            RowSense::Ge => (self.rhs - lhs).max(0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
}

/// Variable layout of an assembled feasibility program: all unordered AUX
/// pairs first (in pair-index order), then for each γ_k the normalized
/// enumerators `A_i/γ_k^i` for `i = 0..=n` followed by `B_i/γ_k^i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub n: usize,
    pub gammas: Vec<f64>,
}

impl Catalog {
    pub fn aux_len(&self) -> usize {
        pair_count(self.n)
    }

    pub fn a_var(&self, k: usize, i: usize) -> usize {
        self.aux_len() + k * 2 * (self.n + 1) + i
    }

    pub fn b_var(&self, k: usize, i: usize) -> usize {
        self.a_var(k, i) + self.n + 1
    }

    pub fn num_vars(&self) -> usize {
        self.aux_len() + self.gammas.len() * 2 * (self.n + 1)
    }

    pub fn variable_name(&self, j: usize) -> String {
        if j < self.aux_len() {
            let (s, t) = pair_from_index(self.n, j);
            format!("y_{s}_{t}")
        } else {
            let rest = j - self.aux_len();
            let (k, within) = (rest / (2 * (self.n + 1)), rest % (2 * (self.n + 1)));
            if within <= self.n {
                format!("A_{within}_{k}")
            } else {
                format!("B_{}_{k}", within - self.n - 1)
            }
        }
    }

    /// Un-normalized `(A, B)` per γ from a point of the program.
    pub fn enumerators(&self, x: &[f64]) -> Vec<(Vec<f64>, Vec<f64>)> {
        self.gammas
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let a = (0..=self.n).map(|i| x[self.a_var(k, i)] * g.powi(i as i32)).collect();
                let b = (0..=self.n).map(|i| x[self.b_var(k, i)] * g.powi(i as i32)).collect();
                (a, b)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Residuals {
    pub max_equality: f64,
    pub max_inequality: f64,
    pub max_bound: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.max_equality.max(self.max_inequality).max(self.max_bound)
    }
}

/// A linear program: minimize `objective · x` subject to `rows` and bounds.
/// Feasibility programs leave `objective` empty.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub name: String,
    pub variables: Vec<Variable>,
    pub rows: Vec<Row>,
    pub objective: Vec<(usize, f64)>,
    pub catalog: Option<Catalog>,
}

impl LpProblem {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), variables: Vec::new(), rows: Vec::new(), objective: Vec::new(), catalog: None }
    }

    pub fn add_variable(&mut self, name: impl Into<String>, lower: f64, upper: f64) -> usize {
        self.variables.push(Variable { name: name.into(), lower, upper });
        self.variables.len() - 1
    }

    pub fn add_row(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn num_equalities(&self) -> usize {
        self.rows.iter().filter(|r| r.sense == RowSense::Eq).count()
    }

    pub fn num_inequalities(&self) -> usize {
        self.rows.len() - self.num_equalities()
    }

    pub fn find_row(&self, name: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn find_variable(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Evaluates every row and bound at `x` directly from the problem data.
    pub fn residuals(&self, x: &[f64]) -> Residuals {
        let mut r = Residuals::default();
        for row in &self.rows {
            let v = row.violation(x);
            match row.sense {
                RowSense::Eq => r.max_equality = r.max_equality.max(v),
                _ => r.max_inequality = r.max_inequality.max(v),
            }
        }
        for (var, value) in self.variables.iter().zip(x) {
            let v = (var.lower - value).max(value - var.upper).max(0.0);
            r.max_bound = r.max_bound.max(v);
        }
        r
    }

    /// True if every coefficient, right-hand side and finite bound is finite
    /// and every row only references declared variables.
    pub fn is_well_formed(&self) -> bool {
        let nv = self.variables.len();
        self.rows.iter().all(|row| row.rhs.is_finite() && row.coeffs.iter().all(|(j, v)| *j < nv && v.is_finite()))
            && self.variables.iter().all(|v| !v.lower.is_nan() && !v.upper.is_nan() && v.lower <= v.upper)
            && self.objective.iter().all(|(j, v)| *j < nv && v.is_finite())
    }
}
