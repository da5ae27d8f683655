//! Dense two-phase primal simplex over bounded variables.
//!
//! Rows are equilibrated to unit max-coefficient, inequality rows receive a
//! slack and every row an artificial. Phase 1 minimizes the sum of
//! artificials; phase 2 (only when the problem has an objective) minimizes
//! the objective from the phase-1 basis. Pricing is Dantzig's rule, falling
//! back to Bland's smallest-index rule after a streak of degenerate pivots.
//! The tableau is rebuilt from an LU factorization of the basis at a fixed
//! interval and at the end of each phase.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::problem::{LpProblem, RowSense};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolverOptions {
    /// Phase-1 optimum above this is infeasible; witnesses must satisfy every
    /// row and bound to this tolerance.
    pub feasibility_tol: f64,
    /// Smallest tableau entry accepted as a pivot.
    pub pivot_tol: f64,
    /// Reduced-cost threshold for an improving column.
    pub optimality_tol: f64,
    pub max_iterations: usize,
    pub refactor_interval: usize,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub degenerate_streak: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            feasibility_tol: 1e-7,
            pivot_tol: 1e-9,
            optimality_tol: 1e-10,
            max_iterations: 200_000,
            refactor_interval: 100,
            degenerate_streak: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimplexStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    SingularBasis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub status: SimplexStatus,
    /// Structural variable values at termination.
    pub x: Vec<f64>,
    pub objective: f64,
    /// Sum of artificial values at the end of phase 1, in equilibrated row units.
    pub phase_one_objective: f64,
    /// Phase-1 row multipliers in original row units; set when infeasible.
    pub farkas: Option<Vec<f64>>,
    pub iterations: usize,
}

struct Tableau {
    m: usize,
    ncols: usize,
    num_structural: usize,
    /// Equilibrated constraint matrix with slack and artificial columns, row-major.
    a: Vec<f64>,
    b: Vec<f64>,
    row_scale: Vec<f64>,
    /// `B⁻¹ a`, row-major.
    t: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    x: Vec<f64>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    cost: Vec<f64>,
    reduced: Vec<f64>,
    artificial_start: usize,
}

enum Step {
    Optimal,
    Unbounded,
    Progress { degenerate: bool },
}

impl Tableau {
    fn new(p: &LpProblem) -> Self {
        let m = p.rows.len();
        let nv = p.variables.len();
        let num_slacks = p.num_inequalities();
        let ncols = nv + num_slacks + m;
        let artificial_start = nv + num_slacks;

        let mut a = vec![0.0; m * ncols];
        let mut b = vec![0.0; m];
        let mut row_scale = vec![1.0; m];
        let mut lower = Vec::with_capacity(ncols);
        let mut upper = Vec::with_capacity(ncols);
        for v in &p.variables {
            lower.push(v.lower);
            upper.push(v.upper);
        }
        lower.extend(std::iter::repeat_n(0.0, num_slacks + m));
        upper.extend(std::iter::repeat_n(f64::INFINITY, num_slacks + m));

        let mut slack = nv;
        for (r, row) in p.rows.iter().enumerate() {
            let peak = row.coeffs.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
            let scale = if peak > 0.0 { 1.0 / peak } else { 1.0 };
            row_scale[r] = scale;
            for &(j, v) in &row.coeffs {
                a[r * ncols + j] = v * scale;
            }
            b[r] = row.rhs * scale;
            match row.sense {
                RowSense::Eq => {}
                RowSense::Le => {
                    a[r * ncols + slack] = 1.0;
                    slack += 1;
                }
                RowSense::Ge => {
                    a[r * ncols + slack] = -1.0;
                    slack += 1;
                }
            }
        }

        // nonbasic start: finite lower, else finite upper, else zero
        let mut x: Vec<f64> = (0..ncols)
            .map(|j| {
                if lower[j].is_finite() {
                    lower[j]
                } else if upper[j].is_finite() {
                    upper[j]
                } else {
                    0.0
                }
            })
            .collect();

        let mut basis = Vec::with_capacity(m);
        let mut in_basis = vec![false; ncols];
        for r in 0..m {
            let activity: f64 = (0..artificial_start).map(|j| a[r * ncols + j] * x[j]).sum();
            let residual = b[r] - activity;
            let sign = if residual >= 0.0 { 1.0 } else { -1.0 };
            let art = artificial_start + r;
            a[r * ncols + art] = sign;
            x[art] = residual.abs();
            basis.push(art);
            in_basis[art] = true;
        }

        // B = diag(sign) is its own inverse
        let mut t = a.clone();
        for r in 0..m {
            let sign = a[r * ncols + artificial_start + r];
            if sign < 0.0 {
                t[r * ncols..(r + 1) * ncols].iter_mut().for_each(|v| *v = -*v);
            }
        }

        let mut cost = vec![0.0; ncols];
        cost[artificial_start..].iter_mut().for_each(|c| *c = 1.0);

        let mut tab = Self {
            m,
            ncols,
            num_structural: nv,
            a,
            b,
            row_scale,
            t,
            lower,
            upper,
            x,
            basis,
            in_basis,
            cost,
            reduced: vec![0.0; ncols],
            artificial_start,
        };
        tab.recompute_reduced_costs();
        tab
    }

    fn recompute_reduced_costs(&mut self) {
        let ncols = self.ncols;
        self.reduced.copy_from_slice(&self.cost);
        for r in 0..self.m {
            let cb = self.cost[self.basis[r]];
            if cb != 0.0 {
                let row = &self.t[r * ncols..(r + 1) * ncols];
                for (d, v) in self.reduced.iter_mut().zip(row) {
                    *d -= cb * v;
                }
            }
        }
        for &j in &self.basis {
            self.reduced[j] = 0.0;
        }
    }

    fn basis_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.m, self.m, |r, c| self.a[r * self.ncols + self.basis[c]])
    }

    /// Rebuilds `B⁻¹a`, basic values and reduced costs from the original data.
    fn refactor(&mut self) -> bool {
        if self.m == 0 {
            return true;
        }
        let lu = self.basis_matrix().lu();
        let full = DMatrix::from_fn(self.m, self.ncols, |r, c| self.a[r * self.ncols + c]);
        let Some(t) = lu.solve(&full) else {
            return false;
        };
        if t.iter().any(|v| !v.is_finite()) {
            return false;
        }
        for r in 0..self.m {
            for c in 0..self.ncols {
                self.t[r * self.ncols + c] = t[(r, c)];
            }
        }
        let mut rhs = DMatrix::from_column_slice(self.m, 1, &self.b);
        for j in 0..self.ncols {
            if !self.in_basis[j] && self.x[j] != 0.0 {
                for r in 0..self.m {
                    rhs[(r, 0)] -= self.a[r * self.ncols + j] * self.x[j];
                }
            }
        }
        let Some(xb) = lu.solve(&rhs) else {
            return false;
        };
        for r in 0..self.m {
            self.x[self.basis[r]] = xb[(r, 0)];
        }
        self.recompute_reduced_costs();
        true
    }

    /// Row multipliers `π` with `πᵀB = c_Bᵀ`, in equilibrated units.
    fn duals(&self) -> Option<Vec<f64>> {
        let cb = DMatrix::from_fn(self.m, 1, |r, _| self.cost[self.basis[r]]);
        let pi = self.basis_matrix().transpose().lu().solve(&cb)?;
        Some(pi.iter().copied().collect())
    }

    fn choose_entering(&self, bland: bool, tol: f64) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        let mut best_score = 0.0;
        for j in 0..self.ncols {
            if self.in_basis[j] {
                continue;
            }
            let d = self.reduced[j];
            let dir = if d < -tol && self.x[j] < self.upper[j] {
                1.0
            } else if d > tol && self.x[j] > self.lower[j] {
                -1.0
            } else {
                continue;
            };
            if bland {
                return Some((j, dir));
            }
            if d.abs() > best_score {
                best_score = d.abs();
                best = Some((j, dir));
            }
        }
        best
    }

    fn iterate(&mut self, opts: &SolverOptions, bland: bool) -> Step {
        let Some((j, dir)) = self.choose_entering(bland, opts.optimality_tol) else {
            return Step::Optimal;
        };
        let ncols = self.ncols;

        let mut theta = f64::INFINITY;
        let mut leave: Option<(usize, bool)> = None; // (row, hits upper)
        let mut leave_pivot = 0.0;
        for r in 0..self.m {
            let alpha = self.t[r * ncols + j];
            if alpha.abs() <= opts.pivot_tol {
                continue;
            }
            let q = self.basis[r];
            let rate = -dir * alpha;
            let (limit, hits_upper) = if rate < 0.0 {
                if !self.lower[q].is_finite() {
                    continue;
                }
                (((self.x[q] - self.lower[q]) / -rate).max(0.0), false)
            } else {
                if !self.upper[q].is_finite() {
                    continue;
                }
                (((self.upper[q] - self.x[q]) / rate).max(0.0), true)
            };
            let better = match leave {
                None => true,
                Some((best_r, _)) => {
                    let slack = 1e-12 * (1.0 + theta);
                    if limit < theta - slack {
                        true
                    } else if limit <= theta + slack {
                        if bland {
                            q < self.basis[best_r]
                        } else {
                            alpha.abs() > leave_pivot
                        }
                    } else {
                        false
                    }
                }
            };
            if better {
                theta = if leave.is_none() { limit } else { theta.min(limit) };
                leave = Some((r, hits_upper));
                leave_pivot = alpha.abs();
            }
        }

        let span = self.upper[j] - self.lower[j];
        let flip = span.is_finite() && span <= theta;
        if flip {
            theta = span;
        }
        if !theta.is_finite() {
            return Step::Unbounded;
        }

        // move the entering variable and every basic variable
        self.x[j] += dir * theta;
        if theta != 0.0 {
            for r in 0..self.m {
                let alpha = self.t[r * ncols + j];
                if alpha != 0.0 {
                    self.x[self.basis[r]] -= dir * alpha * theta;
                }
            }
        }

        if flip {
            self.x[j] = if dir > 0.0 { self.upper[j] } else { self.lower[j] };
            return Step::Progress { degenerate: theta == 0.0 };
        }

        let (r, hits_upper) = leave.expect("finite step without a blocking row");
        let q = self.basis[r];
        self.x[q] = if hits_upper { self.upper[q] } else { self.lower[q] };
        if q >= self.artificial_start {
            // artificials never re-enter
            self.lower[q] = 0.0;
            self.upper[q] = 0.0;
            self.x[q] = 0.0;
        }
        self.pivot(r, j);
        self.basis[r] = j;
        self.in_basis[q] = false;
        self.in_basis[j] = true;
        Step::Progress { degenerate: theta <= 1e-12 }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let ncols = self.ncols;
        let p = self.t[r * ncols + j];
        {
            let row = &mut self.t[r * ncols..(r + 1) * ncols];
            row.iter_mut().for_each(|v| *v /= p);
            row[j] = 1.0;
        }
        let pivot_row: Vec<f64> = self.t[r * ncols..(r + 1) * ncols].to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.t[i * ncols + j];
            if f != 0.0 {
                let row = &mut self.t[i * ncols..(i + 1) * ncols];
                for (v, pr) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pr;
                }
                row[j] = 0.0;
            }
        }
        let dj = self.reduced[j];
        if dj != 0.0 {
            for (d, pr) in self.reduced.iter_mut().zip(&pivot_row) {
                *d -= dj * pr;
            }
            self.reduced[j] = 0.0;
        }
    }

    fn run_phase(&mut self, opts: &SolverOptions, iterations: &mut usize) -> SimplexStatus {
        let mut streak = 0usize;
        let mut since_refactor = 0usize;
        loop {
            if *iterations >= opts.max_iterations {
                return SimplexStatus::IterationLimit;
            }
            let bland = streak >= opts.degenerate_streak;
            match self.iterate(opts, bland) {
                Step::Optimal => {
                    // confirm on a fresh factorization before declaring optimality
                    if since_refactor == 0 {
                        return SimplexStatus::Optimal;
                    }
                    if !self.refactor() {
                        return SimplexStatus::SingularBasis;
                    }
                    since_refactor = 0;
                    if self.choose_entering(true, opts.optimality_tol).is_none() {
                        return SimplexStatus::Optimal;
                    }
                }
                Step::Unbounded => return SimplexStatus::Unbounded,
                Step::Progress { degenerate } => {
                    *iterations += 1;
                    since_refactor += 1;
                    streak = if degenerate { streak + 1 } else { 0 };
                    if since_refactor >= opts.refactor_interval {
                        if !self.refactor() {
                            return SimplexStatus::SingularBasis;
                        }
                        since_refactor = 0;
                    }
                }
            }
        }
    }

    fn artificial_sum(&self) -> f64 {
        self.x[self.artificial_start..].iter().map(|v| v.max(0.0)).sum()
    }

    fn structural(&self) -> Vec<f64> {
        self.x[..self.num_structural].to_vec()
    }
}

/// Minimizes `p.objective · x` over the feasible region of `p`.
pub fn minimize(p: &LpProblem, opts: &SolverOptions) -> SimplexOutcome {
    let mut tab = Tableau::new(p);
    let mut iterations = 0;

    let phase_one = tab.run_phase(opts, &mut iterations);
    let phase_one_objective = tab.artificial_sum();
    let outcome = |tab: &Tableau, status, farkas, iterations| {
        let x = tab.structural();
        let objective = p.objective.iter().map(|(j, c)| c * x[*j]).sum();
        SimplexOutcome { status, x, objective, phase_one_objective, farkas, iterations }
    };
    match phase_one {
        SimplexStatus::Optimal => {}
        other => return outcome(&tab, other, None, iterations),
    }

    if phase_one_objective > opts.feasibility_tol {
        let farkas = tab.duals().map(|pi| pi.iter().zip(&tab.row_scale).map(|(v, s)| v * s).collect());
        return outcome(&tab, SimplexStatus::Infeasible, farkas, iterations);
    }

    if p.objective.is_empty() {
        return outcome(&tab, SimplexStatus::Optimal, None, iterations);
    }

    for j in tab.artificial_start..tab.ncols {
        tab.lower[j] = 0.0;
        tab.upper[j] = 0.0;
        tab.cost[j] = 0.0;
    }
    for &(j, c) in &p.objective {
        tab.cost[j] = c;
    }
    tab.recompute_reduced_costs();
    let status = tab.run_phase(opts, &mut iterations);
    outcome(&tab, status, None, iterations)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FarkasCheck {
    /// `yᵀb − max_{x in bounds} yᵀAx`; positive proves infeasibility.
    pub margin: f64,
    /// Largest `|yᵀA_j|` that was treated as zero on an unbounded direction.
    pub dual_residual: f64,
}

/// Evaluates a Farkas certificate against the problem data.
///
/// `multipliers` are clipped to the sign each row admits (`≤ 0` for `≤`
/// rows, `≥ 0` for `≥` rows). Any feasible `x` then satisfies
/// `yᵀAx ≥ yᵀb`, so a positive margin excludes all of them. Coefficients
/// below `zero_tol` on variables with an infinite bound are treated as zero
/// and reported in `dual_residual`.
pub fn check_farkas(p: &LpProblem, multipliers: &[f64], zero_tol: f64) -> FarkasCheck {
    let y: Vec<f64> = p
        .rows
        .iter()
        .zip(multipliers)
        .map(|(row, &v)| match row.sense {
            RowSense::Eq => v,
            RowSense::Le => v.min(0.0),
            RowSense::Ge => v.max(0.0),
        })
        .collect();
    let mut g = vec![0.0; p.variables.len()];
    let mut rhs = 0.0;
    for (row, yr) in p.rows.iter().zip(&y) {
        if *yr == 0.0 {
            continue;
        }
        rhs += yr * row.rhs;
        for &(j, v) in &row.coeffs {
            g[j] += yr * v;
        }
    }
    let mut sup = 0.0;
    let mut dual_residual: f64 = 0.0;
    for (gj, var) in g.iter().zip(&p.variables) {
        let bound = if *gj > 0.0 { var.upper } else { var.lower };
        if *gj == 0.0 {
            continue;
        }
        if bound.is_finite() {
            sup += gj * bound;
        } else if gj.abs() <= zero_tol {
            dual_residual = dual_residual.max(gj.abs());
        } else {
            return FarkasCheck { margin: f64::NEG_INFINITY, dual_residual: gj.abs() };
        }
    }
    FarkasCheck { margin: rhs - sup, dual_residual }
}
