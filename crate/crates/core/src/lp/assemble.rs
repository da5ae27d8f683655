use rayon::prelude::*;

use super::problem::{Catalog, LpProblem, Row, RowSense};
use super::{ConstraintSet, FeasibilityQuery};
use crate::binomial;
use crate::codes::ValidatedCode;
use crate::connection::{ConnectionMatrix, MatrixKind};
use crate::enumerator::{ad_enumerators, aux_vector, pair_count, pair_index};
use crate::error::{Error, Result};
use crate::pauli;

/// Largest qubit count the feasibility program supports.
pub const MAX_LP_QUBITS: usize = crate::connection::MAX_CONNECTION_QUBITS;

/// Builds the feasibility program for `q`.
///
/// Enumerator variables are normalized by `γ_kⁱ`, which keeps every
/// inequality coefficient inside `[−1, 1]` and every right-hand side at most
/// `max(c, C(n, i))`.
pub fn assemble(q: &FeasibilityQuery) -> Result<LpProblem> {
    q.validate()?;
    let (n, m) = (q.n, q.m as f64);
    let catalog = Catalog { n, gammas: q.gamma_values() };

    let matrices: Vec<(ConnectionMatrix, ConnectionMatrix)> = q
        .gammas
        .par_iter()
        .map(|g| Ok((ConnectionMatrix::build(MatrixKind::A, n, g)?, ConnectionMatrix::build(MatrixKind::B, n, g)?)))
        .collect::<Result<_>>()?;

    let strengthened = q.constraint_set == ConstraintSet::Strengthened;
    let mut p = LpProblem::new(format!("adlp_n{}_m{}_t{}", n, q.m, q.t));
    for j in 0..pair_count(n) {
        p.add_variable(catalog.variable_name(j), f64::NEG_INFINITY, f64::INFINITY);
    }
    p.variables[pair_index(n, 0, 0)].lower = m * m;
    p.variables[pair_index(n, 0, 0)].upper = m * m;
    if strengthened {
        for s in 1..pauli::count(n) {
            let v = &mut p.variables[pair_index(n, s, s)];
            v.lower = 0.0;
            v.upper = m * m;
        }
    }
    for j in pair_count(n)..catalog.num_vars() {
        p.add_variable(catalog.variable_name(j), 0.0, f64::INFINITY);
    }

    for (k, (ma, mb)) in matrices.iter().enumerate() {
        let g = q.gammas[k].value();
        for i in 0..=n {
            let scale = g.powi(i as i32);
            for (name, mat, var, weight) in [("EA", ma, catalog.a_var(k, i), m * m), ("EB", mb, catalog.b_var(k, i), m)] {
                let mut coeffs: Vec<(usize, f64)> = mat.rows[i]
                    .iter()
                    .map(|e| (pair_index(n, e.sigma as usize, e.tau as usize), -e.value / scale))
                    .collect();
                coeffs.push((var, weight));
                p.add_row(Row::new(format!("{name}_{i}_{k}"), RowSense::Eq, coeffs, 0.0));
            }
        }
        for i in 0..=q.t {
            let coeffs = vec![(catalog.b_var(k, i), 1.0), (catalog.a_var(k, i), -1.0)];
            p.add_row(Row::new(format!("TC_{i}_{k}"), RowSense::Le, coeffs, q.c * g.powi((q.t + 1 - i) as i32)));
        }
        for i in 0..=n {
            p.add_row(Row::new(format!("CAP_{i}_{k}"), RowSense::Le, vec![(catalog.b_var(k, i), 1.0)], binomial(n, i)));
        }
        let fid = (0..=n).map(|i| (catalog.b_var(k, i), g.powi(i as i32))).collect();
        p.add_row(Row::new(format!("FID_{k}"), RowSense::Le, fid, 1.0));
        if strengthened {
            p.add_row(Row::new(format!("A0_{k}"), RowSense::Ge, vec![(catalog.a_var(k, 0), 1.0)], (1.0 - g).powi(n as i32)));
            for i in 0..=n {
                let coeffs = vec![(catalog.b_var(k, i), 1.0), (catalog.a_var(k, i), -1.0)];
                p.add_row(Row::new(format!("BA_{i}_{k}"), RowSense::Ge, coeffs, 0.0));
            }
        }
    }
    if strengthened {
        let diag = (0..pauli::count(n)).map(|s| (pair_index(n, s, s), 1.0)).collect();
        p.add_row(Row::new("PURITY", RowSense::Eq, diag, (1usize << n) as f64 * m));
    }
    p.catalog = Some(catalog);
    Ok(p)
}

/// The point of [`assemble`]`(q)` induced by an explicit code: its pair
/// values `φ_σφ_τ` and its exact enumerators, normalized per γ.
pub fn witness_from_code(q: &FeasibilityQuery, code: &ValidatedCode) -> Result<Vec<f64>> {
    q.validate()?;
    if code.num_qubits() != q.n || code.dimension() != q.m {
        return Err(Error::InvalidQuery(format!(
            "code is (({}, {})) but the query asks for (({}, {}))",
            code.num_qubits(),
            code.dimension(),
            q.n,
            q.m
        )));
    }
    let catalog = Catalog { n: q.n, gammas: q.gamma_values() };
    let mut x = aux_vector(code)?.reduced()?;
    x.resize(catalog.num_vars(), 0.0);
    for (k, g) in q.gammas.iter().enumerate() {
        let (a, b) = ad_enumerators(code, g)?;
        for i in 0..=q.n {
            let scale = g.value().powi(i as i32);
            x[catalog.a_var(k, i)] = a.values[i] / scale;
            x[catalog.b_var(k, i)] = b.values[i] / scale;
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{builtin, random_code};
    use rand::SeedableRng;

    fn query(n: usize, m: usize, t: usize, c: f64, gammas: &[f64], set: ConstraintSet) -> FeasibilityQuery {
        FeasibilityQuery::new(n, m, t, c, gammas, set).unwrap()
    }

    #[test]
    fn single_qubit_counts() {
        let p = assemble(&query(1, 1, 0, 1.0, &[0.1], ConstraintSet::PaperLiteral)).unwrap();
        assert_eq!(p.variables.len(), 10 + 4);
        assert_eq!(p.num_equalities(), 4);
        let zero = vec![0.0; p.variables.len()];
        assert_eq!(p.residuals(&zero).max_bound, 1.0);
        assert_eq!(p.residuals(&zero).max_equality, 0.0);
    }

    #[test]
    fn three_qubit_counts() {
        let q = query(3, 2, 1, 9.8e4, &[0.1, 0.05, 0.01, 1e-4], ConstraintSet::PaperLiteral);
        let p = assemble(&q).unwrap();
        let cat = p.catalog.as_ref().unwrap();
        assert_eq!(cat.aux_len(), 2080);
        assert_eq!(p.variables.len(), 2080 + 4 * 8);
        assert_eq!(p.num_equalities(), 4 * 8);
        assert_eq!(p.num_inequalities(), 4 * (2 + 4 + 1));
    }

    #[test]
    fn leung_witness_satisfies_strengthened_program() {
        let q = query(4, 2, 1, 3.0 / 64.0, &[0.1], ConstraintSet::Strengthened);
        let p = assemble(&q).unwrap();
        let code = builtin("leung4").unwrap().validate().unwrap();
        let x = witness_from_code(&q, &code).unwrap();
        let r = p.residuals(&x);
        assert!(r.max() < 1e-9, "{r:?}");
    }

    #[test]
    fn random_code_witnesses_satisfy_literal_rows() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for (n, m) in [(1, 1), (2, 1), (2, 2), (3, 2)] {
            let code = random_code(n, m, &mut rng).unwrap();
            for set in ConstraintSet::ALL {
                // c large enough that the criterion rows are slack
                let q = query(n, m, n.min(1), 1e6, &[0.3, 0.05], set);
                let p = assemble(&q).unwrap();
                let x = witness_from_code(&q, &code).unwrap();
                assert!(p.residuals(&x).max() < 1e-9, "n={n} m={m} {set}");
            }
        }
    }

    #[test]
    fn repetition_code_satisfies_three_qubit_instance() {
        // (|000⟩ + |111⟩, |000⟩ − |111⟩) spans the same space as {|000⟩, |111⟩}:
        // B_1 = A_1 = 0 and B_0 − A_0 ≈ 9γ²/16, far below 9.8·10⁴·γ².
        let mut w0 = vec![num_complex::Complex64::new(0.0, 0.0); 8];
        let mut w1 = w0.clone();
        w0[0] = 1.0.into();
        w1[7] = 1.0.into();
        let code = crate::CodeSpec::new(3, vec![w0, w1]).validate().unwrap();
        for set in ConstraintSet::ALL {
            let q = query(3, 2, 1, 9.8e4, &[0.1, 0.05, 0.01, 1e-4], set);
            let p = assemble(&q).unwrap();
            let x = witness_from_code(&q, &code).unwrap();
            assert!(p.residuals(&x).max() < 1e-9, "{set}");
        }
    }

    #[test]
    fn inequality_coefficients_are_bounded() {
        for set in ConstraintSet::ALL {
            let q = query(3, 2, 1, 9.8e4, &[0.1, 1e-4], set);
            let p = assemble(&q).unwrap();
            let hi = q.c.max(binomial(3, 1));
            for row in p.rows.iter().filter(|r| r.sense != RowSense::Eq) {
                for &(_, v) in &row.coeffs {
                    assert!((-1.0..=hi).contains(&v), "{} has {v}", row.name);
                }
                assert!(row.rhs.abs() <= hi, "{}", row.name);
            }
        }
    }

    #[test]
    fn mismatched_code_rejected() {
        let q = query(4, 1, 1, 1.0, &[0.1], ConstraintSet::PaperLiteral);
        let code = builtin("leung4").unwrap().validate().unwrap();
        assert!(matches!(witness_from_code(&q, &code), Err(Error::InvalidQuery(_))));
    }
}
