//! Free-format MPS export and import.
//!
//! Variables are named `y_<σ>_<τ>` (Pauli indices, `σ ≤ τ`), `A_<i>_<k>` and
//! `B_<i>_<k>` (weight `i`, damping parameter index `k`); the enumerator
//! columns hold the γ-normalized values. Rows are `EA_i_k`, `EB_i_k`
//! (connection equalities), `TC_i_k` (criterion), `CAP_i_k`, `FID_k`, and in
//! the strengthened set `A0_k`, `BA_i_k`, `PURITY`. The objective row `OBJ`
//! is listed for every column so that each variable is declared. Comment
//! lines record the γ list.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::problem::{Catalog, LpProblem, Row, RowSense};
use crate::error::{Error, Result};

const OBJECTIVE_ROW: &str = "OBJ";
const RHS_SET: &str = "RHS";
const BOUND_SET: &str = "BND";

/// Shortest decimal that parses back to the same `f64`.
fn num(v: f64) -> String {
    format!("{v:?}")
}

pub fn write_mps(p: &LpProblem) -> String {
    let mut out = String::new();
    let name = if p.name.is_empty() { "adlp" } else { p.name.as_str() };
    let _ = writeln!(out, "* {} variables, {} rows", p.variables.len(), p.rows.len());
    if let Some(cat) = &p.catalog {
        let _ = writeln!(out, "* qubits {}", cat.n);
        let gammas: Vec<String> = cat.gammas.iter().map(|g| num(*g)).collect();
        let _ = writeln!(out, "* gammas {}", gammas.join(" "));
    }
    let _ = writeln!(out, "NAME {name}");
    out.push_str("ROWS\n");
    let _ = writeln!(out, " N {OBJECTIVE_ROW}");
    for row in &p.rows {
        let kind = match row.sense {
            RowSense::Eq => "E",
            RowSense::Le => "L",
            RowSense::Ge => "G",
        };
        let _ = writeln!(out, " {kind} {}", row.name);
    }

    let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); p.variables.len()];
    for (r, row) in p.rows.iter().enumerate() {
        for &(j, v) in &row.coeffs {
            columns[j].push((r, v));
        }
    }
    let mut objective = vec![0.0; p.variables.len()];
    for &(j, c) in &p.objective {
        objective[j] += c;
    }
    out.push_str("COLUMNS\n");
    for (j, var) in p.variables.iter().enumerate() {
        let _ = writeln!(out, " {} {OBJECTIVE_ROW} {}", var.name, num(objective[j]));
        for &(r, v) in &columns[j] {
            let _ = writeln!(out, " {} {} {}", var.name, p.rows[r].name, num(v));
        }
    }

    out.push_str("RHS\n");
    for row in p.rows.iter().filter(|r| r.rhs != 0.0) {
        let _ = writeln!(out, " {RHS_SET} {} {}", row.name, num(row.rhs));
    }

    out.push_str("BOUNDS\n");
    for var in &p.variables {
        let (lo, hi) = (var.lower, var.upper);
        if lo == hi {
            let _ = writeln!(out, " FX {BOUND_SET} {} {}", var.name, num(lo));
            continue;
        }
        if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
            let _ = writeln!(out, " FR {BOUND_SET} {}", var.name);
            continue;
        }
        if lo == f64::NEG_INFINITY {
            let _ = writeln!(out, " MI {BOUND_SET} {}", var.name);
        } else if lo != 0.0 {
            let _ = writeln!(out, " LO {BOUND_SET} {} {}", var.name, num(lo));
        }
        if hi != f64::INFINITY {
            let _ = writeln!(out, " UP {BOUND_SET} {} {}", var.name, num(hi));
        }
    }
    out.push_str("ENDATA\n");
    out
}

pub fn export_lp(p: &LpProblem, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_mps(p))?;
    Ok(())
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Start,
    Rows,
    Columns,
    Rhs,
    Bounds,
    End,
}

/// Row name, sense, sparse coefficients and right-hand side.
type RowData = (String, RowSense, Vec<(usize, f64)>, f64);

/// Parses free-format MPS as written by [`write_mps`]. Supports `E/L/G/N`
/// rows and `LO/UP/FX/FR/MI/PL` bounds; `RANGES` is rejected.
pub fn read_mps(text: &str) -> Result<LpProblem> {
    let mut p = LpProblem::new("");
    let mut section = Section::Start;
    let mut objective_row: Option<String> = None;
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut var_index: HashMap<String, usize> = HashMap::new();
    let mut row_data: Vec<RowData> = Vec::new();
    let mut objective: Vec<(usize, f64)> = Vec::new();
    let mut catalog_n: Option<usize> = None;
    let mut catalog_gammas: Option<Vec<f64>> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| Error::Mps { line: line_no, message };
        let parse = |tok: &str| tok.parse::<f64>().map_err(|_| err(format!("bad number {tok:?}")));

        if let Some(comment) = raw.strip_prefix('*') {
            let mut toks = comment.split_whitespace();
            match toks.next() {
                Some("qubits") => catalog_n = toks.next().and_then(|t| t.parse().ok()),
                Some("gammas") => catalog_gammas = toks.map(|t| t.parse().ok()).collect(),
                _ => {}
            }
            continue;
        }
        if raw.trim().is_empty() {
            continue;
        }
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with([' ', '\t']) {
            section = match toks[0] {
                "NAME" => {
                    p.name = toks.get(1).unwrap_or(&"").to_string();
                    Section::Start
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => Section::End,
                other => return Err(err(format!("unsupported section {other}"))),
            };
            continue;
        }

        match section {
            Section::Rows => {
                let [kind, name] = toks[..] else {
                    return Err(err("expected `<type> <name>`".into()));
                };
                let sense = match kind {
                    "N" => {
                        if objective_row.is_none() {
                            objective_row = Some(name.to_owned());
                        }
                        continue;
                    }
                    "E" => RowSense::Eq,
                    "L" => RowSense::Le,
                    "G" => RowSense::Ge,
                    other => return Err(err(format!("unknown row type {other}"))),
                };
                if row_index.insert(name.to_owned(), row_data.len()).is_some() {
                    return Err(err(format!("row {name} declared twice")));
                }
                row_data.push((name.to_owned(), sense, Vec::new(), 0.0));
            }
            Section::Columns => {
                if toks.len() < 3 || toks.len() % 2 == 0 {
                    return Err(err("expected `<column> <row> <value> [<row> <value>]`".into()));
                }
                let j = match var_index.get(toks[0]) {
                    Some(&j) => j,
                    None => {
                        let j = p.add_variable(toks[0], 0.0, f64::INFINITY);
                        var_index.insert(toks[0].to_owned(), j);
                        j
                    }
                };
                for pair in toks[1..].chunks(2) {
                    let v = parse(pair[1])?;
                    if Some(pair[0]) == objective_row.as_deref() {
                        objective.push((j, v));
                    } else if let Some(&r) = row_index.get(pair[0]) {
                        row_data[r].2.push((j, v));
                    } else {
                        return Err(err(format!("unknown row {}", pair[0])));
                    }
                }
            }
            Section::Rhs => {
                if toks.len() < 3 || toks.len() % 2 == 0 {
                    return Err(err("expected `<set> <row> <value> [<row> <value>]`".into()));
                }
                for pair in toks[1..].chunks(2) {
                    let v = parse(pair[1])?;
                    if Some(pair[0]) == objective_row.as_deref() {
                        continue;
                    }
                    let &r = row_index.get(pair[0]).ok_or_else(|| err(format!("unknown row {}", pair[0])))?;
                    row_data[r].3 = v;
                }
            }
            Section::Bounds => {
                if toks.len() < 3 {
                    return Err(err("expected `<type> <set> <column> [<value>]`".into()));
                }
                let &j = var_index.get(toks[2]).ok_or_else(|| err(format!("unknown column {}", toks[2])))?;
                let value = || toks.get(3).ok_or_else(|| err("missing bound value".into())).and_then(|t| parse(t));
                let var = &mut p.variables[j];
                match toks[0] {
                    "LO" => var.lower = value()?,
                    "UP" => var.upper = value()?,
                    "FX" => {
                        let v = value()?;
                        var.lower = v;
                        var.upper = v;
                    }
                    "FR" => {
                        var.lower = f64::NEG_INFINITY;
                        var.upper = f64::INFINITY;
                    }
                    "MI" => var.lower = f64::NEG_INFINITY,
                    "PL" => var.upper = f64::INFINITY,
                    other => return Err(err(format!("unsupported bound type {other}"))),
                }
            }
            Section::Start | Section::End => return Err(err("data line outside a section".into())),
        }
    }
    if section != Section::End {
        return Err(Error::Mps { line: text.lines().count(), message: "missing ENDATA".into() });
    }

    for (name, sense, coeffs, rhs) in row_data {
        p.add_row(Row::new(name, sense, coeffs, rhs));
    }
    p.objective = objective.into_iter().filter(|(_, v)| *v != 0.0).collect();
    if let (Some(n), Some(gammas)) = (catalog_n, catalog_gammas) {
        let cat = Catalog { n, gammas };
        if cat.num_vars() == p.variables.len() {
            p.catalog = Some(cat);
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{assemble, solve, ConstraintSet, FeasibilityQuery, SolverOptions};

    #[test]
    fn roundtrip_preserves_problem() {
        for set in ConstraintSet::ALL {
            let q = FeasibilityQuery::new(2, 2, 1, 0.7, &[0.1, 1e-4], set).unwrap();
            let p = assemble(&q).unwrap();
            let back = read_mps(&write_mps(&p)).unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn toy_problem_lists_counted_rows() {
        let q = FeasibilityQuery::new(1, 1, 0, 1.0, &[0.1], ConstraintSet::PaperLiteral).unwrap();
        let p = assemble(&q).unwrap();
        let text = write_mps(&p);
        let rows: Vec<&str> = text
            .lines()
            .skip_while(|l| *l != "ROWS")
            .skip(1)
            .take_while(|l| l.starts_with(' '))
            .collect();
        assert_eq!(rows.len(), 1 + p.rows.len());
        assert_eq!(rows.iter().filter(|l| l.starts_with(" E ")).count(), 4);
        assert!(text.contains(" FX BND y_0_0 1.0"));
        assert!(text.contains("* gammas 0.1"));
    }

    #[test]
    fn reimport_preserves_verdict() {
        let opts = SolverOptions::default();
        let q = FeasibilityQuery::new(1, 2, 1, 1.0, &[0.1, 0.05, 0.01], ConstraintSet::Strengthened).unwrap();
        let p = assemble(&q).unwrap();
        let back = read_mps(&write_mps(&p)).unwrap();
        assert_eq!(solve(&p, &opts).status, solve(&back, &opts).status);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(read_mps("NAME x\nROWS\n N OBJ\nCOLUMNS\n x OBJ\n"), Err(Error::Mps { line: 5, .. })));
        assert!(matches!(read_mps("NAME x\nROWS\n N OBJ\n"), Err(Error::Mps { .. })));
        assert!(matches!(read_mps("NAME x\nRANGES\nENDATA\n"), Err(Error::Mps { line: 2, .. })));
        assert!(matches!(read_mps("NAME x\nROWS\n Q r\nENDATA\n"), Err(Error::Mps { .. })));
    }

    #[test]
    fn external_parser_accepts_output() {
        let q = FeasibilityQuery::new(1, 1, 0, 1e6, &[0.1], ConstraintSet::Strengthened).unwrap();
        let text = write_mps(&assemble(&q).unwrap());
        let problem = minilp::MpsFile::parse(text.as_bytes(), minilp::OptimizationDirection::Minimize);
        assert!(problem.is_ok(), "{:?}", problem.err());
    }
}
