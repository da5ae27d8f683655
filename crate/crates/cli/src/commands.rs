use std::fmt::Write as _;

use adlp_core::codes::{builtin, random_code, CodeSpec};
use adlp_core::connection::{verify_lemma_with, ConnectionMatrix, MatrixKind};
use adlp_core::enumerator::{ad_enumerators, sl_enumerators};
use adlp_core::lp::{assemble, export_lp, max_ruled_out_c, solve};
use adlp_core::{ConstraintSet, Error, FeasibilityQuery, GammaValue, SolverOptions, VerdictStatus};
use anyhow::{Context, Result};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::{emit, json_text, num, parse_gammas, provenance, require_format};
use crate::{Cli, Command, EnumerateArgs, FeasibilityArgs, Format, LemmaArgs, ScanArgs, SolverArgs};

pub fn run(cli: &Cli, args: &[String]) -> Result<u8> {
    match &cli.command {
        Command::Enumerate(a) => enumerate(cli, args, a),
        Command::LemmaCheck(a) => lemma_check(cli, args, a),
        Command::Feasibility(a) => feasibility(cli, args, a),
        Command::ScanC(a) => scan_c(cli, args, a),
    }
}

fn load_code(name: &str) -> Result<CodeSpec> {
    match builtin(name) {
        Ok(code) => Ok(code),
        Err(Error::UnknownCode(_)) if std::path::Path::new(name).exists() => {
            CodeSpec::load(name).with_context(|| format!("reading code file {name}"))
        }
        Err(e) => Err(e.into()),
    }
}

fn enumerate(cli: &Cli, args: &[String], a: &EnumerateArgs) -> Result<u8> {
    let (literals, values) = parse_gammas(&a.gamma)?;
    let [gamma] = values[..] else {
        anyhow::bail!("enumerate takes a single damping parameter");
    };
    let code = load_code(&a.code)?.validate()?;
    let g = GammaValue::new(gamma)?;
    let (ea, eb) = ad_enumerators(&code, &g)?;
    let sl = if a.sl { Some(sl_enumerators(&code)?) } else { None };
    let n = code.num_qubits();

    let text = match cli.format {
        Format::Json => {
            let mut report = provenance("enumerate", args, &literals);
            report.insert("code".into(), json!(a.code));
            report.insert("n".into(), json!(n));
            report.insert("M".into(), json!(code.dimension()));
            report.insert("gamma".into(), json!(gamma));
            report.insert("A".into(), json!(ea.values));
            report.insert("B".into(), json!(eb.values));
            if let Some((asl, bsl)) = &sl {
                report.insert("A_SL".into(), json!(asl.values));
                report.insert("B_SL".into(), json!(bsl.values));
            }
            json_text(&Value::Object(report))
        }
        Format::Csv => {
            let mut out = format!("# adlp {} enumerate code={} gamma={}\n", env!("CARGO_PKG_VERSION"), a.code, literals[0]);
            out.push_str(if sl.is_some() { "i,A,B,A_SL,B_SL\n" } else { "i,A,B\n" });
            for i in 0..=n {
                let _ = write!(out, "{i},{},{}", num(ea.values[i]), num(eb.values[i]));
                if let Some((asl, bsl)) = &sl {
                    let _ = write!(out, ",{},{}", num(asl.values[i]), num(bsl.values[i]));
                }
                out.push('\n');
            }
            out
        }
        Format::Human => {
            let mut out = format!(
                "adlp {}: {} (n = {n}, M = {}) at gamma = {}\n",
                env!("CARGO_PKG_VERSION"),
                a.code,
                code.dimension(),
                literals[0]
            );
            let _ = writeln!(out, "{:>3}  {:>24}  {:>24}", "i", "A_i", "B_i");
            for i in 0..=n {
                let _ = writeln!(out, "{i:>3}  {:>24.16e}  {:>24.16e}", ea.values[i], eb.values[i]);
            }
            if let Some((asl, bsl)) = &sl {
                let _ = writeln!(out, "{:>3}  {:>24}  {:>24}", "i", "A_SL_i", "B_SL_i");
                for i in 0..=n {
                    let _ = writeln!(out, "{i:>3}  {:>24.16e}  {:>24.16e}", asl.values[i], bsl.values[i]);
                }
            }
            out
        }
    };
    emit(cli, &text)?;
    Ok(0)
}

fn lemma_check(cli: &Cli, args: &[String], a: &LemmaArgs) -> Result<u8> {
    require_format(cli, &[Format::Json, Format::Human])?;
    let (literals, values) = parse_gammas(&a.gammas)?;
    let gammas = values.iter().map(|&g| GammaValue::new(g)).collect::<adlp_core::Result<Vec<_>>>()?;
    let matrices = gammas
        .iter()
        .map(|g| Ok((ConnectionMatrix::build(MatrixKind::A, a.n, g)?, ConnectionMatrix::build(MatrixKind::B, a.n, g)?)))
        .collect::<adlp_core::Result<Vec<_>>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut per_gamma = vec![(0.0f64, 0.0f64); gammas.len()];
    let mut passed = true;
    for _ in 0..a.trials {
        let code = random_code(a.n, a.m, &mut rng)?;
        for (k, g) in gammas.iter().enumerate() {
            let (ma, mb) = &matrices[k];
            let r = verify_lemma_with(ma, mb, &code, g, a.tol)?;
            per_gamma[k].0 = per_gamma[k].0.max(r.residual_a);
            per_gamma[k].1 = per_gamma[k].1.max(r.residual_b);
            passed &= r.passed;
        }
    }

    let text = match cli.format {
        Format::Human => {
            let mut out = format!(
                "adlp {}: lemma check, n = {}, M = {}, {} trials, seed {}, tolerance {:e}\n",
                env!("CARGO_PKG_VERSION"),
                a.n,
                a.m,
                a.trials,
                a.seed,
                a.tol
            );
            for (lit, (ra, rb)) in literals.iter().zip(&per_gamma) {
                let _ = writeln!(out, "gamma {lit}: max residual A {ra:.3e}, B {rb:.3e}");
            }
            let _ = writeln!(out, "{}", if passed { "PASS" } else { "FAIL" });
            out
        }
        _ => {
            let mut report = provenance("lemma-check", args, &literals);
            report.insert("n".into(), json!(a.n));
            report.insert("M".into(), json!(a.m));
            report.insert("trials".into(), json!(a.trials));
            report.insert("seed".into(), json!(a.seed));
            report.insert("tolerances".into(), json!({ "residual": a.tol }));
            let rows: Vec<Value> = values
                .iter()
                .zip(&per_gamma)
                .map(|(g, (ra, rb))| json!({ "gamma": g, "maxResidualA": ra, "maxResidualB": rb }))
                .collect();
            report.insert("results".into(), json!(rows));
            report.insert("passed".into(), json!(passed));
            json_text(&Value::Object(report))
        }
    };
    emit(cli, &text)?;
    Ok(if passed { 0 } else { 2 })
}

fn solver_setup(s: &SolverArgs) -> Result<(ConstraintSet, SolverOptions)> {
    let set: ConstraintSet = s.constraint_set.parse()?;
    let opts = SolverOptions { feasibility_tol: s.feasibility_tol, pivot_tol: s.pivot_tol, ..SolverOptions::default() };
    Ok((set, opts))
}

fn tolerances(opts: &SolverOptions) -> Value {
    json!({ "feasibility": opts.feasibility_tol, "pivot": opts.pivot_tol, "optimality": opts.optimality_tol })
}

fn feasibility(cli: &Cli, args: &[String], a: &FeasibilityArgs) -> Result<u8> {
    require_format(cli, &[Format::Json, Format::Human])?;
    let (literals, values) = parse_gammas(&a.gammas)?;
    let (set, opts) = solver_setup(&a.solver)?;
    let q = FeasibilityQuery::new(a.n, a.m, a.t, a.c, &values, set)?;
    let p = assemble(&q)?;
    if let Some(path) = &a.export_lp {
        export_lp(&p, path).with_context(|| format!("writing {}", path.display()))?;
    }
    let verdict = solve(&p, &opts);

    let text = match cli.format {
        Format::Human => {
            let mut out = format!(
                "adlp {}: n = {}, M = {}, t = {}, c = {}, gammas = {}, constraint set {}\n",
                env!("CARGO_PKG_VERSION"),
                a.n,
                a.m,
                a.t,
                a.c,
                literals.join(","),
                set
            );
            let _ = writeln!(
                out,
                "{} variables, {} equalities, {} inequalities; tolerances feasibility {:e}, pivot {:e}",
                p.variables.len(),
                p.num_equalities(),
                p.num_inequalities(),
                opts.feasibility_tol,
                opts.pivot_tol
            );
            let _ = writeln!(out, "status: {} after {} pivots", verdict.status, verdict.iterations);
            let _ = writeln!(out, "max residual: {:.3e}", verdict.residuals.max());
            if let Some(cert) = &verdict.certificate {
                let _ = writeln!(out, "phase-1 optimum: {:.6e}", cert.phase_one_objective);
                if let Some(f) = &cert.farkas {
                    let _ = writeln!(out, "Farkas margin: {:.6e}", f.margin);
                }
            }
            if let Some(msg) = &verdict.message {
                let _ = writeln!(out, "note: {msg}");
            }
            out
        }
        _ => {
            let mut report = provenance("feasibility", args, &literals);
            report.insert("n".into(), json!(a.n));
            report.insert("M".into(), json!(a.m));
            report.insert("t".into(), json!(a.t));
            report.insert("tolerances".into(), tolerances(&opts));
            if let Value::Object(v) = verdict.to_json(&p, &q) {
                report.extend(v);
            }
            json_text(&Value::Object(report))
        }
    };
    emit(cli, &text)?;
    Ok(match verdict.status {
        VerdictStatus::Feasible => 0,
        VerdictStatus::Infeasible => 2,
        VerdictStatus::NumericalFailure => 3,
    })
}

fn scan_c(cli: &Cli, args: &[String], a: &ScanArgs) -> Result<u8> {
    require_format(cli, &[Format::Json, Format::Human])?;
    let (literals, values) = parse_gammas(&a.gammas)?;
    let (set, opts) = solver_setup(&a.solver)?;
    let q = FeasibilityQuery::new(a.n, a.m, a.t, a.c_lo, &values, set)?;
    let report = max_ruled_out_c(&q, a.c_lo, a.c_hi, a.resolution, &opts)?;

    let text = match cli.format {
        Format::Human => {
            let mut out = format!(
                "adlp {}: n = {}, M = {}, t = {}, gammas = {}, constraint set {}\n",
                env!("CARGO_PKG_VERSION"),
                a.n,
                a.m,
                a.t,
                literals.join(","),
                set
            );
            for (c, status) in &report.evaluations {
                let _ = writeln!(out, "c = {c:<24} {status}");
            }
            let _ = writeln!(out, "largest ruled-out c: {}", report.c);
            out
        }
        _ => {
            let mut map = provenance("scan-c", args, &literals);
            map.insert("n".into(), json!(a.n));
            map.insert("M".into(), json!(a.m));
            map.insert("t".into(), json!(a.t));
            map.insert("gammas".into(), json!(values));
            map.insert("constraintSet".into(), json!(set.as_str()));
            map.insert("tolerances".into(), tolerances(&opts));
            map.insert("resolution".into(), json!(a.resolution));
            map.insert("c".into(), json!(report.c));
            map.insert("feasibleAbove".into(), json!(report.feasible_above));
            let evals: Vec<Value> =
                report.evaluations.iter().map(|(c, s)| json!({ "c": c, "status": s.as_str() })).collect();
            map.insert("evaluations".into(), json!(evals));
            json_text(&Value::Object(map))
        }
    };
    emit(cli, &text)?;
    Ok(0)
}
