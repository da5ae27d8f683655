//! End-to-end runs of the feasibility program on small instances.

use adlp_core::codes::builtin;
use adlp_core::lp::{assemble, check, max_ruled_out_c, solve, witness_from_code};
use adlp_core::{ConstraintSet, Error, FeasibilityQuery, SolverOptions, VerdictStatus};

const THREE_QUBIT_GAMMAS: [f64; 4] = [0.1, 0.05, 0.01, 1e-4];

fn query(n: usize, m: usize, t: usize, c: f64, gammas: &[f64], set: ConstraintSet) -> FeasibilityQuery {
    FeasibilityQuery::new(n, m, t, c, gammas, set).unwrap()
}

fn status(q: &FeasibilityQuery) -> VerdictStatus {
    check(q, &SolverOptions::default()).unwrap().1.status
}

#[test]
fn single_qubit_trivial_instance_is_feasible() {
    for set in ConstraintSet::ALL {
        let (p, verdict) = check(&query(1, 1, 0, 1e6, &[0.1], set), &SolverOptions::default()).unwrap();
        assert_eq!(verdict.status, VerdictStatus::Feasible, "{set}");
        let x = verdict.witness.unwrap();
        assert!(p.residuals(&x).max() <= 1e-7);
    }
}

#[test]
fn four_qubit_instance_is_feasible_and_leung_witness_validates() {
    let q = query(4, 2, 1, 3.0 / 64.0, &[0.1, 0.05], ConstraintSet::Strengthened);
    let (p, verdict) = check(&q, &SolverOptions::default()).unwrap();
    assert_eq!(verdict.status, VerdictStatus::Feasible, "{:?}", verdict.message);
    let leung = builtin("leung4").unwrap().validate().unwrap();
    let x = witness_from_code(&q, &leung).unwrap();
    assert!(p.residuals(&x).max() < 1e-9);
}

#[test]
fn four_qubit_search_has_no_bracket() {
    let q = query(4, 2, 1, 0.0, &[0.1, 0.05], ConstraintSet::Strengthened);
    let err = max_ruled_out_c(&q, 3.0 / 64.0, 1.0, 1e-3, &SolverOptions::default()).unwrap_err();
    assert!(matches!(err, Error::NoBracket { .. }));
}

// {|000⟩, |111⟩} keeps B_1 = A_1 = 0 and B_0 − A_0 ≈ 9γ²/16, so the three-qubit
// program stays feasible under both constraint sets at this c.
#[test]
fn three_qubit_instance_admits_repetition_code() {
    for set in ConstraintSet::ALL {
        let (p, verdict) = check(&query(3, 2, 1, 9.8e4, &THREE_QUBIT_GAMMAS, set), &SolverOptions::default()).unwrap();
        assert_eq!(verdict.status, VerdictStatus::Feasible, "{set}: {:?}", verdict.message);
        assert!(p.residuals(verdict.witness.as_ref().unwrap()).max() <= 1e-7);
    }
}

#[test]
fn infeasible_verdicts_carry_verified_certificates() {
    let q = query(2, 3, 1, 1.0, &[0.1, 0.05, 0.01], ConstraintSet::Strengthened);
    let (_, verdict) = check(&q, &SolverOptions::default()).unwrap();
    assert_eq!(verdict.status, VerdictStatus::Infeasible);
    let cert = verdict.certificate.unwrap();
    assert!(cert.phase_one_objective > 1e-7);
    assert!(cert.farkas.unwrap().margin > 0.0);
}

#[test]
fn relaxing_c_preserves_infeasibility_downward() {
    let cases = [
        (1, 2, ConstraintSet::Strengthened, vec![49.0, 30.0, 5.0]),
        (1, 2, ConstraintSet::PaperLiteral, vec![47.0, 20.0, 2.0]),
        (2, 3, ConstraintSet::Strengthened, vec![48.0, 12.0, 1.0]),
    ];
    for (n, m, set, cs) in cases {
        for c in cs {
            let q = query(n, m, 1, c, &[0.1, 0.05, 0.01], set);
            assert_eq!(status(&q), VerdictStatus::Infeasible, "n={n} M={m} {set} c={c}");
            assert_eq!(status(&q.with_c(c / 10.0)), VerdictStatus::Infeasible);
        }
    }
}

#[test]
fn adding_gammas_preserves_infeasibility() {
    // infeasible with one γ at c = 3; more γ values only add rows
    let base = query(2, 3, 1, 3.0, &[0.1], ConstraintSet::Strengthened);
    assert_eq!(status(&base), VerdictStatus::Infeasible);
    for extra in [vec![0.05], vec![0.05, 0.01], vec![0.2, 0.01, 1e-3]] {
        let mut gammas = vec![0.1];
        gammas.extend(extra);
        let q = query(2, 3, 1, 3.0, &gammas, ConstraintSet::Strengthened);
        assert_eq!(status(&q), VerdictStatus::Infeasible, "{gammas:?}");
    }
    // and the threshold itself only moves up
    let opts = SolverOptions::default();
    let one = max_ruled_out_c(&base, 0.5, 100.0, 0.05, &opts).unwrap().c;
    let three = max_ruled_out_c(&query(2, 3, 1, 0.0, &[0.1, 0.05, 0.01], ConstraintSet::Strengthened), 0.5, 100.0, 0.05, &opts)
        .unwrap()
        .c;
    assert!(three >= one, "{three} < {one}");
}

#[test]
fn verdicts_are_deterministic() {
    let q = query(2, 2, 1, 0.3, &[0.1, 0.05], ConstraintSet::Strengthened);
    let p = assemble(&q).unwrap();
    let first = solve(&p, &SolverOptions::default());
    for _ in 0..3 {
        assert_eq!(solve(&assemble(&q).unwrap(), &SolverOptions::default()), first);
    }
}

#[test]
fn verdict_json_layout() {
    let q = query(1, 1, 0, 1e6, &[0.1], ConstraintSet::PaperLiteral);
    let (p, verdict) = check(&q, &SolverOptions::default()).unwrap();
    let json = verdict.to_json(&p, &q);
    assert_eq!(json["status"], "Feasible");
    assert_eq!(json["constraintSet"], "paper-literal");
    assert_eq!(json["gammas"][0], 0.1);
    assert_eq!(json["witness"]["y_0_0"], 1.0);
    assert!(json["residuals"]["maxEquality"].as_f64().unwrap() <= 1e-7);
}
