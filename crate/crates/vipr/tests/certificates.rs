//! Golden certificates: a hand-transcribed infeasibility proof, tampering,
//! and completion of weak derivations.

use exactcuts_rational::rat;
use exactcuts_vipr::{
    check, complete_bounds, parse_certificate, CompletionError, Rule, Verdict,
};

/// Two integer variables, three rows, proven infeasible by two nested splits.
const INFEASIBLE_GOLDEN: &str = "\
VER 1.1
VAR 2
x1
x2
INT 2 0 1
OBJ min
0
CON 3
C1 >= 1 2 0 2 1 3
C2 <= 2 2 0 3 1 -4
C3 <= 3 2 0 -1 1 6
RTP infeas
SOL 0
DER 11
3 A1 <= 0 1 0 1 asm
4 A2 >= 1 1 0 1 asm
5 A3 <= 0 1 1 1 asm
6 C4 >= 1 0 lin 3 0 1 3 -2 5 -3
7 A4 >= 1 1 1 1 asm
8 C5 >= 1 0 lin 3 2 -1/3 3 -1/3 7 2
9 C6 >= 1/4 1 1 1 lin 2 1 -1/4 4 3/4
10 C7 >= 1 1 1 1 rnd 1 9 1
11 C8 >= 1 0 lin 3 1 -1/3 2 -1 10 14/3
12 C9 >= 1 0 uns 6 5 8 7
13 C10 >= 1 0 uns 11 4 12 3
";

#[test]
fn golden_infeasibility_certificate_is_accepted() {
    let cert = parse_certificate(INFEASIBLE_GOLDEN).unwrap();
    assert_eq!(check(&cert), Verdict::Accepted);
}

#[test]
fn golden_certificate_round_trips() {
    let cert = parse_certificate(INFEASIBLE_GOLDEN).unwrap();
    let reparsed = parse_certificate(&cert.to_string()).unwrap();
    assert_eq!(cert, reparsed);
}

#[test]
fn tampered_rounding_conclusion_is_rejected_at_that_line() {
    let tampered = INFEASIBLE_GOLDEN.replace("10 C7 >= 1 1 1 1 rnd", "10 C7 >= 0 1 1 1 rnd");
    let cert = parse_certificate(&tampered).unwrap();
    match check(&cert) {
        Verdict::Rejected { index, reason } => {
            assert_eq!(index, Some(10), "{reason}");
            assert!(reason.contains("rounded conclusion"), "{reason}");
        }
        Verdict::Accepted => panic!("tampered certificate accepted"),
    }
}

#[test]
fn tampered_multiplier_is_rejected() {
    let tampered = INFEASIBLE_GOLDEN.replace("lin 3 1 -1/3 2 -1 10 14/3", "lin 3 1 -1/3 2 -1 10 14/5");
    let cert = parse_certificate(&tampered).unwrap();
    assert!(!check(&cert).is_accepted());
}

#[test]
fn undischarged_assumption_is_rejected() {
    let truncated = INFEASIBLE_GOLDEN
        .replace("DER 11", "DER 10")
        .replace("13 C10 >= 1 0 uns 11 4 12 3\n", "");
    let cert = parse_certificate(&truncated).unwrap();
    match check(&cert) {
        Verdict::Rejected { reason, .. } => {
            assert!(reason.contains("undischarged"), "{reason}")
        }
        Verdict::Accepted => panic!("accepted with live assumptions"),
    }
}

#[test]
fn weakening_a_lin_rhs_keeps_acceptance_only_if_claim_still_proven() {
    // C6 states x2 >= 1/4; weakening the statement to x2 >= 1/5 is still a
    // valid (dominated) aggregation, and the rounding step still concludes
    // x2 >= 1, so the certificate stays accepted.
    let weakened = INFEASIBLE_GOLDEN.replace("9 C6 >= 1/4 1 1 1", "9 C6 >= 1/5 1 1 1");
    let cert = parse_certificate(&weakened).unwrap();
    assert_eq!(check(&cert), Verdict::Accepted);
}

/// Pre-certificate with one weak derivation: the aggregation of one third of
/// the first row plus the second gives (14/3) x2 <= 11/3, stated as 5 x2 <= 5.
const WEAK_PRECERT: &str = "\
VER 1.1
VAR 2
x1
x2
INT 2 0 1
OBJ min
0
CON 3
C1 <= 2 2 0 3 1 -4
C2 <= 3 2 0 -1 1 6
B3 <= 4 1 1 1
RTP infeas
SOL 0
DER 1
3 C5 <= 5 1 1 5 weak 2 0 1/3 1 1 1 1 14/3
";

#[test]
fn checker_rejects_weak_records() {
    let cert = parse_certificate(WEAK_PRECERT).unwrap();
    match check(&cert) {
        Verdict::Rejected { index, reason } => {
            assert_eq!(index, Some(3));
            assert!(reason.contains("weak record"), "{reason}");
        }
        Verdict::Accepted => panic!("weak record accepted by strict checker"),
    }
}

#[test]
fn completion_adds_the_bound_multiplier() {
    let cert = parse_certificate(WEAK_PRECERT).unwrap();
    let done = complete_bounds(&cert).unwrap();
    match &done.derivations[0].rule {
        Rule::Lin(payload) => {
            assert_eq!(
                payload.as_slice(),
                &[(0, rat(1, 3)), (1, rat(1, 1)), (2, rat(1, 3))]
            );
        }
        other => panic!("expected lin after completion, got {other:?}"),
    }
    // conclusions unchanged
    assert_eq!(done.derivations[0].constraint, cert.derivations[0].constraint);
}

#[test]
fn completion_without_weak_records_is_identity() {
    let cert = parse_certificate(INFEASIBLE_GOLDEN).unwrap();
    let done = complete_bounds(&cert).unwrap();
    assert_eq!(cert, done);
    assert_eq!(cert.to_string(), done.to_string());
}

#[test]
fn completion_fails_without_the_needed_bound() {
    // Same weak record but the upper bound row on x2 is gone.
    let precert = WEAK_PRECERT
        .replace("CON 3", "CON 2")
        .replace("B3 <= 4 1 1 1\n", "")
        .replace(
            "DER 1\n3 C5 <= 5 1 1 5 weak 2 0 1/3 1 1 1 1 14/3",
            "DER 1\n2 C5 <= 5 1 1 5 weak 2 0 1/3 1 1 1 1 14/3",
        );
    let cert = parse_certificate(&precert).unwrap();
    match complete_bounds(&cert) {
        Err(CompletionError::MissingBound { index, var, side }) => {
            assert_eq!(index, 2);
            assert_eq!(var, "x2");
            assert_eq!(side, "upper");
        }
        other => panic!("expected missing-bound failure, got {other:?}"),
    }
}

#[test]
fn parse_errors_carry_line_numbers() {
    let bad = INFEASIBLE_GOLDEN.replace("C2 <= 2 2 0 3 1 -4", "C2 <= 2 2 0 3 1 x");
    let err = parse_certificate(&bad).unwrap_err();
    assert!(err.to_string().contains("line 10"), "{err}");
}
