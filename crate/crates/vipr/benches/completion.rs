//! Compares sequential and data-parallel completion of weak derivations.

use std::collections::BTreeSet;

use criterion::{criterion_group, criterion_main, Criterion};
use exactcuts_rational::{int, rat, Rational};
use exactcuts_vipr::{
    complete_bounds, complete_bounds_serial, Certificate, Constraint, Derivation, Rtp, Rule,
    Sense, Solution, SparseVec,
};

fn synthetic_precert(num_weak: usize, width: usize) -> Certificate {
    let nvars = width;
    let var_names: Vec<String> = (0..nvars).map(|i| format!("x{i}")).collect();
    let mut constraints = Vec::new();
    // a dense-ish row pile plus one bound pair per variable
    for r in 0..width {
        let coeffs = SparseVec::from_entries(
            (0..nvars).map(|i| (i, rat((((r + i) % 7) as i64) - 3, 1 + ((i % 3) as i64)))),
        );
        constraints.push(Constraint {
            name: format!("r{r}"),
            sense: Sense::Le,
            rhs: int((r % 11) as i64),
            coeffs,
        });
    }
    for i in 0..nvars {
        constraints.push(Constraint {
            name: format!("x{i}_lb"),
            sense: Sense::Ge,
            rhs: int(-10),
            coeffs: SparseVec::from_entries([(i, int(1))]),
        });
        constraints.push(Constraint {
            name: format!("x{i}_ub"),
            sense: Sense::Le,
            rhs: int(10),
            coeffs: SparseVec::from_entries([(i, int(1))]),
        });
    }
    let ncons = constraints.len();

    let mut derivations = Vec::new();
    for k in 0..num_weak {
        let payload: Vec<(usize, Rational)> = (0..width)
            .map(|r| (r, rat(1 + ((k + r) % 5) as i64, 3)))
            .collect();
        let mut exact = SparseVec::new();
        let mut rhs = Rational::from_integer(0.into());
        for (r, m) in &payload {
            exact.add_scaled(&constraints[*r].coeffs, m);
            rhs += m * &constraints[*r].rhs;
        }
        // perturb every coefficient upward so completion has work to do
        let stated = SparseVec::from_entries(
            (0..nvars).map(|i| {
                let base = exact.get(i).cloned().unwrap_or_else(|| int(0));
                (i, base + rat(1, 1 << 20))
            }),
        );
        let stated_rhs = rhs + int(width as i64); // generous slack via the bounds
        derivations.push(Derivation {
            constraint: Constraint {
                name: format!("w{k}"),
                sense: Sense::Le,
                rhs: stated_rhs,
                coeffs: stated,
            },
            rule: Rule::Weak {
                payload,
                exact_coeffs: exact,
            },
        });
    }

    let _ = ncons;
    Certificate {
        var_names,
        integer_vars: BTreeSet::new(),
        objective: SparseVec::new(),
        constraints,
        rtp: Rtp::Range {
            lower: int(0),
            upper: int(0),
        },
        solutions: vec![Solution {
            name: "z".into(),
            objective: int(0),
            values: SparseVec::new(),
        }],
        derivations,
    }
}

fn bench_completion(c: &mut Criterion) {
    let cert = synthetic_precert(256, 24);
    let mut group = c.benchmark_group("complete_bounds");
    group.bench_function("serial", |b| {
        b.iter(|| complete_bounds_serial(std::hint::black_box(&cert)).unwrap())
    });
    group.bench_function("default", |b| {
        b.iter(|| complete_bounds(std::hint::black_box(&cert)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_completion);
criterion_main!(benches);
