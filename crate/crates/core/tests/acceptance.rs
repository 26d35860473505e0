//! The acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness. The process exits non-zero if any
//! criterion fails, except those listed in `KNOWN_FAILURES` failing in
//! exactly the recorded way.

mod support;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use schur_rings::counting::{
    constant_term_check, omega_layer_odd, omega_odd, omega_odd_by_layers, omega_odd_eval, omega_odd_sequence,
    omega_two, omega_two_by_layers, omega_two_sequence, OddOmegaTable, PrimeSpec,
};
use schur_rings::enumerate::{enumerate_bruteforce, tally_by_subfield, DEFAULT_BUDGET};
use schur_rings::fixtures;
use schur_rings::genfun::{verify_gf_odd, verify_gf_two};
use schur_rings::schur::is_schur_ring;
use schur_rings::sequences::{catalan_triangle, fibonacci, super_catalan_triangle};
use schur_rings::units::{layer_of, TwoPowerField};

/// Criterion 4 compares against a figure with two misprinted cells: the
/// figure's own preceding row sums to 19 at (6,2) and 104 at (8,4), where it
/// prints 9 and 109.
const KNOWN_FAILURES: &[(u8, &str)] = &[(4, "n=6 k=2; n=8 k=4")];

struct Outcome {
    ok: bool,
    detail: String,
    /// Compared against `KNOWN_FAILURES` when `ok` is false.
    signature: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
        signature: String::new(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    let detail = detail.into();
    Outcome {
        ok: false,
        signature: detail.clone(),
        detail,
    }
}

fn verdict(failures: &[String], total: usize) -> Outcome {
    if failures.is_empty() {
        pass(format!("{total}/{total}"))
    } else {
        fail(format!("{}/{total}; {}", total - failures.len(), failures.join("; ")))
    }
}

fn c1() -> Outcome {
    let fig = fixtures::omega_polynomials();
    let failures: Vec<String> = fig
        .iter()
        .filter(|(n, want)| &omega_odd(*n).to_string() != want)
        .map(|(n, _)| format!("n={n}"))
        .collect();
    verdict(&failures, fig.len())
}

fn c2() -> Outcome {
    let table = fixtures::table_odd();
    let failures: Vec<String> = table
        .iter()
        .filter(|(p, k, want)| omega_odd_eval(&PrimeSpec::new(*p, *k).unwrap()).unwrap() != *want)
        .map(|(p, k, _)| format!("p={p} k={k}"))
        .collect();
    verdict(&failures, table.len())
}

fn c3() -> Outcome {
    let expected = [1u64, 3, 10, 37, 151, 657, 2989, 14044, 67626, 332061];
    let fixture = fixtures::table_two();
    let mut failures = Vec::new();
    for (i, want) in expected.iter().enumerate() {
        let n = i + 1;
        let got = omega_two(n);
        if got != BigInt::from(*want) || fixture.get(i) != Some(&(n, got.clone())) {
            failures.push(format!("n={n}: {got}"));
        }
    }
    verdict(&failures, expected.len())
}

fn c4() -> Outcome {
    let rows = fixtures::omega_layers();
    let total = rows.iter().map(|(_, r)| r.len()).sum();
    let mut failures = Vec::new();
    for (n, row) in &rows {
        for (i, want) in row.iter().enumerate() {
            if &omega_layer_odd(*n, i + 1).unwrap().to_string() != want {
                failures.push(format!("n={n} k={}", i + 1));
            }
        }
    }
    let mut out = verdict(&failures, total);
    out.signature = failures.join("; ");
    out
}

fn c5() -> Outcome {
    let mut failures = Vec::new();
    for (name, text, built) in [
        ("catalan", fixtures::CATALAN_TRIANGLE, catalan_triangle(8)),
        (
            "super-catalan",
            fixtures::SUPER_CATALAN_TRIANGLE,
            super_catalan_triangle(8),
        ),
    ] {
        let want = fixtures::triangle(text);
        if want.len() != 8 {
            failures.push(format!("{name}: fixture has {} rows", want.len()));
        }
        for (i, row) in want.iter().enumerate() {
            if built.row(i + 1) != row.as_slice() {
                failures.push(format!("{name} row {}", i + 1));
            }
        }
    }
    verdict(&failures, 16)
}

fn c6() -> Outcome {
    let mut failures = Vec::new();
    let odd = omega_odd_sequence(30);
    let two = omega_two_sequence(30);
    for n in 1..=30 {
        if odd[n] != omega_odd_by_layers(n) {
            failures.push(format!("odd n={n}"));
        }
        if two[n] != omega_two_by_layers(n) {
            failures.push(format!("p=2 n={n}"));
        }
    }
    verdict(&failures, 60)
}

fn c7() -> Outcome {
    let mut failures = Vec::new();
    for report in [verify_gf_odd(30), verify_gf_two(30)] {
        if !report.ok {
            failures.push(format!(
                "{:?} first mismatch at {:?}",
                report.case, report.first_mismatch_index
            ));
        }
    }
    verdict(&failures, 2)
}

fn c8() -> Outcome {
    let failures: Vec<String> = (1..=30)
        .filter(|&n| {
            let (constant, fib) = constant_term_check(n);
            constant != fib || fib != fibonacci(n as u64 - 1)
        })
        .map(|n| format!("n={n}"))
        .collect();
    verdict(&failures, 30)
}

#[rustfmt::skip]
const COUNT_CASES: &[(u64, u32)] = &[
    (3, 1), (3, 2), (3, 3), (3, 4),
    (5, 1), (5, 2), (5, 3),
    (7, 1), (7, 2), (7, 3),
    (11, 1), (11, 2),
    (13, 1), (13, 2),
    (2, 2), (2, 3), (2, 4), (2, 5),
];

fn formula(p: u64, n: u32) -> BigInt {
    if p == 2 {
        omega_two(n as usize)
    } else {
        omega_odd_eval(&PrimeSpec::new(p, n as usize).unwrap()).unwrap()
    }
}

fn c9() -> Outcome {
    let mut failures = Vec::new();
    for &(p, n) in COUNT_CASES {
        let r = support::cached(p, n);
        let want = formula(p, n);
        if BigInt::from(r.count()) != want {
            failures.push(format!("{p}^{n}: {} vs {want}", r.count()));
        }
        if let Some(bad) = r.rings.iter().find(|part| is_schur_ring(part).is_err()) {
            failures.push(format!("{p}^{n}: {bad} fails the axioms"));
        }
    }
    for (p, n, want) in [(3, 4, 92), (5, 3, 58), (7, 3, 113), (2, 5, 151)] {
        if support::cached(p, n).count() != want {
            failures.push(format!("{}: expected {want}", p.pow(n)));
        }
    }
    verdict(&failures, COUNT_CASES.len())
}

fn c10() -> Outcome {
    let mut failures = Vec::new();
    let cases = [
        (2, 2, 3),
        (2, 3, 10),
        (3, 2, 7),
        (3, 1, 2),
        (5, 1, 3),
        (7, 1, 4),
        (11, 1, 4),
        (13, 1, 6),
    ];
    for (p, n, want) in cases {
        let constructive = support::cached(p, n);
        let brute = enumerate_bruteforce(p.pow(n), DEFAULT_BUDGET).unwrap();
        if brute.rings != constructive.rings || brute.count() != want {
            failures.push(format!(
                "Z_{}: brute {} constructive {}",
                p.pow(n),
                brute.count(),
                constructive.count()
            ));
        }
    }
    verdict(&failures, cases.len())
}

fn c11() -> Outcome {
    let mut failures = Vec::new();

    let z16 = tally_by_subfield(support::cached(2, 4)).unwrap();
    let at = |field: TwoPowerField| {
        z16.fields
            .iter()
            .find(|f| f.field.as_deref() == Some(&field.to_string()))
            .map(|f| f.count)
    };
    let got = [
        at(TwoPowerField::Cyclotomic(3)),
        at(TwoPowerField::Plus(3)),
        at(TwoPowerField::Minus(3)),
    ];
    if got != [Some(3), Some(4), Some(4)] {
        failures.push(format!("Z_16 layer 3: {got:?}"));
    }

    let z27 = tally_by_subfield(support::cached(3, 3)).unwrap();
    let layers = OddOmegaTable::build(3);
    let mut total = 0;
    for k in 0..=3 {
        let counts: BTreeSet<usize> = z27.fields.iter().filter(|f| f.layer == k).map(|f| f.count).collect();
        let want = layers.layer(3, k).unwrap().eval(&BigInt::from(2));
        if counts.len() != 1 || BigInt::from(*counts.first().unwrap()) != want {
            failures.push(format!("Z_27 layer {k}: {counts:?} vs {want}"));
        }
        total += z27
            .fields
            .iter()
            .filter(|f| f.layer == k)
            .map(|f| f.count)
            .sum::<usize>();
    }
    if total != 25 {
        failures.push(format!("Z_27 total {total}"));
    }

    for &(p, n) in COUNT_CASES {
        let r = support::cached(p, n);
        for (h, count) in &r.tally {
            if layer_of(h).unwrap() == n as usize && *count != 1 {
                failures.push(format!("{p}^{n}: top-layer field has {count} rings"));
            }
        }
    }
    verdict(&failures, 3)
}

fn c12() -> Outcome {
    let results = support::run_all(128);
    let failures: Vec<String> = results
        .iter()
        .filter_map(|(name, r)| r.as_ref().err().map(|e| format!("{name}: {e}")))
        .collect();
    if failures.is_empty() {
        let parts: Vec<String> = results
            .iter()
            .map(|(name, r)| format!("{name} {}", r.as_ref().unwrap()))
            .collect();
        pass(parts.join(", "))
    } else {
        fail(failures.join("; "))
    }
}

type Criterion = (u8, &'static str, Option<Duration>, fn() -> Outcome);

const CRITERIA: &[Criterion] = &[
    (1, "omega polynomials n = 1..10", Some(Duration::from_secs(1)), c1),
    (2, "odd-prime count table", Some(Duration::from_secs(1)), c2),
    (3, "p = 2 count table", Some(Duration::from_secs(1)), c3),
    (4, "Omega(n,k) figure n <= 8", None, c4),
    (5, "Catalan and super-Catalan triangles", None, c5),
    (6, "dual-path agreement n <= 30", Some(Duration::from_secs(5)), c6),
    (7, "generating functions to order 30", Some(Duration::from_secs(10)), c7),
    (8, "constant term is Fibonacci n = 1..30", None, c8),
    (9, "constructive enumeration counts", Some(Duration::from_secs(120)), c9),
    (
        10,
        "brute force equals constructive",
        Some(Duration::from_secs(60)),
        c10,
    ),
    (11, "omega tallies", None, c11),
    (12, "property suites", None, c12),
];

fn main() -> ExitCode {
    // `cargo test -- <filter>` passes arguments; the suite always runs whole.
    let mut unexpected = 0;
    let mut failed = 0;
    for &(id, name, budget, run) in CRITERIA {
        let start = Instant::now();
        let mut out = run();
        let elapsed = start.elapsed();
        if let Some(b) = budget {
            if elapsed > b {
                out.ok = false;
                out.detail = format!("{} (over the {:.0} s budget)", out.detail, b.as_secs_f64());
                out.signature.clear();
            }
        }
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == id);
        let note = match (out.ok, known) {
            (false, Some((_, sig))) if out.signature == *sig => " [known: misprinted reference cells]",
            (false, _) => {
                unexpected += 1;
                ""
            }
            (true, Some(_)) => {
                unexpected += 1;
                " [listed as a known failure but passed]"
            }
            (true, None) => "",
        };
        if !out.ok {
            failed += 1;
        }
        println!(
            "{} {id:>2} {name}: {} ({:.2} s){note}",
            if out.ok { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64()
        );
    }
    println!(
        "{} passed, {failed} failed, {unexpected} unexpected",
        CRITERIA.len() - failed
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
