//! Reference values shipped as versioned fixture files, and the
//! comparisons behind `schur verify --tables` and `schur verify --figures`.
//!
//! Polynomials are kept in their original spelling; comparison removes
//! whitespace and braces (`x^{10}` becomes `x^10`), which is exactly the
//! canonical form printed by [`IntPolynomial`](crate::algebra::IntPolynomial).

use num_bigint::BigInt;

use crate::counting::{omega_layer_odd, omega_odd, omega_odd_eval, omega_two, PrimeSpec};
use crate::report::CheckLine;
use crate::sequences::{catalan_triangle, super_catalan_triangle, TriangularArray};

pub const TABLE_ODD: &str = include_str!("../fixtures/table3.csv");
pub const TABLE_TWO: &str = include_str!("../fixtures/table4.csv");
pub const OMEGA_POLYNOMIALS: &str = include_str!("../fixtures/omega_polynomials.txt");
pub const OMEGA_LAYERS: &str = include_str!("../fixtures/omega_layers.txt");
pub const CATALAN_TRIANGLE: &str = include_str!("../fixtures/catalan_triangle.txt");
pub const SUPER_CATALAN_TRIANGLE: &str = include_str!("../fixtures/super_catalan_triangle.txt");

fn int(s: &str) -> BigInt {
    s.trim().parse().expect("fixture holds integers")
}

/// Whitespace and braces removed.
pub fn normalize_poly(s: &str) -> String {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != '{' && *c != '}')
        .collect()
}

/// `(p, k, count)` for every cell of the odd-prime table.
pub fn table_odd() -> Vec<(u64, usize, BigInt)> {
    let mut lines = TABLE_ODD.lines();
    let primes: Vec<u64> = lines
        .next()
        .expect("header")
        .split(',')
        .skip(1)
        .map(|p| p.parse().expect("prime header"))
        .collect();
    let mut out = Vec::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let mut cells = line.split(',');
        let k: usize = cells.next().expect("k column").parse().expect("k");
        for (&p, c) in primes.iter().zip(cells) {
            out.push((p, k, int(c)));
        }
    }
    out
}

/// `(n, count)` for `p = 2`.
pub fn table_two() -> Vec<(usize, BigInt)> {
    TABLE_TWO
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (n, c) = l.split_once(',').expect("two columns");
            (n.parse().expect("n"), int(c))
        })
        .collect()
}

fn numbered(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| {
        let (n, rest) = l.split_once(':').expect("numbered line");
        (n.trim().parse().expect("index"), rest)
    })
}

/// `(n, Omega(n))` as normalized text.
pub fn omega_polynomials() -> Vec<(usize, String)> {
    numbered(OMEGA_POLYNOMIALS)
        .map(|(n, p)| (n, normalize_poly(p)))
        .collect()
}

/// `(n, [Omega(n,1), ..., Omega(n,n)])` as normalized text.
pub fn omega_layers() -> Vec<(usize, Vec<String>)> {
    numbered(OMEGA_LAYERS)
        .map(|(n, rest)| (n, rest.split(';').map(normalize_poly).collect()))
        .collect()
}

pub fn triangle(text: &str) -> Vec<Vec<BigInt>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(int).collect())
        .collect()
}

fn compare_triangle(name: &str, text: &str, build: fn(usize) -> TriangularArray) -> CheckLine {
    let expected = triangle(text);
    let computed = build(expected.len());
    let bad: Vec<usize> = expected
        .iter()
        .enumerate()
        .filter(|(i, row)| computed.row(i + 1) != row.as_slice())
        .map(|(i, _)| i + 1)
        .collect();
    let detail = if bad.is_empty() {
        format!("{0}/{0} rows match", expected.len())
    } else {
        format!("rows {bad:?} differ")
    };
    CheckLine::new(name, bad.is_empty(), detail)
}

fn tally(name: &str, total: usize, failures: Vec<String>) -> CheckLine {
    let ok = failures.is_empty();
    let detail = if ok {
        format!("{total}/{total} entries match")
    } else {
        format!(
            "{}/{total} match; first mismatch {}",
            total - failures.len(),
            failures[0]
        )
    };
    CheckLine::new(name, ok, detail)
}

/// The two count tables against the recurrences.
pub fn check_tables() -> Vec<CheckLine> {
    let mut lines = Vec::new();

    let odd = table_odd();
    let failures = odd
        .iter()
        .filter_map(|(p, k, want)| {
            let spec = PrimeSpec::new(*p, *k).ok()?;
            let got = omega_odd_eval(&spec).ok()?;
            (&got != want).then(|| format!("p={p} k={k}: {got} vs {want}"))
        })
        .collect();
    lines.push(tally("odd table", odd.len(), failures));

    let two = table_two();
    let failures = two
        .iter()
        .filter_map(|(n, want)| {
            let got = omega_two(*n);
            (&got != want).then(|| format!("n={n}: {got} vs {want}"))
        })
        .collect();
    lines.push(tally("p=2 table", two.len(), failures));
    lines
}

/// The polynomial figures and the two coefficient triangles.
pub fn check_figures() -> Vec<CheckLine> {
    let mut lines = Vec::new();
    let polys = omega_polynomials();
    let failures = polys
        .iter()
        .filter_map(|(n, want)| {
            let got = omega_odd(*n).to_string();
            (&got != want).then(|| format!("n={n}: {got} vs {want}"))
        })
        .collect();
    lines.push(tally("omega polynomials", polys.len(), failures));

    let layers = omega_layers();
    let total = layers.iter().map(|(_, v)| v.len()).sum();
    let failures = layers
        .iter()
        .flat_map(|(n, row)| {
            row.iter().enumerate().filter_map(move |(i, want)| {
                let got = omega_layer_odd(*n, i + 1).map(|p| p.to_string()).unwrap_or_default();
                (&got != want).then(|| format!("n={n} k={}: {got} vs {want}", i + 1))
            })
        })
        .collect();
    lines.push(tally("omega layers", total, failures));

    lines.push(compare_triangle("catalan triangle", CATALAN_TRIANGLE, catalan_triangle));
    lines.push(compare_triangle(
        "super-catalan triangle",
        SUPER_CATALAN_TRIANGLE,
        super_catalan_triangle,
    ));
    lines
}
