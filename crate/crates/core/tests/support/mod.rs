//! Checks shared by the property suite and the acceptance runner.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use schur_rings::algebra::Rational;
use schur_rings::enumerate::{enumerate_constructive, EnumerationResult};
use schur_rings::schur::{
    dot_product, group_ring, intersect_rings, is_schur_ring, kernel_member, omega_of_set, orbit_ring, rational_ring,
    reduce_cyclotomic, simple_quantity, symmetric_ring, trivial_ring, AlgebraElement, GroupPartition, SchurRing,
    Violation,
};
use schur_rings::units::{unit_residues, units_group};

/// Constructive enumeration, computed once per `(p, n)` for the whole test binary.
pub fn cached(p: u64, n: u32) -> &'static EnumerationResult {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), &'static EnumerationResult>>> = OnceLock::new();
    let mut map = CACHE.get_or_init(Default::default).lock().unwrap();
    map.entry((p, n))
        .or_insert_with(|| Box::leak(Box::new(enumerate_constructive(p, n).unwrap())))
}

fn part(n: u64, blocks: &[&[u64]]) -> GroupPartition {
    GroupPartition::new(n, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
}

// ---------------------------------------------------------------------------
// span oracle

/// Row-reduced basis over the rationals.
struct Span {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Span {
    fn new() -> Self {
        Span { rows: Vec::new() }
    }

    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let c = v[*pivot].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &c * r;
                }
            }
        }
        v
    }

    fn insert(&mut self, v: &[Rational]) {
        let v = self.reduce(v);
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return;
        };
        let inv = Rational::one() / &v[pivot];
        let v: Vec<Rational> = v.iter().map(|x| x * &inv).collect();
        for (_, row) in self.rows.iter_mut() {
            if !row[pivot].is_zero() {
                let c = row[pivot].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    *x -= &c * r;
                }
            }
        }
        self.rows.push((pivot, v));
    }

    fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }
}

/// The span of the simple quantities contains `1` and `G-bar` and is closed
/// under inversion, pointwise product and convolution. Plain linear algebra,
/// no use of the block structure beyond spanning.
pub fn span_closed(p: &GroupPartition) -> bool {
    let n = p.modulus();
    let gens: Vec<AlgebraElement> = p.blocks().iter().map(|b| simple_quantity(b, n)).collect();
    let mut span = Span::new();
    for g in &gens {
        span.insert(g.coeffs());
    }
    let everything: Vec<u64> = (0..n).collect();
    if !span.contains(AlgebraElement::one(n).coeffs()) || !span.contains(simple_quantity(&everything, n).coeffs()) {
        return false;
    }
    for (i, a) in gens.iter().enumerate() {
        if !span.contains(a.star().coeffs()) {
            return false;
        }
        for b in &gens[i..] {
            if !span.contains(a.product(b).unwrap().coeffs()) || !span.contains(a.hadamard(b).unwrap().coeffs()) {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// strategies

/// Known Schur rings at `n <= 16`: enumerated prime-power rings and a few
/// dot products at composite `n`.
pub fn known_rings() -> &'static [GroupPartition] {
    static KNOWN: OnceLock<Vec<GroupPartition>> = OnceLock::new();
    KNOWN.get_or_init(|| {
        let mut out = Vec::new();
        for (p, n) in [
            (2, 1),
            (2, 2),
            (2, 3),
            (2, 4),
            (3, 1),
            (3, 2),
            (5, 1),
            (7, 1),
            (11, 1),
            (13, 1),
        ] {
            out.extend(cached(p, n).rings.iter().cloned());
        }
        for (a, b) in [((2, 1), (3, 1)), ((2, 2), (3, 1)), ((2, 1), (5, 1)), ((2, 1), (7, 1))] {
            for s in &cached(a.0, a.1).rings {
                for t in &cached(b.0, b.1).rings {
                    let s = SchurRing::unchecked(s.clone());
                    let t = SchurRing::unchecked(t.clone());
                    out.push(dot_product(&s, &t).unwrap().into_partition());
                }
            }
        }
        out
    })
}

fn merge_blocks(p: &GroupPartition, i: usize, j: usize) -> GroupPartition {
    let mut blocks = p.blocks().to_vec();
    let (i, j) = (i % blocks.len(), j % blocks.len());
    if i != j {
        let moved = blocks[j].clone();
        blocks[i].extend(moved);
        blocks.remove(j);
    }
    GroupPartition::new(p.modulus(), blocks).unwrap()
}

/// Random labellings, known rings, and known rings with two blocks merged.
pub fn partitions() -> impl Strategy<Value = GroupPartition> {
    let random = (1usize..=16)
        .prop_flat_map(|n| (Just(n), 1usize..=n.min(5)))
        .prop_flat_map(|(n, k)| prop::collection::vec(0..k, n))
        .prop_map(|labels| GroupPartition::from_labels(&labels));
    let known = any::<prop::sample::Index>().prop_map(|i| i.get(known_rings()).clone());
    let merged = (any::<prop::sample::Index>(), any::<usize>(), any::<usize>())
        .prop_map(|(i, a, b)| merge_blocks(i.get(known_rings()), a, b));
    prop_oneof![random, known, merged]
}

// ---------------------------------------------------------------------------
// properties

pub fn check_circle_product(p: &GroupPartition) -> Result<(), TestCaseError> {
    prop_assert_eq!(is_schur_ring(p).is_ok(), span_closed(p), "{}", p);
    Ok(())
}

pub const INTERSECTION_CASES: &[(u64, u32)] = &[(2, 4), (3, 3), (2, 5), (5, 2), (7, 2)];

pub fn check_intersection(case: usize, i: prop::sample::Index, j: prop::sample::Index) -> Result<(), TestCaseError> {
    let (p, n) = INTERSECTION_CASES[case];
    let r = cached(p, n);
    let s = SchurRing::unchecked(i.get(&r.rings).clone());
    let t = SchurRing::unchecked(j.get(&r.rings).clone());
    let both = intersect_rings(&s, &t).unwrap();
    prop_assert!(is_schur_ring(both.partition()).is_ok());
    prop_assert!(r.contains(both.partition()));
    Ok(())
}

/// `sigma_m` on a reduced cyclotomic vector.
fn sigma(v: &[i64], n: u64, m: u64) -> Vec<i64> {
    let mut out = vec![0i64; n as usize];
    for (e, c) in v.iter().enumerate() {
        out[(e as u64 * m % n) as usize] += c;
    }
    reduce_cyclotomic(n, &out).unwrap()
}

pub const FUNCTORIAL_MODULI: &[u64] = &[8, 9, 16, 25, 27, 32, 49];

/// `omega(sigma_m(C-bar)) = sigma_m(omega(C-bar))`.
pub fn check_functoriality(n: u64, set: &[u64], m: prop::sample::Index) -> Result<(), TestCaseError> {
    let units = unit_residues(n);
    let m = *m.get(&units);
    let moved: Vec<u64> = set.iter().map(|g| g * m % n).collect();
    let lhs = omega_of_set(&moved, n).unwrap();
    let rhs = sigma(&omega_of_set(set, n).unwrap(), n, m);
    prop_assert_eq!(lhs, rhs, "n = {}, m = {}, C = {:?}", n, m, set);
    Ok(())
}

pub fn functoriality_cases() -> impl Strategy<Value = (u64, Vec<u64>, prop::sample::Index)> {
    prop::sample::select(FUNCTORIAL_MODULI)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::btree_set(0..n, 0..n as usize),
                any::<prop::sample::Index>(),
            )
        })
        .prop_map(|(n, set, m)| (n, set.into_iter().collect(), m))
}

pub const KERNEL_MODULI: &[u64] = &[9, 27, 16];

fn prime_of(n: u64) -> u64 {
    (2..=n).find(|d| n.is_multiple_of(*d)).unwrap()
}

/// Either a random subset or a union of cosets of the order-`p` subgroup,
/// possibly with one element toggled.
pub fn kernel_cases() -> impl Strategy<Value = (u64, Vec<u64>)> {
    prop::sample::select(KERNEL_MODULI).prop_flat_map(|n| {
        let p = prime_of(n);
        let q = n / p;
        let random = prop::collection::btree_set(0..n, 0..n as usize).prop_map(|s| s.into_iter().collect::<Vec<_>>());
        let cosets = (
            prop::collection::btree_set(0..q, 0..=q as usize),
            prop::option::of(0..n),
        )
            .prop_map(move |(reps, toggle)| {
                let mut set: std::collections::BTreeSet<u64> =
                    reps.iter().flat_map(|&r| (0..p).map(move |j| r + j * q)).collect();
                if let Some(g) = toggle {
                    if !set.remove(&g) {
                        set.insert(g);
                    }
                }
                set.into_iter().collect::<Vec<_>>()
            });
        (Just(n), prop_oneof![random, cosets])
    })
}

fn is_coset_union(set: &[u64], n: u64) -> bool {
    let q = n / prime_of(n);
    let s: std::collections::BTreeSet<u64> = set.iter().copied().collect();
    s.iter().all(|&g| s.contains(&((g + q) % n)))
}

pub fn check_kernel_coset(n: u64, set: &[u64]) -> Result<(), TestCaseError> {
    let member = kernel_member(&simple_quantity(set, n)).unwrap();
    prop_assert_eq!(member, is_coset_union(set, n), "n = {}, C = {:?}", n, set);
    Ok(())
}

/// Every constructor output passes, and hand-made failures report the
/// expected condition. Returns the number of fixtures checked.
pub fn axiom_fixtures() -> Result<usize, String> {
    let mut checked = 0;
    let mut positive = |name: &str, r: SchurRing| {
        checked += 1;
        is_schur_ring(r.partition()).map_err(|v| format!("{name} over Z_{}: {v}", r.modulus()))
    };
    for n in 1..=30 {
        positive("trivial", trivial_ring(n))?;
        positive("group ring", group_ring(n))?;
        positive("rational", rational_ring(n))?;
        positive("symmetric", symmetric_ring(n))?;
    }
    for (p, k) in [(2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 1)] {
        for h in units_group(p, k).unwrap().all_subgroups() {
            positive("orbit", orbit_ring(&h))?;
        }
    }
    positive("dot", dot_product(&rational_ring(4), &symmetric_ring(9)).unwrap())?;

    let negative: [(GroupPartition, u8); 5] = [
        (part(5, &[&[0, 1], &[2, 3, 4]]), 1),
        (part(5, &[&[0], &[1], &[2, 3, 4]]), 2),
        (part(5, &[&[0], &[1, 2], &[3, 4]]), 3),
        (part(5, &[&[0], &[1, 2], &[3], &[4]]), 2),
        (part(8, &[&[0], &[4], &[1, 7], &[2, 3, 5, 6]]), 3),
    ];
    for (p, want) in negative {
        checked += 1;
        match is_schur_ring(&p) {
            Ok(()) => return Err(format!("{p} passed")),
            Err(v) if v.condition() != want => {
                return Err(format!("{p}: condition {} instead of {want}", v.condition()))
            }
            Err(Violation::ProductNotInSpan {
                count_g, count_g_prime, ..
            }) if count_g == count_g_prime => return Err(format!("{p}: witness counts agree")),
            Err(_) => {}
        }
    }
    Ok(checked)
}

// ---------------------------------------------------------------------------
// standalone runner

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<u32, String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map(|()| cases).map_err(|e| e.to_string())
}

/// Every property with `cases` random cases each, as `(name, outcome)`.
pub fn run_all(cases: u32) -> Vec<(&'static str, Result<String, String>)> {
    vec![
        ("axiom fixtures", axiom_fixtures().map(|k| format!("{k} fixtures"))),
        (
            "circle product",
            run(cases, partitions(), |p| check_circle_product(&p)).map(|k| format!("{k} cases")),
        ),
        (
            "intersection closure",
            run(
                cases,
                (
                    0..INTERSECTION_CASES.len(),
                    any::<prop::sample::Index>(),
                    any::<prop::sample::Index>(),
                ),
                |(c, i, j)| check_intersection(c, i, j),
            )
            .map(|k| format!("{k} cases")),
        ),
        (
            "omega functoriality",
            run(cases, functoriality_cases(), |(n, set, m)| {
                check_functoriality(n, &set, m)
            })
            .map(|k| format!("{k} cases")),
        ),
        (
            "kernel iff coset union",
            run(cases, kernel_cases(), |(n, set)| check_kernel_coset(n, &set)).map(|k| format!("{k} cases")),
        ),
    ]
}
