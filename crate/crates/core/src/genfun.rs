//! Checks the closed-form generating functions of `Omega(n)` against the
//! recurrences by exact truncated-series arithmetic.
//!
//! Both checks clear denominators: with `F = sum Omega(n) z^n`, the identity
//! `F * D = N` is compared coefficient by coefficient, so no series division
//! over `Z[x]` is ever needed.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{Coefficient, IntPolynomial, Rational, TruncatedSeries};
use crate::counting::{omega_odd_sequence, omega_two_sequence};

pub const DEFAULT_ORDER: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GfCase {
    Odd,
    Two,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GfReport {
    pub case: GfCase,
    pub order: usize,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch_index: Option<usize>,
}

fn radical<C: Coefficient>(lin: C, quad: C, order: usize) -> TruncatedSeries<C> {
    TruncatedSeries::new(order, [C::one(), lin, quad])
        .sqrt()
        .expect("radicand has constant term 1 and integral root")
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `F(z) * D(z) = 2(1 - z)` with
/// `D = -2z^2 + (x-2)z - (x-2) + x(1-z) sqrt(1-4z)`, coefficients in `Z[x]`.
pub fn verify_gf_odd(order: usize) -> GfReport {
    verify_gf_odd_with(&omega_odd_sequence(order), order)
}

/// Same check against a caller-supplied sequence `Omega(0..=order)`.
pub fn verify_gf_odd_with(omegas: &[IntPolynomial], order: usize) -> GfReport {
    assert!(omegas.len() > order, "need Omega(0..={order})");
    type P = IntPolynomial;
    let x = P::x();
    let x_minus_two = &x - &P::constant(2);
    let f = TruncatedSeries::new(order, omegas.iter().cloned());
    let root = radical(P::constant(-4), P::zero(), order);
    let one_minus_z = TruncatedSeries::new(order, [P::one(), P::constant(-1)]);
    let polynomial_part = TruncatedSeries::new(order, [-x_minus_two.clone(), x_minus_two, P::constant(-2)]);
    let den = &polynomial_part + &(&one_minus_z * &root).scale(&x);
    let num = one_minus_z.scale(&P::constant(2));
    let lhs = &f * &den;
    GfReport {
        case: GfCase::Odd,
        order,
        ok: lhs == num,
        first_mismatch_index: lhs.first_mismatch(&num),
    }
}

/// `F(z) * D(z) = N(z)` for `p = 2`, where with
/// `A = 2 - z - sqrt(1-4z) - sqrt(1-6z+z^2)`:
/// `N = A(1-z) + 2(z^2-1)` and `D = A(1-z-z^2) + 2(z^3+z^2+z-1)`.
pub fn verify_gf_two(order: usize) -> GfReport {
    verify_gf_two_with(&omega_two_sequence(order), order)
}

pub fn verify_gf_two_with(omegas: &[BigInt], order: usize) -> GfReport {
    assert!(omegas.len() > order, "need Omega(0..={order})");
    let s = |cs: &[i64]| TruncatedSeries::<Rational>::new(order, cs.iter().map(|&c| rat(c)));
    let f = TruncatedSeries::new(order, omegas.iter().map(|c| Rational::from_integer(c.clone())));
    let r4 = radical(rat(-4), rat(0), order);
    let r6 = radical(rat(-6), rat(1), order);
    let a = &(&s(&[2, -1]) - &r4) - &r6;
    let num = &(&a * &s(&[1, -1])) + &s(&[-2, 0, 2]);
    let den = &(&a * &s(&[1, -1, -1])) + &s(&[-2, 2, 2, 2]);
    let lhs = &f * &den;
    GfReport {
        case: GfCase::Two,
        order,
        ok: lhs == num,
        first_mismatch_index: lhs.first_mismatch(&num),
    }
}

/// `C(z) = (1 - sqrt(1-4z)) / (2z)` through `z^order`.
pub fn expand_catalan_gf(order: usize) -> TruncatedSeries<Rational> {
    let root = radical(rat(-4), rat(0), order + 1);
    halve_over_z(&(&TruncatedSeries::one(order + 1) - &root))
}

/// `S(z) = (1 - z - sqrt(1-6z+z^2)) / (2z)` through `z^order`.
pub fn expand_schroder_gf(order: usize) -> TruncatedSeries<Rational> {
    let root = radical(rat(-6), rat(1), order + 1);
    let lead = TruncatedSeries::new(order + 1, [rat(1), rat(-1)]);
    halve_over_z(&(&lead - &root))
}

fn halve_over_z(s: &TruncatedSeries<Rational>) -> TruncatedSeries<Rational> {
    s.div_by_z()
        .expect("numerator vanishes at z = 0")
        .scale(&Rational::new(BigInt::one(), BigInt::from(2)))
}
