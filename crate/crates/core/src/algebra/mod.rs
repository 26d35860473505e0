//! Exact arithmetic: integer polynomials, rationals, truncated power series.

mod poly;
mod series;

pub use num_bigint::BigInt;
pub use num_rational::BigRational as Rational;
pub use poly::{IntPolynomial, PolyParseError};
pub use series::{Coefficient, SeriesError, TruncatedSeries};

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}
