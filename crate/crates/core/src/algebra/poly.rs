//! Dense univariate polynomials in `x` with arbitrary-precision integer
//! coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// A polynomial `c_0 + c_1 x + ... + c_d x^d` over the integers.
///
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector and structural equality is polynomial
/// equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyParseError {
    #[error("empty polynomial string")]
    Empty,
    #[error("malformed term `{0}`")]
    BadTerm(String),
}

impl IntPolynomial {
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn monomial(c: impl Into<BigInt>, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c.into();
        Self::from_coeffs(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    /// Coefficients in ascending degree order.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(One::is_one)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Horner evaluation at an integer point.
    pub fn eval(&self, at: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * at + c)
    }

    pub fn scale(&self, by: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * by).collect())
    }

    /// Exact division in `Z[x]`: `Some(q)` with `self = q * divisor`, or `None`
    /// if no such integer polynomial exists.
    pub fn div_exact(&self, divisor: &IntPolynomial) -> Option<IntPolynomial> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let lead = &divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let top = self.degree().and_then(|d| d.checked_sub(dd))?;
        let mut quot = vec![BigInt::zero(); top + 1];
        for shift in (0..=top).rev() {
            let c = &rem[shift + dd];
            if c.is_zero() {
                continue;
            }
            let (q, r) = c.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &q * d;
            }
            quot[shift] = q;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(Self::from_coeffs(quot))
        } else {
            None
        }
    }
}

impl Zero for IntPolynomial {
    fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for IntPolynomial {
    fn one() -> Self {
        Self::constant(1)
    }
}

impl From<BigInt> for IntPolynomial {
    fn from(c: BigInt) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for IntPolynomial {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl<'a> Add<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl<'a> Sub<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<IntPolynomial> for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a IntPolynomial> for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: &IntPolynomial) -> IntPolynomial {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned_binop!(Add::add, Sub::sub, Mul::mul);

/// Canonical descending-degree form without spaces, e.g. `x^3+2x^2+4x+1`.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if c.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            if deg == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match deg {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{deg}")?,
            }
        }
        Ok(())
    }
}

/// Accepts the canonical form plus whitespace and TeX-style exponent braces
/// (`x^{10}`).
impl FromStr for IntPolynomial {
    type Err = PolyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cleaned: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '{' && *c != '}')
            .collect();
        if cleaned.is_empty() {
            return Err(PolyParseError::Empty);
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in cleaned.char_indices() {
            if i > 0 && (ch == '+' || ch == '-') {
                terms.push(&cleaned[start..i]);
                start = i;
            }
        }
        terms.push(&cleaned[start..]);

        let mut acc = IntPolynomial::zero();
        for term in terms {
            let bad = || PolyParseError::BadTerm(term.to_string());
            let (negative, body) = match term.as_bytes().first() {
                Some(b'-') => (true, &term[1..]),
                Some(b'+') => (false, &term[1..]),
                _ => (false, term),
            };
            if body.is_empty() {
                return Err(bad());
            }
            let (coeff, degree) = match body.find('x') {
                None => (body.parse::<BigInt>().map_err(|_| bad())?, 0),
                Some(pos) => {
                    let coeff = if pos == 0 {
                        BigInt::one()
                    } else {
                        body[..pos].parse::<BigInt>().map_err(|_| bad())?
                    };
                    let rest = &body[pos + 1..];
                    let degree = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .and_then(|e| e.parse::<usize>().ok())
                            .ok_or_else(bad)?
                    };
                    (coeff, degree)
                }
            };
            let coeff = if negative { -coeff } else { coeff };
            acc = acc + IntPolynomial::monomial(coeff, degree);
        }
        Ok(acc)
    }
}
