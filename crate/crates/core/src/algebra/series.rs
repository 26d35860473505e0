//! Power series in `z` truncated at an explicit order.
//!
//! Binary operations take the minimum of the operand orders. Coefficients
//! live in any [`Coefficient`] ring; the two used in this crate are
//! [`BigRational`] and [`IntPolynomial`].

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::IntPolynomial;

/// An exact commutative coefficient ring with a partial exact division.
pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// `Some(q)` with `q * divisor == self`, `None` if not representable.
    fn div_exact(&self, divisor: &Self) -> Option<Self>;
}

impl Coefficient for BigRational {
    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        (!divisor.is_zero()).then(|| self / divisor)
    }
}

impl Coefficient for BigInt {
    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }
}

impl Coefficient for IntPolynomial {
    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        IntPolynomial::div_exact(self, divisor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("square root needs constant term 1")]
    ConstantTermNotOne,
    #[error("denominator has zero constant term")]
    ZeroConstantTerm,
    #[error("cannot divide by z: constant term is nonzero")]
    NotDivisibleByZ,
    #[error("coefficient {index} is not representable in the coefficient domain")]
    InexactDivision { index: usize },
}

/// `sum_{i=0}^{order} coeffs[i] z^i + O(z^{order+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<C> {
    order: usize,
    coeffs: Vec<C>,
}

impl<C: Coefficient> TruncatedSeries<C> {
    /// Pads with zeros or drops coefficients beyond `order`.
    pub fn new(order: usize, coeffs: impl IntoIterator<Item = C>) -> Self {
        let mut coeffs: Vec<C> = coeffs.into_iter().take(order + 1).collect();
        coeffs.resize(order + 1, C::zero());
        TruncatedSeries { order, coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(order, [])
    }

    pub fn constant(c: C, order: usize) -> Self {
        Self::new(order, [c])
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    /// The series `z`.
    pub fn z(order: usize) -> Self {
        Self::new(order, [C::zero(), C::one()])
    }

    /// Builds from a short list of leading coefficients, e.g. `1 - 6z + z^2`.
    pub fn from_slice(coeffs: &[C], order: usize) -> Self {
        Self::new(order, coeffs.iter().cloned())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &C {
        &self.coeffs[i]
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self::new(order, self.coeffs.iter().cloned())
    }

    pub fn scale(&self, by: &C) -> Self {
        Self::new(self.order, self.coeffs.iter().map(|c| c.clone() * by.clone()))
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> TruncatedSeries<D> {
        TruncatedSeries::new(self.order, self.coeffs.iter().map(f))
    }

    /// Index of the first coefficient where `self` and `other` differ,
    /// compared through the smaller order.
    pub fn first_mismatch(&self, other: &Self) -> Option<usize> {
        self.coeffs.iter().zip(&other.coeffs).position(|(a, b)| a != b)
    }

    /// The series `t` with `t * t = self` and `t_0 = 1`, solved coefficient by
    /// coefficient from `2 t_n = s_n - sum_{i=1}^{n-1} t_i t_{n-i}`.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::ConstantTermNotOne);
        }
        let two = C::one() + C::one();
        let mut t: Vec<C> = Vec::with_capacity(self.order + 1);
        t.push(C::one());
        for n in 1..=self.order {
            let mut acc = self.coeffs[n].clone();
            for i in 1..n {
                acc = acc - t[i].clone() * t[n - i].clone();
            }
            let tn = acc.div_exact(&two).ok_or(SeriesError::InexactDivision { index: n })?;
            t.push(tn);
        }
        Ok(TruncatedSeries {
            order: self.order,
            coeffs: t,
        })
    }

    /// `self / den`, requiring an invertible constant term in `den`.
    pub fn div(&self, den: &Self) -> Result<Self, SeriesError> {
        let order = self.order.min(den.order);
        let d0 = &den.coeffs[0];
        if d0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let mut q: Vec<C> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.coeffs[n].clone();
            for i in 1..=n {
                acc = acc - den.coeffs[i].clone() * q[n - i].clone();
            }
            q.push(acc.div_exact(d0).ok_or(SeriesError::InexactDivision { index: n })?);
        }
        Ok(TruncatedSeries { order, coeffs: q })
    }

    /// `self / z`; the result has order one less.
    pub fn div_by_z(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() || self.order == 0 {
            return Err(SeriesError::NotDivisibleByZ);
        }
        Ok(TruncatedSeries {
            order: self.order - 1,
            coeffs: self.coeffs[1..].to_vec(),
        })
    }
}

impl<'a, C: Coefficient> Add<&'a TruncatedSeries<C>> for &'a TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn add(self, rhs: &TruncatedSeries<C>) -> TruncatedSeries<C> {
        let order = self.order.min(rhs.order);
        TruncatedSeries::new(
            order,
            self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.clone() + b.clone()),
        )
    }
}

impl<'a, C: Coefficient> Sub<&'a TruncatedSeries<C>> for &'a TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn sub(self, rhs: &TruncatedSeries<C>) -> TruncatedSeries<C> {
        let order = self.order.min(rhs.order);
        TruncatedSeries::new(
            order,
            self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.clone() - b.clone()),
        )
    }
}

impl<'a, C: Coefficient> Mul<&'a TruncatedSeries<C>> for &'a TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn mul(self, rhs: &TruncatedSeries<C>) -> TruncatedSeries<C> {
        let order = self.order.min(rhs.order);
        let mut out = vec![C::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(order + 1 - i).enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        TruncatedSeries { order, coeffs: out }
    }
}

impl<C: Coefficient> Neg for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn neg(self) -> TruncatedSeries<C> {
        TruncatedSeries::new(self.order, self.coeffs.iter().map(|c| -c.clone()))
    }
}
