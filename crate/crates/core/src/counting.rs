//! The layer recurrences for `Omega(n)`, the number of Schur rings over
//! `Z_{p^n}`, and `Omega(n, k)`, the number of those mapping onto the
//! cyclotomic field `K_{p^k}` under `omega`.
//!
//! For odd `p` everything is a polynomial in `x = d(p - 1)`; per-prime counts
//! are evaluations. For `p = 2` the values are plain integers and a third
//! family `Omega_s(n, k)` counts rings mapping onto `Q(zeta_{2^k} + zeta_{2^k}^{-1})`.
//!
//! Each total is available along two routes that share no code: summing the
//! layer table field by field, and the closed recurrence with Catalan (and,
//! for `p = 2`, Schröder) coefficients.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{binomial, IntPolynomial};
use crate::sequences::{catalan_numbers, fibonacci, schroder_numbers};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("layer {k} is out of range for exponent {n}")]
    LayerOutOfRange { n: usize, k: usize },
    #[error("p = 2 has no first layer")]
    NoFirstLayer,
    #[error("closed form for Omega(n, n-{offset}) needs n >= {min}, got {n}")]
    ClosedFormUnavailable { n: usize, offset: usize, min: usize },
}

pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Number of positive divisors.
pub fn divisor_count(m: u64) -> u64 {
    (1..=m).take_while(|d| d * d <= m).fold(0, |acc, d| {
        if !m.is_multiple_of(d) {
            acc
        } else if d * d == m {
            acc + 1
        } else {
            acc + 2
        }
    })
}

/// A prime, an exponent, and `x = d(p - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeSpec {
    p: u64,
    n: usize,
    x: u64,
}

impl PrimeSpec {
    pub fn new(p: u64, n: usize) -> Result<Self, CountError> {
        if !is_prime(p) {
            return Err(CountError::NotPrime(p));
        }
        Ok(PrimeSpec {
            p,
            n,
            x: divisor_count(p - 1),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> u64 {
        self.x
    }
}

// ---------------------------------------------------------------------------
// odd p

/// `Omega(n)` and `Omega(n, k)` for odd `p`, `0 <= k <= n <= n_max`, filled
/// from the layer recurrences and summed over the fields of each layer.
#[derive(Debug, Clone)]
pub struct OddOmegaTable {
    totals: Vec<IntPolynomial>,
    layers: Vec<Vec<IntPolynomial>>,
}

impl OddOmegaTable {
    pub fn build(n_max: usize) -> Self {
        let x = IntPolynomial::x();
        let x_minus_one = &x - &IntPolynomial::one();
        let mut totals = vec![IntPolynomial::one()];
        let mut layers = vec![vec![IntPolynomial::one()]];

        for n in 1..=n_max {
            let mut row = Vec::with_capacity(n + 1);
            for k in 0..=n {
                let cell = if k == n {
                    IntPolynomial::one()
                } else if k == 0 {
                    totals.iter().fold(IntPolynomial::zero(), |a, t| a + t)
                } else if k == 1 {
                    totals[n - 1].clone()
                } else {
                    layers[n - 1][k - 1..n].iter().fold(IntPolynomial::zero(), |a, t| a + t)
                };
                row.push(cell);
            }
            let upper = row[2.min(n + 1)..].iter().fold(IntPolynomial::zero(), |a, t| a + t);
            let total = &row[0] + &(&x_minus_one * &row[1]) + &x * &upper;
            totals.push(total);
            layers.push(row);
        }
        OddOmegaTable { totals, layers }
    }

    pub fn n_max(&self) -> usize {
        self.totals.len() - 1
    }

    pub fn total(&self, n: usize) -> &IntPolynomial {
        &self.totals[n]
    }

    pub fn layer(&self, n: usize, k: usize) -> Result<&IntPolynomial, CountError> {
        self.layers
            .get(n)
            .and_then(|row| row.get(k))
            .ok_or(CountError::LayerOutOfRange { n, k })
    }
}

/// `Omega(n)` for odd `p` from
/// `Omega(n) = x Omega(n-1) + sum_{k=2}^{n} (c_{k-1} x + 1) Omega(n-k)`.
pub fn omega_odd_sequence(n_max: usize) -> Vec<IntPolynomial> {
    let cat = catalan_numbers(n_max.max(1));
    let x = IntPolynomial::x();
    let mut out = vec![IntPolynomial::one()];
    for n in 1..=n_max {
        let mut acc = &x * &out[n - 1];
        for k in 2..=n {
            let weight = IntPolynomial::from_coeffs(vec![BigInt::one(), cat[k - 1].clone()]);
            acc = acc + &weight * &out[n - k];
        }
        out.push(acc);
    }
    out
}

/// `Omega(n)` for odd `p` via the Catalan recurrence.
pub fn omega_odd(n: usize) -> IntPolynomial {
    omega_odd_sequence(n).pop().expect("non-empty")
}

/// `Omega(n)` for odd `p` via the per-field sum over the layer table.
pub fn omega_odd_by_layers(n: usize) -> IntPolynomial {
    OddOmegaTable::build(n).total(n).clone()
}

pub fn omega_layer_odd(n: usize, k: usize) -> Result<IntPolynomial, CountError> {
    if k > n {
        return Err(CountError::LayerOutOfRange { n, k });
    }
    OddOmegaTable::build(n).layer(n, k).cloned()
}

/// Closed forms for `Omega(n, n - offset)`, `offset` in `1..=3`.
pub fn omega_layer_closed_form(n: usize, offset: usize) -> Result<IntPolynomial, CountError> {
    let min = offset + 1;
    if !(1..=3).contains(&offset) || n < min {
        return Err(CountError::ClosedFormUnavailable { n, offset, min });
    }
    let nb = n as u64;
    let m = BigInt::from(n) - 2;
    let c2 = binomial(nb - 1, 2);
    let coeffs = match offset {
        1 => vec![m, BigInt::one()],
        2 => vec![c2, m, BigInt::one()],
        _ => vec![binomial(nb, 3) - 3, c2 + 1, m, BigInt::one()],
    };
    Ok(IntPolynomial::from_coeffs(coeffs))
}

/// Every closed form that applies at `n`, as `(k, Omega(n, k))`.
pub fn omega_layer_closed_forms(n: usize) -> Vec<(usize, IntPolynomial)> {
    (1..=3)
        .filter_map(|offset| omega_layer_closed_form(n, offset).ok().map(|poly| (n - offset, poly)))
        .collect()
}

/// The number of Schur rings over `Z_{p^n}` for an odd prime `p`.
pub fn omega_odd_eval(spec: &PrimeSpec) -> Result<BigInt, CountError> {
    if spec.p == 2 {
        return Err(CountError::NotOddPrime(spec.p));
    }
    Ok(omega_odd(spec.n).eval(&BigInt::from(spec.x)))
}

/// `(Omega(n)(0), F_{n-1})`; the two agree for every `n >= 1`.
pub fn constant_term_check(n: usize) -> (BigInt, BigInt) {
    assert!(n >= 1, "constant_term_check needs n >= 1");
    (omega_odd(n).coeff(0), fibonacci(n as u64 - 1))
}

// ---------------------------------------------------------------------------
// p = 2

/// `Omega(n)`, `Omega(n, k)` and `Omega_s(n, k)` for `p = 2`.
///
/// `layer(n, 1)` is rejected since `L_2 = L_1`; `layer` is defined for
/// `k in {0} ∪ 2..=n` and `sym` for `k in 3..=n`.
#[derive(Debug, Clone)]
pub struct TwoOmegaTable {
    totals: Vec<BigInt>,
    layers: Vec<Vec<BigInt>>,
    sym: Vec<Vec<BigInt>>,
}

impl TwoOmegaTable {
    pub fn build(n_max: usize) -> Self {
        let one = BigInt::one;
        let mut totals = vec![one(), one()];
        // rows 0 and 1 hold only the rational layer
        let mut layers = vec![vec![one()], vec![one()]];
        let mut sym: Vec<Vec<BigInt>> = vec![Vec::new(), Vec::new()];

        for n in 2..=n_max {
            let mut row = vec![BigInt::zero(); n + 1];
            row[0] = totals.iter().sum();
            row[2] = if n == 2 {
                one()
            } else {
                &totals[n - 1] - &layers[n - 2][0]
            };
            for k in 3..=n {
                row[k] = if k == n {
                    one()
                } else {
                    layers[n - 1][k - 1..n].iter().sum()
                };
            }

            let mut srow = vec![BigInt::zero(); n + 1];
            for k in 3..=n {
                srow[k] = if k == n {
                    one()
                } else {
                    let tail: BigInt = sym[n - 1][k.max(3)..n].iter().sum();
                    let head = if k == 3 { &layers[n - 1][2] } else { &sym[n - 1][k - 1] };
                    head + tail * 2
                };
            }

            let upper: BigInt = (3..=n).map(|k| &row[k] + &srow[k] * 2).sum();
            totals.push(&row[0] + &row[2] + upper);
            layers.push(row);
            sym.push(srow);
        }
        if n_max < 1 {
            totals.truncate(n_max + 1);
            layers.truncate(n_max + 1);
            sym.truncate(n_max + 1);
        }
        TwoOmegaTable { totals, layers, sym }
    }

    pub fn n_max(&self) -> usize {
        self.totals.len() - 1
    }

    pub fn total(&self, n: usize) -> &BigInt {
        &self.totals[n]
    }

    pub fn layer(&self, n: usize, k: usize) -> Result<&BigInt, CountError> {
        if k == 1 {
            return Err(CountError::NoFirstLayer);
        }
        self.layers
            .get(n)
            .and_then(|row| row.get(k))
            .ok_or(CountError::LayerOutOfRange { n, k })
    }

    pub fn sym(&self, n: usize, k: usize) -> Result<&BigInt, CountError> {
        if k < 3 {
            return Err(CountError::LayerOutOfRange { n, k });
        }
        self.sym
            .get(n)
            .and_then(|row| row.get(k))
            .ok_or(CountError::LayerOutOfRange { n, k })
    }
}

pub fn omega_two_layer(n: usize, k: usize) -> Result<BigInt, CountError> {
    if k == 1 {
        return Err(CountError::NoFirstLayer);
    }
    if n < 2 || k > n {
        return Err(CountError::LayerOutOfRange { n, k });
    }
    TwoOmegaTable::build(n).layer(n, k).cloned()
}

pub fn omega_two_s(n: usize, k: usize) -> Result<BigInt, CountError> {
    if k < 3 || k > n {
        return Err(CountError::LayerOutOfRange { n, k });
    }
    TwoOmegaTable::build(n).sym(n, k).cloned()
}

/// `Omega(n)` for `p = 2` from the Catalan/Schröder recurrence, with
/// `Omega(-1) = 0` and the seeds `1, 1` at `n = 0, 1`.
pub fn omega_two_sequence(n_max: usize) -> Vec<BigInt> {
    let cat = catalan_numbers(n_max + 1);
    let sch = schroder_numbers(n_max + 1);
    let cs: Vec<BigInt> = cat.iter().zip(&sch).map(|(c, s)| c + s).collect();
    let mut out: Vec<BigInt> = vec![BigInt::one(), BigInt::one()];
    out.truncate(n_max + 1);
    let at = |v: &[BigInt], i: isize| -> BigInt {
        if i < 0 {
            BigInt::zero()
        } else {
            v[i as usize].clone()
        }
    };
    for n in 2..=n_max {
        let ni = n as isize;
        let mut acc = (1..=3).map(|k| at(&out, ni - k) * (1i64 << k)).sum::<BigInt>() - &cs[n - 1];
        for k in 4..=n {
            let prefix: BigInt = cs[1..=k - 3].iter().sum();
            acc += (&cs[k - 1] - prefix) * &out[n - k];
        }
        out.push(acc);
    }
    out
}

pub fn omega_two(n: usize) -> BigInt {
    omega_two_sequence(n).pop().expect("non-empty")
}

pub fn omega_two_by_layers(n: usize) -> BigInt {
    TwoOmegaTable::build(n).total(n).clone()
}
