//! Catalan and Schröder numbers, the two coefficient triangles that produce
//! them from the layer recurrences, and Fibonacci numbers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::binomial;

/// A triangle whose row `k` (for `k >= 1`) holds columns `j = 0..k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularArray {
    rows: Vec<Vec<BigInt>>,
}

impl TriangularArray {
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Row `k`, one-based as in the reference arrays.
    pub fn row(&self, k: usize) -> &[BigInt] {
        &self.rows[k - 1]
    }

    /// Entry in column `j`, row `k`.
    pub fn get(&self, j: usize, k: usize) -> &BigInt {
        &self.rows[k - 1][j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.rows.iter().map(Vec::as_slice)
    }

    /// Last entry of row `k`.
    pub fn diagonal(&self, k: usize) -> &BigInt {
        self.get(k - 1, k)
    }
}

/// `C(2i, i) / (i + 1)`.
pub fn catalan(i: u64) -> BigInt {
    binomial(2 * i, i) / (i + 1)
}

/// `c_0, ..., c_{count-1}`.
pub fn catalan_numbers(count: usize) -> Vec<BigInt> {
    (0..count as u64).map(catalan).collect()
}

/// The triangle `c_{jk}` with `c_{0k} = 1`, interior cells
/// `c_{jk} = c_{(j-1)k} + c_{j(k-1)}` and the diagonal cell of row `k`
/// closed by the summed form `c_{jk} = sum_{l=j}^{k} c_{(j-1)l}`.
pub fn catalan_triangle(rows: usize) -> TriangularArray {
    let mut t: Vec<Vec<BigInt>> = Vec::with_capacity(rows);
    for k in 1..=rows {
        let mut row = Vec::with_capacity(k);
        row.push(BigInt::one());
        for j in 1..k {
            let cell = if j < k - 1 {
                &row[j - 1] + &t[k - 2][j]
            } else {
                // j = k - 1: sum over column j-1 from row j through row k.
                let mut acc: BigInt = (j..k).map(|l| &t[l - 1][j - 1]).sum();
                acc += &row[j - 1];
                acc
            };
            row.push(cell);
        }
        t.push(row);
    }
    TriangularArray { rows: t }
}

/// The triangle `s_{jk}` with `s_{0k} = 1`, interior cells
/// `s_{jk} = s_{(j-1)k} + s_{j(k-1)} + s_{(j-1)(k-1)}` and the diagonal cell
/// `s_{jk} = s_{(j-1)k} + 2 sum_{l=j}^{k-1} s_{(j-1)l}`.
pub fn super_catalan_triangle(rows: usize) -> TriangularArray {
    let mut t: Vec<Vec<BigInt>> = Vec::with_capacity(rows);
    for k in 1..=rows {
        let mut row = Vec::with_capacity(k);
        row.push(BigInt::one());
        for j in 1..k {
            let cell = if j < k - 1 {
                &row[j - 1] + &t[k - 2][j] + &t[k - 2][j - 1]
            } else {
                let tail: BigInt = (j..k).map(|l| &t[l - 1][j - 1]).sum();
                &row[j - 1] + tail * 2
            };
            row.push(cell);
        }
        t.push(row);
    }
    TriangularArray { rows: t }
}

/// `s_0, ..., s_{count-1}`: `s_0 = 1` and `s_i = 2 s_{(i-1)i}`, twice the
/// last entry of row `i` of the super-Catalan triangle.
pub fn schroder_numbers(count: usize) -> Vec<BigInt> {
    if count == 0 {
        return Vec::new();
    }
    let tri = super_catalan_triangle(count - 1);
    std::iter::once(BigInt::one())
        .chain((1..count).map(|i| tri.diagonal(i) * 2))
        .collect()
}

/// The `i`-th large Schröder number.
pub fn schroder(i: u64) -> BigInt {
    schroder_numbers(i as usize + 1).pop().expect("non-empty")
}

/// `F_0 = 0, F_1 = 1`.
pub fn fibonacci(n: u64) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}
