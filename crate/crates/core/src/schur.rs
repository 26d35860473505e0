//! Schur rings over cyclic groups `Z_n`.
//!
//! Group elements are residues `0..n` with `0` the identity, so the
//! multiplicative `z^g` of the group algebra is residue `g` here. A Schur
//! ring is identified with its partition into primitive sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Rational;
use crate::units::{prime_power, unit_residues, units_group, SubgroupOfUnits};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchurError {
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("malformed partition: {0}")]
    MalformedPartition(String),
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("divisibility violated: {0}")]
    Divisibility(String),
    #[error("incompatible wedge factors: {0}")]
    Incompatible(String),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
}

/// An element `sum a_g z^g` of `Q[Z_n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    modulus: u64,
    coeffs: Vec<Rational>,
}

impl AlgebraElement {
    pub fn new(modulus: u64, coeffs: Vec<Rational>) -> Result<Self, SchurError> {
        if modulus == 0 || coeffs.len() as u64 != modulus {
            return Err(SchurError::MalformedPartition(format!(
                "expected {modulus} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(AlgebraElement { modulus, coeffs })
    }

    pub fn from_ints(modulus: u64, coeffs: &[i64]) -> Result<Self, SchurError> {
        Self::new(
            modulus,
            coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect(),
        )
    }

    pub fn zero(modulus: u64) -> Self {
        AlgebraElement {
            modulus,
            coeffs: vec![Rational::zero(); modulus as usize],
        }
    }

    /// `z^g`.
    pub fn basis(modulus: u64, g: u64) -> Self {
        let mut e = Self::zero(modulus);
        e.coeffs[(g % modulus) as usize] = Rational::one();
        e
    }

    pub fn one(modulus: u64) -> Self {
        Self::basis(modulus, 0)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, g: u64) -> &Rational {
        &self.coeffs[(g % self.modulus) as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) -> Result<(), SchurError> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(SchurError::ModulusMismatch(self.modulus, other.modulus))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SchurError> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(AlgebraElement {
            modulus: self.modulus,
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SchurError> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(AlgebraElement {
            modulus: self.modulus,
            coeffs,
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        AlgebraElement {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Inverts every group element: `z^g -> z^{-g}`.
    pub fn star(&self) -> Self {
        let n = self.modulus as usize;
        let coeffs = (0..n).map(|g| self.coeffs[(n - g) % n].clone()).collect();
        AlgebraElement {
            modulus: self.modulus,
            coeffs,
        }
    }

    /// Pointwise product of coefficients.
    pub fn hadamard(&self, other: &Self) -> Result<Self, SchurError> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).collect();
        Ok(AlgebraElement {
            modulus: self.modulus,
            coeffs,
        })
    }

    /// Convolution over `Z_n`.
    pub fn product(&self, other: &Self) -> Result<Self, SchurError> {
        self.check(other)?;
        let n = self.modulus as usize;
        let mut out = Self::zero(self.modulus);
        for (a, ca) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, cb) in other.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                out.coeffs[(a + b) % n] += ca * cb;
            }
        }
        Ok(out)
    }

    /// `sigma_m`: `z^g -> z^{mg}`.
    pub fn scale_exponents(&self, m: u64) -> Self {
        let n = self.modulus;
        let mut out = Self::zero(n);
        for (g, c) in self.coeffs.iter().enumerate() {
            out.coeffs[(g as u64 * m % n) as usize] += c;
        }
        out
    }
}

/// `C-bar`, the sum of the elements of `set`.
pub fn simple_quantity(set: &[u64], modulus: u64) -> AlgebraElement {
    let mut e = AlgebraElement::zero(modulus);
    for &g in set {
        e.coeffs[(g % modulus) as usize] += Rational::one();
    }
    e
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (g, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "z^{g}")?;
            } else {
                write!(f, "{c}*z^{g}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A partition of `Z_n` in canonical form: blocks sorted ascending, blocks
/// ordered by least element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPartition")]
pub struct GroupPartition {
    modulus: u64,
    blocks: Vec<Vec<u64>>,
}

#[derive(Deserialize)]
struct RawPartition {
    modulus: u64,
    blocks: Vec<Vec<u64>>,
}

impl TryFrom<RawPartition> for GroupPartition {
    type Error = SchurError;

    fn try_from(raw: RawPartition) -> Result<Self, SchurError> {
        GroupPartition::new(raw.modulus, raw.blocks)
    }
}

impl GroupPartition {
    /// Validates and canonicalizes.
    pub fn new(modulus: u64, blocks: Vec<Vec<u64>>) -> Result<Self, SchurError> {
        let bad = |msg: String| Err(SchurError::MalformedPartition(msg));
        if modulus == 0 {
            return bad("modulus must be positive".into());
        }
        let mut seen = vec![false; modulus as usize];
        let mut canon = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            if b.is_empty() {
                return bad("empty block".into());
            }
            b.sort_unstable();
            for &g in &b {
                if g >= modulus {
                    return bad(format!("residue {g} out of range for modulus {modulus}"));
                }
                if std::mem::replace(&mut seen[g as usize], true) {
                    return bad(format!("residue {g} appears twice"));
                }
            }
            canon.push(b);
        }
        if let Some(g) = seen.iter().position(|s| !s) {
            return bad(format!("residue {g} is not covered"));
        }
        canon.sort_unstable_by_key(|b| b[0]);
        Ok(GroupPartition { modulus, blocks: canon })
    }

    /// Blocks from a labelling `g -> label`.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut by_label: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        for (g, &l) in labels.iter().enumerate() {
            by_label.entry(l).or_default().push(g as u64);
        }
        let mut blocks: Vec<Vec<u64>> = by_label.into_values().collect();
        blocks.sort_unstable_by_key(|b| b[0]);
        GroupPartition {
            modulus: labels.len() as u64,
            blocks,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn blocks(&self) -> &[Vec<u64>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// `labels[g]` is the index of the block holding `g`.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.modulus as usize];
        for (i, b) in self.blocks.iter().enumerate() {
            for &g in b {
                labels[g as usize] = i;
            }
        }
        labels
    }

    /// Whether `set` is a union of blocks.
    pub fn is_union_of_blocks(&self, set: &BTreeSet<u64>) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|g| set.contains(g)) || b.iter().all(|g| !set.contains(g)))
    }

    /// Whether the subgroup of order `d` (multiples of `n/d`) is a union of
    /// blocks.
    pub fn has_subgroup(&self, d: u64) -> bool {
        d != 0 && self.modulus.is_multiple_of(d) && self.is_union_of_blocks(&subgroup_elements(self.modulus, d))
    }

    /// The partition induced on the subgroup of order `d`, identified with
    /// `Z_d` through `g -> g / (n/d)`.
    pub fn restrict_to(&self, d: u64) -> Result<GroupPartition, SchurError> {
        if !self.has_subgroup(d) {
            return Err(SchurError::Divisibility(format!(
                "subgroup of order {d} is not a union of blocks of a partition of Z_{}",
                self.modulus
            )));
        }
        let step = self.modulus / d;
        let blocks = self
            .blocks
            .iter()
            .filter(|b| b[0] % step == 0)
            .map(|b| b.iter().map(|g| g / step).collect())
            .collect();
        GroupPartition::new(d, blocks)
    }

    /// Image under `Z_n -> Z_q`, `g -> g mod q`. The images must be disjoint
    /// or equal.
    pub fn project(&self, q: u64) -> Result<GroupPartition, SchurError> {
        if q == 0 || !self.modulus.is_multiple_of(q) {
            return Err(SchurError::Divisibility(format!(
                "{q} does not divide {}",
                self.modulus
            )));
        }
        let images: BTreeSet<Vec<u64>> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|g| g % q).collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        GroupPartition::new(q, images.into_iter().collect())
            .map_err(|_| SchurError::Incompatible(format!("block images mod {q} overlap without coinciding")))
    }

    /// `sigma_m` applied to every block.
    pub fn scale(&self, m: u64) -> Vec<Vec<u64>> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|g| g * m % self.modulus).collect())
            .collect()
    }
}

impl fmt::Display for GroupPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}: {{", self.modulus)?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            let inner: Vec<String> = b.iter().map(u64::to_string).collect();
            write!(f, "{{{}}}", inner.join(","))?;
        }
        write!(f, "}}")
    }
}

/// Multiples of `n/d`, the subgroup of order `d` in `Z_n`.
pub fn subgroup_elements(n: u64, d: u64) -> BTreeSet<u64> {
    let step = n / d;
    (0..d).map(|i| i * step).collect()
}

/// Which Wielandt condition a partition breaks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition")]
pub enum Violation {
    /// `{0}` is not a block by itself.
    #[serde(rename = "1")]
    IdentityNotSingleton { block: Vec<u64> },
    /// The negation of a block is not a block.
    #[serde(rename = "2")]
    NotInverseClosed { block: Vec<u64>, negated: Vec<u64> },
    /// `C_i C_j` hits `g` and `g'` of block `C_k` with different counts.
    #[serde(rename = "3")]
    ProductNotInSpan {
        i: usize,
        j: usize,
        k: usize,
        g: u64,
        g_prime: u64,
        count_g: u64,
        count_g_prime: u64,
    },
}

impl Violation {
    pub fn condition(&self) -> u8 {
        match self {
            Violation::IdentityNotSingleton { .. } => 1,
            Violation::NotInverseClosed { .. } => 2,
            Violation::ProductNotInSpan { .. } => 3,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IdentityNotSingleton { block } => {
                write!(f, "condition (1): identity lies in block {block:?}")
            }
            Violation::NotInverseClosed { block, negated } => {
                write!(f, "condition (2): inverse of block {block:?} is {negated:?}, not a block")
            }
            Violation::ProductNotInSpan { i, j, k, g, g_prime, count_g, count_g_prime } => write!(
                f,
                "condition (3): C{i}*C{j} has coefficient {count_g} at {g} but {count_g_prime} at {g_prime}, both in C{k}"
            ),
        }
    }
}

/// Runs the three Wielandt checks. Products are integer convolutions of
/// 0/1 vectors; a singleton factor only needs the translate to be a block.
pub fn is_schur_ring(p: &GroupPartition) -> Result<(), Violation> {
    let n = p.modulus as usize;
    let blocks = &p.blocks;
    if blocks[0].len() != 1 {
        return Err(Violation::IdentityNotSingleton {
            block: blocks[0].clone(),
        });
    }
    let labels = p.labels();
    let is_block = |set: &mut Vec<u64>| {
        set.sort_unstable();
        let b = &blocks[labels[set[0] as usize]];
        b == set
    };
    for b in blocks {
        let mut neg: Vec<u64> = b.iter().map(|&g| (n as u64 - g) % n as u64).collect();
        if !is_block(&mut neg) {
            return Err(Violation::NotInverseClosed {
                block: b.clone(),
                negated: neg,
            });
        }
    }
    let mut counts = vec![0u64; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut seen_block = vec![false; blocks.len()];
    for i in 0..blocks.len() {
        for j in i..blocks.len() {
            let (ci, cj) = (&blocks[i], &blocks[j]);
            if ci.len() == 1 || cj.len() == 1 {
                let (a, other) = if ci.len() == 1 { (ci[0], cj) } else { (cj[0], ci) };
                let mut shifted: Vec<u64> = other.iter().map(|&g| (g + a) % n as u64).collect();
                if is_block(&mut shifted) {
                    continue;
                }
            }
            for &a in ci {
                for &b in cj {
                    let g = (a + b) as usize % n;
                    if counts[g] == 0 {
                        touched.push(g);
                    }
                    counts[g] += 1;
                }
            }
            let mut witness = None;
            for &g in &touched {
                let k = labels[g];
                if std::mem::replace(&mut seen_block[k], true) {
                    continue;
                }
                if let Some(&h) = blocks[k].iter().find(|&&h| counts[h as usize] != counts[g]) {
                    witness.get_or_insert(Violation::ProductNotInSpan {
                        i,
                        j,
                        k,
                        g: g as u64,
                        g_prime: h,
                        count_g: counts[g],
                        count_g_prime: counts[h as usize],
                    });
                }
            }
            for &g in &touched {
                counts[g] = 0;
                seen_block[labels[g]] = false;
            }
            touched.clear();
            if let Some(w) = witness {
                return Err(w);
            }
        }
    }
    Ok(())
}

/// A partition together with whether it has passed [`is_schur_ring`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SchurRing {
    partition: GroupPartition,
    verified: bool,
}

impl SchurRing {
    /// Checks the axioms.
    pub fn verify(partition: GroupPartition) -> Result<Self, Violation> {
        is_schur_ring(&partition)?;
        Ok(SchurRing {
            partition,
            verified: true,
        })
    }

    /// Wraps a partition known to be a Schur ring by construction.
    pub fn unchecked(partition: GroupPartition) -> Self {
        SchurRing {
            partition,
            verified: false,
        }
    }

    /// Runs the axiom check if it has not run yet.
    pub fn verified(self) -> Result<Self, Violation> {
        if self.verified {
            Ok(self)
        } else {
            Self::verify(self.partition)
        }
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn partition(&self) -> &GroupPartition {
        &self.partition
    }

    pub fn into_partition(self) -> GroupPartition {
        self.partition
    }

    pub fn modulus(&self) -> u64 {
        self.partition.modulus
    }

    pub fn blocks(&self) -> &[Vec<u64>] {
        &self.partition.blocks
    }
}

fn ring(modulus: u64, blocks: Vec<Vec<u64>>) -> SchurRing {
    SchurRing::unchecked(GroupPartition::new(modulus, blocks).expect("constructor output is a partition"))
}

/// `{{0}, G \ {0}}`.
pub fn trivial_ring(n: u64) -> SchurRing {
    let mut blocks = vec![vec![0]];
    if n > 1 {
        blocks.push((1..n).collect());
    }
    ring(n, blocks)
}

/// All singletons.
pub fn group_ring(n: u64) -> SchurRing {
    ring(n, (0..n).map(|g| vec![g]).collect())
}

/// Blocks are the elements of each order.
pub fn rational_ring(n: u64) -> SchurRing {
    let mut by_gcd: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for g in 0..n {
        by_gcd.entry(g.gcd(&n)).or_default().push(g);
    }
    ring(n, by_gcd.into_values().collect())
}

/// Blocks are `{g, -g}`.
pub fn symmetric_ring(n: u64) -> SchurRing {
    let blocks = (0..n)
        .filter(|&g| g <= (n - g) % n)
        .map(|g| {
            let mut b = vec![g, (n - g) % n];
            b.dedup();
            b
        })
        .collect();
    ring(n, blocks)
}

/// Orbits of `g -> mg` for `m` in `h`.
pub fn orbit_ring(h: &SubgroupOfUnits) -> SchurRing {
    let n = h.modulus();
    let mut done = vec![false; n as usize];
    let mut blocks = Vec::new();
    for g in 0..n {
        if done[g as usize] {
            continue;
        }
        let orbit: BTreeSet<u64> = h.elements().iter().map(|m| g * m % n).collect();
        for &x in &orbit {
            done[x as usize] = true;
        }
        blocks.push(orbit.into_iter().collect());
    }
    ring(n, blocks)
}

/// `s wr t` over `Z_n`, `n = m * (n/m)`: the wedge with `k = h = m`.
pub fn wreath_product(s: &SchurRing, t: &SchurRing) -> Result<SchurRing, SchurError> {
    wedge_product(s, s.modulus(), t)
}

/// `s ^_K t` with `s` over `Z_h`, `K` of order `k`, `t` over `Z_{n/k}`.
/// `Z_h` sits in `Z_n` as the multiples of `n/h`, and `pi: Z_n -> Z_{n/k}`
/// is reduction mod `n/k`.
pub fn wedge_product(s: &SchurRing, k: u64, t: &SchurRing) -> Result<SchurRing, SchurError> {
    let h = s.modulus();
    let n = k * t.modulus();
    if k <= 1 || !h.is_multiple_of(k) || !n.is_multiple_of(h) || h >= n {
        return Err(SchurError::Divisibility(format!(
            "need 1 < k | h | n with h < n, got k = {k}, h = {h}, n = {n}"
        )));
    }
    let q = h / k;
    // K is a union of s-blocks exactly when pi(s) is a partition of Z_q.
    let image = s.partition.project(q)?;
    let t_sub = t
        .partition
        .restrict_to(q)
        .map_err(|_| SchurError::Incompatible(format!("H/K of order {q} is not a union of blocks of t")))?;
    if image != t_sub {
        return Err(SchurError::Incompatible(format!(
            "pi(s) = {image} differs from t restricted to H/K = {t_sub}"
        )));
    }
    Ok(wedge_unchecked(s, k, t))
}

/// The wedge partition for factors already known to be compatible.
pub(crate) fn wedge_unchecked(s: &SchurRing, k: u64, t: &SchurRing) -> SchurRing {
    let h = s.modulus();
    let m = t.modulus();
    let n = k * m;
    let embed = n / h;
    let mut blocks: Vec<Vec<u64>> = s
        .blocks()
        .iter()
        .map(|b| b.iter().map(|g| g * embed).collect())
        .collect();
    for d in t.blocks() {
        if d[0] % embed == 0 {
            continue;
        }
        let mut pre: Vec<u64> = d.iter().flat_map(|&y| (0..k).map(move |i| y + i * m)).collect();
        pre.sort_unstable();
        blocks.push(pre);
    }
    ring(n, blocks)
}

/// `s . t` over `Z_{ab}` through `g <-> (g mod a, g mod b)`.
pub fn dot_product(s: &SchurRing, t: &SchurRing) -> Result<SchurRing, SchurError> {
    let (a, b) = (s.modulus(), t.modulus());
    if a.gcd(&b) != 1 {
        return Err(SchurError::NotCoprime(a, b));
    }
    let n = a * b;
    let mut crt = vec![vec![0u64; b as usize]; a as usize];
    for g in 0..n {
        crt[(g % a) as usize][(g % b) as usize] = g;
    }
    let mut blocks = Vec::new();
    for c in s.blocks() {
        for d in t.blocks() {
            blocks.push(
                c.iter()
                    .flat_map(|&x| d.iter().map(|&y| crt[x as usize][y as usize]).collect::<Vec<_>>())
                    .collect(),
            );
        }
    }
    Ok(ring(n, blocks))
}

/// The finest common coarsening: components of the block-overlap graph.
pub fn intersect_rings(s: &SchurRing, t: &SchurRing) -> Result<SchurRing, SchurError> {
    let n = s.modulus();
    if n != t.modulus() {
        return Err(SchurError::ModulusMismatch(n, t.modulus()));
    }
    let mut parent: Vec<usize> = (0..n as usize).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for b in s.blocks().iter().chain(t.blocks()) {
        let root = find(&mut parent, b[0] as usize);
        for &g in &b[1..] {
            let r = find(&mut parent, g as usize);
            parent[r] = root;
        }
    }
    let labels: Vec<usize> = (0..n as usize).map(|g| find(&mut parent, g)).collect();
    Ok(SchurRing::unchecked(GroupPartition::from_labels(&labels)))
}

/// Reduces a coefficient vector of length `n = p^k` modulo the cyclotomic
/// polynomial `Phi_n`, giving the coordinates in the power basis of
/// `Q(zeta_n)`. For `n = 1` the vector is returned unchanged.
pub fn reduce_cyclotomic<T>(n: u64, coeffs: &[T]) -> Result<Vec<T>, SchurError>
where
    T: Clone + Zero + std::ops::SubAssign,
{
    if n == 1 {
        return Ok(coeffs.to_vec());
    }
    let (p, k) = prime_power(n).ok_or(SchurError::NotPrimePower(n))?;
    let q = p.pow(k - 1) as usize;
    let phi = (p as usize - 1) * q;
    let mut out: Vec<T> = coeffs[..phi].to_vec();
    // x^{phi + r} = -sum_{j=0}^{p-2} x^{j q + r}
    for (r, c) in coeffs[phi..].iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for j in 0..p as usize - 1 {
            out[j * q + r] -= c.clone();
        }
    }
    Ok(out)
}

/// `omega(C-bar)` as reduced integer coordinates.
pub fn omega_of_set(set: &[u64], n: u64) -> Result<Vec<i64>, SchurError> {
    let mut v = vec![0i64; n as usize];
    for &g in set {
        v[(g % n) as usize] += 1;
    }
    reduce_cyclotomic(n, &v)
}

/// The subgroup `H` of `(Z/nZ)^*` with `omega(s) = K_n^H`: the units whose
/// `sigma_m` fixes the image of every block.
pub fn omega_image(s: &SchurRing) -> Result<SubgroupOfUnits, SchurError> {
    StabilizerSearch::new(s.modulus())?.image(s)
}

/// The stabilizer is a subgroup, so it is the largest subgroup of units
/// whose generators all fix every block image. Candidates are prepared
/// once per modulus and reused across rings.
#[derive(Debug, Clone)]
pub struct StabilizerSearch {
    modulus: u64,
    /// Largest first, each with a small generating set.
    candidates: Vec<(SubgroupOfUnits, Vec<u64>)>,
}

impl StabilizerSearch {
    pub fn new(n: u64) -> Result<Self, SchurError> {
        if n <= 2 {
            return Ok(StabilizerSearch {
                modulus: n,
                candidates: vec![(SubgroupOfUnits::full(n), Vec::new())],
            });
        }
        let (p, k) = prime_power(n).ok_or(SchurError::NotPrimePower(n))?;
        let group = units_group(p, k).expect("prime power");
        let mut candidates: Vec<_> = group
            .all_subgroups()
            .into_iter()
            .map(|h| {
                let mut gens = Vec::new();
                let mut spanned = SubgroupOfUnits::trivial(n);
                for &g in h.elements() {
                    if !spanned.contains(g) {
                        gens.push(g);
                        spanned = SubgroupOfUnits::generated(n, &gens);
                    }
                }
                (h, gens)
            })
            .collect();
        candidates.reverse();
        Ok(StabilizerSearch { modulus: n, candidates })
    }

    pub fn image(&self, s: &SchurRing) -> Result<SubgroupOfUnits, SchurError> {
        let n = s.modulus();
        if n != self.modulus {
            return Err(SchurError::ModulusMismatch(n, self.modulus));
        }
        let images = s
            .blocks()
            .iter()
            .map(|b| omega_of_set(b, n))
            .collect::<Result<Vec<_>, _>>()?;
        let mut verdict = BTreeMap::new();
        let mut fixes = |m: u64| {
            *verdict.entry(m).or_insert_with(|| {
                s.blocks().iter().zip(&images).all(|(b, img)| {
                    let moved: Vec<u64> = b.iter().map(|g| g * m % n).collect();
                    omega_of_set(&moved, n).as_ref() == Ok(img)
                })
            })
        };
        for (h, gens) in &self.candidates {
            if gens.iter().all(|&m| fixes(m)) {
                return Ok(h.clone());
            }
        }
        unreachable!("the trivial subgroup always qualifies")
    }
}

/// Tests every unit individually; kept as a reference for
/// [`StabilizerSearch`].
pub fn omega_image_direct(s: &SchurRing) -> Result<SubgroupOfUnits, SchurError> {
    let n = s.modulus();
    if n > 1 && prime_power(n).is_none() {
        return Err(SchurError::NotPrimePower(n));
    }
    let images = s
        .blocks()
        .iter()
        .map(|b| omega_of_set(b, n))
        .collect::<Result<Vec<_>, _>>()?;
    let mut fixing = Vec::new();
    for m in unit_residues(n) {
        let fixes = s.blocks().iter().zip(&images).all(|(b, img)| {
            let moved: Vec<u64> = b.iter().map(|g| g * m % n).collect();
            omega_of_set(&moved, n).as_ref() == Ok(img)
        });
        if fixes {
            fixing.push(m);
        }
    }
    Ok(SubgroupOfUnits::new(n, fixing).expect("a stabilizer is a subgroup"))
}

/// Whether `omega(alpha) = 0`.
pub fn kernel_member(alpha: &AlgebraElement) -> Result<bool, SchurError> {
    Ok(reduce_cyclotomic(alpha.modulus(), alpha.coeffs())?
        .iter()
        .all(Zero::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(n: u64, blocks: &[&[u64]]) -> GroupPartition {
        GroupPartition::new(n, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    fn blocks(r: &SchurRing) -> Vec<Vec<u64>> {
        r.blocks().to_vec()
    }

    fn vv(bs: &[&[u64]]) -> Vec<Vec<u64>> {
        bs.iter().map(|b| b.to_vec()).collect()
    }

    #[test]
    fn algebra_operations() {
        let z1 = AlgebraElement::basis(5, 1);
        assert_eq!(z1.star(), AlgebraElement::basis(5, 4));
        let a = AlgebraElement::from_ints(3, &[1, 1, 0]).unwrap();
        let b = AlgebraElement::from_ints(3, &[0, 1, 1]).unwrap();
        assert_eq!(a.hadamard(&b).unwrap(), AlgebraElement::basis(3, 1));
        let z2 = simple_quantity(&[0, 2], 4);
        assert_eq!(z2.product(&z2).unwrap(), z2.scale(&Rational::from_integer(2.into())));
        assert_eq!(a.product(&z1), Err(SchurError::ModulusMismatch(3, 5)));
        assert_eq!(a.to_string(), "z^0 + z^1");
    }

    #[test]
    fn partition_validation() {
        assert!(GroupPartition::new(3, vec![vec![0], vec![1]]).is_err());
        assert!(GroupPartition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(GroupPartition::new(3, vec![vec![0], vec![], vec![1, 2]]).is_err());
        assert!(GroupPartition::new(3, vec![vec![0], vec![1, 5]]).is_err());
        let p = GroupPartition::new(5, vec![vec![3, 2], vec![4, 1], vec![0]]).unwrap();
        assert_eq!(p.blocks(), vv(&[&[0], &[1, 4], &[2, 3]]).as_slice());
    }

    #[test]
    fn partition_json_round_trip() {
        let p = rational_ring(27).into_partition();
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.starts_with(r#"{"modulus":27,"blocks":[[0],[1,2,4,5,7,8"#));
        let back: GroupPartition = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        let unsorted: GroupPartition = serde_json::from_str(r#"{"modulus":4,"blocks":[[3,1],[2],[0]]}"#).unwrap();
        assert_eq!(unsorted.blocks(), vv(&[&[0], &[1, 3], &[2]]).as_slice());
        assert!(serde_json::from_str::<GroupPartition>(r#"{"modulus":4,"blocks":[[0],[1]]}"#).is_err());
    }

    #[test]
    fn axiom_examples() {
        assert_eq!(is_schur_ring(group_ring(5).partition()), Ok(()));
        assert_eq!(is_schur_ring(&part(5, &[&[0], &[1, 4], &[2, 3]])), Ok(()));
        let bad = is_schur_ring(&part(5, &[&[0], &[1], &[2, 3, 4]])).unwrap_err();
        assert_eq!(bad.condition(), 2);
        let bad = is_schur_ring(&part(4, &[&[0, 2], &[1, 3]])).unwrap_err();
        assert_eq!(bad.condition(), 1);
        // (z + z^5)^2 = 2 + z^2 + z^4 misses 3, so {2,3,4} gets uneven counts
        let bad = is_schur_ring(&part(6, &[&[0], &[1, 5], &[2, 3, 4]])).unwrap_err();
        assert_eq!(bad.condition(), 3);
        if let Violation::ProductNotInSpan {
            k,
            g,
            g_prime,
            count_g,
            count_g_prime,
            ..
        } = bad
        {
            assert_eq!(k, 2);
            assert_ne!(count_g, count_g_prime);
            assert!([2, 3, 4].contains(&g) && [2, 3, 4].contains(&g_prime));
        }
    }

    #[test]
    fn violation_json() {
        let bad = is_schur_ring(&part(5, &[&[0], &[1], &[2, 3, 4]])).unwrap_err();
        let v = serde_json::to_value(&bad).unwrap();
        assert_eq!(v["condition"], "2");
        assert_eq!(v["block"], serde_json::json!([1]));
    }

    #[test]
    fn named_rings() {
        assert_eq!(blocks(&trivial_ring(4)), vv(&[&[0], &[1, 2, 3]]));
        assert_eq!(blocks(&trivial_ring(1)), vv(&[&[0]]));
        assert_eq!(blocks(&rational_ring(9)), vv(&[&[0], &[1, 2, 4, 5, 7, 8], &[3, 6]]));
        assert_eq!(blocks(&symmetric_ring(5)), vv(&[&[0], &[1, 4], &[2, 3]]));
        assert_eq!(blocks(&symmetric_ring(4)), vv(&[&[0], &[1, 3], &[2]]));
        for n in 1..=30 {
            for r in [trivial_ring(n), group_ring(n), rational_ring(n), symmetric_ring(n)] {
                assert!(r.verified().is_ok(), "n = {n}");
            }
        }
    }

    #[test]
    fn orbit_rings() {
        assert_eq!(orbit_ring(&SubgroupOfUnits::full(9)), rational_ring(9));
        let pm = SubgroupOfUnits::new(9, [1, 8]).unwrap();
        assert_eq!(
            blocks(&orbit_ring(&pm)),
            vv(&[&[0], &[1, 8], &[2, 7], &[3, 6], &[4, 5]])
        );
        assert_eq!(orbit_ring(&SubgroupOfUnits::trivial(9)), group_ring(9));
    }

    #[test]
    fn wreath_examples() {
        let w = wreath_product(&group_ring(2), &group_ring(2)).unwrap();
        assert_eq!(blocks(&w), vv(&[&[0], &[1, 3], &[2]]));
        assert!(w.verified().is_ok());
        let w = wreath_product(&trivial_ring(3), &trivial_ring(3)).unwrap();
        assert_eq!(w.partition(), rational_ring(9).partition());
    }

    #[test]
    fn wedge_example() {
        let w = wedge_product(&group_ring(4), 2, &group_ring(4))
            .unwrap()
            .verified()
            .unwrap();
        assert_eq!(blocks(&w), vv(&[&[0], &[1, 5], &[2], &[3, 7], &[4], &[6]]));
        // section and projection laws
        assert_eq!(w.partition().restrict_to(4).unwrap(), *group_ring(4).partition());
        assert_eq!(w.partition().project(4).unwrap(), *group_ring(4).partition());
    }

    #[test]
    fn wedge_errors() {
        assert!(matches!(
            wedge_product(&group_ring(4), 3, &group_ring(4)),
            Err(SchurError::Divisibility(_))
        ));
        assert!(matches!(
            wedge_product(&group_ring(4), 1, &group_ring(8)),
            Err(SchurError::Divisibility(_))
        ));
        // pi(s) is the trivial ring of Z_2 = group ring, but t = trivial(4) has {2} inside {1,2,3}
        assert!(matches!(
            wedge_product(&group_ring(4), 2, &trivial_ring(4)),
            Err(SchurError::Incompatible(_))
        ));
        // K = {0,2} in Z_4 is not a union of trivial(4)-blocks
        assert!(matches!(
            wedge_product(&trivial_ring(4), 2, &group_ring(4)),
            Err(SchurError::Incompatible(_))
        ));
    }

    #[test]
    fn dot_examples() {
        let d = dot_product(&group_ring(2), &group_ring(3)).unwrap();
        assert_eq!(d.partition(), group_ring(6).partition());
        let d = dot_product(&trivial_ring(2), &trivial_ring(3))
            .unwrap()
            .verified()
            .unwrap();
        assert_eq!(blocks(&d), vv(&[&[0], &[1, 5], &[2, 4], &[3]]));
        let s = symmetric_ring(9);
        assert_eq!(dot_product(&s, &group_ring(1)).unwrap().partition(), s.partition());
        assert_eq!(dot_product(&s, &group_ring(3)), Err(SchurError::NotCoprime(9, 3)));
        let d = dot_product(&rational_ring(8), &symmetric_ring(5)).unwrap();
        assert!(d.verified().is_ok());
    }

    #[test]
    fn intersections() {
        let s = symmetric_ring(9);
        assert_eq!(intersect_rings(&s, &s).unwrap().partition(), s.partition());
        assert_eq!(intersect_rings(&group_ring(9), &s).unwrap().partition(), s.partition());
        let r = intersect_rings(&s, &rational_ring(9)).unwrap();
        assert_eq!(r.partition(), rational_ring(9).partition());
        assert_eq!(
            intersect_rings(&s, &group_ring(4)),
            Err(SchurError::ModulusMismatch(9, 4))
        );
    }

    #[test]
    fn cyclotomic_reduction() {
        // 1 + z^3 + z^6 = 0 in Q(zeta_9)
        assert_eq!(omega_of_set(&[0, 3, 6], 9).unwrap(), vec![0; 6]);
        // z^6 = -1 - z^3
        assert_eq!(omega_of_set(&[6], 9).unwrap(), vec![-1, 0, 0, -1, 0, 0]);
        assert_eq!(omega_of_set(&[1, 2, 3, 4], 5).unwrap(), vec![-1, 0, 0, 0]);
        assert_eq!(omega_of_set(&[2], 4).unwrap(), vec![-1, 0]);
        assert!(omega_of_set(&[1], 12).is_err());
    }

    #[test]
    fn omega_examples() {
        for n in [2u64, 3, 4, 8, 9, 25, 27, 16] {
            assert_eq!(omega_image(&trivial_ring(n)).unwrap(), SubgroupOfUnits::full(n));
            assert_eq!(omega_image(&group_ring(n)).unwrap(), SubgroupOfUnits::trivial(n));
        }
        assert_eq!(omega_image(&group_ring(1)).unwrap(), SubgroupOfUnits::full(1));
        for (p, k) in [(3, 3), (2, 5), (5, 2), (7, 2)] {
            for h in crate::units::units_group(p, k).unwrap().all_subgroups() {
                assert_eq!(omega_image(&orbit_ring(&h)).unwrap(), h);
            }
        }
        assert_eq!(omega_image(&group_ring(6)), Err(SchurError::NotPrimePower(6)));
    }

    #[test]
    fn kernel_examples() {
        for p in [2u64, 3, 5, 7] {
            let n = p * p;
            let coset: Vec<u64> = (0..p).map(|i| 1 + i * p).collect();
            assert!(kernel_member(&simple_quantity(&coset, n)).unwrap());
            assert!(!kernel_member(&AlgebraElement::one(n)).unwrap());
            let g: Vec<u64> = (0..n).collect();
            let h: Vec<u64> = (0..p).map(|i| i * p).collect();
            let diff = simple_quantity(&g, n).sub(&simple_quantity(&h, n)).unwrap();
            assert!(kernel_member(&diff).unwrap());
        }
    }

    #[test]
    fn wedge_image_law() {
        let s = symmetric_ring(9);
        let w = wreath_product(&s, &trivial_ring(3)).unwrap().verified().unwrap();
        let expected = omega_image(&s).unwrap().inflate(27).unwrap();
        assert_eq!(omega_image(&w).unwrap(), expected);
    }
}
