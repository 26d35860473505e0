//! The unit group `(Z/p^kZ)^*`, its subgroup lattice, and the layer of the
//! cyclotomic subfield fixed by each subgroup.
//!
//! Subgroups are stored extensionally as sorted residue sets. The identity
//! of `(Z/1Z)^*` is the residue `0`.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::counting::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitsError {
    #[error("{0} is not a prime")]
    InvalidPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{d} does not divide {n}")]
    NotDivisor { d: u64, n: u64 },
    #[error("not a subgroup of (Z/{modulus}Z)*: {reason}")]
    NotSubgroup { modulus: u64, reason: String },
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Splits `n > 1` as `p^k`; `None` if `n` is not a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut rest = n;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn divisors(m: u64) -> Vec<u64> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

/// Residues in `0..n` coprime to `n`; `[0]` for `n = 1`.
pub fn unit_residues(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|m| m.gcd(&n) == 1).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitsStructure {
    Trivial,
    Cyclic,
    /// `Z_2 x Z_{2^{k-2}}`, for `p = 2`, `k >= 2`.
    TwoByCyclic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitsGroup {
    p: u64,
    k: u32,
    modulus: u64,
    order: u64,
    generators: Vec<u64>,
    structure: UnitsStructure,
}

/// The unit group of `Z/p^kZ` with verified generators: the smallest
/// primitive root for odd `p`, and `{-1, 5}` for `p = 2`.
pub fn units_group(p: u64, k: u32) -> Result<UnitsGroup, UnitsError> {
    if !is_prime(p) {
        return Err(UnitsError::InvalidPrime(p));
    }
    let modulus = p.pow(k);
    let order = if k == 0 { 1 } else { p.pow(k - 1) * (p - 1) };
    let (generators, structure) = if order == 1 {
        (Vec::new(), UnitsStructure::Trivial)
    } else if p == 2 {
        let mut gens = vec![modulus - 1];
        if 5 % modulus != 1 {
            gens.push(5 % modulus);
        }
        (gens, UnitsStructure::TwoByCyclic)
    } else {
        let factors = prime_factors(order);
        let root = (2..modulus)
            .find(|&g| g.gcd(&modulus) == 1 && factors.iter().all(|q| pow_mod(g, order / q, modulus) != 1))
            .expect("odd prime powers have primitive roots");
        (vec![root], UnitsStructure::Cyclic)
    };
    let group = UnitsGroup {
        p,
        k,
        modulus,
        order,
        generators,
        structure,
    };
    debug_assert_eq!(group.full().len() as u64, order);
    Ok(group)
}

impl UnitsGroup {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn structure(&self) -> UnitsStructure {
        self.structure
    }

    /// The subgroup generated by the stored generators.
    pub fn full(&self) -> SubgroupOfUnits {
        SubgroupOfUnits::generated(self.modulus, &self.generators)
    }

    /// Every subgroup, ordered by size then by residues.
    pub fn all_subgroups(&self) -> Vec<SubgroupOfUnits> {
        let n = self.modulus;
        let mut found: BTreeSet<SubgroupOfUnits> = BTreeSet::new();
        match self.structure {
            UnitsStructure::Trivial => {
                found.insert(SubgroupOfUnits::trivial(n));
            }
            UnitsStructure::Cyclic => {
                let g = self.generators[0];
                for d in divisors(self.order) {
                    found.insert(SubgroupOfUnits::generated(n, &[pow_mod(g, self.order / d, n)]));
                }
            }
            UnitsStructure::TwoByCyclic => {
                // rank 2: every subgroup is a join of at most two cyclic ones
                let cyclic: BTreeSet<SubgroupOfUnits> = unit_residues(n)
                    .into_iter()
                    .map(|m| SubgroupOfUnits::generated(n, &[m]))
                    .collect();
                let cyclic: Vec<_> = cyclic.into_iter().collect();
                for (i, a) in cyclic.iter().enumerate() {
                    for b in &cyclic[i..] {
                        found.insert(a.join(b));
                    }
                }
            }
        }
        let mut out: Vec<_> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.elements.cmp(&b.elements)));
        out
    }
}

/// A subgroup of `(Z/nZ)^*` as a sorted residue set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SubgroupOfUnits {
    modulus: u64,
    elements: Vec<u64>,
}

impl SubgroupOfUnits {
    /// Validates identity, coprimality and multiplicative closure.
    pub fn new(modulus: u64, elements: impl IntoIterator<Item = u64>) -> Result<Self, UnitsError> {
        let fail = |reason: &str| UnitsError::NotSubgroup {
            modulus,
            reason: reason.to_string(),
        };
        if modulus == 0 {
            return Err(fail("modulus 0"));
        }
        let set: BTreeSet<u64> = elements.into_iter().map(|m| m % modulus).collect();
        if !set.contains(&(1 % modulus)) {
            return Err(fail("missing identity"));
        }
        if set.iter().any(|m| m.gcd(&modulus) != 1 && modulus > 1) {
            return Err(fail("contains a non-unit"));
        }
        for a in &set {
            for b in &set {
                if !set.contains(&(a * b % modulus)) {
                    return Err(fail("not closed under multiplication"));
                }
            }
        }
        Ok(SubgroupOfUnits {
            modulus,
            elements: set.into_iter().collect(),
        })
    }

    /// The closure of `gens` under multiplication.
    pub fn generated(modulus: u64, gens: &[u64]) -> Self {
        let mut set: BTreeSet<u64> = BTreeSet::from([1 % modulus]);
        let mut frontier: Vec<u64> = vec![1 % modulus];
        while let Some(a) = frontier.pop() {
            for &g in gens {
                let b = a * (g % modulus) % modulus;
                if set.insert(b) {
                    frontier.push(b);
                }
            }
        }
        SubgroupOfUnits {
            modulus,
            elements: set.into_iter().collect(),
        }
    }

    pub fn trivial(modulus: u64) -> Self {
        SubgroupOfUnits {
            modulus,
            elements: vec![1 % modulus],
        }
    }

    pub fn full(modulus: u64) -> Self {
        SubgroupOfUnits {
            modulus,
            elements: unit_residues(modulus),
        }
    }

    /// `{m : m = 1 mod d}`, the kernel of reduction onto `(Z/dZ)^*`.
    pub fn reduction_kernel(modulus: u64, d: u64) -> Result<Self, UnitsError> {
        if d == 0 || !modulus.is_multiple_of(d) {
            return Err(UnitsError::NotDivisor { d, n: modulus });
        }
        let elements = unit_residues(modulus).into_iter().filter(|m| m % d == 1 % d).collect();
        Ok(SubgroupOfUnits { modulus, elements })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, m: u64) -> bool {
        self.elements.binary_search(&(m % self.modulus)).is_ok()
    }

    pub fn is_subset_of(&self, other: &SubgroupOfUnits) -> bool {
        self.modulus == other.modulus && self.elements.iter().all(|&m| other.contains(m))
    }

    pub fn join(&self, other: &SubgroupOfUnits) -> SubgroupOfUnits {
        let gens: Vec<u64> = self.elements.iter().chain(&other.elements).copied().collect();
        SubgroupOfUnits::generated(self.modulus, &gens)
    }

    /// Image under reduction mod `d`.
    pub fn restrict(&self, d: u64) -> Result<SubgroupOfUnits, UnitsError> {
        if d == 0 || !self.modulus.is_multiple_of(d) {
            return Err(UnitsError::NotDivisor { d, n: self.modulus });
        }
        let set: BTreeSet<u64> = self.elements.iter().map(|m| m % d).collect();
        Ok(SubgroupOfUnits {
            modulus: d,
            elements: set.into_iter().collect(),
        })
    }

    /// Preimage under reduction from `(Z/nZ)^*`, for `modulus | n`.
    pub fn inflate(&self, n: u64) -> Result<SubgroupOfUnits, UnitsError> {
        if self.modulus == 0 || !n.is_multiple_of(self.modulus) {
            return Err(UnitsError::NotDivisor { d: self.modulus, n });
        }
        let elements = unit_residues(n)
            .into_iter()
            .filter(|m| self.contains(m % self.modulus))
            .collect();
        Ok(SubgroupOfUnits { modulus: n, elements })
    }
}

/// The least `k` with `K^h ⊆ K_{p^k}`, i.e. `h` contains every unit that is
/// `1 mod p^k`. Layer 0 is `Q`.
pub fn layer_of(h: &SubgroupOfUnits) -> Result<usize, UnitsError> {
    let n = h.modulus();
    if n == 1 {
        return Ok(0);
    }
    let (p, top) = prime_power(n).ok_or(UnitsError::NotPrimePower(n))?;
    for k in 0..top {
        let kernel = SubgroupOfUnits::reduction_kernel(n, p.pow(k))?;
        if kernel.is_subset_of(h) {
            return Ok(k as usize);
        }
    }
    Ok(top as usize)
}

/// Number of subfields of `Q(zeta_{p^n})` in each layer.
pub fn layer_census(p: u64, n: u32) -> Result<BTreeMap<usize, usize>, UnitsError> {
    let group = units_group(p, n)?;
    let mut census = BTreeMap::new();
    for h in group.all_subgroups() {
        *census.entry(layer_of(&h)?).or_insert(0) += 1;
    }
    Ok(census)
}

/// The named subfields of `Q(zeta_{2^n})`; each layer `k >= 3` holds one of
/// each of the last three kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", content = "k", rename_all = "snake_case")]
pub enum TwoPowerField {
    Rational,
    /// `Q(zeta_{2^k})`, `k >= 2`.
    Cyclotomic(usize),
    /// `Q(zeta_{2^k} + zeta_{2^k}^{-1})`, `k >= 3`.
    Plus(usize),
    /// `Q(zeta_{2^k} - zeta_{2^k}^{-1})`, `k >= 3`.
    Minus(usize),
}

/// Names the field fixed by a subgroup of `(Z/2^nZ)^*`.
pub fn classify_two_power(h: &SubgroupOfUnits) -> Result<TwoPowerField, UnitsError> {
    let n = h.modulus();
    if n != 1 && prime_power(n).map(|(p, _)| p) != Some(2) {
        return Err(UnitsError::NotPrimePower(n));
    }
    let k = layer_of(h)?;
    if k == 0 {
        return Ok(TwoPowerField::Rational);
    }
    let m = 1u64 << k;
    let image = h.restrict(m)?;
    Ok(match image.elements() {
        [1] => TwoPowerField::Cyclotomic(k),
        [1, x] if *x == m - 1 => TwoPowerField::Plus(k),
        _ => TwoPowerField::Minus(k),
    })
}

impl std::fmt::Display for TwoPowerField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TwoPowerField::Rational => write!(f, "Q"),
            TwoPowerField::Cyclotomic(k) => write!(f, "Q(zeta_{})", 1u64 << k),
            TwoPowerField::Plus(k) => write!(f, "Q(zeta_{0}+zeta_{0}^-1)", 1u64 << k),
            TwoPowerField::Minus(k) => write!(f, "Q(zeta_{0}-zeta_{0}^-1)", 1u64 << k),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeNode {
    pub elements: Vec<u64>,
    pub layer: usize,
}

/// Subgroup lattice export. `edges` are covering pairs `[i, j]` with
/// subgroup `i` maximal inside subgroup `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeExport {
    pub modulus: u64,
    pub subgroups: Vec<LatticeNode>,
    pub edges: Vec<[usize; 2]>,
}

pub fn lattice_export(p: u64, n: u32) -> Result<LatticeExport, UnitsError> {
    let group = units_group(p, n)?;
    let subs = group.all_subgroups();
    let below = |i: usize, j: usize| i != j && subs[i].is_subset_of(&subs[j]);
    let mut edges = Vec::new();
    for i in 0..subs.len() {
        for j in 0..subs.len() {
            if below(i, j) && !(0..subs.len()).any(|m| below(i, m) && below(m, j)) {
                edges.push([i, j]);
            }
        }
    }
    let subgroups = subs
        .iter()
        .map(|h| {
            Ok(LatticeNode {
                elements: h.elements().to_vec(),
                layer: layer_of(h)?,
            })
        })
        .collect::<Result<_, UnitsError>>()?;
    Ok(LatticeExport {
        modulus: group.modulus(),
        subgroups,
        edges,
    })
}
