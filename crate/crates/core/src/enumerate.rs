//! Enumeration of all Schur rings over `Z_{p^n}`.
//!
//! The constructive generator builds every ring as the trivial ring, an orbit
//! ring, or a wedge product of rings over smaller cyclic groups. The brute
//! force search tries every inverse-closed partition and keeps those passing
//! the axiom check; it only fits tiny moduli and serves as an oracle.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::counting::{omega_odd_eval, OddOmegaTable, PrimeSpec, TwoOmegaTable};
use crate::report::CheckLine;
use crate::schur::{
    is_schur_ring, orbit_ring, trivial_ring, wedge_unchecked, GroupPartition, SchurError, SchurRing, StabilizerSearch,
    Violation,
};
use crate::units::{
    classify_two_power, layer_of, prime_power, units_group, SubgroupOfUnits, TwoPowerField, UnitsError,
};

pub const DEFAULT_BOUND: u64 = 1024;
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus {modulus} exceeds the enumeration bound {bound}")]
    BoundExceeded { modulus: u64, bound: u64 },
    #[error("brute-force budget of {budget} partial states exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("generated partition {partition} is not a Schur ring: {violation}")]
    AxiomFailure {
        partition: GroupPartition,
        violation: Violation,
    },
    #[error(transparent)]
    Units(#[from] UnitsError),
    #[error(transparent)]
    Schur(#[from] SchurError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Constructive,
    BruteForce,
}

/// How the constructive generator first produced a ring.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub trivial: bool,
    pub orbit: Option<Vec<u64>>,
    /// First `(k, h)` chain whose wedge produced the ring.
    pub wedge: Option<(u64, u64)>,
}

#[derive(Debug, Clone)]
pub struct EnumerationResult {
    pub modulus: u64,
    pub method: Method,
    /// Canonical partitions in ascending order.
    pub rings: Vec<GroupPartition>,
    /// `omega_image` of each ring, parallel to `rings`.
    pub images: Vec<SubgroupOfUnits>,
    /// Parallel to `rings`; empty for brute force.
    pub provenance: Vec<Provenance>,
    pub tally: BTreeMap<SubgroupOfUnits, usize>,
}

impl EnumerationResult {
    fn new(
        modulus: u64,
        method: Method,
        rings: Vec<GroupPartition>,
        provenance: Vec<Provenance>,
    ) -> Result<Self, EnumError> {
        let search = StabilizerSearch::new(modulus)?;
        let images = rings
            .par_iter()
            .map(|r| search.image(&SchurRing::unchecked(r.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let mut tally = BTreeMap::new();
        for h in &images {
            *tally.entry(h.clone()).or_insert(0) += 1;
        }
        Ok(EnumerationResult {
            modulus,
            method,
            rings,
            images,
            provenance,
            tally,
        })
    }

    pub fn count(&self) -> usize {
        self.rings.len()
    }

    pub fn contains(&self, p: &GroupPartition) -> bool {
        self.rings.binary_search(p).is_ok()
    }

    /// JSON array of `{modulus, blocks, omega_image}` in canonical order.
    pub fn dump(&self) -> serde_json::Value {
        let items = self
            .rings
            .iter()
            .zip(&self.images)
            .map(|(r, h)| {
                let mut v = serde_json::to_value(r).expect("partition serializes");
                v["omega_image"] = serde_json::to_value(h.elements()).expect("residues serialize");
                v
            })
            .collect();
        serde_json::Value::Array(items)
    }
}

#[derive(Debug, Clone)]
pub struct EnumOptions {
    /// Largest modulus accepted.
    pub bound: u64,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            bound: DEFAULT_BOUND,
            jobs: None,
        }
    }
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

/// All Schur rings over `Z_{p^n}`.
pub fn enumerate_constructive(p: u64, n: u32) -> Result<EnumerationResult, EnumError> {
    enumerate_constructive_with(p, n, &EnumOptions::default())
}

pub fn enumerate_constructive_with(p: u64, n: u32, opts: &EnumOptions) -> Result<EnumerationResult, EnumError> {
    let mut gen = Generator::new(p, opts.bound)?;
    with_pool(opts.jobs, move || {
        let modulus = checked_power(p, n, opts.bound)?;
        let (rings, provenance) = gen.generate(n)?;
        drop(gen);
        let rings: Vec<GroupPartition> = match Arc::try_unwrap(rings) {
            Ok(rings) => rings.into_iter().map(SchurRing::into_partition).collect(),
            Err(shared) => shared.iter().map(|r| r.partition().clone()).collect(),
        };
        if let Some((partition, violation)) = rings
            .par_iter()
            .find_map_any(|r| is_schur_ring(r).err().map(|v| (r.clone(), v)))
        {
            return Err(EnumError::AxiomFailure { partition, violation });
        }
        EnumerationResult::new(modulus, Method::Constructive, rings, provenance)
    })
}

/// Enumerates by modulus `m = p^n`.
pub fn enumerate_modulus(m: u64, opts: &EnumOptions) -> Result<EnumerationResult, EnumError> {
    let (p, n) = split_modulus(m)?;
    enumerate_constructive_with(p, n, opts)
}

/// `m = p^n`; `1` splits as `2^0`.
pub fn split_modulus(m: u64) -> Result<(u64, u32), EnumError> {
    if m == 1 {
        return Ok((2, 0));
    }
    prime_power(m).ok_or(EnumError::NotPrimePower(m))
}

fn checked_power(p: u64, n: u32, bound: u64) -> Result<u64, EnumError> {
    let modulus = p.checked_pow(n).unwrap_or(u64::MAX);
    if modulus > bound {
        Err(EnumError::BoundExceeded { modulus, bound })
    } else {
        Ok(modulus)
    }
}

/// Memoized generator for one prime.
struct Generator {
    p: u64,
    bound: u64,
    memo: HashMap<u32, Arc<Vec<SchurRing>>>,
}

impl Generator {
    fn new(p: u64, bound: u64) -> Result<Self, EnumError> {
        units_group(p, 0)?;
        Ok(Generator {
            p,
            bound,
            memo: HashMap::new(),
        })
    }

    fn rings(&mut self, e: u32) -> Result<Arc<Vec<SchurRing>>, EnumError> {
        if let Some(r) = self.memo.get(&e) {
            return Ok(r.clone());
        }
        let (rings, _) = self.generate(e)?;
        Ok(rings)
    }

    /// Rings over `Z_{p^e}` with provenance, memoizing the ring list.
    fn generate(&mut self, e: u32) -> Result<(Arc<Vec<SchurRing>>, Vec<Provenance>), EnumError> {
        let p = self.p;
        let n = checked_power(p, e, self.bound)?;
        let mut found: BTreeMap<GroupPartition, Provenance> = BTreeMap::new();

        found.entry(trivial_ring(n).into_partition()).or_default().trivial = true;
        for h in units_group(p, e)?.all_subgroups() {
            let prov = found.entry(orbit_ring(&h).into_partition()).or_default();
            prov.orbit.get_or_insert_with(|| h.elements().to_vec());
        }

        // chains 1 < K <= H < G, K of order p^a, H of order p^b
        let mut chains = Vec::new();
        for b in 1..e {
            for a in 1..=b {
                chains.push((a, b));
            }
        }
        let mut factors = HashMap::new();
        for &(a, b) in &chains {
            for sub in [b, e - a] {
                if let std::collections::hash_map::Entry::Vacant(e) = factors.entry(sub) {
                    e.insert(self.rings(sub)?);
                }
            }
        }
        // One chain at a time, keeping only partitions not yet seen, so
        // duplicates across chains are never held in memory together.
        for &(a, b) in &chains {
            let (k, h) = (p.pow(a), p.pow(b));
            let q = h / k;
            let mut by_key: HashMap<GroupPartition, Vec<&SchurRing>> = HashMap::new();
            for t in factors[&(e - a)].iter() {
                if let Ok(key) = t.partition().restrict_to(q) {
                    by_key.entry(key).or_default().push(t);
                }
            }
            let fresh: Vec<GroupPartition> = factors[&b]
                .par_iter()
                .flat_map_iter(|s| {
                    let key = s.partition().project(q).ok();
                    let ts = key.and_then(|key| by_key.get(&key)).map(Vec::as_slice).unwrap_or(&[]);
                    ts.iter().map(move |t| wedge_unchecked(s, k, t).into_partition())
                })
                .filter(|w| found.get(w).is_none_or(|prov| prov.wedge.is_none()))
                .collect();
            for part in fresh {
                found.entry(part).or_default().wedge.get_or_insert((k, h));
            }
        }

        let (parts, provenance): (Vec<_>, Vec<_>) = found.into_iter().unzip();
        let rings = Arc::new(parts.into_iter().map(SchurRing::unchecked).collect::<Vec<_>>());
        self.memo.insert(e, rings.clone());
        Ok((rings, provenance))
    }
}

/// Every Schur ring over `Z_n` by exhaustive search over inverse-closed
/// partitions. `budget` caps the number of partial states visited.
pub fn enumerate_bruteforce(n: u64, budget: u64) -> Result<EnumerationResult, EnumError> {
    if n == 0 {
        return Err(EnumError::NotPrimePower(0));
    }
    let pairs: Vec<Vec<u64>> = (1..n)
        .filter(|&g| g <= n - g)
        .map(|g| if g == n - g { vec![g] } else { vec![g, n - g] })
        .collect();
    let mut search = BruteSearch {
        n,
        pairs,
        budget,
        states: 0,
        found: BTreeSet::new(),
    };
    let mut groups: Vec<Vec<usize>> = Vec::new();
    search.assign(0, &mut groups)?;
    let rings: Vec<GroupPartition> = search.found.into_iter().collect();
    if n > 1 && prime_power(n).is_none() {
        return Err(EnumError::NotPrimePower(n));
    }
    EnumerationResult::new(n, Method::BruteForce, rings, Vec::new())
}

struct BruteSearch {
    n: u64,
    /// The classes `{g, -g}` of nonzero residues.
    pairs: Vec<Vec<u64>>,
    budget: u64,
    states: u64,
    found: BTreeSet<GroupPartition>,
}

impl BruteSearch {
    fn tick(&mut self) -> Result<(), EnumError> {
        self.states += 1;
        if self.states > self.budget {
            Err(EnumError::BudgetExhausted { budget: self.budget })
        } else {
            Ok(())
        }
    }

    /// Sets pair `i` into one of the existing groups or a new one.
    fn assign(&mut self, i: usize, groups: &mut Vec<Vec<usize>>) -> Result<(), EnumError> {
        self.tick()?;
        if i == self.pairs.len() {
            let mut blocks = vec![vec![0]];
            return self.split(0, groups, &mut blocks);
        }
        for gi in 0..groups.len() {
            groups[gi].push(i);
            self.assign(i + 1, groups)?;
            groups[gi].pop();
        }
        groups.push(vec![i]);
        self.assign(i + 1, groups)?;
        groups.pop();
        Ok(())
    }

    /// Each group is one symmetric block or a pair of blocks `B`, `-B`.
    fn split(&mut self, gi: usize, groups: &[Vec<usize>], blocks: &mut Vec<Vec<u64>>) -> Result<(), EnumError> {
        self.tick()?;
        if gi == groups.len() {
            let part = GroupPartition::new(self.n, blocks.clone()).expect("pairs partition Z_n");
            if is_schur_ring(&part).is_ok() {
                self.found.insert(part);
            }
            return Ok(());
        }
        let group = &groups[gi];
        let whole: Vec<u64> = group.iter().flat_map(|&i| self.pairs[i].iter().copied()).collect();
        blocks.push(whole);
        self.split(gi + 1, groups, blocks)?;
        blocks.pop();

        if group.iter().any(|&i| self.pairs[i].len() == 1) {
            return Ok(());
        }
        // the first pair's orientation is fixed to avoid counting B, -B twice
        let free = group.len() - 1;
        for mask in 0u64..(1 << free) {
            let (mut b, mut neg) = (Vec::new(), Vec::new());
            for (bit, &i) in group.iter().enumerate() {
                let (x, y) = (self.pairs[i][0], self.pairs[i][1]);
                if bit > 0 && mask >> (bit - 1) & 1 == 1 {
                    b.push(y);
                    neg.push(x);
                } else {
                    b.push(x);
                    neg.push(y);
                }
            }
            blocks.push(b);
            blocks.push(neg);
            self.split(gi + 1, groups, blocks)?;
            blocks.pop();
            blocks.pop();
        }
        Ok(())
    }
}

/// Rings grouped by the subfield they map onto.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubfieldTally {
    pub modulus: u64,
    pub fields: Vec<FieldCount>,
    /// Total count per layer.
    pub by_layer: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldCount {
    pub subgroup: Vec<u64>,
    pub layer: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub count: usize,
}

/// Per-field and per-layer counts. Every subfield of `Q(zeta_n)` appears,
/// including those no ring maps onto.
pub fn tally_by_subfield(r: &EnumerationResult) -> Result<SubfieldTally, EnumError> {
    let (p, e) = split_modulus(r.modulus)?;
    let mut fields = Vec::new();
    let mut by_layer = BTreeMap::new();
    for h in units_group(p, e)?.all_subgroups() {
        let layer = layer_of(&h)?;
        let count = r.tally.get(&h).copied().unwrap_or(0);
        let field = (p == 2)
            .then(|| classify_two_power(&h).map(|f| f.to_string()))
            .transpose()?;
        *by_layer.entry(layer).or_insert(0) += count;
        fields.push(FieldCount {
            subgroup: h.elements().to_vec(),
            layer,
            field,
            count,
        });
    }
    fields.sort_by(|a, b| {
        a.layer
            .cmp(&b.layer)
            .then_with(|| a.subgroup.len().cmp(&b.subgroup.len()).reverse())
            .then_with(|| a.subgroup.cmp(&b.subgroup))
    });
    Ok(SubfieldTally {
        modulus: r.modulus,
        fields,
        by_layer,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrosscheckReport {
    pub p: u64,
    pub n: u32,
    pub modulus: u64,
    pub count: usize,
    pub lines: Vec<CheckLine>,
}

impl CrosscheckReport {
    pub fn ok(&self) -> bool {
        self.lines.iter().all(|l| l.ok)
    }

    fn push(&mut self, check: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.lines.push(CheckLine::new(check, ok, detail));
    }
}

/// The number of rings expected to map onto the field fixed by `h`.
pub fn expected_field_count(p: u64, n: u32, h: &SubgroupOfUnits) -> Result<BigInt, EnumError> {
    let n_us = n as usize;
    let k = layer_of(h)?;
    let value = if p == 2 {
        let table = TwoOmegaTable::build(n_us.max(1));
        match classify_two_power(h)? {
            TwoPowerField::Rational => table.layer(n_us, 0).cloned(),
            TwoPowerField::Cyclotomic(k) => table.layer(n_us, k).cloned(),
            TwoPowerField::Plus(k) | TwoPowerField::Minus(k) => table.sym(n_us, k).cloned(),
        }
    } else {
        let x = BigInt::from(PrimeSpec::new(p, n_us).map_err(|_| UnitsError::InvalidPrime(p))?.x());
        OddOmegaTable::build(n_us).layer(n_us, k).map(|poly| poly.eval(&x))
    };
    Ok(value.expect("layer lies in range"))
}

/// Binds enumeration to the counting formulas: total count, the expected
/// tally of every subfield, one ring per top-layer field, and agreement with
/// brute force when `brute_budget` is given and the search fits.
pub fn crosscheck(
    p: u64,
    n: u32,
    opts: &EnumOptions,
    brute_budget: Option<u64>,
) -> Result<CrosscheckReport, EnumError> {
    let r = enumerate_constructive_with(p, n, opts)?;
    let mut report = CrosscheckReport {
        p,
        n,
        modulus: r.modulus,
        count: r.count(),
        lines: Vec::new(),
    };
    report.push("axioms", true, format!("all {} rings pass the axiom check", r.count()));

    let formula = if p == 2 {
        TwoOmegaTable::build(n as usize).total(n as usize).clone()
    } else {
        let spec = PrimeSpec::new(p, n as usize).map_err(|_| UnitsError::InvalidPrime(p))?;
        omega_odd_eval(&spec).expect("odd prime")
    };
    let count = BigInt::from(r.count());
    report.push(
        "count",
        count == formula,
        format!("enumerated {count}, formula {formula}"),
    );

    let tally = tally_by_subfield(&r)?;
    let mut tally_ok = true;
    let mut mismatches = Vec::new();
    let mut top_ok = true;
    for field in &tally.fields {
        let h = SubgroupOfUnits::new(r.modulus, field.subgroup.iter().copied())?;
        let expected = expected_field_count(p, n, &h)?;
        if BigInt::from(field.count) != expected {
            tally_ok = false;
            mismatches.push(format!("{:?}: {} vs {}", field.subgroup, field.count, expected));
        }
        if field.layer == n as usize && n > 0 && field.count != 1 {
            top_ok = false;
        }
    }
    let layers: Vec<String> = tally.by_layer.iter().map(|(k, c)| format!("{k}:{c}")).collect();
    report.push(
        "tallies",
        tally_ok,
        if tally_ok {
            format!(
                "per-field tallies match the layer formulas (by layer {})",
                layers.join(" ")
            )
        } else {
            mismatches.join("; ")
        },
    );
    report.push("top-layer", top_ok, "exactly one ring per top-layer field");

    if let Some(budget) = brute_budget {
        match enumerate_bruteforce(r.modulus, budget) {
            Ok(b) => report.push(
                "brute-force",
                b.rings == r.rings,
                format!("brute force found {} rings", b.count()),
            ),
            Err(EnumError::BudgetExhausted { budget }) => {
                report.push("brute-force", true, format!("skipped: budget {budget} exhausted"))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}
