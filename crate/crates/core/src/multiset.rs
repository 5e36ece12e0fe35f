//! The unique-multiset engine.
//!
//! For zero sets `Z_1..Z_k` (each a `(k-1)`-subset of `[n]`), an *outcome*
//! is a permutation `σ` of `[k]` together with subsets `S_i ⊆ Z_i` of size
//! `σ(i) - 1`; its union is the multiset `⊎ S_i`. The conjecture asks for a
//! union realized by exactly one outcome. Such a union is the exponent
//! multiset of a monomial of `det(A)` with coefficient `±1`, which makes
//! `det(A)` nonzero (see [`crate::symdet`]).
//!
//! Enumeration packs every multiset into a `u128`: columns that occur in
//! some `Z_i` get dense slots of `ceil(log2 k)` bits holding their count, so
//! the union of selections is a plain sum of per-subset keys.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combin::{binomial, factorial, permutations, subsets_of_size};
use crate::pattern::first_violating_subset;
use crate::symdet::{self, ExponentMultiset, SymdetError};

/// Guard on the number of outcomes enumerated for one family.
pub const MAX_OUTCOMES: u64 = 100_000_000;

/// Cap on families visited by a sweep that is not canonicalized.
pub const RAW_SWEEP_BUDGET: u64 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultisetError {
    #[error("{0} outcomes exceed the enumeration limit {MAX_OUTCOMES}")]
    TooLarge(u64),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error(transparent)]
    Shape(#[from] SymdetError),
}

/// Zero sets `Z_1..Z_k`, 1-based columns, each sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZFamily {
    n: usize,
    zeros: Vec<Vec<usize>>,
}

/// Wire form: `{"k": .., "n": .., "zeros": [[..], ..]}`. `k` is optional on
/// input and inferred from `zeros`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZFamilyJson {
    #[serde(default)]
    pub k: Option<usize>,
    pub n: usize,
    pub zeros: Vec<Vec<usize>>,
}

impl ZFamily {
    /// Validates sizes and the intersection condition
    /// `|∩_{i ∈ I} Z_i| <= k - |I|` for all nonempty `I`.
    pub fn new(n: usize, mut zeros: Vec<Vec<usize>>) -> Result<Self, MultisetError> {
        if zeros.is_empty() {
            return Err(MultisetError::InvalidFamily("no zero sets".into()));
        }
        if n == 0 || n > 64 {
            return Err(MultisetError::InvalidFamily(format!(
                "n = {n} is outside [1, 64]"
            )));
        }
        symdet::validate_family(n, &zeros)?;
        for z in &mut zeros {
            z.sort_unstable();
        }
        let fam = ZFamily { n, zeros };
        if let Some(w) = fam.violation() {
            return Err(MultisetError::InvalidFamily(format!(
                "zero sets {w:?} share too many columns"
            )));
        }
        Ok(fam)
    }

    pub fn from_json(j: &ZFamilyJson) -> Result<Self, MultisetError> {
        if let Some(k) = j.k {
            if k != j.zeros.len() {
                return Err(MultisetError::InvalidFamily(format!(
                    "k = {k} but {} zero sets given",
                    j.zeros.len()
                )));
            }
        }
        Self::new(j.n, j.zeros.clone())
    }

    pub fn to_json(&self) -> ZFamilyJson {
        ZFamilyJson {
            k: Some(self.k()),
            n: self.n,
            zeros: self.zeros.clone(),
        }
    }

    pub fn k(&self) -> usize {
        self.zeros.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn zeros(&self) -> &[Vec<usize>] {
        &self.zeros
    }

    pub(crate) fn masks(&self) -> Vec<u64> {
        self.zeros
            .iter()
            .map(|z| z.iter().fold(0u64, |m, &c| m | 1 << (c - 1)))
            .collect()
    }

    fn violation(&self) -> Option<Vec<usize>> {
        let k = self.k() as i64;
        first_violating_subset(
            &self.masks(),
            u64::MAX,
            |a, b| a & b,
            |members, inter| inter.count_ones() as i64 > k - members.len() as i64,
        )
        .map(|(w, _)| w)
    }

    /// Reorders the zero sets: new `Z_i` is old `Z_{order[i]}` (0-based).
    pub fn reordered(&self, order: &[usize]) -> ZFamily {
        ZFamily {
            n: self.n,
            zeros: order.iter().map(|&i| self.zeros[i].clone()).collect(),
        }
    }

    /// Applies a column relabeling `col -> map[col - 1]` (1-based targets).
    pub fn relabeled(&self, map: &[usize]) -> ZFamily {
        ZFamily {
            n: self.n,
            zeros: self
                .zeros
                .iter()
                .map(|z| {
                    let mut v: Vec<usize> = z.iter().map(|&c| map[c - 1]).collect();
                    v.sort_unstable();
                    v
                })
                .collect(),
        }
    }
}

/// One `(σ, S_1..S_k)` choice; `sigma` is 1-based one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultisetOutcome {
    pub sigma: Vec<usize>,
    pub selections: Vec<Vec<usize>>,
    pub union: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessReport {
    pub total_outcomes: u64,
    pub histogram: BTreeMap<ExponentMultiset, u64>,
    /// Multisets realized exactly once, ascending.
    pub unique_witnesses: Vec<ExponentMultiset>,
    /// Union of the first outcome, in enumeration order, whose union is unique.
    pub first_unique: Option<ExponentMultiset>,
    pub holds: bool,
}

impl UniquenessReport {
    pub fn count(&self, m: &ExponentMultiset) -> u64 {
        self.histogram.get(m).copied().unwrap_or(0)
    }

    /// The unique multiset met first in enumeration order, if any.
    pub fn witness(&self) -> Option<&ExponentMultiset> {
        self.first_unique.as_ref()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjectureVerdict {
    pub holds: bool,
    pub witness: Option<ExponentMultiset>,
    pub total_outcomes: u64,
}

/// `Σ_σ ∏_i C(k-1, σ(i)-1)`. The sizes `σ(i) - 1` always run over `0..k`,
/// so every permutation contributes `∏_d C(k-1, d)`.
pub fn outcome_count(k: usize) -> u64 {
    let per_sigma: u128 = (0..k as u64)
        .map(|d| binomial(k as u64 - 1, d) as u128)
        .product();
    (factorial(k as u64) as u128 * per_sigma).min(u64::MAX as u128) as u64
}

struct PackedFamily {
    k: usize,
    bits: u32,
    /// Dense slot -> original column.
    columns: Vec<usize>,
    /// keys[i][d]: packed keys of the d-subsets of Z_i, combinadic order.
    keys: Vec<Vec<Vec<u128>>>,
}

impl PackedFamily {
    fn new(fam: &ZFamily) -> Result<Self, MultisetError> {
        let k = fam.k();
        let total = outcome_count(k);
        if total > MAX_OUTCOMES {
            return Err(MultisetError::TooLarge(total));
        }
        let mut columns: Vec<usize> = fam.zeros.iter().flatten().copied().collect();
        columns.sort_unstable();
        columns.dedup();
        // Counts never exceed k - 1.
        let bits = (usize::BITS - (k.max(2) - 1).leading_zeros()).max(1);
        if bits as usize * columns.len() > 128 {
            return Err(MultisetError::TooLarge(total));
        }
        let slot = |c: usize| columns.binary_search(&c).unwrap() as u32;
        let keys = fam
            .zeros
            .iter()
            .map(|z| {
                (0..k)
                    .map(|d| {
                        subsets_of_size(z, d)
                            .iter()
                            .map(|s| s.iter().map(|&c| 1u128 << (slot(c) * bits)).sum())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(PackedFamily {
            k,
            bits,
            columns,
            keys,
        })
    }

    fn decode(&self, key: u128) -> ExponentMultiset {
        let mask = (1u128 << self.bits) - 1;
        let mut out = Vec::new();
        for (s, &c) in self.columns.iter().enumerate() {
            let count = (key >> (s as u32 * self.bits)) & mask;
            out.extend(std::iter::repeat_n(c as u16, count as usize));
        }
        ExponentMultiset::new(out)
    }

    /// Every outcome's packed union, in enumeration order and sorted.
    fn keys(&self) -> (Vec<u128>, Vec<u128>) {
        let mut ordered = Vec::with_capacity(outcome_count(self.k) as usize);
        self.walk(0, 0, 0, &mut ordered);
        let mut sorted = ordered.clone();
        sorted.sort_unstable();
        (ordered, sorted)
    }

    fn walk(&self, row: usize, used_sizes: u32, acc: u128, out: &mut Vec<u128>) {
        if row == self.k {
            out.push(acc);
            return;
        }
        for d in 0..self.k {
            if used_sizes >> d & 1 == 1 {
                continue;
            }
            for &key in &self.keys[row][d] {
                self.walk(row + 1, used_sizes | 1 << d, acc + key, out);
            }
        }
    }
}

/// First key of `ordered` occurring exactly once in `sorted`.
fn first_unique(ordered: &[u128], sorted: &[u128]) -> Option<u128> {
    ordered.iter().copied().find(|key| {
        let at = sorted.partition_point(|x| x < key);
        sorted.get(at + 1) != Some(key)
    })
}

/// Runs of equal keys as `(key, count)`.
fn runs(sorted: &[u128]) -> impl Iterator<Item = (u128, u64)> + '_ {
    let mut i = 0;
    std::iter::from_fn(move || {
        if i >= sorted.len() {
            return None;
        }
        let key = sorted[i];
        let start = i;
        while i < sorted.len() && sorted[i] == key {
            i += 1;
        }
        Some((key, (i - start) as u64))
    })
}

/// Exhaustive histogram of outcome unions.
pub fn enumerate_outcomes(fam: &ZFamily) -> Result<UniquenessReport, MultisetError> {
    let packed = PackedFamily::new(fam)?;
    let (ordered, keys) = packed.keys();
    let histogram: BTreeMap<ExponentMultiset, u64> = runs(&keys)
        .map(|(key, c)| (packed.decode(key), c))
        .collect();
    let unique_witnesses: Vec<ExponentMultiset> = histogram
        .iter()
        .filter(|(_, &c)| c == 1)
        .map(|(m, _)| m.clone())
        .collect();
    Ok(UniquenessReport {
        total_outcomes: keys.len() as u64,
        holds: !unique_witnesses.is_empty(),
        first_unique: first_unique(&ordered, &keys).map(|k| packed.decode(k)),
        histogram,
        unique_witnesses,
    })
}

/// Whether some union is unique, with the first such union in enumeration
/// order (`σ` lexicographic, then combinadic selections, later rows fastest).
pub fn check_conjecture(fam: &ZFamily) -> Result<ConjectureVerdict, MultisetError> {
    let packed = PackedFamily::new(fam)?;
    let (ordered, sorted) = packed.keys();
    let witness = first_unique(&ordered, &sorted).map(|k| packed.decode(k));
    Ok(ConjectureVerdict {
        holds: witness.is_some(),
        witness,
        total_outcomes: ordered.len() as u64,
    })
}

/// All outcomes in enumeration order: `σ` lexicographic, then each `S_i`
/// in combinadic order with later rows varying fastest.
pub fn outcomes(fam: &ZFamily) -> Result<Vec<MultisetOutcome>, MultisetError> {
    let total = outcome_count(fam.k());
    if total > MAX_OUTCOMES {
        return Err(MultisetError::TooLarge(total));
    }
    let k = fam.k();
    let mut out = Vec::with_capacity(total as usize);
    for sigma in permutations(k) {
        let choices: Vec<Vec<Vec<usize>>> = (0..k)
            .map(|i| subsets_of_size(&fam.zeros[i], sigma[i]))
            .collect();
        let mut index = vec![0usize; k];
        loop {
            let selections: Vec<Vec<usize>> =
                (0..k).map(|i| choices[i][index[i]].clone()).collect();
            let mut union: Vec<usize> = selections.iter().flatten().copied().collect();
            union.sort_unstable();
            out.push(MultisetOutcome {
                sigma: sigma.iter().map(|s| s + 1).collect(),
                selections,
                union,
            });
            let Some(pos) = (0..k).rev().find(|&i| index[i] + 1 < choices[i].len()) else {
                break;
            };
            index[pos] += 1;
            for j in pos + 1..k {
                index[j] = 0;
            }
        }
    }
    Ok(out)
}

/// Outcomes whose union equals `m`.
pub fn realizations(
    fam: &ZFamily,
    m: &ExponentMultiset,
) -> Result<Vec<MultisetOutcome>, MultisetError> {
    let target = m.to_vec();
    Ok(outcomes(fam)?
        .into_iter()
        .filter(|o| o.union == target)
        .collect())
}

/// Checks the monomial correspondence against the symbolic determinant:
/// every unique union has coefficient `±1`, every monomial is some union
/// with `|coefficient| <=` its multiplicity, and a zero determinant means no
/// unique union.
pub fn cross_check_with_symdet(fam: &ZFamily) -> Result<bool, MultisetError> {
    let report = enumerate_outcomes(fam)?;
    let poly = symdet::symbolic_det(fam.n, &fam.zeros)?;
    let units = report
        .unique_witnesses
        .iter()
        .all(|m| poly.coefficient(m).abs() == 1);
    let support = poly
        .terms()
        .all(|(m, c)| c.unsigned_abs() <= report.count(m));
    let zero_rule = !poly.is_zero() || !report.holds;
    Ok(units && support && zero_rule)
}

// ---------------------------------------------------------------------------
// Canonical forms and sweeps

/// Canonical key of a family up to column relabeling and reordering of the
/// zero sets. Each used column is described by the set of rows whose zero
/// set contains it (a `k`-bit mask); the key is the lexicographically
/// smallest sorted list of column masks over all row permutations.
pub fn canonical_key(fam: &ZFamily) -> Vec<u32> {
    let k = fam.k();
    let masks = column_masks(fam);
    permutations(k)
        .iter()
        .map(|p| {
            let mut v: Vec<u32> = masks.iter().map(|&m| permute_mask(m, p)).collect();
            v.sort_unstable();
            v
        })
        .min()
        .unwrap_or_default()
}

fn column_masks(fam: &ZFamily) -> Vec<u32> {
    let mut by_col = vec![0u32; fam.n];
    for (i, z) in fam.zeros.iter().enumerate() {
        for &c in z {
            by_col[c - 1] |= 1 << i;
        }
    }
    by_col.into_iter().filter(|&m| m != 0).collect()
}

/// Row `i` of the input becomes row `perm[i]`.
fn permute_mask(m: u32, perm: &[usize]) -> u32 {
    perm.iter()
        .enumerate()
        .filter(|(i, _)| m >> i & 1 == 1)
        .fold(0, |acc, (_, &to)| acc | 1 << to)
}

/// Family whose columns, in order, have the given row masks.
fn family_from_masks(k: usize, masks: &[u32]) -> ZFamily {
    let mut zeros = vec![Vec::new(); k];
    for (c, &m) in masks.iter().enumerate() {
        for (i, z) in zeros.iter_mut().enumerate() {
            if m >> i & 1 == 1 {
                z.push(c + 1);
            }
        }
    }
    ZFamily {
        n: masks.len().max(1),
        zeros,
    }
}

/// Every valid family up to isomorphism with all columns used and at most
/// `n_max` columns, as canonical column-mask lists.
pub fn canonical_families(k: usize, n_max: usize) -> Vec<ZFamily> {
    if k == 1 {
        return vec![ZFamily {
            n: 1,
            zeros: vec![Vec::new()],
        }];
    }
    let full = (1u32 << k) - 1;
    let subset_limit: Vec<i32> = (0..=full)
        .map(|s| k as i32 - s.count_ones() as i32)
        .collect();
    let perms: Vec<Vec<usize>> = permutations(k).into_iter().skip(1).collect();
    let mut state = CanonSearch {
        k,
        full,
        n_max,
        subset_limit,
        covered: vec![0; full as usize + 1],
        degree: vec![0; k],
        columns: Vec::new(),
        perms,
        out: Vec::new(),
    };
    state.dfs(1);
    state.out
}

struct CanonSearch {
    k: usize,
    full: u32,
    n_max: usize,
    /// k - |I| for every row set I.
    subset_limit: Vec<i32>,
    /// covered[I] = number of chosen columns whose mask contains I.
    covered: Vec<i32>,
    degree: Vec<usize>,
    columns: Vec<u32>,
    perms: Vec<Vec<usize>>,
    out: Vec<ZFamily>,
}

impl CanonSearch {
    fn dfs(&mut self, next_mask: u32) {
        if self.degree.iter().all(|&d| d == self.k - 1) {
            if self.is_canonical() {
                self.out.push(family_from_masks(self.k, &self.columns));
            }
            return;
        }
        if self.columns.len() == self.n_max {
            return;
        }
        // The full mask would put a column in every zero set.
        for m in next_mask..self.full {
            if self.try_push(m) {
                self.dfs(m);
                self.pop(m);
            }
        }
    }

    fn try_push(&mut self, m: u32) -> bool {
        if (0..self.k).any(|i| m >> i & 1 == 1 && self.degree[i] == self.k - 1) {
            return false;
        }
        // Every nonempty I ⊆ m gains one covering column.
        let mut sub = m;
        while sub != 0 {
            if self.covered[sub as usize] + 1 > self.subset_limit[sub as usize] {
                return false;
            }
            sub = (sub - 1) & m;
        }
        let mut sub = m;
        while sub != 0 {
            self.covered[sub as usize] += 1;
            sub = (sub - 1) & m;
        }
        for i in 0..self.k {
            if m >> i & 1 == 1 {
                self.degree[i] += 1;
            }
        }
        self.columns.push(m);
        true
    }

    fn pop(&mut self, m: u32) {
        self.columns.pop();
        let mut sub = m;
        while sub != 0 {
            self.covered[sub as usize] -= 1;
            sub = (sub - 1) & m;
        }
        for i in 0..self.k {
            if m >> i & 1 == 1 {
                self.degree[i] -= 1;
            }
        }
    }

    fn is_canonical(&self) -> bool {
        let mut buf = vec![0u32; self.columns.len()];
        for p in &self.perms {
            for (b, &m) in buf.iter_mut().zip(&self.columns) {
                *b = permute_mask(m, p);
            }
            buf.sort_unstable();
            if buf < self.columns {
                return false;
            }
        }
        true
    }
}

/// Every valid ordered family of `(k-1)`-subsets of `[n]`, in lexicographic
/// order, stopping after `budget` families. Returns whether the budget ran out.
pub fn raw_families(k: usize, n: usize, budget: u64, out: &mut Vec<ZFamily>) -> bool {
    let cols: Vec<usize> = (1..=n).collect();
    let choices = subsets_of_size(&cols, k - 1);
    if choices.is_empty() {
        return false;
    }
    let mut index = vec![0usize; k];
    let mut visited = 0u64;
    loop {
        if visited == budget {
            return true;
        }
        visited += 1;
        let zeros: Vec<Vec<usize>> = index.iter().map(|&i| choices[i].clone()).collect();
        if let Ok(f) = ZFamily::new(n, zeros) {
            out.push(f);
        }
        let Some(pos) = (0..k).rev().find(|&i| index[i] + 1 < choices.len()) else {
            return false;
        };
        index[pos] += 1;
        for j in pos + 1..k {
            index[j] = 0;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampler {
    /// Number of valid families to check.
    pub budget: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepOptions {
    pub k: usize,
    /// Defaults to `k (k - 1)`, the largest possible column count.
    pub n_max: Option<usize>,
    pub canonicalize: bool,
    pub sampler: Option<Sampler>,
}

/// One checked family, in the shape of a sweep output line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRecord {
    pub n: usize,
    pub zeros: Vec<Vec<usize>>,
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
    pub outcomes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub k: usize,
    pub n_max: usize,
    pub mode: &'static str,
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
    /// Per column count `n`: `[checked, passed]`.
    pub per_n: BTreeMap<usize, [u64; 2]>,
    pub budget_exhausted: bool,
    pub counterexamples: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub records: Vec<SweepRecord>,
    pub summary: SweepSummary,
}

/// Generates the families a sweep should check.
///
/// * canonical: one family per isomorphism class, grouped by the number of
///   columns actually used (a family on `[n]` with unused columns is
///   isomorphic to one counted at a smaller `n`);
/// * raw: every valid ordered family on `[n]` for each `n` in `k-1..=n_max`;
/// * sampled: `budget` random valid families with `n` uniform in `k..=n_max`.
fn sweep_families(opts: &SweepOptions) -> Result<(Vec<ZFamily>, bool), MultisetError> {
    let k = opts.k;
    if k == 0 {
        return Err(MultisetError::InvalidFamily("k must be positive".into()));
    }
    let n_max = opts.n_max.unwrap_or(k * (k - 1)).max(1);
    if let Some(s) = opts.sampler {
        let lo = k.max(1);
        if n_max < lo {
            return Ok((Vec::new(), false));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
        let mut out = Vec::with_capacity(s.budget as usize);
        let max_attempts = s.budget.saturating_mul(1000).max(1000);
        let mut attempts = 0u64;
        while (out.len() as u64) < s.budget && attempts < max_attempts {
            attempts += 1;
            let n = rng.gen_range(lo..=n_max);
            let zeros: Vec<Vec<usize>> = (0..k)
                .map(|_| {
                    let mut z: Vec<usize> = rand::seq::index::sample(&mut rng, n, k - 1)
                        .into_iter()
                        .map(|c| c + 1)
                        .collect();
                    z.sort_unstable();
                    z
                })
                .collect();
            if let Ok(f) = ZFamily::new(n, zeros) {
                out.push(f);
            }
        }
        let short = (out.len() as u64) < s.budget;
        return Ok((out, short));
    }
    if opts.canonicalize {
        let mut fams = canonical_families(k, n_max);
        fams.sort_by_key(|f| f.n);
        return Ok((fams, false));
    }
    let mut out = Vec::new();
    let mut exhausted = false;
    for n in k.saturating_sub(1).max(1)..=n_max {
        let left = RAW_SWEEP_BUDGET.saturating_sub(out.len() as u64);
        if raw_families(k, n, left, &mut out) || out.len() as u64 >= RAW_SWEEP_BUDGET {
            exhausted = true;
            break;
        }
    }
    Ok((out, exhausted))
}

/// Checks the conjecture on every family of the sweep, in parallel, with
/// results in generation order.
pub fn sweep_instances(opts: &SweepOptions) -> Result<SweepReport, MultisetError> {
    let (families, budget_exhausted) = sweep_families(opts)?;
    let records: Vec<SweepRecord> = families
        .par_iter()
        .map(|f| {
            let v = check_conjecture(f)?;
            Ok(SweepRecord {
                n: f.n,
                zeros: f.zeros.clone(),
                holds: v.holds,
                witness: v.witness.map(|w| w.to_vec()),
                outcomes: v.total_outcomes,
            })
        })
        .collect::<Result<_, MultisetError>>()?;
    let k = opts.k;
    let mut summary = SweepSummary {
        k,
        n_max: opts.n_max.unwrap_or(k * (k - 1)).max(1),
        mode: match (opts.sampler.is_some(), opts.canonicalize) {
            (true, _) => "sampled",
            (false, true) => "canonical",
            (false, false) => "raw",
        },
        checked: 0,
        passed: 0,
        failed: 0,
        per_n: BTreeMap::new(),
        budget_exhausted,
        counterexamples: Vec::new(),
    };
    for r in &records {
        summary.checked += 1;
        let slot = summary.per_n.entry(r.n).or_insert([0, 0]);
        slot[0] += 1;
        if r.holds {
            summary.passed += 1;
            slot[1] += 1;
        } else {
            summary.failed += 1;
            summary.counterexamples.push(r.zeros.clone());
        }
    }
    Ok(SweepReport { records, summary })
}
