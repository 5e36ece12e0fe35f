//! Zero patterns, the MDS Condition, and support reduction.
//!
//! A [`ZeroPattern`] is a `k x n` binary matrix; row `i` has support
//! `R_i = {j : m_ij = 1}` and zero set `Z_i = [n] \ R_i`. Columns are
//! 1-based in every public API and stored as bits `j - 1` of a `u64`.
//!
//! The MDS Condition asks `|U_{i in I} R_i| >= n - k + |I|` for every nonempty
//! `I ⊆ [k]`. [`check_mds_condition`] evaluates all `2^k - 1` subsets in
//! lexicographic order of their sorted index lists, so the first violation
//! found is the lexicographically smallest witness.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::FieldElement;
use crate::matrix::FieldMatrix;

/// Column capacity of the bitset representation.
pub const MAX_COLUMNS: usize = 64;
/// Row cap for exhaustive subset enumeration.
pub const MAX_CHECKED_ROWS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("pattern needs 1 <= k <= n, got k = {k}, n = {n}")]
    BadShape { k: usize, n: usize },
    #[error("at most {MAX_COLUMNS} columns are supported, got {0}")]
    TooManyColumns(usize),
    #[error("exhaustive subset checks are capped at {MAX_CHECKED_ROWS} rows, got {0}")]
    TooManyRows(usize),
    #[error("row {row} has length {found}, expected {expected}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("entry ({row}, {col}) is {value}, expected 0 or 1")]
    NotBinary { row: usize, col: usize, value: u64 },
    #[error("column index {col} in row {row} is outside [1, {n}]")]
    ColumnOutOfRange { row: usize, col: usize, n: usize },
    #[error("pattern JSON must contain exactly one of \"rows\" or \"zeros\"")]
    AmbiguousEncoding,
    #[error("the MDS Condition fails for rows {witness:?}")]
    PreconditionViolated {
        witness: Vec<usize>,
        union_size: usize,
    },
    #[error("matrix is {rows}x{cols} but pattern is {k}x{n}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        k: usize,
        n: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZeroPattern {
    k: usize,
    n: usize,
    rows: Vec<u64>,
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// 1-based indices of the set bits.
pub(crate) fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b + 1)
        .collect()
}

pub(crate) fn indices_mask(row: usize, cols: &[usize], n: usize) -> Result<u64, PatternError> {
    let mut mask = 0;
    for &col in cols {
        if col == 0 || col > n {
            return Err(PatternError::ColumnOutOfRange { row, col, n });
        }
        mask |= 1u64 << (col - 1);
    }
    Ok(mask)
}

fn check_shape(k: usize, n: usize) -> Result<(), PatternError> {
    if n > MAX_COLUMNS {
        return Err(PatternError::TooManyColumns(n));
    }
    if k == 0 || k > n {
        return Err(PatternError::BadShape { k, n });
    }
    Ok(())
}

impl ZeroPattern {
    /// From support bitmasks (bit `j - 1` set iff `m_ij = 1`).
    pub fn from_masks(n: usize, rows: Vec<u64>) -> Result<Self, PatternError> {
        check_shape(rows.len(), n)?;
        let full = full_mask(n);
        for (i, &r) in rows.iter().enumerate() {
            if r & !full != 0 {
                let col = 64 - (r & !full).leading_zeros() as usize;
                return Err(PatternError::ColumnOutOfRange { row: i + 1, col, n });
            }
        }
        Ok(ZeroPattern {
            k: rows.len(),
            n,
            rows,
        })
    }

    pub fn from_binary_rows(rows: &[Vec<u64>]) -> Result<Self, PatternError> {
        let n = rows.first().map_or(0, Vec::len);
        check_shape(rows.len(), n)?;
        let mut masks = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(PatternError::RowLength {
                    row: i + 1,
                    expected: n,
                    found: row.len(),
                });
            }
            let mut mask = 0u64;
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => mask |= 1 << j,
                    _ => {
                        return Err(PatternError::NotBinary {
                            row: i + 1,
                            col: j + 1,
                            value: v,
                        })
                    }
                }
            }
            masks.push(mask);
        }
        Self::from_masks(n, masks)
    }

    /// From supports `R_i` given as 1-based column lists.
    pub fn from_supports(n: usize, supports: &[Vec<usize>]) -> Result<Self, PatternError> {
        check_shape(supports.len(), n)?;
        let masks = supports
            .iter()
            .enumerate()
            .map(|(i, s)| indices_mask(i + 1, s, n))
            .collect::<Result<_, _>>()?;
        Self::from_masks(n, masks)
    }

    /// From zero sets `Z_i` given as 1-based column lists.
    pub fn from_zeros(n: usize, zeros: &[Vec<usize>]) -> Result<Self, PatternError> {
        check_shape(zeros.len(), n)?;
        let full = full_mask(n);
        let masks = zeros
            .iter()
            .enumerate()
            .map(|(i, z)| indices_mask(i + 1, z, n).map(|m| full & !m))
            .collect::<Result<_, _>>()?;
        Self::from_masks(n, masks)
    }

    pub fn all_ones(k: usize, n: usize) -> Result<Self, PatternError> {
        check_shape(k, n)?;
        Self::from_masks(n, vec![full_mask(n); k])
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Support bitmask of row `i` (0-based).
    #[inline]
    pub fn support_mask(&self, i: usize) -> u64 {
        self.rows[i]
    }

    #[inline]
    pub fn zero_mask(&self, i: usize) -> u64 {
        full_mask(self.n) & !self.rows[i]
    }

    pub fn support_masks(&self) -> &[u64] {
        &self.rows
    }

    /// `R_i` as sorted 1-based columns; `i` is 0-based.
    pub fn support(&self, i: usize) -> Vec<usize> {
        mask_indices(self.rows[i])
    }

    /// `Z_i` as sorted 1-based columns; `i` is 0-based.
    pub fn zeros(&self, i: usize) -> Vec<usize> {
        mask_indices(self.zero_mask(i))
    }

    pub fn zero_sets(&self) -> Vec<Vec<usize>> {
        (0..self.k).map(|i| self.zeros(i)).collect()
    }

    /// Entry `m_ij`, 0-based indices.
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.rows[i].count_ones() as usize
    }

    /// Every row has weight exactly `n - k + 1`.
    pub fn is_reduced(&self) -> bool {
        let w = self.n - self.k + 1;
        (0..self.k).all(|i| self.row_weight(i) == w)
    }

    pub fn to_binary_rows(&self) -> Vec<Vec<u8>> {
        (0..self.k)
            .map(|i| (0..self.n).map(|j| self.entry(i, j) as u8).collect())
            .collect()
    }

    pub fn to_json(&self) -> PatternJson {
        PatternJson {
            k: self.k,
            n: self.n,
            rows: Some(
                self.to_binary_rows()
                    .into_iter()
                    .map(|r| r.into_iter().map(u64::from).collect())
                    .collect(),
            ),
            zeros: None,
        }
    }

    pub fn from_json(j: &PatternJson) -> Result<Self, PatternError> {
        let p = match (&j.rows, &j.zeros) {
            (Some(rows), None) => Self::from_binary_rows(rows)?,
            (None, Some(zeros)) => Self::from_zeros(j.n, zeros)?,
            _ => return Err(PatternError::AmbiguousEncoding),
        };
        if p.k != j.k || p.n != j.n {
            return Err(PatternError::DimensionMismatch {
                rows: p.k,
                cols: p.n,
                k: j.k,
                n: j.n,
            });
        }
        Ok(p)
    }
}

/// Wire form: `rows` (binary matrix) or `zeros` (1-based `Z_i` lists).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternJson {
    pub k: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeros: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub holds: bool,
    /// Lexicographically smallest violating index set (1-based).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub union_size: Option<usize>,
}

impl ConditionReport {
    pub(crate) fn from_violation(v: Option<(Vec<usize>, usize)>) -> Self {
        match v {
            None => ConditionReport {
                holds: true,
                witness: None,
                union_size: None,
            },
            Some((w, u)) => ConditionReport {
                holds: false,
                witness: Some(w),
                union_size: Some(u),
            },
        }
    }
}

/// Walks nonempty subsets of `sets` in lexicographic order of their sorted
/// index lists, folding each subset's sets with `combine` starting from
/// `identity`, and returns the first subset (1-based indices) for which
/// `violates(members, folded)` is true, together with the folded value.
pub(crate) fn first_violating_subset<F, V>(
    sets: &[u64],
    identity: u64,
    combine: F,
    mut violates: V,
) -> Option<(Vec<usize>, u64)>
where
    F: Fn(u64, u64) -> u64,
    V: FnMut(&[usize], u64) -> bool,
{
    let len = sets.len();
    // Explicit DFS: `stack[d]` is the folded value of the first `d + 1` members.
    let mut members: Vec<usize> = Vec::with_capacity(len);
    let mut stack: Vec<u64> = Vec::with_capacity(len);
    let mut next = 0usize;
    loop {
        if next < len {
            let acc = combine(stack.last().copied().unwrap_or(identity), sets[next]);
            members.push(next + 1);
            stack.push(acc);
            if violates(&members, acc) {
                return Some((members, acc));
            }
            next += 1;
        } else {
            match members.pop() {
                None => return None,
                Some(last) => {
                    stack.pop();
                    next = last; // last is 1-based, so this is the following index
                }
            }
        }
    }
}

/// Exhaustive MDS Condition check on the supports.
pub fn check_mds_condition(pat: &ZeroPattern) -> Result<ConditionReport, PatternError> {
    if pat.k > MAX_CHECKED_ROWS {
        return Err(PatternError::TooManyRows(pat.k));
    }
    Ok(ConditionReport::from_violation(violation(
        pat.n, pat.k, &pat.rows,
    )))
}

fn violation(n: usize, k: usize, rows: &[u64]) -> Option<(Vec<usize>, usize)> {
    let base = n as i64 - k as i64;
    first_violating_subset(
        rows,
        0,
        |a, b| a | b,
        |members, union| (union.count_ones() as i64) < base + members.len() as i64,
    )
    .map(|(w, u)| (w, u.count_ones() as usize))
}

/// The same condition in zero-set form: `|∩_{i in I} Z_i| <= k - |I|`.
pub fn check_mds_condition_dual(pat: &ZeroPattern) -> Result<ConditionReport, PatternError> {
    if pat.k > MAX_CHECKED_ROWS {
        return Err(PatternError::TooManyRows(pat.k));
    }
    let zeros: Vec<u64> = (0..pat.k).map(|i| pat.zero_mask(i)).collect();
    let k = pat.k as i64;
    let v = first_violating_subset(
        &zeros,
        full_mask(pat.n),
        |a, b| a & b,
        |members, inter| inter.count_ones() as i64 > k - members.len() as i64,
    );
    Ok(ConditionReport::from_violation(v.map(|(w, inter)| {
        (w, pat.n - inter.count_ones() as usize)
    })))
}

/// Shrinks every support to `n - k + 1` columns while keeping the MDS
/// Condition. For the first row (ascending) with weight `>= n - k + 2`, let
/// `a < b` be its two smallest columns: drop `a` if the condition survives,
/// otherwise drop `b`. Then rescan from the first row.
pub fn reduce_supports(pat: &ZeroPattern) -> Result<ZeroPattern, PatternError> {
    let report = check_mds_condition(pat)?;
    if !report.holds {
        return Err(PatternError::PreconditionViolated {
            witness: report.witness.unwrap_or_default(),
            union_size: report.union_size.unwrap_or_default(),
        });
    }
    let target = pat.n - pat.k + 1;
    let mut rows = pat.rows.clone();
    while let Some(r) = rows.iter().position(|m| m.count_ones() as usize > target) {
        let a = rows[r].trailing_zeros();
        let without_a = rows[r] & !(1u64 << a);
        let b = without_a.trailing_zeros();
        let original = rows[r];
        rows[r] = without_a;
        if violation(pat.n, pat.k, &rows).is_some() {
            rows[r] = original & !(1u64 << b);
            debug_assert!(
                violation(pat.n, pat.k, &rows).is_none(),
                "removing either of the two smallest columns broke the condition"
            );
        }
    }
    Ok(ZeroPattern {
        k: pat.k,
        n: pat.n,
        rows,
    })
}

/// True iff `g_ij = 0` wherever `m_ij = 0`.
pub fn fits(candidate: &FieldMatrix, pat: &ZeroPattern) -> Result<bool, PatternError> {
    if candidate.rows() != pat.k || candidate.cols() != pat.n {
        return Err(PatternError::DimensionMismatch {
            rows: candidate.rows(),
            cols: candidate.cols(),
            k: pat.k,
            n: pat.n,
        });
    }
    Ok((0..pat.k)
        .all(|i| (0..pat.n).all(|j| pat.entry(i, j) || candidate.get(i, j) == FieldElement::ZERO)))
}
