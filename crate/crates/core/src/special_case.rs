//! Explicit unique multiset for families whose zero sets pairwise share at
//! most one column.
//!
//! With `σ` the identity, row `i` selects `i - 1` of its zeros:
//!
//! 1. `S*_1 = ∅`;
//! 2. `S*_2 = {j'}` with `j'` the element of `(Z_2 ∩ Z_3) \ Z_1` when
//!    `Z_2 ∩ Z_3` is nonempty, else the smallest element of `Z_2 \ Z_1`;
//! 3. for `3 <= i < k`: the common element of `Z_i` with each `Z_{i'}`,
//!    `2 <= i' < i`; then the common element with `Z_{i+1}` if new; then the
//!    smallest unused elements of `Z_i` until `|S*_i| = i - 1`;
//! 4. `S*_k = Z_k`.
//!
//! The zero sets are first reordered so that `Z_2 ∩ Z_3`, if nonempty, is
//! not inside `Z_1`.

use serde::Serialize;
use thiserror::Error;

use crate::multiset::{enumerate_outcomes, MultisetError, ZFamily};
use crate::symdet::ExponentMultiset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecialCaseError {
    #[error("family has two zero sets sharing more than one column, or a common column")]
    NotApplicable,
    #[error(transparent)]
    Multiset(#[from] MultisetError),
}

/// Pairwise intersections of size at most one and an empty total intersection.
pub fn applies(fam: &ZFamily) -> bool {
    let masks = fam.masks();
    let pairwise = masks
        .iter()
        .enumerate()
        .all(|(i, a)| masks[i + 1..].iter().all(|b| (a & b).count_ones() <= 1));
    let common = masks.iter().fold(u64::MAX, |acc, m| acc & m);
    pairwise && common == 0
}

/// Lexicographically first reordering (new `Z_i` = old `Z_{order[i]}`,
/// 0-based) such that a nonempty `Z_2 ∩ Z_3` avoids `Z_1`.
pub fn reorder_for_step2(fam: &ZFamily) -> Result<(ZFamily, Vec<usize>), SpecialCaseError> {
    if !applies(fam) {
        return Err(SpecialCaseError::NotApplicable);
    }
    let k = fam.k();
    if k < 3 {
        let id: Vec<usize> = (0..k).collect();
        return Ok((fam.clone(), id));
    }
    let masks = fam.masks();
    // The lexicographically first permutation whose first three entries pass
    // the test has those entries lexicographically first and the rest ascending.
    for a in 0..k {
        for b in (0..k).filter(|&b| b != a) {
            for c in (0..k).filter(|&c| c != a && c != b) {
                let inter = masks[b] & masks[c];
                if inter == 0 || inter & !masks[a] != 0 {
                    let mut order = vec![a, b, c];
                    order.extend((0..k).filter(|x| ![a, b, c].contains(x)));
                    return Ok((fam.reordered(&order), order));
                }
            }
        }
    }
    Err(SpecialCaseError::NotApplicable)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarSelection {
    /// New `Z_i` is original `Z_{order[i]}`, reported 1-based.
    pub order: Vec<usize>,
    /// The reordered family the selections refer to.
    pub zeros: Vec<Vec<usize>>,
    pub selections: Vec<Vec<usize>>,
    pub multiset: Vec<usize>,
}

fn common(a: &[usize], b: &[usize]) -> Option<usize> {
    a.iter().copied().find(|x| b.contains(x))
}

/// Reorders, then builds `S*_1..S*_k` by the stepwise rule.
pub fn build_star_selection(fam: &ZFamily) -> Result<StarSelection, SpecialCaseError> {
    let (fam, order) = reorder_for_step2(fam)?;
    let z = fam.zeros();
    let k = fam.k();
    let mut selections: Vec<Vec<usize>> = Vec::with_capacity(k);
    for i in 1..=k {
        let zi = &z[i - 1];
        let s: Vec<usize> = if i == k {
            zi.clone()
        } else if i == 1 {
            Vec::new()
        } else if i == 2 {
            let j = match common(&z[1], &z[2]) {
                Some(j) => j,
                None => *z[1]
                    .iter()
                    .find(|x| !z[0].contains(x))
                    .ok_or(SpecialCaseError::NotApplicable)?,
            };
            vec![j]
        } else {
            let mut s = Vec::with_capacity(i - 1);
            for earlier in &z[1..i - 1] {
                if let Some(j) = common(zi, earlier) {
                    if !s.contains(&j) {
                        s.push(j);
                    }
                }
            }
            if let Some(j) = common(zi, &z[i]) {
                if !s.contains(&j) {
                    s.push(j);
                }
            }
            for &j in zi {
                if s.len() >= i - 1 {
                    break;
                }
                if !s.contains(&j) {
                    s.push(j);
                }
            }
            s.sort_unstable();
            s
        };
        debug_assert_eq!(s.len(), i - 1);
        selections.push(s);
    }
    let multiset = ExponentMultiset::from_columns(&selections.concat()).to_vec();
    Ok(StarSelection {
        order: order.iter().map(|o| o + 1).collect(),
        zeros: z.to_vec(),
        selections,
        multiset,
    })
}

/// Builds the selection and counts its union among all outcomes.
pub fn star_with_verdict(fam: &ZFamily) -> Result<(StarSelection, u64), SpecialCaseError> {
    let star = build_star_selection(fam)?;
    let report = enumerate_outcomes(fam)?;
    let count = report.count(&ExponentMultiset::from_columns(&star.multiset));
    Ok((star, count))
}
