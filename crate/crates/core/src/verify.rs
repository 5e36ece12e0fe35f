//! Brute-force MDS oracles.
//!
//! A `k x n` matrix generates an MDS code iff every `k x k` minor is
//! nonsingular, and equivalently iff every nonzero codeword has weight at
//! least `n - k + 1`. Both tests are implemented here without touching the
//! construction code, so they can judge it.

use serde::Serialize;
use thiserror::Error;

use crate::combin::binomial;
use crate::gf::{FieldElement, FieldSpec};
use crate::matrix::FieldMatrix;

/// Guard on the number of maximal minors and on `q^k` codewords.
pub const MAX_ENUMERATION: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("{what} would require {count} evaluations (limit {MAX_ENUMERATION})")]
    TooLarge { what: &'static str, count: u128 },
    #[error("need 1 <= k <= n, got a {k}x{n} matrix")]
    BadShape { k: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MdsVerdict {
    pub is_mds: bool,
    /// Lexicographically first singular column set, 1-based.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_columns: Option<Vec<usize>>,
}

fn shape(g: &FieldMatrix) -> Result<(usize, usize), VerifyError> {
    let (k, n) = (g.rows(), g.cols());
    if k == 0 || k > n {
        return Err(VerifyError::BadShape { k, n });
    }
    Ok((k, n))
}

/// Checks every maximal minor, in lexicographic order of column sets.
pub fn is_mds(field: &FieldSpec, g: &FieldMatrix) -> Result<MdsVerdict, VerifyError> {
    let (k, n) = shape(g)?;
    let count = binomial(n as u64, k as u64);
    if count > MAX_ENUMERATION {
        return Err(VerifyError::TooLarge {
            what: "maximal minors",
            count: count as u128,
        });
    }
    let mut cols: Vec<usize> = (0..k).collect();
    let mut minor = vec![FieldElement::ZERO; k * k];
    loop {
        for i in 0..k {
            for (c, &j) in cols.iter().enumerate() {
                minor[i * k + c] = g.get(i, j);
            }
        }
        if !nonsingular(field, &mut minor, k) {
            return Ok(MdsVerdict {
                is_mds: false,
                failing_columns: Some(cols.iter().map(|c| c + 1).collect()),
            });
        }
        // Next k-combination of 0..n in lexicographic order.
        let Some(i) = (0..k).rev().find(|&i| cols[i] < n - k + i) else {
            break;
        };
        cols[i] += 1;
        for j in i + 1..k {
            cols[j] = cols[j - 1] + 1;
        }
    }
    Ok(MdsVerdict {
        is_mds: true,
        failing_columns: None,
    })
}

/// Row reduction on a scratch `k x k` buffer; true iff full rank.
fn nonsingular(field: &FieldSpec, m: &mut [FieldElement], k: usize) -> bool {
    for col in 0..k {
        let Some(pivot) = (col..k).find(|&r| !m[r * k + col].is_zero()) else {
            return false;
        };
        if pivot != col {
            for c in 0..k {
                m.swap(pivot * k + c, col * k + c);
            }
        }
        let inv = field.inv(m[col * k + col]).expect("nonzero pivot");
        for r in col + 1..k {
            let factor = field.mul(m[r * k + col], inv);
            if factor.is_zero() {
                continue;
            }
            for c in col..k {
                m[r * k + c] = field.sub(m[r * k + c], field.mul(factor, m[col * k + c]));
            }
        }
    }
    true
}

/// Minimum weight over all nonzero messages, by enumerating the `q^k - 1`
/// codewords. A rank-deficient matrix yields 0.
pub fn min_distance_by_enumeration(
    field: &FieldSpec,
    g: &FieldMatrix,
) -> Result<usize, VerifyError> {
    let (k, n) = shape(g)?;
    let q = field.order() as u128;
    let count = q.checked_pow(k as u32).unwrap_or(u128::MAX);
    if count > MAX_ENUMERATION as u128 {
        return Err(VerifyError::TooLarge {
            what: "codewords",
            count,
        });
    }
    let mut message = vec![0u32; k];
    let mut best = n;
    let mut word = vec![FieldElement::ZERO; n];
    // Mixed-radix counter over messages, skipping the all-zero one.
    loop {
        let Some(pos) = message.iter().position(|&d| d + 1 < q as u32) else {
            break;
        };
        message[pos] += 1;
        for d in &mut message[..pos] {
            *d = 0;
        }
        word.iter_mut().for_each(|w| *w = FieldElement::ZERO);
        for (i, &u) in message.iter().enumerate() {
            if u == 0 {
                continue;
            }
            let u = FieldElement(u);
            for (j, w) in word.iter_mut().enumerate() {
                *w = field.add(*w, field.mul(u, g.get(i, j)));
            }
        }
        let weight = word.iter().filter(|w| !w.is_zero()).count();
        best = best.min(weight);
    }
    Ok(best)
}

/// Singleton-equality check: minimum distance equals `n - k + 1`.
pub fn is_mds_by_enumeration(field: &FieldSpec, g: &FieldMatrix) -> Result<bool, VerifyError> {
    let (k, n) = shape(g)?;
    Ok(min_distance_by_enumeration(field, g)? == n - k + 1)
}

/// Every row has weight exactly `n - k + 1`.
pub fn min_weight_check(g: &FieldMatrix) -> bool {
    let (k, n) = (g.rows(), g.cols());
    if k == 0 || k > n {
        return false;
    }
    (0..k).all(|i| g.row(i).iter().filter(|e| !e.is_zero()).count() == n - k + 1)
}
