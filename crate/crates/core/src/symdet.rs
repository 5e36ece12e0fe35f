//! Symbolic `det(A)` as a sparse integer polynomial in `α_1..α_n`.
//!
//! Row `i` of the coefficient matrix `A` holds the coefficients of
//! `f_i(x) = ∏_{t ∈ Z_i} (x - α_t)`, so
//!
//! ```text
//! a_{i,j} = (-1)^{k-j} e_{k-j}({α_t : t ∈ Z_i})   (j < k),   a_{i,k} = 1,
//! ```
//!
//! and the Leibniz expansion of `det(A)` is a signed sum over a permutation
//! `σ` and, per row, a subset `T_i ⊆ Z_i` with `|T_i| = k - σ(i)`. Each such
//! choice contributes one monomial whose exponent multiset is `⊎ T_i`. A
//! monomial is therefore keyed by exactly the multisets of the unique-multiset
//! enumeration in [`crate::multiset`]; see [`to_leibniz_permutation`] for the
//! index bijection between the two.
//!
//! Every contribution carries the constant factor `(-1)^{Σ(k-σ(i))} =
//! (-1)^{k(k-1)/2}`, applied once per term.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::combin::{permutation_sign, permutations, subsets_of_size};
use crate::gf::{FieldElement, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymdetError {
    #[error("Z_{row} has {found} elements, expected {expected}")]
    BadSubsetSize {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("Z_{row} contains column {col}, outside [1, {n}]")]
    ColumnOutOfRange { row: usize, col: usize, n: usize },
    #[error("Z_{row} contains column {col} twice")]
    DuplicateColumn { row: usize, col: usize },
    #[error("no value assigned to α_{0}")]
    MissingVariable(usize),
    #[error("coefficient overflow")]
    CoefficientOverflow,
}

/// A multiset of 1-based column indices, stored sorted with repetition.
///
/// As a monomial key, `{1,3,3}` stands for `α_1 α_3^2`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExponentMultiset(Vec<u16>);

impl ExponentMultiset {
    pub fn new(mut elements: Vec<u16>) -> Self {
        elements.sort_unstable();
        ExponentMultiset(elements)
    }

    pub fn from_columns(cols: &[usize]) -> Self {
        Self::new(cols.iter().map(|&c| c as u16).collect())
    }

    pub fn elements(&self) -> &[u16] {
        &self.0
    }

    pub fn total_degree(&self) -> usize {
        self.0.len()
    }

    pub fn degree_of(&self, t: usize) -> usize {
        self.0.iter().filter(|&&e| e as usize == t).count()
    }

    /// `(column, exponent)` pairs in ascending column order.
    pub fn counts(&self) -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = Vec::new();
        for &e in &self.0 {
            match out.last_mut() {
                Some((c, p)) if *c == e as usize => *p += 1,
                _ => out.push((e as usize, 1)),
            }
        }
        out
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.iter().map(|&e| e as usize).collect()
    }
}

/// Integer-coefficient polynomial in `α_1..α_n`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparsePolynomial {
    n: usize,
    terms: BTreeMap<ExponentMultiset, i64>,
}

impl SparsePolynomial {
    pub fn zero(n: usize) -> Self {
        SparsePolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: i64) -> Self {
        let mut p = Self::zero(n);
        if c != 0 {
            p.terms.insert(ExponentMultiset::default(), c);
        }
        p
    }

    pub fn variables(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &ExponentMultiset) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentMultiset, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn add_term(&mut self, m: ExponentMultiset, c: i64) -> Result<(), SymdetError> {
        if c == 0 {
            return Ok(());
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o
                    .get()
                    .checked_add(c)
                    .ok_or(SymdetError::CoefficientOverflow)?;
                if sum == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    /// Value at `alphas`, where `alphas[t - 1]` is assigned to `α_t`.
    pub fn evaluate(
        &self,
        field: &FieldSpec,
        alphas: &[FieldElement],
    ) -> Result<FieldElement, SymdetError> {
        let mut acc = FieldElement::ZERO;
        for (m, &c) in &self.terms {
            let mut term = field.from_int(c);
            for (t, p) in m.counts() {
                let a = *alphas.get(t - 1).ok_or(SymdetError::MissingVariable(t))?;
                term = field.mul(term, field.pow(a, p as u64));
            }
            acc = field.add(acc, term);
        }
        Ok(acc)
    }

    /// Highest exponent of `α_t` over all stored monomials.
    pub fn variable_degree(&self, t: usize) -> usize {
        self.terms.keys().map(|m| m.degree_of(t)).max().unwrap_or(0)
    }

    /// One line per monomial, `coeff * a<t>^<p> ...`, in multiset order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (m, c) in &self.terms {
            write!(out, "{c} *").unwrap();
            for (t, p) in m.counts() {
                write!(out, " a{t}^{p}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Maps a selection permutation (row `i` picks `σ(i) - 1` zeros) to the
/// Leibniz permutation `σ'` whose term of `det(A)` picks `k - σ'(i)` zeros
/// from the same row: `σ'(i) = k + 1 - σ(i)`. Values are 0-based here, so
/// `σ'(i) = k - 1 - σ(i)`. The map is an involution.
pub fn to_leibniz_permutation(sigma: &[usize]) -> Vec<usize> {
    let k = sigma.len();
    sigma.iter().map(|&s| k - 1 - s).collect()
}

pub(crate) fn validate_family(n: usize, zeros: &[Vec<usize>]) -> Result<(), SymdetError> {
    let k = zeros.len();
    for (i, z) in zeros.iter().enumerate() {
        if z.len() + 1 != k {
            return Err(SymdetError::BadSubsetSize {
                row: i + 1,
                expected: k - 1,
                found: z.len(),
            });
        }
        let mut seen = 0u64;
        for &c in z {
            if c == 0 || c > n || c > 64 {
                return Err(SymdetError::ColumnOutOfRange {
                    row: i + 1,
                    col: c,
                    n,
                });
            }
            if seen >> (c - 1) & 1 == 1 {
                return Err(SymdetError::DuplicateColumn { row: i + 1, col: c });
            }
            seen |= 1 << (c - 1);
        }
    }
    Ok(())
}

/// Expands `det(A)` for the zero sets `Z_1..Z_k` (each of size `k - 1`,
/// 1-based columns in `[1, n]`).
pub fn symbolic_det(n: usize, zeros: &[Vec<usize>]) -> Result<SparsePolynomial, SymdetError> {
    validate_family(n, zeros)?;
    let k = zeros.len();
    let mut poly = SparsePolynomial::zero(n);
    if k == 0 {
        return Ok(SparsePolynomial::constant(n, 1));
    }
    let global_sign: i64 = if (k * (k - 1) / 2) % 2 == 0 { 1 } else { -1 };

    // subsets[i][d]: the d-subsets of Z_i.
    let subsets: Vec<Vec<Vec<u16>>> = zeros
        .iter()
        .map(|z| {
            let z16: Vec<u16> = z.iter().map(|&c| c as u16).collect();
            (0..k)
                .map(|d| subsets_of_size(&z16, d).into_iter().flatten().collect())
                .collect()
        })
        .collect();

    let mut acc: Vec<u16> = Vec::with_capacity(k * (k - 1) / 2);
    for sigma in permutations(k) {
        let sign = permutation_sign(&sigma) * global_sign;
        // σ(i) is 0-based here, so |T_i| = k - 1 - σ(i).
        let sizes: Vec<usize> = sigma.iter().map(|&s| k - 1 - s).collect();
        expand_rows(&subsets, &sizes, 0, &mut acc, &mut |key| {
            poly.add_term(ExponentMultiset::new(key.to_vec()), sign)
        })?;
    }
    Ok(poly)
}

/// Cartesian product over rows of the `sizes[i]`-subsets of `Z_i`; calls
/// `leaf` with the concatenation of the chosen subsets.
fn expand_rows<F>(
    subsets: &[Vec<Vec<u16>>],
    sizes: &[usize],
    row: usize,
    acc: &mut Vec<u16>,
    leaf: &mut F,
) -> Result<(), SymdetError>
where
    F: FnMut(&[u16]) -> Result<(), SymdetError>,
{
    if row == sizes.len() {
        return leaf(acc);
    }
    let d = sizes[row];
    let flat = &subsets[row][d];
    if d == 0 {
        return expand_rows(subsets, sizes, row + 1, acc, leaf);
    }
    for chunk in flat.chunks(d) {
        let mark = acc.len();
        acc.extend_from_slice(chunk);
        expand_rows(subsets, sizes, row + 1, acc, leaf)?;
        acc.truncate(mark);
    }
    Ok(())
}
