//! Generalized Reed-Solomon generator matrices for reduced zero patterns.
//!
//! For a reduced pattern (every row weight `n - k + 1`, so `|Z_i| = k - 1`)
//! and distinct points `α_1..α_n`, row `i` of `G` evaluates
//! `f_i(x) = ∏_{t ∈ Z_i} (x - α_t)` at every point. `G` vanishes exactly on
//! the zero sets and factors as `G = A V` with `A` the coefficient matrix of
//! the `f_i` and `V` the `k x n` Vandermonde matrix. `G` generates an MDS
//! code iff `det(A) != 0`; the search below looks for points where it is.

use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{self, FieldElement, FieldJson, FieldSpec, GfError};
use crate::matrix::FieldMatrix;
use crate::pattern::{self, PatternError, ZeroPattern};
use crate::symdet;
use crate::verify::{self, VerifyError};

pub const DEFAULT_MAX_TRIES: u64 = 10_000;

/// Random search falls back to a full scan when there are at most this many
/// injective point tuples.
pub const EXHAUSTIVE_FALLBACK_LIMIT: u128 = 1_000_000;

/// Largest `k` for which a failed search expands `det(A)` symbolically to
/// tell `IdenticallyZero` from `NotFound`.
pub const SYMBOLIC_DIAGNOSIS_MAX_K: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("the MDS Condition fails for rows {witness:?} (union size {union_size})")]
    ConditionViolated {
        witness: Vec<usize>,
        union_size: usize,
    },
    #[error("F_{q} is too small: need q >= n + k - 1 = {required}")]
    FieldTooSmall { q: u32, required: usize },
    #[error("no evaluation points found after {tries} tries")]
    NotFound { tries: u64 },
    #[error("det(A) is identically zero for this pattern")]
    IdenticallyZero,
    #[error("pattern is not reduced: row {row} has weight {weight}, expected {expected}")]
    NotReduced {
        row: usize,
        weight: usize,
        expected: usize,
    },
    #[error("evaluation points are not distinct")]
    DuplicateAlphas,
    #[error("expected {expected} evaluation points, got {found}")]
    WrongPointCount { expected: usize, found: usize },
    #[error("Z_{row} has {found} elements, expected {expected}")]
    BadSubsetSize {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("constructed matrix failed MDS verification at columns {columns:?}")]
    VerificationFailed { columns: Vec<usize> },
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Random,
    Exhaustive,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(Strategy::Random),
            "exhaustive" => Ok(Strategy::Exhaustive),
            other => Err(format!(
                "unknown strategy {other:?} (expected random or exhaustive)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub strategy: Strategy,
    pub seed: u64,
    pub max_tries: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            strategy: Strategy::Random,
            seed: 0,
            max_tries: DEFAULT_MAX_TRIES,
        }
    }
}

/// `k x k` matrix of row-polynomial coefficients, low degree first; the last
/// column is all ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientMatrix(pub FieldMatrix);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    pub field: FieldSpec,
    pub alphas: Vec<FieldElement>,
    pub matrix: FieldMatrix,
    /// The reduced pattern the matrix was assembled for.
    pub pattern: ZeroPattern,
    pub verified_mds: bool,
}

impl GeneratorMatrix {
    pub fn k(&self) -> usize {
        self.matrix.rows()
    }

    pub fn n(&self) -> usize {
        self.matrix.cols()
    }

    pub fn to_json(&self) -> GeneratorJson {
        GeneratorJson {
            field: self.field.to_json(),
            k: self.k(),
            n: self.n(),
            alphas: Some(self.alphas.iter().map(|a| a.value()).collect()),
            matrix: self
                .matrix
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|e| e.value()).collect())
                .collect(),
            verified_mds: Some(self.verified_mds),
        }
    }
}

/// Wire form of a generator matrix. `alphas` and `verified_mds` are always
/// written but optional on input, so bare matrices can be verified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub field: FieldJson,
    pub k: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<u32>>,
    pub matrix: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verified_mds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixJsonError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("matrix is not {k}x{n}")]
    Shape { k: usize, n: usize },
}

impl GeneratorJson {
    /// Decodes the field and matrix, validating every entry against the field.
    pub fn decode(&self) -> Result<(FieldSpec, FieldMatrix), MatrixJsonError> {
        let field = FieldSpec::from_json(&self.field)?;
        if self.matrix.len() != self.k || self.matrix.iter().any(|r| r.len() != self.n) {
            return Err(MatrixJsonError::Shape {
                k: self.k,
                n: self.n,
            });
        }
        let rows = self
            .matrix
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| field.element(v as u64))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((field, FieldMatrix::from_rows(rows)))
    }
}

/// Coefficients of `∏_{t ∈ Z_i} (x - α_t)`, low degree first, length `k`.
/// `alphas[t - 1]` is the point for column `t`.
pub fn build_row_polynomial(
    field: &FieldSpec,
    zeros: &[usize],
    alphas: &[FieldElement],
    k: usize,
) -> Result<Vec<FieldElement>, ConstructError> {
    if zeros.len() + 1 != k {
        return Err(ConstructError::BadSubsetSize {
            row: 0,
            expected: k.saturating_sub(1),
            found: zeros.len(),
        });
    }
    let mut coeffs = Vec::with_capacity(k);
    coeffs.push(FieldElement::ONE);
    for &t in zeros {
        let root = alphas[t - 1];
        // (c_0 + c_1 x + ...)(x - root)
        coeffs.push(FieldElement::ZERO);
        for j in (0..coeffs.len()).rev() {
            let shifted = if j > 0 {
                coeffs[j - 1]
            } else {
                FieldElement::ZERO
            };
            coeffs[j] = field.sub(shifted, field.mul(root, coeffs[j]));
        }
    }
    Ok(coeffs)
}

fn horner(field: &FieldSpec, coeffs: &[FieldElement], x: FieldElement) -> FieldElement {
    coeffs.iter().rev().fold(FieldElement::ZERO, |acc, &c| {
        field.add(field.mul(acc, x), c)
    })
}

fn ensure_reduced(pat: &ZeroPattern) -> Result<(), ConstructError> {
    let expected = pat.n() - pat.k() + 1;
    for i in 0..pat.k() {
        let weight = pat.row_weight(i);
        if weight != expected {
            return Err(ConstructError::NotReduced {
                row: i + 1,
                weight,
                expected,
            });
        }
    }
    Ok(())
}

fn ensure_points(pat: &ZeroPattern, alphas: &[FieldElement]) -> Result<(), ConstructError> {
    if alphas.len() != pat.n() {
        return Err(ConstructError::WrongPointCount {
            expected: pat.n(),
            found: alphas.len(),
        });
    }
    let mut sorted = alphas.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(ConstructError::DuplicateAlphas);
    }
    Ok(())
}

pub fn coefficient_matrix(
    pat: &ZeroPattern,
    field: &FieldSpec,
    alphas: &[FieldElement],
) -> Result<CoefficientMatrix, ConstructError> {
    let k = pat.k();
    let rows = (0..k)
        .map(|i| {
            build_row_polynomial(field, &pat.zeros(i), alphas, k).map_err(|e| match e {
                ConstructError::BadSubsetSize {
                    expected, found, ..
                } => ConstructError::BadSubsetSize {
                    row: i + 1,
                    expected,
                    found,
                },
                other => other,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CoefficientMatrix(FieldMatrix::from_rows(rows)))
}

pub fn vandermonde(field: &FieldSpec, alphas: &[FieldElement], k: usize) -> FieldMatrix {
    let mut v = FieldMatrix::zeros(k, alphas.len());
    for (j, &a) in alphas.iter().enumerate() {
        let mut power = FieldElement::ONE;
        for i in 0..k {
            v.set(i, j, power);
            power = field.mul(power, a);
        }
    }
    v
}

/// Builds `A` and `G`. `G` is computed by direct evaluation and checked
/// against `A V`.
pub fn assemble(
    pat: &ZeroPattern,
    field: &FieldSpec,
    alphas: &[FieldElement],
) -> Result<(CoefficientMatrix, GeneratorMatrix), ConstructError> {
    ensure_reduced(pat)?;
    ensure_points(pat, alphas)?;
    for a in alphas {
        field.element(a.value() as u64)?;
    }
    let a = coefficient_matrix(pat, field, alphas)?;
    let (k, n) = (pat.k(), pat.n());
    let mut g = FieldMatrix::zeros(k, n);
    for i in 0..k {
        let row = a.0.row(i);
        for (j, &x) in alphas.iter().enumerate() {
            g.set(i, j, horner(field, row, x));
        }
    }
    let factored = a.0.mul(field, &vandermonde(field, alphas, k));
    assert_eq!(g, factored, "direct evaluation disagrees with A*V");
    Ok((
        a,
        GeneratorMatrix {
            field: field.clone(),
            alphas: alphas.to_vec(),
            matrix: g,
            pattern: pat.clone(),
            verified_mds: false,
        },
    ))
}

/// Numeric `det(A)` at the given points.
pub fn det_at(
    pat: &ZeroPattern,
    field: &FieldSpec,
    alphas: &[FieldElement],
) -> Result<FieldElement, ConstructError> {
    Ok(coefficient_matrix(pat, field, alphas)?.0.det(field))
}

/// Falling factorial `q (q-1) ... (q-n+1)`, saturating.
fn injective_tuples(q: u32, n: usize) -> u128 {
    (0..n as u128).fold(1u128, |acc, i| {
        acc.saturating_mul((q as u128).saturating_sub(i))
    })
}

/// Searches for distinct points with `det(A) != 0`.
pub fn find_evaluation_points(
    pat: &ZeroPattern,
    field: &FieldSpec,
    opts: &SearchOptions,
) -> Result<Vec<FieldElement>, ConstructError> {
    ensure_reduced(pat)?;
    let required = pat.n() + pat.k() - 1;
    if (field.order() as usize) < required {
        return Err(ConstructError::FieldTooSmall {
            q: field.order(),
            required,
        });
    }
    let n = pat.n();
    let q = field.order();
    let mut tries = 0u64;

    if opts.strategy == Strategy::Random {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        while tries < opts.max_tries {
            tries += 1;
            let alphas: Vec<FieldElement> = rand::seq::index::sample(&mut rng, q as usize, n)
                .into_iter()
                .map(|v| FieldElement(v as u32))
                .collect();
            if !det_at(pat, field, &alphas)?.is_zero() {
                return Ok(alphas);
            }
        }
        if injective_tuples(q, n) <= EXHAUSTIVE_FALLBACK_LIMIT {
            if let Some(found) = scan_lexicographic(pat, field, u64::MAX, &mut tries)? {
                return Ok(found);
            }
        }
    } else if let Some(found) = scan_lexicographic(pat, field, opts.max_tries, &mut tries)? {
        return Ok(found);
    }

    if pat.k() <= SYMBOLIC_DIAGNOSIS_MAX_K {
        let poly = symdet::symbolic_det(n, &pat.zero_sets())
            .expect("reduced pattern gives a valid family");
        if poly.is_zero() {
            return Err(ConstructError::IdenticallyZero);
        }
    }
    Err(ConstructError::NotFound { tries })
}

/// Injective tuples in lexicographic order; stops after `budget` candidates.
fn scan_lexicographic(
    pat: &ZeroPattern,
    field: &FieldSpec,
    budget: u64,
    tries: &mut u64,
) -> Result<Option<Vec<FieldElement>>, ConstructError> {
    let n = pat.n();
    let q = field.order();
    let mut used = vec![false; q as usize];
    let mut tuple: Vec<u32> = Vec::with_capacity(n);
    let mut next = 0u32;
    let mut spent = 0u64;
    loop {
        if tuple.len() == n {
            if spent >= budget {
                return Ok(None);
            }
            spent += 1;
            *tries += 1;
            let alphas: Vec<FieldElement> = tuple.iter().map(|&v| FieldElement(v)).collect();
            if !det_at(pat, field, &alphas)?.is_zero() {
                return Ok(Some(alphas));
            }
            let last = tuple.pop().unwrap();
            used[last as usize] = false;
            next = last + 1;
            continue;
        }
        while next < q && used[next as usize] {
            next += 1;
        }
        if next < q {
            used[next as usize] = true;
            tuple.push(next);
            next = 0;
        } else {
            match tuple.pop() {
                None => return Ok(None),
                Some(last) => {
                    used[last as usize] = false;
                    next = last + 1;
                }
            }
        }
    }
}

/// End-to-end pipeline: condition check, support reduction, field choice
/// (smallest prime power `>= n + k - 1` unless given), point search,
/// assembly, and minor-based verification.
pub fn construct_mds(
    pat: &ZeroPattern,
    field: Option<FieldSpec>,
    opts: &SearchOptions,
) -> Result<GeneratorMatrix, ConstructError> {
    let report = pattern::check_mds_condition(pat)?;
    if !report.holds {
        return Err(ConstructError::ConditionViolated {
            witness: report.witness.unwrap_or_default(),
            union_size: report.union_size.unwrap_or_default(),
        });
    }
    let reduced = pattern::reduce_supports(pat)?;
    let field = match field {
        Some(f) => f,
        None => gf::smallest_field_at_least((pat.n() + pat.k() - 1) as u64)?,
    };
    let alphas = find_evaluation_points(&reduced, &field, opts)?;
    let (_, mut g) = assemble(&reduced, &field, &alphas)?;
    assert!(
        pattern::fits(&g.matrix, pat)?,
        "constructed matrix does not fit its pattern"
    );
    match verify::is_mds(&field, &g.matrix) {
        Ok(v) if v.is_mds => g.verified_mds = true,
        Ok(v) => {
            return Err(ConstructError::VerificationFailed {
                columns: v.failing_columns.unwrap_or_default(),
            })
        }
        Err(VerifyError::TooLarge { .. }) => g.verified_mds = false,
        Err(e) => return Err(e.into()),
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_new;
    use crate::symdet::symbolic_det;

    fn f5() -> FieldSpec {
        field_new(5, 1, None).unwrap()
    }

    fn els(f: &FieldSpec, v: &[u64]) -> Vec<FieldElement> {
        v.iter().map(|&x| f.element(x).unwrap()).collect()
    }

    fn values(v: &[FieldElement]) -> Vec<u32> {
        v.iter().map(|e| e.value()).collect()
    }

    #[test]
    fn row_polynomials() {
        let f = f5();
        let alphas = els(&f, &[0, 1, 2]);
        assert_eq!(
            values(&build_row_polynomial(&f, &[], &alphas, 1).unwrap()),
            vec![1]
        );
        // x - 2 = x + 3
        assert_eq!(
            values(&build_row_polynomial(&f, &[3], &alphas, 2).unwrap()),
            vec![3, 1]
        );
        // x (x - 1) = x^2 + 4x
        assert_eq!(
            values(&build_row_polynomial(&f, &[1, 2], &alphas, 3).unwrap()),
            vec![0, 4, 1]
        );
        assert!(matches!(
            build_row_polynomial(&f, &[1], &alphas, 3),
            Err(ConstructError::BadSubsetSize { .. })
        ));
    }

    #[test]
    fn worked_assembly() {
        let f = f5();
        let pat = ZeroPattern::from_zeros(3, &[vec![3], vec![1]]).unwrap();
        let (a, g) = assemble(&pat, &f, &els(&f, &[0, 1, 2])).unwrap();
        let rows: Vec<Vec<u32>> = g.matrix.to_rows().iter().map(|r| values(r)).collect();
        assert_eq!(rows, vec![vec![3, 4, 0], vec![0, 1, 2]]);
        for i in 0..2 {
            assert_eq!(a.0.get(i, 1), FieldElement::ONE);
        }
        assert!(pattern::fits(&g.matrix, &pat).unwrap());
    }

    #[test]
    fn k1_assembly() {
        let f = f5();
        let pat = ZeroPattern::all_ones(1, 2).unwrap();
        let (_, g) = assemble(&pat, &f, &els(&f, &[3, 4])).unwrap();
        assert_eq!(values(g.matrix.row(0)), vec![1, 1]);
    }

    #[test]
    fn assembly_errors() {
        let f = f5();
        let pat = ZeroPattern::from_zeros(3, &[vec![3], vec![1]]).unwrap();
        assert_eq!(
            assemble(&pat, &f, &els(&f, &[0, 0, 1])).unwrap_err(),
            ConstructError::DuplicateAlphas
        );
        let unreduced = ZeroPattern::all_ones(2, 3).unwrap();
        assert!(matches!(
            assemble(&unreduced, &f, &els(&f, &[0, 1, 2])),
            Err(ConstructError::NotReduced { .. })
        ));
    }

    #[test]
    fn exhaustive_search_takes_first_lexicographic_tuple() {
        let f = f5();
        let pat = ZeroPattern::from_zeros(3, &[vec![3], vec![1]]).unwrap();
        let opts = SearchOptions {
            strategy: Strategy::Exhaustive,
            ..Default::default()
        };
        let alphas = find_evaluation_points(&pat, &f, &opts).unwrap();
        assert_eq!(values(&alphas), vec![0, 1, 2]);
        // det = α_1 - α_3 = -2
        assert_eq!(det_at(&pat, &f, &alphas).unwrap().value(), 3);
    }

    #[test]
    fn k1_search_returns_first_points() {
        let f = field_new(7, 1, None).unwrap();
        let pat = ZeroPattern::all_ones(1, 5).unwrap();
        let opts = SearchOptions {
            strategy: Strategy::Exhaustive,
            ..Default::default()
        };
        assert_eq!(
            values(&find_evaluation_points(&pat, &f, &opts).unwrap()),
            vec![0, 1, 2, 3, 4]
        );
    }

    #[test]
    fn field_below_bound_rejected() {
        // n + k - 2 = 3 for k = 2, n = 3.
        let f3 = field_new(3, 1, None).unwrap();
        let pat = ZeroPattern::from_zeros(3, &[vec![3], vec![1]]).unwrap();
        assert_eq!(
            find_evaluation_points(&pat, &f3, &SearchOptions::default()).unwrap_err(),
            ConstructError::FieldTooSmall { q: 3, required: 4 }
        );
    }

    #[test]
    fn identically_zero_is_diagnosed() {
        // Rows 1 and 2 share a zero set, violating the condition; skip the
        // pipeline and search directly.
        let pat = ZeroPattern::from_zeros(4, &[vec![1, 2], vec![1, 2], vec![3, 4]]).unwrap();
        let f = field_new(7, 1, None).unwrap();
        assert_eq!(
            find_evaluation_points(
                &pat,
                &f,
                &SearchOptions {
                    max_tries: 20,
                    ..Default::default()
                }
            )
            .unwrap_err(),
            ConstructError::IdenticallyZero
        );
    }

    #[test]
    fn pipeline_on_all_ones() {
        let pat = ZeroPattern::all_ones(2, 3).unwrap();
        let g = construct_mds(&pat, None, &SearchOptions::default()).unwrap();
        assert_eq!(g.field.order(), 4);
        assert!(g.verified_mds);
        assert!(pattern::fits(&g.matrix, &pat).unwrap());
    }

    #[test]
    fn pipeline_on_three_rows_at_q8() {
        let pat = ZeroPattern::from_zeros(6, &[vec![5, 6], vec![1, 4], vec![3, 4]]).unwrap();
        let f8 = field_new(2, 3, None).unwrap();
        let g = construct_mds(&pat, Some(f8.clone()), &SearchOptions::default()).unwrap();
        assert_eq!(g.field.order(), 8);
        let v = verify::is_mds(&f8, &g.matrix).unwrap();
        assert!(v.is_mds);
        assert!(pattern::fits(&g.matrix, &pat).unwrap());
        assert!(verify::min_weight_check(&g.matrix));
    }

    #[test]
    fn pipeline_reports_violation() {
        let pat = ZeroPattern::from_supports(4, &[vec![1, 2], vec![1, 2]]).unwrap();
        assert_eq!(
            construct_mds(&pat, None, &SearchOptions::default()).unwrap_err(),
            ConstructError::ConditionViolated {
                witness: vec![1],
                union_size: 2
            }
        );
    }

    #[test]
    fn det_matches_symbolic_and_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = field_new(7, 1, None).unwrap();
        let (mut singular, mut regular) = (0, 0);
        // The second family repeats a zero set, so det(A) vanishes identically.
        for zeros in [
            vec![vec![5, 6], vec![1, 4], vec![3, 4]],
            vec![vec![1, 2], vec![1, 2], vec![3, 4]],
        ] {
            let pat = ZeroPattern::from_zeros(6, &zeros).unwrap();
            let poly = symbolic_det(6, &zeros).unwrap();
            for _ in 0..200 {
                let alphas: Vec<FieldElement> = rand::seq::index::sample(&mut rng, 7, 6)
                    .into_iter()
                    .map(|v| FieldElement(v as u32))
                    .collect();
                let d = det_at(&pat, &f, &alphas).unwrap();
                assert_eq!(d, poly.evaluate(&f, &alphas).unwrap());
                let (_, g) = assemble(&pat, &f, &alphas).unwrap();
                assert_eq!(g.matrix.rank(&f) == 3, !d.is_zero());
                if d.is_zero() {
                    singular += 1;
                } else {
                    regular += 1;
                }
            }
        }
        assert!(singular > 0 && regular > 0);
    }

    #[test]
    fn json_round_trip() {
        let pat = ZeroPattern::all_ones(2, 3).unwrap();
        let g = construct_mds(&pat, None, &SearchOptions::default()).unwrap();
        let j = g.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back: GeneratorJson = serde_json::from_str(&text).unwrap();
        let (f, m) = back.decode().unwrap();
        assert_eq!(f, g.field);
        assert_eq!(m, g.matrix);
    }
}
