//! Compilers from two network-coding design problems to zero patterns.
//!
//! * Cooperative data exchange (CDE): client `s` holds packets `H_s` and
//!   broadcasts `b_s` coded packets. The coding matrix has `b_s` rows with
//!   support `H_s` per client, and the cut-set bound
//!   `|∪_{s∈S} H_s| >= n - k + Σ_{s∈S} b_s` implies the MDS Condition.
//! * Simple multiple access network (SMAN): source `i` with rate `r_i` feeds
//!   the relays in `supp(A_i)`; up to `z` errors. Repeating each adjacency row
//!   `r_i` times and padding with all-one rows up to `k = n - 2z` gives a
//!   pattern satisfying the MDS Condition whenever
//!   `|∪_{i∈I} supp(A_i)| >= Σ_{i∈I} r_i + 2z`.
//!
//! All indices in the wire formats are 1-based.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::{construct_mds, ConstructError, GeneratorMatrix, SearchOptions};
use crate::gf::FieldSpec;
use crate::matrix::FieldMatrix;
use crate::pattern::{
    check_mds_condition, first_violating_subset, fits, full_mask, indices_mask, ConditionReport,
    PatternError, ZeroPattern, MAX_COLUMNS,
};

/// Cap on clients / sources; both cut conditions walk all their subsets.
pub const MAX_PARTIES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("cut-set condition fails for {witness:?} (union size {union_size})")]
    CutConditionViolated {
        witness: Vec<usize>,
        union_size: usize,
    },
    #[error("total rate {rate} exceeds code dimension n - 2z = {k}")]
    RateExceedsCapacity { rate: usize, k: i64 },
    #[error("{k} transmissions exceed the {n} packets")]
    TooManyTransmissions { k: usize, n: usize },
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

fn invalid(msg: impl Into<String>) -> ReductionError {
    ReductionError::InvalidInstance(msg.into())
}

fn check_sizes(n: usize, parties: usize, what: &str) -> Result<(), ReductionError> {
    if n == 0 || n > MAX_COLUMNS {
        return Err(invalid(format!("n must be in 1..={MAX_COLUMNS}, got {n}")));
    }
    if parties == 0 || parties > MAX_PARTIES {
        return Err(invalid(format!(
            "need 1..={MAX_PARTIES} {what}, got {parties}"
        )));
    }
    Ok(())
}

fn set_mask(n: usize, owner: usize, cols: &[usize], what: &str) -> Result<u64, ReductionError> {
    indices_mask(owner, cols, n).map_err(|e| invalid(format!("{what} {}: {e}", owner + 1)))
}

fn violation(found: Option<(Vec<usize>, u64)>) -> ConditionReport {
    ConditionReport::from_violation(found.map(|(w, u)| (w, u.count_ones() as usize)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdeClient {
    pub has: Vec<usize>,
    pub b: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdeInstance {
    pub n: usize,
    pub clients: Vec<CdeClient>,
}

impl CdeInstance {
    /// Total number of transmissions `k = Σ b_s`.
    pub fn k(&self) -> usize {
        self.clients.iter().map(|c| c.b).sum()
    }

    /// Has-set masks after validating the instance.
    fn masks(&self) -> Result<Vec<u64>, ReductionError> {
        check_sizes(self.n, self.clients.len(), "clients")?;
        if self.k() == 0 {
            return Err(invalid("total transmissions must be at least 1"));
        }
        let full = full_mask(self.n);
        self.clients
            .iter()
            .enumerate()
            .map(|(s, c)| {
                let m = set_mask(self.n, s, &c.has, "client")?;
                if m == full {
                    return Err(invalid(format!(
                        "client {} already has every packet",
                        s + 1
                    )));
                }
                Ok(m)
            })
            .collect()
    }
}

/// Exhaustive check of `|∪_{s∈S} H_s| >= n - k + Σ_{s∈S} b_s` over nonempty
/// client sets `S`; the witness lists clients.
pub fn cde_cut_condition(inst: &CdeInstance) -> Result<ConditionReport, ReductionError> {
    let masks = inst.masks()?;
    let (n, k) = (inst.n as i64, inst.k() as i64);
    let found = first_violating_subset(
        &masks,
        0,
        |a, b| a | b,
        |members, union| {
            let b: i64 = members.iter().map(|&s| inst.clients[s - 1].b as i64).sum();
            (union.count_ones() as i64) < n - k + b
        },
    );
    Ok(violation(found))
}

/// `k x n` pattern with `b_s` consecutive rows of support `H_s` per client.
pub fn cde_to_pattern(inst: &CdeInstance) -> Result<ZeroPattern, ReductionError> {
    let report = cde_cut_condition(inst)?;
    if !report.holds {
        return Err(ReductionError::CutConditionViolated {
            witness: report.witness.unwrap_or_default(),
            union_size: report.union_size.unwrap_or_default(),
        });
    }
    let k = inst.k();
    if k > inst.n {
        return Err(ReductionError::TooManyTransmissions { k, n: inst.n });
    }
    let supports: Vec<Vec<usize>> = inst
        .clients
        .iter()
        .flat_map(|c| std::iter::repeat_n(c.has.clone(), c.b))
        .collect();
    let pat = ZeroPattern::from_supports(inst.n, &supports)?;
    let check = check_mds_condition(&pat)?;
    assert!(
        check.holds,
        "CDE cut condition held but the MDS Condition fails: {check:?}"
    );
    Ok(pat)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmanSource {
    pub relays: Vec<usize>,
    pub rate: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmanInstance {
    pub n: usize,
    pub z: usize,
    pub sources: Vec<SmanSource>,
}

impl SmanInstance {
    /// Total rate `r_I = Σ r_i`.
    pub fn total_rate(&self) -> usize {
        self.sources.iter().map(|s| s.rate).sum()
    }

    /// Code dimension `k = n - 2z`; may be nonpositive for hopeless instances.
    pub fn dimension(&self) -> i64 {
        self.n as i64 - 2 * self.z as i64
    }

    fn masks(&self) -> Result<Vec<u64>, ReductionError> {
        check_sizes(self.n, self.sources.len(), "sources")?;
        self.sources
            .iter()
            .enumerate()
            .map(|(i, s)| {
                if s.rate == 0 {
                    return Err(invalid(format!("source {} has rate 0", i + 1)));
                }
                set_mask(self.n, i, &s.relays, "source")
            })
            .collect()
    }
}

/// Exhaustive check of `|∪_{i∈I} supp(A_i)| >= Σ_{i∈I} r_i + 2z` over
/// nonempty source sets `I`; the witness lists sources.
pub fn sman_cut_condition(inst: &SmanInstance) -> Result<ConditionReport, ReductionError> {
    let masks = inst.masks()?;
    let z2 = 2 * inst.z;
    let found = first_violating_subset(
        &masks,
        0,
        |a, b| a | b,
        |members, union| {
            let r: usize = members.iter().map(|&i| inst.sources[i - 1].rate).sum();
            (union.count_ones() as usize) < r + z2
        },
    );
    Ok(violation(found))
}

/// `M'` (adjacency rows repeated by rate) and `M` (`M'` padded with all-one
/// rows to `k = n - 2z` rows).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmanPatterns {
    pub subspace: ZeroPattern,
    pub full: ZeroPattern,
    pub total_rate: usize,
}

pub fn sman_to_pattern(inst: &SmanInstance) -> Result<SmanPatterns, ReductionError> {
    let masks = inst.masks()?;
    let rate = inst.total_rate();
    let k = inst.dimension();
    if k < rate as i64 {
        return Err(ReductionError::RateExceedsCapacity { rate, k });
    }
    let report = sman_cut_condition(inst)?;
    if !report.holds {
        return Err(ReductionError::CutConditionViolated {
            witness: report.witness.unwrap_or_default(),
            union_size: report.union_size.unwrap_or_default(),
        });
    }
    let mut rows: Vec<u64> = masks
        .iter()
        .zip(&inst.sources)
        .flat_map(|(&m, s)| std::iter::repeat_n(m, s.rate))
        .collect();
    let subspace = ZeroPattern::from_masks(inst.n, rows.clone())?;
    rows.resize(k as usize, full_mask(inst.n));
    let full = ZeroPattern::from_masks(inst.n, rows)?;
    let check = check_mds_condition(&full)?;
    assert!(
        check.holds,
        "SMAN cut condition held but the MDS Condition fails: {check:?}"
    );
    Ok(SmanPatterns {
        subspace,
        full,
        total_rate: rate,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmanCode {
    pub patterns: SmanPatterns,
    /// Full `k x n` generator fitting `M`.
    pub generator: GeneratorMatrix,
    /// Its first `r_I` rows, fitting `M'`.
    pub subspace: FieldMatrix,
}

/// Builds `G` for `M` and keeps its first `r_I` rows.
pub fn sman_code(
    inst: &SmanInstance,
    field: Option<FieldSpec>,
    opts: &SearchOptions,
) -> Result<SmanCode, ReductionError> {
    let patterns = sman_to_pattern(inst)?;
    let generator = construct_mds(&patterns.full, field, opts)?;
    let subspace = generator.matrix.top_rows(patterns.total_rate);
    assert!(fits(&subspace, &patterns.subspace)?, "G' does not fit M'");
    Ok(SmanCode {
        patterns,
        generator,
        subspace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldElement;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cde(n: usize, clients: &[(&[usize], usize)]) -> CdeInstance {
        CdeInstance {
            n,
            clients: clients
                .iter()
                .map(|&(h, b)| CdeClient { has: h.to_vec(), b })
                .collect(),
        }
    }

    fn sman(n: usize, z: usize, sources: &[(&[usize], usize)]) -> SmanInstance {
        SmanInstance {
            n,
            z,
            sources: sources
                .iter()
                .map(|&(r, rate)| SmanSource {
                    relays: r.to_vec(),
                    rate,
                })
                .collect(),
        }
    }

    #[test]
    fn cde_two_clients() {
        let inst = cde(3, &[(&[1, 2], 1), (&[2, 3], 1)]);
        assert!(cde_cut_condition(&inst).unwrap().holds);
        let pat = cde_to_pattern(&inst).unwrap();
        assert_eq!(pat.to_binary_rows(), vec![vec![1, 1, 0], vec![0, 1, 1]]);
        assert!(check_mds_condition(&pat).unwrap().holds);
    }

    #[test]
    fn cde_missing_packet() {
        let inst = cde(2, &[(&[1], 1)]);
        let r = cde_cut_condition(&inst).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness, Some(vec![1]));
        assert_eq!(r.union_size, Some(1));
        assert!(matches!(
            cde_to_pattern(&inst),
            Err(ReductionError::CutConditionViolated { .. })
        ));
    }

    #[test]
    fn cde_uncovered_packet_fails_at_full_set() {
        // Nobody holds packet 4: the full client set sees 3 < 4.
        let inst = cde(4, &[(&[1, 2], 1), (&[2, 3], 1)]);
        let r = cde_cut_condition(&inst).unwrap();
        assert!(!r.holds);
    }

    #[test]
    fn cde_grouped_rows() {
        let inst = cde(4, &[(&[1, 2, 3], 2), (&[4], 0), (&[2, 3, 4], 1)]);
        let pat = cde_to_pattern(&inst).unwrap();
        assert_eq!(
            pat.to_binary_rows(),
            vec![vec![1, 1, 1, 0], vec![1, 1, 1, 0], vec![0, 1, 1, 1]]
        );
    }

    #[test]
    fn cde_rejects_bad_instances() {
        assert!(matches!(
            cde_cut_condition(&cde(2, &[(&[1, 2], 1)])),
            Err(ReductionError::InvalidInstance(_))
        ));
        assert!(matches!(
            cde_cut_condition(&cde(3, &[(&[1], 0)])),
            Err(ReductionError::InvalidInstance(_))
        ));
        assert!(matches!(
            cde_cut_condition(&cde(3, &[(&[4], 1)])),
            Err(ReductionError::InvalidInstance(_))
        ));
        // Condition holds, but 6 rows cannot fit 2 columns.
        let wide = cde(2, &[(&[1], 3), (&[2], 3)]);
        assert!(cde_cut_condition(&wide).unwrap().holds);
        assert_eq!(
            cde_to_pattern(&wide).unwrap_err(),
            ReductionError::TooManyTransmissions { k: 6, n: 2 }
        );
    }

    #[test]
    fn sman_cut_examples() {
        assert!(
            sman_cut_condition(&sman(3, 1, &[(&[1, 2, 3], 1)]))
                .unwrap()
                .holds
        );
        let r = sman_cut_condition(&sman(3, 2, &[(&[1, 2, 3], 1)])).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness, Some(vec![1]));
        let full: Vec<usize> = (1..=6).collect();
        assert!(
            sman_cut_condition(&sman(6, 0, &[(&full, 2), (&full, 3)]))
                .unwrap()
                .holds
        );
    }

    #[test]
    fn sman_padding() {
        let inst = sman(5, 1, &[(&[1, 2, 3], 1)]);
        let p = sman_to_pattern(&inst).unwrap();
        assert_eq!(p.total_rate, 1);
        assert_eq!(p.subspace.to_binary_rows(), vec![vec![1, 1, 1, 0, 0]]);
        assert_eq!(
            p.full.to_binary_rows(),
            vec![
                vec![1, 1, 1, 0, 0],
                vec![1, 1, 1, 1, 1],
                vec![1, 1, 1, 1, 1]
            ]
        );
    }

    #[test]
    fn sman_no_padding_when_rate_fills_dimension() {
        let inst = sman(3, 0, &[(&[1, 2, 3], 3)]);
        let p = sman_to_pattern(&inst).unwrap();
        assert_eq!(p.full, p.subspace);
        assert_eq!(p.full.k(), 3);
    }

    #[test]
    fn sman_rate_exceeds_capacity() {
        let inst = sman(3, 2, &[(&[1, 2, 3], 1)]);
        assert_eq!(
            sman_to_pattern(&inst).unwrap_err(),
            ReductionError::RateExceedsCapacity { rate: 1, k: -1 }
        );
        let inst = sman(4, 1, &[(&[1, 2], 1), (&[3, 4], 2)]);
        assert!(matches!(
            sman_to_pattern(&inst),
            Err(ReductionError::RateExceedsCapacity { rate: 3, k: 2 })
        ));
    }

    #[test]
    fn sman_code_over_f7() {
        let inst = sman(5, 1, &[(&[1, 2, 3], 1)]);
        let code = sman_code(&inst, None, &SearchOptions::default()).unwrap();
        assert_eq!(code.generator.field.order(), 7);
        assert!(code.generator.verified_mds);
        assert_eq!(code.subspace.rows(), 1);
        let row = code.subspace.row(0);
        assert!(row[..3].iter().all(|e| !e.is_zero()));
        assert_eq!(&row[3..], &[FieldElement::ZERO, FieldElement::ZERO]);
        assert_eq!(code.subspace.rank(&code.generator.field), 1);
    }

    #[test]
    fn random_instances_respect_implications() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut compiled = [0usize; 2];
        for _ in 0..300 {
            let n = rng.gen_range(2..=7);
            let m = rng.gen_range(1..=3);
            let clients: Vec<CdeClient> = (0..m)
                .map(|_| CdeClient {
                    has: (1..=n).filter(|_| rng.gen_bool(0.6)).take(n - 1).collect(),
                    b: rng.gen_range(0..=2),
                })
                .collect();
            let inst = CdeInstance { n, clients };
            if let Ok(r) = cde_cut_condition(&inst) {
                if r.holds && inst.k() <= n {
                    cde_to_pattern(&inst).unwrap();
                    compiled[0] += 1;
                }
            }
            let z = rng.gen_range(0..=1);
            let sources: Vec<SmanSource> = (0..m)
                .map(|_| SmanSource {
                    relays: (1..=n).filter(|_| rng.gen_bool(0.7)).collect(),
                    rate: rng.gen_range(1..=2),
                })
                .collect();
            let inst = SmanInstance { n, z, sources };
            if sman_cut_condition(&inst).unwrap().holds {
                let p = sman_to_pattern(&inst).unwrap();
                assert!(inst.dimension() >= inst.total_rate() as i64);
                assert_eq!(p.full.k() as i64, inst.dimension());
                compiled[1] += 1;
            }
        }
        assert!(compiled[0] > 20 && compiled[1] > 20, "{compiled:?}");
    }

    #[test]
    fn json_shapes() {
        let inst: CdeInstance =
            serde_json::from_str(r#"{"n":3,"clients":[{"has":[1,2],"b":1},{"has":[2,3],"b":1}]}"#)
                .unwrap();
        assert_eq!(inst.k(), 2);
        let s: SmanInstance =
            serde_json::from_str(r#"{"n":5,"z":1,"sources":[{"relays":[1,2,3],"rate":1}]}"#)
                .unwrap();
        assert_eq!(s.total_rate(), 1);
    }
}
