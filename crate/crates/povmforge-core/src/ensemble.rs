//! Shared data model for the two measurement families: the ordered ensemble of
//! d^2 subnormalized projectors with its renormalizer and provenance, and the
//! per-case ledger that compares measured pairwise overlaps against the
//! closed-form bounds.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::linalg::{hermitian_eig, HermitianOperator, UnitVector};

/// Which of the two families an ensemble belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Construction {
    /// Dimension q, built from a 2-to-1 PN function and an additive character.
    #[serde(rename = "theorem_2_10")]
    DimQ,
    /// Dimension q+1, built from characters of the norm-one subgroup.
    #[serde(rename = "theorem_3_5")]
    DimQPlusOne,
}

impl Construction {
    pub fn tag(&self) -> &'static str {
        match self {
            Construction::DimQ => "theorem_2_10",
            Construction::DimQPlusOne => "theorem_3_5",
        }
    }
}

/// Provenance tag of a single member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MemberLabel {
    /// Additive-character member v_{a,b} of the dimension-q family.
    Character { a: FieldElement, b: FieldElement },
    /// Subgroup-character member u_psi with character index m.
    SubgroupCharacter { m: u64 },
    /// Standard basis member e_index (0-based).
    Basis { index: usize },
}

/// Everything needed to replay a construction run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub field: FieldSpec,
    /// Polynomial coefficients (dimension-q family only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub f_coeffs: Option<Vec<FieldElement>>,
    /// Additive character index (dimension-q family only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chi_index: Option<FieldElement>,
    /// Pairing permutation a_1..a_q (dimension-q family only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub permutation: Option<Vec<FieldElement>>,
    /// Cubic extension field (dimension-(q+1) family only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ext_field: Option<FieldSpec>,
    /// Chosen generator of the extension's multiplicative group.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<FieldElement>,
}

/// An ordered family of d^2 subnormalized projectors M_i = R E_i R with
/// renormalizer R = E^(-1/2), plus the underlying unit vectors and labels.
#[derive(Debug, Clone)]
pub struct PovmEnsemble {
    pub dim: usize,
    pub construction: Construction,
    pub params: EnsembleParams,
    pub labels: Vec<MemberLabel>,
    /// The unit vectors behind the raw projectors, in member order.
    pub vectors: Vec<UnitVector>,
    /// E_i = (1/d) |v_i><v_i|.
    pub raw_members: Vec<HermitianOperator>,
    /// E^(-1/2), the structured closed form (cross-checked against the
    /// generic eigendecomposition path at build time).
    pub renormalizer: HermitianOperator,
    /// M_i = E^(-1/2) E_i E^(-1/2).
    pub members: Vec<HermitianOperator>,
}

impl PovmEnsemble {
    /// q of the underlying field.
    pub fn q(&self) -> u64 {
        self.params.field.q()
    }

    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    /// Max-entry deviation of sum(members) from the identity.
    pub fn povm_sum_deviation(&self) -> f64 {
        let mut sum = HermitianOperator::zeros(self.dim);
        for m in &self.members {
            sum = sum.add(m);
        }
        sum.deviation_from_identity()
    }

    /// Smallest eigenvalue across all members (positivity check).
    pub fn min_member_eigenvalue(&self) -> Result<f64> {
        let mins: Result<Vec<f64>> = self
            .members
            .par_iter()
            .map(|m| Ok(hermitian_eig(m)?.eigenvalues[0]))
            .collect();
        Ok(mins?.into_iter().fold(f64::INFINITY, f64::min))
    }

    /// d^2 Tr(M_i M_j), the scaled pairwise overlap the ledger bounds.
    pub fn pair_value(&self, i: usize, j: usize) -> f64 {
        let d2 = (self.dim * self.dim) as f64;
        d2 * self.members[i].trace_product(&self.members[j]).re
    }

    /// Diagnostic copy with one member zeroed out.
    pub fn mutated_zero_member(&self, index: usize) -> PovmEnsemble {
        let mut out = self.clone();
        out.members[index] = HermitianOperator::zeros(self.dim);
        out
    }

    /// Diagnostic copy with one member entry shifted by `delta` (kept
    /// Hermitian by touching a diagonal entry).
    pub fn mutated_perturb_member(&self, index: usize, delta: f64) -> PovmEnsemble {
        let mut out = self.clone();
        let old = out.members[index].get(0, 0);
        out.members[index] =
            out.members[index].with_entry_set(0, 0, old + Complex64::new(delta, 0.0));
        out
    }
}

/// One pairwise-overlap case of a ledger: its closed-form bound, the epsilon
/// expressions, the measured maximum, and the distance-to-symmetric gap.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseRecord {
    /// Case id: "1.1", "1.2", "2", "3" in dimension q; "1", "2", "3" in
    /// dimension q+1.
    pub case_id: String,
    /// Number of unordered member pairs in the case.
    pub pair_count: usize,
    /// The closed-form case bound on d^2 Tr(M_i M_j).
    pub bound: f64,
    /// Amplitude-level infinitesimal.
    pub epsilon_tilde: f64,
    /// Probability-level infinitesimal, epsilon = tilde^2 + 2 tilde.
    pub epsilon: f64,
    /// (1 + epsilon)/d, the looser bound the epsilon form certifies.
    pub epsilon_form_bound: f64,
    /// True when the case is an exact equality instead of an upper bound.
    pub equality: bool,
    pub measured_max: f64,
    /// bound - measured_max; nonnegative within tolerance when the family is
    /// built correctly.
    pub margin: f64,
    /// Pair attaining measured_max (member indices).
    pub worst_pair: Option<(usize, usize)>,
    /// Largest |measured - bound| over the case; meaningful when `equality`.
    pub max_equality_deviation: f64,
    /// |1/(d+1) - bound|: distance from the exactly-symmetric overlap.
    pub sic_gap: f64,
    /// Claimed decay order r of the gap, as in O(q^-r).
    pub gap_order: f64,
    /// sic_gap * q^r, the bounded-ratio statistic for the decay claim.
    pub gap_scaled: f64,
}

/// Per-case verification ledger for one ensemble.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpsilonLedger {
    pub construction: Construction,
    pub q: u64,
    pub dim: usize,
    pub cases: Vec<CaseRecord>,
}

impl EpsilonLedger {
    /// Check every case: bounds hold within `slack`, equalities hold within
    /// `slack`. Returns the first violation.
    pub fn validate(&self, slack: f64) -> Result<()> {
        for case in &self.cases {
            if case.margin < -slack {
                let (i, j) = case.worst_pair.unwrap_or((0, 0));
                return Err(Error::BoundViolated {
                    case: case.case_id.clone(),
                    i,
                    j,
                    measured: case.measured_max,
                    bound: case.bound,
                });
            }
            if case.equality && case.max_equality_deviation > slack {
                let (i, j) = case.worst_pair.unwrap_or((0, 0));
                return Err(Error::BoundViolated {
                    case: case.case_id.clone(),
                    i,
                    j,
                    measured: case.measured_max,
                    bound: case.bound,
                });
            }
        }
        Ok(())
    }

    pub fn case(&self, id: &str) -> Option<&CaseRecord> {
        self.cases.iter().find(|c| c.case_id == id)
    }
}

/// Per-case accumulation of a pairwise overlap scan.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CaseExtrema {
    pub pair_count: usize,
    pub max: f64,
    pub min: f64,
    pub worst_pair: Option<(usize, usize)>,
}

impl CaseExtrema {
    fn empty() -> Self {
        CaseExtrema { pair_count: 0, max: f64::NEG_INFINITY, min: f64::INFINITY, worst_pair: None }
    }

    fn record(&mut self, value: f64, pair: (usize, usize)) {
        self.pair_count += 1;
        if value > self.max {
            self.max = value;
            self.worst_pair = Some(pair);
        }
        self.min = self.min.min(value);
    }

    fn merge(&mut self, other: &CaseExtrema) {
        self.pair_count += other.pair_count;
        if other.max > self.max {
            self.max = other.max;
            self.worst_pair = other.worst_pair;
        }
        self.min = self.min.min(other.min);
    }
}

/// Scan all unordered member pairs, classify them with `classify`, and return
/// per-case extrema of d^2 Tr(M_i M_j). Parallel over the first index with a
/// deterministic sequential merge.
pub(crate) fn pairwise_case_maxima<F>(
    ensemble: &PovmEnsemble,
    case_count: usize,
    classify: F,
) -> Vec<CaseExtrema>
where
    F: Fn(&MemberLabel, &MemberLabel) -> usize + Sync,
{
    let n = ensemble.member_count();
    let partials: Vec<Vec<CaseExtrema>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut local = vec![CaseExtrema::empty(); case_count];
            for j in (i + 1)..n {
                let case = classify(&ensemble.labels[i], &ensemble.labels[j]);
                local[case].record(ensemble.pair_value(i, j), (i, j));
            }
            local
        })
        .collect();

    let mut merged = vec![CaseExtrema::empty(); case_count];
    for local in partials {
        for (slot, l) in merged.iter_mut().zip(&local) {
            slot.merge(l);
        }
    }
    merged
}
