//! Cross-cutting verification: the three measurement axioms (completeness,
//! approximate symmetry, informational completeness), frame-angle extraction,
//! and codebook cross-correlation metrics with the Welch lower bound.

use serde::{Deserialize, Serialize};

use crate::construction_q::compute_ledger_q;
use crate::construction_q1::compute_ledger_q1;
use crate::ensemble::{Construction, EpsilonLedger, PovmEnsemble};
use crate::error::{Error, Result};
use crate::linalg::{gram_rank, hermitian_eig, sum_outer_products, UnitVector};

/// Acceptance thresholds; every default comes from the family's closed-form
/// analysis, not from calibration.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    /// POVM-sum max-entry deviation allowance per unit of dimension.
    pub povm_sum_per_dim: f64,
    /// Slack added to each case bound (and to the case-3 equality).
    pub bound_slack: f64,
    /// Most negative admissible member eigenvalue.
    pub psd_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { povm_sum_per_dim: 1e-9, bound_slack: 1e-9, psd_floor: -1e-10 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubVerdict {
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LedgerVerdict {
    pub ledger: EpsilonLedger,
    /// Slack the case bounds were checked against.
    pub slack: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub violation: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankVerdict {
    pub rank: usize,
    pub expected: usize,
    pub smallest_retained: f64,
    pub pass: bool,
}

/// Structured pass/fail record for one ensemble, with measured values next to
/// the closed-form targets so regressions stay diagnosable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub construction: Construction,
    pub q: u64,
    pub dim: usize,
    pub completeness: SubVerdict,
    pub positivity: SubVerdict,
    pub symmetry: LedgerVerdict,
    pub informational_completeness: RankVerdict,
    pub pass: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Five-column summary: case, bound, measured, margin, verdict.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("case,bound,measured,margin,verdict\n");
        let verdict = |pass: bool| if pass { "pass" } else { "fail" };
        out.push_str(&format!(
            "povm_sum,{},{},{},{}\n",
            self.completeness.tolerance,
            self.completeness.measured,
            self.completeness.tolerance - self.completeness.measured,
            verdict(self.completeness.pass)
        ));
        out.push_str(&format!(
            "positivity,{},{},{},{}\n",
            self.positivity.tolerance,
            self.positivity.measured,
            self.positivity.measured - self.positivity.tolerance,
            verdict(self.positivity.pass)
        ));
        for case in &self.symmetry.ledger.cases {
            let case_pass = case.margin >= -self.symmetry.slack
                && (!case.equality || case.max_equality_deviation <= self.symmetry.slack);
            out.push_str(&format!(
                "overlap_case_{},{},{},{},{}\n",
                case.case_id, case.bound, case.measured_max, case.margin, verdict(case_pass)
            ));
        }
        out.push_str(&format!(
            "gram_rank,{},{},{},{}\n",
            self.informational_completeness.expected,
            self.informational_completeness.rank,
            self.informational_completeness.smallest_retained,
            verdict(self.informational_completeness.pass)
        ));
        out
    }

    pub fn summary_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "construction {} | q = {} | dimension {} | {} members\n",
            self.construction.tag(),
            self.q,
            self.dim,
            self.dim * self.dim
        ));
        out.push_str(&format!(
            "  completeness: max |sum M_i - I| = {:.3e} (tol {:.3e}) -> {}\n",
            self.completeness.measured,
            self.completeness.tolerance,
            if self.completeness.pass { "pass" } else { "FAIL" }
        ));
        out.push_str(&format!(
            "  positivity:   min member eigenvalue = {:.3e} (floor {:.3e}) -> {}\n",
            self.positivity.measured,
            self.positivity.tolerance,
            if self.positivity.pass { "pass" } else { "FAIL" }
        ));
        for case in &self.symmetry.ledger.cases {
            out.push_str(&format!(
                "  overlap case {}: measured max {:.9} vs bound {:.9} (margin {:+.3e}, {} pairs)\n",
                case.case_id, case.measured_max, case.bound, case.margin, case.pair_count
            ));
        }
        out.push_str(&format!(
            "  symmetry: {}\n",
            if self.symmetry.pass { "pass" } else { "FAIL" }
        ));
        out.push_str(&format!(
            "  informational completeness: rank {} of {} (smallest retained {:.3e}) -> {}\n",
            self.informational_completeness.rank,
            self.informational_completeness.expected,
            self.informational_completeness.smallest_retained,
            if self.informational_completeness.pass { "pass" } else { "FAIL" }
        ));
        out.push_str(&format!("  overall: {}\n", if self.pass { "PASS" } else { "FAIL" }));
        out
    }
}

/// Run the three axioms plus member positivity against an ensemble. The
/// report carries failures; only infrastructure breakdowns (a non-converging
/// eigensolve) surface as errors.
pub fn verify_povm_axioms(ensemble: &PovmEnsemble, tol: &Tolerances) -> Result<VerificationReport> {
    let dim = ensemble.dim;
    let sum_dev = ensemble.povm_sum_deviation();
    let sum_tol = tol.povm_sum_per_dim * dim as f64;
    let completeness = SubVerdict { measured: sum_dev, tolerance: sum_tol, pass: sum_dev <= sum_tol };

    let min_eig = ensemble.min_member_eigenvalue()?;
    let positivity =
        SubVerdict { measured: min_eig, tolerance: tol.psd_floor, pass: min_eig >= tol.psd_floor };

    let ledger = match ensemble.construction {
        Construction::DimQ => compute_ledger_q(ensemble),
        Construction::DimQPlusOne => compute_ledger_q1(ensemble),
    };
    let violation = ledger.validate(tol.bound_slack).err().map(|e| e.to_string());
    let symmetry =
        LedgerVerdict { slack: tol.bound_slack, pass: violation.is_none(), violation, ledger };

    let rank = gram_rank(&ensemble.members)?;
    let expected = dim * dim;
    let informational_completeness = RankVerdict {
        rank: rank.rank,
        expected,
        smallest_retained: rank.smallest_retained,
        pass: rank.rank == expected,
    };

    let pass = completeness.pass
        && positivity.pass
        && symmetry.pass
        && informational_completeness.pass;
    Ok(VerificationReport {
        construction: ensemble.construction,
        q: ensemble.q(),
        dim,
        completeness,
        positivity,
        symmetry,
        informational_completeness,
        pass,
    })
}

/// True iff the vectors span all of C^d (numerical rank of the frame operator
/// equals d).
pub fn frame_span_check(vectors: &[UnitVector]) -> Result<bool> {
    if vectors.is_empty() {
        return Ok(false);
    }
    let d = vectors[0].dim();
    if vectors.iter().any(|v| v.dim() != d) {
        return Err(Error::DimensionMismatch);
    }
    let frame_op = sum_outer_products(vectors, 1.0);
    let eig = hermitian_eig(&frame_op)?;
    let largest = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if largest <= 0.0 {
        return Ok(false);
    }
    let rank = eig.eigenvalues.iter().filter(|&&l| l > 1e-8 * largest).count();
    Ok(rank == d)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AngleCluster {
    pub value: f64,
    /// Over ordered pairs, so multiplicities sum to n(n-1).
    pub multiplicity: usize,
}

/// The distinct pairwise-overlap magnitudes of a unit-norm family, merged at
/// tolerance 1e-7 (far below the 0-to-1/sqrt(q) separation at desk scale).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameAngleProfile {
    pub angles: Vec<AngleCluster>,
}

impl FrameAngleProfile {
    pub fn angle_count(&self) -> usize {
        self.angles.len()
    }
}

const ANGLE_MERGE_TOL: f64 = 1e-7;

pub fn frame_angles(vectors: &[UnitVector]) -> FrameAngleProfile {
    let n = vectors.len();
    let mut values = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            values.push(vectors[i].inner(&vectors[j]).norm());
        }
    }
    values.sort_by(f64::total_cmp);
    let mut angles = Vec::new();
    let mut start = 0;
    for idx in 1..=values.len() {
        let boundary = idx == values.len() || values[idx] - values[idx - 1] > ANGLE_MERGE_TOL;
        if boundary {
            let cluster = &values[start..idx];
            let value = cluster.iter().sum::<f64>() / cluster.len() as f64;
            angles.push(AngleCluster { value, multiplicity: 2 * cluster.len() });
            start = idx;
        }
    }
    FrameAngleProfile { angles }
}

/// Cross-correlation metrics of an (N, K) unit-norm codebook.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodebookMetrics {
    pub n: usize,
    pub k: usize,
    pub i_max: f64,
    pub welch_bound: f64,
    /// i_max / welch_bound; fixed to 1 by convention when N = K (both
    /// quantities vanish for an orthonormal basis).
    pub ratio: f64,
}

pub fn codebook_metrics(vectors: &[UnitVector]) -> Result<CodebookMetrics> {
    let n = vectors.len();
    let k = vectors.first().map(|v| v.dim()).unwrap_or(0);
    if n < k || n == 0 {
        return Err(Error::TooFewVectors { n, dim: k });
    }
    let mut i_max: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            i_max = i_max.max(vectors[i].inner(&vectors[j]).norm());
        }
    }
    if n == k {
        return Ok(CodebookMetrics { n, k, i_max, welch_bound: 0.0, ratio: 1.0 });
    }
    let nf = n as f64;
    let kf = k as f64;
    let welch_bound = ((nf - kf) / ((nf - 1.0) * kf)).sqrt();
    Ok(CodebookMetrics { n, k, i_max, welch_bound, ratio: i_max / welch_bound })
}
