//! The dimension-(q+1) measurement family: the set S = {(alpha-b)^(q-1)} u {1}
//! inside the norm-one subgroup N of GF(q^3)*, whose quotient set exhausts
//! N \ {1}; the q^2+q nontrivial characters of N evaluated on S give the
//! character vectors, and the square-root character-sum bound caps every
//! cross overlap.

use num_complex::Complex64;

use crate::characters::{character_sum, NSubgroupTable};
use crate::ensemble::{
    pairwise_case_maxima, CaseRecord, Construction, EnsembleParams, EpsilonLedger, MemberLabel,
    PovmEnsemble,
};
use crate::error::{Error, Result};
use crate::field::{FieldElement, TowerSpec};
use crate::linalg::{
    inverse_sqrt, outer_product, structured_inverse_sqrt_q1, sum_outer_products,
    HermitianOperator, UnitVector,
};

use crate::construction_q::renormalized_member;

const FORM_TOL: f64 = 1e-9;

/// The ordered set S: d_i = (alpha - b_i)^(q-1) for b_i over the base-field
/// enumeration, then d_{q+1} = 1.
#[derive(Debug, Clone)]
pub struct SSet {
    pub elements: Vec<FieldElement>,
}

impl SSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Build S and certify that all q+1 elements are distinct members of N.
pub fn build_s_set(tower: &TowerSpec) -> Result<SSet> {
    let ext = tower.ext();
    let q = tower.q();
    let mut elements = Vec::with_capacity(q as usize + 1);
    for b in tower.base().elements() {
        let d = ext.pow(&ext.sub(tower.alpha(), &tower.embed(&b)), q - 1);
        elements.push(d);
    }
    elements.push(ext.one());
    for d in &elements {
        if tower.norm_to_base(d)? != tower.base().one() {
            return Err(Error::NotInN);
        }
    }
    let distinct: std::collections::HashSet<_> = elements.iter().collect();
    if distinct.len() != elements.len() {
        return Err(Error::NotInN);
    }
    Ok(SSet { elements })
}

/// Outcome of checking the quotient structure of S.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DifferenceStructure {
    pub ok: bool,
    /// Number of distinct quotients d_i d_j^-1 over ordered pairs i != j.
    pub quotient_count: usize,
    /// Whether the quotient set equals N \ {1} exactly.
    pub equals_complement: bool,
    /// Ordered index pairs that collided, when any.
    pub collisions: Vec<((usize, usize), (usize, usize))>,
}

/// All q(q+1) quotients d_i d_j^-1 must be pairwise distinct and exhaust
/// N \ {1}.
pub fn verify_difference_structure(tower: &TowerSpec, s: &SSet) -> DifferenceStructure {
    let ext = tower.ext();
    let n = s.len();
    let mut seen: std::collections::HashMap<FieldElement, (usize, usize)> =
        std::collections::HashMap::new();
    let mut collisions = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let quotient = ext.mul(
                &s.elements[i],
                &ext.inv(&s.elements[j]).expect("S avoids zero"),
            );
            if let Some(&first) = seen.get(&quotient) {
                collisions.push((first, (i, j)));
            } else {
                seen.insert(quotient, (i, j));
            }
        }
    }
    let mut complement: std::collections::HashSet<FieldElement> =
        tower.norm_one_subgroup().into_iter().collect();
    complement.remove(&ext.one());
    let equals_complement = seen.len() == complement.len()
        && seen.keys().all(|t| complement.contains(t))
        && !seen.contains_key(&ext.one());
    DifferenceStructure {
        ok: collisions.is_empty() && equals_complement,
        quotient_count: seen.len(),
        equals_complement,
        collisions,
    }
}

/// Max over all nontrivial characters psi of |sum_{s in S} psi(s)|, computed
/// through the exact exponent histograms. Errors if any sum exceeds sqrt(q),
/// which would signal an arithmetic bug rather than a tolerance issue.
pub fn verify_li_bound(table: &NSubgroupTable, s: &SSet) -> Result<f64> {
    let q = (s.len() - 1) as f64;
    let bound = q.sqrt();
    let mut max = 0.0f64;
    for psi in table.nontrivial_characters() {
        let (float_sum, hist) = character_sum(&s.elements, &psi)?;
        let magnitude = hist.magnitude();
        debug_assert!((float_sum - hist.to_complex()).norm() <= 1e-12 * s.len() as f64);
        if magnitude > bound + 1e-9 {
            return Err(Error::LiBoundViolated { index: psi.m(), measured: magnitude, bound });
        }
        max = max.max(magnitude);
    }
    Ok(max)
}

/// Closed form of the frame operator: ((q+1)^2+1)/(q+1)^2 on the diagonal,
/// -1/(q+1)^2 elsewhere.
pub fn closed_form_frame_q1(q: u64) -> HermitianOperator {
    let d = (q + 1) as usize;
    let qf = q as f64;
    let off = -1.0 / (qf + 1.0).powi(2);
    let mut data = vec![Complex64::new(off, 0.0); d * d];
    for i in 0..d {
        data[i * d + i] = Complex64::new(1.0, 0.0);
    }
    HermitianOperator::new_symmetrized(d, data).expect("square data")
}

/// Assemble the dimension-(q+1) ensemble: (q^2+q) character vectors
/// u_psi = (psi(d_1), ..., psi(d_{q+1}))/sqrt(q+1) plus the standard basis,
/// renormalized by the closed-form inverse square root (cross-checked against
/// the generic path).
pub fn build_ensemble_q1(tower: &TowerSpec) -> Result<PovmEnsemble> {
    let q = tower.q();
    let d = (q + 1) as usize;
    let table = NSubgroupTable::build(tower);
    let s = build_s_set(tower)?;
    let logs: Vec<u64> = s
        .elements
        .iter()
        .map(|x| table.log(x))
        .collect::<Result<_>>()?;

    let scale = 1.0 / (d as f64).sqrt();
    let mut vectors = Vec::with_capacity(d * d);
    let mut labels = Vec::with_capacity(d * d);
    for psi in table.nontrivial_characters() {
        let entries = logs
            .iter()
            .map(|&j| {
                crate::characters::root_of_unity(table.order(), (psi.m() * j) % table.order())
                    .scale(scale)
            })
            .collect();
        vectors.push(UnitVector::new(entries)?);
        labels.push(MemberLabel::SubgroupCharacter { m: psi.m() });
    }
    for i in 0..d {
        vectors.push(UnitVector::standard_basis(d, i));
        labels.push(MemberLabel::Basis { index: i });
    }

    let e = sum_outer_products(&vectors, 1.0 / d as f64);
    let expected = closed_form_frame_q1(q);
    let dev = e.max_abs_diff(&expected);
    if dev > FORM_TOL {
        return Err(Error::ClosedFormMismatch { max_dev: dev });
    }

    let structured = structured_inverse_sqrt_q1(q);
    let generic = inverse_sqrt(&e)?;
    let path_dev = structured.max_abs_diff(&generic);
    if path_dev > FORM_TOL {
        return Err(Error::DualPathMismatch { max_dev: path_dev });
    }

    let weight = 1.0 / d as f64;
    let raw_members: Vec<HermitianOperator> =
        vectors.iter().map(|v| outer_product(v, weight)).collect();
    let members: Vec<HermitianOperator> = vectors
        .iter()
        .map(|v| renormalized_member(&structured, v, weight))
        .collect();

    let ensemble = PovmEnsemble {
        dim: d,
        construction: Construction::DimQPlusOne,
        params: EnsembleParams {
            field: tower.base().clone(),
            f_coeffs: None,
            chi_index: None,
            permutation: None,
            ext_field: Some(tower.ext().clone()),
            alpha: Some(tower.alpha().clone()),
        },
        labels,
        vectors,
        raw_members,
        renormalizer: structured,
        members,
    };
    debug_assert!(ensemble.povm_sum_deviation() <= 1e-9 * d as f64);
    Ok(ensemble)
}

struct CaseSpecQ1 {
    id: &'static str,
    bound: f64,
    tilde: f64,
    order: f64,
    equality: bool,
}

fn case_specs_q1(q: u64) -> [CaseSpecQ1; 3] {
    let qf = q as f64;
    let s = qf.sqrt();
    let den = (qf * qf + 2.0 * qf + 2.0) * (qf * qf + qf + 1.0);
    let core = qf * qf + qf + s + 1.0;
    [
        CaseSpecQ1 {
            id: "1",
            bound: (s * (qf + 1.0) * core / den).powi(2),
            tilde: (s * (qf + 1.0).powf(1.5) * core - den) / den,
            order: 2.5,
            equality: false,
        },
        CaseSpecQ1 {
            id: "2",
            bound: ((qf + 1.0).powf(1.5) * core / den).powi(2),
            tilde: ((qf + 1.0).powi(2) * core - den) / den,
            order: 2.0,
            equality: false,
        },
        CaseSpecQ1 {
            id: "3",
            bound: (qf + 1.0).powi(4) / (den * den),
            tilde: (qf + 1.0).powf(2.5) / den,
            order: 1.0,
            equality: true,
        },
    ]
}

fn classify_q1(l1: &MemberLabel, l2: &MemberLabel) -> usize {
    match (l1, l2) {
        (MemberLabel::SubgroupCharacter { .. }, MemberLabel::SubgroupCharacter { .. }) => 0,
        (MemberLabel::SubgroupCharacter { .. }, MemberLabel::Basis { .. })
        | (MemberLabel::Basis { .. }, MemberLabel::SubgroupCharacter { .. }) => 1,
        (MemberLabel::Basis { .. }, MemberLabel::Basis { .. }) => 2,
        _ => unreachable!("dimension-(q+1) labels are subgroup-character or basis"),
    }
}

/// Measure every pairwise overlap against the three case bounds; case 3 is an
/// exact equality and its deviation is tracked on both sides.
pub fn compute_ledger_q1(ensemble: &PovmEnsemble) -> EpsilonLedger {
    let q = ensemble.q();
    let qf = q as f64;
    let dim = ensemble.dim;
    let specs = case_specs_q1(q);
    let maxima = pairwise_case_maxima(ensemble, specs.len(), classify_q1);

    let cases = specs
        .iter()
        .zip(&maxima)
        .map(|(spec, extrema)| {
            let measured_max = if extrema.pair_count == 0 { 0.0 } else { extrema.max };
            let epsilon = spec.tilde * spec.tilde + 2.0 * spec.tilde;
            let sic_gap = (1.0 / (qf + 2.0) - spec.bound).abs();
            let max_equality_deviation = if spec.equality && extrema.pair_count > 0 {
                (extrema.max - spec.bound).abs().max((extrema.min - spec.bound).abs())
            } else {
                0.0
            };
            CaseRecord {
                case_id: spec.id.to_string(),
                pair_count: extrema.pair_count,
                bound: spec.bound,
                epsilon_tilde: spec.tilde,
                epsilon,
                epsilon_form_bound: (1.0 + epsilon) / (qf + 1.0),
                equality: spec.equality,
                measured_max,
                margin: spec.bound - measured_max,
                worst_pair: extrema.worst_pair,
                max_equality_deviation,
                sic_gap,
                gap_order: spec.order,
                gap_scaled: sic_gap * qf.powf(spec.order),
            }
        })
        .collect();

    EpsilonLedger { construction: Construction::DimQPlusOne, q, dim, cases }
}

pub fn epsilon_ledger_q1(ensemble: &PovmEnsemble) -> Result<EpsilonLedger> {
    let ledger = compute_ledger_q1(ensemble);
    ledger.validate(FORM_TOL)?;
    Ok(ledger)
}
