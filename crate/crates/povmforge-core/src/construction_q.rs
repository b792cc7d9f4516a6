//! The dimension-q measurement family: q(q-1) character vectors built from a
//! 2-to-1 PN function plus the q standard basis vectors, renormalized by the
//! inverse square root of their frame operator. The frame operator has a
//! closed pair-block form, which is verified entrywise on every build.

use num_complex::Complex64;

use crate::characters::{AdditiveCharacter, Character};
use crate::ensemble::{
    pairwise_case_maxima, CaseRecord, Construction, EnsembleParams, EpsilonLedger, MemberLabel,
    PovmEnsemble,
};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::functions::{is_pn, is_two_to_one, FPermutation, PolyFunction};
use crate::linalg::{
    inverse_sqrt, outer_product, structured_inverse_sqrt_q, sum_outer_products,
    HermitianOperator, UnitVector,
};

/// Tolerance for the closed-form frame-operator check and the dual-path
/// renormalizer comparison.
const FORM_TOL: f64 = 1e-9;

/// The q^2 unit vectors: v_{a,b} for a in F_q, b in F_q^* (components ordered
/// by the pairing permutation), followed by the standard basis.
pub fn build_vectors_q(
    spec: &FieldSpec,
    f: &PolyFunction,
    perm: &FPermutation,
    chi_index: &FieldElement,
) -> Result<Vec<UnitVector>> {
    let q = spec.q();
    if q.is_multiple_of(2) || q < 3 {
        return Err(Error::EvenQ { q });
    }
    if chi_index.is_zero() {
        return Err(Error::TrivialCharacter);
    }
    if !is_two_to_one(spec, f).is_two_to_one || !is_pn(spec, f) {
        return Err(Error::NotTwoToOnePn { q });
    }
    perm.validate(spec, f)?;
    let chi = AdditiveCharacter::new(spec, chi_index.clone())?;

    let n = q as usize;
    let scale = 1.0 / (q as f64).sqrt();
    let f_on_perm: Vec<FieldElement> = perm.order.iter().map(|a| f.eval(spec, a)).collect();

    let mut vectors = Vec::with_capacity(n * n);
    for a in spec.elements() {
        for b in spec.elements().into_iter().skip(1) {
            let mut entries = Vec::with_capacity(n);
            for (ai, fai) in perm.order.iter().zip(&f_on_perm) {
                let arg = spec.add(&spec.mul(&a, fai), &spec.mul(&b, ai));
                entries.push(chi.eval(&arg)?.scale(scale));
            }
            vectors.push(UnitVector::new(entries)?);
        }
    }
    for i in 0..n {
        vectors.push(UnitVector::standard_basis(n, i));
    }
    Ok(vectors)
}

/// The closed form of the frame operator: 1 on the diagonal, -1/q on the
/// anti-diagonal pair positions (i, q+2-i) for i >= 2 (1-indexed).
pub fn closed_form_frame_q(q: u64) -> HermitianOperator {
    let n = q as usize;
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        data[i * n + i] = Complex64::new(1.0, 0.0);
    }
    for i in 2..=n {
        let j = n + 2 - i;
        data[(i - 1) * n + (j - 1)] = Complex64::new(-1.0 / q as f64, 0.0);
    }
    HermitianOperator::new_symmetrized(n, data).expect("square data")
}

/// E = sum (1/q) |v><v| over all q^2 vectors, checked against the closed form.
pub fn build_frame_operator_q(vectors: &[UnitVector], q: u64) -> Result<HermitianOperator> {
    debug_assert_eq!(vectors.len() as u64, q * q);
    let e = sum_outer_products(vectors, 1.0 / q as f64);
    let expected = closed_form_frame_q(q);
    let dev = e.max_abs_diff(&expected);
    if dev > FORM_TOL {
        return Err(Error::ClosedFormMismatch { max_dev: dev });
    }
    Ok(e)
}

/// Assemble the full ensemble: vectors, frame operator, dual-path
/// renormalizer, members M_i = E^(-1/2) E_i E^(-1/2), labels, provenance.
pub fn build_ensemble_q(
    spec: &FieldSpec,
    f: &PolyFunction,
    perm: &FPermutation,
    chi_index: &FieldElement,
) -> Result<PovmEnsemble> {
    let q = spec.q();
    let vectors = build_vectors_q(spec, f, perm, chi_index)?;
    let e = build_frame_operator_q(&vectors, q)?;

    let structured = structured_inverse_sqrt_q(q);
    let generic = inverse_sqrt(&e)?;
    let dev = structured.max_abs_diff(&generic);
    if dev > FORM_TOL {
        return Err(Error::DualPathMismatch { max_dev: dev });
    }

    let n = q as usize;
    let weight = 1.0 / q as f64;
    let mut labels = Vec::with_capacity(n * n);
    for a in spec.elements() {
        for b in spec.elements().into_iter().skip(1) {
            labels.push(MemberLabel::Character { a: a.clone(), b });
        }
    }
    for i in 0..n {
        labels.push(MemberLabel::Basis { index: i });
    }

    let raw_members: Vec<HermitianOperator> =
        vectors.iter().map(|v| outer_product(v, weight)).collect();
    let members: Vec<HermitianOperator> = vectors
        .iter()
        .map(|v| renormalized_member(&structured, v, weight))
        .collect();

    let ensemble = PovmEnsemble {
        dim: n,
        construction: Construction::DimQ,
        params: EnsembleParams {
            field: spec.clone(),
            f_coeffs: Some(f.coeffs.clone()),
            chi_index: Some(chi_index.clone()),
            permutation: Some(perm.order.clone()),
            ext_field: None,
            alpha: None,
        },
        labels,
        vectors,
        raw_members,
        renormalizer: structured,
        members,
    };
    debug_assert!(ensemble.povm_sum_deviation() <= 1e-9 * n as f64);
    Ok(ensemble)
}

/// M = weight * (R v)(R v)* for the renormalizer R.
pub(crate) fn renormalized_member(
    renormalizer: &HermitianOperator,
    v: &UnitVector,
    weight: f64,
) -> HermitianOperator {
    let w = renormalizer.apply(v.entries());
    let n = w.len();
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            data[i * n + j] = w[i] * w[j].conj() * weight;
        }
    }
    HermitianOperator::from_parts(n, data)
}

struct CaseSpecQ {
    id: &'static str,
    bound: f64,
    tilde: f64,
    order: f64,
}

fn case_specs_q(q: u64) -> [CaseSpecQ; 4] {
    let qf = q as f64;
    let s = qf.sqrt();
    let q2m1 = qf * qf - 1.0;
    [
        CaseSpecQ {
            id: "1.1",
            bound: ((qf * qf * s + qf * qf - qf + 1.0) / (q2m1 * qf)).powi(2),
            tilde: (qf * qf - qf + s + 1.0) / (s * q2m1),
            order: 1.5,
        },
        CaseSpecQ {
            id: "1.2",
            bound: ((qf * qf - qf + 1.0) / (q2m1 * qf)).powi(2),
            tilde: (qf * qf - qf + 1.0) / (s * q2m1),
            order: 1.0,
        },
        CaseSpecQ {
            id: "2",
            bound: ((qf * qf + qf + 1.0) / (q2m1 * s)).powi(2),
            tilde: (qf + 2.0) / q2m1,
            order: 2.0,
        },
        CaseSpecQ {
            id: "3",
            bound: (qf / q2m1).powi(2),
            tilde: qf * s / q2m1,
            order: 1.0,
        },
    ]
}

fn classify_q(l1: &MemberLabel, l2: &MemberLabel) -> usize {
    match (l1, l2) {
        (MemberLabel::Character { a: a1, .. }, MemberLabel::Character { a: a2, .. }) => {
            if a1 == a2 {
                1
            } else {
                0
            }
        }
        (MemberLabel::Character { .. }, MemberLabel::Basis { .. })
        | (MemberLabel::Basis { .. }, MemberLabel::Character { .. }) => 2,
        (MemberLabel::Basis { .. }, MemberLabel::Basis { .. }) => 3,
        _ => unreachable!("dimension-q labels are character or basis"),
    }
}

/// Measure every pairwise overlap, bucket it into the four cases, and record
/// bounds, infinitesimals, margins, and decay-gap statistics.
pub fn compute_ledger_q(ensemble: &PovmEnsemble) -> EpsilonLedger {
    let q = ensemble.q();
    let qf = q as f64;
    let dim = ensemble.dim;
    let specs = case_specs_q(q);
    let maxima = pairwise_case_maxima(ensemble, specs.len(), classify_q);

    let cases = specs
        .iter()
        .zip(&maxima)
        .map(|(spec, extrema)| {
            let measured_max = if extrema.pair_count == 0 { 0.0 } else { extrema.max };
            let epsilon = spec.tilde * spec.tilde + 2.0 * spec.tilde;
            let sic_gap = (1.0 / (qf + 1.0) - spec.bound).abs();
            CaseRecord {
                case_id: spec.id.to_string(),
                pair_count: extrema.pair_count,
                bound: spec.bound,
                epsilon_tilde: spec.tilde,
                epsilon,
                epsilon_form_bound: (1.0 + epsilon) / qf,
                equality: false,
                measured_max,
                margin: spec.bound - measured_max,
                worst_pair: extrema.worst_pair,
                max_equality_deviation: 0.0,
                sic_gap,
                gap_order: spec.order,
                gap_scaled: sic_gap * qf.powf(spec.order),
            }
        })
        .collect();

    EpsilonLedger { construction: Construction::DimQ, q, dim, cases }
}

/// Ledger plus the bound assertions: every case maximum must sit at or below
/// its closed-form bound within 1e-9.
pub fn epsilon_ledger_q(ensemble: &PovmEnsemble) -> Result<EpsilonLedger> {
    let ledger = compute_ledger_q(ensemble);
    ledger.validate(FORM_TOL)?;
    Ok(ledger)
}

/// Largest |<v_{a,b}|v_{a,d}>| over same-index character pairs; exactly zero
/// in theory since the function term cancels and the remaining character sum
/// vanishes.
pub fn max_same_index_inner_product(ensemble: &PovmEnsemble) -> f64 {
    let n = ensemble.vectors.len();
    let mut max: f64 = 0.0;
    for i in 0..n {
        let MemberLabel::Character { a: ref a1, .. } = ensemble.labels[i] else {
            continue;
        };
        for j in (i + 1)..n {
            let MemberLabel::Character { a: ref a2, .. } = ensemble.labels[j] else {
                continue;
            };
            if a1 == a2 {
                max = max.max(ensemble.vectors[i].inner(&ensemble.vectors[j]).norm());
            }
        }
    }
    max
}
