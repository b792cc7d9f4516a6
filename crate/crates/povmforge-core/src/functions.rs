//! 2-to-1 mappings and perfect nonlinear (PN) functions over GF(q):
//! membership predicates, the pairing permutation adapted to a 2-to-1
//! function, a deterministic catalogue of admissible quadratics, and the
//! closed-form count of all 2-to-1 mappings with its brute-force oracle.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// A univariate polynomial over GF(q); coefficient of x^i at index i.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyFunction {
    pub coeffs: Vec<FieldElement>,
}

impl PolyFunction {
    pub fn new(coeffs: Vec<FieldElement>) -> Self {
        PolyFunction { coeffs }
    }

    /// x^2, the canonical 2-to-1 PN function in odd characteristic.
    pub fn x_squared(spec: &FieldSpec) -> Self {
        PolyFunction::new(vec![spec.zero(), spec.zero(), spec.one()])
    }

    /// s*x^2 + t*x + w.
    pub fn quadratic(s: FieldElement, t: FieldElement, w: FieldElement) -> Self {
        PolyFunction::new(vec![w, t, s])
    }

    /// f + d (constant shift).
    pub fn shifted(&self, spec: &FieldSpec, d: &FieldElement) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(d.clone());
        } else {
            coeffs[0] = spec.add(&coeffs[0], d);
        }
        PolyFunction::new(coeffs)
    }

    pub fn eval(&self, spec: &FieldSpec, x: &FieldElement) -> FieldElement {
        let mut acc = spec.zero();
        for c in self.coeffs.iter().rev() {
            acc = spec.mul(&acc, x);
            acc = spec.add(&acc, c);
        }
        acc
    }

    /// Values over the whole field in enumeration order.
    pub fn value_table(&self, spec: &FieldSpec) -> Vec<FieldElement> {
        spec.elements().iter().map(|x| self.eval(spec, x)).collect()
    }
}

/// Fiber-size census of a function table over GF(q).
#[derive(Debug, Clone, Serialize)]
pub struct TwoToOneProfile {
    pub is_two_to_one: bool,
    /// For odd q: the unique image with a single preimage, when 2-to-1.
    pub exceptional_image: Option<FieldElement>,
    /// fiber size -> number of images with that fiber size (size 0 omitted).
    pub fiber_counts: Vec<(usize, usize)>,
}

/// Classify an arbitrary value table (not necessarily polynomial) against the
/// 2-to-1 definition: every image has 2 or 0 preimages, except exactly one
/// image with a single preimage when q is odd.
pub fn fiber_profile_of_table(spec: &FieldSpec, values: &[FieldElement]) -> TwoToOneProfile {
    let q = spec.q();
    debug_assert_eq!(values.len() as u64, q);
    let mut fibers: HashMap<&FieldElement, usize> = HashMap::new();
    for v in values {
        *fibers.entry(v).or_insert(0) += 1;
    }
    let mut by_size: HashMap<usize, usize> = HashMap::new();
    let mut exceptional = None;
    for (image, size) in &fibers {
        *by_size.entry(*size).or_insert(0) += 1;
        if *size == 1 {
            exceptional = Some((*image).clone());
        }
    }
    let ok = if q.is_multiple_of(2) {
        by_size.get(&2).copied().unwrap_or(0) as u64 == q / 2 && by_size.len() == 1
    } else {
        by_size.get(&1).copied().unwrap_or(0) == 1
            && by_size.get(&2).copied().unwrap_or(0) as u64 == (q - 1) / 2
            && by_size.len() == 2
    };
    let mut fiber_counts: Vec<(usize, usize)> = by_size.into_iter().collect();
    fiber_counts.sort_unstable();
    TwoToOneProfile {
        is_two_to_one: ok,
        exceptional_image: if ok && q % 2 == 1 { exceptional } else { None },
        fiber_counts,
    }
}

/// 2-to-1 test for a polynomial function.
pub fn is_two_to_one(spec: &FieldSpec, f: &PolyFunction) -> TwoToOneProfile {
    fiber_profile_of_table(spec, &f.value_table(spec))
}

/// PN test: x -> f(x+a) - f(x) is a bijection for every a != 0.
pub fn is_pn(spec: &FieldSpec, f: &PolyFunction) -> bool {
    let elems = spec.elements();
    let table = f.value_table(spec);
    for a in elems.iter().skip(1) {
        let mut seen = vec![false; spec.q() as usize];
        let mut distinct = 0usize;
        for x in &elems {
            let shifted = spec.add(x, a);
            let diff = spec.sub(
                &table[spec.index(&shifted) as usize],
                &table[spec.index(x) as usize],
            );
            let idx = spec.index(&diff) as usize;
            if !seen[idx] {
                seen[idx] = true;
                distinct += 1;
            }
        }
        if distinct as u64 != spec.q() {
            return false;
        }
    }
    true
}

/// An ordering a_1..a_q of GF(q) pairing equal f-values symmetrically around
/// the centre: f(a_i) = f(a_{q+2-i}) for i = 2..(q+1)/2, with the singleton
/// fiber first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FPermutation {
    pub order: Vec<FieldElement>,
}

impl FPermutation {
    /// Check both pairing conditions against `f` by direct evaluation.
    pub fn validate(&self, spec: &FieldSpec, f: &PolyFunction) -> Result<()> {
        let q = spec.q() as usize;
        if self.order.len() != q {
            return Err(Error::InvalidPermutation {
                reason: format!("ordering has {} entries, expected {q}", self.order.len()),
            });
        }
        let mut seen = vec![false; q];
        for a in &self.order {
            if !spec.contains(a) {
                return Err(Error::InvalidPermutation { reason: "element outside field".into() });
            }
            let idx = spec.index(a) as usize;
            if seen[idx] {
                return Err(Error::InvalidPermutation { reason: "ordering repeats an element".into() });
            }
            seen[idx] = true;
        }
        let values: Vec<FieldElement> =
            self.order.iter().map(|a| f.eval(spec, a)).collect();
        let half = q.div_ceil(2);
        for i in 2..=half {
            if values[i - 1] != values[q + 2 - i - 1] {
                return Err(Error::InvalidPermutation {
                    reason: format!("f(a_{i}) != f(a_{})", q + 2 - i),
                });
            }
        }
        if values[1..half].contains(&values[0]) {
            return Err(Error::InvalidPermutation {
                reason: "f(a_1) collides with a paired value".into(),
            });
        }
        Ok(())
    }
}

/// Build the canonical pairing permutation for a 2-to-1 function over odd q:
/// the singleton-fiber preimage first, then the two-element fibers ordered by
/// their enumeration-least member, least member first in each pair.
pub fn build_f_permutation(spec: &FieldSpec, f: &PolyFunction) -> Result<FPermutation> {
    let q = spec.q();
    if q.is_multiple_of(2) {
        return Err(Error::EvenQ { q });
    }
    let profile = is_two_to_one(spec, f);
    if !profile.is_two_to_one {
        return Err(Error::NotTwoToOne { q });
    }
    let elems = spec.elements();
    let table = f.value_table(spec);
    let mut fibers: HashMap<&FieldElement, Vec<usize>> = HashMap::new();
    for (i, v) in table.iter().enumerate() {
        fibers.entry(v).or_default().push(i);
    }
    let mut singleton = None;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for members in fibers.values() {
        match members.as_slice() {
            [lone] => singleton = Some(*lone),
            [u, v] => pairs.push((*u.min(v), *u.max(v))),
            _ => unreachable!("profile already certified the fiber sizes"),
        }
    }
    pairs.sort_unstable();
    let singleton = singleton.expect("odd q certified a singleton fiber");

    let n = q as usize;
    let mut order = vec![spec.zero(); n];
    order[0] = elems[singleton].clone();
    for (offset, (u, v)) in pairs.iter().enumerate() {
        let i = offset + 2; // positions are 1-indexed in the pairing law
        order[i - 1] = elems[*u].clone();
        order[n + 2 - i - 1] = elems[*v].clone();
    }
    let perm = FPermutation { order };
    perm.validate(spec, f).expect("constructed ordering satisfies the pairing law");
    Ok(perm)
}

/// Deterministic catalogue of 2-to-1 PN functions over odd q: x^2, all its
/// constant shifts, and a fixed sample of general quadratics s*x^2+t*x+w with
/// w != 0 (so the catalogue exercises functions with f(0) != 0). Every entry
/// is re-checked against both predicates before being emitted.
pub fn catalogue_2to1_pn(spec: &FieldSpec) -> Vec<PolyFunction> {
    assert!(spec.q() % 2 == 1, "catalogue requires odd q");
    let elems = spec.elements();
    let mut out: Vec<PolyFunction> = Vec::new();
    let push = |f: PolyFunction, out: &mut Vec<PolyFunction>| {
        if !out.contains(&f) {
            out.push(f);
        }
    };

    let x2 = PolyFunction::x_squared(spec);
    push(x2.clone(), &mut out);
    for d in elems.iter().skip(1) {
        push(x2.shifted(spec, d), &mut out);
    }
    let nonzero: Vec<&FieldElement> = elems.iter().skip(1).collect();
    let s_choices = &nonzero[..nonzero.len().min(2)];
    let t_choices = &elems[..elems.len().min(2)];
    let w_choices = &nonzero[..nonzero.len().min(3)];
    for s in s_choices {
        for t in t_choices {
            for w in w_choices {
                push(
                    PolyFunction::quadratic((*s).clone(), t.clone(), (*w).clone()),
                    &mut out,
                );
            }
        }
    }

    for f in &out {
        debug_assert!(is_two_to_one(spec, f).is_two_to_one);
        debug_assert!(is_pn(spec, f));
    }
    out
}

/// Closed-form count of all 2-to-1 mappings GF(q) -> GF(q), in exact
/// big-integer arithmetic.
pub fn count_two_to_one_formula(spec: &FieldSpec) -> BigUint {
    let p = spec.p();
    let q = spec.q();
    let fact = |n: u64| -> BigUint {
        let mut acc = BigUint::one();
        for i in 2..=n {
            acc *= BigUint::from(i);
        }
        acc
    };
    if p == 2 {
        // (q!)^2 / (2^(q/2) * ((q/2)!)^2)
        let num = fact(q).pow(2);
        let den = (BigUint::one() << (q / 2)) * fact(q / 2).pow(2);
        num / den
    } else {
        // q^2 * ((q-1)!)^2 / (2^((q-1)/2) * (((q-1)/2)!)^2)
        let num = BigUint::from(q).pow(2) * fact(q - 1).pow(2);
        let den = (BigUint::one() << ((q - 1) / 2)) * fact((q - 1) / 2).pow(2);
        num / den
    }
}

/// Brute-force oracle: enumerate all q^q value tables and count the ones whose
/// fiber census is 2-to-1. Covers arbitrary set maps, not just polynomials.
pub fn count_two_to_one_bruteforce(spec: &FieldSpec) -> Result<u64> {
    let q = spec.q();
    if q > 5 {
        return Err(Error::TooLarge { q, limit: 5 });
    }
    let n = q as usize;
    let elems = spec.elements();
    let mut table = vec![0usize; n];
    let mut count = 0u64;
    loop {
        let values: Vec<FieldElement> = table.iter().map(|&i| elems[i].clone()).collect();
        if fiber_profile_of_table(spec, &values).is_two_to_one {
            count += 1;
        }
        // Odometer over the q^q tables.
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(count);
            }
            table[pos] += 1;
            if table[pos] < n {
                break;
            }
            table[pos] = 0;
            pos += 1;
        }
    }
}
