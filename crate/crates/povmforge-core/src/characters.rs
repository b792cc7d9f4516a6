//! Additive characters of GF(q) and multiplicative characters of the norm-one
//! subgroup N of GF(q^3)*, with two evaluation paths: floating complex values
//! for matrix work, and exact root-of-unity exponent histograms for the
//! bound-critical character sums. The histogram path keeps those sums
//! independent of floating accumulation order.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec, TowerSpec};

/// e^(2*pi*i*j/n), principal branch.
pub fn root_of_unity(order: u64, exponent: u64) -> Complex64 {
    let theta = 2.0 * PI * (exponent % order) as f64 / order as f64;
    Complex64::new(theta.cos(), theta.sin())
}

/// Common face of the two character families: a map into the `order`-th roots
/// of unity, reported as an exact exponent.
pub trait Character {
    /// Order of the root of unity the character maps into.
    fn order(&self) -> u64;
    /// Exponent j such that the character value at `x` is e^(2*pi*i*j/order).
    fn exponent(&self, x: &FieldElement) -> Result<u64>;

    fn eval(&self, x: &FieldElement) -> Result<Complex64> {
        Ok(root_of_unity(self.order(), self.exponent(x)?))
    }
}

/// The additive character chi_a(b) = zeta_p^tr(ab) of GF(q).
#[derive(Debug, Clone)]
pub struct AdditiveCharacter {
    spec: FieldSpec,
    index: FieldElement,
}

impl AdditiveCharacter {
    pub fn new(spec: &FieldSpec, index: FieldElement) -> Result<Self> {
        if !spec.contains(&index) {
            return Err(Error::FieldMismatch { p: spec.p(), k: spec.k() });
        }
        Ok(AdditiveCharacter { spec: spec.clone(), index })
    }

    pub fn index(&self) -> &FieldElement {
        &self.index
    }

    pub fn is_trivial(&self) -> bool {
        self.index.is_zero()
    }
}

impl Character for AdditiveCharacter {
    fn order(&self) -> u64 {
        self.spec.p()
    }

    fn exponent(&self, b: &FieldElement) -> Result<u64> {
        if !self.spec.contains(b) {
            return Err(Error::FieldMismatch { p: self.spec.p(), k: self.spec.k() });
        }
        let prod = self.spec.mul(&self.index, b);
        self.spec.trace_to_prime(&prod)
    }
}

/// Result of checking the two orthogonality relations of the additive
/// character group: sums over the argument and over the character index.
#[derive(Debug, Clone, Serialize)]
pub struct OrthogonalityReport {
    pub max_deviation_over_arguments: f64,
    pub max_deviation_over_indices: f64,
}

impl OrthogonalityReport {
    pub fn max_deviation(&self) -> f64 {
        self.max_deviation_over_arguments.max(self.max_deviation_over_indices)
    }
}

/// Verify sum_b chi_a(b) = q*[a=0] and sum_a chi_a(b) = q*[b=0] for all
/// indices, returning the worst deviation seen on each side.
pub fn orthogonality_check(spec: &FieldSpec) -> Result<OrthogonalityReport> {
    let elems = spec.elements();
    let q = spec.q() as f64;
    let mut over_args: f64 = 0.0;
    let mut over_idx: f64 = 0.0;
    for a in &elems {
        let chi = AdditiveCharacter::new(spec, a.clone())?;
        let mut sum = Complex64::new(0.0, 0.0);
        for b in &elems {
            sum += chi.eval(b)?;
        }
        let expect = if a.is_zero() { q } else { 0.0 };
        over_args = over_args.max((sum - expect).norm());
    }
    for b in &elems {
        let mut sum = Complex64::new(0.0, 0.0);
        for a in &elems {
            sum += AdditiveCharacter::new(spec, a.clone())?.eval(b)?;
        }
        let expect = if b.is_zero() { q } else { 0.0 };
        over_idx = over_idx.max((sum - expect).norm());
    }
    Ok(OrthogonalityReport {
        max_deviation_over_arguments: over_args,
        max_deviation_over_indices: over_idx,
    })
}

/// Discrete-log table for the norm-one subgroup N = <alpha^(q-1)>, built once
/// per tower and shared by every character of N.
#[derive(Debug, Clone)]
pub struct NSubgroupTable {
    order: u64,
    elements: Vec<FieldElement>,
    log: HashMap<FieldElement, u64>,
}

impl NSubgroupTable {
    pub fn build(tower: &TowerSpec) -> Self {
        let listed = tower.norm_one_subgroup();
        let order = tower.subgroup_order();
        let mut log = HashMap::with_capacity(listed.len());
        for (i, elem) in listed.iter().enumerate() {
            // Listing starts at alpha^(q-1), so position i has exponent i+1;
            // the identity (last entry) normalizes to exponent 0.
            log.insert(elem.clone(), (i as u64 + 1) % order);
        }
        NSubgroupTable { order, elements: listed, log }
    }

    /// Subgroup order q^2 + q + 1.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Elements of N in listing order.
    pub fn elements(&self) -> &[FieldElement] {
        &self.elements
    }

    /// Exponent j with x = (alpha^(q-1))^j, or NotInSubgroup.
    pub fn log(&self, x: &FieldElement) -> Result<u64> {
        self.log.get(x).copied().ok_or(Error::NotInSubgroup)
    }

    pub fn character(&self, m: u64) -> NSubgroupCharacter<'_> {
        NSubgroupCharacter { m: m % self.order, table: self }
    }

    /// All nontrivial characters psi_1 .. psi_(q^2+q).
    pub fn nontrivial_characters(&self) -> impl Iterator<Item = NSubgroupCharacter<'_>> {
        (1..self.order).map(move |m| self.character(m))
    }
}

/// The character psi_m of N, acting by psi_m(alpha^(j(q-1))) = zeta^(mj) with
/// zeta the principal primitive (q^2+q+1)-th root of unity.
#[derive(Debug, Clone, Copy)]
pub struct NSubgroupCharacter<'a> {
    m: u64,
    table: &'a NSubgroupTable,
}

impl NSubgroupCharacter<'_> {
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn is_trivial(&self) -> bool {
        self.m == 0
    }
}

impl Character for NSubgroupCharacter<'_> {
    fn order(&self) -> u64 {
        self.table.order
    }

    fn exponent(&self, x: &FieldElement) -> Result<u64> {
        let j = self.table.log(x)?;
        Ok((self.m * j) % self.table.order)
    }
}

/// Exact accumulator for a sum of roots of unity: entry j counts occurrences
/// of e^(2*pi*i*j/order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootOfUnityHistogram {
    pub order: u64,
    pub counts: Vec<u64>,
}

impl RootOfUnityHistogram {
    pub fn new(order: u64) -> Self {
        RootOfUnityHistogram { order, counts: vec![0; order as usize] }
    }

    pub fn record(&mut self, exponent: u64) {
        self.counts[(exponent % self.order) as usize] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Evaluate the histogram as a complex number, one term per exponent.
    pub fn to_complex(&self) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for (j, &c) in self.counts.iter().enumerate() {
            if c != 0 {
                sum += root_of_unity(self.order, j as u64).scale(c as f64);
            }
        }
        sum
    }

    pub fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }
}

/// Sum a character over a list of group elements, returning both the floating
/// accumulation and the exact exponent histogram.
pub fn character_sum<C: Character>(
    values: &[FieldElement],
    character: &C,
) -> Result<(Complex64, RootOfUnityHistogram)> {
    let mut hist = RootOfUnityHistogram::new(character.order());
    let mut sum = Complex64::new(0.0, 0.0);
    for x in values {
        let j = character
            .exponent(x)
            .map_err(|e| Error::DomainMismatch(Box::new(e)))?;
        hist.record(j);
        sum += root_of_unity(character.order(), j);
    }
    Ok((sum, hist))
}

/// The twisted sum sum_x chi(a*f(x) + b*x) over the whole field, with `f`
/// supplied as a value table in enumeration order.
pub fn twisted_character_sum(
    spec: &FieldSpec,
    chi: &AdditiveCharacter,
    f_values: &[FieldElement],
    a: &FieldElement,
    b: &FieldElement,
) -> Result<(Complex64, RootOfUnityHistogram)> {
    let args: Vec<FieldElement> = spec
        .elements()
        .iter()
        .zip(f_values)
        .map(|(x, fx)| spec.add(&spec.mul(a, fx), &spec.mul(b, x)))
        .collect();
    character_sum(&args, chi)
}
