//! Exact arithmetic in GF(p^k), plus the cubic extension tower GF(q^3)/GF(q)
//! used by the norm-one-subgroup construction.
//!
//! Elements are polynomial-basis coefficient vectors over GF(p), constant term
//! first. Every enumeration in this crate is lexicographic with the constant
//! term varying fastest, so the element with index `i` has the base-p digits
//! of `i` as coordinates. The modulus is the lexicographically least monic
//! irreducible of its degree, which makes every downstream construction
//! reproducible bit for bit.

use std::collections::HashMap;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of GF(p^k): `k` residues mod p, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// A finite field GF(p^k) presented by a monic irreducible modulus over GF(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
    k: u32,
    /// Monic, degree k, constant term first (length k+1, last entry 1).
    modulus: Vec<u64>,
    q: u64,
}

impl FieldSpec {
    /// Build GF(p^k) with the deterministically chosen modulus: the
    /// lexicographically least monic irreducible of degree k over GF(p).
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidInput("extension degree k must be >= 1".into()));
        }
        let q = checked_order(p, k)?;
        for idx in 0..q {
            let mut modulus = digits(idx, p, k as usize);
            modulus.push(1);
            if poly_is_irreducible(&modulus, p) {
                return Ok(FieldSpec { p, k, modulus, q });
            }
        }
        // Irreducibles of every degree exist over every prime field.
        Err(Error::NoModulusFound { p, k })
    }

    /// Build GF(p^k) from an explicit monic irreducible modulus.
    pub fn with_modulus(p: u64, k: u32, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidInput("extension degree k must be >= 1".into()));
        }
        let q = checked_order(p, k)?;
        if modulus.len() != k as usize + 1
            || modulus[k as usize] != 1
            || modulus.iter().any(|&c| c >= p)
        {
            return Err(Error::InvalidInput(format!(
                "modulus must be monic of degree {k} with coefficients below {p}"
            )));
        }
        if !poly_is_irreducible(&modulus, p) {
            return Err(Error::InvalidInput("modulus is reducible".into()));
        }
        Ok(FieldSpec { p, k, modulus, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// True when `x` structurally belongs to this field (length and digit range).
    pub fn contains(&self, x: &FieldElement) -> bool {
        x.coeffs.len() == self.k as usize && x.coeffs.iter().all(|&c| c < self.p)
    }

    fn check(&self, x: &FieldElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::FieldMismatch { p: self.p, k: self.k })
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: vec![0; self.k as usize] }
    }

    pub fn one(&self) -> FieldElement {
        self.constant(1 % self.p)
    }

    /// The element c·1 for a residue c mod p.
    pub fn constant(&self, c: u64) -> FieldElement {
        let mut coeffs = vec![0; self.k as usize];
        coeffs[0] = c % self.p;
        FieldElement { coeffs }
    }

    /// Element with index `i` in the fixed enumeration (base-p digits of i).
    pub fn element(&self, i: u64) -> FieldElement {
        debug_assert!(i < self.q);
        FieldElement { coeffs: digits(i, self.p, self.k as usize) }
    }

    /// Element from explicit polynomial-basis coordinates, constant term
    /// first; shorter inputs are zero-padded.
    pub fn element_from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::FieldMismatch { p: self.p, k: self.k });
        }
        let mut full = coeffs.to_vec();
        full.resize(self.k as usize, 0);
        Ok(FieldElement { coeffs: full })
    }

    /// Index of `x` in the fixed enumeration.
    pub fn index(&self, x: &FieldElement) -> u64 {
        let mut idx = 0;
        for &c in x.coeffs.iter().rev() {
            idx = idx * self.p + c;
        }
        idx
    }

    /// All q elements in enumeration order.
    pub fn elements(&self) -> Vec<FieldElement> {
        (0..self.q).map(|i| self.element(i)).collect()
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        FieldElement { coeffs }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn scalar_mul(&self, c: u64, a: &FieldElement) -> FieldElement {
        let c = c % self.p;
        let coeffs = a.coeffs.iter().map(|&x| (x * c) % self.p).collect();
        FieldElement { coeffs }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let k = self.k as usize;
        let mut conv = vec![0u64; 2 * k - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                conv[i + j] = (conv[i + j] + x * y) % self.p;
            }
        }
        // Reduce by the monic modulus, highest power first.
        for i in (k..2 * k - 1).rev() {
            let c = conv[i];
            if c == 0 {
                continue;
            }
            conv[i] = 0;
            for j in 0..k {
                let sub = (c * self.modulus[j]) % self.p;
                conv[i - k + j] = (conv[i - k + j] + self.p - sub) % self.p;
            }
        }
        conv.truncate(k);
        FieldElement { coeffs: conv }
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(self.pow(a, self.q - 2))
    }

    /// Trace to the prime field: tr(x) = sum of x^(p^i) for i = 0..k-1,
    /// returned as a residue mod p.
    pub fn trace_to_prime(&self, x: &FieldElement) -> Result<u64> {
        self.check(x)?;
        let mut frob = x.clone();
        let mut acc = x.clone();
        for _ in 1..self.k {
            frob = self.pow(&frob, self.p);
            acc = self.add(&acc, &frob);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0), "trace left the prime field");
        Ok(acc.coeffs[0])
    }

    /// Enumeration-least generator of the multiplicative group, found by
    /// testing orders against the prime factorization of q - 1.
    pub fn find_generator(&self) -> FieldElement {
        let group_order = self.q - 1;
        let factors = prime_factors(group_order);
        for i in 1..self.q {
            let cand = self.element(i);
            let is_gen = factors
                .iter()
                .all(|&r| self.pow(&cand, group_order / r) != self.one());
            if is_gen {
                return cand;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("FieldSpec", 3)?;
        s.serialize_field("p", &self.p)?;
        s.serialize_field("k", &self.k)?;
        s.serialize_field("modulus", &self.modulus)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            p: u64,
            k: u32,
            modulus: Vec<u64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        FieldSpec::with_modulus(raw.p, raw.k, raw.modulus).map_err(serde::de::Error::custom)
    }
}

/// The cubic tower GF(q^3) over GF(q), realized as a degree-3k extension of
/// GF(p) with an explicit embedding of the base field.
#[derive(Debug, Clone)]
pub struct TowerSpec {
    base: FieldSpec,
    ext: FieldSpec,
    alpha: FieldElement,
    /// beta^0 .. beta^(k-1) for beta the enumeration-least root of the base
    /// modulus inside the extension; the embedding sends coordinates to
    /// sum c_j beta^j.
    beta_powers: Vec<FieldElement>,
    /// Embedded copy of GF(q) -> its base-field preimage.
    subfield: HashMap<FieldElement, FieldElement>,
}

impl TowerSpec {
    pub fn for_base(base: FieldSpec) -> Result<Self> {
        let ext = FieldSpec::new(base.p(), 3 * base.k())?;
        let alpha = ext.find_generator();

        // beta: least root of the base modulus in the extension.
        let base_modulus = base.modulus().to_vec();
        let mut beta = None;
        for i in 0..ext.q() {
            let cand = ext.element(i);
            if eval_prime_poly(&ext, &base_modulus, &cand).is_zero() {
                beta = Some(cand);
                break;
            }
        }
        let beta = beta.expect("base modulus splits in the cubic extension");

        let mut beta_powers = Vec::with_capacity(base.k() as usize);
        let mut pw = ext.one();
        for _ in 0..base.k() {
            beta_powers.push(pw.clone());
            pw = ext.mul(&pw, &beta);
        }

        let mut tower = TowerSpec { base, ext, alpha, beta_powers, subfield: HashMap::new() };
        let mut subfield = HashMap::new();
        for elem in tower.base.elements() {
            subfield.insert(tower.embed(&elem), elem);
        }
        tower.subfield = subfield;
        Ok(tower)
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn ext(&self) -> &FieldSpec {
        &self.ext
    }

    pub fn alpha(&self) -> &FieldElement {
        &self.alpha
    }

    pub fn q(&self) -> u64 {
        self.base.q()
    }

    /// Order of the norm-one subgroup N: q^2 + q + 1.
    pub fn subgroup_order(&self) -> u64 {
        let q = self.q();
        q * q + q + 1
    }

    /// Ring-homomorphic embedding GF(q) -> GF(q^3).
    pub fn embed(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.ext.zero();
        for (j, &c) in x.coeffs().iter().enumerate() {
            acc = self.ext.add(&acc, &self.ext.scalar_mul(c, &self.beta_powers[j]));
        }
        acc
    }

    /// Norm map Nr(x) = x^(q^2+q+1), landing back in the base field.
    pub fn norm_to_base(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::ZeroInput);
        }
        let y = self.ext.pow(x, self.subgroup_order());
        Ok(self
            .subfield
            .get(&y)
            .cloned()
            .expect("norm lands in the embedded base field"))
    }

    /// The norm-one subgroup N listed as alpha^(q-1), alpha^(2(q-1)), ...,
    /// alpha^((q^2+q+1)(q-1)) = 1.
    pub fn norm_one_subgroup(&self) -> Vec<FieldElement> {
        let step = self.ext.pow(&self.alpha, self.q() - 1);
        let n = self.subgroup_order();
        let mut out = Vec::with_capacity(n as usize);
        let mut cur = self.ext.one();
        for _ in 0..n {
            cur = self.ext.mul(&cur, &step);
            out.push(cur.clone());
        }
        out
    }
}

/// Evaluate a polynomial with prime-field coefficients at a point of `field`.
fn eval_prime_poly(field: &FieldSpec, coeffs: &[u64], x: &FieldElement) -> FieldElement {
    let mut acc = field.zero();
    for &c in coeffs.iter().rev() {
        acc = field.mul(&acc, x);
        acc = field.add(&acc, &field.constant(c));
    }
    acc
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factors of n (distinct), by trial division; desk scale only.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn checked_order(p: u64, k: u32) -> Result<u64> {
    let mut q: u64 = 1;
    for _ in 0..k {
        q = q.checked_mul(p).ok_or(Error::OrderTooLarge { p, k })?;
    }
    // q - 2 is used as an exponent; also keep q*q+q+1 within u64 comfortably.
    if q > 1 << 40 {
        return Err(Error::OrderTooLarge { p, k });
    }
    Ok(q)
}

fn digits(mut n: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for slot in out.iter_mut() {
        *slot = n % p;
        n /= p;
    }
    out
}

/// Remainder of `num` modulo the monic polynomial `den` over GF(p).
fn poly_rem(num: &[u64], den: &[u64], p: u64) -> Vec<u64> {
    debug_assert_eq!(*den.last().unwrap(), 1);
    let mut rem: Vec<u64> = num.to_vec();
    let d = den.len() - 1;
    while rem.len() > d {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - d;
        if lead != 0 {
            for (j, &dc) in den.iter().enumerate() {
                let sub = (lead * dc) % p;
                rem[shift + j] = (rem[shift + j] + p - sub) % p;
            }
        }
        rem.pop();
    }
    rem
}

/// Trial-division irreducibility for a monic polynomial over GF(p): no monic
/// divisor of degree 1..=deg/2.
fn poly_is_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut div = digits(idx, p, d);
            div.push(1);
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive field-axiom check: commutativity, associativity,
    /// distributivity, identities, and inverses.
    fn assert_field_axioms(spec: &FieldSpec) {
        let elems = spec.elements();
        let zero = spec.zero();
        let one = spec.one();
        for a in &elems {
            assert_eq!(spec.add(a, &zero), *a);
            assert_eq!(spec.mul(a, &one), *a);
            assert_eq!(spec.add(a, &spec.neg(a)), zero);
            if !a.is_zero() {
                let inv = spec.inv(a).unwrap();
                assert_eq!(spec.mul(a, &inv), one, "inverse failed for {a:?}");
            }
            for b in &elems {
                assert_eq!(spec.add(a, b), spec.add(b, a));
                assert_eq!(spec.mul(a, b), spec.mul(b, a));
                for c in &elems {
                    assert_eq!(spec.add(&spec.add(a, b), c), spec.add(a, &spec.add(b, c)));
                    assert_eq!(spec.mul(&spec.mul(a, b), c), spec.mul(a, &spec.mul(b, c)));
                    assert_eq!(
                        spec.mul(a, &spec.add(b, c)),
                        spec.add(&spec.mul(a, b), &spec.mul(a, c))
                    );
                }
            }
        }
    }

    #[test]
    fn prime_field_has_modulus_x() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        assert_eq!(f3.modulus(), &[0, 1]);
        assert_eq!(f3.q(), 3);
    }

    #[test]
    fn gf9_exists_with_quadratic_modulus() {
        let f9 = FieldSpec::new(3, 2).unwrap();
        assert_eq!(f9.q(), 9);
        assert_eq!(f9.modulus().len(), 3);
        assert_eq!(f9.modulus()[2], 1);
    }

    #[test]
    fn composite_p_rejected() {
        assert!(matches!(FieldSpec::new(6, 1), Err(Error::NotPrime(6))));
    }

    #[test]
    fn field_axioms_exhaustive_small_orders() {
        for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2), (7, 1), (3, 3)] {
            let spec = FieldSpec::new(p, k).unwrap();
            assert_field_axioms(&spec);
        }
    }

    #[test]
    fn field_axioms_pairwise_up_to_64() {
        // Triple loops get slow beyond q=27; pairwise laws plus inverses
        // still cover every element for the larger orders.
        for (p, k) in [(5, 2), (7, 2), (2, 6)] {
            let spec = FieldSpec::new(p, k).unwrap();
            let elems = spec.elements();
            let one = spec.one();
            for a in &elems {
                if !a.is_zero() {
                    assert_eq!(spec.mul(a, &spec.inv(a).unwrap()), one);
                }
                for b in &elems {
                    assert_eq!(spec.mul(a, b), spec.mul(b, a));
                    assert_eq!(spec.add(a, b), spec.add(b, a));
                }
            }
        }
    }

    #[test]
    fn trace_identity_on_prime_field() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        assert_eq!(f3.trace_to_prime(&f3.one()).unwrap(), 1);
        assert_eq!(f3.trace_to_prime(&f3.element(2)).unwrap(), 2);
    }

    #[test]
    fn trace_doubles_prime_subfield_in_gf9() {
        // Frobenius fixes the prime subfield, so tr(c) = 2c mod 3 in GF(9).
        let f9 = FieldSpec::new(3, 2).unwrap();
        for c in 0..3 {
            assert_eq!(f9.trace_to_prime(&f9.constant(c)).unwrap(), (2 * c) % 3);
        }
    }

    #[test]
    fn trace_balanced_on_gf8() {
        // Oracle: tr(x) = x + x^2 + x^4 summed directly; the trace is a
        // surjective GF(2)-linear map, so exactly half the values are 0.
        let f8 = FieldSpec::new(2, 3).unwrap();
        let mut zeros = 0;
        for x in f8.elements() {
            let direct = {
                let x2 = f8.mul(&x, &x);
                let x4 = f8.mul(&x2, &x2);
                f8.add(&f8.add(&x, &x2), &x4)
            };
            let t = f8.trace_to_prime(&x).unwrap();
            assert_eq!(f8.constant(t), direct);
            if t == 0 {
                zeros += 1;
            }
        }
        assert_eq!(zeros, 4);
    }

    #[test]
    fn trace_is_linear_and_surjective() {
        for (p, k) in [(2, 3), (3, 2), (5, 1), (3, 3), (2, 6)] {
            let spec = FieldSpec::new(p, k).unwrap();
            let elems = spec.elements();
            let mut seen = vec![false; p as usize];
            for a in &elems {
                seen[spec.trace_to_prime(a).unwrap() as usize] = true;
                for b in &elems {
                    let lhs = spec.trace_to_prime(&spec.add(a, b)).unwrap();
                    let rhs =
                        (spec.trace_to_prime(a).unwrap() + spec.trace_to_prime(b).unwrap()) % p;
                    assert_eq!(lhs, rhs);
                }
            }
            assert!(seen.iter().all(|&s| s), "trace not surjective for q={}", spec.q());
        }
    }

    #[test]
    fn generator_is_deterministic_and_has_full_order() {
        let f27 = FieldSpec::new(3, 3).unwrap();
        let g1 = f27.find_generator();
        let g2 = f27.find_generator();
        assert_eq!(g1, g2);
        // Order-26 check through the prime factors 2 and 13.
        assert_ne!(f27.pow(&g1, 13), f27.one());
        assert_ne!(f27.pow(&g1, 2), f27.one());
        assert_eq!(f27.pow(&g1, 26), f27.one());
    }

    #[test]
    fn gf8_generator_is_least_nontrivial_element() {
        // GF(8)* is cyclic of prime order 7: every element outside {0,1}
        // generates, so the scan returns the enumeration-least one.
        let f8 = FieldSpec::new(2, 3).unwrap();
        let g = f8.find_generator();
        assert_eq!(f8.index(&g), 2);
    }

    #[test]
    fn tower_embedding_is_ring_homomorphism() {
        for (p, k) in [(2, 1), (3, 1), (2, 2), (3, 2)] {
            let base = FieldSpec::new(p, k).unwrap();
            let tower = TowerSpec::for_base(base.clone()).unwrap();
            assert_eq!(tower.embed(&base.one()), tower.ext().one());
            for a in base.elements() {
                for b in base.elements() {
                    assert_eq!(
                        tower.embed(&base.add(&a, &b)),
                        tower.ext().add(&tower.embed(&a), &tower.embed(&b))
                    );
                    assert_eq!(
                        tower.embed(&base.mul(&a, &b)),
                        tower.ext().mul(&tower.embed(&a), &tower.embed(&b))
                    );
                }
            }
        }
    }

    #[test]
    fn norm_is_multiplicative_and_trivial_on_gf8() {
        let tower = TowerSpec::for_base(FieldSpec::new(2, 1).unwrap()).unwrap();
        let ext = tower.ext().clone();
        assert_eq!(tower.norm_to_base(&ext.one()).unwrap(), tower.base().one());
        // q=2: the norm exponent is the full group order, so Nr(x)=1 always.
        for i in 1..ext.q() {
            let x = ext.element(i);
            assert_eq!(tower.norm_to_base(&x).unwrap(), tower.base().one());
        }
    }

    #[test]
    fn norm_kernel_size_in_gf27() {
        // Oracle: brute-force exponentiation over all 26 nonzero elements.
        let tower = TowerSpec::for_base(FieldSpec::new(3, 1).unwrap()).unwrap();
        let ext = tower.ext().clone();
        let one = tower.base().one();
        let mut kernel = 0;
        for i in 1..ext.q() {
            let x = ext.element(i);
            let nx = tower.norm_to_base(&x).unwrap();
            assert!(!nx.is_zero());
            if nx == one {
                kernel += 1;
            }
        }
        assert_eq!(kernel, 13);
    }

    #[test]
    fn norm_multiplicativity_small_towers() {
        for (p, k) in [(2, 1), (3, 1)] {
            let tower = TowerSpec::for_base(FieldSpec::new(p, k).unwrap()).unwrap();
            let ext = tower.ext().clone();
            let base = tower.base().clone();
            for i in 1..ext.q() {
                for j in 1..ext.q() {
                    let x = ext.element(i);
                    let y = ext.element(j);
                    let lhs = tower.norm_to_base(&ext.mul(&x, &y)).unwrap();
                    let rhs =
                        base.mul(&tower.norm_to_base(&x).unwrap(), &tower.norm_to_base(&y).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn norm_of_zero_is_an_error() {
        let tower = TowerSpec::for_base(FieldSpec::new(2, 1).unwrap()).unwrap();
        assert!(matches!(tower.norm_to_base(&tower.ext().zero()), Err(Error::ZeroInput)));
    }

    #[test]
    fn norm_one_subgroup_is_the_norm_kernel() {
        for (p, k) in [(2, 1), (3, 1), (2, 2), (3, 2)] {
            let tower = TowerSpec::for_base(FieldSpec::new(p, k).unwrap()).unwrap();
            let n = tower.norm_one_subgroup();
            let q = tower.q();
            assert_eq!(n.len() as u64, q * q + q + 1);
            let one = tower.base().one();
            let mut distinct = std::collections::HashSet::new();
            for x in &n {
                assert_eq!(tower.norm_to_base(x).unwrap(), one);
                distinct.insert(x.clone());
            }
            assert_eq!(distinct.len(), n.len());
            // Closure under multiplication.
            let ext = tower.ext();
            for a in n.iter().take(8) {
                for b in n.iter().take(8) {
                    assert!(distinct.contains(&ext.mul(a, b)));
                }
            }
            assert_eq!(*n.last().unwrap(), ext.one());
        }
    }

    #[test]
    fn gf8_norm_one_subgroup_is_everything() {
        let tower = TowerSpec::for_base(FieldSpec::new(2, 1).unwrap()).unwrap();
        assert_eq!(tower.norm_one_subgroup().len(), 7);
    }

    #[test]
    fn field_spec_serde_round_trip() {
        let f9 = FieldSpec::new(3, 2).unwrap();
        let json = serde_json::to_string(&f9).unwrap();
        let back: FieldSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f9);
        // A reducible modulus is rejected on the way back in.
        let bad = r#"{"p":3,"k":2,"modulus":[0,0,1]}"#;
        assert!(serde_json::from_str::<FieldSpec>(bad).is_err());
    }
}
