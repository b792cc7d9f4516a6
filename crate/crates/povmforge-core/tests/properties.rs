//! Property tests over randomized inputs: algebraic laws that the exhaustive
//! unit tests pin at fixed sizes, sampled here across fields and arguments.

use num_complex::Complex64;
use proptest::prelude::*;

use povmforge_core::{
    character_sum, frame_angles, is_pn, is_two_to_one, AdditiveCharacter, Character, FieldSpec,
    PolyFunction, UnitVector,
};

const FIELDS: &[(u64, u32)] = &[(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3), (11, 1)];

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    (0..FIELDS.len()).prop_map(|i| {
        let (p, k) = FIELDS[i];
        FieldSpec::new(p, k).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mul_distributes_over_add(spec in field_strategy(), seeds in prop::array::uniform3(0u64..10_000)) {
        let q = spec.q();
        let a = spec.element(seeds[0] % q);
        let b = spec.element(seeds[1] % q);
        let c = spec.element(seeds[2] % q);
        prop_assert_eq!(
            spec.mul(&a, &spec.add(&b, &c)),
            spec.add(&spec.mul(&a, &b), &spec.mul(&a, &c))
        );
        prop_assert_eq!(spec.mul(&spec.mul(&a, &b), &c), spec.mul(&a, &spec.mul(&b, &c)));
    }

    #[test]
    fn inverse_round_trips(spec in field_strategy(), seed in 0u64..10_000) {
        let q = spec.q();
        let x = spec.element(1 + seed % (q - 1));
        let inv = spec.inv(&x).unwrap();
        prop_assert_eq!(spec.mul(&x, &inv), spec.one());
    }

    #[test]
    fn trace_is_additive(spec in field_strategy(), seeds in prop::array::uniform2(0u64..10_000)) {
        let q = spec.q();
        let a = spec.element(seeds[0] % q);
        let b = spec.element(seeds[1] % q);
        let lhs = spec.trace_to_prime(&spec.add(&a, &b)).unwrap();
        let rhs = (spec.trace_to_prime(&a).unwrap() + spec.trace_to_prime(&b).unwrap()) % spec.p();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn characters_are_homomorphisms(
        spec in field_strategy(),
        seeds in prop::array::uniform3(0u64..10_000),
    ) {
        let q = spec.q();
        let chi = AdditiveCharacter::new(&spec, spec.element(seeds[0] % q)).unwrap();
        let b = spec.element(seeds[1] % q);
        let c = spec.element(seeds[2] % q);
        let lhs = chi.eval(&spec.add(&b, &c)).unwrap();
        let rhs = chi.eval(&b).unwrap() * chi.eval(&c).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12);
    }

    #[test]
    fn histogram_agrees_with_float_sum(
        spec in field_strategy(),
        index_seed in 0u64..10_000,
        picks in prop::collection::vec(0u64..10_000, 0..40),
    ) {
        let q = spec.q();
        let chi = AdditiveCharacter::new(&spec, spec.element(index_seed % q)).unwrap();
        let values: Vec<_> = picks.iter().map(|&i| spec.element(i % q)).collect();
        let (float_sum, hist) = character_sum(&values, &chi).unwrap();
        prop_assert_eq!(hist.total() as usize, values.len());
        prop_assert!((float_sum - hist.to_complex()).norm() <= 1e-12 * (values.len() as f64).max(1.0));
    }

    #[test]
    fn two_to_one_pn_is_shift_invariant(
        shift_seed in 0u64..10_000,
        s_seed in 0u64..10_000,
        t_seed in 0u64..10_000,
    ) {
        // Odd characteristic only; quadratics are the closed family.
        let spec = FieldSpec::new(7, 1).unwrap();
        let q = spec.q();
        let f = PolyFunction::quadratic(
            spec.element(1 + s_seed % (q - 1)),
            spec.element(t_seed % q),
            spec.zero(),
        );
        let shifted = f.shifted(&spec, &spec.element(shift_seed % q));
        prop_assert_eq!(
            is_two_to_one(&spec, &f).is_two_to_one,
            is_two_to_one(&spec, &shifted).is_two_to_one
        );
        prop_assert_eq!(is_pn(&spec, &f), is_pn(&spec, &shifted));
    }

    #[test]
    fn frame_angles_lie_in_unit_interval_and_count_pairs(
        entries in prop::collection::vec(prop::array::uniform4((-1.0f64..1.0, -1.0f64..1.0)), 2..8),
    ) {
        let vectors: Vec<UnitVector> = entries
            .iter()
            .filter_map(|raw| {
                let v: Vec<Complex64> = raw.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
                let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                if norm < 1e-6 {
                    return None;
                }
                UnitVector::new(v.into_iter().map(|c| c / norm).collect()).ok()
            })
            .collect();
        prop_assume!(vectors.len() >= 2);
        let profile = frame_angles(&vectors);
        let n = vectors.len();
        let total: usize = profile.angles.iter().map(|a| a.multiplicity).sum();
        prop_assert_eq!(total, n * (n - 1));
        for cluster in &profile.angles {
            prop_assert!(cluster.value >= -1e-12 && cluster.value <= 1.0 + 1e-9);
        }
    }
}

/// The linear-system direction of the Fourier-inversion property: the only
/// coefficient vectors whose character combination vanishes at every nonzero
/// argument are the constants. Checked as: the (q-1) x q evaluation matrix
/// kills the all-ones vector, and its column Gram has rank q-1, so the
/// nullspace is exactly one-dimensional.
#[test]
fn fourier_inversion_nullspace_is_constants() {
    for (p, k) in [(3u64, 1u32), (5, 1), (7, 1)] {
        let spec = FieldSpec::new(p, k).unwrap();
        let q = spec.q() as usize;
        let elems = spec.elements();

        // Column a of the matrix: (chi_a(b)) over b != 0.
        let columns: Vec<Vec<Complex64>> = elems
            .iter()
            .map(|a| {
                let chi = AdditiveCharacter::new(&spec, a.clone()).unwrap();
                elems[1..].iter().map(|b| chi.eval(b).unwrap()).collect()
            })
            .collect();

        // Constant coefficient vectors m*(1,..,1) vanish entrywise, for a few
        // fixed complex m.
        for m in [
            Complex64::new(1.0, 0.0),
            Complex64::new(-2.5, 0.75),
            Complex64::new(0.125, -3.0),
        ] {
            for row in 0..q - 1 {
                let total: Complex64 = columns.iter().map(|col| m * col[row]).sum();
                assert!(total.norm() <= 1e-9, "constants must be in the nullspace");
            }
        }

        // Column Gram: orthogonality makes it q*I - J, which is real; its
        // rank is the rank of the column family.
        let mut g = vec![0.0; q * q];
        for i in 0..q {
            for j in 0..q {
                let inner: Complex64 = columns[i]
                    .iter()
                    .zip(&columns[j])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                assert!(inner.im.abs() <= 1e-9);
                g[i * q + j] = inner.re;
            }
        }
        let eigs = povmforge_core::symmetric_eigenvalues(g, q).unwrap();
        let largest = eigs.last().copied().unwrap();
        let rank = eigs.iter().filter(|&&l| l > 1e-8 * largest).count();
        assert_eq!(rank, q - 1, "nullspace must be exactly one-dimensional");
    }
}
