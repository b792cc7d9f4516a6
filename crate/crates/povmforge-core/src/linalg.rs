//! Dense complex linear algebra scoped to this crate: unit vectors, Hermitian
//! operators, a cyclic Jacobi eigensolver, inverse square roots (generic and
//! structured closed forms), and Gram-matrix rank decisions.
//!
//! The eigensolver is deliberately self-contained and deterministic; the
//! structured closed forms are always cross-checked against it, so each path
//! serves as the other's oracle.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// A normalized vector in C^d.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector {
    entries: Vec<Complex64>,
}

impl UnitVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        let d = entries.len();
        let norm_sqr: f64 = entries.iter().map(|e| e.norm_sqr()).sum();
        let dev = (norm_sqr - 1.0).abs();
        if dev > 1e-12 * d.max(1) as f64 {
            return Err(Error::NotUnitNorm { dev });
        }
        Ok(UnitVector { entries })
    }

    pub fn standard_basis(dim: usize, i: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim];
        entries[i] = Complex64::new(1.0, 0.0);
        UnitVector { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// <self|other> with conjugation on the left argument.
    pub fn inner(&self, other: &UnitVector) -> Complex64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// A d x d Hermitian matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    dim: usize,
    data: Vec<Complex64>,
}

impl HermitianOperator {
    /// Build from raw entries, symmetrizing as (A + A*)/2.
    pub fn new_symmetrized(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch);
        }
        let mut sym = data.clone();
        for i in 0..dim {
            for j in 0..dim {
                sym[i * dim + j] = (data[i * dim + j] + data[j * dim + i].conj()) * 0.5;
            }
        }
        Ok(HermitianOperator { dim, data: sym })
    }

    pub(crate) fn from_parts(dim: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        HermitianOperator { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianOperator { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i].re).sum()
    }

    /// Tr(self * other) = sum_ij self[i][j] * other[j][i]; real for Hermitian
    /// pairs up to rounding.
    pub fn trace_product(&self, other: &HermitianOperator) -> Complex64 {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.data[i * n + j] * other.data[j * n + i];
            }
        }
        acc
    }

    pub fn matmul(&self, other: &HermitianOperator) -> Vec<Complex64> {
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for l in 0..n {
                let a = self.data[i * n + l];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.data[l * n + j];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &HermitianOperator) -> HermitianOperator {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        HermitianOperator { dim: self.dim, data }
    }

    pub fn scaled(&self, factor: f64) -> HermitianOperator {
        HermitianOperator {
            dim: self.dim,
            data: self.data.iter().map(|a| a.scale(factor)).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &HermitianOperator) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Deviation from the identity, max-entry norm.
    pub fn deviation_from_identity(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                dev = dev.max((self.data[i * n + j] - expect).norm());
            }
        }
        dev
    }

    /// Replace one raw entry without re-symmetrizing. Diagnostic hook for
    /// mutation testing; the result may no longer be Hermitian.
    pub fn with_entry_set(&self, i: usize, j: usize, value: Complex64) -> HermitianOperator {
        let mut data = self.data.clone();
        data[i * self.dim + j] = value;
        HermitianOperator { dim: self.dim, data }
    }
}

/// weight * |v><v|: a rank-1 positive semidefinite operator with trace `weight`.
pub fn outer_product(v: &UnitVector, weight: f64) -> HermitianOperator {
    assert!(weight > 0.0, "outer_product requires a positive weight");
    let n = v.dim();
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            data[i * n + j] = v.entries[i] * v.entries[j].conj() * weight;
        }
    }
    HermitianOperator { dim: n, data }
}

/// Sum of weight * |v><v| over a family of vectors.
pub fn sum_outer_products(vectors: &[UnitVector], weight: f64) -> HermitianOperator {
    let n = vectors[0].dim();
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for v in vectors {
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] += v.entries[i] * v.entries[j].conj() * weight;
            }
        }
    }
    HermitianOperator { dim: n, data }
}

/// Result of a Hermitian eigendecomposition A = U diag(lambda) U*.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    pub dim: usize,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Row-major unitary; column m is the eigenvector of eigenvalues[m].
    pub eigenvectors: Vec<Complex64>,
}

impl Eigendecomposition {
    /// Reconstruct U f(lambda) U* for a spectral function f.
    pub fn spectral_map(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let n = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for m in 0..n {
            let fm = f(self.eigenvalues[m]);
            if fm == 0.0 {
                continue;
            }
            for i in 0..n {
                let uim = self.eigenvectors[i * n + m];
                for j in 0..n {
                    data[i * n + j] += uim * self.eigenvectors[j * n + m].conj() * fm;
                }
            }
        }
        HermitianOperator { dim: n, data }
    }
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi sweeps for a complex Hermitian matrix. Deterministic
/// rotation order (row-major over the upper triangle).
pub fn hermitian_eig(op: &HermitianOperator) -> Result<Eigendecomposition> {
    let n = op.dim;
    let mut a = op.data.clone();
    let mut v = HermitianOperator::identity(n).data;
    let scale: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Ok(Eigendecomposition { dim: n, eigenvalues: vec![0.0; n], eigenvectors: v });
    }
    let tol = 1e-13 * scale;
    let skip = tol / (100.0 * n as f64);

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a, n) <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r <= skip {
                    continue;
                }
                let phase = apq / r;
                let conj_phase = phase.conj();
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // A <- W* A W with the plane unitary W = diag(1, conj(phase)) . G(c, s).
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = aip.scale(c) - (conj_phase * aiq).scale(s);
                    a[i * n + q] = aip.scale(s) + (conj_phase * aiq).scale(c);
                }
                for j in 0..n {
                    let apj = a[p * n + j];
                    let aqj = a[q * n + j];
                    a[p * n + j] = apj.scale(c) - (phase * aqj).scale(s);
                    a[q * n + j] = apj.scale(s) + (phase * aqj).scale(c);
                }
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
                a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);

                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = vip.scale(c) - (conj_phase * viq).scale(s);
                    v[i * n + q] = vip.scale(s) + (conj_phase * viq).scale(c);
                }
            }
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure {
            sweeps: MAX_SWEEPS,
            off_diag: off_diagonal_norm(&a, n),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut eigenvectors = vec![Complex64::new(0.0, 0.0); n * n];
    for (col, &src) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[i * n + col] = v[i * n + src];
        }
    }
    Ok(Eigendecomposition { dim: n, eigenvalues, eigenvectors })
}

/// Eigenvalues (ascending) of a real symmetric matrix, same Jacobi scheme
/// without eigenvector accumulation. Used for Gram matrices, which can get
/// large (d^2 x d^2).
pub fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let tol = 1e-13 * scale;
    let skip = tol / (100.0 * n as f64);

    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        if off(&a) <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= skip {
                    continue;
                }
                let tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for j in 0..n {
                    let apj = a[p * n + j];
                    let aqj = a[q * n + j];
                    a[p * n + j] = c * apj - s * aqj;
                    a[q * n + j] = s * apj + c * aqj;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure { sweeps: MAX_SWEEPS, off_diag: off(&a) });
    }
    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(eigenvalues)
}

/// The unique positive definite B with B*B = A^-1, via eigendecomposition.
/// Fails if the smallest eigenvalue is at or below the positivity gate.
pub fn inverse_sqrt(op: &HermitianOperator) -> Result<HermitianOperator> {
    let eig = hermitian_eig(op)?;
    let min = eig.eigenvalues[0];
    if min <= 1e-10 {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
    }
    Ok(eig.spectral_map(|lambda| 1.0 / lambda.sqrt()))
}

/// Closed-form E^(-1/2) for the dimension-q frame operator: 1 at the top-left
/// corner and, on each pair (i, q+2-i) of 1-indexed positions, the 2x2 block
/// with eigenvalues 1 -+ 1/q inverted and rooted.
pub fn structured_inverse_sqrt_q(q: u64) -> HermitianOperator {
    assert!(q % 2 == 1 && q >= 3, "pair-block closed form needs odd q >= 3");
    let n = q as usize;
    let qf = q as f64;
    let lo = 1.0 / (1.0 - 1.0 / qf).sqrt();
    let hi = 1.0 / (1.0 + 1.0 / qf).sqrt();
    let a = (lo + hi) / 2.0;
    let b = (lo - hi) / 2.0;
    let mut out = HermitianOperator::zeros(n);
    out.data[0] = Complex64::new(1.0, 0.0);
    for i in 2..=n {
        out.data[(i - 1) * n + (i - 1)] = Complex64::new(a, 0.0);
        let j = n + 2 - i;
        out.data[(i - 1) * n + (j - 1)] = Complex64::new(b, 0.0);
    }
    out
}

/// Closed-form E^(-1/2) for the dimension-(q+1) frame operator
/// E = c I - V/(q+1)^2 with c = ((q+1)^2+1)/(q+1)^2, using the all-ones
/// spectrum {c with multiplicity q, c - 1/(q+1)}.
pub fn structured_inverse_sqrt_q1(q: u64) -> HermitianOperator {
    assert!(q >= 2);
    let d = (q + 1) as usize;
    let qf = q as f64;
    let c = ((qf + 1.0).powi(2) + 1.0) / (qf + 1.0).powi(2);
    let lambda1 = c - 1.0 / (qf + 1.0);
    let diag = 1.0 / c.sqrt();
    let shift = (1.0 / lambda1.sqrt() - diag) / (qf + 1.0);
    let mut out = HermitianOperator::zeros(d);
    for i in 0..d {
        for j in 0..d {
            let val = shift + if i == j { diag } else { 0.0 };
            out.data[i * d + j] = Complex64::new(val, 0.0);
        }
    }
    out
}

/// Numerical rank decision for a family of Hermitian operators.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct GramRank {
    pub rank: usize,
    /// Smallest Gram eigenvalue above the retention threshold.
    pub smallest_retained: f64,
}

/// Gram matrix G[i][j] = Tr(ops[i] ops[j]) and the count of eigenvalues above
/// 1e-8 times the largest.
pub fn gram_rank(ops: &[HermitianOperator]) -> Result<GramRank> {
    let n = ops.len();
    if n == 0 {
        return Ok(GramRank { rank: 0, smallest_retained: 0.0 });
    }
    let dim = ops[0].dim;
    if ops.iter().any(|op| op.dim != dim) {
        return Err(Error::DimensionMismatch);
    }
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| (i..n).map(|j| ops[i].trace_product(&ops[j]).re).collect())
        .collect();
    let mut g = vec![0.0; n * n];
    for i in 0..n {
        for (offset, &val) in upper[i].iter().enumerate() {
            let j = i + offset;
            g[i * n + j] = val;
            g[j * n + i] = val;
        }
    }
    let eigenvalues = symmetric_eigenvalues(g, n)?;
    let largest = *eigenvalues.last().unwrap();
    if largest <= 0.0 {
        return Ok(GramRank { rank: 0, smallest_retained: 0.0 });
    }
    let threshold = 1e-8 * largest;
    let retained: Vec<f64> = eigenvalues.iter().copied().filter(|&l| l > threshold).collect();
    Ok(GramRank {
        rank: retained.len(),
        smallest_retained: retained.first().copied().unwrap_or(0.0),
    })
}
