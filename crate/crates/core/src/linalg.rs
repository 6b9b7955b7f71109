//! Dense symmetric eigendecomposition (cyclic Jacobi).

use crate::scalar::Scalar;

/// Eigenpairs of a symmetric matrix, eigenvalues in non-increasing order.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    pub values: Vec<T>,
    /// Row `k` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<T>>,
}

/// Decomposes the `n × n` row-major symmetric matrix `a`.
///
/// Only the symmetric part is meaningful; callers pass an exactly symmetric
/// matrix. Converges quadratically; sweeps stop once the off-diagonal mass is
/// below machine precision relative to the diagonal.
pub fn symmetric_eigen<T: Scalar>(a: &[T], n: usize) -> SymmetricEigen<T> {
    assert_eq!(a.len(), n * n, "matrix must be n x n");
    let mut m = a.to_vec();
    let mut v = vec![T::zero(); n * n];
    for k in 0..n {
        v[k * n + k] = T::one();
    }

    let eps = T::epsilon();
    for _sweep in 0..100 {
        let mut off = T::zero();
        let mut diag = T::zero();
        for p in 0..n {
            diag = diag + m[p * n + p] * m[p * n + p];
            for q in p + 1..n {
                off = off + m[p * n + q] * m[p * n + q];
            }
        }
        if off == T::zero() || off <= eps * eps * diag * T::lit(1e-4) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (T::lit(2.0) * apq);
                let t = if (theta * theta).is_finite() {
                    let sign = if theta < T::zero() { -T::one() } else { T::one() };
                    sign / (theta.abs() + (theta * theta + T::one()).sqrt())
                } else {
                    T::lit(0.5) / theta
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (m[k * n + p], m[k * n + q]);
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (m[p * n + k], m[q * n + k]);
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps index order for equal eigenvalues
    order.sort_by(|&x, &y| m[y * n + y].partial_cmp(&m[x * n + x]).unwrap_or(std::cmp::Ordering::Equal));
    SymmetricEigen {
        values: order.iter().map(|&k| m[k * n + k]).collect(),
        vectors: order.iter().map(|&k| (0..n).map(|r| v[r * n + k]).collect()).collect(),
    }
}
