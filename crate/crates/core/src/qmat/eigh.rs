use alloc::vec::Vec;

use super::CMatrix;
use crate::{Error, Result, C64};

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Returns eigenvalues in ascending order and a unitary matrix whose columns
/// are the matching eigenvectors. The input must satisfy
/// `max |H − H†| ≤ 1e-10 · max(1, max |H|)`.
pub fn eigh(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !h.is_square() {
        return Err(Error::Dimension { expected: (h.rows(), h.rows()), got: h.shape() });
    }
    let scale = h.max_abs().max(1.0);
    let defect = h.hermiticity_defect();
    if !(defect <= 1e-10 * scale) {
        return Err(Error::NotHermitian(defect));
    }
    let n = h.rows();
    let mut a = h.hermitian_part();
    let mut v = CMatrix::identity(n);

    let frob = libm::sqrt(a.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>());
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    off += a[(p, q)].norm_sqr();
                }
            }
        }
        if libm::sqrt(off) <= f64::EPSILON * 1e-2 * frob || off == 0.0 {
            return Ok(sorted(&a, v));
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    Err(Error::NoConvergence)
}

fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + libm::sqrt(1.0 + tau * tau))
    };
    let c = 1.0 / libm::sqrt(1.0 + t * t);
    let s = t * c;
    // G = diag(1, conj(phase)) on (p, q) followed by the real rotation [[c, s], [-s, c]].
    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

fn sorted(a: &CMatrix, v: CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::super::pauli;
    use super::*;

    fn reconstruct(vals: &[f64], vecs: &CMatrix) -> CMatrix {
        &(vecs * &CMatrix::from_real_diag(vals)) * &vecs.adjoint()
    }

    #[test]
    fn pauli_z() {
        let (vals, _) = eigh(&pauli::z()).unwrap();
        assert_eq!(vals, [-1.0, 1.0]);
    }

    #[test]
    fn pauli_y_vectors() {
        let (vals, vecs) = eigh(&pauli::y()).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        assert!(reconstruct(&vals, &vecs).max_abs_diff(&pauli::y()) < 1e-14);
    }

    #[test]
    fn identity_four() {
        let (vals, vecs) = eigh(&CMatrix::identity(4)).unwrap();
        assert!(vals.iter().all(|&x| x == 1.0));
        assert_eq!(vecs, CMatrix::identity(4));
    }

    #[test]
    fn dense_hermitian() {
        let h = CMatrix::from_fn(5, 5, |r, c| {
            let base = C64::new((r * 7 + c * 3) as f64 % 5.0 - 2.0, (r as f64 - c as f64) * 0.3);
            if r == c {
                C64::new(base.re, 0.0)
            } else {
                base
            }
        });
        let h = h.hermitian_part();
        let (vals, vecs) = eigh(&h).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        assert!(reconstruct(&vals, &vecs).max_abs_diff(&h) < 1e-12);
        assert!((&vecs.adjoint() * &vecs).max_abs_diff(&CMatrix::identity(5)) < 1e-12);
        for (k, &lam) in vals.iter().enumerate() {
            let col = vecs.column(k);
            let hv = h.matvec(&col);
            let worst = hv.iter().zip(&col).map(|(a, b)| (a - b * lam).norm()).fold(0.0, f64::max);
            assert!(worst < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        assert!(matches!(eigh(&pauli::lower()), Err(Error::NotHermitian(_))));
        assert!(matches!(eigh(&CMatrix::zeros(2, 3)), Err(Error::Dimension { .. })));
    }
}
