use alloc::vec::Vec;

use super::CMatrix;
use crate::{Error, Result, C64};

const EPS: f64 = f64::EPSILON;
const MAX_ITER_PER_ROW: usize = 30;

/// Eigenvalues and unit-norm right eigenvectors of a general complex matrix.
#[derive(Debug, Clone)]
pub struct Eigen {
    /// Eigenvalues, in the order they appear on the Schur diagonal.
    pub values: Vec<C64>,
    /// Column `j` is the right eigenvector for `values[j]`.
    pub vectors: CMatrix,
}

/// Eigendecomposition of a general complex square matrix.
///
/// Householder reduction to Hessenberg form, single-shift complex QR to a
/// Schur form `A = Q T Q†`, then back-substitution on `T`. Eigenvectors of
/// defective or nearly defective matrices come out nearly parallel; callers
/// that need an invertible basis must check its conditioning.
pub fn eig(a: &CMatrix) -> Result<Eigen> {
    if !a.is_square() {
        return Err(Error::Dimension { expected: (a.rows(), a.rows()), got: a.shape() });
    }
    if !a.is_finite() {
        return Err(Error::Validation("matrix entries must be finite"));
    }
    let n = a.rows();
    let (mut t, mut q) = hessenberg(a);
    schur(&mut t, &mut q)?;

    let values: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    let norm = t.max_abs().max(f64::MIN_POSITIVE);
    let mut x = CMatrix::zeros(n, n);
    for k in (0..n).rev() {
        x[(k, k)] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut acc = -t[(i, k)];
            for j in i + 1..k {
                acc -= t[(i, j)] * x[(j, k)];
            }
            let mut d = t[(i, i)] - t[(k, k)];
            if d.re == 0.0 && d.im == 0.0 {
                d = C64::new(EPS * norm, 0.0);
            }
            x[(i, k)] = acc / d;
        }
    }
    let mut vectors = &q * &x;
    for c in 0..n {
        let nrm = libm::sqrt((0..n).map(|r| vectors[(r, c)].norm_sqr()).sum::<f64>());
        for r in 0..n {
            vectors[(r, c)] /= nrm;
        }
    }
    Ok(Eigen { values, vectors })
}

fn hessenberg(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = CMatrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    for k in 0..n - 2 {
        let tail: f64 = (k + 2..n).map(|i| h[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let norm = libm::sqrt(tail + x0.norm_sqr());
        let phase = if x0.norm() == 0.0 { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vn = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
        v.iter_mut().for_each(|z| *z /= vn);

        // H <- (I - 2vv†) H
        for j in 0..n {
            let s: C64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * h[(k + 1 + i, j)]).sum();
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= vi * s * 2.0;
            }
        }
        // H <- H (I - 2vv†), Q <- Q (I - 2vv†)
        for m in [&mut h, &mut q] {
            for r in 0..n {
                let s: C64 = v.iter().enumerate().map(|(i, vi)| m[(r, k + 1 + i)] * vi).sum();
                for (i, vi) in v.iter().enumerate() {
                    m[(r, k + 1 + i)] -= s * vi.conj() * 2.0;
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
    (h, q)
}

/// `G = [[c, s], [-conj(s), c]]` with `G [a; b] = [r; 0]`.
fn givens(a: C64, b: C64) -> (f64, C64, C64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        (1.0, C64::new(0.0, 0.0), a)
    } else if na == 0.0 {
        (0.0, b.conj() / nb, C64::new(nb, 0.0))
    } else {
        let nrm = libm::hypot(na, nb);
        let phase = a / na;
        (na / nrm, phase * b.conj() / nrm, phase * nrm)
    }
}

fn rotate_rows(m: &mut CMatrix, i: usize, j: usize, c: f64, s: C64, cols: core::ops::Range<usize>) {
    for k in cols {
        let (x, y) = (m[(i, k)], m[(j, k)]);
        m[(i, k)] = x * c + s * y;
        m[(j, k)] = -s.conj() * x + y * c;
    }
}

fn rotate_cols(m: &mut CMatrix, i: usize, j: usize, c: f64, s: C64, rows: core::ops::Range<usize>) {
    for r in rows {
        let (x, y) = (m[(r, i)], m[(r, j)]);
        m[(r, i)] = x * c + y * s.conj();
        m[(r, j)] = -s * x + y * c;
    }
}

fn norm1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

fn schur(t: &mut CMatrix, q: &mut CMatrix) -> Result<()> {
    let n = t.rows();
    if n == 1 {
        return Ok(());
    }
    let tnorm = t.max_abs();
    let negligible = |t: &mut CMatrix, i: usize| -> bool {
        let d = norm1(t[(i, i)]) + norm1(t[(i + 1, i + 1)]);
        let sd = norm1(t[(i + 1, i)]);
        let floor = if d > 0.0 { d } else { tnorm };
        if sd <= EPS * floor {
            t[(i + 1, i)] = C64::new(0.0, 0.0);
            true
        } else {
            false
        }
    };

    let mut iu = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    loop {
        while iu > 0 && negligible(t, iu - 1) {
            iter = 0;
            iu -= 1;
        }
        if iu == 0 {
            return Ok(());
        }
        iter += 1;
        total += 1;
        if total > MAX_ITER_PER_ROW * n {
            return Err(Error::NoConvergence);
        }
        let mut il = iu - 1;
        while il > 0 && !negligible(t, il - 1) {
            il -= 1;
        }

        let shift = shift(t, iu, iter);
        let (c, s, _) = givens(t[(il, il)] - shift, t[(il + 1, il)]);
        rotate_rows(t, il, il + 1, c, s, il..n);
        rotate_cols(t, il, il + 1, c, s, 0..(il + 2).min(iu) + 1);
        rotate_cols(q, il, il + 1, c, s, 0..n);

        for i in il + 1..iu {
            let (c, s, r) = givens(t[(i, i - 1)], t[(i + 1, i - 1)]);
            t[(i, i - 1)] = r;
            t[(i + 1, i - 1)] = C64::new(0.0, 0.0);
            rotate_rows(t, i, i + 1, c, s, i..n);
            rotate_cols(t, i, i + 1, c, s, 0..(i + 2).min(iu) + 1);
            rotate_cols(q, i, i + 1, c, s, 0..n);
        }
    }
}

fn shift(t: &CMatrix, iu: usize, iter: usize) -> C64 {
    if iter == 10 || iter == 20 {
        let below = if iu >= 2 { t[(iu - 1, iu - 2)].re.abs() } else { 0.0 };
        return C64::new(t[(iu, iu - 1)].re.abs() + below, 0.0);
    }
    let (a, b, c, d) = (t[(iu - 1, iu - 1)], t[(iu - 1, iu)], t[(iu, iu - 1)], t[(iu, iu)]);
    let scale = norm1(a) + norm1(b) + norm1(c) + norm1(d);
    if scale == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let (a, b, c, d) = (a / scale, b / scale, c / scale, d / scale);
    let bc = b * c;
    let diff = a - d;
    let disc = (diff * diff + bc * 4.0).sqrt();
    let det = a * d - bc;
    let tr = a + d;
    let mut e1 = (tr + disc) * 0.5;
    let mut e2 = (tr - disc) * 0.5;
    if norm1(e1) > norm1(e2) {
        e2 = det / e1;
    } else if norm1(e2) > 0.0 {
        e1 = det / e2;
    }
    if (e1 - d).norm() < (e2 - d).norm() {
        e1 * scale
    } else {
        e2 * scale
    }
}
