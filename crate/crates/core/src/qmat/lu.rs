use alloc::vec::Vec;

use super::CMatrix;
use crate::{Error, Result, C64};

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Factor a square matrix. Fails with [`Error::Singular`] when a pivot
    /// falls below `n · ε · max |A|`.
    pub fn new(a: &CMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension { expected: (a.rows(), a.rows()), got: a.shape() });
        }
        let n = a.rows();
        let tiny = n as f64 * f64::EPSILON * a.max_abs();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
                .unwrap_or(k);
            if !(lu[(pivot, k)].norm() > tiny) {
                return Err(Error::Singular);
            }
            lu.swap_rows(k, pivot);
            perm.swap(k, pivot);
            let d = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                if f.re == 0.0 && f.im == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.rows();
        assert_eq!(b.len(), n, "right-hand side length mismatch");
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    /// `A^{-1}`.
    pub fn inverse(&self) -> CMatrix {
        let n = self.lu.rows();
        let mut inv = CMatrix::zeros(n, n);
        let mut e = alloc::vec![C64::new(0.0, 0.0); n];
        for c in 0..n {
            e.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            e[c] = C64::new(1.0, 0.0);
            for (r, v) in self.solve(&e).into_iter().enumerate() {
                inv[(r, c)] = v;
            }
        }
        inv
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let a = CMatrix::from_fn(6, 6, |r, c| {
            C64::new(((r * 5 + c * 11) % 7) as f64 - 3.0, ((r + 2 * c) % 3) as f64 * 0.5) + if r == c { C64::new(4.0, 0.0) } else { C64::new(0.0, 0.0) }
        });
        let inv = Lu::new(&a).unwrap().inverse();
        assert!((&a * &inv).max_abs_diff(&CMatrix::identity(6)) < 1e-12);
    }

    #[test]
    fn needs_pivoting() {
        let z = C64::new(0.0, 0.0);
        let o = C64::new(1.0, 0.0);
        let a = CMatrix::from_rows(2, 2, &[z, o, o, z]);
        let x = Lu::new(&a).unwrap().solve(&[C64::new(2.0, 0.0), C64::new(3.0, 0.0)]);
        assert_eq!(x, [C64::new(3.0, 0.0), C64::new(2.0, 0.0)]);
    }

    #[test]
    fn singular() {
        let o = C64::new(1.0, 0.0);
        let a = CMatrix::from_rows(2, 2, &[o, o, o, o]);
        assert_eq!(Lu::new(&a).unwrap_err(), Error::Singular);
    }
}
