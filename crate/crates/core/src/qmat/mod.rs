//! Small dense complex linear algebra and two-qubit density-matrix utilities.
//!
//! Storage is row-major everywhere: entry `(r, c)` of an `n x m` matrix lives
//! at index `r * m + c`. The column-stacking vectorization in
//! [`crate::liouville`] is defined against this layout.

mod cmatrix;
mod density;
mod eig;
mod eigh;
mod expm;
mod lu;

pub use cmatrix::*;
pub use density::*;
pub use eig::{eig, Eigen};
pub use eigh::eigh;
pub use expm::expm;
pub use lu::Lu;

use crate::C64;

/// Pauli and ladder operators for one qubit.
///
/// Basis order is `|0⟩, |1⟩` with `σ^z|0⟩ = −|0⟩` and `σ^z|1⟩ = +|1⟩`, so `|0⟩`
/// is the ground state. `σ^+ = |1⟩⟨0|` raises, `σ^- = |0⟩⟨1|` lowers and
/// `σ^y = i(σ^- − σ^+)` keeps `σ^x σ^y = i σ^z`.
pub mod pauli {
    use super::*;

    const O: C64 = C64::new(0.0, 0.0);
    const ONE: C64 = C64::new(1.0, 0.0);
    const I: C64 = C64::new(0.0, 1.0);

    /// 2x2 identity.
    pub fn id() -> CMatrix {
        CMatrix::identity(2)
    }
    /// `σ^x`.
    pub fn x() -> CMatrix {
        CMatrix::from_rows(2, 2, &[O, ONE, ONE, O])
    }
    /// `σ^y`.
    pub fn y() -> CMatrix {
        CMatrix::from_rows(2, 2, &[O, I, -I, O])
    }
    /// `σ^z`.
    pub fn z() -> CMatrix {
        CMatrix::from_rows(2, 2, &[-ONE, O, O, ONE])
    }
    /// Lowering operator `σ^- = |0⟩⟨1|`.
    pub fn lower() -> CMatrix {
        CMatrix::from_rows(2, 2, &[O, ONE, O, O])
    }
    /// Raising operator `σ^+ = |1⟩⟨0|`.
    pub fn raise() -> CMatrix {
        CMatrix::from_rows(2, 2, &[O, O, ONE, O])
    }
}

#[cfg(test)]
mod tests {
    use super::pauli::*;
    use super::*;

    #[test]
    fn pauli_algebra() {
        let xy = &x() * &y();
        assert!(xy.max_abs_diff(&z().scale(C64::i())) < 1e-15);
        assert!((&x() + &y().scale(C64::i())).scale(C64::new(0.5, 0.0)).max_abs_diff(&raise()) < 1e-15);
        assert!(lower().adjoint().max_abs_diff(&raise()) < 1e-15);
        // σ^- |1⟩ = |0⟩
        let one = CMatrix::from_rows(2, 1, &[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        let out = &lower() * &one;
        assert_eq!(out[(0, 0)], C64::new(1.0, 0.0));
    }
}
