use alloc::vec::Vec;

use super::{eigh, CMatrix};
use crate::{Error, Result, C64};

/// Tolerance on `|Tr ρ − 1|`.
pub const TRACE_TOL: f64 = 1e-10;
/// Largest accepted `max |ρ − ρ†|` before symmetrization.
pub const HERMITICITY_TOL: f64 = 1e-9;
/// Most negative eigenvalue accepted as roundoff.
pub const NEGATIVITY_FLOOR: f64 = -1e-8;
/// Eigenvalues below this contribute nothing to an entropy.
pub const ENTROPY_FLOOR: f64 = 1e-14;
/// Largest magnitude allowed outside the X pattern.
pub const XSTATE_TOL: f64 = 1e-9;

/// A one- or two-qubit density matrix.
///
/// Construction symmetrizes the input to `(ρ + ρ†)/2` and records the defect
/// that was removed, then checks unit trace and positivity.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
    hermiticity_defect: f64,
    min_eigenvalue: f64,
}

/// Which qubit of a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    /// First tensor factor.
    A,
    /// Second tensor factor.
    B,
}

impl DensityMatrix {
    /// Validate and symmetrize a 2x2 or 4x4 matrix.
    pub fn new(mat: CMatrix) -> Result<Self> {
        let (symmetric, defect) = symmetrize(mat)?;
        let (vals, _) = eigh(&symmetric)?;
        Self::checked(symmetric, defect, vals[0])
    }

    /// Like [`DensityMatrix::new`], but eigenvalues in `[-1e-8, 0)` are
    /// clamped to zero and the trace renormalized. Used on evolved states,
    /// where roundoff can push a zero eigenvalue slightly negative. The
    /// recorded minimum eigenvalue is the one before clamping.
    pub fn clamped(mat: CMatrix) -> Result<Self> {
        let (symmetric, defect) = symmetrize(mat)?;
        let (vals, vecs) = eigh(&symmetric)?;
        if vals[0] < NEGATIVITY_FLOOR {
            return Err(Error::NotDensity { what: "negative eigenvalue", value: vals[0] });
        }
        if vals[0] >= 0.0 {
            return Self::checked(symmetric, defect, vals[0]);
        }
        let kept: Vec<f64> = vals.iter().map(|&l| l.max(0.0)).collect();
        let total: f64 = kept.iter().sum();
        let trace = symmetric.trace().re;
        let rescaled: Vec<f64> = kept.iter().map(|l| l * trace / total).collect();
        let rebuilt = (&(&vecs * &CMatrix::from_real_diag(&rescaled)) * &vecs.adjoint()).hermitian_part();
        let mut out = Self::checked(rebuilt, defect, 0.0)?;
        out.min_eigenvalue = vals[0];
        Ok(out)
    }

    /// `|ψ⟩⟨ψ|` for a normalized copy of `psi` (length 2 or 4).
    pub fn from_pure(psi: &[C64]) -> Result<Self> {
        let norm = libm::sqrt(psi.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Validation("state vector must be nonzero and finite"));
        }
        let unit: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(CMatrix::outer(&unit, &unit))
    }

    /// `I/d`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(CMatrix::identity(dim).scale_re(1.0 / dim as f64))
    }

    fn checked(mat: CMatrix, hermiticity_defect: f64, min_eigenvalue: f64) -> Result<Self> {
        let tr = mat.trace();
        let terr = (tr - C64::new(1.0, 0.0)).norm();
        if !(terr <= TRACE_TOL) {
            return Err(Error::NotDensity { what: "trace differs from one", value: terr });
        }
        if !(min_eigenvalue >= NEGATIVITY_FLOOR) {
            return Err(Error::NotDensity { what: "negative eigenvalue", value: min_eigenvalue });
        }
        Ok(Self { mat, hermiticity_defect, min_eigenvalue })
    }

    /// The symmetrized matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// 2 for one qubit, 4 for two.
    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// `max |ρ − ρ†|` of the matrix as it was passed in.
    pub fn hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect
    }

    /// Smallest eigenvalue found at construction (before any clamping).
    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        match eigh(&self.mat) {
            Ok((v, _)) => v,
            Err(_) => unreachable!("stored matrix is Hermitian"),
        }
    }
}

fn symmetrize(mat: CMatrix) -> Result<(CMatrix, f64)> {
    let (r, c) = mat.shape();
    if r != c || !(r == 2 || r == 4) {
        return Err(Error::Dimension { expected: (4, 4), got: (r, c) });
    }
    if !mat.is_finite() {
        return Err(Error::Validation("density matrix entries must be finite"));
    }
    let defect = mat.hermiticity_defect();
    if !(defect <= HERMITICITY_TOL) {
        return Err(Error::NotHermitian(defect));
    }
    Ok((mat.hermitian_part(), defect))
}

/// Reduced state of one qubit of a two-qubit state.
///
/// Basis index of `|a b⟩` is `2a + b`.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(Error::Dimension { expected: (4, 4), got: rho.matrix().shape() });
    }
    let m = rho.matrix();
    let reduced = match keep {
        Subsystem::A => CMatrix::from_fn(2, 2, |a, a2| (0..2).map(|b| m[(2 * a + b, 2 * a2 + b)]).sum()),
        Subsystem::B => CMatrix::from_fn(2, 2, |b, b2| (0..2).map(|a| m[(2 * a + b, 2 * a + b2)]).sum()),
    };
    let vals = hermitian_2x2_eigenvalues(&reduced);
    let (sym, defect) = symmetrize(reduced)?;
    DensityMatrix::checked(sym, defect, vals[0])
}

/// Ascending eigenvalues of a 2x2 Hermitian matrix in closed form.
pub fn hermitian_2x2_eigenvalues(m: &CMatrix) -> [f64; 2] {
    let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
    let b = m[(0, 1)];
    let half_tr = 0.5 * (a + d);
    let r = libm::hypot(0.5 * (a - d), b.norm());
    [half_tr - r, half_tr + r]
}

/// Shannon entropy in bits of a list of probabilities; entries below
/// [`ENTROPY_FLOOR`] count as zero.
pub fn shannon_bits(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p >= ENTROPY_FLOOR).map(|&p| -p * libm::log2(p)).sum()
}

/// Von Neumann entropy `−Tr ρ log₂ ρ` in bits.
pub fn vn_entropy(rho: &DensityMatrix) -> f64 {
    if rho.dim() == 2 {
        shannon_bits(&hermitian_2x2_eigenvalues(rho.matrix()))
    } else {
        shannon_bits(&rho.eigenvalues())
    }
}

/// Entries of a two-qubit X-state,
///
/// ```text
/// | u 0  0 0 |
/// | 0 x  z 0 |
/// | 0 z* y 0 |
/// | 0 0  0 v |
/// ```
/// in the basis `|00⟩, |01⟩, |10⟩, |11⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateEntries {
    /// `⟨00|ρ|00⟩`.
    pub u: f64,
    /// `⟨01|ρ|01⟩`.
    pub x: f64,
    /// `⟨10|ρ|10⟩`.
    pub y: f64,
    /// `⟨11|ρ|11⟩`.
    pub v: f64,
    /// `⟨01|ρ|10⟩`.
    pub z: C64,
}

impl XStateEntries {
    /// Validated entries: populations sum to one, are nonnegative and
    /// `|z|² ≤ xy` (all within 1e-10).
    pub fn new(u: f64, x: f64, y: f64, v: f64, z: C64) -> Result<Self> {
        let e = Self { u, x, y, v, z };
        e.validate()?;
        Ok(e)
    }

    /// Check the invariants of an entry set built field by field.
    pub fn validate(&self) -> Result<()> {
        let all = [self.u, self.x, self.y, self.v, self.z.re, self.z.im];
        if !all.iter().all(|a| a.is_finite()) {
            return Err(Error::Validation("X-state entries must be finite"));
        }
        let sum = self.u + self.x + self.y + self.v;
        if !((sum - 1.0).abs() <= 1e-10) {
            return Err(Error::NotDensity { what: "X-state populations do not sum to one", value: sum - 1.0 });
        }
        let min = self.u.min(self.x).min(self.y).min(self.v);
        if min < -1e-10 {
            return Err(Error::NotDensity { what: "negative X-state population", value: min });
        }
        let excess = self.z.norm_sqr() - self.x * self.y;
        if excess > 1e-10 {
            return Err(Error::NotDensity { what: "coherence exceeds inner-block positivity", value: excess });
        }
        Ok(())
    }

    /// Simultaneous `u ↔ v`, `x ↔ y` relabeling (flip both qubits).
    pub fn flipped(&self) -> Self {
        Self { u: self.v, x: self.y, y: self.x, v: self.u, z: self.z }
    }

    /// The 4x4 matrix.
    pub fn to_matrix(&self) -> CMatrix {
        let mut m = CMatrix::from_real_diag(&[self.u, self.x, self.y, self.v]);
        m[(1, 2)] = self.z;
        m[(2, 1)] = self.z.conj();
        m
    }

    /// Reduced state of qubit B, `diag(u + y, x + v)`.
    pub fn reduced_b(&self) -> [f64; 2] {
        [self.u + self.y, self.x + self.v]
    }

    /// Eigenvalues of the full state: `u`, `v` and those of the inner block.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mean = 0.5 * (self.x + self.y);
        let r = libm::hypot(0.5 * (self.x - self.y), self.z.norm());
        [self.u, self.v, mean - r, mean + r]
    }
}

fn in_x_pattern(r: usize, c: usize) -> bool {
    r == c || (r, c) == (1, 2) || (r, c) == (2, 1)
}

/// Read the X-state entries off a two-qubit state.
///
/// Fails with [`Error::NotXState`] naming the largest entry outside the
/// pattern when it exceeds [`XSTATE_TOL`]. The `|00⟩⟨11|` corner is outside
/// the pattern.
pub fn as_xstate(rho: &DensityMatrix) -> Result<XStateEntries> {
    if rho.dim() != 4 {
        return Err(Error::Dimension { expected: (4, 4), got: rho.matrix().shape() });
    }
    let m = rho.matrix();
    let mut worst = (0, 0, 0.0f64);
    for r in 0..4 {
        for c in 0..4 {
            if !in_x_pattern(r, c) && m[(r, c)].norm() > worst.2 {
                worst = (r, c, m[(r, c)].norm());
            }
        }
    }
    if worst.2 > XSTATE_TOL {
        return Err(Error::NotXState { row: worst.0, col: worst.1, magnitude: worst.2 });
    }
    Ok(XStateEntries { u: m[(0, 0)].re, x: m[(1, 1)].re, y: m[(2, 2)].re, v: m[(3, 3)].re, z: m[(1, 2)] })
}

/// Largest magnitude outside the X pattern.
pub fn off_x_pattern(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..4 {
        for c in 0..4 {
            if !in_x_pattern(r, c) {
                worst = worst.max(m[(r, c)].norm());
            }
        }
    }
    worst
}
