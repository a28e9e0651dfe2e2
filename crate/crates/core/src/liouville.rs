//! Lindblad generator as a 16x16 superoperator on column-stacked states.
//!
//! `vec(ρ)` stacks the columns of `ρ`, so with row-major [`CMatrix`] storage
//! `vec(ρ)[4c + r] = ρ[r][c]`. Then `vec(Aρ) = (I ⊗ A) vec(ρ)` and
//! `vec(ρA) = (Aᵀ ⊗ I) vec(ρ)`.
//!
//! Each qubit `i` sees the thermal dissipator
//!
//! ```text
//! (n̄+1)γ (2σ⁻ρσ⁺ − ρσ⁺σ⁻ − σ⁺σ⁻ρ) + n̄γ (2σ⁺ρσ⁻ − ρσ⁻σ⁺ − σ⁻σ⁺ρ)
//! ```
//!
//! Three ways to evolve: [`evolve_diag`] (eigenmode expansion),
//! [`evolve_expm`] (matrix exponential per time point) and [`evolve_rk4`]
//! (fixed-step integration of the matrix equation, independent of the
//! superoperator).

use alloc::vec::Vec;

use crate::qmat::{eig, eigh, expm, kron, pauli, CMatrix, DensityMatrix, Lu};
use crate::{Error, Result, C64};

/// Eigenbases with a condition estimate at or above this are not used.
pub const MAX_CONDITION: f64 = 1e8;
/// Tolerance for the spectral and trace-preservation checks.
pub const SPECTRAL_TOL: f64 = 1e-10;

/// Reservoir parameters, shared by both qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    /// Mean thermal occupation `n̄ ≥ 0`.
    pub nbar: f64,
    /// Spontaneous-emission rate `γ > 0`.
    pub gamma: f64,
}

impl BathParams {
    /// Validated parameters.
    pub fn new(nbar: f64, gamma: f64) -> Result<Self> {
        let b = Self { nbar, gamma };
        b.validate()?;
        Ok(b)
    }

    /// Check `n̄ ≥ 0`, `γ > 0`, both finite.
    pub fn validate(&self) -> Result<()> {
        if !(self.nbar >= 0.0 && self.nbar.is_finite()) {
            return Err(Error::Validation("mean occupation must be nonnegative and finite"));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::Validation("emission rate must be positive and finite"));
        }
        Ok(())
    }

    /// Single-qubit population relaxation rate `2γ(2n̄ + 1)`.
    pub fn relaxation_rate(&self) -> f64 {
        2.0 * self.gamma * (2.0 * self.nbar + 1.0)
    }
}

impl Default for BathParams {
    fn default() -> Self {
        Self { nbar: 1.0, gamma: 0.1 }
    }
}

/// Column-stack a square matrix.
pub fn vec(rho: &CMatrix) -> Vec<C64> {
    let (r, c) = rho.shape();
    (0..c).flat_map(|col| (0..r).map(move |row| (row, col))).map(|(row, col)| rho[(row, col)]).collect()
}

/// Inverse of [`vec`]. Panics unless the length is a perfect square.
pub fn unvec(w: &[C64]) -> CMatrix {
    let n = libm::round(libm::sqrt(w.len() as f64)) as usize;
    assert_eq!(n * n, w.len(), "vectorized matrix length must be a square");
    CMatrix::from_fn(n, n, |r, c| w[c * n + r])
}

/// `I ⊗ A`: left multiplication by `A` on column-stacked matrices.
pub fn spre(a: &CMatrix) -> CMatrix {
    kron(&CMatrix::identity(a.rows()), a)
}

/// `Aᵀ ⊗ I`: right multiplication by `A` on column-stacked matrices.
pub fn spost(a: &CMatrix) -> CMatrix {
    kron(&a.transpose(), &CMatrix::identity(a.rows()))
}

/// A jump operator `L` with its rate `κ`, contributing
/// `κ (2 L ρ L† − L†L ρ − ρ L†L)`.
#[derive(Debug, Clone)]
pub struct Jump {
    /// Rate `κ`.
    pub rate: f64,
    /// Operator `L`.
    pub op: CMatrix,
}

/// The four thermal jumps: emission `σ_i⁻` at `(n̄+1)γ` and absorption
/// `σ_i⁺` at `n̄γ` for each qubit `i ∈ {A, B}`.
pub fn thermal_jumps(bath: &BathParams) -> [Jump; 4] {
    let id = pauli::id();
    let (lo, hi) = (pauli::lower(), pauli::raise());
    let emit = (bath.nbar + 1.0) * bath.gamma;
    let absorb = bath.nbar * bath.gamma;
    [
        Jump { rate: emit, op: kron(&lo, &id) },
        Jump { rate: absorb, op: kron(&hi, &id) },
        Jump { rate: emit, op: kron(&id, &lo) },
        Jump { rate: absorb, op: kron(&id, &hi) },
    ]
}

/// Superoperator of `ρ ↦ −i[H, ρ] + Σ κ (2LρL† − L†Lρ − ρL†L)`.
pub fn lindblad_generator(h: &CMatrix, jumps: &[Jump]) -> CMatrix {
    let mut gen = (&spre(h) - &spost(h)).scale(C64::new(0.0, -1.0));
    for jump in jumps {
        let ld = jump.op.adjoint();
        let ldl = &ld * &jump.op;
        let sandwich = (&spre(&jump.op) * &spost(&ld)).scale_re(2.0);
        let term = &(&sandwich - &spre(&ldl)) - &spost(&ldl);
        gen = &gen + &term.scale_re(jump.rate);
    }
    gen
}

/// Right-hand side of the master equation evaluated with 4x4 products.
pub fn master_rhs(h: &CMatrix, jumps: &[Jump], rho: &CMatrix) -> CMatrix {
    let mut out = h.commutator(rho).scale(C64::new(0.0, -1.0));
    for jump in jumps {
        let ld = jump.op.adjoint();
        let ldl = &ld * &jump.op;
        let sandwich = (&(&jump.op * rho) * &ld).scale_re(2.0);
        let term = &(&sandwich - &(&ldl * rho)) - &(rho * &ldl);
        out = &out + &term.scale_re(jump.rate);
    }
    out
}

/// The Lindblad superoperator with its spectral data.
#[derive(Debug, Clone)]
pub struct Superoperator {
    gen: CMatrix,
    spectrum: Vec<C64>,
    modes: CMatrix,
    modes_inv: Option<CMatrix>,
    condition: f64,
}

/// Build and diagonalize the generator for Hamiltonian `h` and `bath`.
///
/// Fails if the generator is not trace preserving, has an eigenvalue with
/// real part above 1e-10, or has no zero mode. A badly conditioned
/// eigenbasis is not an error here; it only disables [`evolve_diag`].
pub fn build_liouvillian(h: &CMatrix, bath: &BathParams) -> Result<Superoperator> {
    if h.shape() != (4, 4) {
        return Err(Error::Dimension { expected: (4, 4), got: h.shape() });
    }
    let defect = h.hermiticity_defect();
    if !(defect <= 1e-10 * h.max_abs().max(1.0)) {
        return Err(Error::NotHermitian(defect));
    }
    bath.validate()?;
    Superoperator::new(lindblad_generator(h, &thermal_jumps(bath)))
}

impl Superoperator {
    /// Diagonalize an arbitrary trace-preserving generator on two qubits.
    pub fn new(gen: CMatrix) -> Result<Self> {
        if gen.shape() != (16, 16) {
            return Err(Error::Dimension { expected: (16, 16), got: gen.shape() });
        }
        let trace_defect = trace_defect(&gen);
        if !(trace_defect <= SPECTRAL_TOL) {
            return Err(Error::Invariant { what: "generator does not preserve trace", value: trace_defect });
        }
        let e = eig(&gen).map_err(|_| Error::Invariant { what: "generator eigensolver failed", value: f64::NAN })?;
        let max_re = e.values.iter().map(|s| s.re).fold(f64::NEG_INFINITY, f64::max);
        if !(max_re <= SPECTRAL_TOL) {
            return Err(Error::Invariant { what: "generator has a growing mode", value: max_re });
        }
        let min_abs = e.values.iter().map(|s| s.norm()).fold(f64::INFINITY, f64::min);
        if !(min_abs <= SPECTRAL_TOL) {
            return Err(Error::Invariant { what: "generator has no steady state", value: min_abs });
        }
        let (modes_inv, condition) = match Lu::new(&e.vectors) {
            Ok(lu) => {
                let inv = lu.inverse();
                let cond = e.vectors.norm_1() * inv.norm_1();
                if cond < MAX_CONDITION {
                    (Some(inv), cond)
                } else {
                    (None, cond)
                }
            }
            Err(_) => (None, f64::INFINITY),
        };
        Ok(Self { gen, spectrum: e.values, modes: e.vectors, modes_inv, condition })
    }

    /// The 16x16 generator.
    pub fn generator(&self) -> &CMatrix {
        &self.gen
    }

    /// Eigenvalues `s_j`.
    pub fn spectrum(&self) -> &[C64] {
        &self.spectrum
    }

    /// Unit-norm right eigenvectors as columns (`U`).
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.modes
    }

    /// Whether the eigenbasis is usable for [`evolve_diag`].
    pub fn diagonalizable(&self) -> bool {
        self.modes_inv.is_some()
    }

    /// `‖U‖₁ ‖U⁻¹‖₁` with unit-norm eigenvector columns.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// Number of eigenvalues with `|s_j| ≤ tol`.
    pub fn zero_modes(&self, tol: f64) -> usize {
        self.spectrum.iter().filter(|s| s.norm() <= tol).count()
    }

    /// Largest real part in the spectrum.
    pub fn max_real_part(&self) -> f64 {
        self.spectrum.iter().map(|s| s.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max_k |(vec(I)† 𝓛)_k|`.
    pub fn trace_defect(&self) -> f64 {
        trace_defect(&self.gen)
    }

    /// Mode table `a_ij = U_ij (U⁻¹ vec(ρ0))_j`, so that
    /// `vec(ρ(t))_i = Σ_j a_ij e^{s_j t}`.
    pub fn modal_coefficients(&self, rho0: &DensityMatrix) -> Result<CMatrix> {
        let inv = self.modes_inv.as_ref().ok_or(Error::FallbackRequired(self.condition))?;
        let weights = inv.matvec(&vec(rho0.matrix()));
        Ok(CMatrix::from_fn(16, 16, |i, j| self.modes[(i, j)] * weights[j]))
    }

    /// Steady state from `𝓛 w = 0` with the first equation replaced by
    /// `Tr ρ = 1`, solved by LU; independent of the eigendecomposition.
    pub fn steady_state(&self) -> Result<DensityMatrix> {
        let mut a = self.gen.clone();
        for c in 0..16 {
            a[(0, c)] = if c % 5 == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
        }
        let mut rhs = alloc::vec![C64::new(0.0, 0.0); 16];
        rhs[0] = C64::new(1.0, 0.0);
        let w = Lu::new(&a)?.solve(&rhs);
        DensityMatrix::clamped(unvec(&w))
    }
}

fn trace_defect(gen: &CMatrix) -> f64 {
    let n = libm::round(libm::sqrt(gen.rows() as f64)) as usize;
    (0..gen.cols())
        .map(|k| (0..n).map(|d| gen[(d * n + d, k)]).sum::<C64>().norm())
        .fold(0.0, f64::max)
}

/// One sample of an evolved state.
#[derive(Debug, Clone)]
pub struct TrajectoryPoint {
    /// Time.
    pub t: f64,
    /// The state after symmetrization and eigenvalue clamping.
    pub state: DensityMatrix,
    /// `|Tr ρ − 1|` of the raw evolved matrix.
    pub trace_error: f64,
    /// `max |ρ − ρ†|` of the raw evolved matrix.
    pub hermiticity_defect: f64,
    /// Smallest eigenvalue of the raw evolved matrix (after symmetrization).
    pub min_eigenvalue: f64,
    /// The raw evolved matrix.
    pub raw: CMatrix,
}

/// Evolved states at the requested times.
pub type Trajectory = Vec<TrajectoryPoint>;

fn check_times(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::Validation("times must be finite and nonnegative"));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Validation("times must be ascending"));
    }
    Ok(())
}

fn to_invariant(err: Error) -> Error {
    match err {
        Error::NotDensity { what, value } => Error::Invariant { what, value },
        Error::NotHermitian(value) => Error::Invariant { what: "evolved state is not Hermitian", value },
        other => other,
    }
}

/// Wrap a raw evolved matrix into a validated trajectory point.
pub fn trajectory_point(t: f64, raw: CMatrix) -> Result<TrajectoryPoint> {
    let trace_error = (raw.trace() - C64::new(1.0, 0.0)).norm();
    let hermiticity_defect = raw.hermiticity_defect();
    let state = DensityMatrix::clamped(raw.clone()).map_err(to_invariant)?;
    Ok(TrajectoryPoint { t, min_eigenvalue: state.min_eigenvalue(), state, trace_error, hermiticity_defect, raw })
}

/// Evolve by eigenmode expansion, `vec(ρ(t)) = U e^{st} U⁻¹ vec(ρ0)`.
///
/// Fails with [`Error::FallbackRequired`] when the eigenbasis is ill
/// conditioned.
pub fn evolve_diag(l: &Superoperator, rho0: &DensityMatrix, times: &[f64]) -> Result<Trajectory> {
    check_times(times)?;
    let a = l.modal_coefficients(rho0)?;
    times
        .iter()
        .map(|&t| {
            let growth: Vec<C64> = l.spectrum.iter().map(|s| (s * t).exp()).collect();
            let w: Vec<C64> = (0..16).map(|i| (0..16).map(|j| a[(i, j)] * growth[j]).sum()).collect();
            trajectory_point(t, unvec(&w))
        })
        .collect()
}

/// Evolve with a scaled-and-squared matrix exponential at every time point.
pub fn evolve_expm(l: &Superoperator, rho0: &DensityMatrix, times: &[f64]) -> Result<Trajectory> {
    check_times(times)?;
    let w0 = vec(rho0.matrix());
    times.iter().map(|&t| trajectory_point(t, unvec(&expm(&l.gen.scale_re(t)).matvec(&w0)))).collect()
}

/// [`evolve_diag`], falling back to [`evolve_expm`] when the eigenbasis is
/// unusable.
pub fn evolve(l: &Superoperator, rho0: &DensityMatrix, times: &[f64]) -> Result<Trajectory> {
    match evolve_diag(l, rho0, times) {
        Err(Error::FallbackRequired(_)) => evolve_expm(l, rho0, times),
        other => other,
    }
}

/// Largest step accepted by [`evolve_rk4`]: `0.01 / (γ(2n̄+1) + ‖H‖₂)`.
pub fn rk4_max_step(h: &CMatrix, bath: &BathParams) -> Result<f64> {
    let (vals, _) = eigh(h)?;
    let norm = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    Ok(0.01 / (bath.gamma * (2.0 * bath.nbar + 1.0) + norm))
}

/// Classical fixed-step fourth-order Runge–Kutta on the 4x4 master equation.
///
/// Each interval between requested times is split into equal steps no
/// longer than `dt`; the state at `t = 0` is `rho0`.
pub fn evolve_rk4(h: &CMatrix, bath: &BathParams, rho0: &DensityMatrix, times: &[f64], dt: f64) -> Result<Trajectory> {
    bath.validate()?;
    check_times(times)?;
    let max_dt = rk4_max_step(h, bath)?;
    if !(dt > 0.0 && dt <= max_dt * (1.0 + 1e-12)) {
        return Err(Error::Validation("RK4 step exceeds 0.01/(γ(2n̄+1) + ‖H‖)"));
    }
    let jumps = thermal_jumps(bath);
    let f = |rho: &CMatrix| master_rhs(h, &jumps, rho);
    let mut rho = rho0.matrix().clone();
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let span = t - now;
        if span > 0.0 {
            let steps = libm::ceil(span / dt * (1.0 - 1e-12)).max(1.0) as usize;
            let h_step = span / steps as f64;
            for _ in 0..steps {
                let k1 = f(&rho);
                let k2 = f(&(&rho + &k1.scale_re(0.5 * h_step)));
                let k3 = f(&(&rho + &k2.scale_re(0.5 * h_step)));
                let k4 = f(&(&rho + &k3.scale_re(h_step)));
                let incr = &(&k1 + &k2.scale_re(2.0)) + &(&k3.scale_re(2.0) + &k4);
                rho = &rho + &incr.scale_re(h_step / 6.0);
            }
            now = t;
        }
        out.push(trajectory_point(t, rho.clone())?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinmodel::{build_hamiltonian, ground_state, ModelParams};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn vec_layout() {
        let w = vec(&CMatrix::identity(4));
        let ones: Vec<usize> = (0..16).filter(|&k| w[k] == c(1.0)).collect();
        assert_eq!(ones, [0, 5, 10, 15]);
        let mut p00 = CMatrix::zeros(4, 4);
        p00[(0, 0)] = c(1.0);
        let w = vec(&p00);
        assert_eq!(w[0], c(1.0));
        assert!(w[1..].iter().all(|z| *z == c(0.0)));
        // column stacking: entry (1, 0) lands at index 1, entry (0, 1) at index 4
        let m = CMatrix::from_fn(4, 4, |r, cc| c((10 * r + cc) as f64));
        let w = vec(&m);
        assert_eq!(w[1], c(10.0));
        assert_eq!(w[4], c(1.0));
        assert_eq!(unvec(&w), m);
    }

    #[test]
    fn spre_identity() {
        assert_eq!(spre(&CMatrix::identity(4)), CMatrix::identity(16));
        assert_eq!(spost(&CMatrix::identity(4)), CMatrix::identity(16));
    }

    #[test]
    fn default_generator_invariants() {
        let h = build_hamiltonian(&ModelParams::default()).unwrap();
        let l = build_liouvillian(&h, &BathParams::default()).unwrap();
        assert!(l.max_real_part() <= 1e-10);
        assert_eq!(l.zero_modes(1e-10), 1);
        assert!(l.trace_defect() <= 1e-14);
        assert!(l.diagonalizable());
    }

    #[test]
    fn zero_time_returns_initial_state() {
        let p = ModelParams::default();
        let h = build_hamiltonian(&p).unwrap();
        let l = build_liouvillian(&h, &BathParams::default()).unwrap();
        let rho0 = DensityMatrix::from_pure(&ground_state(&p).unwrap()).unwrap();
        let tr = evolve_diag(&l, &rho0, &[0.0]).unwrap();
        assert_eq!(tr.len(), 1);
        assert!(tr[0].raw.max_abs_diff(rho0.matrix()) < 1e-10);
        let tr = evolve_rk4(&h, &BathParams::default(), &rho0, &[0.0], 1e-3).unwrap();
        assert_eq!(tr[0].raw, *rho0.matrix());
    }

    #[test]
    fn rk4_rejects_large_steps() {
        let h = build_hamiltonian(&ModelParams::default()).unwrap();
        let bath = BathParams::default();
        let rho0 = DensityMatrix::maximally_mixed(4).unwrap();
        let max = rk4_max_step(&h, &bath).unwrap();
        assert!(evolve_rk4(&h, &bath, &rho0, &[1.0], max * 1.01).is_err());
        assert!(evolve_rk4(&h, &bath, &rho0, &[1.0], max).is_ok());
        assert!(evolve_rk4(&h, &bath, &rho0, &[1.0], 0.0).is_err());
    }

    #[test]
    fn rejects_bad_times_and_params() {
        let h = build_hamiltonian(&ModelParams::default()).unwrap();
        let l = build_liouvillian(&h, &BathParams::default()).unwrap();
        let rho0 = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(evolve_diag(&l, &rho0, &[1.0, 0.5]).is_err());
        assert!(evolve_diag(&l, &rho0, &[-1.0]).is_err());
        assert!(BathParams::new(-0.1, 0.1).is_err());
        assert!(BathParams::new(1.0, 0.0).is_err());
        assert!(build_liouvillian(&CMatrix::identity(2), &BathParams::default()).is_err());
    }

    #[test]
    fn non_trace_preserving_generator_is_rejected() {
        assert!(matches!(Superoperator::new(CMatrix::identity(16).scale_re(-1.0)), Err(Error::Invariant { .. })));
    }
}
