//! Two-qubit Heisenberg model with a Dzyaloshinskii–Moriya term along `z`:
//!
//! ```text
//! H = (ω/2)(σ_A^z + σ_B^z) + (J/2)[σ_A·σ_B + D (σ_A × σ_B)_z]
//! ```
//!
//! with `(σ_A × σ_B)_z = σ_A^x σ_B^y − σ_A^y σ_B^x`. On the `{|01⟩, |10⟩}`
//! block this gives `⟨10|H|01⟩ = J η` with `η = 1 + iD`.

use crate::qmat::{eigh, kron, pauli, CMatrix, DensityMatrix};
use crate::{Error, Result, C64};

/// Two lowest levels closer than this count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Hamiltonian parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Exchange coupling `J ≥ 0` (antiferromagnetic; `0` is the
    /// noninteracting limit).
    pub j: f64,
    /// Dzyaloshinskii–Moriya strength `D` along `z`.
    pub d: f64,
    /// Local field `ω`.
    pub omega: f64,
}

impl ModelParams {
    /// Validated parameters.
    pub fn new(j: f64, d: f64, omega: f64) -> Result<Self> {
        let p = Self { j, d, omega };
        p.validate()?;
        Ok(p)
    }

    /// Check `J ≥ 0` and finiteness.
    pub fn validate(&self) -> Result<()> {
        if !(self.j.is_finite() && self.d.is_finite() && self.omega.is_finite()) {
            return Err(Error::Validation("model parameters must be finite"));
        }
        if self.j < 0.0 {
            return Err(Error::Validation("exchange coupling J must be nonnegative"));
        }
        Ok(())
    }

    /// `η = 1 + iD`.
    pub fn eta(&self) -> C64 {
        C64::new(1.0, self.d)
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self { j: 1.0, d: 0.2, omega: 0.1 }
    }
}

/// Exact spectrum of the Hamiltonian.
#[derive(Debug, Clone)]
pub struct SpectrumRecord {
    /// Eigenvalues in ascending order.
    pub energies: [f64; 4],
    /// Column `k` is the eigenvector of `energies[k]`.
    pub states: CMatrix,
    /// `η = 1 + iD`.
    pub eta: C64,
}

impl SpectrumRecord {
    /// Eigenvector `k` as an array.
    pub fn state(&self, k: usize) -> [C64; 4] {
        let col = self.states.column(k);
        [col[0], col[1], col[2], col[3]]
    }
}

/// The 4x4 Hamiltonian in the basis `|00⟩, |01⟩, |10⟩, |11⟩`.
pub fn build_hamiltonian(p: &ModelParams) -> Result<CMatrix> {
    p.validate()?;
    let (x, y, z, id) = (pauli::x(), pauli::y(), pauli::z(), pauli::id());
    let field = &kron(&z, &id) + &kron(&id, &z);
    let exchange = &(&kron(&x, &x) + &kron(&y, &y)) + &kron(&z, &z);
    let dm = &kron(&x, &y) - &kron(&y, &x);
    let coupling = &exchange + &dm.scale_re(p.d);
    Ok(&field.scale_re(0.5 * p.omega) + &coupling.scale_re(0.5 * p.j))
}

/// Closed-form levels `[J(−½ + |η|), J(−½ − |η|), J/2 − ω, J/2 + ω]`.
pub fn closed_form_levels(p: &ModelParams) -> [f64; 4] {
    let eta = p.eta().norm();
    [p.j * (-0.5 + eta), p.j * (-0.5 - eta), 0.5 * p.j - p.omega, 0.5 * p.j + p.omega]
}

/// Numerical spectrum, cross-checked against [`closed_form_levels`].
///
/// A mismatch above 1e-9 is reported as [`Error::Consistency`].
pub fn exact_spectrum(p: &ModelParams) -> Result<SpectrumRecord> {
    let h = build_hamiltonian(p)?;
    let (vals, states) = eigh(&h)?;
    let mut closed = closed_form_levels(p);
    closed.sort_by(f64::total_cmp);
    let mismatch = vals.iter().zip(&closed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let scale = 1.0f64.max(p.j.abs()).max(p.omega.abs()).max(p.j.abs() * p.eta().norm());
    if !(mismatch <= 1e-9 * scale) {
        return Err(Error::Consistency { what: "numeric spectrum differs from closed form", value: mismatch });
    }
    Ok(SpectrumRecord { energies: [vals[0], vals[1], vals[2], vals[3]], states, eta: p.eta() })
}

/// Normalized ground state.
///
/// The global phase makes `⟨01|ψ⟩` real and positive (or, when that
/// amplitude vanishes, the largest amplitude). Fails with
/// [`Error::DegenerateGround`] if the two lowest levels are within 1e-12.
pub fn ground_state(p: &ModelParams) -> Result<[C64; 4]> {
    let spec = exact_spectrum(p)?;
    let gap = spec.energies[1] - spec.energies[0];
    if gap <= DEGENERACY_TOL {
        return Err(Error::DegenerateGround(gap));
    }
    let psi = spec.state(0);
    let anchor = if psi[1].norm() > 1e-8 {
        psi[1]
    } else {
        psi.iter().copied().fold(C64::new(0.0, 0.0), |best, z| if z.norm() > best.norm() { z } else { best })
    };
    let phase = anchor.conj() / anchor.norm();
    Ok(psi.map(|z| z * phase))
}

/// Gibbs state `e^{−H/T}/Z` (with `k_B = 1`).
pub fn thermal_state(p: &ModelParams, temperature: f64) -> Result<DensityMatrix> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::Validation("temperature must be positive and finite"));
    }
    let spec = exact_spectrum(p)?;
    let e0 = spec.energies[0];
    let weights = spec.energies.map(|e| libm::exp(-(e - e0) / temperature));
    let z: f64 = weights.iter().sum();
    let mut rho = CMatrix::zeros(4, 4);
    for (k, w) in weights.iter().enumerate() {
        let psi = spec.state(k);
        rho = &rho + &CMatrix::outer(&psi, &psi).scale_re(w / z);
    }
    DensityMatrix::new(rho)
}

/// Partition function `Z = Σ_j e^{−ε_j/T}`.
pub fn partition_function(p: &ModelParams, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::Validation("temperature must be positive and finite"));
    }
    Ok(exact_spectrum(p)?.energies.iter().map(|e| libm::exp(-e / temperature)).sum())
}

/// Bose–Einstein occupation `n̄ = 1/(e^{ω_E/T} − 1)` of a reservoir mode.
pub fn nbar_from_temperature(omega_e: f64, temperature: f64) -> Result<f64> {
    if !(omega_e > 0.0 && omega_e.is_finite()) {
        return Err(Error::Validation("reservoir frequency must be positive"));
    }
    if !(temperature >= 0.0 && temperature.is_finite()) {
        return Err(Error::Validation("reservoir temperature must be nonnegative"));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / libm::expm1(omega_e / temperature))
}
