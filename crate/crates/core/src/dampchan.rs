//! Generalized amplitude damping: the closed-form dynamics at `J = 0`.
//!
//! Per qubit, with `q = n̄/(2n̄+1)` the asymptotic excited population,
//!
//! ```text
//! K0 = √(1−q) (|0⟩⟨0| + √(1−p) |1⟩⟨1|)    K1 = √((1−q)p) |0⟩⟨1|
//! K2 = √q (√(1−p) |0⟩⟨0| + |1⟩⟨1|)        K3 = √(qp) |1⟩⟨0|
//! ```
//!
//! and `p(t) = 1 − e^{−2γ(2n̄+1)t}`, which reproduces the population
//! relaxation of the thermal dissipator in [`crate::liouville`].

use alloc::vec::Vec;

use crate::liouville::{trajectory_point, BathParams, Trajectory};
use crate::qmat::{kron, CMatrix, DensityMatrix, XStateEntries};
use crate::{Error, Result, C64};

/// Parameters of one application of the channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    /// Mean occupation `n̄ ≥ 0`.
    pub nbar: f64,
    /// Rate `γ`.
    pub gamma: f64,
    /// Exchange probability `p ∈ [0, 1]`.
    pub p: f64,
}

impl ChannelParams {
    /// Parameters at time `t` for a bath.
    pub fn at_time(bath: &BathParams, t: f64) -> Result<Self> {
        Ok(Self { nbar: bath.nbar, gamma: bath.gamma, p: p_of_t(bath.gamma, bath.nbar, t)? })
    }
}

fn check(nbar: f64, p: f64) -> Result<()> {
    if !(nbar >= 0.0 && nbar.is_finite()) {
        return Err(Error::Validation("mean occupation must be nonnegative and finite"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Validation("exchange probability must lie in [0, 1]"));
    }
    Ok(())
}

/// `p(t) = 1 − e^{−2γ(2n̄+1)t}`.
pub fn p_of_t(gamma: f64, nbar: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Validation("time must be nonnegative"));
    }
    if !(gamma >= 0.0 && gamma.is_finite() && nbar >= 0.0 && nbar.is_finite()) {
        return Err(Error::Validation("rate and occupation must be nonnegative and finite"));
    }
    Ok(-libm::expm1(-2.0 * gamma * (2.0 * nbar + 1.0) * t))
}

/// The four single-qubit Kraus operators.
pub fn kraus_ops(nbar: f64, p: f64) -> Result<[CMatrix; 4]> {
    check(nbar, p)?;
    let q = nbar / (2.0 * nbar + 1.0);
    let keep = libm::sqrt(1.0 - p);
    let r = |x: f64| C64::new(x, 0.0);
    let z = r(0.0);
    let a = libm::sqrt(1.0 - q);
    let b = libm::sqrt(q);
    Ok([
        CMatrix::from_rows(2, 2, &[r(a), z, z, r(a * keep)]),
        CMatrix::from_rows(2, 2, &[z, r(libm::sqrt((1.0 - q) * p)), z, z]),
        CMatrix::from_rows(2, 2, &[r(b * keep), z, z, r(b)]),
        CMatrix::from_rows(2, 2, &[z, z, r(libm::sqrt(q * p)), z]),
    ])
}

/// `Σ_{j,j'} (K_j ⊗ K_j') ρ (K_j ⊗ K_j')†`.
pub fn apply_two_qubit_channel(rho: &DensityMatrix, nbar: f64, p: f64) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(Error::Dimension { expected: (4, 4), got: rho.matrix().shape() });
    }
    DensityMatrix::clamped(apply_raw(rho.matrix(), &kraus_ops(nbar, p)?))
}

fn apply_raw(rho: &CMatrix, kraus: &[CMatrix; 4]) -> CMatrix {
    let mut out = CMatrix::zeros(4, 4);
    for ka in kraus {
        for kb in kraus {
            let k = kron(ka, kb);
            out = &out + &(&(&k * rho) * &k.adjoint());
        }
    }
    out
}

/// Closed-form evolution of `(|01⟩ + |10⟩)/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellClosedForm {
    /// Entries in the `|00⟩, |01⟩, |10⟩, |11⟩` ordering.
    pub entries: XStateEntries,
    /// `θ₁ = √(p²/(2n̄+1)² + (1−p)²)`.
    pub theta1: f64,
}

/// Closed-form channel output for the Bell input.
///
/// With `a = n̄p/(2n̄+1)` and `b = (n̄+1)p/(2n̄+1)`:
/// `⟨00|ρ|00⟩ = b(1−a)`, `⟨11|ρ|11⟩ = a(1−b)`,
/// `⟨01|ρ|01⟩ = ⟨10|ρ|10⟩ = ½[ab + (1−a)(1−b)]`, `⟨01|ρ|10⟩ = (1−p)/2`.
/// The opposite labeling of the two outer populations is
/// [`XStateEntries::flipped`]; every correlation measure here is invariant
/// under it.
pub fn closed_form_bell(nbar: f64, p: f64) -> Result<BellClosedForm> {
    check(nbar, p)?;
    let d = 2.0 * nbar + 1.0;
    let a = nbar * p / d;
    let b = (nbar + 1.0) * p / d;
    let u = b * (1.0 - a);
    let v = a * (1.0 - b);
    let x = 0.5 * (a * b + (1.0 - a) * (1.0 - b));
    let y = 1.0 - u - x - v;
    let entries = XStateEntries::new(u, x, y, v, C64::new(0.5 * (1.0 - p), 0.0))?;
    let theta1 = libm::sqrt(p * p / (d * d) + (1.0 - p) * (1.0 - p));
    Ok(BellClosedForm { entries, theta1 })
}

/// Channel trajectory of `rho0` at the requested times.
pub fn channel_trajectory(rho0: &DensityMatrix, bath: &BathParams, times: &[f64]) -> Result<Trajectory> {
    channel_trajectory_with(rho0, bath, times, p_of_t)
}

/// [`channel_trajectory`] with a caller-supplied `p(γ, n̄, t)`.
pub fn channel_trajectory_with(
    rho0: &DensityMatrix,
    bath: &BathParams,
    times: &[f64],
    p_of_t: impl Fn(f64, f64, f64) -> Result<f64>,
) -> Result<Trajectory> {
    bath.validate()?;
    if rho0.dim() != 4 {
        return Err(Error::Dimension { expected: (4, 4), got: rho0.matrix().shape() });
    }
    times
        .iter()
        .map(|&t| {
            let p = p_of_t(bath.gamma, bath.nbar, t)?;
            trajectory_point(t, apply_raw(rho0.matrix(), &kraus_ops(bath.nbar, p)?))
        })
        .collect::<Result<Vec<_>>>()
}

#[cfg(test)]
mod tests {
    use super::*;

    const S: f64 = core::f64::consts::FRAC_1_SQRT_2;

    fn bell() -> DensityMatrix {
        let c = |x| C64::new(x, 0.0);
        DensityMatrix::from_pure(&[c(0.0), c(S), c(S), c(0.0)]).unwrap()
    }

    #[test]
    fn p_limits() {
        assert_eq!(p_of_t(0.1, 1.0, 0.0).unwrap(), 0.0);
        assert!((p_of_t(0.1, 1.0, 1e4).unwrap() - 1.0).abs() < 1e-15);
        assert!((p_of_t(0.1, 1.0, 1.0).unwrap() - (1.0 - libm::exp(-0.6))).abs() < 1e-15);
        assert!((p_of_t(0.1, 1.0, 1.0).unwrap() - 0.451188).abs() < 1e-6);
        assert!(p_of_t(0.1, 1.0, -1.0).is_err());
    }

    #[test]
    fn completeness_grid() {
        for nbar in [0.0, 0.5, 1.0, 5.0] {
            for p in [0.0, 0.25, 0.5, 1.0] {
                let ks = kraus_ops(nbar, p).unwrap();
                let sum = ks.iter().fold(CMatrix::zeros(2, 2), |acc, k| &acc + &(&k.adjoint() * k));
                assert!(sum.max_abs_diff(&CMatrix::identity(2)) < 1e-12, "n̄={nbar} p={p}");
            }
        }
    }

    #[test]
    fn identity_at_zero_probability() {
        let ks = kraus_ops(0.7, 0.0).unwrap();
        assert_eq!(ks[1].max_abs(), 0.0);
        assert_eq!(ks[3].max_abs(), 0.0);
        let rho = bell();
        let out = apply_two_qubit_channel(&rho, 0.7, 0.0).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn full_decay_at_zero_temperature() {
        let out = apply_two_qubit_channel(&bell(), 0.0, 1.0).unwrap();
        assert!(out.matrix().max_abs_diff(&CMatrix::from_real_diag(&[1.0, 0.0, 0.0, 0.0])) < 1e-15);
        let cf = closed_form_bell(0.0, 1.0).unwrap();
        let relabeled = cf.entries.flipped();
        assert_eq!((relabeled.u, relabeled.v, relabeled.x, relabeled.y), (0.0, 1.0, 0.0, 0.0));
        assert_eq!(cf.entries.u, 1.0);
    }

    #[test]
    fn thermal_fixed_point() {
        let nbar = 1.0;
        let q = nbar / (2.0 * nbar + 1.0);
        let out = apply_two_qubit_channel(&bell(), nbar, 1.0).unwrap();
        let single = [1.0 - q, q];
        let want = CMatrix::from_fn(4, 4, |r, c| if r == c { C64::new(single[r / 2] * single[r % 2], 0.0) } else { C64::new(0.0, 0.0) });
        assert!(out.matrix().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn bell_at_zero_probability() {
        let cf = closed_form_bell(1.0, 0.0).unwrap();
        let e = cf.entries;
        assert_eq!((e.u, e.x, e.y, e.v), (0.0, 0.5, 0.5, 0.0));
        assert_eq!(e.z, C64::new(0.5, 0.0));
        assert_eq!(cf.theta1, 1.0);
    }

    #[test]
    fn bell_half_probability() {
        let cf = closed_form_bell(1.0, 0.5).unwrap();
        let relabeled = cf.entries.flipped();
        assert!((relabeled.u - 1.0 / 9.0).abs() < 1e-15);
        assert!((relabeled.v - 5.0 / 18.0).abs() < 1e-15);
        assert!((cf.entries.z.re - 0.25).abs() < 1e-15);
        let out = apply_two_qubit_channel(&bell(), 1.0, 0.5).unwrap();
        assert!(out.matrix().max_abs_diff(&cf.entries.to_matrix()) < 1e-14);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(kraus_ops(1.0, 1.5).is_err());
        assert!(kraus_ops(-1.0, 0.5).is_err());
        assert!(closed_form_bell(1.0, -0.1).is_err());
    }
}
