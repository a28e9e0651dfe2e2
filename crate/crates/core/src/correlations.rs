//! Correlation measures for two-qubit states, in bits.
//!
//! Classical correlation measures qubit B with the projectors
//! `Π_k = V|k⟩⟨k|V†`, where
//!
//! ```text
//! V(θ, φ) = | cos θ/2          sin θ/2 e^{−iφ} |
//!           | sin θ/2 e^{iφ}   −cos θ/2        |
//! ```
//!
//! and minimizes the measured conditional entropy of A over `(θ, φ)` with a
//! deterministic grid followed by coordinate golden-section refinement.

use core::f64::consts::PI;

use crate::qmat::{
    as_xstate, partial_trace, shannon_bits, vn_entropy, CMatrix, DensityMatrix, Subsystem,
    XStateEntries, ENTROPY_FLOOR,
};
use crate::{Error, Result, C64};

/// Tolerance of the range checks on reported measures.
pub const MEASURE_TOL: f64 = 1e-9;
/// Grid values closer than this are ties; the earlier grid point wins.
pub const TIE_TOL: f64 = 1e-12;

/// A projective measurement basis on one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    theta: f64,
    phi: f64,
}

impl MeasurementBasis {
    /// `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Validation("theta must lie in [0, pi]"));
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::Validation("phi must lie in [0, 2pi)"));
        }
        Ok(Self { theta, phi })
    }

    /// Polar angle.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Azimuthal angle.
    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `V(θ, φ)`.
    pub fn unitary(&self) -> CMatrix {
        let [b0, b1] = basis_vectors(self.theta, self.phi);
        CMatrix::from_rows(2, 2, &[b0[0], b1[0], b0[1], b1[1]])
    }
}

fn basis_vectors(theta: f64, phi: f64) -> [[C64; 2]; 2] {
    let (s, c) = (libm::sin(0.5 * theta), libm::cos(0.5 * theta));
    let e = C64::new(libm::cos(phi), libm::sin(phi));
    [[C64::new(c, 0.0), e * s], [e.conj() * s, C64::new(-c, 0.0)]]
}

/// `Π_B^0`, `Π_B^1`.
pub fn measurement_projectors(b: &MeasurementBasis) -> [CMatrix; 2] {
    basis_vectors(b.theta, b.phi).map(|v| CMatrix::outer(&v, &v))
}

/// Outcome of measuring qubit B.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalState {
    /// `p^k`.
    pub probability: f64,
    /// `ρ_A^k`; the maximally mixed state when the outcome is impossible.
    pub state: DensityMatrix,
    /// Set when `p^k < 1e-14`.
    pub zero_probability: bool,
}

/// Post-measurement state of A for outcome `k ∈ {0, 1}` on B.
pub fn conditional_state(rho: &DensityMatrix, b: &MeasurementBasis, k: usize) -> Result<ConditionalState> {
    if k > 1 {
        return Err(Error::Validation("measurement outcome must be 0 or 1"));
    }
    let m = Entries::of(rho)?;
    let vec = basis_vectors(b.theta, b.phi)[k];
    let block = m.block_given_b(&vec);
    let probability = (block[0][0].re + block[1][1].re).max(0.0);
    if probability < ENTROPY_FLOOR {
        return Ok(ConditionalState { probability, state: DensityMatrix::maximally_mixed(2)?, zero_probability: true });
    }
    let mat = CMatrix::from_rows(2, 2, &[block[0][0], block[0][1], block[1][0], block[1][1]]).scale_re(1.0 / probability);
    Ok(ConditionalState { probability, state: DensityMatrix::clamped(mat)?, zero_probability: false })
}

/// Entries of a two-qubit state as a fixed array, `ρ[2a+b][2a'+b']`.
#[derive(Clone, Copy)]
struct Entries([[C64; 4]; 4]);

impl Entries {
    fn of(rho: &DensityMatrix) -> Result<Self> {
        if rho.dim() != 4 {
            return Err(Error::Dimension { expected: (4, 4), got: rho.matrix().shape() });
        }
        let m = rho.matrix();
        Ok(Self(core::array::from_fn(|r| core::array::from_fn(|c| m[(r, c)]))))
    }

    fn swapped(&self) -> Self {
        let idx = |i: usize| (i % 2) * 2 + i / 2;
        Self(core::array::from_fn(|r| core::array::from_fn(|c| self.0[idx(r)][idx(c)])))
    }

    /// `(I ⊗ ⟨b|) ρ (I ⊗ |b⟩)`, unnormalized.
    fn block_given_b(&self, b: &[C64; 2]) -> [[C64; 2]; 2] {
        core::array::from_fn(|a| {
            core::array::from_fn(|a2| {
                let mut acc = C64::new(0.0, 0.0);
                for (beta, bb) in b.iter().enumerate() {
                    for (beta2, bb2) in b.iter().enumerate() {
                        acc += bb.conj() * self.0[2 * a + beta][2 * a2 + beta2] * bb2;
                    }
                }
                acc
            })
        })
    }

    /// `Σ_k p^k S(ρ_A^k)` for the basis `(θ, φ)` on B.
    fn conditional_entropy(&self, theta: f64, phi: f64) -> f64 {
        basis_vectors(theta, phi)
            .iter()
            .map(|b| {
                let m = self.block_given_b(b);
                let p = m[0][0].re + m[1][1].re;
                if p < ENTROPY_FLOOR {
                    return 0.0;
                }
                let half = 0.5 * (m[0][0].re - m[1][1].re);
                let r = libm::hypot(half, m[0][1].norm());
                p * shannon_bits(&[(0.5 * p + r) / p, (0.5 * p - r) / p])
            })
            .sum()
    }
}

/// `Σ_k p^k S(ρ_A^k)` for the basis `(θ, φ)` measured on B. Angles are not
/// range checked.
pub fn measured_conditional_entropy(rho: &DensityMatrix, theta: f64, phi: f64) -> Result<f64> {
    Ok(Entries::of(rho)?.conditional_entropy(theta, phi))
}

/// Settings of the measurement optimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Grid points on `θ ∈ [0, π]`, endpoints included.
    pub theta_points: usize,
    /// Grid points on `φ ∈ [0, 2π)`.
    pub phi_points: usize,
    /// Refinement stops when an iteration moves the angles less than this.
    pub angle_tol: f64,
    /// The measured qubit. B unless explicitly changed.
    pub measured: Subsystem,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { theta_points: 64, phi_points: 64, angle_tol: 1e-10, measured: Subsystem::B }
    }
}

/// Result of the classical-correlation optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalCorrelation {
    /// `C` in bits.
    pub value: f64,
    /// Minimized conditional entropy.
    pub conditional_entropy: f64,
    /// The minimizing basis.
    pub basis: MeasurementBasis,
}

/// `I = S(ρ_A) + S(ρ_B) − S(ρ_AB)`.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    let sa = vn_entropy(&partial_trace(rho, Subsystem::A)?);
    let sb = vn_entropy(&partial_trace(rho, Subsystem::B)?);
    Ok(sa + sb - vn_entropy(rho))
}

/// Classical correlation with the default optimizer.
pub fn classical_correlation(rho: &DensityMatrix) -> Result<ClassicalCorrelation> {
    classical_correlation_with(rho, &OptimizerConfig::default())
}

/// `C = S(ρ_A) − min_{θ,φ} Σ_k p^k S(ρ_A^k)` (roles swapped when measuring A).
pub fn classical_correlation_with(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<ClassicalCorrelation> {
    if cfg.theta_points < 2 || cfg.phi_points < 1 {
        return Err(Error::Validation("optimizer grid needs at least 2 x 1 points"));
    }
    let entries = match cfg.measured {
        Subsystem::B => Entries::of(rho)?,
        Subsystem::A => Entries::of(rho)?.swapped(),
    };
    let unmeasured = match cfg.measured {
        Subsystem::B => Subsystem::A,
        Subsystem::A => Subsystem::B,
    };
    let s_unmeasured = vn_entropy(&partial_trace(rho, unmeasured)?);
    let f = |theta: f64, phi: f64| entries.conditional_entropy(theta, phi);

    let d_theta = PI / (cfg.theta_points - 1) as f64;
    let d_phi = 2.0 * PI / cfg.phi_points as f64;
    let mut best = (0.0, 0.0, f64::INFINITY);
    for i in 0..cfg.theta_points {
        let theta = i as f64 * d_theta;
        for j in 0..cfg.phi_points {
            let phi = j as f64 * d_phi;
            let val = f(theta, phi);
            if val < best.2 - TIE_TOL {
                best = (theta, phi, val);
            }
        }
    }

    let (mut theta, mut phi, mut val) = best;
    for _ in 0..200 {
        let (t_new, f_t) = golden_section(|t| f(t, phi), (theta - d_theta).max(0.0), (theta + d_theta).min(PI), cfg.angle_tol);
        let mut moved = 0.0;
        if f_t < val {
            moved += (t_new - theta).abs();
            theta = t_new;
            val = f_t;
        }
        let (p_new, f_p) = golden_section(|p| f(theta, p), phi - d_phi, phi + d_phi, cfg.angle_tol);
        if f_p < val {
            moved += (p_new - phi).abs();
            phi = p_new;
            val = f_p;
        }
        if moved < cfg.angle_tol {
            break;
        }
    }
    let phi = phi - 2.0 * PI * libm::floor(phi / (2.0 * PI));
    let phi = if phi >= 2.0 * PI { 0.0 } else { phi };
    let basis = MeasurementBasis::new(theta.clamp(0.0, PI), phi)?;
    Ok(ClassicalCorrelation { value: s_unmeasured - val, conditional_entropy: val, basis })
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Closed-form X-state discord and its ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateDiscord {
    /// `Q = S(ρ_B) − S(ρ_AB) + min{S₀, S₁}`.
    pub q: f64,
    /// Conditional entropy for the `σ^z` measurement on B.
    pub s0: f64,
    /// Conditional entropy for the in-plane measurement on B.
    pub s1: f64,
    /// `θ₁ = √((u + x − y − v)² + 4|z|²)`.
    pub theta1: f64,
}

/// Closed-form discord of an X-state:
///
/// ```text
/// S₀ = −[u log(u/(u+y)) + y log(y/(u+y)) + x log(x/(x+v)) + v log(v/(x+v))]
/// S₁ = H₂((1 + θ₁)/2)
/// ```
pub fn discord_xstate(e: &XStateEntries) -> Result<XStateDiscord> {
    e.validate()?;
    let (u, x, y, v) = (e.u.max(0.0), e.x.max(0.0), e.y.max(0.0), e.v.max(0.0));
    let term = |a: f64, b: f64| if a < ENTROPY_FLOOR { 0.0 } else { -a * libm::log2(a / (a + b)) };
    let s0 = term(u, y) + term(y, u) + term(x, v) + term(v, x);
    let theta1 = libm::sqrt((u + x - y - v) * (u + x - y - v) + 4.0 * e.z.norm_sqr());
    let s1 = shannon_bits(&[0.5 * (1.0 + theta1), 0.5 * (1.0 - theta1)]);
    let s_b = shannon_bits(&e.reduced_b());
    let s_ab = shannon_bits(&e.eigenvalues());
    Ok(XStateDiscord { q: s_b - s_ab + s0.min(s1), s0, s1, theta1 })
}

/// `E = 2 max{|z| − √(uv), 0}`.
pub fn entanglement_xstate(e: &XStateEntries) -> Result<f64> {
    e.validate()?;
    Ok(2.0 * (e.z.norm() - libm::sqrt((e.u * e.v).max(0.0))).max(0.0))
}

/// Every correlation measure of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    /// Mutual information `I`.
    pub mutual_info: f64,
    /// Classical correlation `C` from the optimizer.
    pub classical: f64,
    /// Discord `Q = I − C`.
    pub discord: f64,
    /// X-state entanglement `E`; `None` for states outside the X pattern.
    pub entanglement: Option<f64>,
    /// Minimizing measurement basis.
    pub argmin_basis: MeasurementBasis,
    /// Closed-form discord for X-states.
    pub closed_form: Option<XStateDiscord>,
}

/// Numeric discord with the default optimizer (no closed-form fields).
pub fn discord_numeric(rho: &DensityMatrix) -> Result<CorrelationReport> {
    discord_numeric_with(rho, &OptimizerConfig::default())
}

/// Numeric discord, `Q = I − C`.
pub fn discord_numeric_with(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<CorrelationReport> {
    let mutual_info = mutual_information(rho)?;
    let cc = classical_correlation_with(rho, cfg)?;
    let mut classical = cc.value;
    if (-MEASURE_TOL..0.0).contains(&classical) {
        classical = 0.0;
    }
    if !(classical >= 0.0 && classical <= mutual_info + MEASURE_TOL) {
        return Err(Error::Invariant { what: "classical correlation outside [0, I]", value: classical });
    }
    let mut discord = mutual_info - classical;
    if discord < 0.0 {
        if discord < -MEASURE_TOL {
            return Err(Error::Invariant { what: "negative discord", value: discord });
        }
        discord = 0.0;
    }
    Ok(CorrelationReport { mutual_info, classical, discord, entanglement: None, argmin_basis: cc.basis, closed_form: None })
}

/// All measures with the default optimizer.
pub fn correlation_report(rho: &DensityMatrix) -> Result<CorrelationReport> {
    correlation_report_with(rho, &OptimizerConfig::default())
}

/// All measures; closed-form discord and `E` are attached for X-states.
pub fn correlation_report_with(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<CorrelationReport> {
    let mut report = discord_numeric_with(rho, cfg)?;
    if let Ok(e) = as_xstate(rho) {
        report.closed_form = Some(discord_xstate(&e)?);
        report.entanglement = Some(entanglement_xstate(&e)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::kron;

    const S: f64 = core::f64::consts::FRAC_1_SQRT_2;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn bell() -> DensityMatrix {
        DensityMatrix::from_pure(&[c(0.0), c(S), c(S), c(0.0)]).unwrap()
    }

    fn classical_mixture() -> DensityMatrix {
        DensityMatrix::new(CMatrix::from_real_diag(&[0.5, 0.0, 0.0, 0.5])).unwrap()
    }

    fn product() -> DensityMatrix {
        let a = CMatrix::from_rows(2, 2, &[c(0.7), C64::new(0.1, 0.2), C64::new(0.1, -0.2), c(0.3)]);
        let b = CMatrix::from_real_diag(&[0.4, 0.6]);
        DensityMatrix::new(kron(&a, &b)).unwrap()
    }

    #[test]
    fn mutual_information_anchors() {
        assert!(mutual_information(&product()).unwrap().abs() < 1e-12);
        assert!((mutual_information(&bell()).unwrap() - 2.0).abs() < 1e-12);
        assert!((mutual_information(&classical_mixture()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projectors() {
        let [p0, p1] = measurement_projectors(&MeasurementBasis::new(0.0, 0.0).unwrap());
        assert!(p0.max_abs_diff(&CMatrix::from_real_diag(&[1.0, 0.0])) < 1e-15);
        assert!(p1.max_abs_diff(&CMatrix::from_real_diag(&[0.0, 1.0])) < 1e-15);
        let [p0, _] = measurement_projectors(&MeasurementBasis::new(PI / 2.0, 0.0).unwrap());
        assert!(p0.max_abs_diff(&CMatrix::from_rows(2, 2, &[c(0.5), c(0.5), c(0.5), c(0.5)])) < 1e-15);
        for (t, p) in [(0.3, 1.1), (2.9, 6.0), (1.0, 0.0)] {
            let b = MeasurementBasis::new(t, p).unwrap();
            let [p0, p1] = measurement_projectors(&b);
            assert!((&p0 + &p1).max_abs_diff(&CMatrix::identity(2)) < 1e-12);
            assert!((&p0 * &p0).max_abs_diff(&p0) < 1e-12);
            let v = b.unitary();
            assert!((&v * &v.adjoint()).max_abs_diff(&CMatrix::identity(2)) < 1e-12);
        }
        assert!(MeasurementBasis::new(-0.1, 0.0).is_err());
        assert!(MeasurementBasis::new(0.1, 2.0 * PI).is_err());
    }

    #[test]
    fn conditional_states() {
        let b = MeasurementBasis::new(0.0, 0.0).unwrap();
        let out = conditional_state(&bell(), &b, 0).unwrap();
        assert!((out.probability - 0.5).abs() < 1e-15);
        assert!(out.state.matrix().max_abs_diff(&CMatrix::from_real_diag(&[0.0, 1.0])) < 1e-15);

        let rho = product();
        let rho_a = partial_trace(&rho, Subsystem::A).unwrap();
        let b = MeasurementBasis::new(1.2, 0.4).unwrap();
        let mut total = 0.0;
        for k in 0..2 {
            let out = conditional_state(&rho, &b, k).unwrap();
            assert!(out.state.matrix().max_abs_diff(rho_a.matrix()) < 1e-12);
            assert!(out.probability >= 0.0);
            total += out.probability;
        }
        assert!((total - 1.0).abs() < 1e-12);

        let ket = DensityMatrix::new(CMatrix::from_real_diag(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        let out = conditional_state(&ket, &MeasurementBasis::new(0.0, 0.0).unwrap(), 1).unwrap();
        assert!(out.zero_probability);
        assert!(conditional_state(&ket, &b, 2).is_err());
    }

    #[test]
    fn classical_correlation_anchors() {
        assert!(classical_correlation(&product()).unwrap().value.abs() < 1e-9);
        assert!((classical_correlation(&bell()).unwrap().value - 1.0).abs() < 1e-9);
        let mix = classical_correlation(&classical_mixture()).unwrap();
        assert!((mix.value - 1.0).abs() < 1e-12);
        assert_eq!(mix.basis.theta(), 0.0);
    }

    #[test]
    fn discord_anchors() {
        assert!((discord_numeric(&bell()).unwrap().discord - 1.0).abs() < 1e-9);
        assert!(discord_numeric(&product()).unwrap().discord.abs() < 1e-9);
        assert!(discord_numeric(&classical_mixture()).unwrap().discord.abs() < 1e-12);
    }

    #[test]
    fn closed_form_anchors() {
        let bell = XStateEntries::new(0.0, 0.5, 0.5, 0.0, c(0.5)).unwrap();
        let d = discord_xstate(&bell).unwrap();
        assert!((d.q - 1.0).abs() < 1e-12);
        assert_eq!(d.s0, 0.0);
        assert!((d.theta1 - 1.0).abs() < 1e-15);
        assert!(d.s1.abs() < 1e-12);
        let mixed = XStateEntries::new(0.25, 0.25, 0.25, 0.25, c(0.0)).unwrap();
        let d = discord_xstate(&mixed).unwrap();
        assert_eq!((d.theta1, d.s0, d.s1), (0.0, 1.0, 1.0));
        assert!(d.q.abs() < 1e-15);
    }

    #[test]
    fn entanglement_anchors() {
        let bell = XStateEntries::new(0.0, 0.5, 0.5, 0.0, c(0.5)).unwrap();
        assert_eq!(entanglement_xstate(&bell).unwrap(), 1.0);
        let mixed = XStateEntries::new(0.25, 0.25, 0.25, 0.25, c(0.0)).unwrap();
        assert_eq!(entanglement_xstate(&mixed).unwrap(), 0.0);
        let edge = XStateEntries::new(0.25, 0.25, 0.25, 0.25, c(0.25)).unwrap();
        assert_eq!(entanglement_xstate(&edge).unwrap(), 0.0);
    }

    #[test]
    fn report_bundles() {
        let r = correlation_report(&bell()).unwrap();
        assert!((r.mutual_info - 2.0).abs() < 1e-9);
        assert!((r.classical - 1.0).abs() < 1e-9);
        assert!((r.discord - 1.0).abs() < 1e-9);
        assert!((r.entanglement.unwrap() - 1.0).abs() < 1e-12);
        assert!(r.closed_form.is_some());
        let mut m = CMatrix::identity(4).scale_re(0.25);
        m[(0, 3)] = c(0.1);
        m[(3, 0)] = c(0.1);
        let r = correlation_report(&DensityMatrix::new(m).unwrap()).unwrap();
        assert!(r.closed_form.is_none() && r.entanglement.is_none());
    }

    #[test]
    fn measuring_a_on_symmetric_state() {
        let cfg = OptimizerConfig { measured: Subsystem::A, ..OptimizerConfig::default() };
        let r = discord_numeric_with(&bell(), &cfg).unwrap();
        assert!((r.discord - 1.0).abs() < 1e-9);
    }
}
