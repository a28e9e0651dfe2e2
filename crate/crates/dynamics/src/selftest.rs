//! Built-in invariant suites. The functions most prone to convention errors
//! are injected through [`Probes`] so that a deliberately broken variant can
//! be shown to fail.

use discord_core::correlations::{discord_numeric, discord_xstate, entanglement_xstate};
use discord_core::dampchan::{apply_two_qubit_channel, channel_trajectory_with, closed_form_bell, kraus_ops, p_of_t};
use discord_core::liouville::{build_liouvillian, evolve, evolve_rk4, rk4_max_step, spost, spre, vec, Trajectory};
use discord_core::qmat::{as_xstate, off_x_pattern};
use discord_core::spinmodel::{build_hamiltonian, ground_state};
use discord_core::{BathParams, CMatrix, DensityMatrix, ModelParams, XStateEntries, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const SEED: u64 = 0x5eed_d15c;

/// Functions under test.
#[derive(Debug, Clone, Copy)]
pub struct Probes {
    pub p_of_t: fn(f64, f64, f64) -> discord_core::Result<f64>,
    pub spre: fn(&CMatrix) -> CMatrix,
    pub spost: fn(&CMatrix) -> CMatrix,
}

impl Default for Probes {
    fn default() -> Self {
        Self { p_of_t, spre, spost }
    }
}

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub checks: usize,
    /// Largest observed deviation.
    pub worst: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// All suites.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub passed: bool,
    pub failed: Vec<&'static str>,
    pub suites: Vec<SuiteResult>,
}

/// Accumulates the worst deviation of a suite.
struct Tally {
    checks: usize,
    worst: f64,
}

impl Tally {
    fn new() -> Self {
        Self { checks: 0, worst: 0.0 }
    }

    fn record(&mut self, deviation: f64) {
        self.checks += 1;
        self.worst = if deviation.is_nan() { f64::INFINITY } else { self.worst.max(deviation) };
    }
}

fn suite(
    name: &'static str,
    tolerance: f64,
    body: impl FnOnce(&mut Tally) -> discord_core::Result<()>,
) -> SuiteResult {
    let mut tally = Tally::new();
    let error = body(&mut tally).err().map(|e| e.to_string());
    SuiteResult {
        name,
        passed: error.is_none() && tally.checks > 0 && tally.worst <= tolerance,
        checks: tally.checks,
        worst: tally.worst,
        tolerance,
        error,
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn random_xstate(rng: &mut ChaCha8Rng) -> XStateEntries {
    let w: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.01..1.0));
    let s: f64 = w.iter().sum();
    let [u, x, y, v] = w.map(|a| a / s);
    let z = C64::from_polar(rng.gen_range(0.0..=1.0) * (x * y).sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
    XStateEntries::new(u, x, y, v, z).expect("valid by construction")
}

fn random_params(rng: &mut ChaCha8Rng) -> (ModelParams, BathParams) {
    let model = ModelParams::new(rng.gen_range(0.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(0.0..1.0));
    let bath = BathParams::new(rng.gen_range(0.0..3.0), rng.gen_range(0.02..0.5));
    (model.expect("in range"), bath.expect("in range"))
}

/// Trajectories of random X-states under random parameters, both backends.
fn sample_trajectories() -> discord_core::Result<Vec<Trajectory>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let times: Vec<f64> = (0..=8).map(|k| k as f64 * 1.5).collect();
    let mut out = Vec::new();
    for _ in 0..6 {
        let (model, bath) = random_params(&mut rng);
        let h = build_hamiltonian(&model)?;
        let rho0 = DensityMatrix::new(random_xstate(&mut rng).to_matrix())?;
        out.push(evolve(&build_liouvillian(&h, &bath)?, &rho0, &times)?);
        out.push(evolve_rk4(&h, &bath, &rho0, &times, rk4_max_step(&h, &bath)?)?);
    }
    Ok(out)
}

pub fn run_selftest() -> SelftestReport {
    run_selftest_with(&Probes::default())
}

pub fn run_selftest_with(probes: &Probes) -> SelftestReport {
    let trajectories = sample_trajectories();
    let over_trajectories = |name, tol, metric: fn(&discord_core::liouville::TrajectoryPoint) -> f64| {
        suite(name, tol, |t| {
            for traj in trajectories.as_ref().map_err(Clone::clone)? {
                traj.iter().for_each(|p| t.record(metric(p)));
            }
            Ok(())
        })
    };

    let suites = vec![
        suite("vectorization", 1e-12, |t| {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            for _ in 0..8 {
                let (a, rho, b) = (random_matrix(&mut rng, 4), random_matrix(&mut rng, 4), random_matrix(&mut rng, 4));
                let direct = vec(&(&(&a * &rho) * &b));
                let via = (&(probes.spre)(&a) * &(probes.spost)(&b)).matvec(&vec(&rho));
                t.record(direct.iter().zip(&via).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max));
            }
            Ok(())
        }),
        suite("lindblad_equivalence", 1e-8, |t| {
            let bath = BathParams::default();
            let times: Vec<f64> = (0..=60).map(|k| k as f64 * 0.5).collect();
            for d in [0.0, 0.5, 2.0] {
                let rho0 = DensityMatrix::from_pure(&ground_state(&ModelParams::new(1.0, d, 0.1)?)?)?;
                let free = build_hamiltonian(&ModelParams::new(0.0, d, 0.1)?)?;
                let master = evolve(&build_liouvillian(&free, &bath)?, &rho0, &times)?;
                let channel = channel_trajectory_with(&rho0, &bath, &times, probes.p_of_t)?;
                master.iter().zip(&channel).for_each(|(a, b)| t.record(a.raw.max_abs_diff(&b.raw)));
            }
            Ok(())
        }),
        over_trajectories("trace_preservation", 1e-10, |p| p.trace_error),
        over_trajectories("hermiticity_preservation", 1e-9, |p| p.hermiticity_defect),
        over_trajectories("positivity", 1e-8, |p| (-p.min_eigenvalue).max(0.0)),
        over_trajectories("x_state_closure", 1e-9, |p| off_x_pattern(&p.raw)),
        suite("spectral_stability", 1e-10, |t| {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            for _ in 0..8 {
                let (model, bath) = random_params(&mut rng);
                let l = build_liouvillian(&build_hamiltonian(&model)?, &bath)?;
                t.record(l.max_real_part().max(0.0));
                t.record(if l.zero_modes(1e-8) == 1 { 0.0 } else { f64::INFINITY });
            }
            Ok(())
        }),
        suite("cptp_completeness", 1e-12, |t| {
            for nbar in [0.0, 0.5, 1.0, 3.0, 10.0] {
                for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
                    let ks = kraus_ops(nbar, p)?;
                    let sum = ks.iter().fold(CMatrix::zeros(2, 2), |acc, k| &acc + &(&k.adjoint() * k));
                    t.record(sum.max_abs_diff(&CMatrix::identity(2)));
                }
            }
            Ok(())
        }),
        suite("bell_closed_form", 1e-10, |t| {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let zero = C64::new(0.0, 0.0);
            let bell = DensityMatrix::from_pure(&[zero, C64::new(s, 0.0), C64::new(s, 0.0), zero])?;
            for nbar in [0.0, 0.3, 1.0, 2.0, 5.0] {
                for p in [0.0, 0.1, 0.5, 0.9, 1.0] {
                    let cf = closed_form_bell(nbar, p)?;
                    let out = apply_two_qubit_channel(&bell, nbar, p)?;
                    t.record(out.matrix().max_abs_diff(&cf.entries.to_matrix()));
                    t.record((discord_xstate(&as_xstate(&out)?)?.theta1 - cf.theta1).abs());
                }
            }
            Ok(())
        }),
        suite("swap_invariance", 1e-12, |t| {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            for _ in 0..32 {
                let e = random_xstate(&mut rng);
                t.record((discord_xstate(&e)?.q - discord_xstate(&e.flipped())?.q).abs());
                t.record((entanglement_xstate(&e)? - entanglement_xstate(&e.flipped())?).abs());
            }
            Ok(())
        }),
        suite("phase_invariance", 1e-12, |t| {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            for _ in 0..32 {
                let e = random_xstate(&mut rng);
                let chi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let r = XStateEntries::new(e.u, e.x, e.y, e.v, e.z * C64::from_polar(1.0, chi))?;
                t.record((discord_xstate(&e)?.q - discord_xstate(&r)?.q).abs());
                t.record((entanglement_xstate(&e)? - entanglement_xstate(&r)?).abs());
            }
            Ok(())
        }),
        suite("closed_form_upper_bound", 1e-9, |t| {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            for _ in 0..12 {
                let e = random_xstate(&mut rng);
                let numeric = discord_numeric(&DensityMatrix::new(e.to_matrix())?)?.discord;
                t.record((numeric - discord_xstate(&e)?.q).max(0.0));
            }
            Ok(())
        }),
    ];
    let failed: Vec<&'static str> = suites.iter().filter(|s| !s.passed).map(|s| s.name).collect();
    SelftestReport { passed: failed.is_empty(), failed, suites }
}
