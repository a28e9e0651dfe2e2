//! Trajectory, interaction-comparison and thermal-grid runs.

use discord_core::correlations::{correlation_report, discord_numeric, discord_xstate, entanglement_xstate};
use discord_core::dampchan::channel_trajectory;
use discord_core::liouville::{build_liouvillian, evolve, evolve_rk4, rk4_max_step, Trajectory, TrajectoryPoint};
use discord_core::qmat::as_xstate;
use discord_core::spinmodel::{build_hamiltonian, closed_form_levels, ground_state, thermal_state};
use discord_core::{BathParams, CMatrix, DensityMatrix, Error, ModelParams, C64};
use rayon::prelude::*;

use crate::config::{Initial, Method, Scenario, ScenarioConfig};
use crate::error::Result;
use crate::initial::load_initial;
use crate::output::Table;

pub const TRAJECTORY_HEADER: [&str; 15] =
    ["t", "u", "x", "y", "v", "re_z", "im_z", "I", "C", "Q", "E", "theta_opt", "phi_opt", "trace_err", "min_eig"];
pub const COMPARE_HEADER: [&str; 5] = ["t", "Q_interacting", "Q_J0", "Q_J0_master", "j0_resid"];
pub const THERMAL_HEADER: [&str; 5] = ["T", "D", "Q", "Q_numeric_check", "E"];
pub const BACKEND_RESID: &str = "backend_resid";

/// One sample of a trajectory with its correlation measures.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    /// Populations of `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub populations: [f64; 4],
    /// `⟨01|ρ|10⟩`.
    pub z: C64,
    pub mutual_info: f64,
    pub classical: f64,
    pub discord: f64,
    /// Only for X-states.
    pub entanglement: Option<f64>,
    /// Closed-form discord, only for X-states.
    pub discord_closed: Option<f64>,
    pub theta_opt: f64,
    pub phi_opt: f64,
    pub trace_err: f64,
    pub min_eig: f64,
    pub backend_resid: Option<f64>,
}

impl TrajectoryRow {
    pub fn from_point(p: &TrajectoryPoint, backend_resid: Option<f64>) -> Result<Self> {
        let r = correlation_report(&p.state)?;
        let m = p.state.matrix();
        Ok(Self {
            t: p.t,
            populations: [0, 1, 2, 3].map(|k| m[(k, k)].re),
            z: m[(1, 2)],
            mutual_info: r.mutual_info,
            classical: r.classical,
            discord: r.discord,
            entanglement: r.entanglement,
            discord_closed: r.closed_form.map(|c| c.q),
            theta_opt: r.argmin_basis.theta(),
            phi_opt: r.argmin_basis.phi(),
            trace_err: p.trace_error,
            min_eig: p.min_eigenvalue,
            backend_resid,
        })
    }

    fn cells(&self) -> Vec<Option<f64>> {
        let [u, x, y, v] = self.populations;
        let mut row = vec![
            Some(self.t),
            Some(u),
            Some(x),
            Some(y),
            Some(v),
            Some(self.z.re),
            Some(self.z.im),
            Some(self.mutual_info),
            Some(self.classical),
            Some(self.discord),
            self.entanglement,
            Some(self.theta_opt),
            Some(self.phi_opt),
            Some(self.trace_err),
            Some(self.min_eig),
        ];
        if self.backend_resid.is_some() {
            row.push(self.backend_resid);
        }
        row
    }
}

pub fn trajectory_table(rows: &[TrajectoryRow]) -> Table {
    let mut header = TRAJECTORY_HEADER.to_vec();
    if rows.first().is_some_and(|r| r.backend_resid.is_some()) {
        header.push(BACKEND_RESID);
    }
    Table { header, rows: rows.iter().map(TrajectoryRow::cells).collect() }
}

/// Interacting and noninteracting discord at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareRow {
    pub t: f64,
    pub q_interacting: f64,
    /// From the damping channel.
    pub q_j0: f64,
    /// From the master equation with `J = 0`.
    pub q_j0_master: f64,
    /// Largest elementwise gap between the two `J = 0` states.
    pub j0_resid: f64,
    pub backend_resid: Option<f64>,
}

pub fn compare_table(rows: &[CompareRow]) -> Table {
    let mut header = COMPARE_HEADER.to_vec();
    let with_resid = rows.first().is_some_and(|r| r.backend_resid.is_some());
    if with_resid {
        header.push(BACKEND_RESID);
    }
    let rows = rows
        .iter()
        .map(|r| {
            let mut cells = vec![Some(r.t), Some(r.q_interacting), Some(r.q_j0), Some(r.q_j0_master), Some(r.j0_resid)];
            if with_resid {
                cells.push(r.backend_resid);
            }
            cells
        })
        .collect();
    Table { header, rows }
}

/// One `(T, D)` grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalRow {
    pub temperature: f64,
    pub d: f64,
    /// Closed-form discord.
    pub q: f64,
    /// Optimizer discord of the same state.
    pub q_numeric: f64,
    pub e: f64,
}

pub fn thermal_table(rows: &[ThermalRow]) -> Table {
    let rows = rows.iter().map(|r| vec![Some(r.temperature), Some(r.d), Some(r.q), Some(r.q_numeric), Some(r.e)]).collect();
    Table { header: THERMAL_HEADER.to_vec(), rows }
}

/// `ρ(0)` named by the configuration.
pub fn initial_state(cfg: &ScenarioConfig) -> Result<DensityMatrix> {
    match &cfg.initial {
        Initial::Ground => Ok(DensityMatrix::from_pure(&ground_state(&cfg.model)?)?),
        Initial::Separable10 => {
            let mut m = CMatrix::zeros(4, 4);
            m[(2, 2)] = C64::new(1.0, 0.0);
            Ok(DensityMatrix::new(m)?)
        }
        Initial::File(path) => load_initial(path),
    }
}

/// The singlet-like level `J(−½ − |η|)` must be the ground level.
fn check_bell_ground(p: &ModelParams) -> Result<()> {
    let levels = closed_form_levels(p);
    let min = levels.iter().copied().fold(f64::INFINITY, f64::min);
    if levels[1] > min {
        return Err(Error::Invariant { what: "Bell-like level is not the ground level", value: levels[1] - min }.into());
    }
    Ok(())
}

/// Evolves under `H(p)` with the chosen backend. With [`Method::Both`] the
/// second value holds the per-sample residual against RK4.
pub fn evolve_with(
    p: &ModelParams,
    bath: &BathParams,
    rho0: &DensityMatrix,
    times: &[f64],
    method: Method,
) -> Result<(Trajectory, Option<Vec<f64>>)> {
    let h = build_hamiltonian(p)?;
    let rk4 = || -> Result<Trajectory> { Ok(evolve_rk4(&h, bath, rho0, times, rk4_max_step(&h, bath)?)?) };
    let diag = || -> Result<Trajectory> { Ok(evolve(&build_liouvillian(&h, bath)?, rho0, times)?) };
    match method {
        Method::Diag => Ok((diag()?, None)),
        Method::Rk4 => Ok((rk4()?, None)),
        Method::Both => {
            let (a, b) = (diag()?, rk4()?);
            let resid = a.iter().zip(&b).map(|(x, y)| x.raw.max_abs_diff(&y.raw)).collect();
            Ok((a, Some(resid)))
        }
    }
}

fn rows_of(traj: &Trajectory, resid: Option<&[f64]>) -> Result<Vec<TrajectoryRow>> {
    traj.par_iter()
        .enumerate()
        .map(|(k, p)| TrajectoryRow::from_point(p, resid.map(|r| r[k])))
        .collect()
}

/// Trajectory with correlations at every grid time.
pub fn run_evolve(cfg: &ScenarioConfig) -> Result<Vec<TrajectoryRow>> {
    if cfg.scenario == Scenario::Fig1a {
        check_bell_ground(&cfg.model)?;
    }
    let rho0 = initial_state(cfg)?;
    let (traj, resid) = evolve_with(&cfg.model, &cfg.bath, &rho0, &cfg.times(), cfg.method)?;
    rows_of(&traj, resid.as_deref())
}

/// Discord from the ground state with the configured `J`, against the
/// noninteracting case computed by the damping channel and by the master
/// equation.
pub fn run_compare_j0(cfg: &ScenarioConfig) -> Result<Vec<CompareRow>> {
    check_bell_ground(&cfg.model)?;
    let times = cfg.times();
    let rho0 = DensityMatrix::from_pure(&ground_state(&cfg.model)?)?;
    let (interacting, resid) = evolve_with(&cfg.model, &cfg.bath, &rho0, &times, cfg.method)?;
    let free = ModelParams::new(0.0, cfg.model.d, cfg.model.omega)?;
    let (master, _) = evolve_with(&free, &cfg.bath, &rho0, &times, Method::Diag)?;
    let channel = channel_trajectory(&rho0, &cfg.bath, &times)?;
    (0..times.len())
        .into_par_iter()
        .map(|k| {
            Ok(CompareRow {
                t: times[k],
                q_interacting: discord_numeric(&interacting[k].state)?.discord,
                q_j0: discord_numeric(&channel[k].state)?.discord,
                q_j0_master: discord_numeric(&master[k].state)?.discord,
                j0_resid: channel[k].raw.max_abs_diff(&master[k].raw),
                backend_resid: resid.as_ref().map(|r| r[k]),
            })
        })
        .collect()
}

/// Closed-form discord of the Gibbs state over the `(T, D)` grid, with the
/// optimizer value alongside.
pub fn run_thermal_sweep(cfg: &ScenarioConfig) -> Result<Vec<ThermalRow>> {
    let temps = cfg.t_range.values();
    let ds = cfg.d_range.values();
    let points: Vec<(f64, f64)> = temps.iter().flat_map(|&t| ds.iter().map(move |&d| (t, d))).collect();
    points.into_par_iter().map(|(t, d)| thermal_point(&cfg.model, t, d)).collect()
}

pub fn thermal_point(model: &ModelParams, temperature: f64, d: f64) -> Result<ThermalRow> {
    let p = ModelParams::new(model.j, d, model.omega)?;
    let rho = thermal_state(&p, temperature)?;
    let e = as_xstate(&rho)?;
    Ok(ThermalRow {
        temperature,
        d,
        q: discord_xstate(&e)?.q,
        q_numeric: discord_numeric(&rho)?.discord,
        e: entanglement_xstate(&e)?,
    })
}

/// Runs the configured scenario and returns its CSV table.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Table> {
    Ok(match cfg.scenario {
        Scenario::Fig1a | Scenario::Fig1b | Scenario::Custom => trajectory_table(&run_evolve(cfg)?),
        Scenario::Fig2 => compare_table(&run_compare_j0(cfg)?),
        Scenario::Fig3 => thermal_table(&run_thermal_sweep(cfg)?),
    })
}
