//! Scenario configuration: built-in defaults, TOML files and CLI overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use discord_core::spinmodel::nbar_from_temperature;
use discord_core::{BathParams, ModelParams};
use serde::{Deserialize, Serialize};

use crate::error::{AppError, Result};

/// The reproducible runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    /// Ground-state decay of discord and entanglement.
    Fig1a,
    /// Correlations generated from `|10⟩`.
    Fig1b,
    /// Interacting vs noninteracting discord decay.
    Fig2,
    /// Thermal discord over a (T, D) grid.
    Fig3,
    /// Trajectory with user-chosen parameters.
    Custom,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Self::Fig1a => "fig1a",
            Self::Fig1b => "fig1b",
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Custom => "custom",
        }
    }
}

/// Initial two-qubit state of a trajectory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Initial {
    Ground,
    Separable10,
    File(PathBuf),
}

impl FromStr for Initial {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ground" => Ok(Self::Ground),
            "separable10" => Ok(Self::Separable10),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(Self::File(path.into())),
                _ => Err(AppError::Config(format!(
                    "initial must be ground, separable10 or file:PATH, got {s:?}"
                ))),
            },
        }
    }
}

impl fmt::Display for Initial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ground => f.write_str("ground"),
            Self::Separable10 => f.write_str("separable10"),
            Self::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// Time-evolution backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Liouvillian eigendecomposition, with matrix-exponential fallback.
    Diag,
    /// Fixed-step Runge-Kutta on the matrix master equation.
    Rk4,
    /// Diag results plus the elementwise residual against RK4.
    Both,
}

/// Inclusive uniform range written `a:b:s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(AppError::Config("range bounds must be finite".into()));
        }
        if step <= 0.0 || stop < start {
            return Err(AppError::Config(format!("range {start}:{stop}:{step} is empty")));
        }
        let span = (stop - start) / step;
        if (span - span.round()).abs() > 1e-6 {
            return Err(AppError::Config(format!("step {step} does not divide {start}:{stop}")));
        }
        Ok(Self { start, stop, step })
    }

    /// Number of samples.
    pub fn count(&self) -> usize {
        ((self.stop - self.start) / self.step).round() as usize + 1
    }

    /// Samples with both endpoints hit exactly.
    pub fn values(&self) -> Vec<f64> {
        let n = self.count();
        if n == 1 {
            return vec![self.start];
        }
        (0..n)
            .map(|k| if k + 1 == n { self.stop } else { self.start + (self.stop - self.start) * k as f64 / (n - 1) as f64 })
            .collect()
    }
}

impl FromStr for Range {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(AppError::Config(format!("range must be a:b:s, got {s:?}")));
        };
        let num = |t: &str| {
            t.trim().parse::<f64>().map_err(|_| AppError::Config(format!("bad number {t:?} in range {s:?}")))
        };
        Self::new(num(a)?, num(b)?, num(c)?)
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

/// Optional settings from one source. Later sources override earlier ones
/// field by field.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub j: Option<f64>,
    pub d: Option<f64>,
    pub omega: Option<f64>,
    pub nbar: Option<f64>,
    pub gamma: Option<f64>,
    /// Reservoir mode frequency; with `t_res` it fixes `nbar`.
    pub omega_e: Option<f64>,
    /// Reservoir temperature.
    pub t_res: Option<f64>,
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
    pub initial: Option<String>,
    pub method: Option<Method>,
    pub d_range: Option<String>,
    pub t_range: Option<String>,
    pub out: Option<PathBuf>,
    pub emit_gnuplot: Option<bool>,
}

impl Overrides {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        toml::from_str(&text).map_err(|e| AppError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields of `self` win over `lower`.
    pub fn over(self, lower: Overrides) -> Overrides {
        Overrides {
            j: self.j.or(lower.j),
            d: self.d.or(lower.d),
            omega: self.omega.or(lower.omega),
            nbar: self.nbar.or(lower.nbar),
            gamma: self.gamma.or(lower.gamma),
            omega_e: self.omega_e.or(lower.omega_e),
            t_res: self.t_res.or(lower.t_res),
            t_max: self.t_max.or(lower.t_max),
            steps: self.steps.or(lower.steps),
            initial: self.initial.or(lower.initial),
            method: self.method.or(lower.method),
            d_range: self.d_range.or(lower.d_range),
            t_range: self.t_range.or(lower.t_range),
            out: self.out.or(lower.out),
            emit_gnuplot: self.emit_gnuplot.or(lower.emit_gnuplot),
        }
    }
}

pub const DEFAULT_T_MAX: f64 = 30.0;
pub const DEFAULT_STEPS: usize = 601;
pub const DEFAULT_T_RANGE: Range = Range { start: 0.1, stop: 2.0, step: 0.05 };
pub const DEFAULT_D_RANGE: Range = Range { start: 0.0, stop: 3.0, step: 0.05 };

/// A fully resolved, validated run description.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub model: ModelParams,
    pub bath: BathParams,
    pub initial: Initial,
    pub t_max: f64,
    pub steps: usize,
    pub method: Method,
    pub d_range: Range,
    pub t_range: Range,
    pub out: Option<PathBuf>,
    pub emit_gnuplot: bool,
}

impl ScenarioConfig {
    /// Built-in settings of a scenario.
    pub fn defaults(scenario: Scenario) -> Self {
        Self {
            scenario,
            model: ModelParams::default(),
            bath: BathParams::default(),
            initial: if scenario == Scenario::Fig1b { Initial::Separable10 } else { Initial::Ground },
            t_max: DEFAULT_T_MAX,
            steps: DEFAULT_STEPS,
            method: Method::Diag,
            d_range: DEFAULT_D_RANGE,
            t_range: DEFAULT_T_RANGE,
            out: None,
            emit_gnuplot: false,
        }
    }

    /// Defaults, then `o`, then validation.
    pub fn resolve(scenario: Scenario, o: Overrides) -> Result<Self> {
        let mut cfg = Self::defaults(scenario);
        let m = cfg.model;
        cfg.model = ModelParams::new(o.j.unwrap_or(m.j), o.d.unwrap_or(m.d), o.omega.unwrap_or(m.omega))?;
        let nbar = match (o.nbar, o.t_res, o.omega_e) {
            (Some(_), Some(_), _) => {
                return Err(AppError::Config("give either nbar or t_res with omega_e, not both".into()))
            }
            (_, Some(t), Some(w)) => nbar_from_temperature(w, t)?,
            (_, Some(_), None) => return Err(AppError::Config("t_res requires omega_e".into())),
            (n, None, _) => n.unwrap_or(cfg.bath.nbar),
        };
        cfg.bath = BathParams::new(nbar, o.gamma.unwrap_or(cfg.bath.gamma))?;
        if let Some(s) = o.initial {
            cfg.initial = s.parse()?;
        }
        if scenario != Scenario::Custom && scenario != Scenario::Fig3 {
            let fixed = Self::defaults(scenario).initial;
            if cfg.initial != fixed {
                return Err(AppError::Config(format!(
                    "{} always starts from {fixed}; use the custom scenario",
                    scenario.name()
                )));
            }
        }
        cfg.t_max = o.t_max.unwrap_or(cfg.t_max);
        cfg.steps = o.steps.unwrap_or(cfg.steps);
        cfg.method = o.method.unwrap_or(cfg.method);
        if let Some(r) = o.d_range {
            cfg.d_range = r.parse()?;
        }
        if let Some(r) = o.t_range {
            cfg.t_range = r.parse()?;
        }
        cfg.out = o.out;
        cfg.emit_gnuplot = o.emit_gnuplot.unwrap_or(false);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.bath.validate()?;
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(AppError::Config("t_max must be positive".into()));
        }
        if self.steps < 2 {
            return Err(AppError::Config("steps must be at least 2".into()));
        }
        if self.t_range.start <= 0.0 {
            return Err(AppError::Config("temperatures must be positive".into()));
        }
        if self.emit_gnuplot && self.out.is_none() {
            return Err(AppError::Config("emit_gnuplot needs an output path".into()));
        }
        Ok(())
    }

    /// Uniform grid on `[0, t_max]` with both endpoints.
    pub fn times(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..=n).map(|k| if k == n { self.t_max } else { self.t_max * k as f64 / n as f64 }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        let r: Range = "0.1:2:0.05".parse().unwrap();
        assert_eq!(r.count(), 39);
        let v = r.values();
        assert_eq!((v[0], v[38]), (0.1, 2.0));
        assert!((v[2] - 0.2).abs() < 1e-15);
        assert_eq!("1:1:0.5".parse::<Range>().unwrap().values(), vec![1.0]);
        for bad in ["1:0:0.1", "0:1:0", "0:1", "0:1:0.3", "a:1:0.1"] {
            assert!(bad.parse::<Range>().is_err(), "{bad}");
        }
    }

    #[test]
    fn initial_parsing() {
        assert_eq!("ground".parse::<Initial>().unwrap(), Initial::Ground);
        assert_eq!("file:x.txt".parse::<Initial>().unwrap(), Initial::File("x.txt".into()));
        assert!("file:".parse::<Initial>().is_err());
        assert!("bell".parse::<Initial>().is_err());
    }

    #[test]
    fn precedence() {
        let file = Overrides { j: Some(2.0), d: Some(0.5), ..Default::default() };
        let cli = Overrides { j: Some(3.0), ..Default::default() };
        let cfg = ScenarioConfig::resolve(Scenario::Custom, cli.over(file)).unwrap();
        assert_eq!((cfg.model.j, cfg.model.d, cfg.model.omega), (3.0, 0.5, 0.1));
    }

    #[test]
    fn defaults() {
        let cfg = ScenarioConfig::resolve(Scenario::Fig1b, Overrides::default()).unwrap();
        assert_eq!(cfg.initial, Initial::Separable10);
        let t = cfg.times();
        assert_eq!((t.len(), t[1], t[600]), (601, 0.05, 30.0));
        assert_eq!(cfg.bath, BathParams::default());
    }

    #[test]
    fn rejects_bad_settings() {
        let bad = [
            Overrides { steps: Some(1), ..Default::default() },
            Overrides { t_max: Some(0.0), ..Default::default() },
            Overrides { gamma: Some(0.0), ..Default::default() },
            Overrides { j: Some(-1.0), ..Default::default() },
            Overrides { t_range: Some("0:1:0.5".into()), ..Default::default() },
            Overrides { t_res: Some(1.0), ..Default::default() },
            Overrides { emit_gnuplot: Some(true), ..Default::default() },
        ];
        for o in bad {
            let e = ScenarioConfig::resolve(Scenario::Custom, o.clone()).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{o:?}");
        }
        let o = Overrides { initial: Some("ground".into()), ..Default::default() };
        assert!(ScenarioConfig::resolve(Scenario::Fig1b, o).is_err());
    }

    #[test]
    fn reservoir_temperature() {
        let o = Overrides { t_res: Some(1.0), omega_e: Some(std::f64::consts::LN_2), ..Default::default() };
        let cfg = ScenarioConfig::resolve(Scenario::Custom, o).unwrap();
        assert!((cfg.bath.nbar - 1.0).abs() < 1e-12);
    }

    #[test]
    fn toml_fields() {
        let o: Overrides = toml::from_str("j = 0.5\nmethod = \"rk4\"\nd_range = \"0:1:0.5\"").unwrap();
        assert_eq!((o.j, o.method), (Some(0.5), Some(Method::Rk4)));
        assert!(toml::from_str::<Overrides>("jj = 1").is_err());
    }
}
