//! CSV text, gnuplot scripts and run metadata.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::config::{Scenario, ScenarioConfig};
use crate::error::{AppError, Result};

/// Scientific notation with 12 significant digits and a signed two-digit
/// exponent, e.g. `-1.25000000000e-03`. Negative zero prints as zero.
pub fn fmt_sci(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    let s = format!("{x:.11e}");
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let exp: i32 = exp.parse().expect("float exponent");
            let sign = if exp < 0 { '-' } else { '+' };
            format!("{mantissa}e{sign}{:02}", exp.abs())
        }
        None => s,
    }
}

/// A header plus rows; `None` cells are written empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (k, cell) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                if let Some(v) = cell {
                    out.push_str(&fmt_sci(*v));
                }
            }
            out.push('\n');
        }
        out
    }
}

fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Plot script for `csv`, written next to it as `<csv>.gp`.
pub fn gnuplot_script(cfg: &ScenarioConfig, csv: &Path) -> String {
    let name = csv.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set terminal pngcairo size 800,600");
    let _ = writeln!(s, "set output '{name}.png'");
    match cfg.scenario {
        Scenario::Fig3 => {
            let _ = writeln!(s, "set xlabel 'T'\nset ylabel 'D'\nset zlabel 'Q'");
            let _ = writeln!(s, "set dgrid3d {},{}", cfg.d_range.count(), cfg.t_range.count());
            let _ = writeln!(s, "splot '{name}' using 1:2:3 with lines");
        }
        Scenario::Fig2 => {
            let _ = writeln!(s, "set xlabel 't'\nset ylabel 'Q'");
            let _ = writeln!(s, "plot '{name}' using 1:2 with lines, '' using 1:3 with lines dashtype 2");
        }
        _ => {
            let _ = writeln!(s, "set xlabel 't'");
            let _ = writeln!(s, "plot '{name}' using 1:10 with lines, '' using 1:11 with lines dashtype 2");
        }
    }
    s
}

/// Parameters and the settings that are tool defaults rather than inputs.
pub fn metadata(cfg: &ScenarioConfig, table: &Table) -> serde_json::Value {
    let mut tool_defaults = Vec::new();
    if cfg.scenario == Scenario::Fig3 {
        tool_defaults.push("t_range and d_range grid bounds");
    }
    tool_defaults.push("measurement optimizer: 64x64 grid with golden-section refinement");
    let mut meta = json!({
        "scenario": cfg.scenario,
        "model": { "j": cfg.model.j, "d": cfg.model.d, "omega": cfg.model.omega },
        "columns": table.header,
        "rows": table.rows.len(),
        "tool_defaults": tool_defaults,
        "version": env!("CARGO_PKG_VERSION"),
    });
    let extra = if cfg.scenario == Scenario::Fig3 {
        json!({ "thermal_grid": { "t_range": cfg.t_range.to_string(), "d_range": cfg.d_range.to_string() } })
    } else {
        json!({
            "bath": { "nbar": cfg.bath.nbar, "gamma": cfg.bath.gamma },
            "initial": cfg.initial.to_string(),
            "method": cfg.method,
            "time_grid": { "t_max": cfg.t_max, "steps": cfg.steps },
        })
    };
    if let (Some(m), serde_json::Value::Object(e)) = (meta.as_object_mut(), extra) {
        m.extend(e);
    }
    meta
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| AppError::io(path, e))?;
    f.write_all(text.as_bytes()).and_then(|_| f.flush()).map_err(|e| AppError::io(path, e))
}

/// Writes the CSV, its metadata and optionally the plot script. Without an
/// output path the CSV goes to stdout.
pub fn emit(cfg: &ScenarioConfig, table: &Table) -> Result<()> {
    let csv = table.to_csv();
    let Some(out) = &cfg.out else {
        let mut stdout = std::io::stdout().lock();
        return stdout.write_all(csv.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| AppError::io("<stdout>", e));
    };
    write_file(out, &csv)?;
    let meta = serde_json::to_string_pretty(&metadata(cfg, table)).expect("metadata serializes");
    write_file(&sidecar(out, ".meta.json"), &(meta + "\n"))?;
    if cfg.emit_gnuplot {
        write_file(&sidecar(out, ".gp"), &gnuplot_script(cfg, out))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_sci(1.0), "1.00000000000e+00");
        assert_eq!(fmt_sci(-0.0), "0.00000000000e+00");
        assert_eq!(fmt_sci(-1.25e-3), "-1.25000000000e-03");
        assert_eq!(fmt_sci(6.02214076e123), "6.02214076000e+123");
        assert_eq!(fmt_sci(0.1 + 0.2), "3.00000000000e-01");
    }

    #[test]
    fn blank_cells() {
        let t = Table { header: vec!["a", "b"], rows: vec![vec![Some(1.0), None]] };
        assert_eq!(t.to_csv(), "a,b\n1.00000000000e+00,\n");
        assert_eq!(t.column("b"), Some(vec![None]));
        assert_eq!(t.column("c"), None);
    }

    #[test]
    fn sidecar_names() {
        assert_eq!(sidecar(Path::new("out/run.csv"), ".gp"), PathBuf::from("out/run.csv.gp"));
    }
}
