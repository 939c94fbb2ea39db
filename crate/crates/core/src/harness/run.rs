use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use thiserror::Error;

use crate::analysis::{
    ambiguity_report, flop_family, linspace, optimize_scramble_area, phi_grid, sdbv, sdbv_projection_xz,
    FlopFamily, FlopSequence,
};
use crate::expsim::{damped_sinusoid, fit_damped_sinusoid, run_trials, TrialSequence};
use crate::protocol::{decode_choice, encode_choice, run_secure_choice, secrecy_check, DECODE_THRESHOLD};

use super::scenario::{Format, Mode, Scenario};

/// Number of `φ_S` samples used for the secrecy check in secure-choice runs.
const SECRECY_SAMPLES: usize = 64;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{mode} scenario `{name}`: {source}")]
    Model {
        mode: Mode,
        name: String,
        #[source]
        source: crate::Error,
    },
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Files written and the JSON report of one run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    pub report: Value,
    /// Set by fit runs whose solver hit its iteration cap.
    pub converged: bool,
}

/// A numeric table, written as CSV or as a JSON array of row objects.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj = self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), json!(v))).collect();
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("table serializes");
        s.push('\n');
        s
    }
}

/// Writes `contents` to `path` through a temporary file in the same directory.
fn write_atomic(path: &Path, contents: &str) -> Result<(), RunError> {
    let io = |source| RunError::Io { path: path.to_path_buf(), source };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn long_format(family: &FlopFamily, delta_w: f64) -> Table {
    let period = std::f64::consts::TAU / delta_w;
    let mut rows = Vec::with_capacity(family.t.len() * family.phi_s.len());
    for (phi, row) in family.phi_s.iter().zip(&family.rows) {
        for (&t, &p) in family.t.iter().zip(row) {
            rows.push(vec![t, t / period, *phi, p]);
        }
    }
    Table { name: "flop", columns: &["T_seconds", "T_normalized", "phi_S", "P_e"], rows }
}

struct Produced {
    tables: Vec<Table>,
    summary: Value,
    converged: bool,
}

fn execute(s: &Scenario) -> crate::Result<Produced> {
    let frames = s.frame_set();
    let t_grid = s.t_grid();
    let theta_s = PI * s.protocol.scramble_area_pi;
    let recorded = s.recorded.vector();
    let mut converged = true;
    let (tables, summary) = match s.mode {
        Mode::Normal => {
            let family = flop_family(&FlopSequence::Normal, &t_grid, &[frames.phi_s], &frames)?;
            let p = &family.rows[0];
            let summary = json!({
                "points": p.len(),
                "min_p_e": p.iter().cloned().fold(f64::INFINITY, f64::min),
                "max_p_e": p.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            });
            (vec![long_format(&family, frames.delta_w)], summary)
        }
        Mode::Scrambled | Mode::Retrieved => {
            let kind = if s.mode == Mode::Scrambled {
                super::scenario::FlopKind::Scrambled
            } else {
                super::scenario::FlopKind::Retrieved
            };
            let seq = s.flop_sequence(kind);
            let family = flop_family(&seq, &t_grid, &phi_grid(s.grid.phi_samples), &frames)?;
            let spreads = family.spreads();
            let mut summary = json!({
                "phi_samples": family.phi_s.len(),
                "points": family.t.len(),
                "max_spread": spreads.iter().cloned().fold(0.0, f64::max),
                "min_spread": spreads.iter().cloned().fold(f64::INFINITY, f64::min),
            });
            if s.mode == Mode::Retrieved {
                let shifted: Vec<f64> = t_grid.iter().map(|t| seq.total_interval(*t)).collect();
                let normal = flop_family(&FlopSequence::Normal, &shifted, &[0.0], &frames)?;
                let reference = crate::analysis::FlopCurve { t: t_grid.clone(), p_e: normal.rows[0].clone() };
                summary["max_deviation_from_normal"] = json!(family.max_deviation_from(&reference));
            }
            (vec![long_format(&family, frames.delta_w)], summary)
        }
        Mode::Sdbv => {
            let dist = sdbv(recorded, theta_s, s.grid.phi_samples)?;
            let proj = sdbv_projection_xz(recorded, theta_s, PI * s.wait_phase_pi, s.grid.phi_samples)?;
            let sdbv_rows = dist.phi_s.iter().zip(&dist.points).map(|(&p, v)| vec![p, v.x, v.y, v.z]).collect();
            let proj_rows = proj.iter().map(|q| vec![q.phi_s, q.x, q.z]).collect();
            let summary = json!({
                "samples": dist.points.len(),
                "max_abs_z": dist.points.iter().map(|v| v.z.abs()).fold(0.0, f64::max),
            });
            let tables = vec![
                Table { name: "sdbv", columns: &["phi_S", "x", "y", "z"], rows: sdbv_rows },
                Table { name: "projection", columns: &["phi_S", "x", "z"], rows: proj_rows },
            ];
            (tables, summary)
        }
        Mode::AmbiguitySweep => {
            let thetas = linspace(PI * s.sweep.start_pi, PI * s.sweep.stop_pi, s.sweep.points);
            let rows = thetas
                .iter()
                .map(|&th| Ok(vec![th, ambiguity_report(recorded, th, &t_grid, s.grid.phi_samples, &frames)?.aggregate]))
                .collect::<crate::Result<Vec<_>>>()?;
            let best = rows.iter().fold(&rows[0], |b, r| if r[1] > b[1] { r } else { b });
            let summary = json!({ "points": rows.len(), "best_theta_s": best[0], "best_ambiguity": best[1] });
            (vec![Table { name: "ambiguity", columns: &["theta_S", "A"], rows }], summary)
        }
        Mode::Optimize => {
            let opt = optimize_scramble_area(recorded, &t_grid, s.grid.phi_samples, &frames, s.tolerance)?;
            let summary = json!({
                "theta_s": opt.theta,
                "theta_s_pi": opt.theta / PI,
                "ambiguity": opt.ambiguity,
                "plateau": [opt.plateau.0, opt.plateau.1],
            });
            (Vec::new(), summary)
        }
        Mode::SecureChoice => {
            let choice = s.choice.expect("validated secure-choice scenario has a choice");
            let config = s.protocol_config();
            let p_e = run_secure_choice(choice, frames.phi_s, &config)?;
            let decoded = decode_choice(p_e, DECODE_THRESHOLD)?;
            let gap = secrecy_check(&config, SECRECY_SAMPLES)?;
            let summary = json!({
                "choice": choice,
                "write_area_pi": encode_choice(choice) / PI,
                "t3": config.t3,
                "p_e": p_e,
                "decoded": decoded,
                "secrecy_gap": gap,
            });
            (Vec::new(), summary)
        }
        Mode::Fit => {
            let noise = s.noise_model().expect("validated fit scenario has a noise model");
            let seq = TrialSequence { flop: s.flop_sequence(s.trials.sequence), frames, phase: s.trials.phase };
            let stats = run_trials(&seq, &noise, s.trials.count, &t_grid)?;
            let fit = fit_damped_sinusoid(&stats.t, &stats.mean, None)?;
            converged = fit.converged;
            let period = std::f64::consts::TAU / frames.delta_w;
            let rows = (0..stats.t.len())
                .map(|j| {
                    let t = stats.t[j];
                    vec![t, t / period, stats.mean[j], stats.std[j], damped_sinusoid(&fit.params, t)]
                })
                .collect();
            let summary = json!({
                "trials": stats.k,
                "fit": fit,
                "omega_over_delta_w": fit.params.omega / frames.delta_w,
            });
            (vec![Table { name: "trials", columns: &["T_seconds", "T_normalized", "mean", "std", "fit"], rows }], summary)
        }
    };
    Ok(Produced { tables, summary, converged })
}

/// Runs a validated scenario and writes its outputs into `out_dir`.
///
/// Tables go to `<name>.csv` or `<name>.json` depending on the output format;
/// `report.json` always carries the resolved scenario, warnings and a summary.
pub fn run_scenario(s: &Scenario, out_dir: &Path) -> Result<RunOutcome, RunError> {
    let produced =
        execute(s).map_err(|source| RunError::Model { mode: s.mode, name: s.name.clone(), source })?;
    let mut files = Vec::new();
    for table in &produced.tables {
        let (ext, body) = match s.output.format {
            Format::Csv => ("csv", table.to_csv()),
            Format::Json => ("json", table.to_json()),
        };
        let path = out_dir.join(format!("{}.{ext}", table.name));
        write_atomic(&path, &body)?;
        files.push(path);
    }
    let scenario: Value = serde_json::from_str(&s.to_json()).expect("scenario json is valid");
    let report = json!({
        "mode": s.mode,
        "name": s.name,
        "scenario": scenario,
        "warnings": s.warnings,
        "summary": produced.summary,
        "converged": produced.converged,
        "files": produced.tables.iter().map(|t| t.name).collect::<Vec<_>>(),
    });
    let path = out_dir.join("report.json");
    let mut body = serde_json::to_string_pretty(&report).expect("report serializes");
    body.push('\n');
    write_atomic(&path, &body)?;
    files.push(path);
    Ok(RunOutcome { files, report, converged: produced.converged })
}
