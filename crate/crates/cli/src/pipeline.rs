//! Per-point analyses, the resumable task runner and sweep tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use fockvortex::{
    apply_beam_splitter, count_nodal_rings, count_vortices, evaluate_field, make_tmss,
    negativity_volume_with, state_log_negativity, wigner_slice, Coord, Mode, QuadratureField,
    QuadratureGrid, SlicePlane, SqueezeParams, TwoModeState, VortexReport, WignerOperator,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{OutputKind, Settings, SweepConfig};
use crate::error::{CliError, Result};
use crate::manifest::{hash_json, RunManifest, TaskRecord, TaskStatus, TOOL_VERSION};
use crate::output::{to_json_bytes, write_atomic, write_if_changed};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub r: f64,
    pub n: usize,
}

impl Point {
    pub fn id(&self) -> String {
        format!("r={},n={}", self.r, self.n)
    }

    /// File-name fragment.
    pub fn tag(&self) -> String {
        format!("r{}_n{}", self.r, self.n)
    }

    pub fn params(&self) -> Result<SqueezeParams> {
        Ok(SqueezeParams::new(self.r, self.n)?)
    }
}

/// Splitter input: the truncated squeezed state, or `|n, n⟩`.
pub fn input_state(point: Point, fock_input: bool) -> Result<TwoModeState> {
    if fock_input {
        Ok(TwoModeState::fock(point.n, point.n))
    } else {
        Ok(make_tmss(point.params()?)?)
    }
}

pub fn output_state(point: Point, fock_input: bool) -> Result<TwoModeState> {
    Ok(apply_beam_splitter(&input_state(point, fock_input)?))
}

/// The two slice planes of the figure panels.
pub fn figure_planes() -> [(SlicePlane, &'static str); 2] {
    [
        (
            SlicePlane::new((Coord::Y, 0.0), (Coord::Px, 0.0)).expect("distinct"),
            "y0_px0",
        ),
        (
            SlicePlane::new((Coord::X, 0.0), (Coord::Py, 0.0)).expect("distinct"),
            "x0_py0",
        ),
    ]
}

#[derive(Debug, Serialize)]
pub struct VortexSummary {
    pub r: f64,
    pub n: usize,
    pub input: &'static str,
    pub grid: QuadratureGrid,
    pub amplitude_floor: f64,
    pub nodal_rings: Option<usize>,
    #[serde(flatten)]
    pub report: VortexReport,
}

#[derive(Debug, Serialize)]
struct LogNegSummary {
    r: f64,
    n: usize,
    before: fockvortex::EntanglementReport,
    after: fockvortex::EntanglementReport,
    ratio: Option<f64>,
}

/// Result of one task before it is stamped with timing.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskOutcome {
    pub status: TaskStatus,
    pub outputs: Vec<String>,
    pub summary: BTreeMap<String, f64>,
    pub message: Option<String>,
}

impl Default for TaskOutcome {
    fn default() -> Self {
        TaskOutcome {
            status: TaskStatus::Ok,
            outputs: Vec::new(),
            summary: BTreeMap::new(),
            message: None,
        }
    }
}

impl TaskOutcome {
    fn fail(&mut self, status: TaskStatus, message: String) {
        let rank = |s: TaskStatus| match s {
            TaskStatus::Ok => 0,
            TaskStatus::NonConverged => 1,
            TaskStatus::Error => 2,
            TaskStatus::InvariantFailed => 3,
        };
        if rank(status) > rank(self.status) {
            self.status = status;
        }
        self.message = Some(match self.message.take() {
            Some(m) => format!("{m}; {message}"),
            None => message,
        });
    }

    fn record_error(&mut self, kind: OutputKind, e: CliError) {
        let status = match e {
            CliError::NonConvergence(_) => TaskStatus::NonConverged,
            CliError::Invariant(_) => TaskStatus::InvariantFailed,
            _ => TaskStatus::Error,
        };
        self.fail(status, format!("{}: {e}", kind.name()));
    }

    fn write(&mut self, dir: &Path, name: String, contents: &[u8]) -> Result<()> {
        write_atomic(&dir.join(&name), contents)?;
        self.outputs.push(name);
        Ok(())
    }
}

/// Runs every requested analysis at one point and writes its files.
pub fn run_point(
    point: Point,
    outputs: &BTreeSet<OutputKind>,
    settings: &Settings,
    dir: &Path,
) -> TaskOutcome {
    let mut out = TaskOutcome::default();
    let mut field: Option<QuadratureField> = None;
    for &kind in outputs {
        if let Err(e) = run_kind(kind, point, settings, dir, &mut field, &mut out) {
            out.record_error(kind, e);
        }
    }
    out
}

fn run_kind(
    kind: OutputKind,
    point: Point,
    settings: &Settings,
    dir: &Path,
    field: &mut Option<QuadratureField>,
    out: &mut TaskOutcome,
) -> Result<()> {
    let tag = point.tag();
    match kind {
        OutputKind::Field | OutputKind::Vortices => {
            if field.is_none() {
                *field = Some(evaluate_field(
                    &output_state(point, settings.fock_input)?,
                    &settings.grid,
                ));
            }
            let f = field.as_ref().expect("computed above");
            if kind == OutputKind::Field {
                out.write(dir, format!("field_{tag}.csv"), f.to_csv().as_bytes())?;
            } else {
                let report = count_vortices(f, settings.amplitude_floor)?;
                let rings = count_nodal_rings(f, settings.amplitude_floor);
                out.summary
                    .insert("vortex_count".into(), report.count as f64);
                out.summary
                    .insert("total_charge".into(), report.total_charge as f64);
                if let Some(k) = rings {
                    out.summary.insert("nodal_rings".into(), k as f64);
                }
                let summary = VortexSummary {
                    r: point.r,
                    n: point.n,
                    input: if settings.fock_input {
                        "fock"
                    } else {
                        "squeezed"
                    },
                    grid: settings.grid,
                    amplitude_floor: settings.amplitude_floor,
                    nodal_rings: rings,
                    report,
                };
                out.write(
                    dir,
                    format!("vortices_{tag}.json"),
                    &to_json_bytes(&summary),
                )?;
            }
        }
        OutputKind::WignerSlice => {
            let state = output_state(point, settings.fock_input)?;
            for (plane, name) in figure_planes() {
                let slice = wigner_slice(&state, &plane, &settings.slice_grid)?;
                out.summary.insert(format!("slice_min_{name}"), slice.min());
                out.write(
                    dir,
                    format!("slice_{tag}_{name}.csv"),
                    slice.to_csv().as_bytes(),
                )?;
            }
        }
        OutputKind::Nv => {
            let state = output_state(point, settings.fock_input)?;
            let res = negativity_volume_with(
                &WignerOperator::from_state(&state),
                state.cutoff(),
                &settings.rule,
                settings.tol,
                settings.limits,
            )?;
            out.summary.insert("nv".into(), res.volume);
            out.summary
                .insert("nv_converged".into(), if res.converged { 1.0 } else { 0.0 });
            out.summary
                .insert("normalization".into(), res.normalization_check);
            out.write(dir, format!("nv_{tag}.json"), &to_json_bytes(&res))?;
            if !res.converged || res.under_resolved {
                return Err(CliError::NonConvergence(format!(
                    "negativity volume not converged (history {:?}, ∫W = {})",
                    res.resolution_history, res.normalization_check
                )));
            }
        }
        OutputKind::Logneg => {
            let input = input_state(point, settings.fock_input)?;
            let before = state_log_negativity(&input, Mode::A)?;
            let after = state_log_negativity(&apply_beam_splitter(&input), Mode::A)?;
            let ratio =
                (before.log_negativity > 0.0).then(|| after.log_negativity / before.log_negativity);
            out.summary.insert("l_before".into(), before.log_negativity);
            out.summary.insert("l_after".into(), after.log_negativity);
            if let Some(q) = ratio {
                out.summary.insert("ratio".into(), q);
            }
            let s = LogNegSummary {
                r: point.r,
                n: point.n,
                before,
                after,
                ratio,
            };
            out.write(dir, format!("logneg_{tag}.json"), &to_json_bytes(&s))?;
        }
    }
    Ok(())
}

/// A unit of work with a stable identity for resumption.
pub struct Job {
    pub id: String,
    pub hash: String,
    pub run: Box<dyn Fn(&Path) -> TaskOutcome + Send + Sync>,
}

/// Runs `jobs` in parallel, reusing records of unchanged finished jobs
/// from a manifest already in `dir`.
pub fn execute(command: &str, config_hash: String, jobs: Vec<Job>, dir: &Path) -> RunManifest {
    let previous: BTreeMap<String, TaskRecord> = RunManifest::load(dir)
        .map(|m| m.tasks.into_iter().map(|t| (t.id.clone(), t)).collect())
        .unwrap_or_default();
    let reusable = |job: &Job| -> Option<TaskRecord> {
        let rec = previous.get(&job.id)?;
        let intact = rec.outputs.iter().all(|o| {
            std::fs::metadata(dir.join(o))
                .map(|m| m.len() > 0)
                .unwrap_or(false)
        });
        (rec.task_hash == job.hash && rec.status == TaskStatus::Ok && intact).then(|| rec.clone())
    };
    let tasks = jobs
        .par_iter()
        .map(|job| {
            reusable(job).unwrap_or_else(|| {
                let start = Instant::now();
                let outcome = (job.run)(dir);
                TaskRecord {
                    id: job.id.clone(),
                    task_hash: job.hash.clone(),
                    status: outcome.status,
                    outputs: outcome.outputs,
                    wall_time_s: start.elapsed().as_secs_f64(),
                    message: outcome.message,
                    summary: outcome.summary,
                }
            })
        })
        .collect();
    let mut manifest = RunManifest::new(command, config_hash);
    manifest.tasks = tasks;
    manifest
}

/// Writes the tables, lists them in the manifest, then writes the manifest.
pub fn finish(manifest: &mut RunManifest, dir: &Path, tables: Vec<(String, String)>) -> Result<()> {
    for (name, contents) in tables {
        write_if_changed(&dir.join(&name), contents.as_bytes())?;
        manifest.tables.push(name);
    }
    manifest.write(dir)?;
    Ok(())
}

pub fn points(cfg: &SweepConfig) -> Vec<Point> {
    cfg.r_values
        .iter()
        .flat_map(|&r| cfg.n_values.iter().map(move |&n| Point { r, n }))
        .collect()
}

pub fn jobs_for(cfg: &SweepConfig) -> Result<Vec<Job>> {
    let settings = cfg.settings()?;
    Ok(points(cfg)
        .into_iter()
        .map(|p| {
            let outputs = cfg.outputs.clone();
            let hash = hash_json(&serde_json::json!({
                "tool_version": TOOL_VERSION,
                "point": p,
                "outputs": outputs,
                "settings": settings,
            }));
            Job {
                id: p.id(),
                hash,
                run: Box::new(move |dir| run_point(p, &outputs, &settings, dir)),
            }
        })
        .collect())
}

fn cell(summary: &BTreeMap<String, f64>, key: &str) -> String {
    summary.get(key).map(|v| v.to_string()).unwrap_or_default()
}

/// Table with one row per point; missing values are empty cells.
pub fn summary_table(manifest: &RunManifest, cfg: &SweepConfig, columns: &[&str]) -> String {
    let by_id: BTreeMap<&str, &TaskRecord> =
        manifest.tasks.iter().map(|t| (t.id.as_str(), t)).collect();
    let mut out = String::new();
    let _ = writeln!(out, "r,n,{}", columns.join(","));
    for p in points(cfg) {
        let empty = BTreeMap::new();
        let summary = by_id
            .get(p.id().as_str())
            .map(|t| &t.summary)
            .unwrap_or(&empty);
        let cells: Vec<String> = columns.iter().map(|c| cell(summary, c)).collect();
        let _ = writeln!(out, "{},{},{}", p.r, p.n, cells.join(","));
    }
    out
}

pub const SWEEP_TABLE: &str = "sweep.csv";

/// Executes a sweep config into its output directory.
pub fn run_sweep(cfg: &SweepConfig) -> Result<RunManifest> {
    cfg.validate()?;
    let dir = cfg.output_dir.as_path();
    let mut manifest = execute("sweep", cfg.config_hash(), jobs_for(cfg)?, dir);
    let table = summary_table(&manifest, cfg, &["l_before", "l_after", "ratio", "nv"]);
    finish(&mut manifest, dir, vec![(SWEEP_TABLE.to_string(), table)])?;
    Ok(manifest)
}
