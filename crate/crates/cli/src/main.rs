use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fockvortex::{
    closed_form_diagnostic, count_nodal_rings, count_vortices, diagonal_form_comparison,
    entanglement_ratio, evaluate_field, negativity_volume_with, state_log_negativity, wigner_slice,
    BeamSplitter, Coord, Mode, PrefactorConvention, QuadratureGrid, RefinementLimits, SlicePlane,
    Tolerances, WignerOperator, WignerRule,
};
use fockvortex_cli::config::{default_slice_grid, SweepConfig, DEFAULT_TOL};
use fockvortex_cli::error::{CliError, Result, EXIT_INVARIANT};
use fockvortex_cli::figures::{run_figure, FigureId, FigureOverrides};
use fockvortex_cli::manifest::RunManifest;
use fockvortex_cli::output::{to_json_bytes, write_atomic};
use fockvortex_cli::pipeline::{input_state, output_state, run_sweep, Point, VortexSummary};
use fockvortex_cli::{configure_threads, selftest};

#[derive(Parser)]
#[command(
    name = "fockvortex",
    version,
    about = "Vortex states from squeezed light through a 50:50 beam splitter"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct PointArgs {
    /// Squeezing parameter.
    #[arg(long, short = 'r')]
    r: f64,
    /// Fock cutoff `N` of the squeezed input.
    #[arg(long, short = 'n')]
    n: usize,
    /// Use `|N, N⟩` as the splitter input.
    #[arg(long)]
    fock_input: bool,
}

impl PointArgs {
    fn point(&self) -> Point {
        Point {
            r: self.r,
            n: self.n,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Stage {
    Input,
    Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Box,
    GaussHermite,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    A,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    PerPair,
    Literal,
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

#[derive(Subcommand)]
enum Command {
    /// Two-mode wavefunction on a quadrature grid, as CSV.
    Field {
        #[command(flatten)]
        point: PointArgs,
        /// `min:max:n[,min:max:n]`.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Phase singularities of the wavefunction.
    Vortices {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long)]
        amplitude_floor: Option<f64>,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Wigner function on a 2-D plane through phase space, as CSV.
    WignerSlice {
        #[command(flatten)]
        point: PointArgs,
        /// Two fixed coordinates, e.g. `y=0,px=0`.
        #[arg(long, default_value = "y=0,px=0", allow_hyphen_values = true)]
        plane: String,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long, value_enum, default_value = "output")]
        stage: Stage,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Wigner negativity volume with adaptive refinement.
    Nv {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value = "box")]
        scheme: Scheme,
        /// Points per axis of the first pass.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        max_order: Option<usize>,
        #[arg(long, value_enum, default_value = "output")]
        stage: Stage,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Logarithmic negativity of one stage.
    Logneg {
        #[command(flatten)]
        point: PointArgs,
        /// Transposed mode.
        #[arg(long, value_enum, default_value = "a")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "output")]
        stage: Stage,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Log-negativity after the splitter over the value before it.
    Ratio {
        #[arg(long, short = 'r')]
        r: f64,
        #[arg(long, short = 'n')]
        n: usize,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Closed-form output amplitudes against the operator expansion.
    ClosedForm {
        #[arg(long, short = 'r')]
        r: f64,
        #[arg(long, short = 'n')]
        n: usize,
        #[arg(long, value_enum, default_value = "per-pair")]
        convention: Convention,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Diagonal `(Q₀, Q₁)` form of the Wigner function against the full expansion.
    DiagonalForm {
        #[arg(long, short = 'r')]
        r: f64,
        #[arg(long, short = 'n')]
        n: usize,
        #[arg(long, default_value_t = 17)]
        lattice: usize,
        #[arg(long, default_value_t = 2.5)]
        half_width: f64,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Regenerate the data behind one figure.
    Figure {
        #[arg(value_enum)]
        id: Figure,
        #[arg(long, default_value = "fockvortex-out")]
        out: PathBuf,
        /// Comma-separated squeezing values.
        #[arg(long, value_delimiter = ',')]
        r: Option<Vec<f64>>,
        /// Comma-separated cutoffs.
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        slice_grid: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        fock_input: bool,
    },
    /// Run a JSON sweep config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invariant checks at small cutoffs.
    Selftest {
        /// Swap in a splitter with the wrong phase.
        #[arg(long)]
        inject_fault: bool,
        /// Directory for a manifest of the checks.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, contents: &[u8]) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, contents),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(contents) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r,
            }
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })
        }
    }
}

fn grid_arg(field: &str, text: Option<&str>, default: QuadratureGrid) -> Result<QuadratureGrid> {
    match text {
        Some(s) => s
            .parse()
            .map_err(|e: fockvortex::CoreError| CliError::usage(field, e.to_string())),
        None => Ok(default),
    }
}

fn parse_plane(text: &str) -> Result<SlicePlane> {
    let fixed: Vec<(Coord, f64)> = text
        .split(',')
        .map(|part| {
            let (c, v) = part
                .split_once('=')
                .ok_or_else(|| CliError::usage("plane", format!("`{part}` is not coord=value")))?;
            let c: Coord = c
                .trim()
                .parse()
                .map_err(|e: fockvortex::CoreError| CliError::usage("plane", e.to_string()))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::usage("plane", format!("`{v}` is not a number")))?;
            Ok((c, v))
        })
        .collect::<Result<_>>()?;
    match fixed.as_slice() {
        [a, b] => Ok(SlicePlane::new(*a, *b)?),
        _ => Err(CliError::usage(
            "plane",
            "expected exactly two fixed coordinates",
        )),
    }
}

fn stage_state(point: &PointArgs, stage: Stage) -> Result<fockvortex::TwoModeState> {
    match stage {
        Stage::Input => input_state(point.point(), point.fock_input),
        Stage::Output => output_state(point.point(), point.fock_input),
    }
}

fn report_manifest(m: &RunManifest) -> Result<i32> {
    for t in m.failures() {
        eprintln!(
            "{}: {:?}: {}",
            t.id,
            t.status,
            t.message.as_deref().unwrap_or("")
        );
    }
    eprintln!("{} tasks, {} failed", m.tasks.len(), m.failures().count());
    Ok(m.exit_code())
}

fn run(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Field { point, grid, out } => {
            let grid = grid_arg("grid", grid.as_deref(), QuadratureGrid::default())?;
            let field = evaluate_field(&output_state(point.point(), point.fock_input)?, &grid);
            emit(out.as_deref(), field.to_csv().as_bytes())?;
        }
        Command::Vortices {
            point,
            grid,
            amplitude_floor,
            out,
        } => {
            let grid = grid_arg("grid", grid.as_deref(), QuadratureGrid::default())?;
            let floor = amplitude_floor.unwrap_or(Tolerances::DEFAULT.amplitude_floor);
            let field = evaluate_field(&output_state(point.point(), point.fock_input)?, &grid);
            let summary = VortexSummary {
                r: point.r,
                n: point.n,
                input: if point.fock_input { "fock" } else { "squeezed" },
                grid,
                amplitude_floor: floor,
                nodal_rings: count_nodal_rings(&field, floor),
                report: count_vortices(&field, floor)?,
            };
            emit(out.as_deref(), &to_json_bytes(&summary))?;
        }
        Command::WignerSlice {
            point,
            plane,
            grid,
            stage,
            out,
        } => {
            let plane = parse_plane(&plane)?;
            let grid = grid_arg("grid", grid.as_deref(), default_slice_grid())?;
            let slice = wigner_slice(&stage_state(&point, stage)?, &plane, &grid)?;
            emit(out.as_deref(), slice.to_csv().as_bytes())?;
        }
        Command::Nv {
            point,
            tol,
            scheme,
            order,
            max_order,
            stage,
            out,
        } => {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(CliError::usage("tol", "must be positive"));
            }
            let mut rule = match scheme {
                Scheme::Box => WignerRule::default(),
                Scheme::GaussHermite => WignerRule::gauss_hermite(24),
            };
            if let Some(o) = order {
                rule = rule.with_order(o);
            }
            let mut limits = RefinementLimits::default();
            if let Some(m) = max_order {
                limits.max_order = m;
            }
            let state = stage_state(&point, stage)?;
            let res = negativity_volume_with(
                &WignerOperator::from_state(&state),
                state.cutoff(),
                &rule,
                tol,
                limits,
            )?;
            emit(out.as_deref(), &to_json_bytes(&res))?;
            if !res.converged || res.under_resolved {
                return Err(CliError::NonConvergence(format!(
                    "negativity volume not converged to {tol}: history {:?}",
                    res.resolution_history
                )));
            }
        }
        Command::Logneg {
            point,
            mode,
            stage,
            out,
        } => {
            let mode = match mode {
                ModeArg::A => Mode::A,
                ModeArg::B => Mode::B,
            };
            let rep = state_log_negativity(&stage_state(&point, stage)?, mode)?;
            emit(out.as_deref(), &to_json_bytes(&rep))?;
        }
        Command::Ratio { r, n, out } => {
            let ratio = entanglement_ratio(Point { r, n }.params()?)?;
            emit(out.as_deref(), &to_json_bytes(&ratio))?;
        }
        Command::ClosedForm {
            r,
            n,
            convention,
            out,
        } => {
            let convention = match convention {
                Convention::PerPair => PrefactorConvention::PerPair,
                Convention::Literal => PrefactorConvention::Literal,
            };
            let diag = closed_form_diagnostic(
                Point { r, n }.params()?,
                convention,
                BeamSplitter::STANDARD,
                &Tolerances::DEFAULT,
            )?;
            emit(out.as_deref(), &to_json_bytes(&diag))?;
            if !diag.agrees {
                eprintln!(
                    "closed form ({convention:?}) deviates by {:.3e} at {:?}",
                    diag.max_deviation, diag.worst_pair
                );
                if convention == PrefactorConvention::PerPair {
                    return Ok(EXIT_INVARIANT);
                }
            }
        }
        Command::DiagonalForm {
            r,
            n,
            lattice,
            half_width,
            out,
        } => {
            if !(half_width > 0.0 && half_width.is_finite()) {
                return Err(CliError::usage("half_width", "must be positive"));
            }
            let cmp = diagonal_form_comparison(Point { r, n }.params()?, lattice, half_width)?;
            emit(out.as_deref(), &to_json_bytes(&cmp))?;
        }
        Command::Figure {
            id,
            out,
            r,
            n,
            grid,
            slice_grid,
            tol,
            fock_input,
        } => {
            let id = match id {
                Figure::Fig1 => FigureId::Fig1,
                Figure::Fig2 => FigureId::Fig2,
                Figure::Fig3 => FigureId::Fig3,
                Figure::Fig4 => FigureId::Fig4,
                Figure::Fig5 => FigureId::Fig5,
            };
            let overrides = FigureOverrides {
                r_values: r,
                n_values: n,
                grid,
                slice_grid,
                tol,
                fock_input,
            };
            return report_manifest(&run_figure(id, &overrides, out)?);
        }
        Command::Sweep { config, out } => {
            let mut cfg = SweepConfig::from_file(&config)?;
            if let Some(dir) = out {
                cfg.output_dir = dir;
            }
            return report_manifest(&run_sweep(&cfg)?);
        }
        Command::Selftest { inject_fault, out } => {
            let results = selftest::run(inject_fault);
            for c in &results {
                println!("{}", c.line());
            }
            let manifest = selftest::to_manifest(&results, inject_fault);
            if let Some(dir) = out {
                manifest.write(&dir)?;
            }
            return Ok(manifest.exit_code());
        }
    }
    Ok(0)
}

/// Parses `args` and runs the command, returning the process exit code.
fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    configure_threads()
        .and_then(|_| run(cli.command))
        .unwrap_or_else(|e| {
            eprintln!("fockvortex: {e}");
            e.exit_code()
        })
}

fn main() -> ExitCode {
    ExitCode::from(dispatch(std::env::args_os()) as u8)
}

#[cfg(test)]
mod tests {
    use std::fs;

    use fockvortex_cli::manifest::{RunManifest, TaskStatus};

    use super::*;

    fn fv(args: &[&str]) -> i32 {
        dispatch(std::iter::once("fockvortex").chain(args.iter().copied()))
    }

    fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
        let mut files: Vec<_> = fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.file_name().unwrap() != "manifest.json")
            .map(|p| {
                (
                    p.file_name().unwrap().to_string_lossy().into_owned(),
                    fs::read(&p).unwrap(),
                )
            })
            .collect();
        files.sort();
        files
    }

    const SWEEP: &str = r#"{
  "r_values": [0.3, 0.9],
  "n_values": [2],
  "outputs": ["logneg", "vortices", "wigner-slice"],
  "grid": "-4:4:81",
  "slice_grid": "-2:2:21"
}"#;

    fn sweep_dir(body: &str) -> (tempfile::TempDir, String, PathBuf) {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = tmp.path().join("sweep.json");
        fs::write(&cfg, body).unwrap();
        let out = tmp.path().join("out");
        let cfg = cfg.to_string_lossy().into_owned();
        (tmp, cfg, out)
    }

    #[test]
    fn sweep_rerun_is_idempotent() {
        let (_tmp, cfg, out) = sweep_dir(SWEEP);
        let o = out.to_str().unwrap();
        assert_eq!(fv(&["sweep", "--config", &cfg, "--out", o]), 0);
        let manifest = fs::read(out.join("manifest.json")).unwrap();
        let modified = fs::metadata(out.join("manifest.json"))
            .unwrap()
            .modified()
            .unwrap();
        let files = snapshot(&out);

        assert_eq!(fv(&["sweep", "--config", &cfg, "--out", o]), 0);
        assert_eq!(fs::read(out.join("manifest.json")).unwrap(), manifest);
        assert_eq!(
            fs::metadata(out.join("manifest.json"))
                .unwrap()
                .modified()
                .unwrap(),
            modified
        );
        assert_eq!(snapshot(&out), files);

        let m = RunManifest::load(&out).unwrap();
        assert_eq!(m.tasks.len(), 2);
        assert!(m.tasks.iter().all(|t| t.status == TaskStatus::Ok));
        assert!(m.missing_outputs(&out).is_empty());
    }

    #[test]
    fn deleted_output_is_recomputed() {
        let (_tmp, cfg, out) = sweep_dir(SWEEP);
        let o = out.to_str().unwrap();
        assert_eq!(fv(&["sweep", "--config", &cfg, "--out", o]), 0);
        let victim = out.join("logneg_r0.3_n2.json");
        let bytes = fs::read(&victim).unwrap();
        fs::remove_file(&victim).unwrap();
        assert_eq!(fv(&["sweep", "--config", &cfg, "--out", o]), 0);
        assert_eq!(fs::read(&victim).unwrap(), bytes);
    }

    #[test]
    fn fresh_directories_get_identical_outputs() {
        let (tmp, cfg, _) = sweep_dir(SWEEP);
        let a = tmp.path().join("a");
        let b = tmp.path().join("b");
        assert_eq!(
            fv(&["sweep", "--config", &cfg, "--out", a.to_str().unwrap()]),
            0
        );
        assert_eq!(
            fv(&["sweep", "--config", &cfg, "--out", b.to_str().unwrap()]),
            0
        );
        assert_eq!(snapshot(&a), snapshot(&b));
        let strip =
            |d: &Path| serde_json::to_vec(&RunManifest::load(d).unwrap().without_timing()).unwrap();
        assert_eq!(strip(&a), strip(&b));
    }

    #[test]
    fn outputs_do_not_depend_on_thread_count() {
        let (tmp, cfg, _) = sweep_dir(SWEEP);
        let runs: Vec<_> = [1, 3]
            .into_iter()
            .map(|threads| {
                let dir = tmp.path().join(format!("t{threads}"));
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .unwrap();
                assert_eq!(
                    pool.install(|| fv(&[
                        "sweep",
                        "--config",
                        &cfg,
                        "--out",
                        dir.to_str().unwrap()
                    ])),
                    0
                );
                let m = RunManifest::load(&dir).unwrap().without_timing();
                (snapshot(&dir), serde_json::to_vec(&m).unwrap())
            })
            .collect();
        assert_eq!(runs[0], runs[1]);
    }

    #[test]
    fn empty_outputs_exit_with_usage() {
        let (_tmp, cfg, _) = sweep_dir(r#"{"r_values": [0.5], "n_values": [2], "outputs": []}"#);
        assert_eq!(fv(&["sweep", "--config", &cfg]), 2);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(fv(&["ratio", "-r", "0", "-n", "2"]), 2);
        assert_eq!(fv(&["nv", "-r", "-1", "-n", "2"]), 2);
        assert_eq!(
            fv(&["wigner-slice", "-r", "0.5", "-n", "2", "--plane", "x=0,x=1"]),
            2
        );
        assert_eq!(fv(&["field", "-r", "0.5", "-n", "2", "--grid", "1:2"]), 2);
        assert_eq!(fv(&["bogus"]), 2);
    }

    #[test]
    fn unconverged_nv_exits_3() {
        let tmp = tempfile::tempdir().unwrap();
        let out = tmp.path().join("nv.json");
        let o = out.to_str().unwrap();
        assert_eq!(
            fv(&[
                "nv",
                "-r",
                "0.9",
                "-n",
                "4",
                "--order",
                "8",
                "--max-order",
                "8",
                "-o",
                o
            ]),
            3
        );
        let res: serde_json::Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
        assert_eq!(res["converged"], false);
    }

    #[test]
    fn field_csv_has_header_and_rows() {
        let tmp = tempfile::tempdir().unwrap();
        let out = tmp.path().join("f.csv");
        assert_eq!(
            fv(&[
                "field",
                "-r",
                "0.5",
                "-n",
                "2",
                "--grid",
                "-1:1:3",
                "-o",
                out.to_str().unwrap()
            ]),
            0
        );
        let text = fs::read_to_string(&out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,y,re,im,abs,arg"));
        assert_eq!(lines.count(), 9);
    }

    #[test]
    fn closed_form_conventions() {
        let tmp = tempfile::tempdir().unwrap();
        let out = tmp.path().join("cf.json");
        let o = out.to_str().unwrap();
        assert_eq!(fv(&["closed-form", "-r", "0.5", "-n", "4", "-o", o]), 0);
        assert_eq!(
            fv(&[
                "closed-form",
                "-r",
                "0.5",
                "-n",
                "4",
                "--convention",
                "literal",
                "-o",
                o
            ]),
            0
        );
        let diag: serde_json::Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
        assert_eq!(diag["agrees"], false);
    }

    #[test]
    fn selftest_manifest_names_failures() {
        let tmp = tempfile::tempdir().unwrap();
        assert_eq!(
            fv(&[
                "selftest",
                "--inject-fault",
                "--out",
                tmp.path().to_str().unwrap()
            ]),
            4
        );
        let m = RunManifest::load(tmp.path()).unwrap();
        let failed: Vec<&str> = m.failures().map(|t| t.id.as_str()).collect();
        assert!(failed.contains(&"oracle-equivalence"), "{failed:?}");
    }

    #[test]
    fn figure_run_records_tool_default_axes() {
        let tmp = tempfile::tempdir().unwrap();
        let o = tmp.path().to_str().unwrap();
        assert_eq!(
            fv(&[
                "figure",
                "fig3",
                "--out",
                o,
                "--n",
                "2",
                "--slice-grid",
                "-2:2:11"
            ]),
            0
        );
        let m = RunManifest::load(tmp.path()).unwrap();
        assert_eq!(m.metadata["r_values_source"], "tool default");
        let table = fs::read_to_string(tmp.path().join("fig3_slices.csv")).unwrap();
        assert!(table.starts_with("r,n,slice_min_y0_px0,slice_min_x0_py0\n1,2,"));
    }
}
