//! Parameter grids of the five figure pipelines.

use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::config::{OutputKind, SweepConfig};
use crate::error::Result;
use crate::manifest::RunManifest;
use crate::pipeline::{execute, finish, jobs_for, points, summary_table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl FigureId {
    pub const ALL: [FigureId; 5] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
        }
    }
}

/// Optional replacements for a figure's preset grid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureOverrides {
    pub r_values: Option<Vec<f64>>,
    pub n_values: Option<Vec<usize>>,
    pub grid: Option<String>,
    pub slice_grid: Option<String>,
    pub tol: Option<f64>,
    pub fock_input: bool,
}

pub const FIG1_R: f64 = 0.02;
pub const FIG1_N: [usize; 6] = [3, 4, 5, 6, 7, 8];
/// Panel squeezing values for the fixed-`N` slices. Tool defaults.
pub const FIG2_R: [f64; 3] = [0.2, 0.6, 1.0];
pub const FIG2_N: usize = 6;
/// Fixed squeezing for the varying-`N` slices. Tool default.
pub const FIG3_R: f64 = 1.0;
pub const FIG3_N: [usize; 3] = [2, 4, 6];
pub const FIG4_R: [f64; 6] = [0.1, 0.3, 0.5, 0.8, 1.1, 1.5];
pub const FIG4_N: [usize; 2] = [2, 4];
pub const FIG5_N: [usize; 3] = [2, 4, 6];

pub fn fig5_r() -> Vec<f64> {
    (1..=15).map(|k| k as f64 / 10.0).collect()
}

/// Preset sweep for `id` with overrides applied, writing into `out`.
pub fn preset(id: FigureId, overrides: &FigureOverrides, out: PathBuf) -> SweepConfig {
    let (r_values, n_values, outputs): (Vec<f64>, Vec<usize>, &[OutputKind]) = match id {
        FigureId::Fig1 => (
            vec![FIG1_R],
            FIG1_N.to_vec(),
            &[OutputKind::Field, OutputKind::Vortices],
        ),
        FigureId::Fig2 => (FIG2_R.to_vec(), vec![FIG2_N], &[OutputKind::WignerSlice]),
        FigureId::Fig3 => (vec![FIG3_R], FIG3_N.to_vec(), &[OutputKind::WignerSlice]),
        FigureId::Fig4 => (FIG4_R.to_vec(), FIG4_N.to_vec(), &[OutputKind::Nv]),
        FigureId::Fig5 => (fig5_r(), FIG5_N.to_vec(), &[OutputKind::Logneg]),
    };
    SweepConfig {
        r_values: overrides.r_values.clone().unwrap_or(r_values),
        n_values: overrides.n_values.clone().unwrap_or(n_values),
        outputs: outputs.iter().copied().collect::<BTreeSet<_>>(),
        grid: overrides.grid.clone(),
        slice_grid: overrides.slice_grid.clone(),
        tol: overrides.tol,
        nv_order: None,
        nv_max_order: None,
        amplitude_floor: None,
        fock_input: overrides.fock_input,
        output_dir: out,
    }
}

fn table(id: FigureId, manifest: &RunManifest, cfg: &SweepConfig) -> (String, String) {
    let name = match id {
        FigureId::Fig1 => "fig1_vortices.csv",
        FigureId::Fig2 => "fig2_slices.csv",
        FigureId::Fig3 => "fig3_slices.csv",
        FigureId::Fig4 => "fig4_nv.csv",
        FigureId::Fig5 => "fig5_logneg.csv",
    };
    let columns: &[&str] = match id {
        FigureId::Fig1 => &["vortex_count", "total_charge", "nodal_rings"],
        FigureId::Fig2 | FigureId::Fig3 => &["slice_min_y0_px0", "slice_min_x0_py0"],
        FigureId::Fig4 => &["nv", "nv_converged", "normalization"],
        FigureId::Fig5 => &["l_before", "l_after", "ratio"],
    };
    (name.to_string(), summary_table(manifest, cfg, columns))
}

/// Runs a figure pipeline; the manifest records failed tasks.
pub fn run_figure(id: FigureId, overrides: &FigureOverrides, out: PathBuf) -> Result<RunManifest> {
    let cfg = preset(id, overrides, out);
    cfg.validate()?;
    let dir = cfg.output_dir.clone();
    let mut manifest = execute(
        &format!("figure {}", id.name()),
        cfg.config_hash(),
        jobs_for(&cfg)?,
        &dir,
    );
    let mut meta = |k: &str, v: serde_json::Value| {
        manifest.metadata.insert(k.to_string(), v);
    };
    meta("figure", id.name().into());
    meta("r_values", serde_json::json!(cfg.r_values));
    meta("n_values", serde_json::json!(cfg.n_values));
    if matches!(id, FigureId::Fig2 | FigureId::Fig3) && overrides.r_values.is_none() {
        meta("r_values_source", "tool default".into());
    }
    if id == FigureId::Fig1 {
        meta(
            "input",
            if cfg.fock_input { "fock" } else { "squeezed" }.into(),
        );
    }
    let t = table(id, &manifest, &cfg);
    finish(&mut manifest, &dir, vec![t])?;
    Ok(manifest)
}

/// Point labels of a figure, in table order.
pub fn figure_points(id: FigureId) -> Vec<String> {
    points(&preset(id, &FigureOverrides::default(), PathBuf::new()))
        .iter()
        .map(|p| p.id())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_match_figure_grids() {
        let fig1 = preset(FigureId::Fig1, &FigureOverrides::default(), PathBuf::new());
        assert_eq!(fig1.r_values, vec![0.02]);
        assert_eq!(fig1.n_values, vec![3, 4, 5, 6, 7, 8]);
        let fig5 = preset(FigureId::Fig5, &FigureOverrides::default(), PathBuf::new());
        assert_eq!(fig5.r_values.len(), 15);
        assert_eq!(fig5.r_values[0], 0.1);
        assert_eq!(fig5.r_values[14], 1.5);
        assert_eq!(figure_points(FigureId::Fig4).len(), 12);
    }

    #[test]
    fn overrides_replace_axes() {
        let o = FigureOverrides {
            r_values: Some(vec![0.4]),
            fock_input: true,
            ..Default::default()
        };
        let cfg = preset(FigureId::Fig1, &o, PathBuf::from("x"));
        assert_eq!(cfg.r_values, vec![0.4]);
        assert!(cfg.fock_input);
        assert_eq!(cfg.n_values.len(), 6);
    }

    #[test]
    fn fig5_writes_table_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let o = FigureOverrides {
            r_values: Some(vec![0.5]),
            n_values: Some(vec![2]),
            ..Default::default()
        };
        let m = run_figure(FigureId::Fig5, &o, dir.path().to_path_buf()).unwrap();
        assert!(m.succeeded());
        assert!(m.missing_outputs(dir.path()).is_empty());
        let table = std::fs::read_to_string(dir.path().join("fig5_logneg.csv")).unwrap();
        assert!(table.starts_with("r,n,l_before,l_after,ratio\n0.5,2,"));
    }
}
