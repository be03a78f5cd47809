use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use fockvortex::{QuadratureGrid, RefinementLimits, Tolerances, WignerRule};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputKind {
    Field,
    Vortices,
    WignerSlice,
    Nv,
    Logneg,
}

impl OutputKind {
    pub fn name(self) -> &'static str {
        match self {
            OutputKind::Field => "field",
            OutputKind::Vortices => "vortices",
            OutputKind::WignerSlice => "wigner-slice",
            OutputKind::Nv => "nv",
            OutputKind::Logneg => "logneg",
        }
    }
}

impl std::str::FromStr for OutputKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| CliError::usage("outputs", format!("unknown output `{s}`")))
    }
}

/// Grid over `(r, N)` with the analyses to run at every point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub r_values: Vec<f64>,
    pub n_values: Vec<usize>,
    pub outputs: BTreeSet<OutputKind>,
    /// Wavefunction grid, `min:max:n[,min:max:n]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    /// Wigner slice grid, same syntax.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slice_grid: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nv_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nv_max_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude_floor: Option<f64>,
    /// Feed `|n, n⟩` into the splitter instead of the squeezed state.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub fock_input: bool,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("fockvortex-out")
}

pub const DEFAULT_TOL: f64 = 1e-3;

pub fn default_slice_grid() -> QuadratureGrid {
    QuadratureGrid::square(3.0, 121).expect("valid default")
}

/// Resolved numerical settings shared by every task of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Settings {
    pub grid: QuadratureGrid,
    pub slice_grid: QuadratureGrid,
    pub tol: f64,
    pub rule: WignerRule,
    pub limits: RefinementLimits,
    pub amplitude_floor: f64,
    pub fock_input: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            grid: QuadratureGrid::default(),
            slice_grid: default_slice_grid(),
            tol: DEFAULT_TOL,
            rule: WignerRule::default(),
            limits: RefinementLimits::default(),
            amplitude_floor: Tolerances::DEFAULT.amplitude_floor,
            fock_input: false,
        }
    }
}

fn parse_grid(field: &str, text: &str) -> Result<QuadratureGrid> {
    text.parse()
        .map_err(|e: fockvortex::CoreError| CliError::usage(field, e.to_string()))
}

impl SweepConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SweepConfig =
            serde_json::from_str(text).map_err(|e| CliError::usage("config", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r_values.is_empty() {
            return Err(CliError::usage("r_values", "must not be empty"));
        }
        if let Some(r) = self
            .r_values
            .iter()
            .find(|r| !(r.is_finite() && **r >= 0.0))
        {
            return Err(CliError::usage(
                "r_values",
                format!("{r} is not a finite value ≥ 0"),
            ));
        }
        if self.n_values.is_empty() {
            return Err(CliError::usage("n_values", "must not be empty"));
        }
        if self.outputs.is_empty() {
            return Err(CliError::usage("outputs", "must name at least one output"));
        }
        self.settings().map(|_| ())
    }

    pub fn settings(&self) -> Result<Settings> {
        let mut s = Settings::default();
        if let Some(g) = &self.grid {
            s.grid = parse_grid("grid", g)?;
        }
        if let Some(g) = &self.slice_grid {
            s.slice_grid = parse_grid("slice_grid", g)?;
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::usage("tol", "must be positive"));
            }
            s.tol = t;
        }
        if let Some(o) = self.nv_order {
            if o == 0 {
                return Err(CliError::usage("nv_order", "must be positive"));
            }
            s.rule = s.rule.with_order(o);
        }
        if let Some(o) = self.nv_max_order {
            s.limits.max_order = o;
        }
        if let Some(f) = self.amplitude_floor {
            if !(f > 0.0 && f.is_finite()) {
                return Err(CliError::usage("amplitude_floor", "must be positive"));
            }
            s.amplitude_floor = f;
        }
        s.fock_input = self.fock_input;
        Ok(s)
    }

    /// Hash over every parameter that affects outputs.
    pub fn config_hash(&self) -> String {
        crate::manifest::hash_json(&serde_json::json!({
            "r_values": self.r_values,
            "n_values": self.n_values,
            "outputs": self.outputs,
            "grid": self.grid,
            "slice_grid": self.slice_grid,
            "tol": self.tol,
            "nv_order": self.nv_order,
            "nv_max_order": self.nv_max_order,
            "amplitude_floor": self.amplitude_floor,
            "fock_input": self.fock_input,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"r_values": [0.5], "n_values": [2], "outputs": ["logneg"]}"#;

    #[test]
    fn parses_minimal_config() {
        let cfg = SweepConfig::from_json(MINIMAL).unwrap();
        assert_eq!(cfg.outputs, BTreeSet::from([OutputKind::Logneg]));
        assert_eq!(cfg.output_dir, PathBuf::from("fockvortex-out"));
        assert_eq!(cfg.settings().unwrap(), Settings::default());
    }

    #[test]
    fn empty_outputs_is_a_usage_error() {
        let err = SweepConfig::from_json(r#"{"r_values": [0.5], "n_values": [2], "outputs": []}"#)
            .unwrap_err();
        assert!(matches!(&err, CliError::Usage { field, .. } if field == "outputs"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn bad_fields_are_named() {
        let neg =
            SweepConfig::from_json(r#"{"r_values": [-0.1], "n_values": [2], "outputs": ["nv"]}"#)
                .unwrap_err();
        assert!(matches!(&neg, CliError::Usage { field, .. } if field == "r_values"));
        let grid = SweepConfig::from_json(
            r#"{"r_values": [0.1], "n_values": [2], "outputs": ["field"], "grid": "1:2"}"#,
        )
        .unwrap_err();
        assert!(matches!(&grid, CliError::Usage { field, .. } if field == "grid"));
        let unknown =
            SweepConfig::from_json(r#"{"r_values": [0.1], "n_values": [2], "outputs": ["psi"]}"#)
                .unwrap_err();
        assert_eq!(unknown.exit_code(), 2);
    }

    #[test]
    fn every_numeric_change_moves_the_hash() {
        let base = SweepConfig::from_json(MINIMAL).unwrap();
        let mut variants = vec![base.clone(); 4];
        variants[0].r_values[0] = 0.50001;
        variants[1].n_values[0] = 3;
        variants[2].tol = Some(1e-4);
        variants[3].nv_order = Some(32);
        for v in variants {
            assert_ne!(v.config_hash(), base.config_hash());
        }
        let mut moved = base.clone();
        moved.output_dir = PathBuf::from("elsewhere");
        assert_eq!(moved.config_hash(), base.config_hash());
    }
}
