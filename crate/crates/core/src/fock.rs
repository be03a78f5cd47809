//! Two-mode Fock-space states and density matrices.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, CoreError, Result};
use crate::tolerance::Tolerances;

/// Mode label of the two-mode system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    A,
    B,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::A => f.write_str("a"),
            Mode::B => f.write_str("b"),
        }
    }
}

/// Photon numbers `(n_a, n_b)` of a two-mode Fock basis ket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FockPair {
    pub na: usize,
    pub nb: usize,
}

impl FockPair {
    pub const fn new(na: usize, nb: usize) -> Self {
        FockPair { na, nb }
    }

    pub const fn total(self) -> usize {
        self.na + self.nb
    }

    pub const fn get(self, mode: Mode) -> usize {
        match mode {
            Mode::A => self.na,
            Mode::B => self.nb,
        }
    }
}

impl fmt::Display for FockPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{}⟩", self.na, self.nb)
    }
}

/// Squeezing parameter `r` and truncation order `N` of the input state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeParams {
    pub r: f64,
    pub n_max: usize,
}

impl SqueezeParams {
    pub fn new(r: f64, n_max: usize) -> Result<Self> {
        let p = SqueezeParams { r, n_max };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.r.is_finite() || self.r < 0.0 {
            return Err(invalid(
                "r",
                format!("squeezing must be finite and >= 0, got {}", self.r),
            ));
        }
        Ok(())
    }
}

/// Pure two-mode state stored as a sparse amplitude map.
///
/// Keys are ordered by `(n_a, n_b)`, which fixes summation order everywhere
/// the amplitudes are iterated.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    amplitudes: BTreeMap<FockPair, Complex64>,
    cutoff: usize,
}

impl TwoModeState {
    /// Builds a state from raw amplitudes, dropping exact zeros and
    /// rescaling to unit norm.
    pub fn from_amplitudes<I>(cutoff: usize, amplitudes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FockPair, Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (k, v) in amplitudes {
            if k.total() > cutoff {
                return Err(CoreError::MalformedState(format!(
                    "{k} exceeds cutoff {cutoff}"
                )));
            }
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(CoreError::MalformedState(format!(
                    "non-finite amplitude at {k}"
                )));
            }
            *map.entry(k).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        map.retain(|_, v| v.norm_sqr() > 0.0);
        let norm = map.values().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(CoreError::MalformedState("zero vector".into()));
        }
        for v in map.values_mut() {
            *v /= norm;
        }
        Ok(TwoModeState {
            amplitudes: map,
            cutoff,
        })
    }

    /// Builds a state and leaves the amplitudes exactly as given.
    pub(crate) fn from_normalized_map(
        cutoff: usize,
        amplitudes: BTreeMap<FockPair, Complex64>,
    ) -> Self {
        TwoModeState { amplitudes, cutoff }
    }

    /// `|n_a, n_b⟩`.
    pub fn fock(na: usize, nb: usize) -> Self {
        let mut map = BTreeMap::new();
        map.insert(FockPair::new(na, nb), Complex64::new(1.0, 0.0));
        TwoModeState {
            amplitudes: map,
            cutoff: na + nb,
        }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amplitudes(&self) -> &BTreeMap<FockPair, Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, pair: FockPair) -> Complex64 {
        self.amplitudes
            .get(&pair)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (FockPair, Complex64)> + '_ {
        self.amplitudes.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|v| v.norm_sqr()).sum()
    }

    /// Largest photon number appearing in `mode`.
    pub fn max_photons(&self, mode: Mode) -> usize {
        self.amplitudes
            .keys()
            .map(|k| k.get(mode))
            .max()
            .unwrap_or(0)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &TwoModeState) -> Complex64 {
        self.iter()
            .map(|(k, v)| v.conj() * other.amplitude(k))
            .sum()
    }

    /// Largest `|⟨k|self⟩ − ⟨k|other⟩|` over the union of supports.
    pub fn max_amplitude_distance(&self, other: &TwoModeState) -> f64 {
        self.amplitudes
            .keys()
            .chain(other.amplitudes.keys())
            .map(|k| (self.amplitude(*k) - other.amplitude(*k)).norm())
            .fold(0.0, f64::max)
    }

    /// Applies `|n⟩ → e^{iθn}|n⟩` on one mode.
    pub fn phase_rotate(&self, mode: Mode, theta: f64) -> TwoModeState {
        let map = self
            .iter()
            .map(|(k, v)| {
                (
                    k,
                    v * Complex64::from_polar(1.0, theta * k.get(mode) as f64),
                )
            })
            .collect();
        TwoModeState::from_normalized_map(self.cutoff, map)
    }

    /// Exchanges the roles of the two modes.
    pub fn swap_modes(&self) -> TwoModeState {
        let map = self
            .iter()
            .map(|(k, v)| (FockPair::new(k.nb, k.na), v))
            .collect();
        TwoModeState::from_normalized_map(self.cutoff, map)
    }

    pub fn is_normalized(&self, tol: &Tolerances) -> bool {
        (self.norm_sqr() - 1.0).abs() < tol.norm
    }

    pub fn to_json(&self) -> String {
        let doc = StateJson {
            cutoff: self.cutoff,
            amplitudes: self
                .iter()
                .map(|(k, v)| AmplitudeJson {
                    na: k.na,
                    nb: k.nb,
                    re: v.re,
                    im: v.im,
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("state serializes")
    }

    /// Parses the JSON state format. The amplitudes are taken verbatim;
    /// the norm is checked against `tol.norm`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: StateJson =
            serde_json::from_str(text).map_err(|e| CoreError::MalformedState(e.to_string()))?;
        let mut map = BTreeMap::new();
        for a in doc.amplitudes {
            let k = FockPair::new(a.na, a.nb);
            if k.total() > doc.cutoff {
                return Err(CoreError::MalformedState(format!(
                    "{k} exceeds cutoff {}",
                    doc.cutoff
                )));
            }
            if map.insert(k, Complex64::new(a.re, a.im)).is_some() {
                return Err(CoreError::MalformedState(format!("duplicate entry {k}")));
            }
        }
        let state = TwoModeState::from_normalized_map(doc.cutoff, map);
        if !state.is_normalized(&Tolerances::DEFAULT) {
            return Err(CoreError::MalformedState(format!(
                "norm² = {} is not 1",
                state.norm_sqr()
            )));
        }
        Ok(state)
    }
}

#[derive(Serialize, Deserialize)]
struct AmplitudeJson {
    na: usize,
    nb: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    cutoff: usize,
    amplitudes: Vec<AmplitudeJson>,
}

/// Truncated two-mode squeezed state `Σ_{j≤N} c_j |j,j⟩`, `c_j ∝ tanh(r)^j`.
///
/// The normalization `1/√(Σ tanh^{2j} r)` absorbs the `1/cosh r` prefactor.
pub fn make_tmss(params: SqueezeParams) -> Result<TwoModeState> {
    params.validate()?;
    let t = params.r.tanh();
    let raw: Vec<f64> = (0..=params.n_max).map(|j| t.powi(j as i32)).collect();
    let norm = raw.iter().map(|c| c * c).sum::<f64>().sqrt();
    let map = raw
        .iter()
        .enumerate()
        .filter(|(_, c)| **c > 0.0)
        .map(|(j, c)| (FockPair::new(j, j), Complex64::new(c / norm, 0.0)))
        .collect();
    Ok(TwoModeState::from_normalized_map(2 * params.n_max, map))
}

/// Probability of each total photon number `n_a + n_b`.
pub fn total_photon_distribution(state: &TwoModeState) -> BTreeMap<usize, f64> {
    let mut out = BTreeMap::new();
    for (k, v) in state.iter() {
        *out.entry(k.total()).or_insert(0.0) += v.norm_sqr();
    }
    out
}

/// Hermitian operator on the two-mode Fock space, keyed by `(ket, bra)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: BTreeMap<(FockPair, FockPair), Complex64>,
    dimension: usize,
}

impl DensityMatrix {
    pub fn from_entries<I>(dimension: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = ((FockPair, FockPair), Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (k, v) in entries {
            *map.entry(k).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        DensityMatrix {
            entries: map,
            dimension,
        }
    }

    /// Per-mode Fock cutoff.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn entries(&self) -> &BTreeMap<(FockPair, FockPair), Complex64> {
        &self.entries
    }

    pub fn get(&self, ket: FockPair, bra: FockPair) -> Complex64 {
        self.entries
            .get(&(ket, bra))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.entries
            .iter()
            .filter(|((k, b), _)| k == b)
            .map(|(_, v)| *v)
            .sum()
    }

    /// `tr(ρ²) = Σ |ρ_uv|²` for Hermitian ρ.
    pub fn purity(&self) -> f64 {
        self.entries.values().map(|v| v.norm_sqr()).sum()
    }

    /// Largest `|ρ_uv − conj(ρ_vu)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.entries
            .iter()
            .map(|((k, b), v)| (v - self.get(*b, *k).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_physical(&self, tol: &Tolerances) -> bool {
        self.hermiticity_defect() < tol.hermitian && (self.trace() - 1.0).norm() < tol.trace
    }
}

/// `ρ = |ψ⟩⟨ψ|`.
pub fn state_to_density(state: &TwoModeState) -> DensityMatrix {
    let mut entries = BTreeMap::new();
    for (u, cu) in state.iter() {
        for (v, cv) in state.iter() {
            entries.insert((u, v), cu * cv.conj());
        }
    }
    DensityMatrix {
        entries,
        dimension: state.cutoff(),
    }
}
