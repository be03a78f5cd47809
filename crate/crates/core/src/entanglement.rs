//! Partial transpose, negativity and logarithmic negativity.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::Serialize;

use crate::beamsplitter::apply_beam_splitter;
use crate::eigen::{hermitian_eigen, HermitianMatrix};
use crate::error::{CoreError, Result};
use crate::fock::{
    make_tmss, state_to_density, DensityMatrix, FockPair, Mode, SqueezeParams, TwoModeState,
};
use crate::tolerance::Tolerances;

/// `ρ^{T_mode}` as a sparse map keyed by `(ket, bra)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialTranspose {
    pub entries: BTreeMap<(FockPair, FockPair), Complex64>,
    pub transposed_mode: Mode,
    dimension: usize,
}

fn swap_mode(ket: FockPair, bra: FockPair, mode: Mode) -> (FockPair, FockPair) {
    match mode {
        Mode::A => (FockPair::new(bra.na, ket.nb), FockPair::new(ket.na, bra.nb)),
        Mode::B => (FockPair::new(ket.na, bra.nb), FockPair::new(bra.na, ket.nb)),
    }
}

pub fn partial_transpose(rho: &DensityMatrix, mode: Mode) -> PartialTranspose {
    PartialTranspose {
        entries: rho
            .entries()
            .iter()
            .map(|((k, b), v)| (swap_mode(*k, *b, mode), *v))
            .collect(),
        transposed_mode: mode,
        dimension: rho.dimension(),
    }
}

impl PartialTranspose {
    pub fn trace(&self) -> Complex64 {
        self.entries
            .iter()
            .filter(|((k, b), _)| k == b)
            .map(|(_, v)| *v)
            .sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.entries
            .iter()
            .map(|((k, b), v)| {
                let mirror = self.entries.get(&(*b, *k)).copied().unwrap_or_default();
                (v - mirror.conj()).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Transposes the same mode back.
    pub fn undo(&self) -> DensityMatrix {
        DensityMatrix::from_entries(
            self.dimension,
            self.entries
                .iter()
                .map(|((k, b), v)| (swap_mode(*k, *b, self.transposed_mode), *v)),
        )
    }

    /// Dense matrix over the product of the per-mode photon-number supports.
    pub fn to_dense(&self) -> (Vec<FockPair>, HermitianMatrix) {
        let mut a_support = BTreeSet::new();
        let mut b_support = BTreeSet::new();
        for (k, b) in self.entries.keys() {
            a_support.extend([k.na, b.na]);
            b_support.extend([k.nb, b.nb]);
        }
        let basis: Vec<FockPair> = a_support
            .iter()
            .flat_map(|&na| b_support.iter().map(move |&nb| FockPair::new(na, nb)))
            .collect();
        let index: BTreeMap<FockPair, usize> =
            basis.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut m = HermitianMatrix::zeros(basis.len());
        for ((k, b), v) in &self.entries {
            m.set(index[k], index[b], *v);
        }
        (basis, m)
    }
}

/// Spectrum summary of a partially transposed density matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub negativity: f64,
    pub log_negativity: f64,
    /// Ascending.
    pub negative_eigenvalues: Vec<f64>,
    pub matrix_dimension: usize,
    pub transposed_mode: Mode,
    pub eigen_residual: f64,
}

impl EntanglementReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// All eigenvalues of `ρ^{T_mode}`, ascending.
pub fn partial_transpose_spectrum(rho: &DensityMatrix, mode: Mode) -> Result<Vec<f64>> {
    let (_, dense) = partial_transpose(rho, mode).to_dense();
    Ok(hermitian_eigen(&dense, Tolerances::DEFAULT.eigen_residual)?.values)
}

pub fn log_negativity(rho: &DensityMatrix, mode: Mode) -> Result<EntanglementReport> {
    let tol = Tolerances::DEFAULT;
    let (_, dense) = partial_transpose(rho, mode).to_dense();
    let eig = hermitian_eigen(&dense, tol.eigen_residual)?;
    let negative_eigenvalues: Vec<f64> = eig
        .values
        .iter()
        .copied()
        .filter(|v| *v < -tol.eigen_zero)
        .collect();
    let negativity = negative_eigenvalues.iter().sum::<f64>().abs();
    Ok(EntanglementReport {
        negativity,
        log_negativity: (1.0 + 2.0 * negativity).log2(),
        negative_eigenvalues,
        matrix_dimension: dense.dim(),
        transposed_mode: mode,
        eigen_residual: eig.residual,
    })
}

pub fn state_log_negativity(state: &TwoModeState, mode: Mode) -> Result<EntanglementReport> {
    log_negativity(&state_to_density(state), mode)
}

/// Log-negativities of the squeezed input and of its beam-splitter output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementRatio {
    pub r: f64,
    pub n_max: usize,
    pub l_before: f64,
    pub l_after: f64,
    /// `l_after / l_before`.
    pub ratio: f64,
}

pub fn entanglement_ratio(params: SqueezeParams) -> Result<EntanglementRatio> {
    params.validate()?;
    if params.r == 0.0 {
        return Err(CoreError::UndefinedRatio);
    }
    let tmss = make_tmss(params)?;
    let l_before = state_log_negativity(&tmss, Mode::A)?.log_negativity;
    let l_after = state_log_negativity(&apply_beam_splitter(&tmss), Mode::A)?.log_negativity;
    if l_before == 0.0 {
        return Err(CoreError::UndefinedRatio);
    }
    Ok(EntanglementRatio {
        r: params.r,
        n_max: params.n_max,
        l_before,
        l_after,
        ratio: l_after / l_before,
    })
}
