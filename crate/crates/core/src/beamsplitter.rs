//! 50:50 beam splitter with the `a† → (a† + i b†)/√2`, `b† → (b† + i a†)/√2`
//! mode map, plus the closed-form coefficient view of its action on a
//! truncated two-mode squeezed state.
//!
//! The operator expansion ([`apply_beam_splitter`]) is the ground truth.
//! The closed form ([`closed_form_vortex_state`]) is checked against it on
//! every call.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::fock::{make_tmss, FockPair, Mode, SqueezeParams, TwoModeState};
use crate::special::{ln_binomial, ln_factorial};
use crate::tolerance::Tolerances;

/// Amplitudes below this magnitude are dropped after accumulation.
/// Exact interference zeros (e.g. the `|1,1⟩` term of `BS|1,1⟩`) land here.
const SPARSITY_FLOOR: f64 = 1e-15;

/// `i^k`.
pub(crate) fn i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Beam-splitter operator. [`BeamSplitter::STANDARD`] is the only physical
/// convention used by the engine; the flipped variant exists so the
/// self-test can prove the oracle comparison catches a phase error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BeamSplitter {
    flip_phase: bool,
}

impl BeamSplitter {
    pub const STANDARD: BeamSplitter = BeamSplitter { flip_phase: false };

    /// `i → −i` in the mode map. Fault injection only.
    pub const fn flipped_phase() -> Self {
        BeamSplitter { flip_phase: true }
    }

    fn phase(&self, k: usize) -> Complex64 {
        let p = i_pow(k);
        if self.flip_phase {
            p.conj()
        } else {
            p
        }
    }

    /// Expands every Fock component binomially under the mode map.
    pub fn apply(&self, state: &TwoModeState) -> TwoModeState {
        let cutoff = state.cutoff();
        let side = cutoff + 1;
        let mut grid = vec![Complex64::new(0.0, 0.0); side * side];

        for (pair, amp) in state.iter() {
            let (na, nb) = (pair.na, pair.nb);
            let ln_in = 0.5 * (ln_factorial(na) + ln_factorial(nb)) + 0.5 * (na + nb) as f64 * LN_2;
            for p in 0..=na {
                for q in 0..=nb {
                    // a†^p (i b†)^{na-p} · b†^q (i a†)^{nb-q}
                    let oa = p + nb - q;
                    let ob = na - p + q;
                    let ln_mag = ln_binomial(na, p)
                        + ln_binomial(nb, q)
                        + 0.5 * (ln_factorial(oa) + ln_factorial(ob))
                        - ln_in;
                    let term = self.phase(na - p + nb - q) * ln_mag.exp();
                    grid[oa * side + ob] += amp * term;
                }
            }
        }

        let map = sparsify(side, &grid);
        TwoModeState::from_normalized_map(cutoff, map)
    }
}

fn sparsify(side: usize, grid: &[Complex64]) -> BTreeMap<FockPair, Complex64> {
    grid.iter()
        .enumerate()
        .filter(|(_, v)| v.norm() > SPARSITY_FLOOR)
        .map(|(idx, v)| (FockPair::new(idx / side, idx % side), *v))
        .collect()
}

/// Applies the standard 50:50 beam splitter.
pub fn apply_beam_splitter(state: &TwoModeState) -> TwoModeState {
    BeamSplitter::STANDARD.apply(state)
}

/// How the closed form scales the `j`-th pair contribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrefactorConvention {
    /// `j!/2^j`, which the binomial expansion of `|j,j⟩` produces.
    PerPair,
    /// `j!/2^{N/2}` for every `j`.
    Literal,
}

/// One term `i^{k+l} C_{k,l}` of the closed form, scaled by `j!/2^j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsCoefficient {
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub value: Complex64,
}

impl BsCoefficient {
    pub fn new(j: usize, k: usize, l: usize) -> Self {
        assert!(k <= j && l <= j, "k, l must not exceed j");
        let ln_c = 0.5 * (ln_factorial(j + k - l) + ln_factorial(j + l - k))
            - ln_factorial(k)
            - ln_factorial(j - k)
            - ln_factorial(l)
            - ln_factorial(j - l);
        let ln_mag = ln_factorial(j) + ln_c - j as f64 * LN_2;
        BsCoefficient {
            j,
            k,
            l,
            value: i_pow(k + l) * ln_mag.exp(),
        }
    }

    /// Output ket `|j − (l−k), j + (l−k)⟩`.
    pub fn output(&self) -> FockPair {
        FockPair::new(self.j + self.k - self.l, self.j + self.l - self.k)
    }
}

/// Closed-form amplitudes without the oracle check.
pub fn closed_form_amplitudes(
    params: SqueezeParams,
    convention: PrefactorConvention,
) -> Result<TwoModeState> {
    params.validate()?;
    let t = params.r.tanh();
    let n = params.n_max;
    let mut terms = Vec::new();
    for j in 0..=n {
        let weight = t.powi(j as i32);
        if weight == 0.0 {
            continue;
        }
        // PerPair already carries 2^{-j}; Literal swaps it for 2^{-N/2}.
        let rescale = match convention {
            PrefactorConvention::PerPair => 1.0,
            PrefactorConvention::Literal => ((j as f64 - n as f64 / 2.0) * LN_2).exp(),
        };
        for k in 0..=j {
            for l in 0..=j {
                let c = BsCoefficient::new(j, k, l);
                terms.push((c.output(), c.value * weight * rescale));
            }
        }
    }
    TwoModeState::from_amplitudes(2 * n, terms)
}

/// Agreement report between a closed-form reading and the operator expansion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormDiagnostic {
    pub r: f64,
    pub n_max: usize,
    pub convention: PrefactorConvention,
    pub max_deviation: f64,
    pub worst_pair: Option<(usize, usize)>,
    pub agrees: bool,
}

/// Compares a closed-form reading with `splitter.apply(make_tmss(params))`.
pub fn closed_form_diagnostic(
    params: SqueezeParams,
    convention: PrefactorConvention,
    splitter: BeamSplitter,
    tol: &Tolerances,
) -> Result<ClosedFormDiagnostic> {
    let closed = closed_form_amplitudes(params, convention)?;
    let oracle = splitter.apply(&make_tmss(params)?);
    let mut worst = None;
    let mut max_deviation = 0.0;
    for k in closed.amplitudes().keys().chain(oracle.amplitudes().keys()) {
        let d = (closed.amplitude(*k) - oracle.amplitude(*k)).norm();
        if d > max_deviation {
            max_deviation = d;
            worst = Some((k.na, k.nb));
        }
    }
    Ok(ClosedFormDiagnostic {
        r: params.r,
        n_max: params.n_max,
        convention,
        max_deviation,
        worst_pair: worst,
        agrees: max_deviation <= tol.oracle_amplitude,
    })
}

/// The vortex state built from the closed-form coefficients, verified
/// against the operator expansion.
pub fn closed_form_vortex_state(params: SqueezeParams) -> Result<TwoModeState> {
    let tol = Tolerances::DEFAULT;
    let diag = closed_form_diagnostic(
        params,
        PrefactorConvention::PerPair,
        BeamSplitter::STANDARD,
        &tol,
    )?;
    if !diag.agrees {
        return Err(CoreError::CoefficientMismatch {
            max_deviation: diag.max_deviation,
        });
    }
    closed_form_amplitudes(params, PrefactorConvention::PerPair)
}

/// Photon-number distribution of one mode.
pub fn photon_number_marginal(state: &TwoModeState, mode: Mode) -> BTreeMap<usize, f64> {
    let mut out = BTreeMap::new();
    for (k, v) in state.iter() {
        *out.entry(k.get(mode)).or_insert(0.0) += v.norm_sqr();
    }
    out
}

/// Variance of a photon-number distribution.
pub fn photon_number_variance(dist: &BTreeMap<usize, f64>) -> f64 {
    let mean: f64 = dist.iter().map(|(n, p)| *n as f64 * p).sum();
    dist.iter()
        .map(|(n, p)| (*n as f64 - mean).powi(2) * p)
        .sum()
}
