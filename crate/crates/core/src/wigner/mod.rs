//! Two-mode Wigner functions and their negativity volume.
//!
//! Any operator `Σ ρ_{uv} |u⟩⟨v|` is evaluated through the product of
//! single-mode kernels `W_{u_a v_a}(x, p_x) · W_{u_b v_b}(y, p_y)`. The
//! coefficients are grouped by mode-a pair and mode-b pair, so a tensor
//! quadrature over `(x, p_x) × (y, p_y)` collapses into one dense
//! contraction between the two phase-space planes.

mod diagonal;
mod kernel;
mod rule;

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::fock::{DensityMatrix, FockPair, TwoModeState};
use crate::quadrature::QuadratureGrid;

pub use diagonal::{
    diagonal_form_comparison, wigner_diagonal_form, DiagonalComparison, DiagonalForm,
};
pub use kernel::{wigner_fock_cross, wigner_fock_diagonal};
pub use rule::{AxisRule, QuadratureScheme, WignerGrid, WignerRule};

use kernel::kernel_polynomial;

/// Point `(x, p_x, y, p_y)` of two-mode phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub px: f64,
    pub y: f64,
    pub py: f64,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(x: f64, px: f64, y: f64, py: f64) -> Self {
        PhasePoint { x, px, y, py }
    }

    /// `q_a² = x² + p_x²`.
    pub fn qa_sq(&self) -> f64 {
        self.x * self.x + self.px * self.px
    }

    /// `q_b² = y² + p_y²`.
    pub fn qb_sq(&self) -> f64 {
        self.y * self.y + self.py * self.py
    }

    pub fn radius_sq(&self) -> f64 {
        self.qa_sq() + self.qb_sq()
    }

    /// `Q₀ = (x² + y² + p_x² + p_y²)/4`.
    pub fn q0(&self) -> f64 {
        self.radius_sq() / 4.0
    }

    /// `Q₁ = (x p_y − y p_x)/2`.
    pub fn q1(&self) -> f64 {
        (self.x * self.py - self.y * self.px) / 2.0
    }

    pub fn get(&self, c: Coord) -> f64 {
        match c {
            Coord::X => self.x,
            Coord::Px => self.px,
            Coord::Y => self.y,
            Coord::Py => self.py,
        }
    }

    fn set(&mut self, c: Coord, v: f64) {
        match c {
            Coord::X => self.x = v,
            Coord::Px => self.px = v,
            Coord::Y => self.y = v,
            Coord::Py => self.py = v,
        }
    }

    /// Rotates `(x, y)` and `(p_x, p_y)` by the same angle. Leaves `Q₀` and
    /// `Q₁` unchanged.
    pub fn rotate_joint(&self, theta: f64) -> PhasePoint {
        let (s, c) = theta.sin_cos();
        PhasePoint {
            x: c * self.x - s * self.y,
            y: s * self.x + c * self.y,
            px: c * self.px - s * self.py,
            py: s * self.px + c * self.py,
        }
    }
}

/// Operator expanded over pairs of Fock kets, grouped for factored
/// evaluation.
#[derive(Debug, Clone)]
pub struct WignerOperator {
    a_pairs: Vec<(usize, usize)>,
    b_pairs: Vec<(usize, usize)>,
    /// `a_pairs.len() × b_pairs.len()`, row-major.
    coeff: Vec<Complex64>,
    max_photons: usize,
}

impl WignerOperator {
    fn from_entries<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (FockPair, FockPair, Complex64)>,
    {
        let mut grouped: BTreeMap<((usize, usize), (usize, usize)), Complex64> = BTreeMap::new();
        let mut max_photons = 0;
        for (ket, bra, v) in entries {
            max_photons = max_photons.max(ket.na).max(ket.nb).max(bra.na).max(bra.nb);
            *grouped
                .entry(((ket.na, bra.na), (ket.nb, bra.nb)))
                .or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        let mut a_index = BTreeMap::new();
        let mut b_index = BTreeMap::new();
        for (a, b) in grouped.keys() {
            a_index.entry(*a).or_insert(0usize);
            b_index.entry(*b).or_insert(0usize);
        }
        for (n, v) in a_index.values_mut().enumerate() {
            *v = n;
        }
        for (n, v) in b_index.values_mut().enumerate() {
            *v = n;
        }
        let (ka, kb) = (a_index.len(), b_index.len());
        let mut coeff = vec![Complex64::new(0.0, 0.0); ka * kb];
        for ((a, b), v) in grouped {
            coeff[a_index[&a] * kb + b_index[&b]] = v;
        }
        WignerOperator {
            a_pairs: a_index.into_keys().collect(),
            b_pairs: b_index.into_keys().collect(),
            coeff,
            max_photons,
        }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_state(state: &TwoModeState) -> Self {
        let terms: Vec<_> = state.iter().collect();
        Self::from_entries(
            terms
                .iter()
                .flat_map(|(u, cu)| terms.iter().map(move |(v, cv)| (*u, *v, cu * cv.conj()))),
        )
    }

    pub fn from_density(rho: &DensityMatrix) -> Self {
        Self::from_entries(rho.entries().iter().map(|((k, b), v)| (*k, *b, *v)))
    }

    pub fn max_photons(&self) -> usize {
        self.max_photons
    }

    fn kernels(pairs: &[(usize, usize)], x: f64, p: f64) -> Vec<Complex64> {
        pairs
            .iter()
            .map(|(n, m)| kernel_polynomial(*n, *m, x, p))
            .collect()
    }

    /// Complex value before the real part is taken.
    fn eval_complex(&self, q: &PhasePoint) -> Complex64 {
        let ka = Self::kernels(&self.a_pairs, q.x, q.px);
        let kb = Self::kernels(&self.b_pairs, q.y, q.py);
        let nb = kb.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, kav) in ka.iter().enumerate() {
            let row = &self.coeff[a * nb..(a + 1) * nb];
            let inner: Complex64 = row.iter().zip(&kb).map(|(c, k)| c * k).sum();
            acc += kav * inner;
        }
        acc * (-2.0 * q.radius_sq()).exp()
    }

    /// `W(q)`. The imaginary residue is checked and discarded.
    pub fn eval(&self, q: &PhasePoint) -> f64 {
        let w = self.eval_complex(q);
        debug_assert!(
            w.im.abs() <= 1e-10 * w.re.abs().max(1.0),
            "Wigner value has imaginary residue {}",
            w.im
        );
        w.re
    }

    /// `∫∫ W dp_x dp_y` at fixed `(x, y)`.
    pub fn position_marginal(&self, x: f64, y: f64) -> f64 {
        let rule = WignerRule::gauss_hermite(self.max_photons + 2).axis(0);
        let integrate = |pairs: &[(usize, usize)], q: f64| -> Vec<Complex64> {
            pairs
                .iter()
                .map(|(n, m)| {
                    rule.nodes
                        .iter()
                        .zip(&rule.enveloped_weights)
                        .map(|(p, w)| kernel_polynomial(*n, *m, q, *p) * *w)
                        .sum::<Complex64>()
                        * (-2.0 * q * q).exp()
                })
                .collect()
        };
        let ia = integrate(&self.a_pairs, x);
        let ib = integrate(&self.b_pairs, y);
        let nb = ib.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, va) in ia.iter().enumerate() {
            let row = &self.coeff[a * nb..(a + 1) * nb];
            acc += va * row.iter().zip(&ib).map(|(c, v)| c * v).sum::<Complex64>();
        }
        acc.re
    }

    /// `(∫|W|, ∫W)` under the tensor rule `axis⁴`.
    pub fn integrate(&self, axis: &AxisRule) -> (f64, f64) {
        let n = axis.len();
        let plane: Vec<(f64, f64, f64)> = (0..n)
            .flat_map(|i| (0..n).map(move |k| (i, k)))
            .map(|(i, k)| {
                (
                    axis.nodes[i],
                    axis.nodes[k],
                    axis.enveloped_weights[i] * axis.enveloped_weights[k],
                )
            })
            .collect();
        let ka = self.a_pairs.len();
        let kb = self.b_pairs.len();

        // Mode-a rows: [Re K..., −Im K...] · weight
        let a_rows: Vec<f64> = plane
            .par_iter()
            .flat_map_iter(|&(x, p, w)| {
                let k = Self::kernels(&self.a_pairs, x, p);
                let re: Vec<f64> = k.iter().map(|v| v.re * w).collect();
                let im: Vec<f64> = k.iter().map(|v| -v.im * w).collect();
                re.into_iter().chain(im)
            })
            .collect();

        // Mode-b columns contracted with the coefficients: M = C · K_b.
        let m_cols: Vec<f64> = plane
            .par_iter()
            .flat_map_iter(|&(y, p, w)| {
                let k = Self::kernels(&self.b_pairs, y, p);
                let m: Vec<Complex64> = (0..ka)
                    .map(|a| {
                        self.coeff[a * kb..(a + 1) * kb]
                            .iter()
                            .zip(&k)
                            .map(|(c, v)| c * v)
                            .sum::<Complex64>()
                            * w
                    })
                    .collect();
                let re: Vec<f64> = m.iter().map(|v| v.re).collect();
                let im: Vec<f64> = m.iter().map(|v| v.im).collect();
                re.into_iter().chain(im)
            })
            .collect();

        let width = 2 * ka;
        const BLOCK: usize = 8;
        let partial: Vec<(f64, f64)> = a_rows
            .par_chunks(width * BLOCK)
            .map(|rows| {
                let count = rows.len() / width;
                let mut abs = [0.0f64; BLOCK];
                let mut signed = [0.0f64; BLOCK];
                for col in m_cols.chunks_exact(width) {
                    for r in 0..count {
                        let w = dot(&rows[r * width..(r + 1) * width], col);
                        abs[r] += w.abs();
                        signed[r] += w;
                    }
                }
                (abs.iter().sum(), signed.iter().sum())
            })
            .collect();
        partial
            .iter()
            .fold((0.0, 0.0), |acc, v| (acc.0 + v.0, acc.1 + v.1))
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let tail: f64 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// `W(x, p_x, y, p_y)` of a pure state.
pub fn wigner_state(state: &TwoModeState, point: &PhasePoint) -> f64 {
    WignerOperator::from_state(state).eval(point)
}

/// `W(x, p_x, y, p_y)` of a density matrix.
pub fn wigner_density(rho: &DensityMatrix, point: &PhasePoint) -> f64 {
    WignerOperator::from_density(rho).eval(point)
}

/// `∫∫ W dp_x dp_y`. Equals `2 |ψ(√2 x, √2 y)|²` in the wavefunction's
/// coordinates.
pub fn wigner_position_marginal(state: &TwoModeState, x: f64, y: f64) -> f64 {
    WignerOperator::from_state(state).position_marginal(x, y)
}

/// Refinement limits for [`negativity_volume_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementLimits {
    pub max_refinements: usize,
    /// Orders above this are never attempted.
    pub max_order: usize,
}

impl Default for RefinementLimits {
    fn default() -> Self {
        RefinementLimits {
            max_refinements: 4,
            max_order: 192,
        }
    }
}

/// Negativity volume with its convergence record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativityResult {
    pub volume: f64,
    pub integral_abs: f64,
    pub normalization_check: f64,
    pub resolution_history: Vec<(usize, f64)>,
    pub converged: bool,
    /// `∫W` strayed from 1 by more than `10·tol`.
    pub under_resolved: bool,
    pub rule: WignerRule,
}

impl NegativityResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }
}

/// `½(∫|W| − ∫W)` with order doubling until successive estimates agree to `tol`.
pub fn negativity_volume(
    state: &TwoModeState,
    rule: &WignerRule,
    tol: f64,
) -> Result<NegativityResult> {
    negativity_volume_with(
        &WignerOperator::from_state(state),
        state.cutoff(),
        rule,
        tol,
        RefinementLimits::default(),
    )
}

pub fn negativity_volume_with(
    op: &WignerOperator,
    cutoff: usize,
    rule: &WignerRule,
    tol: f64,
    limits: RefinementLimits,
) -> Result<NegativityResult> {
    rule.validate()?;
    if !(tol > 0.0) {
        return Err(invalid("tol", "must be positive"));
    }
    let mut history: Vec<(usize, f64)> = Vec::new();
    let mut order = rule.order_per_axis;
    let mut last = (0.0, 0.0);
    let mut converged = false;
    let mut used = *rule;
    for step in 0..=limits.max_refinements {
        if step > 0 && order > limits.max_order {
            break;
        }
        used = rule.with_order(order);
        let (abs, signed) = op.integrate(&used.axis(cutoff));
        let volume = 0.5 * (abs - signed);
        if let Some(&(_, prev)) = history.last() {
            if (volume - prev).abs() < tol {
                converged = true;
            }
        }
        history.push((order, volume));
        last = (abs, signed);
        if converged {
            break;
        }
        order *= 2;
    }
    let (abs, signed) = last;
    Ok(NegativityResult {
        volume: 0.5 * (abs - signed),
        integral_abs: abs,
        normalization_check: signed,
        resolution_history: history,
        converged,
        under_resolved: (signed - 1.0).abs() > 10.0 * tol,
        rule: used,
    })
}

/// Phase-space coordinate label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coord {
    X,
    Px,
    Y,
    Py,
}

impl Coord {
    pub const ALL: [Coord; 4] = [Coord::X, Coord::Px, Coord::Y, Coord::Py];

    pub fn name(self) -> &'static str {
        match self {
            Coord::X => "x",
            Coord::Px => "p_x",
            Coord::Y => "y",
            Coord::Py => "p_y",
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Coord {
    type Err = crate::error::CoreError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(Coord::X),
            "px" | "p_x" => Ok(Coord::Px),
            "y" => Ok(Coord::Y),
            "py" | "p_y" => Ok(Coord::Py),
            _ => Err(invalid("coordinate", format!("unknown coordinate `{s}`"))),
        }
    }
}

/// Two fixed coordinates of a 2-D slice through phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlicePlane {
    pub fixed: [(Coord, f64); 2],
}

impl SlicePlane {
    pub fn new(first: (Coord, f64), second: (Coord, f64)) -> Result<Self> {
        if first.0 == second.0 {
            return Err(invalid("plane", "the two fixed coordinates must differ"));
        }
        Ok(SlicePlane {
            fixed: [first, second],
        })
    }

    /// The free coordinates in `(x, p_x, y, p_y)` order.
    pub fn free(&self) -> (Coord, Coord) {
        let mut it = Coord::ALL
            .into_iter()
            .filter(|c| self.fixed.iter().all(|(f, _)| f != c));
        (it.next().unwrap(), it.next().unwrap())
    }

    fn point(&self, c1: f64, c2: f64) -> PhasePoint {
        let mut q = PhasePoint::ORIGIN;
        for (c, v) in self.fixed {
            q.set(c, v);
        }
        let (f1, f2) = self.free();
        q.set(f1, c1);
        q.set(f2, c2);
        q
    }
}

/// `W` on a 2-D slice; the grid's x axis carries the first free coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerSlice {
    pub plane: SlicePlane,
    pub grid: QuadratureGrid,
    /// Row-major in the second free coordinate, then the first.
    pub values: Vec<f64>,
}

impl WignerSlice {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.n_x + i]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Whether any sample lies below `−threshold`.
    pub fn has_negative(&self, threshold: f64) -> bool {
        self.min() < -threshold
    }

    pub fn to_csv(&self) -> String {
        let (f1, f2) = self.plane.free();
        let mut out = String::with_capacity(self.values.len() * 48);
        let _ = writeln!(out, "{},{},w", f1.name(), f2.name());
        for j in 0..self.grid.n_y {
            for i in 0..self.grid.n_x {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    self.grid.x(i),
                    self.grid.y(j),
                    self.at(i, j)
                );
            }
        }
        out
    }
}

/// Evaluates `W` of `state` on a 2-D slice.
pub fn wigner_slice(
    state: &TwoModeState,
    plane: &SlicePlane,
    grid: &QuadratureGrid,
) -> Result<WignerSlice> {
    grid.validate()?;
    let op = WignerOperator::from_state(state);
    let values = (0..grid.n_y)
        .into_par_iter()
        .flat_map_iter(|j| {
            let op = &op;
            (0..grid.n_x).map(move |i| op.eval(&plane.point(grid.x(i), grid.y(j))))
        })
        .collect();
    Ok(WignerSlice {
        plane: *plane,
        grid: *grid,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beamsplitter::apply_beam_splitter;
    use crate::fock::{make_tmss, SqueezeParams};
    use crate::quadrature::evaluate_field;
    use std::f64::consts::{PI, SQRT_2};

    fn vortex(r: f64, n: usize) -> TwoModeState {
        apply_beam_splitter(&make_tmss(SqueezeParams::new(r, n).unwrap()).unwrap())
    }

    #[test]
    fn product_state_values_at_origin() {
        let w = wigner_state(&TwoModeState::fock(0, 0), &PhasePoint::ORIGIN);
        assert!((w - 4.0 / (PI * PI)).abs() < 1e-15);
        let w = wigner_state(&TwoModeState::fock(1, 0), &PhasePoint::ORIGIN);
        assert!((w + 4.0 / (PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn pure_and_density_paths_agree() {
        let s = vortex(0.6, 2);
        let rho = crate::fock::state_to_density(&s);
        for q in [
            PhasePoint::new(0.1, -0.3, 0.5, 0.2),
            PhasePoint::new(-0.8, 0.0, 0.1, 0.9),
        ] {
            assert!((wigner_state(&s, &q) - wigner_density(&rho, &q)).abs() < 1e-14);
        }
    }

    #[test]
    fn marginal_matches_wavefunction() {
        let s = vortex(0.8, 3);
        let g = QuadratureGrid::new(-1.0, 1.0, 5, -1.2, 0.8, 5).unwrap();
        let scaled =
            QuadratureGrid::new(-SQRT_2, SQRT_2, 5, -1.2 * SQRT_2, 0.8 * SQRT_2, 5).unwrap();
        let field = evaluate_field(&s, &scaled);
        for j in 0..5 {
            for i in 0..5 {
                let m = wigner_position_marginal(&s, g.x(i), g.y(j));
                let want = 2.0 * field.at(i, j).norm_sqr();
                assert!((m - want).abs() < 1e-10, "({i},{j}): {m} vs {want}");
            }
        }
    }

    #[test]
    fn integrates_to_one_and_respects_bound() {
        let s = vortex(0.9, 4);
        let op = WignerOperator::from_state(&s);
        let (_, signed) = op.integrate(&WignerRule::gauss_hermite(24).axis(s.cutoff()));
        assert!((signed - 1.0).abs() < 1e-10, "{signed}");
        let bound = 4.0 / (PI * PI) + 1e-9;
        for k in 0..200 {
            let t = k as f64 * 0.37;
            let q = PhasePoint::new(
                t.sin() * 1.5,
                (1.3 * t).cos(),
                (0.7 * t).sin(),
                (2.1 * t).cos() * 0.8,
            );
            assert!(op.eval(&q).abs() <= bound);
        }
    }

    #[test]
    fn vacuum_has_zero_negativity() {
        let r = negativity_volume(&TwoModeState::fock(0, 0), &WignerRule::default(), 1e-3).unwrap();
        assert!(r.volume.abs() < 1e-12);
        assert!(r.converged);
        assert_eq!(r.resolution_history.len(), 2);
    }

    #[test]
    fn single_photon_negativity_volume() {
        // single-mode |1⟩: NV = 2e^{-1/2} − 1
        let want = 2.0 * (-0.5f64).exp() - 1.0;
        let r = negativity_volume(&TwoModeState::fock(1, 0), &WignerRule::default(), 1e-3).unwrap();
        assert!(r.converged);
        assert!(
            (r.volume - want).abs() < 1e-3,
            "{} vs {want}: {:?}",
            r.volume,
            r.resolution_history
        );
    }

    #[test]
    fn negativity_is_splitter_invariant() {
        let tmss = make_tmss(SqueezeParams::new(0.9, 2).unwrap()).unwrap();
        let tol = 1e-3;
        let a = negativity_volume(&tmss, &WignerRule::default(), tol).unwrap();
        let b =
            negativity_volume(&apply_beam_splitter(&tmss), &WignerRule::default(), tol).unwrap();
        assert!(
            (a.volume - b.volume).abs() < 2.0 * tol,
            "{} vs {}",
            a.volume,
            b.volume
        );
    }

    #[test]
    fn uniform_box_agrees_with_gauss_hermite() {
        let s = vortex(0.9, 1);
        let op = WignerOperator::from_state(&s);
        let (abs_gh, _) = op.integrate(&WignerRule::gauss_hermite(48).axis(s.cutoff()));
        let (abs_box, signed_box) =
            op.integrate(&WignerRule::uniform_box(48, None).axis(s.cutoff()));
        assert!((signed_box - 1.0).abs() < 1e-3);
        assert!((abs_gh - abs_box).abs() < 5e-3);
    }

    #[test]
    fn slice_planes_and_symmetry() {
        let s = vortex(0.9, 2);
        let p1 = SlicePlane::new((Coord::Y, 0.0), (Coord::Px, 0.0)).unwrap();
        let p2 = SlicePlane::new((Coord::X, 0.0), (Coord::Py, 0.0)).unwrap();
        assert_eq!(p1.free(), (Coord::X, Coord::Py));
        assert_eq!(p2.free(), (Coord::Px, Coord::Y));
        let g = QuadratureGrid::square(2.0, 9).unwrap();
        let a = wigner_slice(&s, &p1, &g).unwrap();
        let b = wigner_slice(&s.swap_modes(), &p2, &g).unwrap();
        // swapping modes maps (x, p_y) on plane 1 to (p_x, y) = (p_y, x) on plane 2
        for j in 0..9 {
            for i in 0..9 {
                assert!((a.at(i, j) - b.at(j, i)).abs() < 1e-13);
            }
        }
        assert!(a.to_csv().starts_with("x,p_y,w\n"));
        assert!(SlicePlane::new((Coord::X, 0.0), (Coord::X, 1.0)).is_err());
    }

    #[test]
    fn vacuum_slice_is_positive() {
        let plane = SlicePlane::new((Coord::Y, 0.0), (Coord::Px, 0.0)).unwrap();
        let s = wigner_slice(
            &TwoModeState::fock(0, 0),
            &plane,
            &QuadratureGrid::square(3.0, 31).unwrap(),
        )
        .unwrap();
        assert!(s.min() > 0.0);
    }

    #[test]
    fn vortex_state_is_invariant_under_joint_rotation() {
        let s = vortex(0.7, 3);
        let op = WignerOperator::from_state(&s);
        for k in 0..20 {
            let t = k as f64;
            let q = PhasePoint::new(
                0.3 * t.sin(),
                0.5 * (0.3 * t).cos(),
                0.4 * (1.7 * t).cos(),
                -0.2 * t.sin(),
            );
            let w = op.eval(&q);
            let w2 = op.eval(&q.rotate_joint(0.3 + 0.1 * t));
            assert!((w - w2).abs() < 1e-12);
        }
    }
}
