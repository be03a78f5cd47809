//! Position-space wavefunction `ψ(x, y) = Σ c_{ab} ψ_a(x) ψ_b(y)` and
//! phase-singularity detection on a sampled grid.

use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, CoreError, Result};
use crate::fock::{Mode, TwoModeState};
use crate::special::hermite_functions;

/// Phase steps closer than this to ±π are sign flips of a locally real
/// field, not resolvable circulation.
const AMBIGUOUS_STEP: f64 = 1e-6;

/// Rectangular sampling grid in quadrature units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub n_x: usize,
    pub n_y: usize,
}

impl Default for QuadratureGrid {
    /// `[-6, 6]²` with 301 × 301 nodes.
    fn default() -> Self {
        QuadratureGrid {
            x_min: -6.0,
            x_max: 6.0,
            y_min: -6.0,
            y_max: 6.0,
            n_x: 301,
            n_y: 301,
        }
    }
}

impl QuadratureGrid {
    pub fn new(
        x_min: f64,
        x_max: f64,
        n_x: usize,
        y_min: f64,
        y_max: f64,
        n_y: usize,
    ) -> Result<Self> {
        let g = QuadratureGrid {
            x_min,
            x_max,
            y_min,
            y_max,
            n_x,
            n_y,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn square(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n, -half_width, half_width, n)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min < self.x_max) {
            return Err(invalid("grid.x", "x_min must be below x_max"));
        }
        if !(self.y_min < self.y_max) {
            return Err(invalid("grid.y", "y_min must be below y_max"));
        }
        if self.n_x < 2 || self.n_y < 2 {
            return Err(invalid("grid.n", "at least 2 samples per axis"));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_x - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.n_y - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_min + j as f64 * self.dy()
    }

    /// Same bounds, `2n − 1` samples per axis (every old node is kept).
    pub fn refined(&self) -> Self {
        QuadratureGrid {
            n_x: 2 * self.n_x - 1,
            n_y: 2 * self.n_y - 1,
            ..*self
        }
    }
}

/// Parses `min:max:n` (both axes) or `xmin:xmax:nx,ymin:ymax:ny`.
impl FromStr for QuadratureGrid {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        fn axis(part: &str) -> Result<(f64, f64, usize)> {
            let f: Vec<&str> = part.split(':').collect();
            if f.len() != 3 {
                return Err(invalid("grid", format!("expected min:max:n, got `{part}`")));
            }
            let lo = f[0]
                .trim()
                .parse()
                .map_err(|_| invalid("grid", format!("bad number `{}`", f[0])))?;
            let hi = f[1]
                .trim()
                .parse()
                .map_err(|_| invalid("grid", format!("bad number `{}`", f[1])))?;
            let n = f[2]
                .trim()
                .parse()
                .map_err(|_| invalid("grid", format!("bad count `{}`", f[2])))?;
            Ok((lo, hi, n))
        }
        let parts: Vec<&str> = s.split(',').collect();
        let (x, y) = match parts.as_slice() {
            [one] => {
                let a = axis(one)?;
                (a, a)
            }
            [xs, ys] => (axis(xs)?, axis(ys)?),
            _ => return Err(invalid("grid", format!("cannot parse `{s}`"))),
        };
        QuadratureGrid::new(x.0, x.1, x.2, y.0, y.1, y.2)
    }
}

/// Complex field sampled on a [`QuadratureGrid`], stored row-major in `y`
/// then `x` (`values[j * n_x + i]` is the node `(x_i, y_j)`).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureField {
    pub grid: QuadratureGrid,
    pub values: Vec<Complex64>,
}

impl QuadratureField {
    pub fn from_fn(grid: QuadratureGrid, f: impl Fn(f64, f64) -> Complex64 + Sync) -> Self {
        let values = (0..grid.n_y)
            .into_par_iter()
            .flat_map_iter(|j| {
                let y = grid.y(j);
                let f = &f;
                (0..grid.n_x).map(move |i| f(grid.x(i), y))
            })
            .collect();
        QuadratureField { grid, values }
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[j * self.grid.n_x + i]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Riemann sum of `|ψ|²` over the grid.
    pub fn norm_estimate(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dx() * self.grid.dy()
    }

    /// CSV with header `x,y,re,im,abs,arg`, rows ordered by `y` then `x`.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 80);
        out.push_str("x,y,re,im,abs,arg\n");
        for j in 0..self.grid.n_y {
            let y = self.grid.y(j);
            for i in 0..self.grid.n_x {
                let v = self.at(i, j);
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    self.grid.x(i),
                    y,
                    v.re,
                    v.im,
                    v.norm(),
                    v.arg()
                );
            }
        }
        out
    }
}

/// Samples `ψ(x, y)` of `state` on `grid`.
pub fn evaluate_field(state: &TwoModeState, grid: &QuadratureGrid) -> QuadratureField {
    let max_a = state.max_photons(Mode::A);
    let max_b = state.max_photons(Mode::B);
    let hx: Vec<Vec<f64>> = (0..grid.n_x)
        .map(|i| hermite_functions(max_a, grid.x(i)))
        .collect();
    let hy: Vec<Vec<f64>> = (0..grid.n_y)
        .map(|j| hermite_functions(max_b, grid.y(j)))
        .collect();
    let terms: Vec<_> = state.iter().collect();
    let values = (0..grid.n_y)
        .into_par_iter()
        .flat_map_iter(|j| {
            let hy = &hy[j];
            let hx = &hx;
            let terms = &terms;
            (0..grid.n_x).map(move |i| {
                let row = &hx[i];
                terms
                    .iter()
                    .map(|(k, c)| c * (row[k.na] * hy[k.nb]))
                    .sum::<Complex64>()
            })
        })
        .collect();
    QuadratureField {
        grid: *grid,
        values,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vortex {
    pub x: f64,
    pub y: f64,
    pub charge: i64,
}

/// Phase singularities found on a sampled field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VortexReport {
    pub vortices: Vec<Vortex>,
    pub total_charge: i64,
    pub count: usize,
    /// Loops skipped because a phase step sat at ±π (nodal-line crossings).
    pub ambiguous_plaquettes: usize,
}

impl VortexReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn wrap(d: f64) -> f64 {
    let w = (d + PI).rem_euclid(TAU) - PI;
    if w <= -PI {
        w + TAU
    } else {
        w
    }
}

enum Loop {
    Quiet,
    Skipped,
    Ambiguous,
    Winding(i64),
}

fn loop_winding(points: &[Complex64], floor: f64) -> Loop {
    if points.iter().any(|p| p.norm() <= floor) {
        return Loop::Skipped;
    }
    let mut sum = 0.0;
    for idx in 0..points.len() {
        let a = points[idx];
        let b = points[(idx + 1) % points.len()];
        let step = wrap(b.arg() - a.arg());
        if PI - step.abs() < AMBIGUOUS_STEP {
            return Loop::Ambiguous;
        }
        sum += step;
    }
    let w = sum / TAU;
    let n = w.round();
    debug_assert!((w - n).abs() < 1e-9, "winding not quantized: {w}");
    if n == 0.0 {
        Loop::Quiet
    } else {
        Loop::Winding(n as i64)
    }
}

/// Counts phase singularities by plaquette winding.
///
/// Every plaquette whose four corners exceed `amplitude_floor` (absolute)
/// contributes the winding of `arg ψ` around it, counter-clockwise. A grid
/// node that is itself below the floor is probed with the eight-node ring
/// around it instead. Adjacent loops of the same charge merge into one
/// vortex located at their centroid.
pub fn count_vortices(field: &QuadratureField, amplitude_floor: f64) -> Result<VortexReport> {
    if !(amplitude_floor > 0.0) {
        return Err(invalid("amplitude_floor", "must be positive"));
    }
    if field
        .values
        .iter()
        .any(|v| !(v.re.is_finite() && v.im.is_finite()))
    {
        return Err(invalid("field", "contains non-finite values"));
    }
    let g = field.grid;
    let (nx, ny) = (g.n_x, g.n_y);
    // hits are indexed on the doubled lattice so plaquette centres and
    // nodes can share one adjacency structure
    let mut hits: Vec<(usize, usize, i64)> = Vec::new();
    let mut ambiguous = 0;

    let plaquettes: Vec<(usize, usize, Loop)> = (0..ny - 1)
        .into_par_iter()
        .flat_map_iter(|j| {
            (0..nx - 1).map(move |i| {
                let corners = [
                    field.at(i, j),
                    field.at(i + 1, j),
                    field.at(i + 1, j + 1),
                    field.at(i, j + 1),
                ];
                (i, j, loop_winding(&corners, amplitude_floor))
            })
        })
        .collect();
    for (i, j, l) in plaquettes {
        match l {
            Loop::Winding(w) => {
                if w.abs() > 1 {
                    return Err(CoreError::GridTooCoarse {
                        x: g.x(i) + 0.5 * g.dx(),
                        y: g.y(j) + 0.5 * g.dy(),
                        winding: w,
                    });
                }
                hits.push((2 * i + 1, 2 * j + 1, w));
            }
            Loop::Ambiguous => ambiguous += 1,
            Loop::Quiet | Loop::Skipped => {}
        }
    }

    for j in 1..ny.saturating_sub(1) {
        for i in 1..nx.saturating_sub(1) {
            if field.at(i, j).norm() > amplitude_floor {
                continue;
            }
            let ring = [
                field.at(i - 1, j - 1),
                field.at(i, j - 1),
                field.at(i + 1, j - 1),
                field.at(i + 1, j),
                field.at(i + 1, j + 1),
                field.at(i, j + 1),
                field.at(i - 1, j + 1),
                field.at(i - 1, j),
            ];
            match loop_winding(&ring, amplitude_floor) {
                Loop::Winding(w) if w.abs() > 1 => {
                    return Err(CoreError::GridTooCoarse {
                        x: g.x(i),
                        y: g.y(j),
                        winding: w,
                    })
                }
                Loop::Winding(w) => hits.push((2 * i, 2 * j, w)),
                Loop::Ambiguous => ambiguous += 1,
                _ => {}
            }
        }
    }

    let vortices = merge_hits(&hits, &g);
    let total_charge = vortices.iter().map(|v| v.charge).sum();
    Ok(VortexReport {
        count: vortices.len(),
        total_charge,
        vortices,
        ambiguous_plaquettes: ambiguous,
    })
}

fn merge_hits(hits: &[(usize, usize, i64)], g: &QuadratureGrid) -> Vec<Vortex> {
    use std::collections::HashMap;
    let index: HashMap<(usize, usize), usize> = hits
        .iter()
        .enumerate()
        .map(|(n, h)| ((h.0, h.1), n))
        .collect();
    let mut seen = vec![false; hits.len()];
    let mut out = Vec::new();
    for start in 0..hits.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let charge = hits[start].2;
        let mut queue = VecDeque::from([start]);
        let (mut sx, mut sy, mut count) = (0.0, 0.0, 0usize);
        while let Some(n) = queue.pop_front() {
            let (a, b, _) = hits[n];
            sx += g.x_min + a as f64 * 0.5 * g.dx();
            sy += g.y_min + b as f64 * 0.5 * g.dy();
            count += 1;
            for da in -2i64..=2 {
                for db in -2i64..=2 {
                    let (na, nb) = (a as i64 + da, b as i64 + db);
                    if na < 0 || nb < 0 {
                        continue;
                    }
                    if let Some(&m) = index.get(&(na as usize, nb as usize)) {
                        if !seen[m] && hits[m].2 == charge {
                            seen[m] = true;
                            queue.push_back(m);
                        }
                    }
                }
            }
        }
        out.push(Vortex {
            x: sx / count as f64,
            y: sy / count as f64,
            charge,
        });
    }
    out.sort_by(|p, q| p.y.total_cmp(&q.y).then(p.x.total_cmp(&q.x)));
    out
}

/// Counts circular nodal lines crossed along the ray `y ≈ 0, x > 0` when
/// the field is real up to one global phase; `None` otherwise.
///
/// Radially symmetric real fields carry ring-shaped zeros rather than
/// point vortices; this is the count of those rings.
pub fn count_nodal_rings(field: &QuadratureField, amplitude_floor: f64) -> Option<usize> {
    let g = field.grid;
    let peak = field
        .values
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))?;
    if peak.norm() <= amplitude_floor {
        return None;
    }
    let unphase = peak.conj() / peak.norm();
    let j0 = (0..g.n_y).min_by(|a, b| g.y(*a).abs().total_cmp(&g.y(*b).abs()))?;
    let ray: Vec<Complex64> = (0..g.n_x)
        .filter(|i| g.x(*i) >= 0.0)
        .map(|i| field.at(i, j0) * unphase)
        .collect();
    let scale = peak.norm();
    if ray.iter().any(|v| v.im.abs() > 1e-8 * scale) {
        return None;
    }
    let mut rings = 0;
    let mut last_sign = 0.0;
    for v in ray {
        if v.re.abs() <= amplitude_floor {
            continue;
        }
        let s = v.re.signum();
        if last_sign != 0.0 && s != last_sign {
            rings += 1;
        }
        last_sign = s;
    }
    Some(rings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beamsplitter::apply_beam_splitter;

    fn gaussian(x: f64, y: f64) -> f64 {
        (-(x * x + y * y) / 2.0).exp()
    }

    #[test]
    fn grid_parsing() {
        let g: QuadratureGrid = "-6:6:301".parse().unwrap();
        assert_eq!(g, QuadratureGrid::default());
        let g: QuadratureGrid = "-2:2:11,-1:3:5".parse().unwrap();
        assert_eq!((g.n_x, g.n_y, g.y_min, g.y_max), (11, 5, -1.0, 3.0));
        assert!("3:1:10".parse::<QuadratureGrid>().is_err());
        assert!("0:1:1".parse::<QuadratureGrid>().is_err());
        assert!("0:1".parse::<QuadratureGrid>().is_err());
    }

    #[test]
    fn vacuum_field_is_gaussian_without_vortices() {
        let g = QuadratureGrid::square(4.0, 81).unwrap();
        let f = evaluate_field(&TwoModeState::fock(0, 0), &g);
        for j in (0..g.n_y).step_by(7) {
            for i in (0..g.n_x).step_by(5) {
                let want = gaussian(g.x(i), g.y(j)) / PI.sqrt();
                assert!((f.at(i, j).re - want).abs() < 1e-14);
                assert_eq!(f.at(i, j).im, 0.0);
            }
        }
        let rep = count_vortices(&f, 1e-12).unwrap();
        assert_eq!(rep.count, 0);
    }

    #[test]
    fn hong_ou_mandel_field_vanishes_on_unit_circle() {
        let s = apply_beam_splitter(&TwoModeState::fock(1, 1));
        for k in 0..32 {
            let phi = k as f64 * TAU / 32.0;
            let g =
                QuadratureGrid::new(phi.cos(), phi.cos() + 1.0, 2, phi.sin(), phi.sin() + 1.0, 2)
                    .unwrap();
            let f = evaluate_field(&s, &g);
            assert!(f.at(0, 0).norm() < 1e-6);
        }
    }

    #[test]
    fn synthetic_single_vortex() {
        let g = QuadratureGrid::square(3.0, 200).unwrap();
        let f = QuadratureField::from_fn(g, |x, y| Complex64::new(x, -y) * gaussian(x, y));
        let rep = count_vortices(&f, 1e-12).unwrap();
        assert_eq!(rep.count, 1);
        assert_eq!(rep.vortices[0].charge, -1);
        assert!(rep.vortices[0].x.abs() < g.dx() && rep.vortices[0].y.abs() < g.dy());
    }

    #[test]
    fn vortex_on_a_grid_node_is_found() {
        // odd sample count puts the zero exactly on the centre node
        let g = QuadratureGrid::square(3.0, 201).unwrap();
        let f = QuadratureField::from_fn(g, |x, y| Complex64::new(x, y) * gaussian(x, y));
        let rep = count_vortices(&f, 1e-12).unwrap();
        assert_eq!(rep.count, 1);
        assert_eq!(rep.total_charge, 1);
    }

    #[test]
    fn double_charge_reports_coarse_grid() {
        // four plaquette corners alias a double winding; the zero sits on a
        // node so the eight-node ring sees it
        let g = QuadratureGrid::square(3.0, 201).unwrap();
        let f = QuadratureField::from_fn(g, |x, y| Complex64::new(x, y).powi(2) * gaussian(x, y));
        assert!(matches!(
            count_vortices(&f, 1e-12),
            Err(CoreError::GridTooCoarse { winding: 2, .. })
        ));
    }

    #[test]
    fn total_charge_stable_under_refinement() {
        let vortex_field = |x: f64, y: f64| {
            Complex64::new(x - 1.0, y)
                * Complex64::new(x + 1.0, -y)
                * Complex64::new(x, y - 1.5)
                * gaussian(x, y)
        };
        let g = QuadratureGrid::new(-4.0, 4.0, 120, -4.0, 4.0, 110).unwrap();
        let coarse = count_vortices(&QuadratureField::from_fn(g, vortex_field), 1e-12).unwrap();
        let fine =
            count_vortices(&QuadratureField::from_fn(g.refined(), vortex_field), 1e-12).unwrap();
        assert_eq!(coarse.count, 3);
        assert_eq!(coarse.total_charge, 1);
        assert_eq!(fine.total_charge, coarse.total_charge);
        assert_eq!(fine.count, coarse.count);
    }

    #[test]
    fn nonpositive_floor_rejected() {
        let g = QuadratureGrid::square(1.0, 5).unwrap();
        let f = evaluate_field(&TwoModeState::fock(0, 0), &g);
        assert!(count_vortices(&f, 0.0).is_err());
    }

    #[test]
    fn fock_pair_through_splitter_has_rings_not_vortices() {
        for n in 1..=4 {
            let s = apply_beam_splitter(&TwoModeState::fock(n, n));
            let f = evaluate_field(&s, &QuadratureGrid::default());
            let rep = count_vortices(&f, 1e-12).unwrap();
            assert_eq!(rep.count, 0, "n = {n}");
            assert_eq!(count_nodal_rings(&f, 1e-12), Some(n));
        }
    }

    #[test]
    fn norm_on_default_grid() {
        let s = apply_beam_splitter(&TwoModeState::fock(3, 3));
        let f = evaluate_field(&s, &QuadratureGrid::default());
        assert!((f.norm_estimate() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn csv_layout() {
        let g = QuadratureGrid::new(0.0, 1.0, 2, 0.0, 2.0, 3).unwrap();
        let csv = evaluate_field(&TwoModeState::fock(0, 0), &g).to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,y,re,im,abs,arg");
        assert_eq!(lines.len(), 7);
        assert!(lines[1].starts_with("0,0,"));
        assert!(lines[2].starts_with("1,0,"));
        assert!(lines[3].starts_with("0,1,"));
    }
}
