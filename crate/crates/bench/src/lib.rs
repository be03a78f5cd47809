//! Fixture states shared by the benchmarks.

use fockvortex::{apply_beam_splitter, make_tmss, SqueezeParams, TwoModeState};

pub fn squeezed(r: f64, n: usize) -> TwoModeState {
    make_tmss(SqueezeParams::new(r, n).expect("valid parameters")).expect("valid parameters")
}

pub fn vortex(r: f64, n: usize) -> TwoModeState {
    apply_beam_splitter(&squeezed(r, n))
}
