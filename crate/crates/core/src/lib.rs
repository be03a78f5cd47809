//! Numerical engine for beam-splitter vortex states of two-mode squeezed
//! light.
//!
//! A truncated two-mode squeezed vacuum is built in the Fock basis, sent
//! through a 50:50 beam splitter, and analysed through its quadrature
//! wavefunction, its Wigner function and the logarithmic negativity of its
//! partial transpose.

pub mod beamsplitter;
pub mod eigen;
pub mod entanglement;
pub mod error;
pub mod fock;
pub mod gauss_hermite;
pub mod quadrature;
pub mod special;
pub mod tolerance;
pub mod wigner;

pub use beamsplitter::{
    apply_beam_splitter, closed_form_amplitudes, closed_form_diagnostic, closed_form_vortex_state,
    photon_number_marginal, photon_number_variance, BeamSplitter, BsCoefficient,
    ClosedFormDiagnostic, PrefactorConvention,
};
pub use eigen::{hermitian_eigen, HermitianEigen, HermitianMatrix};
pub use entanglement::{
    entanglement_ratio, log_negativity, partial_transpose, partial_transpose_spectrum,
    state_log_negativity, EntanglementRatio, EntanglementReport, PartialTranspose,
};
pub use error::{CoreError, Result};
pub use fock::{
    make_tmss, state_to_density, total_photon_distribution, DensityMatrix, FockPair, Mode,
    SqueezeParams, TwoModeState,
};
pub use num_complex::Complex64;
pub use quadrature::{
    count_nodal_rings, count_vortices, evaluate_field, QuadratureField, QuadratureGrid, Vortex,
    VortexReport,
};
pub use tolerance::Tolerances;
pub use wigner::{
    diagonal_form_comparison, negativity_volume, negativity_volume_with, wigner_density,
    wigner_diagonal_form, wigner_position_marginal, wigner_slice, wigner_state, Coord,
    NegativityResult, PhasePoint, RefinementLimits, SlicePlane, WignerOperator, WignerRule,
    WignerSlice,
};
