//! Parameters, amplitude containers, reduced density matrices and
//! entanglement measures for two atoms coupled to the vacuum field.

pub mod amplitudes;
pub mod builders;
pub mod measures;
pub mod params;

pub use amplitudes::{AmplitudeSet, TwoPhotonChannel, TwoPhotonGram};
pub use builders::{
    build_rho_a, build_rho_ab, build_rho_af, build_rho_f, reduce_ab_to_atom, reduce_af_to_atom, reduce_af_to_field,
    QubitQutritState, QubitState, QutritState, XState,
};
pub use measures::{
    concurrence_wootters, concurrence_x, i_concurrence, negativity_af, negativity_generic, MeasureError, MeasureValue,
    Method,
};
pub use num_complex::Complex64;
pub use params::{CouplingParams, Cutoff, DipoleChannel, EvalPoint, InitialWeights, ParamError, TruncationPolicy};
