//! Special functions and quadrature shared by the kernels and the oracle.

pub mod quad;
pub mod special;

pub use num_complex::Complex64;
pub use quad::{GaussLegendre, QuadError, QuadOptions};
pub use special::{e1_scaled_imag, ei, ei_imag_minus_log, sin_cos_integrals, SpecialError, EULER_GAMMA};

/// Carrier for complex amplitudes throughout the workspace.
pub type ComplexScalar = Complex64;
