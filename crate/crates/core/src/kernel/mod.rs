//! Finite-`n` determinantal structure: Jacobi polynomials, the correlation
//! kernel, gap probabilities and max-height densities.

mod context;
mod fredholm;
mod jacobi;

pub use context::{correlation_rho, kernel_k, KernelContext};
pub use fredholm::{
    density_table, gap_probability_e0, gap_probability_fixed, max_height_pdf, DensityRow, GapEvaluation, GapRequest,
};
pub use jacobi::{jacobi_eval, jacobi_eval_log, jacobi_ln_norm, jacobi_norm, jacobi_table, JacobiParams};
