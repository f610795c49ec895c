//! Soft-edge asymptotics: the Airy function, the extended Airy kernel, its
//! Fredholm determinants (Tracy-Widom `F2` in the single-time case), edge
//! scaling frames and the corner laws.

mod airy;
mod corner;
mod determinant;
mod frame;
mod process;

pub use airy::{airy, airy_ai, airy_ai_prime, AI_PRIME_ZERO, AI_ZERO, MAX_ARGUMENT, SERIES_LIMIT};
pub use corner::{
    corner_cdf, corner_exponent, exp1_cdf, exponential_corner_scaled, gumbel_cdf, uniform_corner_scaled,
};
pub use determinant::{
    fredholm_det_airy, fredholm_det_airy_fixed, nystrom_det, tracy_widom_cdf, tracy_widom_cdf_with,
    tracy_widom_summary, tracy_widom_table, AiryDeterminant, KernelForm, TracyWidomSummary, TW_MEAN, TW_MEDIAN,
    TW_VARIANCE,
};
pub use frame::{
    edge_constants, johnstone_check, scaling_frame_general, scaling_frame_uniform, uniform_edge, JohnstoneVars,
    ScalingFrame,
};
pub use process::{
    airy_kernel, airy_process_kernel, airy_process_kernel_quadrature, extended_matrix, extended_matrix_quadrature,
    heat_term,
};
