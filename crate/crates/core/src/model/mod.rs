//! Configurations, coordinate changes, height laws and the exact density.

mod density;
mod distribution;
mod grid;
mod lines;
mod normalization;

pub use density::{
    joint_density, log_joint_density, rejection_sample, rejection_sample_capped, RejectionStats, DEFAULT_MAX_ATTEMPTS,
};
pub use distribution::{HeightDistribution, TabulatedCdf};
pub use grid::{validate_grid, GridConfig};
pub use lines::{
    cdf_transform, grid_to_lines, grid_to_lines_unchecked, interlacing_valid, inverse_transform, line_size,
    lines_to_grid, lines_to_grid_unchecked, LineSystem,
};
pub use normalization::{hook_length_constant, normalization_constant, NormalizationConstant};

