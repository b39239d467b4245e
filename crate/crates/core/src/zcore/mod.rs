//! Z-channel metric machinery, code validation, free points and the code file format.

mod code;
mod io;
mod word;

pub use code::{
    free_points, validate_code, vt_code, weight_distribution, Code, FreePoints, ValidationReport,
    WeightDistribution,
};
pub(crate) use code::free_count_raw;
pub use io::{format_code, parse_code, read_code, write_code};
pub use word::{downward_shadow, raw_dz, z_metrics, Word, ZMetrics, MAX_LEN};
pub(crate) use word::{mask, shadow1_raw};
