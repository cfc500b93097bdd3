//! Shared inputs for the criterion benches.

use rrtlab_core::limits::CanonicalFdd;

/// Tree sizes used by the sampler benches.
pub const SIZES: [u32; 3] = [1 << 10, 1 << 14, 1 << 18];

/// Exact levels 0..3 over the whole line, the shape used in mean-count runs.
pub fn level_fdd() -> CanonicalFdd {
    "0:(-inf,inf),1:(-inf,inf),2:(-inf,inf),>=3:(-inf,inf)".parse().expect("canonical")
}
