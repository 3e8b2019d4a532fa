//! Edge coloring: the split-palette `(2Δ−1)` protocol, the one-round small-Δ
//! protocol, and the silent `2Δ` protocol.

mod cover;
mod defer;
mod fournier;
mod matching;
mod palette;
mod protocol;

pub use cover::{edge_sample_broadcast, AvailabilityCover};
pub use defer::{defer_edges, LocalDecomposition};
pub use fournier::fournier_color;
pub use matching::{delta_perfect_matching, hopcroft_karp};
pub use palette::{partition_palette, PaletteSplit};
pub use protocol::{
    color_deferred, color_matching_edges, edge_coloring_protocol, small_delta_protocol, two_delta_protocol, EdgeRun,
    EdgeStats, MASK_COLORS,
};
