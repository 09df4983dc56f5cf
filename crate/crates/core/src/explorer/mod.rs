//! Parameter sweeps and exhaustive shoe searches.

pub mod search;
pub mod sweep;

pub use search::{
    expected_advantage, multisets, search_shoes, shoe_weight, AdvantageRecord, Catalog, SearchParams,
};
pub use sweep::{detect_boundaries, ordering, sweep, Boundary, BoundaryKind, Ordering3, SweepPoint, SweepSpec};
