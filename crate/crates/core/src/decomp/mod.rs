//! Tree decompositions, nice decompositions and linear layouts.

mod heuristic;
mod layout;
mod nice;
mod td;

pub use heuristic::{heuristic_layout, heuristic_td, min_fill_ordering, td_from_ordering};
pub use layout::{cutwidth_of_layout, LinearLayout};
pub use nice::{make_nice, NiceDecomposition, NiceKind, NiceNode};
pub use td::{validate_td, TreeDecomposition};
