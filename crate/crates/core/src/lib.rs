//! Exact solution counting for the General Factor problem over tree
//! decompositions and linear layouts, with a brute-force oracle, realization
//! gadgets and a CNF reduction.

pub mod decomp;
pub mod formats;
pub mod gadgets;
mod degree;
mod error;
mod graph;
mod instance;
pub mod ntt;
pub mod oracle;
mod profile;
pub mod reduce;
mod relation;
pub mod solver_cutw;
pub mod solver_tw;
pub mod weight;

pub use num_bigint;

pub use degree::DegreeList;
pub use error::{Error, Result};
pub use graph::{EdgeId, MultiGraph, Vertex};
pub use instance::{Constraint, Instance};
pub use profile::{profile_summary, ProfileSummary, SizeProfile};
pub use relation::{Relation, MAX_ARITY};
