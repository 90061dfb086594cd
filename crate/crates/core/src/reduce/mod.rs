//! CNF formulas to relation instances to homogeneous factor instances.

mod bfr;
mod cnf;
mod factor;

pub use bfr::{cell_relation, check_bfr, cnf_to_bfr, normalize_parity, BfrInstance, C_IMPL};
pub use cnf::CnfFormula;
pub use factor::{bfr_to_bfactor, FactorInstance};
