//! Level-k modular data, fusion rules, shadow invariants of links in
//! surface x circle, and the torus-gauge Chern-Simons state sum.

pub mod cssum;
pub mod error;
pub mod liealg;
pub mod links;
pub mod modular;
mod par;
pub mod qracah;
pub mod repchar;
pub mod shadowlink;
mod sum;
pub mod verify;
pub mod weight;

pub use error::{Error, Result};
pub use liealg::{AlgebraSpec, Family, RootSystem, WeylElement};
pub use modular::{build_modular_data, CheckReport, ModularData};
pub use weight::{RatWeight, Weight};
pub use verify::{verify, Tolerances, VerifyReport};
