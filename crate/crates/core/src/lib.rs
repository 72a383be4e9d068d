//! Phase-covariant qubit channels, their dynamical maps, and Holevo and
//! entanglement-assisted classical capacities.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod channel;
pub mod choi;
pub mod dynamics;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod numeric;
pub mod oracle;
pub mod state;

pub use channel::{gadc, make_channel, CpMargins, PhaseCovariantChannel};
pub use choi::{ChoiMatrix, KrausSet};
pub use error::{Error, Result};
pub use linalg::CMat;
pub use state::{BlochVector, DensityMatrix};
