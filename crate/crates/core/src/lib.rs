#![no_std]

extern crate alloc;

pub mod auxiliary;
pub mod error;
pub mod identities;
pub mod moments;
pub mod ortho;
pub mod pipeline;
pub mod precision;
pub mod real;
pub mod special;
pub mod weight;

pub use error::{LabError, Result};
pub use precision::{policy_bits, DerivOrder, FdEstimate, Interval, PrecisionCtx, QuadResult, Stencil, Target};
pub use real::{Complex, Real};
