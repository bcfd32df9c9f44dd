//! Entropy bounds for self-shrinkers of the mean curvature flow.

pub mod arrangement;
pub mod bounds;
pub mod entropy;
pub mod error;
pub mod foliation;
pub mod geodesics;
pub mod io;
pub mod metrics;
pub mod quadrature;

pub use error::{Error, Result};
