//! Thin Blaschke products, singular inner functions and the conformal map of
//! the disk onto the disk slit along `[0, 1)`, with numerical checks of how
//! their composition behaves near the boundary.

pub mod blaschke;
pub mod config;
pub mod counterexample;
pub mod error;
pub mod exec;
pub mod hyperbolic;
pub mod innerfn;
pub mod render;
pub mod slitmap;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use exec::Strategy;
pub use hyperbolic::{pseudo_distance, BoundaryDeviation, DiskPoint, Point};
