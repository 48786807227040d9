//! Exact wall-crossing computations for tilt stability on prime Fano
//! threefolds of Picard rank one, and on the Kuznetsov component lattice.

pub mod cli;
pub mod error;
pub mod gieseker;
pub mod kuznetsov;
pub mod lattice;
pub mod parallel;
pub mod plot;
pub mod rational;
pub mod tilt;
pub mod walls;

pub use error::{Error, Result};
pub use lattice::{ChernCharacter, FanoContext, HilbertPoly};
pub use rational::Q;
