//! Dynamics of (ρ_A, ρ_B)-maps and direction classification for one-holed
//! dilation tori.

pub mod aiet;
pub mod export;
pub mod limitset;
pub mod paramspace;
pub mod rauzy;
pub mod scalar;
pub mod torus;

pub use aiet::{orbit, OrbitResult, OrbitStatus, RhoMap};
pub use num::rational::BigRational;
pub use rauzy::{
    induct, induct_auto, modified_induct, terminal_orbit, InductionTrace, Letter, Word,
};
pub use scalar::{Backend, Interval, Scalar};
