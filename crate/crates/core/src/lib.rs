//! Exact computer algebra for chiral differential operators on the formal disk.
//!
//! The crate is layered bottom-up:
//!
//! * formal geometry: [`jet`], [`form`], [`vector_field`], [`matrix`], [`automorphism`];
//! * the vertex algebra of the `n`-dimensional beta-gamma system: [`vertex`];
//! * the Harish-Chandra actions and their defects: [`hc_action`];
//! * Gelfand-Fuks cocycles: [`gelfand_fuks`], and the group cocycle of formal
//!   automorphisms: [`gms`];
//! * the conformal vector and its anomaly: [`conformal`];
//! * characteristic q-series and Eisenstein series: [`characters`];
//! * numerical checks of the one-loop analytic constants: [`feynman`].

pub mod automorphism;
pub mod calibration;
pub mod characters;
pub mod conformal;
pub mod error;
pub mod feynman;
pub mod form;
pub mod gelfand_fuks;
pub mod gms;
pub mod hc_action;
pub mod jet;
pub mod matrix;
pub mod nilpotent;
pub mod parse;
pub mod scalar;
pub mod vector_field;
pub mod vertex;

pub use automorphism::JetAutomorphism;
pub use error::{Error, Result};
pub use form::FormalForm;
pub use jet::{JetSeries, MultiIndex};
pub use matrix::{FormMatrix, JetMatrix, RationalMatrix};
pub use nilpotent::NilpotentParam;
pub use scalar::{Coeff, Rational};
pub use vector_field::FormalVectorField;
