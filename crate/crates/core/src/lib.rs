//! Exact computer algebra for the Lie algebra `Wₙ⁺` of polynomial vector
//! fields and its smooth modules.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod error;
pub mod families;
pub mod gln;
pub mod linalg;
pub mod module;
mod lincomb;
pub mod multi_index;
pub mod scalar;
pub mod series;
pub mod weyl;
pub mod whittaker;
pub mod witt;

pub use error::{Error, Result};
pub use families::{make_w_phi, InducedModule, TensorModule, TrivialModule};
pub use gln::GlnModule;
pub use module::{act, Family, FiniteModule, ModuleVector, PositiveModule, SmoothModule};
pub use multi_index::MultiIndex;
pub use scalar::Scalar;
pub use series::{continuous_act, PowerSeriesDerivation};
pub use weyl::{P0Vector, WeylElement};
pub use whittaker::{Character, WhittakerModule};
pub use witt::{Polynomial, WittElement};
