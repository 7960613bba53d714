//! Exact linear algebra for parabolic Higgs bundles on semistable
//! degenerations of curves.

pub mod error;
pub mod linalg;
pub mod graded;
pub mod l2;
pub mod nilpotent;
pub mod parabolic;
pub mod pushforward;
pub mod scenario;
pub mod vnearby;

pub use error::{Error, Result};
