//! Exact model of the bounded derived category of representations of a
//! finite acyclic quiver, and finite windows of its translation quiver.

pub mod linalg;

mod decompose;
mod dobj;
mod rep;
mod window;

use thiserror::Error;

use crate::threadquiver::QuiverError;

pub use decompose::{decompose, is_indecomposable, top_dimension};
pub use dobj::{cone_decompose, dhom, fingerprint, serre, tau_inv_obj, tau_obj, DObj};
pub use rep::{
    euler_form, ext_cocycles, ext_dim, ext_dim_by_ar, ext_dim_by_resolution, extension, hom_dim, hom_space, injective,
    projective, simple, tau, tau_inv, ModMap, Paths, QRep,
};
pub use window::{ObjId, Window, WindowObject, WindowOptions};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("representations live on different quivers")]
    QuiverMismatch,
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not a module map: {0}")]
    NotAModuleMap(String),
    #[error("negative Ext dimension {0}: sign convention violated")]
    NegativeExt(i128),
    #[error("not indecomposable: {0}")]
    NotIndecomposable(String),
    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("object not in window: {0}")]
    NotInWindow(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}
