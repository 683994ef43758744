//! Little-cubes operads over exact rationals, the comparison maps between
//! `C_k □ C_ℓ` and `C_{k+ℓ}`, and smallness witnesses.

mod config;
mod phi;
mod psi;
pub mod random;
mod rational;
mod small;
mod svg;

use thiserror::Error;

use crate::boxprod::BoxError;

pub use config::{
    common_subdivision, cube_act, cube_compose, scale_config, CubeConfig, CubeConfigFile,
    LittleCube, Strictness,
};
pub use phi::{phi_embed, phi_eval, CubeColours, CubeGen, Side};
pub use psi::{psi_decompose, psi_decompose_with, WitnessIndependence};
pub use rational::ExactRational;
pub use small::{find_witness, find_witness_in, is_small, shrink_to_small, GridWitness, Shrunk};
pub use svg::render_svg;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("invalid interval {0}")]
    InvalidInterval(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("not a prime configuration: {0}")]
    NotPrime(String),
    #[error("cubes {i} and {j} overlap")]
    Overlap { i: usize, j: usize },
    #[error("scale factor {0} is not in (0,1]")]
    LambdaOutOfRange(String),
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("split {k} is not in 1..{dim}")]
    InvalidSplit { k: usize, dim: usize },
    #[error("no small rescaling found down to 2^-{depth}")]
    SearchExhausted { depth: u32 },
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("rendering needs dimension 1 or 2, got {0}")]
    UnsupportedDimension(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Box(#[from] BoxError),
}
