//! Harmonic analysis on tori `T^n` and on `SU(2)`.
//!
//! The crate enumerates band-limited slices of the unitary dual, computes
//! exact quadrature Fourier transforms, applies difference operators to
//! matrix-valued symbols, evaluates Triebel-Lizorkin norms through a dyadic
//! Littlewood-Paley partition, and probes the boundedness of Fourier
//! multipliers empirically.
//!
//! Every numerical routine is generic over [`Real`] (`f32` or `f64`). The
//! aliases below fix the scalar to `f64`, with `*32` variants for `f32`.

/// Library version recorded in experiment manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod checks;
pub mod difference;
pub mod dual;
pub mod error;
pub mod grid;
pub mod group;
pub mod io;
pub mod linalg;
pub mod multiplier;
pub mod scalar;
pub mod spaces;
pub mod symbol;
pub mod transform;
pub mod wigner;

pub use checks::{check_hormander_mihlin, check_marcinkiewicz, check_weak_marcinkiewicz, CheckReport};
pub use difference::{apply_difference, dual_sobolev_norm, DifferenceEngine};
pub use dual::{enumerate_dual, spin_cutoff, DualSlice, IrrepIndex, IrrepLabel};
pub use error::{Error, Result};
pub use grid::{build_grid, Bandlimit, QuadratureGrid};
pub use group::{GroupDescriptor, GroupFamily, GroupPoint};
pub use linalg::CMatrix;
pub use multiplier::{
    apply_multiplier, boundedness_sweep, exact_l2_operator_norm, kernel_difference_integral, window_kernel,
    BoundednessSweep, EnsembleConfig, EnsembleKind,
};
pub use scalar::{Complex, Real};
pub use spaces::{triebel_lizorkin_norm, weak_tl_norm, LpDecomposition, LpPartition, NormSpec};
pub use symbol::{build_spectral_symbol, Symbol, SymbolSpec};
pub use transform::{forward_transform, inverse_evaluate, inverse_on_grid, FourierCoefficients, GridFunction};

pub type Point = GroupPoint<f64>;
pub type Slice = DualSlice<f64>;
pub type Grid = QuadratureGrid<f64>;
pub type Matrix = CMatrix<f64>;
pub type Coefficients = FourierCoefficients<f64>;
pub type Samples = GridFunction<f64>;
pub type Symbol64 = Symbol<f64>;

pub type Point32 = GroupPoint<f32>;
pub type Slice32 = DualSlice<f32>;
pub type Grid32 = QuadratureGrid<f32>;
pub type Matrix32 = CMatrix<f32>;
pub type Coefficients32 = FourierCoefficients<f32>;
pub type Samples32 = GridFunction<f32>;
pub type Symbol32 = Symbol<f32>;
