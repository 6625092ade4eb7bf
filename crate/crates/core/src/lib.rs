//! Finite sections of multiplication operators on weighted L² spaces.
//!
//! The pipeline: a multiplier φ on [-1,1]^d is pulled back through x = cos s
//! to a 2π-periodic symbol, the finite section splits into Toeplitz plus
//! Hankel parts built from Fourier coefficients, circulant approximants are
//! diagonalized by the FFT, and the eigenvalues sampled at the Fourier grid
//! reconstruct the symbol (and hence the multiplier) pointwise.
//!
//! ```
//! use sectra::reconstruct::reconstruct_peeled;
//! use sectra::sections::chebyshev1_section;
//! use sectra::symbols::MultiplierSpec;
//!
//! // φ(x) = x on [-1,1] under the first-kind Chebyshev weight
//! let phi = MultiplierSpec::coordinate(0, 1);
//! let section = chebyshev1_section(&phi, &[64]).unwrap();
//! let rec = reconstruct_peeled(&section).unwrap().with_reference(&phi);
//! assert!(rec.max_residual().unwrap() < 0.05);
//! ```
//!
//! Modules follow the pipeline stages:
//! - [`symbols`]: multiplier/weight/symbol representations, pullback, Fourier
//!   coefficients, Fourier and Cesàro sums;
//! - [`matrices`]: Toeplitz, Hankel and circulant matrices (multilevel,
//!   block), dense materialization, matvec, dense eigen/singular solvers;
//! - [`sections`]: finite sections for Chebyshev and general separable
//!   weights, including the triangular basis-change factor;
//! - [`circulants`]: Strang and Frobenius-optimal circulant approximants;
//! - [`reconstruct`]: the circulant-based reconstruction algorithms and the
//!   Hankel-peeling coefficient recovery;
//! - [`spectral`]: distribution functionals, Schatten norms, clustering and
//!   essential-range membership tests;
//! - [`io`]: CSV/JSON export of samples, sections and reports;
//! - [`expr`]: the small expression grammar used by the CLI for multipliers
//!   and custom weights.

pub mod circulants;
pub mod error;
pub mod expr;
pub mod fft;
pub mod grid;
pub mod io;
pub mod matrices;
pub mod reconstruct;
pub mod sections;
pub mod spectral;
pub mod symbols;

pub use error::{Error, Result};

/// Dense complex matrix used across the crate.
pub type Dense = nalgebra::DMatrix<num_complex::Complex<f64>>;

/// Complex scalar shorthand.
pub type C64 = num_complex::Complex<f64>;
