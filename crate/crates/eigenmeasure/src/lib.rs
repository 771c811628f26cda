//! Exact symbolic calculus and numerical verification for tempered
//! measures that are eigenvectors of the Fourier transform on the line.
//!
//! The symbolic core works with finite combinations of the building
//! block Z_{r,s,alpha} = (modulation by r) . (shift by s) . (Dirac comb
//! of spacing alpha), with r and s exact elements of a real quadratic
//! field and alpha a square root of a positive integer. On these the
//! Fourier transform, reflection, conjugation, and the four spectral
//! projectors act in closed form.
//!
//! Around the core sit three verification layers: the discrete Fourier
//! transform bridge (periodic eigenmeasures from DFT eigenvectors), a
//! Schwartz test-function oracle (Gaussian and Hermite probes with
//! closed-form transforms), and cut-and-project shadows of the rotated
//! planar lattice.

pub mod cutproject;
pub mod dft;
pub mod error;
pub mod fourier;
pub mod measure;
pub mod scalar;
pub mod schwartz;

pub use cutproject::{Lattice2D, ShadowReport, WeightedComb};
pub use dft::{EigvecSet, FourierMatrix};
pub use error::{Error, Result};
pub use fourier::{build_y, classify, fourier, fourier_pow, project};
pub use measure::{FourthRoot, MeasureExpr, ZAtom, DEFAULT_EPS};
pub use scalar::{reduce_mod, PhaseExponent, QuadScalar};
pub use schwartz::{PairingReport, TestFunction};
