//! Landau levels of a charged particle on the sphere, the plane and the
//! hyperbolic plane, treated uniformly through the curvature parameter κ.
//!
//! The crate evaluates exact spectra, closed-form radial eigenfunctions,
//! intra-level shift operators and inter-level ladder operators, and the
//! horocyclic reduction of the hyperbolic problem to a Morse potential.
//! Every closed form comes with a numerical oracle in [`numerics`].
//!
//! All numerical code is generic over [`Real`]; the `*64` aliases below fix
//! the scalar to `f64`, which is what the CLI and the tests use.

pub mod eigenfunctions;
pub mod error;
pub mod geometry;
pub mod identities;
pub mod ladder;
pub mod morse;
pub mod numerics;
pub mod representation;
pub mod spectrum;

pub use error::{LandauError, Result};

use std::fmt::{Debug, Display};

/// Floating-point scalar accepted by every routine in the crate.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Conversion to `f64` for the few routines that delegate to f64-only crates.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite conversion to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type Curvature64 = geometry::Curvature<f64>;
pub type PolarCoords64 = geometry::PolarCoords<f64>;
pub type SurfacePoint64 = geometry::SurfacePoint<f64>;
pub type ModelParams64 = representation::ModelParams<f64>;
pub type RadialFunction64 = representation::RadialFunction<f64>;
pub type RadialOperator64 = representation::RadialOperator<f64>;
pub type StateLabel64 = spectrum::StateLabel<f64>;
pub type SpectrumLine64 = spectrum::SpectrumLine<f64>;
pub type RadialEigenfunction64 = eigenfunctions::RadialEigenfunction<f64>;
