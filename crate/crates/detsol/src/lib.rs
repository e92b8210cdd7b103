//! detsol: determinantal solutions of multi-component NLS and
//! Davey-Stewartson equations.
//!
//! The library constructs closed-form solution families — dark and bright
//! multi-solitons, breathers, rational (Peregrine-type) breathers, dromions
//! and lumps — as ratios of small complex determinants built from rational-map
//! data on the Riemann sphere, and verifies them numerically with independent
//! finite-difference residuals.
//!
//! The `examples/` directory is the front door: one runnable example per
//! capability (`cargo run --release --example peregrine`, `ds_dromion`, ...).
//! A thin `detsol` binary exposes the same functionality as subcommands
//! (`solve`, `verify`, `preset`, `oracle`, `list-families`).
//!
//! Quick taste — the scalar Peregrine breather as the N = 1 rational
//! reduction:
//!
//! ```
//! use detsol::map::RationalMap;
//! use detsol::degen::LocalParam;
//! use detsol::nls::{build_rational_breather, NlsField, NlsRationalParams};
//! use num_complex::Complex64;
//!
//! let zeros = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
//! let map = RationalMap::polynomial_from_zeros(&zeros, Complex64::new(1.0, 0.0)).unwrap();
//! let scales = zeros.iter().map(|&a| 1.0 / map.deriv(a, 1).unwrap()).collect();
//! let sol = build_rational_breather(&NlsRationalParams {
//!     map,
//!     fiber_value: 0.0,
//!     anchor_index: 1,
//!     u: vec![Complex64::new(0.0, 1.0)],
//!     d_hat: vec![Complex64::new(0.0, 0.0)],
//!     theta: 0.0,
//!     local_param: LocalParam::ScaledFunction { scales },
//! })
//! .unwrap();
//! let peak = sol.psi(0, 0.0, 0.0).unwrap().norm();
//! assert!((peak / sol.amplitude(0) - 3.0).abs() < 1e-10);
//! ```

pub mod config;
pub mod degen;
pub mod det;
pub mod ds;
pub mod error;
pub mod map;
pub mod nls;
pub mod output;
pub mod poly;
pub mod preset;
pub mod scenario;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
