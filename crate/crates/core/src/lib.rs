//! Cut-and-project schemes over `ℝ^m × G` with `G = ℝ^d × T^ℓ × D`, `D` a
//! finite abelian group.
//!
//! * [`group`]: arithmetic, characters and Haar normalization on `G` and `Ĝ`.
//! * [`scheme`]: existence test, lattice construction, dual lattice, projections.
//! * [`model_set`]: quasicrystals `Λ_S`, dual model sets `M_K`, separation.
//! * [`analysis`]: Beurling densities, Riesz sums, Poisson summation.
//! * [`sampling`]: finite-section frame bounds of exponential systems.

pub mod analysis;
pub mod enumerate;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod group;
pub mod model_set;
pub mod primes;
pub mod sampling;
pub mod scheme;
pub mod window;

pub use error::{Error, Result};
pub use exec::Exec;
pub use group::{DualElement, GroupElement, GroupSpec};
pub use scheme::{build_scheme, scheme_exists, CpScheme, Existence, SchemeDescriptor};
pub use window::{HalfOpenBox, SpectrumWindow, Window};
