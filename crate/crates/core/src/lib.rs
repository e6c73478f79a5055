//! Scattering amplitude maps, forms and probability measures attached to
//! algebraic curves.
//!
//! The crate is organized around five subsystems:
//!
//! * [`scalars`] — exact and floating arithmetic: polynomials, fractions,
//!   projective points, Möbius maps, cross-ratios, AGM.
//! * [`hypertrees`] — CT hypertrees, checkerboard sphere triangulations,
//!   Tutte trinity matchings, on-shell diagrams, the birational inverse of
//!   the amplitude map on maximally degenerate curves, spinor factorization.
//! * [`degenerations`] — dual graphs and multidegrees of stable curves,
//!   structural checks, channel factorizations, Oda–Seshadri theta vectors,
//!   stability and component enumeration, genus-1 nodal closed forms.
//! * [`mumford`] — the hyperelliptic matrix model: Mumford triples, Lax
//!   flows, divisor arithmetic, eigenspace slopes, amplitude branches and
//!   real preimage search.
//! * [`realscatter`] — real M-curves: ovals, Picard component indexing,
//!   Huisman parametrization, pushforward densities, Monte Carlo sampling
//!   and elementary (Cremona) transformations.

pub mod error;
pub mod scalars;
pub mod hypertrees;
pub mod degenerations;
pub mod mumford;
pub mod realscatter;

pub use error::{Error, Result};
