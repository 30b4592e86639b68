//! Transfer matrices and functional identities for a dilute two-colour loop
//! model on the square lattice, and its height-model (RSOS) counterpart.
//!
//! The crate builds the commuting single-row transfer matrices of the loop
//! model in its standard modules on a periodic strip, fuses them into a
//! two-parameter family of operators, and numerically certifies the web of
//! functional identities the family satisfies: local (Yang-Baxter and
//! inversion) identities, fusion recursions, bilinear T-system identities,
//! Y-system identities for the associated ratio operators, and the closure
//! identities that truncate the hierarchy when the crossing parameter is a
//! rational multiple of pi.
//!
//! # Layout
//!
//! - [`scalars`]: trigonometric weights, q-numbers, sectors and spectra.
//! - [`linkstate`]: planar link states on the periodic strip.
//! - [`faceops`]: elementary face tiles and their local identities.
//! - [`transfer`]: diagram contraction on the cylinder; transfer matrices.
//! - [`fusion`]: strand projectors and directly fused transfer matrices.
//! - [`hierarchy`]: the fused family generated by its defining recursion.
//! - [`relations`]: the certification suites and report machinery.
//! - [`rsos`]: the height-model weights and their identities.
//! - [`cli`]: the command-line interface.
//!
//! # Example
//!
//! Build the elementary transfer matrix on a strip of width 2 in the sector
//! with two defects, and check that it commutes at two spectral parameters:
//!
//! ```
//! use a2lattice::scalars::{C64, Params, Sector};
//! use a2lattice::transfer::Transfer;
//!
//! let params = Params::new(0.83, C64::new(1.0, 0.0));
//! let sector = Sector::new(2, 2, 0);
//! let engine = Transfer::new(&params, sector);
//! let t1 = engine.elementary(a2lattice::scalars::BraidLabel::OneZero, C64::new(0.3, 0.1));
//! let t2 = engine.elementary(a2lattice::scalars::BraidLabel::OneZero, C64::new(-0.4, 0.2));
//! let comm = (&t1 * &t2) - (&t2 * &t1);
//! assert!(comm.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);
//! ```

pub mod cli;
pub mod faceops;
pub mod fusion;
pub mod hierarchy;
pub mod linkstate;
pub mod relations;
pub mod rsos;
pub mod scalars;
pub mod transfer;
