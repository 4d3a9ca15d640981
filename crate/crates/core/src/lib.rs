//! Exact-arithmetic invariants of toric spaces attached to a finite
//! simplicial complex `K`: Stanley-Reisner (co)algebras, moment-angle
//! cohomology via Koszul complexes, loop-space homology via the cobar
//! construction, quadratic-dual comparison for flag complexes, and
//! quasitoric cohomology quotients.
//!
//! Everything is computed over the rationals with arbitrary-precision
//! arithmetic; no floating point is used anywhere.
//!
//! ```
//! use toric_core::cobar::{flag_divergence, loop_homology, CobarOptions};
//! use toric_core::koszul::zk_betti;
//! use toric_core::SimplicialComplex;
//!
//! // the boundary of the square: a flag complex
//! let k = SimplicialComplex::four_cycle();
//!
//! // H*(Z_K; Q) is the cohomology of a connected sum of sphere products
//! let betti = zk_betti(&k);
//! assert_eq!(betti.dim(3), 2);
//! assert_eq!(betti.dim(6), 1);
//!
//! // loop-space homology agrees with the quadratic dual in every degree
//! let opts = CobarOptions::default();
//! let dims = loop_homology(&k, 4, &opts).unwrap();
//! assert_eq!(dims[&4], 16);
//! assert_eq!(flag_divergence(&k, 4, &opts).unwrap(), None);
//! ```

pub mod cobar;
pub mod complex;
pub mod exactlin;
pub mod facering;
pub mod graded;
pub mod koszul;
pub mod par;

pub use complex::SimplicialComplex;
pub use exactlin::{Rational, SparseMatrix};
pub use graded::{ChainComplexWindow, Direction, PoincareSeries};
