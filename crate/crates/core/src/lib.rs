//! Exact computations with groups of piecewise-linear homeomorphisms of
//! the rational line and circle: regular open set algebra, witness
//! constructions, interpretation of points inside the group, transitivity
//! checks, reconstruction of inducing maps, and a gallery of
//! counterexamples built on wreath powers.

pub mod cli;
pub mod codec;
pub mod dyadic;
pub mod error;
pub mod gallery;
pub mod interpcirc;
pub mod interplin;
pub mod locmove;
pub mod ordcore;
pub mod plgroup;
pub mod reconstruct;
pub mod roalg;
pub mod scenario;
pub mod transit;

pub use error::{Error, Result};
pub use ordcore::{q, qi, CircInterval, CirclePoint, ExtPoint, LinInterval, Q};
pub use plgroup::{Homeo, PLCircle, PLMap};
pub use roalg::{RoCirc, RoLin, RoSet};
