//! Enhanced Kauffman states, state surfaces, and the Khovanov and
//! diagramless link homologies, computed with exact integer arithmetic.

pub mod catalog;
pub mod checks;
pub mod diagram;
pub mod diagramless;
pub mod error;
pub mod complex;
pub mod frobenius;
pub mod generate;
pub mod states;
pub mod surface;

pub use diagram::{parse_gauss, parse_pd, validate_pd, LinkDiagram};
pub use error::{Error, Result};
pub use states::{EnhancedState, MarkerVector, SignRule};
