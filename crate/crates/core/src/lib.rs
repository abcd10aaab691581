//! Exact constructions and certificates for doubly-cut hyperbolic glueings:
//! admissible Lorentzian forms, cut hyperplanes and their reflections,
//! adjoint trace rings, congruence levels and volume-bound multipliers.

pub mod bundle;
pub mod certificate;
pub mod congruence;
pub mod construct;
pub mod error;
pub mod forms;
pub mod kernel;
pub mod subring;
pub mod trace;

pub use bundle::{reverify, Bundle};
pub use certificate::{Certificate, Statement, Verdict, Witness};
pub use construct::CutConfiguration;
pub use error::{Error, Result};
pub use forms::{QuadraticForm, SquareMatrix, Vector};
pub use kernel::{Embedding, Qf, QuadFieldElement, Rational};
pub use subring::SubringOfQ;
