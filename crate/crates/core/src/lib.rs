//! Arithmetic invariants of number rings: Bloch-group elements and their
//! dilogarithm regulators, unit regulators, arithmetic degrees and heights of
//! metrized line bundles, and the graded Borel-rank model of real K-theory.

pub mod arakelov;
pub mod dilog;
pub mod error;
pub mod expr;
pub mod heights;
pub mod intmat;
pub mod kmodel;
pub mod mp;
pub mod nf;
pub mod poly;
pub mod regulator;
pub mod relations;

pub use arakelov::{FractionalIdeal, Metric, MetrizedLineBundle};
pub use error::{Error, Result};
pub use heights::DiffK0Class;
pub use kmodel::{GradedElement, GradedKAlgebra};
pub use mp::{Complex, PrecisionContext, Real};
pub use nf::{parse_field, ArithOp, ElementRecord, EmbeddingSet, FieldDescription, FieldElement, NumberField};
pub use regulator::{RegulatorVector, Weight};
pub use relations::{BlochElement, ExteriorSquare, MultiplicativePresentation, WedgeClass};
