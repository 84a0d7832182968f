//! Forbidden-cycle description of primitive 3-constrained metrically
//! homogeneous graphs of finite diameter.
//!
//! The crate covers the parameter space ([`params`]), the magic completion
//! ([`magic`], [`completion`]), the forbidden cycle families
//! ([`families`]), a brute-force completion oracle ([`oracle`]) and the
//! `(1, δ)`-cycle tables ([`onedelta`]).

pub mod completion;
pub mod error;
pub mod families;
pub mod graph;
pub mod magic;
pub mod onedelta;
pub mod oracle;
pub mod params;

pub use error::{Error, Result};
pub use graph::{EdgeLabelledGraph, LabelledCycle};
pub use magic::MagicContext;
pub use params::{AdmissibilityCase, ParameterSequence, RawParams};
