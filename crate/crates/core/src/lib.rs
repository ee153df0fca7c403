//! Symbiotic autonomous systems as formal structures.
//!
//! - [`model`] and [`fusion`]: systems as relation structures and their
//!   symbiotic fusion, with the gain in cross relations.
//! - [`topology`]: recursive layering of systems.
//! - [`reliability`]: error cancellation in collective systems.
//! - [`him`]: the hierarchical behavior taxonomy and an event dispatcher.
//! - [`knowledge`]: concepts, knowledge measured in bir, and memory capacity.
//! - [`dynamics`]: predator-prey symbiosis integrated with RK4.
//! - [`dsl`] and [`cli`]: the `.sas` file format and the `sas` tool.

pub mod cli;
pub mod dsl;
pub mod dynamics;
pub mod fusion;
pub mod him;
pub mod knowledge;
pub mod model;
pub mod reliability;
pub mod topology;
