//! Explicit-equation layer: parametrised polynomials, the two format
//! presentations of #282, and the cluster argument for its `1/6(1,1,5)` point.

pub mod cluster;
pub mod irreducible;
pub mod param;
pub mod poly;
pub mod solve;
pub mod systems;
pub mod template;

pub use cluster::{cluster_certificate, ClusterCertificate, ClusterError};
pub use param::{AssumptionLedger, Param, ParamScalar};
pub use poly::ParamPolynomial;
pub use systems::{format_system, ClusterFormat, FormatSystem};
