pub mod error;
pub mod linalg;
pub mod report;
pub mod algebra;
pub mod functional;
pub mod groups;
pub mod quantum_group;
pub mod dual;
pub mod idempotent;
pub mod hypergroup;
pub mod poisson;
pub mod divisibility;
pub mod io;
