pub mod automorphism;
pub mod cli;
pub mod decide;
pub mod error;
pub mod expr;
pub mod higher_deriv;
pub mod jacobian;
pub mod linalg;
pub mod poly;
pub mod series;
