//! Diophantine tuples over finite fields F_q: field arithmetic, cyclotomic
//! polynomials, explicit constructions with certificates, character sums and an
//! exact maximum-clique oracle for M(q).

pub mod charsum;
pub mod checks;
pub mod constructions;
pub mod cyclotomic;
pub mod diophantine;
pub mod error;
pub mod field;
pub mod nt;
pub mod oracle;
pub mod poly;
mod precise;

pub use constructions::{compute_q, construct, construct_auto, ConstructionReport, Method, Variant};
pub use diophantine::{certify, verify_tuple, Certificate, DiophantineTuple};
pub use error::{Error, Result};
pub use field::{FieldDescriptor, FieldElement};
pub use poly::FpPolynomial;
