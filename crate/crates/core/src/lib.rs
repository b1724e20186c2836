//! Exact computations with MV-algebras.
//!
//! The crate covers finite and symbolic MV-algebras, their ideals and
//! quotients, homomorphisms with epimorphism evidence, unital ℓ-groups with
//! the Γ functor and Chang groups, divisibility and divisible hulls,
//! a-extensions and epicompletions, and a harness that checks structural
//! theorems on concrete instances.
//!
//! ```
//! use mvkit::algebra::Algebra;
//! use mvkit::rational::rat;
//!
//! let l3 = Algebra::chain(2).unwrap();
//! let half = l3.rational(&rat(1, 2)).unwrap();
//! assert_eq!(l3.oplus(&half, &half).unwrap(), l3.one());
//! ```

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod divis;
pub mod error;
pub mod ideals;
pub mod lgroup;
pub mod morphisms;
pub mod rational;

pub use algebra::{Algebra, Element};
pub use error::{MvError, Result};
