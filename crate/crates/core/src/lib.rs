//! Homomorphism counting for finite relational structures, rooted trees and
//! towers of finite groups.
//!
//! The crate counts morphisms of every factorisation class between finite
//! structures, builds quotient posets and their Möbius functions, splits
//! hom-sets into generic parts (the Stirling kernel), and uses hom profiles
//! to decide isomorphism, counting-logic equivalence and tower isomorphism
//! at desk scale.
//!
//! Modules:
//!
//! * [`sigstruct`]: signatures, structures, morphisms, pushouts, canonical forms.
//! * [`homsearch`]: backtracking enumeration of morphisms of a given class.
//! * [`quotposet`]: finite posets, incidence algebras, quotient posets `Q(c)`.
//! * [`stirling`]: generic elements, kernel decompositions, Stirling numbers.
//! * [`lovasz`]: hom profiles and isomorphism by counting.
//! * [`trees`]: rooted trees and tree morphisms.
//! * [`cklogic`]: tree-width, Weisfeiler–Leman and counting-logic equivalence.
//! * [`profinite`]: finite groups, towers and continuous-hom counts.

pub mod cklogic;
mod error;
pub mod homsearch;
mod limits;
pub mod lovasz;
pub mod profinite;
pub mod quotposet;
pub mod sigstruct;
pub mod stirling;
pub mod trees;

pub use error::{Error, Result};
pub use limits::Limits;

/// Exact non-negative counts.
pub type Count = num_bigint::BigUint;

pub use homsearch::{count_morphisms, CountResult, HomSearch, MorphismClass};
pub use lovasz::{DistinguishResult, Side, Verdict, Witness};
pub use sigstruct::{FactorisationSystem, Morphism, Signature, Structure};
