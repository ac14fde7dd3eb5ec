//! Finite posets, incidence algebras and quotient posets.

mod partition;
mod poset;
mod quotient;

pub use partition::{bell_number, partitions, Partition, Partitions};
pub use poset::{mobius, mobius_invert, sum_below, IncidenceAlgebra, Poset, MAX_EXPLICIT_POSET};
pub use quotient::{quotient_poset, CodomainClass, QuotientElement, QuotientPoset};
