/// Size and count caps for the exhaustive procedures.
///
/// Every enumeration in this crate is exponential; the caps turn runaway
/// inputs into [`Error::LimitExceeded`](crate::Error::LimitExceeded) instead
/// of hanging.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Largest structure accepted by canonical labeling.
    pub canonical_size: usize,
    /// Largest universe whose set partitions are enumerated.
    pub partition_size: usize,
    /// Largest number of elements in a quotient poset.
    pub quotient_elements: usize,
    /// Largest number of canonical representatives an enumeration may produce.
    pub structure_count: usize,
    /// Largest number of tuple slots (bits) of a labeled enumeration space.
    pub labeled_bits: usize,
    /// Largest structure accepted by the exact tree-width algorithm.
    pub treewidth_size: usize,
    /// Largest tree produced by truncation or enumeration.
    pub tree_nodes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            canonical_size: 8,
            partition_size: 8,
            quotient_elements: 1 << 20,
            structure_count: 1_000_000,
            labeled_bits: 24,
            treewidth_size: 10,
            tree_nodes: 1_000_000,
        }
    }
}

impl Limits {
    pub fn with_structure_count(mut self, cap: usize) -> Self {
        self.structure_count = cap;
        self
    }
}
