use std::collections::BTreeMap;
use std::sync::Arc;

use super::{canonical_structure, graphs, CanonicalCode, Signature, Structure};
use crate::{Error, Limits, Result};

/// Which structures an enumeration ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StructureClass {
    /// Every structure over the signature.
    #[default]
    All,
    /// Symmetric irreflexive interpretations of a single binary symbol.
    SimpleGraphs,
}

/// Canonical representatives of all isomorphism types with at most
/// `max_size` elements, ordered by canonical code (hence by size first).
///
/// Each representative is returned in its canonical labeling.
pub fn canonical_representatives(
    sig: &Arc<Signature>,
    max_size: usize,
    class: StructureClass,
    limits: &Limits,
) -> Result<Vec<(CanonicalCode, Structure)>> {
    let mut out = Vec::new();
    for n in 0..=max_size {
        let reps = representatives_of_size(sig, n, class, limits, out.len())?;
        out.extend(reps);
    }
    Ok(out)
}

/// The representatives with exactly `n` elements, ordered by canonical
/// code. `prior` representatives already count against the structure cap.
pub fn representatives_of_size(
    sig: &Arc<Signature>,
    n: usize,
    class: StructureClass,
    limits: &Limits,
    prior: usize,
) -> Result<Vec<(CanonicalCode, Structure)>> {
    if class == StructureClass::SimpleGraphs && (sig.len() != 1 || sig.arity(0) != 2) {
        return Err(Error::InvalidArgument(
            "graph enumeration needs a single binary symbol".into(),
        ));
    }
    if n > limits.canonical_size {
        return Err(Error::limit(
            "structure count",
            limits.structure_count,
            prior,
        ));
    }
    let labeled: Box<dyn Iterator<Item = Structure>> = match class {
        StructureClass::All => {
            let slots: Vec<usize> = (0..sig.len())
                .map(|r| super::slot_count(n, sig.arity(r)))
                .collect::<Result<_>>()?;
            let bits: usize = slots.iter().sum();
            if bits > limits.labeled_bits.min(40) {
                return Err(Error::limit(
                    "structure count",
                    limits.structure_count,
                    prior,
                ));
            }
            let sig = Arc::clone(sig);
            Box::new((0u64..1 << bits).map(move |mask| {
                let mut offset = 0;
                let rels = slots
                    .iter()
                    .map(|&s| {
                        let mut words = vec![0u64; s.div_ceil(64)];
                        if s > 0 {
                            words[0] = (mask >> offset) & ((1u64 << s) - 1);
                        }
                        offset += s;
                        words
                    })
                    .collect();
                Structure::from_bits(&sig, n, rels)
            }))
        }
        StructureClass::SimpleGraphs => {
            if n * n.saturating_sub(1) / 2 > limits.labeled_bits.min(40) {
                return Err(Error::limit(
                    "structure count",
                    limits.structure_count,
                    prior,
                ));
            }
            Box::new(graphs::all_simple_graphs(n))
        }
    };
    let mut reps: BTreeMap<CanonicalCode, Structure> = BTreeMap::new();
    for s in labeled {
        let (code, canon) = canonical_structure(&s, limits.canonical_size)?;
        reps.entry(code).or_insert(canon);
        if prior + reps.len() > limits.structure_count {
            return Err(Error::limit(
                "structure count",
                limits.structure_count,
                prior + reps.len(),
            ));
        }
    }
    Ok(reps.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digraph_counts() {
        let sig = Signature::binary();
        let reps =
            canonical_representatives(&sig, 3, StructureClass::All, &Limits::default()).unwrap();
        // 1 + 2 + 10 + 104 isomorphism types of loop-allowed digraphs.
        assert_eq!(reps.len(), 117);
        assert!(reps.windows(2).all(|w| w[0].0 < w[1].0));
        assert!(reps.windows(2).all(|w| w[0].1.size() <= w[1].1.size()));
    }

    #[test]
    fn graph_counts() {
        let sig = Signature::binary();
        let reps =
            canonical_representatives(&sig, 5, StructureClass::SimpleGraphs, &Limits::default())
                .unwrap();
        // 1 + 1 + 2 + 4 + 11 + 34
        assert_eq!(reps.len(), 53);
        assert!(reps.iter().all(|(_, s)| s.is_simple_graph()));
    }

    #[test]
    fn structure_cap_reports_count() {
        let sig = Signature::binary();
        let limits = Limits::default().with_structure_count(20);
        match canonical_representatives(&sig, 3, StructureClass::All, &limits) {
            Err(Error::LimitExceeded { limit, reached, .. }) => {
                assert_eq!(limit, 20);
                assert_eq!(reached, 21);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_signature_sets() {
        let sig = Signature::empty();
        let reps =
            canonical_representatives(&sig, 4, StructureClass::All, &Limits::default()).unwrap();
        assert_eq!(reps.len(), 5);
    }
}
