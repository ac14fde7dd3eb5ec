//! Finite relational structures over a fixed signature.
//!
//! The universe of a structure with `size` elements is always `0..size`.
//! Each relation is stored as a dense bitset over all `size^arity` tuple
//! slots, indexed lexicographically, so equality, hashing and membership are
//! all cheap and independent of insertion order.

mod canon;
mod enumerate;
pub mod graphs;
pub(crate) mod morphism;
pub(crate) mod ops;

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

pub use canon::{
    are_isomorphic, canonical_form, canonical_form_capped, canonical_labeling, canonical_structure,
    CanonicalCode,
};
pub use enumerate::{canonical_representatives, representatives_of_size, StructureClass};
pub use morphism::{validate_morphism, ClassTags, FactorisationSystem, Morphism};
pub use ops::{disjoint_union, induced_quotient, pushout, relabel, Pushout};

/// Largest number of tuple slots a single relation may span.
const MAX_SLOTS: usize = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// An ordered list of relation symbols with arities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn new<I, S>(symbols: I) -> Result<Arc<Signature>>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut out: Vec<Symbol> = Vec::new();
        for (name, arity) in symbols {
            let name = name.into();
            if !is_identifier(&name) {
                return Err(Error::InvalidSignature(format!(
                    "`{name}` is not an identifier"
                )));
            }
            if arity == 0 {
                return Err(Error::InvalidSignature(format!(
                    "symbol `{name}` has arity 0"
                )));
            }
            if out.iter().any(|s| s.name == name) {
                return Err(Error::InvalidSignature(format!(
                    "duplicate symbol `{name}`"
                )));
            }
            out.push(Symbol { name, arity });
        }
        Ok(Arc::new(Signature { symbols: out }))
    }

    /// The signature with no symbols; its structures are plain finite sets.
    pub fn empty() -> Arc<Signature> {
        Arc::new(Signature {
            symbols: Vec::new(),
        })
    }

    /// A single binary symbol `E`.
    pub fn binary() -> Arc<Signature> {
        Signature::new([("E", 2)]).expect("valid signature")
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn arity(&self, rel: usize) -> usize {
        self.symbols[rel].arity
    }

    pub fn name(&self, rel: usize) -> &str {
        &self.symbols[rel].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    /// This signature plus one more symbol.
    pub fn extended(&self, name: &str, arity: usize) -> Result<Arc<Signature>> {
        if self.index_of(name).is_some() {
            return Err(Error::SymbolClash(format!(
                "symbol `{name}` already present"
            )));
        }
        Signature::new(
            self.symbols
                .iter()
                .map(|s| (s.name.clone(), s.arity))
                .chain(std::iter::once((name.to_string(), arity))),
        )
    }

    /// This signature without the named symbol.
    pub fn without(&self, name: &str) -> Arc<Signature> {
        Arc::new(Signature {
            symbols: self
                .symbols
                .iter()
                .filter(|s| s.name != name)
                .cloned()
                .collect(),
        })
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.symbols {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}/{}", s.name, s.arity)?;
        }
        Ok(())
    }
}

pub(crate) fn slot_count(size: usize, arity: usize) -> Result<usize> {
    let mut slots: usize = 1;
    for _ in 0..arity {
        slots = slots
            .checked_mul(size)
            .filter(|&s| s <= MAX_SLOTS)
            .ok_or(Error::limit("tuple slot", MAX_SLOTS, usize::MAX))?;
    }
    Ok(slots)
}

#[inline]
pub(crate) fn tuple_index(tuple: &[usize], size: usize) -> usize {
    tuple.iter().fold(0, |acc, &x| acc * size + x)
}

#[inline]
pub(crate) fn decode_index(mut index: usize, size: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = index % size;
        index /= size;
    }
}

#[inline]
pub(crate) fn bit_get(bits: &[u64], i: usize) -> bool {
    bits[i >> 6] >> (i & 63) & 1 == 1
}

#[inline]
pub(crate) fn bit_set(bits: &mut [u64], i: usize) {
    bits[i >> 6] |= 1 << (i & 63);
}

pub(crate) fn iter_bits(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(w, &word)| {
        let mut word = word;
        std::iter::from_fn(move || {
            if word == 0 {
                None
            } else {
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            }
        })
    })
}

/// A finite structure: universe `0..size` and one relation per symbol.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    signature: Arc<Signature>,
    size: usize,
    relations: Vec<Vec<u64>>,
}

impl Structure {
    /// The structure on `size` elements with every relation empty.
    pub fn new(signature: &Arc<Signature>, size: usize) -> Result<Structure> {
        let relations = signature
            .symbols
            .iter()
            .map(|s| slot_count(size, s.arity).map(|n| vec![0u64; n.div_ceil(64)]))
            .collect::<Result<Vec<_>>>()?;
        Ok(Structure {
            signature: Arc::clone(signature),
            size,
            relations,
        })
    }

    /// Builds a structure from `(symbol name, tuples)` pairs. Symbols not
    /// mentioned are empty.
    pub fn from_tuples<'a, I>(
        signature: &Arc<Signature>,
        size: usize,
        relations: I,
    ) -> Result<Structure>
    where
        I: IntoIterator<Item = (&'a str, Vec<Vec<usize>>)>,
    {
        let mut s = Structure::new(signature, size)?;
        for (name, tuples) in relations {
            let rel = signature
                .index_of(name)
                .ok_or_else(|| Error::InvalidStructure(format!("unknown symbol `{name}`")))?;
            for t in tuples {
                s.insert(rel, &t)?;
            }
        }
        Ok(s)
    }

    pub(crate) fn from_bits(
        signature: &Arc<Signature>,
        size: usize,
        relations: Vec<Vec<u64>>,
    ) -> Structure {
        debug_assert_eq!(relations.len(), signature.len());
        Structure {
            signature: Arc::clone(signature),
            size,
            relations,
        }
    }

    /// Adds a tuple to relation `rel`.
    pub fn insert(&mut self, rel: usize, tuple: &[usize]) -> Result<()> {
        let Some(sym) = self.signature.symbols.get(rel) else {
            return Err(Error::InvalidStructure(format!(
                "no relation with index {rel}"
            )));
        };
        if tuple.len() != sym.arity {
            return Err(Error::InvalidStructure(format!(
                "tuple of length {} for `{}` of arity {}",
                tuple.len(),
                sym.name,
                sym.arity
            )));
        }
        if let Some(&x) = tuple.iter().find(|&&x| x >= self.size) {
            return Err(Error::InvalidStructure(format!(
                "element {x} out of range for size {}",
                self.size
            )));
        }
        let i = tuple_index(tuple, self.size);
        bit_set(&mut self.relations[rel], i);
        Ok(())
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn holds(&self, rel: usize, tuple: &[usize]) -> bool {
        tuple.iter().all(|&x| x < self.size)
            && bit_get(&self.relations[rel], tuple_index(tuple, self.size))
    }

    #[inline]
    pub(crate) fn holds_index(&self, rel: usize, index: usize) -> bool {
        bit_get(&self.relations[rel], index)
    }

    pub(crate) fn relation_bits(&self, rel: usize) -> &[u64] {
        &self.relations[rel]
    }

    /// The tuples of relation `rel` in lexicographic order.
    pub fn tuples(&self, rel: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        let arity = self.signature.arity(rel);
        let size = self.size;
        iter_bits(&self.relations[rel]).map(move |i| {
            let mut t = vec![0; arity];
            decode_index(i, size, &mut t);
            t
        })
    }

    pub fn tuple_count(&self, rel: usize) -> usize {
        self.relations[rel]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn total_tuples(&self) -> usize {
        (0..self.signature.len()).map(|r| self.tuple_count(r)).sum()
    }

    /// Number of tuple occurrences of each element.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.size];
        for rel in 0..self.signature.len() {
            for t in self.tuples(rel) {
                for x in t {
                    deg[x] += 1;
                }
            }
        }
        deg
    }

    /// Whether this structure has a single binary symbol interpreted by a
    /// symmetric, irreflexive relation (an undirected simple graph).
    pub fn is_simple_graph(&self) -> bool {
        if self.signature.len() != 1 || self.signature.arity(0) != 2 {
            return false;
        }
        self.tuples(0)
            .all(|t| t[0] != t[1] && self.holds(0, &[t[1], t[0]]))
    }

    /// Connected components of the Gaifman graph, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.gaifman_adjacency();
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for start in 0..self.size {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Nonempty with a connected Gaifman graph.
    pub fn is_connected(&self) -> bool {
        self.size > 0 && self.components().len() == 1
    }

    /// Adjacency lists of the Gaifman graph (distinct elements sharing a tuple).
    pub fn gaifman_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.size];
        for rel in 0..self.signature.len() {
            for t in self.tuples(rel) {
                for &x in &t {
                    for &y in &t {
                        if x != y && !adj[x].contains(&y) {
                            adj[x].push(y);
                        }
                    }
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Structure(size={}", self.size)?;
        for rel in 0..self.signature.len() {
            write!(f, "; {}:", self.signature.name(rel))?;
            for t in self.tuples(rel) {
                let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                write!(f, " ({})", parts.join(","))?;
            }
        }
        f.write_str(")")
    }
}

pub(crate) fn check_same_signature(a: &Structure, b: &Structure) -> Result<()> {
    if Arc::ptr_eq(&a.signature, &b.signature) || a.signature == b.signature {
        Ok(())
    } else {
        Err(Error::SignatureMismatch(format!(
            "[{}] vs [{}]",
            a.signature, b.signature
        )))
    }
}
