//! Brute-force canonical labeling.
//!
//! The code of a labeled structure is its size (4 bytes, big-endian)
//! followed, per relation, by its tuples in lexicographic order (one byte per
//! entry) and a `0xFF` terminator. The canonical code is the minimum over all
//! relabelings that respect an isomorphism-invariant ordering of the
//! elements by their degree profile. Because the terminator sorts above every
//! entry, a structure sorts before each of its proper substructures on the
//! same universe.

use std::fmt;

use super::{check_same_signature, decode_index, Structure};
use crate::{Error, Limits, Result};

const TERMINATOR: u8 = 0xFF;

/// Hard ceiling on the canonicalization cap: entries must fit below the
/// terminator byte.
const MAX_CANONICAL_SIZE: usize = TERMINATOR as usize - 1;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CanonicalCode(")?;
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        f.write_str(")")
    }
}

/// Canonical code with the default size cap.
pub fn canonical_form(a: &Structure) -> Result<CanonicalCode> {
    canonical_form_capped(a, Limits::default().canonical_size)
}

pub fn canonical_form_capped(a: &Structure, cap: usize) -> Result<CanonicalCode> {
    canonical_labeling(a, cap).map(|(code, _)| code)
}

/// The canonical code and a relabeling `perm` (old element ↦ new element)
/// that realizes it.
pub fn canonical_labeling(a: &Structure, cap: usize) -> Result<(CanonicalCode, Vec<usize>)> {
    let cap = cap.min(MAX_CANONICAL_SIZE);
    if a.size() > cap {
        return Err(Error::limit("canonicalization size", cap, a.size()));
    }
    Canonicalizer::new(a).run()
}

/// The relabeled structure whose plain code is the canonical code.
pub fn canonical_structure(a: &Structure, cap: usize) -> Result<(CanonicalCode, Structure)> {
    let (code, perm) = canonical_labeling(a, cap)?;
    Ok((code, super::relabel(a, &perm)?))
}

/// Isomorphism test by canonical-code equality.
pub fn are_isomorphic(a: &Structure, b: &Structure) -> Result<bool> {
    check_same_signature(a, b)?;
    if a.size() != b.size() || a.total_tuples() != b.total_tuples() {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

struct Canonicalizer<'a> {
    a: &'a Structure,
    tuples: Vec<Vec<Vec<usize>>>,
    /// Class index of each position in the canonical order.
    position_class: Vec<usize>,
    /// Members of each class.
    class_members: Vec<Vec<usize>>,
    best: Option<(Vec<u8>, Vec<usize>)>,
    perm: Vec<usize>,
    used: Vec<bool>,
    scratch: Vec<u8>,
    indices: Vec<usize>,
}

impl<'a> Canonicalizer<'a> {
    fn new(a: &'a Structure) -> Self {
        let n = a.size();
        let sig = a.signature();
        let tuples: Vec<Vec<Vec<usize>>> = (0..sig.len()).map(|r| a.tuples(r).collect()).collect();

        // Degree profile: per relation and position, occurrence counts, plus
        // the number of constant tuples on the element.
        let width: usize = (0..sig.len()).map(|r| sig.arity(r) + 1).sum();
        let mut profile = vec![vec![0usize; width]; n];
        let mut offset = 0;
        for (r, ts) in tuples.iter().enumerate() {
            let arity = sig.arity(r);
            for t in ts {
                for (p, &x) in t.iter().enumerate() {
                    profile[x][offset + p] += 1;
                }
                if t.iter().all(|&x| x == t[0]) {
                    profile[t[0]][offset + arity] += 1;
                }
            }
            offset += arity + 1;
        }
        let mut keys: Vec<&Vec<usize>> = profile.iter().collect();
        keys.sort();
        keys.dedup();
        let mut class_members = vec![Vec::new(); keys.len()];
        for (x, p) in profile.iter().enumerate() {
            let k = keys.binary_search(&p).expect("present");
            class_members[k].push(x);
        }
        let position_class = class_members
            .iter()
            .enumerate()
            .flat_map(|(k, m)| std::iter::repeat_n(k, m.len()))
            .collect();
        Canonicalizer {
            a,
            tuples,
            position_class,
            class_members,
            best: None,
            perm: vec![usize::MAX; n],
            used: vec![false; n],
            scratch: Vec::new(),
            indices: Vec::new(),
        }
    }

    fn run(mut self) -> Result<(CanonicalCode, Vec<usize>)> {
        self.assign(0);
        let (code, perm) = self.best.expect("at least one labeling");
        Ok((CanonicalCode(code), perm))
    }

    fn assign(&mut self, position: usize) {
        let n = self.a.size();
        if position == n {
            self.evaluate();
            return;
        }
        let class = self.position_class[position];
        for i in 0..self.class_members[class].len() {
            let x = self.class_members[class][i];
            if self.used[x] {
                continue;
            }
            self.used[x] = true;
            self.perm[x] = position;
            self.assign(position + 1);
            self.used[x] = false;
        }
    }

    fn evaluate(&mut self) {
        let n = self.a.size();
        let sig = self.a.signature();
        self.scratch.clear();
        self.scratch.extend_from_slice(&(n as u32).to_be_bytes());
        let mut entry = Vec::new();
        for (r, ts) in self.tuples.iter().enumerate() {
            let arity = sig.arity(r);
            self.indices.clear();
            self.indices.extend(
                ts.iter()
                    .map(|t| t.iter().fold(0usize, |acc, &x| acc * n + self.perm[x])),
            );
            self.indices.sort_unstable();
            entry.resize(arity, 0);
            for &i in &self.indices {
                decode_index(i, n, &mut entry);
                self.scratch.extend(entry.iter().map(|&x| x as u8));
            }
            self.scratch.push(TERMINATOR);
        }
        let better = match &self.best {
            None => true,
            Some((code, _)) => self.scratch < *code,
        };
        if better {
            self.best = Some((self.scratch.clone(), self.perm.clone()));
        }
    }
}
