//! The poset `Q(c)` of quotients of a structure.
//!
//! Under `SeM` a quotient is determined by its kernel partition: the codomain
//! is the image structure. Under `ESm` every surjective hom is a quotient, so
//! a class is a kernel partition together with a codomain relation set that
//! contains the image; the classes of one partition form a Boolean lattice
//! (a *fiber*) over the tuples outside the image. Element indices are
//! grouped by fiber: `offset + mask`, where bit `j` of `mask` selects the
//! `j`-th free tuple.
//!
//! Order: `x ≤ y` iff `x` factors through `y`, i.e. the kernel of `y`
//! refines the kernel of `x` and the induced block map sends the codomain
//! relations of `y` into those of `x`.

use std::collections::BTreeMap;

use super::partition::{partitions, Partition};
use super::poset::{Poset, MAX_EXPLICIT_POSET};
use crate::sigstruct::{bit_get, bit_set, decode_index, induced_quotient, slot_count};
use crate::sigstruct::{
    canonical_structure, CanonicalCode, FactorisationSystem, Morphism, Structure,
};
use crate::{Error, Limits, Result};

/// Free-tuple bits per fiber; keeps masks in a `u64` and tables addressable.
const MAX_FREE_BITS: usize = 40;

const NOT_FREE: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Fiber {
    partition: Partition,
    /// The image structure of the source over the blocks.
    image: Structure,
    /// Free tuples as `(relation, slot index over the blocks)`.
    free: Vec<(usize, usize)>,
    /// Per relation and slot, the free-bit position or `NOT_FREE`.
    free_pos: Vec<Vec<u32>>,
    offset: usize,
}

impl Fiber {
    fn size(&self) -> usize {
        1 << self.free.len()
    }

    fn holds(&self, mask: u64, rel: usize, slot: usize) -> bool {
        if bit_get(self.image.relation_bits(rel), slot) {
            return true;
        }
        let p = self.free_pos[rel][slot];
        p != NOT_FREE && mask >> p & 1 == 1
    }
}

/// One quotient class, materialized.
#[derive(Debug, Clone)]
pub struct QuotientElement {
    pub partition: Partition,
    pub codomain: Structure,
    /// The quotient map `c ↠ codomain`, sending `x` to its block.
    pub representative: Morphism,
}

/// The classes of `Q(c)` whose codomains share one isomorphism type.
#[derive(Debug, Clone)]
pub struct CodomainClass {
    pub code: CanonicalCode,
    /// The codomain in canonical labeling.
    pub codomain: Structure,
    /// Number of classes with this codomain type.
    pub elements: usize,
    /// `Σ μ(x, top)` over those classes.
    pub mobius: i64,
}

#[derive(Debug, Clone)]
pub struct QuotientPoset {
    source: Structure,
    system: FactorisationSystem,
    fibers: Vec<Fiber>,
    len: usize,
    top: usize,
}

/// `Q(c)` with the default limits.
pub fn quotient_poset(c: &Structure, system: FactorisationSystem) -> Result<QuotientPoset> {
    QuotientPoset::new(c, system, &Limits::default())
}

impl QuotientPoset {
    pub fn new(
        c: &Structure,
        system: FactorisationSystem,
        limits: &Limits,
    ) -> Result<QuotientPoset> {
        let n = c.size();
        if n > limits.partition_size {
            return Err(Error::limit("partition size", limits.partition_size, n));
        }
        let sig = c.signature();
        let mut fibers = Vec::new();
        let mut total: usize = 0;
        for partition in partitions(n) {
            let m = partition.block_count();
            let image = induced_quotient(c, partition.rgs(), m)?;
            let mut free = Vec::new();
            let mut free_pos = Vec::with_capacity(sig.len());
            for rel in 0..sig.len() {
                let slots = slot_count(m, sig.arity(rel))?;
                let mut pos = vec![NOT_FREE; slots];
                if system == FactorisationSystem::ESm {
                    for (slot, p) in pos.iter_mut().enumerate() {
                        if !image.holds_index(rel, slot) {
                            if free.len() >= MAX_FREE_BITS {
                                return Err(Error::limit(
                                    "quotient poset elements",
                                    limits.quotient_elements,
                                    usize::MAX,
                                ));
                            }
                            *p = free.len() as u32;
                            free.push((rel, slot));
                        }
                    }
                }
                free_pos.push(pos);
            }
            let fiber = Fiber {
                partition,
                image,
                free,
                free_pos,
                offset: total,
            };
            total = total.saturating_add(fiber.size());
            if total > limits.quotient_elements {
                return Err(Error::limit(
                    "quotient poset elements",
                    limits.quotient_elements,
                    total,
                ));
            }
            fibers.push(fiber);
        }
        // The discrete partition comes last in restricted-growth order and
        // its image is `c` itself.
        let top = fibers.last().expect("at least one partition").offset;
        Ok(QuotientPoset {
            source: c.clone(),
            system,
            fibers,
            len: total,
            top,
        })
    }

    pub fn source(&self) -> &Structure {
        &self.source
    }

    pub fn system(&self) -> FactorisationSystem {
        self.system
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The identity class.
    pub fn top(&self) -> usize {
        self.top
    }

    fn locate(&self, i: usize) -> (&Fiber, u64) {
        assert!(i < self.len, "quotient index {i} out of range");
        let f = self.fibers.partition_point(|f| f.offset <= i) - 1;
        let fiber = &self.fibers[f];
        (fiber, (i - fiber.offset) as u64)
    }

    pub fn partition(&self, i: usize) -> &Partition {
        &self.locate(i).0.partition
    }

    pub fn codomain(&self, i: usize) -> Structure {
        let (fiber, mask) = self.locate(i);
        let sig = self.source.signature();
        let m = fiber.partition.block_count();
        let rels = (0..sig.len())
            .map(|rel| {
                let mut bits = fiber.image.relation_bits(rel).to_vec();
                for (j, &(r, slot)) in fiber.free.iter().enumerate() {
                    if r == rel && mask >> j & 1 == 1 {
                        bit_set(&mut bits, slot);
                    }
                }
                bits
            })
            .collect();
        Structure::from_bits(sig, m, rels)
    }

    pub fn representative(&self, i: usize) -> Morphism {
        let map = self.partition(i).rgs().to_vec();
        Morphism::new(self.source.clone(), self.codomain(i), map)
            .expect("block map is a homomorphism")
    }

    pub fn element(&self, i: usize) -> QuotientElement {
        QuotientElement {
            partition: self.partition(i).clone(),
            codomain: self.codomain(i),
            representative: self.representative(i),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = QuotientElement> + '_ {
        (0..self.len).map(|i| self.element(i))
    }

    /// Index of the class with this kernel and codomain, if it exists.
    pub fn index_of(&self, partition: &Partition, codomain: &Structure) -> Option<usize> {
        let fiber = self.fibers.iter().find(|f| f.partition == *partition)?;
        if codomain.size() != partition.block_count()
            || codomain.signature() != self.source.signature()
        {
            return None;
        }
        let mut mask = 0u64;
        for rel in 0..codomain.signature().len() {
            let slots = slot_count(codomain.size(), codomain.signature().arity(rel)).ok()?;
            for slot in 0..slots {
                let held = codomain.holds_index(rel, slot);
                if fiber.image.holds_index(rel, slot) {
                    if !held {
                        return None;
                    }
                } else if held {
                    match fiber.free_pos[rel][slot] {
                        NOT_FREE => return None,
                        p => mask |= 1 << p,
                    }
                }
            }
        }
        Some(fiber.offset + mask as usize)
    }

    /// Whether `x ≤ y`, i.e. `x` factors through `y`.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        let (fx, mx) = self.locate(x);
        let (fy, my) = self.locate(y);
        if !fy.partition.refines(&fx.partition) {
            return false;
        }
        let beta = fy.partition.block_map_to(&fx.partition);
        let sig = self.source.signature();
        let (mxs, mys) = (fx.partition.block_count(), fy.partition.block_count());
        let mut t = Vec::new();
        for rel in 0..sig.len() {
            t.resize(sig.arity(rel), 0);
            let slots = fy.free_pos[rel].len();
            for slot in 0..slots {
                if !fy.holds(my, rel, slot) {
                    continue;
                }
                decode_index(slot, mys, &mut t);
                let image = t.iter().fold(0, |acc, &b| acc * mxs + beta[b]);
                if !fx.holds(mx, rel, image) {
                    return false;
                }
            }
        }
        true
    }

    /// The explicit poset, for small `Q(c)`.
    pub fn to_poset(&self) -> Result<Poset> {
        if self.len > MAX_EXPLICIT_POSET {
            return Err(Error::limit(
                "explicit poset size",
                MAX_EXPLICIT_POSET,
                self.len,
            ));
        }
        Poset::new(self.len, |x, y| self.leq(x, y))
    }

    /// Covering pairs of the explicit poset.
    pub fn hasse_edges(&self) -> Result<Vec<(usize, usize)>> {
        Ok(self.to_poset()?.hasse_edges())
    }

    /// `μ(x, top)` for every element `x`.
    ///
    /// Uses `Σ_{z ≥ x} μ(z, top) = δ(x, top)` fiber by fiber, finest
    /// partitions first. Within the fiber of `π` the elements above
    /// `(π, R)` are `(π, R')` with `R' ⊆ R`, so the fiber's values are the
    /// subset-Möbius transform of `g(R) = δ − ext(R)`, where `ext(R)` sums
    /// `μ(·, top)` over classes of strictly finer partitions whose
    /// relations map into `R`. Each such sum is a subset sum over a
    /// Boolean lattice and is read off the finer fiber's stored `g` table.
    pub fn mobius_to_top(&self) -> Result<Vec<i64>> {
        let nf = self.fibers.len();
        let mut order: Vec<usize> = (0..nf).collect();
        order.sort_by_key(|&f| std::cmp::Reverse(self.fibers[f].partition.block_count()));
        let top_fiber = nf - 1;
        let mut g_tables: Vec<Vec<i64>> = vec![Vec::new(); nf];
        let mut out = vec![0i64; self.len];
        let mut masks: Vec<u64> = Vec::new();
        for &fi in &order {
            let fiber = &self.fibers[fi];
            let size = fiber.size();
            let mut g = vec![0i64; size];
            if fi == top_fiber {
                g[0] = 1;
            }
            for &fj in &order {
                let finer = &self.fibers[fj];
                if finer.partition.block_count() <= fiber.partition.block_count() {
                    break;
                }
                if !finer.partition.refines(&fiber.partition) {
                    continue;
                }
                let (base, pre) = self.transfer(finer, fiber);
                masks.clear();
                masks.resize(size, 0);
                masks[0] = base;
                let table = &g_tables[fj];
                g[0] = g[0]
                    .checked_sub(table[base as usize])
                    .ok_or_else(overflow)?;
                for r in 1..size {
                    let low = r.trailing_zeros() as usize;
                    let mask = masks[r & (r - 1)] | pre[low];
                    masks[r] = mask;
                    g[r] = g[r]
                        .checked_sub(table[mask as usize])
                        .ok_or_else(overflow)?;
                }
            }
            // Subset-Möbius transform of g gives μ(·, top) on the fiber.
            let mut mu = g.clone();
            let bits = fiber.free.len();
            for b in 0..bits {
                let step = 1 << b;
                for r in 0..size {
                    if r & step != 0 {
                        mu[r] = mu[r].checked_sub(mu[r ^ step]).ok_or_else(overflow)?;
                    }
                }
            }
            out[fiber.offset..fiber.offset + size].copy_from_slice(&mu);
            g_tables[fi] = g;
        }
        Ok(out)
    }

    /// Codomain isomorphism types with multiplicities and summed `μ(·, top)`,
    /// ordered by canonical code.
    pub fn codomain_classes(&self) -> Result<Vec<CodomainClass>> {
        let mu = self.mobius_to_top()?;
        let mut classes: BTreeMap<CanonicalCode, CodomainClass> = BTreeMap::new();
        for (i, &weight) in mu.iter().enumerate() {
            let (code, codomain) = canonical_structure(&self.codomain(i), self.source.size())?;
            let entry = classes
                .entry(code.clone())
                .or_insert_with(|| CodomainClass {
                    code,
                    codomain,
                    elements: 0,
                    mobius: 0,
                });
            entry.elements += 1;
            entry.mobius = entry.mobius.checked_add(weight).ok_or_else(overflow)?;
        }
        Ok(classes.into_values().collect())
    }

    /// For `finer` refining `coarser`: the free bits of `finer` whose tuple
    /// maps into the image of `coarser` (`base`), and per free bit `b` of
    /// `coarser` the free bits of `finer` mapping onto it (`pre[b]`).
    fn transfer(&self, finer: &Fiber, coarser: &Fiber) -> (u64, Vec<u64>) {
        let beta = finer.partition.block_map_to(&coarser.partition);
        let (mf, mc) = (
            finer.partition.block_count(),
            coarser.partition.block_count(),
        );
        let sig = self.source.signature();
        let mut base = 0u64;
        let mut pre = vec![0u64; coarser.free.len()];
        let mut t = vec![0; 0];
        for (j, &(rel, slot)) in finer.free.iter().enumerate() {
            t.resize(sig.arity(rel), 0);
            decode_index(slot, mf, &mut t);
            let image = t.iter().fold(0, |acc, &b| acc * mc + beta[b]);
            match coarser.free_pos[rel][image] {
                NOT_FREE => base |= 1 << j,
                p => pre[p as usize] |= 1 << j,
            }
        }
        (base, pre)
    }
}

fn overflow() -> Error {
    Error::InvariantViolated("Möbius value does not fit in 64 bits".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotposet::{bell_number, mobius};
    use crate::sigstruct::graphs::{digraph, discrete, loop_point};
    use crate::sigstruct::Signature;
    use crate::sigstruct::{canonical_representatives, StructureClass};
    use crate::Limits;

    const SEM: FactorisationSystem = FactorisationSystem::SeM;
    const ESM: FactorisationSystem = FactorisationSystem::ESm;

    fn small_structures(max: usize) -> Vec<Structure> {
        canonical_representatives(
            &Signature::binary(),
            max,
            StructureClass::All,
            &Limits::default(),
        )
        .unwrap()
        .into_iter()
        .map(|(_, s)| s)
        .collect()
    }

    #[test]
    fn singleton_posets() {
        assert_eq!(quotient_poset(&discrete(1), SEM).unwrap().len(), 1);
        assert_eq!(quotient_poset(&loop_point(), ESM).unwrap().len(), 1);
        // A loopless point can be sent onto a loop by a surjective hom.
        assert_eq!(quotient_poset(&discrete(1), ESM).unwrap().len(), 2);
    }

    #[test]
    fn relation_free_structures_have_bell_many_classes() {
        let sig = Signature::empty();
        for n in 0..=6 {
            let c = Structure::new(&sig, n).unwrap();
            for system in FactorisationSystem::ALL {
                let q = quotient_poset(&c, system).unwrap();
                assert_eq!(bell_number(n), q.len().into());
            }
        }
        assert_eq!(quotient_poset(&discrete(5), SEM).unwrap().len(), 52);
    }

    #[test]
    fn single_arc_under_strong_quotients() {
        let arc = digraph(2, &[(0, 1)]);
        let q = quotient_poset(&arc, SEM).unwrap();
        assert_eq!(q.len(), 2);
        let collapse = (0..2).find(|&i| i != q.top()).unwrap();
        assert_eq!(q.codomain(collapse), loop_point());
        assert!(q.leq(collapse, q.top()));
        assert!(!q.leq(q.top(), collapse));
    }

    #[test]
    fn top_is_identity_and_representatives_are_quotients() {
        for c in small_structures(3) {
            for system in FactorisationSystem::ALL {
                let q = quotient_poset(&c, system).unwrap();
                assert_eq!(q.codomain(q.top()), c);
                assert!(q.partition(q.top()).is_discrete());
                for i in 0..q.len() {
                    assert!(q.leq(i, q.top()));
                    let e = q.element(i);
                    assert!(e.representative.is_quotient(system), "{c:?} {i}");
                    assert_eq!(q.index_of(&e.partition, &e.codomain), Some(i));
                }
            }
        }
    }

    #[test]
    fn orders_are_partial_orders() {
        for c in small_structures(3) {
            for system in FactorisationSystem::ALL {
                let q = quotient_poset(&c, system).unwrap();
                let p = q.to_poset().unwrap();
                assert_eq!(p.top(), Some(q.top()));
            }
        }
    }

    #[test]
    fn fibered_mobius_matches_recursion() {
        for c in small_structures(3) {
            for system in FactorisationSystem::ALL {
                let q = quotient_poset(&c, system).unwrap();
                let p = q.to_poset().unwrap();
                let fast = q.mobius_to_top().unwrap();
                let column = p.mobius_column(q.top()).unwrap();
                assert_eq!(fast, column, "{c:?} {system}");
                if q.len() <= 40 {
                    for (x, &v) in fast.iter().enumerate() {
                        assert_eq!(mobius(&p, x, q.top()).unwrap(), v);
                    }
                }
            }
        }
    }

    /// `μ_Π(π, discrete)`, the partition-lattice Möbius value.
    fn partition_mobius(p: &Partition) -> i64 {
        p.blocks()
            .iter()
            .map(|b| {
                let k = b.len() as i64;
                let f: i64 = (1..k).product();
                if k % 2 == 1 {
                    f
                } else {
                    -f
                }
            })
            .product()
    }

    #[test]
    fn mobius_closed_forms_on_four_elements() {
        // SeM: μ(π, top) = μ_Π(π, discrete). ESm: the same factor times
        // Σ (−1)^{|T∖E|} over relation sets T ⊇ E on the source whose
        // image under π is R.
        for c in small_structures(4).into_iter().step_by(13) {
            let q = quotient_poset(&c, SEM).unwrap();
            for (i, v) in q.mobius_to_top().unwrap().into_iter().enumerate() {
                assert_eq!(v, partition_mobius(q.partition(i)));
            }
            let q = quotient_poset(&c, ESM).unwrap();
            let mu = q.mobius_to_top().unwrap();
            let n = c.size();
            let e: u64 = (0..n * n)
                .filter(|&s| c.holds_index(0, s))
                .map(|s| 1 << s)
                .sum();
            let mut expected = vec![0i64; q.len()];
            let free = !e & ((1u64 << (n * n)) - 1);
            // Enumerate supersets T of E.
            let mut sub = free;
            loop {
                let t = e | sub;
                let sign = if sub.count_ones() % 2 == 0 { 1 } else { -1 };
                for fiber in &q.fibers {
                    let m = fiber.partition.block_count();
                    let mut img = Structure::new(c.signature(), m).unwrap();
                    for s in 0..n * n {
                        if t >> s & 1 == 1 {
                            let (x, y) = (s / n, s % n);
                            img.insert(
                                0,
                                &[fiber.partition.block_of(x), fiber.partition.block_of(y)],
                            )
                            .unwrap();
                        }
                    }
                    let idx = q.index_of(&fiber.partition, &img).unwrap();
                    expected[idx] += sign * partition_mobius(&fiber.partition);
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & free;
            }
            assert_eq!(mu, expected, "{c:?}");
        }
    }

    #[test]
    fn caps() {
        let limits = Limits {
            partition_size: 3,
            ..Limits::default()
        };
        assert!(QuotientPoset::new(&discrete(4), SEM, &limits)
            .unwrap_err()
            .is_limit());
        let limits = Limits {
            quotient_elements: 100,
            ..Limits::default()
        };
        assert!(QuotientPoset::new(&discrete(4), ESM, &limits)
            .unwrap_err()
            .is_limit());
    }
}
