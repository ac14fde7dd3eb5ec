//! Exhaustive enumeration of morphisms of a given class by backtracking.
//!
//! Domain elements are assigned one at a time in order of descending degree.
//! After each assignment every tuple whose elements are now all assigned is
//! checked against the target. Injective classes prune on repeated images;
//! surjective classes prune when the uncovered target elements outnumber the
//! unassigned domain elements. The strong-quotient tuple-image condition is
//! not monotone under partial assignment and is checked at the leaves.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::sigstruct::{
    check_same_signature, morphism::covers_tuples, slot_count, FactorisationSystem, Morphism,
    Structure,
};
use crate::{Count, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MorphismClass {
    Hom,
    /// Injective homomorphisms.
    Mono,
    /// Injective homomorphisms reflecting every relation.
    StrongMono,
    Surjection,
    /// Quotients of the chosen factorisation system: surjections reflecting
    /// the relations (every target tuple has a preimage tuple) for `SeM`,
    /// plain surjections for `ESm`.
    Quotient,
}

impl MorphismClass {
    pub const ALL: [MorphismClass; 5] = [
        MorphismClass::Hom,
        MorphismClass::Mono,
        MorphismClass::StrongMono,
        MorphismClass::Surjection,
        MorphismClass::Quotient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MorphismClass::Hom => "hom",
            MorphismClass::Mono => "mono",
            MorphismClass::StrongMono => "strong-mono",
            MorphismClass::Surjection => "surjection",
            MorphismClass::Quotient => "quotient",
        }
    }
}

impl fmt::Display for MorphismClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MorphismClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MorphismClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown morphism class `{s}`")))
    }
}

/// Result of [`count_morphisms`].
#[derive(Debug, Clone)]
pub struct CountResult {
    pub count: Count,
    /// Present only when enumeration was requested.
    pub witnesses: Option<Vec<Morphism>>,
    /// Set when the witness list stopped at the caller's limit.
    pub truncated: bool,
}

/// u64 counter that spills into a big integer instead of overflowing.
#[derive(Default)]
struct Counter {
    small: u64,
    big: BigUint,
}

impl Counter {
    #[inline]
    fn bump(&mut self) {
        match self.small.checked_add(1) {
            Some(v) => self.small = v,
            None => {
                self.big += self.small;
                self.small = 1;
            }
        }
    }

    fn total(self) -> BigUint {
        self.big + self.small
    }
}

/// Tuple checks attached to a search position.
#[derive(Debug, Clone, Default)]
struct Checks {
    rels: Vec<usize>,
    /// `vars[offsets[i]..offsets[i + 1]]` are the domain elements of check `i`.
    vars: Vec<usize>,
    offsets: Vec<usize>,
}

impl Checks {
    fn push(&mut self, rel: usize, tuple: &[usize]) {
        if self.offsets.is_empty() {
            self.offsets.push(0);
        }
        self.rels.push(rel);
        self.vars.extend_from_slice(tuple);
        self.offsets.push(self.vars.len());
    }

    #[inline]
    fn iter(&self) -> impl Iterator<Item = (usize, &[usize])> {
        self.rels
            .iter()
            .enumerate()
            .map(move |(i, &r)| (r, &self.vars[self.offsets[i]..self.offsets[i + 1]]))
    }
}

/// A search plan compiled for one domain and one class, reusable across
/// targets.
#[derive(Debug, Clone)]
pub struct HomSearch {
    domain: Structure,
    class: MorphismClass,
    system: FactorisationSystem,
    injective: bool,
    surjective: bool,
    covers: bool,
    /// Search position ↦ domain element.
    order: Vec<usize>,
    /// Tuples that must map into the target, by position of their last element.
    checks: Vec<Checks>,
    /// Non-tuples that must not map into the target (strong monos).
    anti_checks: Vec<Checks>,
    /// Trailing positions holding elements in no tuple; for plain homs each
    /// contributes a factor `|target|` to the count.
    isolated: usize,
}

impl HomSearch {
    pub fn new(domain: &Structure, class: MorphismClass, system: FactorisationSystem) -> HomSearch {
        let n = domain.size();
        let sig = domain.signature();
        let degrees = domain.degrees();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| std::cmp::Reverse(degrees[x]));
        let mut position = vec![0; n];
        for (p, &x) in order.iter().enumerate() {
            position[x] = p;
        }
        let last = |t: &[usize]| t.iter().map(|&x| position[x]).max().unwrap_or(0);

        let mut checks = vec![Checks::default(); n.max(1)];
        for rel in 0..sig.len() {
            for t in domain.tuples(rel) {
                checks[last(&t)].push(rel, &t);
            }
        }

        let (injective, surjective, covers) = match (class, system) {
            (MorphismClass::Hom, _) => (false, false, false),
            (MorphismClass::Mono, _) | (MorphismClass::StrongMono, _) => (true, false, false),
            (MorphismClass::Surjection, _)
            | (MorphismClass::Quotient, FactorisationSystem::ESm) => (false, true, false),
            (MorphismClass::Quotient, FactorisationSystem::SeM) => (false, true, true),
        };

        let mut anti_checks = vec![Checks::default(); n.max(1)];
        if class == MorphismClass::StrongMono {
            let mut t = Vec::new();
            for rel in 0..sig.len() {
                let arity = sig.arity(rel);
                let slots = slot_count(n, arity).expect("existing structure");
                t.resize(arity, 0);
                for i in 0..slots {
                    if !domain.holds_index(rel, i) {
                        crate::sigstruct::decode_index(i, n, &mut t);
                        anti_checks[last(&t)].push(rel, &t);
                    }
                }
            }
        }

        let isolated = if class == MorphismClass::Hom {
            order.iter().rev().take_while(|&&x| degrees[x] == 0).count()
        } else {
            0
        };

        HomSearch {
            domain: domain.clone(),
            class,
            system,
            injective,
            surjective,
            covers,
            order,
            checks,
            anti_checks,
            isolated,
        }
    }

    pub fn domain(&self) -> &Structure {
        &self.domain
    }

    pub fn class(&self) -> MorphismClass {
        self.class
    }

    pub fn system(&self) -> FactorisationSystem {
        self.system
    }

    /// Calls `visit` with every morphism of the class, as a map indexed by
    /// domain element, until it breaks.
    pub fn for_each<F>(&self, target: &Structure, visit: F) -> Result<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        self.run(target, self.order.len(), visit)
    }

    /// Searches the first `depth` positions only; the remaining entries of
    /// the map passed to `visit` are unspecified.
    fn run<F>(&self, target: &Structure, depth: usize, mut visit: F) -> Result<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        check_same_signature(&self.domain, target)?;
        let n = self.domain.size();
        let m = target.size();
        if self.surjective && m > n {
            return Ok(());
        }
        if self.injective && n > m {
            return Ok(());
        }
        let mut state = State {
            map: vec![0; n],
            used: vec![0; m],
            uncovered: m,
        };
        let _ = self.descend(target, &mut state, 0, depth, &mut visit);
        Ok(())
    }

    fn descend<F>(
        &self,
        target: &Structure,
        st: &mut State,
        pos: usize,
        n: usize,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if pos == n {
            if self.surjective && st.uncovered > 0 {
                return ControlFlow::Continue(());
            }
            if self.covers && !covers_tuples(&st.map, &self.domain, target) {
                return ControlFlow::Continue(());
            }
            return visit(&st.map);
        }
        let var = self.order[pos];
        let m = target.size();
        let remaining = n - pos - 1;
        for y in 0..m {
            if self.injective && st.used[y] > 0 {
                continue;
            }
            st.map[var] = y;
            if !self.admissible(target, st, pos) {
                continue;
            }
            st.used[y] += 1;
            if st.used[y] == 1 {
                st.uncovered -= 1;
            }
            let feasible = !self.surjective || st.uncovered <= remaining;
            let flow = if feasible {
                self.descend(target, st, pos + 1, n, visit)
            } else {
                ControlFlow::Continue(())
            };
            st.used[y] -= 1;
            if st.used[y] == 0 {
                st.uncovered += 1;
            }
            flow?;
        }
        ControlFlow::Continue(())
    }

    #[inline]
    fn admissible(&self, target: &Structure, st: &State, pos: usize) -> bool {
        let m = target.size();
        for (rel, vars) in self.checks[pos].iter() {
            let idx = vars.iter().fold(0, |acc, &v| acc * m + st.map[v]);
            if !target.holds_index(rel, idx) {
                return false;
            }
        }
        for (rel, vars) in self.anti_checks[pos].iter() {
            let idx = vars.iter().fold(0, |acc, &v| acc * m + st.map[v]);
            if target.holds_index(rel, idx) {
                return false;
            }
        }
        true
    }

    pub fn count(&self, target: &Structure) -> Result<Count> {
        let mut counter = Counter::default();
        self.run(target, self.order.len() - self.isolated, |_| {
            counter.bump();
            ControlFlow::Continue(())
        })?;
        Ok(counter.total() * BigUint::from(target.size()).pow(self.isolated as u32))
    }

    /// Like [`count`](Self::count) but fails instead of growing past `u64`.
    pub fn count_u64(&self, target: &Structure) -> Result<u64> {
        let mut count: u64 = 0;
        let mut overflow = false;
        self.run(target, self.order.len() - self.isolated, |_| {
            match count.checked_add(1) {
                Some(c) => {
                    count = c;
                    ControlFlow::Continue(())
                }
                None => {
                    overflow = true;
                    ControlFlow::Break(())
                }
            }
        })?;
        let factor = (target.size() as u64).checked_pow(self.isolated as u32);
        match factor.and_then(|f| count.checked_mul(f)) {
            Some(total) if !overflow => Ok(total),
            _ => Err(Error::limit("u64 count", u64::MAX as usize, usize::MAX)),
        }
    }

    /// Counts and collects up to `limit` witnesses (all when `None`).
    pub fn collect(&self, target: &Structure, limit: Option<usize>) -> Result<CountResult> {
        let mut counter = Counter::default();
        let mut maps: Vec<Vec<usize>> = Vec::new();
        let mut truncated = false;
        self.for_each(target, |map| {
            counter.bump();
            if limit.is_none_or(|l| maps.len() < l) {
                maps.push(map.to_vec());
            } else {
                truncated = true;
            }
            ControlFlow::Continue(())
        })?;
        let witnesses = maps
            .into_iter()
            .map(|map| Morphism::new(self.domain.clone(), target.clone(), map))
            .collect::<Result<Vec<_>>>()?;
        Ok(CountResult {
            count: counter.total(),
            witnesses: Some(witnesses),
            truncated,
        })
    }
}

struct State {
    map: Vec<usize>,
    used: Vec<u32>,
    uncovered: usize,
}

/// Counts (and optionally enumerates) the morphisms `c → a` of a class.
pub fn count_morphisms(
    c: &Structure,
    a: &Structure,
    class: MorphismClass,
    system: FactorisationSystem,
    enumerate: bool,
    limit: Option<usize>,
) -> Result<CountResult> {
    check_same_signature(c, a)?;
    if limit == Some(0) {
        return Err(Error::InvalidArgument(
            "witness limit must be at least 1".into(),
        ));
    }
    let search = HomSearch::new(c, class, system);
    if enumerate {
        search.collect(a, limit)
    } else {
        Ok(CountResult {
            count: search.count(a)?,
            witnesses: None,
            truncated: false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigstruct::graphs::{complete, cycle, digraph, discrete};
    use crate::sigstruct::{disjoint_union, validate_morphism};

    const SEM: FactorisationSystem = FactorisationSystem::SeM;

    fn count(c: &Structure, a: &Structure, class: MorphismClass) -> u64 {
        HomSearch::new(c, class, SEM).count_u64(a).unwrap()
    }

    /// Oracle: enumerate all |a|^|c| maps and validate each.
    fn brute(
        c: &Structure,
        a: &Structure,
        class: MorphismClass,
        system: FactorisationSystem,
    ) -> u64 {
        let n = c.size();
        let m = a.size() as u64;
        let total = m.pow(n as u32);
        let mut hits = 0;
        let mut map = vec![0; n];
        for code in 0..total {
            let mut k = code;
            for slot in map.iter_mut() {
                *slot = (k % m) as usize;
                k /= m;
            }
            if validate_morphism(&map, c, a, class, system).unwrap() {
                hits += 1;
            }
        }
        if n == 0 {
            return validate_morphism(&[], c, a, class, system).unwrap() as u64;
        }
        hits
    }

    #[test]
    fn point_maps_anywhere() {
        for a in [complete(3), cycle(5), digraph(4, &[(0, 0)])] {
            assert_eq!(count(&discrete(1), &a, MorphismClass::Hom), a.size() as u64);
        }
    }

    #[test]
    fn arc_into_triangle() {
        assert_eq!(
            count(&digraph(2, &[(0, 1)]), &complete(3), MorphismClass::Hom),
            6
        );
    }

    #[test]
    fn triangle_endomorphisms() {
        let k3 = complete(3);
        assert_eq!(count(&k3, &k3, MorphismClass::Mono), 6);
        assert_eq!(count(&k3, &k3, MorphismClass::Hom), 6);
    }

    #[test]
    fn triangle_into_bipartite_hexagon() {
        assert_eq!(count(&complete(3), &cycle(6), MorphismClass::Hom), 0);
    }

    #[test]
    fn all_classes_match_brute_force() {
        let samples = [
            discrete(0),
            discrete(2),
            digraph(2, &[(0, 1)]),
            digraph(2, &[(0, 0), (0, 1)]),
            digraph(3, &[(0, 1), (1, 2)]),
            complete(3),
            digraph(3, &[(0, 1), (1, 2), (2, 0), (1, 1)]),
            digraph(1, &[(0, 0)]),
        ];
        for c in &samples {
            for a in &samples {
                for system in FactorisationSystem::ALL {
                    for class in MorphismClass::ALL {
                        let got = HomSearch::new(c, class, system).count_u64(a).unwrap();
                        assert_eq!(
                            got,
                            brute(c, a, class, system),
                            "{c:?} -> {a:?} {class} {system}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn witnesses_are_distinct_and_truncate() {
        let c = digraph(2, &[(0, 1)]);
        let a = complete(3);
        let all = count_morphisms(&c, &a, MorphismClass::Hom, SEM, true, None).unwrap();
        let ws = all.witnesses.unwrap();
        assert_eq!(ws.len(), 6);
        assert!(!all.truncated);
        let mut maps: Vec<_> = ws.iter().map(|m| m.map().to_vec()).collect();
        maps.sort();
        maps.dedup();
        assert_eq!(maps.len(), 6);

        let some = count_morphisms(&c, &a, MorphismClass::Hom, SEM, true, Some(4)).unwrap();
        assert_eq!(some.count, BigUint::from(6u32));
        assert_eq!(some.witnesses.unwrap().len(), 4);
        assert!(some.truncated);

        assert!(count_morphisms(&c, &a, MorphismClass::Hom, SEM, true, Some(0)).is_err());
    }

    #[test]
    fn counts_past_u32() {
        // 40 isolated points into 4 points: 4^40 > 2^64.
        let c = discrete(40);
        let a = discrete(4);
        let search = HomSearch::new(&c, MorphismClass::Hom, SEM);
        assert_eq!(search.count(&a).unwrap(), BigUint::from(4u32).pow(40));
        assert!(search.count_u64(&a).unwrap_err().is_limit());
        // An arc plus isolated points: 6 * 3^5 into the triangle.
        let c = disjoint_union(&digraph(2, &[(0, 1)]), &discrete(5)).unwrap();
        assert_eq!(count(&c, &complete(3), MorphismClass::Hom), 6 * 243);
        let mono = HomSearch::new(&discrete(12), MorphismClass::Surjection, SEM);
        assert_eq!(mono.count_u64(&discrete(2)).unwrap(), 4094);
    }

    #[test]
    fn multiplicative_on_disjoint_unions() {
        let c1 = digraph(2, &[(0, 1)]);
        let c2 = complete(3);
        let a = disjoint_union(&complete(3), &digraph(2, &[(0, 1), (1, 0), (1, 1)])).unwrap();
        let u = disjoint_union(&c1, &c2).unwrap();
        assert_eq!(
            count(&u, &a, MorphismClass::Hom),
            count(&c1, &a, MorphismClass::Hom) * count(&c2, &a, MorphismClass::Hom)
        );
    }

    #[test]
    fn class_names_parse() {
        for class in MorphismClass::ALL {
            assert_eq!(class.name().parse::<MorphismClass>().unwrap(), class);
        }
        assert!("iso".parse::<MorphismClass>().is_err());
    }
}
