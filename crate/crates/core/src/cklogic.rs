//! Tree-width, Weisfeiler–Leman refinement and counting-logic equivalence.
//!
//! Two structures agree on all sentences of counting logic with `k`
//! variables exactly when they have the same number of homomorphisms from
//! every structure of tree-width less than `k`. [`ck_profile_equal`] checks
//! the right-hand side up to a size budget, and [`wl_equivalent`] decides the
//! left-hand side with `(k−1)`-dimensional Weisfeiler–Leman refinement.
//!
//! The identity-relation adjunction used for counting logic without equality
//! is exposed as [`add_identity_relation`] and [`quotient_by_i`].

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::homsearch::HomSearch;
use crate::lovasz::Witness;
use crate::sigstruct::{
    check_same_signature, induced_quotient, representatives_of_size, StructureClass,
};
use crate::{
    Count, Error, FactorisationSystem, Limits, MorphismClass, Result, Signature, Structure,
};

/// Name of the symbol interpreted as identity.
pub const IDENTITY_SYMBOL: &str = "I";

/// Largest `n^(d+1)` accepted by the refinement (`n` elements, `d` the
/// dimension).
const MAX_WL_WORK: usize = 1 << 22;

/// A tree decomposition of the Gaifman graph of a structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Each bag sorted.
    pub bags: Vec<Vec<usize>>,
    /// Edges between bag indices.
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Largest bag size minus one (0 when there are no bags).
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(1)
            .saturating_sub(1)
    }

    /// Checks the three decomposition conditions and that the edges form a tree.
    pub fn validate(&self, a: &Structure) -> Result<()> {
        let bad = |msg: String| Err(Error::InvariantViolated(msg));
        let m = self.bags.len();
        if self.edges.len() + 1 != m.max(1) || self.edges.iter().any(|&(x, y)| x >= m || y >= m) {
            return bad("decomposition edges do not form a tree".into());
        }
        let mut adj = vec![Vec::new(); m];
        for &(x, y) in &self.edges {
            adj[x].push(y);
            adj[y].push(x);
        }
        // Connected over the bags selected by `keep`.
        let connected = |keep: &dyn Fn(usize) -> bool| {
            let Some(start) = (0..m).find(|&i| keep(i)) else {
                return true;
            };
            let mut seen = vec![false; m];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for &j in &adj[i] {
                    if !seen[j] && keep(j) {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            (0..m).all(|i| !keep(i) || seen[i])
        };
        if !connected(&|_| true) {
            return bad("decomposition tree is disconnected".into());
        }
        for x in 0..a.size() {
            if !self.bags.iter().any(|b| b.contains(&x)) {
                return bad(format!("element {x} is in no bag"));
            }
            if !connected(&|i| self.bags[i].contains(&x)) {
                return bad(format!("bags containing {x} are not connected"));
            }
        }
        for rel in 0..a.signature().len() {
            for t in a.tuples(rel) {
                if !self.bags.iter().any(|b| t.iter().all(|x| b.contains(x))) {
                    return bad(format!(
                        "tuple {t:?} of {} is in no bag",
                        a.signature().name(rel)
                    ));
                }
            }
        }
        Ok(())
    }
}

fn gaifman_masks(a: &Structure) -> Vec<u32> {
    a.gaifman_adjacency()
        .iter()
        .map(|ns| ns.iter().fold(0u32, |m, &y| m | 1 << y))
        .collect()
}

/// Vertices outside `s ∪ {v}` adjacent to the component of `v` in `s ∪ {v}`.
fn outside_neighbours(adj: &[u32], s: u32, v: usize) -> u32 {
    let inside = s | 1 << v;
    let mut comp = 1u32 << v;
    let mut frontier = comp;
    let mut out = 0u32;
    while frontier != 0 {
        let x = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let n = adj[x];
        out |= n & !inside;
        let new = n & inside & !comp;
        comp |= new;
        frontier |= new;
    }
    out
}

/// Optimal elimination order by dynamic programming over vertex subsets:
/// `TW(S) = min_{v∈S} max(TW(S∖v), |Q(S∖v, v)|)`, where `v` is the last
/// vertex of `S` eliminated.
fn optimal_elimination(a: &Structure, limits: &Limits) -> Result<(usize, Vec<usize>)> {
    let n = a.size();
    let cap = limits.treewidth_size.min(20);
    if n > cap {
        return Err(Error::limit("tree-width size", cap, n));
    }
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    let adj = gaifman_masks(a);
    let full = (1usize << n) - 1;
    let mut tw = vec![i32::MAX; full + 1];
    let mut last = vec![0u8; full + 1];
    tw[0] = -1;
    for s in 1..=full {
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1 << v);
            let q = outside_neighbours(&adj, without as u32, v).count_ones() as i32;
            let w = tw[without].max(q);
            if w < tw[s] {
                tw[s] = w;
                last[s] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = last[s] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    Ok((tw[full].max(0) as usize, order))
}

/// Exact tree-width of the Gaifman graph; the empty structure gets 0.
pub fn treewidth(a: &Structure) -> Result<usize> {
    treewidth_with(a, &Limits::default())
}

pub fn treewidth_with(a: &Structure, limits: &Limits) -> Result<usize> {
    optimal_elimination(a, limits).map(|(w, _)| w)
}

/// A decomposition of width [`treewidth`], built from an optimal
/// elimination order.
pub fn tree_decomposition(a: &Structure) -> Result<TreeDecomposition> {
    let (_, order) = optimal_elimination(a, &Limits::default())?;
    Ok(decomposition_from_order(a, &order))
}

fn decomposition_from_order(a: &Structure, order: &[usize]) -> TreeDecomposition {
    let n = a.size();
    let mut adj = gaifman_masks(a);
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::new();
    let mut remaining: u32 = ((1u64 << n) - 1) as u32;
    for (i, &v) in order.iter().enumerate() {
        let later = adj[v] & remaining & !(1 << v);
        let mut bag = vec![v];
        let mut rest = later;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            bag.push(u);
            adj[u] |= later & !(1 << u);
        }
        bag.sort_unstable();
        bags.push(bag);
        remaining &= !(1 << v);
        // Attach to the bag of the next-eliminated later neighbour, or to the
        // following bag so the pieces form one tree.
        let parent = (0..n)
            .filter(|&u| later >> u & 1 == 1)
            .map(|u| pos[u])
            .min()
            .or((i + 1 < n).then_some(i + 1));
        if let Some(p) = parent {
            edges.push((i, p));
        }
    }
    TreeDecomposition { bags, edges }
}

/// Connected canonical representatives with `1..=max_size` elements and
/// tree-width below `k`, in canonical-code order.
///
/// Hom counts from a disjoint union are products of the counts from its
/// components, so connected test structures decide the same profiles.
pub fn enumerate_tw_lt_k(
    sig: &Arc<Signature>,
    k: usize,
    max_size: usize,
    class: StructureClass,
    limits: &Limits,
) -> Result<Vec<Structure>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let mut out = Vec::new();
    let mut seen = 0;
    for n in 1..=max_size {
        let reps = representatives_of_size(sig, n, class, limits, seen)?;
        seen += reps.len();
        for (_, s) in reps {
            if s.is_connected() && treewidth_with(&s, limits)? < k {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Atomic type of a tuple: its equality pattern and, for every relation,
/// which re-indexings of the tuple lie in the relation.
fn atomic_type(a: &Structure, t: &[usize]) -> Vec<u8> {
    let m = t.len();
    let mut ty = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            ty.push((t[i] == t[j]) as u8);
        }
    }
    let mut buf = Vec::new();
    for rel in 0..a.signature().len() {
        let r = a.signature().arity(rel);
        let total = m.pow(r as u32);
        for mut code in 0..total {
            buf.clear();
            for _ in 0..r {
                buf.push(t[code % m]);
                code /= m;
            }
            ty.push(a.holds(rel, &buf) as u8);
        }
    }
    ty
}

/// Joint `d`-dimensional refinement of several structures with a shared
/// color vocabulary. `visit` sees the colorings after each round (the
/// initial coloring first) and may stop early by returning `false`.
fn refine<F>(structs: &[&Structure], d: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&[Vec<u32>]) -> bool,
{
    let work: usize = structs
        .iter()
        .map(|s| s.size().saturating_pow(d as u32 + 1))
        .max()
        .unwrap_or(0);
    if work > MAX_WL_WORK {
        return Err(Error::limit("refinement tuples", MAX_WL_WORK, work));
    }
    let decode = |mut idx: usize, n: usize, out: &mut Vec<usize>| {
        out.clear();
        for _ in 0..d {
            out.push(idx % n);
            idx /= n;
        }
    };
    let mut types: HashMap<Vec<u8>, u32> = HashMap::new();
    let mut intern_type = |ty: Vec<u8>| {
        let next = types.len() as u32;
        *types.entry(ty).or_insert(next)
    };
    let mut colors = Vec::with_capacity(structs.len());
    // Atomic type ids of the extended tuples t·w, indexed by t·n + w.
    let mut extended = Vec::with_capacity(structs.len());
    let mut t = Vec::with_capacity(d + 1);
    for s in structs {
        let n = s.size();
        let tuples = n.pow(d as u32);
        let mut c = Vec::with_capacity(tuples);
        let mut ext = Vec::with_capacity(tuples * n);
        for idx in 0..tuples {
            decode(idx, n, &mut t);
            c.push(intern_type(atomic_type(s, &t)));
            for w in 0..n {
                t.push(w);
                ext.push(intern_type(atomic_type(s, &t)));
                t.pop();
            }
        }
        colors.push(c);
        extended.push(ext);
    }
    let count_colors = |colors: &[Vec<u32>]| {
        let mut all: Vec<u32> = colors.iter().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    };
    let mut classes = count_colors(&colors);
    if !visit(&colors) {
        return Ok(());
    }
    loop {
        let mut vocab: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut next = Vec::with_capacity(structs.len());
        for (si, s) in structs.iter().enumerate() {
            let n = s.size();
            let old = &colors[si];
            let mut pow = vec![1usize; d];
            for i in 1..d {
                pow[i] = pow[i - 1] * n;
            }
            let mut new = Vec::with_capacity(old.len());
            let mut entries: Vec<Vec<u32>> = Vec::with_capacity(n);
            for idx in 0..old.len() {
                decode(idx, n, &mut t);
                entries.clear();
                for w in 0..n {
                    let mut e = Vec::with_capacity(d + 1);
                    e.push(extended[si][idx * n + w]);
                    for i in 0..d {
                        let swapped = idx - t[i] * pow[i] + w * pow[i];
                        e.push(old[swapped]);
                    }
                    entries.push(e);
                }
                entries.sort_unstable();
                let mut key = vec![old[idx]];
                entries.iter().for_each(|e| key.extend_from_slice(e));
                let id = vocab.len() as u32;
                new.push(*vocab.entry(key).or_insert(id));
            }
            next.push(new);
        }
        colors = next;
        let now = count_colors(&colors);
        let stable = now == classes;
        classes = now;
        if !visit(&colors) || stable {
            return Ok(());
        }
    }
}

fn histogram(colors: &[u32]) -> Vec<u32> {
    let mut h = colors.to_vec();
    h.sort_unstable();
    h
}

/// Whether `(k−1)`-dimensional Weisfeiler–Leman refinement, run jointly on
/// `a` and `b`, ends with equal color multisets. By the Cai–Fürer–Immerman
/// correspondence this decides equivalence in counting logic with `k`
/// variables.
pub fn wl_equivalent(a: &Structure, b: &Structure, k: usize) -> Result<bool> {
    check_same_signature(a, b)?;
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    if a.size() != b.size() {
        return Ok(false);
    }
    let mut equal = true;
    refine(&[a, b], k - 1, |colors| {
        equal = histogram(&colors[0]) == histogram(&colors[1]);
        equal
    })?;
    Ok(equal)
}

/// How a [`CkVerdict`] was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CkMethod {
    WlOracle,
    HomProfile,
}

impl CkMethod {
    pub fn name(self) -> &'static str {
        match self {
            CkMethod::WlOracle => "wl-oracle",
            CkMethod::HomProfile => "hom-profile",
        }
    }
}

impl fmt::Display for CkMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CkVerdict {
    pub equivalent: bool,
    pub method: CkMethod,
    /// A test structure of tree-width below `k` with its counts into `a` and `b`.
    pub witness: Option<Witness<Structure>>,
    /// Test structures compared (0 for the oracle).
    pub tested: usize,
}

/// The verdict of [`wl_equivalent`].
pub fn ck_verdict_wl(a: &Structure, b: &Structure, k: usize) -> Result<CkVerdict> {
    Ok(CkVerdict {
        equivalent: wl_equivalent(a, b, k)?,
        method: CkMethod::WlOracle,
        witness: None,
        tested: 0,
    })
}

/// Test family used for two subjects: simple graphs when both are simple
/// graphs over a single binary symbol (a hom from a looped or oriented
/// structure into a simple graph is a hom from its symmetric closure), all
/// structures otherwise.
pub fn test_family_preset(a: &Structure, b: &Structure) -> StructureClass {
    let sig = a.signature();
    if sig.len() == 1 && sig.arity(0) == 2 && a.is_simple_graph() && b.is_simple_graph() {
        StructureClass::SimpleGraphs
    } else {
        StructureClass::All
    }
}

/// Compares hom counts into `a` and `b` from every connected structure of
/// tree-width below `k` with at most `budget` elements, in canonical order.
pub fn ck_profile_equal(
    a: &Structure,
    b: &Structure,
    k: usize,
    budget: usize,
) -> Result<CkVerdict> {
    ck_profile_equal_with(a, b, k, budget, &Limits::default())
}

pub fn ck_profile_equal_with(
    a: &Structure,
    b: &Structure,
    k: usize,
    budget: usize,
    limits: &Limits,
) -> Result<CkVerdict> {
    check_same_signature(a, b)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let class = test_family_preset(a, b);
    let mut tested = 0;
    let mut seen = 0;
    for n in 1..=budget {
        let reps = representatives_of_size(a.signature(), n, class, limits, seen)?;
        seen += reps.len();
        for (_, c) in reps {
            if !c.is_connected() || treewidth_with(&c, limits)? >= k {
                continue;
            }
            tested += 1;
            let search = HomSearch::new(&c, MorphismClass::Hom, FactorisationSystem::SeM);
            let (ca, cb): (Count, Count) = (search.count(a)?, search.count(b)?);
            if ca != cb {
                return Ok(CkVerdict {
                    equivalent: false,
                    method: CkMethod::HomProfile,
                    witness: Some(Witness {
                        test: c,
                        counts: (ca, cb),
                    }),
                    tested,
                });
            }
        }
    }
    Ok(CkVerdict {
        equivalent: true,
        method: CkMethod::HomProfile,
        witness: None,
        tested,
    })
}

/// `a` over the signature extended by `I`, interpreted as the identity.
pub fn add_identity_relation(a: &Structure) -> Result<Structure> {
    let sig = a.signature().extended(IDENTITY_SYMBOL, 2)?;
    let mut out = Structure::new(&sig, a.size())?;
    for rel in 0..a.signature().len() {
        for t in a.tuples(rel) {
            out.insert(rel, &t)?;
        }
    }
    let i = sig.len() - 1;
    for x in 0..a.size() {
        out.insert(i, &[x, x])?;
    }
    Ok(out)
}

/// Merges the classes of the equivalence relation generated by `I` and
/// drops `I`; the other relations become their images.
pub fn quotient_by_i(b: &Structure) -> Result<Structure> {
    let sig = b.signature();
    let i = sig
        .index_of(IDENTITY_SYMBOL)
        .filter(|&i| sig.arity(i) == 2)
        .ok_or_else(|| {
            Error::InvalidSignature(format!("no binary symbol `{IDENTITY_SYMBOL}` in {sig}"))
        })?;
    let n = b.size();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for t in b.tuples(i) {
        let (x, y) = (find(&mut parent, t[0]), find(&mut parent, t[1]));
        parent[x.max(y)] = x.min(y);
    }
    let mut block = vec![usize::MAX; n];
    let mut blocks = 0;
    let mut root_block = vec![usize::MAX; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        if root_block[r] == usize::MAX {
            root_block[r] = blocks;
            blocks += 1;
        }
        block[x] = root_block[r];
    }
    let reduct_sig = sig.without(IDENTITY_SYMBOL);
    let mut reduct = Structure::new(&reduct_sig, n)?;
    for rel in (0..sig.len()).filter(|&r| r != i) {
        let target = if rel < i { rel } else { rel - 1 };
        for t in b.tuples(rel) {
            reduct.insert(target, &t)?;
        }
    }
    induced_quotient(&reduct, &block, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigstruct::are_isomorphic;
    use crate::sigstruct::graphs::{
        all_simple_graphs, complete, cycle, digraph, discrete, path, undirected,
    };
    use crate::sigstruct::{canonical_representatives, disjoint_union};
    use proptest::prelude::*;

    fn two_triangles() -> Structure {
        disjoint_union(&cycle(3), &cycle(3)).unwrap()
    }

    /// Oracle: minimum over all elimination orders of the largest number of
    /// later neighbours in the fill-in graph.
    fn brute_treewidth(a: &Structure) -> usize {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![Vec::new()];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for i in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
        perms(a.size())
            .iter()
            .map(|order| decomposition_from_order(a, order).width())
            .min()
            .unwrap_or(0)
    }

    #[test]
    fn treewidth_examples() {
        assert_eq!(treewidth(&discrete(1)).unwrap(), 0);
        assert_eq!(treewidth(&discrete(0)).unwrap(), 0);
        assert_eq!(treewidth(&path(5)).unwrap(), 1);
        assert_eq!(
            treewidth(&undirected(4, &[(0, 1), (0, 2), (0, 3)])).unwrap(),
            1
        );
        assert_eq!(treewidth(&complete(3)).unwrap(), 2);
        assert_eq!(treewidth(&cycle(4)).unwrap(), 2);
        assert_eq!(treewidth(&complete(5)).unwrap(), 4);
        assert_eq!(treewidth(&digraph(2, &[(0, 1)])).unwrap(), 1);
        let grid = undirected(
            9,
            &[
                (0, 1),
                (1, 2),
                (3, 4),
                (4, 5),
                (6, 7),
                (7, 8),
                (0, 3),
                (3, 6),
                (1, 4),
                (4, 7),
                (2, 5),
                (5, 8),
            ],
        );
        assert_eq!(treewidth(&grid).unwrap(), 3);
        assert!(treewidth(&discrete(11)).unwrap_err().is_limit());
    }

    #[test]
    fn ternary_tuples_are_cliques() {
        let sig = Signature::new([("R", 3)]).unwrap();
        let a = Structure::from_tuples(&sig, 3, [("R", vec![vec![0, 1, 2]])]).unwrap();
        assert_eq!(treewidth(&a).unwrap(), 2);
        tree_decomposition(&a).unwrap().validate(&a).unwrap();
    }

    #[test]
    fn dp_matches_elimination_orders() {
        for n in 0..=5 {
            for g in all_simple_graphs(n) {
                let tw = treewidth(&g).unwrap();
                assert_eq!(tw, brute_treewidth(&g), "{g:?}");
                let dec = tree_decomposition(&g).unwrap();
                dec.validate(&g).unwrap();
                assert_eq!(dec.width(), tw);
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        let sig = Signature::binary();
        let limits = Limits::default();
        let graphs = enumerate_tw_lt_k(&sig, 1, 3, StructureClass::SimpleGraphs, &limits).unwrap();
        assert_eq!(graphs, vec![discrete(1)]);
        let all = enumerate_tw_lt_k(&sig, 1, 3, StructureClass::All, &limits).unwrap();
        assert_eq!(all.len(), 2);
        let trees = enumerate_tw_lt_k(&sig, 2, 3, StructureClass::SimpleGraphs, &limits).unwrap();
        assert_eq!(trees.len(), 3);
        assert!(are_isomorphic(&trees[1], &path(2)).unwrap());
        assert!(are_isomorphic(&trees[2], &path(3)).unwrap());
        let has_k3 = |v: &[Structure]| v.iter().any(|s| are_isomorphic(s, &complete(3)).unwrap());
        assert!(!has_k3(&trees));
        let three = enumerate_tw_lt_k(&sig, 3, 3, StructureClass::SimpleGraphs, &limits).unwrap();
        assert!(has_k3(&three));
        // Trees on up to 5 vertices: 1 + 1 + 1 + 2 + 3.
        let five = enumerate_tw_lt_k(&sig, 2, 5, StructureClass::SimpleGraphs, &limits).unwrap();
        assert_eq!(five.len(), 8);
        assert!(enumerate_tw_lt_k(&sig, 0, 3, StructureClass::All, &limits).is_err());
    }

    #[test]
    fn wl_examples() {
        let (c6, tt) = (cycle(6), two_triangles());
        assert!(wl_equivalent(&c6, &c6, 2).unwrap());
        assert!(wl_equivalent(&c6, &tt, 2).unwrap());
        assert!(!wl_equivalent(&c6, &tt, 3).unwrap());
        assert!(!wl_equivalent(&path(3), &discrete(3), 2).unwrap());
        assert!(!wl_equivalent(&discrete(2), &discrete(3), 2).unwrap());
        assert!(wl_equivalent(&c6, &tt, 1).is_err());
        let other = Structure::new(&Signature::new([("F", 2)]).unwrap(), 6).unwrap();
        assert!(wl_equivalent(&c6, &other, 2).is_err());
    }

    #[test]
    fn wl_distinguishes_orientation() {
        // Same underlying graph, different directions.
        let a = digraph(3, &[(0, 1), (1, 2)]);
        let b = digraph(3, &[(0, 1), (2, 1)]);
        assert!(!wl_equivalent(&a, &b, 2).unwrap());
        let cyc = digraph(3, &[(0, 1), (1, 2), (2, 0)]);
        let rev = digraph(3, &[(1, 0), (2, 1), (0, 2)]);
        assert!(wl_equivalent(&cyc, &rev, 3).unwrap());
    }

    #[test]
    fn refinement_is_monotone_and_stabilizes() {
        for g in [
            cycle(6),
            two_triangles(),
            path(4),
            digraph(4, &[(0, 1), (1, 2), (2, 3), (3, 3)]),
        ] {
            for d in 1..=2 {
                let mut rounds: Vec<Vec<u32>> = Vec::new();
                refine(&[&g], d, |c| {
                    rounds.push(c[0].clone());
                    true
                })
                .unwrap();
                assert!(rounds.len() <= g.size().pow(d as u32) + 1);
                for w in rounds.windows(2) {
                    let mut map = HashMap::new();
                    for (new, old) in w[1].iter().zip(&w[0]) {
                        assert_eq!(*map.entry(*new).or_insert(*old), *old);
                    }
                }
            }
        }
    }

    #[test]
    fn ck_examples() {
        let (c6, tt) = (cycle(6), two_triangles());
        let v = ck_profile_equal(&c6, &tt, 3, 3).unwrap();
        assert!(!v.equivalent);
        assert_eq!(v.method, CkMethod::HomProfile);
        let w = v.witness.unwrap();
        assert!(are_isomorphic(&w.test, &complete(3)).unwrap());
        assert_eq!(w.counts, (Count::from(0u32), Count::from(12u32)));
        assert!(treewidth(&w.test).unwrap() < 3);
        let v = ck_profile_equal(&c6, &tt, 2, 6).unwrap();
        assert!(v.equivalent);
        assert_eq!(v.tested, 1 + 1 + 1 + 2 + 3 + 6);
        assert!(
            ck_profile_equal(&path(4), &path(4), 3, 4)
                .unwrap()
                .equivalent
        );
        assert!(ck_verdict_wl(&c6, &tt, 2).unwrap().equivalent);
    }

    #[test]
    fn tree_profiles_match_color_refinement_up_to_five_vertices() {
        let sig = Signature::binary();
        let limits = Limits::default();
        let graphs: Vec<Structure> =
            canonical_representatives(&sig, 5, StructureClass::SimpleGraphs, &limits)
                .unwrap()
                .into_iter()
                .map(|(_, s)| s)
                .collect();
        assert_eq!(graphs.len(), 1 + 1 + 2 + 4 + 11 + 34);
        let trees = enumerate_tw_lt_k(&sig, 2, 5, StructureClass::SimpleGraphs, &limits).unwrap();
        let profiles: Vec<Vec<Count>> = graphs
            .iter()
            .map(|g| {
                trees
                    .iter()
                    .map(|t| {
                        HomSearch::new(t, MorphismClass::Hom, FactorisationSystem::SeM)
                            .count(g)
                            .unwrap()
                    })
                    .collect()
            })
            .collect();
        for (i, a) in graphs.iter().enumerate() {
            for (j, b) in graphs.iter().enumerate().skip(i + 1) {
                let wl = wl_equivalent(a, b, 2).unwrap();
                assert_eq!(wl, profiles[i] == profiles[j], "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn identity_relation_round_trip() {
        let a = add_identity_relation(&discrete(2)).unwrap();
        let i = a.signature().index_of("I").unwrap();
        assert_eq!(
            a.tuples(i).collect::<Vec<_>>(),
            vec![vec![0, 0], vec![1, 1]]
        );
        assert_eq!(
            add_identity_relation(&discrete(0)).unwrap().tuple_count(i),
            0
        );
        assert!(add_identity_relation(&a).is_err());
        let sig = Signature::binary();
        for (_, s) in
            canonical_representatives(&sig, 3, StructureClass::All, &Limits::default()).unwrap()
        {
            assert!(are_isomorphic(
                &quotient_by_i(&add_identity_relation(&s).unwrap()).unwrap(),
                &s
            )
            .unwrap());
        }
        assert!(quotient_by_i(&discrete(2)).is_err());
    }

    #[test]
    fn quotient_by_identity_examples() {
        let sig = Signature::new([("E", 2), ("I", 2)]).unwrap();
        let b = Structure::from_tuples(&sig, 2, [("E", vec![vec![0, 0]]), ("I", vec![vec![0, 1]])])
            .unwrap();
        let q = quotient_by_i(&b).unwrap();
        assert_eq!(q.size(), 1);
        assert!(q.holds(0, &[0, 0]));
        let empty_i = Structure::from_tuples(&sig, 3, [("E", vec![vec![0, 1]])]).unwrap();
        assert!(are_isomorphic(&quotient_by_i(&empty_i).unwrap(), &digraph(3, &[(0, 1)])).unwrap());
        let mut full = Structure::from_tuples(&sig, 3, [("E", vec![vec![0, 1]])]).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                full.insert(1, &[x, y]).unwrap();
            }
        }
        assert!(are_isomorphic(&quotient_by_i(&full).unwrap(), &digraph(1, &[(0, 0)])).unwrap());
    }

    proptest! {
        #[test]
        fn quotient_keeps_treewidth_bound(n in 1usize..=5, e in 0u32..1 << 25, i in 0u32..1 << 25) {
            let sig = Signature::new([("E", 2), ("I", 2)]).unwrap();
            let mut b = Structure::new(&sig, n).unwrap();
            for x in 0..n {
                for y in 0..n {
                    let bit = x * 5 + y;
                    if e >> bit & 1 == 1 { b.insert(0, &[x, y]).unwrap(); }
                    // Sparse I so that not everything collapses.
                    if i >> bit & 1 == 1 && (i >> ((bit + 7) % 25)) & 1 == 1 { b.insert(1, &[x, y]).unwrap(); }
                }
            }
            let q = quotient_by_i(&b).unwrap();
            prop_assert!(treewidth(&q).unwrap() <= treewidth(&b).unwrap());
        }

        #[test]
        fn dp_matches_brute_force_on_six(mask in 0u32..1 << 15) {
            let pairs: Vec<(usize, usize)> = (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).collect();
            let edges: Vec<_> = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p).collect();
            let g = undirected(6, &edges);
            prop_assert_eq!(treewidth(&g).unwrap(), brute_treewidth(&g));
            tree_decomposition(&g).unwrap().validate(&g).unwrap();
        }
    }
}
