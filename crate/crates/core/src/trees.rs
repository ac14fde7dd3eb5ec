//! Finite rooted trees and tree morphisms.
//!
//! A tree morphism sends the root to the root and each covering pair
//! (parent, child) to a covering pair, so it preserves depth exactly.
//! Infinite finitely branching trees are handled through finite
//! presentations ([`RationalTreeSpec`]) and their truncations; results about
//! them are per truncation only.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::lovasz::{DistinguishResult, Witness};
use crate::{Count, Error, Limits, Result};

/// A finite rooted tree on nodes `0..size` (or the empty tree).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteTree {
    parent: Vec<Option<usize>>,
    root: Option<usize>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
}

impl FiniteTree {
    /// `parent[x]` is `None` exactly for the root.
    pub fn new(parent: Vec<Option<usize>>) -> Result<FiniteTree> {
        let n = parent.len();
        let roots: Vec<usize> = (0..n).filter(|&x| parent[x].is_none()).collect();
        let root = match roots.as_slice() {
            [] if n == 0 => None,
            [r] => Some(*r),
            [] => return Err(Error::InvalidTree("no root".into())),
            _ => return Err(Error::InvalidTree(format!("{} roots", roots.len()))),
        };
        let mut children = vec![Vec::new(); n];
        for (x, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(Error::InvalidTree(format!(
                        "node {x} has parent {p} out of range"
                    )));
                }
                children[p].push(x);
            }
        }
        // Breadth-first from the root; every node must be reached.
        let mut depth = vec![usize::MAX; n];
        if let Some(r) = root {
            depth[r] = 0;
            let mut queue = vec![r];
            let mut head = 0;
            while head < queue.len() {
                let x = queue[head];
                head += 1;
                for &c in &children[x] {
                    depth[c] = depth[x] + 1;
                    queue.push(c);
                }
            }
            if queue.len() != n {
                return Err(Error::InvalidTree("parent links contain a cycle".into()));
            }
        }
        Ok(FiniteTree {
            parent,
            root,
            children,
            depth,
        })
    }

    pub fn empty() -> FiniteTree {
        FiniteTree::new(Vec::new()).expect("valid")
    }

    /// The `n`-node chain `0 ⋖ 1 ⋖ … ⋖ n−1`.
    pub fn chain(n: usize) -> FiniteTree {
        FiniteTree::new((0..n).map(|x| x.checked_sub(1)).collect()).expect("valid")
    }

    /// Every internal node has `branching` children; leaves at `depth`.
    pub fn full(branching: usize, depth: usize) -> FiniteTree {
        let mut parent = vec![None];
        let mut level = vec![0];
        for _ in 0..depth {
            let mut next = Vec::new();
            for &x in &level {
                for _ in 0..branching {
                    next.push(parent.len());
                    parent.push(Some(x));
                }
            }
            level = next;
        }
        FiniteTree::new(parent).expect("valid")
    }

    pub fn size(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn parent(&self, x: usize) -> Option<usize> {
        self.parent[x]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn children(&self, x: usize) -> &[usize] {
        &self.children[x]
    }

    pub fn depth(&self, x: usize) -> usize {
        self.depth[x]
    }

    /// Depth of the deepest node; `None` for the empty tree.
    pub fn height(&self) -> Option<usize> {
        self.depth.iter().copied().max()
    }

    pub fn nodes_at_depth(&self, d: usize) -> usize {
        self.depth.iter().filter(|&&x| x == d).count()
    }

    /// Canonical encoding: a node is `(` followed by its children's
    /// encodings in sorted order and `)`. The empty tree encodes as `""`.
    pub fn encoding(&self) -> String {
        let Some(root) = self.root else {
            return String::new();
        };
        let mut codes: Vec<String> = vec![String::new(); self.size()];
        for x in self.bottom_up() {
            let mut kids: Vec<&str> = self.children[x]
                .iter()
                .map(|&c| codes[c].as_str())
                .collect();
            kids.sort_unstable();
            let mut s = String::with_capacity(2 + kids.iter().map(|k| k.len()).sum::<usize>());
            s.push('(');
            kids.iter().for_each(|k| s.push_str(k));
            s.push(')');
            codes[x] = s;
        }
        std::mem::take(&mut codes[root])
    }

    /// Rebuilds a tree from its encoding, numbering nodes in preorder.
    pub fn from_encoding(code: &str) -> Result<FiniteTree> {
        let mut parent = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut closed_root = false;
        for ch in code.chars() {
            if closed_root {
                return Err(Error::InvalidTree("text after the root".into()));
            }
            match ch {
                '(' => {
                    parent.push(stack.last().copied());
                    stack.push(parent.len() - 1);
                }
                ')' => {
                    stack
                        .pop()
                        .ok_or_else(|| Error::InvalidTree("unbalanced `)`".into()))?;
                    closed_root = stack.is_empty();
                }
                _ => return Err(Error::InvalidTree(format!("unexpected `{ch}` in encoding"))),
            }
        }
        if !stack.is_empty() {
            return Err(Error::InvalidTree("unbalanced `(`".into()));
        }
        FiniteTree::new(parent)
    }

    pub fn is_isomorphic(&self, other: &FiniteTree) -> bool {
        self.size() == other.size() && self.encoding() == other.encoding()
    }

    /// Nodes ordered so that children come before parents.
    fn bottom_up(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.size()).collect();
        order.sort_by_key(|&x| std::cmp::Reverse(self.depth[x]));
        order
    }
}

impl fmt::Display for FiniteTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

/// A root- and covering-preserving map between trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeMorphism {
    domain: FiniteTree,
    codomain: FiniteTree,
    map: Vec<usize>,
}

impl TreeMorphism {
    pub fn new(domain: FiniteTree, codomain: FiniteTree, map: Vec<usize>) -> Result<TreeMorphism> {
        if map.len() != domain.size() || map.iter().any(|&y| y >= codomain.size()) {
            return Err(Error::InvalidMap(
                "tree map has the wrong length or range".into(),
            ));
        }
        if let Some(r) = domain.root() {
            if Some(map[r]) != codomain.root() {
                return Err(Error::NotAHomomorphism);
            }
        }
        for x in 0..domain.size() {
            if let Some(p) = domain.parent(x) {
                if codomain.parent(map[x]) != Some(map[p]) {
                    return Err(Error::NotAHomomorphism);
                }
            }
        }
        Ok(TreeMorphism {
            domain,
            codomain,
            map,
        })
    }

    pub fn domain(&self) -> &FiniteTree {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteTree {
        &self.codomain
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }
}

/// Number of tree morphisms `r → p`.
///
/// The root goes to the root; a node sent to `x` sends each child, independently,
/// to some child of `x`. So `ways(u, x) = Π_{c child of u} Σ_{y child of x} ways(c, y)`.
pub fn count_tree_morphisms(r: &FiniteTree, p: &FiniteTree) -> Count {
    let (Some(rr), Some(pr)) = (r.root(), p.root()) else {
        return if r.is_empty() {
            Count::one()
        } else {
            Count::zero()
        };
    };
    // ways[u] holds values for the target nodes at depth(u), indexed by
    // position within that level.
    let mut level_pos = vec![0usize; p.size()];
    let mut levels: Vec<Vec<usize>> = Vec::new();
    for x in 0..p.size() {
        let d = p.depth(x);
        if levels.len() <= d {
            levels.resize(d + 1, Vec::new());
        }
        level_pos[x] = levels[d].len();
        levels[d].push(x);
    }
    let mut ways: Vec<Vec<Count>> = vec![Vec::new(); r.size()];
    for u in r.bottom_up() {
        let d = r.depth(u);
        let Some(targets) = levels.get(d) else {
            ways[u] = Vec::new();
            continue;
        };
        let row = targets
            .iter()
            .map(|&x| {
                let mut prod = Count::one();
                for &c in r.children(u) {
                    let sum: Count = p
                        .children(x)
                        .iter()
                        .filter_map(|&y| ways[c].get(level_pos[y]))
                        .sum();
                    prod *= sum;
                    if prod.is_zero() {
                        break;
                    }
                }
                prod
            })
            .collect();
        ways[u] = row;
    }
    ways[rr].get(level_pos[pr]).cloned().unwrap_or_default()
}

/// All tree morphisms `r → p`, up to `limit` of them.
pub fn enumerate_tree_morphisms(r: &FiniteTree, p: &FiniteTree, limit: usize) -> Vec<TreeMorphism> {
    let mut out = Vec::new();
    let (Some(rr), Some(pr)) = (r.root(), p.root()) else {
        if r.is_empty() {
            out.push(TreeMorphism {
                domain: r.clone(),
                codomain: p.clone(),
                map: Vec::new(),
            });
        }
        return out;
    };
    // Preorder: parents assigned before children.
    let mut order = vec![rr];
    let mut i = 0;
    while i < order.len() {
        order.extend_from_slice(r.children(order[i]));
        i += 1;
    }
    let mut map = vec![usize::MAX; r.size()];
    map[rr] = pr;
    fn rec(
        r: &FiniteTree,
        p: &FiniteTree,
        order: &[usize],
        k: usize,
        map: &mut Vec<usize>,
        out: &mut Vec<TreeMorphism>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if k == order.len() {
            out.push(TreeMorphism {
                domain: r.clone(),
                codomain: p.clone(),
                map: map.clone(),
            });
            return;
        }
        let u = order[k];
        let parent_image = map[r.parent(u).expect("non-root")];
        for &y in p.children(parent_image) {
            map[u] = y;
            rec(r, p, order, k + 1, map, out, limit);
        }
    }
    rec(r, p, &order, 1, &mut map, &mut out, limit);
    out
}

/// Largest `n` such that the `n`-node chain maps into `t`: height + 1, or 0
/// for the empty tree.
pub fn longest_root_chain(t: &FiniteTree) -> usize {
    t.height().map_or(0, |h| h + 1)
}

/// Non-isomorphic rooted trees with `1..=max_nodes` nodes, ordered by size
/// then encoding.
pub fn rooted_trees(max_nodes: usize, limits: &Limits) -> Result<Vec<FiniteTree>> {
    let mut out = Vec::new();
    let mut level: BTreeMap<String, FiniteTree> = BTreeMap::new();
    if max_nodes >= 1 {
        level.insert("()".into(), FiniteTree::chain(1));
    }
    for size in 1..=max_nodes {
        if out.len() + level.len() > limits.structure_count {
            return Err(Error::limit(
                "structure count",
                limits.structure_count,
                out.len() + level.len(),
            ));
        }
        let mut next: BTreeMap<String, FiniteTree> = BTreeMap::new();
        if size < max_nodes {
            for t in level.values() {
                for x in 0..t.size() {
                    let mut parent = t.parents().to_vec();
                    parent.push(Some(x));
                    let grown = FiniteTree::new(parent)?;
                    next.entry(grown.encoding()).or_insert(grown);
                }
                let seen = out.len() + level.len() + next.len();
                if seen > limits.structure_count {
                    return Err(Error::limit(
                        "structure count",
                        limits.structure_count,
                        seen,
                    ));
                }
            }
        }
        // Renumber in preorder so equal trees are equal values.
        out.extend(
            level
                .keys()
                .map(|code| FiniteTree::from_encoding(code).expect("valid")),
        );
        level = next;
    }
    Ok(out)
}

/// First tree (by size, then encoding) with different morphism counts into
/// `p` and `q`.
pub fn distinguish_trees(
    p: &FiniteTree,
    q: &FiniteTree,
    budget: usize,
) -> Result<DistinguishResult<FiniteTree>> {
    distinguish_trees_with(p, q, budget, &Limits::default())
}

pub fn distinguish_trees_with(
    p: &FiniteTree,
    q: &FiniteTree,
    budget: usize,
    limits: &Limits,
) -> Result<DistinguishResult<FiniteTree>> {
    if budget < 1 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    let family = rooted_trees(budget, limits)?;
    for (i, r) in family.iter().enumerate() {
        let (cp, cq) = (count_tree_morphisms(r, p), count_tree_morphisms(r, q));
        if cp != cq {
            return Ok(DistinguishResult {
                witness: Some(Witness {
                    test: r.clone(),
                    counts: (cp, cq),
                }),
                tested: i + 1,
            });
        }
    }
    Ok(DistinguishResult {
        witness: None,
        tested: family.len(),
    })
}

/// A finitely branching tree presented by states: the unfolding from
/// `start`, where a node in state `s` has one child per entry of
/// `children[s]`, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalTreeSpec {
    children: Vec<Vec<usize>>,
    start: usize,
}

impl RationalTreeSpec {
    pub fn new(children: Vec<Vec<usize>>, start: usize) -> Result<RationalTreeSpec> {
        let n = children.len();
        if start >= n {
            return Err(Error::InvalidTree(format!(
                "start state {start} out of range"
            )));
        }
        if let Some((s, _)) = children
            .iter()
            .enumerate()
            .find(|(_, c)| c.iter().any(|&t| t >= n))
        {
            return Err(Error::InvalidTree(format!(
                "state {s} has a child state out of range"
            )));
        }
        Ok(RationalTreeSpec { children, start })
    }

    pub fn states(&self) -> usize {
        self.children.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn children(&self, state: usize) -> &[usize] {
        &self.children[state]
    }
}

/// The unfolding of `spec` restricted to depth ≤ `depth`, nodes numbered
/// breadth-first.
pub fn truncate(spec: &RationalTreeSpec, depth: usize, limits: &Limits) -> Result<FiniteTree> {
    let mut parent = vec![None];
    let mut level: Vec<(usize, usize)> = vec![(0, spec.start)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &(node, state) in &level {
            for &child in spec.children(state) {
                if parent.len() >= limits.tree_nodes {
                    return Err(Error::limit(
                        "tree nodes",
                        limits.tree_nodes,
                        parent.len() + 1,
                    ));
                }
                next.push((parent.len(), child));
                parent.push(Some(node));
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    FiniteTree::new(parent)
}
