use super::{bit_set, check_same_signature, tuple_index, Morphism, Structure};
use crate::{Error, Result};

/// `a ⊔ b`: the elements of `b` are shifted by `|a|`; no tuples cross.
pub fn disjoint_union(a: &Structure, b: &Structure) -> Result<Structure> {
    check_same_signature(a, b)?;
    let n = a.size();
    let mut out = Structure::new(a.signature(), n + b.size())?;
    for rel in 0..a.signature().len() {
        for t in a.tuples(rel) {
            out.insert(rel, &t)?;
        }
        for t in b.tuples(rel) {
            let shifted: Vec<usize> = t.iter().map(|&x| x + n).collect();
            out.insert(rel, &shifted)?;
        }
    }
    Ok(out)
}

/// Renames element `x` of `a` to `perm[x]`. `perm` must be a permutation.
pub fn relabel(a: &Structure, perm: &[usize]) -> Result<Structure> {
    let n = a.size();
    if perm.len() != n
        || !super::morphism::is_injective(perm, n.max(1))
        || perm.iter().any(|&p| p >= n)
    {
        return Err(Error::InvalidMap("relabeling is not a permutation".into()));
    }
    let mut out = Structure::new(a.signature(), n)?;
    let mut buf = Vec::new();
    for rel in 0..a.signature().len() {
        for t in a.tuples(rel) {
            buf.clear();
            buf.extend(t.iter().map(|&x| perm[x]));
            out.insert(rel, &buf)?;
        }
    }
    Ok(out)
}

/// The image structure of `c` under the surjection `x ↦ block[x]` onto
/// `0..blocks`: each relation is the set of images of `c`'s tuples.
pub fn induced_quotient(c: &Structure, block: &[usize], blocks: usize) -> Result<Structure> {
    if block.len() != c.size() || block.iter().any(|&b| b >= blocks) {
        return Err(Error::InvalidMap("block assignment out of range".into()));
    }
    let mut rels = Vec::with_capacity(c.signature().len());
    let mut buf = Vec::new();
    for rel in 0..c.signature().len() {
        let arity = c.signature().arity(rel);
        let slots = super::slot_count(blocks, arity)?;
        let mut bits = vec![0u64; slots.div_ceil(64)];
        for t in c.tuples(rel) {
            buf.clear();
            buf.extend(t.iter().map(|&x| block[x]));
            bit_set(&mut bits, tuple_index(&buf, blocks));
        }
        rels.push(bits);
    }
    Ok(Structure::from_bits(c.signature(), blocks, rels))
}

/// A pushout square `a → p ← b` over a span `a ← c → b`.
#[derive(Debug, Clone)]
pub struct Pushout {
    pub object: Structure,
    pub left: Morphism,
    pub right: Morphism,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Pushout of `f: c → a` and `g: c → b`.
///
/// The object is `(a ⊔ b)/~` where `~` is generated by `f(x) ~ g(x)`; its
/// relations are the images of the relations of `a` and `b`. Classes are
/// numbered in order of their first element in `a ⊔ b`.
pub fn pushout(f: &Morphism, g: &Morphism) -> Result<Pushout> {
    check_same_signature(f.codomain(), g.codomain())?;
    if f.domain() != g.domain() {
        return Err(Error::InvalidMap(
            "pushout legs have different domains".into(),
        ));
    }
    let a = f.codomain();
    let b = g.codomain();
    let na = a.size();
    let total = na + b.size();
    let mut parent: Vec<usize> = (0..total).collect();
    for x in 0..f.domain().size() {
        let (u, v) = (
            find(&mut parent, f.apply(x)),
            find(&mut parent, na + g.apply(x)),
        );
        if u != v {
            parent[u.max(v)] = u.min(v);
        }
    }
    let mut label = vec![usize::MAX; total];
    let mut class_of = vec![0; total];
    let mut next = 0;
    for x in 0..total {
        let r = find(&mut parent, x);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        class_of[x] = label[r];
    }
    let union = disjoint_union(a, b)?;
    let object = induced_quotient(&union, &class_of, next)?;
    let left = Morphism::new(a.clone(), object.clone(), class_of[..na].to_vec())?;
    let right = Morphism::new(b.clone(), object.clone(), class_of[na..].to_vec())?;
    Ok(Pushout {
        object,
        left,
        right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigstruct::graphs::{cycle, digraph, discrete, undirected};
    use crate::sigstruct::{are_isomorphic, Signature};

    #[test]
    fn union_with_empty_is_unit() {
        let a = cycle(3);
        let u = disjoint_union(&a, &discrete(0)).unwrap();
        assert_eq!(u, a);
    }

    #[test]
    fn union_of_triangles() {
        let u = disjoint_union(&cycle(3), &cycle(3)).unwrap();
        let expected = undirected(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_eq!(u, expected);
    }

    #[test]
    fn pushout_along_identities() {
        let a = cycle(4);
        let id = Morphism::identity(&a);
        let p = pushout(&id, &id).unwrap();
        assert_eq!(p.object, a);
        assert_eq!(p.left.map(), &[0, 1, 2, 3]);
    }

    #[test]
    fn gluing_two_arcs_at_a_vertex() {
        // c = point, a = arc 0→1 glued at its head, b = arc 0→1 glued at its tail.
        let point = discrete(1);
        let arc = digraph(2, &[(0, 1)]);
        let f = Morphism::new(point.clone(), arc.clone(), vec![1]).unwrap();
        let g = Morphism::new(point, arc, vec![0]).unwrap();
        let p = pushout(&f, &g).unwrap();
        assert_eq!(p.object, digraph(3, &[(0, 1), (1, 2)]));
        assert_eq!(p.object.tuple_count(0), 2);
    }

    #[test]
    fn finite_set_pushout() {
        let sig = Signature::empty();
        let one = Structure::new(&sig, 1).unwrap();
        let two = Structure::new(&sig, 2).unwrap();
        let f = Morphism::new(one.clone(), two.clone(), vec![0]).unwrap();
        let g = Morphism::new(one, two, vec![1]).unwrap();
        let p = pushout(&f, &g).unwrap();
        assert_eq!(p.object.size(), 3);
        // Square commutes.
        assert_eq!(p.left.apply(0), p.right.apply(1));
    }

    #[test]
    fn relabel_preserves_isomorphism_type() {
        let a = digraph(3, &[(0, 1), (1, 2)]);
        let b = relabel(&a, &[2, 0, 1]).unwrap();
        assert_eq!(b, digraph(3, &[(2, 0), (0, 1)]));
        assert!(are_isomorphic(&a, &b).unwrap());
        assert!(relabel(&a, &[0, 0, 1]).is_err());
    }
}
