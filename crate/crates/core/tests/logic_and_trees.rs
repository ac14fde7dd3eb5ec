use homcount::cklogic::{
    add_identity_relation, ck_profile_equal, quotient_by_i, treewidth, wl_equivalent,
};
use homcount::sigstruct::graphs::{cycle, path};
use homcount::sigstruct::{
    are_isomorphic, canonical_representatives, disjoint_union, StructureClass,
};
use homcount::trees::{
    count_tree_morphisms, distinguish_trees, longest_root_chain, rooted_trees, truncate,
    FiniteTree, RationalTreeSpec,
};
use homcount::{Count, Limits, Signature, Structure};

#[test]
fn identity_adjunction_unit_up_to_four() {
    let reps = canonical_representatives(
        &Signature::binary(),
        4,
        StructureClass::All,
        &Limits::default(),
    )
    .unwrap();
    for (_, a) in reps {
        let back = quotient_by_i(&add_identity_relation(&a).unwrap()).unwrap();
        assert!(are_isomorphic(&back, &a).unwrap());
    }
}

#[test]
fn collapsing_identity_pairs_keeps_treewidth_bound() {
    let sig = Signature::new([("E", 2), ("I", 2)]).unwrap();
    // Deterministic sample of five-element structures from a linear congruential walk.
    let mut state: u64 = 0x2545_f491_4f6c_dd1d;
    for _ in 0..400 {
        let mut b = Structure::new(&sig, 5).unwrap();
        for x in 0..5 {
            for y in 0..5 {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let r = state >> 58;
                if r < 14 {
                    b.insert(0, &[x, y]).unwrap();
                }
                if r >= 61 {
                    b.insert(1, &[x, y]).unwrap();
                }
            }
        }
        let q = quotient_by_i(&b).unwrap();
        assert!(treewidth(&q).unwrap() <= treewidth(&b).unwrap(), "{b:?}");
    }
}

#[test]
fn hexagon_against_two_triangles_in_counting_logic() {
    let (c6, tt) = (cycle(6), disjoint_union(&cycle(3), &cycle(3)).unwrap());
    assert!(wl_equivalent(&c6, &tt, 2).unwrap());
    assert!(!wl_equivalent(&c6, &tt, 3).unwrap());
    let v = ck_profile_equal(&c6, &tt, 3, 4).unwrap();
    let w = v.witness.unwrap();
    assert!(treewidth(&w.test).unwrap() < 3);
    assert_eq!(w.counts, (Count::from(0u32), Count::from(12u32)));
    assert!(
        ck_profile_equal(&path(4), &path(4), 2, 4)
            .unwrap()
            .equivalent
    );
}

#[test]
fn truncations_and_distinctions() {
    let limits = Limits::default();
    let binary = RationalTreeSpec::new(vec![vec![0, 0]], 0).unwrap();
    let fib = RationalTreeSpec::new(vec![vec![0, 1], vec![0]], 0).unwrap();
    for d in 0..5 {
        let (b, f) = (
            truncate(&binary, d, &limits).unwrap(),
            truncate(&fib, d, &limits).unwrap(),
        );
        assert_eq!(longest_root_chain(&b), d + 1);
        assert_eq!(b.size(), (1 << (d + 1)) - 1);
        // Every chain in the truncation has one morphism per node at its last depth.
        assert_eq!(
            count_tree_morphisms(&FiniteTree::chain(d + 1), &b),
            Count::from(1u64 << d)
        );
        if d >= 2 {
            let r = distinguish_trees(&b, &f, 3).unwrap();
            assert!(r.witness.is_some());
        }
    }
    let trees = rooted_trees(5, &limits).unwrap();
    for (i, p) in trees.iter().enumerate() {
        for q in &trees[i + 1..] {
            assert!(distinguish_trees(p, q, 5).unwrap().witness.is_some());
        }
    }
}
