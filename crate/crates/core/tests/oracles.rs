//! Independent recomputations checked against the library.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use wtcalc::exactalg::{cokernel_structure, GroupStructure};
use wtcalc::homs::{eta_tree, verify_levine};
use wtcalc::liealg::{bracket_kernel, lie_group, square_rank, witt_rank, Flavor};
use wtcalc::towergroups::{tower_group, TowerFlavor};
use wtcalc::trees::{parse_tree, ParsedTree, RootedTree};

fn ordered_trees(degree: usize, m: u32) -> Vec<RootedTree> {
    if degree == 1 {
        return (1..=m).map(RootedTree::Leaf).collect();
    }
    let mut out = Vec::new();
    for left in 1..degree {
        for a in ordered_trees(left, m) {
            for b in ordered_trees(degree - left, m) {
                out.push(RootedTree::node(a.clone(), b));
            }
        }
    }
    out
}

type Relator = Vec<(RootedTree, i64)>;

/// AS and Jacobi relators at every vertex of `t`, plus `[a,a]` for the Lie flavor.
fn local_relators(t: &RootedTree, flavor: Flavor, out: &mut Vec<Relator>) {
    let RootedTree::Node(a, b) = t else { return };
    let (a, b) = (a.as_ref(), b.as_ref());
    out.push(vec![(t.clone(), 1), (RootedTree::node(b.clone(), a.clone()), 1)]);
    if flavor == Flavor::Lie && a == b {
        out.push(vec![(t.clone(), 1)]);
    }
    if let RootedTree::Node(b1, b2) = b {
        let (b1, b2) = (b1.as_ref().clone(), b2.as_ref().clone());
        out.push(vec![
            (t.clone(), 1),
            (RootedTree::node(b1.clone(), RootedTree::node(b2.clone(), a.clone())), 1),
            (RootedTree::node(b2, RootedTree::node(a.clone(), b1)), 1),
        ]);
    }
    let mut inner = Vec::new();
    local_relators(a, flavor, &mut inner);
    out.extend(inner.into_iter().map(|r| r.into_iter().map(|(x, c)| (RootedTree::node(x, b.clone()), c)).collect()));
    let mut inner = Vec::new();
    local_relators(b, flavor, &mut inner);
    out.extend(inner.into_iter().map(|r| r.into_iter().map(|(x, c)| (RootedTree::node(a.clone(), x), c)).collect()));
}

fn bracket_module(m: u32, degree: usize, flavor: Flavor) -> GroupStructure {
    let trees = ordered_trees(degree, m);
    let index: BTreeMap<&RootedTree, usize> = trees.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut rels = Vec::new();
    for t in &trees {
        local_relators(t, flavor, &mut rels);
    }
    let rows = rels
        .into_iter()
        .map(|r| {
            let mut row = vec![BigInt::from(0); trees.len()];
            for (x, c) in r {
                row[index[&x]] += c;
            }
            row
        })
        .collect();
    cokernel_structure(trees.len(), rows)
}

#[test]
fn lie_and_quasi_lie_ranks_match_tree_presentations() {
    for (m, top) in [(1u32, 6usize), (2, 5), (3, 4)] {
        for d in 1..=top {
            for flavor in [Flavor::Lie, Flavor::Quasi] {
                let oracle = bracket_module(m, d, flavor);
                let lib = lie_group(m, d, flavor).unwrap().structure().clone();
                assert_eq!(oracle, lib, "m={} d={} {:?}", m, d, flavor);
                let mut expected = GroupStructure::free(witt_rank(m, d));
                expected = expected.direct_sum(&GroupStructure::elementary(2, square_rank(m, d, flavor)));
                assert_eq!(lib, expected, "m={} d={} {:?}", m, d, flavor);
            }
        }
    }
}

#[test]
fn witt_ranks_known_values() {
    let table: [(u32, &[usize]); 3] = [(1, &[1, 0, 0, 0]), (2, &[2, 1, 2, 3, 6, 9]), (3, &[3, 3, 8, 18, 48])];
    for (m, vals) in table {
        for (i, &v) in vals.iter().enumerate() {
            assert_eq!(witt_rank(m, i + 1), v, "m={} d={}", m, i + 1);
        }
    }
}

#[test]
fn bracket_kernel_ranks_match_surjectivity_count() {
    for m in 1..=3u32 {
        for n in 0..=3 {
            let d = bracket_kernel(n, m, Flavor::Lie).unwrap().structure;
            let rank = m as usize * witt_rank(m, n + 1) - witt_rank(m, n + 2);
            assert_eq!(d, GroupStructure::free(rank), "D_{}({})", n, m);
        }
    }
}

#[test]
fn small_tree_groups() {
    let cases: [(usize, u32, TowerFlavor, GroupStructure); 7] = [
        (0, 1, TowerFlavor::Plain, GroupStructure::free(1)),
        (0, 2, TowerFlavor::Plain, GroupStructure::free(3)),
        (1, 1, TowerFlavor::Plain, GroupStructure::elementary(2, 1)),
        (1, 1, TowerFlavor::Reduced, GroupStructure::elementary(2, 1)),
        (1, 1, TowerFlavor::Twisted, GroupStructure::trivial()),
        (0, 1, TowerFlavor::Twisted, GroupStructure::free(1)),
        (2, 1, TowerFlavor::Plain, GroupStructure::trivial()),
    ];
    for (n, m, flavor, expected) in cases {
        assert_eq!(tower_group(n, m, flavor).unwrap().structure(), &expected, "T_{}({}) {}", n, m, flavor);
    }
}

#[test]
fn tree_groups_match_bracket_kernels() {
    for (n, m) in [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3)] {
        let t = tower_group(n, m, TowerFlavor::Plain).unwrap();
        let d = bracket_kernel(n, m, Flavor::Quasi).unwrap().structure;
        assert_eq!(t.structure(), &d, "T_{}({})", n, m);
        assert!(verify_levine(n, m).unwrap().is_isomorphism);
    }
}

#[test]
fn eta_of_y_tree() {
    let ParsedTree::Unrooted(t) = parse_tree("<(1,2),3>").unwrap() else { panic!() };
    let e = eta_tree(&t, 3, Flavor::Lie).unwrap();
    assert_eq!(e.to_string(), "X1⊗[X2,X3] - X2⊗[X1,X3] + X3⊗[X1,X2]");
    assert!(e.bracket().is_zero());
}
