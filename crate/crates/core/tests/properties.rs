use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wtcalc::braids::{braid_longitudes, parse_braid, PureBraid};
use wtcalc::exactalg::{cyclic_sum_group, hom_analysis, invariant_factors, smith_normal_form, IntMatrix};
use wtcalc::homs::{eta_generator, eta_tree};
use wtcalc::liealg::{bracket, lie_reduce, sl_map, Flavor};
use wtcalc::milnor::{artin_rep, magnus, parse_word, total_milnor, FreeWord};
use wtcalc::towergroups::{delta, reduce_element, tower_group, FormalSum, Generator, TowerFlavor};
use wtcalc::trees::{canonical_form, enumerate_trees, RootedTree, UnrootedTree};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_rooted(r: &mut ChaCha8Rng, m: u32, degree: usize) -> RootedTree {
    if degree == 1 {
        return RootedTree::Leaf(r.gen_range(1..=m));
    }
    let left = r.gen_range(1..degree);
    RootedTree::node(random_rooted(r, m, left), random_rooted(r, m, degree - left))
}

fn random_unrooted(r: &mut ChaCha8Rng, m: u32, order: usize) -> UnrootedTree {
    let leaves = order + 2;
    let left = r.gen_range(1..leaves);
    UnrootedTree::new(random_rooted(r, m, left), random_rooted(r, m, leaves - left))
}

fn random_pure_braid(r: &mut ChaCha8Rng, m: u32, factors: usize) -> PureBraid {
    let mut b = PureBraid::identity(m);
    for _ in 0..factors {
        let j = r.gen_range(2..=m);
        let i = r.gen_range(1..j);
        let e = if r.gen_bool(0.5) { 1 } else { -1 };
        b = b.compose(&PureBraid::generator(m, i, j).unwrap().pow(e));
    }
    b
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-12i64..=12, c), r))
}

fn word(m: u32) -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((1..=m, any::<bool>()), 0..10)
        .prop_map(|v| FreeWord::from_letters(v.into_iter().map(|(g, s)| (g, if s { 1 } else { -1 }))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_identities(rows in matrix()) {
        let a = IntMatrix::from_i64_rows(rows[0].len(), &rows).unwrap();
        let f = smith_normal_form(&a);
        prop_assert_eq!(f.u.mul(&a).unwrap().mul(&f.v).unwrap(), f.s.clone());
        prop_assert!(f.u.determinant().unwrap().abs().is_one());
        prop_assert!(f.v.determinant().unwrap().abs().is_one());
        let d = f.invariant_factors();
        for w in d.windows(2) {
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
    }

    #[test]
    fn invariant_factors_ignore_row_permutation_and_sign(rows in matrix(), seed in any::<u64>()) {
        let cols = rows[0].len();
        let big = |rs: &[Vec<i64>]| rs.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<_>>();
        let mut r = rng(seed);
        let mut shuffled = rows.clone();
        for i in (1..shuffled.len()).rev() {
            let j = r.gen_range(0..=i);
            shuffled.swap(i, j);
        }
        for row in shuffled.iter_mut() {
            if r.gen_bool(0.5) {
                row.iter_mut().for_each(|x| *x = -*x);
            }
        }
        prop_assert_eq!(invariant_factors(cols, big(&rows)), invariant_factors(cols, big(&shuffled)));
    }

    #[test]
    fn kernel_generators_map_to_zero(rows in matrix(), moduli in prop::collection::vec(prop_oneof![Just(0i64), 2i64..7], 5)) {
        let (a, b) = (rows.len(), rows[0].len());
        let src = cyclic_sum_group((0..a).map(|i| format!("e{}", i)).collect(), &vec![BigInt::zero(); a]).unwrap();
        let dst_mod: Vec<BigInt> = moduli[..b].iter().map(|&x| BigInt::from(x)).collect();
        let dst = cyclic_sum_group((0..b).map(|i| format!("f{}", i)).collect(), &dst_mod).unwrap();
        let map = IntMatrix::from_i64_rows(b, &rows).unwrap();
        let rep = hom_analysis(&src, &dst, &map).unwrap();
        prop_assert!(rep.well_defined);
        for k in &rep.kernel_generators {
            prop_assert!(dst.is_zero(&map.left_apply(k)));
        }
    }

    #[test]
    fn canonical_form_under_vertex_swaps(seed in any::<u64>(), order in 0usize..5, m in 1u32..4) {
        let mut r = rng(seed);
        let t = random_unrooted(&mut r, m, order);
        let c = canonical_form(&t);
        let mut s = t.clone();
        let k = r.gen_range(0..t.order().max(1));
        if s.swap_vertex(k) {
            let d = canonical_form(&s);
            prop_assert_eq!(&d.tree, &c.tree);
            if !c.self_negative {
                prop_assert_eq!(d.sign, -c.sign);
            }
        }
    }

    #[test]
    fn tree_and_word_formats_round_trip(seed in any::<u64>(), order in 0usize..5, w in word(3)) {
        let mut r = rng(seed);
        let t = random_unrooted(&mut r, 4, order);
        prop_assert_eq!(t.to_string().parse::<UnrootedTree>().unwrap(), t.clone());
        let mut s = FormalSum::from_tree(&t);
        s.add_twist(&random_rooted(&mut r, 3, 2), -2);
        prop_assert_eq!(s.to_string().parse::<FormalSum>().unwrap(), s);
        prop_assert_eq!(parse_word(&w.to_string()).unwrap(), w);
        let b = random_pure_braid(&mut r, 4, 3);
        prop_assert_eq!(parse_braid(&b.to_string(), 4).unwrap(), b);
    }

    #[test]
    fn brackets_satisfy_as_and_jacobi(seed in any::<u64>(), m in 1u32..4, quasi in any::<bool>()) {
        let mut r = rng(seed);
        let flavor = if quasi { Flavor::Quasi } else { Flavor::Lie };
        let x: Vec<_> = (0..3).map(|_| { let d = r.gen_range(1..=2); lie_reduce(&random_rooted(&mut r, m, d), m, flavor).unwrap() }).collect();
        let b = |p: &_, q: &_| bracket(p, q).unwrap();
        prop_assert!(b(&x[0], &x[1]).add(&b(&x[1], &x[0])).unwrap().is_zero());
        let j = b(&x[0], &b(&x[1], &x[2])).add(&b(&x[1], &b(&x[2], &x[0]))).unwrap().add(&b(&x[2], &b(&x[0], &x[1]))).unwrap();
        prop_assert!(j.is_zero());
    }

    #[test]
    fn magnus_is_multiplicative(u in word(3), v in word(3), q in 1usize..6) {
        prop_assert_eq!(magnus(&u.mul(&v), q), magnus(&u, q).mul(&magnus(&v, q)));
        prop_assert!(magnus(&u.mul(&u.inverse()), q).is_one());
    }

    #[test]
    fn artin_is_a_homomorphism(seed in any::<u64>(), m in 2u32..5, n in 0usize..4) {
        let mut r = rng(seed);
        let (s, t) = (random_pure_braid(&mut r, m, 3), random_pure_braid(&mut r, m, 3));
        let a = |b: &PureBraid| artin_rep(&braid_longitudes(b), n).unwrap();
        prop_assert!(a(&s.compose(&t)).equivalent(&a(&s).compose(&a(&t))));
        prop_assert!(a(&s.compose(&s.inverse())).is_identity());
    }

    #[test]
    fn milnor_invariants_add_under_stacking(seed in any::<u64>(), m in 2u32..4) {
        let mut r = rng(seed);
        let (s, t) = (random_pure_braid(&mut r, m, 3), random_pure_braid(&mut r, m, 3));
        let mu = |b: &PureBraid| total_milnor(&braid_longitudes(b), 0).unwrap().invariant;
        prop_assert_eq!(mu(&s.compose(&t)), mu(&s).add(&mu(&t)).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn relabeling_preserves_vanishing(seed in any::<u64>(), order in 1usize..4) {
        let mut r = rng(seed);
        let t = random_unrooted(&mut r, 3, order);
        let perm = [[1, 2, 3], [2, 3, 1], [3, 1, 2], [2, 1, 3]][r.gen_range(0..4)];
        let u = t.relabel(&|l| perm[l as usize - 1]);
        let g = tower_group(order, 3, TowerFlavor::Plain).unwrap();
        for c in [1, 2] {
            let a = reduce_element(&FormalSum::from_tree(&t).scaled(c), &g).unwrap().is_zero();
            let b = reduce_element(&FormalSum::from_tree(&u).scaled(c), &g).unwrap().is_zero();
            prop_assert_eq!(a, b);
        }
    }
}

#[test]
fn delta_is_two_torsion_and_dies_in_reduced_and_twisted() {
    for k in 1..=2 {
        for m in 1..=2 {
            let plain = tower_group(2 * k - 1, m, TowerFlavor::Plain).unwrap();
            let reduced = tower_group(2 * k - 1, m, TowerFlavor::Reduced).unwrap();
            let twisted = tower_group(2 * k - 1, m, TowerFlavor::Twisted).unwrap();
            for t in enumerate_trees(k - 1, m) {
                let d = delta(&t);
                assert!(reduce_element(&d.scaled(2), &plain).unwrap().is_zero(), "2Δ({})", t);
                assert!(reduce_element(&d, &reduced).unwrap().is_zero(), "Δ({}) in reduced", t);
                assert!(reduce_element(&d, &twisted).unwrap().is_zero(), "Δ({}) in twisted", t);
            }
        }
    }
}

#[test]
fn plain_and_reduced_agree_in_even_order() {
    for n in [0, 2, 4] {
        for m in 1..=2 {
            let p = tower_group(n, m, TowerFlavor::Plain).unwrap();
            let r = tower_group(n, m, TowerFlavor::Reduced).unwrap();
            assert_eq!(p.structure(), r.structure());
            assert_eq!(p.num_generators(), r.num_generators());
        }
    }
}

#[test]
fn sato_levine_of_twisted_eta_recovers_root_tree() {
    for k in 1..=2 {
        for m in 1..=3u32 {
            let mut r = rng(k as u64 * 10 + m as u64);
            for _ in 0..8 {
                let j = random_rooted(&mut r, m, k + 1);
                let e = eta_generator(&Generator::twist(&j), m, Flavor::Lie).unwrap();
                let expected = lie_reduce(&j, m, Flavor::Lie).unwrap().mod2();
                assert_eq!(sl_map(&e).unwrap(), expected, "J = {}", j);
            }
        }
    }
}

#[test]
fn sato_levine_map_is_linear_mod_two() {
    for m in 1..=3u32 {
        let trees = enumerate_trees(2, m);
        let etas: Vec<_> = trees.iter().map(|t| eta_tree(t, m, Flavor::Lie).unwrap()).collect();
        for a in &etas {
            for b in &etas {
                let lhs = sl_map(&a.add(b).unwrap()).unwrap();
                let rhs = sl_map(a).unwrap().add(&sl_map(b).unwrap()).unwrap().mod2();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn lower_central_depth_of_known_commutators() {
    let cases = [
        ("x1", 1),
        ("[x1,x2]", 2),
        ("[x1,[x1,x2]]", 3),
        ("[[x1,x2],[x2,x3]]", 4),
        ("[x1,[x2,[x1,[x2,x3]]]]", 5),
        ("[[x1,x2],[x1,[x1,x2]]]", 5),
    ];
    for (w, d) in cases {
        let w = parse_word(w).unwrap();
        assert_eq!(wtcalc::milnor::lower_central_depth(&w, 6), d, "{}", w);
    }
}
