//! Property tests for the algebraic laws the engine relies on.

use num_bigint::BigInt;
use proptest::prelude::*;

use schcat::exactlin::{cokernel_invariants, smith_normal_form, IntMatrix};
use schcat::multijection::Multijection;
use schcat::multiset::{Label, Multiset, PartitionShape};
use schcat::ring::Ring;
use schcat::schurcat::{hom_basis, SchMorphism};

fn multiset_strategy() -> impl Strategy<Value = Multiset> {
    proptest::collection::vec((0u32..8, 1u64..4), 0..5)
        .prop_map(|entries| Multiset::from_entries(entries.into_iter().map(|(l, m)| (Label(l), m))))
}

fn matrix_strategy(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-9i64..=9, r * c)
            .prop_map(move |data| IntMatrix::from_i64(r, c, &data))
    })
}

proptest! {
    #[test]
    fn sum_is_commutative_and_associative(a in multiset_strategy(), b in multiset_strategy(), c in multiset_strategy()) {
        prop_assert_eq!(a.sum(&b), b.sum(&a));
        prop_assert_eq!(a.sum(&b).sum(&c), a.sum(&b.sum(&c)));
        prop_assert_eq!(a.sum(&Multiset::empty()), a.clone());
    }

    #[test]
    fn cardinality_is_a_homomorphism(a in multiset_strategy(), b in multiset_strategy()) {
        prop_assert_eq!(a.sum(&b).cardinality(), a.cardinality() + b.cardinality());
        let (prod, _) = a.product(&b);
        prop_assert_eq!(prod.cardinality(), a.cardinality() * b.cardinality());
        let du = a.disjoint_union(&b);
        prop_assert_eq!(du.result.cardinality(), a.cardinality() + b.cardinality());
    }

    #[test]
    fn splitting_count_formula(a in multiset_strategy()) {
        let expected: u64 = a.entries().iter().map(|&(_, m)| m + 1).product();
        prop_assert_eq!(a.splittings().len() as u64, expected);
    }

    #[test]
    fn text_round_trip(a in multiset_strategy()) {
        let printed = a.to_string();
        prop_assert_eq!(printed.parse::<Multiset>().unwrap(), a);
    }

    #[test]
    fn snf_properties(m in matrix_strategy(4)) {
        use num_traits::Signed;
        let snf = smith_normal_form(&m);
        prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d.clone());
        prop_assert_eq!(snf.u.determinant().abs(), BigInt::from(1));
        prop_assert_eq!(snf.v.determinant().abs(), BigInt::from(1));
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            prop_assert_eq!(&w[1] % &w[0], BigInt::ZERO);
        }
    }

    #[test]
    fn cokernel_is_unimodular_invariant(m in matrix_strategy(3), row_op in (0usize..3, 0usize..3, -3i64..=3)) {
        let base = cokernel_invariants(&m);
        let (a, b, k) = row_op;
        let (a, b) = (a % m.rows(), b % m.rows());
        if a != b {
            // add k × row b to row a
            let mut t = IntMatrix::identity(m.rows());
            t[(a, b)] = BigInt::from(k);
            prop_assert_eq!(cokernel_invariants(&t.mul(&m)), base);
        }
    }
}

#[test]
fn shape_equality_is_isomorphism() {
    // shapes agree exactly when a multiplicity-preserving support bijection
    // exists, by explicit search over small multisets
    let mut pool = Vec::new();
    for n in 0..=6u64 {
        for shape in PartitionShape::all_of_cardinality(n) {
            pool.push(shape.representative());
            // a relabeled copy with gaps
            let shifted = Multiset::from_entries(
                shape
                    .representative()
                    .entries()
                    .iter()
                    .map(|&(Label(l), m)| (Label(2 * l + 5), m)),
            );
            pool.push(shifted);
        }
    }
    for a in &pool {
        for b in &pool {
            let iso_exists = Multijection::all_between(a, b)
                .into_iter()
                .any(|f| f.is_isomorphism());
            assert_eq!(
                iso_exists,
                a.canonical_shape() == b.canonical_shape(),
                "{a} vs {b}"
            );
        }
    }
}

#[test]
fn degree_multiplicative_on_random_composable_pairs() {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let reps: Vec<Multiset> = (0..=5u64)
        .flat_map(PartitionShape::all_of_cardinality)
        .map(|s| s.representative())
        .collect();
    let mut done = 0;
    while done < 200 {
        let a = &reps[rng.random_range(0..reps.len())];
        let b = &reps[rng.random_range(0..reps.len())];
        let c = &reps[rng.random_range(0..reps.len())];
        if a.cardinality() != b.cardinality() || b.cardinality() != c.cardinality() {
            continue;
        }
        let fs = Multijection::all_between(a, b);
        let gs = Multijection::all_between(b, c);
        if fs.is_empty() || gs.is_empty() {
            continue;
        }
        let f = &fs[rng.random_range(0..fs.len())];
        let g = &gs[rng.random_range(0..gs.len())];
        let comp = Multijection::compose(g, f).unwrap();
        assert_eq!(comp.degree(), f.degree() * g.degree());
        done += 1;
    }
}

#[test]
fn transpose_antihomomorphism_on_random_pairs() {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let reps: Vec<Multiset> = (1..=3u64)
        .flat_map(PartitionShape::all_of_cardinality)
        .map(|s| s.representative())
        .collect();
    let mut done = 0;
    while done < 100 {
        let b = &reps[rng.random_range(0..reps.len())];
        let a = &reps[rng.random_range(0..reps.len())];
        let e = &reps[rng.random_range(0..reps.len())];
        if a.cardinality() != b.cardinality() || a.cardinality() != e.cardinality() {
            continue;
        }
        let gs = hom_basis(b, a);
        let hs = hom_basis(a, e);
        if gs.is_empty() || hs.is_empty() {
            continue;
        }
        let g = SchMorphism::from_graph(Ring::Int, gs[rng.random_range(0..gs.len())].clone());
        let h = SchMorphism::from_graph(Ring::Int, hs[rng.random_range(0..hs.len())].clone());
        let hg = SchMorphism::compose(&h, &g).unwrap();
        let tt = SchMorphism::compose(&g.transpose(), &h.transpose()).unwrap();
        assert_eq!(hg.transpose(), tt);
        done += 1;
    }
}
