//! Oracle validations: the combinatorial descriptions used by the engine are
//! checked against independent constructions before anything downstream
//! relies on them.
//!
//! * weak fibre products vs. orbits of the diagonal symmetric-group action
//!   on pairs of fibre-respecting functions;
//! * the transport-tensor composition rule vs. multiplication of realized
//!   matrices;
//! * weight-basis pushforward/pullback vs. honest invariant tensors.

use std::collections::HashMap;

use schcat::gamma;
use schcat::multijection::{pullback_components, Multijection};
use schcat::multiset::{Label, Multiset, PartitionShape};
use schcat::ring::Ring;
use schcat::schurcat::{hom_basis, SchMorphism};

fn representatives(max_card: u64) -> Vec<Multiset> {
    (0..=max_card)
        .flat_map(PartitionShape::all_of_cardinality)
        .map(|s| s.representative())
        .collect()
}

/// Enumerate fibre-respecting functions [n] → support(α) independently of
/// the library's own enumerations.
fn functions_onto(alpha: &Multiset) -> Vec<Vec<Label>> {
    let n = alpha.cardinality() as usize;
    let labels: Vec<Label> = alpha.support().collect();
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    'outer: loop {
        let candidate: Vec<Label> = cur.iter().map(|&i| labels[i]).collect();
        let ok = alpha.entries().iter().all(|&(l, m)| {
            candidate.iter().filter(|&&x| x == l).count() as u64 == m
        });
        if ok {
            out.push(candidate);
        }
        let mut i = n;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            if cur[i] + 1 < labels.len() {
                cur[i] += 1;
                for c in cur[i + 1..].iter_mut() {
                    *c = 0;
                }
                continue 'outer;
            }
        }
    }
    out
}

/// The orbit oracle for a cospan f: A → C ← B : g — pairs (φ, ψ) of
/// functions with matching composites, up to the simultaneous action of
/// adjacent transpositions — must biject with the pullback components, the
/// orbit multiset matching the component apex.
#[test]
fn pullback_components_match_orbit_oracle() {
    let reps = representatives(4);
    let mut checked = 0usize;
    for gamma_ms in &reps {
        let n = gamma_ms.cardinality() as usize;
        for a in &reps {
            if a.cardinality() != gamma_ms.cardinality() {
                continue;
            }
            for b in &reps {
                if b.cardinality() != gamma_ms.cardinality() {
                    continue;
                }
                for f in Multijection::all_between(a, gamma_ms) {
                    for g in Multijection::all_between(b, gamma_ms) {
                        // all matching pairs (φ, ψ)
                        let phis = functions_onto(a);
                        let psis = functions_onto(b);
                        let mut states: Vec<(usize, usize)> = Vec::new();
                        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
                        for (i, phi) in phis.iter().enumerate() {
                            for (j, psi) in psis.iter().enumerate() {
                                let matches = (0..n)
                                    .all(|k| f.apply(phi[k]) == g.apply(psi[k]));
                                if matches {
                                    index.insert((i, j), states.len());
                                    states.push((i, j));
                                }
                            }
                        }
                        // orbits under the simultaneous transposition action
                        let mut parent: Vec<usize> = (0..states.len()).collect();
                        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
                            while parent[x] != x {
                                parent[x] = parent[parent[x]];
                                x = parent[x];
                            }
                            x
                        }
                        for (s, &(i, j)) in states.iter().enumerate() {
                            for k in 0..n.saturating_sub(1) {
                                let mut phi = phis[i].clone();
                                phi.swap(k, k + 1);
                                let mut psi = psis[j].clone();
                                psi.swap(k, k + 1);
                                let i2 = phis.iter().position(|p| p == &phi).unwrap();
                                let j2 = psis.iter().position(|p| p == &psi).unwrap();
                                let t = index[&(i2, j2)];
                                let (ra, rb) = (find(&mut parent, s), find(&mut parent, t));
                                if ra != rb {
                                    parent[ra] = rb;
                                }
                            }
                        }
                        let mut orbit_weights: Vec<HashMap<(Label, Label), u64>> = Vec::new();
                        let mut seen_roots: HashMap<usize, usize> = HashMap::new();
                        for (s, &(i, j)) in states.iter().enumerate() {
                            let root = find(&mut parent, s);
                            if seen_roots.contains_key(&root) {
                                continue;
                            }
                            let mut weight: HashMap<(Label, Label), u64> = HashMap::new();
                            for k in 0..n {
                                *weight.entry((phis[i][k], psis[j][k])).or_default() += 1;
                            }
                            seen_roots.insert(root, orbit_weights.len());
                            orbit_weights.push(weight);
                        }
                        // compare against the computed components
                        let comps = pullback_components(&f, &g).unwrap();
                        assert_eq!(
                            comps.len(),
                            orbit_weights.len(),
                            "component count vs orbit count for {f:?} / {g:?}"
                        );
                        let mut matched = vec![false; orbit_weights.len()];
                        for span in &comps {
                            let mut weight: HashMap<(Label, Label), u64> = HashMap::new();
                            for (x, m) in span.apex.entries() {
                                *weight
                                    .entry((span.left.apply(*x), span.right.apply(*x)))
                                    .or_default() += m;
                            }
                            let pos = orbit_weights
                                .iter()
                                .enumerate()
                                .position(|(k, w)| !matched[k] && w == &weight)
                                .expect("component without matching orbit");
                            matched[pos] = true;
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 200, "only {checked} cospans checked");
}

/// The transport-tensor structure constants agree with matrix composition
/// of the realizations, exhaustively through cardinality 3.
#[test]
fn composition_matches_realization_exhaustively() {
    let reps = representatives(3);
    let mut checked = 0usize;
    for b in &reps {
        for a in &reps {
            if a.cardinality() != b.cardinality() {
                continue;
            }
            for e in &reps {
                if e.cardinality() != a.cardinality() {
                    continue;
                }
                for g in hom_basis(b, a) {
                    for h in hom_basis(a, e) {
                        schcat::verify::check_functor_pair(&g, &h).unwrap();
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked >= 160, "only {checked} pairs checked");
}

/// Weight-basis pushforward and pullback agree with the invariant-tensor
/// construction for every multijection of cardinality up to 4, width 2.
#[test]
fn weight_basis_matches_invariant_tensors() {
    let reps = representatives(4);
    let mut checked = 0usize;
    for s in &reps {
        for t in &reps {
            if s.cardinality() != t.cardinality() {
                continue;
            }
            for f in Multijection::all_between(s, t) {
                let width = if s.cardinality() <= 3 { 2 } else { 1 };
                assert_eq!(
                    gamma::oracle_lower(&f, width).unwrap(),
                    gamma::realize_lower(&f, width),
                    "lower at {f:?}"
                );
                assert_eq!(
                    gamma::oracle_upper(&f, width).unwrap(),
                    gamma::realize_upper(&f, width),
                    "upper at {f:?}"
                );
                checked += 1;
            }
        }
    }
    assert!(checked >= 77);
}

/// Hecke relation through the realization: lower∘upper of every small
/// multijection realizes as degree × identity.
#[test]
fn realized_hecke_relation_small() {
    use num_bigint::BigInt;
    let reps = representatives(4);
    for s in &reps {
        for t in &reps {
            if s.cardinality() != t.cardinality() {
                continue;
            }
            for f in Multijection::all_between(s, t) {
                for width in 1..=2usize {
                    let low = gamma::realize_lower(&f, width);
                    let up = gamma::realize_upper(&f, width);
                    let dim = gamma::basis(f.target(), width).dimension();
                    let want = schcat::exactlin::IntMatrix::identity(dim)
                        .scale(&BigInt::from(f.degree()));
                    assert_eq!(low.mul(&up), want, "at {f:?} width {width}");
                }
            }
        }
    }
}

/// Faithfulness at desk scale: realized hom bases are linearly independent
/// over the rationals when the width is at least the cardinality.
#[test]
fn realization_is_injective_small() {
    use num_bigint::BigInt;
    for n in 0..=3u64 {
        let shapes = PartitionShape::all_of_cardinality(n);
        for sb in &shapes {
            for sa in &shapes {
                let beta = sb.representative();
                let alpha = sa.representative();
                let basis = hom_basis(&beta, &alpha);
                if basis.is_empty() {
                    continue;
                }
                let width = n as usize;
                let vectors: Vec<Vec<(usize, BigInt)>> = basis
                    .iter()
                    .map(|g| {
                        let m = gamma::realize_graph(g, width);
                        let mut v = Vec::new();
                        for i in 0..m.rows() {
                            for j in 0..m.cols() {
                                if !m[(i, j)].is_zero_ref() {
                                    v.push((i * m.cols() + j, m[(i, j)].clone()));
                                }
                            }
                        }
                        v
                    })
                    .collect();
                let rank = schcat::exactlin::sparse_integer_rank(vectors);
                assert_eq!(rank, basis.len(), "{beta} -> {alpha} at width {width}");
            }
        }
    }
}

trait IsZeroRef {
    fn is_zero_ref(&self) -> bool;
}

impl IsZeroRef for num_bigint::BigInt {
    fn is_zero_ref(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

/// Scalar extension through the category equals the direct construction for
/// the standard small modules (cross-module consistency).
#[test]
fn scalar_extension_cross_check() {
    use schcat::sigma::{extend_to_sch_module, scalar_extend, SigmaModule};
    for n in 1..=3usize {
        for make in [
            SigmaModule::trivial as fn(usize) -> SigmaModule,
            SigmaModule::sign,
            SigmaModule::regular,
        ] {
            let m = make(n);
            let ext = extend_to_sch_module(&m).unwrap();
            ext.validate().unwrap();
            for shape in PartitionShape::all_of_cardinality(n as u64) {
                let direct = scalar_extend(&m, &shape.representative()).unwrap();
                assert_eq!(
                    ext.component(&shape).invariants(),
                    direct.invariants(),
                    "degree {n} at {shape}"
                );
            }
        }
    }
}

/// The morphism-level Mackey expansion: lower-then-upper along the standard
/// collapse expands into the full permutation sum at the set level.
#[test]
fn symmetrizer_on_the_set_cover() {
    for p in [2u64, 3] {
        let source = Multiset::standard_set(p);
        let target = Multiset::singleton(Label(1), p);
        let t = target.support().next().unwrap();
        let f = Multijection::new(
            source.clone(),
            target.clone(),
            source.support().map(|s| (s, t)).collect(),
        )
        .unwrap();
        let up = SchMorphism::upperstar(Ring::Int, &f);
        let low = SchMorphism::lowerstar(Ring::Int, &f);
        let gf = SchMorphism::compose(&up, &low).unwrap();
        // p! permutation graphs, coefficient one each
        assert_eq!(gf.num_terms(), (1..=p as usize).product::<usize>());
        for (g, c) in gf.terms() {
            assert!(c.is_one());
            let k = source.support_size();
            for i in 0..k {
                let ones = (0..k).filter(|&j| g.entry(i, j) == 1).count();
                assert_eq!(ones, 1);
            }
        }
    }
}
