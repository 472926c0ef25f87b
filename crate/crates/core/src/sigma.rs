//! Symmetric-group modules and their scalar extension to modules over the
//! graph category.
//!
//! A [`SigmaModule`] is a right module over the integral group ring of a
//! symmetric group, presented by generator matrices for the adjacent
//! transpositions; the Coxeter relations are checked exactly at
//! construction.  Scalar extension to a multiset `α` is the coinvariant
//! quotient `M ⊗_{Σ_n} Z[Σ^α]`, where `Σ^α` is the permutation basis of
//! fibre-respecting functions, and extending over every shape at once gives
//! a module presentation over the whole category.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{FPModule, IntMatrix};
use crate::gamma::fibre_functions;
use crate::multiset::{Label, Multiset, PartitionShape};
use crate::polyfun::{generators, GenKind, SchModulePresentation};
use crate::ring::Ring;

/// A right module over `Z[Σ_n]`: an underlying presentation together with
/// one action matrix per adjacent transposition.
#[derive(Clone, Debug)]
pub struct SigmaModule {
    pub degree: usize,
    pub underlying: FPModule,
    /// action lifts for the transpositions `(1 2), (2 3), …`
    pub generator_actions: Vec<IntMatrix>,
}

impl SigmaModule {
    /// Validates that the actions are well-defined on the presentation and
    /// satisfy the Coxeter relations exactly (as maps, i.e. modulo
    /// relations): squares are the identity, far-apart generators commute,
    /// adjacent ones braid.
    pub fn new(
        degree: usize,
        underlying: FPModule,
        generator_actions: Vec<IntMatrix>,
    ) -> Result<Self> {
        if generator_actions.len() + 1 != degree.max(1) {
            return Err(Error::DegreeMismatch(format!(
                "degree {degree} needs {} generator actions, got {}",
                degree.saturating_sub(1),
                generator_actions.len()
            )));
        }
        let maps: Vec<crate::exactlin::ModuleMap> = generator_actions
            .iter()
            .map(|a| {
                crate::exactlin::ModuleMap::new(underlying.clone(), underlying.clone(), a.clone())
            })
            .collect::<Result<_>>()?;
        let id = crate::exactlin::ModuleMap::identity(&underlying);
        for (i, s) in maps.iter().enumerate() {
            let sq = s.compose(s)?;
            if !sq.equals(&id) {
                return Err(Error::InvariantViolation(format!(
                    "generator {i} does not square to the identity"
                )));
            }
            for (j, t) in maps.iter().enumerate().skip(i + 1) {
                let st = s.compose(t)?;
                let ts = t.compose(s)?;
                if j == i + 1 {
                    // braid: s t s = t s t
                    let sts = st.compose(s)?;
                    let tst = ts.compose(t)?;
                    if !sts.equals(&tst) {
                        return Err(Error::InvariantViolation(format!(
                            "generators {i},{j} violate the braid relation"
                        )));
                    }
                } else if !st.equals(&ts) {
                    return Err(Error::InvariantViolation(format!(
                        "generators {i},{j} do not commute"
                    )));
                }
            }
        }
        Ok(SigmaModule { degree, underlying, generator_actions })
    }

    /// Trivial rank-one module.
    pub fn trivial(degree: usize) -> Self {
        let underlying = FPModule::free(1, Ring::Int);
        let actions = vec![IntMatrix::identity(1); degree.saturating_sub(1)];
        SigmaModule { degree, underlying, generator_actions: actions }
    }

    /// Sign character: every transposition acts by −1.
    pub fn sign(degree: usize) -> Self {
        let underlying = FPModule::free(1, Ring::Int);
        let neg = IntMatrix::identity(1).scale(&BigInt::from(-1));
        SigmaModule {
            degree,
            underlying,
            generator_actions: vec![neg; degree.saturating_sub(1)],
        }
    }

    /// The regular representation: basis the group elements, transpositions
    /// acting by right multiplication.
    pub fn regular(degree: usize) -> Self {
        let elements = permutations(degree);
        let index: HashMap<Vec<usize>, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let rank = elements.len();
        let mut actions = Vec::new();
        for k in 0..degree.saturating_sub(1) {
            let mut a = IntMatrix::zero(rank, rank);
            for (col, p) in elements.iter().enumerate() {
                // right multiplication: (p · s_k)(x) = p(s_k(x))
                let mut q = p.clone();
                q.swap(k, k + 1);
                a[(index[&q], col)] = BigInt::one();
            }
            actions.push(a);
        }
        SigmaModule {
            degree,
            underlying: FPModule::free(rank, Ring::Int),
            generator_actions: actions,
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    if n == 0 {
        return vec![vec![]];
    }
    (0..n).permutations(n).collect()
}

/// The permutation module on the fibre-respecting functions `[1^n] → α`,
/// with transpositions acting by precomposition.
#[derive(Clone, Debug)]
pub struct OrbitModule {
    pub shape: Multiset,
    pub degree: usize,
    pub basis: Vec<Vec<Label>>,
    /// per transposition: the basis permutation it induces
    pub actions: Vec<Vec<usize>>,
}

pub fn orbit_module(alpha: &Multiset) -> OrbitModule {
    let n = alpha.cardinality() as usize;
    let basis = fibre_functions(alpha);
    let index: HashMap<&[Label], usize> = basis
        .iter()
        .enumerate()
        .map(|(i, f)| (f.as_slice(), i))
        .collect();
    let mut actions = Vec::new();
    for k in 0..n.saturating_sub(1) {
        let perm: Vec<usize> = basis
            .iter()
            .map(|f| {
                let mut g = f.clone();
                g.swap(k, k + 1);
                index[g.as_slice()]
            })
            .collect();
        actions.push(perm);
    }
    OrbitModule { shape: alpha.clone(), degree: n, basis, actions }
}

/// Coinvariants `M ⊗_{Σ_n} Z[Σ^α]`: the quotient of `M ⊗ Z[Σ^α]` by
/// `m·σ ⊗ x − m ⊗ σ⁻¹x` over the adjacent transpositions.
pub fn scalar_extend(m: &SigmaModule, alpha: &Multiset) -> Result<FPModule> {
    if alpha.cardinality() as usize != m.degree {
        return Err(Error::DegreeMismatch(format!(
            "module degree {} vs cardinality {}",
            m.degree,
            alpha.cardinality()
        )));
    }
    let orbit = orbit_module(alpha);
    let b = orbit.basis.len();
    let rank = m.underlying.rank * b;
    let mut rel_cols: Vec<Vec<(usize, BigInt)>> = Vec::new();
    // relations of M tensored with each basis function
    for c in 0..m.underlying.relations.cols() {
        for x in 0..b {
            let col: Vec<(usize, BigInt)> = (0..m.underlying.rank)
                .filter_map(|r| {
                    let e = m.underlying.relations[(r, c)].clone();
                    (!e.is_zero()).then_some((r * b + x, e))
                })
                .collect();
            rel_cols.push(col);
        }
    }
    // coinvariant relations per generator
    for (k, action) in m.generator_actions.iter().enumerate() {
        for j in 0..m.underlying.rank {
            for x in 0..b {
                let mut col: Vec<(usize, BigInt)> = Vec::new();
                for r in 0..m.underlying.rank {
                    let e = action[(r, j)].clone();
                    if !e.is_zero() {
                        col.push((r * b + x, e));
                    }
                }
                let sx = orbit.actions[k][x];
                col.push((j * b + sx, BigInt::from(-1)));
                rel_cols.push(col);
            }
        }
    }
    let mut relations = IntMatrix::zero(rank, rel_cols.len());
    for (c, col) in rel_cols.iter().enumerate() {
        for (r, e) in col {
            relations[(*r, c)] = relations[(*r, c)].clone() + e;
        }
    }
    FPModule::new(rank, relations, Ring::Int)
}

/// Evaluate `Σ_n M_n ⊗_{Σ_n} P^{⊗n}` on a free module of the given width:
/// the direct sum over the degrees of word coinvariants.
pub fn evaluate_s(modules: &[SigmaModule], width: usize) -> Result<FPModule> {
    let mut total = FPModule::free(0, Ring::Int);
    for m in modules {
        let n = m.degree;
        let words: usize = width.pow(n as u32);
        if words * m.underlying.rank > 8192 {
            return Err(Error::SizeLimit(format!(
                "tensor power needs {} generators",
                words * m.underlying.rank
            )));
        }
        // words of length n over the width, lexicographic
        let mut word_list: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..n {
            let mut next = Vec::with_capacity(word_list.len() * width);
            for w in &word_list {
                for i in 0..width {
                    let mut e = w.clone();
                    e.push(i);
                    next.push(e);
                }
            }
            word_list = next;
        }
        let word_index: HashMap<&[usize], usize> = word_list
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_slice(), i))
            .collect();
        let b = word_list.len();
        let rank = m.underlying.rank * b;
        let mut rel_cols: Vec<Vec<(usize, BigInt)>> = Vec::new();
        for c in 0..m.underlying.relations.cols() {
            for x in 0..b {
                let col: Vec<(usize, BigInt)> = (0..m.underlying.rank)
                    .filter_map(|r| {
                        let e = m.underlying.relations[(r, c)].clone();
                        (!e.is_zero()).then_some((r * b + x, e))
                    })
                    .collect();
                rel_cols.push(col);
            }
        }
        for (k, action) in m.generator_actions.iter().enumerate() {
            for j in 0..m.underlying.rank {
                for (x, w) in word_list.iter().enumerate() {
                    let mut col: Vec<(usize, BigInt)> = Vec::new();
                    for r in 0..m.underlying.rank {
                        let e = action[(r, j)].clone();
                        if !e.is_zero() {
                            col.push((r * b + x, e));
                        }
                    }
                    let mut sw = w.clone();
                    sw.swap(k, k + 1);
                    col.push((j * b + word_index[sw.as_slice()], BigInt::from(-1)));
                    rel_cols.push(col);
                }
            }
        }
        let mut relations = IntMatrix::zero(rank, rel_cols.len());
        for (c, col) in rel_cols.iter().enumerate() {
            for (r, e) in col {
                relations[(*r, c)] = relations[(*r, c)].clone() + e;
            }
        }
        total = total.direct_sum(&FPModule::new(rank, relations, Ring::Int)?);
    }
    Ok(total)
}

/// Extend a single-degree module over the whole category: components are
/// the coinvariants at every shape of that cardinality, with generator
/// actions induced by post-composition on the permutation bases (verified
/// well-defined when the presentation is assembled).
pub fn extend_to_sch_module(m: &SigmaModule) -> Result<SchModulePresentation> {
    let n = m.degree as u64;
    let mut components = BTreeMap::new();
    let mut orbits: BTreeMap<PartitionShape, OrbitModule> = BTreeMap::new();
    for d in 0..=n {
        for shape in PartitionShape::all_of_cardinality(d) {
            if d == n {
                let rep = shape.representative();
                components.insert(shape.clone(), scalar_extend(m, &rep)?);
                orbits.insert(shape.clone(), orbit_module(&rep));
            } else {
                components.insert(shape.clone(), FPModule::free(0, Ring::Int));
            }
        }
    }
    let mut swaps = BTreeMap::new();
    let mut merge_lower = BTreeMap::new();
    let mut merge_upper = BTreeMap::new();
    for g in generators(n) {
        if g.shape.cardinality() != n {
            // lower-degree components are zero; record zero actions
            match g.kind {
                GenKind::Swap(pos) => {
                    swaps.insert((g.shape.clone(), pos), IntMatrix::zero(0, 0));
                }
                GenKind::Merge(i, j) => {
                    merge_lower.insert((g.shape.clone(), i, j), IntMatrix::zero(0, 0));
                    merge_upper.insert((g.shape.clone(), i, j), IntMatrix::zero(0, 0));
                }
            }
            continue;
        }
        let src_orbit = &orbits[&g.shape];
        let tgt_orbit = &orbits[&g.target_shape];
        let tgt_index: HashMap<&[Label], usize> = tgt_orbit
            .basis
            .iter()
            .enumerate()
            .map(|(i, f)| (f.as_slice(), i))
            .collect();
        let src_index: HashMap<&[Label], usize> = src_orbit
            .basis
            .iter()
            .enumerate()
            .map(|(i, f)| (f.as_slice(), i))
            .collect();
        let m_rank = m.underlying.rank;
        // lower: φ ↦ f̂∘φ on the permutation basis, tensored with id_M
        let lower_perm = |f: &crate::multijection::Multijection| -> IntMatrix {
            let sb = src_orbit.basis.len();
            let tb = tgt_orbit.basis.len();
            let mut out = IntMatrix::zero(m_rank * tb, m_rank * sb);
            for (x, phi) in src_orbit.basis.iter().enumerate() {
                let image: Vec<Label> = phi.iter().map(|&l| f.apply(l)).collect();
                let y = tgt_index[image.as_slice()];
                for j in 0..m_rank {
                    out[(j * tb + y, j * sb + x)] = BigInt::one();
                }
            }
            out
        };
        // upper: ψ ↦ Σ_{f̂∘φ = ψ} φ
        let upper_perm = |f: &crate::multijection::Multijection| -> IntMatrix {
            let sb = src_orbit.basis.len();
            let tb = tgt_orbit.basis.len();
            let mut out = IntMatrix::zero(m_rank * sb, m_rank * tb);
            for (x, phi) in src_orbit.basis.iter().enumerate() {
                let image: Vec<Label> = phi.iter().map(|&l| f.apply(l)).collect();
                let y = tgt_index[image.as_slice()];
                for j in 0..m_rank {
                    out[(j * sb + x, j * tb + y)] = BigInt::one();
                }
            }
            out
        };
        match g.kind {
            GenKind::Swap(pos) => {
                let sb = src_orbit.basis.len();
                let mut out = IntMatrix::zero(m_rank * sb, m_rank * sb);
                for (x, phi) in src_orbit.basis.iter().enumerate() {
                    let image: Vec<Label> = phi.iter().map(|&l| g.rep_map.apply(l)).collect();
                    let y = src_index[image.as_slice()];
                    for j in 0..m_rank {
                        out[(j * sb + y, j * sb + x)] = BigInt::one();
                    }
                }
                swaps.insert((g.shape.clone(), pos), out);
            }
            GenKind::Merge(i, j) => {
                merge_lower.insert((g.shape.clone(), i, j), lower_perm(&g.rep_map));
                merge_upper.insert((g.shape.clone(), i, j), upper_perm(&g.rep_map));
            }
        }
    }
    SchModulePresentation::from_parts(n, components, swaps, merge_lower, merge_upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfun::eval_on_free;

    fn ms(s: &str) -> Multiset {
        s.parse().unwrap()
    }

    #[test]
    fn orbit_module_sizes() {
        assert_eq!(orbit_module(&ms("[2]")).basis.len(), 1);
        assert_eq!(orbit_module(&ms("[1,1]")).basis.len(), 2);
        assert_eq!(orbit_module(&ms("[2,1]")).basis.len(), 3);
    }

    #[test]
    fn orbit_sizes_match_factorial_quotient() {
        use num_bigint::BigUint;
        for n in 0..=6u64 {
            for shape in PartitionShape::all_of_cardinality(n) {
                let rep = shape.representative();
                let count = BigUint::from(orbit_module(&rep).basis.len());
                assert_eq!(count * rep.factorial(), crate::arith::factorial(n));
            }
        }
    }

    #[test]
    fn coxeter_validation_accepts_and_rejects() {
        for n in 0..=4usize {
            SigmaModule::new(
                n,
                SigmaModule::trivial(n).underlying,
                SigmaModule::trivial(n).generator_actions,
            )
            .unwrap();
            let r = SigmaModule::regular(n);
            SigmaModule::new(n, r.underlying.clone(), r.generator_actions.clone()).unwrap();
        }
        // a generator that does not square to one
        let bad = SigmaModule::new(
            2,
            FPModule::free(1, Ring::Int),
            vec![IntMatrix::from_i64(1, 1, &[2])],
        );
        assert!(bad.is_err());
        // braid violation on rank 2 in degree 3
        let s1 = IntMatrix::from_i64(2, 2, &[0, 1, 1, 0]);
        let s2 = IntMatrix::from_i64(2, 2, &[1, 0, 0, -1]);
        assert!(SigmaModule::new(3, FPModule::free(2, Ring::Int), vec![s1, s2]).is_err());
    }

    #[test]
    fn scalar_extension_examples() {
        // trivial module: one orbit, Z, at every shape
        let t2 = SigmaModule::trivial(2);
        assert_eq!(
            scalar_extend(&t2, &ms("[1,1]")).unwrap().invariants().to_string(),
            "Z"
        );
        // sign at [2]: the relation is 2(m⊗x) = 0
        let s2 = SigmaModule::sign(2);
        assert_eq!(
            scalar_extend(&s2, &ms("[2]")).unwrap().invariants().to_string(),
            "Z/2"
        );
        // sign at [1,1]: the two basis vectors glue up to sign
        assert_eq!(
            scalar_extend(&s2, &ms("[1,1]")).unwrap().invariants().to_string(),
            "Z"
        );
    }

    #[test]
    fn scalar_extension_of_trivial_is_always_z() {
        for n in 0..=5u64 {
            let t = SigmaModule::trivial(n as usize);
            for shape in PartitionShape::all_of_cardinality(n) {
                let e = scalar_extend(&t, &shape.representative()).unwrap();
                assert_eq!(e.invariants().to_string(), "Z", "at {shape}");
            }
        }
    }

    #[test]
    fn evaluate_s_examples() {
        // trivial in degree 2 on width 2: the symmetric square, rank 3
        let v = evaluate_s(&[SigmaModule::trivial(2)], 2).unwrap();
        assert_eq!(v.invariants().to_string(), "Z^3");
        // sign in degree 2 on width 1: e⊗e = −e⊗e
        let v = evaluate_s(&[SigmaModule::sign(2)], 1).unwrap();
        assert_eq!(v.invariants().to_string(), "Z/2");
        // no modules: zero
        let v = evaluate_s(&[], 3).unwrap();
        assert!(v.invariants().is_trivial());
    }

    #[test]
    fn extension_components_match_direct_coinvariants() {
        // regular Σ₂: Z² at [1,1], Z at [2]
        let r = extend_to_sch_module(&SigmaModule::regular(2)).unwrap();
        assert_eq!(
            r.component(&ms("[1,1]").canonical_shape()).invariants().to_string(),
            "Z^2"
        );
        assert_eq!(
            r.component(&ms("[2]").canonical_shape()).invariants().to_string(),
            "Z"
        );
        // sign Σ₂: Z at [1,1], Z/2 at [2]
        let s = extend_to_sch_module(&SigmaModule::sign(2)).unwrap();
        assert_eq!(
            s.component(&ms("[1,1]").canonical_shape()).invariants().to_string(),
            "Z"
        );
        assert_eq!(
            s.component(&ms("[2]").canonical_shape()).invariants().to_string(),
            "Z/2"
        );
        s.validate().unwrap();
    }

    #[test]
    fn extension_agrees_with_word_coinvariants() {
        for n in 0..=3usize {
            for make in [
                SigmaModule::trivial as fn(usize) -> SigmaModule,
                SigmaModule::sign,
                SigmaModule::regular,
            ] {
                let m = make(n);
                let ext = extend_to_sch_module(&m).unwrap();
                for width in 1..=3usize {
                    let via_words = evaluate_s(&[m.clone()], width).unwrap();
                    let via_module = eval_on_free(&ext, width).total;
                    assert_eq!(
                        via_words.invariants(),
                        via_module.invariants(),
                        "degree {n} width {width}"
                    );
                }
            }
        }
    }
}
