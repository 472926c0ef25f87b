//! Module presentations over the graph category and the functors they
//! classify: evaluation on free and finitely presented modules, the
//! homogeneous decomposition, and the box (tensor) product.
//!
//! A presentation stores one component per partition shape together with
//! action matrices for a generating set of morphisms: adjacent swaps of
//! equal-multiplicity support points (the isomorphisms) and two-point merges
//! (pushforward and pullback).  Every other action is derived by factoring
//! through the generators; [`SchModulePresentation::validate`] replays words
//! of generators against the category's own composition to certify the
//! stored matrices.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{FPModule, IntMatrix, ModuleMap};
use crate::gamma;
use crate::multijection::{enumerate_margin_matrices, Multijection};
use crate::multiset::{Label, Multiset, PartitionShape};
use crate::ring::Ring;
use crate::schurcat::{hom_basis, shuffle_factorize, GraphMorphism, SchMorphism};

/// Canonical isomorphism from a multiset onto its shape representative:
/// support ordered by (multiplicity descending, label ascending) onto the
/// labels `1..k`.
pub fn canonical_iso(ms: &Multiset) -> Multijection {
    let mut order: Vec<(Label, u64)> = ms.entries().to_vec();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let map: Vec<(Label, Label)> = order
        .iter()
        .enumerate()
        .map(|(p, &(l, _))| (l, Label(p as u32 + 1)))
        .collect();
    Multijection::new(ms.clone(), ms.canonical_shape().representative(), map)
        .expect("relabeling onto the representative is an isomorphism")
}

/// A generator of the category over the shape representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// swap of the adjacent support points `pos`, `pos+1` (equal mults)
    Swap(usize),
    /// merge of the support points `i < j`
    Merge(usize, usize),
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub shape: PartitionShape,
    pub kind: GenKind,
    /// the canonicalized map `rep(shape) → rep(target_shape)`
    pub rep_map: Multijection,
    pub target_shape: PartitionShape,
}

/// The canonicalized merge of support points `i < j` of the representative.
pub fn rep_merge(shape: &PartitionShape, i: usize, j: usize) -> (Multijection, PartitionShape) {
    let rep = shape.representative();
    let (li, lj) = (Label(i as u32 + 1), Label(j as u32 + 1));
    let merged = Multiset::from_entries(rep.entries().iter().map(|&(l, m)| {
        if l == lj {
            (li, m)
        } else {
            (l, m)
        }
    }));
    let merge = Multijection::new(
        rep.clone(),
        merged.clone(),
        rep.support()
            .map(|l| (l, if l == lj { li } else { l }))
            .collect(),
    )
    .expect("two-point merge is a multijection");
    let c = canonical_iso(&merged);
    let target_shape = merged.canonical_shape();
    let rep_map = Multijection::compose(&c, &merge).unwrap();
    (rep_map, target_shape)
}

/// The swap of adjacent equal-multiplicity support points of the
/// representative, as an automorphism.
pub fn rep_swap(shape: &PartitionShape, pos: usize) -> Multijection {
    let rep = shape.representative();
    let (a, b) = (Label(pos as u32 + 1), Label(pos as u32 + 2));
    Multijection::new(
        rep.clone(),
        rep.clone(),
        rep.support()
            .map(|l| (l, if l == a { b } else if l == b { a } else { l }))
            .collect(),
    )
    .expect("equal multiplicities make the swap an automorphism")
}

/// All generators over shapes of cardinality up to `bound`.
pub fn generators(bound: u64) -> Vec<Generator> {
    let mut out = Vec::new();
    for n in 0..=bound {
        for shape in PartitionShape::all_of_cardinality(n) {
            let mults = shape.mults().to_vec();
            for pos in 0..mults.len().saturating_sub(1) {
                if mults[pos] == mults[pos + 1] {
                    out.push(Generator {
                        shape: shape.clone(),
                        kind: GenKind::Swap(pos),
                        rep_map: rep_swap(&shape, pos),
                        target_shape: shape.clone(),
                    });
                }
            }
            for i in 0..mults.len() {
                for j in i + 1..mults.len() {
                    let (rep_map, target_shape) = rep_merge(&shape, i, j);
                    out.push(Generator {
                        shape: shape.clone(),
                        kind: GenKind::Merge(i, j),
                        rep_map,
                        target_shape,
                    });
                }
            }
        }
    }
    out
}

/// Express a multiplicity-preserving permutation of `0..k` as a word of
/// adjacent transpositions, `perm = τ_{w[0]} ∘ τ_{w[1]} ∘ …` (the last
/// letter acts first).  Only positions inside equal-multiplicity blocks are
/// ever swapped.
fn adjacent_word(perm: &[usize]) -> Vec<usize> {
    let n = perm.len();
    let mut v: Vec<usize> = perm.to_vec();
    let mut word = Vec::new();
    loop {
        // position of each value
        let mut pos = vec![0usize; n];
        for (p, &val) in v.iter().enumerate() {
            pos[val] = p;
        }
        let Some(k) = (0..n.saturating_sub(1)).find(|&k| pos[k] > pos[k + 1]) else {
            break;
        };
        // left-compose τ_k: swap the values k and k+1 wherever they appear
        for val in v.iter_mut() {
            if *val == k {
                *val = k + 1;
            } else if *val == k + 1 {
                *val = k;
            }
        }
        word.push(k);
    }
    debug_assert!(v.iter().enumerate().all(|(p, &val)| p == val));
    word
}

/// An additive functor on the graph category, stored on shape
/// representatives with explicit generator actions.
#[derive(Debug)]
pub struct SchModulePresentation {
    bound: u64,
    components: BTreeMap<PartitionShape, FPModule>,
    swaps: BTreeMap<(PartitionShape, usize), IntMatrix>,
    merge_lower: BTreeMap<(PartitionShape, usize, usize), IntMatrix>,
    merge_upper: BTreeMap<(PartitionShape, usize, usize), IntMatrix>,
    lower_cache: RwLock<HashMap<Multijection, IntMatrix>>,
    upper_cache: RwLock<HashMap<Multijection, IntMatrix>>,
}

impl Clone for SchModulePresentation {
    fn clone(&self) -> Self {
        SchModulePresentation {
            bound: self.bound,
            components: self.components.clone(),
            swaps: self.swaps.clone(),
            merge_lower: self.merge_lower.clone(),
            merge_upper: self.merge_upper.clone(),
            lower_cache: RwLock::new(HashMap::new()),
            upper_cache: RwLock::new(HashMap::new()),
        }
    }
}

impl PartialEq for SchModulePresentation {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound
            && self.components == other.components
            && self.swaps == other.swaps
            && self.merge_lower == other.merge_lower
            && self.merge_upper == other.merge_upper
    }
}

impl SchModulePresentation {
    /// Assemble from explicit parts, checking that every action matrix is a
    /// well-defined module map (sends relations into relations).
    pub fn from_parts(
        bound: u64,
        components: BTreeMap<PartitionShape, FPModule>,
        swaps: BTreeMap<(PartitionShape, usize), IntMatrix>,
        merge_lower: BTreeMap<(PartitionShape, usize, usize), IntMatrix>,
        merge_upper: BTreeMap<(PartitionShape, usize, usize), IntMatrix>,
    ) -> Result<Self> {
        let component = |shape: &PartitionShape| -> Result<&FPModule> {
            components.get(shape).ok_or_else(|| {
                Error::InvariantViolation(format!("missing component at {shape}"))
            })
        };
        for g in generators(bound) {
            match g.kind {
                GenKind::Swap(pos) => {
                    let m = swaps.get(&(g.shape.clone(), pos)).ok_or_else(|| {
                        Error::InvariantViolation(format!("missing swap action at {}", g.shape))
                    })?;
                    let c = component(&g.shape)?;
                    ModuleMap::new(c.clone(), c.clone(), m.clone())?;
                }
                GenKind::Merge(i, j) => {
                    let low = merge_lower.get(&(g.shape.clone(), i, j)).ok_or_else(|| {
                        Error::InvariantViolation(format!("missing merge action at {}", g.shape))
                    })?;
                    let up = merge_upper.get(&(g.shape.clone(), i, j)).ok_or_else(|| {
                        Error::InvariantViolation(format!("missing merge action at {}", g.shape))
                    })?;
                    let src = component(&g.shape)?;
                    let tgt = component(&g.target_shape)?;
                    ModuleMap::new(src.clone(), tgt.clone(), low.clone())?;
                    ModuleMap::new(tgt.clone(), src.clone(), up.clone())?;
                }
            }
        }
        Ok(SchModulePresentation {
            bound,
            components,
            swaps,
            merge_lower,
            merge_upper,
            lower_cache: RwLock::new(HashMap::new()),
            upper_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn components(&self) -> &BTreeMap<PartitionShape, FPModule> {
        &self.components
    }

    pub fn component(&self, shape: &PartitionShape) -> &FPModule {
        &self.components[shape]
    }

    pub fn swap_action(&self, shape: &PartitionShape, pos: usize) -> &IntMatrix {
        &self.swaps[&(shape.clone(), pos)]
    }

    pub fn merge_actions(&self, shape: &PartitionShape, i: usize, j: usize) -> (&IntMatrix, &IntMatrix) {
        (
            &self.merge_lower[&(shape.clone(), i, j)],
            &self.merge_upper[&(shape.clone(), i, j)],
        )
    }

    /// Action of an isomorphism of the representative, given as the position
    /// permutation `p ↦ perm[p]`.
    fn iso_action(&self, shape: &PartitionShape, perm: &[usize]) -> IntMatrix {
        let rank = self.component(shape).rank;
        let mut acc = IntMatrix::identity(rank);
        for k in adjacent_word(perm) {
            let swap = &self.swaps[&(shape.clone(), k)];
            acc = acc.mul(swap);
        }
        acc
    }

    /// Action matrix of `g_*` for a map between representatives.
    fn lower_rep(&self, g: &Multijection) -> IntMatrix {
        if let Some(hit) = self.lower_cache.read().unwrap().get(g) {
            return hit.clone();
        }
        let shape = g.source().canonical_shape();
        let out = if g.is_isomorphism() {
            let perm: Vec<usize> = g
                .source()
                .support()
                .map(|l| g.target().position(g.apply(l)).unwrap())
                .collect();
            self.iso_action(&shape, &perm)
        } else {
            let (i, j, m_hat, mid_shape, h) = self.split_one_merge(g);
            let step = &self.merge_lower[&(shape.clone(), i, j)];
            let _ = (m_hat, mid_shape);
            self.lower_rep(&h).mul(step)
        };
        self.lower_cache
            .write()
            .unwrap()
            .insert(g.clone(), out.clone());
        out
    }

    /// Action matrix of `g^*` for a map between representatives.
    fn upper_rep(&self, g: &Multijection) -> IntMatrix {
        if let Some(hit) = self.upper_cache.read().unwrap().get(g) {
            return hit.clone();
        }
        let shape = g.source().canonical_shape();
        let out = if g.is_isomorphism() {
            // π^* = (π⁻¹)_*
            let inv = g.inverse().unwrap();
            let perm: Vec<usize> = inv
                .source()
                .support()
                .map(|l| inv.target().position(inv.apply(l)).unwrap())
                .collect();
            self.iso_action(&shape, &perm)
        } else {
            let (i, j, m_hat, mid_shape, h) = self.split_one_merge(g);
            let step = &self.merge_upper[&(shape.clone(), i, j)];
            let _ = (m_hat, mid_shape);
            step.mul(&self.upper_rep(&h))
        };
        self.upper_cache
            .write()
            .unwrap()
            .insert(g.clone(), out.clone());
        out
    }

    /// Split `g = h ∘ m̂` where `m̂` is a stored merge generator: merge the
    /// two smallest positions of the largest fibre.
    fn split_one_merge(
        &self,
        g: &Multijection,
    ) -> (usize, usize, Multijection, PartitionShape, Multijection) {
        let shape = g.source().canonical_shape();
        let mut best: Option<(usize, Label)> = None;
        for (t, _) in g.target().entries() {
            let count = g.map().iter().filter(|&&(_, u)| u == *t).count();
            if count >= 2 {
                match best {
                    None => best = Some((count, *t)),
                    Some((c, _)) if count > c => best = Some((count, *t)),
                    _ => {}
                }
            }
        }
        let (_, t) = best.expect("non-isomorphism has a fibre with two points");
        let fibre: Vec<usize> = g
            .map()
            .iter()
            .filter(|&&(_, u)| u == t)
            .map(|&(s, _)| g.source().position(s).unwrap())
            .collect();
        let (i, j) = (fibre[0], fibre[1]);
        let (m_hat, mid_shape) = rep_merge(&shape, i, j);
        // residual: h(m̂(s)) = g(s)
        let mut h_map: Vec<(Label, Label)> = Vec::new();
        for &(s, _) in g.source().entries() {
            let y = m_hat.apply(s);
            let gs = g.apply(s);
            if !h_map.iter().any(|&(a, _)| a == y) {
                h_map.push((y, gs));
            }
        }
        let h = Multijection::new(
            mid_shape.representative(),
            g.target().clone(),
            h_map,
        )
        .expect("residual of a merge is a multijection");
        (i, j, m_hat, mid_shape, h)
    }

    /// Action of `f_*` for an arbitrary multijection, via the canonical
    /// isomorphisms onto the representatives.
    pub fn act_lower(&self, f: &Multijection) -> IntMatrix {
        let c_src = canonical_iso(f.source());
        let c_tgt = canonical_iso(f.target());
        let g = Multijection::compose(
            &c_tgt,
            &Multijection::compose(f, &c_src.inverse().unwrap()).unwrap(),
        )
        .unwrap();
        self.lower_rep(&g)
    }

    /// Action of `f^*` for an arbitrary multijection.
    pub fn act_upper(&self, f: &Multijection) -> IntMatrix {
        let c_src = canonical_iso(f.source());
        let c_tgt = canonical_iso(f.target());
        let g = Multijection::compose(
            &c_tgt,
            &Multijection::compose(f, &c_src.inverse().unwrap()).unwrap(),
        )
        .unwrap();
        self.upper_rep(&g)
    }

    /// Action of a single graph: pull back along the left leg of its span,
    /// push forward along the right.
    pub fn act_graph(&self, w: &GraphMorphism) -> IntMatrix {
        let span = w.span();
        self.act_lower(&span.right).mul(&self.act_upper(&span.left))
    }

    /// Action of a formal sum with integral coefficients.
    pub fn act(&self, x: &SchMorphism) -> Result<IntMatrix> {
        let rows = self.component(&x.target().canonical_shape()).rank;
        let cols = self.component(&x.source().canonical_shape()).rank;
        let mut acc = IntMatrix::zero(rows, cols);
        for (g, c) in x.terms() {
            let n = c.as_bigint().ok_or_else(|| {
                Error::RingMismatch(format!("non-integral coefficient {c}"))
            })?;
            acc = acc.add(&self.act_graph(g).scale(&n));
        }
        Ok(acc)
    }

    /// Two matrices into the same component agree as maps when their columns
    /// differ by relations.
    fn equal_mod(&self, shape: &PartitionShape, a: &IntMatrix, b: &IntMatrix) -> bool {
        let m = self.component(shape);
        let d = a.sub(b);
        (0..d.cols()).all(|j| m.in_relation_image(&d.column(j)))
    }

    /// Replay generator words against the category's own composition: the
    /// Hecke relation for every merge, and composition-respect for every
    /// composable pair of generator morphisms.
    pub fn validate(&self) -> Result<()> {
        let gens = generators(self.bound);
        // Hecke: lower ∘ upper = degree × identity on the merged component
        for g in &gens {
            if let GenKind::Merge(i, j) = g.kind {
                let low = &self.merge_lower[&(g.shape.clone(), i, j)];
                let up = &self.merge_upper[&(g.shape.clone(), i, j)];
                let deg = BigInt::from(g.rep_map.degree());
                let got = low.mul(up);
                let want = IntMatrix::identity(self.component(&g.target_shape).rank).scale(&deg);
                if !self.equal_mod(&g.target_shape, &got, &want) {
                    return Err(Error::InvariantViolation(format!(
                        "Hecke relation fails for the merge {:?} at {}",
                        g.kind, g.shape
                    )));
                }
            }
        }
        // words of length two against schurcat composition
        let morphisms: Vec<SchMorphism> = gens
            .iter()
            .flat_map(|g| match g.kind {
                GenKind::Swap(_) => vec![SchMorphism::lowerstar(Ring::Int, &g.rep_map)],
                GenKind::Merge(..) => vec![
                    SchMorphism::lowerstar(Ring::Int, &g.rep_map),
                    SchMorphism::upperstar(Ring::Int, &g.rep_map),
                ],
            })
            .collect();
        for x in &morphisms {
            for y in &morphisms {
                if x.target() != y.source() {
                    continue;
                }
                let yx = SchMorphism::compose(y, x).unwrap();
                let via_compose = self.act(&yx)?;
                let stepwise = self.act(y)?.mul(&self.act(x)?);
                if !self.equal_mod(&y.target().canonical_shape(), &via_compose, &stepwise) {
                    return Err(Error::InvariantViolation(format!(
                        "action does not respect composition: {} -> {} -> {}",
                        x.source(),
                        x.target(),
                        y.target()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Group components by cardinality; actions never mix degrees because
    /// graphs only exist between multisets of equal cardinality.
    pub fn homogeneous_split(&self) -> Vec<(u64, SchModulePresentation)> {
        let mut out = Vec::new();
        for n in 0..=self.bound {
            let components: BTreeMap<PartitionShape, FPModule> = self
                .components
                .iter()
                .filter(|(s, _)| s.cardinality() == n)
                .map(|(s, m)| (s.clone(), m.clone()))
                .collect();
            if components.values().all(|m| m.rank == 0) {
                continue;
            }
            let swaps = self
                .swaps
                .iter()
                .filter(|((s, _), _)| s.cardinality() == n)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            let merge_lower = self
                .merge_lower
                .iter()
                .filter(|((s, ..), _)| s.cardinality() == n)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            let merge_upper = self
                .merge_upper
                .iter()
                .filter(|((s, ..), _)| s.cardinality() == n)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            let mut components = components;
            // a degree-homogeneous piece still carries empty components in
            // the other degrees up to its own bound
            for d in 0..=n {
                for shape in PartitionShape::all_of_cardinality(d) {
                    components
                        .entry(shape)
                        .or_insert_with(|| FPModule::free(0, Ring::Int));
                }
            }
            let piece = SchModulePresentation {
                bound: n,
                components,
                swaps,
                merge_lower,
                merge_upper,
                lower_cache: RwLock::new(HashMap::new()),
                upper_cache: RwLock::new(HashMap::new()),
            };
            out.push((n, piece));
        }
        out
    }
}

/// The representable presentation at `α0`: the component at a shape is free
/// on the graphs into `α0`, and generators act by composition in the
/// category (precomposition with the transpose).
pub fn representable(alpha0: &Multiset, bound: u64) -> SchModulePresentation {
    let a0 = alpha0.canonical_shape().representative();
    let mut components = BTreeMap::new();
    let mut bases: BTreeMap<PartitionShape, Vec<GraphMorphism>> = BTreeMap::new();
    for n in 0..=bound {
        for shape in PartitionShape::all_of_cardinality(n) {
            let basis = hom_basis(&shape.representative(), &a0);
            components.insert(shape.clone(), FPModule::free(basis.len(), Ring::Int));
            bases.insert(shape, basis);
        }
    }
    // action of y on b: compose(b, transpose(y))
    let act_on_basis = |src_shape: &PartitionShape,
                        tgt_shape: &PartitionShape,
                        y: &SchMorphism|
     -> IntMatrix {
        let src_basis = &bases[src_shape];
        let tgt_basis = &bases[tgt_shape];
        let index: HashMap<&GraphMorphism, usize> =
            tgt_basis.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let mut out = IntMatrix::zero(tgt_basis.len(), src_basis.len());
        let yt = y.transpose();
        for (col, b) in src_basis.iter().enumerate() {
            let image = SchMorphism::compose(&SchMorphism::from_graph(Ring::Int, b.clone()), &yt)
                .expect("endpoints match by construction");
            for (g, c) in image.terms() {
                let row = index[g];
                out[(row, col)] = c.as_bigint().unwrap();
            }
        }
        out
    };
    let mut swaps = BTreeMap::new();
    let mut merge_lower = BTreeMap::new();
    let mut merge_upper = BTreeMap::new();
    for g in generators(bound) {
        match g.kind {
            GenKind::Swap(pos) => {
                let y = SchMorphism::lowerstar(Ring::Int, &g.rep_map);
                swaps.insert((g.shape.clone(), pos), act_on_basis(&g.shape, &g.shape, &y));
            }
            GenKind::Merge(i, j) => {
                let low = SchMorphism::lowerstar(Ring::Int, &g.rep_map);
                let up = SchMorphism::upperstar(Ring::Int, &g.rep_map);
                merge_lower.insert(
                    (g.shape.clone(), i, j),
                    act_on_basis(&g.shape, &g.target_shape, &low),
                );
                merge_upper.insert(
                    (g.shape.clone(), i, j),
                    act_on_basis(&g.target_shape, &g.shape, &up),
                );
            }
        }
    }
    SchModulePresentation::from_parts(bound, components, swaps, merge_lower, merge_upper)
        .expect("representable actions are well-defined")
}

/// Evaluation on a free module: one copy of the shape component per ordered
/// partition supported in `{1..m}`, graded.
pub struct FunctorValue {
    pub total: FPModule,
    /// per summand: the ordered partition and the shape whose component it
    /// copies
    pub grading: Vec<(Multiset, PartitionShape)>,
}

pub fn eval_on_free(m: &SchModulePresentation, width: usize) -> FunctorValue {
    let mut total = FPModule::free(0, Ring::Int);
    let mut grading = Vec::new();
    for d in 0..=m.bound() {
        for part in Multiset::all_supported(d, width) {
            let shape = part.canonical_shape();
            let comp = m.component(&shape);
            total = total.direct_sum(comp);
            grading.push((part, shape));
        }
    }
    FunctorValue { total, grading }
}

/// Divided powers of a presented module across a shape: the tensor product
/// of `Γ^{μ(s)}(K)` over the support, presented on tuples of weight
/// monomials of the free cover.
fn gamma_shape_of_presentation(shape: &PartitionShape, k_mod: &FPModule) -> FPModule {
    let mut acc = FPModule::free(1, k_mod.ring);
    for &m in shape.mults() {
        acc = acc.tensor(&gamma::gamma_of_presentation(m, k_mod));
    }
    acc
}

/// Generator tuples for `Γ^shape(K)`: per support point a weight monomial of
/// `Γ^{μ}(free_b)`, indexed row-major matching [`FPModule::tensor`].
fn gamma_shape_tuples(shape: &PartitionShape, b: usize) -> Vec<Vec<Vec<u64>>> {
    let mut acc: Vec<Vec<Vec<u64>>> = vec![vec![]];
    for &m in shape.mults() {
        let point = Multiset::singleton(Label(1), m);
        let monos = gamma::basis(&point, b);
        let mut next = Vec::with_capacity(acc.len() * monos.dimension());
        for prefix in &acc {
            for mono in &monos.basis {
                let mut t = prefix.clone();
                t.push(mono.exps.clone());
                next.push(t);
            }
        }
        acc = next;
    }
    acc
}

/// Evaluate the functor on a finitely presented module: the quotient of
/// `⊕_λ F_λ ⊗ Γ^λ(K)` by the pushforward/pullback exchange relations over
/// the generators and the automorphism relations.
pub fn eval_on_presented(m: &SchModulePresentation, k_mod: &FPModule) -> Result<FPModule> {
    let b = k_mod.rank;
    // summands, their tuple bases, and offsets
    let mut shapes: Vec<PartitionShape> = Vec::new();
    for d in 0..=m.bound() {
        shapes.extend(PartitionShape::all_of_cardinality(d));
    }
    let mut summands: BTreeMap<PartitionShape, (FPModule, Vec<Vec<Vec<u64>>>, usize)> =
        BTreeMap::new();
    let mut offset = 0usize;
    for shape in &shapes {
        let gamma_k = gamma_shape_of_presentation(shape, k_mod);
        let tuples = gamma_shape_tuples(shape, b);
        debug_assert_eq!(gamma_k.rank, tuples.len());
        let block = m.component(shape).tensor(&gamma_k);
        let rank = block.rank;
        summands.insert(shape.clone(), (block, tuples, offset));
        offset += rank;
    }
    let total_rank = offset;
    if total_rank > 20_000 {
        return Err(Error::SizeLimit(format!(
            "evaluation needs {total_rank} generators"
        )));
    }
    let gamma_rank = |shape: &PartitionShape| summands[shape].1.len();
    let index =
        |shape: &PartitionShape, f_idx: usize, g_idx: usize| -> usize {
            summands[shape].2 + f_idx * gamma_rank(shape) + g_idx
        };
    let mut rel_cols: Vec<Vec<(usize, BigInt)>> = Vec::new();
    // internal relations of each tensor block
    for (shape, (block, _, off)) in &summands {
        let _ = shape;
        for c in 0..block.relations.cols() {
            let col: Vec<(usize, BigInt)> = (0..block.rank)
                .filter_map(|r| {
                    let e = block.relations[(r, c)].clone();
                    (!e.is_zero()).then_some((off + r, e))
                })
                .collect();
            rel_cols.push(col);
        }
    }
    // tuple lookup per shape
    let tuple_index: BTreeMap<PartitionShape, HashMap<Vec<Vec<u64>>, usize>> = summands
        .iter()
        .map(|(s, (_, tuples, _))| {
            (
                s.clone(),
                tuples
                    .iter()
                    .enumerate()
                    .map(|(i, t)| (t.clone(), i))
                    .collect(),
            )
        })
        .collect();
    for g in generators(m.bound()) {
        match g.kind {
            GenKind::Swap(pos) => {
                // b ⊗ τ_* a = (b · τ_*) ⊗ a, with b · τ_* given by the swap
                // matrix and τ_* a permuting the tuple
                let shape = &g.shape;
                let swap = &m.swaps[&(shape.clone(), pos)];
                let f_rank = m.component(shape).rank;
                for fi in 0..f_rank {
                    for (gi, tuple) in summands[shape].1.iter().enumerate() {
                        let mut permuted = tuple.clone();
                        permuted.swap(pos, pos + 1);
                        let pgi = tuple_index[shape][&permuted];
                        let mut col: Vec<(usize, BigInt)> =
                            vec![(index(shape, fi, pgi), BigInt::one())];
                        for r in 0..f_rank {
                            let e = swap[(r, fi)].clone();
                            if !e.is_zero() {
                                col.push((index(shape, r, gi), -e));
                            }
                        }
                        rel_cols.push(col);
                    }
                }
            }
            GenKind::Merge(i, j) => {
                let src = &g.shape;
                let tgt = &g.target_shape;
                // correspondence of support points under the canonicalized
                // merge: position p of src maps to a position of tgt
                let src_rep = src.representative();
                let to_tgt: Vec<usize> = src_rep
                    .support()
                    .map(|l| {
                        g.rep_map
                            .target()
                            .position(g.rep_map.apply(l))
                            .unwrap()
                    })
                    .collect();
                let low = &m.merge_lower[&(src.clone(), i, j)];
                let up = &m.merge_upper[&(src.clone(), i, j)];
                let f_src = m.component(src).rank;
                let f_tgt = m.component(tgt).rank;
                // R1: (b' · m̂_*) ⊗ a = b' ⊗ (m̂_* a)
                //   b' ∈ F_tgt basis, a ∈ Γ^src tuple; b'·m̂_* is the upper
                //   action, m̂_* a the divided-power merge of the tuple
                for bi in 0..f_tgt {
                    for (ai, tuple) in summands[src].1.iter().enumerate() {
                        // merge the tuple along the map
                        let mut merged: Vec<Vec<u64>> =
                            vec![Vec::new(); tgt.parts()];
                        let mut coeff = BigInt::one();
                        for (p, row) in tuple.iter().enumerate() {
                            let q = to_tgt[p];
                            if merged[q].is_empty() {
                                merged[q] = row.clone();
                            } else {
                                // divided-power product picks up binomials
                                let mut out_row = vec![0u64; b];
                                for x in 0..b {
                                    out_row[x] = merged[q][x] + row[x];
                                    if merged[q][x] > 0 && row[x] > 0 {
                                        coeff *= BigInt::from(crate::arith::binomial(
                                            out_row[x],
                                            row[x],
                                        ));
                                    }
                                }
                                merged[q] = out_row;
                            }
                        }
                        if merged.iter().any(|r| r.is_empty()) {
                            // only possible when b = 0 rows exist
                            for r in merged.iter_mut() {
                                if r.is_empty() {
                                    *r = vec![0u64; b];
                                }
                            }
                        }
                        let mgi = tuple_index[tgt][&merged];
                        let mut col: Vec<(usize, BigInt)> =
                            vec![(index(tgt, bi, mgi), coeff)];
                        for r in 0..f_src {
                            let e = up[(r, bi)].clone();
                            if !e.is_zero() {
                                col.push((index(src, r, ai), -e));
                            }
                        }
                        rel_cols.push(col);
                    }
                }
                // R2: a' ⊗ (m̂^* b') = (a' · m̂^*) ⊗ b'
                //   a' ∈ F_src basis, b' ∈ Γ^tgt tuple; m̂^* splits the merged
                //   row in all ways, a'·m̂^* is the lower action
                let fibre: Vec<usize> = (0..src.parts()).filter(|&p| to_tgt[p] == to_tgt[i]).collect();
                let src_mults = src.mults();
                for ai in 0..f_src {
                    for (bi, tuple) in summands[tgt].1.iter().enumerate() {
                        let merged_row = &tuple[to_tgt[i]];
                        let row_sums: Vec<u64> =
                            fibre.iter().map(|&p| src_mults[p]).collect();
                        let splits = enumerate_margin_matrices(&row_sums, merged_row);
                        let mut col: Vec<(usize, BigInt)> = Vec::new();
                        for split in &splits {
                            let mut parts: Vec<Vec<u64>> = vec![Vec::new(); src.parts()];
                            for (r, &p) in fibre.iter().enumerate() {
                                parts[p] = split[r * b..(r + 1) * b].to_vec();
                            }
                            for p in 0..src.parts() {
                                if parts[p].is_empty() {
                                    parts[p] = tuple[to_tgt[p]].clone();
                                }
                            }
                            let sgi = tuple_index[src][&parts];
                            col.push((index(src, ai, sgi), BigInt::one()));
                        }
                        for r in 0..f_tgt {
                            let e = low[(r, ai)].clone();
                            if !e.is_zero() {
                                col.push((index(tgt, r, bi), -e));
                            }
                        }
                        rel_cols.push(col);
                    }
                }
            }
        }
    }
    let mut relations = IntMatrix::zero(total_rank, rel_cols.len());
    for (c, col) in rel_cols.iter().enumerate() {
        for (r, e) in col {
            relations[(*r, c)] = relations[(*r, c)].clone() + e;
        }
    }
    FPModule::new(total_rank, relations, k_mod.ring)
}

/// The box product: the component at a shape is the sum over splittings of
/// its representative of tensor products of the factors' components, and
/// generators act through the unique shuffle factorization.
pub fn box_product(
    m: &SchModulePresentation,
    n: &SchModulePresentation,
) -> Result<SchModulePresentation> {
    let bound = m.bound() + n.bound();
    // blocks per shape: the splittings of the representative
    struct Blocks {
        splittings: Vec<(Multiset, Multiset)>,
        modules: Vec<FPModule>,
        offsets: Vec<usize>,
        total: FPModule,
    }
    let mut blocks: BTreeMap<PartitionShape, Blocks> = BTreeMap::new();
    let mut shapes = Vec::new();
    for d in 0..=bound {
        shapes.extend(PartitionShape::all_of_cardinality(d));
    }
    for shape in &shapes {
        let rep = shape.representative();
        let splittings = rep.splittings();
        let mut modules = Vec::new();
        let mut offsets = Vec::new();
        let mut total = FPModule::free(0, Ring::Int);
        let mut off = 0usize;
        for (a, bpart) in &splittings {
            let ma = if a.cardinality() <= m.bound() {
                m.component(&a.canonical_shape()).clone()
            } else {
                FPModule::free(0, Ring::Int)
            };
            let nb = if bpart.cardinality() <= n.bound() {
                n.component(&bpart.canonical_shape()).clone()
            } else {
                FPModule::free(0, Ring::Int)
            };
            let t = ma.tensor(&nb);
            offsets.push(off);
            off += t.rank;
            total = total.direct_sum(&t);
            modules.push(t);
        }
        blocks.insert(
            shape.clone(),
            Blocks { splittings, modules, offsets, total },
        );
    }
    let components: BTreeMap<PartitionShape, FPModule> = blocks
        .iter()
        .map(|(s, b)| (s.clone(), b.total.clone()))
        .collect();

    // action of a generator morphism y: rep(src) → rep(tgt) on the blocks:
    // compose with the block's shuffle, refactor each resulting graph
    let act = |y: &SchMorphism, src: &PartitionShape, tgt: &PartitionShape| -> Result<IntMatrix> {
        let src_blocks = &blocks[src];
        let tgt_blocks = &blocks[tgt];
        let mut out = IntMatrix::zero(tgt_blocks.total.rank, src_blocks.total.rank);
        for (bi, (a, bpart)) in src_blocks.splittings.iter().enumerate() {
            if src_blocks.modules[bi].rank == 0 {
                continue;
            }
            let du = a.disjoint_union(bpart);
            let shuffle =
                crate::multijection::MultiShuffle::new(vec![a.clone(), bpart.clone()], src.representative())?;
            let composite = SchMorphism::compose(
                y,
                &SchMorphism::lowerstar(Ring::Int, &shuffle.underlying),
            )?;
            for (w, c) in composite.terms() {
                let c = c.as_bigint().unwrap();
                let fac = shuffle_factorize(w, &du)?;
                let (a2, b2) = (
                    fac.shuffle.heap[0].clone(),
                    fac.shuffle.heap[1].clone(),
                );
                let ti = tgt_blocks
                    .splittings
                    .iter()
                    .position(|(x, y2)| x == &a2 && y2 == &b2)
                    .ok_or_else(|| {
                        Error::InvariantViolation("factorized splitting not found".into())
                    })?;
                if tgt_blocks.modules[ti].rank == 0 {
                    continue;
                }
                if a2.cardinality() > m.bound() || b2.cardinality() > n.bound() {
                    continue;
                }
                let am = m.act_graph(&fac.left);
                let bm = n.act_graph(&fac.right);
                let kron = am.kronecker(&bm).scale(&c);
                let (ro, co) = (tgt_blocks.offsets[ti], src_blocks.offsets[bi]);
                for r in 0..kron.rows() {
                    for cc in 0..kron.cols() {
                        if !kron[(r, cc)].is_zero() {
                            out[(ro + r, co + cc)] =
                                out[(ro + r, co + cc)].clone() + &kron[(r, cc)];
                        }
                    }
                }
            }
        }
        Ok(out)
    };

    let mut swaps = BTreeMap::new();
    let mut merge_lower = BTreeMap::new();
    let mut merge_upper = BTreeMap::new();
    for g in generators(bound) {
        match g.kind {
            GenKind::Swap(pos) => {
                let y = SchMorphism::lowerstar(Ring::Int, &g.rep_map);
                swaps.insert((g.shape.clone(), pos), act(&y, &g.shape, &g.shape)?);
            }
            GenKind::Merge(i, j) => {
                let low = SchMorphism::lowerstar(Ring::Int, &g.rep_map);
                let up = SchMorphism::upperstar(Ring::Int, &g.rep_map);
                merge_lower.insert(
                    (g.shape.clone(), i, j),
                    act(&low, &g.shape, &g.target_shape)?,
                );
                merge_upper.insert(
                    (g.shape.clone(), i, j),
                    act(&up, &g.target_shape, &g.shape)?,
                );
            }
        }
    }
    SchModulePresentation::from_parts(bound, components, swaps, merge_lower, merge_upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(s: &str) -> Multiset {
        s.parse().unwrap()
    }

    fn shape(s: &str) -> PartitionShape {
        ms(s).canonical_shape()
    }

    #[test]
    fn adjacent_words_compose_back() {
        for perm in [
            vec![0usize, 1, 2],
            vec![1, 0, 2],
            vec![2, 1, 0],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![3, 2, 1, 0],
        ] {
            let word = adjacent_word(&perm);
            // compose τ_{w[0]} ∘ τ_{w[1]} ∘ … (last letter first)
            let mut v: Vec<usize> = (0..perm.len()).collect();
            for &k in word.iter().rev() {
                v.swap(k, k + 1);
                let w: Vec<usize> = v.clone();
                let _ = w;
            }
            // v now represents the permutation as a positions rearrangement;
            // check it maps p to perm[p]
            let composed: Vec<usize> = {
                // apply letters right-to-left as value swaps
                let mut f: Vec<usize> = (0..perm.len()).collect();
                for &k in word.iter().rev() {
                    f = f
                        .iter()
                        .map(|&x| {
                            if x == k {
                                k + 1
                            } else if x == k + 1 {
                                k
                            } else {
                                x
                            }
                        })
                        .collect();
                }
                f
            };
            assert_eq!(composed, perm, "word {word:?}");
        }
    }

    #[test]
    fn representable_component_ranks() {
        let r = representable(&ms("[2]"), 2);
        assert_eq!(r.component(&shape("[2]")).rank, 1);
        assert_eq!(r.component(&shape("[1,1]")).rank, 1);
        let r = representable(&ms("[1,1]"), 2);
        assert_eq!(r.component(&shape("[2]")).rank, 1);
        assert_eq!(r.component(&shape("[1,1]")).rank, 2);
        let r = representable(&Multiset::empty(), 0);
        assert_eq!(r.component(&shape("[]")).rank, 1);
    }

    #[test]
    fn representable_actions_validate() {
        for a0 in ["[2]", "[1,1]", "[2,1]", "[3]"] {
            let r = representable(&ms(a0), ms(a0).cardinality());
            r.validate().unwrap();
        }
    }

    #[test]
    fn eval_on_free_ranks() {
        // representable([2]) on width 2 has total rank dim Γ²(R²) = 3
        let r = representable(&ms("[2]"), 2);
        let v = eval_on_free(&r, 2);
        assert_eq!(v.total.invariants().to_string(), "Z^3");
        assert_eq!(v.grading.len(), 1 + 2 + 3); // degrees 0,1,2 partitions over 2 labels

        // representable([1]) is the identity functor: rank m
        let r = representable(&ms("{1:1}"), 1);
        for width in 1..=3usize {
            let v = eval_on_free(&r, width);
            assert_eq!(v.total.invariants().free_rank, width);
        }

        // zero module
        let zero = SchModulePresentation::from_parts(
            0,
            [(shape("[]"), FPModule::free(0, Ring::Int))].into(),
            BTreeMap::new(),
            BTreeMap::new(),
            BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(eval_on_free(&zero, 3).total.rank, 0);
    }

    #[test]
    fn eval_on_free_matches_gamma_dimension() {
        for (a0, width) in [("[2]", 2usize), ("[2]", 3), ("[1,1]", 2), ("[2,1]", 2), ("[3]", 3)] {
            let alpha = ms(a0);
            let r = representable(&alpha, alpha.cardinality());
            let v = eval_on_free(&r, width);
            assert_eq!(
                v.total.invariants().free_rank,
                gamma::basis(&alpha, width).dimension(),
                "at {a0} width {width}"
            );
        }
    }

    #[test]
    fn eval_on_presented_examples() {
        // representable([2]) on Z/2 is Γ²(Z/2) = Z/4
        let r = representable(&ms("[2]"), 2);
        let k = FPModule::cyclic(2, Ring::Int);
        let v = eval_on_presented(&r, &k).unwrap();
        assert_eq!(v.invariants().to_string(), "Z/4");

        // representable([1]) is the identity functor
        let r1 = representable(&ms("{1:1}"), 1);
        for k in [FPModule::cyclic(6, Ring::Int), FPModule::free(2, Ring::Int)] {
            let v = eval_on_presented(&r1, &k).unwrap();
            assert_eq!(v.invariants(), k.invariants());
        }

        // representable([1,1]) on Z/2 is Γ¹⊗Γ¹(Z/2) = Z/2
        let r11 = representable(&ms("[1,1]"), 2);
        let v = eval_on_presented(&r11, &FPModule::cyclic(2, Ring::Int)).unwrap();
        assert_eq!(v.invariants().to_string(), "Z/2");
    }

    #[test]
    fn eval_on_presented_matches_gamma_of_presentation() {
        let mods = [
            FPModule::cyclic(2, Ring::Int),
            FPModule::cyclic(4, Ring::Int),
            FPModule::free(1, Ring::Int).direct_sum(&FPModule::cyclic(2, Ring::Int)),
        ];
        for a0 in ["[2]", "[3]", "[2,1]"] {
            let alpha = ms(a0);
            let r = representable(&alpha, alpha.cardinality());
            for k in &mods {
                let via_module = eval_on_presented(&r, k).unwrap();
                let direct = gamma_shape_of_presentation(&alpha.canonical_shape(), k);
                assert_eq!(
                    via_module.invariants(),
                    direct.invariants(),
                    "at {a0} on {:?}",
                    k.invariants().to_string()
                );
            }
        }
    }

    #[test]
    fn homogeneous_split_concentrates_degrees() {
        let r = representable(&ms("[2]"), 2);
        let pieces = r.homogeneous_split();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].0, 2);
        // graphs across degrees do not exist
        assert!(hom_basis(&ms("[2]"), &ms("{1:1}")).is_empty());
    }

    #[test]
    fn box_product_of_identity_functors() {
        let r1 = representable(&ms("{1:1}"), 1);
        let p = box_product(&r1, &r1).unwrap();
        assert_eq!(p.component(&shape("[2]")).rank, 1);
        assert_eq!(p.component(&shape("[1,1]")).rank, 2);
        p.validate().unwrap();
        // eval multiplicativity at width 2: 4 = 2 × 2
        let v = eval_on_free(&p, 2);
        assert_eq!(v.total.invariants().free_rank, 4);
        // degree additivity: nonzero only in degree 2
        for (d, piece) in p.homogeneous_split() {
            let total: usize = piece.components().values().map(|m| m.rank).sum();
            if total > 0 {
                assert_eq!(d, 2);
            }
        }
    }

    #[test]
    fn box_product_with_zero_is_zero() {
        let r1 = representable(&ms("{1:1}"), 1);
        let zero = SchModulePresentation::from_parts(
            1,
            [
                (shape("[]"), FPModule::free(0, Ring::Int)),
                (shape("[1]"), FPModule::free(0, Ring::Int)),
            ]
            .into(),
            BTreeMap::new(),
            BTreeMap::new(),
            BTreeMap::new(),
        )
        .unwrap();
        let p = box_product(&r1, &zero).unwrap();
        for (_, m) in p.components() {
            assert_eq!(m.rank, 0);
        }
    }

    #[test]
    fn box_product_ranks_match_hom_into_tensor_square() {
        // the tensor-square functor has F_γ = Hom(Γ^γ, Γ¹⊗Γ¹): ranks 1 at
        // [2] and 2 at [1,1] equal the margin-matrix counts into [1,1]
        let r1 = representable(&ms("{1:1}"), 1);
        let p = box_product(&r1, &r1).unwrap();
        assert_eq!(
            p.component(&shape("[2]")).rank,
            hom_basis(&ms("[2]"), &ms("[1,1]")).len()
        );
        assert_eq!(
            p.component(&shape("[1,1]")).rank,
            hom_basis(&ms("[1,1]"), &ms("[1,1]")).len()
        );
    }
}
