//! Multijections: support maps whose fibre multiplicity sums reproduce the
//! target multiplicities.
//!
//! These are the morphisms of the category of finite multisets.  They
//! compose, carry a multiplicative positive-integer degree
//! `deg(f) = target! / source!`, admit weak fibre products (computed here as
//! explicit margin matrices per target point), and factor into isomorphisms
//! and two-point merges.

use num_bigint::BigUint;
use num_traits::One;

use crate::arith;
use crate::error::{Error, Result};
use crate::multiset::{DisjointUnion, Label, Multiset};

/// A multijection `source → target`: a total map on supports with
/// `μ_target(t) = Σ_{f(s)=t} μ_source(s)` for every target point.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Multijection {
    source: Multiset,
    target: Multiset,
    /// sorted by source label; total on the source support
    map: Vec<(Label, Label)>,
}

impl Multijection {
    pub fn new(source: Multiset, target: Multiset, mut map: Vec<(Label, Label)>) -> Result<Self> {
        map.sort_by_key(|&(s, _)| s);
        map.dedup();
        if map.len() != source.support_size()
            || map
                .iter()
                .zip(source.support())
                .any(|(&(s, _), expect)| s != expect)
        {
            return Err(Error::InvalidMultijection(
                "map must be defined exactly on the source support".into(),
            ));
        }
        for &(_, t) in &map {
            if target.multiplicity(t) == 0 {
                return Err(Error::InvalidMultijection(format!(
                    "image label {t} is not in the target support"
                )));
            }
        }
        for (t, m) in target.entries() {
            let fibre_sum: u64 = map
                .iter()
                .filter(|&&(_, u)| u == *t)
                .map(|&(s, _)| source.multiplicity(s))
                .sum();
            if fibre_sum != *m {
                return Err(Error::InvalidMultijection(format!(
                    "fibre over {t} sums to {fibre_sum}, target multiplicity is {m}"
                )));
            }
        }
        Ok(Multijection { source, target, map })
    }

    /// Build the target from fibre sums (the induced multijection).
    pub fn induced(source: Multiset, map: Vec<(Label, Label)>) -> Result<Self> {
        let mut sorted = map;
        sorted.sort_by_key(|&(s, _)| s);
        if sorted.len() != source.support_size()
            || sorted
                .iter()
                .zip(source.support())
                .any(|(&(s, _), expect)| s != expect)
        {
            return Err(Error::InvalidMultijection(
                "map must be defined exactly on the source support".into(),
            ));
        }
        let target = Multiset::from_entries(
            sorted
                .iter()
                .map(|&(s, t)| (t, source.multiplicity(s))),
        );
        Ok(Multijection { source, target, map: sorted })
    }

    pub fn identity(ms: &Multiset) -> Self {
        Multijection {
            source: ms.clone(),
            target: ms.clone(),
            map: ms.support().map(|l| (l, l)).collect(),
        }
    }

    pub fn source(&self) -> &Multiset {
        &self.source
    }

    pub fn target(&self) -> &Multiset {
        &self.target
    }

    pub fn map(&self) -> &[(Label, Label)] {
        &self.map
    }

    pub fn apply(&self, l: Label) -> Label {
        let i = self
            .map
            .binary_search_by_key(&l, |&(s, _)| s)
            .expect("label not in source support");
        self.map[i].1
    }

    /// `g ∘ f`, defined when `f.target == g.source`.
    pub fn compose(g: &Multijection, f: &Multijection) -> Result<Multijection> {
        if f.target != g.source {
            return Err(Error::EndpointMismatch(format!(
                "composing {} -> {} with {} -> {}",
                f.source, f.target, g.source, g.target
            )));
        }
        let map = f.map.iter().map(|&(s, t)| (s, g.apply(t))).collect();
        Ok(Multijection {
            source: f.source.clone(),
            target: g.target.clone(),
            map,
        })
    }

    /// `deg(f) = target!/source!`, a product of multinomial coefficients,
    /// one per fibre.
    pub fn degree(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (t, _) in self.target.entries() {
            let parts: Vec<u64> = self
                .map
                .iter()
                .filter(|&&(_, u)| u == *t)
                .map(|&(s, _)| self.source.multiplicity(s))
                .collect();
            acc *= arith::multinomial(&parts);
        }
        acc
    }

    pub fn is_isomorphism(&self) -> bool {
        self.map.len() == self.target.support_size()
            && self
                .map
                .iter()
                .all(|&(s, t)| self.source.multiplicity(s) == self.target.multiplicity(t))
    }

    pub fn inverse(&self) -> Option<Multijection> {
        if !self.is_isomorphism() {
            return None;
        }
        let map = self.map.iter().map(|&(s, t)| (t, s)).collect();
        Multijection::new(self.target.clone(), self.source.clone(), map).ok()
    }

    /// One final multijection (single-point target) per target support
    /// point, restricting the source to the fibre.
    pub fn final_decomposition(&self) -> Vec<Multijection> {
        self.target
            .entries()
            .iter()
            .map(|&(t, m)| {
                let fibre: Vec<(Label, Label)> = self
                    .map
                    .iter()
                    .filter(|&&(_, u)| u == t)
                    .copied()
                    .collect();
                let source = Multiset::from_entries(
                    fibre.iter().map(|&(s, _)| (s, self.source.multiplicity(s))),
                );
                Multijection {
                    source,
                    target: Multiset::singleton(t, m),
                    map: fibre,
                }
            })
            .collect()
    }

    /// Disjoint union of two multijections (the monoidal structure); the
    /// relabelings of both endpoints are returned alongside.
    pub fn disjoint_union(
        f: &Multijection,
        g: &Multijection,
    ) -> (Multijection, DisjointUnion, DisjointUnion) {
        let src = f.source.disjoint_union(&g.source);
        let tgt = f.target.disjoint_union(&g.target);
        let relabel = |du: &DisjointUnion, left: bool, l: Label| -> Label {
            let table = if left { &du.left } else { &du.right };
            table.iter().find(|&&(o, _)| o == l).unwrap().1
        };
        let mut map = Vec::new();
        for &(s, t) in &f.map {
            map.push((relabel(&src, true, s), relabel(&tgt, true, t)));
        }
        for &(s, t) in &g.map {
            map.push((relabel(&src, false, s), relabel(&tgt, false, t)));
        }
        let u = Multijection::new(src.result.clone(), tgt.result.clone(), map)
            .expect("disjoint union is a multijection");
        (u, src, tgt)
    }

    /// Write `self` as a chain of two-point merge steps followed by an
    /// isomorphism.  Steps compose in list order (first step applied first)
    /// and reproduce `self` exactly.  Strategy: always merge the two
    /// smallest-label points of the largest fibre.
    pub fn elementary_factorization(&self) -> Vec<FactorStep> {
        let mut steps = Vec::new();
        let mut current = self.clone();
        loop {
            // largest fibre (by support count), ties to the smallest target label
            let mut best: Option<(usize, Label)> = None;
            for (t, _) in current.target.entries() {
                let count = current.map.iter().filter(|&&(_, u)| u == *t).count();
                if count >= 2 {
                    match best {
                        None => best = Some((count, *t)),
                        Some((c, _)) if count > c => best = Some((count, *t)),
                        _ => {}
                    }
                }
            }
            let Some((_, t)) = best else { break };
            let mut fibre: Vec<Label> = current
                .map
                .iter()
                .filter(|&&(_, u)| u == t)
                .map(|&(s, _)| s)
                .collect();
            fibre.sort();
            let (a, b) = (fibre[0], fibre[1]);
            // merge b into a
            let merged = Multiset::from_entries(current.source.entries().iter().map(
                |&(l, m)| {
                    if l == b {
                        (a, m)
                    } else {
                        (l, m)
                    }
                },
            ));
            let step_map: Vec<(Label, Label)> = current
                .source
                .support()
                .map(|l| (l, if l == b { a } else { l }))
                .collect();
            let step = Multijection::new(current.source.clone(), merged.clone(), step_map)
                .expect("merge step is a multijection");
            let rest_map: Vec<(Label, Label)> =
                merged.support().map(|l| (l, current.apply(l))).collect();
            current = Multijection::new(merged, current.target.clone(), rest_map)
                .expect("residual map is a multijection");
            steps.push(FactorStep::Merge(step));
        }
        if current != Multijection::identity(&current.source) {
            steps.push(FactorStep::Iso(current));
        }
        steps
    }

    /// Recompose a factorization (steps applied in list order).
    pub fn compose_steps(source: &Multiset, steps: &[FactorStep]) -> Multijection {
        let mut acc = Multijection::identity(source);
        for step in steps {
            acc = Multijection::compose(step.multijection(), &acc).expect("chained steps");
        }
        acc
    }

    /// Every multijection between the two multisets, in lexicographic order
    /// of the map vectors.
    pub fn all_between(source: &Multiset, target: &Multiset) -> Vec<Multijection> {
        if source.cardinality() != target.cardinality() {
            return Vec::new();
        }
        let src: Vec<(Label, u64)> = source.entries().to_vec();
        let tgt: Vec<(Label, u64)> = target.entries().to_vec();
        let mut out = Vec::new();
        let mut assignment: Vec<usize> = Vec::new();
        let mut remaining: Vec<u64> = tgt.iter().map(|&(_, m)| m).collect();
        #[allow(clippy::too_many_arguments)]
        fn rec(
            src: &[(Label, u64)],
            tgt: &[(Label, u64)],
            assignment: &mut Vec<usize>,
            remaining: &mut Vec<u64>,
            out: &mut Vec<Multijection>,
            source: &Multiset,
            target: &Multiset,
        ) {
            if assignment.len() == src.len() {
                if remaining.iter().all(|&r| r == 0) {
                    let map = assignment
                        .iter()
                        .enumerate()
                        .map(|(i, &j)| (src[i].0, tgt[j].0))
                        .collect();
                    out.push(Multijection {
                        source: source.clone(),
                        target: target.clone(),
                        map,
                    });
                }
                return;
            }
            let i = assignment.len();
            let m = src[i].1;
            for j in 0..tgt.len() {
                if remaining[j] >= m {
                    remaining[j] -= m;
                    assignment.push(j);
                    rec(src, tgt, assignment, remaining, out, source, target);
                    assignment.pop();
                    remaining[j] += m;
                }
            }
        }
        rec(&src, &tgt, &mut assignment, &mut remaining, &mut out, source, target);
        out
    }
}

/// One step of an elementary factorization.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FactorStep {
    Iso(Multijection),
    Merge(Multijection),
}

impl FactorStep {
    pub fn multijection(&self) -> &Multijection {
        match self {
            FactorStep::Iso(f) | FactorStep::Merge(f) => f,
        }
    }
}

/// A span: two multijections out of a common apex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Span {
    pub apex: Multiset,
    pub left: Multijection,
    pub right: Multijection,
}

impl Span {
    pub fn new(left: Multijection, right: Multijection) -> Result<Self> {
        if left.source() != right.source() {
            return Err(Error::EndpointMismatch(
                "span legs must share an apex".into(),
            ));
        }
        Ok(Span { apex: left.source().clone(), left, right })
    }

    /// Span isomorphism: an apex isomorphism commuting with both legs.
    /// Tested by exhaustive support matching.
    pub fn is_isomorphic_to(&self, other: &Span) -> bool {
        if self.left.target() != other.left.target()
            || self.right.target() != other.right.target()
            || self.apex.canonical_shape() != other.apex.canonical_shape()
        {
            return false;
        }
        for iso in Multijection::all_between(&self.apex, &other.apex) {
            if !iso.is_isomorphism() {
                continue;
            }
            let l = Multijection::compose(&other.left, &iso).unwrap();
            let r = Multijection::compose(&other.right, &iso).unwrap();
            if l == self.left && r == self.right {
                return true;
            }
        }
        false
    }
}

/// Weak fibre product of the cospan `f: A → C ← B : g`: one span per
/// submultiset of `A × B` supported on pairs with `f(s) = g(t)` whose two
/// projections are multijections.  Per target point `c` this is exactly a
/// nonnegative integer matrix on `f⁻¹(c) × g⁻¹(c)` with row sums `μ_A` and
/// column sums `μ_B`; components are enumerated in lexicographic order of
/// those margin matrices, target points in canonical order.
pub fn pullback_components(f: &Multijection, g: &Multijection) -> Result<Vec<Span>> {
    if f.target() != g.target() {
        return Err(Error::EndpointMismatch(
            "pullback needs a common target".into(),
        ));
    }
    let gamma = f.target();
    // per target point: the two fibres and all margin matrices between them
    let mut blocks: Vec<(Vec<Label>, Vec<Label>, Vec<Vec<u64>>)> = Vec::new();
    for (c, _) in gamma.entries() {
        let rows: Vec<Label> = f
            .map()
            .iter()
            .filter(|&&(_, u)| u == *c)
            .map(|&(s, _)| s)
            .collect();
        let cols: Vec<Label> = g
            .map()
            .iter()
            .filter(|&&(_, u)| u == *c)
            .map(|&(t, _)| t)
            .collect();
        let row_sums: Vec<u64> = rows.iter().map(|&s| f.source().multiplicity(s)).collect();
        let col_sums: Vec<u64> = cols.iter().map(|&t| g.source().multiplicity(t)).collect();
        let matrices = enumerate_margin_matrices(&row_sums, &col_sums);
        blocks.push((rows, cols, matrices));
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; blocks.len()];
    'outer: loop {
        // assemble the apex from the selected per-block matrices
        let mut cells: Vec<(Label, Label, u64)> = Vec::new();
        for (b, (rows, cols, mats)) in blocks.iter().enumerate() {
            let mat = &mats[choice[b]];
            for (i, &s) in rows.iter().enumerate() {
                for (j, &t) in cols.iter().enumerate() {
                    let v = mat[i * cols.len() + j];
                    if v > 0 {
                        cells.push((s, t, v));
                    }
                }
            }
        }
        cells.sort_by_key(|&(s, t, _)| (s, t));
        let apex = Multiset::from_entries(
            cells
                .iter()
                .enumerate()
                .map(|(i, &(_, _, v))| (Label(i as u32 + 1), v)),
        );
        let left_map: Vec<(Label, Label)> = cells
            .iter()
            .enumerate()
            .map(|(i, &(s, _, _))| (Label(i as u32 + 1), s))
            .collect();
        let right_map: Vec<(Label, Label)> = cells
            .iter()
            .enumerate()
            .map(|(i, &(_, t, _))| (Label(i as u32 + 1), t))
            .collect();
        let left = Multijection::new(apex.clone(), f.source().clone(), left_map)?;
        let right = Multijection::new(apex.clone(), g.source().clone(), right_map)?;
        out.push(Span { apex, left, right });
        // odometer over blocks, last block fastest
        let mut b = blocks.len();
        loop {
            if b == 0 {
                break 'outer;
            }
            b -= 1;
            if choice[b] + 1 < blocks[b].2.len() {
                choice[b] += 1;
                for c in choice[b + 1..].iter_mut() {
                    *c = 0;
                }
                continue 'outer;
            }
        }
    }
    Ok(out)
}

/// All nonnegative integer matrices (row-major, `rows.len() × cols.len()`)
/// with the given row and column sums, in lexicographic order of the
/// flattened entries.  Empty when the totals differ.
pub fn enumerate_margin_matrices(rows: &[u64], cols: &[u64]) -> Vec<Vec<u64>> {
    let total_r: u64 = rows.iter().sum();
    let total_c: u64 = cols.iter().sum();
    if total_r != total_c {
        return Vec::new();
    }
    if rows.is_empty() || cols.is_empty() {
        // only the empty matrix, possible exactly when both totals are zero
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut matrix = vec![0u64; rows.len() * cols.len()];
    let mut col_rem: Vec<u64> = cols.to_vec();
    fill_row(rows, cols, 0, 0, rows[0], &mut matrix, &mut col_rem, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn fill_row(
    rows: &[u64],
    cols: &[u64],
    r: usize,
    c: usize,
    left: u64,
    matrix: &mut Vec<u64>,
    col_rem: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    let width = cols.len();
    if c == width {
        if left != 0 {
            return;
        }
        if r + 1 == rows.len() {
            if col_rem.iter().all(|&v| v == 0) {
                out.push(matrix.clone());
            }
            return;
        }
        fill_row(rows, cols, r + 1, 0, rows[r + 1], matrix, col_rem, out);
        return;
    }
    // capacity of the remaining columns must cover what is left to place
    let suffix_cap: u64 = col_rem[c + 1..].iter().sum();
    let lo = left.saturating_sub(suffix_cap);
    let hi = left.min(col_rem[c]);
    for v in lo..=hi {
        matrix[r * width + c] = v;
        col_rem[c] -= v;
        fill_row(rows, cols, r, c + 1, left - v, matrix, col_rem, out);
        col_rem[c] += v;
        matrix[r * width + c] = 0;
    }
}

/// A multi-shuffle: the induced multijection from a disjoint union of heap
/// members onto their pointwise sum.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiShuffle {
    pub heap: Vec<Multiset>,
    pub target: Multiset,
    pub underlying: Multijection,
}

impl MultiShuffle {
    /// Build the shuffle for an explicit heap; the members must sum to the
    /// target pointwise.
    pub fn new(heap: Vec<Multiset>, target: Multiset) -> Result<Self> {
        let mut sum = Multiset::empty();
        for h in &heap {
            sum = sum.sum(h);
        }
        if sum != target {
            return Err(Error::InvalidMultijection(
                "heap does not sum to the target".into(),
            ));
        }
        // canonical disjoint union of the heap: fresh labels in heap order
        let mut entries = Vec::new();
        let mut map = Vec::new();
        let mut next: u32 = 1;
        for h in &heap {
            for &(l, m) in h.entries() {
                entries.push((Label(next), m));
                map.push((Label(next), l));
                next += 1;
            }
        }
        let source = Multiset::from_entries(entries);
        let underlying = Multijection::new(source, target.clone(), map)?;
        Ok(MultiShuffle { heap, target, underlying })
    }
}

/// All `k`-heaped multi-shuffles onto `target`, one per ordered `k`-tuple of
/// multisets summing to it, in splitting order.
pub fn enumerate_multishuffles(heaps: usize, target: &Multiset) -> Vec<MultiShuffle> {
    target
        .splittings_k(heaps)
        .into_iter()
        .map(|heap| MultiShuffle::new(heap, target.clone()).expect("valid splitting"))
        .collect()
}
