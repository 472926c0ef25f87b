//! Divided-power functors on free modules, realized in the weight basis, and
//! the realization functor that turns formal graph sums into exact integer
//! matrices.  That functor is the master oracle: composition of morphisms
//! must match multiplication of realized matrices.
//!
//! For a multiset `α` and width `m`, the space `Γ^α(R^m)` has one basis
//! element per matrix of nonnegative integers indexed `support(α) × {1..m}`
//! whose row sums are the multiplicities — a [`WeightMonomial`], standing
//! for `∏_s ∏_i γ_{exps[s,i]}(e_i)`.  Pushforward merges rows with
//! multinomial coefficients (divided-power multiplication); pullback splits
//! rows in all ways with coefficient one (the comultiplication).
//!
//! The invariant-tensor construction is implemented separately for small
//! cardinalities as an independent check ([`invariants_oracle`]).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::exactlin::{FPModule, IntMatrix};
use crate::exec;
use crate::multijection::{enumerate_margin_matrices, Multijection};
use crate::multiset::{Label, Multiset};
use crate::ring::{Coeff, Ring};
use crate::schurcat::{GraphMorphism, SchMorphism};

/// Basis element of `Γ^α(R^m)`: row sums of `exps` equal the multiplicities
/// of `shape`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct WeightMonomial {
    pub shape: Multiset,
    pub width: usize,
    /// row-major, `support(shape) × width`
    pub exps: Vec<u64>,
}

/// The full canonically ordered basis of `Γ^α(R^m)`.
#[derive(Clone, Debug)]
pub struct GammaSpace {
    pub shape: Multiset,
    pub width: usize,
    pub basis: Vec<WeightMonomial>,
    index: HashMap<Vec<u64>, usize>,
}

impl GammaSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, exps: &[u64]) -> Option<usize> {
        self.index.get(exps).copied()
    }
}

/// Weak compositions of `n` into `k` parts, lexicographically ascending.
fn weak_compositions(n: u64, k: usize) -> Vec<Vec<u64>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut parts = vec![0u64; k];
    fn rec(parts: &mut Vec<u64>, i: usize, left: u64, out: &mut Vec<Vec<u64>>) {
        if i + 1 == parts.len() {
            parts[i] = left;
            out.push(parts.clone());
            return;
        }
        for v in 0..=left {
            parts[i] = v;
            rec(parts, i + 1, left - v, out);
        }
    }
    rec(&mut parts, 0, n, &mut out);
    out
}

/// The basis of `Γ^shape(R^width)`, in lexicographic order of the flattened
/// exponent matrices.  Its dimension is `∏_s C(μ(s)+m−1, m−1)`.
pub fn basis(shape: &Multiset, width: usize) -> GammaSpace {
    let per_row: Vec<Vec<Vec<u64>>> = shape
        .entries()
        .iter()
        .map(|&(_, m)| weak_compositions(m, width))
        .collect();
    let mut flat: Vec<Vec<u64>> = vec![vec![]];
    for row_choices in &per_row {
        let mut next = Vec::with_capacity(flat.len() * row_choices.len());
        for prefix in &flat {
            for row in row_choices {
                let mut e = prefix.clone();
                e.extend_from_slice(row);
                next.push(e);
            }
        }
        flat = next;
    }
    let basis: Vec<WeightMonomial> = flat
        .into_iter()
        .map(|exps| WeightMonomial { shape: shape.clone(), width, exps })
        .collect();
    let index = basis
        .iter()
        .enumerate()
        .map(|(i, m)| (m.exps.clone(), i))
        .collect();
    GammaSpace { shape: shape.clone(), width, basis, index }
}

/// Matrix of `f_*: Γ^{source}(R^m) → Γ^{target}(R^m)` on weight bases:
/// rows merge along the fibres of `f`, each column of the merged row picking
/// up one multinomial coefficient.
pub fn realize_lower(f: &Multijection, width: usize) -> IntMatrix {
    let src = basis(f.source(), width);
    let tgt = basis(f.target(), width);
    let mut out = IntMatrix::zero(tgt.dimension(), src.dimension());
    let src_points: Vec<Label> = f.source().support().collect();
    let tgt_points: Vec<Label> = f.target().support().collect();
    for (col, mono) in src.basis.iter().enumerate() {
        let mut exps = vec![0u64; tgt_points.len() * width];
        for (si, &s) in src_points.iter().enumerate() {
            let ti = f.target().position(f.apply(s)).unwrap();
            for i in 0..width {
                exps[ti * width + i] += mono.exps[si * width + i];
            }
        }
        let mut coeff = BigInt::one();
        for (ti, _) in tgt_points.iter().enumerate() {
            for i in 0..width {
                let parts: Vec<u64> = src_points
                    .iter()
                    .enumerate()
                    .filter(|&(_, &s)| f.target().position(f.apply(s)) == Some(ti))
                    .map(|(si, _)| mono.exps[si * width + i])
                    .filter(|&v| v > 0)
                    .collect();
                if parts.len() > 1 {
                    coeff *= BigInt::from(arith::multinomial(&parts));
                }
            }
        }
        let row = tgt.index_of(&exps).expect("merged monomial is in the basis");
        out[(row, col)] = coeff;
    }
    out
}

/// Matrix of `f^*: Γ^{target}(R^m) → Γ^{source}(R^m)`: each target row
/// splits into its fibre rows in every way compatible with the source
/// multiplicities, coefficient one per splitting.
pub fn realize_upper(f: &Multijection, width: usize) -> IntMatrix {
    let src = basis(f.source(), width);
    let tgt = basis(f.target(), width);
    let src_points: Vec<Label> = f.source().support().collect();
    let mut out = IntMatrix::zero(src.dimension(), tgt.dimension());
    let cols = exec::map_range(tgt.dimension(), |col| {
        let mono = &tgt.basis[col];
        // per target point: a margin matrix fibre-points × width with row
        // sums the source multiplicities and column sums the monomial row
        let mut per_point: Vec<(Vec<usize>, Vec<Vec<u64>>)> = Vec::new();
        for (ti, &(t, _)) in f.target().entries().iter().enumerate() {
            let fibre: Vec<usize> = src_points
                .iter()
                .enumerate()
                .filter(|&(_, &s)| f.apply(s) == t)
                .map(|(si, _)| si)
                .collect();
            let row_sums: Vec<u64> = fibre
                .iter()
                .map(|&si| f.source().multiplicity(src_points[si]))
                .collect();
            let col_sums: Vec<u64> = (0..width).map(|i| mono.exps[ti * width + i]).collect();
            per_point.push((fibre, enumerate_margin_matrices(&row_sums, &col_sums)));
        }
        let mut hits: Vec<usize> = Vec::new();
        let mut choice = vec![0usize; per_point.len()];
        if per_point.iter().all(|(_, ms)| !ms.is_empty()) {
            'outer: loop {
                let mut exps = vec![0u64; src_points.len() * width];
                for ((fibre, ms), &pick) in per_point.iter().zip(&choice) {
                    let m = &ms[pick];
                    for (r, &si) in fibre.iter().enumerate() {
                        for i in 0..width {
                            exps[si * width + i] = m[r * width + i];
                        }
                    }
                }
                hits.push(src.index_of(&exps).expect("split monomial is in the basis"));
                let mut b = per_point.len();
                loop {
                    if b == 0 {
                        break 'outer;
                    }
                    b -= 1;
                    if choice[b] + 1 < per_point[b].1.len() {
                        choice[b] += 1;
                        for c in choice[b + 1..].iter_mut() {
                            *c = 0;
                        }
                        continue 'outer;
                    }
                }
            }
        }
        hits
    });
    for (col, hits) in cols.into_iter().enumerate() {
        for row in hits {
            out[(row, col)] += BigInt::one();
        }
    }
    out
}

/// Realization of a single graph: factor through its span and compose
/// pushforward after pullback.
pub fn realize_graph(graph: &GraphMorphism, width: usize) -> IntMatrix {
    let span = graph.span();
    realize_lower(&span.right, width).mul(&realize_upper(&span.left, width))
}

/// An exact matrix over one of the coefficient rings.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoeffMatrix {
    pub ring: Ring,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Coeff>,
}

impl CoeffMatrix {
    pub fn zero(ring: Ring, rows: usize, cols: usize) -> Self {
        CoeffMatrix { ring, rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn entry(&self, i: usize, j: usize) -> &Coeff {
        &self.data[i * self.cols + j]
    }

    pub fn from_int_matrix(ring: Ring, m: &IntMatrix) -> Self {
        let mut out = CoeffMatrix::zero(ring, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.data[i * out.cols + j] = ring.from_int(m[(i, j)].clone());
            }
        }
        out
    }
}

/// Realize a formal sum: the linear combination of its graphs' realizations,
/// as a matrix `Γ^{source}(R^m) → Γ^{target}(R^m)` acting on column vectors.
pub fn realize(x: &SchMorphism, width: usize) -> CoeffMatrix {
    let rows = basis(x.target(), width).dimension();
    let cols = basis(x.source(), width).dimension();
    let terms: Vec<(&GraphMorphism, &Coeff)> = x.terms().collect();
    let realized = exec::map_collect(&terms, |(g, _)| realize_graph(g, width));
    let mut out = CoeffMatrix::zero(x.ring(), rows, cols);
    for ((_, c), m) in terms.iter().zip(&realized) {
        for i in 0..rows {
            for j in 0..cols {
                if !m[(i, j)].is_zero() {
                    let add = x.ring().from_int(m[(i, j)].clone()).mul(c);
                    let cur = &out.data[i * cols + j];
                    out.data[i * cols + j] = cur.add(&add);
                }
            }
        }
    }
    out
}

/// Functoriality of `Γ^α` in the module argument: the matrix of
/// `Γ^α(g): Γ^α(R^m) → Γ^α(R^{m'})` for a linear map `g` given as an
/// `m' × m` integer matrix.  Divided powers absorb multinomials:
/// `γ_n(Σ c_j e_j) = Σ_{|k|=n} ∏ c_j^{k_j} ∏ γ_{k_j}(e_j)`.
pub fn apply_linear_map(shape: &Multiset, g: &IntMatrix) -> IntMatrix {
    let m = g.cols();
    let m_out = g.rows();
    let src = basis(shape, m);
    let tgt = basis(shape, m_out);
    let mut out = IntMatrix::zero(tgt.dimension(), src.dimension());
    let points = shape.support_size();
    for (col, mono) in src.basis.iter().enumerate() {
        // expand row by row, then tensor the rows together
        let mut rows_expanded: Vec<Vec<(Vec<u64>, BigInt)>> = Vec::with_capacity(points);
        for p in 0..points {
            // state: exponent vector of length m_out with coefficient
            let mut state: Vec<(Vec<u64>, BigInt)> =
                vec![(vec![0u64; m_out], BigInt::one())];
            for i in 0..m {
                let a = mono.exps[p * m + i];
                if a == 0 {
                    continue;
                }
                let expansions = weak_compositions(a, m_out);
                let mut next: Vec<(Vec<u64>, BigInt)> = Vec::new();
                for (cur, coeff) in &state {
                    for k in &expansions {
                        // scalar ∏_j g[j,i]^{k_j}
                        let mut scalar = BigInt::one();
                        let mut skip = false;
                        for (j, &kj) in k.iter().enumerate() {
                            if kj == 0 {
                                continue;
                            }
                            if g[(j, i)].is_zero() {
                                skip = true;
                                break;
                            }
                            scalar *= g[(j, i)].pow(kj as u32);
                        }
                        if skip || scalar.is_zero() {
                            continue;
                        }
                        // divided-power product picks up binomials
                        let mut c = coeff * scalar;
                        let mut merged = cur.clone();
                        for (j, &kj) in k.iter().enumerate() {
                            if kj == 0 {
                                continue;
                            }
                            c *= BigInt::from(arith::binomial(merged[j] + kj, kj));
                            merged[j] += kj;
                        }
                        next.push((merged, c));
                    }
                }
                // merge duplicate exponent vectors
                next.sort_by(|a, b| a.0.cmp(&b.0));
                next.dedup_by(|b, a| {
                    if a.0 == b.0 {
                        a.1 += std::mem::take(&mut b.1);
                        true
                    } else {
                        false
                    }
                });
                next.retain(|(_, c)| !c.is_zero());
                state = next;
            }
            rows_expanded.push(state);
        }
        // tensor across rows
        let mut acc: Vec<(Vec<u64>, BigInt)> = vec![(vec![], BigInt::one())];
        for row in &rows_expanded {
            let mut next = Vec::with_capacity(acc.len() * row.len());
            for (prefix, c0) in &acc {
                for (row_exps, c1) in row {
                    let mut e = prefix.clone();
                    e.extend_from_slice(row_exps);
                    next.push((e, c0 * c1));
                }
            }
            acc = next;
        }
        for (exps, coeff) in acc {
            let row = tgt.index_of(&exps).expect("expanded monomial is in the basis");
            out[(row, col)] += coeff;
        }
    }
    out
}

/// `Γ^shape(R^width)` realized inside the tensor power as honest
/// `Σ_n`-invariants (orbit sums), with the correspondence to the weight
/// basis.  Only for small cardinalities.
pub struct InvariantsOracle {
    /// every pair (fibre-respecting function, word), the ambient basis
    states: Vec<(Vec<Label>, Vec<usize>)>,
    /// orbit id per state
    orbit_of: Vec<usize>,
    /// representative state per orbit
    reps: Vec<usize>,
    /// orbit id → index in the weight basis
    to_weight: Vec<usize>,
    pub space: GammaSpace,
}

impl InvariantsOracle {
    pub fn dimension(&self) -> usize {
        self.reps.len()
    }
}

/// Enumerate the fibre-respecting functions `{1..n} → support(α)` (the
/// permutation basis of cardinality `n!/α!`), lexicographically.
pub fn fibre_functions(shape: &Multiset) -> Vec<Vec<Label>> {
    let n = shape.cardinality() as usize;
    let mut out = Vec::new();
    let mut remaining: Vec<u64> = shape.entries().iter().map(|&(_, m)| m).collect();
    let labels: Vec<Label> = shape.support().collect();
    let mut cur: Vec<usize> = Vec::new();
    fn rec(
        n: usize,
        labels: &[Label],
        remaining: &mut Vec<u64>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<Label>>,
    ) {
        if cur.len() == n {
            out.push(cur.iter().map(|&i| labels[i]).collect());
            return;
        }
        for i in 0..labels.len() {
            if remaining[i] > 0 {
                remaining[i] -= 1;
                cur.push(i);
                rec(n, labels, remaining, cur, out);
                cur.pop();
                remaining[i] += 1;
            }
        }
    }
    rec(n, &labels, &mut remaining, &mut cur, &mut out);
    out
}

pub fn invariants_oracle(shape: &Multiset, width: usize) -> Result<InvariantsOracle> {
    let n = shape.cardinality() as usize;
    if n > 6 {
        return Err(Error::SizeLimit(format!(
            "invariant tensors blow up factorially; cardinality {n} > 6"
        )));
    }
    let functions = fibre_functions(shape);
    let mut states: Vec<(Vec<Label>, Vec<usize>)> = Vec::new();
    let mut state_index: HashMap<(Vec<Label>, Vec<usize>), usize> = HashMap::new();
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::with_capacity(words.len() * width);
        for w in &words {
            for i in 0..width {
                let mut e = w.clone();
                e.push(i);
                next.push(e);
            }
        }
        words = next;
    }
    for f in &functions {
        for w in &words {
            state_index.insert((f.clone(), w.clone()), states.len());
            states.push((f.clone(), w.clone()));
        }
    }
    // orbits under the simultaneous action of adjacent transpositions
    let mut parent: Vec<usize> = (0..states.len()).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (idx, (f, w)) in states.iter().enumerate() {
        for k in 0..n.saturating_sub(1) {
            let mut f2 = f.clone();
            f2.swap(k, k + 1);
            let mut w2 = w.clone();
            w2.swap(k, k + 1);
            let other = state_index[&(f2, w2)];
            let (a, b) = (find(&mut parent, idx), find(&mut parent, other));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut orbit_ids: HashMap<usize, usize> = HashMap::new();
    let mut reps = Vec::new();
    let mut orbit_of = vec![0usize; states.len()];
    for i in 0..states.len() {
        let root = find(&mut parent, i);
        let id = *orbit_ids.entry(root).or_insert_with(|| {
            reps.push(i);
            reps.len() - 1
        });
        orbit_of[i] = id;
    }
    // orbits must correspond exactly to weight monomials
    let space = basis(shape, width);
    if reps.len() != space.dimension() {
        return Err(Error::InvariantViolation(format!(
            "{} orbits vs {} weight monomials",
            reps.len(),
            space.dimension()
        )));
    }
    let mut to_weight = vec![usize::MAX; reps.len()];
    let mut seen = vec![false; space.dimension()];
    for (o, &rep) in reps.iter().enumerate() {
        let exps = weight_of_state(shape, width, &states[rep]);
        let w = space.index_of(&exps).ok_or_else(|| {
            Error::InvariantViolation("orbit weight not a basis monomial".into())
        })?;
        if seen[w] {
            return Err(Error::InvariantViolation(
                "two orbits share a weight monomial".into(),
            ));
        }
        seen[w] = true;
        to_weight[o] = w;
    }
    Ok(InvariantsOracle { states, orbit_of, reps, to_weight, space })
}

fn weight_of_state(shape: &Multiset, width: usize, state: &(Vec<Label>, Vec<usize>)) -> Vec<u64> {
    let mut exps = vec![0u64; shape.support_size() * width];
    for (pos, &l) in state.0.iter().enumerate() {
        let row = shape.position(l).unwrap();
        exps[row * width + state.1[pos]] += 1;
    }
    exps
}

/// Pushforward on invariant tensors, reindexed to the weight bases so it is
/// directly comparable with [`realize_lower`].
pub fn oracle_lower(f: &Multijection, width: usize) -> Result<IntMatrix> {
    let src = invariants_oracle(f.source(), width)?;
    let tgt = invariants_oracle(f.target(), width)?;
    let mut out = IntMatrix::zero(tgt.space.dimension(), src.space.dimension());
    // image of a source orbit sum: push every member forward, read off the
    // coefficient at each target representative
    for (so, &srep) in src.reps.iter().enumerate() {
        let _ = srep;
        for (idx, (func, word)) in src.states.iter().enumerate() {
            if src.orbit_of[idx] != so {
                continue;
            }
            let pushed: Vec<Label> = func.iter().map(|&l| f.apply(l)).collect();
            // find the target state and check whether it is the representative
            for (to, &trep) in tgt.reps.iter().enumerate() {
                if tgt.states[trep] == (pushed.clone(), word.clone()) {
                    out[(tgt.to_weight[to], src.to_weight[so])] += BigInt::one();
                }
            }
        }
    }
    Ok(out)
}

/// Pullback on invariant tensors, reindexed to the weight bases so it is
/// directly comparable with [`realize_upper`].
pub fn oracle_upper(f: &Multijection, width: usize) -> Result<IntMatrix> {
    let src = invariants_oracle(f.source(), width)?;
    let tgt = invariants_oracle(f.target(), width)?;
    let mut out = IntMatrix::zero(src.space.dimension(), tgt.space.dimension());
    // coefficient of the source representative in the pulled-back orbit sum
    for (so, &srep) in src.reps.iter().enumerate() {
        let (func, word) = &src.states[srep];
        let pushed: Vec<Label> = func.iter().map(|&l| f.apply(l)).collect();
        for (to, _) in tgt.reps.iter().enumerate() {
            // does (f∘φ₀, w₀) lie in the target orbit?
            for (idx, state) in tgt.states.iter().enumerate() {
                if tgt.orbit_of[idx] == to && state.0 == pushed && &state.1 == word {
                    out[(src.to_weight[so], tgt.to_weight[to])] += BigInt::one();
                }
            }
        }
    }
    Ok(out)
}

/// `Γ^n` of a finitely presented module, presented again: generators are the
/// degree-`n` weight monomials of the free cover, relations the degree-`n`
/// part of the ideal generated by positive-degree divided powers of the
/// relation images.
pub fn gamma_of_presentation(n: u64, module: &FPModule) -> FPModule {
    let b = module.rank;
    let a = module.relations.cols();
    let point = |d: u64| Multiset::singleton(Label(1), d);
    if n == 0 {
        return FPModule::free(1, module.ring);
    }
    let gens = basis(&point(n), b);
    let mut rel_cols: Vec<Vec<BigInt>> = Vec::new();
    for i in 1..=n {
        let gamma_i_a = basis(&point(i), a);
        let gamma_i_b = basis(&point(i), b);
        let gamma_rest = basis(&point(n - i), b);
        // Γ^i of the relation map, then multiply into Γ^{n-i}(free_b)
        let gi = apply_linear_map(&point(i), &module.relations);
        for u in 0..gamma_i_a.dimension() {
            for v in gamma_rest.basis.iter() {
                let mut col = vec![BigInt::zero(); gens.dimension()];
                for w in 0..gamma_i_b.dimension() {
                    let c = &gi[(w, u)];
                    if c.is_zero() {
                        continue;
                    }
                    // divided-power product of the single-row monomials;
                    // the degree-0 monomial has an empty exponent row
                    let we = &gamma_i_b.basis[w].exps;
                    let ve = &v.exps;
                    let mut merged = vec![0u64; b];
                    let mut coeff = BigInt::one();
                    for j in 0..b {
                        let vj = ve.get(j).copied().unwrap_or(0);
                        merged[j] = we[j] + vj;
                        if we[j] > 0 && vj > 0 {
                            coeff *= BigInt::from(arith::binomial(merged[j], we[j]));
                        }
                    }
                    let row = gens.index_of(&merged).unwrap();
                    col[row] += c * coeff;
                }
                if col.iter().any(|e| !e.is_zero()) {
                    rel_cols.push(col);
                }
            }
        }
    }
    let mut relations = IntMatrix::zero(gens.dimension(), rel_cols.len());
    for (c, col) in rel_cols.iter().enumerate() {
        for (r, e) in col.iter().enumerate() {
            relations[(r, c)] = e.clone();
        }
    }
    FPModule { rank: gens.dimension(), relations, ring: module.ring }
}

/// `Γ^shape` of a tuple of widths: the basis partitions into blocks indexed
/// by the ways of distributing each multiplicity across the summands.
pub struct SumDecomposition {
    /// per block: the distribution matrix `support(shape) × summands` and the
    /// indices of the basis monomials in the block
    pub blocks: Vec<(Vec<u64>, Vec<usize>)>,
    pub space: GammaSpace,
}

pub fn direct_sum_decompose(shape: &Multiset, widths: &[usize]) -> SumDecomposition {
    let total: usize = widths.iter().sum();
    let space = basis(shape, total);
    let points = shape.support_size();
    let k = widths.len();
    let mut blocks: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
    for (idx, mono) in space.basis.iter().enumerate() {
        let mut key = vec![0u64; points * k];
        for p in 0..points {
            let mut offset = 0;
            for (j, &w) in widths.iter().enumerate() {
                let s: u64 = (0..w).map(|i| mono.exps[p * total + offset + i]).sum();
                key[p * k + j] = s;
                offset += w;
            }
        }
        blocks.entry(key).or_default().push(idx);
    }
    let mut blocks: Vec<(Vec<u64>, Vec<usize>)> = blocks.into_iter().collect();
    blocks.sort();
    SumDecomposition { blocks, space }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    fn ms(s: &str) -> Multiset {
        s.parse().unwrap()
    }

    fn final_map(src: &str, tgt: &str) -> Multijection {
        let source: Multiset = src.parse().unwrap();
        let target: Multiset = tgt.parse().unwrap();
        let t = target.support().next().unwrap();
        Multijection::new(
            source.clone(),
            target,
            source.support().map(|s| (s, t)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn basis_examples() {
        let b = basis(&ms("[2]"), 2);
        assert_eq!(b.dimension(), 3);
        assert_eq!(
            b.basis.iter().map(|m| m.exps.clone()).collect::<Vec<_>>(),
            vec![vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        assert_eq!(basis(&ms("[1,1]"), 2).dimension(), 4);
        assert_eq!(basis(&Multiset::empty(), 7).dimension(), 1);
    }

    #[test]
    fn basis_dimension_formula() {
        for (shape, m) in [("[3,2]", 3usize), ("[2,1,1]", 2), ("[4]", 4)] {
            let shape = ms(shape);
            let dim: u64 = shape
                .entries()
                .iter()
                .map(|&(_, mu)| {
                    u64::try_from(arith::binomial(mu + m as u64 - 1, m as u64 - 1)).unwrap()
                })
                .product();
            assert_eq!(basis(&shape, m).dimension() as u64, dim);
        }
    }

    #[test]
    fn realize_lower_merges_with_multinomials() {
        let f = final_map("[1,1]", "[2]");
        // width 1: e⊗e ↦ 2 γ₂(e)
        let m = realize_lower(&f, 1);
        assert_eq!(m.rows(), 1);
        assert_eq!(m.cols(), 1);
        assert_eq!(m[(0, 0)], BigInt::from(2));
        // width 2: the cross monomial keeps coefficient 1
        let m = realize_lower(&f, 2);
        let src = basis(&ms("[1,1]"), 2);
        let tgt = basis(&ms("[2]"), 2);
        let col = src.index_of(&[1, 0, 0, 1]).unwrap();
        let row = tgt.index_of(&[1, 1]).unwrap();
        assert_eq!(m[(row, col)], BigInt::one());
        // identity realizes to the identity
        let id = Multijection::identity(&ms("[2,1]"));
        assert_eq!(realize_lower(&id, 2), IntMatrix::identity(basis(&ms("[2,1]"), 2).dimension()));
    }

    #[test]
    fn realize_upper_splits_with_coefficient_one() {
        let f = final_map("[1,1]", "[2]");
        // width 1: γ₂ ↦ e⊗e
        let m = realize_upper(&f, 1);
        assert_eq!(m[(0, 0)], BigInt::one());
        // width 2: γ₁(e₁)γ₁(e₂) ↦ e₁⊗e₂ + e₂⊗e₁
        let m = realize_upper(&f, 2);
        let src = basis(&ms("[1,1]"), 2);
        let tgt = basis(&ms("[2]"), 2);
        let col = tgt.index_of(&[1, 1]).unwrap();
        let r1 = src.index_of(&[1, 0, 0, 1]).unwrap();
        let r2 = src.index_of(&[0, 1, 1, 0]).unwrap();
        assert_eq!(m[(r1, col)], BigInt::one());
        assert_eq!(m[(r2, col)], BigInt::one());
        let total: BigInt = (0..src.dimension()).map(|r| m[(r, col)].clone()).sum();
        assert_eq!(total, BigInt::from(2));
        let id = Multijection::identity(&ms("[2,1]"));
        assert_eq!(realize_upper(&id, 2), IntMatrix::identity(basis(&ms("[2,1]"), 2).dimension()));
    }

    #[test]
    fn hecke_relation_realizes() {
        // lower ∘ upper = degree × identity
        for (src, tgt, width) in [("[1,1]", "[2]", 2usize), ("[2,1]", "[3]", 2), ("[1,1,1]", "[3]", 3)] {
            let f = final_map(src, tgt);
            let low = realize_lower(&f, width);
            let up = realize_upper(&f, width);
            let prod = low.mul(&up);
            let dim = basis(&ms(tgt), width).dimension();
            let deg = BigInt::from(f.degree());
            assert_eq!(prod, IntMatrix::identity(dim).scale(&deg));
        }
    }

    #[test]
    fn realize_of_identity_and_swap() {
        let id = SchMorphism::identity(Ring::Int, &ms("[2]"));
        let m = realize(&id, 2);
        assert_eq!(m.rows, 3);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.entry(i, j).is_one(), i == j);
            }
        }
        // the swap graph on [1,1] permutes the weight pairs
        let swap = crate::schurcat::hom_basis(&ms("[1,1]"), &ms("[1,1]"))
            .into_iter()
            .find(|g| g.entries() == [0, 1, 1, 0])
            .unwrap();
        let m = realize_graph(&swap, 2);
        let b = basis(&ms("[1,1]"), 2);
        for (j, mono) in b.basis.iter().enumerate() {
            let mut swapped = mono.exps[2..4].to_vec();
            swapped.extend_from_slice(&mono.exps[0..2]);
            let i = b.index_of(&swapped).unwrap();
            assert_eq!(m[(i, j)], BigInt::one());
        }
    }

    #[test]
    fn realize_hecke_through_formal_sums() {
        let f = final_map("[1,1]", "[2]");
        let comp = SchMorphism::compose(
            &SchMorphism::lowerstar(Ring::Int, &f),
            &SchMorphism::upperstar(Ring::Int, &f),
        )
        .unwrap();
        let m = realize(&comp, 2);
        for i in 0..m.rows {
            for j in 0..m.cols {
                let expect = if i == j { Ring::Int.from_int(2) } else { Ring::Int.zero() };
                assert_eq!(*m.entry(i, j), expect);
            }
        }
    }

    #[test]
    fn apply_linear_map_examples() {
        // scaling: γ₂(c e) = c² γ₂(e)
        let g = IntMatrix::from_i64(1, 1, &[3]);
        let m = apply_linear_map(&ms("[2]"), &g);
        assert_eq!(m[(0, 0)], BigInt::from(9));
        // diagonal embedding: γ₂(e) ↦ γ₂(e₁) + γ₁(e₁)γ₁(e₂) + γ₂(e₂)
        let g = IntMatrix::from_i64(2, 1, &[1, 1]);
        let m = apply_linear_map(&ms("[2]"), &g);
        let tgt = basis(&ms("[2]"), 2);
        for mono in &tgt.basis {
            let row = tgt.index_of(&mono.exps).unwrap();
            assert_eq!(m[(row, 0)], BigInt::one(), "{:?}", mono.exps);
        }
        // permutation matrices permute the basis
        let g = IntMatrix::from_i64(2, 2, &[0, 1, 1, 0]);
        let m = apply_linear_map(&ms("[2,1]"), &g);
        let dim = basis(&ms("[2,1]"), 2).dimension();
        for j in 0..dim {
            let ones: usize = (0..dim).filter(|&i| m[(i, j)].is_one()).count();
            let zeros: usize = (0..dim).filter(|&i| m[(i, j)].is_zero()).count();
            assert_eq!((ones, zeros), (1, dim - 1));
        }
    }

    #[test]
    fn apply_linear_map_respects_composition() {
        let a = IntMatrix::from_i64(2, 2, &[1, 2, 0, 1]);
        let b = IntMatrix::from_i64(2, 2, &[1, 0, 3, 1]);
        let shape = ms("[2,1]");
        let ab = a.mul(&b);
        assert_eq!(
            apply_linear_map(&shape, &ab),
            apply_linear_map(&shape, &a).mul(&apply_linear_map(&shape, &b))
        );
    }

    #[test]
    fn invariants_oracle_dimensions() {
        let o = invariants_oracle(&ms("[2]"), 2).unwrap();
        assert_eq!(o.dimension(), 3);
        let o = invariants_oracle(&ms("[1,1,1]"), 1).unwrap();
        assert_eq!(o.dimension(), 1);
        assert!(invariants_oracle(&ms("[7]"), 1).is_err());
    }

    #[test]
    fn oracle_agrees_with_realization() {
        let collapse = Multijection::new(
            ms("[1,1,1]"),
            ms("[2,1]"),
            vec![
                (Label(1), Label(1)),
                (Label(2), Label(1)),
                (Label(3), Label(2)),
            ],
        )
        .unwrap();
        let cases = [
            (final_map("[1,1]", "[2]"), 1usize),
            (final_map("[1,1]", "[2]"), 2),
            (final_map("[2,1]", "[3]"), 2),
            (collapse, 2),
        ];
        for (f, width) in cases {
            assert_eq!(oracle_lower(&f, width).unwrap(), realize_lower(&f, width));
            assert_eq!(oracle_upper(&f, width).unwrap(), realize_upper(&f, width));
        }
    }

    #[test]
    fn coassociativity_of_splitting() {
        // splitting [a,b,c]→[a+b+c] in either two-step order agrees
        let f3 = final_map("[1,1,1]", "[3]");
        let upper_direct = realize_upper(&f3, 2);
        // two-step: [3] -> [2,1] -> [1,1,1]
        let step1 = Multijection::new(
            ms("[2,1]"),
            ms("[3]"),
            vec![(Label(1), Label(1)), (Label(2), Label(1))],
        )
        .unwrap();
        let step2 = Multijection::new(
            ms("[1,1,1]"),
            ms("[2,1]"),
            vec![(Label(1), Label(1)), (Label(2), Label(1)), (Label(3), Label(2))],
        )
        .unwrap();
        let two_step = realize_upper(&step2, 2).mul(&realize_upper(&step1, 2));
        assert_eq!(upper_direct, two_step);
        // and dually for the multiplication
        let lower_direct = realize_lower(&f3, 2);
        let two_step = realize_lower(&step1, 2).mul(&realize_lower(&step2, 2));
        assert_eq!(lower_direct, two_step);
    }

    #[test]
    fn gamma_of_presentation_examples() {
        // Γ²(Z/2) = Z/4
        let z2 = FPModule::cyclic(2, Ring::Int);
        let g = gamma_of_presentation(2, &z2);
        assert_eq!(g.invariants().to_string(), "Z/4");
        // Γ²(Z) = Z
        let z = FPModule::free(1, Ring::Int);
        let g = gamma_of_presentation(2, &z);
        assert_eq!(g.invariants().to_string(), "Z");
        // Γ¹ is the identity functor
        let g = gamma_of_presentation(1, &z2);
        assert_eq!(g.invariants().to_string(), "Z/2");
    }

    #[test]
    fn gamma_of_presentation_more_values() {
        // Γ²(Z/4) = Z/8; Γ³(Z/2) = Z/2 since 2e·γ₂(e) = 6γ₃ sits in the ideal
        // (matching the 2-local splitting off Γ²⊗Γ¹ = Z/4 ⊗ Z/2)
        let z4 = FPModule::cyclic(4, Ring::Int);
        assert_eq!(gamma_of_presentation(2, &z4).invariants().to_string(), "Z/8");
        let z2 = FPModule::cyclic(2, Ring::Int);
        assert_eq!(gamma_of_presentation(3, &z2).invariants().to_string(), "Z/2");
        // Γ⁴(Z/2) = Z/8 (degree a power of two climbs all the way)
        assert_eq!(gamma_of_presentation(4, &z2).invariants().to_string(), "Z/8");
        // Γ⁰ of anything is the base ring
        assert_eq!(gamma_of_presentation(0, &z2).invariants().to_string(), "Z");
        // Γ²(Z ⊕ Z/2) = Γ²(Z) ⊕ Z⊗Z/2 ⊕ Γ²(Z/2) = Z + Z/2 + Z/4
        let m = FPModule::free(1, Ring::Int).direct_sum(&z2);
        let inv = gamma_of_presentation(2, &m).invariants();
        assert_eq!(inv.to_string(), "Z + Z/2 + Z/4");
    }

    #[test]
    fn direct_sum_decomposition_blocks() {
        let d = direct_sum_decompose(&ms("[2]"), &[1, 1]);
        assert_eq!(d.blocks.len(), 3);
        for (_, idxs) in &d.blocks {
            assert_eq!(idxs.len(), 1);
        }
        let d = direct_sum_decompose(&ms("[1,1]"), &[1, 1]);
        assert_eq!(d.blocks.len(), 4);
        let d = direct_sum_decompose(&ms("[2,1]"), &[2]);
        assert_eq!(d.blocks.len(), 1);
        assert_eq!(d.blocks[0].1.len(), d.space.dimension());
        // block dimensions multiply out
        let d = direct_sum_decompose(&ms("[2]"), &[2, 1]);
        let total: usize = d.blocks.iter().map(|(_, idxs)| idxs.len()).sum();
        assert_eq!(total, d.space.dimension());
        for (key, idxs) in &d.blocks {
            let expect: u64 = key
                .iter()
                .zip([2u64, 1].iter().cycle())
                .map(|(&f, &mj)| u64::try_from(arith::binomial(f + mj - 1, mj - 1)).unwrap())
                .product();
            assert_eq!(idxs.len() as u64, expect);
        }
    }
}
