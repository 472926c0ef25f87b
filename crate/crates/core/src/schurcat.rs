//! The linearized category of multisets: graphs, formal sums, and the
//! composition rule with its multinomial structure constants.
//!
//! A [`GraphMorphism`] `β → α` is a nonnegative integer matrix indexed by the
//! two supports whose row sums are the source multiplicities and whose column
//! sums are the target multiplicities.  It encodes the span `β ← γ → α` whose
//! apex has one point per nonzero cell.  A [`SchMorphism`] is a formal linear
//! combination of graphs with coefficients in one of the exact rings.
//!
//! Composition of two graphs sums over *transport tensors*: for graphs
//! `G: β → α` and `H: α → ε`, a tensor `Z[t,s,u]` satisfies
//! `Σ_u Z[t,s,u] = G[t,s]` and `Σ_t Z[t,s,u] = H[s,u]`.  The constraints
//! decouple over the middle support, so the tensors are exactly choices, for
//! each middle point `s`, of a margin matrix with row sums `G[·,s]` and
//! column sums `H[s,·]`.  Each tensor contributes the graph
//! `W[t,u] = Σ_s Z[t,s,u]` with coefficient
//! `∏_{t,u} multinomial(W[t,u]; (Z[t,s,u])_s)`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::arith;
use crate::error::{Error, Result};
use crate::exec;
use crate::multijection::{enumerate_margin_matrices, Multijection, MultiShuffle, Span};
use crate::multiset::{DisjointUnion, Label, Multiset};
use crate::ring::{Coeff, Ring};

/// A margin-constrained integer matrix: the basis morphisms of the category.
/// Rows are indexed by the source support, columns by the target support.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GraphMorphism {
    source: Multiset,
    target: Multiset,
    /// row-major, `source.support_size() × target.support_size()`
    entries: Vec<u64>,
}

impl GraphMorphism {
    pub fn new(source: Multiset, target: Multiset, entries: Vec<u64>) -> Result<Self> {
        let rows = source.support_size();
        let cols = target.support_size();
        if entries.len() != rows * cols {
            return Err(Error::InvalidGraph(format!(
                "expected {rows}x{cols} entries"
            )));
        }
        for (i, (l, m)) in source.entries().iter().enumerate() {
            let row_sum: u64 = entries[i * cols..(i + 1) * cols].iter().sum();
            if row_sum != *m {
                return Err(Error::InvalidGraph(format!(
                    "row sum at {l} is {row_sum}, source multiplicity is {m}"
                )));
            }
        }
        for (j, (l, m)) in target.entries().iter().enumerate() {
            let col_sum: u64 = (0..rows).map(|i| entries[i * cols + j]).sum();
            if col_sum != *m {
                return Err(Error::InvalidGraph(format!(
                    "column sum at {l} is {col_sum}, target multiplicity is {m}"
                )));
            }
        }
        Ok(GraphMorphism { source, target, entries })
    }

    /// Diagonal graph on `α`; the two-sided unit for composition.
    pub fn identity(alpha: &Multiset) -> Self {
        let k = alpha.support_size();
        let mut entries = vec![0u64; k * k];
        for (i, (_, m)) in alpha.entries().iter().enumerate() {
            entries[i * k + i] = *m;
        }
        GraphMorphism {
            source: alpha.clone(),
            target: alpha.clone(),
            entries,
        }
    }

    /// The pushforward graph of a multijection: `entries[s, f(s)] = μ(s)`.
    pub fn from_lower(f: &Multijection) -> Self {
        let source = f.source().clone();
        let target = f.target().clone();
        let cols = target.support_size();
        let mut entries = vec![0u64; source.support_size() * cols];
        for (i, (l, m)) in source.entries().iter().enumerate() {
            let j = target.position(f.apply(*l)).unwrap();
            entries[i * cols + j] = *m;
        }
        GraphMorphism { source, target, entries }
    }

    pub fn source(&self) -> &Multiset {
        &self.source
    }

    pub fn target(&self) -> &Multiset {
        &self.target
    }

    pub fn entry(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.target.support_size() + col]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn transpose(&self) -> GraphMorphism {
        let rows = self.source.support_size();
        let cols = self.target.support_size();
        let mut entries = vec![0u64; self.entries.len()];
        for i in 0..rows {
            for j in 0..cols {
                entries[j * rows + i] = self.entries[i * cols + j];
            }
        }
        GraphMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            entries,
        }
    }

    /// The span `source ← apex → target` this graph encodes: one apex point
    /// per nonzero cell, in row-major cell order.
    pub fn span(&self) -> Span {
        let cols = self.target.support_size();
        let mut apex_entries = Vec::new();
        let mut left_map = Vec::new();
        let mut right_map = Vec::new();
        let mut next: u32 = 1;
        for (i, (s, _)) in self.source.entries().iter().enumerate() {
            for (j, (t, _)) in self.target.entries().iter().enumerate() {
                let v = self.entries[i * cols + j];
                if v > 0 {
                    apex_entries.push((Label(next), v));
                    left_map.push((Label(next), *s));
                    right_map.push((Label(next), *t));
                    next += 1;
                }
            }
        }
        let apex = Multiset::from_entries(apex_entries);
        let left = Multijection::new(apex.clone(), self.source.clone(), left_map)
            .expect("margins make the left projection a multijection");
        let right = Multijection::new(apex.clone(), self.target.clone(), right_map)
            .expect("margins make the right projection a multijection");
        Span { apex, left, right }
    }

    /// Block-diagonal graph on the disjoint unions of sources and targets.
    pub fn monoidal(
        x: &GraphMorphism,
        y: &GraphMorphism,
    ) -> (GraphMorphism, DisjointUnion, DisjointUnion) {
        let src = x.source.disjoint_union(&y.source);
        let tgt = x.target.disjoint_union(&y.target);
        let rows = src.result.support_size();
        let cols = tgt.result.support_size();
        let (rx, cx) = (x.source.support_size(), x.target.support_size());
        let mut entries = vec![0u64; rows * cols];
        for i in 0..rx {
            for j in 0..cx {
                entries[i * cols + j] = x.entries[i * cx + j];
            }
        }
        let cy = y.target.support_size();
        for i in 0..y.source.support_size() {
            for j in 0..cy {
                entries[(rx + i) * cols + (cx + j)] = y.entries[i * cy + j];
            }
        }
        let g = GraphMorphism {
            source: src.result.clone(),
            target: tgt.result.clone(),
            entries,
        };
        (g, src, tgt)
    }
}

/// All graphs `β → α` in lexicographic order of the flattened margin
/// matrices; empty when the cardinalities differ.
pub fn hom_basis(beta: &Multiset, alpha: &Multiset) -> Vec<GraphMorphism> {
    let rows: Vec<u64> = beta.entries().iter().map(|&(_, m)| m).collect();
    let cols: Vec<u64> = alpha.entries().iter().map(|&(_, m)| m).collect();
    enumerate_margin_matrices(&rows, &cols)
        .into_iter()
        .map(|entries| GraphMorphism {
            source: beta.clone(),
            target: alpha.clone(),
            entries,
        })
        .collect()
}

/// A formal linear combination of graphs sharing endpoints, over one of the
/// exact coefficient rings.  Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SchMorphism {
    ring: Ring,
    source: Multiset,
    target: Multiset,
    terms: BTreeMap<GraphMorphism, Coeff>,
}

impl SchMorphism {
    pub fn zero(ring: Ring, source: Multiset, target: Multiset) -> Self {
        SchMorphism { ring, source, target, terms: BTreeMap::new() }
    }

    pub fn from_graph(ring: Ring, graph: GraphMorphism) -> Self {
        let mut m = SchMorphism::zero(ring, graph.source().clone(), graph.target().clone());
        m.add_term(graph, ring.one());
        m
    }

    pub fn identity(ring: Ring, alpha: &Multiset) -> Self {
        SchMorphism::from_graph(ring, GraphMorphism::identity(alpha))
    }

    /// `f_*`: the single pushforward graph of a multijection.
    pub fn lowerstar(ring: Ring, f: &Multijection) -> Self {
        SchMorphism::from_graph(ring, GraphMorphism::from_lower(f))
    }

    /// `f^*`: the transpose of the pushforward graph.
    pub fn upperstar(ring: Ring, f: &Multijection) -> Self {
        SchMorphism::from_graph(ring, GraphMorphism::from_lower(f).transpose())
    }

    /// A primitive span becomes its graph, weighted by the degree of the
    /// collapse map from the apex onto the graph.
    pub fn span_to_graph(ring: Ring, span: &Span) -> Result<Self> {
        let beta = span.left.target().clone();
        let alpha = span.right.target().clone();
        let cols = alpha.support_size();
        let mut entries = vec![0u64; beta.support_size() * cols];
        let mut fibres: BTreeMap<(usize, usize), Vec<u64>> = BTreeMap::new();
        for (x, m) in span.apex.entries() {
            let i = beta.position(span.left.apply(*x)).unwrap();
            let j = alpha.position(span.right.apply(*x)).unwrap();
            entries[i * cols + j] += m;
            fibres.entry((i, j)).or_default().push(*m);
        }
        let mut coeff = BigUint::one();
        for parts in fibres.values() {
            coeff *= arith::multinomial(parts);
        }
        let graph = GraphMorphism::new(beta.clone(), alpha.clone(), entries)?;
        let mut out = SchMorphism::zero(ring, beta, alpha);
        out.add_term(graph, ring.from_biguint(&coeff));
        Ok(out)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn source(&self) -> &Multiset {
        &self.source
    }

    pub fn target(&self) -> &Multiset {
        &self.target
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GraphMorphism, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, graph: GraphMorphism, coeff: Coeff) {
        assert_eq!(graph.source(), &self.source, "term source mismatch");
        assert_eq!(graph.target(), &self.target, "term target mismatch");
        if coeff.is_zero() {
            return;
        }
        let merged = match self.terms.get(&graph) {
            Some(existing) => existing.add(&coeff),
            None => coeff,
        };
        if merged.is_zero() {
            self.terms.remove(&graph);
        } else {
            self.terms.insert(graph, merged);
        }
    }

    pub fn add(&self, other: &SchMorphism) -> Result<SchMorphism> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!(
                "{} vs {}",
                self.ring, other.ring
            )));
        }
        if self.source != other.source || self.target != other.target {
            return Err(Error::EndpointMismatch("sum of morphisms".into()));
        }
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coeff) -> SchMorphism {
        assert_eq!(c.ring(), self.ring, "scalar ring mismatch");
        let mut out = SchMorphism::zero(self.ring, self.source.clone(), self.target.clone());
        for (g, t) in &self.terms {
            out.add_term(g.clone(), t.mul(c));
        }
        out
    }

    /// Map the coefficients into another ring (integral coefficients only).
    pub fn into_ring(&self, ring: Ring) -> Result<SchMorphism> {
        let mut out = SchMorphism::zero(ring, self.source.clone(), self.target.clone());
        for (g, c) in &self.terms {
            let n = c
                .as_bigint()
                .ok_or_else(|| Error::RingMismatch(format!("coefficient {c} is not integral")))?;
            out.add_term(g.clone(), ring.from_int(n));
        }
        Ok(out)
    }

    /// `h ∘ g` (apply `g` first).  Bilinear extension of the primitive
    /// transport-tensor rule; the integer structure constants are computed
    /// first and then mapped into the coefficient ring.
    pub fn compose(h: &SchMorphism, g: &SchMorphism) -> Result<SchMorphism> {
        if h.ring != g.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", h.ring, g.ring)));
        }
        if g.target != h.source {
            return Err(Error::EndpointMismatch(format!(
                "composing {} -> {} with {} -> {}",
                g.source, g.target, h.source, h.target
            )));
        }
        let pairs: Vec<(&GraphMorphism, &Coeff, &GraphMorphism, &Coeff)> = g
            .terms
            .iter()
            .flat_map(|(gg, gc)| h.terms.iter().map(move |(hg, hc)| (gg, gc, hg, hc)))
            .collect();
        let partials = exec::map_collect(&pairs, |(gg, gc, hg, hc)| {
            let prim = compose_graphs(hg, gg);
            let scalar = gc.mul(hc);
            (prim, scalar)
        });
        let mut out = SchMorphism::zero(h.ring, g.source.clone(), h.target.clone());
        for (prim, scalar) in partials {
            for (graph, n) in prim {
                let c = h.ring.from_biguint(&n).mul(&scalar);
                out.add_term(graph, c);
            }
        }
        Ok(out)
    }

    /// Block-diagonal product on disjoint unions, extended bilinearly.
    pub fn monoidal_product(x: &SchMorphism, y: &SchMorphism) -> SchMorphism {
        assert_eq!(x.ring, y.ring, "monoidal product ring mismatch");
        let src = x.source.disjoint_union(&y.source);
        let tgt = x.target.disjoint_union(&y.target);
        let mut out = SchMorphism::zero(x.ring, src.result, tgt.result);
        for (gx, cx) in &x.terms {
            for (gy, cy) in &y.terms {
                let (g, _, _) = GraphMorphism::monoidal(gx, gy);
                out.add_term(g, cx.mul(cy));
            }
        }
        out
    }

    /// Matrix transpose per graph; an anti-homomorphism for composition.
    pub fn transpose(&self) -> SchMorphism {
        let mut out = SchMorphism::zero(self.ring, self.target.clone(), self.source.clone());
        for (g, c) in &self.terms {
            out.add_term(g.transpose(), c.clone());
        }
        out
    }

    /// If this morphism is `c * identity`, return `c`.
    pub fn as_scalar_identity(&self) -> Option<Coeff> {
        if self.source != self.target || self.terms.len() != 1 {
            return None;
        }
        let (g, c) = self.terms.iter().next()?;
        (*g == GraphMorphism::identity(&self.source)).then(|| c.clone())
    }
}

/// Primitive composition of graphs `W = H ∘ G` with integer structure
/// constants: the sum over transport tensors described at module level.
pub fn compose_graphs(h: &GraphMorphism, g: &GraphMorphism) -> Vec<(GraphMorphism, BigUint)> {
    assert_eq!(g.target(), h.source(), "graph composition endpoint mismatch");
    let beta = g.source();
    let eps = h.target();
    let rows = beta.support_size();
    let mid = g.target().support_size();
    let cols = eps.support_size();

    // per middle point s: margin matrices with row sums G[·,s], col sums H[s,·]
    let mut per_mid: Vec<Vec<Vec<u64>>> = Vec::with_capacity(mid);
    for s in 0..mid {
        let row_sums: Vec<u64> = (0..rows).map(|t| g.entry(t, s)).collect();
        let col_sums: Vec<u64> = (0..cols).map(|u| h.entry(s, u)).collect();
        per_mid.push(enumerate_margin_matrices(&row_sums, &col_sums));
    }

    let mut acc: BTreeMap<Vec<u64>, BigUint> = BTreeMap::new();
    let empty_product = per_mid.iter().any(|m| m.is_empty());
    if !empty_product {
        let mut choice = vec![0usize; mid];
        'outer: loop {
            // W[t,u] = Σ_s M_s[t,u]; one multinomial per nonzero cell
            let mut w = vec![0u64; rows * cols];
            for (s, &pick) in choice.iter().enumerate() {
                for (i, v) in per_mid[s][pick].iter().enumerate() {
                    w[i] += v;
                }
            }
            let mut coeff: u128 = 1;
            let mut big_coeff: Option<BigUint> = None;
            let mut parts = Vec::with_capacity(mid);
            for cell in 0..rows * cols {
                if w[cell] == 0 {
                    continue;
                }
                parts.clear();
                for (s, &pick) in choice.iter().enumerate() {
                    let v = per_mid[s][pick][cell];
                    if v > 0 {
                        parts.push(v);
                    }
                }
                let small = if big_coeff.is_none() {
                    arith::multinomial_u128(&parts)
                        .and_then(|m| coeff.checked_mul(m))
                } else {
                    None
                };
                match small {
                    Some(c) => coeff = c,
                    None => {
                        let base = big_coeff.take().unwrap_or_else(|| BigUint::from(coeff));
                        big_coeff = Some(base * arith::multinomial(&parts));
                    }
                }
            }
            let coeff = big_coeff.unwrap_or_else(|| BigUint::from(coeff));
            *acc.entry(w).or_default() += coeff;
            // odometer over the middle points
            let mut s = mid;
            loop {
                if s == 0 {
                    break 'outer;
                }
                s -= 1;
                if choice[s] + 1 < per_mid[s].len() {
                    choice[s] += 1;
                    for c in choice[s + 1..].iter_mut() {
                        *c = 0;
                    }
                    continue 'outer;
                }
            }
        }
    }

    acc.into_iter()
        .map(|(w, c)| {
            let graph = GraphMorphism::new(beta.clone(), eps.clone(), w)
                .expect("transport margins are consistent");
            (graph, c)
        })
        .collect()
}

/// The unique factorization of a primitive morphism out of a recorded
/// disjoint union through a multi-shuffle.
#[derive(Clone, Debug)]
pub struct ShuffleFactorization {
    /// restriction to the left block, as a graph `α → α'`
    pub left: GraphMorphism,
    /// restriction to the right block, as a graph `β → β'`
    pub right: GraphMorphism,
    /// the multi-shuffle `α' ⊔ β' → γ`
    pub shuffle: MultiShuffle,
}

impl ShuffleFactorization {
    /// Recompose `shuffle ∘ (left ⊔ right)` in the category; the result is a
    /// single graph with coefficient one.
    pub fn recompose(&self, ring: Ring) -> Result<SchMorphism> {
        let (block, _, _) = GraphMorphism::monoidal(&self.left, &self.right);
        let lower = SchMorphism::lowerstar(ring, &self.shuffle.underlying);
        SchMorphism::compose(&lower, &SchMorphism::from_graph(ring, block))
    }
}

/// Factor a graph out of a recorded disjoint union as `h ∘ (f ⊔ g)` with `h`
/// a multi-shuffle.  `du` must be the disjoint-union record for the graph's
/// source.
pub fn shuffle_factorize(
    graph: &GraphMorphism,
    du: &DisjointUnion,
) -> Result<ShuffleFactorization> {
    if &du.result != graph.source() {
        return Err(Error::EndpointMismatch(
            "graph source is not the recorded disjoint union".into(),
        ));
    }
    let gamma = graph.target();
    let left_rows: Vec<usize> = du
        .left
        .iter()
        .map(|&(_, l)| graph.source().position(l).unwrap())
        .collect();
    let right_rows: Vec<usize> = du
        .right
        .iter()
        .map(|&(_, l)| graph.source().position(l).unwrap())
        .collect();
    // the split targets: column sums over each block of rows
    let block_target = |rows: &[usize]| -> Multiset {
        Multiset::from_entries(gamma.entries().iter().enumerate().map(|(j, &(l, _))| {
            let m: u64 = rows.iter().map(|&i| graph.entry(i, j)).sum();
            (l, m)
        }))
    };
    let alpha_prime = block_target(&left_rows);
    let beta_prime = block_target(&right_rows);
    let original_left = Multiset::from_entries(
        du.left
            .iter()
            .map(|&(o, l)| (o, graph.source().multiplicity(l))),
    );
    let original_right = Multiset::from_entries(
        du.right
            .iter()
            .map(|&(o, l)| (o, graph.source().multiplicity(l))),
    );
    let block_graph = |rows: &[usize],
                       orig: &Multiset,
                       labels: &[(Label, Label)],
                       tgt: &Multiset|
     -> Result<GraphMorphism> {
        let tcols = tgt.support_size();
        let mut entries = vec![0u64; orig.support_size() * tcols];
        for (bi, &(o, _)) in labels.iter().enumerate() {
            let i = orig.position(o).unwrap();
            let row = rows[bi];
            for (j, (l, _)) in gamma.entries().iter().enumerate() {
                if let Some(tj) = tgt.position(*l) {
                    entries[i * tcols + tj] = graph.entry(row, j);
                }
            }
        }
        GraphMorphism::new(orig.clone(), tgt.clone(), entries)
    };
    let left = block_graph(&left_rows, &original_left, &du.left, &alpha_prime)?;
    let right = block_graph(&right_rows, &original_right, &du.right, &beta_prime)?;
    let shuffle = MultiShuffle::new(vec![alpha_prime, beta_prime], gamma.clone())?;
    Ok(ShuffleFactorization { left, right, shuffle })
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn hom_basis_examples() {
        assert_eq!(hom_basis(&ms("[2]"), &ms("[1,1]")).len(), 1);
        assert_eq!(hom_basis(&ms("[2,1]"), &ms("[1,1,1]")).len(), 3);
        assert_eq!(hom_basis(&ms("[1,1]"), &ms("[1,1]")).len(), 2);
        assert!(hom_basis(&ms("[2]"), &ms("[3]")).is_empty());
    }

    #[test]
    fn hom_basis_transpose_bijection() {
        for (b, a) in [("[2,1]", "[1,1,1]"), ("[2,2]", "[3,1]"), ("[1,1,1]", "[3]")] {
            let fwd = hom_basis(&ms(b), &ms(a));
            let bwd = hom_basis(&ms(a), &ms(b));
            assert_eq!(fwd.len(), bwd.len());
            let mut transposed: Vec<GraphMorphism> =
                fwd.iter().map(|g| g.transpose()).collect();
            transposed.sort();
            assert_eq!(transposed, bwd);
        }
    }

    #[test]
    fn identity_graphs() {
        let id = GraphMorphism::identity(&ms("[2]"));
        assert_eq!(id.entries(), &[2]);
        let id = GraphMorphism::identity(&ms("[1,1]"));
        assert_eq!(id.entries(), &[1, 0, 0, 1]);
    }

    #[test]
    fn lower_and_upper_star() {
        let f = final_map("[1,1]", "[2]");
        let low = GraphMorphism::from_lower(&f);
        assert_eq!(low.entries(), &[1, 1]);
        let up = low.transpose();
        assert_eq!(up.entries(), &[1, 1]);
        assert_eq!(up.source(), &ms("[2]"));

        let g = final_map("[2,1]", "[3]");
        assert_eq!(GraphMorphism::from_lower(&g).entries(), &[2, 1]);
    }

    #[test]
    fn hecke_relation_on_a_final_map() {
        // upperstar then lowerstar = degree * identity
        let f = final_map("[1,1]", "[2]");
        let up = SchMorphism::upperstar(Ring::Int, &f);
        let low = SchMorphism::lowerstar(Ring::Int, &f);
        let comp = SchMorphism::compose(&low, &up).unwrap();
        assert_eq!(
            comp.as_scalar_identity(),
            Some(Ring::Int.from_int(2)),
            "{comp:?}"
        );
    }

    #[test]
    fn mackey_expansion_of_lower_then_upper() {
        // lowerstar then upperstar on [1,1] -> [2] is I + P
        let f = final_map("[1,1]", "[2]");
        let up = SchMorphism::upperstar(Ring::Int, &f);
        let low = SchMorphism::lowerstar(Ring::Int, &f);
        let comp = SchMorphism::compose(&up, &low).unwrap();
        assert_eq!(comp.num_terms(), 2);
        for (g, c) in comp.terms() {
            assert!(c.is_one());
            assert!(g.entries() == [1, 0, 0, 1] || g.entries() == [0, 1, 1, 0]);
        }
    }

    #[test]
    fn compose_units() {
        let x = SchMorphism::from_graph(
            Ring::Int,
            hom_basis(&ms("[2,1]"), &ms("[1,1,1]"))[1].clone(),
        );
        let idl = SchMorphism::identity(Ring::Int, &ms("[1,1,1]"));
        let idr = SchMorphism::identity(Ring::Int, &ms("[2,1]"));
        assert_eq!(SchMorphism::compose(&idl, &x).unwrap(), x);
        assert_eq!(SchMorphism::compose(&x, &idr).unwrap(), x);
        // id ∘ id over End([2]) has coefficient multinomial(2;2) = 1
        let id2 = SchMorphism::identity(Ring::Int, &ms("[2]"));
        assert_eq!(SchMorphism::compose(&id2, &id2).unwrap(), id2);
    }

    #[test]
    fn span_to_graph_examples() {
        // span [2] <- [1,1] -> [2]: graph = identity([2]) with coefficient 2
        let f = final_map("[1,1]", "[2]");
        let span = Span::new(f.clone(), f.clone()).unwrap();
        let m = SchMorphism::span_to_graph(Ring::Int, &span).unwrap();
        let (g, c) = m.terms().next().unwrap();
        assert_eq!(g, &GraphMorphism::identity(&ms("[2]")));
        assert_eq!(c, &Ring::Int.from_int(2));

        // a span that is already a graph: coefficient 1
        let ident = Multijection::identity(&ms("[1,1]"));
        let span = Span::new(ident.clone(), f.clone()).unwrap();
        let m = SchMorphism::span_to_graph(Ring::Int, &span).unwrap();
        let (g, c) = m.terms().next().unwrap();
        assert_eq!(g, &GraphMorphism::from_lower(&f));
        assert!(c.is_one());
    }

    #[test]
    fn monoidal_product_examples() {
        let id2 = SchMorphism::identity(Ring::Int, &ms("[2]"));
        let id1 = SchMorphism::identity(Ring::Int, &ms("{1:1}"));
        let p = SchMorphism::monoidal_product(&id2, &id1);
        assert_eq!(p, SchMorphism::identity(Ring::Int, &ms("{1:2, 2:1}")));

        let f = final_map("[1,1]", "[2]");
        let low = SchMorphism::lowerstar(Ring::Int, &f);
        let p = SchMorphism::monoidal_product(&low, &id1);
        let (g, c) = p.terms().next().unwrap();
        assert!(c.is_one());
        assert_eq!(g.entries(), &[1, 0, 1, 0, 0, 1]);

        // degree compatibility on two final maps: 2 * 3 = 6
        let g3 = final_map("[2,1]", "[3]");
        let (du, _, _) = Multijection::disjoint_union(&f, &g3);
        assert_eq!(du.degree(), f.degree() * g3.degree());
        assert_eq!(du.degree(), BigUint::from(6u32));
    }

    #[test]
    fn transpose_is_an_antihomomorphism() {
        let g = hom_basis(&ms("[2,1]"), &ms("[1,1,1]"))[0].clone();
        let h = hom_basis(&ms("[1,1,1]"), &ms("[3]"))[0].clone();
        let gh = SchMorphism::compose(
            &SchMorphism::from_graph(Ring::Int, h.clone()),
            &SchMorphism::from_graph(Ring::Int, g.clone()),
        )
        .unwrap();
        let tt = SchMorphism::compose(
            &SchMorphism::from_graph(Ring::Int, g.transpose()),
            &SchMorphism::from_graph(Ring::Int, h.transpose()),
        )
        .unwrap();
        assert_eq!(gh.transpose(), tt);
        assert_eq!(
            SchMorphism::identity(Ring::Int, &ms("[2,1]")).transpose(),
            SchMorphism::identity(Ring::Int, &ms("[2,1]"))
        );
    }

    #[test]
    fn composition_is_associative_on_samples() {
        let shapes = ["[2,1]", "[1,1,1]", "[3]"];
        for b in &shapes {
            for a in &shapes {
                for e in &shapes {
                    for g in hom_basis(&ms(b), &ms(a)).iter().take(3) {
                        for h in hom_basis(&ms(a), &ms(e)).iter().take(3) {
                            for k in hom_basis(&ms(e), &ms("[3]")).iter().take(2) {
                                let g = SchMorphism::from_graph(Ring::Int, g.clone());
                                let h = SchMorphism::from_graph(Ring::Int, h.clone());
                                let k = SchMorphism::from_graph(Ring::Int, k.clone());
                                let left = SchMorphism::compose(
                                    &k,
                                    &SchMorphism::compose(&h, &g).unwrap(),
                                )
                                .unwrap();
                                let right = SchMorphism::compose(
                                    &SchMorphism::compose(&k, &h).unwrap(),
                                    &g,
                                )
                                .unwrap();
                                assert_eq!(left, right);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn shuffle_factorization_round_trip() {
        // already a multi-shuffle: the blocks are identities
        let a = ms("{1:1}");
        let b = ms("{1:1}");
        let du = a.disjoint_union(&b);
        let shuffle = MultiShuffle::new(vec![a.clone(), b.clone()], ms("{1:2}")).unwrap();
        let graph = GraphMorphism::from_lower(&shuffle.underlying);
        let fac = shuffle_factorize(&graph, &du).unwrap();
        assert_eq!(fac.left, GraphMorphism::identity(&a));
        assert_eq!(fac.right, GraphMorphism::identity(&b));
        let re = fac.recompose(Ring::Int).unwrap();
        let (g, c) = re.terms().next().unwrap();
        assert!(c.is_one());
        assert_eq!(g, &graph);
    }

    #[test]
    fn shuffle_factorization_of_a_merge_block() {
        // (lowerstar [1,1]->[2]) ⊔ id_[1] followed by a shuffle into {1:3}
        let f = final_map("[1,1]", "[2]");
        let lowf = GraphMorphism::from_lower(&f);
        let id1 = GraphMorphism::identity(&ms("{1:1}"));
        let (block, src_du, _) = GraphMorphism::monoidal(&lowf, &id1);
        // collapse everything into a single target point of multiplicity 3
        let total = final_map(&block.target().to_string(), "{1:3}");
        let whole = SchMorphism::compose(
            &SchMorphism::lowerstar(Ring::Int, &total),
            &SchMorphism::from_graph(Ring::Int, block),
        )
        .unwrap();
        assert_eq!(whole.num_terms(), 1);
        let (graph, _) = whole.terms().next().unwrap();
        let fac = shuffle_factorize(graph, &src_du).unwrap();
        let re = fac.recompose(Ring::Int).unwrap();
        let (g2, c) = re.terms().next().unwrap();
        assert!(c.is_one());
        assert_eq!(g2, graph);
        assert_eq!(re.num_terms(), 1);
    }

    #[test]
    fn structure_constants_survive_other_rings() {
        let f = final_map("[1,1]", "[2]");
        let up = SchMorphism::upperstar(Ring::Rat, &f);
        let low = SchMorphism::lowerstar(Ring::Rat, &f);
        let comp = SchMorphism::compose(&low, &up).unwrap();
        assert_eq!(comp.as_scalar_identity(), Some(Ring::Rat.from_int(2)));
    }
}
