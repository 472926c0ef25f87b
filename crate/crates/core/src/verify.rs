//! Self-check suites over exhaustive small enumerations: associativity of
//! composition, the Hecke relation, functoriality of the realization, and
//! p-local reduction.  The CLI exposes these; the heavier acceptance tests
//! build on the same routines.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::Result;
use crate::exec;
use crate::gamma;
use crate::multijection::Multijection;
use crate::multiset::PartitionShape;
use crate::plocal;
use crate::ring::Ring;
use crate::schurcat::{hom_basis, GraphMorphism, SchMorphism};

/// Outcome of one suite: how many cases ran and which failed.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Tiny deterministic generator for subsampling large enumerations.
#[derive(Clone)]
struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
}

fn representatives(max_card: u64) -> Vec<crate::multiset::Multiset> {
    (0..=max_card)
        .flat_map(|n| PartitionShape::all_of_cardinality(n))
        .map(|s| s.representative())
        .collect()
}

/// For every multijection between multisets of cardinality up to the bound:
/// pulling back then pushing forward is multiplication by the degree, and
/// the degree is the multiplicity-factorial quotient.
pub fn hecke_suite(max_card: u64) -> SuiteReport {
    let reps = representatives(max_card);
    let mut jobs = Vec::new();
    for s in &reps {
        for t in &reps {
            if s.cardinality() != t.cardinality() {
                continue;
            }
            for f in Multijection::all_between(s, t) {
                jobs.push(f);
            }
        }
    }
    let failures: Vec<String> = exec::map_collect(&jobs, |f| {
        let up = SchMorphism::upperstar(Ring::Int, f);
        let low = SchMorphism::lowerstar(Ring::Int, f);
        let comp = match SchMorphism::compose(&low, &up) {
            Ok(c) => c,
            Err(e) => return Some(format!("compose failed for {f:?}: {e}")),
        };
        let deg = f.degree();
        // cross-check the degree formula target!/source!
        let t_fact = f.target().factorial();
        let s_fact = f.source().factorial();
        if &deg * &s_fact != t_fact {
            return Some(format!("degree of {f:?} is not target!/source!"));
        }
        match comp.as_scalar_identity() {
            Some(c) if c == Ring::Int.from_biguint(&deg) => None,
            other => Some(format!(
                "lower∘upper for {} -> {} gave {other:?}, wanted degree {deg}",
                f.source(),
                f.target()
            )),
        }
    })
    .into_iter()
    .flatten()
    .collect();
    SuiteReport { suite: "hecke".into(), cases: jobs.len(), failures }
}

/// Associativity of composition on graph triples, exhaustive for small
/// cardinalities and deterministically subsampled above.
pub fn assoc_suite(max_card: u64, budget: usize) -> SuiteReport {
    let reps = representatives(max_card);
    let mut triples = Vec::new();
    let mut rng = XorShift(0x5eed_cafe_f00d_1234);
    for b in &reps {
        for a in &reps {
            if a.cardinality() != b.cardinality() {
                continue;
            }
            for e in &reps {
                if e.cardinality() != a.cardinality() {
                    continue;
                }
                for d in &reps {
                    if d.cardinality() != e.cardinality() {
                        continue;
                    }
                    for g in hom_basis(b, a) {
                        for h in hom_basis(a, e) {
                            for k in hom_basis(e, d) {
                                triples.push((g.clone(), h.clone(), k));
                            }
                        }
                    }
                }
            }
        }
    }
    if triples.len() > budget {
        let mut sampled = Vec::with_capacity(budget);
        for _ in 0..budget {
            let i = (rng.next() % triples.len() as u64) as usize;
            sampled.push(triples[i].clone());
        }
        triples = sampled;
    }
    let failures: Vec<String> = exec::map_collect(&triples, |(g, h, k)| {
        let g = SchMorphism::from_graph(Ring::Int, g.clone());
        let h = SchMorphism::from_graph(Ring::Int, h.clone());
        let k = SchMorphism::from_graph(Ring::Int, k.clone());
        let left = SchMorphism::compose(&k, &SchMorphism::compose(&h, &g).unwrap()).unwrap();
        let right = SchMorphism::compose(&SchMorphism::compose(&k, &h).unwrap(), &g).unwrap();
        (left != right).then(|| {
            format!(
                "associativity fails on {} -> {} -> {} -> {}",
                g.source(),
                g.target(),
                h.target(),
                k.target()
            )
        })
    })
    .into_iter()
    .flatten()
    .collect();
    SuiteReport { suite: "assoc".into(), cases: triples.len(), failures }
}

/// Functoriality of the realization: composing graphs then realizing equals
/// multiplying realizations, at width equal to the cardinality.  Exhaustive
/// through cardinality 3, subsampled above.
pub fn functor_suite(max_card: u64, budget: usize) -> SuiteReport {
    let reps = representatives(max_card);
    let mut pairs = Vec::new();
    let mut rng = XorShift(0x0dd_ba11_5eed_7777);
    for b in &reps {
        for a in &reps {
            if a.cardinality() != b.cardinality() {
                continue;
            }
            for e in &reps {
                if e.cardinality() != a.cardinality() {
                    continue;
                }
                let exhaustive = a.cardinality() <= 3;
                for g in hom_basis(b, a) {
                    for h in hom_basis(a, e) {
                        if exhaustive || rng.next() % 11 == 0 {
                            pairs.push((g.clone(), h.clone()));
                        }
                    }
                }
            }
        }
    }
    if pairs.len() > budget {
        let mut sampled = Vec::with_capacity(budget);
        for _ in 0..budget {
            let i = (rng.next() % pairs.len() as u64) as usize;
            sampled.push(pairs[i].clone());
        }
        pairs = sampled;
    }
    let failures: Vec<String> = exec::map_collect(&pairs, |(g, h)| {
        check_functor_pair(g, h).err()
    })
    .into_iter()
    .flatten()
    .collect();
    SuiteReport { suite: "functor".into(), cases: pairs.len(), failures }
}

/// One functoriality case: realize(h∘g) = realize(h)·realize(g), exactly.
pub fn check_functor_pair(g: &GraphMorphism, h: &GraphMorphism) -> std::result::Result<(), String> {
    let width = g.source().cardinality() as usize;
    let composed = SchMorphism::compose(
        &SchMorphism::from_graph(Ring::Int, h.clone()),
        &SchMorphism::from_graph(Ring::Int, g.clone()),
    )
    .unwrap();
    let direct = gamma::realize(&composed, width);
    let product = gamma::realize_graph(h, width).mul(&gamma::realize_graph(g, width));
    for i in 0..product.rows() {
        for j in 0..product.cols() {
            let want = Ring::Int.from_int(product[(i, j)].clone());
            if *direct.entry(i, j) != want {
                return Err(format!(
                    "realization disagrees at ({i},{j}) for {} -> {} -> {}",
                    g.source(),
                    g.target(),
                    h.target()
                ));
            }
        }
    }
    Ok(())
}

/// p-local reduction: covers have p-power multiplicities and degree prime to
/// p; split idempotents square to themselves; the pushforward absorbs the
/// idempotent.
pub fn preduce_suite(max_card: u64, idempotent_card: u64) -> SuiteReport {
    let mut cases = 0usize;
    let mut jobs = Vec::new();
    for p in [2u64, 3, 5] {
        for n in 0..=max_card {
            for shape in PartitionShape::all_of_cardinality(n) {
                jobs.push((p, shape.representative()));
            }
        }
    }
    cases += jobs.len();
    let mut failures: Vec<String> = exec::map_collect(&jobs, |(p, alpha)| {
        let r = match plocal::p_reduce(alpha, *p) {
            Ok(r) => r,
            Err(e) => return Some(format!("p_reduce({alpha}, {p}) failed: {e}")),
        };
        for &(_, m) in r.reduced.entries() {
            let mut m = m;
            while m % p == 0 {
                m /= p;
            }
            if m != 1 {
                return Some(format!("cover of {alpha} at {p} has a non-power multiplicity"));
            }
        }
        if (&r.degree % BigUint::from(*p)).is_zero() {
            return Some(format!("degree of the cover of {alpha} is divisible by {p}"));
        }
        if *p == 2 && alpha.cardinality() <= idempotent_card {
            let ring = Ring::Local(*p);
            let e = match plocal::split_idempotent(&r, ring) {
                Ok(e) => e,
                Err(e) => return Some(format!("idempotent for {alpha}: {e}")),
            };
            let ee = SchMorphism::compose(&e, &e).unwrap();
            if ee != e {
                return Some(format!("e² ≠ e for {alpha} at p = {p}"));
            }
            let low = SchMorphism::lowerstar(ring, &r.cover);
            if SchMorphism::compose(&low, &e).unwrap() != low {
                return Some(format!("f_* ∘ e ≠ f_* for {alpha} at p = {p}"));
            }
        }
        None
    })
    .into_iter()
    .flatten()
    .collect();
    // characteristic zero for small cardinalities
    for n in 0..=max_card.min(4) {
        for shape in PartitionShape::all_of_cardinality(n) {
            let alpha = shape.representative();
            cases += 1;
            let r = plocal::char0_reduce(&alpha);
            let e = match plocal::split_idempotent(&r, Ring::Rat) {
                Ok(e) => e,
                Err(err) => {
                    failures.push(format!("char-0 idempotent for {alpha}: {err}"));
                    continue;
                }
            };
            let ee = SchMorphism::compose(&e, &e).unwrap();
            if ee != e {
                failures.push(format!("char-0 e² ≠ e for {alpha}"));
            }
        }
    }
    SuiteReport { suite: "preduce".into(), cases, failures }
}

/// Run a suite by name.
pub fn run_suite(name: &str, max_card: u64) -> Result<SuiteReport> {
    match name {
        "hecke" => Ok(hecke_suite(max_card)),
        "assoc" => Ok(assoc_suite(max_card, 2000)),
        "functor" => Ok(functor_suite(max_card, 2000)),
        "preduce" => Ok(preduce_suite(max_card, 5)),
        _ => Err(crate::error::Error::Parse {
            pos: 0,
            msg: format!("unknown suite {name:?}; expected assoc, hecke, functor, or preduce"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hecke_suite_passes_small() {
        let r = hecke_suite(3);
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.cases > 10);
    }

    #[test]
    fn assoc_suite_passes_small() {
        let r = assoc_suite(3, 400);
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn functor_suite_passes_small() {
        let r = functor_suite(2, 400);
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn preduce_suite_passes_small() {
        let r = preduce_suite(4, 4);
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(run_suite("nope", 3).is_err());
    }
}
