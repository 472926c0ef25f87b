//! Versioned JSON wire formats for every value the CLI reads or writes.
//!
//! Arrays of pairs are used instead of JSON objects wherever keys are
//! numeric, so output order never depends on string sorting of numerals.
//! Big integers and ring elements travel as exact decimal strings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{FPModule, IntMatrix};
use crate::gamma::{CoeffMatrix, WeightMonomial};
use crate::multijection::Multijection;
use crate::multiset::{Label, Multiset, PartitionShape};
use crate::polyfun::{GenKind, SchModulePresentation};
use crate::ring::Ring;
use crate::schurcat::{GraphMorphism, SchMorphism};
use crate::sigma::SigmaModule;

pub const SCHEMA_VERSION: &str = "v1";

/// Response envelope: every CLI output is one of these.
#[derive(Serialize, Deserialize, Debug)]
pub struct Envelope<T> {
    pub schema: String,
    pub command: String,
    pub result: T,
}

impl<T> Envelope<T> {
    pub fn new(command: &str, result: T) -> Self {
        Envelope {
            schema: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            result,
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct MultisetJson {
    pub entries: Vec<(u32, u64)>,
}

impl From<&Multiset> for MultisetJson {
    fn from(ms: &Multiset) -> Self {
        MultisetJson {
            entries: ms.entries().iter().map(|&(Label(l), m)| (l, m)).collect(),
        }
    }
}

impl TryFrom<&MultisetJson> for Multiset {
    type Error = Error;
    fn try_from(j: &MultisetJson) -> Result<Multiset> {
        Ok(Multiset::from_entries(
            j.entries.iter().map(|&(l, m)| (Label(l), m)),
        ))
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct MultijectionJson {
    pub source: MultisetJson,
    pub target: MultisetJson,
    /// pairs source label → target label, in source support order
    pub map: Vec<(u32, u32)>,
}

impl From<&Multijection> for MultijectionJson {
    fn from(f: &Multijection) -> Self {
        MultijectionJson {
            source: f.source().into(),
            target: f.target().into(),
            map: f
                .map()
                .iter()
                .map(|&(Label(a), Label(b))| (a, b))
                .collect(),
        }
    }
}

impl TryFrom<&MultijectionJson> for Multijection {
    type Error = Error;
    fn try_from(j: &MultijectionJson) -> Result<Multijection> {
        Multijection::new(
            (&j.source).try_into()?,
            (&j.target).try_into()?,
            j.map.iter().map(|&(a, b)| (Label(a), Label(b))).collect(),
        )
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct GraphJson {
    pub source: MultisetJson,
    pub target: MultisetJson,
    pub rows: Vec<u32>,
    pub cols: Vec<u32>,
    pub entries: Vec<Vec<u64>>,
}

impl From<&GraphMorphism> for GraphJson {
    fn from(g: &GraphMorphism) -> Self {
        let rows: Vec<u32> = g.source().support().map(|Label(l)| l).collect();
        let cols: Vec<u32> = g.target().support().map(|Label(l)| l).collect();
        let entries = (0..rows.len())
            .map(|i| (0..cols.len()).map(|j| g.entry(i, j)).collect())
            .collect();
        GraphJson {
            source: g.source().into(),
            target: g.target().into(),
            rows,
            cols,
            entries,
        }
    }
}

impl TryFrom<&GraphJson> for GraphMorphism {
    type Error = Error;
    fn try_from(j: &GraphJson) -> Result<GraphMorphism> {
        let source: Multiset = (&j.source).try_into()?;
        let target: Multiset = (&j.target).try_into()?;
        let expect_rows: Vec<u32> = source.support().map(|Label(l)| l).collect();
        let expect_cols: Vec<u32> = target.support().map(|Label(l)| l).collect();
        if j.rows != expect_rows || j.cols != expect_cols {
            return Err(Error::InvalidGraph(
                "row/column labels do not match the canonical support order".into(),
            ));
        }
        let flat: Vec<u64> = j.entries.iter().flatten().copied().collect();
        GraphMorphism::new(source, target, flat)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SchMorphismJson {
    pub ring: String,
    pub source: MultisetJson,
    pub target: MultisetJson,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct TermJson {
    pub coeff: String,
    pub graph: GraphJson,
}

impl From<&SchMorphism> for SchMorphismJson {
    fn from(x: &SchMorphism) -> Self {
        SchMorphismJson {
            ring: x.ring().to_string(),
            source: x.source().into(),
            target: x.target().into(),
            terms: x
                .terms()
                .map(|(g, c)| TermJson { coeff: c.to_string(), graph: g.into() })
                .collect(),
        }
    }
}

impl TryFrom<&SchMorphismJson> for SchMorphism {
    type Error = Error;
    fn try_from(j: &SchMorphismJson) -> Result<SchMorphism> {
        let ring: Ring = j.ring.parse()?;
        let source: Multiset = (&j.source).try_into()?;
        let target: Multiset = (&j.target).try_into()?;
        let mut out = SchMorphism::zero(ring, source, target);
        for t in &j.terms {
            let graph: GraphMorphism = (&t.graph).try_into()?;
            if graph.source() != out.source() || graph.target() != out.target() {
                return Err(Error::EndpointMismatch(
                    "term endpoints differ from the morphism endpoints".into(),
                ));
            }
            out.add_term(graph, ring.parse(&t.coeff)?);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct WeightMonomialJson {
    pub shape: MultisetJson,
    pub width: usize,
    pub exps: Vec<Vec<u64>>,
}

impl From<&WeightMonomial> for WeightMonomialJson {
    fn from(m: &WeightMonomial) -> Self {
        let rows = m.shape.support_size();
        WeightMonomialJson {
            shape: (&m.shape).into(),
            width: m.width,
            exps: (0..rows)
                .map(|r| m.exps[r * m.width..(r + 1) * m.width].to_vec())
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct IntMatrixJson {
    pub rows: usize,
    pub cols: usize,
    /// exact decimal strings
    pub entries: Vec<Vec<String>>,
}

impl From<&IntMatrix> for IntMatrixJson {
    fn from(m: &IntMatrix) -> Self {
        IntMatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect())
                .collect(),
        }
    }
}

impl TryFrom<&IntMatrixJson> for IntMatrix {
    type Error = Error;
    fn try_from(j: &IntMatrixJson) -> Result<IntMatrix> {
        if j.entries.len() != j.rows || j.entries.iter().any(|r| r.len() != j.cols) {
            return Err(Error::Parse { pos: 0, msg: "matrix shape mismatch".into() });
        }
        let mut out = IntMatrix::zero(j.rows, j.cols);
        for (i, row) in j.entries.iter().enumerate() {
            for (jj, s) in row.iter().enumerate() {
                out[(i, jj)] = s
                    .parse()
                    .map_err(|_| Error::Parse { pos: 0, msg: format!("bad integer {s:?}") })?;
            }
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CoeffMatrixJson {
    pub ring: String,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl From<&CoeffMatrix> for CoeffMatrixJson {
    fn from(m: &CoeffMatrix) -> Self {
        CoeffMatrixJson {
            ring: m.ring.to_string(),
            rows: m.rows,
            cols: m.cols,
            entries: (0..m.rows)
                .map(|i| (0..m.cols).map(|j| m.entry(i, j).to_string()).collect())
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct FPModuleJson {
    pub rank: usize,
    pub relations: IntMatrixJson,
    pub ring: String,
}

impl From<&FPModule> for FPModuleJson {
    fn from(m: &FPModule) -> Self {
        FPModuleJson {
            rank: m.rank,
            relations: (&m.relations).into(),
            ring: m.ring.to_string(),
        }
    }
}

impl TryFrom<&FPModuleJson> for FPModule {
    type Error = Error;
    fn try_from(j: &FPModuleJson) -> Result<FPModule> {
        FPModule::new(j.rank, (&j.relations).try_into()?, j.ring.parse()?)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SigmaModuleJson {
    pub n: usize,
    pub rank: usize,
    pub relations: IntMatrixJson,
    pub gen_actions: Vec<IntMatrixJson>,
}

impl From<&SigmaModule> for SigmaModuleJson {
    fn from(m: &SigmaModule) -> Self {
        SigmaModuleJson {
            n: m.degree,
            rank: m.underlying.rank,
            relations: (&m.underlying.relations).into(),
            gen_actions: m.generator_actions.iter().map(|a| a.into()).collect(),
        }
    }
}

impl TryFrom<&SigmaModuleJson> for SigmaModule {
    type Error = Error;
    fn try_from(j: &SigmaModuleJson) -> Result<SigmaModule> {
        let underlying = FPModule::new(j.rank, (&j.relations).try_into()?, Ring::Int)?;
        let actions: Vec<IntMatrix> = j
            .gen_actions
            .iter()
            .map(|a| a.try_into())
            .collect::<Result<_>>()?;
        SigmaModule::new(j.n, underlying, actions)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PresentationJson {
    pub bound: u64,
    pub components: Vec<(Vec<u64>, FPModuleJson)>,
    pub swaps: Vec<(Vec<u64>, usize, IntMatrixJson)>,
    pub merges: Vec<(Vec<u64>, usize, usize, IntMatrixJson, IntMatrixJson)>,
}

impl From<&SchModulePresentation> for PresentationJson {
    fn from(m: &SchModulePresentation) -> Self {
        let components = m
            .components()
            .iter()
            .map(|(s, c)| (s.mults().to_vec(), c.into()))
            .collect();
        let mut swaps = Vec::new();
        let mut merges = Vec::new();
        for g in crate::polyfun::generators(m.bound()) {
            match g.kind {
                GenKind::Swap(pos) => {
                    let a = m.swap_action(&g.shape, pos);
                    swaps.push((g.shape.mults().to_vec(), pos, a.into()));
                }
                GenKind::Merge(i, j) => {
                    let (low, up) = m.merge_actions(&g.shape, i, j);
                    merges.push((g.shape.mults().to_vec(), i, j, low.into(), up.into()));
                }
            }
        }
        PresentationJson { bound: m.bound(), components, swaps, merges }
    }
}

impl TryFrom<&PresentationJson> for SchModulePresentation {
    type Error = Error;
    fn try_from(j: &PresentationJson) -> Result<SchModulePresentation> {
        let mut components = std::collections::BTreeMap::new();
        for (mults, m) in &j.components {
            components.insert(PartitionShape::new(mults.clone())?, m.try_into()?);
        }
        let mut swaps = std::collections::BTreeMap::new();
        for (mults, pos, a) in &j.swaps {
            swaps.insert((PartitionShape::new(mults.clone())?, *pos), a.try_into()?);
        }
        let mut merge_lower = std::collections::BTreeMap::new();
        let mut merge_upper = std::collections::BTreeMap::new();
        for (mults, i, jj, low, up) in &j.merges {
            let shape = PartitionShape::new(mults.clone())?;
            merge_lower.insert((shape.clone(), *i, *jj), low.try_into()?);
            merge_upper.insert((shape, *i, *jj), up.try_into()?);
        }
        SchModulePresentation::from_parts(j.bound, components, swaps, merge_lower, merge_upper)
    }
}
