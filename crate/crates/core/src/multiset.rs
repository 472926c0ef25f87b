//! Finite multisets over a fixed countable label universe.
//!
//! A multiset stores its support as labels with positive multiplicities, in
//! increasing label order.  Everything downstream (morphism enumeration,
//! basis orders, serialization) derives its ordering from this canonical
//! storage order, so outputs are reproducible bit for bit.
//!
//! Text syntax: `{1:2, 2:1}` lists label:multiplicity pairs; `[2,1]` is the
//! ordered-partition shorthand for labels `1..k` carrying the listed
//! multiplicities (zero entries are skipped).  Parser and printer round-trip.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// An element of the label universe.  Labels are opaque small integers;
/// within one multiset they are distinct.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(pub u32);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite multiset: a finite support of labels, each with multiplicity ≥ 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Multiset {
    entries: Vec<(Label, u64)>,
}

impl Multiset {
    /// The empty multiset.
    pub fn empty() -> Self {
        Multiset { entries: Vec::new() }
    }

    /// Build from arbitrary (label, multiplicity) pairs; duplicates are
    /// summed and zero multiplicities dropped.
    pub fn from_entries<I: IntoIterator<Item = (Label, u64)>>(iter: I) -> Self {
        let mut entries: Vec<(Label, u64)> = Vec::new();
        for (l, m) in iter {
            if m == 0 {
                continue;
            }
            entries.push((l, m));
        }
        entries.sort_by_key(|&(l, _)| l);
        entries.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        Multiset { entries }
    }

    pub fn singleton(label: Label, mult: u64) -> Self {
        Multiset::from_entries([(label, mult)])
    }

    /// The ordered partition `[m1,…,mk]`: label `i` gets multiplicity `m_{i}`
    /// for `i = 1..k`; zero parts contribute nothing.
    pub fn ordered_partition(parts: &[u64]) -> Self {
        Multiset::from_entries(
            parts
                .iter()
                .enumerate()
                .map(|(i, &m)| (Label(i as u32 + 1), m)),
        )
    }

    /// The set `[1^n] = {1, …, n}`, every multiplicity 1.
    pub fn standard_set(n: u64) -> Self {
        Multiset::from_entries((1..=n).map(|i| (Label(i as u32), 1)))
    }

    pub fn entries(&self) -> &[(Label, u64)] {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = Label> + '_ {
        self.entries.iter().map(|&(l, _)| l)
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn multiplicity(&self, label: Label) -> u64 {
        match self.entries.binary_search_by_key(&label, |&(l, _)| l) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0,
        }
    }

    /// Position of `label` in the canonical support order.
    pub fn position(&self, label: Label) -> Option<usize> {
        self.entries.binary_search_by_key(&label, |&(l, _)| l).ok()
    }

    /// Sum of all multiplicities.
    pub fn cardinality(&self) -> u64 {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    /// `α! = ∏ μ(s)!` over the support.
    pub fn factorial(&self) -> BigUint {
        let mut acc = BigUint::one();
        for &(_, m) in &self.entries {
            acc *= arith::factorial(m);
        }
        acc
    }

    /// Pointwise sum of multiplicity functions.
    pub fn sum(&self, other: &Multiset) -> Multiset {
        Multiset::from_entries(
            self.entries.iter().chain(other.entries.iter()).copied(),
        )
    }

    /// Pointwise difference, if `other ≤ self` pointwise.
    pub fn checked_sub(&self, other: &Multiset) -> Option<Multiset> {
        let mut entries = Vec::new();
        for &(l, m) in &self.entries {
            let o = other.multiplicity(l);
            if o > m {
                return None;
            }
            if m - o > 0 {
                entries.push((l, m - o));
            }
        }
        for &(l, _) in &other.entries {
            if self.multiplicity(l) == 0 {
                return None;
            }
        }
        Some(Multiset { entries })
    }

    /// Disjoint union: supports are kept apart by relabeling both sides onto
    /// fresh labels `1..`.  The injection records map original labels to the
    /// fresh ones.
    pub fn disjoint_union(&self, other: &Multiset) -> DisjointUnion {
        let mut entries = Vec::new();
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut next: u32 = 1;
        for &(l, m) in &self.entries {
            entries.push((Label(next), m));
            left.push((l, Label(next)));
            next += 1;
        }
        for &(l, m) in &other.entries {
            entries.push((Label(next), m));
            right.push((l, Label(next)));
            next += 1;
        }
        DisjointUnion {
            result: Multiset { entries },
            left,
            right,
        }
    }

    /// Product multiset: support is the set of support pairs, relabeled onto
    /// fresh labels `1..` in row-major order; multiplicities multiply.
    /// The pair record lists, per fresh support point, the originating pair.
    pub fn product(&self, other: &Multiset) -> (Multiset, Vec<(Label, (Label, Label))>) {
        let mut entries = Vec::new();
        let mut pairs = Vec::new();
        let mut next: u32 = 1;
        for &(x, mx) in &self.entries {
            for &(y, my) in &other.entries {
                entries.push((Label(next), mx * my));
                pairs.push((Label(next), (x, y)));
                next += 1;
            }
        }
        (Multiset { entries }, pairs)
    }

    /// The unordered partition of multiplicities; two multisets are
    /// isomorphic exactly when their shapes agree.
    pub fn canonical_shape(&self) -> PartitionShape {
        let mut mults: Vec<u64> = self.entries.iter().map(|&(_, m)| m).collect();
        mults.sort_unstable_by(|a, b| b.cmp(a));
        PartitionShape { mults }
    }

    /// All ordered pairs `(a, b)` with `a + b = self` pointwise, empty parts
    /// included, in lexicographic order of the left part's multiplicity
    /// vector.  There are `∏ (μ(x)+1)` of them.
    pub fn splittings(&self) -> Vec<(Multiset, Multiset)> {
        let mut out = Vec::new();
        let k = self.entries.len();
        let mut choice = vec![0u64; k];
        loop {
            let a = Multiset::from_entries(
                self.entries
                    .iter()
                    .zip(&choice)
                    .map(|(&(l, _), &c)| (l, c)),
            );
            let b = Multiset::from_entries(
                self.entries
                    .iter()
                    .zip(&choice)
                    .map(|(&(l, m), &c)| (l, m - c)),
            );
            out.push((a, b));
            // odometer, last coordinate fastest
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if choice[i] < self.entries[i].1 {
                    choice[i] += 1;
                    for c in choice[i + 1..].iter_mut() {
                        *c = 0;
                    }
                    break;
                }
            }
        }
    }

    /// All ordered `k`-tuples of multisets summing to `self` pointwise.
    pub fn splittings_k(&self, k: usize) -> Vec<Vec<Multiset>> {
        if k == 0 {
            return if self.is_empty() { vec![vec![]] } else { vec![] };
        }
        if k == 1 {
            return vec![vec![self.clone()]];
        }
        let mut out = Vec::new();
        for (a, b) in self.splittings() {
            for rest in b.splittings_k(k - 1) {
                let mut tuple = Vec::with_capacity(k);
                tuple.push(a.clone());
                tuple.extend(rest);
                out.push(tuple);
            }
        }
        out
    }

    /// All multisets of cardinality `card` supported in labels `1..=width`
    /// (weak compositions), in lexicographic order of the part vectors.
    pub fn all_supported(card: u64, width: usize) -> Vec<Multiset> {
        let mut out = Vec::new();
        let mut parts = vec![0u64; width];
        fn rec(parts: &mut Vec<u64>, i: usize, left: u64, out: &mut Vec<Multiset>) {
            if i + 1 == parts.len() || parts.is_empty() {
                if parts.is_empty() {
                    if left == 0 {
                        out.push(Multiset::empty());
                    }
                    return;
                }
                parts[i] = left;
                out.push(Multiset::ordered_partition(parts));
                return;
            }
            for v in 0..=left {
                parts[i] = v;
                rec(parts, i + 1, left - v, out);
            }
        }
        if width == 0 {
            if card == 0 {
                out.push(Multiset::empty());
            }
            return out;
        }
        rec(&mut parts, 0, card, &mut out);
        out
    }
}

/// Disjoint union with the relabeling injections recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointUnion {
    pub result: Multiset,
    /// original label of the left operand → fresh label
    pub left: Vec<(Label, Label)>,
    /// original label of the right operand → fresh label
    pub right: Vec<(Label, Label)>,
}

/// Isomorphism class of a finite multiset: its multiplicities, weakly
/// decreasing.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct PartitionShape {
    mults: Vec<u64>,
}

impl PartitionShape {
    pub fn new(mut mults: Vec<u64>) -> Result<Self> {
        if mults.iter().any(|&m| m == 0) {
            return Err(Error::InvariantViolation(
                "partition parts must be positive".into(),
            ));
        }
        if mults.windows(2).any(|w| w[0] < w[1]) {
            mults.sort_unstable_by(|a, b| b.cmp(a));
        }
        Ok(PartitionShape { mults })
    }

    pub fn mults(&self) -> &[u64] {
        &self.mults
    }

    pub fn cardinality(&self) -> u64 {
        self.mults.iter().sum()
    }

    pub fn parts(&self) -> usize {
        self.mults.len()
    }

    /// Canonical multiset representative: labels `1..k`, multiplicities in
    /// the stored (weakly decreasing) order.
    pub fn representative(&self) -> Multiset {
        Multiset::ordered_partition(&self.mults)
    }

    /// All partitions of `n`, in decreasing lexicographic order of parts.
    pub fn all_of_cardinality(n: u64) -> Vec<PartitionShape> {
        let mut out = Vec::new();
        let mut parts = Vec::new();
        fn rec(left: u64, max: u64, parts: &mut Vec<u64>, out: &mut Vec<PartitionShape>) {
            if left == 0 {
                out.push(PartitionShape { mults: parts.clone() });
                return;
            }
            let hi = left.min(max);
            for p in (1..=hi).rev() {
                parts.push(p);
                rec(left - p, p, parts, out);
                parts.pop();
            }
        }
        rec(n, n, &mut parts, &mut out);
        out
    }
}

impl fmt::Display for PartitionShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, m) in self.mults.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (l, m)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}:{m}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for Multiset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Parser::new(s).multiset()
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, bytes: src.as_bytes(), pos: 0 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == c {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        self.src[start..self.pos]
            .parse::<u64>()
            .map_err(|e| self.err(e.to_string()))
    }

    fn multiset(&mut self) -> Result<Multiset> {
        let ms = match self.peek() {
            Some(b'{') => self.braced(),
            Some(b'[') => self.bracketed(),
            _ => Err(self.err("expected '{' or '['")),
        }?;
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.err("trailing input"));
        }
        Ok(ms)
    }

    fn braced(&mut self) -> Result<Multiset> {
        self.eat(b'{')?;
        let mut entries = Vec::new();
        if self.peek() == Some(b'}') {
            self.pos += 1;
            return Ok(Multiset::empty());
        }
        loop {
            let label = self.number()?;
            let label = u32::try_from(label).map_err(|_| self.err("label too large"))?;
            self.eat(b':')?;
            let mult = self.number()?;
            if entries.iter().any(|&(Label(l), _)| l == label) {
                return Err(self.err(format!("duplicate label {label}")));
            }
            entries.push((Label(label), mult));
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                }
                Some(b'}') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.err("expected ',' or '}'")),
            }
        }
        Ok(Multiset::from_entries(entries))
    }

    fn bracketed(&mut self) -> Result<Multiset> {
        self.eat(b'[')?;
        let mut parts = Vec::new();
        if self.peek() == Some(b']') {
            self.pos += 1;
            return Ok(Multiset::empty());
        }
        loop {
            parts.push(self.number()?);
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                }
                Some(b']') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.err("expected ',' or ']'")),
            }
        }
        Ok(Multiset::ordered_partition(&parts))
    }
}
