//! Exact integer linear algebra: Smith normal form, cokernel invariants,
//! finitely presented modules and the maps between them.
//!
//! Matrices are dense with arbitrary-precision entries; pivoting picks the
//! smallest nonzero absolute value, which is adequate at the sizes this
//! engine works at (a few hundred rows).

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::Ring;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        IntMatrix {
            rows,
            cols,
            data: entries.iter().map(|&e| BigInt::from(e)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let p = a * b;
                        out[(i, j)] += p;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * c)
    }

    /// Kronecker product; block `(i,j)` of the result is `self[i,j] * other`.
    pub fn kronecker(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = IntMatrix::zero(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        let b = &other[(p, q)];
                        if !b.is_zero() {
                            out[(i * other.rows + p, j * other.cols + q)] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        IntMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        // fraction-free Gaussian elimination (Bareiss)
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            let t = m[(k, j)].clone();
                            m[(k, j)] = m[(i, j)].clone();
                            m[(i, j)] = t;
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// `U * m * V = D` with `U`, `V` unimodular and `D` diagonal, each diagonal
/// entry dividing the next.
pub struct Snf {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Snf {
    /// Nonzero diagonal entries (the invariant factors including 1s).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n)
            .map(|i| self.d[(i, i)].clone())
            .take_while(|e| !e.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().len()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let mut d = m.clone();
    let rows = d.rows();
    let cols = d.cols();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    // row ops track U (left) and U⁻¹; column ops track V (right) and V⁻¹
    let swap_rows = |d: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, a: usize, b: usize| {
        for j in 0..d.cols() {
            let t = d[(a, j)].clone();
            d[(a, j)] = d[(b, j)].clone();
            d[(b, j)] = t;
        }
        for j in 0..u.cols() {
            let t = u[(a, j)].clone();
            u[(a, j)] = u[(b, j)].clone();
            u[(b, j)] = t;
        }
        for i in 0..ui.rows() {
            let t = ui[(i, a)].clone();
            ui[(i, a)] = ui[(i, b)].clone();
            ui[(i, b)] = t;
        }
    };
    let swap_cols = |d: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, a: usize, b: usize| {
        for i in 0..d.rows() {
            let t = d[(i, a)].clone();
            d[(i, a)] = d[(i, b)].clone();
            d[(i, b)] = t;
        }
        for i in 0..v.rows() {
            let t = v[(i, a)].clone();
            v[(i, a)] = v[(i, b)].clone();
            v[(i, b)] = t;
        }
        for j in 0..vi.cols() {
            let t = vi[(a, j)].clone();
            vi[(a, j)] = vi[(b, j)].clone();
            vi[(b, j)] = t;
        }
    };
    // row[a] -= q * row[b]
    let add_row = |d: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, a: usize, b: usize, q: &BigInt| {
        for j in 0..d.cols() {
            let t = q * &d[(b, j)];
            d[(a, j)] -= t;
        }
        for j in 0..u.cols() {
            let t = q * &u[(b, j)];
            u[(a, j)] -= t;
        }
        for i in 0..ui.rows() {
            let t = q * &ui[(i, a)];
            ui[(i, b)] += t;
        }
    };
    // col[a] -= q * col[b]
    let add_col = |d: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, a: usize, b: usize, q: &BigInt| {
        for i in 0..d.rows() {
            let t = q * &d[(i, b)];
            d[(i, a)] -= t;
        }
        for i in 0..v.rows() {
            let t = q * &v[(i, b)];
            v[(i, a)] -= t;
        }
        for j in 0..vi.cols() {
            let t = q * &vi[(a, j)];
            vi[(b, j)] += t;
        }
    };
    let negate_row = |d: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, a: usize| {
        for j in 0..d.cols() {
            let t = -d[(a, j)].clone();
            d[(a, j)] = t;
        }
        for j in 0..u.cols() {
            let t = -u[(a, j)].clone();
            u[(a, j)] = t;
        }
        for i in 0..ui.rows() {
            let t = -ui[(i, a)].clone();
            ui[(i, a)] = t;
        }
    };

    let n = rows.min(cols);
    let mut k = 0;
    while k < n {
        // find pivot: smallest nonzero absolute value in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if d[(i, j)].is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        if d[(i, j)].abs() < d[(pi, pj)].abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != k {
            swap_rows(&mut d, &mut u, &mut u_inv, k, pi);
        }
        if pj != k {
            swap_cols(&mut d, &mut v, &mut v_inv, k, pj);
        }
        // clear row and column k
        let mut dirty = true;
        while dirty {
            dirty = false;
            for i in k + 1..rows {
                if d[(i, k)].is_zero() {
                    continue;
                }
                let q = div_round(&d[(i, k)], &d[(k, k)]);
                if !q.is_zero() {
                    add_row(&mut d, &mut u, &mut u_inv, i, k, &q);
                }
                if !d[(i, k)].is_zero() {
                    swap_rows(&mut d, &mut u, &mut u_inv, i, k);
                    dirty = true;
                }
            }
            for j in k + 1..cols {
                if d[(k, j)].is_zero() {
                    continue;
                }
                let q = div_round(&d[(k, j)], &d[(k, k)]);
                if !q.is_zero() {
                    add_col(&mut d, &mut v, &mut v_inv, j, k, &q);
                }
                if !d[(k, j)].is_zero() {
                    swap_cols(&mut d, &mut v, &mut v_inv, j, k);
                    dirty = true;
                }
            }
        }
        if d[(k, k)].is_negative() {
            negate_row(&mut d, &mut u, &mut u_inv, k);
        }
        k += 1;
    }

    // enforce the divisibility chain
    loop {
        let mut fixed = true;
        for i in 0..n.saturating_sub(1) {
            let a = d[(i, i)].clone();
            let b = d[(i + 1, i + 1)].clone();
            if a.is_zero() && !b.is_zero() {
                swap_rows(&mut d, &mut u, &mut u_inv, i, i + 1);
                swap_cols(&mut d, &mut v, &mut v_inv, i, i + 1);
                fixed = false;
                continue;
            }
            if b.is_zero() || (&b % &a).is_zero() {
                continue;
            }
            // fold row i+1 into row i, then gcd-eliminate the 2x2 block
            let minus_one = BigInt::from(-1);
            add_row(&mut d, &mut u, &mut u_inv, i, i + 1, &minus_one);
            let mut dirty = true;
            while dirty {
                dirty = false;
                if !d[(i, i + 1)].is_zero() {
                    let q = div_round(&d[(i, i + 1)], &d[(i, i)]);
                    if !q.is_zero() {
                        add_col(&mut d, &mut v, &mut v_inv, i + 1, i, &q);
                    }
                    if !d[(i, i + 1)].is_zero() {
                        swap_cols(&mut d, &mut v, &mut v_inv, i, i + 1);
                        dirty = true;
                    }
                }
                if !d[(i + 1, i)].is_zero() {
                    let q = div_round(&d[(i + 1, i)], &d[(i, i)]);
                    if !q.is_zero() {
                        add_row(&mut d, &mut u, &mut u_inv, i + 1, i, &q);
                    }
                    if !d[(i + 1, i)].is_zero() {
                        swap_rows(&mut d, &mut u, &mut u_inv, i, i + 1);
                        dirty = true;
                    }
                }
            }
            if d[(i, i)].is_negative() {
                negate_row(&mut d, &mut u, &mut u_inv, i);
            }
            if d[(i + 1, i + 1)].is_negative() {
                negate_row(&mut d, &mut u, &mut u_inv, i + 1);
            }
            fixed = false;
        }
        if fixed {
            break;
        }
    }

    Snf { u, u_inv, d, v, v_inv }
}

/// Rounded division: the quotient minimizing `|a - q b|`.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if &r.abs() * 2 > b.abs() {
        if (r.sign() == Sign::Minus) != (b.sign() == Sign::Minus) {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

/// Invariant factors (> 1) and free rank of `Z^rows / image(m)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CokernelInvariants {
    pub factors: Vec<BigUint>,
    pub free_rank: usize,
}

impl CokernelInvariants {
    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty() && self.free_rank == 0
    }

    /// Order of the group if finite.
    pub fn order(&self) -> Option<BigUint> {
        if self.free_rank > 0 {
            return None;
        }
        let mut acc = BigUint::one();
        for f in &self.factors {
            acc *= f;
        }
        Some(acc)
    }
}

impl fmt::Display for CokernelInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.factors {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn cokernel_invariants(m: &IntMatrix) -> CokernelInvariants {
    let snf = smith_normal_form(m);
    let diag = snf.diagonal();
    let factors = diag
        .iter()
        .filter(|e| !e.is_one())
        .map(|e| e.magnitude().clone())
        .collect();
    CokernelInvariants { factors, free_rank: m.rows() - diag.len() }
}

/// A finitely presented module over one of the coefficient rings: `rank`
/// generators, relation columns, evaluated in `ring`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FPModule {
    pub rank: usize,
    pub relations: IntMatrix,
    pub ring: Ring,
}

impl FPModule {
    pub fn new(rank: usize, relations: IntMatrix, ring: Ring) -> Result<Self> {
        if relations.rows() != rank {
            return Err(Error::InvariantViolation(format!(
                "relations have {} rows for {} generators",
                relations.rows(),
                rank
            )));
        }
        Ok(FPModule { rank, relations, ring })
    }

    pub fn free(rank: usize, ring: Ring) -> Self {
        FPModule { rank, relations: IntMatrix::zero(rank, 0), ring }
    }

    /// `Z/n` on a single generator (over the given ring).
    pub fn cyclic(n: u64, ring: Ring) -> Self {
        FPModule {
            rank: 1,
            relations: IntMatrix::from_i64(1, 1, &[n as i64]),
            ring,
        }
    }

    /// Invariant factors and free rank, reduced according to the ring:
    /// over Q all torsion dies; over the p-local ring only the p-part of
    /// each factor survives; over Z/m everything is taken mod m.
    pub fn invariants(&self) -> CokernelInvariants {
        let raw = cokernel_invariants(&self.relations);
        match self.ring {
            Ring::Int => raw,
            Ring::Rat => CokernelInvariants { factors: vec![], free_rank: raw.free_rank },
            Ring::Local(p) => {
                let p_big = BigUint::from(p);
                let mut factors: Vec<BigUint> = raw
                    .factors
                    .iter()
                    .map(|d| p_big.pow(crate::arith::valuation(p, d) as u32))
                    .filter(|f| !f.is_one())
                    .collect();
                factors.sort();
                CokernelInvariants { factors, free_rank: raw.free_rank }
            }
            Ring::Mod(m) => {
                let m_big = BigUint::from(m);
                let mut factors: Vec<BigUint> = raw
                    .factors
                    .iter()
                    .map(|d| d.gcd(&m_big))
                    .chain(std::iter::repeat_n(m_big.clone(), raw.free_rank))
                    .filter(|f| !f.is_one())
                    .collect();
                factors.sort();
                CokernelInvariants { factors, free_rank: 0 }
            }
        }
    }

    /// Does `v` lie in the relation submodule (the image of the relation
    /// matrix over Z)?
    pub fn in_relation_image(&self, v: &[BigInt]) -> bool {
        solve(&self.relations, v).is_some()
    }

    /// Direct sum, stacking generators and relations block-diagonally.
    pub fn direct_sum(&self, other: &FPModule) -> FPModule {
        assert_eq!(self.ring, other.ring);
        let rank = self.rank + other.rank;
        let cols = self.relations.cols() + other.relations.cols();
        let mut relations = IntMatrix::zero(rank, cols);
        for i in 0..self.rank {
            for j in 0..self.relations.cols() {
                relations[(i, j)] = self.relations[(i, j)].clone();
            }
        }
        for i in 0..other.rank {
            for j in 0..other.relations.cols() {
                relations[(self.rank + i, self.relations.cols() + j)] =
                    other.relations[(i, j)].clone();
            }
        }
        FPModule { rank, relations, ring: self.ring }
    }

    /// Tensor product: generator pairs row-major, relations `r⊗e_j` and
    /// `e_i⊗r`.
    pub fn tensor(&self, other: &FPModule) -> FPModule {
        assert_eq!(self.ring, other.ring);
        let rank = self.rank * other.rank;
        let ra = self.relations.cols();
        let rb = other.relations.cols();
        let mut relations = IntMatrix::zero(rank, ra * other.rank + self.rank * rb);
        let mut col = 0;
        for c in 0..ra {
            for j in 0..other.rank {
                for i in 0..self.rank {
                    relations[(i * other.rank + j, col)] = self.relations[(i, c)].clone();
                }
                col += 1;
            }
        }
        for i in 0..self.rank {
            for c in 0..rb {
                for j in 0..other.rank {
                    relations[(i * other.rank + j, col)] = other.relations[(j, c)].clone();
                }
                col += 1;
            }
        }
        FPModule { rank, relations, ring: self.ring }
    }
}

/// A module map carried by an explicit lift on generators, checked to send
/// relations into relations.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub domain: FPModule,
    pub codomain: FPModule,
    pub lift: IntMatrix,
}

impl ModuleMap {
    pub fn new(domain: FPModule, codomain: FPModule, lift: IntMatrix) -> Result<Self> {
        if lift.rows() != codomain.rank || lift.cols() != domain.rank {
            return Err(Error::IllDefinedLift(format!(
                "lift is {}x{}, expected {}x{}",
                lift.rows(),
                lift.cols(),
                codomain.rank,
                domain.rank
            )));
        }
        let mapped = lift.mul(&domain.relations);
        for j in 0..mapped.cols() {
            if !codomain.in_relation_image(&mapped.column(j)) {
                return Err(Error::IllDefinedLift(format!(
                    "relation column {j} does not map into the codomain relations"
                )));
            }
        }
        Ok(ModuleMap { domain, codomain, lift })
    }

    pub fn identity(module: &FPModule) -> Self {
        ModuleMap {
            domain: module.clone(),
            codomain: module.clone(),
            lift: IntMatrix::identity(module.rank),
        }
    }

    pub fn compose(&self, first: &ModuleMap) -> Result<ModuleMap> {
        if first.codomain != self.domain {
            return Err(Error::EndpointMismatch("module map composition".into()));
        }
        Ok(ModuleMap {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            lift: self.lift.mul(&first.lift),
        })
    }

    /// Equality as maps: lifts agree on every generator modulo relations.
    pub fn equals(&self, other: &ModuleMap) -> bool {
        if self.domain != other.domain || self.codomain != other.codomain {
            return false;
        }
        let diff = self.lift.sub(&other.lift);
        (0..diff.cols()).all(|j| self.codomain.in_relation_image(&diff.column(j)))
    }

    /// Invariants of the kernel, computed from the preimage lattice of the
    /// codomain relations.
    pub fn kernel_invariants(&self) -> CokernelInvariants {
        // Λ = { x : lift·x ∈ im(codomain.relations) } is the projection to
        // the x-block of ker [lift | -relations].
        let stacked = self.lift.hcat(&self.codomain.relations.scale(&BigInt::from(-1)));
        let kernel = kernel_basis(&stacked);
        let dom_rank = self.domain.rank;
        let mut gens = IntMatrix::zero(dom_rank, kernel.len() + self.domain.relations.cols());
        for (c, v) in kernel.iter().enumerate() {
            for i in 0..dom_rank {
                gens[(i, c)] = v[i].clone();
            }
        }
        // im(domain.relations) ⊆ Λ always; include it among the generators so
        // the lattice basis covers it, then quotient by it.
        for c in 0..self.domain.relations.cols() {
            for i in 0..dom_rank {
                gens[(i, kernel.len() + c)] = self.domain.relations[(i, c)].clone();
            }
        }
        let basis = lattice_basis(&gens);
        // express the domain relations in the lattice basis
        let mut rel_cols = Vec::new();
        for c in 0..self.domain.relations.cols() {
            let col = self.domain.relations.column(c);
            let coords = solve_exact(&basis, &col).expect("relations lie in the lattice");
            rel_cols.push(coords);
        }
        let mut rel = IntMatrix::zero(basis.cols(), rel_cols.len());
        for (c, col) in rel_cols.iter().enumerate() {
            for i in 0..col.len() {
                rel[(i, c)] = col[i].clone();
            }
        }
        FPModule { rank: basis.cols(), relations: rel, ring: self.domain.ring }.invariants()
    }
}

/// Solve `m x = c` over the integers, if possible.
pub fn solve(m: &IntMatrix, c: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows(), c.len());
    let snf = smith_normal_form(m);
    let uc: Vec<BigInt> = (0..m.rows())
        .map(|i| {
            (0..m.rows())
                .map(|j| &snf.u[(i, j)] * &c[j])
                .sum::<BigInt>()
        })
        .collect();
    let n = m.rows().min(m.cols());
    let mut y = vec![BigInt::zero(); m.cols()];
    for i in 0..m.rows() {
        let d = if i < n { snf.d[(i, i)].clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !uc[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = uc[i].div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    let x: Vec<BigInt> = (0..m.cols())
        .map(|i| {
            (0..m.cols())
                .map(|j| &snf.v[(i, j)] * &y[j])
                .sum::<BigInt>()
        })
        .collect();
    Some(x)
}

/// Solve when the solution is known to exist and be unique (basis matrix).
fn solve_exact(m: &IntMatrix, c: &[BigInt]) -> Option<Vec<BigInt>> {
    solve(m, c)
}

/// Basis of the integer kernel of `m`, one vector per column of the result.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    (r..m.cols()).map(|j| snf.v.column(j)).collect()
}

/// A basis (as a `rows × rank` matrix) of the lattice spanned by the columns
/// of `gens`.
pub fn lattice_basis(gens: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(gens);
    let r = snf.rank();
    // columns of U⁻¹ · D span the lattice
    let mut basis = IntMatrix::zero(gens.rows(), r);
    for k in 0..r {
        let d = snf.d[(k, k)].clone();
        for i in 0..gens.rows() {
            basis[(i, k)] = &snf.u_inv[(i, k)] * &d;
        }
    }
    basis
}

/// Rank of a set of sparse integer vectors (equal to the rank over Q).
/// Fraction-free elimination with gcd reduction.
pub fn sparse_integer_rank(vectors: Vec<Vec<(usize, BigInt)>>) -> usize {
    let mut pivots: Vec<(usize, Vec<(usize, BigInt)>)> = Vec::new();
    for mut v in vectors {
        loop {
            v.retain(|(_, e)| !e.is_zero());
            if v.is_empty() {
                break;
            }
            v.sort_by_key(|&(i, _)| i);
            let lead = v[0].0;
            match pivots.iter().find(|(p, _)| *p == lead) {
                None => {
                    reduce_content(&mut v);
                    pivots.push((lead, v));
                    break;
                }
                Some((_, pv)) => {
                    let a = pv[0].1.clone();
                    let b = v[0].1.clone();
                    // v := a·v − b·pivot
                    let mut merged: std::collections::BTreeMap<usize, BigInt> =
                        std::collections::BTreeMap::new();
                    for (i, e) in &v {
                        merged.insert(*i, e * &a);
                    }
                    for (i, e) in pv {
                        let t = e * &b;
                        *merged.entry(*i).or_insert_with(BigInt::zero) -= t;
                    }
                    v = merged.into_iter().collect();
                }
            }
        }
    }
    pivots.len()
}

fn reduce_content(v: &mut [(usize, BigInt)]) {
    let mut g = BigInt::zero();
    for (_, e) in v.iter() {
        g = g.gcd(e);
    }
    if g > BigInt::one() {
        for (_, e) in v.iter_mut() {
            *e /= &g;
        }
    }
}

/// Rank of dense rational vectors.
pub fn rational_rank(vectors: &[Vec<BigRational>]) -> usize {
    let mut rows: Vec<Vec<BigRational>> = vectors.to_vec();
    let mut rank = 0;
    let width = rows.first().map_or(0, |r| r.len());
    for col in 0..width {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let pivot = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = &rows[r][col] / &pivot;
                for c in col..width {
                    let t = &rows[rank][c] * &factor;
                    rows[r][c] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMatrix) -> Snf {
        let snf = smith_normal_form(m);
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d, "U m V = D");
        assert_eq!(snf.u.mul(&snf.u_inv), IntMatrix::identity(m.rows()));
        assert_eq!(snf.v.mul(&snf.v_inv), IntMatrix::identity(m.cols()));
        assert_eq!(snf.u.determinant().abs(), BigInt::one());
        assert_eq!(snf.v.determinant().abs(), BigInt::one());
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain");
        }
        snf
    }

    #[test]
    fn snf_diag_example() {
        let m = IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]);
        let snf = check_snf(&m);
        assert_eq!(snf.diagonal(), vec![BigInt::one(), BigInt::from(6)]);
    }

    #[test]
    fn snf_zero_and_identity() {
        let z = IntMatrix::zero(3, 2);
        let snf = check_snf(&z);
        assert!(snf.d.is_zero());
        let i = IntMatrix::identity(3);
        let snf = check_snf(&i);
        assert_eq!(snf.d, IntMatrix::identity(3));
    }

    #[test]
    fn snf_rectangular() {
        let m = IntMatrix::from_i64(3, 4, &[2, 4, 4, 2, -6, 6, 12, 0, 10, -4, -16, 8]);
        check_snf(&m);
    }

    #[test]
    fn cokernel_examples() {
        let m = IntMatrix::from_i64(1, 1, &[2]);
        let inv = cokernel_invariants(&m);
        assert_eq!(inv.to_string(), "Z/2");

        let m = IntMatrix::from_i64(1, 1, &[4]);
        assert_eq!(cokernel_invariants(&m).to_string(), "Z/4");

        let m = IntMatrix::zero(3, 0);
        assert_eq!(cokernel_invariants(&m).to_string(), "Z^3");
    }

    #[test]
    fn ring_reduction_of_invariants() {
        let m = FPModule::cyclic(6, Ring::Local(3));
        assert_eq!(m.invariants().to_string(), "Z/3");
        let m = FPModule::cyclic(6, Ring::Rat);
        assert_eq!(m.invariants().to_string(), "0");
        let m = FPModule::free(2, Ring::Rat);
        assert_eq!(m.invariants().to_string(), "Z^2");
        let m = FPModule::cyclic(6, Ring::Mod(4));
        assert_eq!(m.invariants().to_string(), "Z/2");
    }

    #[test]
    fn induced_map_examples() {
        let z = FPModule::free(1, Ring::Int);
        let z2 = FPModule::cyclic(2, Ring::Int);
        // identity lift
        let id = ModuleMap::identity(&z2);
        assert!(id.equals(&ModuleMap::identity(&z2)));
        // quotient Z -> Z/2
        let q = ModuleMap::new(z.clone(), z2.clone(), IntMatrix::from_i64(1, 1, &[1])).unwrap();
        assert_eq!(q.lift[(0, 0)], BigInt::one());
        // multiplication by 2 on Z/4 has kernel of order 2
        let z4 = FPModule::cyclic(4, Ring::Int);
        let dbl = ModuleMap::new(z4.clone(), z4.clone(), IntMatrix::from_i64(1, 1, &[2])).unwrap();
        let ker = dbl.kernel_invariants();
        assert_eq!(ker.order(), Some(BigUint::from(2u32)));
        // an ill-defined lift is rejected: Z/2 -> Z via identity
        assert!(ModuleMap::new(z2, z, IntMatrix::from_i64(1, 1, &[1])).is_err());
    }

    #[test]
    fn solve_examples() {
        let m = IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]);
        let x = solve(&m, &[BigInt::from(4), BigInt::from(9)]).unwrap();
        assert_eq!(x, vec![BigInt::from(2), BigInt::from(3)]);
        assert!(solve(&m, &[BigInt::from(1), BigInt::from(0)]).is_none());
    }

    #[test]
    fn tensor_of_cyclics() {
        let a = FPModule::cyclic(4, Ring::Int);
        let b = FPModule::cyclic(6, Ring::Int);
        let t = a.tensor(&b);
        assert_eq!(t.invariants().to_string(), "Z/2");
    }

    #[test]
    fn rank_helpers() {
        let vecs = vec![
            vec![(0, BigInt::from(2)), (1, BigInt::from(4))],
            vec![(0, BigInt::from(1)), (1, BigInt::from(2))],
            vec![(1, BigInt::from(1))],
        ];
        assert_eq!(sparse_integer_rank(vecs), 2);

        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let rows = vec![
            vec![BigRational::one(), half.clone()],
            vec![half.clone(), BigRational::new(BigInt::one(), BigInt::from(4))],
        ];
        assert_eq!(rational_rank(&rows), 1);
    }
}
