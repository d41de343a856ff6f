//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers: Smith normal
//! form with both transforms, row echelon forms with transform tracking,
//! integer lattices, finitely presented abelian groups and homomorphisms
//! between them. All algorithms are deterministic: pivots are chosen by
//! minimal absolute value, ties broken by the first position in row-major
//! order.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Dense integer matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from explicit rows. Every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has length {}, expected {}",
                    i,
                    r.len(),
                    cols
                )));
            }
            data.extend(r);
        }
        Ok(IntMatrix { rows: n, cols, data })
    }

    pub fn from_i64_rows(cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            cols,
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows, "vector length must equal row count");
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = self.get(i, j);
                if !b.is_zero() {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// Debug dump: one row per line, space-separated decimal integers.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

fn to_big_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

/// `U · M · V = S` with `U`, `V` unimodular and `S` diagonal with
/// nonnegative entries forming a divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.s.diagonal()
    }
}

/// Elimination state. `a` is transformed in place; the optional matrices
/// record the accumulated row transform `U`, column transform `V` and
/// `V^{-1}`.
struct Eliminator {
    a: Vec<Vec<BigInt>>,
    ncols: usize,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
    vinv: Option<Vec<Vec<BigInt>>>,
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            let mut r = vec![BigInt::zero(); n];
            r[i] = BigInt::one();
            r
        })
        .collect()
}

/// `dst -= q * src` on row vectors.
fn axpy_sub(dst: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

fn two_rows(rows: &mut [Vec<BigInt>], i: usize, k: usize) -> (&mut Vec<BigInt>, &Vec<BigInt>) {
    assert_ne!(i, k);
    if i < k {
        let (lo, hi) = rows.split_at_mut(k);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(i);
        (&mut hi[0], &lo[k])
    }
}

impl Eliminator {
    fn new(a: Vec<Vec<BigInt>>, ncols: usize, track_u: bool, track_v: bool, track_vinv: bool) -> Self {
        let nrows = a.len();
        Eliminator {
            a,
            ncols,
            u: track_u.then(|| identity_rows(nrows)),
            v: track_v.then(|| identity_rows(ncols)),
            vinv: track_vinv.then(|| identity_rows(ncols)),
        }
    }

    fn nrows(&self) -> usize {
        self.a.len()
    }

    /// row_i -= q * row_k
    fn row_sub(&mut self, i: usize, k: usize, q: &BigInt) {
        let (dst, src) = two_rows(&mut self.a, i, k);
        axpy_sub(dst, q, src);
        if let Some(u) = self.u.as_mut() {
            let (dst, src) = two_rows(u, i, k);
            axpy_sub(dst, q, src);
        }
    }

    fn row_add(&mut self, i: usize, k: usize) {
        self.row_sub(i, k, &BigInt::from(-1));
    }

    fn row_swap(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        self.a.swap(i, k);
        if let Some(u) = self.u.as_mut() {
            u.swap(i, k);
        }
    }

    fn row_negate(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -std::mem::take(x);
        }
        if let Some(u) = self.u.as_mut() {
            for x in u[i].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
    }

    /// col_j -= q * col_k
    fn col_sub(&mut self, j: usize, k: usize, q: &BigInt) {
        for row in self.a.iter_mut() {
            if !row[k].is_zero() {
                let t = q * &row[k];
                row[j] -= t;
            }
        }
        if let Some(v) = self.v.as_mut() {
            for row in v.iter_mut() {
                if !row[k].is_zero() {
                    let t = q * &row[k];
                    row[j] -= t;
                }
            }
        }
        if let Some(vinv) = self.vinv.as_mut() {
            // V^{-1} <- (I - q e_k e_j^T)^{-1} V^{-1}: row_k += q row_j
            let (dst, src) = two_rows(vinv, k, j);
            let neg = -q;
            axpy_sub(dst, &neg, src);
        }
    }

    fn col_swap(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(j, k);
        }
        if let Some(v) = self.v.as_mut() {
            for row in v.iter_mut() {
                row.swap(j, k);
            }
        }
        if let Some(vinv) = self.vinv.as_mut() {
            vinv.swap(j, k);
        }
    }

    fn find_min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut best_abs: Option<BigInt> = None;
        for i in t..self.nrows() {
            for j in t..self.ncols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if x.is_one() || (-x).is_one() {
                    return Some((i, j));
                }
                let ax = x.abs();
                if best_abs.as_ref().map_or(true, |b| ax < *b) {
                    best_abs = Some(ax);
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Runs the Smith reduction; returns the number of nonzero diagonal entries.
    fn smith(&mut self) -> usize {
        let nr = self.nrows();
        let nc = self.ncols;
        let mut t = 0;
        while t < nr.min(nc) {
            let Some((pi, pj)) = self.find_min_pivot(t) else { break };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..nr {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = &self.a[i][t] / &self.a[t][t];
                    if !q.is_zero() {
                        self.row_sub(i, t, &q);
                    }
                    if !self.a[i][t].is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..nc {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = &self.a[t][j] / &self.a[t][t];
                    if !q.is_zero() {
                        self.col_sub(j, t, &q);
                    }
                    if !self.a[t][j].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    // Bring the smallest remainder in row/column t to the pivot.
                    let mut best = (t, t);
                    let mut best_abs = self.a[t][t].abs();
                    for i in t + 1..nr {
                        let x = &self.a[i][t];
                        if !x.is_zero() && x.abs() < best_abs {
                            best_abs = x.abs();
                            best = (i, t);
                        }
                    }
                    for j in t + 1..nc {
                        let x = &self.a[t][j];
                        if !x.is_zero() && x.abs() < best_abs {
                            best_abs = x.abs();
                            best = (t, j);
                        }
                    }
                    self.row_swap(t, best.0);
                    self.col_swap(t, best.1);
                    continue;
                }
                let p = self.a[t][t].abs();
                if p.is_one() {
                    break;
                }
                let offender = (t + 1..nr).find(|&i| {
                    (t + 1..nc).any(|j| !self.a[i][j].is_zero() && !self.a[i][j].is_multiple_of(&p))
                });
                match offender {
                    Some(i) => self.row_add(t, i),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.row_negate(t);
            }
            t += 1;
        }
        t
    }

    /// Row echelon form by min-pivot elimination down each column. With
    /// `reduce_above`, entries above each pivot are reduced into `[0, pivot)`.
    /// Returns the pivot columns.
    fn echelon(&mut self, reduce_above: bool) -> Vec<usize> {
        let nr = self.nrows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r >= nr {
                break;
            }
            loop {
                let mut best: Option<usize> = None;
                for i in r..nr {
                    let x = &self.a[i][c];
                    if x.is_zero() {
                        continue;
                    }
                    if best.map_or(true, |b| x.abs() < self.a[b][c].abs()) {
                        best = Some(i);
                        if x.abs().is_one() {
                            break;
                        }
                    }
                }
                let Some(b) = best else { break };
                self.row_swap(r, b);
                let mut clean = true;
                for i in r + 1..nr {
                    if self.a[i][c].is_zero() {
                        continue;
                    }
                    let q = &self.a[i][c] / &self.a[r][c];
                    self.row_sub(i, r, &q);
                    if !self.a[i][c].is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
            if self.a[r][c].is_zero() {
                continue;
            }
            if self.a[r][c].is_negative() {
                self.row_negate(r);
            }
            if reduce_above {
                for i in 0..r {
                    if self.a[i][c].is_zero() {
                        continue;
                    }
                    let q = self.a[i][c].div_floor(&self.a[r][c]);
                    if !q.is_zero() {
                        self.row_sub(i, r, &q);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}

/// Smith normal form `U · M · V = S`.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut e = Eliminator::new(m.to_rows(), m.cols, true, true, false);
    e.smith();
    let s = IntMatrix::from_rows(m.cols, e.a).expect("shape preserved");
    let u = IntMatrix::from_rows(m.rows, e.u.expect("tracked")).expect("square");
    let v = IntMatrix::from_rows(m.cols, e.v.expect("tracked")).expect("square");
    SmithForm { u, s, v }
}

/// Diagonal of the Smith form only (no transforms).
pub fn invariant_factors(cols: usize, rows: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let mut e = Eliminator::new(rows, cols, false, false, false);
    let rank = e.smith();
    (0..rank).map(|t| e.a[t][t].clone()).collect()
}

/// Cokernel `Z^cols / rowspan(rows)`.
pub fn cokernel_structure(cols: usize, rows: Vec<Vec<BigInt>>) -> GroupStructure {
    let diag = invariant_factors(cols, rows);
    GroupStructure::from_diagonal(cols, &diag)
}

// ---------------------------------------------------------------------------
// Echelon forms, left kernels and lattices
// ---------------------------------------------------------------------------

/// Basis of the left kernel `{x : x · A = 0}` of the matrix with the given rows.
pub fn left_kernel(cols: usize, rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = rows.len();
    let mut e = Eliminator::new(rows, cols, true, false, false);
    let pivots = e.echelon(false);
    let rank = pivots.len();
    let u = e.u.expect("tracked");
    debug_assert!(e.a[rank..].iter().all(|r| r.iter().all(Zero::is_zero)));
    let kernel: Vec<Vec<BigInt>> = u.into_iter().skip(rank).collect();
    debug_assert!(kernel.iter().all(|k| k.len() == n));
    kernel
}

/// A sublattice of `Z^dim` stored by its Hermite normal form basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn from_generators(dim: usize, generators: Vec<Vec<BigInt>>) -> Self {
        let mut e = Eliminator::new(generators, dim, false, false, false);
        let pivots = e.echelon(true);
        let basis = e.a.into_iter().take(pivots.len()).collect();
        Lattice { dim, basis, pivots }
    }

    pub fn from_i64_generators(dim: usize, generators: &[Vec<i64>]) -> Self {
        Self::from_generators(dim, to_big_rows(generators))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Coordinates of `v` in the lattice basis, or `None` if `v` is not in the lattice.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.dim);
        let mut rest = v.to_vec();
        let mut out = Vec::with_capacity(self.basis.len());
        let mut col = 0;
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            while col < p {
                if !rest[col].is_zero() {
                    return None;
                }
                col += 1;
            }
            let (q, r) = rest[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            axpy_sub(&mut rest, &q, row);
            out.push(q);
        }
        if rest.iter().all(Zero::is_zero) {
            Some(out)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }
}

// ---------------------------------------------------------------------------
// Group structures and presented groups
// ---------------------------------------------------------------------------

/// Isomorphism type of a finitely generated abelian group:
/// `Z^rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` with `d_1 | d_2 | … | d_k`, each `d_i ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GroupStructure {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl GroupStructure {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        GroupStructure { rank, torsion: Vec::new() }
    }

    /// `(Z/p)^count`
    pub fn elementary(p: u64, count: usize) -> Self {
        GroupStructure { rank: 0, torsion: vec![BigInt::from(p); count] }
    }

    /// Normalizes an arbitrary list of cyclic orders (0 meaning `Z`) into
    /// invariant-factor form.
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        let n = orders.len();
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![BigInt::zero(); n];
                r[i] = orders[i].clone();
                r
            })
            .collect();
        cokernel_structure(n, rows)
    }

    fn from_diagonal(cols: usize, diag: &[BigInt]) -> Self {
        let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
        let torsion = diag.iter().filter(|d| !d.is_zero() && !d.abs().is_one()).map(|d| d.abs()).collect();
        GroupStructure { rank: cols - nonzero, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Direct sum, renormalized.
    pub fn direct_sum(&self, other: &GroupStructure) -> GroupStructure {
        let mut orders: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        orders.extend(std::iter::repeat(BigInt::zero()).take(self.rank + other.rank));
        Self::from_cyclic_orders(&orders)
    }

    /// `Z/2 ⊗ G`
    pub fn mod2(&self) -> GroupStructure {
        let two = BigInt::from(2);
        let count = self.rank + self.torsion.iter().filter(|d| d.is_multiple_of(&two)).count();
        Self::elementary(2, count)
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, d| acc * d)
    }
}

impl fmt::Display for GroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 { "Z".to_string() } else { format!("Z^{}", self.rank) });
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && &self.torsion[j] == d {
                j += 1;
            }
            let k = j - i;
            parts.push(if k == 1 { format!("Z{}", d) } else { format!("Z{}^{}", d, k) });
            i = j;
        }
        f.write_str(&parts.join(" + "))
    }
}

fn bigint_json(x: &BigInt) -> serde_json::Value {
    match x.to_u64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

impl Serialize for GroupStructure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("GroupStructure", 2)?;
        st.serialize_field("rank", &self.rank)?;
        let torsion: Vec<serde_json::Value> = self.torsion.iter().map(bigint_json).collect();
        st.serialize_field("torsion", &torsion)?;
        st.end()
    }
}

/// Coordinates of a group element in the canonical decomposition
/// `Z^rank ⊕ ⊕ Z/d_i`; torsion entries are reduced into `[0, d_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalCoords {
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
}

impl CanonicalCoords {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(Zero::is_zero)
    }
}

/// A finitely generated abelian group `Z^g / rowspan(relators)`.
#[derive(Clone, Debug)]
pub struct PresentedGroup {
    generators: Vec<String>,
    relators: IntMatrix,
    structure: GroupStructure,
    /// Nontrivial summands, free ones first: `(column of V, modulus)`;
    /// modulus 0 marks a free summand.
    summands: Vec<(usize, BigInt)>,
    /// Column transform `V`: `x ↦ x·V` gives Smith coordinates.
    v: IntMatrix,
    /// Generator-space representatives of the canonical summands
    /// (rows of `V^{-1}`), aligned with `summands`.
    representatives: Vec<Vec<BigInt>>,
}

impl PresentedGroup {
    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &IntMatrix {
        &self.relators
    }

    pub fn structure(&self) -> &GroupStructure {
        &self.structure
    }

    pub fn coordinate_map(&self) -> &IntMatrix {
        &self.v
    }

    /// Generator-space vectors representing the canonical summands, free
    /// summands first, then torsion summands in invariant-factor order.
    pub fn summand_representatives(&self) -> &[Vec<BigInt>] {
        &self.representatives
    }

    pub fn summand_moduli(&self) -> Vec<BigInt> {
        self.summands.iter().map(|(_, d)| d.clone()).collect()
    }

    /// Canonical coordinates of the element `Σ x_i g_i`.
    pub fn coordinates(&self, x: &[BigInt]) -> CanonicalCoords {
        assert_eq!(x.len(), self.generators.len(), "coefficient vector length");
        let mut free = Vec::new();
        let mut torsion = Vec::new();
        for (col, d) in &self.summands {
            let mut y = BigInt::zero();
            for (i, a) in x.iter().enumerate() {
                if !a.is_zero() {
                    let vij = self.v.get(i, *col);
                    if !vij.is_zero() {
                        y += a * vij;
                    }
                }
            }
            if d.is_zero() {
                free.push(y);
            } else {
                torsion.push(y.mod_floor(d));
            }
        }
        CanonicalCoords { free, torsion }
    }

    pub fn coordinates_i64(&self, x: &[i64]) -> CanonicalCoords {
        let big: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
        self.coordinates(&big)
    }

    pub fn is_zero(&self, x: &[BigInt]) -> bool {
        self.coordinates(x).is_zero()
    }
}

/// Builds the group `Z^generators / rowspan(relators)`.
pub fn group_from_presentation(generators: Vec<String>, relators: IntMatrix) -> Result<PresentedGroup> {
    let g = generators.len();
    if relators.cols() != g {
        return Err(Error::DimensionMismatch(format!(
            "relator matrix has {} columns but there are {} generators",
            relators.cols(),
            g
        )));
    }
    // Zero and duplicate rows do not change the row span.
    let mut seen = std::collections::HashSet::new();
    let mut rows = Vec::new();
    for i in 0..relators.rows() {
        let r = relators.row(i);
        if r.iter().all(Zero::is_zero) {
            continue;
        }
        if seen.insert(r.to_vec()) {
            rows.push(r.to_vec());
        }
    }
    let mut e = Eliminator::new(rows, g, false, true, true);
    let rank = e.smith();
    let diag: Vec<BigInt> = (0..rank).map(|t| e.a[t][t].clone()).collect();
    let structure = GroupStructure::from_diagonal(g, &diag);
    let mut summands = Vec::new();
    for col in rank..g {
        summands.push((col, BigInt::zero()));
    }
    for (t, d) in diag.iter().enumerate() {
        if !d.is_one() {
            summands.push((t, d.clone()));
        }
    }
    let vinv = e.vinv.expect("tracked");
    let representatives = summands.iter().map(|(col, _)| vinv[*col].clone()).collect();
    let v = IntMatrix::from_rows(g, e.v.expect("tracked")).expect("square");
    Ok(PresentedGroup { generators, relators, structure, summands, v, representatives })
}

/// Presentation with generators `e_1..e_k` and relators `d_i e_i` (0 = free).
pub fn cyclic_sum_group(names: Vec<String>, moduli: &[BigInt]) -> Result<PresentedGroup> {
    let k = moduli.len();
    let rows: Vec<Vec<BigInt>> = moduli
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_zero())
        .map(|(i, d)| {
            let mut r = vec![BigInt::zero(); k];
            r[i] = d.clone();
            r
        })
        .collect();
    group_from_presentation(names, IntMatrix::from_rows(k, rows)?)
}

/// Result of analysing a homomorphism between presented groups.
#[derive(Clone, Debug, Serialize)]
pub struct HomReport {
    pub well_defined: bool,
    pub kernel: Option<GroupStructure>,
    pub cokernel: Option<GroupStructure>,
    /// Isomorphism type of the image.
    pub image: Option<GroupStructure>,
    pub is_isomorphism: bool,
    /// Generators of the kernel, as coefficient vectors over the source generators.
    #[serde(skip)]
    pub kernel_generators: Vec<Vec<BigInt>>,
}

/// Analyses the homomorphism `src → dst` sending generator `i` of `src` to
/// `Σ_j map[i][j] · g_j` in `dst`.
pub fn hom_analysis(src: &PresentedGroup, dst: &PresentedGroup, map: &IntMatrix) -> Result<HomReport> {
    if map.rows() != src.num_generators() || map.cols() != dst.num_generators() {
        return Err(Error::DimensionMismatch(format!(
            "map is {}x{} but groups have {} and {} generators",
            map.rows(),
            map.cols(),
            src.num_generators(),
            dst.num_generators()
        )));
    }
    let well_defined = (0..src.relators.rows()).all(|i| {
        let img = map.left_apply(src.relators.row(i));
        dst.is_zero(&img)
    });
    if !well_defined {
        return Ok(HomReport {
            well_defined,
            kernel: None,
            cokernel: None,
            image: None,
            is_isomorphism: false,
            kernel_generators: Vec::new(),
        });
    }
    // Reduced map between canonical decompositions.
    let a = src.summands.len();
    let b = dst.summands.len();
    let mut reduced: Vec<Vec<BigInt>> = Vec::with_capacity(a);
    for rep in &src.representatives {
        let img = map.left_apply(rep);
        let c = dst.coordinates(&img);
        reduced.push(c.free.into_iter().chain(c.torsion).collect());
    }
    let dst_moduli = dst.summand_moduli();
    let dst_rel: Vec<Vec<BigInt>> = dst_moduli
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_zero())
        .map(|(k, d)| {
            let mut r = vec![BigInt::zero(); b];
            r[k] = d.clone();
            r
        })
        .collect();

    let cokernel = cokernel_structure(b, reduced.iter().cloned().chain(dst_rel.iter().cloned()).collect());

    let augmented: Vec<Vec<BigInt>> = reduced.iter().cloned().chain(dst_rel.iter().cloned()).collect();
    let lk = left_kernel(b, augmented);
    let preimage = Lattice::from_generators(a, lk.into_iter().map(|v| v[..a].to_vec()).collect());
    let src_moduli = src.summand_moduli();
    let mut rel_in_p = Vec::new();
    for (k, d) in src_moduli.iter().enumerate() {
        if d.is_zero() {
            continue;
        }
        let mut r = vec![BigInt::zero(); a];
        r[k] = d.clone();
        let c = preimage
            .coords(&r)
            .ok_or_else(|| Error::Internal("source relation outside kernel preimage".into()))?;
        rel_in_p.push(c);
    }
    let kernel = cokernel_structure(preimage.rank(), rel_in_p);
    let image = cokernel_structure(a, preimage.basis().to_vec());
    let kernel_generators = preimage
        .basis()
        .iter()
        .map(|x| {
            let mut v = vec![BigInt::zero(); src.num_generators()];
            for (coef, rep) in x.iter().zip(&src.representatives) {
                if !coef.is_zero() {
                    axpy_sub(&mut v, &(-coef), rep);
                }
            }
            v
        })
        .collect();
    let is_isomorphism = kernel.is_trivial() && cokernel.is_trivial();
    Ok(HomReport {
        well_defined,
        kernel: Some(kernel),
        cokernel: Some(cokernel),
        image: Some(image),
        is_isomorphism,
        kernel_generators,
    })
}

/// Isomorphism type of the subgroup of `g` generated by the given
/// generator-coefficient vectors.
pub fn subgroup_structure(g: &PresentedGroup, gens: &[Vec<BigInt>]) -> Result<GroupStructure> {
    let k = gens.len();
    let free = group_from_presentation((0..k).map(|i| format!("v{}", i + 1)).collect(), IntMatrix::zeros(0, k))?;
    let map = IntMatrix::from_rows(g.num_generators(), gens.to_vec())?;
    hom_analysis(&free, g, &map)?.image.ok_or_else(|| Error::Internal("map from a free group is always defined".into()))
}

/// The kernel of `src → dst` realised as its own presented group.
#[derive(Clone, Debug)]
pub struct KernelSubgroup {
    /// Preimage lattice in source generator coordinates; contains the source relators.
    pub lattice: Lattice,
    /// Presentation on the lattice basis modulo the source relators.
    pub group: PresentedGroup,
}

impl KernelSubgroup {
    /// Coordinates of a source-generator vector over the kernel generators.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        self.lattice.coords(v)
    }
}

/// Computes `ker(src → dst)` in source generator coordinates. Intended for
/// small presentations (the augmented matrix is eliminated with a full
/// transform).
pub fn kernel_subgroup(src: &PresentedGroup, dst: &PresentedGroup, map: &IntMatrix) -> Result<KernelSubgroup> {
    let gs = src.num_generators();
    let gd = dst.num_generators();
    if map.rows() != gs || map.cols() != gd {
        return Err(Error::DimensionMismatch("kernel_subgroup map shape".into()));
    }
    let mut augmented = map.to_rows();
    augmented.extend(dst.relators.to_rows());
    let lk = left_kernel(gd, augmented);
    let lattice = Lattice::from_generators(gs, lk.into_iter().map(|v| v[..gs].to_vec()).collect());
    let k = lattice.rank();
    let mut rel = Vec::new();
    for i in 0..src.relators.rows() {
        let c = lattice
            .coords(src.relators.row(i))
            .ok_or_else(|| Error::Internal("map is not well defined on source relators".into()))?;
        rel.push(c);
    }
    let names = (0..k).map(|i| format!("k{}", i + 1)).collect();
    let group = group_from_presentation(names, IntMatrix::from_rows(k, rel)?)?;
    Ok(KernelSubgroup { lattice, group })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows.first().map_or(0, |r| r.len()), rows).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|i| format!("g{}", i)).collect()
    }

    #[test]
    fn snf_two_by_two() {
        let a = m(&[vec![2, 4], vec![6, 8]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.invariant_factors(), big(&[2, 4]));
        assert_eq!(snf.u.mul(&a).unwrap().mul(&snf.v).unwrap(), snf.s);
    }

    #[test]
    fn snf_identity_and_zero() {
        let id = IntMatrix::identity(3);
        let snf = smith_normal_form(&id);
        assert_eq!(snf.s, id);
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(smith_normal_form(&z).s, z);
    }

    #[test]
    fn presentations() {
        let z2 = group_from_presentation(names(1), m(&[vec![2]])).unwrap();
        assert_eq!(z2.structure(), &GroupStructure::elementary(2, 1));
        let free = group_from_presentation(names(3), IntMatrix::zeros(0, 3)).unwrap();
        assert_eq!(free.structure(), &GroupStructure::free(3));
        let z6 = group_from_presentation(names(2), m(&[vec![2, 0], vec![0, 3]])).unwrap();
        assert_eq!(z6.structure().torsion, big(&[6]));
        assert_eq!(z6.structure().rank, 0);
    }

    #[test]
    fn presentation_dimension_mismatch() {
        assert!(matches!(
            group_from_presentation(names(2), m(&[vec![1, 2, 3]])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn relators_vanish_in_coordinates() {
        let rel = m(&[vec![2, 4, 0], vec![0, 6, 3], vec![1, 1, 1]]);
        let g = group_from_presentation(names(3), rel.clone()).unwrap();
        for i in 0..rel.rows() {
            assert!(g.coordinates(rel.row(i)).is_zero());
        }
        assert!(!g.coordinates(&big(&[1, 0, 0])).is_zero());
    }

    #[test]
    fn hom_examples() {
        let z = group_from_presentation(names(1), IntMatrix::zeros(0, 1)).unwrap();
        let id = hom_analysis(&z, &z, &IntMatrix::identity(1)).unwrap();
        assert!(id.is_isomorphism);
        let twice = hom_analysis(&z, &z, &m(&[vec![2]])).unwrap();
        assert_eq!(twice.kernel, Some(GroupStructure::trivial()));
        assert_eq!(twice.cokernel, Some(GroupStructure::elementary(2, 1)));
        assert_eq!(twice.image, Some(GroupStructure::free(1)));

        let z2 = group_from_presentation(names(1), m(&[vec![2]])).unwrap();
        let z4 = group_from_presentation(names(1), m(&[vec![4]])).unwrap();
        let r = hom_analysis(&z2, &z4, &m(&[vec![2]])).unwrap();
        assert!(r.well_defined);
        assert_eq!(r.kernel, Some(GroupStructure::trivial()));
        assert_eq!(r.cokernel, Some(GroupStructure::elementary(2, 1)));
        let bad = hom_analysis(&z2, &z4, &m(&[vec![1]])).unwrap();
        assert!(!bad.well_defined);
        assert!(!bad.is_isomorphism);
    }

    #[test]
    fn lattice_coordinates() {
        let l = Lattice::from_i64_generators(3, &[vec![2, 0, 2], vec![0, 3, 3], vec![2, 3, 5]]);
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&big(&[4, 3, 7])));
        assert!(!l.contains(&big(&[1, 0, 1])));
    }

    #[test]
    fn left_kernel_annihilates() {
        let rows = vec![big(&[1, 2]), big(&[2, 4]), big(&[3, 1])];
        let k = left_kernel(2, rows.clone());
        assert_eq!(k.len(), 1);
        for v in &k {
            for c in 0..2 {
                let s: BigInt = v.iter().zip(&rows).map(|(a, r)| a * &r[c]).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn kernel_subgroup_with_torsion() {
        // Z ⊕ Z/2 → Z/2, (a, b) ↦ a + b: kernel generated by (1,1) and (2,0) → Z.
        let src = cyclic_sum_group(names(2), &big(&[0, 2])).unwrap();
        let dst = cyclic_sum_group(names(1), &big(&[2])).unwrap();
        let k = kernel_subgroup(&src, &dst, &m(&[vec![1], vec![1]])).unwrap();
        assert_eq!(k.group.structure(), &GroupStructure::free(1));
    }

    #[test]
    fn structure_display_and_mod2() {
        let g = GroupStructure::from_cyclic_orders(&big(&[0, 2, 2, 4]));
        assert_eq!(g.to_string(), "Z + Z2^2 + Z4");
        assert_eq!(g.mod2(), GroupStructure::elementary(2, 4));
    }

    #[test]
    fn dump_format() {
        assert_eq!(m(&[vec![1, -2], vec![0, 3]]).dump(), "1 -2\n0 3\n");
    }
}
