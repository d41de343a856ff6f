//! Free Lie algebra `L` and free quasi-Lie algebra `L'` over the integers.
//!
//! Both are handled by one rewriting engine working in `L'`. The Hall set is
//! the right-nested one: `[u,v]` is a Hall element iff `u < v` and `v` is a
//! letter or `v = [x,y]` with `x <= u`. Hall elements are ordered by degree,
//! then by `(u,v)`. In even degree `2k` the quasi-Lie algebra gains a `Z/2`
//! summand spanned by the squares `[H,H]`, `H` a Hall element of degree `k`;
//! squares bracket to zero with everything. The Lie flavor is the image
//! under the projection that kills all squares.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{
    cyclic_sum_group, kernel_subgroup, GroupStructure, IntMatrix, KernelSubgroup, PresentedGroup,
};
use crate::trees::RootedTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Lie,
    Quasi,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Lie => "lie",
            Flavor::Quasi => "quasi",
        })
    }
}

fn mobius(n: usize) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Rank of the degree `d` part of the free Lie algebra on `m` generators.
pub fn witt_rank(m: u32, d: usize) -> usize {
    assert!(d >= 1, "degree must be positive");
    let mut total = BigInt::zero();
    for e in 1..=d {
        if d % e == 0 {
            let mu = mobius(e);
            if mu != 0 {
                total += BigInt::from(mu) * num_traits::pow(BigInt::from(m), d / e);
            }
        }
    }
    let (q, r) = total.div_rem(&BigInt::from(d));
    debug_assert!(r.is_zero());
    q.to_usize().expect("Witt rank fits in usize")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum HallElem {
    Letter(u32),
    Bracket(usize, usize),
}

struct HallSet {
    m: u32,
    max_degree: usize,
    elems: Vec<HallElem>,
    degree: Vec<usize>,
    ranges: Vec<Range<usize>>,
    index: HashMap<(usize, usize), usize>,
}

impl HallSet {
    fn new(m: u32, max_degree: usize) -> Self {
        let mut h = HallSet {
            m,
            max_degree,
            elems: Vec::new(),
            degree: Vec::new(),
            ranges: vec![0..0],
            index: HashMap::new(),
        };
        for i in 0..m {
            h.elems.push(HallElem::Letter(i));
            h.degree.push(1);
        }
        h.ranges.push(0..m as usize);
        for d in 2..=max_degree {
            let start = h.elems.len();
            for du in 1..d {
                let dv = d - du;
                if du > dv {
                    break;
                }
                for u in h.ranges[du].clone() {
                    for v in h.ranges[dv].clone() {
                        if u >= v {
                            continue;
                        }
                        let ok = match h.elems[v] {
                            HallElem::Letter(_) => true,
                            HallElem::Bracket(x, _) => x <= u,
                        };
                        if ok {
                            h.index.insert((u, v), h.elems.len());
                            h.elems.push(HallElem::Bracket(u, v));
                            h.degree.push(d);
                        }
                    }
                }
            }
            h.ranges.push(start..h.elems.len());
        }
        h
    }

    fn tree(&self, g: usize) -> RootedTree {
        match self.elems[g] {
            HallElem::Letter(i) => RootedTree::Leaf(i + 1),
            HallElem::Bracket(u, v) => RootedTree::node(self.tree(u), self.tree(v)),
        }
    }

    fn fmt_bracket(&self, g: usize) -> String {
        match self.elems[g] {
            HallElem::Letter(i) => format!("X{}", i + 1),
            HallElem::Bracket(u, v) => format!("[{},{}]", self.fmt_bracket(u), self.fmt_bracket(v)),
        }
    }
}

/// Sparse element of `L'`: integer Hall coordinates plus a mod 2 set of squares.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct QElem {
    lie: BTreeMap<usize, i64>,
    sq: BTreeSet<usize>,
}

fn checked(x: Option<i64>) -> i64 {
    x.expect("Lie coefficient overflow")
}

impl QElem {
    fn hall(g: usize) -> Self {
        QElem { lie: BTreeMap::from([(g, 1)]), sq: BTreeSet::new() }
    }

    fn square(g: usize) -> Self {
        QElem { lie: BTreeMap::new(), sq: BTreeSet::from([g]) }
    }

    fn add_scaled(&mut self, other: &QElem, c: i64) {
        if c == 0 {
            return;
        }
        for (&g, &a) in &other.lie {
            let e = self.lie.entry(g).or_insert(0);
            *e = checked(e.checked_add(checked(a.checked_mul(c))));
            if *e == 0 {
                self.lie.remove(&g);
            }
        }
        if c % 2 != 0 {
            for &s in &other.sq {
                if !self.sq.remove(&s) {
                    self.sq.insert(s);
                }
            }
        }
    }

    fn negated(&self) -> QElem {
        QElem { lie: self.lie.iter().map(|(&g, &c)| (g, -c)).collect(), sq: self.sq.clone() }
    }
}

/// Rewriting engine for one generator count, memoized and safe to share.
struct Engine {
    hall: HallSet,
    memo: RwLock<HashMap<(usize, usize), Arc<QElem>>>,
}

impl Engine {
    fn new(m: u32, max_degree: usize) -> Self {
        Engine { hall: HallSet::new(m, max_degree), memo: RwLock::new(HashMap::new()) }
    }

    /// `[u,v]` for Hall elements `u`, `v`.
    fn pair(&self, u: usize, v: usize) -> Arc<QElem> {
        if let Some(r) = self.memo.read().expect("memo lock").get(&(u, v)) {
            return r.clone();
        }
        let result = Arc::new(self.compute_pair(u, v));
        self.memo.write().expect("memo lock").insert((u, v), result.clone());
        result
    }

    fn compute_pair(&self, u: usize, v: usize) -> QElem {
        assert!(
            self.hall.degree[u] + self.hall.degree[v] <= self.hall.max_degree,
            "bracket exceeds engine degree"
        );
        if u == v {
            return QElem::square(u);
        }
        if u > v {
            return self.pair(v, u).negated();
        }
        if let Some(&g) = self.hall.index.get(&(u, v)) {
            return QElem::hall(g);
        }
        let HallElem::Bracket(x, y) = self.hall.elems[v] else {
            unreachable!("a pair with a letter on the right and u < v is Hall")
        };
        // [u,[x,y]] = [[u,x],y] + [x,[u,y]]
        let ux = self.pair(u, x);
        let mut out = self.bracket(&ux, &QElem::hall(y));
        let uy = self.pair(u, y);
        out.add_scaled(&self.bracket(&QElem::hall(x), &uy), 1);
        out
    }

    fn bracket(&self, a: &QElem, b: &QElem) -> QElem {
        let mut out = QElem::default();
        for (&g, &c) in &a.lie {
            for (&h, &d) in &b.lie {
                out.add_scaled(&self.pair(g, h), checked(c.checked_mul(d)));
            }
        }
        out
    }

    fn reduce_tree(&self, t: &RootedTree) -> QElem {
        match t {
            RootedTree::Leaf(l) => QElem::hall((*l - 1) as usize),
            RootedTree::Node(a, b) => self.bracket(&self.reduce_tree(a), &self.reduce_tree(b)),
        }
    }
}

fn engine(m: u32, degree: usize) -> Arc<Engine> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Engine>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(e) = cache.read().expect("engine cache").get(&m) {
        if e.hall.max_degree >= degree {
            return e.clone();
        }
    }
    let mut w = cache.write().expect("engine cache");
    if let Some(e) = w.get(&m) {
        if e.hall.max_degree >= degree {
            return e.clone();
        }
    }
    let e = Arc::new(Engine::new(m, degree.max(8)));
    w.insert(m, e.clone());
    e
}

/// Hall basis of the degree `d` part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallBasis {
    pub m: u32,
    pub degree: usize,
    pub flavor: Flavor,
    /// Hall elements of degree `d` as bracket trees.
    pub elements: Vec<RootedTree>,
    /// For the quasi flavor in even degree: the Hall elements `H` of degree
    /// `d/2`, standing for the order 2 squares `[H,H]`.
    pub squares: Vec<RootedTree>,
}

impl HallBasis {
    pub fn len(&self) -> usize {
        self.elements.len() + self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn hall_basis(m: u32, d: usize, flavor: Flavor) -> HallBasis {
    assert!(m >= 1 && d >= 1, "hall_basis needs m >= 1 and d >= 1");
    let e = engine(m, d);
    let elements = e.hall.ranges[d].clone().map(|g| e.hall.tree(g)).collect();
    let squares = if flavor == Flavor::Quasi && d % 2 == 0 {
        e.hall.ranges[d / 2].clone().map(|g| e.hall.tree(g)).collect()
    } else {
        Vec::new()
    };
    HallBasis { m, degree: d, flavor, elements, squares }
}

/// Number of square coordinates in degree `d` (quasi flavor).
pub fn square_rank(m: u32, d: usize, flavor: Flavor) -> usize {
    if flavor == Flavor::Quasi && d % 2 == 0 {
        witt_rank(m, d / 2)
    } else {
        0
    }
}

/// Homogeneous element of `L` or `L'` in Hall coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LieElement {
    pub flavor: Flavor,
    pub m: u32,
    pub degree: usize,
    /// Coordinates over the Hall elements of this degree.
    pub coords: Vec<i64>,
    /// Quasi flavor, even degree: mod 2 coordinates over the squares.
    pub squares: Vec<u8>,
}

impl LieElement {
    pub fn zero(m: u32, degree: usize, flavor: Flavor) -> Self {
        LieElement {
            flavor,
            m,
            degree,
            coords: vec![0; witt_rank(m, degree)],
            squares: vec![0; square_rank(m, degree, flavor)],
        }
    }

    /// The generator `X_i` (1-based).
    pub fn generator(m: u32, i: u32, flavor: Flavor) -> Result<Self> {
        lie_reduce(&RootedTree::Leaf(i), m, flavor)
    }

    fn from_q(e: &Engine, q: &QElem, degree: usize, flavor: Flavor) -> Self {
        let mut out = LieElement::zero(e.hall.m, degree, flavor);
        let off = e.hall.ranges[degree].start;
        for (&g, &c) in &q.lie {
            out.coords[g - off] = c;
        }
        if flavor == Flavor::Quasi {
            for &s in &q.sq {
                let off = e.hall.ranges[degree / 2].start;
                out.squares[s - off] = 1;
            }
        }
        out
    }

    fn to_q(&self, e: &Engine) -> QElem {
        let mut q = QElem::default();
        let off = e.hall.ranges[self.degree].start;
        for (k, &c) in self.coords.iter().enumerate() {
            if c != 0 {
                q.lie.insert(off + k, c);
            }
        }
        if !self.squares.is_empty() {
            let off = e.hall.ranges[self.degree / 2].start;
            for (k, &b) in self.squares.iter().enumerate() {
                if b % 2 == 1 {
                    q.sq.insert(off + k);
                }
            }
        }
        q
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0) && self.squares.iter().all(|&b| b == 0)
    }

    fn check_compatible(&self, other: &LieElement) -> Result<()> {
        if self.flavor != other.flavor || self.m != other.m || self.degree != other.degree {
            return Err(Error::DimensionMismatch(format!(
                "incompatible Lie elements: ({}, m={}, d={}) vs ({}, m={}, d={})",
                self.flavor, self.m, self.degree, other.flavor, other.m, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &LieElement) -> Result<LieElement> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, b) in out.coords.iter_mut().zip(&other.coords) {
            *a = checked(a.checked_add(*b));
        }
        for (a, b) in out.squares.iter_mut().zip(&other.squares) {
            *a = (*a + *b) % 2;
        }
        Ok(out)
    }

    pub fn scale(&self, c: i64) -> LieElement {
        let mut out = self.clone();
        for a in out.coords.iter_mut() {
            *a = checked(a.checked_mul(c));
        }
        for a in out.squares.iter_mut() {
            *a = ((*a as i64 * c).rem_euclid(2)) as u8;
        }
        out
    }

    /// Reduction modulo 2 of the Hall coordinates.
    pub fn mod2(&self) -> LieElement {
        let mut out = self.clone();
        for a in out.coords.iter_mut() {
            *a = a.rem_euclid(2);
        }
        out
    }

    /// Projection `L' → L`.
    pub fn to_lie(&self) -> LieElement {
        LieElement { flavor: Flavor::Lie, m: self.m, degree: self.degree, coords: self.coords.clone(), squares: Vec::new() }
    }

    /// Inclusion of Hall coordinates into `L'` (exact in odd degree).
    pub fn to_quasi(&self) -> LieElement {
        let mut out = LieElement::zero(self.m, self.degree, Flavor::Quasi);
        out.coords = self.coords.clone();
        out
    }

    /// Integer coordinate vector: Hall part followed by square part.
    pub fn to_vector(&self) -> Vec<BigInt> {
        self.coords.iter().map(|&c| BigInt::from(c)).chain(self.squares.iter().map(|&b| BigInt::from(b))).collect()
    }
}

/// `[a,b]`
pub fn bracket(a: &LieElement, b: &LieElement) -> Result<LieElement> {
    if a.flavor != b.flavor || a.m != b.m {
        return Err(Error::DimensionMismatch("bracket of elements from different algebras".into()));
    }
    let d = a.degree + b.degree;
    let e = engine(a.m, d);
    let q = e.bracket(&a.to_q(&e), &b.to_q(&e));
    Ok(LieElement::from_q(&e, &q, d, a.flavor))
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = engine(self.m, self.degree);
        let mut terms = Vec::new();
        let off = e.hall.ranges[self.degree].start;
        for (k, &c) in self.coords.iter().enumerate() {
            if c != 0 {
                terms.push((c, e.hall.fmt_bracket(off + k)));
            }
        }
        if !self.squares.is_empty() {
            let off = e.hall.ranges[self.degree / 2].start;
            for (k, &b) in self.squares.iter().enumerate() {
                if b != 0 {
                    let h = e.hall.fmt_bracket(off + k);
                    terms.push((1, format!("[{},{}]", h, h)));
                }
            }
        }
        write_linear_combination(f, &terms)
    }
}

pub(crate) fn write_linear_combination(f: &mut fmt::Formatter<'_>, terms: &[(i64, String)]) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (k, (c, s)) in terms.iter().enumerate() {
        let (sign, a) = if *c < 0 { ("-", -c) } else { ("+", *c) };
        if k == 0 {
            if sign == "-" {
                f.write_str("-")?;
            }
        } else {
            write!(f, " {} ", sign)?;
        }
        if a != 1 {
            write!(f, "{}*", a)?;
        }
        f.write_str(s)?;
    }
    Ok(())
}

/// Normal form of a bracket monomial given as a rooted tree over labels `1..=m`.
pub fn lie_reduce(expr: &RootedTree, m: u32, flavor: Flavor) -> Result<LieElement> {
    expr.check_labels(m)?;
    let d = expr.degree();
    let e = engine(m, d);
    let q = e.reduce_tree(expr);
    Ok(LieElement::from_q(&e, &q, d, flavor))
}

/// Element of `L_1 ⊗ L_{n+1}` (or `L_1 ⊗ L'_{n+1}`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorElement {
    pub flavor: Flavor,
    pub m: u32,
    pub n: usize,
    /// `components[i]` is the factor paired with `X_{i+1}`.
    pub components: Vec<LieElement>,
}

impl TensorElement {
    pub fn zero(n: usize, m: u32, flavor: Flavor) -> Self {
        TensorElement { flavor, m, n, components: vec![LieElement::zero(m, n + 1, flavor); m as usize] }
    }

    /// `Σ c · X_i ⊗ reduce(tree)` over the given terms (labels 1-based).
    pub fn from_terms(n: usize, m: u32, flavor: Flavor, terms: &[(u32, RootedTree, i64)]) -> Result<Self> {
        let mut out = Self::zero(n, m, flavor);
        for (i, t, c) in terms {
            if *i == 0 || *i > m {
                return Err(Error::LabelOutOfRange { label: *i, max: m });
            }
            if t.degree() != n + 1 {
                return Err(Error::OrderMismatch { expected: n + 1, found: t.degree() });
            }
            let y = lie_reduce(t, m, flavor)?.scale(*c);
            let slot = &mut out.components[*i as usize - 1];
            *slot = slot.add(&y)?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &TensorElement) -> Result<TensorElement> {
        if self.flavor != other.flavor || self.m != other.m || self.n != other.n {
            return Err(Error::DimensionMismatch("incompatible tensor elements".into()));
        }
        let components =
            self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect::<Result<Vec<_>>>()?;
        Ok(TensorElement { components, ..self.clone() })
    }

    pub fn scale(&self, c: i64) -> TensorElement {
        TensorElement { components: self.components.iter().map(|x| x.scale(c)).collect(), ..self.clone() }
    }

    pub fn neg(&self) -> TensorElement {
        self.scale(-1)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(LieElement::is_zero)
    }

    pub fn to_lie(&self) -> TensorElement {
        TensorElement {
            flavor: Flavor::Lie,
            components: self.components.iter().map(LieElement::to_lie).collect(),
            ..self.clone()
        }
    }

    /// `Σ_i [X_i, y_i]`
    pub fn bracket(&self) -> LieElement {
        let e = engine(self.m, self.n + 2);
        let mut q = QElem::default();
        for (i, y) in self.components.iter().enumerate() {
            q.add_scaled(&e.bracket(&QElem::hall(i), &y.to_q(&e)), 1);
        }
        LieElement::from_q(&e, &q, self.n + 2, self.flavor)
    }

    /// Flattened coordinates: all Hall coordinates (generator-major), then all
    /// square coordinates.
    pub fn to_vector(&self) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = Vec::new();
        for c in &self.components {
            v.extend(c.coords.iter().map(|&x| BigInt::from(x)));
        }
        for c in &self.components {
            v.extend(c.squares.iter().map(|&x| BigInt::from(x)));
        }
        v
    }

    pub fn from_vector(n: usize, m: u32, flavor: Flavor, v: &[BigInt]) -> Result<Self> {
        let w = witt_rank(m, n + 1);
        let s = square_rank(m, n + 1, flavor);
        let mm = m as usize;
        if v.len() != mm * (w + s) {
            return Err(Error::DimensionMismatch(format!("tensor vector of length {}", v.len())));
        }
        let mut out = Self::zero(n, m, flavor);
        for i in 0..mm {
            for k in 0..w {
                out.components[i].coords[k] =
                    v[i * w + k].to_i64().ok_or_else(|| Error::Internal("tensor coefficient overflow".into()))?;
            }
            for k in 0..s {
                let b = v[mm * w + i * s + k].mod_floor(&BigInt::from(2));
                out.components[i].squares[k] = if b.is_zero() { 0 } else { 1 };
            }
        }
        Ok(out)
    }

    /// Coefficient of `X_i ⊗ (k-th Hall element)`, 1-based `i`.
    pub fn coefficient(&self, i: u32, k: usize) -> i64 {
        self.components[i as usize - 1].coords[k]
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = engine(self.m, self.n + 1);
        let d = self.n + 1;
        let mut terms = Vec::new();
        for (i, y) in self.components.iter().enumerate() {
            let off = e.hall.ranges[d].start;
            for (k, &c) in y.coords.iter().enumerate() {
                if c != 0 {
                    terms.push((c, format!("X{}⊗{}", i + 1, e.hall.fmt_bracket(off + k))));
                }
            }
            if !y.squares.is_empty() {
                let off = e.hall.ranges[d / 2].start;
                for (k, &b) in y.squares.iter().enumerate() {
                    if b != 0 {
                        let h = e.hall.fmt_bracket(off + k);
                        terms.push((1, format!("X{}⊗[{},{}]", i + 1, h, h)));
                    }
                }
            }
        }
        write_linear_combination(f, &terms)
    }
}

/// `L_d` or `L'_d` as a presented group on its Hall (and square) coordinates.
pub fn lie_group(m: u32, d: usize, flavor: Flavor) -> Result<PresentedGroup> {
    let w = witt_rank(m, d);
    let s = square_rank(m, d, flavor);
    let mut moduli = vec![BigInt::zero(); w];
    moduli.extend(std::iter::repeat(BigInt::from(2)).take(s));
    let names = (0..w).map(|k| format!("h{}", k + 1)).chain((0..s).map(|k| format!("s{}", k + 1))).collect();
    cyclic_sum_group(names, &moduli)
}

/// `L_1 ⊗ L_{n+1}` or `L_1 ⊗ L'_{n+1}` as a presented group in the
/// coordinates of [`TensorElement::to_vector`].
pub fn tensor_group(n: usize, m: u32, flavor: Flavor) -> Result<PresentedGroup> {
    let w = witt_rank(m, n + 1);
    let s = square_rank(m, n + 1, flavor);
    let mm = m as usize;
    let mut moduli = vec![BigInt::zero(); mm * w];
    moduli.extend(std::iter::repeat(BigInt::from(2)).take(mm * s));
    let mut names = Vec::new();
    for i in 0..mm {
        for k in 0..w {
            names.push(format!("X{}*h{}", i + 1, k + 1));
        }
    }
    for i in 0..mm {
        for k in 0..s {
            names.push(format!("X{}*s{}", i + 1, k + 1));
        }
    }
    cyclic_sum_group(names, &moduli)
}

/// The bracketing map `L_1 ⊗ L_{n+1} → L_{n+2}` and its kernel.
#[derive(Clone, Debug)]
pub struct BracketKernel {
    pub n: usize,
    pub m: u32,
    pub flavor: Flavor,
    pub structure: GroupStructure,
    /// Generators of the kernel (a basis of the preimage lattice).
    pub generators: Vec<TensorElement>,
    pub source: PresentedGroup,
    pub target: PresentedGroup,
    pub map: IntMatrix,
    pub subgroup: KernelSubgroup,
}

impl BracketKernel {
    /// Coordinates of a tensor element over the kernel generators, if it lies
    /// in the preimage lattice.
    pub fn coords(&self, x: &TensorElement) -> Option<Vec<BigInt>> {
        self.subgroup.coords(&x.to_vector())
    }
}

/// Computes `D_n` (Lie) or `D'_n` (quasi) on `m` generators.
pub fn bracket_kernel(n: usize, m: u32, flavor: Flavor) -> Result<BracketKernel> {
    let source = tensor_group(n, m, flavor)?;
    let target = lie_group(m, n + 2, flavor)?;
    let w = witt_rank(m, n + 1);
    let s = square_rank(m, n + 1, flavor);
    let mm = m as usize;
    let cols = target.num_generators();
    let e = engine(m, n + 2);
    let off = e.hall.ranges[n + 1].start;
    let mut rows = Vec::with_capacity(mm * (w + s));
    for i in 0..mm {
        for k in 0..w {
            let q = e.pair(i, off + k);
            rows.push(LieElement::from_q(&e, &q, n + 2, flavor).to_vector());
        }
    }
    for _ in 0..mm * s {
        rows.push(vec![BigInt::zero(); cols]);
    }
    let map = IntMatrix::from_rows(cols, rows)?;
    let subgroup = kernel_subgroup(&source, &target, &map)?;
    let generators = subgroup
        .lattice
        .basis()
        .iter()
        .map(|v| TensorElement::from_vector(n, m, flavor, v))
        .collect::<Result<Vec<_>>>()?;
    let structure = subgroup.group.structure().clone();
    Ok(BracketKernel { n, m, flavor, structure, generators, source, target, map, subgroup })
}

/// `sℓ`: for `x ∈ D_{2k}` (Lie flavor, `n = 2k`), the quasi-Lie bracket of `x`
/// is a sum of squares `[H,H]` with `H ∈ L_{k+1}`; returns that sum as a mod 2
/// element of `L_{k+1}` (Hall coordinates in `{0,1}`).
pub fn sl_map(x: &TensorElement) -> Result<LieElement> {
    if x.n % 2 != 0 {
        return Err(Error::OrderMismatch { expected: x.n + 1, found: x.n });
    }
    let lie = x.to_lie();
    if !lie.bracket().is_zero() {
        return Err(Error::NotInKernel(format!("bracket of {} is nonzero", lie)));
    }
    let quasi = TensorElement {
        flavor: Flavor::Quasi,
        components: lie.components.iter().map(LieElement::to_quasi).collect(),
        ..lie.clone()
    };
    let b = quasi.bracket();
    if b.coords.iter().any(|&c| c != 0) {
        return Err(Error::Internal("quasi-Lie bracket has a non-torsion part".into()));
    }
    let k1 = x.n / 2 + 1;
    let mut out = LieElement::zero(x.m, k1, Flavor::Lie);
    for (k, &bit) in b.squares.iter().enumerate() {
        out.coords[k] = bit as i64;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> RootedTree {
        s.parse().unwrap()
    }

    #[test]
    fn witt_values() {
        assert_eq!(witt_rank(1, 1), 1);
        assert_eq!(witt_rank(2, 4), 3);
        assert_eq!(witt_rank(3, 3), 8);
        assert_eq!(witt_rank(1, 2), 0);
    }

    #[test]
    fn hall_examples() {
        let b = hall_basis(2, 2, Flavor::Lie);
        assert_eq!(b.elements, vec![r("(1,2)")]);
        assert_eq!(hall_basis(2, 3, Flavor::Lie).elements.len(), 2);
        assert!(hall_basis(1, 2, Flavor::Lie).is_empty());
        let q = hall_basis(1, 2, Flavor::Quasi);
        assert_eq!(q.squares, vec![r("1")]);
        for d in 1..=6 {
            for m in 1..=3 {
                assert_eq!(hall_basis(m, d, Flavor::Lie).elements.len(), witt_rank(m, d));
            }
        }
    }

    #[test]
    fn reduce_examples() {
        let a = lie_reduce(&r("(2,1)"), 2, Flavor::Lie).unwrap();
        let b = lie_reduce(&r("(1,2)"), 2, Flavor::Lie).unwrap();
        assert_eq!(a, b.scale(-1));
        for flavor in [Flavor::Lie, Flavor::Quasi] {
            let j = ["(1,(2,3))", "(2,(3,1))", "(3,(1,2))"]
                .iter()
                .map(|s| lie_reduce(&r(s), 3, flavor).unwrap())
                .reduce(|x, y| x.add(&y).unwrap())
                .unwrap();
            assert!(j.is_zero());
        }
        let sq = lie_reduce(&r("(1,1)"), 1, Flavor::Quasi).unwrap();
        assert!(!sq.is_zero());
        assert!(sq.scale(2).is_zero());
        assert!(lie_reduce(&r("(1,1)"), 1, Flavor::Lie).unwrap().is_zero());
    }

    #[test]
    fn bracket_kernel_examples() {
        assert!(bracket_kernel(1, 2, Flavor::Lie).unwrap().structure.is_trivial());
        assert_eq!(bracket_kernel(1, 3, Flavor::Lie).unwrap().structure, GroupStructure::free(1));
        let d = bracket_kernel(1, 1, Flavor::Quasi).unwrap();
        assert_eq!(d.structure, GroupStructure::elementary(2, 1));
        let g = TensorElement::from_terms(1, 1, Flavor::Quasi, &[(1, r("(1,1)"), 1)]).unwrap();
        assert!(d.coords(&g).is_some());
        assert!(!d.subgroup.group.is_zero(&d.coords(&g).unwrap()));
    }

    #[test]
    fn sl_examples() {
        let x = TensorElement::from_terms(
            2,
            2,
            Flavor::Lie,
            &[(1, r("(2,(1,2))"), 1), (2, r("(1,(1,2))"), -1)],
        )
        .unwrap();
        let s = sl_map(&x).unwrap();
        assert_eq!(s, lie_reduce(&r("(1,2)"), 2, Flavor::Lie).unwrap());
        assert!(sl_map(&TensorElement::zero(2, 2, Flavor::Lie)).unwrap().is_zero());
        assert!(sl_map(&x.scale(2)).unwrap().is_zero());
        let bad = TensorElement::from_terms(2, 2, Flavor::Lie, &[(1, r("(2,(1,2))"), 1)]).unwrap();
        assert!(matches!(sl_map(&bad), Err(Error::NotInKernel(_))));
    }

    #[test]
    fn display() {
        let x = lie_reduce(&r("(2,(1,2))"), 2, Flavor::Lie).unwrap();
        assert_eq!(x.to_string(), "[X2,[X1,X2]]");
        let y = lie_reduce(&r("((1,2),2)"), 2, Flavor::Lie).unwrap();
        assert_eq!(y.to_string(), "-[X2,[X1,X2]]");
    }
}
