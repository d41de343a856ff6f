//! Labeled vertex-oriented unitrivalent trees.
//!
//! A rooted tree is a leaf or an ordered pair `(A,B)`; an unrooted tree is an
//! inner product `<I,J>` of two rooted trees glued along their roots. The
//! order of a tree is its number of trivalent vertices.
//!
//! Orientation convention: the trivalent vertex at the root of `(A,B)`
//! carries the cyclic order (root edge, A, B). Swapping the two children of
//! a vertex reverses its orientation and negates the tree (AS).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Label = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RootedTree {
    Leaf(Label),
    Node(Box<RootedTree>, Box<RootedTree>),
}

impl Ord for RootedTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order().cmp(&other.order()).then_with(|| match (self, other) {
            (RootedTree::Leaf(a), RootedTree::Leaf(b)) => a.cmp(b),
            (RootedTree::Leaf(_), RootedTree::Node(..)) => Ordering::Less,
            (RootedTree::Node(..), RootedTree::Leaf(_)) => Ordering::Greater,
            (RootedTree::Node(a1, b1), RootedTree::Node(a2, b2)) => a1.cmp(a2).then_with(|| b1.cmp(b2)),
        })
    }
}

impl PartialOrd for RootedTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl RootedTree {
    pub fn leaf(label: Label) -> Self {
        RootedTree::Leaf(label)
    }

    pub fn node(left: RootedTree, right: RootedTree) -> Self {
        RootedTree::Node(Box::new(left), Box::new(right))
    }

    /// Number of trivalent vertices.
    pub fn order(&self) -> usize {
        match self {
            RootedTree::Leaf(_) => 0,
            RootedTree::Node(a, b) => 1 + a.order() + b.order(),
        }
    }

    /// Number of leaves, i.e. the degree as a bracket.
    pub fn degree(&self) -> usize {
        self.order() + 1
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, RootedTree::Leaf(_))
    }

    /// Leaf labels from left to right.
    pub fn labels(&self) -> Vec<Label> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut Vec<Label>) {
        match self {
            RootedTree::Leaf(l) => out.push(*l),
            RootedTree::Node(a, b) => {
                a.collect_labels(out);
                b.collect_labels(out);
            }
        }
    }

    pub fn check_labels(&self, m: u32) -> Result<()> {
        for l in self.labels() {
            if l == 0 || l > m {
                return Err(Error::LabelOutOfRange { label: l, max: m });
            }
        }
        Ok(())
    }

    pub fn relabel(&self, f: &dyn Fn(Label) -> Label) -> RootedTree {
        match self {
            RootedTree::Leaf(l) => RootedTree::Leaf(f(*l)),
            RootedTree::Node(a, b) => RootedTree::node(a.relabel(f), b.relabel(f)),
        }
    }

    /// Children sorted at every vertex; the sign is `(-1)^(number of swaps)`.
    pub fn canonical(&self) -> (RootedTree, i32) {
        match self {
            RootedTree::Leaf(_) => (self.clone(), 1),
            RootedTree::Node(a, b) => {
                let (ca, sa) = a.canonical();
                let (cb, sb) = b.canonical();
                if ca <= cb {
                    (RootedTree::node(ca, cb), sa * sb)
                } else {
                    (RootedTree::node(cb, ca), -sa * sb)
                }
            }
        }
    }

    /// True if some vertex has two identical children.
    pub fn has_symmetric_vertex(&self) -> bool {
        match self {
            RootedTree::Leaf(_) => false,
            RootedTree::Node(a, b) => a == b || a.has_symmetric_vertex() || b.has_symmetric_vertex(),
        }
    }

    /// Swaps the children of the `k`-th trivalent vertex in preorder.
    /// Returns `false` if there are fewer than `k + 1` vertices.
    pub fn swap_vertex(&mut self, k: usize) -> bool {
        let mut k = k;
        self.swap_vertex_inner(&mut k)
    }

    fn swap_vertex_inner(&mut self, k: &mut usize) -> bool {
        match self {
            RootedTree::Leaf(_) => false,
            RootedTree::Node(a, b) => {
                if *k == 0 {
                    std::mem::swap(a, b);
                    return true;
                }
                *k -= 1;
                a.swap_vertex_inner(k) || b.swap_vertex_inner(k)
            }
        }
    }

    /// Jacobi triples `(x,(b,c)), (b,(c,x)), (c,(x,b))` obtained at every
    /// internal edge, substituted back into the surrounding tree. Each triple
    /// sums to zero modulo AS and IHX.
    pub fn jacobi_triples(&self) -> Vec<[RootedTree; 3]> {
        let mut out = Vec::new();
        self.jacobi_inner(&mut |t| t, &mut out);
        out
    }

    fn jacobi_inner(&self, wrap: &mut dyn FnMut(RootedTree) -> RootedTree, out: &mut Vec<[RootedTree; 3]>) {
        let RootedTree::Node(p, q) = self else { return };
        let mut emit = |x: &RootedTree, b: &RootedTree, c: &RootedTree, out: &mut Vec<[RootedTree; 3]>| {
            let t1 = RootedTree::node(x.clone(), RootedTree::node(b.clone(), c.clone()));
            let t2 = RootedTree::node(b.clone(), RootedTree::node(c.clone(), x.clone()));
            let t3 = RootedTree::node(c.clone(), RootedTree::node(x.clone(), b.clone()));
            out.push([wrap(t1), wrap(t2), wrap(t3)]);
        };
        if let RootedTree::Node(b, c) = q.as_ref() {
            emit(p, b, c, out);
        }
        if let RootedTree::Node(b, c) = p.as_ref() {
            emit(q, b, c, out);
        }
        {
            let q2 = q.as_ref().clone();
            let mut w = |t: RootedTree| wrap(RootedTree::node(t, q2.clone()));
            p.jacobi_inner(&mut w, out);
        }
        {
            let p2 = p.as_ref().clone();
            let mut w = |t: RootedTree| wrap(RootedTree::node(p2.clone(), t));
            q.jacobi_inner(&mut w, out);
        }
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootedTree::Leaf(l) => write!(f, "{}", l),
            RootedTree::Node(a, b) => write!(f, "({},{})", a, b),
        }
    }
}

/// Rooted product `(I,J)`.
pub fn rooted_product(i: &RootedTree, j: &RootedTree) -> RootedTree {
    RootedTree::node(i.clone(), j.clone())
}

/// Number of canonical rooted trees of the given order, saturating.
pub fn count_rooted(order: usize, m: u32) -> u128 {
    let mut counts: Vec<u128> = vec![m as u128];
    for k in 1..=order {
        let mut c: u128 = 0;
        for a in 0..k {
            let b = k - 1 - a;
            if a > b {
                break;
            }
            let term = if a == b {
                counts[a].saturating_mul(counts[a].saturating_add(1)) / 2
            } else {
                counts[a].saturating_mul(counts[b])
            };
            c = c.saturating_add(term);
        }
        counts.push(c);
    }
    counts[order]
}

/// Canonical rooted trees of the given order with labels in `1..=m`, sorted.
pub fn enumerate_rooted(order: usize, m: u32) -> Vec<RootedTree> {
    let mut by_order: Vec<Vec<RootedTree>> = vec![(1..=m).map(RootedTree::Leaf).collect()];
    for k in 1..=order {
        let mut level = Vec::new();
        for a_ord in 0..k {
            let b_ord = k - 1 - a_ord;
            if a_ord > b_ord {
                break;
            }
            for a in &by_order[a_ord] {
                for b in &by_order[b_ord] {
                    if a <= b {
                        level.push(RootedTree::node(a.clone(), b.clone()));
                    }
                }
            }
        }
        level.sort();
        by_order.push(level);
    }
    by_order.swap_remove(order)
}

/// An unrooted tree `<I,J>`. Values produced by [`canonicalize`] are canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnrootedTree {
    left: RootedTree,
    right: RootedTree,
}

impl Ord for UnrootedTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.left.cmp(&other.left))
            .then_with(|| self.right.cmp(&other.right))
    }
}

impl PartialOrd for UnrootedTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Result of canonicalizing an unrooted tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub tree: UnrootedTree,
    pub sign: i32,
    /// The tree is isomorphic to its own negative, so it has order at most 2.
    pub self_negative: bool,
}

/// Adjacency form: leaves have one neighbour, trivalent vertices three in
/// cyclic order.
struct Graph {
    adj: Vec<Vec<usize>>,
    label: Vec<Option<Label>>,
}

const UNSET: usize = usize::MAX;

impl Graph {
    fn from_unrooted(t: &UnrootedTree) -> Graph {
        let mut g = Graph { adj: Vec::new(), label: Vec::new() };
        let ri = g.add(&t.left, UNSET);
        let rj = g.add(&t.right, ri);
        let slot = g.adj[ri].iter().position(|&x| x == UNSET).expect("placeholder");
        g.adj[ri][slot] = rj;
        g
    }

    fn add(&mut self, t: &RootedTree, parent: usize) -> usize {
        let v = self.adj.len();
        self.adj.push(vec![parent]);
        match t {
            RootedTree::Leaf(l) => self.label.push(Some(*l)),
            RootedTree::Node(a, b) => {
                self.label.push(None);
                let ca = self.add(a, v);
                let cb = self.add(b, v);
                self.adj[v] = vec![parent, ca, cb];
            }
        }
        v
    }

    /// Rooted tree hanging off `v`, seen from its neighbour `parent`.
    fn read(&self, parent: usize, v: usize) -> RootedTree {
        match self.label[v] {
            Some(l) => RootedTree::Leaf(l),
            None => {
                let n = &self.adj[v];
                let i = n.iter().position(|&x| x == parent).expect("adjacent");
                RootedTree::node(self.read(v, n[(i + 1) % 3]), self.read(v, n[(i + 2) % 3]))
            }
        }
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (v, n) in self.adj.iter().enumerate() {
            for &w in n {
                if v < w {
                    out.push((v, w));
                }
            }
        }
        out
    }

    fn leaves(&self) -> impl Iterator<Item = (usize, Label)> + '_ {
        self.label.iter().enumerate().filter_map(|(v, l)| l.map(|l| (v, l)))
    }
}

impl UnrootedTree {
    /// Raw inner product without canonicalization.
    pub fn new(left: RootedTree, right: RootedTree) -> Self {
        UnrootedTree { left, right }
    }

    pub fn left(&self) -> &RootedTree {
        &self.left
    }

    pub fn right(&self) -> &RootedTree {
        &self.right
    }

    pub fn order(&self) -> usize {
        self.left.order() + self.right.order()
    }

    pub fn labels(&self) -> Vec<Label> {
        let mut l = self.left.labels();
        l.extend(self.right.labels());
        l
    }

    pub fn has_distinct_labels(&self) -> bool {
        let l = self.labels();
        let s: BTreeSet<_> = l.iter().collect();
        s.len() == l.len()
    }

    pub fn check_labels(&self, m: u32) -> Result<()> {
        self.left.check_labels(m)?;
        self.right.check_labels(m)
    }

    pub fn relabel(&self, f: &dyn Fn(Label) -> Label) -> UnrootedTree {
        UnrootedTree::new(self.left.relabel(f), self.right.relabel(f))
    }

    /// Swaps the children of the `k`-th trivalent vertex (left side first,
    /// preorder). Returns `false` if `k` is out of range.
    pub fn swap_vertex(&mut self, k: usize) -> bool {
        let nl = self.left.order();
        if k < nl {
            self.left.swap_vertex(k)
        } else {
            self.right.swap_vertex(k - nl)
        }
    }

    /// For every univalent vertex, its label and the rooted tree obtained by
    /// rooting the tree at that vertex.
    pub fn leaf_readings(&self) -> Vec<(Label, RootedTree)> {
        let g = Graph::from_unrooted(self);
        g.leaves().map(|(v, l)| (l, g.read(v, g.adj[v][0]))).collect()
    }

    /// Readings `<I,J>` of the tree across each of its edges.
    pub fn edge_readings(&self) -> Vec<(RootedTree, RootedTree)> {
        let g = Graph::from_unrooted(self);
        g.edges().into_iter().map(|(u, v)| (g.read(v, u), g.read(u, v))).collect()
    }

    /// Terms of the IHX relation at each internal edge, in the form of three
    /// raw trees summing to zero modulo AS.
    pub fn ihx_triples(&self) -> Vec<[UnrootedTree; 3]> {
        let g = Graph::from_unrooted(self);
        let Some((v, l)) = g.leaves().next() else { return Vec::new() };
        let r = g.read(v, g.adj[v][0]);
        r.jacobi_triples()
            .into_iter()
            .map(|[a, b, c]| {
                [
                    UnrootedTree::new(RootedTree::Leaf(l), a),
                    UnrootedTree::new(RootedTree::Leaf(l), b),
                    UnrootedTree::new(RootedTree::Leaf(l), c),
                ]
            })
            .collect()
    }
}

impl fmt::Display for UnrootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.left, self.right)
    }
}

/// Canonical representative with AS sign and self-negativity flag.
pub fn canonical_form(t: &UnrootedTree) -> Canonical {
    let mut best: Option<((RootedTree, RootedTree), i32)> = None;
    let mut signs_differ = false;
    for (i, j) in t.edge_readings() {
        let (ci, si) = i.canonical();
        let (cj, sj) = j.canonical();
        let key = if ci >= cj { (ci, cj) } else { (cj, ci) };
        let sign = si * sj;
        match &mut best {
            None => best = Some((key, sign)),
            Some((bk, bs)) => match key.cmp(bk) {
                Ordering::Less => {
                    *bk = key;
                    *bs = sign;
                    signs_differ = false;
                }
                Ordering::Equal => {
                    if sign != *bs {
                        signs_differ = true;
                        *bs = 1;
                    }
                }
                Ordering::Greater => {}
            },
        }
    }
    let ((hi, lo), sign) = best.expect("every tree has an edge");
    let self_negative = signs_differ || hi.has_symmetric_vertex() || lo.has_symmetric_vertex();
    let tree = if hi.order() > lo.order() { UnrootedTree::new(hi, lo) } else { UnrootedTree::new(lo, hi) };
    Canonical { tree, sign: if self_negative { 1 } else { sign }, self_negative }
}

/// Canonical representative and the sign relating `t` to it.
pub fn canonicalize(t: &UnrootedTree) -> (UnrootedTree, i32) {
    let c = canonical_form(t);
    (c.tree, c.sign)
}

/// Inner product `<I,J>`, canonicalized.
pub fn inner_product(i: &RootedTree, j: &RootedTree) -> (UnrootedTree, i32) {
    canonicalize(&UnrootedTree::new(i.clone(), j.clone()))
}

/// One canonical representative per AS-orbit of order `n` trees on labels `1..=m`.
pub fn enumerate_trees(order: usize, m: u32) -> Vec<UnrootedTree> {
    let mut set = BTreeSet::new();
    for r in enumerate_rooted(order, m) {
        for l in 1..=m {
            set.insert(canonicalize(&UnrootedTree::new(RootedTree::Leaf(l), r.clone())).0);
        }
    }
    set.into_iter().collect()
}

/// Any tree expression accepted by the grammar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ParsedTree {
    Rooted(RootedTree),
    Unrooted(UnrootedTree),
    /// `tw(J)`, the twisted generator `J^∞`.
    Twisted(RootedTree),
}

impl ParsedTree {
    pub fn check_labels(&self, m: u32) -> Result<()> {
        match self {
            ParsedTree::Rooted(r) | ParsedTree::Twisted(r) => r.check_labels(m),
            ParsedTree::Unrooted(u) => u.check_labels(m),
        }
    }
}

impl fmt::Display for ParsedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParsedTree::Rooted(r) => write!(f, "{}", r),
            ParsedTree::Unrooted(u) => write!(f, "{}", u),
            ParsedTree::Twisted(j) => write!(f, "tw({})", j),
        }
    }
}

pub(crate) struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        let chars: Vec<(usize, char)> = src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        Parser { chars, pos: 0, len: src.len(), _src: src }
    }

    /// Byte offset of the next significant character.
    pub(crate) fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |(i, _)| *i)
    }

    pub(crate) fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    pub(crate) fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).map(|(_, c)| *c)
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => self.err(format!("expected '{}', found '{}'", c, x)),
            None => self.err(format!("expected '{}', found end of input", c)),
        }
    }

    pub(crate) fn keyword(&mut self, kw: &str) -> bool {
        let n = kw.chars().count();
        if kw.chars().enumerate().all(|(k, c)| self.peek_at(k) == Some(c)) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    pub(crate) fn number(&mut self) -> Result<u64> {
        let start = self.offset();
        let mut digits = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        if digits.is_empty() {
            return self.err("expected a number");
        }
        digits.parse::<u64>().map_err(|_| Error::Parse { pos: start, msg: "number too large".into() })
    }

    fn label(&mut self) -> Result<Label> {
        let start = self.offset();
        let n = self.number()?;
        if n == 0 {
            return Err(Error::Parse { pos: start, msg: "labels start at 1".into() });
        }
        Label::try_from(n).map_err(|_| Error::Parse { pos: start, msg: "label too large".into() })
    }

    pub(crate) fn rooted(&mut self) -> Result<RootedTree> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let a = self.rooted()?;
                self.expect(',')?;
                let b = self.rooted()?;
                self.expect(')')?;
                Ok(RootedTree::node(a, b))
            }
            Some(c) if c.is_ascii_digit() => Ok(RootedTree::Leaf(self.label()?)),
            Some(c) => self.err(format!("unexpected '{}'", c)),
            None => self.err("unexpected end of input"),
        }
    }

    pub(crate) fn tree(&mut self) -> Result<ParsedTree> {
        if self.keyword("tw(") {
            let j = self.rooted()?;
            self.expect(')')?;
            return Ok(ParsedTree::Twisted(j));
        }
        if self.peek() == Some('<') {
            self.pos += 1;
            let a = self.rooted()?;
            self.expect(',')?;
            let b = self.rooted()?;
            self.expect('>')?;
            return Ok(ParsedTree::Unrooted(UnrootedTree::new(a, b)));
        }
        Ok(ParsedTree::Rooted(self.rooted()?))
    }
}

/// Parses a rooted, unrooted or twisted tree expression.
pub fn parse_tree(text: &str) -> Result<ParsedTree> {
    let mut p = Parser::new(text);
    let t = p.tree()?;
    if !p.at_end() {
        return p.err("trailing input");
    }
    Ok(t)
}

/// Parses and checks all labels lie in `1..=m`.
pub fn parse_tree_with_labels(text: &str, m: u32) -> Result<ParsedTree> {
    let t = parse_tree(text)?;
    t.check_labels(m)?;
    Ok(t)
}

impl FromStr for RootedTree {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match parse_tree(s)? {
            ParsedTree::Rooted(r) => Ok(r),
            _ => Err(Error::Parse { pos: 0, msg: "expected a rooted tree".into() }),
        }
    }
}

impl FromStr for UnrootedTree {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match parse_tree(s)? {
            ParsedTree::Unrooted(u) => Ok(u),
            _ => Err(Error::Parse { pos: 0, msg: "expected an unrooted tree <I,J>".into() }),
        }
    }
}

/// Indexed list of canonical trees of one order.
#[derive(Clone, Debug)]
pub struct TreeBasis {
    pub order: usize,
    pub labels: u32,
    trees: Vec<UnrootedTree>,
    index: HashMap<UnrootedTree, usize>,
}

impl TreeBasis {
    pub fn new(order: usize, labels: u32) -> Self {
        let trees = enumerate_trees(order, labels);
        let index = trees.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        TreeBasis { order, labels, trees, index }
    }

    pub fn trees(&self) -> &[UnrootedTree] {
        &self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// Index of a canonical tree.
    pub fn index_of(&self, t: &UnrootedTree) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Index and sign of an arbitrary tree of this order.
    pub fn locate(&self, t: &UnrootedTree) -> Option<(usize, i32)> {
        let (c, s) = canonicalize(t);
        self.index_of(&c).map(|i| (i, s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelatorKind {
    AS,
    IHX,
}

/// Sparse relators over `basis`: sorted `(index, coefficient)` lists, zero
/// rows and duplicates removed.
pub fn sparse_relators(basis: &TreeBasis, kind: RelatorKind) -> Vec<Vec<(usize, i64)>> {
    let mut out = BTreeSet::new();
    let add = |terms: &[(UnrootedTree, i64)], out: &mut BTreeSet<Vec<(usize, i64)>>| {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (t, c) in terms {
            let (i, s) = basis.locate(t).expect("relator term lies in the basis");
            *acc.entry(i).or_insert(0) += c * s as i64;
        }
        let row: Vec<(usize, i64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        if !row.is_empty() {
            out.insert(row);
        }
    };
    for t in basis.trees() {
        match kind {
            RelatorKind::AS => {
                for k in 0..t.order() {
                    let mut s = t.clone();
                    s.swap_vertex(k);
                    add(&[(t.clone(), 1), (s, 1)], &mut out);
                }
            }
            RelatorKind::IHX => {
                for [a, b, c] in t.ihx_triples() {
                    add(&[(a, 1), (b, 1), (c, 1)], &mut out);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Dense relator vectors over `enumerate_trees(order, m)`.
pub fn relators(order: usize, m: u32, kind: RelatorKind) -> Vec<Vec<i64>> {
    let basis = TreeBasis::new(order, m);
    sparse_relators(&basis, kind)
        .into_iter()
        .map(|row| {
            let mut v = vec![0i64; basis.len()];
            for (i, c) in row {
                v[i] = c;
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(s: &str) -> UnrootedTree {
        s.parse().unwrap()
    }

    fn r(s: &str) -> RootedTree {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_tree("<(1,2),3>").unwrap(), ParsedTree::Unrooted(u("<(1,2),3>")));
        assert_eq!(parse_tree("tw((1,2))").unwrap(), ParsedTree::Twisted(r("(1,2)")));
        assert_eq!(parse_tree(" < ( 1 , 2 ) , 3 > ").unwrap().to_string(), "<(1,2),3>");
        assert!(matches!(parse_tree("<1>"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_tree("(0,1)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_tree_with_labels("<1,4>", 3), Err(Error::LabelOutOfRange { label: 4, max: 3 })));
        assert!(parse_tree("<1,2>>").is_err());
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonicalize(&u("<(2,1),3>")), (u("<(1,2),3>"), -1));
        assert_eq!(canonicalize(&u("<(1,2),3>")), (u("<(1,2),3>"), 1));
        assert_eq!(canonicalize(&u("<3,(1,2)>")), (u("<(1,2),3>"), 1));
        assert_eq!(canonicalize(&u("<1,(2,3)>")), (u("<(1,2),3>"), 1));
        assert_eq!(canonicalize(&u("<(1,2),(1,2)>")), (u("<(1,2),(1,2)>"), 1));
        assert_eq!(canonicalize(&u("<2,1>")), (u("<1,2>"), 1));
    }

    #[test]
    fn self_negative_trees() {
        assert!(canonical_form(&u("<1,(1,1)>")).self_negative);
        assert!(canonical_form(&u("<2,(1,1)>")).self_negative);
        assert!(!canonical_form(&u("<(1,2),(1,2)>")).self_negative);
        assert!(!canonical_form(&u("<(1,2),3>")).self_negative);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_trees(0, 2), vec![u("<1,1>"), u("<1,2>"), u("<2,2>")]);
        assert_eq!(enumerate_trees(1, 1).len(), 1);
        assert_eq!(enumerate_trees(1, 2).len(), 4);
    }

    #[test]
    fn products() {
        assert_eq!(rooted_product(&r("1"), &r("2")), r("(1,2)"));
        assert_eq!(rooted_product(&r("(1,2)"), &r("3")).order(), 2);
        let (t, _) = inner_product(&r("1"), &r("(2,3)"));
        assert_eq!(t.order(), 1);
        assert_eq!(inner_product(&r("1"), &r("2")).0.order(), 0);
        assert_eq!(inner_product(&r("(1,2)"), &r("(1,2)")), (u("<(1,2),(1,2)>"), 1));
    }

    #[test]
    fn relator_examples() {
        assert_eq!(relators(1, 1, RelatorKind::AS), vec![vec![2]]);
        assert!(relators(0, 3, RelatorKind::IHX).is_empty());
        let ihx = relators(2, 1, RelatorKind::IHX);
        assert!(!ihx.is_empty());
        for row in &ihx {
            let l1: i64 = row.iter().map(|c| c.abs()).sum();
            assert!(l1 <= 3 && l1 >= 1);
        }
    }

    #[test]
    fn leaf_readings_of_y_tree() {
        let t = u("<(1,2),3>");
        let mut rd = t.leaf_readings();
        rd.sort();
        assert_eq!(rd, vec![(1, r("(2,3)")), (2, r("(3,1)")), (3, r("(1,2)"))]);
    }

    #[test]
    fn jacobi_triples_of_small_tree() {
        assert!(r("(1,2)").jacobi_triples().is_empty());
        let tr = r("(1,(2,3))").jacobi_triples();
        assert_eq!(tr.len(), 1);
        assert_eq!(tr[0], [r("(1,(2,3))"), r("(2,(3,1))"), r("(3,(1,2))")]);
    }

    #[test]
    fn rooted_counts_match_enumeration() {
        for m in 1..=3 {
            for n in 0..=4 {
                assert_eq!(count_rooted(n, m), enumerate_rooted(n, m).len() as u128);
            }
        }
    }
}
