//! The tree groups `T_n`, `T̃_n` and `T^∞_n` as presented abelian groups.
//!
//! Generators are canonical unrooted trees and, for the twisted flavor in
//! even order `2k`, twisted generators `tw(J)` for canonical rooted `J` of
//! order `k`. Since `tw(J)` does not depend on the orientation sign of `J`,
//! the symmetry relation is built into the choice of generators.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Limits, Result};
use crate::exactalg::{group_from_presentation, CanonicalCoords, GroupStructure, IntMatrix, PresentedGroup};
use crate::trees::{count_rooted, 
    canonicalize, enumerate_rooted, enumerate_trees, sparse_relators, Parser, ParsedTree, RelatorKind, RootedTree,
    TreeBasis, UnrootedTree,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TowerFlavor {
    Plain,
    Reduced,
    Twisted,
}

impl FromStr for TowerFlavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(TowerFlavor::Plain),
            "reduced" => Ok(TowerFlavor::Reduced),
            "twisted" => Ok(TowerFlavor::Twisted),
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown flavor '{}'", s) }),
        }
    }
}

impl fmt::Display for TowerFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TowerFlavor::Plain => "plain",
            TowerFlavor::Reduced => "reduced",
            TowerFlavor::Twisted => "twisted",
        })
    }
}

/// A generator of a tree group, always in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Tree(UnrootedTree),
    Twist(RootedTree),
}

impl Generator {
    /// Canonical twisted generator; the orientation sign of `J` is dropped.
    pub fn twist(j: &RootedTree) -> Generator {
        Generator::Twist(j.canonical().0)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Tree(t) => write!(f, "{}", t),
            Generator::Twist(j) => write!(f, "tw({})", j),
        }
    }
}

/// Integer linear combination of canonical generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FormalSum {
    terms: BTreeMap<Generator, i64>,
}

impl FormalSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &BTreeMap<Generator, i64> {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_generator(&mut self, g: Generator, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(g.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&g);
        }
    }

    /// Adds `c · t`, canonicalizing `t` with its AS sign.
    pub fn add_tree(&mut self, t: &UnrootedTree, c: i64) {
        let (ct, s) = canonicalize(t);
        self.add_generator(Generator::Tree(ct), c * s as i64);
    }

    /// Adds `c · tw(J)`.
    pub fn add_twist(&mut self, j: &RootedTree, c: i64) {
        self.add_generator(Generator::twist(j), c);
    }

    pub fn add_sum(&mut self, other: &FormalSum, c: i64) {
        for (g, &a) in &other.terms {
            self.add_generator(g.clone(), a * c);
        }
    }

    pub fn scaled(&self, c: i64) -> FormalSum {
        let mut out = FormalSum::new();
        out.add_sum(self, c);
        out
    }

    pub fn from_tree(t: &UnrootedTree) -> FormalSum {
        let mut s = FormalSum::new();
        s.add_tree(t, 1);
        s
    }

    pub fn from_twist(j: &RootedTree) -> FormalSum {
        let mut s = FormalSum::new();
        s.add_twist(j, 1);
        s
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (g, &c)) in self.terms.iter().enumerate() {
            let a = c.abs();
            if k == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            if a != 1 {
                write!(f, "{}*", a)?;
            }
            write!(f, "{}", g)?;
        }
        Ok(())
    }
}

impl FromStr for FormalSum {
    type Err = Error;

    /// Grammar: `term (("+"|"-") term)*`, `term := [integer "*"] tree`, with
    /// an optional leading sign. `tree` is an unrooted or twisted tree.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser::new(s);
        let mut out = FormalSum::new();
        if p.at_end() {
            return p.err("empty formal sum");
        }
        if p.peek() == Some('0') && p.peek_at(1).is_none() {
            return Ok(out);
        }
        let mut first = true;
        loop {
            let mut sign = 1i64;
            match p.peek() {
                Some('+') if !first => {
                    p.bump();
                }
                Some('-') => {
                    p.bump();
                    sign = -1;
                }
                _ if first => {}
                Some(c) => return p.err(format!("expected '+' or '-', found '{}'", c)),
                None => break,
            }
            first = false;
            let mut coef = 1i64;
            if p.peek().is_some_and(|c| c.is_ascii_digit()) {
                let n = p.number()?;
                coef = i64::try_from(n).map_err(|_| Error::Parse { pos: p.offset(), msg: "coefficient too large".into() })?;
                p.expect('*')?;
            }
            let pos = p.offset();
            match p.tree()? {
                ParsedTree::Unrooted(t) => out.add_tree(&t, sign * coef),
                ParsedTree::Twisted(j) => out.add_twist(&j, sign * coef),
                ParsedTree::Rooted(_) => {
                    return Err(Error::Parse { pos, msg: "expected <I,J> or tw(J), found a rooted tree".into() })
                }
            }
            if p.at_end() {
                break;
            }
        }
        Ok(out)
    }
}

/// Where a relator of a tree group comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RelatorSource {
    AS,
    IHX,
    Framing,
    BoundaryTwist,
    InteriorTwist,
    TwistedIHX,
}

/// A graded tree group with its presentation.
#[derive(Clone, Debug)]
pub struct TreeGroup {
    pub order: usize,
    pub labels: u32,
    pub flavor: TowerFlavor,
    generators: Vec<Generator>,
    index: HashMap<Generator, usize>,
    relators: Vec<(RelatorSource, Vec<(usize, i64)>)>,
    presentation: OnceLock<PresentedGroup>,
}

impl TreeGroup {
    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn index_of(&self, g: &Generator) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// Relators as sparse rows, tagged by origin.
    pub fn relators(&self) -> &[(RelatorSource, Vec<(usize, i64)>)] {
        &self.relators
    }

    /// The presented group; the Smith form is computed on first use.
    pub fn presentation(&self) -> &PresentedGroup {
        self.presentation.get_or_init(|| {
            let g = self.generators.len();
            let rows: Vec<Vec<BigInt>> = self
                .relators
                .iter()
                .map(|(_, row)| {
                    let mut v = vec![BigInt::zero(); g];
                    for &(i, c) in row {
                        v[i] = BigInt::from(c);
                    }
                    v
                })
                .collect();
            let names = self.generators.iter().map(|x| x.to_string()).collect();
            let m = IntMatrix::from_rows(g, rows).expect("relator rows have generator length");
            group_from_presentation(names, m).expect("relator matrix matches generators")
        })
    }

    pub fn structure(&self) -> &GroupStructure {
        self.presentation().structure()
    }

    /// Coefficient vector over the generators.
    pub fn to_vector(&self, s: &FormalSum) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.generators.len()];
        for (g, &c) in s.terms() {
            let i = self.index_of(g).ok_or_else(|| Error::ForeignGenerator(g.to_string()))?;
            v[i] += c;
        }
        Ok(v)
    }

    pub fn relator_sum(&self, row: &[(usize, i64)]) -> FormalSum {
        let mut s = FormalSum::new();
        for &(i, c) in row {
            s.add_generator(self.generators[i].clone(), c);
        }
        s
    }
}

/// Canonical coordinates of `s` in `g`.
pub fn reduce_element(s: &FormalSum, g: &TreeGroup) -> Result<CanonicalCoords> {
    Ok(g.presentation().coordinates(&g.to_vector(s)?))
}

/// `Δ(t) = Σ_v <ℓ(v), (T_v, T_v)>`, summed over the univalent vertices of `t`.
pub fn delta(t: &UnrootedTree) -> FormalSum {
    let mut s = FormalSum::new();
    for (l, tv) in t.leaf_readings() {
        s.add_tree(&UnrootedTree::new(RootedTree::Leaf(l), RootedTree::node(tv.clone(), tv)), 1);
    }
    s
}

/// `Δ(t)` with an order check against the target order `2k-1`.
pub fn delta_checked(t: &UnrootedTree, target_order: usize) -> Result<FormalSum> {
    if target_order % 2 == 0 || t.order() * 2 + 1 != target_order {
        return Err(Error::OrderMismatch { expected: (target_order.saturating_sub(1)) / 2, found: t.order() });
    }
    Ok(delta(t))
}

fn sum_to_row(index: &HashMap<Generator, usize>, s: &FormalSum) -> Vec<(usize, i64)> {
    s.terms()
        .iter()
        .map(|(g, &c)| (*index.get(g).unwrap_or_else(|| panic!("relator term {} outside generator set", g)), c))
        .collect::<BTreeMap<_, _>>()
        .into_iter()
        .collect()
}

pub fn tower_group(n: usize, m: u32, flavor: TowerFlavor) -> Result<TreeGroup> {
    tower_group_with_limits(n, m, flavor, &Limits::default())
}

pub fn tower_group_with_limits(n: usize, m: u32, flavor: TowerFlavor, limits: &Limits) -> Result<TreeGroup> {
    if m == 0 {
        return Err(Error::LabelOutOfRange { label: 0, max: 0 });
    }
    let lower_bound = count_rooted(n, m).saturating_mul(m as u128) / (n as u128 + 2);
    limits.check("tree group", usize::try_from(lower_bound).unwrap_or(usize::MAX), 0)?;
    let basis = TreeBasis::new(n, m);
    let mut generators: Vec<Generator> = basis.trees().iter().cloned().map(Generator::Tree).collect();
    let twisted_even = flavor == TowerFlavor::Twisted && n % 2 == 0;
    let half_trees = if twisted_even { enumerate_rooted(n / 2, m) } else { Vec::new() };
    generators.extend(half_trees.iter().cloned().map(Generator::Twist));
    limits.check("tree group", generators.len(), 0)?;
    let index: HashMap<Generator, usize> = generators.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();

    let mut relators: Vec<(RelatorSource, Vec<(usize, i64)>)> = Vec::new();
    for row in sparse_relators(&basis, RelatorKind::AS) {
        relators.push((RelatorSource::AS, row));
    }
    for row in sparse_relators(&basis, RelatorKind::IHX) {
        relators.push((RelatorSource::IHX, row));
    }
    let mut extra: BTreeSet<(RelatorSource, Vec<(usize, i64)>)> = BTreeSet::new();
    let mut push = |src: RelatorSource, s: &FormalSum| {
        let row = sum_to_row(&index, s);
        if !row.is_empty() {
            extra.insert((src, row));
        }
    };
    if n % 2 == 1 && flavor != TowerFlavor::Plain {
        let k = (n + 1) / 2;
        for t in enumerate_trees(k - 1, m) {
            push(RelatorSource::Framing, &delta(&t));
        }
        if flavor == TowerFlavor::Twisted {
            for j in enumerate_rooted(k - 1, m) {
                for i in 1..=m {
                    let t = UnrootedTree::new(RootedTree::Leaf(i), RootedTree::node(j.clone(), j.clone()));
                    push(RelatorSource::BoundaryTwist, &FormalSum::from_tree(&t));
                }
            }
        }
    }
    if twisted_even {
        for j in &half_trees {
            let mut s = FormalSum::new();
            s.add_twist(j, 2);
            s.add_tree(&UnrootedTree::new(j.clone(), j.clone()), -1);
            push(RelatorSource::InteriorTwist, &s);
            for triple in j.jacobi_triples() {
                for r in 0..3 {
                    let a = &triple[r];
                    let b = &triple[(r + 1) % 3];
                    let c = &triple[(r + 2) % 3];
                    // a = -(b + c), so tw(a) = tw(b) + tw(c) + <b,c>
                    let mut s = FormalSum::new();
                    s.add_twist(a, 1);
                    s.add_twist(b, -1);
                    s.add_twist(c, -1);
                    s.add_tree(&UnrootedTree::new(b.clone(), c.clone()), -1);
                    push(RelatorSource::TwistedIHX, &s);
                }
            }
        }
    }
    relators.extend(extra);
    limits.check("tree group", generators.len(), relators.len())?;

    Ok(TreeGroup { order: n, labels: m, flavor, generators, index, relators, presentation: OnceLock::new() })
}

/// Formal intersection data of a Whitney tower: signed trees and twisting
/// numbers of twisted Whitney disks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntersectionData {
    pub points: Vec<(UnrootedTree, i32)>,
    pub twists: Vec<(RootedTree, i64)>,
}

/// `τ = Σ ε_p t_p + Σ ω(J) · J^∞`.
pub fn tau_of_data(d: &IntersectionData, g: &TreeGroup) -> Result<FormalSum> {
    if !d.twists.is_empty() && (g.flavor != TowerFlavor::Twisted || g.order % 2 == 1) {
        return Err(Error::InvalidTwist(format!(
            "twisted Whitney disks need an even order twisted group, got order {} {}",
            g.order, g.flavor
        )));
    }
    let mut s = FormalSum::new();
    for (t, e) in &d.points {
        t.check_labels(g.labels)?;
        if t.order() != g.order {
            return Err(Error::OrderMismatch { expected: g.order, found: t.order() });
        }
        s.add_tree(t, *e as i64);
    }
    for (j, w) in &d.twists {
        j.check_labels(g.labels)?;
        if 2 * j.order() != g.order {
            return Err(Error::OrderMismatch { expected: g.order / 2, found: j.order() });
        }
        s.add_twist(j, *w);
    }
    Ok(s)
}
