//! Pure braids, their longitudes and the realization of trees by
//! iterated commutators of the standard generators `A(i,j)`.
//!
//! Words are read bottom to top. In `σ_k` the strand at position `k+1`
//! crosses over the strand at position `k`; in `σ_k^{-1}` the strand at
//! position `k` crosses over the strand at position `k+1`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homs::eta_tree;
use crate::liealg::Flavor;
use crate::milnor::{total_milnor, FreeWord, LinkSource, StringLinkData};
use crate::trees::{Parser, RootedTree, UnrootedTree};

/// A braid word in `σ_1..σ_{m-1}` whose permutation is trivial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PureBraid {
    strands: u32,
    word: Vec<(u32, i8)>,
}

impl PureBraid {
    pub fn identity(strands: u32) -> Self {
        PureBraid { strands, word: Vec::new() }
    }

    /// Checks indices and purity.
    pub fn new(strands: u32, word: Vec<(u32, i8)>) -> Result<Self> {
        for &(k, e) in &word {
            if k == 0 || k >= strands {
                return Err(Error::IndexOutOfRange(format!("s{} on {} strands", k, strands)));
            }
            if e != 1 && e != -1 {
                return Err(Error::Internal("braid letters have exponent ±1".into()));
            }
        }
        let perm = permutation(strands, &word);
        if perm.iter().enumerate().any(|(p, &s)| p as u32 + 1 != s) {
            return Err(Error::NotPure(format!("strand permutation {:?}", perm)));
        }
        Ok(PureBraid { strands, word })
    }

    /// `A(i,j) = (σ_{j-1}⋯σ_{i+1}) σ_i² (σ_{i+1}^{-1}⋯σ_{j-1}^{-1})`
    pub fn generator(strands: u32, i: u32, j: u32) -> Result<Self> {
        if !(1 <= i && i < j && j <= strands) {
            return Err(Error::IndexOutOfRange(format!("A({},{}) on {} strands", i, j, strands)));
        }
        let mut word: Vec<(u32, i8)> = (i + 1..j).rev().map(|k| (k, 1)).collect();
        word.push((i, 1));
        word.push((i, 1));
        word.extend((i + 1..j).map(|k| (k, -1)));
        Ok(PureBraid { strands, word })
    }

    pub fn strands(&self) -> u32 {
        self.strands
    }

    pub fn word(&self) -> &[(u32, i8)] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Stacks `other` on top of `self`.
    pub fn compose(&self, other: &PureBraid) -> PureBraid {
        assert_eq!(self.strands, other.strands, "braids on different strand counts");
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        PureBraid { strands: self.strands, word }
    }

    pub fn inverse(&self) -> PureBraid {
        PureBraid { strands: self.strands, word: self.word.iter().rev().map(|&(k, e)| (k, -e)).collect() }
    }

    pub fn commutator(a: &PureBraid, b: &PureBraid) -> PureBraid {
        a.compose(b).compose(&a.inverse()).compose(&b.inverse())
    }

    pub fn pow(&self, k: i64) -> PureBraid {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = PureBraid::identity(self.strands);
        for _ in 0..k.unsigned_abs() {
            out = out.compose(&base);
        }
        out
    }
}

impl fmt::Display for PureBraid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> =
            self.word.iter().map(|&(k, e)| if e > 0 { format!("s{}", k) } else { format!("s{}^-1", k) }).collect();
        f.write_str(&parts.join(" "))
    }
}

/// `perm[p]` is the strand (by starting position) ending at position `p+1`.
fn permutation(strands: u32, word: &[(u32, i8)]) -> Vec<u32> {
    let mut at: Vec<u32> = (1..=strands).collect();
    for &(k, _) in word {
        at.swap(k as usize - 1, k as usize);
    }
    at
}

fn parse_exponent(p: &mut Parser, b: PureBraid) -> Result<PureBraid> {
    if p.peek() != Some('^') {
        return Ok(b);
    }
    p.bump();
    let neg = p.peek() == Some('-');
    if neg {
        p.bump();
    }
    let k = p.number()? as i64;
    Ok(b.pow(if neg { -k } else { k }))
}

fn parse_braid_inner(p: &mut Parser, strands: u32) -> Result<PureBraid> {
    let mut out = PureBraid::identity(strands);
    loop {
        let start = p.offset();
        let atom = match p.peek() {
            Some('s') => {
                p.bump();
                let k = p.number()?;
                if k == 0 || k >= strands as u64 {
                    return Err(Error::Parse { pos: start, msg: format!("s{} needs 1 <= k < {}", k, strands) });
                }
                PureBraid { strands, word: vec![(k as u32, 1)] }
            }
            Some('A') => {
                p.bump();
                p.expect('(')?;
                let i = p.number()?;
                p.expect(',')?;
                let j = p.number()?;
                p.expect(')')?;
                let (i, j) = (u32::try_from(i).unwrap_or(u32::MAX), u32::try_from(j).unwrap_or(u32::MAX));
                PureBraid::generator(strands, i, j)
                    .map_err(|_| Error::Parse { pos: start, msg: format!("A({},{}) needs 1 <= i < j <= {}", i, j, strands) })?
            }
            Some('[') => {
                p.bump();
                let a = parse_braid_inner(p, strands)?;
                p.expect(',')?;
                let b = parse_braid_inner(p, strands)?;
                p.expect(']')?;
                PureBraid::commutator(&a, &b)
            }
            Some('1') if out.is_empty() => {
                p.bump();
                continue;
            }
            _ => return Ok(out),
        };
        let atom = parse_exponent(p, atom)?;
        out = out.compose(&atom);
    }
}

/// Parses `s1 s2^-1 A(1,3) [A(1,3),A(2,3)]`; the result must be pure.
pub fn parse_braid(text: &str, strands: u32) -> Result<PureBraid> {
    if strands == 0 {
        return Err(Error::IndexOutOfRange("a braid needs at least one strand".into()));
    }
    let mut p = Parser::new(text);
    let b = parse_braid_inner(&mut p, strands)?;
    if !p.at_end() {
        return p.err("unexpected character in braid word");
    }
    PureBraid::new(strands, b.word)
}

/// One crossing of a braid diagram; strands are named by their starting position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub level: usize,
    pub position: u32,
    pub over: u32,
    pub under: u32,
    pub sign: i8,
}

/// Crossings from bottom to top.
pub fn crossings(b: &PureBraid) -> Vec<Crossing> {
    let mut at: Vec<u32> = (1..=b.strands).collect();
    let mut out = Vec::with_capacity(b.word.len());
    for (level, &(k, e)) in b.word.iter().enumerate() {
        let (lo, hi) = (at[k as usize - 1], at[k as usize]);
        let (over, under) = if e > 0 { (hi, lo) } else { (lo, hi) };
        out.push(Crossing { level, position: k, over, under, sign: e });
        at.swap(k as usize - 1, k as usize);
    }
    out
}

/// Reads the longitudes off the crossing list. At each crossing the
/// under-strand's meridian is conjugated by `a = g_over^{±1}` and `a` is
/// appended to its longitude; the result is zero-framed.
pub fn braid_longitudes(b: &PureBraid) -> StringLinkData {
    let m = b.strands as usize;
    let mut gens: Vec<FreeWord> = (1..=b.strands).map(FreeWord::generator).collect();
    let mut longs = vec![FreeWord::identity(); m];
    for c in crossings(b) {
        let over = &gens[c.over as usize - 1];
        let a = if c.sign > 0 { over.clone() } else { over.inverse() };
        let u = c.under as usize - 1;
        gens[u] = gens[u].conjugate_by(&a);
        longs[u] = longs[u].mul(&a);
    }
    for (i, l) in longs.iter_mut().enumerate() {
        let x = FreeWord::generator(i as u32 + 1);
        let e = l.exponent_sum(i as u32 + 1);
        *l = l.mul(&x.pow(-e));
    }
    StringLinkData { strands: b.strands, longitudes: longs, source: LinkSource::Braid }
}

/// A braid realizing a tree, with `μ_n(braid) = sign · η_n(tree)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub braid: PureBraid,
    pub sign: i32,
}

/// Realizes a tree with distinct labels by the iterated commutator of
/// `A(i,j)` read from the leaf `j` carrying the largest label.
pub fn realize_tree(t: &UnrootedTree, strands: u32) -> Result<Realization> {
    if !t.has_distinct_labels() {
        return Err(Error::RepeatedLabels(t.to_string()));
    }
    t.check_labels(strands)?;
    let labels = t.labels();
    let root = *labels.iter().max().expect("trees have leaves");
    let (_, reading) = t
        .leaf_readings()
        .into_iter()
        .find(|(l, _)| *l == root)
        .ok_or_else(|| Error::Internal("root leaf missing".into()))?;
    fn build(r: &RootedTree, root: u32, strands: u32) -> Result<PureBraid> {
        match r {
            RootedTree::Leaf(i) => PureBraid::generator(strands, *i, root),
            RootedTree::Node(a, b) => Ok(PureBraid::commutator(&build(a, root, strands)?, &build(b, root, strands)?)),
        }
    }
    let braid = build(&reading, root, strands)?;
    let n = t.order();
    let mu = total_milnor(&braid_longitudes(&braid), n)?.invariant;
    let eta = eta_tree(t, strands, Flavor::Lie)?;
    let sign = if mu == eta {
        1
    } else if mu == eta.neg() {
        -1
    } else {
        return Err(Error::Internal(format!("realization of {} has μ = {}, expected ±{}", t, mu, eta)));
    };
    Ok(Realization { braid, sign })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::{artin_rep, milnor_mu};
    use num_bigint::BigInt;

    #[test]
    fn generator_words() {
        assert_eq!(PureBraid::generator(3, 1, 2).unwrap().to_string(), "s1 s1");
        assert_eq!(PureBraid::generator(3, 1, 3).unwrap().to_string(), "s2 s1 s1 s2^-1");
        assert_eq!(PureBraid::generator(4, 1, 4).unwrap().to_string(), "s3 s2 s1 s1 s2^-1 s3^-1");
        let b = parse_braid("[A(1,3),A(2,3)]", 3).unwrap();
        assert_eq!(b.len(), 12);
    }

    #[test]
    fn purity() {
        assert!(matches!(parse_braid("s1", 2), Err(Error::NotPure(_))));
        assert_eq!(parse_braid("s1 s1^-1", 2).unwrap().len(), 2);
        assert!(matches!(parse_braid("s3", 3), Err(Error::Parse { .. })));
        assert!(matches!(parse_braid("A(2,2)", 3), Err(Error::Parse { .. })));
    }

    #[test]
    fn hopf_longitudes() {
        let s = braid_longitudes(&parse_braid("A(1,2)", 2).unwrap());
        assert_eq!(s.longitudes[0].to_string(), "x2");
        assert_eq!(s.longitudes[1].to_string(), "x2^-1 x1 x2");
        let a = artin_rep(&s, 2).unwrap();
        assert_eq!(a.images[0].to_string(), "x2^-1 x1 x2");
    }

    #[test]
    fn borromean_like_triple() {
        let s = braid_longitudes(&parse_braid("[A(1,3),A(2,3)]", 3).unwrap());
        for pair in [[1, 2], [2, 1], [1, 3], [3, 1], [2, 3], [3, 2]] {
            assert_eq!(milnor_mu(&s, &pair).unwrap(), BigInt::from(0));
        }
        let mu = milnor_mu(&s, &[1, 2, 3]).unwrap();
        assert!(mu == BigInt::from(1) || mu == BigInt::from(-1));
    }

    #[test]
    fn realize_small_trees() {
        for text in ["<1,2>", "<(1,2),3>", "<((1,2),3),4>", "<(1,3),(2,4)>"] {
            let t: UnrootedTree = text.parse().unwrap();
            let r = realize_tree(&t, 4).unwrap();
            assert_eq!(r.braid.strands(), 4);
        }
        let t: UnrootedTree = "<(1,1),2>".parse().unwrap();
        assert!(matches!(realize_tree(&t, 3), Err(Error::RepeatedLabels(_))));
    }
}
