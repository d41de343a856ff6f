//! Free group words, the Magnus expansion, Milnor invariants of string
//! links and the Artin representation on `F/F_{n+2}`.
//!
//! Conventions: the `i`-th longitude `l_i` is a word in the meridians
//! `x_1..x_m`; the Artin automorphism sends `x_i ↦ l_i^{-1} x_i l_i`. The
//! group commutator is `[u,v] = u v u^{-1} v^{-1}`, whose Magnus expansion
//! starts with the Lie bracket `UV - VU`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::left_kernel;
use crate::liealg::{hall_basis, sl_map, witt_rank, Flavor, LieElement, TensorElement};
use crate::trees::{Parser, RootedTree};

/// Freely reduced word in `x_1..x_m`; letters are `(generator, ±1)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    letters: Vec<(u32, i8)>,
}

impl FreeWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(i: u32) -> Self {
        FreeWord { letters: vec![(i, 1)] }
    }

    /// Builds and freely reduces a word.
    pub fn from_letters(letters: impl IntoIterator<Item = (u32, i8)>) -> Self {
        let mut w = FreeWord::identity();
        for (g, e) in letters {
            assert!(e == 1 || e == -1, "letter exponents are ±1");
            w.push(g, e);
        }
        w
    }

    fn push(&mut self, g: u32, e: i8) {
        if let Some(&(h, f)) = self.letters.last() {
            if h == g && f == -e {
                self.letters.pop();
                return;
            }
        }
        self.letters.push((g, e));
    }

    pub fn letters(&self) -> &[(u32, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut w = self.clone();
        for &(g, e) in &other.letters {
            w.push(g, e);
        }
        w
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord { letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    /// `[u,v] = u v u^{-1} v^{-1}`
    pub fn commutator(u: &FreeWord, v: &FreeWord) -> FreeWord {
        u.mul(v).mul(&u.inverse()).mul(&v.inverse())
    }

    /// `c^{-1} w c`
    pub fn conjugate_by(&self, c: &FreeWord) -> FreeWord {
        c.inverse().mul(self).mul(c)
    }

    pub fn pow(&self, k: i64) -> FreeWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = FreeWord::identity();
        for _ in 0..k.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    /// Exponent sum of generator `i`.
    pub fn exponent_sum(&self, i: u32) -> i64 {
        self.letters.iter().filter(|(g, _)| *g == i).map(|(_, e)| *e as i64).sum()
    }

    pub fn max_generator(&self) -> u32 {
        self.letters.iter().map(|(g, _)| *g).max().unwrap_or(0)
    }

    /// Replaces each `x_i` by `images[i-1]`.
    pub fn substitute(&self, images: &[FreeWord]) -> FreeWord {
        let mut w = FreeWord::identity();
        for &(g, e) in &self.letters {
            let img = &images[g as usize - 1];
            w = w.mul(&if e > 0 { img.clone() } else { img.inverse() });
        }
        w
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(g, e)| if e > 0 { format!("x{}", g) } else { format!("x{}^-1", g) })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

fn parse_exponent(p: &mut Parser, x: FreeWord) -> Result<FreeWord> {
    if p.peek() != Some('^') {
        return Ok(x);
    }
    p.bump();
    let neg = p.peek() == Some('-');
    if neg {
        p.bump();
    }
    let k = p.number()? as i64;
    Ok(x.pow(if neg { -k } else { k }))
}

fn parse_word_inner(p: &mut Parser) -> Result<FreeWord> {
    let mut w = FreeWord::identity();
    loop {
        let atom = match p.peek() {
            Some('x') => {
                p.bump();
                let start = p.offset();
                let g = p.number()?;
                if g == 0 {
                    return Err(Error::Parse { pos: start, msg: "generators start at x1".into() });
                }
                let g = u32::try_from(g)
                    .map_err(|_| Error::Parse { pos: start, msg: "generator index too large".into() })?;
                FreeWord::generator(g)
            }
            Some('[') => {
                p.bump();
                let u = parse_word_inner(p)?;
                p.expect(',')?;
                let v = parse_word_inner(p)?;
                p.expect(']')?;
                FreeWord::commutator(&u, &v)
            }
            Some('1') if w.is_empty() => {
                p.bump();
                continue;
            }
            _ => return Ok(w),
        };
        let atom = parse_exponent(p, atom)?;
        w = w.mul(&atom);
    }
}

/// Parses words such as `x1 x2^-1 [x1,x2]`; `1` denotes the empty word.
pub fn parse_word(text: &str) -> Result<FreeWord> {
    let mut p = Parser::new(text);
    let w = parse_word_inner(&mut p)?;
    if !p.at_end() {
        return p.err("unexpected character in word");
    }
    Ok(w)
}

impl FromStr for FreeWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_word(s)
    }
}

/// Truncated Magnus expansion: noncommutative power series in `X_1..X_m`
/// with terms of degree at most `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagnusSeries {
    pub degree: usize,
    coeffs: BTreeMap<Vec<u32>, BigInt>,
}

impl MagnusSeries {
    pub fn one(degree: usize) -> Self {
        MagnusSeries { degree, coeffs: BTreeMap::from([(Vec::new(), BigInt::one())]) }
    }

    pub fn coefficient(&self, word: &[u32]) -> BigInt {
        self.coeffs.get(word).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Nonzero terms, keyed by monomials (sequences of 1-based generator indices).
    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.coeffs
    }

    pub fn is_one(&self) -> bool {
        *self == MagnusSeries::one(self.degree)
    }

    /// Smallest positive degree with a nonzero coefficient.
    pub fn first_nonvanishing_degree(&self) -> Option<usize> {
        self.coeffs.keys().map(Vec::len).filter(|&d| d > 0).min()
    }

    /// Homogeneous part of degree `d`.
    pub fn homogeneous(&self, d: usize) -> BTreeMap<Vec<u32>, BigInt> {
        self.coeffs.iter().filter(|(k, _)| k.len() == d).map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    fn add_term(&mut self, k: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(k) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn mul(&self, other: &MagnusSeries) -> MagnusSeries {
        let degree = self.degree.min(other.degree);
        let mut out = MagnusSeries { degree, coeffs: BTreeMap::new() };
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                if a.len() + b.len() <= degree {
                    let mut k = a.clone();
                    k.extend(b);
                    out.add_term(k, ca * cb);
                }
            }
        }
        out
    }

    /// Right multiplication by the expansion of `x_g^e`.
    fn mul_letter(&self, g: u32, e: i8) -> MagnusSeries {
        let mut out = MagnusSeries { degree: self.degree, coeffs: BTreeMap::new() };
        for (a, ca) in &self.coeffs {
            out.add_term(a.clone(), ca.clone());
            let mut k = a.clone();
            let mut c = ca.clone();
            let steps = if e > 0 { 1 } else { self.degree };
            for _ in 0..steps {
                if k.len() >= self.degree {
                    break;
                }
                k.push(g);
                if e < 0 {
                    c = -c;
                }
                out.add_term(k.clone(), c.clone());
            }
        }
        out
    }
}

impl fmt::Display for MagnusSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&Vec<u32>> = self.coeffs.keys().collect();
        keys.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let mut first = true;
        for k in keys {
            let c = &self.coeffs[k];
            let neg = c < &BigInt::zero();
            let a = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono: String = k.iter().map(|g| format!("X{}", g)).collect();
            if mono.is_empty() {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}{}", a, mono)?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Magnus expansion `x_i ↦ 1 + X_i` truncated at `degree`.
pub fn magnus(w: &FreeWord, degree: usize) -> MagnusSeries {
    let mut s = MagnusSeries::one(degree);
    for &(g, e) in w.letters() {
        s = s.mul_letter(g, e);
    }
    s
}

/// Largest `d ≤ bound` with `w ∈ F_d` (lower central series, `F_1 = F`).
pub fn lower_central_depth(w: &FreeWord, bound: usize) -> usize {
    magnus(w, bound).first_nonvanishing_degree().unwrap_or(bound + 1).min(bound)
}

/// `u ≡ v` modulo `F_depth`.
pub fn equal_mod(u: &FreeWord, v: &FreeWord, depth: usize) -> bool {
    depth <= 1 || magnus(&u.inverse().mul(v), depth - 1).is_one()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkSource {
    Braid,
    Explicit,
}

/// Longitudes of an `m`-component string link.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringLinkData {
    pub strands: u32,
    pub longitudes: Vec<FreeWord>,
    pub source: LinkSource,
}

impl StringLinkData {
    pub fn explicit(strands: u32, longitudes: Vec<FreeWord>) -> Result<Self> {
        if longitudes.len() != strands as usize {
            return Err(Error::InvalidLongitudes(format!(
                "{} longitudes for {} strands",
                longitudes.len(),
                strands
            )));
        }
        for l in &longitudes {
            if l.max_generator() > strands {
                return Err(Error::InvalidLongitudes(format!("longitude {} uses a generator beyond x{}", l, strands)));
            }
        }
        Ok(StringLinkData { strands, longitudes, source: LinkSource::Explicit })
    }

    /// Parses `;`-separated longitude words.
    pub fn parse_explicit(strands: u32, text: &str) -> Result<Self> {
        let words = text.split(';').map(parse_word).collect::<Result<Vec<_>>>()?;
        Self::explicit(strands, words)
    }

    pub fn trivial(strands: u32) -> Self {
        StringLinkData {
            strands,
            longitudes: vec![FreeWord::identity(); strands as usize],
            source: LinkSource::Braid,
        }
    }
}

/// `μ(i_1,…,i_k; j)`: the coefficient of `X_{i_1}⋯X_{i_k}` in the expansion
/// of `l_j`, where `index = [i_1,…,i_k, j]`.
pub fn milnor_mu(s: &StringLinkData, index: &[u32]) -> Result<BigInt> {
    if index.len() < 2 {
        return Err(Error::IndexOutOfRange("a Milnor index needs at least two entries".into()));
    }
    for &i in index {
        if i == 0 || i > s.strands {
            return Err(Error::IndexOutOfRange(format!("index {} not in 1..={}", i, s.strands)));
        }
    }
    let (j, word) = index.split_last().expect("nonempty");
    Ok(magnus(&s.longitudes[*j as usize - 1], word.len()).coefficient(word))
}

/// All nonzero `μ(i_1,…,i_k; j)` with `2 ≤ k+1 ≤ max_len`, keyed by `[i_1,…,i_k, j]`.
pub fn milnor_numbers(s: &StringLinkData, max_len: usize) -> BTreeMap<Vec<u32>, BigInt> {
    let mut out = BTreeMap::new();
    if max_len < 2 {
        return out;
    }
    for (j, l) in s.longitudes.iter().enumerate() {
        for (word, c) in magnus(l, max_len - 1).terms() {
            if !word.is_empty() {
                let mut key = word.clone();
                key.push(j as u32 + 1);
                out.insert(key, c.clone());
            }
        }
    }
    out
}

/// Associative expansions of the Hall elements of degree `d` as dense rows
/// over all `m^d` monomials.
fn hall_expansions(m: u32, d: usize) -> Vec<Vec<BigInt>> {
    fn expand(t: &RootedTree) -> BTreeMap<Vec<u32>, i64> {
        match t {
            RootedTree::Leaf(l) => BTreeMap::from([(vec![*l], 1)]),
            RootedTree::Node(a, b) => {
                let (ea, eb) = (expand(a), expand(b));
                let mut out: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
                for (u, cu) in &ea {
                    for (v, cv) in &eb {
                        let mut uv = u.clone();
                        uv.extend(v);
                        *out.entry(uv).or_insert(0) += cu * cv;
                        let mut vu = v.clone();
                        vu.extend(u);
                        *out.entry(vu).or_insert(0) -= cu * cv;
                    }
                }
                out.retain(|_, c| *c != 0);
                out
            }
        }
    }
    hall_basis(m, d, Flavor::Lie)
        .elements
        .iter()
        .map(|h| {
            let mut row = vec![BigInt::zero(); (m as usize).pow(d as u32)];
            for (w, c) in expand(h) {
                row[monomial_index(&w, m)] = BigInt::from(c);
            }
            row
        })
        .collect()
}

fn monomial_index(w: &[u32], m: u32) -> usize {
    w.iter().fold(0usize, |acc, &g| acc * m as usize + (g as usize - 1))
}

/// Hall coordinates of a homogeneous Lie polynomial given by its monomial coefficients.
fn lie_coordinates(m: u32, d: usize, poly: &BTreeMap<Vec<u32>, BigInt>) -> Result<LieElement> {
    let mut rows = hall_expansions(m, d);
    let w = rows.len();
    let mut target = vec![BigInt::zero(); (m as usize).pow(d as u32)];
    for (k, c) in poly {
        target[monomial_index(k, m)] = c.clone();
    }
    rows.push(target);
    let ker = left_kernel((m as usize).pow(d as u32), rows);
    let not_lie = || Error::InvalidLongitudes(format!("degree {} part is not an integral Lie element", d));
    let v = ker.into_iter().find(|v| !v[w].is_zero()).ok_or_else(not_lie)?;
    let last = v[w].clone();
    let one = BigInt::one();
    if last != one && last != -one.clone() {
        return Err(not_lie());
    }
    let mut out = LieElement::zero(m, d, Flavor::Lie);
    for (k, c) in v[..w].iter().enumerate() {
        let x = -(c * &last);
        out.coords[k] = x.to_i64().ok_or_else(|| Error::Internal("Milnor invariant overflow".into()))?;
    }
    Ok(out)
}

/// Total Milnor invariant of order `n` together with the lower-order check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorReport {
    pub order: usize,
    /// `Σ_i X_i ⊗ μ^i_n`
    pub invariant: TensorElement,
    /// The invariant lies in `D_n`.
    pub in_kernel: bool,
}

/// `μ_n(L) = Σ_i X_i ⊗ [l_i] ∈ L_1 ⊗ L_{n+1}`; requires `μ_k = 0` for `k < n`.
pub fn total_milnor(s: &StringLinkData, n: usize) -> Result<MilnorReport> {
    let m = s.strands;
    let mut inv = TensorElement::zero(n, m, Flavor::Lie);
    for (i, l) in s.longitudes.iter().enumerate() {
        let series = magnus(l, n + 1);
        if let Some(d) = series.first_nonvanishing_degree() {
            if d <= n {
                return Err(Error::LowerOrderNonvanishing { order: d - 1 });
            }
        }
        if witt_rank(m, n + 1) > 0 {
            inv.components[i] = lie_coordinates(m, n + 1, &series.homogeneous(n + 1))?;
        }
    }
    let in_kernel = inv.bracket().is_zero();
    if !in_kernel && s.source == LinkSource::Explicit {
        return Err(Error::InvalidLongitudes(format!("total Milnor invariant {} is not in the bracket kernel", inv)));
    }
    if !in_kernel {
        return Err(Error::Internal(format!("braid Milnor invariant {} is not in the bracket kernel", inv)));
    }
    Ok(MilnorReport { order: n, invariant: inv, in_kernel })
}

/// `SL_{2n-1} = sℓ_{2n} ∘ μ_{2n}`, for `order = 2n - 1`.
pub fn sato_levine(s: &StringLinkData, order: usize) -> Result<LieElement> {
    if order % 2 == 0 {
        return Err(Error::OrderMismatch { expected: order + 1, found: order });
    }
    let mu = total_milnor(s, order + 1)?;
    sl_map(&mu.invariant)
}

/// An automorphism of `F/F_{depth}` given by the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtinAutomorphism {
    pub depth: usize,
    pub images: Vec<FreeWord>,
}

impl ArtinAutomorphism {
    pub fn identity(m: u32, depth: usize) -> Self {
        ArtinAutomorphism { depth, images: (1..=m).map(FreeWord::generator).collect() }
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        w.substitute(&self.images)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &ArtinAutomorphism) -> ArtinAutomorphism {
        ArtinAutomorphism {
            depth: self.depth.min(other.depth),
            images: other.images.iter().map(|w| self.apply(w)).collect(),
        }
    }

    /// Equality of the induced automorphisms of `F/F_depth`.
    pub fn equivalent(&self, other: &ArtinAutomorphism) -> bool {
        let depth = self.depth.min(other.depth);
        self.images.len() == other.images.len()
            && self.images.iter().zip(&other.images).all(|(a, b)| equal_mod(a, b, depth))
    }

    pub fn is_identity(&self) -> bool {
        self.equivalent(&ArtinAutomorphism::identity(self.images.len() as u32, self.depth))
    }

    /// The product `x_1⋯x_m` is fixed modulo `F_depth`.
    pub fn fixes_product(&self) -> bool {
        let m = self.images.len() as u32;
        let prod = FreeWord::from_letters((1..=m).map(|i| (i, 1)));
        equal_mod(&self.apply(&prod), &prod, self.depth)
    }
}

/// Artin representation into `Aut_0(F/F_{n+2})`: `x_i ↦ l_i^{-1} x_i l_i`.
pub fn artin_rep(s: &StringLinkData, n: usize) -> Result<ArtinAutomorphism> {
    let images =
        s.longitudes.iter().enumerate().map(|(i, l)| FreeWord::generator(i as u32 + 1).conjugate_by(l)).collect();
    let a = ArtinAutomorphism { depth: n + 2, images };
    if !a.fixes_product() {
        return Err(Error::InvalidLongitudes(format!(
            "x1⋯x{} is not fixed modulo F_{}",
            s.strands,
            n + 2
        )));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        s.parse().unwrap()
    }

    #[test]
    fn word_examples() {
        assert!(w("x1 x1^-1").is_empty());
        assert_eq!(w("x1 x2").inverse(), w("x2^-1 x1^-1"));
        assert_eq!(w("[x1,x2]"), w("x1 x2 x1^-1 x2^-1"));
        assert_eq!(w("x1^3").len(), 3);
        assert_eq!(w("1"), FreeWord::identity());
        assert!(parse_word("x0").is_err());
        assert!(parse_word("x1 y2").is_err());
        assert_eq!(w("x1 x2^-1").to_string(), "x1 x2^-1");
    }

    #[test]
    fn magnus_examples() {
        let s = magnus(&w("x1"), 3);
        assert_eq!(s.to_string(), "1 + X1");
        let s = magnus(&w("x1^-1"), 3);
        assert_eq!(s.to_string(), "1 - X1 + X1X1 - X1X1X1");
        let s = magnus(&w("[x1,x2]"), 2);
        assert_eq!(s.to_string(), "1 + X1X2 - X2X1");
        assert!(magnus(&w("x1 x2 x2^-1 x1^-1"), 4).is_one());
    }

    #[test]
    fn depth_of_commutators() {
        assert_eq!(lower_central_depth(&w("x1"), 6), 1);
        assert_eq!(lower_central_depth(&w("[x1,x2]"), 6), 2);
        assert_eq!(lower_central_depth(&w("[[x1,x2],x1]"), 6), 3);
        assert_eq!(lower_central_depth(&w("[[x1,x2],[x1,x3]]"), 6), 4);
    }

    #[test]
    fn hopf_like_data() {
        let s = StringLinkData::parse_explicit(2, "x2; x2^-1 x1 x2").unwrap();
        assert_eq!(milnor_mu(&s, &[1, 2]).unwrap(), BigInt::from(1));
        assert_eq!(milnor_mu(&s, &[2, 1]).unwrap(), BigInt::from(1));
        let t = total_milnor(&s, 0).unwrap();
        let expected =
            TensorElement::from_terms(0, 2, Flavor::Lie, &[(1, RootedTree::Leaf(2), 1), (2, RootedTree::Leaf(1), 1)])
                .unwrap();
        assert_eq!(t.invariant, expected);
        assert!(matches!(total_milnor(&s, 1), Err(Error::LowerOrderNonvanishing { order: 0 })));
        assert!(milnor_mu(&s, &[3, 1]).is_err());
        let all = milnor_numbers(&s, 3);
        assert_eq!(all.get(&vec![1, 2]), Some(&BigInt::from(1)));
        assert_eq!(all.get(&vec![2, 1]), Some(&BigInt::from(1)));
        let a = artin_rep(&s, 0).unwrap();
        assert!(a.fixes_product());
    }

    #[test]
    fn sato_levine_example() {
        let s = StringLinkData::parse_explicit(2, "[x2,[x1,x2]]; [x1,[x1,x2]]^-1").unwrap();
        assert_eq!(s.longitudes[1], w("[x1,[x1,x2]]").inverse());
        let sl = sato_levine(&s, 1).unwrap();
        assert_eq!(sl.to_string(), "[X1,X2]");
        let doubled = StringLinkData::explicit(2, s.longitudes.iter().map(|l| l.pow(2)).collect()).unwrap();
        assert!(sato_levine(&doubled, 1).unwrap().is_zero());
    }

    #[test]
    fn invalid_longitudes_rejected() {
        let s = StringLinkData::parse_explicit(2, "[x1,x2]; 1").unwrap();
        assert!(matches!(total_milnor(&s, 1), Err(Error::InvalidLongitudes(_))));
    }
}
