//! The maps `η_n: T^∞_n → D_n` and `η'_n: T_n → D'_n`, and the structural
//! comparisons built from them.
//!
//! `η(t) = Σ_v X_{ℓ(v)} ⊗ B_v(t)` where `v` runs over the univalent vertices
//! of `t` and `B_v(t)` is the bracket read off by rooting `t` at `v`
//! (children in the cyclic order of each vertex). On twisted generators
//! `η(J^∞) = ½ η(<J,J>)`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Limits, Result};
use crate::exactalg::{hom_analysis, GroupStructure, HomReport, IntMatrix};
use crate::liealg::{bracket_kernel, hall_basis, square_rank, witt_rank, BracketKernel, Flavor, TensorElement};
use crate::towergroups::{tower_group_with_limits, FormalSum, Generator, TowerFlavor, TreeGroup};
use crate::trees::{RootedTree, UnrootedTree};

/// `η` of a single tree, without the factor ½.
pub fn eta_tree(t: &UnrootedTree, m: u32, flavor: Flavor) -> Result<TensorElement> {
    let n = t.order();
    let terms: Vec<(u32, RootedTree, i64)> = t.leaf_readings().into_iter().map(|(l, b)| (l, b, 1)).collect();
    TensorElement::from_terms(n, m, flavor, &terms)
}

/// `η` of a generator. Twisted generators only exist for the Lie flavor.
pub fn eta_generator(g: &Generator, m: u32, flavor: Flavor) -> Result<TensorElement> {
    match g {
        Generator::Tree(t) => eta_tree(t, m, flavor),
        Generator::Twist(j) => {
            if flavor != Flavor::Lie {
                return Err(Error::InvalidTwist("twisted generators map to the Lie bracket kernel only".into()));
            }
            let full = eta_tree(&UnrootedTree::new(j.clone(), j.clone()), m, flavor)?;
            half(&full).ok_or_else(|| Error::Internal(format!("eta(<{j},{j}>) has an odd coefficient")))
        }
    }
}

fn half(x: &TensorElement) -> Option<TensorElement> {
    let mut out = x.clone();
    for c in out.components.iter_mut() {
        if c.squares.iter().any(|&b| b != 0) {
            return None;
        }
        for a in c.coords.iter_mut() {
            if *a % 2 != 0 {
                return None;
            }
            *a /= 2;
        }
    }
    Some(out)
}

/// `η` of a formal sum of generators of order `n`.
pub fn eta_sum(s: &FormalSum, n: usize, m: u32, flavor: Flavor) -> Result<TensorElement> {
    let mut out = TensorElement::zero(n, m, flavor);
    for (g, &c) in s.terms() {
        let e = eta_generator(g, m, flavor)?;
        if e.n != n {
            return Err(Error::OrderMismatch { expected: n, found: e.n });
        }
        out = out.add(&e.scale(c))?;
    }
    Ok(out)
}

/// Target flavor of `η` for a tree group flavor: plain trees map to the
/// quasi-Lie kernel `D'_n`, reduced and twisted trees to `D_n`.
pub fn eta_target(flavor: TowerFlavor) -> Flavor {
    match flavor {
        TowerFlavor::Plain => Flavor::Quasi,
        TowerFlavor::Reduced | TowerFlavor::Twisted => Flavor::Lie,
    }
}

/// `η` on all generators of a tree group.
#[derive(Clone, Debug)]
pub struct EtaMatrix {
    pub source: TreeGroup,
    pub target: Flavor,
    /// `images[i]` is the image of generator `i`.
    pub images: Vec<TensorElement>,
}

impl EtaMatrix {
    /// Rows are generator images in tensor coordinates.
    pub fn matrix(&self) -> Result<IntMatrix> {
        let n = self.source.order;
        let cols = self.source.labels as usize
            * (witt_rank(self.source.labels, n + 1) + square_rank(self.source.labels, n + 1, self.target));
        IntMatrix::from_rows(cols, self.images.iter().map(TensorElement::to_vector).collect())
    }

    pub fn apply(&self, s: &FormalSum) -> Result<TensorElement> {
        eta_sum(s, self.source.order, self.source.labels, self.target)
    }
}

pub fn eta(n: usize, m: u32, flavor: TowerFlavor) -> Result<EtaMatrix> {
    eta_with_limits(n, m, flavor, &Limits::default())
}

pub fn eta_with_limits(n: usize, m: u32, flavor: TowerFlavor, limits: &Limits) -> Result<EtaMatrix> {
    let source = tower_group_with_limits(n, m, flavor, limits)?;
    let target = eta_target(flavor);
    let images =
        source.generators().iter().map(|g| eta_generator(g, m, target)).collect::<Result<Vec<_>>>()?;
    Ok(EtaMatrix { source, target, images })
}

/// Matrix of `η` in the coordinates of the kernel generators.
fn eta_into_kernel(em: &EtaMatrix, kernel: &BracketKernel) -> Result<IntMatrix> {
    let rows = em
        .images
        .iter()
        .zip(em.source.generators())
        .map(|(img, g)| {
            kernel.coords(img).ok_or_else(|| Error::NotInKernel(format!("eta({}) = {}", g, img)))
        })
        .collect::<Result<Vec<Vec<BigInt>>>>()?;
    IntMatrix::from_rows(kernel.subgroup.group.num_generators(), rows)
}

/// Analysis of `η` from a tree group onto its bracket kernel.
pub fn eta_onto_kernel(n: usize, m: u32, flavor: TowerFlavor, limits: &Limits) -> Result<(HomReport, EtaMatrix, BracketKernel)> {
    let em = eta_with_limits(n, m, flavor, limits)?;
    let kernel = bracket_kernel(n, m, em.target)?;
    let map = eta_into_kernel(&em, &kernel)?;
    let report = hom_analysis(em.source.presentation(), &kernel.subgroup.group, &map)?;
    Ok((report, em, kernel))
}

/// `η'_n: T_n → D'_n`.
pub fn verify_levine(n: usize, m: u32) -> Result<HomReport> {
    verify_levine_with_limits(n, m, &Limits::default())
}

pub fn verify_levine_with_limits(n: usize, m: u32, limits: &Limits) -> Result<HomReport> {
    Ok(eta_onto_kernel(n, m, TowerFlavor::Plain, limits)?.0)
}

/// `Ker(η_{4k-2})` compared with `Z/2 ⊗ L_k`.
#[derive(Clone, Debug, Serialize)]
pub struct TwistedKernelReport {
    pub k: usize,
    pub m: u32,
    pub report: HomReport,
    pub expected: GroupStructure,
    /// The classes `tw((H,H))`, `H` a Hall element of degree `k`, all lie in the kernel.
    pub symmetric_classes_in_kernel: bool,
    /// Structure of the subgroup generated by those classes.
    pub symmetric_span: GroupStructure,
    /// Kernel ≅ expected and it is generated by the symmetric classes.
    pub matches: bool,
}

pub fn kernel_eta_twisted(k: usize, m: u32) -> Result<TwistedKernelReport> {
    kernel_eta_twisted_with_limits(k, m, &Limits::default())
}

pub fn kernel_eta_twisted_with_limits(k: usize, m: u32, limits: &Limits) -> Result<TwistedKernelReport> {
    if k == 0 {
        return Err(Error::OrderMismatch { expected: 1, found: 0 });
    }
    let n = 4 * k - 2;
    let (report, em, _) = eta_onto_kernel(n, m, TowerFlavor::Twisted, limits)?;
    let expected = GroupStructure::elementary(2, witt_rank(m, k));
    let group = &em.source;
    let mut in_kernel = true;
    let mut vectors = Vec::new();
    for h in hall_basis(m, k, Flavor::Lie).elements {
        let s = FormalSum::from_twist(&RootedTree::node(h.clone(), h));
        in_kernel &= em.apply(&s)?.is_zero();
        vectors.push(group.to_vector(&s)?);
    }
    let span = crate::exactalg::subgroup_structure(group.presentation(), &vectors)?;
    let matches = report.kernel.as_ref() == Some(&expected) && span == expected && in_kernel;
    Ok(TwistedKernelReport { k, m, report, expected, symmetric_classes_in_kernel: in_kernel, symmetric_span: span, matches })
}

/// `Cok(T_{2n} → T^∞_{2n})` and `Ker(T̃_{2n-1} → T^∞_{2n-1})` against `Z/2 ⊗ L'_{n+1}`.
#[derive(Clone, Debug, Serialize)]
pub struct FramedVsTwisted {
    pub order: usize,
    pub m: u32,
    pub cok: GroupStructure,
    /// Absent for order 0, where there is no odd order to compare.
    pub ker: Option<GroupStructure>,
    pub expected: GroupStructure,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// `order` is the even order `2n`.
pub fn framed_vs_twisted(order: usize, m: u32) -> Result<FramedVsTwisted> {
    framed_vs_twisted_with_limits(order, m, &Limits::default())
}

fn inclusion(src: &TreeGroup, dst: &TreeGroup) -> Result<IntMatrix> {
    let mut rows = Vec::with_capacity(src.num_generators());
    for g in src.generators() {
        let mut v = vec![BigInt::from(0); dst.num_generators()];
        let j = dst.index_of(g).ok_or_else(|| Error::ForeignGenerator(g.to_string()))?;
        v[j] = BigInt::from(1);
        rows.push(v);
    }
    IntMatrix::from_rows(dst.num_generators(), rows)
}

pub fn framed_vs_twisted_with_limits(order: usize, m: u32, limits: &Limits) -> Result<FramedVsTwisted> {
    if order % 2 != 0 {
        return Err(Error::OrderMismatch { expected: order + 1, found: order });
    }
    let n = order / 2;
    let plain = tower_group_with_limits(order, m, TowerFlavor::Plain, limits)?;
    let twisted = tower_group_with_limits(order, m, TowerFlavor::Twisted, limits)?;
    let r = hom_analysis(plain.presentation(), twisted.presentation(), &inclusion(&plain, &twisted)?)?;
    let cok = r.cokernel.ok_or_else(|| Error::Internal("T_2n → T^∞_2n is not well defined".into()))?;
    let ker = if order == 0 {
        None
    } else {
        let reduced = tower_group_with_limits(order - 1, m, TowerFlavor::Reduced, limits)?;
        let tw_odd = tower_group_with_limits(order - 1, m, TowerFlavor::Twisted, limits)?;
        let r = hom_analysis(reduced.presentation(), tw_odd.presentation(), &inclusion(&reduced, &tw_odd)?)?;
        Some(r.kernel.ok_or_else(|| Error::Internal("T̃ → T^∞ is not well defined".into()))?)
    };
    let expected = GroupStructure::elementary(2, witt_rank(m, n + 1) + square_rank(m, n + 1, Flavor::Quasi));
    let matches = cok == expected && ker.as_ref().map_or(true, |k| *k == expected);
    Ok(FramedVsTwisted { order, m, cok, ker, expected, matches })
}

/// Result of checking that `η` kills every relator and lands in the bracket kernel.
#[derive(Clone, Debug, Default, Serialize)]
pub struct EtaCheck {
    pub relators_checked: usize,
    pub relator_failures: Vec<String>,
    pub generators_checked: usize,
    pub kernel_failures: Vec<String>,
}

impl EtaCheck {
    pub fn passed(&self) -> bool {
        self.relator_failures.is_empty() && self.kernel_failures.is_empty()
    }
}

/// Checks `η` (twisted source) or `η'` (plain source) relator by relator,
/// without computing any Smith form.
pub fn check_eta_relations(n: usize, m: u32, flavor: TowerFlavor) -> Result<EtaCheck> {
    let em = eta(n, m, flavor)?;
    let mut out = EtaCheck::default();
    for (g, img) in em.source.generators().iter().zip(&em.images) {
        out.generators_checked += 1;
        if !img.bracket().is_zero() {
            out.kernel_failures.push(g.to_string());
        }
    }
    for (src, row) in em.source.relators() {
        out.relators_checked += 1;
        let mut acc = TensorElement::zero(n, m, em.target);
        for &(i, c) in row {
            acc = acc.add(&em.images[i].scale(c))?;
        }
        if !acc.is_zero() {
            out.relator_failures.push(format!("{:?}: {}", src, em.source.relator_sum(row)));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Proved,
    Conjectural,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupsRow {
    #[serde(rename = "T")]
    pub t: GroupStructure,
    #[serde(rename = "T_tilde")]
    pub t_tilde: GroupStructure,
    #[serde(rename = "T_inf")]
    pub t_inf: GroupStructure,
    #[serde(rename = "D")]
    pub d: GroupStructure,
    #[serde(rename = "D_prime")]
    pub d_prime: GroupStructure,
}

#[derive(Clone, Debug, Serialize)]
pub struct EtaRow {
    pub kernel: GroupStructure,
    pub cokernel: GroupStructure,
    pub iso: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StatusRow {
    #[serde(rename = "W")]
    pub w: Status,
    #[serde(rename = "W_inf")]
    pub w_inf: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct PredictedRow {
    /// Predicted group of framed order `n` Whitney towers modulo order `n+1`.
    #[serde(rename = "W")]
    pub w: GroupStructure,
    /// Predicted group for twisted towers.
    #[serde(rename = "W_inf")]
    pub w_inf: GroupStructure,
    /// For conjectural twisted rows: the answer if the higher Arf invariant vanishes.
    #[serde(rename = "W_inf_if_arf_trivial", skip_serializing_if = "Option::is_none")]
    pub w_inf_alternative: Option<GroupStructure>,
    pub status: StatusRow,
}

/// One row of the classification table.
#[derive(Clone, Debug, Serialize)]
pub struct ClassificationRow {
    pub order: usize,
    pub labels: u32,
    pub groups: GroupsRow,
    /// `η_n: T^∞_n → D_n`.
    pub eta: EtaRow,
    pub predicted: PredictedRow,
}

pub fn classify(n: usize, m: u32) -> Result<ClassificationRow> {
    classify_with_limits(n, m, &Limits::default())
}

pub fn classify_with_limits(n: usize, m: u32, limits: &Limits) -> Result<ClassificationRow> {
    let t = tower_group_with_limits(n, m, TowerFlavor::Plain, limits)?;
    let t_tilde = tower_group_with_limits(n, m, TowerFlavor::Reduced, limits)?;
    let (report, em, d) = eta_onto_kernel(n, m, TowerFlavor::Twisted, limits)?;
    let d_prime = bracket_kernel(n, m, Flavor::Quasi)?;
    let kernel = report.kernel.clone().ok_or_else(|| Error::Internal("eta is not well defined".into()))?;
    let cokernel = report.cokernel.clone().ok_or_else(|| Error::Internal("eta is not well defined".into()))?;
    let w_status = if n % 4 == 1 && n > 1 { Status::Conjectural } else { Status::Proved };
    let (w_inf, w_inf_status, alternative) = if n % 4 == 2 {
        (d.structure.direct_sum(&kernel), Status::Conjectural, Some(d.structure.clone()))
    } else {
        (d.structure.clone(), Status::Proved, None)
    };
    Ok(ClassificationRow {
        order: n,
        labels: m,
        groups: GroupsRow {
            t: t.structure().clone(),
            t_tilde: t_tilde.structure().clone(),
            t_inf: em.source.structure().clone(),
            d: d.structure.clone(),
            d_prime: d_prime.structure.clone(),
        },
        eta: EtaRow { kernel, cokernel, iso: report.is_isomorphism },
        predicted: PredictedRow {
            w: t_tilde.structure().clone(),
            w_inf,
            w_inf_alternative: alternative,
            status: StatusRow { w: w_status, w_inf: w_inf_status },
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::GroupStructure;

    fn u(s: &str) -> UnrootedTree {
        s.parse().unwrap()
    }

    fn r(s: &str) -> RootedTree {
        s.parse().unwrap()
    }

    #[test]
    fn eta_of_y_tree() {
        let e = eta_tree(&u("<(1,2),3>"), 3, Flavor::Lie).unwrap();
        let expected = TensorElement::from_terms(
            1,
            3,
            Flavor::Lie,
            &[(1, r("(2,3)"), 1), (2, r("(3,1)"), 1), (3, r("(1,2)"), 1)],
        )
        .unwrap();
        assert_eq!(e, expected);
        assert!(e.bracket().is_zero());
    }

    #[test]
    fn eta_prime_of_y111() {
        let e = eta_tree(&u("<1,(1,1)>"), 1, Flavor::Quasi).unwrap();
        let x = TensorElement::from_terms(1, 1, Flavor::Quasi, &[(1, r("(1,1)"), 1)]).unwrap();
        assert_eq!(e, x);
        assert!(!e.is_zero());
    }

    #[test]
    fn eta_of_twisted_h() {
        let e = eta_generator(&Generator::twist(&r("(1,2)")), 2, Flavor::Lie).unwrap();
        let x = TensorElement::from_terms(2, 2, Flavor::Lie, &[(1, r("(2,(1,2))"), 1), (2, r("(1,(1,2))"), -1)])
            .unwrap();
        assert!(e == x || e == x.neg(), "got {}", e);
    }

    #[test]
    fn levine_small() {
        assert!(verify_levine(1, 1).unwrap().is_isomorphism);
        assert!(verify_levine(2, 2).unwrap().is_isomorphism);
    }

    #[test]
    fn twisted_kernel_k1_m1() {
        let r = kernel_eta_twisted(1, 1).unwrap();
        assert_eq!(r.report.kernel, Some(GroupStructure::elementary(2, 1)));
        assert!(r.matches);
    }

    #[test]
    fn framed_vs_twisted_small() {
        let f = framed_vs_twisted(0, 2).unwrap();
        assert_eq!(f.cok, GroupStructure::elementary(2, 2));
        assert!(f.matches);
        let f = framed_vs_twisted(2, 1).unwrap();
        assert_eq!(f.ker, Some(GroupStructure::elementary(2, 1)));
        assert!(f.matches);
    }

    #[test]
    fn classify_rows() {
        let row = classify(1, 1).unwrap();
        assert_eq!(row.predicted.w, GroupStructure::elementary(2, 1));
        let row = classify(2, 1).unwrap();
        assert_eq!(row.predicted.status.w_inf, Status::Conjectural);
        assert_eq!(row.eta.kernel, GroupStructure::elementary(2, 1));
        let row = classify(3, 2).unwrap();
        assert_eq!(row.predicted.status.w_inf, Status::Proved);
        assert!(row.eta.iso);
    }
}
