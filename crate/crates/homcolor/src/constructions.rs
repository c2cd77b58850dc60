//! Presentation-level constructions: commutators, twists, derived algebras,
//! semidirect sums, matched-pair doubles, tensor products and quotients.
//!
//! Each construction verifies the hypotheses it relies on and refuses with
//! [`Error::Precondition`] when they fail, unless `force` is set.

use std::collections::BTreeSet;

use crate::algebra::{is_morphism, AlgebraPresentation, BilinearProduct, EvenLinearMap, GradedSpace};
use crate::error::{Error, Result};
use crate::grading::GroupElement;
use crate::identities::{run_suite, RoleMap, StructureKind};
use crate::linalg::{self, Matrix, Vector};
use crate::report::{CheckReport, Outcome, SuiteReport, Witness};
use crate::representations::{check_bimodule, ActionBundle, ActionRole, BimoduleKind};
use crate::scalar::Scalar;
use crate::scan::CheckOptions;

pub use crate::matched_pair::{
    check_side_condition, matched_pair_conditions, MatchedPairData, SideCondition, SideFamily,
};

fn refuse(reason: impl Into<String>, report: SuiteReport) -> Error {
    Error::Precondition {
        reason: reason.into(),
        report: Box::new(report),
    }
}

fn require(report: SuiteReport, force: bool, reason: &str) -> Result<()> {
    if report.passed() || force {
        Ok(())
    } else {
        let detail = report
            .first_failure()
            .map(|c| format!("{reason}: {} {}", c.label(), c.verdict().as_str()))
            .unwrap_or_else(|| reason.to_string());
        Err(refuse(detail, report))
    }
}

/// The structure suite a double or semidirect sum of `kind` should satisfy.
pub fn structure_for(kind: BimoduleKind) -> StructureKind {
    match kind {
        BimoduleKind::Assoc => StructureKind::EpsCommAssoc,
        BimoduleKind::Novikov => StructureKind::HomNovikov,
        BimoduleKind::LieRep => StructureKind::HomLie,
        BimoduleKind::Hnp => StructureKind::Hnp,
        BimoduleKind::Gd => StructureKind::HomGd,
    }
}

/// Adds `to` with `[x, y] = x∘y - ε(x,y) y∘x` where `∘` is the `from` product.
pub fn commutator_bracket(a: &AlgebraPresentation, from: &str, to: &str) -> Result<AlgebraPresentation> {
    let p = a.product(from)?;
    if a.has_role(to) {
        return Err(Error::Invalid(format!("role `{to}` already exists")));
    }
    let n = a.dim();
    let mut bracket = BilinearProduct::zero(n);
    for i in 0..n {
        for j in 0..n {
            let v = linalg::Combination::new(n)
                .add(&p.get_vector(i, j))
                .plus(-a.sign(i, j), &p.get_vector(j, i))
                .finish();
            bracket.set(i, j, &v);
        }
    }
    a.clone().with_product(to, bracket)
}

/// Composes every product with `m` and replaces the twist by `m∘α`.
pub fn yau_twist(a: &AlgebraPresentation, m: &Matrix, force: bool) -> Result<AlgebraPresentation> {
    let even = a.even_map(m.clone())?;
    let morphism = is_morphism(m, a, a)?;
    require(SuiteReport::single("MORPHISM", morphism), force, "twisting map is not an endomorphism")?;
    Ok(twisted(a, &even, &even.compose(a.alpha())))
}

fn twisted(a: &AlgebraPresentation, post: &EvenLinearMap, alpha: &EvenLinearMap) -> AlgebraPresentation {
    let mut out = a.clone();
    let roles: Vec<String> = a.roles().map(str::to_string).collect();
    for role in roles {
        let p = a.product(&role).expect("listed role").post_compose(post.matrix());
        out.remove_product(&role);
        out.insert_product(&role, p).expect("twisted product stays graded");
    }
    out.set_alpha_unchecked(alpha.clone());
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DerivedType {
    /// Products `αⁿ∘∘`, twist `αⁿ⁺¹`.
    One,
    /// Products `α^(2ⁿ-1)∘∘`, twist `α^(2ⁿ)`.
    Two,
}

impl std::str::FromStr for DerivedType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(DerivedType::One),
            "2" => Ok(DerivedType::Two),
            _ => Err(Error::Invalid(format!("derived type must be 1 or 2, got `{s}`"))),
        }
    }
}

/// Checks that `α` is multiplicative for every product.
pub fn multiplicativity_report(a: &AlgebraPresentation) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("MULTIPLICATIVE");
    let rank = |r: &str| ["dot", "diamond", "bracket"].iter().position(|c| *c == r).unwrap_or(3);
    let mut roles: Vec<&str> = a.roles().collect();
    roles.sort_by_key(|r| (rank(r), *r));
    for role in roles {
        report.checks.push(a.is_multiplicative(role, a.alpha())?);
    }
    Ok(report)
}

pub fn derived_algebra(a: &AlgebraPresentation, ty: DerivedType, n: u32, force: bool) -> Result<AlgebraPresentation> {
    if n == 0 {
        return Err(Error::Invalid("derived algebra index must be positive".into()));
    }
    require(multiplicativity_report(a)?, force, "twisting map is not multiplicative")?;
    let k: u64 = match ty {
        DerivedType::One => n as u64,
        DerivedType::Two => {
            if n >= 63 {
                return Err(Error::Invalid("derived algebra index too large".into()));
            }
            (1u64 << n) - 1
        }
    };
    let post = a.alpha().pow(k);
    let alpha = a.alpha().pow(k + 1);
    Ok(twisted(a, &post, &alpha))
}

/// Basis names of `second` renamed with trailing primes where they clash
/// with `first`.
fn disjoint_names(first: &GradedSpace, second: &GradedSpace) -> Vec<String> {
    let mut taken: BTreeSet<String> = first.names().iter().cloned().collect();
    taken.extend(second.names().iter().cloned());
    second
        .names()
        .iter()
        .map(|n| {
            if first.index_of(n).is_none() {
                return n.clone();
            }
            let mut m = format!("{n}'");
            while taken.contains(&m) {
                m.push('\'');
            }
            taken.insert(m.clone());
            m
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rule {
    Assoc,
    Novikov,
    Lie,
}

fn rules(kind: BimoduleKind) -> &'static [(&'static str, Rule)] {
    match kind {
        BimoduleKind::Assoc => &[("dot", Rule::Assoc)],
        BimoduleKind::Novikov => &[("dot", Rule::Novikov)],
        BimoduleKind::LieRep => &[("bracket", Rule::Lie)],
        BimoduleKind::Hnp => &[("dot", Rule::Assoc), ("diamond", Rule::Novikov)],
        BimoduleKind::Gd => &[("dot", Rule::Novikov), ("bracket", Rule::Lie)],
    }
}

/// `A ⊕ B` with products assembled from both blocks and the cross actions.
/// A missing `b` block means `B` carries zero products; a missing `b_on_a`
/// means `B` acts by zero.
fn direct_sum(
    a: &AlgebraPresentation,
    b_space: &GradedSpace,
    b_alpha: &Matrix,
    b: Option<&AlgebraPresentation>,
    a_on_b: &ActionBundle,
    b_on_a: Option<&ActionBundle>,
    kind: BimoduleKind,
    roles: &RoleMap,
) -> Result<AlgebraPresentation> {
    let na = a.dim();
    let nb = b_space.dim();
    let n = na + nb;
    let g = a.grading();
    let mut names = a.space().names().to_vec();
    names.extend(disjoint_names(a.space(), b_space));
    let mut degrees: Vec<GroupElement> = a.space().degrees().to_vec();
    degrees.extend(b_space.degrees().iter().cloned());
    let space = GradedSpace::new(g, names, degrees)?;
    let scalars = match b {
        Some(b) => a.scalars().merge(b.scalars())?,
        None => a.scalars().clone(),
    };
    let mut out = AlgebraPresentation::new(g.clone(), space, scalars)
        .with_alpha(a.alpha().matrix().direct_sum(b_alpha))?;
    let col = |bundle: &ActionBundle, role: ActionRole, i: usize, j: usize| -> Result<Vector> {
        Ok(bundle.action(role)?[i].column(j))
    };
    let eps = |u: &GroupElement, v: &GroupElement| g.sign(u, v);
    for (canon, rule) in rules(kind) {
        let role = roles.resolve(canon);
        let pa = a.product(role)?;
        let pb = match b {
            Some(b) => Some(b.product(role)?),
            None => None,
        };
        let mut p = BilinearProduct::zero(n);
        for i in 0..na {
            for j in 0..na {
                let mut v = pa.get_vector(i, j);
                v.extend(linalg::zero_vector(nb));
                p.set(i, j, &v);
            }
        }
        if let Some(pb) = pb {
            for i in 0..nb {
                for j in 0..nb {
                    let mut v = linalg::zero_vector(na);
                    v.extend(pb.get_vector(i, j));
                    p.set(na + i, na + j, &v);
                }
            }
        }
        let (left, right, sign_cross) = match rule {
            Rule::Assoc => (ActionRole::S, ActionRole::S, 1i8),
            Rule::Novikov => (ActionRole::L, ActionRole::R, 0),
            Rule::Lie => (ActionRole::Rho, ActionRole::Rho, -1),
        };
        // x ∈ A, b ∈ B
        for x in 0..na {
            for bj in 0..nb {
                let (dx, db) = (a.space().degree(x), b_space.degree(bj));
                let on_b = col(a_on_b, left, x, bj)?;
                let on_a = match b_on_a {
                    Some(m) => {
                        let v = col(m, right, bj, x)?;
                        if sign_cross == 0 {
                            v
                        } else {
                            linalg::signed(sign_cross * eps(dx, db), v)
                        }
                    }
                    None => linalg::zero_vector(na),
                };
                let mut v = on_a;
                v.extend(on_b);
                p.set(x, na + bj, &v);
            }
        }
        // a ∈ B, y ∈ A
        for ai in 0..nb {
            for y in 0..na {
                let (da, dy) = (b_space.degree(ai), a.space().degree(y));
                let on_b = {
                    let v = col(a_on_b, right, y, ai)?;
                    if sign_cross == 0 {
                        v
                    } else {
                        linalg::signed(sign_cross * eps(da, dy), v)
                    }
                };
                let on_a = match b_on_a {
                    Some(m) => col(m, left, ai, y)?,
                    None => linalg::zero_vector(na),
                };
                let mut v = on_a;
                v.extend(on_b);
                p.set(na + ai, y, &v);
            }
        }
        out.insert_product(role, p)?;
    }
    Ok(out)
}

/// `A ⋉ V`: `V·V = 0`, twist `α ⊕ β`, cross products from the actions.
pub fn semidirect_sum(
    a: &AlgebraPresentation,
    m: &ActionBundle,
    kind: BimoduleKind,
    roles: &RoleMap,
    opts: &CheckOptions,
    force: bool,
) -> Result<AlgebraPresentation> {
    let report = check_bimodule(a, m, kind, roles, opts)?;
    require(report, force, "module conditions fail")?;
    direct_sum(a, m.module(), m.beta().matrix(), None, m, None, kind, roles)
}

/// The double `A ⋈ B` of a matched pair.
pub fn matched_pair_double(
    p: &MatchedPairData,
    kind: BimoduleKind,
    roles: &RoleMap,
    opts: &CheckOptions,
    force: bool,
) -> Result<AlgebraPresentation> {
    let report = matched_pair_conditions(p, kind, roles, opts)?;
    require(report, force, "matched pair conditions fail")?;
    direct_sum(
        p.a(),
        p.b().space(),
        p.b().alpha().matrix(),
        Some(p.b()),
        p.a_on_b(),
        Some(p.b_on_a()),
        kind,
        roles,
    )
}

/// `A1 ⊗ A2` with basis `e_i ⊗ f_j` in row-major order.
pub fn tensor_product(
    a1: &AlgebraPresentation,
    a2: &AlgebraPresentation,
    roles: &RoleMap,
    opts: &CheckOptions,
    force: bool,
) -> Result<AlgebraPresentation> {
    if a1.grading() != a2.grading() {
        return Err(Error::Grading("tensor factors use different grading contexts".into()));
    }
    let mut pre = run_suite(a1, StructureKind::AdmissibleHnp, roles, opts)?;
    for c in &mut pre.checks {
        c.check = format!("LEFT.{}", c.check);
    }
    let mut right = run_suite(a2, StructureKind::AdmissibleHnp, roles, opts)?;
    for c in &mut right.checks {
        c.check = format!("RIGHT.{}", c.check);
    }
    pre.extend(right);
    require(pre, force, "tensor factors must be admissible")?;
    let g = a1.grading();
    let group = g.group();
    let (n1, n2) = (a1.dim(), a2.dim());
    let mut names = Vec::with_capacity(n1 * n2);
    let mut degrees = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        for j in 0..n2 {
            names.push(format!("{}⊗{}", a1.space().name(i), a2.space().name(j)));
            degrees.push(group.add(a1.space().degree(i), a2.space().degree(j)));
        }
    }
    let space = GradedSpace::new(g, names, degrees)?;
    let scalars = a1.scalars().merge(a2.scalars())?;
    let dot = roles.resolve("dot");
    let diamond = roles.resolve("diamond");
    let (d1, d2) = (a1.product(dot)?, a2.product(dot)?);
    let (m1, m2) = (a1.product(diamond)?, a2.product(diamond)?);
    let n = n1 * n2;
    let kron = |u: &[Scalar], v: &[Scalar]| -> Vector {
        let mut out = linalg::zero_vector(n);
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if !vj.is_zero() {
                    out[i * n2 + j] = ui * vj;
                }
            }
        }
        out
    };
    let mut pdot = BilinearProduct::zero(n);
    let mut pdia = BilinearProduct::zero(n);
    for x1 in 0..n1 {
        for x2 in 0..n2 {
            for y1 in 0..n1 {
                for y2 in 0..n2 {
                    let s = g.sign(a2.space().degree(x2), a1.space().degree(y1));
                    let dd = kron(&d1.get_vector(x1, y1), &d2.get_vector(x2, y2));
                    let dm = linalg::add(
                        &kron(&m1.get_vector(x1, y1), &d2.get_vector(x2, y2)),
                        &kron(&d1.get_vector(x1, y1), &m2.get_vector(x2, y2)),
                    );
                    let (i, j) = (x1 * n2 + x2, y1 * n2 + y2);
                    pdot.set(i, j, &linalg::signed(s, dd));
                    pdia.set(i, j, &linalg::signed(s, dm));
                }
            }
        }
    }
    AlgebraPresentation::new(g.clone(), space, scalars)
        .with_alpha(a1.alpha().matrix().kronecker(a2.alpha().matrix()))?
        .with_product(dot, pdot)?
        .with_product(diamond, pdia)
}

fn subset(a: &AlgebraPresentation, indices: &[usize]) -> Result<Vec<bool>> {
    let mut inside = vec![false; a.dim()];
    for &i in indices {
        if i >= a.dim() {
            return Err(Error::Dimension(format!("basis index {i} out of range")));
        }
        inside[i] = true;
    }
    Ok(inside)
}

/// Components of `v` outside the subset, or `None` when `v` lies inside.
fn escape(inside: &[bool], v: &[Scalar]) -> Option<Vector> {
    let out: Vector = v
        .iter()
        .zip(inside)
        .map(|(s, ins)| if *ins { Scalar::zero() } else { s.clone() })
        .collect();
    (!linalg::is_zero(&out)).then_some(out)
}

fn closure_report(
    a: &AlgebraPresentation,
    check: &str,
    indices: &[usize],
    two_sided: bool,
) -> Result<CheckReport> {
    let start = std::time::Instant::now();
    let inside = subset(a, indices)?;
    let n = a.dim();
    let fail = |closure: String, tuple: Vec<usize>, d: Vector| {
        CheckReport::new(
            check,
            vec![closure],
            Outcome::Fail(Witness {
                names: tuple.iter().map(|i| a.space().name(*i).to_string()).collect(),
                tuple,
                defect: a.space().label(&d),
            }),
            start.elapsed(),
        )
    };
    for h in (0..n).filter(|h| inside[*h]) {
        if let Some(d) = escape(&inside, &a.alpha().apply(&a.basis(h))) {
            return Ok(fail("alpha".into(), vec![h], d));
        }
    }
    for (role, p) in a.products() {
        for i in 0..n {
            for j in 0..n {
                let hit = if two_sided {
                    (inside[j], inside[i])
                } else {
                    (inside[i] && inside[j], false)
                };
                if hit.0 {
                    if let Some(d) = escape(&inside, &p.get_vector(i, j)) {
                        let side = if two_sided { format!("{role}:left") } else { role.clone() };
                        return Ok(fail(side, vec![i, j], d));
                    }
                }
                if hit.1 {
                    if let Some(d) = escape(&inside, &p.get_vector(i, j)) {
                        return Ok(fail(format!("{role}:right"), vec![i, j], d));
                    }
                }
            }
        }
    }
    Ok(CheckReport::new(check, Vec::new(), Outcome::Pass, start.elapsed()))
}

/// Is the span of the listed basis elements closed under `α` and every product?
pub fn is_subalgebra(a: &AlgebraPresentation, indices: &[usize]) -> Result<CheckReport> {
    closure_report(a, "SUBALGEBRA", indices, false)
}

/// Is the span closed under `α` and under multiplication by `A` on both sides?
pub fn is_ideal(a: &AlgebraPresentation, indices: &[usize]) -> Result<CheckReport> {
    closure_report(a, "IDEAL", indices, true)
}

/// The span of `keep` with every product and the twist projected onto it.
fn restrict(a: &AlgebraPresentation, keep: &[usize]) -> Result<AlgebraPresentation> {
    let names = keep.iter().map(|i| a.space().name(*i).to_string()).collect();
    let degrees = keep.iter().map(|i| a.space().degree(*i).clone()).collect();
    let space = GradedSpace::new(a.grading(), names, degrees)?;
    let mut out = AlgebraPresentation::new(a.grading().clone(), space, a.scalars().clone())
        .with_alpha(a.alpha().matrix().restrict(keep, keep))?;
    for (role, p) in a.products() {
        let mut q = BilinearProduct::zero(keep.len());
        for (ni, &i) in keep.iter().enumerate() {
            for (nj, &j) in keep.iter().enumerate() {
                let v = p.get_vector(i, j);
                let reduced: Vector = keep.iter().map(|k| v[*k].clone()).collect();
                q.set(ni, nj, &reduced);
            }
        }
        out.insert_product(role, q)?;
    }
    Ok(out)
}

/// `A / H` on the complementary basis, in the original order.
pub fn quotient(a: &AlgebraPresentation, ideal: &[usize], force: bool) -> Result<AlgebraPresentation> {
    let report = is_ideal(a, ideal)?;
    require(SuiteReport::single("IDEAL", report), force, "subset is not an ideal")?;
    let inside = subset(a, ideal)?;
    let keep: Vec<usize> = (0..a.dim()).filter(|i| !inside[*i]).collect();
    restrict(a, &keep)
}

/// Reads a matched pair off a decomposition `D = A ⊕ B` into two
/// subalgebras spanned by basis elements; `A` is spanned by `a_indices`.
/// The double of the result reproduces the cross products of `D`.
pub fn split_matched_pair(
    d: &AlgebraPresentation,
    a_indices: &[usize],
    kind: BimoduleKind,
    roles: &RoleMap,
) -> Result<MatchedPairData> {
    let inside = subset(d, a_indices)?;
    let ia: Vec<usize> = (0..d.dim()).filter(|i| inside[*i]).collect();
    let ib: Vec<usize> = (0..d.dim()).filter(|i| !inside[*i]).collect();
    let mut report = SuiteReport::single("SPLIT", is_subalgebra(d, &ia)?);
    report.checks.push(is_subalgebra(d, &ib)?);
    require(report, false, "summands must be subalgebras")?;
    let a = restrict(d, &ia)?;
    let b = restrict(d, &ib)?;
    let mut a_on_b = ActionBundle::zero(&a, b.space().clone(), b.alpha().matrix().clone())?;
    let mut b_on_a = ActionBundle::zero(&b, a.space().clone(), a.alpha().matrix().clone())?;
    let part = |v: &Vector, idx: &[usize]| -> Vector { idx.iter().map(|k| v[*k].clone()).collect() };
    for (canon, rule) in rules(kind) {
        let p = d.product(roles.resolve(canon))?;
        let (left, right) = match rule {
            Rule::Assoc => (ActionRole::S, ActionRole::S),
            Rule::Novikov => (ActionRole::L, ActionRole::R),
            Rule::Lie => (ActionRole::Rho, ActionRole::Rho),
        };
        let mut on_b_left = vec![Vec::new(); ia.len()];
        let mut on_a_right = vec![Vec::new(); ib.len()];
        for (x, &gx) in ia.iter().enumerate() {
            for (bj, &gb) in ib.iter().enumerate() {
                let v = p.get_vector(gx, gb);
                on_b_left[x].push(part(&v, &ib));
                let s = d.sign(gx, gb);
                let w = part(&v, &ia);
                on_a_right[bj].push(match rule {
                    Rule::Assoc => linalg::signed(s, w),
                    Rule::Novikov => w,
                    Rule::Lie => linalg::signed(-s, w),
                });
            }
        }
        let mut on_b_right = vec![Vec::new(); ia.len()];
        let mut on_a_left = vec![Vec::new(); ib.len()];
        for (ai, &ga) in ib.iter().enumerate() {
            for (y, &gy) in ia.iter().enumerate() {
                let v = p.get_vector(ga, gy);
                on_a_left[ai].push(part(&v, &ia));
                if *rule == Rule::Novikov {
                    on_b_right[y].push(part(&v, &ib));
                }
            }
        }
        let mats = |cols: Vec<Vec<Vector>>, rows: usize| -> Vec<Matrix> {
            cols.iter().map(|c| Matrix::from_columns(rows, c)).collect()
        };
        a_on_b.set_action(left, mats(on_b_left, ib.len()))?;
        if *rule == Rule::Novikov {
            a_on_b.set_action(right, mats(on_b_right, ib.len()))?;
            b_on_a.set_action(left, mats(on_a_left, ia.len()))?;
            b_on_a.set_action(right, mats(on_a_right, ia.len()))?;
        } else {
            b_on_a.set_action(right, mats(on_a_right, ia.len()))?;
        }
    }
    MatchedPairData::new(a, b, a_on_b, b_on_a)
}

/// Adds `x ⋄ y = x·D(y)` for an even derivation `D` of `·` commuting with `α`.
pub fn novikov_from_derivation(
    a: &AlgebraPresentation,
    d: &Matrix,
    to: &str,
    roles: &RoleMap,
    opts: &CheckOptions,
    force: bool,
) -> Result<AlgebraPresentation> {
    let dot = roles.resolve("dot");
    let dmap = a.even_map(d.clone())?;
    if a.has_role(to) {
        return Err(Error::Invalid(format!("role `{to}` already exists")));
    }
    let mut report = run_suite(a, StructureKind::EpsCommAssoc, roles, opts)?;
    report.suite = "DERIVATION_PRECONDITIONS".into();
    report
        .checks
        .push(a.is_derivation(dot, d, &a.grading().group().zero())?);
    report.checks.push(commutes_with_twist(a, &dmap));
    require(report, force, "derivation preconditions fail")?;
    let p = a.product(dot)?;
    let n = a.dim();
    let mut diamond = BilinearProduct::zero(n);
    for i in 0..n {
        for j in 0..n {
            diamond.set(i, j, &p.mul(&a.basis(i), &dmap.apply(&a.basis(j))));
        }
    }
    a.clone().with_product(to, diamond)
}

fn commutes_with_twist(a: &AlgebraPresentation, d: &EvenLinearMap) -> CheckReport {
    let start = std::time::Instant::now();
    let ad = a.alpha().compose(d);
    let da = d.compose(a.alpha());
    let mut outcome = Outcome::Pass;
    for i in 0..a.dim() {
        let diff = linalg::sub(&ad.matrix().column(i), &da.matrix().column(i));
        if !linalg::is_zero(&diff) {
            outcome = Outcome::Fail(a.witness(&[i], &diff));
            break;
        }
    }
    CheckReport::new("COMMUTES_WITH_TWIST", Vec::new(), outcome, start.elapsed())
}
