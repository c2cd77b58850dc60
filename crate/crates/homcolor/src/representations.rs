//! Modules over presentations: action bundles and their axiom systems.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::algebra::{respects_degrees, AlgebraPresentation, BilinearProduct, EvenLinearMap, GradedSpace};
use crate::error::{Error, Result};
use crate::grading::Bicharacter;
use crate::identities::RoleMap;
use crate::linalg::{self, Combination, Matrix, Vector};
use crate::report::{CheckReport, Outcome, SuiteReport, Witness};
use crate::scalar::{Scalar, Symbol};
use crate::scan::{self, CheckOptions};

/// Which action a matrix family represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionRole {
    S,
    L,
    R,
    Rho,
}

impl ActionRole {
    pub const ALL: [ActionRole; 4] = [ActionRole::S, ActionRole::L, ActionRole::R, ActionRole::Rho];

    pub fn name(self) -> &'static str {
        match self {
            ActionRole::S => "s",
            ActionRole::L => "l",
            ActionRole::R => "r",
            ActionRole::Rho => "rho",
        }
    }
}

impl FromStr for ActionRole {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s" => Ok(ActionRole::S),
            "l" => Ok(ActionRole::L),
            "r" => Ok(ActionRole::R),
            "rho" | "ρ" => Ok(ActionRole::Rho),
            _ => Err(Error::Invalid(format!("unknown action role `{s}`"))),
        }
    }
}

impl fmt::Display for ActionRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A graded module `(V, β)` with actions of an algebra basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionBundle {
    grading: Bicharacter,
    algebra: GradedSpace,
    module: GradedSpace,
    beta: EvenLinearMap,
    actions: BTreeMap<ActionRole, Vec<Matrix>>,
}

impl ActionBundle {
    /// Validates shapes, evenness of `β` and the degree shift of every
    /// action matrix.
    pub fn new(
        a: &AlgebraPresentation,
        module: GradedSpace,
        beta: Matrix,
        actions: BTreeMap<ActionRole, Vec<Matrix>>,
    ) -> Result<Self> {
        let grading = a.grading().clone();
        let beta = EvenLinearMap::new(&grading, &module, beta)?;
        let mut bundle = ActionBundle {
            grading,
            algebra: a.space().clone(),
            module,
            beta,
            actions: BTreeMap::new(),
        };
        for (role, mats) in actions {
            bundle.set_action(role, mats)?;
        }
        Ok(bundle)
    }

    /// All four roles present with zero matrices.
    pub fn zero(a: &AlgebraPresentation, module: GradedSpace, beta: Matrix) -> Result<Self> {
        let m = module.dim();
        let n = a.dim();
        let actions = ActionRole::ALL
            .iter()
            .map(|r| (*r, vec![Matrix::zero(m, m); n]))
            .collect();
        ActionBundle::new(a, module, beta, actions)
    }

    pub fn set_action(&mut self, role: ActionRole, mats: Vec<Matrix>) -> Result<()> {
        if mats.len() != self.algebra.dim() {
            return Err(Error::Dimension(format!(
                "action `{role}` has {} matrices for an algebra of dimension {}",
                mats.len(),
                self.algebra.dim()
            )));
        }
        for (i, m) in mats.iter().enumerate() {
            match respects_degrees(&self.grading, m, &self.module, &self.module, Some(self.algebra.degree(i))) {
                None => {}
                Some((usize::MAX, _)) => {
                    return Err(Error::Dimension(format!(
                        "action `{role}` of {} is {}x{}, module has dimension {}",
                        self.algebra.name(i),
                        m.rows(),
                        m.cols(),
                        self.module.dim()
                    )))
                }
                Some((r, c)) => {
                    return Err(Error::Invalid(format!(
                        "action `{role}` of {} is not even: entry ({}, {}) breaks the degree shift",
                        self.algebra.name(i),
                        self.module.name(r),
                        self.module.name(c)
                    )))
                }
            }
        }
        self.actions.insert(role, mats);
        Ok(())
    }

    pub fn with_action(mut self, role: ActionRole, mats: Vec<Matrix>) -> Result<Self> {
        self.set_action(role, mats)?;
        Ok(self)
    }

    pub fn module(&self) -> &GradedSpace {
        &self.module
    }

    pub fn algebra_space(&self) -> &GradedSpace {
        &self.algebra
    }

    pub fn grading(&self) -> &Bicharacter {
        &self.grading
    }

    pub fn beta(&self) -> &EvenLinearMap {
        &self.beta
    }

    pub fn roles(&self) -> impl Iterator<Item = ActionRole> + '_ {
        self.actions.keys().copied()
    }

    pub fn action(&self, role: ActionRole) -> Result<&[Matrix]> {
        self.actions
            .get(&role)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::MissingRole(format!("action {role}")))
    }

    /// `role(x) v` for arbitrary algebra and module vectors.
    pub fn act(&self, role: ActionRole, x: &[Scalar], v: &[Scalar]) -> Result<Vector> {
        let mats = self.action(role)?;
        Ok(act_with(mats, x, v, self.module.dim()))
    }

    /// Replace parameters by scalars in the actions and the module twist.
    pub fn substitute(&self, values: &BTreeMap<String, Scalar>) -> ActionBundle {
        let f = |s: &Scalar| {
            s.substitute(&|sym: &Symbol| match sym {
                Symbol::Param(n) => values.get(&**n).cloned(),
                Symbol::Root { .. } => None,
            })
        };
        let f = &f;
        let mut out = self.clone();
        out.beta = EvenLinearMap::from_matrix_unchecked(self.beta.matrix().map(f));
        for mats in out.actions.values_mut() {
            for m in mats.iter_mut() {
                *m = m.map(f);
            }
        }
        out
    }

    pub(crate) fn compatible_with(&self, a: &AlgebraPresentation) -> Result<()> {
        if &self.grading != a.grading() || &self.algebra != a.space() {
            return Err(Error::Invalid(
                "action bundle was built for a different algebra".into(),
            ));
        }
        Ok(())
    }
}

pub(crate) fn act_with(mats: &[Matrix], x: &[Scalar], v: &[Scalar], dim: usize) -> Vector {
    let mut out = linalg::zero_vector(dim);
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        let w = mats[i].apply(v);
        if xi.is_one() {
            linalg::add_assign(&mut out, &w);
        } else {
            linalg::add_assign(&mut out, &linalg::scale(xi, &w));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BimoduleKind {
    Assoc,
    Novikov,
    LieRep,
    Hnp,
    Gd,
}

impl BimoduleKind {
    pub const ALL: [BimoduleKind; 5] = [
        BimoduleKind::Assoc,
        BimoduleKind::Novikov,
        BimoduleKind::LieRep,
        BimoduleKind::Hnp,
        BimoduleKind::Gd,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            BimoduleKind::Assoc => "ASSOC_BIMODULE",
            BimoduleKind::Novikov => "NOVIKOV_BIMODULE",
            BimoduleKind::LieRep => "LIE_REP",
            BimoduleKind::Hnp => "HNP_BIMODULE",
            BimoduleKind::Gd => "GD_REP",
        }
    }

    /// Conditions with the canonical algebra roles they read.
    pub fn members(self) -> Vec<(BimoduleCondition, &'static [&'static str])> {
        use BimoduleCondition::*;
        let novikov = |role: &'static [&'static str]| {
            [Cond1, Cond2, Cond3, Cond4, Cond5, Cond6].map(|c| (c, role))
        };
        match self {
            BimoduleKind::Assoc => vec![(Assoc, &["dot"][..])],
            BimoduleKind::Novikov => novikov(&["dot"]).to_vec(),
            BimoduleKind::LieRep => vec![(LieRep, &["bracket"][..])],
            BimoduleKind::Hnp => {
                let mut v = vec![(Assoc, &["dot"][..])];
                v.extend(novikov(&["diamond"]));
                for c in [Condit1, Condit2, Condit3, Condit4, Condit5] {
                    v.push((c, &["dot", "diamond"][..]));
                }
                v
            }
            BimoduleKind::Gd => {
                let mut v = novikov(&["dot"]).to_vec();
                v.push((LieRep, &["bracket"][..]));
                v.push((GdCond1, &["dot", "bracket"][..]));
                v.push((GdCond2, &["dot", "bracket"][..]));
                v
            }
        }
    }

    /// Action roles the kind reads.
    pub fn action_roles(self) -> &'static [ActionRole] {
        use ActionRole::*;
        match self {
            BimoduleKind::Assoc => &[S],
            BimoduleKind::Novikov => &[L, R],
            BimoduleKind::LieRep => &[Rho],
            BimoduleKind::Hnp => &[S, L, R],
            BimoduleKind::Gd => &[L, R, Rho],
        }
    }
}

impl fmt::Display for BimoduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for BimoduleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let up = s.to_ascii_uppercase().replace('-', "_");
        let alias = match up.as_str() {
            "ASSOC" => "ASSOC_BIMODULE",
            "NOVIKOV" => "NOVIKOV_BIMODULE",
            "HNP" => "HNP_BIMODULE",
            "LIE" => "LIE_REP",
            "GD" => "GD_REP",
            other => other,
        };
        BimoduleKind::ALL
            .into_iter()
            .find(|k| k.tag() == alias)
            .ok_or_else(|| Error::Invalid(format!("unknown bimodule kind `{s}`")))
    }
}

/// One printed action axiom, quantified over `(x, y, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BimoduleCondition {
    /// `s(x·y)β(v) = s(α(x))s(y)v`
    Assoc,
    Cond1,
    Cond2,
    Cond3,
    Cond4,
    Cond5,
    Cond6,
    /// `ρ([x,y])β(v) = ρ(α(x))ρ(y)v - ε(x,y)ρ(α(y))ρ(x)v`
    LieRep,
    Condit1,
    Condit2,
    Condit3,
    Condit4,
    Condit5,
    GdCond1,
    GdCond2,
}

impl BimoduleCondition {
    pub fn tag(self) -> &'static str {
        use BimoduleCondition::*;
        match self {
            Assoc => "ASSOC",
            Cond1 => "COND1",
            Cond2 => "COND2",
            Cond3 => "COND3",
            Cond4 => "COND4",
            Cond5 => "COND5",
            Cond6 => "COND6",
            LieRep => "LIE_REP",
            Condit1 => "CONDIT1",
            Condit2 => "CONDIT2",
            Condit3 => "CONDIT3",
            Condit4 => "CONDIT4",
            Condit5 => "CONDIT5",
            GdCond1 => "GD_COND1",
            GdCond2 => "GD_COND2",
        }
    }
}

struct ModEval<'a> {
    a: &'a AlgebraPresentation,
    m: &'a ActionBundle,
    p: Vec<&'a BilinearProduct>,
    al: Vec<Vector>,
    av: Vec<i8>,
    va: Vec<i8>,
    dv: usize,
}

impl<'a> ModEval<'a> {
    fn new(a: &'a AlgebraPresentation, m: &'a ActionBundle, roles: &[&str]) -> Result<Self> {
        let p = roles
            .iter()
            .map(|r| a.product(r))
            .collect::<Result<Vec<_>>>()?;
        let n = a.dim();
        let dv = m.module.dim();
        let g = a.grading();
        let mut av = Vec::with_capacity(n * dv);
        let mut va = Vec::with_capacity(n * dv);
        for x in 0..n {
            for v in 0..dv {
                av.push(g.sign(a.space().degree(x), m.module.degree(v)));
                va.push(g.sign(m.module.degree(v), a.space().degree(x)));
            }
        }
        Ok(ModEval {
            a,
            m,
            p,
            al: (0..n).map(|i| a.alpha().apply(&a.basis(i))).collect(),
            av,
            va,
            dv,
        })
    }

    fn sxy(&self, x: usize, y: usize) -> i8 {
        self.a.sign(x, y)
    }

    fn sxv(&self, x: usize, v: usize) -> i8 {
        self.av[x * self.dv + v]
    }

    fn svx(&self, v: usize, x: usize) -> i8 {
        self.va[x * self.dv + v]
    }

    /// `role(u) w` with `u` an algebra vector and `w` a module vector.
    fn act(&self, role: ActionRole, u: &[Scalar], w: &[Scalar]) -> Vector {
        act_with(&self.m.actions[&role], u, w, self.dv)
    }

    /// `role(e_x) w`.
    fn actb(&self, role: ActionRole, x: usize, w: &[Scalar]) -> Vector {
        self.m.actions[&role][x].apply(w)
    }

    fn ev(&self, v: usize) -> Vector {
        linalg::unit(self.dv, v)
    }

    fn beta(&self, v: usize) -> Vector {
        self.m.beta.apply(&self.ev(v))
    }

    fn prod(&self, k: usize, x: usize, y: usize) -> Vector {
        self.p[k].get_vector(x, y)
    }

    fn sum(&self) -> Combination {
        Combination::new(self.dv)
    }

    fn defect(&self, c: BimoduleCondition, x: usize, y: usize, v: usize) -> Vector {
        use ActionRole::*;
        use BimoduleCondition::*;
        let e = self.ev(v);
        let bv = self.beta(v);
        let ax = &self.al[x];
        let ay = &self.al[y];
        match c {
            Assoc => self
                .sum()
                .add(&self.act(S, &self.prod(0, x, y), &bv))
                .sub(&self.act(S, ax, &self.actb(S, y, &e)))
                .finish(),
            Cond1 => {
                let s = self.sxy(x, y);
                self.sum()
                    .add(&self.act(L, &self.prod(0, x, y), &bv))
                    .sub(&self.act(L, ax, &self.actb(L, y, &e)))
                    .plus(-s, &self.act(L, &self.prod(0, y, x), &bv))
                    .plus(s, &self.act(L, ay, &self.actb(L, x, &e)))
                    .finish()
            }
            Cond2 => {
                let s = self.sxv(x, v);
                self.sum()
                    .add(&self.act(R, ay, &self.actb(L, x, &e)))
                    .sub(&self.act(L, ax, &self.actb(R, y, &e)))
                    .plus(-s, &self.act(R, ay, &self.actb(R, x, &e)))
                    .plus(s, &self.act(R, &self.prod(0, x, y), &bv))
                    .finish()
            }
            Cond3 => {
                let s = self.svx(v, x);
                self.sum()
                    .add(&self.act(R, ay, &self.actb(R, x, &e)))
                    .sub(&self.act(R, &self.prod(0, x, y), &bv))
                    .plus(-s, &self.act(R, ay, &self.actb(L, x, &e)))
                    .plus(s, &self.act(L, ax, &self.actb(R, y, &e)))
                    .finish()
            }
            Cond4 => self
                .sum()
                .add(&self.act(L, &self.prod(0, x, y), &bv))
                .plus(-self.sxv(y, v), &self.act(R, ay, &self.actb(L, x, &e)))
                .finish(),
            Cond5 => self
                .sum()
                .add(&self.act(R, ay, &self.actb(L, x, &e)))
                .plus(-self.svx(v, y), &self.act(L, &self.prod(0, x, y), &bv))
                .finish(),
            Cond6 => self
                .sum()
                .add(&self.act(R, ay, &self.actb(R, x, &e)))
                .plus(-self.sxy(x, y), &self.act(R, ax, &self.actb(R, y, &e)))
                .finish(),
            LieRep => self
                .sum()
                .add(&self.act(Rho, &self.prod(0, x, y), &bv))
                .sub(&self.act(Rho, ax, &self.actb(Rho, y, &e)))
                .plus(self.sxy(x, y), &self.act(Rho, ay, &self.actb(Rho, x, &e)))
                .finish(),
            Condit1 => self
                .sum()
                .add(&self.act(L, &self.prod(0, x, y), &bv))
                .plus(-self.sxy(x, y), &self.act(S, ay, &self.actb(L, x, &e)))
                .finish(),
            Condit2 => self
                .sum()
                .add(&self.act(R, ay, &self.actb(S, x, &e)))
                .plus(-self.svx(v, y), &self.act(S, &self.prod(1, x, y), &bv))
                .finish(),
            Condit3 => self
                .sum()
                .add(&self.act(R, ay, &self.actb(S, x, &e)))
                .sub(&self.act(S, ax, &self.actb(R, y, &e)))
                .finish(),
            Condit4 => {
                let s = self.sxy(x, y);
                self.sum()
                    .add(&self.act(S, &self.prod(1, x, y), &bv))
                    .sub(&self.act(L, ax, &self.actb(S, y, &e)))
                    .plus(-s, &self.act(S, &self.prod(1, y, x), &bv))
                    .plus(s, &self.act(L, ay, &self.actb(S, x, &e)))
                    .finish()
            }
            Condit5 => {
                let s_xv_y = self.sxy(x, y) * self.svx(v, y);
                let s_x_v = self.sxv(x, v);
                self.sum()
                    .plus(s_xv_y, &self.act(S, ay, &self.actb(L, x, &e)))
                    .plus(-s_xv_y * s_x_v, &self.act(S, ay, &self.actb(R, x, &e)))
                    .plus(-self.svx(v, y), &self.act(L, ax, &self.actb(S, y, &e)))
                    .plus(s_x_v, &self.act(R, &self.prod(0, x, y), &bv))
                    .finish()
            }
            GdCond1 => self
                .sum()
                .add(&self.act(L, ay, &self.actb(Rho, x, &e)))
                .sub(&self.act(Rho, &self.prod(0, y, x), &bv))
                .plus(-self.sxy(y, x), &self.act(Rho, ax, &self.actb(L, y, &e)))
                .plus(self.sxv(x, v), &self.act(R, ax, &self.actb(Rho, y, &e)))
                .sub(&self.act(L, &self.prod(1, y, x), &bv))
                .finish(),
            GdCond2 => {
                let s1 = self.svx(v, x);
                let s2 = self.sxy(x, y) * self.svx(v, y);
                self.sum()
                    .add(&self.act(R, &self.prod(1, x, y), &bv))
                    .plus(-s1, &self.act(Rho, ax, &self.actb(R, y, &e)))
                    .plus(s1, &self.act(R, ay, &self.actb(Rho, x, &e)))
                    .plus(-s2, &self.act(R, ax, &self.actb(Rho, y, &e)))
                    .plus(s2, &self.act(Rho, ay, &self.actb(R, x, &e)))
                    .finish()
            }
        }
    }
}

fn condition_roles(c: BimoduleCondition) -> &'static [ActionRole] {
    use ActionRole::*;
    use BimoduleCondition::*;
    match c {
        Assoc => &[S],
        Cond1 => &[L],
        Cond2 | Cond3 | Cond4 | Cond5 => &[L, R],
        Cond6 => &[R],
        LieRep => &[Rho],
        Condit1 => &[S, L],
        Condit2 | Condit3 => &[S, R],
        Condit4 => &[S, L],
        Condit5 => &[S, L, R],
        GdCond1 | GdCond2 => &[L, R, Rho],
    }
}

/// Evaluates one condition on every `(x, y, v)`.
pub fn check_condition(
    a: &AlgebraPresentation,
    m: &ActionBundle,
    cond: BimoduleCondition,
    roles: &[&str],
    opts: &CheckOptions,
) -> Result<CheckReport> {
    let start = Instant::now();
    m.compatible_with(a)?;
    for r in condition_roles(cond) {
        m.action(*r)?;
    }
    let ev = ModEval::new(a, m, roles)?;
    let n = a.dim();
    let dims = [n, n, m.module.dim()];
    let outcome = match scan::first_failure(&dims, opts, |t| ev.defect(cond, t[0], t[1], t[2])) {
        None => Outcome::Pass,
        Some((t, d)) => Outcome::Fail(Witness {
            tuple: t.clone(),
            names: vec![
                a.space().name(t[0]).to_string(),
                a.space().name(t[1]).to_string(),
                m.module.name(t[2]).to_string(),
            ],
            defect: m.module.label(&d),
        }),
    };
    Ok(CheckReport::new(
        cond.tag(),
        roles.iter().map(|r| r.to_string()).collect(),
        outcome,
        start.elapsed(),
    ))
}

pub fn check_bimodule(
    a: &AlgebraPresentation,
    m: &ActionBundle,
    kind: BimoduleKind,
    roles: &RoleMap,
    opts: &CheckOptions,
) -> Result<SuiteReport> {
    m.compatible_with(a)?;
    for r in kind.action_roles() {
        m.action(*r)?;
    }
    let mut report = SuiteReport::new(kind.tag());
    for (cond, canon) in kind.members() {
        let actual: Vec<&str> = canon.iter().map(|r| roles.resolve(r)).collect();
        report.checks.push(check_condition(a, m, cond, &actual, opts)?);
    }
    Ok(report)
}

pub fn check_bimodule_default(a: &AlgebraPresentation, m: &ActionBundle, kind: BimoduleKind) -> Result<SuiteReport> {
    check_bimodule(a, m, kind, &RoleMap::identity(), &CheckOptions::default())
}

/// Matrices of `y ↦ u_i ∘ y` (left) or `y ↦ y ∘ u_i` (right) for each image `u_i`.
fn multiplication_family(p: &BilinearProduct, images: &[Vector], left: bool) -> Vec<Matrix> {
    let dim = p.dim();
    images
        .iter()
        .map(|u| {
            let cols: Vec<Vector> = (0..dim)
                .map(|j| {
                    let e = linalg::unit(dim, j);
                    if left {
                        p.mul(u, &e)
                    } else {
                        p.mul(&e, u)
                    }
                })
                .collect();
            Matrix::from_columns(dim, &cols)
        })
        .collect()
}

/// Actions for `kind`, read off the products of `target` through the images
/// `images[i]` of the source basis.
fn induced_actions(
    target: &AlgebraPresentation,
    images: &[Vector],
    kind: BimoduleKind,
    roles: &RoleMap,
) -> Result<BTreeMap<ActionRole, Vec<Matrix>>> {
    let novikov = if kind == BimoduleKind::Hnp { "diamond" } else { "dot" };
    let mut actions = BTreeMap::new();
    for role in kind.action_roles() {
        let (prod, left) = match role {
            ActionRole::S => ("dot", true),
            ActionRole::L => (novikov, true),
            ActionRole::R => (novikov, false),
            ActionRole::Rho => ("bracket", true),
        };
        let p = target.product(roles.resolve(prod))?;
        actions.insert(*role, multiplication_family(p, images, left));
    }
    Ok(actions)
}

/// The algebra acting on itself by its own products, with `β = α`.
pub fn regular_bundle(a: &AlgebraPresentation, kind: BimoduleKind, roles: &RoleMap) -> Result<ActionBundle> {
    let images: Vec<Vector> = (0..a.dim()).map(|i| a.basis(i)).collect();
    let actions = induced_actions(a, &images, kind, roles)?;
    ActionBundle::new(a, a.space().clone(), a.alpha().matrix().clone(), actions)
}

/// `B` as a module over `A` through a morphism `f: A → B`.
pub fn pullback_bundle(
    f: &Matrix,
    a: &AlgebraPresentation,
    b: &AlgebraPresentation,
    kind: BimoduleKind,
    roles: &RoleMap,
) -> Result<ActionBundle> {
    let morphism = crate::algebra::is_morphism(f, a, b)?;
    if !morphism.passed() {
        return Err(Error::Precondition {
            reason: "map is not a morphism".into(),
            report: Box::new(SuiteReport::single("MORPHISM", morphism)),
        });
    }
    let images: Vec<Vector> = (0..a.dim()).map(|i| f.apply(&a.basis(i))).collect();
    let actions = induced_actions(b, &images, kind, roles)?;
    ActionBundle::new(a, b.space().clone(), b.alpha().matrix().clone(), actions)
}
