//! Two algebras acting on each other, and the side conditions a matched
//! pair of each kind must satisfy.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::algebra::{AlgebraPresentation, BilinearProduct};
use crate::error::{Error, Result};
use crate::grading::GroupElement;
use crate::identities::RoleMap;
use crate::linalg::{self, Combination, Vector};
use crate::report::{CheckReport, Outcome, SuiteReport, Witness};
use crate::representations::{act_with, check_bimodule, ActionBundle, ActionRole, BimoduleKind};
use crate::scalar::Scalar;
use crate::scan::{self, CheckOptions};

/// Presentations `A`, `B` with `A` acting on `B` (module twist `β`) and `B`
/// acting on `A` (module twist `α`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedPairData {
    a: AlgebraPresentation,
    b: AlgebraPresentation,
    a_on_b: ActionBundle,
    b_on_a: ActionBundle,
}

impl MatchedPairData {
    pub fn new(
        a: AlgebraPresentation,
        b: AlgebraPresentation,
        a_on_b: ActionBundle,
        b_on_a: ActionBundle,
    ) -> Result<Self> {
        if a.grading() != b.grading() {
            return Err(Error::Grading("matched pair over different grading contexts".into()));
        }
        a_on_b.compatible_with(&a)?;
        b_on_a.compatible_with(&b)?;
        if a_on_b.module() != b.space() || a_on_b.beta().matrix() != b.alpha().matrix() {
            return Err(Error::Invalid("action of A must act on (B, β)".into()));
        }
        if b_on_a.module() != a.space() || b_on_a.beta().matrix() != a.alpha().matrix() {
            return Err(Error::Invalid("action of B must act on (A, α)".into()));
        }
        Ok(MatchedPairData { a, b, a_on_b, b_on_a })
    }

    pub fn a(&self) -> &AlgebraPresentation {
        &self.a
    }

    pub fn b(&self) -> &AlgebraPresentation {
        &self.b
    }

    pub fn a_on_b(&self) -> &ActionBundle {
        &self.a_on_b
    }

    pub fn b_on_a(&self) -> &ActionBundle {
        &self.b_on_a
    }

    /// Substitutes parameters declared by either algebra.
    pub fn substitute(&self, values: &BTreeMap<String, Scalar>) -> Result<MatchedPairData> {
        let pick = |a: &AlgebraPresentation| -> BTreeMap<String, Scalar> {
            values
                .iter()
                .filter(|(k, _)| a.scalars().has_param(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect()
        };
        if let Some(k) = values
            .keys()
            .find(|k| !self.a.scalars().has_param(k) && !self.b.scalars().has_param(k))
        {
            return Err(Error::Invalid(format!("`{k}` is not a declared parameter")));
        }
        MatchedPairData::new(
            self.a.substitute(&pick(&self.a))?,
            self.b.substitute(&pick(&self.b))?,
            self.a_on_b.substitute(values),
            self.b_on_a.substitute(values),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SideFamily {
    Assoc,
    Novikov,
    Lie,
    Hnp,
    Gd,
}

/// One side condition. Conditions with an index at most `split` quantify
/// over `(x, a, b)`, the rest over `(x, y, a)`, with `x, y ∈ A`, `a, b ∈ B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SideCondition {
    pub family: SideFamily,
    pub index: u8,
}

impl SideFamily {
    fn prefix(self) -> &'static str {
        match self {
            SideFamily::Assoc => "MP_ASSOC",
            SideFamily::Novikov => "MP_NOVIKOV",
            SideFamily::Lie => "MP_LIE",
            SideFamily::Hnp => "MP_HNP",
            SideFamily::Gd => "MP_GD",
        }
    }

    fn count(self) -> u8 {
        match self {
            SideFamily::Assoc => 4,
            SideFamily::Novikov => 6,
            SideFamily::Lie => 2,
            SideFamily::Hnp => 12,
            SideFamily::Gd => 4,
        }
    }

    fn conditions(self) -> impl Iterator<Item = SideCondition> {
        (1..=self.count()).map(move |index| SideCondition { family: self, index })
    }
}

impl SideCondition {
    pub fn tag(self) -> String {
        format!("{}_{}", self.family.prefix(), self.index)
    }

    /// True when the condition quantifies over `(x, a, b)`.
    pub fn over_b(self) -> bool {
        self.index <= self.family.count() / 2
    }
}

/// Parts of a matched pair check, as `(bimodule kind, novikov role)` for
/// both directions and the side-condition families with their roles.
fn plan(kind: BimoduleKind) -> (Vec<(BimoduleKind, &'static str)>, Vec<(SideFamily, [&'static str; 2])>) {
    match kind {
        BimoduleKind::Assoc => (vec![(BimoduleKind::Assoc, "dot")], vec![(SideFamily::Assoc, ["dot", "dot"])]),
        BimoduleKind::Novikov => (
            vec![(BimoduleKind::Novikov, "dot")],
            vec![(SideFamily::Novikov, ["dot", "dot"])],
        ),
        BimoduleKind::LieRep => (
            vec![(BimoduleKind::LieRep, "dot")],
            vec![(SideFamily::Lie, ["bracket", "bracket"])],
        ),
        BimoduleKind::Hnp => (
            vec![(BimoduleKind::Assoc, "dot"), (BimoduleKind::Novikov, "diamond")],
            vec![
                (SideFamily::Assoc, ["dot", "dot"]),
                (SideFamily::Novikov, ["diamond", "diamond"]),
                (SideFamily::Hnp, ["dot", "diamond"]),
            ],
        ),
        BimoduleKind::Gd => (
            vec![(BimoduleKind::LieRep, "dot"), (BimoduleKind::Novikov, "dot")],
            vec![
                (SideFamily::Lie, ["bracket", "bracket"]),
                (SideFamily::Novikov, ["dot", "dot"]),
                (SideFamily::Gd, ["dot", "bracket"]),
            ],
        ),
    }
}

struct MpEval<'a> {
    p: &'a MatchedPairData,
    pa: [&'a BilinearProduct; 2],
    pb: [&'a BilinearProduct; 2],
    ala: Vec<Vector>,
    alb: Vec<Vector>,
    na: usize,
    nb: usize,
}

impl<'a> MpEval<'a> {
    fn new(p: &'a MatchedPairData, roles: [&str; 2]) -> Result<Self> {
        let pa = [p.a.product(roles[0])?, p.a.product(roles[1])?];
        let pb = [p.b.product(roles[0])?, p.b.product(roles[1])?];
        let (na, nb) = (p.a.dim(), p.b.dim());
        Ok(MpEval {
            p,
            pa,
            pb,
            ala: (0..na).map(|i| p.a.alpha().apply(&p.a.basis(i))).collect(),
            alb: (0..nb).map(|i| p.b.alpha().apply(&p.b.basis(i))).collect(),
            na,
            nb,
        })
    }

    fn da(&self, i: usize) -> &GroupElement {
        self.p.a.space().degree(i)
    }

    fn db(&self, i: usize) -> &GroupElement {
        self.p.b.space().degree(i)
    }

    fn eps(&self, u: &GroupElement, v: &GroupElement) -> i8 {
        self.p.a.grading().sign(u, v)
    }

    /// `role_A(x) v` for `x ∈ A`, `v ∈ B`.
    fn on_b(&self, role: ActionRole, x: &[Scalar], v: &[Scalar]) -> Vector {
        act_with(self.p.a_on_b.action(role).expect("checked role"), x, v, self.nb)
    }

    /// `role_B(a) y` for `a ∈ B`, `y ∈ A`.
    fn on_a(&self, role: ActionRole, a: &[Scalar], y: &[Scalar]) -> Vector {
        act_with(self.p.b_on_a.action(role).expect("checked role"), a, y, self.na)
    }

    fn ma(&self, k: usize, u: &[Scalar], v: &[Scalar]) -> Vector {
        self.pa[k].mul(u, v)
    }

    fn mb(&self, k: usize, u: &[Scalar], v: &[Scalar]) -> Vector {
        self.pb[k].mul(u, v)
    }

    /// Side condition on `(x, a, b)`; the result lies in `B`.
    fn over_b(&self, c: SideCondition, x: usize, a: usize, b: usize) -> Vector {
        use ActionRole::{Rho, L, R, S};
        let (dx, da, db) = (self.da(x), self.db(a), self.db(b));
        let e = |u, v| self.eps(u, v);
        let xv = linalg::unit(self.na, x);
        let av = linalg::unit(self.nb, a);
        let bv = linalg::unit(self.nb, b);
        let ax = &self.ala[x];
        let ba = &self.alb[a];
        let bb = &self.alb[b];
        let sum = Combination::new(self.nb);
        match (c.family, c.index) {
            (SideFamily::Assoc, 1) => sum
                .plus(e(db, dx), &self.mb(0, ba, &self.on_b(S, &xv, &bv)))
                .plus(e(da, db) * e(da, dx), &self.on_b(S, &self.on_a(S, &bv, &xv), ba))
                .plus(-e(da, dx) * e(db, dx), &self.on_b(S, ax, &self.mb(0, &av, &bv)))
                .finish(),
            (SideFamily::Assoc, 2) => sum
                .add(&self.mb(0, ba, &self.on_b(S, &xv, &bv)))
                .plus(e(da, dx) * e(da, db) * e(dx, db), &self.on_b(S, &self.on_a(S, &bv, &xv), ba))
                .plus(-e(da, dx), &self.mb(0, &self.on_b(S, &xv, &av), bb))
                .sub(&self.on_b(S, &self.on_a(S, &av, &xv), bb))
                .finish(),
            (SideFamily::Novikov, 1) => sum
                .add(&self.on_b(R, ax, &self.mb(0, &av, &bv)))
                .sub(&self.mb(0, ba, &self.on_b(R, &xv, &bv)))
                .sub(&self.on_b(R, &self.on_a(L, &bv, &xv), ba))
                .plus(-e(da, db), &self.on_b(R, ax, &self.mb(0, &bv, &av)))
                .plus(e(da, db), &self.mb(0, bb, &self.on_b(R, &xv, &av)))
                .plus(e(da, db), &self.on_b(R, &self.on_a(L, &av, &xv), bb))
                .finish(),
            (SideFamily::Novikov, 2) => {
                let s = e(da, dx);
                sum.add(&self.mb(0, &self.on_b(R, &xv, &av), bb))
                    .add(&self.on_b(L, &self.on_a(L, &av, &xv), bb))
                    .sub(&self.mb(0, ba, &self.on_b(L, &xv, &bv)))
                    .sub(&self.on_b(R, &self.on_a(R, &bv, &xv), ba))
                    .plus(-s, &self.mb(0, &self.on_b(L, &xv, &av), bb))
                    .plus(-s, &self.on_b(L, &self.on_a(R, &av, &xv), bb))
                    .plus(s, &self.on_b(L, ax, &self.mb(0, &av, &bv)))
                    .finish()
            }
            (SideFamily::Novikov, 3) => {
                let s = e(dx, da);
                sum.add(&self.mb(0, &self.on_b(L, &xv, &av), bb))
                    .sub(&self.on_b(L, &self.on_a(R, &av, &xv), bb))
                    .sub(&self.on_b(L, ax, &self.mb(0, &av, &bv)))
                    .plus(-s, &self.mb(0, &self.on_b(R, &xv, &av), bb))
                    .plus(-s, &self.on_b(L, &self.on_a(L, &av, &xv), bb))
                    .plus(s, &self.mb(0, ba, &self.on_b(L, &xv, &bv)))
                    .plus(s, &self.on_b(R, &self.on_a(R, &bv, &xv), ba))
                    .finish()
            }
            (SideFamily::Lie, 1) => {
                let s1 = e(dx, da);
                let s2 = e(da, db) * e(dx, db);
                sum.plus(s1, &self.on_b(Rho, &self.on_a(Rho, &av, &xv), bb))
                    .plus(-s1, &self.mb(0, ba, &self.on_b(Rho, &xv, &bv)))
                    .plus(s2, &self.mb(0, bb, &self.on_b(Rho, &xv, &av)))
                    .plus(-s2, &self.on_b(Rho, &self.on_a(Rho, &bv, &xv), ba))
                    .add(&self.on_b(Rho, ax, &self.mb(0, &av, &bv)))
                    .finish()
            }
            // Unsubscripted `s` in these six is read as `s_A`.
            (SideFamily::Hnp, 1) => sum
                .add(&self.on_b(R, ax, &self.mb(0, &av, &bv)))
                .plus(-e(db, dx), &self.mb(0, &self.on_b(R, &xv, &av), bb))
                .plus(-e(db, dx), &self.on_b(S, &self.on_a(L, &av, &xv), bb))
                .finish(),
            (SideFamily::Hnp, 2) => sum
                .add(&self.on_b(L, &self.on_a(S, &av, &xv), bb))
                .plus(e(da, dx), &self.mb(1, &self.on_b(S, &xv, &av), bb))
                .plus(
                    -e(dx, db) * e(da, dx) * e(db, dx),
                    &self.on_b(S, ax, &self.mb(1, &av, &bv)),
                )
                .finish(),
            (SideFamily::Hnp, 3) => sum
                .plus(e(da, dx), &self.on_b(L, &self.on_a(S, &av, &xv), bb))
                .add(&self.mb(1, &self.on_b(S, &xv, &av), bb))
                .plus(-e(da, db), &self.mb(0, &self.on_b(L, &xv, &bv), ba))
                .plus(-e(da, db), &self.on_b(S, &self.on_a(R, &bv, &xv), ba))
                .finish(),
            (SideFamily::Hnp, 4) => {
                let sab_x = e(da, dx) * e(db, dx);
                let s = e(da, db);
                sum.plus(sab_x, &self.on_b(S, ax, &self.mb(1, &av, &bv)))
                    .plus(-e(db, dx), &self.mb(1, ba, &self.on_b(S, &xv, &bv)))
                    .sub(&self.on_b(R, &self.on_a(S, &bv, &xv), ba))
                    .plus(-s * sab_x, &self.on_b(S, ax, &self.mb(1, &bv, &av)))
                    .plus(s * e(da, dx), &self.mb(1, bb, &self.on_b(S, &xv, &av)))
                    .plus(s, &self.on_b(R, &self.on_a(S, &av, &xv), bb))
                    .finish()
            }
            (SideFamily::Hnp, 5) => {
                let s = e(da, dx);
                sum.add(&self.mb(0, &self.on_b(R, &xv, &bv), bb))
                    .add(&self.on_b(S, &self.on_a(L, &av, &xv), bb))
                    .sub(&self.mb(1, ba, &self.on_b(S, &xv, &bv)))
                    .plus(-e(dx, db), &self.on_b(R, &self.on_a(S, &bv, &xv), ba))
                    .plus(-s, &self.mb(0, &self.on_b(L, &xv, &bv), bb))
                    .plus(s, &self.on_b(S, &self.on_a(R, &av, &xv), bb))
                    .plus(s, &self.on_b(L, ax, &self.mb(0, &av, &bv)))
                    .finish()
            }
            (SideFamily::Hnp, 6) => {
                let s = e(dx, da);
                sum.add(&self.mb(0, &self.on_b(L, &xv, &av), bb))
                    .add(&self.on_b(S, &self.on_a(R, &av, &xv), bb))
                    .sub(&self.on_b(L, ax, &self.mb(0, &av, &bv)))
                    .plus(-s, &self.mb(0, &self.on_b(R, &xv, &av), bb))
                    .plus(-s, &self.on_b(S, &self.on_a(L, &av, &xv), bb))
                    .plus(s, &self.mb(1, ba, &self.on_b(S, &xv, &bv)))
                    .plus(s * e(dx, db), &self.on_b(R, &self.on_a(S, &bv, &xv), ba))
                    .finish()
            }
            (SideFamily::Gd, 1) => {
                let s1 = e(da, dx);
                let s2 = e(da, dx) * e(db, dx);
                sum.add(&self.on_b(R, &self.on_a(Rho, &av, &xv), bb))
                    .sub(&self.on_b(R, ax, &self.mb(1, &bv, &av)))
                    .plus(-s1, &self.mb(0, bb, &self.on_b(Rho, &xv, &av)))
                    .plus(s1, &self.on_b(Rho, &self.on_a(L, &bv, &xv), ba))
                    .plus(s1, &self.on_b(R, &self.on_a(Rho, &bv, &xv), ba))
                    .plus(s2, &self.on_b(Rho, ax, &self.mb(0, &bv, &av)))
                    .plus(-s2, &self.mb(0, &self.on_b(Rho, &xv, &bv), ba))
                    .plus(s2 * e(db, da), &self.mb(1, ba, &self.on_b(R, &xv, &bv)))
                    .finish()
            }
            (SideFamily::Gd, 2) => {
                let s1 = e(dx, da);
                let s2 = e(da, db);
                let s3 = e(da, db) * e(dx, db);
                sum.add(&self.on_b(L, ax, &self.mb(1, &av, &bv)))
                    .sub(&self.mb(0, &self.on_b(Rho, &xv, &av), bb))
                    .sub(&self.on_b(Rho, &self.on_a(R, &av, &xv), bb))
                    .plus(-s1, &self.mb(1, ba, &self.on_b(L, &xv, &bv)))
                    .plus(s1, &self.on_b(R, &self.on_a(Rho, &av, &xv), bb))
                    .plus(-s2, &self.on_b(Rho, &self.on_a(R, &bv, &xv), ba))
                    .plus(s2, &self.mb(0, &self.on_b(Rho, &xv, &bv), ba))
                    .plus(-s3, &self.on_b(L, &self.on_a(Rho, &bv, &xv), ba))
                    .plus(s3, &self.mb(1, bb, &self.on_b(L, &xv, &av)))
                    .finish()
            }
            _ => unreachable!("condition {} is quantified over A", c.tag()),
        }
    }

    /// Side condition on `(x, y, a)`; the result lies in `A`.
    fn over_a(&self, c: SideCondition, x: usize, y: usize, a: usize) -> Vector {
        use ActionRole::{Rho, L, R, S};
        let (dx, dy, da) = (self.da(x), self.da(y), self.db(a));
        let e = |u, v| self.eps(u, v);
        let xv = linalg::unit(self.na, x);
        let yv = linalg::unit(self.na, y);
        let av = linalg::unit(self.nb, a);
        let ax = &self.ala[x];
        let ay = &self.ala[y];
        let ba = &self.alb[a];
        let sum = Combination::new(self.na);
        match (c.family, c.index) {
            (SideFamily::Assoc, 3) => sum
                .plus(e(dy, da), &self.ma(0, ax, &self.on_a(S, &av, &yv)))
                .plus(e(dx, dy) * e(dx, da), &self.on_a(S, &self.on_b(S, &yv, &av), ax))
                .plus(-e(dx, da) * e(dy, da), &self.on_a(S, ba, &self.ma(0, &xv, &yv)))
                .finish(),
            (SideFamily::Assoc, 4) => sum
                .add(&self.ma(0, ax, &self.on_a(S, &av, &yv)))
                .plus(e(dx, da) * e(dx, dy) * e(da, dy), &self.on_a(S, &self.on_b(S, &yv, &av), ax))
                .plus(-e(dx, da), &self.ma(0, &self.on_a(S, &av, &xv), ay))
                .sub(&self.on_a(S, &self.on_b(S, &xv, &av), ay))
                .finish(),
            (SideFamily::Novikov, 4) => sum
                .add(&self.on_a(R, ba, &self.ma(0, &xv, &yv)))
                .sub(&self.ma(0, ax, &self.on_a(R, &av, &yv)))
                .sub(&self.on_a(R, &self.on_b(L, &yv, &av), ax))
                .plus(-e(dx, dy), &self.on_a(R, ba, &self.ma(0, &yv, &xv)))
                .plus(e(dx, dy), &self.ma(0, ay, &self.on_a(R, &av, &xv)))
                .plus(e(dx, dy), &self.on_a(R, &self.on_b(L, &xv, &av), ay))
                .finish(),
            (SideFamily::Novikov, 5) => {
                let s = e(dx, da);
                sum.add(&self.ma(0, &self.on_a(R, &av, &xv), ay))
                    .add(&self.on_a(L, &self.on_b(L, &xv, &av), ay))
                    .sub(&self.ma(0, ax, &self.on_a(L, &av, &yv)))
                    .sub(&self.on_a(R, &self.on_b(R, &yv, &av), ax))
                    .plus(-s, &self.ma(0, &self.on_a(L, &av, &xv), ay))
                    .plus(-s, &self.on_a(L, &self.on_b(R, &xv, &av), ay))
                    .plus(s, &self.on_a(L, ba, &self.ma(0, &xv, &yv)))
                    .finish()
            }
            (SideFamily::Novikov, 6) => {
                let s = e(da, dx);
                sum.add(&self.ma(0, &self.on_a(L, &av, &xv), ay))
                    .sub(&self.on_a(L, &self.on_b(R, &xv, &av), ay))
                    .sub(&self.on_a(L, ba, &self.ma(0, &xv, &yv)))
                    .plus(-s, &self.ma(0, &self.on_a(R, &av, &xv), ay))
                    .plus(-s, &self.on_a(L, &self.on_b(L, &xv, &av), ay))
                    .plus(s, &self.ma(0, ax, &self.on_a(L, &av, &yv)))
                    .plus(s, &self.on_a(R, &self.on_b(R, &yv, &av), ax))
                    .finish()
            }
            (SideFamily::Lie, 2) => {
                let s1 = e(da, dx);
                let s2 = e(dx, dy) * e(da, dy);
                sum.plus(s1, &self.on_a(Rho, &self.on_b(Rho, &xv, &av), ay))
                    .plus(-s1, &self.ma(0, ax, &self.on_a(Rho, &av, &yv)))
                    .plus(s2, &self.ma(0, ay, &self.on_a(Rho, &av, &xv)))
                    .plus(-s2, &self.on_a(Rho, &self.on_b(Rho, &yv, &av), ax))
                    .add(&self.on_a(Rho, ba, &self.ma(0, &xv, &yv)))
                    .finish()
            }
            // Unsubscripted `s` in these six is read as `s_B`.
            (SideFamily::Hnp, 7) => sum
                .add(&self.on_a(R, ba, &self.ma(0, &xv, &yv)))
                .plus(-e(dy, da), &self.ma(0, &self.on_a(R, &av, &xv), ay))
                .plus(-e(dy, da), &self.on_a(S, &self.on_b(L, &xv, &av), ay))
                .finish(),
            (SideFamily::Hnp, 8) => sum
                .add(&self.on_a(L, &self.on_b(S, &xv, &av), ay))
                .plus(e(dx, da), &self.ma(1, &self.on_a(S, &av, &xv), ay))
                .plus(
                    -e(da, dy) * e(dx, da) * e(dy, da),
                    &self.on_a(S, ba, &self.ma(1, &xv, &yv)),
                )
                .finish(),
            (SideFamily::Hnp, 9) => sum
                .plus(e(dx, da), &self.on_a(L, &self.on_b(S, &xv, &av), ay))
                .add(&self.ma(1, &self.on_a(S, &av, &xv), ay))
                .plus(-e(dx, dy), &self.ma(0, &self.on_a(L, &av, &yv), ax))
                .plus(-e(dx, dy), &self.on_a(S, &self.on_b(R, &yv, &av), ax))
                .finish(),
            (SideFamily::Hnp, 10) => {
                let sxy_a = e(dx, da) * e(dy, da);
                let s = e(dx, dy);
                sum.plus(sxy_a, &self.on_a(S, ba, &self.ma(1, &xv, &yv)))
                    .plus(-e(dy, da), &self.ma(1, ax, &self.on_a(S, &av, &yv)))
                    .sub(&self.on_a(R, &self.on_b(S, &yv, &av), ax))
                    .plus(-s * sxy_a, &self.on_a(S, ba, &self.ma(1, &yv, &xv)))
                    .plus(s * e(dx, da), &self.ma(1, ay, &self.on_a(S, &av, &xv)))
                    .plus(s, &self.on_a(R, &self.on_b(S, &xv, &av), ay))
                    .finish()
            }
            (SideFamily::Hnp, 11) => {
                let s = e(dx, da);
                sum.add(&self.ma(0, &self.on_a(R, &av, &yv), ay))
                    .add(&self.on_a(S, &self.on_b(L, &xv, &av), ay))
                    .sub(&self.ma(1, ax, &self.on_a(S, &av, &yv)))
                    .plus(-e(da, dy), &self.on_a(R, &self.on_b(S, &yv, &av), ax))
                    .plus(-s, &self.ma(0, &self.on_a(L, &av, &yv), ay))
                    .plus(s, &self.on_a(S, &self.on_b(R, &xv, &av), ay))
                    .plus(s, &self.on_a(L, ba, &self.ma(0, &xv, &yv)))
                    .finish()
            }
            (SideFamily::Hnp, 12) => {
                let s = e(da, dx);
                sum.add(&self.ma(0, &self.on_a(L, &av, &xv), ay))
                    .add(&self.on_a(S, &self.on_b(R, &xv, &av), ay))
                    .sub(&self.on_a(L, ba, &self.ma(0, &xv, &yv)))
                    .plus(-s, &self.ma(0, &self.on_a(R, &av, &xv), ay))
                    .plus(-s, &self.on_a(S, &self.on_b(L, &xv, &av), ay))
                    .plus(s, &self.ma(1, ax, &self.on_a(S, &av, &yv)))
                    .plus(s * e(da, dy), &self.on_a(R, &self.on_b(S, &yv, &av), ax))
                    .finish()
            }
            (SideFamily::Gd, 3) => {
                let s1 = e(dx, da);
                let s2 = e(dx, da) * e(dy, da);
                sum.add(&self.on_a(R, &self.on_b(Rho, &xv, &av), ay))
                    .sub(&self.on_a(R, ba, &self.ma(1, &yv, &xv)))
                    .plus(-s1, &self.ma(0, ay, &self.on_a(Rho, &av, &xv)))
                    .plus(s1, &self.on_a(Rho, &self.on_b(L, &yv, &av), ax))
                    .plus(s1, &self.on_a(R, &self.on_b(Rho, &yv, &av), ax))
                    .plus(s2, &self.on_a(Rho, ba, &self.ma(0, &yv, &xv)))
                    .plus(-s2, &self.ma(0, &self.on_a(Rho, &av, &yv), ax))
                    .plus(s2 * e(dy, dx), &self.ma(1, ax, &self.on_a(R, &av, &yv)))
                    .finish()
            }
            (SideFamily::Gd, 4) => {
                let s1 = e(da, dx);
                let s2 = e(dx, dy);
                let s3 = e(da, dy) * e(dx, dy);
                sum.add(&self.on_a(L, ba, &self.ma(1, &xv, &yv)))
                    .sub(&self.ma(0, &self.on_a(Rho, &av, &xv), ay))
                    .sub(&self.on_a(Rho, &self.on_b(R, &xv, &av), ay))
                    .plus(-s1, &self.ma(1, ax, &self.on_a(L, &av, &yv)))
                    .plus(s1, &self.on_a(R, &self.on_b(Rho, &xv, &av), ay))
                    .plus(-s2, &self.on_a(Rho, &self.on_b(R, &yv, &av), ax))
                    .plus(s2, &self.ma(0, &self.on_a(Rho, &av, &yv), ax))
                    .plus(-s3, &self.on_a(L, &self.on_b(Rho, &yv, &av), ax))
                    .plus(s3, &self.ma(1, ay, &self.on_a(L, &av, &xv)))
                    .finish()
            }
            _ => unreachable!("condition {} is quantified over B", c.tag()),
        }
    }
}

fn family_roles(f: SideFamily) -> &'static [ActionRole] {
    use ActionRole::*;
    match f {
        SideFamily::Assoc => &[S],
        SideFamily::Novikov => &[L, R],
        SideFamily::Lie => &[Rho],
        SideFamily::Hnp => &[S, L, R],
        SideFamily::Gd => &[L, R, Rho],
    }
}

/// Evaluates one side condition on every tuple of its quantifier.
pub fn check_side_condition(
    p: &MatchedPairData,
    c: SideCondition,
    roles: [&str; 2],
    opts: &CheckOptions,
) -> Result<CheckReport> {
    let start = Instant::now();
    for r in family_roles(c.family) {
        p.a_on_b.action(*r)?;
        p.b_on_a.action(*r)?;
    }
    let ev = MpEval::new(p, roles)?;
    let (na, nb) = (p.a.dim(), p.b.dim());
    let hit = if c.over_b() {
        scan::first_failure(&[na, nb, nb], opts, |t| ev.over_b(c, t[0], t[1], t[2]))
    } else {
        scan::first_failure(&[na, na, nb], opts, |t| ev.over_a(c, t[0], t[1], t[2]))
    };
    let outcome = match hit {
        None => Outcome::Pass,
        Some((t, d)) => {
            let sa = p.a.space();
            let sb = p.b.space();
            let (names, defect) = if c.over_b() {
                (
                    vec![sa.name(t[0]).to_string(), sb.name(t[1]).to_string(), sb.name(t[2]).to_string()],
                    sb.label(&d),
                )
            } else {
                (
                    vec![sa.name(t[0]).to_string(), sa.name(t[1]).to_string(), sb.name(t[2]).to_string()],
                    sa.label(&d),
                )
            };
            Outcome::Fail(Witness { tuple: t, names, defect })
        }
    };
    let mut role_names: Vec<String> = roles.iter().map(|r| r.to_string()).collect();
    role_names.dedup();
    Ok(CheckReport::new(&c.tag(), role_names, outcome, start.elapsed()))
}

/// Every hypothesis of the matched-pair statement for `kind`: both actions
/// are modules of the required kinds and every side condition holds.
pub fn matched_pair_conditions(
    p: &MatchedPairData,
    kind: BimoduleKind,
    roles: &RoleMap,
    opts: &CheckOptions,
) -> Result<SuiteReport> {
    let (modules, families) = plan(kind);
    let mut report = SuiteReport::new(&format!("MATCHED_PAIR_{}", kind.tag()));
    for (mk, novikov_role) in modules {
        let sub = RoleMap::identity()
            .with("dot", roles.resolve(if mk == BimoduleKind::Novikov { novikov_role } else { "dot" }))
            .with("bracket", roles.resolve("bracket"))
            .with("diamond", roles.resolve("diamond"));
        for (label, alg, bundle) in [("A_ON_B", &p.a, &p.a_on_b), ("B_ON_A", &p.b, &p.b_on_a)] {
            let r = check_bimodule(alg, bundle, mk, &sub, opts)?;
            for mut c in r.checks {
                c.check = format!("{label}.{}", c.check);
                report.checks.push(c);
            }
        }
    }
    for (family, rs) in families {
        let actual = [roles.resolve(rs[0]), roles.resolve(rs[1])];
        for c in family.conditions() {
            report.checks.push(check_side_condition(p, c, actual, opts)?);
        }
    }
    Ok(report)
}
