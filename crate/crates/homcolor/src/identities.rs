//! The identity catalog and the structure suites built from it.
//!
//! Every identity is evaluated as a single defect `lhs - rhs` on basis tuples;
//! an identity holds when every defect is the zero vector.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::algebra::{AlgebraPresentation, BilinearProduct};
use crate::error::{Error, Result};
use crate::linalg::{Combination, Vector};
use crate::report::{CheckReport, Outcome, SuiteReport, Witness};
use crate::scan::{self, CheckOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    /// `α(x)(yz) - (xy)α(z)`
    HomAssoc,
    /// `xy - ε(x,y) yx`
    EpsComm,
    /// Left symmetry of the twisted associator.
    NovikovLsym,
    /// `(xy)α(z) - ε(y,z)(xz)α(y)`
    NovikovRcomm,
    /// `[x,y] + ε(x,y)[y,x]`
    LieSkew,
    /// Cyclic `ε(z,x)[α(x),[y,z]]`.
    LieJacobi,
    /// `(x·y)⋄α(z) - ε(y,z)(x⋄z)·α(y)`
    HnpCompat1,
    /// `(x⋄y)·α(z) - α(x)⋄(y·z) - ε(x,y)((y⋄x)·α(z) - α(y)⋄(x·z))`
    HnpCompat2,
    /// `2α(z)·[x,y] - [z·x,α(y)] - ε(z,x)[α(x),z·y]`
    TransposedLeibniz,
    /// `[α(x),y·z] - ε(x,y)α(y)·[x,z] - ε(x+y,z)α(z)·[x,y]`
    PoissonLeibniz,
    /// `(x·y)⋄α(z) - α(x)⋄(y·z)`
    LeftAssociator,
    /// `(x·y)⋄α(z) - α(x)·(y⋄z)`, the mixed associator every
    /// Hom-Novikov-Poisson algebra satisfies.
    HnpLemmaAssoc,
    /// Gelfand-Dorfman compatibility between a Novikov product and a bracket.
    GdCompat,
    /// Cyclic `ε(z,x)α(x)·[y,z]`.
    Gi1,
    /// Cyclic `ε(z,x)[α(h)·[x,y], α²(z)]`.
    Gi2,
    /// Cyclic `ε(z,x)[α(h)·α(x), [α(y),α(z)]]`.
    Gi3,
    /// Cyclic `ε(z,x)[α(h),α(x)]·[α(y),α(z)]`.
    Gi4,
}

impl IdentityId {
    pub const ALL: [IdentityId; 17] = [
        IdentityId::HomAssoc,
        IdentityId::EpsComm,
        IdentityId::NovikovLsym,
        IdentityId::NovikovRcomm,
        IdentityId::LieSkew,
        IdentityId::LieJacobi,
        IdentityId::HnpCompat1,
        IdentityId::HnpCompat2,
        IdentityId::TransposedLeibniz,
        IdentityId::PoissonLeibniz,
        IdentityId::LeftAssociator,
        IdentityId::HnpLemmaAssoc,
        IdentityId::GdCompat,
        IdentityId::Gi1,
        IdentityId::Gi2,
        IdentityId::Gi3,
        IdentityId::Gi4,
    ];

    pub fn tag(self) -> &'static str {
        use IdentityId::*;
        match self {
            HomAssoc => "HOM_ASSOC",
            EpsComm => "EPS_COMM",
            NovikovLsym => "NOVIKOV_LSYM",
            NovikovRcomm => "NOVIKOV_RCOMM",
            LieSkew => "LIE_SKEW",
            LieJacobi => "LIE_JACOBI",
            HnpCompat1 => "HNP_COMPAT_1",
            HnpCompat2 => "HNP_COMPAT_2",
            TransposedLeibniz => "TRANSPOSED_LEIBNIZ",
            PoissonLeibniz => "POISSON_LEIBNIZ",
            LeftAssociator => "LEFT_ASSOCIATOR",
            HnpLemmaAssoc => "HNP_LEMMA_ASSOC",
            GdCompat => "GD_COMPAT",
            Gi1 => "GI_1",
            Gi2 => "GI_2",
            Gi3 => "GI_3",
            Gi4 => "GI_4",
        }
    }

    pub fn arity(self) -> usize {
        use IdentityId::*;
        match self {
            EpsComm | LieSkew => 2,
            Gi2 | Gi3 | Gi4 => 4,
            _ => 3,
        }
    }

    /// Default role names, one per product slot of the identity.
    pub fn default_roles(self) -> &'static [&'static str] {
        use IdentityId::*;
        match self {
            HomAssoc | EpsComm | NovikovLsym | NovikovRcomm => &["dot"],
            LieSkew | LieJacobi => &["bracket"],
            HnpCompat1 | HnpCompat2 | LeftAssociator | HnpLemmaAssoc => &["dot", "diamond"],
            TransposedLeibniz | PoissonLeibniz | GdCompat | Gi1 | Gi2 | Gi3 | Gi4 => {
                &["dot", "bracket"]
            }
        }
    }

    pub fn requires_multiplicative(self) -> bool {
        matches!(
            self,
            IdentityId::Gi1 | IdentityId::Gi2 | IdentityId::Gi3 | IdentityId::Gi4
        )
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let up = s.to_ascii_uppercase();
        IdentityId::ALL
            .into_iter()
            .find(|id| id.tag() == up)
            .ok_or_else(|| Error::Invalid(format!("unknown identity `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureKind {
    EpsCommAssoc,
    HomNovikov,
    HomLie,
    Hnp,
    AdmissibleHnp,
    TransposedPoisson,
    HomPoisson,
    HomGd,
}

impl StructureKind {
    pub const ALL: [StructureKind; 8] = [
        StructureKind::EpsCommAssoc,
        StructureKind::HomNovikov,
        StructureKind::HomLie,
        StructureKind::Hnp,
        StructureKind::AdmissibleHnp,
        StructureKind::TransposedPoisson,
        StructureKind::HomPoisson,
        StructureKind::HomGd,
    ];

    pub fn tag(self) -> &'static str {
        use StructureKind::*;
        match self {
            EpsCommAssoc => "EPS_COMM_ASSOC",
            HomNovikov => "HOM_NOVIKOV",
            HomLie => "HOM_LIE",
            Hnp => "HNP",
            AdmissibleHnp => "ADMISSIBLE_HNP",
            TransposedPoisson => "TRANSPOSED_POISSON",
            HomPoisson => "HOM_POISSON",
            HomGd => "HOM_GD",
        }
    }

    /// Member identities with the canonical roles they are evaluated on.
    pub fn members(self) -> Vec<(IdentityId, &'static [&'static str])> {
        use IdentityId::*;
        let assoc: [(IdentityId, &'static [&'static str]); 2] =
            [(EpsComm, &["dot"]), (HomAssoc, &["dot"])];
        let lie: [(IdentityId, &'static [&'static str]); 2] =
            [(LieSkew, &["bracket"]), (LieJacobi, &["bracket"])];
        let mut out = Vec::new();
        match self {
            StructureKind::EpsCommAssoc => out.extend(assoc),
            StructureKind::HomNovikov => {
                out.push((NovikovLsym, &["dot"][..]));
                out.push((NovikovRcomm, &["dot"][..]));
            }
            StructureKind::HomLie => out.extend(lie),
            StructureKind::Hnp | StructureKind::AdmissibleHnp => {
                out.extend(assoc);
                out.push((NovikovLsym, &["diamond"][..]));
                out.push((NovikovRcomm, &["diamond"][..]));
                out.push((HnpCompat1, &["dot", "diamond"][..]));
                out.push((HnpCompat2, &["dot", "diamond"][..]));
                if self == StructureKind::AdmissibleHnp {
                    out.push((LeftAssociator, &["dot", "diamond"][..]));
                }
            }
            StructureKind::TransposedPoisson => {
                out.extend(assoc);
                out.extend(lie);
                out.push((TransposedLeibniz, &["dot", "bracket"][..]));
            }
            StructureKind::HomPoisson => {
                out.extend(assoc);
                out.extend(lie);
                out.push((PoissonLeibniz, &["dot", "bracket"][..]));
            }
            StructureKind::HomGd => {
                out.push((NovikovLsym, &["dot"][..]));
                out.push((NovikovRcomm, &["dot"][..]));
                out.extend(lie);
                out.push((GdCompat, &["dot", "bracket"][..]));
            }
        }
        out
    }

    pub fn canonical_roles(self) -> Vec<&'static str> {
        let mut roles: Vec<&'static str> = self
            .members()
            .into_iter()
            .flat_map(|(_, r)| r.iter().copied())
            .collect();
        roles.sort();
        roles.dedup();
        roles
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for StructureKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let up = s.to_ascii_uppercase().replace('-', "_");
        StructureKind::ALL
            .into_iter()
            .find(|k| k.tag() == up)
            .ok_or_else(|| Error::Invalid(format!("unknown structure kind `{s}`")))
    }
}

/// Renames canonical roles (`dot`, `diamond`, `bracket`) to the roles of a
/// particular presentation, e.g. to check `HOM_NOVIKOV` on `diamond`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoleMap(BTreeMap<String, String>);

impl RoleMap {
    pub fn identity() -> Self {
        RoleMap::default()
    }

    pub fn with(mut self, canonical: &str, actual: &str) -> Self {
        self.0.insert(canonical.to_string(), actual.to_string());
        self
    }

    /// Parses `dot=diamond,bracket=lie`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = RoleMap::default();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("role mapping `{part}` lacks `=`")))?;
            map = map.with(k.trim(), v.trim());
        }
        Ok(map)
    }

    pub fn resolve<'a>(&'a self, canonical: &'a str) -> &'a str {
        self.0.get(canonical).map(String::as_str).unwrap_or(canonical)
    }
}

/// Read-only view used by the defect formulas.
struct Eval<'a> {
    a: &'a AlgebraPresentation,
    p: Vec<&'a BilinearProduct>,
    al: Vec<Vector>,
    al2: Vec<Vector>,
    n: usize,
}

impl<'a> Eval<'a> {
    fn new(a: &'a AlgebraPresentation, roles: &[&str], need_square: bool) -> Result<Self> {
        let p = roles
            .iter()
            .map(|r| a.product(r))
            .collect::<Result<Vec<_>>>()?;
        let n = a.dim();
        let al: Vec<Vector> = (0..n).map(|i| a.alpha().apply(&a.basis(i))).collect();
        let al2 = if need_square {
            al.iter().map(|v| a.alpha().apply(v)).collect()
        } else {
            Vec::new()
        };
        Ok(Eval { a, p, al, al2, n })
    }

    fn b(&self, k: usize, i: usize, j: usize) -> Vector {
        self.p[k].get_vector(i, j)
    }

    fn m(&self, k: usize, x: &[crate::scalar::Scalar], y: &[crate::scalar::Scalar]) -> Vector {
        self.p[k].mul(x, y)
    }

    fn s(&self, i: usize, j: usize) -> i8 {
        self.a.sign(i, j)
    }

    fn sum(&self) -> Combination {
        Combination::new(self.n)
    }

    fn defect(&self, id: IdentityId, t: &[usize]) -> Vector {
        use IdentityId::*;
        match id {
            HomAssoc => {
                let (x, y, z) = (t[0], t[1], t[2]);
                self.sum()
                    .add(&self.m(0, &self.al[x], &self.b(0, y, z)))
                    .sub(&self.m(0, &self.b(0, x, y), &self.al[z]))
                    .finish()
            }
            EpsComm => {
                let (x, y) = (t[0], t[1]);
                self.sum()
                    .add(&self.b(0, x, y))
                    .plus(-self.s(x, y), &self.b(0, y, x))
                    .finish()
            }
            NovikovLsym => {
                let (x, y, z) = (t[0], t[1], t[2]);
                let sxy = self.s(x, y);
                self.sum()
                    .add(&self.m(0, &self.b(0, x, y), &self.al[z]))
                    .sub(&self.m(0, &self.al[x], &self.b(0, y, z)))
                    .plus(-sxy, &self.m(0, &self.b(0, y, x), &self.al[z]))
                    .plus(sxy, &self.m(0, &self.al[y], &self.b(0, x, z)))
                    .finish()
            }
            NovikovRcomm => {
                let (x, y, z) = (t[0], t[1], t[2]);
                self.sum()
                    .add(&self.m(0, &self.b(0, x, y), &self.al[z]))
                    .plus(-self.s(y, z), &self.m(0, &self.b(0, x, z), &self.al[y]))
                    .finish()
            }
            LieSkew => {
                let (x, y) = (t[0], t[1]);
                self.sum()
                    .add(&self.b(0, x, y))
                    .plus(self.s(x, y), &self.b(0, y, x))
                    .finish()
            }
            LieJacobi => {
                let (x, y, z) = (t[0], t[1], t[2]);
                self.sum()
                    .plus(self.s(z, x), &self.m(0, &self.al[x], &self.b(0, y, z)))
                    .plus(self.s(x, y), &self.m(0, &self.al[y], &self.b(0, z, x)))
                    .plus(self.s(y, z), &self.m(0, &self.al[z], &self.b(0, x, y)))
                    .finish()
            }
            HnpCompat1 => {
                let (x, y, z) = (t[0], t[1], t[2]);
                self.sum()
                    .add(&self.m(1, &self.b(0, x, y), &self.al[z]))
                    .plus(-self.s(y, z), &self.m(0, &self.b(1, x, z), &self.al[y]))
                    .finish()
            }
            HnpCompat2 => {
                let (x, y, z) = (t[0], t[1], t[2]);
                let sxy = self.s(x, y);
                self.sum()
                    .add(&self.m(0, &self.b(1, x, y), &self.al[z]))
                    .sub(&self.m(1, &self.al[x], &self.b(0, y, z)))
                    .plus(-sxy, &self.m(0, &self.b(1, y, x), &self.al[z]))
                    .plus(sxy, &self.m(1, &self.al[y], &self.b(0, x, z)))
                    .finish()
            }
            TransposedLeibniz => {
                let (x, y, z) = (t[0], t[1], t[2]);
                let lhs = self.m(0, &self.al[z], &self.b(1, x, y));
                self.sum()
                    .add(&lhs)
                    .add(&lhs)
                    .sub(&self.m(1, &self.b(0, z, x), &self.al[y]))
                    .plus(-self.s(z, x), &self.m(1, &self.al[x], &self.b(0, z, y)))
                    .finish()
            }
            PoissonLeibniz => {
                let (x, y, z) = (t[0], t[1], t[2]);
                self.sum()
                    .add(&self.m(1, &self.al[x], &self.b(0, y, z)))
                    .plus(-self.s(x, y), &self.m(0, &self.al[y], &self.b(1, x, z)))
                    .plus(
                        -self.s(x, z) * self.s(y, z),
                        &self.m(0, &self.al[z], &self.b(1, x, y)),
                    )
                    .finish()
            }
            LeftAssociator => {
                let (x, y, z) = (t[0], t[1], t[2]);
                self.sum()
                    .add(&self.m(1, &self.b(0, x, y), &self.al[z]))
                    .sub(&self.m(1, &self.al[x], &self.b(0, y, z)))
                    .finish()
            }
            HnpLemmaAssoc => {
                let (x, y, z) = (t[0], t[1], t[2]);
                self.sum()
                    .add(&self.m(1, &self.b(0, x, y), &self.al[z]))
                    .sub(&self.m(0, &self.al[x], &self.b(1, y, z)))
                    .finish()
            }
            GdCompat => {
                let (x, y, z) = (t[0], t[1], t[2]);
                let sxz = self.s(x, z);
                self.sum()
                    .add(&self.m(0, &self.al[y], &self.b(1, x, z)))
                    .plus(-self.s(y, x), &self.m(1, &self.al[x], &self.b(0, y, z)))
                    .plus(sxz * self.s(y, z), &self.m(1, &self.al[z], &self.b(0, y, x)))
                    .sub(&self.m(0, &self.b(1, y, x), &self.al[z]))
                    .plus(sxz, &self.m(0, &self.b(1, y, z), &self.al[x]))
                    .finish()
            }
            Gi1 => {
                let (x, y, z) = (t[0], t[1], t[2]);
                self.cyclic(x, y, z, |a, b, c| self.m(0, &self.al[a], &self.b(1, b, c)))
            }
            Gi2 => {
                let (h, x, y, z) = (t[0], t[1], t[2], t[3]);
                self.cyclic(x, y, z, |a, b, c| {
                    let inner = self.m(0, &self.al[h], &self.b(1, a, b));
                    self.m(1, &inner, &self.al2[c])
                })
            }
            Gi3 => {
                let (h, x, y, z) = (t[0], t[1], t[2], t[3]);
                self.cyclic(x, y, z, |a, b, c| {
                    let left = self.m(0, &self.al[h], &self.al[a]);
                    let right = self.m(1, &self.al[b], &self.al[c]);
                    self.m(1, &left, &right)
                })
            }
            Gi4 => {
                let (h, x, y, z) = (t[0], t[1], t[2], t[3]);
                self.cyclic(x, y, z, |a, b, c| {
                    let left = self.m(1, &self.al[h], &self.al[a]);
                    let right = self.m(1, &self.al[b], &self.al[c]);
                    self.m(0, &left, &right)
                })
            }
        }
    }

    /// `ε(z,x) f(x,y,z) + ε(x,y) f(y,z,x) + ε(y,z) f(z,x,y)`.
    fn cyclic(&self, x: usize, y: usize, z: usize, f: impl Fn(usize, usize, usize) -> Vector) -> Vector {
        self.sum()
            .plus(self.s(z, x), &f(x, y, z))
            .plus(self.s(x, y), &f(y, z, x))
            .plus(self.s(y, z), &f(z, x, y))
            .finish()
    }
}

fn check_roles<'r>(id: IdentityId, roles: &'r [&'r str]) -> Result<&'r [&'r str]> {
    let want = id.default_roles().len();
    if roles.len() != want {
        return Err(Error::Invalid(format!(
            "{id} takes {want} role(s), got {}",
            roles.len()
        )));
    }
    Ok(roles)
}

/// The defect of `id` on one basis tuple.
pub fn defect(a: &AlgebraPresentation, id: IdentityId, roles: &[&str], tuple: &[usize]) -> Result<Vector> {
    let roles = check_roles(id, roles)?;
    if tuple.len() != id.arity() || tuple.iter().any(|i| *i >= a.dim()) {
        return Err(Error::Dimension(format!("bad tuple {tuple:?} for {id}")));
    }
    let ev = Eval::new(a, roles, id == IdentityId::Gi2)?;
    Ok(ev.defect(id, tuple))
}

fn multiplicativity_precondition(a: &AlgebraPresentation, roles: &[&str]) -> Result<Option<(String, Option<Witness>)>> {
    for role in roles {
        let r = a.is_multiplicative(role, a.alpha())?;
        if let Outcome::Fail(w) = r.outcome {
            return Ok(Some((
                format!("twisting map is not multiplicative for `{role}`"),
                Some(w),
            )));
        }
    }
    Ok(None)
}

/// Evaluates `id` on every basis tuple; the witness is the lexicographically
/// smallest failing tuple.
pub fn check_identity(
    a: &AlgebraPresentation,
    id: IdentityId,
    roles: &[&str],
    opts: &CheckOptions,
) -> Result<CheckReport> {
    let start = Instant::now();
    let roles = check_roles(id, roles)?;
    let ev = Eval::new(a, roles, id == IdentityId::Gi2)?;
    let role_names: Vec<String> = roles.iter().map(|r| r.to_string()).collect();
    if id.requires_multiplicative() {
        if let Some((reason, witness)) = multiplicativity_precondition(a, roles)? {
            return Ok(CheckReport::new(
                id.tag(),
                role_names,
                Outcome::Precondition { reason, witness },
                start.elapsed(),
            ));
        }
    }
    let dims = vec![a.dim(); id.arity()];
    if let Some(reason) = opts.arity_cap_reason(&dims) {
        return Ok(CheckReport::new(
            id.tag(),
            role_names,
            Outcome::Precondition {
                reason,
                witness: None,
            },
            start.elapsed(),
        ));
    }
    let outcome = match scan::first_failure(&dims, opts, |t| ev.defect(id, t)) {
        None => Outcome::Pass,
        Some((t, d)) => Outcome::Fail(a.witness(&t, &d)),
    };
    Ok(CheckReport::new(id.tag(), role_names, outcome, start.elapsed()))
}

/// Same as [`check_identity`] with the identity's default roles.
pub fn check_identity_default(a: &AlgebraPresentation, id: IdentityId) -> Result<CheckReport> {
    check_identity(a, id, id.default_roles(), &CheckOptions::default())
}

pub fn run_suite(
    a: &AlgebraPresentation,
    kind: StructureKind,
    roles: &RoleMap,
    opts: &CheckOptions,
) -> Result<SuiteReport> {
    for canonical in kind.canonical_roles() {
        a.product(roles.resolve(canonical))?;
    }
    let mut report = SuiteReport::new(kind.tag());
    for (id, canon) in kind.members() {
        let actual: Vec<&str> = canon.iter().map(|r| roles.resolve(r)).collect();
        report.checks.push(check_identity(a, id, &actual, opts)?);
    }
    Ok(report)
}

/// [`run_suite`] with canonical roles and default options.
pub fn run_suite_default(a: &AlgebraPresentation, kind: StructureKind) -> Result<SuiteReport> {
    run_suite(a, kind, &RoleMap::identity(), &CheckOptions::default())
}

/// The four cyclic identities of multiplicative transposed Hom-Poisson
/// algebras. Preconditions are reported, never skipped silently.
pub fn check_gi_identities(a: &AlgebraPresentation, roles: &RoleMap, opts: &CheckOptions) -> Result<SuiteReport> {
    let start = Instant::now();
    let dot = roles.resolve("dot");
    let bracket = roles.resolve("bracket");
    let gi = [IdentityId::Gi1, IdentityId::Gi2, IdentityId::Gi3, IdentityId::Gi4];
    let role_names = vec![dot.to_string(), bracket.to_string()];
    let tp = run_suite(a, StructureKind::TransposedPoisson, roles, opts)?;
    let blocked = if let Some(bad) = tp.first_failure() {
        Some((
            format!("TRANSPOSED_POISSON fails at {}", bad.label()),
            bad.witness().cloned(),
        ))
    } else {
        multiplicativity_precondition(a, &[dot, bracket])?
    };
    let mut report = SuiteReport::new("GI");
    for id in gi {
        if let Some((reason, witness)) = &blocked {
            report.checks.push(CheckReport::new(
                id.tag(),
                role_names.clone(),
                Outcome::Precondition {
                    reason: reason.clone(),
                    witness: witness.clone(),
                },
                start.elapsed(),
            ));
        } else {
            report.checks.push(check_identity(a, id, &[dot, bracket], opts)?);
        }
    }
    Ok(report)
}
