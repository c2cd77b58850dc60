//! Shared helpers for integration tests: fixture loading and a dense
//! brute-force evaluator that shares no evaluation code with the kernel.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use homcolor::format::parse_presentation;
use homcolor::{AlgebraPresentation, IdentityId, Scalar};
use serde_json::Value;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_text(name: &str) -> String {
    let path = fixtures_dir().join(format!("{name}.json"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn load(name: &str) -> AlgebraPresentation {
    parse_presentation(&fixture_text(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn manifest() -> Value {
    serde_json::from_str(&fixture_text("manifest")).unwrap()
}

/// Names of every fixture that loads, without the `.json` suffix.
pub fn loadable_fixtures() -> Vec<String> {
    let mut out: Vec<String> = std::fs::read_dir(fixtures_dir())
        .unwrap()
        .filter_map(|e| {
            let name = e.ok()?.file_name().into_string().ok()?;
            let stem = name.strip_suffix(".json")?.to_string();
            (stem != "manifest").then_some(stem)
        })
        .filter(|stem| parse_presentation(&fixture_text(stem)).is_ok())
        .collect();
    out.sort();
    out
}

pub fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

pub fn q(num: i64, den: i64) -> Scalar {
    Scalar::ratio(num, den)
}

/// Coordinates of `name`-labelled combination over the basis of `a`.
pub fn vector(a: &AlgebraPresentation, terms: &[(&str, Scalar)]) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); a.dim()];
    for (name, c) in terms {
        let i = a.space().index_of(name).unwrap_or_else(|| panic!("no basis element {name}"));
        v[i] = &v[i] + c;
    }
    v
}

pub fn idx(a: &AlgebraPresentation, name: &str) -> usize {
    a.space().index_of(name).unwrap_or_else(|| panic!("no basis element {name}"))
}

/// Rational values for every parameter, drawn from `seed`.
pub fn substitution(a: &AlgebraPresentation, seed: &[i64]) -> BTreeMap<String, Scalar> {
    a.scalars()
        .params()
        .enumerate()
        .map(|(k, p)| {
            let raw = seed[k % seed.len()] + k as i64;
            let den = 1 + (raw.rem_euclid(5));
            (p.to_string(), Scalar::ratio(raw, den))
        })
        .collect()
}

/// Copies of `a` with one structure constant changed, each paired with a
/// description: every stored constant negated and shifted by one, and every
/// zero constant the grading allows set to one.
pub fn single_constant_perturbations(a: &AlgebraPresentation) -> Vec<(String, AlgebraPresentation)> {
    let n = a.dim();
    let group = a.grading().group();
    let mut out = Vec::new();
    let roles: Vec<String> = a.roles().map(str::to_string).collect();
    for role in roles {
        let p = a.product(&role).unwrap();
        for i in 0..n {
            for j in 0..n {
                let v = p.get_vector(i, j);
                for k in 0..n {
                    let changes: Vec<(&str, Scalar)> = if !v[k].is_zero() {
                        vec![("negated", -&v[k]), ("incremented", &v[k] + &Scalar::one())]
                    } else if group.add(a.space().degree(i), a.space().degree(j)) == *a.space().degree(k) {
                        vec![("set to 1", Scalar::one())]
                    } else {
                        Vec::new()
                    };
                    for (how, new) in changes {
                        let mut changed = p.clone();
                        let mut w = v.clone();
                        w[k] = new;
                        changed.set(i, j, &w);
                        let mut b = a.clone();
                        b.insert_product(&role, changed).unwrap();
                        let desc = format!(
                            "{role}: {}∘{} coefficient on {} {how}",
                            a.space().name(i),
                            a.space().name(j),
                            a.space().name(k)
                        );
                        out.push((desc, b));
                    }
                }
            }
        }
    }
    out
}

/// Dense copy of a presentation evaluated with plain nested loops.
pub struct Dense {
    pub n: usize,
    names: Vec<String>,
    /// `sign[i][j] = ε(deg e_i, deg e_j)`.
    sign: Vec<Vec<i64>>,
    /// `alpha[i]` is the image of `e_i`.
    alpha: Vec<Vec<Scalar>>,
    /// `table[role][i][j]` is `e_i ∘ e_j`.
    table: BTreeMap<String, Vec<Vec<Vec<Scalar>>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DenseVerdict {
    Pass,
    Fail(Vec<usize>, Vec<Scalar>),
    /// The twisting map is not multiplicative for some role.
    Precondition,
}

fn sign_of(matrix: &[Vec<i8>], a: &[i64], b: &[i64]) -> i64 {
    let mut s = 1i64;
    for (k, row) in matrix.iter().enumerate() {
        for (l, m) in row.iter().enumerate() {
            let e = a[k] * b[l];
            if *m == -1 && e.rem_euclid(2) == 1 {
                s = -s;
            }
        }
    }
    s
}

fn zero(n: usize) -> Vec<Scalar> {
    vec![Scalar::zero(); n]
}

fn plus(acc: &mut [Scalar], c: i64, v: &[Scalar]) {
    let c = Scalar::from_int(c);
    for (a, b) in acc.iter_mut().zip(v) {
        *a = &*a + &(&c * b);
    }
}

impl Dense {
    pub fn new(a: &AlgebraPresentation) -> Dense {
        let n = a.dim();
        let degrees: Vec<Vec<i64>> = (0..n).map(|i| a.space().degree(i).coords().to_vec()).collect();
        let matrix = a.grading().matrix();
        let sign = (0..n)
            .map(|i| (0..n).map(|j| sign_of(matrix, &degrees[i], &degrees[j])).collect())
            .collect();
        let m = a.alpha().matrix();
        let alpha = (0..n).map(|i| (0..n).map(|r| m.get(r, i).clone()).collect()).collect();
        let mut table = BTreeMap::new();
        for role in a.roles() {
            let p = a.product(role).unwrap();
            let mut t = vec![vec![zero(n); n]; n];
            for (i, j, entries) in p.entries() {
                for (k, c) in entries {
                    t[i][j][*k] = c.clone();
                }
            }
            table.insert(role.to_string(), t);
        }
        Dense {
            n,
            names: a.space().names().to_vec(),
            sign,
            alpha,
            table,
        }
    }

    pub fn has(&self, role: &str) -> bool {
        self.table.contains_key(role)
    }

    fn e(&self, i: usize) -> Vec<Scalar> {
        let mut v = zero(self.n);
        v[i] = Scalar::one();
        v
    }

    pub fn mul(&self, role: &str, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let t = &self.table[role];
        let mut out = zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let c = &x[i] * &y[j];
                if c.is_zero() {
                    continue;
                }
                for k in 0..self.n {
                    out[k] = &out[k] + &(&c * &t[i][j][k]);
                }
            }
        }
        out
    }

    pub fn al(&self, x: &[Scalar]) -> Vec<Scalar> {
        let mut out = zero(self.n);
        for i in 0..self.n {
            for r in 0..self.n {
                out[r] = &out[r] + &(&x[i] * &self.alpha[i][r]);
            }
        }
        out
    }

    fn s(&self, i: usize, j: usize) -> i64 {
        self.sign[i][j]
    }

    /// Lexicographically first pair where `alpha` fails to be multiplicative.
    pub fn multiplicative_failure(&self, role: &str) -> Option<Vec<usize>> {
        for i in 0..self.n {
            for j in 0..self.n {
                let lhs = self.al(&self.mul(role, &self.e(i), &self.e(j)));
                let rhs = self.mul(role, &self.al(&self.e(i)), &self.al(&self.e(j)));
                if lhs != rhs {
                    return Some(vec![i, j]);
                }
            }
        }
        None
    }

    /// The defect of `id` at a basis tuple, written directly from the
    /// defining equations (left side minus right side).
    pub fn defect(&self, id: IdentityId, roles: &[&str], t: &[usize]) -> Vec<Scalar> {
        use IdentityId::*;
        let n = self.n;
        let p = |r: usize, x: &[Scalar], y: &[Scalar]| self.mul(roles[r], x, y);
        let e = |i: usize| self.e(i);
        let a = |i: usize| self.al(&self.e(i));
        let aa = |i: usize| self.al(&self.al(&self.e(i)));
        let mut d = zero(n);
        match id {
            HomAssoc => {
                let (x, y, z) = (t[0], t[1], t[2]);
                plus(&mut d, 1, &p(0, &a(x), &p(0, &e(y), &e(z))));
                plus(&mut d, -1, &p(0, &p(0, &e(x), &e(y)), &a(z)));
            }
            EpsComm => {
                let (x, y) = (t[0], t[1]);
                plus(&mut d, 1, &p(0, &e(x), &e(y)));
                plus(&mut d, -self.s(x, y), &p(0, &e(y), &e(x)));
            }
            NovikovLsym => {
                let (x, y, z) = (t[0], t[1], t[2]);
                plus(&mut d, 1, &p(0, &p(0, &e(x), &e(y)), &a(z)));
                plus(&mut d, -1, &p(0, &a(x), &p(0, &e(y), &e(z))));
                let mut r = zero(n);
                plus(&mut r, 1, &p(0, &p(0, &e(y), &e(x)), &a(z)));
                plus(&mut r, -1, &p(0, &a(y), &p(0, &e(x), &e(z))));
                plus(&mut d, -self.s(x, y), &r);
            }
            NovikovRcomm => {
                let (x, y, z) = (t[0], t[1], t[2]);
                plus(&mut d, 1, &p(0, &p(0, &e(x), &e(y)), &a(z)));
                plus(&mut d, -self.s(y, z), &p(0, &p(0, &e(x), &e(z)), &a(y)));
            }
            LieSkew => {
                let (x, y) = (t[0], t[1]);
                plus(&mut d, 1, &p(0, &e(x), &e(y)));
                plus(&mut d, self.s(x, y), &p(0, &e(y), &e(x)));
            }
            LieJacobi => {
                let (x, y, z) = (t[0], t[1], t[2]);
                for (u, v, w) in [(x, y, z), (y, z, x), (z, x, y)] {
                    plus(&mut d, self.s(w, u), &p(0, &a(u), &p(0, &e(v), &e(w))));
                }
            }
            HnpCompat1 => {
                let (x, y, z) = (t[0], t[1], t[2]);
                plus(&mut d, 1, &p(1, &p(0, &e(x), &e(y)), &a(z)));
                plus(&mut d, -self.s(y, z), &p(0, &p(1, &e(x), &e(z)), &a(y)));
            }
            HnpCompat2 => {
                let (x, y, z) = (t[0], t[1], t[2]);
                plus(&mut d, 1, &p(0, &p(1, &e(x), &e(y)), &a(z)));
                plus(&mut d, -1, &p(1, &a(x), &p(0, &e(y), &e(z))));
                let mut r = zero(n);
                plus(&mut r, 1, &p(0, &p(1, &e(y), &e(x)), &a(z)));
                plus(&mut r, -1, &p(1, &a(y), &p(0, &e(x), &e(z))));
                plus(&mut d, -self.s(x, y), &r);
            }
            TransposedLeibniz => {
                let (x, y, z) = (t[0], t[1], t[2]);
                plus(&mut d, 2, &p(0, &a(z), &p(1, &e(x), &e(y))));
                plus(&mut d, -1, &p(1, &p(0, &e(z), &e(x)), &a(y)));
                plus(&mut d, -self.s(z, x), &p(1, &a(x), &p(0, &e(z), &e(y))));
            }
            PoissonLeibniz => {
                let (x, y, z) = (t[0], t[1], t[2]);
                plus(&mut d, 1, &p(1, &a(x), &p(0, &e(y), &e(z))));
                plus(&mut d, -self.s(x, y), &p(0, &a(y), &p(1, &e(x), &e(z))));
                let sxy_z = self.s(x, z) * self.s(y, z);
                plus(&mut d, -sxy_z, &p(0, &a(z), &p(1, &e(x), &e(y))));
            }
            LeftAssociator => {
                let (x, y, z) = (t[0], t[1], t[2]);
                plus(&mut d, 1, &p(1, &p(0, &e(x), &e(y)), &a(z)));
                plus(&mut d, -1, &p(1, &a(x), &p(0, &e(y), &e(z))));
            }
            HnpLemmaAssoc => {
                let (x, y, z) = (t[0], t[1], t[2]);
                plus(&mut d, 1, &p(1, &p(0, &e(x), &e(y)), &a(z)));
                plus(&mut d, -1, &p(0, &a(x), &p(1, &e(y), &e(z))));
            }
            GdCompat => {
                // α(y)·[x,z] = ε(y,x)[α(x),y·z] − ε(x+y,z)[α(z),y·x]
                //              + [y,x]·α(z) − ε(x,z)[y,z]·α(x)
                let (x, y, z) = (t[0], t[1], t[2]);
                plus(&mut d, 1, &p(0, &a(y), &p(1, &e(x), &e(z))));
                plus(&mut d, -self.s(y, x), &p(1, &a(x), &p(0, &e(y), &e(z))));
                let sxy_z = self.s(x, z) * self.s(y, z);
                plus(&mut d, sxy_z, &p(1, &a(z), &p(0, &e(y), &e(x))));
                plus(&mut d, -1, &p(0, &p(1, &e(y), &e(x)), &a(z)));
                plus(&mut d, self.s(x, z), &p(0, &p(1, &e(y), &e(z)), &a(x)));
            }
            Gi1 => {
                let (x, y, z) = (t[0], t[1], t[2]);
                for (u, v, w) in [(x, y, z), (y, z, x), (z, x, y)] {
                    plus(&mut d, self.s(w, u), &p(0, &a(u), &p(1, &e(v), &e(w))));
                }
            }
            Gi2 => {
                let (h, x, y, z) = (t[0], t[1], t[2], t[3]);
                for (u, v, w) in [(x, y, z), (y, z, x), (z, x, y)] {
                    let inner = p(0, &a(h), &p(1, &e(u), &e(v)));
                    plus(&mut d, self.s(w, u), &p(1, &inner, &aa(w)));
                }
            }
            Gi3 => {
                let (h, x, y, z) = (t[0], t[1], t[2], t[3]);
                for (u, v, w) in [(x, y, z), (y, z, x), (z, x, y)] {
                    let left = p(0, &a(h), &a(u));
                    let right = p(1, &a(v), &a(w));
                    plus(&mut d, self.s(w, u), &p(1, &left, &right));
                }
            }
            Gi4 => {
                let (h, x, y, z) = (t[0], t[1], t[2], t[3]);
                for (u, v, w) in [(x, y, z), (y, z, x), (z, x, y)] {
                    let left = p(1, &a(h), &a(u));
                    let right = p(1, &a(v), &a(w));
                    plus(&mut d, self.s(w, u), &p(0, &left, &right));
                }
            }
        }
        d
    }

    /// Verdict of `id` on `roles`, scanning tuples in lexicographic order.
    pub fn check(&self, id: IdentityId, roles: &[&str]) -> DenseVerdict {
        if id.requires_multiplicative() && roles.iter().any(|r| self.multiplicative_failure(r).is_some()) {
            return DenseVerdict::Precondition;
        }
        let arity = id.arity();
        let mut t = vec![0usize; arity];
        loop {
            let d = self.defect(id, roles, &t);
            if d.iter().any(|c| !c.is_zero()) {
                return DenseVerdict::Fail(t, d);
            }
            let mut k = arity;
            loop {
                if k == 0 {
                    return DenseVerdict::Pass;
                }
                k -= 1;
                t[k] += 1;
                if t[k] < self.n {
                    break;
                }
                t[k] = 0;
            }
        }
    }

    /// Nonzero coordinates of `v` keyed by basis name.
    pub fn label(&self, v: &[Scalar]) -> Vec<(String, Scalar)> {
        v.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.names[i].clone(), c.clone()))
            .collect()
    }
}

/// Every `(identity, roles)` pair a presentation can be checked against:
/// one-role identities on each role present, multi-role identities on their
/// default roles when present.
pub fn applicable(a: &AlgebraPresentation) -> Vec<(IdentityId, Vec<String>)> {
    let roles: Vec<String> = a.roles().map(str::to_string).collect();
    let mut out = Vec::new();
    for id in IdentityId::ALL {
        let defaults = id.default_roles();
        if defaults.len() == 1 {
            for r in &roles {
                out.push((id, vec![r.clone()]));
            }
        } else if defaults.iter().all(|r| a.has_role(r)) {
            out.push((id, defaults.iter().map(|r| r.to_string()).collect()));
        }
    }
    out
}

/// Differences between the sparse kernel and the dense evaluator on every
/// applicable identity of `a`.
pub fn kernel_vs_dense(a: &AlgebraPresentation, opts: &homcolor::CheckOptions) -> Vec<String> {
    use homcolor::Outcome;
    let dense = Dense::new(a);
    let mut out = Vec::new();
    for (id, roles) in applicable(a) {
        let roles: Vec<&str> = roles.iter().map(String::as_str).collect();
        let report = homcolor::check_identity(a, id, &roles, opts).unwrap();
        let expected = dense.check(id, &roles);
        let agree = match (&report.outcome, &expected) {
            (Outcome::Pass, DenseVerdict::Pass) => true,
            (Outcome::Precondition { .. }, DenseVerdict::Precondition) => true,
            (Outcome::Fail(w), DenseVerdict::Fail(t, d)) => w.tuple == *t && w.defect == dense.label(d),
            _ => false,
        };
        if !agree {
            out.push(format!("{}: kernel {:?}, dense {:?}", report.label(), report.outcome, expected));
        }
    }
    out
}

/// Integer weight vectors `w` in `[-2, 2]^n` with `w_k = w_i + w_j` for every
/// stored `e_i ∘ e_j` term on `e_k`, and `w_r = w_c` for every nonzero twist
/// entry. Each yields the automorphisms `e_i ↦ t^{w_i} e_i`.
pub fn weight_vectors(a: &AlgebraPresentation) -> Vec<Vec<i64>> {
    let n = a.dim();
    let mut constraints: Vec<(Vec<usize>, usize)> = Vec::new();
    for p in a.products().values() {
        for (i, j, entries) in p.entries() {
            for (k, _) in entries {
                constraints.push((vec![i, j], *k));
            }
        }
    }
    for (r, c, v) in a.alpha().matrix().entries() {
        if !v.is_zero() {
            constraints.push((vec![c], r));
        }
    }
    let mut out = Vec::new();
    let mut w = vec![-2i64; n];
    loop {
        if constraints.iter().all(|(src, k)| src.iter().map(|i| w[*i]).sum::<i64>() == w[*k]) {
            out.push(w.clone());
        }
        let mut slot = 0;
        loop {
            if slot == n {
                return out;
            }
            w[slot] += 1;
            if w[slot] <= 2 {
                break;
            }
            w[slot] = -2;
            slot += 1;
        }
    }
}

/// `e_i ↦ χ(deg e_i) t^{w_i} e_i`, where `χ` flips the sign on the degree
/// coordinates selected by `flips`.
pub fn diagonal_automorphism(a: &AlgebraPresentation, w: &[i64], t: &Scalar, flips: &[bool]) -> homcolor::Matrix {
    let entries = (0..a.dim())
        .map(|i| {
            let mut c = Scalar::one();
            for _ in 0..w[i].unsigned_abs() {
                c = &c * t;
            }
            if w[i] < 0 {
                let inv = t.as_rational().expect("rational t").recip();
                c = Scalar::one();
                for _ in 0..w[i].unsigned_abs() {
                    c = c.scale(&inv);
                }
            }
            let odd: i64 = a
                .space()
                .degree(i)
                .coords()
                .iter()
                .zip(flips)
                .filter(|(_, f)| **f)
                .map(|(d, _)| *d)
                .sum();
            if odd.rem_euclid(2) == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    homcolor::Matrix::diagonal(entries)
}
