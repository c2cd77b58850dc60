//! Graded spaces, even maps, sparse bilinear products and presentations.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::grading::{Bicharacter, GroupElement};
use crate::linalg::{self, Matrix, Vector};
use crate::report::{CheckReport, Outcome, Witness};
use crate::scalar::{Scalar, ScalarContext, Symbol};

/// Ordered homogeneous basis with one degree per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    names: Vec<String>,
    degrees: Vec<GroupElement>,
    index: HashMap<String, usize>,
}

impl GradedSpace {
    pub fn new(grading: &Bicharacter, names: Vec<String>, degrees: Vec<GroupElement>) -> Result<Self> {
        if names.len() != degrees.len() {
            return Err(Error::Dimension("basis names and degrees differ in length".into()));
        }
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::Invalid("empty basis name".into()));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate basis name `{n}`")));
            }
        }
        if let Some(d) = degrees.iter().find(|d| !grading.group().contains(d)) {
            return Err(Error::Grading(format!("degree {:?} is not a group element", d.coords())));
        }
        Ok(GradedSpace {
            names,
            degrees,
            index,
        })
    }

    pub fn empty() -> Self {
        GradedSpace {
            names: Vec::new(),
            degrees: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degree(&self, i: usize) -> &GroupElement {
        &self.degrees[i]
    }

    pub fn degrees(&self) -> &[GroupElement] {
        &self.degrees
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Nonzero coordinates of `v` keyed by basis name.
    pub fn label(&self, v: &[Scalar]) -> Vec<(String, Scalar)> {
        v.iter()
            .enumerate()
            .filter(|(_, s)| !s.is_zero())
            .map(|(i, s)| (self.names[i].clone(), s.clone()))
            .collect()
    }
}

/// True if entry `(j, i)` vanishes unless `deg_dst(j) = deg_src(i) + shift`.
pub fn respects_degrees(
    grading: &Bicharacter,
    m: &Matrix,
    src: &GradedSpace,
    dst: &GradedSpace,
    shift: Option<&GroupElement>,
) -> Option<(usize, usize)> {
    if m.rows() != dst.dim() || m.cols() != src.dim() {
        return Some((usize::MAX, usize::MAX));
    }
    for (r, c, s) in m.entries() {
        if s.is_zero() {
            continue;
        }
        let target = match shift {
            Some(d) => grading.group().add(src.degree(c), d),
            None => src.degree(c).clone(),
        };
        if dst.degree(r) != &target {
            return Some((r, c));
        }
    }
    None
}

/// A degree-preserving endomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenLinearMap(Matrix);

impl EvenLinearMap {
    pub fn new(grading: &Bicharacter, space: &GradedSpace, m: Matrix) -> Result<Self> {
        match respects_degrees(grading, &m, space, space, None) {
            None => Ok(EvenLinearMap(m)),
            Some((usize::MAX, _)) => Err(Error::Dimension(format!(
                "map is {}x{}, space has dimension {}",
                m.rows(),
                m.cols(),
                space.dim()
            ))),
            Some((r, c)) => Err(Error::Invalid(format!(
                "map is not even: entry ({}, {}) links different degrees",
                space.name(r),
                space.name(c)
            ))),
        }
    }

    pub fn identity(n: usize) -> Self {
        EvenLinearMap(Matrix::identity(n))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn apply(&self, x: &[Scalar]) -> Vector {
        self.0.apply(x)
    }

    pub fn compose(&self, other: &EvenLinearMap) -> EvenLinearMap {
        EvenLinearMap(self.0.compose(&other.0).expect("endomorphisms of one space"))
    }

    pub fn pow(&self, k: u64) -> EvenLinearMap {
        EvenLinearMap(self.0.pow(k))
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    pub(crate) fn from_matrix_unchecked(m: Matrix) -> Self {
        EvenLinearMap(m)
    }
}

/// Structure constants `e_i ∘ e_j = Σ c_ij^k e_k`, stored row-major by
/// `(i, j)` with entries sorted by `k`. Missing products are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearProduct {
    n: usize,
    table: Vec<Vec<(usize, Scalar)>>,
}

impl BilinearProduct {
    pub fn zero(n: usize) -> Self {
        BilinearProduct {
            n,
            table: vec![Vec::new(); n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Overwrite `e_i ∘ e_j`.
    pub fn set(&mut self, i: usize, j: usize, value: &[Scalar]) {
        self.table[i * self.n + j] = value
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_zero())
            .map(|(k, s)| (k, s.clone()))
            .collect();
    }

    pub fn get(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i * self.n + j]
    }

    pub fn get_vector(&self, i: usize, j: usize) -> Vector {
        let mut v = linalg::zero_vector(self.n);
        for (k, s) in self.get(i, j) {
            v[*k] = s.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(Vec::is_empty)
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &[(usize, Scalar)])> {
        self.table
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_empty())
            .map(move |(idx, e)| (idx / self.n, idx % self.n, e.as_slice()))
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = linalg::zero_vector(self.n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let entries = self.get(i, j);
                if entries.is_empty() {
                    continue;
                }
                let c = xi * yj;
                for (k, s) in entries {
                    out[*k] += &(&c * s);
                }
            }
        }
        out
    }

    pub fn map_scalars(&self, f: &dyn Fn(&Scalar) -> Scalar) -> BilinearProduct {
        let mut p = BilinearProduct::zero(self.n);
        for (idx, entries) in self.table.iter().enumerate() {
            p.table[idx] = entries
                .iter()
                .map(|(k, s)| (*k, f(s)))
                .filter(|(_, s)| !s.is_zero())
                .collect();
        }
        p
    }

    /// Product `(x, y) ↦ m(x ∘ y)`.
    pub fn post_compose(&self, m: &Matrix) -> BilinearProduct {
        let mut p = BilinearProduct::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if !self.get(i, j).is_empty() {
                    p.set(i, j, &m.apply(&self.get_vector(i, j)));
                }
            }
        }
        p
    }
}

/// A graded space carrying named products and a twisting map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    grading: Bicharacter,
    space: GradedSpace,
    products: BTreeMap<String, BilinearProduct>,
    alpha: EvenLinearMap,
    scalars: ScalarContext,
    signs: Vec<i8>,
}

fn sign_table(grading: &Bicharacter, space: &GradedSpace) -> Vec<i8> {
    let n = space.dim();
    let mut t = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            t.push(grading.sign(space.degree(i), space.degree(j)));
        }
    }
    t
}

impl AlgebraPresentation {
    /// Presentation with no products and the identity twist.
    pub fn new(grading: Bicharacter, space: GradedSpace, scalars: ScalarContext) -> Self {
        let n = space.dim();
        let signs = sign_table(&grading, &space);
        AlgebraPresentation {
            grading,
            space,
            products: BTreeMap::new(),
            alpha: EvenLinearMap::identity(n),
            scalars,
            signs,
        }
    }

    pub fn with_alpha(mut self, alpha: Matrix) -> Result<Self> {
        self.alpha = EvenLinearMap::new(&self.grading, &self.space, alpha)?;
        Ok(self)
    }

    pub fn with_product(mut self, role: &str, product: BilinearProduct) -> Result<Self> {
        self.insert_product(role, product)?;
        Ok(self)
    }

    pub fn insert_product(&mut self, role: &str, product: BilinearProduct) -> Result<()> {
        if product.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "product `{role}` has dimension {}, space has {}",
                product.dim(),
                self.dim()
            )));
        }
        if role.is_empty() {
            return Err(Error::Invalid("empty role name".into()));
        }
        let group = self.grading.group();
        for (i, j, entries) in product.entries() {
            let target = group.add(self.space.degree(i), self.space.degree(j));
            if let Some((k, _)) = entries.iter().find(|(k, _)| self.space.degree(*k) != &target) {
                return Err(Error::Invalid(format!(
                    "product `{role}` is not graded: {} ∘ {} has a component on {}",
                    self.space.name(i),
                    self.space.name(j),
                    self.space.name(*k)
                )));
            }
        }
        self.products.insert(role.to_string(), product);
        Ok(())
    }

    pub fn remove_product(&mut self, role: &str) -> Option<BilinearProduct> {
        self.products.remove(role)
    }

    pub fn grading(&self) -> &Bicharacter {
        &self.grading
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn scalars(&self) -> &ScalarContext {
        &self.scalars
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn alpha(&self) -> &EvenLinearMap {
        &self.alpha
    }

    pub fn roles(&self) -> impl Iterator<Item = &str> {
        self.products.keys().map(String::as_str)
    }

    pub fn has_role(&self, role: &str) -> bool {
        self.products.contains_key(role)
    }

    pub fn product(&self, role: &str) -> Result<&BilinearProduct> {
        self.products
            .get(role)
            .ok_or_else(|| Error::MissingRole(role.to_string()))
    }

    pub fn products(&self) -> &BTreeMap<String, BilinearProduct> {
        &self.products
    }

    /// `eps(deg e_i, deg e_j)`.
    pub fn sign(&self, i: usize, j: usize) -> i8 {
        self.signs[i * self.dim() + j]
    }

    pub fn basis(&self, i: usize) -> Vector {
        linalg::unit(self.dim(), i)
    }

    pub fn mul(&self, role: &str, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
        let p = self.product(role)?;
        if x.len() != self.dim() || y.len() != self.dim() {
            return Err(Error::Dimension("vector length differs from algebra dimension".into()));
        }
        Ok(p.mul(x, y))
    }

    pub fn apply_alpha(&self, x: &[Scalar]) -> Vector {
        self.alpha.apply(x)
    }

    pub fn even_map(&self, m: Matrix) -> Result<EvenLinearMap> {
        EvenLinearMap::new(&self.grading, &self.space, m)
    }

    /// Replace parameters by scalars in every structure constant and the twist.
    pub fn substitute(&self, values: &BTreeMap<String, Scalar>) -> Result<AlgebraPresentation> {
        for name in values.keys() {
            if !self.scalars.has_param(name) {
                return Err(Error::Invalid(format!("`{name}` is not a declared parameter")));
            }
        }
        let f = |sym: &Symbol| match sym {
            Symbol::Param(n) => values.get(&**n).cloned(),
            Symbol::Root { .. } => None,
        };
        let mut out = self.clone();
        for p in out.products.values_mut() {
            *p = p.map_scalars(&|s| s.substitute(&f));
        }
        out.alpha = EvenLinearMap(self.alpha.matrix().map(|s| s.substitute(&f)));
        let mut ctx = ScalarContext::new();
        for p in self.scalars.params().filter(|p| !values.contains_key(*p)) {
            ctx.add_param(p)?;
        }
        for (n, q) in self.scalars.roots() {
            ctx.add_root(n, q.clone())?;
        }
        for v in values.values() {
            if !ctx.admits(v) {
                return Err(Error::Invalid(format!("substituted value `{v}` uses undeclared symbols")));
            }
        }
        out.scalars = ctx;
        Ok(out)
    }

    pub(crate) fn set_alpha_unchecked(&mut self, alpha: EvenLinearMap) {
        self.alpha = alpha;
    }

    pub fn is_multiplicative(&self, role: &str, m: &EvenLinearMap) -> Result<CheckReport> {
        let start = Instant::now();
        let p = self.product(role)?;
        let n = self.dim();
        let images: Vec<Vector> = (0..n).map(|i| m.apply(&self.basis(i))).collect();
        let mut outcome = Outcome::Pass;
        'scan: for i in 0..n {
            for j in 0..n {
                let lhs = m.apply(&p.get_vector(i, j));
                let rhs = p.mul(&images[i], &images[j]);
                let d = linalg::sub(&lhs, &rhs);
                if !linalg::is_zero(&d) {
                    outcome = Outcome::Fail(self.witness(&[i, j], &d));
                    break 'scan;
                }
            }
        }
        Ok(CheckReport::new(
            "MULTIPLICATIVE",
            vec![role.to_string()],
            outcome,
            start.elapsed(),
        ))
    }

    /// Checks `D(x∘y) = D(x)∘y + eps(d, x) x∘D(y)` with `D` of degree `d`.
    pub fn is_derivation(&self, role: &str, d_map: &Matrix, degree: &GroupElement) -> Result<CheckReport> {
        let start = Instant::now();
        let p = self.product(role)?;
        let n = self.dim();
        if let Some((r, c)) = respects_degrees(&self.grading, d_map, &self.space, &self.space, Some(degree)) {
            if r == usize::MAX {
                return Err(Error::Dimension("derivation matrix has the wrong shape".into()));
            }
            return Err(Error::Invalid(format!(
                "map is not homogeneous of the given degree at ({}, {})",
                self.space.name(r),
                self.space.name(c)
            )));
        }
        let images: Vec<Vector> = (0..n).map(|i| d_map.apply(&self.basis(i))).collect();
        let mut outcome = Outcome::Pass;
        'scan: for i in 0..n {
            let s = self.grading.sign(degree, self.space.degree(i));
            for j in 0..n {
                let lhs = d_map.apply(&p.get_vector(i, j));
                let rhs = linalg::Combination::new(n)
                    .add(&p.mul(&images[i], &self.basis(j)))
                    .plus(s, &p.mul(&self.basis(i), &images[j]))
                    .finish();
                let d = linalg::sub(&lhs, &rhs);
                if !linalg::is_zero(&d) {
                    outcome = Outcome::Fail(self.witness(&[i, j], &d));
                    break 'scan;
                }
            }
        }
        Ok(CheckReport::new(
            "DERIVATION",
            vec![role.to_string()],
            outcome,
            start.elapsed(),
        ))
    }

    pub(crate) fn witness(&self, tuple: &[usize], defect: &[Scalar]) -> Witness {
        Witness {
            tuple: tuple.to_vec(),
            names: tuple.iter().map(|i| self.space.name(*i).to_string()).collect(),
            defect: self.space.label(defect),
        }
    }
}

/// Checks that `f: A → B` intertwines every product of `A` and the twists.
pub fn is_morphism(f: &Matrix, a: &AlgebraPresentation, b: &AlgebraPresentation) -> Result<CheckReport> {
    let start = Instant::now();
    if a.grading != b.grading {
        return Err(Error::Grading("morphism between different grading contexts".into()));
    }
    let a_roles: Vec<&str> = a.roles().collect();
    let b_roles: Vec<&str> = b.roles().collect();
    if a_roles != b_roles {
        return Err(Error::MissingRole(format!(
            "role sets differ: {a_roles:?} vs {b_roles:?}"
        )));
    }
    match respects_degrees(&a.grading, f, &a.space, &b.space, None) {
        None => {}
        Some((usize::MAX, _)) => {
            return Err(Error::Dimension(format!(
                "map is {}x{}, expected {}x{}",
                f.rows(),
                f.cols(),
                b.dim(),
                a.dim()
            )))
        }
        Some((r, c)) => {
            return Err(Error::Invalid(format!(
                "map is not even at ({}, {})",
                b.space.name(r),
                a.space.name(c)
            )))
        }
    }
    let n = a.dim();
    let images: Vec<Vector> = (0..n).map(|i| f.apply(&a.basis(i))).collect();
    let mut outcome = Outcome::Pass;
    let mut roles = Vec::new();
    'roles: for role in &a_roles {
        let pa = a.product(role)?;
        let pb = b.product(role)?;
        for i in 0..n {
            for j in 0..n {
                let lhs = f.apply(&pa.get_vector(i, j));
                let rhs = pb.mul(&images[i], &images[j]);
                let d = linalg::sub(&lhs, &rhs);
                if !linalg::is_zero(&d) {
                    roles.push(role.to_string());
                    outcome = Outcome::Fail(Witness {
                        tuple: vec![i, j],
                        names: vec![a.space.name(i).into(), a.space.name(j).into()],
                        defect: b.space.label(&d),
                    });
                    break 'roles;
                }
            }
        }
    }
    if outcome == Outcome::Pass {
        for i in 0..n {
            let lhs = f.apply(&a.alpha.apply(&a.basis(i)));
            let rhs = b.alpha.apply(&images[i]);
            let d = linalg::sub(&lhs, &rhs);
            if !linalg::is_zero(&d) {
                roles.push("alpha".into());
                outcome = Outcome::Fail(Witness {
                    tuple: vec![i],
                    names: vec![a.space.name(i).into()],
                    defect: b.space.label(&d),
                });
                break;
            }
        }
    }
    Ok(CheckReport::new("MORPHISM", roles, outcome, start.elapsed()))
}
