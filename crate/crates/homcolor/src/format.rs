//! JSON documents for presentations, modules and matched pairs.
//!
//! Scalars are written in the scalar grammar, matrices row-major, and
//! products as `[x, y, [[z, c], ...]]` entries listing nonzero constants.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Map, Value};

use crate::algebra::{AlgebraPresentation, BilinearProduct, GradedSpace};
use crate::constructions::MatchedPairData;
use crate::error::{Error, Result};
use crate::grading::{AbelianGroupSpec, Bicharacter, GroupElement};
use crate::linalg::Matrix;
use crate::representations::{ActionBundle, ActionRole};
use crate::scalar::{Scalar, ScalarContext};

pub const FORMAT_VERSION: u64 = 1;

/// A presentation with an optional module over it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub algebra: AlgebraPresentation,
    pub module: Option<ActionBundle>,
}

fn bad(field: &str, message: impl Into<String>) -> Error {
    Error::format(field, message)
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        bad(
            &format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

fn object<'a>(v: &'a Value, field: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(field, "expected an object"))
}

fn array<'a>(v: &'a Value, field: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(field, "expected an array"))
}

fn string<'a>(v: &'a Value, field: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(field, "expected a string"))
}

fn integer(v: &Value, field: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| bad(field, "expected an integer"))
}

fn check_version(obj: &Map<String, Value>, field: &str) -> Result<()> {
    match obj.get("format") {
        None => Ok(()),
        Some(v) if v.as_u64() == Some(FORMAT_VERSION) => Ok(()),
        Some(v) => Err(bad(
            &join(field, "format"),
            format!("unsupported format version {v}"),
        )),
    }
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn scalar(ctx: &ScalarContext, v: &Value, field: &str) -> Result<Scalar> {
    match v {
        Value::String(s) => ctx.parse(s).map_err(|e| bad(field, e.to_string())),
        Value::Number(n) => n
            .as_i64()
            .map(Scalar::from_int)
            .ok_or_else(|| bad(field, "numbers must be integers; write fractions as strings")),
        _ => Err(bad(field, "expected a scalar")),
    }
}

fn rational(v: &Value, field: &str) -> Result<BigRational> {
    let s = scalar(&ScalarContext::new(), v, field)?;
    s.as_rational().ok_or_else(|| bad(field, "expected a rational number"))
}

fn matrix(ctx: &ScalarContext, v: &Value, field: &str, rows: usize, cols: usize) -> Result<Matrix> {
    let rs = array(v, field)?;
    if rs.len() != rows {
        return Err(bad(field, format!("expected {rows} rows, found {}", rs.len())));
    }
    let mut out = Vec::with_capacity(rows);
    for (r, row) in rs.iter().enumerate() {
        let f = format!("{field}[{r}]");
        let cs = array(row, &f)?;
        if cs.len() != cols {
            return Err(bad(&f, format!("expected {cols} entries, found {}", cs.len())));
        }
        out.push(
            cs.iter()
                .enumerate()
                .map(|(c, x)| scalar(ctx, x, &format!("{f}[{c}]")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    if rows == 0 {
        return Ok(Matrix::zero(0, cols));
    }
    Matrix::from_rows(out)
}

fn grading(obj: &Map<String, Value>, field: &str) -> Result<Bicharacter> {
    let group = match obj.get("group") {
        None => AbelianGroupSpec::trivial(),
        Some(g) => {
            let f = join(field, "group");
            let go = object(g, &f)?;
            let torsion = match go.get("torsion") {
                None => Vec::new(),
                Some(t) => array(t, &join(&f, "torsion"))?
                    .iter()
                    .enumerate()
                    .map(|(i, m)| {
                        let tf = format!("{}[{i}]", join(&f, "torsion"));
                        let m = integer(m, &tf)?;
                        u32::try_from(m).map_err(|_| bad(&tf, "modulus out of range"))
                    })
                    .collect::<Result<Vec<_>>>()?,
            };
            let free = match go.get("free") {
                None => 0,
                Some(n) => usize::try_from(integer(n, &join(&f, "free"))?)
                    .map_err(|_| bad(&join(&f, "free"), "expected a nonnegative integer"))?,
            };
            AbelianGroupSpec::new(torsion, free).map_err(|e| bad(&f, e.to_string()))?
        }
    };
    match obj.get("bichar") {
        None => Ok(Bicharacter::trivial(group)),
        Some(b) => {
            let f = join(field, "bichar");
            let rows = array(b, &f)?
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    array(row, &format!("{f}[{i}]"))?
                        .iter()
                        .enumerate()
                        .map(|(j, x)| integer(x, &format!("{f}[{i}][{j}]")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Bicharacter::new(group, rows).map_err(|e| bad(&f, e.to_string()))
        }
    }
}

fn scalar_context(obj: &Map<String, Value>, field: &str) -> Result<ScalarContext> {
    let mut ctx = ScalarContext::new();
    if let Some(ps) = obj.get("params") {
        let f = join(field, "params");
        for (i, p) in array(ps, &f)?.iter().enumerate() {
            let pf = format!("{f}[{i}]");
            ctx.add_param(string(p, &pf)?).map_err(|e| bad(&pf, e.to_string()))?;
        }
    }
    if let Some(rs) = obj.get("roots") {
        let f = join(field, "roots");
        for (name, q) in object(rs, &f)? {
            let rf = join(&f, name);
            ctx.add_root(name, rational(q, &rf)?)
                .map_err(|e| bad(&rf, e.to_string()))?;
        }
    }
    Ok(ctx)
}

fn space(g: &Bicharacter, v: &Value, field: &str) -> Result<GradedSpace> {
    let mut names = Vec::new();
    let mut degrees = Vec::new();
    for (i, b) in array(v, field)?.iter().enumerate() {
        let f = format!("{field}[{i}]");
        let o = object(b, &f)?;
        let name = string(o.get("name").ok_or_else(|| bad(&f, "missing `name`"))?, &join(&f, "name"))?;
        let deg = match o.get("deg") {
            None => g.group().zero(),
            Some(d) => {
                let df = join(&f, "deg");
                let coords = array(d, &df)?
                    .iter()
                    .enumerate()
                    .map(|(k, x)| integer(x, &format!("{df}[{k}]")))
                    .collect::<Result<Vec<_>>>()?;
                g.group().element(&coords).map_err(|e| bad(&df, e.to_string()))?
            }
        };
        names.push(name.to_string());
        degrees.push(deg);
    }
    GradedSpace::new(g, names, degrees).map_err(|e| bad(field, e.to_string()))
}

fn index(sp: &GradedSpace, v: &Value, field: &str) -> Result<usize> {
    let name = string(v, field)?;
    sp.index_of(name)
        .ok_or_else(|| bad(field, format!("unknown basis element `{name}`")))
}

fn product(ctx: &ScalarContext, sp: &GradedSpace, v: &Value, field: &str) -> Result<BilinearProduct> {
    let n = sp.dim();
    let mut p = BilinearProduct::zero(n);
    let mut seen = vec![false; n * n];
    for (e, entry) in array(v, field)?.iter().enumerate() {
        let f = format!("{field}[{e}]");
        let parts = array(entry, &f)?;
        if parts.len() != 3 {
            return Err(bad(&f, "expected [x, y, [[z, scalar], ...]]"));
        }
        let i = index(sp, &parts[0], &format!("{f}[0]"))?;
        let j = index(sp, &parts[1], &format!("{f}[1]"))?;
        if std::mem::replace(&mut seen[i * n + j], true) {
            return Err(bad(&f, format!("duplicate entry for ({}, {})", sp.name(i), sp.name(j))));
        }
        let mut value = vec![Scalar::zero(); n];
        let tf = format!("{f}[2]");
        for (t, term) in array(&parts[2], &tf)?.iter().enumerate() {
            let termf = format!("{tf}[{t}]");
            let pair = array(term, &termf)?;
            if pair.len() != 2 {
                return Err(bad(&termf, "expected [basis name, scalar]"));
            }
            let k = index(sp, &pair[0], &format!("{termf}[0]"))?;
            value[k] += &scalar(ctx, &pair[1], &format!("{termf}[1]"))?;
        }
        p.set(i, j, &value);
    }
    Ok(p)
}

fn presentation_from_object(obj: &Map<String, Value>, field: &str) -> Result<AlgebraPresentation> {
    check_version(obj, field)?;
    let g = grading(obj, field)?;
    let ctx = scalar_context(obj, field)?;
    let sp = space(
        &g,
        obj.get("basis").ok_or_else(|| bad(field, "missing `basis`"))?,
        &join(field, "basis"),
    )?;
    let n = sp.dim();
    let mut a = AlgebraPresentation::new(g, sp, ctx.clone());
    if let Some(ps) = obj.get("products") {
        let f = join(field, "products");
        for (role, entries) in object(ps, &f)? {
            let rf = join(&f, role);
            let p = product(&ctx, a.space(), entries, &rf)?;
            a.insert_product(role, p).map_err(|e| bad(&rf, e.to_string()))?;
        }
    }
    if let Some(al) = obj.get("alpha") {
        let f = join(field, "alpha");
        let m = matrix(&ctx, al, &f, n, n)?;
        a = a.with_alpha(m).map_err(|e| bad(&f, e.to_string()))?;
    }
    Ok(a)
}

/// Actions keyed by role, then by algebra basis name. Missing basis
/// elements act by zero.
fn actions(
    ctx: &ScalarContext,
    a: &AlgebraPresentation,
    module: &GradedSpace,
    v: &Value,
    field: &str,
) -> Result<BTreeMap<ActionRole, Vec<Matrix>>> {
    let m = module.dim();
    let mut out = BTreeMap::new();
    for (role, per_basis) in object(v, field)? {
        let rf = join(field, role);
        let r: ActionRole = role.parse().map_err(|_| bad(&rf, format!("unknown action role `{role}`")))?;
        let mut mats = vec![Matrix::zero(m, m); a.dim()];
        for (name, mv) in object(per_basis, &rf)? {
            let mf = join(&rf, name);
            let i = a
                .space()
                .index_of(name)
                .ok_or_else(|| bad(&mf, format!("unknown algebra basis element `{name}`")))?;
            mats[i] = matrix(ctx, mv, &mf, m, m)?;
        }
        out.insert(r, mats);
    }
    Ok(out)
}

fn bundle(a: &AlgebraPresentation, v: &Value, field: &str) -> Result<ActionBundle> {
    let obj = object(v, field)?;
    let module = space(
        a.grading(),
        obj.get("basis").ok_or_else(|| bad(field, "missing `basis`"))?,
        &join(field, "basis"),
    )?;
    let m = module.dim();
    let beta = match obj.get("beta") {
        None => Matrix::identity(m),
        Some(b) => matrix(a.scalars(), b, &join(field, "beta"), m, m)?,
    };
    let acts = match obj.get("actions") {
        None => BTreeMap::new(),
        Some(x) => actions(a.scalars(), a, &module, x, &join(field, "actions"))?,
    };
    ActionBundle::new(a, module, beta, acts).map_err(|e| bad(field, e.to_string()))
}

pub fn parse_document(text: &str) -> Result<Document> {
    let v = parse_json(text)?;
    document_from_value(&v)
}

pub fn document_from_value(v: &Value) -> Result<Document> {
    let obj = object(v, "document")?;
    let algebra = presentation_from_object(obj, "")?;
    let module = match obj.get("module") {
        None => None,
        Some(m) => Some(bundle(&algebra, m, "module")?),
    };
    Ok(Document { algebra, module })
}

pub fn parse_presentation(text: &str) -> Result<AlgebraPresentation> {
    Ok(parse_document(text)?.algebra)
}

pub fn parse_matched_pair(text: &str) -> Result<MatchedPairData> {
    let v = parse_json(text)?;
    matched_pair_from_value(&v)
}

pub fn matched_pair_from_value(v: &Value) -> Result<MatchedPairData> {
    let obj = object(v, "document")?;
    check_version(obj, "")?;
    let side = |key: &str| -> Result<AlgebraPresentation> {
        let sv = obj.get(key).ok_or_else(|| bad("document", format!("missing `{key}`")))?;
        presentation_from_object(object(sv, key)?, key)
    };
    let a = side("a")?;
    let b = side("b")?;
    if a.grading() != b.grading() {
        return Err(bad("b", "both algebras must share the group and bicharacter"));
    }
    let ctx = a.scalars().merge(b.scalars()).map_err(|e| bad("b", e.to_string()))?;
    let cross = |key: &str, src: &AlgebraPresentation, dst: &AlgebraPresentation| -> Result<ActionBundle> {
        let acts = match obj.get(key) {
            None => BTreeMap::new(),
            Some(x) => actions(&ctx, src, dst.space(), x, key)?,
        };
        ActionBundle::new(src, dst.space().clone(), dst.alpha().matrix().clone(), acts)
            .map_err(|e| bad(key, e.to_string()))
    };
    let a_on_b = cross("a_on_b", &a, &b)?;
    let b_on_a = cross("b_on_a", &b, &a)?;
    MatchedPairData::new(a, b, a_on_b, b_on_a)
}

fn scalar_json(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        m.row_vecs()
            .iter()
            .map(|row| Value::Array(row.iter().map(scalar_json).collect()))
            .collect(),
    )
}

fn degree_json(d: &GroupElement) -> Value {
    json!(d.coords())
}

fn space_json(sp: &GradedSpace) -> Value {
    Value::Array(
        (0..sp.dim())
            .map(|i| json!({"name": sp.name(i), "deg": degree_json(sp.degree(i))}))
            .collect(),
    )
}

fn rational_json(q: &BigRational) -> Value {
    if q.denom().is_one() {
        if let Ok(n) = i64::try_from(q.numer().clone()) {
            return json!(n);
        }
    }
    Value::String(Scalar::from_rational(q.clone()).to_string())
}

fn presentation_map(a: &AlgebraPresentation) -> Map<String, Value> {
    let g = a.grading();
    let sp = a.space();
    let mut products = Map::new();
    for (role, p) in a.products() {
        let entries: Vec<Value> = p
            .entries()
            .map(|(i, j, terms)| {
                let terms: Vec<Value> = terms
                    .iter()
                    .map(|(k, s)| json!([sp.name(*k), scalar_json(s)]))
                    .collect();
                json!([sp.name(i), sp.name(j), terms])
            })
            .collect();
        products.insert(role.clone(), Value::Array(entries));
    }
    let roots: Map<String, Value> = a
        .scalars()
        .roots()
        .map(|(n, q)| (n.to_string(), rational_json(q)))
        .collect();
    let mut obj = Map::new();
    obj.insert("format".into(), json!(FORMAT_VERSION));
    obj.insert(
        "group".into(),
        json!({"torsion": g.group().torsion(), "free": g.group().free()}),
    );
    obj.insert("bichar".into(), json!(g.matrix()));
    obj.insert("basis".into(), space_json(sp));
    let params: Vec<&str> = a.scalars().params().collect();
    if !params.is_empty() {
        obj.insert("params".into(), json!(params));
    }
    if !roots.is_empty() {
        obj.insert("roots".into(), Value::Object(roots));
    }
    obj.insert("products".into(), Value::Object(products));
    obj.insert("alpha".into(), matrix_json(a.alpha().matrix()));
    obj
}

pub fn presentation_to_value(a: &AlgebraPresentation) -> Value {
    Value::Object(presentation_map(a))
}

fn actions_json(m: &ActionBundle) -> Value {
    let alg = m.algebra_space();
    let mut out = Map::new();
    for role in m.roles() {
        let mats = m.action(role).expect("listed role");
        let per: Map<String, Value> = mats
            .iter()
            .enumerate()
            .filter(|(_, mat)| !mat.is_zero())
            .map(|(i, mat)| (alg.name(i).to_string(), matrix_json(mat)))
            .collect();
        out.insert(role.name().to_string(), Value::Object(per));
    }
    Value::Object(out)
}

pub fn bundle_to_value(m: &ActionBundle) -> Value {
    json!({
        "basis": space_json(m.module()),
        "beta": matrix_json(m.beta().matrix()),
        "actions": actions_json(m),
    })
}

pub fn document_to_value(a: &AlgebraPresentation, m: Option<&ActionBundle>) -> Value {
    let mut obj = presentation_map(a);
    if let Some(m) = m {
        obj.insert("module".into(), bundle_to_value(m));
    }
    Value::Object(obj)
}

pub fn matched_pair_to_value(p: &MatchedPairData) -> Value {
    let side = |a: &AlgebraPresentation| {
        let mut m = presentation_map(a);
        m.remove("format");
        Value::Object(m)
    };
    json!({
        "format": FORMAT_VERSION,
        "a": side(p.a()),
        "b": side(p.b()),
        "a_on_b": actions_json(p.a_on_b()),
        "b_on_a": actions_json(p.b_on_a()),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
