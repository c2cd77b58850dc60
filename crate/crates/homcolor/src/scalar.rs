//! Exact scalars: polynomials with rational coefficients in named parameters
//! and adjoined square roots of positive rationals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ScalarError;

/// An indeterminate. Roots sort before parameters, then by name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// `r` with `r * r = radicand`.
    Root { name: Arc<str>, radicand: BigRational },
    /// A free polynomial parameter.
    Param(Arc<str>),
}

impl Symbol {
    pub fn name(&self) -> &str {
        match self {
            Symbol::Root { name, .. } => name,
            Symbol::Param(name) => name,
        }
    }
}

/// Product of symbols with positive exponents, sorted by symbol.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn symbol(sym: Symbol) -> Self {
        Monomial(vec![(sym, 1)])
    }

    /// Product of two reduced monomials, returned with the rational factor
    /// produced by `r * r = q` reductions.
    fn mul(&self, other: &Monomial) -> (Monomial, Option<BigRational>) {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let mut factor: Option<BigRational> = None;
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let pick = match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                (None, _) => std::cmp::Ordering::Greater,
            };
            match pick {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let (sym, e1) = &self.0[i];
                    let e = e1 + other.0[j].1;
                    match sym {
                        Symbol::Root { radicand, .. } => {
                            let mut f = factor.take().unwrap_or_else(BigRational::one);
                            for _ in 0..e / 2 {
                                f *= radicand;
                            }
                            factor = Some(f);
                            if e % 2 == 1 {
                                out.push((sym.clone(), 1));
                            }
                        }
                        Symbol::Param(_) => out.push((sym.clone(), e)),
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        (Monomial(out), factor)
    }
}

/// A canonical polynomial. Terms are sorted by monomial with nonzero
/// coefficients; zero is the empty term list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    terms: Vec<(Monomial, BigRational)>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        if q.is_zero() {
            Scalar::zero()
        } else {
            Scalar {
                terms: vec![(Monomial::one(), q)],
            }
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn param(name: &str) -> Self {
        Scalar::from_symbol(Symbol::Param(name.into()))
    }

    pub fn from_symbol(sym: Symbol) -> Self {
        Scalar {
            terms: vec![(Monomial::symbol(sym), BigRational::one())],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    /// The value if it is a plain rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms
            .iter()
            .flat_map(|(m, _)| m.0.iter().map(|(s, _)| s.clone()))
            .collect()
    }

    pub fn scale(&self, q: &BigRational) -> Scalar {
        if q.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * q))
                .collect(),
        }
    }

    fn add_ref(&self, other: &Scalar) -> Scalar {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                std::cmp::Ordering::Less => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((mb.clone(), cb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = ca + cb;
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().cloned());
        Scalar { terms: out }
    }

    fn mul_ref(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if let [(m, c)] = self.terms.as_slice() {
            if m.is_one() {
                return other.scale(c);
            }
        }
        if let [(m, c)] = other.terms.as_slice() {
            if m.is_one() {
                return self.scale(c);
            }
        }
        let mut acc: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let (m, f) = ma.mul(mb);
                let mut c = ca * cb;
                if let Some(f) = f {
                    c *= f;
                }
                let slot = acc.entry(m).or_insert_with(BigRational::zero);
                *slot += c;
            }
        }
        Scalar {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Root symbols must agree in radicand across operands, and distinct
    /// roots must have distinct radicands.
    pub fn compatible(&self, other: &Scalar) -> Result<(), ScalarError> {
        let mut by_name: BTreeMap<&str, &BigRational> = BTreeMap::new();
        let mut by_radicand: BTreeMap<&BigRational, &str> = BTreeMap::new();
        for s in self.terms.iter().chain(other.terms.iter()) {
            for (sym, _) in &s.0 .0 {
                if let Symbol::Root { name, radicand } = sym {
                    if let Some(q) = by_name.insert(name, radicand) {
                        if q != radicand {
                            return Err(ScalarError::ContextMismatch(format!(
                                "root `{name}` has radicands {q} and {radicand}"
                            )));
                        }
                    }
                    if let Some(n) = by_radicand.insert(radicand, name) {
                        if n != &**name {
                            return Err(ScalarError::ContextMismatch(format!(
                                "roots `{n}` and `{name}` share radicand {radicand}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.compatible(other)?;
        Ok(self.add_ref(other))
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.compatible(other)?;
        Ok(self.mul_ref(other))
    }

    /// Replace symbols by scalars; symbols mapped to `None` are kept.
    pub fn substitute(&self, f: &dyn Fn(&Symbol) -> Option<Scalar>) -> Scalar {
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = Scalar::from_rational(c.clone());
            for (sym, e) in &m.0 {
                let base = f(sym).unwrap_or_else(|| Scalar::from_symbol(sym.clone()));
                for _ in 0..*e {
                    t = t.mul_ref(&base);
                }
            }
            out = out.add_ref(&t);
        }
        out
    }

    /// Evaluate modulo a prime `p`, with symbol values supplied as residues.
    /// Returns `None` when a coefficient denominator vanishes mod `p`.
    pub fn eval_mod(&self, p: &BigInt, value: &dyn Fn(&Symbol) -> BigInt) -> Option<BigInt> {
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let den = c.denom().mod_floor(p);
            if den.is_zero() {
                return None;
            }
            let inv = den.modpow(&(p - 2u32), p);
            let mut t = (c.numer().mod_floor(p) * inv).mod_floor(p);
            for (sym, e) in &m.0 {
                t = (t * value(sym).modpow(&BigInt::from(*e), p)).mod_floor(p);
            }
            acc = (acc + t).mod_floor(p);
        }
        Some(acc)
    }

    /// Approximate value; only meant for sanity checks outside the kernel.
    pub fn to_f64(&self, value: &dyn Fn(&Symbol) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (sym, e) in &m.0 {
                    t *= value(sym).powi(*e as i32);
                }
                t
            })
            .sum()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self.add_ref(&rhs)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.add_ref(rhs)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = self.add_ref(rhs);
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self.add_ref(&-rhs)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.add_ref(&-rhs)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(mut self) -> Scalar {
        for (_, c) in &mut self.terms {
            *c = -c.clone();
        }
        self
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self.mul_ref(&rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.mul_ref(rhs)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let mut parts: Vec<String> = Vec::new();
            if m.is_one() || !mag.is_one() {
                parts.push(fmt_rational(&mag));
            }
            for (sym, e) in &m.0 {
                let s = match sym {
                    Symbol::Root { radicand, .. } => format!("sqrt({})", fmt_rational(radicand)),
                    Symbol::Param(name) => name.to_string(),
                };
                for _ in 0..*e {
                    parts.push(s.clone());
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Declared parameters and roots under which scalar text is parsed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScalarContext {
    params: BTreeSet<String>,
    roots: BTreeMap<String, BigRational>,
}

fn is_square(q: &BigRational) -> bool {
    let sq = |n: &BigInt| {
        let r = n.sqrt();
        &r * &r == *n
    };
    !q.is_negative() && sq(q.numer()) && sq(q.denom())
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl ScalarContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_param(&mut self, name: &str) -> Result<(), ScalarError> {
        if !valid_name(name) || name == "sqrt" {
            return Err(ScalarError::BadName(name.to_string()));
        }
        if self.roots.contains_key(name) {
            return Err(ScalarError::ContextMismatch(format!(
                "`{name}` declared as both parameter and root"
            )));
        }
        self.params.insert(name.to_string());
        Ok(())
    }

    /// Declare `name` as a square root of `radicand`. The radicands of all
    /// roots must stay independent modulo rational squares so that normal
    /// forms remain unique.
    pub fn add_root(&mut self, name: &str, radicand: BigRational) -> Result<(), ScalarError> {
        if !valid_name(name) || name == "sqrt" {
            return Err(ScalarError::BadName(name.to_string()));
        }
        if self.params.contains(name) {
            return Err(ScalarError::ContextMismatch(format!(
                "`{name}` declared as both parameter and root"
            )));
        }
        if !radicand.is_positive() {
            return Err(ScalarError::BadRadicand(radicand.to_string()));
        }
        if let Some(q) = self.roots.get(name) {
            if *q == radicand {
                return Ok(());
            }
            return Err(ScalarError::ContextMismatch(format!(
                "root `{name}` redeclared with radicand {radicand}"
            )));
        }
        let existing: Vec<BigRational> = self.roots.values().cloned().collect();
        if existing.len() >= 16 {
            return Err(ScalarError::BadRadicand("too many roots".into()));
        }
        for mask in 0u32..(1 << existing.len()) {
            let mut prod = radicand.clone();
            for (k, q) in existing.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    prod *= q;
                }
            }
            if is_square(&prod) {
                return Err(ScalarError::BadRadicand(format!(
                    "sqrt({}) is expressible through other declared roots",
                    fmt_rational(&radicand)
                )));
            }
        }
        self.roots.insert(name.to_string(), radicand);
        Ok(())
    }

    pub fn params(&self) -> impl Iterator<Item = &str> {
        self.params.iter().map(|s| s.as_str())
    }

    pub fn roots(&self) -> impl Iterator<Item = (&str, &BigRational)> {
        self.roots.iter().map(|(n, q)| (n.as_str(), q))
    }

    pub fn has_param(&self, name: &str) -> bool {
        self.params.contains(name)
    }

    pub fn root_symbol(&self, name: &str) -> Option<Symbol> {
        self.roots.get(name).map(|q| Symbol::Root {
            name: name.into(),
            radicand: q.clone(),
        })
    }

    fn root_by_radicand(&self, q: &BigRational) -> Option<Symbol> {
        self.roots
            .iter()
            .find(|(_, r)| *r == q)
            .map(|(n, r)| Symbol::Root {
                name: n.as_str().into(),
                radicand: r.clone(),
            })
    }

    /// Union of two contexts; fails if the union breaks root independence.
    pub fn merge(&self, other: &ScalarContext) -> Result<ScalarContext, ScalarError> {
        let mut out = self.clone();
        for p in &other.params {
            out.add_param(p)?;
        }
        for (n, q) in &other.roots {
            out.add_root(n, q.clone())?;
        }
        Ok(out)
    }

    /// True if every symbol of `s` is declared here with a matching radicand.
    pub fn admits(&self, s: &Scalar) -> bool {
        s.symbols().iter().all(|sym| match sym {
            Symbol::Param(n) => self.params.contains(&**n),
            Symbol::Root { name, radicand } => self.roots.get(&**name) == Some(radicand),
        })
    }

    pub fn parse(&self, text: &str) -> Result<Scalar, ScalarError> {
        let tokens = tokenize(text)?;
        let mut p = Parser {
            ctx: self,
            tokens,
            pos: 0,
            text,
        };
        let s = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ScalarError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            'a'..='z' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '/' => out.push((start, Tok::Slash)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            _ => {
                return Err(ScalarError::Parse {
                    text: text.to_string(),
                    offset: start,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    ctx: &'a ScalarContext,
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ScalarError {
        let offset = self
            .tokens
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.text.len());
        ScalarError::Parse {
            text: self.text.to_string(),
            offset,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ScalarError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn number(&mut self) -> Result<BigRational, ScalarError> {
        let num = match self.bump() {
            Some(Tok::Int(n)) => n,
            _ => {
                self.pos -= 1;
                return Err(self.error("expected a number"));
            }
        };
        if self.peek() == Some(&Tok::Slash) {
            self.pos += 1;
            match self.bump() {
                Some(Tok::Int(d)) if !d.is_zero() => Ok(BigRational::new(num, d)),
                Some(Tok::Int(_)) => {
                    self.pos -= 1;
                    Err(self.error("zero denominator"))
                }
                _ => {
                    self.pos -= 1;
                    Err(self.error("expected an integer denominator"))
                }
            }
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    fn factor(&mut self) -> Result<Scalar, ScalarError> {
        match self.peek().cloned() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.factor()
            }
            Some(Tok::Int(_)) => Ok(Scalar::from_rational(self.number()?)),
            Some(Tok::LParen) => {
                self.pos += 1;
                let s = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(s)
            }
            Some(Tok::Ident(name)) if name == "sqrt" => {
                self.pos += 1;
                self.expect(Tok::LParen, "`(` after sqrt")?;
                if !matches!(self.peek(), Some(Tok::Int(_))) {
                    return Err(self.error("sqrt takes a rational literal"));
                }
                let q = self.number()?;
                self.expect(Tok::RParen, "`)`")?;
                if is_square(&q) {
                    let r = BigRational::new(q.numer().sqrt(), q.denom().sqrt());
                    return Ok(Scalar::from_rational(r));
                }
                match self.ctx.root_by_radicand(&q) {
                    Some(sym) => Ok(Scalar::from_symbol(sym)),
                    None => Err(self.error(&format!(
                        "sqrt({}) is not a declared root",
                        fmt_rational(&q)
                    ))),
                }
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.ctx.params.contains(&name) {
                    Ok(Scalar::param(&name))
                } else if let Some(sym) = self.ctx.root_symbol(&name) {
                    Ok(Scalar::from_symbol(sym))
                } else {
                    self.pos -= 1;
                    Err(self.error(&format!("undeclared symbol `{name}`")))
                }
            }
            _ => Err(self.error("expected a scalar")),
        }
    }
}
