//! Normalizing polynomial ring over Gaussian rationals with conjugation.
//!
//! Symbols come in three families: radial parameters `r[i,j]` (real, in
//! `[0, 1]`), complex parameters `v[i,j]` with their conjugates `vbar[i,j]`,
//! and unit-circle variables `z` with conjugates `zbar`. Two rewrite rules
//! define the normal form:
//!
//! * circle pairs: `z * zbar -> 1`
//! * unit norm: `r[i,j]^2 -> 1 - v[i,j] * vbar[i,j]`
//!
//! The rules touch disjoint symbols, so normalization terminates and is
//! confluent; two polynomials are equal iff their normal forms coincide.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::rational::GaussianRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("relation config mismatch: {0:?} vs {1:?}")]
    RelationMismatch(RelationConfig, RelationConfig),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("no value assigned to symbol {0}")]
    MissingSymbol(SymbolId),
    #[error("inconsistent conjugate assignment for {0}")]
    InconsistentConjugate(SymbolId),
    #[error("circle symbol {0} assigned a value off the unit circle (|z| = {1})")]
    OffCircle(SymbolId, f64),
    #[error("radial symbol {0} assigned {1}, expected a real in [0, 1]")]
    RadialOutOfRange(SymbolId, Complex64),
}

/// Symbol families, in their sort rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    Radial,
    VParam,
    VConj,
    Circle,
    CircleConj,
}

/// Up to eight ASCII bytes, zero padded. Byte order is name order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Tag([u8; 8]);

impl Tag {
    pub fn new(name: &str) -> Tag {
        let bytes = name.as_bytes();
        assert!(
            !bytes.is_empty() && bytes.len() <= 8 && name.is_ascii(),
            "circle names are 1..=8 ASCII bytes, got {name:?}"
        );
        let mut out = [0u8; 8];
        out[..bytes.len()].copy_from_slice(bytes);
        Tag(out)
    }

    pub fn as_str(&self) -> &str {
        let len = self.0.iter().position(|&b| b == 0).unwrap_or(8);
        std::str::from_utf8(&self.0[..len]).unwrap_or("?")
    }
}

impl fmt::Debug for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A polynomial variable. Ordered by `(kind, j, i, name)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId {
    kind: SymbolKind,
    j: u8,
    i: u8,
    name: Tag,
}

impl SymbolId {
    pub fn radial(i: usize, j: usize) -> Self {
        Self::indexed(SymbolKind::Radial, i, j)
    }

    pub fn vparam(i: usize, j: usize) -> Self {
        Self::indexed(SymbolKind::VParam, i, j)
    }

    pub fn vconj(i: usize, j: usize) -> Self {
        Self::indexed(SymbolKind::VConj, i, j)
    }

    pub fn circle(name: &str) -> Self {
        SymbolId { kind: SymbolKind::Circle, j: 0, i: 0, name: Tag::new(name) }
    }

    pub fn circle_conj(name: &str) -> Self {
        SymbolId { kind: SymbolKind::CircleConj, j: 0, i: 0, name: Tag::new(name) }
    }

    fn indexed(kind: SymbolKind, i: usize, j: usize) -> Self {
        let i = u8::try_from(i).expect("index fits in u8");
        let j = u8::try_from(j).expect("index fits in u8");
        SymbolId { kind, j, i, name: Tag::default() }
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn indices(&self) -> (usize, usize) {
        (self.i as usize, self.j as usize)
    }

    pub fn name(&self) -> &str {
        self.name.as_str()
    }

    pub fn conj(&self) -> Self {
        let kind = match self.kind {
            SymbolKind::Radial => SymbolKind::Radial,
            SymbolKind::VParam => SymbolKind::VConj,
            SymbolKind::VConj => SymbolKind::VParam,
            SymbolKind::Circle => SymbolKind::CircleConj,
            SymbolKind::CircleConj => SymbolKind::Circle,
        };
        SymbolId { kind, ..*self }
    }
}

impl fmt::Display for SymbolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::Radial => write!(f, "r[{},{}]", self.i, self.j),
            SymbolKind::VParam => write!(f, "v[{},{}]", self.i, self.j),
            SymbolKind::VConj => write!(f, "vbar[{},{}]", self.i, self.j),
            SymbolKind::Circle => write!(f, "{}", self.name()),
            SymbolKind::CircleConj => write!(f, "{}bar", self.name()),
        }
    }
}

/// Which rewrite rules define the normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationConfig {
    pub circle_pairs: bool,
    pub unit_norm: bool,
}

impl RelationConfig {
    pub const FULL: RelationConfig = RelationConfig { circle_pairs: true, unit_norm: true };
    pub const CIRCLE_ONLY: RelationConfig = RelationConfig { circle_pairs: true, unit_norm: false };
    pub const FREE: RelationConfig = RelationConfig { circle_pairs: false, unit_norm: false };
}

impl Default for RelationConfig {
    fn default() -> Self {
        RelationConfig::FULL
    }
}

/// Product of symbols with positive exponents, sorted by symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(SmallVec<[(SymbolId, u32); 6]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn symbol(s: SymbolId) -> Self {
        Monomial(smallvec::smallvec![(s, 1)])
    }

    /// Builds from an arbitrary factor list: sorts, merges duplicates, drops zero exponents.
    pub fn from_factors(factors: impl IntoIterator<Item = (SymbolId, u32)>) -> Self {
        let mut v: SmallVec<[(SymbolId, u32); 6]> = factors.into_iter().collect();
        v.sort_unstable_by_key(|(s, _)| *s);
        let mut out: SmallVec<[(SymbolId, u32); 6]> = SmallVec::with_capacity(v.len());
        for (s, e) in v {
            match out.last_mut() {
                Some((last, le)) if *last == s => *le += e,
                _ => out.push((s, e)),
            }
        }
        out.retain(|(_, e)| *e > 0);
        Monomial(out)
    }

    pub fn factors(&self) -> &[(SymbolId, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, s: SymbolId) -> u32 {
        self.0
            .binary_search_by_key(&s, |(t, _)| *t)
            .map(|idx| self.0[idx].1)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    /// Raw product, no rewriting.
    pub fn mul_raw(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out: SmallVec<[(SymbolId, u32); 6]> = SmallVec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            match a[x].0.cmp(&b[y].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[x]);
                    x += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[y]);
                    y += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[x].0, a[x].1 + b[y].1));
                    x += 1;
                    y += 1;
                }
            }
        }
        out.extend_from_slice(&a[x..]);
        out.extend_from_slice(&b[y..]);
        Monomial(out)
    }

    pub fn conj(&self) -> Monomial {
        let mut v: SmallVec<[(SymbolId, u32); 6]> =
            self.0.iter().map(|(s, e)| (s.conj(), *e)).collect();
        v.sort_unstable_by_key(|(s, _)| *s);
        Monomial(v)
    }

    fn cancel_circle_pairs(&mut self) {
        let circles: SmallVec<[usize; 4]> = (0..self.0.len())
            .filter(|&k| self.0[k].0.kind == SymbolKind::Circle)
            .collect();
        if circles.is_empty() {
            return;
        }
        let mut changed = false;
        for &c in &circles {
            let partner = self.0[c].0.conj();
            if let Ok(p) = self.0.binary_search_by_key(&partner, |(t, _)| *t) {
                let k = self.0[c].1.min(self.0[p].1);
                self.0[c].1 -= k;
                self.0[p].1 -= k;
                changed = true;
            }
        }
        if changed {
            self.0.retain(|(_, e)| *e > 0);
        }
    }

    fn has_circle_pair(&self) -> bool {
        self.0.iter().any(|(s, _)| {
            s.kind == SymbolKind::Circle && self.exponent(s.conj()) > 0
        })
    }

    fn has_radial_square(&self) -> bool {
        self.0.iter().any(|(s, e)| s.kind == SymbolKind::Radial && *e >= 2)
    }

    fn is_normal(&self, rel: RelationConfig) -> bool {
        !(rel.circle_pairs && self.has_circle_pair()) && !(rel.unit_norm && self.has_radial_square())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (s, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    let mut acc: i64 = 1;
    for t in 0..k as i64 {
        acc = acc * (n as i64 - t) / (t + 1);
    }
    acc
}

/// Rewrites `coeff * mono` to normal form and accumulates it into `out`.
fn reduce_into(
    mut mono: Monomial,
    coeff: GaussianRational,
    rel: RelationConfig,
    out: &mut HashMap<Monomial, GaussianRational>,
) {
    if rel.circle_pairs {
        mono.cancel_circle_pairs();
    }
    if !(rel.unit_norm && mono.has_radial_square()) {
        accumulate(out, mono, coeff);
        return;
    }
    // r^e -> r^(e mod 2) * (1 - v vbar)^(e div 2), expanded.
    let mut halves: SmallVec<[(usize, usize, u32); 4]> = SmallVec::new();
    for (s, e) in mono.0.iter_mut() {
        if s.kind == SymbolKind::Radial && *e >= 2 {
            let (i, j) = s.indices();
            halves.push((i, j, *e / 2));
            *e %= 2;
        }
    }
    mono.0.retain(|(_, e)| *e > 0);
    let mut expansion: Vec<(Monomial, i64)> = vec![(mono, 1)];
    for (i, j, k) in halves {
        let mut next = Vec::with_capacity(expansion.len() * (k as usize + 1));
        for (m, c) in &expansion {
            for t in 0..=k {
                let sign = if t % 2 == 0 { 1 } else { -1 };
                let factor = Monomial::from_factors([
                    (SymbolId::vparam(i, j), t),
                    (SymbolId::vconj(i, j), t),
                ]);
                next.push((m.mul_raw(&factor), c * sign * binomial(k, t)));
            }
        }
        expansion = next;
    }
    for (m, c) in expansion {
        accumulate(out, m, coeff.scale_int(c));
    }
}

fn accumulate(out: &mut HashMap<Monomial, GaussianRational>, mono: Monomial, coeff: GaussianRational) {
    if coeff.is_zero() {
        return;
    }
    match out.entry(mono) {
        std::collections::hash_map::Entry::Occupied(mut e) => {
            let sum = e.get() + &coeff;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(coeff);
        }
    }
}

/// A polynomial held in normal form with respect to its [`RelationConfig`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: Vec<(Monomial, GaussianRational)>,
    rel: RelationConfig,
}

impl Polynomial {
    pub fn zero(rel: RelationConfig) -> Self {
        Polynomial { terms: Vec::new(), rel }
    }

    pub fn one(rel: RelationConfig) -> Self {
        Self::constant(GaussianRational::one(), rel)
    }

    pub fn constant(c: GaussianRational, rel: RelationConfig) -> Self {
        if c.is_zero() {
            return Self::zero(rel);
        }
        Polynomial { terms: vec![(Monomial::one(), c)], rel }
    }

    pub fn int(n: i64, rel: RelationConfig) -> Self {
        Self::constant(GaussianRational::from_int(n), rel)
    }

    pub fn symbol(s: SymbolId, rel: RelationConfig) -> Self {
        Polynomial { terms: vec![(Monomial::symbol(s), GaussianRational::one())], rel }
    }

    pub fn monomial(m: Monomial, c: GaussianRational, rel: RelationConfig) -> Self {
        Self::normalize(vec![(m, c)], rel)
    }

    /// Normal form of an arbitrary term list (duplicates allowed, any exponents).
    pub fn normalize(raw: Vec<(Monomial, GaussianRational)>, rel: RelationConfig) -> Self {
        let mut acc = HashMap::with_capacity(raw.len());
        for (m, c) in raw {
            let m = Monomial::from_factors(m.0);
            reduce_into(m, c, rel, &mut acc);
        }
        Self::from_map(acc, rel)
    }

    fn from_map(acc: HashMap<Monomial, GaussianRational>, rel: RelationConfig) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Polynomial { terms, rel }
    }

    pub fn rel(&self) -> RelationConfig {
        self.rel
    }

    pub fn terms(&self) -> &[(Monomial, GaussianRational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// True when no term is rewritable under the config.
    pub fn is_normal(&self) -> bool {
        self.terms.iter().all(|(m, c)| !c.is_zero() && m.is_normal(self.rel))
    }

    /// Re-normalizes under a different config.
    pub fn with_rel(&self, rel: RelationConfig) -> Self {
        Self::normalize(self.terms.clone(), rel)
    }

    pub fn symbols(&self) -> BTreeSet<SymbolId> {
        self.terms.iter().flat_map(|(m, _)| m.0.iter().map(|(s, _)| *s)).collect()
    }

    fn check_rel(&self, other: &Polynomial) -> Result<(), AlgebraError> {
        if self.rel != other.rel {
            return Err(AlgebraError::RelationMismatch(self.rel, other.rel));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check_rel(other)?;
        Ok(self.merge_linear(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check_rel(other)?;
        Ok(self.merge_linear(other, true))
    }

    // Both inputs are normal, so the sum is normal after dropping cancelled terms.
    fn merge_linear(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let (a, b) = (&self.terms, &other.terms);
        let mut terms = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        let rhs = |c: &GaussianRational| if negate { -c } else { c.clone() };
        while x < a.len() && y < b.len() {
            match a[x].0.cmp(&b[y].0) {
                std::cmp::Ordering::Less => {
                    terms.push(a[x].clone());
                    x += 1;
                }
                std::cmp::Ordering::Greater => {
                    terms.push((b[y].0.clone(), rhs(&b[y].1)));
                    y += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &a[x].1 + &rhs(&b[y].1);
                    if !c.is_zero() {
                        terms.push((a[x].0.clone(), c));
                    }
                    x += 1;
                    y += 1;
                }
            }
        }
        terms.extend(a[x..].iter().cloned());
        terms.extend(b[y..].iter().map(|(m, c)| (m.clone(), rhs(c))));
        Polynomial { terms, rel: self.rel }
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check_rel(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(self.rel));
        }
        if self.is_one() {
            return Ok(other.clone());
        }
        if other.is_one() {
            return Ok(self.clone());
        }
        let mut acc = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                reduce_into(ma.mul_raw(mb), ca * cb, self.rel, &mut acc);
            }
        }
        Ok(Self::from_map(acc, self.rel))
    }

    pub fn scale(&self, c: &GaussianRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.rel);
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect();
        Polynomial { terms, rel: self.rel }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.rel);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficients conjugated and every symbol swapped with its conjugate.
    pub fn conj(&self) -> Polynomial {
        let mut terms: Vec<_> = self.terms.iter().map(|(m, c)| (m.conj(), c.conj())).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Polynomial { terms, rel: self.rel }
    }

    /// Substitutes `value` for `sym` (and its conjugate) and re-normalizes.
    ///
    /// `value` must be a polynomial the caller considers a valid instance of
    /// `sym`; no check is made.
    pub fn substitute(&self, sym: SymbolId, value: &Polynomial) -> Polynomial {
        let conj_sym = sym.conj();
        let conj_value = value.conj();
        let mut acc = Polynomial::zero(self.rel);
        for (m, c) in &self.terms {
            let mut term = Polynomial::one(self.rel);
            let mut rest = Vec::new();
            for &(s, e) in m.factors() {
                if s == sym {
                    term = &term * &value.pow(e);
                } else if s == conj_sym && conj_sym != sym {
                    term = &term * &conj_value.pow(e);
                } else {
                    rest.push((s, e));
                }
            }
            let rest = Polynomial::monomial(Monomial::from_factors(rest), c.clone(), self.rel);
            acc = &acc + &(&term * &rest);
        }
        acc
    }

    /// Evaluates at a numeric point after validating the assignment.
    pub fn eval(&self, assignment: &Assignment) -> Result<Complex64, EvalError> {
        for s in self.symbols() {
            assignment.validate(s)?;
        }
        Ok(self.eval_unchecked(assignment))
    }

    fn eval_unchecked(&self, assignment: &Assignment) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex();
            for (s, e) in m.factors() {
                t *= assignment.values[s].powu(*e);
            }
            total += t;
        }
        total
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative_real = c.im.is_zero() && c.re.is_negative();
            let mag = if negative_real { -c } else { c.clone() };
            match (k, negative_real) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Checked sum; errors on mismatched relation configs.
pub fn poly_add(p: &Polynomial, q: &Polynomial) -> Result<Polynomial, AlgebraError> {
    p.checked_add(q)
}

/// Checked product; errors on mismatched relation configs.
pub fn poly_mul(p: &Polynomial, q: &Polynomial) -> Result<Polynomial, AlgebraError> {
    p.checked_mul(q)
}

pub fn poly_conj(p: &Polynomial) -> Polynomial {
    p.conj()
}

pub fn poly_normalize(raw: Vec<(Monomial, GaussianRational)>, rel: RelationConfig) -> Polynomial {
    Polynomial::normalize(raw, rel)
}

pub fn poly_eval(p: &Polynomial, assignment: &Assignment) -> Result<Complex64, EvalError> {
    p.eval(assignment)
}

// Operator forms panic on a relation mismatch; every matrix in this crate
// shares one config, so a mismatch is a programming error.
impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial relation mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial relation mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial relation mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&GaussianRational::from_int(-1))
    }
}

/// Single-step rewrite rules, used by [`normalize_stepwise`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteRule {
    CirclePair,
    UnitNorm,
}

/// Reference normalizer: applies one rewrite step at a time, always picking
/// the first applicable rule in `order`, until no rule applies.
///
/// Much slower than [`Polynomial::normalize`]; it exists so the fast path
/// can be checked against a literal execution of the rewrite system.
pub fn normalize_stepwise(
    raw: Vec<(Monomial, GaussianRational)>,
    rel: RelationConfig,
    order: [RewriteRule; 2],
) -> Polynomial {
    let mut terms: Vec<(Monomial, GaussianRational)> =
        raw.into_iter().map(|(m, c)| (Monomial::from_factors(m.0), c)).collect();
    let enabled = |rule: RewriteRule| match rule {
        RewriteRule::CirclePair => rel.circle_pairs,
        RewriteRule::UnitNorm => rel.unit_norm,
    };
    'outer: loop {
        for rule in order.into_iter().filter(|r| enabled(*r)) {
            for idx in 0..terms.len() {
                if let Some(replacement) = step(&terms[idx], rule) {
                    terms.swap_remove(idx);
                    terms.extend(replacement);
                    continue 'outer;
                }
            }
        }
        break;
    }
    let mut acc = HashMap::new();
    for (m, c) in terms {
        accumulate(&mut acc, m, c);
    }
    Polynomial::from_map(acc, rel)
}

fn step(term: &(Monomial, GaussianRational), rule: RewriteRule) -> Option<Vec<(Monomial, GaussianRational)>> {
    let (m, c) = term;
    match rule {
        RewriteRule::CirclePair => {
            let &(s, _) = m.0.iter().find(|(s, _)| s.kind == SymbolKind::Circle && m.exponent(s.conj()) > 0)?;
            let mut f: Vec<_> = m.0.to_vec();
            for (t, e) in f.iter_mut() {
                if *t == s || *t == s.conj() {
                    *e -= 1;
                }
            }
            Some(vec![(Monomial::from_factors(f), c.clone())])
        }
        RewriteRule::UnitNorm => {
            let &(s, _) = m.0.iter().find(|(s, e)| s.kind == SymbolKind::Radial && *e >= 2)?;
            let (i, j) = s.indices();
            let mut f: Vec<_> = m.0.to_vec();
            for (t, e) in f.iter_mut() {
                if *t == s {
                    *e -= 2;
                }
            }
            let base = Monomial::from_factors(f);
            let vv = Monomial::from_factors([(SymbolId::vparam(i, j), 1), (SymbolId::vconj(i, j), 1)]);
            Some(vec![(base.mul_raw(&vv), -c), (base, c.clone())])
        }
    }
}

const CIRCLE_TOL: f64 = 1e-12;

/// Numeric values for symbols, with the consistency rules of a valid point.
#[derive(Debug, Clone, Default)]
pub struct Assignment {
    values: HashMap<SymbolId, Complex64>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    /// Sets one symbol; the conjugate partner is not touched.
    pub fn set(&mut self, s: SymbolId, value: Complex64) -> &mut Self {
        self.values.insert(s, value);
        self
    }

    /// Sets a circle symbol and its conjugate.
    pub fn circle(&mut self, name: &str, value: Complex64) -> &mut Self {
        self.values.insert(SymbolId::circle(name), value);
        self.values.insert(SymbolId::circle_conj(name), value.conj());
        self
    }

    /// Sets `r[i,j]`, `v[i,j]` and `vbar[i,j]`.
    pub fn pair(&mut self, i: usize, j: usize, r: f64, v: Complex64) -> &mut Self {
        self.values.insert(SymbolId::radial(i, j), Complex64::new(r, 0.0));
        self.values.insert(SymbolId::vparam(i, j), v);
        self.values.insert(SymbolId::vconj(i, j), v.conj());
        self
    }

    pub fn get(&self, s: SymbolId) -> Option<Complex64> {
        self.values.get(&s).copied()
    }

    fn validate(&self, s: SymbolId) -> Result<(), EvalError> {
        let value = *self.values.get(&s).ok_or(EvalError::MissingSymbol(s))?;
        match s.kind {
            SymbolKind::Circle | SymbolKind::CircleConj => {
                let n = value.norm();
                if (n - 1.0).abs() > CIRCLE_TOL {
                    return Err(EvalError::OffCircle(s, n));
                }
            }
            SymbolKind::Radial => {
                if value.im.abs() > CIRCLE_TOL || !(0.0..=1.0).contains(&value.re) {
                    return Err(EvalError::RadialOutOfRange(s, value));
                }
            }
            SymbolKind::VParam | SymbolKind::VConj => {}
        }
        if s.kind != SymbolKind::Radial {
            if let Some(partner) = self.values.get(&s.conj()) {
                if (partner - value.conj()).norm() > CIRCLE_TOL * (1.0 + value.norm()) {
                    return Err(EvalError::InconsistentConjugate(s));
                }
            }
        }
        Ok(())
    }
}
