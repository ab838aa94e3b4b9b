//! Bernoulli numbers, top Chern pairings and e-invariant values in `Q/Z`.
//!
//! Bernoulli numbers use the topologists' indexing `B_1 = 1/6, B_2 = 1/30,
//! ...`, i.e. `B_l = |b_{2l}|` for the classical sequence `b_n`. All
//! arithmetic is exact.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::rational::Rational;

/// Largest `N` accepted by the nilpotent-ring expansion in [`chern_top_pairing`].
pub const SYMBOLIC_PAIRING_LIMIT: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EinvError {
    #[error("{op} requires n >= {min}, got n = {n}")]
    OutOfHypothesis { op: &'static str, n: u64, min: u64 },
    #[error("index must be positive")]
    ZeroIndex,
    #[error("symbolic pairing oracle is limited to N <= {SYMBOLIC_PAIRING_LIMIT}, got N = {0}")]
    OracleLimit(u32),
    #[error("symbolic expansion gave {symbolic} but N! = {factorial}")]
    OracleMismatch { symbolic: BigUint, factorial: BigUint },
    #[error("dimension audit needs m >= 3, got m = {0}")]
    AuditDimension(u64),
}

#[derive(Default)]
struct AkiyamaTanigawa {
    row: Vec<Rational>,
    out: Vec<Rational>,
}

impl AkiyamaTanigawa {
    fn extend_to(&mut self, upto: usize) {
        for n in self.out.len()..=upto {
            self.row.push(Rational::reduce(1, n as i64 + 1).expect("nonzero"));
            for j in (1..=n).rev() {
                let diff = &self.row[j - 1] - &self.row[j];
                self.row[j - 1] = &Rational::from_integer(j as i64) * &diff;
            }
            // the transform yields b_1 = +1/2
            self.out.push(if n == 1 { -&self.row[0] } else { self.row[0].clone() });
        }
    }
}

static BERNOULLI: Mutex<AkiyamaTanigawa> = Mutex::new(AkiyamaTanigawa { row: Vec::new(), out: Vec::new() });

/// Classical Bernoulli numbers `b_0..=b_upto` (`b_1 = -1/2`) by the
/// Akiyama-Tanigawa transform. The table is memoized.
pub fn bernoulli_classical_table(upto: usize) -> Vec<Rational> {
    let mut at = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    at.extend_to(upto);
    at.out[..=upto].to_vec()
}

pub fn bernoulli_classical(n: usize) -> Rational {
    let mut at = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    at.extend_to(n);
    at.out[n].clone()
}

/// `B_l = |b_{2l}|` for `l >= 1`.
pub fn bernoulli_top(l: u64) -> Result<Rational, EinvError> {
    if l == 0 {
        return Err(EinvError::ZeroIndex);
    }
    Ok(bernoulli_classical(2 * l as usize).abs())
}

/// `B_1..=B_upto` in topologists' indexing.
pub fn bernoulli_top_table(upto: u64) -> Vec<Rational> {
    let classical = bernoulli_classical_table(2 * upto as usize);
    (1..=upto as usize).map(|l| classical[2 * l].abs()).collect()
}

/// Whether `b_{2l} + sum 1/p` over primes with `(p - 1) | 2l` is an integer.
pub fn von_staudt_clausen_holds(l: u64) -> bool {
    let two_l = 2 * l;
    let mut acc = bernoulli_classical(two_l as usize);
    for d in 1..=two_l {
        if two_l.is_multiple_of(d) && is_prime(d + 1) {
            acc = &acc + &Rational::reduce(1, (d + 1) as i64).expect("nonzero");
        }
    }
    acc.denom().is_one()
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Order of the image of J in degree `4l - 1`: `den(B_l / 4l)`.
pub fn im_j_order(l: u64) -> Result<BigInt, EinvError> {
    let b = bernoulli_top(l)?;
    let q = &b * &Rational::reduce(1, 4 * l as i64).expect("nonzero");
    Ok(q.denom().clone())
}

fn display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// A signed rational together with its class in `Q/Z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QmodZ {
    #[serde(serialize_with = "display")]
    signed_value: Rational,
    #[serde(serialize_with = "display")]
    class_rep: Rational,
}

impl QmodZ {
    pub fn new(signed_value: Rational) -> Self {
        let class_rep = signed_value.fract_mod_one();
        QmodZ { signed_value, class_rep }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero())
    }

    pub fn signed_value(&self) -> &Rational {
        &self.signed_value
    }

    /// Representative in `[0, 1)`.
    pub fn class_rep(&self) -> &Rational {
        &self.class_rep
    }

    /// Equality in `Q/Z`.
    pub fn same_class(&self, other: &QmodZ) -> bool {
        self.class_rep == other.class_rep
    }

    pub fn order(&self) -> BigInt {
        element_order(self)
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (class {})", self.signed_value, self.class_rep)
    }
}

/// Order in `Q/Z`: the reduced denominator of the class.
pub fn element_order(v: &QmodZ) -> BigInt {
    v.class_rep.denom().clone()
}

fn sign_pow(e: u64) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `(-1)^{l-1} B_l / 2l`.
pub fn adams_target(l: u64) -> Result<QmodZ, EinvError> {
    let b = bernoulli_top(l)?;
    let v = &b * &Rational::reduce(sign_pow(l - 1), 2 * l as i64).expect("nonzero");
    Ok(QmodZ::new(v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Theorem,
    Proposition,
    FromChern,
    AdamsTarget,
}

/// Which manifold family a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    /// `SU(2n)` with the twisted framing.
    Even,
    /// `SU(2n+1)/C`.
    OddQuotient,
}

impl GroupKind {
    pub fn label(self, n: u64) -> String {
        match self {
            GroupKind::Even => format!("SU({})", 2 * n),
            GroupKind::OddQuotient => format!("SU({})/C", 2 * n + 1),
        }
    }

    /// `l = n^2` or `n^2 + n`.
    pub fn l(self, n: u64) -> u64 {
        match self {
            GroupKind::Even => n * n,
            GroupKind::OddQuotient => n * n + n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EInvariantResult {
    pub l: u64,
    pub value: QmodZ,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
}

impl EInvariantResult {
    /// Stem dimension `4l - 1`.
    pub fn dimension(&self) -> u64 {
        4 * self.l - 1
    }
}

/// `(-1)^{n-1} B_{n^2} / 2n^2` for `SU(2n)`, `n >= 2`.
pub fn e_theorem(n: u64) -> Result<EInvariantResult, EinvError> {
    if n < 2 {
        return Err(EinvError::OutOfHypothesis { op: "e_theorem", n, min: 2 });
    }
    let l = n * n;
    let v = &bernoulli_top(l)? * &Rational::reduce(sign_pow(n - 1), 2 * l as i64).expect("nonzero");
    Ok(EInvariantResult { l, value: QmodZ::new(v), provenance: Provenance::Theorem, n: Some(n) })
}

/// `-B_{n^2+n} / 2(n^2+n)` for `SU(2n+1)/C`, `n >= 1`.
pub fn e_proposition(n: u64) -> Result<EInvariantResult, EinvError> {
    if n < 1 {
        return Err(EinvError::OutOfHypothesis { op: "e_proposition", n, min: 1 });
    }
    let l = n * n + n;
    let v = &bernoulli_top(l)? * &Rational::reduce(-1, 2 * l as i64).expect("nonzero");
    Ok(EInvariantResult { l, value: QmodZ::new(v), provenance: Provenance::Proposition, n: Some(n) })
}

pub fn e_value(kind: GroupKind, n: u64) -> Result<EInvariantResult, EinvError> {
    match kind {
        GroupKind::Even => e_theorem(n),
        GroupKind::OddQuotient => e_proposition(n),
    }
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `sign * B_l * chern / (2l (2l-1)!)`.
///
/// Normalized so that `chern = (2l-1)!`, the top pairing over a product of
/// `2l - 1` two-dimensional factors, returns `sign * B_l / 2l`.
pub fn e_from_chern(l: u64, chern_number: &BigInt, sign: i8) -> Result<QmodZ, EinvError> {
    let b = bernoulli_top(l)?;
    let den = BigInt::from(2 * l) * BigInt::from(factorial(2 * l - 1));
    let num = chern_number * BigInt::from(sign.signum());
    let v = &b * &Rational::reduce(num, den).expect("nonzero");
    Ok(QmodZ::new(v))
}

/// `<(x_1 + ... + x_N)^N, [M]>` with every `x_i^2 = 0` and `x_1...x_N` pairing to one.
///
/// The value is `N!`; with `symbolic_oracle` the power is also expanded in
/// the nilpotent ring (monomials as bitmasks) and compared.
pub fn chern_top_pairing(n: u32, symbolic_oracle: bool) -> Result<BigUint, EinvError> {
    if n == 0 {
        return Err(EinvError::ZeroIndex);
    }
    let value = factorial(n as u64);
    if symbolic_oracle {
        if n > SYMBOLIC_PAIRING_LIMIT {
            return Err(EinvError::OracleLimit(n));
        }
        let symbolic = nilpotent_top_coefficient(n);
        if symbolic != value {
            return Err(EinvError::OracleMismatch { symbolic, factorial: value });
        }
    }
    Ok(value)
}

fn nilpotent_top_coefficient(n: u32) -> BigUint {
    let mut poly: BTreeMap<u32, BigUint> = BTreeMap::from([(0, BigUint::one())]);
    for _ in 0..n {
        let mut next: BTreeMap<u32, BigUint> = BTreeMap::new();
        for (mask, c) in &poly {
            for i in 0..n {
                let bit = 1 << i;
                if mask & bit == 0 {
                    *next.entry(mask | bit).or_insert_with(BigUint::zero) += c;
                }
            }
        }
        poly = next;
    }
    poly.remove(&((1u32 << n) - 1)).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub m: u64,
    pub n: u64,
    pub l: u64,
    pub dim_manifold: u64,
    pub dim_base: u64,
    pub chern_power: u64,
    pub ok: bool,
}

/// Dimension bookkeeping for `SU(m)` modulo `S` (even `m`) or `S x C` (odd `m`).
pub fn dimension_audit(m: u64) -> Result<AuditReport, EinvError> {
    if m < 3 {
        return Err(EinvError::AuditDimension(m));
    }
    let n = m / 2;
    let (l, quotient) = if m.is_multiple_of(2) { (n * n, m * m - 2) } else { (n * n + n, m * m - 3) };
    let dim_base = (m * m - m) + 2 * (n - 1);
    let chern_power = 2 * l - 1;
    let dim_manifold = dim_base + 1;
    let ok = dim_base == quotient && 2 * chern_power == dim_base && dim_manifold == 4 * l - 1;
    Ok(AuditReport { m, n, l, dim_manifold, dim_base, chern_power, ok })
}

/// One row of the e-invariant table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EinvRow {
    pub n: u64,
    pub l: u64,
    pub group: String,
    pub signed_value: String,
    pub class: String,
    pub order: String,
}

pub fn einv_row(kind: GroupKind, n: u64) -> Result<EinvRow, EinvError> {
    let r = e_value(kind, n)?;
    Ok(EinvRow {
        n,
        l: r.l,
        group: kind.label(n),
        signed_value: r.value.signed_value().to_string(),
        class: r.value.class_rep().to_string(),
        order: r.value.order().to_string(),
    })
}

/// One row of the Bernoulli table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BernoulliRow {
    pub l: u64,
    pub b_top: String,
    pub b_classical: String,
    pub im_j_order: String,
}

pub fn bernoulli_rows(upto: u64) -> Vec<BernoulliRow> {
    let classical = bernoulli_classical_table(2 * upto as usize);
    (1..=upto)
        .map(|l| {
            let b = &classical[2 * l as usize];
            let q = &b.abs() * &Rational::reduce(1, 4 * l as i64).expect("nonzero");
            BernoulliRow {
                l,
                b_top: b.abs().to_string(),
                b_classical: b.to_string(),
                im_j_order: q.denom().to_string(),
            }
        })
        .collect()
}

/// Small integer view of an order, for callers that know it fits.
pub fn order_u64(v: &QmodZ) -> Option<u64> {
    element_order(v).abs().to_u64()
}
