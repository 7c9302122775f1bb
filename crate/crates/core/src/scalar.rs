//! Exact lengths: elements of a finite-dimensional Q-vector space spanned by
//! declared real symbols, with a decidable total order coming from the real
//! embedding.
//!
//! Every scalar carries the [`SymbolTable`] it lives over. Coefficients are
//! arbitrary-precision rationals kept sparse and sorted by symbol index, so
//! structural equality coincides with equality of the embedded reals.
//!
//! Signs are decided by interval evaluation. A cached `f64` enclosure settles
//! most comparisons; ties fall through to exact rational intervals at 64 bits
//! of working precision, doubling up to the table's cap.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const START_PRECISION_BITS: u32 = 64;
pub const DEFAULT_MAX_PRECISION_BITS: u32 = 4096;

/// Algebraic-only scalars always resolve eventually; this is only a guard
/// against runaway memory use on absurd inputs.
const HARD_PRECISION_LIMIT: u32 = 1 << 22;

/// Name conventionally used for the rational unit.
pub const UNIT_NAME: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolKind {
    /// The rational unit `1`.
    Unit,
    /// `sqrt(m)` for a positive squarefree `m > 1`.
    Sqrt(u64),
    /// A real known only through a decimal midpoint, accurate to
    /// `10^-digits`. Its independence from the other symbols is asserted by
    /// the user, not checked.
    Opaque { decimal: String, digits: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub kind: SymbolKind,
}

impl Symbol {
    pub fn unit() -> Self {
        Symbol {
            name: UNIT_NAME.to_string(),
            kind: SymbolKind::Unit,
        }
    }

    pub fn sqrt(m: u64) -> Self {
        Symbol {
            name: format!("sqrt{m}"),
            kind: SymbolKind::Sqrt(m),
        }
    }
}

/// Ordered list of Q-linearly independent real symbols.
#[derive(Debug)]
pub struct SymbolTable {
    symbols: Vec<Symbol>,
    unit: u32,
    approx: Vec<f64>,
    approx_err: Vec<f64>,
    opaque: Vec<Option<(BigRational, BigRational)>>,
    max_precision_bits: u32,
}

impl PartialEq for SymbolTable {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for SymbolTable {}

fn is_squarefree(m: u64) -> bool {
    let mut n = m;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = BigRational::new(numer, denom);
    Some(if neg { -value } else { value })
}

impl SymbolTable {
    pub fn new(symbols: Vec<Symbol>) -> Result<Arc<SymbolTable>> {
        Self::with_max_precision(symbols, DEFAULT_MAX_PRECISION_BITS)
    }

    pub fn with_max_precision(
        symbols: Vec<Symbol>,
        max_precision_bits: u32,
    ) -> Result<Arc<SymbolTable>> {
        let mut unit = None;
        let mut approx = Vec::with_capacity(symbols.len());
        let mut approx_err = Vec::with_capacity(symbols.len());
        let mut opaque = Vec::with_capacity(symbols.len());
        let mut seen_sqrt = Vec::new();
        for (i, sym) in symbols.iter().enumerate() {
            if sym.name.is_empty() {
                return Err(Error::InvalidSymbols("empty symbol name".into()));
            }
            if symbols[..i].iter().any(|s| s.name == sym.name) {
                return Err(Error::InvalidSymbols(format!(
                    "duplicate symbol `{}`",
                    sym.name
                )));
            }
            match &sym.kind {
                SymbolKind::Unit => {
                    if unit.is_some() {
                        return Err(Error::InvalidSymbols("unit declared twice".into()));
                    }
                    unit = Some(i as u32);
                    approx.push(1.0);
                    approx_err.push(0.0);
                    opaque.push(None);
                }
                SymbolKind::Sqrt(m) => {
                    let m = *m;
                    if m < 2 || !is_squarefree(m) {
                        return Err(Error::InvalidSymbols(format!(
                            "sqrt argument {m} is not a squarefree integer > 1"
                        )));
                    }
                    if m > (1u64 << 52) {
                        return Err(Error::InvalidSymbols(format!(
                            "sqrt argument {m} too large"
                        )));
                    }
                    if seen_sqrt.contains(&m) {
                        return Err(Error::InvalidSymbols(format!("sqrt{m} declared twice")));
                    }
                    seen_sqrt.push(m);
                    let v = (m as f64).sqrt();
                    approx.push(v);
                    approx_err.push(v * f64::EPSILON);
                    opaque.push(None);
                }
                SymbolKind::Opaque { decimal, digits } => {
                    let mid = parse_decimal(decimal).ok_or_else(|| {
                        Error::InvalidSymbols(format!("bad decimal `{decimal}` for `{}`", sym.name))
                    })?;
                    let radius = BigRational::new(
                        BigInt::one(),
                        num_traits::pow(BigInt::from(10), *digits as usize),
                    );
                    let v = mid.to_f64().unwrap_or(f64::NAN);
                    let r = radius.to_f64().unwrap_or(0.0);
                    approx.push(v);
                    approx_err.push(v.abs() * f64::EPSILON + r * (1.0 + 1e-9) + 1e-300);
                    opaque.push(Some((mid, radius)));
                }
            }
        }
        let unit =
            unit.ok_or_else(|| Error::InvalidSymbols("the unit symbol is missing".into()))?;
        Ok(Arc::new(SymbolTable {
            symbols,
            unit,
            approx,
            approx_err,
            opaque,
            max_precision_bits: max_precision_bits.max(START_PRECISION_BITS),
        }))
    }

    /// Table with the unit followed by `sqrt(m)` for each listed `m`.
    pub fn quadratic(roots: &[u64]) -> Result<Arc<SymbolTable>> {
        let mut symbols = vec![Symbol::unit()];
        symbols.extend(roots.iter().map(|&m| Symbol::sqrt(m)));
        Self::new(symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn unit_index(&self) -> u32 {
        self.unit
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.symbols
            .iter()
            .position(|s| s.name == name)
            .map(|i| i as u32)
    }

    pub fn name(&self, index: u32) -> &str {
        &self.symbols[index as usize].name
    }

    pub fn max_precision_bits(&self) -> u32 {
        self.max_precision_bits
    }

    /// Same symbols, different precision cap.
    pub fn with_precision_cap(&self, bits: u32) -> Arc<SymbolTable> {
        Self::with_max_precision(self.symbols.clone(), bits).expect("symbols already validated")
    }

    fn has_opaque(&self, index: u32) -> bool {
        self.opaque[index as usize].is_some()
    }

    /// Closed rational enclosure of a symbol at the given working precision.
    fn enclosure(&self, index: u32, bits: u32) -> (BigRational, BigRational) {
        match &self.symbols[index as usize].kind {
            SymbolKind::Unit => (BigRational::one(), BigRational::one()),
            SymbolKind::Sqrt(m) => {
                let scaled = BigInt::from(*m) << (2 * bits as usize);
                let root = scaled.sqrt();
                let denom = BigInt::one() << bits as usize;
                (
                    BigRational::new(root.clone(), denom.clone()),
                    BigRational::new(root + 1, denom),
                )
            }
            SymbolKind::Opaque { .. } => {
                let (mid, r) = self.opaque[index as usize].as_ref().expect("opaque data");
                (mid - r, mid + r)
            }
        }
    }
}

pub(crate) fn same_table(a: &Arc<SymbolTable>, b: &Arc<SymbolTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

struct Inner {
    table: Arc<SymbolTable>,
    terms: Vec<(u32, BigRational)>,
    approx: f64,
    err: f64,
}

/// An exact real number in the span of the table's symbols.
#[derive(Clone)]
pub struct Scalar(Arc<Inner>);

impl Scalar {
    fn from_sorted_terms(table: Arc<SymbolTable>, terms: Vec<(u32, BigRational)>) -> Scalar {
        let mut sum = 0.0f64;
        let mut abs_sum = 0.0f64;
        let mut extra = 0.0f64;
        let mut reliable = true;
        for (s, q) in &terms {
            let qf = q.to_f64().unwrap_or(f64::NAN);
            if !qf.is_finite() || qf.abs() < 1e-250 {
                reliable = false;
                break;
            }
            let t = qf * table.approx[*s as usize];
            sum += t;
            abs_sum += t.abs();
            extra += qf.abs() * table.approx_err[*s as usize];
        }
        let n = terms.len() as f64;
        let err = if reliable && sum.is_finite() && abs_sum.is_finite() {
            abs_sum * (n + 8.0) * f64::EPSILON + extra * (1.0 + 1e-9) + 1e-290
        } else {
            f64::INFINITY
        };
        Scalar(Arc::new(Inner {
            table,
            terms,
            approx: sum,
            err,
        }))
    }

    /// Builds a scalar from arbitrary (index, coefficient) pairs.
    pub fn from_terms(
        table: &Arc<SymbolTable>,
        terms: impl IntoIterator<Item = (u32, BigRational)>,
    ) -> Scalar {
        let mut v: Vec<(u32, BigRational)> = terms.into_iter().collect();
        v.sort_by_key(|(s, _)| *s);
        let mut merged: Vec<(u32, BigRational)> = Vec::with_capacity(v.len());
        for (s, q) in v {
            assert!((s as usize) < table.len(), "symbol index out of range");
            match merged.last_mut() {
                Some((ls, lq)) if *ls == s => *lq += q,
                _ => merged.push((s, q)),
            }
        }
        merged.retain(|(_, q)| !q.is_zero());
        Scalar::from_sorted_terms(table.clone(), merged)
    }

    pub fn zero(table: &Arc<SymbolTable>) -> Scalar {
        Scalar::from_sorted_terms(table.clone(), Vec::new())
    }

    pub fn rational(table: &Arc<SymbolTable>, q: BigRational) -> Scalar {
        let unit = table.unit;
        Scalar::from_terms(table, [(unit, q)])
    }

    pub fn ratio(table: &Arc<SymbolTable>, numer: i64, denom: i64) -> Scalar {
        Scalar::rational(table, BigRational::new(numer.into(), denom.into()))
    }

    pub fn integer(table: &Arc<SymbolTable>, n: i64) -> Scalar {
        Scalar::ratio(table, n, 1)
    }

    pub fn one(table: &Arc<SymbolTable>) -> Scalar {
        Scalar::integer(table, 1)
    }

    /// `q * symbol`.
    pub fn symbol(table: &Arc<SymbolTable>, name: &str, q: BigRational) -> Result<Scalar> {
        let idx = table
            .index_of(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        Ok(Scalar::from_terms(table, [(idx, q)]))
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.0.table
    }

    pub fn terms(&self) -> &[(u32, BigRational)] {
        &self.0.terms
    }

    pub fn coeff(&self, index: u32) -> BigRational {
        self.0
            .terms
            .iter()
            .find(|(s, _)| *s == index)
            .map(|(_, q)| q.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.terms.is_empty()
    }

    /// `Some(q)` when the scalar is a rational multiple of the unit.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.0.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(s, q)] if *s == self.0.table.unit => Some(q.clone()),
            _ => None,
        }
    }

    /// Floating-point approximation, for display and heuristics only.
    pub fn to_f64(&self) -> f64 {
        if self.0.err.is_finite() {
            self.0.approx
        } else {
            self.0
                .terms
                .iter()
                .map(|(s, q)| q.to_f64().unwrap_or(0.0) * self.0.table.approx[*s as usize])
                .sum()
        }
    }

    fn check_table(&self, other: &Scalar) -> Result<()> {
        if same_table(&self.0.table, &other.0.table) {
            Ok(())
        } else {
            Err(Error::TableMismatch)
        }
    }

    fn combine(&self, other: &Scalar, negate_other: bool) -> Result<Scalar> {
        self.check_table(other)?;
        let a = &self.0.terms;
        let b = &other.0.terms;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i].clone());
                i += 1;
            } else if take_b {
                let q = if negate_other {
                    -&b[j].1
                } else {
                    b[j].1.clone()
                };
                out.push((b[j].0, q));
                j += 1;
            } else {
                let q = if negate_other {
                    &a[i].1 - &b[j].1
                } else {
                    &a[i].1 + &b[j].1
                };
                if !q.is_zero() {
                    out.push((a[i].0, q));
                }
                i += 1;
                j += 1;
            }
        }
        Ok(Scalar::from_sorted_terms(self.0.table.clone(), out))
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.combine(other, false)
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.combine(other, true)
    }

    pub fn scale(&self, q: &BigRational) -> Scalar {
        if q.is_zero() {
            return Scalar::zero(&self.0.table);
        }
        let terms = self.0.terms.iter().map(|(s, c)| (*s, c * q)).collect();
        Scalar::from_sorted_terms(self.0.table.clone(), terms)
    }

    pub fn scale_int(&self, n: i64) -> Scalar {
        self.scale(&BigRational::from_integer(n.into()))
    }

    /// Sign of the embedded real value.
    pub fn sign(&self) -> Result<Ordering> {
        if self.0.terms.is_empty() {
            return Ok(Ordering::Equal);
        }
        if self.0.approx.abs() > self.0.err {
            return Ok(if self.0.approx > 0.0 {
                Ordering::Greater
            } else {
                Ordering::Less
            });
        }
        self.exact_sign()
    }

    fn interval(&self, bits: u32) -> (BigRational, BigRational) {
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for (s, q) in &self.0.terms {
            let (l, h) = self.0.table.enclosure(*s, bits);
            if q.is_positive() {
                lo += q * &l;
                hi += q * &h;
            } else {
                lo += q * &h;
                hi += q * &l;
            }
        }
        (lo, hi)
    }

    fn exact_sign(&self) -> Result<Ordering> {
        if let Some(q) = self.as_rational() {
            return Ok(q.cmp(&BigRational::zero()));
        }
        let table = &self.0.table;
        let has_opaque = self.0.terms.iter().any(|(s, _)| table.has_opaque(*s));
        let mut bits = START_PRECISION_BITS;
        loop {
            let (lo, hi) = self.interval(bits);
            if lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if hi.is_negative() {
                return Ok(Ordering::Less);
            }
            if (has_opaque && bits >= table.max_precision_bits) || bits >= HARD_PRECISION_LIMIT {
                return Err(Error::PrecisionExhausted { bits });
            }
            bits = bits.saturating_mul(2);
            if has_opaque {
                bits = bits.min(table.max_precision_bits);
            }
        }
    }

    /// Compares embedded real values.
    pub fn cmp_value(&self, other: &Scalar) -> Result<Ordering> {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ok(Ordering::Equal);
        }
        self.check_table(other)?;
        let diff = self.0.approx - other.0.approx;
        let err = self.0.err + other.0.err + diff.abs() * 2.0 * f64::EPSILON;
        if diff.abs() > err {
            return Ok(if diff > 0.0 {
                Ordering::Greater
            } else {
                Ordering::Less
            });
        }
        if self.0.terms == other.0.terms {
            return Ok(Ordering::Equal);
        }
        self.try_sub(other)?.exact_sign()
    }

    pub fn lt(&self, other: &Scalar) -> Result<bool> {
        Ok(self.cmp_value(other)? == Ordering::Less)
    }

    pub fn le(&self, other: &Scalar) -> Result<bool> {
        Ok(self.cmp_value(other)? != Ordering::Greater)
    }

    pub fn is_positive(&self) -> Result<bool> {
        Ok(self.sign()? == Ordering::Greater)
    }

    pub fn max_value(&self, other: &Scalar) -> Result<Scalar> {
        Ok(if self.cmp_value(other)? == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        })
    }

    pub fn min_value(&self, other: &Scalar) -> Result<Scalar> {
        Ok(if self.cmp_value(other)? == Ordering::Greater {
            other.clone()
        } else {
            self.clone()
        })
    }

    pub fn abs(&self) -> Result<Scalar> {
        Ok(if self.sign()? == Ordering::Less {
            -self
        } else {
            self.clone()
        })
    }

    /// Deterministic total order on representations (not on values).
    pub fn structural_cmp(&self, other: &Scalar) -> Ordering {
        let a = &self.0.terms;
        let b = &other.0.terms;
        for (x, y) in a.iter().zip(b.iter()) {
            match x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        a.len().cmp(&b.len())
    }

    /// Parses the `{"name": "p/q", ...}` textual form.
    pub fn from_json(
        table: &Arc<SymbolTable>,
        value: &serde_json::Value,
        location: &str,
    ) -> Result<Scalar> {
        let obj = value.as_object().ok_or_else(|| {
            Error::parse(location, "scalar must be an object of name -> rational")
        })?;
        let mut terms = Vec::with_capacity(obj.len());
        for (name, q) in obj {
            let idx = table
                .index_of(name)
                .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
            let text = match q {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) if n.is_i64() => n.to_string(),
                _ => {
                    return Err(Error::parse(
                        location,
                        format!("coefficient of `{name}` must be a \"p/q\" string"),
                    ))
                }
            };
            let q = BigRational::from_str(text.trim())
                .map_err(|_| Error::parse(location, format!("bad rational `{text}`")))?;
            terms.push((idx, q));
        }
        Ok(Scalar::from_terms(table, terms))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (s, q) in &self.0.terms {
            map.insert(
                self.0.table.name(*s).to_string(),
                serde_json::Value::String(q.to_string()),
            );
        }
        serde_json::Value::Object(map)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.terms == other.0.terms
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.terms.hash(state);
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, q)) in self.0.terms.iter().enumerate() {
            let neg = q.is_negative();
            if i > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let mag = q.abs();
            if *s == self.0.table.unit {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", self.0.table.name(*s))?;
            } else {
                write!(f, "{mag}*{}", self.0.table.name(*s))?;
            }
        }
        Ok(())
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.try_add(rhs)
            .expect("scalar addition across symbol tables")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.try_sub(rhs)
            .expect("scalar subtraction across symbol tables")
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let terms = self.0.terms.iter().map(|(s, q)| (*s, -q)).collect();
        Scalar::from_sorted_terms(self.0.table.clone(), terms)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Shorthand for a rational `n/d`.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Scalar-vector helpers shared by the geometric modules.
pub fn add_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg_vec(a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero_vec(a: &[Scalar]) -> bool {
    a.iter().all(Scalar::is_zero)
}

/// Lexicographic comparison of embedded coordinates.
pub fn lex_cmp(a: &[Scalar], b: &[Scalar]) -> Result<Ordering> {
    for (x, y) in a.iter().zip(b) {
        match x.cmp_value(y)? {
            Ordering::Equal => {}
            o => return Ok(o),
        }
    }
    Ok(a.len().cmp(&b.len()))
}

/// Sorts with a fallible comparator; the first comparison error wins.
pub fn try_sort_by<T>(
    items: &mut [T],
    mut cmp: impl FnMut(&T, &T) -> Result<Ordering>,
) -> Result<()> {
    let mut failure = None;
    items.sort_by(|a, b| {
        if failure.is_some() {
            return Ordering::Equal;
        }
        match cmp(a, b) {
            Ok(o) => o,
            Err(e) => {
                failure = Some(e);
                Ordering::Equal
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Sorts by value and removes duplicates.
pub fn sorted_distinct(mut values: Vec<Scalar>) -> Result<Vec<Scalar>> {
    try_sort_by(&mut values, |a, b| a.cmp_value(b))?;
    values.dedup();
    Ok(values)
}

pub fn structural_cmp_vec(a: &[Scalar], b: &[Scalar]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.structural_cmp(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Arc<SymbolTable> {
        SymbolTable::quadratic(&[2, 3]).unwrap()
    }

    #[test]
    fn rational_addition() {
        let t = table();
        let a = Scalar::ratio(&t, 1, 2);
        let b = Scalar::ratio(&t, 1, 3);
        assert_eq!(&a + &b, Scalar::ratio(&t, 5, 6));
    }

    #[test]
    fn additive_inverse_is_empty() {
        let t = table();
        let r2 = Scalar::symbol(&t, "sqrt2", q(1, 1)).unwrap();
        let z = &r2 - &r2;
        assert!(z.is_zero());
        assert!(z.terms().is_empty());
        assert_eq!(z.sign().unwrap(), Ordering::Equal);
    }

    #[test]
    fn scaling_is_linear() {
        let t = table();
        let s = &Scalar::symbol(&t, "sqrt2", q(1, 1)).unwrap() + &Scalar::one(&t);
        let expected = &Scalar::symbol(&t, "sqrt2", q(3, 1)).unwrap() + &Scalar::integer(&t, 3);
        assert_eq!(s.scale_int(3), expected);
    }

    #[test]
    fn signs_of_quadratic_surds() {
        let t = table();
        let r2 = Scalar::symbol(&t, "sqrt2", q(1, 1)).unwrap();
        assert_eq!(
            (&r2 - &Scalar::ratio(&t, 3, 2)).sign().unwrap(),
            Ordering::Less
        );
        assert_eq!(
            (&Scalar::integer(&t, 3) - &r2.scale_int(2)).sign().unwrap(),
            Ordering::Greater
        );
        assert_eq!(Scalar::zero(&t).sign().unwrap(), Ordering::Equal);
    }

    #[test]
    fn near_cancellation_uses_exact_path() {
        // 99/70 is a convergent of sqrt2: difference ~ 7.2e-5, then push much closer.
        let t = table();
        let r2 = Scalar::symbol(&t, "sqrt2", q(1, 1)).unwrap();
        // 665857/470832 - sqrt2 ~ 1.6e-12
        let conv = Scalar::ratio(&t, 665857, 470832);
        assert_eq!((&conv - &r2).sign().unwrap(), Ordering::Greater);
        // a combination with error far below f64 resolution
        let big = Scalar::rational(
            &t,
            BigRational::new(
                BigInt::from_str("1572584048032918633353217").unwrap(),
                BigInt::from_str("1111984844349868137938112").unwrap(),
            ),
        );
        assert_eq!((&big - &r2).sign().unwrap(), Ordering::Greater);
        assert_eq!((&r2 - &big).sign().unwrap(), Ordering::Less);
    }

    #[test]
    fn opaque_symbols_can_exhaust_precision() {
        let t = SymbolTable::new(vec![
            Symbol::unit(),
            Symbol {
                name: "x".into(),
                kind: SymbolKind::Opaque {
                    decimal: "0.5000001".into(),
                    digits: 4,
                },
            },
        ])
        .unwrap();
        let x = Scalar::symbol(&t, "x", q(1, 1)).unwrap();
        let diff = &x - &Scalar::ratio(&t, 1, 2);
        assert!(matches!(diff.sign(), Err(Error::PrecisionExhausted { .. })));
        let clear = &x - &Scalar::ratio(&t, 1, 4);
        assert_eq!(clear.sign().unwrap(), Ordering::Greater);
    }

    #[test]
    fn table_validation() {
        assert!(SymbolTable::new(vec![Symbol::sqrt(2)]).is_err());
        assert!(SymbolTable::new(vec![Symbol::unit(), Symbol::sqrt(4)]).is_err());
        assert!(SymbolTable::new(vec![Symbol::unit(), Symbol::sqrt(12)]).is_err());
        assert!(SymbolTable::new(vec![Symbol::unit(), Symbol::unit()]).is_err());
        assert!(SymbolTable::quadratic(&[2, 3, 5, 6]).is_ok());
    }

    #[test]
    fn mismatched_tables_are_rejected() {
        let a = SymbolTable::quadratic(&[2]).unwrap();
        let b = SymbolTable::quadratic(&[3]).unwrap();
        let x = Scalar::one(&a);
        let y = Scalar::one(&b);
        assert_eq!(x.try_add(&y).unwrap_err(), Error::TableMismatch);
        // equal contents count as the same table
        let c = SymbolTable::quadratic(&[2]).unwrap();
        assert!(x.try_add(&Scalar::one(&c)).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let t = table();
        let v = serde_json::json!({"1": "3/4", "sqrt2": "-1/8"});
        let s = Scalar::from_json(&t, &v, "test").unwrap();
        assert_eq!(s.to_json(), v);
        assert_eq!(s.to_string(), "3/4 - 1/8*sqrt2");
    }
}
