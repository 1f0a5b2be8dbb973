//! The two base quantales behind every computation in this crate: extended
//! non-negative rationals under addition (distances) and Booleans under
//! conjunction (order).
//!
//! Both are commutative integral quantales whose underlying category is a
//! total order, so on finite instances every limit or colimit collapses to a
//! finite meet or join. Arrows run from larger to smaller distances
//! (`x -> y` iff `x >= y` as numbers) and from false to true on the Boolean
//! side; in both cases the tensor unit is the top of the arrow order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// An element of the cost quantale: a non-negative rational or infinity.
///
/// Finite values are stored in lowest terms with a positive denominator.
/// Addition absorbs infinity, and the numeric order puts infinity on top.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CostValue(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Finite(BigRational),
    Infinite,
}

impl CostValue {
    pub fn zero() -> Self {
        CostValue(Repr::Finite(BigRational::zero()))
    }

    pub fn infinity() -> Self {
        CostValue(Repr::Infinite)
    }

    /// Builds `num/den` reduced to lowest terms. Panics if `den` is zero.
    pub fn ratio(num: u64, den: u64) -> Self {
        assert!(den != 0, "denominator must be nonzero");
        CostValue(Repr::Finite(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))
    }

    /// Converts an exact rational, rejecting negative inputs.
    pub fn try_from_rational(r: BigRational) -> Result<Self, ParseValueError> {
        if r.is_negative() {
            return Err(ParseValueError::Negative(r.to_string()));
        }
        Ok(CostValue(Repr::Finite(r)))
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Finite(r) if r.is_zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.0, Repr::Infinite)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Finite(r) => Some(r),
            Repr::Infinite => None,
        }
    }

    /// Quantale tensor: exact addition with `inf + x = x + inf = inf`.
    pub fn add(&self, other: &CostValue) -> CostValue {
        match (&self.0, &other.0) {
            (Repr::Finite(a), Repr::Finite(b)) => CostValue(Repr::Finite(a + b)),
            _ => CostValue::infinity(),
        }
    }

    /// Internal hom `[self, other]`: truncated subtraction
    /// `max(other - self, 0)`, with `[inf, b] = 0` and `[a, inf] = inf`
    /// for finite `a`. The infinity cases are the ones forced by the
    /// residuation law `a + c >= b  iff  c >= [a, b]`.
    pub fn hom(&self, other: &CostValue) -> CostValue {
        match (&self.0, &other.0) {
            (Repr::Infinite, _) => CostValue::zero(),
            (Repr::Finite(_), Repr::Infinite) => CostValue::infinity(),
            (Repr::Finite(a), Repr::Finite(b)) => {
                if b <= a {
                    CostValue::zero()
                } else {
                    CostValue(Repr::Finite(b - a))
                }
            }
        }
    }
}

impl From<u64> for CostValue {
    fn from(n: u64) -> Self {
        CostValue(Repr::Finite(BigRational::from_integer(BigInt::from(n))))
    }
}

impl PartialOrd for CostValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CostValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Finite(a), Repr::Finite(b)) => a.cmp(b),
            (Repr::Finite(_), Repr::Infinite) => Ordering::Less,
            (Repr::Infinite, Repr::Finite(_)) => Ordering::Greater,
            (Repr::Infinite, Repr::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Infinite => write!(f, "inf"),
            Repr::Finite(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl fmt::Debug for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseValueError {
    #[error("empty value")]
    Empty,
    #[error("invalid value `{0}`: expected `p/q`, an integer, or `inf`")]
    Malformed(String),
    #[error("denominator is zero in `{0}`")]
    ZeroDenominator(String),
    #[error("negative values are not allowed: `{0}`")]
    Negative(String),
    #[error("invalid boolean value `{0}`: expected `0` or `1`")]
    NotBoolean(String),
}

impl FromStr for CostValue {
    type Err = ParseValueError;

    /// Accepts `p/q`, a bare integer `n` (shorthand for `n/1`), or `inf`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseValueError::Empty);
        }
        if s == "inf" {
            return Ok(CostValue::infinity());
        }
        let malformed = || ParseValueError::Malformed(s.to_string());
        let parse_nat = |digits: &str| -> Result<BigInt, ParseValueError> {
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            digits.parse::<BigInt>().map_err(|_| malformed())
        };
        match s.split_once('/') {
            None => Ok(CostValue(Repr::Finite(BigRational::from_integer(
                parse_nat(s)?,
            )))),
            Some((num, den)) => {
                let num = parse_nat(num)?;
                let den = parse_nat(den)?;
                if den.is_zero() {
                    return Err(ParseValueError::ZeroDenominator(s.to_string()));
                }
                Ok(CostValue(Repr::Finite(BigRational::new(num, den))))
            }
        }
    }
}

/// Tag selecting one of the two base quantales.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Base {
    /// Extended non-negative rationals with addition; quasi-metric spaces.
    Cost,
    /// Booleans with conjunction; preorders.
    Bool,
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Cost => write!(f, "cost"),
            Base::Bool => write!(f, "bool"),
        }
    }
}

/// A value in one of the two base quantales.
///
/// Binary operations panic when the bases differ; everything above the
/// value level checks base agreement up front and reports a proper error.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Cost(CostValue),
    Bool(bool),
}

impl Value {
    pub fn base(&self) -> Base {
        match self {
            Value::Cost(_) => Base::Cost,
            Value::Bool(_) => Base::Bool,
        }
    }

    pub fn tensor(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Cost(a), Value::Cost(b)) => Value::Cost(a.add(b)),
            (Value::Bool(a), Value::Bool(b)) => Value::Bool(*a && *b),
            _ => panic!("tensor across different bases"),
        }
    }

    /// Internal hom `[self, other]`: truncated subtraction over costs,
    /// material implication over Booleans.
    pub fn hom(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Cost(a), Value::Cost(b)) => Value::Cost(a.hom(b)),
            (Value::Bool(a), Value::Bool(b)) => Value::Bool(!a || *b),
            _ => panic!("hom across different bases"),
        }
    }

    /// Compares in the arrow order of the base category, `Less` meaning
    /// closer to the initial object (`inf`, respectively `false`).
    /// For costs this is the reverse of the numeric order.
    pub fn cat_cmp(&self, other: &Value) -> Ordering {
        match (self, other) {
            (Value::Cost(a), Value::Cost(b)) => b.cmp(a),
            (Value::Bool(a), Value::Bool(b)) => a.cmp(b),
            _ => panic!("comparison across different bases"),
        }
    }

    /// Is there an arrow `self -> other` in the base category?
    /// Cost: `self >= other` as numbers. Bool: `self` implies `other`.
    pub fn entails(&self, other: &Value) -> bool {
        self.cat_cmp(other) != Ordering::Greater
    }

    pub fn is_unit(&self) -> bool {
        match self {
            Value::Cost(c) => c.is_zero(),
            Value::Bool(b) => *b,
        }
    }

    pub fn as_cost(&self) -> Option<&CostValue> {
        match self {
            Value::Cost(c) => Some(c),
            Value::Bool(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Cost(c) => write!(f, "{c}"),
            Value::Bool(b) => write!(f, "{}", if *b { "1" } else { "0" }),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<CostValue> for Value {
    fn from(c: CostValue) -> Self {
        Value::Cost(c)
    }
}

impl Base {
    /// Tensor unit: `0` for costs, `1` for Booleans. In both bases this is
    /// also the terminal object of the arrow order.
    pub fn unit(&self) -> Value {
        match self {
            Base::Cost => Value::Cost(CostValue::zero()),
            Base::Bool => Value::Bool(true),
        }
    }

    /// Top of the arrow order (terminal object); coincides with the unit.
    pub fn top(&self) -> Value {
        self.unit()
    }

    /// Bottom of the arrow order (initial object): `inf`, respectively `0`.
    pub fn bottom(&self) -> Value {
        match self {
            Base::Cost => Value::Cost(CostValue::infinity()),
            Base::Bool => Value::Bool(false),
        }
    }

    /// Categorical meet. Since the bases are total orders this picks the
    /// arrow-least element: the numeric *maximum* of a family of costs,
    /// the conjunction of a family of Booleans. Empty input yields the top.
    pub fn meet<'a, I>(&self, values: I) -> Value
    where
        I: IntoIterator<Item = &'a Value>,
    {
        let mut best: Option<&Value> = None;
        for v in values {
            match best {
                None => best = Some(v),
                Some(b) => {
                    if v.cat_cmp(b) == Ordering::Less {
                        best = Some(v);
                    }
                }
            }
        }
        best.cloned().unwrap_or_else(|| self.top())
    }

    /// Categorical join: the numeric *minimum* of a family of costs, the
    /// disjunction of a family of Booleans. Empty input yields the bottom.
    pub fn join<'a, I>(&self, values: I) -> Value
    where
        I: IntoIterator<Item = &'a Value>,
    {
        let mut best: Option<&Value> = None;
        for v in values {
            match best {
                None => best = Some(v),
                Some(b) => {
                    if v.cat_cmp(b) == Ordering::Greater {
                        best = Some(v);
                    }
                }
            }
        }
        best.cloned().unwrap_or_else(|| self.bottom())
    }

    /// Parses the text encoding: `p/q`, integer shorthand, or `inf` for
    /// costs; `0` or `1` for Booleans.
    pub fn parse_value(&self, s: &str) -> Result<Value, ParseValueError> {
        match self {
            Base::Cost => Ok(Value::Cost(s.parse()?)),
            Base::Bool => match s.trim() {
                "0" => Ok(Value::Bool(false)),
                "1" => Ok(Value::Bool(true)),
                other => Err(ParseValueError::NotBoolean(other.to_string())),
            },
        }
    }

    pub fn value_from_u64(&self, n: u64) -> Result<Value, ParseValueError> {
        match self {
            Base::Cost => Ok(Value::Cost(CostValue::from(n))),
            Base::Bool => match n {
                0 => Ok(Value::Bool(false)),
                1 => Ok(Value::Bool(true)),
                other => Err(ParseValueError::NotBoolean(other.to_string())),
            },
        }
    }
}
