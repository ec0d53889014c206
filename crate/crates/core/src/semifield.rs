//! Linearly ordered idempotent semifields.
//!
//! A [`Semifield`] is a zero-sized context that fixes the meaning of ⊕, ⊗,
//! inversion and rational powers for [`Value`]s over a carrier type. Exact
//! arithmetic uses [`Rational`] and is available for max-plus and min-plus
//! only; `f64` supports all four semifields. The max-times and min-times
//! semifields map to max-plus and min-plus by taking logarithms, which is how
//! to treat them exactly.
//!
//! The zero element 𝟘 is the dedicated [`Value::Zero`] variant and never an
//! in-band carrier value.

use std::cmp::Ordering;
use std::fmt;
use std::marker::PhantomData;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemifieldId {
    MaxPlus,
    MinPlus,
    MaxTimes,
    MinTimes,
}

impl SemifieldId {
    pub const ALL: [SemifieldId; 4] = [
        SemifieldId::MaxPlus,
        SemifieldId::MinPlus,
        SemifieldId::MaxTimes,
        SemifieldId::MinTimes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SemifieldId::MaxPlus => "max-plus",
            SemifieldId::MinPlus => "min-plus",
            SemifieldId::MaxTimes => "max-times",
            SemifieldId::MinTimes => "min-times",
        }
    }

    /// ⊕ is the maximum of the carrier order.
    pub fn is_max(self) -> bool {
        matches!(self, SemifieldId::MaxPlus | SemifieldId::MaxTimes)
    }

    /// ⊗ is carrier addition.
    pub fn is_additive(self) -> bool {
        matches!(self, SemifieldId::MaxPlus | SemifieldId::MinPlus)
    }

    /// Serialized form of 𝟘.
    pub fn zero_token(self) -> &'static str {
        match self {
            SemifieldId::MaxPlus => "-inf",
            SemifieldId::MinPlus | SemifieldId::MinTimes => "+inf",
            SemifieldId::MaxTimes => "zero",
        }
    }
}

impl fmt::Display for SemifieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SemifieldId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SemifieldId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::validation("semifield", format!("unknown semifield '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::validation("mode", format!("unknown mode '{other}'"))),
        }
    }
}

/// Numeric carrier underlying a semifield: exact rationals or `f64`.
pub trait Carrier: Clone + PartialEq + PartialOrd + fmt::Debug + Send + Sync + 'static {
    const MODE: Mode;

    fn from_rational(r: &Rational) -> Self;
    fn c_zero() -> Self;
    fn c_one() -> Self;
    fn c_add(&self, other: &Self) -> Self;
    fn c_neg(&self) -> Self;
    fn c_mul(&self, other: &Self) -> Self;
    fn c_recip(&self) -> Self;
    /// `r · self`.
    fn c_scale(&self, r: &Rational) -> Self;
    /// `self^r` for a positive carrier value, or `None` when the result is not
    /// representable in this carrier.
    fn c_pow(&self, r: &Rational) -> Option<Self>;
    /// Rejects NaN and infinities.
    fn c_is_valid(&self) -> bool;
    fn c_is_positive(&self) -> bool;
    fn c_to_text(&self) -> String;
    fn c_parse(s: &str) -> Option<Self>;
    fn c_to_f64(&self) -> f64;

    fn c_cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }
}

impl Carrier for Rational {
    const MODE: Mode = Mode::Exact;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn c_zero() -> Self {
        Rational::zero()
    }
    fn c_one() -> Self {
        Rational::one()
    }
    fn c_add(&self, other: &Self) -> Self {
        self + other
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn c_recip(&self) -> Self {
        self.recip()
    }
    fn c_scale(&self, r: &Rational) -> Self {
        r * self
    }
    fn c_pow(&self, r: &Rational) -> Option<Self> {
        if !r.is_integer() {
            return None;
        }
        let e: i32 = r.numer().try_into().ok()?;
        Some(Rational::from(num_traits::Pow::pow(self.as_big(), e)))
    }
    fn c_is_valid(&self) -> bool {
        true
    }
    fn c_is_positive(&self) -> bool {
        self.is_positive()
    }
    fn c_to_text(&self) -> String {
        self.to_string()
    }
    fn c_parse(s: &str) -> Option<Self> {
        s.parse().ok()
    }
    fn c_to_f64(&self) -> f64 {
        self.to_f64()
    }
    fn c_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl Carrier for f64 {
    const MODE: Mode = Mode::Float;

    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }
    fn c_zero() -> Self {
        0.0
    }
    fn c_one() -> Self {
        1.0
    }
    fn c_add(&self, other: &Self) -> Self {
        self + other
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn c_recip(&self) -> Self {
        1.0 / self
    }
    fn c_scale(&self, r: &Rational) -> Self {
        r.to_f64() * self
    }
    fn c_pow(&self, r: &Rational) -> Option<Self> {
        Some(self.powf(r.to_f64()))
    }
    fn c_is_valid(&self) -> bool {
        self.is_finite()
    }
    fn c_is_positive(&self) -> bool {
        *self > 0.0
    }
    fn c_to_text(&self) -> String {
        format!("{self}")
    }
    fn c_parse(s: &str) -> Option<Self> {
        match s.parse::<Rational>() {
            Ok(r) => Some(r.to_f64()),
            Err(_) => s.trim().parse::<f64>().ok().filter(|v| v.is_finite()),
        }
    }
    fn c_to_f64(&self) -> f64 {
        *self
    }
}

/// An element of a semifield: 𝟘 or a finite carrier value.
#[derive(Debug, Clone, PartialEq)]
pub enum Value<C> {
    Zero,
    Finite(C),
}

impl<C> Value<C> {
    pub fn is_zero(&self) -> bool {
        matches!(self, Value::Zero)
    }

    pub fn finite(&self) -> Option<&C> {
        match self {
            Value::Zero => None,
            Value::Finite(c) => Some(c),
        }
    }
}

impl<C: Eq> Eq for Value<C> {}

/// Operations of one semifield over carrier `C`.
pub struct Semifield<C> {
    id: SemifieldId,
    _carrier: PhantomData<fn() -> C>,
}

impl<C> Clone for Semifield<C> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<C> Copy for Semifield<C> {}

impl<C> PartialEq for Semifield<C> {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl<C> Eq for Semifield<C> {}

impl<C> fmt::Debug for Semifield<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Semifield({})", self.id)
    }
}

pub type ExactSemifield = Semifield<Rational>;
pub type FloatSemifield = Semifield<f64>;

impl<C: Carrier> Semifield<C> {
    /// Fails for max-times and min-times over exact rationals, which are not
    /// closed under rational powers.
    pub fn new(id: SemifieldId) -> Result<Self> {
        if C::MODE == Mode::Exact && !id.is_additive() {
            return Err(Error::validation(
                "semifield",
                format!(
                    "{id} is only available in float mode; take logarithms to map it to {}",
                    if id.is_max() { "max-plus" } else { "min-plus" }
                ),
            ));
        }
        Ok(Semifield {
            id,
            _carrier: PhantomData,
        })
    }

    pub fn id(&self) -> SemifieldId {
        self.id
    }

    pub fn mode(&self) -> Mode {
        C::MODE
    }

    pub fn zero(&self) -> Value<C> {
        Value::Zero
    }

    pub fn one(&self) -> Value<C> {
        if self.id.is_additive() {
            Value::Finite(C::c_zero())
        } else {
            Value::Finite(C::c_one())
        }
    }

    /// Wraps a carrier value, checking it is a legal nonzero element.
    pub fn finite(&self, c: C) -> Result<Value<C>> {
        if !c.c_is_valid() {
            return Err(Error::Domain(format!("non-finite carrier value {c:?}")));
        }
        if !self.id.is_additive() && !c.c_is_positive() {
            return Err(Error::Domain(format!(
                "{} carrier values must be positive, got {c:?}",
                self.id
            )));
        }
        Ok(Value::Finite(c))
    }

    pub fn from_rational(&self, r: &Rational) -> Result<Value<C>> {
        self.finite(C::from_rational(r))
    }

    pub fn oplus(&self, a: &Value<C>, b: &Value<C>) -> Value<C> {
        if self.leq(a, b) {
            b.clone()
        } else {
            a.clone()
        }
    }

    /// ⊕ of any number of values; the empty sum is 𝟘.
    pub fn sum<'a, I>(&self, values: I) -> Value<C>
    where
        I: IntoIterator<Item = &'a Value<C>>,
        C: 'a,
    {
        let mut best: Option<&Value<C>> = None;
        for v in values {
            best = match best {
                Some(b) if self.leq(v, b) => Some(b),
                _ => Some(v),
            };
        }
        best.cloned().unwrap_or(Value::Zero)
    }

    pub fn otimes(&self, a: &Value<C>, b: &Value<C>) -> Value<C> {
        match (a, b) {
            (Value::Finite(x), Value::Finite(y)) => Value::Finite(if self.id.is_additive() {
                x.c_add(y)
            } else {
                x.c_mul(y)
            }),
            _ => Value::Zero,
        }
    }

    pub fn inv(&self, a: &Value<C>) -> Result<Value<C>> {
        match a {
            Value::Zero => Err(Error::Domain("inverse of zero element".into())),
            Value::Finite(x) => Ok(Value::Finite(if self.id.is_additive() {
                x.c_neg()
            } else {
                x.c_recip()
            })),
        }
    }

    /// `a ⊗ b⁻¹`.
    pub fn div(&self, a: &Value<C>, b: &Value<C>) -> Result<Value<C>> {
        Ok(self.otimes(a, &self.inv(b)?))
    }

    pub fn tpow(&self, a: &Value<C>, r: &Rational) -> Result<Value<C>> {
        match a {
            Value::Zero if r.is_positive() => Ok(Value::Zero),
            Value::Zero => Err(Error::Domain("zero to non-positive power".into())),
            Value::Finite(x) => {
                if r.is_zero() {
                    return Ok(self.one());
                }
                if self.id.is_additive() {
                    Ok(Value::Finite(x.c_scale(r)))
                } else {
                    x.c_pow(r).map(Value::Finite).ok_or_else(|| {
                        Error::Domain(format!("{x:?}^{r} is not representable in {}", self.id))
                    })
                }
            }
        }
    }

    /// The induced order: `a ≤ b` iff `a ⊕ b = b`.
    pub fn cmp(&self, a: &Value<C>, b: &Value<C>) -> Ordering {
        match (a, b) {
            (Value::Zero, Value::Zero) => Ordering::Equal,
            (Value::Zero, _) => Ordering::Less,
            (_, Value::Zero) => Ordering::Greater,
            (Value::Finite(x), Value::Finite(y)) => {
                if self.id.is_max() {
                    x.c_cmp(y)
                } else {
                    y.c_cmp(x)
                }
            }
        }
    }

    pub fn leq(&self, a: &Value<C>, b: &Value<C>) -> bool {
        self.cmp(a, b) != Ordering::Greater
    }

    pub fn lt(&self, a: &Value<C>, b: &Value<C>) -> bool {
        self.cmp(a, b) == Ordering::Less
    }

    /// Least of the values in the induced order; `None` for an empty input.
    pub fn min_of<'a, I>(&self, values: I) -> Option<Value<C>>
    where
        I: IntoIterator<Item = &'a Value<C>>,
        C: 'a,
    {
        values.into_iter().min_by(|a, b| self.cmp(a, b)).cloned()
    }

    pub fn format(&self, v: &Value<C>) -> String {
        match v {
            Value::Zero => self.id.zero_token().to_string(),
            Value::Finite(c) => c.c_to_text(),
        }
    }

    /// Parses a serialized value. `"zero"` is accepted as 𝟘 in every semifield.
    pub fn parse(&self, s: &str) -> std::result::Result<Value<C>, String> {
        let t = s.trim();
        if t == "zero" || t == self.id.zero_token() {
            return Ok(Value::Zero);
        }
        let c = C::c_parse(t).ok_or_else(|| format!("malformed value '{s}'"))?;
        self.finite(c).map_err(|e| match e {
            Error::Domain(m) => m,
            other => other.to_string(),
        })
    }

    pub fn to_f64(&self, v: &Value<C>) -> f64 {
        match v {
            Value::Zero => match self.id {
                SemifieldId::MaxPlus => f64::NEG_INFINITY,
                SemifieldId::MaxTimes => 0.0,
                SemifieldId::MinPlus | SemifieldId::MinTimes => f64::INFINITY,
            },
            Value::Finite(c) => c.c_to_f64(),
        }
    }
}

impl ExactSemifield {
    pub fn max_plus() -> Self {
        Semifield {
            id: SemifieldId::MaxPlus,
            _carrier: PhantomData,
        }
    }

    pub fn min_plus() -> Self {
        Semifield {
            id: SemifieldId::MinPlus,
            _carrier: PhantomData,
        }
    }

    /// Converts an exact value to float for the same semifield.
    pub fn value_to_float(&self, v: &Value<Rational>) -> Value<f64> {
        match v {
            Value::Zero => Value::Zero,
            Value::Finite(r) => Value::Finite(r.to_f64()),
        }
    }
}
