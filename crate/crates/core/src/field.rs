//! Exact scalars over the rationals and the two quadratic cyclotomic
//! extensions `Q(i)` and `Q(omega)`, where `omega` is a primitive cube
//! root of unity.
//!
//! Every element is stored as `a + b*zeta` with `a`, `b` reduced
//! rationals and `zeta` determined by the field tag:
//!
//! * [`FieldTag::Q`]: `zeta = 1`, with the invariant `b = 0`;
//! * [`FieldTag::QI`]: `zeta = i`, `zeta^2 = -1`;
//! * [`FieldTag::QOmega`]: `zeta = omega`, `zeta^2 = -1 - zeta`.
//!
//! Arithmetic never mixes tags; promotion from `Q` into an extension is
//! explicit through [`FieldElem::widen`]. There is no floating point
//! anywhere in this crate.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored reduced with a positive
/// denominator.
pub type Rational = BigRational;

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("invalid rational `{s}`")))
    };
    let p = parse_int(num)?;
    let q = parse_int(den)?;
    if q.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(p, q))
}

/// Renders a rational as `"p/q"`, eliding a unit denominator.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Identifies which of the three supported fields an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldTag {
    /// The rational numbers.
    Q,
    /// The Gaussian rationals `Q(i)`.
    QI,
    /// The Eisenstein rationals `Q(omega)`.
    QOmega,
}

impl FieldTag {
    /// Canonical name used in JSON schemas.
    pub fn name(self) -> &'static str {
        match self {
            FieldTag::Q => "Q",
            FieldTag::QI => "Q_I",
            FieldTag::QOmega => "Q_OMEGA",
        }
    }

    /// Inverse of [`FieldTag::name`].
    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "Q" => Ok(FieldTag::Q),
            "Q_I" => Ok(FieldTag::QI),
            "Q_OMEGA" => Ok(FieldTag::QOmega),
            other => Err(Error::Parse(format!("unknown field tag `{other}`"))),
        }
    }

    fn zeta_symbol(self) -> &'static str {
        match self {
            FieldTag::Q => "one",
            FieldTag::QI => "i",
            FieldTag::QOmega => "omega",
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An exact element `a + b*zeta` of `Q`, `Q(i)` or `Q(omega)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    tag: FieldTag,
    a: Rational,
    b: Rational,
}

impl FieldElem {
    /// Builds an element, rejecting a nonzero `zeta` part over `Q`.
    pub fn new(tag: FieldTag, a: Rational, b: Rational) -> Result<Self> {
        if tag == FieldTag::Q && !b.is_zero() {
            return Err(Error::Parse(
                "rational element cannot carry a zeta component".into(),
            ));
        }
        Ok(FieldElem { tag, a, b })
    }

    pub fn zero(tag: FieldTag) -> Self {
        FieldElem { tag, a: Rational::zero(), b: Rational::zero() }
    }

    pub fn one(tag: FieldTag) -> Self {
        FieldElem { tag, a: Rational::one(), b: Rational::zero() }
    }

    /// A rational embedded in `Q`.
    pub fn from_rational(a: Rational) -> Self {
        FieldElem { tag: FieldTag::Q, a, b: Rational::zero() }
    }

    /// An integer embedded in `Q`.
    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `a + b*i` in `Q(i)`.
    pub fn qi(a: Rational, b: Rational) -> Self {
        FieldElem { tag: FieldTag::QI, a, b }
    }

    /// `a + b*omega` in `Q(omega)`.
    pub fn qomega(a: Rational, b: Rational) -> Self {
        FieldElem { tag: FieldTag::QOmega, a, b }
    }

    /// The imaginary unit of `Q(i)`.
    pub fn i() -> Self {
        Self::qi(Rational::zero(), Rational::one())
    }

    /// The primitive cube root of unity generating `Q(omega)`.
    pub fn omega() -> Self {
        Self::qomega(Rational::zero(), Rational::one())
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    /// The rational component (coefficient of `1`).
    pub fn re(&self) -> &Rational {
        &self.a
    }

    /// The coefficient of `zeta`.
    pub fn zeta_coeff(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// True when the element lies in the prime field (no `zeta` part).
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn require_same_tag(&self, rhs: &FieldElem) -> Result<()> {
        if self.tag == rhs.tag {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.tag, rhs.tag))
        }
    }

    pub fn add(&self, rhs: &FieldElem) -> Result<FieldElem> {
        self.require_same_tag(rhs)?;
        Ok(FieldElem {
            tag: self.tag,
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        })
    }

    pub fn sub(&self, rhs: &FieldElem) -> Result<FieldElem> {
        self.require_same_tag(rhs)?;
        Ok(FieldElem {
            tag: self.tag,
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        })
    }

    pub fn mul(&self, rhs: &FieldElem) -> Result<FieldElem> {
        self.require_same_tag(rhs)?;
        Ok(self.mul_same_tag(rhs))
    }

    // Multiplication with the tag already checked; reduction by the
    // minimal polynomial of zeta keeps the result in the (1, zeta) basis.
    fn mul_same_tag(&self, rhs: &FieldElem) -> FieldElem {
        let aa = &self.a * &rhs.a;
        let bb = &self.b * &rhs.b;
        let cross = &self.a * &rhs.b + &self.b * &rhs.a;
        match self.tag {
            FieldTag::Q => FieldElem { tag: self.tag, a: aa, b: Rational::zero() },
            // zeta^2 = -1
            FieldTag::QI => FieldElem { tag: self.tag, a: aa - bb, b: cross },
            // zeta^2 = -1 - zeta
            FieldTag::QOmega => FieldElem { tag: self.tag, a: aa - &bb, b: cross - bb },
        }
    }

    pub fn div(&self, rhs: &FieldElem) -> Result<FieldElem> {
        self.require_same_tag(rhs)?;
        let inv = rhs.inverse()?;
        Ok(self.mul_same_tag(&inv))
    }

    /// Exact multiplicative inverse.
    pub fn inverse(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        let conj = self.conjugate();
        Ok(FieldElem {
            tag: self.tag,
            a: conj.a / &n,
            b: conj.b / n,
        })
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem { tag: self.tag, a: -&self.a, b: -&self.b }
    }

    /// Complex conjugation: `i -> -i`, `omega -> omega^2 = -1 - omega`,
    /// rationals fixed. An involution.
    pub fn conjugate(&self) -> FieldElem {
        match self.tag {
            FieldTag::Q => self.clone(),
            FieldTag::QI => FieldElem { tag: self.tag, a: self.a.clone(), b: -&self.b },
            FieldTag::QOmega => FieldElem {
                tag: self.tag,
                a: &self.a - &self.b,
                b: -&self.b,
            },
        }
    }

    /// The field norm `x * conjugate(x)` as a rational: `a^2 + b^2` over
    /// `Q(i)`, `a^2 - a*b + b^2` over `Q(omega)`, `a^2` over `Q`.
    pub fn norm(&self) -> Rational {
        let a2 = &self.a * &self.a;
        let b2 = &self.b * &self.b;
        match self.tag {
            FieldTag::Q => a2,
            FieldTag::QI => a2 + b2,
            FieldTag::QOmega => a2 - &self.a * &self.b + b2,
        }
    }

    /// Small nonnegative power by repeated multiplication.
    pub fn pow(&self, n: u32) -> FieldElem {
        let mut acc = FieldElem::one(self.tag);
        for _ in 0..n {
            acc = acc.mul_same_tag(self);
        }
        acc
    }

    /// Explicit promotion `Q -> Q(i)` or `Q -> Q(omega)`. Widening between
    /// the two extensions (or narrowing) is rejected.
    pub fn widen(&self, target: FieldTag) -> Result<FieldElem> {
        if self.tag == target {
            return Ok(self.clone());
        }
        if self.tag == FieldTag::Q {
            return Ok(FieldElem { tag: target, a: self.a.clone(), b: self.b.clone() });
        }
        Err(Error::CannotWiden { from: self.tag, to: target })
    }

    /// Multiplicative order when the element is a root of unity.
    ///
    /// The supported fields only contain roots of unity of order dividing
    /// 4 or 6, so a small search bound is exhaustive.
    pub fn multiplicative_order(&self) -> Result<u32> {
        let mut power = self.clone();
        for j in 1..=12u32 {
            if power.is_one() {
                return Ok(j);
            }
            power = power.mul_same_tag(self);
        }
        Err(Error::NotRootOfUnity(self.to_string()))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sym = self.tag.zeta_symbol();
        let zeta_term = |b: &Rational| {
            if b.is_one() {
                sym.to_string()
            } else if (-b).is_one() {
                format!("-{sym}")
            } else {
                format!("{b}*{sym}")
            }
        };
        if self.a.is_zero() {
            return write!(f, "{}", zeta_term(&self.b));
        }
        if self.b.is_negative() {
            write!(f, "{}-{}", self.a, zeta_term(&-&self.b))
        } else {
            write!(f, "{}+{}", self.a, zeta_term(&self.b))
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self, self.tag.name())
    }
}

// JSON form: plain rationals as "p/q"; extension elements as
// {"a": "p/q", "b": "r/s", "zeta": "i"|"omega"|"one"}.
impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.tag {
            FieldTag::Q => serializer.serialize_str(&format_rational(&self.a)),
            _ => {
                use serde::ser::SerializeMap;
                let mut map = serializer.serialize_map(Some(3))?;
                map.serialize_entry("a", &format_rational(&self.a))?;
                map.serialize_entry("b", &format_rational(&self.b))?;
                map.serialize_entry("zeta", self.tag.zeta_symbol())?;
                map.end()
            }
        }
    }
}

struct FieldElemVisitor;

impl<'de> Visitor<'de> for FieldElemVisitor {
    type Value = FieldElem;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a rational string \"p/q\" or {a, b, zeta} object")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<FieldElem, E> {
        let r = parse_rational(v).map_err(E::custom)?;
        Ok(FieldElem::from_rational(r))
    }

    fn visit_map<M: MapAccess<'de>>(self, mut map: M) -> std::result::Result<FieldElem, M::Error> {
        let mut a: Option<String> = None;
        let mut b: Option<String> = None;
        let mut zeta: Option<String> = None;
        while let Some(key) = map.next_key::<String>()? {
            match key.as_str() {
                "a" => a = Some(map.next_value()?),
                "b" => b = Some(map.next_value()?),
                "zeta" => zeta = Some(map.next_value()?),
                other => return Err(de::Error::unknown_field(other, &["a", "b", "zeta"])),
            }
        }
        let a = parse_rational(&a.ok_or_else(|| de::Error::missing_field("a"))?)
            .map_err(de::Error::custom)?;
        let b = parse_rational(&b.ok_or_else(|| de::Error::missing_field("b"))?)
            .map_err(de::Error::custom)?;
        let zeta = zeta.ok_or_else(|| de::Error::missing_field("zeta"))?;
        let tag = match zeta.as_str() {
            "one" => FieldTag::Q,
            "i" => FieldTag::QI,
            "omega" => FieldTag::QOmega,
            other => return Err(de::Error::custom(format!("unknown zeta `{other}`"))),
        };
        FieldElem::new(tag, a, b).map_err(de::Error::custom)
    }
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        deserializer.deserialize_any(FieldElemVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn gaussian_unit_norm() {
        // (1 + i)(1 - i) = 2
        let x = FieldElem::qi(rat(1, 1), rat(1, 1));
        let y = FieldElem::qi(rat(1, 1), rat(-1, 1));
        assert_eq!(x.mul(&y).unwrap(), FieldElem::qi(rat(2, 1), rat(0, 1)));
    }

    #[test]
    fn omega_squares_by_minimal_polynomial() {
        // omega * omega = -1 - omega
        let w = FieldElem::omega();
        assert_eq!(w.mul(&w).unwrap(), FieldElem::qomega(rat(-1, 1), rat(-1, 1)));
    }

    #[test]
    fn omega_inverse_expands_back_to_one() {
        let one = FieldElem::one(FieldTag::QOmega);
        let w = FieldElem::omega();
        let inv = one.div(&w).unwrap();
        assert_eq!(inv, FieldElem::qomega(rat(-1, 1), rat(-1, 1)));
        // direct expansion check: (-1 - omega) * omega = 1
        assert_eq!(inv.mul(&w).unwrap(), one);
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(FieldElem::i().conjugate(), FieldElem::qi(rat(0, 1), rat(-1, 1)));
        // 2 + 3*omega -> 2 + 3*(-1 - omega) = -1 - 3*omega
        let x = FieldElem::qomega(rat(2, 1), rat(3, 1));
        assert_eq!(x.conjugate(), FieldElem::qomega(rat(-1, 1), rat(-3, 1)));
        let r = FieldElem::from_rational(rat(5, 7));
        assert_eq!(r.conjugate(), r);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let one = FieldElem::one(FieldTag::QI);
        let zero = FieldElem::zero(FieldTag::QI);
        assert!(matches!(one.div(&zero), Err(Error::DivisionByZero)));
    }

    #[test]
    fn mixing_tags_is_an_error() {
        let x = FieldElem::i();
        let y = FieldElem::omega();
        assert!(matches!(x.add(&y), Err(Error::FieldMismatch(..))));
        assert!(matches!(x.mul(&y), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn widening_rules() {
        let two = FieldElem::from_int(2);
        assert_eq!(two.widen(FieldTag::QI).unwrap().tag(), FieldTag::QI);
        assert_eq!(two.widen(FieldTag::QOmega).unwrap().tag(), FieldTag::QOmega);
        assert!(FieldElem::i().widen(FieldTag::QOmega).is_err());
        assert!(FieldElem::omega().widen(FieldTag::Q).is_err());
    }

    #[test]
    fn multiplicative_orders_of_roots_of_unity() {
        assert_eq!(FieldElem::from_int(1).multiplicative_order().unwrap(), 1);
        assert_eq!(FieldElem::from_int(-1).multiplicative_order().unwrap(), 2);
        assert_eq!(FieldElem::i().multiplicative_order().unwrap(), 4);
        assert_eq!(FieldElem::omega().multiplicative_order().unwrap(), 3);
        assert_eq!(FieldElem::omega().neg().multiplicative_order().unwrap(), 6);
        assert!(FieldElem::from_int(2).multiplicative_order().is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(FieldElem::from_rational(rat(3, 2)).to_string(), "3/2");
        assert_eq!(FieldElem::qi(rat(1, 1), rat(-2, 1)).to_string(), "1-2*i");
        assert_eq!(FieldElem::qi(rat(0, 1), rat(1, 1)).to_string(), "i");
        assert_eq!(FieldElem::qomega(rat(-1, 1), rat(-1, 1)).to_string(), "-1-omega");
    }

    #[test]
    fn rational_parse_round_trip() {
        for s in ["0", "1", "-1", "3/2", "-22/7", "10"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        assert_eq!(format_rational(&parse_rational("4/2").unwrap()), "2");
        assert_eq!(format_rational(&parse_rational("1/-2").unwrap()), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
