//! Exact elements `(a + b√d)/c` of a real quadratic field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

/// Trial-division limit for extracting square factors from the radicand.
const SQUAREFREE_TRIAL_LIMIT: u64 = 1_000_000;

/// `(a + b√d)/c` in lowest terms.
///
/// Invariants: `c > 0`, `gcd(a, b, c) = 1`, `d > 1` squarefree (up to the
/// trial-division limit) whenever `b ≠ 0`, and `b = 0, d = 1` for rationals.
/// Serialized as its display string, e.g. `"(3+sqrt(3))/2"`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadIrrational {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

/// Splits `n > 0` as `f²·s` with `s` squarefree; returns `(f, s)`.
///
/// Every prime up to `∛n` is divided out; what remains has at most two prime
/// factors, so it contributes a square exactly when it is a perfect square.
fn square_part(n: &BigInt) -> (BigInt, BigInt) {
    if let Some(small) = n.to_u128() {
        let (f, s) = square_part_u128(small);
        return (BigInt::from(f), BigInt::from(s));
    }
    let mut f = BigInt::one();
    let mut t = BigInt::one();
    let mut rest = n.clone();
    let bound = (n.cbrt() + 1u32).to_u64().unwrap_or(u64::MAX).min(SQUAREFREE_TRIAL_LIMIT);
    let mut k: u64 = 2;
    while k <= bound {
        let kb = BigInt::from(k);
        let mut e = 0u32;
        while (&rest % &kb).is_zero() {
            rest /= &kb;
            e += 1;
        }
        f *= kb.pow(e / 2);
        if e % 2 == 1 {
            t *= &kb;
        }
        k += 1;
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        f *= r;
    } else {
        t *= rest;
    }
    (f, t)
}

fn square_part_u128(n: u128) -> (u128, u128) {
    let (mut f, mut t, mut rest) = (1u128, 1u128, n);
    let mut k: u128 = 2;
    while k * k * k <= n && k <= SQUAREFREE_TRIAL_LIMIT as u128 {
        let mut e = 0;
        while rest % k == 0 {
            rest /= k;
            e += 1;
        }
        f *= k.pow(e / 2);
        if e % 2 == 1 {
            t *= k;
        }
        k += 1;
    }
    let r = rest.isqrt();
    if r * r == rest {
        f *= r;
    } else {
        t *= rest;
    }
    (f, t)
}

impl QuadIrrational {
    /// Normalizing constructor. Panics if `c = 0` or `d < 0`.
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        assert!(!c.is_zero(), "zero denominator");
        assert!(!d.is_negative(), "negative radicand");
        let (mut b, mut d) = (b, d);
        if d.is_zero() || b.is_zero() {
            b = BigInt::zero();
            d = BigInt::one();
        } else {
            let (f, s) = square_part(&d);
            b *= f;
            d = s;
        }
        Self::in_field(a, b, c, d)
    }

    /// Normalizes with a radicand already known to be squarefree (or 1).
    fn in_field(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        let (mut a, mut b, mut c, mut d) = (a, b, c, d);
        if d.is_one() {
            a += &b;
            b = BigInt::zero();
        }
        if b.is_zero() {
            d = BigInt::one();
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() && !g.is_zero() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        QuadIrrational { a, b, c, d }
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        Self::new(n.into(), BigInt::zero(), BigInt::one(), BigInt::one())
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    /// Root `(−B ± √(B²−4AC)) / 2A` of `Ax² + Bx + C`; `None` if not real or `A = 0`.
    pub fn quadratic_root(qa: &BigInt, qb: &BigInt, qc: &BigInt, plus: bool) -> Option<Self> {
        if qa.is_zero() {
            return None;
        }
        let disc = qb * qb - BigInt::from(4) * qa * qc;
        if disc.is_negative() {
            return None;
        }
        let sign = if plus { BigInt::one() } else { -BigInt::one() };
        Some(Self::new(-qb, sign, qa * 2, disc))
    }

    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    /// Galois conjugate `(a − b√d)/c`.
    pub fn conj(&self) -> Self {
        QuadIrrational {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    /// `x·x'`, always rational.
    pub fn norm(&self) -> Self {
        let n = self * &self.conj();
        debug_assert!(n.is_rational());
        n
    }

    /// `x + x'`, always rational.
    pub fn trace(&self) -> Self {
        Self::in_field(&self.a * BigInt::from(2), BigInt::zero(), self.c.clone(), BigInt::one())
    }

    /// Integer value of a rational element with denominator one.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.is_rational() && self.c.is_one()).then(|| self.a.clone())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // c / (a + b√d) = c(a − b√d) / (a² − b²d)
        let den = &self.a * &self.a - &self.b * &self.b * &self.d;
        Some(Self::in_field(
            &self.c * &self.a,
            -(&self.c * &self.b),
            den,
            self.d.clone(),
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        other.recip().map(|r| self * &r)
    }

    /// Exact sign of the real number.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.sign();
        let sb = self.b.sign();
        use num_bigint::Sign::*;
        match (sa, sb) {
            (NoSign, NoSign) => Ordering::Equal,
            (Plus, NoSign) | (NoSign, Plus) | (Plus, Plus) => Ordering::Greater,
            (Minus, NoSign) | (NoSign, Minus) | (Minus, Minus) => Ordering::Less,
            _ => {
                // opposite signs: compare a² with b²d
                let lhs = &self.a * &self.a;
                let rhs = &self.b * &self.b * &self.d;
                let mag = lhs.cmp(&rhs);
                if sa == Plus {
                    mag
                } else {
                    mag.reverse()
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let c = self.c.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        (a + b * d.sqrt()) / c
    }

    fn field_of(&self, other: &Self) -> BigInt {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => other.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(self.d, other.d, "operands lie in different quadratic fields");
                self.d.clone()
            }
        }
    }
}

impl Add for &QuadIrrational {
    type Output = QuadIrrational;
    fn add(self, o: &QuadIrrational) -> QuadIrrational {
        let d = self.field_of(o);
        QuadIrrational::in_field(
            &self.a * &o.c + &o.a * &self.c,
            &self.b * &o.c + &o.b * &self.c,
            &self.c * &o.c,
            d,
        )
    }
}

impl Sub for &QuadIrrational {
    type Output = QuadIrrational;
    fn sub(self, o: &QuadIrrational) -> QuadIrrational {
        self + &(-o)
    }
}

impl Neg for &QuadIrrational {
    type Output = QuadIrrational;
    fn neg(self) -> QuadIrrational {
        QuadIrrational {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }
}

impl Mul for &QuadIrrational {
    type Output = QuadIrrational;
    fn mul(self, o: &QuadIrrational) -> QuadIrrational {
        let d = self.field_of(o);
        QuadIrrational::in_field(
            &self.a * &o.a + &self.b * &o.b * &d,
            &self.a * &o.b + &self.b * &o.a,
            &self.c * &o.c,
            d,
        )
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadIrrational {
            type Output = QuadIrrational;
            fn $m(self, o: QuadIrrational) -> QuadIrrational {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl PartialOrd for QuadIrrational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if !self.is_rational() && !other.is_rational() && self.d != other.d {
            return None;
        }
        Some((self - other).signum())
    }
}

impl fmt::Display for QuadIrrational {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let num = if self.b.is_zero() {
            self.a.to_string()
        } else {
            let mag = self.b.abs();
            let root = if mag.is_one() {
                format!("sqrt({})", self.d)
            } else {
                format!("{mag}*sqrt({})", self.d)
            };
            match (self.a.is_zero(), self.b.is_negative()) {
                (true, false) => root,
                (true, true) => format!("-{root}"),
                (false, false) => format!("{}+{root}", self.a),
                (false, true) => format!("{}-{root}", self.a),
            }
        };
        if self.c.is_one() {
            f.write_str(&num)
        } else if self.b.is_zero() {
            write!(f, "{num}/{}", self.c)
        } else {
            write!(f, "({num})/{}", self.c)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {0:?} as a quadratic irrational")]
pub struct ParseQuadError(String);

fn parse_int(s: &str, whole: &str) -> Result<BigInt, ParseQuadError> {
    BigInt::from_str(s).map_err(|_| ParseQuadError(whole.to_string()))
}

/// Inverse of `Display`: `a`, `a/c`, `[a±][k*]sqrt(d)` and `(…)/c`.
impl FromStr for QuadIrrational {
    type Err = ParseQuadError;

    fn from_str(text: &str) -> Result<Self, ParseQuadError> {
        let err = || ParseQuadError(text.to_string());
        let s = text.trim();
        let (num, c) = match s.rfind('/') {
            Some(i) if !s[i..].contains(')') => (&s[..i], parse_int(&s[i + 1..], text)?),
            _ => (s, BigInt::one()),
        };
        let num = num.strip_prefix('(').and_then(|n| n.strip_suffix(')')).unwrap_or(num);
        let (a, b, d) = match num.find("sqrt(") {
            None => (parse_int(num, text)?, BigInt::zero(), BigInt::one()),
            Some(i) => {
                let d = parse_int(num[i + 5..].strip_suffix(')').ok_or_else(err)?, text)?;
                let prefix = &num[..i];
                let (head, coef) = match prefix.strip_suffix('*') {
                    Some(p) => {
                        let j = p.rfind(['+', '-']).map_or(0, |j| j + 1);
                        (&p[..j], parse_int(&p[j..], text)?)
                    }
                    None => (prefix, BigInt::one()),
                };
                let (a, b) = match head {
                    "" => (BigInt::zero(), coef),
                    "-" => (BigInt::zero(), -coef),
                    h if h.ends_with('+') => (parse_int(&h[..h.len() - 1], text)?, coef),
                    h if h.ends_with('-') => (parse_int(&h[..h.len() - 1], text)?, -coef),
                    _ => return Err(err()),
                };
                (a, b, d)
            }
        };
        if c.is_zero() || d.is_negative() {
            return Err(err());
        }
        Ok(QuadIrrational::new(a, b, c, d))
    }
}

impl Serialize for QuadIrrational {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuadIrrational {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for QuadIrrational {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
