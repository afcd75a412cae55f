use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ground field: a prime field F_p or the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Prime(u64),
    Rational,
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p < 2 || !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::InvalidInput(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn f2() -> Field {
        Field::Prime(2)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Prime(p) => *p,
            Field::Rational => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::from_i64(*self, 0)
    }

    pub fn one(&self) -> Scalar {
        Scalar::from_i64(*self, 1)
    }

    /// Parses `"Q"`, `"F2"`, `"p=3"` or a bare prime.
    pub fn parse(s: &str) -> Result<Field> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rational") {
            return Ok(Field::Rational);
        }
        let digits = t.trim_start_matches(['F', 'f']).trim_start_matches("p=");
        let p: u64 = digits.parse().map_err(|_| Error::InvalidInput(format!("unknown field '{s}'")))?;
        Field::prime(p)
    }

    /// All field elements, only for prime fields.
    pub fn elements(&self) -> Vec<Scalar> {
        match self {
            Field::Prime(p) => (0..*p).map(|v| Scalar::Fp { p: *p as u32, v: v as u32 }).collect(),
            Field::Rational => panic!("the rationals cannot be enumerated"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "F{p}"),
            Field::Rational => write!(f, "Q"),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Field::Rational => s.serialize_str("Q"),
            Field::Prime(p) => {
                use serde::ser::SerializeMap;
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("p", p)?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::String(s) => Field::parse(s).map_err(serde::de::Error::custom),
            serde_json::Value::Object(m) => {
                let p = m.get("p").and_then(|x| x.as_u64()).ok_or_else(|| serde::de::Error::custom("field object needs an integer 'p'"))?;
                Field::prime(p).map_err(serde::de::Error::custom)
            }
            _ => Err(serde::de::Error::custom("field must be \"Q\" or {\"p\": prime}")),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= p {
        if p % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

/// Exact field element. Prime-field values are kept in `0..p`, rationals reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp { p: u32, v: u32 },
    Q(BigRational),
}

impl Scalar {
    pub fn from_i64(field: Field, n: i64) -> Scalar {
        match field {
            Field::Prime(p) => Scalar::Fp { p: p as u32, v: n.rem_euclid(p as i64) as u32 },
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Fp { p, .. } => Field::Prime(*p as u64),
            Scalar::Q(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 0,
            Scalar::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 1,
            Scalar::Q(q) => q.is_one(),
        }
    }

    pub fn sign(field: Field, negative: bool) -> Scalar {
        Scalar::from_i64(field, if negative { -1 } else { 1 })
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Fp { p, v } => Scalar::Fp { p: *p, v: pow_mod(*v as u64, *p as u64 - 2, *p as u64) as u32 },
            Scalar::Q(q) => Scalar::Q(q.recip()),
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    /// Parses `"3"`, `"-2/5"`; over F_p the fraction is reduced mod p.
    pub fn parse(field: Field, s: &str) -> Result<Scalar> {
        let bad = || Error::InvalidInput(format!("bad scalar '{s}'"));
        let (num, den) = match s.trim().split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = num.parse().map_err(|_| bad())?;
        let d: BigInt = den.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match field {
            Field::Rational => Ok(Scalar::Q(BigRational::new(n, d))),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let reduce = |x: &BigInt| -> u32 {
                    let r = ((x % &pb) + &pb) % &pb;
                    r.to_string().parse().unwrap()
                };
                let a = Scalar::Fp { p: p as u32, v: reduce(&n) };
                let b = Scalar::Fp { p: p as u32, v: reduce(&d) };
                a.div(&b)
            }
        }
    }

    fn check(&self, other: &Scalar) {
        debug_assert_eq!(self.field(), other.field(), "mixed fields");
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp { v, .. } => write!(f, "{v}"),
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.check(o);
        match (self, o) {
            (Scalar::Fp { p, v }, Scalar::Fp { v: w, .. }) => Scalar::Fp { p: *p, v: ((*v as u64 + *w as u64) % *p as u64) as u32 },
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.check(o);
        match (self, o) {
            (Scalar::Fp { p, v }, Scalar::Fp { v: w, .. }) => Scalar::Fp { p: *p, v: ((*v as u64 * *w as u64) % *p as u64) as u32 },
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Fp { p, v } => Scalar::Fp { p: *p, v: if *v == 0 { 0 } else { p - v } },
            Scalar::Q(q) => Scalar::Q(-q),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Scalar {
    pub fn is_negative_rational(&self) -> bool {
        matches!(self, Scalar::Q(q) if q.is_negative())
    }
}
