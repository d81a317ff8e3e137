//! Exact arithmetic over GF(p), GF(p^k) and the rationals.
//!
//! Finite-field elements are encoded as integers in `[0, p^k)` whose base-p
//! digits are the coefficients of the residue polynomial, constant term
//! least significant. With `p^k <= 2^16` multiplication goes through
//! discrete log/exp tables built once per field.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported finite field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// An element of some [`FieldSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Finite(u32),
    Rational(BigRational),
}

impl Scalar {
    pub fn rational(num: i64, den: i64) -> Scalar {
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn as_finite(&self) -> Option<u32> {
        match self {
            Scalar::Finite(v) => Some(*v),
            Scalar::Rational(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Finite(v) => write!(f, "{v}"),
            Scalar::Rational(r) => write!(f, "{r}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Finite(v) => serializer.serialize_u32(*v),
            Scalar::Rational(r) => serializer.serialize_str(&r.to_string()),
        }
    }
}

struct ScalarVisitor;

impl Visitor<'_> for ScalarVisitor {
    type Value = Scalar;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a field encoding integer or an \"a/b\" rational string")
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Scalar, E> {
        u32::try_from(v)
            .map(Scalar::Finite)
            .map_err(|_| E::custom("finite scalar out of range"))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Scalar, E> {
        u64::try_from(v)
            .map_err(|_| E::custom("negative finite scalar"))
            .and_then(|v| self.visit_u64(v))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Scalar, E> {
        parse_rational(v)
            .map(Scalar::Rational)
            .ok_or_else(|| E::custom(format!("invalid rational {v:?}")))
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Scalar, D::Error> {
        deserializer.deserialize_any(ScalarVisitor)
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
    }
}

#[derive(Debug)]
struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    /// `k + 1` ascending digits; `[0, 1]` for prime fields.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Debug)]
enum Kind {
    Finite(FiniteField),
    Rational,
}

/// A validated field description. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct FieldSpec {
    kind: Arc<Kind>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        match (&*self.kind, &*other.kind) {
            (Kind::Rational, Kind::Rational) => true,
            (Kind::Finite(a), Kind::Finite(b)) => a.p == b.p && a.k == b.k && a.modulus == b.modulus,
            _ => false,
        }
    }
}

impl Eq for FieldSpec {}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.kind {
            Kind::Rational => f.write_str("Q"),
            Kind::Finite(ff) if ff.k == 1 => write!(f, "GF({})", ff.p),
            Kind::Finite(ff) => {
                write!(f, "GF({}) modulus", ff.q)?;
                for d in &ff.modulus {
                    write!(f, " {d}")?;
                }
                Ok(())
            }
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^k` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

// Dense polynomials over GF(p), ascending coefficients, no trailing zeros.

fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = poly_trim(a.to_vec());
    let m = poly_trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm], p - 2, p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = poly_trim(r);
    }
    r
}

fn pow_mod(b: u32, mut e: u32, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc = 1 % p64;
    let mut base = b as u64 % p64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p64;
        }
        base = base * base % p64;
        e >>= 1;
    }
    acc as u32
}

fn digits(mut v: u32, p: u32, k: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(v % p);
        v /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    // A reducible polynomial has a monic factor of degree at most n / 2.
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut g = digits(low as u32, p, d as u32);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `k`, ordering candidates by the
/// integer encoding of their lower coefficients (highest power compared first).
pub fn default_modulus(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    for low in 0..count {
        let mut f = digits(low as u32, p, k);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FiniteField {
    fn build(p: u32, k: u32, modulus: Vec<u32>) -> FiniteField {
        let q = p.pow(k);
        let mut ff = FiniteField {
            p,
            k,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        if q == 2 {
            ff.exp = vec![1];
            ff.log = vec![0, 0];
            return ff;
        }
        for g in 2..q {
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut x = 1;
            loop {
                exp.push(x);
                x = ff.slow_mul(x, g);
                if x == 1 {
                    break;
                }
            }
            if exp.len() == q as usize - 1 {
                let mut log = vec![0; q as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                ff.exp = exp;
                ff.log = log;
                return ff;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return (a as u64 * b as u64 % self.p as u64) as u32;
        }
        let da = digits(a, self.p, self.k);
        let db = digits(b, self.p, self.k);
        let mut prod = vec![0u32; 2 * self.k as usize];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % self.p as u64) as u32;
            }
        }
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.k as usize, 0);
        undigits(&r, self.p)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        if self.k == 1 {
            return (self.p - a) % self.p;
        }
        let mut a = a;
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        self.exp[((self.log[a as usize] + self.log[b as usize]) % n) as usize]
    }

    fn inv(&self, a: u32) -> u32 {
        let n = self.q - 1;
        self.exp[((n - self.log[a as usize]) % n) as usize]
    }
}

impl FieldSpec {
    /// Builds GF(p^k). For `k > 1` the modulus is `k + 1` ascending digits,
    /// monic and irreducible; `None` selects [`default_modulus`].
    pub fn finite(p: u64, k: u32, modulus: Option<Vec<u32>>) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidModulus("extension degree must be at least 1".into()));
        }
        let order = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if order > MAX_ORDER as u128 {
            return Err(Error::FieldTooLarge { p, k });
        }
        let p = p as u32;
        let modulus = match (k, modulus) {
            (1, None) => vec![0, 1],
            (1, Some(_)) => return Err(Error::InvalidModulus("a prime field takes no modulus".into())),
            (_, None) => default_modulus(p, k),
            (_, Some(m)) => {
                if m.len() != k as usize + 1 {
                    return Err(Error::InvalidModulus(format!(
                        "expected {} coefficients, found {}",
                        k + 1,
                        m.len()
                    )));
                }
                if m.iter().any(|&d| d >= p) {
                    return Err(Error::InvalidModulus(format!("coefficients must lie in [0, {p})")));
                }
                if m[k as usize] != 1 || !is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus { p, degree: k });
                }
                m
            }
        };
        Ok(FieldSpec {
            kind: Arc::new(Kind::Finite(FiniteField::build(p, k, modulus))),
        })
    }

    /// GF(q) with the default modulus.
    pub fn gf(q: u64) -> Result<FieldSpec> {
        match prime_power(q) {
            Some((p, k)) => FieldSpec::finite(p, k, None),
            None => Err(Error::NotPrime(q)),
        }
    }

    pub fn rational() -> FieldSpec {
        FieldSpec {
            kind: Arc::new(Kind::Rational),
        }
    }

    fn ff(&self) -> Option<&FiniteField> {
        match &*self.kind {
            Kind::Finite(ff) => Some(ff),
            Kind::Rational => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.ff().is_some()
    }

    /// `Some(p^k)` for finite fields, `None` for the rationals.
    pub fn cardinality(&self) -> Option<u32> {
        self.ff().map(|ff| ff.q)
    }

    /// 0 for the rationals.
    pub fn characteristic(&self) -> u32 {
        self.ff().map_or(0, |ff| ff.p)
    }

    pub fn degree(&self) -> u32 {
        self.ff().map_or(1, |ff| ff.k)
    }

    /// Ascending digits of the defining polynomial (`None` for Q and prime fields).
    pub fn modulus(&self) -> Option<&[u32]> {
        self.ff().filter(|ff| ff.k > 1).map(|ff| ff.modulus.as_slice())
    }

    pub fn zero(&self) -> Scalar {
        match &*self.kind {
            Kind::Finite(_) => Scalar::Finite(0),
            Kind::Rational => Scalar::Rational(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match &*self.kind {
            Kind::Finite(_) => Scalar::Finite(1),
            Kind::Rational => Scalar::Rational(BigRational::one()),
        }
    }

    /// The image of an integer under the canonical ring map Z -> field.
    pub fn from_int(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match &*self.kind {
            Kind::Finite(ff) => {
                let p = BigInt::from(ff.p);
                let r = ((n % &p) + &p) % &p;
                let r: u32 = r.try_into().expect("residue below p");
                Scalar::Finite(r)
            }
            Kind::Rational => Scalar::Rational(BigRational::from_integer(n.clone())),
        }
    }

    pub fn contains(&self, a: &Scalar) -> bool {
        match (&*self.kind, a) {
            (Kind::Finite(ff), Scalar::Finite(v)) => *v < ff.q,
            (Kind::Rational, Scalar::Rational(_)) => true,
            _ => false,
        }
    }

    pub fn validate(&self, a: &Scalar) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::InvalidScalar(a.to_string()))
        }
    }

    /// Parses the serialized form: an encoding in `[0, q)` for finite fields,
    /// an integer or `a/b` for the rationals.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let bad = || Error::InvalidScalar(s.to_string());
        let v = match &*self.kind {
            Kind::Finite(_) => Scalar::Finite(s.trim().parse::<u32>().map_err(|_| bad())?),
            Kind::Rational => Scalar::Rational(parse_rational(s).ok_or_else(bad)?),
        };
        self.validate(&v)?;
        Ok(v)
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Finite(v) => *v == 0,
            Scalar::Rational(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Finite(v) => *v == 1,
            Scalar::Rational(r) => r.is_one(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&*self.kind, a, b) {
            (Kind::Finite(ff), Scalar::Finite(x), Scalar::Finite(y)) => Scalar::Finite(ff.add(*x, *y)),
            (Kind::Rational, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (&*self.kind, a) {
            (Kind::Finite(ff), Scalar::Finite(x)) => Scalar::Finite(ff.neg(*x)),
            (Kind::Rational, Scalar::Rational(x)) => Scalar::Rational(-x),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&*self.kind, a, b) {
            (Kind::Finite(ff), Scalar::Finite(x), Scalar::Finite(y)) => Scalar::Finite(ff.mul(*x, *y)),
            (Kind::Rational, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match (&*self.kind, a) {
            (Kind::Finite(ff), Scalar::Finite(x)) => Scalar::Finite(ff.inv(*x)),
            (Kind::Rational, Scalar::Rational(x)) => Scalar::Rational(x.recip()),
            _ => panic!("scalar does not belong to {self}"),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// All elements in ascending encoding order.
    pub fn elements(&self) -> Result<Vec<Scalar>> {
        let q = self.cardinality().ok_or(Error::InfiniteField)?;
        Ok((0..q).map(Scalar::Finite).collect())
    }

    /// Whether `a` lies in the prime subfield, returning its integer value.
    pub fn prime_subfield_value(&self, a: &Scalar) -> Option<BigInt> {
        match a {
            Scalar::Finite(v) => (*v < self.characteristic()).then(|| BigInt::from(*v)),
            Scalar::Rational(r) => r.is_integer().then(|| r.to_integer()),
        }
    }

    /// True when `a` is the image of a negative integer small enough to print as one.
    pub fn is_negative(&self, a: &Scalar) -> bool {
        matches!(a, Scalar::Rational(r) if r.is_negative())
    }
}
