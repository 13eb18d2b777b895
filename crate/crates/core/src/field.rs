//! Exact scalar arithmetic: prime fields GF(p) and arbitrary-precision rationals.
//!
//! Every operation is exact; there is no floating point anywhere in the crate.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} outside supported range 2..2^62")]
    ModulusRange(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse field `{0}` (expected `gfp:<prime>` or `qq`)")]
    ParseField(String),
    #[error("cannot parse scalar `{0}`")]
    ParseScalar(String),
}

/// Which exact field computations run over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    /// GF(p) for a prime p < 2^62.
    Prime(u64),
    /// The rational numbers with arbitrary-precision arithmetic.
    Rationals,
}

/// An element of a `FieldSpec`. `Fp` values are always reduced mod p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp(u64),
    Rat(Box<BigRational>),
}

impl Default for FieldSpec {
    /// GF(65537): fits machine words and is large enough that random models
    /// behave generically.
    fn default() -> Self {
        FieldSpec::Prime(65537)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "gfp:{p}"),
            FieldSpec::Rationals => write!(f, "qq"),
        }
    }
}

impl FieldSpec {
    /// GF(p), verifying primality with a deterministic Miller-Rabin test.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if !(2..(1u64 << 62)).contains(&p) {
            return Err(FieldError::ModulusRange(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// Parses `gfp:<p>` or `qq`.
    pub fn parse(s: &str) -> Result<Self, FieldError> {
        let s = s.trim();
        if s == "qq" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(rest) = s.strip_prefix("gfp:") {
            let p: u64 = rest
                .parse()
                .map_err(|_| FieldError::ParseField(s.to_string()))?;
            return FieldSpec::prime(p);
        }
        Err(FieldError::ParseField(s.to_string()))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Prime(p) => *p,
            FieldSpec::Rationals => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Prime(_) => Scalar::Fp(0),
            FieldSpec::Rationals => Scalar::Rat(Box::new(BigRational::zero())),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Prime(_) => Scalar::Fp(1),
            FieldSpec::Rationals => Scalar::Rat(Box::new(BigRational::one())),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Prime(p) => {
                let r = v.rem_euclid(*p as i64) as u64;
                Scalar::Fp(r % p)
            }
            FieldSpec::Rationals => Scalar::Rat(Box::new(BigRational::from(BigInt::from(v)))),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fp(x) => *x == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp(addmod(*x, *y, *p)),
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => {
                Scalar::Rat(Box::new(&**x + &**y))
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(addmod(*x, p - y, *p))
            }
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => {
                Scalar::Rat(Box::new(&**x - &**y))
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Prime(p), Scalar::Fp(x)) => Scalar::Fp(if *x == 0 { 0 } else { p - x }),
            (FieldSpec::Rationals, Scalar::Rat(x)) => Scalar::Rat(Box::new(-&**x)),
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp(mulmod(*x, *y, *p)),
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => {
                Scalar::Rat(Box::new(&**x * &**y))
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match (self, a) {
            (FieldSpec::Prime(p), Scalar::Fp(x)) => Scalar::Fp(invmod(*x, *p)),
            (FieldSpec::Rationals, Scalar::Rat(x)) => Scalar::Rat(Box::new(x.recip())),
            _ => panic!("scalar/field mismatch"),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// True when `a` is a valid, reduced element of this field.
    pub fn owns(&self, a: &Scalar) -> bool {
        match (self, a) {
            (FieldSpec::Prime(p), Scalar::Fp(x)) => x < p,
            (FieldSpec::Rationals, Scalar::Rat(_)) => true,
            _ => false,
        }
    }

    /// Parses an integer or `a/b` literal into a field element.
    pub fn scalar_from_str(&self, s: &str) -> Result<Scalar, FieldError> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt, FieldError> {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| FieldError::ParseScalar(s.to_string()))
        };
        let rat = match s.split_once('/') {
            Some((num, den)) => {
                let d = parse_int(den)?;
                if d.is_zero() {
                    return Err(FieldError::ParseScalar(s.to_string()));
                }
                BigRational::new(parse_int(num)?, d)
            }
            None => BigRational::from(parse_int(s)?),
        };
        self.scalar_from_rational(&rat)
    }

    /// Reduces an exact rational into this field (mod p for GF(p)).
    pub fn scalar_from_rational(&self, r: &BigRational) -> Result<Scalar, FieldError> {
        match self {
            FieldSpec::Rationals => Ok(Scalar::Rat(Box::new(r.clone()))),
            FieldSpec::Prime(p) => {
                let pb = BigInt::from(*p);
                let num = r.numer().mod_floor_u64(*p);
                let den = r.denom().mod_floor_u64(*p);
                let _ = pb;
                if den == 0 {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(Scalar::Fp(mulmod(num, invmod(den, *p), *p)))
            }
        }
    }

    pub fn scalar_to_string(&self, a: &Scalar) -> String {
        match a {
            Scalar::Fp(x) => x.to_string(),
            Scalar::Rat(r) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num::Integer;
        let m = self.mod_floor(&BigInt::from(p));
        let (_, digits) = m.to_u64_digits();
        match digits.as_slice() {
            [] => 0,
            [d] => *d,
            _ => unreachable!("reduced value exceeds modulus"),
        }
    }
}

pub(crate) fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b; // p < 2^62 so no overflow
    if s >= p {
        s - p
    } else {
        s
    }
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    powmod(a, p - 2, p)
}

/// Deterministic Miller-Rabin; the witness set below decides primality for
/// every u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(65537));
        assert!(is_prime(1000003));
        assert!(is_prime(4611686018427387847)); // largest prime below 2^62
        assert!(!is_prime(1));
        assert!(!is_prime(65536));
        assert!(!is_prime(1000001)); // 101 * 9901
        assert!(FieldSpec::prime(65536).is_err());
        assert!(FieldSpec::prime(1 << 62).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(FieldSpec::parse("gfp:65537").unwrap(), FieldSpec::Prime(65537));
        assert_eq!(FieldSpec::parse("qq").unwrap(), FieldSpec::Rationals);
        assert!(FieldSpec::parse("gfp:91").is_err());
        assert_eq!(FieldSpec::Prime(65537).to_string(), "gfp:65537");
        assert_eq!(FieldSpec::Rationals.to_string(), "qq");
    }

    #[test]
    fn gfp_arithmetic() {
        let f = FieldSpec::Prime(7);
        let a = f.from_i64(5);
        let b = f.from_i64(-3); // = 4
        assert_eq!(f.add(&a, &b), f.from_i64(2));
        assert_eq!(f.mul(&a, &b), f.from_i64(6));
        assert_eq!(f.sub(&a, &b), f.from_i64(1));
        let inv = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), f.one());
        assert!(f.inv(&f.zero()).is_err());
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        let f = FieldSpec::Rationals;
        let third = f.scalar_from_str("1/3").unwrap();
        let mut acc = f.zero();
        for _ in 0..3 {
            acc = f.add(&acc, &third);
        }
        assert_eq!(acc, f.one());
        let big = f.scalar_from_str("123456789123456789123456789").unwrap();
        let inv = f.inv(&big).unwrap();
        assert_eq!(f.mul(&big, &inv), f.one());
    }

    #[test]
    fn scalar_string_round_trip() {
        let q = FieldSpec::Rationals;
        for s in ["0", "-7", "22/7", "-3/4"] {
            let v = q.scalar_from_str(s).unwrap();
            assert_eq!(q.scalar_from_str(&q.scalar_to_string(&v)).unwrap(), v);
        }
        let f = FieldSpec::Prime(65537);
        assert_eq!(f.scalar_from_str("-1").unwrap(), Scalar::Fp(65536));
        // 1/2 mod 65537 is the inverse of 2
        let half = f.scalar_from_str("1/2").unwrap();
        assert_eq!(f.mul(&half, &Scalar::Fp(2)), f.one());
    }
}
