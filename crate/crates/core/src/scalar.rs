//! Exact scalars: arbitrary-precision rationals and prime-field residues.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Scalar field of a container: `Q` or `F_p` for an odd prime `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not an odd prime below 2^31")]
    NotAnOddPrime(u64),
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(Field, Field),
    #[error("coefficient {coefficient} has a denominator divisible by {p}")]
    BadPrime { p: u32, coefficient: String },
}

impl Field {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if !(3..1 << 31).contains(&p) || !is_prime(p) {
            return Err(FieldError::NotAnOddPrime(p));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn modulus(self) -> Option<u32> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(p),
        }
    }

    pub fn ensure_same(self, other: Field) -> Result<(), FieldError> {
        if self == other {
            Ok(())
        } else {
            Err(FieldError::Mismatch(self, other))
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub(crate) fn pow_mod(mut base: u32, mut exp: u64, p: u32) -> u32 {
    let mut acc = 1u32 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue, by Fermat's little theorem.
pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p as u64 - 2, p)
}

pub(crate) fn bigint_mod(n: &BigInt, p: u32) -> u32 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u32().expect("residue fits in u32")
}

/// An exact scalar. Rationals are kept in lowest terms with a positive
/// denominator (guaranteed by `BigRational`); residues lie in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u32, modulus: u32 },
}

impl Scalar {
    pub fn zero(field: Field) -> Self {
        Self::from_i64(0, field)
    }

    pub fn one(field: Field) -> Self {
        Self::from_i64(1, field)
    }

    pub fn from_i64(n: i64, field: Field) -> Self {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(n.into())),
            Field::Prime(p) => Scalar::Residue {
                value: n.rem_euclid(p as i64) as u32,
                modulus: p,
            },
        }
    }

    /// Maps a rational into `field`; fails when the denominator vanishes mod p.
    pub fn from_rational(q: &BigRational, field: Field) -> Result<Self, FieldError> {
        match field {
            Field::Rational => Ok(Scalar::Rational(q.clone())),
            Field::Prime(p) => {
                let den = bigint_mod(q.denom(), p);
                if den == 0 {
                    return Err(FieldError::BadPrime {
                        p,
                        coefficient: fmt_rational(q),
                    });
                }
                let num = bigint_mod(q.numer(), p);
                Ok(Scalar::Residue {
                    value: mul_mod(num, inv_mod(den, p), p),
                    modulus: p,
                })
            }
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Residue { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue { .. } => None,
        }
    }

    pub fn residue(&self) -> Option<u32> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Residue { value, .. } => Some(*value),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: inv_mod(*value, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn pow(&self, exp: u32) -> Self {
        match self {
            Scalar::Rational(q) => Scalar::Rational(num_traits::pow(q.clone(), exp as usize)),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: pow_mod(*value, exp as u64, *modulus),
                modulus: *modulus,
            },
        }
    }

    /// Sign for display purposes; residues are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_negative(),
            Scalar::Residue { .. } => false,
        }
    }

    fn binary(&self, other: &Self, qop: impl Fn(&BigRational, &BigRational) -> BigRational, pop: impl Fn(u64, u64, u64) -> u64) -> Self {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(qop(a, b)),
            (
                Scalar::Residue { value: a, modulus: p },
                Scalar::Residue { value: b, modulus: q },
            ) if p == q => Scalar::Residue {
                value: pop(*a as u64, *b as u64, *p as u64) as u32,
                modulus: *p,
            },
            _ => panic!("scalar field mismatch: {} vs {}", self.field(), other.field()),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a + b, |a, b, p| (a + b) % p)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a - b, |a, b, p| (a + p - b) % p)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a * b, |a, b, p| (a * b) % p)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => f.write_str(&fmt_rational(q)),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

/// `p/q`, or just `p` for integers.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p` or `p/q` into a reduced rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_mod_seven_is_four() {
        let s = Scalar::from_rational(&rat(1, 2), Field::Prime(7)).unwrap();
        assert_eq!(s.residue(), Some(4));
    }

    #[test]
    fn third_mod_three_is_bad_prime() {
        assert!(matches!(
            Scalar::from_rational(&rat(1, 3), Field::Prime(3)),
            Err(FieldError::BadPrime { p: 3, .. })
        ));
    }

    #[test]
    fn prime_validation() {
        assert!(Field::prime(2).is_err());
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(1 << 31).is_err());
        assert_eq!(Field::prime(10007).unwrap(), Field::Prime(10007));
        assert_eq!(Field::prime(2147483647).unwrap(), Field::Prime(2147483647));
    }

    #[test]
    fn residue_arithmetic() {
        let f = Field::Prime(10007);
        let a = Scalar::from_i64(-3, f);
        assert_eq!(a.residue(), Some(10004));
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        assert!((&a + &(-&a)).is_zero());
        assert_eq!(Scalar::from_i64(2, f).pow(20).residue(), Some(((1u64 << 20) % 10007) as u32));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("49/100"), Some(rat(49, 100)));
        assert_eq!(parse_rational("-6/100"), Some(rat(-3, 50)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(fmt_rational(&rat(-6, 100)), "-3/50");
        assert_eq!(fmt_rational(&rat(4, 2)), "2");
    }
}
