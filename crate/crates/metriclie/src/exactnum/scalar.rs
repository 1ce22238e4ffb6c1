//! Exact scalar tower: rationals, a single quadratic extension `Q(sqrt(d))`,
//! and a float fallback mode for cross-checking against numerical oracles.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// Arithmetic mode of a [`Scalar`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarMode {
    Rational,
    /// Element of `Q(sqrt(d))` for the stored squarefree `d`.
    Quadratic(u32),
    Float,
}

/// A member of the exact number tower.
///
/// Values are kept normalized: a quadratic element with vanishing surd part is
/// demoted to `Rational`, so equality is structural. Arithmetic between two
/// different quadratic extensions is rejected with a panic rather than
/// coerced; mixing an exact value with a float yields a float (the fallback
/// mode absorbs its operands, and the mode flag travels with the result).
#[derive(Debug, Clone)]
pub enum Scalar {
    Rational(BigRational),
    /// `a + b*sqrt(d)` with `b != 0` and `d` squarefree, `d >= 2`.
    Quadratic { a: BigRational, b: BigRational, d: u32 },
    Float(f64),
}

fn assert_squarefree(d: u32) {
    assert!(d >= 2, "quadratic extension requires d >= 2, got {d}");
    let mut k = 2u32;
    while k * k <= d {
        assert!(d % (k * k) != 0, "d = {d} is not squarefree");
        k += 1;
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `n/m` as an exact rational.
    pub fn rat(n: i64, m: i64) -> Self {
        assert!(m != 0, "zero denominator");
        Scalar::Rational(BigRational::new(BigInt::from(n), BigInt::from(m)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Rational(r)
    }

    /// `a + b*sqrt(d)`, normalized.
    pub fn quadratic(a: BigRational, b: BigRational, d: u32) -> Self {
        assert_squarefree(d);
        if b.is_zero() {
            Scalar::Rational(a)
        } else {
            Scalar::Quadratic { a, b, d }
        }
    }

    /// `(n/m) * sqrt(d)`.
    pub fn surd(n: i64, m: i64, d: u32) -> Self {
        Scalar::quadratic(
            BigRational::zero(),
            BigRational::new(BigInt::from(n), BigInt::from(m)),
            d,
        )
    }

    pub fn float(x: f64) -> Self {
        Scalar::Float(x)
    }

    pub fn mode(&self) -> ScalarMode {
        match self {
            Scalar::Rational(_) => ScalarMode::Rational,
            Scalar::Quadratic { d, .. } => ScalarMode::Quadratic(*d),
            Scalar::Float(_) => ScalarMode::Float,
        }
    }

    pub fn is_float(&self) -> bool {
        matches!(self, Scalar::Float(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Quadratic { .. } => false, // b != 0 by invariant
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Quadratic { .. } => false,
            Scalar::Float(x) => *x == 1.0,
        }
    }

    /// Exact sign: -1, 0 or +1. For `a + b*sqrt(d)` the sign is decided by
    /// comparing `a^2` with `b^2 d`.
    pub fn sign(&self) -> i8 {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Scalar::Quadratic { a, b, d } => {
                let sa = if a.is_zero() { 0 } else if a.is_positive() { 1 } else { -1 };
                let sb = if b.is_positive() { 1i8 } else { -1 };
                if sa == 0 {
                    return sb;
                }
                if sa == sb {
                    return sa;
                }
                // a and b*sqrt(d) have opposite signs: compare magnitudes.
                let a2 = a * a;
                let b2d = b * b * BigRational::from_integer(BigInt::from(*d));
                if a2 > b2d {
                    sa
                } else {
                    sb
                }
            }
            Scalar::Float(x) => {
                if *x == 0.0 {
                    0
                } else if *x > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn abs(&self) -> Scalar {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => {
                assert!(!r.is_zero(), "division by zero");
                Scalar::Rational(r.recip())
            }
            Scalar::Quadratic { a, b, d } => {
                // 1/(a+b sqrt d) = (a - b sqrt d)/(a^2 - b^2 d); the norm is
                // nonzero since sqrt(d) is irrational and b != 0.
                let norm = a * a - b * b * BigRational::from_integer(BigInt::from(*d));
                Scalar::quadratic(a / &norm, -(b / &norm), *d)
            }
            Scalar::Float(x) => Scalar::Float(1.0 / x),
        }
    }

    pub fn to_f64(&self) -> f64 {
        fn r2f(r: &BigRational) -> f64 {
            let n = r.numer();
            let d = r.denom();
            // Good enough for oracle comparisons at catalog scale.
            let nf: f64 = n.to_string().parse().unwrap_or(f64::NAN);
            let df: f64 = d.to_string().parse().unwrap_or(f64::NAN);
            nf / df
        }
        match self {
            Scalar::Rational(r) => r2f(r),
            Scalar::Quadratic { a, b, d } => r2f(a) + r2f(b) * (*d as f64).sqrt(),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// Equality up to `tol` in float mode, exact otherwise.
    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> bool {
        if self.is_float() || other.is_float() {
            let (x, y) = (self.to_f64(), other.to_f64());
            (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs()))
        } else {
            self == other
        }
    }

    fn binop(
        &self,
        rhs: &Scalar,
        rr: impl Fn(&BigRational, &BigRational) -> Scalar,
        qq: impl Fn(&BigRational, &BigRational, &BigRational, &BigRational, u32) -> Scalar,
        ff: impl Fn(f64, f64) -> f64,
    ) -> Scalar {
        let zero = BigRational::zero;
        match (self, rhs) {
            (Scalar::Rational(x), Scalar::Rational(y)) => rr(x, y),
            (Scalar::Rational(x), Scalar::Quadratic { a, b, d }) => qq(x, &zero(), a, b, *d),
            (Scalar::Quadratic { a, b, d }, Scalar::Rational(y)) => qq(a, b, y, &zero(), *d),
            (
                Scalar::Quadratic { a: a1, b: b1, d: d1 },
                Scalar::Quadratic { a: a2, b: b2, d: d2 },
            ) => {
                assert!(
                    d1 == d2,
                    "mixed quadratic extensions Q(sqrt({d1})) and Q(sqrt({d2})) are rejected"
                );
                qq(a1, b1, a2, b2, *d1)
            }
            (Scalar::Float(x), Scalar::Float(y)) => Scalar::Float(ff(*x, *y)),
            (Scalar::Float(x), y) => Scalar::Float(ff(*x, y.to_f64())),
            (x, Scalar::Float(y)) => Scalar::Float(ff(x.to_f64(), *y)),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.binop(
            rhs,
            |x, y| Scalar::Rational(x + y),
            |a1, b1, a2, b2, d| Scalar::quadratic(a1 + a2, b1 + b2, d),
            |x, y| x + y,
        )
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.binop(
            rhs,
            |x, y| Scalar::Rational(x - y),
            |a1, b1, a2, b2, d| Scalar::quadratic(a1 - a2, b1 - b2, d),
            |x, y| x - y,
        )
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.binop(
            rhs,
            |x, y| Scalar::Rational(x * y),
            |a1, b1, a2, b2, d| {
                let dr = BigRational::from_integer(BigInt::from(d));
                Scalar::quadratic(a1 * a2 + b1 * b2 * dr, a1 * b2 + b1 * a2, d)
            },
            |x, y| x * y,
        )
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Quadratic { a, b, d } => Scalar::Quadratic { a: -a, b: -b, d: *d },
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

macro_rules! forward_owned {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar { $trait::$method(&self, &rhs) }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar { $trait::$method(&self, rhs) }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar { $trait::$method(self, &rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Rational(x), Scalar::Rational(y)) => x == y,
            (
                Scalar::Quadratic { a: a1, b: b1, d: d1 },
                Scalar::Quadratic { a: a2, b: b2, d: d2 },
            ) => d1 == d2 && a1 == a2 && b1 == b2,
            (Scalar::Float(x), Scalar::Float(y)) => x == y,
            _ => false,
        }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    /// Canonical string form: `"3/4"`, `"1/2+1/4*sqrt(6)"`, `"0.125f"`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", fmt_rational(r)),
            Scalar::Quadratic { a, b, d } => {
                let surd = if b.is_one() {
                    format!("sqrt({d})")
                } else if (-b).is_one() {
                    format!("-sqrt({d})")
                } else {
                    format!("{}*sqrt({d})", fmt_rational(b))
                };
                if a.is_zero() {
                    write!(f, "{surd}")
                } else if surd.starts_with('-') {
                    write!(f, "{}{}", fmt_rational(a), surd)
                } else {
                    write!(f, "{}+{}", fmt_rational(a), surd)
                }
            }
            Scalar::Float(x) => write!(f, "{x}f"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid scalar literal `{0}`")]
pub struct ParseScalarError(pub String);

fn parse_big_rational(s: &str) -> Result<BigRational, ParseScalarError> {
    let err = || ParseScalarError(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.trim().parse().map_err(|_| err())?;
        Ok(BigRational::from_integer(n))
    }
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    /// Parses the canonical string form produced by `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let err = || ParseScalarError(s.to_string());
        if s.is_empty() {
            return Err(err());
        }
        if let Some(body) = s.strip_suffix('f') {
            let x: f64 = body.parse().map_err(|_| err())?;
            return Ok(Scalar::Float(x));
        }
        // Split an optional trailing surd term off: [rat] [(+|-) [coef*]sqrt(d)]
        if let Some(pos) = s.find("sqrt(") {
            let d_part = &s[pos + 5..];
            let close = d_part.find(')').ok_or_else(err)?;
            if !d_part[close + 1..].trim().is_empty() {
                return Err(err());
            }
            let d: u32 = d_part[..close].trim().parse().map_err(|_| err())?;
            if d < 2 {
                return Err(err());
            }
            let head = &s[..pos];
            // head is one of "", "-", "c*", "a+c*", "a-c*", "a+", "a-"
            let (a_str, b_str, b_negated) = match head.rfind(['+', '-']) {
                Some(0) if head.len() == 1 => ("", "", head.starts_with('-')),
                Some(i) if i > 0 => (&head[..i], &head[i + 1..], head.as_bytes()[i] == b'-'),
                _ => ("", head, false),
            };
            let a = if a_str.is_empty() {
                BigRational::zero()
            } else {
                parse_big_rational(a_str)?
            };
            let b_core = b_str.strip_suffix('*').unwrap_or(b_str);
            let mut b = if b_core.is_empty() {
                BigRational::one()
            } else {
                parse_big_rational(b_core)?
            };
            if b_negated {
                b = -b;
            }
            return Ok(Scalar::quadratic(a, b, d));
        }
        Ok(Scalar::Rational(parse_big_rational(s)?))
    }
}
