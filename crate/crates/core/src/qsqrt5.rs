//! Exact arithmetic in the quadratic field Q(√5).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// The number `a + b·√5` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSqrt5 {
    pub a: BigRational,
    pub b: BigRational,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QSqrt5 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QSqrt5 { a, b }
    }

    pub fn from_int(n: i64) -> Self {
        QSqrt5::new(rat(n), rat(0))
    }

    /// `(an/ad) + (bn/bd)·√5`.
    pub fn from_ratios(an: i64, ad: i64, bn: i64, bd: i64) -> Self {
        QSqrt5::new(
            BigRational::new(an.into(), ad.into()),
            BigRational::new(bn.into(), bd.into()),
        )
    }

    pub fn zero() -> Self {
        QSqrt5::from_int(0)
    }

    pub fn one() -> Self {
        QSqrt5::from_int(1)
    }

    pub fn sqrt5() -> Self {
        QSqrt5::new(rat(0), rat(1))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a - b·√5`.
    pub fn conj(&self) -> Self {
        QSqrt5::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² - 5b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - rat(5) * &self.b * &self.b
    }

    /// Exact sign of the real number `a + b·√5`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&rat(0));
        let sb = self.b.cmp(&rat(0));
        if sb == Ordering::Equal || sa == sb {
            return if sa == Ordering::Equal { sb } else { sa };
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // opposite signs: the larger of a² and 5b² wins
        match (&self.a * &self.a).cmp(&(rat(5) * &self.b * &self.b)) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; `None` at zero.
    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(QSqrt5::new(&self.a / &n, -&self.b / &n))
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * 5f64.sqrt()
    }
}

impl From<i64> for QSqrt5 {
    fn from(n: i64) -> Self {
        QSqrt5::from_int(n)
    }
}

impl PartialOrd for QSqrt5 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt5 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a QSqrt5> for &'a QSqrt5 {
            type Output = QSqrt5;
            fn $method(self, rhs: &'a QSqrt5) -> QSqrt5 {
                let f: fn(&QSqrt5, &QSqrt5) -> QSqrt5 = $body;
                f(self, rhs)
            }
        }
        impl $tr<QSqrt5> for QSqrt5 {
            type Output = QSqrt5;
            fn $method(self, rhs: QSqrt5) -> QSqrt5 {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a QSqrt5> for QSqrt5 {
            type Output = QSqrt5;
            fn $method(self, rhs: &'a QSqrt5) -> QSqrt5 {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |x, y| QSqrt5::new(&x.a + &y.a, &x.b + &y.b));
forward_binop!(Sub, sub, |x, y| QSqrt5::new(&x.a - &y.a, &x.b - &y.b));
forward_binop!(Mul, mul, |x, y| QSqrt5::new(
    &x.a * &y.a + rat(5) * &x.b * &y.b,
    &x.a * &y.b + &x.b * &y.a
));
forward_binop!(Div, div, |x, y| x * &y.inv().expect("division by zero in Q(√5)"));

impl Neg for QSqrt5 {
    type Output = QSqrt5;
    fn neg(self) -> QSqrt5 {
        QSqrt5::new(-self.a, -self.b)
    }
}

impl Neg for &QSqrt5 {
    type Output = QSqrt5;
    fn neg(self) -> QSqrt5 {
        QSqrt5::new(-&self.a, -&self.b)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QSqrt5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let surd = |b: &BigRational| -> String {
            let mag = b.abs();
            if mag.is_one() {
                "√5".to_string()
            } else if mag.is_integer() {
                format!("{}√5", mag.numer())
            } else if mag.numer().is_one() {
                format!("√5/{}", mag.denom())
            } else {
                format!("{}√5/{}", mag.numer(), mag.denom())
            }
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => f.write_str(&fmt_rat(&self.a)),
            (true, false) => {
                let sign = if self.b.is_negative() { "-" } else { "" };
                write!(f, "{sign}{}", surd(&self.b))
            }
            (false, false) => {
                let sign = if self.b.is_negative() { '-' } else { '+' };
                write!(f, "{} {sign} {}", fmt_rat(&self.a), surd(&self.b))
            }
        }
    }
}

/// Serialized as `{"exact": "...", "approx": f64}`.
impl Serialize for QSqrt5 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("QSqrt5", 2)?;
        s.serialize_field("exact", &self.to_string())?;
        s.serialize_field("approx", &self.to_f64())?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(an: i64, ad: i64, bn: i64, bd: i64) -> QSqrt5 {
        QSqrt5::from_ratios(an, ad, bn, bd)
    }

    #[test]
    fn sqrt5_squares_to_five() {
        let s = QSqrt5::sqrt5();
        assert_eq!(&s * &s, QSqrt5::from_int(5));
    }

    #[test]
    fn two_over_sqrt5_is_below_one() {
        let x = QSqrt5::from_int(2) / QSqrt5::sqrt5();
        assert_eq!(x, q(0, 1, 2, 5));
        assert!(x < QSqrt5::one());
        assert_eq!(x.to_string(), "2√5/5");
    }

    #[test]
    fn sign_of_mixed_terms() {
        // 9 - 4√5 ≈ 0.0557
        assert!(q(9, 1, -4, 1).is_positive());
        // 2 - √5 < 0
        assert_eq!(q(2, 1, -1, 1).signum(), Ordering::Less);
        // -3 + √5 < 0
        assert_eq!(q(-3, 1, 1, 1).signum(), Ordering::Less);
        assert_eq!(QSqrt5::zero().signum(), Ordering::Equal);
    }

    #[test]
    fn display_forms() {
        assert_eq!(QSqrt5::sqrt5().to_string(), "√5");
        assert_eq!(q(3, 2, -1, 1).to_string(), "3/2 - √5");
        assert_eq!(q(0, 1, 3, 1).to_string(), "3√5");
        assert_eq!(q(-1, 1, 0, 1).to_string(), "-1");
    }

    fn arb() -> impl Strategy<Value = QSqrt5> {
        (-50i64..50, 1i64..9, -50i64..50, 1i64..9).prop_map(|(a, b, c, d)| q(a, b, c, d))
    }

    proptest! {
        #[test]
        fn field_laws(x in arb(), y in arb(), z in arb()) {
            prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            if !y.is_zero() {
                prop_assert_eq!(&(&x / &y) * &y, x.clone());
            }
        }

        #[test]
        fn order_matches_floats(x in arb(), y in arb()) {
            let (fx, fy) = (x.to_f64(), y.to_f64());
            if (fx - fy).abs() > 1e-9 {
                prop_assert_eq!(x < y, fx < fy);
            }
        }
    }
}
