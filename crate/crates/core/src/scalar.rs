//! Coefficient rings.
//!
//! Every formula in this crate is a polynomial identity with rational
//! coefficients, so the engines are written against [`Scalar`]: a commutative
//! ring that contains the rationals. Plain [`Rational`] gives the classical
//! theory, [`Grassmann`] over it gives the infinitesimal one, and
//! [`crate::poly::Polynomial`] gives symbolic expansions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// A commutative ring containing the rationals.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Image of a rational under the unique ring map `Q -> Self`.
    fn from_rational(q: Rational) -> Self;

    /// Multiplicative inverse, if it exists.
    fn try_inv(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    fn scale(&self, q: &Rational) -> Self {
        self.clone() * Self::from_rational(q.clone())
    }

    fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            exp >>= 1;
        }
        acc
    }
}

impl Scalar for Rational {
    fn from_rational(q: Rational) -> Self {
        q
    }

    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// A Grassmann (dual) number `body + h*soul` with `h^2 = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Grassmann<T> {
    pub body: T,
    pub soul: T,
}

impl<T: Scalar> Grassmann<T> {
    pub fn new(body: T, soul: T) -> Self {
        Grassmann { body, soul }
    }

    /// Embeds `body` with zero soul.
    pub fn real(body: T) -> Self {
        Grassmann {
            body,
            soul: T::zero(),
        }
    }

    /// The nilpotent generator `h`.
    pub fn hbar() -> Self {
        Grassmann {
            body: T::zero(),
            soul: T::one(),
        }
    }

    /// `(a + hb)^-1 = 1/a - h b/a^2`.
    pub fn inv(&self) -> Result<Self> {
        let a_inv = self
            .body
            .try_inv()
            .ok_or_else(|| Error::NonInvertible("Grassmann number with zero body".into()))?;
        let soul = -(self.soul.clone() * a_inv.clone() * a_inv.clone());
        Ok(Grassmann { body: a_inv, soul })
    }
}

impl<T: Scalar> Add for Grassmann<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Grassmann {
            body: self.body + rhs.body,
            soul: self.soul + rhs.soul,
        }
    }
}

impl<T: Scalar> Sub for Grassmann<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Grassmann {
            body: self.body - rhs.body,
            soul: self.soul - rhs.soul,
        }
    }
}

impl<T: Scalar> Mul for Grassmann<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let soul = self.body.clone() * rhs.soul + self.soul * rhs.body.clone();
        Grassmann {
            body: self.body * rhs.body,
            soul,
        }
    }
}

impl<T: Scalar> Neg for Grassmann<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Grassmann {
            body: -self.body,
            soul: -self.soul,
        }
    }
}

impl<T: Scalar> Zero for Grassmann<T> {
    fn zero() -> Self {
        Grassmann {
            body: T::zero(),
            soul: T::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.body.is_zero() && self.soul.is_zero()
    }
}

impl<T: Scalar> One for Grassmann<T> {
    fn one() -> Self {
        Grassmann::real(T::one())
    }
}

impl<T: Scalar> Scalar for Grassmann<T> {
    fn from_rational(q: Rational) -> Self {
        Grassmann::real(T::from_rational(q))
    }

    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
}

impl<T: fmt::Debug> fmt::Debug for Grassmann<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + h*{:?})", self.body, self.soul)
    }
}

/// Canonical `p/q` text, with `/q` omitted when `q = 1`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p/q` or `p` (optional sign on `p`); the result is in lowest terms.
pub fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let num = BigInt::from_str(num).map_err(|_| format!("malformed rational {text:?}"))?;
    let den = match den {
        Some(d) => {
            if d.starts_with(['+', '-']) {
                return Err(format!("malformed rational {text:?}"));
            }
            BigInt::from_str(d).map_err(|_| format!("malformed rational {text:?}"))?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(format!("zero denominator in {text:?}"));
    }
    Ok(Rational::new(num, den))
}

impl fmt::Display for Grassmann<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.soul.is_zero() {
            write!(f, "{}", format_rational(&self.body))
        } else {
            write!(
                f,
                "{} + h*{}",
                format_rational(&self.body),
                format_rational(&self.soul)
            )
        }
    }
}

impl FromStr for Grassmann<Rational> {
    type Err = Error;

    /// Accepts `p/q`, `p/q + h*r/s` and `p/q - h*r/s`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::parse(0, msg);
        let s = s.trim();
        let Some(h_pos) = s.find('h') else {
            return parse_rational(s).map(Grassmann::real).map_err(bad);
        };
        let head = s[..h_pos].trim_end();
        let tail = s[h_pos + 1..].trim_start();
        let tail = tail
            .strip_prefix('*')
            .ok_or_else(|| bad(format!("expected 'h*' in {s:?}")))?;
        let (body_text, sign) = if let Some(b) = head.strip_suffix('+') {
            (b, 1)
        } else if let Some(b) = head.strip_suffix('-') {
            (b, -1)
        } else {
            return Err(bad(format!("expected '+ h*' or '- h*' in {s:?}")));
        };
        let body = if body_text.trim().is_empty() {
            Rational::zero()
        } else {
            parse_rational(body_text).map_err(bad)?
        };
        let mut soul = parse_rational(tail).map_err(bad)?;
        if sign < 0 {
            soul = -soul;
        }
        Ok(Grassmann { body, soul })
    }
}

/// Convenience: `p/q` as a [`Rational`].
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GScalar;
    use proptest::prelude::*;

    fn g(a: (i64, i64), b: (i64, i64)) -> GScalar {
        Grassmann::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn product_rule() {
        assert_eq!(g((1, 1), (2, 1)) * g((3, 1), (4, 1)), g((3, 1), (10, 1)));
    }

    #[test]
    fn hbar_is_nilpotent() {
        let h = GScalar::hbar();
        assert!((h.clone() * h).is_zero());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(g((2, 1), (3, 1)).inv().unwrap(), g((1, 2), (-3, 4)));
        assert_eq!(GScalar::one().inv().unwrap(), GScalar::one());
        assert!(matches!(GScalar::hbar().inv(), Err(Error::NonInvertible(_))));
    }

    #[test]
    fn text_format() {
        assert_eq!(g((1, 2), (-3, 4)).to_string(), "1/2 + h*-3/4");
        assert_eq!(g((6, 3), (0, 1)).to_string(), "2");
        assert_eq!("1/2 - h*3/4".parse::<GScalar>().unwrap(), g((1, 2), (-3, 4)));
        assert_eq!("1/2 + h*-3/4".parse::<GScalar>().unwrap(), g((1, 2), (-3, 4)));
        assert_eq!("-4/6".parse::<GScalar>().unwrap(), g((-2, 3), (0, 1)));
        assert!("1/0".parse::<GScalar>().is_err());
        assert!("1/-2".parse::<GScalar>().is_err());
        assert!("x".parse::<GScalar>().is_err());
        assert!("1 h*2".parse::<GScalar>().is_err());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let x = g((3, 2), (1, 5));
        let mut acc = GScalar::one();
        for e in 0..6 {
            assert_eq!(x.pow(e), acc);
            acc = acc * x.clone();
        }
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-40i64..=40, 1i64..=12).prop_map(|(p, q)| rat(p, q))
    }

    fn gscalar() -> impl Strategy<Value = GScalar> {
        (small_rational(), small_rational()).prop_map(|(a, b)| Grassmann::new(a, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms(x in gscalar(), y in gscalar(), z in gscalar()) {
            prop_assert_eq!(x.clone() * y.clone(), y.clone() * x.clone());
            prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
            prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y.clone() + x.clone() * z.clone());
            prop_assert_eq!((x.clone() + y.clone()) + z.clone(), x.clone() + (y.clone() + z.clone()));
            prop_assert_eq!(x.clone() * GScalar::one(), x.clone());
            prop_assert_eq!(x.clone() + GScalar::zero(), x.clone());
            prop_assert!((x.clone() - x.clone()).is_zero());
        }

        #[test]
        fn inverse_laws(x in gscalar(), y in gscalar()) {
            prop_assume!(!x.body.is_zero() && !y.body.is_zero());
            let xi = x.inv().unwrap();
            prop_assert_eq!(x.clone() * xi.clone(), GScalar::one());
            prop_assert_eq!(xi.inv().unwrap(), x.clone());
            let xy = x.clone() * y.clone();
            prop_assert_eq!(xy.inv().unwrap(), y.inv().unwrap() * x.inv().unwrap());
        }

        #[test]
        fn body_is_homomorphism_soul_is_derivation(x in gscalar(), y in gscalar()) {
            let p = x.clone() * y.clone();
            prop_assert_eq!(p.body.clone(), x.body.clone() * y.body.clone());
            prop_assert_eq!(p.soul, x.body.clone() * y.soul.clone() + x.soul.clone() * y.body.clone());
            prop_assert_eq!((x.clone() + y.clone()).body, x.body + y.body);
        }

        #[test]
        fn text_round_trip(x in gscalar()) {
            prop_assert_eq!(x.to_string().parse::<GScalar>().unwrap(), x);
        }
    }
}
