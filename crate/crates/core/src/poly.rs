//! Sparse multivariate polynomials with rational coefficients.
//!
//! Used to run the engines symbolically: feed a table whose entries are
//! indeterminates and read off the exact coefficients of the expansion.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{format_rational, Scalar};
use crate::Rational;

/// Exponent vector with trailing zeros trimmed.
pub type Monomial = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

impl Polynomial {
    /// The indeterminate `x_i`.
    pub fn var(i: usize) -> Self {
        let mut m = vec![0; i + 1];
        m[i] = 1;
        Self::monomial(m, Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(Vec::new(), c)
    }

    pub fn monomial(exponents: Monomial, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(trim(exponents), coeff);
        }
        Polynomial { terms }
    }

    /// Coefficient of the given monomial (zero when absent).
    pub fn coeff(&self, exponents: &[u32]) -> Rational {
        self.terms
            .get(&trim(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

impl Add for Polynomial {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for Polynomial {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Polynomial {
    type Output = Self;
    fn neg(mut self) -> Self {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

/// Exponents add under multiplication.
fn monomial_product(a: &Monomial, b: &Monomial) -> Monomial {
    (0..a.len().max(b.len()))
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect()
}

impl Mul for Polynomial {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Polynomial::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(monomial_product(ma, mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl Zero for Polynomial {
    fn zero() -> Self {
        Polynomial::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Polynomial {
    fn one() -> Self {
        Polynomial::constant(Rational::one())
    }
}

impl Scalar for Polynomial {
    fn from_rational(q: Rational) -> Self {
        Polynomial::constant(q)
    }

    /// Only nonzero constants are units.
    fn try_inv(&self) -> Option<Self> {
        match self.terms.len() {
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_empty().then(|| Polynomial::constant(c.recip()))
            }
            _ => None,
        }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", format_rational(c))?;
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}
