//! Operations on whole laws: additive free and Boolean convolution,
//! convolution powers, the Bercovici–Pata maps, independent joins and the
//! η-series identities.

use num_traits::{One, Signed, Zero};

use crate::cumulants::{cumulants_to_moments, moments_to_cumulants};
use crate::error::{Error, Result};
use crate::laws::{all_words, CumulantFamily, Cumulants, Moments, Word, WordTable};
use crate::scalar::Scalar;
use crate::shuffle::{adjoint, hs_exp, hs_log, Functional, Product};
use crate::Rational;

fn additive(kind: CumulantFamily) -> Result<()> {
    match kind {
        CumulantFamily::Free | CumulantFamily::Boolean => Ok(()),
        CumulantFamily::Monotone => Err(Error::domain("additive convolution is free or boolean")),
    }
}

fn same_shape<S: Scalar>(mu: &Moments<S>, nu: &Moments<S>) -> Result<()> {
    if mu.k() != nu.k() || mu.order() != nu.order() {
        return Err(Error::dimension(format!(
            "laws have shapes (k={}, N={}) and (k={}, N={})",
            mu.k(),
            mu.order(),
            nu.k(),
            nu.order()
        )));
    }
    Ok(())
}

/// `μ ⊞ ν` or `μ ⊎ ν`: cumulants of the chosen kind add.
pub fn convolve_laws<S: Scalar>(
    mu: &Moments<S>,
    nu: &Moments<S>,
    kind: CumulantFamily,
) -> Result<Moments<S>> {
    additive(kind)?;
    same_shape(mu, nu)?;
    let a = moments_to_cumulants(mu, kind)?;
    let b = moments_to_cumulants(nu, kind)?;
    let sum = a.table().zip_with(b.table(), |x, y| x.clone() + y.clone())?;
    cumulants_to_moments(&Cumulants::new(kind, sum))
}

/// `μ^{⊞s}` or `μ^{⊎s}`. Negative `s` is rejected unless `allow_negative`.
pub fn law_power<S: Scalar>(
    mu: &Moments<S>,
    s: &Rational,
    kind: CumulantFamily,
    allow_negative: bool,
) -> Result<Moments<S>> {
    additive(kind)?;
    if s.is_negative() && !allow_negative {
        return Err(Error::domain(format!("negative convolution power {s}")));
    }
    let c = moments_to_cumulants(mu, kind)?;
    let scaled = c.table().map(|x| x.scale(s));
    cumulants_to_moments(&Cumulants::new(kind, scaled))
}

fn check_t(t: &Rational) -> Result<()> {
    if t.is_negative() {
        return Err(Error::domain(format!("Bercovici–Pata parameter must be >= 0, got {t}")));
    }
    Ok(())
}

/// `𝔹_t(μ) = (μ^{⊞(1+t)})^{⊎1/(1+t)}`.
pub fn bp_map<S: Scalar>(mu: &Moments<S>, t: &Rational) -> Result<Moments<S>> {
    check_t(t)?;
    let s = Rational::one() + t;
    let free = law_power(mu, &s, CumulantFamily::Free, false)?;
    law_power(&free, &s.recip(), CumulantFamily::Boolean, false)
}

/// The same map through the shuffle calculus: `E_≺(θ_{E_≺(tκ)}(κ))`.
pub fn bp_map_shuffle<S: Scalar>(mu: &Moments<S>, t: &Rational) -> Result<Moments<S>> {
    check_t(t)?;
    let phi = Functional::from_law(mu);
    let kappa = hs_log(&phi, Product::Prec)?;
    let psi = hs_exp(&kappa.scale(t)?, Product::Prec)?;
    let out = hs_exp(&adjoint(&psi, &kappa)?, Product::Prec)?;
    Ok(Moments::new(out.words().clone()))
}

/// Inverse of `𝔹 = 𝔹_1`: `E_≻(log_≺(Ψ))`.
pub fn bp_inverse<S: Scalar>(mu: &Moments<S>) -> Result<Moments<S>> {
    let phi = Functional::from_law(mu);
    let out = hs_exp(&hs_log(&phi, Product::Prec)?, Product::Succ)?;
    Ok(Moments::new(out.words().clone()))
}

/// Joint law of two univariate laws that are free or Boolean independent.
/// Letter 1 carries `mu` and letter 2 carries `nu`; every mixed cumulant of
/// the chosen kind is zero.
pub fn join_independent<S: Scalar>(
    mu: &Moments<S>,
    nu: &Moments<S>,
    kind: CumulantFamily,
) -> Result<Moments<S>> {
    additive(kind)?;
    if mu.k() != 1 || nu.k() != 1 {
        return Err(Error::dimension("join expects two univariate laws"));
    }
    same_shape(mu, nu)?;
    let a = moments_to_cumulants(mu, kind)?;
    let b = moments_to_cumulants(nu, kind)?;
    let table = WordTable::try_from_fn(2, mu.order(), |w| {
        let pure = Word::power(1, w.len());
        Ok(if w.letters().iter().all(|&l| l == 1) {
            a.get(&pure)?.clone()
        } else if w.letters().iter().all(|&l| l == 2) {
            b.get(&pure)?.clone()
        } else {
            S::zero()
        })
    })?;
    cumulants_to_moments(&Cumulants::new(kind, table))
}

/// A truncated non-commutative power series `c + sum_w a(w) z_w`.
#[derive(Clone, Debug, PartialEq)]
struct Series {
    constant: Rational,
    coeffs: WordTable<Rational>,
}

impl Series {
    fn new(constant: Rational, coeffs: WordTable<Rational>) -> Self {
        Series { constant, coeffs }
    }

    fn coeff(&self, w: &Word) -> Rational {
        if w.is_empty() {
            self.constant.clone()
        } else {
            self.coeffs[w].clone()
        }
    }

    fn mul(&self, other: &Series) -> Result<Series> {
        let coeffs = WordTable::from_fn(self.coeffs.k(), self.coeffs.order(), |w| {
            (0..=w.len())
                .map(|i| self.coeff(&w.slice(0, i)) * other.coeff(&w.slice(i, w.len())))
                .fold(Rational::zero(), |a, b| a + b)
        })?;
        Ok(Series::new(&self.constant * &other.constant, coeffs))
    }

    fn add(&self, other: &Series) -> Result<Series> {
        Ok(Series::new(
            &self.constant + &other.constant,
            self.coeffs.zip_with(&other.coeffs, |a, b| a + b)?,
        ))
    }

    fn first_difference(&self, other: &Series) -> Option<Word> {
        all_words(self.coeffs.k(), self.coeffs.order()).find(|w| self.coeff(w) != other.coeff(w))
    }
}

/// Outcome of [`eta_series_check`]: the first mismatching word of each
/// identity, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesReport {
    pub order: usize,
    /// `M' = (1 + M) B' (1 + M)`.
    pub sandwich: Option<Word>,
    /// `M' = M' B + (1 + M) B'`.
    pub recursive: Option<Word>,
}

impl SeriesReport {
    pub fn passed(&self) -> bool {
        self.sandwich.is_none() && self.recursive.is_none()
    }
}

/// Compares both sides of the infinitesimal η-series identities
/// coefficient-wise on all words of length `1..=max_order`.
pub fn eta_series_check(
    mu: &Moments<crate::GScalar>,
    max_order: usize,
) -> Result<SeriesReport> {
    if max_order == 0 || max_order > mu.order() {
        return Err(Error::dimension(format!(
            "series order {max_order} outside 1..={}",
            mu.order()
        )));
    }
    let law = mu.truncate(max_order)?;
    let boolean = moments_to_cumulants(&law, CumulantFamily::Boolean)?;
    let part = |t: &WordTable<crate::GScalar>, soul: bool| {
        Series::new(
            Rational::zero(),
            t.map(|x| if soul { x.soul.clone() } else { x.body.clone() }),
        )
    };
    let m = part(law.table(), false);
    let dm = part(law.table(), true);
    let b = part(boolean.table(), false);
    let db = part(boolean.table(), true);
    let one_plus_m = Series::new(Rational::one(), m.coeffs.clone());

    let sandwich = one_plus_m.mul(&db)?.mul(&one_plus_m)?;
    let recursive = dm.mul(&b)?.add(&one_plus_m.mul(&db)?)?;
    Ok(SeriesReport {
        order: max_order,
        sandwich: dm.first_difference(&sandwich),
        recursive: dm.first_difference(&recursive),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::random_law;
    use crate::scalar::rat;
    use crate::GScalar;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn law(seed: u64, k: usize, order: usize) -> Moments<GScalar> {
        random_law(k, order, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
    }

    #[test]
    fn delta_is_neutral() {
        let mu = law(1, 2, 4);
        let delta = Moments::delta(2, 4).unwrap();
        for kind in [CumulantFamily::Free, CumulantFamily::Boolean] {
            assert_eq!(convolve_laws(&mu, &delta, kind).unwrap(), mu);
        }
        assert!(convolve_laws(&mu, &delta, CumulantFamily::Monotone).is_err());
        assert!(convolve_laws(&mu, &law(2, 1, 4), CumulantFamily::Free).is_err());
    }

    #[test]
    fn free_second_moment() {
        let (mu, nu) = (law(3, 1, 3), law(4, 1, 3));
        let p = convolve_laws(&mu, &nu, CumulantFamily::Free).unwrap();
        let m = |l: &Moments<GScalar>, n| l.moment(&Word::power(1, n)).unwrap();
        assert_eq!(
            m(&p, 2),
            m(&mu, 2) + m(&nu, 2) + GScalar::from_i64(2) * m(&mu, 1) * m(&nu, 1)
        );
    }

    #[test]
    fn powers() {
        let mu = law(5, 2, 4);
        for kind in [CumulantFamily::Free, CumulantFamily::Boolean] {
            assert_eq!(law_power(&mu, &rat(1, 1), kind, false).unwrap(), mu);
            assert_eq!(
                law_power(&mu, &rat(0, 1), kind, false).unwrap(),
                Moments::delta(2, 4).unwrap()
            );
            assert!(law_power(&mu, &rat(-1, 2), kind, false).is_err());
            let back = law_power(&law_power(&mu, &rat(-1, 2), kind, true).unwrap(), &rat(-2, 1), kind, true);
            assert_eq!(back.unwrap(), mu);
        }
    }

    #[test]
    fn bercovici_pata() {
        let mu = law(6, 2, 4);
        assert_eq!(bp_map(&mu, &rat(0, 1)).unwrap(), mu);
        assert!(bp_map(&mu, &rat(-1, 1)).is_err());
        let b = bp_map(&mu, &rat(1, 1)).unwrap();
        assert_eq!(
            moments_to_cumulants(&b, CumulantFamily::Free).unwrap().table(),
            moments_to_cumulants(&mu, CumulantFamily::Boolean).unwrap().table()
        );
        assert_eq!(bp_map_shuffle(&mu, &rat(1, 2)).unwrap(), bp_map(&mu, &rat(1, 2)).unwrap());
        assert_eq!(bp_inverse(&b).unwrap(), mu);
    }

    #[test]
    fn boolean_join_factorises() {
        let j = join_independent(&law(7, 1, 4), &law(8, 1, 4), CumulantFamily::Boolean).unwrap();
        let m = |v: &[u8]| j.moment(&Word::from(v)).unwrap();
        assert_eq!(m(&[1, 2, 1]), m(&[1]) * m(&[2]) * m(&[1]));
        assert_eq!(m(&[1, 1, 2]), m(&[1, 1]) * m(&[2]));
        assert!(join_independent(&j, &j, CumulantFamily::Free).is_err());
    }

    #[test]
    fn series_identities() {
        for (k, n) in [(1, 5), (2, 4)] {
            let r = eta_series_check(&law(9, k, n), n).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        assert!(eta_series_check(&law(9, 1, 3), 4).is_err());
    }
}
