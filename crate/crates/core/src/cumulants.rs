//! Partition-sum engine for moment-cumulant and cumulant-cumulant formulas.
//!
//! With [`crate::GScalar`] entries the soul of every output is the
//! infinitesimal cumulant (or moment), since Grassmann products apply the
//! Leibniz rule block by block.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laws::{words_of_length, CumulantFamily, Cumulants, Moments, Word, WordTable};
use crate::partitions::{self, enumerate, nesting_stats, Partition, PartitionFamily};
use crate::scalar::Scalar;
use crate::Rational;

/// Coefficient lists `(pi, c_pi)` for the sums `sum_pi c_pi f_pi(w)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Formula {
    /// NC(n), coefficient 1.
    FreeMoments,
    /// I(n), coefficient 1.
    BooleanMoments,
    /// NC(n), coefficient 1/tau(pi)!.
    MonotoneMoments,
    /// NC(n), Mob(pi, 1_n).
    FreeCumulants,
    /// I(n), (-1)^{|pi|-1}.
    BooleanCumulants,
    /// NC_irr(n), coefficient 1.
    FreeToBoolean,
    /// NC_irr(n), (-1)^{|pi|-1}.
    BooleanToFree,
    /// NC_irr(n), 1/tau(pi)!.
    MonotoneToBoolean,
    /// NC_irr(n), (-1)^{|pi|-1}/tau(pi)!.
    MonotoneToFree,
}

/// Each term is a partition, as block bitmasks over word positions, with its
/// coefficient.
type Terms = Vec<(Vec<u64>, Rational)>;

type TermCache = Mutex<HashMap<(Formula, usize), Arc<Terms>>>;

static TERMS: OnceLock<TermCache> = OnceLock::new();

fn sign(pi: &Partition) -> Rational {
    if pi.block_count() % 2 == 1 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn inv_tree_factorial(pi: &Partition) -> Rational {
    let tf = nesting_stats(pi).expect("non-crossing by construction").tree_factorial;
    Rational::new(BigInt::one(), BigInt::from(tf))
}

fn terms(formula: Formula, n: usize) -> Result<Arc<Terms>> {
    let cache = TERMS.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&(formula, n)) {
        return Ok(t.clone());
    }
    use Formula::*;
    let family = match formula {
        FreeMoments | MonotoneMoments | FreeCumulants => PartitionFamily::NonCrossing,
        BooleanMoments | BooleanCumulants => PartitionFamily::Interval,
        _ => PartitionFamily::IrreducibleNc,
    };
    let list = enumerate(n, family)?;
    let mobius = match formula {
        FreeCumulants => Some(partitions::mobius_table(n)?),
        _ => None,
    };
    let built: Terms = list
        .iter()
        .map(|pi| {
            let c = match formula {
                FreeMoments | BooleanMoments | FreeToBoolean => Rational::one(),
                MonotoneMoments | MonotoneToBoolean => inv_tree_factorial(pi),
                FreeCumulants => Rational::from_integer(BigInt::from(mobius.as_ref().unwrap()[pi])),
                BooleanCumulants | BooleanToFree => sign(pi),
                MonotoneToFree => sign(pi) * inv_tree_factorial(pi),
            };
            (pi.masks(), c)
        })
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let built = Arc::new(built);
    cache.lock().unwrap().insert((formula, n), built.clone());
    Ok(built)
}

/// Values of `lookup` on every subword `w_S`, indexed by the mask of `S`.
fn subword_values<S: Scalar>(lookup: &impl Fn(&Word) -> S, w: &Word) -> Vec<S> {
    (0..1u64 << w.len())
        .map(|m| if m == 0 { S::one() } else { lookup(&w.restrict_mask(m)) })
        .collect()
}

fn product_over<S: Scalar>(values: &[S], blocks: &[u64]) -> S {
    let mut acc = values[blocks[0] as usize].clone();
    for &b in &blocks[1..] {
        acc = acc * values[b as usize].clone();
    }
    acc
}

fn weighted<S: Scalar>(c: &Rational, x: S) -> S {
    if c.is_one() {
        x
    } else if (-c.clone()).is_one() {
        -x
    } else {
        x.scale(c)
    }
}

/// `sum_pi c_pi f_pi(w)` for every word of the source table's shape.
fn transform<S: Scalar>(source: &WordTable<S>, formula: Formula) -> Result<WordTable<S>> {
    let k = source.k();
    let lookup = |w: &Word| source[w].clone();
    let mut values = Vec::with_capacity(source.values().len());
    for n in 1..=source.order() {
        let terms = terms(formula, n)?;
        for w in words_of_length(k, n) {
            let sub = subword_values(&lookup, &w);
            let mut acc = S::zero();
            for (blocks, c) in terms.iter() {
                acc = acc + weighted(c, product_over(&sub, blocks));
            }
            values.push(acc);
        }
    }
    let mut it = values.into_iter();
    WordTable::from_fn(k, source.order(), |_| it.next().expect("sized above"))
}

/// Monotone cumulants: solve `phi(w) = sum_{NC(n)} h_pi(w) / tau(pi)!` for
/// `h(w)`, which appears only through `pi = 1_n` with weight 1.
fn monotone_from_moments<S: Scalar>(law: &WordTable<S>) -> Result<WordTable<S>> {
    let k = law.k();
    let shape: WordTable<Rational> = WordTable::zeros(k, law.order())?;
    let mut values: Vec<S> = Vec::with_capacity(law.values().len());
    for n in 1..=law.order() {
        let terms = terms(Formula::MonotoneMoments, n)?;
        let full = (1u64 << n) - 1;
        for w in words_of_length(k, n) {
            // Shorter words are already solved, in table order.
            let lookup = |u: &Word| {
                if u.len() == n {
                    S::zero()
                } else {
                    values[shape.index_of(u).expect("in range")].clone()
                }
            };
            let sub = subword_values(&lookup, &w);
            let mut h = law[&w].clone();
            for (blocks, c) in terms.iter() {
                if blocks[0] != full {
                    h = h - weighted(c, product_over(&sub, blocks));
                }
            }
            values.push(h);
        }
    }
    let mut it = values.into_iter();
    WordTable::from_fn(k, law.order(), |_| it.next().expect("sized above"))
}

pub fn moments_to_cumulants<S: Scalar>(
    law: &Moments<S>,
    family: CumulantFamily,
) -> Result<Cumulants<S>> {
    let t = law.table();
    let table = match family {
        CumulantFamily::Free => transform(t, Formula::FreeCumulants)?,
        CumulantFamily::Boolean => transform(t, Formula::BooleanCumulants)?,
        CumulantFamily::Monotone => monotone_from_moments(t)?,
    };
    Ok(Cumulants::new(family, table))
}

pub fn cumulants_to_moments<S: Scalar>(table: &Cumulants<S>) -> Result<Moments<S>> {
    let formula = match table.family {
        CumulantFamily::Free => Formula::FreeMoments,
        CumulantFamily::Boolean => Formula::BooleanMoments,
        CumulantFamily::Monotone => Formula::MonotoneMoments,
    };
    transform(table.table(), formula).map(Moments::new)
}

/// Converts between cumulant families. The four directions with a known
/// irreducible-partition formula are evaluated directly; a monotone target
/// is reached through moments.
pub fn cumulant_to_cumulant<S: Scalar>(
    table: &Cumulants<S>,
    target: CumulantFamily,
) -> Result<Cumulants<S>> {
    use CumulantFamily::*;
    let formula = match (table.family, target) {
        (a, b) if a == b => {
            return Err(Error::domain(format!("source and target are both {a}")));
        }
        (Free, Boolean) => Formula::FreeToBoolean,
        (Boolean, Free) => Formula::BooleanToFree,
        (Monotone, Boolean) => Formula::MonotoneToBoolean,
        (Monotone, Free) => Formula::MonotoneToFree,
        (_, Monotone) => {
            let law = cumulants_to_moments(table)?;
            return moments_to_cumulants(&law, Monotone);
        }
        _ => unreachable!(),
    };
    Ok(Cumulants::new(target, transform(table.table(), formula)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::random_law;
    use crate::scalar::rat;
    use crate::{GScalar, Law};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn law(seed: u64, k: usize, n: usize) -> Law {
        random_law(k, n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
    }

    fn w(v: &[u8]) -> Word {
        Word::from(v)
    }

    #[test]
    fn order_two_examples() {
        let mu = law(5, 1, 2);
        let (m1, m2) = (mu.moment(&w(&[1])).unwrap(), mu.moment(&w(&[1, 1])).unwrap());
        let expect = m2 - m1.clone() * m1;
        for fam in CumulantFamily::ALL {
            let c = moments_to_cumulants(&mu, fam).unwrap();
            assert_eq!(c.get(&w(&[1, 1])).unwrap(), &expect, "{fam}");
        }
    }

    #[test]
    fn centered_monotone_third_cumulant() {
        let mut mu = law(9, 1, 3).into_table();
        mu = WordTable::from_fn(1, 3, |x| if x.len() == 1 { GScalar::zero() } else { mu[x].clone() })
            .unwrap();
        let h = moments_to_cumulants(&Moments::new(mu.clone()), CumulantFamily::Monotone).unwrap();
        assert_eq!(h.get(&w(&[1, 1, 1])).unwrap(), &mu[&w(&[1, 1, 1])]);
    }

    #[test]
    fn first_order_is_the_mean() {
        let mu = law(2, 2, 3);
        for fam in CumulantFamily::ALL {
            let c = moments_to_cumulants(&mu, fam).unwrap();
            for l in 1..=2 {
                assert_eq!(c.get(&w(&[l])).unwrap(), &mu.moment(&w(&[l])).unwrap());
            }
        }
    }

    #[test]
    fn free_to_boolean_low_orders() {
        let r = Cumulants::new(CumulantFamily::Free, law(4, 1, 3).into_table());
        let b = cumulant_to_cumulant(&r, CumulantFamily::Boolean).unwrap();
        let get = |n: usize| r.get(&Word::power(1, n)).unwrap().clone();
        assert_eq!(b.get(&Word::power(1, 2)).unwrap(), &get(2));
        let b3 = b.get(&Word::power(1, 3)).unwrap().clone();
        assert_eq!(b3, get(3) + get(1) * get(2));
        assert_eq!(
            b3.soul,
            get(3).soul + get(1).soul * get(2).body + get(1).body * get(2).soul
        );
    }

    #[test]
    fn monotone_to_free_low_order() {
        let h = Cumulants::new(CumulantFamily::Monotone, law(6, 1, 3).into_table());
        let r = cumulant_to_cumulant(&h, CumulantFamily::Free).unwrap();
        let get = |n: usize| h.get(&Word::power(1, n)).unwrap().clone();
        assert_eq!(
            r.get(&Word::power(1, 3)).unwrap(),
            &(get(3) - (get(1) * get(2)).scale(&rat(1, 2)))
        );
        let via = moments_to_cumulants(&cumulants_to_moments(&h).unwrap(), CumulantFamily::Free)
            .unwrap();
        assert_eq!(r, via);
    }

    #[test]
    fn same_family_is_rejected() {
        let r = Cumulants::new(CumulantFamily::Free, law(1, 1, 2).into_table());
        assert!(matches!(
            cumulant_to_cumulant(&r, CumulantFamily::Free),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn round_trips() {
        for seed in 0..3 {
            let mu = law(seed, 2, 5);
            for fam in CumulantFamily::ALL {
                let c = moments_to_cumulants(&mu, fam).unwrap();
                assert_eq!(cumulants_to_moments(&c).unwrap(), mu);
                let c2 = Cumulants::new(fam, mu.table().clone());
                let back = moments_to_cumulants(&cumulants_to_moments(&c2).unwrap(), fam).unwrap();
                assert_eq!(back, c2);
            }
        }
    }

    #[test]
    fn conversions_commute_with_moments() {
        let mu = law(11, 2, 5);
        for src in CumulantFamily::ALL {
            let c = moments_to_cumulants(&mu, src).unwrap();
            for dst in CumulantFamily::ALL {
                if src != dst {
                    assert_eq!(
                        cumulant_to_cumulant(&c, dst).unwrap(),
                        moments_to_cumulants(&mu, dst).unwrap(),
                        "{src} -> {dst}"
                    );
                }
            }
        }
    }
}
