//! The coproduct of the double tensor algebra and its half-shuffle pieces.
//!
//! For a word `w = a_1 ... a_n` and `S` a subset of positions, the term for
//! `S` is `a_S ⊗ a_{J_1} | ... | a_{J_k}` where the `J_i` are the maximal
//! runs of positions outside `S`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::laws::Word;
use crate::scalar::Scalar;

use super::Functional;

/// A bar monomial `w_1 | ... | w_m` of non-empty words; empty is the unit.
pub type Bars = Vec<Word>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Full,
    /// Terms with the first position in `S`.
    Prec,
    /// Terms with the first position outside `S`.
    Succ,
}

impl Variant {
    pub(crate) fn admits(self, mask: u64) -> bool {
        match self {
            Variant::Full => true,
            Variant::Prec => mask & 1 == 1,
            Variant::Succ => mask & 1 == 0,
        }
    }
}

/// One subset `S` with its complementary runs, as 0-based positions.
#[derive(Debug)]
pub(crate) struct Split {
    pub mask: u64,
    pub runs: Vec<(usize, usize)>,
}

static SPLITS: OnceLock<Mutex<HashMap<usize, Arc<Vec<Split>>>>> = OnceLock::new();

pub(crate) fn splits(n: usize) -> Arc<Vec<Split>> {
    assert!(n < 32, "word too long for subset enumeration");
    let cache = SPLITS.get_or_init(Default::default);
    if let Some(s) = cache.lock().unwrap().get(&n) {
        return s.clone();
    }
    let list: Vec<Split> = (0u64..1 << n)
        .map(|mask| {
            let mut runs = Vec::new();
            let mut start = None;
            for i in 0..=n {
                let outside = i < n && mask >> i & 1 == 0;
                match (outside, start) {
                    (true, None) => start = Some(i),
                    (false, Some(s)) => {
                        runs.push((s, i));
                        start = None;
                    }
                    _ => {}
                }
            }
            Split { mask, runs }
        })
        .collect();
    let list = Arc::new(list);
    cache.lock().unwrap().insert(n, list.clone());
    list
}

pub(crate) fn run_words(w: &Word, runs: &[(usize, usize)]) -> Bars {
    runs.iter().map(|&(s, e)| w.slice(s, e)).collect()
}

/// The terms of `Δ(w)`, `Δ_≺(w)` or `Δ_≻(w)`, as (left word, right bars).
pub fn coproduct(w: &Word, variant: Variant) -> Result<Vec<(Word, Bars)>> {
    if w.is_empty() {
        return Err(Error::domain("coproduct of the empty word"));
    }
    Ok(splits(w.len())
        .iter()
        .filter(|s| variant.admits(s.mask))
        .map(|s| (w.restrict_mask(s.mask), run_words(w, &s.runs)))
        .collect())
}

/// Coproduct on a bar monomial, extended multiplicatively. The half
/// variants split the first factor and take the full coproduct on the rest.
/// On the unit only the full coproduct has a term.
pub fn coproduct_bars(bars: &[Word], variant: Variant) -> Result<Vec<(Bars, Bars)>> {
    let Some((first, rest)) = bars.split_first() else {
        return Ok(match variant {
            Variant::Full => vec![(Vec::new(), Vec::new())],
            _ => Vec::new(),
        });
    };
    let mut acc: Vec<(Bars, Bars)> = coproduct(first, variant)?
        .into_iter()
        .map(|(l, r)| (if l.is_empty() { vec![] } else { vec![l] }, r))
        .collect();
    for w in rest {
        let terms = coproduct(w, Variant::Full)?;
        acc = acc
            .iter()
            .flat_map(|(l0, r0)| {
                terms.iter().map(move |(l, r)| {
                    let mut left = l0.clone();
                    if !l.is_empty() {
                        left.push(l.clone());
                    }
                    let mut right = r0.clone();
                    right.extend(r.iter().cloned());
                    (left, right)
                })
            })
            .collect();
    }
    Ok(acc)
}

/// A finite linear combination of bar monomials.
#[derive(Clone, PartialEq, Debug)]
pub struct TensorElement<S> {
    terms: BTreeMap<Bars, S>,
}

impl<S: Scalar> Default for TensorElement<S> {
    fn default() -> Self {
        TensorElement {
            terms: BTreeMap::new(),
        }
    }
}

impl<S: Scalar> TensorElement<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit `1`.
    pub fn unit() -> Self {
        Self::monomial(Vec::new(), S::one())
    }

    pub fn monomial(bars: Bars, coeff: S) -> Self {
        let mut t = Self::default();
        t.add_term(bars, coeff);
        t
    }

    pub fn word(w: Word) -> Self {
        Self::monomial(vec![w], S::one())
    }

    fn add_term(&mut self, bars: Bars, coeff: S) {
        debug_assert!(bars.iter().all(|w| !w.is_empty()));
        let slot = self.terms.entry(bars).or_insert_with(S::zero);
        *slot = slot.clone() + coeff;
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Bars, &S)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::default();
        for (b, x) in &self.terms {
            out.add_term(b.clone(), x.clone() * c.clone());
        }
        out
    }

    /// Bilinear extension of bar concatenation.
    pub fn bar(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut m = a.clone();
                m.extend(b.iter().cloned());
                out.add_term(m, x.clone() * y.clone());
            }
        }
        out
    }

    /// `f` applied linearly.
    pub fn pair(&self, f: &Functional<S>) -> Result<S> {
        let mut acc = S::zero();
        for (b, c) in &self.terms {
            acc = acc + c.clone() * f.eval_bars(b)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn w(v: &[u8]) -> Word {
        Word::from(v)
    }

    fn sorted(mut v: Vec<(Word, Bars)>) -> Vec<(Word, Bars)> {
        v.sort();
        v
    }

    #[test]
    fn single_letter() {
        assert_eq!(
            sorted(coproduct(&w(&[1]), Variant::Full).unwrap()),
            sorted(vec![(w(&[1]), vec![]), (Word::empty(), vec![w(&[1])])])
        );
    }

    #[test]
    fn two_letters_split() {
        let ab = w(&[1, 2]);
        assert_eq!(
            sorted(coproduct(&ab, Variant::Prec).unwrap()),
            sorted(vec![(ab.clone(), vec![]), (w(&[1]), vec![w(&[2])])])
        );
        assert_eq!(
            sorted(coproduct(&ab, Variant::Succ).unwrap()),
            sorted(vec![(Word::empty(), vec![ab.clone()]), (w(&[2]), vec![w(&[1])])])
        );
        assert!(coproduct(&Word::empty(), Variant::Full).is_err());
    }

    #[test]
    fn full_is_disjoint_union_of_halves() {
        let x = w(&[1, 2, 1, 3, 2]);
        let mut halves = coproduct(&x, Variant::Prec).unwrap();
        halves.extend(coproduct(&x, Variant::Succ).unwrap());
        assert_eq!(sorted(halves), sorted(coproduct(&x, Variant::Full).unwrap()));
        assert_eq!(coproduct(&x, Variant::Full).unwrap().len(), 32);
    }

    #[test]
    fn runs_of_the_complement() {
        let x = w(&[1, 2, 3, 4]);
        let terms = coproduct(&x, Variant::Full).unwrap();
        assert!(terms.contains(&(w(&[1, 3]), vec![w(&[2]), w(&[4])])));
        assert!(terms.contains(&(w(&[2]), vec![w(&[1]), w(&[3, 4])])));
    }

    #[test]
    fn multiplicative_on_bars() {
        let t = coproduct_bars(&[w(&[1]), w(&[2])], Variant::Full).unwrap();
        assert_eq!(t.len(), 4);
        assert!(t.contains(&(vec![w(&[1])], vec![w(&[2])])));
        assert!(t.contains(&(vec![], vec![w(&[1]), w(&[2])])));
        let p = coproduct_bars(&[w(&[1]), w(&[2])], Variant::Prec).unwrap();
        assert_eq!(p.len(), 2);
        assert!(coproduct_bars(&[], Variant::Succ).unwrap().is_empty());
    }

    #[test]
    fn tensor_algebra() {
        let a = TensorElement::<Rational>::word(w(&[1]));
        let b = TensorElement::<Rational>::word(w(&[2]));
        let ab = a.bar(&b);
        assert_eq!(ab.terms().count(), 1);
        assert_eq!(TensorElement::unit().bar(&ab), ab);
        assert!(ab.add(&ab.scale(&-Rational::from_integer(1.into()))).is_zero());
    }
}
