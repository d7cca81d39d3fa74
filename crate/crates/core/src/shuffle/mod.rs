//! Shuffle algebra engine on the double tensor algebra.
//!
//! A [`Functional`] is a linear map on bar monomials `w_1 | ... | w_m`. It
//! stores values on single words; values on longer bar monomials follow from
//! its [`Mode`]. Products are computed by pairing with the coproduct, and
//! the exponentials, logarithms and inverses by grade recursion on the word
//! length, which is exact for truncated tables.

mod coproduct;
mod ops;

pub use coproduct::{coproduct, coproduct_bars, Bars, TensorElement, Variant};
pub use ops::{
    adjoint, bernoulli, boolean_subordination, character_inverse, convolve, cumulants_via_shuffle,
    free_subordination, hs_exp, hs_log, magnus, magnus_inverse, prelie, w_rho,
    w_rho_inverse, Product, ShuffleCumulants,
};

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::laws::{all_words, word_index, words_of_length, Moments, Word, WordTable};
use crate::scalar::{Grassmann, Scalar};
use crate::Rational;

/// How a functional extends from words to bar monomials.
#[derive(Clone, Debug, PartialEq)]
pub enum Mode<S> {
    /// `f(1) = 1` and `f(u|v) = f(u) f(v)`.
    Character,
    /// `f(1) = 0` and `f` vanishes on any bar product of two non-units.
    Infinitesimal,
    /// `f(u|v) = Φ(u) f(v) + f(u) Φ(v)` for the character `Φ` with the
    /// given word values.
    Derivation(Arc<WordTable<S>>),
    /// Values on bar monomials stored explicitly.
    Generic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Functional<S> {
    mode: Mode<S>,
    unit: S,
    words: WordTable<S>,
    bars: Arc<HashMap<Bars, S>>,
}

/// Every bar monomial with at least two factors and total length at most
/// `order`, ordered by total length.
pub fn multi_bar_monomials(k: usize, order: usize) -> Vec<Bars> {
    fn compositions(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 1..=n {
            for mut rest in compositions(n - first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut out = Vec::new();
    for n in 2..=order {
        for parts in compositions(n).into_iter().filter(|p| p.len() >= 2) {
            let mut acc: Vec<Bars> = vec![vec![]];
            for len in parts {
                acc = acc
                    .into_iter()
                    .flat_map(|b| {
                        words_of_length(k, len).map(move |w| {
                            let mut b = b.clone();
                            b.push(w);
                            b
                        })
                    })
                    .collect();
            }
            out.extend(acc);
        }
    }
    out
}

impl<S: Scalar> Functional<S> {
    fn with_mode(mode: Mode<S>, unit: S, words: WordTable<S>) -> Self {
        Functional {
            mode,
            unit,
            words,
            bars: Arc::new(HashMap::new()),
        }
    }

    pub fn character(words: WordTable<S>) -> Self {
        Self::with_mode(Mode::Character, S::one(), words)
    }

    pub fn infinitesimal(words: WordTable<S>) -> Self {
        Self::with_mode(Mode::Infinitesimal, S::zero(), words)
    }

    /// A derivation along the character with word values `base`.
    pub fn derivation(words: WordTable<S>, base: WordTable<S>) -> Result<Self> {
        words.check_shape(&base)?;
        Ok(Self::with_mode(
            Mode::Derivation(Arc::new(base)),
            S::zero(),
            words,
        ))
    }

    /// A functional with explicit values on every bar monomial of total
    /// length up to the table order. Missing monomials are an error.
    pub fn generic(unit: S, words: WordTable<S>, bars: HashMap<Bars, S>) -> Result<Self> {
        for b in multi_bar_monomials(words.k(), words.order()) {
            if !bars.contains_key(&b) {
                return Err(Error::domain(format!(
                    "generic functional lacks a value on {}",
                    show_bars(&b)
                )));
            }
        }
        Ok(Functional {
            mode: Mode::Generic,
            unit,
            words,
            bars: Arc::new(bars),
        })
    }

    /// Generic functional with values drawn from `sample`.
    pub fn random_generic(k: usize, order: usize, mut sample: impl FnMut() -> S) -> Result<Self> {
        let unit = sample();
        let words = WordTable::from_fn(k, order, |_| sample())?;
        let bars = multi_bar_monomials(k, order)
            .into_iter()
            .map(|b| (b, sample()))
            .collect();
        Self::generic(unit, words, bars)
    }

    /// The counit `ε`: 1 on the unit, 0 elsewhere.
    pub fn counit(k: usize, order: usize) -> Result<Self> {
        Ok(Self::character(WordTable::zeros(k, order)?))
    }

    /// The character of a law.
    pub fn from_law(law: &Moments<S>) -> Self {
        Self::character(law.table().clone())
    }

    pub fn mode(&self) -> &Mode<S> {
        &self.mode
    }

    pub fn unit_value(&self) -> &S {
        &self.unit
    }

    pub fn words(&self) -> &WordTable<S> {
        &self.words
    }

    pub fn k(&self) -> usize {
        self.words.k()
    }

    pub fn order(&self) -> usize {
        self.words.order()
    }

    pub fn is_character(&self) -> bool {
        self.mode == Mode::Character
    }

    pub fn is_infinitesimal(&self) -> bool {
        self.mode == Mode::Infinitesimal
    }

    pub fn eval_word(&self, w: &Word) -> Result<S> {
        if w.is_empty() {
            Ok(self.unit.clone())
        } else {
            self.words.try_get(w).cloned()
        }
    }

    pub fn eval_bars(&self, bars: &[Word]) -> Result<S> {
        match bars {
            [] => return Ok(self.unit.clone()),
            [w] => return self.eval_word(w),
            _ => {}
        }
        match &self.mode {
            Mode::Character => bars
                .iter()
                .try_fold(S::one(), |acc, w| Ok(acc * self.eval_word(w)?)),
            Mode::Infinitesimal => Ok(S::zero()),
            Mode::Derivation(base) => {
                let mut acc = S::zero();
                for i in 0..bars.len() {
                    let mut term = self.eval_word(&bars[i])?;
                    for (j, w) in bars.iter().enumerate() {
                        if j != i {
                            term = term * base.try_get(w)?.clone();
                        }
                    }
                    acc = acc + term;
                }
                Ok(acc)
            }
            Mode::Generic => self.bars.get(bars).cloned().ok_or_else(|| {
                Error::domain(format!("no stored value on {}", show_bars(bars)))
            }),
        }
    }

    pub(crate) fn check_shape(&self, other: &Self) -> Result<()> {
        self.words.check_shape(&other.words)
    }

    /// `a * self + b * other`, keeping the strongest mode both share.
    pub fn combine(&self, a: &S, other: &Self, b: &S) -> Result<Self> {
        self.check_shape(other)?;
        let words = self
            .words
            .zip_with(&other.words, |x, y| a.clone() * x.clone() + b.clone() * y.clone())?;
        let unit = a.clone() * self.unit.clone() + b.clone() * other.unit.clone();
        match (&self.mode, &other.mode) {
            (Mode::Infinitesimal, Mode::Infinitesimal) => Ok(Self::infinitesimal(words)),
            (Mode::Derivation(p), Mode::Derivation(q)) if p == q => {
                Ok(Self::with_mode(Mode::Derivation(p.clone()), unit, words))
            }
            _ => {
                let mut bars = HashMap::new();
                for m in multi_bar_monomials(self.k(), self.order()) {
                    let v = a.clone() * self.eval_bars(&m)? + b.clone() * other.eval_bars(&m)?;
                    bars.insert(m, v);
                }
                Self::generic(unit, words, bars)
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(&S::one(), other, &S::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(&S::one(), other, &-S::one())
    }

    pub fn scale(&self, c: &Rational) -> Result<Self> {
        self.combine(&S::from_rational(c.clone()), self, &S::zero())
    }

    pub fn neg(&self) -> Result<Self> {
        self.scale(&-Rational::from_integer(1.into()))
    }

    /// Whether two functionals agree on the unit and every word.
    pub fn same_words(&self, other: &Self) -> bool {
        self.unit == other.unit && self.words == other.words
    }

    pub(crate) fn require_character(&self, what: &str) -> Result<()> {
        if self.is_character() {
            Ok(())
        } else {
            Err(Error::domain(format!("{what} needs a character")))
        }
    }

    pub(crate) fn require_infinitesimal(&self, what: &str) -> Result<()> {
        if self.is_infinitesimal() {
            Ok(())
        } else {
            Err(Error::domain(format!("{what} needs an infinitesimal character")))
        }
    }
}

impl Functional<Grassmann<Rational>> {
    /// Body part: a functional of the same mode over the rationals.
    pub fn body(&self) -> Result<Functional<Rational>> {
        let words = self.words.map(|g| g.body.clone());
        let unit = self.unit.body.clone();
        Ok(match &self.mode {
            Mode::Character => Functional::character(words),
            Mode::Infinitesimal => Functional::infinitesimal(words),
            Mode::Generic => Functional {
                mode: Mode::Generic,
                unit,
                words,
                bars: Arc::new(self.bars.iter().map(|(k, v)| (k.clone(), v.body.clone())).collect()),
            },
            Mode::Derivation(_) => {
                return Err(Error::domain("body of a derivation is not defined"));
            }
        })
    }

    /// Soul part. The soul of a Grassmann character is a derivation along
    /// its body; the soul of an infinitesimal character is infinitesimal.
    pub fn soul(&self) -> Result<Functional<Rational>> {
        let words = self.words.map(|g| g.soul.clone());
        Ok(match &self.mode {
            Mode::Character => Functional::derivation(words, self.words.map(|g| g.body.clone()))?,
            Mode::Infinitesimal => Functional::infinitesimal(words),
            Mode::Generic => Functional {
                mode: Mode::Generic,
                unit: self.unit.soul.clone(),
                words,
                bars: Arc::new(self.bars.iter().map(|(k, v)| (k.clone(), v.soul.clone())).collect()),
            },
            Mode::Derivation(_) => {
                return Err(Error::domain("soul of a derivation is not defined"));
            }
        })
    }

    /// `Φ + h Φ'` from a character and a derivation along it.
    pub fn merge(body: &Functional<Rational>, soul: &Functional<Rational>) -> Result<Self> {
        body.check_shape(soul)?;
        let mut values = body.words.values().iter().zip(soul.words.values());
        let words = WordTable::from_fn(body.k(), body.order(), |_| {
            let (b, s) = values.next().expect("same shape");
            Grassmann::new(b.clone(), s.clone())
        })?;
        match (&body.mode, &soul.mode) {
            (Mode::Character, Mode::Derivation(base)) if **base == body.words => {
                Ok(Functional::character(words))
            }
            (Mode::Infinitesimal, Mode::Infinitesimal) => Ok(Functional::infinitesimal(words)),
            _ => Err(Error::domain(
                "merge needs a character with a derivation along it, or two infinitesimal characters",
            )),
        }
    }
}

pub(crate) fn show_bars(bars: &[Word]) -> String {
    if bars.is_empty() {
        return "1".into();
    }
    bars.iter()
        .map(|w| format!("[{w}]"))
        .collect::<Vec<_>>()
        .join("|")
}

/// Read access used by the product and recursion code: a functional, or a
/// table still being filled in grade order.
pub(crate) trait Eval<S> {
    fn word(&self, w: &Word) -> Result<S>;
    fn bars(&self, bars: &[Word]) -> Result<S>;
}

impl<S: Scalar> Eval<S> for Functional<S> {
    fn word(&self, w: &Word) -> Result<S> {
        self.eval_word(w)
    }
    fn bars(&self, bars: &[Word]) -> Result<S> {
        self.eval_bars(bars)
    }
}

/// Word values in table order, possibly only a prefix, with a character or
/// infinitesimal extension to bars.
pub(crate) struct Partial<'a, S> {
    pub k: usize,
    pub unit: S,
    pub values: &'a [S],
    pub character: bool,
}

impl<S: Scalar> Eval<S> for Partial<'_, S> {
    fn word(&self, w: &Word) -> Result<S> {
        if w.is_empty() {
            return Ok(self.unit.clone());
        }
        self.values
            .get(word_index(self.k, w))
            .cloned()
            .ok_or_else(|| Error::domain(format!("word [{w}] not yet determined")))
    }

    fn bars(&self, bars: &[Word]) -> Result<S> {
        match bars {
            [] => Ok(self.unit.clone()),
            [w] => self.word(w),
            _ if self.character => bars
                .iter()
                .try_fold(S::one(), |acc, w| Ok(acc * self.word(w)?)),
            _ => Ok(S::zero()),
        }
    }
}

/// Word values only; bar values are unavailable.
pub(crate) struct WordsOnly<S> {
    pub unit: S,
    pub table: WordTable<S>,
}

impl<S: Scalar> Eval<S> for WordsOnly<S> {
    fn word(&self, w: &Word) -> Result<S> {
        if w.is_empty() {
            Ok(self.unit.clone())
        } else {
            self.table.try_get(w).cloned()
        }
    }

    fn bars(&self, bars: &[Word]) -> Result<S> {
        match bars {
            [] => Ok(self.unit.clone()),
            [w] => self.word(w),
            _ => Err(Error::domain("intermediate product has no bar values")),
        }
    }
}

/// Table of `f(w)` over every word of the given shape.
pub(crate) fn tabulate<S: Scalar>(
    k: usize,
    order: usize,
    mut f: impl FnMut(&Word) -> Result<S>,
) -> Result<WordTable<S>> {
    WordTable::try_from_fn(k, order, |w| f(w))
}

/// Fills word values in grade order; `step` sees every shorter word.
pub(crate) fn solve_by_grade<S: Scalar>(
    k: usize,
    order: usize,
    character: bool,
    mut step: impl FnMut(&Partial<'_, S>, &Word) -> Result<S>,
) -> Result<WordTable<S>> {
    let unit = if character { S::one() } else { S::zero() };
    let mut values: Vec<S> = Vec::new();
    for w in all_words(k, order) {
        let v = {
            let view = Partial {
                k,
                unit: unit.clone(),
                values: &values,
                character,
            };
            step(&view, &w)?
        };
        values.push(v);
    }
    let mut it = values.into_iter();
    WordTable::from_fn(k, order, |_| it.next().expect("filled above"))
}
