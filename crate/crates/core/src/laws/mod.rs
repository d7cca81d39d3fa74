//! Words, word-indexed tables, laws and cumulant tables.

mod format;

pub use format::{read_cumulants, read_law, write_cumulants, write_law};

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::scalar::{Grassmann, Scalar};
use crate::Rational;

/// Upper bound on the number of entries in a table.
pub const MAX_TABLE_SIZE: usize = 1 << 22;

/// A monomial in non-commuting variables; letters are 1-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// `a^n` for a single letter.
    pub fn power(letter: u8, n: usize) -> Self {
        Word(vec![letter; n])
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Subword at the given 1-based positions.
    pub fn restrict(&self, positions: &[usize]) -> Word {
        Word(positions.iter().map(|&i| self.0[i - 1]).collect())
    }

    /// Subword at 0-based positions selected by a bit mask.
    pub fn restrict_mask(&self, mask: u64) -> Word {
        Word(
            (0..self.0.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| self.0[i])
                .collect(),
        )
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl From<&[u8]> for Word {
    fn from(v: &[u8]) -> Self {
        Word(v.to_vec())
    }
}

impl<const N: usize> From<[u8; N]> for Word {
    fn from(v: [u8; N]) -> Self {
        Word(v.to_vec())
    }
}

/// Values on every word of length `1..=order` over `k` letters.
///
/// Storage is dense: words are ordered by length, then lexicographically.
#[derive(Clone, PartialEq)]
pub struct WordTable<S> {
    k: usize,
    order: usize,
    values: Vec<S>,
}

fn table_size(k: usize, order: usize) -> Result<usize> {
    let mut total: usize = 0;
    let mut layer: usize = 1;
    for _ in 0..order {
        layer = layer
            .checked_mul(k)
            .filter(|&l| l <= MAX_TABLE_SIZE)
            .ok_or_else(|| Error::dimension(format!("{k} letters to order {order} is too large")))?;
        total += layer;
    }
    if total > MAX_TABLE_SIZE {
        return Err(Error::dimension(format!("{k} letters to order {order} is too large")));
    }
    Ok(total)
}

/// Every word of length `1..=order` over `k` letters in table order.
pub fn all_words(k: usize, order: usize) -> impl Iterator<Item = Word> {
    (1..=order).flat_map(move |len| words_of_length(k, len))
}

pub fn words_of_length(k: usize, len: usize) -> impl Iterator<Item = Word> {
    let count = k.checked_pow(len as u32).unwrap_or(0);
    (0..count).map(move |mut r| {
        let mut letters = vec![0u8; len];
        for slot in letters.iter_mut().rev() {
            *slot = (r % k) as u8 + 1;
            r /= k;
        }
        Word(letters)
    })
}

/// Dense position of a non-empty word with letters in `1..=k`.
pub(crate) fn word_index(k: usize, w: &Word) -> usize {
    let mut offset = 0;
    let mut layer = 1;
    for _ in 1..w.len() {
        layer *= k;
        offset += layer;
    }
    offset + w.0.iter().fold(0, |r, &l| r * k + (l as usize - 1))
}

impl<S: Scalar> WordTable<S> {
    pub fn from_fn(k: usize, order: usize, mut f: impl FnMut(&Word) -> S) -> Result<Self> {
        Self::try_from_fn(k, order, |w| Ok(f(w)))
    }

    pub fn try_from_fn(
        k: usize,
        order: usize,
        mut f: impl FnMut(&Word) -> Result<S>,
    ) -> Result<Self> {
        if k == 0 || k > u8::MAX as usize {
            return Err(Error::dimension(format!("{k} variables")));
        }
        if order == 0 {
            return Err(Error::dimension("order must be at least 1"));
        }
        let size = table_size(k, order)?;
        let mut values = Vec::with_capacity(size);
        for w in all_words(k, order) {
            values.push(f(&w)?);
        }
        Ok(WordTable { k, order, values })
    }

    pub fn zeros(k: usize, order: usize) -> Result<Self> {
        Self::from_fn(k, order, |_| S::zero())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Position of a non-empty word, if it is in range.
    pub fn index_of(&self, w: &Word) -> Option<usize> {
        let len = w.len();
        if len == 0 || len > self.order || w.0.iter().any(|&l| l == 0 || l as usize > self.k) {
            return None;
        }
        Some(word_index(self.k, w))
    }

    pub fn get(&self, w: &Word) -> Option<&S> {
        self.index_of(w).map(|i| &self.values[i])
    }

    pub fn try_get(&self, w: &Word) -> Result<&S> {
        self.get(w).ok_or_else(|| {
            Error::dimension(format!(
                "word [{w}] outside table with {} letters, order {}",
                self.k, self.order
            ))
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (Word, &S)> {
        all_words(self.k, self.order).zip(self.values.iter())
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> WordTable<T> {
        WordTable {
            k: self.k,
            order: self.order,
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self> {
        self.check_shape(other)?;
        Ok(WordTable {
            k: self.k,
            order: self.order,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn check_shape<T>(&self, other: &WordTable<T>) -> Result<()> {
        if self.k != other.k || self.order != other.order {
            return Err(Error::dimension(format!(
                "tables with (vars {}, order {}) and (vars {}, order {})",
                self.k, self.order, other.k, other.order
            )));
        }
        Ok(())
    }

    /// Restriction to words of length at most `order`.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order == 0 || order > self.order {
            return Err(Error::dimension(format!(
                "cannot truncate order {} to {order}",
                self.order
            )));
        }
        let size = table_size(self.k, order)?;
        Ok(WordTable {
            k: self.k,
            order,
            values: self.values[..size].to_vec(),
        })
    }
}

impl<S: Scalar> Index<&Word> for WordTable<S> {
    type Output = S;
    fn index(&self, w: &Word) -> &S {
        match self.get(w) {
            Some(v) => v,
            None => panic!("word [{w}] outside table"),
        }
    }
}

impl<S: Scalar> AsRef<WordTable<S>> for WordTable<S> {
    fn as_ref(&self) -> &WordTable<S> {
        self
    }
}

impl<S: fmt::Debug> fmt::Debug for WordTable<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (w, v) in all_words(self.k, self.order).zip(&self.values) {
            m.entry(&w, v);
        }
        m.finish()
    }
}

/// A truncated law: moments on non-empty words. The empty word has moment 1.
#[derive(Clone, PartialEq, Debug)]
pub struct Moments<S> {
    table: WordTable<S>,
}

impl<S: Scalar> Moments<S> {
    pub fn new(table: WordTable<S>) -> Self {
        Moments { table }
    }

    pub fn from_fn(k: usize, order: usize, f: impl FnMut(&Word) -> S) -> Result<Self> {
        WordTable::from_fn(k, order, f).map(Moments::new)
    }

    /// The law whose cumulants of every family vanish: all moments zero.
    pub fn delta(k: usize, order: usize) -> Result<Self> {
        WordTable::zeros(k, order).map(Moments::new)
    }

    pub fn table(&self) -> &WordTable<S> {
        &self.table
    }

    pub fn into_table(self) -> WordTable<S> {
        self.table
    }

    pub fn k(&self) -> usize {
        self.table.k
    }

    pub fn order(&self) -> usize {
        self.table.order
    }

    /// Moment of `w`, with the unit convention on the empty word.
    pub fn moment(&self, w: &Word) -> Result<S> {
        if w.is_empty() {
            Ok(S::one())
        } else {
            self.table.try_get(w).cloned()
        }
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        self.table.truncate(order).map(Moments::new)
    }
}

impl<S: Scalar> AsRef<WordTable<S>> for Moments<S> {
    fn as_ref(&self) -> &WordTable<S> {
        &self.table
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CumulantFamily {
    Free,
    Boolean,
    Monotone,
}

impl CumulantFamily {
    pub const ALL: [CumulantFamily; 3] = [
        CumulantFamily::Free,
        CumulantFamily::Boolean,
        CumulantFamily::Monotone,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CumulantFamily::Free => "free",
            CumulantFamily::Boolean => "boolean",
            CumulantFamily::Monotone => "monotone",
        }
    }
}

impl fmt::Display for CumulantFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CumulantFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(CumulantFamily::Free),
            "boolean" => Ok(CumulantFamily::Boolean),
            "monotone" => Ok(CumulantFamily::Monotone),
            _ => Err(Error::domain(format!("unknown cumulant family {s:?}"))),
        }
    }
}

/// A cumulant table tagged with its family.
#[derive(Clone, PartialEq, Debug)]
pub struct Cumulants<S> {
    pub family: CumulantFamily,
    table: WordTable<S>,
}

impl<S: Scalar> Cumulants<S> {
    pub fn new(family: CumulantFamily, table: WordTable<S>) -> Self {
        Cumulants { family, table }
    }

    pub fn table(&self) -> &WordTable<S> {
        &self.table
    }

    pub fn into_table(self) -> WordTable<S> {
        self.table
    }

    pub fn k(&self) -> usize {
        self.table.k
    }

    pub fn order(&self) -> usize {
        self.table.order
    }

    pub fn get(&self, w: &Word) -> Result<&S> {
        self.table.try_get(w)
    }
}

impl<S: Scalar> AsRef<WordTable<S>> for Cumulants<S> {
    fn as_ref(&self) -> &WordTable<S> {
        &self.table
    }
}

/// `f_pi(w) = prod_{V in pi} f(w|_V)`.
///
/// Over Grassmann numbers the soul of the product is the Leibniz sum
/// `sum_V f'(w|_V) prod_{W != V} f(w|_W)`.
pub fn extend_over_partition<S: Scalar>(
    values: impl AsRef<WordTable<S>>,
    pi: &Partition,
    w: &Word,
) -> Result<S> {
    if w.len() != pi.n() {
        return Err(Error::dimension(format!(
            "word of length {} against partition of [{}]",
            w.len(),
            pi.n()
        )));
    }
    let table = values.as_ref();
    let mut acc = S::one();
    for block in pi.blocks() {
        acc = acc * table.try_get(&w.restrict(block))?.clone();
    }
    Ok(acc)
}

/// Small random rational: numerator in `[-9, 9]`, denominator in `[1, 9]`.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    let p: i64 = rng.gen_range(-9..=9);
    let q: i64 = rng.gen_range(1..=9);
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// A random Grassmann-valued law with small rational entries.
pub fn random_law(k: usize, order: usize, rng: &mut impl Rng) -> Result<Moments<Grassmann<Rational>>> {
    Moments::from_fn(k, order, |_| {
        let body = random_rational(rng);
        let soul = random_rational(rng);
        Grassmann::new(body, soul)
    })
}

/// A random table (for cumulants or functionals) with small rational entries.
pub fn random_table(
    k: usize,
    order: usize,
    rng: &mut impl Rng,
) -> Result<WordTable<Grassmann<Rational>>> {
    WordTable::from_fn(k, order, |_| {
        Grassmann::new(random_rational(rng), random_rational(rng))
    })
}

/// Body or soul of a Grassmann table.
pub fn body_table(t: &WordTable<Grassmann<Rational>>) -> WordTable<Rational> {
    t.map(|g| g.body.clone())
}

pub fn soul_table(t: &WordTable<Grassmann<Rational>>) -> WordTable<Rational> {
    t.map(|g| g.soul.clone())
}

/// Whether the table is zero on every word.
pub fn is_zero_table<S: Scalar>(t: &WordTable<S>) -> bool {
    t.values().iter().all(Zero::is_zero)
}
