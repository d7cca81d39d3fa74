//! Convolution products, half-shuffle exponentials and logarithms, the
//! shuffle adjoint action and the pre-Lie Magnus expansion.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::coproduct::{coproduct_bars, run_words, splits, Variant};
use super::{multi_bar_monomials, solve_by_grade, tabulate, Eval, Functional, Partial, WordsOnly};
use crate::error::Result;
use crate::laws::{all_words, word_index, CumulantFamily, Cumulants, Moments, Word, WordTable};
use crate::scalar::Scalar;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Product {
    /// `f ⋆ g`, paired with the full coproduct.
    Star,
    /// `f ≺ g`.
    Prec,
    /// `f ≻ g`.
    Succ,
}

impl Product {
    fn variant(self) -> Variant {
        match self {
            Product::Star => Variant::Full,
            Product::Prec => Variant::Prec,
            Product::Succ => Variant::Succ,
        }
    }
}

/// `sum_S f(a_S) g(a_J1 | ... | a_Jk)` over subsets accepted by `admit`.
fn pair_word<S: Scalar>(
    f: &impl Eval<S>,
    g: &impl Eval<S>,
    w: &Word,
    admit: impl Fn(u64) -> bool,
) -> Result<S> {
    let mut acc = S::zero();
    for s in splits(w.len()).iter().filter(|s| admit(s.mask)) {
        let left = f.word(&w.restrict_mask(s.mask))?;
        if left.is_zero() {
            continue;
        }
        acc = acc + left * g.bars(&run_words(w, &s.runs))?;
    }
    Ok(acc)
}

fn product_table<S: Scalar>(
    f: &impl Eval<S>,
    g: &impl Eval<S>,
    product: Product,
    k: usize,
    order: usize,
) -> Result<WordTable<S>> {
    let v = product.variant();
    tabulate(k, order, |w| pair_word(f, g, w, |m| v.admits(m)))
}

fn factorial(n: usize) -> Rational {
    Rational::from_integer((1..=n).map(BigInt::from).product())
}

/// `f ⋆ g`, `f ≺ g` or `f ≻ g`.
///
/// The product of two characters is a character. Any other product is
/// returned as a generic functional with its values on bar monomials
/// computed through the multiplicative extension of the coproduct.
pub fn convolve<S: Scalar>(
    f: &Functional<S>,
    g: &Functional<S>,
    product: Product,
) -> Result<Functional<S>> {
    f.check_shape(g)?;
    let (k, order) = (f.k(), f.order());
    let words = product_table(f, g, product, k, order)?;
    if product == Product::Star && f.is_character() && g.is_character() {
        return Ok(Functional::character(words));
    }
    let unit = match product {
        Product::Star => f.unit_value().clone() * g.unit_value().clone(),
        _ => S::zero(),
    };
    let mut bars = HashMap::new();
    for m in multi_bar_monomials(k, order) {
        let mut acc = S::zero();
        for (l, r) in coproduct_bars(&m, product.variant())? {
            acc = acc + f.eval_bars(&l)? * g.eval_bars(&r)?;
        }
        bars.insert(m, acc);
    }
    Functional::generic(unit, words, bars)
}

/// Convolution inverse of a character, solved grade by grade from
/// `Φ ⋆ Φ⁻¹ = ε`.
pub fn character_inverse<S: Scalar>(phi: &Functional<S>) -> Result<Functional<S>> {
    phi.require_character("character inverse")?;
    let words = solve_by_grade(phi.k(), phi.order(), true, |inv, w| {
        Ok(-pair_word(phi, inv, w, |m| m != 0)?)
    })?;
    Ok(Functional::character(words))
}

/// `E_≺`, `E_≻` or `exp⋆` of an infinitesimal character.
pub fn hs_exp<S: Scalar>(alpha: &Functional<S>, kind: Product) -> Result<Functional<S>> {
    alpha.require_infinitesimal("exponential")?;
    let (k, order) = (alpha.k(), alpha.order());
    let words = match kind {
        // Φ = ε + κ ≺ Φ
        Product::Prec => solve_by_grade(k, order, true, |phi, w| {
            pair_word(alpha, phi, w, |m| m & 1 == 1)
        })?,
        // Φ = ε + Φ ≻ β
        Product::Succ => solve_by_grade(k, order, true, |phi, w| {
            pair_word(phi, alpha, w, |m| m & 1 == 0)
        })?,
        Product::Star => {
            let mut power = WordsOnly {
                unit: S::one(),
                table: WordTable::zeros(k, order)?,
            };
            let mut total = WordTable::zeros(k, order)?;
            for j in 1..=order {
                power = WordsOnly {
                    unit: S::zero(),
                    table: product_table(&power, alpha, Product::Star, k, order)?,
                };
                let c = S::from_rational(factorial(j).recip());
                total = total.zip_with(&power.table, |a, b| a.clone() + c.clone() * b.clone())?;
            }
            total
        }
    };
    Ok(Functional::character(words))
}

/// Inverse of [`hs_exp`] for each kind, by grade recursion on the defining
/// fixed point (half-shuffles) or on the exponential series (`⋆`).
pub fn hs_log<S: Scalar>(phi: &Functional<S>, kind: Product) -> Result<Functional<S>> {
    phi.require_character("logarithm")?;
    let (k, order) = (phi.k(), phi.order());
    let words = match kind {
        Product::Prec => solve_by_grade(k, order, false, |kappa, w| {
            let full = (1u64 << w.len()) - 1;
            Ok(phi.eval_word(w)? - pair_word(kappa, phi, w, |m| m & 1 == 1 && m != full)?)
        })?,
        Product::Succ => solve_by_grade(k, order, false, |beta, w| {
            Ok(phi.eval_word(w)? - pair_word(phi, beta, w, |m| m & 1 == 0 && m != 0)?)
        })?,
        Product::Star => star_log(phi)?,
    };
    Ok(Functional::infinitesimal(words))
}

/// Solves `Φ = sum_j ρ^{⋆j}/j!` for `ρ`. On a word of length `n` the powers
/// `j >= 2` only involve `ρ` on shorter words.
fn star_log<S: Scalar>(phi: &Functional<S>) -> Result<WordTable<S>> {
    let (k, order) = (phi.k(), phi.order());
    // powers[j - 1] holds ρ^{⋆j} in table order.
    let mut powers: Vec<Vec<S>> = vec![Vec::new(); order];
    let coeffs: Vec<S> = (0..=order)
        .map(|j| S::from_rational(factorial(j).recip()))
        .collect();
    for w in all_words(k, order) {
        let n = w.len();
        let mut higher = vec![S::zero(); order + 1];
        for j in 2..=n {
            let prev = Partial {
                k,
                unit: S::zero(),
                values: &powers[j - 2],
                character: false,
            };
            let rho = Partial {
                k,
                unit: S::zero(),
                values: &powers[0],
                character: false,
            };
            let full = (1u64 << n) - 1;
            higher[j] = pair_word(&prev, &rho, &w, |m| m != 0 && m != full)?;
        }
        let mut rho_w = phi.eval_word(&w)?;
        for j in 2..=n {
            rho_w = rho_w - coeffs[j].clone() * higher[j].clone();
        }
        debug_assert_eq!(powers[0].len(), word_index(k, &w));
        powers[0].push(rho_w);
        for (j, h) in higher.into_iter().enumerate().skip(2) {
            powers[j - 1].push(h);
        }
    }
    let mut it = std::mem::take(&mut powers[0]).into_iter();
    WordTable::from_fn(k, order, |_| it.next().expect("filled above"))
}

/// The shuffle adjoint `θ_Ψ(α) = Ψ⁻¹ ≻ α ≺ Ψ`.
pub fn adjoint<S: Scalar>(psi: &Functional<S>, alpha: &Functional<S>) -> Result<Functional<S>> {
    psi.require_character("adjoint action")?;
    alpha.require_infinitesimal("adjoint action")?;
    psi.check_shape(alpha)?;
    let (k, order) = (psi.k(), psi.order());
    let inv = character_inverse(psi)?;
    let left = WordsOnly {
        unit: S::zero(),
        table: product_table(&inv, alpha, Product::Succ, k, order)?,
    };
    Ok(Functional::infinitesimal(product_table(
        &left,
        psi,
        Product::Prec,
        k,
        order,
    )?))
}

/// The left pre-Lie product `α ▷ β = α ≻ β − β ≺ α`.
pub fn prelie<S: Scalar>(alpha: &Functional<S>, beta: &Functional<S>) -> Result<Functional<S>> {
    alpha.require_infinitesimal("pre-Lie product")?;
    beta.require_infinitesimal("pre-Lie product")?;
    alpha.check_shape(beta)?;
    let (k, order) = (alpha.k(), alpha.order());
    let a = product_table(alpha, beta, Product::Succ, k, order)?;
    let b = product_table(beta, alpha, Product::Prec, k, order)?;
    Ok(Functional::infinitesimal(a.zip_with(&b, |x, y| x.clone() - y.clone())?))
}

/// `[α, β] = α ⋆ β − β ⋆ α` for infinitesimal characters.
fn commutator<S: Scalar>(alpha: &Functional<S>, beta: &Functional<S>) -> Result<Functional<S>> {
    let (k, order) = (alpha.k(), alpha.order());
    let a = product_table(alpha, beta, Product::Star, k, order)?;
    let b = product_table(beta, alpha, Product::Star, k, order)?;
    Ok(Functional::infinitesimal(a.zip_with(&b, |x, y| x.clone() - y.clone())?))
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`, from
/// `sum_{j<=m} binom(m+1, j) B_j = 0`.
pub fn bernoulli(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = vec![Rational::one()];
    for m in 1..=n {
        let mut acc = Rational::zero();
        let mut binom = BigInt::one(); // binom(m + 1, j)
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        // binom now equals binom(m + 1, m).
        b.push(-acc / Rational::from_integer(binom));
    }
    b
}

/// `sum_{n < order} c_n L^n(x)`, where each `L` raises the lowest grade by
/// at least one, so the truncation is exact.
fn operator_series<S: Scalar>(
    x: &Functional<S>,
    coeff: impl Fn(usize) -> Rational,
    apply: impl Fn(&Functional<S>) -> Result<Functional<S>>,
) -> Result<Functional<S>> {
    let mut term = x.clone();
    let mut acc = x.scale(&coeff(0))?;
    for n in 1..x.order() {
        term = apply(&term)?;
        let c = coeff(n);
        if !c.is_zero() {
            acc = acc.add(&term.scale(&c)?)?;
        }
    }
    Ok(acc)
}

/// The pre-Lie Magnus expansion `Ω'(κ) = sum_n B_n/n! ℓ^n_{Ω'(κ)▷}(κ)`,
/// computed by fixed-point iteration; each pass fixes one more grade.
pub fn magnus<S: Scalar>(kappa: &Functional<S>) -> Result<Functional<S>> {
    kappa.require_infinitesimal("Magnus expansion")?;
    let b = bernoulli(kappa.order());
    let mut omega = kappa.clone();
    for _ in 1..kappa.order() {
        omega = operator_series(kappa, |n| &b[n] / factorial(n), |t| prelie(&omega, t))?;
    }
    Ok(omega)
}

/// Compositional inverse of [`magnus`]: `W(ρ) = sum_n 1/(n+1)! ℓ^n_{ρ▷}(ρ)`.
pub fn magnus_inverse<S: Scalar>(rho: &Functional<S>) -> Result<Functional<S>> {
    rho.require_infinitesimal("Magnus inverse")?;
    operator_series(rho, |n| factorial(n + 1).recip(), |t| prelie(rho, t))
}

/// `W_ρ(x) = sum_n (−1)^n/(n+1)! Ad_ρ^n(x)` with `Ad_ρ(x) = ρ ⋆ x − x ⋆ ρ`.
pub fn w_rho<S: Scalar>(rho: &Functional<S>, x: &Functional<S>) -> Result<Functional<S>> {
    rho.require_infinitesimal("W_rho")?;
    x.require_infinitesimal("W_rho")?;
    rho.check_shape(x)?;
    operator_series(
        x,
        |n| {
            let c = factorial(n + 1).recip();
            if n % 2 == 1 {
                -c
            } else {
                c
            }
        },
        |t| commutator(rho, t),
    )
}

/// Inverse of `x ↦ W_ρ(x)`: `sum_n (−1)^n B_n/n! Ad_ρ^n(y)`.
pub fn w_rho_inverse<S: Scalar>(rho: &Functional<S>, y: &Functional<S>) -> Result<Functional<S>> {
    rho.require_infinitesimal("W_rho inverse")?;
    y.require_infinitesimal("W_rho inverse")?;
    rho.check_shape(y)?;
    let b = bernoulli(y.order());
    operator_series(
        y,
        |n| {
            let c = &b[n] / factorial(n);
            if n % 2 == 1 {
                -c
            } else {
                c
            }
        },
        |t| commutator(rho, t),
    )
}

/// `Ψ₁ □⊢ Ψ₂ = E_≺(θ_{Ψ₂}(κ₁))` where `κ₁ = log_≺(Ψ₁)`.
pub fn free_subordination<S: Scalar>(
    psi1: &Functional<S>,
    psi2: &Functional<S>,
) -> Result<Functional<S>> {
    let kappa1 = hs_log(psi1, Product::Prec)?;
    hs_exp(&adjoint(psi2, &kappa1)?, Product::Prec)
}

/// `Ψ₁ □⊣ Ψ₂ = E_≻(θ_{Ψ₁⁻¹}(β₂))` where `β₂ = log_≻(Ψ₂)`.
pub fn boolean_subordination<S: Scalar>(
    psi1: &Functional<S>,
    psi2: &Functional<S>,
) -> Result<Functional<S>> {
    let beta2 = hs_log(psi2, Product::Succ)?;
    hs_exp(&adjoint(&character_inverse(psi1)?, &beta2)?, Product::Succ)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShuffleCumulants<S> {
    pub free: Cumulants<S>,
    pub boolean: Cumulants<S>,
    pub monotone: Cumulants<S>,
}

/// The three cumulant tables of a law as the half-shuffle and convolution
/// logarithms of its character.
pub fn cumulants_via_shuffle<S: Scalar>(law: &Moments<S>) -> Result<ShuffleCumulants<S>> {
    let phi = Functional::from_law(law);
    let table = |kind| hs_log(&phi, kind).map(|f| f.words().clone());
    Ok(ShuffleCumulants {
        free: Cumulants::new(CumulantFamily::Free, table(Product::Prec)?),
        boolean: Cumulants::new(CumulantFamily::Boolean, table(Product::Succ)?),
        monotone: Cumulants::new(CumulantFamily::Monotone, table(Product::Star)?),
    })
}
