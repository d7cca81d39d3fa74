//! Named verification suites run by `nccum verify`.
//!
//! Every property is checked exactly on seeded random laws. The bracketed
//! anchor on each report line is the identity being exercised.

use std::fmt::Write as _;

use nccum::convolve::{
    bp_inverse, bp_map, bp_map_shuffle, convolve_laws, eta_series_check, join_independent,
    law_power,
};
use nccum::cumulants::{cumulant_to_cumulant, cumulants_to_moments, moments_to_cumulants};
use nccum::laws::{
    all_words, body_table, random_law, random_rational, read_law, soul_table, write_law,
};
use nccum::partitions::{
    binomial, compare, count_above_irreducible, enumerate, mobius_to_top, monotone_labelings,
    nesting_stats, Order, DEFAULT_MAX_N,
};
use nccum::scalar::rat;
use nccum::shuffle::{
    adjoint, boolean_subordination, character_inverse, convolve, cumulants_via_shuffle,
    free_subordination, hs_exp, multi_bar_monomials, hs_log, magnus, magnus_inverse, prelie, w_rho, w_rho_inverse,
    Product,
};
use nccum::{
    CumulantFamily, Error, Functional, GScalar, Law, Moments, Partition, PartitionFamily,
    Rational, Scalar, Word, WordTable,
};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = nccum::Result<Option<String>>;
type GF = Functional<GScalar>;
type RF = Functional<Rational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    ShuffleAxioms,
    Roundtrips,
    Thm1Relations,
    BpSemigroup,
    SeriesIdentity,
    LemmaAdjoint,
    Magnus,
    Convolution,
    Partitions,
    Joins,
    All,
}

const NAMES: [(&str, Suite); 11] = [
    ("shuffle-axioms", Suite::ShuffleAxioms),
    ("roundtrips", Suite::Roundtrips),
    ("thm1-relations", Suite::Thm1Relations),
    ("bp-semigroup", Suite::BpSemigroup),
    ("series-identity", Suite::SeriesIdentity),
    ("lemma-adjoint", Suite::LemmaAdjoint),
    ("magnus", Suite::Magnus),
    ("convolution", Suite::Convolution),
    ("partitions", Suite::Partitions),
    ("joins", Suite::Joins),
    ("all", Suite::All),
];

pub fn parse_suite(s: &str) -> Result<Suite, String> {
    NAMES
        .iter()
        .find(|(n, _)| *n == s)
        .map(|&(_, suite)| suite)
        .ok_or_else(|| {
            let names: Vec<&str> = NAMES.iter().map(|(n, _)| *n).collect();
            format!("unknown suite {s:?}; expected one of {}", names.join(", "))
        })
}

fn name_of(suite: Suite) -> &'static str {
    NAMES.iter().find(|(_, s)| *s == suite).expect("listed").0
}

struct Line {
    passed: bool,
    name: String,
    anchor: &'static str,
    detail: String,
}

pub struct Report {
    lines: Vec<Line>,
}

impl Report {
    pub fn failed(&self) -> usize {
        self.lines.iter().filter(|l| !l.passed).count()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let tag = if l.passed { "PASS" } else { "FAIL" };
            let _ = write!(out, "{tag} {} [{}]", l.name, l.anchor);
            if !l.passed {
                let _ = write!(out, " {}", l.detail);
            }
            out.push('\n');
        }
        let failed = self.failed();
        let _ = writeln!(
            out,
            "summary: {} passed, {failed} failed",
            self.lines.len() - failed
        );
        out
    }
}

struct Cx {
    order: usize,
    seed: u64,
    laws: Vec<Law>,
    suite: &'static str,
    lines: Vec<Line>,
}

impl Cx {
    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt)
    }

    fn check(&mut self, property: &str, anchor: &'static str, outcome: Outcome) {
        let (passed, detail) = match outcome {
            Ok(None) => (true, String::new()),
            Ok(Some(msg)) => (false, msg),
            Err(e) => (false, format!("error: {e}")),
        };
        self.lines.push(Line {
            passed,
            name: format!("{}.{property}", self.suite),
            anchor,
            detail,
        });
    }
}

fn each_law(laws: &[Law], mut f: impl FnMut(&Law) -> Outcome) -> Outcome {
    for (i, law) in laws.iter().enumerate() {
        if let Some(m) = f(law)? {
            return Ok(Some(format!("law {i}: {m}")));
        }
    }
    Ok(None)
}

fn diff<S: Scalar>(a: &WordTable<S>, b: &WordTable<S>) -> Option<String> {
    if a.k() != b.k() || a.order() != b.order() {
        return Some("shapes differ".into());
    }
    a.iter()
        .zip(b.values())
        .find(|((_, x), y)| x != y)
        .map(|((w, _), _)| format!("first difference at word [{w}]"))
}

fn same(cond: bool, msg: &str) -> Option<String> {
    (!cond).then(|| msg.to_string())
}

pub fn run(suite: Suite, order: usize, seed: u64, count: usize) -> nccum::Result<Report> {
    if order == 0 || order > DEFAULT_MAX_N {
        return Err(Error::SizeLimit { n: order, max: DEFAULT_MAX_N });
    }
    if count == 0 {
        return Err(Error::Domain("at least one law is needed".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let laws = (0..count)
        .map(|i| random_law(1 + i % 2, order, &mut rng))
        .collect::<nccum::Result<Vec<_>>>()?;
    let mut cx = Cx {
        order,
        seed,
        laws,
        suite: "",
        lines: Vec::new(),
    };
    let selected: Vec<Suite> = match suite {
        Suite::All => NAMES.iter().map(|&(_, s)| s).filter(|&s| s != Suite::All).collect(),
        s => vec![s],
    };
    for s in selected {
        cx.suite = name_of(s);
        match s {
            Suite::ShuffleAxioms => shuffle_axioms(&mut cx),
            Suite::Roundtrips => roundtrips(&mut cx),
            Suite::Thm1Relations => cumulant_relations(&mut cx),
            Suite::BpSemigroup => bp_semigroup(&mut cx),
            Suite::SeriesIdentity => series_identity(&mut cx),
            Suite::LemmaAdjoint => lemma_adjoint(&mut cx),
            Suite::Magnus => magnus_suite(&mut cx),
            Suite::Convolution => convolution(&mut cx),
            Suite::Partitions => partitions(&mut cx),
            Suite::Joins => joins(&mut cx),
            Suite::All => unreachable!(),
        }
    }
    Ok(Report { lines: cx.lines })
}

fn random_gscalar(rng: &mut ChaCha8Rng) -> GScalar {
    GScalar::new(random_rational(rng), random_rational(rng))
}

fn infinitesimal(rng: &mut ChaCha8Rng, k: usize, order: usize) -> nccum::Result<GF> {
    Ok(GF::infinitesimal(WordTable::from_fn(k, order, |_| random_gscalar(rng))?))
}

fn shuffle_axioms(cx: &mut Cx) {
    use Product::*;
    // Generic functionals carry values on every bar monomial, which grows
    // quickly with the order.
    let small = cx.order.min(4);
    let mut rng = cx.rng(1);
    let generic = |rng: &mut ChaCha8Rng| GF::random_generic(2, small, || random_gscalar(rng));
    let triples: nccum::Result<Vec<(GF, GF, GF)>> = (0..2)
        .map(|_| Ok((generic(&mut rng)?, generic(&mut rng)?, generic(&mut rng)?)))
        .collect();
    let cv = |a: &GF, b: &GF, p| convolve(a, b, p);
    // Compares values on every word and bar monomial; the unit only when asked.
    let agree = |a: &GF, b: &GF, unit: bool| -> nccum::Result<bool> {
        if unit && a.unit_value() != b.unit_value() {
            return Ok(false);
        }
        for m in multi_bar_monomials(2, small) {
            if a.eval_bars(&m)? != b.eval_bars(&m)? {
                return Ok(false);
            }
        }
        Ok(a.words() == b.words())
    };
    let identity = |unit: bool,
                    lhs: &dyn Fn(&GF, &GF, &GF) -> nccum::Result<GF>,
                    rhs: &dyn Fn(&GF, &GF, &GF) -> nccum::Result<GF>|
     -> Outcome {
        for (f, g, h) in triples.as_ref().map_err(Clone::clone)? {
            if !agree(&lhs(f, g, h)?, &rhs(f, g, h)?, unit)? {
                return Ok(Some("identity fails on generic functionals".into()));
            }
        }
        Ok(None)
    };
    let axiom = |l: &dyn Fn(&GF, &GF, &GF) -> nccum::Result<GF>,
                 r: &dyn Fn(&GF, &GF, &GF) -> nccum::Result<GF>| identity(true, l, r);
    cx.check(
        "A1",
        "(f≺g)≺h = f≺(g⋆h)",
        axiom(&|f, g, h| cv(&cv(f, g, Prec)?, h, Prec), &|f, g, h| cv(f, &cv(g, h, Star)?, Prec)),
    );
    cx.check(
        "A2",
        "(f≻g)≺h = f≻(g≺h)",
        axiom(&|f, g, h| cv(&cv(f, g, Succ)?, h, Prec), &|f, g, h| cv(f, &cv(g, h, Prec)?, Succ)),
    );
    cx.check(
        "A3",
        "f≻(g≻h) = (f⋆g)≻h",
        axiom(&|f, g, h| cv(f, &cv(g, h, Succ)?, Succ), &|f, g, h| cv(&cv(f, g, Star)?, h, Succ)),
    );
    cx.check(
        "star-split",
        "f⋆g = f≺g + f≻g off the unit",
        identity(
            false,
            &|f, g, _| cv(f, g, Star),
            &|f, g, _| cv(f, g, Prec)?.add(&cv(f, g, Succ)?),
        ),
    );

    let (order, k) = (cx.order, 2);
    let mut rng = cx.rng(2);
    let abc: nccum::Result<Vec<GF>> = (0..3).map(|_| infinitesimal(&mut rng, k, order)).collect();
    let outcome = |f: &dyn Fn(&[GF]) -> Outcome| -> Outcome { f(abc.as_ref().map_err(Clone::clone)?) };
    cx.check(
        "left-prelie",
        "(a▷b)▷c − a▷(b▷c) = (b▷a)▷c − b▷(a▷c)",
        outcome(&|v| {
            let (a, b, c) = (&v[0], &v[1], &v[2]);
            let lhs = prelie(&prelie(a, b)?, c)?.sub(&prelie(a, &prelie(b, c)?)?)?;
            let rhs = prelie(&prelie(b, a)?, c)?.sub(&prelie(b, &prelie(a, c)?)?)?;
            Ok(diff(lhs.words(), rhs.words()))
        }),
    );
    cx.check(
        "lie-admissible",
        "a▷b − b▷a = a⋆b − b⋆a",
        outcome(&|v| {
            let (a, b) = (&v[0], &v[1]);
            let lhs = prelie(a, b)?.sub(&prelie(b, a)?)?;
            let rhs = cv(a, b, Star)?.sub(&cv(b, a, Star)?)?;
            Ok(diff(lhs.words(), rhs.words()))
        }),
    );
    cx.check(
        "inverse-prec",
        "E≺(a)⁻¹ = E≻(−a)",
        outcome(&|v| {
            let lhs = character_inverse(&hs_exp(&v[0], Prec)?)?;
            Ok(diff(lhs.words(), hs_exp(&v[0].neg()?, Succ)?.words()))
        }),
    );
    cx.check(
        "inverse-succ",
        "E≻(a)⁻¹ = E≺(−a)",
        outcome(&|v| {
            let lhs = character_inverse(&hs_exp(&v[0], Succ)?)?;
            Ok(diff(lhs.words(), hs_exp(&v[0].neg()?, Prec)?.words()))
        }),
    );
    let laws = cx.laws.clone();
    cx.check(
        "fixed-points",
        "κ≺Φ = Φ≻β",
        each_law(&laws, |law| {
            let phi = GF::from_law(law);
            let l = cv(&hs_log(&phi, Prec)?, &phi, Prec)?;
            let r = cv(&phi, &hs_log(&phi, Succ)?, Succ)?;
            Ok(diff(l.words(), r.words()))
        }),
    );
    cx.check(
        "free-to-boolean",
        "β = θ_Φ(κ)",
        each_law(&laws, |law| {
            let phi = GF::from_law(law);
            let beta = adjoint(&phi, &hs_log(&phi, Prec)?)?;
            Ok(diff(beta.words(), hs_log(&phi, Succ)?.words()))
        }),
    );
    let mut rng = cx.rng(3);
    let outcome = (|| {
        let phi = GF::from_law(&random_law(k, order, &mut rng)?);
        let psi = GF::from_law(&random_law(k, order, &mut rng)?);
        let alpha = infinitesimal(&mut rng, k, order)?;
        let lhs = adjoint(&psi, &adjoint(&phi, &alpha)?)?;
        let rhs = adjoint(&cv(&phi, &psi, Star)?, &alpha)?;
        Ok(diff(lhs.words(), rhs.words()))
    })();
    cx.check("theta-composition", "θ_Ψ(θ_Φ(α)) = θ_{Φ⋆Ψ}(α)", outcome);
}

fn roundtrips(cx: &mut Cx) {
    let laws = cx.laws.clone();
    for family in CumulantFamily::ALL {
        let anchor = match family {
            CumulantFamily::Free => "φ̃ = Σ_{NC} r̃_π, inverted by Möbius",
            CumulantFamily::Boolean => "φ̃ = Σ_{I} b̃_π, inverted by (−1)^{|π|−1}",
            CumulantFamily::Monotone => "φ̃ = Σ_{NC} h̃_π/τ(π)!, solved triangularly",
        };
        cx.check(
            &format!("moments-{family}"),
            anchor,
            each_law(&laws, |law| {
                let back = cumulants_to_moments(&moments_to_cumulants(law, family)?)?;
                Ok(diff(back.table(), law.table()))
            }),
        );
    }
    let pairs = [
        (CumulantFamily::Free, CumulantFamily::Boolean, "b̃ = Σ_{NC_irr} r̃_π"),
        (CumulantFamily::Boolean, CumulantFamily::Free, "r̃ = Σ_{NC_irr} (−1)^{|π|−1} b̃_π"),
        (CumulantFamily::Monotone, CumulantFamily::Free, "r̃ = Σ_{NC_irr} (−1)^{|π|−1} h̃_π/τ(π)!"),
        (CumulantFamily::Monotone, CumulantFamily::Boolean, "b̃ = Σ_{NC_irr} h̃_π/τ(π)!"),
        (CumulantFamily::Free, CumulantFamily::Monotone, "r̃ → φ̃ → h̃"),
    ];
    for (from, to, anchor) in pairs {
        cx.check(
            &format!("{from}-to-{to}"),
            anchor,
            each_law(&laws, |law| {
                let src = moments_to_cumulants(law, from)?;
                let direct = moments_to_cumulants(law, to)?;
                let converted = cumulant_to_cumulant(&src, to)?;
                let back = cumulant_to_cumulant(&converted, from)?;
                Ok(diff(converted.table(), direct.table()).or_else(|| diff(back.table(), src.table())))
            }),
        );
    }
    cx.check(
        "engines",
        "κ = log≺Φ, β = log≻Φ, ρ = log⋆Φ equal the partition-sum cumulants",
        each_law(&laws, |law| {
            let s = cumulants_via_shuffle(law)?;
            for (family, t) in [
                (CumulantFamily::Free, &s.free),
                (CumulantFamily::Boolean, &s.boolean),
                (CumulantFamily::Monotone, &s.monotone),
            ] {
                if let Some(d) = diff(t.table(), moments_to_cumulants(law, family)?.table()) {
                    return Ok(Some(format!("{family}: {d}")));
                }
            }
            Ok(None)
        }),
    );
    for (kind, anchor) in [
        (Product::Prec, "log≺(E≺(α)) = α"),
        (Product::Succ, "log≻(E≻(α)) = α"),
        (Product::Star, "log⋆(exp⋆(α)) = α"),
    ] {
        let mut rng = cx.rng(10);
        let order = cx.order;
        let outcome = (|| {
            let alpha = infinitesimal(&mut rng, 2, order)?;
            Ok(diff(hs_log(&hs_exp(&alpha, kind)?, kind)?.words(), alpha.words()))
        })();
        cx.check(&format!("exp-log-{kind:?}").to_lowercase(), anchor, outcome);
    }
    cx.check(
        "text-format",
        "read(write(μ)) = μ",
        each_law(&laws, |law| {
            let text = write_law(law);
            let back = read_law(&text)?;
            Ok(same(&back == law && write_law(&back) == text, "text round trip differs"))
        }),
    );
}

/// `sum_{π ∈ NC_irr(n)} c(π) f̃_π(w)` for every word. With Grassmann values
/// the soul is the derivation sum `sum_V f'(w_V) prod_{W≠V} f(w_W)`.
fn irreducible_sum(
    f: &WordTable<GScalar>,
    coeff: impl Fn(&Partition) -> nccum::Result<Rational>,
) -> nccum::Result<WordTable<GScalar>> {
    WordTable::try_from_fn(f.k(), f.order(), |w| {
        let mut acc = GScalar::zero();
        for pi in enumerate(w.len(), PartitionFamily::IrreducibleNc)?.iter() {
            let prod = pi
                .blocks()
                .iter()
                .fold(GScalar::one(), |a, b| a * f[&w.restrict(b)].clone());
            acc = acc + prod.scale(&coeff(pi)?);
        }
        Ok(acc)
    })
}

fn sign(pi: &Partition) -> Rational {
    if pi.block_count() % 2 == 1 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn inv_tau(pi: &Partition) -> nccum::Result<Rational> {
    let tf = nesting_stats(pi)?.tree_factorial;
    Ok(Rational::new(1.into(), tf.into()))
}

fn cumulant_relations(cx: &mut Cx) {
    let laws = cx.laws.clone();
    type Coeff = fn(&Partition) -> nccum::Result<Rational>;
    let relations: [(&str, &'static str, CumulantFamily, CumulantFamily, Coeff); 4] = [
        ("boolean-from-free", "b' = Σ_{NC_irr} ∂r_π", CumulantFamily::Free, CumulantFamily::Boolean, |_| Ok(Rational::one())),
        ("free-from-boolean", "r' = Σ_{NC_irr} (−1)^{|π|−1} ∂b_π", CumulantFamily::Boolean, CumulantFamily::Free, |p| Ok(sign(p))),
        ("boolean-from-monotone", "b' = Σ_{NC_irr} ∂h_π/τ(π)!", CumulantFamily::Monotone, CumulantFamily::Boolean, inv_tau),
        ("free-from-monotone", "r' = Σ_{NC_irr} (−1)^{|π|−1} ∂h_π/τ(π)!", CumulantFamily::Monotone, CumulantFamily::Free, |p| Ok(sign(p) * inv_tau(p)?)),
    ];
    for (name, anchor, from, to, coeff) in relations {
        cx.check(
            name,
            anchor,
            each_law(&laws, |law| {
                let src = moments_to_cumulants(law, from)?;
                let target = moments_to_cumulants(law, to)?;
                let sum = irreducible_sum(src.table(), coeff)?;
                Ok(diff(&soul_table(&sum), &soul_table(target.table()))
                    .or_else(|| diff(&body_table(&sum), &body_table(target.table()))))
            }),
        );
    }
}

fn bp_semigroup(cx: &mut Cx) {
    let laws = cx.laws.clone();
    let ts = [rat(1, 2), rat(1, 1), rat(2, 1)];
    cx.check(
        "semigroup",
        "B_s∘B_t = B_{s+t}",
        each_law(&laws, |law| {
            for s in &ts {
                let bs = bp_map(law, s)?;
                for t in &ts {
                    if bp_map(&bs, t)? != bp_map(law, &(s + t))? {
                        return Ok(Some(format!("s = {s}, t = {t}")));
                    }
                }
            }
            Ok(None)
        }),
    );
    cx.check(
        "free-equals-boolean",
        "r̃(B(μ)) = b̃(μ)",
        each_law(&laws, |law| {
            let r = moments_to_cumulants(&bp_map(law, &Rational::one())?, CumulantFamily::Free)?;
            Ok(diff(r.table(), moments_to_cumulants(law, CumulantFamily::Boolean)?.table()))
        }),
    );
    cx.check(
        "shuffle-form",
        "(μ^{⊞1+t})^{⊎1/(1+t)} = E≺(θ_{E≺(tκ)}(κ))",
        each_law(&laws, |law| {
            for t in &ts {
                if let Some(d) = diff(bp_map(law, t)?.table(), bp_map_shuffle(law, t)?.table()) {
                    return Ok(Some(format!("t = {t}: {d}")));
                }
            }
            Ok(None)
        }),
    );
    cx.check(
        "inverse",
        "E≻(log≺(B(μ))) = μ",
        each_law(&laws, |law| {
            Ok(diff(bp_inverse(&bp_map(law, &Rational::one())?)?.table(), law.table()))
        }),
    );
    cx.check(
        "identity-at-zero",
        "B_0 = id",
        each_law(&laws, |law| Ok(diff(bp_map(law, &Rational::zero())?.table(), law.table()))),
    );
}

fn series_identity(cx: &mut Cx) {
    let laws = cx.laws.clone();
    let mut reports = Vec::new();
    let outcome = each_law(&laws, |law| {
        reports.push(eta_series_check(law, law.order())?);
        Ok(None)
    });
    let pick = |f: fn(&nccum::convolve::SeriesReport) -> &Option<Word>| -> Outcome {
        outcome.clone()?;
        Ok(reports
            .iter()
            .enumerate()
            .find_map(|(i, r)| f(r).as_ref().map(|w| format!("law {i}: first mismatch at [{w}]"))))
    };
    let sandwich = pick(|r| &r.sandwich);
    let recursive = pick(|r| &r.recursive);
    cx.check("sandwich", "M' = (1+M)B'(1+M)", sandwich);
    cx.check("recursive", "M' = M'B + (1+M)B'", recursive);
    cx.check(
        "soulless",
        "φ' = 0 ⇒ b' = 0",
        each_law(&laws, |law| {
            let flat = Moments::new(law.table().map(|v| GScalar::real(v.body.clone())));
            let b = moments_to_cumulants(&flat, CumulantFamily::Boolean)?;
            Ok(same(
                b.table().values().iter().all(|v| v.soul.is_zero())
                    && eta_series_check(&flat, flat.order())?.passed(),
                "nonzero infinitesimal Boolean cumulant",
            ))
        }),
    );
}

fn lemma_adjoint(cx: &mut Cx) {
    let laws = cx.laws.clone();
    let mut rng = cx.rng(20);
    let alphas: Vec<RF> = laws
        .iter()
        .map(|l| RF::infinitesimal(WordTable::from_fn(l.k(), l.order(), |_| random_rational(&mut rng)).expect("valid shape")))
        .collect();
    let mut idx = 0;
    cx.check(
        "theta-expansion",
        "θ_Φ(α)(w) = Σ_{NC_irr} α(V₁) Π r(W)",
        each_law(&laws, |law| {
            let alpha = &alphas[idx];
            idx += 1;
            adjoint_expansion(law, alpha, false)
        }),
    );
    let mut idx = 0;
    cx.check(
        "theta-inverse-expansion",
        "θ_{Φ⁻¹}(α)(w) = Σ_{NC_irr} (−1)^{|π|−1} α(V₁) Π b(W)",
        each_law(&laws, |law| {
            let alpha = &alphas[idx];
            idx += 1;
            adjoint_expansion(law, alpha, true)
        }),
    );
    let derivative = |which: usize| -> Outcome {
        each_law(&laws, |law| {
            let phi_t = GF::from_law(law);
            let (phi, dphi) = (phi_t.body()?, phi_t.soul()?);
            let soul_of = |kind| -> nccum::Result<RF> {
                Ok(RF::infinitesimal(hs_log(&phi_t, kind)?.soul()?.words().clone()))
            };
            let star = |a: &RF, b: &RF| convolve(a, b, Product::Star);
            let rhs = match which {
                0 => star(&phi, &adjoint(&phi, &soul_of(Product::Prec)?)?)?,
                1 => star(&adjoint(&character_inverse(&phi)?, &soul_of(Product::Succ)?)?, &phi)?,
                _ => {
                    let rho = hs_log(&phi, Product::Star)?;
                    star(&phi, &w_rho(&rho, &soul_of(Product::Star)?)?)?
                }
            };
            Ok(diff(rhs.words(), dphi.words()))
        })
    };
    cx.check("derivative-free", "Φ' = Φ⋆θ_Φ(κ')", derivative(0));
    cx.check("derivative-boolean", "Φ' = θ_{Φ⁻¹}(β')⋆Φ", derivative(1));
    cx.check("derivative-monotone", "Φ' = Φ⋆W_ρ(ρ')", derivative(2));
    let mut idx = 0;
    cx.check(
        "w-rho-inverse",
        "W_ρ⁻¹(W_ρ(x)) = x",
        each_law(&laws, |law| {
            let rho = hs_log(&GF::from_law(law).body()?, Product::Star)?;
            let x = &alphas[idx];
            idx += 1;
            Ok(diff(w_rho_inverse(&rho, &w_rho(&rho, x)?)?.words(), x.words()))
        }),
    );
}

fn adjoint_expansion(law: &Law, alpha: &RF, inverse: bool) -> Outcome {
    let body = Moments::new(body_table(law.table()));
    let phi = RF::from_law(&body);
    let (psi, family) = if inverse {
        (character_inverse(&phi)?, CumulantFamily::Boolean)
    } else {
        (phi, CumulantFamily::Free)
    };
    let theta = adjoint(&psi, alpha)?;
    let c = moments_to_cumulants(&body, family)?;
    for w in all_words(law.k(), law.order()) {
        let mut acc = Rational::zero();
        for pi in enumerate(w.len(), PartitionFamily::IrreducibleNc)?.iter() {
            let blocks = pi.blocks();
            let mut term = alpha.eval_word(&w.restrict(&blocks[0]))?;
            for b in &blocks[1..] {
                term *= c.get(&w.restrict(b))?;
            }
            acc += if inverse { sign(pi) * term } else { term };
        }
        if acc != theta.eval_word(&w)? {
            return Ok(Some(format!("mismatch at word [{w}]")));
        }
    }
    Ok(None)
}

fn magnus_suite(cx: &mut Cx) {
    let laws = cx.laws.clone();
    let parts = |law: &Law| -> nccum::Result<(GF, GF, GF, GF)> {
        let phi = GF::from_law(law);
        let kappa = hs_log(&phi, Product::Prec)?;
        let beta = hs_log(&phi, Product::Succ)?;
        let rho = hs_log(&phi, Product::Star)?;
        Ok((phi, kappa, beta, rho))
    };
    cx.check(
        "free",
        "Ω'(κ) = ρ",
        each_law(&laws, |law| {
            let (_, kappa, _, rho) = parts(law)?;
            Ok(diff(magnus(&kappa)?.words(), rho.words()))
        }),
    );
    cx.check(
        "boolean",
        "−Ω'(−β) = ρ",
        each_law(&laws, |law| {
            let (_, _, beta, rho) = parts(law)?;
            Ok(diff(magnus(&beta.neg()?)?.neg()?.words(), rho.words()))
        }),
    );
    cx.check(
        "exponential",
        "exp⋆(Ω'(κ)) = E≺(κ)",
        each_law(&laws, |law| {
            let (phi, kappa, _, _) = parts(law)?;
            Ok(diff(hs_exp(&magnus(&kappa)?, Product::Star)?.words(), phi.words()))
        }),
    );
    cx.check(
        "inverse",
        "W(Ω'(κ)) = κ with W(ρ) = Σ ℓ^n_{ρ▷}(ρ)/(n+1)!",
        each_law(&laws, |law| {
            let (_, kappa, _, rho) = parts(law)?;
            Ok(diff(magnus_inverse(&rho)?.words(), kappa.words()))
        }),
    );
}

fn convolution(cx: &mut Cx) {
    let mut rng = cx.rng(30);
    let order = cx.order;
    let triple: nccum::Result<Vec<Law>> = (0..3).map(|_| random_law(2, order, &mut rng)).collect();
    for kind in [CumulantFamily::Free, CumulantFamily::Boolean] {
        let laws = triple.clone();
        let outcome = (|| {
            let v = laws?;
            let c = |a: &Law, b: &Law| convolve_laws(a, b, kind);
            let comm = c(&v[0], &v[1])? == c(&v[1], &v[0])?;
            let assoc = c(&c(&v[0], &v[1])?, &v[2])? == c(&v[0], &c(&v[1], &v[2])?)?;
            let delta = c(&v[0], &Moments::delta(2, order)?)? == v[0];
            let (s, t) = (rat(1, 3), rat(3, 2));
            let pow = |x: &Rational| law_power(&v[0], x, kind, false);
            let additive = c(&pow(&s)?, &pow(&t)?)? == pow(&(&s + &t))?;
            Ok(same(comm, "not commutative")
                .or(same(assoc, "not associative"))
                .or(same(delta, "δ is not neutral"))
                .or(same(additive, "powers do not add")))
        })();
        let anchor = if kind == CumulantFamily::Free {
            "μ⊞ν = ν⊞μ, associative, μ^{⊞s}⊞μ^{⊞t} = μ^{⊞(s+t)}"
        } else {
            "μ⊎ν = ν⊎μ, associative, μ^{⊎s}⊎μ^{⊎t} = μ^{⊎(s+t)}"
        };
        cx.check(&format!("{kind}-laws"), anchor, outcome);
    }
    let laws = triple;
    let outcome = (|| {
        let v = laws?;
        let (p1, p2) = (GF::from_law(&v[0]), GF::from_law(&v[1]));
        let sum = convolve_laws(&v[0], &v[1], CumulantFamily::Free)?;
        let sub = free_subordination(&p2, &p1)?;
        Ok(diff(convolve(&p1, &sub, Product::Star)?.words(), sum.table()))
    })();
    cx.check("free-subordination", "Ψ₁⊞Ψ₂ = Ψ₁⋆(Ψ₂□⊢Ψ₁)", outcome);
    let mut rng = cx.rng(31);
    let outcome = (|| {
        let (a, b) = (random_law(2, order, &mut rng)?, random_law(2, order, &mut rng)?);
        let (p1, p2) = (GF::from_law(&a), GF::from_law(&b));
        let sum = convolve_laws(&a, &b, CumulantFamily::Boolean)?;
        let sub = boolean_subordination(&p2, &p1)?;
        Ok(diff(convolve(&sub, &p2, Product::Star)?.words(), sum.table()))
    })();
    cx.check("boolean-subordination", "Ψ₁⊎Ψ₂ = (Ψ₂□⊣Ψ₁)⋆Ψ₂", outcome);
}

fn partitions(cx: &mut Cx) {
    let catalan = |n: usize| binomial(2 * n, n) / BigUint::from(n + 1);
    cx.check(
        "noncrossing-count",
        "|NC(n)| = Cat(n)",
        (|| {
            for n in 1..=8 {
                if BigUint::from(enumerate(n, PartitionFamily::NonCrossing)?.len()) != catalan(n) {
                    return Ok(Some(format!("n = {n}")));
                }
                if enumerate(n, PartitionFamily::Interval)?.len() != 1 << (n - 1) {
                    return Ok(Some(format!("|I({n})| ≠ 2^{}", n - 1)));
                }
            }
            Ok(None)
        })(),
    );
    cx.check(
        "mobius",
        "Möb(0_n, 1_n) = (−1)^{n−1} Cat(n−1)",
        (|| {
            for n in 1..=7 {
                let m = mobius_to_top(&Partition::zero(n))?;
                let expect = BigUint::from(m.unsigned_abs());
                if expect != catalan(n - 1) || (m < 0) != (n % 2 == 0) {
                    return Ok(Some(format!("n = {n}: {m}")));
                }
            }
            Ok(None)
        })(),
    );
    cx.check(
        "monotone-count",
        "m(π) = |π|!/τ(π)!",
        (|| {
            for n in 1..=6 {
                for pi in enumerate(n, PartitionFamily::NonCrossing)?.iter() {
                    let s = nesting_stats(pi)?;
                    let fact: BigUint = (1..=pi.block_count()).map(BigUint::from).product();
                    let brute = BigUint::from(monotone_labelings(pi)?.len());
                    if brute != s.monotone_count || &s.tree_factorial * &brute != fact {
                        return Ok(Some(format!("{pi}")));
                    }
                }
            }
            Ok(None)
        })(),
    );
    cx.check(
        "minmax-count",
        "#{π ∈ NC(n) : π ≫ σ, |π| = p} = C(|σ|−1, p−1)",
        (|| {
            for n in 1..=6 {
                let nc = enumerate(n, PartitionFamily::NonCrossing)?;
                for sigma in enumerate(n, PartitionFamily::IrreducibleNc)?.iter() {
                    for p in 1..=sigma.block_count() {
                        let mut brute = 0usize;
                        for pi in nc.iter().filter(|pi| pi.block_count() == p) {
                            if compare(sigma, pi, Order::MinMax)? {
                                brute += 1;
                            }
                        }
                        let formula = binomial(sigma.block_count() - 1, p - 1);
                        if BigUint::from(brute) != formula || count_above_irreducible(sigma, p)? != formula {
                            return Ok(Some(format!("σ = {sigma}, p = {p}")));
                        }
                    }
                }
            }
            Ok(None)
        })(),
    );
}

/// Maximal runs of equal letters as (letter, length).
fn runs(w: &Word) -> Vec<(u8, usize)> {
    let mut out: Vec<(u8, usize)> = Vec::new();
    for &l in w.letters() {
        match out.last_mut() {
            Some((x, n)) if *x == l => *n += 1,
            _ => out.push((l, 1)),
        }
    }
    out
}

fn joins(cx: &mut Cx) {
    let mut rng = cx.rng(40);
    let order = cx.order;
    let pair = (|| Ok::<_, Error>((random_law(1, order, &mut rng)?, random_law(1, order, &mut rng)?)))();
    let pure = |mu: &Law, nu: &Law, l: u8, p: usize| {
        let src = if l == 1 { mu } else { nu };
        src.moment(&Word::power(1, p))
    };
    cx.check(
        "boolean-factorisation",
        "φ̃(a₁⋯aₙ) = φ̃(a₁)⋯φ̃(aₙ) for alternating aᵢ",
        (|| {
            let (mu, nu) = pair.clone()?;
            let joint = join_independent(&mu, &nu, CumulantFamily::Boolean)?;
            for w in all_words(2, order) {
                let mut expect = GScalar::one();
                for (l, p) in runs(&w) {
                    expect = expect * pure(&mu, &nu, l, p)?;
                }
                if joint.moment(&w)? != expect {
                    return Ok(Some(format!("word [{w}]")));
                }
            }
            Ok(None)
        })(),
    );
    for kind in [CumulantFamily::Boolean, CumulantFamily::Free] {
        cx.check(
            &format!("{kind}-mixed-cumulants"),
            "mixed G-valued cumulants vanish",
            (|| {
                let (mu, nu) = pair.clone()?;
                let joint = join_independent(&mu, &nu, kind)?;
                let c = moments_to_cumulants(&joint, kind)?;
                for w in all_words(2, order) {
                    let rs = runs(&w);
                    let ok = if rs.len() > 1 {
                        c.get(&w)?.is_zero()
                    } else {
                        joint.moment(&w)? == pure(&mu, &nu, rs[0].0, rs[0].1)?
                    };
                    if !ok {
                        return Ok(Some(format!("word [{w}]")));
                    }
                }
                Ok(None)
            })(),
        );
    }
    cx.check(
        "free-centered",
        "φ(a₁⋯aₙ) = 0 for centered alternating aᵢ",
        (|| {
            let (mu, nu) = pair.clone()?;
            let joint = join_independent(&mu, &nu, CumulantFamily::Free)?;
            for w in all_words(2, order) {
                let rs = runs(&w);
                let mut total = Rational::zero();
                for mask in 0..(1u32 << rs.len()) {
                    let mut letters = Vec::new();
                    let mut coef = Rational::one();
                    for (j, &(l, p)) in rs.iter().enumerate() {
                        if mask >> j & 1 == 1 {
                            letters.extend(std::iter::repeat_n(l, p));
                        } else {
                            coef *= -pure(&mu, &nu, l, p)?.body;
                        }
                    }
                    let m = if letters.is_empty() {
                        Rational::one()
                    } else {
                        joint.moment(&Word::new(letters))?.body
                    };
                    total += coef * m;
                }
                if !total.is_zero() {
                    return Ok(Some(format!("word [{w}]")));
                }
            }
            Ok(None)
        })(),
    );
}
