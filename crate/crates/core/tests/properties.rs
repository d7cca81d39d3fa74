use nccum::convolve::{bp_map, convolve_laws, eta_series_check, law_power};
use nccum::cumulants::{cumulant_to_cumulant, cumulants_to_moments, moments_to_cumulants};
use nccum::laws::{read_law, write_law};
use nccum::partitions::{enumerate, mobius_to_top, nesting_stats};
use nccum::shuffle::{adjoint, cumulants_via_shuffle, hs_exp, hs_log, magnus, Product};
use nccum::{CumulantFamily, Functional, GScalar, Law, Moments, PartitionFamily, Rational, WordTable};
use num_bigint::BigInt;
use proptest::prelude::*;

fn q(p: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(d))
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, d)| q(p, d))
}

fn grassmann() -> impl Strategy<Value = GScalar> {
    (small_rational(), small_rational()).prop_map(|(b, s)| GScalar::new(b, s))
}

/// A law with arbitrary small-rational moments on `k` letters up to `order`.
fn law(k: usize, order: usize) -> impl Strategy<Value = Law> {
    let len: usize = (1..=order).map(|n| k.pow(n as u32)).sum();
    prop::collection::vec(grassmann(), len).prop_map(move |vals| {
        let mut it = vals.into_iter();
        Moments::from_fn(k, order, |_| it.next().unwrap()).unwrap()
    })
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn family() -> impl Strategy<Value = CumulantFamily> {
    prop::sample::select(CumulantFamily::ALL.to_vec())
}

fn additive() -> impl Strategy<Value = CumulantFamily> {
    prop::sample::select(vec![CumulantFamily::Free, CumulantFamily::Boolean])
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn grassmann_ring(a in grassmann(), b in grassmann(), c in grassmann()) {
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c);
        prop_assert_eq!(a.clone() * b.clone(), b * a.clone());
        let h = GScalar::hbar();
        prop_assert_eq!(h.clone() * h, GScalar::real(q(0, 1)));
        if let Ok(inv) = a.inv() {
            prop_assert_eq!(a * inv, GScalar::real(q(1, 1)));
        }
    }

    #[test]
    fn moment_cumulant_round_trip(mu in law(2, 3), f in family()) {
        let c = moments_to_cumulants(&mu, f).unwrap();
        prop_assert_eq!(cumulants_to_moments(&c).unwrap(), mu);
    }

    #[test]
    fn cumulant_conversions_commute(mu in law(1, 5), from in family(), to in family()) {
        prop_assume!(from != to);
        let src = moments_to_cumulants(&mu, from).unwrap();
        let direct = moments_to_cumulants(&mu, to).unwrap();
        let converted = cumulant_to_cumulant(&src, to).unwrap();
        prop_assert_eq!(converted.table(), direct.table());
    }

    #[test]
    fn engines_agree(mu in law(2, 3)) {
        let s = cumulants_via_shuffle(&mu).unwrap();
        prop_assert_eq!(&s.free, &moments_to_cumulants(&mu, CumulantFamily::Free).unwrap());
        prop_assert_eq!(&s.boolean, &moments_to_cumulants(&mu, CumulantFamily::Boolean).unwrap());
        prop_assert_eq!(&s.monotone, &moments_to_cumulants(&mu, CumulantFamily::Monotone).unwrap());
    }

    #[test]
    fn body_ignores_soul(mu in law(1, 5), f in family()) {
        let flat = Moments::new(mu.table().map(|v| GScalar::real(v.body.clone())));
        let a = moments_to_cumulants(&mu, f).unwrap();
        let b = moments_to_cumulants(&flat, f).unwrap();
        for (x, y) in a.table().values().iter().zip(b.table().values()) {
            prop_assert_eq!(&x.body, &y.body);
            prop_assert_eq!(&y.soul, &q(0, 1));
        }
    }

    #[test]
    fn convolution_commutes(mu in law(2, 3), nu in law(2, 3), kind in additive()) {
        prop_assert_eq!(
            convolve_laws(&mu, &nu, kind).unwrap(),
            convolve_laws(&nu, &mu, kind).unwrap()
        );
    }

    #[test]
    fn powers_add(mu in law(1, 5), s in 0i64..4, t in 0i64..4, kind in additive()) {
        let (s, t) = (q(s, 2), q(t, 3));
        let lhs = convolve_laws(
            &law_power(&mu, &s, kind, false).unwrap(),
            &law_power(&mu, &t, kind, false).unwrap(),
            kind,
        ).unwrap();
        prop_assert_eq!(lhs, law_power(&mu, &(s + t), kind, false).unwrap());
    }

    #[test]
    fn bp_semigroup(mu in law(1, 4), s in 0i64..4, t in 0i64..4) {
        let (s, t) = (q(s, 2), q(t, 2));
        let lhs = bp_map(&bp_map(&mu, &s).unwrap(), &t).unwrap();
        prop_assert_eq!(lhs, bp_map(&mu, &(s + t)).unwrap());
    }

    #[test]
    fn eta_identities(mu in law(2, 3)) {
        let r = eta_series_check(&mu, 3).unwrap();
        prop_assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn half_shuffle_exp_log(mu in law(2, 3)) {
        let phi = Functional::from_law(&mu);
        for kind in [Product::Prec, Product::Succ, Product::Star] {
            let back = hs_exp(&hs_log(&phi, kind).unwrap(), kind).unwrap();
            prop_assert_eq!(back.words(), phi.words());
        }
    }

    #[test]
    fn boolean_is_adjoint_of_free(mu in law(2, 3)) {
        let phi = Functional::from_law(&mu);
        let kappa = hs_log(&phi, Product::Prec).unwrap();
        let beta = hs_log(&phi, Product::Succ).unwrap();
        let theta = adjoint(&phi, &kappa).unwrap();
        prop_assert_eq!(theta.words(), beta.words());
        let (omega, rho) = (magnus(&kappa).unwrap(), hs_log(&phi, Product::Star).unwrap());
        prop_assert_eq!(omega.words(), rho.words());
    }

    #[test]
    fn text_format_round_trip(mu in law(2, 2)) {
        let text = write_law(&mu);
        prop_assert_eq!(read_law(&text).unwrap(), mu);
    }

    #[test]
    fn word_tables_cover_every_word(k in 1usize..4, order in 1usize..4) {
        let t = WordTable::from_fn(k, order, |w| q(w.len() as i64, 1)).unwrap();
        let expected: usize = (1..=order).map(|n| k.pow(n as u32)).sum();
        prop_assert_eq!(t.values().len(), expected);
        prop_assert!(t.iter().all(|(w, n)| q(w.len() as i64, 1) == *n));
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn partition_families_nest(n in 1usize..8) {
        let all = enumerate(n, PartitionFamily::All).unwrap();
        let nc = enumerate(n, PartitionFamily::NonCrossing).unwrap();
        let irr = enumerate(n, PartitionFamily::IrreducibleNc).unwrap();
        let int = enumerate(n, PartitionFamily::Interval).unwrap();
        prop_assert!(nc.iter().all(|p| p.is_noncrossing()));
        prop_assert!(int.iter().all(|p| p.is_noncrossing() && p.is_interval()));
        prop_assert!(irr.iter().all(|p| p.is_noncrossing() && p.is_irreducible()));
        prop_assert_eq!(all.iter().filter(|p| p.is_noncrossing()).count(), nc.len());
        // Irreducible partitions of n+1 correspond to noncrossing ones of n.
        if n > 1 {
            let smaller = enumerate(n - 1, PartitionFamily::NonCrossing).unwrap();
            prop_assert_eq!(irr.len(), smaller.len());
        }
    }

    #[test]
    fn tree_factorial_bounds(n in 1usize..8) {
        for pi in enumerate(n, PartitionFamily::NonCrossing).unwrap().iter() {
            let s = nesting_stats(pi).unwrap();
            let fact: num_bigint::BigUint = (1..=pi.block_count()).map(num_bigint::BigUint::from).product();
            prop_assert_eq!(&s.tree_factorial * &s.monotone_count, fact);
            prop_assert!(s.monotone_count >= 1u32.into());
        }
    }

    #[test]
    fn mobius_sums_to_zero(n in 2usize..7) {
        let total: i64 = enumerate(n, PartitionFamily::NonCrossing)
            .unwrap()
            .iter()
            .map(|p| mobius_to_top(p).unwrap())
            .sum();
        prop_assert_eq!(total, 0);
    }
}
