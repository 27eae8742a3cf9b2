//! Property tests over randomized structures: the monad laws on
//! arbitrary small weight tables, serialization stability, and the
//! section algebra on arbitrary symmetric tensors.

use ppcf_core::bang::maps::{proj_j, proj_m, rho, sec_k, sec_n};
use ppcf_core::bang::{nabla, SymComponent};
use ppcf_core::convex::CVec;
use ppcf_core::measure::FiniteMeasure;
use ppcf_core::rat::{one, rat, to_frac_string, parse_rat, Rat};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (0i64..=4, 1i64..=6).prop_map(|(n, d)| rat(n, 4 * d))
}

fn small_measure() -> impl Strategy<Value = FiniteMeasure<i64>> {
    proptest::collection::vec((0i64..6, (0i64..=2, 8i64..=12)), 1..4).prop_map(|atoms| {
        FiniteMeasure::from_atoms(
            atoms.into_iter().map(|(x, (n, d))| (x, rat(n, d))),
        )
        .expect("weights bounded by construction")
    })
}

proptest! {
    #[test]
    fn monad_left_unit(x in 0i64..6, shift in 0i64..3) {
        let k = move |v: &i64| FiniteMeasure::from_atoms([(v + shift, rat(1, 2))]).unwrap();
        prop_assert_eq!(FiniteMeasure::dirac(x).bind(k), k(&x));
    }

    #[test]
    fn monad_right_unit(m in small_measure()) {
        prop_assert_eq!(m.bind(|x| FiniteMeasure::dirac(*x)), m);
    }

    #[test]
    fn monad_associativity(m in small_measure(), s in 0i64..3, t in 1i64..4) {
        let k = move |x: &i64| FiniteMeasure::from_atoms([(x + s, rat(1, 2))]).unwrap();
        let h = move |x: &i64| FiniteMeasure::from_atoms([(x * t, rat(1, 3))]).unwrap();
        prop_assert_eq!(m.bind(k).bind(h), m.bind(|x| k(x).bind(h)));
    }

    #[test]
    fn pushforward_preserves_integrals(m in small_measure()) {
        let f = |x: &i64| x + 1;
        let g = |y: &i64| if *y % 2 == 0 { one() } else { rat(1, 3) };
        let direct = m.pushforward(f).integrate(g).unwrap();
        let composed = m.integrate(|x| g(&f(x))).unwrap();
        prop_assert_eq!(direct, composed);
    }

    #[test]
    fn rational_strings_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let r = rat(n, d);
        prop_assert_eq!(parse_rat(&to_frac_string(&r)).unwrap(), r);
    }

    #[test]
    fn promotion_components_stay_compatible(
        a in small_rat(), b in small_rat(), trunc in 1usize..5
    ) {
        let x = CVec::new(vec![a, b]);
        let nb = nabla(&x, trunc);
        // reconstruct through the constructor, which re-checks projection
        // compatibility of the whole family
        prop_assert!(ppcf_core::bang::TruncatedBang::new(3, nb.components().to_vec()).is_ok());
        prop_assert_eq!(nb.der().unwrap(), x);
    }

    /// The homogeneous section equations on arbitrary (not just pure)
    /// symmetric tensors: build a random aggregated component directly.
    #[test]
    fn section_equations_on_raw_components(
        coeffs in proptest::collection::vec((0i64..5, 1i64..4), 6..=6),
        n in 0usize..4,
    ) {
        // degree-2 component over the two-point-plus-star alphabet
        let mut c = SymComponent::zero(3, 2);
        for (slot, (p, q)) in coeffs.into_iter().enumerate() {
            c.coeffs[slot] = rat(p, q * 3);
        }
        let m = 2usize;
        if n >= m {
            let back = proj_m(&sec_n(&proj_m(&c, m), n), m);
            let scale = Rat::new(
                ppcf_core::rat::factorial(m),
                ppcf_core::rat::self_power(m),
            );
            prop_assert_eq!(back, proj_m(&c, m).scale(&scale));
        }
        // J . K section at the component's own degree
        let assembled = sec_k(&c, n.max(m));
        prop_assert_eq!(
            proj_j(&assembled, m),
            c.scale(&(one() / rho(m)))
        );
    }
}
