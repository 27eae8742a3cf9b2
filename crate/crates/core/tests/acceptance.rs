//! Acceptance suite: every release criterion as one test printing a
//! pass line. Run with `cargo test --test acceptance -- --nocapture`
//! for the full report.

use ppcf_core::bang::{checks, fix, AnalyticMap};
use ppcf_core::bang::maps::{
    d_decomposition_columns, identity_columns, map_columns, proj_j, proj_m, rho, sec_k, sec_n,
    theta_components,
};
use ppcf_core::convex::CVec;
use ppcf_core::lang::{
    compare_adequacy, denote_program, estimate_dist, op_eval, parse_program, typecheck,
    CanonValue, DenoteCtx, Span,
};
use ppcf_core::measure::FiniteMeasure;
use ppcf_core::rat::{int, one, parse_rat, rat, zero, Rat};
use ppcf_core::seed::SeedStream;
use num_traits::Signed;
use std::time::Instant;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!("[{}] criterion {criterion}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {criterion}: {detail}");
}

/// Criterion 1: exhaustive maximisation over all 216 vertex triples stays
/// at or below 2/3 exactly, while a degree-2 witness reaches exactly 1.
#[test]
fn criterion_1_projection_defect() {
    let start = Instant::now();
    let max = checks::projection_defect_max();
    let witness = checks::projection_defect_witness();
    let elapsed = start.elapsed();
    report(
        "1",
        max <= rat(2, 3) && witness == one() && elapsed.as_secs() < 1,
        &format!(
            "max over 216 triples = {max} <= 2/3, witness = {witness}, {:?}",
            elapsed
        ),
    );
}

/// Criterion 2: deep projection maxima over symmetrised pure vertex
/// tensors observe the n/(2n-1) bound for n = 1, 2, 3, and the quadratic
/// map stays membership-valid at truncations 2, 4, 6.
#[test]
fn criterion_2_deep_projection_bounds() {
    let start = Instant::now();
    let mut detail = String::new();
    let mut pass = true;
    for n in 1..=3usize {
        let max = checks::deep_projection_max(n);
        let bound = checks::deep_projection_bound(n);
        pass &= max <= bound;
        detail.push_str(&format!("n={n}: {max} <= {bound}; "));
    }
    for trunc in [2usize, 4, 6] {
        pass &= checks::four_p0p1_membership_valid(trunc, 8);
    }
    let half = CVec::new(vec![rat(1, 2), rat(1, 2)]);
    pass &= checks::four_p0p1(6).eval(&half) == CVec::new(vec![one()]);
    let elapsed = start.elapsed();
    pass &= elapsed.as_secs() < 30;
    detail.push_str(&format!("membership valid at 2/4/6, {elapsed:?}"));
    report("2", pass, &detail);
}

/// Criterion 3: the exponential algebra is exact for both base objects
/// and degrees up to 4, with the section-defect values
/// (1, 2, 6, 18, 4^4 * 5 / 24).
#[test]
fn criterion_3_exponential_algebra() {
    let start = Instant::now();
    let mut pass = true;
    let rho_expect =
        [int(1), int(2), int(6), int(18), Rat::new((256 * 5).into(), 24.into())];
    for (m, expect) in rho_expect.iter().enumerate() {
        pass &= rho(m) == *expect;
    }
    for alphabet in [2usize, 3] {
        for m in 0..=4usize {
            for n in 0..=4usize {
                let cols = map_columns(alphabet - 1, m, |c| proj_m(&sec_n(c, n), m));
                let expect = if n >= m {
                    let s = Rat::new(
                        ppcf_core::rat::factorial(m),
                        ppcf_core::rat::self_power(m),
                    );
                    map_columns(alphabet - 1, m, |c| c.scale(&s))
                } else {
                    map_columns(alphabet - 1, m, |c| {
                        ppcf_core::bang::SymComponent::zero(c.alphabet, c.degree)
                    })
                };
                pass &= cols == expect;
                if m <= n {
                    let cols = map_columns(alphabet, m, |c| proj_j(&sec_k(c, n), m));
                    let expect =
                        map_columns(alphabet, m, |c| c.scale(&(one() / rho(m))));
                    pass &= cols == expect;
                }
            }
            pass &= d_decomposition_columns(alphabet, m) == identity_columns(alphabet, m);
            let cols = map_columns(alphabet, m, |c| theta_components(c, 4)[m].clone());
            let expect = map_columns(alphabet, m, |c| c.scale(&(one() / rho(m))));
            pass &= cols == expect;
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed.as_secs() < 10;
    report("3", pass, &format!("sections, decomposition and defects exact, {elapsed:?}"));
}

/// Criterion 4: comonoid and analytic laws at degree <= 3: contraction
/// laws, dereliction retractions, store invertibility, and Kleisli
/// composition of linear maps.
#[test]
fn criterion_4_comonoid_analytic_laws() {
    let results = ppcf_core::laws::comonoid_suite();
    let mut pass = true;
    let mut detail = String::new();
    for r in &results {
        pass &= r.pass;
        if !r.pass {
            detail.push_str(&format!("{} failed; ", r.name));
        }
    }
    if pass {
        detail = format!("{} comonoid laws exact", results.len());
    }
    report("4", pass, &detail);
}

/// Criterion 5: the measure monad laws hold exactly on 1000 randomized
/// instances, and countable sums exchange with integration.
#[test]
fn criterion_5_monad_laws() {
    let results = ppcf_core::laws::monad_suite(1000);
    let mut pass = true;
    for r in &results {
        if r.name == "unit-and-associativity" || r.name == "sum-integration-exchange" {
            pass &= r.pass;
        }
    }
    report("5", pass, "1000 randomized instances exact, sum/integration exchange exact");
}

/// Criterion 6: the affine fixed point converges to 1 within 1e-9 in at
/// most 35 monotone iterations; the quadratic one reaches the 40-digit
/// reference of 1 - sqrt(1/2) within 1e-9 in at most 64 iterations.
#[test]
fn criterion_6_fixed_points() {
    let tests = vec![CVec::new(vec![one()])];
    let tol = rat(1, 1_000_000_000);
    let affine = AnalyticMap::zero(1, 1, 2)
        .with_term(0, vec![vec![rat(1, 2)]])
        .with_term(1, vec![vec![rat(1, 2)]]);
    let a = fix(&affine, &tests, &tol, 100).unwrap();
    let a_err = one() - a.point.get(0).clone();
    let quad = AnalyticMap::zero(1, 1, 2)
        .with_term(0, vec![vec![rat(1, 4)]])
        .with_term(2, vec![vec![rat(1, 2)]]);
    let q = fix(&quad, &tests, &tol, 100).unwrap();
    let reference = parse_rat("0.2928932188134524755991556378951509607152").unwrap();
    let q_err = (q.point.get(0).clone() - reference).abs();
    let pass = a.iterations <= 35 && a_err < tol && q.iterations <= 64 && q_err < tol;
    report(
        "6",
        pass,
        &format!(
            "affine: {} iterations, error {:.2e}; quadratic: {} iterations, error {:.2e}",
            a.iterations,
            ppcf_core::rat::to_f64(&a_err),
            q.iterations,
            ppcf_core::rat::to_f64(&q_err),
        ),
    );
}

struct CorpusEntry {
    name: &'static str,
    source: &'static str,
    closed_form: fn() -> Vec<(CanonValue, Rat)>,
    /// step budget per run; divergence burns its entire budget on every
    /// sample, so it gets a smaller one (bottom mass is 1 at any fuel)
    fuel: u64,
}

fn corpus() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry {
            name: "geometric",
            source: "fix g. if bernoulli(1/2) then 0 else 1 + g",
            closed_form: || {
                (0..=20).map(|k| (CanonValue::rat(int(k)), rat(1, 2).pow(k as i32 + 1))).collect()
            },
            fuel: 10_000,
        },
        CorpusEntry {
            name: "biased-coin-sum",
            source: "bernoulli(1/3) + bernoulli(1/3)",
            closed_form: || {
                vec![
                    (CanonValue::rat(int(0)), rat(4, 9)),
                    (CanonValue::rat(int(1)), rat(4, 9)),
                    (CanonValue::rat(int(2)), rat(1, 9)),
                ]
            },
            fuel: 10_000,
        },
        CorpusEntry {
            name: "sum-type-match",
            source: "match (if bernoulli(1/3) then L 1 else R 2) with L x -> x + 10 ; R y -> y",
            closed_form: || {
                vec![
                    (CanonValue::rat(int(11)), rat(1, 3)),
                    (CanonValue::rat(int(2)), rat(2, 3)),
                ]
            },
            fuel: 10_000,
        },
        CorpusEntry {
            name: "eval-correlated-pair",
            source: "eval bernoulli(1/2) as x in x = x",
            closed_form: || vec![(CanonValue::rat(int(1)), one())],
            fuel: 10_000,
        },
        CorpusEntry {
            name: "divergence",
            source: "fix x. x",
            closed_form: Vec::new,
            fuel: 1_000,
        },
    ]
}

/// Criterion 7: on the five-program corpus the exact interpreter matches
/// the closed forms and the sampler agrees within four standard errors
/// at 100000 samples; pure divergence reports full bottom mass on both
/// sides.
#[test]
fn criterion_7_adequacy_corpus() {
    let start = Instant::now();
    let ctx = DenoteCtx::default();
    let mut pass = true;
    let mut detail = String::new();
    for entry in corpus() {
        let raw = parse_program(entry.source).unwrap();
        let typed = typecheck(&raw).unwrap();
        let denoted = denote_program(&typed, &ctx).unwrap().data_measure(Span::default()).unwrap();
        for (v, expect) in (entry.closed_form)() {
            let got = denoted.mass_at(&v);
            if got != expect {
                pass = false;
                detail.push_str(&format!("{}: mass({v}) = {got} wanted {expect}; ", entry.name));
            }
        }
        let rep =
            compare_adequacy(&typed, &raw, 4.0, &ctx, 100_000, 20_260_808, entry.fuel).unwrap();
        if !rep.pass {
            pass = false;
            detail.push_str(&format!("{}: adequacy mismatch; ", entry.name));
        }
        if entry.name == "divergence" {
            let full_bottom = rep.denoted_bottom == one() && rep.estimated_bottom == 1.0;
            if !full_bottom {
                pass = false;
                detail.push_str("divergence bottom mass not 1; ");
            }
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed.as_secs() < 60;
    if pass {
        detail = format!("5 programs exact + within 4 sigma at 1e5 samples, {elapsed:?}");
    }
    report("7", pass, &detail);
}

/// Criterion 8: the forced pair has identical components on all 10000
/// seeds, while the plain call-by-name pair of coin flips is empirically
/// independent within four standard errors.
#[test]
fn criterion_8_behavioral_contrast() {
    let forced = parse_program("eval uniform(0, 1) as x in L (x, x)").unwrap();
    typecheck(&forced).unwrap();
    let mut identical = 0u64;
    for seed in 0..10_000u64 {
        let mut stream = SeedStream::root(seed);
        match op_eval(&forced, &mut stream, 10_000) {
            Some(CanonValue::L(inner)) => {
                if let CanonValue::Pair(a, b) = *inner {
                    if a == b {
                        identical += 1;
                    }
                }
            }
            other => panic!("unexpected run result {other:?}"),
        }
    }

    let plain = parse_program("(\\x. (x, x)) bernoulli(1/2)").unwrap();
    typecheck(&plain).unwrap();
    let est = estimate_dist(&plain, 10_000, 99, 1_000);
    let n = 10_000f64;
    let sigma = (0.25 * 0.75 / n).sqrt();
    let mut joint_ok = true;
    let mut detail_cells = String::new();
    for a in 0..2i64 {
        for b in 0..2i64 {
            let v = CanonValue::Pair(
                Box::new(CanonValue::rat(int(a))),
                Box::new(CanonValue::rat(int(b))),
            );
            let p = est.frequency(&v);
            joint_ok &= (p - 0.25).abs() <= 4.0 * sigma;
            detail_cells.push_str(&format!("({a},{b})={p:.4} "));
        }
    }
    let pass = identical == 10_000 && joint_ok;
    report(
        "8",
        pass,
        &format!("forced identical {identical}/10000; plain joint {detail_cells}within 4 sigma"),
    );
}

/// The sampler side of the correlation story, sampled rather than exact:
/// empirical correlation of the forced continuous pair is 1, of the
/// unforced one near 0.
#[test]
fn behavioral_contrast_continuous_correlation() {
    let unforced = parse_program("(\\x. (x, x)) uniform(0, 1)").unwrap();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for seed in 0..10_000u64 {
        let mut stream = SeedStream::root(seed);
        match op_eval(&unforced, &mut stream, 1000) {
            Some(CanonValue::Pair(a, b)) => {
                if let (CanonValue::Rat(x), CanonValue::Rat(y)) = (*a, *b) {
                    xs.push(ppcf_core::rat::to_f64(&x));
                    ys.push(ppcf_core::rat::to_f64(&y));
                }
            }
            other => panic!("{other:?}"),
        }
    }
    let n = xs.len() as f64;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n;
    let (mx, my) = (mean(&xs), mean(&ys));
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / n;
    let vx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>() / n;
    let vy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum::<f64>() / n;
    let corr = cov / (vx * vy).sqrt();
    assert!(corr.abs() < 0.05, "unforced correlation {corr}");
}

/// Spot checks that the per-operation examples used throughout the suite
/// still hold at the integration level.
#[test]
fn corpus_closed_forms_are_subprobabilities() {
    for entry in corpus() {
        let masses: Rat = (entry.closed_form)().into_iter().map(|(_, w)| w).sum();
        assert!(masses <= one(), "{}", entry.name);
    }
    // sanity: the finite-measure layer agrees with one corpus closed form
    let two_coins = FiniteMeasure::from_atoms([(0i64, rat(2, 3)), (1, rat(1, 3))])
        .unwrap()
        .bind(|a| {
            FiniteMeasure::from_atoms([(*a, rat(2, 3)), (a + 1, rat(1, 3))]).unwrap()
        });
    assert_eq!(two_coins.mass_at(&0), rat(4, 9));
    assert_eq!(two_coins.mass_at(&1), rat(4, 9));
    assert_eq!(two_coins.mass_at(&2), rat(1, 9));
    let _ = zero();
}
