//! The law suite: every algebraic invariant of the model as a named,
//! runnable check. The command-line `laws` subcommand prints one line
//! per law; the acceptance tests assert them.

use crate::bang::{
    self, cont_pair, cont_pair_oracle, der_after_dig, fix, kleisli_compose, nabla, AnalyticMap,
    DigMachine, MsetBasis, PairComponent, StoreMachine, SymComponent, TruncatedBang,
};
use crate::convex::{
    kernel_to_linear, linear_to_kernel, ConvexObject, CVec, MultiMap,
};
use crate::lang::CanonValue;
use crate::measure::{stat_distance, DistanceVerdict, FiniteMeasure, SamplerMeasure};
use crate::rat::{int, one, rat, zero, Rat};
use crate::seed::SeedStream;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawKind {
    Exact,
    Statistical,
}

#[derive(Debug, Clone)]
pub struct LawResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub kind: LawKind,
    pub pass: bool,
    pub detail: String,
}

fn law(suite: &'static str, name: &'static str, kind: LawKind, pass: bool, detail: String) -> LawResult {
    LawResult { suite, name, kind, pass, detail }
}

fn random_measure(stream: &mut SeedStream, max_atoms: usize) -> FiniteMeasure<i64> {
    let n = 1 + (stream.next_u64() as usize) % max_atoms;
    let mut parts = Vec::new();
    for _ in 0..n {
        let atom = (stream.next_u64() % 6) as i64;
        let num = (stream.next_u64() % 4) as i64;
        let den = 4 * n as i64;
        parts.push((atom, rat(num, den)));
    }
    FiniteMeasure::from_atoms(parts).expect("bounded random weights")
}

/// Left unit, right unit and associativity of the measure monad on one
/// random instance, exactly.
fn monad_laws_once(stream: &mut SeedStream) -> bool {
    let m = random_measure(stream, 4);
    let shift = (stream.next_u64() % 3) as i64;
    let k = move |x: &i64| {
        FiniteMeasure::from_atoms([(x + shift, rat(1, 2)), (x - 1, rat(1, 4))]).unwrap()
    };
    let h = move |x: &i64| {
        FiniteMeasure::from_atoms([(2 * x, rat(1, 3))]).unwrap()
    };
    // left unit: dirac(x) bind k = k(x)
    let x0 = (stream.next_u64() % 6) as i64;
    let left_unit = FiniteMeasure::dirac(x0).bind(k) == k(&x0);
    // right unit: m bind dirac = m
    let right_unit = m.bind(|x| FiniteMeasure::dirac(*x)) == m;
    // associativity
    let assoc = m.bind(k).bind(h) == m.bind(|x| k(x).bind(h));
    left_unit && right_unit && assoc
}

pub fn monad_suite(instances: usize) -> Vec<LawResult> {
    let mut out = Vec::new();
    let mut stream = SeedStream::root(0xA11CE);
    let pass = (0..instances).all(|_| monad_laws_once(&mut stream));
    out.push(law(
        "monad",
        "unit-and-associativity",
        LawKind::Exact,
        pass,
        format!("{instances} randomized instances, <= 4 atoms"),
    ));

    // countable sum exchanges with integration on a truncated geometric family
    let parts: Vec<FiniteMeasure<i64>> =
        (0..40).map(|k| FiniteMeasure::dirac(k as i64).scale(&rat(1, 2).pow(k + 1))).collect();
    let total = FiniteMeasure::countable_sum(parts.clone()).unwrap();
    let f = |x: &i64| if *x % 2 == 0 { one() } else { rat(1, 2) };
    let lhs = total.integrate(f).unwrap();
    let rhs = parts.iter().map(|p| p.integrate(f).unwrap()).fold(zero(), |a, b| a + b);
    out.push(law(
        "monad",
        "sum-integration-exchange",
        LawKind::Exact,
        lhs == rhs,
        format!("lhs = {lhs}"),
    ));

    // naturality: pushforward commutes with flattening
    let mut stream = SeedStream::root(0xBEE);
    let pass = (0..50).all(|_| {
        let inner1 = random_measure(&mut stream, 3);
        let inner2 = random_measure(&mut stream, 3);
        let outer = FiniteMeasure::from_atoms([
            (inner1, rat(1, 2)),
            (inner2, rat(1, 3)),
        ])
        .unwrap();
        let g = |x: &i64| x * 3 + 1;
        let lhs = FiniteMeasure::flatten(&outer).pushforward(g);
        let rhs = FiniteMeasure::flatten(&outer.pushforward(|m| m.pushforward(g)));
        lhs == rhs
    });
    out.push(law(
        "monad",
        "pushforward-flatten-naturality",
        LawKind::Exact,
        pass,
        "50 randomized instances".into(),
    ));

    // the split halves of a seed stream are independent
    let (mut left, mut right) = SeedStream::root(0xC0FFEE).split();
    let mut cells = [[0u64; 4]; 4];
    let n = 100_000u64;
    for _ in 0..n {
        let i = ((left.next_unit_f64() * 4.0) as usize).min(3);
        let j = ((right.next_unit_f64() * 4.0) as usize).min(3);
        cells[i][j] += 1;
    }
    let row: Vec<f64> = (0..4).map(|i| cells[i].iter().sum::<u64>() as f64).collect();
    let col: Vec<f64> =
        (0..4).map(|j| (0..4).map(|i| cells[i][j]).sum::<u64>() as f64).collect();
    let mut chi2 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let expect = row[i] * col[j] / n as f64;
            chi2 += (cells[i][j] as f64 - expect).powi(2) / expect;
        }
    }
    out.push(law(
        "monad",
        "seed-split-independence",
        LawKind::Statistical,
        chi2 < 21.666,
        format!("chi2 = {chi2:.3} < 21.666 (df 9, p = 0.01) at n = {n}"),
    ));

    // sampler and table representations of the same measure agree
    let mut stream = SeedStream::root(0xD1CE);
    let pass = (0..5).all(|i| {
        let m = random_measure(&mut stream, 4);
        let a = SamplerMeasure::from_finite(&m);
        let b = SamplerMeasure::from_finite(&m);
        let rep = stat_distance(&a, &b, |x| *x, 40_000, &SeedStream::root(50 + i), 4.0);
        rep.verdict == DistanceVerdict::Equal
    });
    out.push(law(
        "monad",
        "finite-vs-sampler-agreement",
        LawKind::Statistical,
        pass,
        "5 random tables at 4 sigma".into(),
    ));
    out
}

pub fn convex_suite() -> Vec<LawResult> {
    let mut out = Vec::new();
    let w = ConvexObject::weights();
    let x = ConvexObject::plus_objects(&[&w, &w]);
    let xw = ConvexObject::with_objects(&[&x, &w]);
    let embed = ConvexObject::embed_finite(&["a", "b", "c"]);

    // cross-pairing bound on every constructed object
    let objects: Vec<(&str, &ConvexObject)> =
        vec![("W", &w), ("W+W", &x), ("(W+W)&W", &xw), ("embed3", &embed)];
    let pass = objects.iter().all(|(_, o)| {
        o.point_gens.iter().all(|p| o.test_gens.iter().all(|t| t.pairing(p) <= one()))
    });
    out.push(law("convex", "cross-pairing-bound", LawKind::Exact, pass, "4 objects".into()));

    // bipolarity at desk scale
    let pass = objects.iter().all(|(_, o)| o.dim() == 0 || o.bipolar_check().unwrap());
    out.push(law("convex", "bipolar-involution", LawKind::Exact, pass, "4 objects".into()));

    // kernel correspondence round-trips exactly
    let mut stream = SeedStream::root(0xFACE);
    let pass = (0..30).all(|_| {
        let rows: Vec<FiniteMeasure<usize>> = (0..3)
            .map(|_| {
                FiniteMeasure::from_atoms([
                    (0usize, rat((stream.next_u64() % 3) as i64, 6)),
                    (1usize, rat((stream.next_u64() % 3) as i64, 6)),
                    (2usize, rat((stream.next_u64() % 2) as i64, 6)),
                ])
                .unwrap()
            })
            .collect();
        linear_to_kernel(&kernel_to_linear(&rows, 3)) == rows
    });
    out.push(law("convex", "kernel-linear-iso", LawKind::Exact, pass, "30 random kernels".into()));

    // curry, uncurry and transposes are mutually inverse
    let mut stream = SeedStream::root(0xCAB);
    let pass = (0..20).all(|_| {
        let m = MultiMap::from_fn(vec![2, 3], 2, |i, j| {
            rat((stream.next_u64() % 5) as i64, 7 + (i[0] + i[1] + j) as i64)
        });
        m.curry(1).uncurry(&[3], 2) == m
            && m.transpose_k(0).transpose_k(0) == m
            && m.transpose_k(1).transpose_k(1) == m
    });
    out.push(law(
        "convex",
        "curry-transpose-involutions",
        LawKind::Exact,
        pass,
        "20 random bilinear maps".into(),
    ));

    // multilinear maps respect convex combinations per argument
    let mut stream = SeedStream::root(0xF00D);
    let pass = (0..20).all(|_| {
        let m = MultiMap::from_fn(vec![2, 2], 2, |i, j| {
            rat((stream.next_u64() % 4) as i64, 9 + (i[0] * 2 + j) as i64)
        });
        let a = CVec::new(vec![rat(1, 3), rat(1, 5)]);
        let b = CVec::new(vec![rat(1, 7), rat(1, 2)]);
        let y = CVec::new(vec![rat((stream.next_u64() % 3) as i64, 3), rat(1, 4)]);
        let lam = rat(1, 4);
        let mu = rat(2, 5);
        let mix = a.scale(&lam).add(&b.scale(&mu));
        m.apply(&[&mix, &y])
            == m.apply(&[&a, &y]).scale(&lam).add(&m.apply(&[&b, &y]).scale(&mu))
    });
    out.push(law(
        "convex",
        "multilinearity-convex-combinations",
        LawKind::Exact,
        pass,
        "20 randomized instances".into(),
    ));

    // the norm of a bilinear test over the ball is attained at vertex
    // products: compare an exhaustive vertex maximum against a grid search
    let m = MultiMap::from_fn(vec![2, 2], 1, |i, _| rat(((i[0] + i[1]) % 2) as i64, 1));
    let vertex_max = m.norm_against(&[&x, &x], &CVec::new(vec![one()]));
    let mut grid_max = zero();
    let steps = 4i64;
    for a0 in 0..=steps {
        for a1 in 0..=(steps - a0) {
            for b0 in 0..=steps {
                for b1 in 0..=(steps - b0) {
                    let xa = CVec::new(vec![rat(a0, steps), rat(a1, steps)]);
                    let xb = CVec::new(vec![rat(b0, steps), rat(b1, steps)]);
                    let v = m.apply(&[&xa, &xb]).get(0).clone();
                    if v > grid_max {
                        grid_max = v;
                    }
                }
            }
        }
    }
    out.push(law(
        "convex",
        "vertex-attainment",
        LawKind::Exact,
        grid_max <= vertex_max && vertex_max == one(),
        format!("vertex max {vertex_max}, grid max {grid_max}"),
    ));
    out
}

pub fn exponential_suite() -> Vec<LawResult> {
    use crate::bang::maps::{
        d_decomposition_columns, identity_columns, map_columns, proj_j, proj_m, rho, sec_k,
        sec_n, theta_components,
    };
    let mut out = Vec::new();

    // rho table from the closed formula
    let expect = [int(1), int(2), int(6), int(18), rat(160, 3)];
    let pass = (0..=4).all(|m| rho(m) == expect[m]);
    out.push(law(
        "exponential",
        "rho-values",
        LawKind::Exact,
        pass,
        "(1, 2, 6, 18, 160/3) for degrees 0..4".into(),
    ));

    // alphabet sizes 2 and 3 stand for the weight object and the
    // two-point coproduct, both with the weight slot adjoined
    for alphabet in [2usize, 3] {
        let name: &'static str =
            if alphabet == 2 { "sections-over-W" } else { "sections-over-W+W" };
        let mut pass = true;
        for m in 0..=4usize {
            for n in 0..=4usize {
                // homogeneous section: proj_m . sec_n = (m!/m^m) id or 0
                let cols = map_columns(alphabet - 1, m, |c| proj_m(&sec_n(c, n), m));
                let expect = if n >= m {
                    let s = Rat::new(crate::rat::factorial(m), crate::rat::self_power(m));
                    map_columns(alphabet - 1, m, |c| c.scale(&s))
                } else {
                    map_columns(alphabet - 1, m, |c| {
                        SymComponent::zero(c.alphabet, c.degree)
                    })
                };
                pass &= cols == expect;
                // projection section: proj_j . sec_k = (1/rho_m) id for m <= n
                if m <= n {
                    let cols = map_columns(alphabet, m, |c| proj_j(&sec_k(c, n), m));
                    let expect =
                        map_columns(alphabet, m, |c| c.scale(&(one() / rho(m))));
                    pass &= cols == expect;
                }
            }
            pass &= d_decomposition_columns(alphabet, m) == identity_columns(alphabet, m);
            // pi . theta = (1/rho) id
            let cols = map_columns(alphabet, m, |c| theta_components(c, 4)[m].clone());
            let expect = map_columns(alphabet, m, |c| c.scale(&(one() / rho(m))));
            pass &= cols == expect;
        }
        out.push(law(
            "exponential",
            name,
            LawKind::Exact,
            pass,
            "M.N, J.K, sum D, pi.theta for degrees <= 4".into(),
        ));
    }

    // compatibility of constructed families
    let x = CVec::new(vec![rat(1, 3), rat(1, 5)]);
    let b = nabla(&x, 4);
    let rebuilt = TruncatedBang::new(3, b.components().to_vec()).is_ok();
    out.push(law(
        "exponential",
        "projection-compatibility",
        LawKind::Exact,
        rebuilt,
        "promotion family at truncation 4".into(),
    ));
    out
}

pub fn comonoid_suite() -> Vec<LawResult> {
    let mut out = Vec::new();
    let mut stream = SeedStream::root(0xD16);
    let sample_bang = |stream: &mut SeedStream, trunc: usize| {
        let x = CVec::new(vec![
            rat((stream.next_u64() % 3) as i64, 4),
            rat((stream.next_u64() % 2) as i64, 4),
        ]);
        let y = CVec::new(vec![
            rat((stream.next_u64() % 2) as i64, 4),
            rat((stream.next_u64() % 3) as i64, 4),
        ]);
        nabla(&x, trunc).scale(&rat(1, 2)).add(&nabla(&y, trunc).scale(&rat(1, 3)))
    };

    let mut coassoc = true;
    let mut counit = true;
    let mut cocomm = true;
    let mut projection = true;
    for _ in 0..4 {
        let b = sample_bang(&mut stream, 3);
        counit &= bang::comonoid::cont_counit_holds(&b);
        cocomm &= bang::comonoid::cont_cocommutative(&b);
        for (p, q, r) in [(1, 1, 1), (0, 1, 2), (2, 1, 0)] {
            coassoc &= bang::comonoid::cont_coassociative(&b, p, q, r).unwrap();
        }
        for (p, q) in [(0, 0), (1, 1), (2, 1), (1, 2), (3, 0)] {
            projection &= cont_pair(&b, p, q).unwrap() == cont_pair_oracle(&b, p, q).unwrap();
        }
    }
    out.push(law("comonoid", "cont-coassociativity", LawKind::Exact, coassoc, "degree <= 3".into()));
    out.push(law("comonoid", "cont-counit", LawKind::Exact, counit, "degree <= 3".into()));
    out.push(law("comonoid", "cont-cocommutativity", LawKind::Exact, cocomm, "degree <= 3".into()));
    out.push(law(
        "comonoid",
        "cont-projection-equation",
        LawKind::Exact,
        projection,
        "direct split vs section-family display".into(),
    ));

    // der . nabla = id
    let mut stream = SeedStream::root(0xDE6);
    let pass = (0..10).all(|_| {
        let x = CVec::new(vec![
            rat((stream.next_u64() % 4) as i64, 5),
            rat((stream.next_u64() % 2) as i64, 5),
        ]);
        nabla(&x, 2).der().unwrap() == x
    });
    out.push(law("comonoid", "der-after-promotion", LawKind::Exact, pass, "10 random points".into()));

    // der_{!X} . dig = id
    let mut stream = SeedStream::root(0xD17);
    let pass = (0..3).all(|_| {
        let b = sample_bang(&mut stream, 3);
        let machine = DigMachine::new(3, 3, 1);
        der_after_dig(&machine, &b) == b
    });
    out.push(law("comonoid", "der-after-dig", LawKind::Exact, pass, "3 random elements".into()));

    // store round trip at degree 2 over two weight objects
    let mut stream = SeedStream::root(0x5703);
    let machine = StoreMachine::new(2, 2, 2, 2);
    let pass = (0..3).all(|_| {
        let a = nabla(&CVec::new(vec![rat((stream.next_u64() % 3) as i64, 3)]), 2)
            .scale(&rat(1, 2))
            .add(&nabla(&CVec::new(vec![rat((stream.next_u64() % 2) as i64, 2)]), 2).scale(&rat(1, 2)));
        let b = nabla(&CVec::new(vec![rat((stream.next_u64() % 4) as i64, 4)]), 2);
        let stored = machine.store(&a, &b, 2).unwrap();
        (0..=2usize).all(|p| {
            (0..=(2 - p)).all(|q| {
                bang::unstore_pair(&stored, 1, 1, p, q).unwrap()
                    == PairComponent::outer(a.component(p).unwrap(), b.component(q).unwrap())
            })
        })
    });
    out.push(law("comonoid", "store-invertibility", LawKind::Exact, pass, "degree <= 2".into()));

    // idempotent characterisation over the weight object: a compatible
    // family whose contraction is its own tensor square is zero or a
    // promotion
    let grid = [zero(), rat(1, 4), rat(1, 2), rat(3, 4), one()];
    let basis = MsetBasis::get(2, 2);
    let mut checked = 0usize;
    let mut pass = true;
    for c0 in &grid {
        for c1 in &grid {
            for c2 in &grid {
                let mut top = SymComponent::zero(2, 2);
                top.coeffs = vec![c0.clone(), c1.clone(), c2.clone()];
                let b = TruncatedBang::from_top(top);
                let idem = (0..=2usize).all(|p| {
                    (0..=(2 - p)).all(|q| {
                        cont_pair(&b, p, q).unwrap()
                            == PairComponent::outer(
                                b.component(p).unwrap(),
                                b.component(q).unwrap(),
                            )
                    })
                });
                if idem {
                    checked += 1;
                    let is_zero = b.components().iter().all(|c| c.is_zero());
                    let promoted = nabla(&b.der().unwrap(), 2) == b;
                    pass &= is_zero || promoted;
                }
            }
        }
    }
    let _ = basis;
    out.push(law(
        "comonoid",
        "idempotents-are-promotions",
        LawKind::Exact,
        pass && checked >= 2,
        format!("{checked} idempotents found on a 125-point grid"),
    ));

    // Kleisli composition agrees with plain composition on linear maps
    let mut stream = SeedStream::root(0x1255);
    let pass = (0..3).all(|_| {
        let m1 = MultiMap::from_fn(vec![2], 2, |i, j| {
            rat((stream.next_u64() % 3) as i64, 4 + (i[0] + j) as i64)
        });
        let m2 = MultiMap::from_fn(vec![2], 2, |i, j| {
            rat((stream.next_u64() % 2) as i64, 3 + (i[0] * j) as i64)
        });
        let f = AnalyticMap::from_linear(&m1, 3);
        let g = AnalyticMap::from_linear(&m2, 3);
        kleisli_compose(&g, &f, 3).unwrap() == AnalyticMap::from_linear(&m2.compose1(&m1), 3)
    });
    out.push(law(
        "comonoid",
        "kleisli-composition-linear",
        LawKind::Exact,
        pass,
        "3 random linear pairs over the two-point coproduct".into(),
    ));
    out
}

pub fn analytic_suite() -> Vec<LawResult> {
    let mut out = Vec::new();

    // coefficient recovery: the section-algebra route returns exactly the
    // stored term matrices
    let f = AnalyticMap::zero(2, 1, 3)
        .with_term(0, vec![vec![rat(1, 8)]])
        .with_term(2, vec![vec![rat(1, 4), rat(1, 2), zero()]]);
    let pass = (0..=3).all(|n| f.taylor(n).unwrap() == f.terms[n]);
    out.push(law(
        "analytic",
        "taylor-coefficient-recovery",
        LawKind::Exact,
        pass,
        "degrees <= 3 over the two-point coproduct".into(),
    ));

    // uniqueness: a map rebuilt through the Kleisli path has the same
    // coefficients whenever the evaluations agree on a dense grid
    let id_map = AnalyticMap::from_linear(&MultiMap::identity(2), 3);
    let rebuilt = kleisli_compose(&f, &id_map, 3).unwrap();
    let mut grid_agree = true;
    for i in 0..=4i64 {
        for j in 0..=(4 - i) {
            let x = CVec::new(vec![rat(i, 4), rat(j, 4)]);
            grid_agree &= f.eval(&x) == rebuilt.eval(&x);
        }
    }
    let coeffs_agree = (0..=3).all(|n| rebuilt.taylor(n).unwrap() == f.taylor(n).unwrap());
    out.push(law(
        "analytic",
        "power-series-uniqueness",
        LawKind::Exact,
        grid_agree && coeffs_agree,
        "grid agreement forces equal coefficients (degree <= 3)".into(),
    ));

    // partial sums are monotone in the truncation degree
    let mut pass = true;
    for i in 0..=4i64 {
        for j in 0..=(4 - i) {
            let x = CVec::new(vec![rat(i, 4), rat(j, 4)]);
            let mut last = zero();
            for upto in 0..=3 {
                let v = f.eval_partial(&x, upto).get(0).clone();
                pass &= v >= last;
                last = v;
            }
        }
    }
    out.push(law("analytic", "partial-sum-monotonicity", LawKind::Exact, pass, "simplex grid".into()));

    // linear maps evaluate exactly at any truncation
    let m = MultiMap::from_fn(vec![2], 2, |i, j| rat(((i[0] + j) % 2) as i64, 2));
    let pass = [1usize, 2, 5].iter().all(|&trunc| {
        let g = AnalyticMap::from_linear(&m, trunc);
        let x = CVec::new(vec![rat(1, 3), rat(1, 7)]);
        g.eval(&x) == m.apply(&[&x])
    });
    out.push(law("analytic", "linear-embedding", LawKind::Exact, pass, "three truncations".into()));

    // fixed points: the affine and quadratic references
    let affine = AnalyticMap::zero(1, 1, 2)
        .with_term(0, vec![vec![rat(1, 2)]])
        .with_term(1, vec![vec![rat(1, 2)]]);
    let tests = vec![CVec::new(vec![one()])];
    let tol = rat(1, 1_000_000_000);
    let affine_out = fix(&affine, &tests, &tol, 100).unwrap();
    let affine_ok = affine_out.iterations <= 35
        && (one() - affine_out.point.get(0).clone()) < tol.clone() * int(2);
    let quad = AnalyticMap::zero(1, 1, 2)
        .with_term(0, vec![vec![rat(1, 4)]])
        .with_term(2, vec![vec![rat(1, 2)]]);
    let quad_out = fix(&quad, &tests, &tol, 64).unwrap();
    let reference = crate::rat::parse_rat("0.2928932188134524755991556378951509607152").unwrap();
    let quad_err = {
        let d = quad_out.point.get(0).clone() - reference;
        if d < zero() {
            -d
        } else {
            d
        }
    };
    let quad_ok = quad_out.iterations <= 64 && quad_err < tol;
    out.push(law(
        "analytic",
        "fix-affine-reference",
        LawKind::Exact,
        affine_ok,
        format!("{} iterations", affine_out.iterations),
    ));
    out.push(law(
        "analytic",
        "fix-quadratic-reference",
        LawKind::Exact,
        quad_ok,
        format!("{} iterations, error < 1e-9 vs 40-digit reference", quad_out.iterations),
    ));
    out
}

/// Runs a suite by name; `all` runs every suite.
pub fn run_suite(name: &str) -> Option<Vec<LawResult>> {
    match name {
        "monad" => Some(monad_suite(200)),
        "convex" => Some(convex_suite()),
        "exponential" => Some(exponential_suite()),
        "comonoid" => Some(comonoid_suite()),
        "analytic" => Some(analytic_suite()),
        "all" => {
            let mut out = monad_suite(200);
            out.extend(convex_suite());
            out.extend(exponential_suite());
            out.extend(comonoid_suite());
            out.extend(analytic_suite());
            Some(out)
        }
        _ => None,
    }
}

/// The adequacy self-check used by documentation examples: the
/// denotation of a coin and its sampled distribution agree.
pub fn lang_sanity() -> bool {
    use crate::lang::{denote_program, parse_program, typecheck, DenoteCtx};
    let raw = parse_program("bernoulli(1/2)").unwrap();
    let typed = typecheck(&raw).unwrap();
    let d = denote_program(&typed, &DenoteCtx::default()).unwrap();
    let m = d.data_measure(crate::lang::Span::default()).unwrap();
    m.mass_at(&CanonValue::rat(one())) == rat(1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        for suite in ["monad", "convex", "exponential", "comonoid", "analytic"] {
            let results = run_suite(suite).unwrap();
            assert!(!results.is_empty());
            for r in &results {
                assert!(r.pass, "{}/{}: {}", r.suite, r.name, r.detail);
            }
        }
    }

    #[test]
    fn unknown_suite_is_none() {
        assert!(run_suite("nope").is_none());
    }

    #[test]
    fn sanity_check_holds() {
        assert!(lang_sanity());
    }
}
