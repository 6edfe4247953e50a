//! Randomised and exhaustive checks of the algebraic invariants, each
//! against an oracle that does not share code with the engine under test.

use std::collections::HashSet;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use selfsim_homology::abgroup::{splice_extension, AbMap, AbPresentation, FinGenAbGroup};
use selfsim_homology::engines::{
    free_abelian_engine, graph_engine, katsura_engine, klein_mod2, multispinal_k_engine,
    sunic_orbit_count, Evaluation, F2Matrix2, FreeAbelianInput, GraphInput, KatsuraInput,
};
use selfsim_homology::input::{Body, InputDocument};
use selfsim_homology::linalg::{
    binomial_sign_matrix, cokernel, determinant, eigenvalue_one_multiplicity, exterior_power,
    integer_kernel_rank, mod_p_nullity, rank, smith_normal_form, IntMatrix, ModpMatrix, RatMatrix,
};
use selfsim_homology::pipeline::cokernel_by_transpose;
use selfsim_homology::selfsim::{SelfSimilarAction, Word};

fn int_matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |v| {
            IntMatrix::from_vec(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

fn rat_square(n: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec((-5i64..=5, 1i64..=4), n * n).prop_map(move |v| {
        let data = v
            .into_iter()
            .map(|(p, q)| BigRational::new(p.into(), q.into()))
            .collect();
        RatMatrix::from_vec(n, n, data).unwrap()
    })
}

fn is_unimodular(m: &IntMatrix) -> bool {
    determinant(m).unwrap().abs().is_one()
}

// Determinant by cofactor expansion, for the determinantal-divisor oracle.
fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det_i128(&minor)
        })
        .sum()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// gcd of all k x k minors.
fn determinantal_divisor(m: &[Vec<i128>], k: usize) -> i128 {
    let mut g = 0i128;
    for rows in combinations(m.len(), k) {
        for cols in combinations(m[0].len(), k) {
            let sub: Vec<Vec<i128>> = rows
                .iter()
                .map(|&i| cols.iter().map(|&j| m[i][j]).collect())
                .collect();
            g = g.gcd(&det_i128(&sub));
        }
    }
    g
}

fn to_i128(m: &IntMatrix) -> Vec<Vec<i128>> {
    m.iter_rows()
        .map(|r| r.iter().map(|x| x.to_i128().unwrap()).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn smith_contract(m in int_matrix(12, 9)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.d.clone());
        prop_assert!(is_unimodular(&s.u));
        prop_assert!(is_unimodular(&s.v));
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let diag = s.diagonal();
        prop_assert!(diag.iter().all(|x| !x.is_negative()));
        for w in diag.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
        let nonzero = diag.iter().filter(|x| !x.is_zero()).count();
        prop_assert_eq!(nonzero, s.rank);
    }

    #[test]
    fn rank_nullity(m in int_matrix(8, 5)) {
        let r = rank(&m);
        prop_assert_eq!(r + integer_kernel_rank(&m), m.cols());
        prop_assert_eq!(cokernel(&m).free_rank(), m.rows() - r);
        prop_assert_eq!(cokernel(&m), cokernel_by_transpose(&m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_matches_determinantal_divisors(m in int_matrix(4, 6)) {
        let a = to_i128(&m);
        let diag = smith_normal_form(&m).diagonal();
        let mut prev = 1i128;
        for k in 1..=m.rows().min(m.cols()) {
            let dk = determinantal_divisor(&a, k);
            let want = if dk == 0 { 0 } else { dk / prev };
            prop_assert_eq!(diag[k - 1].to_i128().unwrap(), want, "k = {}", k);
            if dk == 0 {
                break;
            }
            prev = dk;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn cauchy_binet((m, n, q) in (1usize..=6).prop_flat_map(|n| (rat_square(n), rat_square(n), 0..=n.min(3)))) {
        let lhs = exterior_power(&(&m * &n), q).unwrap();
        let rhs = &exterior_power(&m, q).unwrap() * &exterior_power(&n, q).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn binomial_cube_is_a_sign() {
    for n in 0..=50 {
        let b = binomial_sign_matrix(n);
        let mut want = IntMatrix::identity(n + 1);
        if n % 2 == 1 {
            want = want.scale(&BigInt::from(-1));
        }
        assert_eq!(b.pow(3).unwrap(), want, "n = {n}");
    }
}

#[test]
fn binomial_trace_has_period_six() {
    let period = [1, 1, 0, -1, -1, 0];
    for n in 0..=60 {
        assert_eq!(
            binomial_sign_matrix(n).trace(),
            BigInt::from(period[n % 6]),
            "n = {n}"
        );
    }
}

#[test]
fn eigenvalue_one_lifts_from_f2() {
    for n in 0..=40 {
        let b4 = binomial_sign_matrix(n).pow(4).unwrap();
        let over_q = eigenvalue_one_multiplicity(&b4).unwrap();
        let over_f2 = mod_p_nullity(&b4.identity_minus().unwrap(), 2).unwrap();
        assert_eq!(over_q, over_f2, "n = {n}");
    }
}

#[test]
fn shuffle_route_agrees_with_binomial_route() {
    let cf: F2Matrix2 = [[0, 1], [1, 1]];
    for n in 0..=20 {
        let shuffle = klein_mod2(&cf, n)
            .unwrap()
            .identity_minus()
            .unwrap()
            .nullity();
        let b4 = binomial_sign_matrix(n).pow(4).unwrap();
        assert_eq!(
            shuffle,
            eigenvalue_one_multiplicity(&b4).unwrap(),
            "n = {n}"
        );
    }
}

fn gl2_f2() -> Vec<F2Matrix2> {
    let mut out = Vec::new();
    for bits in 0u8..16 {
        let m = [
            [bits & 1, (bits >> 1) & 1],
            [(bits >> 2) & 1, (bits >> 3) & 1],
        ];
        if (m[0][0] * m[1][1] + m[0][1] * m[1][0]) % 2 == 1 {
            out.push(m);
        }
    }
    out
}

fn mul2(a: &F2Matrix2, b: &F2Matrix2) -> F2Matrix2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = (a[i][0] * b[0][j] + a[i][1] * b[1][j]) % 2;
        }
    }
    c
}

#[test]
fn shuffle_expansion_is_functorial() {
    let g = gl2_f2();
    assert_eq!(g.len(), 6);
    for n in 0..=10 {
        let id = klein_mod2(&[[1, 0], [0, 1]], n).unwrap();
        assert_eq!(id, ModpMatrix::identity(2, n + 1).unwrap());
        for a in &g {
            let ka = klein_mod2(a, n).unwrap();
            for b in &g {
                let kb = klein_mod2(b, n).unwrap();
                assert_eq!(
                    klein_mod2(&mul2(a, b), n).unwrap(),
                    ka.mul(&kb).unwrap(),
                    "n = {n}, {a:?} {b:?}"
                );
            }
        }
    }
}

#[test]
fn swap_gives_n_plus_one_mod_two_classes() {
    let swap: F2Matrix2 = [[0, 1], [1, 0]];
    let nul = |n: usize| {
        klein_mod2(&swap, n)
            .unwrap()
            .identity_minus()
            .unwrap()
            .nullity()
    };
    for n in 1..=20 {
        assert_eq!(nul(n) + nul(n - 1), n + 1, "n = {n}");
    }
}

// Finite abelian groups presented as Z^k / P diag(orders), enumerated
// element by element in the diagonal coordinates.
fn elements(orders: &[i64]) -> Vec<Vec<i64>> {
    orders.iter().fold(vec![vec![]], |acc, &n| {
        acc.into_iter()
            .flat_map(|v| {
                (0..n).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect()
    })
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn abmap_case() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, Vec<i64>, i64)> {
    (
        prop::collection::vec(1i64..=6, 1..=3),
        prop::collection::vec(1i64..=6, 1..=3),
    )
        .prop_flat_map(|(s, t)| {
            let cells = s.len() * t.len();
            (
                Just(s),
                Just(t),
                prop::collection::vec(0i64..5, cells),
                -3i64..=3,
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn abmap_orders_match_enumeration((s, t, k, shear) in abmap_case()) {
        // Column j of the map is well defined iff t_i divides s_j * m_ij.
        let (g, h) = (s.len(), t.len());
        let mut m = vec![vec![0i64; g]; h];
        for i in 0..h {
            for j in 0..g {
                m[i][j] = k[i * g + j] * (t[i] / t[i].gcd(&s[j]));
            }
        }
        // Change target coordinates by an elementary matrix so that its
        // relations are no longer diagonal.
        let mut p = IntMatrix::identity(h);
        if h > 1 {
            p[(0, 1)] = BigInt::from(shear);
        }
        let target = AbPresentation::new(&p * &IntMatrix::diagonal(&big(&t)));
        let source = AbPresentation::from_orders(&big(&s));
        let mm = IntMatrix::from_rows(m.iter().map(|r| big(r)).collect()).unwrap();
        let f = AbMap::new(source, target, &p * &mm).unwrap();

        let mut image = HashSet::new();
        let mut zeros = 0usize;
        for x in elements(&s) {
            let y: Vec<i64> = (0..h).map(|i| (0..g).map(|j| m[i][j] * x[j]).sum::<i64>().rem_euclid(t[i])).collect();
            if y.iter().all(|&c| c == 0) {
                zeros += 1;
            }
            image.insert(y);
        }
        let target_order: i64 = t.iter().product();
        prop_assert_eq!(f.kernel().order(), Some(BigInt::from(zeros)));
        prop_assert_eq!(f.cokernel().order(), Some(BigInt::from(target_order / image.len() as i64)));
    }

    #[test]
    fn identity_and_zero_maps(orders in prop::collection::vec(0i64..=6, 1..=3)) {
        let p = AbPresentation::from_orders(&big(&orders));
        let g = p.group();
        let id = AbMap::identity(&p);
        prop_assert!(id.kernel().is_trivial());
        prop_assert!(id.cokernel().is_trivial());
        let zero = id.identity_minus().unwrap();
        prop_assert_eq!(zero.kernel(), g.clone());
        prop_assert_eq!(zero.cokernel(), g);
    }

    #[test]
    fn splice_keeps_size(a in prop::collection::vec(0i64..=6, 0..=3), b in prop::collection::vec(0i64..=6, 0..=3)) {
        let sub = AbPresentation::from_orders(&big(&a)).group();
        let quot = AbPresentation::from_orders(&big(&b)).group();
        let e = splice_extension(&sub, &quot);
        if let Some(r) = e.resolved {
            let sum = sub.direct_sum(&quot);
            prop_assert_eq!(r.free_rank(), sum.free_rank());
            prop_assert_eq!(r.order(), sum.order());
        }
    }
}

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture_docs() -> Vec<(String, InputDocument)> {
    let mut v: Vec<(String, InputDocument)> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, InputDocument::from_path(&p).unwrap())
        })
        .collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

fn automata() -> Vec<(String, SelfSimilarAction)> {
    fixture_docs()
        .into_iter()
        .filter_map(|(n, d)| match d.body {
            Body::Automaton(a) => Some((n, a.action)),
            _ => None,
        })
        .collect()
}

fn word(act: &SelfSimilarAction, spec: &[(usize, bool)]) -> Word {
    let gens = act.generators();
    spec.iter().fold(Word::identity(), |w, &(g, inv)| {
        let g = g % act.num_generators();
        let l = gens.letter(g);
        let l = if inv { gens.inverse(&l) } else { l };
        gens.mul(&w, &l)
    })
}

#[test]
fn cocycle_identities_on_random_words() {
    let words = prop::collection::vec((0usize..8, any::<bool>()), 0..=5);
    let strategy = (
        words.clone(),
        words,
        prop::collection::vec(0usize..8, 0..=6),
    );
    for (name, act) in automata() {
        let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig::with_cases(64));
        let gens = act.generators().clone();
        let d = act.degree();
        runner
            .run(&strategy, |(u, v, p)| {
                let (u, v) = (word(&act, &u), word(&act, &v));
                let p: Vec<usize> = p.into_iter().map(|x| x % d).collect();
                let uv = gens.mul(&u, &v);
                let (vp, v_sec) = act.act(&v, &p);
                let (uvp, u_sec) = act.act(&u, &vp);
                let (direct, uv_sec) = act.act(&uv, &p);
                prop_assert_eq!(&direct, &uvp);
                prop_assert_eq!(
                    gens.normalize(uv_sec),
                    gens.normalize(gens.mul(&u_sec, &v_sec))
                );
                let (back, inv_sec) = act.act(&gens.inverse(&u), &uvp);
                prop_assert_eq!(&back, &vp);
                prop_assert_eq!(gens.normalize(inv_sec), gens.inverse(&u_sec));
                Ok(())
            })
            .unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn transitive_fixtures_have_cyclic_h0() {
    for (name, doc) in fixture_docs() {
        if let Body::Automaton(a) = &doc.body {
            let r = selfsim_homology::pipeline::compute(&doc, 0).unwrap();
            let want = FinGenAbGroup::cyclic(a.action.degree() as i64 - 1);
            assert_eq!(r.h_group(0), Some(&want), "{name}");
        }
    }
}

#[test]
fn orbit_count_matches_k1_rank() {
    let mut seen = 0;
    for (name, doc) in fixture_docs() {
        if let Body::Multispinal(m) = &doc.body {
            if m.automorphisms().len() != 1 {
                continue;
            }
            let k = multispinal_k_engine(m).unwrap();
            let k1 = k.k1.group().unwrap().clone();
            assert!(k1.is_free(), "{name}");
            assert_eq!(k1.free_rank(), sunic_orbit_count(m).unwrap(), "{name}");
            seen += 1;
        }
    }
    assert!(seen >= 4);
}

fn katsura_pair(n: usize) -> impl Strategy<Value = (IntMatrix, IntMatrix)> {
    (
        prop::collection::vec(0i64..=3, n * n),
        prop::collection::vec(-3i64..=3, n * n),
        prop::collection::vec(any::<bool>(), n),
    )
        .prop_map(move |(a, b, zero_row)| {
            let mut am = IntMatrix::zeros(n, n);
            let mut bm = IntMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    // Sparse rows, with an occasional source.
                    let x = if zero_row[i] && i % 3 == 0 {
                        0
                    } else {
                        (a[i * n + j] - 1).max(0)
                    };
                    am[(i, j)] = BigInt::from(x);
                    if x != 0 {
                        bm[(i, j)] = BigInt::from(b[i * n + j]);
                    }
                }
            }
            (am, bm)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn katsura_without_b_degenerates_to_the_graph((a, _) in katsura_pair(6)) {
        let k = KatsuraInput::new(a.clone(), IntMatrix::zeros(6, 6)).unwrap();
        let g = GraphInput::new(a, None).unwrap();
        let kr = katsura_engine(&k, 2).unwrap();
        let gr = graph_engine(&g, 2).unwrap();
        prop_assert_eq!(kr.h(0), gr.h(0));
        // With B = 0 the second boundary is the inclusion of the regular
        // vertices, whose cokernel is free on the sources.
        let sources = FinGenAbGroup::free(k.a.rows() - k.nonzero_rows().len());
        prop_assert_eq!(kr.h_group(1), Some(&gr.h_group(1).unwrap().direct_sum(&sources)));
        prop_assert_eq!(kr.h_group(2), Some(&FinGenAbGroup::trivial()));
    }

    #[test]
    fn katsura_ranks_through_transposes((a, b) in katsura_pair(6)) {
        let k = KatsuraInput::new(a, b).unwrap();
        let (da, db) = k.boundaries();
        let r = katsura_engine(&k, 2).unwrap();
        let h1 = FinGenAbGroup::free(da.cols() - rank(&da)).direct_sum(&cokernel_by_transpose(&db));
        prop_assert_eq!(r.h_group(0), Some(&cokernel_by_transpose(&da)));
        prop_assert_eq!(r.h_group(1), Some(&h1));
        prop_assert_eq!(r.h_group(2), Some(&FinGenAbGroup::free(db.cols() - rank(&db))));
    }
}

fn dilation(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-3i64..=3, n * n)
        .prop_map(move |v| {
            IntMatrix::from_vec(n, n, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
        .prop_filter("|det| >= 2", |m| {
            determinant(m).unwrap().abs() >= BigRational::from_integer(2.into())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn free_abelian_h0_is_cyclic(m in prop_oneof![dilation(2), dilation(3)]) {
        let d = determinant(&m).unwrap().abs().to_integer();
        let a = selfsim_homology::linalg::inverse(&m).unwrap().unwrap();
        let f = FreeAbelianInput::new(a, d.clone()).unwrap();
        let (r, _) = free_abelian_engine(&f, true, 1, Evaluation::Sequential).unwrap();
        prop_assert_eq!(r.h_group(0), Some(&FinGenAbGroup::cyclic(d - BigInt::one())));
    }
}
