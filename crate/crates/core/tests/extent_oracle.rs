//! Extent analysis checked against two independent routes:
//! an exact-rational evaluation of the whole row-sum / extent / possibility /
//! normalization chain, and a brute-force sup-min grid evaluation of the
//! degree of possibility straight from its definition.

use fahp_core::extent::{extent_trace, possibility, synthetic_extents};
use fahp_core::fuzzy::{FuzzyMatrix, RawTfn, Tfn};
use fahp_core::extent_weights;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

type Q = BigRational;

/// Exact rational for a decimal literal such as "0.143".
fn dec(s: &str) -> Q {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int}{frac}").parse().unwrap();
    let scale: BigInt = num_traits::pow(BigInt::from(10), frac.len());
    Q::new(digits, scale)
}

struct OracleTfn(Q, Q, Q);

fn oracle_possibility(a: &OracleTfn, b: &OracleTfn) -> Q {
    if a.1 >= b.1 {
        Q::one()
    } else if b.0 >= a.2 {
        Q::zero()
    } else {
        (&b.0 - &a.2) / ((&a.1 - &a.2) - (&b.1 - &b.0))
    }
}

/// Row sums, extents, possibility minima and normalized weights, all exact.
fn oracle_weights(cells: &[Vec<[&str; 3]>]) -> (Vec<OracleTfn>, Vec<Q>) {
    let n = cells.len();
    let q: Vec<Vec<OracleTfn>> = cells
        .iter()
        .map(|row| row.iter().map(|c| OracleTfn(dec(c[0]), dec(c[1]), dec(c[2]))).collect())
        .collect();
    let rows: Vec<OracleTfn> = q
        .iter()
        .map(|row| {
            row.iter().fold(OracleTfn(Q::zero(), Q::zero(), Q::zero()), |acc, c| {
                OracleTfn(acc.0 + &c.0, acc.1 + &c.1, acc.2 + &c.2)
            })
        })
        .collect();
    let total = rows.iter().fold(OracleTfn(Q::zero(), Q::zero(), Q::zero()), |acc, c| {
        OracleTfn(acc.0 + &c.0, acc.1 + &c.1, acc.2 + &c.2)
    });
    let extents: Vec<OracleTfn> = rows
        .iter()
        .map(|r| OracleTfn(&r.0 / &total.2, &r.1 / &total.1, &r.2 / &total.0))
        .collect();
    let raw: Vec<Q> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&k| k != i)
                .map(|k| oracle_possibility(&extents[i], &extents[k]))
                .min()
                .unwrap_or_else(Q::one)
        })
        .collect();
    let sum: Q = raw.iter().sum();
    let weights = raw.iter().map(|r| r / &sum).collect();
    (extents, weights)
}

fn to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap()
}

fn engine_matrix(cells: &[Vec<[&str; 3]>]) -> FuzzyMatrix {
    let raw: Vec<Vec<RawTfn>> = cells
        .iter()
        .map(|row| row.iter().map(|c| [c[0].parse().unwrap(), c[1].parse().unwrap(), c[2].parse().unwrap()]).collect())
        .collect();
    FuzzyMatrix::validate(&raw).unwrap()
}

const ONE: [&str; 3] = ["1", "1", "1"];

fn criteria_judgments() -> Vec<Vec<[&'static str; 3]>> {
    vec![
        vec![ONE, ["0.14", "0.2", "0.33"], ["0.2", "0.33", "1"], ONE],
        vec![["3", "5", "7"], ONE, ONE, ["5", "7", "9"]],
        vec![["1", "3", "5"], ONE, ONE, ["5", "7", "9"]],
        vec![ONE, ["0.11", "0.143", "0.2"], ["0.11", "0.143", "0.2"], ONE],
    ]
}

fn reliability_judgments() -> Vec<Vec<[&'static str; 3]>> {
    vec![
        vec![ONE, ["0.14", "0.2", "0.33"], ["0.14", "0.2", "0.33"]],
        vec![["3", "5", "7"], ONE, ["1", "3", "5"]],
        vec![["3", "5", "7"], ["0.2", "0.33", "1"], ONE],
    ]
}

#[test]
fn criteria_weights_match_exact_oracle() {
    let (_, oracle) = oracle_weights(&criteria_judgments());
    let oracle: Vec<f64> = oracle.iter().map(to_f64).collect();
    // frozen from the exact evaluation
    let frozen = [0.0, 0.5331148553158307, 0.46688514468416936, 0.0];
    for (o, f) in oracle.iter().zip(frozen) {
        assert!((o - f).abs() < 1e-15, "oracle drifted: {o} vs {f}");
    }
    let engine = extent_weights(&engine_matrix(&criteria_judgments())).unwrap();
    for (k, o) in oracle.iter().enumerate() {
        assert!((engine.get(k) - o).abs() <= 1e-9, "w[{k}] = {} vs oracle {o}", engine.get(k));
    }
}

#[test]
fn reliability_alternative_weights_match_exact_oracle() {
    let (_, oracle) = oracle_weights(&reliability_judgments());
    let frozen = [0.0, 0.5548621263437159, 0.44513787365628416];
    let engine = extent_weights(&engine_matrix(&reliability_judgments())).unwrap();
    for k in 0..3 {
        assert!((to_f64(&oracle[k]) - frozen[k]).abs() < 1e-15);
        assert!((engine.get(k) - frozen[k]).abs() <= 1e-9);
    }
}

#[test]
fn criteria_sums_and_extents() {
    let s = synthetic_extents(&engine_matrix(&criteria_judgments())).unwrap();
    let expect_rows = [(2.34, 2.53, 3.33), (10.0, 14.0, 18.0), (8.0, 12.0, 16.0), (2.22, 2.286, 2.4)];
    for (r, e) in s.row_sums.iter().zip(expect_rows) {
        assert!((r.l() - e.0).abs() < 5e-4 && (r.m() - e.1).abs() < 5e-4 && (r.u() - e.2).abs() < 5e-4, "{r}");
    }
    assert!((s.total.l() - 22.56).abs() < 1e-9);
    assert!((s.total.m() - 30.816).abs() < 1e-9);
    assert!((s.total.u() - 39.73).abs() < 1e-9);

    let (oracle_ext, _) = oracle_weights(&criteria_judgments());
    for (e, o) in s.extents.iter().zip(&oracle_ext) {
        assert!((e.l() - to_f64(&o.0)).abs() < 1e-12);
        assert!((e.m() - to_f64(&o.1)).abs() < 1e-12);
        assert!((e.u() - to_f64(&o.2)).abs() < 1e-12);
    }
    let expected = [
        (0.0589, 0.0821, 0.1476),
        (0.2517, 0.4543, 0.7979),
        (0.2014, 0.3894, 0.7092),
        (0.0559, 0.0742, 0.1064),
    ];
    for (e, x) in s.extents.iter().zip(expected) {
        assert!((e.l() - x.0).abs() < 1e-4 && (e.m() - x.1).abs() < 1e-4 && (e.u() - x.2).abs() < 1e-4, "{e}");
    }
}

/// Triangular membership written out independently of the library.
fn mu(t: (f64, f64, f64), x: f64) -> f64 {
    let (l, m, u) = t;
    if x < l || x > u {
        0.0
    } else if x <= m {
        if m == l { 1.0 } else { (x - l) / (m - l) }
    } else if u == m {
        1.0
    } else {
        (u - x) / (u - m)
    }
}

/// `sup_{x >= y} min(mu_a(x), mu_b(y))` on a grid. For each grid x the inner
/// sup over grid y <= x is the running maximum of mu_b. The peak cell is then
/// re-gridded a few times to reach the requested resolution.
fn grid_possibility(a: (f64, f64, f64), b: (f64, f64, f64), resolution: f64) -> f64 {
    let lo = a.0.min(b.0);
    let hi = a.2.max(b.2);
    let coarse = 4000usize;
    let mut best = 0.0f64;
    let mut best_x = lo;
    let mut running = 0.0f64;
    let step = (hi - lo) / coarse as f64;
    let mut xs: Vec<f64> = (0..=coarse).map(|k| lo + step * k as f64).collect();
    xs.extend([a.0, a.1, a.2, b.0, b.1, b.2]);
    xs.sort_by(f64::total_cmp);
    for &x in &xs {
        running = running.max(mu(b, x));
        let v = mu(a, x).min(running);
        if v > best {
            best = v;
            best_x = x;
        }
    }
    // zoom: the objective is quasi-concave in x, so the maximum lies within a
    // coarse step of the best grid point
    let mut half = step;
    while half > resolution {
        let fine = 200usize;
        let (from, to) = (best_x - half, best_x + half);
        let h = (to - from) / fine as f64;
        for k in 0..=fine {
            let x = from + h * k as f64;
            let sup_b = if x >= b.1 { 1.0 } else { mu(b, x) };
            let v = mu(a, x).min(sup_b);
            if v > best {
                best = v;
                best_x = x;
            }
        }
        half = h;
    }
    best
}

#[test]
fn criteria_possibilities_against_grid() {
    let s = synthetic_extents(&engine_matrix(&criteria_judgments())).unwrap().extents;
    let tup = |t: Tfn| (t.l(), t.m(), t.u());
    let cases = [(0, 1, 0.0), (2, 1, 0.8757684015531229), (3, 0, 0.857085181557457)];
    for (i, k, frozen) in cases {
        let closed = possibility(s[i], s[k]);
        let grid = grid_possibility(tup(s[i]), tup(s[k]), 1e-5);
        assert!((closed - frozen).abs() < 1e-12, "V(S{} >= S{}) = {closed}", i + 1, k + 1);
        assert!((closed - grid).abs() < 1e-3, "closed {closed} vs grid {grid}");
    }
}

#[test]
fn alternative_closed_form_misses_sup_min() {
    // The alternative closed form (l1 - u2) / ((m2 - l2) - (m1 - l1)) misses
    // the sup-min value on the case-study extents.
    let s = synthetic_extents(&engine_matrix(&criteria_judgments())).unwrap().extents;
    let (n1, n2) = (s[1], s[2]);
    let other = (n1.l() - n2.u()) / ((n2.m() - n2.l()) - (n1.m() - n1.l()));
    let grid = grid_possibility((n2.l(), n2.m(), n2.u()), (n1.l(), n1.m(), n1.u()), 1e-5);
    assert!((other - grid).abs() > 0.1, "other form {other}, grid {grid}");
    assert!((possibility(n2, n1) - grid).abs() < 1e-3);
}

fn arb_tfn() -> impl Strategy<Value = Tfn> {
    prop::array::uniform3(0.01f64..10.0).prop_map(|mut v| {
        v.sort_by(f64::total_cmp);
        Tfn::new(v[0], v[1], v[2]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn closed_form_matches_definition(a in arb_tfn(), b in arb_tfn()) {
        let closed = possibility(a, b);
        let grid = grid_possibility((a.l(), a.m(), a.u()), (b.l(), b.m(), b.u()), 1e-7);
        prop_assert!((closed - grid).abs() <= 1e-3, "{a} >= {b}: closed {closed}, grid {grid}");
        prop_assert!((0.0..=1.0).contains(&closed));
        prop_assert_eq!(possibility(a, b).max(possibility(b, a)), 1.0);
        prop_assert_eq!(possibility(a, a), 1.0);
    }
}

fn arb_fuzzy_matrix() -> impl Strategy<Value = FuzzyMatrix> {
    (2usize..7).prop_flat_map(|n| {
        prop::collection::vec((1u32..=9, any::<bool>()), n * (n - 1) / 2).prop_map(move |cells| {
            let upper: Vec<Tfn> = cells
                .into_iter()
                .map(|(k, r)| fahp_core::scale_to_tfn(k, r).unwrap())
                .collect();
            FuzzyMatrix::from_upper(n, &upper).unwrap()
        })
    })
}

fn arb_perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn weights_sum_to_one(m in arb_fuzzy_matrix()) {
        let w = extent_weights(&m).unwrap();
        prop_assert!((w.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        prop_assert!(w.weights().iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn scaling_cells_changes_nothing(m in arb_fuzzy_matrix(), k in 0.05f64..20.0) {
        let a = extent_trace(&m).unwrap();
        let b = extent_trace(&m.scaled(k)).unwrap();
        for (x, y) in a.extents.extents.iter().zip(&b.extents.extents) {
            prop_assert!((x.l() - y.l()).abs() <= 1e-9 && (x.m() - y.m()).abs() <= 1e-9 && (x.u() - y.u()).abs() <= 1e-9);
        }
        for (x, y) in a.weights.weights().iter().zip(b.weights.weights()) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn permutation_equivariant((m, perm) in arb_fuzzy_matrix().prop_flat_map(|m| { let n = m.order(); (Just(m), arb_perm(n)) })) {
        let w = extent_weights(&m).unwrap();
        let wp = extent_weights(&m.permuted(&perm)).unwrap();
        for (k, &p) in perm.iter().enumerate() {
            prop_assert!((wp.get(k) - w.get(p)).abs() <= 1e-9);
        }
    }

    #[test]
    fn possibility_matrix_shape(m in arb_fuzzy_matrix()) {
        let t = extent_trace(&m).unwrap();
        let pm = &t.possibility;
        for i in 0..pm.order() {
            prop_assert_eq!(pm.get(i, i), 1.0);
            for j in 0..pm.order() {
                prop_assert!((0.0..=1.0).contains(&pm.get(i, j)));
                prop_assert_eq!(pm.get(i, j).max(pm.get(j, i)), 1.0);
            }
        }
    }
}
