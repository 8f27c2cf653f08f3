use ctp_core::paths::{
    enumerate_paths_oracle, enumerate_paths_oracle_limited, jr_triangle, sr_triangle, staircase_alpha, AffinePattern,
    AlphaWeights, BetaWeights, Depth, Fallback, PathWeights,
};
use ctp_core::{MultiPoly, Registry};
use proptest::prelude::*;

fn ints(v: &[i64]) -> Vec<MultiPoly> {
    v.iter().map(|&c| MultiPoly::int(c)).collect()
}

#[test]
fn stieltjes_rogers_examples() {
    let s = sr_triangle(&AlphaWeights::all_ones(1), 5).unwrap();
    assert_eq!(s.col(0), ints(&[1, 1, 2, 5, 14, 42]));
    let s = sr_triangle(&AlphaWeights::all_ones(2), 4).unwrap();
    assert_eq!(s.col(0), ints(&[1, 1, 3, 12, 55]));

    let mut reg = Registry::new();
    let a = reg.var("a");
    let b = reg.var("b");
    let w = AlphaWeights::pattern(1, AffinePattern::periodic(vec![a.clone(), b.clone()]));
    let s = sr_triangle(&w, 2).unwrap();
    assert_eq!(s.get(2, 0), &(&(&a * &a) + &(&a * &b)));
    assert!(s.is_lower_triangular());
}

#[test]
fn missing_weight_is_reported() {
    let w = AlphaWeights::from_list(1, ints(&[1, 1]));
    match sr_triangle(&w, 3) {
        Err(ctp_core::Error::MissingWeight(msg)) => assert!(msg.contains('3'), "{msg}"),
        other => panic!("unexpected {other:?}"),
    }
    let w = BetaWeights::new(Depth::Finite(1), Fallback::Error);
    assert!(jr_triangle(&w, 2).is_err());
}

#[test]
fn jacobi_rogers_examples() {
    let j = jr_triangle(&BetaWeights::all_ones(Depth::Finite(1)), 5).unwrap();
    assert_eq!(j.col(0), ints(&[1, 1, 2, 4, 9, 21]));

    let w = BetaWeights::jacobi(Fallback::One, Fallback::Zero, Fallback::One);
    let j = jr_triangle(&w, 6).unwrap();
    assert_eq!(j.col(0), ints(&[1, 0, 1, 0, 2, 0, 5]));

    // Unbounded falls with unit weights: Lukasiewicz paths, counted by Catalan.
    let w = BetaWeights::all_ones(Depth::Unbounded);
    let j = jr_triangle(&w, 6).unwrap();
    assert_eq!(j.col(0), ints(&[1, 1, 2, 5, 14, 42, 132]));
    for n in 0..=5 {
        let o = enumerate_paths_oracle(PathWeights::Lukasiewicz(&w), n, 0).unwrap();
        assert_eq!(&o, j.get(n, 0));
    }
}

#[test]
fn oracle_examples() {
    let ones = AlphaWeights::all_ones(1);
    assert_eq!(
        enumerate_paths_oracle(PathWeights::Dyck(&ones), 2, 0).unwrap(),
        MultiPoly::int(2)
    );
    let luka = BetaWeights::all_ones(Depth::Finite(1));
    assert_eq!(
        enumerate_paths_oracle(PathWeights::Lukasiewicz(&luka), 3, 0).unwrap(),
        MultiPoly::int(4)
    );
    let mut reg = Registry::new();
    let s = reg.var("s");
    let w = AlphaWeights::from_list(3, vec![s.clone()]);
    assert_eq!(enumerate_paths_oracle(PathWeights::Dyck(&w), 1, 0).unwrap(), s);

    let big = AlphaWeights::all_ones(1);
    assert!(matches!(
        enumerate_paths_oracle_limited(PathWeights::Dyck(&big), 8, 0, 100),
        Err(ctp_core::Error::Guard(_))
    ));
}

#[test]
fn staircase_examples() {
    let mut reg = Registry::new();
    let x = reg.var("x");
    let w = staircase_alpha(1, &[MultiPoly::zero(), x.clone()], &MultiPoly::one()).unwrap();
    let want = vec![
        MultiPoly::one(),
        x.clone(),
        MultiPoly::one(),
        x.scale(&ctp_core::poly::rat(2)),
        MultiPoly::one(),
        x.scale(&ctp_core::poly::rat(3)),
    ];
    assert_eq!(w.list(6).unwrap(), want);

    let y = reg.var("y");
    let x0 = reg.var("x0");
    let x1 = reg.var("x1");
    let x2 = reg.var("x2");
    let w = staircase_alpha(2, &[x0.clone(), x1.clone(), x2.clone()], &y).unwrap();
    let two = ctp_core::poly::rat(2);
    assert_eq!(
        w.list(6).unwrap(),
        vec![
            y.clone(),
            x1.clone(),
            x2.clone(),
            &y + &x0,
            x1.scale(&two),
            x2.scale(&two)
        ]
    );

    let w = staircase_alpha(1, &[x.clone(), x.clone()], &x).unwrap();
    let k = |c: i64| x.scale(&ctp_core::poly::rat(c));
    assert_eq!(w.list(6).unwrap(), vec![k(1), k(1), k(2), k(2), k(3), k(3)]);

    assert!(staircase_alpha(2, std::slice::from_ref(&x), &y).is_err());
}

#[test]
fn homogeneous_of_degree_n() {
    let mut reg = Registry::new();
    let w = AlphaWeights::symbolic(&mut reg, 2, "a", 20);
    let s = sr_triangle(&w, 5).unwrap();
    for n in 0..=5 {
        for (m, _) in s.get(n, 0).terms() {
            assert_eq!(m.degree() as usize, n);
        }
    }
}

#[test]
fn catalan_stieltjes_recurrence() {
    let mut reg = Registry::new();
    let n = 7;
    let mut w = BetaWeights::new(Depth::Finite(1), Fallback::Error);
    let (mut d, mut g, mut b) = (vec![], vec![], vec![]);
    for i in 0..=n {
        let di = reg.var(&format!("d{i}"));
        let gi = reg.var(&format!("g{i}"));
        w.set(-1, i, di.clone()).unwrap();
        w.set(0, i, gi.clone()).unwrap();
        d.push(di);
        g.push(gi);
        if i >= 1 {
            let bi = reg.var(&format!("b{i}"));
            w.set(1, i, bi.clone()).unwrap();
            b.push(bi);
        } else {
            b.push(MultiPoly::zero());
        }
    }
    let j = jr_triangle(&w, n).unwrap();
    for r in 1..=n {
        for k in 0..=r {
            let mut want = &g[k] * j.get(r - 1, k);
            if k >= 1 {
                want += &d[k - 1] * j.get(r - 1, k - 1);
            }
            if k < r - 1 {
                want += &b[k + 1] * j.get(r - 1, k + 1);
            }
            assert_eq!(j.get(r, k), &want, "entry ({r},{k})");
        }
    }
}

#[test]
fn rise_weights_fixed_above_order_one() {
    let mut w = BetaWeights::all_ones(Depth::Finite(2));
    assert!(w.set(-1, 0, MultiPoly::int(2)).is_err());
    assert!(w.set(3, 4, MultiPoly::one()).is_err());
    assert!(w.set(2, 1, MultiPoly::one()).is_err());
    assert_eq!(w.rise(5).unwrap(), MultiPoly::one());
}

fn small_weights() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..4, 64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sr_matches_oracle(m in 1usize..=3, vals in small_weights()) {
        let nmax = 7;
        let w = AlphaWeights::from_list(m, ints(&vals));
        let s = sr_triangle(&w, nmax).unwrap();
        for n in 0..=nmax {
            for k in 0..=n {
                let o = enumerate_paths_oracle(PathWeights::Dyck(&w), n, k).unwrap();
                prop_assert_eq!(&o, s.get(n, k));
            }
        }
    }

    #[test]
    fn jr_matches_oracle(m in 1usize..=3, vals in small_weights()) {
        let nmax = 7;
        let mut w = BetaWeights::new(Depth::Finite(m), Fallback::Error);
        let mut it = vals.iter().cycle();
        let lowest = if m == 1 { -1 } else { 0 };
        for l in lowest..=(m as i64) {
            for h in (l.max(0) as usize)..=nmax {
                w.set(l, h, MultiPoly::int(*it.next().unwrap())).unwrap();
            }
        }
        let j = jr_triangle(&w, nmax).unwrap();
        for n in 0..=nmax {
            for k in 0..=n {
                let o = enumerate_paths_oracle(PathWeights::Lukasiewicz(&w), n, k).unwrap();
                prop_assert_eq!(&o, j.get(n, k));
            }
        }
    }
}

#[test]
fn symbolic_weights_match_oracle() {
    for m in 1..=3usize {
        let mut reg = Registry::new();
        let nmax = if m == 1 { 5 } else { 3 };
        let w = AlphaWeights::symbolic(&mut reg, m, "a", (m + 1) * nmax);
        let s = sr_triangle(&w, nmax).unwrap();
        for n in 0..=nmax {
            for k in 0..=n {
                assert_eq!(
                    &enumerate_paths_oracle(PathWeights::Dyck(&w), n, k).unwrap(),
                    s.get(n, k)
                );
            }
        }
        let b = BetaWeights::symbolic(&mut reg, Depth::Finite(m), "b", 5);
        let j = jr_triangle(&b, 5).unwrap();
        for n in 0..=5 {
            for k in 0..=n {
                assert_eq!(
                    &enumerate_paths_oracle(PathWeights::Lukasiewicz(&b), n, k).unwrap(),
                    j.get(n, k)
                );
            }
        }
    }
}
