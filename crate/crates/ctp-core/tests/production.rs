use ctp_core::matrix::int_matrix;
use ctp_core::paths::{jr_triangle, sr_triangle, staircase_alpha, BetaWeights, Depth, Fallback};
use ctp_core::poly::rat;
use ctp_core::production::{
    binomial_matrix, conjugate_by_bq, materialize_block, materialize_product, output_matrix, output_matrix_of,
    row_gen_matrix, row_polys, staircase_production, tridiagonal_bands, Band, BlockSpec, ExplicitBlock, ProductionSpec,
};
use ctp_core::tp::{check_tp_order, hankel_matrix};
use ctp_core::{MultiPoly, PolyMatrix, PowerSeries, Registry};
use proptest::prelude::*;

fn kk(n: usize) -> ctp_core::Rational {
    rat(n as i64)
}

fn pascal(n: usize) -> PolyMatrix {
    int_matrix(n, n, |i, j| {
        if j > i {
            0
        } else {
            (0..j).fold(1i64, |acc, t| acc * (i - t) as i64 / (t as i64 + 1))
        }
    })
}

struct Syms {
    a: MultiPoly,
    b: MultiPoly,
    c: MultiPoly,
    u: MultiPoly,
    v: MultiPoly,
    lambda: MultiPoly,
    q: MultiPoly,
}

fn syms(reg: &mut Registry) -> Syms {
    Syms {
        a: reg.var("a"),
        b: reg.var("b"),
        c: reg.var("c"),
        u: reg.var("u"),
        v: reg.var("v"),
        lambda: reg.var("lambda"),
        q: reg.var("q"),
    }
}

#[test]
fn block_examples() {
    let mut reg = Registry::new();
    let s = syms(&mut reg);
    let l = materialize_block(&BlockSpec::lower_bi(s.a.clone(), s.b.clone(), s.c.clone()), 3).unwrap();
    let z = MultiPoly::zero();
    let two = rat(2);
    let want = PolyMatrix::from_rows(vec![
        vec![s.b.clone(), z.clone(), z.clone()],
        vec![s.c.clone(), &s.a + &s.b, z.clone()],
        vec![z.clone(), s.c.scale(&two), &s.a.scale(&two) + &s.b],
    ])
    .unwrap();
    assert_eq!(l, want);

    let spec = BlockSpec::tri_j(s.a.clone(), s.b.clone(), s.u.clone(), s.v.clone(), s.lambda.clone());
    let j = materialize_block(&spec, 2).unwrap();
    let uv = &s.u + &s.v;
    assert_eq!(j.get(0, 1), &uv);
    assert_eq!(j.get(0, 0), &(&s.b + &(&s.lambda * &uv)));
    assert_eq!(j.get(1, 0), &(&s.lambda * &(&s.a + &(&s.lambda * &s.u))));

    let g = materialize_block(&BlockSpec::GammaToeplitz(PowerSeries::from_ints(&[1, 1], 4)), 3).unwrap();
    assert_eq!(g, PolyMatrix::from_int_rows(&[&[1, 0, 0], &[1, 1, 0], &[0, 2, 1]]));
    assert!(materialize_block(&BlockSpec::GammaToeplitz(PowerSeries::from_ints(&[2, 1], 4)), 3).is_err());

    let dense = BlockSpec::Explicit(ExplicitBlock::Dense(PolyMatrix::identity(2)));
    assert!(materialize_block(&dense, 3).is_err());
    let bands = BlockSpec::Explicit(ExplicitBlock::Bands(vec![Band {
        offset: -1,
        base: MultiPoly::one(),
        step: MultiPoly::one(),
    }]));
    assert_eq!(
        materialize_block(&bands, 3).unwrap(),
        PolyMatrix::from_int_rows(&[&[0, 0, 0], &[2, 0, 0], &[0, 3, 0]])
    );
}

#[test]
fn product_examples() {
    let mut reg = Registry::new();
    let s = syms(&mut reg);
    let single = BlockSpec::upper_bi(s.a.clone(), s.b.clone(), s.u.clone(), s.v.clone());
    assert_eq!(
        materialize_product(&ProductionSpec::single(single.clone()), 5).unwrap(),
        materialize_block(&single, 5).unwrap()
    );
    assert!(ProductionSpec::new(vec![]).is_err());

    // L(a,b,c) U(x,y,u,v) is tridiagonal with quadratic diagonal.
    let x = reg.var("x");
    let y = reg.var("y");
    let spec = ProductionSpec::new(vec![
        BlockSpec::lower_bi(s.a.clone(), s.b.clone(), s.c.clone()),
        BlockSpec::upper_bi(x.clone(), y.clone(), s.u.clone(), s.v.clone()),
    ])
    .unwrap();
    let p = materialize_product(&spec, 5).unwrap();
    let bands = tridiagonal_bands(&p).unwrap();
    for k in 0..5 {
        let k2 = kk(k * k);
        let gamma = &(&(&(&s.a * &x) + &(&s.c * &s.u)).scale(&k2)
            + &(&(&(&s.a * &y) + &(&s.b * &x)) + &(&s.c * &s.v)).scale(&kk(k)))
            + &(&s.b * &y);
        assert_eq!(bands.gamma[k], gamma, "gamma_{k}");
        if k + 1 < 5 {
            let diag = &s.a.scale(&kk(k)) + &s.b;
            assert_eq!(bands.delta[k], &diag * &(&s.u.scale(&kk(k + 1)) + &s.v));
            let sub = &s.c.scale(&kk(k + 1)) * &(&x.scale(&kk(k)) + &y);
            assert_eq!(bands.beta[k], sub);
        }
    }

    let f = PowerSeries::from_ints(&[1, 2, -1, 3], 8);
    let g = PowerSeries::from_ints(&[1, -1, 0, 5, 2], 8);
    let prod = ProductionSpec::new(vec![
        BlockSpec::GammaToeplitz(f.clone()),
        BlockSpec::GammaToeplitz(g.clone()),
    ])
    .unwrap();
    assert_eq!(
        materialize_product(&prod, 8).unwrap(),
        materialize_block(&BlockSpec::GammaToeplitz(f.mul(&g)), 8).unwrap()
    );
}

#[test]
fn output_examples() {
    let p = BlockSpec::upper_bi(MultiPoly::zero(), MultiPoly::one(), MultiPoly::zero(), MultiPoly::one());
    let a = output_matrix_of(&ProductionSpec::single(p), 6).unwrap();
    assert_eq!(a, pascal(7));

    // Contracted Catalan S-fraction: gamma = 1, 2, 2, ...; rises and falls 1.
    let mut w = BetaWeights::jacobi(
        Fallback::One,
        Fallback::Pattern(ctp_core::paths::AffinePattern::constant(MultiPoly::int(2))),
        Fallback::One,
    );
    w.set(0, 0, MultiPoly::one()).unwrap();
    let a = output_matrix_of(&ProductionSpec::single(BlockSpec::BandedHessenberg(w)), 6).unwrap();
    let cat = sr_triangle(&ctp_core::paths::AlphaWeights::all_ones(1), 6).unwrap();
    assert_eq!(a.col(0), cat.col(0));

    let zero = PolyMatrix::zeros(5, 5);
    let a = output_matrix(&zero, 4).unwrap();
    let mut want = PolyMatrix::zeros(5, 5);
    want.set(0, 0, MultiPoly::one());
    assert_eq!(a, want);

    let tri = materialize_block(
        &BlockSpec::upper_bi(MultiPoly::zero(), MultiPoly::one(), MultiPoly::zero(), MultiPoly::one()),
        3,
    )
    .unwrap();
    assert!(matches!(
        output_matrix(&tri, 6),
        Err(ctp_core::Error::Truncation { .. })
    ));
}

#[test]
fn binomial_examples() {
    assert_eq!(binomial_matrix(&MultiPoly::one(), 3), pascal(3));
    assert_eq!(binomial_matrix(&MultiPoly::zero(), 4), PolyMatrix::identity(4));
    let mut reg = Registry::new();
    let q = reg.var("q");
    let prod = binomial_matrix(&q, 6).try_mul(&binomial_matrix(&-&q, 6)).unwrap();
    assert_eq!(prod, PolyMatrix::identity(6));
}

#[test]
fn conjugation_lemmas() {
    let mut reg = Registry::new();
    let s = syms(&mut reg);
    let n = 10;

    let l = ProductionSpec::single(BlockSpec::lower_bi(s.a.clone(), s.b.clone(), s.c.clone()));
    let got = conjugate_by_bq(&l, &s.q, n).unwrap();
    let want = BlockSpec::lower_bi(s.a.clone(), s.b.clone(), &(&s.q * &s.a) + &s.c);
    assert_eq!(got, materialize_block(&want, n).unwrap());

    let j = ProductionSpec::single(BlockSpec::tri_j(
        s.a.clone(),
        s.b.clone(),
        s.u.clone(),
        s.v.clone(),
        s.lambda.clone(),
    ));
    let got = conjugate_by_bq(&j, &s.q, n).unwrap();
    let want = BlockSpec::tri_j(s.a.clone(), s.b.clone(), s.u.clone(), s.v.clone(), &s.lambda + &s.q);
    assert_eq!(got, materialize_block(&want, n).unwrap());

    // Upper bidiagonal: the lambda = 0 case of the tridiagonal block.
    let u = ProductionSpec::single(BlockSpec::upper_bi(s.a.clone(), s.b.clone(), s.u.clone(), s.v.clone()));
    let got = conjugate_by_bq(&u, &s.q, n).unwrap();
    for k in 0..n {
        let diag = &(&(&s.q.scale(&rat(2)) * &s.u) + &s.a).scale(&kk(k)) + &(&s.b + &(&s.q * &(&s.u + &s.v)));
        assert_eq!(got.get(k, k), &diag);
        if k + 1 < n {
            assert_eq!(got.get(k, k + 1), &(&s.u.scale(&kk(k + 1)) + &s.v));
        }
        if k >= 1 {
            assert_eq!(got.get(k, k - 1), &(&s.q * &(&s.a + &(&s.q * &s.u))).scale(&kk(k)));
        }
    }

    let f = PowerSeries::new(vec![MultiPoly::one(), s.a.clone(), s.b.clone(), s.c.clone()], n);
    let g = ProductionSpec::single(BlockSpec::GammaToeplitz(f.clone()));
    let got = conjugate_by_bq(&g, &s.q, n).unwrap();
    assert_eq!(got, materialize_block(&BlockSpec::GammaToeplitz(f), n).unwrap());
}

#[test]
fn row_generating_examples() {
    let mut reg = Registry::new();
    let q = reg.var("q");
    assert_eq!(
        row_gen_matrix(&PolyMatrix::identity(5), &q).unwrap(),
        binomial_matrix(&q, 5)
    );
    let m = row_gen_matrix(&pascal(6), &q).unwrap();
    let one_q = &MultiPoly::one() + &q;
    for n in 0..6 {
        assert_eq!(m.get(n, 0), &one_q.pow(n as u32));
    }
    assert_eq!(row_polys(&pascal(6), &q), m.col(0));

    let x = reg.var("x");
    let w = staircase_alpha(1, &[MultiPoly::zero(), x.clone()], &MultiPoly::one()).unwrap();
    let sr = sr_triangle(&w, 5).unwrap();
    let m = row_gen_matrix(&sr, &MultiPoly::zero()).unwrap();
    assert_eq!(m.col(0), sr.col(0));
    assert!(row_gen_matrix(&PolyMatrix::from_int_rows(&[&[1, 1], &[0, 1]]), &q).is_err());
}

#[test]
fn output_satisfies_shift_identity() {
    let mut reg = Registry::new();
    let s = syms(&mut reg);
    let spec = ProductionSpec::new(vec![
        BlockSpec::lower_bi(s.a.clone(), s.b.clone(), s.c.clone()),
        BlockSpec::tri_j(s.a.clone(), s.b.clone(), s.u.clone(), s.v.clone(), s.lambda.clone()),
    ])
    .unwrap();
    let nmax = 6;
    let size = nmax + 1 + spec.upper_bandwidth();
    let p = materialize_product(&spec, size).unwrap();
    let a = output_matrix(&p, nmax).unwrap();
    // Row n+1 of A equals row n of A P on the first nmax+1 columns.
    for n in 0..nmax {
        for k in 0..=nmax {
            let mut acc = MultiPoly::zero();
            for i in 0..=n {
                acc += a.get(n, i) * p.get(i, k);
            }
            assert_eq!(a.get(n + 1, k), &acc, "({},{k})", n + 1);
        }
    }
}

#[test]
fn total_positivity_transfers_on_instances() {
    let mut reg = Registry::new();
    let x = reg.var("x");
    let y = reg.var("y");
    let spec = staircase_production(1, &[x.clone(), y.clone()], &MultiPoly::one()).unwrap();
    let nmax = 5;
    let p = materialize_product(&spec, nmax + 2).unwrap();
    assert!(check_tp_order(&p, 3).passed());
    let a = output_matrix_of(&spec, nmax).unwrap();
    assert!(check_tp_order(&a, 3).passed());
    let h = hankel_matrix(&output_matrix_of(&spec, 2 * 3).unwrap().col(0), 4).unwrap();
    assert!(check_tp_order(&h, 3).passed());
}

#[test]
fn staircase_production_matches_paths() {
    for m in 1..=2usize {
        let mut reg = Registry::new();
        let xs: Vec<MultiPoly> = (0..=m).map(|i| reg.var(&format!("x{i}"))).collect();
        let y = reg.var("y");
        let spec = staircase_production(m, &xs, &y).unwrap();
        let w = staircase_alpha(m, &xs, &y).unwrap();
        assert_eq!(
            output_matrix_of(&spec, 6).unwrap(),
            sr_triangle(&w, 6).unwrap(),
            "m = {m}"
        );
    }
}

#[test]
fn hessenberg_output_is_jacobi_rogers() {
    for m in 1..=3usize {
        let mut reg = Registry::new();
        let w = BetaWeights::symbolic(&mut reg, Depth::Finite(m), "b", 12);
        let spec = ProductionSpec::single(BlockSpec::BandedHessenberg(w.clone()));
        assert_eq!(
            output_matrix_of(&spec, 7).unwrap(),
            jr_triangle(&w, 7).unwrap(),
            "m = {m}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gamma_blocks_multiply_like_series(
        f in prop::collection::vec(-3i64..=3, 1..6),
        g in prop::collection::vec(-3i64..=3, 1..6),
    ) {
        let mk = |tail: &[i64]| {
            let mut c = vec![1];
            c.extend_from_slice(tail);
            PowerSeries::from_ints(&c, 8)
        };
        let (f, g) = (mk(&f), mk(&g));
        let spec = ProductionSpec::new(vec![BlockSpec::GammaToeplitz(f.clone()), BlockSpec::GammaToeplitz(g.clone())]).unwrap();
        prop_assert_eq!(
            materialize_product(&spec, 8).unwrap(),
            materialize_block(&BlockSpec::GammaToeplitz(f.mul(&g)), 8).unwrap()
        );
    }

    #[test]
    fn binomial_conjugation_of_lower_bidiagonal(a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, q in -3i64..=3) {
        let (a, b, c, q) = (MultiPoly::int(a), MultiPoly::int(b), MultiPoly::int(c), MultiPoly::int(q));
        let l = ProductionSpec::single(BlockSpec::lower_bi(a.clone(), b.clone(), c.clone()));
        let want = BlockSpec::lower_bi(a.clone(), b, &(&q * &a) + &c);
        prop_assert_eq!(conjugate_by_bq(&l, &q, 8).unwrap(), materialize_block(&want, 8).unwrap());
    }
}
