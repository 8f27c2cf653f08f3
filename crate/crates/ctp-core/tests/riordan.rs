use ctp_core::cfrac::{branched_series, FractionSpec};
use ctp_core::families::{default_params, family_era, tree_function};
use ctp_core::matrix::int_matrix;
use ctp_core::paths::{AffinePattern, AlphaWeights};
use ctp_core::poly::{factorial, rat};
use ctp_core::production::materialize_product;
use ctp_core::riordan::{
    diamond_transform, era_matrix, era_production, era_row_polys, f_from_inverse_derivative, factored_era_production,
    ode_factor_check, production_from_za, shifted_rows_match, stirling_cycle_numbers, za_sequences, ERArray, ZAPair,
};
use ctp_core::{MultiPoly, PolyMatrix, PowerSeries, Registry};
use proptest::prelude::*;

const N: usize = 10;

fn minus_log_one_minus_t(n: usize) -> PowerSeries {
    PowerSeries::from_fn(n, |k| {
        if k == 0 {
            MultiPoly::zero()
        } else {
            MultiPoly::constant(ctp_core::poly::ratio(1, k as i64))
        }
    })
}

fn t_over_one_minus_t(n: usize) -> PowerSeries {
    PowerSeries::from_fn(n, |k| if k == 0 { MultiPoly::zero() } else { MultiPoly::one() })
}

fn laguerre(alpha: &MultiPoly, n: usize) -> ERArray {
    let g = PowerSeries::from_ints(&[1, -1], n)
        .pow_sym(&-&(alpha + &MultiPoly::one()))
        .unwrap();
    ERArray::new(g, t_over_one_minus_t(n)).unwrap()
}

fn tree_array(n: usize) -> ERArray {
    ERArray::new(PowerSeries::one(n), tree_function(n)).unwrap()
}

fn row(m: &PolyMatrix, n: usize) -> Vec<MultiPoly> {
    m.row(n)[..=n].to_vec()
}

fn ints(v: &[i64]) -> Vec<MultiPoly> {
    v.iter().map(|&c| MultiPoly::int(c)).collect()
}

#[test]
fn entry_examples() {
    let m = era_matrix(&PowerSeries::one(N), &minus_log_one_minus_t(N), 6).unwrap();
    assert_eq!(row(&m, 3), ints(&[0, 2, 3, 1]));
    assert_eq!(m, stirling_cycle_numbers(6));

    let l = laguerre(&MultiPoly::zero(), N).matrix(4).unwrap();
    assert_eq!(row(&l, 2), ints(&[2, 4, 1]));
    // C(n, n-k) n!/k!
    let want = int_matrix(5, 5, |n, k| {
        if k > n {
            return 0;
        }
        let c = (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1));
        c * (k + 1..=n).map(|i| i as i64).product::<i64>()
    });
    assert_eq!(l, want);

    assert_eq!(ERArray::identity(N).matrix(6).unwrap(), PolyMatrix::identity(7));
    assert!(ERArray::new(PowerSeries::one(4), PowerSeries::from_ints(&[1, 1], 4)).is_err());
    assert!(ERArray::new(PowerSeries::zero(4), PowerSeries::t(4)).is_err());
    assert!(ERArray::new(PowerSeries::one(4), PowerSeries::from_ints(&[0, 0, 1], 4)).is_err());
}

#[test]
fn group_law_examples() {
    let mut reg = Registry::new();
    let q = reg.var("q");
    let r = laguerre(&MultiPoly::int(2), N);
    assert_eq!(r.product(&ERArray::identity(N)).unwrap(), r);

    let bq = ERArray::new(PowerSeries::exp_linear(&q, N), PowerSeries::t(N)).unwrap();
    let bmq = ERArray::new(PowerSeries::exp_linear(&-&q, N), PowerSeries::t(N)).unwrap();
    assert_eq!(bq.product(&bmq).unwrap(), ERArray::identity(N));
    assert_eq!(bq.inverse().unwrap(), bmq);
    assert_eq!(ERArray::identity(N).inverse().unwrap(), ERArray::identity(N));

    let a = ERArray::new(PowerSeries::one(N), t_over_one_minus_t(N)).unwrap();
    let t_over_one_plus_t = PowerSeries::from_fn(N, |k| match k {
        0 => MultiPoly::zero(),
        k if k % 2 == 1 => MultiPoly::one(),
        _ => MultiPoly::int(-1),
    });
    assert_eq!(
        a.inverse().unwrap(),
        ERArray::new(PowerSeries::one(N), t_over_one_plus_t).unwrap()
    );
    assert_eq!(a.product(&a.inverse().unwrap()).unwrap(), ERArray::identity(N));
}

#[test]
fn za_examples() {
    let za = za_sequences(&tree_array(N + 1), N).unwrap();
    assert!(za.z.is_zero());
    let want = PowerSeries::exp_linear(&MultiPoly::one(), N).mul(&PowerSeries::geometric(&MultiPoly::one(), N));
    assert_eq!(za.a, want);

    let mut reg = Registry::new();
    let alpha = reg.var("alpha");
    let za = za_sequences(&laguerre(&alpha, N + 1), N).unwrap();
    let a1 = &alpha + &MultiPoly::one();
    assert_eq!(za.z, PowerSeries::new(vec![a1.clone(), a1.clone()], N));
    assert_eq!(za.a, PowerSeries::from_ints(&[1, 2, 1], N));

    let lambda = reg.var("lambda");
    let e = ERArray::new(PowerSeries::exp_linear(&lambda, N + 1), PowerSeries::t(N + 1)).unwrap();
    let za = za_sequences(&e, N).unwrap();
    assert_eq!(za.z, PowerSeries::constant(lambda.clone(), N));
    assert_eq!(za.a, PowerSeries::one(N));
}

#[test]
fn production_examples() {
    let mut reg = Registry::new();
    let alpha = reg.var("alpha");
    let za = za_sequences(&laguerre(&alpha, N + 1), N).unwrap();
    let p = production_from_za(&za, 6).unwrap();
    let a1 = &alpha + &MultiPoly::one();
    let a3 = &alpha + &MultiPoly::int(3);
    assert_eq!(&p.row(0)[..2], &[a1.clone(), MultiPoly::one()]);
    assert_eq!(&p.row(1)[..3], &[a1.clone(), a3, MultiPoly::one()]);
    assert_eq!(p.get(2, 1), &(&alpha + &MultiPoly::int(2)).scale(&rat(2)));
    assert!(p.get(2, 0).is_zero());

    let lambda = reg.var("lambda");
    let za = ZAPair {
        z: PowerSeries::constant(lambda.clone(), N),
        a: PowerSeries::one(N),
    };
    let p = production_from_za(&za, 5).unwrap();
    for i in 0..5 {
        assert_eq!(p.get(i, i), &lambda);
        if i + 1 < 5 {
            assert_eq!(p.get(i, i + 1), &MultiPoly::one());
        }
    }

    let tree = tree_array(N + 1);
    let p = era_production(&tree, N).unwrap();
    assert!(p.col(0).iter().all(MultiPoly::is_zero));
    assert!(shifted_rows_match(&tree.matrix(N).unwrap(), &p).unwrap());
}

#[test]
fn ode_factor_examples() {
    let h = PowerSeries::from_ints(&[1, 1], N);
    assert!(ode_factor_check(&t_over_one_minus_t(N + 1), &h, &h, N).unwrap());
    assert!(!ode_factor_check(&t_over_one_minus_t(N + 1), &h, &PowerSeries::one(N), N).unwrap());

    let ratio = PowerSeries::from_ints(&[1, 1], N).mul(&PowerSeries::geometric(&MultiPoly::one(), N));
    let s = f_from_inverse_derivative(&ratio).unwrap();
    assert!(ode_factor_check(&s, &h, &PowerSeries::geometric(&MultiPoly::one(), N), N).unwrap());
    assert!(ode_factor_check(&PowerSeries::t(N + 1), &PowerSeries::one(N), &PowerSeries::one(N), N).unwrap());
}

#[test]
fn row_polynomial_examples() {
    let mut reg = Registry::new();
    let qv = reg.id("q");
    let q = reg.var("q");
    let rp = era_row_polys(&ERArray::identity(N), qv, 6).unwrap();
    for (n, p) in rp.iter().enumerate() {
        assert_eq!(p, &q.pow(n as u32));
    }
    let rp = era_row_polys(&laguerre(&MultiPoly::zero(), N), qv, 4).unwrap();
    assert_eq!(rp[2], reg.parse("2+4*q+q^2").unwrap());

    let rp = era_row_polys(&tree_array(N), qv, 6).unwrap();
    assert_eq!(rp[3], reg.parse("9*q+6*q^2+q^3").unwrap());
    for n in 1..=6u32 {
        assert_eq!(rp[n as usize], &q * &(&q + &MultiPoly::int(n as i64)).pow(n - 1));
    }
}

#[test]
fn diamond_examples() {
    let mut reg = Registry::new();
    let qv = reg.id("q");
    let yv = reg.id("y");
    let q = reg.var("q");
    let y = reg.var("y");
    let d = diamond_transform(&ERArray::identity(N), qv, yv, 6).unwrap();
    let s = stirling_cycle_numbers(6);
    for n in 0..=6 {
        for k in 0..=n {
            assert_eq!(d.get(n, k), &(s.get(n, k) * &q.pow(n as u32)));
        }
    }

    let d = diamond_transform(&tree_array(N), qv, yv, 5).unwrap();
    assert_eq!(d.get(1, 1), &q);
    let psi1: MultiPoly = (0..=1).fold(MultiPoly::zero(), |acc, k| &acc + &(d.get(1, k) * &y.pow(k as u32)));
    assert_eq!(psi1, &q * &y);
    let sum2: MultiPoly = (0..=2).fold(MultiPoly::zero(), |acc, k| &acc + d.get(2, k));
    assert_eq!(sum2, reg.parse("2*q+2*q^2").unwrap());

    assert!(diamond_transform(&laguerre(&MultiPoly::zero(), N), qv, yv, 4).is_err());
}

#[test]
fn production_identity_on_catalog_arrays() {
    let names = [
        "laguerre",
        "lah_generalized",
        "stirling",
        "forests",
        "series_parallel",
        "fanout_free",
        "lambert",
    ];
    for name in names {
        let mut reg = Registry::new();
        let params = default_params(&mut reg, name).unwrap();
        let r = family_era(name, &params, N + 2).unwrap();
        let p = era_production(&r, N).unwrap();
        assert!(shifted_rows_match(&r.matrix(N).unwrap(), &p).unwrap(), "{name}");
    }
    let stirling = ERArray::new(PowerSeries::one(N + 2), minus_log_one_minus_t(N + 2)).unwrap();
    let p = era_production(&stirling, N).unwrap();
    assert!(shifted_rows_match(&stirling.matrix(N).unwrap(), &p).unwrap());
}

#[test]
fn factored_production_matches_za() {
    let mut reg = Registry::new();
    let lambda = reg.var("lambda");
    let n = 8;
    let phi = PowerSeries::from_ints(&[1, 2], n + 2);
    let psi = PowerSeries::from_ints(&[1, 1, 1], n + 2);
    let f = f_from_inverse_derivative(&phi.mul(&psi)).unwrap();
    let g = phi
        .compose(&f.truncate(n + 2))
        .unwrap()
        .mul(&f.scale(&lambda).exp().unwrap().truncate(n + 2));
    let r = ERArray::new(g, f).unwrap();
    let via_za = era_production(&r, n).unwrap();
    let spec = factored_era_production(&phi, &psi, &lambda).unwrap();
    assert_eq!(materialize_product(&spec, n).unwrap(), via_za);
}

#[test]
fn row_polys_are_branched_fractions() {
    // g = exp(lambda f), 1/fbar' = prod (1 + x_i t): the ordinary generating
    // function of R_n(q) is the (m+1)-branched S-fraction with weights
    // (lambda+q, x_0, ..., x_m, lambda+q, 2x_0, ..., 2x_m, ...).
    for (m, n) in [(0usize, 6usize), (1, 6), (2, 5)] {
        let mut reg = Registry::new();
        let qv = reg.id("q");
        let q = reg.var("q");
        let lambda = reg.var("lambda");
        let xs: Vec<MultiPoly> = (0..=m).map(|i| reg.var(&format!("x{i}"))).collect();
        let h = xs.iter().fold(PowerSeries::one(n + 1), |acc, x| {
            acc.mul(&PowerSeries::new(vec![MultiPoly::one(), x.clone()], n + 1))
        });
        let f = f_from_inverse_derivative(&h).unwrap();
        let g = f.scale(&lambda).exp().unwrap();
        let r = ERArray::new(g, f).unwrap();
        let rp = era_row_polys(&r, qv, n).unwrap();

        let mut base = vec![&lambda + &q];
        base.extend(xs.iter().cloned());
        let mut step = vec![MultiPoly::zero()];
        step.extend(xs.iter().cloned());
        let w = AlphaWeights::pattern(m + 1, AffinePattern::new(base, step).unwrap());
        let s = branched_series(&FractionSpec::BranchedS(w), n).unwrap();
        for k in 0..=n {
            assert_eq!(s.coeff(k), &rp[k], "m = {m}, n = {k}");
        }
    }
}

fn small_series(n: usize, lead: i64) -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec(-2i64..=2, n).prop_map(move |tail| {
        let mut c = vec![lead];
        c.extend(tail);
        PowerSeries::from_ints(&c, n + 1)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn product_matrix_is_matrix_product(
        g1 in small_series(6, 1), f1 in small_series(6, 1),
        g2 in small_series(6, 1), f2 in small_series(6, 1),
    ) {
        let shift = |s: &PowerSeries| PowerSeries::t(7).mul(s).truncate(7);
        let r1 = ERArray::new(g1, shift(&f1)).unwrap();
        let r2 = ERArray::new(g2, shift(&f2)).unwrap();
        let prod = r1.product(&r2).unwrap().matrix(6).unwrap();
        prop_assert_eq!(prod, r1.matrix(6).unwrap().try_mul(&r2.matrix(6).unwrap()).unwrap());
    }

    #[test]
    fn inverse_composes_to_identity(g in small_series(6, 1), f in small_series(6, 1)) {
        let f = PowerSeries::t(7).mul(&f).truncate(7);
        let r = ERArray::new(g, f).unwrap();
        let inv = r.inverse().unwrap();
        prop_assert_eq!(r.product(&inv).unwrap().matrix(6).unwrap(), PolyMatrix::identity(7));
    }

    #[test]
    fn production_reproduces_array(g in small_series(8, 1), f in small_series(8, 1)) {
        let f = PowerSeries::t(9).mul(&f).truncate(9);
        let r = ERArray::new(g, f).unwrap();
        let p = era_production(&r, 7).unwrap();
        prop_assert!(shifted_rows_match(&r.matrix(7).unwrap(), &p).unwrap());
    }
}

#[test]
fn factorial_scaling_sanity() {
    // R_(n,k) = n!/k! [t^n] g f^k for (e^t, t): binomial coefficients.
    let r = ERArray::new(PowerSeries::exp_linear(&MultiPoly::one(), N), PowerSeries::t(N)).unwrap();
    let m = r.matrix(5).unwrap();
    assert_eq!(
        m.get(5, 2),
        &MultiPoly::constant(factorial(5) / (factorial(2) * factorial(3)))
    );
}
