use ctp_core::cfrac::branched_series;
use ctp_core::families::{
    default_params, families, family_era, family_expected_fractions, family_expected_production, family_info,
    family_reversed_rows, family_scaled_by_factorial, family_triangle, family_zeroth_or_rows, fanout_free_numbers,
    functional_digraph_polys, series_parallel_numbers, verify_family, ward_multivariate, Params, ProductionRoute,
    SequenceMode,
};
use ctp_core::production::{materialize_product, output_matrix_of, row_polys, tridiagonal_bands};
use ctp_core::tp::reversal;
use ctp_core::{MultiPoly, PolyMatrix, Registry};

fn ints(v: &[i64]) -> Vec<MultiPoly> {
    v.iter().map(|&c| MultiPoly::int(c)).collect()
}

fn row(m: &PolyMatrix, n: usize) -> Vec<MultiPoly> {
    m.row(n)[..=n].to_vec()
}

#[test]
fn triangle_examples() {
    let mut reg = Registry::new();
    let z = reg.var("z");
    let params = Params::new().with("x", MultiPoly::one()).with("y", z.clone());
    let js = family_triangle("jacobi_stirling", &params, 4).unwrap();
    let one_z = &MultiPoly::one() + &z;
    assert_eq!(row(&js, 2), vec![MultiPoly::zero(), one_z.clone(), MultiPoly::one()]);
    let scaled = family_scaled_by_factorial(&js).unwrap();
    assert_eq!(row(&scaled, 2), vec![MultiPoly::zero(), one_z, MultiPoly::int(2)]);

    let ward = family_triangle("ward", &default_params(&mut reg, "ward").unwrap(), 3).unwrap();
    assert_eq!(row(&ward, 2), ints(&[0, 1, 3]));
    assert_eq!(row(&ward, 3), ints(&[0, 1, 10, 15]));

    let lambert = family_triangle("lambert", &default_params(&mut reg, "lambert").unwrap(), 4).unwrap();
    assert_eq!(&lambert.row(2)[..2], &ints(&[2, 1])[..]);
    assert!(row(&lambert, 0).iter().all(MultiPoly::is_zero));

    assert!(family_triangle("nonesuch", &Params::new(), 3).is_err());
    assert!(family_info("nonesuch").is_err());
}

#[test]
fn sequence_examples() {
    let mut reg = Registry::new();
    let params = default_params(&mut reg, "elliptic").unwrap();
    let c = family_zeroth_or_rows("elliptic", &params, 3, &SequenceMode::Column0).unwrap();
    assert_eq!(c[0], MultiPoly::one());
    assert_eq!(c[1], MultiPoly::one());
    assert_eq!(c[2], reg.parse("1+4*lambda").unwrap());
    let lam = reg.id("lambda");
    assert_eq!(c[2].substitute(lam, &MultiPoly::one()), MultiPoly::int(5));

    let s: Vec<i64> = series_parallel_numbers(5)[1..]
        .iter()
        .map(|r| r.to_integer().try_into().unwrap())
        .collect();
    assert_eq!(s, vec![1, 2, 8, 52, 472]);
    let p: Vec<i64> = fanout_free_numbers(6)[1..]
        .iter()
        .map(|r| r.to_integer().try_into().unwrap())
        .collect();
    assert_eq!(p, vec![1, 4, 32, 416, 7552, 176128]);

    let forests = family_triangle("forests", &default_params(&mut reg, "forests").unwrap(), 3).unwrap();
    assert_eq!(row(&forests, 3), ints(&[0, 9, 6, 1]));
    assert_eq!(row(&family_scaled_by_factorial(&forests).unwrap(), 2), ints(&[0, 2, 2]));
    let id = family_scaled_by_factorial(&PolyMatrix::identity(5)).unwrap();
    for k in 0..5 {
        assert_eq!(id.get(k, k), &MultiPoly::constant(ctp_core::poly::factorial(k)));
    }
}

#[test]
fn ward_multivariate_examples() {
    let mut reg = Registry::new();
    let w = ward_multivariate(&mut reg, 4).unwrap();
    assert_eq!(w[0], MultiPoly::one());
    assert_eq!(w[1], reg.parse("x1").unwrap());
    assert_eq!(w[2], reg.parse("3*x1^2+x2").unwrap());

    let x = reg.var("x");
    let all_x = |p: &MultiPoly, reg: &mut Registry| {
        (1..=5).fold(p.clone(), |acc, i| {
            let v = reg.id(&format!("x{i}"));
            acc.substitute(v, &x)
        })
    };
    let params = Params::new().with("x", x.clone());
    let rows = row_polys(&family_triangle("ward", &params, 4).unwrap(), &x);
    for n in 0..=4 {
        assert_eq!(all_x(&w[n], &mut reg), rows[n], "n = {n}");
    }
    assert_eq!(all_x(&w[2], &mut reg), reg.parse("x+3*x^2").unwrap());
}

#[test]
fn eulerian_rows() {
    let mut reg = Registry::new();
    let mut params = default_params(&mut reg, "eulerian_r").unwrap();
    params.set("r", MultiPoly::int(1));
    let t = family_triangle("eulerian_r", &params, 3).unwrap();
    assert_eq!(row(&t, 2)[..2], ints(&[1, 1])[..]);
    assert_eq!(row(&t, 3)[..3], ints(&[1, 4, 1])[..]);
    params.set("r", MultiPoly::int(2));
    let t = family_triangle("eulerian_r", &params, 3).unwrap();
    assert_eq!(t.col(0)[..2], ints(&[1, 1])[..]);
    assert_eq!(row(&t, 2)[..2], ints(&[1, 2])[..]);
    assert_eq!(row(&t, 3)[..3], ints(&[1, 8, 6])[..]);
}

#[test]
fn eulerian_fractions_for_small_orders() {
    for r in 1..=2i64 {
        let mut reg = Registry::new();
        let mut params = default_params(&mut reg, "eulerian_r").unwrap();
        params.set("r", MultiPoly::int(r));
        let checks = family_expected_fractions(&mut reg, "eulerian_r", &params, 6).unwrap();
        for label in ["row-polys", "reversed-row-polys", "array-row-polys"] {
            let c = checks.iter().find(|c| c.label == label).unwrap();
            assert!(c.matches().unwrap(), "r = {r}, {label}");
        }
        let printed = checks
            .iter()
            .find(|c| c.label == "reversed-row-polys-as-printed")
            .unwrap();
        assert!(printed.as_printed);
        let mismatch = printed.first_mismatch().unwrap();
        assert!(mismatch.is_some(), "r = {r}");
    }
}

#[test]
fn rook_is_reversed_laguerre() {
    let mut reg = Registry::new();
    let qv = reg.id("q");
    let q = reg.var("q");
    let rook = family_triangle("rook", &Params::new(), 8).unwrap();
    let params = Params::new().with("alpha", MultiPoly::zero());
    let lag_rev = family_reversed_rows("laguerre", &params, qv, 8).unwrap();
    assert_eq!(row_polys(&rook, &q), lag_rev);
    assert_eq!(
        reversal(&lag_rev, qv).unwrap(),
        row_polys(&family_triangle("laguerre", &params, 8).unwrap(), &q)
    );
}

#[test]
fn jacobi_stirling_production_parameters() {
    let mut reg = Registry::new();
    let params = default_params(&mut reg, "jacobi_stirling").unwrap();
    let exp = family_expected_production("jacobi_stirling", &params, 6).unwrap();
    assert!(exp.scaled_by_factorial());
    let ProductionRoute::Blocks(spec) = exp.route else {
        panic!("block route expected")
    };
    let kinds: Vec<&str> = spec.blocks().iter().map(|b| b.kind_name()).collect();
    assert_eq!(kinds, vec!["upper-bidiagonal", "lower-bidiagonal"]);
    let scaled = family_scaled_by_factorial(&family_triangle("jacobi_stirling", &params, 6).unwrap()).unwrap();
    assert_eq!(output_matrix_of(&spec, 6).unwrap(), scaled);
    assert!(tridiagonal_bands(&materialize_product(&spec, 6).unwrap()).is_ok());

    let lag = family_expected_production("laguerre", &default_params(&mut reg, "laguerre").unwrap(), 6).unwrap();
    assert!(matches!(lag.route, ProductionRoute::Za(_)));
}

#[test]
fn lah_matches_array() {
    for a in 1..=3i64 {
        let mut reg = Registry::new();
        let mut params = default_params(&mut reg, "lah_generalized").unwrap();
        params.set("a", MultiPoly::int(a));
        let d = reg.var("d");
        params.set("d", d);
        let era = family_era("lah_generalized", &params, 9).unwrap();
        assert_eq!(
            era.matrix(7).unwrap(),
            family_triangle("lah_generalized", &params, 7).unwrap(),
            "a = {a}"
        );
    }
}

/// `sum over f: [n] -> [n]` of `q^(cyclic points) y^(components)`.
fn digraph_oracle(n: usize) -> Vec<(u32, u32, i64)> {
    let mut tally = std::collections::BTreeMap::new();
    let total = (n as u64).pow(n as u32);
    for code in 0..total {
        let mut f = vec![0usize; n];
        let mut c = code;
        for slot in f.iter_mut() {
            *slot = (c % n as u64) as usize;
            c /= n as u64;
        }
        let cyclic = (0..n).filter(|&v| {
            let mut w = f[v];
            for _ in 0..n {
                if w == v {
                    return true;
                }
                w = f[w];
            }
            false
        });
        let cyc: Vec<usize> = cyclic.collect();
        let mut seen = vec![false; n];
        let mut comps = 0;
        for &v in &cyc {
            if !seen[v] {
                comps += 1;
                let mut w = v;
                while !seen[w] {
                    seen[w] = true;
                    w = f[w];
                }
            }
        }
        *tally.entry((cyc.len() as u32, comps)).or_insert(0i64) += 1;
    }
    tally.into_iter().map(|((a, b), c)| (a, b, c)).collect()
}

#[test]
fn functional_digraphs_match_brute_force() {
    let mut reg = Registry::new();
    let q = reg.var("q");
    let y = reg.var("y");
    let psi = functional_digraph_polys(&q, &y, 4).unwrap();
    assert_eq!(psi[0], MultiPoly::one());
    assert_eq!(psi[1], &q * &y);
    for n in 1..=4 {
        let want = digraph_oracle(n).into_iter().fold(MultiPoly::zero(), |acc, (a, b, c)| {
            &acc + &(&q.pow(a) * &y.pow(b)).scale(&ctp_core::poly::rat(c))
        });
        assert_eq!(psi[n], want, "n = {n}");
    }
}

#[test]
fn catalog_is_enumerable() {
    let names: Vec<&str> = families().iter().map(|f| f.name).collect();
    for expected in [
        "jacobi_stirling",
        "elliptic",
        "stirling_cycle_refined",
        "eulerian_refined",
        "laguerre",
        "rook",
        "forests",
        "stirling",
        "eulerian_r",
        "ward",
        "lambert",
        "lah_generalized",
        "series_parallel",
        "fanout_free",
    ] {
        assert!(names.contains(&expected), "{expected}");
    }
}

#[test]
fn every_family_verifies_as_expected() {
    for f in families() {
        let mut reg = Registry::new();
        let params = default_params(&mut reg, f.name).unwrap();
        let outcomes = verify_family(&mut reg, f.name, &params, 8).unwrap();
        assert!(!outcomes.is_empty());
        for o in &outcomes {
            assert!(
                o.as_expected(),
                "{}: {} passed={} ({})",
                f.name,
                o.name,
                o.passed,
                o.detail
            );
        }
    }
}

#[test]
fn jacobi_stirling_printed_fraction_fails() {
    let mut reg = Registry::new();
    let params = default_params(&mut reg, "jacobi_stirling").unwrap();
    let checks = family_expected_fractions(&mut reg, "jacobi_stirling", &params, 8).unwrap();
    let printed = checks.iter().find(|c| c.as_printed).unwrap();
    assert_eq!(printed.first_mismatch().unwrap(), Some(2));
    let at_zero = checks.iter().find(|c| c.label == "scaled-row-polys-at-x0").unwrap();
    assert!(at_zero.matches().unwrap());
    let s = branched_series(&at_zero.spec, 3).unwrap();
    assert_eq!(s.coeff(0), &MultiPoly::one());
}
