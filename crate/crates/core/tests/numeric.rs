use std::path::PathBuf;

use hoforms::numeric::approx::Approx;
use hoforms::numeric::eval::GlobalForm;
use hoforms::numeric::group::{GroupData, Mat2};
use hoforms::numeric::iterated::{CuspPoint, Endpoint, Kernel};
use hoforms::numeric::quad::{integrate, GaussLegendre};
use hoforms::Error;
use num_complex::Complex64;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn level11() -> GroupData {
    GroupData::load(&fixture("gamma0_11.json")).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn fixtures_load_and_verify() {
    let g = level11();
    assert_eq!((g.genus, g.cusps.len()), (1, 2));
    assert_eq!(g.profile.dim_m(2).unwrap(), 2);
    let g37 = GroupData::load(&fixture("gamma0_37.json")).unwrap();
    assert_eq!((g37.genus, g37.cusps.len()), (2, 2));
    let dir = fixture("");
    assert!(matches!(
        GroupData::parse("{not json", &dir),
        Err(Error::Parse(_))
    ));
    let text = std::fs::read_to_string(fixture("gamma0_11.json")).unwrap();
    let broken = text.replacen("\"width\": 11", "\"width\": 7", 1);
    assert!(matches!(
        GroupData::parse(&broken, &dir),
        Err(Error::CorruptFixture(_))
    ));
}

#[test]
fn global_evaluation_matches_series_and_modularity() {
    let g = level11();
    let f = GlobalForm::from_group(&g, 1, 200).unwrap();
    // both routes valid at moderate height
    let z = c(0.13, 0.3);
    let direct = f.series.eval(z).unwrap();
    let (m, w) = hoforms::numeric::eval::reduce(z).unwrap();
    assert!(m.det() == 1 && w.im > 0.8);
    let global = f.eval(z).unwrap();
    assert!((direct.value - global.value).norm() < 1e-12);
    // f(gamma z) (cz + d)^{-2} = f(z)
    for gamma in &g.generators {
        let z = c(0.21, 0.05);
        let lhs = f.slash(gamma, z).unwrap();
        let rhs = f.eval(z).unwrap();
        let (d, bound) = lhs.distance(rhs);
        assert!(d < 1e-9 && d <= bound + 1e-9, "{gamma}: {d}");
    }
    let near = f.eval(c(0.4, 0.004)).unwrap();
    assert!(near.value.is_finite());
    assert!(f.eval(c(0.4, 0.0)).is_err());
    let _ = Mat2::IDENTITY;
}

#[test]
fn iterated_series_agree_with_ray_quadrature() {
    let k = Kernel::new(&level11(), 200).unwrap();
    for z in [c(0.0, 1.0), c(0.3, 0.8), c(0.0, 2.0)] {
        for w in [&[1][..], &[1, 1], &[1, 1, 1]] {
            let s = k.to_cusp(w, z, CuspPoint::Infinity).unwrap();
            let q = k.quadrature_to_infinity(w, z).unwrap();
            let (d, _) = s.distance(q);
            assert!(d < 1e-10, "z={z} w={w:?}: {d:e}");
        }
    }
}

#[test]
fn cusp_zero_by_two_routes() {
    let g = level11();
    let k = Kernel::new(&g, 200).unwrap();
    let f = k.form(1).unwrap().clone();
    let gl = GaussLegendre::new(32);
    // int_z^0 - int_z^inf  =  int_inf^0, independent of z
    let z1 = c(0.0, 1.0);
    let z2 = c(0.3, 0.8);
    let d1 = k.to_cusp(&[1], z1, CuspPoint::Zero).unwrap() - k.to_cusp(&[1], z1, CuspPoint::Infinity).unwrap();
    let d2 = k.to_cusp(&[1], z2, CuspPoint::Zero).unwrap() - k.to_cusp(&[1], z2, CuspPoint::Infinity).unwrap();
    assert!(d1.distance(d2).0 < 1e-9);
    // int_{z1}^{z2} f by quadrature equals the difference of series primitives
    let fe = |z: Complex64| f.eval(z);
    let quad = integrate(&fe, &gl, z1, z2, 1e-12).unwrap();
    let series = k.to_cusp(&[1], z1, CuspPoint::Infinity).unwrap()
        - k.to_cusp(&[1], z2, CuspPoint::Infinity).unwrap();
    assert!(quad.distance(series).0 < 1e-10);
    // quadrature towards 0 along a path through Wz agrees with the transport
    let z0 = k.cusp_base_point();
    let low = c(0.0, 1e-3);
    let to_low = integrate(&fe, &gl, z1, low, 1e-12).unwrap();
    let rest = k.to_cusp(&[1], low, CuspPoint::Zero).unwrap();
    let via = to_low + rest;
    let direct = k.to_cusp(&[1], z1, CuspPoint::Zero).unwrap();
    assert!(via.distance(direct).0 < 1e-8);
    let between = k
        .between(&[1], Endpoint::Cusp(CuspPoint::Infinity), Endpoint::Cusp(CuspPoint::Zero))
        .unwrap();
    assert!(between.distance(d1).0 < 1e-9, "{between:?} {d1:?} {z0}");
    let _ = Approx::zero();
}

#[test]
fn modular_symbols_by_quadrature_and_series() {
    use hoforms::numeric::symbols::{modular_symbol, modular_symbol_series, NumericConfig};
    let g = level11();
    let f = GlobalForm::from_group(&g, 1, 200).unwrap();
    let cfg = NumericConfig::default();
    for gamma in &g.generators {
        let s = modular_symbol(&f, gamma, &g, &cfg).unwrap();
        let series = modular_symbol_series(&f, gamma).unwrap();
        assert!(s.base_point_gap() < 1e-9, "{gamma}");
        assert!(s.value.distance(series).0 < 1e-9, "{gamma}: {:?} {:?}", s.value, series);
    }
    let bad = Mat2::new(1, 0, 1, 1);
    assert!(matches!(modular_symbol(&f, &bad, &g, &cfg), Err(Error::NotInGroup(_))));
}

#[test]
fn path_and_s_identities() {
    use hoforms::numeric::checks::{check_path_lemma, check_sab, s_function, s_function_expanded};
    let k = Kernel::new(&level11(), 200).unwrap();
    let (a, b) = (CuspPoint::Infinity, CuspPoint::Zero);
    for z in [c(0.0, 1.0), c(0.0, 2.0), c(0.3, 0.8)] {
        for w in [&[1][..], &[1, 1], &[1, 1, 1]] {
            let p = check_path_lemma(&k, w, a, b, z).unwrap();
            let s = check_sab(&k, w, a, b, z).unwrap();
            println!("z={z} w={w:?} path {p:?} sab {s:?}");
            assert!(p.corrected < 1e-8 && s.corrected < 1e-8);
            let x = s_function(&k, w, a, z).unwrap();
            let y = s_function_expanded(&k, w, a, z).unwrap();
            assert!(x.distance(y).0 < 1e-12);
        }
    }
}

#[test]
fn shuffle_symbols_and_periods() {
    use hoforms::numeric::checks::{check_shuffle_numeric, period_cocycle, symbol_suite, ShuffleSpec};
    use hoforms::numeric::symbols::NumericConfig;
    let g = level11();
    let k = Kernel::new(&g, 200).unwrap();
    let cfg = NumericConfig::default();
    let f = k.form(1).unwrap().clone();
    let suite = symbol_suite(&g, &f, &cfg).unwrap();
    println!("{suite:?}");
    for w in [2, 4] {
        println!("{:?}", period_cocycle(&g, &f, w, &cfg).unwrap());
    }
    let zs = [c(0.0, 1.0), c(0.3, 0.8)];
    let g2 = &g.generators[1];
    let g3 = &g.generators[2];
    let one = ShuffleSpec::Cusp(1);
    let two = ShuffleSpec::CuspTimesPrimitive(1, 1);
    println!("{}", check_shuffle_numeric(&k, one, one, &[], &zs, &cfg).unwrap().value);
    println!("{}", check_shuffle_numeric(&k, two, one, &[*g2], &zs, &cfg).unwrap().value);
    println!("{}", check_shuffle_numeric(&k, two, two, &[*g2, *g3], &zs, &cfg).unwrap().value);
}

mod random_words {
    use super::*;
    use hoforms::numeric::symbols::{modular_symbol, NumericConfig};
    use proptest::prelude::*;

    fn word() -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec((1i64..=3, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v }), 1..4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]
        #[test]
        fn symbols_are_additive(u in word(), v in word()) {
            let g = level11();
            let f = GlobalForm::from_group(&g, 1, 200).unwrap();
            let cfg = NumericConfig::default();
            let a = g.eval_word(&u).unwrap();
            let b = g.eval_word(&v).unwrap();
            let sym = |m: &Mat2| modular_symbol(&f, m, &g, &cfg).unwrap().value;
            let r = (sym(&a.mul(&b)) - sym(&a) - sym(&b)).abs();
            prop_assert!(r < 1e-9, "residual {r:e}");
        }
    }
}
