mod common;

use kstab_core::error::Error;
use kstab_core::rational::{int, rat, to_f64, ExtRational, Rational};
use kstab_core::stability::{
    a_feasibility, a_invariant, assumption_gate, candidates, delta_transfer_bound, delta_upper, filtration_s_m,
    filtration_validate, lemma26_check, lemma37_constant, s_decomposition_check, transfer_formula,
    AInvariant, Anticanonical, FiltrationData, GateVerdict,
};
use kstab_core::toric::{library, ToricDivisor, ToricPair};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

/// Planar rays of the library fans in angular order, for the oracle.
fn planar_rays(name: &str) -> Option<Vec<[i64; 2]>> {
    Some(match name {
        "p2" => vec![[1, 0], [0, 1], [-1, -1]],
        "p1xp1" => vec![[1, 0], [0, 1], [-1, 0], [0, -1]],
        "blp2" => vec![[1, 0], [1, 1], [0, 1], [-1, -1]],
        "f2" => vec![[1, 0], [0, 1], [-1, 2], [0, -1]],
        "f3" => vec![[1, 0], [0, 1], [-1, 3], [0, -1]],
        _ => return None,
    })
}

/// `S(v) = (1/area) ∫_P (<u,v> - ψ(v)) du` through the shoelace centroid.
fn oracle_s(rays: &[[i64; 2]], v: [i64; 2]) -> Rational {
    let ones = vec![int(1); rays.len()];
    let pts = common::polygon(&common::divisor_rows(rays, &ones));
    let (cx, cy) = common::centroid(&pts);
    cx * int(v[0]) + cy * int(v[1]) - common::psi(rays, &ones, v)
}

#[test]
fn s_matches_the_planar_oracle_on_all_candidates() {
    for (name, pair) in library::all() {
        let Some(rays) = planar_rays(name) else { continue };
        let data = Anticanonical::new(&pair).unwrap();
        for v in candidates(&pair, 3).unwrap() {
            let raw = [v.vector()[0], v.vector()[1]];
            let expected = oracle_s(&rays, raw);
            assert_eq!(data.s_curve(&v).unwrap(), expected, "{name} {v}");
            assert_eq!(data.s_barycenter(&v), expected, "{name} {v}");
        }
    }
}

#[test]
fn curve_values_match_sliced_polygons() {
    let pair = library::f3();
    let rays = planar_rays("f3").unwrap();
    let data = Anticanonical::new(&pair).unwrap();
    for raw in [[0, 1], [1, 1], [-1, 2]] {
        let v = pair.valuation(&raw).unwrap();
        let curve = data.vol_curve(&v).unwrap();
        let psi = data.psi(&raw);
        let tau = data.tau(&v).unwrap();
        for k in 0..=7 {
            let t = &tau * rat(k, 7);
            let mut rows = common::divisor_rows(&rays, &vec![int(1); 4]);
            rows.push((raw[0], raw[1], -(&psi + &t)));
            let area = common::area(&common::polygon(&rows));
            assert_eq!(curve.eval(&t).unwrap(), int(2) * area, "{raw:?} at t = {t}");
        }
        assert!(curve.is_nonincreasing_sampled(64));
    }
}

#[test]
fn reference_values() {
    let bl = Anticanonical::new(&library::blp2()).unwrap();
    assert_eq!(bl.volume(), &int(8));
    let s = |raw: &[i64]| bl.s_barycenter(&bl.pair().valuation(raw).unwrap());
    assert_eq!(s(&[1, 1]), rat(7, 6));
    assert_eq!(s(&[1, 0]), rat(13, 12));
    assert_eq!(s(&[-1, -1]), rat(5, 6));
    // the candidate (2,1) has A = 3, S = 27/8
    let v = bl.pair().valuation(&[2, 1]).unwrap();
    assert_eq!(bl.log_discrepancy(&v) / bl.s_barycenter(&v), rat(8, 9));
    let d = delta_upper(&library::blp2(), 3).unwrap();
    assert_eq!((d.value, d.witness.vector().to_vec()), (rat(6, 7), vec![1, 1]));
}

#[test]
fn fano_sanity() {
    for pair in [library::p1(), library::p2(), library::p1xp1()] {
        let data = Anticanonical::new(&pair).unwrap();
        for r in 0..pair.num_rays() {
            let v = pair.ray_valuation(r);
            assert_eq!(data.s_curve(&v).unwrap(), int(1));
            assert_eq!(data.s_barycenter(&v), int(1));
        }
        assert_eq!(data.delta_upper(3).unwrap().value, int(1));
    }
    let data = Anticanonical::new(&library::p2()).unwrap();
    for m in [4, 8, 16, 24] {
        for r in 0..3 {
            assert_eq!(data.s_m(&data.pair().ray_valuation(r), m).unwrap(), int(1));
        }
    }
}

#[test]
fn s_m_converges_on_every_ray() {
    for (name, pair) in library::all() {
        let data = Anticanonical::new(&pair).unwrap();
        for r in 0..pair.num_rays() {
            let v = pair.ray_valuation(r);
            let s = data.s_barycenter(&v);
            let gaps: Vec<Rational> = [4u64, 8, 16, 24]
                .iter()
                .map(|&m| {
                    let sm = data.s_m(&v, m).unwrap();
                    if m >= 8 {
                        assert!(sm <= rat(6, 5) * &s, "{name} ray {r} m {m}");
                    }
                    (sm - &s).abs()
                })
                .collect();
            assert!(gaps[3] <= rat(1, 20), "{name} ray {r}: {}", gaps[3]);
            assert!(gaps[1..].windows(2).all(|w| w[1] <= w[0]), "{name} ray {r}");
        }
    }
}

#[test]
fn delta_m_equals_lct_of_basis_type_divisor() {
    for (_, pair) in library::all() {
        let data = Anticanonical::new(&pair).unwrap();
        for m in [1, 2, 4] {
            let d = data.basis_type_divisor(m).unwrap();
            let bound = data.delta_m_upper(m).unwrap();
            if pair.fan().is_smooth() {
                assert_eq!(pair.lct_snc(&d).unwrap(), bound);
            }
            assert!(bound > ExtRational::Finite(Rational::zero()));
        }
    }
}

#[test]
fn decomposition_on_f2_and_f3() {
    for pair in [library::f2(), library::f3()] {
        for row in s_decomposition_check(&pair).unwrap() {
            assert_eq!(&row.s_x - &row.s_z, &row.a_x - &row.a_z);
            assert!(!row.ord_b.is_negative());
        }
    }
    let f3 = s_decomposition_check(&library::f3()).unwrap();
    let neg = f3.iter().find(|r| r.vector == vec![0, 1]).unwrap();
    assert_eq!((neg.a_z.clone(), neg.ord_b.clone()), (rat(2, 3), rat(1, 3)));
    // S on F₃ along the negative section, both sides
    assert_eq!(neg.s_x, rat(13, 9));
    assert_eq!(neg.s_z, rat(10, 9));
}

#[test]
fn lemma37_shrinks_with_boundary_on_the_model() {
    // boundary on the fibre ray (1,0) lowers A_Z on the contracted ray
    let mut last = ExtRational::Infinity;
    for k in [0, 1, 2, 3] {
        let pair = library::f3()
            .with_boundary(vec![rat(k, 4), int(0), int(0), int(0)])
            .unwrap();
        let t = lemma37_constant(&pair, 2).unwrap();
        assert!(t < last, "{t} at {k}/4");
        last = t;
    }
}

#[test]
fn lemma37_nonincreasing_in_radius() {
    for (name, pair) in library::all() {
        let values: Vec<ExtRational> = (1..=3).map(|r| lemma37_constant(&pair, r).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0]), "{name}: {values:?}");
    }
    assert_eq!(lemma37_constant(&library::f3(), 3).unwrap(), int(2).into());
}

#[test]
fn a_invariant_of_f3() {
    // -K = 2C₀ + 5F, C₀² = -3, F² = 0, C₀F = 1: A + t(-K) ample needs the
    // C₀-degree of A above t, while -K - A effective caps it by 5
    let AInvariant::Bracket { lower, upper, .. } = a_invariant(&library::f3(), 1 << 16).unwrap() else {
        panic!("finite");
    };
    assert!(lower < int(5) && int(5) <= upper);
    assert!(&upper - &lower <= rat(1, 1 << 16));
    let gate = assumption_gate(&library::f3(), 3, 1 << 16).unwrap();
    assert!(gate.threshold_lower <= rat(3, 8) && rat(3, 8) <= gate.threshold_upper);
    assert_eq!(gate.verdict, GateVerdict::GateInconclusive);
}

#[test]
fn gate_errors() {
    assert!(matches!(assumption_gate(&library::p2(), 0, 64), Err(Error::NoCandidates)));
    assert!(matches!(delta_transfer_bound(&rat(1, 2), &int(1)), Err(Error::RequiresStableModel(_))));
}

#[test]
fn filtrations_from_valuations_are_valid() {
    for (_, pair) in library::all() {
        let data = Anticanonical::new(&pair).unwrap();
        for r in 0..pair.num_rays() {
            let v = pair.ray_valuation(r);
            let f = FiltrationData::from_valuation(&data, &v, &[1, 2, 3, 4, 6]).unwrap();
            assert!(filtration_validate(&f).is_empty(), "{v}");
            for m in [1, 2, 3, 4, 6] {
                assert_eq!(filtration_s_m(&f, m).unwrap(), data.s_m(&v, m).unwrap());
            }
        }
    }
}

fn big_pair() -> impl Strategy<Value = ToricPair> {
    (0usize..6, prop::collection::vec(0i64..=2, 4)).prop_map(|(i, delta)| {
        let base = match i {
            0 => library::p1(),
            1 => library::p2(),
            2 => library::p1xp1(),
            3 => library::blp2(),
            4 => library::f2(),
            _ => library::f3(),
        };
        let b = delta[..base.num_rays()].iter().map(|&d| rat(d, 4)).collect();
        base.with_boundary(b).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn two_routes_agree(pair in big_pair(), raw in prop::collection::vec(-3i64..=3, 2)) {
        let raw = &raw[..pair.dim()];
        prop_assume!(raw.iter().any(|&x| x != 0));
        let data = Anticanonical::new(&pair).unwrap();
        let v = pair.valuation(raw).unwrap();
        prop_assert_eq!(data.s_curve(&v).unwrap(), data.s_barycenter(&v));
        prop_assert!(data.s_barycenter(&v).is_positive());
        prop_assert!(data.tau(&v).unwrap().is_positive());
    }

    #[test]
    fn ratio_is_scale_invariant(pair in big_pair(), raw in prop::collection::vec(-3i64..=3, 2), k in 1i64..=5) {
        let raw = &raw[..pair.dim()];
        prop_assume!(raw.iter().any(|&x| x != 0));
        let data = Anticanonical::new(&pair).unwrap();
        let scaled: Vec<i64> = raw.iter().map(|x| k * x).collect();
        let a = pair.log_discrepancy_raw(raw).unwrap() / data.s_barycenter_raw(raw);
        let b = pair.log_discrepancy_raw(&scaled).unwrap() / data.s_barycenter_raw(&scaled);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn lemma26_holds(pair in big_pair(), coeffs in prop::collection::vec(0i64..=3, 4), den in 1i64..=4) {
        let a = ToricDivisor::new(coeffs[..pair.num_rays()].iter().map(|&c| rat(c, den)).collect());
        let data = Anticanonical::new(&pair).unwrap();
        match data.lemma26_check(&a) {
            Ok(out) => {
                prop_assert!(out.pass, "S = {} below {}", out.s_value, out.bound);
                prop_assert_eq!(out.bound, rat(1, pair.dim() as i64 + 1));
            }
            Err(Error::Precondition(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn a_feasibility_is_monotone(pair in big_pair(), lo in 0i64..=24, step in 1i64..=12) {
        let (t1, t2) = (rat(lo, 4), rat(lo + step, 4));
        if a_feasibility(&pair, &t2).unwrap().is_some() {
            prop_assert!(a_feasibility(&pair, &t1).unwrap().is_some(), "feasible at {} but not {}", t2, t1);
        }
    }

    #[test]
    fn transfer_bound_exceeds_one(dn in 1i64..=40, dd in 1i64..=10, tn in 1i64..=40, td in 1i64..=10) {
        let d = Rational::one() + rat(dn, dd);
        let t = rat(tn, td);
        let b = delta_transfer_bound(&d, &t).unwrap();
        prop_assert!(b > Rational::one());
        prop_assert!(b <= d);
        prop_assert_eq!(transfer_formula(&int(1), &t).unwrap(), int(1));
    }
}

#[test]
fn lemma26_boundary_equality_on_fano_pairs() {
    for pair in [library::p1(), library::p2(), library::p1xp1(), library::blp2()] {
        let out = lemma26_check(&pair, &pair.log_anticanonical()).unwrap();
        assert_eq!(out.s_value, rat(1, pair.dim() as i64 + 1));
    }
    let f = library::p2().with_boundary(vec![rat(1, 2), int(0), rat(1, 4)]).unwrap();
    assert_eq!(lemma26_check(&f, &f.log_anticanonical()).unwrap().s_value, rat(1, 3));
    assert!(to_f64(&rat(1, 3)) > 0.0);
}
