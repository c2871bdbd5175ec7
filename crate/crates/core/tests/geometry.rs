mod common;

use kstab_core::error::Error;
use kstab_core::piecewise::{fit_piecewise, integrate_piecewise, PiecewisePolynomial, Polynomial};
use kstab_core::polytope::{lattice_points, polytope_volume, support_threshold, HPolytope, Inequality};
use kstab_core::quadrature;
use kstab_core::rational::{int, rat, to_f64, Rational};
use num_traits::Zero;
use proptest::prelude::*;

fn poly(rows: &[(Vec<i64>, Rational)]) -> HPolytope {
    let n = rows[0].0.len();
    HPolytope::new(
        n,
        rows.iter().map(|(v, b)| Inequality::new(v.clone(), b.clone())).collect(),
    )
    .unwrap()
}

fn unit_square() -> HPolytope {
    poly(&[
        (vec![1, 0], int(0)),
        (vec![0, 1], int(0)),
        (vec![-1, 0], int(1)),
        (vec![0, -1], int(1)),
    ])
}

fn simplex() -> HPolytope {
    poly(&[(vec![1, 0], int(0)), (vec![0, 1], int(0)), (vec![-1, -1], int(1))])
}

fn p2_triangle() -> HPolytope {
    poly(&[(vec![1, 0], int(1)), (vec![0, 1], int(1)), (vec![-1, -1], int(1))])
}

#[test]
fn volume_examples() {
    assert_eq!(polytope_volume(&unit_square()).unwrap(), int(1));
    assert_eq!(polytope_volume(&simplex()).unwrap(), rat(1, 2));
    assert_eq!(polytope_volume(&p2_triangle()).unwrap(), rat(9, 2));
    let tri = common::polygon(&[(1, 0, int(1)), (0, 1, int(1)), (-1, -1, int(1))]);
    assert_eq!(common::area(&tri), rat(9, 2));
}

#[test]
fn volume_errors_and_degenerate() {
    let half_plane = poly(&[(vec![1, 0], int(0))]);
    assert!(matches!(polytope_volume(&half_plane), Err(Error::Unbounded(_))));
    let segment = poly(&[
        (vec![1, 0], int(0)),
        (vec![-1, 0], int(0)),
        (vec![0, 1], int(0)),
        (vec![0, -1], int(1)),
    ]);
    assert_eq!(polytope_volume(&segment).unwrap(), int(0));
    assert!(matches!(
        HPolytope::new(2, vec![Inequality::new(vec![1, 0, 0], int(0))]),
        Err(Error::Malformed(_))
    ));
}

#[test]
fn lattice_examples() {
    let empty = poly(&[(vec![1], int(-1)), (vec![-1], int(0))]);
    assert!(lattice_points(&empty, 3).unwrap().is_empty());
    assert_eq!(lattice_points(&simplex(), 3).unwrap().len(), 10);
    let sq = lattice_points(&unit_square(), 1).unwrap();
    assert_eq!(sq, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    let rows = [(1, 0, int(0)), (0, 1, int(0)), (-1, -1, int(1))];
    assert_eq!(common::count_lattice(&rows, 3, 5), 10);
}

#[test]
fn support_examples() {
    assert_eq!(support_threshold(&unit_square(), &[1, 0]).unwrap(), (int(0), int(1)));
    assert_eq!(support_threshold(&p2_triangle(), &[1, 1]).unwrap(), (int(-2), int(1)));
    assert_eq!(support_threshold(&p2_triangle(), &[0, 0]).unwrap(), (int(0), int(0)));
    let empty = poly(&[(vec![1], int(-1)), (vec![-1], int(0))]);
    assert!(matches!(support_threshold(&empty, &[1]), Err(Error::Infeasible(_))));
}

#[test]
fn fit_examples() {
    let samples: Vec<(Rational, Rational)> = (1..=5)
        .map(|k| {
            let t = rat(k, 2);
            let v = (int(3) - &t) * (int(3) - &t);
            (t, v)
        })
        .collect();
    let pp = fit_piecewise(&samples, &[int(0), int(3)], 2).unwrap();
    assert_eq!(pp.pieces()[0], Polynomial::from_ints(&[9, -6, 1]));
    assert_eq!(integrate_piecewise(&pp, &int(0), &int(3)).unwrap(), int(9));

    let zeros: Vec<(Rational, Rational)> = (1..4).map(|k| (rat(k, 4), int(0))).collect();
    let pp = fit_piecewise(&zeros, &[int(0), int(1)], 1).unwrap();
    assert!(pp.pieces()[0].is_zero());
    assert_eq!(integrate_piecewise(&pp, &int(0), &int(1)).unwrap(), int(0));

    assert!(matches!(
        fit_piecewise(&samples[..2], &[int(0), int(3)], 2),
        Err(Error::InsufficientSamples { found: 2, needed: 3, .. })
    ));
}

#[test]
fn integrate_example38_pieces() {
    let first = Polynomial::from_ints(&[4]);
    // (2 - t)((t² - t + 1) + 3t) = (2 - t)(t² + 2t + 1)
    let second = &Polynomial::from_ints(&[2, -1]) * &Polynomial::from_ints(&[1, 2, 1]);
    let pp = PiecewisePolynomial::new(vec![int(0), int(1), int(2)], vec![first, second]).unwrap();
    assert_eq!(integrate_piecewise(&pp, &int(0), &int(2)).unwrap(), rat(27, 4));
    assert!(matches!(
        integrate_piecewise(&pp, &int(0), &int(3)),
        Err(Error::OutOfDomain(_))
    ));
}

fn random_polygon() -> impl Strategy<Value = Vec<(Vec<i64>, Rational)>> {
    // a box plus a few random cuts through a neighbourhood of the origin
    prop::collection::vec(((-3i64..=3, -3i64..=3), 1i64..=6, 1i64..=3), 0..4).prop_map(|cuts| {
        let mut rows = vec![
            (vec![1, 0], int(3)),
            (vec![-1, 0], int(2)),
            (vec![0, 1], int(2)),
            (vec![0, -1], int(3)),
        ];
        for ((a, b), num, den) in cuts {
            if (a, b) != (0, 0) {
                rows.push((vec![a, b], rat(num, den)));
            }
        }
        rows
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn volume_matches_shoelace(rows in random_polygon()) {
        let p = poly(&rows);
        let oracle_rows: Vec<common::Row> = rows.iter().map(|(v, b)| (v[0], v[1], b.clone())).collect();
        let pts = common::polygon(&oracle_rows);
        prop_assert_eq!(polytope_volume(&p).unwrap(), common::area(&pts));
        if let Some(b) = p.barycenter().unwrap() {
            let (cx, cy) = common::centroid(&pts);
            prop_assert_eq!(b, vec![cx, cy]);
        }
    }

    #[test]
    fn volume_is_affine_unimodular_invariant(
        rows in random_polygon(),
        shift in (-4i64..=4, -4i64..=4),
        k in -3i64..=3,
        swap in any::<bool>(),
    ) {
        let p = poly(&rows);
        let vol = polytope_volume(&p).unwrap();
        prop_assert_eq!(polytope_volume(&p.translated(&[shift.0, shift.1])).unwrap(), vol.clone());
        let mut u = vec![vec![1, k], vec![0, 1]];
        if swap {
            u.swap(0, 1);
        }
        prop_assert_eq!(polytope_volume(&p.transformed(&u).unwrap()).unwrap(), vol);
    }

    #[test]
    fn lattice_points_match_box_scan(rows in random_polygon(), m in 1u64..=3) {
        let p = poly(&rows);
        let oracle_rows: Vec<common::Row> = rows.iter().map(|(v, b)| (v[0], v[1], b.clone())).collect();
        let pts = lattice_points(&p, m).unwrap();
        prop_assert_eq!(pts.len(), common::count_lattice(&oracle_rows, m as i64, 3 * m as i64 + 1));
        let mut sorted = pts.clone();
        sorted.sort();
        prop_assert_eq!(sorted, pts);
    }

    #[test]
    fn ehrhart_counts_fit_a_polynomial(a in 1i64..=3, b in 1i64..=3, c in 0i64..=2) {
        // integral quadrilateral: vertices (0,0), (a,0), (a,b), (0, b + c) after clipping
        let p = poly(&[
            (vec![1, 0], int(0)),
            (vec![0, 1], int(0)),
            (vec![-1, 0], int(a)),
            (vec![-c, -a], int(a * (b + c))),
        ]);
        let counts: Vec<(Rational, Rational)> = (1..=4u64)
            .map(|m| (int(m as i64), int(lattice_points(&p, m).unwrap().len() as i64)))
            .collect();
        let fit = Polynomial::interpolate(&counts[..3]).unwrap();
        prop_assert_eq!(fit.eval(&counts[3].0), counts[3].1.clone());
        prop_assert!(fit.degree() <= 2);
        let leading = fit.coeffs().get(2).cloned().unwrap_or_else(Rational::zero);
        prop_assert_eq!(leading, polytope_volume(&p).unwrap());
    }

    #[test]
    fn fit_reproduces_sampled_curves(
        c0 in prop::collection::vec(-9i64..=9, 1..=4),
        c1 in prop::collection::vec(-9i64..=9, 1..=4),
        mid in 1i64..=5,
    ) {
        let p0 = Polynomial::from_ints(&c0);
        let mut q = Polynomial::from_ints(&c1);
        // shift the second piece to be continuous at t = mid/2
        let t1 = rat(mid, 2);
        let gap = p0.eval(&t1) - q.eval(&t1);
        q = &q + &Polynomial::constant(gap);
        let breaks = vec![int(0), t1.clone(), int(3)];
        let end = q.eval(&int(3));
        let lift = if end < Rational::zero() { -end } else { Rational::zero() };
        let p0 = &p0 + &Polynomial::constant(lift.clone());
        let q = &q + &Polynomial::constant(lift);
        let pp = PiecewisePolynomial::new(breaks.clone(), vec![p0, q]).unwrap();
        let mut samples = Vec::new();
        for w in breaks.windows(2) {
            for k in 1..=5 {
                let t = &w[0] + (&w[1] - &w[0]) * rat(k, 6);
                samples.push((t.clone(), pp.eval(&t).unwrap()));
            }
        }
        let fit = fit_piecewise(&samples, &breaks, 3).unwrap();
        prop_assert_eq!(&fit, &pp);
        let exact = integrate_piecewise(&fit, &int(0), &int(3)).unwrap();
        let quad = quadrature::composite(|t| pp.eval_f64(t), &[0.0, to_f64(&t1), 3.0], 64);
        prop_assert!(quadrature::relative_error(quad, to_f64(&exact)) < 1e-9 || to_f64(&exact).abs() < 1e-12);
    }
}
