//! Independent planar oracles: vertices by pairwise line intersection, area and
//! centroid by the shoelace formula, lattice points by a plain box scan.
#![allow(dead_code)]

use kstab_core::rational::{int, Rational};
use num_traits::{Signed, Zero};

/// `(a, b, c)` encodes `a x + b y >= -c`.
pub type Row = (i64, i64, Rational);

pub fn polygon(rows: &[Row]) -> Vec<(Rational, Rational)> {
    let mut pts: Vec<(Rational, Rational)> = Vec::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let (a1, b1, c1) = &rows[i];
            let (a2, b2, c2) = &rows[j];
            let det = a1 * b2 - a2 * b1;
            if det == 0 {
                continue;
            }
            // a1 x + b1 y = -c1, a2 x + b2 y = -c2
            let d = int(det);
            let x = (-c1 * int(*b2) + c2 * int(*b1)) / &d;
            let y = (-c2 * int(*a1) + c1 * int(*a2)) / &d;
            let inside = rows
                .iter()
                .all(|(a, b, c)| &x * int(*a) + &y * int(*b) + c >= Rational::zero());
            if inside && !pts.contains(&(x.clone(), y.clone())) {
                pts.push((x, y));
            }
        }
    }
    let n = int(pts.len().max(1) as i64);
    let cx: Rational = pts.iter().map(|p| p.0.clone()).sum::<Rational>() / &n;
    let cy: Rational = pts.iter().map(|p| p.1.clone()).sum::<Rational>() / &n;
    let f = |r: &Rational| kstab_core::rational::to_f64(r);
    pts.sort_by(|p, q| {
        let ap = (f(&p.1) - f(&cy)).atan2(f(&p.0) - f(&cx));
        let aq = (f(&q.1) - f(&cy)).atan2(f(&q.0) - f(&cx));
        ap.partial_cmp(&aq).unwrap()
    });
    pts
}

pub fn area(pts: &[(Rational, Rational)]) -> Rational {
    shoelace(pts).0
}

pub fn centroid(pts: &[(Rational, Rational)]) -> (Rational, Rational) {
    let (a, cx, cy) = shoelace(pts);
    (cx / (int(3) * &a), cy / (int(3) * &a))
}

/// Returns `(area, Σ (x_i + x_{i+1}) cross_i / 2, Σ (y_i + y_{i+1}) cross_i / 2)`.
fn shoelace(pts: &[(Rational, Rational)]) -> (Rational, Rational, Rational) {
    let mut a = Rational::zero();
    let mut cx = Rational::zero();
    let mut cy = Rational::zero();
    for i in 0..pts.len() {
        let (x0, y0) = &pts[i];
        let (x1, y1) = &pts[(i + 1) % pts.len()];
        let cross = x0 * y1 - x1 * y0;
        cx += (x0 + x1) * &cross;
        cy += (y0 + y1) * &cross;
        a += cross;
    }
    let half = Rational::new(1.into(), 2.into());
    (a.abs() * &half, cx * &half * a.signum(), cy * &half * a.signum())
}

pub fn count_lattice(rows: &[Row], m: i64, reach: i64) -> usize {
    let mut count = 0;
    for x in -reach..=reach {
        for y in -reach..=reach {
            if rows
                .iter()
                .all(|(a, b, c)| int(a * x + b * y) + c * int(m) >= Rational::zero())
            {
                count += 1;
            }
        }
    }
    count
}

/// Rows `<u, v_ρ> >= -a_ρ` of a planar divisor polytope.
pub fn divisor_rows(rays: &[[i64; 2]], coeffs: &[Rational]) -> Vec<Row> {
    rays.iter()
        .zip(coeffs)
        .map(|(r, c)| (r[0], r[1], c.clone()))
        .collect()
}

/// `ψ(v)` by trying every consecutive pair of rays as a cone (rays in angular order).
pub fn psi(rays: &[[i64; 2]], coeffs: &[Rational], v: [i64; 2]) -> Rational {
    let k = rays.len();
    for i in 0..k {
        let (p, q) = (rays[i], rays[(i + 1) % k]);
        let det = p[0] * q[1] - p[1] * q[0];
        let s = int(v[0] * q[1] - v[1] * q[0]) / int(det);
        let t = int(p[0] * v[1] - p[1] * v[0]) / int(det);
        if !s.is_negative() && !t.is_negative() {
            return -(s * &coeffs[i] + t * &coeffs[(i + 1) % k]);
        }
    }
    panic!("rays do not cover {v:?}");
}
