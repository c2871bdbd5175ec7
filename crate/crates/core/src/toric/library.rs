//! The six reference pairs: `P^1`, `P^2`, `P^1 x P^1`, the blowup of `P^2` at a
//! point, and the Hirzebruch surfaces `F_2`, `F_3`; all with empty boundary.

use super::fan::Fan;
use super::pair::ToricPair;

fn pair(dim: usize, rays: &[&[i64]], cones: &[&[usize]]) -> ToricPair {
    let fan = Fan::new(
        dim,
        rays.iter().map(|r| r.to_vec()).collect(),
        cones.iter().map(|c| c.to_vec()).collect(),
    )
    .expect("library fans are valid");
    ToricPair::without_boundary(fan)
}

pub fn p1() -> ToricPair {
    pair(1, &[&[1], &[-1]], &[&[0], &[1]])
}

pub fn p2() -> ToricPair {
    pair(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]])
}

pub fn p1xp1() -> ToricPair {
    pair(
        2,
        &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
    )
}

/// Rays `e1, e2, -e1-e2, e1+e2`; the last is the exceptional curve.
pub fn blp2() -> ToricPair {
    pair(
        2,
        &[&[1, 0], &[0, 1], &[-1, -1], &[1, 1]],
        &[&[0, 3], &[3, 1], &[1, 2], &[2, 0]],
    )
}

/// Hirzebruch surface `F_a` with rays `(1,0), (0,1), (-1,a), (0,-1)`.
pub fn hirzebruch(a: i64) -> ToricPair {
    pair(
        2,
        &[&[1, 0], &[0, 1], &[-1, a], &[0, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
    )
}

pub fn f2() -> ToricPair {
    hirzebruch(2)
}

pub fn f3() -> ToricPair {
    hirzebruch(3)
}

pub fn all() -> Vec<(&'static str, ToricPair)> {
    vec![
        ("p1", p1()),
        ("p2", p2()),
        ("p1xp1", p1xp1()),
        ("blp2", blp2()),
        ("f2", f2()),
        ("f3", f3()),
    ]
}

pub fn by_name(name: &str) -> Option<ToricPair> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, p)| p)
}
