//! Dense exact linear algebra over [`Rational`] by Gaussian elimination.

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Row-reduces `rows` in place and returns the pivot columns.
fn row_reduce(rows: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..rows[i].len() {
                    let delta = &f * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let cols = first.len();
    let mut m = rows.to_vec();
    row_reduce(&mut m, cols).len()
}

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug, n);
    if pivots.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[c][c];
            let (top, rest) = a.split_at_mut(i);
            for (x, p) in rest[0][c..n].iter_mut().zip(&top[c][c..n]) {
                *x -= &f * p;
            }
        }
    }
    det
}

pub fn determinant_i64(m: &[Vec<i64>]) -> Rational {
    determinant(&to_rational_matrix(m))
}

pub fn to_rational_matrix(m: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    m.iter()
        .map(|row| row.iter().map(|&x| Rational::from_integer(x.into())).collect())
        .collect()
}

/// Integer normal to the hyperplane spanned by `n - 1` vectors in `Z^n`
/// (generalized cross product by cofactors).
pub fn cofactor_normal(vectors: &[Vec<i64>], n: usize) -> Vec<i64> {
    debug_assert_eq!(vectors.len() + 1, n);
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = vectors
                .iter()
                .map(|v| {
                    v.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let d = determinant_i64(&minor);
            let d: i64 = d.to_integer().try_into().expect("cofactor fits in i64");
            if j % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn solves_small_system() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
    }

    #[test]
    fn singular_has_no_solution() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert!(solve(&a, &[int(1), int(2)]).is_none());
        assert_eq!(determinant(&a), int(0));
        assert_eq!(rank(&a), 1);
    }

    #[test]
    fn determinant_sign() {
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(determinant(&m(&[&[1, 0, 2], &[0, 3, 0], &[4, 0, 5]])), int(-9));
        assert_eq!(determinant(&[]), int(1));
    }

    #[test]
    fn cofactor_normal_is_orthogonal() {
        let vs = vec![vec![1, 2, 3], vec![0, 1, -1]];
        let nrm = cofactor_normal(&vs, 3);
        for v in &vs {
            assert_eq!(v.iter().zip(&nrm).map(|(a, b)| a * b).sum::<i64>(), 0);
        }
        assert_eq!(cofactor_normal(&[], 1), vec![1]);
        assert_eq!(cofactor_normal(&[vec![1, 0]], 2), vec![0, -1]);
    }
}
