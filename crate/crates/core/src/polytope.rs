//! Rational polytopes in inequality form.
//!
//! A [`HPolytope`] is `{u : <u, normal_i> >= -bound_i}` with integer normals and
//! rational bounds, the shape of every divisor polytope `P_D`. Vertices come from
//! exhaustive `n`-subset intersection; volumes and barycenters from a
//! triangulation that cones each face from the centroid of its vertices.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::lp::{LinearProgram, Relation};
use crate::rational::{ceil_i64, dot_int, floor_i64, int, lcm_of_denominators, Rational};

/// Per-axis cap on `m * diam(P)` for lattice enumeration.
pub const LATTICE_AXIS_CAP: i64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    pub normal: Vec<i64>,
    pub bound: Rational,
}

impl Inequality {
    pub fn new(normal: Vec<i64>, bound: Rational) -> Self {
        Inequality { normal, bound }
    }

    /// `<u, normal> + bound`, nonnegative exactly on the half-space.
    pub fn slack(&self, u: &[Rational]) -> Rational {
        dot_int(u, &self.normal) + &self.bound
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub point: Vec<Rational>,
    /// Indices of the inequalities tight at this vertex.
    pub tight: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolytope {
    dim: usize,
    inequalities: Vec<Inequality>,
}

impl HPolytope {
    pub fn new(dim: usize, inequalities: Vec<Inequality>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Malformed("ambient dimension must be positive".into()));
        }
        for (i, ineq) in inequalities.iter().enumerate() {
            if ineq.normal.len() != dim {
                return Err(Error::Malformed(format!(
                    "inequality {i} has a normal of length {} in dimension {dim}",
                    ineq.normal.len()
                )));
            }
            if ineq.normal.iter().all(|&x| x == 0) {
                return Err(Error::Malformed(format!("inequality {i} has a zero normal")));
            }
        }
        Ok(HPolytope { dim, inequalities })
    }

    /// Builds from rows `<u, a> >= -b` with rational `a`, clearing denominators.
    pub fn from_rational_rows(dim: usize, rows: Vec<(Vec<Rational>, Rational)>) -> Result<Self> {
        let mut inequalities = Vec::with_capacity(rows.len());
        for (a, b) in rows {
            let scale = Rational::from_integer(lcm_of_denominators(&a));
            let normal = a
                .iter()
                .map(|x| {
                    (x * &scale)
                        .to_integer()
                        .to_i64()
                        .ok_or_else(|| Error::Malformed("normal does not fit in i64".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            inequalities.push(Inequality::new(normal, b * scale));
        }
        HPolytope::new(dim, inequalities)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    pub fn contains(&self, u: &[Rational]) -> bool {
        self.inequalities.iter().all(|q| !q.slack(u).is_negative())
    }

    /// Bounded iff the recession cone `{y : <y, normal_i> >= 0}` is `{0}`.
    pub fn is_bounded(&self) -> bool {
        let rows: Vec<Vec<Rational>> = self
            .inequalities
            .iter()
            .map(|q| q.normal.iter().map(|&x| int(x)).collect())
            .collect();
        if linalg::rank(&rows) < self.dim {
            return false;
        }
        // A nonzero recession direction would have positive total pairing.
        let mut lp = LinearProgram::new(self.dim);
        let mut total = vec![Rational::zero(); self.dim];
        for row in &rows {
            lp.constraint(row.clone(), Relation::Ge, Rational::zero());
            for (t, x) in total.iter_mut().zip(row) {
                *t += x;
            }
        }
        lp.constraint(total, Relation::Eq, Rational::one());
        !lp.solve().is_feasible()
    }

    fn ensure_bounded(&self) -> Result<()> {
        if self.is_bounded() {
            Ok(())
        } else {
            Err(Error::Unbounded(format!(
                "the {} inequalities do not cut out a bounded region",
                self.inequalities.len()
            )))
        }
    }

    pub fn vertices(&self) -> Result<Vec<Vertex>> {
        self.ensure_bounded()?;
        Ok(self.vertices_unchecked())
    }

    pub(crate) fn vertices_unchecked(&self) -> Vec<Vertex> {
        let n = self.dim;
        let mut found: BTreeMap<Vec<Rational>, ()> = BTreeMap::new();
        for subset in (0..self.inequalities.len()).combinations(n) {
            let a: Vec<Vec<Rational>> = subset
                .iter()
                .map(|&i| self.inequalities[i].normal.iter().map(|&x| int(x)).collect())
                .collect();
            let b: Vec<Rational> = subset
                .iter()
                .map(|&i| -self.inequalities[i].bound.clone())
                .collect();
            if let Some(p) = linalg::solve(&a, &b) {
                if self.contains(&p) {
                    found.insert(p, ());
                }
            }
        }
        found
            .into_keys()
            .map(|point| {
                let tight = self
                    .inequalities
                    .iter()
                    .enumerate()
                    .filter(|(_, q)| q.slack(&point).is_zero())
                    .map(|(i, _)| i)
                    .collect();
                Vertex { point, tight }
            })
            .collect()
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.vertices()?.is_empty())
    }

    /// Dimension of the affine hull, or `None` for the empty polytope.
    pub fn affine_dim(&self) -> Result<Option<usize>> {
        let vs = self.vertices()?;
        Ok(affine_dim(&vs.iter().map(|v| v.point.clone()).collect_vec()))
    }

    /// Inequality indices whose tight set is a facet (dimension `n - 1`).
    pub fn facets(&self) -> Result<Vec<usize>> {
        let vs = self.vertices()?;
        if affine_dim(&points(&vs)) != Some(self.dim) {
            return Ok(Vec::new());
        }
        let mut seen = Vec::new();
        let mut facets = Vec::new();
        for i in 0..self.inequalities.len() {
            let face: Vec<usize> = (0..vs.len()).filter(|&k| vs[k].tight.contains(&i)).collect();
            let pts: Vec<Vec<Rational>> = face.iter().map(|&k| vs[k].point.clone()).collect();
            if affine_dim(&pts) == Some(self.dim - 1) && !seen.contains(&face) {
                seen.push(face);
                facets.push(i);
            }
        }
        Ok(facets)
    }

    /// Simplices (as point lists) of a triangulation; empty when the interior is empty.
    pub fn triangulation(&self) -> Result<Vec<Vec<Vec<Rational>>>> {
        self.ensure_bounded()?;
        Ok(self.triangulation_unchecked())
    }

    fn triangulation_unchecked(&self) -> Vec<Vec<Vec<Rational>>> {
        let vs = self.vertices_unchecked();
        let all: Vec<usize> = (0..vs.len()).collect();
        if affine_dim(&points(&vs)) != Some(self.dim) {
            return Vec::new();
        }
        triangulate_face(&vs, &all, self.dim, self.inequalities.len())
    }

    pub fn volume(&self) -> Result<Rational> {
        self.ensure_bounded()?;
        Ok(self.volume_unchecked())
    }

    pub(crate) fn volume_unchecked(&self) -> Rational {
        self.triangulation_unchecked()
            .iter()
            .map(|s| simplex_volume(s))
            .sum()
    }

    /// Center of mass; `None` when the volume is zero.
    pub fn barycenter(&self) -> Result<Option<Vec<Rational>>> {
        let simplices = self.triangulation()?;
        let mut total = Rational::zero();
        let mut moment = vec![Rational::zero(); self.dim];
        let weight = int(self.dim as i64 + 1);
        for s in &simplices {
            let vol = simplex_volume(s);
            for p in s {
                for (m, x) in moment.iter_mut().zip(p) {
                    *m += &vol * x / &weight;
                }
            }
            total += vol;
        }
        if total.is_zero() {
            return Ok(None);
        }
        Ok(Some(moment.into_iter().map(|m| m / &total).collect()))
    }

    /// Exact `(min, max)` of `<u, w>` over the polytope.
    pub fn support_threshold(&self, w: &[i64]) -> Result<(Rational, Rational)> {
        if w.len() != self.dim {
            return Err(Error::Malformed(format!(
                "functional of length {} in dimension {}",
                w.len(),
                self.dim
            )));
        }
        let vs = self.vertices()?;
        let values = vs.iter().map(|v| dot_int(&v.point, w));
        match values.minmax() {
            itertools::MinMaxResult::NoElements => {
                Err(Error::Infeasible("support threshold of an empty polytope".into()))
            }
            itertools::MinMaxResult::OneElement(x) => Ok((x.clone(), x)),
            itertools::MinMaxResult::MinMax(a, b) => Ok((a, b)),
        }
    }

    /// Integer points of the dilation `m P`, in lexicographic order.
    pub fn lattice_points(&self, m: u64) -> Result<Vec<Vec<i64>>> {
        let vs = self.vertices()?;
        if vs.is_empty() {
            return Ok(Vec::new());
        }
        let scale = int(m as i64);
        let mut lo = Vec::with_capacity(self.dim);
        let mut hi = Vec::with_capacity(self.dim);
        for axis in 0..self.dim {
            let (a, b) = vs
                .iter()
                .map(|v| &v.point[axis] * &scale)
                .minmax()
                .into_option()
                .expect("nonempty");
            let (a, b) = (ceil_i64(&a), floor_i64(&b));
            let (Some(a), Some(b)) = (a, b) else {
                return Err(Error::LatticeCap("coordinates exceed i64".into()));
            };
            if b - a > LATTICE_AXIS_CAP {
                return Err(Error::LatticeCap(format!(
                    "axis {axis} spans {} lattice steps at m = {m} (cap {LATTICE_AXIS_CAP})",
                    b - a
                )));
            }
            lo.push(a);
            hi.push(b);
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Ok(Vec::new());
        }
        // <u, normal> >= ceil(-m * bound)
        let thresholds: Vec<i64> = self
            .inequalities
            .iter()
            .map(|q| ceil_i64(&(-&q.bound * &scale)).expect("threshold fits in i64"))
            .collect();
        let mut out = Vec::new();
        let mut u = lo.clone();
        loop {
            let inside = self
                .inequalities
                .iter()
                .zip(&thresholds)
                .all(|(q, &t)| q.normal.iter().zip(&u).map(|(a, b)| a * b).sum::<i64>() >= t);
            if inside {
                out.push(u.clone());
            }
            // odometer increment, last axis fastest
            let mut axis = self.dim;
            loop {
                if axis == 0 {
                    return Ok(out);
                }
                axis -= 1;
                if u[axis] < hi[axis] {
                    u[axis] += 1;
                    u[axis + 1..self.dim].copy_from_slice(&lo[axis + 1..self.dim]);
                    break;
                }
            }
        }
    }

    pub fn translated(&self, shift: &[i64]) -> HPolytope {
        let inequalities = self
            .inequalities
            .iter()
            .map(|q| {
                let s: i64 = q.normal.iter().zip(shift).map(|(a, b)| a * b).sum();
                Inequality::new(q.normal.clone(), &q.bound - int(s))
            })
            .collect();
        HPolytope {
            dim: self.dim,
            inequalities,
        }
    }

    /// Image under `u ↦ U u` for an integer matrix with `det U = ±1`.
    pub fn transformed(&self, u: &[Vec<i64>]) -> Result<HPolytope> {
        let det = linalg::determinant_i64(u);
        if det.abs() != Rational::one() {
            return Err(Error::Malformed("transformation is not unimodular".into()));
        }
        // new normal = U^{-T} normal, i.e. solve U^T x = normal
        let ut: Vec<Vec<Rational>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| int(u[j][i])).collect())
            .collect();
        let rows = self
            .inequalities
            .iter()
            .map(|q| {
                let rhs: Vec<Rational> = q.normal.iter().map(|&x| int(x)).collect();
                let x = linalg::solve(&ut, &rhs).expect("unimodular");
                (x, q.bound.clone())
            })
            .collect();
        HPolytope::from_rational_rows(self.dim, rows)
    }
}

fn points(vs: &[Vertex]) -> Vec<Vec<Rational>> {
    vs.iter().map(|v| v.point.clone()).collect()
}

pub fn affine_dim(pts: &[Vec<Rational>]) -> Option<usize> {
    let (first, rest) = pts.split_first()?;
    let diffs: Vec<Vec<Rational>> = rest
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    Some(linalg::rank(&diffs))
}

fn centroid(pts: &[&Vec<Rational>]) -> Vec<Rational> {
    let k = int(pts.len() as i64);
    let dim = pts[0].len();
    (0..dim)
        .map(|j| pts.iter().map(|p| p[j].clone()).sum::<Rational>() / &k)
        .collect()
}

/// Cones the face (given by vertex indices, of dimension `k`) from its
/// vertex centroid over a recursive triangulation of its facets.
fn triangulate_face(
    vs: &[Vertex],
    face: &[usize],
    k: usize,
    num_ineq: usize,
) -> Vec<Vec<Vec<Rational>>> {
    if k == 0 {
        return vec![vec![vs[face[0]].point.clone()]];
    }
    let apex = centroid(&face.iter().map(|&i| &vs[i].point).collect_vec());
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();
    for i in 0..num_ineq {
        let sub: Vec<usize> = face.iter().copied().filter(|&v| vs[v].tight.contains(&i)).collect();
        if sub.is_empty() || sub.len() == face.len() || seen.contains(&sub) {
            continue;
        }
        let pts: Vec<Vec<Rational>> = sub.iter().map(|&v| vs[v].point.clone()).collect();
        if affine_dim(&pts) != Some(k - 1) {
            continue;
        }
        for mut simplex in triangulate_face(vs, &sub, k - 1, num_ineq) {
            simplex.insert(0, apex.clone());
            out.push(simplex);
        }
        seen.push(sub);
    }
    out
}

/// Euclidean volume `|det(p_1 - p_0, ..., p_n - p_0)| / n!`.
pub fn simplex_volume(s: &[Vec<Rational>]) -> Rational {
    let n = s.len() - 1;
    let rows: Vec<Vec<Rational>> = s[1..]
        .iter()
        .map(|p| p.iter().zip(&s[0]).map(|(a, b)| a - b).collect())
        .collect();
    linalg::determinant(&rows).abs() / factorial(n)
}

pub fn factorial(n: usize) -> Rational {
    Rational::from_integer((1..=n as u64).map(BigInt::from).product())
}

pub fn polytope_volume(p: &HPolytope) -> Result<Rational> {
    p.volume()
}

pub fn lattice_points(p: &HPolytope, m: u64) -> Result<Vec<Vec<i64>>> {
    p.lattice_points(m)
}

pub fn support_threshold(p: &HPolytope, w: &[i64]) -> Result<(Rational, Rational)> {
    p.support_threshold(w)
}
