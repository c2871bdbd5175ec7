use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{gcd_slice, int, Rational};

/// Codimension-one face shared by two maximal cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    /// Ray indices spanning the wall.
    pub shared: Vec<usize>,
    /// `(cone, ray of that cone off the wall)` for both sides.
    pub sides: [(usize, usize); 2],
}

/// A complete simplicial fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
    walls: Vec<Wall>,
}

impl Fan {
    /// Validates primitivity, simpliciality, and completeness.
    ///
    /// Completeness with proper intersections is checked as: every wall lies in
    /// exactly two maximal cones which sit on opposite sides of it, and one
    /// generic vector lies in the interior of exactly one maximal cone.
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidFan("dimension must be positive".into()));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::InvalidFan(format!(
                    "ray {i} has {} coordinates, expected {dim}",
                    r.len()
                )));
            }
            if r.iter().all(|&x| x == 0) {
                return Err(Error::InvalidFan(format!("ray {i} is zero")));
            }
            if gcd_slice(r) != 1 {
                return Err(Error::InvalidFan(format!("ray {i} = {r:?} is not primitive")));
            }
            if rays[..i].contains(r) {
                return Err(Error::InvalidFan(format!("ray {i} = {r:?} is repeated")));
            }
        }
        let mut normalized = Vec::with_capacity(cones.len());
        for (c, cone) in cones.iter().enumerate() {
            let mut idx = cone.clone();
            idx.sort_unstable();
            idx.dedup();
            if idx.len() != dim || cone.len() != dim {
                return Err(Error::InvalidFan(format!(
                    "cone {c} has {} distinct rays; simplicial maximal cones need exactly {dim}",
                    idx.len()
                )));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::InvalidFan(format!("cone {c} references missing ray {bad}")));
            }
            let m: Vec<Vec<i64>> = idx.iter().map(|&i| rays[i].clone()).collect();
            if linalg::determinant_i64(&m).is_zero() {
                return Err(Error::InvalidFan(format!("cone {c} has linearly dependent rays")));
            }
            normalized.push(idx);
        }
        if normalized.is_empty() {
            return Err(Error::InvalidFan("no maximal cones".into()));
        }
        if let Some(unused) = (0..rays.len()).find(|i| !normalized.iter().any(|c| c.contains(i))) {
            return Err(Error::InvalidFan(format!("ray {unused} lies in no cone")));
        }

        let mut by_wall: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (c, cone) in normalized.iter().enumerate() {
            for &off in cone {
                let shared: Vec<usize> = cone.iter().copied().filter(|&i| i != off).collect();
                by_wall.entry(shared).or_default().push((c, off));
            }
        }
        let mut walls = Vec::with_capacity(by_wall.len());
        for (shared, sides) in by_wall {
            if sides.len() != 2 {
                return Err(Error::InvalidFan(format!(
                    "wall spanned by rays {shared:?} lies in {} cones; a complete fan needs 2",
                    sides.len()
                )));
            }
            let span: Vec<Vec<i64>> = shared.iter().map(|&i| rays[i].clone()).collect();
            let normal = linalg::cofactor_normal(&span, dim);
            let side = |ray: usize| -> i64 {
                rays[ray].iter().zip(&normal).map(|(a, b)| a * b).sum::<i64>().signum()
            };
            if side(sides[0].1) * side(sides[1].1) >= 0 {
                return Err(Error::InvalidFan(format!(
                    "cones {} and {} overlap across the wall spanned by rays {shared:?}",
                    sides[0].0, sides[1].0
                )));
            }
            walls.push(Wall {
                shared,
                sides: [sides[0], sides[1]],
            });
        }

        let fan = Fan {
            dim,
            rays,
            cones: normalized,
            walls,
        };
        fan.check_generic_cover()?;
        Ok(fan)
    }

    fn check_generic_cover(&self) -> Result<()> {
        let hyperplanes: Vec<Vec<i64>> = self
            .walls
            .iter()
            .map(|w| {
                let span: Vec<Vec<i64>> = w.shared.iter().map(|&i| self.rays[i].clone()).collect();
                linalg::cofactor_normal(&span, self.dim)
            })
            .collect();
        // points on the moment curve avoid any fixed finite set of hyperplanes eventually
        let probe = (2i64..)
            .map(|p| (0..self.dim).map(|k| p.pow(k as u32) * if k % 2 == 1 { -1 } else { 1 }).collect_vec())
            .find(|w| {
                hyperplanes
                    .iter()
                    .all(|h| h.iter().zip(w).map(|(a, b)| a * b).sum::<i64>() != 0)
            })
            .expect("a generic probe exists");
        let interior = self
            .cones
            .iter()
            .filter(|cone| {
                self.cone_coefficients(cone, &probe)
                    .is_some_and(|c| c.iter().all(|x| x.is_positive()))
            })
            .count();
        if interior != 1 {
            return Err(Error::InvalidFan(format!(
                "generic vector {probe:?} lies in {interior} cones; the fan is not complete with disjoint interiors"
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    /// Every maximal cone spanned by a lattice basis.
    pub fn is_smooth(&self) -> bool {
        self.first_singular_cone().is_none()
    }

    pub fn first_singular_cone(&self) -> Option<usize> {
        self.cones.iter().position(|cone| {
            let m: Vec<Vec<i64>> = cone.iter().map(|&i| self.rays[i].clone()).collect();
            linalg::determinant_i64(&m).abs() != Rational::one()
        })
    }

    /// Coefficients of `v` in the basis of the cone's rays.
    pub fn cone_coefficients(&self, cone: &[usize], v: &[i64]) -> Option<Vec<Rational>> {
        // columns are rays: solve sum_k c_k ray_k = v
        let a: Vec<Vec<Rational>> = (0..self.dim)
            .map(|row| cone.iter().map(|&i| int(self.rays[i][row])).collect())
            .collect();
        let b: Vec<Rational> = v.iter().map(|&x| int(x)).collect();
        linalg::solve(&a, &b)
    }

    /// The first maximal cone containing `v`, with `v`'s coefficients on its rays.
    pub fn locate(&self, v: &[i64]) -> Option<(usize, Vec<Rational>)> {
        self.cones.iter().enumerate().find_map(|(c, cone)| {
            self.cone_coefficients(cone, v)
                .filter(|coef| coef.iter().all(|x| !x.is_negative()))
                .map(|coef| (c, coef))
        })
    }
}
