//! Polytopes moving linearly in a parameter `t >= 0`, and their volume curves.
//!
//! Row `i` reads `<u, normal_i> >= -(bound_i - slope_i * t)`. The slice volume
//! `t ↦ vol(P_t)` is polynomial between consecutive `t`-values of vertices of
//! the lifted polytope `{(u, t) : t >= 0, ...}`, so those values are the
//! candidate breakpoints. Each chamber is sampled at `dim + 2` interior points
//! and interpolated; the extra sample guards against a missed breakpoint.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::piecewise::{fit_piecewise, PiecewisePolynomial};
use crate::polytope::{HPolytope, Inequality};
use crate::rational::{int, Rational};

#[derive(Debug, Clone)]
pub struct ParametricRow {
    pub normal: Vec<i64>,
    pub bound: Rational,
    pub slope: Rational,
}

#[derive(Debug, Clone)]
pub struct ParametricPolytope {
    dim: usize,
    rows: Vec<ParametricRow>,
}

impl ParametricPolytope {
    pub fn new(dim: usize, rows: Vec<ParametricRow>) -> Self {
        ParametricPolytope { dim, rows }
    }

    pub fn at(&self, t: &Rational) -> Result<HPolytope> {
        HPolytope::new(
            self.dim,
            self.rows
                .iter()
                .map(|r| Inequality::new(r.normal.clone(), &r.bound - &r.slope * t))
                .collect(),
        )
    }

    fn lifted(&self) -> Result<HPolytope> {
        let mut rows: Vec<(Vec<Rational>, Rational)> = self
            .rows
            .iter()
            .map(|r| {
                let mut a: Vec<Rational> = r.normal.iter().map(|&x| int(x)).collect();
                a.push(-r.slope.clone());
                (a, r.bound.clone())
            })
            .collect();
        let mut t_axis = vec![Rational::zero(); self.dim + 1];
        t_axis[self.dim] = int(1);
        rows.push((t_axis, Rational::zero()));
        HPolytope::from_rational_rows(self.dim + 1, rows)
    }

    /// Sorted distinct `t`-values of vertices of the lifted polytope.
    pub fn breakpoints(&self) -> Result<Vec<Rational>> {
        let lifted = self.lifted()?;
        let mut ts: Vec<Rational> = lifted
            .vertices()?
            .into_iter()
            .map(|v| v.point[self.dim].clone())
            .collect();
        ts.sort();
        ts.dedup();
        Ok(ts)
    }

    /// Largest `t` with `P_t` nonempty.
    pub fn threshold(&self) -> Result<Rational> {
        self.breakpoints()?
            .pop()
            .ok_or_else(|| Error::Infeasible("P_0 is empty".into()))
    }

    /// `t ↦ vol(P_t)` on `[0, threshold]`.
    pub fn volume_curve(&self) -> Result<PiecewisePolynomial> {
        let breaks = self.breakpoints()?;
        if breaks.is_empty() {
            return Err(Error::Infeasible("P_0 is empty".into()));
        }
        if breaks.len() == 1 {
            return Err(Error::Precondition(
                "P_t is empty for every t > 0; the curve has a one-point domain".into(),
            ));
        }
        let per_chamber = self.dim + 2;
        let mut samples = Vec::with_capacity(per_chamber * (breaks.len() - 1));
        for w in breaks.windows(2) {
            let width = &w[1] - &w[0];
            for k in 1..=per_chamber {
                let t = &w[0] + &width * Rational::new(k.into(), (per_chamber + 1).into());
                let vol = self.at(&t)?.volume_unchecked();
                samples.push((t, vol));
            }
        }
        fit_piecewise(&samples, &breaks, self.dim)
    }
}

/// Volume curve of `P ∩ {<u, w> >= c + t}`.
pub fn slice_curve(p: &HPolytope, w: &[i64], c: &Rational) -> Result<PiecewisePolynomial> {
    if !p.is_bounded() {
        return Err(Error::Unbounded("slicing an unbounded polytope".into()));
    }
    let mut rows: Vec<ParametricRow> = p
        .inequalities()
        .iter()
        .map(|q| ParametricRow {
            normal: q.normal.clone(),
            bound: q.bound.clone(),
            slope: Rational::zero(),
        })
        .collect();
    rows.push(ParametricRow {
        normal: w.to_vec(),
        bound: -c.clone(),
        slope: int(1),
    });
    ParametricPolytope::new(p.dim(), rows).volume_curve()
}
