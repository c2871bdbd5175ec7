use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polytope::{factorial, HPolytope, Inequality};
use crate::rational::{gcd_slice, int, ExtRational, Rational};

use super::fan::Fan;

/// Torus-invariant `Q`-divisor `Σ a_ρ D_ρ`, one coefficient per ray.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ToricDivisor {
    coeffs: Vec<Rational>,
}

impl ToricDivisor {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        ToricDivisor { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, ray: usize) -> &Rational {
        &self.coeffs[ray]
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> ToricDivisor {
        ToricDivisor::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn sub(&self, other: &ToricDivisor) -> ToricDivisor {
        ToricDivisor::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect())
    }

    pub fn add_scaled(&self, other: &ToricDivisor, c: &Rational) -> ToricDivisor {
        ToricDivisor::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b * c)
                .collect(),
        )
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|a| !a.is_negative())
    }
}

impl fmt::Display for ToricDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Divisorial toric valuation `ord_{E_v}` for a primitive lattice vector `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ToricValuation {
    vector: Vec<i64>,
    /// `raw = scale * vector` for the vector the valuation was built from.
    scale: i64,
}

impl ToricValuation {
    /// Primitivizes `raw`, recording the factor removed.
    pub fn new(raw: &[i64]) -> Result<Self> {
        let g = gcd_slice(raw);
        if g == 0 {
            return Err(Error::Precondition("valuation vector must be nonzero".into()));
        }
        Ok(ToricValuation {
            vector: raw.iter().map(|x| x / g).collect(),
            scale: g,
        })
    }

    pub fn vector(&self) -> &[i64] {
        &self.vector
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn was_primitive(&self) -> bool {
        self.scale == 1
    }
}

impl fmt::Display for ToricValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.vector.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A complete simplicial toric variety with boundary `Δ = Σ Δ_ρ D_ρ`, `0 <= Δ_ρ < 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricPair {
    fan: Fan,
    boundary: Vec<Rational>,
}

impl ToricPair {
    pub fn new(fan: Fan, boundary: Vec<Rational>) -> Result<Self> {
        if boundary.len() != fan.rays().len() {
            return Err(Error::InvalidPair(format!(
                "{} boundary coefficients for {} rays",
                boundary.len(),
                fan.rays().len()
            )));
        }
        if let Some((i, d)) = boundary
            .iter()
            .enumerate()
            .find(|(_, d)| d.is_negative() || **d >= Rational::one())
        {
            return Err(Error::InvalidPair(format!(
                "boundary coefficient {d} on ray {i} is outside [0, 1)"
            )));
        }
        Ok(ToricPair { fan, boundary })
    }

    pub fn without_boundary(fan: Fan) -> Self {
        let k = fan.rays().len();
        ToricPair {
            fan,
            boundary: vec![Rational::zero(); k],
        }
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    pub fn boundary(&self) -> &[Rational] {
        &self.boundary
    }

    pub fn num_rays(&self) -> usize {
        self.fan.rays().len()
    }

    /// `-K_X`, coefficient 1 on every ray.
    pub fn anticanonical(&self) -> ToricDivisor {
        ToricDivisor::new(vec![Rational::one(); self.num_rays()])
    }

    /// `-K_X - Δ`, coefficients `1 - Δ_ρ`.
    pub fn log_anticanonical(&self) -> ToricDivisor {
        ToricDivisor::new(self.boundary.iter().map(|d| Rational::one() - d).collect())
    }

    pub fn divisor(&self, coeffs: Vec<Rational>) -> Result<ToricDivisor> {
        if coeffs.len() != self.num_rays() {
            return Err(Error::InvalidPair(format!(
                "divisor has {} coefficients for {} rays",
                coeffs.len(),
                self.num_rays()
            )));
        }
        Ok(ToricDivisor::new(coeffs))
    }

    pub fn valuation(&self, raw: &[i64]) -> Result<ToricValuation> {
        if raw.len() != self.dim() {
            return Err(Error::Precondition(format!(
                "valuation has {} coordinates in dimension {}",
                raw.len(),
                self.dim()
            )));
        }
        ToricValuation::new(raw)
    }

    pub fn ray_valuation(&self, ray: usize) -> ToricValuation {
        ToricValuation::new(self.fan.ray(ray)).expect("rays are primitive")
    }

    /// `P_D = {u : <u, v_ρ> >= -a_ρ}`.
    pub fn divisor_polytope(&self, d: &ToricDivisor) -> HPolytope {
        HPolytope::new(
            self.dim(),
            self.fan
                .rays()
                .iter()
                .zip(d.coeffs())
                .map(|(v, a)| Inequality::new(v.clone(), a.clone()))
                .collect(),
        )
        .expect("rays are nonzero vectors of the right length")
    }

    /// `vol(D) = n! vol(P_D)`.
    pub fn divisor_volume(&self, d: &ToricDivisor) -> Result<Rational> {
        Ok(self.divisor_polytope(d).volume()? * factorial(self.dim()))
    }

    /// `ψ_D(v)`: linear on each maximal cone, `-a_ρ` on the ray `v_ρ`. `v` need not be primitive.
    pub fn support_value(&self, d: &ToricDivisor, v: &[i64]) -> Result<Rational> {
        let (cone, coef) = self
            .fan
            .locate(v)
            .ok_or_else(|| Error::Internal(format!("{v:?} lies in no cone of a complete fan")))?;
        Ok(self.fan.cones()[cone]
            .iter()
            .zip(&coef)
            .map(|(&r, c)| -(c * d.coeff(r)))
            .sum())
    }

    /// `A_{X,Δ}(v) = Σ c_ρ (1 - Δ_ρ)` for `v = Σ c_ρ v_ρ` in its cone; linear in raw `v`.
    pub fn log_discrepancy_raw(&self, v: &[i64]) -> Result<Rational> {
        Ok(-self.support_value(&self.log_anticanonical(), v)?)
    }

    pub fn log_discrepancy(&self, v: &ToricValuation) -> Rational {
        self.log_discrepancy_raw(v.vector())
            .expect("complete fans cover every vector")
    }

    /// `-K - Δ` big: its polytope is full-dimensional.
    pub fn is_big(&self) -> Result<bool> {
        let p = self.divisor_polytope(&self.log_anticanonical());
        Ok(p.affine_dim()? == Some(self.dim()))
    }

    pub fn ensure_big(&self) -> Result<()> {
        if self.is_big()? {
            Ok(())
        } else {
            Err(Error::NotBig)
        }
    }

    /// Wall-crossing functional: for the wall between `σ = S ∪ {p}` and
    /// `σ' = S ∪ {q}`, returns coefficients `ℓ` with `ℓ·a = a_q - Σ_{ρ∈σ} c_ρ a_ρ`,
    /// where `v_q = Σ c_ρ v_ρ`. `D` is strictly convex across the wall iff `ℓ·a > 0`.
    pub fn wall_functionals(&self) -> Vec<Vec<Rational>> {
        let fan = &self.fan;
        fan.walls()
            .iter()
            .map(|w| {
                let (cone, _) = w.sides[0];
                let (_, q) = w.sides[1];
                let sigma = &fan.cones()[cone];
                let coef = fan
                    .cone_coefficients(sigma, fan.ray(q))
                    .expect("maximal cones are full rank");
                let mut ell = vec![Rational::zero(); self.num_rays()];
                ell[q] += Rational::one();
                for (&r, c) in sigma.iter().zip(&coef) {
                    ell[r] -= c;
                }
                ell
            })
            .collect()
    }

    fn wall_values(&self, d: &ToricDivisor) -> Vec<Rational> {
        self.wall_functionals()
            .iter()
            .map(|ell| ell.iter().zip(d.coeffs()).map(|(l, a)| l * a).sum())
            .collect()
    }

    pub fn is_ample(&self, d: &ToricDivisor) -> bool {
        self.wall_values(d).iter().all(|x| x.is_positive())
    }

    pub fn is_nef(&self, d: &ToricDivisor) -> bool {
        self.wall_values(d).iter().all(|x| !x.is_negative())
    }

    /// `lct(X, Δ; D) = min_{d_ρ > 0} (1 - Δ_ρ) / d_ρ` on a smooth fan, where the
    /// boundary is simple normal crossing.
    pub fn lct_snc(&self, d: &ToricDivisor) -> Result<ExtRational> {
        if let Some(cone) = self.fan.first_singular_cone() {
            return Err(Error::RequiresSmooth(cone));
        }
        if !d.is_effective() {
            return Err(Error::NotEffective(format!("divisor {d} has a negative coefficient")));
        }
        Ok(d.coeffs()
            .iter()
            .zip(&self.boundary)
            .filter(|(a, _)| a.is_positive())
            .map(|(a, delta)| ExtRational::Finite((Rational::one() - delta) / a))
            .fold(ExtRational::Infinity, ExtRational::min))
    }

    pub fn with_boundary(&self, boundary: Vec<Rational>) -> Result<ToricPair> {
        ToricPair::new(self.fan.clone(), boundary)
    }

    pub fn ray_index(&self, v: &[i64]) -> Option<usize> {
        self.fan.rays().iter().position(|r| r == v)
    }
}

/// Ray-coefficient helper for tests and instance definitions.
pub fn divisor_from_ints(coeffs: &[i64]) -> ToricDivisor {
    ToricDivisor::new(coeffs.iter().map(|&c| int(c)).collect())
}
