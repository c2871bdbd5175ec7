//! Volume curves and the `S`, `S_m`, `δ`, `δ_m` quantities of a toric pair.
//!
//! For a toric valuation `v` with `ψ = ψ_{-K-Δ}`, the curve is
//! `G(t) = n! vol{u ∈ P : <u,v> - ψ(v) >= t}` and `S(v) = (1/vol) ∫ G`.
//! Integrating `<u,v> - ψ(v)` over `P` directly gives the second route
//! `S(v) = <bar(P), v> - ψ(v)`. At level `m` the monomials `χ^u`,
//! `u ∈ mP ∩ Z^n`, form a basis compatible with every toric filtration, with
//! `ord_v(χ^u) = <u,v> - m ψ(v)`.

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::parametric::{slice_curve, ParametricPolytope, ParametricRow};
use crate::piecewise::{integrate_piecewise, PiecewisePolynomial};
use crate::polytope::{factorial, HPolytope};
use crate::rational::{dot_int, int, ExtRational, Rational};
use crate::toric::{ToricDivisor, ToricPair, ToricValuation};

/// Cached data of `-K-Δ` on a pair with big anticanonical class.
#[derive(Debug, Clone)]
pub struct Anticanonical {
    pair: ToricPair,
    divisor: ToricDivisor,
    polytope: HPolytope,
    volume: Rational,
    barycenter: Vec<Rational>,
}

impl Anticanonical {
    pub fn new(pair: &ToricPair) -> Result<Self> {
        pair.ensure_big()?;
        let divisor = pair.log_anticanonical();
        let polytope = pair.divisor_polytope(&divisor);
        let volume = polytope.volume()? * factorial(pair.dim());
        let barycenter = polytope
            .barycenter()?
            .ok_or(Error::NotBig)?;
        Ok(Anticanonical {
            pair: pair.clone(),
            divisor,
            polytope,
            volume,
            barycenter,
        })
    }

    pub fn pair(&self) -> &ToricPair {
        &self.pair
    }

    pub fn divisor(&self) -> &ToricDivisor {
        &self.divisor
    }

    pub fn polytope(&self) -> &HPolytope {
        &self.polytope
    }

    /// `vol(-K-Δ)`.
    pub fn volume(&self) -> &Rational {
        &self.volume
    }

    pub fn barycenter(&self) -> &[Rational] {
        &self.barycenter
    }

    /// `ψ_{-K-Δ}(v)` for a raw vector.
    pub fn psi(&self, v: &[i64]) -> Rational {
        self.pair
            .support_value(&self.divisor, v)
            .expect("complete fans cover every vector")
    }

    /// Pseudoeffective threshold `τ = max_P <·,v> - ψ(v)`.
    pub fn tau(&self, v: &ToricValuation) -> Result<Rational> {
        let (_, max) = self.polytope.support_threshold(v.vector())?;
        Ok(max - self.psi(v.vector()))
    }

    /// `t ↦ vol(-μ*(K+Δ) - t E_v)` on `[0, τ]`.
    pub fn vol_curve(&self, v: &ToricValuation) -> Result<PiecewisePolynomial> {
        let psi = self.psi(v.vector());
        let euclid = slice_curve(&self.polytope, v.vector(), &psi)?;
        let scale = factorial(self.pair.dim());
        let curve = PiecewisePolynomial::new(
            euclid.breakpoints().to_vec(),
            euclid.pieces().iter().map(|p| p.scale(&scale)).collect(),
        )?;
        let (start, end) = curve.domain();
        let tau = self.tau(v)?;
        if !start.is_zero() || *end != tau {
            return Err(Error::Internal(format!(
                "curve domain [{start}, {end}] differs from [0, τ = {tau}] at {v}"
            )));
        }
        if curve.eval(&Rational::zero())? != self.volume || !curve.eval(&tau)?.is_zero() {
            return Err(Error::Internal(format!("curve endpoint values are wrong at {v}")));
        }
        Ok(curve)
    }

    /// `S(v)` by integrating the volume curve.
    pub fn s_curve(&self, v: &ToricValuation) -> Result<Rational> {
        let curve = self.vol_curve(v)?;
        let (a, b) = curve.domain();
        Ok(integrate_piecewise(&curve, a, b)? / &self.volume)
    }

    /// `S(v) = <bar(P), v> - ψ(v)`; linear in the raw vector.
    pub fn s_barycenter_raw(&self, v: &[i64]) -> Rational {
        dot_int(&self.barycenter, v) - self.psi(v)
    }

    pub fn s_barycenter(&self, v: &ToricValuation) -> Rational {
        self.s_barycenter_raw(v.vector())
    }

    pub fn log_discrepancy(&self, v: &ToricValuation) -> Rational {
        self.pair.log_discrepancy(v)
    }

    pub fn sections(&self, m: u64) -> Result<Sections> {
        if m == 0 {
            return Err(Error::Precondition("degree m must be positive".into()));
        }
        let points = self.polytope.lattice_points(m)?;
        if points.is_empty() {
            return Err(Error::NoSections(m));
        }
        Ok(Sections { m, points })
    }

    pub fn s_m(&self, v: &ToricValuation, m: u64) -> Result<Rational> {
        Ok(self.sections(m)?.s_m(self, v))
    }

    /// `D_m = Σ_ρ S_m(E_ρ) D_ρ`, the basis-type divisor of the monomial basis.
    pub fn basis_type_divisor(&self, m: u64) -> Result<ToricDivisor> {
        let sections = self.sections(m)?;
        let d = ToricDivisor::new(
            (0..self.pair.num_rays())
                .map(|r| sections.s_m(self, &self.pair.ray_valuation(r)))
                .collect(),
        );
        // D_m - (-K-Δ) = div(χ^w) with w the mean exponent over m
        let mean = sections.mean_exponent();
        for (r, ray) in self.pair.fan().rays().iter().enumerate() {
            if d.coeff(r) - self.divisor.coeff(r) != dot_int(&mean, ray) {
                return Err(Error::Internal(format!(
                    "basis-type divisor is not linearly equivalent to -K-Δ on ray {r}"
                )));
            }
        }
        Ok(d)
    }

    /// `min_ρ A(v_ρ) / S_m(v_ρ)`, an upper bound for `δ_m`. On smooth fans it is
    /// cross-checked against `lct(X, Δ; D_m)`.
    pub fn delta_m_upper(&self, m: u64) -> Result<ExtRational> {
        let d = self.basis_type_divisor(m)?;
        let bound = (0..self.pair.num_rays())
            .filter(|&r| d.coeff(r).is_positive())
            .map(|r| {
                ExtRational::Finite(self.log_discrepancy(&self.pair.ray_valuation(r)) / d.coeff(r))
            })
            .fold(ExtRational::Infinity, ExtRational::min);
        if self.pair.fan().is_smooth() {
            let lct = self.pair.lct_snc(&d)?;
            if lct != bound {
                return Err(Error::Internal(format!(
                    "lct of the basis-type divisor {lct} differs from min A/S_m {bound} at m = {m}"
                )));
            }
        }
        Ok(bound)
    }

    /// Fan rays first, then primitive vectors of sup-norm `<= radius` in lexicographic order.
    pub fn candidates(&self, radius: u32) -> Result<Vec<ToricValuation>> {
        candidates(&self.pair, radius)
    }

    /// `min A(v)/S(v)` over the candidate set with its first minimizer. An upper bound for `δ`.
    pub fn delta_upper(&self, radius: u32) -> Result<DeltaBound> {
        let mut best: Option<DeltaBound> = None;
        for v in self.candidates(radius)? {
            let ratio = self.log_discrepancy(&v) / self.s_barycenter(&v);
            if best.as_ref().is_none_or(|b| ratio < b.value) {
                best = Some(DeltaBound { value: ratio, witness: v });
            }
        }
        best.ok_or(Error::NoCandidates)
    }

    /// `S(A) = (1/vol) ∫_0^∞ vol(-K-Δ - tA) dt` for an ample `A` with `-K-Δ-A` pseudoeffective.
    pub fn lemma26_check(&self, a: &ToricDivisor) -> Result<Lemma26Outcome> {
        if a.len() != self.pair.num_rays() {
            return Err(Error::Precondition("divisor length differs from the ray count".into()));
        }
        if !self.pair.is_ample(a) {
            return Err(Error::Precondition(format!("A = {a} is not ample")));
        }
        let rest = self.divisor.sub(a);
        if self.pair.divisor_polytope(&rest).is_empty()? {
            return Err(Error::Precondition(format!(
                "-K-Δ-A = {rest} is not pseudoeffective"
            )));
        }
        let curve = divisor_volume_curve(&self.pair, &self.divisor, a)?;
        let (lo, hi) = curve.domain();
        let s = integrate_piecewise(&curve, lo, hi)? / &self.volume;
        let bound = Rational::new(1.into(), (self.pair.dim() as i64 + 1).into());
        Ok(Lemma26Outcome {
            pass: s >= bound,
            s_value: s,
            bound,
        })
    }
}

/// `t ↦ vol(D - tA)` on `[0, sup{t : D - tA pseudoeffective}]`.
pub fn divisor_volume_curve(
    pair: &ToricPair,
    d: &ToricDivisor,
    a: &ToricDivisor,
) -> Result<PiecewisePolynomial> {
    let rows = pair
        .fan()
        .rays()
        .iter()
        .enumerate()
        .map(|(r, v)| ParametricRow {
            normal: v.clone(),
            bound: d.coeff(r).clone(),
            slope: a.coeff(r).clone(),
        })
        .collect();
    let euclid = ParametricPolytope::new(pair.dim(), rows).volume_curve()?;
    let scale = factorial(pair.dim());
    PiecewisePolynomial::new(
        euclid.breakpoints().to_vec(),
        euclid.pieces().iter().map(|p| p.scale(&scale)).collect(),
    )
}

pub fn candidates(pair: &ToricPair, radius: u32) -> Result<Vec<ToricValuation>> {
    if radius == 0 {
        return Err(Error::NoCandidates);
    }
    let n = pair.dim();
    let r = radius as i64;
    let mut out: Vec<ToricValuation> = (0..pair.num_rays()).map(|i| pair.ray_valuation(i)).collect();
    for v in (0..n).map(|_| -r..=r).multi_cartesian_product() {
        if crate::rational::gcd_slice(&v) != 1 {
            continue;
        }
        let val = ToricValuation::new(&v)?;
        if !out.contains(&val) {
            out.push(val);
        }
    }
    Ok(out)
}

/// Mean-order data of the monomial basis of `H^0(-m(K+Δ))`.
#[derive(Debug, Clone)]
pub struct Sections {
    m: u64,
    points: Vec<Vec<i64>>,
}

impl Sections {
    pub fn m(&self) -> u64 {
        self.m
    }

    /// `N_m`.
    pub fn count(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    /// Orders of vanishing `<u,v> - mψ(v)` of the basis monomials along `E_v`.
    pub fn orders(&self, data: &Anticanonical, v: &[i64]) -> Vec<Rational> {
        let shift = data.psi(v) * int(self.m as i64);
        self.points
            .iter()
            .map(|u| int(u.iter().zip(v).map(|(a, b)| a * b).sum::<i64>()) - &shift)
            .collect()
    }

    /// `S_m(v) = (1/(m N_m)) Σ_u (<u,v> - mψ(v))`.
    pub fn s_m(&self, data: &Anticanonical, v: &ToricValuation) -> Rational {
        let vec = v.vector();
        let total: i128 = self
            .points
            .iter()
            .map(|u| u.iter().zip(vec).map(|(a, b)| (*a as i128) * (*b as i128)).sum::<i128>())
            .sum();
        let n_m = int(self.points.len() as i64);
        let mean = Rational::from_integer(total.into()) / &n_m;
        (mean - data.psi(vec) * int(self.m as i64)) / int(self.m as i64)
    }

    /// `(1/(m N_m)) Σ_u u`.
    pub fn mean_exponent(&self) -> Vec<Rational> {
        let n = self.points.first().map_or(0, Vec::len);
        let denom = int(self.m as i64 * self.points.len() as i64);
        (0..n)
            .map(|k| int(self.points.iter().map(|u| u[k]).sum::<i64>()) / &denom)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaBound {
    pub value: Rational,
    pub witness: ToricValuation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma26Outcome {
    pub s_value: Rational,
    pub bound: Rational,
    pub pass: bool,
}

pub fn vol_curve(pair: &ToricPair, v: &ToricValuation) -> Result<PiecewisePolynomial> {
    Anticanonical::new(pair)?.vol_curve(v)
}

pub fn s_invariant_curve(pair: &ToricPair, v: &ToricValuation) -> Result<Rational> {
    Anticanonical::new(pair)?.s_curve(v)
}

pub fn s_invariant_barycenter(pair: &ToricPair, v: &ToricValuation) -> Result<Rational> {
    Ok(Anticanonical::new(pair)?.s_barycenter(v))
}

pub fn s_m(pair: &ToricPair, v: &ToricValuation, m: u64) -> Result<Rational> {
    Anticanonical::new(pair)?.s_m(v, m)
}

pub fn basis_type_divisor(pair: &ToricPair, m: u64) -> Result<ToricDivisor> {
    Anticanonical::new(pair)?.basis_type_divisor(m)
}

pub fn delta_m_upper(pair: &ToricPair, m: u64) -> Result<ExtRational> {
    Anticanonical::new(pair)?.delta_m_upper(m)
}

pub fn delta_upper(pair: &ToricPair, radius: u32) -> Result<DeltaBound> {
    Anticanonical::new(pair)?.delta_upper(radius)
}

pub fn lemma26_check(pair: &ToricPair, a: &ToricDivisor) -> Result<Lemma26Outcome> {
    Anticanonical::new(pair)?.lemma26_check(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::Polynomial;
    use crate::rational::rat;
    use crate::toric::{divisor_from_ints, library};

    fn v(pair: &ToricPair, raw: &[i64]) -> ToricValuation {
        pair.valuation(raw).unwrap()
    }

    #[test]
    fn p2_curve_is_square() {
        let p2 = library::p2();
        let curve = vol_curve(&p2, &v(&p2, &[1, 0])).unwrap();
        assert_eq!(curve.breakpoints(), &[int(0), int(3)]);
        assert_eq!(curve.pieces()[0], Polynomial::from_ints(&[9, -6, 1]));
        assert_eq!(curve.eval(&int(3)).unwrap(), int(0));
    }

    #[test]
    fn p1_curve_is_linear() {
        let p1 = library::p1();
        let curve = vol_curve(&p1, &v(&p1, &[1])).unwrap();
        assert_eq!(curve.pieces()[0], Polynomial::from_ints(&[2, -1]));
        assert_eq!(curve.domain().1, &int(2));
    }

    #[test]
    fn s_invariants_by_both_routes() {
        let cases = [
            (library::p2(), vec![1, 0], int(1)),
            (library::p1xp1(), vec![1, 0], int(1)),
            (library::blp2(), vec![1, 1], rat(7, 6)),
            (library::p1(), vec![1], int(1)),
        ];
        for (pair, raw, expected) in cases {
            let val = v(&pair, &raw);
            assert_eq!(s_invariant_curve(&pair, &val).unwrap(), expected);
            assert_eq!(s_invariant_barycenter(&pair, &val).unwrap(), expected);
        }
        let data = Anticanonical::new(&library::blp2()).unwrap();
        assert_eq!(data.barycenter(), &[rat(1, 12), rat(1, 12)]);
    }

    #[test]
    fn s_m_examples() {
        let p1 = library::p1();
        assert_eq!(s_m(&p1, &v(&p1, &[1]), 1).unwrap(), int(1));
        let p2 = library::p2();
        let data = Anticanonical::new(&p2).unwrap();
        assert_eq!(data.sections(1).unwrap().count(), 10);
        for m in [1, 2, 3, 5, 8] {
            assert_eq!(data.s_m(&v(&p2, &[1, 0]), m).unwrap(), int(1));
        }
        let orders = data.sections(1).unwrap().orders(&data, &[1, 0]);
        assert_eq!(orders.iter().filter(|o| o.is_zero()).count(), 4);
    }

    #[test]
    fn basis_type_divisors() {
        let p2 = library::p2();
        assert_eq!(basis_type_divisor(&p2, 1).unwrap(), divisor_from_ints(&[1, 1, 1]));
        let p1 = library::p1();
        assert_eq!(basis_type_divisor(&p1, 1).unwrap(), divisor_from_ints(&[1, 1]));
    }

    #[test]
    fn delta_m_bounds() {
        assert_eq!(delta_m_upper(&library::p2(), 1).unwrap(), int(1).into());
        let half = library::p2()
            .with_boundary(vec![rat(1, 2), int(0), int(0)])
            .unwrap();
        let data = Anticanonical::new(&half).unwrap();
        let r0 = half.ray_valuation(0);
        let s = data.s_m(&r0, 2).unwrap();
        let d = data.delta_m_upper(2).unwrap();
        assert!(d <= ExtRational::Finite(rat(1, 2) / s));
        // S_m on the exceptional ray tends to 7/6
        let bl = Anticanonical::new(&library::blp2()).unwrap();
        let e = bl.pair().ray_valuation(3);
        let gaps: Vec<Rational> = [4u64, 12, 24]
            .iter()
            .map(|&m| (bl.s_m(&e, m).unwrap() - rat(7, 6)).abs())
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2]);
    }

    #[test]
    fn delta_upper_examples() {
        let d = delta_upper(&library::p2(), 3).unwrap();
        assert_eq!(d.value, int(1));
        let d = delta_upper(&library::blp2(), 3).unwrap();
        assert_eq!(d.value, rat(6, 7));
        assert_eq!(d.witness.vector(), &[1, 1]);
        assert_eq!(delta_upper(&library::p1xp1(), 2).unwrap().value, int(1));
        assert!(matches!(delta_upper(&library::p2(), 0), Err(Error::NoCandidates)));
    }

    #[test]
    fn lemma26_examples() {
        let p2 = library::p2();
        let h = divisor_from_ints(&[1, 0, 0]);
        let out = lemma26_check(&p2, &h).unwrap();
        assert_eq!(out.s_value, int(1));
        assert!(out.pass);
        let p1 = library::p1();
        let out = lemma26_check(&p1, &divisor_from_ints(&[1, 0])).unwrap();
        assert_eq!(out.s_value, int(1));
        assert_eq!(out.bound, rat(1, 2));
        let out = lemma26_check(&p2, &p2.anticanonical()).unwrap();
        assert_eq!(out.s_value, rat(1, 3));
        assert!(out.pass);
        // 2H is too big: -K - 2H = H - ... still effective; 4H is not
        assert!(matches!(
            lemma26_check(&p2, &divisor_from_ints(&[4, 0, 0])),
            Err(Error::Precondition(m)) if m.contains("pseudoeffective")
        ));
        assert!(matches!(
            lemma26_check(&p2, &divisor_from_ints(&[0, 0, 0])),
            Err(Error::Precondition(m)) if m.contains("ample")
        ));
    }

    #[test]
    fn candidate_set() {
        let p2 = library::p2();
        let c = candidates(&p2, 1).unwrap();
        // rays first, then the remaining primitive vectors of the 3x3 box
        assert_eq!(c.len(), 8);
        assert_eq!(c[0].vector(), &[1, 0]);
        let c3 = candidates(&p2, 3).unwrap();
        assert!(c3.iter().all(|v| v.was_primitive()));
    }
}
