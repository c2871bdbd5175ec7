//! The threefold `X = P_S(O ⊕ O(H))` over the blowup `S` of `P²` at nine very
//! general points, in intersection-number coordinates `h2 = H²`,
//! `hk = H·(-K_S)`, with `K_S² = 0`.
//!
//! `Y ⊂ X` is the section cut out by `O ⊕ O(H) → O`, and `A_X(Y) = 1`.
//!
//! The fiber integral is expanded as `(tH - K_S)² = t²H² + 2tH·(-K_S) + K_S²`.
//! Its printed form carries a minus sign on the middle term, which does not
//! reproduce the stated volume `H² + 3H·(-K_S)`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::piecewise::{fit_piecewise, integrate_piecewise, PiecewisePolynomial, Polynomial};
use crate::quadrature;
use crate::rational::{int, rat, serde_rational, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Example38Params {
    #[serde(with = "serde_rational")]
    h2: Rational,
    #[serde(with = "serde_rational")]
    hk: Rational,
}

impl Example38Params {
    pub fn new(h2: Rational, hk: Rational) -> Result<Self> {
        if !h2.is_positive() || !hk.is_positive() {
            return Err(Error::Precondition(format!(
                "H² = {h2} and H·(-K_S) = {hk} must both be positive"
            )));
        }
        Ok(Example38Params { h2, hk })
    }

    /// Allows zero values, for degenerate checks of the formulas.
    pub fn relaxed(h2: Rational, hk: Rational) -> Result<Self> {
        if h2.is_negative() || hk.is_negative() {
            return Err(Error::Precondition("intersection numbers must be nonnegative".into()));
        }
        Ok(Example38Params { h2, hk })
    }

    pub fn h2(&self) -> &Rational {
        &self.h2
    }

    pub fn hk(&self) -> &Rational {
        &self.hk
    }

    /// `K_S²`.
    pub fn ksq(&self) -> Rational {
        Rational::zero()
    }
}

/// `vol(-K_X) = H² + 3H·(-K_S)`.
pub fn vol_anticanonical(p: &Example38Params) -> Rational {
    &p.h2 + int(3) * &p.hk
}

/// `6 ∫_0^1 ½ (tH - K_S)² dt`.
pub fn vol_via_fiber_integral(p: &Example38Params) -> Rational {
    let integrand = Polynomial::new(vec![p.ksq(), int(2) * &p.hk, p.h2.clone()]);
    int(3) * integrand.integrate(&Rational::zero(), &Rational::one())
}

/// `t ↦ vol(-K_X - tY)` on `[0, 2]`.
pub fn vol_curve_y(p: &Example38Params) -> Result<PiecewisePolynomial> {
    let flat = Polynomial::constant(vol_anticanonical(p));
    let two_minus_t = Polynomial::from_ints(&[2, -1]);
    let quadratic = &Polynomial::from_ints(&[1, -1, 1]).scale(&p.h2) + &Polynomial::new(vec![
        Rational::zero(),
        int(3) * &p.hk,
    ]);
    let tail = &two_minus_t * &quadratic;
    let curve = PiecewisePolynomial::new(vec![int(0), int(1), int(2)], vec![flat, tail])?;
    if !curve.eval(&int(2))?.is_zero() {
        return Err(Error::Internal("vol(-K_X - 2Y) is not zero".into()));
    }
    Ok(curve)
}

/// `S_X(Y) = (7/4 H² + 5 H·(-K_S)) / (H² + 3 H·(-K_S))`.
pub fn s_of_y(p: &Example38Params) -> Result<Rational> {
    let vol = vol_anticanonical(p);
    if vol.is_zero() {
        return Err(Error::NotBig);
    }
    Ok((rat(7, 4) * &p.h2 + int(5) * &p.hk) / vol)
}

/// `(1/vol) ∫_0^2 vol(-K_X - tY) dt`.
pub fn s_of_y_integrated(p: &Example38Params) -> Result<Rational> {
    let curve = vol_curve_y(p)?;
    let vol = vol_anticanonical(p);
    if vol.is_zero() {
        return Err(Error::NotBig);
    }
    Ok(integrate_piecewise(&curve, &int(0), &int(2))? / vol)
}

/// Rebuilds the curve from exact samples of the two closed forms, with one
/// extra sample per chamber as a check.
pub fn vol_curve_y_sampled(p: &Example38Params, breakpoints: &[Rational]) -> Result<PiecewisePolynomial> {
    let closed = vol_curve_y(p)?;
    let mut samples = Vec::new();
    for w in breakpoints.windows(2) {
        for k in 1..=5 {
            let t = &w[0] + (&w[1] - &w[0]) * rat(k, 6);
            samples.push((t.clone(), closed.eval(&t)?));
        }
    }
    fit_piecewise(&samples, breakpoints, 3)
}

/// `A_X(Y) / S_X(Y) = 1 / S_X(Y)`, required to lie below `3/5`.
pub fn delta_bound_38(p: &Example38Params) -> Result<Rational> {
    let bound = Rational::one() / s_of_y(p)?;
    if bound >= rat(3, 5) {
        return Err(Error::Internal(format!("bound {bound} is not below 3/5")));
    }
    Ok(bound)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Example38Report {
    pub params: Example38Params,
    #[serde(with = "serde_rational")]
    pub volume: Rational,
    #[serde(with = "serde_rational")]
    pub volume_fiber: Rational,
    #[serde(with = "serde_rational")]
    pub s_closed: Rational,
    #[serde(with = "serde_rational")]
    pub s_integrated: Rational,
    #[serde(with = "serde_rational")]
    pub delta_bound: Rational,
    pub s_quadrature: f64,
    pub quadrature_error: f64,
    pub s_above_five_thirds: bool,
    pub bound_below_three_fifths: bool,
    pub routes_agree: bool,
    pub nonincreasing: bool,
}

impl Example38Report {
    pub fn all_pass(&self, tolerance: f64) -> bool {
        self.s_above_five_thirds
            && self.bound_below_three_fifths
            && self.routes_agree
            && self.nonincreasing
            && self.volume == self.volume_fiber
            && self.quadrature_error <= tolerance
    }
}

pub fn example38_report(p: &Example38Params, quad_nodes: usize) -> Result<Example38Report> {
    let curve = vol_curve_y(p)?;
    let volume = vol_anticanonical(p);
    let s_closed = s_of_y(p)?;
    let s_integrated = s_of_y_integrated(p)?;
    let quad = quadrature::composite(|t| curve.eval_f64(t), &[0.0, 1.0, 2.0], quad_nodes.max(1))
        / to_f64(&volume);
    let nonincreasing = curve.pieces().iter().zip(curve.breakpoints().windows(2)).all(|(piece, w)| {
        let d = piece.derivative();
        (0..=8).all(|k| !d.eval(&(&w[0] + (&w[1] - &w[0]) * rat(k, 8))).is_positive())
    });
    let delta_bound = Rational::one() / &s_closed;
    Ok(Example38Report {
        params: p.clone(),
        volume_fiber: vol_via_fiber_integral(p),
        s_above_five_thirds: s_closed > rat(5, 3),
        bound_below_three_fifths: delta_bound < rat(3, 5),
        routes_agree: s_closed == s_integrated,
        quadrature_error: quadrature::relative_error(quad, to_f64(&s_closed)),
        s_quadrature: quad,
        nonincreasing,
        volume,
        s_closed,
        s_integrated,
        delta_bound,
    })
}
