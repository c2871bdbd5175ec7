//! Univariate rational polynomials and continuous piecewise-polynomial functions
//! on a bounded interval, with exact interpolation and integration.

use std::fmt;
use std::ops::{Add, Mul};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{int, to_f64, Rational};

/// Coefficients from the constant term upward, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    /// `t - a`
    pub fn linear_root(a: Rational) -> Self {
        Polynomial::new(vec![-a, int(1)])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial at 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + to_f64(c))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Polynomial::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    /// The antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Self {
        let mut out = vec![Rational::zero()];
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c / int(k as i64 + 1)),
        );
        Polynomial::new(out)
    }

    pub fn integrate(&self, a: &Rational, b: &Rational) -> Rational {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    /// Unique polynomial of degree `< points.len()` through distinct nodes.
    pub fn interpolate(points: &[(Rational, Rational)]) -> Option<Self> {
        let k = points.len();
        let vandermonde: Vec<Vec<Rational>> = points
            .iter()
            .map(|(t, _)| {
                let mut row = Vec::with_capacity(k);
                let mut p = int(1);
                for _ in 0..k {
                    row.push(p.clone());
                    p *= t;
                }
                row
            })
            .collect();
        let values: Vec<Rational> = points.iter().map(|(_, v)| v.clone()).collect();
        linalg::solve(&vandermonde, &values).map(Polynomial::new)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Polynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*t")?,
                _ => write!(f, "{a}*t^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Continuous function on `[t_0, t_k]` that is polynomial on each `[t_j, t_{j+1}]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePolynomial {
    breakpoints: Vec<Rational>,
    pieces: Vec<Polynomial>,
}

impl PiecewisePolynomial {
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Polynomial>) -> Result<Self> {
        if breakpoints.len() < 2 || pieces.len() + 1 != breakpoints.len() {
            return Err(Error::Malformed(format!(
                "{} breakpoints for {} pieces",
                breakpoints.len(),
                pieces.len()
            )));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Malformed("breakpoints must increase strictly".into()));
        }
        for j in 1..pieces.len() {
            let t = &breakpoints[j];
            if pieces[j - 1].eval(t) != pieces[j].eval(t) {
                return Err(Error::Discontinuous {
                    left: j - 1,
                    right: j,
                    t: t.to_string(),
                });
            }
        }
        let end = pieces.last().unwrap().eval(breakpoints.last().unwrap());
        if end.is_negative() {
            return Err(Error::Malformed(format!("negative terminal value {end}")));
        }
        Ok(PiecewisePolynomial { breakpoints, pieces })
    }

    /// Skips validation; used to build deliberately corrupted curves in fault-injection runs.
    pub fn from_parts_unchecked(breakpoints: Vec<Rational>, pieces: Vec<Polynomial>) -> Self {
        PiecewisePolynomial { breakpoints, pieces }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Polynomial] {
        &self.pieces
    }

    pub fn domain(&self) -> (&Rational, &Rational) {
        (&self.breakpoints[0], self.breakpoints.last().unwrap())
    }

    pub fn max_degree(&self) -> usize {
        self.pieces.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    fn piece_index(&self, t: &Rational) -> Option<usize> {
        let (a, b) = self.domain();
        if t < a || t > b {
            return None;
        }
        let idx = self.breakpoints.partition_point(|x| x <= t);
        Some(idx.saturating_sub(1).min(self.pieces.len() - 1))
    }

    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        let j = self
            .piece_index(t)
            .ok_or_else(|| Error::OutOfDomain(format!("t = {t}")))?;
        Ok(self.pieces[j].eval(t))
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        let j = self
            .breakpoints
            .partition_point(|x| to_f64(x) <= t)
            .saturating_sub(1)
            .min(self.pieces.len() - 1);
        self.pieces[j].eval_f64(t)
    }

    pub fn integrate(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        integrate_piecewise(self, a, b)
    }

    /// True when every piece has nonpositive derivative at its endpoints and at
    /// `samples` interior points.
    pub fn is_nonincreasing_sampled(&self, samples: usize) -> bool {
        self.pieces.iter().enumerate().all(|(j, p)| {
            let d = p.derivative();
            let (a, b) = (&self.breakpoints[j], &self.breakpoints[j + 1]);
            (0..=samples + 1).all(|k| {
                let t = a + (b - a) * Rational::new(k.into(), (samples + 1).into());
                !d.eval(&t).is_positive()
            })
        })
    }
}

/// Fits one polynomial of degree `<= degree_bound` per chamber from exact samples.
///
/// Samples strictly inside a chamber are used; the first `degree_bound + 1`
/// distinct ones determine the piece and every further one must agree with it.
pub fn fit_piecewise(
    samples: &[(Rational, Rational)],
    breakpoints: &[Rational],
    degree_bound: usize,
) -> Result<PiecewisePolynomial> {
    if breakpoints.len() < 2 || breakpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Malformed("breakpoints must increase strictly".into()));
    }
    let needed = degree_bound + 1;
    let mut pieces = Vec::with_capacity(breakpoints.len() - 1);
    for (chamber, w) in breakpoints.windows(2).enumerate() {
        let mut inside: Vec<(Rational, Rational)> = Vec::new();
        for (t, v) in samples {
            if *t > w[0] && *t < w[1] {
                match inside.iter().find(|(s, _)| s == t) {
                    Some((_, prev)) if prev != v => {
                        return Err(Error::Malformed(format!("conflicting samples at t = {t}")))
                    }
                    Some(_) => {}
                    None => inside.push((t.clone(), v.clone())),
                }
            }
        }
        if inside.len() < needed {
            return Err(Error::InsufficientSamples {
                chamber,
                found: inside.len(),
                needed,
            });
        }
        let poly = Polynomial::interpolate(&inside[..needed])
            .ok_or_else(|| Error::Internal("singular interpolation".into()))?;
        if let Some((t, _)) = inside[needed..].iter().find(|(t, v)| poly.eval(t) != *v) {
            return Err(Error::MissedBreakpoint {
                chamber,
                t: t.to_string(),
            });
        }
        pieces.push(poly);
    }
    PiecewisePolynomial::new(breakpoints.to_vec(), pieces)
}

/// Exact `∫_a^b pp(t) dt` for `a <= b` inside the domain.
pub fn integrate_piecewise(pp: &PiecewisePolynomial, a: &Rational, b: &Rational) -> Result<Rational> {
    let (lo, hi) = pp.domain();
    if a > b || a < lo || b > hi {
        return Err(Error::OutOfDomain(format!(
            "[{a}, {b}] not within [{lo}, {hi}]"
        )));
    }
    let mut total = Rational::zero();
    for (j, p) in pp.pieces.iter().enumerate() {
        let left = (&pp.breakpoints[j]).max(a);
        let right = (&pp.breakpoints[j + 1]).min(b);
        if left < right {
            total += p.integrate(left, right);
        }
    }
    Ok(total)
}
