//! The constant `a(X,Δ)` and the threshold `(n+1)/(n+1+a₀)`.
//!
//! `a(X,Δ)` is the sup of `t` admitting an ample `A` with `A + tD` ample and
//! `D - A` pseudoeffective, `D = -K-Δ`. Feasibility is monotone in `t`, so a
//! bisection over dyadic `t` brackets the sup. Each step is one exact LP in
//! `(α, u, s)`: maximize `s <= 1` subject to `ℓ·α >= s`, `ℓ·α + t ℓ·D >= s`
//! for every wall functional `ℓ`, and `<u, v_ρ> >= α_ρ - D_ρ`. The point `t` is
//! feasible iff the optimum is positive.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::{int, serde_rational, ExtRational, Rational};
use crate::toric::{ToricDivisor, ToricPair, ToricValuation};

use super::curve::Anticanonical;

pub const DEFAULT_DENOMINATOR_CAP: u64 = 1 << 16;
const MAX_DOUBLINGS: u32 = 64;

/// Certificate that `t` is feasible: an ample `A` with `A + tD` ample and `D - A` effective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub t: Rational,
    pub ample: ToricDivisor,
    /// A point of `P_{D-A}`.
    pub section: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum AInvariant {
    /// `-K-Δ` is nef, so every `t` is feasible.
    Infinite,
    /// `lower` is feasible (with certificate) and `upper` is not.
    Bracket {
        lower: Rational,
        upper: Rational,
        certificate: Certificate,
    },
}

impl AInvariant {
    pub fn lower(&self) -> ExtRational {
        match self {
            AInvariant::Infinite => ExtRational::Infinity,
            AInvariant::Bracket { lower, .. } => ExtRational::Finite(lower.clone()),
        }
    }

    pub fn upper(&self) -> ExtRational {
        match self {
            AInvariant::Infinite => ExtRational::Infinity,
            AInvariant::Bracket { upper, .. } => ExtRational::Finite(upper.clone()),
        }
    }
}

/// Solves the feasibility LP at `t`, returning a certificate when `t` is feasible.
pub fn a_feasibility(pair: &ToricPair, t: &Rational) -> Result<Option<Certificate>> {
    let d = pair.log_anticanonical();
    let k = pair.num_rays();
    let n = pair.dim();
    let walls = pair.wall_functionals();
    let vars = k + n + 1;
    let s = k + n;
    let mut lp = LinearProgram::new(vars);
    let mut obj = vec![Rational::zero(); vars];
    obj[s] = Rational::one();
    lp.maximize(obj);
    for ell in &walls {
        let ell_d: Rational = ell.iter().zip(d.coeffs()).map(|(l, a)| l * a).sum();
        let mut row = vec![Rational::zero(); vars];
        row[..k].clone_from_slice(ell);
        row[s] = -Rational::one();
        lp.constraint(row.clone(), Relation::Ge, Rational::zero());
        lp.constraint(row, Relation::Ge, -(t * ell_d));
    }
    for (r, ray) in pair.fan().rays().iter().enumerate() {
        let mut row = vec![Rational::zero(); vars];
        for (j, &x) in ray.iter().enumerate() {
            row[k + j] = int(x);
        }
        row[r] = -Rational::one();
        lp.constraint(row, Relation::Ge, -d.coeff(r).clone());
    }
    let mut cap = vec![Rational::zero(); vars];
    cap[s] = Rational::one();
    lp.constraint(cap, Relation::Le, Rational::one());

    match lp.solve() {
        LpOutcome::Optimal { value, point } if value.is_positive() => {
            let ample = ToricDivisor::new(point[..k].to_vec());
            let section = point[k..k + n].to_vec();
            let cert = Certificate {
                t: t.clone(),
                ample,
                section,
            };
            verify_certificate(pair, &cert)?;
            Ok(Some(cert))
        }
        LpOutcome::Optimal { .. } | LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(Error::Internal("a-invariant LP is capped but unbounded".into())),
    }
}

/// Re-checks a certificate with the exact ampleness and effectivity tests.
pub fn verify_certificate(pair: &ToricPair, cert: &Certificate) -> Result<()> {
    let d = pair.log_anticanonical();
    let shifted = cert.ample.add_scaled(&d, &cert.t);
    let rest = d.sub(&cert.ample);
    let inside = pair
        .fan()
        .rays()
        .iter()
        .enumerate()
        .all(|(r, ray)| crate::rational::dot_int(&cert.section, ray) >= -rest.coeff(r));
    if pair.is_ample(&cert.ample) && pair.is_ample(&shifted) && inside {
        Ok(())
    } else {
        Err(Error::Internal(format!("a-invariant certificate at t = {} does not verify", cert.t)))
    }
}

/// Brackets `a(X,Δ)` to width `1/denominator_cap`.
pub fn a_invariant(pair: &ToricPair, denominator_cap: u64) -> Result<AInvariant> {
    pair.ensure_big()?;
    if denominator_cap == 0 {
        return Err(Error::Precondition("denominator cap must be positive".into()));
    }
    if pair.is_nef(&pair.log_anticanonical()) {
        return Ok(AInvariant::Infinite);
    }
    let zero = Rational::zero();
    let mut best = a_feasibility(pair, &zero)?
        .ok_or_else(|| Error::Internal("big divisor admits no ample A below it".into()))?;
    let mut lo = zero;
    let mut hi = Rational::one();
    let mut doublings = 0;
    while let Some(cert) = a_feasibility(pair, &hi)? {
        lo = hi.clone();
        best = cert;
        hi *= int(2);
        doublings += 1;
        if doublings > MAX_DOUBLINGS {
            return Err(Error::Internal("a-invariant does not stabilize for a non-nef divisor".into()));
        }
    }
    let width = Rational::new(1.into(), denominator_cap.into());
    while &hi - &lo > width {
        let mid = (&lo + &hi) / int(2);
        match a_feasibility(pair, &mid)? {
            Some(cert) => {
                lo = mid;
                best = cert;
            }
            None => hi = mid,
        }
    }
    Ok(AInvariant::Bracket {
        lower: lo,
        upper: hi,
        certificate: best,
    })
}

/// `(n+1)/(n+1+a₀)`, zero when `a₀ = +∞`.
pub fn threshold(n: usize, a0: &ExtRational) -> Rational {
    match a0 {
        ExtRational::Infinity => Rational::zero(),
        ExtRational::Finite(a) => {
            let n1 = int(n as i64 + 1);
            &n1 / (&n1 + a)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateVerdict {
    AssumptionFails,
    GateInconclusive,
}

impl std::fmt::Display for GateVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GateVerdict::AssumptionFails => "assumption-fails",
            GateVerdict::GateInconclusive => "gate-inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GateReport {
    pub dim: usize,
    #[serde(with = "serde_rational")]
    pub delta_upper: Rational,
    pub witness: Option<ToricValuation>,
    #[serde(with = "serde_rational::ext")]
    pub a_lower: ExtRational,
    #[serde(with = "serde_rational::ext")]
    pub a_upper: ExtRational,
    /// Threshold at `a_upper`; the true threshold is at least this.
    #[serde(with = "serde_rational")]
    pub threshold_lower: Rational,
    /// Threshold at `a_lower`.
    #[serde(with = "serde_rational")]
    pub threshold_upper: Rational,
    pub verdict: GateVerdict,
}

/// Compares a `δ` upper bound with the threshold for `a₀ ∈ [a_lower, a_upper]`.
/// The assumption fails only when the bound lies strictly below every possible threshold.
pub fn gate_from_values(
    dim: usize,
    delta_upper: Rational,
    witness: Option<ToricValuation>,
    a_lower: ExtRational,
    a_upper: ExtRational,
) -> GateReport {
    let threshold_lower = threshold(dim, &a_upper);
    let threshold_upper = threshold(dim, &a_lower);
    let verdict = if delta_upper < threshold_lower {
        GateVerdict::AssumptionFails
    } else {
        GateVerdict::GateInconclusive
    };
    GateReport {
        dim,
        delta_upper,
        witness,
        a_lower,
        a_upper,
        threshold_lower,
        threshold_upper,
        verdict,
    }
}

pub fn assumption_gate(pair: &ToricPair, radius: u32, denominator_cap: u64) -> Result<GateReport> {
    let data = Anticanonical::new(pair)?;
    let bound = data.delta_upper(radius)?;
    let a = a_invariant(pair, denominator_cap)?;
    Ok(gate_from_values(
        pair.dim(),
        bound.value,
        Some(bound.witness),
        a.lower(),
        a.upper(),
    ))
}
