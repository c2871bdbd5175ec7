//! Finitely presented linearly bounded filtrations of the section ring.
//!
//! Degree `m` stores the jumps `λ` of `𝓕^λ R_m` with `dim Gr^λ R_m`, so
//! `S_m(𝓕) = (1/(m N_m)) Σ λ · dim Gr^λ R_m`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::toric::ToricValuation;

use super::curve::Anticanonical;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeData {
    /// `N_m = dim R_m`.
    pub dim: u64,
    /// `(λ, dim Gr^λ R_m)` with `λ` strictly increasing.
    pub jumps: Vec<(Rational, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationData {
    pub level: u64,
    pub degrees: BTreeMap<u64, DegreeData>,
    pub e_minus: Rational,
    pub e_plus: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Degree,
    Monotone,
    Multiplicity,
    LinearBound,
    Submultiplicative,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::Degree => "degree",
            ViolationKind::Monotone => "monotone",
            ViolationKind::Multiplicity => "multiplicity",
            ViolationKind::LinearBound => "linear-bound",
            ViolationKind::Submultiplicative => "submultiplicative",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub degree: u64,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at m = {}: {}", self.kind, self.degree, self.detail)
    }
}

impl FiltrationData {
    /// Every section in `𝓕^0` and nothing above: one jump at `0`.
    pub fn trivial(level: u64, dims: &BTreeMap<u64, u64>) -> Self {
        FiltrationData {
            level,
            degrees: dims
                .iter()
                .map(|(&m, &dim)| {
                    (
                        m,
                        DegreeData {
                            dim,
                            jumps: vec![(Rational::zero(), dim)],
                        },
                    )
                })
                .collect(),
            e_minus: Rational::zero(),
            e_plus: int(1),
        }
    }

    /// The filtration `𝓕^λ R_m = {s : ord_v(s) >= λ}` of `-K-Δ`, read off the
    /// monomial basis.
    pub fn from_valuation(data: &Anticanonical, v: &ToricValuation, degrees: &[u64]) -> Result<Self> {
        let tau = data.tau(v)?;
        let mut out = BTreeMap::new();
        for &m in degrees {
            let sections = data.sections(m)?;
            let mut counts: BTreeMap<Rational, u64> = BTreeMap::new();
            for o in sections.orders(data, v.vector()) {
                *counts.entry(o).or_default() += 1;
            }
            out.insert(
                m,
                DegreeData {
                    dim: sections.count() as u64,
                    jumps: counts.into_iter().collect(),
                },
            );
        }
        Ok(FiltrationData {
            level: 1,
            degrees: out,
            e_minus: Rational::zero(),
            e_plus: tau + int(1),
        })
    }

    /// `𝓕'^λ R_m = 𝓕^{λ - mc} R_m`.
    pub fn shifted(&self, c: &Rational) -> Self {
        let mut f = self.clone();
        for (&m, d) in f.degrees.iter_mut() {
            let shift = c * int(m as i64);
            for (l, _) in d.jumps.iter_mut() {
                *l += &shift;
            }
        }
        f.e_minus += c;
        f.e_plus += c;
        f
    }

    fn max_jump(&self, m: u64) -> Option<&Rational> {
        self.degrees.get(&m)?.jumps.last().map(|(l, _)| l)
    }
}

/// Lists every failed encoded condition; empty means valid.
///
/// Multiplicativity is spot-checked on stored degree pairs through the top
/// jumps: a product of sections in the top pieces of `R_m` and `R_m'` is a
/// nonzero section of `R_{m+m'}` in `𝓕^{λ+λ'}`.
pub fn filtration_validate(f: &FiltrationData) -> Vec<Violation> {
    let mut out = Vec::new();
    for (&m, d) in &f.degrees {
        let mut push = |kind, detail: String| out.push(Violation { kind, degree: m, detail });
        if f.level == 0 || m == 0 || m % f.level != 0 {
            push(ViolationKind::Degree, format!("degree is not a positive multiple of level {}", f.level));
        }
        if d.jumps.windows(2).any(|w| w[0].0 >= w[1].0) {
            push(ViolationKind::Monotone, "jumps are not strictly increasing".into());
        }
        if d.jumps.iter().any(|(_, k)| *k == 0) {
            push(ViolationKind::Multiplicity, "zero multiplicity".into());
        }
        let total: u64 = d.jumps.iter().map(|(_, k)| k).sum();
        if total != d.dim {
            push(
                ViolationKind::Multiplicity,
                format!("multiplicities sum to {total}, dim R_m = {}", d.dim),
            );
        }
        let mm = int(m as i64);
        let low = &f.e_minus * &mm;
        let high = &f.e_plus * &mm;
        for (l, _) in &d.jumps {
            if *l < low || *l >= high {
                push(
                    ViolationKind::LinearBound,
                    format!("jump {l} outside [{low}, {high})"),
                );
            }
        }
    }
    let degrees: Vec<u64> = f.degrees.keys().copied().collect();
    for (i, &m) in degrees.iter().enumerate() {
        for &m2 in &degrees[i..] {
            let (Some(a), Some(b), Some(c)) = (f.max_jump(m), f.max_jump(m2), f.max_jump(m + m2)) else {
                continue;
            };
            if a + b > *c {
                out.push(Violation {
                    kind: ViolationKind::Submultiplicative,
                    degree: m + m2,
                    detail: format!("top jumps {a} + {b} exceed {c} in degree {}", m + m2),
                });
            }
        }
    }
    out
}

pub fn filtration_s_m(f: &FiltrationData, m: u64) -> Result<Rational> {
    let d = f.degrees.get(&m).ok_or(Error::MissingDegree(m))?;
    if d.dim == 0 {
        return Err(Error::NoSections(m));
    }
    let total: Rational = d.jumps.iter().map(|(l, k)| l * int(*k as i64)).sum();
    Ok(total / int(m as i64 * d.dim as i64))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SEstimate {
    pub value: Rational,
    pub degree: u64,
    /// `max - min` of `S_m` over the last three stored degrees.
    pub spread: Rational,
}

pub fn filtration_s_estimate(f: &FiltrationData) -> Result<SEstimate> {
    let tail: Vec<u64> = f.degrees.keys().rev().take(3).copied().collect();
    let &degree = tail.first().ok_or(Error::MissingDegree(0))?;
    let values = tail.iter().map(|&m| filtration_s_m(f, m)).collect::<Result<Vec<_>>>()?;
    let max = values.iter().max().expect("nonempty");
    let min = values.iter().min().expect("nonempty");
    Ok(SEstimate {
        spread: max - min,
        value: values[0].clone(),
        degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::toric::library;

    fn p2_filtration() -> FiltrationData {
        let data = Anticanonical::new(&library::p2()).unwrap();
        let v = data.pair().ray_valuation(0);
        FiltrationData::from_valuation(&data, &v, &[1, 2, 3, 4]).unwrap()
    }

    #[test]
    fn trivial_is_valid_with_zero_s() {
        let dims = BTreeMap::from([(1, 10), (2, 28)]);
        let f = FiltrationData::trivial(1, &dims);
        assert!(filtration_validate(&f).is_empty());
        assert_eq!(filtration_s_m(&f, 2).unwrap(), int(0));
    }

    #[test]
    fn valuation_filtration_matches_s_m() {
        let f = p2_filtration();
        assert!(filtration_validate(&f).is_empty());
        for m in 1..=4 {
            assert_eq!(filtration_s_m(&f, m).unwrap(), int(1));
        }
        let est = filtration_s_estimate(&f).unwrap();
        assert_eq!((est.value, est.degree, est.spread), (int(1), 4, int(0)));
    }

    #[test]
    fn shift_adds_constant() {
        let f = p2_filtration().shifted(&rat(1, 3));
        assert!(filtration_validate(&f).is_empty());
        assert_eq!(filtration_s_m(&f, 3).unwrap(), rat(4, 3));
    }

    #[test]
    fn detects_violations() {
        let mut f = p2_filtration();
        f.degrees.get_mut(&2).unwrap().jumps[0].0 = int(-1);
        let v = filtration_validate(&f);
        assert!(v.iter().any(|x| x.kind == ViolationKind::LinearBound));
        assert_eq!(ViolationKind::LinearBound.to_string(), "linear-bound");

        let mut f = p2_filtration();
        f.degrees.get_mut(&1).unwrap().jumps[0].1 += 1;
        assert!(filtration_validate(&f).iter().any(|x| x.kind == ViolationKind::Multiplicity));

        let mut f = p2_filtration();
        f.degrees.get_mut(&1).unwrap().jumps.reverse();
        assert!(filtration_validate(&f).iter().any(|x| x.kind == ViolationKind::Monotone));

        let mut f = p2_filtration();
        let top = f.degrees.get_mut(&4).unwrap().jumps.last_mut().unwrap();
        top.0 -= int(1);
        assert!(filtration_validate(&f).iter().any(|x| x.kind == ViolationKind::Submultiplicative));

        assert!(matches!(filtration_s_m(&f, 7), Err(Error::MissingDegree(7))));
    }
}
