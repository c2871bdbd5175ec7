use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::rational::{serde_rational, ExtRational, Rational};
use crate::toric::{ToricPair, ToricValuation};

use super::ainv::{a_invariant, threshold, AInvariant};
use super::curve::{Anticanonical, Sections};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationReport {
    pub valuation: ToricValuation,
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub s_exact: Rational,
    #[serde(with = "serde_rational")]
    pub s_curve: Rational,
    #[serde(serialize_with = "serialize_table")]
    pub s_m: Vec<(u64, Rational)>,
    #[serde(with = "serde_rational")]
    pub tau: Rational,
    #[serde(with = "serde_rational")]
    pub ratio: Rational,
}

impl ValuationReport {
    pub fn routes_agree(&self) -> bool {
        self.s_exact == self.s_curve
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Flag {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    #[serde(with = "serde_rational")]
    pub volume: Rational,
    pub valuations: Vec<ValuationReport>,
    #[serde(with = "serde_rational")]
    pub delta_upper: Rational,
    pub witness: ToricValuation,
    #[serde(serialize_with = "serialize_ext_table")]
    pub delta_m_upper: Vec<(u64, ExtRational)>,
    #[serde(with = "serde_rational::ext")]
    pub a_lower: ExtRational,
    #[serde(with = "serde_rational::ext")]
    pub a_upper: ExtRational,
    /// Threshold `(n+1)/(n+1+a₀)` at `a_upper` and `a_lower`.
    #[serde(with = "serde_rational")]
    pub threshold_lower: Rational,
    #[serde(with = "serde_rational")]
    pub threshold_upper: Rational,
    pub flags: Vec<Flag>,
}

impl InvariantReport {
    pub fn all_pass(&self) -> bool {
        self.flags.iter().all(|f| f.pass)
    }
}

pub fn valuation_report(
    data: &Anticanonical,
    v: &ToricValuation,
    sections: &[Sections],
) -> Result<ValuationReport> {
    let a = data.log_discrepancy(v);
    let s_exact = data.s_barycenter(v);
    let s_curve = data.s_curve(v)?;
    Ok(ValuationReport {
        valuation: v.clone(),
        ratio: &a / &s_exact,
        a,
        s_m: sections.iter().map(|s| (s.m(), s.s_m(data, v))).collect(),
        tau: data.tau(v)?,
        s_exact,
        s_curve,
    })
}

pub fn invariant_report(
    pair: &ToricPair,
    radius: u32,
    schedule: &[u64],
    denominator_cap: u64,
) -> Result<InvariantReport> {
    let data = Anticanonical::new(pair)?;
    let sections = schedule.iter().map(|&m| data.sections(m)).collect::<Result<Vec<_>>>()?;
    let valuations = data
        .candidates(radius)?
        .iter()
        .map(|v| valuation_report(&data, v, &sections))
        .collect::<Result<Vec<_>>>()?;
    let bound = data.delta_upper(radius)?;
    let delta_m_upper = schedule
        .iter()
        .map(|&m| Ok((m, data.delta_m_upper(m)?)))
        .collect::<Result<Vec<_>>>()?;
    let a = a_invariant(pair, denominator_cap)?;
    let threshold_lower = threshold(pair.dim(), &a.upper());
    let threshold_upper = threshold(pair.dim(), &a.lower());

    let min_ratio = valuations.iter().map(|r| &r.ratio).min().expect("rays are candidates");
    let a_positive = match &a {
        AInvariant::Infinite => true,
        AInvariant::Bracket { lower, .. } => lower.is_positive(),
    };
    let flags = vec![
        flag("two-route equality", valuations.iter().all(ValuationReport::routes_agree)),
        flag("S positive", valuations.iter().all(|r| r.s_exact.is_positive())),
        flag("tau positive", valuations.iter().all(|r| r.tau.is_positive())),
        flag("delta upper is the minimum ratio", *min_ratio == bound.value),
        flag("a-invariant positive", a_positive),
        flag(
            "threshold below 1",
            !a_positive || (threshold_upper < Rational::one() && !threshold_lower.is_negative()),
        ),
        flag(
            "delta_m bounds positive",
            delta_m_upper.iter().all(|(_, d)| *d > ExtRational::Finite(Rational::zero())),
        ),
    ];
    Ok(InvariantReport {
        volume: data.volume().clone(),
        valuations,
        delta_upper: bound.value,
        witness: bound.witness,
        delta_m_upper,
        a_lower: a.lower(),
        a_upper: a.upper(),
        threshold_lower,
        threshold_upper,
        flags,
    })
}

fn flag(name: &str, pass: bool) -> Flag {
    Flag {
        name: name.to_string(),
        pass,
    }
}

fn serialize_table<S: serde::Serializer>(t: &[(u64, Rational)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(t.len()))?;
    for (m, v) in t {
        map.serialize_entry(&m.to_string(), &v.to_string())?;
    }
    map.end()
}

fn serialize_ext_table<S: serde::Serializer>(t: &[(u64, ExtRational)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(t.len()))?;
    for (m, v) in t {
        map.serialize_entry(&m.to_string(), &v.to_string())?;
    }
    map.end()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::toric::library;

    #[test]
    fn blp2_report() {
        let r = invariant_report(&library::blp2(), 2, &[2, 4], 16).unwrap();
        assert_eq!(r.volume, int(8));
        assert_eq!(r.delta_upper, rat(6, 7));
        assert!(r.all_pass(), "{:?}", r.flags);
        assert_eq!(r.a_lower, ExtRational::Infinity);
        assert_eq!(r.threshold_lower, int(0));
    }

    #[test]
    fn f3_report_has_finite_threshold() {
        let r = invariant_report(&library::f3(), 1, &[2], 1 << 8).unwrap();
        assert!(r.all_pass(), "{:?}", r.flags);
        assert!(r.threshold_upper < int(1));
        assert!(r.threshold_lower <= rat(3, 8) && rat(3, 8) <= r.threshold_upper);
    }
}
