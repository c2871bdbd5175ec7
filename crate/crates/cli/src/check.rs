//! The `check` command: every invariant over the bundled library and the threefold grid.

use std::collections::BTreeMap;
use std::time::Instant;

use kstab_core::piecewise::{integrate_piecewise, PiecewisePolynomial};
use kstab_core::rational::{int, rat, to_f64, ExtRational, Rational};
use kstab_core::stability::{
    a_feasibility, a_invariant, assumption_gate, delta_transfer_bound, filtration_s_estimate,
    filtration_s_m, filtration_validate, gate_from_values, lemma37_constant, s_decomposition_check,
    verify_certificate, AInvariant, Anticanonical, FiltrationData, GateVerdict, ViolationKind,
};
use kstab_core::threefold::{
    delta_bound_38, example38_report, s_of_y, vol_anticanonical, vol_via_fiber_integral,
    Example38Params,
};
use kstab_core::toric::{library, ToricDivisor, ToricPair};
use num_traits::{Signed, Zero};

use crate::instance::{self, Expected, Instance};
use crate::output::{self, Report};
use crate::{CliError, Config, Fault};

/// `None` when the invariant holds, otherwise a counterexample.
type Verdict = Result<Option<String>, CliError>;

struct Checker {
    report: Report,
    failures: usize,
}

impl Checker {
    fn item(&mut self, name: &str, verdict: Verdict) {
        let (pass, detail) = match verdict {
            Ok(None) => (true, None),
            Ok(Some(c)) => (false, Some(c)),
            Err(e) => (false, Some(e.to_string())),
        };
        match detail {
            None => self.report.line(format!("PASS {name}")),
            Some(d) => {
                self.failures += 1;
                self.report.line(format!("FAIL {name}: {d}"));
            }
        }
        self.report.record("check", name, "pass", pass);
    }
}

fn first_failure<T>(items: impl IntoIterator<Item = T>, mut test: impl FnMut(T) -> Verdict) -> Verdict {
    for x in items {
        if let Some(c) = test(x)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

pub fn run(config: &Config, extra: &[String], fault: Option<Fault>) -> Result<(Report, usize), CliError> {
    let start = Instant::now();
    let bundled = instance::bundled()?;
    let mut extras = Vec::new();
    for spec in extra {
        extras.push(instance::load(spec)?);
    }
    let mut c = Checker {
        report: Report::default(),
        failures: 0,
    };
    let data: Vec<(String, Anticanonical)> = bundled
        .iter()
        .map(|i| Ok((i.name.clone(), Anticanonical::new(&i.pair)?)))
        .collect::<Result<_, CliError>>()?;

    c.item("bundled instances match the library", bundled_match(&bundled));
    c.item("two-route equality", two_routes(&data, config.radius, fault));
    c.item("Ehrhart leading coefficient", ehrhart(&data));
    c.item("log-discrepancy homogeneity", homogeneity(&data, config.radius));
    c.item("S_m convergence", convergence(&data, &config.schedule));
    c.item("delta_m equals lct on smooth fans", delta_m_lct(&data, &config.schedule));
    c.item("delta upper bounds", delta_values(&data, config.radius));
    c.item("S(A) >= 1/(n+1)", lemma26(&data));
    c.item("decomposition identities", decomposition(&bundled));
    c.item("A_Z/ord_B constant positive", lemma37(&bundled, config.radius));
    c.item("transfer bound above 1", transfer());
    c.item("a-invariant", a_values(&bundled, config.a_cap));
    c.item("assumption gate", gate(config));
    c.item("filtrations", filtrations(&data));
    c.item("threefold closed forms", threefold(config.quad_nodes));
    c.item("fiber-integral identity", fiber_identity());
    c.item("expected values", expected(bundled.iter().chain(&extras), config.radius));
    c.item("CSV round trip", csv_round_trip(&data));

    let elapsed = start.elapsed();
    c.report.line(format!(
        "{} invariant(s) failed in {:.2} s",
        c.failures,
        elapsed.as_secs_f64()
    ));
    Ok((c.report, c.failures))
}

fn bundled_match(bundled: &[Instance]) -> Verdict {
    first_failure(bundled, |inst| {
        let lib = library::by_name(&inst.name)
            .ok_or_else(|| CliError::Internal(format!("{} missing from the library", inst.name)))?;
        Ok((inst.pair.fan() != lib.fan() || inst.pair.boundary() != lib.boundary())
            .then(|| format!("{} differs from the library", inst.name)))
    })
}

fn corrupt(curve: &PiecewisePolynomial) -> PiecewisePolynomial {
    let mut bps = curve.breakpoints().to_vec();
    let last = bps.len() - 1;
    bps[last] += rat(1, 2);
    PiecewisePolynomial::from_parts_unchecked(bps, curve.pieces().to_vec())
}

fn two_routes(data: &[(String, Anticanonical)], radius: u32, fault: Option<Fault>) -> Verdict {
    let mut first = true;
    first_failure(data, |(name, d)| {
        first_failure(d.candidates(radius)?, |v| {
            let mut curve = d.vol_curve(&v)?;
            if fault == Some(Fault::CurveBreakpoint) && std::mem::take(&mut first) {
                curve = corrupt(&curve);
            }
            let (lo, hi) = curve.domain();
            let by_curve = integrate_piecewise(&curve, lo, hi)? / d.volume();
            let by_bary = d.s_barycenter(&v);
            Ok((by_curve != by_bary).then(|| {
                format!("{name} at v = {v}: curve gives {by_curve}, barycenter gives {by_bary}")
            }))
        })
    })
}

/// The `n`-th forward difference of `m -> #(mP ∩ M)` is `n! vol(P)` when `P` is a lattice polytope.
fn ehrhart(data: &[(String, Anticanonical)]) -> Verdict {
    first_failure(data, |(name, d)| {
        let pair = d.pair();
        if !pair.is_nef(d.divisor()) {
            return Ok(None);
        }
        let n = pair.dim();
        for start in [1u64, 2] {
            let counts = (0..=n as u64)
                .map(|k| Ok(int(d.sections(start + k)?.count() as i64)))
                .collect::<Result<Vec<_>, CliError>>()?;
            let mut diff = counts;
            for _ in 0..n {
                diff = diff.windows(2).map(|w| &w[1] - &w[0]).collect();
            }
            if diff[0] != *d.volume() {
                return Ok(Some(format!(
                    "{name}: difference from m = {start} is {}, volume {}",
                    diff[0],
                    d.volume()
                )));
            }
        }
        Ok(None)
    })
}

fn homogeneity(data: &[(String, Anticanonical)], radius: u32) -> Verdict {
    first_failure(data, |(name, d)| {
        first_failure(d.candidates(radius)?, |v| {
            let a = d.log_discrepancy(&v);
            first_failure([2i64, 3, 7], |k| {
                let scaled: Vec<i64> = v.vector().iter().map(|x| k * x).collect();
                let ak = d.pair().log_discrepancy_raw(&scaled)?;
                Ok((ak != int(k) * &a).then(|| format!("{name}: A({k}v) = {ak}, {k} A(v) = {} at v = {v}", int(k) * &a)))
            })
        })
    })
}

fn convergence(data: &[(String, Anticanonical)], schedule: &[u64]) -> Verdict {
    first_failure(data, |(name, d)| {
        let sections = schedule
            .iter()
            .map(|&m| d.sections(m))
            .collect::<Result<Vec<_>, _>>()?;
        first_failure(0..d.pair().num_rays(), |r| {
            let v = d.pair().ray_valuation(r);
            let s = d.s_barycenter(&v);
            let mut prev: Option<Rational> = None;
            for (sec, &m) in sections.iter().zip(schedule) {
                let sm = sec.s_m(d, &v);
                let gap = (&sm - &s).abs();
                if prev.as_ref().is_some_and(|p| gap > *p) {
                    return Ok(Some(format!("{name} ray {r}: |S_m - S| grows at m = {m}")));
                }
                if m >= 8 && s.is_positive() && sm > &s * rat(6, 5) {
                    return Ok(Some(format!("{name} ray {r}: S_{m} = {sm} above 1.2 S = {}", &s * rat(6, 5))));
                }
                prev = Some(gap);
            }
            let gap = prev.unwrap_or_default();
            Ok((to_f64(&gap) > 0.05).then(|| {
                format!(
                    "{name} ray {r}: |S_m - S| = {:.4} at m = {}",
                    to_f64(&gap),
                    schedule.last().copied().unwrap_or(0)
                )
            }))
        })
    })
}

fn delta_m_lct(data: &[(String, Anticanonical)], schedule: &[u64]) -> Verdict {
    first_failure(data, |(name, d)| {
        if !d.pair().fan().is_smooth() {
            return Ok(None);
        }
        first_failure(schedule.iter().filter(|&&m| m <= 8), |&m| {
            let bound = d.delta_m_upper(m)?;
            let lct = d.pair().lct_snc(&d.basis_type_divisor(m)?)?;
            Ok((bound != lct).then(|| format!("{name} m = {m}: bound {bound}, lct {lct}")))
        })
    })
}

fn delta_values(data: &[(String, Anticanonical)], radius: u32) -> Verdict {
    first_failure(data, |(name, d)| {
        let b = d.delta_upper(radius)?;
        let expect = match name.as_str() {
            "p1" | "p2" | "p1xp1" => Some((int(1), None)),
            "blp2" => Some((rat(6, 7), Some(vec![1i64, 1]))),
            _ => None,
        };
        let Some((value, witness)) = expect else {
            return Ok(None);
        };
        let witness_ok = witness.is_none_or(|w| b.witness.vector() == w.as_slice());
        Ok((b.value != value || !witness_ok)
            .then(|| format!("{name}: delta <= {} at {}, expected {value}", b.value, b.witness)))
    })
}

fn lemma26(data: &[(String, Anticanonical)]) -> Verdict {
    let steps = [Rational::zero(), rat(1, 2), int(1)];
    first_failure(data, |(name, d)| {
        let pair = d.pair();
        let k = pair.num_rays();
        if pair.is_ample(d.divisor()) {
            let eq = d.lemma26_check(d.divisor())?;
            if eq.s_value != eq.bound {
                return Ok(Some(format!("{name}: S(-K-Delta) = {}, expected {}", eq.s_value, eq.bound)));
            }
        }
        let mut tried = 0;
        for code in 0..steps.len().pow(k as u32) {
            let mut rest = code;
            let coeffs: Vec<Rational> = (0..k)
                .map(|_| {
                    let c = steps[rest % steps.len()].clone();
                    rest /= steps.len();
                    c
                })
                .collect();
            let a = ToricDivisor::new(coeffs);
            if !pair.is_ample(&a) || pair.divisor_polytope(&d.divisor().sub(&a)).is_empty()? {
                continue;
            }
            tried += 1;
            let out = d.lemma26_check(&a)?;
            if !out.pass {
                return Ok(Some(format!("{name}: S({a}) = {} < {}", out.s_value, out.bound)));
            }
            if tried >= 12 {
                break;
            }
        }
        Ok(None)
    })
}

fn decomposition(bundled: &[Instance]) -> Verdict {
    first_failure(bundled, |inst| {
        first_failure(s_decomposition_check(&inst.pair)?, |r| {
            Ok((!r.a_identity || !r.s_identity || r.ord_b.is_negative()).then(|| {
                format!(
                    "{} ray {:?}: A_X {} A_Z {} S_X {} S_Z {} ord_B {}",
                    inst.name, r.vector, r.a_x, r.a_z, r.s_x, r.s_z, r.ord_b
                )
            }))
        })
    })
}

fn lemma37(bundled: &[Instance], radius: u32) -> Verdict {
    first_failure(bundled, |inst| {
        let t = lemma37_constant(&inst.pair, radius)?;
        Ok((t <= ExtRational::Finite(Rational::zero())).then(|| format!("{}: constant {t}", inst.name)))
    })
}

fn transfer() -> Verdict {
    let deltas = [rat(11, 10), rat(3, 2), int(2), int(5)];
    let ts = [rat(1, 10), rat(1, 2), int(1), int(2), int(10)];
    first_failure(deltas.iter().flat_map(|dz| ts.iter().map(move |t| (dz, t))), |(dz, t)| {
        let b = delta_transfer_bound(dz, t)?;
        Ok((b <= int(1) || b > *dz).then(|| format!("delta_Z = {dz}, t = {t}: bound {b}")))
    })
}

fn a_values(bundled: &[Instance], cap: u64) -> Verdict {
    first_failure(bundled, |inst| {
        let pair = &inst.pair;
        let a = a_invariant(pair, cap)?;
        if pair.is_ample(&pair.log_anticanonical()) {
            return Ok((a != AInvariant::Infinite).then(|| format!("{}: ample but a = {a:?}", inst.name)));
        }
        if inst.name != "f3" {
            return Ok(None);
        }
        let AInvariant::Bracket { lower, upper, certificate } = a else {
            return Ok(Some("f3: expected a finite bracket".into()));
        };
        verify_certificate(pair, &certificate)?;
        if a_feasibility(pair, &upper)?.is_some() {
            return Ok(Some(format!("f3: {upper} is feasible")));
        }
        Ok((!(lower < int(5) && int(5) <= upper)).then(|| format!("f3: bracket [{lower}, {upper}] misses 5")))
    })
}

fn gate(config: &Config) -> Verdict {
    let p2 = assumption_gate(&library::p2(), config.radius, config.a_cap)?;
    if p2.verdict != GateVerdict::GateInconclusive {
        return Ok(Some(format!("p2: verdict {}", p2.verdict)));
    }
    let p = Example38Params::new(int(1), int(1))?;
    let bound = delta_bound_38(&p)?;
    let cases = [
        (int(0), GateVerdict::AssumptionFails),
        (int(1), GateVerdict::AssumptionFails),
        (int(2), GateVerdict::AssumptionFails),
        (rat(8, 3), GateVerdict::AssumptionFails),
        (int(10), GateVerdict::GateInconclusive),
    ];
    first_failure(cases, |(a0, want)| {
        let a0 = ExtRational::Finite(a0);
        let g = gate_from_values(3, bound.clone(), None, a0.clone(), a0.clone());
        Ok((g.verdict != want).then(|| format!("threefold with a = {a0}: {} (threshold {})", g.verdict, g.threshold_lower)))
    })
}

fn filtrations(data: &[(String, Anticanonical)]) -> Verdict {
    let degrees = [1u64, 2, 3, 4];
    first_failure(data, |(name, d)| {
        let dims: BTreeMap<u64, u64> = degrees
            .iter()
            .map(|&m| Ok((m, d.sections(m)?.count() as u64)))
            .collect::<Result<_, CliError>>()?;
        let trivial = FiltrationData::trivial(1, &dims);
        if let Some(v) = filtration_validate(&trivial).first() {
            return Ok(Some(format!("{name} trivial: {v}")));
        }
        let v = d.pair().ray_valuation(0);
        let f = FiltrationData::from_valuation(d, &v, &degrees)?;
        if let Some(bad) = filtration_validate(&f).first() {
            return Ok(Some(format!("{name} valuation {v}: {bad}")));
        }
        for &m in &degrees {
            if filtration_s_m(&f, m)? != d.s_m(&v, m)? {
                return Ok(Some(format!("{name} valuation {v}: S_{m} disagrees with sections")));
            }
        }
        let est = filtration_s_estimate(&f)?;
        if est.degree != 4 {
            return Ok(Some(format!("{name}: estimate from degree {}", est.degree)));
        }
        let c = rat(1, 3);
        let shifted = f.shifted(&c);
        if filtration_s_m(&shifted, 2)? != filtration_s_m(&f, 2)? + &c {
            return Ok(Some(format!("{name}: shift by {c} does not move S_2 by {c}")));
        }
        let mut broken = f.clone();
        broken.e_plus = Rational::zero();
        let found = filtration_validate(&broken)
            .iter()
            .any(|x| x.kind == ViolationKind::LinearBound);
        Ok((!found).then(|| format!("{name}: linear-bound violation not reported")))
    })
}

fn threefold(quad_nodes: usize) -> Verdict {
    let unit = Example38Params::new(int(1), int(1))?;
    if vol_anticanonical(&unit) != int(4) || s_of_y(&unit)? != rat(27, 16) || delta_bound_38(&unit)? != rat(16, 27) {
        return Ok(Some("unit parameters do not give 4, 27/16, 16/27".into()));
    }
    let values = [rat(1, 3), int(1), rat(7, 2)];
    first_failure(values.iter().flat_map(|a| values.iter().map(move |b| (a, b))), |(h2, hk)| {
        let p = Example38Params::new(h2.clone(), hk.clone())?;
        let r = example38_report(&p, quad_nodes)?;
        Ok((!r.all_pass(1e-9)).then(|| format!("H^2 = {h2}, H.(-K_S) = {hk}: {r:?}")))
    })
}

fn fiber_identity() -> Verdict {
    let values = [rat(1, 5), rat(1, 2), int(1), int(3), rat(17, 4)];
    first_failure(values.iter().flat_map(|a| values.iter().map(move |b| (a, b))), |(h2, hk)| {
        let p = Example38Params::new(h2.clone(), hk.clone())?;
        let (a, b) = (vol_via_fiber_integral(&p), vol_anticanonical(&p));
        Ok((a != b || a != h2 + int(3) * hk).then(|| format!("H^2 = {h2}, H.(-K_S) = {hk}: {a} vs {b}")))
    })
}

fn actual(inst: &Instance, key: Expected, radius: u32) -> Result<ExtRational, CliError> {
    let pair: &ToricPair = &inst.pair;
    let fin = ExtRational::Finite;
    Ok(match key {
        Expected::Volume => fin(pair.divisor_volume(&pair.log_anticanonical())?),
        Expected::DeltaUpper => fin(Anticanonical::new(pair)?.delta_upper(radius)?.value),
        Expected::S(i) => fin(Anticanonical::new(pair)?.s_barycenter(&pair.ray_valuation(i))),
        Expected::LogDiscrepancy(i) => fin(pair.log_discrepancy(&pair.ray_valuation(i))),
        Expected::OrdB(i) => fin(kstab_core::stability::ord_b(pair, &pair.ray_valuation(i))?),
        Expected::Lemma37 => lemma37_constant(pair, radius)?,
    })
}

fn expected<'a>(instances: impl Iterator<Item = &'a Instance>, radius: u32) -> Verdict {
    first_failure(instances, |inst| {
        first_failure(&inst.expected, |(key, want)| {
            let got = actual(inst, *key, radius)?;
            Ok((got != *want).then(|| format!("{} {key}: got {got}, pinned {want}", inst.name)))
        })
    })
}

fn csv_round_trip(data: &[(String, Anticanonical)]) -> Verdict {
    let mut rep = Report::default();
    let mut want = Vec::new();
    for (name, d) in data {
        for r in 0..d.pair().num_rays() {
            let v = d.pair().ray_valuation(r);
            let s = d.s_barycenter(&v);
            rep.record(name, &v, "S", s.clone());
            want.push(ExtRational::Finite(s));
        }
    }
    rep.record("check", "", "inf", ExtRational::Infinity);
    want.push(ExtRational::Infinity);
    let back = output::from_csv(&output::to_csv(&rep.records)?)?;
    let got: Vec<ExtRational> = back.into_iter().map(|r| r.3).collect();
    Ok((got != want).then(|| "values changed after writing and reading CSV".into()))
}
