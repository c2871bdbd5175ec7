use std::path::Path;

use kstab_core::rational::{parse_rational, rat, to_f64, Rational};
use kstab_core::stability::{
    a_invariant, gate_from_values, lemma37_constant, s_decomposition_check, AInvariant,
    Anticanonical, GateVerdict,
};
use kstab_core::threefold::{example38_report, vol_curve_y, Example38Params};
use kstab_core::toric::{anticanonical_model, ToricValuation};
use num_traits::Signed;

use crate::instance::{self, Instance};
use crate::output::{Report, Value};
use crate::{CliError, Config};

/// A report to print and the exit status to return after printing it.
pub type Outcome = (Report, Result<(), CliError>);

fn pass(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn parse_vector(text: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| CliError::User(format!("`{text}` is not a comma-separated integer vector")))
        })
        .collect()
}

fn valuation(inst: &Instance, ray: Option<usize>, v: Option<&str>) -> Result<ToricValuation, CliError> {
    let pair = &inst.pair;
    match (ray, v) {
        (Some(i), _) => {
            if i >= pair.num_rays() {
                return Err(CliError::User(format!(
                    "ray {i} out of range; {} has {} rays",
                    inst.name,
                    pair.num_rays()
                )));
            }
            Ok(pair.ray_valuation(i))
        }
        (None, Some(text)) => {
            let raw = parse_vector(text)?;
            if raw.len() != pair.dim() {
                return Err(CliError::User(format!(
                    "vector has {} coordinates, {} has dimension {}",
                    raw.len(),
                    inst.name,
                    pair.dim()
                )));
            }
            let val = pair.valuation(&raw)?;
            if !val.was_primitive() {
                eprintln!("notice: {text} is not primitive; using {val}");
            }
            Ok(val)
        }
        (None, None) => Err(CliError::User("give --ray or --v".into())),
    }
}

pub fn volume(inst: &str, divisor: &str) -> Result<Outcome, CliError> {
    let inst = instance::load(inst)?;
    let d = inst.divisor(divisor)?;
    let vol = inst.pair.divisor_volume(&d)?;
    let mut rep = Report::default();
    rep.line(vol.to_string());
    rep.record(&inst.name, divisor, "volume", vol);
    Ok((rep, Ok(())))
}

pub fn s(inst: &str, ray: Option<usize>, v: Option<&str>, config: &Config) -> Result<Outcome, CliError> {
    let inst = instance::load(inst)?;
    let v = valuation(&inst, ray, v)?;
    let data = Anticanonical::new(&inst.pair)?;
    let a = data.log_discrepancy(&v);
    let s_exact = data.s_barycenter(&v);
    let s_curve = data.s_curve(&v)?;
    let tau = data.tau(&v)?;
    let curve = data.vol_curve(&v)?;
    let name = &inst.name;

    let mut rep = Report::default();
    rep.line(format!("instance {name}, valuation {v}"));
    rep.line(format!("A = {a}"));
    rep.line(format!("S (barycenter) = {s_exact}"));
    rep.line(format!("S (curve) = {s_curve}"));
    rep.line(format!("tau = {tau}"));
    for (piece, w) in curve.pieces().iter().zip(curve.breakpoints().windows(2)) {
        rep.line(format!("  vol on [{}, {}]: {piece}", w[0], w[1]));
    }
    rep.record(name, &v, "A", a.clone());
    rep.record(name, &v, "S", s_exact.clone());
    rep.record(name, &v, "S-curve", s_curve.clone());
    rep.record(name, &v, "tau", tau);
    for &m in &config.schedule {
        let sm = data.s_m(&v, m)?;
        rep.line(format!("S_{m} = {sm}"));
        rep.record(name, &v, &format!("S_{m}"), sm);
    }
    let ratio = &a / &s_exact;
    rep.line(format!("A/S = {ratio}"));
    rep.record(name, &v, "A/S", ratio);
    let status = if s_exact == s_curve {
        Ok(())
    } else {
        Err(CliError::Inconsistent(format!(
            "S routes disagree at {v}: barycenter {s_exact}, curve {s_curve}"
        )))
    };
    Ok((rep, status))
}

pub fn sm(inst: &str, ray: Option<usize>, v: Option<&str>, config: &Config) -> Result<Outcome, CliError> {
    let inst = instance::load(inst)?;
    let v = valuation(&inst, ray, v)?;
    let data = Anticanonical::new(&inst.pair)?;
    let s = data.s_barycenter(&v);
    let mut rep = Report::default();
    rep.line(format!("instance {}, valuation {v}, S = {s}", inst.name));
    rep.record(&inst.name, &v, "S", s.clone());
    for &m in &config.schedule {
        let sections = data.sections(m)?;
        let sm = sections.s_m(&data, &v);
        let gap = (&sm - &s).abs();
        rep.line(format!(
            "m = {m}: N_m = {}, S_m = {sm}, |S_m - S| = {:.6}",
            sections.count(),
            to_f64(&gap)
        ));
        rep.record(&inst.name, &v, &format!("S_{m}"), sm);
        rep.record(&inst.name, &v, &format!("N_{m}"), Rational::from_integer((sections.count() as i64).into()));
    }
    Ok((rep, Ok(())))
}

pub fn delta(inst: &str, config: &Config) -> Result<Outcome, CliError> {
    let inst = instance::load(inst)?;
    let data = Anticanonical::new(&inst.pair)?;
    let bound = data.delta_upper(config.radius)?;
    let mut rep = Report::default();
    rep.line(format!("{} witness {}", bound.value, bound.witness));
    for v in data.candidates(config.radius)? {
        let a = data.log_discrepancy(&v);
        let s = data.s_barycenter(&v);
        rep.record(&inst.name, &v, "A", a.clone());
        rep.record(&inst.name, &v, "S", s.clone());
        rep.record(&inst.name, &v, "A/S", a / s);
    }
    rep.record(&inst.name, &bound.witness, "delta-upper", bound.value);
    Ok((rep, Ok(())))
}

pub fn delta_m(inst: &str, config: &Config) -> Result<Outcome, CliError> {
    let inst = instance::load(inst)?;
    let data = Anticanonical::new(&inst.pair)?;
    let mut rep = Report::default();
    for &m in &config.schedule {
        let d = data.basis_type_divisor(m)?;
        let bound = data.delta_m_upper(m)?;
        rep.line(format!("m = {m}: delta_m <= {bound}, D_m = {d}"));
        rep.record(&inst.name, format!("m={m}"), "delta-m-upper", bound);
        for (r, c) in d.coeffs().iter().enumerate() {
            rep.record(&inst.name, format!("m={m}"), &format!("D_m-ray-{r}"), c.clone());
        }
    }
    Ok((rep, Ok(())))
}

pub fn a(inst: &str, config: &Config) -> Result<Outcome, CliError> {
    let inst = instance::load(inst)?;
    let pair = &inst.pair;
    let a = a_invariant(pair, config.a_cap)?;
    let data = Anticanonical::new(pair)?;
    let bound = data.delta_upper(config.radius)?;
    let mut rep = Report::default();
    match &a {
        AInvariant::Infinite => rep.line("a = inf (-K-Delta is nef)"),
        AInvariant::Bracket { lower, upper, certificate } => {
            rep.line(format!("a in [{lower}, {upper}]"));
            rep.line(format!("  feasible at {lower}: A = {}", certificate.ample));
            rep.line(format!("  infeasible at {upper}"));
        }
    }
    let gate = gate_from_values(pair.dim(), bound.value, Some(bound.witness), a.lower(), a.upper());
    rep.line(format!(
        "threshold (n+1)/(n+1+a) in [{}, {}]",
        gate.threshold_lower, gate.threshold_upper
    ));
    rep.line(format!(
        "delta <= {} (witness {}): {}",
        gate.delta_upper,
        gate.witness.as_ref().map_or(String::new(), |w| w.to_string()),
        gate.verdict
    ));
    let name = &inst.name;
    rep.record(name, "", "a-lower", a.lower());
    rep.record(name, "", "a-upper", a.upper());
    rep.record(name, "", "threshold-lower", gate.threshold_lower.clone());
    rep.record(name, "", "threshold-upper", gate.threshold_upper.clone());
    rep.record(
        name,
        gate.witness.as_ref().map_or(String::new(), |w| w.to_string()),
        "delta-upper",
        gate.delta_upper.clone(),
    );
    rep.record(name, gate.verdict, "assumption-fails", gate.verdict == GateVerdict::AssumptionFails);
    Ok((rep, Ok(())))
}

pub fn model(inst: &str, config: &Config) -> Result<Outcome, CliError> {
    let inst = instance::load(inst)?;
    let model = anticanonical_model(&inst.pair)?;
    let rows = s_decomposition_check(&inst.pair)?;
    let t = lemma37_constant(&inst.pair, config.radius)?;
    let mut rep = Report::default();
    let rays: Vec<String> = model
        .target
        .fan()
        .rays()
        .iter()
        .map(|r| format!("{r:?}"))
        .collect();
    rep.line(format!("model rays: {}", rays.join(" ")));
    rep.line(format!(
        "{:>4} {:>10} {:>8} {:>8} {:>8} {:>8} {:>8}  identities",
        "ray", "vector", "A_X", "A_Z", "S_X", "S_Z", "ord(B)"
    ));
    let mut ok = true;
    for r in &rows {
        let holds = r.a_identity && r.s_identity && !r.ord_b.is_negative();
        ok &= holds;
        rep.line(format!(
            "{:>4} {:>10} {:>8} {:>8} {:>8} {:>8} {:>8}  {}",
            r.ray,
            format!("{:?}", r.vector),
            r.a_x.to_string(),
            r.a_z.to_string(),
            r.s_x.to_string(),
            r.s_z.to_string(),
            r.ord_b.to_string(),
            pass(holds)
        ));
        let cand = format!("ray-{}", r.ray);
        rep.record(&inst.name, &cand, "A_X", r.a_x.clone());
        rep.record(&inst.name, &cand, "A_Z", r.a_z.clone());
        rep.record(&inst.name, &cand, "S_X", r.s_x.clone());
        rep.record(&inst.name, &cand, "S_Z", r.s_z.clone());
        rep.record(&inst.name, &cand, "ord-B", r.ord_b.clone());
        rep.record(&inst.name, &cand, "identities", holds);
    }
    rep.line(format!("identity check: {}", pass(ok)));
    rep.line(format!("ord_B constant A_Z/ord_B over radius {}: {t}", config.radius));
    rep.record(&inst.name, "", "lemma37", t);
    let status = if ok {
        Ok(())
    } else {
        Err(CliError::Inconsistent("decomposition identity fails".into()))
    };
    Ok((rep, status))
}

pub fn lemma26(inst: &str, divisor: &str) -> Result<Outcome, CliError> {
    let inst = instance::load(inst)?;
    let d = inst.divisor(divisor)?;
    let data = Anticanonical::new(&inst.pair)?;
    let out = data.lemma26_check(&d)?;
    let mut rep = Report::default();
    rep.line(format!(
        "S({divisor}) = {} >= {}: {}",
        out.s_value,
        out.bound,
        pass(out.pass)
    ));
    rep.record(&inst.name, divisor, "S", out.s_value.clone());
    rep.record(&inst.name, divisor, "bound", out.bound.clone());
    rep.record(&inst.name, divisor, "pass", out.pass);
    let status = if out.pass {
        Ok(())
    } else {
        Err(CliError::Check(format!("S({divisor}) = {} < {}", out.s_value, out.bound)))
    };
    Ok((rep, status))
}

pub fn example38(h2: &str, hk: &str, curve_csv: Option<&Path>, config: &Config) -> Result<Outcome, CliError> {
    let p = Example38Params::new(parse_rational(h2)?, parse_rational(hk)?)?;
    let r = example38_report(&p, config.quad_nodes)?;
    let mut rep = Report::default();
    rep.line(format!("H^2 = {}, H.(-K_S) = {}, K_S^2 = 0", p.h2(), p.hk()));
    rep.line(format!("vol(-K_X) = {}", r.volume));
    rep.line(format!("vol by fiber integral = {}", r.volume_fiber));
    rep.line(format!("S_X(Y) = {} (integrated: {})", r.s_closed, r.s_integrated));
    rep.line(format!(
        "S_X(Y) by {}-node quadrature = {:.15} (relative error {:.2e})",
        config.quad_nodes, r.s_quadrature, r.quadrature_error
    ));
    rep.line(format!("A_X(Y)/S_X(Y) = {}", r.delta_bound));
    rep.line(format!("S_X(Y) > 5/3: {}", pass(r.s_above_five_thirds)));
    rep.line(format!("bound {} < 3/5: {}", r.delta_bound, pass(r.bound_below_three_fifths)));
    let cand = format!("h2={},hk={}", p.h2(), p.hk());
    rep.record("example38", &cand, "volume", r.volume.clone());
    rep.record("example38", &cand, "volume-fiber", r.volume_fiber.clone());
    rep.record("example38", &cand, "S_Y", r.s_closed.clone());
    rep.record("example38", &cand, "S_Y-integrated", r.s_integrated.clone());
    rep.record("example38", &cand, "S_Y-quadrature", Value::Float(r.s_quadrature));
    rep.record("example38", &cand, "delta-bound", r.delta_bound.clone());
    rep.record("example38", &cand, "S_Y>5/3", r.s_above_five_thirds);
    rep.record("example38", &cand, "bound<3/5", r.bound_below_three_fifths);

    if let Some(path) = curve_csv {
        let curve = vol_curve_y(&p)?;
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Internal(e.to_string());
        w.write_record(["t_num", "t_den", "value_num", "value_den"]).map_err(io)?;
        for k in 0..=40 {
            let t = rat(k, 20);
            let y = curve.eval(&t)?;
            w.write_record([
                t.numer().to_string(),
                t.denom().to_string(),
                y.numer().to_string(),
                y.denom().to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
        std::fs::write(path, bytes)
            .map_err(|e| CliError::User(format!("cannot write {}: {e}", path.display())))?;
    }
    let status = if r.all_pass(1e-9) {
        Ok(())
    } else {
        Err(CliError::Inconsistent(format!("example report disagrees: {r:?}")))
    };
    Ok((rep, status))
}
