//! Comparison of a pair with its anticanonical model `(Z, Δ_Z)`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{serde_rational, ExtRational, Rational};
use crate::toric::{anticanonical_model, ModelDecomposition, ToricPair, ToricValuation};

use super::curve::{candidates, Anticanonical};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionRow {
    pub ray: usize,
    pub vector: Vec<i64>,
    #[serde(with = "serde_rational")]
    pub a_x: Rational,
    #[serde(with = "serde_rational")]
    pub a_z: Rational,
    #[serde(with = "serde_rational")]
    pub s_x: Rational,
    #[serde(with = "serde_rational")]
    pub s_z: Rational,
    #[serde(with = "serde_rational")]
    pub ord_b: Rational,
    /// `A_X = A_Z + ord_B`.
    pub a_identity: bool,
    /// `S_X = S_Z + ord_B`.
    pub s_identity: bool,
}

/// Per-ray table of `A` and `S` on both sides. `S_X` is computed on the source
/// pair by the curve route and `S_Z` on the model by the barycenter route.
pub fn s_decomposition_check(pair: &ToricPair) -> Result<Vec<DecompositionRow>> {
    let model = anticanonical_model(pair)?;
    let source = Anticanonical::new(&model.source)?;
    let target = Anticanonical::new(&model.target)?;
    let mut rows = Vec::with_capacity(model.records.len());
    for rec in &model.records {
        let v = pair.ray_valuation(rec.ray);
        let s_x = source.s_curve(&v)?;
        let s_z = target.s_barycenter(&v);
        rows.push(DecompositionRow {
            ray: rec.ray,
            vector: rec.vector.clone(),
            a_identity: rec.a_source == &rec.a_target + &rec.ord_b,
            s_identity: s_x == &s_z + &rec.ord_b,
            a_x: rec.a_source.clone(),
            a_z: rec.a_target.clone(),
            s_x,
            s_z,
            ord_b: rec.ord_b.clone(),
        });
    }
    Ok(rows)
}

/// Largest `t` with `A_Z(v) >= t ord_v(B)` over rays and primitive vectors of
/// sup-norm `<= radius`; an upper estimate of the sup over all valuations.
pub fn lemma37_constant(pair: &ToricPair, radius: u32) -> Result<ExtRational> {
    let model = anticanonical_model(pair)?;
    lemma37_from_model(&model, radius)
}

pub fn lemma37_from_model(model: &ModelDecomposition, radius: u32) -> Result<ExtRational> {
    let mut best = ExtRational::Infinity;
    for v in candidates(&model.source, radius)? {
        let a_z = model.target.log_discrepancy(&v);
        if !a_z.is_positive() {
            return Err(Error::ModelNotKlt {
                vector: v.to_string(),
                value: a_z.to_string(),
            });
        }
        let ord = model.ord_b(&v);
        if ord.is_positive() {
            best = best.min(ExtRational::Finite(a_z / ord));
        }
    }
    Ok(best)
}

/// `δ_Z (t+1) / (δ_Z + t)` without preconditions.
pub fn transfer_formula(delta_z: &Rational, t: &Rational) -> Result<Rational> {
    let den = delta_z + t;
    if den.is_zero() {
        return Err(Error::Precondition("δ_Z + t vanishes".into()));
    }
    Ok(delta_z * (t + Rational::one()) / den)
}

/// Lower bound for `δ(X,Δ)` from `δ(Z,Δ_Z) > 1` and `t = min A_Z/ord_B > 0`.
pub fn delta_transfer_bound(delta_z: &Rational, t: &Rational) -> Result<Rational> {
    if *delta_z <= Rational::one() {
        return Err(Error::RequiresStableModel(delta_z.to_string()));
    }
    if !t.is_positive() {
        return Err(Error::Precondition(format!("t = {t} must be positive")));
    }
    let out = transfer_formula(delta_z, t)?;
    if out <= Rational::one() {
        return Err(Error::Internal(format!("transfer bound {out} is not above 1")));
    }
    Ok(out)
}

/// `ord_v(B)` for an arbitrary valuation.
pub fn ord_b(pair: &ToricPair, v: &ToricValuation) -> Result<Rational> {
    Ok(anticanonical_model(pair)?.ord_b(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::toric::library;

    #[test]
    fn identities_hold_on_library() {
        for (name, pair) in library::all() {
            let rows = s_decomposition_check(&pair).unwrap();
            assert!(rows.iter().all(|r| r.a_identity && r.s_identity), "{name}");
        }
        let rows = s_decomposition_check(&library::f3()).unwrap();
        assert!(rows.iter().any(|r| r.ord_b.is_positive()));
        assert!(s_decomposition_check(&library::p2()).unwrap().iter().all(|r| r.ord_b.is_zero()));
    }

    #[test]
    fn lemma37_values() {
        assert_eq!(lemma37_constant(&library::p2(), 3).unwrap(), ExtRational::Infinity);
        // only the negative section is contracted: A_Z = 2/3, ord_B = 1/3
        assert_eq!(lemma37_constant(&library::f3(), 1).unwrap(), int(2).into());
        assert_eq!(lemma37_constant(&library::f2(), 2).unwrap(), ExtRational::Infinity);
    }

    #[test]
    fn transfer() {
        assert_eq!(delta_transfer_bound(&int(2), &int(1)).unwrap(), rat(4, 3));
        assert_eq!(transfer_formula(&int(1), &rat(7, 3)).unwrap(), int(1));
        assert!(matches!(
            delta_transfer_bound(&int(1), &int(1)),
            Err(Error::RequiresStableModel(_))
        ));
    }
}
