//! Anticanonical model of a toric pair.
//!
//! With `P = P_{-K-Δ}` full-dimensional, `Z = Proj R(X, -r(K+Δ))` is the toric
//! variety of the normal fan of `P`. Its rays are the rays of `X` whose
//! inequalities cut facets of `P`, and `Δ_Z` keeps their coefficients. On a
//! common resolution `B = π*(K_Z+Δ_Z) - μ*(K_X+Δ)`, and for every toric
//! valuation `ord_v(B) = A_X(v) - A_Z(v) = min_P <·,v> - ψ_X(v) >= 0`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{serde_rational, Rational};

use super::fan::Fan;
use super::pair::{ToricPair, ToricValuation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RayRecord {
    pub ray: usize,
    pub vector: Vec<i64>,
    #[serde(with = "serde_rational")]
    pub a_source: Rational,
    #[serde(with = "serde_rational")]
    pub a_target: Rational,
    #[serde(with = "serde_rational")]
    pub ord_b: Rational,
    /// Index of the same ray in the model's fan, when it survives.
    pub target_ray: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct ModelDecomposition {
    pub source: ToricPair,
    pub target: ToricPair,
    pub records: Vec<RayRecord>,
}

impl ModelDecomposition {
    /// `ord_v(B) = A_X(v) - A_Z(v)` for any toric valuation.
    pub fn ord_b(&self, v: &ToricValuation) -> Rational {
        self.source.log_discrepancy(v) - self.target.log_discrepancy(v)
    }

    pub fn is_trivial(&self) -> bool {
        self.records.iter().all(|r| r.ord_b.is_zero())
    }
}

pub fn anticanonical_model(pair: &ToricPair) -> Result<ModelDecomposition> {
    pair.ensure_big()?;
    let n = pair.dim();
    let polytope = pair.divisor_polytope(&pair.log_anticanonical());
    let facets = polytope.facets()?;
    let vertices = polytope.vertices()?;

    let rays: Vec<Vec<i64>> = facets.iter().map(|&i| pair.fan().ray(i).to_vec()).collect();
    let mut cones = Vec::with_capacity(vertices.len());
    for v in &vertices {
        let cone: Vec<usize> = facets
            .iter()
            .enumerate()
            .filter(|(_, f)| v.tight.contains(f))
            .map(|(k, _)| k)
            .collect();
        if cone.len() != n {
            let pt: Vec<String> = v.point.iter().map(|x| x.to_string()).collect();
            return Err(Error::NonSimplicialModel(format!(
                "({}) on {} facets",
                pt.join(", "),
                cone.len()
            )));
        }
        cones.push(cone);
    }
    let fan = Fan::new(n, rays, cones)
        .map_err(|e| Error::Internal(format!("normal fan failed validation: {e}")))?;
    let boundary = facets.iter().map(|&i| pair.boundary()[i].clone()).collect();
    let target = ToricPair::new(fan, boundary)?;

    let mut records = Vec::with_capacity(pair.num_rays());
    for ray in 0..pair.num_rays() {
        let v = pair.ray_valuation(ray);
        let a_source = pair.log_discrepancy(&v);
        let a_target = target.log_discrepancy(&v);
        let ord_b = &a_source - &a_target;
        if ord_b.is_negative() {
            return Err(Error::Internal(format!("ord_B = {ord_b} < 0 on ray {ray}")));
        }
        records.push(RayRecord {
            ray,
            vector: v.vector().to_vec(),
            a_source,
            a_target,
            ord_b,
            target_ray: facets.iter().position(|&f| f == ray),
        });
    }
    Ok(ModelDecomposition {
        source: pair.clone(),
        target,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::toric::library;

    #[test]
    fn ample_pairs_are_their_own_model() {
        for pair in [library::p1(), library::p2(), library::p1xp1(), library::blp2()] {
            let m = anticanonical_model(&pair).unwrap();
            assert!(m.is_trivial());
            assert_eq!(m.target.num_rays(), pair.num_rays());
        }
    }

    #[test]
    fn f3_contracts_the_negative_section() {
        // P_{-K} = conv{(-1,1), (-1,-2/3), (4,1)}; the model is P(1,1,3)
        let m = anticanonical_model(&library::f3()).unwrap();
        assert_eq!(m.target.num_rays(), 3);
        assert!(!m.target.fan().is_smooth());
        let neg = &m.records[1];
        assert_eq!(neg.vector, vec![0, 1]);
        assert_eq!(neg.target_ray, None);
        assert_eq!(neg.a_target, rat(2, 3));
        assert_eq!(neg.ord_b, rat(1, 3));
        for r in m.records.iter().filter(|r| r.ray != 1) {
            assert_eq!(r.ord_b, int(0));
        }
    }

    #[test]
    fn f2_model_is_crepant() {
        let m = anticanonical_model(&library::f2()).unwrap();
        assert_eq!(m.target.num_rays(), 3);
        assert!(m.is_trivial());
        assert_eq!(m.records[1].target_ray, None);
    }

    #[test]
    fn boundary_is_carried_over() {
        let pair = library::f3()
            .with_boundary(vec![rat(1, 2), int(0), int(0), rat(1, 4)])
            .unwrap();
        let m = anticanonical_model(&pair).unwrap();
        for r in &m.records {
            if let Some(t) = r.target_ray {
                assert_eq!(m.target.boundary()[t], pair.boundary()[r.ray]);
            }
        }
    }

    #[test]
    fn non_simplicial_model_is_rejected() {
        // rays at the cube vertices, each square face split into two triangles:
        // P_{-K} is the octahedron, whose vertices each lie on four facets
        let mut rays = Vec::new();
        for x in [-1, 1] {
            for y in [-1, 1] {
                for z in [-1, 1] {
                    rays.push(vec![x, y, z]);
                }
            }
        }
        let idx = |v: [i64; 3]| rays.iter().position(|r| r[..] == v[..]).unwrap();
        let mut cones = Vec::new();
        for axis in 0..3 {
            for s in [-1, 1] {
                let corner = |a: i64, b: i64| {
                    let mut v = [0; 3];
                    v[axis] = s;
                    v[(axis + 1) % 3] = a;
                    v[(axis + 2) % 3] = b;
                    idx(v)
                };
                let sq = [corner(-1, -1), corner(1, -1), corner(1, 1), corner(-1, 1)];
                cones.push(vec![sq[0], sq[1], sq[2]]);
                cones.push(vec![sq[0], sq[2], sq[3]]);
            }
        }
        let pair = ToricPair::without_boundary(Fan::new(3, rays.clone(), cones).unwrap());
        assert!(matches!(
            anticanonical_model(&pair),
            Err(Error::NonSimplicialModel(_))
        ));
    }
}
