//! Weighted composition operators `Tf(y) = h(y) * f(tau(y))` between
//! positive cones, their inverses and composites, seeded random
//! generation, and the black-box oracle interface.

mod oracle;
mod point_map;
mod weight;

pub use oracle::{as_oracle, ConeMap, MapOracle, ThreadSafety};
pub use point_map::{PlHomeo, PointMap};
pub use weight::{DiscreteWeights, PlWeight, PlWeightExpr, WeightFunction};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cone::{ConeFunction, PlFunction};
use crate::error::{ConeError, OperatorError};
use crate::polyline;
use crate::scalar::Scalar;
use crate::space::{Point, SpaceDescriptor};

/// The canonical norm-additive bijection between positive cones: a point
/// map `tau` from the codomain into the domain together with a strictly
/// positive weight on the codomain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorRepr", into = "OperatorRepr")]
pub struct WeightedCompositionOp {
    domain: SpaceDescriptor,
    codomain: SpaceDescriptor,
    point_map: PointMap,
    weight: WeightFunction,
}

#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    tau: PointMap,
    h: WeightFunction,
    domain: SpaceDescriptor,
    codomain: SpaceDescriptor,
}

impl TryFrom<OperatorRepr> for WeightedCompositionOp {
    type Error = OperatorError;
    fn try_from(r: OperatorRepr) -> Result<Self, OperatorError> {
        WeightedCompositionOp::new(r.domain, r.codomain, r.tau, r.h)
    }
}

impl From<WeightedCompositionOp> for OperatorRepr {
    fn from(op: WeightedCompositionOp) -> Self {
        OperatorRepr {
            tau: op.point_map,
            h: op.weight,
            domain: op.domain,
            codomain: op.codomain,
        }
    }
}

impl WeightedCompositionOp {
    pub fn new(
        domain: SpaceDescriptor,
        codomain: SpaceDescriptor,
        point_map: PointMap,
        weight: WeightFunction,
    ) -> Result<Self, OperatorError> {
        match (&domain, &codomain, &point_map, &weight) {
            (
                SpaceDescriptor::Discrete(dx),
                SpaceDescriptor::Discrete(dy),
                PointMap::Permutation { map },
                WeightFunction::Discrete(w),
            ) => {
                if dx.len() != dy.len() || map.len() != dy.len() || w.len() != dy.len() {
                    return Err(OperatorError::ComponentMismatch);
                }
                // re-check bijectivity in case the map was built raw
                PointMap::permutation(map.clone())?;
            }
            (
                SpaceDescriptor::PlLine(_),
                SpaceDescriptor::PlLine(_),
                PointMap::PlHomeo(_),
                WeightFunction::Pl(_),
            ) => {}
            _ => return Err(OperatorError::ComponentMismatch),
        }
        Ok(WeightedCompositionOp {
            domain,
            codomain,
            point_map,
            weight,
        })
    }

    /// The identity operator on a space.
    pub fn identity(space: &SpaceDescriptor) -> Result<Self, OperatorError> {
        match space {
            SpaceDescriptor::Discrete(s) => WeightedCompositionOp::new(
                space.clone(),
                space.clone(),
                PointMap::identity_permutation(s.len()),
                WeightFunction::discrete(vec![BigRational::one(); s.len()])?,
            ),
            SpaceDescriptor::PlLine(_) => WeightedCompositionOp::new(
                space.clone(),
                space.clone(),
                PointMap::PlHomeo(PlHomeo::identity()),
                WeightFunction::Pl(PlWeightExpr::Pl(PlWeight::constant(1.0)?)),
            ),
        }
    }

    pub fn domain(&self) -> &SpaceDescriptor {
        &self.domain
    }

    pub fn codomain(&self) -> &SpaceDescriptor {
        &self.codomain
    }

    pub fn point_map(&self) -> &PointMap {
        &self.point_map
    }

    pub fn weight(&self) -> &WeightFunction {
        &self.weight
    }

    pub fn h_min(&self) -> Scalar {
        self.weight.h_min()
    }

    pub fn h_max(&self) -> Scalar {
        self.weight.h_max()
    }

    /// Applies the operator. Discrete images are exact; PL images are the
    /// PL function through the pullback of `f`'s breakpoints merged with
    /// the weight's knots, with exact values at every node.
    pub fn apply(&self, f: &ConeFunction) -> Result<ConeFunction, OperatorError> {
        match (f, &self.point_map, &self.weight) {
            (
                ConeFunction::Discrete { space, values },
                PointMap::Permutation { map },
                WeightFunction::Discrete(w),
            ) => {
                match &self.domain {
                    SpaceDescriptor::Discrete(dx) if dx == space => {}
                    _ => return Err(ConeError::SpaceMismatch.into()),
                }
                let codomain = self
                    .codomain
                    .as_discrete()
                    .expect("validated discrete codomain");
                let out: Vec<BigRational> = (0..map.len())
                    .map(|y| w.values()[y].clone() * &values[map[y]])
                    .collect();
                Ok(ConeFunction::discrete(codomain.clone(), out)?)
            }
            (ConeFunction::Pl(p), PointMap::PlHomeo(tau), WeightFunction::Pl(h)) => {
                if !matches!(self.domain, SpaceDescriptor::PlLine(_)) {
                    return Err(ConeError::SpaceMismatch.into());
                }
                if p.breakpoints().is_empty() {
                    return Ok(ConeFunction::zero(&self.codomain));
                }
                let pulled = tau.pull_back(p.breakpoints());
                let nodes = polyline::merge_grids(&pulled, &h.knots());
                let values: Vec<f64> = nodes
                    .iter()
                    .map(|&y| h.eval(y) * p.eval(tau.eval(y)))
                    .collect();
                let (xs, ys) = polyline::canonicalize(nodes, values);
                Ok(ConeFunction::Pl(PlFunction::from_canonical(xs, ys)))
            }
            _ => Err(ConeError::SpaceMismatch.into()),
        }
    }

    /// `Tf(y)` evaluated directly from the representation formula — exact
    /// up to floating-point rounding on the PL line.
    pub fn apply_value_at(&self, f: &ConeFunction, y: &Point) -> Result<Scalar, OperatorError> {
        let x = self.point_map.apply_point(y)?;
        let fv = f.value_at(&x)?;
        let hv = self.weight.value_at(y)?;
        Ok(hv.mul(&fv)?)
    }

    /// The inverse operator `Sv(x) = v(tau^{-1}(x)) / h(tau^{-1}(x))`.
    pub fn invert(&self) -> WeightedCompositionOp {
        let sigma = self.point_map.invert();
        let weight = match (&self.weight, &sigma) {
            (WeightFunction::Discrete(w), PointMap::Permutation { map: inv }) => {
                let values: Vec<BigRational> =
                    inv.iter().map(|&y| w.values()[y].recip()).collect();
                WeightFunction::Discrete(
                    DiscreteWeights::new(values).expect("reciprocals stay positive"),
                )
            }
            (WeightFunction::Pl(h), PointMap::PlHomeo(s)) => {
                WeightFunction::Pl(PlWeightExpr::PlRecip {
                    inner: Box::new(PlWeightExpr::PlCompose {
                        weight: Box::new(h.clone()),
                        map: s.clone(),
                    }),
                })
            }
            _ => unreachable!("operator invariants"),
        };
        WeightedCompositionOp {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            point_map: sigma,
            weight,
        }
    }

    /// `outer . inner` as a single canonical-form operator:
    /// `(outer.inner)f(z) = h_outer(z) * h_inner(tau_outer(z)) * f(tau_inner(tau_outer(z)))`.
    pub fn compose(
        outer: &WeightedCompositionOp,
        inner: &WeightedCompositionOp,
    ) -> Result<WeightedCompositionOp, OperatorError> {
        if inner.codomain != outer.domain {
            return Err(OperatorError::IncompatibleSpaces(
                "inner codomain must equal outer domain".into(),
            ));
        }
        match (
            &inner.point_map,
            &outer.point_map,
            &inner.weight,
            &outer.weight,
        ) {
            (
                PointMap::Permutation { map: m1 },
                PointMap::Permutation { map: m2 },
                WeightFunction::Discrete(h1),
                WeightFunction::Discrete(h2),
            ) => {
                let map: Vec<usize> = (0..m2.len()).map(|z| m1[m2[z]]).collect();
                let values: Vec<BigRational> = (0..m2.len())
                    .map(|z| h2.values()[z].clone() * &h1.values()[m2[z]])
                    .collect();
                WeightedCompositionOp::new(
                    inner.domain.clone(),
                    outer.codomain.clone(),
                    PointMap::Permutation { map },
                    WeightFunction::Discrete(DiscreteWeights::new(values)?),
                )
            }
            (
                PointMap::PlHomeo(t1),
                PointMap::PlHomeo(t2),
                WeightFunction::Pl(h1),
                WeightFunction::Pl(h2),
            ) => {
                let tau = PlHomeo::compose(t1, t2)?;
                let weight = PlWeightExpr::PlProduct {
                    left: Box::new(h2.clone()),
                    right: Box::new(PlWeightExpr::PlCompose {
                        weight: Box::new(h1.clone()),
                        map: t2.clone(),
                    }),
                };
                WeightedCompositionOp::new(
                    inner.domain.clone(),
                    outer.codomain.clone(),
                    PointMap::PlHomeo(tau),
                    WeightFunction::Pl(weight),
                )
            }
            _ => Err(OperatorError::IncompatibleSpaces(
                "mixed-kind composition".into(),
            )),
        }
    }
}

/// Options for random operator generation.
#[derive(Clone, Debug)]
pub struct RandomOpOptions {
    /// Generate an orientation-reversing PL homeomorphism.
    pub decreasing: bool,
}

impl Default for RandomOpOptions {
    fn default() -> Self {
        RandomOpOptions { decreasing: false }
    }
}

/// Deterministic-in-seed random operator: a uniform random permutation
/// (discrete) or random monotone PL homeomorphism (line), with weights
/// uniform in `h_range` (rational-rounded to denominator 1000 on discrete
/// spaces).
pub fn random_op(
    seed: u64,
    domain: &SpaceDescriptor,
    codomain: &SpaceDescriptor,
    h_range: (f64, f64),
) -> Result<WeightedCompositionOp, OperatorError> {
    random_op_with(seed, domain, codomain, h_range, &RandomOpOptions::default())
}

pub fn random_op_with(
    seed: u64,
    domain: &SpaceDescriptor,
    codomain: &SpaceDescriptor,
    h_range: (f64, f64),
    options: &RandomOpOptions,
) -> Result<WeightedCompositionOp, OperatorError> {
    let (lo, hi) = h_range;
    if !(lo > 0.0 && lo <= hi) || !hi.is_finite() {
        return Err(OperatorError::BadRange);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match (domain, codomain) {
        (SpaceDescriptor::Discrete(dx), SpaceDescriptor::Discrete(dy)) => {
            if dx.len() != dy.len() {
                return Err(OperatorError::IncompatibleSpaces(
                    "discrete spaces must have equal size".into(),
                ));
            }
            let n = dy.len();
            let mut map: Vec<usize> = (0..n).collect();
            map.shuffle(&mut rng);
            let num_lo = (lo * 1000.0).ceil() as i64;
            let num_hi = (hi * 1000.0).floor() as i64;
            if num_lo > num_hi {
                return Err(OperatorError::BadRange);
            }
            let values: Vec<BigRational> = (0..n)
                .map(|_| {
                    let k = rng.random_range(num_lo..=num_hi);
                    BigRational::new(BigInt::from(k), BigInt::from(1000))
                })
                .collect();
            WeightedCompositionOp::new(
                domain.clone(),
                codomain.clone(),
                PointMap::Permutation { map },
                WeightFunction::Discrete(DiscreteWeights::new(values)?),
            )
        }
        (SpaceDescriptor::PlLine(_), SpaceDescriptor::PlLine(_)) => {
            let tau = random_homeo(&mut rng, options.decreasing)?;
            let knot_count = rng.random_range(1..=4usize);
            let mut knots = Vec::with_capacity(knot_count);
            let mut x = rng.random_range(-12.0..-4.0);
            for _ in 0..knot_count {
                knots.push(x);
                x += rng.random_range(2.0..8.0);
            }
            let values: Vec<f64> = (0..knot_count)
                .map(|_| rng.random_range(lo..=hi))
                .collect();
            WeightedCompositionOp::new(
                domain.clone(),
                codomain.clone(),
                PointMap::PlHomeo(tau),
                WeightFunction::pl(knots, values)?,
            )
        }
        _ => Err(OperatorError::IncompatibleSpaces(
            "domain and codomain must be the same kind".into(),
        )),
    }
}

fn random_homeo(rng: &mut ChaCha8Rng, decreasing: bool) -> Result<PlHomeo, OperatorError> {
    let nodes = rng.random_range(2..=5usize);
    let mut xs = Vec::with_capacity(nodes);
    let mut x = rng.random_range(-12.0..-6.0);
    for _ in 0..nodes {
        xs.push(x);
        x += rng.random_range(1.0..6.0);
    }
    let mut vs = Vec::with_capacity(nodes);
    let mut v = rng.random_range(-12.0..-6.0);
    for _ in 0..nodes {
        vs.push(v);
        v += rng.random_range(1.0..6.0);
    }
    let (left, right) = (
        rng.random_range(0.5..2.0),
        rng.random_range(0.5..2.0),
    );
    if decreasing {
        vs.reverse();
        PlHomeo::new(xs, vs, -left, -right)
    } else {
        PlHomeo::new(xs, vs, left, right)
    }
}
