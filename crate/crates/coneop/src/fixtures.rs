//! Named in-tree oracles used as negative controls for the checker suite
//! and the recovery procedure, plus the identity as a benign control.
//!
//! Completeness claims need concrete falsifiers: each fixture violates at
//! least one structural property of weighted composition operators and is
//! rejected by the corresponding check with a replayable witness.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::cone::ConeFunction;
use crate::error::OracleError;
use crate::operators::{as_oracle, ConeMap, MapOracle, ThreadSafety, WeightedCompositionOp};
use crate::scalar::Scalar;
use crate::space::{Point, SpaceDescriptor};

pub const FIXTURE_NAMES: &[&str] = &["identity", "square", "shift", "order-swap", "averaging"];

/// Builds a named fixture oracle over the given space.
pub fn fixture_oracle(name: &str, space: &SpaceDescriptor) -> Result<MapOracle, OracleError> {
    match name {
        "identity" => {
            let op = WeightedCompositionOp::identity(space)?;
            Ok(as_oracle(&op))
        }
        "square" => Ok(MapOracle::new(
            "square",
            Arc::new(SquareMap {
                space: space.clone(),
            }),
            ThreadSafety::SafeForConcurrentQueries,
        )),
        "shift" => Ok(MapOracle::new(
            "shift",
            Arc::new(ShiftMap::new(space)?),
            ThreadSafety::SafeForConcurrentQueries,
        )),
        "order-swap" => match space {
            SpaceDescriptor::Discrete(_) => Ok(MapOracle::new(
                "order-swap",
                Arc::new(OrderSwapMap {
                    space: space.clone(),
                }),
                ThreadSafety::SafeForConcurrentQueries,
            )),
            SpaceDescriptor::PlLine(_) => Err(OracleError::UnsupportedSpace(
                "order-swap is a discrete-space fixture".into(),
            )),
        },
        "averaging" => Ok(MapOracle::new(
            "averaging",
            Arc::new(AveragingMap::new(space)?),
            ThreadSafety::SafeForConcurrentQueries,
        )),
        other => Err(OracleError::UnsupportedSpace(format!(
            "unknown fixture {other:?} (known: {})",
            FIXTURE_NAMES.join(", ")
        ))),
    }
}

/// Pointwise square `f -> f^2` (node-wise on the PL line). Breaks norm
/// additivity and any fixed Lipschitz bound.
struct SquareMap {
    space: SpaceDescriptor,
}

impl ConeMap for SquareMap {
    fn domain(&self) -> &SpaceDescriptor {
        &self.space
    }

    fn codomain(&self) -> &SpaceDescriptor {
        &self.space
    }

    fn evaluate(&self, f: &ConeFunction) -> Result<ConeFunction, OracleError> {
        match f {
            ConeFunction::Discrete { space, values } => {
                let squared = values.iter().map(|v| v * v).collect();
                Ok(ConeFunction::discrete(space.clone(), squared)?)
            }
            ConeFunction::Pl(p) => {
                let values = p.values().iter().map(|v| v * v).collect();
                Ok(ConeFunction::pl(p.breakpoints().to_vec(), values)?)
            }
        }
    }
}

/// `f -> f + bump` for a fixed positive bump. Sends 0 elsewhere, so the
/// zero-preservation check rejects it.
struct ShiftMap {
    space: SpaceDescriptor,
    bump: ConeFunction,
}

impl ShiftMap {
    fn new(space: &SpaceDescriptor) -> Result<Self, OracleError> {
        let bump = match space {
            SpaceDescriptor::Discrete(s) => ConeFunction::discrete(
                s.clone(),
                vec![BigRational::from_integer(1.into()); s.len()],
            )?,
            SpaceDescriptor::PlLine(_) => {
                ConeFunction::plateau(space, &Point::Real(0.0), 5.0, 10.0)?
            }
        };
        Ok(ShiftMap {
            space: space.clone(),
            bump,
        })
    }
}

impl ConeMap for ShiftMap {
    fn domain(&self) -> &SpaceDescriptor {
        &self.space
    }

    fn codomain(&self) -> &SpaceDescriptor {
        &self.space
    }

    fn evaluate(&self, f: &ConeFunction) -> Result<ConeFunction, OracleError> {
        Ok(f.add(&self.bump)?)
    }
}

/// An order-reversing involution on the unit box: `T(f) = 1 - f` whenever
/// `f <= 1` pointwise, identity elsewhere. A bijection of the cone that
/// swaps comparable pairs inside the box, so the order check finds a
/// violation with positive probability per sampled pair.
struct OrderSwapMap {
    space: SpaceDescriptor,
}

impl ConeMap for OrderSwapMap {
    fn domain(&self) -> &SpaceDescriptor {
        &self.space
    }

    fn codomain(&self) -> &SpaceDescriptor {
        &self.space
    }

    fn evaluate(&self, f: &ConeFunction) -> Result<ConeFunction, OracleError> {
        match f {
            ConeFunction::Discrete { space, values } => {
                let one = BigRational::from_integer(1.into());
                if values.iter().all(|v| v <= &one) {
                    let flipped = values.iter().map(|v| &one - v).collect();
                    Ok(ConeFunction::discrete(space.clone(), flipped)?)
                } else {
                    Ok(f.clone())
                }
            }
            ConeFunction::Pl(_) => Err(OracleError::UnsupportedSpace(
                "order-swap is a discrete-space fixture".into(),
            )),
        }
    }
}

/// `f -> (mean of f) * bump` with a fixed bump: additive and positively
/// homogeneous (so norm additivity holds) but it merges supports, which
/// the disjointness-preservation check rejects.
struct AveragingMap {
    space: SpaceDescriptor,
    bump: ConeFunction,
}

impl AveragingMap {
    fn new(space: &SpaceDescriptor) -> Result<Self, OracleError> {
        let bump = match space {
            SpaceDescriptor::Discrete(s) => ConeFunction::discrete(
                s.clone(),
                vec![BigRational::from_integer(1.into()); s.len()],
            )?,
            SpaceDescriptor::PlLine(_) => {
                ConeFunction::plateau(space, &Point::Real(0.0), 2.0, 4.0)?
            }
        };
        Ok(AveragingMap {
            space: space.clone(),
            bump,
        })
    }
}

impl ConeMap for AveragingMap {
    fn domain(&self) -> &SpaceDescriptor {
        &self.space
    }

    fn codomain(&self) -> &SpaceDescriptor {
        &self.space
    }

    fn evaluate(&self, f: &ConeFunction) -> Result<ConeFunction, OracleError> {
        let weight = match f {
            ConeFunction::Discrete { values, .. } => {
                let n = BigRational::from_integer((values.len() as i64).into());
                let sum: BigRational = values
                    .iter()
                    .cloned()
                    .fold(BigRational::zero(), |a, b| a + b);
                Scalar::Rational(sum / n)
            }
            ConeFunction::Pl(p) => {
                // exact integral of the polyline (trapezoid per segment)
                let xs = p.breakpoints();
                let ys = p.values();
                let mut total = 0.0;
                for i in 1..xs.len() {
                    total += 0.5 * (ys[i] + ys[i - 1]) * (xs[i] - xs[i - 1]);
                }
                Scalar::Real(total)
            }
        };
        Ok(self.bump.scale(&weight)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verification::{
        check_biseparating, check_norm_additive, check_order_iso, check_zero, replay_witness,
        Sampler, SamplerParams,
    };

    fn space(n: usize) -> SpaceDescriptor {
        SpaceDescriptor::discrete(n).unwrap()
    }

    fn sampler(seed: u64, s: &SpaceDescriptor) -> Sampler {
        Sampler::new(seed, s.clone(), SamplerParams::default())
    }

    #[test]
    fn identity_fixture_passes_basic_checks() {
        let s = space(3);
        let oracle = fixture_oracle("identity", &s).unwrap();
        assert!(check_zero(&oracle, 0.0).unwrap().passed());
        assert!(check_norm_additive(&oracle, &mut sampler(1, &s), 30, 0.0)
            .unwrap()
            .passed());
    }

    #[test]
    fn square_fixture_fails_norm_additive() {
        let s = space(3);
        let oracle = fixture_oracle("square", &s).unwrap();
        let rep = check_norm_additive(&oracle, &mut sampler(2, &s), 50, 0.0).unwrap();
        assert!(!rep.passed());
        let w = rep.witness().unwrap();
        // the witness replays to the identical discrepancy
        let (_, _, disc) = replay_witness(&oracle, w).unwrap();
        assert_eq!(disc, w.discrepancy);
    }

    #[test]
    fn shift_fixture_fails_zero_check() {
        let s = space(2);
        let oracle = fixture_oracle("shift", &s).unwrap();
        let rep = check_zero(&oracle, 0.0).unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.witness().unwrap().lhs, Scalar::from_int(1));
    }

    #[test]
    fn order_swap_fixture_fails_order_check() {
        let s = space(2);
        let oracle = fixture_oracle("order-swap", &s).unwrap();
        let rep = check_order_iso(&oracle, None, &mut sampler(3, &s), 200, 0.0).unwrap();
        assert!(!rep.passed());
        let w = rep.witness().unwrap();
        let inputs = w.bound_inputs().unwrap();
        // the violating pair is comparable: f <= g but Tf > Tg somewhere
        assert!(inputs[0].leq(&inputs[1]).unwrap());
        let (_, _, disc) = replay_witness(&oracle, w).unwrap();
        assert_eq!(disc, w.discrepancy);
    }

    #[test]
    fn averaging_fixture_passes_norm_additive_but_fails_biseparating() {
        let s = space(4);
        let oracle = fixture_oracle("averaging", &s).unwrap();
        assert!(check_norm_additive(&oracle, &mut sampler(4, &s), 30, 0.0)
            .unwrap()
            .passed());
        let rep = check_biseparating(&oracle, &mut sampler(5, &s), 20, 2, 0.0).unwrap();
        assert!(!rep.passed());
        let (_, _, disc) = replay_witness(&oracle, rep.witness().unwrap()).unwrap();
        assert_eq!(disc, rep.witness().unwrap().discrepancy);
    }

    #[test]
    fn unknown_fixture_is_an_error() {
        assert!(fixture_oracle("nope", &space(2)).is_err());
    }
}
