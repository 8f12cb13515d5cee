//! Weight functions: strictly positive, bounded, and bounded away from
//! zero, so the inverse operator stays well defined on the cone.
//!
//! Discrete weights are exact rationals. PL weights interpolate positive
//! node values and continue with constant tails. Inversion and composition
//! take PL weights outside the piecewise-linear class (reciprocals and
//! products of linear pieces are not linear), so those results are kept as
//! exact evaluation expressions over the base data; they expose pointwise
//! evaluation and bound estimates rather than a breakpoint list.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::OperatorError;
use crate::polyline;
use crate::scalar::{rational_vec, Scalar};
use crate::space::Point;

use super::point_map::PlHomeo;

/// A piecewise-linear weight: positive values at nodes, linear in between,
/// constant beyond the first and last node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PlWeightRepr", into = "PlWeightRepr")]
pub struct PlWeight {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PlWeightRepr {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<PlWeightRepr> for PlWeight {
    type Error = OperatorError;
    fn try_from(r: PlWeightRepr) -> Result<Self, OperatorError> {
        PlWeight::new(r.breakpoints, r.values)
    }
}

impl From<PlWeight> for PlWeightRepr {
    fn from(w: PlWeight) -> Self {
        PlWeightRepr {
            breakpoints: w.breakpoints,
            values: w.values,
        }
    }
}

impl PlWeight {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self, OperatorError> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(OperatorError::ComponentMismatch);
        }
        if breakpoints.iter().any(|x| !x.is_finite())
            || breakpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(OperatorError::ComponentMismatch);
        }
        if values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(OperatorError::NonPositiveWeight);
        }
        Ok(PlWeight {
            breakpoints,
            values,
        }
        .canonicalized())
    }

    pub fn constant(value: f64) -> Result<Self, OperatorError> {
        PlWeight::new(vec![0.0], vec![value])
    }

    fn canonicalized(mut self) -> Self {
        // end nodes equal to their neighbor continue the constant tail
        while self.values.len() >= 2 && self.values[0] == self.values[1] {
            self.breakpoints.remove(0);
            self.values.remove(0);
        }
        while self.values.len() >= 2
            && self.values[self.values.len() - 1] == self.values[self.values.len() - 2]
        {
            self.breakpoints.pop();
            self.values.pop();
        }
        let mut xs = Vec::with_capacity(self.breakpoints.len());
        let mut ys = Vec::with_capacity(self.values.len());
        for i in 0..self.breakpoints.len() {
            xs.push(self.breakpoints[i]);
            ys.push(self.values[i]);
            while xs.len() >= 3 {
                let n = xs.len();
                let (x0, x1, x2) = (xs[n - 3], xs[n - 2], xs[n - 1]);
                let (y0, y1, y2) = (ys[n - 3], ys[n - 2], ys[n - 1]);
                if (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0) {
                    xs.remove(n - 2);
                    ys.remove(n - 2);
                } else {
                    break;
                }
            }
        }
        // a constant weight anchors at x = 0
        if ys.len() == 1 {
            xs[0] = 0.0;
        }
        self.breakpoints = xs;
        self.values = ys;
        self
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.breakpoints.len();
        if x <= self.breakpoints[0] {
            return self.values[0];
        }
        if x >= self.breakpoints[n - 1] {
            return self.values[n - 1];
        }
        polyline::eval(&self.breakpoints, &self.values, x)
    }

    /// Extrema: attained at nodes (linear inside, constant outside).
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// An exactly-evaluatable PL weight expression. `Base` is a plain PL
/// weight; the other variants arise from operator inversion and
/// composition and are evaluated by formula so no re-approximation error
/// enters. Bounds are exact except for `Product`, whose interval bound is
/// conservative (it still brackets the true range).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlWeightExpr {
    Pl(PlWeight),
    PlRecip {
        inner: Box<PlWeightExpr>,
    },
    PlProduct {
        left: Box<PlWeightExpr>,
        right: Box<PlWeightExpr>,
    },
    /// `weight(map(x))`: precomposition with a homeomorphism.
    PlCompose {
        weight: Box<PlWeightExpr>,
        map: PlHomeo,
    },
}

impl PlWeightExpr {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            PlWeightExpr::Pl(w) => w.eval(x),
            PlWeightExpr::PlRecip { inner } => 1.0 / inner.eval(x),
            PlWeightExpr::PlProduct { left, right } => left.eval(x) * right.eval(x),
            PlWeightExpr::PlCompose { weight, map } => weight.eval(map.eval(x)),
        }
    }

    /// Outer-variable locations where some base weight changes slope.
    /// Between consecutive knots every constituent is smooth.
    pub fn knots(&self) -> Vec<f64> {
        match self {
            PlWeightExpr::Pl(w) => w.breakpoints.clone(),
            PlWeightExpr::PlRecip { inner } => inner.knots(),
            PlWeightExpr::PlProduct { left, right } => {
                polyline::merge_grids(&left.knots(), &right.knots())
            }
            PlWeightExpr::PlCompose { weight, map } => map.pull_back(&weight.knots()),
        }
    }

    /// `(lower, upper)` bounds on the range over the whole line.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            PlWeightExpr::Pl(w) => (w.min(), w.max()),
            PlWeightExpr::PlRecip { inner } => {
                let (lo, hi) = inner.bounds();
                (1.0 / hi, 1.0 / lo)
            }
            PlWeightExpr::PlProduct { left, right } => {
                let (a, b) = left.bounds();
                let (c, d) = right.bounds();
                (a * c, b * d)
            }
            // a homeomorphism of the line is surjective, so the range of
            // the composition equals the range of the weight
            PlWeightExpr::PlCompose { weight, .. } => weight.bounds(),
        }
    }

    /// True when `bounds` is the exact range (everything except products).
    pub fn bounds_exact(&self) -> bool {
        match self {
            PlWeightExpr::Pl(_) => true,
            PlWeightExpr::PlRecip { inner } => inner.bounds_exact(),
            PlWeightExpr::PlProduct { .. } => false,
            PlWeightExpr::PlCompose { weight, .. } => weight.bounds_exact(),
        }
    }
}

/// The weight of a composition operator, over the operator's codomain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightFunction {
    Discrete(DiscreteWeights),
    Pl(PlWeightExpr),
}

/// Strictly positive rationals, one per point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiscreteWeightsRepr", into = "DiscreteWeightsRepr")]
pub struct DiscreteWeights {
    values: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiscreteWeightsRepr {
    kind: DiscreteKindTag,
    #[serde(with = "rational_vec")]
    values: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
enum DiscreteKindTag {
    #[serde(rename = "discrete")]
    Discrete,
}

impl TryFrom<DiscreteWeightsRepr> for DiscreteWeights {
    type Error = OperatorError;
    fn try_from(r: DiscreteWeightsRepr) -> Result<Self, OperatorError> {
        DiscreteWeights::new(r.values)
    }
}

impl From<DiscreteWeights> for DiscreteWeightsRepr {
    fn from(w: DiscreteWeights) -> Self {
        DiscreteWeightsRepr {
            kind: DiscreteKindTag::Discrete,
            values: w.values,
        }
    }
}

impl DiscreteWeights {
    pub fn new(values: Vec<BigRational>) -> Result<Self, OperatorError> {
        if values.is_empty() || values.iter().any(|v| v <= &BigRational::zero()) {
            return Err(OperatorError::NonPositiveWeight);
        }
        Ok(DiscreteWeights { values })
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> BigRational {
        self.values.iter().min().cloned().expect("nonempty")
    }

    pub fn max(&self) -> BigRational {
        self.values.iter().max().cloned().expect("nonempty")
    }
}

impl WeightFunction {
    pub fn discrete(values: Vec<BigRational>) -> Result<Self, OperatorError> {
        Ok(WeightFunction::Discrete(DiscreteWeights::new(values)?))
    }

    pub fn pl(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self, OperatorError> {
        Ok(WeightFunction::Pl(PlWeightExpr::Pl(PlWeight::new(
            breakpoints,
            values,
        )?)))
    }

    pub fn value_at(&self, point: &Point) -> Result<Scalar, OperatorError> {
        match (self, point) {
            (WeightFunction::Discrete(w), Point::Discrete(i)) => w
                .values
                .get(*i)
                .map(|v| Scalar::Rational(v.clone()))
                .ok_or(OperatorError::ComponentMismatch),
            (WeightFunction::Pl(w), Point::Real(x)) => Ok(Scalar::Real(w.eval(*x))),
            _ => Err(OperatorError::ComponentMismatch),
        }
    }

    /// Greatest lower bound on the weight (exact except for PL products,
    /// where it is a conservative positive bound).
    pub fn h_min(&self) -> Scalar {
        match self {
            WeightFunction::Discrete(w) => Scalar::Rational(w.min()),
            WeightFunction::Pl(w) => Scalar::Real(w.bounds().0),
        }
    }

    pub fn h_max(&self) -> Scalar {
        match self {
            WeightFunction::Discrete(w) => Scalar::Rational(w.max()),
            WeightFunction::Pl(w) => Scalar::Real(w.bounds().1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn pl_weight_constant_tails() {
        let w = PlWeight::new(vec![0.0, 1.0], vec![2.0, 4.0]).unwrap();
        assert_eq!(w.eval(-5.0), 2.0);
        assert_eq!(w.eval(0.5), 3.0);
        assert_eq!(w.eval(9.0), 4.0);
        assert_eq!((w.min(), w.max()), (2.0, 4.0));
    }

    #[test]
    fn weights_must_be_positive() {
        assert!(PlWeight::new(vec![0.0], vec![0.0]).is_err());
        assert!(DiscreteWeights::new(vec![rat(1, 2), rat(0, 1)]).is_err());
        assert!(DiscreteWeights::new(vec![rat(1, 2), rat(3, 1)]).is_ok());
    }

    #[test]
    fn recip_bounds_swap() {
        let w = PlWeightExpr::Pl(PlWeight::new(vec![0.0, 1.0], vec![2.0, 4.0]).unwrap());
        let r = PlWeightExpr::PlRecip { inner: Box::new(w) };
        assert_eq!(r.bounds(), (0.25, 0.5));
        assert_eq!(r.eval(0.5), 1.0 / 3.0);
        assert!(r.bounds_exact());
    }

    #[test]
    fn compose_knots_pull_back() {
        let w = PlWeightExpr::Pl(PlWeight::new(vec![2.0, 4.0], vec![1.0, 3.0]).unwrap());
        let map = PlHomeo::new(vec![0.0, 1.0], vec![0.0, 2.0], 2.0, 2.0).unwrap();
        let c = PlWeightExpr::PlCompose {
            weight: Box::new(w),
            map,
        };
        // map(1) = 2, map(2) = 4, so knots pull back to {1, 2}
        assert_eq!(c.knots(), vec![1.0, 2.0]);
        assert_eq!(c.eval(1.5), 2.0); // w(map(1.5)) = w(3) = 2
        assert!(c.bounds_exact());
    }

    #[test]
    fn weight_json_shapes() {
        let d = WeightFunction::discrete(vec![rat(2, 1), rat(1, 2)]).unwrap();
        let j = serde_json::to_value(&d).unwrap();
        assert_eq!(j["kind"], "discrete");
        assert_eq!(j["values"][1], "1/2");
        let back: WeightFunction = serde_json::from_value(j).unwrap();
        assert_eq!(back, d);

        let p = WeightFunction::pl(vec![0.0, 1.0], vec![1.0, 2.0]).unwrap();
        let jp = serde_json::to_value(&p).unwrap();
        assert_eq!(jp["kind"], "pl");
        let back: WeightFunction = serde_json::from_value(jp).unwrap();
        assert_eq!(back, p);
    }
}
