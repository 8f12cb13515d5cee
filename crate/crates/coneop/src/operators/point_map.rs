//! Point maps underlying composition operators: permutations of finite
//! discrete spaces and piecewise-linear homeomorphisms of the line.

use serde::{Deserialize, Serialize};

use crate::error::OperatorError;
use crate::polyline;
use crate::space::Point;

/// A piecewise-linear homeomorphism of the real line: linear interpolation
/// through strictly monotone node values, extended affinely beyond the
/// first and last node by nonzero tail slopes of the matching sign.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PlHomeoRepr", into = "PlHomeoRepr")]
pub struct PlHomeo {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    left_slope: f64,
    right_slope: f64,
}

#[derive(Serialize, Deserialize)]
struct PlHomeoRepr {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    left_slope: f64,
    right_slope: f64,
}

impl TryFrom<PlHomeoRepr> for PlHomeo {
    type Error = OperatorError;
    fn try_from(r: PlHomeoRepr) -> Result<Self, OperatorError> {
        PlHomeo::new(r.breakpoints, r.values, r.left_slope, r.right_slope)
    }
}

impl From<PlHomeo> for PlHomeoRepr {
    fn from(h: PlHomeo) -> Self {
        PlHomeoRepr {
            breakpoints: h.breakpoints,
            values: h.values,
            left_slope: h.left_slope,
            right_slope: h.right_slope,
        }
    }
}

impl PlHomeo {
    pub fn new(
        breakpoints: Vec<f64>,
        values: Vec<f64>,
        left_slope: f64,
        right_slope: f64,
    ) -> Result<Self, OperatorError> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(OperatorError::NotMonotone);
        }
        let finite = breakpoints.iter().chain(values.iter()).all(|x| x.is_finite())
            && left_slope.is_finite()
            && right_slope.is_finite();
        if !finite || breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(OperatorError::NotMonotone);
        }
        let increasing = left_slope > 0.0;
        let slopes_ok = if increasing {
            left_slope > 0.0 && right_slope > 0.0
        } else {
            left_slope < 0.0 && right_slope < 0.0
        };
        let values_ok = values.windows(2).all(|w| {
            if increasing {
                w[0] < w[1]
            } else {
                w[0] > w[1]
            }
        });
        if !slopes_ok || !values_ok || left_slope == 0.0 || right_slope == 0.0 {
            return Err(OperatorError::NotMonotone);
        }
        Ok(Self {
            breakpoints,
            values,
            left_slope,
            right_slope,
        }
        .canonicalized())
    }

    /// The identity map.
    pub fn identity() -> Self {
        PlHomeo {
            breakpoints: vec![0.0],
            values: vec![0.0],
            left_slope: 1.0,
            right_slope: 1.0,
        }
    }

    fn canonicalized(mut self) -> Self {
        // drop end nodes whose adjacent segment continues the tail line
        loop {
            let n = self.breakpoints.len();
            if n < 2 {
                break;
            }
            let s0 = (self.values[1] - self.values[0]) / (self.breakpoints[1] - self.breakpoints[0]);
            if s0 == self.left_slope {
                self.breakpoints.remove(0);
                self.values.remove(0);
            } else {
                break;
            }
        }
        loop {
            let n = self.breakpoints.len();
            if n < 2 {
                break;
            }
            let s = (self.values[n - 1] - self.values[n - 2])
                / (self.breakpoints[n - 1] - self.breakpoints[n - 2]);
            if s == self.right_slope {
                self.breakpoints.pop();
                self.values.pop();
            } else {
                break;
            }
        }
        // a pure affine map anchors at x = 0 so equal maps compare equal
        if self.breakpoints.len() == 1 && self.left_slope == self.right_slope {
            let v0 = self.values[0] - self.left_slope * self.breakpoints[0];
            self.breakpoints[0] = 0.0;
            self.values[0] = v0;
        }
        // interior collinear nodes
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
        self.breakpoints = xs;
        self.values = ys;
        self
    }

    pub fn is_increasing(&self) -> bool {
        self.left_slope > 0.0
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn eval(&self, y: f64) -> f64 {
        let n = self.breakpoints.len();
        if y < self.breakpoints[0] {
            return self.values[0] + self.left_slope * (y - self.breakpoints[0]);
        }
        if y > self.breakpoints[n - 1] {
            return self.values[n - 1] + self.right_slope * (y - self.breakpoints[n - 1]);
        }
        polyline::eval(&self.breakpoints, &self.values, y)
    }

    /// The inverse homeomorphism (swap the roles of input and output).
    pub fn invert(&self) -> PlHomeo {
        if self.is_increasing() {
            PlHomeo {
                breakpoints: self.values.clone(),
                values: self.breakpoints.clone(),
                left_slope: 1.0 / self.left_slope,
                right_slope: 1.0 / self.right_slope,
            }
        } else {
            let mut bp: Vec<f64> = self.values.clone();
            bp.reverse();
            let mut vals: Vec<f64> = self.breakpoints.clone();
            vals.reverse();
            PlHomeo {
                breakpoints: bp,
                values: vals,
                // the inverse of a decreasing map is decreasing; its left
                // tail corresponds to the original right tail
                left_slope: 1.0 / self.right_slope,
                right_slope: 1.0 / self.left_slope,
            }
        }
    }

    /// Pull a sorted node set back through the map: returns tau^{-1} of
    /// each node, in increasing order.
    pub fn pull_back(&self, nodes: &[f64]) -> Vec<f64> {
        let inv = self.invert();
        let mut out: Vec<f64> = nodes.iter().map(|&x| inv.eval(x)).collect();
        if !self.is_increasing() {
            out.reverse();
        }
        out
    }

    /// Composition `outer(inner(.))` of two homeomorphisms.
    pub fn compose(outer: &PlHomeo, inner: &PlHomeo) -> Result<PlHomeo, OperatorError> {
        let pulled = inner.pull_back(&outer.breakpoints);
        let knots = polyline::merge_grids(&inner.breakpoints, &pulled);
        let values: Vec<f64> = knots.iter().map(|&z| outer.eval(inner.eval(z))).collect();
        let (left, right) = if inner.is_increasing() {
            (
                outer.left_slope * inner.left_slope,
                outer.right_slope * inner.right_slope,
            )
        } else {
            (
                outer.right_slope * inner.left_slope,
                outer.left_slope * inner.right_slope,
            )
        };
        PlHomeo::new(knots, values, left, right)
    }
}

/// A point map between spaces, in the codomain-to-domain direction that a
/// composition operator consumes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointMap {
    /// `map[y] = x`: the index in the domain space that the codomain point
    /// `y` is sent to. Must be a bijection.
    Permutation { map: Vec<usize> },
    PlHomeo(PlHomeo),
}

impl PointMap {
    pub fn permutation(map: Vec<usize>) -> Result<Self, OperatorError> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &x in &map {
            if x >= n || seen[x] {
                return Err(OperatorError::NotBijective);
            }
            seen[x] = true;
        }
        Ok(PointMap::Permutation { map })
    }

    pub fn identity_permutation(n: usize) -> Self {
        PointMap::Permutation {
            map: (0..n).collect(),
        }
    }

    pub fn apply_point(&self, y: &Point) -> Result<Point, OperatorError> {
        match (self, y) {
            (PointMap::Permutation { map }, Point::Discrete(i)) => map
                .get(*i)
                .map(|&x| Point::Discrete(x))
                .ok_or(OperatorError::ComponentMismatch),
            (PointMap::PlHomeo(h), Point::Real(y)) => Ok(Point::Real(h.eval(*y))),
            _ => Err(OperatorError::ComponentMismatch),
        }
    }

    pub fn invert(&self) -> PointMap {
        match self {
            PointMap::Permutation { map } => {
                let mut inv = vec![0usize; map.len()];
                for (y, &x) in map.iter().enumerate() {
                    inv[x] = y;
                }
                PointMap::Permutation { map: inv }
            }
            PointMap::PlHomeo(h) => PointMap::PlHomeo(h.invert()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_must_be_bijective() {
        assert!(PointMap::permutation(vec![1, 0, 2]).is_ok());
        assert!(matches!(
            PointMap::permutation(vec![0, 0, 2]),
            Err(OperatorError::NotBijective)
        ));
        assert!(matches!(
            PointMap::permutation(vec![0, 3]),
            Err(OperatorError::NotBijective)
        ));
    }

    #[test]
    fn permutation_inverse_round_trip() {
        let p = PointMap::permutation(vec![2, 0, 1]).unwrap();
        let inv = p.invert();
        for i in 0..3 {
            let there = p.apply_point(&Point::Discrete(i)).unwrap();
            let back = inv.apply_point(&there).unwrap();
            assert_eq!(back, Point::Discrete(i));
        }
    }

    #[test]
    fn homeo_eval_and_tails() {
        let h = PlHomeo::new(vec![0.0, 1.0], vec![0.0, 2.0], 1.0, 0.5).unwrap();
        assert_eq!(h.eval(0.5), 1.0);
        assert_eq!(h.eval(-2.0), -2.0);
        assert_eq!(h.eval(3.0), 3.0);
        assert!(h.is_increasing());
    }

    #[test]
    fn homeo_inverse_round_trip() {
        let h = PlHomeo::new(vec![-1.0, 0.0, 2.0], vec![-3.0, 0.0, 1.0], 2.0, 0.25).unwrap();
        let inv = h.invert();
        for k in -30..=30 {
            let y = k as f64 * 0.3;
            let x = h.eval(y);
            assert!((inv.eval(x) - y).abs() < 1e-12, "round trip at {y}");
        }
    }

    #[test]
    fn decreasing_homeo_inverse() {
        let h = PlHomeo::new(vec![0.0, 1.0], vec![5.0, 3.0], -1.0, -2.0).unwrap();
        assert!(!h.is_increasing());
        let inv = h.invert();
        for k in -20..=20 {
            let y = k as f64 * 0.4;
            assert!((inv.eval(h.eval(y)) - y).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_monotone() {
        assert!(PlHomeo::new(vec![0.0, 1.0], vec![0.0, -1.0], 1.0, 1.0).is_err());
        assert!(PlHomeo::new(vec![0.0, 1.0], vec![0.0, 1.0], 1.0, -1.0).is_err());
        assert!(PlHomeo::new(vec![0.0, 1.0], vec![0.0, 1.0], 0.0, 1.0).is_err());
    }

    #[test]
    fn compose_matches_pointwise() {
        let a = PlHomeo::new(vec![0.0, 1.0, 3.0], vec![0.0, 0.5, 4.0], 0.5, 2.0).unwrap();
        let b = PlHomeo::new(vec![-1.0, 2.0], vec![1.0, 2.5], 1.0, 0.5).unwrap();
        let c = PlHomeo::compose(&a, &b).unwrap();
        for k in -40..=40 {
            let z = k as f64 * 0.25;
            assert!(
                (c.eval(z) - a.eval(b.eval(z))).abs() < 1e-12,
                "composition at {z}"
            );
        }
    }

    #[test]
    fn identity_canonicalizes_to_single_node() {
        let h = PlHomeo::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 2.0], 1.0, 1.0).unwrap();
        assert_eq!(h.breakpoints().len(), 1);
        assert_eq!(h, PlHomeo::identity());
    }
}
