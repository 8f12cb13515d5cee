//! The positive cone of each space model.
//!
//! A `ConeFunction` is a nonnegative function that vanishes at infinity:
//! exact rational values on a finite discrete space, or a canonical
//! compactly-supported piecewise-linear function on the line. All
//! operations are pure; values are immutable and freely shareable.
//!
//! PL canonical form (strictly increasing breakpoints, zero endpoint
//! values, no interior node collinear with its neighbors, the zero
//! function represented by an empty node list) is enforced on every
//! constructor output, so structural equality coincides with pointwise
//! equality for identically-built values.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize, Serializer};
use std::collections::BTreeSet;

use crate::error::ConeError;
use crate::polyline;
use crate::scalar::{rational_vec, Scalar};
use crate::space::{DiscreteSpace, Point, SpaceDescriptor};

/// A canonical compactly-supported piecewise-linear function.
#[derive(Clone, Debug, PartialEq)]
pub struct PlFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl PlFunction {
    /// Wraps node data that is already canonical (used by operator
    /// application, whose outputs are canonicalized at construction).
    pub(crate) fn from_canonical(breakpoints: Vec<f64>, values: Vec<f64>) -> Self {
        debug_assert_eq!(breakpoints.len(), values.len());
        PlFunction {
            breakpoints,
            values,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> f64 {
        polyline::eval(&self.breakpoints, &self.values, x)
    }
}

/// An element of the positive cone over one of the space models.
#[derive(Clone, Debug, PartialEq)]
pub enum ConeFunction {
    Discrete {
        space: DiscreteSpace,
        values: Vec<BigRational>,
    },
    Pl(PlFunction),
}

/// Wire form of a cone function: `{"kind":"discrete","values":[..]}` with
/// rationals as `"p/q"` strings, or `{"kind":"pl","breakpoints":[..],"values":[..]}`.
/// Discrete values bind to a space on deserialization via [`ConeFunction::from_json`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConeFunctionJson {
    Discrete {
        #[serde(with = "rational_vec")]
        values: Vec<BigRational>,
    },
    Pl {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
}

impl Serialize for ConeFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl ConeFunction {
    /// Exact nonnegative rational values, one per point of `space`.
    pub fn discrete(space: DiscreteSpace, values: Vec<BigRational>) -> Result<Self, ConeError> {
        if values.len() != space.len() {
            return Err(ConeError::WrongArity {
                expected: space.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| v < &BigRational::zero()) {
            return Err(ConeError::NegativeValue);
        }
        Ok(ConeFunction::Discrete { space, values })
    }

    /// Convenience constructor from integer values.
    pub fn discrete_from_ints(space: &DiscreteSpace, values: &[i64]) -> Result<Self, ConeError> {
        Self::discrete(
            space.clone(),
            values
                .iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect(),
        )
    }

    /// A compactly supported PL function; the input is validated and put
    /// into canonical form. Empty lists give the zero function.
    pub fn pl(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self, ConeError> {
        if breakpoints.len() != values.len() {
            return Err(ConeError::LengthMismatch);
        }
        if breakpoints.is_empty() {
            return Ok(ConeFunction::Pl(PlFunction {
                breakpoints,
                values,
            }));
        }
        if breakpoints.len() < 2 {
            return Err(ConeError::LengthMismatch);
        }
        if breakpoints.iter().any(|x| !x.is_finite())
            || breakpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(ConeError::BadBreakpoints);
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(ConeError::NegativeValue);
        }
        if values[0] != 0.0 || values[values.len() - 1] != 0.0 {
            return Err(ConeError::NonzeroEndpoint);
        }
        let (xs, ys) = polyline::canonicalize(breakpoints, values);
        Ok(ConeFunction::Pl(PlFunction {
            breakpoints: xs,
            values: ys,
        }))
    }

    pub fn zero(space: &SpaceDescriptor) -> Self {
        match space {
            SpaceDescriptor::Discrete(s) => ConeFunction::Discrete {
                space: s.clone(),
                values: vec![BigRational::zero(); s.len()],
            },
            SpaceDescriptor::PlLine(_) => ConeFunction::Pl(PlFunction {
                breakpoints: Vec::new(),
                values: Vec::new(),
            }),
        }
    }

    /// The indicator of a single point of a discrete space. Singletons are
    /// open there, so this is also the canonical "equal to 1 on a
    /// neighborhood" probe.
    pub fn indicator(space: &DiscreteSpace, index: usize) -> Result<Self, ConeError> {
        if index >= space.len() {
            return Err(ConeError::BadPoint);
        }
        let mut values = vec![BigRational::zero(); space.len()];
        values[index] = BigRational::from_integer(1.into());
        Ok(ConeFunction::Discrete {
            space: space.clone(),
            values,
        })
    }

    /// A function equal to 1 on a closed inner region around `center` and 0
    /// outside the open outer region. On discrete spaces this is the point
    /// indicator; on the line it ramps linearly between the two radii.
    pub fn plateau(
        space: &SpaceDescriptor,
        center: &Point,
        inner: f64,
        outer: f64,
    ) -> Result<Self, ConeError> {
        match (space, center) {
            (SpaceDescriptor::Discrete(s), Point::Discrete(i)) => Self::indicator(s, *i),
            (SpaceDescriptor::PlLine(_), Point::Real(c)) => {
                if !(inner > 0.0 && outer > inner) || !c.is_finite() || !outer.is_finite() {
                    return Err(ConeError::BadWidths);
                }
                Self::pl(
                    vec![c - outer, c - inner, c + inner, c + outer],
                    vec![0.0, 1.0, 1.0, 0.0],
                )
            }
            _ => Err(ConeError::BadPoint),
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, ConeFunction::Discrete { .. })
    }

    pub fn discrete_space(&self) -> Option<&DiscreteSpace> {
        match self {
            ConeFunction::Discrete { space, .. } => Some(space),
            ConeFunction::Pl(_) => None,
        }
    }

    pub fn discrete_values(&self) -> Option<&[BigRational]> {
        match self {
            ConeFunction::Discrete { values, .. } => Some(values),
            ConeFunction::Pl(_) => None,
        }
    }

    pub fn as_pl(&self) -> Option<&PlFunction> {
        match self {
            ConeFunction::Pl(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ConeFunction::Discrete { values, .. } => values.iter().all(Zero::is_zero),
            ConeFunction::Pl(p) => p.breakpoints.is_empty(),
        }
    }

    pub fn to_json(&self) -> ConeFunctionJson {
        match self {
            ConeFunction::Discrete { values, .. } => ConeFunctionJson::Discrete {
                values: values.clone(),
            },
            ConeFunction::Pl(p) => ConeFunctionJson::Pl {
                breakpoints: p.breakpoints.clone(),
                values: p.values.clone(),
            },
        }
    }

    /// Binds a wire-form function to its space.
    pub fn from_json(json: ConeFunctionJson, space: &SpaceDescriptor) -> Result<Self, ConeError> {
        match (json, space) {
            (ConeFunctionJson::Discrete { values }, SpaceDescriptor::Discrete(s)) => {
                Self::discrete(s.clone(), values)
            }
            (
                ConeFunctionJson::Pl {
                    breakpoints,
                    values,
                },
                SpaceDescriptor::PlLine(_),
            ) => Self::pl(breakpoints, values),
            _ => Err(ConeError::KindMismatch),
        }
    }

    fn check_same_space(&self, other: &ConeFunction) -> Result<(), ConeError> {
        match (self, other) {
            (
                ConeFunction::Discrete { space: a, .. },
                ConeFunction::Discrete { space: b, .. },
            ) => {
                if a == b {
                    Ok(())
                } else {
                    Err(ConeError::SpaceMismatch)
                }
            }
            (ConeFunction::Pl(_), ConeFunction::Pl(_)) => Ok(()),
            _ => Err(ConeError::SpaceMismatch),
        }
    }

    /// Pointwise sum.
    pub fn add(&self, other: &ConeFunction) -> Result<ConeFunction, ConeError> {
        self.check_same_space(other)?;
        match (self, other) {
            (
                ConeFunction::Discrete { space, values: a },
                ConeFunction::Discrete { values: b, .. },
            ) => Ok(ConeFunction::Discrete {
                space: space.clone(),
                values: a.iter().zip(b).map(|(x, y)| x + y).collect(),
            }),
            (ConeFunction::Pl(f), ConeFunction::Pl(g)) => {
                let (xs, ys) = polyline::combine(
                    &f.breakpoints,
                    &f.values,
                    &g.breakpoints,
                    &g.values,
                    |a, b| a + b,
                    false,
                );
                let (xs, ys) = polyline::canonicalize(xs, ys);
                Ok(ConeFunction::Pl(PlFunction {
                    breakpoints: xs,
                    values: ys,
                }))
            }
            _ => unreachable!("kind checked above"),
        }
    }

    /// Pointwise scaling by a nonnegative scalar of the matching model.
    pub fn scale(&self, r: &Scalar) -> Result<ConeFunction, ConeError> {
        if r.is_negative() {
            return Err(ConeError::NegativeScalar);
        }
        match (self, r) {
            (ConeFunction::Discrete { space, values }, Scalar::Rational(r)) => {
                Ok(ConeFunction::Discrete {
                    space: space.clone(),
                    values: values.iter().map(|v| v * r).collect(),
                })
            }
            (ConeFunction::Pl(f), Scalar::Real(r)) => {
                let ys: Vec<f64> = f.values.iter().map(|v| v * r).collect();
                let (xs, ys) = polyline::canonicalize(f.breakpoints.clone(), ys);
                Ok(ConeFunction::Pl(PlFunction {
                    breakpoints: xs,
                    values: ys,
                }))
            }
            _ => Err(ConeError::KindMismatch),
        }
    }

    /// Supremum norm; exact on discrete spaces, attained at a breakpoint on
    /// the PL line.
    pub fn sup_norm(&self) -> Scalar {
        match self {
            ConeFunction::Discrete { values, .. } => Scalar::Rational(
                values
                    .iter()
                    .cloned()
                    .max()
                    .unwrap_or_else(BigRational::zero),
            ),
            ConeFunction::Pl(p) => Scalar::Real(p.values.iter().copied().fold(0.0, f64::max)),
        }
    }

    /// Pointwise maximum, with PL crossing points inserted as breakpoints.
    pub fn pointwise_max(&self, other: &ConeFunction) -> Result<ConeFunction, ConeError> {
        self.check_same_space(other)?;
        match (self, other) {
            (
                ConeFunction::Discrete { space, values: a },
                ConeFunction::Discrete { values: b, .. },
            ) => Ok(ConeFunction::Discrete {
                space: space.clone(),
                values: a.iter().zip(b).map(|(x, y)| x.max(y).clone()).collect(),
            }),
            (ConeFunction::Pl(f), ConeFunction::Pl(g)) => {
                let (xs, ys) = polyline::combine(
                    &f.breakpoints,
                    &f.values,
                    &g.breakpoints,
                    &g.values,
                    f64::max,
                    true,
                );
                let (xs, ys) = polyline::canonicalize(xs, ys);
                Ok(ConeFunction::Pl(PlFunction {
                    breakpoints: xs,
                    values: ys,
                }))
            }
            _ => unreachable!("kind checked above"),
        }
    }

    /// `max(0, f - eps)`: clamped downward shift. The result is supported
    /// inside `{f >= eps}` and `||f - truncate(f, eps)|| <= eps`.
    pub fn truncate(&self, eps: &Scalar) -> Result<ConeFunction, ConeError> {
        if eps.is_negative() {
            return Err(ConeError::NegativeScalar);
        }
        match (self, eps) {
            (ConeFunction::Discrete { space, values }, Scalar::Rational(e)) => {
                Ok(ConeFunction::Discrete {
                    space: space.clone(),
                    values: values
                        .iter()
                        .map(|v| {
                            let d = v - e;
                            if d < BigRational::zero() {
                                BigRational::zero()
                            } else {
                                d
                            }
                        })
                        .collect(),
                })
            }
            (ConeFunction::Pl(f), Scalar::Real(e)) => {
                let (xs, ys) = polyline::shift_down_clamp(&f.breakpoints, &f.values, *e);
                let (xs, ys) = polyline::canonicalize(xs, ys);
                Ok(ConeFunction::Pl(PlFunction {
                    breakpoints: xs,
                    values: ys,
                }))
            }
            _ => Err(ConeError::KindMismatch),
        }
    }

    /// Pointwise order; decided exactly (on the merged breakpoint set for PL).
    pub fn leq(&self, other: &ConeFunction) -> Result<bool, ConeError> {
        self.check_same_space(other)?;
        match (self, other) {
            (
                ConeFunction::Discrete { values: a, .. },
                ConeFunction::Discrete { values: b, .. },
            ) => Ok(a.iter().zip(b).all(|(x, y)| x <= y)),
            (ConeFunction::Pl(f), ConeFunction::Pl(g)) => {
                let grid = polyline::merge_grids(&f.breakpoints, &g.breakpoints);
                Ok(grid.iter().all(|&x| f.eval(x) <= g.eval(x)))
            }
            _ => unreachable!("kind checked above"),
        }
    }

    /// The set where the function is nonzero.
    pub fn coz(&self) -> Cozero {
        match self {
            ConeFunction::Discrete { values, .. } => Cozero::Points(
                values
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(i, _)| i)
                    .collect(),
            ),
            ConeFunction::Pl(p) => {
                Cozero::OpenIntervals(polyline::positive_intervals(&p.breakpoints, &p.values))
            }
        }
    }

    /// The closure of the cozero set. Equals `coz` on discrete spaces;
    /// touching PL intervals merge.
    pub fn supp(&self) -> Support {
        match self.coz() {
            Cozero::Points(pts) => Support::Points(pts),
            Cozero::OpenIntervals(intervals) => {
                let mut merged: Vec<(f64, f64)> = Vec::new();
                for (a, b) in intervals {
                    match merged.last_mut() {
                        Some(last) if a <= last.1 => last.1 = last.1.max(b),
                        _ => merged.push((a, b)),
                    }
                }
                Support::ClosedIntervals(merged)
            }
        }
    }

    /// Value at a point of the matching model.
    pub fn value_at(&self, point: &Point) -> Result<Scalar, ConeError> {
        match (self, point) {
            (ConeFunction::Discrete { values, .. }, Point::Discrete(i)) => values
                .get(*i)
                .map(|v| Scalar::Rational(v.clone()))
                .ok_or(ConeError::BadPoint),
            (ConeFunction::Pl(p), Point::Real(x)) => {
                if !x.is_finite() {
                    return Err(ConeError::BadPoint);
                }
                Ok(Scalar::Real(p.eval(*x)))
            }
            _ => Err(ConeError::BadPoint),
        }
    }

    /// `||f - g||`, computed exactly (PL: on the merged breakpoint set,
    /// where the difference is linear per segment).
    pub fn sup_distance(&self, other: &ConeFunction) -> Result<Scalar, ConeError> {
        self.check_same_space(other)?;
        match (self, other) {
            (
                ConeFunction::Discrete { values: a, .. },
                ConeFunction::Discrete { values: b, .. },
            ) => {
                let mut best = BigRational::zero();
                for (x, y) in a.iter().zip(b) {
                    let d = if x >= y { x - y } else { y - x };
                    if d > best {
                        best = d;
                    }
                }
                Ok(Scalar::Rational(best))
            }
            (ConeFunction::Pl(f), ConeFunction::Pl(g)) => Ok(Scalar::Real(
                polyline::sup_distance(&f.breakpoints, &f.values, &g.breakpoints, &g.values),
            )),
            _ => unreachable!("kind checked above"),
        }
    }
}

/// Pointwise minimum of a nonempty family, with PL crossings inserted.
pub fn pointwise_min(fs: &[ConeFunction]) -> Result<ConeFunction, ConeError> {
    let (first, rest) = fs.split_first().ok_or(ConeError::EmptyList)?;
    let mut acc = first.clone();
    for g in rest {
        acc.check_same_space(g)?;
        acc = match (&acc, g) {
            (
                ConeFunction::Discrete { space, values: a },
                ConeFunction::Discrete { values: b, .. },
            ) => ConeFunction::Discrete {
                space: space.clone(),
                values: a.iter().zip(b).map(|(x, y)| x.min(y).clone()).collect(),
            },
            (ConeFunction::Pl(f), ConeFunction::Pl(g)) => {
                let (xs, ys) = polyline::combine(
                    &f.breakpoints,
                    &f.values,
                    &g.breakpoints,
                    &g.values,
                    f64::min,
                    true,
                );
                let (xs, ys) = polyline::canonicalize(xs, ys);
                ConeFunction::Pl(PlFunction {
                    breakpoints: xs,
                    values: ys,
                })
            }
            _ => unreachable!("kind checked above"),
        };
    }
    Ok(acc)
}

/// Finite disjointness: the pointwise minimum vanishes identically, or
/// equivalently the cozero sets have empty common intersection. Both
/// criteria are computed and must agree.
pub fn disjoint(fs: &[ConeFunction]) -> Result<bool, ConeError> {
    if fs.is_empty() {
        return Err(ConeError::EmptyList);
    }
    let min_zero = pointwise_min(fs)?.is_zero();
    let coz_empty = common_cozero_empty(fs);
    assert_eq!(
        min_zero, coz_empty,
        "min/cozero disjointness criteria disagree"
    );
    Ok(min_zero)
}

fn common_cozero_empty(fs: &[ConeFunction]) -> bool {
    match fs[0].coz() {
        Cozero::Points(first) => {
            let mut acc = first;
            for f in &fs[1..] {
                if let Cozero::Points(other) = f.coz() {
                    acc = acc.intersection(&other).copied().collect();
                }
                if acc.is_empty() {
                    return true;
                }
            }
            acc.is_empty()
        }
        Cozero::OpenIntervals(first) => {
            let mut acc = first;
            for f in &fs[1..] {
                if let Cozero::OpenIntervals(other) = f.coz() {
                    acc = intersect_open_intervals(&acc, &other);
                }
                if acc.is_empty() {
                    return true;
                }
            }
            acc.is_empty()
        }
    }
}

fn intersect_open_intervals(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let lo = a[i].0.max(b[j].0);
        let hi = a[i].1.min(b[j].1);
        if lo < hi {
            out.push((lo, hi));
        }
        if a[i].1 <= b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// Cozero set: points of a discrete space or open intervals on the line.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cozero {
    Points(BTreeSet<usize>),
    OpenIntervals(Vec<(f64, f64)>),
}

impl Cozero {
    pub fn is_empty(&self) -> bool {
        match self {
            Cozero::Points(p) => p.is_empty(),
            Cozero::OpenIntervals(iv) => iv.is_empty(),
        }
    }

    pub fn intersects(&self, other: &Cozero) -> Result<bool, ConeError> {
        match (self, other) {
            (Cozero::Points(a), Cozero::Points(b)) => Ok(a.intersection(b).next().is_some()),
            (Cozero::OpenIntervals(a), Cozero::OpenIntervals(b)) => {
                Ok(!intersect_open_intervals(a, b).is_empty())
            }
            _ => Err(ConeError::KindMismatch),
        }
    }
}

/// Support: closure of the cozero set.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Support {
    Points(BTreeSet<usize>),
    ClosedIntervals(Vec<(f64, f64)>),
}

impl Support {
    pub fn is_empty(&self) -> bool {
        match self {
            Support::Points(p) => p.is_empty(),
            Support::ClosedIntervals(iv) => iv.is_empty(),
        }
    }

    pub fn contains(&self, point: &Point) -> Result<bool, ConeError> {
        match (self, point) {
            (Support::Points(p), Point::Discrete(i)) => Ok(p.contains(i)),
            (Support::ClosedIntervals(iv), Point::Real(x)) => {
                Ok(iv.iter().any(|&(a, b)| *x >= a && *x <= b))
            }
            _ => Err(ConeError::KindMismatch),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn space2() -> DiscreteSpace {
        DiscreteSpace::with_size(2).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn tent(a: f64, peak_x: f64, b: f64, peak: f64) -> ConeFunction {
        ConeFunction::pl(vec![a, peak_x, b], vec![0.0, peak, 0.0]).unwrap()
    }

    fn assert_pl_matches_sampled(
        result: &ConeFunction,
        expected: impl Fn(f64) -> f64,
        lo: f64,
        hi: f64,
    ) {
        let p = result.as_pl().unwrap();
        let n = 1000;
        for k in 0..=n {
            let x = lo + (hi - lo) * (k as f64) / (n as f64);
            let got = p.eval(x);
            let want = expected(x);
            assert!(
                (got - want).abs() <= 1e-12 * (1.0 + want.abs()),
                "mismatch at x={x}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn add_componentwise() {
        let s = space2();
        let f = ConeFunction::discrete_from_ints(&s, &[1, 3]).unwrap();
        let g = ConeFunction::discrete_from_ints(&s, &[2, 0]).unwrap();
        let sum = f.add(&g).unwrap();
        assert_eq!(sum, ConeFunction::discrete_from_ints(&s, &[3, 3]).unwrap());
    }

    #[test]
    fn add_zero_is_identity() {
        let s = space2();
        let f = ConeFunction::discrete_from_ints(&s, &[1, 3]).unwrap();
        let z = ConeFunction::zero(&SpaceDescriptor::Discrete(s.clone()));
        assert_eq!(f.add(&z).unwrap(), f);

        let t = tent(0.0, 1.0, 2.0, 1.0);
        let zp = ConeFunction::zero(&SpaceDescriptor::pl_line(1e-9).unwrap());
        assert_eq!(t.add(&zp).unwrap(), t);
    }

    #[test]
    fn add_merges_tent_breakpoints() {
        let t1 = tent(0.0, 1.0, 2.0, 1.0);
        let t2 = tent(1.0, 2.0, 3.0, 1.0);
        let sum = t1.add(&t2).unwrap();
        let p = sum.as_pl().unwrap();
        assert_eq!(p.breakpoints(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(p.values(), &[0.0, 1.0, 1.0, 0.0]);
        // independent oracle: evaluate both tents over a dense grid and sum
        let (a, b) = (t1.clone(), t2.clone());
        assert_pl_matches_sampled(
            &sum,
            |x| a.as_pl().unwrap().eval(x) + b.as_pl().unwrap().eval(x),
            -1.0,
            4.0,
        );
    }

    #[test]
    fn add_requires_same_space() {
        let f = ConeFunction::discrete_from_ints(&space2(), &[1, 0]).unwrap();
        let g =
            ConeFunction::discrete_from_ints(&DiscreteSpace::with_size(3).unwrap(), &[1, 0, 0])
                .unwrap();
        assert_eq!(f.add(&g), Err(ConeError::SpaceMismatch));
    }

    #[test]
    fn scale_cases() {
        let s = space2();
        let f = ConeFunction::discrete_from_ints(&s, &[1, 3]).unwrap();
        assert!(f.scale(&Scalar::from_int(0)).unwrap().is_zero());
        assert_eq!(f.scale(&Scalar::from_int(1)).unwrap(), f);
        assert_eq!(
            f.scale(&Scalar::from_int(2)).unwrap(),
            ConeFunction::discrete_from_ints(&s, &[2, 6]).unwrap()
        );
        assert_eq!(f.scale(&Scalar::from_int(-1)), Err(ConeError::NegativeScalar));
    }

    #[test]
    fn sup_norm_cases() {
        let s = space2();
        let z = ConeFunction::zero(&SpaceDescriptor::Discrete(s.clone()));
        assert!(z.sup_norm().is_zero());
        let f = ConeFunction::discrete_from_ints(&s, &[1, 3]).unwrap();
        assert_eq!(f.sup_norm(), Scalar::from_int(3));

        // PL max is attained at a breakpoint; verify against dense sampling
        let t = tent(0.0, 1.0, 2.0, 2.5);
        assert_eq!(t.sup_norm(), Scalar::Real(2.5));
        let p = t.as_pl().unwrap();
        let sampled_max = (0..=2000)
            .map(|k| p.eval(0.002 * k as f64))
            .fold(0.0, f64::max);
        assert!((t.sup_norm().to_f64() - sampled_max).abs() <= 1e-12);
    }

    #[test]
    fn pointwise_min_cases() {
        let s = space2();
        let f = ConeFunction::discrete_from_ints(&s, &[1, 3]).unwrap();
        let g = ConeFunction::discrete_from_ints(&s, &[2, 0]).unwrap();
        assert_eq!(
            pointwise_min(&[f.clone(), g]).unwrap(),
            ConeFunction::discrete_from_ints(&s, &[1, 0]).unwrap()
        );
        assert_eq!(pointwise_min(&[f.clone()]).unwrap(), f);
        assert_eq!(pointwise_min(&[]), Err(ConeError::EmptyList));

        // disjoint supports force a vanishing minimum
        let t1 = tent(0.0, 1.0, 2.0, 1.0);
        let t2 = tent(3.0, 4.0, 5.0, 2.0);
        assert!(pointwise_min(&[t1, t2]).unwrap().is_zero());
    }

    #[test]
    fn pointwise_max_cases() {
        let s = space2();
        let f = ConeFunction::discrete_from_ints(&s, &[1, 3]).unwrap();
        let g = ConeFunction::discrete_from_ints(&s, &[2, 0]).unwrap();
        assert_eq!(
            f.pointwise_max(&g).unwrap(),
            ConeFunction::discrete_from_ints(&s, &[2, 3]).unwrap()
        );
        let z = ConeFunction::zero(&SpaceDescriptor::Discrete(s));
        assert_eq!(f.pointwise_max(&z).unwrap(), f);

        // overlapping tents: envelope with the analytic crossing inserted.
        // tents peak 1 at x=1 (support [0,2]) and x=2 (support [1,3]);
        // they cross where 2-x = x-1, i.e. x = 1.5.
        let t1 = tent(0.0, 1.0, 2.0, 1.0);
        let t2 = tent(1.0, 2.0, 3.0, 1.0);
        let env = t1.pointwise_max(&t2).unwrap();
        let p = env.as_pl().unwrap();
        assert!(p.breakpoints().contains(&1.5));
        assert_eq!(p.eval(1.5), 0.5);
        let (a, b) = (t1.clone(), t2.clone());
        assert_pl_matches_sampled(
            &env,
            |x| a.as_pl().unwrap().eval(x).max(b.as_pl().unwrap().eval(x)),
            -0.5,
            3.5,
        );
    }

    #[test]
    fn truncate_cases() {
        let s = space2();
        let z = ConeFunction::zero(&SpaceDescriptor::Discrete(s.clone()));
        assert!(z.truncate(&Scalar::from_int(1)).unwrap().is_zero());
        let f = ConeFunction::discrete_from_ints(&s, &[1, 3]).unwrap();
        assert_eq!(
            f.truncate(&Scalar::from_int(1)).unwrap(),
            ConeFunction::discrete_from_ints(&s, &[0, 2]).unwrap()
        );

        // tent peak 1 on [0,2] cut at 0.5: new zeros where f(x) = 0.5
        let t = tent(0.0, 1.0, 2.0, 1.0);
        let cut = t.truncate(&Scalar::Real(0.5)).unwrap();
        let p = cut.as_pl().unwrap();
        assert_eq!(p.breakpoints(), &[0.5, 1.0, 1.5]);
        assert_eq!(p.values(), &[0.0, 0.5, 0.0]);
    }

    #[test]
    fn truncate_bounds() {
        let f = ConeFunction::discrete(
            space2(),
            vec![rat(7, 2), rat(1, 3)],
        )
        .unwrap();
        let eps = Scalar::from_ratio(1, 2);
        let t = f.truncate(&eps).unwrap();
        assert!(t.leq(&f).unwrap());
        assert!(f.sup_distance(&t).unwrap().le(&eps).unwrap());
    }

    #[test]
    fn leq_cases() {
        let s = space2();
        let f = ConeFunction::discrete_from_ints(&s, &[1, 3]).unwrap();
        let g = ConeFunction::discrete_from_ints(&s, &[2, 0]).unwrap();
        let z = ConeFunction::zero(&SpaceDescriptor::Discrete(s));
        assert!(z.leq(&f).unwrap());
        assert!(!f.leq(&g).unwrap());
    }

    #[test]
    fn coz_and_supp_cases() {
        let s = space2();
        let z = ConeFunction::zero(&SpaceDescriptor::Discrete(s.clone()));
        assert!(z.coz().is_empty());
        assert!(z.supp().is_empty());

        let f = ConeFunction::discrete_from_ints(&s, &[0, 2]).unwrap();
        assert_eq!(f.coz(), Cozero::Points([1].into()));
        assert_eq!(f.supp(), Support::Points([1].into()));

        let t = tent(0.0, 1.0, 2.0, 1.0);
        assert_eq!(t.coz(), Cozero::OpenIntervals(vec![(0.0, 2.0)]));
        assert_eq!(t.supp(), Support::ClosedIntervals(vec![(0.0, 2.0)]));
    }

    #[test]
    fn disjoint_cases() {
        let s = space2();
        let f = ConeFunction::discrete_from_ints(&s, &[1, 1]).unwrap();
        let z = ConeFunction::zero(&SpaceDescriptor::Discrete(s.clone()));
        assert!(disjoint(&[f.clone(), z]).unwrap());
        let a = ConeFunction::discrete_from_ints(&s, &[1, 0]).unwrap();
        let b = ConeFunction::discrete_from_ints(&s, &[0, 2]).unwrap();
        assert!(disjoint(&[a, b.clone()]).unwrap());
        assert!(!disjoint(&[f, b]).unwrap());
    }

    #[test]
    fn plateau_cases() {
        let s = space2();
        let ind = ConeFunction::plateau(
            &SpaceDescriptor::Discrete(s.clone()),
            &Point::Discrete(0),
            1.0,
            2.0,
        )
        .unwrap();
        assert_eq!(ind, ConeFunction::discrete_from_ints(&s, &[1, 0]).unwrap());

        let line = SpaceDescriptor::pl_line(1e-9).unwrap();
        let p = ConeFunction::plateau(&line, &Point::Real(0.0), 1.0, 2.0).unwrap();
        let pl = p.as_pl().unwrap();
        assert_eq!(pl.breakpoints(), &[-2.0, -1.0, 1.0, 2.0]);
        assert_eq!(pl.values(), &[0.0, 1.0, 1.0, 0.0]);

        assert_eq!(
            ConeFunction::plateau(&line, &Point::Real(0.0), 2.0, 2.0),
            Err(ConeError::BadWidths)
        );

        // separated outer intervals imply disjointness
        let q = ConeFunction::plateau(&line, &Point::Real(10.0), 1.0, 2.0).unwrap();
        assert!(disjoint(&[p, q]).unwrap());
    }

    #[test]
    fn canonical_form_strips_zero_tails_and_collinear_nodes() {
        let f = ConeFunction::pl(
            vec![-1.0, 0.0, 0.5, 1.0, 2.0],
            vec![0.0, 0.0, 0.5, 1.0, 0.0],
        )
        .unwrap();
        let p = f.as_pl().unwrap();
        assert_eq!(p.breakpoints(), &[0.0, 1.0, 2.0]);
        assert_eq!(p.values(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn pl_constructor_validation() {
        assert_eq!(
            ConeFunction::pl(vec![0.0, 1.0], vec![0.0, 1.0]),
            Err(ConeError::NonzeroEndpoint)
        );
        assert_eq!(
            ConeFunction::pl(vec![1.0, 0.0, 2.0], vec![0.0, 1.0, 0.0]),
            Err(ConeError::BadBreakpoints)
        );
        assert_eq!(
            ConeFunction::pl(vec![0.0, 1.0, 2.0], vec![0.0, -1.0, 0.0]),
            Err(ConeError::NegativeValue)
        );
        assert!(ConeFunction::pl(vec![], vec![]).unwrap().is_zero());
    }

    #[test]
    fn function_json_shape() {
        let s = space2();
        let f = ConeFunction::discrete(s.clone(), vec![rat(1, 2), rat(3, 1)]).unwrap();
        let j = serde_json::to_value(&f).unwrap();
        assert_eq!(j["kind"], "discrete");
        assert_eq!(j["values"][0], "1/2");
        assert_eq!(j["values"][1], "3");
        let parsed: ConeFunctionJson = serde_json::from_value(j).unwrap();
        let back =
            ConeFunction::from_json(parsed, &SpaceDescriptor::Discrete(s)).unwrap();
        assert_eq!(back, f);
    }
}
