//! Desk-scale models of locally compact Hausdorff spaces.
//!
//! Two models are supported: a finite discrete set of named points (the
//! exact model — every finite Hausdorff space is discrete), and the real
//! line with piecewise-linear functions (the approximate, non-compact
//! model). The PL line carries a resolution used as the default probe
//! granularity during recovery.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::ConeError;

/// A finite discrete space with ordered, pairwise-distinct point names.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "DiscreteSpaceRepr", into = "DiscreteSpaceRepr")]
pub struct DiscreteSpace {
    points: Arc<[String]>,
}

#[derive(Serialize, Deserialize)]
struct DiscreteSpaceRepr {
    points: Vec<String>,
}

impl TryFrom<DiscreteSpaceRepr> for DiscreteSpace {
    type Error = ConeError;
    fn try_from(repr: DiscreteSpaceRepr) -> Result<Self, ConeError> {
        DiscreteSpace::new(repr.points)
    }
}

impl From<DiscreteSpace> for DiscreteSpaceRepr {
    fn from(s: DiscreteSpace) -> Self {
        DiscreteSpaceRepr {
            points: s.points.to_vec(),
        }
    }
}

impl DiscreteSpace {
    pub fn new(points: Vec<String>) -> Result<Self, ConeError> {
        if points.is_empty() {
            return Err(ConeError::EmptySpace);
        }
        let distinct: BTreeSet<&String> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(ConeError::DuplicatePoints);
        }
        Ok(DiscreteSpace {
            points: points.into(),
        })
    }

    /// Space with points named `p0, p1, ..`.
    pub fn with_size(n: usize) -> Result<Self, ConeError> {
        Self::new((0..n).map(|i| format!("p{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees n >= 1
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }
}

impl PartialEq for DiscreteSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.points, &other.points) || self.points == other.points
    }
}
impl Eq for DiscreteSpace {}

/// The real line modeled through piecewise-linear functions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PlLineRepr", into = "PlLineRepr")]
pub struct PlLineSpace {
    resolution: f64,
}

#[derive(Serialize, Deserialize)]
struct PlLineRepr {
    resolution: f64,
}

impl TryFrom<PlLineRepr> for PlLineSpace {
    type Error = ConeError;
    fn try_from(repr: PlLineRepr) -> Result<Self, ConeError> {
        PlLineSpace::new(repr.resolution)
    }
}

impl From<PlLineSpace> for PlLineRepr {
    fn from(s: PlLineSpace) -> Self {
        PlLineRepr {
            resolution: s.resolution,
        }
    }
}

impl PlLineSpace {
    pub fn new(resolution: f64) -> Result<Self, ConeError> {
        if !(resolution > 0.0) || !resolution.is_finite() {
            return Err(ConeError::BadResolution);
        }
        Ok(PlLineSpace { resolution })
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }
}

/// Either space model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceDescriptor {
    Discrete(DiscreteSpace),
    PlLine(PlLineSpace),
}

impl SpaceDescriptor {
    pub fn discrete(n: usize) -> Result<Self, ConeError> {
        Ok(SpaceDescriptor::Discrete(DiscreteSpace::with_size(n)?))
    }

    pub fn pl_line(resolution: f64) -> Result<Self, ConeError> {
        Ok(SpaceDescriptor::PlLine(PlLineSpace::new(resolution)?))
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, SpaceDescriptor::Discrete(_))
    }

    pub fn as_discrete(&self) -> Option<&DiscreteSpace> {
        match self {
            SpaceDescriptor::Discrete(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_pl_line(&self) -> Option<&PlLineSpace> {
        match self {
            SpaceDescriptor::PlLine(s) => Some(s),
            _ => None,
        }
    }
}

/// A point of either model: an index into a discrete space's point list,
/// or a real coordinate on the PL line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Discrete(usize),
    Real(f64),
}

impl Point {
    pub fn describe(&self) -> String {
        match self {
            Point::Discrete(i) => format!("#{i}"),
            Point::Real(x) => format!("{x}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_duplicate_points() {
        assert!(matches!(DiscreteSpace::new(vec![]), Err(ConeError::EmptySpace)));
        let dup = DiscreteSpace::new(vec!["a".into(), "a".into()]);
        assert!(matches!(dup, Err(ConeError::DuplicatePoints)));
    }

    #[test]
    fn rejects_nonpositive_resolution() {
        assert!(PlLineSpace::new(0.0).is_err());
        assert!(PlLineSpace::new(-1.0).is_err());
        assert!(PlLineSpace::new(f64::NAN).is_err());
    }

    #[test]
    fn space_json_shape() {
        let s = SpaceDescriptor::discrete(2).unwrap();
        let j = serde_json::to_value(&s).unwrap();
        assert_eq!(j["kind"], "discrete");
        assert_eq!(j["points"][1], "p1");
        let p = SpaceDescriptor::pl_line(1e-9).unwrap();
        let jp = serde_json::to_value(&p).unwrap();
        assert_eq!(jp["kind"], "pl_line");
        let back: SpaceDescriptor = serde_json::from_value(jp).unwrap();
        assert_eq!(back, p);
    }
}
