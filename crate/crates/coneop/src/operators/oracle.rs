//! The black-box map oracle: an evaluatable map between cones with query
//! accounting and a thread-safety declaration.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::cone::ConeFunction;
use crate::error::OracleError;
use crate::scalar::Scalar;
use crate::space::{Point, SpaceDescriptor};

use super::WeightedCompositionOp;

/// Whether an oracle may be queried from several threads at once.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThreadSafety {
    SafeForConcurrentQueries,
    SingleThreadedOnly,
}

/// The underlying map. Implementations must be deterministic: equal inputs
/// produce equal outputs (the recovery procedure depends on it).
pub trait ConeMap: Send + Sync {
    fn domain(&self) -> &SpaceDescriptor;
    fn codomain(&self) -> &SpaceDescriptor;
    fn evaluate(&self, f: &ConeFunction) -> Result<ConeFunction, OracleError>;

    /// The image value at a single point. The default goes through the full
    /// image; maps with a closed form may answer directly.
    fn value_at(&self, f: &ConeFunction, y: &Point) -> Result<Scalar, OracleError> {
        Ok(self.evaluate(f)?.value_at(y)?)
    }
}

/// A counting wrapper around a [`ConeMap`]. Every evaluation — full-image
/// or single-point — increments the query counter by one.
pub struct MapOracle {
    name: String,
    map: Arc<dyn ConeMap>,
    queries: AtomicU64,
    thread_safety: ThreadSafety,
}

impl MapOracle {
    pub fn new(name: impl Into<String>, map: Arc<dyn ConeMap>, thread_safety: ThreadSafety) -> Self {
        MapOracle {
            name: name.into(),
            map,
            queries: AtomicU64::new(0),
            thread_safety,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &SpaceDescriptor {
        self.map.domain()
    }

    pub fn codomain(&self) -> &SpaceDescriptor {
        self.map.codomain()
    }

    pub fn thread_safety(&self) -> ThreadSafety {
        self.thread_safety
    }

    pub fn query_count(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn evaluate(&self, f: &ConeFunction) -> Result<ConeFunction, OracleError> {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.map.evaluate(f)
    }

    pub fn value_at(&self, f: &ConeFunction, y: &Point) -> Result<Scalar, OracleError> {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.map.value_at(f, y)
    }
}

impl ConeMap for WeightedCompositionOp {
    fn domain(&self) -> &SpaceDescriptor {
        WeightedCompositionOp::domain(self)
    }

    fn codomain(&self) -> &SpaceDescriptor {
        WeightedCompositionOp::codomain(self)
    }

    fn evaluate(&self, f: &ConeFunction) -> Result<ConeFunction, OracleError> {
        Ok(self.apply(f)?)
    }

    fn value_at(&self, f: &ConeFunction, y: &Point) -> Result<Scalar, OracleError> {
        Ok(self.apply_value_at(f, y)?)
    }
}

/// Wraps an operator as a black-box oracle whose evaluation is
/// `apply(op, .)`. Safe for concurrent queries.
pub fn as_oracle(op: &WeightedCompositionOp) -> MapOracle {
    MapOracle::new(
        "weighted_composition",
        Arc::new(op.clone()),
        ThreadSafety::SafeForConcurrentQueries,
    )
}
