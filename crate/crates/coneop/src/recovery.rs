//! Black-box structure recovery: given oracle access to a map between
//! cones, localize the underlying point map by support-intersection
//! probing, extract the weight with plateau probes, and certify the
//! recovered representation on fresh samples.
//!
//! On a discrete space the probe basis is the point indicators: the unique
//! indicator with positive image at `y` pins `tau(y)` exactly, and its
//! image value is the weight. On the line the localization bisects nested
//! plateau probes, halving the bracket until it is no wider than the
//! requested radius; the weight then comes from a plateau that is
//! identically 1 on a neighborhood of the bracket.
//!
//! Certification is mandatory: recovery alone never returns `certified`.
//! The certification pass replays random functions through the oracle and
//! compares them against the recovered representation, and additionally
//! verifies the inverse relation built from the recovered data.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cone::ConeFunction;
use crate::error::{OperatorError, RecoveryError};
use crate::operators::{DiscreteWeights, MapOracle, PointMap, WeightFunction, WeightedCompositionOp};
use crate::scalar::{rational_vec, Scalar};
use crate::space::{Point, SpaceDescriptor};
use crate::verification::{Sampler, SamplerParams, Witness};

/// Configuration for recovery and certification.
#[derive(Clone, Debug)]
pub struct RecoverConfig {
    /// Maximum oracle queries per localized point.
    pub budget_per_point: u64,
    /// Certification trials; 0 yields an `inconclusive` verdict.
    pub certification_trials: u32,
    /// Absolute certification tolerance (0 on discrete spaces).
    pub certification_tol: f64,
    pub certification_seed: u64,
    pub sampler_params: SamplerParams,
    pub pl: PlRecoverConfig,
}

/// PL-specific knobs.
#[derive(Clone, Debug)]
pub struct PlRecoverConfig {
    /// Interval assumed to contain every localized point.
    pub bracket: (f64, f64),
    /// Codomain sample points at which to localize and extract.
    pub grid: Vec<f64>,
    /// Stop when the bracket half-width reaches this radius (defaults to
    /// the domain's resolution).
    pub stop_radius: Option<f64>,
    pub max_depth: u32,
}

impl Default for PlRecoverConfig {
    fn default() -> Self {
        PlRecoverConfig {
            bracket: (-64.0, 64.0),
            grid: Vec::new(),
            stop_radius: None,
            max_depth: 60,
        }
    }
}

impl RecoverConfig {
    pub fn for_space(space: &SpaceDescriptor) -> Self {
        let discrete = space.is_discrete();
        RecoverConfig {
            budget_per_point: if discrete { 1 << 16 } else { 200 },
            certification_trials: 200,
            certification_tol: if discrete { 0.0 } else { 1e-7 },
            certification_seed: 0xcafe,
            sampler_params: SamplerParams::default(),
            pl: PlRecoverConfig::default(),
        }
    }

    pub fn with_grid(mut self, lo: f64, hi: f64, n: usize) -> Self {
        self.pl.grid = (0..n)
            .map(|k| lo + (hi - lo) * (k as f64 + 0.5) / n as f64)
            .collect();
        self
    }
}

/// The adaptive probe family collected while localizing one point: every
/// member has strictly positive image value at the target.
#[derive(Clone, Debug)]
pub struct ProbeFamily {
    pub target: Point,
    pub members: Vec<(ConeFunction, Scalar)>,
}

impl ProbeFamily {
    fn new(target: Point) -> Self {
        ProbeFamily {
            target,
            members: Vec::new(),
        }
    }

    fn push(&mut self, probe: ConeFunction, value: Scalar) {
        debug_assert!(!value.is_zero() && !value.is_negative());
        self.members.push((probe, value));
    }
}

/// Outcome of localizing one codomain point.
#[derive(Clone, Debug)]
pub struct LocalizedPoint {
    pub point: Point,
    /// Final bracket half-width (PL only).
    pub radius: Option<f64>,
    pub ambiguity: Option<String>,
    pub probes: ProbeFamily,
}

/// Recovered point map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RecoveredMap {
    Permutation {
        map: Vec<usize>,
    },
    Sampled {
        points: Vec<f64>,
        values: Vec<f64>,
        radii: Vec<f64>,
    },
}

/// Recovered weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RecoveredWeight {
    Discrete {
        #[serde(with = "rational_vec")]
        values: Vec<BigRational>,
    },
    Sampled {
        points: Vec<f64>,
        values: Vec<f64>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryVerdict {
    Certified,
    Refuted(Witness),
    Inconclusive,
}

/// Recovered structure plus certification outcome.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecoveryResult {
    pub tau: RecoveredMap,
    #[serde(rename = "h")]
    pub weight: RecoveredWeight,
    pub residual_max: Scalar,
    pub residual_mean: Scalar,
    /// Max deviation of the inverse-relation check `S(Tf) = f`.
    pub inverse_residual_max: Scalar,
    pub query_count: u64,
    pub localization_queries: u64,
    pub verdict: RecoveryVerdict,
    pub ambiguities: Vec<String>,
}

impl RecoveryResult {
    pub fn certified(&self) -> bool {
        matches!(self.verdict, RecoveryVerdict::Certified)
    }
}

fn positive(s: &Scalar) -> bool {
    !s.is_zero() && !s.is_negative()
}

/// Localizes `tau(y)` by probing. Discrete: every point indicator is
/// probed and exactly one must light up. PL: nested plateau bisection.
pub fn localize_tau(
    oracle: &MapOracle,
    y: &Point,
    budget: u64,
    config: &RecoverConfig,
) -> Result<LocalizedPoint, RecoveryError> {
    match (oracle.domain(), y) {
        (SpaceDescriptor::Discrete(s), Point::Discrete(_)) => {
            let n = s.len() as u64;
            if budget < n {
                return Err(RecoveryError::BudgetExhausted {
                    point: y.describe(),
                    budget,
                    needed: n,
                });
            }
            let mut family = ProbeFamily::new(y.clone());
            let mut hits: Vec<usize> = Vec::new();
            for x in 0..s.len() {
                let probe = ConeFunction::indicator(s, x)?;
                let value = oracle.value_at(&probe, y)?;
                if positive(&value) {
                    hits.push(x);
                    family.push(probe, value);
                }
            }
            match hits.as_slice() {
                [] => Err(RecoveryError::NotLocalizableZero {
                    point: y.describe(),
                }),
                [x] => Ok(LocalizedPoint {
                    point: Point::Discrete(*x),
                    radius: None,
                    ambiguity: None,
                    probes: family,
                }),
                [a, b, ..] => Err(RecoveryError::NotLocalizableMultiple {
                    point: y.describe(),
                    first: format!("#{a}"),
                    second: format!("#{b}"),
                }),
            }
        }
        (SpaceDescriptor::PlLine(space), Point::Real(_)) => {
            let delta = config
                .pl
                .stop_radius
                .unwrap_or_else(|| space.resolution());
            localize_pl(oracle, y, budget, delta, config)
        }
        _ => Err(RecoveryError::BadConfig(
            "target point kind does not match the oracle's spaces".into(),
        )),
    }
}

fn localize_pl(
    oracle: &MapOracle,
    y: &Point,
    budget: u64,
    delta: f64,
    config: &RecoverConfig,
) -> Result<LocalizedPoint, RecoveryError> {
    let (mut lo, mut hi) = config.pl.bracket;
    if !(delta > 0.0) || !(hi > lo) {
        return Err(RecoveryError::BadConfig(
            "PL localization needs a positive stop radius and a nonempty bracket".into(),
        ));
    }
    let needed = ((hi - lo) / delta).log2().ceil().max(1.0) as u64;
    if budget < needed {
        return Err(RecoveryError::BudgetExhausted {
            point: y.describe(),
            budget,
            needed,
        });
    }
    let mut used: u64 = 0;
    let mut family = ProbeFamily::new(y.clone());
    let mut ambiguity: Option<String> = None;
    let space = oracle.domain().clone();

    let probe = |center: f64,
                     inner: f64,
                     outer: f64,
                     used: &mut u64,
                     family: &mut ProbeFamily|
     -> Result<Scalar, RecoveryError> {
        if *used >= budget {
            return Err(RecoveryError::BudgetExhausted {
                point: y.describe(),
                budget,
                needed: *used + 1,
            });
        }
        *used += 1;
        let p = ConeFunction::plateau(&space, &Point::Real(center), inner, outer)?;
        let v = oracle.value_at(&p, y)?;
        if positive(&v) {
            family.push(p, v.clone());
        }
        Ok(v)
    };

    // the whole bracket must respond, otherwise tau(y) is unreachable
    let w0 = hi - lo;
    let whole = probe(
        0.5 * (lo + hi),
        0.5 * w0,
        0.5 * w0 + 0.01 * w0,
        &mut used,
        &mut family,
    )?;
    if !positive(&whole) {
        return Err(RecoveryError::NotLocalizableZero {
            point: y.describe(),
        });
    }

    let mut depth = 0u32;
    while 0.5 * (hi - lo) > delta && depth < config.pl.max_depth {
        depth += 1;
        let w = hi - lo;
        let ramp = w / 16.0;
        let mid = 0.5 * (lo + hi);
        let half = |a: f64, b: f64| (0.5 * (a + b), 0.5 * (b - a));
        let (lc, lh) = half(lo, mid);
        let (rc, rh) = half(mid, hi);
        let left = positive(&probe(lc, lh, lh + ramp, &mut used, &mut family)?);
        let right = positive(&probe(rc, rh, rh + ramp, &mut used, &mut family)?);
        match (left, right) {
            (true, false) => hi = mid,
            (false, true) => lo = mid,
            (true, true) => {
                // both overlap regions respond: the point is near the cut
                lo = mid - ramp;
                hi = mid + ramp;
            }
            (false, false) => {
                // shift the partition by a quarter width and retry once
                let mid2 = mid + w / 4.0;
                let (lc2, lh2) = half(lo, mid2);
                let left2 = positive(&probe(lc2, lh2, lh2 + ramp, &mut used, &mut family)?);
                ambiguity = Some(format!(
                    "partition at {mid} gave no response for {}; retried shifted by {}",
                    y.describe(),
                    w / 4.0
                ));
                if left2 {
                    hi = mid2;
                } else {
                    let (rc2, rh2) = half(mid2, hi);
                    let right2 =
                        positive(&probe(rc2, rh2, rh2 + ramp, &mut used, &mut family)?);
                    if right2 {
                        lo = mid2;
                    } else {
                        return Err(RecoveryError::NotLocalizableZero {
                            point: y.describe(),
                        });
                    }
                }
            }
        }
    }

    let center = 0.5 * (lo + hi);
    let radius = (0.5 * (hi - lo)).max(delta * 0.25);

    // disjointness spot check: far probes on both sides of the located
    // bracket must stay silent, or locality is violated
    let (b_lo, b_hi) = config.pl.bracket;
    let guard = 16.0 * radius;
    if center - guard > b_lo {
        let flat = (center - guard) - b_lo;
        let v = probe(
            b_lo + 0.5 * flat,
            0.5 * flat,
            0.5 * flat + radius,
            &mut used,
            &mut family,
        )?;
        if positive(&v) {
            return Err(RecoveryError::NotLocalizableMultiple {
                point: y.describe(),
                first: format!("bracket around {center}"),
                second: format!("far probe left of {}", center - guard),
            });
        }
    }
    if center + guard < b_hi {
        let flat = b_hi - (center + guard);
        let v = probe(
            b_hi - 0.5 * flat,
            0.5 * flat,
            0.5 * flat + radius,
            &mut used,
            &mut family,
        )?;
        if positive(&v) {
            return Err(RecoveryError::NotLocalizableMultiple {
                point: y.describe(),
                first: format!("bracket around {center}"),
                second: format!("far probe right of {}", center + guard),
            });
        }
    }

    Ok(LocalizedPoint {
        point: Point::Real(center),
        radius: Some(radius),
        ambiguity,
        probes: family,
    })
}

/// Extracts the weight at `y` from a probe equal to 1 on a neighborhood of
/// the localized point. On the PL line a second plateau with halved widths
/// must agree (well-definedness spot check).
pub fn extract_weight(
    oracle: &MapOracle,
    y: &Point,
    localized: &LocalizedPoint,
) -> Result<Scalar, RecoveryError> {
    match (&localized.point, oracle.domain()) {
        (Point::Discrete(x), SpaceDescriptor::Discrete(s)) => {
            let probe = ConeFunction::indicator(s, *x)?;
            let v = oracle.value_at(&probe, y)?;
            if !positive(&v) {
                return Err(RecoveryError::WeightZero {
                    point: y.describe(),
                });
            }
            Ok(v)
        }
        (Point::Real(c), SpaceDescriptor::PlLine(_)) => {
            let r = localized.radius.unwrap_or(1e-9);
            let wide = ConeFunction::plateau(oracle.domain(), &Point::Real(*c), 2.0 * r, 4.0 * r)?;
            let narrow = ConeFunction::plateau(oracle.domain(), &Point::Real(*c), r, 2.0 * r)?;
            let v1 = oracle.value_at(&wide, y)?.to_f64();
            let v2 = oracle.value_at(&narrow, y)?.to_f64();
            if !(v1 > 0.0) {
                return Err(RecoveryError::WeightZero {
                    point: y.describe(),
                });
            }
            if (v1 - v2).abs() > 1e-9 * v1.abs().max(1.0) {
                return Err(RecoveryError::WeightUnstable {
                    point: y.describe(),
                    first: v1,
                    second: v2,
                });
            }
            Ok(Scalar::Real(v1))
        }
        _ => Err(RecoveryError::BadConfig(
            "localized point kind does not match the oracle's domain".into(),
        )),
    }
}

/// Runs localization and weight extraction at every target point, validates
/// the recovered structure, and certifies it.
pub fn recover(
    oracle: &MapOracle,
    target: &SpaceDescriptor,
    config: &RecoverConfig,
) -> Result<RecoveryResult, RecoveryError> {
    if config.budget_per_point == 0 {
        return Err(RecoveryError::BadConfig("budget must be positive".into()));
    }
    if target != oracle.codomain() {
        return Err(RecoveryError::BadConfig(
            "target space must be the oracle's codomain".into(),
        ));
    }
    let targets: Vec<Point> = match target {
        SpaceDescriptor::Discrete(s) => (0..s.len()).map(Point::Discrete).collect(),
        SpaceDescriptor::PlLine(_) => {
            if config.pl.grid.is_empty() {
                return Err(RecoveryError::BadConfig(
                    "PL recovery needs a nonempty sample grid".into(),
                ));
            }
            config.pl.grid.iter().copied().map(Point::Real).collect()
        }
    };

    let q_start = oracle.query_count();
    let mut localized = Vec::with_capacity(targets.len());
    let mut ambiguities = Vec::new();
    for y in &targets {
        let loc = localize_tau(oracle, y, config.budget_per_point, config)?;
        if let Some(a) = &loc.ambiguity {
            ambiguities.push(a.clone());
        }
        localized.push(loc);
    }
    let localization_queries = oracle.query_count() - q_start;

    let mut weights = Vec::with_capacity(targets.len());
    for (y, loc) in targets.iter().zip(&localized) {
        weights.push(extract_weight(oracle, y, loc)?);
    }

    let (tau, weight) = assemble(target, &localized, &weights)?;

    let skeleton = RecoveryResult {
        tau,
        weight,
        residual_max: zero_scalar_for(target),
        residual_mean: zero_scalar_for(target),
        inverse_residual_max: zero_scalar_for(target),
        query_count: 0,
        localization_queries,
        verdict: RecoveryVerdict::Inconclusive,
        ambiguities,
    };
    let mut sampler = Sampler::new(
        config.certification_seed,
        oracle.domain().clone(),
        config.sampler_params.clone(),
    );
    let mut result = certify(
        oracle,
        skeleton,
        &mut sampler,
        config.certification_trials,
        config.certification_tol,
    )?;
    result.query_count = oracle.query_count() - q_start;
    Ok(result)
}

fn zero_scalar_for(space: &SpaceDescriptor) -> Scalar {
    if space.is_discrete() {
        Scalar::zero_rational()
    } else {
        Scalar::zero_real()
    }
}

fn assemble(
    target: &SpaceDescriptor,
    localized: &[LocalizedPoint],
    weights: &[Scalar],
) -> Result<(RecoveredMap, RecoveredWeight), RecoveryError> {
    match target {
        SpaceDescriptor::Discrete(_) => {
            let mut map = Vec::with_capacity(localized.len());
            for loc in localized {
                match loc.point {
                    Point::Discrete(x) => map.push(x),
                    _ => unreachable!("discrete localization returns indices"),
                }
            }
            let mut seen = vec![false; map.len()];
            for (y, &x) in map.iter().enumerate() {
                if x >= map.len() || seen[x] {
                    return Err(RecoveryError::TauNotBijective {
                        detail: format!("points #{y} and an earlier point both localize to #{x}"),
                    });
                }
                seen[x] = true;
            }
            let values: Vec<BigRational> = weights
                .iter()
                .map(|w| w.as_rational().expect("discrete weights").clone())
                .collect();
            Ok((
                RecoveredMap::Permutation { map },
                RecoveredWeight::Discrete { values },
            ))
        }
        SpaceDescriptor::PlLine(_) => {
            let points: Vec<f64> = localized
                .iter()
                .map(|l| match l.point {
                    Point::Real(c) => c,
                    _ => unreachable!("PL localization returns coordinates"),
                })
                .collect();
            let radii: Vec<f64> = localized.iter().map(|l| l.radius.unwrap_or(0.0)).collect();
            let increasing = points.windows(2).all(|w| w[0] < w[1]);
            let decreasing = points.windows(2).all(|w| w[0] > w[1]);
            if points.len() > 1 && !increasing && !decreasing {
                return Err(RecoveryError::TauNotBijective {
                    detail: "recovered samples are not strictly monotone".into(),
                });
            }
            let grid: Vec<f64> = localized
                .iter()
                .map(|l| match &l.probes.target {
                    Point::Real(y) => *y,
                    _ => unreachable!(),
                })
                .collect();
            let wvalues: Vec<f64> = weights.iter().map(Scalar::to_f64).collect();
            Ok((
                RecoveredMap::Sampled {
                    points: grid.clone(),
                    values: points,
                    radii,
                },
                RecoveredWeight::Sampled {
                    points: grid,
                    values: wvalues,
                },
            ))
        }
    }
}

/// Certifies a recovered representation: residuals of
/// `oracle(f)(y) - h(y) f(tau(y))` over fresh samples, plus the inverse
/// relation `S(oracle(f)) = f` built from the recovered data. Zero trials
/// leave the verdict inconclusive.
pub fn certify(
    oracle: &MapOracle,
    mut result: RecoveryResult,
    sampler: &mut Sampler,
    trials: u32,
    tol: f64,
) -> Result<RecoveryResult, RecoveryError> {
    if trials == 0 {
        result.verdict = RecoveryVerdict::Inconclusive;
        return Ok(result);
    }
    let tau = result.tau.clone();
    let weight = result.weight.clone();
    match (tau, weight) {
        (RecoveredMap::Permutation { map }, RecoveredWeight::Discrete { values }) => {
            certify_discrete(oracle, &mut result, map, values, sampler, trials, tol)?;
        }
        (
            RecoveredMap::Sampled {
                points,
                values: tau_values,
                ..
            },
            RecoveredWeight::Sampled {
                values: h_values, ..
            },
        ) => {
            certify_pl(
                oracle,
                &mut result,
                points,
                tau_values,
                h_values,
                sampler,
                trials,
                tol,
            )?;
        }
        _ => {
            return Err(RecoveryError::BadConfig(
                "mismatched recovered map and weight kinds".into(),
            ))
        }
    }
    Ok(result)
}

fn certify_discrete(
    oracle: &MapOracle,
    result: &mut RecoveryResult,
    map: Vec<usize>,
    weights: Vec<BigRational>,
    sampler: &mut Sampler,
    trials: u32,
    tol: f64,
) -> Result<(), RecoveryError> {
    let domain = oracle.domain().clone();
    let codomain = oracle.codomain().clone();
    let candidate = WeightedCompositionOp::new(
        domain,
        codomain,
        PointMap::Permutation { map: map.clone() },
        WeightFunction::Discrete(
            DiscreteWeights::new(weights.clone()).map_err(OperatorError::from)?,
        ),
    )?;
    let inverse = candidate.invert();

    let mut max_res = BigRational::zero();
    let mut sum_res = BigRational::zero();
    let mut count: u64 = 0;
    let mut max_inverse = BigRational::zero();
    let mut witness: Option<Witness> = None;

    for _ in 0..trials {
        let f = sampler.sample_function();
        let image = oracle.evaluate(&f)?;
        let image_values = image
            .discrete_values()
            .ok_or_else(|| RecoveryError::BadConfig("oracle image is not discrete".into()))?;
        let f_values = f.discrete_values().expect("discrete sample");
        for (y, got) in image_values.iter().enumerate() {
            let expected = &weights[y] * &f_values[map[y]];
            let res = if got >= &expected {
                got - &expected
            } else {
                &expected - got
            };
            sum_res += &res;
            count += 1;
            if res > max_res {
                max_res = res.clone();
            }
            if witness.is_none()
                && Scalar::Rational(res.clone()).within_tol(tol) == false
            {
                let mut w = Witness {
                    property: "representation_formula".to_string(),
                    space: oracle.domain().clone(),
                    inputs: vec![f.to_json()],
                    lhs: Scalar::Rational(got.clone()),
                    rhs: Scalar::Rational(expected.clone()),
                    discrepancy: Scalar::Rational(res),
                    constants: Default::default(),
                };
                w.constants
                    .insert("point".to_string(), Scalar::from_int(y as i64));
                witness = Some(w);
            }
        }
        // inverse relation on the same sample: S(Tf) = f exactly
        let back = inverse.apply(&image)?;
        if let Scalar::Rational(d) = back.sup_distance(&f)? {
            if d > max_inverse {
                max_inverse = d;
            }
        }
    }

    result.residual_max = Scalar::Rational(max_res);
    result.residual_mean = Scalar::Rational(
        sum_res / BigRational::from_integer((count.max(1) as i64).into()),
    );
    result.inverse_residual_max = Scalar::Rational(max_inverse);
    result.verdict = decide(result, tol, witness);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn certify_pl(
    oracle: &MapOracle,
    result: &mut RecoveryResult,
    grid: Vec<f64>,
    tau_values: Vec<f64>,
    h_values: Vec<f64>,
    sampler: &mut Sampler,
    trials: u32,
    tol: f64,
) -> Result<(), RecoveryError> {
    let mut max_res = 0.0f64;
    let mut sum_res = 0.0f64;
    let mut count: u64 = 0;
    let mut max_inverse = 0.0f64;
    let mut witness: Option<Witness> = None;

    for _ in 0..trials {
        let f = sampler.sample_function();
        let fpl = f.as_pl().expect("PL sample");
        for ((&y, &x), &h) in grid.iter().zip(&tau_values).zip(&h_values) {
            let got = oracle.value_at(&f, &Point::Real(y))?.to_f64();
            let expected = h * fpl.eval(x);
            let res = (got - expected).abs();
            sum_res += res;
            count += 1;
            if res > max_res {
                max_res = res;
            }
            if witness.is_none() && res > tol {
                let mut w = Witness {
                    property: "representation_formula".to_string(),
                    space: oracle.domain().clone(),
                    inputs: vec![f.to_json()],
                    lhs: Scalar::Real(got),
                    rhs: Scalar::Real(expected),
                    discrepancy: Scalar::Real(res),
                    constants: Default::default(),
                };
                w.constants.insert("point".to_string(), Scalar::Real(y));
                witness = Some(w);
            }
            // inverse relation at the recovered sample pair:
            // S(Tf)(x) = Tf(y) / h(y) must reproduce f(x)
            let s_back = got / h;
            let inv_res = (s_back - fpl.eval(x)).abs();
            if inv_res > max_inverse {
                max_inverse = inv_res;
            }
        }
    }

    result.residual_max = Scalar::Real(max_res);
    result.residual_mean = Scalar::Real(sum_res / count.max(1) as f64);
    result.inverse_residual_max = Scalar::Real(max_inverse);
    result.verdict = decide(result, tol, witness);
    Ok(())
}

fn decide(result: &RecoveryResult, tol: f64, witness: Option<Witness>) -> RecoveryVerdict {
    let ok = result.residual_max.within_tol(tol) && result.inverse_residual_max.within_tol(tol);
    match (ok, witness) {
        (true, _) => RecoveryVerdict::Certified,
        (false, Some(w)) => RecoveryVerdict::Refuted(w),
        (false, None) => {
            // the inverse relation failed without a pointwise witness
            RecoveryVerdict::Inconclusive
        }
    }
}

/// Applies the same construction to an inverse-map oracle, recovering
/// `sigma = tau^{-1}` and the dual weight `w`.
pub fn recover_inverse(
    oracle_inverse: &MapOracle,
    target: &SpaceDescriptor,
    config: &RecoverConfig,
) -> Result<RecoveryResult, RecoveryError> {
    recover(oracle_inverse, target, config)
}

/// Consistency report between a forward and a backward recovery.
#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    /// `sigma(tau(y)) = y` for every point checked.
    pub sigma_inverts_tau: bool,
    /// Max deviation of `h(y) * w(tau(y))` from 1 (exact 0 on discrete).
    pub weight_duality_max_dev: Scalar,
    pub holds: bool,
}

/// Checks `sigma = tau^{-1}` and `h(y) * w(tau(y)) = 1` between two
/// recoveries. Exact on discrete spaces; on the PL line the backward
/// tables are interpolated at the forward sample images.
pub fn check_duality(
    forward: &RecoveryResult,
    backward: &RecoveryResult,
) -> Result<DualityReport, RecoveryError> {
    match (&forward.tau, &forward.weight, &backward.tau, &backward.weight) {
        (
            RecoveredMap::Permutation { map: tau },
            RecoveredWeight::Discrete { values: h },
            RecoveredMap::Permutation { map: sigma },
            RecoveredWeight::Discrete { values: w },
        ) => {
            let mut inverts = true;
            let mut max_dev = BigRational::zero();
            for y in 0..tau.len() {
                if sigma.get(tau[y]) != Some(&y) {
                    inverts = false;
                }
                let prod = &h[y] * &w[tau[y]];
                let dev = (prod - BigRational::from_integer(1.into())).abs();
                if dev > max_dev {
                    max_dev = dev;
                }
            }
            let holds = inverts && max_dev.is_zero();
            Ok(DualityReport {
                sigma_inverts_tau: inverts,
                weight_duality_max_dev: Scalar::Rational(max_dev),
                holds,
            })
        }
        (
            RecoveredMap::Sampled {
                points: y_grid,
                values: tau_vals,
                ..
            },
            RecoveredWeight::Sampled { values: h_vals, .. },
            RecoveredMap::Sampled {
                points: x_grid,
                values: sigma_vals,
                ..
            },
            RecoveredWeight::Sampled {
                points: w_grid,
                values: w_vals,
            },
        ) => {
            let interp = |xs: &[f64], ys: &[f64], x: f64| -> f64 {
                // monotone table lookup with linear interpolation and
                // constant extension
                if x <= xs[0] {
                    return ys[0];
                }
                if x >= xs[xs.len() - 1] {
                    return ys[ys.len() - 1];
                }
                crate::polyline::eval(xs, ys, x)
            };
            let mut max_station = 0.0f64;
            let mut max_dev = 0.0f64;
            for ((&y, &x), &h) in y_grid.iter().zip(tau_vals).zip(h_vals) {
                let back = interp(x_grid, sigma_vals, x);
                max_station = max_station.max((back - y).abs());
                let w = interp(w_grid, w_vals, x);
                max_dev = max_dev.max((h * w - 1.0).abs());
            }
            // grid interpolation error dominates; report, do not assert
            let grid_tol = 1e-2;
            Ok(DualityReport {
                sigma_inverts_tau: max_station <= grid_tol,
                weight_duality_max_dev: Scalar::Real(max_dev),
                holds: max_station <= grid_tol && max_dev <= grid_tol,
            })
        }
        _ => Err(RecoveryError::BadConfig(
            "duality check needs recoveries of matching kinds".into(),
        )),
    }
}
