//! Property checkers for the norm-additive condition and its structural
//! consequences, run against black-box oracles.
//!
//! Every check samples deterministically from a seeded [`Sampler`] and
//! reports a [`CheckReport`]; a failing check carries a serialized,
//! replayable [`Witness`]. Discrete-space checks compare exact rationals
//! (tolerance 0); PL checks compare suprema over the probe node set with a
//! relative tolerance that only absorbs floating-point error.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cone::{disjoint, pointwise_min, ConeFunction, ConeFunctionJson};
use crate::error::{CheckError, ConeError};
use crate::operators::MapOracle;
use crate::polyline;
use crate::scalar::Scalar;
use crate::space::{Point, SpaceDescriptor};

/// Default relative tolerance for PL norm comparisons.
pub const PL_CHECK_TOL: f64 = 1e-9;

/// Deterministic sampling of cone functions.
#[derive(Clone, Debug)]
pub struct SamplerParams {
    /// Upper bound for sampled values.
    pub value_max: f64,
    /// Probability of an exact zero per discrete point / PL interior node,
    /// so cozero and support edge cases are exercised.
    pub sparsity: f64,
    /// Denominator for discrete rational sampling.
    pub denominator: i64,
    /// Range of interior breakpoint counts for PL sampling.
    pub interior_nodes: (usize, usize),
    /// Support window for PL sampling.
    pub support: (f64, f64),
}

impl Default for SamplerParams {
    fn default() -> Self {
        SamplerParams {
            value_max: 10.0,
            sparsity: 0.3,
            denominator: 1000,
            interior_nodes: (2, 7),
            support: (-10.0, 10.0),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Sampler {
    seed: u64,
    space: SpaceDescriptor,
    params: SamplerParams,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64, space: SpaceDescriptor, params: SamplerParams) -> Self {
        Sampler {
            seed,
            space,
            params,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn space(&self) -> &SpaceDescriptor {
        &self.space
    }

    /// A sampler over another space with a derived seed; used for
    /// codomain-side sampling in inverse-direction checks.
    pub fn derive_for(&self, space: &SpaceDescriptor, salt: u64) -> Sampler {
        Sampler::new(
            self.seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(salt),
            space.clone(),
            self.params.clone(),
        )
    }

    fn rational(&mut self, max: f64) -> BigRational {
        let hi = (max * self.params.denominator as f64).floor() as i64;
        let k = self.rng.random_range(0..=hi.max(0));
        BigRational::new(BigInt::from(k), BigInt::from(self.params.denominator))
    }

    pub fn sample_function(&mut self) -> ConeFunction {
        match &self.space.clone() {
            SpaceDescriptor::Discrete(s) => {
                let values = (0..s.len())
                    .map(|_| {
                        if self.rng.random_range(0.0..1.0) < self.params.sparsity {
                            BigRational::from_integer(0.into())
                        } else {
                            self.rational(self.params.value_max)
                        }
                    })
                    .collect();
                ConeFunction::discrete(s.clone(), values).expect("sampled values are nonnegative")
            }
            SpaceDescriptor::PlLine(_) => {
                let (lo, hi) = self.params.support;
                let n = self
                    .rng
                    .random_range(self.params.interior_nodes.0..=self.params.interior_nodes.1);
                let mut xs: Vec<f64> = (0..n + 2).map(|_| self.rng.random_range(lo..hi)).collect();
                xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
                xs.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
                if xs.len() < 2 {
                    return ConeFunction::zero(&self.space);
                }
                let len = xs.len();
                let values: Vec<f64> = (0..len)
                    .map(|i| {
                        if i == 0 || i == len - 1 {
                            0.0
                        } else if self.rng.random_range(0.0..1.0) < self.params.sparsity {
                            0.0
                        } else {
                            self.rng.random_range(0.0..self.params.value_max)
                        }
                    })
                    .collect();
                ConeFunction::pl(xs, values).expect("sampled PL data is valid")
            }
        }
    }

    /// A comparable pair `f <= g` built as `g = f + d` with `d >= 0`.
    pub fn sample_order_pair(&mut self) -> (ConeFunction, ConeFunction) {
        let f = self.sample_function();
        let d = self.sample_function();
        let g = f.add(&d).expect("same sampler space");
        (f, g)
    }

    /// A nonzero sample normalized to unit sup norm.
    pub fn sample_unit_norm(&mut self) -> Option<ConeFunction> {
        for _ in 0..16 {
            let f = self.sample_function();
            let norm = f.sup_norm();
            if !norm.is_zero() {
                let inv = match norm {
                    Scalar::Rational(r) => Scalar::Rational(r.recip()),
                    Scalar::Real(x) => Scalar::Real(1.0 / x),
                };
                return Some(f.scale(&inv).expect("positive scalar"));
            }
        }
        None
    }

    /// `n` functions with pairwise-disjoint cozero sets: random values on a
    /// partition of a discrete space, or scaled plateaus on separated
    /// intervals of the line.
    pub fn sample_disjoint(&mut self, n: usize) -> Result<Vec<ConeFunction>, CheckError> {
        match &self.space.clone() {
            SpaceDescriptor::Discrete(s) => {
                if n == 0 || s.len() < n {
                    return Err(CheckError::CannotSampleDisjoint { wanted: n });
                }
                // contiguous blocks over a shuffled point list
                let mut order: Vec<usize> = (0..s.len()).collect();
                for i in (1..order.len()).rev() {
                    let j = self.rng.random_range(0..=i);
                    order.swap(i, j);
                }
                let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
                for (k, &p) in order.iter().enumerate() {
                    groups[k % n].push(p);
                }
                let mut out = Vec::with_capacity(n);
                for group in groups {
                    let mut values = vec![BigRational::from_integer(0.into()); s.len()];
                    for (gi, &p) in group.iter().enumerate() {
                        let v = if gi == 0 {
                            // force nonemptiness of the cozero set
                            self.rational(self.params.value_max - 1.0)
                                + BigRational::from_integer(1.into())
                        } else if self.rng.random_range(0.0..1.0) < self.params.sparsity {
                            BigRational::from_integer(0.into())
                        } else {
                            self.rational(self.params.value_max)
                        };
                        values[p] = v;
                    }
                    out.push(ConeFunction::discrete(s.clone(), values)?);
                }
                Ok(out)
            }
            SpaceDescriptor::PlLine(_) => {
                if n == 0 {
                    return Err(CheckError::CannotSampleDisjoint { wanted: n });
                }
                let (lo, hi) = self.params.support;
                let width = (hi - lo) / n as f64;
                if width < 0.1 {
                    return Err(CheckError::CannotSampleDisjoint { wanted: n });
                }
                let mut out = Vec::with_capacity(n);
                for k in 0..n {
                    let center = lo + width * (k as f64 + 0.5);
                    let outer = width * 0.45;
                    let inner = outer * self.rng.random_range(0.2..0.8);
                    let scale = self.rng.random_range(0.5..self.params.value_max);
                    let p = ConeFunction::plateau(&self.space, &Point::Real(center), inner, outer)?;
                    out.push(p.scale(&Scalar::Real(scale))?);
                }
                Ok(out)
            }
        }
    }
}

/// A replayable counterexample: the sampled inputs plus both sides of the
/// violated comparison.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub property: String,
    /// Space the inputs live over (the oracle's domain for forward checks).
    pub space: SpaceDescriptor,
    pub inputs: Vec<ConeFunctionJson>,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub discrepancy: Scalar,
    /// Auxiliary constants needed to replay (e.g. the Lipschitz bound).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub constants: BTreeMap<String, Scalar>,
}

impl Witness {
    fn new(
        property: &str,
        space: &SpaceDescriptor,
        inputs: &[&ConeFunction],
        lhs: Scalar,
        rhs: Scalar,
        discrepancy: Scalar,
    ) -> Self {
        Witness {
            property: property.to_string(),
            space: space.clone(),
            inputs: inputs.iter().map(|f| f.to_json()).collect(),
            lhs,
            rhs,
            discrepancy,
            constants: BTreeMap::new(),
        }
    }

    pub fn bound_inputs(&self) -> Result<Vec<ConeFunction>, ConeError> {
        self.inputs
            .iter()
            .map(|j| ConeFunction::from_json(j.clone(), &self.space))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub enum CheckVerdict {
    Pass,
    Fail(Witness),
}

/// Outcome of one property check. Serializes as
/// `{property, trials, verdict: "pass" | "fail", witness?, constants, seed,
/// elapsed_ms}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "CheckReportRepr", into = "CheckReportRepr")]
pub struct CheckReport {
    pub property: String,
    pub trials: u32,
    pub verdict: CheckVerdict,
    pub constants: BTreeMap<String, Scalar>,
    pub seed: u64,
    /// Excluded from determinism guarantees.
    pub elapsed_ms: u64,
}

#[derive(Serialize, Deserialize)]
struct CheckReportRepr {
    property: String,
    trials: u32,
    verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    constants: BTreeMap<String, Scalar>,
    seed: u64,
    #[serde(default)]
    elapsed_ms: u64,
}

impl TryFrom<CheckReportRepr> for CheckReport {
    type Error = String;
    fn try_from(r: CheckReportRepr) -> Result<Self, String> {
        let verdict = match (r.verdict.as_str(), r.witness) {
            ("pass", None) => CheckVerdict::Pass,
            ("fail", Some(w)) => CheckVerdict::Fail(w),
            (v, w) => {
                return Err(format!(
                    "inconsistent report: verdict {v:?} with witness {}",
                    if w.is_some() { "present" } else { "absent" }
                ))
            }
        };
        Ok(CheckReport {
            property: r.property,
            trials: r.trials,
            verdict,
            constants: r.constants,
            seed: r.seed,
            elapsed_ms: r.elapsed_ms,
        })
    }
}

impl From<CheckReport> for CheckReportRepr {
    fn from(report: CheckReport) -> Self {
        let (verdict, witness) = match report.verdict {
            CheckVerdict::Pass => ("pass".to_string(), None),
            CheckVerdict::Fail(w) => ("fail".to_string(), Some(w)),
        };
        CheckReportRepr {
            property: report.property,
            trials: report.trials,
            verdict,
            witness,
            constants: report.constants,
            seed: report.seed,
            elapsed_ms: report.elapsed_ms,
        }
    }
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, CheckVerdict::Pass)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.verdict {
            CheckVerdict::Pass => None,
            CheckVerdict::Fail(w) => Some(w),
        }
    }
}

fn report(
    property: &str,
    trials: u32,
    verdict: CheckVerdict,
    constants: BTreeMap<String, Scalar>,
    seed: u64,
    started: Instant,
) -> CheckReport {
    CheckReport {
        property: property.to_string(),
        trials,
        verdict,
        constants,
        seed,
        elapsed_ms: started.elapsed().as_millis() as u64,
    }
}

/// Relative pass test: `disc <= tol * max(1, |lhs|, |rhs|)`.
fn within(disc: &Scalar, tol: f64, lhs: &Scalar, rhs: &Scalar) -> bool {
    let scale = lhs.to_f64().abs().max(rhs.to_f64().abs()).max(1.0);
    disc.within_tol(tol * scale)
}

/// Probe node set for comparing PL images: the union of their breakpoints.
fn pl_probe_nodes(images: &[&ConeFunction]) -> Vec<f64> {
    let mut nodes: Vec<f64> = Vec::new();
    for im in images {
        if let Some(p) = im.as_pl() {
            nodes = polyline::merge_grids(&nodes, p.breakpoints());
        }
    }
    nodes
}

/// Both sides of the norm-additive comparison for one pair.
pub fn norm_additive_sides(
    oracle: &MapOracle,
    f: &ConeFunction,
    g: &ConeFunction,
) -> Result<(Scalar, Scalar, Scalar), CheckError> {
    let sum = f.add(g)?;
    if oracle.domain().is_discrete() {
        let lhs = oracle.evaluate(&sum)?.sup_norm();
        let rhs = oracle.evaluate(f)?.add(&oracle.evaluate(g)?)?.sup_norm();
        let disc = lhs.abs_diff(&rhs)?;
        Ok((lhs, rhs, disc))
    } else {
        // suprema over the union of image node sets, with every value read
        // through the oracle's pointwise evaluation
        let image_f = oracle.evaluate(f)?;
        let image_g = oracle.evaluate(g)?;
        let image_sum = oracle.evaluate(&sum)?;
        let nodes = pl_probe_nodes(&[&image_f, &image_g, &image_sum]);
        let mut lhs = 0.0f64;
        let mut rhs = 0.0f64;
        for &z in &nodes {
            let y = Point::Real(z);
            lhs = lhs.max(oracle.value_at(&sum, &y)?.to_f64());
            let split =
                oracle.value_at(f, &y)?.to_f64() + oracle.value_at(g, &y)?.to_f64();
            rhs = rhs.max(split);
        }
        Ok((
            Scalar::Real(lhs),
            Scalar::Real(rhs),
            Scalar::Real((lhs - rhs).abs()),
        ))
    }
}

/// `||T(f+g)|| = ||Tf + Tg||` over sampled pairs.
pub fn check_norm_additive(
    oracle: &MapOracle,
    sampler: &mut Sampler,
    trials: u32,
    tol: f64,
) -> Result<CheckReport, CheckError> {
    if trials == 0 {
        return Err(CheckError::NoTrials);
    }
    let started = Instant::now();
    for _ in 0..trials {
        let f = sampler.sample_function();
        let g = sampler.sample_function();
        let (lhs, rhs, disc) = norm_additive_sides(oracle, &f, &g)?;
        if !within(&disc, tol, &lhs, &rhs) {
            let witness = Witness::new(
                "norm_additive",
                oracle.domain(),
                &[&f, &g],
                lhs,
                rhs,
                disc,
            );
            return Ok(report(
                "norm_additive",
                trials,
                CheckVerdict::Fail(witness),
                BTreeMap::new(),
                sampler.seed(),
                started,
            ));
        }
    }
    Ok(report(
        "norm_additive",
        trials,
        CheckVerdict::Pass,
        BTreeMap::new(),
        sampler.seed(),
        started,
    ))
}

/// `T0 = 0`.
pub fn check_zero(oracle: &MapOracle, tol: f64) -> Result<CheckReport, CheckError> {
    let started = Instant::now();
    let zero = ConeFunction::zero(oracle.domain());
    let image = oracle.evaluate(&zero)?;
    let lhs = image.sup_norm();
    let rhs = zero_like(&lhs);
    let disc = lhs.abs_diff(&rhs)?;
    let verdict = if within(&disc, tol, &lhs, &rhs) {
        CheckVerdict::Pass
    } else {
        CheckVerdict::Fail(Witness::new(
            "zero",
            oracle.domain(),
            &[&zero],
            lhs,
            rhs,
            disc,
        ))
    };
    Ok(report("zero", 1, verdict, BTreeMap::new(), 0, started))
}

/// Maximum violation of `oracle(f) <= oracle(g)` over the probe set.
pub fn order_violation(
    oracle: &MapOracle,
    f: &ConeFunction,
    g: &ConeFunction,
) -> Result<(Scalar, Scalar, Scalar), CheckError> {
    let image_f = oracle.evaluate(f)?;
    let image_g = oracle.evaluate(g)?;
    if oracle.domain().is_discrete() {
        let fa = image_f.discrete_values().expect("discrete image");
        let ga = image_g.discrete_values().expect("discrete image");
        let mut worst: Option<(BigRational, BigRational)> = None;
        for (a, b) in fa.iter().zip(ga) {
            if a > b {
                let is_worse = match &worst {
                    Some((wa, wb)) => (a - b) > (wa - wb),
                    None => true,
                };
                if is_worse {
                    worst = Some((a.clone(), b.clone()));
                }
            }
        }
        match worst {
            Some((a, b)) => {
                let d = &a - &b;
                Ok((
                    Scalar::Rational(a),
                    Scalar::Rational(b),
                    Scalar::Rational(d),
                ))
            }
            None => Ok((
                Scalar::zero_rational(),
                Scalar::zero_rational(),
                Scalar::zero_rational(),
            )),
        }
    } else {
        let nodes = pl_probe_nodes(&[&image_f, &image_g]);
        let mut worst = (0.0f64, 0.0f64, 0.0f64);
        for &z in &nodes {
            let y = Point::Real(z);
            let a = oracle.value_at(f, &y)?.to_f64();
            let b = oracle.value_at(g, &y)?.to_f64();
            if a - b > worst.2 {
                worst = (a, b, a - b);
            }
        }
        Ok((
            Scalar::Real(worst.0),
            Scalar::Real(worst.1),
            Scalar::Real(worst.2),
        ))
    }
}

/// Order isomorphism: `f <= g` implies `Tf <= Tg`; with an inverse oracle,
/// also the backward direction on the codomain cone.
pub fn check_order_iso(
    oracle: &MapOracle,
    inverse_oracle: Option<&MapOracle>,
    sampler: &mut Sampler,
    trials: u32,
    tol: f64,
) -> Result<CheckReport, CheckError> {
    if trials == 0 {
        return Err(CheckError::NoTrials);
    }
    let started = Instant::now();
    for _ in 0..trials {
        let (f, g) = sampler.sample_order_pair();
        let (lhs, rhs, disc) = order_violation(oracle, &f, &g)?;
        if !within(&disc, tol, &lhs, &rhs) {
            let witness = Witness::new("order_iso", oracle.domain(), &[&f, &g], lhs, rhs, disc);
            return Ok(report(
                "order_iso",
                trials,
                CheckVerdict::Fail(witness),
                BTreeMap::new(),
                sampler.seed(),
                started,
            ));
        }
    }
    if let Some(inverse) = inverse_oracle {
        let mut co_sampler = sampler.derive_for(inverse.domain(), 0x0723);
        for _ in 0..trials {
            let (v, w) = co_sampler.sample_order_pair();
            let (lhs, rhs, disc) = order_violation(inverse, &v, &w)?;
            if !within(&disc, tol, &lhs, &rhs) {
                let witness = Witness::new(
                    "order_iso_inverse",
                    inverse.domain(),
                    &[&v, &w],
                    lhs,
                    rhs,
                    disc,
                );
                return Ok(report(
                    "order_iso",
                    trials,
                    CheckVerdict::Fail(witness),
                    BTreeMap::new(),
                    sampler.seed(),
                    started,
                ));
            }
        }
    }
    Ok(report(
        "order_iso",
        trials,
        CheckVerdict::Pass,
        BTreeMap::new(),
        sampler.seed(),
        started,
    ))
}

/// Norm of the pointwise minimum of the images of a disjoint tuple, plus
/// the two-route disjointness verdict on the images.
pub fn biseparating_residual(
    oracle: &MapOracle,
    tuple: &[ConeFunction],
) -> Result<(Scalar, Scalar, Scalar, bool), CheckError> {
    let images: Vec<ConeFunction> = tuple
        .iter()
        .map(|f| oracle.evaluate(f))
        .collect::<Result<_, _>>()?;
    let still_disjoint = disjoint(&images)?;
    let lhs = pointwise_min(&images)?.sup_norm();
    let rhs = zero_like(&lhs);
    let disc = lhs.abs_diff(&rhs)?;
    Ok((lhs, rhs, disc, still_disjoint))
}

/// Disjointness preservation on tuples of the given size.
pub fn check_biseparating(
    oracle: &MapOracle,
    sampler: &mut Sampler,
    trials: u32,
    tuple_size: usize,
    tol: f64,
) -> Result<CheckReport, CheckError> {
    if trials == 0 {
        return Err(CheckError::NoTrials);
    }
    let started = Instant::now();
    let property = format!("biseparating_{tuple_size}");
    for _ in 0..trials {
        let tuple = sampler.sample_disjoint(tuple_size)?;
        debug_assert!(disjoint(&tuple)?, "sampler produced non-disjoint tuple");
        let (lhs, rhs, disc, still_disjoint) = biseparating_residual(oracle, &tuple)?;
        if !still_disjoint && !within(&disc, tol, &lhs, &rhs) {
            let refs: Vec<&ConeFunction> = tuple.iter().collect();
            let witness = Witness::new(&property, oracle.domain(), &refs, lhs, rhs, disc);
            return Ok(report(
                &property,
                trials,
                CheckVerdict::Fail(witness),
                BTreeMap::new(),
                sampler.seed(),
                started,
            ));
        }
    }
    Ok(report(
        &property,
        trials,
        CheckVerdict::Pass,
        BTreeMap::new(),
        sampler.seed(),
        started,
    ))
}

/// Estimates the operator norm over unit-ball probes; on discrete spaces
/// every point indicator is probed, so for canonical operators the bound
/// `h_max` is attained exactly.
pub fn estimate_bound(
    oracle: &MapOracle,
    sampler: &mut Sampler,
    trials: u32,
    expected_bound: Option<&Scalar>,
) -> Result<CheckReport, CheckError> {
    if trials == 0 {
        return Err(CheckError::NoTrials);
    }
    let started = Instant::now();
    let mut probes: Vec<ConeFunction> = Vec::new();
    match oracle.domain() {
        SpaceDescriptor::Discrete(s) => {
            for i in 0..s.len() {
                probes.push(ConeFunction::indicator(s, i)?);
            }
        }
        SpaceDescriptor::PlLine(_) => {
            let mut plateau_sampler = sampler.derive_for(oracle.domain(), 0x0b0b);
            for _ in 0..trials.min(16) {
                let tuple = plateau_sampler.sample_disjoint(1)?;
                // rescale to unit height
                let p = &tuple[0];
                let norm = p.sup_norm();
                if !norm.is_zero() {
                    probes.push(p.scale(&Scalar::Real(1.0 / norm.to_f64()))?);
                }
            }
        }
    }
    for _ in 0..trials {
        if let Some(u) = sampler.sample_unit_norm() {
            probes.push(u);
        }
    }
    let mut m_hat = match oracle.domain() {
        SpaceDescriptor::Discrete(_) => Scalar::zero_rational(),
        SpaceDescriptor::PlLine(_) => Scalar::zero_real(),
    };
    let mut attaining: Option<ConeFunction> = None;
    for u in &probes {
        let norm = oracle.evaluate(u)?.sup_norm();
        if m_hat.le(&norm)? {
            m_hat = norm;
            attaining = Some(u.clone());
        }
    }
    let mut constants = BTreeMap::new();
    constants.insert("m_hat".to_string(), m_hat.clone());
    let verdict = match expected_bound {
        Some(bound) if !m_hat.le(bound).unwrap_or(false) => {
            let u = attaining.expect("some probe attained m_hat");
            let mut witness = Witness::new(
                "bound",
                oracle.domain(),
                &[&u],
                m_hat.clone(),
                bound.clone(),
                m_hat.abs_diff(bound)?,
            );
            witness
                .constants
                .insert("expected_bound".to_string(), bound.clone());
            CheckVerdict::Fail(witness)
        }
        _ => CheckVerdict::Pass,
    };
    Ok(report(
        "bound",
        trials,
        verdict,
        constants,
        sampler.seed(),
        started,
    ))
}

/// Both sides of the Lipschitz comparison for one pair.
pub fn lipschitz_sides(
    oracle: &MapOracle,
    m: &Scalar,
    f: &ConeFunction,
    g: &ConeFunction,
) -> Result<(Scalar, Scalar, Scalar), CheckError> {
    let image_f = oracle.evaluate(f)?;
    let image_g = oracle.evaluate(g)?;
    let lhs = if oracle.domain().is_discrete() {
        image_f.sup_distance(&image_g)?
    } else {
        let nodes = pl_probe_nodes(&[&image_f, &image_g]);
        let mut worst = 0.0f64;
        for &z in &nodes {
            let y = Point::Real(z);
            let a = oracle.value_at(f, &y)?.to_f64();
            let b = oracle.value_at(g, &y)?.to_f64();
            worst = worst.max((a - b).abs());
        }
        Scalar::Real(worst)
    };
    let rhs = m.mul(&f.sup_distance(g)?)?;
    // violation amount: max(0, lhs - rhs)
    let disc = if lhs.le(&rhs)? {
        zero_like(&lhs)
    } else {
        lhs.abs_diff(&rhs)?
    };
    Ok((lhs, rhs, disc))
}

/// `||Tf - Tg|| <= M ||f - g||` over sampled pairs.
pub fn check_lipschitz(
    oracle: &MapOracle,
    m: &Scalar,
    sampler: &mut Sampler,
    trials: u32,
    tol: f64,
) -> Result<CheckReport, CheckError> {
    if trials == 0 {
        return Err(CheckError::NoTrials);
    }
    if m.is_negative() || m.is_zero() {
        return Err(CheckError::BadWitness(
            "lipschitz constant must be positive".into(),
        ));
    }
    let started = Instant::now();
    for _ in 0..trials {
        let f = sampler.sample_function();
        let g = sampler.sample_function();
        let (lhs, rhs, disc) = lipschitz_sides(oracle, m, &f, &g)?;
        if !within(&disc, tol, &lhs, &rhs) {
            let mut witness =
                Witness::new("lipschitz", oracle.domain(), &[&f, &g], lhs, rhs, disc);
            witness.constants.insert("m".to_string(), m.clone());
            return Ok(report(
                "lipschitz",
                trials,
                CheckVerdict::Fail(witness),
                BTreeMap::new(),
                sampler.seed(),
                started,
            ));
        }
    }
    let mut constants = BTreeMap::new();
    constants.insert("m".to_string(), m.clone());
    Ok(report(
        "lipschitz",
        trials,
        CheckVerdict::Pass,
        constants,
        sampler.seed(),
        started,
    ))
}

/// Re-evaluates a witness against an oracle and returns the freshly
/// computed `(lhs, rhs, discrepancy)`.
pub fn replay_witness(
    oracle: &MapOracle,
    witness: &Witness,
) -> Result<(Scalar, Scalar, Scalar), CheckError> {
    let inputs = witness.bound_inputs()?;
    match witness.property.as_str() {
        "norm_additive" => {
            let [f, g] = two(&inputs, &witness.property)?;
            norm_additive_sides(oracle, f, g)
        }
        "zero" => {
            let zero = ConeFunction::zero(oracle.domain());
            let image = oracle.evaluate(&zero)?;
            let lhs = image.sup_norm();
            let rhs = zero_like(&lhs);
            let disc = lhs.abs_diff(&rhs)?;
            Ok((lhs, rhs, disc))
        }
        "order_iso" | "order_iso_inverse" => {
            let [f, g] = two(&inputs, &witness.property)?;
            order_violation(oracle, f, g)
        }
        p if p.starts_with("biseparating") => {
            let (lhs, rhs, disc, _) = biseparating_residual(oracle, &inputs)?;
            Ok((lhs, rhs, disc))
        }
        "bound" => {
            let [u] = one(&inputs, &witness.property)?;
            let lhs = oracle.evaluate(u)?.sup_norm();
            let rhs = witness
                .constants
                .get("expected_bound")
                .cloned()
                .unwrap_or_else(|| zero_like(&lhs));
            let disc = lhs.abs_diff(&rhs)?;
            Ok((lhs, rhs, disc))
        }
        "lipschitz" => {
            let [f, g] = two(&inputs, &witness.property)?;
            let m = witness
                .constants
                .get("m")
                .ok_or_else(|| CheckError::BadWitness("missing constant m".into()))?;
            lipschitz_sides(oracle, m, f, g)
        }
        other => Err(CheckError::BadWitness(other.to_string())),
    }
}

fn zero_like(s: &Scalar) -> Scalar {
    match s {
        Scalar::Rational(_) => Scalar::zero_rational(),
        Scalar::Real(_) => Scalar::zero_real(),
    }
}

fn one<'a>(
    inputs: &'a [ConeFunction],
    property: &str,
) -> Result<[&'a ConeFunction; 1], CheckError> {
    match inputs {
        [f] => Ok([f]),
        _ => Err(CheckError::BadWitness(property.to_string())),
    }
}

fn two<'a>(
    inputs: &'a [ConeFunction],
    property: &str,
) -> Result<[&'a ConeFunction; 2], CheckError> {
    match inputs {
        [f, g] => Ok([f, g]),
        _ => Err(CheckError::BadWitness(property.to_string())),
    }
}

/// Options for the standard six-check suite.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub trials: u32,
    pub tol: f64,
    pub tuple_sizes: Vec<usize>,
    /// Known operator bound: asserted against the estimate and reused as
    /// the Lipschitz constant.
    pub known_h_max: Option<Scalar>,
}

impl SuiteOptions {
    pub fn for_space(space: &SpaceDescriptor, trials: u32) -> Self {
        SuiteOptions {
            trials,
            tol: if space.is_discrete() { 0.0 } else { PL_CHECK_TOL },
            tuple_sizes: vec![2, 3],
            known_h_max: None,
        }
    }
}

/// Runs the whole checker suite: norm additivity, zero preservation, order
/// isomorphism, disjointness preservation, boundedness, and the Lipschitz
/// estimate, each with a deterministically derived seed.
pub fn run_standard_suite(
    oracle: &MapOracle,
    inverse_oracle: Option<&MapOracle>,
    seed: u64,
    options: &SuiteOptions,
) -> Result<Vec<CheckReport>, CheckError> {
    let params = SamplerParams::default();
    let domain = oracle.domain().clone();
    let fresh = |salt: u64| Sampler::new(seed.wrapping_add(salt), domain.clone(), params.clone());
    let mut reports = Vec::new();

    reports.push(check_norm_additive(
        oracle,
        &mut fresh(1),
        options.trials,
        options.tol,
    )?);
    reports.push(check_zero(oracle, options.tol)?);
    reports.push(check_order_iso(
        oracle,
        inverse_oracle,
        &mut fresh(2),
        options.trials,
        options.tol,
    )?);
    for (k, &size) in options.tuple_sizes.iter().enumerate() {
        let capacity = match &domain {
            SpaceDescriptor::Discrete(s) => s.len(),
            SpaceDescriptor::PlLine(_) => usize::MAX,
        };
        if size >= 2 && size <= capacity {
            reports.push(check_biseparating(
                oracle,
                &mut fresh(3 + k as u64),
                options.trials,
                size,
                options.tol,
            )?);
        }
    }
    let bound_report = estimate_bound(
        oracle,
        &mut fresh(40),
        options.trials,
        options.known_h_max.as_ref(),
    )?;
    let m_hat = bound_report.constants.get("m_hat").cloned();
    reports.push(bound_report);

    // Lipschitz constant: the known bound when available, otherwise the
    // estimated one (a genuinely Lipschitz map still satisfies it on fresh
    // samples; a super-linear map does not).
    let m = options
        .known_h_max
        .clone()
        .or(m_hat)
        .filter(|m| !m.is_zero() && !m.is_negative());
    if let Some(m) = m {
        reports.push(check_lipschitz(
            oracle,
            &m,
            &mut fresh(50),
            options.trials,
            options.tol,
        )?);
    }
    Ok(reports)
}
