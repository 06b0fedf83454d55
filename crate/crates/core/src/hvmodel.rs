//! Two-party, two-setting, two-outcome hidden-variable models.
//!
//! Outcomes are encoded as `+1`/`-1` and every local distribution is
//! parametrised by the `+` marginals `m` (Alice), `n` (Bob) and the joint
//! probability `c = p(+,+)`. A model carries a finite list of hidden-variable
//! labels, one probability vector `p(λ|x,y)` per measurement context, and a
//! [`LocalDecomposition`] for every `(λ, context)` pair, including pairs whose
//! weight is zero.

use std::fmt;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when validating probabilities and weight normalisation.
pub const PROB_TOL: f64 = 1e-9;

/// A measurement context: Alice's setting (`x` or `x'`) and Bob's (`y` or `y'`).
///
/// The fixed ordering is `(x,y)`, `(x,y')`, `(x',y)`, `(x',y')`; arrays indexed
/// by context throughout the crate follow it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Context {
    XY,
    XYPrime,
    XPrimeY,
    XPrimeYPrime,
}

impl Context {
    pub const ALL: [Context; 4] = [
        Context::XY,
        Context::XYPrime,
        Context::XPrimeY,
        Context::XPrimeYPrime,
    ];

    pub fn from_settings(alice_setting: usize, bob_setting: usize) -> Option<Self> {
        match (alice_setting, bob_setting) {
            (0, 0) => Some(Context::XY),
            (0, 1) => Some(Context::XYPrime),
            (1, 0) => Some(Context::XPrimeY),
            (1, 1) => Some(Context::XPrimeYPrime),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// 0 for `x`, 1 for `x'`.
    pub fn alice_setting(self) -> usize {
        self.index() / 2
    }

    /// 0 for `y`, 1 for `y'`.
    pub fn bob_setting(self) -> usize {
        self.index() % 2
    }

    /// Key used in model files.
    pub fn key(self) -> &'static str {
        match self {
            Context::XY => "xy",
            Context::XYPrime => "xy'",
            Context::XPrimeY => "x'y",
            Context::XPrimeYPrime => "x'y'",
        }
    }

    /// Coefficient of this context's correlator in the CHSH expression.
    pub fn chsh_sign(self) -> f64 {
        match self {
            Context::XPrimeYPrime => -1.0,
            _ => 1.0,
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// The outcome distribution of one context for one hidden-variable value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDecomposition")]
pub struct LocalDecomposition {
    m: f64,
    n: f64,
    c: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDecomposition {
    m: f64,
    n: f64,
    c: f64,
}

impl TryFrom<RawDecomposition> for LocalDecomposition {
    type Error = Error;

    fn try_from(raw: RawDecomposition) -> Result<Self> {
        LocalDecomposition::new(raw.m, raw.n, raw.c)
    }
}

impl LocalDecomposition {
    /// Builds a decomposition, rejecting any `(m, n, c)` for which one of the
    /// four joint probabilities would be negative.
    pub fn new(m: f64, n: f64, c: f64) -> Result<Self> {
        for (name, v) in [("m", m), ("n", n), ("c", c)] {
            if !v.is_finite() || !(-PROB_TOL..=1.0 + PROB_TOL).contains(&v) {
                return Err(Error::validation(format!(
                    "{name} = {v} is not a probability in [0, 1]"
                )));
            }
        }
        let lo = (m + n - 1.0).max(0.0);
        let hi = m.min(n);
        if c < lo - PROB_TOL {
            return Err(Error::validation(format!(
                "c = {c} < max{{0, m+n-1}} = {lo} (p(-,-) would be negative)"
            )));
        }
        if c > hi + PROB_TOL {
            return Err(Error::validation(format!(
                "c = {c} > min{{m, n}} = {hi} (p(+,-) or p(-,+) would be negative)"
            )));
        }
        Ok(LocalDecomposition { m, n, c })
    }

    /// Both outcomes fixed: `a`, `b` are `true` for `+1`.
    pub fn deterministic(a: bool, b: bool) -> Self {
        let m = if a { 1.0 } else { 0.0 };
        let n = if b { 1.0 } else { 0.0 };
        LocalDecomposition { m, n, c: m * n }
    }

    /// The joint probability that maximises the correlator for these marginals.
    pub fn max_correlated(m: f64, n: f64) -> Result<Self> {
        LocalDecomposition::new(m, n, m.min(n))
    }

    /// The joint probability that minimises the correlator for these marginals.
    pub fn min_correlated(m: f64, n: f64) -> Result<Self> {
        LocalDecomposition::new(m, n, (m + n - 1.0).max(0.0))
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `(p(+,+), p(+,-), p(-,+), p(-,-))`.
    pub fn joint_probabilities(&self) -> [f64; 4] {
        let (m, n, c) = (self.m, self.n, self.c);
        [c, m - c, n - c, 1.0 - m - n + c]
    }

    /// Expected product of the two outcomes.
    pub fn correlator(&self) -> f64 {
        1.0 + 4.0 * self.c - 2.0 * (self.m + self.n)
    }
}

/// The interval of correlators reachable by varying `c` with the marginals fixed.
///
/// The lower end is attained at `c = max{0, m+n-1}`, the upper at `c = min{m, n}`.
pub fn correlator_range(m: f64, n: f64) -> Result<(f64, f64)> {
    for (name, v) in [("m", m), ("n", n)] {
        if !v.is_finite() || !(0.0..=1.0).contains(&v) {
            return Err(Error::validation(format!(
                "{name} = {v} is not a probability in [0, 1]"
            )));
        }
    }
    let lo = 2.0 * (m + n - 1.0).abs() - 1.0;
    let hi = 1.0 - 2.0 * (m - n).abs();
    Ok((lo, hi))
}

/// Decompositions for Alice's `+` marginals `[m_x, m_x']` (the same under
/// both of Bob's settings) and Bob's `+` marginals in context order, with `c`
/// maximising `<xy>`, `<xy'>`, `<x'y>` and minimising `<x'y'>`.
pub fn chsh_extremal_decompositions(alice: [f64; 2], bob: [f64; 4]) -> Result<[LocalDecomposition; 4]> {
    let [mx, mxp] = alice;
    Ok([
        LocalDecomposition::max_correlated(mx, bob[0])?,
        LocalDecomposition::max_correlated(mx, bob[1])?,
        LocalDecomposition::max_correlated(mxp, bob[2])?,
        LocalDecomposition::min_correlated(mxp, bob[3])?,
    ])
}

/// A finite hidden-variable model.
///
/// Construct with [`HiddenVariableModel::new`]; a value of this type is always valid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelFile", into = "ModelFile")]
pub struct HiddenVariableModel {
    lambdas: Vec<String>,
    weights: [Vec<f64>; 4],
    decompositions: [Vec<LocalDecomposition>; 4],
}

impl HiddenVariableModel {
    /// `weights[k]` and `decompositions[k]` belong to `Context::ALL[k]` and are
    /// aligned with `lambdas`.
    pub fn new(
        lambdas: Vec<String>,
        weights: [Vec<f64>; 4],
        decompositions: [Vec<LocalDecomposition>; 4],
    ) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::validation("model has no hidden-variable values"));
        }
        for (i, label) in lambdas.iter().enumerate() {
            if lambdas[..i].contains(label) {
                return Err(Error::validation(format!("duplicate lambda label {label:?}")));
            }
        }
        for ctx in Context::ALL {
            let w = &weights[ctx.index()];
            if w.len() != lambdas.len() {
                return Err(Error::validation(format!(
                    "weights[{ctx}] has {} entries, expected {}",
                    w.len(),
                    lambdas.len()
                )));
            }
            if decompositions[ctx.index()].len() != lambdas.len() {
                return Err(Error::validation(format!(
                    "decompositions[{ctx}] has {} entries, expected {}",
                    decompositions[ctx.index()].len(),
                    lambdas.len()
                )));
            }
            if let Some((j, &v)) = w.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
                return Err(Error::validation(format!(
                    "weights[{ctx}][{}] = {v} is negative",
                    lambdas[j]
                )));
            }
            let total = crate::metrics::compensated_sum(w.iter().copied());
            if (total - 1.0).abs() > PROB_TOL {
                return Err(Error::validation(format!(
                    "weights[{ctx}] sum to {total}, not 1"
                )));
            }
        }
        Ok(HiddenVariableModel {
            lambdas,
            weights,
            decompositions,
        })
    }

    /// Single hidden variable carrying one decomposition per context.
    pub fn single(label: &str, decompositions: [LocalDecomposition; 4]) -> Self {
        HiddenVariableModel {
            lambdas: vec![label.to_string()],
            weights: std::array::from_fn(|_| vec![1.0]),
            decompositions: decompositions.map(|d| vec![d]),
        }
    }

    pub fn lambdas(&self) -> &[String] {
        &self.lambdas
    }

    pub fn lambda_count(&self) -> usize {
        self.lambdas.len()
    }

    /// `p(λ|context)` over all λ.
    pub fn weights(&self, ctx: Context) -> &[f64] {
        &self.weights[ctx.index()]
    }

    pub fn decompositions(&self, ctx: Context) -> &[LocalDecomposition] {
        &self.decompositions[ctx.index()]
    }

    pub fn decomposition(&self, ctx: Context, lambda: usize) -> &LocalDecomposition {
        &self.decompositions[ctx.index()][lambda]
    }

    /// λ-averaged correlator of one context.
    pub fn correlator(&self, ctx: Context) -> f64 {
        self.weights(ctx)
            .iter()
            .zip(self.decompositions(ctx))
            .map(|(w, d)| w * d.correlator())
            .sum()
    }

    /// Averaged correlators in context order.
    pub fn correlators(&self) -> [f64; 4] {
        Context::ALL.map(|ctx| self.correlator(ctx))
    }

    /// `<xy> + <xy'> + <x'y> - <x'y'>`, each term averaged with its own context's weights.
    pub fn chsh(&self) -> f64 {
        Context::ALL
            .iter()
            .map(|&ctx| ctx.chsh_sign() * self.correlator(ctx))
            .sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialisation cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            // serde wraps our validation message; surface it unchanged.
            Error::Format(e.to_string())
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PerContext<T> {
    #[serde(rename = "xy")]
    xy: T,
    #[serde(rename = "xy'")]
    xy_prime: T,
    #[serde(rename = "x'y")]
    x_prime_y: T,
    #[serde(rename = "x'y'")]
    x_prime_y_prime: T,
}

impl<T> From<[T; 4]> for PerContext<T> {
    fn from([xy, xy_prime, x_prime_y, x_prime_y_prime]: [T; 4]) -> Self {
        PerContext {
            xy,
            xy_prime,
            x_prime_y,
            x_prime_y_prime,
        }
    }
}

impl<T> From<PerContext<T>> for [T; 4] {
    fn from(p: PerContext<T>) -> Self {
        [p.xy, p.xy_prime, p.x_prime_y, p.x_prime_y_prime]
    }
}

/// On-disk layout of a model.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    lambdas: Vec<String>,
    weights: PerContext<Vec<f64>>,
    decompositions: PerContext<Vec<LocalDecomposition>>,
}

impl TryFrom<ModelFile> for HiddenVariableModel {
    type Error = Error;

    fn try_from(file: ModelFile) -> Result<Self> {
        HiddenVariableModel::new(file.lambdas, file.weights.into(), file.decompositions.into())
    }
}

impl From<HiddenVariableModel> for ModelFile {
    fn from(model: HiddenVariableModel) -> Self {
        ModelFile {
            lambdas: model.lambdas,
            weights: model.weights.into(),
            decompositions: model.decompositions.into(),
        }
    }
}

/// Outcome of a Monte Carlo run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    /// Empirical CHSH value; a context with no draws contributes 0.
    pub estimate: f64,
    /// Number of runs that landed in each context.
    pub counts: [u64; 4],
    /// Empirical correlator per context.
    pub correlators: [f64; 4],
}

/// Simulates `runs` rounds of the experiment.
///
/// Each round picks a context uniformly, draws λ from that context's weights,
/// then draws both outcomes from the joint distribution. A single ChaCha8
/// stream seeded by `seed` drives the whole run.
pub fn sample_experiment(model: &HiddenVariableModel, runs: u64, seed: u64) -> Result<SampleReport> {
    if runs == 0 {
        return Err(Error::Domain("runs must be at least 1".into()));
    }
    let lambda_dists: Vec<WeightedIndex<f64>> = Context::ALL
        .iter()
        .map(|&ctx| WeightedIndex::new(model.weights(ctx)).expect("validated weights"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0u64; 4];
    let mut product_sums = [0i64; 4];
    for _ in 0..runs {
        let k = rng.gen_range(0..4usize);
        let ctx = Context::ALL[k];
        let lambda = lambda_dists[k].sample(&mut rng);
        let [pp, pm, mp, _] = model.decomposition(ctx, lambda).joint_probabilities();
        let u: f64 = rng.gen();
        // outcomes agree on (+,+) and (-,-)
        let product = if u < pp || u >= pp + pm + mp { 1 } else { -1 };
        counts[k] += 1;
        product_sums[k] += product;
    }
    let correlators: [f64; 4] = std::array::from_fn(|k| {
        if counts[k] == 0 {
            0.0
        } else {
            product_sums[k] as f64 / counts[k] as f64
        }
    });
    let estimate = Context::ALL
        .iter()
        .map(|ctx| ctx.chsh_sign() * correlators[ctx.index()])
        .sum();
    Ok(SampleReport {
        estimate,
        counts,
        correlators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(m: f64, n: f64, c: f64) -> LocalDecomposition {
        LocalDecomposition::new(m, n, c).unwrap()
    }

    #[test]
    fn context_order_and_keys() {
        let keys: Vec<_> = Context::ALL.iter().map(|c| c.key()).collect();
        assert_eq!(keys, ["xy", "xy'", "x'y", "x'y'"]);
        assert_eq!(Context::from_settings(1, 0), Some(Context::XPrimeY));
        assert_eq!(Context::XPrimeYPrime.alice_setting(), 1);
        assert_eq!(Context::XYPrime.bob_setting(), 1);
        assert_eq!(Context::from_settings(2, 0), None);
    }

    #[test]
    fn joint_probability_examples() {
        assert_eq!(d(1.0, 1.0, 1.0).joint_probabilities(), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(d(0.5, 0.5, 0.25).joint_probabilities(), [0.25; 4]);
        assert_eq!(d(1.0, 0.0, 0.0).joint_probabilities(), [0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn correlator_examples() {
        assert_eq!(d(1.0, 1.0, 1.0).correlator(), 1.0);
        assert_eq!(d(1.0, 0.0, 0.0).correlator(), -1.0);
        assert_eq!(d(0.5, 0.5, 0.25).correlator(), 0.0);
    }

    #[test]
    fn correlator_range_examples() {
        assert_eq!(correlator_range(0.0, 0.0).unwrap(), (1.0, 1.0));
        assert_eq!(correlator_range(0.5, 0.5).unwrap(), (-1.0, 1.0));
        let (lo, hi) = correlator_range(1.0, 0.3).unwrap();
        assert!((lo + 0.4).abs() < 1e-15 && (hi + 0.4).abs() < 1e-15);
        assert!(correlator_range(1.2, 0.3).is_err());
        assert!(correlator_range(0.2, f64::NAN).is_err());
    }

    #[test]
    fn invalid_decompositions_name_the_inequality() {
        let err = LocalDecomposition::new(0.5, 0.5, 0.6).unwrap_err().to_string();
        assert!(err.contains("min{m, n}"), "{err}");
        let err = LocalDecomposition::new(0.9, 0.9, 0.5).unwrap_err().to_string();
        assert!(err.contains("max{0, m+n-1}"), "{err}");
        let err = LocalDecomposition::new(1.5, 0.5, 0.5).unwrap_err().to_string();
        assert!(err.contains("m = 1.5"), "{err}");
    }

    #[test]
    fn chsh_examples() {
        let all_pp = HiddenVariableModel::single("l", [LocalDecomposition::deterministic(true, true); 4]);
        assert_eq!(all_pp.chsh(), 2.0);

        // correlators (1, 1, 1, -1)
        let pp = LocalDecomposition::deterministic(true, true);
        let pm = LocalDecomposition::deterministic(true, false);
        let pr = HiddenVariableModel::single("l", [pp, pp, pp, pm]);
        assert_eq!(pr.correlators(), [1.0, 1.0, 1.0, -1.0]);
        assert_eq!(pr.chsh(), 4.0);
    }

    #[test]
    fn model_validation_errors() {
        let dd = LocalDecomposition::deterministic(false, false);
        let lam = vec!["a".to_string(), "b".to_string()];
        let good_w = || std::array::from_fn(|_| vec![0.5, 0.5]);
        let decs = || std::array::from_fn(|_| vec![dd, dd]);

        assert!(HiddenVariableModel::new(lam.clone(), good_w(), decs()).is_ok());

        let mut w: [Vec<f64>; 4] = good_w();
        w[2] = vec![0.6, 0.5];
        let err = HiddenVariableModel::new(lam.clone(), w, decs()).unwrap_err();
        assert!(err.to_string().contains("x'y"), "{err}");

        let mut w: [Vec<f64>; 4] = good_w();
        w[0] = vec![1.5, -0.5];
        assert!(HiddenVariableModel::new(lam.clone(), w, decs()).is_err());

        let mut ds: [Vec<LocalDecomposition>; 4] = decs();
        ds[3].pop();
        assert!(HiddenVariableModel::new(lam.clone(), good_w(), ds).is_err());

        let dup = vec!["a".to_string(), "a".to_string()];
        assert!(HiddenVariableModel::new(dup, good_w(), decs()).is_err());
        assert!(HiddenVariableModel::new(vec![], std::array::from_fn(|_| vec![]), std::array::from_fn(|_| vec![])).is_err());
    }

    #[test]
    fn weights_within_tolerance_accepted() {
        let dd = LocalDecomposition::deterministic(false, false);
        let w = std::array::from_fn(|_| vec![0.5 + 4e-10, 0.5]);
        let decs = std::array::from_fn(|_| vec![dd, dd]);
        assert!(HiddenVariableModel::new(vec!["a".into(), "b".into()], w, decs).is_ok());
    }

    #[test]
    fn json_layout_and_errors() {
        let pm = LocalDecomposition::deterministic(true, false);
        let model = HiddenVariableModel::single("lambda", [pm; 4]);
        let text = model.to_json();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["lambdas"][0], "lambda");
        assert_eq!(v["weights"]["x'y'"][0], 1.0);
        assert_eq!(v["decompositions"]["xy'"][0]["m"], 1.0);
        assert_eq!(HiddenVariableModel::from_json(&text).unwrap(), model);

        let bad = text.replace("\"c\": 0.0", "\"c\": 0.7");
        let err = HiddenVariableModel::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("min{m, n}"), "{err}");

        let unknown = text.replacen("\"lambdas\"", "\"extra\": 1, \"lambdas\"", 1);
        assert!(HiddenVariableModel::from_json(&unknown).is_err());
    }

    #[test]
    fn json_preserves_full_precision() {
        let n = 0.123_456_789_012_345_68_f64;
        let dec = LocalDecomposition::max_correlated(0.0, n).unwrap();
        let model = HiddenVariableModel::single("l", [dec; 4]);
        let back = HiddenVariableModel::from_json(&model.to_json()).unwrap();
        assert_eq!(back.decomposition(Context::XY, 0).n().to_bits(), n.to_bits());
    }

    #[test]
    fn sampling_deterministic_model_is_exact() {
        let pp = LocalDecomposition::deterministic(true, true);
        let model = HiddenVariableModel::single("l", [pp; 4]);
        for seed in [0, 1, 99] {
            let r = sample_experiment(&model, 1000, seed).unwrap();
            assert_eq!(r.estimate, 2.0);
            assert_eq!(r.counts.iter().sum::<u64>(), 1000);
        }
    }

    #[test]
    fn sampling_is_seeded() {
        let model = HiddenVariableModel::single("l", [LocalDecomposition::new(0.5, 0.5, 0.3).unwrap(); 4]);
        let a = sample_experiment(&model, 100_000, 42).unwrap();
        let b = sample_experiment(&model, 100_000, 42).unwrap();
        assert_eq!(a, b);
        assert!(sample_experiment(&model, 0, 1).is_err());
    }

    fn decomposition() -> impl Strategy<Value = LocalDecomposition> {
        (0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(m, n, t)| {
            let lo = (m + n - 1.0).max(0.0);
            let hi = m.min(n);
            LocalDecomposition::new(m, n, lo + t * (hi - lo)).unwrap()
        })
    }

    proptest! {
        #[test]
        fn joint_probabilities_are_a_distribution(dec in decomposition()) {
            let p = dec.joint_probabilities();
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            for v in p {
                prop_assert!((-1e-12..=1.0 + 1e-12).contains(&v), "{:?}", p);
            }
            prop_assert_eq!(p[0], dec.c());
        }

        #[test]
        fn correlator_stays_in_its_range(dec in decomposition()) {
            let (lo, hi) = correlator_range(dec.m(), dec.n()).unwrap();
            let e = dec.correlator();
            prop_assert!(lo <= hi);
            prop_assert!(e >= lo - 1e-12 && e <= hi + 1e-12);
            // endpoints attained by the extremal joint probabilities
            let top = LocalDecomposition::max_correlated(dec.m(), dec.n()).unwrap().correlator();
            let bottom = LocalDecomposition::min_correlated(dec.m(), dec.n()).unwrap().correlator();
            prop_assert!((top - hi).abs() < 1e-12 && (bottom - lo).abs() < 1e-12);
        }

        #[test]
        fn correlator_matches_outcome_enumeration(dec in decomposition()) {
            let p = dec.joint_probabilities();
            let direct = p[0] - p[1] - p[2] + p[3];
            prop_assert!((direct - dec.correlator()).abs() < 1e-12);
        }

        #[test]
        fn chsh_is_bounded_by_four(
            decs in proptest::collection::vec(decomposition(), 8),
            raw in proptest::collection::vec(0.0..1.0f64, 8),
        ) {
            let weights: [Vec<f64>; 4] = std::array::from_fn(|k| {
                let a = raw[2 * k] + 1e-3;
                let b = raw[2 * k + 1] + 1e-3;
                vec![a / (a + b), b / (a + b)]
            });
            let ds: [Vec<LocalDecomposition>; 4] = std::array::from_fn(|k| vec![decs[2 * k], decs[2 * k + 1]]);
            let model = HiddenVariableModel::new(vec!["a".into(), "b".into()], weights, ds).unwrap();
            prop_assert!(model.chsh().abs() <= 4.0 + 1e-12);

            // the same value from explicit outcome enumeration
            let mut total = 0.0;
            for ctx in Context::ALL {
                for (w, dec) in model.weights(ctx).iter().zip(model.decompositions(ctx)) {
                    let p = dec.joint_probabilities();
                    total += ctx.chsh_sign() * w * (p[0] - p[1] - p[2] + p[3]);
                }
            }
            prop_assert!((total - model.chsh()).abs() < 1e-12);
        }
    }
}
