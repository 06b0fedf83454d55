//! Relaxation degrees of a hidden-variable model.
//!
//! Every supremum runs over the full λ list of the model, including λ values
//! that carry zero weight in some context.

use serde::{Deserialize, Serialize};

use crate::hvmodel::{Context, HiddenVariableModel};

/// Measured signaling, indeterminism and measurement dependence of a model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaxationProfile {
    pub i1: f64,
    pub i2: f64,
    pub i: f64,
    pub s12: f64,
    pub s21: f64,
    pub s: f64,
    pub m1: f64,
    pub m2: f64,
    pub m: f64,
    pub f: f64,
}

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut correction = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            correction += (sum - t) + v;
        } else {
            correction += (v - t) + sum;
        }
        sum = t;
    }
    sum + correction
}

/// L1 distance between two weight vectors.
pub fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    compensated_sum(a.iter().zip(b).map(|(x, y)| (x - y).abs()))
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

/// `(s12, s21)`: largest shift of Bob's (resp. Alice's) `+` marginal when the
/// other party changes setting, over all λ.
pub fn signaling_degrees(model: &HiddenVariableModel) -> (f64, f64) {
    let shift = |a: Context, b: Context, pick: fn(&crate::LocalDecomposition) -> f64| {
        max_of(
            model
                .decompositions(a)
                .iter()
                .zip(model.decompositions(b))
                .map(|(p, q)| (pick(p) - pick(q)).abs()),
        )
    };
    use Context::*;
    let bob = |d: &crate::LocalDecomposition| d.n();
    let alice = |d: &crate::LocalDecomposition| d.m();
    let s12 = shift(XY, XPrimeY, bob).max(shift(XYPrime, XPrimeYPrime, bob));
    let s21 = shift(XY, XYPrime, alice).max(shift(XPrimeY, XPrimeYPrime, alice));
    (s12, s21)
}

/// `(i1, i2)`: largest distance of a `+` marginal from {0, 1}.
pub fn indeterminism_degrees(model: &HiddenVariableModel) -> (f64, f64) {
    let mut i1 = 0.0_f64;
    let mut i2 = 0.0_f64;
    for ctx in Context::ALL {
        for d in model.decompositions(ctx) {
            i1 = i1.max(d.m().min(1.0 - d.m()));
            i2 = i2.max(d.n().min(1.0 - d.n()));
        }
    }
    (i1, i2)
}

/// `(m1, m2, m)`.
///
/// `m1` compares contexts that differ in Alice's setting only, `m2` those that
/// differ in Bob's only, and `m` takes every pair of distinct contexts, so
/// `m >= max(m1, m2)` holds by construction.
pub fn measurement_dependence_degrees(model: &HiddenVariableModel) -> (f64, f64, f64) {
    let mut m1 = 0.0_f64;
    let mut m2 = 0.0_f64;
    let mut m = 0.0_f64;
    for (k, &a) in Context::ALL.iter().enumerate() {
        for &b in &Context::ALL[k + 1..] {
            let dist = l1_distance(model.weights(a), model.weights(b));
            m = m.max(dist);
            if a.bob_setting() == b.bob_setting() {
                m1 = m1.max(dist);
            }
            if a.alice_setting() == b.alice_setting() {
                m2 = m2.max(dist);
            }
        }
    }
    (m1, m2, m)
}

pub fn profile(model: &HiddenVariableModel) -> RelaxationProfile {
    let (s12, s21) = signaling_degrees(model);
    let (i1, i2) = indeterminism_degrees(model);
    let (m1, m2, m) = measurement_dependence_degrees(model);
    RelaxationProfile {
        i1,
        i2,
        i: i1.max(i2),
        s12,
        s21,
        s: s12.max(s21),
        m1,
        m2,
        m,
        f: 1.0 - m / 2.0,
    }
}
