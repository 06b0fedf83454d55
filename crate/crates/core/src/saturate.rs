//! Explicit hidden-variable models whose CHSH value equals the closed-form bound.
//!
//! Alice is always deterministic, no-signaling and measurement independent;
//! every relaxation lives on Bob's side.

use crate::bounds::{check_i2, check_m2, check_s12, Regime, BOUND_TOL};
use crate::error::{Error, Result};
use crate::hvmodel::{HiddenVariableModel, LocalDecomposition};

fn extremal_decompositions(alice: [f64; 2], bob: [f64; 4]) -> [LocalDecomposition; 4] {
    crate::hvmodel::chsh_extremal_decompositions(alice, bob).expect("marginals are probabilities")
}

/// Bob's `+` marginals `(n1, n2, n3, n4)` (context order) realising the largest
/// usable shift under the caps, together with Alice answering `-1` everywhere.
///
/// In `SubGap` the shift is `i2` (`n4 = i2`), in `CrossGap` it is `s12` with
/// `n2 = max{0, 1 - i2 - s12}` and `n4 = n2 + s12`.
fn bob_marginals(i2: f64, s12: f64) -> [f64; 4] {
    let (n2, n4) = if s12 >= 1.0 - 2.0 * i2 - BOUND_TOL {
        let n2 = (1.0 - i2 - s12).max(0.0);
        (n2, (n2 + s12).min(1.0))
    } else {
        (0.0, i2)
    };
    [0.0, n2, 0.0, n4]
}

/// Single-λ, measurement-independent model with CHSH equal to
/// [`mi_bound`](crate::bounds::mi_bound)`(i2, s12)`.
///
/// In `SubGap` the realised shift is `i2` regardless of `s12`, so the measured
/// `s12` of the result equals `i2`.
pub fn mi_saturating_model(i2: f64, s12: f64) -> Result<HiddenVariableModel> {
    let (i2, s12) = (check_i2(i2)?, check_s12(s12)?);
    Ok(HiddenVariableModel::single(
        "lambda",
        extremal_decompositions([0.0, 0.0], bob_marginals(i2, s12)),
    ))
}

/// The two-λ deterministic no-signaling model with CHSH `2 + 2p` and `m2 = 2p`.
///
/// `lambda1`: Alice `-1` under `x`, `+1` under `x'`; Bob `-1` under both
/// settings. `lambda2`: every outcome `+1`. Contexts with Bob's `y` put all
/// weight on `lambda2`; contexts with `y'` weight the two as `(p, 1 - p)`.
pub fn table1_model(p: f64) -> Result<HiddenVariableModel> {
    let p = crate::error::check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    let det = LocalDecomposition::deterministic;
    let lambda1 = [det(false, false), det(false, false), det(true, false), det(true, false)];
    let lambda2 = [det(true, true); 4];
    two_lambda_model(p, lambda1, lambda2)
}

fn two_lambda_model(
    p: f64,
    lambda1: [LocalDecomposition; 4],
    lambda2: [LocalDecomposition; 4],
) -> Result<HiddenVariableModel> {
    let unprimed = vec![0.0, 1.0];
    let primed = vec![p, 1.0 - p];
    HiddenVariableModel::new(
        vec!["lambda1".into(), "lambda2".into()],
        [unprimed.clone(), primed.clone(), unprimed, primed],
        std::array::from_fn(|k| vec![lambda1[k], lambda2[k]]),
    )
}

/// Two-λ model attaining [`chsh_bound`](crate::bounds::chsh_bound)`(i2, s12, m2)`
/// for `m2 < 2`.
///
/// `lambda2` carries the [`mi_saturating_model`] decompositions, `lambda1`
/// has Alice `(-1, +1)` and Bob always `-1`, and the weights follow the
/// [`table1_model`] pattern with `p = m2/2`, giving
/// `2 + 2p + 2σ(1 - p)` for the realised shift σ.
pub fn combined_saturating_model(i2: f64, s12: f64, m2: f64) -> Result<HiddenVariableModel> {
    let (i2, s12, m2) = (check_i2(i2)?, check_s12(s12)?, check_m2(m2)?);
    if crate::bounds::regime(i2, s12, m2)? == Regime::Saturated {
        return Err(Error::Domain(
            "m2 = 2 is complete measurement dependence; use table1_model(1)".into(),
        ));
    }
    let lambda1 = extremal_decompositions([0.0, 1.0], [0.0; 4]);
    let lambda2 = extremal_decompositions([0.0, 0.0], bob_marginals(i2, s12));
    two_lambda_model(m2 / 2.0, lambda1, lambda2)
}
