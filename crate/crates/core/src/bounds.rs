//! Closed-form upper bounds on the CHSH value under one-sided relaxation.
//!
//! Bob's side may be indeterministic (`i2`), receive signals from Alice
//! (`s12`), and have a setting-dependent hidden-variable distribution (`m2`).
//! The bound is piecewise:
//!
//! * `SubGap`   (`s12 < 1 - 2 i2`, `m2 < 2`): `4 - (1 - i2)(2 - m2)`
//! * `CrossGap` (`s12 >= 1 - 2 i2`, `m2 < 2`): `4 - (1 - s12)(2 - m2)`
//! * `Saturated` (`m2 = 2`): `4`
//!
//! In `SubGap` a marginal shift cannot cross the gap between `[0, i2]` and
//! `[1 - i2, 1]`, so the shift actually usable is `min(i2, s12)`. The closed
//! form above uses `i2` and is attained only when `s12 >= i2`;
//! [`attainable_bound`] evaluates it at the usable shift and is what a model
//! with those caps can reach. Feasibility and the inverse solvers are phrased
//! in terms of the attainable bound.

use std::fmt;
use std::io::{self, Write};

use serde::Serialize;

use crate::error::{check_range, Error, Result};

/// Violation of the singlet state, `2√2 - 2`.
pub const SINGLET_VIOLATION: f64 = 2.0 * std::f64::consts::SQRT_2 - 2.0;

/// Absolute tolerance on regime boundaries and feasibility comparisons.
pub const BOUND_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// Marginal shifts stay inside one subinterval.
    SubGap,
    /// Shifts can cross the gap between `[0, i2]` and `[1 - i2, 1]`.
    CrossGap,
    /// Complete measurement dependence.
    Saturated,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::SubGap => "SubGap",
            Regime::CrossGap => "CrossGap",
            Regime::Saturated => "Saturated",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundResult {
    pub value: f64,
    pub regime: Regime,
}

pub(crate) fn check_i2(i2: f64) -> Result<f64> {
    check_range("i2", i2, 0.0, 0.5, "[0, 1/2]")
}

pub(crate) fn check_s12(s12: f64) -> Result<f64> {
    check_range("s12", s12, 0.0, 1.0, "[0, 1]")
}

pub(crate) fn check_m2(m2: f64) -> Result<f64> {
    check_range("m2", m2, 0.0, 2.0, "[0, 2]")
}

fn check_v(v: f64) -> Result<f64> {
    check_range("v", v, 0.0, 2.0, "[0, 2]")
}

/// Regime of `(i2, s12, m2)`; the boundary `s12 = 1 - 2 i2` belongs to `CrossGap`.
pub fn regime(i2: f64, s12: f64, m2: f64) -> Result<Regime> {
    let (i2, s12, m2) = (check_i2(i2)?, check_s12(s12)?, check_m2(m2)?);
    Ok(regime_unchecked(i2, s12, m2))
}

fn regime_unchecked(i2: f64, s12: f64, m2: f64) -> Regime {
    if m2 >= 2.0 - BOUND_TOL {
        Regime::Saturated
    } else if s12 >= 1.0 - 2.0 * i2 - BOUND_TOL {
        Regime::CrossGap
    } else {
        Regime::SubGap
    }
}

// 4 - (1 - shift)(2 - m2), rearranged so that m2 = 0 gives exactly 2 + 2 shift
// and shift = 0 gives exactly 2 + m2.
fn bound_at_shift(shift: f64, m2: f64) -> f64 {
    2.0 + m2 + shift * (2.0 - m2)
}

/// The piecewise closed-form bound.
pub fn chsh_bound(i2: f64, s12: f64, m2: f64) -> Result<BoundResult> {
    let (i2, s12, m2) = (check_i2(i2)?, check_s12(s12)?, check_m2(m2)?);
    let regime = regime_unchecked(i2, s12, m2);
    let value = match regime {
        Regime::SubGap => bound_at_shift(i2, m2),
        Regime::CrossGap => bound_at_shift(s12, m2),
        Regime::Saturated => 4.0,
    };
    Ok(BoundResult { value, regime })
}

/// Largest per-λ shift of Bob's marginal that the caps allow: `s12` when the
/// gap can be crossed, otherwise `min(i2, s12)`.
pub fn effective_shift(i2: f64, s12: f64) -> Result<f64> {
    let (i2, s12) = (check_i2(i2)?, check_s12(s12)?);
    Ok(effective_shift_unchecked(i2, s12))
}

fn effective_shift_unchecked(i2: f64, s12: f64) -> f64 {
    if s12 >= 1.0 - 2.0 * i2 - BOUND_TOL {
        s12
    } else {
        s12.min(i2)
    }
}

/// Maximum CHSH value over one-sided models whose degrees do not exceed the caps.
///
/// Equals [`chsh_bound`] except in `SubGap` with `s12 < i2`, where it is
/// strictly smaller.
pub fn attainable_bound(i2: f64, s12: f64, m2: f64) -> Result<BoundResult> {
    let (i2, s12, m2) = (check_i2(i2)?, check_s12(s12)?, check_m2(m2)?);
    let regime = regime_unchecked(i2, s12, m2);
    let value = match regime {
        Regime::Saturated => 4.0,
        _ => bound_at_shift(effective_shift_unchecked(i2, s12), m2),
    };
    Ok(BoundResult { value, regime })
}

/// Bound for measurement-independent models: `2 + 2 i2` in `SubGap`, `2 + 2 s12` in `CrossGap`.
pub fn mi_bound(i2: f64, s12: f64) -> Result<f64> {
    let (i2, s12) = (check_i2(i2)?, check_s12(s12)?);
    Ok(match regime_unchecked(i2, s12, 0.0) {
        Regime::SubGap => 2.0 + 2.0 * i2,
        _ => 2.0 + 2.0 * s12,
    })
}

/// Bound for Bob-local deterministic, no-signaling models: `min{2 + m2, 4}`.
pub fn ld_bound(m2: f64) -> Result<f64> {
    let m2 = check_m2(m2)?;
    Ok((2.0 + m2).min(4.0))
}

/// Whether some model with these caps can violate CHSH by `v`.
pub fn feasible(i2: f64, s12: f64, m2: f64, v: f64) -> Result<bool> {
    let v = check_v(v)?;
    let bound = attainable_bound(i2, s12, m2)?;
    Ok(bound.value >= 2.0 + v - BOUND_TOL)
}

/// Least `s12` reaching violation `v` at measurement dependence `m2`, provided
/// Bob is indeterministic enough to cross the gap (`i2 >= (1 - s12)/2`).
pub fn min_signaling_for_violation(v: f64, m2: f64) -> Result<f64> {
    let (v, m2) = (check_v(v)?, check_m2(m2)?);
    if m2 >= 2.0 - BOUND_TOL {
        return Err(Error::Domain(
            "m2 = 2 already allows every violation; no signaling requirement exists".into(),
        ));
    }
    Ok(((v - m2) / (2.0 - m2)).max(0.0))
}

/// Least `m2` reaching violation `v` given `i2` and `s12`.
///
/// Solves `2σ + m2 (1 - σ) >= v` for the usable shift σ (see [`effective_shift`]),
/// which is `s12` in `CrossGap` and `i2` in `SubGap` when `s12 = i2`.
pub fn min_md_for_violation(v: f64, i2: f64, s12: f64) -> Result<f64> {
    let v = check_v(v)?;
    let shift = effective_shift(i2, s12)?;
    if shift >= 1.0 - BOUND_TOL {
        return Err(Error::Domain(
            "s12 = 1 already allows every violation; no measurement-dependence requirement exists"
                .into(),
        ));
    }
    Ok(((v - 2.0 * shift) / (1.0 - shift)).max(0.0))
}

/// `(i2_min, s12_min) = (v/2, v/2)` for measurement-independent models in `SubGap`.
pub fn min_indeterminism_for_violation(v: f64) -> Result<(f64, f64)> {
    let v = check_v(v)?;
    if v >= 2.0 / 3.0 {
        return Err(Error::Domain(format!(
            "v = {v} >= 2/3 cannot be reached without crossing the gap; use min_signaling_for_violation"
        )));
    }
    Ok((v / 2.0, v / 2.0))
}

/// Which tradeoff surface to tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// `v(i2, m2)` in `SubGap` with `s12 = i2`, over `i2 ∈ [0, 1/3)`.
    Fig1,
    /// `v(s12, m2)` in `CrossGap` with `i2 = (1 - s12)/2`.
    Fig2,
    /// `v(m2)` for Bob-local deterministic models.
    Fig3,
    /// `v(s12, m2)` on the `i2 = 1/3` slice, `s12 ∈ [0, 1/3]`.
    Fig4,
}

impl Figure {
    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Figure::Fig1),
            2 => Some(Figure::Fig2),
            3 => Some(Figure::Fig3),
            4 => Some(Figure::Fig4),
            _ => None,
        }
    }

    pub fn header(self) -> &'static [&'static str] {
        match self {
            Figure::Fig1 => &["i2", "m2", "v"],
            Figure::Fig2 | Figure::Fig4 => &["s12", "m2", "v"],
            Figure::Fig3 => &["m2", "v"],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffTable {
    pub figure: Figure,
    pub rows: Vec<Vec<f64>>,
}

impl TradeoffTable {
    pub fn header(&self) -> &'static [&'static str] {
        self.figure.header()
    }

    /// CSV with a header row and 12 significant digits per value.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", self.header().join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_significant(x, 12)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

/// Fixed-point rendering of `x` with `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

fn linspace(lo: f64, hi: f64, steps: usize) -> impl Iterator<Item = f64> {
    (0..=steps).map(move |k| lo + (hi - lo) * (k as f64 / steps as f64))
}

/// Tabulates a tradeoff surface. `resolution` is the number of subdivisions
/// per axis; rows are in row-major order (first column slowest).
pub fn tradeoff_grid(figure: Figure, resolution: usize) -> Result<TradeoffTable> {
    if resolution < 2 {
        return Err(Error::Domain(format!("resolution must be at least 2, got {resolution}")));
    }
    let violation = |b: Result<BoundResult>| b.map(|b| b.value - 2.0);
    let mut rows = Vec::new();
    match figure {
        Figure::Fig1 => {
            // i2 < 1/3 keeps s12 = i2 inside SubGap
            for k in 0..resolution {
                let i2 = (1.0 / 3.0) * (k as f64 / resolution as f64);
                for m2 in linspace(0.0, 2.0, resolution) {
                    rows.push(vec![i2, m2, violation(chsh_bound(i2, i2, m2))?]);
                }
            }
        }
        Figure::Fig2 => {
            for s12 in linspace(0.0, 1.0, resolution) {
                let i2 = (1.0 - s12) / 2.0;
                for m2 in linspace(0.0, 2.0, resolution) {
                    rows.push(vec![s12, m2, violation(chsh_bound(i2, s12, m2))?]);
                }
            }
        }
        Figure::Fig3 => {
            for m2 in linspace(0.0, 2.0, resolution) {
                rows.push(vec![m2, ld_bound(m2)? - 2.0]);
            }
        }
        Figure::Fig4 => {
            for s12 in linspace(0.0, 1.0 / 3.0, resolution) {
                for m2 in linspace(0.0, 2.0, resolution) {
                    rows.push(vec![s12, m2, violation(chsh_bound(1.0 / 3.0, s12, m2))?]);
                }
            }
        }
    }
    Ok(TradeoffTable { figure, rows })
}
