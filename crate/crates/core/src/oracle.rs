//! Brute-force checks of the closed-form bounds.
//!
//! [`max_chsh_search`] enumerates one-sided models on a grid and never looks
//! at the closed form; [`check_tightness`] compares the two. The generator
//! [`random_constrained_model`] draws arbitrary many-λ models under given caps
//! for soundness sweeps.
//!
//! Enumeration order, which fixes the reported maximiser: Alice cases
//! `(m_x, m_x')` in `(0,0), (0,1), (1,0), (1,1)`; Bob marginal pairs in
//! ascending grid order of the first, then the second component; the
//! measurement-dependence weight `p` ascending. Ties keep the first maximiser.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{attainable_bound, check_i2, check_m2, check_s12, chsh_bound};
use crate::error::{Error, Result};
use crate::hvmodel::{chsh_extremal_decompositions, Context, HiddenVariableModel, LocalDecomposition};

/// Slack allowed between a searched CHSH value and the bound above it.
pub const SOUNDNESS_TOL: f64 = 1e-9;

const GRID_TOL: f64 = 1e-12;

const ALICE_CASES: [[f64; 2]; 4] = [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]];

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub best_chsh: f64,
    pub argmax_model: HiddenVariableModel,
    /// Weight `p` of `lambda1` in the `y'` contexts of the maximiser (0 for a single-λ model).
    pub weight_p: f64,
    /// Unweighted `E(λ)` per λ of the maximiser.
    pub per_lambda_e: Vec<f64>,
    /// Unweighted `J(λ) = |m1-n1| + |m2-n2| + |m3-n3| + |m4+n4-1|`.
    pub per_lambda_j: Vec<f64>,
    /// `J(λ)` with each term multiplied by its context weight.
    pub per_lambda_weighted_j: Vec<f64>,
    /// Weighted CHSH contribution `T(λ)`.
    pub per_lambda_t: Vec<f64>,
    pub t_total: f64,
    pub resolution: usize,
    /// Marginal grid points per Bob setting.
    pub grid_points: usize,
    /// Largest `value - (2 - 2 J_pair)` over every marginal pair visited; `E ≤ 4 - 2J` needs this ≤ 0.
    pub max_pair_excess: f64,
    /// Smallest unweighted `J` per Alice case over the grid.
    pub min_j_per_case: [f64; 4],
}

/// Candidate values of one of Bob's `+` marginals: a uniform grid with
/// `resolution` steps on each of `[0, i2]` and `[1 - i2, 1]`, plus the
/// interval endpoints translated by `±s12` where they stay admissible.
pub fn marginal_grid(i2: f64, s12: f64, resolution: usize) -> Vec<f64> {
    let admissible = |x: f64| (-GRID_TOL..=i2 + GRID_TOL).contains(&x) || (1.0 - i2 - GRID_TOL..=1.0 + GRID_TOL).contains(&x);
    let mut grid: Vec<f64> = Vec::with_capacity(2 * resolution + 10);
    for k in 0..=resolution {
        let t = i2 * (k as f64 / resolution as f64);
        grid.push(t);
        grid.push(1.0 - t);
    }
    for e in [0.0, i2, 1.0 - i2, 1.0] {
        for x in [e + s12, e - s12] {
            if admissible(x) {
                grid.push(x.clamp(0.0, 1.0));
            }
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Best contribution of one pair of Bob marginals for a fixed Alice case.
#[derive(Debug, Clone, Copy)]
struct PairBest {
    value: f64,
    first: f64,
    second: f64,
}

struct CaseTables {
    // (n1, n3): <xy> + <x'y>
    unprimed: PairBest,
    // (n2, n4): <xy'> - <x'y'>
    primed: PairBest,
    min_j: f64,
}

fn scan_case(alice: [f64; 2], grid: &[f64], s12: f64, excess: &mut f64) -> CaseTables {
    let [mx, mxp] = alice;
    let mut unprimed: Option<PairBest> = None;
    let mut primed: Option<PairBest> = None;
    let mut min_j_unprimed = f64::INFINITY;
    let mut min_j_primed = f64::INFINITY;
    for &a in grid {
        for &b in grid {
            if (a - b).abs() > s12 + GRID_TOL {
                continue;
            }
            // first component belongs to Alice's x, second to x'
            let h = LocalDecomposition::max_correlated(mx, a).unwrap().correlator()
                + LocalDecomposition::max_correlated(mxp, b).unwrap().correlator();
            let j_h = (mx - a).abs() + (mxp - b).abs();
            let g = LocalDecomposition::max_correlated(mx, a).unwrap().correlator()
                - LocalDecomposition::min_correlated(mxp, b).unwrap().correlator();
            let j_g = (mx - a).abs() + (mxp + b - 1.0).abs();
            *excess = excess.max(h - (2.0 - 2.0 * j_h)).max(g - (2.0 - 2.0 * j_g));
            min_j_unprimed = min_j_unprimed.min(j_h);
            min_j_primed = min_j_primed.min(j_g);
            if unprimed.is_none_or(|best| h > best.value) {
                unprimed = Some(PairBest { value: h, first: a, second: b });
            }
            if primed.is_none_or(|best| g > best.value) {
                primed = Some(PairBest { value: g, first: a, second: b });
            }
        }
    }
    // the diagonal a == b is always admissible, so both are set
    CaseTables {
        unprimed: unprimed.expect("non-empty grid"),
        primed: primed.expect("non-empty grid"),
        min_j: min_j_unprimed + min_j_primed,
    }
}

/// Exhaustive search for the largest CHSH value of a one-sided model with
/// Bob's degrees capped at `(i2, s12, m2)`.
///
/// Alice is deterministic and no-signaling. Each λ picks an Alice case and
/// Bob marginals from [`marginal_grid`] subject to the per-λ shift cap;
/// joint probabilities are extremal. Measurement dependence follows the
/// two-λ pattern with `lambda1` weighted `(0, p, 0, p)` and `lambda2`
/// `(1, 1-p, 1, 1-p)`, `p` on a grid over `[0, m2/2]`; `p = 0` is reported as
/// a single-λ model.
pub fn max_chsh_search(i2: f64, s12: f64, m2: f64, resolution: usize) -> Result<SearchReport> {
    let (i2, s12, m2) = (check_i2(i2)?, check_s12(s12)?, check_m2(m2)?);
    if resolution < 4 {
        return Err(Error::Domain(format!("resolution must be at least 4, got {resolution}")));
    }
    let grid = marginal_grid(i2, s12, resolution);
    let mut excess = f64::NEG_INFINITY;
    let cases: Vec<CaseTables> = ALICE_CASES.iter().map(|&a| scan_case(a, &grid, s12, &mut excess)).collect();

    // lambda1 is only seen in the y' contexts, so only its primed pair counts
    let (lambda1_case, _) = cases
        .iter()
        .enumerate()
        .fold((0usize, f64::NEG_INFINITY), |(bi, bv), (i, c)| if c.primed.value > bv { (i, c.primed.value) } else { (bi, bv) });
    let lambda1_value = cases[lambda1_case].primed.value;

    let p_steps = if m2 > 0.0 { resolution } else { 0 };
    let mut best: Option<(f64, f64, usize)> = None;
    for k in 0..=p_steps {
        let p = if p_steps == 0 { 0.0 } else { (m2 / 2.0) * (k as f64 / p_steps as f64) };
        for (ci, case) in cases.iter().enumerate() {
            let total = p * lambda1_value + case.unprimed.value + (1.0 - p) * case.primed.value;
            if best.is_none_or(|(v, _, _)| total > v) {
                best = Some((total, p, ci));
            }
        }
    }
    let (best_chsh, weight_p, lambda2_case) = best.expect("at least one candidate");

    let decompositions_for = |ci: usize| {
        let c = &cases[ci];
        chsh_extremal_decompositions(
            ALICE_CASES[ci],
            [c.unprimed.first, c.primed.first, c.unprimed.second, c.primed.second],
        )
        .expect("grid values are probabilities")
    };
    let argmax_model = if weight_p == 0.0 {
        HiddenVariableModel::single("lambda", decompositions_for(lambda2_case))
    } else {
        let l1 = decompositions_for(lambda1_case);
        let l2 = decompositions_for(lambda2_case);
        let unprimed = vec![0.0, 1.0];
        let primed = vec![weight_p, 1.0 - weight_p];
        HiddenVariableModel::new(
            vec!["lambda1".into(), "lambda2".into()],
            [unprimed.clone(), primed.clone(), unprimed, primed],
            std::array::from_fn(|k| vec![l1[k], l2[k]]),
        )?
    };

    let diag = lambda_diagnostics(&argmax_model);
    Ok(SearchReport {
        best_chsh,
        weight_p,
        per_lambda_e: diag.iter().map(|d| d.e).collect(),
        per_lambda_j: diag.iter().map(|d| d.j).collect(),
        per_lambda_weighted_j: diag.iter().map(|d| d.weighted_j).collect(),
        per_lambda_t: diag.iter().map(|d| d.t).collect(),
        t_total: diag.iter().map(|d| d.t).sum(),
        argmax_model,
        resolution,
        grid_points: grid.len(),
        max_pair_excess: excess,
        min_j_per_case: std::array::from_fn(|i| cases[i].min_j),
    })
}

/// Per-λ quantities of a model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaDiagnostics {
    /// Unweighted CHSH combination of the four correlators.
    pub e: f64,
    /// Unweighted distance of the marginals from the CHSH-maximising pattern.
    pub j: f64,
    pub weighted_j: f64,
    /// Weighted CHSH contribution.
    pub t: f64,
    /// Sum of the four context weights of this λ.
    pub weight_sum: f64,
}

pub fn lambda_diagnostics(model: &HiddenVariableModel) -> Vec<LambdaDiagnostics> {
    (0..model.lambda_count())
        .map(|lam| {
            let mut out = LambdaDiagnostics { e: 0.0, j: 0.0, weighted_j: 0.0, t: 0.0, weight_sum: 0.0 };
            for ctx in Context::ALL {
                let d = model.decomposition(ctx, lam);
                let w = model.weights(ctx)[lam];
                let term = match ctx {
                    Context::XPrimeYPrime => (d.m() + d.n() - 1.0).abs(),
                    _ => (d.m() - d.n()).abs(),
                };
                out.e += ctx.chsh_sign() * d.correlator();
                out.t += ctx.chsh_sign() * w * d.correlator();
                out.j += term;
                out.weighted_j += w * term;
                out.weight_sum += w;
            }
            out
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TightnessReport {
    /// Closed-form bound.
    pub bound: f64,
    /// Closed form evaluated at the usable shift.
    pub attainable: f64,
    /// Best CHSH value found by the search.
    pub searched: f64,
    /// `bound - searched`.
    pub gap: f64,
    /// `attainable - searched`.
    pub attainable_gap: f64,
    /// `searched <= bound + 1e-9`.
    pub sound: bool,
    /// `gap <= 4 / resolution`.
    pub tight: bool,
    pub resolution: usize,
}

pub fn check_tightness(i2: f64, s12: f64, m2: f64, resolution: usize) -> Result<TightnessReport> {
    let search = max_chsh_search(i2, s12, m2, resolution)?;
    let bound = chsh_bound(i2, s12, m2)?.value;
    let attainable = attainable_bound(i2, s12, m2)?.value;
    let searched = search.best_chsh;
    let gap = bound - searched;
    Ok(TightnessReport {
        bound,
        attainable,
        searched,
        gap,
        attainable_gap: attainable - searched,
        sound: searched <= bound + SOUNDNESS_TOL,
        tight: gap <= 4.0 / resolution as f64,
        resolution,
    })
}

fn draw_marginal(rng: &mut ChaCha8Rng, i2: f64) -> f64 {
    if rng.gen_bool(0.4) {
        [0.0, i2, 1.0 - i2, 1.0][rng.gen_range(0..4)]
    } else {
        let t = rng.gen::<f64>() * i2;
        if rng.gen_bool(0.5) {
            t
        } else {
            1.0 - t
        }
    }
}

fn draw_partner(rng: &mut ChaCha8Rng, n: f64, i2: f64, s12: f64) -> f64 {
    let admissible = |x: f64| (0.0..=1.0).contains(&x) && (x <= i2 || x >= 1.0 - i2);
    if rng.gen_bool(0.3) {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        for x in [n + sign * s12, n - sign * s12] {
            if admissible(x) {
                return x;
            }
        }
    }
    let lo = (n - s12).max(0.0);
    let hi = (n + s12).min(1.0);
    for _ in 0..16 {
        let x = lo + rng.gen::<f64>() * (hi - lo);
        if admissible(x) {
            return x;
        }
    }
    n
}

fn draw_simplex(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..len).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    if len > 1 && rng.gen_bool(0.25) {
        let keep = rng.gen_range(0..len);
        for (i, v) in w.iter_mut().enumerate() {
            if i != keep && rng.gen_bool(0.5) {
                *v = 0.0;
            }
        }
    }
    let total: f64 = w.iter().sum();
    w.iter().map(|v| v / total).collect()
}

/// A random one-sided model whose measured `i2`, `s12`, `m2` do not exceed the caps.
///
/// Alice is deterministic and no-signaling, and each λ has the same weight in
/// `(x,y)` and `(x',y)` and in `(x,y')` and `(x',y')`, so the measured `i1`,
/// `s21` and `m1` are zero.
pub fn random_constrained_model(
    i2_cap: f64,
    s12_cap: f64,
    m2_cap: f64,
    lambda_count: usize,
    seed: u64,
) -> Result<HiddenVariableModel> {
    let (i2, s12, m2) = (check_i2(i2_cap)?, check_s12(s12_cap)?, check_m2(m2_cap)?);
    if lambda_count == 0 {
        return Err(Error::Domain("lambda_count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut decompositions: [Vec<LocalDecomposition>; 4] = Default::default();
    for _ in 0..lambda_count {
        let alice = [rng.gen_bool(0.5), rng.gen_bool(0.5)].map(|b| if b { 1.0 } else { 0.0 });
        let n1 = draw_marginal(&mut rng, i2);
        let n3 = draw_partner(&mut rng, n1, i2, s12);
        let n2 = draw_marginal(&mut rng, i2);
        let n4 = draw_partner(&mut rng, n2, i2, s12);
        let bob = [n1, n2, n3, n4];
        for ctx in Context::ALL {
            // with Alice deterministic, c is forced to m * n
            let m = alice[ctx.alice_setting()];
            let n = bob[ctx.index()];
            decompositions[ctx.index()].push(LocalDecomposition::new(m, n, m * n)?);
        }
    }

    let unprimed = draw_simplex(&mut rng, lambda_count);
    let target = draw_simplex(&mut rng, lambda_count);
    let dist = crate::metrics::l1_distance(&unprimed, &target);
    let max_t = if dist > 0.0 { (m2 / dist).min(1.0) } else { 1.0 };
    let t = if rng.gen_bool(0.3) { max_t } else { rng.gen::<f64>() * max_t };
    let primed: Vec<f64> = unprimed.iter().zip(&target).map(|(u, v)| (1.0 - t) * u + t * v).collect();

    HiddenVariableModel::new(
        (0..lambda_count).map(|k| format!("lambda{}", k + 1)).collect(),
        [unprimed.clone(), primed.clone(), unprimed, primed],
        decompositions,
    )
}
