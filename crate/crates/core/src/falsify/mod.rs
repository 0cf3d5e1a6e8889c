//! Disproof search over the weight simplex `{w ≥ 0, Σ w_e = |E|}`.
//!
//! A result with `improved = true` is a witness that the graph is not rigid
//! at that end. `improved = false` is only evidence, never a certificate.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{laplacian, Graph, WeightVector};
use crate::par::{map_indexed, Execution};
use crate::spectra::{eigenpair, jacobi_eigen, SpectraError};

/// Relative margin a witness must clear over the unit-weight value.
pub const IMPROVEMENT_MARGIN: f64 = 1e-6;
/// Initial subgradient step.
pub const ETA0: f64 = 0.1;

/// Which extreme eigenvalue is probed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum End {
    /// λ₂, to be maximized.
    Lower,
    /// λₙ, to be minimized.
    Upper,
}

impl End {
    /// Position of the target eigenvalue in the ascending spectrum.
    fn position(self, n: usize) -> usize {
        match self {
            End::Lower => 1,
            End::Upper => n - 1,
        }
    }

    /// Whether `candidate` beats `unit` by the required relative margin.
    pub fn improves(self, candidate: f64, unit: f64) -> bool {
        match self {
            End::Lower => candidate > unit * (1.0 + IMPROVEMENT_MARGIN),
            End::Upper => candidate < unit * (1.0 - IMPROVEMENT_MARGIN),
        }
    }

    fn better(self, a: f64, b: f64) -> bool {
        match self {
            End::Lower => a > b,
            End::Upper => a < b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FalsifierResult {
    pub end: End,
    /// Best weights seen, normalized to sum `|E|`.
    pub best_w: WeightVector,
    pub best_value: f64,
    /// Target eigenvalue at unit weights.
    pub unit_value: f64,
    pub improved: bool,
    pub trials: usize,
    pub steps: usize,
    pub seed: u64,
}

fn precheck(g: &Graph) -> Result<(), SpectraError> {
    if g.n() < 2 || !g.is_connected() {
        return Err(SpectraError::Disconnected);
    }
    Ok(())
}

fn eval(g: &Graph, w: &WeightVector, end: End) -> Result<f64, SpectraError> {
    let l = laplacian(g, Some(w))?;
    Ok(jacobi_eigen(&l, false)?.values[end.position(g.n())])
}

/// Uniform sample from the scaled simplex via normalized exponential spacings.
fn sample_simplex(rng: &mut ChaCha8Rng, m: usize) -> WeightVector {
    let raw: Vec<f64> = (0..m).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    WeightVector::new(raw)
        .expect("exponentials are nonnegative")
        .normalized()
}

/// Per-trial generator: the shared seed with the trial index as stream id.
fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Samples `trials` weight vectors uniformly from the simplex and keeps the
/// best. Runs in parallel when the `parallel` feature is enabled.
pub fn random_weight_search(
    g: &Graph,
    end: End,
    trials: usize,
    seed: u64,
) -> Result<FalsifierResult, SpectraError> {
    random_weight_search_with(g, end, trials, seed, Execution::default())
}

/// [`random_weight_search`] with an explicit execution strategy. The result
/// does not depend on the strategy.
pub fn random_weight_search_with(
    g: &Graph,
    end: End,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<FalsifierResult, SpectraError> {
    precheck(g)?;
    let unit = WeightVector::unit(g.m());
    let unit_value = eval(g, &unit, end)?;
    let samples = map_indexed(exec, trials, |t| {
        let w = sample_simplex(&mut trial_rng(seed, t), g.m());
        eval(g, &w, end).map(|v| (v, w))
    });
    let mut best = (unit_value, unit);
    for s in samples {
        let (v, w) = s?;
        // strict comparison keeps the earliest trial on ties
        if end.better(v, best.0) {
            best = (v, w);
        }
    }
    Ok(FalsifierResult {
        end,
        improved: end.improves(best.0, unit_value),
        best_value: best.0,
        best_w: best.1,
        unit_value,
        trials,
        steps: 0,
        seed,
    })
}

/// Projected subgradient ascent on λ₂ (descent on λₙ). Each step moves along
/// `((φ_i - φ_j)²)_e` for a unit eigenvector `φ` of the current target
/// eigenvalue, with step `η₀/√t`, then projects back onto the simplex. With a
/// repeated target eigenvalue this is a subgradient step.
pub fn subgradient_ascent(
    g: &Graph,
    end: End,
    start_w: Option<&WeightVector>,
    steps: usize,
    seed: u64,
) -> Result<FalsifierResult, SpectraError> {
    precheck(g)?;
    let m = g.m();
    let total = m as f64;
    let unit_value = eval(g, &WeightVector::unit(m), end)?;
    let mut w: Vec<f64> = match start_w {
        Some(w) => w.normalized().into_inner(),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let jitter: Vec<f64> = (0..m)
                .map(|_| 1.0 + 0.01 * rng.gen_range(-1.0..1.0))
                .collect();
            project_to_simplex(&jitter, total)
        }
    };
    let sign = match end {
        End::Lower => 1.0,
        End::Upper => -1.0,
    };
    let pos = end.position(g.n());
    let mut best: Option<(f64, Vec<f64>)> = None;
    for t in 0..=steps {
        let wv = WeightVector::new(w.clone()).expect("projection keeps weights nonnegative");
        let l: DMatrix<f64> = laplacian(g, Some(&wv))?;
        let (value, phi) = eigenpair(&l, pos)?;
        if best.as_ref().is_none_or(|(b, _)| end.better(value, *b)) {
            best = Some((value, w.clone()));
        }
        if t == steps {
            break;
        }
        let eta = ETA0 / ((t + 1) as f64).sqrt();
        let moved: Vec<f64> = g
            .edges()
            .iter()
            .zip(&w)
            .map(|(&(i, j), &we)| we + sign * eta * (phi[i] - phi[j]).powi(2))
            .collect();
        w = project_to_simplex(&moved, total);
    }
    let (best_value, best_w) = best.expect("at least one evaluation");
    let best_w = WeightVector::new(best_w).expect("nonnegative").normalized();
    // re-evaluate after the final normalization
    let best_value = eval(g, &best_w, end).unwrap_or(best_value);
    Ok(FalsifierResult {
        end,
        improved: end.improves(best_value, unit_value),
        best_w,
        best_value,
        unit_value,
        trials: 0,
        steps,
        seed,
    })
}

/// Euclidean projection of `v` onto `{x ≥ 0, Σ x = total}` by sorting and
/// thresholding.
pub fn project_to_simplex(v: &[f64], total: f64) -> Vec<f64> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &x) in u.iter().enumerate() {
        cumsum += x;
        let t = (cumsum - total) / (k + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}
