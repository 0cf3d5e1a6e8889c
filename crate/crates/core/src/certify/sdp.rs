//! Gram-matrix feasibility on an eigenspace.
//!
//! For an orthonormal basis `U` of `E_λ`, every spectral embedding on `E_λ`
//! is `P = U V` and is determined up to rotation by `X = V Vᵀ ⪰ 0`. The
//! squared length of edge `ij` is the linear functional
//! `X ↦ w_eᵀ X w_e` with `w_e = U_i - U_j`. Averaging it over an edge orbit
//! gives `C_o`; the instance asks for `X ⪰ 0` with `tr X = 1` and equal
//! orbit averages. Under a group `Ψ` the symmetrized embedding of any feasible
//! `P` is edge-isometric.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::CertifyError;
use crate::graph::Graph;
use crate::linalg::{null_space, rank, smat, svec, svec_len};
use crate::symmetry::OrbitPartition;

/// Default feasibility tolerance on the normalized constraint rows.
pub const DEFAULT_FEAS_TOL: f64 = 1e-9;
/// Default iteration budget of the alternating projection.
pub const DEFAULT_MAX_ITER: usize = 5000;
/// Relative eigenvalue cutoff used when factoring `X`.
pub const RANK_CUTOFF: f64 = 1e-7;

const POLISH_EVERY: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct SdpInstance {
    u: DMatrix<f64>,
    /// Mean squared-edge-length functional per edge orbit.
    functionals: Vec<DMatrix<f64>>,
    orbit_sizes: Vec<usize>,
    /// Normalized equality rows acting on `svec(X)`.
    rows: DMatrix<f64>,
    rhs: DVector<f64>,
    pinv: DMatrix<f64>,
    degenerate: bool,
}

impl SdpInstance {
    /// One constraint per edge orbit of `orbits` (the first orbit is the
    /// reference), plus `tr X = 1`.
    pub fn new(g: &Graph, u: &DMatrix<f64>, orbits: &OrbitPartition) -> Result<Self, CertifyError> {
        let blocks: Vec<Vec<usize>> = orbits.edge_orbits().to_vec();
        Self::from_blocks(g, u, blocks)
    }

    /// Every edge is its own orbit.
    pub fn trivial(g: &Graph, u: &DMatrix<f64>) -> Result<Self, CertifyError> {
        Self::from_blocks(g, u, (0..g.m()).map(|e| vec![e]).collect())
    }

    fn from_blocks(
        g: &Graph,
        u: &DMatrix<f64>,
        blocks: Vec<Vec<usize>>,
    ) -> Result<Self, CertifyError> {
        let k = u.ncols();
        if k == 0 || u.nrows() != g.n() {
            return Err(CertifyError::InvalidInstance(format!(
                "basis is {}x{} for a graph on {} vertices",
                u.nrows(),
                k,
                g.n()
            )));
        }
        if blocks.is_empty() {
            return Err(CertifyError::InvalidInstance("graph has no edges".into()));
        }
        let functionals: Vec<DMatrix<f64>> = blocks
            .iter()
            .map(|block| {
                let mut c = DMatrix::zeros(k, k);
                for &e in block {
                    let (i, j) = g.edges()[e];
                    let w = (u.row(i) - u.row(j)).transpose();
                    c += &w * w.transpose();
                }
                c / block.len() as f64
            })
            .collect();
        let d = svec_len(k);
        let scale = functionals
            .iter()
            .map(|c| c.amax())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut rows: Vec<DVector<f64>> = Vec::new();
        let mut rhs = Vec::new();
        let mut degenerate = false;
        let reference = svec(&functionals[0]);
        for c in &functionals[1..] {
            let r = svec(c) - &reference;
            let norm = r.norm();
            if norm <= 1e-12 * scale {
                degenerate = true;
                continue;
            }
            rows.push(r / norm);
            rhs.push(0.0);
        }
        let trace = svec(&DMatrix::identity(k, k));
        let tn = trace.norm();
        rows.push(trace / tn);
        rhs.push(1.0 / tn);
        let a = DMatrix::from_fn(rows.len(), d, |r, c| rows[r][c]);
        if rank(&a, 1e-10) < rows.len() {
            degenerate = true;
        }
        let pinv = a
            .clone()
            .pseudo_inverse(1e-10)
            .map_err(|e| CertifyError::InvalidInstance(e.to_string()))?;
        Ok(Self {
            u: u.clone(),
            functionals,
            orbit_sizes: blocks.iter().map(Vec::len).collect(),
            rows: a,
            rhs: DVector::from_vec(rhs),
            pinv,
            degenerate,
        })
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.u
    }

    /// Eigenspace dimension.
    pub fn k(&self) -> usize {
        self.u.ncols()
    }

    pub fn functionals(&self) -> &[DMatrix<f64>] {
        &self.functionals
    }

    pub fn orbit_sizes(&self) -> &[usize] {
        &self.orbit_sizes
    }

    /// Number of equality rows kept after dropping vanishing ones.
    pub fn num_constraints(&self) -> usize {
        self.rows.nrows()
    }

    /// Whether some constraint vanished identically or the rows are
    /// dependent (the projector then uses the pseudo-inverse).
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Largest absolute violation of the normalized equality rows.
    pub fn residual(&self, x: &DMatrix<f64>) -> f64 {
        self.residual_svec(&svec(x))
    }

    fn residual_svec(&self, v: &DVector<f64>) -> f64 {
        (&self.rows * v - &self.rhs).amax()
    }

    /// Mean squared edge length of every orbit under `X`.
    pub fn orbit_values(&self, x: &DMatrix<f64>) -> Vec<f64> {
        self.functionals.iter().map(|c| c.dot(x)).collect()
    }

    fn project_affine(&self, v: &DVector<f64>) -> DVector<f64> {
        v - &self.pinv * (&self.rows * v - &self.rhs)
    }

    /// Minimum-norm correction of `x` onto the affine set within the face
    /// spanned by the range of `x`, kept only if it stays PSD.
    fn facial_polish(&self, x: &DMatrix<f64>) -> Option<DMatrix<f64>> {
        let eig = SymmetricEigen::new(x.clone());
        let top = eig.eigenvalues.max();
        if top <= 0.0 {
            return None;
        }
        let keep: Vec<usize> = (0..eig.eigenvalues.len())
            .filter(|&i| eig.eigenvalues[i] > 1e-8 * top)
            .collect();
        let v = DMatrix::from_columns(
            &keep
                .iter()
                .map(|&i| eig.eigenvectors.column(i))
                .collect::<Vec<_>>(),
        );
        let r = v.ncols();
        let z0 = svec(&(v.transpose() * x * &v));
        let m = DMatrix::from_fn(self.rows.nrows(), svec_len(r), |i, c| {
            let f = smat(&self.rows.row(i).transpose(), self.k());
            svec(&(v.transpose() * f * &v))[c]
        });
        let mp = m.clone().pseudo_inverse(1e-12).ok()?;
        let z = &z0 + mp * (&self.rhs - &m * &z0);
        let zm = smat(&z, r);
        let ze = SymmetricEigen::new(zm.clone());
        if ze.eigenvalues.min() < -1e-12 * ze.eigenvalues.amax().max(1.0) {
            return None;
        }
        let clipped = psd_clip(&zm);
        let out = &v * clipped * v.transpose();
        Some((&out + out.transpose()) * 0.5)
    }
}

fn psd_clip(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new((m + m.transpose()) * 0.5);
    let d = eig.eigenvalues.map(|x| x.max(0.0));
    &eig.eigenvectors * DMatrix::from_diagonal(&d) * eig.eigenvectors.transpose()
}

#[derive(Debug, Clone, PartialEq)]
pub enum SdpOutcome {
    /// `X ⪰ 0` meeting every row to the tolerance.
    Feasible {
        x: DMatrix<f64>,
        residual: f64,
        iterations: usize,
    },
    /// No feasible point found within the budget. This is not a proof of
    /// infeasibility.
    Undecided { residual: f64, iterations: usize },
}

impl SdpOutcome {
    pub fn residual(&self) -> f64 {
        match self {
            SdpOutcome::Feasible { residual, .. } | SdpOutcome::Undecided { residual, .. } => {
                *residual
            }
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, SdpOutcome::Feasible { .. })
    }
}

/// Dykstra alternating projection between the affine constraint set and the
/// PSD cone, started at `I/k`, with a periodic facial least-squares polish.
pub fn sdp_feasibility(inst: &SdpInstance, tol: f64, max_iter: usize) -> SdpOutcome {
    let k = inst.k();
    let start = DMatrix::identity(k, k) / k as f64;
    if inst.residual(&start) <= tol {
        return SdpOutcome::Feasible {
            residual: inst.residual(&start),
            x: start,
            iterations: 0,
        };
    }
    let mut x = svec(&start);
    let mut p = DVector::zeros(x.len());
    let mut q = DVector::zeros(x.len());
    let mut best = f64::INFINITY;
    for it in 1..=max_iter {
        let y = inst.project_affine(&(&x + &p));
        p = &x + &p - &y;
        let xm = psd_clip(&smat(&(&y + &q), k));
        let xn = svec(&xm);
        q = &y + &q - &xn;
        x = xn;
        let r = inst.residual_svec(&x);
        best = best.min(r);
        if r <= tol {
            return SdpOutcome::Feasible {
                x: xm,
                residual: r,
                iterations: it,
            };
        }
        if it % POLISH_EVERY == 0 || it == max_iter {
            if let Some(xp) = inst.facial_polish(&xm) {
                let rp = inst.residual(&xp);
                best = best.min(rp);
                if rp <= tol {
                    return SdpOutcome::Feasible {
                        x: xp,
                        residual: rp,
                        iterations: it,
                    };
                }
            }
        }
    }
    SdpOutcome::Undecided {
        residual: best,
        iterations: max_iter,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankReduction {
    pub x: DMatrix<f64>,
    pub rank: usize,
    /// Number of boundary moves performed.
    pub steps: usize,
    pub residual: f64,
}

/// Positive eigenpairs of `x` above the rank cutoff, as `V` with `X ≈ V Vᵀ`.
fn factor(x: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new((x + x.transpose()) * 0.5);
    let top = eig.eigenvalues.max();
    let cols: Vec<DVector<f64>> = (0..eig.eigenvalues.len())
        .filter(|&i| top > 0.0 && eig.eigenvalues[i] > RANK_CUTOFF * top)
        .map(|i| eig.eigenvectors.column(i) * eig.eigenvalues[i].sqrt())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(x.nrows(), 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Moves a feasible `X` along directions invisible to every constraint until
/// its rank drops, while `r(r+1)/2` exceeds the number of independent
/// constraints. Each step must stay within `10·tol` of feasibility.
pub fn rank_reduce(
    x: &DMatrix<f64>,
    inst: &SdpInstance,
    tol: f64,
) -> Result<RankReduction, CertifyError> {
    let k = inst.k();
    let mut v = factor(x);
    let initial = v.ncols();
    let mut cur = &v * v.transpose();
    if inst.residual(&cur) > 10.0 * tol {
        return Err(CertifyError::NumericalRankAmbiguity {
            rank: initial,
            residual: inst.residual(&cur),
        });
    }
    let mut steps = 0;
    while v.ncols() > 1 {
        let r = v.ncols();
        let fs: Vec<DMatrix<f64>> = (0..inst.rows.nrows())
            .map(|i| smat(&inst.rows.row(i).transpose(), k))
            .collect();
        let m = DMatrix::from_fn(fs.len(), svec_len(r), |i, c| {
            svec(&(v.transpose() * &fs[i] * &v))[c]
        });
        let null = null_space(&m, 1e-10);
        if null.ncols() == 0 {
            break;
        }
        let delta = smat(&null.column(0).into_owned(), r);
        let eig = SymmetricEigen::new(delta.clone());
        let (mu_max, mu_min) = (eig.eigenvalues.max(), eig.eigenvalues.min());
        // I + tΔ hits the boundary at the extreme eigenvalue of larger size
        let t = if mu_max >= -mu_min {
            -1.0 / mu_max
        } else {
            -1.0 / mu_min
        };
        let inner = DMatrix::identity(r, r) + delta * t;
        let next = &v * inner * v.transpose();
        let next = (&next + next.transpose()) * 0.5;
        v = factor(&next);
        cur = &v * v.transpose();
        steps += 1;
        let res = inst.residual(&cur);
        if res > 10.0 * tol || v.ncols() >= r {
            return Err(CertifyError::NumericalRankAmbiguity {
                rank: v.ncols(),
                residual: res,
            });
        }
    }
    Ok(RankReduction {
        residual: inst.residual(&cur),
        rank: v.ncols(),
        x: cur,
        steps,
    })
}

/// Gauss-Newton refinement of `a` on `{aᵀ F_i a = b_i}`. Returns the
/// refined vector when it lowers the residual.
pub(crate) fn polish_rank_one(inst: &SdpInstance, a: &DVector<f64>) -> DVector<f64> {
    let k = inst.k();
    let fs: Vec<DMatrix<f64>> = (0..inst.rows.nrows())
        .map(|i| smat(&inst.rows.row(i).transpose(), k))
        .collect();
    let res = |a: &DVector<f64>| -> DVector<f64> {
        DVector::from_fn(fs.len(), |i, _| a.dot(&(&fs[i] * a)) - inst.rhs[i])
    };
    let mut best = a.clone();
    let mut best_r = res(a).amax();
    let mut cur = a.clone();
    for _ in 0..8 {
        let r = res(&cur);
        let j = DMatrix::from_fn(fs.len(), k, |i, c| 2.0 * (&fs[i] * &cur)[c]);
        let Ok(jp) = j.pseudo_inverse(1e-12) else {
            break;
        };
        cur = &cur - jp * r;
        let rn = res(&cur).amax();
        if rn < best_r {
            best_r = rn;
            best = cur.clone();
        } else {
            break;
        }
    }
    best
}
