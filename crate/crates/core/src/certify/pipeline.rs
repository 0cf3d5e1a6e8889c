use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{
    abelian_lp_certificate, character_embedding, eigenvector_certificate, matrix_rows, rank_reduce,
    sdp_feasibility, verify, Certificate, CertificateKind, CertifyError, LpOutcome, SdpInstance,
    SdpOptions, SdpOutcome, DEFAULT_FEAS_TOL, DEFAULT_MAX_ITER, LP_FEASIBLE, LP_INFEASIBLE,
};
use crate::embeddings::{canonical_embedding, Embedding, EmbeddingSource, DEFAULT_ISO_TOL};
use crate::falsify::{
    random_weight_search_with, subgradient_ascent, End, FalsifierResult, IMPROVEMENT_MARGIN,
};
use crate::graph::{cayley_abelian, laplacian, unit_laplacian, CayleySpec, Graph};
use crate::par::{join, Execution};
use crate::spectra::{character_spectrum, GraphSpectrum};
use crate::symmetry::{
    find_automorphisms, orbits, OrbitPartition, PermutationSet, SymmetryError, DEFAULT_GROUP_CAP,
    DEFAULT_NODE_BUDGET,
};
use crate::walkreg::{walk_regularity, WalkError};

/// Cascade stages, in the order they are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    CharacterLp,
    EdgeTransitive,
    Walk1,
    Canonical,
    SymmetrizedSdp,
    TrivialSdp,
    Falsify,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::CharacterLp,
        Stage::EdgeTransitive,
        Stage::Walk1,
        Stage::Canonical,
        Stage::SymmetrizedSdp,
        Stage::TrivialSdp,
        Stage::Falsify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::CharacterLp => "character-lp",
            Stage::EdgeTransitive => "edge-transitive",
            Stage::Walk1 => "walk1",
            Stage::Canonical => "canonical",
            Stage::SymmetrizedSdp => "symmetrized-sdp",
            Stage::TrivialSdp => "trivial-sdp",
            Stage::Falsify => "falsify",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = CertifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s.trim())
            .ok_or_else(|| CertifyError::InvalidOption(format!("unknown stage '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Certified,
    Refuted,
    Undecided,
}

/// How an end was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    EdgeTransitive,
    OneWalkRegular,
    CanonicalIsometric,
    #[serde(rename = "CharacterLP")]
    CharacterLp,
    Eigenvector,
    SdpGram,
    Product,
    Falsifier,
}

/// Weights beating the unit value, with both evaluations.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Witness {
    /// Normalized to sum `|E|`.
    pub weights: Vec<f64>,
    pub value: f64,
    pub unit_value: f64,
    /// The same two numbers from an independent eigensolver.
    pub independent_value: f64,
    pub independent_unit_value: f64,
    pub relative_gain: f64,
    pub trials: usize,
    pub steps: usize,
}

/// Outcome of rank reduction for one end.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RankRecord {
    pub stage: Stage,
    pub initial_rank: usize,
    pub final_rank: usize,
    pub reached_eigenvector: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StageAttempt {
    pub stage: Stage,
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EndReport {
    pub end: End,
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub verdict: Verdict,
    pub method: Option<Method>,
    pub certificate: Option<Certificate>,
    pub witness: Option<Witness>,
    pub rank_reduction: Option<RankRecord>,
    pub attempts: Vec<StageAttempt>,
    #[serde(skip)]
    embedding: Option<Embedding>,
}

impl EndReport {
    /// The re-verified embedding behind a certificate.
    pub fn embedding(&self) -> Option<&Embedding> {
        self.embedding.as_ref()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphInfo {
    pub name: Option<String>,
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Tolerances {
    pub group_tol: f64,
    pub iso_tol: f64,
    pub feas_tol: f64,
    pub lp_feasible: f64,
    pub lp_infeasible: f64,
    pub improvement_margin: f64,
}

/// Wall-clock milliseconds.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Timings {
    pub spectrum: f64,
    pub symmetry: f64,
    pub walk: f64,
    pub lower: f64,
    pub upper: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RigidityReport {
    pub graph: GraphInfo,
    pub lambda2: f64,
    pub lambda_max: f64,
    /// Both ends certified.
    pub rigid: bool,
    pub lower: EndReport,
    pub upper: EndReport,
    pub walk1: bool,
    pub vertex_transitive: bool,
    pub edge_orbits: usize,
    /// Order of the automorphism group found by the search, if it completed.
    pub automorphism_order: Option<String>,
    pub generators: usize,
    pub spectrum: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub seed: u64,
    pub tool_version: String,
    pub tolerances: Tolerances,
    pub timings: Timings,
    pub notes: Vec<String>,
}

impl RigidityReport {
    /// 0 when both ends are certified, 2 when some end is refuted, 3 when
    /// some end is undecided and none is refuted.
    pub fn exit_code(&self) -> i32 {
        let v = [self.lower.verdict, self.upper.verdict];
        if v.contains(&Verdict::Refuted) {
            2
        } else if v.contains(&Verdict::Undecided) {
            3
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOptions {
    /// Eigenvalue grouping tolerance; `None` uses the spectral default.
    pub group_tol: Option<f64>,
    pub iso_tol: f64,
    pub feas_tol: f64,
    pub sdp_max_iter: usize,
    pub trials: usize,
    pub steps: usize,
    pub seed: u64,
    pub skip: BTreeSet<Stage>,
    /// Automorphisms to use instead of searching.
    pub generators: Option<PermutationSet>,
    /// The input as an abelian Cayley graph (vertex `i` is `spec.element(i)`).
    pub cayley: Option<CayleySpec>,
    pub aut_budget: usize,
    pub group_cap: usize,
    pub execution: Execution,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            group_tol: None,
            iso_tol: DEFAULT_ISO_TOL,
            feas_tol: DEFAULT_FEAS_TOL,
            sdp_max_iter: DEFAULT_MAX_ITER,
            trials: 1000,
            steps: 500,
            seed: 0,
            skip: BTreeSet::new(),
            generators: None,
            cayley: None,
            aut_budget: DEFAULT_NODE_BUDGET,
            group_cap: DEFAULT_GROUP_CAP,
            execution: Execution::default(),
        }
    }
}

impl CheckOptions {
    fn validate(&self) -> Result<(), CertifyError> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(CertifyError::InvalidOption(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        positive("iso_tol", self.iso_tol)?;
        positive("feas_tol", self.feas_tol)?;
        if let Some(t) = self.group_tol {
            positive("group_tol", t)?;
        }
        Ok(())
    }

    fn sdp(&self) -> SdpOptions {
        SdpOptions {
            feas_tol: self.feas_tol,
            max_iter: self.sdp_max_iter,
            iso_tol: self.iso_tol,
            group_cap: self.group_cap,
        }
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

struct Context<'a> {
    g: &'a Graph,
    spectrum: GraphSpectrum,
    generators: PermutationSet,
    orbits: OrbitPartition,
    walk1: bool,
    vertex_transitive: bool,
    opts: &'a CheckOptions,
}

/// Decides lower and upper conformal rigidity of a connected graph by running
/// the certificate cascade at `λ₂` and `λₙ`.
pub fn check_conformal_rigidity(
    g: &Graph,
    opts: &CheckOptions,
) -> Result<RigidityReport, CertifyError> {
    let start = Instant::now();
    opts.validate()?;
    if g.n() < 2 || !g.is_connected() {
        return Err(CertifyError::Disconnected);
    }
    let mut notes = Vec::new();

    let t = Instant::now();
    let spectrum = GraphSpectrum::of(g, opts.group_tol)?;
    let t_spectrum = ms(t);

    if let Some(spec) = &opts.cayley {
        let h = cayley_abelian(spec);
        if h.n() != g.n() || h.m() != g.m() || !h.edges().iter().all(|&(i, j)| g.has_edge(i, j)) {
            return Err(CertifyError::SpecMismatch);
        }
    }

    let t = Instant::now();
    let mut automorphism_order = None;
    let mut generators = match &opts.generators {
        Some(p) => {
            p.check_automorphisms(g)?;
            p.clone()
        }
        None => match find_automorphisms(g, opts.aut_budget) {
            Ok(search) => {
                if search.exhausted() {
                    notes.push(
                        "automorphism search budget exhausted; using the generators found".into(),
                    );
                }
                automorphism_order = search.order().map(|o| o.to_string());
                search.into_generators()
            }
            Err(SymmetryError::TooLarge { .. }) => {
                notes.push("graph too large for automorphism search".into());
                PermutationSet::trivial(g.n())
            }
            Err(e) => return Err(e.into()),
        },
    };
    if let Some(spec) = &opts.cayley {
        generators = generators.extended(&spec.translation_generators())?;
    }
    let orbits = orbits(g, &generators)?;
    let t_symmetry = ms(t);

    let t = Instant::now();
    let walk1 = match walk_regularity(g) {
        Ok(r) => r.walk1,
        Err(WalkError::NotRegular { .. }) => false,
        Err(e) => return Err(e.into()),
    };
    let t_walk = ms(t);

    let ctx = Context {
        g,
        vertex_transitive: orbits.num_vertex_orbits() == 1,
        orbits,
        generators,
        spectrum,
        walk1,
        opts,
    };
    let ((lower, t_lower), (upper, t_upper)) = join(
        opts.execution,
        || {
            let t = Instant::now();
            (run_end(&ctx, End::Lower), ms(t))
        },
        || {
            let t = Instant::now();
            (run_end(&ctx, End::Upper), ms(t))
        },
    );
    let (lower, upper) = (lower?, upper?);
    let dec = ctx.spectrum.decomposition();
    Ok(RigidityReport {
        graph: GraphInfo {
            name: g.name().map(str::to_owned),
            n: g.n(),
            m: g.m(),
        },
        lambda2: ctx.spectrum.lambda2(),
        lambda_max: ctx.spectrum.lambda_max(),
        rigid: lower.verdict == Verdict::Certified && upper.verdict == Verdict::Certified,
        lower,
        upper,
        walk1,
        vertex_transitive: ctx.vertex_transitive,
        edge_orbits: ctx.orbits.num_edge_orbits(),
        automorphism_order,
        generators: ctx.generators.gens().len(),
        spectrum: dec.eigenvalues().to_vec(),
        multiplicities: dec.multiplicities().to_vec(),
        seed: opts.seed,
        tool_version: crate::TOOL_VERSION.to_string(),
        tolerances: Tolerances {
            group_tol: dec.group_tol(),
            iso_tol: opts.iso_tol,
            feas_tol: opts.feas_tol,
            lp_feasible: LP_FEASIBLE,
            lp_infeasible: LP_INFEASIBLE,
            improvement_margin: IMPROVEMENT_MARGIN,
        },
        timings: Timings {
            spectrum: t_spectrum,
            symmetry: t_symmetry,
            walk: t_walk,
            lower: t_lower,
            upper: t_upper,
            total: ms(start),
        },
        notes,
    })
}

struct Found {
    method: Method,
    certificate: Certificate,
    embedding: Embedding,
}

enum StageResult {
    Done(Box<Found>),
    Next(String),
}

fn run_end(ctx: &Context<'_>, end: End) -> Result<EndReport, CertifyError> {
    let dec = ctx.spectrum.decomposition();
    let idx = match end {
        End::Lower => ctx.spectrum.lambda2_index(),
        End::Upper => ctx.spectrum.lambda_max_index(),
    };
    let lambda = dec.eigenvalues()[idx];
    let mut attempts = Vec::new();
    let mut rank_record = None;
    let mut lp_infeasible = false;

    for stage in Stage::ALL {
        if stage == Stage::Falsify {
            break;
        }
        if ctx.opts.skip.contains(&stage) {
            attempts.push(StageAttempt {
                stage,
                outcome: "skipped".into(),
            });
            continue;
        }
        if lp_infeasible && matches!(stage, Stage::SymmetrizedSdp | Stage::TrivialSdp) {
            attempts.push(StageAttempt {
                stage,
                outcome: "not run: the character LP is infeasible".into(),
            });
            continue;
        }
        let result = match stage {
            Stage::CharacterLp => character_stage(ctx, end, lambda, &mut lp_infeasible),
            Stage::EdgeTransitive => {
                if ctx.orbits.num_edge_orbits() == 1 {
                    canonical_stage(ctx, end, lambda, Method::EdgeTransitive)
                } else {
                    Ok(StageResult::Next(format!(
                        "not applicable: {} edge orbits",
                        ctx.orbits.num_edge_orbits()
                    )))
                }
            }
            Stage::Walk1 => {
                if ctx.walk1 {
                    canonical_stage(ctx, end, lambda, Method::OneWalkRegular)
                } else {
                    Ok(StageResult::Next(
                        "not applicable: not 1-walk regular".into(),
                    ))
                }
            }
            Stage::Canonical => canonical_stage(ctx, end, lambda, Method::CanonicalIsometric),
            Stage::SymmetrizedSdp => symmetrized_stage(ctx, end, lambda, &mut rank_record),
            Stage::TrivialSdp => trivial_stage(ctx, end, lambda, &mut rank_record),
            Stage::Falsify => unreachable!(),
        };
        match result {
            Ok(StageResult::Done(found)) => {
                attempts.push(StageAttempt {
                    stage,
                    outcome: "certified".into(),
                });
                return Ok(EndReport {
                    end,
                    eigenvalue: lambda,
                    multiplicity: dec.multiplicities()[idx],
                    verdict: Verdict::Certified,
                    method: Some(found.method),
                    certificate: Some(found.certificate),
                    witness: None,
                    rank_reduction: rank_record,
                    attempts,
                    embedding: Some(found.embedding),
                });
            }
            Ok(StageResult::Next(outcome)) => attempts.push(StageAttempt { stage, outcome }),
            Err(e) => attempts.push(StageAttempt {
                stage,
                outcome: format!("failed: {e}"),
            }),
        }
    }

    let mut witness = None;
    if ctx.opts.skip.contains(&Stage::Falsify) {
        attempts.push(StageAttempt {
            stage: Stage::Falsify,
            outcome: "skipped".into(),
        });
    } else {
        let steps = if lp_infeasible {
            4 * ctx.opts.steps
        } else {
            ctx.opts.steps
        };
        let (outcome, w) = falsify_stage(ctx.g, end, ctx.opts, steps)?;
        attempts.push(StageAttempt {
            stage: Stage::Falsify,
            outcome,
        });
        witness = w;
    }
    let refuted = witness.is_some();
    Ok(EndReport {
        end,
        eigenvalue: lambda,
        multiplicity: dec.multiplicities()[idx],
        verdict: if refuted {
            Verdict::Refuted
        } else {
            Verdict::Undecided
        },
        method: refuted.then_some(Method::Falsifier),
        certificate: None,
        witness,
        rank_reduction: rank_record,
        attempts,
        embedding: None,
    })
}

fn certificate(
    ctx: &Context<'_>,
    kind: CertificateKind,
    end: End,
    e: &Embedding,
    constraint: Option<f64>,
) -> Result<Certificate, CertifyError> {
    let (residuals, _) = verify(
        ctx.g,
        e,
        ctx.opts.iso_tol,
        ctx.spectrum.decomposition().group_tol(),
        constraint,
    )?;
    Ok(Certificate {
        kind,
        end,
        eigenvalue: e.eigenvalue(),
        residuals,
    })
}

fn canonical_stage(
    ctx: &Context<'_>,
    end: End,
    lambda: f64,
    method: Method,
) -> Result<StageResult, CertifyError> {
    let e = canonical_embedding(ctx.g, ctx.spectrum.decomposition(), lambda)?;
    let kind = match method {
        Method::EdgeTransitive => CertificateKind::EdgeTransitive { edge_orbits: 1 },
        Method::OneWalkRegular => CertificateKind::OneWalkRegular,
        _ => CertificateKind::CanonicalIsometric,
    };
    match certificate(ctx, kind, end, &e, None) {
        Ok(certificate) => Ok(StageResult::Done(Box::new(Found {
            method,
            certificate,
            embedding: e,
        }))),
        Err(CertifyError::VerificationFailed(msg)) => Ok(StageResult::Next(format!(
            "canonical embedding not edge-isometric: {msg}"
        ))),
        Err(e) => Err(e),
    }
}

fn character_stage(
    ctx: &Context<'_>,
    end: End,
    lambda: f64,
    infeasible: &mut bool,
) -> Result<StageResult, CertifyError> {
    let Some(spec) = &ctx.opts.cayley else {
        return Ok(StageResult::Next("not applicable: no Cayley spec".into()));
    };
    let tol = ctx.spectrum.decomposition().group_tol();
    match abelian_lp_certificate(spec, lambda, tol)? {
        LpOutcome::Certified(c) => {
            let table = character_spectrum(spec);
            let e = character_embedding(&table, &c.characters, &c.coefficients, lambda)?;
            let infeas = c.infeasibility;
            let cert = certificate(ctx, CertificateKind::CharacterLp(c), end, &e, Some(infeas))?;
            Ok(StageResult::Done(Box::new(Found {
                method: Method::CharacterLp,
                certificate: cert,
                embedding: e,
            })))
        }
        LpOutcome::NotInPolytope { infeasibility } => {
            *infeasible = true;
            Ok(StageResult::Next(format!(
                "infeasible (phase-1 optimum {infeasibility:.3e})"
            )))
        }
        LpOutcome::Degenerate {
            infeasibility,
            reason,
        } => Ok(StageResult::Next(format!(
            "degenerate (phase-1 optimum {infeasibility:.3e}): {reason}"
        ))),
    }
}

fn symmetrized_stage(
    ctx: &Context<'_>,
    end: End,
    lambda: f64,
    record: &mut Option<RankRecord>,
) -> Result<StageResult, CertifyError> {
    if !ctx.vertex_transitive {
        return Ok(StageResult::Next(
            "not applicable: not vertex-transitive".into(),
        ));
    }
    let dec = ctx.spectrum.decomposition();
    let Some(c) = eigenvector_certificate(ctx.g, dec, lambda, &ctx.generators, &ctx.opts.sdp())?
    else {
        return Ok(StageResult::Next(
            "undecided: no feasible Gram matrix found".into(),
        ));
    };
    *record = Some(RankRecord {
        stage: Stage::SymmetrizedSdp,
        initial_rank: c.initial_rank,
        final_rank: c.rank,
        reached_eigenvector: c.phi.is_some(),
    });
    let (method, kind) = match (&c.phi, &c.phi_psi) {
        (Some(phi), Some(psi)) => (
            Method::Eigenvector,
            CertificateKind::Eigenvector {
                phi: phi.iter().copied().collect(),
                phi_psi: psi.values.clone(),
                group_order: c.group_order,
                rank_reduction_steps: c.rank_reduction_steps,
            },
        ),
        _ => (
            Method::SdpGram,
            CertificateKind::SdpGram {
                x: matrix_rows(&c.x),
                rank: c.rank,
                group_order: c.group_order,
            },
        ),
    };
    Ok(StageResult::Done(Box::new(Found {
        method,
        certificate: Certificate {
            kind,
            end,
            eigenvalue: lambda,
            residuals: c.residuals,
        },
        embedding: c.embedding,
    })))
}

fn trivial_stage(
    ctx: &Context<'_>,
    end: End,
    lambda: f64,
    record: &mut Option<RankRecord>,
) -> Result<StageResult, CertifyError> {
    let dec = ctx.spectrum.decomposition();
    let u = dec.basis(dec.index_of(lambda, None).expect("end eigenvalue"));
    let inst = SdpInstance::trivial(ctx.g, u)?;
    let x = match sdp_feasibility(&inst, ctx.opts.feas_tol, ctx.opts.sdp_max_iter) {
        SdpOutcome::Feasible { x, .. } => x,
        SdpOutcome::Undecided {
            residual,
            iterations,
        } => {
            return Ok(StageResult::Next(format!(
                "undecided after {iterations} iterations (residual {residual:.3e})"
            )))
        }
    };
    let initial = crate::linalg::rank(&x, super::sdp::RANK_CUTOFF);
    let red = rank_reduce(&x, &inst, ctx.opts.feas_tol)?;
    if record.is_none() {
        *record = Some(RankRecord {
            stage: Stage::TrivialSdp,
            initial_rank: initial,
            final_rank: red.rank,
            reached_eigenvector: red.rank == 1,
        });
    }
    let eig = SymmetricEigen::new(red.x.clone());
    let v = DMatrix::from_fn(u.ncols(), u.ncols(), |i, j| {
        eig.eigenvectors[(i, j)] * eig.eigenvalues[j].max(0.0).sqrt()
    });
    let e = Embedding::new(
        &unit_laplacian(ctx.g),
        u * v,
        lambda,
        EmbeddingSource::Explicit,
    )?;
    let cert = certificate(
        ctx,
        CertificateKind::SdpGram {
            x: matrix_rows(&red.x),
            rank: red.rank,
            group_order: 1,
        },
        end,
        &e,
        Some(red.residual),
    )?;
    Ok(StageResult::Done(Box::new(Found {
        method: Method::SdpGram,
        certificate: cert,
        embedding: e,
    })))
}

/// Extreme eigenvalue of `L(w)` from nalgebra's solver, independent of the
/// Jacobi routine used during the search.
fn independent_value(
    g: &Graph,
    w: &crate::graph::WeightVector,
    end: End,
) -> Result<f64, CertifyError> {
    let l = laplacian(g, Some(w))?;
    let mut ev: Vec<f64> = SymmetricEigen::new(l).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(match end {
        End::Lower => ev[1],
        End::Upper => ev[g.n() - 1],
    })
}

fn falsify_stage(
    g: &Graph,
    end: End,
    opts: &CheckOptions,
    steps: usize,
) -> Result<(String, Option<Witness>), CertifyError> {
    let random = random_weight_search_with(g, end, opts.trials, opts.seed, opts.execution)?;
    let start = random.improved.then_some(&random.best_w);
    let descent = subgradient_ascent(g, end, start, steps, opts.seed)?;
    let better = |a: &FalsifierResult, b: &FalsifierResult| match end {
        End::Lower => a.best_value > b.best_value,
        End::Upper => a.best_value < b.best_value,
    };
    let best = if better(&descent, &random) {
        &descent
    } else {
        &random
    };
    if !best.improved {
        return Ok((
            format!(
                "no improvement in {} trials and {} steps (best {:.12} vs unit {:.12})",
                opts.trials, steps, best.best_value, best.unit_value
            ),
            None,
        ));
    }
    let iv = independent_value(g, &best.best_w, end)?;
    let iu = independent_value(g, &crate::graph::WeightVector::unit(g.m()), end)?;
    if !end.improves(iv, iu) {
        return Ok((
            format!("candidate {iv:.12} did not beat {iu:.12} on re-evaluation"),
            None,
        ));
    }
    let gain = (iv - iu).abs() / iu.abs();
    Ok((
        format!("witness found (relative gain {gain:.3e})"),
        Some(Witness {
            weights: best.best_w.as_slice().to_vec(),
            value: best.best_value,
            unit_value: best.unit_value,
            independent_value: iv,
            independent_unit_value: iu,
            relative_gain: gain,
            trials: opts.trials,
            steps,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{catalog, circulant, circulant_spec};

    fn quick() -> CheckOptions {
        CheckOptions {
            trials: 300,
            steps: 300,
            ..CheckOptions::default()
        }
    }

    #[test]
    fn hoffman_is_one_walk_regular() {
        let r = check_conformal_rigidity(&catalog("hoffman").unwrap(), &quick()).unwrap();
        assert!(r.rigid);
        assert_eq!(r.lower.method, Some(Method::OneWalkRegular));
        assert_eq!(r.upper.method, Some(Method::OneWalkRegular));
        assert!(!r.vertex_transitive);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn prism_is_refuted() {
        let r = check_conformal_rigidity(&catalog("triangular_prism").unwrap(), &quick()).unwrap();
        assert_eq!(r.lower.verdict, Verdict::Refuted);
        let w = r.lower.witness.as_ref().unwrap();
        assert!(w.independent_value > w.independent_unit_value * (1.0 + 1e-6));
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn circulant_via_character_lp() {
        let opts = CheckOptions {
            cayley: Some(circulant_spec(18, &[1, 5]).unwrap()),
            ..quick()
        };
        let r = check_conformal_rigidity(&circulant(18, &[1, 5]).unwrap(), &opts).unwrap();
        assert!(r.rigid);
        assert_eq!(r.lower.method, Some(Method::CharacterLp));
    }

    #[test]
    fn skipping_lp_falls_through_to_later_stages() {
        let mut opts = CheckOptions {
            cayley: Some(circulant_spec(18, &[1, 5]).unwrap()),
            ..quick()
        };
        opts.skip.insert(Stage::CharacterLp);
        opts.skip.insert(Stage::Canonical);
        let r = check_conformal_rigidity(&circulant(18, &[1, 5]).unwrap(), &opts).unwrap();
        assert_eq!(r.lower.method, Some(Method::Eigenvector));
        assert!(r.lower.rank_reduction.as_ref().unwrap().reached_eigenvector);
    }

    #[test]
    fn everything_skipped_is_undecided() {
        let opts = CheckOptions {
            skip: Stage::ALL.into_iter().collect(),
            ..quick()
        };
        let r = check_conformal_rigidity(&catalog("cycle_5").unwrap(), &opts).unwrap();
        assert_eq!(r.lower.verdict, Verdict::Undecided);
        assert_eq!(r.exit_code(), 3);
    }

    #[test]
    fn mismatched_spec_and_bad_options() {
        let opts = CheckOptions {
            cayley: Some(circulant_spec(6, &[1]).unwrap()),
            ..quick()
        };
        assert_eq!(
            check_conformal_rigidity(&catalog("complete_6").unwrap(), &opts).unwrap_err(),
            CertifyError::SpecMismatch
        );
        let opts = CheckOptions {
            iso_tol: 0.0,
            ..quick()
        };
        assert!(matches!(
            check_conformal_rigidity(&catalog("cycle_5").unwrap(), &opts),
            Err(CertifyError::InvalidOption(_))
        ));
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            check_conformal_rigidity(&g, &quick()).unwrap_err(),
            CertifyError::Disconnected
        );
    }

    #[test]
    fn stage_names_round_trip() {
        for s in Stage::ALL {
            assert_eq!(s.name().parse::<Stage>().unwrap(), s);
        }
        assert!("bogus".parse::<Stage>().is_err());
    }

    #[test]
    fn report_serializes() {
        let r = check_conformal_rigidity(&catalog("cycle_6").unwrap(), &quick()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["lower"]["verdict"], "Certified");
        assert_eq!(v["lower"]["method"], "EdgeTransitive");
        assert_eq!(v["graph"]["n"], 6);
        assert!(v["toolVersion"].is_string());
    }
}
