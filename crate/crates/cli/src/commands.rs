use std::collections::BTreeSet;
use std::fs;

use crg_core::certify::{check_conformal_rigidity, CheckOptions, Stage};
use crg_core::embeddings::{canonical_embedding, edge_length_profile, EdgeProfile};
use crg_core::graph::{circulant, circulant_spec, unit_laplacian};
use crg_core::par::Execution;
use crg_core::spectra::{circulant_curve_extremes, eigendecompose, GraphSpectrum};
use crg_core::RigidityReport;
use serde::Serialize;
use serde_json::Value;

use crate::args::{CheckArgs, EmbedArgs, FamilyArgs, SpectrumArgs};
use crate::error::{core, CliError, CliResult};
use crate::input::{load, load_generators};
use crate::render;

/// What to print and how to exit.
pub struct Output {
    pub stdout: String,
    pub code: u8,
}

/// `rigid`, `not rigid` or `undecided`, matching the exit code.
pub fn verdict(r: &RigidityReport) -> &'static str {
    match r.exit_code() {
        0 => "rigid",
        2 => "not rigid",
        _ => "undecided",
    }
}

fn json<T: Serialize>(value: &T) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn seed(flag: u64) -> CliResult<u64> {
    match std::env::var("CRG_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| {
            CliError::Input(format!("CRG_SEED must be a nonnegative integer, got '{s}'"))
        }),
        Err(_) => Ok(flag),
    }
}

pub fn check(a: &CheckArgs) -> CliResult<Output> {
    let loaded = load(&a.input)?;
    let generators = a
        .gens
        .as_deref()
        .map(|p| load_generators(p, loaded.graph.n()))
        .transpose()?;
    let skip = a
        .stage_skip
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<Stage>().map_err(core))
        .collect::<CliResult<BTreeSet<Stage>>>()?;
    let opts = CheckOptions {
        group_tol: a.tol_group,
        iso_tol: a.tol_iso,
        feas_tol: a.tol_feas,
        trials: a.trials,
        steps: a.steps,
        seed: seed(a.seed)?,
        skip,
        generators,
        cayley: loaded.cayley,
        execution: if a.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
        ..CheckOptions::default()
    };
    let report = check_conformal_rigidity(&loaded.graph, &opts).map_err(core)?;
    let stdout = if a.output.json {
        let mut v = serde_json::to_value(&report)?;
        if let Value::Object(map) = &mut v {
            map.insert("verdict".into(), verdict(&report).into());
        }
        json(&v)?
    } else {
        render::report(&report)
    };
    Ok(Output {
        stdout,
        code: report.exit_code() as u8,
    })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct EmbedReport {
    graph: Option<String>,
    n: usize,
    eigenvalue: f64,
    multiplicity: usize,
    /// Vertex indices sorted by the first coordinate.
    order: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Vec<f64>>>,
    profile: EdgeProfile,
}

pub fn embed(a: &EmbedArgs) -> CliResult<Output> {
    let loaded = load(&a.input)?;
    let g = &loaded.graph;
    let spec = GraphSpectrum::of(g, a.tol_group).map_err(core)?;
    let dec = spec.decomposition();
    let lambda = match a.at.to_ascii_lowercase().as_str() {
        "lambda2" => spec.lambda2(),
        "lambdamax" => spec.lambda_max(),
        other => {
            let v: f64 = other.parse().map_err(|_| {
                CliError::Input(format!(
                    "--at expects lambda2, lambdamax or a number, got '{other}'"
                ))
            })?;
            let idx = dec
                .index_of(v, None)
                .ok_or(CliError::UnknownEigenvalue(v))?;
            dec.eigenvalues()[idx]
        }
    };
    let e = canonical_embedding(g, dec, lambda).map_err(core)?;
    let profile = edge_length_profile(&e, g, a.tol_iso);
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&i, &j| e.points()[(i, 0)].total_cmp(&e.points()[(j, 0)]));
    let multiplicity = e.dim();
    let csv = e.to_csv();
    let to_file = a.out.is_some();
    if let Some(path) = &a.out {
        fs::write(path, &csv).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?;
    }
    let report = EmbedReport {
        graph: g.name().map(str::to_string),
        n: g.n(),
        eigenvalue: e.eigenvalue(),
        multiplicity,
        order,
        points: (a.output.json && !to_file).then(|| {
            e.points()
                .row_iter()
                .map(|r| r.iter().copied().collect())
                .collect()
        }),
        profile,
    };
    let stdout = if a.output.json {
        json(&report)?
    } else {
        let diag = render::embedding(
            report.eigenvalue,
            report.multiplicity,
            &report.order,
            &report.profile,
        );
        if to_file {
            diag
        } else {
            eprint!("{diag}");
            csv
        }
    };
    Ok(Output { stdout, code: 0 })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilyRow {
    pub n: u64,
    pub vertices: u64,
    pub verdict: &'static str,
    pub lower_method: Option<Value>,
    pub upper_method: Option<Value>,
    pub lambda2: f64,
    pub lambda_max: f64,
    pub argmin: usize,
    pub argmax: usize,
    pub walk1: bool,
    pub matches_prediction: bool,
}

pub fn family(a: &FamilyArgs) -> CliResult<Output> {
    if a.from < 6 || a.to > 64 || a.from > a.to {
        return Err(CliError::Range {
            from: a.from,
            to: a.to,
        });
    }
    let mut rows = Vec::new();
    let mut code = 0u8;
    for n in a.from..=a.to {
        let s = [1, n as i64 - 1];
        let g = circulant(3 * n, &s).map_err(core)?;
        let opts = CheckOptions {
            cayley: Some(circulant_spec(3 * n, &s).map_err(core)?),
            trials: a.trials,
            steps: 100,
            ..CheckOptions::default()
        };
        let r = check_conformal_rigidity(&g, &opts).map_err(core)?;
        let ext = circulant_curve_extremes(n).map_err(core)?;
        code = match (code, r.exit_code() as u8) {
            (2, _) | (_, 2) => 2,
            (c, 0) => c,
            (_, c) => c,
        };
        rows.push(FamilyRow {
            n,
            vertices: 3 * n,
            verdict: verdict(&r),
            lower_method: r.lower.method.map(serde_json::to_value).transpose()?,
            upper_method: r.upper.method.map(serde_json::to_value).transpose()?,
            lambda2: r.lambda2,
            lambda_max: r.lambda_max,
            argmin: ext.argmin,
            argmax: ext.argmax,
            walk1: r.walk1,
            matches_prediction: ext.matches_prediction,
        });
    }
    let stdout = if a.output.json {
        json(&rows)?
    } else {
        render::family(&rows)
    };
    Ok(Output { stdout, code })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SpectrumReport {
    graph: Option<String>,
    n: usize,
    m: usize,
    group_tol: f64,
    eigenvalues: Vec<f64>,
    multiplicities: Vec<usize>,
    raw: Vec<f64>,
}

pub fn spectrum(a: &SpectrumArgs) -> CliResult<Output> {
    let g = load(&a.input)?.graph;
    let dec = eigendecompose(&unit_laplacian(&g), a.tol_group).map_err(core)?;
    let report = SpectrumReport {
        graph: g.name().map(str::to_string),
        n: g.n(),
        m: g.m(),
        group_tol: dec.group_tol(),
        eigenvalues: dec.eigenvalues().to_vec(),
        multiplicities: dec.multiplicities().to_vec(),
        raw: dec.raw().to_vec(),
    };
    let stdout = if a.output.json {
        json(&report)?
    } else {
        render::spectrum(
            &report.eigenvalues,
            &report.multiplicities,
            report.group_tol,
        )
    };
    Ok(Output { stdout, code: 0 })
}
