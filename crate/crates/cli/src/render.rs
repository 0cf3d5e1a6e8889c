use std::fmt::Write;

use crg_core::certify::{EndReport, Verdict};
use crg_core::embeddings::EdgeProfile;
use crg_core::falsify::End;
use crg_core::RigidityReport;

use crate::commands::{verdict, FamilyRow};

fn name_of<T: serde::Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => "?".into(),
    }
}

fn spectrum_line(values: &[f64], mult: &[usize]) -> String {
    values
        .iter()
        .zip(mult)
        .map(|(v, m)| format!("{:.6}^{m}", v + 0.0))
        .collect::<Vec<_>>()
        .join(" ")
}

fn end(out: &mut String, e: &EndReport) {
    let label = match e.end {
        End::Lower => "lambda2  ",
        End::Upper => "lambdaMax",
    };
    let how = e
        .method
        .map(|m| format!(" via {}", name_of(&m)))
        .unwrap_or_default();
    let _ = writeln!(
        out,
        "{label} = {:.10} (multiplicity {}): {}{how}",
        e.eigenvalue,
        e.multiplicity,
        name_of(&e.verdict)
    );
    if let Some(c) = &e.certificate {
        let r = &c.residuals;
        let _ = writeln!(
            out,
            "  certificate: dimension {}, eigen residual {:.2e}, edge-length spread {:.2e}",
            r.embedding_dim, r.eigen_residual, r.relative_spread
        );
    }
    if let Some(rr) = &e.rank_reduction {
        let _ = writeln!(
            out,
            "  rank reduction ({}): {} -> {}",
            rr.stage, rr.initial_rank, rr.final_rank
        );
    }
    if let Some(w) = &e.witness {
        let _ = writeln!(
            out,
            "  witness: value {:.10} vs unit {:.10} (independent {:.10} vs {:.10}, gain {:.3e})",
            w.value, w.unit_value, w.independent_value, w.independent_unit_value, w.relative_gain
        );
        let weights: Vec<String> = w.weights.iter().map(|x| format!("{x:.6}")).collect();
        let _ = writeln!(out, "  weights: [{}]", weights.join(", "));
    }
    if e.verdict != Verdict::Certified {
        for a in &e.attempts {
            let _ = writeln!(out, "  {}: {}", a.stage, a.outcome);
        }
    }
}

pub fn report(r: &RigidityReport) -> String {
    let mut out = String::new();
    let t = &r.tolerances;
    let _ = writeln!(
        out,
        "graph {} (n = {}, m = {})",
        r.graph.name.as_deref().unwrap_or("<input>"),
        r.graph.n,
        r.graph.m
    );
    let _ = writeln!(
        out,
        "tolerances: group {:.1e}, iso {:.1e}, feas {:.1e}; seed {}; crg {}",
        t.group_tol, t.iso_tol, t.feas_tol, r.seed, r.tool_version
    );
    let _ = writeln!(
        out,
        "spectrum: {}",
        spectrum_line(&r.spectrum, &r.multiplicities)
    );
    let _ = writeln!(
        out,
        "walk1 {}, vertex-transitive {}, edge orbits {}, |Aut| {}",
        r.walk1,
        r.vertex_transitive,
        r.edge_orbits,
        r.automorphism_order.as_deref().unwrap_or("unknown")
    );
    end(&mut out, &r.lower);
    end(&mut out, &r.upper);
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    let _ = writeln!(out, "verdict: {}", verdict(r));
    out
}

pub fn embedding(eigenvalue: f64, multiplicity: usize, order: &[usize], p: &EdgeProfile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "eigenvalue {eigenvalue:.10}, dimension {multiplicity}");
    let order: Vec<String> = order.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(out, "order along x0: {}", order.join(" "));
    let _ = writeln!(
        out,
        "edge lengths: min {:.10}, max {:.10}, edge-isometric {}",
        p.min_length, p.max_length, p.is_edge_isometric
    );
    let _ = writeln!(
        out,
        "vertex norms: mean {:.10}, spherical {}",
        p.radius, p.is_spherical
    );
    out
}

pub fn family(rows: &[FamilyRow]) -> String {
    let mut out =
        String::from("   n   |V|  verdict     lambda2      lambdaMax    argmin argmax walk1\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>4} {:>5}  {:<10} {:>12.8} {:>12.8} {:>6} {:>6} {}",
            r.n, r.vertices, r.verdict, r.lambda2, r.lambda_max, r.argmin, r.argmax, r.walk1
        );
    }
    out
}

pub fn spectrum(values: &[f64], mult: &[usize], tol: f64) -> String {
    let mut out = format!("grouping tolerance {tol:.1e}\n");
    for (v, m) in values.iter().zip(mult) {
        let _ = writeln!(out, "{v:>20.12} x{m}");
    }
    out
}
