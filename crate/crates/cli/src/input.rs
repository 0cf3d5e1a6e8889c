use std::fs;
use std::path::Path;

use crg_core::graph::{
    cayley_abelian, circulant, circulant_spec, parse_edge_list, parse_graph6, CayleySpec,
};
use crg_core::symmetry::PermutationSet;
use crg_core::{catalog, Graph};

use crate::args::InputArgs;
use crate::error::{core, CliError, CliResult};

/// A parsed input graph, with its Cayley structure when it came from one.
pub struct Loaded {
    pub graph: Graph,
    pub cayley: Option<CayleySpec>,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_ints(text: &str) -> CliResult<Vec<i64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Input(format!("expected an integer, got '{t}'")))
        })
        .collect()
}

fn parse_cayley(values: &[String]) -> CliResult<CayleySpec> {
    let orders = parse_ints(&values[0])?
        .into_iter()
        .map(|o| u64::try_from(o).map_err(|_| CliError::Input(format!("negative group order {o}"))))
        .collect::<CliResult<Vec<u64>>>()?;
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for v in &values[1..] {
        let g = parse_ints(v)?;
        let neg: Vec<i64> = g.iter().map(|x| -x).collect();
        gens.push(g);
        gens.push(neg);
    }
    CayleySpec::new(orders, gens).map_err(core)
}

pub fn load(input: &InputArgs) -> CliResult<Loaded> {
    let plain = |graph: Graph| Loaded {
        graph,
        cayley: None,
    };
    if let Some(name) = &input.catalog {
        return Ok(plain(catalog(name).map_err(core)?));
    }
    if let Some(path) = &input.graph6 {
        return Ok(plain(parse_graph6(read(path)?.trim()).map_err(core)?));
    }
    if let Some(path) = &input.edges {
        return Ok(plain(parse_edge_list(&read(path)?).map_err(core)?));
    }
    if let Some(v) = &input.circulant {
        let n: u64 = v[0].trim().parse().map_err(|_| {
            CliError::Input(format!(
                "circulant order must be a positive integer, got '{}'",
                v[0]
            ))
        })?;
        let s = parse_ints(&v[1])?;
        return Ok(Loaded {
            graph: circulant(n, &s).map_err(core)?,
            cayley: Some(circulant_spec(n, &s).map_err(core)?),
        });
    }
    let Some(v) = &input.cayley else {
        return Err(CliError::Input("no input graph given".into()));
    };
    let spec = parse_cayley(v)?;
    Ok(Loaded {
        graph: cayley_abelian(&spec).with_name(format!("cayley_{}", v.join("_"))),
        cayley: Some(spec),
    })
}

/// One permutation per line as whitespace-separated images; `#` starts a
/// comment.
pub fn load_generators(path: &Path, n: usize) -> CliResult<PermutationSet> {
    let text = read(path)?;
    let mut gens = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let perm = line
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| {
                CliError::Input(format!(
                    "{}:{}: bad permutation entry",
                    path.display(),
                    lineno + 1
                ))
            })?;
        gens.push(perm);
    }
    PermutationSet::new(n, gens).map_err(core)
}
