use super::{Graph, GraphError};

/// Parses `n m` on the first non-comment line followed by `m` lines `i j`.
/// Lines starting with `#` and blank lines are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, header) = lines.next().ok_or(GraphError::EdgeList {
        line: 1,
        msg: "missing `n m` header".into(),
    })?;
    let [n, m] = parse_pair(line, header)?;

    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        let [i, j] = parse_pair(line, l)?;
        if i >= n || j >= n {
            return Err(GraphError::EdgeList {
                line,
                msg: format!("vertex out of range 0..{n}"),
            });
        }
        if i == j {
            return Err(GraphError::EdgeList {
                line,
                msg: format!("loop at vertex {i}"),
            });
        }
        edges.push((i, j));
    }
    let g = Graph::new(n, edges)?;
    if g.m() != m {
        return Err(GraphError::EdgeList {
            line: 1,
            msg: format!("header declares {m} edges, found {} distinct", g.m()),
        });
    }
    Ok(g)
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2], GraphError> {
    let err = |msg: String| GraphError::EdgeList { line, msg };
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(err(format!("expected two integers, got {:?}", text)));
    }
    let parse = |s: &str| s.parse::<usize>().map_err(|e| err(format!("{s:?}: {e}")));
    Ok([parse(fields[0])?, parse(fields[1])?])
}

/// Writes the format read by [`parse_edge_list`].
pub fn emit_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for &(i, j) in g.edges() {
        out.push_str(&format!("{i} {j}\n"));
    }
    out
}
