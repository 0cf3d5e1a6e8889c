use super::{Graph, GraphError};

const HEADER: &str = ">>graph6<<";
const MAX_N: usize = (1 << 18) - 1;

/// Decodes one graph6 record. A trailing newline and the optional
/// `>>graph6<<` header are accepted.
pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    let text = text.strip_prefix(HEADER).unwrap_or(text);
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    if bytes.is_empty() {
        return Err(GraphError::EmptyRecord);
    }
    if let Some((offset, &byte)) = bytes
        .iter()
        .enumerate()
        .find(|(_, b)| !(63..=126).contains(*b))
    {
        return Err(GraphError::InvalidChar { offset, byte });
    }

    let (n, data) = if bytes[0] == 126 {
        if bytes.len() < 4 {
            return Err(GraphError::TruncatedBits {
                expected: 3,
                found: bytes.len() - 1,
            });
        }
        if bytes[1] == 126 {
            // 8-byte size form, n >= 2^18
            return Err(GraphError::TooLarge { n: MAX_N + 1 });
        }
        let n = bytes[1..4]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        (n, &bytes[4..])
    } else {
        ((bytes[0] - 63) as usize, &bytes[1..])
    };

    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    if data.len() < expected {
        return Err(GraphError::TruncatedBits {
            expected,
            found: data.len(),
        });
    }
    if data.len() > expected {
        return Err(GraphError::TrailingBytes {
            extra: data.len() - expected,
        });
    }

    let mut edges = Vec::new();
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = data[k / 6] - 63;
            if byte & (1 << (5 - k % 6)) != 0 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::new(n, edges)
}

/// Encodes `g` as a graph6 record (no header, no newline).
pub fn emit_graph6(g: &Graph) -> Result<String, GraphError> {
    let n = g.n();
    if n > MAX_N {
        return Err(GraphError::TooLarge { n });
    }
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        out.extend([(n >> 12) & 63, (n >> 6) & 63, n & 63].map(|v| v as u8 + 63));
    }

    let nbits = n * n.saturating_sub(1) / 2;
    let mut bits = vec![0u8; nbits.div_ceil(6)];
    for &(i, j) in g.edges() {
        // column-major upper triangle: x(0,1), x(0,2), x(1,2), x(0,3), ...
        let k = j * (j - 1) / 2 + i;
        bits[k / 6] |= 1 << (5 - k % 6);
    }
    out.extend(bits.into_iter().map(|b| b + 63));
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}
