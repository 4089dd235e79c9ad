//! Text formats, bit-exact.
//!
//! Hypergraph:
//! ```text
//! HG r=<r> n=<n> parts=<p1,...,pr|none>
//! <r space-separated vertex ids, one edge per line, ascending>
//! ```
//! Lines starting with `#` and blank lines are ignored on input and never
//! emitted except where a format says so. When `parts` is present, part
//! `i` owns the contiguous id range starting at `p1+...+p(i-1)`.
//!
//! Sigma path: `SP sigma=<1-indexed images> k=<size>` followed by `k`
//! lines of `r` part-local element ids in axis order.
//!
//! Tight cycle: `TC r=<r> L=<len>` followed by one line of `L` global
//! vertex ids in cyclic order. Witness: `TCW l=<len>` followed by one
//! line of `l` global vertex ids.

use std::fmt::Write as _;

use thiserror::Error;

use crate::hypergraph::Hypergraph;
use crate::linegraph::LineGraph;
use crate::oracle::TightCycleWitness;
use crate::rational::display_rational;
use crate::sigma::{Permutation, SigmaPath};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// Lines with content, paired with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_kv<'a>(token: &'a str, key: &str, line: usize) -> Result<&'a str, ParseError> {
    match token.strip_prefix(key).and_then(|t| t.strip_prefix('=')) {
        Some(v) if !v.is_empty() => Ok(v),
        _ => err(line, format!("expected {key}=<value>, got {token:?}")),
    }
}

fn parse_usize(s: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    s.parse()
        .or_else(|_| err(line, format!("bad {what}: {s:?}")))
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = match lines.next() {
        Some(x) => x,
        None => return err(1, "empty input, expected HG header"),
    };
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "HG" {
        return err(
            hline,
            "expected header `HG r=<r> n=<n> parts=<p1,...,pr|none>`",
        );
    }
    let r = parse_usize(parse_kv(tokens[1], "r", hline)?, hline, "r")?;
    let n = parse_usize(parse_kv(tokens[2], "n", hline)?, hline, "n")?;
    let parts_str = parse_kv(tokens[3], "parts", hline)?;
    let parts = if parts_str == "none" {
        None
    } else {
        let sizes: Result<Vec<usize>, _> = parts_str
            .split(',')
            .map(|t| parse_usize(t, hline, "part size"))
            .collect();
        Some(sizes?)
    };
    let mut edges = Vec::new();
    for (lno, line) in lines {
        let mut edge = Vec::with_capacity(r);
        for tok in line.split_whitespace() {
            let v: u32 = match tok.parse() {
                Ok(v) => v,
                Err(_) => return err(lno, format!("bad vertex id {tok:?}")),
            };
            edge.push(v);
        }
        if edge.len() != r {
            return err(lno, format!("expected {r} vertex ids, got {}", edge.len()));
        }
        edges.push((lno, edge));
    }
    // Structural validation happens edge by edge so errors carry a line.
    let mut acc: Vec<Vec<u32>> = Vec::with_capacity(edges.len());
    for (lno, edge) in edges {
        match Hypergraph::new(r, n, std::iter::once(edge.clone()), parts.clone()) {
            Ok(_) => acc.push(edge),
            Err(e) => return err(lno, e.to_string()),
        }
    }
    Hypergraph::new(r, n, acc, parts).map_err(|e| ParseError {
        line: 1,
        message: e.to_string(),
    })
}

pub fn serialize_hypergraph(h: &Hypergraph) -> String {
    let mut out = String::new();
    let parts = match h.part_sizes() {
        Some(p) => p
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(","),
        None => "none".to_string(),
    };
    writeln!(out, "HG r={} n={} parts={}", h.r(), h.vertex_count(), parts).unwrap();
    for e in h.edges() {
        let ids: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", ids.join(" ")).unwrap();
    }
    out
}

pub fn serialize_sigma_path(p: &SigmaPath) -> String {
    let mut out = String::new();
    writeln!(out, "SP sigma={} k={}", p.sigma, p.size()).unwrap();
    for v in &p.vertices {
        let ids: Vec<String> = v.iter().map(|e| e.to_string()).collect();
        writeln!(out, "{}", ids.join(" ")).unwrap();
    }
    out
}

pub fn parse_sigma_path(text: &str) -> Result<SigmaPath, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = match lines.next() {
        Some(x) => x,
        None => return err(1, "empty input, expected SP header"),
    };
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 3 || tokens[0] != "SP" {
        return err(hline, "expected header `SP sigma=<perm> k=<size>`");
    }
    let sigma =
        Permutation::parse(parse_kv(tokens[1], "sigma", hline)?).or_else(|e| err(hline, e))?;
    let k = parse_usize(parse_kv(tokens[2], "k", hline)?, hline, "k")?;
    let r = sigma.r();
    let mut vertices = Vec::with_capacity(k);
    for (lno, line) in lines {
        let row: Result<Vec<u32>, _> = line.split_whitespace().map(|t| t.parse()).collect();
        let row = row.or_else(|_| err(lno, "bad element id"))?;
        if row.len() != r {
            return err(lno, format!("expected {r} element ids"));
        }
        vertices.push(row);
    }
    if vertices.len() != k {
        return err(
            1,
            format!("expected {k} vertex lines, got {}", vertices.len()),
        );
    }
    Ok(SigmaPath { sigma, vertices })
}

/// `TC r=<r> L=<len>` plus the global coordinate ids in cyclic order.
pub fn serialize_tight_cycle(r: usize, global_ids: &[u32]) -> String {
    let ids: Vec<String> = global_ids.iter().map(|v| v.to_string()).collect();
    format!("TC r={} L={}\n{}\n", r, global_ids.len(), ids.join(" "))
}

pub fn parse_tight_cycle(text: &str) -> Result<(usize, Vec<u32>), ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = match lines.next() {
        Some(x) => x,
        None => return err(1, "empty input, expected TC header"),
    };
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 3 || tokens[0] != "TC" {
        return err(hline, "expected header `TC r=<r> L=<len>`");
    }
    let r = parse_usize(parse_kv(tokens[1], "r", hline)?, hline, "r")?;
    let l = parse_usize(parse_kv(tokens[2], "L", hline)?, hline, "L")?;
    let ids = parse_id_sequence(lines, l)?;
    Ok((r, ids))
}

pub fn serialize_witness(w: &TightCycleWitness) -> String {
    let ids: Vec<String> = w.vertices.iter().map(|v| v.to_string()).collect();
    format!("TCW l={}\n{}\n", w.len(), ids.join(" "))
}

pub fn parse_witness(text: &str) -> Result<TightCycleWitness, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = match lines.next() {
        Some(x) => x,
        None => return err(1, "empty input, expected TCW header"),
    };
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 2 || tokens[0] != "TCW" {
        return err(hline, "expected header `TCW l=<len>`");
    }
    let l = parse_usize(parse_kv(tokens[1], "l", hline)?, hline, "l")?;
    let ids = parse_id_sequence(lines, l)?;
    Ok(TightCycleWitness { vertices: ids })
}

fn parse_id_sequence<'a>(
    lines: impl Iterator<Item = (usize, &'a str)>,
    expected: usize,
) -> Result<Vec<u32>, ParseError> {
    let mut ids = Vec::with_capacity(expected);
    let mut last_line = 1;
    for (lno, line) in lines {
        last_line = lno;
        for tok in line.split_whitespace() {
            match tok.parse() {
                Ok(v) => ids.push(v),
                Err(_) => return err(lno, format!("bad vertex id {tok:?}")),
            }
        }
    }
    if ids.len() != expected {
        return err(
            last_line,
            format!("expected {expected} ids, got {}", ids.len()),
        );
    }
    Ok(ids)
}

/// CSV header for expander certificates.
pub const CERTIFICATE_CSV_HEADER: &str = "n,p,density,delta,lambda,mode,witness_size";

/// One certificate CSV row describing an extracted subgraph.
pub fn certificate_csv_row(g: &LineGraph, cert: &crate::expander::ExpanderCertificate) -> String {
    let s = g.stats();
    let witness = cert
        .witness
        .as_ref()
        .map(|w| w.len().to_string())
        .unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{}",
        s.num_vertices,
        s.num_blocks,
        display_rational(s.density),
        s.min_degree,
        display_rational(cert.lambda),
        cert.mode,
        witness
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::gen_complete_multipartite;

    #[test]
    fn hypergraph_roundtrip_canonical() {
        let h = gen_complete_multipartite(&[2, 2, 2]);
        let text = serialize_hypergraph(&h);
        let back = parse_hypergraph(&text).unwrap();
        assert_eq!(back, h);
        assert_eq!(serialize_hypergraph(&back), text);
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let text = "# a comment\nHG r=3 n=3 parts=1,1,1\n\n# more\n0 1 2\n";
        let h = parse_hypergraph(text).unwrap();
        assert_eq!(h.edge_count(), 1);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad_header = parse_hypergraph("HG r=3 n=4\n").unwrap_err();
        assert_eq!(bad_header.line, 1);
        let bad_edge = parse_hypergraph("HG r=3 n=4 parts=none\n0 1\n").unwrap_err();
        assert_eq!(bad_edge.line, 2);
        let bad_id = parse_hypergraph("HG r=3 n=4 parts=none\n0 1 2\n0 1 x\n").unwrap_err();
        assert_eq!(bad_id.line, 3);
        let out_of_range = parse_hypergraph("HG r=3 n=4 parts=none\n0 1 7\n").unwrap_err();
        assert_eq!(out_of_range.line, 2);
    }

    #[test]
    fn sigma_path_roundtrip() {
        let p = SigmaPath {
            sigma: Permutation::parse("2,1,3").unwrap(),
            vertices: vec![vec![0, 1, 2], vec![3, 4, 5]],
        };
        let text = serialize_sigma_path(&p);
        assert_eq!(text.lines().next().unwrap(), "SP sigma=2,1,3 k=2");
        assert_eq!(parse_sigma_path(&text).unwrap(), p);
    }

    #[test]
    fn witness_roundtrip() {
        let w = TightCycleWitness {
            vertices: vec![3, 1, 4, 1, 5],
        };
        let text = serialize_witness(&w);
        assert_eq!(parse_witness(&text).unwrap(), w);
    }

    #[test]
    fn cycle_roundtrip() {
        let text = serialize_tight_cycle(3, &[0, 2, 4, 1, 3, 5]);
        let (r, ids) = parse_tight_cycle(&text).unwrap();
        assert_eq!(r, 3);
        assert_eq!(ids, vec![0, 2, 4, 1, 3, 5]);
    }
}
