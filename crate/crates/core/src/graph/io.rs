//! Whitespace-separated edge lists.
//!
//! One `u v` pair per line; blank lines and lines starting with `#` are
//! skipped, extra columns are ignored. Saved files list each edge once as
//! `u v` with `u < v`; an isolated vertex is written as the self-loop `v v`
//! so that loading restores the same id assignment.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

/// Reads an edge list; returns the graph and the new-to-original id map.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<(Graph, Vec<u64>)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut pairs = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let malformed = |reason: String| Error::Malformed { path: path.into(), line: i + 1, reason };
        let mut fields = body.split_whitespace();
        let mut id = || -> Result<u64> {
            let tok = fields.next().ok_or_else(|| malformed("expected two vertex ids".into()))?;
            tok.parse::<u64>().map_err(|_| malformed(format!("'{tok}' is not a vertex id")))
        };
        let u = id()?;
        let v = id()?;
        pairs.push((u, v));
    }
    if pairs.is_empty() {
        return Err(Error::Malformed { path: path.into(), line: 0, reason: "no edges (empty graph)".into() });
    }
    Graph::from_edges(&pairs)
}

/// Writes `g` in the edge-list format.
pub fn write_edge_list(g: &Graph, out: &mut impl Write) -> std::io::Result<()> {
    for v in 0..g.n() as u32 {
        if g.degree(v) == 0 {
            writeln!(out, "{v} {v}")?;
        }
        for &w in g.neighbors(v) {
            if w > v {
                writeln!(out, "{v} {w}")?;
            }
        }
    }
    Ok(())
}

pub fn save_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_edge_list(g, &mut out)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load_str(text: &str) -> Result<Graph> {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.txt");
        std::fs::write(&p, text).unwrap();
        load_edge_list(&p).map(|(g, _)| g)
    }

    #[test]
    fn parses_path() {
        let g = load_str("0 1\n1 2\n").unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));
    }

    #[test]
    fn comments_and_tabs() {
        let a = load_str("# header\n0 1\n# mid\n1 2\n").unwrap();
        let b = load_str("0\t1\n1\t2\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn malformed_line_number() {
        match load_str("0 1\n1 x\n") {
            Err(Error::Malformed { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(load_str("0\n"), Err(Error::Malformed { line: 1, .. })));
    }

    #[test]
    fn empty_file() {
        assert!(load_str("").is_err());
        assert!(load_str("# only comments\n").is_err());
    }

    #[test]
    fn round_trip_keeps_ids() {
        let g = Graph::with_vertices(6, &[(0, 3), (3, 5), (1, 3)]);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.txt");
        save_edge_list(&g, &p).unwrap();
        let (h, ids) = load_edge_list(&p).unwrap();
        assert_eq!(g, h);
        assert_eq!(ids, (0..6).collect::<Vec<u64>>());
    }
}
