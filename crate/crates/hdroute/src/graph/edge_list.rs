//! Plain-text edge-list I/O: one `u v` integer pair per line, whitespace
//! delimited, `#` starts a comment line. Matches common public topology dumps.

use super::Network;
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

/// Load an undirected simple graph, remap arbitrary ids to dense `0..N-1`,
/// and reduce to the largest connected component. The original labels stay
/// available through [`Network::original_id`].
pub fn load_edge_list<P: AsRef<Path>>(path: P) -> Result<Network> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    let reader = BufReader::new(file);

    let mut label_edges: Vec<(u64, u64)> = Vec::new();

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let parse_err = |msg: String| Error::Parse {
            path: path.to_path_buf(),
            line: lineno + 1,
            msg,
        };
        let u: u64 = parts
            .next()
            .ok_or_else(|| parse_err("missing source id".into()))?
            .parse()
            .map_err(|e| parse_err(format!("bad source id: {e}")))?;
        let v: u64 = parts
            .next()
            .ok_or_else(|| parse_err("missing target id".into()))?
            .parse()
            .map_err(|e| parse_err(format!("bad target id: {e}")))?;
        if parts.next().is_some() {
            return Err(parse_err("expected exactly two ids per line".into()));
        }
        if u == v {
            continue; // drop self-loops silently, as topology dumps contain them
        }
        label_edges.push((u.min(v), u.max(v)));
    }

    if label_edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    // dense ids in ascending label order, so already-dense files load
    // unchanged and arbitrary ids get a canonical mapping
    let mut labels: Vec<u64> = label_edges
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .collect();
    labels.sort_unstable();
    labels.dedup();
    let ids: HashMap<u64, u32> = labels
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, i as u32))
        .collect();
    let mut edges: Vec<(u32, u32)> = label_edges
        .into_iter()
        .map(|(u, v)| (ids[&u], ids[&v]))
        .collect();
    edges.sort_unstable();
    edges.dedup();

    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); labels.len()];
    for &(u, v) in &edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let mut net = Network::from_adjacency(adj);
    net.set_original_ids(labels);
    net.largest_component()
}

/// Write `u v` lines using the dense ids, suitable for reloading.
pub fn write_edge_list<P: AsRef<Path>>(net: &Network, path: P) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    for (u, v) in net.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn loads_path_graph() {
        let f = write_tmp("0 1\n1 2\n");
        let net = load_edge_list(f.path()).unwrap();
        assert_eq!(net.node_count(), 3);
        assert_eq!(net.edge_count(), 2);
        assert!(net.is_connected());
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let f = write_tmp("# header\n\n10 20\n# mid\n20 30\n");
        let net = load_edge_list(f.path()).unwrap();
        assert_eq!(net.node_count(), 3);
        // original labels retained after remap
        let labels: Vec<u64> = (0..3).map(|v| net.original_id(v)).collect();
        assert!(labels.contains(&10) && labels.contains(&20) && labels.contains(&30));
    }

    #[test]
    fn parse_error_reports_line_number() {
        let f = write_tmp("0 1\nx 2\n");
        let err = load_edge_list(f.path()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_file_is_an_error() {
        let f = write_tmp("# nothing\n");
        assert!(matches!(
            load_edge_list(f.path()),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn keeps_largest_component() {
        let f = write_tmp("0 1\n1 2\n5 6\n");
        let net = load_edge_list(f.path()).unwrap();
        assert_eq!(net.node_count(), 3);
        assert!(net.is_connected());
    }

    #[test]
    fn duplicate_and_reversed_edges_collapse() {
        let f = write_tmp("0 1\n1 0\n0 1\n1 2\n");
        let net = load_edge_list(f.path()).unwrap();
        assert_eq!(net.edge_count(), 2);
    }

    #[test]
    fn round_trip_through_writer() {
        let net = crate::graph::generate_ba(50, 2, 3).unwrap();
        let f = tempfile::NamedTempFile::new().unwrap();
        write_edge_list(&net, f.path()).unwrap();
        let reloaded = load_edge_list(f.path()).unwrap();
        assert_eq!(reloaded.node_count(), net.node_count());
        assert_eq!(reloaded.edges(), net.edges());
    }
}
