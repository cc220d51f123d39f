//! Whitespace-separated edge lists.
//!
//! Every non-blank line that does not start with `#` holds exactly two integer
//! vertex ids. Directions, self-loops and duplicate edges are discarded. Ids
//! that already form `0..n` are kept; any other id set is compacted to `0..n` in
//! order of first appearance.
//!
//! The canonical form lists every edge once as `u v` with `u < v`, ascending.
//! An isolated vertex `v` is written as the self-loop `v v`, which keeps the
//! vertex and adds no edge, so loading the canonical form reproduces the graph.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use sketchbox_core::{Graph, GraphError, Vertex};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("edge list holds no vertices")]
    Empty,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Parses an edge list from a reader.
pub fn read_edge_list(reader: impl BufRead) -> Result<Graph, LoadError> {
    let mut raw: Vec<(u64, u64)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let bad = |msg: String| LoadError::Parse { line: idx + 1, msg };
        let mut tokens = text.split_whitespace();
        let mut id = || -> Result<u64, LoadError> {
            let tok = tokens.next().ok_or_else(|| bad("expected two vertex ids".into()))?;
            tok.parse::<u64>().map_err(|_| bad(format!("`{tok}` is not a non-negative integer id")))
        };
        let (u, v) = (id()?, id()?);
        if let Some(extra) = tokens.next() {
            return Err(bad(format!("unexpected third token `{extra}`")));
        }
        raw.push((u, v));
    }
    if raw.is_empty() {
        return Err(LoadError::Empty);
    }

    let mut order: Vec<u64> = Vec::new();
    let mut index: HashMap<u64, Vertex> = HashMap::new();
    for &(u, v) in &raw {
        for x in [u, v] {
            if let Entry::Vacant(slot) = index.entry(x) {
                let id = Vertex::try_from(order.len()).map_err(|_| GraphError::TooManyVertices(order.len() + 1))?;
                slot.insert(id);
                order.push(x);
            }
        }
    }
    let n = order.len();
    let contiguous = order.iter().all(|&x| x < n as u64);
    let map = |x: u64| if contiguous { x as Vertex } else { index[&x] };
    let edges = raw.iter().filter(|(u, v)| u != v).map(|&(u, v)| (map(u), map(v)));
    Ok(Graph::from_edges(n, edges)?)
}

/// Parses an edge list held in memory.
pub fn parse_edge_list(text: &str) -> Result<Graph, LoadError> {
    read_edge_list(text.as_bytes())
}

/// Loads an edge-list file.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph, LoadError> {
    read_edge_list(BufReader::new(File::open(path)?))
}

/// Writes the canonical form of `g`.
pub fn write_edge_list(g: &Graph, writer: impl Write) -> io::Result<()> {
    let mut w = BufWriter::new(writer);
    for u in 0..g.num_vertices() as Vertex {
        if g.degree(u) == 0 {
            writeln!(w, "{u} {u}")?;
        }
        for &v in g.neighbors(u).iter().filter(|&&v| v > u) {
            writeln!(w, "{u} {v}")?;
        }
    }
    w.flush()
}

/// Canonical form of `g` as a string.
pub fn to_edge_list_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// Writes the canonical form of `g` to a file.
pub fn save_edge_list(g: &Graph, path: impl AsRef<Path>) -> io::Result<()> {
    write_edge_list(g, File::create(path)?)
}
