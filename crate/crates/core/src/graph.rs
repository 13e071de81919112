//! Directed graphs, the `updag` text format and structural validation.

use std::collections::VecDeque;
use std::fmt;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = u32;
pub type EdgeId = u32;

/// A directed edge `tail -> head`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
}

impl Edge {
    pub fn new(tail: VertexId, head: VertexId) -> Self {
        Edge { tail, head }
    }

    /// The endpoint that is not `v`.
    #[inline]
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }

    fn key(&self) -> u64 {
        let (a, b) = if self.tail < self.head {
            (self.tail, self.head)
        } else {
            (self.head, self.tail)
        };
        ((a as u64) << 32) | b as u64
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {edge} uses vertex {vertex}, but the graph has {count} vertices")]
    VertexOutOfRange { edge: EdgeId, vertex: VertexId, count: u32 },
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: EdgeId, vertex: VertexId },
    #[error("edges {first} and {second} join the same pair of vertices")]
    DuplicateEdge { first: EdgeId, second: EdgeId },
}

/// A simple directed graph with dense vertex ids and edge ids given by
/// insertion order.
///
/// Self-loops and parallel edges (in either direction) are rejected on
/// construction. Acyclicity is not enforced here; [`validate`] reports it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dag {
    vertex_count: u32,
    edges: Vec<Edge>,
    offsets: Vec<u32>,
    incidence: Vec<EdgeId>,
}

impl Dag {
    pub fn new(vertex_count: u32, edges: Vec<Edge>) -> Result<Self, GraphError> {
        for (i, e) in edges.iter().enumerate() {
            for v in [e.tail, e.head] {
                if v >= vertex_count {
                    return Err(GraphError::VertexOutOfRange {
                        edge: i as EdgeId,
                        vertex: v,
                        count: vertex_count,
                    });
                }
            }
            if e.tail == e.head {
                return Err(GraphError::SelfLoop { edge: i as EdgeId, vertex: e.tail });
            }
        }
        if let Some((first, second)) = first_duplicate(&edges) {
            return Err(GraphError::DuplicateEdge { first, second });
        }
        Ok(Self::from_edges_unchecked(vertex_count, edges))
    }

    /// Builds the adjacency without the duplicate and range checks.
    pub(crate) fn from_edges_unchecked(vertex_count: u32, edges: Vec<Edge>) -> Self {
        let n = vertex_count as usize;
        let mut offsets = vec![0u32; n + 1];
        for e in &edges {
            offsets[e.tail as usize + 1] += 1;
            offsets[e.head as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut incidence = vec![0; edges.len() * 2];
        for (i, e) in edges.iter().enumerate() {
            for v in [e.tail, e.head] {
                incidence[fill[v as usize] as usize] = i as EdgeId;
                fill[v as usize] += 1;
            }
        }
        Dag { vertex_count, edges, offsets, incidence }
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    pub fn edge_count(&self) -> u32 {
        self.edges.len() as u32
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e as usize]
    }

    /// Edges incident to `v`, in increasing edge id order.
    #[inline]
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        let a = self.offsets[v as usize] as usize;
        let b = self.offsets[v as usize + 1] as usize;
        &self.incidence[a..b]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.incident(v).len()
    }

    #[inline]
    pub fn other(&self, e: EdgeId, v: VertexId) -> VertexId {
        self.edge(e).other(v)
    }

    /// True when `e` leaves `v`.
    #[inline]
    pub fn is_out(&self, e: EdgeId, v: VertexId) -> bool {
        self.edge(e).tail == v
    }

    /// Sources and sinks of the whole graph.
    pub fn is_switch(&self, v: VertexId) -> bool {
        let inc = self.incident(v);
        let out = inc.iter().filter(|&&e| self.is_out(e, v)).count();
        out == 0 || out == inc.len()
    }

    pub fn find_edge(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        let (x, y) = if self.degree(a) <= self.degree(b) { (a, b) } else { (b, a) };
        self.incident(x).iter().copied().find(|&e| self.other(e, x) == y)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Renames every vertex `v` to `perm[v]`, keeping edge order.
    pub fn relabel(&self, perm: &[VertexId]) -> Dag {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(perm[e.tail as usize], perm[e.head as usize]))
            .collect();
        Dag::from_edges_unchecked(self.vertex_count, edges)
    }
}

fn first_duplicate(edges: &[Edge]) -> Option<(EdgeId, EdgeId)> {
    let mut keys: Vec<(u64, EdgeId)> =
        edges.iter().enumerate().map(|(i, e)| (e.key(), i as EdgeId)).collect();
    keys.sort_unstable();
    let mut best: Option<(EdgeId, EdgeId)> = None;
    for w in keys.windows(2) {
        if w[0].0 == w[1].0 && best.is_none_or(|(_, s)| w[1].1 < s) {
            best = Some((w[0].1, w[1].1));
        }
    }
    best
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("expected header `updag 1`")]
    MissingHeader,
    #[error("expected `vertices N`")]
    MissingVertexCount,
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("vertex {vertex} out of range (vertices {count})")]
    OutOfRange { vertex: u64, count: u32 },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("read failure: {0}")]
    Io(String),
}

/// Parses the `updag 1` text format.
///
/// ```
/// let d = updag::parse_dag("updag 1\nvertices 3\nedge 0 1\nedge 0 2\nedge 1 2\n".as_bytes()).unwrap();
/// assert_eq!(d.edge_count(), 3);
/// ```
pub fn parse_dag<R: io::Read>(input: R) -> Result<Dag, ParseError> {
    let reader = io::BufReader::new(input);
    let mut stage = 0u8;
    let mut count = 0u32;
    let mut edges = Vec::new();
    let mut edge_lines = Vec::new();
    let mut last_line = 0;
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = line.map_err(|e| ParseError { line: lineno, kind: ParseErrorKind::Io(e.to_string()) })?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let err = |kind| ParseError { line: lineno, kind };
        let mut parts = text.split_whitespace();
        let word = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        match stage {
            0 => {
                if word != "updag" || rest != ["1"] {
                    return Err(err(ParseErrorKind::MissingHeader));
                }
                stage = 1;
            }
            1 => {
                if word != "vertices" || rest.len() != 1 {
                    return Err(err(ParseErrorKind::MissingVertexCount));
                }
                count = rest[0]
                    .parse()
                    .map_err(|_| err(ParseErrorKind::Malformed(text.to_string())))?;
                stage = 2;
            }
            _ => {
                if word != "edge" || rest.len() != 2 {
                    return Err(err(ParseErrorKind::Malformed(text.to_string())));
                }
                let mut ends = [0u32; 2];
                for (slot, s) in ends.iter_mut().zip(&rest) {
                    let v: u64 =
                        s.parse().map_err(|_| err(ParseErrorKind::Malformed(text.to_string())))?;
                    if v >= count as u64 {
                        return Err(err(ParseErrorKind::OutOfRange { vertex: v, count }));
                    }
                    *slot = v as u32;
                }
                if ends[0] == ends[1] {
                    return Err(err(ParseErrorKind::SelfLoop(ends[0])));
                }
                edges.push(Edge::new(ends[0], ends[1]));
                edge_lines.push(lineno);
            }
        }
    }
    match stage {
        0 => return Err(ParseError { line: last_line.max(1), kind: ParseErrorKind::MissingHeader }),
        1 => {
            return Err(ParseError { line: last_line.max(1), kind: ParseErrorKind::MissingVertexCount })
        }
        _ => {}
    }
    if let Some((_, second)) = first_duplicate(&edges) {
        let e = edges[second as usize];
        return Err(ParseError {
            line: edge_lines[second as usize],
            kind: ParseErrorKind::DuplicateEdge(e.tail, e.head),
        });
    }
    Ok(Dag::from_edges_unchecked(count, edges))
}

/// Writes `d` in the `updag 1` format.
pub fn write_dag<W: Write>(d: &Dag, out: W) -> io::Result<()> {
    let mut out = io::BufWriter::new(out);
    writeln!(out, "updag 1")?;
    writeln!(out, "vertices {}", d.vertex_count())?;
    for e in d.edges() {
        writeln!(out, "edge {} {}", e.tail, e.head)?;
    }
    out.flush()
}

impl fmt::Display for Dag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "updag 1")?;
        writeln!(f, "vertices {}", self.vertex_count)?;
        for e in &self.edges {
            writeln!(f, "edge {} {}", e.tail, e.head)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub is_acyclic: bool,
    pub is_biconnected: bool,
    pub is_outerplanar: bool,
}

impl ValidationReport {
    pub fn all(&self) -> bool {
        self.is_acyclic && self.is_biconnected && self.is_outerplanar
    }
}

pub fn validate(d: &Dag) -> ValidationReport {
    let blocks = blocks(d);
    let is_biconnected = d.vertex_count() >= 3
        && blocks.len() == 1
        && blocks[0].len() == d.edge_count() as usize;
    let is_outerplanar = blocks.iter().all(|b| block_is_outerplanar(d, b));
    ValidationReport { is_acyclic: is_acyclic(d), is_biconnected, is_outerplanar }
}

pub fn is_acyclic(d: &Dag) -> bool {
    let n = d.vertex_count() as usize;
    let mut indeg = vec![0u32; n];
    for e in d.edges() {
        indeg[e.head as usize] += 1;
    }
    let mut queue: VecDeque<VertexId> = (0..n as u32).filter(|&v| indeg[v as usize] == 0).collect();
    let mut seen = 0;
    while let Some(v) = queue.pop_front() {
        seen += 1;
        for &e in d.incident(v) {
            let ed = d.edge(e);
            if ed.tail == v {
                indeg[ed.head as usize] -= 1;
                if indeg[ed.head as usize] == 0 {
                    queue.push_back(ed.head);
                }
            }
        }
    }
    seen == n
}

/// Biconnected components as edge lists (iterative lowpoint search).
/// Isolated vertices contribute no block.
fn blocks(d: &Dag) -> Vec<Vec<EdgeId>> {
    let n = d.vertex_count() as usize;
    let mut disc = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut time = 0u32;
    let mut edge_stack: Vec<EdgeId> = Vec::new();
    let mut out = Vec::new();
    // (vertex, parent edge, next incidence index)
    let mut stack: Vec<(VertexId, EdgeId, usize)> = Vec::new();
    for root in 0..n as u32 {
        if disc[root as usize] != u32::MAX {
            continue;
        }
        disc[root as usize] = time;
        low[root as usize] = time;
        time += 1;
        stack.push((root, EdgeId::MAX, 0));
        while let Some(&mut (v, pe, ref mut idx)) = stack.last_mut() {
            let inc = d.incident(v);
            if *idx < inc.len() {
                let e = inc[*idx];
                *idx += 1;
                if e == pe {
                    continue;
                }
                let w = d.other(e, v);
                if disc[w as usize] == u32::MAX {
                    disc[w as usize] = time;
                    low[w as usize] = time;
                    time += 1;
                    edge_stack.push(e);
                    stack.push((w, e, 0));
                } else if disc[w as usize] < disc[v as usize] {
                    low[v as usize] = low[v as usize].min(disc[w as usize]);
                    edge_stack.push(e);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p as usize] = low[p as usize].min(low[v as usize]);
                    if low[v as usize] >= disc[p as usize] {
                        let mut block = Vec::new();
                        while let Some(x) = edge_stack.pop() {
                            block.push(x);
                            if x == pe {
                                break;
                            }
                        }
                        out.push(block);
                    }
                }
            }
        }
    }
    out
}

fn block_is_outerplanar(d: &Dag, block: &[EdgeId]) -> bool {
    if block.len() == 1 {
        return true;
    }
    let mut local = std::collections::HashMap::new();
    let mut pairs = Vec::with_capacity(block.len());
    for &e in block {
        let ed = d.edge(e);
        let mut id = |v: VertexId| {
            let next = local.len() as u32;
            *local.entry(v).or_insert(next)
        };
        let a = id(ed.tail);
        let b = id(ed.head);
        pairs.push((a, b));
    }
    crate::outerplanar::hamiltonian_outer_cycle(local.len() as u32, &pairs).is_some()
}
