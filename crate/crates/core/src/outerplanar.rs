//! Outerplane embeddings of biconnected outerplanar graphs.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{validate, Dag, EdgeId, VertexId};

pub type FaceId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("graph is not biconnected")]
    NotBiconnected,
    #[error("graph is not outerplanar")]
    NotOuterplanar,
    #[error("edge {0} is not on the outer face")]
    EdgeNotOnOuterFace(EdgeId),
    #[error("edge {0} does not exist")]
    NoSuchEdge(EdgeId),
    #[error("rotation system is not planar")]
    NotPlanar,
}

/// Finds the Hamiltonian cycle of a biconnected outerplanar graph given as
/// undirected pairs over `0..n`, or `None` when the graph is not one.
///
/// Degree-2 vertices are peeled off (bridging their neighbours) down to a
/// triangle and then reinserted; the resulting cycle is verified against the
/// definition, so a `Some` answer is always a certificate.
pub fn hamiltonian_outer_cycle(n: u32, pairs: &[(u32, u32)]) -> Option<Vec<u32>> {
    let n = n as usize;
    if n < 3 {
        return None;
    }
    let key = |a: u32, b: u32| if a < b { ((a as u64) << 32) | b as u64 } else { ((b as u64) << 32) | a as u64 };
    let mut present: HashSet<u64> = HashSet::with_capacity(pairs.len() * 2);
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(a, b) in pairs {
        if a == b || !present.insert(key(a, b)) {
            return None;
        }
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    let mut deg: Vec<u32> = adj.iter().map(|l| l.len() as u32).collect();
    let mut removed = vec![false; n];
    let mut stack: Vec<u32> = (0..n as u32).filter(|&v| deg[v as usize] == 2).collect();
    let mut peeled: Vec<(u32, u32, u32)> = Vec::with_capacity(n);
    let mut alive = n;
    let live_pair = |adj: &Vec<Vec<u32>>, removed: &Vec<bool>, v: u32| {
        let mut it = adj[v as usize].iter().copied().filter(|&x| !removed[x as usize]);
        (it.next(), it.next())
    };
    while alive > 3 {
        let v = stack.pop()?;
        if removed[v as usize] || deg[v as usize] != 2 {
            continue;
        }
        let (Some(a), Some(b)) = live_pair(&adj, &removed, v) else { return None };
        removed[v as usize] = true;
        alive -= 1;
        peeled.push((v, a, b));
        if present.insert(key(a, b)) {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        } else {
            deg[a as usize] -= 1;
            deg[b as usize] -= 1;
        }
        for x in [a, b] {
            match deg[x as usize] {
                0 | 1 => return None,
                2 => stack.push(x),
                _ => {}
            }
        }
    }
    let rest: Vec<u32> = (0..n as u32).filter(|&v| !removed[v as usize]).collect();
    let [x, y, z] = rest[..] else { return None };
    if !(present.contains(&key(x, y)) && present.contains(&key(y, z)) && present.contains(&key(x, z))) {
        return None;
    }
    let mut next = vec![u32::MAX; n];
    let mut prev = vec![u32::MAX; n];
    for (p, q) in [(x, y), (y, z), (z, x)] {
        next[p as usize] = q;
        prev[q as usize] = p;
    }
    for &(v, a, b) in peeled.iter().rev() {
        let (p, q) = if next[a as usize] == b {
            (a, b)
        } else if next[b as usize] == a {
            (b, a)
        } else {
            return None;
        };
        next[p as usize] = v;
        prev[v as usize] = p;
        next[v as usize] = q;
        prev[q as usize] = v;
    }
    let mut cycle = Vec::with_capacity(n);
    let mut v = 0u32;
    for _ in 0..n {
        cycle.push(v);
        v = next[v as usize];
    }
    if v != 0 || !cycle_is_certificate(n, pairs, &cycle) {
        return None;
    }
    Some(cycle)
}

/// Checks that `cycle` is a Hamiltonian cycle of the graph and that all other
/// edges are pairwise non-crossing chords.
fn cycle_is_certificate(n: usize, pairs: &[(u32, u32)], cycle: &[u32]) -> bool {
    let mut pos = vec![u32::MAX; n];
    for (i, &v) in cycle.iter().enumerate() {
        if pos[v as usize] != u32::MAX {
            return false;
        }
        pos[v as usize] = i as u32;
    }
    let mut on_cycle = vec![false; n];
    let mut chords = Vec::new();
    for &(a, b) in pairs {
        let (lo, hi) = {
            let (p, q) = (pos[a as usize], pos[b as usize]);
            (p.min(q), p.max(q))
        };
        if hi - lo == 1 {
            on_cycle[lo as usize] = true;
        } else if lo == 0 && hi as usize == n - 1 {
            on_cycle[n - 1] = true;
        } else {
            chords.push((lo, hi));
        }
    }
    if on_cycle.iter().any(|&c| !c) {
        return false;
    }
    chords.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
    let mut open: Vec<(u32, u32)> = Vec::new();
    for (lo, hi) in chords {
        while open.last().is_some_and(|t| t.1 <= lo) {
            open.pop();
        }
        if open.last().is_some_and(|t| t.1 < hi) {
            return false;
        }
        open.push((lo, hi));
    }
    true
}

/// The outerplane embedding of a biconnected outerplanar graph.
///
/// Vertices sit on a circle in `outer_cycle` order. The rotation at each vertex
/// lists its edges by increasing circular offset of the far endpoint; internal
/// faces are listed as vertex cycles in increasing circle position.
#[derive(Clone, Debug, Serialize)]
pub struct OuterplaneEmbedding {
    outer_cycle: Vec<VertexId>,
    #[serde(skip)]
    position: Vec<u32>,
    rotation: Vec<Vec<EdgeId>>,
    internal_faces: Vec<Vec<VertexId>>,
    /// Per internal face, edge `j` joins vertices `j` and `j+1` of the cycle.
    #[serde(skip)]
    face_edges: Vec<Vec<EdgeId>>,
    /// Per edge, the face on each side; the outer face is `internal_faces.len()`.
    face_of_edge: Vec<[FaceId; 2]>,
    /// Per vertex, the internal face between rotation entries `j` and `j+1`.
    #[serde(skip)]
    gap_faces: Vec<Vec<FaceId>>,
    /// Per edge, the face left of the dart from lower to higher circle position.
    #[serde(skip)]
    forward_face: Vec<FaceId>,
}

impl OuterplaneEmbedding {
    pub fn outer_cycle(&self) -> &[VertexId] {
        &self.outer_cycle
    }
    pub fn position(&self, v: VertexId) -> u32 {
        self.position[v as usize]
    }
    pub fn rotation(&self, v: VertexId) -> &[EdgeId] {
        &self.rotation[v as usize]
    }
    pub fn internal_faces(&self) -> &[Vec<VertexId>] {
        &self.internal_faces
    }
    pub fn face_edges(&self, f: FaceId) -> &[EdgeId] {
        &self.face_edges[f as usize]
    }
    pub fn face_count(&self) -> usize {
        self.internal_faces.len()
    }
    pub fn outer_face(&self) -> FaceId {
        self.internal_faces.len() as FaceId
    }
    pub fn faces_of_edge(&self, e: EdgeId) -> [FaceId; 2] {
        self.face_of_edge[e as usize]
    }
    /// Internal faces between consecutive rotation entries at `v`
    /// (`deg(v) - 1` of them; the remaining gap is the outer face).
    pub fn gap_faces(&self, v: VertexId) -> &[FaceId] {
        &self.gap_faces[v as usize]
    }
    pub fn is_outer_edge(&self, e: EdgeId) -> bool {
        self.face_of_edge[e as usize][1] == self.outer_face()
    }
    pub fn outer_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.face_of_edge.len() as EdgeId).filter(|&e| self.is_outer_edge(e))
    }
    /// The internal face containing the dart `from -> to` on its boundary
    /// (traversed in increasing circle order), or the outer face otherwise.
    pub fn face_of_dart(&self, d: &Dag, e: EdgeId, from: VertexId) -> FaceId {
        let forward = self.forward_face[e as usize];
        if self.position(from) < self.position(d.other(e, from)) {
            forward
        } else {
            self.other_face(e, forward)
        }
    }
    fn other_face(&self, e: EdgeId, f: FaceId) -> FaceId {
        let [a, b] = self.face_of_edge[e as usize];
        if a == f {
            b
        } else {
            a
        }
    }
}

/// Computes the outerplane embedding with the canonical reflection: the outer
/// cycle starts at vertex 0 and continues toward its smaller cycle neighbour.
pub fn outerplane_embedding(d: &Dag) -> Result<OuterplaneEmbedding, EmbeddingError> {
    let report = validate(d);
    if !report.is_biconnected {
        return Err(EmbeddingError::NotBiconnected);
    }
    if !report.is_outerplanar {
        return Err(EmbeddingError::NotOuterplanar);
    }
    let pairs: Vec<(u32, u32)> = d.edges().iter().map(|e| (e.tail, e.head)).collect();
    let mut cycle = hamiltonian_outer_cycle(d.vertex_count(), &pairs).ok_or(EmbeddingError::NotOuterplanar)?;
    let n = cycle.len();
    if cycle[n - 1] < cycle[1] {
        cycle[1..].reverse();
    }
    Ok(embed_along_cycle(d, cycle))
}

fn embed_along_cycle(d: &Dag, cycle: Vec<VertexId>) -> OuterplaneEmbedding {
    let n = cycle.len();
    let m = d.edge_count() as usize;
    let mut position = vec![0u32; n];
    for (i, &v) in cycle.iter().enumerate() {
        position[v as usize] = i as u32;
    }
    let offset = |from: VertexId, to: VertexId| (position[to as usize] + n as u32 - position[from as usize]) % n as u32;
    let mut rotation: Vec<Vec<EdgeId>> = Vec::with_capacity(n);
    for v in 0..n as u32 {
        let mut es = d.incident(v).to_vec();
        es.sort_unstable_by_key(|&e| offset(v, d.other(e, v)));
        rotation.push(es);
    }
    // slot[2e + s]: index of e in the rotation of its tail (s = 0) or head (s = 1)
    let mut slot = vec![0u32; 2 * m];
    for v in 0..n as u32 {
        for (j, &e) in rotation[v as usize].iter().enumerate() {
            let s = if d.edge(e).tail == v { 0 } else { 1 };
            slot[2 * e as usize + s] = j as u32;
        }
    }
    // Darts are (edge, from-side). A dart low->high in circle position is
    // internal unless it is the cycle edge (n-1, 0); its reverse is internal
    // only for chords and for that wrap edge.
    let dart_from = |e: EdgeId, s: usize| if s == 0 { d.edge(e).tail } else { d.edge(e).head };
    let is_outer_dart = |e: EdgeId, s: usize| {
        let from = dart_from(e, s);
        let to = d.other(e, from);
        offset(to, from) == 1
    };
    let mut dart_face = vec![FaceId::MAX; 2 * m];
    let mut faces: Vec<Vec<VertexId>> = Vec::with_capacity(m - n + 1);
    let mut all_face_edges: Vec<Vec<EdgeId>> = Vec::new();
    for e in 0..m as EdgeId {
        for s in 0..2 {
            if dart_face[2 * e as usize + s] != FaceId::MAX || is_outer_dart(e, s) {
                continue;
            }
            let fid = faces.len() as FaceId;
            let mut verts = Vec::new();
            let mut fedges = Vec::new();
            let (mut ce, mut cs) = (e, s);
            loop {
                dart_face[2 * ce as usize + cs] = fid;
                let from = dart_from(ce, cs);
                verts.push(from);
                fedges.push(ce);
                let w = d.other(ce, from);
                // next dart leaves w along the predecessor of ce in w's rotation
                let ws = 1 - cs;
                let j = slot[2 * ce as usize + ws] as usize;
                let rw = &rotation[w as usize];
                let ne = rw[(j + rw.len() - 1) % rw.len()];
                let ns = if d.edge(ne).tail == w { 0 } else { 1 };
                ce = ne;
                cs = ns;
                if ce == e && cs == s {
                    break;
                }
            }
            let start = (0..verts.len()).min_by_key(|&i| position[verts[i] as usize]).unwrap();
            verts.rotate_left(start);
            fedges.rotate_left(start);
            faces.push(verts);
            all_face_edges.push(fedges);
        }
    }
    // Canonical face order: lexicographic by circle positions.
    let mut order: Vec<usize> = (0..faces.len()).collect();
    let keyed: Vec<Vec<u32>> =
        faces.iter().map(|f| f.iter().map(|&v| position[v as usize]).collect()).collect();
    order.sort_by(|&a, &b| keyed[a].cmp(&keyed[b]));
    let mut rename = vec![0 as FaceId; faces.len()];
    for (new, &old) in order.iter().enumerate() {
        rename[old] = new as FaceId;
    }
    let outer = faces.len() as FaceId;
    for f in dart_face.iter_mut() {
        *f = if *f == FaceId::MAX { outer } else { rename[*f as usize] };
    }
    let mut sorted_faces = vec![Vec::new(); faces.len()];
    let mut face_edges = vec![Vec::new(); faces.len()];
    for (old, (f, fe)) in faces.into_iter().zip(all_face_edges).enumerate() {
        sorted_faces[rename[old] as usize] = f;
        face_edges[rename[old] as usize] = fe;
    }
    let mut face_of_edge = Vec::with_capacity(m);
    let mut forward_face = Vec::with_capacity(m);
    for e in 0..m {
        let (a, b) = (dart_face[2 * e], dart_face[2 * e + 1]);
        face_of_edge.push([a.min(b), a.max(b)]);
        let ed = d.edge(e as EdgeId);
        forward_face.push(if position[ed.tail as usize] < position[ed.head as usize] { a } else { b });
    }
    let mut gap_faces = Vec::with_capacity(n);
    for v in 0..n as u32 {
        let rv = &rotation[v as usize];
        let gaps = (1..rv.len())
            .map(|j| {
                // the face left of the dart leaving v along rv[j - 1]
                let e = rv[j - 1];
                let s = if d.edge(e).tail == v { 0 } else { 1 };
                dart_face[2 * e as usize + s]
            })
            .collect();
        gap_faces.push(gaps);
    }
    OuterplaneEmbedding {
        outer_cycle: cycle,
        position,
        rotation,
        internal_faces: sorted_faces,
        face_edges,
        face_of_edge,
        gap_faces,
        forward_face,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn dag(n: u32, es: &[(u32, u32)]) -> Dag {
        Dag::new(n, es.iter().map(|&(a, b)| Edge::new(a, b)).collect()).unwrap()
    }

    #[test]
    fn triangle() {
        let o = outerplane_embedding(&dag(3, &[(0, 1), (0, 2), (1, 2)])).unwrap();
        assert_eq!(o.outer_cycle(), &[0, 1, 2]);
        assert_eq!(o.internal_faces(), &[vec![0, 1, 2]]);
        assert!((0..3).all(|e| o.is_outer_edge(e)));
    }

    #[test]
    fn diamond() {
        let d = dag(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
        let o = outerplane_embedding(&d).unwrap();
        assert_eq!(o.outer_cycle(), &[0, 1, 3, 2]);
        assert_eq!(o.internal_faces(), &[vec![0, 1, 2], vec![1, 3, 2]]);
        assert_eq!(o.faces_of_edge(2), [0, 1]);
        assert!(!o.is_outer_edge(2));
        assert_eq!(o.outer_edges().collect::<Vec<_>>(), vec![0, 1, 3, 4]);
        assert_eq!(o.gap_faces(1), &[1, 0]);
        assert_eq!(o.face_of_dart(&d, 2, 1), 0);
        assert_eq!(o.face_of_dart(&d, 2, 2), 1);
    }

    #[test]
    fn rejects_non_outerplanar() {
        let k4 = dag(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(outerplane_embedding(&k4).unwrap_err(), EmbeddingError::NotOuterplanar);
        let path = dag(3, &[(0, 1), (1, 2)]);
        assert_eq!(outerplane_embedding(&path).unwrap_err(), EmbeddingError::NotBiconnected);
    }

    #[test]
    fn crossing_chords_rejected() {
        // hexagon with chords 0-3 and 1-4 crossing
        let pairs = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3), (1, 4)];
        assert!(hamiltonian_outer_cycle(6, &pairs).is_none());
        let fan = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 2), (0, 3), (0, 4)];
        assert!(hamiltonian_outer_cycle(6, &fan).is_some());
    }
}
