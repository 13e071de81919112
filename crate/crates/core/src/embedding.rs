//! Plane embeddings as rotation systems with a designated outer face.

use serde::{Deserialize, Serialize};

use crate::dual_tree::RootedDualTree;
use crate::graph::{Dag, EdgeId, VertexId};
use crate::outerplanar::{EmbeddingError, FaceId, OuterplaneEmbedding};

/// Where an attached subgraph sits relative to its parent cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    In,
    Out,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::In, Side::Out];

    pub fn flip(self) -> Side {
        match self {
            Side::In => Side::Out,
            Side::Out => Side::In,
        }
    }
}

/// How an embedding was derived from the outerplane one: every internal face
/// other than the root face is placed inside or outside its parent cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideAssignment {
    pub root_edge: EdgeId,
    /// Indexed by outerplane face id; `None` exactly for the root face.
    pub sides: Vec<Option<Side>>,
}

/// A dart is an edge together with the endpoint it leaves from.
#[inline]
fn dart(d: &Dag, e: EdgeId, from: VertexId) -> usize {
    2 * e as usize + usize::from(d.edge(e).tail != from)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneEmbedding {
    rotation: Vec<Vec<EdgeId>>,
    faces: Vec<Vec<VertexId>>,
    dart_face: Vec<FaceId>,
    outer_face: FaceId,
    side_assignment: Option<SideAssignment>,
    /// Face id of each outerplane face when derived from a side assignment.
    node_face: Option<Vec<FaceId>>,
}

impl PlaneEmbedding {
    /// Traces the faces of `rotation` and checks that it is a planar rotation
    /// system of `d` (Euler's formula on a connected graph).
    pub fn from_rotation(
        d: &Dag,
        rotation: Vec<Vec<EdgeId>>,
        outer_face: FaceId,
    ) -> Result<Self, EmbeddingError> {
        let n = d.vertex_count() as usize;
        if rotation.len() != n {
            return Err(EmbeddingError::NotPlanar);
        }
        for (v, r) in rotation.iter().enumerate() {
            let mut a = r.clone();
            a.sort_unstable();
            if a != d.incident(v as VertexId) {
                return Err(EmbeddingError::NotPlanar);
            }
        }
        let (faces, dart_face) = trace(d, &rotation);
        let m = d.edge_count() as usize;
        if faces.len() + n != m + 2 || outer_face as usize >= faces.len() {
            return Err(EmbeddingError::NotPlanar);
        }
        Ok(PlaneEmbedding { rotation, faces, dart_face, outer_face, side_assignment: None, node_face: None })
    }

    /// Builds the embedding in which every non-root face of the outerplane
    /// embedding sits inside or outside its parent cycle as `sides` says.
    /// The outer face is the face across the root edge from the root face.
    pub fn from_sides(
        d: &Dag,
        o: &OuterplaneEmbedding,
        tree: &RootedDualTree,
        sides: &SideAssignment,
    ) -> Result<Self, EmbeddingError> {
        assert_eq!(sides.root_edge, tree.root_edge, "side assignment rooted elsewhere");
        let fcount = o.face_count();
        let mut orient = vec![1i8; fcount];
        for &s in tree.bottom_up.iter().rev() {
            let f = tree.face(s);
            if let Some(p) = f.parent {
                orient[s as usize] = match sides.sides[s as usize].expect("non-root face has a side") {
                    Side::Out => orient[p as usize],
                    Side::In => -orient[p as usize],
                };
            }
        }
        let n = d.vertex_count() as usize;
        let mut rotation = Vec::with_capacity(n);
        let mut next: Vec<usize> = Vec::new();
        let mut prev: Vec<usize> = Vec::new();
        for v in 0..n as VertexId {
            let xs = o.rotation(v);
            let gaps = o.gap_faces(v);
            let t = gaps.len();
            if t == 1 {
                rotation.push(xs.to_vec());
                continue;
            }
            // gap j (1-based) holds face gaps[j - 1] between xs[j - 1] and xs[j]
            let h = (1..=t).min_by_key(|&j| tree.face(gaps[j - 1]).depth).unwrap();
            next.clear();
            prev.clear();
            next.resize(t + 1, usize::MAX);
            prev.resize(t + 1, usize::MAX);
            next[h - 1] = h;
            prev[h] = h - 1;
            next[h] = h - 1;
            prev[h - 1] = h;
            let insert_after = |at: usize, x: usize, next: &mut Vec<usize>, prev: &mut Vec<usize>| {
                let nx = next[at];
                next[at] = x;
                prev[x] = at;
                next[x] = nx;
                prev[nx] = x;
            };
            for j in (1..h).rev() {
                let f = gaps[j - 1] as usize;
                if orient[f] > 0 {
                    let p = prev[j];
                    insert_after(p, j - 1, &mut next, &mut prev);
                } else {
                    insert_after(j, j - 1, &mut next, &mut prev);
                }
            }
            for j in h + 1..=t {
                let f = gaps[j - 1] as usize;
                if orient[f] > 0 {
                    insert_after(j - 1, j, &mut next, &mut prev);
                } else {
                    let p = prev[j - 1];
                    insert_after(p, j, &mut next, &mut prev);
                }
            }
            let mut r = Vec::with_capacity(t + 1);
            let mut c = 0usize;
            for _ in 0..=t {
                r.push(xs[c]);
                c = next[c];
            }
            rotation.push(r);
        }
        let (faces, dart_face) = trace(d, &rotation);
        if faces.len() + n != d.edge_count() as usize + 2 {
            return Err(EmbeddingError::NotPlanar);
        }
        let mut node_face = vec![0 as FaceId; fcount];
        for s in 0..fcount as FaceId {
            let pe = tree.face(s).parent_edge;
            let ed = d.edge(pe);
            let from = if o.face_of_dart(d, pe, ed.tail) == s { ed.tail } else { ed.head };
            let from = if orient[s as usize] > 0 { from } else { ed.other(from) };
            node_face[s as usize] = dart_face[dart(d, pe, from)];
        }
        let root = tree.root_edge;
        let re = d.edge(root);
        let inner_from =
            if o.face_of_dart(d, root, re.tail) == tree.root_face { re.tail } else { re.head };
        let outer_face = dart_face[dart(d, root, re.other(inner_from))];
        Ok(PlaneEmbedding {
            rotation,
            faces,
            dart_face,
            outer_face,
            side_assignment: Some(sides.clone()),
            node_face: Some(node_face),
        })
    }

    /// The same rotation system with another face chosen as the outer one.
    pub fn with_outer_face(&self, f: FaceId) -> Self {
        assert!((f as usize) < self.faces.len());
        let keep = f == self.outer_face;
        PlaneEmbedding {
            outer_face: f,
            side_assignment: if keep { self.side_assignment.clone() } else { None },
            node_face: if keep { self.node_face.clone() } else { None },
            ..self.clone()
        }
    }

    pub fn rotation(&self, v: VertexId) -> &[EdgeId] {
        &self.rotation[v as usize]
    }
    pub fn rotations(&self) -> &[Vec<EdgeId>] {
        &self.rotation
    }
    pub fn faces(&self) -> &[Vec<VertexId>] {
        &self.faces
    }
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }
    pub fn outer_face(&self) -> FaceId {
        self.outer_face
    }
    pub fn side_assignment(&self) -> Option<&SideAssignment> {
        self.side_assignment.as_ref()
    }
    /// The face of this embedding bounded by outerplane face `s`'s cycle on
    /// the side that face occupies, when derived from a side assignment.
    pub fn face_of_node(&self, s: FaceId) -> Option<FaceId> {
        self.node_face.as_ref().map(|v| v[s as usize])
    }
    /// The face to the left of the dart leaving `from` along `e`.
    pub fn face_of_dart(&self, d: &Dag, e: EdgeId, from: VertexId) -> FaceId {
        self.dart_face[dart(d, e, from)]
    }
    pub fn is_outer_edge(&self, d: &Dag, e: EdgeId) -> bool {
        let ed = d.edge(e);
        self.face_of_dart(d, e, ed.tail) == self.outer_face
            || self.face_of_dart(d, e, ed.head) == self.outer_face
    }

    /// Angles around `v` as `(face, edge before, edge after)` in rotation order.
    pub fn angles_at<'a>(
        &'a self,
        d: &'a Dag,
        v: VertexId,
    ) -> impl Iterator<Item = (FaceId, EdgeId, EdgeId)> + 'a {
        let r = &self.rotation[v as usize];
        (0..r.len()).map(move |j| {
            let a = r[j];
            let b = r[(j + 1) % r.len()];
            (self.face_of_dart(d, a, v), a, b)
        })
    }

    pub fn angle_count(&self) -> usize {
        self.rotation.iter().map(Vec::len).sum()
    }
}

/// Face tracing with successor `u->w  =>  w->pred_w(u)`.
fn trace(d: &Dag, rotation: &[Vec<EdgeId>]) -> (Vec<Vec<VertexId>>, Vec<FaceId>) {
    let m = d.edge_count() as usize;
    let mut slot = vec![0u32; 2 * m];
    for (v, r) in rotation.iter().enumerate() {
        for (j, &e) in r.iter().enumerate() {
            slot[dart(d, e, v as VertexId)] = j as u32;
        }
    }
    let mut dart_face = vec![FaceId::MAX; 2 * m];
    let mut faces = Vec::new();
    for start in 0..2 * m {
        if dart_face[start] != FaceId::MAX {
            continue;
        }
        let fid = faces.len() as FaceId;
        let mut verts = Vec::new();
        let mut cur = start;
        loop {
            dart_face[cur] = fid;
            let e = (cur / 2) as EdgeId;
            let ed = d.edge(e);
            let (from, to) = if cur % 2 == 0 { (ed.tail, ed.head) } else { (ed.head, ed.tail) };
            verts.push(from);
            let rw = &rotation[to as usize];
            let j = slot[dart(d, e, to)] as usize;
            let ne = rw[(j + rw.len() - 1) % rw.len()];
            cur = dart(d, ne, to);
            if cur == start {
                break;
            }
        }
        faces.push(verts);
    }
    (faces, dart_face)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual_tree::root_at_edge;
    use crate::graph::Edge;
    use crate::outerplanar::outerplane_embedding;

    fn dag(n: u32, es: &[(u32, u32)]) -> Dag {
        Dag::new(n, es.iter().map(|&(a, b)| Edge::new(a, b)).collect()).unwrap()
    }

    #[test]
    fn diamond_both_sides() {
        let d = dag(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
        let o = outerplane_embedding(&d).unwrap();
        let t = root_at_edge(&d, &o, 1).unwrap();
        let child = t.face(t.root_face).children[1].unwrap();
        for side in Side::BOTH {
            let mut sides = vec![None; 2];
            sides[child as usize] = Some(side);
            let e = PlaneEmbedding::from_sides(&d, &o, &t, &SideAssignment { root_edge: 1, sides }).unwrap();
            assert_eq!(e.face_count(), 3);
            assert!(e.is_outer_edge(&d, 1));
            let top = e.face_of_node(t.root_face).unwrap();
            let inner = e.face_of_node(child).unwrap();
            assert!(top != inner && top != e.outer_face() && inner != e.outer_face());
            let mut lens: Vec<usize> = e.faces().iter().map(Vec::len).collect();
            lens.sort();
            match side {
                // outside: faces are the two triangles and the outer 4-cycle
                Side::Out => assert_eq!(lens, vec![3, 3, 4]),
                // inside: the child triangle nests in (a,b,c), leaving a 4-face
                Side::In => assert_eq!(lens, vec![3, 3, 4]),
            }
            assert_eq!(e.faces()[inner as usize].len(), 3);
            let outer_len = e.faces()[e.outer_face() as usize].len();
            assert_eq!(outer_len, if side == Side::Out { 4 } else { 3 });
        }
    }

    #[test]
    fn rejects_nonplanar_rotation() {
        // K4 minus nothing but with a twisted rotation: genus check fails
        let d = dag(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let rot = vec![vec![0, 3], vec![0, 1], vec![1, 2], vec![2, 3]];
        assert!(PlaneEmbedding::from_rotation(&d, rot, 0).is_ok());
        let bad = vec![vec![0], vec![0, 1], vec![1, 2], vec![2, 3]];
        assert!(PlaneEmbedding::from_rotation(&d, bad, 0).is_err());
    }
}
