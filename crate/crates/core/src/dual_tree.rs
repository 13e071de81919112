//! The extended dual tree of an outerplane embedding and its rooted form.

use std::collections::VecDeque;

use serde::Serialize;

use crate::graph::{Dag, EdgeId, VertexId};
use crate::outerplanar::{EmbeddingError, FaceId, OuterplaneEmbedding};

pub type NodeId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DualNode {
    Face { cycle: Vec<VertexId> },
    EdgeLeaf { edge: EdgeId },
}

/// One node per internal face (ids `0..F`, the face ids of the embedding)
/// followed by one leaf per outer edge in edge order.
#[derive(Clone, Debug, Serialize)]
pub struct ExtendedDualTree {
    nodes: Vec<DualNode>,
    adjacency: Vec<Vec<NodeId>>,
    #[serde(skip)]
    leaf_of_edge: Vec<Option<NodeId>>,
    face_count: u32,
}

impl ExtendedDualTree {
    pub fn nodes(&self) -> &[DualNode] {
        &self.nodes
    }
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
    pub fn face_count(&self) -> usize {
        self.face_count as usize
    }
    pub fn neighbors(&self, n: NodeId) -> &[NodeId] {
        &self.adjacency[n as usize]
    }
    pub fn leaf_of_edge(&self, e: EdgeId) -> Option<NodeId> {
        self.leaf_of_edge.get(e as usize).copied().flatten()
    }
    /// Undirected tree edges as sorted `(low, high)` pairs.
    pub fn tree_edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out: Vec<_> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| (a as NodeId) < b).map(move |&b| (a as NodeId, b)))
            .collect();
        out.sort_unstable();
        out
    }
}

pub fn extended_dual_tree(d: &Dag, emb: &OuterplaneEmbedding) -> ExtendedDualTree {
    let f = emb.face_count() as u32;
    let mut nodes: Vec<DualNode> =
        emb.internal_faces().iter().map(|c| DualNode::Face { cycle: c.clone() }).collect();
    let mut adjacency = vec![Vec::new(); f as usize];
    let mut leaf_of_edge = vec![None; d.edge_count() as usize];
    for e in 0..d.edge_count() {
        let [a, b] = emb.faces_of_edge(e);
        if b == emb.outer_face() {
            let leaf = nodes.len() as NodeId;
            nodes.push(DualNode::EdgeLeaf { edge: e });
            adjacency.push(vec![a]);
            adjacency[a as usize].push(leaf);
            leaf_of_edge[e as usize] = Some(leaf);
        } else {
            adjacency[a as usize].push(b);
            adjacency[b as usize].push(a);
        }
    }
    ExtendedDualTree { nodes, adjacency, leaf_of_edge, face_count: f }
}

/// A face node of the rooted tree.
///
/// `cycle` is `(v_0, ..., v_k)` with `(v_0, v_k)` the edge shared with the
/// parent and `v_0` its smaller endpoint; `edges[i - 1]` joins `v_{i-1}` and
/// `v_i`, and `children[i - 1]` is the face across that edge, if any.
#[derive(Clone, Debug, Serialize)]
pub struct RootedFace {
    pub cycle: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub children: Vec<Option<FaceId>>,
    pub parent: Option<FaceId>,
    pub parent_edge: EdgeId,
    pub depth: u32,
}

impl RootedFace {
    /// The index `k` of the last cycle vertex.
    pub fn k(&self) -> usize {
        self.cycle.len() - 1
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RootedDualTree {
    pub root_edge: EdgeId,
    /// The face node adjacent to the root leaf.
    pub root_face: FaceId,
    pub faces: Vec<RootedFace>,
    /// Face ids with every child before its parent.
    pub bottom_up: Vec<FaceId>,
}

pub fn root_at_edge(
    d: &Dag,
    emb: &OuterplaneEmbedding,
    e: EdgeId,
) -> Result<RootedDualTree, EmbeddingError> {
    if e >= d.edge_count() {
        return Err(EmbeddingError::NoSuchEdge(e));
    }
    if !emb.is_outer_edge(e) {
        return Err(EmbeddingError::EdgeNotOnOuterFace(e));
    }
    let fcount = emb.face_count();
    let r = emb.faces_of_edge(e)[0];
    let mut faces: Vec<Option<RootedFace>> = vec![None; fcount];
    let mut order = Vec::with_capacity(fcount);
    let mut queue = VecDeque::from([(r, None::<FaceId>, e, 0u32)]);
    while let Some((s, parent, pe, depth)) = queue.pop_front() {
        let verts = &emb.internal_faces()[s as usize];
        let fedges = emb.face_edges(s);
        let len = verts.len();
        let j = fedges.iter().position(|&x| x == pe).expect("parent edge on face");
        let (a, b) = (verts[j], verts[(j + 1) % len]);
        let mut cycle = Vec::with_capacity(len);
        let mut edges = Vec::with_capacity(len - 1);
        if a < b {
            for i in 0..len {
                cycle.push(verts[(j + len - i) % len]);
            }
            for i in 1..len {
                edges.push(fedges[(j + len - i) % len]);
            }
        } else {
            for i in 0..len {
                cycle.push(verts[(j + 1 + i) % len]);
            }
            for i in 1..len {
                edges.push(fedges[(j + i) % len]);
            }
        }
        let children: Vec<Option<FaceId>> = edges
            .iter()
            .map(|&x| {
                let [p, q] = emb.faces_of_edge(x);
                if q == emb.outer_face() {
                    None
                } else {
                    Some(if p == s { q } else { p })
                }
            })
            .collect();
        for (&x, c) in edges.iter().zip(&children) {
            if let Some(t) = c {
                queue.push_back((*t, Some(s), x, depth + 1));
            }
        }
        order.push(s);
        faces[s as usize] = Some(RootedFace { cycle, edges, children, parent, parent_edge: pe, depth });
    }
    order.reverse();
    Ok(RootedDualTree {
        root_edge: e,
        root_face: r,
        faces: faces.into_iter().map(|f| f.expect("dual tree is connected")).collect(),
        bottom_up: order,
    })
}

impl RootedDualTree {
    pub fn face(&self, s: FaceId) -> &RootedFace {
        &self.faces[s as usize]
    }

    /// Forgets the orientation and returns the undirected tree edges with the
    /// node numbering of [`extended_dual_tree`].
    pub fn unrooted_edges(&self, tree: &ExtendedDualTree) -> Vec<(NodeId, NodeId)> {
        let leaf = |x: EdgeId| tree.leaf_of_edge(x).expect("outer edge has a leaf");
        let mut out = vec![ordered(leaf(self.root_edge), self.root_face)];
        for (s, f) in self.faces.iter().enumerate() {
            for (&x, c) in f.edges.iter().zip(&f.children) {
                out.push(match c {
                    Some(t) => ordered(s as NodeId, *t),
                    None => ordered(s as NodeId, leaf(x)),
                });
            }
        }
        out.sort_unstable();
        out
    }
}

fn ordered(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    (a.min(b), a.max(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use crate::outerplanar::outerplane_embedding;

    fn dag(n: u32, es: &[(u32, u32)]) -> Dag {
        Dag::new(n, es.iter().map(|&(a, b)| Edge::new(a, b)).collect()).unwrap()
    }

    #[test]
    fn triangle_is_a_star() {
        let d = dag(3, &[(0, 1), (0, 2), (1, 2)]);
        let o = outerplane_embedding(&d).unwrap();
        let t = extended_dual_tree(&d, &o);
        assert_eq!(t.node_count(), 4);
        assert_eq!(t.neighbors(0), &[1, 2, 3]);
        let r = root_at_edge(&d, &o, 1).unwrap();
        let f = r.face(r.root_face);
        assert_eq!(f.cycle, vec![0, 1, 2]);
        assert_eq!(f.k(), 2);
        assert!(f.children.iter().all(Option::is_none));
        assert_eq!(r.unrooted_edges(&t), t.tree_edges());
    }

    #[test]
    fn diamond_rooted_at_ac() {
        // a=0 b=1 c=2 d=3
        let d = dag(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
        let o = outerplane_embedding(&d).unwrap();
        let t = extended_dual_tree(&d, &o);
        assert_eq!(t.node_count(), 6);
        assert_eq!(t.tree_edges().len(), 5);
        let r = root_at_edge(&d, &o, 1).unwrap();
        let top = r.face(r.root_face);
        assert_eq!(top.cycle, vec![0, 1, 2]);
        let child = top.children[1].unwrap();
        assert_eq!(r.face(child).cycle, vec![1, 3, 2]);
        assert_eq!(r.face(child).parent, Some(r.root_face));
        assert_eq!(r.bottom_up, vec![child, r.root_face]);
        assert_eq!(r.unrooted_edges(&t), t.tree_edges());
        assert_eq!(root_at_edge(&d, &o, 2).unwrap_err(), EmbeddingError::EdgeNotOnOuterFace(2));
    }
}
