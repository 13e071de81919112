//! The gadget DAG of a Partition instance, the upward embedding built from a
//! balanced split, and the split read back from any upward embedding.
//!
//! The gadget is a cycle `u_0 .. u_N` with `N = 6n + 2k + 1`. The inner part
//! `u_1 .. u_{N-1}` is cut into paths `P_1 .. P_k` with `6 a_i + 2` vertices
//! each, and every cycle edge `(u_j, u_{j+1})` inside some `P_i` gets a
//! parallel path `Q_j = (u_j, v_j, w_j, u_{j+1})`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dual_tree::root_at_edge;
use crate::embedding::{PlaneEmbedding, Side, SideAssignment};
use crate::graph::{Dag, Edge, EdgeId, VertexId};
use crate::outerplanar::{outerplane_embedding, FaceId};
use crate::upward::{check_upward, AngleLabel, AngleLabeling, UpwardEmbedding};

/// A multiset of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionInstance {
    values: Vec<u64>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("the instance has no values")]
    Empty,
    #[error("value {0:?} is not a positive integer")]
    NotPositive(String),
}

impl PartitionInstance {
    pub fn new(values: Vec<u64>) -> Result<Self, InstanceError> {
        if values.is_empty() {
            return Err(InstanceError::Empty);
        }
        if let Some(v) = values.iter().find(|&&v| v == 0) {
            return Err(InstanceError::NotPositive(v.to_string()));
        }
        Ok(PartitionInstance { values })
    }

    /// Parses whitespace-separated positive decimal integers.
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let values = text
            .split_whitespace()
            .map(|t| t.parse::<u64>().ok().filter(|&v| v > 0).ok_or_else(|| InstanceError::NotPositive(t.into())))
            .collect::<Result<Vec<_>, _>>()?;
        PartitionInstance::new(values)
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn sum(&self) -> u64 {
        self.values.iter().sum()
    }
}

/// The path `Q_j` attached along cycle edge `(u_j, u_{j+1})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QPath {
    pub j: u32,
    pub v: VertexId,
    pub w: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetDag {
    pub dag: Dag,
    pub values: Vec<u64>,
    /// `u[j]` is the vertex `u_j`.
    pub u: Vec<VertexId>,
    pub q_paths: Vec<QPath>,
    /// Inclusive index range `[first, last]` of each `P_i` along the cycle.
    pub p_ranges: Vec<(u32, u32)>,
    pub prescribed_edge: EdgeId,
}

/// The JSON form of the gadget bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sidecar {
    pub values: Vec<u64>,
    pub u: Vec<VertexId>,
    pub q_paths: Vec<(u32, VertexId, VertexId)>,
    pub p_ranges: Vec<(u32, u32)>,
    pub prescribed_edge: (VertexId, VertexId),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("the chosen values sum to {got}, not {want}")]
    UnbalancedPartition { got: u64, want: String },
    #[error("index {0} is not a value of the instance")]
    NoSuchValue(usize),
    #[error("the embedding is not an upward embedding of the gadget")]
    InvalidEmbedding,
    #[error("the sidecar does not describe this graph: {0}")]
    SidecarMismatch(String),
}

/// Builds the gadget in time linear in `n`.
pub fn build_gadget(s: &PartitionInstance) -> GadgetDag {
    let n = s.sum();
    let k = s.values.len() as u64;
    let last = (6 * n + 2 * k + 1) as u32;
    let cycle_len = last + 1;
    let q_count = (6 * n + k) as usize;
    let vertex_count = cycle_len + 2 * q_count as u32;
    let mut p_ranges = Vec::with_capacity(s.values.len());
    let mut start = 1u32;
    for &a in &s.values {
        let len = (6 * a + 2) as u32;
        p_ranges.push((start, start + len - 1));
        start += len;
    }
    debug_assert_eq!(start, last);

    let mut edges = Vec::with_capacity(cycle_len as usize + 3 * q_count);
    let mut p = 0;
    for j in 0..last {
        let (a, b) = (j, j + 1);
        let e = if j == 0 {
            Edge::new(0, 1)
        } else if b == last {
            Edge::new(a, b)
        } else {
            while p_ranges[p].1 < a {
                p += 1;
            }
            if b <= p_ranges[p].1 {
                if a % 2 == 1 {
                    Edge::new(a, b)
                } else {
                    Edge::new(b, a)
                }
            } else {
                Edge::new(a, b)
            }
        };
        edges.push(e);
    }
    let prescribed_edge = edges.len() as EdgeId;
    edges.push(Edge::new(0, last));
    let mut q_paths = Vec::with_capacity(q_count);
    let mut next = cycle_len;
    for &(first, end) in &p_ranges {
        for j in first..end {
            let (v, w) = (next, next + 1);
            next += 2;
            if j % 2 == 1 {
                edges.extend([Edge::new(v, j), Edge::new(v, w), Edge::new(j + 1, w)]);
            } else {
                edges.extend([Edge::new(j, v), Edge::new(w, v), Edge::new(w, j + 1)]);
            }
            q_paths.push(QPath { j, v, w });
        }
    }
    let dag = Dag::from_edges_unchecked(vertex_count, edges);
    GadgetDag { dag, values: s.values.clone(), u: (0..cycle_len).collect(), q_paths, p_ranges, prescribed_edge }
}

impl GadgetDag {
    pub fn last_index(&self) -> u32 {
        self.u.len() as u32 - 1
    }

    /// Indices into `q_paths` of the paths along `P_i`.
    pub fn q_range(&self, i: usize) -> std::ops::Range<usize> {
        let before: u32 = self.p_ranges[..i].iter().map(|r| r.1 - r.0).sum();
        let len = self.p_ranges[i].1 - self.p_ranges[i].0;
        before as usize..(before + len) as usize
    }

    pub fn sidecar(&self) -> Sidecar {
        let e = self.dag.edge(self.prescribed_edge);
        Sidecar {
            values: self.values.clone(),
            u: self.u.clone(),
            q_paths: self.q_paths.iter().map(|q| (q.j, q.v, q.w)).collect(),
            p_ranges: self.p_ranges.clone(),
            prescribed_edge: (e.tail, e.head),
        }
    }

    /// Reattaches a sidecar to a parsed graph after checking that it is the
    /// gadget of the recorded values.
    pub fn from_sidecar(dag: Dag, side: &Sidecar) -> Result<Self, ReductionError> {
        let inst = PartitionInstance::new(side.values.clone())
            .map_err(|e| ReductionError::SidecarMismatch(e.to_string()))?;
        let g = build_gadget(&inst);
        if g.dag != dag {
            return Err(ReductionError::SidecarMismatch("graph differs from the gadget of the values".into()));
        }
        if g.sidecar() != *side {
            return Err(ReductionError::SidecarMismatch("index maps differ".into()));
        }
        Ok(g)
    }

    fn cycle_edge(&self, j: u32) -> EdgeId {
        j
    }

    fn u_edge_before(&self, j: u32) -> EdgeId {
        if j == 0 {
            self.prescribed_edge
        } else {
            j - 1
        }
    }

    /// The edge of `Q_j` at `u_j`.
    fn q_edge(&self, qi: usize) -> EdgeId {
        self.prescribed_edge + 1 + 3 * qi as EdgeId
    }
}

/// Region of the sphere cut by the cycle: `A` holds the face left of the
/// dart `u_0 -> u_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Region {
    A,
    B,
}

struct Layout {
    q_region: Vec<Region>,
    big_a: FaceId,
    big_b: FaceId,
}

fn layout(g: &GadgetDag, emb: &PlaneEmbedding) -> Layout {
    let d = &g.dag;
    let big_a = emb.face_of_dart(d, 0, 0);
    let big_b = emb.face_of_dart(d, 0, 1);
    let q_region = g
        .q_paths
        .iter()
        .enumerate()
        .map(|(qi, q)| {
            // region A at u_j spans the rotation from the edge to u_{j+1}
            // forward to the edge to u_{j-1}
            let rot = emb.rotation(q.j);
            let pos = |e: EdgeId| rot.iter().position(|&x| x == e).expect("edge at u_j");
            let len = rot.len();
            let ahead = |e: EdgeId| (pos(e) + len - pos(g.cycle_edge(q.j))) % len;
            if ahead(g.q_edge(qi)) < ahead(g.u_edge_before(q.j)) {
                Region::A
            } else {
                Region::B
            }
        })
        .collect();
    Layout { q_region, big_a, big_b }
}

impl Layout {
    fn small_face(&self, g: &GadgetDag, emb: &PlaneEmbedding, qi: usize) -> FaceId {
        let j = g.q_paths[qi].j;
        match self.q_region[qi] {
            Region::A => emb.face_of_dart(&g.dag, g.cycle_edge(j), j),
            Region::B => emb.face_of_dart(&g.dag, g.cycle_edge(j), j + 1),
        }
    }

    /// The region holding the outer face.
    fn outside(&self, g: &GadgetDag, emb: &PlaneEmbedding) -> Region {
        let f = emb.outer_face();
        if f == self.big_a {
            return Region::A;
        }
        if f == self.big_b {
            return Region::B;
        }
        let qi = (0..g.q_paths.len()).find(|&qi| self.small_face(g, emb, qi) == f).expect("outer face is a face of G");
        self.q_region[qi]
    }
}

/// Side of every `Q_j` relative to the cycle, in `q_paths` order.
pub fn q_sides(g: &GadgetDag, emb: &PlaneEmbedding) -> Vec<Side> {
    let l = layout(g, emb);
    let out = l.outside(g, emb);
    l.q_region.iter().map(|&r| if r == out { Side::Out } else { Side::In }).collect()
}

/// The same embedding with every `C_j` bounding an internal face and every
/// `Q_j` on the same side of the cycle.
pub fn normalize_embedding(g: &GadgetDag, emb: &PlaneEmbedding) -> PlaneEmbedding {
    let l = layout(g, emb);
    let target = match l.outside(g, emb) {
        Region::A => l.big_a,
        Region::B => l.big_b,
    };
    if target == emb.outer_face() {
        emb.clone()
    } else {
        emb.with_outer_face(target)
    }
}

/// The upward embedding with the paths of the values at `s1` inside the
/// cycle and all others outside.
pub fn witness_embedding(g: &GadgetDag, s1: &[usize]) -> Result<UpwardEmbedding, ReductionError> {
    let k = g.values.len();
    let mut inside = vec![false; k];
    for &i in s1 {
        if i >= k {
            return Err(ReductionError::NoSuchValue(i));
        }
        inside[i] = true;
    }
    let total: u64 = g.values.iter().sum();
    let got: u64 = (0..k).filter(|&i| inside[i]).map(|i| g.values[i]).sum();
    if 2 * got != total {
        return Err(ReductionError::UnbalancedPartition { got, want: format!("{}/2", total) });
    }
    let d = &g.dag;
    let o = outerplane_embedding(d).expect("gadgets are outerplanar");
    let tree = root_at_edge(d, &o, g.prescribed_edge).expect("prescribed edge is outer");
    let mut sides = vec![None; o.face_count()];
    let mut small = vec![0 as FaceId; g.q_paths.len()];
    for i in 0..k {
        for qi in g.q_range(i) {
            let j = g.q_paths[qi].j;
            let [a, b] = o.faces_of_edge(g.cycle_edge(j));
            let s = if a == tree.root_face { b } else { a };
            small[qi] = s;
            sides[s as usize] = Some(if inside[i] { Side::In } else { Side::Out });
        }
    }
    let emb = PlaneEmbedding::from_sides(d, &o, &tree, &SideAssignment { root_edge: g.prescribed_edge, sides })
        .expect("side assignments are planar");
    let small: Vec<FaceId> = small.iter().map(|&s| emb.face_of_node(s).expect("derived")).collect();
    let outer = emb.outer_face();
    let central = emb.face_of_node(tree.root_face).expect("derived");
    let last = g.last_index();

    let mut entries = Vec::with_capacity(emb.angle_count());
    let mut put = |v: VertexId, f: FaceId, l: AngleLabel| entries.push((v, f, l));
    for (qi, q) in g.q_paths.iter().enumerate() {
        for x in [q.v, q.w] {
            for (f, _, _) in emb.angles_at(d, x) {
                put(x, f, if f == small[qi] { AngleLabel::Small } else { AngleLabel::Large });
            }
        }
    }
    for (i, &(first, end)) in g.p_ranges.iter().enumerate() {
        let qs = g.q_range(i);
        for j in first..=end {
            let mine: Vec<FaceId> = qs
                .clone()
                .filter(|&qi| g.q_paths[qi].j == j || g.q_paths[qi].j + 1 == j)
                .map(|qi| small[qi])
                .collect();
            for (f, _, _) in emb.angles_at(d, j) {
                let l = if mine.contains(&f) {
                    AngleLabel::Flat
                } else if j != first && j != end {
                    AngleLabel::Small
                } else if inside[i] == (f == outer) {
                    AngleLabel::Flat
                } else {
                    AngleLabel::Small
                };
                put(j, f, l);
            }
        }
    }
    for x in [0, last] {
        for (f, _, _) in emb.angles_at(d, x) {
            debug_assert!(f == outer || f == central);
            put(x, f, if f == outer { AngleLabel::Large } else { AngleLabel::Small });
        }
    }
    let lab = AngleLabeling::from_entries(entries).expect("each angle labeled once");
    match UpwardEmbedding::new(d, emb, lab) {
        Ok(u) => Ok(u),
        Err(e) => panic!("gadget witness labeling is not upward: {e}"),
    }
}

/// Angle tallies of one `P_i` over its vertices in the outer face `f` and
/// the internal face `g` at `u_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Contribution {
    pub outer_small: u64,
    pub outer_large: u64,
    pub central_small: u64,
    pub central_large: u64,
}

/// Tallies per `P_i` for an embedding in which every `C_j` bounds an
/// internal face.
pub fn contributions(g: &GadgetDag, ue: &UpwardEmbedding) -> Vec<Contribution> {
    let d = &g.dag;
    let emb = ue.embedding();
    let lab = ue.labeling();
    let outer = emb.outer_face();
    let central = emb
        .angles_at(d, 0)
        .map(|a| a.0)
        .find(|&f| f != outer)
        .expect("u_0 has an internal face");
    (0..g.values.len())
        .map(|i| {
            let (first, end) = g.p_ranges[i];
            let mut verts: Vec<VertexId> = (first..=end).collect();
            for qi in g.q_range(i) {
                verts.extend([g.q_paths[qi].v, g.q_paths[qi].w]);
            }
            let mut c = Contribution { outer_small: 0, outer_large: 0, central_small: 0, central_large: 0 };
            for v in verts {
                for (f, l) in [(outer, lab.get(v, outer)), (central, lab.get(v, central))] {
                    match (f == outer, l) {
                        (true, Some(AngleLabel::Small)) => c.outer_small += 1,
                        (true, Some(AngleLabel::Large)) => c.outer_large += 1,
                        (false, Some(AngleLabel::Small)) => c.central_small += 1,
                        (false, Some(AngleLabel::Large)) => c.central_large += 1,
                        _ => {}
                    }
                }
            }
            c
        })
        .collect()
}

/// A split of the instance read from an embedding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extracted {
    pub side1: Vec<usize>,
    pub side2: Vec<usize>,
    pub sum1: u64,
    pub sum2: u64,
}

/// Reads a split off an upward embedding of the gadget: `a_i` joins the
/// first side when the first path along `P_i` lies inside the cycle.
pub fn extract_partition(
    g: &GadgetDag,
    emb: &PlaneEmbedding,
    lab: &AngleLabeling,
) -> Result<Extracted, ReductionError> {
    let ok = check_upward(emb, lab, &g.dag).map(|r| r.is_upward()).unwrap_or(false);
    if !ok {
        return Err(ReductionError::InvalidEmbedding);
    }
    let l = layout(g, emb);
    let out = l.outside(g, emb);
    let mut x = Extracted { side1: Vec::new(), side2: Vec::new(), sum1: 0, sum2: 0 };
    for i in 0..g.values.len() {
        let first = g.q_range(i).start;
        if l.q_region[first] != out {
            x.side1.push(i);
            x.sum1 += g.values[i];
        } else {
            x.side2.push(i);
            x.sum2 += g.values[i];
        }
    }
    assert_eq!(x.sum1, x.sum2, "an upward embedding of the gadget must split evenly");
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate;

    fn gadget(v: &[u64]) -> GadgetDag {
        build_gadget(&PartitionInstance::new(v.to_vec()).unwrap())
    }

    #[test]
    fn sizes() {
        let g = gadget(&[1, 1, 2]);
        assert_eq!(g.dag.vertex_count(), 86);
        assert_eq!(g.u.len(), 32);
        let g = gadget(&[1, 1]);
        assert_eq!(g.dag.vertex_count(), 46);
        assert_eq!(g.p_ranges, vec![(1, 8), (9, 16)]);
        assert_eq!(g.q_paths.len(), 14);
        let e = g.dag.edge(g.prescribed_edge);
        assert_eq!((e.tail, e.head), (0, 17));
        assert!(validate(&g.dag).all());
        assert_eq!(g.dag.max_degree(), 4);
    }

    #[test]
    fn poles_and_path_ends() {
        let g = gadget(&[1, 2]);
        let d = &g.dag;
        assert!(d.incident(0).iter().all(|&e| d.is_out(e, 0)));
        let last = g.last_index();
        assert!(d.incident(last).iter().all(|&e| !d.is_out(e, last)));
        for &(a, b) in &g.p_ranges {
            assert_eq!((d.degree(a), d.degree(b)), (3, 3));
            assert!(!d.is_switch(a) && !d.is_switch(b));
        }
    }

    #[test]
    fn parse_instances() {
        assert_eq!(PartitionInstance::parse(" 1 1\n2 ").unwrap().values(), &[1, 1, 2]);
        assert_eq!(PartitionInstance::parse(""), Err(InstanceError::Empty));
        assert!(PartitionInstance::parse("1 0").is_err());
        assert!(PartitionInstance::parse("1 x").is_err());
    }

    #[test]
    fn witness_round_trip() {
        let g = gadget(&[1, 1, 2]);
        let ue = witness_embedding(&g, &[2]).unwrap();
        let x = extract_partition(&g, ue.embedding(), ue.labeling()).unwrap();
        assert_eq!((x.side1, x.side2), (vec![2], vec![0, 1]));
        assert_eq!(normalize_embedding(&g, ue.embedding()), *ue.embedding());
        let sides = q_sides(&g, ue.embedding());
        assert_eq!(sides.iter().filter(|&&s| s == Side::In).count(), 13);
        assert_eq!(witness_embedding(&gadget(&[2]), &[]).unwrap_err(), ReductionError::UnbalancedPartition {
            got: 0,
            want: "2/2".into()
        });
    }

    #[test]
    fn outer_count_matches() {
        let g = gadget(&[1, 1]);
        let ue = witness_embedding(&g, &[0]).unwrap();
        let outer = ue.embedding().outer_face();
        let large = ue.labeling().entries().iter().filter(|x| x.1 == outer && x.2 == AngleLabel::Large).count();
        assert_eq!(large, 16);
        let c = contributions(&g, &ue);
        assert_eq!(c[0], Contribution { outer_small: 6, outer_large: 0, central_small: 8, central_large: 14 });
        assert_eq!(c[1], Contribution { outer_small: 8, outer_large: 14, central_small: 6, central_large: 0 });
    }

    #[test]
    fn normalize_moves_outer_off_small_face() {
        let g = gadget(&[1, 1]);
        let ue = witness_embedding(&g, &[0]).unwrap();
        let emb = ue.embedding();
        let before = q_sides(&g, emb);
        // pick the small face of an outside path as the outer face
        let q = g.q_range(1).start;
        let l = layout(&g, emb);
        let moved = emb.with_outer_face(l.small_face(&g, emb, q));
        assert_eq!(q_sides(&g, &moved), before);
        let back = normalize_embedding(&g, &moved);
        assert_eq!(back.outer_face(), emb.outer_face());
        assert_eq!(normalize_embedding(&g, &back), back);
    }

    #[test]
    fn sidecar_round_trip() {
        let g = gadget(&[3, 1]);
        let s = g.sidecar();
        let json = serde_json::to_string(&s).unwrap();
        let back: Sidecar = serde_json::from_str(&json).unwrap();
        assert_eq!(GadgetDag::from_sidecar(g.dag.clone(), &back).unwrap(), g);
        let other = gadget(&[2, 2]);
        assert!(GadgetDag::from_sidecar(other.dag, &back).is_err());
    }
}
