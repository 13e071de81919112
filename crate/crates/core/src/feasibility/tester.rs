//! Bottom-up feasible sets over the rooted dual tree and top-down assembly of
//! an upward embedding.

use serde::Serialize;
use thiserror::Error;

use super::{feasible_set, FeasibleSet, NodeContext, NodeWitness, PairMask, L};
use crate::dual_tree::{root_at_edge, RootedDualTree};
use crate::embedding::{PlaneEmbedding, Side, SideAssignment};
use crate::graph::{validate, Dag, EdgeId, ValidationReport, VertexId};
use crate::outerplanar::{outerplane_embedding, EmbeddingError, FaceId, OuterplaneEmbedding};
use crate::upward::{AngleLabeling, UpwardEmbedding};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TestError {
    #[error("input is not a biconnected outerplanar DAG: {0:?}")]
    InvalidGraph(ValidationReport),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

/// The data behind a positive answer, in a serializable form.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessRecord {
    /// Side of every outerplane face relative to its parent; `null` at the
    /// root face.
    pub sides: Vec<Option<Side>>,
    /// Chosen pair and inside angles of each face cycle, by outerplane face.
    pub pairs: Vec<(L, L)>,
    pub rho: Vec<Vec<L>>,
    pub labels: AngleLabeling,
    pub rotation: Vec<Vec<EdgeId>>,
    pub outer_face: FaceId,
}

/// Everything computed for one prescribed edge.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub edge: EdgeId,
    pub tree: RootedDualTree,
    /// Feasible set per outerplane face; faces after an early exit are `None`.
    pub feasible_sets: Vec<Option<FeasibleSet>>,
    pub witness: Option<(UpwardEmbedding, WitnessRecord)>,
}

impl Analysis {
    pub fn is_upward(&self) -> bool {
        self.witness.is_some()
    }

    /// The feasible set of the face next to the prescribed edge.
    pub fn root_set(&self) -> Option<&FeasibleSet> {
        self.feasible_sets[self.tree.root_face as usize].as_ref()
    }
}

fn checked_embedding(d: &Dag) -> Result<OuterplaneEmbedding, TestError> {
    let report = validate(d);
    if !report.all() {
        return Err(TestError::InvalidGraph(report));
    }
    Ok(outerplane_embedding(d)?)
}

/// Runs the full test for prescribed edge `e`, keeping the feasible sets.
pub fn analyze_with_edge(d: &Dag, e: EdgeId) -> Result<Analysis, TestError> {
    let o = checked_embedding(d)?;
    analyze(d, &o, e)
}

fn analyze(d: &Dag, o: &OuterplaneEmbedding, e: EdgeId) -> Result<Analysis, TestError> {
    let tree = root_at_edge(d, o, e)?;
    let mut sets: Vec<Option<FeasibleSet>> = vec![None; o.face_count()];
    for &s in &tree.bottom_up {
        let f = tree.face(s);
        let children: Vec<Option<PairMask>> = f
            .children
            .iter()
            .enumerate()
            .map(|(i, c)| c.map(|t| sets[t as usize].as_ref().expect("child before parent").mask_from(f.cycle[i])))
            .collect();
        let ctx = NodeContext::from_cycle(d, f.cycle.clone(), &f.edges, f.parent_edge, children);
        let set = feasible_set(&ctx);
        let empty = set.is_empty();
        sets[s as usize] = Some(set);
        if empty {
            return Ok(Analysis { edge: e, tree, feasible_sets: sets, witness: None });
        }
    }
    let witness = assemble(d, o, &tree, &sets);
    Ok(Analysis { edge: e, tree, feasible_sets: sets, witness: Some(witness) })
}

/// Where a disk bounded by a face cycle lies in the final embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Region {
    Outer,
    Node(FaceId),
}

fn assemble(
    d: &Dag,
    o: &OuterplaneEmbedding,
    tree: &RootedDualTree,
    sets: &[Option<FeasibleSet>],
) -> (UpwardEmbedding, WitnessRecord) {
    let fcount = o.face_count();
    let set = |s: FaceId| sets[s as usize].as_ref().expect("all sets computed");
    let mut chosen: Vec<Option<&NodeWitness>> = vec![None; fcount];
    let mut pairs = vec![(L::Small, L::Small); fcount];
    let mut sides: Vec<Option<Side>> = vec![None; fcount];
    let mut enclosing = vec![Region::Outer; fcount];
    let root = &set(tree.root_face).pairs[0];
    chosen[tree.root_face as usize] = Some(&root.witness);
    pairs[tree.root_face as usize] = (root.mu, root.nu);
    for &s in tree.bottom_up.iter().rev() {
        let f = tree.face(s);
        let w = chosen[s as usize].expect("parent chosen first");
        for (i, c) in f.children.iter().enumerate() {
            let Some(t) = *c else { continue };
            let (a, b) = (w.mus[i], w.nus[i]);
            let ts = set(t);
            let (mu, nu) = if ts.endpoints.0 == f.cycle[i] { (a, b) } else { (b, a) };
            let p = ts.get(mu, nu).expect("parent witness uses a feasible child pair");
            chosen[t as usize] = Some(&p.witness);
            pairs[t as usize] = (mu, nu);
            let side = w.sides[i].expect("defined child has a side");
            sides[t as usize] = Some(side);
            enclosing[t as usize] = match side {
                Side::In => Region::Node(s),
                Side::Out => enclosing[s as usize],
            };
        }
    }
    let assignment = SideAssignment { root_edge: tree.root_edge, sides: sides.clone() };
    let emb = PlaneEmbedding::from_sides(d, o, tree, &assignment).expect("side assignments are planar");

    // half-turns at v: the disk of C_s takes rho + 1, and each region gets
    // what its own disk leaves after the disks nested directly in it
    let mut acc: Vec<(VertexId, Region, i32, bool)> = Vec::new();
    for s in 0..fcount as FaceId {
        let f = tree.face(s);
        let w = chosen[s as usize].expect("every face chosen");
        for (j, &v) in f.cycle.iter().enumerate() {
            let h = w.rho[j].value() as i32 + 1;
            acc.push((v, Region::Node(s), h, true));
            acc.push((v, enclosing[s as usize], -h, false));
        }
    }
    acc.sort_unstable_by_key(|x| (x.0, x.1));
    let face_of = |r: Region| match r {
        Region::Outer => emb.outer_face(),
        Region::Node(s) => emb.face_of_node(s).expect("derived embedding"),
    };
    let mut entries = Vec::with_capacity(emb.angle_count());
    let mut i = 0;
    while i < acc.len() {
        let (v, r) = (acc[i].0, acc[i].1);
        let mut total = 0;
        let mut based = false;
        while i < acc.len() && (acc[i].0, acc[i].1) == (v, r) {
            total += acc[i].2;
            based |= acc[i].3;
            i += 1;
        }
        if !based {
            total += 2;
        }
        let l = L::from_value(total as i64 - 1).expect("angle arithmetic stays in range");
        entries.push((v, face_of(r), l));
    }
    let labels = AngleLabeling::from_entries(entries).expect("one angle per vertex and face");
    let record = WitnessRecord {
        sides,
        pairs,
        rho: chosen.iter().map(|w| w.expect("chosen").rho.clone()).collect(),
        labels: labels.clone(),
        rotation: emb.rotations().to_vec(),
        outer_face: emb.outer_face(),
    };
    let up = match UpwardEmbedding::new(d, emb, labels) {
        Ok(u) => u,
        Err(err) => panic!("assembled labeling is not upward: {err}"),
    };
    (up, record)
}

/// Tests for an upward embedding with `e` on the outer face.
pub fn test_upward_with_edge(d: &Dag, e: EdgeId) -> Result<Option<UpwardEmbedding>, TestError> {
    Ok(analyze_with_edge(d, e)?.witness.map(|w| w.0))
}

/// Tries every outer edge of the outerplane embedding in edge order and
/// returns the first analysis that succeeds, or the last one when none does.
pub fn test_upward_any(d: &Dag) -> Result<Analysis, TestError> {
    let o = checked_embedding(d)?;
    let mut last = None;
    for e in o.outer_edges() {
        let a = analyze(d, &o, e)?;
        if a.is_upward() {
            return Ok(a);
        }
        last = Some(a);
    }
    Ok(last.expect("a biconnected graph has outer edges"))
}
