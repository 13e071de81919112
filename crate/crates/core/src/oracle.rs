//! Brute-force ground truth: every plane embedding with the prescribed edge
//! on the outer face, every angle labeling, and a generator of small inputs.
//!
//! Only the graph layer and the upward checker are used here.

use std::cell::Cell;
use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::dual_tree::root_at_edge;
use crate::embedding::{PlaneEmbedding, Side, SideAssignment};
use crate::graph::{validate, Dag, Edge, EdgeId, ValidationReport, VertexId};
use crate::outerplanar::{outerplane_embedding, EmbeddingError, FaceId};
use crate::upward::{check_upward, AngleLabel, AngleLabeling, UpwardEmbedding};

/// Default number of enumeration steps before giving up.
pub const DEFAULT_BUDGET: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("input is not a biconnected outerplanar DAG: {0:?}")]
    InvalidGraph(ValidationReport),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error("enumeration budget of {0} steps exhausted")]
    InstanceTooLarge(u64),
}

/// Every plane embedding with `e` on its outer face: one rotation system
/// per side assignment of the non-root faces, each with both faces at `e`
/// as the outer face.
pub fn enumerate_plane_embeddings(d: &Dag, e: EdgeId) -> Result<Vec<PlaneEmbedding>, OracleError> {
    let mut out = Vec::new();
    for_each_embedding(d, e, &Cell::new(u64::MAX), |emb| {
        out.push(emb);
        false
    })?;
    Ok(out)
}

fn for_each_embedding(
    d: &Dag,
    e: EdgeId,
    budget: &Cell<u64>,
    mut visit: impl FnMut(PlaneEmbedding) -> bool,
) -> Result<(), OracleError> {
    let report = validate(d);
    if !report.all() {
        return Err(OracleError::InvalidGraph(report));
    }
    let o = outerplane_embedding(d)?;
    let tree = root_at_edge(d, &o, e)?;
    let free: Vec<FaceId> = (0..o.face_count() as FaceId).filter(|&s| s != tree.root_face).collect();
    for mask in 0u64..1 << free.len() {
        let mut sides = vec![None; o.face_count()];
        for (b, &s) in free.iter().enumerate() {
            sides[s as usize] = Some(if mask >> b & 1 == 0 { Side::In } else { Side::Out });
        }
        let emb = PlaneEmbedding::from_sides(d, &o, &tree, &SideAssignment { root_edge: e, sides })?;
        let other = emb.face_of_node(tree.root_face).expect("derived embedding");
        for outer in [emb.outer_face(), other] {
            spend(budget, 1)?;
            if visit(emb.with_outer_face(outer)) {
                return Ok(());
            }
        }
    }
    Ok(())
}

fn spend(budget: &Cell<u64>, n: u64) -> Result<(), OracleError> {
    if budget.get() < n {
        return Err(OracleError::InstanceTooLarge(DEFAULT_BUDGET));
    }
    budget.set(budget.get() - n);
    Ok(())
}

/// Pairs of inside angles at the endpoints of `e` (smaller id first) over
/// all upward embeddings with `e` on the outer face, with one witness each.
#[derive(Clone, Debug, Serialize)]
pub struct BruteFeasibleSet {
    pub endpoints: (VertexId, VertexId),
    pub pairs: BTreeSet<(AngleLabel, AngleLabel)>,
    #[serde(skip)]
    pub witnesses: Vec<UpwardEmbedding>,
}

impl BruteFeasibleSet {
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// A search for one embedding: the forced part of the labeling and the
/// large-angle choices still open at switch vertices.
struct Labeler<'a> {
    d: &'a Dag,
    emb: &'a PlaneEmbedding,
    base: Vec<(VertexId, FaceId, AngleLabel)>,
    /// Per switch vertex, the faces of its angles.
    choices: Vec<(VertexId, Vec<FaceId>)>,
    need: Vec<i64>,
}

impl<'a> Labeler<'a> {
    /// `None` when no labeling can exist regardless of the choices.
    fn new(d: &'a Dag, emb: &'a PlaneEmbedding) -> Option<Self> {
        let mut base = Vec::new();
        let mut choices = Vec::new();
        let mut switch_angles = vec![0i64; emb.face_count()];
        for v in 0..d.vertex_count() {
            if d.is_switch(v) {
                let faces: Vec<FaceId> = emb.angles_at(d, v).map(|a| a.0).collect();
                for &f in &faces {
                    switch_angles[f as usize] += 1;
                }
                choices.push((v, faces));
                continue;
            }
            let mut flats = 0;
            for (f, a, b) in emb.angles_at(d, v) {
                if d.is_out(a, v) == d.is_out(b, v) {
                    switch_angles[f as usize] += 1;
                    base.push((v, f, AngleLabel::Small));
                } else {
                    flats += 1;
                    base.push((v, f, AngleLabel::Flat));
                }
            }
            if flats != 2 {
                return None;
            }
        }
        let mut need = Vec::with_capacity(emb.face_count());
        for (f, &s) in switch_angles.iter().enumerate() {
            let twice = if f as FaceId == emb.outer_face() { s + 2 } else { s - 2 };
            if twice < 0 || twice % 2 != 0 {
                return None;
            }
            need.push(twice / 2);
        }
        if need.iter().sum::<i64>() != choices.len() as i64 {
            return None;
        }
        Some(Labeler { d, emb, base, choices, need })
    }

    /// Finds a labeling whose outer-face labels at the listed vertices are as
    /// given.
    fn find(&self, forced: &[(VertexId, AngleLabel)], budget: &Cell<u64>) -> Result<Option<AngleLabeling>, OracleError> {
        let outer = self.emb.outer_face();
        for &(v, l) in forced {
            if let Some(&(_, _, b)) = self.base.iter().find(|x| x.0 == v && x.1 == outer) {
                if b != l {
                    return Ok(None);
                }
            }
        }
        let mut need = self.need.clone();
        let mut pick = vec![0usize; self.choices.len()];
        if !self.search(0, &mut need, &mut pick, forced, budget)? {
            return Ok(None);
        }
        let mut entries = self.base.clone();
        for ((v, faces), &j) in self.choices.iter().zip(&pick) {
            for (i, &f) in faces.iter().enumerate() {
                entries.push((*v, f, if i == j { AngleLabel::Large } else { AngleLabel::Small }));
            }
        }
        let lab = AngleLabeling::from_entries(entries).expect("angles are distinct");
        let report = check_upward(self.emb, &lab, self.d).expect("total labeling");
        assert!(report.is_upward(), "search produced a non-upward labeling: {report:?}");
        assert!(forced.iter().all(|&(v, l)| lab.get(v, outer) == Some(l)));
        Ok(Some(lab))
    }

    fn search(
        &self,
        at: usize,
        need: &mut [i64],
        pick: &mut [usize],
        forced: &[(VertexId, AngleLabel)],
        budget: &Cell<u64>,
    ) -> Result<bool, OracleError> {
        if at == self.choices.len() {
            return Ok(need.iter().all(|&x| x == 0));
        }
        spend(budget, 1)?;
        let (v, faces) = &self.choices[at];
        let want = forced.iter().find(|x| x.0 == *v).map(|x| x.1);
        if want == Some(AngleLabel::Flat) {
            return Ok(false);
        }
        for (j, &f) in faces.iter().enumerate() {
            if need[f as usize] == 0 {
                continue;
            }
            let at_outer = f == self.emb.outer_face();
            match want {
                Some(AngleLabel::Large) if !at_outer => continue,
                Some(AngleLabel::Small) if at_outer => continue,
                _ => {}
            }
            need[f as usize] -= 1;
            pick[at] = j;
            let found = self.search(at + 1, need, pick, forced, budget)?;
            need[f as usize] += 1;
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn endpoints(d: &Dag, e: EdgeId) -> (VertexId, VertexId) {
    let ed = d.edge(e);
    (ed.tail.min(ed.head), ed.tail.max(ed.head))
}

/// Exhaustive feasible set for prescribed edge `e`; `budget` caps the total
/// number of embeddings and search steps.
pub fn brute_feasible_set(d: &Dag, e: EdgeId, budget: u64) -> Result<BruteFeasibleSet, OracleError> {
    let ends = endpoints(d, e);
    let mut pairs = BTreeSet::new();
    let mut witnesses = Vec::new();
    let left = Cell::new(budget);
    let mut failure = None;
    for_each_embedding(d, e, &left, |emb| {
        let Some(lab) = Labeler::new(d, &emb) else { return false };
        for mu in AngleLabel::ALL {
            for nu in AngleLabel::ALL {
                if pairs.contains(&(mu, nu)) {
                    continue;
                }
                let forced = [(ends.0, mu.complement()), (ends.1, nu.complement())];
                match lab.find(&forced, &left) {
                    Ok(Some(l)) => {
                        pairs.insert((mu, nu));
                        witnesses.push(UpwardEmbedding::new(d, emb.clone(), l).expect("checked"));
                    }
                    Ok(None) => {}
                    Err(err) => {
                        failure = Some(err);
                        return true;
                    }
                }
            }
        }
        pairs.len() == 9
    })
    .map_err(|err| match err {
        OracleError::InstanceTooLarge(_) => OracleError::InstanceTooLarge(budget),
        other => other,
    })?;
    if let Some(err) = failure {
        return Err(match err {
            OracleError::InstanceTooLarge(_) => OracleError::InstanceTooLarge(budget),
            other => other,
        });
    }
    Ok(BruteFeasibleSet { endpoints: ends, pairs, witnesses })
}

/// The first upward embedding found with `e` on the outer face.
pub fn brute_upward_with_edge(d: &Dag, e: EdgeId, budget: u64) -> Result<Option<UpwardEmbedding>, OracleError> {
    let left = Cell::new(budget);
    let mut found = None;
    let mut failure = None;
    for_each_embedding(d, e, &left, |emb| {
        let Some(lab) = Labeler::new(d, &emb) else { return false };
        match lab.find(&[], &left) {
            Ok(Some(l)) => {
                found = Some(UpwardEmbedding::new(d, emb, l).expect("checked"));
                true
            }
            Ok(None) => false,
            Err(err) => {
                failure = Some(err);
                true
            }
        }
    })
    .map_err(|_| OracleError::InstanceTooLarge(budget))?;
    if failure.is_some() {
        return Err(OracleError::InstanceTooLarge(budget));
    }
    Ok(found)
}

/// An upward labeling of the fixed embedding `emb`, if one exists.
pub fn brute_labeling(d: &Dag, emb: &PlaneEmbedding, budget: u64) -> Result<Option<AngleLabeling>, OracleError> {
    let Some(lab) = Labeler::new(d, emb) else { return Ok(None) };
    lab.find(&[], &Cell::new(budget)).map_err(|_| OracleError::InstanceTooLarge(budget))
}

/// Whether some outer edge admits an upward embedding. The budget applies to
/// each edge separately.
pub fn brute_test_upward(d: &Dag, budget: u64) -> Result<bool, OracleError> {
    let report = validate(d);
    if !report.all() {
        return Err(OracleError::InvalidGraph(report));
    }
    let o = outerplane_embedding(d)?;
    for e in o.outer_edges() {
        if brute_upward_with_edge(d, e, budget)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The budget from `UPDAG_BUDGET`, or [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> u64 {
    std::env::var("UPDAG_BUDGET").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

/// Undirected biconnected outerplanar graph built by gluing polygons onto
/// outer edges, as a vertex count and edge list.
fn glue_polygons(rng: &mut ChaCha8Rng, lens: &[usize]) -> (u32, Vec<(u32, u32)>) {
    let first = lens[0];
    let mut n = first as u32;
    let mut edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    // edges still on the outer face, each used at most once as a hinge
    let mut outer: Vec<(u32, u32)> = edges.clone();
    for &len in &lens[1..] {
        let at = rng.gen_range(0..outer.len());
        let (a, b) = outer.swap_remove(at);
        let mut prev = a;
        for _ in 0..len - 2 {
            edges.push((prev, n));
            outer.push((prev, n));
            prev = n;
            n += 1;
        }
        edges.push((prev, b));
        outer.push((prev, b));
    }
    (n, edges)
}

fn orient(rng: &mut ChaCha8Rng, n: u32, pairs: &[(u32, u32)]) -> Dag {
    let mut rank: Vec<u32> = (0..n).collect();
    rank.shuffle(rng);
    let edges = pairs
        .iter()
        .map(|&(a, b)| if rank[a as usize] < rank[b as usize] { Edge::new(a, b) } else { Edge::new(b, a) })
        .collect();
    Dag::new(n, edges).expect("polygon gluing gives a simple graph")
}

/// A random biconnected outerplanar DAG with between 1 and `max_faces`
/// internal faces of length 3 to `max_face_len`, oriented along a random
/// vertex order. The same seed always gives the same graph.
pub fn random_outerplanar_dag(seed: u64, max_faces: usize, max_face_len: usize) -> Dag {
    assert!(max_faces >= 1 && max_face_len >= 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let faces = rng.gen_range(1..=max_faces);
    let lens: Vec<usize> = (0..faces).map(|_| rng.gen_range(3..=max_face_len)).collect();
    let (n, pairs) = glue_polygons(&mut rng, &lens);
    orient(&mut rng, n, &pairs)
}

/// Like [`random_outerplanar_dag`] but with at most `max_vertices` vertices
/// and face lengths up to `max_vertices`.
pub fn random_small_dag(seed: u64, max_vertices: u32) -> Dag {
    assert!(max_vertices >= 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = rng.gen_range(3..=max_vertices);
    let mut lens = vec![rng.gen_range(3..=target) as usize];
    let mut n = lens[0] as u32;
    while n < target {
        let len = rng.gen_range(3..=(target - n + 2).min(6)) as usize;
        lens.push(len);
        n += len as u32 - 2;
    }
    let (n, pairs) = glue_polygons(&mut rng, &lens);
    orient(&mut rng, n, &pairs)
}

/// Every set of pairwise non-crossing chords of the `n`-gon, as chord lists.
pub fn polygon_dissections(n: u32) -> Vec<Vec<(u32, u32)>> {
    let mut all: Vec<(u32, u32)> = Vec::new();
    for a in 0..n {
        for b in a + 2..n {
            if !(a == 0 && b == n - 1) {
                all.push((a, b));
            }
        }
    }
    let cross = |p: (u32, u32), q: (u32, u32)| {
        (p.0 < q.0 && q.0 < p.1 && p.1 < q.1) || (q.0 < p.0 && p.0 < q.1 && q.1 < p.1)
    };
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        i: usize,
        all: &[(u32, u32)],
        cur: &mut Vec<(u32, u32)>,
        out: &mut Vec<Vec<(u32, u32)>>,
        cross: &dyn Fn((u32, u32), (u32, u32)) -> bool,
    ) {
        if i == all.len() {
            out.push(cur.clone());
            return;
        }
        rec(i + 1, all, cur, out, cross);
        if cur.iter().all(|&c| !cross(c, all[i])) {
            cur.push(all[i]);
            rec(i + 1, all, cur, out, cross);
            cur.pop();
        }
    }
    rec(0, &all, &mut cur, &mut out, &cross);
    out
}

/// The acyclic orientations of an undirected edge list, each as the DAG
/// whose edge `i` keeps or reverses `pairs[i]` by bit `i` of the mask.
pub fn acyclic_orientations(n: u32, pairs: &[(u32, u32)]) -> Vec<Dag> {
    assert!(pairs.len() < 64);
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let edges: Vec<Edge> = pairs
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| if mask >> i & 1 == 0 { Edge::new(a, b) } else { Edge::new(b, a) })
            .collect();
        let d = Dag::new(n, edges).expect("simple graph");
        if crate::graph::is_acyclic(&d) {
            out.push(d);
        }
    }
    out
}

/// The polygon edges of the `n`-gon followed by `chords`.
pub fn polygon_with_chords(n: u32, chords: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut pairs: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    pairs.extend_from_slice(chords);
    pairs
}
