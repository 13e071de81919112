//! Angle labelings and the combinatorial characterization of upward plane
//! embeddings.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::embedding::PlaneEmbedding;
use crate::graph::{Dag, VertexId};
use crate::outerplanar::FaceId;

/// Small (`-1`), flat (`0`) or large (`+1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AngleLabel {
    Small,
    Flat,
    Large,
}

impl AngleLabel {
    pub const ALL: [AngleLabel; 3] = [AngleLabel::Small, AngleLabel::Flat, AngleLabel::Large];

    pub fn value(self) -> i8 {
        match self {
            AngleLabel::Small => -1,
            AngleLabel::Flat => 0,
            AngleLabel::Large => 1,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            -1 => Some(AngleLabel::Small),
            0 => Some(AngleLabel::Flat),
            1 => Some(AngleLabel::Large),
            _ => None,
        }
    }

    /// The complementary angle on the other side of a closed curve.
    pub fn complement(self) -> Self {
        match self {
            AngleLabel::Small => AngleLabel::Large,
            AngleLabel::Flat => AngleLabel::Flat,
            AngleLabel::Large => AngleLabel::Small,
        }
    }
}

impl Serialize for AngleLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i8(self.value())
    }
}

impl<'de> Deserialize<'de> for AngleLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        AngleLabel::from_value(v).ok_or_else(|| serde::de::Error::custom(format!("angle label {v}")))
    }
}

/// A map `(vertex, face) -> label`, stored sorted by key.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(VertexId, FaceId, AngleLabel)>", into = "Vec<(VertexId, FaceId, AngleLabel)>")]
pub struct AngleLabeling {
    entries: Vec<(VertexId, FaceId, AngleLabel)>,
}

impl TryFrom<Vec<(VertexId, FaceId, AngleLabel)>> for AngleLabeling {
    type Error = UpwardError;
    fn try_from(v: Vec<(VertexId, FaceId, AngleLabel)>) -> Result<Self, UpwardError> {
        AngleLabeling::from_entries(v)
    }
}

impl From<AngleLabeling> for Vec<(VertexId, FaceId, AngleLabel)> {
    fn from(l: AngleLabeling) -> Self {
        l.entries
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UpwardError {
    #[error("labeling does not match the angles of the embedding")]
    DomainMismatch,
    #[error("vertex {0} is not on the outer face")]
    NotOnOuterFace(VertexId),
}

impl AngleLabeling {
    /// Sorts the entries; duplicate keys are a domain error.
    pub fn from_entries(mut entries: Vec<(VertexId, FaceId, AngleLabel)>) -> Result<Self, UpwardError> {
        entries.sort_unstable_by_key(|&(v, f, _)| (v, f));
        if entries.windows(2).any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(UpwardError::DomainMismatch);
        }
        Ok(AngleLabeling { entries })
    }

    pub fn get(&self, v: VertexId, f: FaceId) -> Option<AngleLabel> {
        self.entries
            .binary_search_by_key(&(v, f), |&(a, b, _)| (a, b))
            .ok()
            .map(|i| self.entries[i].2)
    }

    pub fn set(&mut self, v: VertexId, f: FaceId, l: AngleLabel) {
        match self.entries.binary_search_by_key(&(v, f), |&(a, b, _)| (a, b)) {
            Ok(i) => self.entries[i].2 = l,
            Err(i) => self.entries.insert(i, (v, f, l)),
        }
    }

    pub fn entries(&self) -> &[(VertexId, FaceId, AngleLabel)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "at", rename_all = "lowercase")]
pub enum Location {
    Angle { vertex: VertexId, face: FaceId },
    Vertex { vertex: VertexId },
    Face { face: FaceId },
}

/// Outcome of one condition: `None` when it holds, else the first offender.
pub type Condition = Option<Location>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub up0: Condition,
    pub up1: Condition,
    pub up2: Condition,
    pub up3: Condition,
}

impl CheckReport {
    pub fn is_upward(&self) -> bool {
        self.up0.is_none() && self.up1.is_none() && self.up2.is_none() && self.up3.is_none()
    }
}

/// Checks the four angle conditions of an upward plane embedding:
///
/// * switch angles are `±1` and all other angles are `0`;
/// * a switch vertex of degree `d` has `d-1` small angles and one large one;
/// * any other vertex has `d-2` small angles and two flat ones;
/// * an internal face has two more small than large angles, the outer face
///   two fewer.
///
/// An angle is a switch angle when both of its edges leave, or both enter, its
/// vertex. All four conditions are evaluated.
pub fn check_upward(emb: &PlaneEmbedding, lab: &AngleLabeling, d: &Dag) -> Result<CheckReport, UpwardError> {
    if lab.len() != emb.angle_count() {
        return Err(UpwardError::DomainMismatch);
    }
    let mut report = CheckReport { up0: None, up1: None, up2: None, up3: None };
    let mut small = vec![0i64; emb.face_count()];
    let mut large = vec![0i64; emb.face_count()];
    for v in 0..d.vertex_count() {
        let switch_vertex = d.is_switch(v);
        let deg = d.degree(v) as i64;
        let mut counts = [0i64; 3];
        for (f, a, b) in emb.angles_at(d, v) {
            let l = lab.get(v, f).ok_or(UpwardError::DomainMismatch)?;
            let switch_angle = d.is_out(a, v) == d.is_out(b, v);
            let ok = if switch_angle { l != AngleLabel::Flat } else { l == AngleLabel::Flat };
            if !ok && report.up0.is_none() {
                report.up0 = Some(Location::Angle { vertex: v, face: f });
            }
            counts[(l.value() + 1) as usize] += 1;
            match l {
                AngleLabel::Small => small[f as usize] += 1,
                AngleLabel::Large => large[f as usize] += 1,
                AngleLabel::Flat => {}
            }
        }
        if switch_vertex {
            if counts != [deg - 1, 0, 1] && report.up1.is_none() {
                report.up1 = Some(Location::Vertex { vertex: v });
            }
        } else if counts != [deg - 2, 2, 0] && report.up2.is_none() {
            report.up2 = Some(Location::Vertex { vertex: v });
        }
    }
    for f in 0..emb.face_count() {
        let want = if f as FaceId == emb.outer_face() { -2 } else { 2 };
        if small[f] - large[f] != want {
            report.up3 = Some(Location::Face { face: f as FaceId });
            break;
        }
    }
    Ok(report)
}

/// The angle at `v` on the inner side of the outer face boundary.
pub fn inside_angle(
    lab: &AngleLabeling,
    v: VertexId,
    outer_face: FaceId,
) -> Result<AngleLabel, UpwardError> {
    lab.get(v, outer_face).map(AngleLabel::complement).ok_or(UpwardError::NotOnOuterFace(v))
}

/// A plane embedding together with a labeling satisfying [`check_upward`].
#[derive(Clone, Debug)]
pub struct UpwardEmbedding {
    embedding: PlaneEmbedding,
    labeling: AngleLabeling,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NotUpward {
    #[error(transparent)]
    Domain(#[from] UpwardError),
    #[error("labeling violates the upward conditions: {0:?}")]
    Violated(CheckReport),
}

impl UpwardEmbedding {
    pub fn new(d: &Dag, embedding: PlaneEmbedding, labeling: AngleLabeling) -> Result<Self, NotUpward> {
        let report = check_upward(&embedding, &labeling, d)?;
        if !report.is_upward() {
            return Err(NotUpward::Violated(report));
        }
        Ok(UpwardEmbedding { embedding, labeling })
    }

    pub fn embedding(&self) -> &PlaneEmbedding {
        &self.embedding
    }

    pub fn labeling(&self) -> &AngleLabeling {
        &self.labeling
    }

    pub fn into_parts(self) -> (PlaneEmbedding, AngleLabeling) {
        (self.embedding, self.labeling)
    }
}
