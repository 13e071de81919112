//! Feasible-set computation over the rooted extended dual tree.
//!
//! For a face node with cycle `(v_0, ..., v_k)` the attached subgraph across
//! edge `(v_{i-1}, v_i)` is `G_i`. A pair `(mu, nu)` is feasible when the
//! subgraph below the node has an upward embedding with the parent edge on
//! the outer face and inside angles `mu` at `v_0` and `nu` at `v_k`.

mod node;
mod tester;

pub use node::{
    bind_chains, enumerate_candidate_tuples, extend_candidate, feasible_set, generate_integers, CandidateTuple,
    Chain, IntegerItem, Integers,
};
pub use tester::{analyze_with_edge, test_upward_any, test_upward_with_edge, Analysis, TestError, WitnessRecord};

use serde::Serialize;

use crate::embedding::Side;
use crate::graph::{Dag, EdgeId, VertexId};
use crate::upward::AngleLabel;

type L = AngleLabel;

/// A subset of `{-1,0,1}^2`, one bit per pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PairMask(u16);

impl PairMask {
    fn bit(mu: L, nu: L) -> u16 {
        1 << (3 * (mu.value() + 1) + (nu.value() + 1))
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (L, L)>) -> Self {
        let mut m = PairMask(0);
        for (a, b) in pairs {
            m.insert(a, b);
        }
        m
    }

    pub fn insert(&mut self, mu: L, nu: L) {
        self.0 |= Self::bit(mu, nu);
    }

    pub fn contains(self, mu: L, nu: L) -> bool {
        self.0 & Self::bit(mu, nu) != 0
    }

    pub fn has_first(self, mu: L) -> bool {
        L::ALL.iter().any(|&b| self.contains(mu, b))
    }

    pub fn min_second(self, mu: L) -> Option<L> {
        L::ALL.into_iter().find(|&b| self.contains(mu, b))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// The same set with the two coordinates exchanged.
    pub fn swapped(self) -> Self {
        PairMask::from_pairs(self.pairs().map(|(a, b)| (b, a)))
    }

    /// Pairs in increasing `(mu, nu)` order.
    pub fn pairs(self) -> impl Iterator<Item = (L, L)> {
        L::ALL
            .into_iter()
            .flat_map(|a| L::ALL.into_iter().map(move |b| (a, b)))
            .filter(move |&(a, b)| self.contains(a, b))
    }

    /// Neither both `(-1,.)` and `(0,.)` nor both `(.,-1)` and `(.,0)`.
    pub fn respects_exclusions(self) -> bool {
        let first = |a| self.has_first(a);
        let second = |b| L::ALL.iter().any(|&a| self.contains(a, b));
        !(first(L::Small) && first(L::Flat)) && !(second(L::Small) && second(L::Flat))
    }
}

impl Serialize for PairMask {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.pairs().map(|(a, b)| [a.value(), b.value()]))
    }
}

/// The values fixed for one feasible pair of a node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeWitness {
    /// Inside angles of the cycle at `v_0..v_k`.
    pub rho: Vec<L>,
    /// `mus[i - 1]`, `nus[i - 1]`: inside angles of `G_i` at `v_{i-1}` and
    /// `v_i`; `-1` when `G_i` is undefined.
    pub mus: Vec<L>,
    pub nus: Vec<L>,
    /// Side of each defined `G_i`.
    pub sides: Vec<Option<Side>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasiblePair {
    pub mu: L,
    pub nu: L,
    pub witness: NodeWitness,
}

/// Feasible pairs of a node with the endpoints their angles refer to:
/// `mu` belongs to `endpoints.0`, `nu` to `endpoints.1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibleSet {
    pub endpoints: (VertexId, VertexId),
    pub pairs: Vec<FeasiblePair>,
}

impl FeasibleSet {
    pub fn mask(&self) -> PairMask {
        PairMask::from_pairs(self.pairs.iter().map(|p| (p.mu, p.nu)))
    }

    /// The pairs with the first coordinate at vertex `first`.
    pub fn mask_from(&self, first: VertexId) -> PairMask {
        if first == self.endpoints.0 {
            self.mask()
        } else {
            assert_eq!(first, self.endpoints.1, "vertex is not an endpoint");
            self.mask().swapped()
        }
    }

    pub fn get(&self, mu: L, nu: L) -> Option<&FeasiblePair> {
        self.pairs.iter().find(|p| p.mu == mu && p.nu == nu)
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// What a node sees: its cycle, which cycle vertices are switches in the
/// cycle, and the feasible sets of its children oriented as
/// `(angle at v_{i-1}, angle at v_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeContext {
    pub cycle: Vec<VertexId>,
    pub switch: Vec<bool>,
    pub children: Vec<Option<PairMask>>,
}

impl NodeContext {
    pub fn k(&self) -> usize {
        self.cycle.len() - 1
    }

    /// `F_i` for 1-based `i`; `None` when `G_i` is undefined or out of range.
    pub fn child(&self, i: usize) -> Option<PairMask> {
        if i == 0 {
            return None;
        }
        self.children.get(i - 1).copied().flatten()
    }

    /// Builds the context of a cycle whose consecutive edges are `edges` and
    /// whose closing edge `(v_k, v_0)` is `closing`.
    pub fn from_cycle(
        d: &Dag,
        cycle: Vec<VertexId>,
        edges: &[EdgeId],
        closing: EdgeId,
        children: Vec<Option<PairMask>>,
    ) -> Self {
        let k = cycle.len() - 1;
        let switch = (0..=k)
            .map(|i| {
                let before = if i == 0 { closing } else { edges[i - 1] };
                let after = if i == k { closing } else { edges[i] };
                d.is_out(before, cycle[i]) == d.is_out(after, cycle[i])
            })
            .collect();
        NodeContext { cycle, switch, children }
    }
}

/// Returned when a candidate tuple cannot be completed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NotExtensible;

/// Picks `nu_i` once `mu_i` is known: the smallest feasible partner of `mu_i`,
/// or `-1` when `G_i` is undefined.
pub fn decide_nu(mu_i: L, f_i: Option<PairMask>) -> Result<L, NotExtensible> {
    match f_i {
        None => Ok(L::Small),
        Some(f) => f.min_second(mu_i).ok_or(NotExtensible),
    }
}

/// Picks `mu_{i+1}` once `nu_i` is known.
pub fn decide_mu(
    nu_i: L,
    switch_i: bool,
    f_next: Option<PairMask>,
    switch_next: bool,
    f_after: Option<PairMask>,
) -> Result<L, NotExtensible> {
    let Some(f) = f_next else { return Ok(L::Small) };
    let low_first = || {
        if f.has_first(L::Small) {
            Ok(L::Small)
        } else if f.has_first(L::Flat) {
            Ok(L::Flat)
        } else {
            Err(NotExtensible)
        }
    };
    match nu_i {
        L::Large => {
            if f.has_first(L::Small) {
                Ok(L::Small)
            } else {
                Err(NotExtensible)
            }
        }
        L::Flat => low_first(),
        L::Small if !switch_i => low_first(),
        L::Small => {
            let low = [L::Small, L::Flat];
            for a in low {
                if low.iter().any(|&b| f.contains(a, b)) {
                    return Ok(a);
                }
            }
            let has_10 = f.contains(L::Large, L::Flat);
            let has_m11 = f.contains(L::Small, L::Large);
            if f.contains(L::Large, L::Small) {
                return Ok(L::Large);
            }
            if has_10 && !has_m11 {
                return Ok(L::Large);
            }
            if !has_10 {
                if let Some(&a) = low.iter().find(|&&a| f.contains(a, L::Large)) {
                    return Ok(a);
                }
            }
            if has_10 && has_m11 {
                if !switch_next {
                    return Ok(L::Large);
                }
                if f_after.is_some_and(|g| g.has_first(L::Flat)) {
                    return Ok(L::Large);
                }
                return Ok(L::Small);
            }
            if f.contains(L::Large, L::Large) {
                Ok(L::Large)
            } else {
                Err(NotExtensible)
            }
        }
    }
}

/// The structural properties a node witness must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Property {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
}

fn le(a: L, b: i8) -> bool {
    a.value() <= b
}

/// Verifies a witness for target `(mu, nu)` against the node context.
/// Undefined subgraphs must carry `-1` for both angles and no side.
pub fn check_properties(ctx: &NodeContext, mu: L, nu: L, w: &NodeWitness) -> Result<(), Property> {
    let k = ctx.k();
    if w.rho.len() != k + 1 || w.mus.len() != k || w.nus.len() != k || w.sides.len() != k {
        return Err(Property::P3);
    }
    for i in 0..=k {
        let ok = if ctx.switch[i] { w.rho[i] != L::Flat } else { w.rho[i] == L::Flat };
        if !ok {
            return Err(Property::P1);
        }
    }
    if w.rho.iter().map(|r| r.value() as i64).sum::<i64>() != -2 {
        return Err(Property::P2);
    }
    for i in 1..=k {
        match ctx.child(i) {
            Some(f) => {
                if !f.contains(w.mus[i - 1], w.nus[i - 1]) || w.sides[i - 1].is_none() {
                    return Err(Property::P3);
                }
            }
            None => {
                if w.mus[i - 1] != L::Small || w.nus[i - 1] != L::Small || w.sides[i - 1].is_some() {
                    return Err(Property::P3);
                }
            }
        }
    }
    for i in 1..=k {
        if let Some(side) = w.sides[i - 1] {
            let s = if side == Side::In { 1 } else { -1 };
            if !le(w.mus[i - 1], s * w.rho[i - 1].value()) || !le(w.nus[i - 1], s * w.rho[i].value()) {
                return Err(Property::P4);
            }
        }
    }
    for i in 1..k {
        if w.nus[i - 1].value() + w.mus[i].value() > 0 {
            return Err(Property::P5);
        }
    }
    for i in 1..k {
        if w.nus[i - 1] == L::Flat && w.mus[i] == L::Flat {
            if let (Some(a), Some(b)) = (w.sides[i - 1], w.sides[i]) {
                if a == b && w.rho[i] != if a == Side::In { L::Large } else { L::Small } {
                    return Err(Property::P6);
                }
            }
        }
    }
    let end = |rho: L, inner: L, side: Option<Side>| match side {
        Some(Side::Out) => rho.value() + inner.value() + 1,
        _ => rho.value(),
    };
    if end(w.rho[0], w.mus[0], w.sides[0]) != mu.value() || end(w.rho[k], w.nus[k - 1], w.sides[k - 1]) != nu.value()
    {
        return Err(Property::P7);
    }
    Ok(())
}
