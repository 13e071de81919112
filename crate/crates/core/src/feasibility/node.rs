//! Feasible pairs of a single node from the feasible sets of its children.

use serde::Serialize;

use super::{check_properties, decide_mu, decide_nu, FeasiblePair, FeasibleSet, NodeContext, NodeWitness, L};
use crate::embedding::Side;
use crate::graph::VertexId;
use crate::partition::augment_and_partition;

/// Boundary values fixed before the left-to-right sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateTuple {
    pub rho0: L,
    pub rhok: L,
    pub mu1: L,
    pub a1: Option<Side>,
    pub muk: L,
    pub nuk: L,
    pub ak: Option<Side>,
}

fn switch_ok(rho: L, switch: bool) -> bool {
    if switch {
        rho != L::Flat
    } else {
        rho == L::Flat
    }
}

fn fits(inner: L, rho: L, side: Side) -> bool {
    let bound = if side == Side::In { rho.value() } else { -rho.value() };
    inner.value() <= bound
}

fn boundary(rho: L, inner: L, side: Option<Side>) -> i8 {
    match side {
        Some(Side::Out) => rho.value() + inner.value() + 1,
        _ => rho.value(),
    }
}

/// All boundary tuples for target `(mu, nu)` that pass the local screening,
/// in increasing numeric order with `in` before `out`.
pub fn enumerate_candidate_tuples(ctx: &NodeContext, mu: L, nu: L) -> Vec<CandidateTuple> {
    let k = ctx.k();
    let f1 = ctx.child(1);
    let fk = ctx.child(k);
    let firsts: Vec<(L, Option<Side>)> = match f1 {
        Some(f) => L::ALL
            .into_iter()
            .filter(|&m| f.has_first(m))
            .flat_map(|m| Side::BOTH.map(|s| (m, Some(s))))
            .collect(),
        None => vec![(L::Small, None)],
    };
    let lasts: Vec<(L, L, Option<Side>)> = match fk {
        Some(f) => f.pairs().flat_map(|(a, b)| Side::BOTH.map(|s| (a, b, Some(s)))).collect(),
        None => vec![(L::Small, L::Small, None)],
    };
    let mut out = Vec::new();
    for rho0 in L::ALL {
        if !switch_ok(rho0, ctx.switch[0]) {
            continue;
        }
        for rhok in L::ALL {
            if !switch_ok(rhok, ctx.switch[k]) {
                continue;
            }
            for &(mu1, a1) in &firsts {
                if a1.is_some_and(|s| !fits(mu1, rho0, s)) || boundary(rho0, mu1, a1) != mu.value() {
                    continue;
                }
                for &(muk, nuk, ak) in &lasts {
                    if ak.is_some_and(|s| !fits(nuk, rhok, s)) || boundary(rhok, nuk, ak) != nu.value() {
                        continue;
                    }
                    out.push(CandidateTuple { rho0, rhok, mu1, a1, muk, nuk, ak });
                }
            }
        }
    }
    out
}

/// A maximal run `G_p..G_q` of defined subgraphs bound by double-flat angles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub start: usize,
    pub end: usize,
    /// Side of `G_p..G_q` when `G_p` is inside.
    pub relative: Vec<Side>,
    /// Cycle positions whose `rho` the chain decides, with the value taken
    /// when `G_p` is inside.
    pub marks: Vec<(usize, i8)>,
    /// Sum of all mark values.
    pub signed_value: i64,
}

impl Chain {
    /// Sum of the `rho` values the chain decides when `G_p` is on `anchor`.
    pub fn value_for(&self, anchor: Side) -> i64 {
        if anchor == Side::In {
            self.signed_value
        } else {
            -self.signed_value
        }
    }

    /// Like [`Chain::value_for`] but only over `v_1..v_{k-1}`.
    fn interior_value(&self, k: usize, anchor: Side) -> i64 {
        let s: i64 = self.marks.iter().filter(|m| m.0 != 0 && m.0 != k).map(|m| m.1 as i64).sum();
        if anchor == Side::In {
            s
        } else {
            -s
        }
    }

    fn side_of(&self, i: usize, anchor: Side) -> Side {
        let r = self.relative[i - self.start];
        if anchor == Side::In {
            r
        } else {
            r.flip()
        }
    }
}

/// Groups defined subgraphs into chains and runs the signed walk on each.
/// `mus`/`nus` are 0-based copies of `mu_1..mu_k`, `nu_1..nu_k`.
pub fn bind_chains(ctx: &NodeContext, mus: &[L], nus: &[L]) -> Vec<Chain> {
    let k = ctx.k();
    let defined = |i: usize| ctx.child(i).is_some();
    let bound = |i: usize| i < k && defined(i) && defined(i + 1) && nus[i - 1] == L::Flat && mus[i] == L::Flat;
    let mut chains = Vec::new();
    let mut p = 1;
    while p <= k {
        if !defined(p) {
            p += 1;
            continue;
        }
        let mut q = p;
        while bound(q) {
            q += 1;
        }
        let mut c = Side::In;
        let mut relative = vec![Side::In];
        let mut marks = Vec::new();
        let sign = |c: Side| if c == Side::In { 1 } else { -1 };
        if mus[p - 1] != L::Small && ctx.switch[p - 1] {
            marks.push((p - 1, 1));
        }
        for i in p..q {
            if ctx.switch[i] {
                marks.push((i, sign(c)));
            } else {
                c = c.flip();
            }
            relative.push(c);
        }
        if nus[q - 1] != L::Small && ctx.switch[q] {
            marks.push((q, sign(c)));
        }
        let signed_value = marks.iter().map(|m| m.1 as i64).sum();
        chains.push(Chain { start: p, end: q, relative, marks, signed_value });
        p = q + 1;
    }
    chains
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IntegerItem {
    /// The chain with this index, placed with its anchor inside when the
    /// item lands on the positive side and its interior value is positive.
    Chain(usize),
    /// An unmarked switch vertex at this cycle position.
    Unit(usize),
}

/// The balancing instance left after the boundary values are accounted for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Integers {
    pub items: Vec<(IntegerItem, u64)>,
    /// Anchor side of each chain forced by the tuple.
    pub fixed: Vec<Option<Side>>,
    /// Required value of (positive side sum) minus (negative side sum).
    pub residual: i64,
}

/// Builds the multiset: one integer per free chain with nonzero interior
/// value and a unit per unmarked interior switch vertex. Chains holding
/// `G_1` or `G_k` are fixed by the tuple and folded into the residual, as are
/// `rho_0` and `rho_k`. Returns `None` when the tuple forces one chain onto
/// both sides.
pub fn generate_integers(ctx: &NodeContext, chains: &[Chain], t: &CandidateTuple) -> Option<Integers> {
    let k = ctx.k();
    let mut fixed = vec![None; chains.len()];
    for (ci, ch) in chains.iter().enumerate() {
        let mut want: Option<Side> = None;
        if ch.start == 1 {
            want = t.a1;
        }
        if ch.end == k {
            let ak = t.ak.expect("G_k defined");
            let anchor = if ch.relative[k - ch.start] == Side::In { ak } else { ak.flip() };
            if want.is_some_and(|w| w != anchor) {
                return None;
            }
            want = Some(anchor);
        }
        fixed[ci] = want;
    }
    let mut marked = vec![false; k + 1];
    for ch in chains {
        for &(i, _) in &ch.marks {
            marked[i] = true;
        }
    }
    let mut residual = -2 - t.rho0.value() as i64 - t.rhok.value() as i64;
    let mut items = Vec::new();
    for (ci, ch) in chains.iter().enumerate() {
        match fixed[ci] {
            Some(a) => residual -= ch.interior_value(k, a),
            None => {
                let v = ch.interior_value(k, Side::In);
                if v != 0 {
                    items.push((IntegerItem::Chain(ci), v.unsigned_abs()));
                }
            }
        }
    }
    for i in 1..k {
        if ctx.switch[i] && !marked[i] {
            items.push((IntegerItem::Unit(i), 1));
        }
    }
    Some(Integers { items, fixed, residual })
}

/// Completes a candidate tuple into a full witness, or `None`.
pub fn extend_candidate(ctx: &NodeContext, t: &CandidateTuple, mu: L, nu: L) -> Option<NodeWitness> {
    let k = ctx.k();
    let mut mus = vec![L::Small; k];
    let mut nus = vec![L::Small; k];
    mus[0] = t.mu1;
    mus[k - 1] = t.muk;
    nus[k - 1] = t.nuk;
    if k == 1 {
        return None;
    }
    for i in 1..k {
        nus[i - 1] = decide_nu(mus[i - 1], ctx.child(i)).ok()?;
        if i + 2 <= k {
            mus[i] = decide_mu(nus[i - 1], ctx.switch[i], ctx.child(i + 1), ctx.switch[i + 1], ctx.child(i + 2)).ok()?;
        }
    }
    if nus[k - 2].value() + mus[k - 1].value() > 0 {
        return None;
    }
    // angles that cannot fit at a vertex that is not a switch of the cycle
    for i in 1..=k {
        if ctx.child(i).is_some()
            && ((mus[i - 1] == L::Large && !ctx.switch[i - 1]) || (nus[i - 1] == L::Large && !ctx.switch[i]))
        {
            return None;
        }
    }
    let chains = bind_chains(ctx, &mus, &nus);
    let ints = generate_integers(ctx, &chains, t)?;
    let total: u64 = ints.items.iter().map(|x| x.1).sum();
    let twice_in = total as i64 + ints.residual;
    if twice_in < 0 || twice_in % 2 != 0 || twice_in > 2 * total as i64 {
        return None;
    }
    let l_in = twice_in / 2;
    let values: Vec<u64> = ints.items.iter().map(|x| x.1).collect();
    let (positive, _) = augment_and_partition(&values, l_in, total as i64 - l_in)
        .expect("targets are consistent by construction")?;
    let mut is_positive = vec![false; values.len()];
    for i in positive {
        is_positive[i] = true;
    }
    let mut anchors: Vec<Side> = ints.fixed.iter().map(|f| f.unwrap_or(Side::In)).collect();
    let mut rho = vec![L::Flat; k + 1];
    for (j, &(item, _)) in ints.items.iter().enumerate() {
        match item {
            IntegerItem::Chain(ci) => {
                let up = chains[ci].interior_value(k, Side::In) > 0;
                anchors[ci] = if up == is_positive[j] { Side::In } else { Side::Out };
            }
            IntegerItem::Unit(i) => rho[i] = if is_positive[j] { L::Large } else { L::Small },
        }
    }
    let mut sides = vec![None; k];
    for (ch, &a) in chains.iter().zip(&anchors) {
        for i in ch.start..=ch.end {
            sides[i - 1] = Some(ch.side_of(i, a));
        }
        for &(i, s) in &ch.marks {
            let v = if a == Side::In { s } else { -s };
            rho[i] = L::from_value(v as i64).expect("unit mark");
        }
    }
    rho[0] = t.rho0;
    rho[k] = t.rhok;
    let w = NodeWitness { rho, mus, nus, sides };
    if let Err(p) = check_properties(ctx, mu, nu, &w) {
        panic!("extension for ({mu:?},{nu:?}) with {t:?} violates {p:?}: {w:?} in {ctx:?}");
    }
    Some(w)
}

/// The feasible set of a node: for each target pair the first candidate
/// tuple that extends.
pub fn feasible_set(ctx: &NodeContext) -> FeasibleSet {
    let k = ctx.k();
    let mut pairs = Vec::new();
    for mu in L::ALL {
        for nu in L::ALL {
            let found = enumerate_candidate_tuples(ctx, mu, nu).iter().find_map(|t| extend_candidate(ctx, t, mu, nu));
            if let Some(witness) = found {
                pairs.push(FeasiblePair { mu, nu, witness });
            }
        }
    }
    let endpoints: (VertexId, VertexId) = (ctx.cycle[0], ctx.cycle[k]);
    FeasibleSet { endpoints, pairs }
}

#[cfg(test)]
mod tests {
    use super::super::PairMask;
    use super::*;
    use crate::upward::AngleLabel::{Flat as Z, Large as P, Small as M};

    fn ctx(switch: &[bool], children: Vec<Option<PairMask>>) -> NodeContext {
        NodeContext { cycle: (0..switch.len() as u32).collect(), switch: switch.to_vec(), children }
    }

    #[test]
    fn triangle_tuples_and_witness() {
        // source 0, sink 2, parent edge (0, 2)
        let c = ctx(&[true, false, true], vec![None, None]);
        let ts = enumerate_candidate_tuples(&c, M, M);
        assert_eq!(ts.len(), 1);
        assert_eq!((ts[0].rho0, ts[0].rhok), (M, M));
        let w = extend_candidate(&c, &ts[0], M, M).unwrap();
        assert_eq!(w.rho, vec![M, Z, M]);
        let f = feasible_set(&c);
        assert_eq!(f.mask(), PairMask::from_pairs([(M, M)]));
    }

    #[test]
    fn source_with_flat_end() {
        // b -> c, b -> d, c -> d with e = (b, c): b switch, c not, d switch
        let c = ctx(&[true, true, false], vec![None, None]);
        assert_eq!(feasible_set(&c).mask(), PairMask::from_pairs([(M, Z)]));
    }

    #[test]
    fn out_child_needs_reachable_mu() {
        let c = ctx(&[true, false, true, false], vec![Some(PairMask::from_pairs([(P, P)])), None, None]);
        assert!(enumerate_candidate_tuples(&c, Z, Z).is_empty());
    }

    #[test]
    fn chain_walk_and_flip() {
        // G_1..G_4 all defined and bound; v_1 switch, v_2 non-switch, v_3 switch
        let f = Some(PairMask::from_pairs([(Z, Z)]));
        let c = ctx(&[true, true, false, true, true, true], vec![f, f, f, f, None]);
        let mus = vec![Z, Z, Z, Z, M];
        let nus = vec![Z, Z, Z, Z, M];
        let chains = bind_chains(&c, &mus, &nus);
        assert_eq!(chains.len(), 1);
        let ch = &chains[0];
        assert_eq!((ch.start, ch.end), (1, 4));
        assert_eq!(ch.relative, vec![Side::In, Side::In, Side::Out, Side::Out]);
        assert_eq!(ch.marks, vec![(0, 1), (1, 1), (3, -1), (4, -1)]);
        assert_eq!(ch.value_for(Side::In), 0);
        assert_eq!(ch.value_for(Side::Out), -ch.value_for(Side::In));
    }

    #[test]
    fn figure_like_chain_value() {
        // head at a switch with mu_p >= 0, then three switches on the out side
        let f = Some(PairMask::from_pairs([(Z, Z)]));
        let last = Some(PairMask::from_pairs([(Z, M)]));
        let c = ctx(&[true, true, false, true, true, true, true], vec![None, f, f, f, last, None]);
        let mus = vec![M, Z, Z, Z, Z, M];
        let nus = vec![M, Z, Z, Z, M, M];
        let chains = bind_chains(&c, &mus, &nus);
        assert_eq!(chains.len(), 1);
        // +1 at v_1 (head), +1 at v_2... v_2 is non-switch so it flips; v_3, v_4 give -1 each
        assert_eq!(chains[0].marks, vec![(1, 1), (3, -1), (4, -1)]);
        assert_eq!(chains[0].signed_value, -1);
    }

    #[test]
    fn chainless_cycle_units() {
        // alternating 6-cycle: every vertex a switch
        let c = ctx(&[true; 6], vec![None; 5]);
        let t = CandidateTuple { rho0: M, rhok: M, mu1: M, a1: None, muk: M, nuk: M, ak: None };
        let ints = generate_integers(&c, &[], &t).unwrap();
        assert_eq!(ints.items.len(), 4);
        assert_eq!(ints.residual, 0);
        let w = extend_candidate(&c, &t, M, M).unwrap();
        assert_eq!(w.rho.iter().filter(|&&r| r == P).count(), 2);
    }

    #[test]
    fn odd_residual_rejected() {
        // 4-cycle with three switches cannot balance
        let c = ctx(&[true, true, true, false], vec![None; 3]);
        for mu in L::ALL {
            for nu in L::ALL {
                for t in enumerate_candidate_tuples(&c, mu, nu) {
                    assert!(extend_candidate(&c, &t, mu, nu).is_none());
                }
            }
        }
    }
}
