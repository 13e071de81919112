//! Pseudo-polynomial subset-sum and Partition with witness recovery.
//!
//! Values are grouped by magnitude; each group is a bounded item folded into a
//! bitset of reachable sums by binary splitting, and one bitset per group is
//! kept so that a witness can be read back without parent pointers.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("target {target} exceeds the total {total}")]
    TargetTooLarge { target: u64, total: u64 },
    #[error("targets {l_in} and {l_out} do not add up to the total {total}")]
    InfeasibleTargets { l_in: i64, l_out: i64, total: u64 },
}

/// Indices of the chosen values and their sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetWitness {
    pub chosen: Vec<usize>,
    pub achieved: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bitset {
    words: Vec<u64>,
    bits: usize,
}

impl Bitset {
    fn new(bits: usize) -> Self {
        Bitset { words: vec![0; bits.div_ceil(64)], bits }
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        i < self.bits && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    /// `self |= self << shift`, truncated to the bit length.
    fn or_shifted_self(&mut self, shift: usize) {
        if shift >= self.bits {
            return;
        }
        let ws = shift / 64;
        let bs = shift % 64;
        for i in (ws..self.words.len()).rev() {
            let mut w = self.words[i - ws] << bs;
            if bs > 0 && i > ws {
                w |= self.words[i - ws - 1] >> (64 - bs);
            }
            self.words[i] |= w;
        }
        let extra = self.words.len() * 64 - self.bits;
        if extra > 0 {
            let last = self.words.len() - 1;
            self.words[last] &= u64::MAX >> extra;
        }
    }
}

/// Finds a subset of `values` summing to `target`.
///
/// Reconstruction walks the value groups backwards and takes as many copies
/// of the current value as the earlier groups allow, highest indices first.
///
/// ```
/// use updag::partition::subset_sum;
/// let w = subset_sum(&[1, 1, 2], 2).unwrap().unwrap();
/// assert_eq!(w.chosen, vec![2]);
/// assert!(subset_sum(&[3, 5], 4).unwrap().is_none());
/// ```
pub fn subset_sum(values: &[u64], target: u64) -> Result<Option<SubsetWitness>, PartitionError> {
    let total: u64 = values.iter().sum();
    if target > total {
        return Err(PartitionError::TargetTooLarge { target, total });
    }
    let t = target as usize;
    let mut groups: Vec<(u64, Vec<usize>)> = Vec::new();
    {
        let mut slot = std::collections::HashMap::new();
        for (i, &v) in values.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let g = *slot.entry(v).or_insert_with(|| {
                groups.push((v, Vec::new()));
                groups.len() - 1
            });
            groups[g].1.push(i);
        }
    }
    let mut reach = Bitset::new(t + 1);
    reach.set(0);
    let mut layers: Vec<Bitset> = Vec::with_capacity(groups.len());
    for (v, idx) in &groups {
        let v = *v as usize;
        let mut left = idx.len();
        let mut part = 1usize;
        while left > 0 && v <= t {
            let take = part.min(left);
            reach.or_shifted_self(take * v);
            left -= take;
            part *= 2;
        }
        layers.push(reach.clone());
    }
    if !reach.get(t) {
        return Ok(None);
    }
    let mut chosen = Vec::new();
    let mut rem = t;
    for g in (0..groups.len()).rev() {
        let (v, idx) = &groups[g];
        let v = *v as usize;
        let reachable_before = |s: usize| if g == 0 { s == 0 } else { layers[g - 1].get(s) };
        let most = idx.len().min(rem / v);
        let m = (0..=most).rev().find(|&m| reachable_before(rem - m * v)).expect("layer invariant");
        chosen.extend_from_slice(&idx[idx.len() - m..]);
        rem -= m * v;
    }
    debug_assert_eq!(rem, 0);
    chosen.sort_unstable();
    Ok(Some(SubsetWitness { chosen, achieved: target }))
}

/// Splits `values` into two index sets of equal sum.
///
/// ```
/// use updag::partition::solve_partition;
/// let (a, b) = solve_partition(&[1, 1, 2]).unwrap();
/// assert_eq!((a, b), (vec![2], vec![0, 1]));
/// assert!(solve_partition(&[1, 2]).is_none());
/// ```
pub fn solve_partition(values: &[u64]) -> Option<(Vec<usize>, Vec<usize>)> {
    let total: u64 = values.iter().sum();
    if total % 2 == 1 {
        return None;
    }
    let w = subset_sum(values, total / 2).expect("half never exceeds the total")?;
    Some(split(values.len(), w.chosen))
}

fn split(len: usize, chosen: Vec<usize>) -> (Vec<usize>, Vec<usize>) {
    let mut mark = vec![false; len];
    for &i in &chosen {
        mark[i] = true;
    }
    let rest = (0..len).filter(|&i| !mark[i]).collect();
    (chosen, rest)
}

fn check_targets(values: &[u64], l_in: i64, l_out: i64) -> Result<(), PartitionError> {
    let total: u64 = values.iter().sum();
    if l_in < 0 || l_out < 0 || (l_in + l_out) as u64 != total {
        return Err(PartitionError::InfeasibleTargets { l_in, l_out, total });
    }
    Ok(())
}

/// Index sets of the two sides.
pub type Split = (Vec<usize>, Vec<usize>);

/// Splits `values` into sides summing to `l_in` and `l_out` by balancing the
/// multiset with one extra value `|l_in - l_out|` and solving Partition.
pub fn augment_and_partition(
    values: &[u64],
    l_in: i64,
    l_out: i64,
) -> Result<Option<Split>, PartitionError> {
    check_targets(values, l_in, l_out)?;
    let extra = l_in.abs_diff(l_out);
    if extra == 0 {
        return Ok(solve_partition(values));
    }
    let mut augmented = values.to_vec();
    augmented.push(extra);
    let star = values.len();
    let Some((a, b)) = solve_partition(&augmented) else { return Ok(None) };
    // the side holding the extra value is the smaller target
    let (with_star, without) = if a.contains(&star) { (a, b) } else { (b, a) };
    let with_star: Vec<usize> = with_star.into_iter().filter(|&i| i != star).collect();
    Ok(Some(if l_in < l_out { (with_star, without) } else { (without, with_star) }))
}

/// The same split computed directly as a subset sum to `l_in`.
pub fn direct_partition(
    values: &[u64],
    l_in: i64,
    l_out: i64,
) -> Result<Option<Split>, PartitionError> {
    check_targets(values, l_in, l_out)?;
    Ok(subset_sum(values, l_in as u64)?.map(|w| split(values.len(), w.chosen)))
}
