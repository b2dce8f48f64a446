//! Subsequence sums with length restrictions.

use std::collections::BTreeSet;

use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement, GroupSpec};
use crate::sequence::{LengthPlan, LengthSet, Sequence};

/// Largest sequence the exhaustive subset oracle accepts.
pub const ORACLE_GUARD: usize = 20;

/// Layered subset-sum table: `layers[l]` holds the sums of length-`l`
/// subsequences; with a saturating plan the top layer collects every length
/// at or above it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumTable {
    layers: Vec<ElemSet>,
    saturating: bool,
}

impl SumTable {
    pub(crate) fn new(plan: &LengthPlan) -> Self {
        let mut layers = vec![ElemSet::EMPTY; plan.lmax + 1];
        layers[0] = ElemSet::singleton(0);
        SumTable {
            layers,
            saturating: plan.saturating,
        }
    }

    /// Appends one term.
    #[inline]
    pub(crate) fn push(&mut self, group: &Group, x: u8) {
        let top = self.layers.len() - 1;
        if top == 0 {
            return;
        }
        if self.saturating {
            let t = group.translate_set(&self.layers[top], x);
            self.layers[top].union_with(&t);
        }
        for l in (1..=top).rev() {
            let t = group.translate_set(&self.layers[l - 1], x);
            self.layers[l].union_with(&t);
        }
    }

    #[inline]
    pub(crate) fn hits_zero(&self, plan: &LengthPlan) -> bool {
        (1..self.layers.len()).any(|l| plan.accept[l] && self.layers[l].contains(0))
    }

    pub(crate) fn accepted_sums(&self, plan: &LengthPlan) -> ElemSet {
        let mut out = ElemSet::EMPTY;
        for (l, layer) in self.layers.iter().enumerate().skip(1) {
            if plan.accept[l] {
                out.union_with(layer);
            }
        }
        out
    }

    /// Whether some subsequence of length `k` with `accepts(offset + k)` sums to `target`.
    fn reaches(&self, plan: &LengthPlan, offset: usize, target: u8) -> bool {
        let top = self.layers.len() - 1;
        self.layers.iter().enumerate().any(|(k, layer)| {
            let ok = if self.saturating && k == top {
                true
            } else {
                plan.accepts(offset + k)
            };
            ok && layer.contains(target)
        })
    }
}

fn table_for(group: &Group, ranks: &[u8], plan: &LengthPlan) -> SumTable {
    let mut t = SumTable::new(plan);
    for &x in ranks {
        t.push(group, x);
    }
    t
}

/// `Σ_L(S)`: every sum of a subsequence whose length lies in `L`.
pub fn sigma_l(group: &Group, s: &Sequence, lengths: &LengthSet) -> Result<BTreeSet<GroupElement>> {
    let ranks = s.to_ranks(group)?;
    let plan = lengths.plan(group.spec());
    Ok(group.to_elements(&table_for(group, &ranks, &plan).accepted_sums(&plan)))
}

/// Whether `S` has a zero-sum subsequence with length in `L`. Stops at the
/// first prefix that already has one.
pub fn has_zero_sum(group: &Group, s: &Sequence, lengths: &LengthSet) -> Result<bool> {
    let ranks = s.to_ranks(group)?;
    let plan = lengths.plan(group.spec());
    let mut t = SumTable::new(&plan);
    for &x in &ranks {
        t.push(group, x);
        if t.hits_zero(&plan) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The least zero-sum subsequence with length in `L`, comparing the sorted
/// term lists lexicographically by residues.
pub fn witness_zero_sum(
    group: &Group,
    s: &Sequence,
    lengths: &LengthSet,
) -> Result<Option<Sequence>> {
    s.to_ranks(group)?;
    let plan = lengths.plan(group.spec());
    let flat: Vec<u8> = s
        .flat()
        .iter()
        .map(|g| group.rank_of(g).expect("validated"))
        .collect();
    let n = flat.len();
    let mut suffix = vec![SumTable::new(&plan); n + 1];
    for i in (0..n).rev() {
        let mut t = suffix[i + 1].clone();
        t.push(group, flat[i]);
        suffix[i] = t;
    }
    if !suffix[0].hits_zero(&plan) {
        return Ok(None);
    }
    let mut chosen: Vec<u8> = Vec::new();
    let mut sum = 0u8;
    let mut next = 0usize;
    loop {
        if !chosen.is_empty() && sum == 0 && plan.accepts(chosen.len()) {
            break;
        }
        let mut picked = None;
        for j in next..n {
            if j > next && flat[j] == flat[j - 1] {
                continue;
            }
            let new_sum = group.add_rank(sum, flat[j]);
            if suffix[j + 1].reaches(&plan, chosen.len() + 1, group.neg_rank(new_sum)) {
                picked = Some((j, new_sum));
                break;
            }
        }
        let (j, new_sum) =
            picked.ok_or_else(|| Error::Inconsistent("witness search lost feasibility".into()))?;
        chosen.push(flat[j]);
        sum = new_sum;
        next = j + 1;
    }
    Ok(Some(Sequence::from_ranks(group, &chosen)))
}

/// `S` is a nonempty zero-sum sequence none of whose proper nonempty
/// subsequences sum to zero.
pub fn is_minimal_zero_sum(group: &Group, s: &Sequence) -> Result<bool> {
    let ranks = s.to_ranks(group)?;
    if ranks.is_empty() || !s.sum().is_zero() {
        return Ok(false);
    }
    Ok(minimal_ranks(group, &ranks))
}

pub(crate) fn minimal_ranks(group: &Group, ranks: &[u8]) -> bool {
    let plan = LengthSet::Any.plan(group.spec());
    let mut last = None;
    for i in 0..ranks.len() {
        if last == Some(ranks[i]) {
            continue;
        }
        last = Some(ranks[i]);
        let mut t = SumTable::new(&plan);
        for (j, &x) in ranks.iter().enumerate() {
            if j != i {
                t.push(group, x);
            }
        }
        if t.hits_zero(&plan) {
            return false;
        }
    }
    true
}

/// Exhaustive `Σ_L(S)` over all `2^|S|` index subsets, using plain residue
/// arithmetic. Independent of the table-driven path.
pub fn brute_sigma_l(
    spec: &GroupSpec,
    s: &Sequence,
    lengths: &LengthSet,
) -> Result<BTreeSet<GroupElement>> {
    let by_len = brute_sums_by_length(spec, s)?;
    let wanted = lengths.resolve(spec, s.len());
    Ok(by_len
        .into_iter()
        .enumerate()
        .filter(|(len, _)| *len > 0 && wanted.contains(len))
        .flat_map(|(_, set)| set)
        .collect())
}

/// `Σ_{{k}}(S)` for every `k` in `0..=|S|`, by the same exhaustive walk.
pub fn brute_sums_by_length(spec: &GroupSpec, s: &Sequence) -> Result<Vec<BTreeSet<GroupElement>>> {
    if s.group() != spec {
        return Err(Error::GroupMismatch {
            left: s.group().to_string(),
            right: spec.to_string(),
        });
    }
    let flat = s.flat();
    let n = flat.len();
    let card = spec.cardinality() as usize;
    let mut seen = vec![false; card * (n + 1)];
    gray_walk(spec, &flat, |len, code| seen[len * card + code] = true)?;
    Ok((0..=n)
        .map(|len| {
            spec.elements()
                .enumerate()
                .filter(|(code, _)| seen[len * card + code])
                .map(|(_, e)| e)
                .collect()
        })
        .collect())
}

/// Per-length sums as sets of mixed-radix codes; needs `|G| <= 256`.
pub(crate) fn brute_code_sets(spec: &GroupSpec, flat: &[&GroupElement]) -> Result<Vec<ElemSet>> {
    let mut out = vec![ElemSet::EMPTY; flat.len() + 1];
    gray_walk(spec, flat, |len, code| out[len].insert(code as u8))?;
    Ok(out)
}

/// Visits `(length, code)` for every subset of `flat`, the empty one
/// included, using plain residue arithmetic.
fn gray_walk<E, F>(spec: &GroupSpec, flat: &[E], mut visit: F) -> Result<()>
where
    E: std::borrow::Borrow<GroupElement>,
    F: FnMut(usize, usize),
{
    let n = flat.len();
    if n > ORACLE_GUARD {
        return Err(Error::GuardExceeded {
            len: n,
            max: ORACLE_GUARD,
        });
    }
    let orders = spec.orders();
    // First coordinate most significant, as in `GroupSpec::elements`.
    let code = |acc: &[u64]| {
        acc.iter()
            .zip(orders)
            .fold(0usize, |c, (&a, &m)| c * m as usize + a as usize)
    };
    let mut acc = vec![0u64; orders.len()];
    let mut len = 0usize;
    visit(0, 0);
    // Gray code: step k flips bit trailing_zeros(k).
    for k in 1u64..(1u64 << n) {
        let bit = k.trailing_zeros() as usize;
        let gray = k ^ (k >> 1);
        let adding = gray >> bit & 1 == 1;
        for ((a, &r), &m) in acc
            .iter_mut()
            .zip(flat[bit].borrow().residues())
            .zip(orders)
        {
            *a = if adding {
                (*a + r) % m
            } else {
                (*a + m - r) % m
            };
        }
        if adding {
            len += 1;
        } else {
            len -= 1;
        }
        visit(len, code(&acc));
    }
    Ok(())
}

/// Table-driven `Σ_L` over ranks.
pub(crate) fn sigma_ranks(group: &Group, ranks: &[u8], plan: &LengthPlan) -> ElemSet {
    table_for(group, ranks, plan).accepted_sums(plan)
}

/// Number of distinct zero-sum subsequences `T | S` with `|T| = len`.
pub fn count_zero_sum_subsequences(group: &Group, s: &Sequence, len: usize) -> Result<usize> {
    let terms: Vec<(u8, usize)> = s
        .iter()
        .map(|(g, k)| Ok((group.rank_of(g)?, k)))
        .collect::<Result<_>>()?;
    fn rec(group: &Group, terms: &[(u8, usize)], left: usize, sum: u8) -> usize {
        match terms.split_first() {
            None => usize::from(left == 0 && sum == 0),
            Some((&(x, k), rest)) => {
                let mut total = 0;
                let mut partial = sum;
                for used in 0..=k.min(left) {
                    total += rec(group, rest, left - used, partial);
                    partial = group.add_rank(partial, x);
                }
                total
            }
        }
    }
    Ok(rec(group, &terms, len, 0))
}
