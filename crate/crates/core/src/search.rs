//! Exhaustive extension search for `s_L(G)`, `D(G)` and the extremal
//! sequences, up to symmetry.
//!
//! Sequences are sorted rank vectors. A node is extended only by elements at
//! or above its last term, and a prefix is kept only if it is the least
//! image of itself under the symmetry group. Removing the largest term of a
//! canonical sequence leaves a canonical sequence, so every class is reached
//! exactly once through its canonical representative.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::group::{enumerate_automorphisms_bounded, Automorphism, Group, GroupSpec};
use crate::sequence::{LengthPlan, LengthSet, Sequence};
use crate::sums::{minimal_ranks, SumTable};

pub const DEFAULT_BUDGET: u64 = 20_000_000_000;
pub const BUDGET_ENV: &str = "ZS_NODE_BUDGET";

const MAX_AUTOMORPHISMS: usize = 1 << 20;
const MAX_SYMMETRY_ENTRIES: usize = 1 << 25;
const FLUSH_EVERY: u64 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivalenceMode {
    Automorphism,
    AutomorphismAndTranslation,
}

impl EquivalenceMode {
    /// Translation preserves `L`-zero-sum freeness only when every length in
    /// `L` is a multiple of `exp(G)`.
    pub fn check(self, spec: &GroupSpec, lengths: &LengthSet) -> Result<()> {
        if self == EquivalenceMode::AutomorphismAndTranslation && !lengths.permits_translation(spec)
        {
            return Err(Error::IllegalTranslation);
        }
        Ok(())
    }

    /// The largest legal symmetry for the problem.
    pub fn strongest(spec: &GroupSpec, lengths: &LengthSet) -> Self {
        if lengths.permits_translation(spec) {
            EquivalenceMode::AutomorphismAndTranslation
        } else {
            EquivalenceMode::Automorphism
        }
    }
}

impl fmt::Display for EquivalenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivalenceMode::Automorphism => write!(f, "automorphism"),
            EquivalenceMode::AutomorphismAndTranslation => {
                write!(f, "automorphism-and-translation")
            }
        }
    }
}

impl FromStr for EquivalenceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "automorphism" | "aut" => Ok(EquivalenceMode::Automorphism),
            "automorphism-and-translation" | "affine" => {
                Ok(EquivalenceMode::AutomorphismAndTranslation)
            }
            _ => Err(Error::Parse(format!("unknown equivalence mode {s:?}"))),
        }
    }
}

/// The symmetry group of a search as rank permutations `x ↦ φ(x + t)`.
#[derive(Clone, Debug)]
pub struct Symmetry {
    n: usize,
    mode: EquivalenceMode,
    automorphisms: Vec<Automorphism>,
    perms: Vec<u8>,
    inverses: Vec<u8>,
    /// `preimage[e * n + y]`: the permutations sending `y` to `e`.
    preimage: Vec<Vec<u32>>,
    orbit_min: Vec<(u8, u32)>,
}

impl Symmetry {
    pub fn new(group: &Group, mode: EquivalenceMode) -> Result<Self> {
        let n = group.len();
        let automorphisms = enumerate_automorphisms_bounded(group, MAX_AUTOMORPHISMS)?;
        let translations: Vec<u8> = match mode {
            EquivalenceMode::Automorphism => vec![0],
            EquivalenceMode::AutomorphismAndTranslation => (0..n).map(|t| t as u8).collect(),
        };
        let count = automorphisms.len() * translations.len();
        if count * n > MAX_SYMMETRY_ENTRIES {
            return Err(Error::Precondition(format!(
                "symmetry group of {} with {count} elements is too large to tabulate",
                group.spec()
            )));
        }
        let mut perms = Vec::with_capacity(count * n);
        for &t in &translations {
            for a in &automorphisms {
                perms.extend((0..n).map(|x| a.apply_rank(group.add_rank(x as u8, t))));
            }
        }
        let mut inverses = vec![0u8; count * n];
        let mut preimage = vec![Vec::new(); n * n];
        let mut orbit_min: Vec<(u8, u32)> = (0..n).map(|x| (x as u8, 0)).collect();
        for i in 0..count {
            let p = &perms[i * n..(i + 1) * n];
            for (y, &e) in p.iter().enumerate() {
                inverses[i * n + e as usize] = y as u8;
                preimage[e as usize * n + y].push(i as u32);
                if e < orbit_min[y].0 {
                    orbit_min[y] = (e, i as u32);
                }
            }
        }
        Ok(Symmetry {
            n,
            mode,
            automorphisms,
            perms,
            inverses,
            preimage,
            orbit_min,
        })
    }

    /// Rejects translation for problems it does not preserve.
    pub fn for_lengths(group: &Group, lengths: &LengthSet, mode: EquivalenceMode) -> Result<Self> {
        mode.check(group.spec(), lengths)?;
        Self::new(group, mode)
    }

    pub fn len(&self) -> usize {
        self.perms.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn mode(&self) -> EquivalenceMode {
        self.mode
    }

    pub fn automorphisms(&self) -> &[Automorphism] {
        &self.automorphisms
    }

    /// The automorphism and translation rank composing permutation `i`.
    pub fn source(&self, i: usize) -> (&Automorphism, u8) {
        let a = self.automorphisms.len();
        (&self.automorphisms[i % a], (i / a) as u8)
    }

    #[inline]
    pub(crate) fn perm(&self, i: usize) -> &[u8] {
        &self.perms[i * self.n..(i + 1) * self.n]
    }

    #[inline]
    fn inverse(&self, i: usize) -> &[u8] {
        &self.inverses[i * self.n..(i + 1) * self.n]
    }

    /// Sorted image of a rank vector under permutation `i`.
    pub fn image(&self, i: usize, ranks: &[u8]) -> Vec<u8> {
        let p = self.perm(i);
        let mut out: Vec<u8> = ranks.iter().map(|&x| p[x as usize]).collect();
        out.sort_unstable();
        out
    }

    /// The least image of a sorted rank vector and a permutation attaining it.
    pub fn canonical_ranks(&self, ranks: &[u8]) -> (Vec<u8>, usize) {
        let mut best = ranks.to_vec();
        best.sort_unstable();
        let mut arg = 0;
        let mut buf = Vec::with_capacity(ranks.len());
        for i in 1..self.len() {
            let p = self.perm(i);
            buf.clear();
            buf.extend(ranks.iter().map(|&x| p[x as usize]));
            buf.sort_unstable();
            if buf < best {
                std::mem::swap(&mut best, &mut buf);
                arg = i;
            }
        }
        (best, arg)
    }

    pub fn canonical_form(&self, group: &Group, s: &Sequence) -> Result<Sequence> {
        let ranks = s.to_ranks(group)?;
        Ok(Sequence::from_ranks(group, &self.canonical_ranks(&ranks).0))
    }

    /// Image under permutation `i` as a sequence.
    pub fn apply(&self, group: &Group, i: usize, s: &Sequence) -> Result<Sequence> {
        let ranks = s.to_ranks(group)?;
        Ok(Sequence::from_ranks(group, &self.image(i, &ranks)))
    }

    /// A permutation taking the sorted vector `seq` to something strictly
    /// smaller, if one exists. `counts[x]` must be the multiplicity of `x`.
    /// With `stabilizer_only`, only permutations fixing the least term are
    /// tried after the orbit test, so `None` no longer proves minimality.
    pub(crate) fn find_smaller(
        &self,
        runs: &[(u8, u16)],
        counts: &[u16],
        stabilizer_only: bool,
    ) -> Option<usize> {
        let (e1, m1) = runs[0];
        for &(x, _) in runs {
            let (low, i) = self.orbit_min[x as usize];
            if low < e1 {
                return Some(i as usize);
            }
        }
        let candidates = if stabilizer_only { &runs[..1] } else { runs };
        for &(y, my) in candidates {
            if my < m1 {
                continue;
            }
            let list = &self.preimage[e1 as usize * self.n + y as usize];
            if list.is_empty() {
                continue;
            }
            if my > m1 {
                return Some(list[0] as usize);
            }
            for &i in list {
                if self.image_smaller(i as usize, runs, counts) {
                    return Some(i as usize);
                }
            }
        }
        None
    }

    /// Compares the image of the run-length vector with itself, run by run:
    /// smaller element first, then larger multiplicity.
    #[inline]
    fn image_smaller(&self, i: usize, runs: &[(u8, u16)], counts: &[u16]) -> bool {
        let p = self.perm(i);
        let inv = self.inverse(i);
        let mut image = ElemSet::EMPTY;
        for &(x, _) in runs {
            image.insert(p[x as usize]);
        }
        for (z, &(e, m)) in image.iter().zip(runs) {
            if z != e {
                return z < e;
            }
            let mz = counts[inv[z as usize] as usize];
            if mz != m {
                return mz > m;
            }
        }
        false
    }
}

/// The least image of `S` under the symmetry group of `mode`.
pub fn canonical_form(group: &Group, s: &Sequence, mode: EquivalenceMode) -> Result<Sequence> {
    Symmetry::new(group, mode)?.canonical_form(group, s)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PruneStrength {
    /// Full check for groups of at most 16 elements, partial above.
    #[default]
    Auto,
    Full,
    /// Orbit test plus the stabilizer of the least term; duplicates are
    /// removed after the search.
    Partial,
}

impl PruneStrength {
    fn full_for(self, group: &Group) -> bool {
        match self {
            PruneStrength::Auto => group.len() <= 16,
            PruneStrength::Full => true,
            PruneStrength::Partial => false,
        }
    }
}

impl FromStr for PruneStrength {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(PruneStrength::Auto),
            "full" => Ok(PruneStrength::Full),
            "partial" => Ok(PruneStrength::Partial),
            _ => Err(Error::Parse(format!("unknown prune strength {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Node limit across all tasks of one run.
    pub budget: u64,
    pub prune: PruneStrength,
    /// Longest sequence the search may build before reporting the constant
    /// as unbounded; defaults to `|G|·exp(G)`.
    pub length_cap: Option<usize>,
    /// Recheck every pruning decision against the explicit image.
    pub verify_prunes: bool,
    pub resume: Option<Checkpoint>,
}

impl Default for SearchConfig {
    /// Budget from `ZS_NODE_BUDGET` when set.
    fn default() -> Self {
        let budget = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_BUDGET);
        SearchConfig {
            budget,
            prune: PruneStrength::Auto,
            length_cap: None,
            verify_prunes: false,
            resume: None,
        }
    }
}

impl SearchConfig {
    pub fn with_budget(budget: u64) -> Self {
        SearchConfig {
            budget,
            ..Self::default()
        }
    }
}

/// What the search collects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Goal {
    /// The longest `L`-zero-sum free sequences.
    Longest,
    /// Every `L`-zero-sum free sequence of the given length.
    Avoiding(usize),
    /// Minimal zero-sum sequences of the given length.
    MinimalZeroSum(usize),
}

/// Resumable search state: finished subtree tasks and what they found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub group: GroupSpec,
    pub lengths: LengthSet,
    pub mode: EquivalenceMode,
    pub goal: Goal,
    pub task_count: usize,
    pub completed: Vec<usize>,
    pub best_len: usize,
    pub found: Vec<Sequence>,
    pub nodes: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub node_count: u64,
    pub pruned: u64,
    pub tasks: usize,
    pub wall_time: f64,
}

/// Raw search output: canonical representatives, sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutput {
    pub best_len: usize,
    pub found: Vec<Sequence>,
    pub stats: SearchStats,
}

#[derive(Default)]
struct Outcome {
    best_len: usize,
    found: BTreeSet<Vec<u8>>,
    nodes: u64,
    pending: u64,
    pruned: u64,
}

impl Outcome {
    fn absorb(&mut self, other: Outcome, longest: bool) {
        if longest {
            if other.best_len > self.best_len {
                self.best_len = other.best_len;
                self.found = other.found;
            } else if other.best_len == self.best_len {
                self.found.extend(other.found);
            }
        } else {
            self.best_len = self.best_len.max(other.best_len);
            self.found.extend(other.found);
        }
        self.nodes += other.nodes;
        self.pruned += other.pruned;
    }
}

struct Searcher<'a> {
    group: &'a Group,
    sym: &'a Symmetry,
    plan: LengthPlan,
    goal: Goal,
    full: bool,
    verify: bool,
    cap: usize,
    budget: u64,
    flush_every: u64,
    spent: AtomicU64,
    stop: AtomicBool,
    unbounded: AtomicBool,
}

struct Cursor {
    seq: Vec<u8>,
    counts: Vec<u16>,
    runs: Vec<(u8, u16)>,
}

impl Cursor {
    fn new(n: usize) -> Self {
        Cursor {
            seq: Vec::new(),
            counts: vec![0; n],
            runs: Vec::new(),
        }
    }

    fn push(&mut self, x: u8) {
        self.seq.push(x);
        self.counts[x as usize] += 1;
        match self.runs.last_mut() {
            Some((e, m)) if *e == x => *m += 1,
            _ => self.runs.push((x, 1)),
        }
    }

    fn pop(&mut self) {
        let x = self.seq.pop().expect("nonempty");
        self.counts[x as usize] -= 1;
        let last = self.runs.last_mut().expect("nonempty");
        last.1 -= 1;
        if last.1 == 0 {
            self.runs.pop();
        }
    }
}

impl Searcher<'_> {
    fn tick(&self, out: &mut Outcome) -> bool {
        out.nodes += 1;
        out.pending += 1;
        if out.pending >= self.flush_every {
            let total = self.spent.fetch_add(out.pending, Ordering::Relaxed) + out.pending;
            out.pending = 0;
            if total > self.budget {
                self.stop.store(true, Ordering::Relaxed);
            }
        }
        !self.stop.load(Ordering::Relaxed)
    }

    fn flush(&self, out: &mut Outcome) {
        self.spent.fetch_add(out.pending, Ordering::Relaxed);
        out.pending = 0;
    }

    /// Records the node; returns whether to extend it.
    fn visit(&self, cur: &Cursor, out: &mut Outcome) -> bool {
        let len = cur.seq.len();
        match self.goal {
            Goal::Longest => {
                if len > out.best_len {
                    out.best_len = len;
                    out.found.clear();
                }
                if len == out.best_len {
                    out.found.insert(cur.seq.clone());
                }
                if len >= self.cap {
                    self.unbounded.store(true, Ordering::Relaxed);
                    self.stop.store(true, Ordering::Relaxed);
                    return false;
                }
                true
            }
            Goal::Avoiding(k) => {
                out.best_len = out.best_len.max(len);
                if len == k {
                    out.found.insert(cur.seq.clone());
                    return false;
                }
                true
            }
            Goal::MinimalZeroSum(k) => {
                out.best_len = out.best_len.max(len);
                if len + 1 == k {
                    self.close_minimal(cur, out);
                    return false;
                }
                len + 1 < k
            }
        }
    }

    /// Completes a zero-sum free `T` by `-σ(T)` and keeps the result when it
    /// is minimal, sorted and canonical.
    fn close_minimal(&self, cur: &Cursor, out: &mut Outcome) {
        let g = self.group;
        let sum = cur.seq.iter().fold(0u8, |acc, &x| g.add_rank(acc, x));
        let x = g.neg_rank(sum);
        if cur.seq.last().is_some_and(|&last| x < last) {
            return;
        }
        let mut full = cur.seq.clone();
        full.push(x);
        if !minimal_ranks(g, &full) {
            return;
        }
        let mut next = Cursor::new(g.len());
        for &y in &full {
            next.push(y);
        }
        if self.full
            && self
                .sym
                .find_smaller(&next.runs, &next.counts, false)
                .is_some()
        {
            return;
        }
        out.found.insert(full);
    }

    /// Children of the node that survive the zero-sum and canonicity tests.
    fn accept_child(
        &self,
        cur: &mut Cursor,
        table: &SumTable,
        x: u8,
        out: &mut Outcome,
    ) -> Option<SumTable> {
        let mut next = table.clone();
        next.push(self.group, x);
        if next.hits_zero(&self.plan) {
            return None;
        }
        cur.push(x);
        let smaller = self.sym.find_smaller(&cur.runs, &cur.counts, !self.full);
        if let Some(i) = smaller {
            out.pruned += 1;
            if self.verify {
                let image = self.sym.image(i, &cur.seq);
                assert!(
                    image < cur.seq,
                    "pruned prefix {:?} has no smaller image under {i}",
                    cur.seq
                );
            }
            cur.pop();
            return None;
        }
        Some(next)
    }

    fn dfs(&self, cur: &mut Cursor, table: &SumTable, out: &mut Outcome) -> bool {
        if !self.tick(out) {
            return false;
        }
        if !self.visit(cur, out) {
            return true;
        }
        let start = cur.seq.last().copied().unwrap_or(0) as usize;
        for x in start..self.group.len() {
            if let Some(next) = self.accept_child(cur, table, x as u8, out) {
                let keep_going = self.dfs(cur, &next, out);
                cur.pop();
                if !keep_going {
                    return false;
                }
            }
        }
        true
    }

    /// Visits depth 0 and 1 directly and returns the depth-2 prefixes.
    fn prepass(&self, out: &mut Outcome) -> Vec<(Vec<u8>, SumTable)> {
        let n = self.group.len();
        let root = SumTable::new(&self.plan);
        let mut cur = Cursor::new(n);
        let mut tasks = Vec::new();
        self.tick(out);
        if !self.visit(&cur, out) {
            return tasks;
        }
        for x in 0..n {
            let Some(t1) = self.accept_child(&mut cur, &root, x as u8, out) else {
                continue;
            };
            self.tick(out);
            if self.visit(&cur, out) {
                for y in x..n {
                    if let Some(t2) = self.accept_child(&mut cur, &t1, y as u8, out) {
                        tasks.push((cur.seq.clone(), t2));
                        cur.pop();
                    }
                }
            }
            cur.pop();
        }
        tasks
    }

    fn run_task(&self, prefix: &[u8], table: &SumTable) -> (Outcome, bool) {
        let mut out = Outcome::default();
        let mut cur = Cursor::new(self.group.len());
        for &x in prefix {
            cur.push(x);
        }
        let done = self.dfs(&mut cur, table, &mut out);
        self.flush(&mut out);
        (out, done)
    }
}

/// Runs one search. The symmetry must already be legal for `lengths`.
pub fn search(
    group: &Group,
    lengths: &LengthSet,
    sym: &Symmetry,
    goal: Goal,
    config: &SearchConfig,
) -> Result<SearchOutput> {
    let started = Instant::now();
    sym.mode().check(group.spec(), lengths)?;
    let spec = group.spec();
    let cap = config
        .length_cap
        .unwrap_or_else(|| group.len() * spec.exponent() as usize);
    let plan = match goal {
        Goal::MinimalZeroSum(_) => LengthSet::Any.plan(spec),
        _ => lengths.plan(spec),
    };
    let searcher = Searcher {
        group,
        sym,
        plan,
        goal,
        full: config.prune.full_for(group),
        verify: config.verify_prunes,
        cap,
        budget: config.budget,
        flush_every: (config.budget / 64).clamp(1, FLUSH_EVERY),
        spent: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        unbounded: AtomicBool::new(false),
    };
    let longest = goal == Goal::Longest;
    let mut total = Outcome::default();
    let tasks = searcher.prepass(&mut total);
    searcher.flush(&mut total);

    let mut completed = vec![false; tasks.len()];
    if let Some(cp) = &config.resume {
        if cp.group != *spec
            || cp.lengths != *lengths
            || cp.mode != sym.mode()
            || cp.goal != goal
            || cp.task_count != tasks.len()
        {
            return Err(Error::Precondition(
                "checkpoint belongs to a different search".into(),
            ));
        }
        for &i in &cp.completed {
            if i < completed.len() {
                completed[i] = true;
            }
        }
        let mut prior = Outcome {
            best_len: cp.best_len,
            nodes: cp.nodes,
            ..Outcome::default()
        };
        for s in &cp.found {
            prior.found.insert(s.to_ranks(group)?);
        }
        total.absorb(prior, longest);
    }

    let results: Vec<Option<(Outcome, bool)>> = tasks
        .par_iter()
        .enumerate()
        .map(|(i, (prefix, table))| (!completed[i]).then(|| searcher.run_task(prefix, table)))
        .collect();

    let mut partial_best = total.best_len;
    for (i, r) in results.into_iter().enumerate() {
        if let Some((out, done)) = r {
            partial_best = partial_best.max(out.best_len);
            if done {
                completed[i] = true;
                total.absorb(out, longest);
            } else {
                total.nodes += out.nodes;
                total.pruned += out.pruned;
            }
        }
    }

    if searcher.unbounded.load(Ordering::Relaxed) {
        return Err(Error::Unbounded { cap });
    }
    let stats_nodes = total.nodes;
    if completed.iter().any(|c| !c) {
        let checkpoint = Checkpoint {
            group: spec.clone(),
            lengths: lengths.clone(),
            mode: sym.mode(),
            goal,
            task_count: tasks.len(),
            completed: (0..tasks.len()).filter(|&i| completed[i]).collect(),
            best_len: total.best_len,
            found: total
                .found
                .iter()
                .map(|r| Sequence::from_ranks(group, r))
                .collect(),
            nodes: stats_nodes,
        };
        return Err(Error::BudgetExhausted {
            budget: config.budget,
            nodes: stats_nodes,
            lower_bound: if longest { partial_best + 1 } else { 0 },
            checkpoint: Box::new(checkpoint),
        });
    }

    let found: BTreeSet<Vec<u8>> = if searcher.full {
        total.found
    } else {
        total
            .found
            .iter()
            .map(|r| sym.canonical_ranks(r).0)
            .collect()
    };
    Ok(SearchOutput {
        best_len: total.best_len,
        found: found
            .iter()
            .map(|r| Sequence::from_ranks(group, r))
            .collect(),
        stats: SearchStats {
            node_count: stats_nodes,
            pruned: total.pruned,
            tasks: tasks.len(),
            wall_time: started.elapsed().as_secs_f64(),
        },
    })
}

/// `s_L(G)` with one extremal certificate and the number of extremal classes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantResult {
    pub group: GroupSpec,
    pub length_set: LengthSet,
    pub mode: EquivalenceMode,
    pub value: usize,
    pub extremal_count_up_to_symmetry: usize,
    pub certificate: Sequence,
    pub stats: SearchStats,
}

/// Extremal sequences up to symmetry.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Enumeration {
    pub group: GroupSpec,
    pub length_set: LengthSet,
    pub mode: EquivalenceMode,
    pub value: usize,
    pub sequences: Vec<Sequence>,
    pub stats: SearchStats,
}

impl Enumeration {
    /// Trailing record of a JSON-lines stream.
    pub fn summary(&self) -> serde_json::Value {
        serde_json::json!({
            "value": self.value,
            "class_count": self.sequences.len(),
            "node_count": self.stats.node_count,
            "wall_time": self.stats.wall_time,
        })
    }
}

fn longest(
    group: &Group,
    lengths: &LengthSet,
    mode: EquivalenceMode,
    config: &SearchConfig,
) -> Result<SearchOutput> {
    let sym = Symmetry::for_lengths(group, lengths, mode)?;
    search(group, lengths, &sym, Goal::Longest, config)
}

/// `s_L(G)` under the strongest legal symmetry.
pub fn compute_s_l(
    group: &Group,
    lengths: &LengthSet,
    config: &SearchConfig,
) -> Result<ConstantResult> {
    compute_s_l_with_mode(
        group,
        lengths,
        EquivalenceMode::strongest(group.spec(), lengths),
        config,
    )
}

pub fn compute_s_l_with_mode(
    group: &Group,
    lengths: &LengthSet,
    mode: EquivalenceMode,
    config: &SearchConfig,
) -> Result<ConstantResult> {
    let out = longest(group, lengths, mode, config)?;
    let certificate = out
        .found
        .first()
        .cloned()
        .unwrap_or_else(|| Sequence::empty(group.spec().clone()));
    Ok(ConstantResult {
        group: group.spec().clone(),
        length_set: lengths.clone(),
        mode,
        value: out.best_len + 1,
        extremal_count_up_to_symmetry: out.found.len(),
        certificate,
        stats: out.stats,
    })
}

/// All classes of `L`-zero-sum free sequences of length `s_L(G) − 1`.
pub fn enumerate_extremal(
    group: &Group,
    lengths: &LengthSet,
    mode: EquivalenceMode,
    config: &SearchConfig,
) -> Result<Enumeration> {
    let out = longest(group, lengths, mode, config)?;
    Ok(Enumeration {
        group: group.spec().clone(),
        length_set: lengths.clone(),
        mode,
        value: out.best_len + 1,
        sequences: out.found,
        stats: out.stats,
    })
}

/// All classes of `L`-zero-sum free sequences of length `len`. The
/// `value` field holds `len`.
pub fn enumerate_avoiding(
    group: &Group,
    lengths: &LengthSet,
    len: usize,
    mode: EquivalenceMode,
    config: &SearchConfig,
) -> Result<Enumeration> {
    let sym = Symmetry::for_lengths(group, lengths, mode)?;
    let out = search(group, lengths, &sym, Goal::Avoiding(len), config)?;
    Ok(Enumeration {
        group: group.spec().clone(),
        length_set: lengths.clone(),
        mode,
        value: len,
        sequences: out.found,
        stats: out.stats,
    })
}

/// Automorphism classes of minimal zero-sum sequences of length `len`.
pub fn enumerate_minimal_zero_sum(
    group: &Group,
    len: usize,
    config: &SearchConfig,
) -> Result<Enumeration> {
    let sym = Symmetry::new(group, EquivalenceMode::Automorphism)?;
    let out = search(
        group,
        &LengthSet::Any,
        &sym,
        Goal::MinimalZeroSum(len),
        config,
    )?;
    Ok(Enumeration {
        group: group.spec().clone(),
        length_set: LengthSet::Any,
        mode: EquivalenceMode::Automorphism,
        value: len,
        sequences: out.found,
        stats: out.stats,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DavenportResult {
    pub constant: ConstantResult,
    /// Longest minimal zero-sum sequence.
    pub max_minimal_length: usize,
    pub max_minimal_classes: usize,
}

/// `D(G)`, cross-checked against the longest minimal zero-sum sequences.
pub fn davenport_constant(group: &Group, config: &SearchConfig) -> Result<DavenportResult> {
    let constant = compute_s_l(group, &LengthSet::Any, config)?;
    let d = constant.value;
    let at_d = enumerate_minimal_zero_sum(group, d, config)?;
    let beyond = enumerate_minimal_zero_sum(group, d + 1, config)?;
    if at_d.sequences.is_empty() || !beyond.sequences.is_empty() {
        return Err(Error::Inconsistent(format!(
            "D = {d} but minimal zero-sum sequences of length {d}: {}, of length {}: {}",
            at_d.sequences.len(),
            d + 1,
            beyond.sequences.len()
        )));
    }
    Ok(DavenportResult {
        constant,
        max_minimal_length: d,
        max_minimal_classes: at_d.sequences.len(),
    })
}

/// Classes of minimal zero-sum sequences of length `D(G)`.
pub fn enumerate_max_minimal_zero_sum(group: &Group, config: &SearchConfig) -> Result<Enumeration> {
    let d = compute_s_l(group, &LengthSet::Any, config)?.value;
    enumerate_minimal_zero_sum(group, d, config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(o: &[u64]) -> Group {
        Group::new(GroupSpec::new(o.to_vec()).unwrap()).unwrap()
    }

    fn cfg() -> SearchConfig {
        SearchConfig {
            verify_prunes: true,
            ..SearchConfig::with_budget(u64::MAX)
        }
    }

    #[test]
    fn symmetry_sizes() {
        let g = group(&[2, 2, 2]);
        assert_eq!(
            Symmetry::new(&g, EquivalenceMode::Automorphism)
                .unwrap()
                .len(),
            168
        );
        assert_eq!(
            Symmetry::new(&g, EquivalenceMode::AutomorphismAndTranslation)
                .unwrap()
                .len(),
            168 * 8
        );
    }

    #[test]
    fn translation_is_rejected_for_short_lengths() {
        let g = group(&[2, 2, 4]);
        assert_eq!(
            Symmetry::for_lengths(
                &g,
                &LengthSet::Short,
                EquivalenceMode::AutomorphismAndTranslation
            )
            .unwrap_err(),
            Error::IllegalTranslation
        );
    }

    #[test]
    fn canonical_form_of_zeros() {
        let g = group(&[2, 2, 2]);
        let s = Sequence::power(g.spec().clone(), g.spec().zero(), 3).unwrap();
        for mode in [
            EquivalenceMode::Automorphism,
            EquivalenceMode::AutomorphismAndTranslation,
        ] {
            assert_eq!(canonical_form(&g, &s, mode).unwrap(), s);
        }
    }

    #[test]
    fn cyclic_davenport() {
        for n in 2..=7 {
            let g = group(&[n]);
            let d = davenport_constant(&g, &cfg()).unwrap();
            assert_eq!(d.constant.value, n as usize);
            assert_eq!(d.max_minimal_classes, 1);
        }
    }

    #[test]
    fn c2_cubed_constants() {
        let g = group(&[2, 2, 2]);
        assert_eq!(compute_s_l(&g, &LengthSet::Any, &cfg()).unwrap().value, 4);
        let eta = compute_s_l(&g, &LengthSet::Short, &cfg()).unwrap();
        assert_eq!((eta.value, eta.extremal_count_up_to_symmetry), (8, 1));
        let s = compute_s_l(&g, &LengthSet::ExactExponent, &cfg()).unwrap();
        assert_eq!((s.value, s.extremal_count_up_to_symmetry), (9, 1));
        assert_eq!(s.certificate.len(), 8);
        assert!(s.certificate.is_squarefree());
    }

    #[test]
    fn partial_pruning_matches_full() {
        let g = group(&[2, 4]);
        for l in [LengthSet::Short, LengthSet::ExactExponent, LengthSet::Any] {
            let full = enumerate_extremal(
                &g,
                &l,
                EquivalenceMode::Automorphism,
                &SearchConfig {
                    prune: PruneStrength::Full,
                    ..cfg()
                },
            )
            .unwrap();
            let part = enumerate_extremal(
                &g,
                &l,
                EquivalenceMode::Automorphism,
                &SearchConfig {
                    prune: PruneStrength::Partial,
                    ..cfg()
                },
            )
            .unwrap();
            assert_eq!(full.value, part.value);
            assert_eq!(full.sequences, part.sequences);
        }
    }

    #[test]
    fn unbounded_is_reported() {
        let g = group(&[3]);
        let l = LengthSet::explicit([1]).unwrap();
        assert_eq!(
            compute_s_l(&g, &l, &cfg()).unwrap_err(),
            Error::Unbounded { cap: 9 }
        );
    }

    #[test]
    fn budget_exhaustion_and_resume() {
        let g = group(&[2, 2, 4]);
        let direct = compute_s_l(&g, &LengthSet::Short, &cfg()).unwrap();
        let mut config = SearchConfig::with_budget(direct.stats.node_count / 8);
        let mut rounds = 0;
        let resumed = loop {
            rounds += 1;
            assert!(rounds < 20);
            match compute_s_l(&g, &LengthSet::Short, &config) {
                Ok(r) => break r,
                Err(Error::BudgetExhausted {
                    checkpoint,
                    lower_bound,
                    ..
                }) => {
                    assert!(lower_bound <= direct.value);
                    config.resume = Some(*checkpoint);
                    config.budget *= 2;
                }
                Err(e) => panic!("{e}"),
            }
        };
        assert!(rounds > 1);
        assert_eq!(resumed.value, direct.value);
        assert_eq!(
            resumed.extremal_count_up_to_symmetry,
            direct.extremal_count_up_to_symmetry
        );
    }
}
