//! Verification suites shared by the command line and the acceptance tests.
//! Each check records an expected and an actual JSON value and passes iff
//! they are equal.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::families::{
    check_filter_lemma, decompose_ct, family_closure, generate, height_bound, height_profile,
    height_witness, standard_witnesses, FamilyLabel, Param, Problem,
};
use crate::group::{Group, GroupElement, GroupSpec};
use crate::search::{
    compute_s_l, davenport_constant, enumerate_avoiding, enumerate_extremal,
    enumerate_max_minimal_zero_sum, EquivalenceMode, SearchConfig, SearchStats, Symmetry,
};
use crate::sequence::{LengthPlan, LengthSet, Sequence};
use crate::sums::{
    brute_code_sets, count_zero_sum_subsequences, has_zero_sum, sigma_l, sigma_ranks,
};

pub const DEFAULT_SEED: u64 = 0x5eed;

/// One-line descriptions of the acceptance criteria, in order.
pub const CRITERIA: [&str; 12] = [
    "D, eta and s of C2+C2+C2n",
    "cyclic inverse forms and their subsum sets, n in 3..=12",
    "s over lengths 1..3 of C2^r, r in 2..=4",
    "squarefree length-5 sequences over C2^3 have one length-4 zero-sum",
    "longest minimal zero-sum sequences are the D families",
    "eta-extremal sequences are the eta families",
    "s-extremal sequences are the s families",
    "s = eta + exp - 1",
    "least height of s-extremal sequences",
    "C*T decomposition of every s-extremal sequence at n = 2",
    "filter property on seeded random instances at n = 2",
    "table sums agree with the brute-force oracle",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub criterion: usize,
    pub description: String,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub wall_time: f64,
    pub node_counts: BTreeMap<String, u64>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// `None` when the criterion produced no checks.
    pub fn criterion_status(&self, k: usize) -> Option<bool> {
        let mut checks = self.checks.iter().filter(|c| c.criterion == k).peekable();
        checks.peek()?;
        Some(checks.all(|c| c.pass))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Restricts the `C2+C2+C2n` checks to one `n`.
    pub n: Option<u64>,
    pub seed: u64,
    pub config: SearchConfig,
    pub filter_trials: usize,
    pub oracle_random: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            n: None,
            seed: DEFAULT_SEED,
            config: SearchConfig::default(),
            filter_trials: 10_000,
            oracle_random: 1000,
        }
    }
}

/// Criteria run by a named suite.
pub fn suite_criteria(suite: &str) -> Result<Vec<usize>> {
    Ok(match suite {
        "paper" | "all" => (1..=12).collect(),
        "constants" => vec![1, 3, 8],
        "cyclic" => vec![2],
        "lemmas" => vec![3, 4, 11],
        "families" => vec![5, 6, 7],
        "structure" => vec![9, 10, 11],
        "oracle" => vec![12],
        _ => return Err(Error::Parse(format!("unknown suite {suite:?}"))),
    })
}

pub fn run_suite(suite: &str, opts: &VerifyOptions) -> Result<VerifyReport> {
    run_criteria(suite, &suite_criteria(suite)?, opts)
}

pub fn run_criteria(suite: &str, criteria: &[usize], opts: &VerifyOptions) -> Result<VerifyReport> {
    let started = Instant::now();
    let mut r = Recorder::default();
    for &k in criteria {
        r.criterion = k;
        match k {
            1 => constants(&mut r, opts)?,
            2 => cyclic(&mut r, opts)?,
            3 => small_lengths(&mut r, opts)?,
            4 => squarefree_five(&mut r)?,
            5 => davenport_families(&mut r, opts)?,
            6 => eta_families(&mut r, opts)?,
            7 => s_families(&mut r, opts)?,
            8 => gao(&mut r, opts)?,
            9 => heights(&mut r, opts)?,
            10 => decompositions(&mut r, opts)?,
            11 => filter(&mut r, opts)?,
            12 => oracle(&mut r, opts)?,
            _ => return Err(Error::Parse(format!("no criterion {k}"))),
        }
    }
    Ok(VerifyReport {
        suite: suite.to_string(),
        checks: r.checks,
        wall_time: started.elapsed().as_secs_f64(),
        node_counts: r.nodes,
    })
}

#[derive(Default)]
struct Recorder {
    criterion: usize,
    checks: Vec<Check>,
    nodes: BTreeMap<String, u64>,
}

impl Recorder {
    fn check(
        &mut self,
        id: String,
        description: impl Into<String>,
        expected: impl Serialize,
        actual: impl Serialize,
    ) {
        let expected = serde_json::to_value(expected).expect("serializable");
        let actual = serde_json::to_value(actual).expect("serializable");
        self.checks.push(Check {
            pass: expected == actual,
            id,
            criterion: self.criterion,
            description: description.into(),
            expected,
            actual,
        });
    }

    fn nodes(&mut self, id: &str, stats: &SearchStats) {
        *self.nodes.entry(id.to_string()).or_default() += stats.node_count;
    }
}

fn scope(opts: &VerifyOptions, range: impl IntoIterator<Item = u64>) -> Vec<u64> {
    range
        .into_iter()
        .filter(|n| opts.n.is_none_or(|m| m == *n))
        .collect()
}

fn c2c2c2n(n: u64) -> Result<Group> {
    Group::new(GroupSpec::c2c2c2n(n))
}

fn names(seqs: impl IntoIterator<Item = Sequence>) -> BTreeSet<String> {
    seqs.into_iter().map(|s| s.to_string()).collect()
}

fn eta_expected(n: u64) -> usize {
    if n == 1 {
        8
    } else {
        2 * n as usize + 4
    }
}

fn s_expected(n: u64) -> usize {
    if n == 1 {
        9
    } else {
        4 * n as usize + 3
    }
}

fn constants(r: &mut Recorder, opts: &VerifyOptions) -> Result<()> {
    for n in scope(opts, 1..=3) {
        let g = c2c2c2n(n)?;
        let tag = format!("n{n}");
        let d = davenport_constant(&g, &opts.config)?;
        r.nodes(&format!("D.{tag}"), &d.constant.stats);
        r.check(
            format!("1.D.{tag}"),
            format!("D({})", g.spec()),
            2 * n + 2,
            d.constant.value,
        );
        let eta = compute_s_l(&g, &LengthSet::Short, &opts.config)?;
        r.nodes(&format!("eta.{tag}"), &eta.stats);
        r.check(
            format!("1.eta.{tag}"),
            format!("eta({})", g.spec()),
            eta_expected(n),
            eta.value,
        );
        if n >= 2 {
            // Any member of the last s family certifies the lower bound.
            let w = standard_witnesses(g.spec(), FamilyLabel::S3)?.remove(0);
            let s = generate(&w, g.spec())?;
            let free = !has_zero_sum(&g, &s, &LengthSet::ExactExponent)?;
            r.check(
                format!("1.s.lower.{tag}"),
                format!("s({}) lower bound from {}", g.spec(), w.label),
                json!({ "length": s_expected(n) - 1, "avoids": true }),
                json!({ "length": s.len(), "avoids": free }),
            );
        }
        match compute_s_l(&g, &LengthSet::ExactExponent, &opts.config) {
            Ok(s) => {
                r.nodes(&format!("s.{tag}"), &s.stats);
                r.check(
                    format!("1.s.{tag}"),
                    format!("s({})", g.spec()),
                    s_expected(n),
                    s.value,
                );
            }
            Err(Error::BudgetExhausted {
                nodes, lower_bound, ..
            }) => {
                *r.nodes.entry(format!("s.{tag}")).or_default() += nodes;
                r.check(
                    format!("1.s.{tag}"),
                    format!("s({}) (search budget exhausted)", g.spec()),
                    s_expected(n),
                    json!({ "lower_bound": lower_bound.max(s_expected(n)) }),
                );
            }
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn cyclic(r: &mut Recorder, opts: &VerifyOptions) -> Result<()> {
    use FamilyLabel::*;
    for n in 3..=12u64 {
        let g = Group::new(GroupSpec::cyclic(n))?;
        let spec = g.spec();
        let k = n as usize;
        let all: BTreeSet<_> = spec.elements().collect();
        for problem in [Problem::CyclicEta, Problem::CyclicS] {
            let sym = Symmetry::new(&g, problem.mode())?;
            let lens = problem.required_lengths(n);
            let (long, short) = (lens[0], lens[1]);
            let forms: [(usize, &[FamilyLabel]); 2] = if problem == Problem::CyclicEta {
                [(long, &[CycEta1]), (short, &[CycEta2a, CycEta2b])]
            } else {
                [(long, &[CycS1]), (short, &[CycS2a, CycS2b])]
            };
            for (len, labels) in forms {
                let id = format!("{problem}.n{n}.len{len}");
                let e =
                    enumerate_avoiding(&g, &problem.lengths(), len, problem.mode(), &opts.config)?;
                r.nodes(&id, &e.stats);
                let closure = family_closure(&g, &sym, labels)?;
                r.check(
                    format!("2.{id}"),
                    format!(
                        "classes of length {len} over C{n} avoiding {}",
                        problem.lengths()
                    ),
                    names(closure),
                    names(e.sequences),
                );
            }
            // Subsum sets of every member of the short families.
            let mut checked = 0usize;
            let mut wrong = Vec::new();
            for label in [CycEta2a, CycEta2b, CycS2a, CycS2b] {
                if label.problem() != problem || (n == 3 && matches!(label, CycEta2b | CycS2b)) {
                    continue;
                }
                for w in standard_witnesses(spec, label)? {
                    let t = generate(&w, spec)?;
                    let el = |name: &str| match &w.params[name] {
                        Param::Element(x) => x.clone(),
                        _ => unreachable!("cyclic witnesses carry elements"),
                    };
                    let (lengths, expected): (LengthSet, BTreeSet<_>) = match label {
                        CycEta2a => {
                            let minus_g = spec.neg(&el("g"))?;
                            (
                                LengthSet::Any,
                                all.iter()
                                    .filter(|x| !x.is_zero() && **x != minus_g)
                                    .cloned()
                                    .collect(),
                            )
                        }
                        CycEta2b => (
                            LengthSet::Any,
                            all.iter().filter(|x| !x.is_zero()).cloned().collect(),
                        ),
                        CycS2a => {
                            let excluded = spec.neg(&spec.add(&el("g"), &el("h"))?)?;
                            (
                                LengthSet::explicit([k - 2])?,
                                all.iter().filter(|x| **x != excluded).cloned().collect(),
                            )
                        }
                        _ => (LengthSet::explicit([k - 2])?, all.clone()),
                    };
                    checked += 1;
                    if sigma_l(&g, &t, &lengths)? != expected {
                        wrong.push(t.to_string());
                    }
                }
            }
            r.check(
                format!("2.{problem}.n{n}.sums"),
                format!("subsum sets of the short {problem} forms over C{n}"),
                json!({ "members": checked, "wrong": Vec::<String>::new() }),
                json!({ "members": checked, "wrong": wrong }),
            );
        }
    }
    Ok(())
}

fn small_lengths(r: &mut Recorder, opts: &VerifyOptions) -> Result<()> {
    for rank in 2..=4usize {
        let g = Group::new(GroupSpec::new(vec![2; rank])?)?;
        let res = compute_s_l(&g, &LengthSet::interval(1, Some(3))?, &opts.config)?;
        let id = format!("3.r{rank}");
        r.nodes(&id, &res.stats);
        r.check(
            id,
            format!("s over lengths 1..3 of C2^{rank}"),
            1 + (1usize << (rank - 1)),
            res.value,
        );
    }
    Ok(())
}

fn squarefree_five(r: &mut Recorder) -> Result<()> {
    let g = Group::new(GroupSpec::new(vec![2, 2, 2])?)?;
    let elements: Vec<_> = g.spec().elements().collect();
    let mut total = 0;
    let mut unique = 0;
    for mask in 0u32..256 {
        if mask.count_ones() != 5 {
            continue;
        }
        let s = Sequence::from_elements(
            g.spec().clone(),
            (0..8)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| elements[i].clone()),
        )?;
        total += 1;
        if count_zero_sum_subsequences(&g, &s, 4)? == 1 {
            unique += 1;
        }
    }
    r.check(
        "4.squarefree".into(),
        "squarefree length-5 sequences over C2^3 with exactly one length-4 zero-sum",
        json!({ "sequences": 56, "with_one": 56 }),
        json!({ "sequences": total, "with_one": unique }),
    );
    Ok(())
}

fn compare_families(
    r: &mut Recorder,
    id: String,
    description: String,
    group: &Group,
    problem: Problem,
    labels: &[FamilyLabel],
    enumerated: Vec<Sequence>,
) -> Result<()> {
    let sym = Symmetry::new(group, problem.mode())?;
    let closure = family_closure(group, &sym, labels)?;
    r.check(id, description, names(closure), names(enumerated));
    Ok(())
}

fn empty_families(
    r: &mut Recorder,
    id: String,
    group: &Group,
    labels: &[FamilyLabel],
) -> Result<()> {
    let mut sizes = BTreeMap::new();
    for &l in labels {
        sizes.insert(l.name(), standard_witnesses(group.spec(), l)?.len());
    }
    let zeros: BTreeMap<_, _> = sizes.keys().map(|k| (*k, 0usize)).collect();
    r.check(
        id,
        format!("families {labels:?} are empty over {}", group.spec()),
        zeros,
        sizes,
    );
    Ok(())
}

fn davenport_families(r: &mut Recorder, opts: &VerifyOptions) -> Result<()> {
    use FamilyLabel::*;
    for n in scope(opts, 1..=3) {
        let g = c2c2c2n(n)?;
        let e = enumerate_max_minimal_zero_sum(&g, &opts.config)?;
        r.nodes(&format!("D-classes.n{n}"), &e.stats);
        let labels = Problem::DavenportMax.labels(n);
        compare_families(
            r,
            format!("5.n{n}"),
            format!("longest minimal zero-sum classes over {}", g.spec()),
            &g,
            Problem::DavenportMax,
            &labels,
            e.sequences,
        )?;
        if n <= 2 {
            empty_families(r, format!("5.empty.n{n}"), &g, &[D2, D3, D4, D5])?;
        }
    }
    Ok(())
}

fn eta_families(r: &mut Recorder, opts: &VerifyOptions) -> Result<()> {
    use FamilyLabel::*;
    for n in scope(opts, 1..=3) {
        let g = c2c2c2n(n)?;
        let e = enumerate_extremal(
            &g,
            &LengthSet::Short,
            EquivalenceMode::Automorphism,
            &opts.config,
        )?;
        r.nodes(&format!("eta-classes.n{n}"), &e.stats);
        let labels = if n == 2 {
            vec![Eta3]
        } else {
            Problem::EtaExtremal.labels(n)
        };
        compare_families(
            r,
            format!("6.n{n}"),
            format!("eta-extremal classes over {}", g.spec()),
            &g,
            Problem::EtaExtremal,
            &labels,
            e.sequences,
        )?;
        if n == 2 {
            empty_families(r, "6.empty.n2".into(), &g, &[Eta1, Eta2])?;
        }
    }
    Ok(())
}

fn s_extremal(g: &Group, opts: &VerifyOptions) -> Result<crate::search::Enumeration> {
    enumerate_extremal(
        g,
        &LengthSet::ExactExponent,
        EquivalenceMode::AutomorphismAndTranslation,
        &opts.config,
    )
}

fn s_families(r: &mut Recorder, opts: &VerifyOptions) -> Result<()> {
    use FamilyLabel::*;
    for n in scope(opts, 1..=3) {
        let g = c2c2c2n(n)?;
        let e = s_extremal(&g, opts)?;
        r.nodes(&format!("s-classes.n{n}"), &e.stats);
        let labels = if n == 2 {
            vec![S3]
        } else {
            Problem::SExtremal.labels(n)
        };
        compare_families(
            r,
            format!("7.n{n}"),
            format!("s-extremal classes over {}", g.spec()),
            &g,
            Problem::SExtremal,
            &labels,
            e.sequences,
        )?;
        if n == 2 {
            empty_families(r, "7.empty.n2".into(), &g, &[S1, S2])?;
        }
    }
    Ok(())
}

fn gao(r: &mut Recorder, opts: &VerifyOptions) -> Result<()> {
    for n in scope(opts, 2..=3) {
        let g = c2c2c2n(n)?;
        let eta = compute_s_l(&g, &LengthSet::Short, &opts.config)?;
        let s = compute_s_l(&g, &LengthSet::ExactExponent, &opts.config)?;
        r.nodes(&format!("gao.n{n}"), &eta.stats);
        r.nodes(&format!("gao.n{n}"), &s.stats);
        r.check(
            format!("8.n{n}"),
            format!("s = eta + exp - 1 over {}", g.spec()),
            eta.value + 2 * n as usize - 1,
            s.value,
        );
    }
    Ok(())
}

fn heights(r: &mut Recorder, opts: &VerifyOptions) -> Result<()> {
    if opts.n.is_none_or(|n| n == 2) {
        let g = c2c2c2n(2)?;
        let e = s_extremal(&g, opts)?;
        r.nodes("height.n2", &e.stats);
        let profile = height_profile(e.sequences)?;
        r.check(
            "9.min.n2".into(),
            "least height of s-extremal sequences at n = 2",
            height_bound(2),
            profile.min_height,
        );
    }
    for n in scope(opts, 2..=4) {
        let g = c2c2c2n(n)?;
        let s = height_witness(g.spec())?;
        let free = !has_zero_sum(&g, &s, &LengthSet::ExactExponent)?;
        r.check(
            format!("9.witness.n{n}"),
            format!("low-height s-extremal sequence over {}", g.spec()),
            json!({ "length": 4 * n + 2, "avoids": true, "height": height_bound(n) }),
            json!({ "length": s.len(), "avoids": free, "height": s.height() }),
        );
    }
    Ok(())
}

fn decompositions(r: &mut Recorder, opts: &VerifyOptions) -> Result<()> {
    if !opts.n.is_none_or(|n| n == 2) {
        return Ok(());
    }
    let g = c2c2c2n(2)?;
    let spec = g.spec();
    let e = s_extremal(&g, opts)?;
    r.nodes("decompose.n2", &e.stats);
    let sym = Symmetry::new(&g, EquivalenceMode::AutomorphismAndTranslation)?;
    let mut members = BTreeSet::new();
    for s in &e.sequences {
        for i in 0..sym.len() {
            members.insert(sym.apply(&g, i, s)?);
        }
    }
    let mut ok = 0usize;
    for s in &members {
        if let Some(d) = decompose_ct(&g, s)? {
            let rebuilt = d.c.product(&d.t)?.translate(&d.f)?;
            let shape = d.c.len() == 2 * 2 - 1 && d.u + d.v + d.w == 1;
            if rebuilt == *s && shape && !has_zero_sum(&g, &d.t, &LengthSet::Short)? {
                ok += 1;
            }
        }
    }
    r.check(
        "10.n2".into(),
        format!("every s-extremal sequence over {spec} splits as C*T"),
        json!({ "sequences": members.len(), "decomposed": members.len() }),
        json!({ "sequences": members.len(), "decomposed": ok }),
    );
    Ok(())
}

fn filter(r: &mut Recorder, opts: &VerifyOptions) -> Result<()> {
    if !opts.n.is_none_or(|n| n == 2) {
        return Ok(());
    }
    let g = c2c2c2n(2)?;
    let spec = g.spec();
    let eta = 8;
    let exp = 4;
    let elements: Vec<_> = spec.elements().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut accepted, mut held, mut draws) = (0usize, 0usize, 0usize);
    while accepted < opts.filter_trials {
        draws += 1;
        let f = elements.choose(&mut rng).expect("nonempty").clone();
        let k = rng.gen_range(1..=exp);
        let copies = rng.gen_range(0..=k);
        let mut c = vec![f.clone(); copies];
        c.extend((copies..k).map(|_| elements.choose(&mut rng).expect("nonempty").clone()));
        let rest =
            (0..eta + exp - 1 - k).map(|_| elements.choose(&mut rng).expect("nonempty").clone());
        let c_prime = Sequence::from_elements(spec.clone(), c.iter().cloned())?;
        let s = Sequence::from_elements(spec.clone(), c.into_iter().chain(rest))?;
        let res = check_filter_lemma(&g, eta, &s, &c_prime, &f)?;
        if res.hypotheses_hold {
            accepted += 1;
            held += res.conclusion_holds as usize;
        }
    }
    r.check(
        "11.n2".into(),
        format!("{accepted} seeded instances over {spec} meeting the hypotheses ({draws} drawn)"),
        accepted,
        held,
    );
    Ok(())
}

fn oracle_palette(spec: &GroupSpec) -> Result<Vec<LengthSet>> {
    let exp = spec.exponent() as usize;
    Ok(vec![
        LengthSet::Any,
        LengthSet::Short,
        LengthSet::ExactExponent,
        LengthSet::interval(2, Some(3))?,
        LengthSet::explicit([1, exp + 1])?,
    ])
}

/// A length set prepared for both paths: the table plan and the resolved
/// lengths up to the longest input.
struct Prepared {
    set: LengthSet,
    plan: LengthPlan,
    lengths: BTreeSet<usize>,
}

fn prepare(spec: &GroupSpec, palette: Vec<LengthSet>, max_len: usize) -> Vec<Prepared> {
    palette
        .into_iter()
        .map(|set| Prepared {
            plan: set.plan(spec),
            lengths: set.resolve(spec, max_len),
            set,
        })
        .collect()
}

/// Compares every prepared length set on `ranks`; returns the mismatches.
fn oracle_mismatches(g: &Group, ranks: &[u8], palette: &[Prepared]) -> Result<Vec<String>> {
    let flat: Vec<&GroupElement> = ranks.iter().map(|&r| g.element(r)).collect();
    let by_len = brute_code_sets(g.spec(), &flat)?;
    let mut bad = Vec::new();
    for p in palette {
        let mut brute = ElemSet::EMPTY;
        for (k, codes) in by_len.iter().enumerate().skip(1) {
            if p.lengths.contains(&k) {
                brute.union_with(codes);
            }
        }
        let mut table = ElemSet::EMPTY;
        for r in sigma_ranks(g, ranks, &p.plan).iter() {
            table.insert(g.lex_position(r) as u8);
        }
        if table != brute {
            bad.push(format!(
                "{} over {} with L = {}",
                Sequence::from_ranks(g, ranks),
                g.spec(),
                p.set
            ));
        }
    }
    Ok(bad)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub group: GroupSpec,
    pub seed: u64,
    pub inputs: usize,
    pub mismatches: Vec<String>,
}

/// Seeded random sequences of length at most `max_len` over one group,
/// checked on the standard length sets plus a random interval and list.
pub fn oracle_random(g: &Group, count: usize, max_len: usize, seed: u64) -> Result<OracleReport> {
    if max_len > crate::sums::ORACLE_GUARD {
        return Err(Error::GuardExceeded {
            len: max_len,
            max: crate::sums::ORACLE_GUARD,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    for _ in 0..count {
        let len = rng.gen_range(0..=max_len);
        let ranks = random_ranks(&mut rng, g, len);
        let palette = random_palette(&mut rng, g.spec(), max_len.max(1))?;
        mismatches.extend(oracle_mismatches(
            g,
            &ranks,
            &prepare(g.spec(), palette, max_len),
        )?);
    }
    Ok(OracleReport {
        group: g.spec().clone(),
        seed,
        inputs: count,
        mismatches,
    })
}

fn random_ranks(rng: &mut ChaCha8Rng, g: &Group, len: usize) -> Vec<u8> {
    let mut ranks: Vec<u8> = (0..len).map(|_| rng.gen_range(0..g.len()) as u8).collect();
    ranks.sort_unstable();
    ranks
}

fn random_palette(
    rng: &mut ChaCha8Rng,
    spec: &GroupSpec,
    max_len: usize,
) -> Result<Vec<LengthSet>> {
    let mut palette = oracle_palette(spec)?;
    let lo = rng.gen_range(1..=max_len);
    palette.push(LengthSet::interval(lo, Some(rng.gen_range(lo..=max_len)))?);
    palette.push(LengthSet::interval(lo, None)?);
    palette.push(LengthSet::explicit(
        (1..=max_len).filter(|_| rng.gen_bool(0.3)).chain([lo]),
    )?);
    Ok(palette)
}

/// One presentation of every abelian group of order at most 16.
pub const SMALL_GROUPS: [&[u64]; 24] = [
    &[2],
    &[3],
    &[4],
    &[2, 2],
    &[5],
    &[6],
    &[7],
    &[8],
    &[2, 4],
    &[2, 2, 2],
    &[9],
    &[3, 3],
    &[10],
    &[11],
    &[12],
    &[2, 6],
    &[13],
    &[14],
    &[15],
    &[16],
    &[2, 8],
    &[4, 4],
    &[2, 2, 4],
    &[2, 2, 2, 2],
];

/// Calls `visit` on every multiset of at most `max_len` ranks extending
/// `ranks` by terms no smaller than `start`.
fn each_multiset(
    g: &Group,
    ranks: &mut Vec<u8>,
    start: usize,
    max_len: usize,
    visit: &mut dyn FnMut(&[u8]) -> Result<()>,
) -> Result<()> {
    visit(ranks)?;
    if ranks.len() < max_len {
        for x in start..g.len() {
            ranks.push(x as u8);
            each_multiset(g, ranks, x, max_len, visit)?;
            ranks.pop();
        }
    }
    Ok(())
}

fn oracle(r: &mut Recorder, opts: &VerifyOptions) -> Result<()> {
    const MAX_LEN: usize = 8;
    let mut inputs = 0usize;
    let mut bad = Vec::new();
    for orders in SMALL_GROUPS {
        let g = Group::new(GroupSpec::new(orders.to_vec())?)?;
        let palette = prepare(g.spec(), oracle_palette(g.spec())?, MAX_LEN);
        let mut ranks = Vec::with_capacity(MAX_LEN);
        each_multiset(&g, &mut ranks, 0, MAX_LEN, &mut |ranks| {
            inputs += 1;
            bad.extend(oracle_mismatches(&g, ranks, &palette)?);
            Ok(())
        })?;
    }
    r.check(
        "12.exhaustive".into(),
        format!(
            "{inputs} sequences of length at most {MAX_LEN} over every group of order at most 16"
        ),
        Vec::<String>::new(),
        bad,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut bad = Vec::new();
    for _ in 0..opts.oracle_random {
        let orders = loop {
            let arity = rng.gen_range(1..=3);
            let orders: Vec<u64> = (0..arity).map(|_| rng.gen_range(2..=36)).collect();
            if orders.iter().product::<u64>() <= 36 {
                break orders;
            }
        };
        let g = Group::new(GroupSpec::new(orders)?)?;
        let len = rng.gen_range(0..=16);
        let ranks = random_ranks(&mut rng, &g, len);
        let palette = random_palette(&mut rng, g.spec(), 16)?;
        bad.extend(oracle_mismatches(
            &g,
            &ranks,
            &prepare(g.spec(), palette, 16),
        )?);
    }
    r.check(
        "12.random".into(),
        format!(
            "{} seeded sequences of length at most 16 over groups of order at most 36",
            opts.oracle_random
        ),
        Vec::<String>::new(),
        bad,
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_resolve() {
        assert_eq!(suite_criteria("paper").unwrap().len(), 12);
        assert!(suite_criteria("nope").is_err());
    }

    #[test]
    fn squarefree_criterion_passes() {
        let report = run_criteria("t", &[4], &VerifyOptions::default()).unwrap();
        assert_eq!(report.criterion_status(4), Some(true));
        assert_eq!(report.criterion_status(5), None);
    }

    #[test]
    fn scoping_by_n() {
        let opts = VerifyOptions {
            n: Some(5),
            ..VerifyOptions::default()
        };
        let report = run_criteria("t", &[1, 9, 10], &opts).unwrap();
        assert!(report.checks.is_empty());
    }
}
