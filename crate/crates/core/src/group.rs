//! Finite abelian groups presented as direct sums of cyclic groups.
//!
//! [`GroupSpec`] is the lightweight description (the list of cyclic orders)
//! and carries element arithmetic. [`Group`] adds the enumeration tables used
//! by every search: elements are ranked by `(order, residues)`, and sets of
//! elements are bitsets over those ranks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::{ElemSet, MAX_ELEMENTS};
use crate::error::{Error, Result};

/// Default enumeration cap on `|G|`.
pub const DEFAULT_CAP: u64 = 256;

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut ps = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            ps.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        ps.push(m);
    }
    ps
}

/// A residue vector. Ordering is lexicographic on the residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(Vec<u64>);

impl GroupElement {
    pub fn residues(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&r| r == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// `C_{orders[0]} ⊕ C_{orders[1]} ⊕ ...`, kept in the order given.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct GroupSpec {
    orders: Vec<u64>,
}

impl TryFrom<Vec<u64>> for GroupSpec {
    type Error = Error;

    fn try_from(orders: Vec<u64>) -> Result<Self> {
        GroupSpec::new(orders)
    }
}

impl From<GroupSpec> for Vec<u64> {
    fn from(g: GroupSpec) -> Self {
        g.orders
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|o| o.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl GroupSpec {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidGroup(
                "at least one cyclic factor is required".into(),
            ));
        }
        if let Some(&o) = orders.iter().find(|&&o| o < 2) {
            return Err(Error::InvalidGroup(format!("cyclic order {o} is below 2")));
        }
        if orders
            .iter()
            .try_fold(1u64, |acc, &o| acc.checked_mul(o))
            .is_none()
        {
            return Err(Error::InvalidGroup("cardinality overflows u64".into()));
        }
        Ok(GroupSpec { orders })
    }

    /// Parses `"2,2,4"`.
    pub fn parse(s: &str) -> Result<Self> {
        let orders = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("{p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        GroupSpec::new(orders)
    }

    /// `C_2 ⊕ C_2 ⊕ C_{2n}`.
    pub fn c2c2c2n(n: u64) -> Self {
        GroupSpec::new(vec![2, 2, 2 * n]).expect("n >= 1")
    }

    pub fn cyclic(n: u64) -> Self {
        GroupSpec::new(vec![n]).expect("n >= 2")
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Number of cyclic factors in this presentation.
    pub fn arity(&self) -> usize {
        self.orders.len()
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &o| lcm(acc, o))
    }

    pub fn cardinality(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Invariant factors `d_1 | d_2 | ... | d_r`, smallest first.
    /// Their count is the rank `r(G)`.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let mut primes: BTreeSet<u64> = BTreeSet::new();
        for &o in &self.orders {
            primes.extend(prime_factors(o));
        }
        let mut factors: Vec<u64> = Vec::new();
        for p in primes {
            let mut parts: Vec<u64> = self
                .orders
                .iter()
                .map(|&o| {
                    let mut q = 1;
                    let mut m = o;
                    while m % p == 0 {
                        m /= p;
                        q *= p;
                    }
                    q
                })
                .filter(|&q| q > 1)
                .collect();
            parts.sort_unstable_by(|a, b| b.cmp(a));
            for (i, q) in parts.into_iter().enumerate() {
                if i == factors.len() {
                    factors.push(1);
                }
                factors[i] *= q;
            }
        }
        factors.reverse();
        factors
    }

    /// The same group presented by its invariant factors.
    pub fn normalized(&self) -> GroupSpec {
        let f = self.invariant_factors();
        if f.is_empty() {
            self.clone()
        } else {
            GroupSpec { orders: f }
        }
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.rank() <= 1
    }

    /// Returns `n` when the presentation is `C_2 ⊕ C_2 ⊕ C_{2n}` up to factor order.
    pub fn c2c2c2n_parameter(&self) -> Option<u64> {
        if self.orders.len() != 3 {
            return None;
        }
        let mut sorted = self.orders.clone();
        sorted.sort_unstable();
        (sorted[0] == 2 && sorted[1] == 2 && sorted[2].is_multiple_of(2)).then_some(sorted[2] / 2)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.orders.len()])
    }

    /// Validates residues without reducing them.
    pub fn element(&self, residues: &[u64]) -> Result<GroupElement> {
        self.check_arity(residues.len())?;
        for (&r, &o) in residues.iter().zip(&self.orders) {
            if r >= o {
                return Err(Error::ResidueOutOfRange { value: r, order: o });
            }
        }
        Ok(GroupElement(residues.to_vec()))
    }

    /// Reduces arbitrary integers componentwise.
    pub fn reduce(&self, values: &[i64]) -> Result<GroupElement> {
        self.check_arity(values.len())?;
        Ok(GroupElement(
            values
                .iter()
                .zip(&self.orders)
                .map(|(&v, &o)| (v as i128).rem_euclid(o as i128) as u64)
                .collect(),
        ))
    }

    /// The i-th standard generator `(0,..,1,..,0)`.
    pub fn standard_generator(&self, i: usize) -> GroupElement {
        let mut r = vec![0; self.orders.len()];
        r[i] = 1;
        GroupElement(r)
    }

    fn check_arity(&self, found: usize) -> Result<()> {
        if found != self.orders.len() {
            return Err(Error::ArityMismatch {
                expected: self.orders.len(),
                found,
            });
        }
        Ok(())
    }

    pub fn validate(&self, a: &GroupElement) -> Result<()> {
        self.element(&a.0).map(|_| ())
    }

    /// `a + k·b`, reduced componentwise.
    pub fn combine(&self, a: &GroupElement, b: &GroupElement, k: i64) -> Result<GroupElement> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.orders)
                .map(|((&x, &y), &o)| {
                    let o = o as i128;
                    (x as i128 + (k as i128) * (y as i128)).rem_euclid(o) as u64
                })
                .collect(),
        ))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.combine(a, b, 1)
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.combine(&self.zero(), a, -1)
    }

    pub fn scale(&self, a: &GroupElement, k: i64) -> Result<GroupElement> {
        self.combine(&self.zero(), a, k)
    }

    pub fn order_of(&self, a: &GroupElement) -> Result<u64> {
        self.validate(a)?;
        Ok(a.0
            .iter()
            .zip(&self.orders)
            .fold(1, |acc, (&r, &o)| lcm(acc, o / gcd(o, r))))
    }

    /// All elements in lexicographic residue order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let total = self.cardinality();
        (0..total).map(move |mut code| {
            let mut r = vec![0; self.orders.len()];
            for (slot, &o) in r.iter_mut().zip(&self.orders).rev() {
                *slot = code % o;
                code /= o;
            }
            GroupElement(r)
        })
    }

    /// Mixed-radix code; increasing in lexicographic residue order.
    pub(crate) fn code(&self, a: &GroupElement) -> u64 {
        a.0.iter()
            .zip(&self.orders)
            .fold(0, |acc, (&r, &o)| acc * o + r)
    }
}

/// A group together with its enumeration tables.
///
/// Elements are identified by their *rank*: position in the ordering by
/// `(order, residues)`. Rank 0 is always the identity.
#[derive(Clone, Debug)]
pub struct Group {
    spec: GroupSpec,
    elements: Vec<GroupElement>,
    code_to_rank: Vec<u8>,
    rank_to_code: Vec<u32>,
    orders: Vec<u64>,
    add: Vec<u8>,
    neg: Vec<u8>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Group {
    pub fn new(spec: GroupSpec) -> Result<Self> {
        Self::with_cap(spec, DEFAULT_CAP)
    }

    /// Builds the tables if `|G| ≤ cap`. The cap can be lowered but never
    /// raised past 256.
    pub fn with_cap(spec: GroupSpec, cap: u64) -> Result<Self> {
        let cap = cap.min(MAX_ELEMENTS as u64);
        let card = spec.cardinality();
        if card > cap {
            return Err(Error::CapExceeded {
                cardinality: card,
                cap,
            });
        }
        let n = card as usize;
        let lex: Vec<GroupElement> = spec.elements().collect();
        let mut ranked: Vec<(u64, usize)> = lex
            .iter()
            .enumerate()
            .map(|(code, e)| (spec.order_of(e).expect("enumerated"), code))
            .collect();
        ranked.sort_unstable();
        let mut code_to_rank = vec![0u8; n];
        let mut rank_to_code = vec![0u32; n];
        let mut orders = vec![0u64; n];
        let mut elements = Vec::with_capacity(n);
        for (rank, &(ord, code)) in ranked.iter().enumerate() {
            code_to_rank[code] = rank as u8;
            rank_to_code[rank] = code as u32;
            orders[rank] = ord;
            elements.push(lex[code].clone());
        }
        let mut add = vec![0u8; n * n];
        let mut neg = vec![0u8; n];
        for i in 0..n {
            for j in 0..n {
                let s = spec.add(&elements[i], &elements[j]).expect("valid");
                add[i * n + j] = code_to_rank[spec.code(&s) as usize];
            }
            let m = spec.neg(&elements[i]).expect("valid");
            neg[i] = code_to_rank[spec.code(&m) as usize];
        }
        Ok(Group {
            spec,
            elements,
            code_to_rank,
            rank_to_code,
            orders,
            add,
            neg,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, rank: u8) -> &GroupElement {
        &self.elements[rank as usize]
    }

    /// Elements in rank order.
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn rank_of(&self, a: &GroupElement) -> Result<u8> {
        self.spec.validate(a)?;
        Ok(self.code_to_rank[self.spec.code(a) as usize])
    }

    /// Ranks in lexicographic residue order.
    pub(crate) fn lex_ranks(&self) -> impl Iterator<Item = u8> + '_ {
        self.code_to_rank.iter().copied()
    }

    pub(crate) fn lex_position(&self, rank: u8) -> u32 {
        self.rank_to_code[rank as usize]
    }

    #[inline]
    pub fn add_rank(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.elements.len() + b as usize]
    }

    #[inline]
    pub fn neg_rank(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    pub fn scale_rank(&self, a: u8, k: i64) -> u8 {
        let e = self.spec.scale(self.element(a), k).expect("valid");
        self.code_to_rank[self.spec.code(&e) as usize]
    }

    pub fn order_rank(&self, a: u8) -> u64 {
        self.orders[a as usize]
    }

    #[inline]
    pub(crate) fn add_row(&self, x: u8) -> &[u8] {
        let n = self.elements.len();
        &self.add[x as usize * n..(x as usize + 1) * n]
    }

    /// `{s + x : s ∈ set}`.
    #[inline]
    pub fn translate_set(&self, set: &ElemSet, x: u8) -> ElemSet {
        let row = self.add_row(x);
        set.iter().map(|s| row[s as usize]).collect()
    }

    pub fn to_ranks<'a>(&self, xs: impl IntoIterator<Item = &'a GroupElement>) -> Result<ElemSet> {
        xs.into_iter().map(|x| self.rank_of(x)).collect()
    }

    pub fn to_elements(&self, set: &ElemSet) -> BTreeSet<GroupElement> {
        set.iter().map(|r| self.element(r).clone()).collect()
    }

    /// The subgroup generated by `gens`, as a rank set.
    pub fn span(&self, gens: &[u8]) -> ElemSet {
        let mut span = ElemSet::singleton(0);
        for &g in gens {
            span = self.extend_span(&span, g).0;
        }
        span
    }

    /// `⟨span, x⟩` and the order of `x` modulo `span`.
    fn extend_span(&self, span: &ElemSet, x: u8) -> (ElemSet, u64) {
        let mut d = 1u64;
        let mut multiple = x;
        while !span.contains(multiple) {
            multiple = self.add_rank(multiple, x);
            d += 1;
        }
        let mut out = *span;
        let mut shifted = *span;
        for _ in 1..d {
            shifted = self.translate_set(&shifted, x);
            out.union_with(&shifted);
        }
        (out, d)
    }

    /// Backtracks over tuples whose successive orders modulo the running
    /// span match `profile`, in lexicographic order of concatenated
    /// residues. With `exact_order`, each element's own order must also
    /// match (the basis condition).
    fn span_tuples(
        &self,
        profile: &[u64],
        start: ElemSet,
        exact_order: bool,
        need_full: bool,
        out: &mut Vec<Vec<u8>>,
        limit: Option<usize>,
    ) {
        #[allow(clippy::too_many_arguments)]
        fn rec(
            g: &Group,
            profile: &[u64],
            span: ElemSet,
            exact: bool,
            full: bool,
            chosen: &mut Vec<u8>,
            out: &mut Vec<Vec<u8>>,
            limit: Option<usize>,
        ) {
            if limit.is_some_and(|l| out.len() >= l) {
                return;
            }
            let i = chosen.len();
            if i == profile.len() {
                if !full || span.len() == g.len() {
                    out.push(chosen.clone());
                }
                return;
            }
            let want = profile[i];
            for x in g.lex_ranks() {
                if exact && g.order_rank(x) != want {
                    continue;
                }
                if span.contains(x) {
                    continue;
                }
                let (next, d) = g.extend_span(&span, x);
                if d != want {
                    continue;
                }
                chosen.push(x);
                rec(g, profile, next, exact, full, chosen, out, limit);
                chosen.pop();
            }
        }
        let mut chosen = Vec::new();
        rec(
            self,
            profile,
            start,
            exact_order,
            need_full,
            &mut chosen,
            out,
            limit,
        );
    }
}

/// An independent generating tuple with declared element orders.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Basis {
    generators: Vec<GroupElement>,
    declared_orders: Vec<u64>,
}

impl Basis {
    /// Checks independence, generation and the declared orders.
    pub fn new(
        group: &Group,
        generators: Vec<GroupElement>,
        declared_orders: Vec<u64>,
    ) -> Result<Self> {
        if generators.len() != declared_orders.len() {
            return Err(Error::BasisMismatch(format!(
                "{} generators but {} declared orders",
                generators.len(),
                declared_orders.len()
            )));
        }
        let mut span = ElemSet::singleton(0);
        for (g, &d) in generators.iter().zip(&declared_orders) {
            let r = group.rank_of(g)?;
            if group.order_rank(r) != d {
                return Err(Error::BasisMismatch(format!(
                    "{g} has order {} not {d}",
                    group.order_rank(r)
                )));
            }
            let (next, m) = group.extend_span(&span, r);
            if m != d {
                return Err(Error::BasisMismatch(format!(
                    "{g} is not independent of the earlier generators"
                )));
            }
            span = next;
        }
        if span.len() != group.len() {
            return Err(Error::BasisMismatch(
                "generators do not generate the group".into(),
            ));
        }
        Ok(Basis {
            generators,
            declared_orders,
        })
    }

    /// The standard generators of the presentation.
    pub fn standard(spec: &GroupSpec) -> Self {
        Basis {
            generators: (0..spec.arity())
                .map(|i| spec.standard_generator(i))
                .collect(),
            declared_orders: spec.orders().to_vec(),
        }
    }

    pub(crate) fn new_unchecked(generators: Vec<GroupElement>, declared_orders: Vec<u64>) -> Self {
        Basis {
            generators,
            declared_orders,
        }
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn declared_orders(&self) -> &[u64] {
        &self.declared_orders
    }

    /// `Σ coeffs[i] · generators[i]`.
    pub fn combination(&self, spec: &GroupSpec, coeffs: &[i64]) -> Result<GroupElement> {
        if coeffs.len() != self.generators.len() {
            return Err(Error::ArityMismatch {
                expected: self.generators.len(),
                found: coeffs.len(),
            });
        }
        let mut acc = spec.zero();
        for (g, &c) in self.generators.iter().zip(coeffs) {
            acc = spec.combine(&acc, g, c)?;
        }
        Ok(acc)
    }
}

/// All ordered bases whose element orders equal `profile`, in lexicographic
/// order of their concatenated residues.
pub fn enumerate_bases(group: &Group, profile: &[u64]) -> Vec<Basis> {
    if profile.iter().product::<u64>() != group.len() as u64 {
        return Vec::new();
    }
    let mut tuples = Vec::new();
    group.span_tuples(
        profile,
        ElemSet::singleton(0),
        true,
        true,
        &mut tuples,
        None,
    );
    tuples
        .into_iter()
        .map(|t| {
            Basis::new_unchecked(
                t.iter().map(|&r| group.element(r).clone()).collect(),
                profile.to_vec(),
            )
        })
        .collect()
}

/// A group automorphism as a total permutation of element ranks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    images: Vec<GroupElement>,
    table: Vec<u8>,
}

impl Automorphism {
    /// Images of the standard generators.
    pub fn generator_images(&self) -> &[GroupElement] {
        &self.images
    }

    /// `table[rank(x)] = rank(φ(x))`.
    pub fn table(&self) -> &[u8] {
        &self.table
    }

    #[inline]
    pub fn apply_rank(&self, x: u8) -> u8 {
        self.table[x as usize]
    }

    pub fn apply(&self, group: &Group, x: &GroupElement) -> Result<GroupElement> {
        Ok(group.element(self.apply_rank(group.rank_of(x)?)).clone())
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &r)| i == r as usize)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism, group: &Group) -> Automorphism {
        let table: Vec<u8> = other
            .table
            .iter()
            .map(|&r| self.table[r as usize])
            .collect();
        let images = (0..group.spec().arity())
            .map(|i| {
                let r = group
                    .rank_of(&group.spec().standard_generator(i))
                    .expect("valid");
                group.element(table[r as usize]).clone()
            })
            .collect();
        Automorphism { images, table }
    }

    pub fn inverse(&self, group: &Group) -> Automorphism {
        let mut table = vec![0u8; self.table.len()];
        for (i, &r) in self.table.iter().enumerate() {
            table[r as usize] = i as u8;
        }
        let images = (0..group.spec().arity())
            .map(|i| {
                let r = group
                    .rank_of(&group.spec().standard_generator(i))
                    .expect("valid");
                group.element(table[r as usize]).clone()
            })
            .collect();
        Automorphism { images, table }
    }

    fn from_images(group: &Group, images: Vec<GroupElement>) -> Automorphism {
        let spec = group.spec();
        let basis = Basis::new_unchecked(images.clone(), spec.orders().to_vec());
        let mut table = vec![0u8; group.len()];
        for (rank, x) in group.elements().iter().enumerate() {
            let coeffs: Vec<i64> = x.residues().iter().map(|&r| r as i64).collect();
            let y = basis.combination(spec, &coeffs).expect("valid");
            table[rank] = group.rank_of(&y).expect("valid");
        }
        Automorphism { images, table }
    }
}

/// Every automorphism, identity first, the rest in lexicographic order of
/// the images of the standard generators.
pub fn enumerate_automorphisms(group: &Group) -> Vec<Automorphism> {
    automorphisms_up_to(group, None).expect("no limit")
}

/// As [`enumerate_automorphisms`], failing once more than `limit` exist.
pub fn enumerate_automorphisms_bounded(group: &Group, limit: usize) -> Result<Vec<Automorphism>> {
    automorphisms_up_to(group, Some(limit))
}

fn automorphisms_up_to(group: &Group, limit: Option<usize>) -> Result<Vec<Automorphism>> {
    let spec = group.spec();
    let mut tuples = Vec::new();
    group.span_tuples(
        spec.orders(),
        ElemSet::singleton(0),
        true,
        true,
        &mut tuples,
        limit.map(|l| l + 1),
    );
    if let Some(l) = limit {
        if tuples.len() > l {
            return Err(Error::Precondition(format!(
                "{spec} has more than {l} automorphisms"
            )));
        }
    }
    let identity = Basis::standard(spec);
    let mut out = vec![Automorphism::from_images(
        group,
        identity.generators().to_vec(),
    )];
    for t in tuples {
        let images: Vec<GroupElement> = t.iter().map(|&r| group.element(r).clone()).collect();
        if images != identity.generators() {
            out.push(Automorphism::from_images(group, images));
        }
    }
    Ok(out)
}

/// A subgroup `H` and the projection `π: G → G/H`, with the quotient
/// presented as a [`GroupSpec`] and cosets labelled by quotient elements.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitData {
    pub subgroup_elements: BTreeSet<GroupElement>,
    pub projection_table: BTreeMap<GroupElement, GroupElement>,
    pub quotient_spec: GroupSpec,
}

impl SplitData {
    pub fn project(&self, x: &GroupElement) -> Option<&GroupElement> {
        self.projection_table.get(x)
    }
}

/// For `C_2 ⊕ C_2 ⊕ C_{2n}`: `H` is the order-`n` subgroup of even
/// multiples in the `C_{2n}` factor and `G/H ≅ C_2^3`, with `π` reducing every
/// residue mod 2. Other shapes need an explicit subgroup, see [`split_by`].
pub fn canonical_split(group: &Group) -> Result<SplitData> {
    let spec = group.spec();
    if spec.c2c2c2n_parameter().is_none() {
        return Err(Error::UnsupportedShape(format!(
            "{spec} is not of the form C2+C2+C2n; pass an explicit subgroup"
        )));
    }
    let quotient_spec = GroupSpec::new(vec![2, 2, 2])?;
    let mut subgroup_elements = BTreeSet::new();
    let mut projection_table = BTreeMap::new();
    for x in spec.elements() {
        let image: Vec<u64> = x.residues().iter().map(|r| r % 2).collect();
        if image.iter().all(|&r| r == 0) {
            subgroup_elements.insert(x.clone());
        }
        projection_table.insert(x, GroupElement(image));
    }
    Ok(SplitData {
        subgroup_elements,
        projection_table,
        quotient_spec,
    })
}

/// Split by the subgroup generated by `generators`. The quotient is
/// presented by its invariant factors; coset labels are coordinates in a
/// quotient basis chosen in lexicographic order.
pub fn split_by(group: &Group, generators: &[GroupElement]) -> Result<SplitData> {
    let gens = generators
        .iter()
        .map(|g| group.rank_of(g))
        .collect::<Result<Vec<_>>>()?;
    let h = group.span(&gens);
    let h_size = h.len() as u64;
    let q_size = group.len() as u64 / h_size;

    // Invariant factors of G/H from |{x : p^k x ∈ H}|.
    let mut factors: Vec<u64> = Vec::new();
    for p in prime_factors(q_size) {
        let mut at_least: Vec<usize> = Vec::new();
        let mut prev_log = 0u32;
        let mut pk = p;
        loop {
            let count = (0..group.len() as u8)
                .filter(|&x| h.contains(group.scale_rank(x, pk as i64)))
                .count() as u64
                / h_size;
            let log = count.ilog(p);
            if log == prev_log {
                break;
            }
            at_least.push((log - prev_log) as usize);
            prev_log = log;
            pk *= p;
        }
        // at_least[k] = number of cyclic p-factors of order ≥ p^(k+1)
        let num = at_least.first().copied().unwrap_or(0);
        let mut parts = vec![1u64; num];
        for &c in &at_least {
            for part in parts.iter_mut().take(c) {
                *part *= p;
            }
        }
        for (i, q) in parts.into_iter().enumerate() {
            if i == factors.len() {
                factors.push(1);
            }
            factors[i] *= q;
        }
    }
    factors.reverse();
    if factors.is_empty() {
        return Err(Error::UnsupportedShape(
            "the subgroup is the whole group; the quotient is trivial".into(),
        ));
    }

    let mut subgroup_elements = BTreeSet::new();
    for r in h.iter() {
        subgroup_elements.insert(group.element(r).clone());
    }
    let mut projection_table = BTreeMap::new();

    let mut tuples = Vec::new();
    group.span_tuples(&factors, h, false, true, &mut tuples, Some(1));
    let reps = tuples
        .pop()
        .ok_or_else(|| Error::Inconsistent("no quotient basis found".into()))?;
    let quotient_spec = GroupSpec::new(factors.clone())?;
    for label in quotient_spec.elements() {
        let mut base = 0u8;
        for (&r, &c) in reps.iter().zip(label.residues()) {
            for _ in 0..c {
                base = group.add_rank(base, r);
            }
        }
        for hx in h.iter() {
            projection_table.insert(
                group.element(group.add_rank(base, hx)).clone(),
                label.clone(),
            );
        }
    }
    Ok(SplitData {
        subgroup_elements,
        projection_table,
        quotient_spec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(spec: &GroupSpec, r: &[u64]) -> GroupElement {
        spec.element(r).unwrap()
    }

    #[test]
    fn combine_examples() {
        let g = GroupSpec::new(vec![2, 2, 4]).unwrap();
        assert_eq!(
            g.combine(&el(&g, &[1, 0, 1]), &el(&g, &[0, 1, 3]), 1)
                .unwrap(),
            el(&g, &[1, 1, 0])
        );
        assert_eq!(
            g.combine(&el(&g, &[0, 0, 0]), &el(&g, &[1, 1, 2]), -1)
                .unwrap(),
            el(&g, &[1, 1, 2])
        );
        let c6 = GroupSpec::cyclic(6);
        assert_eq!(
            c6.combine(&el(&c6, &[0]), &el(&c6, &[1]), 7).unwrap(),
            el(&c6, &[1])
        );
    }

    #[test]
    fn combine_rejects_arity_mismatch() {
        let g = GroupSpec::new(vec![2, 2, 4]).unwrap();
        let bad = GroupElement(vec![1, 0]);
        assert_eq!(
            g.combine(&g.zero(), &bad, 1),
            Err(Error::ArityMismatch {
                expected: 3,
                found: 2
            })
        );
        assert!(matches!(
            g.element(&[0, 0, 4]),
            Err(Error::ResidueOutOfRange { .. })
        ));
    }

    #[test]
    fn order_examples() {
        let g = GroupSpec::new(vec![2, 2, 4]).unwrap();
        assert_eq!(g.order_of(&el(&g, &[0, 0, 1])).unwrap(), 4);
        assert_eq!(g.order_of(&el(&g, &[1, 0, 2])).unwrap(), 2);
        let h = GroupSpec::new(vec![2, 2, 6]).unwrap();
        assert_eq!(h.order_of(&el(&h, &[0, 1, 2])).unwrap(), 6);
    }

    #[test]
    fn spec_validation() {
        assert!(GroupSpec::new(vec![]).is_err());
        assert!(GroupSpec::new(vec![2, 1]).is_err());
        assert_eq!(GroupSpec::parse("2, 2,6").unwrap().orders(), &[2, 2, 6]);
        assert!(GroupSpec::parse("2,x").is_err());
        let g = GroupSpec::new(vec![2, 2, 6]).unwrap();
        assert_eq!((g.exponent(), g.cardinality()), (6, 24));
    }

    #[test]
    fn invariant_factors_follow_divisibility() {
        let f = |o: Vec<u64>| GroupSpec::new(o).unwrap().invariant_factors();
        assert_eq!(f(vec![2, 2, 6]), vec![2, 2, 6]);
        assert_eq!(f(vec![6, 4]), vec![2, 12]);
        assert_eq!(f(vec![3, 2]), vec![6]);
        assert_eq!(f(vec![4, 2, 8]), vec![2, 4, 8]);
        assert!(GroupSpec::new(vec![2, 3]).unwrap().is_cyclic());
        assert_eq!(GroupSpec::new(vec![2, 2, 2]).unwrap().rank(), 3);
    }

    #[test]
    fn rank_zero_is_identity_and_ranks_sort_by_order() {
        let g = Group::new(GroupSpec::new(vec![2, 2, 4]).unwrap()).unwrap();
        assert!(g.element(0).is_zero());
        for r in 1..g.len() as u8 {
            assert!(g.order_rank(r - 1) <= g.order_rank(r));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let spec = GroupSpec::new(vec![2, 2, 2, 2, 2, 2, 2, 2, 2]).unwrap();
        assert!(matches!(
            Group::new(spec.clone()),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            Group::with_cap(GroupSpec::cyclic(20), 16),
            Err(Error::CapExceeded {
                cardinality: 20,
                cap: 16
            })
        ));
    }

    #[test]
    fn bases_small_cases() {
        let c2 = Group::new(GroupSpec::cyclic(2)).unwrap();
        let b = enumerate_bases(&c2, &[2]);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].generators(), &[GroupElement(vec![1])]);
        let g = Group::new(GroupSpec::new(vec![2, 2, 4]).unwrap()).unwrap();
        assert!(enumerate_bases(&g, &[4, 4, 4]).is_empty());
    }

    #[test]
    fn basis_validation() {
        let spec = GroupSpec::new(vec![2, 2, 4]).unwrap();
        let g = Group::new(spec.clone()).unwrap();
        let std = Basis::standard(&spec);
        assert!(Basis::new(&g, std.generators().to_vec(), vec![2, 2, 4]).is_ok());
        // (0,0,2) lies in <(0,0,1)>.
        let dependent = vec![
            el(&spec, &[0, 0, 2]),
            el(&spec, &[0, 1, 0]),
            el(&spec, &[0, 0, 1]),
        ];
        assert!(Basis::new(&g, dependent, vec![2, 2, 4]).is_err());
    }

    #[test]
    fn automorphisms_of_c3() {
        let g = Group::new(GroupSpec::cyclic(3)).unwrap();
        let auts = enumerate_automorphisms(&g);
        assert_eq!(auts.len(), 2);
        assert!(auts[0].is_identity());
    }

    #[test]
    fn canonical_split_examples() {
        let g = Group::new(GroupSpec::new(vec![2, 2, 4]).unwrap()).unwrap();
        let s = canonical_split(&g).unwrap();
        let spec = g.spec();
        let h: BTreeSet<_> = [el(spec, &[0, 0, 0]), el(spec, &[0, 0, 2])]
            .into_iter()
            .collect();
        assert_eq!(s.subgroup_elements, h);
        assert_eq!(s.quotient_spec.cardinality(), 8);

        let g2 = Group::new(GroupSpec::new(vec![2, 2, 2]).unwrap()).unwrap();
        let s2 = canonical_split(&g2).unwrap();
        assert_eq!(s2.subgroup_elements.len(), 1);
        assert!(s2.projection_table.iter().all(|(a, b)| a == b));

        let g6 = Group::new(GroupSpec::new(vec![2, 2, 6]).unwrap()).unwrap();
        let s6 = canonical_split(&g6).unwrap();
        let spec6 = g6.spec();
        let h6: BTreeSet<_> = [0, 2, 4].iter().map(|&c| el(spec6, &[0, 0, c])).collect();
        assert_eq!(s6.subgroup_elements, h6);
        let kernel: BTreeSet<_> = s6
            .projection_table
            .iter()
            .filter(|(_, v)| v.is_zero())
            .map(|(k, _)| k.clone())
            .collect();
        assert_eq!(kernel, h6);
    }

    #[test]
    fn canonical_split_rejects_other_shapes() {
        let g = Group::new(GroupSpec::new(vec![3, 3]).unwrap()).unwrap();
        assert!(matches!(
            canonical_split(&g),
            Err(Error::UnsupportedShape(_))
        ));
    }

    #[test]
    fn general_split_quotient_structure() {
        let spec = GroupSpec::new(vec![4, 4]).unwrap();
        let g = Group::new(spec.clone()).unwrap();
        let s = split_by(&g, &[el(&spec, &[2, 0])]).unwrap();
        assert_eq!(s.subgroup_elements.len(), 2);
        assert_eq!(s.quotient_spec.orders(), &[2, 4]);

        let c12 = GroupSpec::cyclic(12);
        let g12 = Group::new(c12.clone()).unwrap();
        let s12 = split_by(&g12, &[el(&c12, &[4])]).unwrap();
        assert_eq!(s12.quotient_spec.orders(), &[4]);
    }
}
