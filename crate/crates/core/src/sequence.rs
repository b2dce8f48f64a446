//! Sequences over a group (finite multisets) and length sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{Group, GroupElement, GroupSpec};

/// A finite multiset of group elements, stored as sorted element → multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence {
    group: GroupSpec,
    counts: BTreeMap<GroupElement, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceStats {
    pub length: usize,
    pub sum: GroupElement,
    pub height: usize,
    pub support: BTreeSet<GroupElement>,
    pub squarefree: bool,
}

impl Sequence {
    pub fn empty(group: GroupSpec) -> Self {
        Sequence {
            group,
            counts: BTreeMap::new(),
        }
    }

    pub fn from_elements<I>(group: GroupSpec, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = GroupElement>,
    {
        Self::from_counts(group, elements.into_iter().map(|g| (g, 1)))
    }

    /// Zero multiplicities are dropped; repeated elements accumulate.
    pub fn from_counts<I>(group: GroupSpec, counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GroupElement, usize)>,
    {
        let mut map = BTreeMap::new();
        for (g, k) in counts {
            group.validate(&g)?;
            if k > 0 {
                *map.entry(g).or_insert(0) += k;
            }
        }
        Ok(Sequence { group, counts: map })
    }

    /// `g^k` for a single element.
    pub fn power(group: GroupSpec, g: GroupElement, k: usize) -> Result<Self> {
        Self::from_counts(group, [(g, k)])
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn multiplicity(&self, g: &GroupElement) -> usize {
        self.counts.get(g).copied().unwrap_or(0)
    }

    /// `(element, multiplicity)` pairs in lexicographic element order.
    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, usize)> {
        self.counts.iter().map(|(g, &k)| (g, k))
    }

    /// Elements with repetition, sorted.
    pub fn flat(&self) -> Vec<GroupElement> {
        self.counts
            .iter()
            .flat_map(|(g, &k)| std::iter::repeat_n(g.clone(), k))
            .collect()
    }

    pub fn support(&self) -> BTreeSet<GroupElement> {
        self.counts.keys().cloned().collect()
    }

    pub fn sum(&self) -> GroupElement {
        self.counts.iter().fold(self.group.zero(), |acc, (g, &k)| {
            self.group.combine(&acc, g, k as i64).expect("validated")
        })
    }

    pub fn height(&self) -> usize {
        self.counts.values().copied().max().unwrap_or(0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.counts.values().all(|&k| k <= 1)
    }

    pub fn stats(&self) -> SequenceStats {
        SequenceStats {
            length: self.len(),
            sum: self.sum(),
            height: self.height(),
            support: self.support(),
            squarefree: self.is_squarefree(),
        }
    }

    /// `h + S`.
    pub fn translate(&self, h: &GroupElement) -> Result<Sequence> {
        self.group.validate(h)?;
        let counts = self
            .counts
            .iter()
            .map(|(g, &k)| (self.group.add(g, h).expect("validated"), k))
            .collect();
        Ok(Sequence {
            group: self.group.clone(),
            counts,
        })
    }

    fn same_group(&self, other: &Sequence) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch {
                left: self.group.to_string(),
                right: other.group.to_string(),
            });
        }
        Ok(())
    }

    /// `T | S`.
    pub fn divides(&self, other: &Sequence) -> bool {
        self.group == other.group && self.counts.iter().all(|(g, &k)| other.multiplicity(g) >= k)
    }

    /// `S·T`.
    pub fn product(&self, other: &Sequence) -> Result<Sequence> {
        self.same_group(other)?;
        let mut counts = self.counts.clone();
        for (g, &k) in &other.counts {
            *counts.entry(g.clone()).or_insert(0) += k;
        }
        Ok(Sequence {
            group: self.group.clone(),
            counts,
        })
    }

    /// `S T^{-1}`.
    pub fn divide(&self, divisor: &Sequence) -> Result<Sequence> {
        self.same_group(divisor)?;
        if !divisor.divides(self) {
            return Err(Error::NotADivisor);
        }
        let mut counts = self.counts.clone();
        for (g, &k) in &divisor.counts {
            let slot = counts.get_mut(g).expect("divisor checked");
            *slot -= k;
            if *slot == 0 {
                counts.remove(g);
            }
        }
        Ok(Sequence {
            group: self.group.clone(),
            counts,
        })
    }

    /// Applies an element map to every term.
    pub fn map<F>(&self, mut f: F) -> Result<Sequence>
    where
        F: FnMut(&GroupElement) -> Result<GroupElement>,
    {
        let mut out = Sequence::empty(self.group.clone());
        for (g, &k) in &self.counts {
            let image = f(g)?;
            self.group.validate(&image)?;
            *out.counts.entry(image).or_insert(0) += k;
        }
        Ok(out)
    }

    /// Sorted ranks with repetition.
    pub(crate) fn to_ranks(&self, group: &Group) -> Result<Vec<u8>> {
        if &self.group != group.spec() {
            return Err(Error::GroupMismatch {
                left: self.group.to_string(),
                right: group.spec().to_string(),
            });
        }
        let mut out = Vec::with_capacity(self.len());
        for (g, &k) in &self.counts {
            let r = group.rank_of(g)?;
            out.extend(std::iter::repeat_n(r, k));
        }
        out.sort_unstable();
        Ok(out)
    }

    pub(crate) fn from_ranks(group: &Group, ranks: &[u8]) -> Sequence {
        let mut counts = BTreeMap::new();
        for &r in ranks {
            *counts.entry(group.element(r).clone()).or_insert(0) += 1;
        }
        Sequence {
            group: group.spec().clone(),
            counts,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sequence serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .counts
            .iter()
            .map(|(g, &k)| {
                if k == 1 {
                    g.to_string()
                } else {
                    format!("{g}^{k}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Serialize, Deserialize)]
struct SequenceRepr {
    group: GroupSpec,
    elements: Vec<(GroupElement, usize)>,
}

impl Serialize for Sequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SequenceRepr {
            group: self.group.clone(),
            elements: self.counts.iter().map(|(g, &k)| (g.clone(), k)).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Sequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SequenceRepr::deserialize(deserializer)?;
        if repr.elements.iter().any(|(_, k)| *k == 0) {
            return Err(serde::de::Error::custom("multiplicities must be positive"));
        }
        Sequence::from_counts(repr.group, repr.elements).map_err(serde::de::Error::custom)
    }
}

/// The permitted subsequence lengths `L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LengthSet {
    /// `{exp(G)}`
    ExactExponent,
    /// `[1, exp(G)]`
    Short,
    /// `[1, ∞)`
    Any,
    Explicit(BTreeSet<usize>),
    /// `[lo, hi]`, unbounded above when `hi` is `None`.
    Interval {
        lo: usize,
        hi: Option<usize>,
    },
}

/// How the layered sum table realizes a length set: layers `0..=lmax`,
/// the top layer absorbing every longer length when `saturating`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct LengthPlan {
    pub lmax: usize,
    pub saturating: bool,
    pub accept: Vec<bool>,
}

impl LengthPlan {
    pub fn accepts(&self, len: usize) -> bool {
        if len > self.lmax {
            self.saturating
        } else {
            self.accept[len]
        }
    }
}

impl LengthSet {
    pub fn explicit<I: IntoIterator<Item = usize>>(lengths: I) -> Result<Self> {
        let set: BTreeSet<usize> = lengths.into_iter().collect();
        if set.is_empty() {
            return Err(Error::InvalidLengthSet("explicit set is empty".into()));
        }
        if set.contains(&0) {
            return Err(Error::InvalidLengthSet("lengths must be positive".into()));
        }
        Ok(LengthSet::Explicit(set))
    }

    pub fn interval(lo: usize, hi: Option<usize>) -> Result<Self> {
        if lo == 0 {
            return Err(Error::InvalidLengthSet(
                "interval must start at 1 or later".into(),
            ));
        }
        if let Some(h) = hi {
            if h < lo {
                return Err(Error::InvalidLengthSet(format!("empty interval {lo}..{h}")));
            }
        }
        Ok(LengthSet::Interval { lo, hi })
    }

    /// The concrete lengths for `G`, intersected with `[1, max_len]` for the
    /// kinds that are not tied to the exponent.
    pub fn resolve(&self, spec: &GroupSpec, max_len: usize) -> BTreeSet<usize> {
        let exp = spec.exponent() as usize;
        match self {
            LengthSet::ExactExponent => [exp].into_iter().collect(),
            LengthSet::Short => (1..=exp).collect(),
            LengthSet::Any => (1..=max_len).collect(),
            LengthSet::Explicit(set) => set.iter().copied().filter(|&l| l <= max_len).collect(),
            LengthSet::Interval { lo, hi } => {
                let top = hi.map_or(max_len, |h| h.min(max_len));
                (*lo..=top).collect()
            }
        }
    }

    pub(crate) fn plan(&self, spec: &GroupSpec) -> LengthPlan {
        let exp = spec.exponent() as usize;
        let finite = |set: BTreeSet<usize>| {
            let lmax = set.iter().copied().max().unwrap_or(0);
            let mut accept = vec![false; lmax + 1];
            for l in set {
                accept[l] = true;
            }
            LengthPlan {
                lmax,
                saturating: false,
                accept,
            }
        };
        match self {
            LengthSet::ExactExponent => finite([exp].into_iter().collect()),
            LengthSet::Short => finite((1..=exp).collect()),
            LengthSet::Explicit(set) => finite(set.clone()),
            LengthSet::Interval { lo, hi: Some(h) } => finite((*lo..=*h).collect()),
            LengthSet::Any => LengthPlan {
                lmax: 1,
                saturating: true,
                accept: vec![false, true],
            },
            LengthSet::Interval { lo, hi: None } => {
                let mut accept = vec![false; lo + 1];
                accept[*lo] = true;
                LengthPlan {
                    lmax: *lo,
                    saturating: true,
                    accept,
                }
            }
        }
    }

    /// Whether translating a sequence preserves having an `L`-zero-sum:
    /// `Σ_k(h+S) = k·h + Σ_k(S)`, so every length must kill the group.
    pub fn permits_translation(&self, spec: &GroupSpec) -> bool {
        let exp = spec.exponent() as usize;
        match self {
            LengthSet::ExactExponent => true,
            LengthSet::Short => exp == 1,
            LengthSet::Any | LengthSet::Interval { hi: None, .. } => false,
            LengthSet::Explicit(set) => set.iter().all(|l| l % exp == 0),
            LengthSet::Interval { lo, hi: Some(h) } => (*lo..=*h).all(|l| l % exp == 0),
        }
    }
}

impl fmt::Display for LengthSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LengthSet::ExactExponent => write!(f, "exp"),
            LengthSet::Short => write!(f, "short"),
            LengthSet::Any => write!(f, "any"),
            LengthSet::Explicit(set) => {
                let parts: Vec<String> = set.iter().map(|l| l.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
            LengthSet::Interval { lo, hi: Some(h) } => write!(f, "{lo}..{h}"),
            LengthSet::Interval { lo, hi: None } => write!(f, "{lo}.."),
        }
    }
}

impl FromStr for LengthSet {
    type Err = Error;

    /// `short`, `exp`, `any`, `a..b`, `a..`, a comma-separated list, or an
    /// interval in brackets such as `[1,3]`, `[1,exp]` or `[2,∞)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Error::InvalidLengthSet(format!("{t:?}: {e}")))
        };
        match s {
            "short" => Ok(LengthSet::Short),
            "exp" | "exact" => Ok(LengthSet::ExactExponent),
            "any" => Ok(LengthSet::Any),
            _ if s.starts_with('[') => {
                let bad = || Error::InvalidLengthSet(format!("{s:?}"));
                let (body, open) = match (s.strip_suffix(']'), s.strip_suffix(')')) {
                    (Some(b), _) => (&b[1..], false),
                    (None, Some(b)) => (&b[1..], true),
                    _ => return Err(bad()),
                };
                let (a, b) = body.split_once(',').ok_or_else(bad)?;
                let lo = num(a)?;
                match (b.trim(), open) {
                    ("exp", false) if lo == 1 => Ok(LengthSet::Short),
                    ("∞" | "inf", true) if lo == 1 => Ok(LengthSet::Any),
                    ("∞" | "inf", true) => LengthSet::interval(lo, None),
                    (hi, false) => LengthSet::interval(lo, Some(num(hi)?)),
                    (hi, true) => {
                        let hi = num(hi)?.checked_sub(1).ok_or_else(bad)?;
                        LengthSet::interval(lo, Some(hi))
                    }
                }
            }
            _ => {
                if let Some((a, b)) = s.split_once("..") {
                    let lo = num(a)?;
                    let hi = if b.trim().is_empty() {
                        None
                    } else {
                        Some(num(b)?)
                    };
                    LengthSet::interval(lo, hi)
                } else {
                    LengthSet::explicit(s.split(',').map(num).collect::<Result<Vec<_>>>()?)
                }
            }
        }
    }
}

impl Serialize for LengthSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LengthSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
