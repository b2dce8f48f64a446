//! The parametric families of extremal sequences over `C_2 ⊕ C_2 ⊕ C_{2n}`
//! and over cyclic groups: generators, classification, and the derived
//! height, decomposition and filter checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Basis, Group, GroupElement, GroupSpec};
use crate::search::{EquivalenceMode, Symmetry};
use crate::sequence::{LengthSet, Sequence};
use crate::sums::{has_zero_sum, sigma_l};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyLabel {
    D1,
    D2,
    D3,
    D4,
    D5,
    D6,
    #[serde(rename = "eta1")]
    Eta1,
    #[serde(rename = "eta2")]
    Eta2,
    #[serde(rename = "eta3")]
    Eta3,
    #[serde(rename = "s1")]
    S1,
    #[serde(rename = "s2")]
    S2,
    #[serde(rename = "s3")]
    S3,
    #[serde(rename = "cyc-eta-1")]
    CycEta1,
    #[serde(rename = "cyc-eta-2a")]
    CycEta2a,
    #[serde(rename = "cyc-eta-2b")]
    CycEta2b,
    #[serde(rename = "cyc-s-1")]
    CycS1,
    #[serde(rename = "cyc-s-2a")]
    CycS2a,
    #[serde(rename = "cyc-s-2b")]
    CycS2b,
    /// All nonzero elements of `C_2^3`.
    #[serde(rename = "eta-n1")]
    EtaN1,
    /// All elements of `C_2^3`.
    #[serde(rename = "s-n1")]
    SN1,
}

use FamilyLabel::*;

impl FamilyLabel {
    pub const ALL: [FamilyLabel; 20] = [
        D1, D2, D3, D4, D5, D6, Eta1, Eta2, Eta3, S1, S2, S3, CycEta1, CycEta2a, CycEta2b, CycS1,
        CycS2a, CycS2b, EtaN1, SN1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            D1 => "D1",
            D2 => "D2",
            D3 => "D3",
            D4 => "D4",
            D5 => "D5",
            D6 => "D6",
            Eta1 => "eta1",
            Eta2 => "eta2",
            Eta3 => "eta3",
            S1 => "s1",
            S2 => "s2",
            S3 => "s3",
            CycEta1 => "cyc-eta-1",
            CycEta2a => "cyc-eta-2a",
            CycEta2b => "cyc-eta-2b",
            CycS1 => "cyc-s-1",
            CycS2a => "cyc-s-2a",
            CycS2b => "cyc-s-2b",
            EtaN1 => "eta-n1",
            SN1 => "s-n1",
        }
    }

    pub fn problem(self) -> Problem {
        match self {
            D1 | D2 | D3 | D4 | D5 | D6 => Problem::DavenportMax,
            Eta1 | Eta2 | Eta3 | EtaN1 => Problem::EtaExtremal,
            S1 | S2 | S3 | SN1 => Problem::SExtremal,
            CycEta1 | CycEta2a | CycEta2b => Problem::CyclicEta,
            CycS1 | CycS2a | CycS2b => Problem::CyclicS,
        }
    }

    fn is_cyclic(self) -> bool {
        matches!(self.problem(), Problem::CyclicEta | Problem::CyclicS)
    }
}

impl fmt::Display for FamilyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.replace('η', "eta");
        FamilyLabel::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown family label {s:?}")))
    }
}

/// The extremal problems whose solutions the families describe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    /// Minimal zero-sum sequences of length `D(G)`.
    DavenportMax,
    /// Length `η(G) − 1` without short zero-sum.
    EtaExtremal,
    /// Length `s(G) − 1` without zero-sum of length `exp(G)`.
    SExtremal,
    /// Cyclic, lengths `n − 1` and `n − 2`, zero-sum free.
    CyclicEta,
    /// Cyclic, lengths `2n − 2` and `2n − 3`, no zero-sum of length `n`.
    CyclicS,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::DavenportMax => "davenport-max",
            Problem::EtaExtremal => "eta-extremal",
            Problem::SExtremal => "s-extremal",
            Problem::CyclicEta => "cyclic-eta",
            Problem::CyclicS => "cyclic-s",
        }
    }

    /// The symmetry that preserves the problem.
    pub fn mode(self) -> EquivalenceMode {
        match self {
            Problem::SExtremal | Problem::CyclicS => EquivalenceMode::AutomorphismAndTranslation,
            _ => EquivalenceMode::Automorphism,
        }
    }

    /// The length set of the forbidden zero-sums.
    pub fn lengths(self) -> LengthSet {
        match self {
            Problem::DavenportMax | Problem::CyclicEta => LengthSet::Any,
            Problem::EtaExtremal => LengthSet::Short,
            Problem::SExtremal | Problem::CyclicS => LengthSet::ExactExponent,
        }
    }

    fn is_cyclic(self) -> bool {
        matches!(self, Problem::CyclicEta | Problem::CyclicS)
    }

    /// The family labels of the problem for the given parameter.
    pub fn labels(self, n: u64) -> Vec<FamilyLabel> {
        match self {
            Problem::DavenportMax => vec![D1, D2, D3, D4, D5, D6],
            Problem::EtaExtremal if n == 1 => vec![EtaN1],
            Problem::EtaExtremal => vec![Eta1, Eta2, Eta3],
            Problem::SExtremal if n == 1 => vec![SN1],
            Problem::SExtremal => vec![S1, S2, S3],
            Problem::CyclicEta => vec![CycEta1, CycEta2a, CycEta2b],
            Problem::CyclicS => vec![CycS1, CycS2a, CycS2b],
        }
    }

    /// Lengths of the sequences the problem classifies.
    pub fn required_lengths(self, n: u64) -> Vec<usize> {
        let n = n as usize;
        match self {
            Problem::DavenportMax => vec![2 * n + 2],
            Problem::EtaExtremal if n == 1 => vec![7],
            Problem::EtaExtremal => vec![2 * n + 3],
            Problem::SExtremal if n == 1 => vec![8],
            Problem::SExtremal => vec![4 * n + 2],
            Problem::CyclicEta => vec![n - 1, n - 2],
            Problem::CyclicS => vec![2 * n - 2, 2 * n - 3],
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Problem::DavenportMax,
            Problem::EtaExtremal,
            Problem::SExtremal,
            Problem::CyclicEta,
            Problem::CyclicS,
        ]
        .into_iter()
        .find(|p| p.name() == s)
        .ok_or_else(|| Error::Parse(format!("unknown problem {s:?}")))
    }
}

/// A family parameter: an integer, an element, or a sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Int(i64),
    Element(GroupElement),
    Elements(Vec<GroupElement>),
}

/// A classification certificate: `S − f` is the printed family sequence for
/// `label` and `params` in the basis `[f1, f2, f3]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyWitness {
    pub label: FamilyLabel,
    pub basis: Vec<GroupElement>,
    pub params: BTreeMap<String, Param>,
    pub translation: Option<GroupElement>,
}

impl FamilyWitness {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    fn int(&self, name: &str) -> Result<i64> {
        match self.params.get(name) {
            Some(Param::Int(v)) => Ok(*v),
            _ => Err(self.invalid(format!("missing integer parameter {name}"))),
        }
    }

    fn element(&self, name: &str) -> Result<&GroupElement> {
        match self.params.get(name) {
            Some(Param::Element(g)) => Ok(g),
            _ => Err(self.invalid(format!("missing element parameter {name}"))),
        }
    }

    fn elements(&self, name: &str) -> Result<&[GroupElement]> {
        match self.params.get(name) {
            Some(Param::Elements(g)) => Ok(g),
            _ => Err(self.invalid(format!("missing element list {name}"))),
        }
    }

    fn invalid(&self, reason: impl Into<String>) -> Error {
        Error::InvalidParams {
            label: self.label.name().into(),
            reason: reason.into(),
        }
    }
}

fn params<const K: usize>(ints: [(&str, i64); K]) -> BTreeMap<String, Param> {
    ints.into_iter()
        .map(|(k, v)| (k.to_string(), Param::Int(v)))
        .collect()
}

/// The standard generators of `C_2 ⊕ C_2 ⊕ C_{2n}` in the order
/// `[f1, f2, f3]` with `f3` of order `2n`, and `n`.
pub fn reference_basis(spec: &GroupSpec) -> Result<(Vec<GroupElement>, u64)> {
    let n = spec
        .c2c2c2n_parameter()
        .ok_or_else(|| Error::UnsupportedShape(format!("{spec} is not of the form C2+C2+C2n")))?;
    let orders = spec.orders();
    let big = if n == 1 {
        2
    } else {
        orders
            .iter()
            .position(|&o| o == 2 * n)
            .expect("shape checked")
    };
    let mut idx: Vec<usize> = (0..3).filter(|&i| i != big).collect();
    idx.push(big);
    Ok((
        idx.into_iter()
            .map(|i| spec.standard_generator(i))
            .collect(),
        n,
    ))
}

fn cyclic_order(spec: &GroupSpec) -> Result<u64> {
    if !spec.is_cyclic() || spec.cardinality() < 3 {
        return Err(Error::UnsupportedShape(format!(
            "{spec} is not a cyclic group of order at least 3"
        )));
    }
    Ok(spec.cardinality())
}

/// Coefficients `(c1, c2, c3)` of `c1 f1 + c2 f2 + c3 f3` with multiplicities.
type Layout = Vec<([i64; 3], usize)>;

fn d_coefficients(
    w: &FamilyWitness,
    spec: &GroupSpec,
    basis: &[GroupElement],
) -> Result<Vec<[i64; 2]>> {
    let span: Vec<([i64; 2], GroupElement)> = [[0, 0], [1, 0], [0, 1], [1, 1]]
        .into_iter()
        .map(|c| {
            let mut e = spec.scale(&basis[0], c[0]).expect("valid");
            e = spec.combine(&e, &basis[1], c[1]).expect("valid");
            (c, e)
        })
        .collect();
    w.elements("d")?
        .iter()
        .map(|d| {
            span.iter()
                .find(|(_, e)| e == d)
                .map(|(c, _)| *c)
                .ok_or_else(|| {
                    w.invalid(format!("{d} is not in the subgroup generated by f1 and f2"))
                })
        })
        .collect()
}

fn in_range(w: &FamilyWitness, name: &str, v: i64, lo: i64, hi: i64) -> Result<()> {
    if v < lo || v > hi {
        return Err(w.invalid(format!("{name} = {v} is outside [{lo}, {hi}]")));
    }
    Ok(())
}

fn require(w: &FamilyWitness, ok: bool, reason: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(w.invalid(reason))
    }
}

fn d_sum(ds: &[[i64; 2]]) -> [i64; 2] {
    let s = ds
        .iter()
        .fold([0, 0], |acc, d| [acc[0] + d[0], acc[1] + d[1]]);
    [s[0] % 2, s[1] % 2]
}

fn layout(w: &FamilyWitness, n: i64, ds: &[[i64; 2]]) -> Result<Layout> {
    let odd = |v: i64| v > 0 && v % 2 == 1;
    let f3 = |c: i64| [0, 0, c];
    let m = |v: i64| v as usize;
    Ok(match w.label {
        D1 => {
            let (v1, v2, v3) = (w.int("v1")?, w.int("v2")?, w.int("v3")?);
            require(w, odd(v1) && odd(v2) && odd(v3), "v1, v2, v3 must be odd")?;
            require(w, v3 >= v2 && v2 >= v1, "need v3 >= v2 >= v1")?;
            require(w, v1 + v2 + v3 == 2 * n + 1, "need v1 + v2 + v3 = 2n + 1")?;
            vec![
                (f3(1), m(v3)),
                ([0, 1, 1], m(v2)),
                ([1, 0, 1], m(v1)),
                ([1, 1, -1], 1),
            ]
        }
        D2 => {
            let (v2, v3, a) = (w.int("v2")?, w.int("v3")?, w.int("a")?);
            require(w, odd(v2) && odd(v3), "v2, v3 must be odd")?;
            require(
                w,
                v3 >= v2 && v2 + v3 == 2 * n,
                "need v3 >= v2 and v2 + v3 = 2n",
            )?;
            in_range(w, "a", a, 2, n - 1)?;
            vec![
                (f3(1), m(v3)),
                ([0, 1, 1], m(v2)),
                ([1, 0, a], 1),
                ([1, 1, -a], 1),
            ]
        }
        D3 => {
            let (a, b, c) = (w.int("a")?, w.int("b")?, w.int("c")?);
            require(w, a + b + c == 2 * n + 1, "need a + b + c = 2n + 1")?;
            require(w, a <= b && b <= c, "need a <= b <= c")?;
            in_range(w, "a", a, 2, n - 1)?;
            in_range(w, "b", b, 2, n - 1)?;
            in_range(w, "c", c, 2, 2 * n - 3)?;
            require(w, c != n && c != n + 1, "c must avoid n and n + 1")?;
            vec![
                (f3(1), m(2 * n - 1)),
                ([0, 1, a], 1),
                ([1, 0, b], 1),
                ([1, 1, c], 1),
            ]
        }
        D4 | Eta1 => {
            let (v, a) = (w.int("v")?, w.int("a")?);
            in_range(w, "v", v, 0, n - 1)?;
            in_range(w, "a", a, 2, n - 1)?;
            let (low, high) = if w.label == D4 {
                (2 * n - 1 - 2 * v, 2 * v)
            } else {
                (2 * n - 1 - 2 * v, 2 * v + 1)
            };
            vec![
                (f3(1), m(low)),
                ([0, 1, 1], m(high)),
                ([0, 1, 0], 1),
                ([1, 0, a], 1),
                ([1, 1, 1 - a], 1),
            ]
        }
        D5 | Eta2 | S2 => {
            let (a, b) = (w.int("a")?, w.int("b")?);
            in_range(w, "a", a, 2, n - 1)?;
            in_range(w, "b", b, 2, n - 1)?;
            require(w, a >= b, "need a >= b")?;
            let mut l = vec![
                (f3(1), m(if w.label == D5 { 2 * n - 2 } else { 2 * n - 1 })),
                ([0, 1, a], 1),
                ([0, 1, 1 - a], 1),
                ([1, 0, b], 1),
                ([1, 0, 1 - b], 1),
            ];
            if w.label == S2 {
                l.push(([0, 0, 0], m(2 * n - 1)));
            }
            l
        }
        D6 | Eta3 => {
            let want = if w.label == D6 { 2 * n } else { 2 * n + 1 };
            require(w, ds.len() as i64 == want, "wrong number of d terms")?;
            let sigma = d_sum(ds);
            if w.label == D6 {
                require(w, sigma == [1, 1], "the d terms must sum to f1 + f2")?;
            } else {
                require(
                    w,
                    !ds.contains(&sigma),
                    "the sum of the d terms must not occur among them",
                )?;
            }
            let mut l: Layout = ds.iter().map(|d| ([d[0], d[1], 1], 1)).collect();
            l.push(([0, 1, 0], 1));
            l.push(([1, 0, 0], 1));
            l
        }
        S1 => {
            let (alpha, beta, a) = (w.int("alpha")?, w.int("beta")?, w.int("a")?);
            in_range(w, "alpha", alpha, 0, n - 1)?;
            in_range(w, "beta", beta, 0, n - 1)?;
            in_range(w, "a", a, 2, n - 1)?;
            vec![
                ([0, 0, 0], m(2 * alpha + 1)),
                ([0, 1, 0], m(2 * n - 2 * alpha - 1)),
                (f3(1), m(2 * n - 1 - 2 * beta)),
                ([0, 1, 1], m(2 * beta + 1)),
                ([1, 0, a], 1),
                ([1, 1, 1 - a], 1),
            ]
        }
        S3 => {
            let (alpha, beta, gamma) = (w.int("alpha")?, w.int("beta")?, w.int("gamma")?);
            for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
                in_range(w, name, v, 0, n - 1)?;
            }
            require(
                w,
                alpha + beta + gamma == n - 1,
                "need alpha + beta + gamma = n - 1",
            )?;
            require(w, ds.len() as i64 == 2 * n + 1, "wrong number of d terms")?;
            require(
                w,
                !ds.contains(&d_sum(ds)),
                "the sum of the d terms must not occur among them",
            )?;
            let mut l: Layout = vec![
                ([0, 0, 0], m(2 * alpha + 1)),
                ([1, 0, 0], m(2 * beta + 1)),
                ([0, 1, 0], m(2 * gamma + 1)),
            ];
            l.extend(ds.iter().map(|d| ([d[0], d[1], 1], 1)));
            l
        }
        EtaN1 | SN1 => {
            let mut l = Layout::new();
            for c in 0..8i64 {
                if c != 0 || w.label == SN1 {
                    l.push(([c & 1, c >> 1 & 1, c >> 2], 1));
                }
            }
            l
        }
        CycEta1 | CycEta2a | CycEta2b | CycS1 | CycS2a | CycS2b => {
            unreachable!("cyclic labels have no layout")
        }
    })
}

fn generate_cyclic(w: &FamilyWitness, spec: &GroupSpec) -> Result<Sequence> {
    let n = cyclic_order(spec)?;
    let g = w.element("g")?.clone();
    spec.validate(&g)?;
    let k = n as usize;
    let seq = |terms: Vec<(GroupElement, usize)>| Sequence::from_counts(spec.clone(), terms);
    match w.label {
        CycEta1 | CycEta2a | CycEta2b => {
            require(w, spec.order_of(&g)? == n, "g must have order n")?;
            match w.label {
                CycEta1 => seq(vec![(g, k - 1)]),
                CycEta2a => seq(vec![(g, k - 2)]),
                _ => {
                    let g2 = spec.scale(&g, 2)?;
                    seq(vec![(g, k - 3), (g2, 1)])
                }
            }
        }
        _ => {
            let h = w.element("h")?.clone();
            spec.validate(&h)?;
            let diff = spec.combine(&g, &h, -1)?;
            require(w, spec.order_of(&diff)? == n, "g - h must have order n")?;
            match w.label {
                CycS1 => seq(vec![(g, k - 1), (h, k - 1)]),
                CycS2a => seq(vec![(g, k - 1), (h, k - 2)]),
                _ => {
                    let last = spec.combine(&spec.scale(&h, 2)?, &g, -1)?;
                    seq(vec![(g, k - 1), (h, k - 3), (last, 1)])
                }
            }
        }
    }
}

/// The printed sequence for the witness, translated by its translation.
pub fn generate(w: &FamilyWitness, spec: &GroupSpec) -> Result<Sequence> {
    if w.label.is_cyclic() {
        return generate_cyclic(w, spec);
    }
    let (_, n) = reference_basis(spec)?;
    match w.label {
        EtaN1 | SN1 if n != 1 => return Err(w.invalid("only defined for C2^3")),
        Eta1 | Eta2 | Eta3 | S1 | S2 | S3 if n < 2 => return Err(w.invalid("needs n >= 2")),
        _ => {}
    }
    if w.basis.len() != 3 {
        return Err(Error::BasisMismatch(format!(
            "expected 3 generators, got {}",
            w.basis.len()
        )));
    }
    let group = Group::new(spec.clone())?;
    let basis = Basis::new(&group, w.basis.clone(), vec![2, 2, 2 * n])?;
    let ds = if matches!(w.label, D6 | Eta3 | S3) {
        d_coefficients(w, spec, &w.basis)?
    } else {
        Vec::new()
    };
    let terms = layout(w, n as i64, &ds)?;
    let shift = match &w.translation {
        Some(f) => {
            spec.validate(f)?;
            f.clone()
        }
        None => spec.zero(),
    };
    let mut counts = Vec::with_capacity(terms.len());
    for (c, k) in terms {
        if k > 0 {
            let e = basis.combination(spec, &c)?;
            counts.push((spec.add(&e, &shift)?, k));
        }
    }
    Sequence::from_counts(spec.clone(), counts)
}

/// Multisets of size `k` over `⟨f1, f2⟩` as sorted coefficient lists.
fn d_lists(k: usize) -> Vec<Vec<[i64; 2]>> {
    let symbols = [[0, 0], [1, 0], [0, 1], [1, 1]];
    let mut out = Vec::new();
    for a in 0..=k {
        for b in 0..=k - a {
            for c in 0..=k - a - b {
                let d = k - a - b - c;
                let mut list = Vec::with_capacity(k);
                for (s, m) in symbols.iter().zip([a, b, c, d]) {
                    list.extend(std::iter::repeat_n(*s, m));
                }
                out.push(list);
            }
        }
    }
    out
}

/// Every legal witness of the label in the reference basis, without
/// translation.
pub fn standard_witnesses(spec: &GroupSpec, label: FamilyLabel) -> Result<Vec<FamilyWitness>> {
    if label.is_cyclic() {
        let n = cyclic_order(spec)?;
        let elements: Vec<GroupElement> = spec.elements().collect();
        let mut out = Vec::new();
        for g in &elements {
            if matches!(label, CycEta1 | CycEta2a | CycEta2b) {
                if spec.order_of(g)? == n {
                    out.push(FamilyWitness {
                        label,
                        basis: Vec::new(),
                        params: [("g".to_string(), Param::Element(g.clone()))]
                            .into_iter()
                            .collect(),
                        translation: None,
                    });
                }
                continue;
            }
            for h in &elements {
                if spec.order_of(&spec.combine(g, h, -1)?)? == n {
                    out.push(FamilyWitness {
                        label,
                        basis: Vec::new(),
                        params: [
                            ("g".to_string(), Param::Element(g.clone())),
                            ("h".to_string(), Param::Element(h.clone())),
                        ]
                        .into_iter()
                        .collect(),
                        translation: None,
                    });
                }
            }
        }
        return Ok(out);
    }
    let (basis, n) = reference_basis(spec)?;
    let ni = n as i64;
    let mut raw: Vec<BTreeMap<String, Param>> = Vec::new();
    let odd = |lo: i64, hi: i64| (lo..=hi).filter(|v| v % 2 == 1).collect::<Vec<_>>();
    let range = |lo: i64, hi: i64| (lo..=hi).collect::<Vec<_>>();
    let d_param = |ds: &[[i64; 2]]| {
        let mut els: Vec<GroupElement> = ds
            .iter()
            .map(|d| {
                let e = spec.scale(&basis[0], d[0]).expect("valid");
                spec.combine(&e, &basis[1], d[1]).expect("valid")
            })
            .collect();
        els.sort();
        Param::Elements(els)
    };
    match label {
        D1 => {
            for v1 in odd(1, 2 * ni + 1) {
                for v2 in odd(v1, 2 * ni + 1) {
                    let v3 = 2 * ni + 1 - v1 - v2;
                    if v3 >= v2 && v3 % 2 == 1 {
                        raw.push(params([("v1", v1), ("v2", v2), ("v3", v3)]));
                    }
                }
            }
        }
        D2 => {
            for v2 in odd(1, ni) {
                let v3 = 2 * ni - v2;
                if v3 >= v2 && v3 % 2 == 1 {
                    for a in range(2, ni - 1) {
                        raw.push(params([("v2", v2), ("v3", v3), ("a", a)]));
                    }
                }
            }
        }
        D3 => {
            for a in range(2, ni - 1) {
                for b in range(a, ni - 1) {
                    let c = 2 * ni + 1 - a - b;
                    if c >= b && (2..=2 * ni - 3).contains(&c) && c != ni && c != ni + 1 {
                        raw.push(params([("a", a), ("b", b), ("c", c)]));
                    }
                }
            }
        }
        D4 | Eta1 => {
            for v in range(0, ni - 1) {
                for a in range(2, ni - 1) {
                    raw.push(params([("v", v), ("a", a)]));
                }
            }
        }
        D5 | Eta2 | S2 => {
            for a in range(2, ni - 1) {
                for b in range(2, a) {
                    raw.push(params([("a", a), ("b", b)]));
                }
            }
        }
        D6 | Eta3 => {
            let k = if label == D6 { 2 * n } else { 2 * n + 1 } as usize;
            for ds in d_lists(k) {
                let sigma = d_sum(&ds);
                let ok = if label == D6 {
                    sigma == [1, 1]
                } else {
                    !ds.contains(&sigma)
                };
                if ok {
                    raw.push([("d".to_string(), d_param(&ds))].into_iter().collect());
                }
            }
        }
        S1 => {
            for alpha in range(0, ni - 1) {
                for beta in range(0, ni - 1) {
                    for a in range(2, ni - 1) {
                        raw.push(params([("alpha", alpha), ("beta", beta), ("a", a)]));
                    }
                }
            }
        }
        S3 => {
            for alpha in range(0, ni - 1) {
                for beta in range(0, ni - 1 - alpha) {
                    let gamma = ni - 1 - alpha - beta;
                    for ds in d_lists(2 * n as usize + 1) {
                        if !ds.contains(&d_sum(&ds)) {
                            let mut p =
                                params([("alpha", alpha), ("beta", beta), ("gamma", gamma)]);
                            p.insert("d".into(), d_param(&ds));
                            raw.push(p);
                        }
                    }
                }
            }
        }
        EtaN1 | SN1 => raw.push(BTreeMap::new()),
        _ => unreachable!("cyclic labels handled above"),
    }
    let applicable = match label {
        EtaN1 | SN1 => n == 1,
        Eta1 | Eta2 | Eta3 | S1 | S2 | S3 => n >= 2,
        _ => true,
    };
    if !applicable {
        return Ok(Vec::new());
    }
    Ok(raw
        .into_iter()
        .map(|params| FamilyWitness {
            label,
            basis: basis.clone(),
            params,
            translation: (label.problem() == Problem::SExtremal).then(|| spec.zero()),
        })
        .collect())
}

/// Canonical representatives of every member of the family.
pub fn enumerate_family(group: &Group, label: FamilyLabel) -> Result<Vec<Sequence>> {
    let sym = Symmetry::new(group, label.problem().mode())?;
    Ok(family_closure(group, &sym, &[label])?.into_iter().collect())
}

/// Canonical closure of the union of the families under `sym`.
pub fn family_closure(
    group: &Group,
    sym: &Symmetry,
    labels: &[FamilyLabel],
) -> Result<BTreeSet<Sequence>> {
    let mut out = BTreeSet::new();
    for &label in labels {
        for w in standard_witnesses(group.spec(), label)? {
            out.insert(sym.canonical_form(group, &generate(&w, group.spec())?)?);
        }
    }
    Ok(out)
}

struct AtlasEntry {
    witness: FamilyWitness,
    instance: Vec<u8>,
}

/// Family lookup for one group and problem; reuse it when classifying many
/// sequences.
pub struct Classifier {
    group: Group,
    problem: Problem,
    n: u64,
    sym: Symmetry,
    atlas: BTreeMap<Vec<u8>, Vec<AtlasEntry>>,
}

impl Classifier {
    pub fn new(group: &Group, problem: Problem) -> Result<Self> {
        let spec = group.spec();
        let n = if problem.is_cyclic() {
            cyclic_order(spec)?
        } else {
            reference_basis(spec)?.1
        };
        let sym = Symmetry::new(group, problem.mode())?;
        let mut atlas: BTreeMap<Vec<u8>, Vec<AtlasEntry>> = BTreeMap::new();
        for label in problem.labels(n) {
            for witness in standard_witnesses(spec, label)? {
                let instance = generate(&witness, spec)?.to_ranks(group)?;
                let key = if problem.is_cyclic() {
                    instance.clone()
                } else {
                    sym.canonical_ranks(&instance).0
                };
                atlas
                    .entry(key)
                    .or_default()
                    .push(AtlasEntry { witness, instance });
            }
        }
        Ok(Classifier {
            group: group.clone(),
            problem,
            n,
            sym,
            atlas,
        })
    }

    pub fn problem(&self) -> Problem {
        self.problem
    }

    pub fn symmetry(&self) -> &Symmetry {
        &self.sym
    }

    /// Every witness under which `S` is a family member. Sorted by label,
    /// basis, translation and parameters.
    pub fn classify(&self, s: &Sequence) -> Result<Vec<FamilyWitness>> {
        let spec = self.group.spec();
        let lengths = self.problem.required_lengths(self.n);
        if !lengths.contains(&s.len()) {
            let expected = lengths
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(" or ");
            return Err(Error::WrongLength {
                expected,
                found: s.len(),
            });
        }
        let ranks = s.to_ranks(&self.group)?;
        let mut out = Vec::new();
        if self.problem.is_cyclic() {
            if let Some(entries) = self.atlas.get(&ranks) {
                out.extend(entries.iter().map(|e| e.witness.clone()));
            }
            out.sort();
            return Ok(out);
        }
        let key = self.sym.canonical_ranks(&ranks).0;
        let Some(entries) = self.atlas.get(&key) else {
            return Ok(out);
        };
        let translating = self.problem.mode() == EquivalenceMode::AutomorphismAndTranslation;
        for entry in entries {
            for i in 0..self.sym.len() {
                if self.sym.image(i, &entry.instance) != ranks {
                    continue;
                }
                let (phi, t) = self.sym.source(i);
                let map = |x: &GroupElement| phi.apply(&self.group, x).expect("valid");
                let mut params = entry.witness.params.clone();
                for p in params.values_mut() {
                    if let Param::Elements(list) = p {
                        let mut mapped: Vec<GroupElement> = list.iter().map(map).collect();
                        mapped.sort();
                        *list = mapped;
                    }
                }
                out.push(FamilyWitness {
                    label: entry.witness.label,
                    basis: entry.witness.basis.iter().map(map).collect(),
                    params,
                    translation: translating.then(|| map(self.group.element(t))),
                });
            }
        }
        out.sort();
        out.dedup();
        debug_assert!(out.iter().all(|w| generate(w, spec).as_ref() == Ok(s)));
        Ok(out)
    }
}

/// One-off classification; builds a [`Classifier`].
pub fn classify(group: &Group, s: &Sequence, problem: Problem) -> Result<Vec<FamilyWitness>> {
    Classifier::new(group, problem)?.classify(s)
}

/// `−f + S = C·T` with `C = 0^{2u+1} f1^{2v} f2^{2w}` of length `exp(G) − 1`
/// and `T` free of short zero-sums.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub f: GroupElement,
    pub f1: GroupElement,
    pub f2: GroupElement,
    pub c: Sequence,
    pub t: Sequence,
    pub u: usize,
    pub v: usize,
    pub w: usize,
}

/// Searches `f` over `G` in lexicographic order, then pairs of order-2
/// elements, then `u` descending. `S` must be `s`-extremal over
/// `C_2 ⊕ C_2 ⊕ C_{2n}` with `n ≥ 2`.
pub fn decompose_ct(group: &Group, s: &Sequence) -> Result<Option<Decomposition>> {
    let spec = group.spec();
    let (_, n) = reference_basis(spec)?;
    if n < 2 {
        return Err(Error::Precondition("needs n >= 2".into()));
    }
    let n = n as usize;
    if s.len() != 4 * n + 2 || has_zero_sum(group, s, &LengthSet::ExactExponent)? {
        return Err(Error::Precondition(format!(
            "expected a sequence of length {} without zero-sum of length {}",
            4 * n + 2,
            2 * n
        )));
    }
    let involutions: Vec<GroupElement> = spec
        .elements()
        .filter(|e| spec.order_of(e).expect("valid") == 2)
        .collect();
    let mut pairs = Vec::new();
    for (i, a) in involutions.iter().enumerate() {
        for b in &involutions[i + 1..] {
            pairs.push((a.clone(), b.clone()));
        }
    }
    for f in spec.elements() {
        let shifted = s.translate(&spec.neg(&f)?)?;
        if shifted.multiplicity(&spec.zero()) == 0 {
            continue;
        }
        for (f1, f2) in &pairs {
            for u in (0..n).rev() {
                for v in (0..n - u).rev() {
                    let w = n - 1 - u - v;
                    let c = Sequence::from_counts(
                        spec.clone(),
                        [
                            (spec.zero(), 2 * u + 1),
                            (f1.clone(), 2 * v),
                            (f2.clone(), 2 * w),
                        ],
                    )?;
                    if !c.divides(&shifted) {
                        continue;
                    }
                    let t = shifted.divide(&c)?;
                    if !has_zero_sum(group, &t, &LengthSet::Short)? {
                        return Ok(Some(Decomposition {
                            f,
                            f1: f1.clone(),
                            f2: f2.clone(),
                            c,
                            t,
                            u,
                            v,
                            w,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterCheck {
    pub hypotheses_hold: bool,
    pub conclusion_holds: bool,
}

/// For `|S| = η(G) + exp(G) − 1` and `C' | S` with `j·f ∈ Σ_j(C')` for every
/// `j ≤ |C'|` and `|C'| ≥ ⌊(exp(G) − 1)/2⌋`, `S` must have a zero-sum
/// subsequence of length `exp(G)`.
pub fn check_filter_lemma(
    group: &Group,
    eta: usize,
    s: &Sequence,
    c_prime: &Sequence,
    f: &GroupElement,
) -> Result<FilterCheck> {
    let spec = group.spec();
    if !c_prime.divides(s) {
        return Err(Error::NotADivisor);
    }
    spec.validate(f)?;
    let exp = spec.exponent() as usize;
    let mut hypotheses = s.len() + 1 == eta + exp && c_prime.len() >= (exp - 1) / 2;
    let mut j = 1;
    while hypotheses && j <= c_prime.len() {
        let jf = spec.scale(f, j as i64)?;
        hypotheses = sigma_l(group, c_prime, &LengthSet::explicit([j])?)?.contains(&jf);
        j += 1;
    }
    Ok(FilterCheck {
        hypotheses_hold: hypotheses,
        conclusion_holds: has_zero_sum(group, s, &LengthSet::ExactExponent)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightProfile {
    pub min_height: usize,
    pub attaining: Sequence,
}

pub fn height_profile<I: IntoIterator<Item = Sequence>>(stream: I) -> Result<HeightProfile> {
    stream
        .into_iter()
        .map(|s| (s.height(), s))
        .min_by_key(|(h, _)| *h)
        .map(|(min_height, attaining)| HeightProfile {
            min_height,
            attaining,
        })
        .ok_or(Error::EmptyStream)
}

/// The least height of an `s`-extremal sequence over `C_2 ⊕ C_2 ⊕ C_{2n}`.
pub fn height_bound(n: u64) -> u64 {
    match n % 3 {
        0 => (2 * n + 3) / 3,
        1 => (2 * n + 1) / 3,
        _ => (2 * n + 5) / 3,
    }
}

/// `(α, β, γ)` of the low-height extremal sequence.
pub fn height_parameters(n: u64) -> (u64, u64, u64) {
    match n % 3 {
        0 => (n / 3, n / 3, (n - 3) / 3),
        1 => ((n - 1) / 3, (n - 1) / 3, (n - 1) / 3),
        _ => ((n + 1) / 3, (n - 2) / 3, (n - 2) / 3),
    }
}

/// `0^{2α+1} f1^{2β+1} f2^{2γ+1} (f3+f1)^{2α+1} (f3+f2)^{2β+1} (f3+f1+f2)^{2γ+1}`
/// in the reference basis; its height meets [`height_bound`].
pub fn height_witness(spec: &GroupSpec) -> Result<Sequence> {
    let (basis, n) = reference_basis(spec)?;
    if n < 2 {
        return Err(Error::Precondition("needs n >= 2".into()));
    }
    let (a, b, c) = height_parameters(n);
    let (a, b, c) = (2 * a as usize + 1, 2 * b as usize + 1, 2 * c as usize + 1);
    let coeffs = Basis::new_unchecked(basis, vec![2, 2, 2 * n]);
    let e = |c: [i64; 3]| coeffs.combination(spec, &c).expect("valid");
    Sequence::from_counts(
        spec.clone(),
        [
            (e([0, 0, 0]), a),
            (e([1, 0, 0]), b),
            (e([0, 1, 0]), c),
            (e([1, 0, 1]), a),
            (e([0, 1, 1]), b),
            (e([1, 1, 1]), c),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(o: &[u64]) -> Group {
        Group::new(GroupSpec::new(o.to_vec()).unwrap()).unwrap()
    }

    fn witness(label: FamilyLabel, spec: &GroupSpec, ints: &[(&str, i64)]) -> FamilyWitness {
        FamilyWitness {
            label,
            basis: reference_basis(spec).unwrap().0,
            params: ints
                .iter()
                .map(|(k, v)| (k.to_string(), Param::Int(*v)))
                .collect(),
            translation: None,
        }
    }

    #[test]
    fn label_names_round_trip() {
        for l in FamilyLabel::ALL {
            assert_eq!(l.name().parse::<FamilyLabel>().unwrap(), l);
            assert_eq!(
                serde_json::to_string(&l).unwrap(),
                format!("\"{}\"", l.name())
            );
        }
        assert_eq!("η1".parse::<FamilyLabel>().unwrap(), Eta1);
    }

    #[test]
    fn d1_instance_is_minimal() {
        let g = group(&[2, 2, 4]);
        let w = witness(D1, g.spec(), &[("v1", 1), ("v2", 1), ("v3", 3)]);
        let s = generate(&w, g.spec()).unwrap();
        assert_eq!(s.len(), 6);
        assert!(crate::sums::is_minimal_zero_sum(&g, &s).unwrap());
    }

    #[test]
    fn eta2_instance_matches_printed_form() {
        let g = group(&[2, 2, 6]);
        let spec = g.spec();
        let s = generate(&witness(Eta2, spec, &[("a", 2), ("b", 2)]), spec).unwrap();
        let el = |r: &[u64]| spec.element(r).unwrap();
        let expected = Sequence::from_counts(
            spec.clone(),
            [
                (el(&[0, 0, 1]), 5),
                (el(&[0, 1, 2]), 1),
                (el(&[0, 1, 5]), 1),
                (el(&[1, 0, 2]), 1),
                (el(&[1, 0, 5]), 1),
            ],
        )
        .unwrap();
        assert_eq!(s, expected);
        assert!(!has_zero_sum(&g, &s, &LengthSet::Short).unwrap());
    }

    #[test]
    fn parameter_ranges_are_enforced() {
        let spec = GroupSpec::c2c2c2n(3);
        let bad = [
            witness(Eta1, &spec, &[("v", 3), ("a", 2)]),
            witness(Eta2, &spec, &[("a", 2), ("b", 3)]),
            witness(D1, &spec, &[("v1", 1), ("v2", 1), ("v3", 3)]),
            witness(D3, &spec, &[("a", 2), ("b", 2), ("c", 3)]),
        ];
        for w in bad {
            assert!(
                matches!(generate(&w, &spec), Err(Error::InvalidParams { .. })),
                "{w:?}"
            );
        }
        let mut wrong_basis = witness(Eta2, &spec, &[("a", 2), ("b", 2)]);
        wrong_basis.basis.swap(0, 2);
        assert!(matches!(
            generate(&wrong_basis, &spec),
            Err(Error::BasisMismatch(_))
        ));
    }

    #[test]
    fn degenerate_ranges_are_empty() {
        for n in 1..=2 {
            let g = group(&[2, 2, 2 * n]);
            for l in [Eta1, Eta2, D2, D3, D4, D5, S1, S2] {
                assert!(enumerate_family(&g, l).unwrap().is_empty(), "{l} at n={n}");
            }
        }
        let g = group(&[2, 2, 6]);
        assert!(!enumerate_family(&g, Eta2).unwrap().is_empty());
    }

    #[test]
    fn witness_json_shape() {
        let spec = GroupSpec::c2c2c2n(3);
        let w = witness(Eta1, &spec, &[("v", 0), ("a", 2)]);
        let text = w.to_json();
        assert_eq!(
            text,
            r#"{"label":"eta1","basis":[[1,0,0],[0,1,0],[0,0,1]],"params":{"a":2,"v":0},"translation":null}"#
        );
        assert_eq!(FamilyWitness::from_json(&text).unwrap(), w);
    }

    #[test]
    fn classify_recovers_generated_instances() {
        let g = group(&[2, 2, 6]);
        let c = Classifier::new(&g, Problem::SExtremal).unwrap();
        let mut w = witness(S2, g.spec(), &[("a", 2), ("b", 2)]);
        w.translation = Some(g.spec().element(&[1, 1, 3]).unwrap());
        let s = generate(&w, g.spec()).unwrap();
        let found = c.classify(&s).unwrap();
        assert!(found.contains(&w));
        for x in &found {
            assert_eq!(generate(x, g.spec()).unwrap(), s);
        }
    }

    #[test]
    fn classify_rejects_wrong_length() {
        let g = group(&[2, 2, 4]);
        let s = Sequence::power(g.spec().clone(), g.spec().zero(), 3).unwrap();
        assert!(matches!(
            classify(&g, &s, Problem::EtaExtremal),
            Err(Error::WrongLength { .. })
        ));
    }

    #[test]
    fn cyclic_eta_classification() {
        let g = group(&[5]);
        let one = g.spec().element(&[1]).unwrap();
        let s = Sequence::power(g.spec().clone(), one.clone(), 4).unwrap();
        let found = classify(&g, &s, Problem::CyclicEta).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].label, CycEta1);
        assert_eq!(found[0].params["g"], Param::Element(one));
    }

    #[test]
    fn height_witness_values() {
        for n in 2..=6u64 {
            let spec = GroupSpec::c2c2c2n(n);
            let s = height_witness(&spec).unwrap();
            assert_eq!(s.len() as u64, 4 * n + 2);
            assert_eq!(s.height() as u64, height_bound(n));
        }
        assert_eq!(
            height_profile(Vec::<Sequence>::new()),
            Err(Error::EmptyStream)
        );
    }

    #[test]
    fn s2_decomposes_with_zero_block() {
        let g = group(&[2, 2, 6]);
        let s = generate(&witness(S2, g.spec(), &[("a", 2), ("b", 2)]), g.spec()).unwrap();
        let d = decompose_ct(&g, &s).unwrap().unwrap();
        assert_eq!((d.u, d.v, d.w), (2, 0, 0));
        assert_eq!(
            d.c,
            Sequence::power(g.spec().clone(), g.spec().zero(), 5).unwrap()
        );
        assert!(d.f.is_zero());
    }

    #[test]
    fn decomposition_needs_an_extremal_input() {
        let g = group(&[2, 2, 4]);
        let s = Sequence::power(g.spec().clone(), g.spec().zero(), 10).unwrap();
        assert!(matches!(decompose_ct(&g, &s), Err(Error::Precondition(_))));
    }
}
