//! Sparse Laurent monomials in the variables `Y_{i,q^a}` and their
//! factorization through the A-monomials.
//!
//! Spectral parameters live on the lattice `q^ℤ`; a site `(i, a)` stands for
//! the variable `Y_{i,q^a}` (or, for dimension vectors, the factor
//! `A_{i,q^a}^{-1}`).
//!
//! The Y-content of `A_{i,a}^{-1}` is `Y_{i,a+d_i}^{-1} Y_{i,a-d_i}^{-1}`
//! times, for every `j != i`, the `-c_ji` variables `Y_{j,a+s}` with `s`
//! running over `c_ji+1, c_ji+3, …, -c_ji-1`. Under the classical restriction
//! this maps to `-α_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cartan::CartanDatum;
use crate::error::{Error, Result};

/// A vertex `(i, a)` of `I × ℤ`. `node` is zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    pub node: usize,
    pub param: i32,
}

impl Site {
    pub fn new(node: usize, param: i32) -> Self {
        Site { node, param }
    }

    pub fn shifted(self, by: i32) -> Self {
        Site::new(self.node, self.param + by)
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.node + 1, self.param)
    }
}

/// Finitely supported integer vector over `I × ℤ`. Zero entries are never
/// stored, so equality is structural.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(BTreeMap<Site, i32>);

impl LatticeVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(site: Site) -> Self {
        Self::from_entries([(site, 1)])
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (Site, i32)>) -> Self {
        let mut v = Self::new();
        for (site, x) in entries {
            v.add_at(site, x);
        }
        v
    }

    pub fn get(&self, site: Site) -> i32 {
        self.0.get(&site).copied().unwrap_or(0)
    }

    pub fn add_at(&mut self, site: Site, x: i32) {
        if x == 0 {
            return;
        }
        let entry = self.0.entry(site).or_insert(0);
        *entry += x;
        if *entry == 0 {
            self.0.remove(&site);
        }
    }

    pub fn set(&mut self, site: Site, x: i32) {
        if x == 0 {
            self.0.remove(&site);
        } else {
            self.0.insert(site, x);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Site, i32)> + '_ {
        self.0.iter().map(|(&s, &x)| (s, x))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.0.len()
    }

    pub fn add_scaled(&mut self, other: &LatticeVector, factor: i32) {
        for (site, x) in other.iter() {
            self.add_at(site, factor * x);
        }
    }

    pub fn plus(&self, other: &LatticeVector) -> LatticeVector {
        let mut out = self.clone();
        out.add_scaled(other, 1);
        out
    }

    pub fn minus(&self, other: &LatticeVector) -> LatticeVector {
        let mut out = self.clone();
        out.add_scaled(other, -1);
        out
    }

    pub fn negated(&self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|(&s, &x)| (s, -x)).collect())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.values().all(|&x| x >= 0)
    }

    /// First site with a negative entry.
    pub fn first_negative(&self) -> Option<(Site, i32)> {
        self.iter().find(|&(_, x)| x < 0)
    }

    /// Sum of all entries.
    pub fn total(&self) -> i64 {
        self.0.values().map(|&x| x as i64).sum()
    }

    /// `Σ_a v_i^a`.
    pub fn node_total(&self, node: usize) -> i64 {
        self.iter()
            .filter(|(s, _)| s.node == node)
            .map(|(_, x)| x as i64)
            .sum()
    }

    pub fn param_range(&self) -> Option<(i32, i32)> {
        let min = self.0.keys().map(|s| s.param).min()?;
        let max = self.0.keys().map(|s| s.param).max()?;
        Some((min, max))
    }

    /// Entries restricted to one node, as `(param, value)` pairs.
    pub fn node_entries(&self, node: usize) -> impl Iterator<Item = (i32, i32)> + '_ {
        self.0
            .range(Site::new(node, i32::MIN)..=Site::new(node, i32::MAX))
            .map(|(s, &x)| (s.param, x))
    }

    /// `[[i, a, x], …]` with one-based `i`, sorted by `(i, a)`.
    pub fn to_triples(&self) -> Vec<[i64; 3]> {
        self.iter()
            .map(|(s, x)| [s.node as i64 + 1, s.param as i64, x as i64])
            .collect()
    }

    pub fn from_triples(triples: &[[i64; 3]]) -> Result<Self> {
        let mut v = Self::new();
        for &[i, a, x] in triples {
            if i < 1 {
                return Err(Error::Parse(format!("node index {i} must be >= 1")));
            }
            let param = i32::try_from(a).map_err(|_| Error::Parse(format!("param {a}")))?;
            let x = i32::try_from(x).map_err(|_| Error::Parse(format!("entry {x}")))?;
            v.add_at(Site::new(i as usize - 1, param), x);
        }
        Ok(v)
    }

    pub fn max_node(&self) -> Option<usize> {
        self.0.keys().map(|s| s.node).max()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.iter().map(|(s, x)| format!("{x}@{s}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for LatticeVector {
    type Err = Error;

    /// Parses `1@(1,1),1@(2,2)`: multiplicity `@` one-based site. `0` and the
    /// empty string give the zero vector.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut v = LatticeVector::new();
        if s.is_empty() || s == "0" {
            return Ok(v);
        }
        let bad = || Error::Parse(format!("bad lattice vector `{s}`"));
        let mut rest = s;
        while !rest.is_empty() {
            let (mult, tail) = rest.split_once('@').ok_or_else(bad)?;
            let tail = tail.trim_start();
            let close = tail.find(')').ok_or_else(bad)?;
            let inner = tail
                .strip_prefix('(')
                .ok_or_else(bad)?
                .get(..close - 1)
                .ok_or_else(bad)?;
            let (i, a) = inner.split_once(',').ok_or_else(bad)?;
            let mult: i32 = mult.trim().trim_start_matches(',').trim().parse().map_err(|_| bad())?;
            let i: usize = i.trim().parse().map_err(|_| bad())?;
            let a: i32 = a.trim().parse().map_err(|_| bad())?;
            if i == 0 {
                return Err(bad());
            }
            v.add_at(Site::new(i - 1, a), mult);
            rest = tail[close + 1..].trim_start();
            rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
        }
        Ok(v)
    }
}

/// Product `∏ Y_{i,q^a}^{e}` stored as its exponent vector.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentMonomial(pub LatticeVector);

impl LaurentMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    /// `Y_{i,q^a}^{exp}`.
    pub fn y(node: usize, param: i32, exp: i32) -> Self {
        LaurentMonomial(LatticeVector::from_entries([(Site::new(node, param), exp)]))
    }

    pub fn from_exponents(entries: impl IntoIterator<Item = (Site, i32)>) -> Self {
        LaurentMonomial(LatticeVector::from_entries(entries))
    }

    pub fn exponents(&self) -> &LatticeVector {
        &self.0
    }

    pub fn exponent(&self, site: Site) -> i32 {
        self.0.get(site)
    }

    pub fn mul(&self, other: &LaurentMonomial) -> LaurentMonomial {
        LaurentMonomial(self.0.plus(&other.0))
    }

    pub fn inverse(&self) -> LaurentMonomial {
        LaurentMonomial(self.0.negated())
    }

    pub fn pow(&self, e: i32) -> LaurentMonomial {
        let mut out = LatticeVector::new();
        out.add_scaled(&self.0, e);
        LaurentMonomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_zero()
    }

    /// All exponents are nonnegative.
    pub fn is_dominant(&self) -> bool {
        self.0.is_nonnegative()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self.0.to_triples())
    }
}

impl fmt::Display for LaurentMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(s, e)| {
                if e == 1 {
                    format!("Y[{},{}]", s.node + 1, s.param)
                } else {
                    format!("Y[{},{}]^{}", s.node + 1, s.param, e)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `Y_{anchor,q^0} · ∏ A_{i,q^a}^{-v_i^a}`. Entries of `v` may be negative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AMonomialVector {
    pub anchor: usize,
    pub v: LatticeVector,
}

#[derive(Serialize, Deserialize)]
struct AMonomialVectorJson {
    anchor: usize,
    v: Vec<[i64; 3]>,
}

impl AMonomialVector {
    pub fn new(anchor: usize, v: LatticeVector) -> Self {
        AMonomialVector { anchor, v }
    }

    pub fn anchor_only(anchor: usize) -> Self {
        Self::new(anchor, LatticeVector::new())
    }

    /// Total A-degree `Σ v_i^a`.
    pub fn height(&self) -> i64 {
        self.v.total()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(AMonomialVectorJson {
            anchor: self.anchor + 1,
            v: self.v.to_triples(),
        })
        .expect("integer data serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: AMonomialVectorJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.anchor == 0 {
            return Err(Error::Parse("anchor is one-based".into()));
        }
        Ok(AMonomialVector::new(
            raw.anchor - 1,
            LatticeVector::from_triples(&raw.v)?,
        ))
    }
}

/// Classical weight in the fundamental-weight basis.
pub type ClassicalWeight = Vec<i64>;

/// Offsets `(j, s, e)` such that `A_{i,a}^{-1} = ∏ Y_{j,a+s}^{e}`.
pub fn a_inverse_pattern(datum: &CartanDatum, i: usize) -> Vec<(usize, i32, i32)> {
    let di = datum.d(i);
    let mut out = vec![(i, -di, -1), (i, di, -1)];
    for j in datum.neighbors(i) {
        let c = datum.c(j, i);
        let mut s = c + 1;
        while s < -c {
            out.push((j, s, 1));
            s += 2;
        }
    }
    out.sort();
    out
}

/// `A_{i,q^a}^{-1}` as a Y-monomial.
pub fn a_monomial_inverse(datum: &CartanDatum, i: usize, a: i32) -> LaurentMonomial {
    LaurentMonomial::from_exponents(
        a_inverse_pattern(datum, i)
            .into_iter()
            .map(|(j, s, e)| (Site::new(j, a + s), e)),
    )
}

/// Exponent vector of `∏ A_{i,a}^{-v_i^a}` (without the anchor).
pub fn a_product_exponents(datum: &CartanDatum, v: &LatticeVector) -> LatticeVector {
    let patterns: Vec<_> = datum.nodes().map(|i| a_inverse_pattern(datum, i)).collect();
    let mut out = LatticeVector::new();
    for (site, mult) in v.iter() {
        for &(j, s, e) in &patterns[site.node] {
            out.add_at(Site::new(j, site.param + s), mult * e);
        }
    }
    out
}

pub fn expand_to_y(datum: &CartanDatum, x: &AMonomialVector) -> LaurentMonomial {
    let mut exps = a_product_exponents(datum, &x.v);
    exps.add_at(Site::new(x.anchor, 0), 1);
    LaurentMonomial(exps)
}

/// Inverts [`expand_to_y`] for a fixed anchor.
///
/// The top Y-variable of `A_{i,a}^{-1}` is `Y_{i,a+d_i}` and every other
/// factor sits strictly lower, so the system is triangular and solved by
/// peeling the highest parameter first. Parameters are searched down to the
/// input window padded by `R = (1 + max|c_ij|) · max d_i`, then by `2R`.
pub fn factor_to_a(
    datum: &CartanDatum,
    anchor: usize,
    m: &LaurentMonomial,
) -> Result<AMonomialVector> {
    datum.check_node(anchor)?;
    let mut target = m.0.clone();
    target.add_at(Site::new(anchor, 0), -1);
    let max_c = datum
        .nodes()
        .flat_map(|i| datum.nodes().map(move |j| (i, j)))
        .map(|(i, j)| datum.c(i, j).abs())
        .max()
        .unwrap_or(2);
    let max_d = datum.nodes().map(|i| datum.d(i)).max().unwrap_or(1);
    let pad = (1 + max_c) * max_d;
    let low = target.param_range().map_or(0, |(lo, _)| lo.min(0));
    for window in [pad, 2 * pad] {
        if let Some(v) = peel(datum, &target, low - window) {
            return Ok(AMonomialVector::new(anchor, v));
        }
    }
    Err(Error::NotFactorable)
}

fn peel(datum: &CartanDatum, target: &LatticeVector, floor: i32) -> Option<LatticeVector> {
    let patterns: Vec<_> = datum.nodes().map(|i| a_inverse_pattern(datum, i)).collect();
    let mut residual = target.clone();
    let mut v = LatticeVector::new();
    while let Some((_, top)) = residual.param_range() {
        let at_top: Vec<(usize, i32)> = residual
            .iter()
            .filter(|(s, _)| s.param == top)
            .map(|(s, e)| (s.node, e))
            .collect();
        for (i, e) in at_top {
            let a = top - datum.d(i);
            if a < floor {
                return None;
            }
            // residual(i, top) = -v_i^a
            v.add_at(Site::new(i, a), -e);
            for &(j, s, pe) in &patterns[i] {
                residual.add_at(Site::new(j, a + s), e * pe);
            }
        }
    }
    Some(v)
}

/// Classical restriction `Y_{i,a} ↦ ω_i`.
pub fn classical_weight(datum: &CartanDatum, m: &LaurentMonomial) -> ClassicalWeight {
    let mut out = vec![0i64; datum.rank()];
    for (site, e) in m.0.iter() {
        out[site.node] += e as i64;
    }
    out
}
