//! Frenkel-Mukhin algorithm for q-characters of fundamental modules.
//!
//! Monomials are stored as A-monomial vectors `v` relative to the anchor
//! `ψ = Y_{k,0}`. The algorithm processes monomials by increasing height
//! `Σ v`. For every `i` in which a monomial `m` is `i`-dominant, the rank-one
//! character of its `i`-part is laid out below it, weighted by the part of
//! `μ(m)` not already accounted for by `i`-strings coming from above.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cartan::CartanDatum;
use crate::error::{Error, Result};
use crate::lweights::{
    a_product_exponents, classical_weight, expand_to_y, AMonomialVector, ClassicalWeight,
    LatticeVector, LaurentMonomial, Site,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FmCaps {
    pub max_monomials: usize,
    pub max_height: i64,
}

impl Default for FmCaps {
    fn default() -> Self {
        FmCaps {
            max_monomials: 200_000,
            max_height: 64,
        }
    }
}

/// Processing order inside one height class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProcessingOrder {
    #[default]
    Canonical,
    /// Seeded random permutation of every height class.
    Shuffled(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FmOptions {
    pub caps: FmCaps,
    pub order: ProcessingOrder,
}

/// q-character of `L(Y_{anchor,0})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QChar {
    pub label: String,
    pub anchor: usize,
    pub entries: BTreeMap<LatticeVector, u64>,
}

impl QChar {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn multiplicity(&self, v: &LatticeVector) -> u64 {
        self.entries.get(v).copied().unwrap_or(0)
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn max_height(&self) -> i64 {
        self.entries.keys().map(|v| v.total()).max().unwrap_or(0)
    }

    /// Entries sorted by height, then lexicographically.
    pub fn sorted_entries(&self) -> Vec<(&LatticeVector, u64)> {
        let mut out: Vec<_> = self.entries.iter().map(|(v, &m)| (v, m)).collect();
        out.sort_by(|a, b| a.0.total().cmp(&b.0.total()).then_with(|| a.0.cmp(b.0)));
        out
    }

    pub fn monomials(&self) -> impl Iterator<Item = AMonomialVector> + '_ {
        self.entries
            .keys()
            .map(|v| AMonomialVector::new(self.anchor, v.clone()))
    }

    /// `{type, node, conventions, entries: [{v, mu}]}` with a one-based node.
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .sorted_entries()
            .into_iter()
            .map(|(v, mu)| serde_json::json!({ "v": v.to_triples(), "mu": mu }))
            .collect();
        serde_json::json!({
            "type": self.label,
            "node": self.anchor + 1,
            "conventions": crate::CONVENTIONS,
            "entries": entries,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("q-character JSON: {what}"));
        let label = value["type"].as_str().ok_or_else(|| bad("missing type"))?.to_string();
        let node = value["node"].as_u64().ok_or_else(|| bad("missing node"))?;
        if node == 0 {
            return Err(bad("node is one-based"));
        }
        let mut entries = BTreeMap::new();
        for e in value["entries"].as_array().ok_or_else(|| bad("missing entries"))? {
            let triples: Vec<[i64; 3]> =
                serde_json::from_value(e["v"].clone()).map_err(|e| bad(&e.to_string()))?;
            let mu = e["mu"].as_u64().ok_or_else(|| bad("missing mu"))?;
            entries.insert(LatticeVector::from_triples(&triples)?, mu);
        }
        Ok(QChar {
            label,
            anchor: node as usize - 1,
            entries,
        })
    }
}

pub fn i_dominant(m: &LaurentMonomial, i: usize) -> bool {
    m.0.node_entries(i).all(|(_, e)| e >= 0)
}

/// A-exponents over parameters for one term of a rank-one expansion.
pub type Sl2Term = BTreeMap<i32, u32>;

/// Rank-one character of `∏ Y_{b}^{mult}` with step `d`: each term is the
/// set of `A_{·}^{-1}` factors to multiply onto the top monomial.
///
/// The multiset is split greedily, smallest parameter first, into maximal
/// strings `{b, b+2d, …, b+2(ℓ-1)d}`. A string of length `ℓ` yields the
/// `ℓ+1` terms `∏_{t=1}^{r} A_{b+2(ℓ-t)d+d}^{-1}`, and strings multiply.
pub fn sl2_expansion(d: i32, multiset: &[(i32, u32)]) -> Vec<(Sl2Term, u64)> {
    let mut remaining: BTreeMap<i32, u32> = BTreeMap::new();
    for &(b, m) in multiset {
        if m > 0 {
            *remaining.entry(b).or_insert(0) += m;
        }
    }
    let mut strings = Vec::new();
    while let Some((&b, _)) = remaining.iter().next() {
        let mut len = 0;
        let mut p = b;
        while let Some(cnt) = remaining.get_mut(&p) {
            *cnt -= 1;
            if *cnt == 0 {
                remaining.remove(&p);
            }
            len += 1;
            p += 2 * d;
        }
        strings.push((b, len));
    }
    let mut acc: BTreeMap<Sl2Term, u64> = BTreeMap::from([(Sl2Term::new(), 1)]);
    for (b, len) in strings {
        let mut next = BTreeMap::new();
        for (term, mult) in &acc {
            let mut t = term.clone();
            *next.entry(t.clone()).or_insert(0) += mult;
            for r in 1..=len {
                *t.entry(b + 2 * (len - r) * d + d).or_insert(0) += 1;
                *next.entry(t.clone()).or_insert(0) += mult;
            }
        }
        acc = next;
    }
    acc.into_iter().collect()
}

#[derive(Default, Clone)]
struct Slot {
    /// Accumulated multiplicity requirement per direction.
    from_dir: Vec<u64>,
}

/// Contribution `(target v, direction, amount)` produced by one monomial.
type Contribution = (LatticeVector, usize, u64);

fn expand_monomial(
    datum: &CartanDatum,
    anchor: usize,
    v: &LatticeVector,
    slot: &Slot,
) -> Result<(u64, Vec<Contribution>)> {
    let m = expand_to_y(datum, &AMonomialVector::new(anchor, v.clone()));
    let mu = if v.is_zero() {
        1
    } else {
        slot.from_dir.iter().copied().max().unwrap_or(0)
    };
    if mu == 0 {
        return Err(Error::FmFailure(format!("monomial {v} reached with multiplicity 0")));
    }
    if !v.is_zero() && m.is_dominant() {
        return Err(Error::FmFailure(format!("dominant monomial {m} below the anchor")));
    }
    let mut out = Vec::new();
    for i in datum.nodes() {
        let have = if v.is_zero() { 0 } else { slot.from_dir[i] };
        if !i_dominant(&m, i) {
            if have != mu {
                return Err(Error::FmFailure(format!(
                    "monomial {v} is not {}-dominant but its direction-{} coverage is {have} of {mu}",
                    i + 1,
                    i + 1
                )));
            }
            continue;
        }
        let new = mu - have.min(mu);
        if new == 0 {
            continue;
        }
        let part: Vec<(i32, u32)> = m.0.node_entries(i).map(|(b, e)| (b, e as u32)).collect();
        for (term, c) in sl2_expansion(datum.d(i), &part) {
            if term.is_empty() {
                continue;
            }
            let mut target = v.clone();
            for (a, n) in term {
                target.add_at(Site::new(i, a), n as i32);
            }
            out.push((target, i, new * c));
        }
    }
    Ok((mu, out))
}

/// Computes `χ_q(L(Y_{anchor,0}))`.
pub fn fm_qchar(datum: &CartanDatum, anchor: usize, options: FmOptions) -> Result<QChar> {
    datum.check_node(anchor)?;
    let rank = datum.rank();
    let caps = options.caps;
    let mut slots: HashMap<LatticeVector, Slot> = HashMap::new();
    let mut pending: BTreeMap<i64, Vec<LatticeVector>> = BTreeMap::new();
    let mut entries = BTreeMap::new();
    let mut rng = match options.order {
        ProcessingOrder::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        ProcessingOrder::Canonical => None,
    };
    slots.insert(
        LatticeVector::new(),
        Slot {
            from_dir: vec![0; rank],
        },
    );
    pending.insert(0, vec![LatticeVector::new()]);

    while let Some((height, mut layer)) = pending.pop_first() {
        layer.sort();
        if let Some(rng) = rng.as_mut() {
            layer.shuffle(rng);
        }
        let results: Vec<Result<(u64, Vec<Contribution>)>> = layer
            .par_iter()
            .map(|v| expand_monomial(datum, anchor, v, &slots[v]))
            .collect();
        for (v, res) in layer.into_iter().zip(results) {
            let (mu, contributions) = res?;
            entries.insert(v, mu);
            for (target, i, amount) in contributions {
                let h = target.total();
                debug_assert!(h > height);
                if h > caps.max_height {
                    return Err(Error::CapExceeded {
                        what: format!(
                            "q-character height (reached {h} with {} monomials found)",
                            slots.len()
                        ),
                        cap: caps.max_height as usize,
                    });
                }
                let slot = slots.entry(target.clone()).or_insert_with(|| {
                    pending.entry(h).or_default().push(target);
                    Slot {
                        from_dir: vec![0; rank],
                    }
                });
                slot.from_dir[i] += amount;
                if slots.len() > caps.max_monomials {
                    return Err(Error::CapExceeded {
                        what: format!(
                            "q-character size (partial: {} processed up to height {height})",
                            entries.len()
                        ),
                        cap: caps.max_monomials,
                    });
                }
            }
        }
    }
    Ok(QChar {
        label: datum.label(),
        anchor,
        entries,
    })
}

/// Pushforward of the multiplicities along the classical restriction.
pub fn classical_character(datum: &CartanDatum, q: &QChar) -> BTreeMap<ClassicalWeight, u64> {
    let mut out = BTreeMap::new();
    for (v, &mu) in &q.entries {
        let mut m = a_product_exponents(datum, v);
        m.add_at(Site::new(q.anchor, 0), 1);
        *out.entry(classical_weight(datum, &LaurentMonomial(m))).or_insert(0) += mu;
    }
    out
}

/// Whether `s_i` permutes the classical character for every `i`.
pub fn is_weyl_invariant(datum: &CartanDatum, character: &BTreeMap<ClassicalWeight, u64>) -> bool {
    datum.nodes().all(|i| {
        character.iter().all(|(wt, &mu)| {
            character.get(&datum.reflect_integral_weight(i, wt)).copied() == Some(mu)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(label: &str) -> CartanDatum {
        CartanDatum::from_label(label).unwrap()
    }

    fn lv(entries: &[(usize, i32, i32)]) -> LatticeVector {
        LatticeVector::from_entries(entries.iter().map(|&(i, a, e)| (Site::new(i - 1, a), e)))
    }

    fn term(entries: &[(i32, u32)]) -> Sl2Term {
        entries.iter().copied().collect()
    }

    #[test]
    fn dominance_examples() {
        assert!(i_dominant(&LaurentMonomial::y(0, 0, 1), 0));
        assert!(!i_dominant(&LaurentMonomial::y(0, 2, -1), 0));
        let m = LaurentMonomial::y(0, 2, -1).mul(&LaurentMonomial::y(1, 1, 1));
        assert!(i_dominant(&m, 1));
    }

    #[test]
    fn sl2_examples() {
        assert_eq!(sl2_expansion(1, &[(0, 1)]), vec![(term(&[]), 1), (term(&[(1, 1)]), 1)]);
        assert_eq!(sl2_expansion(1, &[]), vec![(term(&[]), 1)]);
        let two = sl2_expansion(1, &[(0, 1), (2, 1)]);
        assert_eq!(two.len(), 3);
        assert!(two.contains(&(term(&[(3, 1)]), 1)));
        assert!(two.contains(&(term(&[(3, 1), (1, 1)]), 1)));
        // Y_0^2: two strings of length one; middle term has multiplicity 2
        let sq = sl2_expansion(1, &[(0, 2)]);
        assert_eq!(sq, vec![(term(&[]), 1), (term(&[(1, 1)]), 2), (term(&[(1, 2)]), 1)]);
    }

    /// Dimension of the rank-one module equals the sum of multiplicities.
    #[test]
    fn sl2_dimension_oracle() {
        for ms in [
            vec![(0, 1), (2, 1), (4, 1)],
            vec![(0, 1), (4, 1)],
            vec![(0, 1), (2, 2)],
            vec![(0, 2), (2, 1), (10, 1)],
        ] {
            let mut rem: Vec<i32> = ms.iter().flat_map(|&(b, m)| std::iter::repeat_n(b, m as usize)).collect();
            rem.sort();
            // independent string split: pick the smallest, extend while possible
            let mut dim = 1u64;
            while !rem.is_empty() {
                let mut p = rem[0];
                let mut len = 0;
                while let Some(pos) = rem.iter().position(|&x| x == p) {
                    rem.remove(pos);
                    len += 1;
                    p += 2;
                }
                dim *= len + 1;
            }
            let total: u64 = sl2_expansion(1, &ms).iter().map(|t| t.1).sum();
            assert_eq!(total, dim, "{ms:?}");
        }
    }

    #[test]
    fn a1_fundamental() {
        let q = fm_qchar(&datum("A1"), 0, FmOptions::default()).unwrap();
        let expected: BTreeMap<_, _> = [(LatticeVector::new(), 1), (lv(&[(1, 1, 1)]), 1)].into();
        assert_eq!(q.entries, expected);
    }

    #[test]
    fn a2_fundamental() {
        let q = fm_qchar(&datum("A2"), 0, FmOptions::default()).unwrap();
        let expected: BTreeMap<_, _> = [
            (LatticeVector::new(), 1),
            (lv(&[(1, 1, 1)]), 1),
            (lv(&[(1, 1, 1), (2, 2, 1)]), 1),
        ]
        .into();
        assert_eq!(q.entries, expected);
    }

    /// Classical dimensions of fundamental modules of the quantum affine
    /// algebra (these exceed the Lie algebra fundamentals for some nodes).
    #[test]
    fn fundamental_dimensions() {
        for (label, node, dim) in [
            ("A3", 1, 6),
            ("B2", 0, 4),
            ("B2", 1, 5),
            ("C2", 0, 5),
            ("C2", 1, 4),
            ("G2", 0, 7),
            ("G2", 1, 15),
            ("D4", 1, 29),
        ] {
            let q = fm_qchar(&datum(label), node, FmOptions::default()).unwrap();
            assert_eq!(q.total_multiplicity(), dim, "{label} node {}", node + 1);
        }
    }

    #[test]
    fn invariants_for_small_ranks() {
        for label in ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "G2", "F4"] {
            let dt = datum(label);
            for k in dt.nodes() {
                let q = fm_qchar(&dt, k, FmOptions::default()).unwrap();
                assert_eq!(q.multiplicity(&LatticeVector::new()), 1);
                assert!(q.entries.keys().all(|v| v.is_nonnegative()));
                assert!(q.entries.values().all(|&m| m >= 1));
                assert!(is_weyl_invariant(&dt, &classical_character(&dt, &q)), "{label} {k}");
                // each nonzero v has a predecessor one A-step lower
                for v in q.entries.keys().filter(|v| !v.is_zero()) {
                    let has_pred = v.iter().any(|(s, _)| {
                        let mut u = v.clone();
                        u.add_at(s, -1);
                        q.entries.contains_key(&u)
                    });
                    assert!(has_pred, "{label} {k}: {v}");
                }
            }
        }
    }

    #[test]
    fn order_independence() {
        for label in ["B2", "G2", "C3", "D4"] {
            let dt = datum(label);
            for k in dt.nodes() {
                let base = fm_qchar(&dt, k, FmOptions::default()).unwrap();
                for seed in [1, 2, 3] {
                    let opts = FmOptions {
                        order: ProcessingOrder::Shuffled(seed),
                        ..FmOptions::default()
                    };
                    assert_eq!(fm_qchar(&dt, k, opts).unwrap(), base);
                }
            }
        }
    }

    #[test]
    fn caps_are_errors() {
        let opts = FmOptions {
            caps: FmCaps {
                max_monomials: 3,
                max_height: 64,
            },
            ..FmOptions::default()
        };
        assert!(matches!(
            fm_qchar(&datum("G2"), 1, opts),
            Err(Error::CapExceeded { .. })
        ));
        let opts = FmOptions {
            caps: FmCaps {
                max_monomials: 1000,
                max_height: 2,
            },
            ..FmOptions::default()
        };
        assert!(matches!(
            fm_qchar(&datum("A3"), 0, opts),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn classical_character_examples() {
        let dt = datum("A1");
        let q = fm_qchar(&dt, 0, FmOptions::default()).unwrap();
        let ch = classical_character(&dt, &q);
        assert_eq!(ch, [(vec![1], 1), (vec![-1], 1)].into());
        let dt = datum("A2");
        let q = fm_qchar(&dt, 0, FmOptions::default()).unwrap();
        let ch = classical_character(&dt, &q);
        assert_eq!(ch, [(vec![1, 0], 1), (vec![-1, 1], 1), (vec![0, -1], 1)].into());
    }

    #[test]
    fn json_round_trip() {
        let q = fm_qchar(&datum("B2"), 1, FmOptions::default()).unwrap();
        let j = q.to_json();
        assert_eq!(j["node"], 2);
        assert_eq!(j["entries"][0]["v"], serde_json::json!([]));
        assert_eq!(QChar::from_json(&j).unwrap(), q);
    }
}
