//! Checks that every monomial of a q-character stays in the cone
//! `ψ ∏ A^{-1}` under every `S_w`, and extracts the cone vertices
//! `S_w^{-1}(ψ)`.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::braid::{apply_s_on_v, apply_word_inverse};
use crate::cartan::{CartanDatum, WeylElement};
use crate::error::Result;
use crate::lweights::{factor_to_a, AMonomialVector, LatticeVector, LaurentMonomial, Site};
use crate::qchar::{fm_qchar, FmOptions, QChar};

pub fn cone_membership(x: &AMonomialVector) -> bool {
    x.v.is_nonnegative()
}

/// A monomial that leaves the cone under `S_w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub v: LatticeVector,
    pub word: Vec<usize>,
    pub image: LatticeVector,
    pub site: Site,
    pub value: i32,
}

impl Violation {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "v": self.v.to_triples(),
            "word": self.word.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "image": self.image.to_triples(),
            "site": [self.site.node + 1, self.site.param],
            "value": self.value,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalReport {
    pub word: Vec<usize>,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

/// `S_w(v)` along `word`, last letter first, framing `e_(anchor,0)`.
pub fn s_word_on_entry(datum: &CartanDatum, anchor: usize, word: &[usize], v: &LatticeVector) -> LatticeVector {
    let w = LatticeVector::unit(Site::new(anchor, 0));
    word.iter()
        .rev()
        .fold(v.clone(), |acc, &i| apply_s_on_v(datum, i, &acc, &w))
}

pub fn extremal_check_word(datum: &CartanDatum, q: &QChar, word: &[usize]) -> ExtremalReport {
    let mut violations = Vec::new();
    for v in q.entries.keys() {
        let image = s_word_on_entry(datum, q.anchor, word, v);
        if let Some((site, value)) = image.first_negative() {
            violations.push(Violation {
                v: v.clone(),
                word: word.to_vec(),
                image,
                site,
                value,
            });
        }
    }
    ExtremalReport {
        word: word.to_vec(),
        checked: q.len(),
        violations,
    }
}

pub fn extremal_check(datum: &CartanDatum, q: &QChar, w: &WeylElement) -> ExtremalReport {
    extremal_check_word(datum, q, &w.word)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub fm: FmOptions,
    pub weyl_cap: usize,
    /// Re-check with a second reduced word when `|W|` is at most this.
    pub second_word_limit: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            fm: FmOptions::default(),
            weyl_cap: crate::cartan::DEFAULT_WEYL_CAP,
            second_word_limit: 48,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TheoremSummary {
    pub label: String,
    pub node: usize,
    pub monomials: usize,
    pub weyl_order: usize,
    pub checks: usize,
    pub violations: Vec<Violation>,
    /// Violations among `w = s_i` and `w = w_0`.
    pub anchor_case_violations: usize,
    pub anchor_case_checks: usize,
    /// Elements re-checked with a second reduced word.
    pub second_words: usize,
    /// Elements whose images differ between the two words.
    pub word_mismatches: usize,
    pub elapsed: Duration,
}

impl TheoremSummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.word_mismatches == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "type": self.label,
            "node": self.node + 1,
            "conventions": crate::CONVENTIONS,
            "monomials": self.monomials,
            "weyl_order": self.weyl_order,
            "checks": self.checks,
            "anchor_case_checks": self.anchor_case_checks,
            "anchor_case_violations": self.anchor_case_violations,
            "second_words": self.second_words,
            "word_mismatches": self.word_mismatches,
            "violations": self.violations.iter().map(Violation::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Runs the closure check over all of `W` for a q-character already
/// computed.
pub fn verify_qchar(
    datum: &CartanDatum,
    q: &QChar,
    elements: &[WeylElement],
    second_word_limit: usize,
) -> TheoremSummary {
    let start = Instant::now();
    let longest = elements.iter().map(|e| e.length()).max().unwrap_or(0);
    let use_second = elements.len() <= second_word_limit;
    let per_element: Vec<(ExtremalReport, bool, bool)> = elements
        .par_iter()
        .map(|e| {
            let report = extremal_check(datum, q, e);
            let (tried, mismatch) = match use_second.then(|| e.alternate_reduced_word(datum)).flatten() {
                Some(alt) => {
                    let differs = q.entries.keys().any(|v| {
                        s_word_on_entry(datum, q.anchor, &e.word, v)
                            != s_word_on_entry(datum, q.anchor, &alt, v)
                    });
                    (true, differs)
                }
                None => (false, false),
            };
            (report, tried, mismatch)
        })
        .collect();
    let mut summary = TheoremSummary {
        label: datum.label(),
        node: q.anchor,
        monomials: q.len(),
        weyl_order: elements.len(),
        checks: 0,
        violations: Vec::new(),
        anchor_case_violations: 0,
        anchor_case_checks: 0,
        second_words: 0,
        word_mismatches: 0,
        elapsed: Duration::ZERO,
    };
    for (e, (report, tried, mismatch)) in elements.iter().zip(per_element) {
        summary.checks += report.checked;
        if e.length() == 1 || e.length() == longest {
            summary.anchor_case_checks += report.checked;
            summary.anchor_case_violations += report.violations.len();
        }
        summary.second_words += tried as usize;
        summary.word_mismatches += mismatch as usize;
        summary.violations.extend(report.violations);
    }
    summary.elapsed = start.elapsed();
    summary
}

/// Computes the q-character of `L(Y_{node,0})` and checks it against every
/// element of `W`.
pub fn verify_theorem(datum: &CartanDatum, node: usize, options: VerifyOptions) -> Result<TheoremSummary> {
    let start = Instant::now();
    let elements = datum.weyl_elements(options.weyl_cap)?;
    let q = fm_qchar(datum, node, options.fm)?;
    let mut summary = verify_qchar(datum, &q, &elements, options.second_word_limit);
    summary.elapsed = start.elapsed();
    Ok(summary)
}

/// `S_w^{-1}(ψ)` for every `w`, in the order of `elements`.
pub fn cone_vertices(
    datum: &CartanDatum,
    node: usize,
    elements: &[WeylElement],
) -> Result<Vec<AMonomialVector>> {
    datum.check_node(node)?;
    let psi = LaurentMonomial::y(node, 0, 1);
    elements
        .iter()
        .map(|e| factor_to_a(datum, node, &apply_word_inverse(datum, &e.word, &psi)))
        .collect()
}
