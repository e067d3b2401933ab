//! Brute-force enumeration of all points with given dimension vectors over
//! a prime field.

use rayon::prelude::*;

use super::relations::validate_relations;
use super::rep::{GradedQuiverRep, MapKey};
use super::stability::{stability_check, StabilityOptions};
use crate::cartan::{CartanDatum, WeightVector};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};
use crate::lweights::LatticeVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Bound on the number of free matrix entries.
    pub max_entries: usize,
    pub stability: StabilityOptions,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_entries: 22,
            stability: StabilityOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchPoint<F> {
    pub rep: GradedQuiverRep<F>,
    /// Stability for each supplied parameter, in order.
    pub stable: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult<F> {
    pub tuples: u64,
    pub points: Vec<SearchPoint<F>>,
}

impl<F: Scalar> SearchResult<F> {
    /// Points stable for parameter number `k`.
    pub fn stable_for(&self, k: usize) -> impl Iterator<Item = &GradedQuiverRep<F>> {
        self.points.iter().filter(move |p| p.stable[k]).map(|p| &p.rep)
    }
}

const CHUNK: u64 = 1 << 12;

/// Enumerates every tuple of matrices, keeps those satisfying the
/// relations, and classifies each against every `θ` in `thetas`.
pub fn exhaustive_search<F: Scalar>(
    datum: &CartanDatum,
    v: &LatticeVector,
    w: &LatticeVector,
    thetas: &[WeightVector],
    opts: SearchOptions,
) -> Result<SearchResult<F>> {
    let elements = F::elements().ok_or(Error::FieldNotFinite)?;
    for theta in thetas {
        if !datum.is_generic(theta) {
            return Err(Error::NonGenericTheta);
        }
    }
    let template = GradedQuiverRep::<F>::new(datum.clone(), v.clone(), w.clone())?;
    let slots: Vec<(MapKey, usize, usize)> = template
        .slots()
        .into_iter()
        .map(|k| {
            let (r, c) = template.shape(k);
            (k, r, c)
        })
        .collect();
    let entries: usize = slots.iter().map(|&(_, r, c)| r * c).sum();
    if entries > opts.max_entries {
        return Err(Error::CapExceeded {
            what: format!("{entries} free matrix entries"),
            cap: opts.max_entries,
        });
    }
    let p = elements.len() as u64;
    let total = p.checked_pow(entries as u32).ok_or(Error::CapExceeded {
        what: "tuple count".into(),
        cap: opts.max_entries,
    })?;

    let build = |mut idx: u64| -> Result<GradedQuiverRep<F>> {
        let mut rep = template.clone();
        for &(key, r, c) in &slots {
            let mut data = Vec::with_capacity(r);
            for _ in 0..r {
                let mut row = Vec::with_capacity(c);
                for _ in 0..c {
                    row.push(elements[(idx % p) as usize].clone());
                    idx /= p;
                }
                data.push(row);
            }
            rep.set_map(key, Matrix::from_rows(data, c)?)?;
        }
        Ok(rep)
    };

    let chunks: Vec<u64> = (0..total.div_ceil(CHUNK)).collect();
    let found: Vec<Result<Vec<SearchPoint<F>>>> = chunks
        .par_iter()
        .map(|&chunk| {
            let mut local = Vec::new();
            for idx in chunk * CHUNK..((chunk + 1) * CHUNK).min(total) {
                let rep = build(idx)?;
                if !validate_relations(&rep).is_empty() {
                    continue;
                }
                let stable = thetas
                    .iter()
                    .map(|t| stability_check(&rep, t, opts.stability))
                    .collect::<Result<Vec<bool>>>()?;
                local.push(SearchPoint { rep, stable });
            }
            Ok(local)
        })
        .collect();
    let mut points = Vec::new();
    for chunk in found {
        points.extend(chunk?);
    }
    Ok(SearchResult {
        tuples: total,
        points,
    })
}
