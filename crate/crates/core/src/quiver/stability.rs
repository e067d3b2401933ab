//! Subrepresentations over finite fields and θ-stability.
//!
//! A subrepresentation is a graded subspace of `V` closed under every arrow.
//! Over a finite field the lattice of subrepresentations is finite and is
//! enumerated by breadth-first search: each step adds one homogeneous
//! vector and closes up, and canonical echelon bases deduplicate.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_rational::Rational64;
use num_traits::Zero;

use super::rep::{GradedQuiverRep, MapKey};
use crate::cartan::{CartanDatum, WeightVector};
use crate::error::{Error, Result};
use crate::linalg::{projective_points, Scalar, Subspace};
use crate::lweights::{LatticeVector, Site};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StabilityOptions {
    /// Bound on `Σ v + Σ w`.
    pub max_total_dim: usize,
    /// Bound on the number of subrepresentations visited per search.
    pub max_subreps: usize,
}

impl Default for StabilityOptions {
    fn default() -> Self {
        StabilityOptions {
            max_total_dim: 14,
            max_subreps: 1_000_000,
        }
    }
}

/// Graded subspace `U ⊆ V` closed under the arrows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subrep<F> {
    /// Nonzero pieces only.
    pub spaces: BTreeMap<Site, Subspace<F>>,
    pub in_ker_b: bool,
    pub contains_im_a: bool,
}

impl<F: Scalar> Subrep<F> {
    pub fn dims(&self) -> LatticeVector {
        LatticeVector::from_entries(self.spaces.iter().map(|(&s, u)| (s, u.dim() as i32)))
    }

    pub fn contains(&self, site: Site, x: &[F]) -> bool {
        x.iter().all(|c| c.is_zero()) || self.spaces.get(&site).is_some_and(|u| u.contains(x))
    }
}

type Pieces<F> = BTreeMap<Site, Subspace<F>>;

/// Smallest subrepresentation containing `base` and the `seeds`.
fn close<F: Scalar>(rep: &GradedQuiverRep<F>, base: &Pieces<F>, seeds: Vec<(Site, Vec<F>)>) -> Pieces<F> {
    let dt = rep.datum();
    let mut pieces = base.clone();
    let mut queue: VecDeque<(Site, Vec<F>)> = seeds.into();
    while let Some((site, x)) = queue.pop_front() {
        let n = rep.dim_v(site);
        let grew = pieces
            .entry(site)
            .or_insert_with(|| Subspace::zero(n))
            .insert(&x);
        if !grew {
            continue;
        }
        for to in dt.nodes().filter(|&j| rep.arrow_allowed(site.node, j)) {
            let Some(m) = rep.stored_map(MapKey::Arrow { from: site, to }) else {
                continue;
            };
            let y = m.apply(&x);
            if y.iter().any(|c| !c.is_zero()) {
                queue.push_back((rep.arrow_target(site, to), y));
            }
        }
    }
    pieces.retain(|_, u| u.dim() > 0);
    pieces
}

fn in_ker_b<F: Scalar>(rep: &GradedQuiverRep<F>, pieces: &Pieces<F>) -> bool {
    let dt = rep.datum();
    pieces.iter().all(|(&site, u)| {
        let w = site.shifted(dt.d(site.node));
        match rep.stored_map(MapKey::B(w)) {
            Some(b) => u.basis().iter().all(|x| b.apply(x).iter().all(|c| c.is_zero())),
            None => true,
        }
    })
}

fn image_of_a<F: Scalar>(rep: &GradedQuiverRep<F>) -> Vec<(Site, Vec<F>)> {
    let dt = rep.datum();
    let mut seeds = Vec::new();
    for (w, _) in rep.w().iter() {
        if let Some(a) = rep.stored_map(MapKey::A(w)) {
            let target = w.shifted(dt.d(w.node));
            for c in 0..a.cols() {
                seeds.push((target, a.column(c)));
            }
        }
    }
    seeds
}

fn contains_im_a<F: Scalar>(rep: &GradedQuiverRep<F>, pieces: &Pieces<F>) -> bool {
    image_of_a(rep).iter().all(|(s, x)| pieces.get(s).is_some_and(|u| u.contains(x)))
}

fn make_subrep<F: Scalar>(rep: &GradedQuiverRep<F>, pieces: Pieces<F>) -> Subrep<F> {
    Subrep {
        in_ker_b: in_ker_b(rep, &pieces),
        contains_im_a: contains_im_a(rep, &pieces),
        spaces: pieces,
    }
}

/// The subrepresentation generated by the images of all `A` maps.
pub fn generated_by_a<F: Scalar>(rep: &GradedQuiverRep<F>) -> Subrep<F> {
    let pieces = close(rep, &Pieces::new(), image_of_a(rep));
    make_subrep(rep, pieces)
}

/// The subrepresentation generated by the given homogeneous vectors.
pub fn generated_by<F: Scalar>(rep: &GradedQuiverRep<F>, seeds: Vec<(Site, Vec<F>)>) -> Subrep<F> {
    let pieces = close(rep, &Pieces::new(), seeds);
    make_subrep(rep, pieces)
}

fn require_decidable<F: Scalar>(rep: &GradedQuiverRep<F>, opts: StabilityOptions) -> Result<()> {
    if F::elements().is_none() {
        return Err(Error::FieldNotFinite);
    }
    if rep.total_dim() > opts.max_total_dim {
        return Err(Error::CapExceeded {
            what: format!("total dimension {} for stability enumeration", rep.total_dim()),
            cap: opts.max_total_dim,
        });
    }
    Ok(())
}

/// Breadth-first search over subrepresentations reachable from `start` by
/// adding homogeneous vectors while `admissible` holds. `visit` returns
/// `false` to stop early.
fn search<F: Scalar>(
    rep: &GradedQuiverRep<F>,
    start: Pieces<F>,
    opts: StabilityOptions,
    admissible: impl Fn(&Pieces<F>) -> bool,
    mut visit: impl FnMut(&Pieces<F>) -> bool,
) -> Result<bool> {
    let mut candidates: Vec<(Site, Vec<Vec<F>>)> = Vec::new();
    for site in rep.v_sites() {
        candidates.push((site, projective_points::<F>(rep.dim_v(site))?));
    }
    let mut seen: HashSet<Pieces<F>> = HashSet::new();
    let mut queue = VecDeque::new();
    if !admissible(&start) {
        return Ok(true);
    }
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(u) = queue.pop_front() {
        if !visit(&u) {
            return Ok(false);
        }
        for (site, points) in &candidates {
            for x in points {
                if u.get(site).is_some_and(|s| s.contains(x)) {
                    continue;
                }
                let next = close(rep, &u, vec![(*site, x.clone())]);
                if seen.contains(&next) || !admissible(&next) {
                    continue;
                }
                if seen.len() >= opts.max_subreps {
                    return Err(Error::CapExceeded {
                        what: "subrepresentation count".into(),
                        cap: opts.max_subreps,
                    });
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(true)
}

/// Every subrepresentation of `V`.
pub fn enumerate_subreps<F: Scalar>(
    rep: &GradedQuiverRep<F>,
    opts: StabilityOptions,
) -> Result<Vec<Subrep<F>>> {
    require_decidable(rep, opts)?;
    let mut all = Vec::new();
    search(rep, Pieces::new(), opts, |_| true, |u| {
        all.push(u.clone());
        true
    })?;
    let mut out: Vec<Subrep<F>> = all.into_iter().map(|p| make_subrep(rep, p)).collect();
    out.sort_by(|a, b| a.dims().total().cmp(&b.dims().total()).then_with(|| a.dims().cmp(&b.dims())));
    Ok(out)
}

/// `(θ, u) = Σ_i d_i θ_i Σ_a u_i^a`.
pub fn pairing(datum: &CartanDatum, theta: &WeightVector, u: &LatticeVector) -> Rational64 {
    u.iter()
        .map(|(s, x)| theta.coeff(s.node) * Rational64::from_integer((datum.d(s.node) * x) as i64))
        .sum()
}

/// Which half of the stability condition a witness breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Destabilizing {
    /// `U ⊆ Ker B` with `(θ, u) > 0`.
    InsideKerB,
    /// `U ⊇ Im A` with `(θ, v - u) < 0`.
    ContainingImA,
}

/// A destabilizing subrepresentation, if there is one.
pub fn stability_witness<F: Scalar>(
    rep: &GradedQuiverRep<F>,
    theta: &WeightVector,
    opts: StabilityOptions,
) -> Result<Option<(Subrep<F>, Destabilizing)>> {
    let dt = rep.datum();
    if theta.0.len() != dt.rank() {
        return Err(Error::ShapeMismatch(format!(
            "theta has {} coefficients for rank {}",
            theta.0.len(),
            dt.rank()
        )));
    }
    if !dt.is_generic(theta) {
        return Err(Error::NonGenericTheta);
    }
    require_decidable(rep, opts)?;
    let v = rep.v().clone();

    let mut bad = None;
    search(
        rep,
        Pieces::new(),
        opts,
        |p| in_ker_b(rep, p),
        |p| {
            let u = dims_of(p);
            if pairing(dt, theta, &u) > Rational64::zero() {
                bad = Some(p.clone());
                return false;
            }
            true
        },
    )?;
    if let Some(p) = bad {
        return Ok(Some((make_subrep(rep, p), Destabilizing::InsideKerB)));
    }

    let start = close(rep, &Pieces::new(), image_of_a(rep));
    search(
        rep,
        start,
        opts,
        |_| true,
        |p| {
            let u = dims_of(p);
            if pairing(dt, theta, &v.minus(&u)) < Rational64::zero() {
                bad = Some(p.clone());
                return false;
            }
            true
        },
    )?;
    Ok(bad.map(|p| (make_subrep(rep, p), Destabilizing::ContainingImA)))
}

fn dims_of<F: Scalar>(p: &Pieces<F>) -> LatticeVector {
    LatticeVector::from_entries(p.iter().map(|(&s, u)| (s, u.dim() as i32)))
}

/// θ-stability; decided only over finite fields within the size cap.
pub fn stability_check<F: Scalar>(
    rep: &GradedQuiverRep<F>,
    theta: &WeightVector,
    opts: StabilityOptions,
) -> Result<bool> {
    Ok(stability_witness(rep, theta, opts)?.is_none())
}

/// Stability in the framed sense: `V` has no proper subrepresentation
/// containing the images of the `A` maps. Valid over any field.
pub fn is_stable_framed<F: Scalar>(rep: &GradedQuiverRep<F>) -> bool {
    generated_by_a(rep).dims() == *rep.v()
}
