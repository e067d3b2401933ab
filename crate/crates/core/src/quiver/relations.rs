use std::fmt;

use super::rep::{GradedQuiverRep, MapKey};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};
use crate::lweights::Site;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationKind {
    /// Preprojective relation with the `AB` term, out of `V_i^a`.
    E1bis,
    /// Loop commutation along the arrow `i → j`, out of `V_i^a`.
    E2 { to: usize },
    /// `loop ∘ A_i^a = 0`.
    E4,
    /// `B_i^a ∘ loop = 0`.
    E5,
    /// The loop kills the framing vector.
    Framing,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationViolation {
    pub kind: RelationKind,
    pub site: Site,
}

impl fmt::Display for RelationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RelationKind::E1bis => write!(f, "E1bis at V{}", self.site),
            RelationKind::E2 { to } => write!(f, "E2 from V{} towards node {}", self.site, to + 1),
            RelationKind::E4 => write!(f, "E4 at W{}", self.site),
            RelationKind::E5 => write!(f, "E5 at W{}", self.site),
            RelationKind::Framing => write!(f, "loop on framing vector at V{}", self.site),
        }
    }
}

/// Left-hand side of E1bis out of `V_i^a`, a map `V_i^a → V_i^{a+d_ii}`.
pub fn e1bis_lhs<F: Scalar>(rep: &GradedQuiverRep<F>, site: Site, with_ab: bool) -> Matrix<F> {
    let dt = rep.datum();
    let i = site.node;
    let di = dt.d(i);
    let target = site.shifted(dt.sym(i, i));
    let mut sum = Matrix::zeros(rep.dim_v(target), rep.dim_v(site));
    for j in dt.neighbors(i) {
        let t = (-dt.c(i, j)) as usize;
        for l in 0..t {
            let mut steps = vec![i; l];
            steps.push(j);
            steps.push(i);
            steps.extend(std::iter::repeat_n(i, t - 1 - l));
            let (m, end) = rep.path(site, &steps);
            debug_assert_eq!(end, target);
            sum = sum.add(&m);
        }
    }
    if with_ab {
        let w = site.shifted(di);
        let ab = rep.map(MapKey::A(w)).mul(&rep.map(MapKey::B(w)));
        sum = sum.add(&ab);
    }
    sum
}

/// Left-hand side of E2 out of `V_i^a` towards `j`, a map
/// `V_i^a → V_j^{a+d_ij}`.
pub fn e2_lhs<F: Scalar>(rep: &GradedQuiverRep<F>, site: Site, j: usize) -> Matrix<F> {
    let dt = rep.datum();
    let i = site.node;
    let mut first = vec![j];
    first.extend(std::iter::repeat_n(j, (-dt.c(j, i)) as usize));
    let mut second = vec![i; (-dt.c(i, j)) as usize];
    second.push(j);
    let (m1, e1) = rep.path(site, &first);
    let (m2, e2) = rep.path(site, &second);
    debug_assert_eq!(e1, e2);
    m1.add(&m2)
}

fn check<F: Scalar>(
    rep: &GradedQuiverRep<F>,
    with_ab: bool,
    framing_maps: bool,
) -> Vec<RelationViolation> {
    let dt = rep.datum();
    let mut out = Vec::new();
    for site in rep.v_sites() {
        if !e1bis_lhs(rep, site, with_ab).is_zero() {
            out.push(RelationViolation {
                kind: RelationKind::E1bis,
                site,
            });
        }
        for j in dt.neighbors(site.node) {
            if !e2_lhs(rep, site, j).is_zero() {
                out.push(RelationViolation {
                    kind: RelationKind::E2 { to: j },
                    site,
                });
            }
        }
    }
    if framing_maps {
        for (site, _) in rep.w().iter() {
            let i = site.node;
            let a_target = site.shifted(dt.d(i));
            let e4 = rep.arrow(a_target, i).mul(&rep.map(MapKey::A(site)));
            if !e4.is_zero() {
                out.push(RelationViolation {
                    kind: RelationKind::E4,
                    site,
                });
            }
            let b_source = site.shifted(-dt.d(i));
            let from = b_source.shifted(dt.sym(i, i));
            let e5 = rep.map(MapKey::B(site)).mul(&rep.arrow(from, i));
            if !e5.is_zero() {
                out.push(RelationViolation {
                    kind: RelationKind::E5,
                    site,
                });
            }
        }
    }
    out.sort();
    out
}

/// All violated relations among E1bis, E2, E4 and E5. Empty means the point
/// satisfies the defining relations.
pub fn validate_relations<F: Scalar>(rep: &GradedQuiverRep<F>) -> Vec<RelationViolation> {
    check(rep, true, true)
}

/// Checks a `B = 0` point as a framed representation with framing vector
/// `xi ∈ V_k^{d_k}`: the preprojective relation without `AB`, E2, and
/// `loop(ξ) = 0`.
pub fn validate_n<F: Scalar>(
    rep: &GradedQuiverRep<F>,
    k: usize,
    xi: &[F],
) -> Result<Vec<RelationViolation>> {
    let dt = rep.datum();
    dt.check_node(k)?;
    if !rep.is_b_zero() {
        return Err(Error::RelationViolated("framed check needs B = 0".into()));
    }
    let site = Site::new(k, dt.d(k));
    if xi.len() != rep.dim_v(site) {
        return Err(Error::ShapeMismatch(format!(
            "framing vector of length {} in V{site} of dimension {}",
            xi.len(),
            rep.dim_v(site)
        )));
    }
    let mut out = check(rep, false, false);
    let image = rep.arrow(site, k).apply(xi);
    if image.iter().any(|x| !x.is_zero()) {
        out.push(RelationViolation {
            kind: RelationKind::Framing,
            site,
        });
    }
    Ok(out)
}

/// The vector `A_k^0(1)` for a point framed by `w = e_(k,0)`.
pub fn framing_vector<F: Scalar>(rep: &GradedQuiverRep<F>) -> Result<(usize, Vec<F>)> {
    let mut sites = rep.w().iter();
    let (site, mult) = match (sites.next(), sites.next()) {
        (Some(x), None) => x,
        _ => return Err(Error::ShapeMismatch("framing must be a single unit vector".into())),
    };
    if mult != 1 || site.param != 0 {
        return Err(Error::ShapeMismatch("framing must be e_(k,0)".into()));
    }
    Ok((site.node, rep.map(MapKey::A(site)).column(0)))
}
