//! The reflection `𝒮_i` sending θ-stable points with `θ_i < 0` to
//! `s_i(θ)`-stable points, with new spaces `V̄_i^a = Ker Φ_i^a`.

use std::collections::{BTreeMap, BTreeSet};

use super::maps::{phi_map, psi_map, upsilon, PhiDomain};
use super::relations::validate_relations;
use super::rep::{GradedQuiverRep, MapKey};
use super::stability::{stability_check, StabilityOptions};
use crate::braid::apply_s_on_v;
use crate::cartan::WeightVector;
use crate::error::{Error, Result};
use crate::linalg::{Kernel, Matrix, Scalar};
use crate::lweights::{LatticeVector, Site};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReflectOptions {
    pub stability: StabilityOptions,
    /// Accept the input as stable when stability cannot be decided.
    pub trusted: bool,
    /// Check stability of the result when decidable.
    pub check_result: bool,
}

impl Default for ReflectOptions {
    fn default() -> Self {
        ReflectOptions {
            stability: StabilityOptions::default(),
            trusted: false,
            check_result: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reflected<F> {
    pub rep: GradedQuiverRep<F>,
    pub theta: WeightVector,
}

/// Decides stability, falling back to `trusted` when undecidable.
fn ensure_stable<F: Scalar>(
    rep: &GradedQuiverRep<F>,
    theta: &WeightVector,
    opts: &ReflectOptions,
) -> Result<()> {
    match stability_check(rep, theta, opts.stability) {
        Ok(true) => Ok(()),
        Ok(false) => Err(Error::NotStable),
        Err(Error::FieldNotFinite | Error::CapExceeded { .. }) if opts.trusted => Ok(()),
        Err(e) => Err(e),
    }
}

/// Parameters `a` for which `D_i^a` or `V_i^{a+d_ii}` is nonzero.
fn relevant_params<F: Scalar>(rep: &GradedQuiverRep<F>, i: usize) -> BTreeSet<i32> {
    let dt = rep.datum();
    let dii = dt.sym(i, i);
    let mut out = BTreeSet::new();
    for (s, _) in rep.w().iter().filter(|(s, _)| s.node == i) {
        out.insert(s.param - dt.d(i));
    }
    for s in rep.v_sites() {
        if s.node == i {
            out.insert(s.param - dii);
        } else if dt.sym(i, s.node) != 0 {
            for t in 1..=-dt.c(i, s.node) {
                out.insert(s.param - dt.sym(i, s.node) - t * dii);
            }
        }
    }
    out
}

pub fn reflect<F: Scalar>(
    rep: &GradedQuiverRep<F>,
    i: usize,
    theta: &WeightVector,
    opts: ReflectOptions,
) -> Result<Reflected<F>> {
    let dt = rep.datum().clone();
    dt.check_node(i)?;
    if theta.0.len() != dt.rank() {
        return Err(Error::ShapeMismatch("theta length differs from rank".into()));
    }
    if !dt.is_generic(theta) {
        return Err(Error::NonGenericTheta);
    }
    if !theta.is_negative_at(i) {
        return Err(Error::ThetaNotNegative { node: i });
    }
    ensure_stable(rep, theta, &opts)?;
    let dii = dt.sym(i, i);
    let di = dt.d(i);

    let mut kernels: BTreeMap<i32, (PhiDomain, Kernel<F>)> = BTreeMap::new();
    for a in relevant_params(rep, i) {
        let (dom, phi) = phi_map(rep, i, a);
        let target = rep.dim_v(Site::new(i, a + dii));
        let rank = phi.rank();
        if rank != target {
            return Err(Error::NotSurjective {
                site: Site::new(i, a),
                rank,
                target,
            });
        }
        let k = phi.kernel();
        if k.dim() > 0 {
            kernels.insert(a, (dom, k));
        }
    }

    let mut v_new = LatticeVector::from_entries(rep.v().iter().filter(|(s, _)| s.node != i));
    for (&a, (_, k)) in &kernels {
        v_new.add_at(Site::new(i, a), k.dim() as i32);
    }
    let mut out = GradedQuiverRep::new(dt.clone(), v_new, rep.w().clone())?;
    for (key, m) in rep.maps() {
        let touches = match key {
            MapKey::Arrow { from, to } => from.node == i || to == i,
            MapKey::A(s) | MapKey::B(s) => s.node == i,
        };
        if !touches {
            out.set_map(key, m.clone())?;
        }
    }

    for (&a, (dom, k)) in &kernels {
        let from = Site::new(i, a);
        for j in dt.neighbors(i) {
            let top = (-dt.c(i, j)) as usize;
            let (off, dim) = dom.block(j, top).expect("top summand");
            out.set_map(MapKey::Arrow { from, to: j }, k.basis.row_block(off, dim))?;
        }
        let (off, dim) = dom.w_block();
        out.set_map(MapKey::B(Site::new(i, a + di)), k.basis.row_block(off, dim))?;
        let image = upsilon(rep, i, a).mul(&k.basis);
        let new_loop = match kernels.get(&(a - dii)) {
            Some((_, lower)) => lower.coordinates(&image)?,
            None if image.is_zero() => Matrix::zeros(0, k.dim()),
            None => {
                return Err(Error::RelationViolated(format!(
                    "Upsilon does not preserve kernels at V{from}"
                )))
            }
        };
        out.set_map(MapKey::Arrow { from, to: i }, new_loop)?;
    }

    for (&a, (_, k)) in &kernels {
        let psi = psi_map(rep, i, a)?;
        for j in dt.neighbors(i) {
            let src = Site::new(j, a + dt.sym(i, j));
            if rep.dim_v(src) == 0 {
                continue;
            }
            let m = psi.mul(&rep.arrow(src, i));
            out.set_map(MapKey::Arrow { from: src, to: i }, k.coordinates(&m)?)?;
        }
        let w = Site::new(i, a - di);
        if rep.dim_w(w) > 0 {
            let m = psi.mul(&rep.map(MapKey::A(w)));
            out.set_map(MapKey::A(w), k.coordinates(&m)?)?;
        }
    }

    let violations = validate_relations(&out);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::RelationViolated(list.join("; ")));
    }
    let expected = apply_s_on_v(&dt, i, rep.v(), rep.w());
    if expected != *out.v() {
        return Err(Error::DimensionMismatch {
            expected: expected.to_string(),
            found: out.v().to_string(),
        });
    }
    let theta_new = dt.reflect_weight(i, theta);
    if opts.check_result {
        match stability_check(&out, &theta_new, opts.stability) {
            Ok(true) | Err(Error::FieldNotFinite | Error::CapExceeded { .. }) => {}
            Ok(false) => {
                return Err(Error::PostconditionFailed(
                    "reflected point is not stable for the reflected parameter".into(),
                ))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Reflected {
        rep: out,
        theta: theta_new,
    })
}

/// Applies `𝒮_{j_t}`, then …, then `𝒮_{j_1}` for the word `[j_1, …, j_t]`.
pub fn chain_reflect<F: Scalar>(
    rep: &GradedQuiverRep<F>,
    theta: &WeightVector,
    word: &[usize],
    opts: ReflectOptions,
) -> Result<Reflected<F>> {
    let mut cur = Reflected {
        rep: rep.clone(),
        theta: theta.clone(),
    };
    for &i in word.iter().rev() {
        cur = reflect(&cur.rep, i, &cur.theta, opts)?;
    }
    Ok(cur)
}
