//! The maps `Φ_i^a`, `Ψ_i^a` and `Υ_i^a` around node `i`.
//!
//! The domain `D_i^a` is `W_i^{a+d_i}` followed by the summands
//! `V_j^{a+d_ij+t d_ii}` for each neighbour `j` and `t = 1..=-c_ij`, in
//! lexicographic `(j, t)` order. `Φ_i^a : D_i^a → V_i^{a+d_ii}` and
//! `Ψ_i^a : V_i^a → D_i^a` compose to the left-hand side of E1bis.

use super::rep::GradedQuiverRep;
use super::rep::MapKey;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};
use crate::lweights::Site;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Summand {
    W(Site),
    V { j: usize, t: usize, site: Site },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiDomain {
    pub node: usize,
    pub param: i32,
    /// `(summand, offset, dimension)`.
    pub summands: Vec<(Summand, usize, usize)>,
    pub dim: usize,
}

impl PhiDomain {
    pub fn w_block(&self) -> (usize, usize) {
        let (_, off, dim) = self.summands[0];
        (off, dim)
    }

    pub fn block(&self, j: usize, t: usize) -> Option<(usize, usize)> {
        self.summands.iter().find_map(|&(s, off, dim)| match s {
            Summand::V { j: jj, t: tt, .. } if jj == j && tt == t => Some((off, dim)),
            _ => None,
        })
    }
}

pub fn phi_domain<F: Scalar>(rep: &GradedQuiverRep<F>, i: usize, a: i32) -> PhiDomain {
    let dt = rep.datum();
    let dii = dt.sym(i, i);
    let w = Site::new(i, a + dt.d(i));
    let mut summands = vec![(Summand::W(w), 0, rep.dim_w(w))];
    let mut off = rep.dim_w(w);
    for j in dt.neighbors(i) {
        for t in 1..=(-dt.c(i, j)) as usize {
            let site = Site::new(j, a + dt.sym(i, j) + t as i32 * dii);
            let dim = rep.dim_v(site);
            summands.push((Summand::V { j, t, site }, off, dim));
            off += dim;
        }
    }
    PhiDomain {
        node: i,
        param: a,
        summands,
        dim: off,
    }
}

/// `Φ_i^a`, with blocks `A_i^{a+d_i}` and `loop_i^{t-1} ∘ X_{i←j}`.
pub fn phi_map<F: Scalar>(rep: &GradedQuiverRep<F>, i: usize, a: i32) -> (PhiDomain, Matrix<F>) {
    let dt = rep.datum();
    let dom = phi_domain(rep, i, a);
    let target = Site::new(i, a + dt.sym(i, i));
    let mut m = Matrix::zeros(rep.dim_v(target), dom.dim);
    for &(s, off, dim) in &dom.summands {
        if dim == 0 {
            continue;
        }
        let block = match s {
            Summand::W(w) => rep.map(MapKey::A(w)),
            Summand::V { t, site, .. } => {
                let mut steps = vec![i];
                steps.extend(std::iter::repeat_n(i, t - 1));
                let (b, end) = rep.path(site, &steps);
                debug_assert_eq!(end, target);
                b
            }
        };
        m.place(0, off, &block);
    }
    (dom, m)
}

/// `Ψ_i^a` without the composite check.
pub fn psi_map_raw<F: Scalar>(rep: &GradedQuiverRep<F>, i: usize, a: i32) -> (PhiDomain, Matrix<F>) {
    let dt = rep.datum();
    let dom = phi_domain(rep, i, a);
    let source = Site::new(i, a);
    let mut m = Matrix::zeros(dom.dim, rep.dim_v(source));
    for &(s, off, dim) in &dom.summands {
        if dim == 0 {
            continue;
        }
        let block = match s {
            Summand::W(w) => rep.map(MapKey::B(w)),
            Summand::V { j, t, site } => {
                let top = (-dt.c(i, j)) as usize;
                let mut steps = vec![i; top - t];
                steps.push(j);
                let (b, end) = rep.path(source, &steps);
                debug_assert_eq!(end, site);
                b
            }
        };
        m.place(off, 0, &block);
    }
    (dom, m)
}

/// `Ψ_i^a : V_i^a → D_i^a`; fails when `Φ_i^a ∘ Ψ_i^a` is nonzero.
pub fn psi_map<F: Scalar>(rep: &GradedQuiverRep<F>, i: usize, a: i32) -> Result<Matrix<F>> {
    let (_, psi) = psi_map_raw(rep, i, a);
    let (_, phi) = phi_map(rep, i, a);
    if !phi.mul(&psi).is_zero() {
        return Err(Error::RelationViolated(format!(
            "Phi o Psi is nonzero at V{}",
            Site::new(i, a)
        )));
    }
    Ok(psi)
}

/// `Υ_i^a : D_i^a → D_i^{a-d_ii}`. Summand `(j, t)` goes to `(j, t+1)` by
/// the identity; the top summand `(j, -c_ij)` goes to `(j, 1)` by
/// `-loop_j^{-c_ji}`; the `W` block maps to zero.
pub fn upsilon<F: Scalar>(rep: &GradedQuiverRep<F>, i: usize, a: i32) -> Matrix<F> {
    let dt = rep.datum();
    let src = phi_domain(rep, i, a);
    let dst = phi_domain(rep, i, a - dt.sym(i, i));
    let mut m = Matrix::zeros(dst.dim, src.dim);
    for &(s, off, dim) in &src.summands {
        let Summand::V { j, t, site } = s else {
            continue;
        };
        if dim == 0 {
            continue;
        }
        let top = (-dt.c(i, j)) as usize;
        if t < top {
            let (doff, ddim) = dst.block(j, t + 1).expect("summand exists");
            debug_assert_eq!(ddim, dim);
            m.place(doff, off, &Matrix::identity(dim));
        } else {
            let (doff, _) = dst.block(j, 1).expect("summand exists");
            let l = rep.loop_power(site, (-dt.c(j, i)) as usize).neg();
            m.place(doff, off, &l);
        }
    }
    m
}
