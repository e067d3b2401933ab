use std::collections::BTreeMap;
use std::fmt;

use crate::cartan::CartanDatum;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};
use crate::lweights::{LatticeVector, Site};

/// A graded vector space slot: `V_i^a` or `W_i^a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    V(Site),
    W(Site),
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::V(s) => write!(f, "V{s}"),
            Space::W(s) => write!(f, "W{s}"),
        }
    }
}

/// Names one linear map of a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MapKey {
    /// `V_i^a → V_j^{a-d_ij}` with `from = (i, a)`, `to = j`. For `i = j`
    /// this is the loop.
    Arrow { from: Site, to: usize },
    /// `A_i^a : W_i^a → V_i^{a+d_i}`.
    A(Site),
    /// `B_i^a : V_i^{a-d_i} → W_i^a`.
    B(Site),
}

impl fmt::Display for MapKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapKey::Arrow { from, to } => write!(f, "X[{}<-{}]@{}", to + 1, from.node + 1, from.param),
            MapKey::A(s) => write!(f, "A{s}"),
            MapKey::B(s) => write!(f, "B{s}"),
        }
    }
}

/// A point of the space of graded (co)framed representations with
/// dimension vectors `v`, `w`. Maps that are absent are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedQuiverRep<F> {
    datum: CartanDatum,
    v: LatticeVector,
    w: LatticeVector,
    maps: BTreeMap<MapKey, Matrix<F>>,
}

fn check_dims(datum: &CartanDatum, x: &LatticeVector, name: &str) -> Result<()> {
    if let Some((site, _)) = x.first_negative() {
        return Err(Error::Parse(format!("{name} is negative at {site}")));
    }
    if let Some(n) = x.max_node() {
        datum.check_node(n)?;
    }
    Ok(())
}

impl<F: Scalar> GradedQuiverRep<F> {
    /// The zero point.
    pub fn new(datum: CartanDatum, v: LatticeVector, w: LatticeVector) -> Result<Self> {
        check_dims(&datum, &v, "v")?;
        check_dims(&datum, &w, "w")?;
        Ok(GradedQuiverRep {
            datum,
            v,
            w,
            maps: BTreeMap::new(),
        })
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn v(&self) -> &LatticeVector {
        &self.v
    }

    pub fn w(&self) -> &LatticeVector {
        &self.w
    }

    pub fn dim_v(&self, site: Site) -> usize {
        self.v.get(site) as usize
    }

    pub fn dim_w(&self, site: Site) -> usize {
        self.w.get(site) as usize
    }

    pub fn dim(&self, space: Space) -> usize {
        match space {
            Space::V(s) => self.dim_v(s),
            Space::W(s) => self.dim_w(s),
        }
    }

    pub fn total_dim(&self) -> usize {
        (self.v.total() + self.w.total()) as usize
    }

    pub fn arrow_allowed(&self, i: usize, j: usize) -> bool {
        i == j || self.datum.sym(i, j) != 0
    }

    /// Target site of the arrow out of `from` towards node `to`.
    pub fn arrow_target(&self, from: Site, to: usize) -> Site {
        Site::new(to, from.param - self.datum.sym(from.node, to))
    }

    pub fn source(&self, key: MapKey) -> Space {
        match key {
            MapKey::Arrow { from, .. } => Space::V(from),
            MapKey::A(s) => Space::W(s),
            MapKey::B(s) => Space::V(s.shifted(-self.datum.d(s.node))),
        }
    }

    pub fn target(&self, key: MapKey) -> Space {
        match key {
            MapKey::Arrow { from, to } => Space::V(self.arrow_target(from, to)),
            MapKey::A(s) => Space::V(s.shifted(self.datum.d(s.node))),
            MapKey::B(s) => Space::W(s),
        }
    }

    pub fn shape(&self, key: MapKey) -> (usize, usize) {
        (self.dim(self.target(key)), self.dim(self.source(key)))
    }

    /// Sets a map; zero matrices are dropped so equal points compare equal.
    pub fn set_map(&mut self, key: MapKey, m: Matrix<F>) -> Result<()> {
        if let MapKey::Arrow { from, to } = key {
            if !self.arrow_allowed(from.node, to) {
                return Err(Error::ShapeMismatch(format!(
                    "no arrow between non-adjacent nodes {} and {}",
                    from.node + 1,
                    to + 1
                )));
            }
            self.datum.check_node(to)?;
        }
        let expected = self.shape(key);
        if m.shape() != expected {
            return Err(Error::ShapeMismatch(format!(
                "{key} must be {}x{}, got {}x{}",
                expected.0,
                expected.1,
                m.rows(),
                m.cols()
            )));
        }
        if m.is_zero() {
            self.maps.remove(&key);
        } else {
            self.maps.insert(key, m);
        }
        Ok(())
    }

    pub fn map(&self, key: MapKey) -> Matrix<F> {
        match self.maps.get(&key) {
            Some(m) => m.clone(),
            None => {
                let (r, c) = self.shape(key);
                Matrix::zeros(r, c)
            }
        }
    }

    pub fn stored_map(&self, key: MapKey) -> Option<&Matrix<F>> {
        self.maps.get(&key)
    }

    /// Nonzero maps in canonical order.
    pub fn maps(&self) -> impl Iterator<Item = (MapKey, &Matrix<F>)> {
        self.maps.iter().map(|(k, m)| (*k, m))
    }

    pub fn arrow(&self, from: Site, to: usize) -> Matrix<F> {
        self.map(MapKey::Arrow { from, to })
    }

    /// Composite of arrows starting at `V_start`, visiting the nodes of
    /// `steps` in order. Returns the matrix and the final site.
    pub fn path(&self, start: Site, steps: &[usize]) -> (Matrix<F>, Site) {
        let mut m = Matrix::identity(self.dim_v(start));
        let mut cur = start;
        for &to in steps {
            m = self.arrow(cur, to).mul(&m);
            cur = self.arrow_target(cur, to);
        }
        (m, cur)
    }

    /// `loop_i^k` out of `V_site`.
    pub fn loop_power(&self, site: Site, k: usize) -> Matrix<F> {
        self.path(site, &vec![site.node; k]).0
    }

    /// Every map with nonzero source and target, in canonical order.
    pub fn slots(&self) -> Vec<MapKey> {
        let mut keys = Vec::new();
        for (site, _) in self.v.iter() {
            for to in self.datum.nodes() {
                if self.arrow_allowed(site.node, to) {
                    keys.push(MapKey::Arrow { from: site, to });
                }
            }
        }
        for (site, _) in self.w.iter() {
            keys.push(MapKey::A(site));
            keys.push(MapKey::B(site));
        }
        keys.retain(|&k| {
            let (r, c) = self.shape(k);
            r > 0 && c > 0
        });
        keys.sort();
        keys
    }

    /// Number of scalar entries across [`slots`](Self::slots).
    pub fn free_entries(&self) -> usize {
        self.slots()
            .iter()
            .map(|&k| {
                let (r, c) = self.shape(k);
                r * c
            })
            .sum()
    }

    /// Sites of `V` with positive dimension.
    pub fn v_sites(&self) -> impl Iterator<Item = Site> + '_ {
        self.v.iter().map(|(s, _)| s)
    }

    pub fn is_b_zero(&self) -> bool {
        !self.maps.keys().any(|k| matches!(k, MapKey::B(_)))
    }

    /// Same point with every `B` set to zero.
    pub fn with_b_zero(&self) -> Self {
        let mut out = self.clone();
        out.maps.retain(|k, _| !matches!(k, MapKey::B(_)));
        out
    }

    /// True when every loop map is zero.
    pub fn loops_vanish(&self) -> bool {
        !self
            .maps
            .keys()
            .any(|k| matches!(k, MapKey::Arrow { from, to } if from.node == *to))
    }
}

impl<F: Scalar> fmt::Display for GradedQuiverRep<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} over {}: v = {}, w = {}", self.datum.label(), F::field_name(), self.v, self.w)?;
        for (k, m) in self.maps() {
            writeln!(f, "  {k} = {m}")?;
        }
        Ok(())
    }
}
