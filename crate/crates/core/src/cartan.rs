//! Finite-type Cartan data, root systems and Weyl group enumeration.
//!
//! Nodes are indexed from zero internally. Every external surface (labels,
//! JSON, CLI) uses one-based node numbers.
//!
//! Conventions: `d_ij = (α_i, α_j)` with short roots normalized to
//! `d_ii = 2`, `c_ij = 2 d_ij / d_ii`, `d_i = d_ii / 2`. The simple root
//! `α_j` expands as `Σ_i c_ij ω_i`, so `s_i(α_j) = α_j − c_ij α_i` and
//! `s_i(ω_j) = ω_j − δ_ij α_i`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Default bound on `|W|` for full enumeration.
pub const DEFAULT_WEYL_CAP: usize = 2000;

/// Dynkin type of a simple Lie algebra of finite type.
///
/// `B_n` and `C_n` number the double bond from node 1: in `B_n` node 1 is
/// the unique short node, in `C_n` node 1 is the unique long node. `D_n`,
/// `E_n` and `F_4` follow Bourbaki; in `G_2` node 1 is short.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CartanType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
}

impl CartanType {
    pub fn rank(self) -> usize {
        match self {
            CartanType::A(n)
            | CartanType::B(n)
            | CartanType::C(n)
            | CartanType::D(n)
            | CartanType::E(n) => n,
            CartanType::F4 => 4,
            CartanType::G2 => 2,
        }
    }

    fn is_valid(self) -> bool {
        match self {
            CartanType::A(n) => (1..=8).contains(&n),
            CartanType::B(n) | CartanType::C(n) => (2..=8).contains(&n),
            CartanType::D(n) => (4..=8).contains(&n),
            CartanType::E(n) => (6..=8).contains(&n),
            CartanType::F4 | CartanType::G2 => true,
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A(n) => write!(f, "A{n}"),
            CartanType::B(n) => write!(f, "B{n}"),
            CartanType::C(n) => write!(f, "C{n}"),
            CartanType::D(n) => write!(f, "D{n}"),
            CartanType::E(n) => write!(f, "E{n}"),
            CartanType::F4 => write!(f, "F4"),
            CartanType::G2 => write!(f, "G2"),
        }
    }
}

impl FromStr for CartanType {
    type Err = Error;

    /// Accepts `A2`, `a2`, `A_2`.
    fn from_str(s: &str) -> Result<Self> {
        let unsupported = || Error::UnsupportedType(s.to_string());
        let trimmed = s.trim();
        let mut chars = trimmed.chars();
        let letter = chars.next().ok_or_else(unsupported)?.to_ascii_uppercase();
        let rest = chars.as_str().trim_start_matches('_');
        let n: usize = rest.parse().map_err(|_| unsupported())?;
        let kind = match (letter, n) {
            ('A', n) => CartanType::A(n),
            ('B', n) => CartanType::B(n),
            ('C', n) => CartanType::C(n),
            ('D', n) => CartanType::D(n),
            ('E', n) => CartanType::E(n),
            ('F', 4) => CartanType::F4,
            ('G', 2) => CartanType::G2,
            _ => return Err(unsupported()),
        };
        if kind.is_valid() {
            Ok(kind)
        } else {
            Err(unsupported())
        }
    }
}

/// Symmetrized Cartan data of a finite type together with its positive roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanDatum {
    kind: CartanType,
    sym: Vec<Vec<i32>>,
    cartan: Vec<Vec<i32>>,
    d: Vec<i32>,
    positive_roots: Vec<Vec<i32>>,
}

impl CartanDatum {
    pub fn new(kind: CartanType) -> Result<Self> {
        if !kind.is_valid() {
            return Err(Error::UnsupportedType(kind.to_string()));
        }
        let n = kind.rank();
        let mut diag = vec![2; n];
        // (i, j, d_ij) for bonded pairs, zero-based
        let mut bonds: Vec<(usize, usize, i32)> = Vec::new();
        match kind {
            CartanType::A(_) => {
                for i in 0..n - 1 {
                    bonds.push((i, i + 1, -1));
                }
            }
            CartanType::B(_) => {
                for d in diag.iter_mut().skip(1) {
                    *d = 4;
                }
                for i in 0..n - 1 {
                    bonds.push((i, i + 1, -2));
                }
            }
            CartanType::C(_) => {
                diag[0] = 4;
                bonds.push((0, 1, -2));
                for i in 1..n - 1 {
                    bonds.push((i, i + 1, -1));
                }
            }
            CartanType::D(_) => {
                for i in 0..n - 2 {
                    bonds.push((i, i + 1, -1));
                }
                bonds.push((n - 3, n - 1, -1));
            }
            CartanType::E(_) => {
                bonds.push((0, 2, -1));
                bonds.push((1, 3, -1));
                for i in 2..n - 1 {
                    bonds.push((i, i + 1, -1));
                }
            }
            CartanType::F4 => {
                diag = vec![4, 4, 2, 2];
                bonds.push((0, 1, -2));
                bonds.push((1, 2, -2));
                bonds.push((2, 3, -1));
            }
            CartanType::G2 => {
                diag = vec![2, 6];
                bonds.push((0, 1, -3));
            }
        }
        let mut sym = vec![vec![0; n]; n];
        for (i, row) in sym.iter_mut().enumerate() {
            row[i] = diag[i];
        }
        for &(i, j, v) in &bonds {
            sym[i][j] = v;
            sym[j][i] = v;
        }
        let cartan: Vec<Vec<i32>> = (0..n)
            .map(|i| (0..n).map(|j| 2 * sym[i][j] / sym[i][i]).collect())
            .collect();
        let d = diag.iter().map(|x| x / 2).collect();
        let mut datum = CartanDatum {
            kind,
            sym,
            cartan,
            d,
            positive_roots: Vec::new(),
        };
        datum.positive_roots = datum.compute_positive_roots();
        Ok(datum)
    }

    pub fn from_label(label: &str) -> Result<Self> {
        Self::new(label.parse()?)
    }

    pub fn kind(&self) -> CartanType {
        self.kind
    }

    pub fn label(&self) -> String {
        self.kind.to_string()
    }

    pub fn rank(&self) -> usize {
        self.sym.len()
    }

    pub fn nodes(&self) -> std::ops::Range<usize> {
        0..self.rank()
    }

    /// Symmetrized entry `d_ij = (α_i, α_j)`.
    pub fn sym(&self, i: usize, j: usize) -> i32 {
        self.sym[i][j]
    }

    /// Cartan entry `c_ij = 2 d_ij / d_ii`.
    pub fn c(&self, i: usize, j: usize) -> i32 {
        self.cartan[i][j]
    }

    /// Symmetrizer `d_i = d_ii / 2`.
    pub fn d(&self, i: usize) -> i32 {
        self.d[i]
    }

    pub fn symmetrized_matrix(&self) -> &[Vec<i32>] {
        &self.sym
    }

    pub fn cartan_matrix(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    /// Order of `s_i s_j`.
    pub fn coxeter_m(&self, i: usize, j: usize) -> usize {
        if i == j {
            return 1;
        }
        match self.c(i, j) * self.c(j, i) {
            0 => 2,
            1 => 3,
            2 => 4,
            3 => 6,
            other => unreachable!("finite type has c_ij c_ji <= 3, got {other}"),
        }
    }

    /// Nodes `j != i` joined to `i` by a bond.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.nodes().filter(move |&j| j != i && self.sym[i][j] != 0)
    }

    pub fn is_simply_laced(&self) -> bool {
        self.d.iter().all(|&d| d == 1)
    }

    pub fn check_node(&self, node: usize) -> Result<()> {
        if node < self.rank() {
            Ok(())
        } else {
            Err(Error::InvalidNode {
                node: node + 1,
                rank: self.rank(),
            })
        }
    }

    /// Positive roots in simple-root coordinates, sorted by height then lex.
    pub fn positive_roots(&self) -> &[Vec<i32>] {
        &self.positive_roots
    }

    fn compute_positive_roots(&self) -> Vec<Vec<i32>> {
        let n = self.rank();
        let mut seen: HashSet<Vec<i32>> = HashSet::new();
        let mut queue: VecDeque<Vec<i32>> = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        while let Some(root) = queue.pop_front() {
            for i in 0..n {
                let image = self.reflect_root(i, &root);
                if image.iter().all(|&x| x >= 0) && seen.insert(image.clone()) {
                    queue.push_back(image);
                }
            }
        }
        let mut roots: Vec<Vec<i32>> = seen.into_iter().collect();
        roots.sort_by_key(|r| (r.iter().sum::<i32>(), r.clone()));
        roots
    }

    /// `s_i` on simple-root coordinates.
    pub fn reflect_root(&self, i: usize, root: &[i32]) -> Vec<i32> {
        let mut out = root.to_vec();
        out[i] -= (0..self.rank()).map(|j| self.c(i, j) * root[j]).sum::<i32>();
        out
    }

    /// Matrix of `s_i` on the simple-root lattice (column `j` is `s_i(α_j)`).
    pub fn simple_reflection(&self, i: usize) -> RootMatrix {
        let n = self.rank();
        let mut m = RootMatrix::identity(n);
        for j in 0..n {
            m.set(i, j, m.get(i, j) - self.c(i, j));
        }
        m
    }

    /// All elements of `W`, identity first, in breadth-first order. The word
    /// of each element is the BFS path, hence reduced.
    pub fn weyl_elements(&self, cap: usize) -> Result<Vec<WeylElement>> {
        let n = self.rank();
        let gens: Vec<RootMatrix> = (0..n).map(|i| self.simple_reflection(i)).collect();
        let identity = WeylElement {
            word: Vec::new(),
            matrix: RootMatrix::identity(n),
        };
        let mut index: HashMap<RootMatrix, usize> = HashMap::new();
        index.insert(identity.matrix.clone(), 0);
        let mut elements = vec![identity];
        let mut cursor = 0;
        while cursor < elements.len() {
            for (j, g) in gens.iter().enumerate() {
                let matrix = elements[cursor].matrix.mul(g);
                if index.contains_key(&matrix) {
                    continue;
                }
                if elements.len() >= cap {
                    return Err(Error::CapExceeded {
                        what: format!("Weyl group of {}", self.label()),
                        cap,
                    });
                }
                let mut word = elements[cursor].word.clone();
                word.push(j);
                index.insert(matrix.clone(), elements.len());
                elements.push(WeylElement { word, matrix });
            }
            cursor += 1;
        }
        Ok(elements)
    }

    /// `s_i` on a weight given in the fundamental-weight basis:
    /// `θ̄_j = θ_j − θ_i c_ji`.
    pub fn reflect_weight(&self, i: usize, theta: &WeightVector) -> WeightVector {
        let ti = theta.0[i];
        WeightVector(
            (0..self.rank())
                .map(|j| theta.0[j] - ti * Rational64::from_integer(self.c(j, i) as i64))
                .collect(),
        )
    }

    /// `(θ, α) = Σ_i n_i d_i θ_i` for `α = Σ n_i α_i`.
    pub fn pair_with_root(&self, theta: &WeightVector, root: &[i32]) -> Rational64 {
        root.iter()
            .enumerate()
            .map(|(i, &n)| theta.0[i] * Rational64::from_integer((n * self.d(i)) as i64))
            .sum()
    }

    /// True iff `θ` lies on no root hyperplane.
    pub fn is_generic(&self, theta: &WeightVector) -> bool {
        self.positive_roots
            .iter()
            .all(|root| !self.pair_with_root(theta, root).is_zero())
    }

    /// `s_i` on an integral weight in the fundamental-weight basis.
    pub fn reflect_integral_weight(&self, i: usize, weight: &[i64]) -> Vec<i64> {
        let wi = weight[i];
        (0..self.rank())
            .map(|j| weight[j] - wi * self.c(j, i) as i64)
            .collect()
    }

    /// `α_i` in the fundamental-weight basis (`Σ_j c_ji ω_j`).
    pub fn simple_root_weight(&self, i: usize) -> Vec<i64> {
        (0..self.rank()).map(|j| self.c(j, i) as i64).collect()
    }

    /// Size of the `W`-orbit of an integral weight.
    pub fn weight_orbit_size(&self, weight: &[i64]) -> usize {
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        seen.insert(weight.to_vec());
        let mut queue = VecDeque::from([weight.to_vec()]);
        while let Some(w) = queue.pop_front() {
            for i in self.nodes() {
                let image = self.reflect_integral_weight(i, &w);
                if seen.insert(image.clone()) {
                    queue.push_back(image);
                }
            }
        }
        seen.len()
    }

    /// The negative chamber point `θ = −Σ ω_i`.
    pub fn negative_chamber_theta(&self) -> WeightVector {
        WeightVector(vec![Rational64::from_integer(-1); self.rank()])
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Canonical<'a> {
            label: String,
            d: &'a [Vec<i32>],
            c: &'a [Vec<i32>],
        }
        serde_json::to_value(Canonical {
            label: self.label(),
            d: &self.sym,
            c: &self.cartan,
        })
        .expect("plain integer data serializes")
    }
}

/// Square integer matrix acting on simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootMatrix {
    n: usize,
    data: Vec<i32>,
}

impl RootMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        RootMatrix { n, data }
    }

    pub fn get(&self, r: usize, c: usize) -> i32 {
        self.data[r * self.n + c]
    }

    fn set(&mut self, r: usize, c: usize, v: i32) {
        self.data[r * self.n + c] = v;
    }

    pub fn mul(&self, other: &RootMatrix) -> RootMatrix {
        let n = self.n;
        let mut data = vec![0; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == 0 {
                    continue;
                }
                for c in 0..n {
                    data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        RootMatrix { n, data }
    }

    pub fn apply(&self, v: &[i32]) -> Vec<i32> {
        (0..self.n)
            .map(|r| (0..self.n).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    pub fn column(&self, c: usize) -> Vec<i32> {
        (0..self.n).map(|r| self.get(r, c)).collect()
    }
}

/// Weyl group element with a stored reduced word.
///
/// The word `[j_1, …, j_t]` denotes `s_{j_1} ⋯ s_{j_t}`; actions apply the
/// last letter first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub word: Vec<usize>,
    pub matrix: RootMatrix,
}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.word.len()
    }

    /// Number of positive roots sent to negative roots.
    pub fn inversion_count(&self, datum: &CartanDatum) -> usize {
        datum
            .positive_roots()
            .iter()
            .filter(|r| self.matrix.apply(r).iter().all(|&x| x <= 0))
            .count()
    }

    /// Nodes `j` with `ℓ(w s_j) < ℓ(w)`, i.e. `w(α_j) < 0`.
    pub fn right_descents(&self) -> Vec<usize> {
        (0..self.matrix.n)
            .filter(|&j| self.matrix.column(j).iter().all(|&x| x <= 0))
            .collect()
    }

    pub fn act_on_weight(&self, datum: &CartanDatum, theta: &WeightVector) -> WeightVector {
        self.word
            .iter()
            .rev()
            .fold(theta.clone(), |acc, &i| datum.reflect_weight(i, &acc))
    }

    pub fn act_on_integral_weight(&self, datum: &CartanDatum, weight: &[i64]) -> Vec<i64> {
        self.word
            .iter()
            .rev()
            .fold(weight.to_vec(), |acc, &i| datum.reflect_integral_weight(i, &acc))
    }

    /// Every reduced word of this element, sorted. Stops with `CapExceeded`
    /// past `limit` words.
    pub fn reduced_words(&self, datum: &CartanDatum, limit: usize) -> Result<Vec<Vec<usize>>> {
        let mut memo: HashMap<RootMatrix, Vec<Vec<usize>>> = HashMap::new();
        let mut words = reduced_words_of(datum, &self.matrix, &mut memo, limit)?;
        words.sort();
        Ok(words)
    }

    /// A reduced word different from the stored one, when the element has
    /// more than one.
    pub fn alternate_reduced_word(&self, datum: &CartanDatum) -> Option<Vec<usize>> {
        for pick_max in [true, false] {
            let mut word = Vec::new();
            let mut m = self.matrix.clone();
            loop {
                let current = WeylElement {
                    word: Vec::new(),
                    matrix: m.clone(),
                };
                let descents = current.right_descents();
                let j = if pick_max {
                    descents.iter().max()
                } else {
                    descents.iter().min()
                };
                let Some(&j) = j else { break };
                word.push(j);
                m = m.mul(&datum.simple_reflection(j));
            }
            word.reverse();
            if word != self.word {
                return Some(word);
            }
        }
        None
    }
}

fn reduced_words_of(
    datum: &CartanDatum,
    m: &RootMatrix,
    memo: &mut HashMap<RootMatrix, Vec<Vec<usize>>>,
    limit: usize,
) -> Result<Vec<Vec<usize>>> {
    if let Some(w) = memo.get(m) {
        return Ok(w.clone());
    }
    let probe = WeylElement {
        word: Vec::new(),
        matrix: m.clone(),
    };
    let descents = probe.right_descents();
    let mut out = Vec::new();
    if descents.is_empty() {
        out.push(Vec::new());
    }
    for j in descents {
        let shorter = m.mul(&datum.simple_reflection(j));
        for mut w in reduced_words_of(datum, &shorter, memo, limit)? {
            w.push(j);
            out.push(w);
            if out.len() > limit {
                return Err(Error::CapExceeded {
                    what: "reduced word count".into(),
                    cap: limit,
                });
            }
        }
    }
    memo.insert(m.clone(), out.clone());
    Ok(out)
}

/// Weight in the fundamental-weight basis with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector(pub Vec<Rational64>);

impl WeightVector {
    pub fn from_integers(coeffs: &[i64]) -> Self {
        WeightVector(coeffs.iter().map(|&x| Rational64::from_integer(x)).collect())
    }

    pub fn coeff(&self, i: usize) -> Rational64 {
        self.0[i]
    }

    pub fn is_negative_at(&self, i: usize) -> bool {
        self.0[i].is_negative()
    }

    pub fn is_in_negative_chamber(&self) -> bool {
        self.0.iter().all(|x| x.is_negative())
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl FromStr for WeightVector {
    type Err = Error;

    /// Comma-separated rationals, e.g. `-1,1/2`.
    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|part| {
                part.trim()
                    .parse::<Rational64>()
                    .map_err(|_| Error::Parse(format!("bad rational `{part}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(WeightVector)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(label: &str) -> CartanDatum {
        CartanDatum::from_label(label).unwrap()
    }

    /// Finite type test: leading principal minors of the symmetrized matrix
    /// are positive.
    fn positive_definite(m: &[Vec<i32>]) -> bool {
        let n = m.len();
        (1..=n).all(|k| {
            let mut a: Vec<Vec<f64>> = (0..k)
                .map(|r| (0..k).map(|c| m[r][c] as f64).collect())
                .collect();
            let mut det = 1.0;
            for col in 0..k {
                let pivot = (col..k).find(|&r| a[r][col].abs() > 1e-12);
                let Some(p) = pivot else { return false };
                a.swap(col, p);
                if p != col {
                    det = -det;
                }
                det *= a[col][col];
                for r in col + 1..k {
                    let f = a[r][col] / a[col][col];
                    for c in col..k {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
            det > 0.0
        })
    }

    #[test]
    fn rank_one_data() {
        let a1 = datum("A1");
        assert_eq!(a1.symmetrized_matrix(), &[vec![2]]);
        assert_eq!(a1.cartan_matrix(), &[vec![2]]);
        assert_eq!(a1.d(0), 1);
    }

    #[test]
    fn b2_and_g2_entries() {
        let b2 = datum("B2");
        assert_eq!((b2.sym(0, 0), b2.sym(1, 1), b2.sym(0, 1)), (2, 4, -2));
        assert_eq!((b2.c(0, 1), b2.c(1, 0)), (-2, -1));
        assert_eq!((b2.d(0), b2.d(1)), (1, 2));
        let g2 = datum("G2");
        assert_eq!((g2.sym(0, 0), g2.sym(1, 1), g2.sym(0, 1)), (2, 6, -3));
        assert_eq!((g2.c(0, 1), g2.c(1, 0)), (-3, -1));
    }

    #[test]
    fn invariants_hold_for_every_type() {
        let labels = [
            "A1", "A2", "A3", "A4", "A8", "B2", "B3", "B4", "B8", "C2", "C3", "C4", "D4", "D5",
            "D8", "E6", "E7", "E8", "F4", "G2",
        ];
        for label in labels {
            let dt = datum(label);
            let n = dt.rank();
            for i in 0..n {
                assert!([2, 4, 6].contains(&dt.sym(i, i)), "{label}");
                assert_eq!(dt.c(i, i), 2);
                for j in 0..n {
                    assert_eq!(dt.sym(i, j), dt.sym(j, i));
                    if i != j {
                        assert!(dt.sym(i, j) <= 0);
                        assert!([0, -1, -2, -3].contains(&dt.c(i, j)));
                        assert_eq!(dt.c(i, j) == 0, dt.c(j, i) == 0);
                        if dt.c(j, i) <= -2 {
                            assert_eq!(dt.d(j), 1, "{label} {i} {j}");
                        }
                    }
                }
            }
            assert!(positive_definite(dt.symmetrized_matrix()), "{label}");
            assert_eq!(dt.d.iter().min(), Some(&1));
        }
    }

    #[test]
    fn positive_root_counts() {
        for (label, count) in [
            ("A2", 3),
            ("A3", 6),
            ("B2", 4),
            ("B3", 9),
            ("C3", 9),
            ("D4", 12),
            ("G2", 6),
            ("F4", 24),
            ("E6", 36),
            ("E8", 120),
        ] {
            assert_eq!(datum(label).positive_roots().len(), count, "{label}");
        }
    }

    #[test]
    fn unsupported_labels() {
        for bad in ["X9", "A0", "B1", "D3", "E5", "E9", "F3", "G3", "A9", ""] {
            assert!(matches!(
                CartanDatum::from_label(bad),
                Err(Error::UnsupportedType(_))
            ));
        }
        assert_eq!(datum("a_3").label(), "A3");
    }

    /// Brute-force closure of the generator matrices, independent of the
    /// BFS bookkeeping.
    fn brute_force_order(dt: &CartanDatum) -> (usize, usize) {
        let gens: Vec<RootMatrix> = dt.nodes().map(|i| dt.simple_reflection(i)).collect();
        let mut all: HashSet<RootMatrix> = HashSet::new();
        all.insert(RootMatrix::identity(dt.rank()));
        loop {
            let before = all.len();
            let snapshot: Vec<RootMatrix> = all.iter().cloned().collect();
            for m in snapshot {
                for g in &gens {
                    all.insert(g.mul(&m));
                }
            }
            if all.len() == before {
                break;
            }
        }
        // longest element sends every positive root negative
        let n_pos = dt.positive_roots().len();
        (all.len(), n_pos)
    }

    #[test]
    fn weyl_orders_and_longest_words() {
        for (label, order, longest) in [("A2", 6, 3), ("B2", 8, 4), ("G2", 12, 6)] {
            let dt = datum(label);
            let elems = dt.weyl_elements(DEFAULT_WEYL_CAP).unwrap();
            let (brute, n_pos) = brute_force_order(&dt);
            assert_eq!(elems.len(), order);
            assert_eq!(brute, order);
            assert_eq!(elems.iter().map(|e| e.length()).max(), Some(longest));
            assert_eq!(n_pos, longest);
            assert!(elems[0].word.is_empty());
        }
        for (label, order) in [("A3", 24), ("B3", 48), ("C3", 48), ("D4", 192), ("F4", 1152)] {
            assert_eq!(datum(label).weyl_elements(DEFAULT_WEYL_CAP).unwrap().len(), order);
        }
    }

    #[test]
    fn weyl_cap_is_enforced() {
        assert!(matches!(
            datum("E6").weyl_elements(DEFAULT_WEYL_CAP),
            Err(Error::CapExceeded { .. })
        ));
        assert_eq!(datum("A3").weyl_elements(24).unwrap().len(), 24);
        assert!(datum("A3").weyl_elements(23).is_err());
    }

    #[test]
    fn elements_are_consistent() {
        for label in ["A3", "B3", "C3", "G2"] {
            let dt = datum(label);
            let elems = dt.weyl_elements(DEFAULT_WEYL_CAP).unwrap();
            let set: HashSet<&RootMatrix> = elems.iter().map(|e| &e.matrix).collect();
            assert_eq!(set.len(), elems.len());
            for e in &elems {
                let product = e.word.iter().fold(RootMatrix::identity(dt.rank()), |acc, &i| {
                    acc.mul(&dt.simple_reflection(i))
                });
                assert_eq!(product, e.matrix);
                assert_eq!(e.length(), e.inversion_count(&dt));
                for i in dt.nodes() {
                    assert!(set.contains(&e.matrix.mul(&dt.simple_reflection(i))));
                }
            }
        }
    }

    #[test]
    fn inversion_sequence_is_positive() {
        for label in ["A1", "A2", "A3", "B2", "B3", "C3", "G2"] {
            let dt = datum(label);
            for e in dt.weyl_elements(DEFAULT_WEYL_CAP).unwrap() {
                // word = s_{i_t} ... s_{i_1}: i_1 is the last letter
                let applied: Vec<usize> = e.word.iter().rev().copied().collect();
                for u in 0..applied.len() {
                    let mut root = vec![0; dt.rank()];
                    root[applied[u]] = 1;
                    for &k in applied[..u].iter().rev() {
                        root = dt.reflect_root(k, &root);
                    }
                    assert!(root.iter().all(|&x| x >= 0), "{label} {:?}", e.word);
                }
            }
        }
    }

    #[test]
    fn negative_chamber_stays_negative_along_reduced_words() {
        for label in ["A2", "A3", "B2", "B3", "C3", "G2"] {
            let dt = datum(label);
            let theta = WeightVector(
                (0..dt.rank())
                    .map(|i| Rational64::new(-(i as i64) - 2, 3))
                    .collect(),
            );
            for e in dt.weyl_elements(DEFAULT_WEYL_CAP).unwrap() {
                let mut t = theta.clone();
                for &i in e.word.iter().rev() {
                    assert!(t.is_negative_at(i));
                    t = dt.reflect_weight(i, &t);
                }
            }
        }
    }

    #[test]
    fn braid_relations_of_generators() {
        for label in ["A3", "B3", "C3", "D4", "G2", "F4"] {
            let dt = datum(label);
            for i in dt.nodes() {
                for j in dt.nodes() {
                    let m = dt.coxeter_m(i, j);
                    let si = dt.simple_reflection(i);
                    let sj = dt.simple_reflection(j);
                    let mut p = RootMatrix::identity(dt.rank());
                    for _ in 0..m {
                        p = p.mul(&si).mul(&sj);
                    }
                    assert_eq!(p, RootMatrix::identity(dt.rank()));
                }
            }
        }
    }

    #[test]
    fn reflect_weight_examples() {
        let a1 = datum("A1");
        let th = WeightVector::from_integers(&[3]);
        assert_eq!(a1.reflect_weight(0, &th), WeightVector::from_integers(&[-3]));
        let b2 = datum("B2");
        let th: WeightVector = "2,5".parse().unwrap();
        // matrix reflection oracle on root coordinates: θ̄ = θ − θ_1 α_1, α_1 = 2ω_1 − ω_2
        assert_eq!(b2.reflect_weight(0, &th), WeightVector::from_integers(&[-2, 7]));
        let g2 = datum("G2");
        let th: WeightVector = "-1/2,3".parse().unwrap();
        let twice = g2.reflect_weight(1, &g2.reflect_weight(1, &th));
        assert_eq!(twice, th);
    }

    #[test]
    fn genericity_examples() {
        let a2 = datum("A2");
        assert!(a2.is_generic(&WeightVector::from_integers(&[-1, -1])));
        assert!(!a2.is_generic(&WeightVector::from_integers(&[1, -1])));
        assert!(!datum("A1").is_generic(&WeightVector::from_integers(&[0])));
        let b2 = datum("B2");
        // (θ, 2α_1 + α_2) = 2θ_1 + 2θ_2
        assert!(!b2.is_generic(&WeightVector::from_integers(&[1, -1])));
        assert!(!b2.is_generic(&WeightVector::from_integers(&[2, -1])));
        assert!(b2.is_generic(&WeightVector::from_integers(&[3, -1])));
    }

    #[test]
    fn reduced_words_of_longest_elements() {
        let count = |label: &str| {
            let dt = datum(label);
            let elems = dt.weyl_elements(DEFAULT_WEYL_CAP).unwrap();
            let w0 = elems.last().unwrap();
            w0.reduced_words(&dt, 10_000).unwrap().len()
        };
        assert_eq!(count("A2"), 2);
        assert_eq!(count("B2"), 2);
        assert_eq!(count("G2"), 2);
        assert_eq!(count("A3"), 16);
        assert_eq!(count("B3"), 42);
    }

    #[test]
    fn alternate_words_are_reduced_and_distinct() {
        let dt = datum("B3");
        for e in dt.weyl_elements(DEFAULT_WEYL_CAP).unwrap() {
            let n_words = e.reduced_words(&dt, 1000).unwrap().len();
            match e.alternate_reduced_word(&dt) {
                Some(w) => {
                    assert_ne!(w, e.word);
                    assert_eq!(w.len(), e.word.len());
                    let m = w.iter().fold(RootMatrix::identity(3), |acc, &i| {
                        acc.mul(&dt.simple_reflection(i))
                    });
                    assert_eq!(m, e.matrix);
                }
                None => assert_eq!(n_words, 1),
            }
        }
    }

    #[test]
    fn canonical_json() {
        let json = datum("B2").to_json();
        assert_eq!(
            json.to_string(),
            r#"{"c":[[2,-2],[-1,2]],"d":[[2,-2],[-2,4]],"label":"B2"}"#
        );
    }
}
