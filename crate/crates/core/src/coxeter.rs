//! Coxeter matrices, reflection representations and exact group elements.
//!
//! A [`Realisation`] fixes simple roots `alpha_s` in `V` and coroots
//! `alpha_s^vee` in `V*`; the generator `s` acts by
//! `v -> v - <v, alpha_s^vee> alpha_s`. Group elements are exact matrices
//! together with a witness word, and two elements are equal iff their
//! matrices are.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::field::{FieldError, FieldScalar, Rational};
use crate::linalg::Matrix;

/// Upper bound on the number of positive roots enumerated for cached
/// root data.
pub const DEFAULT_ROOT_CAP: usize = 10_000;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("unknown Coxeter type {0:?}")]
    UnknownType(String),
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),
    #[error("unsupported field: m({s},{t}) = {m} needs cos(pi/{m}) outside Q(sqrt(d))")]
    UnsupportedField { s: usize, t: usize, m: u32 },
    #[error("<alpha_{s}, alpha_{s}^vee> = {value}, expected 2")]
    RootPairing { s: usize, value: String },
    #[error("braid relation fails for generators ({s}, {t}): expected order {expected}, found {found}")]
    BraidOrder { s: usize, t: usize, expected: String, found: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("iteration cap {0} exceeded")]
    Cap(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A Coxeter matrix. Entries are `Some(m)` or `None` for `m = infinity`;
/// in serialised form infinity is written as `0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u32>>", into = "Vec<Vec<u32>>")]
pub struct CoxeterMatrix {
    entries: Vec<Vec<Option<u32>>>,
}

impl CoxeterMatrix {
    /// From integer entries, `0` meaning infinity.
    pub fn new(entries: Vec<Vec<u32>>) -> Result<Self, CoxeterError> {
        let n = entries.len();
        if n == 0 {
            return Err(CoxeterError::InvalidMatrix("rank must be positive".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(CoxeterError::InvalidMatrix(format!("row {} has length {}", i + 1, row.len())));
            }
            if row[i] != 1 {
                return Err(CoxeterError::InvalidMatrix(format!("m({0},{0}) must be 1", i + 1)));
            }
            for (j, &m) in row.iter().enumerate() {
                if m != entries[j][i] {
                    return Err(CoxeterError::InvalidMatrix("matrix is not symmetric".into()));
                }
                if i != j && m == 1 {
                    return Err(CoxeterError::InvalidMatrix(format!("m({},{}) must be at least 2", i + 1, j + 1)));
                }
            }
        }
        let entries = entries.into_iter().map(|row| row.into_iter().map(|m| (m != 0).then_some(m)).collect()).collect();
        Ok(Self { entries })
    }

    /// Built-in finite types: A1, A1xA1, A2, B2, G2, A3, B3, H3, I2(5).
    pub fn named(name: &str) -> Result<Self, CoxeterError> {
        let key: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        let m: Vec<Vec<u32>> = match key.replace('×', "x").to_ascii_uppercase().as_str() {
            "A1" => vec![vec![1]],
            "A1XA1" => vec![vec![1, 2], vec![2, 1]],
            "A2" => vec![vec![1, 3], vec![3, 1]],
            "B2" => vec![vec![1, 4], vec![4, 1]],
            "G2" => vec![vec![1, 6], vec![6, 1]],
            "I2(5)" => vec![vec![1, 5], vec![5, 1]],
            "A3" => vec![vec![1, 3, 2], vec![3, 1, 3], vec![2, 3, 1]],
            "B3" => vec![vec![1, 3, 2], vec![3, 1, 4], vec![2, 4, 1]],
            "H3" => vec![vec![1, 5, 2], vec![5, 1, 3], vec![2, 3, 1]],
            _ => return Err(CoxeterError::UnknownType(name.to_string())),
        };
        Self::new(m)
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    /// `m(s, t)`, `None` for infinity.
    pub fn get(&self, s: usize, t: usize) -> Option<u32> {
        self.entries[s][t]
    }

    pub fn is_finite_entry(&self, s: usize, t: usize) -> bool {
        self.entries[s][t].is_some()
    }
}

impl TryFrom<Vec<Vec<u32>>> for CoxeterMatrix {
    type Error = CoxeterError;
    fn try_from(v: Vec<Vec<u32>>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<CoxeterMatrix> for Vec<Vec<u32>> {
    fn from(m: CoxeterMatrix) -> Self {
        m.entries.into_iter().map(|row| row.into_iter().map(|x| x.unwrap_or(0)).collect()).collect()
    }
}

impl fmt::Display for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| {
                let r: Vec<String> = r.iter().map(|m| m.map_or_else(|| "inf".to_string(), |m| m.to_string())).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Serde adapter writing 0-based generator indices as 1-based labels.
pub mod one_based {
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(word: &[usize], ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(word.iter().map(|s| s + 1))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<usize>, D::Error> {
        let raw = Vec::<usize>::deserialize(de)?;
        raw.into_iter()
            .map(|s| s.checked_sub(1).ok_or_else(|| D::Error::custom("generator labels start at 1")))
            .collect()
    }

    /// The same for a single index.
    pub mod index {
        use serde::de::Error;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(s: &usize, ser: S) -> Result<S::Ok, S::Error> {
            ser.serialize_u64(*s as u64 + 1)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<usize, D::Error> {
            usize::deserialize(de)?.checked_sub(1).ok_or_else(|| D::Error::custom("generator labels start at 1"))
        }
    }
}

/// A group element: exact matrix plus one (not necessarily reduced) word.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupElement {
    pub matrix: Matrix,
    /// 0-based in memory, 1-based when serialised.
    #[serde(with = "one_based")]
    pub word: Vec<usize>,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.matrix.hash(state);
    }
}

impl GroupElement {
    pub fn compose(&self, other: &Self) -> Self {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Self { matrix: self.matrix.matmul(&other.matrix), word }
    }

    pub fn inverse(&self) -> Self {
        let matrix = self.matrix.inverse().expect("group elements are invertible");
        Self { matrix, word: self.word.iter().rev().copied().collect() }
    }

    pub fn act(&self, v: &[FieldScalar]) -> Vec<FieldScalar> {
        self.matrix.mul_vec(v)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    /// Smallest `k >= 1` with `self^k = e`, if at most `cap`.
    pub fn order(&self, cap: u32) -> Option<u32> {
        let mut acc = self.matrix.clone();
        for k in 1..=cap {
            if acc.is_identity() {
                return Some(k);
            }
            acc = acc.matmul(&self.matrix);
        }
        None
    }
}

/// Formats a word as `s1 s2 s1`, or `e` when empty. Labels are 1-based.
pub fn word_label(word: &[usize]) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    word.iter().map(|s| format!("s{}", s + 1)).collect::<Vec<_>>().join(" ")
}

/// A reflection `v -> v - <v, root^vee> root` for a positive root.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Reflection {
    /// Positive root in `V`.
    pub root: Vec<FieldScalar>,
    /// Coroot in `V*`, with `<root, coroot> = 2`.
    pub coroot: Vec<FieldScalar>,
    /// Coefficients of `root` in the simple roots (all nonnegative).
    pub coeffs: Vec<FieldScalar>,
    pub element: GroupElement,
}

impl PartialEq for Reflection {
    fn eq(&self, other: &Self) -> bool {
        self.element == other.element
    }
}

impl Eq for Reflection {}

impl Hash for Reflection {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.element.hash(state);
    }
}

impl Reflection {
    fn from_root(root: Vec<FieldScalar>, coroot: Vec<FieldScalar>, coeffs: Vec<FieldScalar>, word: Vec<usize>) -> Self {
        let (root, coroot, coeffs) = if coeffs.iter().any(FieldScalar::is_negative) {
            let neg = |v: Vec<FieldScalar>| v.into_iter().map(|x| -x).collect::<Vec<_>>();
            (neg(root), neg(coroot), neg(coeffs))
        } else {
            (root, coroot, coeffs)
        };
        let n = root.len();
        let mut matrix = Matrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                if !root[i].is_zero() && !coroot[j].is_zero() {
                    matrix[(i, j)] -= &(&root[i] * &coroot[j]);
                }
            }
        }
        Self { root, coroot, coeffs, element: GroupElement { matrix, word } }
    }

    pub fn fixes(&self, v: &[FieldScalar]) -> bool {
        pairing(v, &self.coroot).is_zero()
    }

    pub fn act(&self, v: &[FieldScalar]) -> Vec<FieldScalar> {
        let c = pairing(v, &self.coroot);
        v.iter().zip(&self.root).map(|(x, r)| x - &(&c * r)).collect()
    }

    /// Witness word, 1-based labels.
    pub fn label(&self) -> String {
        word_label(&self.element.word)
    }
}

/// Serialised form of a reflection: its root and a witness word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootRecord {
    pub root: Vec<FieldScalar>,
    #[serde(with = "one_based")]
    pub word: Vec<usize>,
}

impl From<&Reflection> for RootRecord {
    fn from(r: &Reflection) -> Self {
        Self { root: r.root.clone(), word: r.element.word.clone() }
    }
}

/// `<v, f>` for a vector and a covector.
pub fn pairing(v: &[FieldScalar], f: &[FieldScalar]) -> FieldScalar {
    let mut acc = FieldScalar::zero();
    for (x, y) in v.iter().zip(f) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

/// All group elements reachable by words of bounded length.
#[derive(Clone, Debug)]
pub struct GroupEnumeration {
    /// Breadth-first by word length, lexicographic within a length; each
    /// element carries its shortlex-least word.
    pub elements: Vec<GroupElement>,
    /// True when the set is closed under all generators.
    pub complete: bool,
}

/// A Coxeter matrix together with a faithful reflection representation.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RealisationData", into = "RealisationData")]
pub struct Realisation {
    coxmat: CoxeterMatrix,
    dim: usize,
    simple_roots: Vec<Vec<FieldScalar>>,
    simple_coroots: Vec<Vec<FieldScalar>>,
    generators: Vec<Matrix>,
    radicand: u32,
    positive_roots: OnceLock<Result<RootData, CoxeterError>>,
}

#[derive(Clone, Debug)]
struct RootData {
    reflections: Vec<Reflection>,
    vectors: HashSet<Vec<FieldScalar>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RealisationData {
    coxeter: CoxeterMatrix,
    roots: Vec<Vec<FieldScalar>>,
    coroots: Vec<Vec<FieldScalar>>,
}

impl TryFrom<RealisationData> for Realisation {
    type Error = CoxeterError;
    fn try_from(d: RealisationData) -> Result<Self, CoxeterError> {
        Realisation::from_roots(d.coxeter, d.roots, d.coroots)
    }
}

impl From<Realisation> for RealisationData {
    fn from(r: Realisation) -> Self {
        Self { coxeter: r.coxmat, roots: r.simple_roots, coroots: r.simple_coroots }
    }
}

fn golden_ratio() -> FieldScalar {
    let half = Rational::from_signeds(1, 2);
    FieldScalar::new(half.clone(), half, 5).expect("5 is squarefree")
}

impl Realisation {
    /// Realisation of a built-in named type.
    pub fn named(name: &str) -> Result<Self, CoxeterError> {
        Self::cartan(CoxeterMatrix::named(name)?)
    }

    /// Cartan-matrix realisation on `V = K^rank` with the simple roots as
    /// the standard basis. For `s < t` the pairings are
    /// `<alpha_s, alpha_t^vee> = -1` and `<alpha_t, alpha_s^vee> = -c` where
    /// `c = 4 cos^2(pi/m)` is 0, 1, 2, 3 for `m = 2, 3, 4, 6` and 4 for
    /// infinity (split symmetrically as -2, -2); `m = 5` uses `-phi` on both
    /// sides. Other `m` need a larger field and are rejected.
    #[allow(clippy::needless_range_loop)] // fills p[s][t] and p[t][s] together
    pub fn cartan(coxmat: CoxeterMatrix) -> Result<Self, CoxeterError> {
        let n = coxmat.rank();
        let mut p = vec![vec![FieldScalar::zero(); n]; n];
        for s in 0..n {
            p[s][s] = FieldScalar::from(2);
            for t in s + 1..n {
                let (st, ts) = match coxmat.get(s, t) {
                    Some(2) => (FieldScalar::zero(), FieldScalar::zero()),
                    Some(3) => (FieldScalar::from(-1), FieldScalar::from(-1)),
                    Some(4) => (FieldScalar::from(-1), FieldScalar::from(-2)),
                    Some(6) => (FieldScalar::from(-1), FieldScalar::from(-3)),
                    Some(5) => (-golden_ratio(), -golden_ratio()),
                    None => (FieldScalar::from(-2), FieldScalar::from(-2)),
                    Some(m) => return Err(CoxeterError::UnsupportedField { s: s + 1, t: t + 1, m }),
                };
                p[s][t] = st;
                p[t][s] = ts;
            }
        }
        let roots: Vec<Vec<FieldScalar>> = (0..n)
            .map(|s| (0..n).map(|i| if i == s { FieldScalar::one() } else { FieldScalar::zero() }).collect())
            .collect();
        // coroot t has components <e_i, alpha_t^vee> = p[i][t]
        let coroots = (0..n).map(|t| (0..n).map(|i| p[i][t].clone()).collect()).collect();
        Self::from_roots(coxmat, roots, coroots)
    }

    /// User realisation; validates root pairings and braid orders.
    pub fn from_roots(
        coxmat: CoxeterMatrix,
        roots: Vec<Vec<FieldScalar>>,
        coroots: Vec<Vec<FieldScalar>>,
    ) -> Result<Self, CoxeterError> {
        let n = coxmat.rank();
        if roots.len() != n || coroots.len() != n {
            return Err(CoxeterError::Dimension(format!(
                "rank {n} but {} roots and {} coroots",
                roots.len(),
                coroots.len()
            )));
        }
        let dim = roots[0].len();
        if dim == 0 || roots.iter().chain(&coroots).any(|v| v.len() != dim) {
            return Err(CoxeterError::Dimension("roots and coroots must share one positive dimension".into()));
        }
        let mut radicand = 0;
        for x in roots.iter().chain(&coroots).flatten() {
            match (radicand, x.radicand()) {
                (_, 0) => {}
                (0, d) => radicand = d,
                (r, d) if r == d => {}
                (r, d) => return Err(FieldError::MixedField(r, d).into()),
            }
        }
        for s in 0..n {
            let value = pairing(&roots[s], &coroots[s]);
            if value != FieldScalar::from(2) {
                return Err(CoxeterError::RootPairing { s: s + 1, value: value.to_string() });
            }
        }
        let generators: Vec<Matrix> = (0..n)
            .map(|s| {
                let mut m = Matrix::identity(dim);
                for i in 0..dim {
                    for j in 0..dim {
                        m[(i, j)] -= &(&roots[s][i] * &coroots[s][j]);
                    }
                }
                m
            })
            .collect();
        for s in 0..n {
            for t in s + 1..n {
                let Some(m) = coxmat.get(s, t) else { continue };
                let prod = generators[s].matmul(&generators[t]);
                let mut acc = prod.clone();
                let mut found = None;
                for k in 1..=m {
                    if acc.is_identity() {
                        found = Some(k);
                        break;
                    }
                    acc = acc.matmul(&prod);
                }
                if found != Some(m) {
                    return Err(CoxeterError::BraidOrder {
                        s: s + 1,
                        t: t + 1,
                        expected: m.to_string(),
                        found: found.map_or_else(|| format!("> {m}"), |k| k.to_string()),
                    });
                }
            }
        }
        Ok(Self {
            coxmat,
            dim,
            simple_roots: roots,
            simple_coroots: coroots,
            generators,
            radicand,
            positive_roots: OnceLock::new(),
        })
    }

    pub fn coxeter_matrix(&self) -> &CoxeterMatrix {
        &self.coxmat
    }

    pub fn rank(&self) -> usize {
        self.coxmat.rank()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The `d` of `Q(sqrt(d))` the realisation is defined over (0 for Q).
    pub fn radicand(&self) -> u32 {
        self.radicand
    }

    pub fn simple_root(&self, s: usize) -> &[FieldScalar] {
        &self.simple_roots[s]
    }

    pub fn simple_coroot(&self, s: usize) -> &[FieldScalar] {
        &self.simple_coroots[s]
    }

    pub fn generator_matrix(&self, s: usize) -> &Matrix {
        &self.generators[s]
    }

    /// Matrix of pairings `<alpha_i, alpha_j^vee>`.
    pub fn pairing_matrix(&self) -> Matrix {
        let n = self.rank();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = pairing(&self.simple_roots[i], &self.simple_coroots[j]);
            }
        }
        m
    }

    /// `<v, alpha_s^vee>`.
    pub fn coroot_pairing(&self, v: &[FieldScalar], s: usize) -> FieldScalar {
        pairing(v, &self.simple_coroots[s])
    }

    pub fn coroot_pairings(&self, v: &[FieldScalar]) -> Vec<FieldScalar> {
        (0..self.rank()).map(|s| self.coroot_pairing(v, s)).collect()
    }

    /// Apply the generator `s` to a vector.
    pub fn reflect(&self, s: usize, v: &[FieldScalar]) -> Vec<FieldScalar> {
        let c = self.coroot_pairing(v, s);
        if c.is_zero() {
            return v.to_vec();
        }
        v.iter().zip(&self.simple_roots[s]).map(|(x, a)| x - &(&c * a)).collect()
    }

    pub fn check_generator(&self, s: usize) -> Result<(), CoxeterError> {
        if s >= self.rank() {
            return Err(CoxeterError::GeneratorOutOfRange { index: s, rank: self.rank() });
        }
        Ok(())
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { matrix: Matrix::identity(self.dim), word: Vec::new() }
    }

    pub fn generator(&self, s: usize) -> GroupElement {
        GroupElement { matrix: self.generators[s].clone(), word: vec![s] }
    }

    /// The ordered product of generator matrices of `word`.
    pub fn element_from_word(&self, word: &[usize]) -> Result<GroupElement, CoxeterError> {
        let mut matrix = Matrix::identity(self.dim);
        for &s in word {
            self.check_generator(s)?;
            matrix = matrix.matmul(&self.generators[s]);
        }
        Ok(GroupElement { matrix, word: word.to_vec() })
    }

    /// `g * s`, extending the witness word.
    pub fn right_multiply(&self, g: &GroupElement, s: usize) -> GroupElement {
        let mut word = g.word.clone();
        word.push(s);
        GroupElement { matrix: g.matrix.matmul(&self.generators[s]), word }
    }

    /// `s * g`, extending the witness word.
    pub fn left_multiply(&self, s: usize, g: &GroupElement) -> GroupElement {
        let mut word = vec![s];
        word.extend_from_slice(&g.word);
        GroupElement { matrix: self.generators[s].matmul(&g.matrix), word }
    }

    /// The simple reflection `s` as a [`Reflection`].
    pub fn simple_reflection(&self, s: usize) -> Reflection {
        let coeffs = (0..self.rank()).map(|i| FieldScalar::from(i64::from(i == s))).collect();
        Reflection::from_root(self.simple_roots[s].clone(), self.simple_coroots[s].clone(), coeffs, vec![s])
    }

    /// `s r s` for a generator `s`. The root is renormalised to be positive.
    pub fn conjugate_by_generator(&self, s: usize, r: &Reflection) -> Reflection {
        let c = self.coroot_pairing(&r.root, s);
        let root = self.reflect(s, &r.root);
        // covector: coroot o s = coroot - <alpha_s, coroot> alpha_s^vee
        let cs = pairing(&self.simple_roots[s], &r.coroot);
        let coroot = r.coroot.iter().zip(&self.simple_coroots[s]).map(|(x, a)| x - &(&cs * a)).collect();
        let mut coeffs = r.coeffs.clone();
        coeffs[s] -= &c;
        let w = &r.element.word;
        let word = if w.len() >= 2 && w[0] == s && w[w.len() - 1] == s {
            w[1..w.len() - 1].to_vec()
        } else {
            let mut word = Vec::with_capacity(w.len() + 2);
            word.push(s);
            word.extend_from_slice(w);
            word.push(s);
            word
        };
        Reflection::from_root(root, coroot, coeffs, word)
    }

    /// `g r g^{-1}`, computed letter by letter along the witness word of `g`.
    pub fn conjugate(&self, g: &GroupElement, r: &Reflection) -> Reflection {
        let mut out = r.clone();
        for &s in g.word.iter().rev() {
            out = self.conjugate_by_generator(s, &out);
        }
        out.element.word = [g.word.clone(), r.element.word.clone(), g.word.iter().rev().copied().collect()].concat();
        out
    }

    /// Simple-root coefficients of `g(alpha_s)`, tracked formally along the
    /// witness word of `g`.
    pub fn root_image_coeffs(&self, g: &GroupElement, s: usize) -> Vec<FieldScalar> {
        let mut v = self.simple_roots[s].clone();
        let mut coeffs: Vec<FieldScalar> = (0..self.rank()).map(|i| FieldScalar::from(i64::from(i == s))).collect();
        for &t in g.word.iter().rev() {
            let c = self.coroot_pairing(&v, t);
            if c.is_zero() {
                continue;
            }
            v = self.reflect(t, &v);
            coeffs[t] -= &c;
        }
        coeffs
    }

    /// Whether `l(g s) < l(g)`, i.e. `g(alpha_s)` is a negative root.
    pub fn is_right_descent(&self, g: &GroupElement, s: usize) -> bool {
        self.root_image_coeffs(g, s).iter().any(FieldScalar::is_negative)
    }

    /// Positive roots, as reflections, found by closing the simple roots
    /// under the generators. Errors once more than `cap` are found.
    pub fn enumerate_reflections(&self, cap: usize) -> Result<Vec<Reflection>, CoxeterError> {
        let mut seen: HashMap<Vec<FieldScalar>, ()> = HashMap::new();
        let mut out: Vec<Reflection> = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..self.rank() {
            let r = self.simple_reflection(s);
            if seen.insert(r.coeffs.clone(), ()).is_none() {
                queue.push_back(out.len());
                out.push(r);
            }
        }
        while let Some(i) = queue.pop_front() {
            for s in 0..self.rank() {
                let r = self.conjugate_by_generator(s, &out[i]);
                if seen.contains_key(&r.coeffs) {
                    continue;
                }
                if out.len() >= cap {
                    return Err(CoxeterError::Cap(cap));
                }
                seen.insert(r.coeffs.clone(), ());
                queue.push_back(out.len());
                out.push(r);
            }
        }
        Ok(out)
    }

    fn root_data(&self) -> Result<&RootData, CoxeterError> {
        self.positive_roots
            .get_or_init(|| {
                let reflections = self.enumerate_reflections(DEFAULT_ROOT_CAP)?;
                let vectors = reflections.iter().map(|r| r.root.clone()).collect();
                Ok(RootData { reflections, vectors })
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Positive roots cached at [`DEFAULT_ROOT_CAP`].
    pub fn positive_roots(&self) -> Result<&[Reflection], CoxeterError> {
        Ok(&self.root_data()?.reflections)
    }

    /// Number of positive roots sent to negative roots by `g`.
    pub fn length(&self, g: &GroupElement) -> Result<usize, CoxeterError> {
        let data = self.root_data()?;
        Ok(data.reflections.iter().filter(|r| !data.vectors.contains(&g.act(&r.root))).count())
    }

    /// All elements expressible by words of length at most `cap`.
    pub fn enumerate_group(&self, cap: usize) -> GroupEnumeration {
        let mut index: HashMap<Matrix, usize> = HashMap::new();
        let mut elements = vec![self.identity()];
        index.insert(elements[0].matrix.clone(), 0);
        let mut level_start = 0;
        for level in 0.. {
            let level_end = elements.len();
            for i in level_start..level_end {
                for s in 0..self.rank() {
                    let g = self.right_multiply(&elements[i], s);
                    if index.contains_key(&g.matrix) {
                        continue;
                    }
                    if level == cap {
                        return GroupEnumeration { elements, complete: false };
                    }
                    index.insert(g.matrix.clone(), elements.len());
                    elements.push(g);
                }
            }
            if elements.len() == level_end {
                break;
            }
            level_start = level_end;
        }
        let complete = true;
        GroupEnumeration { elements, complete }
    }
}
