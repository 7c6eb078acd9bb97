//! Brute-force realisation of `B(s, ..., u) (x)_R K_a` as a finite
//! dimensional `R`-module, given by exact commuting matrices for the
//! coordinate functions `x_1, ..., x_n` of `V`.
//!
//! `B_r (x)_R M = R (x)_{R^r} M` for a reflection `r` with root `beta` and
//! coroot `beta^vee`. Since `R = R^r (+) R^r beta^vee` (characteristic 0),
//! the module is `(1 (x) M) (+) (beta^vee (x) M)`. A linear coordinate `x`
//! splits as `x = P + beta^vee Q` with `P = x - (x(beta)/2) beta^vee`
//! invariant and `Q = x(beta)/2` constant, so on the two blocks
//!
//! ```text
//! x = [ P_M    (beta^vee)^2_M Q ]
//!     [ Q      P_M              ]
//! ```
//!
//! Supports are found exactly: a generic linear form separates the orbit
//! points, its characteristic polynomial gives candidate multiplicities,
//! and each generalized eigenspace is certified by checking that every
//! `x_i - p_i` is nilpotent on it.

use indexmap::IndexMap;
use serde::Serialize;

use crate::coxeter::{GroupElement, Realisation, Reflection};
use crate::engine::{specialise_with_table, BsWord, Decomposition};
use crate::field::FieldScalar;
use crate::linalg::{root_multiplicity, Matrix};
use crate::tits::{OrbitTable, Point, TitsError};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("support outside orbit: orbit points account for {found} of {dim} dimensions")]
    SupportOutsideOrbit { found: usize, dim: usize },
    #[error("module is not supported at the single point {0}")]
    NotLocal(Point),
    #[error("module dimension {module} does not match realisation dimension {real}")]
    Dimension { module: usize, real: usize },
    #[error(transparent)]
    Tits(#[from] TitsError),
}

/// A finite-dimensional module over `R = K[V]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinModule {
    /// Action of each coordinate function of `V`.
    pub actions: Vec<Matrix>,
    /// Per basis vector, which tensor factors carry the anti-invariant form
    /// (`1`) or the unit (`0`), leftmost letter first.
    pub basis_labels: Vec<String>,
}

impl FinModule {
    pub fn dim(&self) -> usize {
        self.actions.first().map_or(0, Matrix::rows)
    }

    /// Whether all action matrices pairwise commute.
    pub fn commutes(&self) -> bool {
        let n = self.actions.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| self.actions[i].matmul(&self.actions[j]) == self.actions[j].matmul(&self.actions[i]))
        })
    }

    /// Action of the linear form `f = sum f_i x_i`.
    pub fn linear_action(&self, f: &[FieldScalar]) -> Matrix {
        let mut acc = Matrix::zeros(self.dim(), self.dim());
        for (c, x) in f.iter().zip(&self.actions) {
            if !c.is_zero() {
                acc = acc.add(&x.scale(c));
            }
        }
        acc
    }
}

/// `K_a = R / m_a`: each coordinate acts by its value at `a`.
pub fn point_module(a: &Point) -> FinModule {
    FinModule {
        actions: a.coords().iter().map(|c| Matrix::scalar(1, c.clone())).collect(),
        basis_labels: vec![String::new()],
    }
}

/// `B_r (x)_R M` for the reflection with the given root and coroot.
pub fn apply_reflection(m: &FinModule, root: &[FieldScalar], coroot: &[FieldScalar]) -> FinModule {
    let n = m.dim();
    let a = m.linear_action(coroot);
    let a2 = a.matmul(&a);
    let two = FieldScalar::from(2);
    let actions = m
        .actions
        .iter()
        .zip(root)
        .map(|(x, beta_i)| {
            let q = beta_i / &two;
            let p = if q.is_zero() { x.clone() } else { x.sub(&a.scale(&q)) };
            let upper = a2.scale(&q);
            let mut out = Matrix::zeros(2 * n, 2 * n);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] = p[(i, j)].clone();
                    out[(n + i, n + j)] = p[(i, j)].clone();
                    out[(i, n + j)] = upper[(i, j)].clone();
                }
                out[(n + i, i)] = q.clone();
            }
            out
        })
        .collect();
    let basis_labels = ["0", "1"].iter().flat_map(|h| m.basis_labels.iter().map(move |l| format!("{h}{l}"))).collect();
    FinModule { actions, basis_labels }
}

/// `B_s (x)_R M` for a simple reflection.
pub fn apply_bs(m: &FinModule, s: usize, real: &Realisation) -> FinModule {
    apply_reflection(m, real.simple_root(s), real.simple_coroot(s))
}

/// `B(word) K_a`, folding [`apply_bs`] over the word right to left.
pub fn build_bs_module(word: &BsWord, a: &Point, real: &Realisation) -> FinModule {
    word.letters().iter().rev().fold(point_module(a), |m, &s| apply_bs(&m, s, real))
}

/// `B(r_1, ..., r_k) K_p` for arbitrary reflections.
pub fn build_reflection_module(letters: &[Reflection], p: &Point) -> FinModule {
    letters.iter().rev().fold(point_module(p), |m, r| apply_reflection(&m, &r.root, &r.coroot))
}

/// The module with the action of each coordinate `x` replaced by that of
/// `g^{-1}(x) = x o g`.
pub fn twist(m: &FinModule, g: &GroupElement) -> FinModule {
    let actions = (0..g.matrix.rows()).map(|i| m.linear_action(g.matrix.row(i))).collect();
    FinModule { actions, basis_labels: m.basis_labels.clone() }
}

/// Dimension and filtration profile `dim M_p, dim m_p M_p, dim m_p^2 M_p,
/// ..., 0` of the part of a module supported at one point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalPart {
    pub dim: usize,
    pub filtration: Vec<usize>,
}

/// Profile of the zero module.
pub fn empty_profile() -> Vec<usize> {
    vec![0]
}

/// Sum of profiles of a direct sum.
pub fn add_profiles(a: &[usize], b: &[usize]) -> Vec<usize> {
    let n = a.len().max(b.len());
    let mut out: Vec<usize> = (0..n).map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)).collect();
    while out.len() > 1 && out[out.len() - 1] == 0 && out[out.len() - 2] == 0 {
        out.pop();
    }
    out
}

/// Iterates `U -> span{(x_i - p_i) u}` from `basis` until it stops
/// shrinking. Returns the dimensions, or `None` if it stalls above zero
/// (some `x_i - p_i` is not nilpotent on `span(basis)`).
fn filtration(shifted: &[Matrix], basis: Vec<Vec<FieldScalar>>) -> Option<Vec<usize>> {
    let mut current = basis;
    let mut profile = vec![current.len()];
    while !current.is_empty() {
        let images: Vec<Vec<FieldScalar>> = shifted
            .iter()
            .flat_map(|x| current.iter().map(move |u| x.mul_vec(u)))
            .filter(|v| v.iter().any(|c| !c.is_zero()))
            .collect();
        let next = Matrix::span_basis(&images);
        if next.len() == current.len() {
            return None;
        }
        profile.push(next.len());
        current = next;
    }
    Some(profile)
}

fn shifted_actions(m: &FinModule, p: &Point) -> Vec<Matrix> {
    m.actions.iter().zip(p.coords()).map(|(x, c)| x.shift(c)).collect()
}

/// Profile of a module that must be supported at `p` alone.
pub fn local_profile(m: &FinModule, p: &Point) -> Result<LocalPart, OracleError> {
    let n = m.dim();
    let basis = (0..n).map(|i| (0..n).map(|j| FieldScalar::from(i64::from(i == j))).collect()).collect();
    let filtration = filtration(&shifted_actions(m, p), basis).ok_or_else(|| OracleError::NotLocal(p.clone()))?;
    Ok(LocalPart { dim: n, filtration })
}

/// A linear form taking pairwise distinct values on the given points.
fn separating_form(points: &[&Point], dim: usize) -> Vec<FieldScalar> {
    for k in 2i64.. {
        let form: Vec<FieldScalar> =
            (0..dim).map(|i| FieldScalar::from(k.pow(u32::try_from(i).unwrap_or(u32::MAX)))).collect();
        let mut seen = std::collections::HashSet::new();
        if points.iter().all(|p| seen.insert(crate::coxeter::pairing(p.coords(), &form))) {
            return form;
        }
    }
    unreachable!()
}

/// `ker N^k` for large `k`, grown one preimage at a time so that no
/// matrix power is ever formed. Stops at `target` dimensions or when the
/// chain stabilises.
fn generalized_kernel(nmat: &Matrix, target: usize) -> Vec<Vec<FieldScalar>> {
    let n = nmat.rows();
    let mut basis = nmat.kernel();
    while basis.len() < target {
        // {v : N v in span(basis)} from the kernel of [N | basis].
        let mut aug = Matrix::zeros(n, n + basis.len());
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = nmat[(i, j)].clone();
            }
            for (k, b) in basis.iter().enumerate() {
                aug[(i, n + k)] = b[i].clone();
            }
        }
        let pre: Vec<Vec<FieldScalar>> = aug.kernel().into_iter().map(|v| v[..n].to_vec()).collect();
        let next = Matrix::span_basis(&pre);
        if next.len() == basis.len() {
            break;
        }
        basis = next;
    }
    basis
}

/// Splits a module along the orbit points of `table`. Only points carrying
/// a nonzero part are returned, in orbit order.
pub fn support_decompose(m: &FinModule, table: &OrbitTable) -> Result<IndexMap<Point, LocalPart>, OracleError> {
    let dim_v = table.base_point().dim();
    if m.actions.len() != dim_v {
        return Err(OracleError::Dimension { module: m.actions.len(), real: dim_v });
    }
    let n = m.dim();
    let points: Vec<&Point> = table.points().collect();
    if points.len() == 1 {
        let part = local_profile(m, points[0]).map_err(|_| OracleError::SupportOutsideOrbit { found: 0, dim: n })?;
        return Ok(IndexMap::from([(points[0].clone(), part)]));
    }
    let form = separating_form(&points, dim_v);
    let c = m.linear_action(&form);
    let charpoly = c.charpoly();
    let mut candidates = Vec::new();
    let mut found = 0;
    for p in points {
        let mu = crate::coxeter::pairing(p.coords(), &form);
        let mult = root_multiplicity(&charpoly, &mu);
        if mult > 0 {
            found += mult;
            candidates.push((p, mu, mult));
        }
    }
    if found != n {
        return Err(OracleError::SupportOutsideOrbit { found, dim: n });
    }
    let mut out = IndexMap::new();
    for (p, mu, mult) in candidates {
        let kernel = generalized_kernel(&c.shift(&mu), mult);
        if kernel.len() != mult {
            return Err(OracleError::SupportOutsideOrbit { found: found - mult + kernel.len(), dim: n });
        }
        let filtration = filtration(&shifted_actions(m, p), kernel)
            .ok_or(OracleError::SupportOutsideOrbit { found: found - mult, dim: n })?;
        out.insert(p.clone(), LocalPart { dim: mult, filtration });
    }
    Ok(out)
}

/// Per-point comparison between oracle and engine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointCheck {
    pub point: Point,
    pub oracle_dim: usize,
    pub engine_dim: usize,
    pub oracle_profile: Vec<usize>,
    pub engine_profile: Vec<usize>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub word: BsWord,
    pub base_point: Point,
    pub module_dim: usize,
    pub commutes: bool,
    pub points: Vec<PointCheck>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &PointCheck> {
        self.points.iter().filter(|c| !c.pass)
    }
}

/// Builds the oracle module and the engine decomposition and compares them
/// at every orbit point.
pub fn verify_decomposition(
    real: &Realisation,
    word: &BsWord,
    table: &OrbitTable,
) -> Result<VerificationReport, OracleError> {
    let dec = specialise_with_table(real, word, table)?;
    verify_against(real, &dec, table)
}

/// Like [`verify_decomposition`] for an already computed decomposition.
pub fn verify_against(
    real: &Realisation,
    dec: &Decomposition,
    table: &OrbitTable,
) -> Result<VerificationReport, OracleError> {
    let module = build_bs_module(&dec.source_word, table.base_point(), real);
    let commutes = module.commutes();
    let oracle = support_decompose(&module, table)?;
    let mut points = Vec::with_capacity(table.len());
    for p in table.points() {
        let (oracle_dim, oracle_profile) =
            oracle.get(p).map_or((0, empty_profile()), |l| (l.dim, l.filtration.clone()));
        let mut engine_dim = 0usize;
        let mut engine_profile = empty_profile();
        let mut note = None;
        for s in dec.res_point(p)? {
            engine_dim += 1usize << s.letters.len();
            let summand = build_reflection_module(&s.letters, p);
            match local_profile(&summand, p) {
                Ok(l) => engine_profile = add_profiles(&engine_profile, &l.filtration),
                Err(e) => note = Some(e.to_string()),
            }
        }
        let pass = note.is_none() && oracle_dim == engine_dim && oracle_profile == engine_profile;
        if !pass && note.is_none() {
            note = Some(format!(
                "oracle dim {oracle_dim} profile {oracle_profile:?} vs engine dim {engine_dim} profile {engine_profile:?}"
            ));
        }
        points.push(PointCheck {
            point: p.clone(),
            oracle_dim,
            engine_dim,
            oracle_profile,
            engine_profile,
            pass,
            note,
        });
    }
    let pass = commutes && points.iter().all(|c| c.pass);
    Ok(VerificationReport {
        word: dec.source_word.clone(),
        base_point: table.base_point().clone(),
        module_dim: module.dim(),
        commutes,
        points,
        pass,
    })
}
