//! Fundamental chamber, Tits cone membership, stabiliser Coxeter systems and
//! orbits with minimal coset representatives.
//!
//! For `a` in the Tits cone the descent loop finds `d` in the closed
//! fundamental chamber `D` and `w` with `w d = a`. The stabiliser of `d` is
//! the standard parabolic `W_I` with `I = {s : <d, alpha_s^vee> = 0}`, so
//! `stab(a) = w_min W_I w_min^{-1}` with simple system `w_min I w_min^{-1}`,
//! where `w_min` is the minimal element of the coset `w W_I`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coxeter::{word_label, CoxeterError, CoxeterMatrix, GroupElement, Realisation, Reflection};
use crate::field::FieldScalar;
use crate::linalg::Matrix;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum TitsError {
    #[error("descent did not reach the fundamental chamber within {0} steps: point outside the Tits cone or cap too small (undetermined)")]
    Undetermined(usize),
    #[error("orbit exceeds cap of {0} points")]
    OrbitCap(usize),
    #[error("point has {found} coordinates, realisation has dimension {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("coroot pairings do not determine a unique point; give coordinates instead")]
    PairingsNotInvertible,
    #[error("point {0} is not in the orbit")]
    NotInOrbit(Point),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
}

/// A point of `V`, equivalently a maximal ideal of `R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<FieldScalar>);

impl Point {
    pub fn new(coords: Vec<FieldScalar>) -> Self {
        Self(coords)
    }

    pub fn origin(dim: usize) -> Self {
        Self(vec![FieldScalar::zero(); dim])
    }

    /// The point with the given coroot pairings `<a, alpha_s^vee>`.
    pub fn from_pairings(real: &Realisation, pairings: &[FieldScalar]) -> Result<Self, TitsError> {
        if pairings.len() != real.rank() {
            return Err(TitsError::Dimension { expected: real.rank(), found: pairings.len() });
        }
        let coroots = Matrix::from_rows((0..real.rank()).map(|s| real.simple_coroot(s).to_vec()).collect());
        let inv = coroots.inverse().ok_or(TitsError::PairingsNotInvertible)?;
        Ok(Self(inv.mul_vec(pairings)))
    }

    pub fn checked(real: &Realisation, coords: Vec<FieldScalar>) -> Result<Self, TitsError> {
        if coords.len() != real.dim() {
            return Err(TitsError::Dimension { expected: real.dim(), found: coords.len() });
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[FieldScalar] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(FieldScalar::is_zero)
    }

    pub fn pairings(&self, real: &Realisation) -> Vec<FieldScalar> {
        real.coroot_pairings(&self.0)
    }

    pub fn moved_by(&self, g: &GroupElement) -> Self {
        Self(g.act(&self.0))
    }

    pub fn reflected(&self, real: &Realisation, s: usize) -> Self {
        Self(real.reflect(s, &self.0))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", c.join(", "))
    }
}

/// Iteration caps for the descent loop and the orbit search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Caps {
    pub orbit: usize,
    pub descent: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self { orbit: 100_000, descent: 10_000 }
    }
}

/// Descends `a` into the fundamental chamber by repeatedly applying the
/// smallest-index generator with a negative coroot pairing. Returns `d` and
/// `w` with `w d = a`.
pub fn to_fundamental_domain(real: &Realisation, a: &Point, cap: usize) -> Result<(Point, GroupElement), TitsError> {
    if a.dim() != real.dim() {
        return Err(TitsError::Dimension { expected: real.dim(), found: a.dim() });
    }
    let mut current = a.clone();
    let mut w = real.identity();
    for _ in 0..=cap {
        let Some(s) = (0..real.rank()).find(|&s| real.coroot_pairing(current.coords(), s).is_negative()) else {
            return Ok((current, w));
        };
        current = current.reflected(real, s);
        w = real.right_multiply(&w, s);
    }
    Err(TitsError::Undetermined(cap))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeMembership {
    Member,
    Undetermined,
}

/// Tits-ideal test: membership is certified by a successful descent.
pub fn is_tits_ideal(real: &Realisation, a: &Point, cap: usize) -> Result<ConeMembership, TitsError> {
    match to_fundamental_domain(real, a, cap) {
        Ok(_) => Ok(ConeMembership::Member),
        Err(TitsError::Undetermined(_)) => Ok(ConeMembership::Undetermined),
        Err(e) => Err(e),
    }
}

/// The Coxeter system `(stab(a), S_a)`.
#[derive(Clone, Debug, Serialize)]
pub struct StabiliserSystem {
    pub point: Point,
    /// The representative `d` of `W a` in the fundamental chamber.
    pub base_point: Point,
    /// Minimal-length `w_min` with `w_min d = a`.
    pub conjugator: GroupElement,
    /// Generators fixing `d` (0-based).
    pub parabolic: Vec<usize>,
    /// `S_a = w_min I w_min^{-1}`.
    pub generators: Vec<Reflection>,
    /// Orders of products of elements of `S_a`; `None` when `S_a` is empty.
    pub local_coxeter: Option<CoxeterMatrix>,
}

/// Cap on the product orders examined for local Coxeter matrices.
const PRODUCT_ORDER_CAP: u32 = 1000;

pub fn stabiliser_system(real: &Realisation, a: &Point, caps: Caps) -> Result<StabiliserSystem, TitsError> {
    let (d, mut w) = to_fundamental_domain(real, a, caps.descent)?;
    let parabolic: Vec<usize> = (0..real.rank()).filter(|&s| real.coroot_pairing(d.coords(), s).is_zero()).collect();
    // Descend w within its coset w W_I.
    let mut steps = 0;
    while let Some(&s) = parabolic.iter().find(|&&s| real.is_right_descent(&w, s)) {
        w = real.right_multiply(&w, s);
        steps += 1;
        if steps > caps.descent {
            return Err(TitsError::Undetermined(caps.descent));
        }
    }
    let conjugator = real.element_from_word(&reduce_word(real, &w))?;
    let generators: Vec<Reflection> =
        parabolic.iter().map(|&s| real.conjugate(&conjugator, &real.simple_reflection(s))).collect();
    let local_coxeter = local_coxeter_matrix(&generators)?;
    Ok(StabiliserSystem { point: a.clone(), base_point: d, conjugator, parabolic, generators, local_coxeter })
}

/// Coxeter matrix of exact product orders; infinite orders (beyond the cap)
/// are recorded as infinity.
pub fn local_coxeter_matrix(gens: &[Reflection]) -> Result<Option<CoxeterMatrix>, TitsError> {
    if gens.is_empty() {
        return Ok(None);
    }
    let n = gens.len();
    let mut m = vec![vec![1u32; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let prod = gens[i].element.compose(&gens[j].element);
            let k = prod.order(PRODUCT_ORDER_CAP).unwrap_or(0);
            m[i][j] = k;
            m[j][i] = k;
        }
    }
    Ok(Some(CoxeterMatrix::new(m)?))
}

/// Drops cancelling pairs from a word by descending from the right: the
/// result is a reduced word for the same element.
fn reduce_word(real: &Realisation, g: &GroupElement) -> Vec<usize> {
    // Peel right descents: g = g' s with l(g') < l(g).
    let mut g = g.clone();
    let mut rev = Vec::new();
    while let Some(s) = (0..real.rank()).find(|&s| real.is_right_descent(&g, s)) {
        g = real.right_multiply(&g, s);
        rev.push(s);
    }
    rev.reverse();
    rev
}

/// One orbit point with its minimal representative and local simple system.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitEntry {
    pub point: Point,
    /// Minimal-length `t_p` with `t_p a = p`.
    pub representative: GroupElement,
    /// `S_p = t_p S_a t_p^{-1}`.
    pub local_simple: Vec<Reflection>,
}

/// The orbit `W a`, in breadth-first discovery order.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitTable {
    pub stabiliser: StabiliserSystem,
    pub entries: Vec<OrbitEntry>,
    #[serde(skip)]
    index: HashMap<Point, usize>,
}

impl OrbitTable {
    pub fn base_point(&self) -> &Point {
        &self.entries[0].point
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn position(&self, p: &Point) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn get(&self, p: &Point) -> Option<&OrbitEntry> {
        self.position(p).map(|i| &self.entries[i])
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.index.contains_key(p)
    }

    pub fn points(&self) -> impl Iterator<Item = &Point> {
        self.entries.iter().map(|e| &e.point)
    }

    /// Whether `r` belongs to the canonical simple system at `p`.
    pub fn is_locally_simple(&self, p: &Point, r: &Reflection) -> bool {
        self.get(p).is_some_and(|e| e.local_simple.contains(r))
    }
}

/// Breadth-first orbit search from `a`, applying generators in index order.
/// The first word reaching a point is `s` prepended to its parent's word.
pub fn orbit_table(real: &Realisation, a: &Point, caps: Caps) -> Result<OrbitTable, TitsError> {
    let stabiliser = stabiliser_system(real, a, caps)?;
    let mut entries = vec![OrbitEntry {
        point: a.clone(),
        representative: real.identity(),
        local_simple: stabiliser.generators.clone(),
    }];
    let mut index = HashMap::from([(a.clone(), 0)]);
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for s in 0..real.rank() {
            let q = entries[i].point.reflected(real, s);
            if index.contains_key(&q) {
                continue;
            }
            if entries.len() >= caps.orbit {
                return Err(TitsError::OrbitCap(caps.orbit));
            }
            let representative = real.left_multiply(s, &entries[i].representative);
            let local_simple =
                entries[i].local_simple.iter().map(|r| real.conjugate_by_generator(s, r)).collect::<Vec<_>>();
            index.insert(q.clone(), entries.len());
            queue.push_back(entries.len());
            entries.push(OrbitEntry { point: q, representative, local_simple });
        }
    }
    Ok(OrbitTable { stabiliser, entries, index })
}

/// Closure of a set of elements under multiplication (finite groups).
pub fn generated_subgroup(real: &Realisation, gens: &[GroupElement], cap: usize) -> Result<HashSet<Matrix>, TitsError> {
    let mut seen = HashSet::from([Matrix::identity(real.dim())]);
    let mut queue = VecDeque::from([Matrix::identity(real.dim())]);
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let p = m.matmul(&g.matrix);
            if seen.insert(p.clone()) {
                if seen.len() > cap {
                    return Err(TitsError::OrbitCap(cap));
                }
                queue.push_back(p);
            }
        }
    }
    Ok(seen)
}

/// Checks, for a finite group, that every element of `S_a` has minimal
/// length among the reflections of `stab(a)` outside the subgroup generated
/// by the other chosen generators. Returns a description of each
/// discrepancy; an empty list means the two characterisations agree.
pub fn minimal_length_discrepancies(real: &Realisation, sys: &StabiliserSystem) -> Result<Vec<String>, TitsError> {
    let reflections = real.positive_roots()?;
    let fixing: Vec<&Reflection> = reflections.iter().filter(|r| r.fixes(sys.point.coords())).collect();
    let mut out = Vec::new();
    for (i, r) in sys.generators.iter().enumerate() {
        let others: Vec<GroupElement> =
            sys.generators.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.element.clone()).collect();
        let h = generated_subgroup(real, &others, 1_000_000)?;
        let mut best = usize::MAX;
        for c in fixing.iter().filter(|c| !h.contains(&c.element.matrix)) {
            best = best.min(real.length(&c.element)?);
        }
        let lr = real.length(&r.element)?;
        if lr != best {
            out.push(format!("{} has length {lr}, minimum is {best}", word_label(&r.element.word)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Realisation {
        Realisation::named("A2").unwrap()
    }

    fn pt(real: &Realisation, p: &[i64]) -> Point {
        let p: Vec<FieldScalar> = p.iter().map(|&x| x.into()).collect();
        Point::from_pairings(real, &p).unwrap()
    }

    #[test]
    fn descent_examples() {
        let r = a2();
        let a = pt(&r, &[1, 1]);
        let (d, w) = to_fundamental_domain(&r, &a, 100).unwrap();
        assert_eq!(d, a);
        assert!(w.is_identity());

        let a = pt(&r, &[-1, 2]);
        let (d, w) = to_fundamental_domain(&r, &a, 100).unwrap();
        assert_eq!(d.pairings(&r), vec![FieldScalar::one(), FieldScalar::one()]);
        assert_eq!(w.word, vec![0]);
        assert_eq!(d.moved_by(&w), a);

        let o = Point::origin(2);
        let (d, w) = to_fundamental_domain(&r, &o, 100).unwrap();
        assert_eq!(d, o);
        assert!(w.is_identity());
    }

    #[test]
    fn affine_a1_undetermined() {
        let m = CoxeterMatrix::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let r = Realisation::cartan(m).unwrap();
        // <a, alpha_1^vee> = -<a, alpha_2^vee>; any nonzero value oscillates.
        let a = Point::new(vec![FieldScalar::from(-1), FieldScalar::from(0)]);
        assert_eq!(is_tits_ideal(&r, &a, 100).unwrap(), ConeMembership::Undetermined);
        assert_eq!(to_fundamental_domain(&r, &a, 100).unwrap_err(), TitsError::Undetermined(100));
    }

    #[test]
    fn finite_types_are_always_members() {
        let r = a2();
        for p in [[3, -7], [-2, -2], [0, 0], [5, 1]] {
            assert_eq!(is_tits_ideal(&r, &pt(&r, &p), 100).unwrap(), ConeMembership::Member);
        }
    }

    #[test]
    fn stabiliser_examples() {
        let r = a2();
        let sys = stabiliser_system(&r, &pt(&r, &[1, 1]), Caps::default()).unwrap();
        assert!(sys.generators.is_empty());
        assert!(sys.local_coxeter.is_none());

        let sys = stabiliser_system(&r, &Point::origin(2), Caps::default()).unwrap();
        assert_eq!(sys.parabolic, vec![0, 1]);
        assert_eq!(sys.local_coxeter, Some(CoxeterMatrix::named("A2").unwrap()));

        let a = pt(&r, &[0, 1]);
        let sys = stabiliser_system(&r, &a, Caps::default()).unwrap();
        assert_eq!(sys.generators.len(), 1);
        assert_eq!(sys.generators[0], r.simple_reflection(0));
        assert_eq!(sys.local_coxeter, Some(CoxeterMatrix::named("A1").unwrap()));
    }

    #[test]
    fn stabiliser_of_non_dominant_point() {
        let r = a2();
        // s2 applied to the (0,1) point: stabiliser is s2 s1 s2.
        let a = pt(&r, &[0, 1]).reflected(&r, 1);
        let sys = stabiliser_system(&r, &a, Caps::default()).unwrap();
        assert_eq!(sys.conjugator.word, vec![1]);
        assert_eq!(sys.generators[0].element, r.element_from_word(&[1, 0, 1]).unwrap());
        assert!(sys.generators[0].fixes(a.coords()));
    }

    #[test]
    fn orbit_examples() {
        let r = a2();
        assert_eq!(orbit_table(&r, &pt(&r, &[1, 1]), Caps::default()).unwrap().len(), 6);
        let t = orbit_table(&r, &pt(&r, &[0, 1]), Caps::default()).unwrap();
        let words: Vec<_> = t.entries.iter().map(|e| e.representative.word.clone()).collect();
        assert_eq!(words, vec![vec![], vec![1], vec![0, 1]]);
        let t = orbit_table(&r, &Point::origin(2), Caps::default()).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t.entries[0].representative.is_identity());
    }

    #[test]
    fn orbit_cap() {
        let r = a2();
        assert_eq!(
            orbit_table(&r, &pt(&r, &[1, 1]), Caps { orbit: 4, descent: 100 }).unwrap_err(),
            TitsError::OrbitCap(4)
        );
    }

    #[test]
    fn pairings_need_invertible_coroots() {
        let m = CoxeterMatrix::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let r = Realisation::cartan(m).unwrap();
        let p = [FieldScalar::one(), FieldScalar::one()];
        assert_eq!(Point::from_pairings(&r, &p).unwrap_err(), TitsError::PairingsNotInvertible);
    }

    #[test]
    fn minimal_length_characterisation_agrees() {
        let r = Realisation::named("B3").unwrap();
        for p in [[0, 0, 1], [0, 1, 0], [1, 0, 0], [0, 0, 0], [0, 1, 1]] {
            let a = pt(&r, &p).reflected(&r, 2).reflected(&r, 1);
            let sys = stabiliser_system(&r, &a, Caps::default()).unwrap();
            assert!(minimal_length_discrepancies(&r, &sys).unwrap().is_empty(), "{p:?}");
        }
    }
}
