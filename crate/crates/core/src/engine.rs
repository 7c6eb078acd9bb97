//! Splitting of a specialised Bott-Samelson module into Bott-Samelson
//! modules for the stabiliser Coxeter systems along the orbit.
//!
//! The word is consumed right to left. Each summand `B(v) K_p` of the tail
//! meets the next letter `s` in one of two ways:
//!
//! * `s p = p`: the summand becomes `B(s, v) K_p`;
//! * `s p != p`: the support of `B_s B(v) K_p` is `{p, s p}` and the module
//!   splits as `B(v) K_p (+) B(s v s) K_{s p}`, where `s v s` conjugates
//!   every letter.
//!
//! Letters are stored as concrete reflections. Whether they are simple for
//! the canonical local system at their point is measured afterwards rather
//! than assumed.

use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::coxeter::{word_label, Realisation, Reflection, RootRecord};
use crate::tits::{orbit_table, Caps, OrbitTable, Point, TitsError};

/// A sequence of simple reflections, as 0-based generator indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BsWord(#[serde(with = "crate::coxeter::one_based")] pub Vec<usize>);

impl BsWord {
    pub fn new(letters: Vec<usize>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn validate(&self, real: &Realisation) -> Result<(), TitsError> {
        for &s in &self.0 {
            real.check_generator(s)?;
        }
        Ok(())
    }

    /// All words of length at most `max_len` over `rank` generators, shortest
    /// first, lexicographic within a length.
    pub fn all_up_to(rank: usize, max_len: usize) -> Vec<BsWord> {
        let mut out = vec![BsWord::default()];
        let mut level = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(level.len() * rank);
            for w in &level {
                for s in 0..rank {
                    let mut v: Vec<usize> = w.clone();
                    v.push(s);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned().map(BsWord));
            level = next;
        }
        out
    }
}

impl fmt::Display for BsWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l: Vec<String> = self.0.iter().map(|s| (s + 1).to_string()).collect();
        write!(f, "({})", l.join(","))
    }
}

/// Which branch of the recursion produced a step of a summand's history.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "case")]
pub enum CaseTag {
    /// The letter fixed the point and was prepended.
    Absorb {
        #[serde(with = "crate::coxeter::one_based::index")]
        letter: usize,
    },
    /// The letter moved the point; this summand stayed where it was.
    Stay {
        #[serde(with = "crate::coxeter::one_based::index")]
        letter: usize,
    },
    /// The letter moved the point; this summand moved to `s p`.
    /// `minimal_representative` records whether `s t_p` is the minimal
    /// coset representative of the new point (`None` if lengths are
    /// unavailable).
    Move {
        #[serde(with = "crate::coxeter::one_based::index")]
        letter: usize,
        minimal_representative: Option<bool>,
    },
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Absorb { letter } => write!(f, "absorb s{}", letter + 1),
            Self::Stay { letter } => write!(f, "stay s{}", letter + 1),
            Self::Move { letter, minimal_representative: Some(false) } => {
                write!(f, "move s{} (non-minimal)", letter + 1)
            }
            Self::Move { letter, .. } => write!(f, "move s{}", letter + 1),
        }
    }
}

/// One summand `B(letters) K_point`.
#[derive(Clone, Debug, Serialize)]
#[serde(into = "SummandRecord")]
pub struct Summand {
    pub point: Point,
    pub letters: Vec<Reflection>,
    pub in_local_simple_system: bool,
    pub origin_trace: Vec<CaseTag>,
}

impl Summand {
    /// `2^{|letters|}`.
    pub fn dim(&self) -> u64 {
        1 << self.letters.len()
    }

    pub fn letter_labels(&self) -> Vec<String> {
        self.letters.iter().map(|r| word_label(&r.element.word)).collect()
    }
}

#[derive(Serialize)]
struct SummandRecord {
    point: Point,
    letters: Vec<RootRecord>,
    dim: u64,
    in_local_simple_system: bool,
    origin_trace: Vec<CaseTag>,
}

impl From<Summand> for SummandRecord {
    fn from(s: Summand) -> Self {
        let dim = s.dim();
        Self {
            point: s.point,
            letters: s.letters.iter().map(RootRecord::from).collect(),
            dim,
            in_local_simple_system: s.in_local_simple_system,
            origin_trace: s.origin_trace,
        }
    }
}

/// The direct sum decomposition of `B(word) K_a`.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub source_word: BsWord,
    pub base_point: Point,
    pub summands: Vec<Summand>,
    /// Orbit points in breadth-first order.
    #[serde(skip)]
    pub orbit: Vec<Point>,
}

impl Decomposition {
    pub fn total_dim(&self) -> u64 {
        self.summands.iter().map(Summand::dim).sum()
    }

    /// Per orbit point, the sum of summand dimensions (points without
    /// summands omitted), in orbit order.
    pub fn dims_by_point(&self) -> IndexMap<Point, u64> {
        let mut out = IndexMap::new();
        for p in &self.orbit {
            let d: u64 = self.summands.iter().filter(|s| &s.point == p).map(Summand::dim).sum();
            if d > 0 {
                out.insert(p.clone(), d);
            }
        }
        out
    }

    /// Summands supported at `p`.
    pub fn res_point(&self, p: &Point) -> Result<Vec<&Summand>, TitsError> {
        if !self.orbit.contains(p) {
            return Err(TitsError::NotInOrbit(p.clone()));
        }
        Ok(self.summands.iter().filter(|s| &s.point == p).collect())
    }
}

/// `(s r_1 s, ..., s r_k s)`.
pub fn conjugate_word(real: &Realisation, s: usize, v: &[Reflection]) -> Vec<Reflection> {
    v.iter().map(|r| real.conjugate_by_generator(s, r)).collect()
}

/// Decomposes `B(word) K_a`, building the orbit table of `a` first.
pub fn specialise(real: &Realisation, word: &BsWord, a: &Point, caps: Caps) -> Result<Decomposition, TitsError> {
    let table = orbit_table(real, a, caps)?;
    specialise_with_table(real, word, &table)
}

pub fn specialise_with_table(
    real: &Realisation,
    word: &BsWord,
    table: &OrbitTable,
) -> Result<Decomposition, TitsError> {
    word.validate(real)?;
    let a = table.base_point().clone();
    let mut summands =
        vec![Summand { point: a.clone(), letters: Vec::new(), in_local_simple_system: true, origin_trace: Vec::new() }];
    for &s in word.letters().iter().rev() {
        let mut next = Vec::with_capacity(summands.len() * 2);
        for summand in summands {
            let moved = summand.point.reflected(real, s);
            if moved == summand.point {
                let mut letters = Vec::with_capacity(summand.letters.len() + 1);
                letters.push(real.simple_reflection(s));
                letters.extend(summand.letters);
                let mut origin_trace = summand.origin_trace;
                origin_trace.push(CaseTag::Absorb { letter: s });
                next.push(Summand { letters, origin_trace, ..summand });
            } else {
                let minimal_representative = is_minimal_step(real, table, &summand.point, s, &moved);
                let letters = conjugate_word(real, s, &summand.letters);
                let mut trace = summand.origin_trace.clone();
                trace.push(CaseTag::Move { letter: s, minimal_representative });
                let mut stay = summand;
                stay.origin_trace.push(CaseTag::Stay { letter: s });
                next.push(stay);
                next.push(Summand { point: moved, letters, in_local_simple_system: true, origin_trace: trace });
            }
        }
        summands = next;
    }
    for s in &mut summands {
        s.in_local_simple_system = s.letters.iter().all(|r| table.is_locally_simple(&s.point, r));
    }
    Ok(Decomposition { source_word: word.clone(), base_point: a, summands, orbit: table.points().cloned().collect() })
}

/// Whether `s t_p` has the same length as `t_{sp}`.
fn is_minimal_step(real: &Realisation, table: &OrbitTable, p: &Point, s: usize, sp: &Point) -> Option<bool> {
    let tp = &table.get(p)?.representative;
    let tsp = &table.get(sp)?.representative;
    let lhs = real.length(&real.left_multiply(s, tp)).ok()?;
    let rhs = real.length(tsp).ok()?;
    Some(lhs == rhs)
}

/// For each subword selection, the point reached by applying the selected
/// letters to `a`; counts per point, in first-seen order.
pub fn standard_flag_prediction(
    real: &Realisation,
    word: &BsWord,
    a: &Point,
) -> Result<IndexMap<Point, u64>, TitsError> {
    word.validate(real)?;
    let n = word.len();
    assert!(n < 64, "word too long for subword enumeration");
    let mut counts: IndexMap<Point, u64> = IndexMap::new();
    for mask in 0u64..(1 << n) {
        let mut p = a.clone();
        for (i, &s) in word.letters().iter().enumerate().rev() {
            if mask >> i & 1 == 1 {
                p = p.reflected(real, s);
            }
        }
        *counts.entry(p).or_default() += 1;
    }
    Ok(counts)
}

/// Per-summand local-simplicity flags.
#[derive(Clone, Debug, Serialize)]
pub struct LocalSimplicityReport {
    pub per_summand: Vec<bool>,
    pub all_local_simple: bool,
    /// Indices of summands whose history contains a move along a
    /// non-minimal representative.
    pub non_minimal_moves: Vec<usize>,
}

pub fn check_local_simplicity(dec: &Decomposition, table: &OrbitTable) -> LocalSimplicityReport {
    let per_summand: Vec<bool> =
        dec.summands.iter().map(|s| s.letters.iter().all(|r| table.is_locally_simple(&s.point, r))).collect();
    let non_minimal_moves = dec
        .summands
        .iter()
        .enumerate()
        .filter(|(_, s)| {
            s.origin_trace.iter().any(|t| matches!(t, CaseTag::Move { minimal_representative: Some(false), .. }))
        })
        .map(|(i, _)| i)
        .collect();
    LocalSimplicityReport { all_local_simple: per_summand.iter().all(|&b| b), per_summand, non_minimal_moves }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldScalar;

    fn a2() -> Realisation {
        Realisation::named("A2").unwrap()
    }

    fn wall_point(r: &Realisation) -> Point {
        Point::from_pairings(r, &[FieldScalar::zero(), FieldScalar::one()]).unwrap()
    }

    #[test]
    fn single_fixing_letter() {
        let r = a2();
        let a = wall_point(&r);
        let d = specialise(&r, &BsWord::new(vec![0]), &a, Caps::default()).unwrap();
        assert_eq!(d.summands.len(), 1);
        assert_eq!(d.summands[0].point, a);
        assert_eq!(d.summands[0].letters, vec![r.simple_reflection(0)]);
        assert_eq!(d.summands[0].dim(), 2);
    }

    #[test]
    fn single_moving_letter() {
        let r = a2();
        let a = wall_point(&r);
        let d = specialise(&r, &BsWord::new(vec![1]), &a, Caps::default()).unwrap();
        let pts: Vec<_> = d.summands.iter().map(|s| (s.point.clone(), s.letters.len())).collect();
        assert_eq!(pts, vec![(a.clone(), 0), (a.reflected(&r, 1), 0)]);
    }

    #[test]
    fn worked_example() {
        let r = a2();
        let a = wall_point(&r);
        let d = specialise(&r, &BsWord::new(vec![1, 0]), &a, Caps::default()).unwrap();
        assert_eq!(d.summands.len(), 2);
        assert_eq!(d.summands[0].point, a);
        assert_eq!(d.summands[0].letters, vec![r.simple_reflection(0)]);
        assert_eq!(d.summands[1].point, a.reflected(&r, 1));
        assert_eq!(d.summands[1].letters[0].element, r.element_from_word(&[1, 0, 1]).unwrap());
        assert_eq!(d.total_dim(), 4);
        assert!(d.summands.iter().all(|s| s.in_local_simple_system));

        assert_eq!(d.res_point(&a).unwrap().len(), 1);
        let far = a.reflected(&r, 1).reflected(&r, 0);
        assert!(d.res_point(&far).unwrap().is_empty());
        let stranger = Point::new(vec![FieldScalar::from(9), FieldScalar::from(9)]);
        assert!(d.res_point(&stranger).is_err());
    }

    #[test]
    fn origin_keeps_whole_word() {
        let r = Realisation::named("B2").unwrap();
        let w = BsWord::new(vec![0, 1, 1, 0]);
        let d = specialise(&r, &w, &Point::origin(2), Caps::default()).unwrap();
        assert_eq!(d.summands.len(), 1);
        let ws: Vec<_> = d.summands[0].letters.iter().map(|l| l.element.word.clone()).collect();
        assert_eq!(ws, vec![vec![0], vec![1], vec![1], vec![0]]);
        assert!(d.summands[0].in_local_simple_system);
    }

    #[test]
    fn regular_point_splits_completely() {
        let r = a2();
        let a = Point::from_pairings(&r, &[FieldScalar::one(), FieldScalar::one()]).unwrap();
        let d = specialise(&r, &BsWord::new(vec![0, 1, 0, 1]), &a, Caps::default()).unwrap();
        assert_eq!(d.summands.len(), 16);
        assert!(d.summands.iter().all(|s| s.letters.is_empty()));
    }

    #[test]
    fn conjugate_word_examples() {
        let r = a2();
        let s1 = r.simple_reflection(0);
        assert_eq!(conjugate_word(&r, 0, std::slice::from_ref(&s1)), vec![s1.clone()]);
        let c = conjugate_word(&r, 1, &[s1]);
        assert_eq!(c[0].element, r.element_from_word(&[1, 0, 1]).unwrap());
        assert!(conjugate_word(&r, 1, &[]).is_empty());
    }

    #[test]
    fn flag_prediction_examples() {
        let r = a2();
        let a = wall_point(&r);
        let f = standard_flag_prediction(&r, &BsWord::new(vec![1, 0]), &a).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[&a], 2);
        assert_eq!(f[&a.reflected(&r, 1)], 2);
        let f = standard_flag_prediction(&r, &BsWord::default(), &a).unwrap();
        assert_eq!(f.into_iter().collect::<Vec<_>>(), vec![(a, 1)]);
    }

    #[test]
    fn out_of_range_letter() {
        let r = a2();
        let err = specialise(&r, &BsWord::new(vec![2]), &wall_point(&r), Caps::default()).unwrap_err();
        assert!(err.to_string().contains("out of range"));
    }

    #[test]
    fn word_enumeration() {
        let w = BsWord::all_up_to(2, 2);
        assert_eq!(w.len(), 7);
        assert_eq!(w[3], BsWord::new(vec![0, 0]));
        assert_eq!(BsWord::new(vec![1, 0]).to_string(), "(2,1)");
    }
}
