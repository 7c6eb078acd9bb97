//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use sbim_core::coxeter::GroupElement;
use sbim_core::job::{dominant_sample, wall_subsets};
use sbim_core::{FieldScalar, Point, Realisation};

/// Finite types with their classical group orders and degrees.
pub const FINITE_TYPES: &[(&str, usize, &[u32])] = &[
    ("A1", 2, &[2]),
    ("A1xA1", 4, &[2, 2]),
    ("A2", 6, &[2, 3]),
    ("B2", 8, &[2, 4]),
    ("G2", 12, &[2, 6]),
    ("I2(5)", 10, &[2, 5]),
    ("A3", 24, &[2, 3, 4]),
    ("B3", 48, &[2, 4, 6]),
    ("H3", 120, &[2, 6, 10]),
];

pub fn real(name: &str) -> Realisation {
    Realisation::named(name).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every element of a finite group, by closure under right multiplication.
pub fn all_elements(r: &Realisation) -> Vec<GroupElement> {
    let en = r.enumerate_group(usize::MAX);
    assert!(en.complete);
    en.elements
}

/// One dominant point per subset of vanishing walls.
pub fn dominant_points(r: &Realisation) -> Vec<(Vec<usize>, Point)> {
    wall_subsets(r.rank()).into_iter().map(|w| (w.clone(), dominant_sample(r, &w).unwrap())).collect()
}

/// Dominant samples together with a few non-dominant images of each.
pub fn test_points(r: &Realisation) -> Vec<Point> {
    let elements = all_elements(r);
    let mut out = Vec::new();
    for (_, d) in dominant_points(r) {
        for g in elements.iter().step_by(elements.len().div_ceil(3).max(1)) {
            let p = d.moved_by(g);
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

pub fn scalar(n: i64) -> FieldScalar {
    FieldScalar::from(n)
}

/// Determinant by cofactor expansion (small matrices only).
pub fn det(m: &sbim_core::Matrix) -> FieldScalar {
    fn go(rows: &[Vec<FieldScalar>]) -> FieldScalar {
        if rows.is_empty() {
            return FieldScalar::one();
        }
        let mut acc = FieldScalar::zero();
        for (j, c) in rows[0].iter().enumerate() {
            let minor: Vec<Vec<FieldScalar>> = rows[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = c * &go(&minor);
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }
    let rows: Vec<Vec<FieldScalar>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    go(&rows)
}
