//! Benchmark fixtures: a few representative (type, base point, word) cases.

use sbim_core::job::dominant_sample;
use sbim_core::tits::{orbit_table, Caps};
use sbim_core::{BsWord, OrbitTable, Realisation};

/// One benchmark case with its orbit table precomputed.
pub struct Case {
    pub label: String,
    pub real: Realisation,
    pub table: OrbitTable,
    pub word: BsWord,
}

/// Builds the case for a built-in type, the dominant sample vanishing on
/// `walls` (0-based) and a word given 0-based.
pub fn case(name: &str, walls: &[usize], word: &[usize]) -> Case {
    let real = Realisation::named(name).expect("built-in type");
    let a = dominant_sample(&real, walls).expect("dominant sample");
    let table = orbit_table(&real, &a, Caps::default()).expect("finite orbit");
    let label = format!("{name}/walls{walls:?}/len{}", word.len());
    Case { label, real, table, word: BsWord::new(word.to_vec()) }
}

/// The standard set: a wall point and a regular point in A2, B3 and H3.
pub fn standard_cases() -> Vec<Case> {
    vec![
        case("A2", &[0], &[0, 1, 0, 1, 0]),
        case("A2", &[], &[0, 1, 0, 1, 0]),
        case("B3", &[1], &[0, 1, 2, 1, 0]),
        case("B3", &[], &[0, 1, 2, 1, 0]),
        case("H3", &[0, 2], &[0, 1, 2, 1]),
    ]
}
