//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons
//! throughout. Exits nonzero when any criterion fails.

use std::collections::{HashMap, HashSet};
use std::process::ExitCode;
use std::time::Instant;

use sbim_core::engine::{specialise, specialise_with_table};
use sbim_core::job::{dominant_sample, sweep, wall_subsets};
use sbim_core::oracle::{apply_bs, build_bs_module, build_reflection_module, point_module, support_decompose, twist};
use sbim_core::tits::{generated_subgroup, orbit_table, stabiliser_system, Caps, OrbitTable};
use sbim_core::{BsWord, JobConfig, Matrix, Point, Realisation, SweepReport};

/// Types swept against the oracle, with the longest word length used.
const SWEPT: &[(&str, usize)] =
    &[("A1", 5), ("A1xA1", 5), ("A2", 5), ("B2", 5), ("G2", 5), ("A3", 5), ("B3", 5), ("H3", 4)];
/// Every finite type exercised by the structural checks, with its order.
const GROUPS: &[(&str, usize)] =
    &[("A1", 2), ("A1xA1", 4), ("A2", 6), ("B2", 8), ("G2", 12), ("I2(5)", 10), ("A3", 24), ("B3", 48), ("H3", 120)];

type Outcome = Result<String, String>;

fn real(name: &str) -> Realisation {
    Realisation::named(name).expect("built-in type")
}

fn elements(r: &Realisation) -> Vec<sbim_core::GroupElement> {
    r.enumerate_group(usize::MAX).elements
}

fn dominant_tables(r: &Realisation) -> Vec<OrbitTable> {
    wall_subsets(r.rank())
        .iter()
        .map(|w| orbit_table(r, &dominant_sample(r, w).expect("sample"), Caps::default()).expect("orbit"))
        .collect()
}

/// All orbit points of all dominant samples.
fn all_test_points(r: &Realisation) -> Vec<Point> {
    dominant_tables(r).iter().flat_map(|t| t.points().cloned().collect::<Vec<_>>()).collect()
}

fn sweep_job(name: &str, max_len: usize, every_orbit_point: bool) -> SweepReport {
    let text = format!(
        "coxeter = \"{name}\"\nverify = true\n[sweep]\nmax_word_len = {max_len}\nevery_orbit_point = {every_orbit_point}\n"
    );
    let config = JobConfig::from_toml_str(&text).expect("sweep config");
    sweep(&config, None).expect("sweep runs")
}

fn sweeps() -> Vec<(String, SweepReport)> {
    let mut out = Vec::new();
    for &(name, len) in SWEPT {
        out.push((format!("{name} (dominant, words <= {len})"), sweep_job(name, len, false)));
        if real(name).rank() <= 2 {
            out.push((format!("{name} (every orbit point, words <= {len})"), sweep_job(name, len, true)));
        }
    }
    out
}

fn oracle_equivalence(reports: &[(String, SweepReport)]) -> Outcome {
    let mut cases = 0;
    let mut bad = Vec::new();
    for (label, rep) in reports {
        cases += rep.cases.len();
        let failed: Vec<_> = rep
            .cases
            .iter()
            .filter(|c| c.verified != Some(true) || c.error.is_some() || !c.dimension_conserved)
            .collect();
        if let Some(c) = failed.first() {
            bad.push(format!("{label}: {} failing, first {:?} at {:?}", failed.len(), c.word, c.base_point));
        }
    }
    if bad.is_empty() {
        Ok(format!("{cases} (base point, word) cases over {} sweeps", reports.len()))
    } else {
        Err(bad.join("; "))
    }
}

fn flag_consistency(reports: &[(String, SweepReport)]) -> Outcome {
    let mut cases = 0;
    for (label, rep) in reports {
        cases += rep.cases.len();
        if let Some(c) = rep.cases.iter().find(|c| !c.flag_consistent) {
            return Err(format!("{label}: word {:?} at {:?}", c.word, c.base_point));
        }
    }
    Ok(format!("{cases} cases match subword counts"))
}

fn degenerate_endpoints() -> Outcome {
    let mut checked = 0;
    for &(name, _) in GROUPS {
        let r = real(name);
        let origin = Point::origin(r.dim());
        let regular = dominant_sample(&r, &[]).map_err(|e| e.to_string())?;
        for word in BsWord::all_up_to(r.rank(), 5) {
            let n = word.len();
            let at_origin = specialise(&r, &word, &origin, Caps::default()).map_err(|e| e.to_string())?;
            let full: Vec<_> = word.letters().iter().map(|&s| r.simple_reflection(s)).collect();
            if at_origin.summands.len() != 1 || at_origin.summands[0].letters != full || at_origin.total_dim() != 1 << n
            {
                return Err(format!("{name}: origin, word {word:?}"));
            }
            let split = specialise(&r, &word, &regular, Caps::default()).map_err(|e| e.to_string())?;
            if split.summands.len() != 1 << n || split.summands.iter().any(|s| s.dim() != 1) {
                return Err(format!("{name}: regular point, word {word:?}"));
            }
            checked += 2;
        }
    }
    Ok(format!("{checked} decompositions at the origin and at regular points"))
}

fn support_law() -> Outcome {
    let mut modules = 0;
    let mut extensions = 0;
    for &(name, len) in SWEPT.iter().filter(|(n, _)| *n != "H3") {
        let r = real(name);
        for table in dominant_tables(&r) {
            let mut seen = HashSet::new();
            for word in BsWord::all_up_to(r.rank(), len.min(4)) {
                let m = build_bs_module(&word, table.base_point(), &r);
                support_decompose(&m, &table).map_err(|e| format!("{name} {word:?}: {e}"))?;
                modules += 1;
                let dec = specialise_with_table(&r, &word, &table).map_err(|e| e.to_string())?;
                for s in dec.summands {
                    let key = (s.point.clone(), s.letters.iter().map(|l| l.root.clone()).collect::<Vec<_>>());
                    if !seen.insert(key) {
                        continue;
                    }
                    let single = build_reflection_module(&s.letters, &s.point);
                    for g in 0..r.rank() {
                        let sp = s.point.reflected(&r, g);
                        if sp == s.point {
                            continue;
                        }
                        let parts = support_decompose(&apply_bs(&single, g, &r), &table).map_err(|e| e.to_string())?;
                        let support: HashSet<&Point> = parts.keys().collect();
                        if support != HashSet::from([&s.point, &sp]) {
                            return Err(format!("{name}: s{} on module at {:?}", g + 1, s.point));
                        }
                        extensions += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{modules} modules supported in their orbit; {extensions} single-point extensions with two-point support"
    ))
}

fn twist_law(reports: &[(String, SweepReport)]) -> Outcome {
    let mut pointwise = 0;
    for &(name, _) in GROUPS {
        let r = real(name);
        let els = elements(&r);
        for table in dominant_tables(&r) {
            let a = table.base_point();
            for w in &els {
                let wa = a.moved_by(w);
                for s in 0..r.rank() {
                    if twist(&point_module(&wa), &r.generator(s)) != point_module(&wa.reflected(&r, s)) {
                        return Err(format!("{name}: w = {:?}, s{}", w.word, s + 1));
                    }
                    pointwise += 1;
                }
            }
        }
    }
    // support relabelling for every swept module and every generator
    let mut relabelled = 0;
    let mut tables: HashMap<(String, Point), OrbitTable> = HashMap::new();
    for (_, rep) in reports {
        let name = match &rep.job.coxeter {
            sbim_core::job::CoxeterSpec::Named(n) => n.clone(),
            other => return Err(format!("unexpected sweep type {other:?}")),
        };
        let r = real(&name);
        for case in &rep.cases {
            let table = tables
                .entry((name.clone(), case.base_point.clone()))
                .or_insert_with(|| orbit_table(&r, &case.base_point, Caps::default()).expect("orbit"));
            if case.word.len() > 4 {
                continue;
            }
            let m = build_bs_module(&case.word, &case.base_point, &r);
            let before = support_decompose(&m, table).map_err(|e| e.to_string())?;
            for s in 0..r.rank() {
                let g = r.generator(s);
                let after = support_decompose(&twist(&m, &g), table).map_err(|e| e.to_string())?;
                let relabel: HashMap<Point, _> = before.iter().map(|(p, l)| (p.moved_by(&g), l.clone())).collect();
                let after: HashMap<Point, _> = after.into_iter().collect();
                if relabel != after {
                    return Err(format!("{name}: word {:?} twisted by s{}", case.word, s + 1));
                }
                relabelled += 1;
            }
        }
    }
    Ok(format!("{pointwise} twisted point modules; {relabelled} twisted module supports"))
}

fn stabilisers() -> Outcome {
    let mut points = 0;
    for &(name, order) in GROUPS {
        let r = real(name);
        let els = elements(&r);
        for a in all_test_points(&r) {
            let sys = stabiliser_system(&r, &a, Caps::default()).map_err(|e| e.to_string())?;
            let gens: Vec<_> = sys.generators.iter().map(|g| g.element.clone()).collect();
            let generated = generated_subgroup(&r, &gens, order).map_err(|e| e.to_string())?;
            let brute: HashSet<Matrix> = els.iter().filter(|g| a.moved_by(g) == a).map(|g| g.matrix.clone()).collect();
            if generated != brute {
                return Err(format!("{name}: stabiliser of {a:?}"));
            }
            let orbit = orbit_table(&r, &a, Caps::default()).map_err(|e| e.to_string())?;
            if orbit.len() * brute.len() != order {
                return Err(format!("{name}: |orbit| |stab| at {a:?}"));
            }
            points += 1;
        }
    }
    Ok(format!("{points} points"))
}

fn group_sanity() -> Outcome {
    let mut local = 0;
    for &(name, order) in GROUPS {
        let r = real(name);
        let found = r.enumerate_group(usize::MAX);
        if !found.complete || found.elements.len() != order {
            return Err(format!("{name}: order {} instead of {order}", found.elements.len()));
        }
        let cm = r.coxeter_matrix();
        for s in 0..r.rank() {
            for t in 0..r.rank() {
                let m = cm.get(s, t).ok_or("finite type")? as usize;
                let alt = |x: usize, y: usize| (0..m).map(|i| if i % 2 == 0 { x } else { y }).collect::<Vec<_>>();
                let lhs = r.element_from_word(&alt(s, t)).map_err(|e| e.to_string())?;
                let rhs = r.element_from_word(&alt(t, s)).map_err(|e| e.to_string())?;
                if lhs.matrix != rhs.matrix || brute_order(&r.generator(s).compose(&r.generator(t)).matrix) != m {
                    return Err(format!("{name}: braid relation for s{} s{}", s + 1, t + 1));
                }
            }
        }
        for a in all_test_points(&r) {
            let sys = stabiliser_system(&r, &a, Caps::default()).map_err(|e| e.to_string())?;
            let Some(lc) = &sys.local_coxeter else { continue };
            for (i, x) in sys.generators.iter().enumerate() {
                for (j, y) in sys.generators.iter().enumerate() {
                    let m = brute_order(&x.element.matrix.matmul(&y.element.matrix));
                    if lc.get(i, j).map(|v| v as usize) != Some(m) {
                        return Err(format!("{name}: local Coxeter entry ({i},{j}) at {a:?}"));
                    }
                    local += 1;
                }
            }
        }
    }
    Ok(format!("{} group orders, braid relations, {local} local product orders", GROUPS.len()))
}

fn brute_order(m: &Matrix) -> usize {
    let mut acc = m.clone();
    let mut k = 1;
    while !acc.is_identity() {
        acc = acc.matmul(m);
        k += 1;
    }
    k
}

fn main() -> ExitCode {
    let start = Instant::now();
    let reports = sweeps();
    let swept = start.elapsed();
    let results: Vec<(&str, Outcome)> = vec![
        ("oracle equivalence", oracle_equivalence(&reports)),
        ("flag consistency", flag_consistency(&reports)),
        ("degenerate endpoints", degenerate_endpoints()),
        ("support law", support_law()),
        ("twist law", twist_law(&reports)),
        ("stabiliser correctness", stabilisers()),
        ("group sanity", group_sanity()),
    ];
    let mut ok = true;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                ok = false;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("sweeps took {:.1}s, total {:.1}s", swept.as_secs_f64(), start.elapsed().as_secs_f64());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
