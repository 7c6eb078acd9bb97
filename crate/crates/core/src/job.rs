//! Declarative jobs: configuration, validation, single runs and sweeps.
//!
//! A job file names a Coxeter system, a point and a word. Generator labels
//! in job files and reports are 1-based (`s1, s2, ...`); the library API
//! underneath is 0-based.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coxeter::{one_based, word_label, CoxeterMatrix, Realisation, Reflection, RootRecord};
use crate::engine::{
    check_local_simplicity, specialise_with_table, standard_flag_prediction, BsWord, Decomposition,
    LocalSimplicityReport,
};
use crate::field::{is_squarefree, FieldScalar};
use crate::oracle::{verify_against, OracleError, VerificationReport};
use crate::tits::{minimal_length_discrepancies, orbit_table, Caps, OrbitTable, Point, TitsError};

/// Longest word a sweep accepts.
pub const MAX_SWEEP_WORD_LEN: usize = 12;

/// Process exit status of a job.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitStatus {
    Success,
    VerificationFailed,
    ConfigError,
    PreconditionFailed,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            Self::Success => 0,
            Self::VerificationFailed => 1,
            Self::ConfigError => 2,
            Self::PreconditionFailed => 3,
        }
    }
}

impl fmt::Display for ExitStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::Success => "success",
            Self::VerificationFailed => "verification failed",
            Self::ConfigError => "configuration error",
            Self::PreconditionFailed => "precondition failed",
        };
        write!(f, "{name} (exit {})", self.code())
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum JobError {
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("cannot parse configuration: {0}")]
    Parse(String),
    #[error("invalid configuration:{}", .0.iter().map(|p| format!("\n  - {p}")).collect::<String>())]
    Invalid(Vec<String>),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl JobError {
    pub fn exit_status(&self) -> ExitStatus {
        match self {
            Self::Precondition(_) => ExitStatus::PreconditionFailed,
            _ => ExitStatus::ConfigError,
        }
    }
}

impl From<TitsError> for JobError {
    fn from(e: TitsError) -> Self {
        Self::Precondition(e.to_string())
    }
}

/// A built-in type name or an explicit Coxeter matrix (`0` = infinity),
/// optionally with user roots and coroots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoxeterSpec {
    Named(String),
    Matrix {
        matrix: Vec<Vec<u32>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        roots: Option<Vec<Vec<FieldScalar>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coroots: Option<Vec<Vec<FieldScalar>>>,
    },
}

/// A point given by coordinates or by its coroot pairings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PointSpec {
    Coords(Vec<FieldScalar>),
    Pairings(Vec<FieldScalar>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    /// Print the human-readable tables.
    pub table: bool,
    /// Write the JSON report here.
    pub json: Option<PathBuf>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { table: true, json: None }
    }
}

/// Sweep parameters. The presence of a `[sweep]` section selects sweep
/// mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub max_word_len: usize,
    /// Use every orbit point of each sample point as a base point, not only
    /// the dominant one.
    pub every_orbit_point: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self { max_word_len: 4, every_orbit_point: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub coxeter: CoxeterSpec,
    /// Radicand `d` of the coefficient field `Q(sqrt(d))`; inferred from
    /// the realisation when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<PointSpec>,
    /// 1-based generator labels, leftmost letter first.
    #[serde(default)]
    pub word: Vec<usize>,
    #[serde(default)]
    pub verify: bool,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    /// Where results go; not part of the computation, so not echoed into
    /// reports.
    #[serde(default, skip_serializing)]
    pub output: OutputSpec,
}

/// A validated job, ready to run.
#[derive(Clone, Debug)]
pub struct PreparedJob {
    pub real: Realisation,
    pub field_d: u32,
    pub point: Option<Point>,
    pub word: BsWord,
    pub caps: Caps,
}

impl JobConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, JobError> {
        toml::from_str(text).map_err(|e| JobError::Parse(e.to_string()))
    }

    /// Accepts a bare job or a report carrying one under `"job"`.
    pub fn from_json_str(text: &str) -> Result<Self, JobError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| JobError::Parse(e.to_string()))?;
        let value = match value {
            serde_json::Value::Object(mut map) if map.contains_key("job") => map.remove("job").unwrap_or_default(),
            v => v,
        };
        serde_json::from_value(value).map_err(|e| JobError::Parse(e.to_string()))
    }

    /// Reads a `.json` file as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self, JobError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| JobError::Io { path: path.to_path_buf(), message: e.to_string() })?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            Self::from_json_str(&text)
        } else {
            Self::from_toml_str(&text)
        }
    }

    pub fn is_sweep(&self) -> bool {
        self.sweep.is_some()
    }

    /// Validates everything that can be checked without running the job,
    /// collecting all problems into one error.
    pub fn prepare(&self) -> Result<PreparedJob, JobError> {
        let mut problems = Vec::new();
        let real = match self.realisation() {
            Ok(r) => Some(r),
            Err(e) => {
                problems.push(format!("coxeter: {e}"));
                None
            }
        };
        if let Some(d) = self.field_d {
            if !is_squarefree(d) {
                problems.push(format!("field_d: {d} is not squarefree"));
            }
        }
        let field_d = match (&real, self.field_d) {
            (Some(r), Some(d)) if r.radicand() != 0 && r.radicand() != d => {
                problems
                    .push(format!("field_d: the realisation lives over Q(sqrt({})), not Q(sqrt({d}))", r.radicand()));
                d
            }
            (_, Some(d)) => d,
            (Some(r), None) => r.radicand(),
            (None, None) => 0,
        };
        if self.caps.orbit == 0 || self.caps.descent == 0 {
            problems.push("caps: orbit and descent caps must be positive".into());
        }
        if let Some(sw) = &self.sweep {
            if sw.max_word_len > MAX_SWEEP_WORD_LEN {
                problems.push(format!("sweep.max_word_len: {} exceeds {MAX_SWEEP_WORD_LEN}", sw.max_word_len));
            }
        } else if self.point.is_none() {
            problems.push("point: missing (give coords or pairings)".into());
        }
        let point = self.point.as_ref().and_then(|spec| {
            let (key, values) = match spec {
                PointSpec::Coords(v) => ("coords", v),
                PointSpec::Pairings(v) => ("pairings", v),
            };
            let mut ok = true;
            for x in values {
                if x.radicand() != 0 && x.radicand() != field_d {
                    problems.push(format!("point.{key}: {x} is not in the field Q(sqrt({field_d}))"));
                    ok = false;
                }
            }
            let real = real.as_ref().filter(|_| ok)?;
            let result = match spec {
                PointSpec::Coords(v) => Point::checked(real, v.clone()),
                PointSpec::Pairings(v) => Point::from_pairings(real, v),
            };
            result.map_err(|e| problems.push(format!("point.{key}: {e}"))).ok()
        });
        let mut word = Vec::with_capacity(self.word.len());
        for (i, &g) in self.word.iter().enumerate() {
            match &real {
                Some(r) if g == 0 || g > r.rank() => problems
                    .push(format!("word[{i}]: generator index out of range: {g} (generators are 1..={})", r.rank())),
                _ => word.push(g.saturating_sub(1)),
            }
        }
        match (real, problems.is_empty()) {
            (Some(real), true) => Ok(PreparedJob { real, field_d, point, word: BsWord::new(word), caps: self.caps }),
            _ => Err(JobError::Invalid(problems)),
        }
    }

    fn realisation(&self) -> Result<Realisation, String> {
        match &self.coxeter {
            CoxeterSpec::Named(name) => Realisation::named(name).map_err(|e| e.to_string()),
            CoxeterSpec::Matrix { matrix, roots, coroots } => {
                let m = CoxeterMatrix::new(matrix.clone()).map_err(|e| e.to_string())?;
                match (roots, coroots) {
                    (None, None) => Realisation::cartan(m),
                    (Some(r), Some(c)) => Realisation::from_roots(m, r.clone(), c.clone()),
                    _ => return Err("roots and coroots must be given together".into()),
                }
                .map_err(|e| e.to_string())
            }
        }
    }
}

/// A point with its coroot pairings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointRecord {
    pub coords: Point,
    pub pairings: Vec<FieldScalar>,
}

impl PointRecord {
    fn new(real: &Realisation, p: &Point) -> Self {
        Self { coords: p.clone(), pairings: p.pairings(real) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StabiliserRecord {
    /// The orbit representative in the fundamental chamber.
    pub chamber_point: PointRecord,
    /// Minimal `w` carrying the chamber point to the base point.
    #[serde(with = "one_based")]
    pub conjugator: Vec<usize>,
    /// Simple reflections fixing the chamber point.
    #[serde(with = "one_based")]
    pub parabolic: Vec<usize>,
    pub simple_system: Vec<RootRecord>,
    pub local_coxeter: Option<CoxeterMatrix>,
    pub minimal_length_discrepancies: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitRow {
    pub point: PointRecord,
    /// Minimal representative `t_p`.
    #[serde(with = "one_based")]
    pub representative: Vec<usize>,
    pub simple_system: Vec<RootRecord>,
}

/// Engine dimension against the subword count at one point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagRow {
    pub point: Point,
    pub engine: u64,
    pub predicted: u64,
    pub pass: bool,
}

/// Everything a single run computes.
#[derive(Clone, Debug, Serialize)]
pub struct JobReport {
    pub job: JobConfig,
    pub coxeter: CoxeterMatrix,
    pub field_d: u32,
    pub point: PointRecord,
    pub word: BsWord,
    pub stabiliser: StabiliserRecord,
    pub orbit: Vec<OrbitRow>,
    pub decomposition: Decomposition,
    pub total_dim: u64,
    pub dimension_conserved: bool,
    pub local_simplicity: LocalSimplicityReport,
    pub flag_check: Vec<FlagRow>,
    pub flag_consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification_error: Option<String>,
    pub status: ExitStatus,
}

fn records(rs: &[Reflection]) -> Vec<RootRecord> {
    rs.iter().map(RootRecord::from).collect()
}

/// Per orbit point (in orbit order), engine dimension against the
/// subword prediction; points where both are zero are omitted.
fn flag_rows(real: &Realisation, dec: &Decomposition, table: &OrbitTable) -> Result<Vec<FlagRow>, TitsError> {
    let engine = dec.dims_by_point();
    let predicted = standard_flag_prediction(real, &dec.source_word, table.base_point())?;
    Ok(table
        .points()
        .filter_map(|p| {
            let e = engine.get(p).copied().unwrap_or(0);
            let f = predicted.get(p).copied().unwrap_or(0);
            (e > 0 || f > 0).then(|| FlagRow { point: p.clone(), engine: e, predicted: f, pass: e == f })
        })
        .collect())
}

/// Runs a single job.
pub fn run(config: &JobConfig) -> Result<JobReport, JobError> {
    let job = config.prepare()?;
    let real = &job.real;
    let Some(point) = &job.point else {
        return Err(JobError::Invalid(vec!["point: missing (give coords or pairings)".into()]));
    };
    let table = orbit_table(real, point, job.caps)?;
    let dec = specialise_with_table(real, &job.word, &table)?;
    let local_simplicity = check_local_simplicity(&dec, &table);
    let flag_check = flag_rows(real, &dec, &table)?;
    let flag_consistent = flag_check.iter().all(|r| r.pass);
    let total_dim = dec.total_dim();
    let dimension_conserved = total_dim == 1u64 << job.word.len();

    let sys = &table.stabiliser;
    let discrepancies = minimal_length_discrepancies(real, sys).unwrap_or_else(|e| vec![format!("not checked: {e}")]);
    let stabiliser = StabiliserRecord {
        chamber_point: PointRecord::new(real, &sys.base_point),
        conjugator: sys.conjugator.word.clone(),
        parabolic: sys.parabolic.clone(),
        simple_system: records(&sys.generators),
        local_coxeter: sys.local_coxeter.clone(),
        minimal_length_discrepancies: discrepancies,
    };
    let orbit = table
        .entries
        .iter()
        .map(|e| OrbitRow {
            point: PointRecord::new(real, &e.point),
            representative: e.representative.word.clone(),
            simple_system: records(&e.local_simple),
        })
        .collect();

    let (verification, verification_error) = if config.verify {
        match verify_against(real, &dec, &table) {
            Ok(r) => (Some(r), None),
            Err(OracleError::Tits(e)) => return Err(e.into()),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    let verified = verification_error.is_none() && verification.as_ref().is_none_or(|v| v.pass);
    let status = if dimension_conserved && flag_consistent && verified {
        ExitStatus::Success
    } else {
        ExitStatus::VerificationFailed
    };
    Ok(JobReport {
        job: config.clone(),
        coxeter: real.coxeter_matrix().clone(),
        field_d: job.field_d,
        point: PointRecord::new(real, point),
        word: job.word.clone(),
        stabiliser,
        orbit,
        decomposition: dec,
        total_dim,
        dimension_conserved,
        local_simplicity,
        flag_check,
        flag_consistent,
        verification,
        verification_error,
        status,
    })
}

/// One (base point, word) case of a sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepCase {
    /// Walls (1-based) of the dominant sample point this case came from.
    #[serde(with = "one_based")]
    pub walls: Vec<usize>,
    pub base_point: Point,
    pub word: BsWord,
    pub summands: usize,
    pub dimension_conserved: bool,
    pub flag_consistent: bool,
    pub all_local_simple: bool,
    pub non_minimal_moves: usize,
    /// Oracle verdict; `None` when verification is off.
    pub verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepTotals {
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub verified: usize,
    pub not_local_simple: usize,
    pub with_non_minimal_moves: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub job: JobConfig,
    pub coxeter: CoxeterMatrix,
    pub field_d: u32,
    pub max_word_len: usize,
    pub verify: bool,
    pub base_points: usize,
    pub cases: Vec<SweepCase>,
    pub totals: SweepTotals,
    pub status: ExitStatus,
}

/// The dominant sample point vanishing exactly on `walls`: pairing 0 on the
/// walls and 1 elsewhere.
pub fn dominant_sample(real: &Realisation, walls: &[usize]) -> Result<Point, TitsError> {
    let pairings: Vec<FieldScalar> =
        (0..real.rank()).map(|s| FieldScalar::from(i64::from(!walls.contains(&s)))).collect();
    Point::from_pairings(real, &pairings)
}

/// All subsets of `0..rank`, by bitmask order.
pub fn wall_subsets(rank: usize) -> Vec<Vec<usize>> {
    (0u32..1 << rank).map(|mask| (0..rank).filter(|&s| mask >> s & 1 == 1).collect()).collect()
}

/// Runs the checks of a sweep on one case.
pub fn sweep_case(real: &Realisation, table: &OrbitTable, walls: &[usize], word: &BsWord, verify: bool) -> SweepCase {
    let mut case = SweepCase {
        walls: walls.to_vec(),
        base_point: table.base_point().clone(),
        word: word.clone(),
        summands: 0,
        dimension_conserved: false,
        flag_consistent: false,
        all_local_simple: false,
        non_minimal_moves: 0,
        verified: None,
        error: None,
        pass: false,
    };
    let dec = match specialise_with_table(real, word, table) {
        Ok(d) => d,
        Err(e) => {
            case.error = Some(e.to_string());
            return case;
        }
    };
    case.summands = dec.summands.len();
    case.dimension_conserved = dec.total_dim() == 1u64 << word.len();
    match flag_rows(real, &dec, table) {
        Ok(rows) => case.flag_consistent = rows.iter().all(|r| r.pass),
        Err(e) => case.error = Some(e.to_string()),
    }
    let local = check_local_simplicity(&dec, table);
    case.all_local_simple = local.all_local_simple;
    case.non_minimal_moves = local.non_minimal_moves.len();
    if verify {
        match verify_against(real, &dec, table) {
            Ok(r) => case.verified = Some(r.pass),
            Err(e) => {
                case.verified = Some(false);
                case.error = Some(e.to_string());
            }
        }
    }
    case.pass =
        case.error.is_none() && case.dimension_conserved && case.flag_consistent && case.verified != Some(false);
    case
}

/// Sweeps all wall subsets of a dominant sample point and all words up to
/// the configured length. Cases run in parallel on `threads` workers (the
/// global pool when `None`); results keep a fixed order.
pub fn sweep(config: &JobConfig, threads: Option<usize>) -> Result<SweepReport, JobError> {
    let job = config.prepare()?;
    let spec = config.sweep.clone().unwrap_or_default();
    let real = &job.real;
    real.positive_roots().map_err(|e| JobError::Precondition(format!("sweeps need a finite Coxeter group: {e}")))?;

    let mut bases: Vec<(Vec<usize>, OrbitTable)> = Vec::new();
    for walls in wall_subsets(real.rank()) {
        let a = dominant_sample(real, &walls)?;
        let table = orbit_table(real, &a, job.caps)?;
        if spec.every_orbit_point {
            for p in table.points() {
                bases.push((walls.clone(), orbit_table(real, p, job.caps)?));
            }
        } else {
            bases.push((walls, table));
        }
    }
    let words = BsWord::all_up_to(real.rank(), spec.max_word_len);
    let work: Vec<(usize, &BsWord)> = (0..bases.len()).flat_map(|b| words.iter().map(move |w| (b, w))).collect();
    let compute = || -> Vec<SweepCase> {
        work.par_iter().map(|&(b, w)| sweep_case(real, &bases[b].1, &bases[b].0, w, config.verify)).collect()
    };
    let cases = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| JobError::Precondition(format!("cannot start thread pool: {e}")))?
            .install(compute),
        None => compute(),
    };

    let totals = SweepTotals {
        cases: cases.len(),
        passed: cases.iter().filter(|c| c.pass).count(),
        failed: cases.iter().filter(|c| !c.pass).count(),
        errors: cases.iter().filter(|c| c.error.is_some()).count(),
        verified: cases.iter().filter(|c| c.verified == Some(true)).count(),
        not_local_simple: cases.iter().filter(|c| !c.all_local_simple).count(),
        with_non_minimal_moves: cases.iter().filter(|c| c.non_minimal_moves > 0).count(),
    };
    let status = if totals.failed == 0 { ExitStatus::Success } else { ExitStatus::VerificationFailed };
    Ok(SweepReport {
        job: config.clone(),
        coxeter: real.coxeter_matrix().clone(),
        field_d: job.field_d,
        max_word_len: spec.max_word_len,
        verify: config.verify,
        base_points: bases.len(),
        cases,
        totals,
        status,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialise");
    s.push('\n');
    s
}

fn field_name(d: u32) -> String {
    if d == 0 {
        "Q".into()
    } else {
        format!("Q(sqrt({d}))")
    }
}

fn vector(v: &[FieldScalar]) -> String {
    Point::new(v.to_vec()).to_string()
}

fn labels(rs: &[RootRecord]) -> String {
    let l: Vec<String> = rs.iter().map(|r| word_label(&r.word)).collect();
    format!("[{}]", l.join("; "))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Left-aligned columns separated by two spaces.
fn grid(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut line = |cells: Vec<String>| {
        let mut l = String::from("  ");
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                l.push_str(cell);
            } else {
                let pad = w - cell.chars().count();
                let _ = write!(l, "{cell}{}  ", " ".repeat(pad));
            }
        }
        out.push_str(l.trim_end());
        out.push('\n');
    };
    line(header.iter().map(|h| h.to_string()).collect());
    for row in rows {
        line(row.clone());
    }
}

/// Human-readable tables for a single run.
pub fn render_report(r: &JobReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Coxeter matrix {}  over {}", r.coxeter, field_name(r.field_d));
    let _ = writeln!(out, "point {}  pairings {}", r.point.coords, vector(&r.point.pairings));
    let _ = writeln!(out, "word {}", r.word);

    let s = &r.stabiliser;
    let _ = writeln!(out, "\nStabiliser");
    let _ =
        writeln!(out, "  chamber point   {}  pairings {}", s.chamber_point.coords, vector(&s.chamber_point.pairings));
    let _ = writeln!(out, "  conjugator      {}", word_label(&s.conjugator));
    let parabolic: Vec<String> = s.parabolic.iter().map(|i| format!("s{}", i + 1)).collect();
    let _ = writeln!(out, "  parabolic       {{{}}}", parabolic.join(", "));
    let _ = writeln!(out, "  simple system   {}", labels(&s.simple_system));
    let local = s.local_coxeter.as_ref().map_or_else(|| "trivial".to_string(), ToString::to_string);
    let _ = writeln!(out, "  local Coxeter   {local}");
    for d in &s.minimal_length_discrepancies {
        let _ = writeln!(out, "  discrepancy     {d}");
    }

    let _ = writeln!(out, "\nOrbit ({} points)", r.orbit.len());
    let rows: Vec<Vec<String>> = r
        .orbit
        .iter()
        .enumerate()
        .map(|(i, o)| {
            vec![
                i.to_string(),
                o.point.coords.to_string(),
                vector(&o.point.pairings),
                word_label(&o.representative),
                labels(&o.simple_system),
            ]
        })
        .collect();
    grid(&mut out, &["#", "point", "pairings", "t_p", "S_p"], &rows);

    let summands = &r.decomposition.summands;
    let _ = writeln!(
        out,
        "\nDecomposition ({} summands, total dim {}, conserved: {})",
        summands.len(),
        r.total_dim,
        yes_no(r.dimension_conserved)
    );
    let rows: Vec<Vec<String>> = summands
        .iter()
        .enumerate()
        .map(|(i, sm)| {
            let trace: Vec<String> = sm.origin_trace.iter().map(ToString::to_string).collect();
            vec![
                i.to_string(),
                sm.point.to_string(),
                format!("[{}]", sm.letter_labels().join("; ")),
                sm.dim().to_string(),
                yes_no(sm.in_local_simple_system).to_string(),
                trace.join(", "),
            ]
        })
        .collect();
    grid(&mut out, &["#", "point", "letters", "dim", "local-simple", "trace"], &rows);
    let ls = &r.local_simplicity;
    let _ = writeln!(
        out,
        "  local simplicity: {} of {} summands; non-minimal moves in {}",
        ls.per_summand.iter().filter(|&&b| b).count(),
        ls.per_summand.len(),
        ls.non_minimal_moves.len()
    );

    let _ = writeln!(out, "\nFlag cross-check (consistent: {})", yes_no(r.flag_consistent));
    let rows: Vec<Vec<String>> = r
        .flag_check
        .iter()
        .map(|f| vec![f.point.to_string(), f.engine.to_string(), f.predicted.to_string(), yes_no(f.pass).into()])
        .collect();
    grid(&mut out, &["point", "engine", "subwords", "ok"], &rows);

    if let Some(v) = &r.verification {
        let _ = writeln!(
            out,
            "\nOracle verification (module dim {}, commuting: {}, pass: {})",
            v.module_dim,
            yes_no(v.commutes),
            yes_no(v.pass)
        );
        let rows: Vec<Vec<String>> = v
            .points
            .iter()
            .map(|c| {
                vec![
                    c.point.to_string(),
                    c.oracle_dim.to_string(),
                    c.engine_dim.to_string(),
                    format!("{:?}", c.oracle_profile),
                    format!("{:?}", c.engine_profile),
                    yes_no(c.pass).into(),
                ]
            })
            .collect();
        grid(&mut out, &["point", "oracle dim", "engine dim", "oracle profile", "engine profile", "ok"], &rows);
        for c in v.failures() {
            if let Some(note) = &c.note {
                let _ = writeln!(out, "  mismatch at {}: {note}", c.point);
            }
        }
    }
    if let Some(e) = &r.verification_error {
        let _ = writeln!(out, "\nOracle verification failed: {e}");
    }
    let _ = writeln!(out, "\nstatus: {}", r.status);
    out
}

/// Human-readable summary of a sweep: one row per base point, then every
/// failing case.
pub fn render_sweep(r: &SweepReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Sweep of {} over {}: {} base points, words up to length {}, oracle {}",
        r.coxeter,
        field_name(r.field_d),
        r.base_points,
        r.max_word_len,
        if r.verify { "on" } else { "off" }
    );
    let mut rows: Vec<Vec<String>> = Vec::new();
    for chunk in r.cases.chunk_by(|a, b| a.base_point == b.base_point && a.walls == b.walls) {
        let first = &chunk[0];
        let walls: Vec<String> = first.walls.iter().map(|s| format!("s{}", s + 1)).collect();
        rows.push(vec![
            format!("{{{}}}", walls.join(", ")),
            first.base_point.to_string(),
            chunk.len().to_string(),
            chunk.iter().filter(|c| c.pass).count().to_string(),
            chunk.iter().filter(|c| !c.pass).count().to_string(),
            chunk.iter().filter(|c| !c.all_local_simple).count().to_string(),
        ]);
    }
    grid(&mut out, &["walls", "base point", "cases", "passed", "failed", "not local-simple"], &rows);
    let failures: Vec<&SweepCase> = r.cases.iter().filter(|c| !c.pass).collect();
    if !failures.is_empty() {
        let _ = writeln!(out, "\nFailures");
        for c in failures {
            let _ = writeln!(
                out,
                "  {} word {}: dims {}, flag {}, oracle {}{}",
                c.base_point,
                c.word,
                yes_no(c.dimension_conserved),
                yes_no(c.flag_consistent),
                c.verified.map_or("off", |v| if v { "pass" } else { "FAIL" }),
                c.error.as_ref().map(|e| format!(" ({e})")).unwrap_or_default()
            );
        }
    }
    let t = &r.totals;
    let _ = writeln!(
        out,
        "\ncases {}  passed {}  failed {}  errors {}  verified {}  not local-simple {}  with non-minimal moves {}",
        t.cases, t.passed, t.failed, t.errors, t.verified, t.not_local_simple, t.with_non_minimal_moves
    );
    let _ = writeln!(out, "status: {}", r.status);
    out
}
