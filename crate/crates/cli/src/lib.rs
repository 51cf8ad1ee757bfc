//! Command implementations behind the `morsepoly` binary.
//!
//! Every command takes already-read input text and returns the text to emit
//! plus an exit code, so the binary only handles argument parsing and files.
//! Exit codes: 0 success, 1 a computed identity or cross-check disagreed,
//! 2 unreadable input or a violated hypothesis.

use std::fmt::Write as _;
use std::path::PathBuf;

use morsepoly::chain_index::{verify_representation, IndexReport};
use morsepoly::cw_ingest::{self, morse_inequality_report, CellularReport, ComplexSpec, MorseInequalityReport};
use morsepoly::generate::{gen_complex, gen_morse, ComplexParams};
use morsepoly::geometry::{cross_check, embed_vertices, CrossCheck};
use morsepoly::morse::{
    check_exclusivity, classify, normalize_traced, validate_morse, MorseDoc, NormalizeOptions, Validity, Verdict,
};
use morsepoly::poset::{
    check_properties, compute_rank_function, euler_characteristic, order_complex, PosetDoc, PropertyReport,
    RankFunction,
};
use morsepoly::{Error, MorseFunction, Poset};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Check,
    Classify,
    Normalize,
    Index,
    Embed,
    Verify,
    Euler,
    Gen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
    /// Only for `embed`.
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GenKind {
    #[default]
    Complex,
    Morse,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub input_path: Option<PathBuf>,
    pub morse_path: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub strict: bool,
    pub gen_kind: GenKind,
    pub gen_params: ComplexParams,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            input_path: None,
            morse_path: None,
            output_path: None,
            format: Format::Json,
            seed: 0,
            strict: false,
            gen_kind: GenKind::Complex,
            gen_params: ComplexParams {
                n_vertices: 4,
                dimension: 2,
                density: 0.5,
            },
        }
    }
}

/// What a command produced. A non-zero `code` may still come with output
/// (a report explaining the failure).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub message: String,
    pub code: i32,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Mismatch { .. } | Error::IdentityViolated { .. } => 1,
            _ => 2,
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::input(format!("parse error: {e}"))
    }
}

/// Raw file contents handed to [`execute`].
#[derive(Debug, Clone, Default)]
pub struct Inputs {
    pub input: Option<String>,
    pub morse: Option<String>,
}

/// Reads the files named in `cfg` and runs the command.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let read = |p: &Option<PathBuf>| -> Result<Option<String>, CliError> {
        p.as_ref()
            .map(|p| std::fs::read_to_string(p).map_err(|e| CliError::input(format!("{}: {e}", p.display()))))
            .transpose()
    };
    execute(
        cfg,
        &Inputs {
            input: read(&cfg.input_path)?,
            morse: read(&cfg.morse_path)?,
        },
    )
}

pub fn execute(cfg: &RunConfig, inputs: &Inputs) -> Result<Outcome, CliError> {
    if cfg.format == Format::Csv && cfg.command != Command::Embed {
        return Err(CliError::input("csv output is only available for `embed`"));
    }
    if cfg.command == Command::Gen && cfg.gen_kind == GenKind::Complex {
        return cmd_gen_complex(cfg);
    }
    let text = inputs.input.as_deref().ok_or_else(|| CliError::input("missing --in"))?;
    let loaded = Loaded::parse(text)?;
    match cfg.command {
        Command::Check => cmd_check(cfg, &loaded),
        Command::Gen => cmd_gen_morse(cfg, &loaded),
        Command::Euler => cmd_euler(cfg, &loaded, inputs.morse.as_deref()),
        cmd => {
            let f = loaded.morse(inputs.morse.as_deref())?;
            match cmd {
                Command::Classify => cmd_classify(cfg, &loaded.poset, &f),
                Command::Normalize => cmd_normalize(cfg, &loaded.poset, &f),
                Command::Index => cmd_index(cfg, &loaded.poset, &f),
                Command::Embed => cmd_embed(cfg, &loaded.poset, &f),
                Command::Verify => cmd_verify(cfg, &loaded.poset, &f),
                Command::Check | Command::Gen | Command::Euler => unreachable!(),
            }
        }
    }
}

/// An input file: either a poset document or a complex description (told
/// apart by the `kind` key), reduced to a poset.
pub struct Loaded {
    pub poset: Poset,
    pub rank: Option<RankFunction>,
    pub cellular: Option<CellularReport>,
}

impl Loaded {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        if value.get("kind").is_some() {
            let spec: ComplexSpec = serde_json::from_value(value)?;
            let (face, cellular) = match &spec {
                ComplexSpec::Cellular { .. } => {
                    let (face, report) = cw_ingest::face_poset_cellular(&spec)?;
                    (face, Some(report))
                }
                ComplexSpec::Simplicial { .. } => (cw_ingest::face_poset_simplicial(&spec)?, None),
            };
            Ok(Loaded {
                poset: face.poset,
                rank: Some(face.rank),
                cellular,
            })
        } else {
            let doc: PosetDoc = serde_json::from_value(value)?;
            let poset = Poset::from_doc(&doc)?;
            let rank = compute_rank_function(&poset).ok();
            Ok(Loaded {
                poset,
                rank,
                cellular: None,
            })
        }
    }

    /// The function from `--morse`, or the rank function when none is given.
    pub fn morse(&self, text: Option<&str>) -> Result<MorseFunction, CliError> {
        match text {
            Some(t) => {
                let doc: MorseDoc = serde_json::from_str(t)?;
                Ok(MorseFunction::from_doc(&self.poset, &doc)?)
            }
            None => self
                .rank
                .as_ref()
                .map(cw_ingest::dimension_morse)
                .ok_or_else(|| CliError::input("no --morse given and the poset has no rank function to default to")),
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn ok(output: String) -> Result<Outcome, CliError> {
    Ok(Outcome { output, code: 0 })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    #[serde(flatten)]
    pub properties: PropertyReport,
    /// Present for cellular input only; always false.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified_regular_cw: Option<bool>,
}

fn cmd_check(cfg: &RunConfig, loaded: &Loaded) -> Result<Outcome, CliError> {
    let report = CheckReport {
        properties: check_properties(&loaded.poset),
        verified_regular_cw: loaded.cellular.as_ref().map(|c| c.verified_regular_cw),
    };
    let output = match cfg.format {
        Format::Text => {
            let p = &report.properties;
            let mut s = String::new();
            writeln!(s, "2-wide: {}", yes_no(p.two_wide)).unwrap();
            if let Some([a, b, c]) = &p.two_wide_witness {
                writeln!(s, "  {a} < {b} < {c} has no other middle element").unwrap();
            }
            writeln!(s, "parity rank function: {}", yes_no(p.parity_graded)).unwrap();
            if let Some([e, via, other]) = &p.parity_conflict {
                writeln!(s, "  {e} covers both {via} and {other}, which force different parities").unwrap();
            }
            match p.downward_eulerian {
                Some(d) => writeln!(s, "downward Eulerian: {}", yes_no(d)).unwrap(),
                None => writeln!(s, "downward Eulerian: not checked (no parity rank function)").unwrap(),
            }
            for v in &p.eulerian_violations {
                writeln!(s, "  below {}: chi = {}, required {}", v.element, v.chi, v.required).unwrap();
            }
            s
        }
        _ => json(&report),
    };
    let code = if cfg.strict && !report.properties.all_hold() {
        1
    } else {
        0
    };
    Ok(Outcome { output, code })
}

#[derive(Debug, Serialize)]
pub struct ElementVerdict {
    pub element: String,
    pub critical: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<&'static str>,
}

#[derive(Debug, Serialize)]
pub struct BothDirections {
    pub element: String,
    pub below: String,
    pub above: String,
}

#[derive(Debug, Serialize)]
pub struct ViolationDoc {
    pub element: String,
    pub direction: &'static str,
    pub witnesses: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct ClassifyReport {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<ViolationDoc>,
    pub elements: Vec<ElementVerdict>,
    pub critical: Vec<String>,
    /// Elements with non-increasing covers on both sides (possible only
    /// when the poset is not 2-wide).
    pub both_directions: Vec<BothDirections>,
}

fn direction_str(d: morsepoly::morse::Direction) -> &'static str {
    match d {
        morsepoly::morse::Direction::Below => "below",
        morsepoly::morse::Direction::Above => "above",
    }
}

pub fn classify_report(poset: &Poset, f: &MorseFunction) -> Result<ClassifyReport, CliError> {
    let name = |i: usize| poset.id(i).to_string();
    if let Validity::Invalid(v) = validate_morse(poset, f)? {
        return Ok(ClassifyReport {
            valid: false,
            violation: Some(ViolationDoc {
                element: name(v.element),
                direction: direction_str(v.direction),
                witnesses: v.witnesses.into_iter().map(name).collect(),
            }),
            elements: Vec::new(),
            critical: Vec::new(),
            both_directions: Vec::new(),
        });
    }
    let cls = classify(poset, f)?;
    let elements = cls
        .verdicts()
        .iter()
        .enumerate()
        .map(|(b, v)| match *v {
            Verdict::Critical => ElementVerdict {
                element: name(b),
                critical: true,
                witness: None,
                direction: None,
            },
            Verdict::Ordinary { witness, direction } => ElementVerdict {
                element: name(b),
                critical: false,
                witness: Some(name(witness)),
                direction: Some(direction_str(direction)),
            },
        })
        .collect();
    let both = check_exclusivity(poset, f)?;
    Ok(ClassifyReport {
        valid: true,
        violation: None,
        elements,
        critical: cls.critical_set().into_iter().map(name).collect(),
        both_directions: both
            .both_directions
            .into_iter()
            .map(|(b, lo, hi)| BothDirections {
                element: name(b),
                below: name(lo),
                above: name(hi),
            })
            .collect(),
    })
}

fn cmd_classify(cfg: &RunConfig, poset: &Poset, f: &MorseFunction) -> Result<Outcome, CliError> {
    let report = classify_report(poset, f)?;
    let code = if report.valid { 0 } else { 2 };
    let output = match cfg.format {
        Format::Text => {
            let mut s = String::new();
            if let Some(v) = &report.violation {
                writeln!(
                    s,
                    "not a discrete Morse function: {} has {} non-increasing covers {}: {}",
                    v.element,
                    v.witnesses.len(),
                    v.direction,
                    v.witnesses.join(", ")
                )
                .unwrap();
            }
            for e in &report.elements {
                match (&e.witness, e.direction) {
                    (Some(w), Some(d)) => writeln!(s, "{}: ordinary ({d} via {w})", e.element).unwrap(),
                    _ => writeln!(s, "{}: critical", e.element).unwrap(),
                }
            }
            for b in &report.both_directions {
                writeln!(
                    s,
                    "{} is ordinary both below ({}) and above ({})",
                    b.element, b.below, b.above
                )
                .unwrap();
            }
            s
        }
        _ => json(&report),
    };
    Ok(Outcome { output, code })
}

#[derive(Debug, Serialize)]
pub struct StageDoc {
    pub name: &'static str,
    pub modified: Vec<String>,
}

/// Readable back as a `--morse` file: the extra keys are ignored on input.
#[derive(Debug, Serialize)]
pub struct NormalizeReport {
    pub values: std::collections::BTreeMap<String, String>,
    pub linear_extension: Vec<String>,
    pub stages: Vec<StageDoc>,
}

fn cmd_normalize(cfg: &RunConfig, poset: &Poset, f: &MorseFunction) -> Result<Outcome, CliError> {
    let trace = normalize_traced(poset, f, NormalizeOptions::default())?;
    let name = |i: &usize| poset.id(*i).to_string();
    let report = NormalizeReport {
        values: trace.result().to_doc(poset).values,
        linear_extension: trace.linear_extension.iter().map(name).collect(),
        stages: trace
            .stages
            .iter()
            .skip(1)
            .map(|s| StageDoc {
                name: s.name,
                modified: s.modified.iter().map(name).collect(),
            })
            .collect(),
    };
    match cfg.format {
        Format::Text => {
            let mut s = String::new();
            for st in &report.stages {
                writeln!(
                    s,
                    "{}: {} changed {}",
                    st.name,
                    st.modified.len(),
                    st.modified.join(" ")
                )
                .unwrap();
            }
            for (k, v) in &report.values {
                writeln!(s, "{k} = {v}").unwrap();
            }
            ok(s)
        }
        _ => ok(json(&report)),
    }
}

fn index_text(report: &IndexReport) -> String {
    let mut s = String::new();
    for e in &report.elements {
        let kind = if e.critical { "critical" } else { "ordinary" };
        writeln!(
            s,
            "{}: index {} (predicted {}, {kind})",
            e.element, e.computed, e.predicted
        )
        .unwrap();
    }
    let t = &report.totals;
    writeln!(s, "sum {} = chi {}; N0 {} N1 {}", t.sum, t.chi, t.n0, t.n1).unwrap();
    s
}

fn cmd_index(cfg: &RunConfig, poset: &Poset, f: &MorseFunction) -> Result<Outcome, CliError> {
    let v = verify_representation(poset, f)?;
    match cfg.format {
        Format::Text => ok(index_text(&v.report)),
        _ => ok(json(&v.report)),
    }
}

fn cmd_embed(cfg: &RunConfig, poset: &Poset, f: &MorseFunction) -> Result<Outcome, CliError> {
    let trace = normalize_traced(poset, f, NormalizeOptions::default())?;
    let emb = embed_vertices(poset, trace.result())?;
    match cfg.format {
        Format::Csv | Format::Text => ok(emb.to_csv()),
        Format::Json => ok(json(&emb.to_doc())),
    }
}

#[derive(Debug, Serialize)]
pub struct EmbeddingSummary {
    pub dimension: usize,
    pub difference_rank: usize,
    pub affinely_independent: bool,
    pub heights_match: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    #[serde(flatten)]
    pub report: IndexReport,
    pub embedding: EmbeddingSummary,
    pub cross_check: CrossCheck,
    pub normalized: std::collections::BTreeMap<String, String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.cross_check.agrees() && self.embedding.affinely_independent && self.embedding.heights_match
    }
}

/// Normalize, index combinatorially, embed, index geometrically, compare.
pub fn verify_report(poset: &Poset, f: &MorseFunction) -> Result<VerifyReport, CliError> {
    let v = verify_representation(poset, f)?;
    let g = &v.normalized;
    let emb = embed_vertices(poset, g)?;
    let embedding = EmbeddingSummary {
        dimension: emb.dimension(),
        difference_rank: emb.difference_rank(),
        affinely_independent: emb.is_affinely_independent(),
        heights_match: (0..poset.len()).all(|b| emb.height(b) == g.get(b)),
    };
    let cross_check = cross_check(poset, g)?;
    Ok(VerifyReport {
        report: v.report,
        embedding,
        cross_check,
        normalized: g.to_doc(poset).values,
    })
}

fn cmd_verify(cfg: &RunConfig, poset: &Poset, f: &MorseFunction) -> Result<Outcome, CliError> {
    let report = verify_report(poset, f)?;
    let code = if report.passed() { 0 } else { 1 };
    let output = match cfg.format {
        Format::Text => {
            let mut s = index_text(&report.report);
            let e = &report.embedding;
            writeln!(
                s,
                "embedding in dimension {}: difference rank {}, heights {}",
                e.dimension,
                e.difference_rank,
                if e.heights_match { "match" } else { "DIFFER" }
            )
            .unwrap();
            match &report.cross_check.first_mismatch {
                None => writeln!(s, "geometric indices agree").unwrap(),
                Some(m) => writeln!(
                    s,
                    "geometric index of {} is {}, combinatorial {}",
                    m.element, m.geometric, m.combinatorial
                )
                .unwrap(),
            }
            s
        }
        _ => json(&report),
    };
    Ok(Outcome { output, code })
}

#[derive(Debug, Serialize)]
pub struct EulerReport {
    /// Of the order complex.
    pub chi: i64,
    pub f_vector: Vec<usize>,
    /// Alternating count of the elements by rank, when there is a rank function.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cell_chi: Option<i64>,
    /// Critical elements by rank for the given (or rank) function.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub morse: Option<MorseInequalityReport>,
}

fn cmd_euler(cfg: &RunConfig, loaded: &Loaded, morse: Option<&str>) -> Result<Outcome, CliError> {
    let k = order_complex(&loaded.poset);
    // Without an explicit function, the rank-function counts are only
    // reported when the poset satisfies the hypotheses they are checked under.
    let morse_report = match &loaded.rank {
        Some(rank) if morse.is_some() || check_properties(&loaded.poset).all_hold() => {
            let f = loaded.morse(morse)?;
            Some(morse_inequality_report(&loaded.poset, rank, &f)?)
        }
        None if morse.is_some() => return Err(CliError::input("critical counts by rank need a graded poset")),
        _ => None,
    };
    let report = EulerReport {
        chi: euler_characteristic(&k),
        f_vector: k.f_vector(),
        cell_chi: loaded.rank.as_ref().map(cw_ingest::cell_euler_characteristic),
        morse: morse_report,
    };
    match cfg.format {
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "chi = {} (f-vector {:?})", report.chi, report.f_vector).unwrap();
            if let Some(c) = report.cell_chi {
                writeln!(s, "alternating element count by rank = {c}").unwrap();
            }
            if let Some(m) = &report.morse {
                writeln!(
                    s,
                    "critical by rank {:?}, alternating sum {}",
                    m.counts, m.alternating_sum
                )
                .unwrap();
            }
            ok(s)
        }
        _ => ok(json(&report)),
    }
}

fn cmd_gen_complex(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.gen_params;
    if p.n_vertices == 0 || !(0.0..=1.0).contains(&p.density) {
        return Err(CliError::input("need --vertices >= 1 and --density in [0, 1]"));
    }
    ok(json(&gen_complex(cfg.seed, p)))
}

fn cmd_gen_morse(cfg: &RunConfig, loaded: &Loaded) -> Result<Outcome, CliError> {
    if loaded.poset.is_empty() {
        return Err(Error::EmptyPoset.into());
    }
    let f = gen_morse(cfg.seed, &loaded.poset);
    ok(json(&f.to_doc(&loaded.poset)))
}

/// Serializes a poset the way `--in` expects it.
pub fn poset_json(poset: &Poset) -> String {
    json(&poset.to_doc())
}
