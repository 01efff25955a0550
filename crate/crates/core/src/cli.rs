//! Pipelines behind the command-line front end. Every artifact starts with
//! a header carrying the library version and the run configuration, and is
//! written under a `.partial` name that is renamed once complete.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use crate::field::{Fp, Rational, Scalar};
use crate::presentation::{parse_presentation, validate_gentle};
use crate::repetitive::{RVertex, Repetitive};
use crate::stable::{
    ar_triangle_from_sequence, check_ar_axioms, verify_shape_table, ShapeFinding, Universe,
};
use crate::strings::{ar_sequence, enumerate_strings, export_dot, knit_component, string_module, StringWord};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXAMPLE4: &str = include_str!("../data/example4.quiver");
const EXAMPLE4_GOLDEN: &str = include_str!("../golden/example4.tsv");

/// The four triangles of the worked example, by start word.
pub const EXAMPLE4_TRIANGLES: [(&str, &str); 4] = [
    ("i", "t_0^-1 ahat_0"),
    ("ii", "ahat_0"),
    ("iii-a", "l_1 b_1 t_1"),
    ("iii-b", "e_1_0"),
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("input: {0}")]
    Input(String),
    #[error("compute: {0}")]
    Compute(String),
    #[error("check: {0}")]
    Check(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Repetitive,
    Strings,
    Ar,
    Knit,
    Triangles,
    Example4,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Repetitive => "repetitive",
            Command::Strings => "strings",
            Command::Ar => "ar",
            Command::Knit => "knit",
            Command::Triangles => "triangles",
            Command::Example4 => "example4",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    /// Presentation file; `example4` uses the shipped one when absent.
    pub input: Option<PathBuf>,
    pub window: (i64, i64),
    pub max_len: usize,
    pub universe_dim: Option<usize>,
    pub out: Option<PathBuf>,
    pub characteristic: u64,
    pub seed: Option<String>,
    pub steps: usize,
    pub check: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            input: None,
            window: (-1, 2),
            max_len: 4,
            universe_dim: None,
            out: None,
            characteristic: 0,
            seed: None,
            steps: 30,
            check: false,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let (lo, hi) = self.window;
        if hi - lo + 1 < 3 {
            return Err(CliError::Config(format!("window [{lo}, {hi}] spans fewer than 3 degrees")));
        }
        if !SUPPORTED_CHARACTERISTICS.contains(&self.characteristic) {
            return Err(CliError::Config(format!(
                "characteristic {} is not one of {SUPPORTED_CHARACTERISTICS:?}",
                self.characteristic
            )));
        }
        Ok(())
    }

    /// One-line rendering embedded in every artifact.
    pub fn summary(&self) -> String {
        let opt = |o: Option<String>| o.unwrap_or_else(|| "-".into());
        format!(
            "command={} input={} window={},{} max_len={} universe_dim={} char={} seed={} steps={}",
            self.command.name(),
            opt(self.input.as_ref().map(|p| p.display().to_string())),
            self.window.0,
            self.window.1,
            self.max_len,
            opt(self.universe_dim.map(|d| d.to_string())),
            self.characteristic,
            opt(self.seed.clone()),
            self.steps,
        )
    }

    fn header(&self) -> String {
        format!("# rephat {VERSION}\n# {}\n", self.summary())
    }
}

pub const SUPPORTED_CHARACTERISTICS: [u64; 6] = [0, 2, 3, 5, 7, 101];

/// Result of a run: the text printed to stdout, artifacts as
/// `(file name, contents)`, and whether a theorem violation was found.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub artifacts: Vec<(String, String)>,
    pub violations: usize,
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let outcome = match config.characteristic {
        0 => run_in::<Rational>(config),
        2 => run_in::<Fp<2>>(config),
        3 => run_in::<Fp<3>>(config),
        5 => run_in::<Fp<5>>(config),
        7 => run_in::<Fp<7>>(config),
        _ => run_in::<Fp<101>>(config),
    }?;
    if let Some(dir) = &config.out {
        write_artifacts(dir, &outcome.artifacts)?;
    }
    Ok(outcome)
}

fn write_artifacts(dir: &Path, artifacts: &[(String, String)]) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    for (name, text) in artifacts {
        let partial = dir.join(format!("{name}.partial"));
        fs::write(&partial, text)?;
        fs::rename(&partial, dir.join(name))?;
    }
    Ok(())
}

fn load_source(config: &RunConfig) -> Result<String, CliError> {
    match &config.input {
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None if config.command == Command::Example4 => Ok(EXAMPLE4.to_string()),
        None => Err(CliError::Config("an input presentation is required".into())),
    }
}

fn load(config: &RunConfig) -> Result<Arc<Repetitive>, CliError> {
    let pres = parse_presentation(&load_source(config)?).map_err(|e| CliError::Input(e.to_string()))?;
    Repetitive::new(pres).map_err(|e| CliError::Input(e.to_string()))
}

fn seed_word(rep: &Repetitive, config: &RunConfig) -> Result<StringWord, CliError> {
    match &config.seed {
        Some(s) => StringWord::parse(rep, s).map_err(|e| CliError::Input(e.to_string())),
        None => Ok(StringWord::trivial(RVertex {
            z: config.window.0 + 1,
            v: 0,
        })),
    }
}

fn universe<F: Scalar>(rep: &Arc<Repetitive>, config: &RunConfig) -> Universe<F> {
    Universe::strings(rep, config.window.0, config.window.1, config.max_len, config.universe_dim)
}

fn run_in<F: Scalar>(config: &RunConfig) -> Result<Outcome, CliError> {
    match config.command {
        Command::Validate => validate(config),
        Command::Repetitive => repetitive(config),
        Command::Strings => strings::<F>(config),
        Command::Ar => ar::<F>(config),
        Command::Knit => knit::<F>(config),
        Command::Triangles => triangles::<F>(config),
        Command::Example4 => example4::<F>(config),
    }
}

fn validate(config: &RunConfig) -> Result<Outcome, CliError> {
    let pres = parse_presentation(&load_source(config)?).map_err(|e| CliError::Input(e.to_string()))?;
    let report = validate_gentle(&pres);
    let mut text = String::new();
    if report.is_gentle() {
        text.push_str("gentle: yes\n");
    } else {
        text.push_str("gentle: no\n");
        for v in &report.violations {
            let _ = writeln!(text, "violation: {v}");
        }
    }
    Ok(Outcome {
        artifacts: vec![("validate.txt".into(), config.header() + &text)],
        stdout: text,
        violations: 0,
    })
}

fn repetitive(config: &RunConfig) -> Result<Outcome, CliError> {
    let rep = load(config)?;
    let win = rep
        .window(config.window.0, config.window.1)
        .map_err(|e| CliError::Compute(e.to_string()))?;
    let (dsl, degrees) = win.serialize();
    Ok(Outcome {
        stdout: format!(
            "window [{}, {}]: {} vertices, {} arrows\n",
            config.window.0,
            config.window.1,
            win.vertices().len(),
            win.arrows().len()
        ),
        artifacts: vec![
            ("window.quiver".into(), config.header() + &dsl),
            ("degrees.txt".into(), config.header() + &degrees),
        ],
        violations: 0,
    })
}

fn dims_of<F: Scalar>(rep: &Arc<Repetitive>, w: &StringWord) -> String {
    let m = string_module::<F>(rep, w);
    m.degree_dims()
        .iter()
        .map(|(z, d)| format!("{z}:{d}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn strings<F: Scalar>(config: &RunConfig) -> Result<Outcome, CliError> {
    let rep = load(config)?;
    let words = enumerate_strings(&rep, config.window.0, config.window.1, config.max_len);
    let mut text = String::from("word\tlength\tdegree_dims\n");
    for w in &words {
        let _ = writeln!(text, "{}\t{}\t{}", w.display(&rep), w.len(), dims_of::<F>(&rep, w));
    }
    Ok(Outcome {
        stdout: format!("{} strings\n", words.len()),
        artifacts: vec![("strings.tsv".into(), config.header() + &text)],
        violations: 0,
    })
}

fn ar<F: Scalar>(config: &RunConfig) -> Result<Outcome, CliError> {
    let rep = load(config)?;
    let w = seed_word(&rep, config)?;
    let seq = ar_sequence::<F>(&rep, &w).map_err(|e| CliError::Compute(e.to_string()))?;
    let uni: Vec<_> = universe::<F>(&rep, config).modules.into_iter().map(|(_, m)| m).collect();
    let report = check_ar_axioms(&seq.h, &seq.h2, &uni).map_err(|e| CliError::Compute(e.to_string()))?;
    let mut text = String::new();
    let _ = writeln!(text, "start\t{}", seq.start.display(&rep));
    for m in &seq.middle_words {
        let _ = writeln!(text, "middle\t{}", m.display(&rep));
    }
    if let Some(y) = seq.projective {
        let _ = writeln!(text, "middle\tP({})", rep.vertex_name(y));
    }
    let _ = writeln!(text, "end\t{}", seq.end.display(&rep));
    for (k, v) in [
        ("exact", report.exact),
        ("non_split", report.non_split),
        ("ARS1", report.ars1),
        ("ARS2", report.ars2),
        ("ART1", report.art1),
        ("ART2", report.art2),
        ("ART3", report.art3),
        ("ART3*", report.art3_star),
    ] {
        let _ = writeln!(text, "{k}\t{}", if v { "pass" } else { "fail" });
    }
    let _ = writeln!(text, "universe\t{}", report.universe_size);
    let violations = usize::from(!report.all_pass());
    Ok(Outcome {
        artifacts: vec![
            ("ar.tsv".into(), config.header() + &text),
            ("h.morphism".into(), config.header() + &seq.h.to_text()),
            ("h2.morphism".into(), config.header() + &seq.h2.to_text()),
        ],
        stdout: text,
        violations,
    })
}

fn knit<F: Scalar>(config: &RunConfig) -> Result<Outcome, CliError> {
    let rep = load(config)?;
    let seed = seed_word(&rep, config)?;
    let uni = universe::<F>(&rep, config);
    let c = knit_component(&rep, &seed, config.window, config.steps, Some(&uni))
        .map_err(|e| CliError::Compute(e.to_string()))?;
    let (mouth, bad) = c.valency_report();
    let mut meshes = String::from("mesh\tstart\tmiddle\tprojective\tend\n");
    for (i, m) in c.meshes.iter().enumerate() {
        let mid: Vec<String> = m.middle.iter().map(|w| w.display(&rep)).collect();
        let _ = writeln!(
            meshes,
            "{i}\t{}\t{}\t{}\t{}",
            m.start.display(&rep),
            mid.join(" + "),
            m.projective.map_or("-".into(), |y| rep.vertex_name(y)),
            m.end.display(&rep)
        );
    }
    let unlabeled = c
        .edges
        .iter()
        .filter(|e| matches!(e.class, Err(_) | Ok(crate::stable::IrredClass::NotIrreducible(_))))
        .count();
    let violations = bad.len() + c.conflicts.len() + unlabeled;
    let stdout = format!(
        "{} nodes, {} meshes, {} edges, {} mouth nodes, {} valency violations\n",
        c.nodes.len(),
        c.meshes.len(),
        c.edges.len(),
        mouth,
        bad.len()
    );
    let dot = format!("// rephat {VERSION}\n// {}\n{}", config.summary(), export_dot(&rep, &c));
    Ok(Outcome {
        stdout,
        artifacts: vec![
            ("component.dot".into(), dot),
            ("meshes.tsv".into(), config.header() + &meshes),
            ("edges.txt".into(), config.header() + &c.table(&rep)),
        ],
        violations,
    })
}

const FINDING_HEADER: &str =
    "id\tstart\tend\tclass_h\tclass_h2\tclause\tprojective\thom_simple\twindow\tuniverse_dim\tstatus\n";

fn finding_line(
    id: &str,
    rep: &Repetitive,
    start: &StringWord,
    end: &StringWord,
    f: &ShapeFinding,
    config: &RunConfig,
) -> String {
    let class = |c: &Option<crate::stable::IrredClass>| c.as_ref().map_or("-".into(), |c| c.to_string());
    format!(
        "{id}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{},{}\t{}\t{}\n",
        start.display(rep),
        end.display(rep),
        class(&f.class_h),
        class(&f.class_h2),
        f.clause,
        if f.projective { "yes" } else { "no" },
        f.hom_simple.map_or("-".into(), |b| if b { "yes".to_string() } else { "no".to_string() }),
        config.window.0,
        config.window.1,
        config.universe_dim.map_or("auto".into(), |d| d.to_string()),
        f.violation.as_deref().unwrap_or("ok"),
    )
}

fn triangle_finding<F: Scalar>(
    rep: &Arc<Repetitive>,
    w: &StringWord,
    uni: &Universe<F>,
) -> Result<(StringWord, ShapeFinding), CliError> {
    let seq = ar_sequence::<F>(rep, w).map_err(|e| CliError::Compute(e.to_string()))?;
    let tri = ar_triangle_from_sequence(&seq.h, &seq.h2, &[]).map_err(|e| CliError::Compute(e.to_string()))?;
    Ok((seq.end.canonical(rep), verify_shape_table(&tri, Some(uni))))
}

fn triangles<F: Scalar>(config: &RunConfig) -> Result<Outcome, CliError> {
    let rep = load(config)?;
    let seed = seed_word(&rep, config)?;
    let uni = universe::<F>(&rep, config);
    let c = knit_component::<F>(&rep, &seed, config.window, config.steps, None)
        .map_err(|e| CliError::Compute(e.to_string()))?;
    let mut text = String::from(FINDING_HEADER);
    let mut violations = 0;
    let mut counts = std::collections::BTreeMap::new();
    for (i, m) in c.meshes.iter().enumerate() {
        let (end, f) = triangle_finding(&rep, &m.start, &uni)?;
        violations += usize::from(!f.ok());
        *counts.entry(f.clause.clone()).or_insert(0usize) += 1;
        text.push_str(&finding_line(&i.to_string(), &rep, &m.start, &end, &f, config));
    }
    let mut stdout = format!("{} triangles, {} violations\n", c.meshes.len(), violations);
    for (k, n) in counts {
        let _ = writeln!(stdout, "clause {k}: {n}");
    }
    Ok(Outcome {
        stdout,
        artifacts: vec![("triangles.tsv".into(), config.header() + &text)],
        violations,
    })
}

/// Findings for the four worked triangles, without the header.
pub fn example4_findings<F: Scalar>(rep: &Arc<Repetitive>, config: &RunConfig) -> Result<String, CliError> {
    let uni = universe::<F>(rep, config);
    let mut text = String::from(FINDING_HEADER);
    for (id, start) in EXAMPLE4_TRIANGLES {
        let w = StringWord::parse(rep, start).map_err(|e| CliError::Input(e.to_string()))?;
        let (end, f) = triangle_finding(rep, &w, &uni)?;
        text.push_str(&finding_line(id, rep, &w, &end, &f, config));
    }
    Ok(text)
}

fn example4<F: Scalar>(config: &RunConfig) -> Result<Outcome, CliError> {
    let rep = load(config)?;
    let text = example4_findings::<F>(&rep, config)?;
    let mut violations = 0;
    let mut stdout = String::new();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split('\t').collect();
        let ok = cols[0] == cols[5] && cols[10] == "ok";
        violations += usize::from(!ok);
        let _ = writeln!(
            stdout,
            "({}) {} -> {}: {}, {} => {}",
            cols[0], cols[1], cols[2], cols[3], cols[4],
            if ok { "verified" } else { "MISMATCH" }
        );
    }
    if config.check {
        // window and universe columns depend on the configuration
        let key = |l: &str| {
            let cols: Vec<&str> = l.split('\t').collect();
            [&cols[..8], &cols[10..]].concat().join("\t")
        };
        let expected: Vec<String> = EXAMPLE4_GOLDEN.lines().filter(|l| !l.starts_with('#')).map(key).collect();
        let got: Vec<String> = text.lines().map(key).collect();
        if expected != got {
            return Err(CliError::Check("example4 findings differ from the golden file".into()));
        }
        stdout.push_str("golden: match\n");
    }
    Ok(Outcome {
        stdout,
        artifacts: vec![("example4.tsv".into(), config.header() + &text)],
        violations,
    })
}
