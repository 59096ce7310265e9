//! The JSON system file, the analysis report formats, and text rendering.

use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::contextuality::{AnalysisReport, ConnectionReport, PairDelta};
use crate::error::{Error, Result};
use crate::lp::Witness;
use crate::rational::{format_decimal, format_exact, parse_rational, Rational};
use crate::system::{validate_system, Cell, ContentId, ContextBlock, OutcomeSet, SystemSpec, ValidatedSystem};

/// Digits shown in decimal renderings.
pub const DECIMAL_DIGITS: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub contents: Vec<ContentEntry>,
    pub contexts: Vec<ContextEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContentEntry {
    pub id: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextEntry {
    pub id: String,
    pub contents: Vec<String>,
    pub distribution: Vec<CellEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellEntry {
    pub outcomes: Vec<String>,
    pub p: ProbabilityText,
}

/// `"num/den"` or an exact decimal; bare JSON numbers are read by their literal text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbabilityText {
    Text(String),
    Number(serde_json::Number),
}

impl ProbabilityText {
    fn value(&self) -> Result<Rational> {
        match self {
            Self::Text(s) => parse_rational(s),
            Self::Number(n) => parse_rational(&n.to_string()),
        }
    }
}

impl SystemFile {
    pub fn to_spec(&self) -> Result<SystemSpec> {
        let contents = self
            .contents
            .iter()
            .map(|c| (ContentId::new(c.id.clone()), OutcomeSet::new(c.values.clone())))
            .collect();
        let contexts = self
            .contexts
            .iter()
            .map(|c| {
                Ok(ContextBlock {
                    context: c.id.clone().into(),
                    contents: c.contents.iter().cloned().map(ContentId::new).collect(),
                    distribution: c
                        .distribution
                        .iter()
                        .map(|cell| {
                            Ok(Cell {
                                outcomes: cell.outcomes.clone(),
                                p: cell.p.value()?,
                            })
                        })
                        .collect::<Result<_>>()?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(SystemSpec { contents, contexts })
    }

    pub fn from_spec(spec: &SystemSpec) -> Self {
        Self {
            contents: spec
                .contents
                .iter()
                .map(|(id, set)| ContentEntry {
                    id: id.to_string(),
                    values: set.values().to_vec(),
                })
                .collect(),
            contexts: spec
                .contexts
                .iter()
                .map(|b| ContextEntry {
                    id: b.context.to_string(),
                    contents: b.contents.iter().map(ToString::to_string).collect(),
                    distribution: b
                        .distribution
                        .iter()
                        .map(|cell| CellEntry {
                            outcomes: cell.outcomes.clone(),
                            p: ProbabilityText::Text(format_exact(&cell.p)),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

fn in_file(path: &str, e: Error) -> Error {
    match e {
        Error::Syntax { .. } | Error::InFile { .. } | Error::Io { .. } => e,
        other => Error::InFile {
            path: path.to_string(),
            source: Box::new(other),
        },
    }
}

/// Parses and validates a system document; `origin` names it in errors.
pub fn parse_system_str(text: &str, origin: &str) -> Result<ValidatedSystem> {
    let file: SystemFile = serde_json::from_str(text).map_err(|e| Error::Syntax {
        path: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let spec = file.to_spec().map_err(|e| in_file(origin, e))?;
    validate_system(&spec).map_err(|e| in_file(origin, e))
}

/// Reads text from `path`, or from standard input when `path` is `-`.
pub fn read_input(path: &Path) -> Result<String> {
    let name = path.display().to_string();
    let io_err = |e: std::io::Error| Error::Io {
        path: name.clone(),
        message: e.to_string(),
    };
    if name == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(io_err)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(io_err)
    }
}

pub fn parse_system(path: &Path) -> Result<ValidatedSystem> {
    let text = read_input(path)?;
    parse_system_str(&text, &path.display().to_string())
}

pub fn system_to_json(spec: &SystemSpec) -> String {
    serde_json::to_string_pretty(&SystemFile::from_spec(spec)).expect("plain data serializes")
}

/// An exact rational with its decimal rendering; only `exact` is read back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactValue {
    pub exact: String,
    pub decimal: String,
}

impl From<&Rational> for ExactValue {
    fn from(r: &Rational) -> Self {
        Self {
            exact: format_exact(r),
            decimal: format_decimal(r, DECIMAL_DIGITS),
        }
    }
}

impl ExactValue {
    pub fn value(&self) -> Result<Rational> {
        parse_rational(&self.exact)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairEntry {
    pub contexts: [String; 2],
    pub delta: ExactValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionEntry {
    pub content: String,
    pub consistent: bool,
    pub pairs: Vec<PairEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomEntry {
    pub outcomes: Vec<String>,
    pub weight: ExactValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub variables: Vec<String>,
    pub atoms: Vec<AtomEntry>,
}

/// JSON form of an [`AnalysisReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub verdict: String,
    pub contextual: bool,
    pub consistent: bool,
    pub deterministic: bool,
    pub connections: Vec<ConnectionEntry>,
    pub delta_sum: ExactValue,
    pub system_delta: ExactValue,
    pub cnt: ExactValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessEntry>,
}

pub fn verdict(report: &AnalysisReport) -> &'static str {
    if report.contextual {
        "contextual"
    } else {
        "noncontextual"
    }
}

impl ReportFile {
    pub fn from_report(report: &AnalysisReport, include_witness: bool) -> Self {
        Self {
            verdict: verdict(report).to_string(),
            contextual: report.contextual,
            consistent: report.consistent,
            deterministic: report.deterministic,
            connections: report
                .connections
                .iter()
                .map(|c| ConnectionEntry {
                    content: c.content.to_string(),
                    consistent: c.consistent,
                    pairs: c
                        .pairs
                        .iter()
                        .map(|p| PairEntry {
                            contexts: [p.first.to_string(), p.second.to_string()],
                            delta: (&p.delta).into(),
                        })
                        .collect(),
                })
                .collect(),
            delta_sum: (&report.delta_sum).into(),
            system_delta: (&report.system_delta).into(),
            cnt: (&report.cnt).into(),
            witness: include_witness.then(|| WitnessEntry {
                variables: report.witness.variables.clone(),
                atoms: report
                    .witness
                    .atoms
                    .iter()
                    .map(|(o, w)| AtomEntry {
                        outcomes: o.clone(),
                        weight: w.into(),
                    })
                    .collect(),
            }),
        }
    }

    /// Rebuilds the report; an omitted witness comes back empty.
    pub fn to_report(&self) -> Result<AnalysisReport> {
        let connections = self
            .connections
            .iter()
            .map(|c| {
                Ok(ConnectionReport {
                    content: c.content.clone().into(),
                    consistent: c.consistent,
                    pairs: c
                        .pairs
                        .iter()
                        .map(|p| {
                            Ok(PairDelta {
                                first: p.contexts[0].clone().into(),
                                second: p.contexts[1].clone().into(),
                                delta: p.delta.value()?,
                            })
                        })
                        .collect::<Result<_>>()?,
                })
            })
            .collect::<Result<_>>()?;
        let witness = match &self.witness {
            Some(w) => Witness {
                variables: w.variables.clone(),
                atoms: w
                    .atoms
                    .iter()
                    .map(|a| Ok((a.outcomes.clone(), a.weight.value()?)))
                    .collect::<Result<_>>()?,
            },
            None => Witness {
                variables: Vec::new(),
                atoms: Vec::new(),
            },
        };
        Ok(AnalysisReport {
            connections,
            delta_sum: self.delta_sum.value()?,
            system_delta: self.system_delta.value()?,
            cnt: self.cnt.value()?,
            contextual: self.contextual,
            consistent: self.consistent,
            deterministic: self.deterministic,
            witness,
        })
    }
}

pub fn report_to_json(report: &AnalysisReport, include_witness: bool) -> String {
    serde_json::to_string_pretty(&ReportFile::from_report(report, include_witness))
        .expect("plain data serializes")
}

pub fn report_from_json(text: &str) -> Result<AnalysisReport> {
    let file: ReportFile = serde_json::from_str(text).map_err(|e| Error::Syntax {
        path: "<report>".to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.to_report()
}

fn show(r: &Rational) -> String {
    format!("{} ({})", format_exact(r), format_decimal(r, DECIMAL_DIGITS))
}

/// Plain-text report.
pub fn render_text(report: &AnalysisReport, include_witness: bool) -> String {
    let mut out = String::new();
    out.push_str("connections:\n");
    for c in &report.connections {
        let tag = if c.pairs.is_empty() {
            "single context"
        } else if c.consistent {
            "consistent"
        } else {
            "inconsistent"
        };
        let _ = writeln!(out, "  {} [{}]", c.content, tag);
        for p in &c.pairs {
            let _ = writeln!(out, "    delta({}, {}) = {}", p.first, p.second, show(&p.delta));
        }
    }
    let _ = writeln!(
        out,
        "consistently connected: {}",
        if report.consistent { "yes" } else { "no" }
    );
    let _ = writeln!(out, "sum of isolated deltas: {}", show(&report.delta_sum));
    let _ = writeln!(out, "system delta:           {}", show(&report.system_delta));
    let _ = writeln!(out, "CNT:                    {}", show(&report.cnt));
    let how = if report.deterministic {
        " (deterministic fast path)"
    } else {
        ""
    };
    let _ = writeln!(out, "verdict: {}{}", verdict(report), how);
    if include_witness {
        let _ = writeln!(out, "witness coupling over [{}]:", report.witness.variables.join(", "));
        for (outcomes, w) in &report.witness.atoms {
            let _ = writeln!(out, "  ({}) {}", outcomes.join(", "), show(w));
        }
    }
    out
}
